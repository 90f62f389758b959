//! Parametric families: the evaluation contract plus the built-in
//! distributions (joined uniform, translation kinds, |x| composites,
//! reciprocals and composite-reduced wrappers).

use crate::error::Error;
use crate::real::Real;
use crate::special::{evd_cdf, evd_pdf, norm_cdf, norm_pdf};

/// Unbounded domains are truncated where the base CDF is within this of 0/1.
pub const EPS_TAIL: f64 = 1e-6;

/// Hint for how the CDF moves with the parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionHint {
    Increasing,
    Decreasing,
    Unknown,
}

/// Mathematical domain of one axis; `None` means unbounded on that side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval<T> {
    pub lo: Option<T>,
    pub hi: Option<T>,
}

impl<T: Real> Interval<T> {
    pub fn unbounded() -> Self {
        Interval { lo: None, hi: None }
    }

    pub fn from_lo(lo: T) -> Self {
        Interval { lo: Some(lo), hi: None }
    }

    pub fn contains(&self, v: T) -> bool {
        self.lo.is_none_or(|lo| v >= lo) && self.hi.is_none_or(|hi| v <= hi)
    }

    pub fn lo_or_neg_inf(&self) -> T {
        self.lo.unwrap_or_else(T::neg_infinity)
    }

    pub fn hi_or_inf(&self) -> T {
        self.hi.unwrap_or_else(T::infinity)
    }
}

/// Finite evaluation window recorded at construction (domain truncation).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window<T> {
    pub lo: T,
    pub hi: T,
}

/// Evaluation contract every family satisfies: a CDF in `x` for each
/// parameter value, continuous in the parameter, with recorded domains and
/// truncation windows. Implementations are immutable and evaluation is pure.
pub trait ParametricFamily<T: Real> {
    /// F_r(x | theta). Total on the plane: values outside the support clamp
    /// exactly to 0/1 so grid code never sees out-of-range probabilities.
    fn cdf(&self, x: T, theta: T) -> T;

    /// Density in `x` when available in closed form.
    fn density(&self, _x: T, _theta: T) -> Option<T> {
        None
    }

    /// Analytic partial derivative of the CDF in the parameter, if available.
    fn cdf_dtheta(&self, _x: T, _theta: T) -> Option<T> {
        None
    }

    /// Base density f*(u) for families of the form F*(x + theta).
    fn pivot_density(&self, _u: T) -> Option<T> {
        None
    }

    fn x_domain(&self) -> Interval<T>;
    fn theta_domain(&self) -> Interval<T>;

    /// Truncated finite window for grid placement on the observable axis.
    fn x_window(&self) -> Window<T>;
    /// Truncated finite window on the parameter axis.
    fn theta_window(&self) -> Window<T>;

    fn direction_hint(&self) -> DirectionHint {
        DirectionHint::Unknown
    }

    fn is_translation_pivot(&self) -> bool {
        false
    }

    fn describe(&self) -> String;
}

impl<T: Real, F: ParametricFamily<T> + ?Sized> ParametricFamily<T> for Box<F> {
    fn cdf(&self, x: T, theta: T) -> T {
        (**self).cdf(x, theta)
    }
    fn density(&self, x: T, theta: T) -> Option<T> {
        (**self).density(x, theta)
    }
    fn cdf_dtheta(&self, x: T, theta: T) -> Option<T> {
        (**self).cdf_dtheta(x, theta)
    }
    fn pivot_density(&self, u: T) -> Option<T> {
        (**self).pivot_density(u)
    }
    fn x_domain(&self) -> Interval<T> {
        (**self).x_domain()
    }
    fn theta_domain(&self) -> Interval<T> {
        (**self).theta_domain()
    }
    fn x_window(&self) -> Window<T> {
        (**self).x_window()
    }
    fn theta_window(&self) -> Window<T> {
        (**self).theta_window()
    }
    fn direction_hint(&self) -> DirectionHint {
        (**self).direction_hint()
    }
    fn is_translation_pivot(&self) -> bool {
        (**self).is_translation_pivot()
    }
    fn describe(&self) -> String {
        (**self).describe()
    }
}

/// Type-erased family handle, the form the CLI works with.
pub type DynFamily<T> = Box<dyn ParametricFamily<T> + Send + Sync>;

/// Domain-checked evaluation.
pub fn eval_cdf<T: Real>(
    family: &(impl ParametricFamily<T> + ?Sized),
    x: T,
    theta: T,
) -> Result<T, Error<T>> {
    let xd = family.x_domain();
    if !xd.contains(x) {
        return Err(Error::OutOfDomain {
            axis: "x",
            value: x,
            lo: xd.lo_or_neg_inf(),
            hi: xd.hi_or_inf(),
        });
    }
    let td = family.theta_domain();
    if !td.contains(theta) {
        return Err(Error::OutOfDomain {
            axis: "theta",
            value: theta,
            lo: td.lo_or_neg_inf(),
            hi: td.hi_or_inf(),
        });
    }
    Ok(family.cdf(x, theta))
}

/// Where a monotone CDF passes `p`, found by expanding a bracket downward /
/// upward from 0 and bisecting. Used to place truncation windows.
fn cdf_inverse_search<T: Real>(cdf: impl Fn(T) -> T, p: T) -> T {
    let mut lo = -T::one();
    let mut hi = T::one();
    let cap = T::of(1e6);
    while cdf(lo) > p && lo > -cap {
        lo *= T::two();
    }
    while cdf(hi) < p && hi < cap {
        hi *= T::two();
    }
    crate::numeric::bisect(lo, hi, T::of(1e-9), |u| cdf(u) - p)
}

// ---------------------------------------------------------------------------
// Joined uniform
// ---------------------------------------------------------------------------

/// Two uniform families with semiranges `b` (low parameters) and `a` (high
/// parameters), joined continuously across the transition interval
/// `[-theta_t, +theta_t]` by linear variation of the semirange.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JoinedUniform<T> {
    a: T,
    b: T,
    theta_t: T,
}

impl<T: Real> JoinedUniform<T> {
    pub fn new(a: T, b: T, theta_t: T) -> Result<Self, Error<T>> {
        if !(a > T::zero()) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "upper semirange a must be positive, got {a}"
            )));
        }
        if !(b > a) || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lower semirange b must exceed a, got b = {b}, a = {a}"
            )));
        }
        if !(theta_t > T::zero()) || !theta_t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta_T must be positive, got {theta_t}: with a zero-width transition no \
                 transition protocol selects a unique joining distribution, so the joined \
                 family is left indeterminate at theta = 0"
            )));
        }
        Ok(JoinedUniform { a, b, theta_t })
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn theta_t(&self) -> T {
        self.theta_t
    }

    /// Semirange in force at `theta`: `b` below the transition, `a` above it,
    /// linear in between.
    pub fn semirange(&self, theta: T) -> T {
        if theta < -self.theta_t {
            self.b
        } else if theta > self.theta_t {
            self.a
        } else {
            self.transition_semirange_unchecked(theta)
        }
    }

    fn transition_semirange_unchecked(&self, theta: T) -> T {
        let r = theta / self.theta_t;
        (self.b * (T::one() - r) + self.a * (T::one() + r)) * T::half()
    }

    /// T(theta) on the transition interval; errors outside it.
    pub fn transition_semirange(&self, theta: T) -> Result<T, Error<T>> {
        if theta < -self.theta_t || theta > self.theta_t {
            return Err(Error::OutOfDomain {
                axis: "theta",
                value: theta,
                lo: -self.theta_t,
                hi: self.theta_t,
            });
        }
        Ok(self.transition_semirange_unchecked(theta))
    }

    /// Vertex (x_T, F_T) of the conical intersection region: the common point
    /// of every transition-interval member.
    pub fn intersection_vertex(&self) -> (T, T) {
        let x_t = (self.b + self.a) / (self.b - self.a) * self.theta_t;
        let f_t = T::half() + self.theta_t / (self.b - self.a);
        (x_t, f_t)
    }
}

impl<T: Real> ParametricFamily<T> for JoinedUniform<T> {
    fn cdf(&self, x: T, theta: T) -> T {
        let s = self.semirange(theta);
        let d = x - theta;
        if d <= -s {
            T::zero()
        } else if d >= s {
            T::one()
        } else {
            T::half() + d / (T::two() * s)
        }
    }

    fn density(&self, x: T, theta: T) -> Option<T> {
        let s = self.semirange(theta);
        let d = x - theta;
        Some(if d <= -s || d >= s {
            T::zero()
        } else {
            (T::two() * s).recip()
        })
    }

    fn x_domain(&self) -> Interval<T> {
        Interval::unbounded()
    }

    fn theta_domain(&self) -> Interval<T> {
        Interval::unbounded()
    }

    fn x_window(&self) -> Window<T> {
        let (x_t, _) = self.intersection_vertex();
        let c = x_t + self.b;
        Window { lo: -c, hi: c }
    }

    fn theta_window(&self) -> Window<T> {
        let xw = self.x_window();
        Window {
            lo: xw.lo - self.b - self.theta_t,
            hi: xw.hi + self.a + self.theta_t,
        }
    }

    fn direction_hint(&self) -> DirectionHint {
        DirectionHint::Decreasing
    }

    fn describe(&self) -> String {
        format!(
            "joined_uniform(a={}, b={}, theta_T={})",
            self.a, self.b, self.theta_t
        )
    }
}

// ---------------------------------------------------------------------------
// Translation families
// ---------------------------------------------------------------------------

/// Base CDF shapes for translation families F(x + theta).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BaseKind<T> {
    /// 1 - exp(-exp(u)), left-skewed extreme-value shape.
    Evd,
    /// Standard normal.
    Normal,
    /// Symmetric density that vanishes on (-a, +a); the removed central mass
    /// is renormalized proportionally onto the two standard normal tails.
    Gapped { a: T },
}

/// Translation family: cdf(x, theta) = F*(x + theta) exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Translation<T> {
    kind: BaseKind<T>,
    window: Window<T>,
    /// cached 2 N(-a) for the gapped kind
    tail_mass: T,
}

impl<T: Real> Translation<T> {
    pub fn evd() -> Self {
        let eps = T::of(EPS_TAIL);
        // closed forms: F(u) = eps and F(u) = 1 - eps
        let lo = (-(T::one() - eps).ln()).ln();
        let hi = (-eps.ln()).ln();
        Translation {
            kind: BaseKind::Evd,
            window: Window { lo, hi },
            tail_mass: T::zero(),
        }
    }

    pub fn normal() -> Self {
        let eps = T::of(EPS_TAIL);
        let lo = cdf_inverse_search(norm_cdf, eps);
        Translation {
            kind: BaseKind::Normal,
            window: Window { lo, hi: -lo },
            tail_mass: T::zero(),
        }
    }

    pub fn gapped(a: T) -> Result<Self, Error<T>> {
        if !(a > T::zero()) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gap half-width must be positive, got {a}"
            )));
        }
        let tail_mass = T::two() * norm_cdf(-a);
        let eps = T::of(EPS_TAIL);
        let lo = cdf_inverse_search(|u| gapped_cdf(u, a, tail_mass), eps);
        Ok(Translation {
            kind: BaseKind::Gapped { a },
            window: Window { lo, hi: -lo },
            tail_mass,
        })
    }

    pub fn kind(&self) -> BaseKind<T> {
        self.kind
    }

    pub fn base_cdf(&self, u: T) -> T {
        match self.kind {
            BaseKind::Evd => evd_cdf(u),
            BaseKind::Normal => norm_cdf(u),
            BaseKind::Gapped { a } => gapped_cdf(u, a, self.tail_mass),
        }
    }

    pub fn base_pdf(&self, u: T) -> T {
        match self.kind {
            BaseKind::Evd => evd_pdf(u),
            BaseKind::Normal => norm_pdf(u),
            BaseKind::Gapped { a } => {
                if u.abs() < a {
                    T::zero()
                } else {
                    norm_pdf(u) / self.tail_mass
                }
            }
        }
    }
}

fn gapped_cdf<T: Real>(u: T, a: T, tail_mass: T) -> T {
    if u <= -a {
        norm_cdf(u) / tail_mass
    } else if u < a {
        T::half()
    } else {
        T::one() - norm_cdf(-u) / tail_mass
    }
}

impl<T: Real> ParametricFamily<T> for Translation<T> {
    fn cdf(&self, x: T, theta: T) -> T {
        self.base_cdf(x + theta)
    }

    fn density(&self, x: T, theta: T) -> Option<T> {
        Some(self.base_pdf(x + theta))
    }

    fn cdf_dtheta(&self, x: T, theta: T) -> Option<T> {
        Some(self.base_pdf(x + theta))
    }

    fn pivot_density(&self, u: T) -> Option<T> {
        Some(self.base_pdf(u))
    }

    fn x_domain(&self) -> Interval<T> {
        Interval::unbounded()
    }

    fn theta_domain(&self) -> Interval<T> {
        Interval::unbounded()
    }

    fn x_window(&self) -> Window<T> {
        self.window
    }

    fn theta_window(&self) -> Window<T> {
        // wide enough that the extreme-parameter members are 0/1 across the
        // whole x window, which keeps completeness checkable at truncation
        let span = self.window.hi - self.window.lo;
        Window { lo: -span, hi: span }
    }

    fn direction_hint(&self) -> DirectionHint {
        DirectionHint::Increasing
    }

    fn is_translation_pivot(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        match self.kind {
            BaseKind::Evd => "translation(evd)".to_string(),
            BaseKind::Normal => "translation(normal)".to_string(),
            BaseKind::Gapped { a } => format!("translation(gapped, a={a})"),
        }
    }
}

// ---------------------------------------------------------------------------
// |x| composite
// ---------------------------------------------------------------------------

/// Distribution of y = |x|: cdf*(y, theta) = F(y, theta) - F(-y, theta).
#[derive(Clone, Copy, Debug)]
pub struct AbsComposite<F> {
    inner: F,
}

impl<F> AbsComposite<F> {
    pub fn new<T: Real>(inner: F) -> Result<Self, Error<T>>
    where
        F: ParametricFamily<T>,
    {
        let xd = inner.x_domain();
        let symmetric = match (xd.lo, xd.hi) {
            (None, None) => true,
            (Some(lo), Some(hi)) => lo == -hi,
            _ => false,
        };
        if !symmetric {
            return Err(Error::UnsupportedDomain(format!(
                "|x| composite needs an x domain symmetric about 0, {} has [{}, {}]",
                inner.describe(),
                xd.lo_or_neg_inf(),
                xd.hi_or_inf()
            )));
        }
        Ok(AbsComposite { inner })
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<T: Real, F: ParametricFamily<T>> ParametricFamily<T> for AbsComposite<F> {
    fn cdf(&self, y: T, theta: T) -> T {
        if y <= T::zero() {
            T::zero()
        } else {
            self.inner.cdf(y, theta) - self.inner.cdf(-y, theta)
        }
    }

    fn density(&self, y: T, theta: T) -> Option<T> {
        if y < T::zero() {
            return Some(T::zero());
        }
        Some(self.inner.density(y, theta)? + self.inner.density(-y, theta)?)
    }

    fn cdf_dtheta(&self, y: T, theta: T) -> Option<T> {
        if y <= T::zero() {
            return Some(T::zero());
        }
        Some(self.inner.cdf_dtheta(y, theta)? - self.inner.cdf_dtheta(-y, theta)?)
    }

    fn x_domain(&self) -> Interval<T> {
        Interval {
            lo: Some(T::zero()),
            hi: self.inner.x_domain().hi,
        }
    }

    fn theta_domain(&self) -> Interval<T> {
        self.inner.theta_domain()
    }

    fn x_window(&self) -> Window<T> {
        let w = self.inner.x_window();
        Window {
            lo: T::zero(),
            hi: w.hi.abs().max(w.lo.abs()),
        }
    }

    fn theta_window(&self) -> Window<T> {
        // symmetric so +/- parameter sections pair up exactly
        let w = self.inner.theta_window();
        let c = w.hi.abs().max(w.lo.abs());
        Window { lo: -c, hi: c }
    }

    fn describe(&self) -> String {
        format!("abs_x({})", self.inner.describe())
    }
}

// ---------------------------------------------------------------------------
// Reciprocal (roles of observable and parameter interchanged)
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct Reciprocal<F> {
    inner: F,
}

impl<F> Reciprocal<F> {
    pub fn new(inner: F) -> Self {
        Reciprocal { inner }
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<T: Real, F: ParametricFamily<T>> ParametricFamily<T> for Reciprocal<F> {
    fn cdf(&self, x: T, theta: T) -> T {
        self.inner.cdf(theta, x)
    }

    fn density(&self, x: T, theta: T) -> Option<T> {
        self.inner.cdf_dtheta(theta, x)
    }

    fn cdf_dtheta(&self, x: T, theta: T) -> Option<T> {
        self.inner.density(theta, x)
    }

    fn pivot_density(&self, u: T) -> Option<T> {
        if self.inner.is_translation_pivot() {
            self.inner.pivot_density(u)
        } else {
            None
        }
    }

    fn x_domain(&self) -> Interval<T> {
        self.inner.theta_domain()
    }

    fn theta_domain(&self) -> Interval<T> {
        self.inner.x_domain()
    }

    fn x_window(&self) -> Window<T> {
        self.inner.theta_window()
    }

    fn theta_window(&self) -> Window<T> {
        self.inner.x_window()
    }

    fn direction_hint(&self) -> DirectionHint {
        // the parameter axis now carries the observable role, along which
        // every CDF is nondecreasing
        DirectionHint::Increasing
    }

    fn is_translation_pivot(&self) -> bool {
        self.inner.is_translation_pivot()
    }

    fn describe(&self) -> String {
        format!("reciprocal({})", self.inner.describe())
    }
}

// ---------------------------------------------------------------------------
// Composite-reduced wrapper (parameter re-indexed by phi = |theta|)
// ---------------------------------------------------------------------------

/// Re-indexes an |x| composite whose +/-theta members coincide by the
/// reducing parameter phi = |theta| >= 0. Produced by
/// [`crate::fiducial::composite_reduce`].
#[derive(Clone, Copy, Debug)]
pub struct CompositeReduced<F> {
    inner: F,
}

impl<F> CompositeReduced<F> {
    pub(crate) fn from_verified(inner: F) -> Self {
        CompositeReduced { inner }
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }
}

impl<F> CompositeReduced<F> {
    /// Monotone sub-unit-mass dual of the reduced members:
    /// mu(phi | y) = 1 - cdf(y, phi).
    pub fn truncated_star_fm<T: Real>(&self, phi: T, y: T) -> T
    where
        F: ParametricFamily<T>,
    {
        T::one() - self.cdf(y, phi)
    }
}

impl<T: Real, F: ParametricFamily<T>> ParametricFamily<T> for CompositeReduced<F> {
    fn cdf(&self, y: T, phi: T) -> T {
        self.inner.cdf(y, phi)
    }

    fn density(&self, y: T, phi: T) -> Option<T> {
        self.inner.density(y, phi)
    }

    fn cdf_dtheta(&self, y: T, phi: T) -> Option<T> {
        self.inner.cdf_dtheta(y, phi)
    }

    fn x_domain(&self) -> Interval<T> {
        self.inner.x_domain()
    }

    fn theta_domain(&self) -> Interval<T> {
        // phi = |theta| makes zero a hard lower endpoint of the parameter
        // domain itself, not a truncation artifact
        Interval::from_lo(T::zero())
    }

    fn x_window(&self) -> Window<T> {
        self.inner.x_window()
    }

    fn theta_window(&self) -> Window<T> {
        Window {
            lo: T::zero(),
            hi: self.inner.theta_window().hi,
        }
    }

    fn direction_hint(&self) -> DirectionHint {
        DirectionHint::Decreasing
    }

    fn describe(&self) -> String {
        format!("composite_reduced({})", self.inner.describe())
    }
}
