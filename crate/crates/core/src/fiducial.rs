//! Fiducial distributions, confidence-limit sets, signed-measure
//! decompositions and the composite-variable operations.

use serde::Serialize;

use crate::classify::{fd_existence_verdict, Direction, Tolerances};
use crate::error::Error;
use crate::families::{CompositeReduced, ParametricFamily};
use crate::numeric::{bisect, golden_max, interp};
use crate::real::Real;
use crate::surface::FiducialSurface;

const SQRT_2_OVER_PI: f64 = 0.797_884_560_802_865_4;

/// Monotone CDF over the parameter extracted from an FD surface.
#[derive(Clone, Debug, PartialEq)]
pub struct FiducialDistribution<T> {
    theta: Vec<T>,
    cdf: Vec<T>,
    direction: Direction,
    x0: T,
}

/// Quantile of a distribution that may hold plateaus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Quantile<T> {
    Point(T),
    /// The level is attained on a whole parameter interval.
    Interval(T, T),
}

impl<T: Real> FiducialDistribution<T> {
    pub fn theta_nodes(&self) -> &[T] {
        &self.theta
    }

    pub fn cdf_values(&self) -> &[T] {
        &self.cdf
    }

    /// Direction convention of the underlying section: `Increasing` means the
    /// section itself was the CDF, `Decreasing` that its complement was taken.
    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn x0(&self) -> T {
        self.x0
    }

    /// CDF value at `theta` by linear interpolation.
    pub fn cdf_at(&self, theta: T) -> T {
        interp(&self.theta, &self.cdf, theta)
    }

    /// Inverts the CDF at `beta`; a plateau exactly at `beta` comes back as
    /// the full interval, mirroring the confidence-limit interval case.
    pub fn quantile(&self, beta: T, eps_plateau: T) -> Result<Quantile<T>, Error<T>> {
        if !(beta > T::zero() && beta < T::one()) {
            return Err(Error::InvalidParameter(format!(
                "quantile level must lie in (0, 1), got {beta}"
            )));
        }
        let n = self.cdf.len();
        if beta < self.cdf[0] || beta > self.cdf[n - 1] {
            return Err(Error::NoCoverage(format!(
                "beta = {beta} outside the sampled cdf range [{}, {}]",
                self.cdf[0],
                self.cdf[n - 1]
            )));
        }
        let on = |v: T| (v - beta).abs() <= eps_plateau;
        let mut j = 0;
        while j < n {
            if on(self.cdf[j]) {
                let start = j;
                while j + 1 < n && on(self.cdf[j + 1]) {
                    j += 1;
                }
                if j > start {
                    return Ok(Quantile::Interval(self.theta[start], self.theta[j]));
                }
                return Ok(Quantile::Point(self.theta[start]));
            }
            j += 1;
        }
        let j = self.cdf.partition_point(|&v| v < beta).max(1) - 1;
        let (v0, v1) = (self.cdf[j], self.cdf[j + 1]);
        let t = (beta - v0) / (v1 - v0);
        Ok(Quantile::Point(self.theta[j] + t * (self.theta[j + 1] - self.theta[j])))
    }
}

/// Reads the fiducial distribution at `x0` off an FD surface: the x-section
/// itself under the increasing convention, its complement under the
/// decreasing one.
pub fn extract_fd<T: Real, F: ParametricFamily<T>>(
    surface: &FiducialSurface<T, F>,
    x0: T,
    tol: &Tolerances<T>,
) -> Result<FiducialDistribution<T>, Error<T>> {
    let verdict = fd_existence_verdict(surface, tol)?;
    if !verdict.fd_exists {
        return Err(Error::NotAnFd {
            x0,
            non_intersecting: verdict.non_intersecting,
            complete: verdict.complete,
            verdict: Box::new(verdict),
        });
    }
    let section = surface.x_section(x0)?;
    let net = *section.values().last().unwrap() - section.values()[0];
    if net.abs() < tol.delta_complete {
        return Err(Error::AmbiguousDirection { net });
    }
    let (direction, cdf) = if net > T::zero() {
        (Direction::Increasing, section.values().to_vec())
    } else {
        (Direction::Decreasing, section.complement().values().to_vec())
    };
    for w in cdf.windows(2) {
        debug_assert!(w[1] >= w[0] - tol.eps_plateau);
    }
    Ok(FiducialDistribution {
        theta: section.coords().to_vec(),
        cdf,
        direction,
        x0,
    })
}

/// All parameter values at which the member through `x0` attains probability
/// `beta`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ConfidenceLimitSet<T> {
    Unique { beta: T, theta: T },
    /// A whole interval of admissible limits (members touching at x0).
    Interval { beta: T, lo: T, hi: T },
    /// Multiple isolated solutions (members crossing at x0).
    Multiple { beta: T, thetas: Vec<T> },
}

impl<T: Real> ConfidenceLimitSet<T> {
    pub fn beta(&self) -> T {
        match self {
            ConfidenceLimitSet::Unique { beta, .. }
            | ConfidenceLimitSet::Interval { beta, .. }
            | ConfidenceLimitSet::Multiple { beta, .. } => *beta,
        }
    }

    /// Solutions as a flat sorted list (interval endpoints for the interval
    /// case).
    pub fn thetas(&self) -> Vec<T> {
        match self {
            ConfidenceLimitSet::Unique { theta, .. } => vec![*theta],
            ConfidenceLimitSet::Interval { lo, hi, .. } => vec![*lo, *hi],
            ConfidenceLimitSet::Multiple { thetas, .. } => thetas.clone(),
        }
    }

    pub fn case_name(&self) -> &'static str {
        match self {
            ConfidenceLimitSet::Unique { .. } => "unique",
            ConfidenceLimitSet::Interval { .. } => "interval",
            ConfidenceLimitSet::Multiple { .. } => "multiple",
        }
    }
}

/// Solves F_r(x0 | theta) = beta over the parameter span: bracket scan over
/// the grid nodes, bisection against the family to 1e-10, and local 10x
/// refinement wherever two roots land within two grid spacings.
pub fn confidence_limit_set<T: Real, F: ParametricFamily<T>>(
    surface: &FiducialSurface<T, F>,
    x0: T,
    beta: T,
    tol: &Tolerances<T>,
) -> Result<ConfidenceLimitSet<T>, Error<T>> {
    if !(beta > T::zero() && beta < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "beta must lie in (0, 1), got {beta}"
        )));
    }
    let section = surface.x_section(x0)?;
    let theta = section.coords();
    let values = section.values();
    let n = values.len();
    let mut range = (values[0], values[0]);
    for &v in values {
        range = (range.0.min(v), range.1.max(v));
    }
    let eps = (range.1 - range.0).max(T::of(1e-30)) * tol.eps_mono;
    let root_tol = T::of(1e-10);
    let f = |t: T| surface.family().cdf(x0, t) - beta;

    let mut roots: Vec<T> = Vec::new();
    let mut intervals: Vec<(T, T)> = Vec::new();
    let on = |v: T| (v - beta).abs() <= eps;
    let mut j = 0;
    while j < n {
        if on(values[j]) {
            let start = j;
            while j + 1 < n && on(values[j + 1]) {
                j += 1;
            }
            if j > start {
                intervals.push((theta[start], theta[j]));
            } else {
                roots.push(theta[start]);
            }
            j += 1;
            continue;
        }
        if j + 1 < n && !on(values[j + 1]) {
            let (a, b) = (values[j] - beta, values[j + 1] - beta);
            if a.signum() != b.signum() {
                roots.push(bisect(theta[j], theta[j + 1], root_tol, f));
            }
        }
        j += 1;
    }

    if roots.is_empty() && intervals.is_empty() {
        return Err(Error::NoCoverage(format!(
            "beta = {beta} outside the section range [{}, {}] at x0 = {x0}",
            range.0, range.1
        )));
    }

    // grid aliasing can merge close crossings: re-scan merged clusters on a
    // locally refined grid
    let h = max_spacing(theta);
    roots = separate_clusters(roots, h, theta, f, root_tol);

    let set = if intervals.len() == 1 && roots.is_empty() {
        ConfidenceLimitSet::Interval {
            beta,
            lo: intervals[0].0,
            hi: intervals[0].1,
        }
    } else if intervals.is_empty() && roots.len() == 1 {
        ConfidenceLimitSet::Unique { beta, theta: roots[0] }
    } else {
        let mut all = roots;
        for (lo, hi) in intervals {
            all.push(lo);
            all.push(hi);
        }
        all.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ConfidenceLimitSet::Multiple { beta, thetas: all }
    };
    Ok(set)
}

fn max_spacing<T: Real>(nodes: &[T]) -> T {
    let mut h = T::zero();
    for w in nodes.windows(2) {
        h = h.max(w[1] - w[0]);
    }
    h
}

fn separate_clusters<T: Real>(
    mut roots: Vec<T>,
    h: T,
    theta: &[T],
    f: impl Fn(T) -> T + Copy,
    root_tol: T,
) -> Vec<T> {
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let two_h = T::two() * h;
    let mut out: Vec<T> = Vec::new();
    let mut k = 0;
    while k < roots.len() {
        let mut end = k;
        while end + 1 < roots.len() && roots[end + 1] - roots[end] < two_h {
            end += 1;
        }
        if end == k {
            out.push(roots[k]);
        } else {
            let lo = (roots[k] - two_h).max(theta[0]);
            let hi = (roots[end] + two_h).min(theta[theta.len() - 1]);
            let fine = ((hi - lo) / (h / T::of(10.0))).as_f64().ceil() as usize + 1;
            let nodes = crate::real::linspace(lo, hi, fine.max(11));
            let mut refined = Vec::new();
            for w in nodes.windows(2) {
                let (a, b) = (f(w[0]), f(w[1]));
                if a == T::zero() {
                    refined.push(w[0]);
                } else if a.signum() != b.signum() {
                    refined.push(bisect(w[0], w[1], root_tol, f));
                }
            }
            if refined.is_empty() {
                out.extend_from_slice(&roots[k..=end]);
            } else {
                out.extend(refined);
            }
        }
        k = end + 1;
    }
    out.dedup_by(|a, b| (*a - *b).abs() <= root_tol);
    out
}

/// Sampled, possibly non-monotone fiducial measure at a fixed observation.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedFiducialMeasure<T> {
    theta: Vec<T>,
    values: Vec<T>,
    x0: T,
}

impl<T: Real> SignedFiducialMeasure<T> {
    /// Wraps sampled values after a continuity sanity check: a single step
    /// an order of magnitude beyond both neighboring steps is a jump.
    pub fn new(theta: Vec<T>, values: Vec<T>, x0: T) -> Result<Self, Error<T>> {
        if theta.len() != values.len() || theta.len() < 3 {
            return Err(Error::InsufficientData { got: values.len(), need: 3 });
        }
        let n = values.len();
        let mut range = (values[0], values[0]);
        for &v in &values {
            range = (range.0.min(v), range.1.max(v));
        }
        let floor = (range.1 - range.0).max(T::of(1e-30)) * T::of(1e-9);
        let ten = T::of(10.0);
        for i in 0..n - 1 {
            let d = (values[i + 1] - values[i]).abs();
            let left = if i > 0 {
                (values[i] - values[i - 1]).abs()
            } else {
                T::zero()
            };
            let right = if i + 2 < n {
                (values[i + 2] - values[i + 1]).abs()
            } else {
                T::zero()
            };
            let bound = ten * left.max(right) + floor;
            if (i > 0 || i + 2 < n) && d > bound {
                return Err(Error::DiscontinuousSamples { index: i, jump: d });
            }
        }
        Ok(SignedFiducialMeasure { theta, values, x0 })
    }

    /// The fiducial measure at `x0` read off a surface.
    pub fn from_surface<F: ParametricFamily<T>>(
        surface: &FiducialSurface<T, F>,
        x0: T,
    ) -> Result<Self, Error<T>> {
        let section = surface.x_section(x0)?;
        SignedFiducialMeasure::new(
            section.coords().to_vec(),
            section.values().to_vec(),
            x0,
        )
    }

    pub fn theta_nodes(&self) -> &[T] {
        &self.theta
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn x0(&self) -> T {
        self.x0
    }
}

/// Difference-of-monotone representation of a sampled measure.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanDecomposition<T> {
    pub theta: Vec<T>,
    /// Nondecreasing; accumulates rises plus reflected falls.
    pub m1: Vec<T>,
    /// Nondecreasing; twice the accumulated falls, constant on rising runs.
    pub m2: Vec<T>,
}

/// Splits a sampled measure into two nondecreasing parts with
/// `m1 - m2 = input` at every node: falls are reflected into both parts,
/// rises go to the first part only.
pub fn jordan_decompose<T: Real>(m: &SignedFiducialMeasure<T>) -> JordanDecomposition<T> {
    let v = m.values();
    let n = v.len();
    let mut m1 = vec![T::zero(); n];
    let mut m2 = vec![T::zero(); n];
    let mut fall = T::zero();
    m1[0] = v[0];
    for i in 1..n {
        let d = v[i] - v[i - 1];
        if d < T::zero() {
            fall -= d;
        }
        m2[i] = T::two() * fall;
        m1[i] = v[i] + m2[i];
    }
    JordanDecomposition { theta: m.theta.clone(), m1, m2 }
}

/// Even/odd split of a sampled measure on a grid symmetric about zero.
#[derive(Clone, Debug, PartialEq)]
pub struct EvenOddParts<T> {
    pub theta: Vec<T>,
    pub even: Vec<T>,
    pub odd: Vec<T>,
}

fn check_symmetric_grid<T: Real>(theta: &[T]) -> Result<(), Error<T>> {
    let n = theta.len();
    let span = theta[n - 1] - theta[0];
    let slack = span * T::of(1e-9);
    for j in 0..n / 2 {
        let (l, r) = (theta[j], theta[n - 1 - j]);
        if (l + r).abs() > slack {
            return Err(Error::AsymmetricGrid { index: j, left: l, right: r });
        }
    }
    Ok(())
}

/// m_E(t) = [m(t) + m(-t)] / 2 and m_O(t) = [m(t) - m(-t)] / 2, paired across
/// the symmetric grid.
pub fn even_odd_decompose<T: Real>(
    m: &SignedFiducialMeasure<T>,
) -> Result<EvenOddParts<T>, Error<T>> {
    check_symmetric_grid(&m.theta)?;
    let v = m.values();
    let n = v.len();
    let mut even = vec![T::zero(); n];
    let mut odd = vec![T::zero(); n];
    for j in 0..n {
        let mirror = v[n - 1 - j];
        even[j] = (v[j] + mirror) * T::half();
        odd[j] = (v[j] - mirror) * T::half();
    }
    Ok(EvenOddParts { theta: m.theta.clone(), even, odd })
}

/// Sampled function of the folded parameter phi = |theta| >= 0.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiDistribution<T> {
    pub phi: Vec<T>,
    pub values: Vec<T>,
}

fn zero_node_index<T: Real>(theta: &[T]) -> Result<usize, Error<T>> {
    check_symmetric_grid(theta)?;
    let n = theta.len();
    if n.is_multiple_of(2) {
        return Err(Error::InvalidGrid(
            "folded-parameter operations need a node at zero (odd-length symmetric grid)"
                .to_string(),
        ));
    }
    Ok(n / 2)
}

/// Distribution of phi = |theta| under the sampled measure, by the even/odd
/// shortcut: the even part contributes nothing and the odd part doubles on
/// whichever half carries its positive values.
pub fn composite_distribution_of_phi<T: Real>(
    m: &SignedFiducialMeasure<T>,
) -> Result<PhiDistribution<T>, Error<T>> {
    let mid = zero_node_index(&m.theta)?;
    let parts = even_odd_decompose(m)?;
    let n = m.theta.len();
    // orientation: which half carries the odd part's positive extreme
    let mut extreme = T::zero();
    for k in mid..n {
        if parts.odd[k].abs() > extreme.abs() {
            extreme = parts.odd[k];
        }
    }
    let positive_half_is_right = extreme >= T::zero();
    let mut phi = Vec::with_capacity(n - mid);
    let mut values = Vec::with_capacity(n - mid);
    for k in mid..n {
        phi.push(m.theta[k]);
        let v = if positive_half_is_right {
            parts.odd[k]
        } else {
            parts.odd[n - 1 - k]
        };
        values.push(T::two() * v);
    }
    Ok(PhiDistribution { phi, values })
}

/// Distribution of phi = |theta| by the full construction: Jordan-decompose
/// the measure, fold each monotone part by its right-plus-left probabilities
/// about zero, and subtract. Signed: a measure whose positive odd mass sits
/// on the negative half folds to negative values here.
pub fn composite_phi_via_jordan<T: Real>(
    m: &SignedFiducialMeasure<T>,
) -> Result<PhiDistribution<T>, Error<T>> {
    let mid = zero_node_index(&m.theta)?;
    let jd = jordan_decompose(m);
    let n = m.theta.len();
    let mut phi = Vec::with_capacity(n - mid);
    let mut values = Vec::with_capacity(n - mid);
    for k in mid..n {
        let fold = |part: &[T]| {
            let right = part[k] - part[mid];
            let left = part[mid] - part[n - 1 - k];
            right + left
        };
        phi.push(m.theta[k]);
        values.push(fold(&jd.m1) - fold(&jd.m2));
    }
    Ok(PhiDistribution { phi, values })
}

/// Verifies that every +theta member of the sampled composite coincides with
/// its -theta partner (within `eps`) and re-indexes the family by
/// phi = |theta|. The returned wrapper also exposes the truncated* fiducial
/// measure mu(phi | y) = 1 - cdf(y, phi).
pub fn composite_reduce<T: Real, F: ParametricFamily<T> + Clone>(
    surface: &FiducialSurface<T, F>,
    eps: T,
) -> Result<CompositeReduced<F>, Error<T>> {
    verify_reducible(surface, eps)?;
    Ok(CompositeReduced::from_verified(surface.family().clone()))
}

/// [`composite_reduce`] for family handles that cannot be cloned: the caller
/// supplies a second handle evaluating the same family (typically rebuilt
/// from the same spec).
pub fn composite_reduce_with<T: Real, G: ParametricFamily<T>>(
    surface: &FiducialSurface<T, impl ParametricFamily<T>>,
    eps: T,
    family: G,
) -> Result<CompositeReduced<G>, Error<T>> {
    verify_reducible(surface, eps)?;
    Ok(CompositeReduced::from_verified(family))
}

fn verify_reducible<T: Real, F: ParametricFamily<T>>(
    surface: &FiducialSurface<T, F>,
    eps: T,
) -> Result<(), Error<T>> {
    let theta = surface.theta_nodes();
    check_symmetric_grid(theta)?;
    let n = theta.len();
    let nx = surface.x_nodes().len();
    let mut worst = T::zero();
    let mut worst_at = (T::zero(), T::zero());
    for j in 0..n / 2 {
        for i in 0..nx {
            let d = (surface.value(i, j) - surface.value(i, n - 1 - j)).abs();
            if d > worst {
                worst = d;
                worst_at = (surface.x_nodes()[i], theta[j]);
            }
        }
    }
    if worst > eps {
        return Err(Error::NotReducible(format!(
            "members at theta = {} and {} differ by {worst} at x = {} (tolerance {eps})",
            worst_at.1, -worst_at.1, worst_at.0
        )));
    }
    Ok(())
}

/// Dual truncated* fiducial density for the standard normal composite:
/// sqrt(2/pi) exp(-(y^2 + phi^2)/2) sinh(y phi).
pub fn truncated_star_density<T: Real>(y: T, phi: T) -> Result<T, Error<T>> {
    check_nonnegative(y, "y")?;
    check_nonnegative(phi, "phi")?;
    Ok(T::of(SQRT_2_OVER_PI) * (-(y * y + phi * phi) * T::half()).exp() * (y * phi).sinh())
}

/// Companion reciprocal-distribution density: cosh in place of sinh.
pub fn reciprocal_truncated_star_density<T: Real>(y: T, phi: T) -> Result<T, Error<T>> {
    check_nonnegative(y, "y")?;
    check_nonnegative(phi, "phi")?;
    Ok(T::of(SQRT_2_OVER_PI) * (-(y * y + phi * phi) * T::half()).exp() * (y * phi).cosh())
}

fn check_nonnegative<T: Real>(v: T, axis: &'static str) -> Result<(), Error<T>> {
    if v < T::zero() {
        return Err(Error::OutOfDomain {
            axis,
            value: v,
            lo: T::zero(),
            hi: T::infinity(),
        });
    }
    Ok(())
}

/// Per-observation maximum of the fiducial measure: the probability envelope
/// the members never exceed, with its parameter location.
#[derive(Clone, Debug, PartialEq)]
pub struct Envelope<T> {
    pub y: Vec<T>,
    pub theta_m: Vec<T>,
    pub f_star_m: Vec<T>,
}

/// Locates, for every observation node, the parameter maximizing the measure:
/// grid argmax then golden-section refinement to 1e-6.
pub fn composite_envelope<T: Real, F: ParametricFamily<T>>(
    surface: &FiducialSurface<T, F>,
) -> Envelope<T> {
    let ys = surface.x_nodes();
    let theta = surface.theta_nodes();
    let nt = theta.len();
    let mut out = Envelope {
        y: ys.to_vec(),
        theta_m: Vec::with_capacity(ys.len()),
        f_star_m: Vec::with_capacity(ys.len()),
    };
    for i in 0..ys.len() {
        let row = surface.row(i);
        let mut jmax = 0;
        let mut lo = row[0];
        let mut hi = row[0];
        for (j, &v) in row.iter().enumerate() {
            if v > row[jmax] {
                jmax = j;
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi - lo <= T::of(1e-15) {
            out.theta_m.push(T::zero());
            out.f_star_m.push(row[jmax]);
            continue;
        }
        let a = theta[jmax.saturating_sub(1)];
        let b = theta[(jmax + 1).min(nt - 1)];
        let y = ys[i];
        let tm = golden_max(a, b, T::of(1e-6), |t| surface.family().cdf(y, t));
        out.theta_m.push(tm);
        out.f_star_m.push(surface.family().cdf(y, tm));
    }
    out
}
