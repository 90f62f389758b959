//! Multiple-observation combination: per-observation fiducial densities via
//! the parameter derivative of the member CDF, normalized product
//! combination, quantiles, and the translation-family oracle that computes
//! the same density directly from the pivot.

use crate::error::Error;
use crate::families::ParametricFamily;
use crate::numeric::{bisect, interp, trapezoid, trapezoid_cumulative};
use crate::real::Real;

/// How a density value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivMethod {
    Analytic,
    Central,
    /// Fell back to a one-sided difference at a parameter-domain boundary.
    OneSided,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityValue<T> {
    pub value: T,
    pub method: DerivMethod,
}

/// Fiducial density |dF_r(x | theta) / dtheta|, analytic when the family
/// carries a closed-form parameter derivative, otherwise a central
/// difference with step max(1e-5, 1e-5 |theta|) (one-sided at natural
/// domain boundaries).
pub fn fiducial_density<T: Real>(
    family: &(impl ParametricFamily<T> + ?Sized),
    x: T,
    theta: T,
) -> Result<DensityValue<T>, Error<T>> {
    check_point(family, x, theta)?;
    Ok(density_unchecked(family, x, theta, false))
}

/// Always uses the finite-difference route, for checking analytic
/// derivatives against an independent path.
pub fn fiducial_density_fd<T: Real>(
    family: &(impl ParametricFamily<T> + ?Sized),
    x: T,
    theta: T,
) -> Result<DensityValue<T>, Error<T>> {
    check_point(family, x, theta)?;
    Ok(density_unchecked(family, x, theta, true))
}

fn check_point<T: Real>(
    family: &(impl ParametricFamily<T> + ?Sized),
    x: T,
    theta: T,
) -> Result<(), Error<T>> {
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
    Ok(())
}

fn density_unchecked<T: Real>(
    family: &(impl ParametricFamily<T> + ?Sized),
    x: T,
    theta: T,
    force_fd: bool,
) -> DensityValue<T> {
    if !force_fd {
        if let Some(d) = family.cdf_dtheta(x, theta) {
            return DensityValue {
                value: clamp_density(d.abs()),
                method: DerivMethod::Analytic,
            };
        }
    }
    let h = T::of(1e-5).max(T::of(1e-5) * theta.abs());
    let td = family.theta_domain();
    let lo_ok = td.contains(theta - h);
    let hi_ok = td.contains(theta + h);
    let (slope, method) = match (lo_ok, hi_ok) {
        (true, true) => (
            (family.cdf(x, theta + h) - family.cdf(x, theta - h)) / (T::two() * h),
            DerivMethod::Central,
        ),
        (false, true) => (
            (family.cdf(x, theta + h) - family.cdf(x, theta)) / h,
            DerivMethod::OneSided,
        ),
        (true, false) => (
            (family.cdf(x, theta) - family.cdf(x, theta - h)) / h,
            DerivMethod::OneSided,
        ),
        (false, false) => (T::zero(), DerivMethod::OneSided),
    };
    DensityValue {
        value: clamp_density(slope.abs()),
        method,
    }
}

fn clamp_density<T: Real>(v: T) -> T {
    if v > -T::of(1e-12) && v < T::zero() {
        T::zero()
    } else {
        v
    }
}

/// Normalized product of per-observation fiducial densities on a parameter
/// grid, with the grid refined by midpoint doubling until the normalization
/// constant stabilizes.
#[derive(Clone, Debug, PartialEq)]
pub struct CombinedFiducialDensity<T> {
    theta: Vec<T>,
    density: Vec<T>,
    z: T,
    log_z: T,
    observations: Vec<T>,
    refinement_levels: usize,
}

impl<T: Real> CombinedFiducialDensity<T> {
    pub fn theta_nodes(&self) -> &[T] {
        &self.theta
    }

    pub fn density_values(&self) -> &[T] {
        &self.density
    }

    /// Raw normalization integral of the density product.
    pub fn z(&self) -> T {
        self.z
    }

    pub fn log_z(&self) -> T {
        self.log_z
    }

    pub fn observations(&self) -> &[T] {
        &self.observations
    }

    pub fn refinement_levels(&self) -> usize {
        self.refinement_levels
    }

    /// Cumulative of the normalized density (trapezoid prefix sums).
    pub fn cumulative(&self) -> Vec<T> {
        trapezoid_cumulative(&self.theta, &self.density)
    }
}

/// Combines observations through the fiducial densities of the family.
pub fn combine<T: Real>(
    family: &(impl ParametricFamily<T> + ?Sized),
    observations: &[T],
    theta_nodes: &[T],
) -> Result<CombinedFiducialDensity<T>, Error<T>> {
    for &x in observations {
        let xd = family.x_domain();
        if !xd.contains(x) {
            return Err(Error::OutOfDomain {
                axis: "x",
                value: x,
                lo: xd.lo_or_neg_inf(),
                hi: xd.hi_or_inf(),
            });
        }
    }
    normalized_product(observations, theta_nodes, |x, t| {
        density_unchecked(family, x, t, false).value
    })
}

/// Independent translation-family route: the product of pivot densities
/// f*(x_i + theta), normalized the same way. No CDF differentiation.
pub fn bayes_oracle<T: Real>(
    family: &(impl ParametricFamily<T> + ?Sized),
    observations: &[T],
    theta_nodes: &[T],
) -> Result<CombinedFiducialDensity<T>, Error<T>> {
    if !family.is_translation_pivot() || family.pivot_density(T::zero()).is_none() {
        return Err(Error::OracleInapplicable);
    }
    normalized_product(observations, theta_nodes, |x, t| {
        family.pivot_density(x + t).unwrap_or_else(T::zero)
    })
}

fn normalized_product<T: Real>(
    observations: &[T],
    theta_nodes: &[T],
    density: impl Fn(T, T) -> T,
) -> Result<CombinedFiducialDensity<T>, Error<T>> {
    if observations.is_empty() {
        return Err(Error::InvalidParameter(
            "need at least one observation".to_string(),
        ));
    }
    if theta_nodes.len() < 3 {
        return Err(Error::InvalidGrid(format!(
            "parameter grid has {} nodes, need at least 3",
            theta_nodes.len()
        )));
    }
    for w in theta_nodes.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::InvalidGrid(
                "parameter nodes must be strictly increasing".to_string(),
            ));
        }
    }

    // products of many small densities underflow, so accumulate in log space
    let log_product = |t: T| -> T {
        let mut acc = T::zero();
        for &x in observations {
            let d = density(x, t);
            if d <= T::zero() {
                return T::neg_infinity();
            }
            acc += d.ln();
        }
        acc
    };

    let mut nodes = theta_nodes.to_vec();
    let mut logs: Vec<T> = nodes.iter().map(|&t| log_product(t)).collect();
    let mut prev_log_z: Option<T> = None;
    let mut levels = 0usize;
    let rel_tol = T::of(1e-6);
    loop {
        let max_log = logs
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(T::neg_infinity(), T::max);
        if !max_log.is_finite() {
            return Err(Error::DegenerateCombination);
        }
        let scaled: Vec<T> = logs.iter().map(|&l| (l - max_log).exp()).collect();
        let z_tilde = trapezoid(&nodes, &scaled);
        if !(z_tilde > T::zero()) {
            return Err(Error::DegenerateCombination);
        }
        let log_z = z_tilde.ln() + max_log;
        let converged = prev_log_z.is_some_and(|p| (log_z - p).abs() < rel_tol);
        if converged || levels >= 12 {
            let density_vals: Vec<T> = scaled.iter().map(|&s| s / z_tilde).collect();
            return Ok(CombinedFiducialDensity {
                theta: nodes,
                density: density_vals,
                z: log_z.exp(),
                log_z,
                observations: observations.to_vec(),
                refinement_levels: levels,
            });
        }
        prev_log_z = Some(log_z);
        levels += 1;
        // insert midpoints, keeping previously computed log densities
        let mut new_nodes = Vec::with_capacity(nodes.len() * 2 - 1);
        let mut new_logs = Vec::with_capacity(nodes.len() * 2 - 1);
        for i in 0..nodes.len() - 1 {
            new_nodes.push(nodes[i]);
            new_logs.push(logs[i]);
            let mid = (nodes[i] + nodes[i + 1]) * T::half();
            new_nodes.push(mid);
            new_logs.push(log_product(mid));
        }
        new_nodes.push(*nodes.last().unwrap());
        new_logs.push(*logs.last().unwrap());
        nodes = new_nodes;
        logs = new_logs;
    }
}

/// beta-quantile of the combined distribution: cumulative by trapezoid,
/// inverted by bisection to 1e-8.
pub fn combined_quantile<T: Real>(
    combined: &CombinedFiducialDensity<T>,
    beta: T,
) -> Result<T, Error<T>> {
    if !(beta > T::zero() && beta < T::one()) {
        return Err(Error::InvalidParameter(format!(
            "beta must lie in (0, 1), got {beta}"
        )));
    }
    let cum = combined.cumulative();
    let nodes = combined.theta_nodes();
    let last = *cum.last().unwrap();
    if beta > last {
        return Err(Error::NoCoverage(format!(
            "beta = {beta} beyond the cumulative range {last} on the grid"
        )));
    }
    let g = |t: T| interp(nodes, &cum, t) - beta;
    Ok(bisect(nodes[0], nodes[nodes.len() - 1], T::of(1e-8), g))
}
