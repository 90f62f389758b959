//! Grid-sampled fiducial surface F(x, theta) and its sections.
//!
//! A theta-section (fixed parameter) is one member distribution sampled over
//! x; an x-section (fixed observation) is the fiducial measure sampled over
//! theta. Both read the same surface values, which is the geometric identity
//! in executable form.

use std::io::{self, Write};

use serde::Serialize;

use crate::error::Error;
use crate::families::ParametricFamily;
use crate::real::{linspace, Real};

/// Column monotonicity slack when validating a freshly built surface.
const COLUMN_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Grid<T> {
    x: Vec<T>,
    theta: Vec<T>,
}

impl<T: Real> Grid<T> {
    pub fn new(x: Vec<T>, theta: Vec<T>) -> Result<Self, Error<T>> {
        check_nodes(&x, "x")?;
        check_nodes(&theta, "theta")?;
        Ok(Grid { x, theta })
    }

    pub fn uniform(
        x_lo: T,
        x_hi: T,
        nx: usize,
        theta_lo: T,
        theta_hi: T,
        ntheta: usize,
    ) -> Result<Self, Error<T>> {
        if nx < 3 || ntheta < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 nodes per axis, got {nx} x {ntheta}"
            )));
        }
        if !(x_lo < x_hi) || !(theta_lo < theta_hi) {
            return Err(Error::InvalidGrid(
                "grid ranges must be nonempty intervals".to_string(),
            ));
        }
        Ok(Grid {
            x: linspace(x_lo, x_hi, nx),
            theta: linspace(theta_lo, theta_hi, ntheta),
        })
    }

    /// Uniform grid over the family's truncation windows.
    pub fn auto(family: &(impl ParametricFamily<T> + ?Sized), nodes_per_axis: usize) -> Self {
        let xw = family.x_window();
        let tw = family.theta_window();
        Grid {
            x: linspace(xw.lo, xw.hi, nodes_per_axis),
            theta: linspace(tw.lo, tw.hi, nodes_per_axis),
        }
    }

    pub fn x(&self) -> &[T] {
        &self.x
    }

    pub fn theta(&self) -> &[T] {
        &self.theta
    }
}

fn check_nodes<T: Real>(nodes: &[T], axis: &str) -> Result<(), Error<T>> {
    if nodes.len() < 3 {
        return Err(Error::InvalidGrid(format!(
            "{axis} axis has {} nodes, need at least 3",
            nodes.len()
        )));
    }
    for w in nodes.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::InvalidGrid(format!(
                "{axis} nodes must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SectionAxis {
    /// Fixed parameter: one member distribution over x.
    Theta,
    /// Fixed observation: the fiducial measure over theta.
    X,
}

/// One surface section: strictly increasing coordinates with probability
/// values.
#[derive(Clone, Debug, PartialEq)]
pub struct Section<T> {
    pub axis: SectionAxis,
    pub anchor: T,
    coords: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> Section<T> {
    pub fn new(
        axis: SectionAxis,
        anchor: T,
        coords: Vec<T>,
        values: Vec<T>,
    ) -> Result<Self, Error<T>> {
        check_nodes(&coords, "section")?;
        if coords.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "section has {} coordinates but {} values",
                coords.len(),
                values.len()
            )));
        }
        for &v in &values {
            if !(v >= T::zero() && v <= T::one()) {
                return Err(Error::InvalidFamily(format!(
                    "section value {v} outside [0, 1]"
                )));
            }
        }
        Ok(Section { axis, anchor, coords, values })
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Values mapped v -> 1 - v (the reversed-parameter convention).
    pub fn complement(&self) -> Section<T> {
        Section {
            axis: self.axis,
            anchor: self.anchor,
            coords: self.coords.clone(),
            values: self.values.iter().map(|&v| T::one() - v).collect(),
        }
    }
}

/// Grid sample of F(x, theta) for one family, validated at build time.
pub struct FiducialSurface<T, F> {
    grid: Grid<T>,
    /// Row-major: `values[i * n_theta + j] = F(x_i, theta_j)`.
    values: Vec<T>,
    family: F,
}

impl<T: Real, F: ParametricFamily<T>> FiducialSurface<T, F> {
    /// Samples the family over the grid. Rejects families whose members are
    /// not nondecreasing in x (beyond round-off) or stray outside [0, 1].
    pub fn build(family: F, grid: Grid<T>) -> Result<Self, Error<T>> {
        let (nx, nt) = (grid.x.len(), grid.theta.len());
        let mut values = vec![T::zero(); nx * nt];
        for i in 0..nx {
            for j in 0..nt {
                let v = family.cdf(grid.x[i], grid.theta[j]);
                if !(v >= T::zero() && v <= T::one()) {
                    return Err(Error::InvalidFamily(format!(
                        "{} returned {v} at ({}, {})",
                        family.describe(),
                        grid.x[i],
                        grid.theta[j]
                    )));
                }
                values[i * nt + j] = v;
            }
        }
        let tol = T::of(COLUMN_TOL);
        for j in 0..nt {
            for i in 1..nx {
                let lo = values[(i - 1) * nt + j];
                let hi = values[i * nt + j];
                if hi < lo - tol {
                    return Err(Error::InvalidFamily(format!(
                        "{} is not nondecreasing in x at theta = {}: F({}) = {lo} then F({}) = {hi}",
                        family.describe(),
                        grid.theta[j],
                        grid.x[i - 1],
                        grid.x[i]
                    )));
                }
            }
        }
        Ok(FiducialSurface { grid, values, family })
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn x_nodes(&self) -> &[T] {
        &self.grid.x
    }

    pub fn theta_nodes(&self) -> &[T] {
        &self.grid.theta
    }

    pub fn family(&self) -> &F {
        &self.family
    }

    #[inline]
    pub fn value(&self, ix: usize, jtheta: usize) -> T {
        self.values[ix * self.grid.theta.len() + jtheta]
    }

    /// Values of the x-section at node `ix` (one row).
    pub fn row(&self, ix: usize) -> &[T] {
        let nt = self.grid.theta.len();
        &self.values[ix * nt..(ix + 1) * nt]
    }

    /// Member distribution at `theta0`. On-node anchors read stored values;
    /// off-node anchors re-query the family rather than interpolate.
    pub fn theta_section(&self, theta0: T) -> Result<Section<T>, Error<T>> {
        let t = &self.grid.theta;
        if theta0 < t[0] || theta0 > t[t.len() - 1] {
            return Err(Error::OutOfDomain {
                axis: "theta",
                value: theta0,
                lo: t[0],
                hi: t[t.len() - 1],
            });
        }
        let values = match t.iter().position(|&v| v == theta0) {
            Some(j) => (0..self.grid.x.len()).map(|i| self.value(i, j)).collect(),
            None => self
                .grid
                .x
                .iter()
                .map(|&x| self.family.cdf(x, theta0))
                .collect(),
        };
        Section::new(SectionAxis::Theta, theta0, self.grid.x.clone(), values)
    }

    /// Fiducial measure at `x0`: the geometric identity read along theta.
    pub fn x_section(&self, x0: T) -> Result<Section<T>, Error<T>> {
        let xs = &self.grid.x;
        if x0 < xs[0] || x0 > xs[xs.len() - 1] {
            return Err(Error::OutOfDomain {
                axis: "x",
                value: x0,
                lo: xs[0],
                hi: xs[xs.len() - 1],
            });
        }
        let values = match xs.iter().position(|&v| v == x0) {
            Some(i) => self.row(i).to_vec(),
            None => self
                .grid
                .theta
                .iter()
                .map(|&t| self.family.cdf(x0, t))
                .collect(),
        };
        Section::new(SectionAxis::X, x0, self.grid.theta.clone(), values)
    }

    /// CSV export: header row of theta nodes, first column x nodes, body in
    /// row-major order.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        write!(w, "x")?;
        for t in &self.grid.theta {
            write!(w, ",{}", crate::export::csv_number(*t))?;
        }
        w.write_all(b"\n")?;
        for i in 0..self.grid.x.len() {
            write!(w, "{}", crate::export::csv_number(self.grid.x[i]))?;
            for j in 0..self.grid.theta.len() {
                write!(w, ",{}", crate::export::csv_number(self.value(i, j)))?;
            }
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}
