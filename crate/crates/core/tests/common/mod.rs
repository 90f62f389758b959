//! Shared fixtures and the independent member-pair comparison oracle.
#![allow(dead_code)]

use fidgeo::families::{
    AbsComposite, CompositeReduced, DynFamily, Interval, JoinedUniform, ParametricFamily,
    Reciprocal, Translation, Window,
};
use fidgeo::fiducial::composite_reduce;
use fidgeo::special::norm_cdf;
use fidgeo::surface::{FiducialSurface, Grid};

/// Brute-force verdict from comparing every member pair across the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    NonIntersecting,
    /// Some pair carries opposite-sign differences across x.
    Ordinary,
    /// Some distinct pair coincides everywhere (and none crosses).
    Weak,
}

impl OracleVerdict {
    pub fn intersecting(self) -> bool {
        !matches!(self, OracleVerdict::NonIntersecting)
    }
}

/// O(n^2 m) pairwise comparison of all member columns: a sign change of the
/// difference across x is a crossing; an everywhere-zero difference is a
/// coincident pair. Completely independent of the section-classification
/// route.
pub fn pairwise_oracle<F: ParametricFamily<f64>>(
    surface: &FiducialSurface<f64, F>,
    eps: f64,
) -> OracleVerdict {
    let nx = surface.x_nodes().len();
    let nt = surface.theta_nodes().len();
    // transpose into contiguous columns so the inner scan is cache-friendly
    let mut cols: Vec<Vec<f64>> = vec![vec![0.0; nx]; nt];
    for i in 0..nx {
        for (j, col) in cols.iter_mut().enumerate() {
            col[i] = surface.value(i, j);
        }
    }
    let mut weak = false;
    for j1 in 0..nt {
        for j2 in j1 + 1..nt {
            let (a, b) = (&cols[j1], &cols[j2]);
            let mut pos = false;
            let mut neg = false;
            let mut all_zero = true;
            for i in 0..nx {
                let d = a[i] - b[i];
                if d > eps {
                    if neg {
                        return OracleVerdict::Ordinary;
                    }
                    pos = true;
                    all_zero = false;
                } else if d < -eps {
                    if pos {
                        return OracleVerdict::Ordinary;
                    }
                    neg = true;
                    all_zero = false;
                }
            }
            if all_zero {
                weak = true;
            }
        }
    }
    if weak {
        OracleVerdict::Weak
    } else {
        OracleVerdict::NonIntersecting
    }
}

/// Normal translation family pinched so the members for a parameter interval
/// all pass through one point at x = 0 with same-side ordering around it: a
/// designed point-touching configuration.
#[derive(Clone, Copy, Debug)]
pub struct PinchedNormal {
    pub center: f64,
    pub halfwidth: f64,
    pub radius: f64,
}

impl PinchedNormal {
    pub fn standard() -> Self {
        PinchedNormal { center: 0.3, halfwidth: 0.1, radius: 0.5 }
    }

    pub fn plateau_level(&self) -> f64 {
        norm_cdf(self.center)
    }
}

impl ParametricFamily<f64> for PinchedNormal {
    fn cdf(&self, x: f64, theta: f64) -> f64 {
        let pinch = (theta - self.center).clamp(-self.halfwidth, self.halfwidth);
        let release = (x.abs() / self.radius).min(1.0);
        norm_cdf(x + theta - pinch * (1.0 - release))
    }

    fn x_domain(&self) -> Interval<f64> {
        Interval::unbounded()
    }

    fn theta_domain(&self) -> Interval<f64> {
        Interval::unbounded()
    }

    fn x_window(&self) -> Window<f64> {
        Window { lo: -4.7534243, hi: 4.7534243 }
    }

    fn theta_window(&self) -> Window<f64> {
        Window { lo: -9.5068486, hi: 9.5068486 }
    }

    fn describe(&self) -> String {
        format!(
            "pinched_normal(center={}, halfwidth={}, radius={})",
            self.center, self.halfwidth, self.radius
        )
    }
}

/// Every built-in family as a boxed fixture with its auto grid.
pub fn builtin_fixtures(nodes: usize) -> Vec<(String, FiducialSurface<f64, DynFamily<f64>>)> {
    let mut fams: Vec<DynFamily<f64>> = vec![
        Box::new(JoinedUniform::new(1.0, 4.0, 0.5).unwrap()),
        Box::new(JoinedUniform::new(1.0, 4.0, 0.3).unwrap()),
        Box::new(Translation::evd()),
        Box::new(Translation::normal()),
        Box::new(Translation::gapped(1.0).unwrap()),
        Box::new(AbsComposite::new::<f64>(Translation::evd()).unwrap()),
        Box::new(AbsComposite::new::<f64>(Translation::normal()).unwrap()),
        Box::new(Reciprocal::new(Translation::evd())),
    ];
    fams.push(Box::new(reduced_normal()));
    fams.into_iter()
        .map(|fam| {
            let grid = Grid::auto(&fam, nodes);
            let name = fam.describe();
            (name, FiducialSurface::build(fam, grid).unwrap())
        })
        .collect()
}

/// The composite-reduced form of the |x| normal composite (reducibility
/// verified numerically on a symmetric grid first).
pub fn reduced_normal() -> CompositeReduced<AbsComposite<Translation<f64>>> {
    let fam = AbsComposite::new::<f64>(Translation::normal()).unwrap();
    let grid = Grid::auto(&fam, 201);
    let s = FiducialSurface::build(fam, grid).unwrap();
    composite_reduce(&s, 1e-9).unwrap()
}

/// Prints one PASS/FAIL line for a named criterion and panics with the
/// failed checks if any.
pub fn report_criterion(name: &str, checks: &[(bool, String)]) {
    let ok = checks.iter().all(|c| c.0);
    println!("{name}: {}", if ok { "PASS" } else { "FAIL" });
    let failed: Vec<&String> = checks.iter().filter(|c| !c.0).map(|c| &c.1).collect();
    for f in &failed {
        println!("  failed: {f}");
    }
    assert!(ok, "{name}: {failed:?}");
}
