//! Monotonicity classification of sections, intersection and touching
//! detection, completeness, and the existence verdict that combines them.
//!
//! A family admits a fiducial distribution exactly when its members never
//! cross (touching allowed) and the extreme members saturate at 0 and 1.
//! Classification of the x-sections and direct member-pair comparison are
//! two routes to the same crossing verdict; the verdict cross-validates
//! them and treats disagreement as a tolerance calibration failure.

use serde::Serialize;

use crate::error::Error;
use crate::families::ParametricFamily;
use crate::real::Real;
use crate::surface::{FiducialSurface, Section};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances<T> {
    /// Equal-value resolution, relative to the section's value range.
    pub eps_mono: T,
    /// Absolute band below which a consecutive difference counts as flat.
    pub eps_plateau: T,
    /// Boundary band for the completeness check.
    pub delta_complete: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Tolerances {
            eps_mono: T::of(1e-9),
            eps_plateau: T::of(1e-7),
            delta_complete: T::of(1e-3),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Verdict for one sampled section.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotoneClass<T> {
    StrictlyIncreasing,
    StrictlyDecreasing,
    MonotoneWithPlateaus {
        direction: Direction,
        /// Coordinate spans of the flat runs.
        plateaus: Vec<(T, T)>,
    },
    Constant,
    NonMonotone { witness: EqualValueWitness<T> },
}

impl<T> MonotoneClass<T> {
    pub fn is_monotone(&self) -> bool {
        !matches!(self, MonotoneClass::NonMonotone { .. })
    }
}

/// Two parameter values carrying the same measure value, with a sample in
/// between that genuinely departs from that level. Existence of such a pair
/// is what non-monotonicity means for a continuous function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EqualValueWitness<T> {
    pub theta_pair: (T, T),
    pub level: T,
    pub not_in_constant_interval: bool,
}

/// Classifies consecutive differences as rising, falling or flat and reduces
/// the pattern to a [`MonotoneClass`]. A sign change produces an equal-value
/// witness built from the two branches flanking an interior extremum.
pub fn classify_section<T: Real>(
    section: &Section<T>,
    eps_mono: T,
    eps_plateau: T,
) -> Result<MonotoneClass<T>, Error<T>> {
    let v = section.values();
    let c = section.coords();
    let n = v.len();
    if n < 3 {
        return Err(Error::InsufficientData { got: n, need: 3 });
    }
    let mut has_pos = false;
    let mut has_neg = false;
    let mut first_pos = usize::MAX;
    let mut first_neg = usize::MAX;
    let mut flat_runs: Vec<(usize, usize)> = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 0..n - 1 {
        let d = v[i + 1] - v[i];
        if d > eps_plateau {
            if !has_pos {
                first_pos = i;
            }
            has_pos = true;
            close_run(&mut run_start, i, &mut flat_runs);
        } else if d < -eps_plateau {
            if !has_neg {
                first_neg = i;
            }
            has_neg = true;
            close_run(&mut run_start, i, &mut flat_runs);
        } else if run_start.is_none() {
            run_start = Some(i);
        }
    }
    close_run(&mut run_start, n - 1, &mut flat_runs);

    match (has_pos, has_neg) {
        (false, false) => Ok(MonotoneClass::Constant),
        (true, true) => {
            let _ = eps_mono; // resolution lives in the crossing scan, not here
            let witness = build_witness(c, v, first_pos, first_neg, eps_plateau);
            Ok(MonotoneClass::NonMonotone { witness })
        }
        (pos, _) => {
            let direction = if pos {
                Direction::Increasing
            } else {
                Direction::Decreasing
            };
            if flat_runs.is_empty() {
                Ok(if pos {
                    MonotoneClass::StrictlyIncreasing
                } else {
                    MonotoneClass::StrictlyDecreasing
                })
            } else {
                let plateaus = flat_runs
                    .into_iter()
                    .map(|(s, e)| (c[s], c[e]))
                    .collect();
                Ok(MonotoneClass::MonotoneWithPlateaus { direction, plateaus })
            }
        }
    }
}

fn close_run(run_start: &mut Option<usize>, end: usize, runs: &mut Vec<(usize, usize)>) {
    if let Some(s) = run_start.take() {
        if end > s {
            runs.push((s, end));
        }
    }
}

/// Intermediate-value construction: pick a level strictly between an interior
/// extremum and the higher (lower) of its flanking anchors, then locate the
/// level on both flanking branches.
fn build_witness<T: Real>(
    coords: &[T],
    values: &[T],
    first_pos: usize,
    first_neg: usize,
    eps_plateau: T,
) -> EqualValueWitness<T> {
    let n = values.len();
    let peak = first_pos < first_neg;
    // interior extremum between the two earliest opposite-direction moves
    let span_lo = first_pos.min(first_neg);
    let span_hi = first_pos.max(first_neg) + 1;
    let mut m = span_lo;
    for k in span_lo..=span_hi {
        if (peak && values[k] > values[m]) || (!peak && values[k] < values[m]) {
            m = k;
        }
    }
    // anchors: the most extreme opposite values on each side of m
    let mut la = 0;
    for k in 1..m {
        if (peak && values[k] < values[la]) || (!peak && values[k] > values[la]) {
            la = k;
        }
    }
    let mut ra = m + 1;
    for k in m + 2..n {
        if (peak && values[k] < values[ra]) || (!peak && values[k] > values[ra]) {
            ra = k;
        }
    }
    let anchor = if peak {
        values[la].max(values[ra])
    } else {
        values[la].min(values[ra])
    };
    let level = (values[m] + anchor) * T::half();
    let left = cross_on_branch(coords, values, la, m, level);
    let right = cross_on_branch(coords, values, m, ra, level);
    let (lo, hi) = if left <= right { (left, right) } else { (right, left) };
    EqualValueWitness {
        theta_pair: (lo, hi),
        level,
        not_in_constant_interval: (values[m] - level).abs() > eps_plateau,
    }
}

/// First crossing of `level` on the sampled branch `[a, b]`, located by
/// linear interpolation inside the bracketing node pair.
fn cross_on_branch<T: Real>(coords: &[T], values: &[T], a: usize, b: usize, level: T) -> T {
    for j in a..b {
        let (v0, v1) = (values[j] - level, values[j + 1] - level);
        if v0 == T::zero() {
            return coords[j];
        }
        if v0.signum() != v1.signum() || v1 == T::zero() {
            let t = v0 / (v0 - v1);
            return coords[j] + t * (coords[j + 1] - coords[j]);
        }
    }
    coords[b]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntersectionKind {
    /// Members cross with opposite ordering on the two sides.
    Ordinary,
    /// Distinct-parameter members that coincide as whole functions (or a
    /// flat run with coincidence on one flank, the conservative label).
    Weak,
    /// A contiguous parameter interval crossing at one observation value.
    ProperInterval,
    /// Every member passes through one point: the endpoint configuration.
    CompleteIntervalEndpoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntersectionRecord<T> {
    pub x0: T,
    /// Crossing parameter values (interval endpoints for interval kinds).
    pub thetas: Vec<T>,
    pub kind: IntersectionKind,
    /// Probability level at which the crossing set was read.
    pub level: T,
}

/// Scans every x-node of the surface for intersection evidence.
///
/// Non-monotone sections yield the parameter values crossing the witness
/// level; a crossing pair whose members coincide at every x-node demotes the
/// record to weak. Flat runs of monotone sections are kept only when their
/// flanking neighborhoods order the members oppositely (a parameter-interval
/// crossing) or coincide on one side only (mixed, labeled weak). Constant
/// sections at interior levels are the endpoint configuration.
pub fn detect_intersections<T: Real, F: ParametricFamily<T>>(
    surface: &FiducialSurface<T, F>,
    tol: &Tolerances<T>,
) -> Vec<IntersectionRecord<T>> {
    let mut out = Vec::new();
    let nx = surface.x_nodes().len();
    for i in 0..nx {
        if let Some(rec) = inspect_row(surface, i, tol) {
            out.extend(rec);
        }
    }
    out
}

fn inspect_row<T: Real, F: ParametricFamily<T>>(
    surface: &FiducialSurface<T, F>,
    i: usize,
    tol: &Tolerances<T>,
) -> Option<Vec<IntersectionRecord<T>>> {
    let theta = surface.theta_nodes();
    let x0 = surface.x_nodes()[i];
    let row = surface.row(i);
    let section = Section::new(
        crate::surface::SectionAxis::X,
        x0,
        theta.to_vec(),
        row.to_vec(),
    )
    .ok()?;
    let class = classify_section(&section, tol.eps_mono, tol.eps_plateau).ok()?;
    let delta = tol.delta_complete;
    match class {
        MonotoneClass::Constant => {
            let level = row[0];
            if level > delta && level < T::one() - delta {
                Some(vec![IntersectionRecord {
                    x0,
                    thetas: vec![theta[0], theta[theta.len() - 1]],
                    kind: IntersectionKind::CompleteIntervalEndpoint,
                    level,
                }])
            } else {
                None
            }
        }
        MonotoneClass::NonMonotone { witness } => {
            let level = witness.level;
            let eps = level_band(row, tol.eps_mono);
            let crossings = level_crossings(theta, row, level, eps);
            if crossings.is_empty() {
                return None;
            }
            let kind = if any_pair_coincides(surface, &crossings, tol.eps_mono) {
                IntersectionKind::Weak
            } else {
                IntersectionKind::Ordinary
            };
            Some(vec![IntersectionRecord { x0, thetas: crossings, kind, level }])
        }
        MonotoneClass::MonotoneWithPlateaus { .. } => {
            let mut recs = Vec::new();
            for run in flat_runs_of(row, tol.eps_plateau) {
                let level = row[run.0];
                if level <= delta || level >= T::one() - delta {
                    continue; // saturated support boundary, not a crossing
                }
                match plateau_flank_kind(surface, i, run, tol) {
                    FlankKind::Touching => {}
                    FlankKind::Opposite => recs.push(IntersectionRecord {
                        x0,
                        thetas: vec![theta[run.0], theta[run.1]],
                        kind: IntersectionKind::ProperInterval,
                        level,
                    }),
                    FlankKind::Mixed => recs.push(IntersectionRecord {
                        x0,
                        thetas: vec![theta[run.0], theta[run.1]],
                        kind: IntersectionKind::Weak,
                        level,
                    }),
                }
            }
            if recs.is_empty() {
                None
            } else {
                Some(recs)
            }
        }
        _ => None,
    }
}

/// Equal-value resolution for one row, relative to its value range.
fn level_band<T: Real>(row: &[T], eps_mono: T) -> T {
    let mut lo = row[0];
    let mut hi = row[0];
    for &v in row {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (hi - lo).max(T::of(1e-30)) * eps_mono
}

/// All parameter values where the sampled row crosses `level`: interpolated
/// sign changes plus on-level runs collapsed to their midpoints.
fn level_crossings<T: Real>(theta: &[T], row: &[T], level: T, eps: T) -> Vec<T> {
    let n = row.len();
    let mut out = Vec::new();
    let on = |v: T| (v - level).abs() <= eps;
    let mut j = 0;
    while j < n {
        if on(row[j]) {
            let start = j;
            while j + 1 < n && on(row[j + 1]) {
                j += 1;
            }
            out.push((theta[start] + theta[j]) * T::half());
            j += 1;
            continue;
        }
        if j + 1 < n && !on(row[j + 1]) {
            let (a, b) = (row[j] - level, row[j + 1] - level);
            if a.signum() != b.signum() {
                let t = a / (a - b);
                out.push(theta[j] + t * (theta[j + 1] - theta[j]));
            }
        }
        j += 1;
    }
    out.sort_by(|p, q| p.partial_cmp(q).unwrap());
    out
}

/// Whether any pair of crossing parameters indexes members that coincide at
/// every x-node of the surface.
fn any_pair_coincides<T: Real, F: ParametricFamily<T>>(
    surface: &FiducialSurface<T, F>,
    thetas: &[T],
    eps_mono: T,
) -> bool {
    let eps = eps_mono.max(T::of(1e-12));
    for a in 0..thetas.len() {
        for b in a + 1..thetas.len() {
            if members_coincide(surface, thetas[a], thetas[b], eps) {
                return true;
            }
        }
    }
    false
}

fn members_coincide<T: Real, F: ParametricFamily<T>>(
    surface: &FiducialSurface<T, F>,
    ta: T,
    tb: T,
    eps: T,
) -> bool {
    surface
        .x_nodes()
        .iter()
        .all(|&x| (surface.family().cdf(x, ta) - surface.family().cdf(x, tb)).abs() <= eps)
}

/// Flat runs (start, end node indices) of one row.
fn flat_runs_of<T: Real>(row: &[T], eps_plateau: T) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut start: Option<usize> = None;
    for j in 0..row.len() - 1 {
        if (row[j + 1] - row[j]).abs() <= eps_plateau {
            if start.is_none() {
                start = Some(j);
            }
        } else if let Some(s) = start.take() {
            runs.push((s, j));
        }
    }
    if let Some(s) = start {
        runs.push((s, row.len() - 1));
    }
    runs
}

enum FlankKind {
    Touching,
    Opposite,
    Mixed,
}

/// Orders the members at the flat run's parameter endpoints in the two
/// x-neighborhoods of row `i`. Same strict ordering on both sides is a
/// touching configuration; opposite orderings a crossing; equality on one
/// side either an extended coincidence (touching) or mixed.
fn plateau_flank_kind<T: Real, F: ParametricFamily<T>>(
    surface: &FiducialSurface<T, F>,
    i: usize,
    run: (usize, usize),
    tol: &Tolerances<T>,
) -> FlankKind {
    let nx = surface.x_nodes().len();
    if i == 0 || i + 1 == nx {
        return FlankKind::Touching; // no two-sided neighborhood at the grid edge
    }
    let eps = level_band(surface.row(i), tol.eps_mono).max(tol.eps_plateau);
    let d_left = surface.value(i - 1, run.1) - surface.value(i - 1, run.0);
    let d_right = surface.value(i + 1, run.1) - surface.value(i + 1, run.0);
    let s_left = band_sign(d_left, eps);
    let s_right = band_sign(d_right, eps);
    match (s_left, s_right) {
        (0, 0) => FlankKind::Touching, // members coincide through the whole neighborhood
        (a, b) if a == b => FlankKind::Touching,
        (a, b) if a != 0 && b != 0 => FlankKind::Opposite,
        _ => {
            let theta = surface.theta_nodes();
            if members_coincide(surface, theta[run.0], theta[run.1], eps) {
                FlankKind::Touching
            } else {
                FlankKind::Mixed
            }
        }
    }
}

fn band_sign<T: Real>(v: T, eps: T) -> i8 {
    if v > eps {
        1
    } else if v < -eps {
        -1
    } else {
        0
    }
}

/// One maximal observation-interval over which a parameter interval of
/// members stays in touching contact. The bounds are step functions of x,
/// sampled at the grid nodes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TouchingSegment<T> {
    pub x_start: T,
    pub x_end: T,
    pub xs: Vec<T>,
    pub theta_lower: Vec<T>,
    pub theta_upper: Vec<T>,
    /// x values at which either bound changes.
    pub change_points: Vec<T>,
}

/// Collects touching segments: maximal x-runs of flat-section evidence whose
/// flanking neighborhoods keep the members on the same side. Point touching
/// appears as a degenerate segment with `x_start == x_end`.
pub fn extract_touching_segments<T: Real, F: ParametricFamily<T>>(
    surface: &FiducialSurface<T, F>,
    tol: &Tolerances<T>,
) -> Vec<TouchingSegment<T>> {
    let theta = surface.theta_nodes();
    let xs = surface.x_nodes();
    let delta = tol.delta_complete;

    // per x-node: touching plateau candidates (theta_lo, theta_hi); sections
    // that are non-monotone carry intersection structure, not touching
    let mut per_node: Vec<Vec<(T, T)>> = Vec::with_capacity(xs.len());
    for i in 0..xs.len() {
        let row = surface.row(i);
        let section = Section::new(
            crate::surface::SectionAxis::X,
            xs[i],
            theta.to_vec(),
            row.to_vec(),
        );
        let monotone_with_plateaus = matches!(
            section.and_then(|s| classify_section(&s, tol.eps_mono, tol.eps_plateau)),
            Ok(MonotoneClass::MonotoneWithPlateaus { .. })
        );
        let mut cands = Vec::new();
        if monotone_with_plateaus {
            for run in flat_runs_of(row, tol.eps_plateau) {
                let level = row[run.0];
                if level <= delta || level >= T::one() - delta {
                    continue;
                }
                if matches!(plateau_flank_kind(surface, i, run, tol), FlankKind::Touching) {
                    cands.push((theta[run.0], theta[run.1]));
                }
            }
        }
        per_node.push(cands);
    }

    // stitch overlapping candidates at consecutive nodes into segments
    struct Open<T> {
        xs: Vec<T>,
        lo: Vec<T>,
        hi: Vec<T>,
    }
    let mut open: Vec<Open<T>> = Vec::new();
    let mut done: Vec<TouchingSegment<T>> = Vec::new();
    for (i, cands) in per_node.iter().enumerate() {
        let mut used = vec![false; cands.len()];
        let mut still_open = Vec::new();
        for mut seg in open {
            let (prev_lo, prev_hi) = (*seg.lo.last().unwrap(), *seg.hi.last().unwrap());
            let extension = cands
                .iter()
                .enumerate()
                .find(|(k, (lo, hi))| !used[*k] && *lo <= prev_hi && *hi >= prev_lo);
            match extension {
                Some((k, &(lo, hi))) => {
                    used[k] = true;
                    seg.xs.push(xs[i]);
                    seg.lo.push(lo);
                    seg.hi.push(hi);
                    still_open.push(seg);
                }
                None => done.push(seal_segment(seg.xs, seg.lo, seg.hi)),
            }
        }
        open = still_open;
        for (k, &(lo, hi)) in cands.iter().enumerate() {
            if !used[k] {
                open.push(Open {
                    xs: vec![xs[i]],
                    lo: vec![lo],
                    hi: vec![hi],
                });
            }
        }
    }
    for s in open {
        done.push(seal_segment(s.xs, s.lo, s.hi));
    }
    done.sort_by(|a, b| a.x_start.partial_cmp(&b.x_start).unwrap());
    done
}

fn seal_segment<T: Real>(xs: Vec<T>, lo: Vec<T>, hi: Vec<T>) -> TouchingSegment<T> {
    let mut change_points = vec![xs[0]];
    for k in 1..xs.len() {
        if lo[k] != lo[k - 1] || hi[k] != hi[k - 1] {
            change_points.push(xs[k]);
        }
    }
    TouchingSegment {
        x_start: xs[0],
        x_end: *xs.last().unwrap(),
        xs,
        theta_lower: lo,
        theta_upper: hi,
        change_points,
    }
}

/// Which boundary column failed and by how much.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundaryReport<T> {
    pub direction: Direction,
    /// Largest value on the boundary column that should vanish, and where.
    pub zero_side_max: T,
    pub zero_side_worst_x: T,
    /// Smallest value on the boundary column that should reach one, and where.
    pub one_side_min: T,
    pub one_side_worst_x: T,
}

/// Completeness: at the extreme parameter columns the members must sit within
/// `delta` of 0 and 1 for every x. Orientation is auto-detected.
pub fn check_completeness<T: Real, F: ParametricFamily<T>>(
    surface: &FiducialSurface<T, F>,
    delta: T,
) -> (bool, BoundaryReport<T>) {
    let xs = surface.x_nodes();
    let nt = surface.theta_nodes().len();
    let mut net = T::zero();
    for i in 0..xs.len() {
        net += surface.value(i, nt - 1) - surface.value(i, 0);
    }
    let direction = if net >= T::zero() {
        Direction::Increasing
    } else {
        Direction::Decreasing
    };
    let (zero_col, one_col) = match direction {
        Direction::Increasing => (0, nt - 1),
        Direction::Decreasing => (nt - 1, 0),
    };
    let mut zero_max = T::neg_infinity();
    let mut zero_x = xs[0];
    let mut one_min = T::infinity();
    let mut one_x = xs[0];
    for i in 0..xs.len() {
        let z = surface.value(i, zero_col);
        if z > zero_max {
            zero_max = z;
            zero_x = xs[i];
        }
        let o = surface.value(i, one_col);
        if o < one_min {
            one_min = o;
            one_x = xs[i];
        }
    }
    let complete = zero_max <= delta && one_min >= T::one() - delta;
    (
        complete,
        BoundaryReport {
            direction,
            zero_side_max: zero_max,
            zero_side_worst_x: zero_x,
            one_side_min: one_min,
            one_side_worst_x: one_x,
        },
    )
}

/// Combined verdict with the evidence that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExistenceVerdict<T> {
    pub fd_exists: bool,
    pub non_intersecting: bool,
    pub complete: bool,
    /// Incomplete but extendable: the deficient boundary is a truncation of
    /// an unbounded parameter domain, so more members could be supplied.
    pub completable_hint: bool,
    pub intersections: Vec<IntersectionRecord<T>>,
    pub touching_segments: Vec<TouchingSegment<T>>,
    pub boundary_report: BoundaryReport<T>,
}

/// Runs classification, intersection detection and completeness, and
/// cross-validates the two non-intersection routes against each other.
pub fn fd_existence_verdict<T: Real, F: ParametricFamily<T>>(
    surface: &FiducialSurface<T, F>,
    tol: &Tolerances<T>,
) -> Result<ExistenceVerdict<T>, Error<T>> {
    let xs = surface.x_nodes();
    let theta = surface.theta_nodes();
    let mut all_monotone = true;
    let mut first_bad = None;
    for i in 0..xs.len() {
        let section = Section::new(
            crate::surface::SectionAxis::X,
            xs[i],
            theta.to_vec(),
            surface.row(i).to_vec(),
        )?;
        let class = classify_section(&section, tol.eps_mono, tol.eps_plateau)?;
        if !class.is_monotone() {
            all_monotone = false;
            if first_bad.is_none() {
                first_bad = Some(i);
            }
        }
    }

    let intersections = detect_intersections(surface, tol);
    let has_crossings = intersections.iter().any(|r| {
        matches!(
            r.kind,
            IntersectionKind::Ordinary | IntersectionKind::Weak
        )
    });
    if all_monotone == has_crossings {
        let i = first_bad.unwrap_or_else(|| {
            intersections
                .iter()
                .find(|r| {
                    matches!(r.kind, IntersectionKind::Ordinary | IntersectionKind::Weak)
                })
                .map(|r| xs.iter().position(|&x| x == r.x0).unwrap_or(0))
                .unwrap_or(0)
        });
        return Err(Error::InternalInconsistency {
            x0: xs[i],
            index: i,
            detail: format!(
                "sections all monotone = {all_monotone} but crossing records present = \
                 {has_crossings}; tolerance calibration suspect"
            ),
        });
    }
    let non_intersecting = !has_crossings;

    let touching_segments = extract_touching_segments(surface, tol);
    let (complete, boundary_report) = check_completeness(surface, tol.delta_complete);

    let completable_hint = if complete || !non_intersecting {
        false
    } else {
        deficient_sides_extendable(surface, &boundary_report, tol.delta_complete)
    };

    Ok(ExistenceVerdict {
        fd_exists: non_intersecting && complete,
        non_intersecting,
        complete,
        completable_hint,
        intersections,
        touching_segments,
        boundary_report,
    })
}

/// True when every boundary column that misses its 0/1 target is only a
/// truncation of the family's parameter domain, not a natural endpoint.
fn deficient_sides_extendable<T: Real, F: ParametricFamily<T>>(
    surface: &FiducialSurface<T, F>,
    report: &BoundaryReport<T>,
    delta: T,
) -> bool {
    let domain = surface.family().theta_domain();
    let theta = surface.theta_nodes();
    let (lo_node, hi_node) = (theta[0], theta[theta.len() - 1]);
    let zero_deficient = report.zero_side_max > delta;
    let one_deficient = report.one_side_min < T::one() - delta;
    let slack = (hi_node - lo_node) * T::of(1e-12);
    let (zero_node, one_node) = match report.direction {
        Direction::Increasing => (lo_node, hi_node),
        Direction::Decreasing => (hi_node, lo_node),
    };
    let side_extendable = |node: T| -> bool {
        if node == lo_node {
            domain.lo.is_none_or(|lo| lo < node - slack)
        } else {
            domain.hi.is_none_or(|hi| hi > node + slack)
        }
    };
    (!zero_deficient || side_extendable(zero_node))
        && (!one_deficient || side_extendable(one_node))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{AbsComposite, JoinedUniform, Translation};
    use crate::numeric::interp;
    use crate::surface::{Grid, SectionAxis};

    fn tol() -> Tolerances<f64> {
        Tolerances::default()
    }

    fn section(values: Vec<f64>) -> Section<f64> {
        let coords: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
        Section::new(SectionAxis::X, 0.0, coords, values).unwrap()
    }

    #[test]
    fn classifies_simple_shapes() {
        let t = tol();
        assert_eq!(
            classify_section(&section(vec![0.1, 0.2, 0.3, 0.4]), t.eps_mono, t.eps_plateau)
                .unwrap(),
            MonotoneClass::StrictlyIncreasing
        );
        assert_eq!(
            classify_section(&section(vec![0.9, 0.5, 0.2]), t.eps_mono, t.eps_plateau).unwrap(),
            MonotoneClass::StrictlyDecreasing
        );
        assert_eq!(
            classify_section(&section(vec![0.5, 0.5, 0.5]), t.eps_mono, t.eps_plateau).unwrap(),
            MonotoneClass::Constant
        );
        match classify_section(
            &section(vec![0.1, 0.3, 0.3, 0.3, 0.6]),
            t.eps_mono,
            t.eps_plateau,
        )
        .unwrap()
        {
            MonotoneClass::MonotoneWithPlateaus { direction, plateaus } => {
                assert_eq!(direction, Direction::Increasing);
                assert_eq!(plateaus, vec![(1.0, 3.0)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let coords = vec![0.0, 1.0, 2.0];
        let sec = Section::new(SectionAxis::X, 0.0, coords, vec![0.1, 0.2, 0.3]).unwrap();
        let t = tol();
        assert!(classify_section(&sec, t.eps_mono, t.eps_plateau).is_ok());
        // fewer than 3 coordinates cannot even form a Section
        assert!(Section::new(SectionAxis::X, 0.0, vec![0.0, 1.0], vec![0.1, 0.2]).is_err());
    }

    #[test]
    fn witness_for_tent_shape() {
        let t = tol();
        let values = vec![0.1, 0.3, 0.5, 0.7, 0.5, 0.3, 0.2];
        match classify_section(&section(values.clone()), t.eps_mono, t.eps_plateau).unwrap() {
            MonotoneClass::NonMonotone { witness } => {
                let (a, b) = witness.theta_pair;
                assert!(a < b);
                // level attained on both branches by construction
                let coords: Vec<f64> = (0..values.len()).map(|i| i as f64).collect();
                let va = interp(&coords, &values, a);
                let vb = interp(&coords, &values, b);
                assert!((va - witness.level).abs() < 1e-12);
                assert!((vb - witness.level).abs() < 1e-12);
                assert!(witness.not_in_constant_interval);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    fn joined_surface(n: usize) -> FiducialSurface<f64, JoinedUniform<f64>> {
        let fam = JoinedUniform::new(1.0, 4.0, 0.5).unwrap();
        let grid = Grid::uniform(-5.0, 5.0, n, -6.5, 4.5, n).unwrap();
        FiducialSurface::build(fam, grid).unwrap()
    }

    #[test]
    fn joined_uniform_point_a_section_is_non_monotone() {
        let s = joined_surface(401);
        let sec = s.x_section(1.25).unwrap();
        let t = tol();
        match classify_section(&sec, t.eps_mono, t.eps_plateau).unwrap() {
            MonotoneClass::NonMonotone { witness } => {
                assert!(witness.not_in_constant_interval);
                let (a, b) = witness.theta_pair;
                assert!(a < b);
                // the level is attained at both parameters on the sampled
                // polyline, and nearly so on the underlying family
                assert!((interp(sec.coords(), sec.values(), a) - witness.level).abs() < 1e-12);
                assert!((interp(sec.coords(), sec.values(), b) - witness.level).abs() < 1e-12);
                let fam = JoinedUniform::new(1.0, 4.0, 0.5).unwrap();
                assert!((fam.cdf(1.25, a) - witness.level).abs() < 1e-3);
                assert!((fam.cdf(1.25, b) - witness.level).abs() < 1e-3);
            }
            other => panic!("unexpected {other:?}"),
        }
        // below the vertex the complemented measure is monotone
        let sec = s.x_section(0.5).unwrap();
        assert!(classify_section(&sec, t.eps_mono, t.eps_plateau)
            .unwrap()
            .is_monotone());
    }

    #[test]
    fn normal_sections_strictly_increasing() {
        // window chosen so the weakest tail step still clears eps_plateau
        let grid = Grid::uniform(-4.0, 4.0, 101, -3.0, 3.0, 101).unwrap();
        let s = FiducialSurface::build(Translation::normal(), grid).unwrap();
        let t = tol();
        for &x0 in &[-1.0, 0.0, 1.0] {
            let sec = s.x_section(x0).unwrap();
            assert_eq!(
                classify_section(&sec, t.eps_mono, t.eps_plateau).unwrap(),
                MonotoneClass::StrictlyIncreasing
            );
        }
    }

    #[test]
    fn joined_uniform_intersections_beyond_vertex() {
        let s = joined_surface(201);
        let recs = detect_intersections(&s, &tol());
        assert!(!recs.is_empty());
        let x_t = 5.0 / 6.0;
        let h = 10.0 / 200.0;
        for r in &recs {
            assert!(matches!(
                r.kind,
                IntersectionKind::Ordinary | IntersectionKind::ProperInterval
            ));
            assert!(r.x0 > x_t - h, "record below the vertex at x = {}", r.x0);
        }
        // every node clearly beyond the vertex carries a record
        let mut expected = 0;
        let mut found = 0;
        for &x in s.x_nodes() {
            if x > x_t + h && x < 2.0 {
                expected += 1;
                if recs.iter().any(|r| r.x0 == x) {
                    found += 1;
                }
            }
        }
        assert!(expected > 0);
        assert_eq!(expected, found);
    }

    #[test]
    fn abs_normal_intersections_are_weak() {
        let fam = AbsComposite::new::<f64>(Translation::normal()).unwrap();
        let grid = Grid::uniform(0.0, 4.0, 81, -6.0, 6.0, 161).unwrap();
        let s = FiducialSurface::build(fam, grid).unwrap();
        let recs = detect_intersections(&s, &tol());
        assert!(!recs.is_empty());
        for r in &recs {
            assert_eq!(r.kind, IntersectionKind::Weak, "at x = {}", r.x0);
            // crossings sit at symmetric parameter values
            if r.thetas.len() == 2 {
                assert!((r.thetas[0] + r.thetas[1]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn abs_evd_intersections_are_ordinary() {
        let fam = AbsComposite::new::<f64>(Translation::evd()).unwrap();
        let grid = Grid::uniform(0.0, 4.0, 81, -8.0, 8.0, 161).unwrap();
        let s = FiducialSurface::build(fam, grid).unwrap();
        let recs = detect_intersections(&s, &tol());
        assert!(!recs.is_empty());
        assert!(recs.iter().all(|r| r.kind == IntersectionKind::Ordinary));
    }

    #[test]
    fn strictly_separated_family_has_no_records() {
        let grid = Grid::uniform(-4.0, 4.0, 101, -4.0, 4.0, 101).unwrap();
        let s = FiducialSurface::build(Translation::evd(), grid).unwrap();
        assert!(detect_intersections(&s, &tol()).is_empty());
        assert!(extract_touching_segments(&s, &tol()).is_empty());
    }

    #[test]
    fn proper_interval_at_the_vertex_node() {
        // theta_T = 0.3 puts the vertex exactly at x = 0.5, a grid node
        let fam = JoinedUniform::new(1.0, 4.0, 0.3).unwrap();
        let grid = Grid::uniform(-2.0, 2.0, 17, -5.0, 5.0, 101).unwrap();
        let s = FiducialSurface::build(fam, grid).unwrap();
        let recs = detect_intersections(&s, &tol());
        let vertex_rec = recs
            .iter()
            .find(|r| r.x0 == 0.5)
            .expect("vertex node should carry a record");
        assert_eq!(vertex_rec.kind, IntersectionKind::ProperInterval);
        assert!((vertex_rec.level - 0.6).abs() < 1e-9);
    }

    #[test]
    fn joined_uniform_plateaus_are_not_touching() {
        // its flat runs come from crossings and saturation, never touching
        let s = joined_surface(201);
        assert!(extract_touching_segments(&s, &tol()).is_empty());
    }

    #[test]
    fn gapped_family_touches_but_does_not_intersect() {
        let fam = Translation::gapped(1.0).unwrap();
        let grid = Grid::uniform(-4.0, 4.0, 81, -6.0, 6.0, 241).unwrap();
        let s = FiducialSurface::build(fam, grid).unwrap();
        assert!(detect_intersections(&s, &tol()).is_empty());
        let segs = extract_touching_segments(&s, &tol());
        assert!(!segs.is_empty());
        let seg = &segs[0];
        assert!(seg.x_end > seg.x_start);
        for k in 0..seg.xs.len() {
            assert!(seg.theta_lower[k] <= seg.theta_upper[k]);
            // at level one-half the touching interval tracks (-a - x, a - x)
            assert!((seg.theta_lower[k] - (-1.0 - seg.xs[k])).abs() < 0.2);
            assert!((seg.theta_upper[k] - (1.0 - seg.xs[k])).abs() < 0.2);
        }
    }

    #[test]
    fn completeness_verdicts() {
        let grid = Grid::uniform(-4.0, 4.0, 101, -8.0, 8.0, 101).unwrap();
        let s = FiducialSurface::build(Translation::normal(), grid).unwrap();
        let (ok, report) = check_completeness(&s, 1e-3);
        assert!(ok, "{report:?}");
        assert_eq!(report.direction, Direction::Increasing);

        // too narrow a parameter range leaves the boundaries unsaturated
        let grid = Grid::uniform(-4.0, 4.0, 51, -2.0, 2.0, 51).unwrap();
        let s = FiducialSurface::build(Translation::normal(), grid).unwrap();
        let (ok, _) = check_completeness(&s, 1e-3);
        assert!(!ok);
    }

    #[test]
    fn verdict_for_the_three_model_classes() {
        // separated and complete
        let fam = Translation::evd();
        let s = FiducialSurface::build(fam, Grid::auto(&fam, 201)).unwrap();
        let v = fd_existence_verdict(&s, &tol()).unwrap();
        assert!(v.fd_exists && v.non_intersecting && v.complete);

        // crossing members (auto window is wide enough to saturate)
        let fam = JoinedUniform::new(1.0, 4.0, 0.5).unwrap();
        let s = FiducialSurface::build(fam, Grid::auto(&fam, 201)).unwrap();
        let v = fd_existence_verdict(&s, &tol()).unwrap();
        assert!(!v.fd_exists && !v.non_intersecting);
        assert!(v.complete);

        // degenerate constant surface: incomplete
        struct Flat;
        impl ParametricFamily<f64> for Flat {
            fn cdf(&self, _x: f64, _t: f64) -> f64 {
                0.5
            }
            fn x_domain(&self) -> crate::families::Interval<f64> {
                crate::families::Interval::unbounded()
            }
            fn theta_domain(&self) -> crate::families::Interval<f64> {
                crate::families::Interval::unbounded()
            }
            fn x_window(&self) -> crate::families::Window<f64> {
                crate::families::Window { lo: -1.0, hi: 1.0 }
            }
            fn theta_window(&self) -> crate::families::Window<f64> {
                crate::families::Window { lo: -1.0, hi: 1.0 }
            }
            fn describe(&self) -> String {
                "flat".into()
            }
        }
        let s = FiducialSurface::build(Flat, Grid::uniform(-1.0, 1.0, 11, -1.0, 1.0, 11).unwrap())
            .unwrap();
        let v = fd_existence_verdict(&s, &tol()).unwrap();
        assert!(!v.complete && !v.fd_exists);
        // constant interior sections are the endpoint configuration
        assert!(v
            .intersections
            .iter()
            .all(|r| r.kind == IntersectionKind::CompleteIntervalEndpoint));
        assert!(!v.intersections.is_empty());
    }

    #[test]
    fn narrow_window_is_flagged_completable() {
        let grid = Grid::uniform(-4.0, 4.0, 51, -2.0, 2.0, 51).unwrap();
        let s = FiducialSurface::build(Translation::normal(), grid).unwrap();
        let v = fd_existence_verdict(&s, &tol()).unwrap();
        assert!(!v.complete && v.non_intersecting);
        assert!(v.completable_hint);
    }

    #[test]
    fn mixed_flank_configuration_trips_the_cross_validation() {
        // members coincide for x past 2 once the parameter exceeds 0.5, but
        // separate to the left: equality on one flank, inequality on the
        // other. The conservative weak label then contradicts the
        // all-sections-monotone classification, which is exactly the
        // calibration diagnostic the verdict is required to raise.
        struct HalfPinned;
        impl ParametricFamily<f64> for HalfPinned {
            fn cdf(&self, x: f64, t: f64) -> f64 {
                let release = (x / 2.0).clamp(0.0, 1.0);
                let eff = t - (t - 0.5).max(0.0) * release;
                crate::special::norm_cdf(x + eff)
            }
            fn x_domain(&self) -> crate::families::Interval<f64> {
                crate::families::Interval::unbounded()
            }
            fn theta_domain(&self) -> crate::families::Interval<f64> {
                crate::families::Interval::unbounded()
            }
            fn x_window(&self) -> crate::families::Window<f64> {
                crate::families::Window { lo: -3.0, hi: 2.5 }
            }
            fn theta_window(&self) -> crate::families::Window<f64> {
                crate::families::Window { lo: -2.0, hi: 2.0 }
            }
            fn describe(&self) -> String {
                "half pinned".into()
            }
        }
        let grid = Grid::uniform(-3.0, 2.5, 111, -2.0, 2.0, 81).unwrap();
        let s = FiducialSurface::build(HalfPinned, grid).unwrap();
        match fd_existence_verdict(&s, &tol()) {
            Err(Error::InternalInconsistency { .. }) => {}
            other => panic!("expected the cross-validation error, got {other:?}"),
        }
    }

    #[test]
    fn verdict_report_serializes() {
        let s = joined_surface(101);
        let v = fd_existence_verdict(&s, &tol()).unwrap();
        let json = serde_json::to_string(&v).unwrap();
        assert!(json.contains("\"fd_exists\":false"));
        assert!(json.contains("\"intersections\""));
        assert!(json.contains("\"boundary_report\""));
    }
}
