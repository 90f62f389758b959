//! Small numeric kernels: bracketed root finding, golden-section maximization,
//! trapezoid sums and piecewise-linear interpolation.

use crate::real::Real;

/// Bisection on a bracketing interval. `f(lo)` and `f(hi)` must have opposite
/// signs (either may be zero). Converges to absolute width `tol`.
pub fn bisect<T: Real>(mut lo: T, mut hi: T, tol: T, mut f: impl FnMut(T) -> T) -> T {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return lo;
    }
    if fhi == T::zero() {
        return hi;
    }
    debug_assert!(flo.signum() != fhi.signum(), "bisect requires a bracket");
    // 1 bit per step; 200 caps f32 and f64 alike
    for _ in 0..200 {
        let mid = T::half() * (lo + hi);
        if hi - lo <= tol || mid == lo || mid == hi {
            return mid;
        }
        let fm = f(mid);
        if fm == T::zero() {
            return mid;
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    T::half() * (lo + hi)
}

/// Golden-section search for the maximum of a unimodal function on `[lo, hi]`.
/// Returns the abscissa once the interval shrinks below `tol`.
pub fn golden_max<T: Real>(mut lo: T, mut hi: T, tol: T, mut f: impl FnMut(T) -> T) -> T {
    let inv_phi = T::of(0.618_033_988_749_894_9);
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        }
    }
    T::half() * (lo + hi)
}

/// Composite trapezoid sum over sampled (coords, values).
pub fn trapezoid<T: Real>(coords: &[T], values: &[T]) -> T {
    debug_assert_eq!(coords.len(), values.len());
    let mut acc = T::zero();
    for i in 1..coords.len() {
        acc += (coords[i] - coords[i - 1]) * (values[i] + values[i - 1]) * T::half();
    }
    acc
}

/// Running trapezoid sums; entry `i` integrates up to `coords[i]`.
pub fn trapezoid_cumulative<T: Real>(coords: &[T], values: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); coords.len()];
    for i in 1..coords.len() {
        out[i] = out[i - 1] + (coords[i] - coords[i - 1]) * (values[i] + values[i - 1]) * T::half();
    }
    out
}

/// Linear interpolation of sampled (coords, values) at `x`; coords strictly
/// increasing, `x` within their span.
pub fn interp<T: Real>(coords: &[T], values: &[T], x: T) -> T {
    debug_assert!(coords.len() >= 2);
    let n = coords.len();
    if x <= coords[0] {
        return values[0];
    }
    if x >= coords[n - 1] {
        return values[n - 1];
    }
    let j = coords.partition_point(|&c| c < x);
    let (c0, c1) = (coords[j - 1], coords[j]);
    let (v0, v1) = (values[j - 1], values[j]);
    v0 + (x - c0) / (c1 - c0) * (v1 - v0)
}
