//! Error function and the base distributions used by the built-in families.
//!
//! The erf/erfc pair follows Cody's rational approximations (the classic
//! CALERF kernel), giving near machine precision for `f64` across the whole
//! range including the deep complementary tail.

use crate::real::Real;

const ERF_THRESHOLD: f64 = 0.46875;
const ERFC_XBIG: f64 = 26.543;
const INV_SQRT_PI: f64 = 5.641_895_835_477_563e-1;

const A: [f64; 5] = [
    3.161_123_743_870_565_6e0,
    1.138_641_541_510_501_6e2,
    3.774_852_376_853_02e2,
    3.209_377_589_138_469_4e3,
    1.857_777_061_846_031_5e-1,
];
const B: [f64; 4] = [
    2.360_129_095_234_412_2e1,
    2.440_246_379_344_441_7e2,
    1.282_616_526_077_372_3e3,
    2.844_236_833_439_171e3,
];
const C: [f64; 9] = [
    5.641_884_969_886_701e-1,
    8.883_149_794_388_377,
    6.611_919_063_714_163e1,
    2.986_351_381_974_001e2,
    8.819_522_212_417_69e2,
    1.712_047_612_634_070_7e3,
    2.051_078_377_826_071_6e3,
    1.230_339_354_797_997_2e3,
    2.153_115_354_744_038_3e-8,
];
const D: [f64; 8] = [
    1.574_492_611_070_983_5e1,
    1.176_939_508_913_125e2,
    5.371_811_018_620_099e2,
    1.621_389_574_566_690_3e3,
    3.290_799_235_733_459_7e3,
    4.362_619_090_143_247e3,
    3.439_367_674_143_721_6e3,
    1.230_339_354_803_749_5e3,
];
const P: [f64; 6] = [
    3.053_266_349_612_323_6e-1,
    3.603_448_999_498_044_5e-1,
    1.257_817_261_112_292_6e-1,
    1.608_378_514_874_227_5e-2,
    6.587_491_615_298_378e-4,
    1.631_538_713_730_209_7e-2,
];
const Q: [f64; 5] = [
    2.568_520_192_289_822,
    1.872_952_849_923_460_4,
    5.279_051_029_514_285e-1,
    6.051_834_131_244_132e-2,
    2.335_204_976_268_691_8e-3,
];

/// erf on the central interval |x| <= 0.46875.
fn erf_central<T: Real>(x: T) -> T {
    let z = if x.abs() > T::of(1.11e-16) { x * x } else { T::zero() };
    let mut num = T::of(A[4]) * z;
    let mut den = z;
    for i in 0..3 {
        num = (num + T::of(A[i])) * z;
        den = (den + T::of(B[i])) * z;
    }
    x * (num + T::of(A[3])) / (den + T::of(B[3]))
}

/// exp(-y^2) computed with the split-argument trick to keep the tail accurate.
fn exp_neg_sq<T: Real>(y: T) -> T {
    let sixteen = T::of(16.0);
    let ysq = (y * sixteen).trunc() / sixteen;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp()
}

/// erfc(y) for y > 0.46875.
fn erfc_positive<T: Real>(y: T) -> T {
    if y.as_f64() >= ERFC_XBIG {
        return T::zero();
    }
    if y <= T::of(4.0) {
        let mut num = T::of(C[8]) * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + T::of(C[i])) * y;
            den = (den + T::of(D[i])) * y;
        }
        exp_neg_sq(y) * (num + T::of(C[7])) / (den + T::of(D[7]))
    } else {
        let z = (y * y).recip();
        let mut num = T::of(P[5]) * z;
        let mut den = z;
        for i in 0..4 {
            num = (num + T::of(P[i])) * z;
            den = (den + T::of(Q[i])) * z;
        }
        let r = z * (num + T::of(P[4])) / (den + T::of(Q[4]));
        exp_neg_sq(y) * (T::of(INV_SQRT_PI) - r) / y
    }
}

/// Complementary error function.
pub fn erfc<T: Real>(x: T) -> T {
    let thresh = T::of(ERF_THRESHOLD);
    if x.abs() <= thresh {
        T::one() - erf_central(x)
    } else if x > T::zero() {
        erfc_positive(x)
    } else {
        T::two() - erfc_positive(-x)
    }
}

/// Error function.
pub fn erf<T: Real>(x: T) -> T {
    let thresh = T::of(ERF_THRESHOLD);
    if x.abs() <= thresh {
        erf_central(x)
    } else if x > T::zero() {
        T::one() - erfc_positive(x)
    } else {
        erfc_positive(-x) - T::one()
    }
}

/// Standard normal CDF.
#[inline]
pub fn norm_cdf<T: Real>(x: T) -> T {
    T::half() * erfc(-x * T::of(std::f64::consts::FRAC_1_SQRT_2))
}

/// Standard normal density.
#[inline]
pub fn norm_pdf<T: Real>(x: T) -> T {
    (-x * x * T::half()).exp() * T::of(0.398_942_280_401_432_7)
}

/// Extreme-value (Gumbel-type, left-skewed) CDF 1 - exp(-exp(u)).
#[inline]
pub fn evd_cdf<T: Real>(u: T) -> T {
    -(-u.exp()).exp_m1()
}

/// Extreme-value density exp(u - exp(u)).
#[inline]
pub fn evd_pdf<T: Real>(u: T) -> T {
    (u - u.exp()).exp()
}
