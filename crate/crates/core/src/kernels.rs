//! Scalar special functions: Gaussian density and tail, the hazard function
//! `ee(x) = phi(x)/phibar(x)` with its derivative recurrences, truncated-Gaussian
//! moments, and the margin map used by the TAP fixed-point solve.
//!
//! Contracts carried by this module (tested below and in the property suite):
//! `max{0,x} < ee(x) < 1+|x|`, `ee' = ee(ee-x) in (0,1)`,
//! `ee'' = ee[(2ee-x)(ee-x)-1] in (0,1)`, `ee''' in (-1/2,13)`, `|ee''''| <= 196`,
//! and `|x|^k phi(x) <= k phi(sqrt k)`.

use crate::real::{lit, Real};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("derivative order {0} outside 1..=4")]
    BadOrder(u32),
    #[error("margin target y = {y} is not above kappa = {kappa}; no solution exists")]
    MarginBelowKappa { y: f64, kappa: f64 },
    #[error("q = {0} outside [0, 1)")]
    BadOverlap(f64),
}

/// Standard Gaussian density.
#[inline]
pub fn phi<T: Real>(x: T) -> T {
    let inv_sqrt_2pi: T = lit(0.39894228040143267794);
    (-x * x / lit(2.0)).exp() * inv_sqrt_2pi
}

/// Upper Gaussian tail `phibar(x) = integral_x^inf phi`, via the complementary
/// error function so relative accuracy survives out to `x ~ 38` (the f64
/// subnormal floor; beyond that the tail is not representable).
#[inline]
pub fn phibar<T: Real>(x: T) -> T {
    erfc(x / lit::<T>(core::f64::consts::SQRT_2)) / lit(2.0)
}

// Rational-approximation erfc in the three classic ranges (Cody, "Rational
// Chebyshev approximation for the error function", Math. Comp. 1969). Peak
// relative error ~1e-16 in f64.
const ERF_A: [f64; 5] = [
    3.16112374387056560e0,
    1.13864154151050156e2,
    3.77485237685302021e2,
    3.20937758913846947e3,
    1.85777706184603153e-1,
];
const ERF_B: [f64; 4] = [
    2.36012909523441209e1,
    2.44024637934444173e2,
    1.28261652607737228e3,
    2.84423683343917062e3,
];
const ERF_C: [f64; 9] = [
    5.64188496988670089e-1,
    8.88314979438837594e0,
    6.61191906371416295e1,
    2.98635138197400131e2,
    8.81952221241769090e2,
    1.71204761263407058e3,
    2.05107837782607147e3,
    1.23033935479799725e3,
    2.15311535474403846e-8,
];
const ERF_D: [f64; 8] = [
    1.57449261107098347e1,
    1.17693950891312499e2,
    5.37181101862009858e2,
    1.62138957456669019e3,
    3.29079923573345963e3,
    4.36261909014324716e3,
    3.43936767414372164e3,
    1.23033935480374942e3,
];
const ERF_P: [f64; 6] = [
    3.05326634961232344e-1,
    3.60344899949804439e-1,
    1.25781726111229246e-1,
    1.60837851487422766e-2,
    6.58749161529837803e-4,
    1.63153871373020978e-2,
];
const ERF_Q: [f64; 5] = [
    2.56852019228982242e0,
    1.87295284992346047e0,
    5.27905102951428412e-1,
    6.05183413124413191e-2,
    2.33520497626869185e-3,
];

/// Complementary error function.
pub fn erfc<T: Real>(x: T) -> T {
    let y = x.abs();
    let one = T::one();
    if y <= lit(0.46875) {
        // erfc = 1 - erf on the central interval
        let z = if y >= lit(1e-10) { y * y } else { T::zero() };
        let mut num = lit::<T>(ERF_A[4]) * z;
        let mut den = z;
        for i in 0..3 {
            num = (num + lit(ERF_A[i])) * z;
            den = (den + lit(ERF_B[i])) * z;
        }
        let erf = x * (num + lit(ERF_A[3])) / (den + lit(ERF_B[3]));
        return one - erf;
    }
    let result = if y <= lit(4.0) {
        let mut num = lit::<T>(ERF_C[8]) * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + lit(ERF_C[i])) * y;
            den = (den + lit(ERF_D[i])) * y;
        }
        let r = (num + lit(ERF_C[7])) / (den + lit(ERF_D[7]));
        exp_neg_sq(y) * r
    } else {
        // asymptotic range
        let z = y * y;
        let zi = one / z;
        let mut num = lit::<T>(ERF_P[5]) * zi;
        let mut den = zi;
        for i in 0..4 {
            num = (num + lit(ERF_P[i])) * zi;
            den = (den + lit(ERF_Q[i])) * zi;
        }
        let r = zi * (num + lit(ERF_P[4])) / (den + lit(ERF_Q[4]));
        let inv_sqrt_pi: T = lit(0.56418958354775628695);
        (exp_neg_sq(y) / y * (inv_sqrt_pi - r)).max(T::zero())
    };
    if x < T::zero() {
        lit::<T>(2.0) - result
    } else {
        result
    }
}

/// exp(-y^2) split so the rounding of y^2 does not destroy relative accuracy.
#[inline]
fn exp_neg_sq<T: Real>(y: T) -> T {
    let sixteen = lit::<T>(16.0);
    let ysq = (y * sixteen).trunc() / sixteen;
    let del = (y - ysq) * (y + ysq);
    (-ysq * ysq).exp() * (-del).exp()
}

/// Gaussian hazard `ee(x) = phi(x)/phibar(x)`: the mean of a standard Gaussian
/// conditioned to exceed x. Strictly increasing, with `max{0,x} < ee(x) < 1+|x|`.
///
/// For x >= 30 the direct ratio runs into tail underflow, so the Laplace
/// continued fraction `x + 1/(x + 2/(x + 3/(x + ...)))` takes over; for
/// x <= -38.5 the true value drops below the f64 subnormal range and the
/// result clamps to the smallest positive normal value.
pub fn ee<T: Real>(x: T) -> T {
    if x >= lit(30.0) {
        return ee_continued_fraction(x);
    }
    let r = phi(x) / phibar(x);
    if r > T::zero() {
        r
    } else {
        T::min_positive_value()
    }
}

fn ee_continued_fraction<T: Real>(x: T) -> T {
    // 14 levels give well below 1 ulp at x >= 30
    let mut tail = x;
    for k in (1..=14u32).rev() {
        tail = x + lit::<T>(f64::from(k)) / tail;
    }
    tail
}

/// Derivatives of `ee` through the closed recurrences (never finite differences):
/// order 1: `ee(ee-x)`, order 2: `ee[(2ee-x)(ee-x)-1]`,
/// order 3: `-2(1-ee')ee' + (2ee-x)ee''`, order 4: `ee''(6ee'-3) + ee'''(2ee-x)`.
pub fn ee_deriv<T: Real>(x: T, order: u32) -> Result<T, KernelError> {
    if !(1..=4).contains(&order) {
        return Err(KernelError::BadOrder(order));
    }
    let e = ee(x);
    let two = lit::<T>(2.0);
    let e1 = e * (e - x);
    if order == 1 {
        return Ok(e1);
    }
    let e2 = e * ((two * e - x) * (e - x) - T::one());
    if order == 2 {
        return Ok(e2);
    }
    let e3 = -two * (T::one() - e1) * e1 + (two * e - x) * e2;
    if order == 3 {
        return Ok(e3);
    }
    Ok(e2 * (lit::<T>(6.0) * e1 - lit(3.0)) + e3 * (two * e - x))
}

/// Moments of a standard Gaussian conditioned to exceed the threshold `xi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncGaussMoments<T> {
    pub xi: T,
    /// E[nu] = ee(xi)
    pub mean: T,
    /// E[nu^2] = xi ee(xi) + 1
    pub second: T,
    /// E|nu| <= 1 + |xi|
    pub abs_first: T,
    /// E|nu|^3 <= (2 + xi^2)(1 + |xi|)
    pub abs_third: T,
}

/// Closed forms for the truncated moments, case-split on the sign of `xi`.
pub fn trunc_moments<T: Real>(xi: T) -> TruncGaussMoments<T> {
    let e = ee(xi);
    let mean = e;
    let second = xi * e + T::one();
    let (abs_first, abs_third) = if xi >= T::zero() {
        (e, (lit::<T>(2.0) + xi * xi) * e)
    } else {
        let pb = phibar(xi);
        let p0: T = lit(0.39894228040143267794);
        let px = phi(xi);
        (
            (lit::<T>(2.0) * p0 - px) / pb,
            (lit::<T>(4.0) * p0 - (xi * xi + lit(2.0)) * px) / pb,
        )
    };
    TruncGaussMoments {
        xi,
        mean,
        second,
        abs_first,
        abs_third,
    }
}

/// The margin map `L(h) = h + sqrt(1-q) ee((kappa-h)/sqrt(1-q))`: sends the TAP
/// local field to the constraint margin. Strictly increasing from R onto
/// (kappa, inf) with slope in (0,1).
pub fn margin_map<T: Real>(q: T, kappa: T, h: T) -> Result<T, KernelError> {
    check_overlap(q)?;
    let s = (T::one() - q).sqrt();
    Ok(h + s * ee((kappa - h) / s))
}

/// Inverse of [`margin_map`] by bisection (guaranteed by monotonicity).
/// Requires `y > kappa`; the residual `|L(h) - y|` ends below 1e-12 in f64.
pub fn margin_map_inverse<T: Real>(q: T, kappa: T, y: T) -> Result<T, KernelError> {
    check_overlap(q)?;
    if !(y > kappa) {
        return Err(KernelError::MarginBelowKappa {
            y: y.to_f64().unwrap_or(f64::NAN),
            kappa: kappa.to_f64().unwrap_or(f64::NAN),
        });
    }
    let s = (T::one() - q).sqrt();
    // L(h) > h always, so h = y brackets from above; walk down geometrically
    // for the lower end (L -> kappa as h -> -inf, and y > kappa).
    let mut hi = y;
    let mut lo = y - s * (T::one() + ((kappa - y) / s).abs());
    let mut step = T::one().max(y.abs());
    let l = |h: T| h + s * ee((kappa - h) / s);
    for _ in 0..200 {
        if l(lo) < y {
            break;
        }
        lo = lo - step;
        step = step + step;
    }
    let tol = T::epsilon() * (T::one() + y.abs() + lo.abs()) * lit(4.0);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = (hi + lo) / lit(2.0);
        if l(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((hi + lo) / lit(2.0))
}

#[inline]
fn check_overlap<T: Real>(q: T) -> Result<(), KernelError> {
    if q >= T::zero() && q < T::one() {
        Ok(())
    } else {
        Err(KernelError::BadOverlap(q.to_f64().unwrap_or(f64::NAN)))
    }
}
