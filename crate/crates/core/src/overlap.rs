//! The overlap-dependent exponent functions of the second-moment calculation:
//! the pair-measure algebra (B, S, D, Gamma), the tilt parametrization
//! `lambda = ell(A)` with `A = exp(2 atanh tau)`, the entropy exponent H(lambda)
//! with its derivatives, the satisfiability exponents I_s, P(lambda), B(lambda,s),
//! A(lambda) = inf_s B(lambda,s), and the fixed-s majorant Q(lambda).
//!
//! Every evaluation pins (q, psi) to a solved [`SaddlePoint`]; nothing here
//! reads global state.

use crate::kernels::{ee, phibar};
use crate::quad::{integrate_gauss, integrate_inner_trunc, QuadError, U_TRUNC};
use crate::replica::{h_star, ModelParams, SaddlePoint, SolverError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OverlapError {
    #[error("tilt parameter A = {0} must be positive")]
    BadTilt(f64),
    #[error("correlation excess D = {d} outside the nonnegativity band for H = {h}")]
    BandViolation { h: f64, d: f64 },
    #[error("lambda = {0} outside the open interval (lambda_min, 1)")]
    LambdaOutOfRange(f64),
    #[error("s-minimizer stuck at the search-bracket edge (s = {0})")]
    EdgeMinimizer(f64),
    #[error("derivative order {0} not in {{1, 2}}")]
    BadOrder(u32),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// A point on the overlap curve: `A = exp(2 atanh tau)` and `lambda = ell(A)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OverlapPoint {
    pub lambda: f64,
    pub tau: f64,
    pub a: f64,
}

/// `A(tau) = exp(2 atanh tau)`, with the closures `A(-1) = 0`, `A(1) = inf`.
#[inline]
pub fn tau_to_a(tau: f64) -> f64 {
    if tau <= -1.0 {
        0.0
    } else if tau >= 1.0 {
        f64::INFINITY
    } else {
        (2.0 * tau.atanh()).exp()
    }
}

#[inline]
pub fn a_to_tau(a: f64) -> f64 {
    if a == 0.0 {
        -1.0
    } else if a.is_infinite() {
        1.0
    } else {
        (a - 1.0) / (a + 1.0)
    }
}

/// Output of the two-spin tilt algebra at (H, A).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairAlgebra {
    /// Delta = sqrt(A^2 + m^2 - (Am)^2)
    pub delta: f64,
    /// tilt magnitude B_H(A), the admissible root of the pair-marginal equation
    pub b: f64,
    /// S_H(A) = B_H(A)^{-sgn H}
    pub s: f64,
    /// correlation excess D_H(A)
    pub d: f64,
}

/// `D_H(A) = (A^2-1)(1-m^2)^2 / (Delta+1)^2`, the admissible root.
#[inline]
pub fn d_of(m: f64, a: f64) -> f64 {
    let delta = delta_of(m, a);
    (a * a - 1.0) * (1.0 - m * m).powi(2) / (delta + 1.0).powi(2)
}

/// `dD_H/dA = 2A(1-m^2)^2 / (Delta (Delta+1)^2)`, continuous at A = 1 where it
/// equals `(1-m^2)^2/2`.
#[inline]
pub fn d_prime(m: f64, a: f64) -> f64 {
    let delta = delta_of(m, a);
    2.0 * a * (1.0 - m * m).powi(2) / (delta * (delta + 1.0).powi(2))
}

#[inline]
fn delta_of(m: f64, a: f64) -> f64 {
    (a * a + m * m - (a * m) * (a * m)).sqrt()
}

/// The (Delta, B, S, D) algebra. B is computed from whichever printed form has
/// its denominator bounded away from zero, selected by the sign of m.
pub fn pair_algebra(h: f64, a: f64) -> Result<PairAlgebra, OverlapError> {
    if !(a > 0.0) {
        return Err(OverlapError::BadTilt(a));
    }
    let m = h.tanh();
    let delta = delta_of(m, a);
    let b = if m >= 0.0 {
        (delta + m) / (a * (1.0 - m))
    } else {
        a * (1.0 + m) / (delta - m)
    };
    let s = if h == 0.0 {
        1.0
    } else if h > 0.0 {
        1.0 / b
    } else {
        b
    };
    Ok(PairAlgebra {
        delta,
        b,
        s,
        d: d_of(m, a),
    })
}

/// Conjugate root of the pair-marginal equation; violates the nonnegativity
/// band except at A = H = 0.
pub fn d_conjugate(h: f64, a: f64) -> f64 {
    let m = h.tanh();
    let d = d_of(m, a);
    (1.0 - m * m).powi(2) / d
}

/// The two-spin distribution with magnetization tanh H and correlation excess D.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct PairLaw {
    pub h_field: f64,
    pub m: f64,
    pub p: f64,
    pub d: f64,
    /// cell masses ordered (++, +-, -+, --)
    pub cells: [f64; 4],
}

const BAND_SLACK: f64 = 1e-14;

/// Band of admissible D at magnetization m: `[-(1-|m|)^2, 1-m^2]`.
#[inline]
pub fn d_band(m: f64) -> (f64, f64) {
    (-(1.0 - m.abs()).powi(2), 1.0 - m * m)
}

/// Build the pair law, rejecting D outside the band by more than 1e-14
/// (inside that slack the offending cell clamps to zero).
pub fn pair_law(h: f64, d: f64) -> Result<PairLaw, OverlapError> {
    let m = h.tanh();
    let (d_lo, d_hi) = d_band(m);
    if d < d_lo - BAND_SLACK || d > d_hi + BAND_SLACK {
        return Err(OverlapError::BandViolation { h, d });
    }
    let pp = (1.0 + m).powi(2) + d;
    let pm = 1.0 - m * m - d;
    let mm = (1.0 - m).powi(2) + d;
    let cells = [
        (pp / 4.0).max(0.0),
        (pm / 4.0).max(0.0),
        (pm / 4.0).max(0.0),
        (mm / 4.0).max(0.0),
    ];
    Ok(PairLaw {
        h_field: h,
        m,
        p: (1.0 + m) / 2.0,
        d,
        cells,
    })
}

/// Shannon entropy of the pair law, with the 0 log 0 = 0 convention at the
/// band edges.
pub fn gamma_entropy(h: f64, d: f64) -> Result<f64, OverlapError> {
    let law = pair_law(h, d)?;
    let mut s = 0.0;
    for c in law.cells {
        if c > 0.0 {
            s -= c * c.ln();
        }
    }
    Ok(s)
}

const ELL_TOL: f64 = 1e-12;

/// `ell(A) = E[ D_{sqrt(psi) Z}(A) ] / (1-q)` at the saddle. Strictly
/// increasing from `lambda_min = ell(0)` to `ell(inf) = 1`.
pub fn ell(a: f64, sp: &SaddlePoint) -> Result<f64, OverlapError> {
    if a < 0.0 {
        return Err(OverlapError::BadTilt(a));
    }
    if a.is_infinite() {
        return Ok(1.0);
    }
    let s = sp.psi_star.sqrt();
    let v = integrate_gauss(|z: f64| d_of((s * z).tanh(), a), -9.0, 9.0, ELL_TOL)?;
    Ok(v / (1.0 - sp.q_star))
}

/// `ell'(A) = E[ D'_{sqrt(psi) Z}(A) ] / (1-q)`.
pub fn ell_prime(a: f64, sp: &SaddlePoint) -> Result<f64, OverlapError> {
    if !(a > 0.0) {
        return Err(OverlapError::BadTilt(a));
    }
    let s = sp.psi_star.sqrt();
    let v = integrate_gauss(|z: f64| d_prime((s * z).tanh(), a), -9.0, 9.0, ELL_TOL)?;
    Ok(v / (1.0 - sp.q_star))
}

/// Closed form of `ell(0)`: `-E[(1 - |tanh(sqrt(psi) Z)|)^2] / (1-q)`.
pub fn lambda_min(sp: &SaddlePoint) -> Result<f64, OverlapError> {
    let s = sp.psi_star.sqrt();
    let v = integrate_gauss(
        |z: f64| {
            let t = 1.0 - (s * z).tanh().abs();
            t * t
        },
        -9.0,
        9.0,
        ELL_TOL,
    )?;
    Ok(-v / (1.0 - sp.q_star))
}

/// Invert `lambda = ell(A)` by bisection in tau on (-1, 1).
pub fn ell_inverse(lambda: f64, sp: &SaddlePoint) -> Result<OverlapPoint, OverlapError> {
    let lmin = lambda_min(sp)?;
    if !(lambda > lmin && lambda < 1.0) {
        return Err(OverlapError::LambdaOutOfRange(lambda));
    }
    let (mut lo, mut hi) = (-1.0 + 1e-16, 1.0 - 1e-16);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if ell(tau_to_a(mid), sp)? < lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = 0.5 * (lo + hi);
    Ok(OverlapPoint {
        lambda,
        tau,
        a: tau_to_a(tau),
    })
}

/// Pair-entropy exponent `H(lambda) = -2 H* + E Gamma(sqrt(psi) Z, D(A(lambda)))`.
/// The singular endpoint A = inf takes the closed value `-H*`.
pub fn h_of_lambda(pt: &OverlapPoint, sp: &SaddlePoint) -> Result<f64, OverlapError> {
    let hs = h_star(sp)?;
    if pt.a.is_infinite() {
        return Ok(-hs);
    }
    if !(pt.a > 0.0) && pt.a != 0.0 {
        return Err(OverlapError::BadTilt(pt.a));
    }
    let s = sp.psi_star.sqrt();
    let a = pt.a;
    let v = integrate_gauss(
        |z: f64| {
            let h = s * z;
            gamma_entropy(h, d_of(h.tanh(), a)).expect("admissible root stays in band")
        },
        -9.0,
        9.0,
        ELL_TOL,
    )?;
    Ok(-2.0 * hs + v)
}

/// `H'(lambda) = -(1-q) log A / 2` and `H''(lambda) = -(1-q) / (2 A ell'(A))`.
pub fn h_deriv(pt: &OverlapPoint, sp: &SaddlePoint, order: u32) -> Result<f64, OverlapError> {
    let omq = 1.0 - sp.q_star;
    match order {
        1 => Ok(-omq * pt.a.ln() / 2.0),
        2 => {
            if !(pt.a > 0.0) || pt.a.is_infinite() {
                return Err(OverlapError::BadTilt(pt.a));
            }
            Ok(-omq / (2.0 * pt.a * ell_prime(pt.a, sp)?))
        }
        n => Err(OverlapError::BadOrder(n)),
    }
}

const I_TOL: f64 = 2e-9;

/// The double-integral exponent
/// `I_s(lambda) = alpha E E_xi log phibar((gamma z - lambda nu)/sqrt(1-lambda^2) - ee(gamma z) s / (sqrt(psi) sqrt(1-q)))`
/// with `nu` the Gaussian conditioned to exceed `gamma z`.
pub fn i_s(lambda: f64, s: f64, sp: &SaddlePoint, p: &ModelParams) -> Result<f64, OverlapError> {
    if lambda.abs() >= 1.0 {
        return Err(OverlapError::LambdaOutOfRange(lambda));
    }
    let gamma = sp.gamma;
    let c = ((1.0 - lambda) / (1.0 + lambda)).sqrt();
    let k = lambda / (1.0 - lambda * lambda).sqrt();
    let s_coef = s / (sp.psi_star.sqrt() * (1.0 - sp.q_star).sqrt());
    let v = integrate_inner_trunc(
        |z: f64, x: f64| {
            let shift = if s == 0.0 { 0.0 } else { ee(gamma * z) * s_coef };
            phibar(gamma * c * z - k * x - shift).ln()
        },
        |z: f64| gamma * z,
        0.0,
        U_TRUNC,
        I_TOL,
    )?;
    Ok(p.alpha * v)
}

/// `I(0) = alpha E log phibar(gamma Z)` (one-dimensional closed form).
pub fn i_zero(sp: &SaddlePoint, p: &ModelParams) -> Result<f64, OverlapError> {
    let gamma = sp.gamma;
    let v = integrate_gauss(|z: f64| phibar(gamma * z).ln(), -9.0, 9.0, 1e-12)?;
    Ok(p.alpha * v)
}

/// `B(lambda, s) = s^2/2 - sqrt(psi(1-q)) s sqrt((1-lambda)/(1+lambda)) + I_s(lambda) - I(lambda)`.
pub fn b_fn(lambda: f64, s: f64, sp: &SaddlePoint, p: &ModelParams) -> Result<f64, OverlapError> {
    if s == 0.0 {
        return Ok(0.0);
    }
    let coef = (sp.psi_star * (1.0 - sp.q_star)).sqrt();
    let c = ((1.0 - lambda) / (1.0 + lambda)).sqrt();
    Ok(s * s / 2.0 - coef * s * c + i_s(lambda, s, sp, p)? - i_s(lambda, 0.0, sp, p)?)
}

const S_BRACKET: f64 = 5.0;
const GOLDEN: f64 = 0.618033988749894848;

/// `A(lambda) = inf_s B(lambda, s)` by golden-section over s (B is convex in s).
/// Returns (value, argmin). A minimizer pinned to the bracket edge expands the
/// bracket once; a second pin is an error.
pub fn a_fn(lambda: f64, sp: &SaddlePoint, p: &ModelParams) -> Result<(f64, f64), OverlapError> {
    let i_base = i_s(lambda, 0.0, sp, p)?;
    let coef = (sp.psi_star * (1.0 - sp.q_star)).sqrt();
    let c = ((1.0 - lambda) / (1.0 + lambda)).sqrt();
    let b_of = |s: f64| -> Result<f64, OverlapError> {
        if s == 0.0 {
            return Ok(0.0);
        }
        Ok(s * s / 2.0 - coef * s * c + i_s(lambda, s, sp, p)? - i_base)
    };
    let (mut lo, mut hi) = (-S_BRACKET, S_BRACKET);
    for attempt in 0..2 {
        let (value, s_opt) = golden_section(&b_of, lo, hi, 1e-8)?;
        let edge = (hi - lo) * 1e-3;
        if s_opt - lo > edge && hi - s_opt > edge {
            return Ok((value, s_opt));
        }
        if attempt == 0 {
            lo *= 2.0;
            hi *= 2.0;
        } else {
            return Err(OverlapError::EdgeMinimizer(s_opt));
        }
    }
    unreachable!()
}

fn golden_section(
    f: &impl Fn(f64) -> Result<f64, OverlapError>,
    mut lo: f64,
    mut hi: f64,
    xtol: f64,
) -> Result<(f64, f64), OverlapError> {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > xtol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let s = 0.5 * (lo + hi);
    Ok((f(s)?, s))
}

/// `P(lambda) = -psi(1-q) lambda/(1+lambda) + I(lambda) - I(0)`, with I(0)
/// evaluated through the same nested quadrature path so the lambda = 0 value
/// cancels exactly.
pub fn p_of_lambda(lambda: f64, sp: &SaddlePoint, p: &ModelParams) -> Result<f64, OverlapError> {
    let head = -sp.psi_star * (1.0 - sp.q_star) * lambda / (1.0 + lambda);
    Ok(head + i_s(lambda, 0.0, sp, p)? - i_s(0.0, 0.0, sp, p)?)
}

/// `Q(lambda)`: the fixed s = 0.2 majorant of `P + A`.
pub fn q_fn(lambda: f64, sp: &SaddlePoint, p: &ModelParams) -> Result<f64, OverlapError> {
    let s = 0.2;
    let coef = (sp.psi_star * (1.0 - sp.q_star)).sqrt();
    let c = ((1.0 - lambda) / (1.0 + lambda)).sqrt();
    let head = -sp.psi_star * (1.0 - sp.q_star) * lambda / (1.0 + lambda);
    Ok(s * s / 2.0 - s * coef * c + head + i_s(lambda, s, sp, p)? - i_s(0.0, 0.0, sp, p)?)
}

/// One row of the exponent table.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExponentSample {
    pub lambda: f64,
    pub h_val: f64,
    pub p_val: f64,
    pub a_val: f64,
    pub s_val: f64,
    pub s_opt: f64,
    /// H + P
    pub sp_val: f64,
    /// H + Q
    pub sq_val: f64,
}

/// Evaluate the exponent family on a lambda grid (each entry must lie in
/// `(lambda_min, 1)`); output is ordered by lambda.
pub fn s_curves(
    grid: &[f64],
    sp: &SaddlePoint,
    p: &ModelParams,
) -> Result<Vec<ExponentSample>, OverlapError> {
    let mut lams: Vec<f64> = grid.to_vec();
    lams.sort_by(|a, b| a.partial_cmp(b).expect("finite lambda grid"));
    let mut out = Vec::with_capacity(lams.len());
    for lam in lams {
        let pt = ell_inverse(lam, sp)?;
        let h_val = h_of_lambda(&pt, sp)?;
        let p_val = p_of_lambda(lam, sp, p)?;
        let (a_val, s_opt) = a_fn(lam, sp, p)?;
        let sq_val = h_val + q_fn(lam, sp, p)?;
        out.push(ExponentSample {
            lambda: lam,
            h_val,
            p_val,
            a_val,
            s_val: h_val + p_val + a_val,
            s_opt,
            sp_val: h_val + p_val,
            sq_val,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn pair_algebra_symmetric_point() {
        // H = 0: B = S = 1, D = (A-1)/(A+1)
        for &a in &[0.3, 1.0, 2.5, 40.0] {
            let alg = pair_algebra(0.0, a).unwrap();
            assert_abs_diff_eq!(alg.b, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(alg.s, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(alg.d, (a - 1.0) / (a + 1.0), epsilon = 1e-13);
        }
        assert!(pair_algebra(0.4, 0.0).is_err());
        assert!(pair_algebra(0.4, -1.0).is_err());
    }

    #[test]
    fn pair_algebra_reference_value() {
        let alg = pair_algebra(0.7, 2.0).unwrap();
        assert_abs_diff_eq!(alg.b, 2.91753869317489446, epsilon = 1e-13);
    }

    #[test]
    fn d_vanishes_at_unit_tilt_with_known_slope() {
        for &h in &[-1.3, 0.0, 0.4, 2.0] {
            let m: f64 = h.tanh();
            assert_eq!(d_of(m, 1.0), 0.0);
            assert_abs_diff_eq!(d_prime(m, 1.0), (1.0 - m * m).powi(2) / 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn conjugate_root_violates_band() {
        for &(h, a) in &[(0.5, 2.0), (-1.1, 0.3), (0.2, 7.0)] {
            let m: f64 = h.tanh();
            let dc = d_conjugate(h, a);
            let (lo, hi) = d_band(m);
            assert!(dc < lo - 1e-12 || dc > hi + 1e-12, "conjugate in band at ({h},{a})");
        }
    }

    #[test]
    fn pair_law_marginals_and_band() {
        let law = pair_law(0.8, 0.1).unwrap();
        let sum: f64 = law.cells.iter().sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-14);
        // row marginal = (1+m)/2
        assert_abs_diff_eq!(law.cells[0] + law.cells[1], law.p, epsilon = 1e-14);
        assert_abs_diff_eq!(law.cells[0] + law.cells[2], law.p, epsilon = 1e-14);
        assert!(pair_law(0.8, 0.9).is_err()); // above 1 - m^2
    }

    #[test]
    fn gamma_entropy_product_and_diagonal_limits() {
        // D = 0: product measure, entropy 2 H2(p)
        use crate::replica::binary_entropy;
        for &h in &[0.0f64, 0.5, -1.2] {
            let p = (1.0 + h.tanh()) / 2.0;
            assert_abs_diff_eq!(
                gamma_entropy(h, 0.0).unwrap(),
                2.0 * binary_entropy(p),
                epsilon = 1e-13
            );
            // D at the diagonal edge 1 - m^2: entropy H2(p)
            let m = h.tanh();
            assert_abs_diff_eq!(
                gamma_entropy(h, 1.0 - m * m).unwrap(),
                binary_entropy(p),
                epsilon = 1e-13
            );
        }
        // reference value
        let d = d_of(0.7f64.tanh(), 2.0);
        assert_abs_diff_eq!(
            gamma_entropy(0.7, d).unwrap(),
            0.964916459526300066,
            epsilon = 1e-13
        );
    }

    #[test]
    fn gamma_stationarity_in_d() {
        // dGamma/dD at D_H(A) = -log(A)/2
        let h = 0.9;
        let a = 2.3;
        let d = d_of(h.tanh(), a);
        let eps = 1e-6;
        let fd = (gamma_entropy(h, d + eps).unwrap() - gamma_entropy(h, d - eps).unwrap())
            / (2.0 * eps);
        assert_abs_diff_eq!(fd, -a.ln() / 2.0, epsilon = 1e-6);
    }

    #[test]
    fn gamma_symmetry_under_field_flip() {
        for &(h, a) in &[(0.5, 2.0), (1.7, 0.4)] {
            let d1 = d_of(h, a);
            let d2 = d_of(-h, a);
            assert_abs_diff_eq!(d1, d2, epsilon = 1e-14);
            assert_abs_diff_eq!(
                gamma_entropy(h, d1).unwrap(),
                gamma_entropy(-h, d2).unwrap(),
                epsilon = 1e-14
            );
        }
    }

    fn test_saddle() -> (SaddlePoint, ModelParams) {
        let p = ModelParams::zero_margin(0.833078599739579).unwrap();
        (crate::replica::solve_saddle(&p).unwrap(), p)
    }

    #[test]
    fn ell_endpoints_and_reference_values() {
        let (sp, _) = test_saddle();
        assert_abs_diff_eq!(ell(1.0, &sp).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ell(0.5, &sp).unwrap(), -0.209668729465218669, epsilon = 1e-10);
        assert_abs_diff_eq!(ell(2.0, &sp).unwrap(), 0.268350201137875497, epsilon = 1e-10);
        assert_abs_diff_eq!(
            lambda_min(&sp).unwrap(),
            -0.424304351652261105,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(ell(0.0, &sp).unwrap(), lambda_min(&sp).unwrap(), epsilon = 1e-11);
        // ell(A -> inf) -> 1
        assert!((ell(1e8, &sp).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn ell_inverse_round_trip() {
        let (sp, _) = test_saddle();
        for &tau in &[-0.8, -0.3, 0.0001, 0.4, 0.93] {
            let lam = ell(tau_to_a(tau), &sp).unwrap();
            let pt = ell_inverse(lam, &sp).unwrap();
            assert_abs_diff_eq!(ell(pt.a, &sp).unwrap(), lam, epsilon = 1e-9);
        }
        assert!(ell_inverse(-0.43, &sp).is_err());
        assert!(ell_inverse(1.0, &sp).is_err());
    }

    #[test]
    fn h_of_lambda_anchors() {
        let (sp, _) = test_saddle();
        let at_zero = h_of_lambda(
            &OverlapPoint {
                lambda: 0.0,
                tau: 0.0,
                a: 1.0,
            },
            &sp,
        )
        .unwrap();
        assert_abs_diff_eq!(at_zero, 0.0, epsilon = 1e-9);
        let at_one = h_of_lambda(
            &OverlapPoint {
                lambda: 1.0,
                tau: 1.0,
                a: f64::INFINITY,
            },
            &sp,
        )
        .unwrap();
        assert_abs_diff_eq!(at_one, -0.343661329648832, epsilon = 1e-9);
    }

    #[test]
    fn h_deriv_forms() {
        let (sp, _) = test_saddle();
        let pt = OverlapPoint {
            lambda: 0.0,
            tau: 0.0,
            a: 1.0,
        };
        assert_abs_diff_eq!(h_deriv(&pt, &sp, 1).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            h_deriv(&pt, &sp, 2).unwrap(),
            -0.608075554352091,
            epsilon = 1e-9
        );
        assert!(h_deriv(&pt, &sp, 3).is_err());
        // concavity on a grid
        for &tau in &[-0.5, -0.2, 0.3, 0.6] {
            let a = tau_to_a(tau);
            let lam = ell(a, &sp).unwrap();
            let pt = OverlapPoint { lambda: lam, tau, a };
            assert!(h_deriv(&pt, &sp, 2).unwrap() < 0.0);
        }
    }
}
