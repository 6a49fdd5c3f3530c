//! Replica-symmetric saddle point of the Ising perceptron: the `P`/`R`
//! recursion, the fixed point `(q*, psi*)`, the free-entropy surface and its
//! root `alpha*`, and the computer-assisted inequality checks that certify the
//! fixed-point bracket.

use crate::kernels::{ee, ee_deriv, phibar};
use crate::quad::{integrate_gauss, BoundBracket, QuadError};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("q = {0} outside [0, 1)")]
    BadOverlap(f64),
    #[error("alpha = {0} must be positive")]
    BadAlpha(f64),
    #[error("no sign change of q - P(R(q,alpha)) on the bracket [{lo}, {hi}]; alpha outside the certified range")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("fixed-point iteration did not converge (last residual {residual:e})")]
    NoConvergence { residual: f64 },
    #[error(transparent)]
    Quad(#[from] QuadError),
}

/// Perceptron instance: margin kappa and constraint density alpha = M/N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    pub kappa: f64,
    pub alpha: f64,
}

impl ModelParams {
    pub fn new(kappa: f64, alpha: f64) -> Result<Self, SolverError> {
        if !(alpha > 0.0) {
            return Err(SolverError::BadAlpha(alpha));
        }
        Ok(ModelParams { kappa, alpha })
    }

    /// The headline kappa = 0 instance.
    pub fn zero_margin(alpha: f64) -> Result<Self, SolverError> {
        Self::new(0.0, alpha)
    }
}

/// The certified numerical constants: the alpha bracket and the nested q and
/// psi windows the fixed point is pinned to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Constants6 {
    pub alpha_lb: f64,
    pub alpha_ub: f64,
    pub q_lb: f64,
    pub q_lu: f64,
    pub q_ul: f64,
    pub q_ub: f64,
    pub psi_lb: f64,
    pub psi_lu: f64,
    pub psi_ul: f64,
    pub psi_ub: f64,
}

impl Constants6 {
    pub const fn table() -> Self {
        Constants6 {
            alpha_lb: 0.833078599,
            alpha_ub: 0.833078600,
            q_lb: 0.56394907949,
            q_lu: 0.56394907950,
            q_ul: 0.56394908029,
            q_ub: 0.56394908030,
            psi_lb: 2.5763513100,
            psi_lu: 2.5763513103,
            psi_ul: 2.5763513221,
            psi_ub: 2.5763513224,
        }
    }

    pub fn validate(&self) -> bool {
        self.alpha_lb < self.alpha_ub
            && self.q_lb < self.q_lu
            && self.q_lu < self.q_ul
            && self.q_ul < self.q_ub
            && self.psi_lb < self.psi_lu
            && self.psi_lu < self.psi_ul
            && self.psi_ul < self.psi_ub
    }

    pub fn gamma_lb(&self) -> f64 {
        gamma_of(self.q_lb)
    }

    pub fn gamma_ub(&self) -> f64 {
        gamma_of(self.q_ub)
    }
}

impl Default for Constants6 {
    fn default() -> Self {
        Self::table()
    }
}

/// gamma(q) = sqrt(q / (1-q))
#[inline]
pub fn gamma_of(q: f64) -> f64 {
    (q / (1.0 - q)).sqrt()
}

/// xi_{q,z} = (kappa - sqrt(q) z) / sqrt(1-q)
#[inline]
pub fn xi_qz(q: f64, kappa: f64, z: f64) -> f64 {
    (kappa - q.sqrt() * z) / (1.0 - q).sqrt()
}

/// zeta_{q,z} = (kappa - z/sqrt(q)) / sqrt(1-q) = 2(1-q) d(xi_{q,z})/dq
#[inline]
pub fn zeta_qz(q: f64, kappa: f64, z: f64) -> f64 {
    (kappa - z / q.sqrt()) / (1.0 - q).sqrt()
}

const P_TOL: f64 = 3e-15;
const R_TOL: f64 = 3e-15;
const G_TOL: f64 = 1e-14;

/// P(psi) = E tanh(sqrt(psi) Z)^2.
pub fn p_of_psi(psi: f64) -> Result<f64, SolverError> {
    if psi == 0.0 {
        return Ok(0.0);
    }
    let s = psi.sqrt();
    Ok(integrate_gauss(
        |z: f64| {
            let t = (s * z).tanh();
            t * t
        },
        -9.0,
        9.0,
        P_TOL,
    )?)
}

/// R(q, alpha) = alpha E F_q(sqrt(q) Z)^2 with
/// F_q(x) = ee((kappa - x)/sqrt(1-q)) / sqrt(1-q). Truncated at |z| <= 10,
/// where the discarded tail is below 1e-20.
pub fn r_of_q(q: f64, p: &ModelParams) -> Result<f64, SolverError> {
    if !(0.0..1.0).contains(&q) {
        return Err(SolverError::BadOverlap(q));
    }
    let omq = 1.0 - q;
    let v = integrate_gauss(
        |z: f64| {
            let e = ee(xi_qz(q, p.kappa, z));
            e * e / omq
        },
        -10.0,
        10.0,
        R_TOL,
    )?;
    Ok(p.alpha * v)
}

/// Free-entropy surface
/// `G(alpha,q,psi) = -psi(1-q)/2 + E log 2cosh(sqrt(psi) Z) + alpha E log phibar(xi_{q,Z})`.
pub fn g_surface(p: &ModelParams, q: f64, psi: f64) -> Result<f64, SolverError> {
    if !(0.0..1.0).contains(&q) {
        return Err(SolverError::BadOverlap(q));
    }
    let s = psi.sqrt();
    let t1 = -psi * (1.0 - q) / 2.0;
    let t2 = integrate_gauss(|z: f64| log_2cosh(s * z), -9.0, 9.0, G_TOL)?;
    let t3 = integrate_gauss(|z: f64| phibar(xi_qz(q, p.kappa, z)).ln(), -9.0, 9.0, G_TOL)?;
    Ok(t1 + t2 + p.alpha * t3)
}

#[inline]
fn log_2cosh(x: f64) -> f64 {
    // log(2 cosh x) = |x| + log(1 + exp(-2|x|))
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// Solved saddle: the joint fixed point q = P(psi), psi = R(q, alpha).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SaddlePoint {
    pub q_star: f64,
    pub psi_star: f64,
    /// grid-sup estimate of d P(R(q, alpha)) / dq near the fixed point
    pub at_slope: f64,
    /// G(alpha, q*, psi*)
    pub g_star: f64,
    /// gamma(q*)
    pub gamma: f64,
    /// true when the bracket (q_lb, q_ub) x (alpha_lb, alpha_ub) certified the solve
    pub certified: bool,
}

fn fixed_point_residual(q: f64, p: &ModelParams) -> Result<f64, SolverError> {
    Ok(p_of_psi(r_of_q(q, p)?)? - q)
}

/// Solve the saddle. Inside the certified alpha bracket (and kappa = 0) this
/// is bisection on `q -> P(R(q,alpha)) - q` over `(q_lb, q_ub)`, which is
/// strictly decreasing there. Outside, a damped fixed-point iteration runs
/// best-effort and the result is flagged uncertified.
pub fn solve_saddle(p: &ModelParams) -> Result<SaddlePoint, SolverError> {
    solve_saddle_with(p, &Constants6::table())
}

pub fn solve_saddle_with(p: &ModelParams, c6: &Constants6) -> Result<SaddlePoint, SolverError> {
    let certified = p.kappa == 0.0 && p.alpha > c6.alpha_lb && p.alpha < c6.alpha_ub;
    let q_star = if certified {
        let (mut lo, mut hi) = (c6.q_lb, c6.q_ub);
        let flo = fixed_point_residual(lo, p)?;
        let fhi = fixed_point_residual(hi, p)?;
        if !(flo > 0.0 && fhi < 0.0) {
            return Err(SolverError::NoSignChange { lo, hi });
        }
        while hi - lo > 1e-14 {
            let mid = 0.5 * (lo + hi);
            if fixed_point_residual(mid, p)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    } else {
        damped_fixed_point(p)?
    };
    let psi_star = r_of_q(q_star, p)?;
    let at_slope = at_slope_sup(p, c6, q_star, certified)?;
    let g_star = g_surface(p, q_star, psi_star)?;
    Ok(SaddlePoint {
        q_star,
        psi_star,
        at_slope,
        g_star,
        gamma: gamma_of(q_star),
        certified,
    })
}

fn damped_fixed_point(p: &ModelParams) -> Result<f64, SolverError> {
    let mut q = 0.5;
    let mut omega = 1.0;
    let mut prev_residual = f64::INFINITY;
    for _ in 0..500 {
        let r = fixed_point_residual(q, p)?;
        if r.abs() <= 1e-13 {
            return Ok(q);
        }
        // oscillation without contraction: damp
        if r.abs() > prev_residual {
            omega *= 0.5;
        }
        prev_residual = r.abs();
        q = (q + omega * r).clamp(1e-9, 1.0 - 1e-9);
    }
    Err(SolverError::NoConvergence {
        residual: prev_residual,
    })
}

/// Max over a 512-point q-grid of a centered finite difference of
/// `q -> P(R(q, alpha))`. The certified box is the §-constants q window;
/// otherwise a small neighborhood of the solved point.
fn at_slope_sup(
    p: &ModelParams,
    c6: &Constants6,
    q_star: f64,
    certified: bool,
) -> Result<f64, SolverError> {
    let (lo, hi) = if certified {
        (c6.q_lb, c6.q_ub)
    } else {
        ((q_star - 0.02).max(1e-6), (q_star + 0.02).min(1.0 - 1e-6))
    };
    let n = 512usize;
    let spacing = (hi - lo) / n as f64;
    let h = 0.5 * spacing;
    let mut sup: f64 = f64::MIN;
    for i in 0..=n {
        let q = lo + i as f64 * spacing;
        let fp = p_of_psi(r_of_q((q + h).min(1.0 - 1e-12), p)?)?;
        let fm = p_of_psi(r_of_q((q - h).max(0.0), p)?)?;
        sup = sup.max((fp - fm) / (2.0 * h));
    }
    Ok(sup)
}

/// `H* = -psi(1-q) + E log 2cosh(sqrt(psi) Z)` at the saddle.
pub fn h_star(sp: &SaddlePoint) -> Result<f64, SolverError> {
    let s = sp.psi_star.sqrt();
    let t = integrate_gauss(|z: f64| log_2cosh(s * z), -9.0, 9.0, G_TOL)?;
    Ok(-sp.psi_star * (1.0 - sp.q_star) + t)
}

/// Entropy form of the same limit: `E H2((1 + tanh(sqrt(psi) Z))/2)`.
/// Must agree with [`h_star`] to 1e-10.
pub fn h_star_entropy_form(sp: &SaddlePoint) -> Result<f64, SolverError> {
    let s = sp.psi_star.sqrt();
    Ok(integrate_gauss(
        |z: f64| binary_entropy(0.5 * (1.0 + (s * z).tanh())),
        -9.0,
        9.0,
        G_TOL,
    )?)
}

/// `P* = psi(1-q)/2 + alpha E log phibar(xi_{q,Z})` at the saddle.
pub fn p_star(sp: &SaddlePoint, p: &ModelParams) -> Result<f64, SolverError> {
    let t = integrate_gauss(
        |z: f64| phibar(xi_qz(sp.q_star, p.kappa, z)).ln(),
        -9.0,
        9.0,
        G_TOL,
    )?;
    Ok(sp.psi_star * (1.0 - sp.q_star) / 2.0 + p.alpha * t)
}

/// Shannon entropy of a Bernoulli(p) variable, nats.
pub fn binary_entropy(p: f64) -> f64 {
    let mut s = 0.0;
    for c in [p, 1.0 - p] {
        if c > 0.0 {
            s -= c * c.ln();
        }
    }
    s
}

/// Result of the capacity-constant solve.
#[derive(Debug, Clone, Serialize)]
pub struct AlphaStar {
    /// bracket on alpha*, width <= 1e-9, strictly inside the certified interval
    pub bracket: BoundBracket,
    pub g_at_alpha_lb: f64,
    pub g_at_alpha_ub: f64,
    /// saddle at the bracket midpoint
    pub saddle: SaddlePoint,
}

fn g_star_at(alpha: f64, c6: &Constants6) -> Result<f64, SolverError> {
    let p = ModelParams::zero_margin(alpha)?;
    Ok(solve_saddle_with(&p, c6)?.g_star)
}

/// Bisection on `alpha -> G*(alpha)` (strictly decreasing) over the certified
/// bracket. Fails if the sign conditions at the endpoints do not hold.
pub fn alpha_star() -> Result<AlphaStar, SolverError> {
    let c6 = Constants6::table();
    // endpoints sit epsilon inside so the solved saddle is certified
    let eps = 1e-13;
    let g_lo = g_star_at(c6.alpha_lb + eps, &c6)?;
    let g_hi = g_star_at(c6.alpha_ub - eps, &c6)?;
    if !(g_lo > 0.0 && g_hi < 0.0) {
        return Err(SolverError::NoSignChange {
            lo: c6.alpha_lb,
            hi: c6.alpha_ub,
        });
    }
    let (mut lo, mut hi) = (c6.alpha_lb + eps, c6.alpha_ub - eps);
    for _ in 0..14 {
        let mid = 0.5 * (lo + hi);
        if g_star_at(mid, &c6)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mid = 0.5 * (lo + hi);
    let saddle = solve_saddle_with(&ModelParams::zero_margin(mid)?, &c6)?;
    Ok(AlphaStar {
        bracket: BoundBracket {
            lo,
            hi,
            budget: 1e-12,
        },
        g_at_alpha_lb: g_lo,
        g_at_alpha_ub: g_hi,
        saddle,
    })
}

/// `I = alpha E[ ee(xi_{q,Z}) zeta_{q,Z} ]`, which equals `psi(1-q)` at the
/// solved fixed point (Gaussian integration by parts).
pub fn int_by_parts_value(sp: &SaddlePoint, p: &ModelParams) -> Result<f64, SolverError> {
    let q = sp.q_star;
    let v = integrate_gauss(
        |z: f64| ee(xi_qz(q, p.kappa, z)) * zeta_qz(q, p.kappa, z),
        -10.0,
        10.0,
        R_TOL,
    )?;
    Ok(p.alpha * v)
}

/// One named inequality of the section-6 verification.
#[derive(Debug, Clone, Serialize)]
pub struct Section6Check {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    /// margin after the quadrature budget is charged; pass requires margin > 0
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Section6Report {
    pub checks: Vec<Section6Check>,
    pub pass: bool,
}

const SIGN_BUDGET: f64 = 2e-13; // quadrature + composition roundoff allowance
const ENVELOPE_BUDGET: f64 = 1e-10;

/// Re-verify the computer-assisted inequalities behind the fixed-point
/// bracket: the R mapping-window endpoints, the P' and dR/dq envelope bounds,
/// their product (the AT slope bound 0.96), the four sign conditions of the
/// q fixed point, and the integration-by-parts identity at the solved saddle.
pub fn check_section6(c6: &Constants6) -> Result<Section6Report, SolverError> {
    let mut checks = Vec::new();
    let a_lb = ModelParams::zero_margin(c6.alpha_lb)?;
    let a_ub = ModelParams::zero_margin(c6.alpha_ub)?;

    // mapping lemma: q -> R(q, alpha_lb) maps (q_lb, q_lu) into (psi_lb, psi_lu),
    // and q -> R(q, alpha_ub) maps (q_ul, q_ub) into (psi_ul, psi_ub)
    let quad_budget = R_TOL + 1e-15;
    let entries = [
        ("mapping_a_lower", r_of_q(c6.q_lb, &a_lb)? - quad_budget, c6.psi_lb, true),
        ("mapping_a_upper", r_of_q(c6.q_lu, &a_lb)? + 1e-20 + quad_budget, c6.psi_lu, false),
        ("mapping_b_lower", r_of_q(c6.q_ul, &a_ub)? - quad_budget, c6.psi_ul, true),
        ("mapping_b_upper", r_of_q(c6.q_ub, &a_ub)? + 1e-20 + quad_budget, c6.psi_ub, false),
    ];
    for (name, value, threshold, want_above) in entries {
        let margin = if want_above {
            value - threshold
        } else {
            threshold - value
        };
        checks.push(Section6Check {
            name,
            value,
            threshold,
            margin,
            pass: margin > 0.0,
        });
    }

    // P'(psi) <= 0.08 over (psi_lb, psi_ub) via the monotone envelope
    // E[2 / cosh(sqrt(psi_lb) Z)^4] - E[cosh(2 sqrt(psi_ub) Z) / cosh(sqrt(psi_ub) Z)^4]
    let s_lb = c6.psi_lb.sqrt();
    let s_ub = c6.psi_ub.sqrt();
    let p1 = integrate_gauss(|z: f64| 2.0 / (s_lb * z).cosh().powi(4), -9.0, 9.0, P_TOL)?;
    let p2 = integrate_gauss(
        |z: f64| (2.0 * s_ub * z).cosh() / (s_ub * z).cosh().powi(4),
        -9.0,
        9.0,
        P_TOL,
    )?;
    let p_prime_env = p1 - p2 + ENVELOPE_BUDGET;
    checks.push(Section6Check {
        name: "p_prime_envelope",
        value: p_prime_env,
        threshold: 0.08,
        margin: 0.08 - p_prime_env,
        pass: p_prime_env <= 0.08,
    });

    // dR/dq <= 12 via R(q_ub, alpha_ub)/(1-q_ub)
    //   + alpha_ub/(1-q_ub)^2 E[ ee(xi_ub) ee'(xi_ub) zeta_ub ]
    let r_ub = r_of_q(c6.q_ub, &a_ub)?;
    let envelope = integrate_gauss(
        |z: f64| {
            let xi = xi_qz(c6.q_lb, 0.0, z).max(xi_qz(c6.q_ub, 0.0, z));
            let zeta = zeta_qz(c6.q_lb, 0.0, z).max(zeta_qz(c6.q_ub, 0.0, z));
            ee(xi) * ee_deriv(xi, 1).expect("order 1") * zeta
        },
        -10.0,
        10.0,
        R_TOL,
    )?;
    let dr_dq_env =
        r_ub / (1.0 - c6.q_ub) + c6.alpha_ub / (1.0 - c6.q_ub).powi(2) * envelope + ENVELOPE_BUDGET;
    checks.push(Section6Check {
        name: "dr_dq_envelope",
        value: dr_dq_env,
        threshold: 12.0,
        margin: 12.0 - dr_dq_env,
        pass: dr_dq_env <= 12.0,
    });

    let at_product = p_prime_env * dr_dq_env;
    checks.push(Section6Check {
        name: "at_slope_product",
        value: at_product,
        threshold: 0.96,
        margin: 0.96 - at_product,
        pass: at_product <= 0.96,
    });

    // four sign conditions pinning q*(alpha_lb) and q*(alpha_ub)
    let signs = [
        ("sign_q_lb_alpha_lb", c6.q_lb, &a_lb, true),
        ("sign_q_lu_alpha_lb", c6.q_lu, &a_lb, false),
        ("sign_q_ul_alpha_ub", c6.q_ul, &a_ub, true),
        ("sign_q_ub_alpha_ub", c6.q_ub, &a_ub, false),
    ];
    for (name, q, params, want_positive) in signs {
        let value = fixed_point_residual(q, params)?;
        let margin = if want_positive {
            value - SIGN_BUDGET
        } else {
            -value - SIGN_BUDGET
        };
        checks.push(Section6Check {
            name,
            value,
            threshold: SIGN_BUDGET,
            margin,
            pass: margin > 0.0,
        });
    }

    // I = psi (1-q) at the solved saddle, within 1e-9
    let mid = ModelParams::zero_margin(0.5 * (c6.alpha_lb + c6.alpha_ub))?;
    let sp = solve_saddle_with(&mid, c6)?;
    let i_val = int_by_parts_value(&sp, &mid)?;
    let identity_gap = (i_val - sp.psi_star * (1.0 - sp.q_star)).abs();
    checks.push(Section6Check {
        name: "int_by_parts_identity",
        value: identity_gap,
        threshold: 1e-9,
        margin: 1e-9 - identity_gap,
        pass: identity_gap <= 1e-9,
    });

    let pass = checks.iter().all(|c| c.pass);
    Ok(Section6Report { checks, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn p_and_r_base_values() {
        assert_eq!(p_of_psi(0.0).unwrap(), 0.0);
        // R(0, alpha) = 2 alpha / pi at kappa = 0
        let p = ModelParams::zero_margin(0.7).unwrap();
        assert_abs_diff_eq!(
            r_of_q(0.0, &p).unwrap(),
            2.0 * 0.7 / core::f64::consts::PI,
            epsilon = 1e-12
        );
        assert!(r_of_q(1.0, &p).is_err());
    }

    #[test]
    fn p_and_r_nondecreasing() {
        let p = ModelParams::zero_margin(0.83).unwrap();
        let mut prev_p = 0.0;
        let mut prev_r = 0.0;
        for i in 1..=40 {
            let x = i as f64 * 0.1;
            let pv = p_of_psi(x).unwrap();
            let rv = r_of_q(x / 5.0, &p).unwrap();
            assert!(pv >= prev_p, "P not monotone at {x}");
            assert!(rv >= prev_r, "R not monotone at {}", x / 5.0);
            prev_p = pv;
            prev_r = rv;
        }
    }

    #[test]
    fn g_surface_collapses_at_origin() {
        // G(alpha, 0, 0) = log 2 + alpha log phibar(0) = (1 - alpha) log 2
        let p = ModelParams::zero_margin(0.6).unwrap();
        let g = g_surface(&p, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(g, (1.0 - 0.6) * core::f64::consts::LN_2, epsilon = 1e-12);
    }

    #[test]
    fn saddle_certified_matches_reference() {
        // alpha = 0.8330786 sits inside the certified bracket
        let p = ModelParams::zero_margin(0.8330786).unwrap();
        let sp = solve_saddle(&p).unwrap();
        assert!(sp.certified);
        assert!(sp.q_star > 0.56394907949 && sp.q_star < 0.56394908030);
        assert!(sp.psi_star > 2.5763513100 && sp.psi_star < 2.5763513224);
        assert!(sp.at_slope < 1.0);
        // residual of the composed recursion at the returned point
        let res = (p_of_psi(r_of_q(sp.q_star, &p).unwrap()).unwrap() - sp.q_star).abs();
        assert!(res <= 1e-11, "residual {res:e}");
    }

    #[test]
    fn saddle_uncertified_matches_oracle_at_0833() {
        // 0.833 is below alpha_lb: exercises the damped best-effort path
        let p = ModelParams::zero_margin(0.833).unwrap();
        let sp = solve_saddle(&p).unwrap();
        assert!(!sp.certified);
        assert_abs_diff_eq!(sp.q_star, 0.563886554719774, epsilon = 1e-9);
        assert_abs_diff_eq!(sp.psi_star, 2.57540380403583, epsilon = 1e-8);
    }

    #[test]
    fn h_and_p_star_reference() {
        let p = ModelParams::zero_margin(0.833078599739579).unwrap();
        let sp = solve_saddle(&p).unwrap();
        let h = h_star(&sp).unwrap();
        let pst = p_star(&sp, &p).unwrap();
        assert_abs_diff_eq!(h, 0.343661329648832, epsilon = 1e-9);
        assert_abs_diff_eq!(pst, -0.343661329648832, epsilon = 1e-9);
        let h2 = h_star_entropy_form(&sp).unwrap();
        assert!((h - h2).abs() < 1e-10, "entropy form gap {:e}", (h - h2).abs());
    }

    #[test]
    fn section6_checks_all_pass() {
        let rep = check_section6(&Constants6::table()).unwrap();
        for c in &rep.checks {
            assert!(c.pass, "{} failed: value {:e}, margin {:e}", c.name, c.value, c.margin);
        }
        assert!(rep.pass);
    }

    #[test]
    fn section6_sign_margins_match_oracle() {
        // margins computed with 30-digit mpmath
        let c6 = Constants6::table();
        let a_lb = ModelParams::zero_margin(c6.alpha_lb).unwrap();
        let a_ub = ModelParams::zero_margin(c6.alpha_ub).unwrap();
        let want = [
            (c6.q_lb, &a_lb, 1.5943212e-12),
            (c6.q_lu, &a_lb, -9.7043895e-13),
            (c6.q_ul, &a_ub, 4.4368079e-13),
            (c6.q_ub, &a_ub, -2.1210793e-12),
        ];
        for (q, p, oracle) in want {
            let got = fixed_point_residual(q, p).unwrap();
            assert!(
                (got - oracle).abs() < 2.5e-13,
                "residual at q={q}: got {got:e} want {oracle:e}"
            );
        }
    }
}
