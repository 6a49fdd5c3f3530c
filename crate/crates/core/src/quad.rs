//! Gaussian-weighted adaptive quadrature.
//!
//! Two modes: plain evaluation (best-effort accuracy, explicit failure when the
//! refinement budget is exhausted) and bracket evaluation (conservative outward
//! bounds carrying an explicit error budget, for the grid verifier).
//!
//! The scheme is adaptive bisection with a Gauss7/Kronrod15 pair on each panel.
//! Fixed-node Hermite rules are a poor fit here: the verifier integrands have
//! kinks from positive parts and sign-split envelopes. Panel recursion is
//! depth-first with a fixed summation order, so results do not depend on
//! thread count or evaluation scheduling.

use crate::kernels::{phi, phibar};
use crate::real::{lit, Real};
use serde::Serialize;
use std::cell::Cell;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QuadError {
    #[error("quadrature did not reach the requested tolerance: achieved {achieved:e}, requested {requested:e}")]
    NonConvergence { achieved: f64, requested: f64 },
    #[error("invalid integration domain [{lo}, {hi}]")]
    BadDomain { lo: f64, hi: f64 },
    #[error("direction table does not declare factor {0:?}")]
    UndeclaredFactor(Factor),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
}

// Gauss7/Kronrod15 nodes and weights on [-1, 1].
const K15_NODES: [f64; 8] = [
    0.0,
    0.207784955007898468,
    0.405845151377397167,
    0.586087235467691130,
    0.741531185599394440,
    0.864864423359769073,
    0.949107912342758525,
    0.991455371120812639,
];
const K15_WEIGHTS: [f64; 8] = [
    0.209482141084727828,
    0.204432940075298892,
    0.190350578064785410,
    0.169004726639267903,
    0.140653259715525919,
    0.104790010322250184,
    0.063092092629978553,
    0.022935322010529225,
];
const G7_WEIGHTS: [f64; 4] = [
    0.417959183673469388,
    0.381830050505118945,
    0.279705391489276668,
    0.129484966168869693,
];

/// One Gauss-Kronrod panel: returns (kronrod value, |kronrod - gauss|).
fn gk15<T: Real>(f: &mut dyn FnMut(T) -> T, lo: T, hi: T) -> (T, T) {
    let half = (hi - lo) / lit(2.0);
    let mid = (hi + lo) / lit(2.0);
    let f0 = f(mid);
    let mut kron = lit::<T>(K15_WEIGHTS[0]) * f0;
    let mut gauss = lit::<T>(G7_WEIGHTS[0]) * f0;
    for i in 1..8 {
        let dx = half * lit(K15_NODES[i]);
        let s = f(mid + dx) + f(mid - dx);
        kron = kron + lit::<T>(K15_WEIGHTS[i]) * s;
        if i % 2 == 0 {
            gauss = gauss + lit::<T>(G7_WEIGHTS[i / 2]) * s;
        }
    }
    kron = kron * half;
    gauss = gauss * half;
    (kron, (kron - gauss).abs())
}

struct Adapt<'a, T> {
    f: &'a mut dyn FnMut(T) -> T,
    max_depth: u32,
    unresolved: T,
    panels: usize,
}

impl<T: Real> Adapt<'_, T> {
    fn run(&mut self, lo: T, hi: T, tol: T, depth: u32) -> T {
        let (value, err) = gk15(self.f, lo, hi);
        self.panels += 1;
        if err <= tol || depth >= self.max_depth {
            if err > tol {
                self.unresolved = self.unresolved + err;
            }
            return value;
        }
        let mid = (lo + hi) / lit(2.0);
        let half_tol = tol / lit(2.0);
        let left = self.run(lo, mid, half_tol, depth + 1);
        let right = self.run(mid, hi, half_tol, depth + 1);
        left + right
    }
}

/// Raw adaptive integral of `f` on `[lo, hi]` with absolute-error target `tol`.
pub fn integrate<T: Real>(
    mut f: impl FnMut(T) -> T,
    lo: T,
    hi: T,
    tol: T,
) -> Result<T, QuadError> {
    let (lof, hif) = (
        lo.to_f64().unwrap_or(f64::NAN),
        hi.to_f64().unwrap_or(f64::NAN),
    );
    if !(lof < hif) {
        return Err(QuadError::BadDomain { lo: lof, hi: hif });
    }
    if !(tol > T::zero()) {
        return Err(QuadError::BadTolerance(tol.to_f64().unwrap_or(f64::NAN)));
    }
    let mut state = Adapt {
        f: &mut f,
        max_depth: 48,
        unresolved: T::zero(),
        panels: 0,
    };
    let value = state.run(lo, hi, tol, 0);
    if state.unresolved > tol {
        return Err(QuadError::NonConvergence {
            achieved: state.unresolved.to_f64().unwrap_or(f64::NAN),
            requested: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(value)
}

/// `integral of f(z) phi(z) dz` over `[zlo, zhi]`.
pub fn integrate_gauss<T: Real>(
    mut f: impl FnMut(T) -> T,
    zlo: T,
    zhi: T,
    tol: T,
) -> Result<T, QuadError> {
    integrate(|z| f(z) * phi(z), zlo, zhi, tol)
}

/// Default truncation for plain-mode Gaussian integrals.
pub const Z_TRUNC: f64 = 9.0;
/// Default truncation of the inner (conditioned) variable in plain mode.
pub const U_TRUNC: f64 = 12.0;

/// Nested integral
/// `int_{-9}^{9} [ int_{ulo}^{uhi} g(z,u) phi(xi(z)+u) du / phibar(xi(z)) ] phi(z) dz`,
/// the substitution `nu = xi + u` putting the inner conditional weight on u >= 0.
///
/// The inner integrals run at `tol/20`; outer unresolved error plus the worst
/// inner estimate must stay within `tol`.
pub fn integrate_inner_trunc<T: Real>(
    g: impl Fn(T, T) -> T,
    xi_of_z: impl Fn(T) -> T,
    ulo: T,
    uhi: T,
    tol: T,
) -> Result<T, QuadError> {
    let inner_bad = Cell::new(false);
    let inner_tol = tol / lit(20.0);
    let value = integrate_gauss(
        |z| {
            let xi = xi_of_z(z);
            let pb = phibar(xi);
            let inner = integrate(|u| g(z, u) * phi(xi + u), ulo, uhi, inner_tol);
            match inner {
                Ok(v) => v / pb,
                Err(_) => {
                    inner_bad.set(true);
                    T::zero()
                }
            }
        },
        lit(-Z_TRUNC),
        lit(Z_TRUNC),
        tol,
    )?;
    if inner_bad.get() {
        return Err(QuadError::NonConvergence {
            achieved: f64::NAN,
            requested: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(value)
}

/// Conservative two-sided bound with the error budget that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundBracket {
    pub lo: f64,
    pub hi: f64,
    /// total of tail allowances, quadrature tolerance, and the rigor gap
    pub budget: f64,
}

impl BoundBracket {
    pub fn point(v: f64) -> Self {
        BoundBracket {
            lo: v,
            hi: v,
            budget: 0.0,
        }
    }

    /// Inflate outward by `b` on both sides and book it in the budget.
    pub fn widen(self, b: f64) -> Self {
        debug_assert!(b >= 0.0);
        BoundBracket {
            lo: self.lo - b,
            hi: self.hi + b,
            budget: self.budget + b,
        }
    }

    pub fn add(self, other: BoundBracket) -> Self {
        BoundBracket {
            lo: self.lo + other.lo,
            hi: self.hi + other.hi,
            budget: self.budget + other.budget,
        }
    }

    pub fn shift(self, c: f64) -> Self {
        BoundBracket {
            lo: self.lo + c,
            hi: self.hi + c,
            budget: self.budget,
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Envelope constants the bracket integrands draw from. Each factor is an
/// interval; an integrand asks for the `Lower` or `Upper` end, per its own
/// conservative direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Factor {
    Alpha,
    Q,
    Psi,
    Gamma,
    Lambda,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Lower,
    Upper,
}

/// Declared envelope intervals, one per factor.
#[derive(Debug, Clone, Default)]
pub struct DirectionTable {
    entries: BTreeMap<Factor, (f64, f64)>,
}

impl DirectionTable {
    pub fn declare(mut self, factor: Factor, lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "inverted interval for {factor:?}");
        self.entries.insert(factor, (lo, hi));
        self
    }

    pub fn get(&self, factor: Factor, dir: Direction) -> Result<f64, QuadError> {
        let (lo, hi) = self
            .entries
            .get(&factor)
            .ok_or(QuadError::UndeclaredFactor(factor))?;
        Ok(match dir {
            Direction::Lower => *lo,
            Direction::Upper => *hi,
        })
    }

    pub fn interval(&self, factor: Factor) -> Result<(f64, f64), QuadError> {
        self.entries
            .get(&factor)
            .copied()
            .ok_or(QuadError::UndeclaredFactor(factor))
    }

    pub fn declares(&self, factor: Factor) -> bool {
        self.entries.contains_key(&factor)
    }

    /// Same table with one factor's interval symmetrically widened by `pad`.
    pub fn widened(&self, factor: Factor, pad: f64) -> Result<Self, QuadError> {
        let (lo, hi) = self.interval(factor)?;
        let mut out = self.clone();
        out.entries.insert(factor, (lo - pad, hi + pad));
        Ok(out)
    }
}

/// Budget declaration for a bracket evaluation.
#[derive(Debug, Clone)]
pub struct BracketCfg {
    /// honest allowance for the non-interval arithmetic underneath
    pub eps_rig: f64,
    /// named tail constants declared by the calling lemma
    pub tails: Vec<(&'static str, f64)>,
}

impl Default for BracketCfg {
    fn default() -> Self {
        BracketCfg {
            eps_rig: 1e-9,
            tails: Vec::new(),
        }
    }
}

impl BracketCfg {
    pub fn tail_total(&self) -> f64 {
        self.tails.iter().map(|(_, v)| v).sum()
    }
}

/// Bracket evaluation: integrates an envelope integrand (which reads its
/// constants from the direction table) and inflates outward by the quadrature
/// tolerance, the rigor gap, and every declared tail constant.
///
/// `required` lists the factors the integrand will ask for; a table missing
/// any of them is rejected before integration starts.
pub fn integrate_bracket(
    f: impl Fn(f64, &DirectionTable) -> f64,
    zlo: f64,
    zhi: f64,
    tol: f64,
    table: &DirectionTable,
    required: &[Factor],
    cfg: &BracketCfg,
) -> Result<BoundBracket, QuadError> {
    for &factor in required {
        if !table.declares(factor) {
            return Err(QuadError::UndeclaredFactor(factor));
        }
    }
    let value = integrate(|z| f(z, table), zlo, zhi, tol)?;
    Ok(BoundBracket::point(value).widen(tol + cfg.eps_rig + cfg.tail_total()))
}
