//! The Gauss integral `int chi_v(alpha x^2 + beta x) dx`: exact closed form
//! and an independent brute-force evaluation over p-adic balls.

mod brute;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::GaussError;
use crate::padic_core::{
    character, lambda_fn, norm, valuation, ExactCircle, Place, Rat, Valuation,
};

use brute::{phase_sum, QuadraticPhase};

pub use brute::CHUNK;

/// Default cap on the number of representatives in a single ball sum.
pub const DEFAULT_TERM_BUDGET: u64 = 10_000_000;

/// Extra mesh levels beyond the local constancy bound.
pub const MESH_MARGIN: i64 = 2;

/// Closed form `lambda_v(alpha) |2 alpha|_v^{-1/2} chi_v(-beta^2 / 4 alpha)`.
pub fn gauss_closed(alpha: &Rat, beta: &Rat, v: Place) -> Result<ExactCircle, GaussError> {
    if alpha.is_zero() {
        return Err(GaussError::ZeroAlpha);
    }
    let two_alpha = alpha * Rat::from(2);
    let modulus = ExactCircle::real_sqrt(norm(&two_alpha, v).recip());
    let shift = -(beta * beta) / (alpha * Rat::from(4));
    Ok(lambda_fn(alpha, v).mul(&modulus).mul(&character(&shift, v)))
}

/// Discretization of the ball `B_gamma = p^{-gamma} Z_p` into cosets of
/// `p^delta Z_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BallSpec {
    pub p: u64,
    pub gamma: i64,
    pub delta: i64,
}

impl BallSpec {
    pub fn new(p: u64, gamma: i64, delta: i64) -> Result<BallSpec, GaussError> {
        if delta < -gamma {
            return Err(GaussError::InvalidBall(format!(
                "mesh p^{delta} is larger than the ball p^{}",
                -gamma
            )));
        }
        Ok(BallSpec { p, gamma, delta })
    }

    /// Number of representatives `p^{gamma + delta}`, if it fits in `u64`.
    pub fn terms(&self) -> Option<u64> {
        let e = u32::try_from(self.gamma + self.delta).ok()?;
        self.p.checked_pow(e)
    }

    /// Haar measure `p^gamma` of the ball.
    pub fn measure(&self) -> f64 {
        (self.p as f64).powi(self.gamma as i32)
    }
}

fn neg_valuation(x: &Rat, p: u64) -> Option<i64> {
    match valuation(x, p) {
        Valuation::Finite(v) => Some(-v),
        Valuation::Infinite => None,
    }
}

/// Smallest mesh exponent at which `x -> chi_p(alpha x^2 + beta x)` is
/// constant on cosets `x + p^delta Z_p` throughout `B_gamma`.
pub fn min_mesh(alpha: &Rat, beta: &Rat, p: u64, gamma: i64) -> i64 {
    let a = neg_valuation(alpha, p);
    let b = neg_valuation(beta, p);
    let bound = [
        a.map(|a| a + gamma),
        a.map(|a| a.div_euclid(2) + a.rem_euclid(2)),
        b,
    ]
    .into_iter()
    .flatten()
    .max()
    .unwrap_or(0);
    (bound + MESH_MARGIN).max(-gamma)
}

/// Ball integral `int_{B_gamma} chi_p(alpha x^2 + beta x) dx` by direct
/// summation over coset representatives.
pub fn gauss_brute(
    alpha: &Rat,
    beta: &Rat,
    spec: BallSpec,
    budget: u64,
) -> Result<Complex64, GaussError> {
    let required = min_mesh(alpha, beta, spec.p, spec.gamma);
    if spec.delta < required {
        return Err(GaussError::MeshTooCoarse {
            delta: spec.delta,
            required,
        });
    }
    let too_large = || GaussError::SumTooLarge {
        terms: format!("{}^{}", spec.p, spec.gamma + spec.delta),
        budget,
    };
    let terms = spec.terms().ok_or_else(too_large)?;
    if terms > budget {
        return Err(too_large());
    }
    let phase = QuadraticPhase::new(alpha, beta, spec.p, spec.gamma).ok_or_else(too_large)?;
    let weight = (spec.p as f64).powi(-spec.delta as i32);
    Ok(phase_sum(&phase, terms) * weight)
}

/// Result of the stabilized ball limit.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Stabilized {
    #[serde(serialize_with = "crate::suites::ser_complex")]
    pub value: Complex64,
    pub gamma: i64,
    pub delta: i64,
    pub terms: u64,
}

/// Ball radius at which stabilization is first tested: the ball must hold
/// the stationary point `-beta / 2 alpha` and reach the scale where the
/// quadratic term oscillates.
pub fn start_radius(alpha: &Rat, beta: &Rat, p: u64) -> i64 {
    let va = valuation(alpha, p).finite().expect("alpha nonzero");
    let mut gamma = 0i64.max(va.div_euclid(2) + va.rem_euclid(2));
    if !beta.is_zero() {
        let stationary = beta / (alpha * Rat::from(2));
        if let Valuation::Finite(vs) = valuation(&stationary, p) {
            gamma = gamma.max(-vs);
        }
    }
    gamma
}

/// Full-space Gauss integral as the limit of growing ball integrals.
///
/// Radii increase from [`start_radius`] until two successive increments both
/// change the value by less than `tol`.
pub fn gauss_stabilized(
    alpha: &Rat,
    beta: &Rat,
    p: u64,
    tol: f64,
    budget: u64,
) -> Result<Stabilized, GaussError> {
    if alpha.is_zero() {
        return Err(GaussError::ZeroAlpha);
    }
    let mut gamma = start_radius(alpha, beta, p);
    let mut history: Vec<Complex64> = Vec::new();
    loop {
        let delta = min_mesh(alpha, beta, p, gamma);
        let spec = BallSpec::new(p, gamma, delta)?;
        let value = match gauss_brute(alpha, beta, spec, budget) {
            Ok(v) => v,
            Err(GaussError::SumTooLarge { .. }) => {
                return Err(GaussError::NoStabilization { gamma })
            }
            Err(e) => return Err(e),
        };
        history.push(value);
        if let [.., a, b, c] = history[..] {
            if (b - a).norm() < tol && (c - b).norm() < tol {
                return Ok(Stabilized {
                    value: c,
                    gamma,
                    delta,
                    terms: spec.terms().unwrap_or(u64::MAX),
                });
            }
        }
        gamma += 1;
    }
}
