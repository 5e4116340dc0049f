//! Brute-force character sums over p-adic balls.
//!
//! The integral of `chi_p(alpha x^2 + beta x)` over `B_gamma = p^{-gamma} Z_p`
//! is replaced by a sum over representatives `x = k p^{-gamma}`,
//! `0 <= k < p^{gamma + delta}`, each weighted by the Haar measure `p^{-delta}`
//! of its coset. The fractional part of the integrand is reduced to
//! `(r_a k^2 + r_b k mod P) / P` with a single machine modulus `P = p^M`, so
//! the inner loop is integer arithmetic plus one table lookup.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::padic_core::{split_unit, unit_residue, valuation, Rat, Valuation};

/// Representatives per reduction chunk. Chunk boundaries are fixed so serial
/// and parallel runs produce identical sums.
pub const CHUNK: u64 = 1 << 16;

/// Phases are tabulated when the modulus is at most this size.
const TABLE_LIMIT: u64 = 1 << 20;

/// Neumaier-compensated accumulator for one real component.
#[derive(Clone, Copy, Default, Debug)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Clone, Copy, Default, Debug)]
struct ComplexAcc {
    re: Compensated,
    im: Compensated,
}

impl ComplexAcc {
    fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    fn value(self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Residue `r` in `[0, P)` with `x = r / P mod Z_p`, for `x P` integral at p.
fn residue_over(x: &Rat, p: u64, big_p: &BigInt) -> u64 {
    if x.is_zero() {
        return 0;
    }
    let scaled = x * Rat::from_int(big_p.clone());
    let (v, u, w) = split_unit(&scaled, p);
    debug_assert!(v >= 0);
    let unit = unit_residue(&u, &w, big_p);
    let r = (unit * num_traits::pow(BigInt::from(p), v as usize)) % big_p;
    r.to_u64().expect("residue fits below modulus")
}

/// Quadratic phase `k -> (ra k^2 + rb k mod P) / P`.
pub(crate) struct QuadraticPhase {
    modulus: u64,
    ra: u64,
    rb: u64,
}

impl QuadraticPhase {
    /// Phase of `alpha x^2 + beta x` at `x = k p^{-gamma}`; `None` when the
    /// common denominator does not fit a machine word.
    pub(crate) fn new(alpha: &Rat, beta: &Rat, p: u64, gamma: i64) -> Option<QuadraticPhase> {
        let a = alpha * Rat::int_pow(p, -2 * gamma);
        let b = beta * Rat::int_pow(p, -gamma);
        let depth = |x: &Rat| match valuation(x, p) {
            Valuation::Finite(v) => (-v).max(0),
            Valuation::Infinite => 0,
        };
        let m = depth(&a).max(depth(&b));
        let modulus = p.checked_pow(u32::try_from(m).ok()?)?;
        if modulus >= 1 << 62 {
            return None;
        }
        let big_p = BigInt::from(modulus);
        Some(QuadraticPhase {
            modulus,
            ra: residue_over(&a, p, &big_p),
            rb: residue_over(&b, p, &big_p),
        })
    }

    #[inline]
    fn residue(&self, k: u64) -> u64 {
        let m = self.modulus as u128;
        let k = k as u128;
        let k2 = (k * k) % m;
        ((self.ra as u128 * k2 + self.rb as u128 * k) % m) as u64
    }
}

fn unit_root(r: u64, modulus: u64) -> Complex64 {
    let theta = std::f64::consts::TAU * (r as f64 / modulus as f64);
    let (s, c) = theta.sin_cos();
    Complex64::new(c, s)
}

/// `sum_{k < terms} exp(2 pi i phase(k))`, reduced chunk by chunk in index order.
pub(crate) fn phase_sum(phase: &QuadraticPhase, terms: u64) -> Complex64 {
    let table: Option<Vec<Complex64>> = (phase.modulus <= TABLE_LIMIT).then(|| {
        (0..phase.modulus)
            .map(|r| unit_root(r, phase.modulus))
            .collect()
    });
    let lookup = |k: u64| {
        let r = phase.residue(k);
        match &table {
            Some(t) => t[r as usize],
            None => unit_root(r, phase.modulus),
        }
    };
    let chunks = terms.div_ceil(CHUNK);
    let partials: Vec<Complex64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = ComplexAcc::default();
            let end = ((c + 1) * CHUNK).min(terms);
            for k in c * CHUNK..end {
                acc.add(lookup(k));
            }
            acc.value()
        })
        .collect();
    let mut total = ComplexAcc::default();
    for z in partials {
        total.add(z);
    }
    total.value()
}
