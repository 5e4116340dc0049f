//! The arithmetic factor `lambda_v` and the additive characters `chi_v`.
//!
//! Every value of `lambda_v` is an eighth root of unity, so it is returned as
//! a unit [`ExactCircle`] with phase in `{0, 1/8, ..., 7/8}`.

use num_bigint::BigInt;

use super::circle::ExactCircle;
use super::expansion::{digits, frac_part, leading_digit, legendre, split_unit};
use super::place::Place;
use super::rat::{rat, Rat};

fn eighth(k: i64) -> ExactCircle {
    ExactCircle::unit(rat(k, 8))
}

/// `lambda_v(x)`; equals 1 at `x = 0` for every place.
pub fn lambda_fn(x: &Rat, v: Place) -> ExactCircle {
    if x.is_zero() {
        return ExactCircle::one();
    }
    match v {
        // (1 - i sign a) / sqrt 2
        Place::Infinity => {
            if x.is_positive() {
                eighth(7)
            } else {
                eighth(1)
            }
        }
        Place::Prime(2) => lambda_two(x),
        Place::Prime(p) => lambda_odd(x, p),
    }
}

fn lambda_odd(x: &Rat, p: u64) -> ExactCircle {
    let (nu, _, _) = split_unit(x, p);
    if nu.rem_euclid(2) == 0 {
        return ExactCircle::one();
    }
    let x0 = leading_digit(x, p);
    let symbol = legendre(&BigInt::from(x0), p).expect("odd prime");
    // (x0/p) for p = 1 mod 4, i (x0/p) for p = 3 mod 4
    let quarter_turns = match (p % 4, symbol) {
        (1, 1) => 0,
        (1, _) => 2,
        (_, 1) => 1,
        (_, _) => 3,
    };
    eighth(2 * quarter_turns)
}

fn lambda_two(x: &Rat) -> ExactCircle {
    let d = digits(x, 2, 3).expect("nonzero");
    let (x1, x2) = (d.digits[1] as i64, d.digits[2] as i64);
    // [1 + (-1)^{x1} i] / sqrt 2
    let base = if x1 == 0 { 1 } else { 7 };
    if d.valuation.rem_euclid(2) == 0 {
        eighth(base)
    } else {
        // extra sign (-1)^{x1 + x2}
        eighth(base + 4 * ((x1 + x2) % 2))
    }
}

/// Additive character: `exp(2 pi i {x}_p)` at a prime, `exp(-2 pi i x)` at infinity.
pub fn character(x: &Rat, v: Place) -> ExactCircle {
    match v {
        Place::Infinity => ExactCircle::unit(-x),
        Place::Prime(p) => ExactCircle::unit(frac_part(x, p)),
    }
}
