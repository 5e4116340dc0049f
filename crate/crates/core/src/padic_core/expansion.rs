//! Valuations, norms, canonical digit expansions and fractional parts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::place::{Place, Valuation};
use super::rat::Rat;
use crate::error::CoreError;

/// Leading part of the canonical expansion `x = p^valuation * sum digits[i] p^i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadicDigits {
    pub valuation: i64,
    pub digits: Vec<u64>,
}

impl PadicDigits {
    /// `p^valuation * sum digits[i] p^i`.
    pub fn reconstruct(&self, p: u64) -> Rat {
        let mut acc = BigInt::zero();
        for &d in self.digits.iter().rev() {
            acc = acc * p + d;
        }
        Rat::from_int(acc) * Rat::int_pow(p, self.valuation)
    }
}

fn strip_factor(n: &BigInt, p: &BigInt) -> (i64, BigInt) {
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return (k, n);
        }
        n = q;
        k += 1;
    }
}

/// Splits nonzero `x` as `p^v * (u / w)` with `p` dividing neither `u` nor `w`.
pub(crate) fn split_unit(x: &Rat, p: u64) -> (i64, BigInt, BigInt) {
    debug_assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let (kn, u) = strip_factor(x.numer(), &pb);
    let (kd, w) = strip_factor(x.denom(), &pb);
    (kn - kd, u, w)
}

/// Inverse of `a` modulo `m`; `a` must be coprime to `m`.
pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

/// `u * w^{-1} mod modulus` for a p-adic unit `u/w`.
pub(crate) fn unit_residue(u: &BigInt, w: &BigInt, modulus: &BigInt) -> BigInt {
    (u * mod_inverse(w, modulus)).mod_floor(modulus)
}

pub fn valuation(x: &Rat, p: u64) -> Valuation {
    if x.is_zero() {
        Valuation::Infinite
    } else {
        Valuation::Finite(split_unit(x, p).0)
    }
}

/// `|x|_p = p^{-v}` or the ordinary absolute value at infinity.
pub fn norm(x: &Rat, v: Place) -> Rat {
    match v {
        Place::Infinity => x.abs(),
        Place::Prime(p) => match valuation(x, p) {
            Valuation::Infinite => Rat::zero(),
            Valuation::Finite(k) => Rat::int_pow(p, -k),
        },
    }
}

pub fn digits(x: &Rat, p: u64, count: usize) -> Result<PadicDigits, CoreError> {
    if x.is_zero() {
        return Err(CoreError::ZeroInput);
    }
    if count == 0 {
        return Err(CoreError::InvalidArgument(
            "digit count must be positive".into(),
        ));
    }
    let (v, u, w) = split_unit(x, p);
    let pb = BigInt::from(p);
    let modulus = num_traits::pow(pb.clone(), count);
    let mut r = unit_residue(&u, &w, &modulus);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let (q, d) = r.div_rem(&pb);
        out.push(d.to_u64().expect("digit below p"));
        r = q;
    }
    Ok(PadicDigits {
        valuation: v,
        digits: out,
    })
}

/// `{x}_p`: the rational in `[0, 1)` with p-power denominator congruent to
/// `x` modulo `Z_p`.
pub fn frac_part(x: &Rat, p: u64) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    let (v, u, w) = split_unit(x, p);
    if v >= 0 {
        return Rat::zero();
    }
    let m = (-v) as usize;
    let modulus = num_traits::pow(BigInt::from(p), m);
    let r = unit_residue(&u, &w, &modulus);
    Rat::new(r, modulus)
}

/// Legendre symbol `(a/p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(a: &BigInt, p: u64) -> Result<i8, CoreError> {
    if p == 2 {
        return Err(CoreError::EvenPrime);
    }
    let pb = BigInt::from(p);
    let a = a.mod_floor(&pb);
    if a.is_zero() {
        return Ok(0);
    }
    let e = a.modpow(&BigInt::from((p - 1) / 2), &pb);
    Ok(if e.is_one() { 1 } else { -1 })
}

/// First canonical digit `x_0` of a nonzero rational.
pub(crate) fn leading_digit(x: &Rat, p: u64) -> u64 {
    let (_, u, w) = split_unit(x, p);
    unit_residue(&u, &w, &BigInt::from(p))
        .abs()
        .to_u64()
        .expect("digit below p")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_core::rat::rat;

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&rat(1, 1), 5), Valuation::Finite(0));
        assert_eq!(valuation(&rat(12, 1), 2), Valuation::Finite(2));
        assert_eq!(valuation(&rat(3, 4), 2), Valuation::Finite(-2));
        assert_eq!(valuation(&Rat::zero(), 7), Valuation::Infinite);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&Rat::zero(), Place::Prime(3)), Rat::zero());
        assert_eq!(norm(&rat(3, 4), Place::Prime(2)), rat(4, 1));
        assert_eq!(norm(&rat(-5, 2), Place::Infinity), rat(5, 2));
        assert_eq!(norm(&rat(50, 3), Place::Prime(5)), rat(1, 25));
    }

    #[test]
    fn digit_examples() {
        let d = digits(&rat(3, 4), 2, 3).unwrap();
        assert_eq!(
            d,
            PadicDigits {
                valuation: -2,
                digits: vec![1, 1, 0]
            }
        );
        let d = digits(&rat(7, 1), 7, 1).unwrap();
        assert_eq!(
            d,
            PadicDigits {
                valuation: 1,
                digits: vec![1]
            }
        );
        let d = digits(&rat(-1, 1), 3, 3).unwrap();
        assert_eq!(
            d,
            PadicDigits {
                valuation: 0,
                digits: vec![2, 2, 2]
            }
        );
        assert!(matches!(
            digits(&Rat::zero(), 3, 2),
            Err(CoreError::ZeroInput)
        ));
    }

    #[test]
    fn digits_of_fraction_with_unit_denominator() {
        // 1/3 in Z_2 is 1 + 2 + 2^3 + 2^5 + ... (since 3 * ...10101011 = 1)
        let d = digits(&rat(1, 3), 2, 6).unwrap();
        assert_eq!(d.valuation, 0);
        assert_eq!(d.digits, vec![1, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn frac_examples() {
        assert_eq!(frac_part(&rat(7, 1), 5), Rat::zero());
        assert_eq!(frac_part(&rat(1, 2), 2), rat(1, 2));
        assert_eq!(frac_part(&rat(-1, 3), 3), rat(2, 3));
        // 1/6 in Q_3: 1/6 = (1/2)/3, 1/2 = 2 mod 3
        assert_eq!(frac_part(&rat(1, 6), 3), rat(2, 3));
        assert_eq!(frac_part(&rat(1, 6), 5), Rat::zero());
    }

    #[test]
    fn legendre_examples() {
        let b = |n: i64| BigInt::from(n);
        assert_eq!(legendre(&b(1), 7).unwrap(), 1);
        assert_eq!(legendre(&b(2), 7).unwrap(), 1);
        assert_eq!(legendre(&b(2), 5).unwrap(), -1);
        assert_eq!(legendre(&b(14), 7).unwrap(), 0);
        assert_eq!(legendre(&b(-1), 3).unwrap(), -1);
        assert!(matches!(legendre(&b(3), 2), Err(CoreError::EvenPrime)));
    }

    #[test]
    fn legendre_matches_residue_enumeration() {
        for p in [3u64, 5, 7, 11, 13] {
            let squares: Vec<u64> = (1..p).map(|x| x * x % p).collect();
            for a in 1..p {
                let expect = if squares.contains(&a) { 1 } else { -1 };
                assert_eq!(legendre(&BigInt::from(a), p).unwrap(), expect, "({a}/{p})");
            }
        }
    }
}
