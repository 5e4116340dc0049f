//! Rational approximants of p-adic numbers with a certified error valuation,
//! and the p-adic sine and cosine series.

use serde::Serialize;

use crate::error::ActionError;
use crate::padic_core::{valuation, Rat, Valuation};

/// `value` approximates a p-adic number `t` with `v_p(t - value) >= error_valuation`.
///
/// An `Infinite` error valuation marks an exact value; arithmetic between
/// exact values never consults `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesApprox {
    pub value: Rat,
    pub error_valuation: Valuation,
    pub p: u64,
}

impl SeriesApprox {
    pub fn exact(value: Rat, p: u64) -> SeriesApprox {
        SeriesApprox {
            value,
            error_valuation: Valuation::Infinite,
            p,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.error_valuation.is_infinite()
    }

    /// Valuation of the approximant itself.
    pub fn value_valuation(&self) -> Valuation {
        if self.is_exact() && self.p == 0 {
            return Valuation::Infinite;
        }
        valuation(&self.value, self.p)
    }

    /// Lower bound for the valuation of the true number.
    pub fn true_valuation_bound(&self) -> Valuation {
        self.value_valuation().min(self.error_valuation)
    }

    /// True when the approximant provably has the same valuation as the
    /// number it stands for.
    pub fn valuation_certain(&self) -> bool {
        self.is_exact() || self.value_valuation() < self.error_valuation
    }

    /// Number of certified digits after the leading one.
    pub fn relative_precision(&self) -> Valuation {
        match (self.error_valuation, self.value_valuation()) {
            (Valuation::Infinite, _) => Valuation::Infinite,
            (Valuation::Finite(e), Valuation::Finite(v)) => Valuation::Finite(e - v),
            (Valuation::Finite(_), Valuation::Infinite) => Valuation::Finite(i64::MIN / 4),
        }
    }

    pub fn add(&self, other: &SeriesApprox) -> SeriesApprox {
        SeriesApprox {
            value: &self.value + &other.value,
            error_valuation: self.error_valuation.min(other.error_valuation),
            p: self.p.max(other.p),
        }
    }

    pub fn sub(&self, other: &SeriesApprox) -> SeriesApprox {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SeriesApprox {
        SeriesApprox {
            value: -&self.value,
            error_valuation: self.error_valuation,
            p: self.p,
        }
    }

    pub fn mul(&self, other: &SeriesApprox) -> SeriesApprox {
        let p = self.p.max(other.p);
        let error_valuation = if self.is_exact() && other.is_exact() {
            Valuation::Infinite
        } else {
            // t s - x y = t (s - y) + y (t - x)
            let lhs = self.true_valuation_bound() + other.error_valuation;
            let rhs = other.value_valuation() + self.error_valuation;
            lhs.min(rhs)
        };
        SeriesApprox {
            value: &self.value * &other.value,
            error_valuation,
            p,
        }
    }

    pub fn scale(&self, r: &Rat) -> SeriesApprox {
        let error_valuation = if self.is_exact() {
            Valuation::Infinite
        } else {
            self.error_valuation + valuation(r, self.p)
        };
        SeriesApprox {
            value: &self.value * r,
            error_valuation,
            p: self.p,
        }
    }

    /// `1/t`; requires the valuation of `t` to be certified.
    pub fn recip(&self) -> Option<SeriesApprox> {
        if self.value.is_zero() || !self.valuation_certain() {
            return None;
        }
        let error_valuation = if self.is_exact() {
            Valuation::Infinite
        } else {
            // 1/t - 1/x = (x - t) / (x t)
            let v = self.value_valuation().finite()?;
            self.error_valuation.shift(-2 * v)
        };
        Some(SeriesApprox {
            value: self.value.recip(),
            error_valuation,
            p: self.p,
        })
    }

    pub fn div(&self, other: &SeriesApprox) -> Option<SeriesApprox> {
        Some(self.mul(&other.recip()?))
    }
}

/// Smallest valuation the disk admits: 1 for odd p, 2 for p = 2.
pub fn disk_valuation(p: u64) -> i64 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// Integer lower bound for `v_p(x^k / k!)` given `v_p(x) = v`, using
/// `v_p(k!) <= (k - 1) / (p - 1)`. Nondecreasing in `k` inside the disk.
fn term_bound(v: i64, k: i64, p: u64) -> i64 {
    let pm1 = p as i64 - 1;
    // ceil(k v - (k - 1)/(p - 1)) = k v - floor((k - 1)/(p - 1))
    k * v - (k - 1).div_euclid(pm1)
}

/// Sum of `(-1)^n x^{2n + parity} / (2n + parity)!` truncated once the
/// tail bound reaches `target`.
fn trig_series(x: &Rat, p: u64, target: i64, parity: i64) -> Result<SeriesApprox, ActionError> {
    let required = disk_valuation(p);
    let vx = match valuation(x, p) {
        Valuation::Infinite => {
            let value = if parity == 0 { Rat::one() } else { Rat::zero() };
            return Ok(SeriesApprox::exact(value, p));
        }
        Valuation::Finite(v) => v,
    };
    if vx < required {
        return Err(ActionError::OutsideDisk {
            arg: x.to_string(),
            valuation: vx.to_string(),
            required,
        });
    }
    let x2 = x * x;
    let mut k = parity;
    let mut term = if parity == 0 { Rat::one() } else { x.clone() };
    let mut sum = Rat::zero();
    loop {
        if term_bound(vx, k, p) >= target && k > parity {
            break;
        }
        sum = sum + &term;
        // next term: multiply by -x^2 / ((k + 1)(k + 2))
        term = -(&term * &x2) / Rat::from((k + 1) * (k + 2));
        k += 2;
    }
    Ok(SeriesApprox {
        value: sum,
        error_valuation: Valuation::Finite(term_bound(vx, k, p)),
        p,
    })
}

pub fn sin_p(x: &Rat, p: u64, target_valuation: i64) -> Result<SeriesApprox, ActionError> {
    trig_series(x, p, target_valuation, 1)
}

pub fn cos_p(x: &Rat, p: u64, target_valuation: i64) -> Result<SeriesApprox, ActionError> {
    trig_series(x, p, target_valuation, 0)
}
