//! Exact complex values of the form `sqrt(mag2) * exp(2 pi i phase)`.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use super::rat::Rat;

/// An exact complex number on a circle of rational squared radius with a
/// rational phase.
///
/// The phase is kept reduced into `[0, 1)` and forced to zero whenever the
/// magnitude vanishes, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExactCircle {
    mag2: Rat,
    phase: Rat,
}

impl ExactCircle {
    /// Builds a value; panics on negative `mag2`.
    pub fn new(mag2: Rat, phase: Rat) -> ExactCircle {
        assert!(!mag2.is_negative(), "negative squared magnitude");
        let phase = if mag2.is_zero() {
            Rat::zero()
        } else {
            phase.fract_mod_one()
        };
        ExactCircle { mag2, phase }
    }

    pub fn one() -> ExactCircle {
        ExactCircle {
            mag2: Rat::one(),
            phase: Rat::zero(),
        }
    }

    pub fn zero() -> ExactCircle {
        ExactCircle {
            mag2: Rat::zero(),
            phase: Rat::zero(),
        }
    }

    /// Unit-modulus value `exp(2 pi i phase)`.
    pub fn unit(phase: Rat) -> ExactCircle {
        ExactCircle::new(Rat::one(), phase)
    }

    /// Positive real `sqrt(mag2)`.
    pub fn real_sqrt(mag2: Rat) -> ExactCircle {
        ExactCircle::new(mag2, Rat::zero())
    }

    pub fn mag2(&self) -> &Rat {
        &self.mag2
    }

    pub fn phase(&self) -> &Rat {
        &self.phase
    }

    pub fn is_unit(&self) -> bool {
        self.mag2 == Rat::one()
    }

    pub fn mul(&self, other: &ExactCircle) -> ExactCircle {
        ExactCircle::new(&self.mag2 * &other.mag2, &self.phase + &other.phase)
    }

    pub fn conj(&self) -> ExactCircle {
        ExactCircle::new(self.mag2.clone(), -&self.phase)
    }

    pub fn to_complex(&self) -> Complex64 {
        let r = self.mag2.to_f64().sqrt();
        let theta = std::f64::consts::TAU * self.phase.to_f64();
        let (s, c) = theta.sin_cos();
        Complex64::new(r * c, r * s)
    }
}

impl std::ops::Mul for &ExactCircle {
    type Output = ExactCircle;
    fn mul(self, rhs: &ExactCircle) -> ExactCircle {
        ExactCircle::mul(self, rhs)
    }
}

impl std::ops::Mul for ExactCircle {
    type Output = ExactCircle;
    fn mul(self, rhs: ExactCircle) -> ExactCircle {
        ExactCircle::mul(&self, &rhs)
    }
}

impl std::iter::Product for ExactCircle {
    fn product<I: Iterator<Item = ExactCircle>>(iter: I) -> ExactCircle {
        iter.fold(ExactCircle::one(), |acc, z| acc.mul(&z))
    }
}

impl fmt::Display for ExactCircle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sqrt({})*e(2pi i*{})", self.mag2, self.phase)
    }
}

impl fmt::Debug for ExactCircle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
