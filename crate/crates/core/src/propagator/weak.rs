//! Weak forms of the unitarity and delta-limit relations, evaluated by
//! brute-force integration against locally constant test functions.

use num_complex::Complex64;
use serde::Serialize;

use super::{normalization, KernelSpec};
use crate::error::{GaussError, PropagatorError};
use crate::gauss::{gauss_brute, min_mesh, BallSpec};
use crate::padic_core::{character, valuation, Place, Rat, Valuation};

/// `coefficient * 1_{center + p^gamma Z_p}`; the ball has radius `p^{-gamma}`.
#[derive(Clone, Debug, Serialize)]
pub struct BallTerm {
    #[serde(serialize_with = "crate::suites::ser_complex")]
    pub coefficient: Complex64,
    pub center: Rat,
    pub gamma: i64,
}

/// Finite linear combination of ball indicators.
#[derive(Clone, Debug, Default, Serialize)]
pub struct BallFunction {
    pub terms: Vec<BallTerm>,
}

impl BallFunction {
    pub fn indicator(center: Rat, gamma: i64) -> BallFunction {
        BallFunction {
            terms: vec![BallTerm {
                coefficient: Complex64::new(1.0, 0.0),
                center,
                gamma,
            }],
        }
    }

    pub fn plus(mut self, coefficient: Complex64, center: Rat, gamma: i64) -> BallFunction {
        self.terms.push(BallTerm {
            coefficient,
            center,
            gamma,
        });
        self
    }

    pub fn scaled(&self, c: Complex64) -> BallFunction {
        BallFunction {
            terms: self
                .terms
                .iter()
                .map(|t| BallTerm {
                    coefficient: t.coefficient * c,
                    ..t.clone()
                })
                .collect(),
        }
    }

    /// Pointwise value at `x` in `Q_p`.
    pub fn eval(&self, x: &Rat, p: u64) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| valuation(&(x - &t.center), p) >= Valuation::Finite(t.gamma))
            .map(|t| t.coefficient)
            .sum()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EvolveOptions {
    pub budget: u64,
    /// Mesh levels added on top of the local constancy bound.
    pub extra_mesh: i64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            budget: crate::gauss::DEFAULT_TERM_BUDGET,
            extra_mesh: 0,
        }
    }
}

fn prime_of(spec: &KernelSpec) -> Result<u64, PropagatorError> {
    spec.place
        .as_prime()
        .ok_or(GaussError::ArchimedeanPlace.into())
}

/// `int_{center + p^gamma Z_p} chi_p(A x^2 + B x + C) dx` by brute force.
fn ball_quadratic(
    quad: &Rat,
    lin: &Rat,
    constant: &Rat,
    center: &Rat,
    gamma: i64,
    p: u64,
    opts: EvolveOptions,
) -> Result<Complex64, PropagatorError> {
    // x = center + z, z in B_{-gamma}
    let shifted_lin = quad * center * Rat::from(2) + lin;
    let shift = quad * center * center + lin * center + constant;
    let ball_radius = -gamma;
    let delta = min_mesh(quad, &shifted_lin, p, ball_radius) + opts.extra_mesh;
    let spec = BallSpec::new(p, ball_radius, delta)?;
    let sum = gauss_brute(quad, &shifted_lin, spec, opts.budget)?;
    Ok(character(&shift, Place::Prime(p)).to_complex() * sum)
}

/// Samples of `(U psi)(x'') = int K(x'', t''; x', t') psi(x') dx'`.
pub fn evolve(
    spec: &KernelSpec,
    psi: &BallFunction,
    samples: &[Rat],
    opts: EvolveOptions,
) -> Result<Vec<Complex64>, PropagatorError> {
    let p = prime_of(spec)?;
    let s = &spec.action;
    let h = &spec.h;
    let n = normalization(spec)?.to_complex();
    samples
        .iter()
        .map(|x2| {
            // -S(x2, x')/h = A x'^2 + B x' + C
            let quad = -(&s.c / h);
            let lin = -((&s.b * x2 + &s.e) / h);
            let constant = -((&s.a * x2 * x2 + &s.d * x2 + &s.f) / h);
            let mut total = Complex64::new(0.0, 0.0);
            for term in &psi.terms {
                let part =
                    ball_quadratic(&quad, &lin, &constant, &term.center, term.gamma, p, opts)?;
                total += term.coefficient * part;
            }
            Ok(n * total)
        })
        .collect()
}

/// Ball radius `gamma_0` beyond which the off-diagonal integral vanishes:
/// the valuation of `(x2 - z) b / h`, clamped at zero.
pub fn unitarity_threshold(spec: &KernelSpec, x2: &Rat, z: &Rat) -> Result<i64, PropagatorError> {
    let p = prime_of(spec)?;
    let coeff = (x2 - z) * &spec.action.b / &spec.h;
    Ok(match valuation(&coeff, p) {
        Valuation::Finite(v) => v.max(0),
        Valuation::Infinite => 0,
    })
}

/// `int_{B_gamma} conj(K(x2, t''; x', t')) K(z, t''; x', t') dx'` by brute force.
pub fn off_diagonal_unitarity(
    spec: &KernelSpec,
    x2: &Rat,
    z: &Rat,
    gamma: i64,
    budget: u64,
) -> Result<Complex64, PropagatorError> {
    let p = prime_of(spec)?;
    let s = &spec.action;
    let h = &spec.h;
    let n = normalization(spec)?;
    // conj K(x2; x') K(z; x') = |N|^2 chi((S(x2, x') - S(z, x'))/h)
    // the x'^2 terms cancel
    let quad = Rat::zero();
    let lin = ((&s.b * x2 + &s.e) - (&s.b * z + &s.e)) / h;
    let constant = ((&s.a * x2 * x2 + &s.d * x2) - (&s.a * z * z + &s.d * z)) / h;
    let delta = min_mesh(&quad, &lin, p, gamma);
    let ball = BallSpec::new(p, gamma, delta)?;
    let sum = gauss_brute(&quad, &lin, ball, budget)?;
    Ok(character(&constant, Place::Prime(p)).to_complex() * sum * n.mag2().to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::free_particle;
    use crate::gauss::DEFAULT_TERM_BUDGET;
    use crate::padic_core::rat;

    fn free_spec(p: u64, t: Rat) -> KernelSpec {
        KernelSpec::new(
            free_particle(&Rat::one(), &Rat::zero(), &t).unwrap(),
            Place::Prime(p),
            Rat::one(),
        )
        .unwrap()
    }

    #[test]
    fn ball_function_eval() {
        let f =
            BallFunction::indicator(Rat::zero(), 0).plus(Complex64::new(0.0, 2.0), rat(1, 3), 0);
        assert_eq!(f.eval(&rat(1, 1), 3), Complex64::new(1.0, 0.0));
        assert_eq!(f.eval(&rat(4, 3), 3), Complex64::new(0.0, 2.0));
        assert_eq!(f.eval(&rat(1, 9), 3), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn delta_limit_free_particle() {
        let p = 3;
        for k in 1..=3 {
            let spec = free_spec(p, Rat::int_pow(p, k));
            let psi = BallFunction::indicator(Rat::zero(), 0);
            let inside = [rat(0, 1), rat(1, 1), rat(5, 1), rat(-7, 2)];
            let outside = [rat(1, 3), rat(2, 9), rat(-4, 3)];
            for u in evolve(&spec, &psi, &inside, EvolveOptions::default()).unwrap() {
                assert!((u.norm() - 1.0).abs() < 1e-9, "|U psi| = {}", u.norm());
            }
            for u in evolve(&spec, &psi, &outside, EvolveOptions::default()).unwrap() {
                assert!(u.norm() < 1e-9);
            }
        }
    }

    #[test]
    fn evolve_is_linear() {
        let spec = free_spec(5, rat(5, 1));
        let psi = BallFunction::indicator(rat(1, 5), 1);
        let c = Complex64::new(-0.5, 2.0);
        let xs = [rat(2, 1), rat(1, 25)];
        let base = evolve(&spec, &psi, &xs, EvolveOptions::default()).unwrap();
        let scaled = evolve(&spec, &psi.scaled(c), &xs, EvolveOptions::default()).unwrap();
        for (b, s) in base.iter().zip(&scaled) {
            assert!((b * c - s).norm() < 1e-12);
        }
    }

    #[test]
    fn evolve_mesh_refinement() {
        let spec = free_spec(3, rat(2, 1));
        let psi = BallFunction::indicator(Rat::zero(), 0);
        let xs = [rat(0, 1), rat(1, 3), rat(4, 9)];
        let coarse = evolve(&spec, &psi, &xs, EvolveOptions::default()).unwrap();
        let fine = evolve(
            &spec,
            &psi,
            &xs,
            EvolveOptions {
                extra_mesh: 3,
                ..Default::default()
            },
        )
        .unwrap();
        for (a, b) in coarse.iter().zip(&fine) {
            assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn evolve_rejects_real_place() {
        let spec = KernelSpec::new(
            free_particle(&Rat::one(), &Rat::zero(), &Rat::one()).unwrap(),
            Place::Infinity,
            Rat::one(),
        )
        .unwrap();
        let r = evolve(
            &spec,
            &BallFunction::indicator(Rat::zero(), 0),
            &[Rat::zero()],
            EvolveOptions::default(),
        );
        assert!(matches!(
            r,
            Err(PropagatorError::Gauss(GaussError::ArchimedeanPlace))
        ));
    }

    #[test]
    fn off_diagonal_vanishes_past_threshold() {
        let spec = free_spec(3, rat(1, 1));
        let (x2, z) = (rat(1, 1), Rat::zero());
        let g0 = unitarity_threshold(&spec, &x2, &z).unwrap();
        let r = off_diagonal_unitarity(&spec, &x2, &z, g0 + 1, DEFAULT_TERM_BUDGET).unwrap();
        assert!(r.norm() < 1e-9);
        // below the threshold the ball is too small to see a full period
        let below = off_diagonal_unitarity(&spec, &x2, &z, g0 - 1, DEFAULT_TERM_BUDGET).unwrap();
        assert!(below.norm() > 1e-3);
    }

    #[test]
    fn diagonal_mass_grows_with_ball() {
        let spec = free_spec(5, rat(1, 5));
        let n2 = normalization(&spec).unwrap().mag2().to_f64();
        for gamma in 0..3 {
            let r =
                off_diagonal_unitarity(&spec, &rat(2, 1), &rat(2, 1), gamma, DEFAULT_TERM_BUDGET)
                    .unwrap();
            let expect = n2 * 5f64.powi(gamma as i32);
            assert!((r.re - expect).abs() < 1e-9 * expect && r.im.abs() < 1e-9);
        }
    }
}
