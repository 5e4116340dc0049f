//! The kernel `K_v(x'', t''; x', t') = lambda_v(-b/2h) |b/h|_v^{1/2} chi_v(-S/h)`
//! and the relations it is checked against.

mod group;
mod report;
mod weak;

use serde::Serialize;

use crate::actions::QuadraticAction;
use crate::error::{ActionError, PropagatorError};
use crate::padic_core::{
    character, lambda_fn, norm, valuation, ExactCircle, Place, Rat, Valuation,
};

pub use group::{relations_uv, time_sliced, verify_group, TimeSliced, UvRelation};
pub use report::{Status, VerificationReport};
pub use weak::{
    evolve, off_diagonal_unitarity, unitarity_threshold, BallFunction, BallTerm, EvolveOptions,
};

/// An action at a place with a rational Planck constant.
#[derive(Clone, Debug, Serialize)]
pub struct KernelSpec {
    pub action: QuadraticAction,
    pub place: Place,
    pub h: Rat,
}

impl KernelSpec {
    pub fn new(
        action: QuadraticAction,
        place: Place,
        h: Rat,
    ) -> Result<KernelSpec, PropagatorError> {
        if h.is_zero() {
            return Err(PropagatorError::ZeroPlanck);
        }
        if action.b.is_zero() {
            return Err(ActionError::DegenerateAction.into());
        }
        match (place, action.precision) {
            (Place::Infinity, Some(_)) => return Err(ActionError::ArchimedeanOscillator.into()),
            (Place::Prime(p), Some(bound)) if bound.p != p => {
                return Err(ActionError::PrimeMismatch(p, bound.p).into())
            }
            _ => {}
        }
        Ok(KernelSpec { action, place, h })
    }
}

/// Digits after the leading one that `lambda_p` reads.
fn lambda_digits(p: u64) -> i64 {
    if p == 2 {
        3
    } else {
        1
    }
}

/// Fails unless the series error leaves `norm` and `lambda` of the mixed
/// derivative unambiguous.
fn check_mixed_precision(spec: &KernelSpec) -> Result<(), PropagatorError> {
    let Some(bound) = spec.action.precision else {
        return Ok(());
    };
    let vb = valuation(&spec.action.b, bound.p)
        .finite()
        .expect("b nonzero");
    let need = vb + lambda_digits(bound.p);
    if bound.valuation < need {
        return Err(PropagatorError::InsufficientPrecision {
            have: bound.valuation.to_string(),
            need: need.to_string(),
        });
    }
    Ok(())
}

/// `N_v = lambda_v(-b/2h) |b/h|_v^{1/2}`.
pub fn normalization(spec: &KernelSpec) -> Result<ExactCircle, PropagatorError> {
    check_mixed_precision(spec)?;
    let b = &spec.action.b;
    let arg = -(b / (&spec.h * Rat::from(2)));
    let modulus = ExactCircle::real_sqrt(norm(&(b / &spec.h), spec.place));
    Ok(lambda_fn(&arg, spec.place).mul(&modulus))
}

/// `chi_v(-S(x2, x1)/h)`, exact for series-backed actions only when the
/// evaluation error stays inside `Z_p` after division by `h`.
pub fn action_character(
    spec: &KernelSpec,
    x2: &Rat,
    x1: &Rat,
) -> Result<ExactCircle, PropagatorError> {
    if let Place::Prime(p) = spec.place {
        let err = spec.action.evaluation_error(x2, x1);
        let vh = valuation(&spec.h, p).finite().expect("h nonzero");
        if err.shift(-vh) < Valuation::Finite(0) {
            return Err(PropagatorError::InsufficientPrecision {
                have: err.to_string(),
                need: vh.to_string(),
            });
        }
    }
    let s = spec.action.evaluate(x2, x1);
    Ok(character(&(-(s / &spec.h)), spec.place))
}

/// Kernel value `K_v(x2, t_end; x1, t_start)`.
pub fn kernel_at(spec: &KernelSpec, x2: &Rat, x1: &Rat) -> Result<ExactCircle, PropagatorError> {
    Ok(normalization(spec)?.mul(&action_character(spec, x2, x1)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actions::{constant_field, free_particle, harmonic_oscillator};
    use crate::padic_core::rat;
    use num_complex::Complex64;

    fn spec(action: QuadraticAction, place: Place) -> KernelSpec {
        KernelSpec::new(action, place, Rat::one()).unwrap()
    }

    #[test]
    fn normalization_free_particle_unit_case() {
        // |m/hT|_5 = 1
        let s = spec(
            free_particle(&rat(2, 1), &rat(0, 1), &rat(3, 1)).unwrap(),
            Place::Prime(5),
        );
        let n = normalization(&s).unwrap();
        assert_eq!(n.mag2(), &Rat::one());
        assert_eq!(n, lambda_fn(&rat(2, 6), Place::Prime(5)));
    }

    #[test]
    fn normalization_free_particle_real() {
        let s = spec(
            free_particle(&rat(3, 1), &rat(0, 1), &rat(2, 1)).unwrap(),
            Place::Infinity,
        );
        let n = normalization(&s).unwrap();
        assert_eq!(n.mag2(), &rat(3, 2));
        // argument -b/2h = m/2hT > 0, so lambda_inf = (1 - i)/sqrt 2
        assert_eq!(n.phase(), &rat(7, 8));
    }

    #[test]
    fn normalization_modulus_is_mixed_derivative_norm() {
        for place in [
            Place::Prime(2),
            Place::Prime(3),
            Place::Prime(7),
            Place::Infinity,
        ] {
            for h in [rat(1, 1), rat(1, 2), rat(2, 1), rat(3, 1)] {
                let a = constant_field(&rat(4, 9), &rat(1, 5), &rat(-1, 2), &rat(7, 3)).unwrap();
                let b = a.b.clone();
                let s = KernelSpec::new(a, place, h.clone()).unwrap();
                assert_eq!(normalization(&s).unwrap().mag2(), &norm(&(b / h), place));
            }
        }
    }

    #[test]
    fn kernel_diagonal_free_particle() {
        let s = spec(
            free_particle(&rat(1, 1), &rat(0, 1), &rat(1, 1)).unwrap(),
            Place::Prime(5),
        );
        let k = kernel_at(&s, &rat(2, 5), &rat(2, 5)).unwrap();
        assert_eq!(k, normalization(&s).unwrap());
    }

    #[test]
    fn kernel_free_particle_fractional_displacement() {
        let p = 3;
        let s = spec(
            free_particle(&rat(1, 1), &rat(0, 1), &rat(1, 1)).unwrap(),
            Place::Prime(p),
        );
        let k = kernel_at(&s, &rat(1, 3), &Rat::zero()).unwrap();
        let expected_char = crate::padic_core::frac_part(&rat(-1, 18), p);
        let n = normalization(&s).unwrap();
        assert_eq!(k.phase(), &(n.phase() + &expected_char).fract_mod_one());
    }

    /// Real kernel against `(i b / h)^{1/2} exp(2 pi i S / h)` with the
    /// principal square root.
    #[test]
    fn kernel_real_matches_textbook_form() {
        let h = rat(3, 2);
        for (m, t1) in [
            (rat(1, 1), rat(1, 1)),
            (rat(-2, 3), rat(5, 4)),
            (rat(7, 2), rat(-1, 3)),
        ] {
            let action = free_particle(&m, &Rat::zero(), &t1).unwrap();
            let b = action.b.to_f64();
            let s = spec(action.clone(), Place::Infinity);
            let s = KernelSpec { h: h.clone(), ..s };
            let (x2, x1) = (rat(2, 7), rat(-1, 3));
            let k = kernel_at(&s, &x2, &x1).unwrap().to_complex();
            let hf = h.to_f64();
            let pre = (Complex64::new(0.0, 1.0) * (b / hf)).sqrt();
            let phase = std::f64::consts::TAU * action.evaluate(&x2, &x1).to_f64() / hf;
            let textbook = pre * Complex64::from_polar(1.0, phase);
            assert!((k - textbook).norm() < 1e-12, "{k} vs {textbook}");
        }
    }

    #[test]
    fn spec_validation() {
        let a = free_particle(&rat(1, 1), &rat(0, 1), &rat(1, 1)).unwrap();
        assert!(matches!(
            KernelSpec::new(a.clone(), Place::Prime(3), Rat::zero()),
            Err(PropagatorError::ZeroPlanck)
        ));
        let osc =
            harmonic_oscillator(&rat(1, 1), &rat(3, 1), &rat(0, 1), &rat(1, 1), 3, 10).unwrap();
        assert!(KernelSpec::new(osc.clone(), Place::Infinity, Rat::one()).is_err());
        assert!(KernelSpec::new(osc, Place::Prime(5), Rat::one()).is_err());
    }

    #[test]
    fn series_precision_is_enforced() {
        let osc =
            harmonic_oscillator(&rat(1, 1), &rat(3, 1), &rat(0, 1), &rat(1, 1), 3, 4).unwrap();
        let s = spec(osc, Place::Prime(3));
        assert!(kernel_at(&s, &rat(1, 1), &rat(2, 1)).is_ok());
        assert!(matches!(
            kernel_at(&s, &Rat::int_pow(3, -12), &Rat::one()),
            Err(PropagatorError::InsufficientPrecision { .. })
        ));
    }
}
