//! Group property, time slicing and the second-derivative relations.

use serde::Serialize;
use serde_json::json;

use super::report::VerificationReport;
use super::{action_character, kernel_at, normalization, KernelSpec};
use crate::actions::{coefficient_gap, compose, QuadraticAction, SeriesApprox, System};
use crate::error::{ActionError, PropagatorError};
use crate::padic_core::{valuation, ExactCircle, Place, Rat, Valuation};

fn same_setting(a: &KernelSpec, b: &KernelSpec) -> Result<(), PropagatorError> {
    if a.place != b.place {
        return Err(PropagatorError::SpecMismatch("place"));
    }
    if a.h != b.h {
        return Err(PropagatorError::SpecMismatch("h"));
    }
    Ok(())
}

/// Checks `int K(x'', t''; x, t) K(x, t; x', t') dx = K(x'', t''; x', t')`.
///
/// `later` runs from the intermediate time to `t''`, `earlier` from `t'` to
/// it, and `direct` is the independently constructed action on `[t', t'']`.
/// The composed side is `N1 N2 lambda(alpha) |2 alpha|^{-1/2}` times the
/// character of the induced action; it is compared against `direct` through
/// the normalization, the induced coefficients, and kernel values at
/// `points`. Phases are compared in full, so the character condition that
/// accompanies the normalization conditions is covered as well.
pub fn verify_group(
    later: &KernelSpec,
    earlier: &KernelSpec,
    direct: &KernelSpec,
    points: &[(Rat, Rat)],
) -> Result<VerificationReport, PropagatorError> {
    same_setting(later, earlier)?;
    same_setting(later, direct)?;
    let comp = compose(&later.action, &earlier.action, later.place, &later.h)?;
    let composed_norm = normalization(later)?
        .mul(&normalization(earlier)?)
        .mul(&comp.gauss_factor);
    let direct_norm = normalization(direct)?;

    let composed_spec = KernelSpec {
        action: comp.action.clone(),
        place: later.place,
        h: later.h.clone(),
    };
    let exact = composed_spec.action.is_exact() && direct.action.is_exact();
    let (coeffs_ok, gap, declared) = match later.place {
        Place::Prime(p) if !exact => {
            let declared = [composed_spec.action.precision, direct.action.precision]
                .iter()
                .flatten()
                .map(|b| b.valuation)
                .min()
                .expect("series-backed");
            let gap = coefficient_gap(&composed_spec.action, &direct.action, p);
            (gap >= Valuation::Finite(declared), gap, Some(declared))
        }
        _ => {
            let same = composed_spec.action.coefficients() == direct.action.coefficients();
            (
                same,
                if same {
                    Valuation::Infinite
                } else {
                    Valuation::Finite(0)
                },
                None,
            )
        }
    };

    let mut got_values = Vec::with_capacity(points.len());
    let mut expected_values = Vec::with_capacity(points.len());
    let mut values_ok = true;
    for (x2, x1) in points {
        let lhs = composed_norm.mul(&action_character(&composed_spec, x2, x1)?);
        let rhs = kernel_at(direct, x2, x1)?;
        values_ok &= lhs == rhs;
        got_values.push(lhs);
        expected_values.push(rhs);
    }

    let ok = composed_norm == direct_norm && coeffs_ok && values_ok;
    Ok(VerificationReport::new(
        "group",
        json!({
            "system": direct.action.label,
            "place": later.place,
            "h": later.h,
            "times": [earlier.action.t_start, later.action.t_start, later.action.t_end],
            "points": points,
        }),
        json!({ "normalization": direct_norm, "kernel": expected_values }),
        json!({
            "normalization": composed_norm,
            "kernel": got_values,
            "alpha": comp.alpha,
            "coefficient_gap": gap,
            "declared_valuation": declared,
        }),
        None,
        ok,
    ))
}

/// Kernel assembled from `n` equal time slices.
#[derive(Clone, Debug, Serialize)]
pub struct TimeSliced {
    pub value: ExactCircle,
    /// Accumulated prefactor `prod N_i prod lambda(alpha_i) |2 alpha_i|^{-1/2}`.
    pub prefactor: ExactCircle,
    /// Action induced on the whole interval after integrating out the
    /// `n - 1` intermediate points.
    pub action: QuadraticAction,
}

/// Reduces the `n`-slice multiple integral by `n - 1` successive Gauss
/// integrations and evaluates the result at `(x2, x1)`.
#[allow(clippy::too_many_arguments)]
pub fn time_sliced(
    system: &System,
    n: usize,
    t_start: &Rat,
    t_end: &Rat,
    place: Place,
    h: &Rat,
    x2: &Rat,
    x1: &Rat,
) -> Result<TimeSliced, PropagatorError> {
    if n == 0 {
        return Err(PropagatorError::InvalidArgument(
            "slice count must be positive".into(),
        ));
    }
    let step = (t_end - t_start) / Rat::from(n as i64);
    let time = |i: usize| t_start + &step * Rat::from(i as i64);
    let slice_spec = |i: usize| -> Result<KernelSpec, PropagatorError> {
        let action = system.action(&time(i), &time(i + 1))?;
        KernelSpec::new(action, place, h.clone())
    };

    let first = slice_spec(0)?;
    let mut prefactor = normalization(&first)?;
    let mut action = first.action;
    for i in 1..n {
        let next = slice_spec(i)?;
        prefactor = prefactor.mul(&normalization(&next)?);
        let comp = compose(&next.action, &action, place, h)?;
        prefactor = prefactor.mul(&comp.gauss_factor);
        action = comp.action;
    }
    let spec = KernelSpec::new(action, place, h.clone())?;
    let value = prefactor.mul(&action_character(&spec, x2, x1)?);
    Ok(TimeSliced {
        value,
        prefactor,
        action: spec.action,
    })
}

/// Values of `u` and `v` in
/// `S1_xx + S2_xx = -u (S1_x''x + S2_xx')` and
/// `1/S1_x''x + 1/S2_xx' = v / S_x''x'`.
#[derive(Clone, Debug, Serialize)]
pub struct UvRelation {
    pub u: SeriesApprox,
    pub v: SeriesApprox,
    /// Certified `u = 1 mod p^k` (`k = 1`, or `3` at `p = 2`); `None` at infinity.
    pub u_congruent: Option<bool>,
    pub v_congruent: Option<bool>,
    pub report: VerificationReport,
}

fn congruent_to_one(x: &SeriesApprox, p: u64) -> bool {
    let k = if p == 2 { 3 } else { 1 };
    let need = Valuation::Finite(k);
    let diff = valuation(&(&x.value - &Rat::one()), p);
    diff.min(x.error_valuation) >= need
}

/// Solves the two relations between second derivatives of `later`
/// (on `(x'', t''; x, t)`) and `earlier` (on `(x, t; x', t')`), with
/// `S_x''x'` taken from their composition.
pub fn relations_uv(
    later: &QuadraticAction,
    earlier: &QuadraticAction,
    place: Place,
) -> Result<UvRelation, PropagatorError> {
    let comp = compose(later, earlier, place, &Rat::one()).map_err(|e| match e {
        ActionError::DegenerateComposition => {
            PropagatorError::DegenerateRelation("S1_xx + S2_xx vanishes")
        }
        other => other.into(),
    })?;
    let p = [later.precision, earlier.precision]
        .iter()
        .flatten()
        .map(|b| b.p)
        .next()
        .or(place.as_prime())
        .unwrap_or(0);
    let track = |q: &QuadraticAction, x: &Rat| match q.precision {
        Some(b) => SeriesApprox {
            value: x.clone(),
            error_valuation: Valuation::Finite(b.valuation),
            p: b.p,
        },
        None => SeriesApprox::exact(x.clone(), p),
    };
    let (_, b1, c1) = later.second_derivatives();
    let (a2, b2, _) = earlier.second_derivatives();
    let xx = track(later, &c1).add(&track(earlier, &a2));
    let mixed_sum = track(later, &b1).add(&track(earlier, &b2));
    let u = xx
        .div(&mixed_sum)
        .ok_or(PropagatorError::DegenerateRelation(
            "S1_x''x + S2_xx' vanishes",
        ))?
        .neg();
    let inv1 = track(later, &b1)
        .recip()
        .ok_or(PropagatorError::DegenerateRelation("S1_x''x"))?;
    let inv2 = track(earlier, &b2)
        .recip()
        .ok_or(PropagatorError::DegenerateRelation("S2_xx'"))?;
    let total_b = track(&comp.action, &comp.action.b);
    let v = inv1.add(&inv2).mul(&total_b);

    let (u_congruent, v_congruent) = match place {
        Place::Prime(q) => (Some(congruent_to_one(&u, q)), Some(congruent_to_one(&v, q))),
        Place::Infinity => (None, None),
    };
    let exact_one = u.is_exact() && v.is_exact() && u.value == Rat::one() && v.value == Rat::one();
    let ok = exact_one || (u_congruent == Some(true) && v_congruent == Some(true));
    let report = VerificationReport::new(
        "uv",
        json!({
            "later": later.label,
            "earlier": earlier.label,
            "times": [earlier.t_start, later.t_start, later.t_end],
            "place": place,
        }),
        json!({ "u": "1", "v": "1", "congruence": if place.as_prime() == Some(2) { "mod 8" } else { "mod p" } }),
        json!({
            "u": u.value,
            "v": v.value,
            "u_error_valuation": u.error_valuation,
            "v_error_valuation": v.error_valuation,
            "u_congruent": u_congruent,
            "v_congruent": v_congruent,
        }),
        None,
        ok,
    );
    Ok(UvRelation {
        u,
        v,
        u_congruent,
        v_congruent,
        report,
    })
}
