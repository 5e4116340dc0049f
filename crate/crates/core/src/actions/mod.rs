//! Quadratic classical actions
//! `S(x'', t''; x', t') = a x''^2 + b x'' x' + c x'^2 + d x'' + e x' + f`,
//! the catalog systems, and composition over an intermediate point.

mod series;

use serde::Serialize;

use crate::error::ActionError;
use crate::gauss::gauss_closed;
use crate::padic_core::{valuation, ExactCircle, Place, Rat, Valuation};

pub use series::{cos_p, disk_valuation, sin_p, SeriesApprox};

/// Extra valuation requested on top of what a caller needs from a
/// series-backed action.
pub const SERIES_MARGIN: i64 = 5;

/// Certified accuracy of series-backed coefficients: every coefficient is
/// within `p^valuation` of the true one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorBound {
    pub p: u64,
    pub valuation: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticAction {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
    pub e: Rat,
    pub f: Rat,
    pub t_start: Rat,
    pub t_end: Rat,
    pub label: String,
    /// `None` for exactly known coefficients.
    pub precision: Option<ErrorBound>,
}

impl QuadraticAction {
    /// Builds an action, rejecting a vanishing mixed derivative.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        coeffs: [Rat; 6],
        t_start: Rat,
        t_end: Rat,
        label: impl Into<String>,
        precision: Option<ErrorBound>,
    ) -> Result<QuadraticAction, ActionError> {
        let [a, b, c, d, e, f] = coeffs;
        if b.is_zero() {
            return Err(ActionError::DegenerateAction);
        }
        Ok(QuadraticAction {
            a,
            b,
            c,
            d,
            e,
            f,
            t_start,
            t_end,
            label: label.into(),
            precision,
        })
    }

    pub fn coefficients(&self) -> [&Rat; 6] {
        [&self.a, &self.b, &self.c, &self.d, &self.e, &self.f]
    }

    pub fn duration(&self) -> Rat {
        &self.t_end - &self.t_start
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// `S(x2, t_end; x1, t_start)`.
    pub fn evaluate(&self, x2: &Rat, x1: &Rat) -> Rat {
        &self.a * x2 * x2
            + &self.b * x2 * x1
            + &self.c * x1 * x1
            + &self.d * x2
            + &self.e * x1
            + &self.f
    }

    /// Certified error valuation of [`evaluate`](Self::evaluate) at the given
    /// endpoints; `Infinite` for exact actions.
    pub fn evaluation_error(&self, x2: &Rat, x1: &Rat) -> Valuation {
        let Some(bound) = self.precision else {
            return Valuation::Infinite;
        };
        let v2 = valuation(x2, bound.p);
        let v1 = valuation(x1, bound.p);
        let smallest = [v2 + v2, v2 + v1, v1 + v1, v2, v1, Valuation::Finite(0)]
            .into_iter()
            .min()
            .expect("nonempty");
        smallest.shift(bound.valuation)
    }

    /// `(d^2 S / dx''^2, d^2 S / dx'' dx', d^2 S / dx'^2) = (2a, b, 2c)`.
    pub fn second_derivatives(&self) -> (Rat, Rat, Rat) {
        (
            &self.a * Rat::from(2),
            self.b.clone(),
            &self.c * Rat::from(2),
        )
    }

    /// Coefficient as a tracked approximant.
    fn tracked(&self, x: &Rat) -> SeriesApprox {
        match self.precision {
            None => SeriesApprox::exact(x.clone(), 0),
            Some(b) => SeriesApprox {
                value: x.clone(),
                error_valuation: Valuation::Finite(b.valuation),
                p: b.p,
            },
        }
    }

    /// Same coefficients on the time interval shifted by `dt`.
    pub fn shifted(&self, dt: &Rat) -> QuadraticAction {
        QuadraticAction {
            t_start: &self.t_start + dt,
            t_end: &self.t_end + dt,
            ..self.clone()
        }
    }
}

fn check_interval(m: &Rat, t_start: &Rat, t_end: &Rat) -> Result<Rat, ActionError> {
    if m.is_zero() {
        return Err(ActionError::ZeroMass);
    }
    let t = t_end - t_start;
    if t.is_zero() {
        return Err(ActionError::ZeroInterval);
    }
    Ok(t)
}

/// `m (x'' - x')^2 / 2T`.
pub fn free_particle(m: &Rat, t_start: &Rat, t_end: &Rat) -> Result<QuadraticAction, ActionError> {
    let t = check_interval(m, t_start, t_end)?;
    let half = m / (&t * Rat::from(2));
    QuadraticAction::new(
        [
            half.clone(),
            -(m / &t),
            half,
            Rat::zero(),
            Rat::zero(),
            Rat::zero(),
        ],
        t_start.clone(),
        t_end.clone(),
        "free",
        None,
    )
}

/// Particle with Lagrangian `m qdot^2 / 2 - g q`:
/// `m (x'' - x')^2 / 2T - g T (x'' + x') / 2 - g^2 T^3 / 24 m`.
pub fn constant_field(
    m: &Rat,
    g: &Rat,
    t_start: &Rat,
    t_end: &Rat,
) -> Result<QuadraticAction, ActionError> {
    let t = check_interval(m, t_start, t_end)?;
    let half = m / (&t * Rat::from(2));
    let linear = -(g * &t) / Rat::from(2);
    let constant = -(g * g * &t * &t * &t) / (m * Rat::from(24));
    QuadraticAction::new(
        [
            half.clone(),
            -(m / &t),
            half,
            linear.clone(),
            linear,
            constant,
        ],
        t_start.clone(),
        t_end.clone(),
        "field",
        None,
    )
}

/// `(m w / 2 sin wT) [(x''^2 + x'^2) cos wT - 2 x'' x']` with p-adic sine and
/// cosine; coefficients are certified to at least `target_valuation`.
pub fn harmonic_oscillator(
    m: &Rat,
    omega: &Rat,
    t_start: &Rat,
    t_end: &Rat,
    p: u64,
    target_valuation: i64,
) -> Result<QuadraticAction, ActionError> {
    let t = check_interval(m, t_start, t_end)?;
    if omega.is_zero() {
        return free_particle(m, t_start, t_end);
    }
    let theta = omega * &t;
    let required = disk_valuation(p);
    let vt = valuation(&theta, p).finite().expect("nonzero");
    if vt < required {
        return Err(ActionError::OutsideDisk {
            arg: theta.to_string(),
            valuation: vt.to_string(),
            required,
        });
    }
    let m_omega = m * omega;
    let vmw = valuation(&m_omega, p).finite().expect("nonzero");
    // division by sin costs 2 v(theta) digits; scaling by m w shifts by v(m w)
    let mut series_target = target_valuation + 2 * vt - vmw.min(0) + SERIES_MARGIN;
    loop {
        let s = sin_p(&theta, p, series_target)?;
        let c = cos_p(&theta, p, series_target)?;
        let inv_s = s.recip().ok_or(ActionError::DegenerateAction)?;
        let b = inv_s.scale(&-m_omega.clone());
        let a = c.mul(&inv_s).scale(&(&m_omega / Rat::from(2)));
        let err = a.error_valuation.min(b.error_valuation);
        if err >= Valuation::Finite(target_valuation) {
            let err = err.finite().unwrap_or(i64::MAX / 4);
            return QuadraticAction::new(
                [
                    a.value.clone(),
                    b.value,
                    a.value,
                    Rat::zero(),
                    Rat::zero(),
                    Rat::zero(),
                ],
                t_start.clone(),
                t_end.clone(),
                "oscillator",
                Some(ErrorBound { p, valuation: err }),
            );
        }
        series_target += target_valuation - err.finite().unwrap_or(target_valuation) + 1;
    }
}

/// A catalog system, independent of its time interval.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "system", rename_all = "lowercase")]
pub enum System {
    Free {
        m: Rat,
    },
    Field {
        m: Rat,
        g: Rat,
    },
    Oscillator {
        m: Rat,
        omega: Rat,
        p: u64,
        target_valuation: i64,
    },
}

impl System {
    pub fn action(&self, t_start: &Rat, t_end: &Rat) -> Result<QuadraticAction, ActionError> {
        match self {
            System::Free { m } => free_particle(m, t_start, t_end),
            System::Field { m, g } => constant_field(m, g, t_start, t_end),
            System::Oscillator {
                m,
                omega,
                p,
                target_valuation,
            } => harmonic_oscillator(m, omega, t_start, t_end, *p, *target_valuation),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            System::Free { .. } => "free",
            System::Field { .. } => "field",
            System::Oscillator { .. } => "oscillator",
        }
    }
}

/// Outcome of integrating out the intermediate point of two actions.
#[derive(Clone, Debug, Serialize)]
pub struct Composition {
    /// Induced action on the union interval.
    pub action: QuadraticAction,
    /// Coefficient of `x^2` in `-(S1 + S2)/h`.
    pub alpha: Rat,
    /// `lambda_v(alpha) |2 alpha|_v^{-1/2}`; the `chi_v(-beta^2/4 alpha)`
    /// part of the Gauss integral is folded into `action`.
    pub gauss_factor: ExactCircle,
}

fn precision_prime(s1: &QuadraticAction, s2: &QuadraticAction) -> Result<Option<u64>, ActionError> {
    match (s1.precision, s2.precision) {
        (Some(x), Some(y)) if x.p != y.p => Err(ActionError::PrimeMismatch(x.p, y.p)),
        (Some(x), _) | (_, Some(x)) => Ok(Some(x.p)),
        (None, None) => Ok(None),
    }
}

/// Integrates `chi_v(-(S1(x'', x) + S2(x, x'))/h)` over `x` by completing the
/// square. `s1` runs from the shared time to `t''`, `s2` from `t'` to it.
pub fn compose(
    s1: &QuadraticAction,
    s2: &QuadraticAction,
    v: Place,
    h: &Rat,
) -> Result<Composition, ActionError> {
    if s1.t_start != s2.t_end {
        return Err(ActionError::TimeMismatch {
            left: s1.t_start.to_string(),
            right: s2.t_end.to_string(),
        });
    }
    let prime = precision_prime(s1, s2)?;
    if v.is_archimedean() && prime.is_some() {
        return Err(ActionError::ArchimedeanOscillator);
    }
    let (a1, b1, c1, d1, e1, f1) = tracked6(s1);
    let (a2, b2, c2, d2, e2, f2) = tracked6(s2);

    // -(S1 + S2)/h = alpha x^2 + beta x + const, with
    // C = c1 + a2, B = b1 x'' + b2 x' + (e1 + d2)
    let quad = c1.add(&a2);
    if quad.value.is_zero() || !quad.valuation_certain() {
        return Err(ActionError::DegenerateComposition);
    }
    let lin = e1.add(&d2);
    let inv4c = quad
        .scale(&Rat::from(4))
        .recip()
        .ok_or(ActionError::DegenerateComposition)?;
    let inv2c = inv4c.scale(&Rat::from(2));

    let a = a1.sub(&b1.mul(&b1).mul(&inv4c));
    let b = b1.mul(&b2).mul(&inv2c).neg();
    let c = c2.sub(&b2.mul(&b2).mul(&inv4c));
    let d = d1.sub(&b1.mul(&lin).mul(&inv2c));
    let e = e2.sub(&b2.mul(&lin).mul(&inv2c));
    let f = f1.add(&f2).sub(&lin.mul(&lin).mul(&inv4c));

    let precision = match prime {
        None => None,
        Some(p) => {
            let err = [&a, &b, &c, &d, &e, &f]
                .iter()
                .map(|x| x.error_valuation)
                .min()
                .expect("nonempty");
            err.finite().map(|valuation| ErrorBound { p, valuation })
        }
    };

    let alpha = -(&quad.value / h);
    let gauss_factor =
        gauss_closed(&alpha, &Rat::zero(), v).map_err(|_| ActionError::DegenerateComposition)?;
    let label = if s1.label == s2.label {
        s1.label.clone()
    } else {
        format!("{}+{}", s1.label, s2.label)
    };
    let action = QuadraticAction::new(
        [a.value, b.value, c.value, d.value, e.value, f.value],
        s2.t_start.clone(),
        s1.t_end.clone(),
        label,
        precision,
    )?;
    Ok(Composition {
        action,
        alpha,
        gauss_factor,
    })
}

type Six = (
    SeriesApprox,
    SeriesApprox,
    SeriesApprox,
    SeriesApprox,
    SeriesApprox,
    SeriesApprox,
);

fn tracked6(s: &QuadraticAction) -> Six {
    (
        s.tracked(&s.a),
        s.tracked(&s.b),
        s.tracked(&s.c),
        s.tracked(&s.d),
        s.tracked(&s.e),
        s.tracked(&s.f),
    )
}

/// Least valuation of the coefficient-wise difference of two actions,
/// `Infinite` when they coincide.
pub fn coefficient_gap(x: &QuadraticAction, y: &QuadraticAction, p: u64) -> Valuation {
    x.coefficients()
        .iter()
        .zip(y.coefficients())
        .map(|(u, w)| valuation(&(*u - w), p))
        .min()
        .expect("six coefficients")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic_core::rat;

    #[test]
    fn free_particle_coefficients() {
        let s = free_particle(&rat(1, 1), &rat(0, 1), &rat(1, 1)).unwrap();
        assert_eq!(
            (s.a.clone(), s.b.clone(), s.c.clone()),
            (rat(1, 2), rat(-1, 1), rat(1, 2))
        );
        let s2 = free_particle(&rat(2, 1), &rat(0, 1), &rat(1, 1)).unwrap();
        assert_eq!(s2.evaluate(&rat(5, 3), &rat(5, 3)), Rat::zero());
        let s3 = free_particle(&rat(3, 1), &rat(1, 2), &rat(5, 2)).unwrap();
        assert_eq!(s3.second_derivatives(), (rat(3, 2), rat(-3, 2), rat(3, 2)));
        assert!(matches!(
            free_particle(&rat(1, 1), &rat(1, 1), &rat(1, 1)),
            Err(ActionError::ZeroInterval)
        ));
        assert!(matches!(
            free_particle(&Rat::zero(), &rat(0, 1), &rat(1, 1)),
            Err(ActionError::ZeroMass)
        ));
    }

    #[test]
    fn constant_field_coefficients() {
        let s = constant_field(&rat(1, 1), &rat(1, 1), &rat(0, 1), &rat(1, 1)).unwrap();
        assert_eq!(
            (s.d.clone(), s.e.clone(), s.f.clone()),
            (rat(-1, 2), rat(-1, 2), rat(-1, 24))
        );
        assert_eq!(s.b, rat(-1, 1));
        let off = constant_field(&rat(3, 2), &Rat::zero(), &rat(1, 3), &rat(2, 1)).unwrap();
        let free = free_particle(&rat(3, 2), &rat(1, 3), &rat(2, 1)).unwrap();
        assert_eq!(off.coefficients(), free.coefficients());
        assert_eq!(off.second_derivatives(), free.second_derivatives());
    }

    /// The classical action is the time integral of the Lagrangian along the
    /// classical path; checked by exact Simpson quadrature (exact for the
    /// quartic-in-time integrand).
    #[test]
    fn constant_field_is_classical_action() {
        let (m, g) = (rat(3, 2), rat(5, 7));
        let (t0, t1) = (rat(1, 3), rat(2, 1));
        let (x1, x2) = (rat(-2, 5), rat(4, 3));
        let t = &t1 - &t0;
        // q(s) = x1 + v s - g s^2 / 2m with q(T) = x2
        let v = (&x2 - &x1) / &t + &g * &t / (&m * Rat::from(2));
        let q = |s: &Rat| &x1 + &v * s - &g * s * s / (&m * Rat::from(2));
        let qdot = |s: &Rat| &v - &g * s / &m;
        let lag = |s: &Rat| &m * qdot(s) * qdot(s) / Rat::from(2) - &g * q(s);
        let mid = &t / Rat::from(2);
        // Simpson on two panels is exact for cubics; L is quadratic in s
        let integral = &t / Rat::from(6) * (lag(&Rat::zero()) + lag(&mid) * Rat::from(4) + lag(&t));
        let s = constant_field(&m, &g, &t0, &t1).unwrap();
        assert_eq!(s.evaluate(&x2, &x1), integral);
    }

    #[test]
    fn coefficients_from_point_values() {
        let s = constant_field(&rat(2, 3), &rat(-1, 4), &rat(0, 1), &rat(5, 2)).unwrap();
        let at = |x2: i64, x1: i64| s.evaluate(&Rat::from(x2), &Rat::from(x1));
        let f = at(0, 0);
        let a = (at(1, 0) + at(-1, 0)) / Rat::from(2) - &f;
        let d = (at(1, 0) - at(-1, 0)) / Rat::from(2);
        let c = (at(0, 1) + at(0, -1)) / Rat::from(2) - &f;
        let e = (at(0, 1) - at(0, -1)) / Rat::from(2);
        let b = at(1, 1) - &a - &c - &d - &e - &f;
        assert_eq!([&a, &b, &c, &d, &e, &f], s.coefficients());
    }

    #[test]
    fn free_composition_closes() {
        let m = rat(3, 1);
        let h = Rat::one();
        let s1 = free_particle(&m, &rat(1, 1), &rat(2, 1)).unwrap();
        let s2 = free_particle(&m, &rat(0, 1), &rat(1, 1)).unwrap();
        let comp = compose(&s1, &s2, Place::Prime(3), &h).unwrap();
        let direct = free_particle(&m, &rat(0, 1), &rat(2, 1)).unwrap();
        assert_eq!(comp.action, direct);
        assert_eq!(comp.alpha, -(rat(3, 2) + rat(3, 2)));
    }

    #[test]
    fn field_composition_closes() {
        let (m, g) = (rat(5, 3), rat(-7, 2));
        let h = rat(2, 1);
        let s1 = constant_field(&m, &g, &rat(1, 4), &rat(3, 1)).unwrap();
        let s2 = constant_field(&m, &g, &rat(-2, 3), &rat(1, 4)).unwrap();
        let comp = compose(&s1, &s2, Place::Infinity, &h).unwrap();
        let direct = constant_field(&m, &g, &rat(-2, 3), &rat(3, 1)).unwrap();
        assert_eq!(comp.action.coefficients(), direct.coefficients());
    }

    #[test]
    fn composition_errors() {
        let s1 = free_particle(&rat(1, 1), &rat(1, 1), &rat(2, 1)).unwrap();
        let s2 = free_particle(&rat(1, 1), &rat(0, 1), &rat(1, 2)).unwrap();
        assert!(matches!(
            compose(&s1, &s2, Place::Prime(3), &Rat::one()),
            Err(ActionError::TimeMismatch { .. })
        ));
        // opposite masses cancel the x^2 term
        let s3 = free_particle(&rat(-1, 1), &rat(0, 1), &rat(1, 1)).unwrap();
        assert!(matches!(
            compose(&s1, &s3, Place::Prime(3), &Rat::one()),
            Err(ActionError::DegenerateComposition)
        ));
    }

    #[test]
    fn oscillator_examples() {
        let p = 3;
        let s = harmonic_oscillator(&rat(1, 1), &rat(3, 1), &rat(0, 1), &rat(1, 1), p, 12).unwrap();
        let bound = s.precision.unwrap();
        assert!(bound.valuation >= 12);
        // a = (3/2) cos 3 / sin 3 as approximants
        let sn = sin_p(&rat(3, 1), p, 30).unwrap();
        let cs = cos_p(&rat(3, 1), p, 30).unwrap();
        let a_ref = &cs.value / &sn.value * rat(3, 2);
        assert!(valuation(&(&s.a - &a_ref), p) >= Valuation::Finite(12));
        assert_eq!(s.a, s.c);
        // v(b) = v(m) - v(T)
        assert_eq!(valuation(&s.b, p), Valuation::Finite(0));
        assert!(matches!(
            harmonic_oscillator(&rat(1, 1), &rat(1, 1), &rat(0, 1), &rat(1, 1), 3, 5),
            Err(ActionError::OutsideDisk { .. })
        ));
    }

    #[test]
    fn oscillator_degenerates_to_free_particle() {
        let p = 3;
        let m = rat(2, 1);
        let omega = Rat::int_pow(p, 6);
        let s = harmonic_oscillator(&m, &omega, &rat(0, 1), &rat(1, 1), p, 20).unwrap();
        let free = free_particle(&m, &rat(0, 1), &rat(1, 1)).unwrap();
        assert!(coefficient_gap(&s, &free, p) >= Valuation::Finite(4));
        let mut last = Valuation::Finite(i64::MIN);
        for k in 2..6 {
            let s = harmonic_oscillator(&m, &Rat::int_pow(p, k), &rat(0, 1), &rat(1, 1), p, 30)
                .unwrap();
            let gap = coefficient_gap(&s, &free, p);
            assert!(gap > last, "gap should grow with valuation(omega)");
            last = gap;
        }
    }

    #[test]
    fn oscillator_composition_closes_to_declared_valuation() {
        let p = 5;
        let (m, omega) = (rat(2, 3), rat(5, 2));
        let s1 = harmonic_oscillator(&m, &omega, &rat(1, 1), &rat(3, 1), p, 15).unwrap();
        let s2 = harmonic_oscillator(&m, &omega, &rat(-1, 2), &rat(1, 1), p, 15).unwrap();
        let comp = compose(&s1, &s2, Place::Prime(p), &Rat::one()).unwrap();
        let direct = harmonic_oscillator(&m, &omega, &rat(-1, 2), &rat(3, 1), p, 15).unwrap();
        let declared = comp.action.precision.unwrap().valuation.min(15);
        assert!(coefficient_gap(&comp.action, &direct, p) >= Valuation::Finite(declared));
    }
}
