//! Seeded verification suites. Each suite draws its parameter sets from a
//! ChaCha stream, evaluates them (in parallel where useful) and returns one
//! report per check in draw order, so a seed fully determines the output.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serializer;
use serde_json::{json, Value};

use crate::actions::{disk_valuation, System};
use crate::error::{GaussError, PropagatorError};
use crate::gauss::{
    gauss_brute, gauss_closed, gauss_stabilized, min_mesh, start_radius, BallSpec,
    DEFAULT_TERM_BUDGET,
};
use crate::padic_core::{lambda_fn, norm, valuation, ExactCircle, Place, Rat};
use crate::propagator::{
    evolve, kernel_at, normalization, off_diagonal_unitarity, relations_uv, time_sliced,
    unitarity_threshold, verify_group, BallFunction, EvolveOptions, KernelSpec, VerificationReport,
};

pub(crate) fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    use serde::Serialize;
    [z.re, z.im].serialize(s)
}

fn complex_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

/// Planck constants cycled through when none is fixed.
pub fn default_h_values() -> Vec<Rat> {
    vec![Rat::one(), Rat::new(1, 2), Rat::from(2), Rat::from(3)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Lambda,
    Gauss,
    Group,
    Norms,
    Uv,
    Unitarity,
    Slice,
    Delta,
    Archimedean,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Lambda,
        Suite::Gauss,
        Suite::Group,
        Suite::Norms,
        Suite::Uv,
        Suite::Unitarity,
        Suite::Slice,
        Suite::Delta,
        Suite::Archimedean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lambda => "lambda",
            Suite::Gauss => "gauss",
            Suite::Group => "group",
            Suite::Norms => "norms",
            Suite::Uv => "uv",
            Suite::Unitarity => "unitarity",
            Suite::Slice => "slice",
            Suite::Delta => "delta",
            Suite::Archimedean => "archimedean",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Suite, String> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Overrides the per-suite default instance count.
    pub count: Option<usize>,
    /// Overrides the per-suite default places.
    pub places: Option<Vec<Place>>,
    /// Fixed Planck constant; `None` cycles through [`default_h_values`].
    pub h: Option<Rat>,
    pub tol: f64,
    pub budget: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            count: None,
            places: None,
            h: None,
            tol: 1e-9,
            budget: DEFAULT_TERM_BUDGET,
        }
    }
}

impl SuiteConfig {
    fn places_or(&self, default: &[Place]) -> Vec<Place> {
        self.places.clone().unwrap_or_else(|| default.to_vec())
    }

    fn h_for(&self, i: usize) -> Rat {
        match &self.h {
            Some(h) => h.clone(),
            None => {
                let hs = default_h_values();
                hs[i % hs.len()].clone()
            }
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOutcome {
    pub reports: Vec<VerificationReport>,
    /// Some check ran out of term budget.
    pub budget_exhausted: bool,
}

impl SuiteOutcome {
    pub fn all_passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationReport> {
        self.reports.iter().filter(|r| !r.passed())
    }

    fn collect(
        results: Vec<Result<VerificationReport, (String, Value, PropagatorError)>>,
    ) -> SuiteOutcome {
        let mut out = SuiteOutcome::default();
        for r in results {
            match r {
                Ok(rep) => out.reports.push(rep),
                Err((check, inputs, err)) => {
                    if is_budget_error(&err) {
                        out.budget_exhausted = true;
                    }
                    out.reports.push(VerificationReport::new(
                        check,
                        inputs,
                        json!("no error"),
                        json!({ "error": err.to_string() }),
                        None,
                        false,
                    ));
                }
            }
        }
        out
    }
}

fn is_budget_error(e: &PropagatorError) -> bool {
    matches!(
        e,
        PropagatorError::Gauss(GaussError::SumTooLarge { .. })
            | PropagatorError::Gauss(GaussError::NoStabilization { .. })
    )
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> SuiteOutcome {
    match suite {
        Suite::Lambda => lambda_suite(cfg),
        Suite::Gauss => gauss_suite(cfg),
        Suite::Group => group_suite(cfg),
        Suite::Norms => norms_suite(cfg),
        Suite::Uv => uv_suite(cfg),
        Suite::Unitarity => unitarity_suite(cfg),
        Suite::Slice => slice_suite(cfg),
        Suite::Delta => delta_suite(cfg),
        Suite::Archimedean => archimedean_suite(cfg),
    }
}

// ---------------------------------------------------------------------------
// random parameters

/// Random unit numerator or denominator, prime to `p` when given.
fn unit_part(rng: &mut ChaCha8Rng, p: Option<u64>, max: i64) -> i64 {
    loop {
        let n = rng.gen_range(1..=max);
        if p.is_none_or(|p| n % p as i64 != 0) {
            return n;
        }
    }
}

/// Nonzero rational `+-p^k u/w` with `k` drawn from `vals` (at infinity,
/// a plain random fraction).
pub fn random_rat(rng: &mut ChaCha8Rng, place: Place, vals: std::ops::RangeInclusive<i64>) -> Rat {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    match place {
        Place::Infinity => {
            let n = unit_part(rng, None, 60);
            let d = unit_part(rng, None, 24);
            Rat::new(sign * n, d)
        }
        Place::Prime(p) => {
            let u = unit_part(rng, Some(p), 200);
            let w = unit_part(rng, Some(p), 60);
            let k = rng.gen_range(vals);
            Rat::new(sign * u, w) * Rat::int_pow(p, k)
        }
    }
}

fn random_point(rng: &mut ChaCha8Rng, place: Place) -> Rat {
    if rng.gen_ratio(1, 6) {
        Rat::zero()
    } else {
        random_rat(rng, place, -2..=2)
    }
}

/// Three times `t' , t, t''` with both sub-intervals and their sum nonzero.
fn random_times(rng: &mut ChaCha8Rng, place: Place) -> (Rat, Rat, Rat) {
    loop {
        let t0 = if rng.gen_bool(0.5) {
            Rat::zero()
        } else {
            random_rat(rng, place, -2..=2)
        };
        let mut d1 = random_rat(rng, place, -2..=2);
        let mut d2 = random_rat(rng, place, -2..=2);
        if place.is_archimedean() {
            d1 = d1.abs();
            d2 = d2.abs();
        }
        if !(&d1 + &d2).is_zero() {
            let t1 = &t0 + &d1;
            let t2 = &t1 + &d2;
            return (t0, t1, t2);
        }
    }
}

fn polynomial_system(rng: &mut ChaCha8Rng, place: Place, field: bool) -> System {
    let m = random_rat(rng, place, -2..=2);
    if field {
        System::Field {
            m,
            g: random_rat(rng, place, -2..=2),
        }
    } else {
        System::Free { m }
    }
}

/// Oscillator target valuation: enough for characters at points of
/// valuation >= -2, for `h` up to `p^1`, and for `lambda_2`'s three digits.
const OSC_TARGET: i64 = 16;

/// Oscillator whose frequency keeps `omega T` inside the convergence disk for
/// every interval in `durations`. Composition divides twice by a coefficient
/// whose valuation grows with the spread of the interval valuations, so the
/// series target grows with it.
fn oscillator_system(rng: &mut ChaCha8Rng, p: u64, durations: &[Rat]) -> System {
    let m = random_rat(rng, Place::Prime(p), -1..=1);
    let vals: Vec<i64> = durations
        .iter()
        .filter_map(|d| valuation(d, p).finite())
        .collect();
    let lowest = vals.iter().copied().min().unwrap_or(0);
    let spread = vals.iter().copied().max().unwrap_or(0) - lowest;
    let k = disk_valuation(p) - lowest + rng.gen_range(0..=1);
    let omega = random_rat(rng, Place::Prime(p), k..=k);
    System::Oscillator {
        m,
        omega,
        p,
        target_valuation: OSC_TARGET + 2 * spread,
    }
}

type CaseResult = Result<VerificationReport, (String, Value, PropagatorError)>;

fn tag_err<T>(
    check: &str,
    inputs: &Value,
    r: Result<T, PropagatorError>,
) -> Result<T, (String, Value, PropagatorError)> {
    r.map_err(|e| (check.to_string(), inputs.clone(), e))
}

// ---------------------------------------------------------------------------
// lambda identities

fn lambda_case(place: Place, x: &Rat, y: &Rat, a: &Rat) -> VerificationReport {
    let lam = |z: &Rat| lambda_fn(z, place);
    let lx = lam(x);
    let square_ok = lam(&(a * a * x)) == lx;
    let conj_ok = lx.conj().mul(&lx) == ExactCircle::one();
    let sum = x + y;
    let (lhs, rhs, additive_ok) = if sum.is_zero() {
        (lx.mul(&lam(y)), lx.mul(&lam(y)), true)
    } else {
        let lhs = lx.mul(&lam(y));
        let rhs = lam(&sum).mul(&lam(&(x.recip() + y.recip())));
        let ok = lhs == rhs;
        (lhs, rhs, ok)
    };
    let unit_ok = lx.is_unit();
    VerificationReport::new(
        "lambda",
        json!({ "place": place, "x": x, "y": y, "a": a }),
        json!({ "lambda(a^2 x)": lx, "lambda(x)lambda(y)": rhs, "conj(lambda(x))lambda(x)": ExactCircle::one() }),
        json!({ "lambda(a^2 x)": lam(&(a * a * x)), "lambda(x)lambda(y)": lhs, "conj(lambda(x))lambda(x)": lx.conj().mul(&lx) }),
        None,
        square_ok && conj_ok && additive_ok && unit_ok,
    )
}

fn lambda_suite(cfg: &SuiteConfig) -> SuiteOutcome {
    let places = cfg.places_or(&[
        Place::Prime(2),
        Place::Prime(3),
        Place::Prime(5),
        Place::Prime(7),
        Place::Prime(13),
        Place::Infinity,
    ]);
    let count = cfg.count.unwrap_or(1000);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut cases = Vec::new();
    for &place in &places {
        for _ in 0..count {
            let x = random_rat(&mut rng, place, -4..=4);
            let y = random_rat(&mut rng, place, -4..=4);
            let a = random_rat(&mut rng, place, -3..=3);
            cases.push((place, x, y, a));
        }
    }
    let reports = cases
        .par_iter()
        .map(|(pl, x, y, a)| lambda_case(*pl, x, y, a))
        .collect();
    SuiteOutcome {
        reports,
        budget_exhausted: false,
    }
}

// ---------------------------------------------------------------------------
// Gauss integral: closed form against stabilized brute force

/// Terms needed to evaluate three successive ball radii from the start.
pub fn stabilization_cost(alpha: &Rat, beta: &Rat, p: u64) -> Option<u64> {
    let g0 = start_radius(alpha, beta, p);
    let mut total: u64 = 0;
    for gamma in g0..g0 + 3 {
        let spec = BallSpec::new(p, gamma, min_mesh(alpha, beta, p, gamma)).ok()?;
        total = total.checked_add(spec.terms()?)?;
    }
    Some(total)
}

/// Draws `(p, alpha, beta)` over valuations `[-3, 3]` (and `beta = 0`),
/// keeping only combinations whose brute-force cost fits the budget.
pub fn gauss_grid(seed: u64, primes: &[u64], draws: usize, budget: u64) -> Vec<(u64, Rat, Rat)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = Vec::new();
    for &p in primes {
        for va in -3..=3 {
            for vb in (-3..=3).map(Some).chain([None]) {
                for _ in 0..draws {
                    let alpha = random_rat(&mut rng, Place::Prime(p), va..=va);
                    let beta = match vb {
                        Some(vb) => random_rat(&mut rng, Place::Prime(p), vb..=vb),
                        None => Rat::zero(),
                    };
                    if stabilization_cost(&alpha, &beta, p).is_some_and(|c| c <= budget) {
                        grid.push((p, alpha, beta));
                    }
                }
            }
        }
    }
    grid
}

fn gauss_case(p: u64, alpha: &Rat, beta: &Rat, tol: f64, budget: u64) -> CaseResult {
    let inputs = json!({ "p": p, "alpha": alpha, "beta": beta });
    let closed = tag_err(
        "gauss",
        &inputs,
        gauss_closed(alpha, beta, Place::Prime(p)).map_err(Into::into),
    )?;
    let brute = tag_err(
        "gauss",
        &inputs,
        gauss_stabilized(alpha, beta, p, tol, budget).map_err(Into::into),
    )?;
    let diff = (brute.value - closed.to_complex()).norm();
    Ok(VerificationReport::new(
        "gauss",
        json!({ "p": p, "alpha": alpha, "beta": beta, "gamma": brute.gamma, "delta": brute.delta }),
        json!({ "closed": closed, "float": complex_json(closed.to_complex()) }),
        json!({ "brute": complex_json(brute.value), "abs_diff": diff }),
        Some(tol),
        diff < tol,
    ))
}

fn gauss_suite(cfg: &SuiteConfig) -> SuiteOutcome {
    let primes: Vec<u64> = cfg
        .places_or(&[
            Place::Prime(2),
            Place::Prime(3),
            Place::Prime(5),
            Place::Prime(7),
        ])
        .iter()
        .filter_map(|p| p.as_prime())
        .collect();
    let draws = cfg.count.unwrap_or(1);
    let grid = gauss_grid(cfg.seed, &primes, draws, cfg.budget);
    let results = grid
        .iter()
        .map(|(p, a, b)| gauss_case(*p, a, b, cfg.tol, cfg.budget))
        .collect();
    SuiteOutcome::collect(results)
}

// ---------------------------------------------------------------------------
// group property

fn group_points(rng: &mut ChaCha8Rng, place: Place) -> Vec<(Rat, Rat)> {
    (0..3)
        .map(|_| (random_point(rng, place), random_point(rng, place)))
        .collect()
}

fn group_case(
    system: &System,
    times: &(Rat, Rat, Rat),
    place: Place,
    h: &Rat,
    points: &[(Rat, Rat)],
) -> CaseResult {
    let (t0, t1, t2) = times;
    let inputs = json!({ "system": system, "place": place, "h": h, "times": [t0, t1, t2] });
    let build = |a: &Rat, b: &Rat| -> Result<KernelSpec, PropagatorError> {
        KernelSpec::new(system.action(a, b)?, place, h.clone())
    };
    let later = tag_err("group", &inputs, build(t1, t2))?;
    let earlier = tag_err("group", &inputs, build(t0, t1))?;
    let direct = tag_err("group", &inputs, build(t0, t2))?;
    tag_err(
        "group",
        &inputs,
        verify_group(&later, &earlier, &direct, points),
    )
}

/// System, times `(t', t, t'')`, place, `h` and kernel sample points.
pub type GroupCase = (System, (Rat, Rat, Rat), Place, Rat, Vec<(Rat, Rat)>);

/// Group-property parameter sets: `count` per system per place, plus
/// oscillator instances at primes.
pub fn group_cases(cfg: &SuiteConfig, places: &[Place], count: usize) -> Vec<GroupCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x0067_726f_7570);
    let mut cases = Vec::new();
    for &place in places {
        for i in 0..count {
            let h = cfg.h_for(i);
            for field in [false, true] {
                let system = polynomial_system(&mut rng, place, field);
                let times = random_times(&mut rng, place);
                let points = group_points(&mut rng, place);
                cases.push((system, times, place, h.clone(), points));
            }
            if let Place::Prime(p) = place {
                let times = random_times(&mut rng, place);
                let durations = [
                    &times.1 - &times.0,
                    &times.2 - &times.1,
                    &times.2 - &times.0,
                ];
                let system = oscillator_system(&mut rng, p, &durations);
                let points = group_points(&mut rng, place);
                cases.push((system, times, place, h.clone(), points));
            }
        }
    }
    cases
}

fn group_suite(cfg: &SuiteConfig) -> SuiteOutcome {
    let places = cfg.places_or(&[
        Place::Prime(2),
        Place::Prime(3),
        Place::Prime(5),
        Place::Prime(7),
        Place::Infinity,
    ]);
    let cases = group_cases(cfg, &places, cfg.count.unwrap_or(100));
    let results = cases
        .par_iter()
        .map(|(s, t, pl, h, pts)| group_case(s, t, *pl, h, pts))
        .collect();
    SuiteOutcome::collect(results)
}

// ---------------------------------------------------------------------------
// normalization modulus and u, v relations

fn norms_suite(cfg: &SuiteConfig) -> SuiteOutcome {
    let places = cfg.places_or(&[
        Place::Prime(2),
        Place::Prime(3),
        Place::Prime(5),
        Place::Prime(7),
        Place::Infinity,
    ]);
    let count = cfg.count.unwrap_or(50);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6e6f_726d);
    let mut results = Vec::new();
    for &place in &places {
        for i in 0..count {
            let h = cfg.h_for(i);
            let (t0, t1, _) = random_times(&mut rng, place);
            let system = match (i % 3, place) {
                (2, Place::Prime(p)) => oscillator_system(&mut rng, p, &[&t1 - &t0]),
                (k, _) => polynomial_system(&mut rng, place, k == 1),
            };
            let inputs = json!({ "system": system, "place": place, "h": h, "times": [t0, t1] });
            let r = (|| {
                let spec = KernelSpec::new(system.action(&t0, &t1)?, place, h.clone())?;
                let n = normalization(&spec)?;
                let want = norm(&(&spec.action.b / &h), place);
                Ok(VerificationReport::new(
                    "norms",
                    inputs.clone(),
                    json!({ "mag2": want }),
                    json!({ "mag2": n.mag2(), "normalization": n }),
                    None,
                    n.mag2() == &want,
                ))
            })();
            results.push(tag_err("norms", &inputs, r));
        }
    }
    SuiteOutcome::collect(results)
}

fn uv_suite(cfg: &SuiteConfig) -> SuiteOutcome {
    let places = cfg.places_or(&[
        Place::Prime(2),
        Place::Prime(3),
        Place::Prime(5),
        Place::Prime(7),
        Place::Infinity,
    ]);
    let count = cfg.count.unwrap_or(50);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7576);
    let mut results = Vec::new();
    for &place in &places {
        for i in 0..count {
            let (t0, t1, t2) = random_times(&mut rng, place);
            let mut systems = vec![
                polynomial_system(&mut rng, place, false),
                polynomial_system(&mut rng, place, true),
            ];
            if let Place::Prime(p) = place {
                systems.push(oscillator_system(
                    &mut rng,
                    p,
                    &[&t1 - &t0, &t2 - &t1, &t2 - &t0],
                ));
            }
            for system in systems {
                let inputs = json!({ "system": system, "place": place, "times": [t0, t1, t2], "instance": i });
                let r = (|| {
                    let later = system.action(&t1, &t2)?;
                    let earlier = system.action(&t0, &t1)?;
                    let rel = relations_uv(&later, &earlier, place)?;
                    let mut report = rel.report;
                    let exact_required = !matches!(system, System::Oscillator { .. });
                    if exact_required {
                        let ok = rel.u.value == Rat::one() && rel.v.value == Rat::one();
                        report.status = if ok {
                            crate::propagator::Status::Pass
                        } else {
                            crate::propagator::Status::Fail
                        };
                    }
                    report.inputs = inputs.clone();
                    Ok(report)
                })();
                results.push(tag_err("uv", &inputs, r));
            }
        }
    }
    SuiteOutcome::collect(results)
}

// ---------------------------------------------------------------------------
// weak unitarity and delta limit

fn unitarity_suite(cfg: &SuiteConfig) -> SuiteOutcome {
    let places = cfg.places_or(&[Place::Prime(3), Place::Prime(5)]);
    let count = cfg.count.unwrap_or(50);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x756e_6974);
    let mut cases = Vec::new();
    for &place in places.iter().filter(|p| !p.is_archimedean()) {
        for i in 0..count {
            let h = cfg.h_for(i);
            let system = polynomial_system(&mut rng, place, i % 2 == 1);
            let (t0, t1, _) = random_times(&mut rng, place);
            let x2 = random_point(&mut rng, place);
            let mut z = random_point(&mut rng, place);
            while z == x2 {
                z = random_rat(&mut rng, place, -2..=2);
            }
            cases.push((system, t0, t1, place, h, x2, z));
        }
    }
    let results = cases
        .par_iter()
        .map(|(system, t0, t1, place, h, x2, z)| {
            let inputs = json!({ "system": system, "place": place, "h": h, "times": [t0, t1], "x2": x2, "z": z });
            let r = (|| {
                let spec = KernelSpec::new(system.action(t0, t1)?, *place, h.clone())?;
                let g0 = unitarity_threshold(&spec, x2, z)?;
                let val = off_diagonal_unitarity(&spec, x2, z, g0 + 1, cfg.budget)?;
                Ok(VerificationReport::new(
                    "unitarity",
                    json!({ "system": system, "place": place, "h": h, "times": [t0, t1], "x2": x2, "z": z, "gamma": g0 + 1 }),
                    json!(complex_json(Complex64::new(0.0, 0.0))),
                    json!(complex_json(val)),
                    Some(cfg.tol),
                    val.norm() < cfg.tol,
                ))
            })();
            tag_err("unitarity", &inputs, r)
        })
        .collect();
    SuiteOutcome::collect(results)
}

/// Sample points for the delta check: integers and units in `Z_p`, and
/// units divided by `p, p^2, p^3` outside it.
pub fn delta_samples(p: u64) -> (Vec<Rat>, Vec<Rat>) {
    let q = p as i64;
    let inside = vec![
        Rat::zero(),
        Rat::one(),
        Rat::from(-1),
        Rat::from(q),
        Rat::from(-q * q),
        Rat::new(1, q + 1),
    ];
    let outside = vec![
        Rat::new(1, q),
        Rat::new(-1, q),
        Rat::new(q + 1, q * q),
        Rat::new(q * q + 1, q * q * q),
    ];
    (inside, outside)
}

fn delta_suite(cfg: &SuiteConfig) -> SuiteOutcome {
    let places = cfg.places_or(&[Place::Prime(3)]);
    let mut results = Vec::new();
    for &place in places.iter().filter(|p| !p.is_archimedean()) {
        let p = place.as_prime().expect("prime");
        let (inside, outside) = delta_samples(p);
        for k in 1..=3 {
            let h = Rat::one();
            let inputs = json!({ "place": place, "m": "1", "h": h, "T": format!("{p}^{k}") });
            let r = (|| {
                let action =
                    System::Free { m: Rat::one() }.action(&Rat::zero(), &Rat::int_pow(p, k))?;
                let spec = KernelSpec::new(action, place, h.clone())?;
                let psi = BallFunction::indicator(Rat::zero(), 0);
                let opts = EvolveOptions {
                    budget: cfg.budget,
                    extra_mesh: 0,
                };
                let ins = evolve(&spec, &psi, &inside, opts)?;
                let outs = evolve(&spec, &psi, &outside, opts)?;
                let ok = ins.iter().all(|u| (u.norm() - 1.0).abs() < cfg.tol)
                    && outs.iter().all(|u| u.norm() < cfg.tol);
                Ok(VerificationReport::new(
                    "delta",
                    json!({ "place": place, "T": format!("{p}^{k}"), "inside": inside, "outside": outside }),
                    json!({ "inside_abs": 1.0, "outside_abs": 0.0 }),
                    json!({
                        "inside": ins.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
                        "outside": outs.iter().map(|z| complex_json(*z)).collect::<Vec<_>>(),
                    }),
                    Some(cfg.tol),
                    ok,
                ))
            })();
            results.push(tag_err("delta", &inputs, r));
        }
    }
    SuiteOutcome::collect(results)
}

// ---------------------------------------------------------------------------
// slicing invariance

pub const SLICE_COUNTS: [usize; 6] = [1, 2, 3, 4, 8, 16];

fn slice_suite(cfg: &SuiteConfig) -> SuiteOutcome {
    let places = cfg.places_or(&[
        Place::Prime(2),
        Place::Prime(3),
        Place::Prime(5),
        Place::Prime(7),
        Place::Infinity,
    ]);
    let count = cfg.count.unwrap_or(5);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x736c_6963);
    let mut cases = Vec::new();
    for &place in &places {
        for i in 0..count {
            let h = cfg.h_for(i);
            let system = polynomial_system(&mut rng, place, i % 2 == 1);
            let (t0, _, t2) = random_times(&mut rng, place);
            let x2 = random_point(&mut rng, place);
            let x1 = random_point(&mut rng, place);
            for n in SLICE_COUNTS {
                cases.push((
                    system.clone(),
                    n,
                    t0.clone(),
                    t2.clone(),
                    place,
                    h.clone(),
                    x2.clone(),
                    x1.clone(),
                ));
            }
        }
    }
    let results = cases
        .par_iter()
        .map(|(system, n, t0, t2, place, h, x2, x1)| {
            let inputs = json!({ "system": system, "n": n, "place": place, "h": h, "times": [t0, t2], "x2": x2, "x1": x1 });
            let r = (|| {
                let direct = KernelSpec::new(system.action(t0, t2)?, *place, h.clone())?;
                let want = kernel_at(&direct, x2, x1)?;
                let got = time_sliced(system, *n, t0, t2, *place, h, x2, x1)?;
                Ok(VerificationReport::new(
                    "slice",
                    inputs.clone(),
                    json!(want),
                    json!(got.value),
                    None,
                    got.value == want,
                ))
            })();
            tag_err("slice", &inputs, r)
        })
        .collect();
    SuiteOutcome::collect(results)
}

// ---------------------------------------------------------------------------
// archimedean correspondence

/// `(i b / h)^{1/2} exp(2 pi i S / h)` with the principal square root.
pub fn textbook_real_kernel(b: f64, s: f64, h: f64) -> Complex64 {
    let pre = (Complex64::new(0.0, b / h)).sqrt();
    pre * Complex64::from_polar(1.0, std::f64::consts::TAU * s / h)
}

fn archimedean_suite(cfg: &SuiteConfig) -> SuiteOutcome {
    let count = cfg.count.unwrap_or(50);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7265_616c);
    let place = Place::Infinity;
    let tol = 1e-12;
    let mut results = Vec::new();
    for i in 0..count {
        let h = cfg.h.clone().unwrap_or_else(|| {
            let hs = default_h_values();
            hs.choose(&mut rng).cloned().expect("nonempty")
        });
        let system = polynomial_system(&mut rng, place, i % 2 == 1);
        let (t0, t1, _) = random_times(&mut rng, place);
        let x2 = random_point(&mut rng, place);
        let x1 = random_point(&mut rng, place);
        let inputs = json!({ "system": system, "h": h, "times": [t0, t1], "x2": x2, "x1": x1 });
        let r = (|| {
            let spec = KernelSpec::new(system.action(&t0, &t1)?, place, h.clone())?;
            let k = kernel_at(&spec, &x2, &x1)?.to_complex();
            // S/h reduced mod 1 before conversion
            let s_over_h = (spec.action.evaluate(&x2, &x1) / &h).fract_mod_one();
            let want = textbook_real_kernel((&spec.action.b / &h).to_f64(), s_over_h.to_f64(), 1.0);
            let diff = (k - want).norm();
            Ok(VerificationReport::new(
                "archimedean",
                inputs.clone(),
                json!(complex_json(want)),
                json!({ "kernel": complex_json(k), "abs_diff": diff }),
                Some(tol),
                diff < tol,
            ))
        })();
        results.push(tag_err("archimedean", &inputs, r));
    }
    SuiteOutcome::collect(results)
}

/// Brute-force ball sum at the minimal mesh and one level finer; used by the
/// mesh-exactness property.
pub fn mesh_refinement_gap(
    alpha: &Rat,
    beta: &Rat,
    p: u64,
    gamma: i64,
    budget: u64,
) -> Result<f64, GaussError> {
    let delta = min_mesh(alpha, beta, p, gamma);
    let a = gauss_brute(alpha, beta, BallSpec::new(p, gamma, delta)?, budget)?;
    let b = gauss_brute(alpha, beta, BallSpec::new(p, gamma, delta + 1)?, budget)?;
    Ok((a - b).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64, count: usize) -> SuiteConfig {
        SuiteConfig {
            seed,
            count: Some(count),
            ..Default::default()
        }
    }

    #[test]
    fn suites_pass_small() {
        for suite in Suite::ALL {
            let out = run_suite(suite, &small(11, 3));
            let bad: Vec<_> = out
                .failures()
                .map(|r| serde_json::to_string(r).unwrap())
                .collect();
            assert!(bad.is_empty(), "{suite}: {bad:#?}");
            assert!(!out.reports.is_empty(), "{suite} produced no reports");
        }
    }

    #[test]
    fn suites_are_deterministic() {
        for suite in [Suite::Lambda, Suite::Group, Suite::Unitarity] {
            let a = run_suite(suite, &small(5, 4));
            let b = run_suite(suite, &small(5, 4));
            let ja = serde_json::to_string(&a.reports).unwrap();
            let jb = serde_json::to_string(&b.reports).unwrap();
            assert_eq!(ja, jb);
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }
}
