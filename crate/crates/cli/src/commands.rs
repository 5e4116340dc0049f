use std::fmt;

use clap::{Args, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use padic_kernel::actions::System;
use padic_kernel::gauss::{gauss_closed, gauss_stabilized};
use padic_kernel::padic_core::{
    character, digits, frac_part, lambda_fn, legendre, norm, valuation,
};
use padic_kernel::propagator::{
    evolve, kernel_at, normalization, time_sliced, BallFunction, EvolveOptions, KernelSpec,
    VerificationReport,
};
use padic_kernel::suites::{run_suite, Suite, SuiteConfig};
use padic_kernel::{ActionError, CoreError, Place, Rat};

use crate::config::RunConfig;

pub enum CliError {
    Usage(String),
    Domain { name: String, message: String },
    Budget(String),
    CheckFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Domain { .. } => 3,
            CliError::Budget(_) => 4,
        }
    }
}

/// Innermost variant name of a nested error enum, read off its `Debug` form.
fn variant_name(debug: &str) -> String {
    let head = debug.split('{').next().unwrap_or(debug);
    head.rsplit('(')
        .map(|t| t.trim_matches(|c: char| c == ')' || c.is_whitespace()))
        .find(|t| {
            t.chars().next().is_some_and(|c| c.is_ascii_uppercase())
                && t.chars().all(|c| c.is_ascii_alphanumeric())
        })
        .unwrap_or("Error")
        .to_string()
}

fn domain<E: fmt::Debug + fmt::Display>(e: E) -> CliError {
    let name = variant_name(&format!("{e:?}"));
    match name.as_str() {
        "SumTooLarge" | "NoStabilization" => CliError::Budget(e.to_string()),
        _ => CliError::Domain {
            name,
            message: e.to_string(),
        },
    }
}

fn place_of(cfg: &RunConfig) -> Result<Place, CliError> {
    cfg.place
        .ok_or_else(|| CliError::Usage("--place is required".into()))
}

fn prime_of(cfg: &RunConfig) -> Result<u64, CliError> {
    match place_of(cfg)? {
        Place::Prime(p) => Ok(p),
        Place::Infinity => Err(domain(CoreError::BadPlace("inf".into()))),
    }
}

fn cjson(z: Complex64) -> Value {
    json!([z.re, z.im])
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SystemKind {
    Free,
    Field,
    Oscillator,
}

#[derive(Args, Debug)]
pub struct SystemArgs {
    #[arg(long, value_enum)]
    pub system: SystemKind,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub m: Rat,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub g: Rat,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<Rat>,
    /// Error valuation requested from the oscillator series.
    #[arg(long, default_value_t = 16)]
    pub target: i64,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub t0: Rat,
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    pub t1: Rat,
}

impl SystemArgs {
    fn system(&self, place: Place) -> Result<System, CliError> {
        Ok(match self.system {
            SystemKind::Free => System::Free { m: self.m.clone() },
            SystemKind::Field => System::Field {
                m: self.m.clone(),
                g: self.g.clone(),
            },
            SystemKind::Oscillator => {
                let omega = self.omega.clone().ok_or_else(|| {
                    CliError::Usage("--omega is required for the oscillator".into())
                })?;
                let p = place
                    .as_prime()
                    .ok_or_else(|| domain(ActionError::ArchimedeanOscillator))?;
                System::Oscillator {
                    m: self.m.clone(),
                    omega,
                    p,
                    target_valuation: self.target,
                }
            }
        })
    }

    fn spec(&self, cfg: &RunConfig) -> Result<(System, KernelSpec), CliError> {
        let place = place_of(cfg)?;
        let system = self.system(place)?;
        let action = system.action(&self.t0, &self.t1).map_err(domain)?;
        let spec = KernelSpec::new(action, place, cfg.h.clone()).map_err(domain)?;
        Ok((system, spec))
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// |x|_v
    Norm {
        #[arg(long, allow_hyphen_values = true)]
        x: Rat,
    },
    /// Fractional part {x}_p
    Frac {
        #[arg(long, allow_hyphen_values = true)]
        x: Rat,
    },
    /// Leading digits of the canonical p-adic expansion
    Digits {
        #[arg(long, allow_hyphen_values = true)]
        x: Rat,
        #[arg(long, default_value_t = 8)]
        count: usize,
    },
    /// lambda_v(x)
    Lambda {
        #[arg(long, allow_hyphen_values = true)]
        x: Rat,
    },
    /// Additive character chi_v(x)
    Char {
        #[arg(long, allow_hyphen_values = true)]
        x: Rat,
    },
    /// Legendre symbol (a/p)
    Legendre {
        #[arg(long, allow_hyphen_values = true)]
        a: Rat,
    },
    /// Gauss integral of chi_v(alpha x^2 + beta x)
    Gauss {
        #[arg(long, allow_hyphen_values = true)]
        alpha: Rat,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        beta: Rat,
        /// Also evaluate by brute-force summation over growing balls.
        #[arg(long)]
        oracle: bool,
    },
    /// Kernel K_v(x1, t1; x0, t0)
    Kernel {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        x0: Rat,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        x1: Rat,
    },
    /// Time-sliced kernel with n slices against the direct kernel
    Slice {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        x0: Rat,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        x1: Rat,
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Apply the evolution operator to the indicator of center + p^gamma Z_p
    Evolve {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        center: Rat,
        #[arg(long, default_value_t = 0)]
        gamma: i64,
        /// Comma-separated sample points.
        #[arg(
            long,
            value_delimiter = ',',
            required = true,
            allow_hyphen_values = true
        )]
        samples: Vec<Rat>,
        #[arg(long, default_value_t = 0)]
        extra_mesh: i64,
    },
    /// Run a verification suite; h cycles through 1, 1/2, 2, 3 unless set
    Verify {
        #[arg(long)]
        suite: Suite,
        /// Instances per place (suite default when omitted).
        #[arg(long)]
        count: Option<usize>,
    },
}

pub enum Output {
    Record(Value),
    Reports(Vec<VerificationReport>),
}

fn record(command: &str, inputs: Value, result: Value) -> Value {
    json!({ "command": command, "inputs": inputs, "result": result })
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<(Output, bool), CliError> {
    let ok = |v: Value| Ok((Output::Record(v), true));
    match cmd {
        Command::Norm { x } => {
            let place = place_of(cfg)?;
            let n = norm(x, place);
            let mut result = json!({ "norm": n, "float": n.to_f64() });
            if let Place::Prime(p) = place {
                result["valuation"] = json!(valuation(x, p));
            }
            ok(record("norm", json!({ "place": place, "x": x }), result))
        }
        Command::Frac { x } => {
            let p = prime_of(cfg)?;
            let f = frac_part(x, p);
            ok(record(
                "frac",
                json!({ "p": p, "x": x }),
                json!({ "frac": f, "float": f.to_f64() }),
            ))
        }
        Command::Digits { x, count } => {
            let p = prime_of(cfg)?;
            let d = digits(x, p, *count).map_err(domain)?;
            ok(record(
                "digits",
                json!({ "p": p, "x": x, "count": count }),
                json!(d),
            ))
        }
        Command::Lambda { x } => {
            let place = place_of(cfg)?;
            let l = lambda_fn(x, place);
            ok(record(
                "lambda",
                json!({ "place": place, "x": x }),
                circle(&l),
            ))
        }
        Command::Char { x } => {
            let place = place_of(cfg)?;
            let c = character(x, place);
            ok(record(
                "char",
                json!({ "place": place, "x": x }),
                circle(&c),
            ))
        }
        Command::Legendre { a } => {
            let p = prime_of(cfg)?;
            if !a.is_integer() {
                return Err(domain(CoreError::InvalidArgument(
                    "Legendre symbol needs an integer".into(),
                )));
            }
            let s = legendre(a.numer(), p).map_err(domain)?;
            ok(record(
                "legendre",
                json!({ "p": p, "a": a }),
                json!({ "symbol": s }),
            ))
        }
        Command::Gauss {
            alpha,
            beta,
            oracle,
        } => gauss(cfg, alpha, beta, *oracle),
        Command::Kernel { sys, x0, x1 } => {
            let (system, spec) = sys.spec(cfg)?;
            let n = normalization(&spec).map_err(domain)?;
            let k = kernel_at(&spec, x1, x0).map_err(domain)?;
            let inputs = json!({ "system": system, "place": spec.place, "h": spec.h, "t0": sys.t0, "t1": sys.t1, "x0": x0, "x1": x1 });
            let mut result = circle(&k);
            result["normalization"] = circle(&n);
            result["action"] = json!(spec.action);
            ok(record("kernel", inputs, result))
        }
        Command::Slice { sys, x0, x1, n } => {
            let (system, spec) = sys.spec(cfg)?;
            let direct = kernel_at(&spec, x1, x0).map_err(domain)?;
            let sliced = time_sliced(&system, *n, &sys.t0, &sys.t1, spec.place, &spec.h, x1, x0)
                .map_err(domain)?;
            let equal = sliced.value == direct;
            let report = VerificationReport::new(
                "slice",
                json!({ "system": system, "n": n, "place": spec.place, "h": spec.h, "t0": sys.t0, "t1": sys.t1, "x0": x0, "x1": x1 }),
                json!(direct),
                json!(sliced.value),
                None,
                equal,
            );
            Ok((Output::Reports(vec![report]), equal))
        }
        Command::Evolve {
            sys,
            center,
            gamma,
            samples,
            extra_mesh,
        } => {
            let (system, spec) = sys.spec(cfg)?;
            let psi = BallFunction::indicator(center.clone(), *gamma);
            let opts = EvolveOptions {
                budget: cfg.term_budget,
                extra_mesh: *extra_mesh,
            };
            let values = evolve(&spec, &psi, samples, opts).map_err(domain)?;
            let rows: Vec<Value> = samples
                .iter()
                .zip(&values)
                .map(|(x, u)| json!({ "x": x, "value": cjson(*u), "abs": u.norm() }))
                .collect();
            ok(record(
                "evolve",
                json!({ "system": system, "place": spec.place, "h": spec.h, "t0": sys.t0, "t1": sys.t1, "center": center, "gamma": gamma }),
                json!({ "samples": rows }),
            ))
        }
        Command::Verify { suite, count } => {
            let suite_cfg = SuiteConfig {
                seed: cfg.seed,
                count: *count,
                places: cfg.place.map(|p| vec![p]),
                h: cfg.h_given.then(|| cfg.h.clone()),
                tol: cfg.tolerance,
                budget: cfg.term_budget,
            };
            let out = run_suite(*suite, &suite_cfg);
            let passed = out.all_passed();
            if out.budget_exhausted {
                emit_reports(&out.reports, cfg);
                return Err(CliError::Budget(format!(
                    "suite {suite} exhausted the term budget {}",
                    cfg.term_budget
                )));
            }
            Ok((Output::Reports(out.reports), passed))
        }
    }
}

fn circle(c: &padic_kernel::ExactCircle) -> Value {
    json!({ "mag2": c.mag2(), "phase": c.phase(), "float": cjson(c.to_complex()) })
}

fn gauss(
    cfg: &RunConfig,
    alpha: &Rat,
    beta: &Rat,
    oracle: bool,
) -> Result<(Output, bool), CliError> {
    let place = place_of(cfg)?;
    let closed = gauss_closed(alpha, beta, place).map_err(domain)?;
    let inputs = json!({ "place": place, "alpha": alpha, "beta": beta });
    if !oracle {
        return Ok((
            Output::Record(record("gauss", inputs, circle(&closed))),
            true,
        ));
    }
    let p = place
        .as_prime()
        .ok_or_else(|| domain(padic_kernel::GaussError::ArchimedeanPlace))?;
    let brute = gauss_stabilized(alpha, beta, p, cfg.tolerance, cfg.term_budget).map_err(domain)?;
    let diff = (brute.value - closed.to_complex()).norm();
    let report = VerificationReport::new(
        "gauss",
        json!({ "place": place, "alpha": alpha, "beta": beta, "gamma": brute.gamma, "delta": brute.delta, "terms": brute.terms }),
        circle(&closed),
        json!({ "brute": cjson(brute.value), "abs_diff": diff }),
        Some(cfg.tolerance),
        diff < cfg.tolerance,
    );
    let passed = report.passed();
    Ok((Output::Reports(vec![report]), passed))
}

pub fn emit(out: &Output, cfg: &RunConfig) {
    match out {
        Output::Record(v) => match cfg.output {
            crate::config::OutputMode::Json => println!("{v}"),
            crate::config::OutputMode::Table => {
                println!("{}", v["command"].as_str().unwrap_or(""));
                for section in ["inputs", "result"] {
                    if let Some(map) = v[section].as_object() {
                        for (k, val) in map {
                            println!("  {k:<16} {val}");
                        }
                    }
                }
            }
        },
        Output::Reports(rs) => emit_reports(rs, cfg),
    }
}

fn emit_reports(rs: &[VerificationReport], cfg: &RunConfig) {
    match cfg.output {
        crate::config::OutputMode::Json => {
            for r in rs {
                println!("{}", serde_json::to_string(r).expect("report serializes"));
            }
        }
        crate::config::OutputMode::Table => {
            for r in rs {
                let status = if r.passed() { "pass" } else { "FAIL" };
                println!("{status:<5} {:<12} {}", r.check, r.inputs);
            }
            let failed = rs.iter().filter(|r| !r.passed()).count();
            println!("{} checks, {} failed", rs.len(), failed);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::variant_name;

    #[test]
    fn variant_names() {
        assert_eq!(variant_name("ZeroAlpha"), "ZeroAlpha");
        assert_eq!(variant_name("Gauss(ZeroAlpha)"), "ZeroAlpha");
        assert_eq!(
            variant_name("Action(OutsideDisk { arg: \"3\" })"),
            "OutsideDisk"
        );
        assert_eq!(variant_name("PrimeMismatch(3, 5)"), "PrimeMismatch");
        assert_eq!(variant_name("NotPrime(4)"), "NotPrime");
    }
}
