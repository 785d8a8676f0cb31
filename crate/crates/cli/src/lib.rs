//! Command-line front end: every verb reads JSON (inline or `@file`) and
//! writes one JSON document to stdout.
//!
//! Exit codes: 0 success, 1 internal failure or failed `verify`,
//! 2 validation error, 3 resource-limit refusal.

use std::fs;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use smooth_dual::bernstein::{self, DEFAULT_STRATA_LIMIT};
use smooth_dual::cohomology::{hp_dims, stratum_poincare};
use smooth_dual::qproj::{self, DEFAULT_FIBER_LIMIT};
use smooth_dual::scalars::parse_ratio;
use smooth_dual::symfun::{complex_list, from_sym_coords, to_sym_coords, ComplexRecord, SymCoords};
use smooth_dual::{
    regression, retract, Block, Component, Error, LParameter, StratumPoint, SymPoint,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "smooth-dual",
    version,
    about = "Invariants of the smooth dual of p-adic GL(n)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct ComponentArg {
    /// Component as JSON, `@file`, or a list of exponents such as `(2,1)`.
    #[arg(long)]
    component: String,
    /// Refuse components with sum of exponents above this bound.
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Target {
    /// L-parameter JSON or `@file`.
    #[arg(long)]
    parameter: Option<String>,
    /// Stratum point JSON or `@file`.
    #[arg(long)]
    point: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Strata of the extended quotient, with cohomology.
    Strata(ComponentArg),
    /// Orbits of L-parameters over the component.
    Orbits(ComponentArg),
    /// Periodic cyclic homology dimensions.
    Hp(ComponentArg),
    /// q-projection of a stratum point.
    Project {
        #[arg(long)]
        point: String,
        /// Optional component to check the point against.
        #[arg(long)]
        component: Option<String>,
        /// Numeric q > 1 for evaluating the image.
        #[arg(long)]
        q: Option<f64>,
    },
    /// All stratum points over a point of the ordinary quotient.
    Fiber {
        #[command(flatten)]
        component: ComponentArg,
        /// SymPoint JSON, `@file`, or compact `{q^-1,1,q}` (blocks separated by `;`).
        #[arg(long)]
        point: String,
    },
    /// Tempering retraction of a parameter or stratum point.
    Temper(Target),
    /// Point on the homotopy from the identity (t = 0) to the retraction (t = 1).
    Homotopy {
        #[command(flatten)]
        target: Target,
        /// Rational time `p/r` in [0, 1].
        #[arg(long)]
        t: String,
    },
    /// Elementary-symmetric coordinates and their inverse.
    Symcoords {
        #[arg(long)]
        n: usize,
        /// JSON list of `{"re":..,"im":..}` points.
        #[arg(long, conflicts_with = "sigma", required_unless_present = "sigma")]
        points: Option<String>,
        /// JSON list of `{"re":..,"im":..}` coordinates sigma_1..sigma_n.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Run the regression suite.
    Verify,
}

#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match e {
            Error::Invalid(_) => (EXIT_VALIDATION, "validation"),
            Error::LimitExceeded { .. } => (EXIT_LIMIT, "limit"),
            Error::NoConvergence(_) | Error::Arithmetic(_) => (EXIT_FAILURE, "internal"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn validation(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_VALIDATION,
        kind: "validation",
        message: message.into(),
    }
}

fn load(raw: &str) -> Result<String, Failure> {
    match raw.strip_prefix('@') {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| validation(format!("cannot read '{path}': {e}")))
        }
        None => Ok(raw.to_string()),
    }
}

fn parse_json<T: DeserializeOwned>(raw: &str, what: &str) -> Result<T, Failure> {
    let text = load(raw)?;
    serde_json::from_str(&text).map_err(|e| validation(format!("malformed {what}: {e}")))
}

fn parse_component(raw: &str) -> Result<Component, Failure> {
    let text = load(raw)?;
    let trimmed = text.trim();
    if trimmed.starts_with('{') {
        return serde_json::from_str(trimmed)
            .map_err(|e| validation(format!("malformed component: {e}")));
    }
    let inner = trimmed.trim_start_matches('(').trim_end_matches(')');
    let exponents = inner
        .split(',')
        .map(|e| e.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| validation(format!("malformed component '{trimmed}'")))?;
    Ok(Component::new(
        exponents
            .iter()
            .enumerate()
            .map(|(i, &e)| Block::new(format!("b{i}"), e))
            .collect(),
    )?)
}

fn parse_sym_point(raw: &str) -> Result<SymPoint, Failure> {
    let text = load(raw)?;
    match serde_json::from_str(&text) {
        Ok(p) => Ok(p),
        Err(json_err) => SymPoint::parse_compact(&text).map_err(|e| {
            validation(format!(
                "malformed point: not JSON ({json_err}) nor compact ({e})"
            ))
        }),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn check_point(p: &StratumPoint, c: &Component) -> Result<(), Failure> {
    if !p.stratum().cycle_type().matches(c) {
        return Err(validation(format!(
            "cycle type sizes {:?} do not match exponents {:?}",
            p.stratum().cycle_type().sizes(),
            c.exponents()
        )));
    }
    Ok(())
}

fn execute(command: Command) -> Result<(i32, Value), Failure> {
    let out = match command {
        Command::Strata(arg) => {
            let c = parse_component(&arg.component)?;
            let strata =
                bernstein::enumerate_strata_limited(&c, arg.limit.unwrap_or(DEFAULT_STRATA_LIMIT))?;
            let entries = strata
                .iter()
                .map(|s| {
                    let mut v = to_value(s);
                    v["poincare"] = to_value(&stratum_poincare(s)?);
                    Ok(v)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            json!({ "component": c, "strata": entries })
        }
        Command::Orbits(arg) => {
            let c = parse_component(&arg.component)?;
            let orbits =
                bernstein::enumerate_orbits_limited(&c, arg.limit.unwrap_or(DEFAULT_STRATA_LIMIT))?;
            let entries: Vec<Value> = orbits
                .iter()
                .map(|o| {
                    let (l, k) = o.shape();
                    let mut v = to_value(o);
                    v["l"] = json!(l);
                    v["k"] = json!(k);
                    v
                })
                .collect();
            json!({ "component": c, "orbits": entries })
        }
        Command::Hp(arg) => {
            let c = parse_component(&arg.component)?;
            to_value(&hp_dims(&c, arg.limit.unwrap_or(DEFAULT_STRATA_LIMIT))?)
        }
        Command::Project {
            point,
            component,
            q,
        } => {
            let p: StratumPoint = parse_json(&point, "stratum point")?;
            if let Some(raw) = component {
                check_point(&p, &parse_component(&raw)?)?;
            }
            let image = qproj::project(&p);
            let mut v = json!({ "point": image });
            if let Some(q) = q {
                let numeric = image
                    .blocks()
                    .iter()
                    .map(|b| {
                        b.iter()
                            .map(|z| z.to_complex(q).map(ComplexRecord::from))
                            .collect::<Result<Vec<_>, Error>>()
                    })
                    .collect::<Result<Vec<_>, Error>>()?;
                v["numeric"] = to_value(&numeric);
            }
            v
        }
        Command::Fiber { component, point } => {
            let c = parse_component(&component.component)?;
            let y = parse_sym_point(&point)?;
            let f = qproj::fiber_limited(&y, &c, component.limit.unwrap_or(DEFAULT_FIBER_LIMIT))?;
            json!({ "point": y, "count": f.len(), "fiber": f })
        }
        Command::Temper(target) => match (target.parameter, target.point) {
            (Some(raw), _) => {
                let phi: LParameter = parse_json(&raw, "parameter")?;
                json!({ "parameter": retract::temper_parameter(&phi) })
            }
            (None, Some(raw)) => {
                let p: StratumPoint = parse_json(&raw, "stratum point")?;
                json!({ "point": retract::temper_point(&p) })
            }
            (None, None) => return Err(validation("need --parameter or --point")),
        },
        Command::Homotopy { target, t } => {
            let t = parse_ratio(&t)?;
            match (target.parameter, target.point) {
                (Some(raw), _) => {
                    let phi: LParameter = parse_json(&raw, "parameter")?;
                    json!({ "parameter": retract::homotopy(&phi, t)? })
                }
                (None, Some(raw)) => {
                    let p: StratumPoint = parse_json(&raw, "stratum point")?;
                    json!({ "point": retract::homotopy_point(&p, t)? })
                }
                (None, None) => return Err(validation("need --parameter or --point")),
            }
        }
        Command::Symcoords { n, points, sigma } => {
            #[derive(serde::Deserialize)]
            #[serde(transparent)]
            struct Complexes(#[serde(with = "complex_list")] Vec<Complex64>);
            let (raw, what) = match (points, sigma) {
                (Some(p), _) => (p, "points"),
                (None, Some(s)) => (s, "sigma"),
                (None, None) => return Err(validation("need --points or --sigma")),
            };
            let Complexes(values) = parse_json(&raw, what)?;
            if values.len() != n {
                return Err(validation(format!(
                    "--n is {n} but {} values were given",
                    values.len()
                )));
            }
            if what == "points" {
                let coords = to_sym_coords(&values)?;
                to_value(&coords)
            } else {
                let roots = from_sym_coords(&SymCoords::new(values)?)?;
                let records: Vec<ComplexRecord> =
                    roots.into_iter().map(ComplexRecord::from).collect();
                json!({ "roots": records })
            }
        }
        Command::Verify => {
            let checks = regression::run_all();
            let passed = checks.iter().all(|c| c.passed);
            for c in &checks {
                eprintln!(
                    "[{}] {} ({} ms): {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.millis,
                    c.detail
                );
            }
            let code = if passed { EXIT_OK } else { EXIT_FAILURE };
            return Ok((code, json!({ "passed": passed, "checks": checks })));
        }
    };
    Ok((EXIT_OK, out))
}

/// Runs the CLI on `argv` (including the program name). Returns the exit
/// code and the JSON text destined for stdout.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let (code, value) = match Cli::try_parse_from(argv) {
        Ok(cli) => match execute(cli.command) {
            Ok(r) => r,
            Err(f) => (
                f.code,
                json!({ "error": { "kind": f.kind, "message": f.message } }),
            ),
        },
        Err(e) => {
            use clap::error::ErrorKind;
            match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    (EXIT_OK, json!({ "help": e.to_string() }))
                }
                _ => (
                    EXIT_VALIDATION,
                    json!({ "error": { "kind": "usage", "message": e.to_string() } }),
                ),
            }
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("serializable");
    (code, text)
}
