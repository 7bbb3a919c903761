//! Command-line front end. Every command prints one JSON document; failures
//! print nothing on stdout except a single error object.

use std::io::Read;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{parse_rational, IntMatrix, Scalar};
use crate::harness::{
    cycles_suite, exclusion_suite, uniqueness_check, pf_suite, sigma_suite, signrows_suite, walk_cycles,
    UniquenessOptions, PairingTolerances, Sides,
};
use crate::iet::Iet;
use crate::induced::{natural_decomposition_capped, visitation_matrix, SubInterval};
use crate::perm::Permutation;
use crate::rauzy::{drive_with_limits, Limits, Policy, StepKind};
use crate::recovery::{realize_interval_with_limits, recover, Mode};
use crate::sample::preset_lengths;
use crate::wire::{to_json, DecompositionJson, ErrorJson, RecoveryInput, ReportJson, TraceJson};

pub const STEP_CAP_VAR: &str = "RAUZY_LAB_STEP_CAP";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "rauzy-lab", version, about = "Exact Rauzy induction and permutation recovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Permutation as "[3,2,1]", "3,2,1" or permutation JSON.
    #[arg(long)]
    pi: String,
    /// Lengths: a preset (golden, silver), a JSON array of scalars, or "p/q,p/q,...".
    #[arg(long)]
    lambda: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run Rauzy induction and print the trace.
    Induce {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        steps: usize,
        /// right, left, alternate, seed:N or a side list like R,L,R.
        #[arg(long, default_value = "right")]
        policy: String,
    },
    /// Natural decomposition of the return map to a sub-interval.
    Decompose {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Endpoints "a,b" or a JSON array of two scalars.
        #[arg(long)]
        interval: String,
    },
    /// Rauzy path producing the induced map on a sub-interval.
    Realize {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long)]
        interval: String,
    },
    /// Recover the starting permutation from visitation matrix products.
    Recover {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        mode: Option<String>,
        /// Products or trace JSON; "-" reads standard input.
        #[arg(long = "in")]
        input: String,
        /// Group a trace's steps, e.g. "2,5,9" (1-based group ends).
        #[arg(long)]
        cuts: Option<String>,
    },
    /// Run one verification suite.
    Verify {
        /// sigma, cycles, mainlemma (alias uniqueness), signrows, exclusion or pf.
        #[arg(long)]
        suite: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_len: Option<usize>,
        /// right or extended.
        #[arg(long, default_value = "extended")]
        sides: String,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        /// Wall-clock budget in seconds (uniqueness suite only).
        #[arg(long)]
        time_budget: Option<u64>,
    },
    /// List Rauzy cycles and their products.
    Enumerate {
        /// Base permutation; all irreducible permutations of size --n otherwise.
        #[arg(long)]
        pi: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_len: usize,
        #[arg(long, default_value = "extended")]
        sides: String,
        /// Only cycles with an entrywise positive product.
        #[arg(long)]
        positive: bool,
    },
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Domain(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Run with the step cap taken from the environment.
pub fn dispatch<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run(argv, std::env::var(STEP_CAP_VAR).ok().as_deref())
}

/// Run with an explicit step cap override (the value of the environment
/// variable, if any).
pub fn run<I, T>(argv: I, step_cap: Option<&str>) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(cli.command, step_cap) {
        Ok(json) => Outcome {
            code: EXIT_OK,
            stdout: json + "\n",
            stderr: String::new(),
        },
        Err(Failure::Usage(msg)) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
        Err(Failure::Domain(e)) => Outcome {
            code: EXIT_DOMAIN,
            stdout: to_json(&ErrorJson::from(&e)) + "\n",
            stderr: String::new(),
        },
    }
}

fn limits(step_cap: Option<&str>) -> std::result::Result<Limits, Failure> {
    match step_cap {
        None => Ok(Limits::default()),
        Some(v) => {
            let cap: usize = v
                .trim()
                .parse()
                .map_err(|_| usage(format!("{STEP_CAP_VAR} must be a positive integer, got {v:?}")))?;
            if cap == 0 {
                return Err(usage(format!("{STEP_CAP_VAR} must be positive")));
            }
            Ok(Limits {
                step_cap: cap,
                iteration_cap: cap,
            })
        }
    }
}

fn flag<T>(name: &str, r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(|e| usage(format!("--{name}: {e}")))
}

pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let t = text.trim();
    if t.starts_with('[') || t.starts_with('{') {
        return serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()));
    }
    let image = t
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad permutation entry {x:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(image)
}

pub fn parse_scalars(text: &str) -> Result<Vec<Scalar>> {
    let t = text.trim();
    if t.starts_with('[') {
        return serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()));
    }
    t.split(',').map(|x| parse_rational(x.trim()).map(Scalar::Rational)).collect()
}

/// Lengths from a preset name, a JSON array of scalars or "p/q,p/q,...".
pub fn parse_lengths(text: &str, n: usize) -> Result<Vec<Scalar>> {
    match text.trim() {
        name @ ("golden" | "silver") => preset_lengths(name, n),
        other => parse_scalars(other),
    }
}

fn instance(args: &InstanceArgs) -> std::result::Result<(Permutation, Vec<Scalar>), Failure> {
    let pi = flag("pi", parse_permutation(&args.pi))?;
    let lambda = flag("lambda", parse_lengths(&args.lambda, pi.n()))?;
    if lambda.len() != pi.n() {
        return Err(usage(format!("--lambda has {} entries for n = {}", lambda.len(), pi.n())));
    }
    Ok((pi, lambda))
}

fn interval(text: &str) -> std::result::Result<(Scalar, Scalar), Failure> {
    let v = flag("interval", parse_scalars(text))?;
    match <[Scalar; 2]>::try_from(v) {
        Ok([a, b]) => Ok((a, b)),
        Err(_) => Err(usage("--interval needs exactly two endpoints")),
    }
}

fn parse_cuts(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|x| x.trim().parse().map_err(|_| Error::Parse(format!("bad cut {x:?}"))))
        .collect()
}

fn read_input(path: &str) -> std::result::Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| usage(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("reading {path}: {e}")))
    }
}

#[derive(Serialize)]
struct RealizeJson {
    path: Vec<StepKind>,
    end: Permutation,
    #[serde(rename = "A")]
    matrix: IntMatrix,
}

#[derive(Serialize)]
struct CycleJson {
    path: Vec<StepKind>,
    #[serde(rename = "B")]
    matrix: IntMatrix,
    positive: bool,
}

#[derive(Serialize)]
struct BaseCyclesJson {
    pi: Permutation,
    cycles: Vec<CycleJson>,
}

#[derive(Serialize)]
struct EnumerationJson {
    max_len: usize,
    sides: Sides,
    bases: Vec<BaseCyclesJson>,
}

fn execute(command: Command, step_cap: Option<&str>) -> std::result::Result<String, Failure> {
    let limits = limits(step_cap)?;
    match command {
        Command::Induce { instance: a, steps, policy } => {
            let (pi, lambda) = instance(&a)?;
            let policy: Policy = flag("policy", policy.parse())?;
            if steps == 0 {
                return Err(usage("--steps must be positive"));
            }
            let t = Iet::new(pi, lambda)?;
            let trace = drive_with_limits(&t, &policy, steps, &limits)?;
            Ok(to_json(&TraceJson::from_trace(&trace)))
        }
        Command::Decompose { instance: a, interval: iv } => {
            let (pi, lambda) = instance(&a)?;
            let (lo, hi) = interval(&iv)?;
            let t = Iet::new(pi, lambda)?;
            let j = SubInterval::new(lo, hi)?;
            if !j.is_within(&t) {
                return Err(Error::Domain(format!("{j} is not inside the domain")).into());
            }
            let d = natural_decomposition_capped(&t, &j, limits.iteration_cap)?;
            let matrix = if d.len() == t.n() { Some(visitation_matrix(&t, &d)?) } else { None };
            Ok(to_json(&DecompositionJson::new(&d, matrix)))
        }
        Command::Realize { instance: a, interval: iv } => {
            let (pi, lambda) = instance(&a)?;
            let (lo, hi) = interval(&iv)?;
            let t = Iet::new(pi, lambda)?;
            let j = SubInterval::new(lo, hi)?;
            match realize_interval_with_limits(&t, &j, &limits)? {
                Some(path) => Ok(to_json(&RealizeJson {
                    matrix: path.matrix()?,
                    path: path.kinds,
                    end: path.end,
                })),
                None => {
                    let d = natural_decomposition_capped(&t, &j, limits.iteration_cap)?;
                    Err(Error::NotAdmissible {
                        n: t.n(),
                        pieces: d.len(),
                    }
                    .into())
                }
            }
        }
        Command::Recover { n, mode, input, cuts } => {
            let flag_mode: Option<Mode> = mode.as_deref().map(|m| flag("mode", m.parse())).transpose()?;
            let cuts = cuts.as_deref().map(|c| flag("cuts", parse_cuts(c))).transpose()?;
            let text = read_input(&input)?;
            let parsed = RecoveryInput::parse(&text)?;
            let (file_n, products, file_mode) = parsed.resolve(cuts.as_deref())?;
            if let Some(n) = n {
                if n != file_n {
                    return Err(usage(format!("--n {n} but the input has n = {file_n}")));
                }
            }
            let mode = flag_mode.or(file_mode).unwrap_or(Mode::Strict);
            let report = recover(&products, file_n, mode)?;
            Ok(to_json(&ReportJson::new(&report)))
        }
        Command::Verify {
            suite,
            n,
            max_len,
            sides,
            samples,
            seed,
            jobs,
            time_budget,
        } => {
            let sides: Sides = flag("sides", sides.parse())?;
            if n < 2 {
                return Err(usage("--n must be at least 2"));
            }
            let job = move || -> std::result::Result<String, Failure> {
                Ok(match suite.as_str() {
                    "sigma" => to_json(&sigma_suite(n)?),
                    "cycles" => to_json(&cycles_suite(n, max_len.unwrap_or(8), sides)?),
                    "signrows" => to_json(&signrows_suite(n, samples.unwrap_or(200), seed)?),
                    "exclusion" => to_json(&exclusion_suite(n, samples.unwrap_or(20), seed)?),
                    "pf" => to_json(&pf_suite(n, max_len.unwrap_or(8), samples.unwrap_or(50), &PairingTolerances::default())?),
                    "mainlemma" | "uniqueness" => {
                        let opts = UniquenessOptions {
                            max_len: max_len.unwrap_or(crate::harness::uniqueness::DEFAULT_UNIQUENESS_LEN),
                            sides,
                            time_budget: time_budget.map(Duration::from_secs),
                        };
                        to_json(&uniqueness_check(n, &opts)?)
                    }
                    other => return Err(usage(format!("unknown suite {other:?}"))),
                })
            };
            match jobs {
                None => job(),
                Some(0) => Err(usage("--jobs must be positive")),
                Some(j) => rayon::ThreadPoolBuilder::new()
                    .num_threads(j)
                    .build()
                    .map_err(|e| usage(format!("--jobs: {e}")))?
                    .install(job),
            }
        }
        Command::Enumerate {
            pi,
            n,
            max_len,
            sides,
            positive,
        } => {
            let sides: Sides = flag("sides", sides.parse())?;
            let bases = match (pi, n) {
                (Some(p), None) => vec![flag("pi", parse_permutation(&p))?],
                (None, Some(n)) if n >= 2 => Permutation::irreducible(n),
                (None, Some(_)) => return Err(usage("--n must be at least 2")),
                _ => return Err(usage("give exactly one of --pi and --n")),
            };
            let mut out = Vec::with_capacity(bases.len());
            for base in bases {
                let mut cycles = Vec::new();
                walk_cycles(&base, max_len, sides, |kinds, b| {
                    let pos = b.is_positive();
                    if pos || !positive {
                        cycles.push(CycleJson {
                            path: kinds.to_vec(),
                            matrix: b.clone(),
                            positive: pos,
                        });
                    }
                    Ok(())
                })?;
                cycles.sort_by(|x, y| x.path.len().cmp(&y.path.len()).then_with(|| x.path.cmp(&y.path)));
                out.push(BaseCyclesJson { pi: base, cycles });
            }
            Ok(to_json(&EnumerationJson {
                max_len,
                sides,
                bases: out,
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_forms() {
        let p = Permutation::new(vec![3, 2, 1]).unwrap();
        assert_eq!(parse_permutation("[3,2,1]").unwrap(), p);
        assert_eq!(parse_permutation("3, 2, 1").unwrap(), p);
        assert_eq!(parse_permutation(r#"{"n":3,"image":[3,2,1]}"#).unwrap(), p);
        assert!(parse_permutation("3,x").is_err());
    }

    #[test]
    fn scalar_forms() {
        assert_eq!(parse_scalars("1/2, 3").unwrap(), vec![Scalar::ratio(1, 2), Scalar::int(3)]);
        assert_eq!(
            parse_scalars(r#"[{"a":"1/2","b":"1/2","D":5}]"#).unwrap(),
            vec![Scalar::golden()]
        );
    }

    #[test]
    fn step_cap_values() {
        assert!(matches!(limits(Some("0")), Err(Failure::Usage(_))));
        assert!(matches!(limits(Some("ten")), Err(Failure::Usage(_))));
        assert_eq!(limits(Some("7")).ok().unwrap().step_cap, 7);
    }
}
