use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use codeq::certificate::Certificate;
use codeq::constacyclic::{multiplier_orbits, palfy_classify, ConstaContext};
use codeq::cosets::CosetTable;
use codeq::cyclic::{certify_equivalence, classify, CertifyOptions, CyclicContext, MoveSet};
use codeq::linear::{DistanceOptions, EquivalenceMode, LinearCode, Strategy};
use codeq::quantum::{crss, extension_amount, is_dual_containing, nearly_self_orthogonal};
use codeq::search::{self, Family, Prune, SearchJob, Targets};

const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "codeq", version, about = "Cyclic and constacyclic codes: construction, equivalence, quantum parameters and search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A codeword count (`1000000`, `2^30`) or a wall-clock limit (`300s`, `5m`).
#[derive(Debug, Clone, Copy)]
struct Budget {
    codewords: u128,
    time: Option<Duration>,
}

impl Budget {
    fn deadline(&self) -> Option<Instant> {
        self.time.map(|t| Instant::now() + t)
    }
}

impl FromStr for Budget {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(exp) = s.strip_prefix("2^") {
            let e: u32 = exp.parse().map_err(|_| format!("bad exponent in {s:?}"))?;
            let codewords = 2u128.checked_pow(e).ok_or_else(|| format!("{s} is too large"))?;
            return Ok(Budget { codewords, time: None });
        }
        if let Ok(codewords) = s.parse::<u128>() {
            return Ok(Budget { codewords, time: None });
        }
        let time = humantime::parse_duration(s).map_err(|e| format!("{s:?}: {e}"))?;
        Ok(Budget {
            codewords: u128::MAX,
            time: Some(time),
        })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CodeType {
    Cyclic,
    Constacyclic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Monomial,
    Permutation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PruneMove {
    Multiplier,
    Affine,
    Structural,
}

#[derive(clap::Args, Debug, Clone)]
struct DistanceArgs {
    /// Codeword budget (`2^32`) or time limit (`300s`)
    #[arg(long, default_value = "2^32")]
    distance_budget: Budget,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random information sets tried before the deterministic pass
    #[arg(long, default_value_t = 64)]
    random_iterations: u64,
}

impl DistanceArgs {
    fn options(&self) -> DistanceOptions {
        DistanceOptions {
            budget: self.distance_budget.codewords,
            deadline: self.distance_budget.deadline(),
            seed: self.seed,
            random_iterations: self.random_iterations,
            ..Default::default()
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// q-cyclotomic cosets modulo n
    Cosets {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
    },
    /// Build a cyclic code from coset leaders
    Gen {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        leaders: Vec<u64>,
        /// Also print the generator matrix in RREF
        #[arg(long)]
        matrix: bool,
    },
    /// Certificates relating two cyclic codes given by coset leaders
    Equiv {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        a: Vec<u64>,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        b: Vec<u64>,
        /// Node budget for the final brute-force stage; 0 disables it
        #[arg(long, default_value_t = 1 << 22)]
        brute_force_budget: u64,
    },
    /// Compare certified classes with brute-force equivalence classes
    Classify {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "monomial")]
        mode: Mode,
        #[arg(long, default_value_t = 1 << 22)]
        brute_force_budget: u64,
    },
    /// Build an ω-constacyclic code over GF(4) from coset leaders mod 3n
    Consta {
        #[arg(long)]
        n: u64,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        leaders: Vec<u64>,
    },
    /// Multiplier orbits of all ω-constacyclic codes of length n
    ConstaClassify {
        #[arg(long)]
        n: u64,
    },
    /// Binary quantum code from a quaternary cyclic or constacyclic code
    Quantum {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 4)]
        q: u64,
        #[arg(long = "type", value_enum, default_value = "cyclic")]
        code_type: CodeType,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        leaders: Vec<u64>,
        #[command(flatten)]
        distance: DistanceArgs,
    },
    /// Enumerate defining sets up to equivalence and evaluate representatives
    Search {
        #[arg(long, value_enum, default_value = "cyclic")]
        family: CodeType,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 4)]
        q: u64,
        #[arg(long)]
        k_min: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
        /// Moves used for pruning (default: all)
        #[arg(long, value_enum, value_delimiter = ',')]
        prune: Option<Vec<PruneMove>>,
        /// Evaluate every defining set separately
        #[arg(long, conflicts_with = "prune")]
        no_prune: bool,
        /// File of `n,k,q,d` rows with best known distances
        #[arg(long)]
        targets: Option<PathBuf>,
        /// JSONL output; stdout when absent
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also run the nearly self-orthogonal construction (GF(4))
        #[arg(long)]
        quantum: bool,
        /// Only report orbits, skip distance evaluation
        #[arg(long)]
        orbits_only: bool,
        /// Record evaluation time per representative
        #[arg(long)]
        timing: bool,
        /// Per-code codeword budget or time limit
        #[arg(long, default_value = "2^24")]
        distance_budget: Budget,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Minimum distance bounds of a cyclic or constacyclic code
    Mindist {
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 4)]
        q: u64,
        #[arg(long = "type", value_enum, default_value = "cyclic")]
        code_type: CodeType,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        leaders: Vec<u64>,
        /// Enumerate the whole code instead of information sets
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        distance: DistanceArgs,
    },
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = match error.downcast_ref::<codeq::Error>() {
            Some(e) if is_invalid_input(e) => EXIT_INVALID,
            _ => 1,
        };
        Failure { code, error }
    }
}

impl From<codeq::Error> for Failure {
    fn from(e: codeq::Error) -> Self {
        anyhow::Error::from(e).into()
    }
}

fn is_invalid_input(e: &codeq::Error) -> bool {
    use codeq::Error::*;
    matches!(
        e,
        NotPrime(_)
            | NotPrimePower(_)
            | InvalidDegree
            | FieldTooLarge { .. }
            | NotCoprime { .. }
            | NoRootOfOrder { .. }
            | AnchorUnsatisfiable { .. }
            | NotCosetClosed { .. }
            | ModulusMismatch { .. }
            | InvalidMap(_)
            | InvalidArgument(_)
            | WrongField { .. }
            | NotDualContaining
            | Parse(_)
    )
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INVALID,
        error: anyhow!(msg.into()),
    }
}

/// Exit status: 3 when a budget ran out before the bounds met.
type Status = Result<u8, Failure>;

fn budget_status(exhausted: bool, lb: u32, ub: u32) -> u8 {
    if exhausted && lb < ub {
        EXIT_BUDGET
    } else {
        0
    }
}

fn print_json(v: &impl serde::Serialize) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn quaternary_code(n: u64, q: u64, code_type: CodeType, leaders: &[u64]) -> Result<LinearCode, Failure> {
    match code_type {
        CodeType::Cyclic => Ok(CyclicContext::new(n, q)?.build_leaders(leaders)?.code().clone()),
        CodeType::Constacyclic => {
            if q != 4 {
                return Err(invalid("constacyclic codes are over GF(4); use --q 4"));
            }
            Ok(ConstaContext::new(n)?.build_leaders(leaders)?.code().clone())
        }
    }
}

fn run(cmd: Command) -> Status {
    match cmd {
        Command::Cosets { n, q } => {
            let t = CosetTable::new(n, q)?;
            for c in t.cosets() {
                let body: Vec<String> = c.iter().map(u64::to_string).collect();
                println!("Z({}) = {{{}}}", c[0], body.join(","));
            }
            Ok(0)
        }
        Command::Gen { n, q, leaders, matrix } => {
            let ctx = CyclicContext::new(n, q)?;
            let code = ctx.build_leaders(&leaders)?;
            let mut v = json!({
                "n": n,
                "k": code.k(),
                "q": q,
                "leaders": code.defining_set().leaders(),
                "defining_set": code.defining_set().elements(),
                "generator_poly": code.generator_poly().iter().map(|c| c.value()).collect::<Vec<_>>(),
            });
            if matrix {
                v["generator_matrix"] = json!(code.code().to_matrix());
            }
            print_json(&v)?;
            Ok(0)
        }
        Command::Equiv {
            n,
            q,
            a,
            b,
            brute_force_budget,
        } => {
            let ctx = CyclicContext::new(n, q)?;
            let (c1, c2) = (ctx.build_leaders(&a)?, ctx.build_leaders(&b)?);
            let opts = CertifyOptions {
                brute_force_budget,
                ..Default::default()
            };
            let certs: Vec<Certificate> = certify_equivalence(&c1, &c2, &opts)?;
            if certs.is_empty() {
                eprintln!("no certificate found for {} and {}", c1.defining_set(), c2.defining_set());
            }
            for c in &certs {
                print_json(c)?;
            }
            Ok(0)
        }
        Command::Classify {
            n,
            q,
            mode,
            brute_force_budget,
        } => {
            let ctx = CyclicContext::new(n, q)?;
            let (moves, mode) = match mode {
                Mode::Monomial => (MoveSet::MONOMIAL, EquivalenceMode::Monomial),
                Mode::Permutation => (MoveSet::PERMUTATION, EquivalenceMode::Permutation),
            };
            let opts = CertifyOptions {
                brute_force_budget,
                ..Default::default()
            };
            let c = classify(&ctx, moves, mode, &opts)?;
            let names = |classes: &[Vec<usize>]| -> Vec<Vec<String>> {
                classes
                    .iter()
                    .map(|cl| cl.iter().map(|&i| c.sets[i].to_string()).collect())
                    .collect()
            };
            print_json(&json!({
                "n": n,
                "q": q,
                "codes": c.sets.len(),
                "certified": names(&c.certified),
                "brute_force": names(&c.brute_force),
                "unresolved": c.unresolved.len(),
                "agree": c.agree(),
            }))?;
            Ok(if c.unresolved.is_empty() { 0 } else { EXIT_BUDGET })
        }
        Command::Consta { n, leaders } => {
            let ctx = ConstaContext::new(n)?;
            let code = ctx.build_leaders(&leaders)?;
            let c = code.code();
            let hull = c.hull_dim_hermitian()?;
            let (e, _) = extension_amount(c)?;
            print_json(&json!({
                "n": n,
                "k": code.k(),
                "leaders": code.defining_set().leaders(),
                "defining_set": code.defining_set().elements(),
                "hull_dim": hull,
                "dual_containing": is_dual_containing(c)?,
                "e": e,
            }))?;
            Ok(0)
        }
        Command::ConstaClassify { n } => {
            let orbits = match palfy_classify(n) {
                Ok(o) => o,
                Err(codeq::Error::InvalidArgument(msg)) => {
                    eprintln!("{msg}: orbits are multiplier orbits only");
                    multiplier_orbits(&*ConstaContext::new(n)?)?
                }
                Err(e) => return Err(e.into()),
            };
            for o in &orbits {
                let members: Vec<_> = o
                    .members
                    .iter()
                    .map(|(s, e)| json!({"set": s.elements(), "e": e}))
                    .collect();
                print_json(&json!({
                    "representative": o.representative.leaders(),
                    "size": o.members.len(),
                    "members": members,
                }))?;
            }
            Ok(0)
        }
        Command::Quantum {
            n,
            q,
            code_type,
            leaders,
            distance,
        } => {
            if q != 4 {
                return Err(invalid("quantum codes need a code over GF(4); use --q 4"));
            }
            let code = quaternary_code(n, q, code_type, &leaders)?;
            let opts = distance.options();
            let params = if is_dual_containing(&code)? {
                crss(&code, &opts)?.params
            } else {
                nearly_self_orthogonal(&code, &opts)?.quantum.params
            };
            print_json(&json!({
                "n_q": params.n_q,
                "k_q": params.k_q,
                "e": params.e,
                "d_lb": params.d_lb,
                "d_ub": params.d_ub,
                "construction": params.construction,
                "seed": params.seed,
            }))?;
            Ok(budget_status(params.exhausted, params.d_lb, params.d_ub))
        }
        Command::Search {
            family,
            n,
            q,
            k_min,
            k_max,
            prune,
            no_prune,
            targets,
            output,
            quantum,
            orbits_only,
            timing,
            distance_budget,
            seed,
        } => {
            let family = match family {
                CodeType::Cyclic => Family::Cyclic,
                CodeType::Constacyclic => Family::Constacyclic,
            };
            let mut job = SearchJob::new(family, n, q);
            job.k_min = k_min.unwrap_or(0);
            job.k_max = k_max.unwrap_or(n as usize);
            job.distance.budget = distance_budget.codewords;
            job.time_per_code = distance_budget.time;
            job.distance.seed = seed;
            job.prune = match (no_prune, prune) {
                (true, _) => Prune::NONE,
                (false, None) => Prune::ALL,
                (false, Some(moves)) => Prune {
                    multiplier: moves.contains(&PruneMove::Multiplier),
                    affine: moves.contains(&PruneMove::Affine),
                    structural: moves.contains(&PruneMove::Structural),
                },
            };
            if let Some(path) = &targets {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                job.targets = Targets::parse(&text)?;
            }
            job.quantum = quantum;
            job.orbits_only = orbits_only;
            job.timing = timing;

            let out = search::run(&job)?;
            match &output {
                Some(path) => search::write_jsonl_file(&out.records, path)?,
                None => search::write_jsonl(&out.records, &mut io::stdout().lock())?,
            }
            let summary = search::report(&out.records, &job.targets);
            eprint!("{summary}");
            Ok(if summary.exhausted > 0 { EXIT_BUDGET } else { 0 })
        }
        Command::Mindist {
            n,
            q,
            code_type,
            leaders,
            exhaustive,
            distance,
        } => {
            let code = quaternary_code(n, q, code_type, &leaders)?;
            let mut opts = distance.options();
            if exhaustive {
                opts.strategy = Strategy::Exhaustive;
            }
            let d = code.min_distance(&opts);
            print_json(&json!({
                "n": n,
                "k": code.k(),
                "q": q,
                "d_lb": d.lb,
                "d_ub": d.ub,
                "strategy": d.strategy,
                "seed": d.seed,
                "exhausted": d.exhausted,
            }))?;
            Ok(budget_status(d.exhausted, d.lb, d.ub))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let closed = f
                .error
                .chain()
                .filter_map(|e| e.downcast_ref::<std::io::Error>())
                .any(|e| e.kind() == std::io::ErrorKind::BrokenPipe);
            if closed {
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
