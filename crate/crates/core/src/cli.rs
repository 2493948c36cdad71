//! Command-line front end. [`run`] does all the work and returns the exit
//! code, so it can be driven from tests as well as from the binary.
//!
//! Exit codes: 0 success, 1 other errors, 2 parse or usage errors, 3
//! characteristic violation, 4 precision exhausted, 5 verification failure.
//! Errors are reported as one stderr line `error: kind=<kind> msg=<message>`.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::calculus::{
    antiderive, estimate_dj, extract_bnj, extract_bnj_to_depth, lipschitz_constant,
    norm_cn_bruteforce, norm_n, t_n, BruteForceConfig, DEFAULT_BUDGET,
};
use crate::classify::{is_derivative_zero, is_isometry, is_pseudocontraction, monotone_type};
use crate::error::{Error, Result};
use crate::field::{Backend, FieldParams, Scalar};
use crate::funcspace::CnCombo;
use crate::text::{parse_function, parse_rep, parse_scalar, write_function, write_table};
use crate::verify::{self, Mutation, VerifyConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CHARACTERISTIC: i32 = 3;
pub const EXIT_PRECISION: i32 = 4;
pub const EXIT_SUITE_FAILURE: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "padic-wavelet",
    version,
    about = "Wavelet-basis calculus of C^n functions on Z_p and F_p[[t]]"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Field backend; function files carry their own and must agree.
    #[arg(long, global = true, value_enum)]
    field: Option<FieldArg>,
    /// Residue characteristic.
    #[arg(long, global = true)]
    p: Option<u32>,
    /// Working precision N (digits).
    #[arg(long, global = true)]
    prec: Option<u32>,
    /// Level n.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Depth m for truncated coefficient tables.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Probe depth m' for brute-force comparisons.
    #[arg(long, global = true)]
    probe: Option<usize>,
    /// Tolerance k (agreement modulo pi^k).
    #[arg(long, global = true)]
    tol: Option<i64>,
    /// Tuple budget for brute-force searches.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Seed for sampling and for the verification suites.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (output does not depend on this).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..4096))]
    threads: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FieldArg {
    Zp,
    Fpt,
}

impl From<FieldArg> for Backend {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Zp => Backend::Zp,
            FieldArg::Fpt => Backend::FpT,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Increasing,
    Monotone,
    Pseudocontraction,
    Isometry,
    DerivativeZero,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MutationArg {
    LowerBasisSign,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Coefficient table b_r^{n,j} of a function file (n defaults to its level).
    Expand { file: PathBuf },
    /// The norm |f|_n; with --probe also the brute-force |f|_{C^n} over R_{m'}.
    Norm { file: PathBuf },
    /// The Lipschitz constant A_f = sup |Phi_n f|.
    Lipschitz { file: PathBuf },
    /// P_n f (or T_n f with --t-n) as a function file.
    Antiderive {
        file: PathBuf,
        /// Apply T_n = n! P_n o ... o P_1 to a level-0 function instead.
        #[arg(long)]
        t_n: bool,
    },
    /// Decide a classification criterion; prints a verdict.
    Classify {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: Kind,
        /// Type representative s for --kind monotone.
        #[arg(long)]
        s: Option<String>,
    },
    /// Estimate D_j f(x) from difference quotients at depths --depth..=--probe,
    /// stopping once consecutive values agree modulo pi^--tol.
    Estimate {
        file: PathBuf,
        /// Point x as digits `d0,d1,...`.
        #[arg(long)]
        x: String,
        #[arg(long)]
        j: usize,
    },
    /// Run the seeded identity suites.
    Verify {
        /// Trials per suite.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Run only these suites (repeatable).
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Evaluation points per reconstruction trial.
        #[arg(long, default_value_t = 50)]
        points: usize,
        /// Inject a known defect to check that the suites catch it.
        #[arg(long, value_enum)]
        mutate: Option<MutationArg>,
    },
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        Error::CharacteristicViolation { .. } => EXIT_CHARACTERISTIC,
        Error::PrecisionExhausted(_) => EXIT_PRECISION,
        _ => EXIT_OTHER,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let first = text
                    .lines()
                    .next()
                    .unwrap_or("")
                    .trim_start_matches("error: ");
                let _ = writeln!(stderr, "error: kind=usage msg={first}");
            } else {
                let _ = write!(stdout, "{text}");
            }
            return code;
        }
    };
    let result = match cli.global.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new()
            .num_threads(t as usize)
            .build()
        {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::InvalidArgument(format!("thread pool: {e}"))),
        },
        None => execute(&cli),
    };
    match result {
        Ok((out, code)) => {
            let _ = stdout.write_all(out.as_bytes());
            code
        }
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            let _ = writeln!(stderr, "error: kind={} msg={msg}", e.kind());
            exit_code(&e)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String> {
    let mut s = String::new();
    let res = if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut s).map(drop)
    } else {
        std::fs::read_to_string(path).map(|t| s = t)
    };
    res.map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    Ok(s)
}

/// Loads a function file and checks it against any field flags given.
fn load(g: &Global, path: &PathBuf) -> Result<CnCombo> {
    let f = parse_function(&read_input(path)?)?;
    let params = f.params();
    if let Some(b) = g.field {
        if Backend::from(b) != params.backend() {
            return Err(Error::InvalidArgument(format!(
                "--field disagrees with the file header ({params})"
            )));
        }
    }
    if g.p.is_some_and(|p| p != params.p()) {
        return Err(Error::InvalidArgument(format!(
            "--p disagrees with the file header ({params})"
        )));
    }
    if g.prec.is_some_and(|n| n != params.precision()) {
        return Err(Error::InvalidArgument(format!(
            "--prec disagrees with the file header ({params})"
        )));
    }
    Ok(f)
}

fn level_flag(g: &Global, f: &CnCombo) -> usize {
    g.n.unwrap_or(f.level())
}

fn execute(cli: &Cli) -> Result<(String, i32)> {
    let g = &cli.global;
    let bf = BruteForceConfig {
        budget: g.budget,
        seed: g.seed,
        allow_sampling: true,
    };
    match &cli.command {
        Command::Expand { file } => {
            let f = load(g, file)?;
            let n = level_flag(g, &f);
            let t = match g.depth {
                Some(d) => extract_bnj_to_depth(&f, n, d)?,
                None => extract_bnj(&f, n)?,
            };
            Ok((write_table(&t), EXIT_OK))
        }
        Command::Norm { file } => {
            let f = load(g, file)?;
            let n = level_flag(g, &f);
            let mut out = format!("{}\n", norm_n(&f, n)?);
            if let Some(probe) = g.probe {
                let r = norm_cn_bruteforce(&f, n, probe, &bf)?;
                out.push_str(&format!(
                    "bruteforce={} probe={probe} exhaustive={} tuples={}",
                    r.value, r.exhaustive, r.tuples
                ));
                if let Some(s) = r.seed {
                    out.push_str(&format!(" seed={s}"));
                }
                out.push('\n');
            }
            Ok((out, EXIT_OK))
        }
        Command::Lipschitz { file } => {
            let f = load(g, file)?;
            let n = g.n.unwrap_or(f.level().max(1));
            Ok((format!("{}\n", lipschitz_constant(&f, n)?), EXIT_OK))
        }
        Command::Antiderive { file, t_n: use_t } => {
            let f = load(g, file)?;
            let out = if *use_t {
                t_n(&f, g.n.unwrap_or(1))?
            } else {
                antiderive(&f, g.n.unwrap_or(f.level() + 1))?
            };
            Ok((write_function(&out), EXIT_OK))
        }
        Command::Classify { file, kind, s } => {
            let f = load(g, file)?;
            let params = f.params();
            let v = match kind {
                Kind::Increasing => monotone_type(&f, &Scalar::one(params))?,
                Kind::Monotone => {
                    let s = s.as_deref().ok_or_else(|| {
                        Error::InvalidArgument("--kind monotone needs --s".into())
                    })?;
                    monotone_type(&f, &parse_scalar(params, s)?)?
                }
                Kind::Pseudocontraction => is_pseudocontraction(&f)?,
                Kind::Isometry => is_isometry(&f)?,
                Kind::DerivativeZero => is_derivative_zero(&f, g.n.unwrap_or(1))?,
            };
            Ok((format!("{v}\n"), EXIT_OK))
        }
        Command::Estimate { file, x, j } => {
            let f = load(g, file)?;
            let params = f.params();
            let a = parse_rep(params.p(), x)?.to_ring(&params);
            let e = estimate_dj(
                &f,
                *j,
                &a,
                g.depth.unwrap_or(0),
                g.probe.unwrap_or(8),
                g.tol.unwrap_or(8),
            )?;
            Ok((format!("value={} depth={}\n", e.value, e.depth), EXIT_OK))
        }
        Command::Verify {
            trials,
            suites,
            points,
            mutate,
        } => {
            let backend = g.field.map(Backend::from).unwrap_or(Backend::Zp);
            let p = g.p.unwrap_or(3);
            let params = match g.prec {
                Some(n) => FieldParams::new(backend, p, n)?,
                None => FieldParams::with_default_precision(backend, p)?,
            };
            let mut cfg = VerifyConfig::new(params);
            cfg.trials = *trials;
            cfg.seed = g.seed;
            cfg.points = *points;
            if let Some(n) = g.n {
                cfg.max_level = n;
            }
            if let Some(d) = g.depth {
                cfg.max_depth = d;
            }
            if let Some(MutationArg::LowerBasisSign) = mutate {
                cfg.mutation = Mutation::LowerBasisSign;
            }
            if let Some(n) = g.n {
                // An explicit level beyond the characteristic is rejected up front.
                params.check_order(n)?;
            }
            let report = if suites.is_empty() {
                verify::run(&cfg)
            } else {
                let names: Vec<&str> = suites.iter().map(String::as_str).collect();
                verify::run_selected(&cfg, &names)
            };
            let code = if report.all_passed() {
                EXIT_OK
            } else {
                EXIT_SUITE_FAILURE
            };
            Ok((report.to_string(), code))
        }
    }
}
