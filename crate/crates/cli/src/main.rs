//! `nleibniz`: build simple Filippov algebras, check the Filippov identity,
//! compute first cohomology and reproduce the rigidity theorems.
//!
//! JSON goes to `--output` (or stdout for the commands that produce a single
//! object); the human-readable summary goes to stdout. Exit status is 0 on
//! success, 1 when a check or theorem fails, 2 on usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use nleibniz::dual::TracelessVerdict;
use nleibniz::linalg::DEFAULT_PRIMES;
use nleibniz::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "nleibniz", version, about = "Exact cohomology of n-Leibniz and Filippov algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure constants of the simple Filippov algebra with a given signature.
    Simple {
        #[arg(long)]
        n: usize,
        /// Signature as a string of signs, e.g. "+++-" (length n+1).
        #[arg(long, allow_hyphen_values = true)]
        signature: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the Filippov identity.
    CheckFi {
        #[command(flatten)]
        algebra: AlgebraArgs,
    },
    /// First cohomology of the deformation or central-extension problem.
    Cohomology {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value = "deformation")]
        problem: Problem,
        #[arg(long, default_value = "first-skew")]
        class: SymmetryClass,
        /// "auto", "rational", "mod:<p>" or "two-prime".
        #[arg(long, default_value = "auto")]
        field: String,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Include wall-clock times in the JSON.
        #[arg(long)]
        timing: bool,
    },
    /// Run the case matrix of a theorem and compare with the expected dimensions.
    Reproduce {
        /// 1, 2 or whitehead.
        #[arg(long)]
        theorem: Theorem,
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        /// Run every signature vector instead of the Euclidean one and one mixed one.
        #[arg(long)]
        all_signatures: bool,
        #[arg(long, default_value = "auto")]
        field: String,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        timing: bool,
    },
    /// Levi-Civita dual of a first-skew one-cochain.
    Dualize {
        /// Cochain JSON file.
        #[arg(long)]
        cochain: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Trace identities, trace removal and classification of a one-cocycle.
    TraceReduce {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// Cochain JSON file (first-skew, degree 1).
        #[arg(long)]
        cochain: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct AlgebraArgs {
    /// Algebra JSON file.
    #[arg(long, conflicts_with_all = ["n", "signature"])]
    algebra: Option<PathBuf>,
    /// Arity of a builtin simple Filippov algebra.
    #[arg(long, requires = "signature")]
    n: Option<usize>,
    #[arg(long, requires = "n", allow_hyphen_values = true)]
    signature: Option<String>,
}

enum Failure {
    /// Bad arguments or input files.
    Usage(anyhow::Error),
    /// A check or theorem did not hold.
    Check(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(Error::TheoremViolation(_) | Error::NotCocycle(_)) => Failure::Check(format!("{e:#}")),
            _ => Failure::Usage(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Simple { n, signature, output } => cmd_simple(n, &signature, output.as_deref()),
        Command::CheckFi { algebra } => cmd_check_fi(&algebra),
        Command::Cohomology {
            algebra,
            problem,
            class,
            field,
            output,
            timing,
        } => cmd_cohomology(&algebra, problem, class, &field, output.as_deref(), timing),
        Command::Reproduce {
            theorem,
            max_n,
            all_signatures,
            field,
            output,
            timing,
        } => cmd_reproduce(theorem, max_n, all_signatures, &field, output.as_deref(), timing),
        Command::Dualize { cochain, output } => cmd_dualize(&cochain, output.as_deref()),
        Command::TraceReduce { algebra, cochain, output } => cmd_trace_reduce(&algebra, &cochain, output.as_deref()),
    }
}

fn builtin(n: usize, signature: &str) -> anyhow::Result<NLeibnizAlgebra> {
    if n < 2 {
        return Err(anyhow!("n must be at least 2"));
    }
    let eps: SignatureVector = signature.parse()?;
    Ok(simple_filippov(n, &eps)?)
}

fn load_algebra(args: &AlgebraArgs) -> anyhow::Result<NLeibnizAlgebra> {
    match (&args.algebra, args.n, &args.signature) {
        (Some(path), _, _) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(NLeibnizAlgebra::from_json(&text).with_context(|| format!("parsing {}", path.display()))?)
        }
        (None, Some(n), Some(sig)) => builtin(n, sig),
        _ => Err(anyhow!("give --algebra <file> or --n <n> --signature <signs>")),
    }
}

fn load_cochain(path: &Path) -> anyhow::Result<Cochain> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Cochain::from_json(&text).with_context(|| format!("parsing {}", path.display()))?)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Writes JSON to `output`, or to stdout when `fallback_stdout` is set.
fn emit(v: &Value, output: Option<&Path>, fallback_stdout: bool) -> anyhow::Result<()> {
    match output {
        Some(path) => fs::write(path, pretty(v)).with_context(|| format!("writing {}", path.display())),
        None if fallback_stdout => {
            print!("{}", pretty(v));
            Ok(())
        }
        None => Ok(()),
    }
}

fn parse_field(s: &str) -> anyhow::Result<FieldPolicy> {
    Ok(match s {
        "auto" => FieldPolicy::Auto,
        "two-prime" => FieldPolicy::TwoPrime(DEFAULT_PRIMES.0, DEFAULT_PRIMES.1),
        other => FieldPolicy::Fixed(other.parse()?),
    })
}

fn threads() -> anyhow::Result<Option<usize>> {
    match std::env::var("NLEIBNIZ_THREADS") {
        Ok(s) => {
            let t: usize = s.trim().parse().with_context(|| format!("NLEIBNIZ_THREADS={s:?}"))?;
            Ok(Some(t.max(1)))
        }
        Err(_) => Ok(None),
    }
}

fn cmd_simple(n: usize, signature: &str, output: Option<&Path>) -> Outcome {
    let alg = builtin(n, signature)?;
    emit(&alg.to_json_value(), output, true)?;
    if let Some(path) = output {
        println!("{} ({} nonzero constants) -> {}", alg.label(), alg.entries().count(), path.display());
    }
    Ok(())
}

fn cmd_check_fi(args: &AlgebraArgs) -> Outcome {
    let alg = load_algebra(args)?;
    let r = fi_residual(&alg);
    match r.first_nonzero() {
        None => {
            println!("FI: PASS");
            Ok(())
        }
        Some((idx, v)) => {
            let m = alg.n() - 1;
            let one = |s: &[usize]| s.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
            println!(
                "FI: FAIL at a=({}) b=({}) c={}: residual {v} ({} violating tuples)",
                one(&idx[..m]),
                one(&idx[m..idx.len() - 1]),
                idx[idx.len() - 1] + 1,
                r.nnz()
            );
            Err(Failure::Check("Filippov identity fails".into()))
        }
    }
}

fn report_table(r: &CohomologyReport) -> String {
    format!(
        "algebra  {}\nproblem  {}\nclass    {}\nfield    {}\nC1       {}\nZ1       {}\nB1       {}\nH1       {}\n",
        r.algebra, r.problem, r.class, r.field, r.dim_cochains, r.dim_cocycles, r.dim_coboundaries, r.dim_h1
    )
}

fn cmd_cohomology(
    args: &AlgebraArgs,
    problem: Problem,
    class: SymmetryClass,
    field: &str,
    output: Option<&Path>,
    timing: bool,
) -> Outcome {
    let alg = load_algebra(args)?;
    let policy = match parse_field(field)? {
        FieldPolicy::Auto if alg.dim() <= 5 => FieldPolicy::Fixed(FieldSpec::Rational),
        FieldPolicy::Auto => FieldPolicy::TwoPrime(DEFAULT_PRIMES.0, DEFAULT_PRIMES.1),
        p => p,
    };
    match policy {
        FieldPolicy::TwoPrime(p, q) => {
            let two = h1_two_prime(&alg, problem, class, p, q)?;
            let [a, b] = &two.reports;
            print!("{}", report_table(a));
            println!("mod {q}: Z1 {} B1 {} H1 {}", b.dim_cocycles, b.dim_coboundaries, b.dim_h1);
            let doc = json!({
                "reports": [a.to_json_value(timing), b.to_json_value(timing)],
                "agree": two.agree(),
            });
            emit(&doc, output, false)?;
            if !two.agree() {
                return Err(Failure::Check(format!("dimensions differ between mod {p} and mod {q}")));
            }
        }
        FieldPolicy::Fixed(k) => {
            let r = h1(&alg, problem, class, k)?;
            print!("{}", report_table(&r));
            emit(&r.to_json_value(timing), output, false)?;
        }
        FieldPolicy::Auto => unreachable!("resolved above"),
    }
    Ok(())
}

fn cmd_reproduce(
    theorem: Theorem,
    max_n: usize,
    all_signatures: bool,
    field: &str,
    output: Option<&Path>,
    timing: bool,
) -> Outcome {
    let policy = parse_field(field)?;
    let report = reproduce(theorem, max_n, all_signatures, policy, threads()?)?;
    print!("{}", report.table(timing));
    emit(&report.to_json_value(timing), output, false)?;
    if report.pass() {
        Ok(())
    } else {
        Err(Failure::Check(format!("theorem {theorem}: mismatching cases")))
    }
}

fn cmd_dualize(cochain: &Path, output: Option<&Path>) -> Outcome {
    let c = load_cochain(cochain)?;
    emit(&dualize(&c)?.to_json_value(), output, true)?;
    if let Some(path) = output {
        println!("dual of {} -> {}", cochain.display(), path.display());
    }
    Ok(())
}

fn matrix_json(m: &[Vec<Scalar>]) -> Value {
    m.iter()
        .map(|row| row.iter().map(|x| Value::from(x.to_string())).collect::<Vec<_>>())
        .collect()
}

fn cmd_trace_reduce(args: &AlgebraArgs, cochain: &Path, output: Option<&Path>) -> Outcome {
    let alg = load_algebra(args)?;
    let c = load_cochain(cochain)?;
    let dc = dualize(&c)?;
    let doc = match c.valued() {
        Valued::Algebra => {
            let traces = trace_identities(&alg, &dc)?;
            let r = trace_reduce(&alg, &dc)?;
            let verdict = classify_traceless(&alg, &r.tilde)?;
            let verdict_json = match &verdict {
                TracelessVerdict::Zero => {
                    println!("traceless part: 0 (cocycle is trivial)");
                    json!({ "kind": "zero" })
                }
                TracelessVerdict::Exceptional(l) if l.is_zero() => {
                    println!("traceless part: 0 * eps_d eps_abcd (cocycle is trivial)");
                    json!({ "kind": "exceptional", "lambda": "0" })
                }
                TracelessVerdict::Exceptional(l) => {
                    println!("traceless part: {l} * eps_d eps_abcd (nontrivial)");
                    json!({ "kind": "exceptional", "lambda": l.to_string() })
                }
            };
            println!("trace identities: hold; B symmetric: {}", traces.b_is_symmetric());
            json!({
                "problem": "deformation",
                "b": matrix_json(&traces.b),
                "tilde": r.tilde.to_json_value(),
                "removed": r.removed.to_json_value(),
                "generator": r.generator.to_json_value(),
                "verdict": verdict_json,
            })
        }
        Valued::Scalar => {
            let r = central_trace_reduce(&alg, &dc)?;
            println!("reduced central cocycle: 0 (cocycle is trivial)");
            json!({
                "problem": "central",
                "tilde": r.tilde.to_json_value(),
                "generator": r.generator.to_json_value(),
            })
        }
    };
    emit(&doc, output, true)?;
    Ok(())
}
