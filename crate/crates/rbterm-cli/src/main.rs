//! `rbterm` — normalize Rota-Baxter tree terms, generate the closed-form
//! identities, diff them against the rewrite oracle, and check everything in
//! two exact concrete models.
//!
//! Exit codes: 0 success / all checks pass, 1 verification findings,
//! 2 usage error, 3 resource cap exceeded.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rbterm_core::closed_form::{
    generic_identity, restricted_identity, validate, DiscrepancyReport, Mode,
};
use rbterm_core::latex;
use rbterm_core::models::{
    chain_count_formula_report, check_combination_integral, check_combination_sum, derive_seed,
    model_check_horizon, random_polynomial, random_sequence, ChainCountReport,
    DEFAULT_ENUMERATION_CAP,
};
use rbterm_core::{
    normal_form_naive, normal_form_naive_counted, Combination, Error as CoreError, Limits,
    Normalizer, Tree,
};

const EXIT_FINDINGS: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "rbterm", version, about = "Rota-Baxter tree-term kernel")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for grid sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    /// Reject combinations with more than this many terms.
    #[arg(long, global = true)]
    max_terms: Option<usize>,

    /// Seed for pseudo-random model inputs.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Write output to a file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    AsPublished,
    Reconciled,
}

impl From<ModeArg> for Mode {
    fn from(arg: ModeArg) -> Mode {
        match arg {
            ModeArg::AsPublished => Mode::AsPublished,
            ModeArg::Reconciled => Mode::Reconciled,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Integral,
    Sum,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite T(a,b,c) to its normal form.
    Expand {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value_t = 0)]
        c: u32,
        /// Use the exponential replace-until-fixpoint oracle.
        #[arg(long)]
        naive: bool,
    },

    /// Generate the closed-form identity for T(a,b,c) directly.
    ClosedForm {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value_t = 0)]
        c: u32,
        /// λ-free restricted identity instead of the generic one.
        #[arg(long)]
        restricted: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Reconciled)]
        mode: ModeArg,
    },

    /// Diff the closed form against the rewrite oracle over a grid.
    Verify {
        #[arg(long)]
        max_a: u32,
        #[arg(long)]
        max_b: u32,
        /// Validate the restricted identity at λ = 0.
        #[arg(long)]
        restricted: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Reconciled)]
        mode: ModeArg,
    },

    /// Check identities on random inputs in a concrete model.
    ModelCheck {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long)]
        max_a: u32,
        #[arg(long)]
        max_b: u32,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        /// Check a closed-form variant instead of the rewrite oracle.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },

    /// Tabulate chain counts: enumeration vs prefix sums vs the printed
    /// closed form.
    Count {
        #[arg(long)]
        max_a: u32,
        #[arg(long)]
        max_m: u32,
    },

    /// Emit a normalization identity as LaTeX.
    EmitLatex {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long, default_value_t = 0)]
        c: u32,
        /// Use the restricted closed form as the right-hand side.
        #[arg(long, conflicts_with = "generic")]
        restricted: bool,
        /// Use the generic closed form as the right-hand side.
        #[arg(long)]
        generic: bool,
        #[arg(long, value_enum, default_value_t = ModeArg::Reconciled)]
        mode: ModeArg,
        /// Render trees as operator expressions P^c(P^a(x)P^b(y)).
        #[arg(long)]
        operator_notation: bool,
    },

    /// Time naive vs memoized vs closed-form generation along the diagonal.
    Bench {
        #[arg(long)]
        max_ab: u32,
        #[arg(long, default_value_t = 1)]
        repetitions: u32,
    },
}

enum CliError {
    Core(CoreError),
    TermCap { got: usize, limit: usize },
    Io(std::io::Error),
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        CliError::Core(err)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(CoreError::CapExceeded { .. })
            | CliError::Core(CoreError::EnumerationCapExceeded { .. })
            | CliError::TermCap { .. } => EXIT_CAP,
            _ => EXIT_USAGE,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(err) => err.to_string(),
            CliError::TermCap { got, limit } => {
                format!("combination has {got} terms, over the --max-terms limit of {limit}")
            }
            CliError::Io(err) => err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Expand { a, b, c, naive } => {
            let t = Tree::new(*a, *b, *c);
            let limits = Limits::default();
            let comb = if *naive {
                normal_form_naive(t, &limits)?
            } else {
                Normalizer::new(limits).normal_form(t)?
            };
            check_term_cap(cli, &comb)?;
            emit(cli, &render_combination(&comb, cli.format))?;
            Ok(0)
        }

        Command::ClosedForm {
            a,
            b,
            c,
            restricted,
            mode,
        } => {
            let comb = if *restricted {
                restricted_identity(*a, *b, *c)?
            } else {
                generic_identity(*a, *b, *c, (*mode).into())?
            };
            check_term_cap(cli, &comb)?;
            emit(cli, &render_combination(&comb, cli.format))?;
            Ok(0)
        }

        Command::Verify {
            max_a,
            max_b,
            restricted,
            mode,
        } => {
            let engine = Normalizer::default();
            let report = validate(
                &engine,
                *max_a,
                *max_b,
                (*mode).into(),
                *restricted,
                cli.jobs,
            )?;
            emit(cli, &render_report(&report, cli.format))?;
            Ok(if report.is_empty() { 0 } else { EXIT_FINDINGS })
        }

        Command::ModelCheck {
            model,
            max_a,
            max_b,
            trials,
            mode,
        } => model_check(cli, *model, *max_a, *max_b, *trials, mode.map(Into::into)),

        Command::Count { max_a, max_m } => {
            let report =
                chain_count_formula_report(*max_a, *max_m, DEFAULT_ENUMERATION_CAP)?;
            emit(cli, &render_count(&report, cli.format))?;
            Ok(0)
        }

        Command::EmitLatex {
            a,
            b,
            c,
            restricted,
            generic,
            mode,
            operator_notation,
        } => {
            let t = Tree::new(*a, *b, *c);
            let comb = if *restricted {
                restricted_identity(*a, *b, *c)?
            } else if *generic {
                generic_identity(*a, *b, *c, (*mode).into())?
            } else {
                Normalizer::default().normal_form(t)?
            };
            check_term_cap(cli, &comb)?;
            emit(cli, &latex::identity_latex(t, &comb, *operator_notation))?;
            Ok(0)
        }

        Command::Bench {
            max_ab,
            repetitions,
        } => bench(cli, *max_ab, (*repetitions).max(1)),
    }
}

fn check_term_cap(cli: &Cli, comb: &Combination) -> Result<(), CliError> {
    if let Some(limit) = cli.max_terms {
        if comb.len() > limit {
            return Err(CliError::TermCap {
                got: comb.len(),
                limit,
            });
        }
    }
    Ok(())
}

fn emit(cli: &Cli, body: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => fs::write(path, format!("{body}\n"))?,
        None => println!("{body}"),
    }
    Ok(())
}

fn render_combination(comb: &Combination, format: Format) -> String {
    match format {
        Format::Text => comb.to_string(),
        Format::Json => comb.to_canonical_json(),
        Format::Latex => latex::combination_latex(comb, false),
    }
}

// ---------------------------------------------------------------------------
// verify rendering
// ---------------------------------------------------------------------------

fn render_report(report: &DiscrepancyReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => {
            let mut out = format!(
                "mode={} grid={}x{} cells={} mismatching-cells={} mismatches={}",
                report.mode_label(),
                report.a_max,
                report.b_max,
                report.cells_checked,
                report.mismatching_cells(),
                report.mismatches.len()
            );
            for m in &report.mismatches {
                write!(
                    out,
                    "\na={} b={} {}: expected {}, got {} [{}]",
                    m.a, m.b, m.tree, m.expected, m.got, m.sum
                )
                .unwrap();
            }
            out
        }
        Format::Latex => {
            let mut out = String::from("\\begin{tabular}{rrlllc}\n");
            out.push_str("a & b & tree & expected & got & sum \\\\\n");
            for m in &report.mismatches {
                writeln!(
                    out,
                    "{} & {} & {} & {} & {} & {} \\\\",
                    m.a,
                    m.b,
                    latex::tree_symbol(m.tree),
                    latex_poly(&m.expected),
                    latex_poly(&m.got),
                    m.sum
                )
                .unwrap();
            }
            out.push_str("\\end{tabular}");
            out
        }
    }
}

fn latex_poly(p: &rbterm_core::LambdaPoly) -> String {
    latex::combination_latex(
        &Combination::singleton(Tree::new(0, 0, 0), p.clone()),
        false,
    )
    .replace(" T(0,0,0)", "")
    .replace("T(0,0,0)", "1")
}

// ---------------------------------------------------------------------------
// model-check
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ModelFailure {
    a: u32,
    b: u32,
    trial: u32,
}

#[derive(Serialize)]
struct ModelCheckReport {
    model: &'static str,
    grid: [u32; 2],
    trials: u32,
    seed: u64,
    source: &'static str,
    checks: u32,
    failures: Vec<ModelFailure>,
}

fn model_check(
    cli: &Cli,
    model: ModelArg,
    max_a: u32,
    max_b: u32,
    trials: u32,
    mode: Option<Mode>,
) -> Result<u8, CliError> {
    let engine = Normalizer::default();
    // warm the table so parallel workers only read
    engine.normal_form(Tree::new(max_a, max_b, 0))?;
    let cells: Vec<(u32, u32)> = (1..=max_a)
        .flat_map(|a| (1..=max_b).map(move |b| (a, b)))
        .collect();
    let results = ordered_parallel_map(cli.jobs, &cells, |&(a, b)| -> Result<
        Vec<ModelFailure>,
        CoreError,
    > {
        let lhs = Tree::new(a, b, 0);
        let rhs = match mode {
            None => engine.normal_form(lhs)?,
            Some(m) => generic_identity(a, b, 0, m)?,
        };
        let mut failures = Vec::new();
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cli.seed, a, b, trial));
            let ok = match model {
                ModelArg::Integral => {
                    let f = random_polynomial(&mut rng, 4, 9);
                    let g = random_polynomial(&mut rng, 4, 9);
                    check_combination_integral(lhs, &rhs, &f, &g)
                }
                ModelArg::Sum => {
                    let horizon = model_check_horizon(a, b);
                    let f = random_sequence(&mut rng, horizon, 9);
                    let g = random_sequence(&mut rng, horizon, 9);
                    check_combination_sum(lhs, &rhs, &f, &g)?
                }
            };
            if !ok {
                failures.push(ModelFailure { a, b, trial });
            }
        }
        Ok(failures)
    });

    let mut failures = Vec::new();
    for cell in results {
        failures.extend(cell?);
    }
    let report = ModelCheckReport {
        model: match model {
            ModelArg::Integral => "integral",
            ModelArg::Sum => "sum",
        },
        grid: [max_a, max_b],
        trials,
        seed: cli.seed,
        source: match mode {
            None => "oracle",
            Some(Mode::Reconciled) => "reconciled",
            Some(Mode::AsPublished) => "as-published",
        },
        checks: max_a * max_b * trials,
        failures,
    };
    let ok = report.failures.is_empty();
    emit(cli, &render_model_check(&report, cli.format))?;
    Ok(if ok { 0 } else { EXIT_FINDINGS })
}

fn render_model_check(report: &ModelCheckReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(report).expect("report serialization"),
        Format::Text => {
            let mut out = format!(
                "model={} grid={}x{} trials={} seed={} source={} checks={} failures={}",
                report.model,
                report.grid[0],
                report.grid[1],
                report.trials,
                report.seed,
                report.source,
                report.checks,
                report.failures.len()
            );
            for f in &report.failures {
                write!(out, "\nFAIL a={} b={} trial={}", f.a, f.b, f.trial).unwrap();
            }
            out
        }
        Format::Latex => {
            let mut out = String::from("\\begin{tabular}{rrr}\na & b & trial \\\\\n");
            for f in &report.failures {
                writeln!(out, "{} & {} & {} \\\\", f.a, f.b, f.trial).unwrap();
            }
            out.push_str("\\end{tabular}");
            out
        }
    }
}

// ---------------------------------------------------------------------------
// count
// ---------------------------------------------------------------------------

fn render_count(report: &ChainCountReport, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Text => {
            let mut out = String::from(
                "a  m  enumeration  prefix-sum  closed-form  enum=prefix  enum=closed",
            );
            for r in &report.rows {
                write!(
                    out,
                    "\n{:<2} {:<2} {:<12} {:<11} {:<12} {:<11} {}",
                    r.a,
                    r.m,
                    r.enumeration,
                    r.prefix_sum,
                    r.closed_form,
                    if r.enumeration_eq_prefix { "yes" } else { "NO" },
                    if r.enumeration_eq_closed { "yes" } else { "NO" },
                )
                .unwrap();
            }
            out
        }
        Format::Latex => {
            let mut out =
                String::from("\\begin{tabular}{rrrrrcc}\na & m & enum & prefix & closed & e=p & e=c \\\\\n");
            for r in &report.rows {
                writeln!(
                    out,
                    "{} & {} & {} & {} & {} & {} & {} \\\\",
                    r.a,
                    r.m,
                    r.enumeration,
                    r.prefix_sum,
                    r.closed_form,
                    r.enumeration_eq_prefix,
                    r.enumeration_eq_closed
                )
                .unwrap();
            }
            out.push_str("\\end{tabular}");
            out
        }
    }
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct BenchRow {
    ab: u32,
    terms: usize,
    agree: bool,
    memo_ms: f64,
    closed_ms: f64,
    naive_ms: Option<f64>,
    naive_events: Option<u64>,
}

fn bench(cli: &Cli, max_ab: u32, repetitions: u32) -> Result<u8, CliError> {
    let limits = Limits::default();
    let mut rows = Vec::new();
    for k in 1..=max_ab {
        let t = Tree::new(k, k, 0);

        let mut memo_best = Duration::MAX;
        let mut nf = Combination::zero();
        for _ in 0..repetitions {
            let engine = Normalizer::new(limits);
            let started = Instant::now();
            nf = engine.normal_form(t)?;
            memo_best = memo_best.min(started.elapsed());
        }

        let mut closed_best = Duration::MAX;
        let mut closed = Combination::zero();
        for _ in 0..repetitions {
            let started = Instant::now();
            closed = generic_identity(k, k, 0, Mode::Reconciled)?;
            closed_best = closed_best.min(started.elapsed());
        }

        let mut naive_ms = None;
        let mut naive_events = None;
        if 2 * k as u64 <= limits.max_naive_ab as u64 {
            let mut naive_best = Duration::MAX;
            for _ in 0..repetitions {
                let started = Instant::now();
                let (naive, events) = normal_form_naive_counted(t, &limits)?;
                naive_best = naive_best.min(started.elapsed());
                naive_events = Some(events);
                if naive != nf {
                    // should be unreachable; surface it rather than hide it
                    eprintln!("warning: naive and memoized outputs differ at a=b={k}");
                }
            }
            naive_ms = Some(naive_best.as_secs_f64() * 1e3);
        }

        rows.push(BenchRow {
            ab: k,
            terms: nf.len(),
            agree: nf == closed,
            memo_ms: memo_best.as_secs_f64() * 1e3,
            closed_ms: closed_best.as_secs_f64() * 1e3,
            naive_ms,
            naive_events,
        });
    }

    let body = match cli.format {
        Format::Json => serde_json::to_string(&rows).expect("bench serialization"),
        Format::Text | Format::Latex => {
            let mut out = String::from(
                "a=b  terms   agree  memo-ms     closed-ms   naive-ms    naive-events",
            );
            for r in &rows {
                write!(
                    out,
                    "\n{:<4} {:<7} {:<6} {:<11.3} {:<11.3} {:<11} {}",
                    r.ab,
                    r.terms,
                    r.agree,
                    r.memo_ms,
                    r.closed_ms,
                    r.naive_ms
                        .map(|v| format!("{v:.3}"))
                        .unwrap_or_else(|| "-".into()),
                    r.naive_events
                        .map(|v| v.to_string())
                        .unwrap_or_else(|| "-".into()),
                )
                .unwrap();
            }
            out
        }
    };
    emit(cli, &body)?;
    Ok(0)
}

// ---------------------------------------------------------------------------
// deterministic fan-out
// ---------------------------------------------------------------------------

/// Apply `f` to every item, optionally on `jobs` threads, returning results
/// in input order regardless of scheduling.
fn ordered_parallel_map<I, T, F>(jobs: usize, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync,
{
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs <= 1 {
        return items.iter().map(&f).collect();
    }
    let mut out: Vec<Option<T>> = (0..items.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                scope.spawn(move || {
                    items
                        .iter()
                        .enumerate()
                        .skip(w)
                        .step_by(jobs)
                        .map(|(idx, item)| (idx, f(item)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for handle in handles {
            for (idx, value) in handle.join().expect("worker panicked") {
                out[idx] = Some(value);
            }
        }
    });
    out.into_iter().map(|v| v.expect("index covered")).collect()
}
