//! `gnt`: stable and partial stable models of disjunctive programs.
//!
//! Exit status is 0 when a model is found (or a check accepts, a query
//! holds, a formula is valid), 20 when none is, and 1 on error.

mod report;

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Mutex;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gnt_core::bench::{gen_random_d3sat, gen_random_qbf, BenchParams, Scheme};
use gnt_core::disjunctive::{gen_basic, gen_naive, gen_program, support_program, test_program};
use gnt_core::gnt::{solve_program, EarlyTest, GntConfig, Mode};
use gnt_core::oracle::{maximal_elements, Ordering};
use gnt_core::partial::{
    possibility_query, project_sm, total_query, tr2_program, unfold_partiality, QueryLiterals,
};
use gnt_core::qbf::{parse_qbf, qbf_to_program, qbf_valid_oracle, Qbf2E, DEFAULT_QBF_CAP};
use gnt_core::semantics::{is_partial_model, satisfies};
use gnt_core::{
    parse_program_with, Atom, Literal, Oracle, ParseOptions, PartialInterpretation, Program,
};

use report::{RunReport, EXIT_ERROR, EXIT_FOUND, EXIT_NONE};

type Failure = Box<dyn std::error::Error + Send + Sync>;

#[derive(Parser)]
#[command(
    name = "gnt",
    version,
    about = "Stable and partial stable models of disjunctive programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stable models of a program.
    Solve(SolveArgs),
    /// Partial stable models, through the potential-atom translation.
    Partial(PartialArgs),
    /// Print a transformed program.
    Transform(TransformArgs),
    /// Verify a claimed model with the exhaustive oracle.
    Check(CheckArgs),
    /// Is a conjunction of literals true in some (partial) stable model?
    Query(QueryArgs),
    /// Translate, solve or evaluate 2-QBFs.
    Qbf(QbfArgs),
    /// Generate random instances, optionally solving them.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Program file, `-` for stdin.
    file: String,
    /// Accept `__`-prefixed atoms in the input.
    #[arg(long)]
    allow_reserved: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Gnt1,
    Gnt2,
    Naive,
    Brute,
}

#[derive(Clone, Copy, ValueEnum)]
enum EarlyTestArg {
    Off,
    Once,
    Repeat,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum, default_value = "gnt2")]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "once")]
    early_test: EarlyTestArg,
    /// Failed-literal detection before each choice.
    #[arg(long)]
    lookahead: bool,
}

impl SearchArgs {
    fn config(&self, enumerate: bool) -> GntConfig {
        GntConfig {
            mode: match self.mode {
                ModeArg::Gnt1 => Mode::Gnt1,
                ModeArg::Gnt2 => Mode::Gnt2,
                ModeArg::Naive => Mode::Naive,
                ModeArg::Brute => Mode::Brute,
            },
            early_test: match self.early_test {
                EarlyTestArg::Off => EarlyTest::Off,
                EarlyTestArg::Once => EarlyTest::Once,
                EarlyTestArg::Repeat => EarlyTest::Repeat,
            },
            lookahead: self.lookahead,
            enumerate,
        }
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Print every model instead of the first.
    #[arg(long)]
    all: bool,
    /// Append search statistics as `key=value` lines.
    #[arg(long)]
    stats: bool,
    /// One JSON report on stdout.
    #[arg(long)]
    json: bool,
    /// Include wall-clock time in the report.
    #[arg(long)]
    time: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderingArg {
    Truth,
    Knowledge,
}

#[derive(Args)]
struct PartialArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    search: SearchArgs,
    #[command(flatten)]
    output: OutputArgs,
    /// Keep only the maximal models; implies `--all`.
    #[arg(long)]
    maximal: bool,
    #[arg(long, value_enum, default_value = "knowledge")]
    ordering: OrderingArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformKind {
    /// Potential-atom translation.
    Tr,
    /// Translation with `__f` marking non-total models.
    Tr2,
    /// Free choice over the base.
    Gen0,
    /// Choices for disjunctive heads.
    Gen1,
    /// Support rules.
    Supp,
    /// Choices plus support rules.
    Gen,
    /// Minimality tester for `--model`.
    Test,
}

#[derive(Args)]
struct TransformArgs {
    #[arg(value_enum)]
    kind: TransformKind,
    #[command(flatten)]
    input: InputArgs,
    /// Candidate model for `test`, atoms separated by spaces or commas.
    #[arg(long)]
    model: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckMethod {
    /// Minimality with respect to the reduct.
    Reduct,
    /// Unfounded-set characterization.
    Unfounded,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Total model: its true atoms.
    #[arg(long, conflicts_with_all = ["true_atoms", "false_atoms"])]
    model: Option<String>,
    /// Partial model: true atoms; unlisted ones are undefined.
    #[arg(long = "true")]
    true_atoms: Option<String>,
    /// Partial model: false atoms.
    #[arg(long = "false")]
    false_atoms: Option<String>,
    #[arg(long, value_enum, default_value = "reduct")]
    method: CheckMethod,
}

#[derive(Clone, Copy, ValueEnum)]
enum Semantics {
    Partial,
    Total,
}

#[derive(Args)]
struct QueryArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Literals separated by commas, e.g. `a, not b`.
    #[arg(long, default_value = "")]
    query: String,
    #[arg(long, value_enum, default_value = "partial")]
    semantics: Semantics,
    /// Enumerate every model and filter instead of constraining the search.
    #[arg(long)]
    filter: bool,
    #[command(flatten)]
    search: SearchArgs,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct QbfArgs {
    #[command(subcommand)]
    action: QbfAction,
}

#[derive(Subcommand)]
enum QbfAction {
    /// Print the disjunctive program of a formula.
    Translate { file: String },
    /// Decide validity by searching a stable model of the translation.
    Solve {
        file: String,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        stats: bool,
    },
    /// Decide validity by enumeration.
    Eval { file: String },
}

#[derive(Args)]
struct BenchArgs {
    #[command(subcommand)]
    family: BenchFamily,
}

#[derive(Args, Clone, Copy)]
struct BatchArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instances with seeds `seed, seed+1, ...`.
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Solve each instance and report one line per seed.
    #[arg(long)]
    solve: bool,
    /// Worker threads for `--solve`.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Subcommand)]
enum BenchFamily {
    /// Random 3-SAT as disjunctive rules with specified atoms.
    D3sat {
        #[arg(long, default_value_t = 20)]
        atoms: usize,
        #[arg(long, default_value_t = 4.258)]
        ratio: f64,
        #[command(flatten)]
        batch: BatchArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Random 2-QBFs.
    Qbf {
        #[arg(long, default_value_t = 10)]
        vars: usize,
        #[arg(long, default_value = "gw")]
        scheme: String,
        #[command(flatten)]
        batch: BatchArgs,
        #[command(flatten)]
        search: SearchArgs,
    },
}

fn read_input(file: &str) -> Result<String, Failure> {
    if file == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(file).map_err(|e| format!("{file}: {e}").into())
    }
}

fn load(input: &InputArgs) -> Result<Program, Failure> {
    let text = read_input(&input.file)?;
    let options = ParseOptions {
        allow_reserved: input.allow_reserved,
    };
    Ok(parse_program_with(&text, options)?)
}

fn atom(name: &str, allow_reserved: bool) -> Result<Atom, Failure> {
    Ok(if allow_reserved {
        Atom::from_rendered(name)?
    } else {
        Atom::plain(name)?
    })
}

fn atom_list(text: &str, allow_reserved: bool) -> Result<BTreeSet<Atom>, Failure> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|w| !w.is_empty())
        .map(|w| atom(w, allow_reserved))
        .collect()
}

fn parse_query(text: &str, allow_reserved: bool) -> Result<QueryLiterals, Failure> {
    let literals = text
        .split(',')
        .map(str::trim)
        .filter(|w| !w.is_empty())
        .map(|w| match w.strip_prefix("not ") {
            Some(a) => atom(a.trim(), allow_reserved).map(Literal::neg),
            None => atom(w, allow_reserved).map(Literal::pos),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QueryLiterals::new(literals)?)
}

fn require_in_base(p: &Program, atoms: &BTreeSet<Atom>) -> Result<(), Failure> {
    match atoms.iter().find(|a| !p.base().contains(*a)) {
        Some(a) => Err(format!("atom `{a}` is not in the program's base").into()),
        None => Ok(()),
    }
}

/// Text or JSON; JSON reports errors on stdout as well.
fn emit(
    result: Result<RunReport, Failure>,
    output: &OutputArgs,
    none: &str,
) -> Result<u8, Failure> {
    match result {
        Ok(report) => {
            if output.json {
                print!("{}", report.json());
            } else {
                print!("{}", report.text(none, output.stats));
            }
            Ok(report.exit_code())
        }
        Err(e) if output.json => {
            print!("{}", RunReport::error(e.to_string()).json());
            Ok(EXIT_ERROR)
        }
        Err(e) => Err(e),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<u8, Failure> {
    let run = || -> Result<RunReport, Failure> {
        let p = load(&args.input)?;
        let start = Instant::now();
        let solution = solve_program(&p, args.search.config(args.output.all))?;
        let elapsed = args.output.time.then(|| start.elapsed());
        Ok(RunReport::total(&solution.models, solution.stats).with_elapsed(elapsed))
    };
    emit(run(), &args.output, "NO STABLE MODELS")
}

fn cmd_partial(args: &PartialArgs) -> Result<u8, Failure> {
    let run = || -> Result<RunReport, Failure> {
        let p = load(&args.input)?;
        let start = Instant::now();
        let tr = unfold_partiality(&p)?;
        let all = args.output.all || args.maximal;
        let solution = solve_program(&tr, args.search.config(all))?;
        let mut models = solution
            .models
            .iter()
            .map(|n| project_sm(n, p.base()))
            .collect::<Result<BTreeSet<PartialInterpretation>, _>>()?;
        if args.maximal {
            let ordering = match args.ordering {
                OrderingArg::Truth => Ordering::Truth,
                OrderingArg::Knowledge => Ordering::Knowledge,
            };
            models = maximal_elements(&models, ordering);
        }
        let elapsed = args.output.time.then(|| start.elapsed());
        Ok(RunReport::partial(&models, solution.stats).with_elapsed(elapsed))
    };
    emit(run(), &args.output, "NO PARTIAL STABLE MODELS")
}

fn cmd_transform(args: &TransformArgs) -> Result<u8, Failure> {
    let p = load(&args.input)?;
    let out = match args.kind {
        TransformKind::Tr => unfold_partiality(&p)?,
        TransformKind::Tr2 => tr2_program(&p)?,
        TransformKind::Gen0 => gen_naive(&p)?,
        TransformKind::Gen1 => gen_basic(&p)?,
        TransformKind::Supp => support_program(&p)?,
        TransformKind::Gen => gen_program(&p)?,
        TransformKind::Test => {
            let model = args.model.as_deref().ok_or("`test` needs --model")?;
            let m = atom_list(model, args.input.allow_reserved)?;
            require_in_base(&p, &m)?;
            test_program(&p, &m)?
        }
    };
    print!("{out}");
    Ok(EXIT_FOUND)
}

fn verdict(reject: Option<String>) -> u8 {
    match reject {
        None => {
            println!("ACCEPT");
            EXIT_FOUND
        }
        Some(reason) => {
            println!("REJECT: {reason}");
            EXIT_NONE
        }
    }
}

fn cmd_check(args: &CheckArgs) -> Result<u8, Failure> {
    let p = load(&args.input)?;
    let oracle = Oracle::default();
    let reserved = args.input.allow_reserved;
    let unsatisfied = |i: &PartialInterpretation| {
        p.rules().iter().find(|r| !satisfies(i, r)).map(|r| {
            println!("REJECT: rule unsatisfied");
            println!("  {r}");
            EXIT_NONE
        })
    };
    if args.true_atoms.is_none() && args.false_atoms.is_none() {
        let t = atom_list(args.model.as_deref().unwrap_or(""), reserved)?;
        require_in_base(&p, &t)?;
        let m = PartialInterpretation::total(p.base(), &t);
        if let Some(code) = unsatisfied(&m) {
            return Ok(code);
        }
        let reject = match args.method {
            CheckMethod::Reduct => (!oracle.is_stable_model(&p, &m)?)
                .then(|| "not minimal model of reduct".to_string()),
            CheckMethod::Unfounded => {
                (!oracle.is_unfounded_free(&p, &m)?).then(|| "UF-condition violated".to_string())
            }
        };
        return Ok(verdict(reject));
    }
    let t = atom_list(args.true_atoms.as_deref().unwrap_or(""), reserved)?;
    let f = atom_list(args.false_atoms.as_deref().unwrap_or(""), reserved)?;
    require_in_base(&p, &t)?;
    require_in_base(&p, &f)?;
    let m = PartialInterpretation::new(p.base().clone(), t, f)?;
    debug_assert_eq!(unsatisfied(&m).is_some(), !is_partial_model(&m, &p));
    if let Some(code) = unsatisfied(&m) {
        return Ok(code);
    }
    let reject = match args.method {
        CheckMethod::Reduct => (!oracle.is_partial_stable_model(&p, &m)?)
            .then(|| "not minimal partial model of reduct".to_string()),
        CheckMethod::Unfounded => (!oracle.is_partial_stable_by_unfounded(&p, &m)?)
            .then(|| "UF-condition violated".to_string()),
    };
    Ok(verdict(reject))
}

fn cmd_query(args: &QueryArgs) -> Result<u8, Failure> {
    let run = || -> Result<RunReport, Failure> {
        let p = load(&args.input)?;
        let q = parse_query(&args.query, args.input.allow_reserved)?;
        let config = args.search.config(false);
        Ok(match args.semantics {
            Semantics::Partial => {
                let witness = if args.filter {
                    gnt_core::partial::possibility_query_by_filter(&p, &q, config)?
                } else {
                    possibility_query(&p, &q, config)?
                };
                RunReport::partial(&witness, Default::default())
            }
            Semantics::Total => {
                let witness = if args.filter {
                    let all = solve_program(&p, args.search.config(true))?.models;
                    all.into_iter()
                        .find(|m| q.holds_in(&PartialInterpretation::total(p.base(), m)))
                } else {
                    total_query(&p, &q, config)?
                };
                RunReport::total(&witness, Default::default())
            }
        })
    };
    let output = OutputArgs {
        all: false,
        stats: false,
        json: args.json,
        time: false,
    };
    match run() {
        Ok(r) if !args.json => {
            match r.lines.first() {
                Some(w) => println!("YES\n{w}"),
                None => println!("NO"),
            }
            Ok(r.exit_code())
        }
        other => emit(other, &output, "NO"),
    }
}

fn load_qbf(file: &str) -> Result<Qbf2E, Failure> {
    Ok(parse_qbf(&read_input(file)?)?)
}

fn validity(valid: bool) -> u8 {
    println!("{}", if valid { "VALID" } else { "INVALID" });
    if valid {
        EXIT_FOUND
    } else {
        EXIT_NONE
    }
}

fn cmd_qbf(args: &QbfArgs) -> Result<u8, Failure> {
    match &args.action {
        QbfAction::Translate { file } => {
            print!("{}", qbf_to_program(&load_qbf(file)?));
            Ok(EXIT_FOUND)
        }
        QbfAction::Solve {
            file,
            search,
            stats,
        } => {
            let p = qbf_to_program(&load_qbf(file)?);
            let solution = solve_program(&p, search.config(false))?;
            let code = validity(!solution.models.is_empty());
            if *stats {
                let s = solution.stats;
                println!("candidates={}", s.candidates_covered);
                println!("tests={}", s.minimal_tests);
                println!("choices={}", s.choices);
                println!("conflicts={}", s.conflicts);
            }
            Ok(code)
        }
        QbfAction::Eval { file } => Ok(validity(qbf_valid_oracle(
            &load_qbf(file)?,
            DEFAULT_QBF_CAP,
        )?)),
    }
}

/// Runs `job` on seeds `seed..seed+count` over `jobs` threads; lines come
/// back in seed order.
fn batch(
    b: BatchArgs,
    job: impl Fn(u64) -> Result<String, Failure> + Sync,
) -> Result<Vec<String>, Failure> {
    let count = b.count as usize;
    let results: Mutex<Vec<Option<Result<String, String>>>> = Mutex::new(vec![None; count]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..b.jobs.clamp(1, count.max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, AtomicOrdering::Relaxed);
                if i >= count {
                    break;
                }
                let r = job(b.seed + i as u64).map_err(|e| e.to_string());
                results.lock().expect("no poisoned workers")[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .expect("no poisoned workers")
        .into_iter()
        .map(|r| r.expect("every seed ran").map_err(Failure::from))
        .collect()
}

fn mean_of(lines: &[String], key: &str) -> f64 {
    let prefix = format!("{key}=");
    let values: Vec<f64> = lines
        .iter()
        .filter_map(|l| {
            l.split_whitespace()
                .find_map(|w| w.strip_prefix(prefix.as_str()))
                .and_then(|v| v.parse().ok())
        })
        .collect();
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<u8, Failure> {
    let (batch_args, lines) = match &args.family {
        BenchFamily::D3sat {
            atoms,
            ratio,
            batch: b,
            search,
        } => {
            let config = search.config(false);
            let lines = batch(*b, |seed| {
                let p = gen_random_d3sat(*atoms, *ratio, seed)?;
                if !b.solve {
                    return Ok(format!("% seed={seed}\n{p}"));
                }
                let s = solve_program(&p, config)?;
                Ok(format!(
                    "seed={seed} models={} candidates={} tests={} choices={} conflicts={}",
                    if s.models.is_empty() { "no" } else { "yes" },
                    s.stats.candidates_covered,
                    s.stats.minimal_tests,
                    s.stats.choices,
                    s.stats.conflicts
                ))
            })?;
            (*b, lines)
        }
        BenchFamily::Qbf {
            vars,
            scheme,
            batch: b,
            search,
        } => {
            let scheme: Scheme = scheme.parse()?;
            let config = search.config(false);
            let lines = batch(*b, |seed| {
                let params = BenchParams {
                    size: *vars,
                    scheme,
                    seed,
                    ..BenchParams::default()
                };
                let q = gen_random_qbf(&params)?;
                if !b.solve {
                    return Ok(format!("% seed={seed}\n{q}"));
                }
                let s = solve_program(&qbf_to_program(&q), config)?;
                Ok(format!(
                    "seed={seed} valid={} candidates={} tests={} choices={} conflicts={}",
                    if s.models.is_empty() { "no" } else { "yes" },
                    s.stats.candidates_covered,
                    s.stats.minimal_tests,
                    s.stats.choices,
                    s.stats.conflicts
                ))
            })?;
            (*b, lines)
        }
    };
    let mut out = io::stdout().lock();
    for l in &lines {
        if l.ends_with('\n') {
            write!(out, "{l}")?;
        } else {
            writeln!(out, "{l}")?;
        }
    }
    if batch_args.solve {
        for key in ["candidates", "tests", "choices", "conflicts"] {
            writeln!(out, "mean_{key}={:.3}", mean_of(&lines, key))?;
        }
    }
    Ok(EXIT_FOUND)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Partial(a) => cmd_partial(a),
        Command::Transform(a) => cmd_transform(a),
        Command::Check(a) => cmd_check(a),
        Command::Query(a) => cmd_query(a),
        Command::Qbf(a) => cmd_qbf(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_FOUND
            });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
