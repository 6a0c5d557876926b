use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use careful_sync::automaton::{run_word, sync_state, total_merging_letter, validate, Pfa, Run, Word};
use careful_sync::errata::{errata_report, ErrataOptions};
use careful_sync::families::{gen_cerny, gen_family, FamilySpec};
use careful_sync::io::{export_dot, parse_automaton, serialize_document, AutomatonDocument};
use careful_sync::search::{forced_path_check, shortest_careful_word, SearchOptions, DEFAULT_MAX_SUBSETS};
use careful_sync::sweep::{expand_spec_ranges, rows_to_csv, run_sweep, SweepOptions};
use careful_sync::transform::{is_class_preserving, lift_word, lifted_length, sigma_classes, transform};
use careful_sync::words::{
    cerny_alt_word, cerny_classic_word, counting_word, family_word, min_alt_repetitions,
};
use careful_sync::Error;

/// Writes to stdout, exiting quietly when the reader has gone away.
macro_rules! say {
    (no_newline, $($arg:tt)*) => {
        if write!(std::io::stdout().lock(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    };
    ($($arg:tt)*) => {
        if writeln!(std::io::stdout().lock(), $($arg)*).is_err() {
            std::process::exit(0);
        }
    };
}

const EXIT_INVALID: u8 = 2;
const EXIT_NOT_SYNC: u8 = 3;
const EXIT_CAP: u8 = 4;

/// Build, solve and check partial automata with long carefully synchronizing words.
#[derive(Parser, Debug)]
#[command(name = "carefulsync", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the automaton document for a family instance
    Gen(GenArgs),
    /// Find a shortest carefully synchronizing word by exact search
    Solve(SolveArgs),
    /// Check whether a word carefully synchronizes an automaton
    Verify(VerifyArgs),
    /// Run a structural check battery on an automaton
    Check(CheckArgs),
    /// Print one of the constructed words
    Words(WordsArgs),
    /// Lift an automaton into its d-digit grid automaton
    Transform(TransformArgs),
    /// Measure many family instances and emit CSV
    Sweep(SweepArgs),
    /// Render an automaton as Graphviz DOT
    ExportDot(ExportArgs),
    /// Re-check published claims and report discrepancies
    Errata(ErrataArgs),
}

#[derive(Args, Debug)]
struct Source {
    /// Family spec (e.g. `grid:d=3,k=2`) or path to an automaton document
    #[arg(long = "family", value_name = "SPEC|PATH")]
    family: String,
    /// Override the seed of a `random:` family spec
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct Budget {
    /// Maximum number of subsets the exact search may discover
    #[arg(long, default_value_t = DEFAULT_MAX_SUBSETS)]
    max_subsets: usize,
    /// Acknowledge the memory cost of raising --max-subsets above the default
    #[arg(long)]
    ack_memory: bool,
}

impl Budget {
    fn options(&self) -> Result<SearchOptions, Error> {
        if self.max_subsets > DEFAULT_MAX_SUBSETS && !self.ack_memory {
            return Err(Error::Parameter(format!(
                "--max-subsets above {DEFAULT_MAX_SUBSETS} needs --ack-memory"
            )));
        }
        Ok(SearchOptions {
            max_subsets: self.max_subsets,
            ..Default::default()
        })
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    source: Source,
    #[command(flatten)]
    budget: Budget,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    source: Source,
    /// Word as letter names, `x^N` for repetition
    #[arg(long)]
    word: String,
    /// Print every intermediate subset
    #[arg(long)]
    trace: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Battery {
    Facts,
    ForcedPath,
    Sigma,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum, default_value = "facts")]
    battery: Battery,
    /// Word walked by the forced-path battery (defaults to a shortest word)
    #[arg(long)]
    word: Option<String>,
    /// Letter whose kernel the sigma battery partitions by
    #[arg(long)]
    letter: Option<String>,
    #[command(flatten)]
    budget: Budget,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum WordKind {
    /// Odometer word over --classes with --d digits
    Counting,
    /// Synchronizing word of grid:d,k
    Grid,
    /// Classic reset word of cerny:n
    Cerny,
    /// Alternative word of cerny:n (see --r-override)
    CernyAlt,
    /// Smallest working repetition count for the alternative word
    Repair,
}

#[derive(Args, Debug)]
struct WordsArgs {
    #[arg(value_enum)]
    kind: WordKind,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated class indices for the counting word
    #[arg(long, value_delimiter = ',')]
    classes: Vec<usize>,
    /// Repetition count for the alternative Černý word
    #[arg(long)]
    r_override: Option<usize>,
    /// Largest repetition count tried by `repair`
    #[arg(long, default_value_t = 20)]
    r_max: usize,
    /// Refuse to build words longer than this
    #[arg(long, default_value_t = 1 << 24)]
    max_wordlen: u128,
    /// Print letters one by one instead of run-length form
    #[arg(long)]
    expand: bool,
}

#[derive(Args, Debug)]
struct TransformArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    d: usize,
    /// Base word to lift; prints the lifted word instead of the automaton
    #[arg(long)]
    word: Option<String>,
    #[arg(long, default_value_t = 1 << 24)]
    max_wordlen: u128,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Family specs; numeric parameters accept ranges like `k=2..6`
    #[arg(long = "family", value_name = "SPEC", required = true)]
    families: Vec<String>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[command(flatten)]
    budget: Budget,
    /// Append a wall-time column (makes output non-reproducible)
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ErrataArgs {
    #[command(flatten)]
    budget: Budget,
}

/// A failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotSynchronizing { .. } | Error::BaseWordInvalid => EXIT_NOT_SYNC,
            Error::CapExceeded { .. } | Error::BudgetExceeded { .. } | Error::TooManyStates(_) => EXIT_CAP,
            _ => EXIT_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_INVALID,
        message: format!("{}: {e}", path.display()),
    }
}

type CliResult = Result<(), Failure>;

fn load(source: &Source) -> Result<(Pfa, Option<String>), Failure> {
    let path = Path::new(&source.family);
    if path.is_file() {
        let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
        return Ok((parse_automaton(&text)?, None));
    }
    let mut spec: FamilySpec = source.family.parse()?;
    if let (FamilySpec::Random { seed, .. }, Some(s)) = (&mut spec, source.seed) {
        *seed = s;
    }
    Ok((spec.generate()?, Some(spec.to_string())))
}

fn emit(out: Option<&Path>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_failure(path, e)),
        None => {
            say!(no_newline, "{text}");
            Ok(())
        }
    }
}

fn render(word: &Word, pfa: &Pfa, expand: bool) -> String {
    if expand {
        word.render(pfa)
    } else {
        word.render_compact(pfa)
    }
}

fn gen(args: &GenArgs) -> CliResult {
    let (pfa, spec) = load(&args.source)?;
    let mut doc = AutomatonDocument::from_pfa(&pfa);
    if let Some(spec) = spec {
        doc = doc.with_metadata(spec);
    }
    emit(args.out.as_deref(), &serialize_document(&doc))
}

fn solve(args: &SolveArgs) -> CliResult {
    let (pfa, _) = load(&args.source)?;
    let res = shortest_careful_word(&pfa, &args.budget.options()?)?;
    say!("length: {}", res.length);
    say!("word: {}", res.word.render_compact(&pfa));
    say!("state: {}", pfa.state_label(res.synchronized_state));
    say!("visited_subsets: {}", res.visited_subsets);
    Ok(())
}

fn verify(args: &VerifyArgs) -> CliResult {
    let (pfa, _) = load(&args.source)?;
    let word = Word::parse(&pfa, &args.word)?;
    let run = run_word(&pfa, &pfa.full_set(), &word)?;
    say!("length: {}", word.len());
    match &run {
        Run::UndefinedAt(p) => {
            say!("result: undefined at position {p} (letter {})", pfa.letter_name(word.letters()[*p]));
            return Err(Failure {
                code: EXIT_NOT_SYNC,
                message: "word is not careful".into(),
            });
        }
        Run::Completed { trace } => {
            if args.trace {
                for (i, set) in trace.iter().enumerate() {
                    say!("  {i:>4} {set}");
                }
            }
            let end = trace.last().expect("non-empty trace");
            match end.singleton_state() {
                Some(q) => say!("result: synchronizes to {}", pfa.state_label(q)),
                None => {
                    say!("result: ends in {end}, not a singleton");
                    return Err(Failure {
                        code: EXIT_NOT_SYNC,
                        message: "word does not synchronize".into(),
                    });
                }
            }
        }
    }
    Ok(())
}

fn letters_list(pfa: &Pfa, letters: &[usize]) -> String {
    if letters.is_empty() {
        return "-".into();
    }
    letters.iter().map(|&l| pfa.letter_name(l)).collect::<Vec<_>>().join(",")
}

fn check(args: &CheckArgs) -> CliResult {
    let (pfa, _) = load(&args.source)?;
    match args.battery {
        Battery::Facts => {
            let diags = validate(&pfa);
            say!("states: {}", pfa.state_count());
            say!("letters: {}", pfa.letters().join(","));
            say!("valid: {}", diags.is_empty());
            for d in &diags {
                say!("  {d}");
            }
            say!("total: {}", pfa.is_total());
            let total: Vec<usize> = (0..pfa.letter_count()).filter(|&l| pfa.is_total_letter(l)).collect();
            say!("total letters: {}", letters_list(&pfa, &total));
            match total_merging_letter(&pfa) {
                Some(l) => say!("total merging letter: {}", pfa.letter_name(l)),
                None if pfa.state_count() > 1 => {
                    say!("total merging letter: none (cannot be carefully synchronizing)")
                }
                None => say!("total merging letter: none"),
            }
        }
        Battery::ForcedPath => {
            let word = match &args.word {
                Some(w) => Word::parse(&pfa, w)?,
                None => shortest_careful_word(&pfa, &args.budget.options()?)?.word,
            };
            let report = forced_path_check(&pfa, &word, &pfa.full_set())?;
            for (i, step) in report.steps.iter().enumerate() {
                say!(
                    "{i:>4} {} take {} new [{}] revisit [{}] undefined [{}]",
                    step.subset,
                    pfa.letter_name(step.taken),
                    letters_list(&pfa, &step.new_letters),
                    letters_list(&pfa, &step.revisiting),
                    letters_list(&pfa, &step.undefined),
                );
            }
            say!("forced path: {}", if report.pass { "PASS" } else { "FAIL" });
        }
        Battery::Sigma => {
            let letter = match &args.letter {
                Some(name) => pfa.letter_index(name).ok_or_else(|| Error::UnknownLetter(name.clone()))?,
                None => total_merging_letter(&pfa).or_else(|| (0..pfa.letter_count()).find(|&l| pfa.is_total_letter(l))).ok_or_else(|| Error::Parameter("no total letter".into()))?,
            };
            let p = sigma_classes(&pfa, letter)?;
            say!("kernel of {}: {} classes", pfa.letter_name(letter), p.classes.len());
            for (i, class) in p.classes.iter().enumerate() {
                say!("  class {i}: {class}");
            }
            for l in 0..pfa.letter_count() {
                say!("  {} preserving: {}", pfa.letter_name(l), is_class_preserving(&pfa, l, &p));
            }
        }
    }
    Ok(())
}

fn need(v: Option<usize>, flag: &str) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure {
        code: EXIT_INVALID,
        message: format!("--{flag} is required for this word"),
    })
}

fn check_budget(length: u128, budget: u128) -> Result<(), Failure> {
    if length > budget {
        return Err(Error::BudgetExceeded { needed: length, budget }.into());
    }
    Ok(())
}

fn words(args: &WordsArgs) -> CliResult {
    let (word, pfa) = match args.kind {
        WordKind::Counting => {
            let d = need(args.d, "d")?;
            let top = args.classes.iter().copied().max().unwrap_or(1);
            check_budget((d as u128).pow(args.classes.len() as u32), args.max_wordlen)?;
            (counting_word(d, &args.classes)?, gen_family(d.max(2), top)?)
        }
        WordKind::Grid => {
            let (d, k) = (need(args.d, "d")?, need(args.k, "k")?);
            check_budget(careful_sync::words::family_word_length(d, k), args.max_wordlen)?;
            (family_word(d, k)?, gen_family(d, k)?)
        }
        WordKind::Cerny => {
            let n = need(args.n, "n")?;
            (cerny_classic_word(n)?, gen_cerny(n)?)
        }
        WordKind::CernyAlt => {
            let n = need(args.n, "n")?;
            let w = cerny_alt_word(n, args.r_override)?;
            let pfa = gen_cerny(n)?;
            say!("synchronizes: {}", sync_state(&pfa, &w)?.is_some());
            (w, pfa)
        }
        WordKind::Repair => {
            let n = need(args.n, "n")?;
            return match min_alt_repetitions(n, args.r_max)? {
                Some(r) => {
                    say!("minimal r: {r}");
                    Ok(())
                }
                None => {
                    say!("minimal r: none up to {}", args.r_max);
                    Err(Failure {
                        code: EXIT_NOT_SYNC,
                        message: "no repetition count works".into(),
                    })
                }
            };
        }
    };
    say!("length: {}", word.len());
    say!("word: {}", render(&word, &pfa, args.expand));
    Ok(())
}

fn transform_cmd(args: &TransformArgs) -> CliResult {
    let (base, _) = load(&args.source)?;
    let rec = transform(args.d, &base)?;
    match &args.word {
        Some(text) => {
            let w_base = Word::parse(&base, text)?;
            let length = lifted_length(&rec, &w_base)?;
            check_budget(length, args.max_wordlen)?;
            let lifted = lift_word(&rec, &w_base)?;
            say!("length: {}", lifted.len());
            say!("word: {}", lifted.render_compact(&rec.result));
            if let Some(path) = &args.out {
                emit(Some(path), &careful_sync::io::serialize_automaton(&rec.result))?;
            }
            Ok(())
        }
        None => emit(args.out.as_deref(), &careful_sync::io::serialize_automaton(&rec.result)),
    }
}

fn sweep(args: &SweepArgs) -> CliResult {
    let mut specs = Vec::new();
    for text in &args.families {
        specs.extend(expand_spec_ranges(text)?);
    }
    let opts = SweepOptions {
        search: args.budget.options()?,
        workers: args.workers,
    };
    let rows = run_sweep(&specs, &opts)?;
    emit(args.out.as_deref(), &rows_to_csv(&rows, args.timing))
}

fn export(args: &ExportArgs) -> CliResult {
    let (pfa, _) = load(&args.source)?;
    emit(args.out.as_deref(), &export_dot(&pfa))
}

fn errata(args: &ErrataArgs) -> CliResult {
    let opts = ErrataOptions {
        search: args.budget.options()?,
        ..Default::default()
    };
    say!(no_newline, "{}", errata_report(&opts)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => gen(a),
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Check(a) => check(a),
        Command::Words(a) => words(a),
        Command::Transform(a) => transform_cmd(a),
        Command::Sweep(a) => sweep(a),
        Command::ExportDot(a) => export(a),
        Command::Errata(a) => errata(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
