//! `seqmine` command line: mine a check-in or sequence file, generate
//! synthetic corpora, and benchmark the two miners against each other.

use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use seqmine::bench::{render_table, run_bench, write_bench_csv, MinerKind};
use seqmine::checkin::{
    generate_synthetic, parse_checkins, parse_utc_offset, run_pipeline, write_checkins,
    ActivityMap, GeneratorConfig, Grouping, InputFormat, PipelineConfig, Reject, WindowSpec,
};
use seqmine::dataset::{generate_bms, read_spmf, write_spmf, write_text, BmsConfig};
use seqmine::rules::{
    build_report, write_report_csv, write_report_jsonl, ReportOptions, ReportShape, SortKey,
};
use seqmine::{MinSupport, MinerConfig, Notation, SequenceDatabase};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug)]
enum CliError {
    Config(String),
    Input(String),
    Output(String),
    Mismatch(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Output(_) => EXIT_IO,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Output(m) => write!(f, "output error: {m}"),
            CliError::Mismatch(m) => write!(f, "miner disagreement: {m}"),
        }
    }
}

fn output_err(path: &Path) -> impl Fn(String) -> CliError + '_ {
    move |e| CliError::Output(format!("{}: {e}", path.display()))
}

#[derive(Parser, Debug)]
#[command(
    name = "seqmine",
    version,
    about = "Sequential pattern mining over check-in and sequence data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mine frequent sequential patterns and write a rule report.
    Mine(MineArgs),
    /// Write a deterministic synthetic dataset.
    Generate(GenerateArgs),
    /// Time both miners over a list of support levels.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FileFormat {
    /// Check-in CSV with the standard header.
    Csv,
    /// Check-ins as one JSON object per line.
    Jsonl,
    /// One sequence per line, e.g. `S1: (a b)(c)`.
    Seq,
    /// Items separated by spaces, `-1` ends an element, `-2` a sequence.
    Spmf,
}

impl FileFormat {
    fn from_extension(path: &Path) -> FileFormat {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => FileFormat::Csv,
            Some("jsonl" | "json") => FileFormat::Jsonl,
            Some("spmf") => FileFormat::Spmf,
            _ => FileFormat::Seq,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum NotationArg {
    /// Spaced if any sequence line contains whitespace or commas.
    Auto,
    /// Each character is an item: `a(bc)d`.
    Compact,
    /// Items separated by spaces: `(10 12)(3)`.
    Spaced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Shape {
    Singapore,
    Bms,
}

#[derive(clap::Args, Debug)]
struct MineArgs {
    #[arg(long)]
    input: PathBuf,
    /// Defaults from the file extension: .csv, .jsonl, .spmf, anything else is seq.
    #[arg(long, value_enum)]
    format: Option<FileFormat>,
    #[arg(long, value_enum, default_value = "auto")]
    notation: NotationArg,
    /// Sequence count (e.g. 20) or fraction of the database (e.g. 0.01).
    #[arg(long, default_value = "0.01")]
    min_support: String,
    /// Longest pattern, in items.
    #[arg(long)]
    max_length: Option<usize>,
    /// File of `window NAME HH:MM HH:MM` lines.
    #[arg(long)]
    windows: Option<PathBuf>,
    /// File of `pattern = activity` and `!pattern` lines.
    #[arg(long)]
    activity_map: Option<PathBuf>,
    #[arg(long, default_value = "window")]
    grouping: String,
    /// UTC offset that windows are read in.
    #[arg(long, default_value = "+08:00")]
    tz: String,
    /// Check-ins this many seconds apart share an element.
    #[arg(long, default_value_t = 0)]
    merge_resolution: u64,
    /// Keep only check-ins with this gender value.
    #[arg(long)]
    gender: Option<String>,
    #[arg(long, default_value = "prefixspan")]
    miner: String,
    #[arg(long)]
    top_k: Option<usize>,
    #[arg(long, default_value = "frequency")]
    sort: String,
    /// Report only patterns of this many activities, or `any` for every multi-element pattern.
    #[arg(long, default_value = "3")]
    report_length: String,
    #[arg(long)]
    serial: bool,
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(clap::Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value = "singapore")]
    shape: Shape,
    #[arg(long, default_value_t = 1057)]
    users: usize,
    #[arg(long, default_value_t = 8)]
    checkins_min: usize,
    #[arg(long, default_value_t = 10)]
    checkins_max: usize,
    #[arg(long, default_value_t = 30_000)]
    sequences: usize,
    #[arg(long, default_value_t = 2.3)]
    mean_elements: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// csv or jsonl for singapore; seq or spmf for bms. Defaults from the file extension.
    #[arg(long, value_enum)]
    format: Option<FileFormat>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "bms")]
    shape: Shape,
    /// Benchmark a sequence file (seq or spmf) instead of a generated dataset.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "0.005,0.01,0.02")]
    supports: Vec<String>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 30_000)]
    sequences: usize,
    #[arg(long, default_value_t = 1057)]
    users: usize,
    /// Let miners use all cores. Timings are then throughput, not latency.
    #[arg(long)]
    parallel: bool,
    /// Results CSV.
    #[arg(long, default_value = "bench.csv")]
    out: PathBuf,
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Mine(a) => cmd_mine(&a),
        Command::Generate(a) => cmd_generate(&a),
        Command::Bench(a) => cmd_bench(&a),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("seqmine: {e}");
            e.code()
        }
    }
}

fn parse_flag<T: std::str::FromStr<Err = String>>(flag: &str, raw: &str) -> Result<T, CliError> {
    raw.parse()
        .map_err(|e| CliError::Config(format!("--{flag}: {e}")))
}

fn read_config(flag: &str, path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("--{flag} {}: {e}", path.display())))
}

fn detect_notation(text: &str) -> Notation {
    let spaced = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .any(|l| {
            let body = l.split_once(':').map_or(l, |(_, b)| b);
            body.trim()
                .contains(|c: char| c.is_whitespace() || c == ',')
        });
    if spaced {
        Notation::Spaced
    } else {
        Notation::Compact
    }
}

struct Loaded {
    db: SequenceDatabase,
    rejects: Vec<Reject>,
    note: String,
}

fn load_checkins(a: &MineArgs, format: InputFormat) -> Result<Loaded, CliError> {
    let mut cfg = PipelineConfig {
        grouping: parse_flag::<Grouping>("grouping", &a.grouping)?,
        tz: parse_utc_offset(&a.tz).map_err(|e| CliError::Config(format!("--tz: {e}")))?,
        merge_resolution: Duration::from_secs(a.merge_resolution),
        gender: a.gender.clone(),
        ..PipelineConfig::default()
    };
    if let Some(p) = &a.activity_map {
        cfg.activity_map = ActivityMap::parse(&read_config("activity-map", p)?)
            .map_err(|e| CliError::Config(format!("--activity-map {}: {e}", p.display())))?;
    }
    if let Some(p) = &a.windows {
        cfg.windows = WindowSpec::parse_config(&read_config("windows", p)?)
            .map_err(|e| CliError::Config(format!("--windows {}: {e}", p.display())))?;
    }
    let file =
        File::open(&a.input).map_err(|e| CliError::Input(format!("{}: {e}", a.input.display())))?;
    let parsed = parse_checkins(BufReader::new(file), format)
        .map_err(|e| CliError::Input(format!("{}: {e}", a.input.display())))?;
    let n_checkins = parsed.checkins.len();
    let out = run_pipeline(parsed.checkins, &cfg);
    let note = format!(
        "{n_checkins} check-ins, {} rejected, {} blocklisted, {} outside windows",
        parsed.rejects.len(),
        out.blocked,
        out.unwindowed
    );
    Ok(Loaded {
        db: out.db,
        rejects: parsed.rejects,
        note,
    })
}

fn load_sequences(
    path: &Path,
    format: FileFormat,
    notation: NotationArg,
) -> Result<SequenceDatabase, CliError> {
    let input_err = |e: String| CliError::Input(format!("{}: {e}", path.display()));
    let db = if format == FileFormat::Spmf {
        let file = File::open(path).map_err(|e| input_err(e.to_string()))?;
        read_spmf(BufReader::new(file))
    } else {
        let text = fs::read_to_string(path).map_err(|e| input_err(e.to_string()))?;
        let notation = match notation {
            NotationArg::Auto => detect_notation(&text),
            NotationArg::Compact => Notation::Compact,
            NotationArg::Spaced => Notation::Spaced,
        };
        SequenceDatabase::parse_text(&text, notation)
    };
    db.map_err(|e| input_err(e.to_string()))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

fn cmd_mine(a: &MineArgs) -> Result<(), CliError> {
    let min_support: MinSupport = parse_flag("min-support", &a.min_support)?;
    let miner: MinerKind = parse_flag("miner", &a.miner)?;
    let sort: SortKey = parse_flag("sort", &a.sort)?;
    let shape = match a.report_length.as_str() {
        "any" => ReportShape::AnyRule,
        n => match n.parse::<usize>() {
            Ok(k) if k >= 2 => ReportShape::Activities(k),
            _ => {
                return Err(CliError::Config(format!(
                    "--report-length: expected an integer >= 2 or `any`, got {n:?}"
                )))
            }
        },
    };
    if a.max_length == Some(0) {
        return Err(CliError::Config("--max-length must be at least 1".into()));
    }
    if a.top_k == Some(0) {
        return Err(CliError::Config("--top-k must be at least 1".into()));
    }
    let format = a
        .format
        .unwrap_or_else(|| FileFormat::from_extension(&a.input));
    let loaded = match format {
        FileFormat::Csv => load_checkins(a, InputFormat::Csv)?,
        FileFormat::Jsonl => load_checkins(a, InputFormat::Jsonl)?,
        FileFormat::Seq | FileFormat::Spmf => {
            let db = load_sequences(&a.input, format, a.notation)?;
            Loaded {
                db,
                rejects: Vec::new(),
                note: String::new(),
            }
        }
    };
    let db = loaded.db;
    if db.is_empty() {
        return Err(CliError::Input(format!(
            "{}: no sequences to mine",
            a.input.display()
        )));
    }
    let min_count = min_support
        .resolve(db.len())
        .map_err(|e| CliError::Config(format!("--min-support: {e}")))?;
    let mut cfg = MinerConfig::new(min_support);
    cfg.max_length = a.max_length;
    cfg.parallel = !a.serial;
    let (patterns, _) = miner
        .run(&db, &cfg)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let rows = build_report(
        &patterns,
        &db,
        &ReportOptions {
            shape,
            sort,
            top_k: a.top_k,
        },
    );

    fs::create_dir_all(&a.out)
        .map_err(|e| CliError::Output(format!("{}: {e}", a.out.display())))?;
    let path = a.out.join("patterns.csv");
    patterns
        .write_csv(db.dictionary(), create(&path)?)
        .map_err(|e| output_err(&path)(e.to_string()))?;
    let path = a.out.join("report.csv");
    write_report_csv(&rows, create(&path)?).map_err(|e| output_err(&path)(e.to_string()))?;
    let path = a.out.join("report.jsonl");
    let mut w = create(&path)?;
    write_report_jsonl(&rows, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| output_err(&path)(e.to_string()))?;
    if !loaded.rejects.is_empty() {
        let path = a.out.join("rejects.csv");
        let mut w = create(&path)?;
        let written: io::Result<()> = (|| {
            writeln!(w, "line,reason")?;
            for r in &loaded.rejects {
                writeln!(w, "{},\"{}\"", r.line, r.reason.replace('"', "\"\""))?;
            }
            w.flush()
        })();
        written.map_err(|e| output_err(&path)(e.to_string()))?;
        eprintln!(
            "seqmine: {} input rows rejected, see {}",
            loaded.rejects.len(),
            path.display()
        );
    }
    if !loaded.note.is_empty() {
        eprintln!("seqmine: {}", loaded.note);
    }
    println!(
        "{} patterns from {} sequences (min_count {min_count}, {}); {} report rows written to {}",
        patterns.len(),
        db.len(),
        miner.name(),
        rows.len(),
        a.out.display()
    );
    Ok(())
}

fn cmd_generate(a: &GenerateArgs) -> Result<(), CliError> {
    let format = a
        .format
        .or_else(|| a.out.as_deref().map(FileFormat::from_extension));
    let mut buf = Vec::new();
    match a.shape {
        Shape::Singapore => {
            if a.users == 0 {
                return Err(CliError::Config("--users must be at least 1".into()));
            }
            if a.checkins_min == 0 || a.checkins_min > a.checkins_max {
                return Err(CliError::Config(format!(
                    "--checkins-min {} / --checkins-max {}: need 1 <= min <= max",
                    a.checkins_min, a.checkins_max
                )));
            }
            let format = match format.unwrap_or(FileFormat::Csv) {
                FileFormat::Csv => InputFormat::Csv,
                FileFormat::Jsonl => InputFormat::Jsonl,
                other => {
                    return Err(CliError::Config(format!(
                        "--format {other:?} does not fit the singapore shape"
                    )))
                }
            };
            let cfg = GeneratorConfig {
                n_users: a.users,
                checkins_min: a.checkins_min,
                checkins_max: a.checkins_max,
                ..GeneratorConfig::default()
            };
            let checkins =
                generate_synthetic(&cfg, a.seed).map_err(|e| CliError::Config(e.to_string()))?;
            write_checkins(&checkins, format, &mut buf)
                .map_err(|e| CliError::Output(e.to_string()))?;
        }
        Shape::Bms => {
            if a.sequences == 0 {
                return Err(CliError::Config("--sequences must be at least 1".into()));
            }
            let cfg = BmsConfig {
                n_sequences: a.sequences,
                mean_elements: a.mean_elements,
                ..BmsConfig::default()
            };
            let db = generate_bms(&cfg, a.seed).map_err(CliError::Config)?;
            let written = match format.unwrap_or(FileFormat::Seq) {
                FileFormat::Seq => write_text(&db, &mut buf),
                FileFormat::Spmf => write_spmf(&db, &mut buf),
                other => {
                    return Err(CliError::Config(format!(
                        "--format {other:?} does not fit the bms shape"
                    )))
                }
            };
            written.map_err(|e| CliError::Output(e.to_string()))?;
        }
    }
    match &a.out {
        Some(path) => fs::write(path, &buf).map_err(|e| output_err(path)(e.to_string())),
        None => io::stdout()
            .write_all(&buf)
            .map_err(|e| CliError::Output(e.to_string())),
    }
}

fn cmd_bench(a: &BenchArgs) -> Result<(), CliError> {
    let supports: Vec<MinSupport> = a
        .supports
        .iter()
        .map(|s| parse_flag("supports", s))
        .collect::<Result<_, _>>()?;
    if supports.is_empty() {
        return Err(CliError::Config(
            "--supports needs at least one level".into(),
        ));
    }
    if a.repeats == 0 {
        return Err(CliError::Config("--repeats must be at least 1".into()));
    }
    let db = match (&a.input, a.shape) {
        (Some(path), _) => {
            let format = FileFormat::from_extension(path);
            if matches!(format, FileFormat::Csv | FileFormat::Jsonl) {
                return Err(CliError::Config(
                    "--input for bench must be a seq or spmf file".into(),
                ));
            }
            load_sequences(path, format, NotationArg::Auto)?
        }
        (None, Shape::Bms) => {
            let cfg = BmsConfig {
                n_sequences: a.sequences,
                ..BmsConfig::default()
            };
            generate_bms(&cfg, a.seed).map_err(CliError::Config)?
        }
        (None, Shape::Singapore) => {
            let cfg = GeneratorConfig {
                n_users: a.users,
                ..GeneratorConfig::default()
            };
            let checkins =
                generate_synthetic(&cfg, a.seed).map_err(|e| CliError::Config(e.to_string()))?;
            run_pipeline(checkins, &PipelineConfig::default()).db
        }
    };
    for s in &supports {
        s.resolve(db.len())
            .map_err(|e| CliError::Config(format!("--supports: {e}")))?;
    }
    let report = run_bench(&db, &supports, a.repeats, a.parallel)
        .map_err(|e| CliError::Config(e.to_string()))?;
    write_bench_csv(&report.rows, create(&a.out)?)
        .map_err(|e| output_err(&a.out)(e.to_string()))?;
    print!("{}", render_table(&report.rows));
    if !report.mismatches.is_empty() {
        let detail: Vec<String> = report
            .mismatches
            .iter()
            .map(|m| {
                format!(
                    "at {} prefixspan found {} patterns, spam {}",
                    m.min_support, m.prefixspan, m.spam
                )
            })
            .collect();
        return Err(CliError::Mismatch(detail.join("; ")));
    }
    Ok(())
}
