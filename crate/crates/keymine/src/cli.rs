//! Command-line interface: the full `run` plus one subcommand per stage
//! boundary for debugging and golden-file tests.
//!
//! Config precedence: CLI flags > config file (`--config`, flat
//! `key = value` lines) > built-in defaults.

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::corpus::{read_corpus, CorpusConfig, InputFormat};
use crate::data::{load_resources, ResourcePaths, Resources};
use crate::pipeline::{corpus_funnel, process_corpus, Pipeline};
use crate::refine::{classify_polarity, sentiment_score, FilterConfig};
use crate::report::{write_report, ReportFormat};
use crate::DEFAULT_GRAMMAR;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "keymine",
    about = "Mine opinionated keyphrases from social-media comment corpora",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the whole pipeline over a corpus file and write reports.
    Run(RunArgs),
    /// Normalize raw text lines (one cleaned line out per line in).
    Preprocess(StageArgs),
    /// Split, tokenize, tag and lemmatize clean text lines (JSON per line).
    Annotate(StageArgs),
    /// Chunk annotated sentences into IOB labels and candidates (JSON in/out).
    Chunk(StageArgs),
    /// Score keyphrase lines, printing `score<TAB>polarity` per line.
    Score(StageArgs),
}

#[derive(Debug, Args, Clone)]
struct StageArgs {
    /// Input file; standard input when omitted.
    #[arg(long)]
    input: Option<PathBuf>,

    #[command(flatten)]
    settings: Settings,
}

#[derive(Debug, Args, Clone)]
struct RunArgs {
    /// Corpus file to mine.
    #[arg(long)]
    input: Option<PathBuf>,

    /// Corpus file format.
    #[arg(long, value_parser = ["jsonl", "csv"])]
    format: Option<String>,

    /// Directory for keyphrases.jsonl, keyphrases.csv and summary.json.
    #[arg(long)]
    out_dir: Option<PathBuf>,

    /// Bernoulli sampling fraction in [0, 1].
    #[arg(long)]
    sample_fraction: Option<f64>,

    /// Sampling seed.
    #[arg(long)]
    seed: Option<u64>,

    /// Minimum English-coverage score.
    #[arg(long)]
    english_threshold: Option<f64>,

    /// Worker threads; 0 picks the rayon default.
    #[arg(long)]
    jobs: Option<usize>,

    /// Keep duplicate comments instead of dropping them.
    #[arg(long)]
    no_dedup: bool,

    #[command(flatten)]
    settings: Settings,
}

/// Settings shared by `run` and the stage subcommands.
#[derive(Debug, Args, Clone)]
struct Settings {
    /// Chunking grammar pattern text.
    #[arg(long)]
    grammar: Option<String>,

    /// Maximum keyphrase length in tokens.
    #[arg(long)]
    max_len: Option<usize>,

    /// Half-width of the neutral score band.
    #[arg(long)]
    neutral_band: Option<f64>,

    /// Emit each grammar chunk as its own candidate instead of merging
    /// adjacent chunks.
    #[arg(long)]
    no_merge_adjacent_chunks: bool,

    /// Stopword list file (whole-candidate rejection).
    #[arg(long)]
    stopwords: Option<PathBuf>,

    /// Boundary stopword list file.
    #[arg(long)]
    boundary_stopwords: Option<PathBuf>,

    /// Slang table CSV.
    #[arg(long)]
    slang: Option<PathBuf>,

    /// Contraction table CSV.
    #[arg(long)]
    contractions: Option<PathBuf>,

    /// Sentiment valence lexicon TSV.
    #[arg(long)]
    lexicon: Option<PathBuf>,

    /// Tagger lexicon TSV.
    #[arg(long)]
    tagger_lexicon: Option<PathBuf>,

    /// Sentence-splitter abbreviation list.
    #[arg(long)]
    abbreviations: Option<PathBuf>,

    /// Lemmatizer exception table TSV.
    #[arg(long)]
    lemma_exceptions: Option<PathBuf>,

    /// English high-frequency word list for language gating.
    #[arg(long)]
    english_words: Option<PathBuf>,

    /// Flat key = value config file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Fully resolved configuration for one invocation.
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub format: InputFormat,
    pub out_dir: PathBuf,
    pub grammar: String,
    pub corpus: CorpusConfig,
    pub max_len: usize,
    pub neutral_band: f64,
    pub merge_adjacent_chunks: bool,
    pub dedup: bool,
    pub jobs: usize,
    pub resource_paths: ResourcePaths,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

/// Parses argv, runs the chosen command and returns the process exit code.
pub fn main() -> i32 {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run_command(args),
        Command::Preprocess(args) => stage_preprocess(args),
        Command::Annotate(args) => stage_annotate(args),
        Command::Chunk(args) => stage_chunk(args),
        Command::Score(args) => stage_score(args),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// `key = value` lines; `#` comments and blank lines ignored.
fn parse_config_file(path: &Path) -> Result<HashMap<String, String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "config {} line {}: expected key = value",
                path.display(),
                i + 1
            ))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

struct ConfigLookup {
    map: HashMap<String, String>,
}

impl ConfigLookup {
    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.map.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                CliError::Config(format!("config key {key}: cannot parse {raw:?}"))
            }),
        }
    }

    fn get_path(&self, key: &str) -> Option<PathBuf> {
        self.map.get(key).map(PathBuf::from)
    }
}

fn resolve(
    run: Option<&RunArgs>,
    settings: &Settings,
    stage_input: Option<&PathBuf>,
) -> Result<RunConfig, CliError> {
    let config = ConfigLookup {
        map: match &settings.config {
            Some(path) => parse_config_file(path)?,
            None => HashMap::new(),
        },
    };

    let sample_fraction = run
        .and_then(|r| r.sample_fraction)
        .or(config.get("sample-fraction")?)
        .unwrap_or(1.0);
    if !(0.0..=1.0).contains(&sample_fraction) {
        return Err(CliError::Config(format!(
            "sample-fraction must be in [0, 1], got {sample_fraction}"
        )));
    }
    let neutral_band = settings
        .neutral_band
        .or(config.get("neutral-band")?)
        .unwrap_or(0.05);
    if !(0.0..1.0).contains(&neutral_band) {
        return Err(CliError::Config(format!(
            "neutral-band must be in [0, 1), got {neutral_band}"
        )));
    }
    let max_len = settings.max_len.or(config.get("max-len")?).unwrap_or(10);
    if max_len == 0 {
        return Err(CliError::Config("max-len must be at least 1".into()));
    }
    let english_threshold = run
        .and_then(|r| r.english_threshold)
        .or(config.get("english-threshold")?)
        .unwrap_or(0.35);
    if !(0.0..=1.0).contains(&english_threshold) {
        return Err(CliError::Config(format!(
            "english-threshold must be in [0, 1], got {english_threshold}"
        )));
    }

    let format = match run
        .and_then(|r| r.format.clone())
        .or(config.get("format")?)
    {
        None => InputFormat::Jsonl,
        Some(name) => name
            .parse::<InputFormat>()
            .map_err(CliError::Config)?,
    };

    let resource_paths = ResourcePaths {
        contractions: path_setting(&settings.contractions, &config, "contractions"),
        slang: path_setting(&settings.slang, &config, "slang"),
        tagger_lexicon: path_setting(&settings.tagger_lexicon, &config, "tagger-lexicon"),
        abbreviations: path_setting(&settings.abbreviations, &config, "abbreviations"),
        lemma_exceptions: path_setting(&settings.lemma_exceptions, &config, "lemma-exceptions"),
        stopwords: path_setting(&settings.stopwords, &config, "stopwords"),
        boundary_stopwords: path_setting(
            &settings.boundary_stopwords,
            &config,
            "boundary-stopwords",
        ),
        sentiment_lexicon: path_setting(&settings.lexicon, &config, "lexicon"),
        english_words: path_setting(&settings.english_words, &config, "english-words"),
    };

    Ok(RunConfig {
        input: run
            .and_then(|r| r.input.clone())
            .or_else(|| stage_input.cloned())
            .or_else(|| config.get_path("input")),
        format,
        out_dir: run
            .and_then(|r| r.out_dir.clone())
            .or_else(|| config.get_path("out-dir"))
            .unwrap_or_else(|| PathBuf::from("keymine-out")),
        grammar: settings
            .grammar
            .clone()
            .or(config.get("grammar")?)
            .unwrap_or_else(|| DEFAULT_GRAMMAR.to_string()),
        corpus: CorpusConfig {
            sample_fraction,
            sample_seed: run.and_then(|r| r.seed).or(config.get("seed")?).unwrap_or(0),
            english_threshold,
        },
        max_len,
        neutral_band,
        merge_adjacent_chunks: !(settings.no_merge_adjacent_chunks
            || config.get("no-merge-adjacent-chunks")?.unwrap_or(false)),
        dedup: !(run.map(|r| r.no_dedup).unwrap_or(false)
            || config.get("no-dedup")?.unwrap_or(false)),
        jobs: run.and_then(|r| r.jobs).or(config.get("jobs")?).unwrap_or(0),
        resource_paths,
    })
}

fn path_setting(flag: &Option<PathBuf>, config: &ConfigLookup, key: &str) -> Option<String> {
    flag.as_ref()
        .map(|p| p.display().to_string())
        .or_else(|| config.get_path(key).map(|p| p.display().to_string()))
}

/// Resources and pipeline for a resolved config; all referenced files must
/// exist and parse (fail fast).
fn build_pipeline(cfg: &RunConfig) -> Result<(Resources, Pipeline), CliError> {
    let resources = load_resources(&cfg.resource_paths).map_err(|e| match e {
        crate::data::DataError::Io { .. } => CliError::Config(e.to_string()),
        crate::data::DataError::Parse { .. } => CliError::Config(e.to_string()),
    })?;
    let mut filter = FilterConfig::new(
        resources.stopwords.clone(),
        resources.boundary_stopwords.clone(),
    );
    filter.max_len = cfg.max_len;
    filter.neutral_band = cfg.neutral_band;
    let pipeline = Pipeline::from_resources(
        &resources,
        &cfg.grammar,
        filter,
        cfg.merge_adjacent_chunks,
    )
    .map_err(|e| CliError::Config(format!("grammar: {e}")))?;
    Ok((resources, pipeline))
}

fn run_command(args: RunArgs) -> Result<(), CliError> {
    let cfg = resolve(Some(&args), &args.settings, None)?;
    let input = cfg
        .input
        .clone()
        .ok_or_else(|| CliError::Config("run requires --input".into()))?;
    let (resources, pipeline) = build_pipeline(&cfg)?;

    let mut reader =
        read_corpus(&input, cfg.format).map_err(|e| CliError::Io(e.to_string()))?;
    for warning in reader.warnings() {
        eprintln!("warning: {warning}");
    }
    let funnel = corpus_funnel(reader.by_ref(), &cfg.corpus, &resources, cfg.dedup);
    let read_stats = reader.stats().clone();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::Config(format!("cannot build worker pool: {e}")))?;
    let mut output = pool.install(|| process_corpus(&pipeline, funnel));
    output.summary.absorb_read_stats(&read_stats);

    fs::create_dir_all(&cfg.out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", cfg.out_dir.display())))?;

    let jsonl_path = cfg.out_dir.join("keyphrases.jsonl");
    let mut jsonl = Vec::new();
    for keyphrase in &output.keyphrases {
        serde_json::to_writer(&mut jsonl, keyphrase).expect("keyphrase serializes");
        jsonl.push(b'\n');
    }
    fs::write(&jsonl_path, jsonl)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", jsonl_path.display())))?;

    let stats = output.aggregate.into_stats();
    write_report(
        &stats,
        &output.summary,
        ReportFormat::Csv,
        &cfg.out_dir.join("keyphrases.csv"),
    )
    .map_err(|e| CliError::Io(e.to_string()))?;
    write_report(
        &stats,
        &output.summary,
        ReportFormat::Json,
        &cfg.out_dir.join("summary.json"),
    )
    .map_err(|e| CliError::Io(e.to_string()))?;

    eprintln!(
        "read {} -> dedup {} -> sampled {} -> english {} -> emitted {}",
        output.summary.read,
        output.summary.after_dedup,
        output.summary.after_sampling,
        output.summary.english,
        output.summary.emitted
    );
    Ok(())
}

/// Input lines for a stage subcommand: a file or standard input.
fn stage_lines(input: &Option<PathBuf>) -> Result<Vec<String>, CliError> {
    match input {
        Some(path) => Ok(fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?
            .lines()
            .map(str::to_string)
            .collect()),
        None => std::io::stdin()
            .lock()
            .lines()
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| CliError::Io(format!("cannot read stdin: {e}"))),
    }
}

fn locked_stdout() -> impl Write {
    std::io::BufWriter::new(std::io::stdout().lock())
}

fn stage_preprocess(args: StageArgs) -> Result<(), CliError> {
    let cfg = resolve(None, &args.settings, args.input.as_ref())?;
    let (_, pipeline) = build_pipeline(&cfg)?;
    let lines = stage_lines(&args.input)?;
    let mut out = locked_stdout();
    for line in lines {
        writeln!(out, "{}", pipeline.preprocessor.preprocess(&line))
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn stage_annotate(args: StageArgs) -> Result<(), CliError> {
    let cfg = resolve(None, &args.settings, args.input.as_ref())?;
    let (_, pipeline) = build_pipeline(&cfg)?;
    let lines = stage_lines(&args.input)?;
    let mut out = locked_stdout();
    for line in lines {
        for sentence in pipeline.annotate_text(&line) {
            let json = serde_json::to_string(&sentence).expect("tokens serialize");
            writeln!(out, "{json}").map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))
}

#[derive(serde::Serialize)]
struct ChunkStageOutput {
    iob: Vec<crate::chunk::IobToken>,
    candidates: Vec<String>,
}

fn stage_chunk(args: StageArgs) -> Result<(), CliError> {
    let cfg = resolve(None, &args.settings, args.input.as_ref())?;
    let (_, pipeline) = build_pipeline(&cfg)?;
    let lines = stage_lines(&args.input)?;
    let mut out = locked_stdout();
    for (i, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let sentence: Vec<crate::annotate::TaggedToken> = serde_json::from_str(line)
            .map_err(|e| CliError::Io(format!("input line {}: {e}", i + 1)))?;
        let (iob, candidates) = pipeline.chunk_sentence(&sentence);
        let record = ChunkStageOutput {
            iob,
            candidates: candidates.iter().map(|c| c.join(" ")).collect(),
        };
        let json = serde_json::to_string(&record).expect("chunk output serializes");
        writeln!(out, "{json}").map_err(|e| CliError::Io(e.to_string()))?;
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))
}

fn stage_score(args: StageArgs) -> Result<(), CliError> {
    let cfg = resolve(None, &args.settings, args.input.as_ref())?;
    let (resources, pipeline) = build_pipeline(&cfg)?;
    let lex = resources.sentiment_lexicon();
    let lines = stage_lines(&args.input)?;
    let mut out = locked_stdout();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let score = sentiment_score(line.trim(), &lex);
        let polarity = classify_polarity(score, &pipeline.filter);
        writeln!(out, "{:.4}\t{}", score, polarity.as_str())
            .map_err(|e| CliError::Io(e.to_string()))?;
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))
}
