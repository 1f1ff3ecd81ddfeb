//! Command-line front end: preprocess, build, train, transform, bench.
//!
//! Payload goes to stdout, diagnostics to stderr, and every command is
//! reproducible byte for byte given the same inputs and seeds (benchmark
//! timings excepted, since wall clocks are not deterministic). Table and
//! model paths default into the directory named by `DISFLOW_DATA_DIR`, or
//! the current directory when unset.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use crate::bigram_model::{
    transform_bigram, word_elems, BigramTable, FallbackResources, NaturalizationConfig,
    Side,
};
use crate::corpus_prep::{extract_training_corpus, load_cleaned_corpus, Sentence};
use crate::hybrid_pipeline::transform_hybrid;
use crate::neural_predictor::{
    load_model, make_sequences, save_model, select_representative, train, LstmModel, TrainConfig,
    Vocabulary,
};
use crate::pos_fallback::{pos_elems, transform_fallback, LexiconTagger, PosBigramTable};

const BIGRAMS_FILE: &str = "bigrams.tsv";
const POS_BIGRAMS_FILE: &str = "pos-bigrams.tsv";
const MODEL_FILE: &str = "model.lstm";

#[derive(Parser)]
#[command(name = "disflow", version, about = "Corpus-driven text naturalization for speech synthesis")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract disfluent lines from a raw corpus and normalize them
    Preprocess {
        /// Raw corpus file, one utterance per line
        raw: PathBuf,
        /// Normalized corpus file to write
        #[arg(long)]
        out: PathBuf,
    },
    /// Count filler-adjacent bigrams into the word and POS tables
    Build {
        /// Normalized corpus file (preprocess output)
        corpus: PathBuf,
        /// Directory to write bigrams.tsv and pos-bigrams.tsv into
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Train the LSTM confirmer on the most representative sentences
    Train {
        /// Normalized corpus file (preprocess output)
        corpus: PathBuf,
        /// Model file to write; a .loss history file lands next to it
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 300)]
        epochs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Naturalize a sentence, or each stdin line when no text is given
    Transform {
        /// Text to transform; omit to stream line by line from stdin
        text: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Bigram)]
        method: Method,
        /// Target ratio of inserted fillers to input words, in [0, 1]
        #[arg(long, value_parser = parse_degree, default_value_t = 0.095)]
        degree: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Directory holding bigrams.tsv and pos-bigrams.tsv
        #[arg(long)]
        tables: Option<PathBuf>,
        /// Trained model file (hybrid method only)
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Time transformations over a file of sample sentences
    Bench {
        /// Sample sentences, one per line
        samples: PathBuf,
        #[arg(long, value_enum, default_value_t = BenchMethod::Both)]
        method: BenchMethod,
        #[arg(long, value_parser = parse_degree, default_value_t = 0.095)]
        degree: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Timed repetitions per sample; the median is reported
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// Directory holding bigrams.tsv and pos-bigrams.tsv
        #[arg(long)]
        tables: Option<PathBuf>,
        /// Trained model file (hybrid timing only)
        #[arg(long)]
        model: Option<PathBuf>,
        /// Also write a machine-readable TSV of outputs and timings here
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Bigram,
    Hybrid,
    FallbackOnly,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchMethod {
    Both,
    Bigram,
    Hybrid,
}

fn parse_degree(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("degree must lie in [0, 1], got {v}"))
    }
}

/// Directory for tables and models: the explicit flag, else
/// `DISFLOW_DATA_DIR`, else the current directory.
fn data_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("DISFLOW_DATA_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn model_path(flag: Option<PathBuf>) -> PathBuf {
    flag.unwrap_or_else(|| data_dir(None).join(MODEL_FILE))
}

pub fn run() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Preprocess { raw, out } => cmd_preprocess(&raw, &out),
        Command::Build { corpus, out } => cmd_build(&corpus, &data_dir(out)),
        Command::Train { corpus, model, epochs, seed } => {
            cmd_train(&corpus, &model_path(model), epochs, seed)
        }
        Command::Transform { text, method, degree, seed, tables, model } => cmd_transform(
            text.as_deref(),
            method,
            degree,
            seed,
            &data_dir(tables),
            &model_path(model),
        ),
        Command::Bench { samples, method, degree, seed, reps, tables, model, out } => cmd_bench(
            &samples,
            method,
            degree,
            seed,
            reps,
            &data_dir(tables),
            &model_path(model),
            out.as_deref(),
        ),
    }
}

/// Line reader that never chokes on invalid UTF-8: bad bytes become
/// replacement characters and are dropped later during cleaning.
struct LossyLines<R> {
    reader: R,
    buf: Vec<u8>,
}

impl<R: BufRead> LossyLines<R> {
    fn new(reader: R) -> LossyLines<R> {
        LossyLines { reader, buf: Vec::new() }
    }
}

impl<R: BufRead> Iterator for LossyLines<R> {
    type Item = io::Result<String>;

    fn next(&mut self) -> Option<io::Result<String>> {
        self.buf.clear();
        match self.reader.read_until(b'\n', &mut self.buf) {
            Ok(0) => None,
            Ok(_) => {
                if self.buf.last() == Some(&b'\n') {
                    self.buf.pop();
                }
                if self.buf.last() == Some(&b'\r') {
                    self.buf.pop();
                }
                Some(Ok(String::from_utf8_lossy(&self.buf).into_owned()))
            }
            Err(e) => Some(Err(e)),
        }
    }
}

pub fn cmd_preprocess(raw: &Path, out: &Path) -> anyhow::Result<()> {
    let file = File::open(raw).with_context(|| format!("cannot open {}", raw.display()))?;
    let mut writer = BufWriter::new(
        File::create(out).with_context(|| format!("cannot create {}", out.display()))?,
    );
    let mut total = 0usize;
    let mut kept = 0usize;
    let lines = LossyLines::new(BufReader::new(file)).inspect(|_| total += 1);
    for sentence in extract_training_corpus(lines) {
        let sentence = sentence.with_context(|| format!("while reading {}", raw.display()))?;
        writeln!(writer, "{}", sentence.render())?;
        kept += 1;
    }
    writer.flush()?;
    eprintln!("kept {kept}/{total}");
    Ok(())
}

pub fn cmd_build(corpus: &Path, out_dir: &Path) -> anyhow::Result<()> {
    let file = File::open(corpus).with_context(|| format!("cannot open {}", corpus.display()))?;
    let tagger = LexiconTagger::bundled();
    let mut word_table = BigramTable::new();
    let mut pos_table = PosBigramTable::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line =
            line.with_context(|| format!("read failed in {} at line {}", corpus.display(), idx + 1))?;
        if line.trim().is_empty() {
            continue;
        }
        let sentence = Sentence::parse_cleaned(&line);
        word_table.count_elems(&word_elems(&sentence));
        pos_table.count_elems(&pos_elems(&sentence, &tagger));
    }

    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create {}", out_dir.display()))?;
    let bigrams_path = out_dir.join(BIGRAMS_FILE);
    let pos_path = out_dir.join(POS_BIGRAMS_FILE);
    word_table.save(&bigrams_path)?;
    pos_table.save(&pos_path)?;

    eprintln!(
        "counted {} lines into {} word entries, {} tag entries",
        word_table.total_lines(),
        word_table.len(),
        pos_table.len()
    );
    eprintln!("top bigrams:");
    for (anchor, filler, side, count) in word_table.sorted_rows().into_iter().take(5) {
        // reading order: a FillerBefore entry means the filler came first
        match side {
            Side::FillerBefore => eprintln!("  {} {anchor} {count}", filler.surface()),
            Side::FillerAfter => eprintln!("  {anchor} {} {count}", filler.surface()),
        }
    }
    eprintln!("wrote {} and {}", bigrams_path.display(), pos_path.display());
    Ok(())
}

pub fn cmd_train(corpus: &Path, model_out: &Path, epochs: usize, seed: u64) -> anyhow::Result<()> {
    let corpus_sentences = load_cleaned_corpus(corpus)?;
    let selected = select_representative(&corpus_sentences, 500);
    let vocab = Vocabulary::build(&selected);
    let examples = make_sequences(&selected, &vocab);
    if examples.is_empty() {
        bail!(
            "cannot train on {}: no sentence has three or more tokens",
            corpus.display()
        );
    }
    let cfg = TrainConfig { epochs, rng_seed: seed, ..TrainConfig::default() };
    let trained = train(&examples, vocab.len(), &cfg)?;
    save_model(model_out, &trained.model, &vocab)?;

    let loss_path = PathBuf::from(format!("{}.loss", model_out.display()));
    let mut w = BufWriter::new(
        File::create(&loss_path).with_context(|| format!("cannot create {}", loss_path.display()))?,
    );
    for (epoch, loss) in trained.loss_history.iter().enumerate() {
        writeln!(w, "{epoch}\t{loss:.16e}")?;
    }
    w.flush()?;

    eprintln!(
        "trained on {} examples from {} sentences, vocabulary {}",
        examples.len(),
        selected.len(),
        vocab.len()
    );
    eprintln!(
        "final loss {:.6}; wrote {} and {}",
        trained.loss_history.last().expect("history is never empty"),
        model_out.display(),
        loss_path.display()
    );
    Ok(())
}

/// Loaded transformation resources for whichever method is in play.
enum Engine {
    Bigram {
        table: BigramTable,
        pos_table: PosBigramTable,
        tagger: LexiconTagger,
    },
    Hybrid {
        table: BigramTable,
        model: LstmModel,
        vocab: Vocabulary,
    },
    FallbackOnly {
        pos_table: PosBigramTable,
        tagger: LexiconTagger,
    },
}

impl Engine {
    fn load(method: Method, tables_dir: &Path, model_file: &Path) -> anyhow::Result<Engine> {
        let bigrams = || BigramTable::load(&tables_dir.join(BIGRAMS_FILE));
        let pos = || PosBigramTable::load(&tables_dir.join(POS_BIGRAMS_FILE));
        Ok(match method {
            Method::Bigram => Engine::Bigram {
                table: bigrams()?,
                pos_table: pos()?,
                tagger: LexiconTagger::bundled(),
            },
            Method::Hybrid => {
                let (model, vocab) = load_model(model_file)?;
                Engine::Hybrid { table: bigrams()?, model, vocab }
            }
            Method::FallbackOnly => Engine::FallbackOnly {
                pos_table: pos()?,
                tagger: LexiconTagger::bundled(),
            },
        })
    }

    fn transform(&self, text: &str, cfg: &NaturalizationConfig) -> Sentence {
        match self {
            Engine::Bigram { table, pos_table, tagger } => transform_bigram(
                text,
                cfg,
                table,
                Some(FallbackResources { table: pos_table, tagger }),
            ),
            Engine::Hybrid { table, model, vocab } => {
                transform_hybrid(text, cfg, table, model, vocab)
            }
            Engine::FallbackOnly { pos_table, tagger } => {
                transform_fallback(&crate::corpus_prep::clean_input(text), cfg, pos_table, tagger)
            }
        }
    }
}

pub fn cmd_transform(
    text: Option<&str>,
    method: Method,
    degree: f64,
    seed: u64,
    tables_dir: &Path,
    model_file: &Path,
) -> anyhow::Result<()> {
    let cfg = NaturalizationConfig::new(degree, seed)?;
    let engine = Engine::load(method, tables_dir, model_file)?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    match text {
        Some(text) => {
            writeln!(out, "{}", engine.transform(text, &cfg).render())?;
        }
        None => {
            for line in LossyLines::new(io::stdin().lock()) {
                let line = line.context("read failed on stdin")?;
                writeln!(out, "{}", engine.transform(&line, &cfg).render())?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_bench(
    samples_path: &Path,
    method: BenchMethod,
    degree: f64,
    seed: u64,
    reps: usize,
    tables_dir: &Path,
    model_file: &Path,
    tsv_out: Option<&Path>,
) -> anyhow::Result<()> {
    if reps == 0 {
        bail!("--reps must be at least 1");
    }
    let cfg = NaturalizationConfig::new(degree, seed)?;
    let file = File::open(samples_path)
        .with_context(|| format!("cannot open {}", samples_path.display()))?;
    let samples: Vec<String> = LossyLines::new(BufReader::new(file))
        .collect::<io::Result<Vec<_>>>()
        .with_context(|| format!("read failed in {}", samples_path.display()))?
        .into_iter()
        .filter(|l| !l.trim().is_empty())
        .collect();
    if samples.is_empty() {
        bail!("no samples in {}", samples_path.display());
    }

    let methods: &[Method] = match method {
        BenchMethod::Both => &[Method::Bigram, Method::Hybrid],
        BenchMethod::Bigram => &[Method::Bigram],
        BenchMethod::Hybrid => &[Method::Hybrid],
    };
    let engines: Vec<Engine> = methods
        .iter()
        .map(|&m| Engine::load(m, tables_dir, model_file))
        .collect::<anyhow::Result<_>>()?;

    // rows[s][m] = (output, median seconds)
    let mut rows: Vec<Vec<(String, f64)>> = Vec::new();
    for sample in &samples {
        let mut row = Vec::new();
        for engine in &engines {
            let mut times: Vec<f64> = (0..reps)
                .map(|_| {
                    let start = Instant::now();
                    let _ = engine.transform(sample, &cfg);
                    start.elapsed().as_secs_f64()
                })
                .collect();
            times.sort_by(|a, b| a.partial_cmp(b).expect("durations are finite"));
            let median = times[times.len() / 2];
            row.push((engine.transform(sample, &cfg).render(), median));
        }
        rows.push(row);
    }

    let method_name = |m: Method| match m {
        Method::Bigram => "bigram",
        Method::Hybrid => "hybrid",
        Method::FallbackOnly => "fallback-only",
    };

    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    write!(out, "sample")?;
    for &m in methods {
        write!(out, "\t{}_s", method_name(m))?;
    }
    writeln!(out)?;
    for (i, row) in rows.iter().enumerate() {
        write!(out, "{}", i + 1)?;
        for (_, median) in row {
            write!(out, "\t{median:.3}")?;
        }
        writeln!(out)?;
    }
    write!(out, "average")?;
    for m in 0..methods.len() {
        let mean: f64 = rows.iter().map(|row| row[m].1).sum::<f64>() / rows.len() as f64;
        write!(out, "\t{mean:.3}")?;
    }
    writeln!(out)?;
    out.flush()?;

    if let Some(path) = tsv_out {
        let mut w = BufWriter::new(
            File::create(path).with_context(|| format!("cannot create {}", path.display()))?,
        );
        writeln!(w, "sample\tmethod\toutput\tmedian_s")?;
        for (i, row) in rows.iter().enumerate() {
            for (m, (output, median)) in row.iter().enumerate() {
                writeln!(w, "{}\t{}\t{output}\t{median:.6}", i + 1, method_name(methods[m]))?;
            }
        }
        w.flush()?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
