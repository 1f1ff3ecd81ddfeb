//! Filler-adjacent bigram table and the frequency-weighted insertion method.
//!
//! Training walks every normalized sentence (with a start marker prepended)
//! and counts each adjacent pair in which exactly one member is a filler.
//! The non-filler member is the anchor; the side records whether the filler
//! came before or after it. At transform time, every anchor match in the
//! input licenses a candidate insertion, and a seeded, weighted draw without
//! replacement picks as many as the degree of naturalization allows, at most
//! one per gap.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::hash::Hash;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus_prep::{clean_input, Filler, Sentence, Stage, Token};
use crate::pos_fallback::{transform_fallback, PosBigramTable, Tagger};
use crate::Error;

/// Serialized form of the sentence-start marker.
pub const START_TOKEN: &str = "<s>";

/// Which side of the anchor the filler sat on in the training data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// The filler precedes the anchor word.
    FillerBefore,
    /// The filler follows the anchor word.
    FillerAfter,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::FillerBefore => "before",
            Side::FillerAfter => "after",
        }
    }

    pub fn parse(s: &str) -> Option<Side> {
        match s {
            "before" => Some(Side::FillerBefore),
            "after" => Some(Side::FillerAfter),
            _ => None,
        }
    }
}

/// A bigram anchor: either the sentence-start marker or a concrete symbol
/// (a word for the word-level table, a POS tag for the fallback table).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Anchor<A> {
    Start,
    Sym(A),
}

impl<A: fmt::Display> Anchor<A> {
    pub fn render(&self) -> String {
        match self {
            Anchor::Start => START_TOKEN.to_string(),
            Anchor::Sym(a) => a.to_string(),
        }
    }
}

/// Symbols a frequency table can be keyed by. The associated header pins the
/// on-disk format so a word table can never be loaded as a POS table.
pub trait TableSymbol: Clone + Eq + Hash + Ord + fmt::Display {
    const FILE_HEADER: &'static str;

    fn parse_symbol(s: &str) -> Option<Self>;
}

impl TableSymbol for String {
    const FILE_HEADER: &'static str = "#disflow-bigrams v1";

    fn parse_symbol(s: &str) -> Option<String> {
        Some(s.to_string())
    }
}

/// Frequency table over filler-adjacent bigrams.
///
/// Counts are exact corpus frequencies; zero-count entries are never stored.
/// The start marker can only anchor a filler that follows it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FreqTable<A: TableSymbol> {
    entries: HashMap<(Anchor<A>, Filler, Side), u64>,
    total_lines: u64,
}

/// The word-level table of the primary method.
pub type BigramTable = FreqTable<String>;

impl<A: TableSymbol> FreqTable<A> {
    pub fn new() -> FreqTable<A> {
        FreqTable {
            entries: HashMap::new(),
            total_lines: 0,
        }
    }

    pub fn count(&self, anchor: &Anchor<A>, filler: Filler, side: Side) -> u64 {
        self.entries
            .get(&(anchor.clone(), filler, side))
            .copied()
            .unwrap_or(0)
    }

    /// Number of distinct (anchor, filler, side) entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// How many corpus sentences were counted into this table.
    pub fn total_lines(&self) -> u64 {
        self.total_lines
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Anchor<A>, Filler, Side), u64)> {
        self.entries.iter().map(|(k, &v)| (k, v))
    }

    /// Entrywise count summation, for sharded builds.
    pub fn merge(&mut self, other: &FreqTable<A>) {
        for (k, &v) in &other.entries {
            *self.entries.entry(k.clone()).or_insert(0) += v;
        }
        self.total_lines += other.total_lines;
    }

    fn bump(&mut self, anchor: Anchor<A>, filler: Filler, side: Side) {
        *self.entries.entry((anchor, filler, side)).or_insert(0) += 1;
    }

    /// Count one sentence given as a symbol/filler element sequence. A start
    /// marker is prepended; pairs where both members are fillers (or both are
    /// symbols) increment nothing.
    pub(crate) fn count_elems(&mut self, elems: &[Elem<A>]) {
        self.total_lines += 1;
        if let Some(Elem::Filler(f)) = elems.first() {
            self.bump(Anchor::Start, *f, Side::FillerAfter);
        }
        for pair in elems.windows(2) {
            match (&pair[0], &pair[1]) {
                (Elem::Sym(a), Elem::Filler(f)) => {
                    self.bump(Anchor::Sym(a.clone()), *f, Side::FillerAfter);
                }
                (Elem::Filler(f), Elem::Sym(b)) => {
                    self.bump(Anchor::Sym(b.clone()), *f, Side::FillerBefore);
                }
                _ => {}
            }
        }
    }

    /// Rows in on-disk order: descending count, then lexicographically by
    /// rendered anchor, filler surface, and side.
    pub fn sorted_rows(&self) -> Vec<(String, Filler, Side, u64)> {
        let mut rows: Vec<(String, Filler, Side, u64)> = self
            .entries
            .iter()
            .map(|((a, f, s), &n)| (a.render(), *f, *s, n))
            .collect();
        rows.sort_by(|x, y| {
            y.3.cmp(&x.3)
                .then_with(|| x.0.cmp(&y.0))
                .then_with(|| x.1.surface().cmp(y.1.surface()))
                .then_with(|| x.2.as_str().cmp(y.2.as_str()))
        });
        rows
    }

    /// Write the table as versioned, diffable, tab-separated text.
    pub fn save(&self, path: &Path) -> Result<(), Error> {
        let io_err = |source| Error::Io {
            path: path.to_path_buf(),
            source,
        };
        let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
        let mut write = || -> std::io::Result<()> {
            writeln!(w, "{}", A::FILE_HEADER)?;
            writeln!(w, "#total-lines {}", self.total_lines)?;
            for (anchor, filler, side, n) in self.sorted_rows() {
                writeln!(w, "{anchor}\t{}\t{}\t{n}", filler.surface(), side.as_str())?;
            }
            w.flush()
        };
        write().map_err(io_err)
    }

    pub fn load(path: &Path) -> Result<FreqTable<A>, Error> {
        let fmt_err = |line: usize, msg: String| Error::Format {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let file = File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut lines = BufReader::new(file).lines().enumerate();
        let mut next_line = |expect: &str| -> Result<(usize, String), Error> {
            match lines.next() {
                Some((idx, Ok(line))) => Ok((idx + 1, line)),
                Some((idx, Err(source))) => Err(Error::ReadLine {
                    path: path.to_path_buf(),
                    line: idx + 1,
                    source,
                }),
                None => Err(fmt_err(0, format!("missing {expect}"))),
            }
        };

        let (n, header) = next_line("header")?;
        if header != A::FILE_HEADER {
            return Err(fmt_err(n, format!("expected header {:?}, found {header:?}", A::FILE_HEADER)));
        }
        let (n, totals) = next_line("#total-lines header")?;
        let total_lines = totals
            .strip_prefix("#total-lines ")
            .and_then(|v| v.parse::<u64>().ok())
            .ok_or_else(|| fmt_err(n, format!("expected \"#total-lines N\", found {totals:?}")))?;

        let mut table = FreqTable {
            entries: HashMap::new(),
            total_lines,
        };
        for (idx, line) in lines {
            let n = idx + 1;
            let line = line.map_err(|source| Error::ReadLine {
                path: path.to_path_buf(),
                line: n,
                source,
            })?;
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 4 {
                return Err(fmt_err(n, format!("expected 4 tab-separated fields, found {}", fields.len())));
            }
            let anchor = if fields[0] == START_TOKEN {
                Anchor::Start
            } else {
                Anchor::Sym(
                    A::parse_symbol(fields[0])
                        .ok_or_else(|| fmt_err(n, format!("bad anchor {:?}", fields[0])))?,
                )
            };
            let filler = Filler::from_surface(fields[1])
                .ok_or_else(|| fmt_err(n, format!("bad filler {:?}", fields[1])))?;
            let side = Side::parse(fields[2])
                .ok_or_else(|| fmt_err(n, format!("bad side {:?}", fields[2])))?;
            let count: u64 = fields[3]
                .parse()
                .ok()
                .filter(|&c| c >= 1)
                .ok_or_else(|| fmt_err(n, format!("bad count {:?}", fields[3])))?;
            if anchor == Anchor::Start && side == Side::FillerBefore {
                return Err(fmt_err(n, "start marker cannot anchor a preceding filler".to_string()));
            }
            if table.entries.insert((anchor, filler, side), count).is_some() {
                return Err(fmt_err(n, "duplicate table entry".to_string()));
            }
        }
        Ok(table)
    }
}

/// One element of a sentence as seen by the counters: a symbol or a filler.
pub(crate) enum Elem<A> {
    Sym(A),
    Filler(Filler),
}

pub(crate) fn word_elems(sentence: &Sentence) -> Vec<Elem<String>> {
    sentence
        .tokens()
        .iter()
        .map(|t| match t {
            Token::Word(w) => Elem::Sym(w.clone()),
            Token::Filler(f) => Elem::Filler(*f),
        })
        .collect()
}

/// Count filler-adjacent bigrams over a normalized corpus.
pub fn build_table<I>(corpus: I) -> BigramTable
where
    I: IntoIterator<Item = Sentence>,
{
    let mut table = BigramTable::new();
    for sentence in corpus {
        table.count_elems(&word_elems(&sentence));
    }
    table
}

/// A single licensed insertion: put `filler` at `position` in the cleaned
/// input because the training data saw it next to `anchor` on `side`,
/// `weight` times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateInsertion {
    pub position: usize,
    pub filler: Filler,
    pub anchor: Anchor<String>,
    pub side: Side,
    pub weight: u64,
}

/// All candidate insertions for one input sentence, ordered by
/// (position, side, filler).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DrawSet {
    candidates: Vec<CandidateInsertion>,
}

impl DrawSet {
    /// Build a draw set from raw candidates. Panics on duplicate
    /// (position, filler, side) triples or zero weights; both indicate a bug
    /// in the caller, not bad input data.
    pub fn from_candidates(mut candidates: Vec<CandidateInsertion>) -> DrawSet {
        candidates.sort_by(|a, b| {
            a.position
                .cmp(&b.position)
                .then_with(|| a.side.cmp(&b.side))
                .then_with(|| a.filler.cmp(&b.filler))
        });
        for pair in candidates.windows(2) {
            assert!(
                (pair[0].position, pair[0].filler, pair[0].side)
                    != (pair[1].position, pair[1].filler, pair[1].side),
                "duplicate draw set candidate at position {}",
                pair[0].position
            );
        }
        for c in &candidates {
            assert!(c.weight >= 1, "candidate weight must be at least 1");
        }
        DrawSet { candidates }
    }

    pub fn candidates(&self) -> &[CandidateInsertion] {
        &self.candidates
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }

    /// Number of distinct insertion positions; the realized insertion count
    /// can never exceed this.
    pub fn distinct_positions(&self) -> usize {
        let mut last = None;
        let mut n = 0;
        for c in &self.candidates {
            if last != Some(c.position) {
                n += 1;
                last = Some(c.position);
            }
        }
        n
    }
}

/// Collect candidates for a symbol sequence against a matching table. Shared
/// by the word-level path and the POS fallback.
pub(crate) fn collect_candidates<A: TableSymbol>(
    syms: &[A],
    table: &FreqTable<A>,
) -> Vec<CandidateInsertion> {
    let mut out = Vec::new();
    for filler in Filler::ALL {
        let weight = table.count(&Anchor::Start, filler, Side::FillerAfter);
        if weight > 0 {
            out.push(CandidateInsertion {
                position: 0,
                filler,
                anchor: Anchor::Start,
                side: Side::FillerAfter,
                weight,
            });
        }
    }
    for (i, sym) in syms.iter().enumerate() {
        let anchor = Anchor::Sym(sym.clone());
        for filler in Filler::ALL {
            let after = table.count(&anchor, filler, Side::FillerAfter);
            if after > 0 {
                out.push(CandidateInsertion {
                    position: i + 1,
                    filler,
                    anchor: Anchor::Sym(sym.to_string()),
                    side: Side::FillerAfter,
                    weight: after,
                });
            }
            let before = table.count(&anchor, filler, Side::FillerBefore);
            if before > 0 {
                out.push(CandidateInsertion {
                    position: i,
                    filler,
                    anchor: Anchor::Sym(sym.to_string()),
                    side: Side::FillerBefore,
                    weight: before,
                });
            }
        }
    }
    out
}

/// Find every insertion the table licenses for a cleaned, filler-free
/// sentence. An empty result signals the fallback path.
pub fn draw_set(sentence: &Sentence, table: &BigramTable) -> DrawSet {
    assert_eq!(sentence.stage(), Stage::Cleaned, "draw_set needs a cleaned sentence");
    assert!(!sentence.has_filler(), "draw_set input must not contain fillers");
    let words: Vec<String> = sentence.words().map(str::to_string).collect();
    DrawSet::from_candidates(collect_candidates(&words, table))
}

/// Degree of naturalization and sampling seed for one transform call.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NaturalizationConfig {
    /// Target ratio of inserted fillers to input length, in [0, 1].
    pub degree: f64,
    pub rng_seed: u64,
}

impl NaturalizationConfig {
    pub fn new(degree: f64, rng_seed: u64) -> Result<NaturalizationConfig, Error> {
        if !(0.0..=1.0).contains(&degree) {
            return Err(Error::Degree(degree));
        }
        Ok(NaturalizationConfig { degree, rng_seed })
    }
}

impl Default for NaturalizationConfig {
    fn default() -> NaturalizationConfig {
        NaturalizationConfig {
            degree: 0.095,
            rng_seed: 0,
        }
    }
}

/// floor(degree x sentence length): how many fillers one sentence gets.
pub fn insertion_budget(degree: f64, sentence_len: usize) -> usize {
    assert!((0.0..=1.0).contains(&degree), "degree must lie in [0, 1]");
    (degree * sentence_len as f64).floor() as usize
}

/// How candidate weights enter the draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Weighting {
    /// Proportional to training frequency. The default; it gives the most
    /// natural-sounding insertions.
    Frequency,
    /// Every candidate equally likely, regardless of frequency.
    Uniform,
}

/// Frequency-weighted sampling without replacement; see
/// [`sample_subset_weighted`].
pub fn sample_subset(d: &DrawSet, budget: usize, rng_seed: u64) -> Vec<CandidateInsertion> {
    sample_subset_weighted(d, budget, rng_seed, Weighting::Frequency)
}

/// Draw min(budget, distinct positions) candidates without replacement.
///
/// Each draw picks a candidate with probability weight / (sum of remaining
/// weights); once a position is taken, every other candidate at that position
/// leaves the pool, so no gap receives two fillers. The generator is ChaCha8
/// seeded with `rng_seed`, and draws use integer cumulative weights, so
/// results are reproducible across platforms.
pub fn sample_subset_weighted(
    d: &DrawSet,
    budget: usize,
    rng_seed: u64,
    weighting: Weighting,
) -> Vec<CandidateInsertion> {
    let weight_of = |c: &CandidateInsertion| match weighting {
        Weighting::Frequency => c.weight,
        Weighting::Uniform => 1,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut pool: Vec<&CandidateInsertion> = d.candidates().iter().collect();
    let mut chosen = Vec::new();
    while chosen.len() < budget && !pool.is_empty() {
        let total: u64 = pool.iter().map(|c| weight_of(c)).sum();
        let mut r = rng.gen_range(0..total);
        let mut pick = pool.len() - 1;
        for (k, c) in pool.iter().enumerate() {
            let w = weight_of(c);
            if r < w {
                pick = k;
                break;
            }
            r -= w;
        }
        let selected = pool[pick].clone();
        pool.retain(|c| c.position != selected.position);
        chosen.push(selected);
    }
    chosen
}

/// Insert the chosen fillers into the cleaned sentence. Positions index the
/// original cleaned tokens and are applied highest first, so earlier
/// insertions never shift later ones. Duplicate positions are a programming
/// error and panic.
pub fn apply_insertions(sentence: &Sentence, chosen: &[CandidateInsertion]) -> Sentence {
    let len = sentence.tokens().len();
    let mut sorted: Vec<&CandidateInsertion> = chosen.iter().collect();
    sorted.sort_by_key(|c| c.position);
    for pair in sorted.windows(2) {
        assert!(
            pair[0].position != pair[1].position,
            "duplicate insertion position {}",
            pair[0].position
        );
    }
    let mut tokens = sentence.tokens().to_vec();
    for c in sorted.iter().rev() {
        assert!(c.position <= len, "insertion position {} out of range", c.position);
        tokens.insert(c.position, Token::Filler(c.filler));
    }
    Sentence::new(tokens, Stage::Transformed)
}

/// POS resources the bigram transform falls back to when the word-level draw
/// set comes up empty.
#[derive(Clone, Copy)]
pub struct FallbackResources<'a> {
    pub table: &'a PosBigramTable,
    pub tagger: &'a dyn Tagger,
}

/// The frequency-weighted bigram transformation, end to end: clean the input,
/// collect candidates, size the budget, sample, insert.
///
/// When the word table licenses nothing and a budget remains, the POS
/// fallback runs instead, if its resources are supplied; otherwise the
/// cleaned sentence passes through unchanged.
pub fn transform_bigram(
    text: &str,
    cfg: &NaturalizationConfig,
    table: &BigramTable,
    fallback: Option<FallbackResources<'_>>,
) -> Sentence {
    let cleaned = clean_input(text);
    let budget = insertion_budget(cfg.degree, cleaned.len());
    if budget == 0 {
        return apply_insertions(&cleaned, &[]);
    }
    let d = draw_set(&cleaned, table);
    if d.is_empty() {
        // The fallback is reachable only from here, with the word-level draw
        // set empty and budget still unspent.
        if let Some(fb) = fallback {
            return transform_fallback(&cleaned, cfg, fb.table, fb.tagger);
        }
        return apply_insertions(&cleaned, &[]);
    }
    let chosen = sample_subset(&d, budget, cfg.rng_seed);
    apply_insertions(&cleaned, &chosen)
}
