//! Part-of-speech fallback for inputs the word-level table has never seen.
//!
//! A small rule-based tagger maps each word to one of eleven coarse tags.
//! Filler-adjacent bigrams counted over tags instead of words give a second,
//! much denser table; when an input sentence matches nothing in the word
//! table, its tag sequence almost always matches something here.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::path::Path;

use crate::bigram_model::{
    apply_insertions, collect_candidates, insertion_budget, sample_subset, DrawSet, Elem,
    FreqTable, NaturalizationConfig, TableSymbol,
};
use crate::corpus_prep::{canon_word, Sentence, Stage, Token};
use crate::Error;

/// Coarse part-of-speech tags. `X` is the catch-all for anything the lexicon
/// and suffix rules cannot place.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PosTag {
    Noun,
    Verb,
    Adj,
    Adv,
    Pron,
    Det,
    Adp,
    Conj,
    Num,
    Prt,
    X,
}

impl PosTag {
    pub const ALL: [PosTag; 11] = [
        PosTag::Noun,
        PosTag::Verb,
        PosTag::Adj,
        PosTag::Adv,
        PosTag::Pron,
        PosTag::Det,
        PosTag::Adp,
        PosTag::Conj,
        PosTag::Num,
        PosTag::Prt,
        PosTag::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PosTag::Noun => "NOUN",
            PosTag::Verb => "VERB",
            PosTag::Adj => "ADJ",
            PosTag::Adv => "ADV",
            PosTag::Pron => "PRON",
            PosTag::Det => "DET",
            PosTag::Adp => "ADP",
            PosTag::Conj => "CONJ",
            PosTag::Num => "NUM",
            PosTag::Prt => "PRT",
            PosTag::X => "X",
        }
    }

    pub fn parse(s: &str) -> Option<PosTag> {
        PosTag::ALL.into_iter().find(|t| t.as_str() == s)
    }
}

impl fmt::Display for PosTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl TableSymbol for PosTag {
    const FILE_HEADER: &'static str = "#disflow-pos-bigrams v1";

    fn parse_symbol(s: &str) -> Option<PosTag> {
        PosTag::parse(s)
    }
}

/// Filler-adjacent bigram table keyed by POS tag.
pub type PosBigramTable = FreqTable<PosTag>;

/// Anything that can assign a tag to a canonicalized word.
pub trait Tagger {
    fn tag(&self, word: &str) -> PosTag;
}

const LEXICON_HEADER: &str = "#disflow-lexicon v1";

/// Lexicon lookup with suffix rules behind it. Words missing from both get
/// tagged `X`.
#[derive(Debug)]
pub struct LexiconTagger {
    lexicon: HashMap<String, PosTag>,
}

impl LexiconTagger {
    /// The tagger over the lexicon compiled into the library.
    pub fn bundled() -> LexiconTagger {
        LexiconTagger::parse(include_str!("../data/lexicon.tsv"), Path::new("<bundled>"))
            .expect("bundled lexicon is well formed")
    }

    pub fn from_file(path: &Path) -> Result<LexiconTagger, Error> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        LexiconTagger::parse(&text, path)
    }

    fn parse(text: &str, path: &Path) -> Result<LexiconTagger, Error> {
        let fmt_err = |line: usize, msg: String| Error::Format {
            path: path.to_path_buf(),
            line,
            msg,
        };
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, LEXICON_HEADER)) => {}
            Some((_, other)) => {
                return Err(fmt_err(1, format!("expected header {LEXICON_HEADER:?}, found {other:?}")))
            }
            None => return Err(fmt_err(0, "empty lexicon".to_string())),
        }
        let mut lexicon = HashMap::new();
        for (idx, line) in lines {
            let n = idx + 1;
            if line.is_empty() {
                continue;
            }
            let (word, tag) = line
                .split_once('\t')
                .ok_or_else(|| fmt_err(n, "expected \"word<TAB>TAG\"".to_string()))?;
            if word.is_empty() || canon_word(word) != word {
                return Err(fmt_err(n, format!("word {word:?} is not in canonical form")));
            }
            let tag = PosTag::parse(tag).ok_or_else(|| fmt_err(n, format!("bad tag {tag:?}")))?;
            if lexicon.insert(word.to_string(), tag).is_some() {
                return Err(fmt_err(n, format!("duplicate lexicon word {word:?}")));
            }
        }
        Ok(LexiconTagger { lexicon })
    }

    pub fn len(&self) -> usize {
        self.lexicon.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lexicon.is_empty()
    }
}

impl Tagger for LexiconTagger {
    fn tag(&self, word: &str) -> PosTag {
        if let Some(&tag) = self.lexicon.get(word) {
            return tag;
        }
        suffix_tag(word)
    }
}

/// Guess a tag from word shape. Rules apply in order; lengths are in
/// characters so short function words never match the inflection rules.
fn suffix_tag(word: &str) -> PosTag {
    let n = word.chars().count();
    if n >= 5 && word.ends_with("ly") {
        return PosTag::Adv;
    }
    if n >= 5 && word.ends_with("ing") {
        return PosTag::Verb;
    }
    if n >= 4 && word.ends_with("ed") {
        return PosTag::Verb;
    }
    for noun_suffix in ["ness", "ment", "tion", "sion", "ship", "ence", "ance"] {
        if word.ends_with(noun_suffix) {
            return PosTag::Noun;
        }
    }
    for adj_suffix in ["ous", "ful", "ive", "less", "able", "ible"] {
        if word.ends_with(adj_suffix) {
            return PosTag::Adj;
        }
    }
    if n >= 4 && word.ends_with('s') && !word.ends_with("ss") {
        return PosTag::Noun;
    }
    PosTag::X
}

/// Tag every word of a filler-free sentence, in order.
pub fn tag_sentence(sentence: &Sentence, tagger: &dyn Tagger) -> Vec<PosTag> {
    assert!(!sentence.has_filler(), "tag_sentence input must not contain fillers");
    sentence.words().map(|w| tagger.tag(w)).collect()
}

/// Count filler-adjacent bigrams over tag sequences instead of words.
pub fn build_pos_table<I>(corpus: I, tagger: &dyn Tagger) -> PosBigramTable
where
    I: IntoIterator<Item = Sentence>,
{
    let mut table = PosBigramTable::new();
    for sentence in corpus {
        table.count_elems(&pos_elems(&sentence, tagger));
    }
    table
}

pub(crate) fn pos_elems(sentence: &Sentence, tagger: &dyn Tagger) -> Vec<Elem<PosTag>> {
    sentence
        .tokens()
        .iter()
        .map(|t| match t {
            Token::Word(w) => Elem::Sym(tagger.tag(w)),
            Token::Filler(f) => Elem::Filler(*f),
        })
        .collect()
}

/// The POS-level transformation. Same budget and sampling machinery as the
/// word-level method, but candidates come from the sentence's tag sequence.
/// If even the tag table licenses nothing, the sentence passes through.
pub fn transform_fallback(
    sentence: &Sentence,
    cfg: &NaturalizationConfig,
    table: &PosBigramTable,
    tagger: &dyn Tagger,
) -> Sentence {
    assert_eq!(sentence.stage(), Stage::Cleaned, "transform_fallback needs a cleaned sentence");
    let budget = insertion_budget(cfg.degree, sentence.len());
    if budget == 0 {
        return apply_insertions(sentence, &[]);
    }
    let tags = tag_sentence(sentence, tagger);
    let d = DrawSet::from_candidates(collect_candidates(&tags, table));
    if d.is_empty() {
        return apply_insertions(sentence, &[]);
    }
    let chosen = sample_subset(&d, budget, cfg.rng_seed);
    apply_insertions(sentence, &chosen)
}
