//! Corpus ingestion and normalization.
//!
//! Raw dialogue lines spell hesitation every way imaginable: "Uhh,", "uhm",
//! "well...", an ellipsis character, a row of dashes. Everything funnels down
//! to three canonical tokens, `(pause)`, `(uh)` and `(um)`. Lines that contain
//! no disfluency at all are dropped from the training corpus; that filter is
//! the whole point of preprocessing.
//!
//! The same tokenizer also cleans transform-time input: words are maximal runs
//! of letters and apostrophes, apostrophes are deleted in place ("Let's" →
//! "lets"), everything else is a token boundary. Pause runs are recognized
//! before punctuation is stripped, otherwise ".." would be destroyed before
//! being seen.

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use crate::Error;

/// The three canonical disfluency tokens.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Filler {
    Pause,
    Uh,
    Um,
}

impl Filler {
    /// Fixed iteration order used everywhere a table is scanned per filler.
    pub const ALL: [Filler; 3] = [Filler::Pause, Filler::Uh, Filler::Um];

    pub fn surface(self) -> &'static str {
        match self {
            Filler::Pause => "(pause)",
            Filler::Uh => "(uh)",
            Filler::Um => "(um)",
        }
    }

    pub fn from_surface(s: &str) -> Option<Filler> {
        match s {
            "(pause)" => Some(Filler::Pause),
            "(uh)" => Some(Filler::Uh),
            "(um)" => Some(Filler::Um),
            _ => None,
        }
    }
}

impl fmt::Display for Filler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.surface())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Token {
    Word(String),
    Filler(Filler),
}

impl Token {
    pub fn surface(&self) -> &str {
        match self {
            Token::Word(w) => w,
            Token::Filler(f) => f.surface(),
        }
    }

    pub fn is_filler(&self) -> bool {
        matches!(self, Token::Filler(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Raw,
    Cleaned,
    Transformed,
}

/// An ordered token sequence tagged with how far through the pipeline it is.
///
/// A `Cleaned` sentence holds only lowercase word tokens and canonical
/// fillers. A `Transformed` sentence is a cleaned sentence plus inserted
/// fillers: stripping them recovers the cleaned form token for token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    tokens: Vec<Token>,
    stage: Stage,
}

impl Sentence {
    pub(crate) fn new(tokens: Vec<Token>, stage: Stage) -> Sentence {
        Sentence { tokens, stage }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Word tokens only, in order; fillers are skipped.
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().filter_map(|t| match t {
            Token::Word(w) => Some(w.as_str()),
            Token::Filler(_) => None,
        })
    }

    pub fn has_filler(&self) -> bool {
        self.tokens.iter().any(Token::is_filler)
    }

    /// Tokens joined with single spaces, fillers as their canonical surfaces.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(t.surface());
        }
        out
    }

    /// Drop every filler token, yielding the underlying cleaned sentence.
    pub fn strip_fillers(&self) -> Sentence {
        let tokens = self
            .tokens
            .iter()
            .filter(|t| !t.is_filler())
            .cloned()
            .collect();
        Sentence::new(tokens, Stage::Cleaned)
    }

    /// Parse one line of an already-normalized corpus file: whitespace-split
    /// tokens, with the three canonical surfaces recognized as fillers.
    pub fn parse_cleaned(line: &str) -> Sentence {
        let tokens = line
            .split_whitespace()
            .map(|t| match Filler::from_surface(t) {
                Some(f) => Token::Filler(f),
                None => Token::Word(t.to_string()),
            })
            .collect();
        Sentence::new(tokens, Stage::Cleaned)
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphabetic() || c == '\'' || c == '\u{2019}'
}

/// Lowercase a letter-and-apostrophe run and delete the apostrophes.
pub(crate) fn canon_word(run: &str) -> String {
    run.chars()
        .filter(|&c| c != '\'' && c != '\u{2019}')
        .flat_map(char::to_lowercase)
        .collect()
}

/// Whole-token filler variant match over an already canonicalized word:
/// `u+h+` is an "uh" variant, `u+[hm]?m+` an "um" variant. Anything else,
/// including a bare "u" or words that merely contain these letters, is not
/// a filler.
fn filler_variant(word: &str) -> Option<Filler> {
    let b = word.as_bytes();
    let n = b.len();
    let mut i = 0;
    while i < n && b[i] == b'u' {
        i += 1;
    }
    if i == 0 {
        return None;
    }
    if i < n && b[i..].iter().all(|&c| c == b'h') {
        return Some(Filler::Uh);
    }
    let mut j = i;
    if j < n && b[j] == b'h' {
        j += 1;
    }
    if j < n && b[j..].iter().all(|&c| c == b'm') {
        return Some(Filler::Um);
    }
    None
}

enum Piece<'a> {
    Text(&'a str),
    Pause,
}

/// Split a raw line around pause variants: runs of two or more periods, runs
/// of two or more dashes, or an ellipsis character. Single periods and dashes
/// stay in the text and are stripped later as ordinary punctuation.
fn split_pauses(line: &str) -> Vec<Piece<'_>> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut it = line.char_indices().peekable();
    while let Some((i, c)) = it.next() {
        let run_end = match c {
            '\u{2026}' => Some(i + c.len_utf8()),
            '.' | '-' => {
                let mut end = i + 1;
                let mut count = 1;
                while let Some(&(j, d)) = it.peek() {
                    if d == c {
                        count += 1;
                        end = j + 1;
                        it.next();
                    } else {
                        break;
                    }
                }
                (count >= 2).then_some(end)
            }
            _ => None,
        };
        if let Some(end) = run_end {
            if start < i {
                out.push(Piece::Text(&line[start..i]));
            }
            out.push(Piece::Pause);
            start = end;
        }
    }
    if start < line.len() {
        out.push(Piece::Text(&line[start..]));
    }
    out
}

/// Normalize one raw corpus line, or return `None` when it contains no
/// disfluency and therefore does not belong in the training corpus.
///
/// Detection order: pause variants, then filler-word variants, then
/// lowercasing and removal of remaining punctuation and digits.
pub fn normalize_line(line: &str) -> Option<Sentence> {
    let mut tokens = Vec::new();
    let mut saw_disfluency = false;
    for piece in split_pauses(line) {
        match piece {
            Piece::Pause => {
                tokens.push(Token::Filler(Filler::Pause));
                saw_disfluency = true;
            }
            Piece::Text(text) => {
                for run in text.split(|c| !is_word_char(c)).filter(|s| !s.is_empty()) {
                    let w = canon_word(run);
                    if w.is_empty() {
                        continue;
                    }
                    match filler_variant(&w) {
                        Some(f) => {
                            tokens.push(Token::Filler(f));
                            saw_disfluency = true;
                        }
                        None => tokens.push(Token::Word(w)),
                    }
                }
            }
        }
    }
    saw_disfluency.then(|| Sentence::new(tokens, Stage::Cleaned))
}

/// Clean a transform-time input: lowercase word tokens only, punctuation and
/// digits removed. Never fails; an empty sentence is a valid result.
pub fn clean_input(text: &str) -> Sentence {
    let tokens = text
        .split(|c: char| !is_word_char(c))
        .filter(|s| !s.is_empty())
        .filter_map(|run| {
            let w = canon_word(run);
            (!w.is_empty()).then_some(Token::Word(w))
        })
        .collect();
    Sentence::new(tokens, Stage::Cleaned)
}

/// Stream a raw corpus through [`normalize_line`], keeping only disfluent
/// lines. Read errors surface with the 1-based line number at which they
/// occurred.
pub fn extract_training_corpus<I>(lines: I) -> impl Iterator<Item = Result<Sentence, Error>>
where
    I: IntoIterator<Item = io::Result<String>>,
{
    lines
        .into_iter()
        .enumerate()
        .filter_map(|(idx, res)| match res {
            Ok(line) => normalize_line(&line).map(Ok),
            Err(source) => Some(Err(Error::Stream {
                line: idx + 1,
                source,
            })),
        })
}

/// Read a normalized corpus file produced by preprocessing, one cleaned
/// sentence per line.
pub fn load_cleaned_corpus(path: &Path) -> Result<Vec<Sentence>, Error> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| Error::ReadLine {
            path: path.to_path_buf(),
            line: idx + 1,
            source,
        })?;
        if !line.trim().is_empty() {
            out.push(Sentence::parse_cleaned(&line));
        }
    }
    Ok(out)
}
