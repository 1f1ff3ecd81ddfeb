//! disflow naturalizes written text for speech synthesis by inserting the
//! pauses and filler words that make read-aloud text sound conversational.
//!
//! Two methods are provided. The frequency method counts filler-adjacent
//! bigrams in a disfluent training corpus and inserts fillers next to words
//! the corpus saw them next to, sampled proportionally to frequency. The
//! hybrid method takes the same candidates but lets a small LSTM language
//! model confirm each one before it goes in, trading recall for precision.
//! Both are tunable through a degree of naturalization, the target ratio of
//! inserted fillers to input words.
//!
//! The pipeline, end to end:
//!
//! ```text
//! raw corpus --preprocess--> cleaned corpus --build--> bigram + POS tables
//!                                          --train--> LSTM confirmer
//! input text --transform--> naturalized text
//! ```
//!
//! Every stage is deterministic given its seeds, so corpus builds, training
//! runs, and transformations are reproducible bit for bit.

use std::path::PathBuf;

pub mod bigram_model;
pub mod cli;
pub mod corpus_prep;
pub mod hybrid_pipeline;
pub mod neural_predictor;
pub mod pos_fallback;

pub use bigram_model::{
    apply_insertions, build_table, draw_set, insertion_budget, sample_subset,
    sample_subset_weighted, transform_bigram, Anchor, BigramTable, CandidateInsertion, DrawSet,
    FallbackResources, FreqTable, NaturalizationConfig, Side, TableSymbol, Weighting, START_TOKEN,
};
pub use corpus_prep::{
    clean_input, extract_training_corpus, load_cleaned_corpus, normalize_line, Filler, Sentence,
    Stage, Token,
};
pub use hybrid_pipeline::{
    confirm, confirmation_context, hybrid_candidates, hybrid_insertions, replace_first_pauses,
    transform_hybrid, ConfirmedInsertion,
};
pub use neural_predictor::{
    batch_gradients, batch_loss, load_model, make_sequences, predict_next, save_model,
    select_representative, train, LstmModel, SequenceExample, TrainConfig, Trained, Vocabulary,
    HIDDEN_UNITS, OOV_ID, OOV_TOKEN,
};
pub use pos_fallback::{
    build_pos_table, tag_sentence, transform_fallback, LexiconTagger, PosBigramTable, PosTag,
    Tagger,
};

/// Everything that can go wrong outside of programming errors: bad files,
/// failing streams, out-of-range configuration, degenerate training input.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot access {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("read failed in {} at line {line}", path.display())]
    ReadLine {
        path: PathBuf,
        line: usize,
        #[source]
        source: std::io::Error,
    },

    #[error("read failed at line {line}")]
    Stream {
        line: usize,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}: {msg}", path.display())]
    Format { path: PathBuf, line: usize, msg: String },

    #[error("degree of naturalization must lie in [0, 1], got {0}")]
    Degree(f64),

    #[error("no training examples: no sentence has three or more tokens")]
    NoExamples,
}
