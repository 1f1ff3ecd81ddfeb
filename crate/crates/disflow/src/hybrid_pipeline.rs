//! The hybrid method: bigram candidates, neurally confirmed.
//!
//! The word-level table proposes insertions exactly as in the frequency
//! method, restricted to fillers that follow their anchor. Each proposal is
//! then replayed past the language model: insert the filler only if the model
//! itself predicts that filler right after the two words preceding the gap.
//! Confirmation is strict, so sentences often come back with fewer fillers
//! than the budget allows; leftover budget converts already-placed pauses
//! into voiced fillers, which listeners rate as more natural than silence.

use crate::bigram_model::{
    apply_insertions, draw_set, insertion_budget, BigramTable, CandidateInsertion, DrawSet,
    NaturalizationConfig, Side,
};
use crate::corpus_prep::{clean_input, Filler, Sentence, Token};
use crate::neural_predictor::{predict_next, LstmModel, Vocabulary};

/// A candidate that survived neural confirmation, with the prediction that
/// confirmed it. By construction `predicted` equals the candidate's filler
/// surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfirmedInsertion {
    pub candidate: CandidateInsertion,
    pub predicted: String,
}

/// Table-licensed candidates eligible for neural confirmation: the draw set
/// restricted to fillers that follow their anchor. Candidates whose training
/// bigram had the filler first are discarded.
pub fn hybrid_candidates(sentence: &Sentence, table: &BigramTable) -> DrawSet {
    let kept = draw_set(sentence, table)
        .candidates()
        .iter()
        .filter(|c| c.side == Side::FillerAfter)
        .cloned()
        .collect();
    DrawSet::from_candidates(kept)
}

/// The two words immediately before insertion position `position`, as the
/// model's prediction context. Positions near the sentence start left-pad
/// with the empty string, which the vocabulary maps out of vocabulary.
pub fn confirmation_context(sentence: &Sentence, position: usize) -> (String, String) {
    let tokens = sentence.tokens();
    assert!(position <= tokens.len(), "position {position} out of range");
    match position {
        0 => (String::new(), String::new()),
        1 => (String::new(), tokens[0].surface().to_string()),
        p => (
            tokens[p - 2].surface().to_string(),
            tokens[p - 1].surface().to_string(),
        ),
    }
}

/// Ask the model about one candidate: it is confirmed exactly when the
/// predicted next token after the two words before its gap is the
/// candidate's own filler.
pub fn confirm(
    sentence: &Sentence,
    candidate: &CandidateInsertion,
    model: &LstmModel,
    vocab: &Vocabulary,
) -> Option<ConfirmedInsertion> {
    let (a, b) = confirmation_context(sentence, candidate.position);
    let predicted = predict_next(model, (&a, &b), vocab);
    if predicted == candidate.filler.surface() {
        Some(ConfirmedInsertion {
            candidate: candidate.clone(),
            predicted,
        })
    } else {
        None
    }
}

/// Run the confirmation pass: walk candidates in position order, keep each
/// confirmed one, and stop once `budget` many are confirmed.
///
/// All candidates at one position share a context, and the model predicts a
/// single token for it, so at most one candidate per position survives; the
/// result always has distinct positions.
pub fn hybrid_insertions(
    sentence: &Sentence,
    budget: usize,
    table: &BigramTable,
    model: &LstmModel,
    vocab: &Vocabulary,
) -> Vec<ConfirmedInsertion> {
    let mut confirmed = Vec::new();
    for candidate in hybrid_candidates(sentence, table).candidates() {
        if confirmed.len() == budget {
            break;
        }
        if let Some(c) = confirm(sentence, candidate, model, vocab) {
            confirmed.push(c);
        }
    }
    confirmed
}

/// Replace the first `n` pause tokens, in reading order, with voiced
/// fillers, alternating (um), (uh), (um), and so on. Fewer than `n` pauses
/// means all of them change. The seed parameter keeps the signature uniform
/// with the sampling functions; the replacement sequence itself is fixed.
pub fn replace_first_pauses(sentence: &Sentence, n: usize, rng_seed: u64) -> Sentence {
    let _ = rng_seed;
    let mut tokens = sentence.tokens().to_vec();
    let mut replaced = 0;
    for token in tokens.iter_mut() {
        if replaced == n {
            break;
        }
        if *token == Token::Filler(Filler::Pause) {
            *token = Token::Filler(if replaced % 2 == 0 { Filler::Um } else { Filler::Uh });
            replaced += 1;
        }
    }
    Sentence::new(tokens, sentence.stage())
}

/// The full hybrid transformation. Whatever budget the confirmation pass
/// leaves unspent goes into pause replacement, so a sentence the model is
/// confident about keeps its pauses and a hesitant one trades them for
/// voiced fillers.
pub fn transform_hybrid(
    text: &str,
    cfg: &NaturalizationConfig,
    table: &BigramTable,
    model: &LstmModel,
    vocab: &Vocabulary,
) -> Sentence {
    let cleaned = clean_input(text);
    let budget = insertion_budget(cfg.degree, cleaned.len());
    if budget == 0 {
        return apply_insertions(&cleaned, &[]);
    }
    let confirmed = hybrid_insertions(&cleaned, budget, table, model, vocab);
    let chosen: Vec<CandidateInsertion> =
        confirmed.iter().map(|c| c.candidate.clone()).collect();
    let transformed = apply_insertions(&cleaned, &chosen);
    let leftover = budget - chosen.len();
    replace_first_pauses(&transformed, leftover, cfg.rng_seed)
}
