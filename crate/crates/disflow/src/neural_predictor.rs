//! The neural confirmer: a single-layer LSTM language model trained from
//! scratch, with no dependencies beyond the random number generator.
//!
//! The model reads a two-token context and predicts the next token over a
//! closed vocabulary. Everything is deliberately small and explicit: flat
//! parameter vector, one-hot inputs, full-batch gradients, Adam updates.
//! Training on a handful of representative sentences is enough for its one
//! job, confirming or rejecting candidate filler insertions.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::ops::Range;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus_prep::{Filler, Sentence};
use crate::Error;

/// Hidden state width used by [`train`].
pub const HIDDEN_UNITS: usize = 100;

/// Token id reserved for anything outside the vocabulary; also the id of the
/// empty string used to left-pad short contexts.
pub const OOV_ID: usize = 0;

pub const OOV_TOKEN: &str = "<oov>";

/// Closed token-to-id mapping. Id 0 is the out-of-vocabulary marker, ids 1
/// through 3 are the fillers, and the rest follow first occurrence in the
/// training sentences.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    tokens: Vec<String>,
    ids: HashMap<String, usize>,
}

impl Vocabulary {
    pub fn build(corpus: &[Sentence]) -> Vocabulary {
        let mut vocab = Vocabulary {
            tokens: Vec::new(),
            ids: HashMap::new(),
        };
        vocab.push(OOV_TOKEN);
        for f in Filler::ALL {
            vocab.push(f.surface());
        }
        for sentence in corpus {
            for token in sentence.tokens() {
                if !vocab.ids.contains_key(token.surface()) {
                    vocab.push(token.surface());
                }
            }
        }
        vocab
    }

    fn push(&mut self, token: &str) {
        self.ids.insert(token.to_string(), self.tokens.len());
        self.tokens.push(token.to_string());
    }

    pub fn id(&self, token: &str) -> Option<usize> {
        self.ids.get(token).copied()
    }

    /// Lookup that maps unknown tokens, including the empty padding string,
    /// to [`OOV_ID`].
    pub fn id_or_oov(&self, token: &str) -> usize {
        self.id(token).unwrap_or(OOV_ID)
    }

    pub fn token(&self, id: usize) -> &str {
        &self.tokens[id]
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// One training example: two consecutive token ids and the id that followed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SequenceExample {
    pub context: [usize; 2],
    pub target: usize,
}

/// Every consecutive token triple in the corpus, as (2-context, target) ids.
/// Sentences shorter than three tokens contribute nothing.
pub fn make_sequences(corpus: &[Sentence], vocab: &Vocabulary) -> Vec<SequenceExample> {
    let mut out = Vec::new();
    for sentence in corpus {
        let ids: Vec<usize> = sentence
            .tokens()
            .iter()
            .map(|t| vocab.id_or_oov(t.surface()))
            .collect();
        for w in ids.windows(3) {
            out.push(SequenceExample {
                context: [w[0], w[1]],
                target: w[2],
            });
        }
    }
    out
}

/// Rank filler-bearing sentences by how typical their words are of the whole
/// corpus: the mean natural log of each token's corpus-wide count. Ties keep
/// corpus order.
pub(crate) fn representative_ranking(corpus: &[Sentence]) -> Vec<(usize, f64)> {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for sentence in corpus {
        for token in sentence.tokens() {
            *counts.entry(token.surface()).or_insert(0) += 1;
        }
    }
    let mut scored: Vec<(usize, f64)> = corpus
        .iter()
        .enumerate()
        .filter(|(_, s)| s.has_filler())
        .map(|(idx, s)| {
            let sum: f64 = s
                .tokens()
                .iter()
                .map(|t| (counts[t.surface()] as f64).ln())
                .sum();
            (idx, sum / s.len() as f64)
        })
        .collect();
    scored.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("scores are finite"));
    scored
}

/// The `n` most representative filler-bearing sentences of the corpus, most
/// representative first. Shorter than `n` if the corpus has fewer eligible
/// sentences.
pub fn select_representative(corpus: &[Sentence], n: usize) -> Vec<Sentence> {
    representative_ranking(corpus)
        .into_iter()
        .take(n)
        .map(|(idx, _)| corpus[idx].clone())
        .collect()
}

/// Hyperparameters for [`train`]. The defaults are the ones every shipped
/// model was trained with.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub rng_seed: u64,
}

impl Default for TrainConfig {
    fn default() -> TrainConfig {
        TrainConfig {
            epochs: 300,
            learning_rate: 0.01,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            rng_seed: 0,
        }
    }
}

/// Byte offsets of each parameter block inside the flat vector. Order:
/// input gate, forget gate, output gate, cell candidate (weights then bias
/// for each), then the output projection and its bias. Gate weight matrices
/// are h x (v + h), row-major, acting on the concatenation of the one-hot
/// input and the previous hidden state.
#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub(crate) v: usize,
    pub(crate) h: usize,
    pub(crate) wi: Range<usize>,
    pub(crate) bi: Range<usize>,
    pub(crate) wf: Range<usize>,
    pub(crate) bf: Range<usize>,
    pub(crate) wo: Range<usize>,
    pub(crate) bo: Range<usize>,
    pub(crate) wg: Range<usize>,
    pub(crate) bg: Range<usize>,
    pub(crate) why: Range<usize>,
    pub(crate) by: Range<usize>,
    pub(crate) len: usize,
}

impl Layout {
    fn of(v: usize, h: usize) -> Layout {
        let gate_w = h * (v + h);
        let mut pos = 0;
        let mut take = |n: usize| {
            let r = pos..pos + n;
            pos += n;
            r
        };
        let wi = take(gate_w);
        let bi = take(h);
        let wf = take(gate_w);
        let bf = take(h);
        let wo = take(gate_w);
        let bo = take(h);
        let wg = take(gate_w);
        let bg = take(h);
        let why = take(v * h);
        let by = take(v);
        Layout { v, h, wi, bi, wf, bf, wo, bo, wg, bg, why, by, len: pos }
    }
}

/// Single-layer LSTM over one-hot token inputs with a softmax readout.
#[derive(Clone, Debug, PartialEq)]
pub struct LstmModel {
    vocab_size: usize,
    hidden: usize,
    theta: Vec<f64>,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

fn softmax(y: &[f64]) -> Vec<f64> {
    let max = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = y.iter().map(|&v| (v - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Everything one forward step produces, kept for backpropagation.
struct StepState {
    hot: usize,
    hprev: Vec<f64>,
    cprev: Vec<f64>,
    i: Vec<f64>,
    f: Vec<f64>,
    o: Vec<f64>,
    g: Vec<f64>,
    tc: Vec<f64>,
    c: Vec<f64>,
    h: Vec<f64>,
}

impl LstmModel {
    pub fn zeroed(vocab_size: usize, hidden: usize) -> LstmModel {
        assert!(vocab_size >= 1 && hidden >= 1);
        let len = Layout::of(vocab_size, hidden).len;
        LstmModel {
            vocab_size,
            hidden,
            theta: vec![0.0; len],
        }
    }

    /// Fresh trainable parameters: every weight uniform in [-0.05, 0.05],
    /// every bias zero except the forget gate's, which starts at 1 so early
    /// updates do not wipe the cell state.
    pub fn random(vocab_size: usize, hidden: usize, seed: u64) -> LstmModel {
        let mut model = LstmModel::zeroed(vocab_size, hidden);
        let lay = model.layout();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for range in [lay.wi, lay.wf, lay.wo, lay.wg, lay.why] {
            for k in range {
                model.theta[k] = rng.gen_range(-0.05..=0.05);
            }
        }
        for k in lay.bf {
            model.theta[k] = 1.0;
        }
        model
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn hidden_units(&self) -> usize {
        self.hidden
    }

    pub fn params(&self) -> &[f64] {
        &self.theta
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.theta
    }

    pub fn param_len(&self) -> usize {
        self.theta.len()
    }

    pub(crate) fn layout(&self) -> Layout {
        Layout::of(self.vocab_size, self.hidden)
    }

    /// Gate preactivation for one row block: bias plus the one-hot column
    /// plus the hidden block times the previous hidden state. The one-hot
    /// input never needs materializing.
    fn preact(&self, w: &Range<usize>, b: &Range<usize>, hot: usize, hprev: &[f64]) -> Vec<f64> {
        let w = &self.theta[w.clone()];
        let b = &self.theta[b.clone()];
        let width = self.vocab_size + self.hidden;
        (0..self.hidden)
            .map(|r| {
                let row = &w[r * width..(r + 1) * width];
                let mut a = b[r] + row[hot];
                for (j, hj) in hprev.iter().enumerate() {
                    a += row[self.vocab_size + j] * hj;
                }
                a
            })
            .collect()
    }

    fn step(&self, hot: usize, hprev: &[f64], cprev: &[f64]) -> StepState {
        assert!(hot < self.vocab_size, "token id {hot} outside vocabulary");
        let lay = self.layout();
        let i: Vec<f64> = self.preact(&lay.wi, &lay.bi, hot, hprev).iter().map(|&a| sigmoid(a)).collect();
        let f: Vec<f64> = self.preact(&lay.wf, &lay.bf, hot, hprev).iter().map(|&a| sigmoid(a)).collect();
        let o: Vec<f64> = self.preact(&lay.wo, &lay.bo, hot, hprev).iter().map(|&a| sigmoid(a)).collect();
        let g: Vec<f64> = self.preact(&lay.wg, &lay.bg, hot, hprev).iter().map(|&a| a.tanh()).collect();
        let c: Vec<f64> = (0..self.hidden).map(|j| f[j] * cprev[j] + i[j] * g[j]).collect();
        let tc: Vec<f64> = c.iter().map(|&cj| cj.tanh()).collect();
        let h: Vec<f64> = (0..self.hidden).map(|j| o[j] * tc[j]).collect();
        StepState {
            hot,
            hprev: hprev.to_vec(),
            cprev: cprev.to_vec(),
            i,
            f,
            o,
            g,
            tc,
            c,
            h,
        }
    }

    fn forward_states(&self, context: [usize; 2]) -> (Vec<f64>, [StepState; 2]) {
        let zeros = vec![0.0; self.hidden];
        let s1 = self.step(context[0], &zeros, &zeros);
        let s2 = self.step(context[1], &s1.h, &s1.c);
        let lay = self.layout();
        let why = &self.theta[lay.why];
        let by = &self.theta[lay.by];
        let y: Vec<f64> = (0..self.vocab_size)
            .map(|r| {
                let row = &why[r * self.hidden..(r + 1) * self.hidden];
                let mut v = by[r];
                for (j, hj) in s2.h.iter().enumerate() {
                    v += row[j] * hj;
                }
                v
            })
            .collect();
        (softmax(&y), [s1, s2])
    }

    /// Probability of every vocabulary token following the two-token context.
    pub fn forward(&self, context: [usize; 2]) -> Vec<f64> {
        self.forward_states(context).0
    }
}

/// Mean cross-entropy of the batch under the model.
pub fn batch_loss(model: &LstmModel, examples: &[SequenceExample]) -> f64 {
    assert!(!examples.is_empty(), "loss of an empty batch");
    let total: f64 = examples
        .iter()
        .map(|ex| -model.forward(ex.context)[ex.target].ln())
        .sum();
    total / examples.len() as f64
}

/// Mean cross-entropy of the batch and its gradient with respect to every
/// parameter, by backpropagation through both time steps.
pub fn batch_gradients(model: &LstmModel, examples: &[SequenceExample]) -> (f64, Vec<f64>) {
    assert!(!examples.is_empty(), "gradient of an empty batch");
    let lay = model.layout();
    let (v, h) = (lay.v, lay.h);
    let mut grad = vec![0.0; lay.len];
    let mut loss = 0.0;
    let scale = 1.0 / examples.len() as f64;

    for ex in examples {
        let (p, steps) = model.forward_states(ex.context);
        loss += -p[ex.target].ln();

        let mut dy = p;
        dy[ex.target] -= 1.0;
        for d in dy.iter_mut() {
            *d *= scale;
        }

        let h2 = &steps[1].h;
        let why = &model.theta[lay.why.clone()];
        let mut dh = vec![0.0; h];
        for r in 0..v {
            let row_at = r * h;
            for j in 0..h {
                grad[lay.why.start + row_at + j] += dy[r] * h2[j];
                dh[j] += dy[r] * why[row_at + j];
            }
            grad[lay.by.start + r] += dy[r];
        }

        let mut dc = vec![0.0; h];
        for t in (0..2).rev() {
            let st = &steps[t];
            let mut dai = vec![0.0; h];
            let mut daf = vec![0.0; h];
            let mut dao = vec![0.0; h];
            let mut dag = vec![0.0; h];
            for j in 0..h {
                dc[j] += dh[j] * st.o[j] * (1.0 - st.tc[j] * st.tc[j]);
                dao[j] = (dh[j] * st.tc[j]) * st.o[j] * (1.0 - st.o[j]);
                dai[j] = (dc[j] * st.g[j]) * st.i[j] * (1.0 - st.i[j]);
                dag[j] = (dc[j] * st.i[j]) * (1.0 - st.g[j] * st.g[j]);
                daf[j] = (dc[j] * st.cprev[j]) * st.f[j] * (1.0 - st.f[j]);
            }
            let mut dhprev = vec![0.0; h];
            for (wr, br, da) in [
                (&lay.wi, &lay.bi, &dai),
                (&lay.wf, &lay.bf, &daf),
                (&lay.wo, &lay.bo, &dao),
                (&lay.wg, &lay.bg, &dag),
            ] {
                let w = &model.theta[wr.clone()];
                let width = v + h;
                for r in 0..h {
                    let row_at = r * width;
                    grad[wr.start + row_at + st.hot] += da[r];
                    for j in 0..h {
                        grad[wr.start + row_at + v + j] += da[r] * st.hprev[j];
                        dhprev[j] += da[r] * w[row_at + v + j];
                    }
                    grad[br.start + r] += da[r];
                }
            }
            for (j, c) in dc.iter_mut().enumerate() {
                *c *= st.f[j];
            }
            dh = dhprev;
        }
    }
    (loss * scale, grad)
}

/// A trained model plus the mean batch loss before training and after each
/// update, in order. The history has `epochs + 1` entries.
#[derive(Clone, Debug)]
pub struct Trained {
    pub model: LstmModel,
    pub loss_history: Vec<f64>,
}

/// Full-batch training with Adam from a seeded random initialization. The
/// model always has [`HIDDEN_UNITS`] hidden units; training panics if any
/// parameter ever goes non-finite.
pub fn train(
    examples: &[SequenceExample],
    vocab_size: usize,
    cfg: &TrainConfig,
) -> Result<Trained, Error> {
    if examples.is_empty() {
        return Err(Error::NoExamples);
    }
    for ex in examples {
        let max = ex.context[0].max(ex.context[1]).max(ex.target);
        assert!(max < vocab_size, "example token id {max} outside vocabulary");
    }
    let mut model = LstmModel::random(vocab_size, HIDDEN_UNITS, cfg.rng_seed);
    let mut m = vec![0.0; model.param_len()];
    let mut s = vec![0.0; model.param_len()];
    let mut loss_history = Vec::with_capacity(cfg.epochs + 1);
    loss_history.push(batch_loss(&model, examples));
    for t in 1..=cfg.epochs {
        let (_, grad) = batch_gradients(&model, examples);
        let bias1 = 1.0 - cfg.beta1.powi(t as i32);
        let bias2 = 1.0 - cfg.beta2.powi(t as i32);
        let theta = model.params_mut();
        for k in 0..theta.len() {
            m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * grad[k];
            s[k] = cfg.beta2 * s[k] + (1.0 - cfg.beta2) * grad[k] * grad[k];
            let mhat = m[k] / bias1;
            let shat = s[k] / bias2;
            theta[k] -= cfg.learning_rate * mhat / (shat.sqrt() + cfg.epsilon);
        }
        assert!(
            model.params().iter().all(|p| p.is_finite()),
            "non-finite parameter after update {t}"
        );
        loss_history.push(batch_loss(&model, examples));
    }
    Ok(Trained { model, loss_history })
}

/// The most probable next token after two context words. Unknown context
/// words, and the empty string used for left padding, map to the
/// out-of-vocabulary id. Probability ties resolve to the lowest token id.
pub fn predict_next(model: &LstmModel, context: (&str, &str), vocab: &Vocabulary) -> String {
    assert_eq!(
        model.vocab_size(),
        vocab.len(),
        "model and vocabulary disagree on size"
    );
    let ids = [vocab.id_or_oov(context.0), vocab.id_or_oov(context.1)];
    let p = model.forward(ids);
    let mut best = 0;
    for (k, &pk) in p.iter().enumerate() {
        if pk > p[best] {
            best = k;
        }
    }
    vocab.token(best).to_string()
}

const MODEL_HEADER: &str = "#disflow-lstm v1";

/// Write model and vocabulary as one versioned text file. Parameters print
/// with 17 significant digits, so loading reproduces them bit for bit.
pub fn save_model(path: &Path, model: &LstmModel, vocab: &Vocabulary) -> Result<(), Error> {
    assert_eq!(
        model.vocab_size(),
        vocab.len(),
        "model and vocabulary disagree on size"
    );
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut w = BufWriter::new(File::create(path).map_err(io_err)?);
    let mut write = || -> std::io::Result<()> {
        writeln!(w, "{MODEL_HEADER}")?;
        writeln!(w, "v {}", model.vocab_size())?;
        writeln!(w, "h {}", model.hidden_units())?;
        writeln!(w, "vocab")?;
        for id in 0..vocab.len() {
            writeln!(w, "{}", vocab.token(id))?;
        }
        writeln!(w, "params")?;
        for p in model.params() {
            writeln!(w, "{p:.16e}")?;
        }
        w.flush()
    };
    write().map_err(io_err)
}

pub fn load_model(path: &Path) -> Result<(LstmModel, Vocabulary), Error> {
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
    let mut next = |expect: &str| -> Result<(usize, String), Error> {
        match lines.next() {
            Some((idx, Ok(line))) => Ok((idx + 1, line)),
            Some((idx, Err(source))) => Err(Error::ReadLine {
                path: path.to_path_buf(),
                line: idx + 1,
                source,
            }),
            None => Err(Error::Format {
                path: path.to_path_buf(),
                line: 0,
                msg: format!("missing {expect}"),
            }),
        }
    };

    let (n, header) = next("header")?;
    if header != MODEL_HEADER {
        return Err(fmt_err(n, format!("expected header {MODEL_HEADER:?}, found {header:?}")));
    }
    let mut dim = |name: &str| -> Result<usize, Error> {
        let (n, line) = next(name)?;
        line.strip_prefix(&format!("{name} "))
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&d| d >= 1)
            .ok_or_else(|| fmt_err(n, format!("expected \"{name} N\", found {line:?}")))
    };
    let v = dim("v")?;
    let h = dim("h")?;

    let (n, marker) = next("vocab section")?;
    if marker != "vocab" {
        return Err(fmt_err(n, format!("expected \"vocab\", found {marker:?}")));
    }
    let mut tokens = Vec::with_capacity(v);
    let mut ids = HashMap::new();
    for _ in 0..v {
        let (n, token) = next("vocabulary token")?;
        if token.is_empty() || token.contains(char::is_whitespace) {
            return Err(fmt_err(n, format!("bad vocabulary token {token:?}")));
        }
        if ids.insert(token.clone(), tokens.len()).is_some() {
            return Err(fmt_err(n, format!("duplicate vocabulary token {token:?}")));
        }
        tokens.push(token);
    }

    let (n, marker) = next("params section")?;
    if marker != "params" {
        return Err(fmt_err(n, format!("expected \"params\", found {marker:?}")));
    }
    let mut model = LstmModel::zeroed(v, h);
    for slot in model.params_mut() {
        let (n, line) = next("parameter")?;
        let value: f64 = line
            .trim()
            .parse()
            .map_err(|_| fmt_err(n, format!("bad parameter {line:?}")))?;
        if !value.is_finite() {
            return Err(fmt_err(n, format!("non-finite parameter {line:?}")));
        }
        *slot = value;
    }
    if let Some((idx, line)) = lines.next() {
        let trailing = match line {
            Ok(l) => !l.is_empty(),
            Err(_) => true,
        };
        if trailing {
            return Err(fmt_err(idx + 1, "trailing content after parameters".to_string()));
        }
    }
    Ok((model, Vocabulary { tokens, ids }))
}
