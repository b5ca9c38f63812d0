//! Monte Carlo simulation of the block-Markov decode-and-forward scheme.
//!
//! Messages are sent over `B` blocks plus one flush block. In block `b`,
//! sender `k` transmits `x_k(w_0[b], m[b-1], w'_k[b], w''_k[b])`, where
//! `m[b-1] = (w'_1[b-1], w'_2[b-1])`, and the relay transmits `x_R` of its
//! own estimate of `m[b-1]`. Indices before block 1 and after block `B` are
//! fixed to zero. Binning is not used: the decoders index `x_R` directly by
//! the relay pair.

pub mod codebook;
pub mod decode;
pub mod typical;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{var, DiscreteMarc};
use crate::error::{domain, MarcError, Result};
use crate::input::{expand_joint, FactorizedInput};
use crate::rng::{derive_seed, stream};

pub use codebook::{Codebook, CodebookSizes, Pair, RateSplit, Seq};
pub use decode::{relay_decode, sink_decode, BlockMessages, Decoded, RelayEstimate};
pub use typical::{is_typical, TypicalitySet};

/// Upper limit on typicality checks a configuration may require.
pub const MAX_CHECKS: f64 = 1e8;

const MESSAGE_STREAM: u64 = 1;
const CHANNEL_STREAM: u64 = 2;
const BOOK_STREAM: u64 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Symbols per block.
    pub n: usize,
    /// Message blocks; transmission uses one more.
    #[serde(rename = "B")]
    pub blocks: usize,
    /// Multiplicative typicality slack.
    pub eps: f64,
    pub trials: usize,
    pub seed: u64,
    /// Reuse one codebook across trials instead of drawing a fresh one.
    #[serde(default)]
    pub shared_codebook: bool,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.blocks == 0 || self.trials == 0 {
            return Err(MarcError::Config("n, B and trials must be at least 1".into()));
        }
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(MarcError::Config(format!("eps must be positive, got {}", self.eps)));
        }
        Ok(())
    }
}

/// Sequences sent in one block.
#[derive(Debug, Clone, PartialEq)]
pub struct Transmission {
    pub x1: Seq,
    pub x2: Seq,
    pub xr: Seq,
}

/// Message parts of block `b` (1-based), with the zero convention outside
/// `1..=B`.
fn block_messages(messages: &[BlockMessages], b: usize) -> BlockMessages {
    if b == 0 || b > messages.len() {
        BlockMessages::default()
    } else {
        messages[b - 1]
    }
}

/// Encodes block `b` in `1..=B+1` for `B = messages.len()`, with the relay
/// sequence indexed by the true previous relay pair.
pub fn encode_block(book: &Codebook, b: usize, messages: &[BlockMessages]) -> Result<Transmission> {
    if b == 0 || b > messages.len() + 1 {
        return domain(format!("block index {b} is outside 1..={}", messages.len() + 1));
    }
    let s = book.sizes();
    for (i, w) in messages.iter().enumerate() {
        let limits = [
            (w.common, s.common, "w0"),
            (w.relay1, s.relay1, "w1'"),
            (w.private1, s.private1, "w1''"),
            (w.relay2, s.relay2, "w2'"),
            (w.private2, s.private2, "w2''"),
        ];
        for (v, size, name) in limits {
            if v >= size {
                return domain(format!("message {name} = {v} in block {} exceeds its range 0..{size}", i + 1));
            }
        }
    }
    let prev = block_messages(messages, b - 1);
    let cur = block_messages(messages, b);
    let m = (prev.relay1, prev.relay2);
    Ok(Transmission {
        x1: book.codeword(1, cur.common, m, cur.relay1, cur.private1),
        x2: book.codeword(2, cur.common, m, cur.relay2, cur.private2),
        xr: book.relay(m),
    })
}

/// Counts for one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TrialReport {
    pub trial: usize,
    /// Blocks whose relay estimate was wrong.
    pub relay_errors: usize,
    /// Blocks whose sink estimate was wrong in any part.
    pub sink_errors: usize,
    pub ambiguities: usize,
    pub failures: usize,
    /// Per-part sink errors in the order `w_0, w'_1, w''_1, w'_2, w''_2`.
    pub part_errors: [usize; 5],
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ErrorReport {
    pub blocks: usize,
    pub trials: Vec<TrialReport>,
}

impl ErrorReport {
    fn total(&self, f: impl Fn(&TrialReport) -> usize) -> usize {
        self.trials.iter().map(f).sum()
    }

    fn block_count(&self) -> f64 {
        (self.trials.len() * self.blocks) as f64
    }

    pub fn sink_block_error_rate(&self) -> f64 {
        self.total(|t| t.sink_errors) as f64 / self.block_count()
    }

    pub fn relay_block_error_rate(&self) -> f64 {
        self.total(|t| t.relay_errors) as f64 / self.block_count()
    }

    /// Fraction of trials with any sink error.
    pub fn trial_error_rate(&self) -> f64 {
        self.trials.iter().filter(|t| t.sink_errors > 0).count() as f64 / self.trials.len() as f64
    }

    pub fn part_error_rates(&self) -> [f64; 5] {
        let d = self.block_count();
        std::array::from_fn(|i| self.total(|t| t.part_errors[i]) as f64 / d)
    }

    pub fn ambiguities(&self) -> usize {
        self.total(|t| t.ambiguities)
    }

    pub fn failures(&self) -> usize {
        self.total(|t| t.failures)
    }
}

/// Worst-case typicality checks for a configuration.
pub fn check_budget(sizes: &CodebookSizes, cfg: &SimConfig) -> f64 {
    let pairs = (sizes.relay1 * sizes.relay2) as f64;
    let relay = sizes.common as f64 * pairs;
    let sink = pairs + pairs * (sizes.common * sizes.private1 * sizes.private2) as f64;
    cfg.trials as f64 * cfg.blocks as f64 * (relay + sink)
}

struct Laws {
    relay: TypicalitySet,
    link: TypicalitySet,
    full: TypicalitySet,
}

fn sample_channel(marc: &DiscreteMarc, tx: &Transmission, rng: &mut impl Rng) -> (Vec<u16>, Vec<u16>) {
    let yd_size = marc.sizes().yd;
    tx.xr
        .iter()
        .enumerate()
        .map(|(t, &r)| {
            let row = marc.output_row(tx.x1[t] as usize, tx.x2[t] as usize, r as usize);
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            let mut pick = row.iter().rposition(|&p| p > 0.0).unwrap_or(0);
            for (i, &p) in row.iter().enumerate() {
                acc += p;
                if p > 0.0 && u < acc {
                    pick = i;
                    break;
                }
            }
            ((pick / yd_size) as u16, (pick % yd_size) as u16)
        })
        .unzip()
}

fn draw_messages(rng: &mut impl Rng, s: &CodebookSizes, blocks: usize) -> Vec<BlockMessages> {
    (0..blocks)
        .map(|_| BlockMessages {
            common: rng.gen_range(0..s.common),
            relay1: rng.gen_range(0..s.relay1),
            private1: rng.gen_range(0..s.private1),
            relay2: rng.gen_range(0..s.relay2),
            private2: rng.gen_range(0..s.private2),
        })
        .collect()
}

fn run_trial(
    marc: &DiscreteMarc,
    book: &Codebook,
    laws: &Laws,
    cfg: &SimConfig,
    trial: usize,
) -> Result<TrialReport> {
    let mut report = TrialReport {
        trial,
        ..TrialReport::default()
    };
    let s = book.sizes();
    let messages = draw_messages(&mut stream(cfg.seed, &[trial as u64, MESSAGE_STREAM]), &s, cfg.blocks);
    let mut channel_rng = stream(cfg.seed, &[trial as u64, CHANNEL_STREAM]);
    let mut relay_prior = RelayEstimate::default();
    let mut sink_prior = RelayEstimate::default();
    let mut yd_prev: Vec<u16> = Vec::new();
    for b in 1..=cfg.blocks + 1 {
        let mut tx = encode_block(book, b, &messages)?;
        tx.xr = book.relay(relay_prior.pair);
        let (yr, yd) = sample_channel(marc, &tx, &mut channel_rng);
        if b <= cfg.blocks {
            let got = relay_decode(book, &laws.relay, &yr, relay_prior);
            report.ambiguities += got.is_ambiguous() as usize;
            report.failures += got.is_failure() as usize;
            let est = got.value();
            report.relay_errors += (est != messages[b - 1].relay_estimate()) as usize;
            relay_prior = est;
        }
        if b >= 2 {
            let got = sink_decode(book, &laws.link, &laws.full, &yd_prev, &yd, sink_prior);
            report.ambiguities += got.is_ambiguous() as usize;
            report.failures += got.is_failure() as usize;
            let est = got.value();
            let truth = messages[b - 2];
            let parts = [
                est.common != truth.common,
                est.relay1 != truth.relay1,
                est.private1 != truth.private1,
                est.relay2 != truth.relay2,
                est.private2 != truth.private2,
            ];
            for (acc, wrong) in report.part_errors.iter_mut().zip(parts) {
                *acc += wrong as usize;
            }
            report.sink_errors += parts.iter().any(|&w| w) as usize;
            sink_prior = est.relay_estimate();
        }
        yd_prev = yd;
    }
    Ok(report)
}

/// Runs `cfg.trials` independent trials. Trial `t` draws messages, channel
/// noise and (unless shared) its codebook from streams derived from
/// `(cfg.seed, t)`.
pub fn run_trials(marc: &DiscreteMarc, input: &FactorizedInput, split: &RateSplit, cfg: &SimConfig) -> Result<ErrorReport> {
    cfg.validate()?;
    let sizes = split.sizes(cfg.n)?;
    let budget = check_budget(&sizes, cfg);
    if budget > MAX_CHECKS {
        return Err(MarcError::Config(format!(
            "configuration needs up to {budget:.3e} typicality checks, above the limit of {MAX_CHECKS:.0e}"
        )));
    }
    let joint = expand_joint(marc, input)?;
    use var::{U0, U1, U2, X1, X2, XR, YD, YR};
    let laws = Laws {
        relay: TypicalitySet::new(&joint.marginalize(&[U0, U1, U2, XR, YR])?, cfg.eps)?,
        link: TypicalitySet::new(&joint.marginalize(&[XR, YD])?, cfg.eps)?,
        full: TypicalitySet::new(&joint.marginalize(&[U0, U1, U2, X1, X2, XR, YD])?, cfg.eps)?,
    };
    let shared = Codebook::new(input, sizes, cfg.n, derive_seed(cfg.seed, &[BOOK_STREAM]));
    let mut trials = Vec::with_capacity(cfg.trials);
    for t in 0..cfg.trials {
        let report = if cfg.shared_codebook {
            run_trial(marc, &shared, &laws, cfg, t)?
        } else {
            let book = Codebook::new(input, sizes, cfg.n, derive_seed(cfg.seed, &[t as u64, BOOK_STREAM]));
            run_trial(marc, &book, &laws, cfg, t)?
        };
        trials.push(report);
    }
    Ok(ErrorReport {
        blocks: cfg.blocks,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cfg(n: usize, trials: usize) -> SimConfig {
        SimConfig {
            n,
            blocks: 3,
            eps: 8.0,
            trials,
            seed: 42,
            shared_codebook: false,
        }
    }

    fn split(r1p: f64, r2p: f64) -> RateSplit {
        RateSplit {
            r1p,
            r2p,
            ..RateSplit::default()
        }
    }

    fn messages(v: &[(usize, usize)]) -> Vec<BlockMessages> {
        v.iter()
            .map(|&(a, b)| BlockMessages {
                relay1: a,
                relay2: b,
                ..BlockMessages::default()
            })
            .collect()
    }

    #[test]
    fn encoding_follows_the_block_pattern() {
        let (_, rc) = fixtures::bottleneck();
        let input = rc.inputs_as_auxiliaries();
        let book = Codebook::generate(&input, &split(0.25, 0.25), 8, 3).unwrap();
        let msgs = messages(&[(1, 2), (3, 0), (2, 2)]);
        let first = encode_block(&book, 1, &msgs).unwrap();
        assert_eq!(first.xr, book.relay((0, 0)));
        assert_eq!(first.x1, book.codeword(1, 0, (0, 0), 1, 0));
        let second = encode_block(&book, 2, &msgs).unwrap();
        assert_eq!(second.xr, book.relay((1, 2)));
        assert_eq!(second.x2, book.codeword(2, 0, (1, 2), 0, 0));
        let last = encode_block(&book, 4, &msgs).unwrap();
        assert_eq!(last.xr, book.relay((2, 2)));
        assert_eq!(last.x1, book.codeword(1, 0, (2, 2), 0, 0));
        assert!(encode_block(&book, 0, &msgs).is_err());
        assert!(encode_block(&book, 5, &msgs).is_err());
        assert!(encode_block(&book, 1, &messages(&[(4, 0)])).is_err());
    }

    #[test]
    fn zero_rates_never_err() {
        let (marc, rc) = fixtures::bottleneck();
        let report = run_trials(&marc, &rc.inputs_as_auxiliaries(), &RateSplit::default(), &cfg(8, 1)).unwrap();
        assert_eq!(report.trials.len(), 1);
        assert_eq!(report.sink_block_error_rate(), 0.0);
        assert_eq!(report.relay_block_error_rate(), 0.0);
    }

    #[test]
    fn reports_are_reproducible() {
        let (marc, rc) = fixtures::bottleneck();
        let input = rc.inputs_as_auxiliaries();
        let a = run_trials(&marc, &input, &split(0.25, 0.25), &cfg(8, 10)).unwrap();
        let b = run_trials(&marc, &input, &split(0.25, 0.25), &cfg(8, 10)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn over_budget_and_bad_configs_are_refused() {
        let (marc, rc) = fixtures::bottleneck();
        let input = rc.inputs_as_auxiliaries();
        let err = run_trials(&marc, &input, &split(1.0, 1.0), &cfg(16, 10)).unwrap_err();
        assert!(matches!(err, MarcError::Config(_)), "{err}");
        assert!(run_trials(&marc, &input, &split(0.3, 0.0), &cfg(8, 1)).is_err());
        assert!(run_trials(&marc, &input, &RateSplit::default(), &SimConfig { eps: 0.0, ..cfg(8, 1) }).is_err());
    }

    #[test]
    fn noiseless_link_decodes_the_relay_exactly() {
        // Y_R = (X_1, X_2), so the relay sees the clouds directly.
        let (marc, rc) = fixtures::bottleneck();
        let input = rc.inputs_as_auxiliaries();
        let report = run_trials(&marc, &input, &split(0.125, 0.125), &cfg(16, 20)).unwrap();
        assert!(report.relay_block_error_rate() <= 0.05, "{report:?}");
    }
}
