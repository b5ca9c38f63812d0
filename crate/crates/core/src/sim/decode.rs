//! Exhaustive joint-typicality decoders at the relay and the sink.

use super::codebook::{Codebook, Pair};
use super::typical::TypicalitySet;

/// Outcome of one decoding attempt. Ambiguous results carry the smallest
/// candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoded<T> {
    Unique(T),
    Ambiguous(T),
    Failed,
}

impl<T: Copy + Default> Decoded<T> {
    /// The decoded value, or index zero everywhere after a failure.
    pub fn value(&self) -> T {
        match self {
            Decoded::Unique(v) | Decoded::Ambiguous(v) => *v,
            Decoded::Failed => T::default(),
        }
    }

    pub fn is_ambiguous(&self) -> bool {
        matches!(self, Decoded::Ambiguous(_))
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Decoded::Failed)
    }
}

/// What the relay forwards: the common index and the relay pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct RelayEstimate {
    pub common: usize,
    pub pair: Pair,
}

/// All message parts of one block, zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, PartialOrd, Ord)]
pub struct BlockMessages {
    pub common: usize,
    pub relay1: usize,
    pub private1: usize,
    pub relay2: usize,
    pub private2: usize,
}

impl BlockMessages {
    pub fn relay_estimate(&self) -> RelayEstimate {
        RelayEstimate {
            common: self.common,
            pair: (self.relay1, self.relay2),
        }
    }
}

/// Collects the first two hits of a search in its iteration order.
struct Hits<T> {
    first: Option<T>,
    more: bool,
}

impl<T: Copy> Hits<T> {
    fn new() -> Self {
        Self { first: None, more: false }
    }

    /// Returns true once the search can stop.
    fn push(&mut self, v: T) -> bool {
        if self.first.is_some() {
            self.more = true;
        } else {
            self.first = Some(v);
        }
        self.more
    }

    fn finish(self) -> Decoded<T> {
        match (self.first, self.more) {
            (None, _) => Decoded::Failed,
            (Some(v), false) => Decoded::Unique(v),
            (Some(v), true) => Decoded::Ambiguous(v),
        }
    }
}

/// Relay decoding of block `b` from `y_R`, given its own estimates from
/// block `b - 1`. `law` runs over `(U0, U1, U2, XR, YR)`. Candidates are
/// searched in the order `(w_0, w'_1, w'_2)`.
pub fn relay_decode(
    book: &Codebook,
    law: &TypicalitySet,
    yr: &[u16],
    prior: RelayEstimate,
) -> Decoded<RelayEstimate> {
    let s = book.sizes();
    let m = prior.pair;
    let xr = book.relay(m);
    let u0 = book.common(prior.common, m);
    let mut hits = Hits::new();
    'search: for j in 0..s.common {
        for l1 in 0..s.relay1 {
            let u1 = book.cloud(1, j, m, l1);
            for l2 in 0..s.relay2 {
                let u2 = book.cloud(2, j, m, l2);
                if law.contains(&[&u0, &u1, &u2, &xr, yr])
                    && hits.push(RelayEstimate {
                        common: j,
                        pair: (l1, l2),
                    })
                {
                    break 'search;
                }
            }
        }
    }
    hits.finish()
}

/// Sink decoding of block `b - 1` from `y_D` of blocks `b - 1` and `b`,
/// given its own estimates from block `b - 2`.
///
/// Stage one keeps every relay pair whose `x_R` is typical with the newer
/// block under `link` over `(XR, YD)`. Stage two searches those pairs with
/// all common and private indices against the older block under `full`
/// over `(U0, U1, U2, X1, X2, XR, YD)`, in message order
/// `(w_0, w'_1, w''_1, w'_2, w''_2)`.
pub fn sink_decode(
    book: &Codebook,
    link: &TypicalitySet,
    full: &TypicalitySet,
    yd_prev: &[u16],
    yd_cur: &[u16],
    prior: RelayEstimate,
) -> Decoded<BlockMessages> {
    let s = book.sizes();
    let mut pairs: Vec<Pair> = Vec::new();
    for a in 0..s.relay1 {
        for b in 0..s.relay2 {
            if link.contains(&[&book.relay((a, b)), yd_cur]) {
                pairs.push((a, b));
            }
        }
    }
    let m = prior.pair;
    let xr = book.relay(m);
    let u0 = book.common(prior.common, m);
    let mut hits = Hits::new();
    'search: for j in 0..s.common {
        for &(l1, l2) in &pairs {
            let u1 = book.cloud(1, j, m, l1);
            let u2 = book.cloud(2, j, m, l2);
            for q1 in 0..s.private1 {
                let x1 = book.codeword(1, j, m, l1, q1);
                for q2 in 0..s.private2 {
                    let x2 = book.codeword(2, j, m, l2, q2);
                    if full.contains(&[&u0, &u1, &u2, &x1, &x2, &xr, yd_prev])
                        && hits.push(BlockMessages {
                            common: j,
                            relay1: l1,
                            private1: q1,
                            relay2: l2,
                            private2: q2,
                        })
                    {
                        break 'search;
                    }
                }
            }
        }
    }
    hits.finish()
}
