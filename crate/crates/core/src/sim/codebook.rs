//! Lazily generated superposition codebooks.
//!
//! Every sequence is drawn from its own stream, derived from the codebook
//! seed and its layer and indices, so a codeword is the same whether or not
//! its neighbours were ever generated.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{MarcError, Result};
use crate::input::FactorizedInput;
use crate::rng::stream;

/// Gap allowed between `2^{nR}` and the nearest integer.
pub const SIZE_TOL: f64 = 1e-6;

pub type Seq = Rc<[u16]>;

/// Rate split in bits per channel use: the common rate and, per sender,
/// the relay-forwarded part and the direct part.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RateSplit {
    pub r0: f64,
    pub r1p: f64,
    pub r1pp: f64,
    pub r2p: f64,
    pub r2pp: f64,
}

impl RateSplit {
    /// The relay rate `R'_1 + R'_2`.
    pub fn relay_rate(&self) -> f64 {
        self.r1p + self.r2p
    }

    pub fn r1(&self) -> f64 {
        self.r1p + self.r1pp
    }

    pub fn r2(&self) -> f64 {
        self.r2p + self.r2pp
    }

    /// Integer codebook sizes at block length `n`.
    pub fn sizes(&self, n: usize) -> Result<CodebookSizes> {
        let size = |name: &str, r: f64| -> Result<usize> {
            if !(r.is_finite() && r >= 0.0) {
                return Err(MarcError::Config(format!("rate {name} = {r} must be finite and nonnegative")));
            }
            let exact = (n as f64 * r).exp2();
            let rounded = exact.round();
            if (exact - rounded).abs() > SIZE_TOL || rounded > u32::MAX as f64 {
                return Err(MarcError::Config(format!(
                    "rate {name} = {r} at n = {n} gives 2^(nR) = {exact}, not an integer"
                )));
            }
            Ok(rounded as usize)
        };
        Ok(CodebookSizes {
            common: size("r0", self.r0)?,
            relay1: size("r1p", self.r1p)?,
            private1: size("r1pp", self.r1pp)?,
            relay2: size("r2p", self.r2p)?,
            private2: size("r2pp", self.r2pp)?,
        })
    }
}

/// Index ranges; each index runs over `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodebookSizes {
    pub common: usize,
    pub relay1: usize,
    pub private1: usize,
    pub relay2: usize,
    pub private2: usize,
}

impl CodebookSizes {
    pub fn relay(&self, k: usize) -> usize {
        if k == 1 {
            self.relay1
        } else {
            self.relay2
        }
    }

    pub fn private(&self, k: usize) -> usize {
        if k == 1 {
            self.private1
        } else {
            self.private2
        }
    }
}

/// A relay index `m = (m_1, m_2)`.
pub type Pair = (usize, usize);

const RELAY_LAYER: usize = 0;
const COMMON_LAYER: usize = 1;
const CLOUD_LAYER: usize = 2;
const CODEWORD_LAYER: usize = 4;

type Key = [usize; 7];

/// Layered codebook: `x_R(m)`, then `u_0(j, m)` on top of it, then the
/// per-sender clouds `u_k(j, m, l_k)` and codewords `x_k(j, m, l_k, q_k)`.
pub struct Codebook<'a> {
    input: &'a FactorizedInput,
    sizes: CodebookSizes,
    n: usize,
    seed: u64,
    cache: RefCell<HashMap<Key, Seq>>,
}

impl<'a> Codebook<'a> {
    pub fn new(input: &'a FactorizedInput, sizes: CodebookSizes, n: usize, seed: u64) -> Self {
        Self {
            input,
            sizes,
            n,
            seed,
            cache: RefCell::new(HashMap::new()),
        }
    }

    /// Codebook for a rate split at block length `n`; fails when a size is
    /// not an integer.
    pub fn generate(input: &'a FactorizedInput, split: &RateSplit, n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(MarcError::Config("block length n must be at least 1".into()));
        }
        Ok(Self::new(input, split.sizes(n)?, n, seed))
    }

    pub fn sizes(&self) -> CodebookSizes {
        self.sizes
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn memo(&self, key: Key, make: impl FnOnce() -> Vec<u16>) -> Seq {
        if let Some(s) = self.cache.borrow().get(&key) {
            return s.clone();
        }
        let s: Seq = make().into();
        self.cache.borrow_mut().insert(key, s.clone());
        s
    }

    fn draw(&self, key: &Key, row: impl Fn(usize, usize) -> f64, outcomes: usize) -> Vec<u16> {
        let mut rng = stream(self.seed, &key.map(|v| v as u64));
        (0..self.n)
            .map(|t| {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                let mut last = 0;
                for o in 0..outcomes {
                    let p = row(t, o);
                    if p > 0.0 {
                        last = o;
                        acc += p;
                        if u < acc {
                            return o as u16;
                        }
                    }
                }
                last as u16
            })
            .collect()
    }

    pub fn relay(&self, m: Pair) -> Seq {
        let key = [RELAY_LAYER, 0, m.0, m.1, 0, 0, 0];
        self.memo(key, || self.draw(&key, |_, o| self.input.pxr(o), self.input.sizes().xr))
    }

    pub fn common(&self, j: usize, m: Pair) -> Seq {
        let key = [COMMON_LAYER, j, m.0, m.1, 0, 0, 0];
        self.memo(key, || {
            let xr = self.relay(m);
            self.draw(&key, |t, o| self.input.pu0(xr[t] as usize, o), self.input.sizes().aux.u0)
        })
    }

    /// `u_k(j, m, l)` for sender `k` in `{1, 2}`.
    pub fn cloud(&self, k: usize, j: usize, m: Pair, l: usize) -> Seq {
        let key = [CLOUD_LAYER + k - 1, j, m.0, m.1, l, 0, 0];
        self.memo(key, || {
            let xr = self.relay(m);
            let u0 = self.common(j, m);
            let s = self.input.sizes();
            let outcomes = if k == 1 { s.aux.u1 } else { s.aux.u2 };
            self.draw(
                &key,
                |t, o| {
                    let (a, r) = (u0[t] as usize, xr[t] as usize);
                    if k == 1 {
                        self.input.pu1(a, r, o)
                    } else {
                        self.input.pu2(a, r, o)
                    }
                },
                outcomes,
            )
        })
    }

    /// `x_k(j, m, l, q)` for sender `k` in `{1, 2}`.
    pub fn codeword(&self, k: usize, j: usize, m: Pair, l: usize, q: usize) -> Seq {
        let key = [CODEWORD_LAYER + k - 1, j, m.0, m.1, l, q, 0];
        self.memo(key, || {
            let xr = self.relay(m);
            let u0 = self.common(j, m);
            let uk = self.cloud(k, j, m, l);
            let s = self.input.sizes();
            let outcomes = if k == 1 { s.x1 } else { s.x2 };
            self.draw(
                &key,
                |t, o| {
                    let (a, u, r) = (u0[t] as usize, uk[t] as usize, xr[t] as usize);
                    if k == 1 {
                        self.input.px1(a, u, r, o)
                    } else {
                        self.input.px2(a, u, r, o)
                    }
                },
                outcomes,
            )
        })
    }
}
