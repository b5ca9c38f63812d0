//! Achievable rate regions for the discrete memoryless multiple-access relay
//! channel under decode-and-forward.
//!
//! Layers, bottom-up:
//!
//! * [`prob`]: labelled probability tensors and information measures in bits;
//! * [`channel`]: channel kernels, class builders and class membership;
//! * [`input`]: input laws with auxiliary variables;
//! * [`region`]: rate-region polytopes for the general scheme and its special cases;
//! * [`search`]: heuristic search over input laws for region frontiers;
//! * [`sim`]: Monte Carlo simulation of the block-Markov scheme;
//! * [`io`]: JSON and CSV file formats;
//! * [`models`]: region evaluation by model and class name.

pub mod channel;
pub mod error;
pub mod fixtures;
pub mod input;
pub mod io;
pub mod models;
pub mod prob;
pub mod random;
pub mod region;
pub mod rng;
pub mod search;
pub mod sim;

pub use channel::{ClassTag, DiscreteMarc, MarcSizes, MarcoSplit};
pub use error::{MarcError, Result};
pub use input::{FactorizedInput, InputLaw, RelayConditionedInput};
pub use prob::{AlphabetSpec, ProbTensor, VarSet};
pub use region::{RatePoint, RateRegion, RateSet};
