//! Small deterministic channels with known regions, shared by tests, the
//! CLI and the bindings.

use crate::channel::{embed_mac, DiscreteMarc, MarcSizes, MarcoSplit};
use crate::input::{MacInput, RelayConditionedInput};
use crate::prob::{AlphabetSpec, ProbTensor};

/// Channel with `(y_R, y_D) = f(x_1, x_2, x_R)` with probability one.
pub fn deterministic(sizes: MarcSizes, f: impl Fn(usize, usize, usize) -> (usize, usize)) -> DiscreteMarc {
    DiscreteMarc::from_fn(sizes, |x1, x2, xr, yr, yd| {
        if f(x1, x2, xr) == (yr, yd) {
            1.0
        } else {
            0.0
        }
    })
    .expect("deterministic rows are normalized")
}

/// Binary inputs, `Y_R = (X_1, X_2)` noiseless and `Y_D = X_R` noiseless:
/// the relay-to-sink link carries one bit per use. Uniform independent
/// inputs.
pub fn bottleneck() -> (DiscreteMarc, RelayConditionedInput) {
    let marc = deterministic(MarcSizes::new(2, 2, 2, 4, 2), |x1, x2, xr| (2 * x1 + x2, xr));
    (marc, RelayConditionedInput::uniform(2, 2, 2))
}

/// Relayless noiseless MAC `Y = (X_1, X_2)` in its genie embedding, with a
/// singleton common-message variable and uniform inputs.
pub fn noiseless_mac() -> (DiscreteMarc, MacInput) {
    let axes = AlphabetSpec::new(&[("X1", 2), ("X2", 2), ("Y", 4)]).expect("valid axes");
    let mac = ProbTensor::kernel_from_fn(axes, 1, |i| if i[2] == 2 * i[0] + i[1] { 1.0 } else { 0.0 })
        .expect("deterministic rows");
    let marc = embed_mac(&mac).expect("consistent shapes");
    let input = MacInput::new(vec![1.0], vec![0.5, 0.5], vec![0.5, 0.5], 2, 2).expect("uniform tables");
    (marc, input)
}

/// Semi-deterministic: `Y_R = X_1 xor X_2`, `Y_D = X_R` noiseless, uniform
/// binary inputs.
pub fn xor_relay() -> (DiscreteMarc, RelayConditionedInput) {
    let marc = deterministic(MarcSizes::new(2, 2, 2, 2, 2), |x1, x2, xr| (x1 ^ x2, xr));
    (marc, RelayConditionedInput::uniform(2, 2, 2))
}

/// `Y_D = (X_1, X_2)` noiseless with a constant relay output: reversely
/// degraded, and the relay is useless.
pub fn perfect_direct_useless_relay() -> (DiscreteMarc, RelayConditionedInput) {
    let marc = deterministic(MarcSizes::new(2, 2, 1, 1, 4), |x1, x2, _| (0, 2 * x1 + x2));
    (marc, RelayConditionedInput::uniform(2, 2, 1))
}

pub fn marco_split() -> MarcoSplit {
    MarcoSplit::new(2, 2, 2, 2).expect("nonzero parts")
}

/// Orthogonal components with noiseless binary branches:
/// `Y_R = (X_R1, X_R2)` and `Y_D = (X_D1, X_D2, X_R)`.
pub fn marco_noiseless() -> (DiscreteMarc, RelayConditionedInput) {
    let split = marco_split();
    let marc = deterministic(MarcSizes::new(4, 4, 2, 4, 8), |x1, x2, xr| {
        let (a1, d1) = split.parts1(x1);
        let (a2, d2) = split.parts2(x2);
        (2 * a1 + a2, 4 * d1 + 2 * d2 + xr)
    })
    .with_split(split)
    .expect("split fits");
    (marc, RelayConditionedInput::uniform(4, 4, 2))
}

/// Both outputs independent of every input.
pub fn useless(sizes: MarcSizes) -> DiscreteMarc {
    let w = 1.0 / (sizes.yr * sizes.yd) as f64;
    DiscreteMarc::from_fn(sizes, |_, _, _, _, _| w).expect("uniform rows")
}
