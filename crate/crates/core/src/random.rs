//! Random channels and input laws for property checks and sweeps.
//!
//! Conditional rows are drawn from the flat Dirichlet distribution.

use rand::Rng;

use crate::channel::{var, DiscreteMarc, MarcSizes, MarcoSplit};
use crate::input::{AuxSizes, FactorizedInput, InputSizes, KwInput, MacInput, MarcoInput, RelayConditionedInput};
use crate::prob::{AlphabetSpec, ProbTensor};

/// A probability vector drawn uniformly from the simplex.
pub fn simplex(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let z: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= z);
    v
}

/// Random rows laid out consecutively: `rows` distributions of length `n`.
pub fn rows(rng: &mut impl Rng, rows: usize, n: usize) -> Vec<f64> {
    (0..rows).flat_map(|_| simplex(rng, n)).collect()
}

/// Random single-outcome kernel; the last axis is the outcome.
pub fn kernel(rng: &mut impl Rng, axes: &[(&str, usize)]) -> ProbTensor {
    let spec = AlphabetSpec::new(axes).expect("valid axes");
    let out = *spec.sizes().last().expect("at least one axis");
    let values = rows(rng, spec.total() / out, out);
    ProbTensor::kernel(spec, 1, values).expect("rows are normalized")
}

pub fn joint(rng: &mut impl Rng, axes: &[(&str, usize)]) -> ProbTensor {
    let spec = AlphabetSpec::new(axes).expect("valid axes");
    let values = simplex(rng, spec.total());
    ProbTensor::joint(spec, values).expect("simplex point is normalized")
}

pub fn marc(rng: &mut impl Rng, sizes: MarcSizes) -> DiscreteMarc {
    let values = rows(rng, sizes.x1 * sizes.x2 * sizes.xr, sizes.yr * sizes.yd);
    DiscreteMarc::new(sizes, values).expect("rows are normalized")
}

/// A degraded channel assembled from random factors.
pub fn degraded_marc(rng: &mut impl Rng, sizes: MarcSizes) -> DiscreteMarc {
    let base = kernel(rng, &[(var::X1, sizes.x1), (var::X2, sizes.x2), (var::XR, sizes.xr), (var::YR, sizes.yr)]);
    let deg = kernel(rng, &[(var::XR, sizes.xr), (var::YR, sizes.yr), (var::YD, sizes.yd)]);
    crate::channel::build_degraded(&base, &deg).expect("consistent shapes")
}

pub fn reversely_degraded_marc(rng: &mut impl Rng, sizes: MarcSizes) -> DiscreteMarc {
    let direct = kernel(rng, &[(var::X1, sizes.x1), (var::X2, sizes.x2), (var::XR, sizes.xr), (var::YD, sizes.yd)]);
    let deg = kernel(rng, &[(var::YD, sizes.yd), (var::XR, sizes.xr), (var::YR, sizes.yr)]);
    crate::channel::build_reversely_degraded(&direct, &deg).expect("consistent shapes")
}

/// An orthogonal channel with random branches.
pub fn orthogonal_marc(rng: &mut impl Rng, split: MarcoSplit, xr: usize, yr: usize, yd: usize) -> DiscreteMarc {
    let rb = kernel(rng, &[(var::XR1, split.xr1), (var::XR2, split.xr2), (var::XR, xr), (var::YR, yr)]);
    let db = kernel(rng, &[(var::XD1, split.xd1), (var::XD2, split.xd2), (var::XR, xr), (var::YD, yd)]);
    crate::channel::build_orthogonal(&rb, &db).expect("consistent shapes")
}

pub fn factorized_input(rng: &mut impl Rng, sizes: InputSizes) -> FactorizedInput {
    let InputSizes { aux, x1, x2, xr } = sizes;
    let AuxSizes { u0, u1, u2 } = aux;
    FactorizedInput::from_tables(
        sizes,
        simplex(rng, xr),
        rows(rng, xr, u0),
        rows(rng, u0 * xr, u1),
        rows(rng, u0 * xr, u2),
        rows(rng, u0 * u1 * xr, x1),
        rows(rng, u0 * u2 * xr, x2),
    )
    .expect("random tables are normalized")
}

pub fn relay_conditioned_input(rng: &mut impl Rng, x1: usize, x2: usize, xr: usize) -> RelayConditionedInput {
    RelayConditionedInput::new(simplex(rng, xr), rows(rng, xr, x1), rows(rng, xr, x2), x1, x2)
        .expect("random tables are normalized")
}

pub fn kw_input(rng: &mut impl Rng, x1: usize, x2: usize, xr: usize) -> KwInput {
    KwInput::new(simplex(rng, x1), simplex(rng, x2), rows(rng, x1 * x2, xr), xr).expect("random tables are normalized")
}

pub fn marco_input(rng: &mut impl Rng, split: MarcoSplit, xr: usize) -> MarcoInput {
    MarcoInput::new(
        split,
        simplex(rng, xr),
        rows(rng, xr, split.xr1),
        rows(rng, xr, split.xd1),
        rows(rng, xr, split.xr2),
        rows(rng, xr, split.xd2),
    )
    .expect("random tables are normalized")
}

pub fn mac_input(rng: &mut impl Rng, s: usize, x1: usize, x2: usize) -> MacInput {
    MacInput::new(simplex(rng, s), rows(rng, s, x1), rows(rng, s, x2), x1, x2).expect("random tables are normalized")
}
