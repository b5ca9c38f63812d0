//! Heuristic search over input laws for the general region's frontier.
//!
//! Each conditional table row is the softmax of free logits. Restarts draw
//! `samples` random logit vectors, keep the best, then run a coordinate
//! pattern search whose step halves whenever no coordinate move improves.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::DiscreteMarc;
use crate::error::{domain, Result};
use crate::input::{AuxSizes, FactorizedInput, InputSizes};
use crate::region::{region_general, RatePoint, FEASIBILITY_TOL};
use crate::rng::{derive_seed, stream};

/// Default number of weight directions in a frontier fan.
pub const DEFAULT_DIRECTIONS: usize = 17;

const MIN_STEP: f64 = 1e-4;
const INIT_SPREAD: f64 = 3.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Random initial candidates per restart.
    pub samples: usize,
    pub restarts: usize,
    /// Sweeps of the pattern search per restart.
    pub max_iters: usize,
    /// Initial logit step.
    pub step: f64,
    pub seed: u64,
    /// Objective weights on `(R_0, R_1, R_2)`.
    pub weights: [f64; 3],
    /// Auxiliary alphabet sizes; defaults follow the channel.
    pub aux: Option<AuxSizes>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            samples: 16,
            restarts: 8,
            max_iters: 200,
            step: 1.0,
            seed: 0,
            weights: [0.0, 1.0, 1.0],
            aux: None,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return domain(format!("weights must be finite and nonnegative, got {:?}", self.weights));
        }
        if self.weights.iter().all(|w| *w == 0.0) {
            return domain("at least one weight must be positive");
        }
        if self.samples == 0 || self.restarts == 0 {
            return domain("samples and restarts must be at least 1");
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return domain(format!("step must be positive, got {}", self.step));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontierPoint {
    pub weights: [f64; 3],
    pub point: RatePoint,
    pub value: f64,
    pub input: FactorizedInput,
}

/// `max weights . R` over the general region at one input law.
pub fn support_value(marc: &DiscreteMarc, input: &FactorizedInput, weights: [f64; 3]) -> Result<f64> {
    Ok(region_general(marc, input)?.support(weights).0)
}

/// Row layout of every factor table, in the order of
/// [`crate::input::FACTOR_KEYS`]: `(rows, outcomes)`.
fn layout(s: InputSizes) -> [(usize, usize); 6] {
    let AuxSizes { u0, u1, u2 } = s.aux;
    [
        (1, s.xr),
        (s.xr, u0),
        (u0 * s.xr, u1),
        (u0 * s.xr, u2),
        (u0 * u1 * s.xr, s.x1),
        (u0 * u2 * s.xr, s.x2),
    ]
}

/// Softmax parametrization of a [`FactorizedInput`]. Rows with a single
/// outcome carry no parameters.
struct Params {
    sizes: InputSizes,
    layout: [(usize, usize); 6],
}

impl Params {
    fn new(sizes: InputSizes) -> Self {
        Self {
            sizes,
            layout: layout(sizes),
        }
    }

    fn dim(&self) -> usize {
        self.layout.iter().filter(|(_, o)| *o > 1).map(|(r, o)| r * o).sum()
    }

    fn decode(&self, theta: &[f64]) -> Result<FactorizedInput> {
        let mut at = 0;
        let mut tables: Vec<Vec<f64>> = Vec::with_capacity(6);
        for &(rows, outs) in &self.layout {
            if outs == 1 {
                tables.push(vec![1.0; rows]);
                continue;
            }
            let mut t = Vec::with_capacity(rows * outs);
            for _ in 0..rows {
                t.extend(softmax(&theta[at..at + outs]));
                at += outs;
            }
            tables.push(t);
        }
        let mut it = tables.into_iter();
        let mut next = || it.next().expect("six tables");
        FactorizedInput::from_tables(self.sizes, next(), next(), next(), next(), next(), next())
    }
}

fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|v| v / z).collect()
}

struct Objective<'a> {
    marc: &'a DiscreteMarc,
    params: Params,
    weights: [f64; 3],
}

impl Objective<'_> {
    fn eval(&self, theta: &[f64]) -> Result<f64> {
        support_value(self.marc, &self.params.decode(theta)?, self.weights)
    }
}

fn local_search(obj: &Objective, mut theta: Vec<f64>, mut value: f64, cfg: &SearchConfig) -> Result<(Vec<f64>, f64)> {
    let mut step = cfg.step;
    for _ in 0..cfg.max_iters {
        let mut improved = false;
        for i in 0..theta.len() {
            let old = theta[i];
            for dir in [1.0, -1.0] {
                theta[i] = old + dir * step;
                let v = obj.eval(&theta)?;
                if v > value {
                    value = v;
                    improved = true;
                    break;
                }
                theta[i] = old;
            }
        }
        if !improved {
            step *= 0.5;
            if step < MIN_STEP {
                break;
            }
        }
    }
    Ok((theta, value))
}

/// Best input law found for `cfg.weights`. Restart `r` uses its own stream
/// derived from `(cfg.seed, r)`, so more restarts never lose the best value
/// of fewer.
pub fn maximize(marc: &DiscreteMarc, cfg: &SearchConfig) -> Result<FrontierPoint> {
    cfg.validate()?;
    let aux = cfg.aux.unwrap_or_else(|| AuxSizes::default_for(&marc.sizes()));
    let params = Params::new(InputSizes::for_marc(marc, aux));
    let dim = params.dim();
    let obj = Objective {
        marc,
        params,
        weights: cfg.weights,
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    for r in 0..cfg.restarts {
        let mut rng = stream(cfg.seed, &[r as u64]);
        let mut start: Option<(Vec<f64>, f64)> = None;
        for _ in 0..cfg.samples {
            let theta: Vec<f64> = (0..dim).map(|_| rng.gen_range(-INIT_SPREAD..INIT_SPREAD)).collect();
            let v = obj.eval(&theta)?;
            if start.as_ref().is_none_or(|(_, b)| v > *b) {
                start = Some((theta, v));
            }
        }
        let (theta, v) = start.expect("samples >= 1");
        let (theta, v) = local_search(&obj, theta, v, cfg)?;
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((theta, v));
        }
    }
    let (theta, _) = best.expect("restarts >= 1");
    let input = obj.params.decode(&theta)?;
    let (value, point) = region_general(marc, &input)?.support(cfg.weights);
    Ok(FrontierPoint {
        weights: cfg.weights,
        point,
        value,
        input,
    })
}

/// Evenly spaced weight directions `(0, cos t, sin t)` over the positive
/// quadrant, plus `(1, 0, 0)` when `with_common` is set.
pub fn fan(directions: usize, with_common: bool) -> Vec<[f64; 3]> {
    let mut out: Vec<[f64; 3]> = match directions {
        0 => Vec::new(),
        1 => vec![[0.0, 1.0, 1.0]],
        d => (0..d)
            .map(|i| {
                let t = std::f64::consts::FRAC_PI_2 * i as f64 / (d - 1) as f64;
                // Snap the axis directions so exact zeros survive cos/sin.
                let (c, s) = match i {
                    0 => (1.0, 0.0),
                    _ if i == d - 1 => (0.0, 1.0),
                    _ => (t.cos(), t.sin()),
                };
                [0.0, c, s]
            })
            .collect(),
    };
    if with_common {
        out.push([1.0, 0.0, 0.0]);
    }
    out
}

/// Maximizes along each direction of `weights` and drops dominated or
/// duplicate points. Direction `i` searches with seed `(cfg.seed, i)`.
pub fn frontier_along(marc: &DiscreteMarc, cfg: &SearchConfig, weights: &[[f64; 3]]) -> Result<Vec<FrontierPoint>> {
    let mut points = Vec::with_capacity(weights.len());
    for (i, w) in weights.iter().enumerate() {
        let c = SearchConfig {
            weights: *w,
            seed: derive_seed(cfg.seed, &[i as u64]),
            ..cfg.clone()
        };
        points.push(maximize(marc, &c)?);
    }
    Ok(pareto_filter(points))
}

/// Frontier over the default fan of [`DEFAULT_DIRECTIONS`] directions.
pub fn frontier(marc: &DiscreteMarc, cfg: &SearchConfig, with_common: bool) -> Result<Vec<FrontierPoint>> {
    frontier_along(marc, cfg, &fan(DEFAULT_DIRECTIONS, with_common))
}

fn dominates(a: RatePoint, b: RatePoint) -> bool {
    let (a, b) = (a.to_array(), b.to_array());
    (0..3).all(|i| a[i] >= b[i] - FEASIBILITY_TOL) && (0..3).any(|i| a[i] > b[i] + FEASIBILITY_TOL)
}

fn same(a: RatePoint, b: RatePoint) -> bool {
    let (a, b) = (a.to_array(), b.to_array());
    (0..3).all(|i| (a[i] - b[i]).abs() <= FEASIBILITY_TOL)
}

/// Keeps the first of each group of equal points and drops dominated ones.
pub fn pareto_filter(points: Vec<FrontierPoint>) -> Vec<FrontierPoint> {
    let keep: Vec<bool> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            !points.iter().any(|q| dominates(q.point, p.point))
                && !points[..i].iter().any(|q| same(q.point, p.point))
        })
        .collect();
    points.into_iter().zip(keep).filter_map(|(p, k)| k.then_some(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::MarcSizes;
    use crate::fixtures;

    fn quick(weights: [f64; 3], seed: u64) -> SearchConfig {
        SearchConfig {
            samples: 4,
            restarts: 2,
            max_iters: 30,
            weights,
            seed,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn config_validation() {
        assert!(quick([0.0, 0.0, 0.0], 0).validate().is_err());
        assert!(quick([0.0, -1.0, 1.0], 0).validate().is_err());
        assert!(SearchConfig { samples: 0, ..SearchConfig::default() }.validate().is_err());
        assert!(SearchConfig::default().validate().is_ok());
    }

    #[test]
    fn softmax_rows_are_normalized() {
        let p = softmax(&[1000.0, 0.0, -1000.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(p[0] > 0.999);
    }

    #[test]
    fn support_on_bottleneck_uniform() {
        let (marc, input) = fixtures::bottleneck();
        let v = support_value(&marc, &input.inputs_as_auxiliaries(), [0.0, 1.0, 1.0]).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let v = support_value(&marc, &input.inputs_as_auxiliaries(), [0.0, 1.0, 0.0]).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn useless_channel_scores_zero() {
        let marc = fixtures::useless(MarcSizes::new(2, 2, 2, 2, 2));
        for w in [[0.0, 1.0, 1.0], [1.0, 0.0, 0.0], [0.0, 0.3, 0.7]] {
            let fp = maximize(&marc, &quick(w, 3)).unwrap();
            assert!(fp.value.abs() < 1e-12, "{w:?}: {}", fp.value);
        }
    }

    #[test]
    fn maximize_is_reproducible_and_feasible() {
        let (marc, _) = fixtures::bottleneck();
        let a = maximize(&marc, &quick([0.0, 1.0, 1.0], 11)).unwrap();
        let b = maximize(&marc, &quick([0.0, 1.0, 1.0], 11)).unwrap();
        assert_eq!(a, b);
        assert!(region_general(&marc, &a.input).unwrap().contains(a.point));
    }

    #[test]
    fn fan_endpoints_are_axes() {
        let f = fan(17, true);
        assert_eq!(f.len(), 18);
        assert_eq!(f[0], [0.0, 1.0, 0.0]);
        assert_eq!(f[16], [0.0, 0.0, 1.0]);
        assert_eq!(f[17], [1.0, 0.0, 0.0]);
    }

    #[test]
    fn pareto_drops_dominated_and_duplicates() {
        let (_, input) = fixtures::bottleneck();
        let input = input.inputs_as_auxiliaries();
        let mk = |r1, r2| FrontierPoint {
            weights: [0.0, 1.0, 1.0],
            point: RatePoint::new(0.0, r1, r2),
            value: r1 + r2,
            input: input.clone(),
        };
        let kept = pareto_filter(vec![mk(1.0, 0.0), mk(0.5, 0.5), mk(0.4, 0.4), mk(0.5, 0.5), mk(0.0, 1.0)]);
        let pts: Vec<(f64, f64)> = kept.iter().map(|p| (p.point.r1, p.point.r2)).collect();
        assert_eq!(pts, vec![(1.0, 0.0), (0.5, 0.5), (0.0, 1.0)]);
    }
}
