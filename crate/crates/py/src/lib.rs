//! Python bindings: channels, input laws, rate regions, frontier search and
//! simulation.

use std::collections::BTreeMap;

use marc_core::channel::{validate_class, validate_marco_any, ClassTag};
use marc_core::error::MarcError;
use marc_core::io::{self, Distribution as CoreDistribution};
use marc_core::search::{self, SearchConfig};
use marc_core::{models, sim, DiscreteMarc, RatePoint, RateRegion, RateSet};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: MarcError) -> PyErr {
    match e {
        MarcError::Io(e) => PyOSError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn read(path: &str) -> PyResult<String> {
    std::fs::read_to_string(path).map_err(|e| PyOSError::new_err(format!("{path}: {e}")))
}

fn triple(p: RatePoint) -> (f64, f64, f64) {
    (p.r0, p.r1, p.r2)
}

/// A discrete memoryless multiple-access relay channel.
#[pyclass(module = "marc")]
pub struct Channel {
    inner: DiscreteMarc,
}

#[pymethods]
impl Channel {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::channel_from_json(text).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        Self::from_json(&read(path)?)
    }

    fn to_json(&self) -> String {
        io::channel_to_json(&self.inner)
    }

    /// `(x1, x2, xr, yr, yd)` alphabet sizes.
    fn sizes(&self) -> (usize, usize, usize, usize, usize) {
        let s = self.inner.sizes();
        (s.x1, s.x2, s.xr, s.yr, s.yd)
    }

    fn normalization_residual(&self) -> f64 {
        self.inner.normalization_residual()
    }

    /// Class name to `(accepted, residual)`.
    fn classes(&self) -> BTreeMap<&'static str, (bool, f64)> {
        let mut out = BTreeMap::new();
        for tag in [ClassTag::Madrc, ClassTag::Mardrc, ClassTag::Masdrc] {
            let c = validate_class(&self.inner, &tag);
            out.insert(tag.name(), (c.accepted, c.residual));
        }
        let (_, c) = validate_marco_any(&self.inner);
        out.insert("marco", (c.accepted, c.residual));
        out
    }
}

/// An input law in any of the supported file layouts.
#[pyclass(module = "marc")]
pub struct Distribution {
    inner: CoreDistribution,
}

#[pymethods]
impl Distribution {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::distribution_from_json(text).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn from_file(path: &str) -> PyResult<Self> {
        Self::from_json(&read(path)?)
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind()
    }
}

/// A rate region given by sum-rate constraints plus nonnegativity.
#[pyclass(module = "marc")]
pub struct Region {
    inner: RateRegion,
}

#[pymethods]
impl Region {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: io::region_from_json(text).map_err(to_py)?,
        })
    }

    fn to_json(&self) -> String {
        io::region_to_json(&self.inner, None)
    }

    /// `(subset, bound)` pairs, subsets as lists of rate indices.
    fn constraints(&self) -> Vec<(Vec<usize>, f64)> {
        self.inner
            .constraints()
            .iter()
            .map(|c| (c.subset.indices(), c.bound))
            .collect()
    }

    fn bound(&self, subset: Vec<usize>) -> PyResult<Option<f64>> {
        Ok(self.inner.bound(RateSet::new(&subset).map_err(to_py)?))
    }

    fn vertices(&self) -> Vec<(f64, f64, f64)> {
        self.inner.vertices().into_iter().map(triple).collect()
    }

    fn contains(&self, r0: f64, r1: f64, r2: f64) -> bool {
        self.inner.contains(RatePoint::new(r0, r1, r2))
    }

    fn includes(&self, other: &Region) -> bool {
        self.inner.includes(&other.inner)
    }

    /// `(max weights . R, maximizer)`.
    fn support(&self, weights: [f64; 3]) -> (f64, (f64, f64, f64)) {
        let (v, p) = self.inner.support(weights);
        (v, triple(p))
    }

    fn __repr__(&self) -> String {
        let parts: Vec<String> = self
            .inner
            .constraints()
            .iter()
            .map(|c| format!("{} <= {}", c.subset, io::fmt_num(c.bound)))
            .collect();
        format!("Region({})", parts.join(", "))
    }
}

/// Region of `model` at `dist`; `class_name` applies that class's auxiliary
/// substitution to the general model.
#[pyfunction]
#[pyo3(signature = (channel, dist, model, class_name=None))]
fn region(channel: &Channel, dist: &Distribution, model: &str, class_name: Option<&str>) -> PyResult<Region> {
    Ok(Region {
        inner: models::evaluate(&channel.inner, &dist.inner, model, class_name).map_err(to_py)?,
    })
}

/// Per-law gap between the substituted general region and the class region.
#[pyfunction]
#[pyo3(signature = (channel, class_name, trials=20, seed=0))]
fn check(channel: &Channel, class_name: &str, trials: usize, seed: u64) -> PyResult<Vec<f64>> {
    let tag = models::class_tag(class_name, &channel.inner).map_err(to_py)?;
    models::specialization_gaps(&channel.inner, &tag, trials, seed).map_err(to_py)
}

/// Best weighted sum rate found over input laws of the general region:
/// `(value, (r0, r1, r2), input law as JSON)`.
#[pyfunction]
#[pyo3(signature = (channel, weights=[0.0, 1.0, 1.0], samples=16, restarts=8, seed=0))]
fn maximize(
    channel: &Channel,
    weights: [f64; 3],
    samples: usize,
    restarts: usize,
    seed: u64,
) -> PyResult<(f64, (f64, f64, f64), String)> {
    let cfg = SearchConfig {
        samples,
        restarts,
        seed,
        weights,
        ..SearchConfig::default()
    };
    let best = search::maximize(&channel.inner, &cfg).map_err(to_py)?;
    Ok((best.value, triple(best.point), io::factorized_to_json(&best.input)))
}

/// Runs the block-Markov scheme; `config` is a simulation config JSON text.
#[pyfunction]
#[pyo3(signature = (channel, dist, config, eps=None))]
fn simulate(channel: &Channel, dist: &Distribution, config: &str, eps: Option<f64>) -> PyResult<BTreeMap<&'static str, f64>> {
    let input = dist
        .inner
        .factorized()
        .ok_or_else(|| PyValueError::new_err(format!("cannot simulate with a {} distribution", dist.inner.kind())))?;
    let (mut cfg, rates) = io::sim_config_from_json(config).map_err(to_py)?;
    if let Some(e) = eps {
        cfg.eps = e;
    }
    let report = sim::run_trials(&channel.inner, &input, &rates, &cfg).map_err(to_py)?;
    Ok(BTreeMap::from([
        ("sink_block_error_rate", report.sink_block_error_rate()),
        ("relay_block_error_rate", report.relay_block_error_rate()),
        ("trial_error_rate", report.trial_error_rate()),
        ("ambiguities", report.ambiguities() as f64),
        ("failures", report.failures() as f64),
    ]))
}

#[pymodule]
fn marc(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Channel>()?;
    m.add_class::<Distribution>()?;
    m.add_class::<Region>()?;
    m.add_function(wrap_pyfunction!(region, m)?)?;
    m.add_function(wrap_pyfunction!(check, m)?)?;
    m.add_function(wrap_pyfunction!(maximize, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    Ok(())
}
