//! File formats: channels, input laws, regions and simulation configs as
//! JSON; vertices, frontiers and simulation reports as CSV.
//!
//! Tables are nested arrays with conditioning axes outermost. All numbers
//! written out carry 12 significant digits.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::channel::{DiscreteMarc, MarcSizes, MarcoSplit};
use crate::error::{MarcError, Result};
use crate::input::{
    AuxSizes, FactorizedInput, InputLaw, InputSizes, KwInput, MacInput, MarcoInput, RelayConditionedInput,
    FACTOR_KEYS, MARCO_PART_KEYS,
};
use crate::region::{Constraint, RatePoint, RateRegion, RateSet};
use crate::search::FrontierPoint;
use crate::sim::{ErrorReport, RateSplit, SimConfig};

fn parse_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(MarcError::Parse(msg.into()))
}

/// `%.12g`-style formatting.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        trim_zeros(&s)
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Rounds to 12 significant digits.
pub fn round_num(x: f64) -> f64 {
    fmt_num(x).parse().unwrap_or(x)
}

/// Flattens a nested array of exactly `shape` in row-major order.
pub fn flatten(value: &Value, shape: &[usize], what: &str) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(shape.iter().product());
    fn walk(v: &Value, shape: &[usize], what: &str, out: &mut Vec<f64>) -> Result<()> {
        match shape.split_first() {
            None => match v.as_f64() {
                Some(x) => {
                    out.push(x);
                    Ok(())
                }
                None => parse_err(format!("{what}: expected a number, got {v}")),
            },
            Some((&len, rest)) => {
                let Some(items) = v.as_array() else {
                    return parse_err(format!("{what}: expected an array of length {len}"));
                };
                if items.len() != len {
                    return parse_err(format!("{what}: expected length {len}, got {}", items.len()));
                }
                items.iter().try_for_each(|item| walk(item, rest, what, out))
            }
        }
    }
    walk(value, shape, what, &mut out)?;
    Ok(out)
}

/// Inverse of [`flatten`].
pub fn nest(values: &[f64], shape: &[usize]) -> Value {
    match shape.split_first() {
        None => json!(round_num(values[0])),
        Some((&len, rest)) => {
            let stride: usize = rest.iter().product();
            Value::Array((0..len).map(|i| nest(&values[i * stride..(i + 1) * stride], rest)).collect())
        }
    }
}

/// Length of the outermost array, for inferring alphabet sizes.
fn outer_len(v: &Value, what: &str) -> Result<usize> {
    match v.as_array() {
        Some(a) if !a.is_empty() => Ok(a.len()),
        _ => parse_err(format!("{what}: expected a nonempty array")),
    }
}

/// Length of the innermost array along the first path.
fn inner_len(v: &Value, what: &str) -> Result<usize> {
    let mut cur = v;
    while let Some(a) = cur.as_array() {
        match a.first() {
            Some(x) if x.is_array() => cur = x,
            Some(_) => return Ok(a.len()),
            None => break,
        }
    }
    parse_err(format!("{what}: expected nested nonempty arrays"))
}

fn object(text: &str) -> Result<Map<String, Value>> {
    match serde_json::from_str::<Value>(text)? {
        Value::Object(m) => Ok(m),
        _ => parse_err("expected a JSON object"),
    }
}

fn get<'a>(m: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    m.get(key).map_or_else(|| parse_err(format!("missing key \"{key}\"")), Ok)
}

fn get_size(m: &Map<String, Value>, key: &str) -> Result<usize> {
    match get(m, key)?.as_u64() {
        Some(v) if v >= 1 => Ok(v as usize),
        _ => parse_err(format!("\"{key}\" must be a positive integer")),
    }
}

#[derive(Serialize, Deserialize)]
struct SplitJson {
    xr1: usize,
    xd1: usize,
    xr2: usize,
    xd2: usize,
}

/// Parses a channel file. Parse problems give [`MarcError::Parse`],
/// unnormalized rows give [`MarcError::Normalization`].
pub fn channel_from_json(text: &str) -> Result<DiscreteMarc> {
    let m = object(text)?;
    let sizes = MarcSizes::new(
        get_size(&m, "x1")?,
        get_size(&m, "x2")?,
        get_size(&m, "xr")?,
        get_size(&m, "yr")?,
        get_size(&m, "yd")?,
    );
    let values = flatten(
        get(&m, "kernel")?,
        &[sizes.x1, sizes.x2, sizes.xr, sizes.yr, sizes.yd],
        "kernel",
    )?;
    let marc = DiscreteMarc::new(sizes, values)?;
    match m.get("marco_split") {
        None | Some(Value::Null) => Ok(marc),
        Some(v) => {
            let s: SplitJson = serde_json::from_value(v.clone())?;
            marc.with_split(MarcoSplit::new(s.xr1, s.xd1, s.xr2, s.xd2)?)
        }
    }
}

pub fn channel_to_json(marc: &DiscreteMarc) -> String {
    let s = marc.sizes();
    let mut m = Map::new();
    for (k, v) in [("x1", s.x1), ("x2", s.x2), ("xr", s.xr), ("yr", s.yr), ("yd", s.yd)] {
        m.insert(k.into(), json!(v));
    }
    m.insert(
        "kernel".into(),
        nest(marc.kernel().values(), &[s.x1, s.x2, s.xr, s.yr, s.yd]),
    );
    if let Some(sp) = marc.split() {
        m.insert(
            "marco_split".into(),
            json!({"xr1": sp.xr1, "xd1": sp.xd1, "xr2": sp.xr2, "xd2": sp.xd2}),
        );
    }
    pretty(&Value::Object(m))
}

/// Indented JSON with arrays of scalars kept on one line.
fn pretty(v: &Value) -> String {
    fn scalar(v: &Value) -> bool {
        !v.is_array() && !v.is_object()
    }
    fn render(v: &Value, depth: usize, out: &mut String) {
        let pad = "  ".repeat(depth + 1);
        let close = "  ".repeat(depth);
        match v {
            Value::Array(items) if items.iter().all(scalar) => {
                let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
                out.push_str(&format!("[{}]", parts.join(", ")));
            }
            Value::Array(items) => {
                out.push_str("[\n");
                for (i, x) in items.iter().enumerate() {
                    out.push_str(&pad);
                    render(x, depth + 1, out);
                    out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
                }
                out.push_str(&close);
                out.push(']');
            }
            Value::Object(m) => {
                out.push_str("{\n");
                for (i, (k, x)) in m.iter().enumerate() {
                    out.push_str(&format!("{pad}{}: ", Value::String(k.clone())));
                    render(x, depth + 1, out);
                    out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
                }
                out.push_str(&close);
                out.push('}');
            }
            _ => out.push_str(&v.to_string()),
        }
    }
    let mut s = String::new();
    render(v, 0, &mut s);
    s.push('\n');
    s
}

/// The factorizations an input-distribution file may use, told apart by
/// their keys.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    /// `pxr`, `pu0_xr`, `pu1_u0xr`, `pu2_u0xr`, `px1_u0u1xr`, `px2_u0u2xr`.
    Factorized(FactorizedInput),
    /// `pxr`, `px1_xr`, `px2_xr`.
    RelayConditioned(RelayConditionedInput),
    /// `px1`, `px2`, `pxr_x1x2`.
    Kw(KwInput),
    /// `ps`, `px1_s`, `px2_s`.
    Mac(MacInput),
    /// `marco_split`, `pxr`, `pxr1_xr`, `pxd1_xr`, `pxr2_xr`, `pxd2_xr`.
    Marco(MarcoInput),
}

impl Distribution {
    pub fn kind(&self) -> &'static str {
        match self {
            Distribution::Factorized(_) => "factorized",
            Distribution::RelayConditioned(_) => "relay-conditioned",
            Distribution::Kw(_) => "kw",
            Distribution::Mac(_) => "mac",
            Distribution::Marco(_) => "marco",
        }
    }

    /// The law of `(X_1, X_2, X_R)`.
    pub fn input_law(&self) -> InputLaw {
        match self {
            Distribution::Factorized(f) => f.input_law(),
            Distribution::RelayConditioned(r) => r.law(),
            Distribution::Kw(k) => k.law(),
            Distribution::Mac(m) => m.to_factorized().input_law(),
            Distribution::Marco(m) => m.law(),
        }
    }

    /// A factorized form when one is implied: relay-conditioned laws use
    /// `U_k = X_k`.
    pub fn factorized(&self) -> Option<FactorizedInput> {
        match self {
            Distribution::Factorized(f) => Some(f.clone()),
            Distribution::RelayConditioned(r) => Some(r.inputs_as_auxiliaries()),
            Distribution::Mac(m) => Some(m.to_factorized()),
            Distribution::Marco(m) => Some(m.to_relay_conditioned().inputs_as_auxiliaries()),
            Distribution::Kw(_) => None,
        }
    }

    pub fn relay_conditioned(&self) -> Option<RelayConditionedInput> {
        match self {
            Distribution::RelayConditioned(r) => Some(r.clone()),
            Distribution::Marco(m) => Some(m.to_relay_conditioned()),
            _ => None,
        }
    }
}

fn table(m: &Map<String, Value>, key: &str, shape: &[usize]) -> Result<Vec<f64>> {
    flatten(get(m, key)?, shape, key)
}

/// Parses an input-distribution file, detecting its factorization.
pub fn distribution_from_json(text: &str) -> Result<Distribution> {
    let m = object(text)?;
    let has = |k: &str| m.contains_key(k);
    if has("pu0_xr") {
        let xr = outer_len(get(&m, "pxr")?, "pxr")?;
        let u0 = inner_len(get(&m, "pu0_xr")?, "pu0_xr")?;
        let u1 = inner_len(get(&m, "pu1_u0xr")?, "pu1_u0xr")?;
        let u2 = inner_len(get(&m, "pu2_u0xr")?, "pu2_u0xr")?;
        let x1 = inner_len(get(&m, "px1_u0u1xr")?, "px1_u0u1xr")?;
        let x2 = inner_len(get(&m, "px2_u0u2xr")?, "px2_u0u2xr")?;
        let sizes = InputSizes {
            aux: AuxSizes { u0, u1, u2 },
            x1,
            x2,
            xr,
        };
        let shapes: [Vec<usize>; 6] = [
            vec![xr],
            vec![xr, u0],
            vec![u0, xr, u1],
            vec![u0, xr, u2],
            vec![u0, u1, xr, x1],
            vec![u0, u2, xr, x2],
        ];
        let mut t = FACTOR_KEYS
            .iter()
            .zip(&shapes)
            .map(|(k, s)| table(&m, k, s))
            .collect::<Result<Vec<_>>>()?
            .into_iter();
        let mut next = || t.next().expect("six tables");
        return Ok(Distribution::Factorized(FactorizedInput::from_tables(
            sizes,
            next(),
            next(),
            next(),
            next(),
            next(),
            next(),
        )?));
    }
    if has("marco_split") {
        let s: SplitJson = serde_json::from_value(get(&m, "marco_split")?.clone())?;
        let split = MarcoSplit::new(s.xr1, s.xd1, s.xr2, s.xd2)?;
        let xr = outer_len(get(&m, "pxr")?, "pxr")?;
        let parts = [split.xr1, split.xd1, split.xr2, split.xd2];
        let mut t = MARCO_PART_KEYS
            .iter()
            .zip(parts)
            .map(|(k, p)| table(&m, k, &[xr, p]))
            .collect::<Result<Vec<_>>>()?
            .into_iter();
        let mut next = || t.next().expect("four tables");
        return Ok(Distribution::Marco(MarcoInput::new(
            split,
            table(&m, "pxr", &[xr])?,
            next(),
            next(),
            next(),
            next(),
        )?));
    }
    if has("px1_xr") {
        let xr = outer_len(get(&m, "pxr")?, "pxr")?;
        let x1 = inner_len(get(&m, "px1_xr")?, "px1_xr")?;
        let x2 = inner_len(get(&m, "px2_xr")?, "px2_xr")?;
        return Ok(Distribution::RelayConditioned(RelayConditionedInput::new(
            table(&m, "pxr", &[xr])?,
            table(&m, "px1_xr", &[xr, x1])?,
            table(&m, "px2_xr", &[xr, x2])?,
            x1,
            x2,
        )?));
    }
    if has("pxr_x1x2") {
        let x1 = outer_len(get(&m, "px1")?, "px1")?;
        let x2 = outer_len(get(&m, "px2")?, "px2")?;
        let xr = inner_len(get(&m, "pxr_x1x2")?, "pxr_x1x2")?;
        return Ok(Distribution::Kw(KwInput::new(
            table(&m, "px1", &[x1])?,
            table(&m, "px2", &[x2])?,
            table(&m, "pxr_x1x2", &[x1, x2, xr])?,
            xr,
        )?));
    }
    if has("ps") {
        let s = outer_len(get(&m, "ps")?, "ps")?;
        let x1 = inner_len(get(&m, "px1_s")?, "px1_s")?;
        let x2 = inner_len(get(&m, "px2_s")?, "px2_s")?;
        return Ok(Distribution::Mac(MacInput::new(
            table(&m, "ps", &[s])?,
            table(&m, "px1_s", &[s, x1])?,
            table(&m, "px2_s", &[s, x2])?,
            x1,
            x2,
        )?));
    }
    parse_err("unrecognized distribution: expected factor tables (pxr, pu0_xr, ...), relay-conditioned tables (pxr, px1_xr, px2_xr), pxr_x1x2, ps, or marco_split")
}

pub fn factorized_to_json(input: &FactorizedInput) -> String {
    let mut m = Map::new();
    for (key, t) in input.tables() {
        m.insert(key.into(), nest(t.values(), t.sizes()));
    }
    pretty(&Value::Object(m))
}

pub fn relay_conditioned_to_json(input: &RelayConditionedInput) -> String {
    let (x1, x2, xr) = input.sizes();
    let pxr: Vec<f64> = (0..xr).map(|r| input.pxr(r)).collect();
    let px1: Vec<f64> = (0..xr).flat_map(|r| (0..x1).map(move |a| (r, a))).map(|(r, a)| input.px1(r, a)).collect();
    let px2: Vec<f64> = (0..xr).flat_map(|r| (0..x2).map(move |a| (r, a))).map(|(r, a)| input.px2(r, a)).collect();
    pretty(&json!({
        "pxr": nest(&pxr, &[xr]),
        "px1_xr": nest(&px1, &[xr, x1]),
        "px2_xr": nest(&px2, &[xr, x2]),
    }))
}

#[derive(Serialize, Deserialize)]
struct ConstraintJson {
    subset: Vec<usize>,
    bound: f64,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    label: String,
    value: f64,
}

#[derive(Serialize, Deserialize)]
struct RegionJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    model: Option<String>,
    constraints: Vec<ConstraintJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    terms: Vec<TermJson>,
}

pub fn region_from_json(text: &str) -> Result<RateRegion> {
    let r: RegionJson = serde_json::from_str(text)?;
    let constraints = r
        .constraints
        .into_iter()
        .map(|c| {
            Ok(Constraint {
                subset: RateSet::new(&c.subset)?,
                bound: c.bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    RateRegion::new(constraints)
}

/// Region JSON with an optional model name; the evaluated terms are kept
/// for audit.
pub fn region_to_json(region: &RateRegion, model: Option<&str>) -> String {
    let r = RegionJson {
        model: model.map(str::to_string),
        constraints: region
            .constraints()
            .iter()
            .map(|c| ConstraintJson {
                subset: c.subset.indices(),
                bound: round_num(c.bound),
            })
            .collect(),
        terms: region
            .terms()
            .iter()
            .map(|t| TermJson {
                label: t.label.clone(),
                value: round_num(t.value),
            })
            .collect(),
    };
    pretty(&serde_json::to_value(&r).expect("region serializes"))
}

#[derive(Serialize, Deserialize)]
struct SimFile {
    n: usize,
    #[serde(rename = "B")]
    blocks: usize,
    eps: f64,
    trials: usize,
    seed: u64,
    #[serde(default)]
    shared_codebook: bool,
    rates: RateSplit,
}

pub fn sim_config_from_json(text: &str) -> Result<(SimConfig, RateSplit)> {
    let f: SimFile = serde_json::from_str(text)?;
    let cfg = SimConfig {
        n: f.n,
        blocks: f.blocks,
        eps: f.eps,
        trials: f.trials,
        seed: f.seed,
        shared_codebook: f.shared_codebook,
    };
    cfg.validate()?;
    Ok((cfg, f.rates))
}

pub fn sim_config_to_json(cfg: &SimConfig, rates: &RateSplit) -> String {
    let f = SimFile {
        n: cfg.n,
        blocks: cfg.blocks,
        eps: cfg.eps,
        trials: cfg.trials,
        seed: cfg.seed,
        shared_codebook: cfg.shared_codebook,
        rates: *rates,
    };
    pretty(&serde_json::to_value(&f).expect("config serializes"))
}

fn csv_row(fields: &[String]) -> String {
    let mut s = fields.join(",");
    s.push('\n');
    s
}

pub fn vertices_csv(vertices: &[RatePoint]) -> String {
    let mut s = csv_row(&["r0".into(), "r1".into(), "r2".into()]);
    for v in vertices {
        s += &csv_row(&v.to_array().map(fmt_num));
    }
    s
}

pub fn frontier_csv(points: &[FrontierPoint]) -> String {
    let header = ["lambda0", "lambda1", "lambda2", "r0", "r1", "r2", "support_value"];
    let mut s = csv_row(&header.map(String::from));
    for p in points {
        let w = p.weights;
        let r = p.point.to_array();
        s += &csv_row(&[w[0], w[1], w[2], r[0], r[1], r[2], p.value].map(fmt_num));
    }
    s
}

/// One row per trial, then a `total` row.
pub fn report_csv(report: &ErrorReport) -> String {
    let mut s = csv_row(&["trial", "relay_errors", "sink_errors", "ambiguities"].map(String::from));
    let mut totals = [0usize; 3];
    for t in &report.trials {
        let row = [t.relay_errors, t.sink_errors, t.ambiguities];
        for (acc, v) in totals.iter_mut().zip(row) {
            *acc += v;
        }
        s += &csv_row(&[t.trial.to_string(), row[0].to_string(), row[1].to_string(), row[2].to_string()]);
    }
    s += &csv_row(&[
        "total".into(),
        totals[0].to_string(),
        totals[1].to_string(),
        totals[2].to_string(),
    ]);
    s
}
