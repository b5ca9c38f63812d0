//! Discrete memoryless multiple-access relay channels and their special
//! classes: degraded, reversely degraded, semi-deterministic and orthogonal.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, MarcError, Result};
use crate::prob::{AlphabetSpec, ProbTensor, IDENTITY_TOL, NORMALIZATION_TOL};

/// Axis names shared by every law in the crate.
pub mod var {
    pub const U0: &str = "U0";
    pub const U1: &str = "U1";
    pub const U2: &str = "U2";
    pub const X1: &str = "X1";
    pub const X2: &str = "X2";
    pub const XR: &str = "XR";
    pub const YR: &str = "YR";
    pub const YD: &str = "YD";
    pub const XR1: &str = "XR1";
    pub const XD1: &str = "XD1";
    pub const XR2: &str = "XR2";
    pub const XD2: &str = "XD2";
}

/// Class membership is accepted when the recomposition residual is at most this.
pub const CLASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarcSizes {
    pub x1: usize,
    pub x2: usize,
    pub xr: usize,
    pub yr: usize,
    pub yd: usize,
}

impl MarcSizes {
    pub fn new(x1: usize, x2: usize, xr: usize, yr: usize, yd: usize) -> Self {
        Self { x1, x2, xr, yr, yd }
    }

    fn inputs(&self) -> usize {
        self.x1 * self.x2 * self.xr
    }
}

/// How each sender input `X_k` decomposes into a relay-facing part `X_Rk`
/// and a destination-facing part `X_Dk`. Symbol `x_k` encodes the pair
/// `(x_Rk, x_Dk)` as `x_Rk * |X_Dk| + x_Dk`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarcoSplit {
    pub xr1: usize,
    pub xd1: usize,
    pub xr2: usize,
    pub xd2: usize,
}

impl MarcoSplit {
    pub fn new(xr1: usize, xd1: usize, xr2: usize, xd2: usize) -> Result<Self> {
        if [xr1, xd1, xr2, xd2].contains(&0) {
            return domain("split sizes must be at least 1");
        }
        Ok(Self { xr1, xd1, xr2, xd2 })
    }

    pub fn fits(&self, sizes: &MarcSizes) -> bool {
        self.xr1 * self.xd1 == sizes.x1 && self.xr2 * self.xd2 == sizes.x2
    }

    pub fn x1(&self, xr1: usize, xd1: usize) -> usize {
        xr1 * self.xd1 + xd1
    }

    pub fn x2(&self, xr2: usize, xd2: usize) -> usize {
        xr2 * self.xd2 + xd2
    }

    /// `(x_R1, x_D1)` for a symbol of `X_1`.
    pub fn parts1(&self, x1: usize) -> (usize, usize) {
        (x1 / self.xd1, x1 % self.xd1)
    }

    pub fn parts2(&self, x2: usize) -> (usize, usize) {
        (x2 / self.xd2, x2 % self.xd2)
    }

    /// Every split compatible with `sizes`, including the trivial ones.
    pub fn candidates(sizes: &MarcSizes) -> Vec<MarcoSplit> {
        let divisors = |n: usize| (1..=n).filter(move |d| n.is_multiple_of(*d));
        let mut out = Vec::new();
        for a in divisors(sizes.x1) {
            for b in divisors(sizes.x2) {
                out.push(MarcoSplit {
                    xr1: a,
                    xd1: sizes.x1 / a,
                    xr2: b,
                    xd2: sizes.x2 / b,
                });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassTag {
    General,
    /// Degraded: `(X_1, X_2) -> (X_R, Y_R) -> Y_D`.
    Madrc,
    /// Reversely degraded: `(X_1, X_2) -> (X_R, Y_D) -> Y_R`.
    Mardrc,
    /// Semi-deterministic: `Y_R = g(X_1, X_2, X_R)`.
    Masdrc,
    /// Orthogonal components.
    Marco(MarcoSplit),
}

impl ClassTag {
    pub fn name(&self) -> &'static str {
        match self {
            ClassTag::General => "general",
            ClassTag::Madrc => "madrc",
            ClassTag::Mardrc => "mardrc",
            ClassTag::Masdrc => "masdrc",
            ClassTag::Marco(_) => "marco",
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Class names without MARCO split metadata.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassName {
    General,
    Madrc,
    Mardrc,
    Masdrc,
    Marco,
}

impl FromStr for ClassName {
    type Err = MarcError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "general" => Ok(ClassName::General),
            "madrc" => Ok(ClassName::Madrc),
            "mardrc" => Ok(ClassName::Mardrc),
            "masdrc" => Ok(ClassName::Masdrc),
            "marco" => Ok(ClassName::Marco),
            other => domain(format!("unknown channel class {other}")),
        }
    }
}

/// A two-source MARC `p(y_R, y_D | x_1, x_2, x_R)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMarc {
    sizes: MarcSizes,
    kernel: ProbTensor,
    split: Option<MarcoSplit>,
}

impl DiscreteMarc {
    /// Builds a channel from row-major values indexed `[x1][x2][xr][yr][yd]`.
    pub fn new(sizes: MarcSizes, values: Vec<f64>) -> Result<Self> {
        let axes = AlphabetSpec::new(&[
            (var::X1, sizes.x1),
            (var::X2, sizes.x2),
            (var::XR, sizes.xr),
            (var::YR, sizes.yr),
            (var::YD, sizes.yd),
        ])?;
        Ok(Self {
            sizes,
            kernel: ProbTensor::kernel(axes, 2, values)?,
            split: None,
        })
    }

    pub fn from_fn(
        sizes: MarcSizes,
        mut f: impl FnMut(usize, usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(sizes.inputs() * sizes.yr * sizes.yd);
        for x1 in 0..sizes.x1 {
            for x2 in 0..sizes.x2 {
                for xr in 0..sizes.xr {
                    for yr in 0..sizes.yr {
                        for yd in 0..sizes.yd {
                            values.push(f(x1, x2, xr, yr, yd));
                        }
                    }
                }
            }
        }
        Self::new(sizes, values)
    }

    /// Attaches orthogonal-component metadata.
    pub fn with_split(mut self, split: MarcoSplit) -> Result<Self> {
        if !split.fits(&self.sizes) {
            return domain(format!(
                "split {split:?} does not match input sizes {} and {}",
                self.sizes.x1, self.sizes.x2
            ));
        }
        self.split = Some(split);
        Ok(self)
    }

    pub fn sizes(&self) -> MarcSizes {
        self.sizes
    }

    pub fn split(&self) -> Option<&MarcoSplit> {
        self.split.as_ref()
    }

    pub fn kernel(&self) -> &ProbTensor {
        &self.kernel
    }

    pub fn prob(&self, x1: usize, x2: usize, xr: usize, yr: usize, yd: usize) -> f64 {
        self.kernel.get(&[x1, x2, xr, yr, yd])
    }

    /// `p(y_R | x_1, x_2, x_R)`.
    pub fn relay_prob(&self, x1: usize, x2: usize, xr: usize, yr: usize) -> f64 {
        (0..self.sizes.yd).map(|yd| self.prob(x1, x2, xr, yr, yd)).sum()
    }

    /// `p(y_D | x_1, x_2, x_R)`.
    pub fn dest_prob(&self, x1: usize, x2: usize, xr: usize, yd: usize) -> f64 {
        (0..self.sizes.yr).map(|yr| self.prob(x1, x2, xr, yr, yd)).sum()
    }

    /// Output distribution for one input triple, flattened `[yr][yd]`.
    pub fn output_row(&self, x1: usize, x2: usize, xr: usize) -> &[f64] {
        let row = self.sizes.yr * self.sizes.yd;
        let start = ((x1 * self.sizes.x2 + x2) * self.sizes.xr + xr) * row;
        &self.kernel.values()[start..start + row]
    }

    pub fn normalization_residual(&self) -> f64 {
        self.kernel.normalization_residual()
    }
}

fn expect_kernel(what: &str, k: &ProbTensor, sizes: &[usize]) -> Result<()> {
    let outcome_ok = matches!(k.role(), crate::prob::Role::Kernel { outcome_axes: 1 });
    if !outcome_ok || k.sizes() != sizes {
        return domain(format!(
            "{what}: expected a single-outcome kernel of shape {sizes:?}, got {:?}",
            k.sizes()
        ));
    }
    let residual = k.normalization_residual();
    if residual > NORMALIZATION_TOL {
        return Err(MarcError::Normalization {
            what: what.to_string(),
            residual,
        });
    }
    Ok(())
}

/// Degraded MARC: `p(y_R | x_1, x_2, x_R) p(y_D | x_R, y_R)`.
///
/// `base` has shape `[x1, x2, xr | yr]` and `degrade` has shape `[xr, yr | yd]`.
pub fn build_degraded(base: &ProbTensor, degrade: &ProbTensor) -> Result<DiscreteMarc> {
    let bs = base.sizes();
    if bs.len() != 4 {
        return domain("base kernel must have axes [x1, x2, xr, yr]");
    }
    expect_kernel("base", base, bs)?;
    let yd = degrade.sizes().last().copied().unwrap_or(0);
    expect_kernel("degrade", degrade, &[bs[2], bs[3], yd])?;
    let sizes = MarcSizes::new(bs[0], bs[1], bs[2], bs[3], yd);
    DiscreteMarc::from_fn(sizes, |x1, x2, xr, yr, yd| {
        base.get(&[x1, x2, xr, yr]) * degrade.get(&[xr, yr, yd])
    })
}

/// Reversely degraded MARC: `p(y_D | x_1, x_2, x_R) p(y_R | y_D, x_R)`.
///
/// `direct` has shape `[x1, x2, xr | yd]` and `degrade` has shape `[yd, xr | yr]`.
pub fn build_reversely_degraded(direct: &ProbTensor, degrade: &ProbTensor) -> Result<DiscreteMarc> {
    let ds = direct.sizes();
    if ds.len() != 4 {
        return domain("direct kernel must have axes [x1, x2, xr, yd]");
    }
    expect_kernel("direct", direct, ds)?;
    let yr = degrade.sizes().last().copied().unwrap_or(0);
    expect_kernel("degrade", degrade, &[ds[3], ds[2], yr])?;
    let sizes = MarcSizes::new(ds[0], ds[1], ds[2], yr, ds[3]);
    DiscreteMarc::from_fn(sizes, |x1, x2, xr, yr, yd| {
        direct.get(&[x1, x2, xr, yd]) * degrade.get(&[yd, xr, yr])
    })
}

/// Semi-deterministic MARC: `y_R = g(x_1, x_2, x_R)` and
/// `p(y_D | x_1, x_2, x_R, y_R)` given by `direct` of shape `[x1, x2, xr, yr | yd]`.
pub fn build_semideterministic(
    g: impl Fn(usize, usize, usize) -> usize,
    direct: &ProbTensor,
) -> Result<DiscreteMarc> {
    let ds = direct.sizes();
    if ds.len() != 5 {
        return domain("direct kernel must have axes [x1, x2, xr, yr, yd]");
    }
    expect_kernel("direct", direct, ds)?;
    let sizes = MarcSizes::new(ds[0], ds[1], ds[2], ds[3], ds[4]);
    for x1 in 0..sizes.x1 {
        for x2 in 0..sizes.x2 {
            for xr in 0..sizes.xr {
                let y = g(x1, x2, xr);
                if y >= sizes.yr {
                    return domain(format!("g({x1}, {x2}, {xr}) = {y} is outside Y_R"));
                }
            }
        }
    }
    DiscreteMarc::from_fn(sizes, |x1, x2, xr, yr, yd| {
        if g(x1, x2, xr) == yr {
            direct.get(&[x1, x2, xr, yr, yd])
        } else {
            0.0
        }
    })
}

/// MARC with orthogonal components. `relay_branch` has shape
/// `[xr1, xr2, xr | yr]`, `direct_branch` has shape `[xd1, xd2, xr | yd]`.
/// The returned channel carries the split metadata.
pub fn build_orthogonal(relay_branch: &ProbTensor, direct_branch: &ProbTensor) -> Result<DiscreteMarc> {
    let rs = relay_branch.sizes();
    let ds = direct_branch.sizes();
    if rs.len() != 4 || ds.len() != 4 {
        return domain("orthogonal branches must each have four axes");
    }
    if rs[2] != ds[2] {
        return domain(format!("relay input sizes differ: {} vs {}", rs[2], ds[2]));
    }
    expect_kernel("relay branch", relay_branch, rs)?;
    expect_kernel("direct branch", direct_branch, ds)?;
    let split = MarcoSplit::new(rs[0], ds[0], rs[1], ds[1])?;
    let sizes = MarcSizes::new(rs[0] * ds[0], rs[1] * ds[1], rs[2], rs[3], ds[3]);
    DiscreteMarc::from_fn(sizes, |x1, x2, xr, yr, yd| {
        let (a1, d1) = split.parts1(x1);
        let (a2, d2) = split.parts2(x2);
        relay_branch.get(&[a1, a2, xr, yr]) * direct_branch.get(&[d1, d2, xr, yd])
    })?
    .with_split(split)
}

/// Embeds a two-user MAC `[x1, x2 | y]` as a relayless MARC: singleton
/// `X_R`, `Y_D = Y`, and a noiseless `Y_R = (X_1, X_2)`. The relay decodes
/// everything it could ever need, so its constraints never bind and only
/// the sink-side terms remain.
pub fn embed_mac(mac: &ProbTensor) -> Result<DiscreteMarc> {
    let ms = mac.sizes();
    if ms.len() != 3 {
        return domain("MAC kernel must have axes [x1, x2, y]");
    }
    expect_kernel("mac", mac, ms)?;
    let sizes = MarcSizes::new(ms[0], ms[1], 1, ms[0] * ms[1], ms[2]);
    DiscreteMarc::from_fn(sizes, |x1, x2, _, yr, yd| {
        if yr == x1 * ms[1] + x2 {
            mac.get(&[x1, x2, yd])
        } else {
            0.0
        }
    })
}

/// Outcome of a class-membership test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassCheck {
    pub accepted: bool,
    /// Max entrywise distance between the kernel and its best in-class
    /// recomposition (for MASDRC: the largest non-deterministic mass).
    pub residual: f64,
}

impl ClassCheck {
    fn from_residual(residual: f64) -> Self {
        Self {
            accepted: residual <= CLASS_TOL,
            residual,
        }
    }
}

/// Decides membership in a channel class by fitting the class factors
/// under uniform inputs, recomposing, and measuring the residual.
pub fn validate_class(marc: &DiscreteMarc, tag: &ClassTag) -> ClassCheck {
    match tag {
        ClassTag::General => ClassCheck::from_residual(marc.normalization_residual()),
        ClassTag::Madrc => ClassCheck::from_residual(degraded_residual(marc)),
        ClassTag::Mardrc => ClassCheck::from_residual(reversely_degraded_residual(marc)),
        ClassTag::Masdrc => ClassCheck::from_residual(determinism_residual(marc)),
        ClassTag::Marco(split) => {
            if !split.fits(&marc.sizes()) {
                return ClassCheck {
                    accepted: false,
                    residual: f64::INFINITY,
                };
            }
            ClassCheck::from_residual(orthogonal_residual(marc, split))
        }
    }
}

/// MARCO membership using the channel's split if present, otherwise the
/// best over every compatible split.
pub fn validate_marco_any(marc: &DiscreteMarc) -> (Option<MarcoSplit>, ClassCheck) {
    let candidates = match marc.split() {
        Some(s) => vec![*s],
        None => MarcoSplit::candidates(&marc.sizes()),
    };
    let mut best: (Option<MarcoSplit>, ClassCheck) = (
        None,
        ClassCheck {
            accepted: false,
            residual: f64::INFINITY,
        },
    );
    for split in candidates {
        let check = validate_class(marc, &ClassTag::Marco(split));
        if check.residual < best.1.residual {
            best = (Some(split), check);
        }
    }
    best
}

fn degraded_residual(marc: &DiscreteMarc) -> f64 {
    let s = marc.sizes();
    let mut worst = 0.0f64;
    for xr in 0..s.xr {
        for yr in 0..s.yr {
            let mut fit = vec![0.0; s.yd];
            for x1 in 0..s.x1 {
                for x2 in 0..s.x2 {
                    for (yd, f) in fit.iter_mut().enumerate() {
                        *f += marc.prob(x1, x2, xr, yr, yd);
                    }
                }
            }
            normalize_or_uniform(&mut fit);
            for x1 in 0..s.x1 {
                for x2 in 0..s.x2 {
                    let pr = marc.relay_prob(x1, x2, xr, yr);
                    for (yd, f) in fit.iter().enumerate() {
                        worst = worst.max((marc.prob(x1, x2, xr, yr, yd) - pr * f).abs());
                    }
                }
            }
        }
    }
    worst
}

fn reversely_degraded_residual(marc: &DiscreteMarc) -> f64 {
    let s = marc.sizes();
    let mut worst = 0.0f64;
    for xr in 0..s.xr {
        for yd in 0..s.yd {
            let mut fit = vec![0.0; s.yr];
            for x1 in 0..s.x1 {
                for x2 in 0..s.x2 {
                    for (yr, f) in fit.iter_mut().enumerate() {
                        *f += marc.prob(x1, x2, xr, yr, yd);
                    }
                }
            }
            normalize_or_uniform(&mut fit);
            for x1 in 0..s.x1 {
                for x2 in 0..s.x2 {
                    let pd = marc.dest_prob(x1, x2, xr, yd);
                    for (yr, f) in fit.iter().enumerate() {
                        worst = worst.max((marc.prob(x1, x2, xr, yr, yd) - pd * f).abs());
                    }
                }
            }
        }
    }
    worst
}

fn determinism_residual(marc: &DiscreteMarc) -> f64 {
    let s = marc.sizes();
    let mut worst = 0.0f64;
    for x1 in 0..s.x1 {
        for x2 in 0..s.x2 {
            for xr in 0..s.xr {
                let top = (0..s.yr)
                    .map(|yr| marc.relay_prob(x1, x2, xr, yr))
                    .fold(0.0, f64::max);
                worst = worst.max(1.0 - top);
            }
        }
    }
    worst
}

fn orthogonal_residual(marc: &DiscreteMarc, split: &MarcoSplit) -> f64 {
    let s = marc.sizes();
    let relay_idx = |a1: usize, a2: usize, xr: usize| (a1 * split.xr2 + a2) * s.xr + xr;
    let direct_idx = |d1: usize, d2: usize, xr: usize| (d1 * split.xd2 + d2) * s.xr + xr;
    let mut relay = vec![vec![0.0; s.yr]; split.xr1 * split.xr2 * s.xr];
    let mut direct = vec![vec![0.0; s.yd]; split.xd1 * split.xd2 * s.xr];
    let relay_weight = 1.0 / (split.xd1 * split.xd2) as f64;
    let direct_weight = 1.0 / (split.xr1 * split.xr2) as f64;
    for x1 in 0..s.x1 {
        let (a1, d1) = split.parts1(x1);
        for x2 in 0..s.x2 {
            let (a2, d2) = split.parts2(x2);
            for xr in 0..s.xr {
                for yr in 0..s.yr {
                    relay[relay_idx(a1, a2, xr)][yr] += relay_weight * marc.relay_prob(x1, x2, xr, yr);
                }
                for yd in 0..s.yd {
                    direct[direct_idx(d1, d2, xr)][yd] += direct_weight * marc.dest_prob(x1, x2, xr, yd);
                }
            }
        }
    }
    let mut worst = 0.0f64;
    for x1 in 0..s.x1 {
        let (a1, d1) = split.parts1(x1);
        for x2 in 0..s.x2 {
            let (a2, d2) = split.parts2(x2);
            for xr in 0..s.xr {
                let r = &relay[relay_idx(a1, a2, xr)];
                let d = &direct[direct_idx(d1, d2, xr)];
                for yr in 0..s.yr {
                    for yd in 0..s.yd {
                        worst = worst.max((marc.prob(x1, x2, xr, yr, yd) - r[yr] * d[yd]).abs());
                    }
                }
            }
        }
    }
    worst
}

fn normalize_or_uniform(v: &mut [f64]) {
    let z: f64 = v.iter().sum();
    if z > IDENTITY_TOL {
        v.iter_mut().for_each(|x| *x /= z);
    } else {
        let u = 1.0 / v.len() as f64;
        v.iter_mut().for_each(|x| *x = u);
    }
}
