//! Input laws: the auxiliary-variable factorization used by the general
//! region and the simpler input families used by the class-specific regions.

use serde::{Deserialize, Serialize};

use crate::channel::{var, DiscreteMarc, MarcSizes, MarcoSplit};
use crate::error::{domain, MarcError, Result};
use crate::prob::{AlphabetSpec, ProbTensor};

/// Axis order of every expanded joint law.
pub const JOINT_AXES: [&str; 8] = [var::U0, var::U1, var::U2, var::X1, var::X2, var::XR, var::YR, var::YD];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuxSizes {
    pub u0: usize,
    pub u1: usize,
    pub u2: usize,
}

impl AuxSizes {
    /// `|U_0| = 1`, `|U_k| = |X_k|`.
    pub fn default_for(sizes: &MarcSizes) -> Self {
        Self {
            u0: 1,
            u1: sizes.x1,
            u2: sizes.x2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputSizes {
    pub aux: AuxSizes,
    pub x1: usize,
    pub x2: usize,
    pub xr: usize,
}

impl InputSizes {
    pub fn for_marc(marc: &DiscreteMarc, aux: AuxSizes) -> Self {
        let s = marc.sizes();
        Self {
            aux,
            x1: s.x1,
            x2: s.x2,
            xr: s.xr,
        }
    }
}

fn table(key: &str, axes: &[(&str, usize)], values: Vec<f64>) -> Result<ProbTensor> {
    let spec = AlphabetSpec::new(axes)?;
    ProbTensor::kernel(spec, 1, values).map_err(|e| match e {
        MarcError::Normalization { residual, .. } => MarcError::Normalization {
            what: key.to_string(),
            residual,
        },
        MarcError::Domain(msg) => MarcError::Domain(format!("{key}: {msg}")),
        other => other,
    })
}

fn check_marc(marc: &DiscreteMarc, x1: usize, x2: usize, xr: usize) -> Result<()> {
    let s = marc.sizes();
    if (s.x1, s.x2, s.xr) != (x1, x2, xr) {
        return domain(format!(
            "input alphabets ({x1}, {x2}, {xr}) do not match channel inputs ({}, {}, {})",
            s.x1, s.x2, s.xr
        ));
    }
    Ok(())
}

/// `p(x_R) p(u_0|x_R) p(u_1|u_0,x_R) p(u_2|u_0,x_R) p(x_1|u_0,u_1,x_R) p(x_2|u_0,u_2,x_R)`.
///
/// Each table is a kernel whose conditioning axes come first, in the order
/// of its name: `pu1_u0xr` is indexed `[u0][xr][u1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizedInput {
    sizes: InputSizes,
    pxr: ProbTensor,
    pu0_xr: ProbTensor,
    pu1_u0xr: ProbTensor,
    pu2_u0xr: ProbTensor,
    px1_u0u1xr: ProbTensor,
    px2_u0u2xr: ProbTensor,
}

/// Names of the factor tables in file order.
pub const FACTOR_KEYS: [&str; 6] = ["pxr", "pu0_xr", "pu1_u0xr", "pu2_u0xr", "px1_u0u1xr", "px2_u0u2xr"];

impl FactorizedInput {
    pub fn from_tables(
        sizes: InputSizes,
        pxr: Vec<f64>,
        pu0_xr: Vec<f64>,
        pu1_u0xr: Vec<f64>,
        pu2_u0xr: Vec<f64>,
        px1_u0u1xr: Vec<f64>,
        px2_u0u2xr: Vec<f64>,
    ) -> Result<Self> {
        let InputSizes { aux, x1, x2, xr } = sizes;
        Ok(Self {
            sizes,
            pxr: table("pxr", &[(var::XR, xr)], pxr)?,
            pu0_xr: table("pu0_xr", &[(var::XR, xr), (var::U0, aux.u0)], pu0_xr)?,
            pu1_u0xr: table("pu1_u0xr", &[(var::U0, aux.u0), (var::XR, xr), (var::U1, aux.u1)], pu1_u0xr)?,
            pu2_u0xr: table("pu2_u0xr", &[(var::U0, aux.u0), (var::XR, xr), (var::U2, aux.u2)], pu2_u0xr)?,
            px1_u0u1xr: table(
                "px1_u0u1xr",
                &[(var::U0, aux.u0), (var::U1, aux.u1), (var::XR, xr), (var::X1, x1)],
                px1_u0u1xr,
            )?,
            px2_u0u2xr: table(
                "px2_u0u2xr",
                &[(var::U0, aux.u0), (var::U2, aux.u2), (var::XR, xr), (var::X2, x2)],
                px2_u0u2xr,
            )?,
        })
    }

    /// Builds the tables by evaluating one closure per factor.
    #[allow(clippy::too_many_arguments)]
    pub fn from_fns(
        sizes: InputSizes,
        pxr: impl Fn(usize) -> f64,
        pu0: impl Fn(usize, usize) -> f64,
        pu1: impl Fn(usize, usize, usize) -> f64,
        pu2: impl Fn(usize, usize, usize) -> f64,
        px1: impl Fn(usize, usize, usize, usize) -> f64,
        px2: impl Fn(usize, usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let InputSizes { aux, x1, x2, xr } = sizes;
        let grid3 = |a: usize, b: usize, c: usize, f: &dyn Fn(usize, usize, usize) -> f64| {
            let mut v = Vec::with_capacity(a * b * c);
            for i in 0..a {
                for j in 0..b {
                    for k in 0..c {
                        v.push(f(i, j, k));
                    }
                }
            }
            v
        };
        let grid4 = |a: usize, b: usize, c: usize, d: usize, f: &dyn Fn(usize, usize, usize, usize) -> f64| {
            let mut v = Vec::with_capacity(a * b * c * d);
            for i in 0..a {
                for j in 0..b {
                    for k in 0..c {
                        for l in 0..d {
                            v.push(f(i, j, k, l));
                        }
                    }
                }
            }
            v
        };
        Self::from_tables(
            sizes,
            (0..xr).map(&pxr).collect(),
            grid3(1, xr, aux.u0, &|_, r, u| pu0(r, u)),
            grid3(aux.u0, xr, aux.u1, &pu1),
            grid3(aux.u0, xr, aux.u2, &pu2),
            grid4(aux.u0, aux.u1, xr, x1, &px1),
            grid4(aux.u0, aux.u2, xr, x2, &px2),
        )
    }

    pub fn sizes(&self) -> InputSizes {
        self.sizes
    }

    pub fn pxr(&self, xr: usize) -> f64 {
        self.pxr.get(&[xr])
    }

    pub fn pu0(&self, xr: usize, u0: usize) -> f64 {
        self.pu0_xr.get(&[xr, u0])
    }

    pub fn pu1(&self, u0: usize, xr: usize, u1: usize) -> f64 {
        self.pu1_u0xr.get(&[u0, xr, u1])
    }

    pub fn pu2(&self, u0: usize, xr: usize, u2: usize) -> f64 {
        self.pu2_u0xr.get(&[u0, xr, u2])
    }

    pub fn px1(&self, u0: usize, u1: usize, xr: usize, x1: usize) -> f64 {
        self.px1_u0u1xr.get(&[u0, u1, xr, x1])
    }

    pub fn px2(&self, u0: usize, u2: usize, xr: usize, x2: usize) -> f64 {
        self.px2_u0u2xr.get(&[u0, u2, xr, x2])
    }

    /// The six factor tables, keyed as in [`FACTOR_KEYS`].
    pub fn tables(&self) -> [(&'static str, &ProbTensor); 6] {
        [
            (FACTOR_KEYS[0], &self.pxr),
            (FACTOR_KEYS[1], &self.pu0_xr),
            (FACTOR_KEYS[2], &self.pu1_u0xr),
            (FACTOR_KEYS[3], &self.pu2_u0xr),
            (FACTOR_KEYS[4], &self.px1_u0u1xr),
            (FACTOR_KEYS[5], &self.px2_u0u2xr),
        ]
    }

    /// Probability of one full assignment `(u0, u1, u2, x1, x2, xr)`.
    pub fn weight(&self, u0: usize, u1: usize, u2: usize, x1: usize, x2: usize, xr: usize) -> f64 {
        self.pxr(xr)
            * self.pu0(xr, u0)
            * self.pu1(u0, xr, u1)
            * self.pu2(u0, xr, u2)
            * self.px1(u0, u1, xr, x1)
            * self.px2(u0, u2, xr, x2)
    }

    /// Marginal law of `(X_1, X_2, X_R)`.
    pub fn input_law(&self) -> InputLaw {
        let InputSizes { aux, x1, x2, xr } = self.sizes;
        let mut v = vec![0.0; x1 * x2 * xr];
        for u0 in 0..aux.u0 {
            for u1 in 0..aux.u1 {
                for u2 in 0..aux.u2 {
                    for a in 0..x1 {
                        for b in 0..x2 {
                            for r in 0..xr {
                                v[(a * x2 + b) * xr + r] += self.weight(u0, u1, u2, a, b, r);
                            }
                        }
                    }
                }
            }
        }
        InputLaw::new(x1, x2, xr, v).expect("marginal of a normalized law")
    }
}

/// Joint law of `(U_0, U_1, U_2, X_1, X_2, X_R, Y_R, Y_D)` for a channel and
/// a factorized input, axes in [`JOINT_AXES`] order.
pub fn expand_joint(marc: &DiscreteMarc, input: &FactorizedInput) -> Result<ProbTensor> {
    let InputSizes { aux, x1, x2, xr } = input.sizes();
    check_marc(marc, x1, x2, xr)?;
    let s = marc.sizes();
    let axes = AlphabetSpec::new(&[
        (var::U0, aux.u0),
        (var::U1, aux.u1),
        (var::U2, aux.u2),
        (var::X1, x1),
        (var::X2, x2),
        (var::XR, xr),
        (var::YR, s.yr),
        (var::YD, s.yd),
    ])?;
    let mut values = Vec::with_capacity(axes.total());
    for u0 in 0..aux.u0 {
        for u1 in 0..aux.u1 {
            for u2 in 0..aux.u2 {
                for a in 0..x1 {
                    for b in 0..x2 {
                        for r in 0..xr {
                            let w = input.weight(u0, u1, u2, a, b, r);
                            values.extend(marc.output_row(a, b, r).iter().map(|p| w * p));
                        }
                    }
                }
            }
        }
    }
    ProbTensor::joint(axes, values)
}

/// Any law of `(X_1, X_2, X_R)`, stored `[x1][x2][xr]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputLaw(ProbTensor);

impl InputLaw {
    pub fn new(x1: usize, x2: usize, xr: usize, values: Vec<f64>) -> Result<Self> {
        let axes = AlphabetSpec::new(&[(var::X1, x1), (var::X2, x2), (var::XR, xr)])?;
        Ok(Self(ProbTensor::joint(axes, values)?))
    }

    pub fn tensor(&self) -> &ProbTensor {
        &self.0
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        let s = self.0.sizes();
        (s[0], s[1], s[2])
    }

    pub fn prob(&self, x1: usize, x2: usize, xr: usize) -> f64 {
        self.0.get(&[x1, x2, xr])
    }

    /// Joint law of `(X_1, X_2, X_R, Y_R, Y_D)` through `marc`.
    pub fn through(&self, marc: &DiscreteMarc) -> Result<ProbTensor> {
        let (x1, x2, xr) = self.sizes();
        check_marc(marc, x1, x2, xr)?;
        let s = marc.sizes();
        let axes = AlphabetSpec::new(&[
            (var::X1, x1),
            (var::X2, x2),
            (var::XR, xr),
            (var::YR, s.yr),
            (var::YD, s.yd),
        ])?;
        let mut values = Vec::with_capacity(axes.total());
        for a in 0..x1 {
            for b in 0..x2 {
                for r in 0..xr {
                    let w = self.prob(a, b, r);
                    values.extend(marc.output_row(a, b, r).iter().map(|p| w * p));
                }
            }
        }
        ProbTensor::joint(axes, values)
    }
}

/// `p(x_R) p(x_1|x_R) p(x_2|x_R)`: the input family left after the
/// auxiliaries are substituted away.
#[derive(Debug, Clone, PartialEq)]
pub struct RelayConditionedInput {
    pxr: ProbTensor,
    px1_xr: ProbTensor,
    px2_xr: ProbTensor,
}

impl RelayConditionedInput {
    /// Tables `pxr[xr]`, `px1_xr[xr][x1]`, `px2_xr[xr][x2]`.
    pub fn new(pxr: Vec<f64>, px1_xr: Vec<f64>, px2_xr: Vec<f64>, x1: usize, x2: usize) -> Result<Self> {
        let xr = pxr.len();
        Ok(Self {
            pxr: table("pxr", &[(var::XR, xr)], pxr)?,
            px1_xr: table("px1_xr", &[(var::XR, xr), (var::X1, x1)], px1_xr)?,
            px2_xr: table("px2_xr", &[(var::XR, xr), (var::X2, x2)], px2_xr)?,
        })
    }

    /// Independent uniform inputs.
    pub fn uniform(x1: usize, x2: usize, xr: usize) -> Self {
        Self::new(
            vec![1.0 / xr as f64; xr],
            vec![1.0 / x1 as f64; x1 * xr],
            vec![1.0 / x2 as f64; x2 * xr],
            x1,
            x2,
        )
        .expect("uniform tables are normalized")
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.px1_xr.sizes()[1], self.px2_xr.sizes()[1], self.pxr.sizes()[0])
    }

    pub fn pxr(&self, xr: usize) -> f64 {
        self.pxr.get(&[xr])
    }

    pub fn px1(&self, xr: usize, x1: usize) -> f64 {
        self.px1_xr.get(&[xr, x1])
    }

    pub fn px2(&self, xr: usize, x2: usize) -> f64 {
        self.px2_xr.get(&[xr, x2])
    }

    pub fn law(&self) -> InputLaw {
        let (x1, x2, xr) = self.sizes();
        let mut v = Vec::with_capacity(x1 * x2 * xr);
        for a in 0..x1 {
            for b in 0..x2 {
                for r in 0..xr {
                    v.push(self.pxr(r) * self.px1(r, a) * self.px2(r, b));
                }
            }
        }
        InputLaw::new(x1, x2, xr, v).expect("product of normalized tables")
    }

    fn aux_sizes(&self, u1: usize, u2: usize) -> InputSizes {
        let (x1, x2, xr) = self.sizes();
        InputSizes {
            aux: AuxSizes { u0: 1, u1, u2 },
            x1,
            x2,
            xr,
        }
    }

    /// `U_k = X_k`, `U_0` degenerate.
    pub fn inputs_as_auxiliaries(&self) -> FactorizedInput {
        let (x1, x2, _) = self.sizes();
        FactorizedInput::from_fns(
            self.aux_sizes(x1, x2),
            |r| self.pxr(r),
            |_, _| 1.0,
            |_, r, u| self.px1(r, u),
            |_, r, u| self.px2(r, u),
            |_, u, _, x| delta(u, x),
            |_, u, _, x| delta(u, x),
        )
        .expect("substitution preserves normalization")
    }

    /// `U_1 = U_2 = X_R`, `U_0` degenerate.
    pub fn relay_as_auxiliaries(&self) -> FactorizedInput {
        let (_, _, xr) = self.sizes();
        FactorizedInput::from_fns(
            self.aux_sizes(xr, xr),
            |r| self.pxr(r),
            |_, _| 1.0,
            |_, r, u| delta(u, r),
            |_, r, u| delta(u, r),
            |_, _, r, x| self.px1(r, x),
            |_, _, r, x| self.px2(r, x),
        )
        .expect("substitution preserves normalization")
    }

    /// `U_k = X_Rk` under the given split, `U_0` degenerate.
    pub fn relay_parts_as_auxiliaries(&self, split: &MarcoSplit) -> Result<FactorizedInput> {
        let (x1, x2, _) = self.sizes();
        if split.xr1 * split.xd1 != x1 || split.xr2 * split.xd2 != x2 {
            return domain(format!("split {split:?} does not match input sizes {x1} and {x2}"));
        }
        let pa1 = |r: usize, a: usize| (0..split.xd1).map(|d| self.px1(r, split.x1(a, d))).sum::<f64>();
        let pa2 = |r: usize, a: usize| (0..split.xd2).map(|d| self.px2(r, split.x2(a, d))).sum::<f64>();
        let px1 = |_: usize, a: usize, r: usize, x: usize| {
            let (xa, xd) = split.parts1(x);
            conditional_part(a == xa, self.px1(r, x), pa1(r, a), xd, split.xd1)
        };
        let px2 = |_: usize, a: usize, r: usize, x: usize| {
            let (xa, xd) = split.parts2(x);
            conditional_part(a == xa, self.px2(r, x), pa2(r, a), xd, split.xd2)
        };
        FactorizedInput::from_fns(
            self.aux_sizes(split.xr1, split.xr2),
            |r| self.pxr(r),
            |_, _| 1.0,
            |_, r, a| pa1(r, a),
            |_, r, a| pa2(r, a),
            px1,
            px2,
        )
    }
}

/// `p(x | a, r)` for `x = (a', d)`: zero unless `a' = a`; uniform over `d`
/// when `p(a | r) = 0`.
fn conditional_part(same: bool, p: f64, pa: f64, _d: usize, nd: usize) -> f64 {
    if !same {
        0.0
    } else if pa > 0.0 {
        p / pa
    } else {
        1.0 / nd as f64
    }
}

fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// `p(x_1) p(x_2) p(x_R | x_1, x_2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KwInput {
    px1: ProbTensor,
    px2: ProbTensor,
    pxr_x1x2: ProbTensor,
}

impl KwInput {
    /// Tables `px1[x1]`, `px2[x2]`, `pxr_x1x2[x1][x2][xr]`.
    pub fn new(px1: Vec<f64>, px2: Vec<f64>, pxr_x1x2: Vec<f64>, xr: usize) -> Result<Self> {
        let (x1, x2) = (px1.len(), px2.len());
        Ok(Self {
            px1: table("px1", &[(var::X1, x1)], px1)?,
            px2: table("px2", &[(var::X2, x2)], px2)?,
            pxr_x1x2: table("pxr_x1x2", &[(var::X1, x1), (var::X2, x2), (var::XR, xr)], pxr_x1x2)?,
        })
    }

    pub fn law(&self) -> InputLaw {
        let s = self.pxr_x1x2.sizes();
        let (x1, x2, xr) = (s[0], s[1], s[2]);
        let mut v = Vec::with_capacity(x1 * x2 * xr);
        for a in 0..x1 {
            for b in 0..x2 {
                for r in 0..xr {
                    v.push(self.px1.get(&[a]) * self.px2.get(&[b]) * self.pxr_x1x2.get(&[a, b, r]));
                }
            }
        }
        InputLaw::new(x1, x2, xr, v).expect("product of normalized tables")
    }
}

/// `p(x_R) prod_k p(x_Rk | x_R) p(x_Dk | x_R)` for orthogonal channels.
#[derive(Debug, Clone, PartialEq)]
pub struct MarcoInput {
    split: MarcoSplit,
    pxr: ProbTensor,
    parts: [ProbTensor; 4],
}

/// Table keys of [`MarcoInput`] after `pxr`, in the order of its `parts`.
pub const MARCO_PART_KEYS: [&str; 4] = ["pxr1_xr", "pxd1_xr", "pxr2_xr", "pxd2_xr"];

impl MarcoInput {
    pub fn new(
        split: MarcoSplit,
        pxr: Vec<f64>,
        pxr1_xr: Vec<f64>,
        pxd1_xr: Vec<f64>,
        pxr2_xr: Vec<f64>,
        pxd2_xr: Vec<f64>,
    ) -> Result<Self> {
        let xr = pxr.len();
        let part = |key: &str, name: &str, n: usize, v: Vec<f64>| table(key, &[(var::XR, xr), (name, n)], v);
        Ok(Self {
            split,
            pxr: table("pxr", &[(var::XR, xr)], pxr)?,
            parts: [
                part(MARCO_PART_KEYS[0], var::XR1, split.xr1, pxr1_xr)?,
                part(MARCO_PART_KEYS[1], var::XD1, split.xd1, pxd1_xr)?,
                part(MARCO_PART_KEYS[2], var::XR2, split.xr2, pxr2_xr)?,
                part(MARCO_PART_KEYS[3], var::XD2, split.xd2, pxd2_xr)?,
            ],
        })
    }

    pub fn split(&self) -> &MarcoSplit {
        &self.split
    }

    pub fn to_relay_conditioned(&self) -> RelayConditionedInput {
        let s = self.split;
        let xr = self.pxr.sizes()[0];
        let [r1, d1, r2, d2] = &self.parts;
        let mut px1 = Vec::with_capacity(xr * s.xr1 * s.xd1);
        let mut px2 = Vec::with_capacity(xr * s.xr2 * s.xd2);
        for r in 0..xr {
            for a in 0..s.xr1 {
                for d in 0..s.xd1 {
                    px1.push(r1.get(&[r, a]) * d1.get(&[r, d]));
                }
            }
            for a in 0..s.xr2 {
                for d in 0..s.xd2 {
                    px2.push(r2.get(&[r, a]) * d2.get(&[r, d]));
                }
            }
        }
        RelayConditionedInput::new(
            self.pxr.values().to_vec(),
            px1,
            px2,
            s.xr1 * s.xd1,
            s.xr2 * s.xd2,
        )
        .expect("product of normalized tables")
    }

    pub fn law(&self) -> InputLaw {
        self.to_relay_conditioned().law()
    }
}

/// `p(s) p(x_1|s) p(x_2|s)` for a multiple-access channel with a common
/// message carried by `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct MacInput {
    ps: ProbTensor,
    px1_s: ProbTensor,
    px2_s: ProbTensor,
}

impl MacInput {
    pub fn new(ps: Vec<f64>, px1_s: Vec<f64>, px2_s: Vec<f64>, x1: usize, x2: usize) -> Result<Self> {
        let s = ps.len();
        Ok(Self {
            ps: table("ps", &[(var::U0, s)], ps)?,
            px1_s: table("px1_s", &[(var::U0, s), (var::X1, x1)], px1_s)?,
            px2_s: table("px2_s", &[(var::U0, s), (var::X2, x2)], px2_s)?,
        })
    }

    /// `U_0 = S`, `U_k = X_k`, singleton `X_R`.
    pub fn to_factorized(&self) -> FactorizedInput {
        let s = self.ps.sizes()[0];
        let x1 = self.px1_s.sizes()[1];
        let x2 = self.px2_s.sizes()[1];
        FactorizedInput::from_fns(
            InputSizes {
                aux: AuxSizes { u0: s, u1: x1, u2: x2 },
                x1,
                x2,
                xr: 1,
            },
            |_| 1.0,
            |_, u0| self.ps.get(&[u0]),
            |u0, _, u| self.px1_s.get(&[u0, u]),
            |u0, _, u| self.px2_s.get(&[u0, u]),
            |_, u, _, x| delta(u, x),
            |_, u, _, x| delta(u, x),
        )
        .expect("substitution preserves normalization")
    }
}
