//! Rate regions over `(R_0, R_1, R_2)` for a fixed channel and input law.
//!
//! A region is a list of constraints `sum_{i in S} R_i <= c_S` plus
//! nonnegativity. Bounds are evaluated exactly for one distribution; the
//! union over distributions lives in [`crate::search`].

use std::fmt;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::channel::{validate_class, var, ClassTag, DiscreteMarc};
use crate::error::{domain, Result};
use crate::input::{expand_joint, FactorizedInput, InputLaw, KwInput, RelayConditionedInput, JOINT_AXES};
use crate::prob::{clamp_nonnegative, AlphabetSpec, InfoMeasures, ProbTensor, IDENTITY_TOL};

/// Feasibility and bound-equality tolerance.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// A nonempty subset of the rate indices `{0, 1, 2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RateSet(u8);

impl RateSet {
    pub const R0: RateSet = RateSet(0b001);
    pub const R1: RateSet = RateSet(0b010);
    pub const R2: RateSet = RateSet(0b100);
    pub const R12: RateSet = RateSet(0b110);
    pub const R012: RateSet = RateSet(0b111);

    pub fn new(indices: &[usize]) -> Result<Self> {
        let mut bits = 0u8;
        for &i in indices {
            if i > 2 {
                return domain(format!("rate index {i} is not in {{0, 1, 2}}"));
            }
            bits |= 1 << i;
        }
        if bits == 0 {
            return domain("a constraint needs at least one rate");
        }
        Ok(RateSet(bits))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..3).filter(|&i| self.contains(i)).collect()
    }

    fn coefficients(self) -> [f64; 3] {
        [0, 1, 2].map(|i| if self.contains(i) { 1.0 } else { 0.0 })
    }
}

impl fmt::Debug for RateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(|i| format!("R{i}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

/// Rates in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RatePoint {
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
}

impl RatePoint {
    pub fn new(r0: f64, r1: f64, r2: f64) -> Self {
        Self { r0, r1, r2 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.r0, self.r1, self.r2]
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn dot(self, weights: [f64; 3]) -> f64 {
        self.r0 * weights[0] + self.r1 * weights[1] + self.r2 * weights[2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constraint {
    pub subset: RateSet,
    pub bound: f64,
}

/// One evaluated information term, kept for audit output.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RateRegion {
    constraints: Vec<Constraint>,
    terms: Vec<Term>,
}

impl RateRegion {
    /// Bounds within [`IDENTITY_TOL`] below zero are clamped; anything more
    /// negative is rejected.
    pub fn new(constraints: Vec<Constraint>) -> Result<Self> {
        let mut out = Vec::with_capacity(constraints.len());
        for c in constraints {
            let bound = clamp_nonnegative(c.bound);
            if !(bound.is_finite() && bound >= 0.0) {
                return domain(format!("bound {} for {} must be finite and nonnegative", c.bound, c.subset));
            }
            out.push(Constraint { bound, ..c });
        }
        Ok(Self {
            constraints: out,
            terms: Vec::new(),
        })
    }

    fn with_terms(mut self, terms: Vec<Term>) -> Self {
        self.terms = terms;
        self
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Information terms that produced the bounds, in evaluation order.
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Tightest bound on the given subset, if constrained.
    pub fn bound(&self, subset: RateSet) -> Option<f64> {
        self.constraints
            .iter()
            .filter(|c| c.subset == subset)
            .map(|c| c.bound)
            .reduce(f64::min)
    }

    pub fn contains(&self, p: RatePoint) -> bool {
        let x = p.to_array();
        x.iter().all(|&v| v >= -FEASIBILITY_TOL)
            && self
                .constraints
                .iter()
                .all(|c| c.subset.indices().iter().map(|&i| x[i]).sum::<f64>() <= c.bound + FEASIBILITY_TOL)
    }

    /// Rate indices not covered by any constraint.
    fn free_coordinates(&self) -> Vec<usize> {
        (0..3)
            .filter(|&i| !self.constraints.iter().any(|c| c.subset.contains(i)))
            .collect()
    }

    pub fn is_bounded(&self) -> bool {
        self.free_coordinates().is_empty()
    }

    /// Vertices of the polytope, sorted lexicographically.
    ///
    /// Every 3-subset of the constraint and coordinate planes is solved;
    /// nonsingular solutions feasible within [`FEASIBILITY_TOL`] are kept and
    /// deduplicated within the same tolerance.
    pub fn vertices(&self) -> Vec<RatePoint> {
        let mut planes: Vec<([f64; 3], f64)> = (0..3)
            .map(|i| {
                let mut a = [0.0; 3];
                a[i] = 1.0;
                (a, 0.0)
            })
            .collect();
        planes.extend(self.constraints.iter().map(|c| (c.subset.coefficients(), c.bound)));
        let mut out: Vec<[f64; 3]> = Vec::new();
        let n = planes.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let Some(mut x) = solve3([planes[i], planes[j], planes[k]]) else {
                        continue;
                    };
                    for v in x.iter_mut() {
                        if v.abs() <= FEASIBILITY_TOL {
                            *v = v.abs();
                        }
                    }
                    if !self.contains(RatePoint::from_array(x)) {
                        continue;
                    }
                    let dup = out
                        .iter()
                        .any(|y| (0..3).all(|d| (x[d] - y[d]).abs() <= FEASIBILITY_TOL));
                    if !dup {
                        out.push(x);
                    }
                }
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).expect("finite vertices"));
        out.into_iter().map(RatePoint::from_array).collect()
    }

    /// First vertex of `other` outside `self`, if any. An unbounded `other`
    /// also fails when `self` bounds one of its free directions; the witness
    /// is then a point far along that direction.
    pub fn inclusion_witness(&self, other: &RateRegion) -> Option<RatePoint> {
        let mine = self.free_coordinates();
        for i in other.free_coordinates() {
            if !mine.contains(&i) {
                let mut x = [0.0; 3];
                let far = self.constraints.iter().map(|c| c.bound).fold(1.0, f64::max) * 2.0 + 1.0;
                x[i] = far;
                return Some(RatePoint::from_array(x));
            }
        }
        other.vertices().into_iter().find(|v| !self.contains(*v))
    }

    /// Whether `other` is a subset of `self`.
    pub fn includes(&self, other: &RateRegion) -> bool {
        self.inclusion_witness(other).is_none()
    }

    /// Largest absolute bound difference over subsets constrained in both.
    pub fn max_bound_difference(&self, other: &RateRegion) -> f64 {
        let mut worst = 0.0f64;
        for c in &self.constraints {
            if let (Some(a), Some(b)) = (self.bound(c.subset), other.bound(c.subset)) {
                worst = worst.max((a - b).abs());
            }
        }
        worst
    }

    /// `max weights . R` over the region with a maximizing vertex.
    pub fn support(&self, weights: [f64; 3]) -> (f64, RatePoint) {
        if self.free_coordinates().iter().any(|&i| weights[i] > 0.0) {
            return (f64::INFINITY, RatePoint::default());
        }
        self.vertices()
            .into_iter()
            .map(|v| (v.dot(weights), v))
            .fold((f64::NEG_INFINITY, RatePoint::default()), |best, cur| {
                if cur.0 > best.0 {
                    cur
                } else {
                    best
                }
            })
    }
}

/// Solves a 3x3 system with 0/1 coefficients; `None` when singular. The
/// determinant is an integer, so singularity is decided exactly.
fn solve3(rows: [([f64; 3], f64); 3]) -> Option<[f64; 3]> {
    let a: [[f64; 3]; 3] = [rows[0].0, rows[1].0, rows[2].0];
    let b = [rows[0].1, rows[1].1, rows[2].1];
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&a);
    if d.abs() < 0.5 {
        return None;
    }
    let mut x = [0.0; 3];
    for (col, xc) in x.iter_mut().enumerate() {
        let mut m = a;
        for r in 0..3 {
            m[r][col] = b[r];
        }
        *xc = det(&m) / d;
    }
    Some(x)
}

/// Records labelled information terms while bounds are assembled.
struct TermLog<'a> {
    model: &'static str,
    m: InfoMeasures<'a>,
    terms: Vec<Term>,
}

impl<'a> TermLog<'a> {
    fn new(model: &'static str, law: &'a ProbTensor) -> Result<Self> {
        Ok(Self {
            model,
            m: law.measures()?,
            terms: Vec::new(),
        })
    }

    fn mi(&mut self, part: &str, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
        let v = self.m.cmi(a, b, c)?;
        let cond = if c.is_empty() {
            String::new()
        } else {
            format!("|{}", c.join(","))
        };
        self.terms.push(Term {
            label: format!("{} {part}: I({};{}{cond})", self.model, a.join(","), b.join(",")),
            value: v,
        });
        Ok(v)
    }

    fn h(&mut self, part: &str, a: &[&str], given: &[&str]) -> Result<f64> {
        let v = self.m.cond_entropy(a, given)?;
        self.terms.push(Term {
            label: format!("{} {part}: H({}|{})", self.model, a.join(","), given.join(",")),
            value: v,
        });
        Ok(v)
    }

    fn finish(self, constraints: Vec<(RateSet, f64)>) -> Result<RateRegion> {
        for (s, b) in &constraints {
            if *b < -IDENTITY_TOL {
                return domain(format!("{} bound for {s} is negative: {b}", self.model));
            }
        }
        let region = RateRegion::new(
            constraints
                .into_iter()
                .map(|(subset, bound)| Constraint { subset, bound })
                .collect(),
        )?;
        Ok(region.with_terms(self.terms))
    }
}

use var::{U0, U1, U2, X1, X2, XR, YD, YR};

/// The general decode-and-forward region for a joint law over
/// [`JOINT_AXES`]. Each bound is the smaller of a sink-side expression and a
/// relay-side expression.
pub fn general_from_joint(joint: &ProbTensor) -> Result<RateRegion> {
    if joint.axes().names() != JOINT_AXES {
        return domain(format!(
            "general region needs axes {JOINT_AXES:?}, got {:?}",
            joint.axes().names()
        ));
    }
    let mut t = TermLog::new("general", joint)?;
    let relay_to_sink = t.mi("R1 sink", &[XR], &[YD], &[])?;
    let r1 = f64::min(
        t.mi("R1 sink", &[U1, X1], &[YD], &[U0, U2, X2, XR])? + relay_to_sink,
        t.mi("R1 relay", &[U1], &[YR], &[U0, U2, XR])? + t.mi("R1 relay", &[X1], &[YD], &[U0, U1, U2, X2, XR])?,
    );
    let r2 = f64::min(
        t.mi("R2 sink", &[U2, X2], &[YD], &[U0, U1, X1, XR])? + relay_to_sink,
        t.mi("R2 relay", &[U2], &[YR], &[U0, U1, XR])? + t.mi("R2 relay", &[X2], &[YD], &[U0, U1, U2, X1, XR])?,
    );
    let r12 = f64::min(
        t.mi("R1+R2 sink", &[U1, U2, X1, X2], &[YD], &[U0, XR])? + relay_to_sink,
        t.mi("R1+R2 relay", &[U1, U2], &[YR], &[U0, XR])? + t.mi("R1+R2 relay", &[X1, X2], &[YD], &[U0, U1, U2, XR])?,
    );
    let r012 = f64::min(
        t.mi("R0+R1+R2 sink", &[X1, X2, XR], &[YD], &[])?,
        t.mi("R0+R1+R2 relay", &[U0, U1, U2], &[YR], &[XR])?
            + t.mi("R0+R1+R2 relay", &[X1, X2], &[YD], &[U0, U1, U2, XR])?,
    );
    t.finish(vec![
        (RateSet::R1, r1),
        (RateSet::R2, r2),
        (RateSet::R12, r12),
        (RateSet::R012, r012),
    ])
}

/// The general region for a channel and a factorized input.
pub fn region_general(marc: &DiscreteMarc, input: &FactorizedInput) -> Result<RateRegion> {
    general_from_joint(&expand_joint(marc, input)?)
}

/// Multiple-access region with a common message carried by `S = U_0`,
/// towards `Y = Y_D`. The channel must have a singleton relay input.
pub fn region_mac_slepian_wolf(marc: &DiscreteMarc, input: &FactorizedInput) -> Result<RateRegion> {
    if marc.sizes().xr != 1 {
        return domain(format!(
            "multiple-access region needs a singleton relay input, got |X_R| = {}",
            marc.sizes().xr
        ));
    }
    let joint = expand_joint(marc, input)?;
    let mut t = TermLog::new("mac", &joint)?;
    let r1 = t.mi("R1", &[X1], &[YD], &[X2, U0])?;
    let r2 = t.mi("R2", &[X2], &[YD], &[X1, U0])?;
    let r12 = t.mi("R1+R2", &[X1, X2], &[YD], &[U0])?;
    let r012 = t.mi("R0+R1+R2", &[X1, X2], &[YD], &[])?;
    t.finish(vec![
        (RateSet::R1, r1),
        (RateSet::R2, r2),
        (RateSet::R12, r12),
        (RateSet::R012, r012),
    ])
}

fn warn_unless(marc: &DiscreteMarc, tag: ClassTag) {
    let check = validate_class(marc, &tag);
    if !check.accepted {
        warn!("channel is not {tag} (residual {:.3e}); evaluating the {tag} formulas anyway", check.residual);
    }
}

fn degraded_formulas(model: &'static str, law5: &ProbTensor) -> Result<RateRegion> {
    let mut t = TermLog::new(model, law5)?;
    let r1 = f64::min(t.mi("R1", &[X1], &[YR], &[X2, XR])?, t.mi("R1", &[X1, XR], &[YD], &[X2])?);
    let r2 = f64::min(t.mi("R2", &[X2], &[YR], &[X1, XR])?, t.mi("R2", &[X2, XR], &[YD], &[X1])?);
    let r12 = f64::min(t.mi("R1+R2", &[X1, X2], &[YR], &[XR])?, t.mi("R1+R2", &[X1, X2, XR], &[YD], &[])?);
    t.finish(vec![
        (RateSet::R1, r1),
        (RateSet::R2, r2),
        (RateSet::R12, r12),
        (RateSet::R0, 0.0),
    ])
}

/// Region for inputs `p(x_1) p(x_2) p(x_R | x_1, x_2)`; `R_0` is fixed to zero.
pub fn region_kw(marc: &DiscreteMarc, input: &KwInput) -> Result<RateRegion> {
    degraded_formulas("kw", &input.law().through(marc)?)
}

/// Capacity region of the degraded class; `R_0` is fixed to zero.
pub fn region_madrc(marc: &DiscreteMarc, law: &InputLaw) -> Result<RateRegion> {
    warn_unless(marc, ClassTag::Madrc);
    degraded_formulas("madrc", &law.through(marc)?)
}

/// Capacity region of the reversely degraded class; `R_0` is fixed to zero.
pub fn region_mardrc(marc: &DiscreteMarc, law: &InputLaw) -> Result<RateRegion> {
    warn_unless(marc, ClassTag::Mardrc);
    let j = law.through(marc)?;
    let mut t = TermLog::new("mardrc", &j)?;
    let r1 = t.mi("R1", &[X1], &[YD], &[X2, XR])?;
    let r2 = t.mi("R2", &[X2], &[YD], &[X1, XR])?;
    let r12 = t.mi("R1+R2", &[X1, X2], &[YD], &[XR])?;
    t.finish(vec![
        (RateSet::R1, r1),
        (RateSet::R2, r2),
        (RateSet::R12, r12),
        (RateSet::R0, 0.0),
    ])
}

/// Region of the semi-deterministic class; `R_0` is fixed to zero.
pub fn region_masdrc(marc: &DiscreteMarc, law: &InputLaw) -> Result<RateRegion> {
    warn_unless(marc, ClassTag::Masdrc);
    let j = law.through(marc)?;
    let mut t = TermLog::new("masdrc", &j)?;
    let r1 = t.mi("R1", &[X1], &[YD], &[YR, X2, XR])?;
    let r2 = t.mi("R2", &[X2], &[YD], &[YR, X1, XR])?;
    let r12 = f64::min(
        t.h("R1+R2", &[YR], &[XR])? + t.mi("R1+R2", &[X1, X2], &[YD], &[YR, XR])?,
        t.mi("R1+R2", &[YR, X1, X2], &[YD], &[XR])? + t.mi("R1+R2", &[XR], &[YD], &[])?,
    );
    t.finish(vec![
        (RateSet::R1, r1),
        (RateSet::R2, r2),
        (RateSet::R12, r12),
        (RateSet::R0, 0.0),
    ])
}

/// Capacity region of the orthogonal-components class, using the channel's
/// split metadata; `R_0` is fixed to zero.
pub fn region_marco(marc: &DiscreteMarc, law: &InputLaw) -> Result<RateRegion> {
    let Some(split) = marc.split().copied() else {
        return domain("orthogonal-components region needs split metadata on the channel");
    };
    warn_unless(marc, ClassTag::Marco(split));
    use var::{XD1, XD2, XR1, XR2};
    let j = law
        .through(marc)?
        .split_axis(X1, [(XR1, split.xr1), (XD1, split.xd1)])?
        .split_axis(X2, [(XR2, split.xr2), (XD2, split.xd2)])?;
    let mut t = TermLog::new("marco", &j)?;
    let r1 = f64::min(
        t.mi("R1", &[XD1, XR], &[YD], &[XD2])?,
        t.mi("R1", &[XR1], &[YR], &[XR2, XR])? + t.mi("R1", &[XD1], &[YD], &[XD2, XR])?,
    );
    let r2 = f64::min(
        t.mi("R2", &[XD2, XR], &[YD], &[XD1])?,
        t.mi("R2", &[XR2], &[YR], &[XR1, XR])? + t.mi("R2", &[XD2], &[YD], &[XD1, XR])?,
    );
    let r12 = f64::min(
        t.mi("R1+R2", &[XD1, XD2, XR], &[YD], &[])?,
        t.mi("R1+R2", &[XR1, XR2], &[YR], &[XR])? + t.mi("R1+R2", &[XD1, XD2], &[YD], &[XR])?,
    );
    t.finish(vec![
        (RateSet::R1, r1),
        (RateSet::R2, r2),
        (RateSet::R12, r12),
        (RateSet::R0, 0.0),
    ])
}

/// Joint law with `U_1 = U_2 = Y_R` and degenerate `U_0`.
pub fn relay_output_as_auxiliaries(marc: &DiscreteMarc, law: &InputLaw) -> Result<ProbTensor> {
    let j5 = law.through(marc)?;
    let s = marc.sizes();
    let axes = AlphabetSpec::new(&[
        (U0, 1),
        (U1, s.yr),
        (U2, s.yr),
        (X1, s.x1),
        (X2, s.x2),
        (XR, s.xr),
        (YR, s.yr),
        (YD, s.yd),
    ])?;
    ProbTensor::joint_from_fn(axes, |i| {
        if i[1] == i[6] && i[2] == i[6] {
            j5.get(&[i[3], i[4], i[5], i[6], i[7]])
        } else {
            0.0
        }
    })
}

/// The general region under a class-specific substitution next to the
/// class region, evaluated at the same input law.
#[derive(Debug, Clone)]
pub struct Specialization {
    pub general: RateRegion,
    pub specialized: RateRegion,
    /// Max absolute difference over subsets constrained in both regions.
    pub max_diff: f64,
}

/// Substitutes the auxiliaries prescribed for `tag` into the general region
/// and compares it with the class region:
///
/// * MADRC: `U_k = X_k`, `U_0` degenerate;
/// * MARDRC: `U_k = X_R`, `U_0` degenerate;
/// * MASDRC: `U_1 = U_2 = Y_R`, which needs a deterministic relay output;
/// * MARCO: `U_k = X_Rk`, `U_0` degenerate.
pub fn specialize_general(
    marc: &DiscreteMarc,
    input: &RelayConditionedInput,
    tag: &ClassTag,
) -> Result<Specialization> {
    let law = input.law();
    let (general, specialized) = match tag {
        ClassTag::General => return domain("specialization needs a channel class other than general"),
        ClassTag::Madrc => (
            region_general(marc, &input.inputs_as_auxiliaries())?,
            region_madrc(marc, &law)?,
        ),
        ClassTag::Mardrc => (
            region_general(marc, &input.relay_as_auxiliaries())?,
            region_mardrc(marc, &law)?,
        ),
        ClassTag::Masdrc => {
            let check = validate_class(marc, &ClassTag::Masdrc);
            if !check.accepted {
                return domain(format!(
                    "the U_k = Y_R substitution needs a deterministic relay output (residual {:.3e})",
                    check.residual
                ));
            }
            (
                general_from_joint(&relay_output_as_auxiliaries(marc, &law)?)?,
                region_masdrc(marc, &law)?,
            )
        }
        ClassTag::Marco(split) => {
            let with_split = match marc.split() {
                Some(s) if s == split => marc.clone(),
                _ => marc.clone().with_split(*split)?,
            };
            (
                region_general(&with_split, &input.relay_parts_as_auxiliaries(split)?)?,
                region_marco(&with_split, &law)?,
            )
        }
    };
    let max_diff = general.max_bound_difference(&specialized);
    Ok(Specialization {
        general,
        specialized,
        max_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn region(cs: &[(RateSet, f64)]) -> RateRegion {
        RateRegion::new(cs.iter().map(|&(subset, bound)| Constraint { subset, bound }).collect()).unwrap()
    }

    fn bounds(r: &RateRegion) -> Vec<f64> {
        [RateSet::R1, RateSet::R2, RateSet::R12]
            .iter()
            .map(|s| r.bound(*s).unwrap())
            .collect()
    }

    #[test]
    fn rate_set_parsing() {
        assert_eq!(RateSet::new(&[2, 1]).unwrap(), RateSet::R12);
        assert!(RateSet::new(&[]).is_err());
        assert!(RateSet::new(&[3]).is_err());
        assert_eq!(RateSet::R012.to_string(), "R0+R1+R2");
    }

    #[test]
    fn negative_bounds_are_rejected_unless_float_noise() {
        assert!(RateRegion::new(vec![Constraint { subset: RateSet::R1, bound: -1e-6 }]).is_err());
        let r = RateRegion::new(vec![Constraint { subset: RateSet::R1, bound: -1e-13 }]).unwrap();
        assert_eq!(r.bound(RateSet::R1), Some(0.0));
    }

    #[test]
    fn unit_box_has_cube_vertices() {
        let r = region(&[(RateSet::R0, 1.0), (RateSet::R1, 1.0), (RateSet::R2, 1.0)]);
        let v = r.vertices();
        assert_eq!(v.len(), 8);
        for p in &v {
            assert!(p.to_array().iter().all(|&x| x == 0.0 || x == 1.0));
        }
    }

    #[test]
    fn simplex_vertices() {
        let r = region(&[
            (RateSet::R1, 1.0),
            (RateSet::R2, 1.0),
            (RateSet::R12, 1.0),
            (RateSet::R0, 0.0),
        ]);
        assert_eq!(
            r.vertices(),
            vec![RatePoint::new(0.0, 0.0, 0.0), RatePoint::new(0.0, 0.0, 1.0), RatePoint::new(0.0, 1.0, 0.0)]
        );
    }

    #[test]
    fn origin_and_self_inclusion() {
        let r = region(&[(RateSet::R1, 0.3), (RateSet::R12, 0.5), (RateSet::R012, 0.7), (RateSet::R2, 0.4)]);
        assert!(r.contains(RatePoint::default()));
        assert!(r.includes(&r));
        let bigger = region(&[(RateSet::R1, 1.0), (RateSet::R2, 1.0), (RateSet::R0, 1.0)]);
        assert!(bigger.includes(&r));
        assert!(!r.includes(&bigger));
        let w = r.inclusion_witness(&bigger).unwrap();
        assert!(bigger.contains(w) && !r.contains(w));
    }

    #[test]
    fn unbounded_regions_in_inclusion() {
        let open = region(&[(RateSet::R1, 1.0), (RateSet::R2, 1.0)]);
        let closed = region(&[(RateSet::R012, 1.0)]);
        assert!(!open.is_bounded());
        assert!(open.includes(&closed));
        assert!(!closed.includes(&open));
        assert_eq!(open.support([1.0, 0.0, 0.0]).0, f64::INFINITY);
    }

    #[test]
    fn general_region_on_bottleneck() {
        let (marc, input) = fixtures::bottleneck();
        let r = region_general(&marc, &input.inputs_as_auxiliaries()).unwrap();
        let b = bounds(&r);
        for (got, want) in b.iter().zip([1.0, 1.0, 1.0]) {
            assert!((got - want).abs() < 1e-12, "{b:?}");
        }
        assert!((r.bound(RateSet::R012).unwrap() - 1.0).abs() < 1e-12);
        assert!(!r.terms().is_empty());
    }

    #[test]
    fn general_region_all_singletons_is_zero() {
        let marc = DiscreteMarc::new(crate::channel::MarcSizes::new(1, 1, 1, 1, 1), vec![1.0]).unwrap();
        let input = RelayConditionedInput::uniform(1, 1, 1).inputs_as_auxiliaries();
        let r = region_general(&marc, &input).unwrap();
        assert!(r.constraints().iter().all(|c| c.bound == 0.0));
    }

    #[test]
    fn degraded_region_on_bottleneck() {
        let (marc, input) = fixtures::bottleneck();
        let r = region_madrc(&marc, &input.law()).unwrap();
        assert_eq!(bounds(&r), vec![1.0, 1.0, 1.0]);
        assert_eq!(r.bound(RateSet::R0), Some(0.0));
    }

    #[test]
    fn reversely_degraded_with_perfect_direct_link() {
        let (marc, input) = fixtures::perfect_direct_useless_relay();
        let r = region_mardrc(&marc, &input.law()).unwrap();
        let b = bounds(&r);
        for (got, want) in b.iter().zip([1.0, 1.0, 2.0]) {
            assert!((got - want).abs() < 1e-12, "{b:?}");
        }
    }

    #[test]
    fn semideterministic_fixture_bounds() {
        let (marc, input) = fixtures::xor_relay();
        let r = region_masdrc(&marc, &input.law()).unwrap();
        let b = bounds(&r);
        for (got, want) in b.iter().zip([0.0, 0.0, 1.0]) {
            assert!((got - want).abs() <= 1e-12, "{b:?}");
        }
        let spec = specialize_general(&marc, &input, &ClassTag::Masdrc).unwrap();
        assert!(spec.max_diff <= 1e-12, "{spec:?}");
    }

    #[test]
    fn masdrc_substitution_needs_deterministic_relay() {
        let marc = fixtures::useless(crate::channel::MarcSizes::new(2, 2, 2, 2, 2));
        let input = RelayConditionedInput::uniform(2, 2, 2);
        assert!(specialize_general(&marc, &input, &ClassTag::Masdrc).is_err());
        assert!(specialize_general(&marc, &input, &ClassTag::General).is_err());
    }

    #[test]
    fn marco_needs_split() {
        let (marc, input) = fixtures::bottleneck();
        assert!(region_marco(&marc, &input.law()).is_err());
    }

    #[test]
    fn mac_region_noiseless_and_useless() {
        let (marc, input) = fixtures::noiseless_mac();
        let r = region_mac_slepian_wolf(&marc, &input.to_factorized()).unwrap();
        let got: Vec<f64> = [RateSet::R1, RateSet::R2, RateSet::R12, RateSet::R012]
            .iter()
            .map(|s| r.bound(*s).unwrap())
            .collect();
        for (g, w) in got.iter().zip([1.0, 1.0, 2.0, 2.0]) {
            assert!((g - w).abs() < 1e-12, "{got:?}");
        }
        let useless = DiscreteMarc::from_fn(crate::channel::MarcSizes::new(2, 2, 1, 1, 2), |_, _, _, _, _| 0.5).unwrap();
        let r = region_mac_slepian_wolf(&useless, &input.to_factorized()).unwrap();
        assert!(r.constraints().iter().all(|c| c.bound == 0.0));
        let (bn, bin) = fixtures::bottleneck();
        assert!(region_mac_slepian_wolf(&bn, &bin.inputs_as_auxiliaries()).is_err());
    }
}
