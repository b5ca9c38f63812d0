//! Dense probability tensors over named finite alphabets.
//!
//! A [`ProbTensor`] is either a joint law (all entries sum to one) or a
//! kernel, a conditional law whose trailing `outcome_axes` axes form the
//! distribution for every assignment of the leading (conditioning) axes.
//! Storage is row-major with the last axis varying fastest.
//!
//! Information measures are in bits, with `0 log 0 = 0`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::BitOr;

use crate::error::{domain, MarcError, Result};

/// Tolerance for normalization of user-supplied tables.
pub const NORMALIZATION_TOL: f64 = 1e-9;
/// Tolerance for identities that hold exactly up to float error.
pub const IDENTITY_TOL: f64 = 1e-12;

const MAX_AXES: usize = 32;

/// Ordered, uniquely named axes with their cardinalities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphabetSpec {
    names: Vec<String>,
    sizes: Vec<usize>,
    strides: Vec<usize>,
}

impl AlphabetSpec {
    pub fn new<S: AsRef<str>>(axes: &[(S, usize)]) -> Result<Self> {
        if axes.len() > MAX_AXES {
            return domain(format!("at most {MAX_AXES} axes are supported"));
        }
        let mut names: Vec<String> = Vec::with_capacity(axes.len());
        let mut sizes = Vec::with_capacity(axes.len());
        for (name, size) in axes {
            let name = name.as_ref();
            if *size == 0 {
                return domain(format!("axis {name} has size 0"));
            }
            if names.iter().any(|n| n == name) {
                return domain(format!("duplicate axis name {name}"));
            }
            names.push(name.to_string());
            sizes.push(*size);
        }
        let mut strides = vec![1; sizes.len()];
        for i in (0..sizes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        Ok(Self {
            names,
            sizes,
            strides,
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Number of joint symbols.
    pub fn total(&self) -> usize {
        self.sizes.iter().product()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Resolves variable names to a set of axis positions.
    pub fn var_set(&self, names: &[&str]) -> Result<VarSet> {
        let mut set = VarSet::EMPTY;
        for name in names {
            match self.position(name) {
                Some(p) => set = set | VarSet::single(p),
                None => return domain(format!("unknown variable {name}")),
            }
        }
        Ok(set)
    }

    pub fn flat_index(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.sizes.len());
        index
            .iter()
            .zip(&self.strides)
            .map(|(i, s)| i * s)
            .sum()
    }

    pub fn unravel(&self, mut flat: usize, out: &mut [usize]) {
        for (i, s) in self.strides.iter().enumerate() {
            out[i] = flat / s;
            flat %= s;
        }
    }

    fn restrict(&self, set: VarSet) -> AlphabetSpec {
        let axes: Vec<(&str, usize)> = set
            .positions()
            .map(|p| (self.names[p].as_str(), self.sizes[p]))
            .collect();
        AlphabetSpec::new(&axes).expect("subset of a valid spec is valid")
    }
}

/// A set of axis positions, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VarSet(u32);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);

    pub fn single(position: usize) -> Self {
        VarSet(1 << position)
    }

    pub fn contains(self, position: usize) -> bool {
        self.0 & (1 << position) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_disjoint(self, other: VarSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Ascending axis positions.
    pub fn positions(self) -> impl Iterator<Item = usize> {
        (0..MAX_AXES).filter(move |&p| self.contains(p))
    }
}

impl BitOr for VarSet {
    type Output = VarSet;
    fn bitor(self, rhs: VarSet) -> VarSet {
        VarSet(self.0 | rhs.0)
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.positions()).finish()
    }
}

/// Whether a tensor is a joint law or a conditional kernel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Joint,
    /// The trailing `outcome_axes` axes sum to one for every prefix.
    Kernel { outcome_axes: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbTensor {
    axes: AlphabetSpec,
    values: Vec<f64>,
    role: Role,
}

fn check_entries(what: &str, axes: &AlphabetSpec, values: &[f64]) -> Result<()> {
    if values.len() != axes.total() {
        return domain(format!(
            "{what}: expected {} entries, got {}",
            axes.total(),
            values.len()
        ));
    }
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
        return domain(format!("{what}: entry {v} is not a nonnegative number"));
    }
    Ok(())
}

/// Largest deviation from one among consecutive slices of length `slice`.
pub(crate) fn slice_residual(values: &[f64], slice: usize) -> f64 {
    values
        .chunks(slice)
        .map(|c| (c.iter().sum::<f64>() - 1.0).abs())
        .fold(0.0, f64::max)
}

impl ProbTensor {
    /// A joint law; entries must be nonnegative and sum to one within
    /// [`NORMALIZATION_TOL`].
    pub fn joint(axes: AlphabetSpec, values: Vec<f64>) -> Result<Self> {
        check_entries("joint", &axes, &values)?;
        let residual = slice_residual(&values, values.len().max(1));
        if residual > NORMALIZATION_TOL {
            return Err(MarcError::Normalization {
                what: format!("joint over {:?}", axes.names()),
                residual,
            });
        }
        Ok(Self {
            axes,
            values,
            role: Role::Joint,
        })
    }

    /// A conditional kernel over the trailing `outcome_axes` axes.
    pub fn kernel(axes: AlphabetSpec, outcome_axes: usize, values: Vec<f64>) -> Result<Self> {
        if outcome_axes == 0 || outcome_axes > axes.len() {
            return domain(format!(
                "kernel needs between 1 and {} outcome axes, got {outcome_axes}",
                axes.len()
            ));
        }
        check_entries("kernel", &axes, &values)?;
        let slice: usize = axes.sizes()[axes.len() - outcome_axes..].iter().product();
        let residual = slice_residual(&values, slice);
        if residual > NORMALIZATION_TOL {
            return Err(MarcError::Normalization {
                what: format!("kernel over {:?}", axes.names()),
                residual,
            });
        }
        Ok(Self {
            axes,
            values,
            role: Role::Kernel { outcome_axes },
        })
    }

    pub fn joint_from_fn(axes: AlphabetSpec, mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let values = Self::tabulate(&axes, &mut f);
        Self::joint(axes, values)
    }

    pub fn kernel_from_fn(
        axes: AlphabetSpec,
        outcome_axes: usize,
        mut f: impl FnMut(&[usize]) -> f64,
    ) -> Result<Self> {
        let values = Self::tabulate(&axes, &mut f);
        Self::kernel(axes, outcome_axes, values)
    }

    fn tabulate(axes: &AlphabetSpec, f: &mut impl FnMut(&[usize]) -> f64) -> Vec<f64> {
        let mut idx = vec![0; axes.len()];
        (0..axes.total())
            .map(|flat| {
                axes.unravel(flat, &mut idx);
                f(&idx)
            })
            .collect()
    }

    /// Uniform joint law over `axes`.
    pub fn uniform(axes: AlphabetSpec) -> Self {
        let n = axes.total();
        Self {
            values: vec![1.0 / n as f64; n],
            axes,
            role: Role::Joint,
        }
    }

    pub fn axes(&self) -> &AlphabetSpec {
        &self.axes
    }

    pub fn sizes(&self) -> &[usize] {
        self.axes.sizes()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn is_joint(&self) -> bool {
        self.role == Role::Joint
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.values[self.axes.flat_index(index)]
    }

    /// Largest deviation from exact normalization.
    pub fn normalization_residual(&self) -> f64 {
        match self.role {
            Role::Joint => slice_residual(&self.values, self.values.len().max(1)),
            Role::Kernel { outcome_axes } => {
                let n = self.axes.len();
                let slice: usize = self.axes.sizes()[n - outcome_axes..].iter().product();
                slice_residual(&self.values, slice)
            }
        }
    }

    fn require_joint(&self, op: &str) -> Result<()> {
        if self.is_joint() {
            Ok(())
        } else {
            domain(format!("{op} needs a joint law, not a kernel"))
        }
    }

    /// Marginal masses over `keep`, laid out row-major in ascending axis order.
    pub fn marginal_values(&self, keep: VarSet) -> Vec<f64> {
        let sizes = self.axes.sizes();
        let n = sizes.len();
        let mut contrib = vec![0usize; n];
        let mut out_len = 1;
        for p in (0..n).rev() {
            if keep.contains(p) {
                contrib[p] = out_len;
                out_len *= sizes[p];
            }
        }
        let mut out = vec![0.0; out_len];
        let mut idx = vec![0usize; n];
        let mut o = 0usize;
        for &v in &self.values {
            out[o] += v;
            for i in (0..n).rev() {
                idx[i] += 1;
                o += contrib[i];
                if idx[i] < sizes[i] {
                    break;
                }
                o -= contrib[i] * sizes[i];
                idx[i] = 0;
            }
        }
        out
    }

    /// Joint law of the variables in `keep`, in their original axis order.
    pub fn marginalize(&self, keep: &[&str]) -> Result<ProbTensor> {
        self.require_joint("marginalize")?;
        let set = self.axes.var_set(keep)?;
        Ok(ProbTensor {
            axes: self.axes.restrict(set),
            values: self.marginal_values(set),
            role: Role::Joint,
        })
    }

    /// Replaces one axis by two axes whose sizes multiply to its size. The
    /// first part is the more significant digit, so no data moves.
    pub fn split_axis(&self, name: &str, parts: [(&str, usize); 2]) -> Result<ProbTensor> {
        let Some(p) = self.axes.position(name) else {
            return domain(format!("unknown variable {name}"));
        };
        if parts[0].1 * parts[1].1 != self.axes.sizes()[p] {
            return domain(format!(
                "cannot split {name} of size {} into {} x {}",
                self.axes.sizes()[p],
                parts[0].1,
                parts[1].1
            ));
        }
        let mut axes: Vec<(&str, usize)> = Vec::with_capacity(self.axes.len() + 1);
        for (i, (n, s)) in self.axes.names().iter().zip(self.axes.sizes()).enumerate() {
            if i == p {
                axes.extend(parts);
            } else {
                axes.push((n, *s));
            }
        }
        let role = match self.role {
            Role::Joint => Role::Joint,
            Role::Kernel { outcome_axes } => {
                let first_outcome = self.axes.len() - outcome_axes;
                Role::Kernel {
                    outcome_axes: outcome_axes + usize::from(p >= first_outcome),
                }
            }
        };
        Ok(ProbTensor {
            axes: AlphabetSpec::new(&axes)?,
            values: self.values.clone(),
            role,
        })
    }

    /// Cached entropy evaluator for this joint law.
    pub fn measures(&self) -> Result<InfoMeasures<'_>> {
        self.require_joint("information measures")?;
        Ok(InfoMeasures {
            law: self,
            cache: RefCell::new(HashMap::new()),
        })
    }

    /// `H(vars)` in bits.
    pub fn entropy(&self, vars: &[&str]) -> Result<f64> {
        if vars.is_empty() {
            return domain("entropy needs at least one variable");
        }
        let m = self.measures()?;
        Ok(m.entropy(m.set(vars)?))
    }

    /// `H(a | given)` in bits.
    pub fn conditional_entropy(&self, a: &[&str], given: &[&str]) -> Result<f64> {
        let m = self.measures()?;
        m.conditional_entropy(m.set(a)?, m.set(given)?)
    }

    /// `I(a; b)` in bits.
    pub fn mutual_information(&self, a: &[&str], b: &[&str]) -> Result<f64> {
        self.conditional_mutual_information(a, b, &[])
    }

    /// `I(a; b | c)` in bits; `c` may be empty.
    pub fn conditional_mutual_information(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
        let m = self.measures()?;
        m.mi(m.set(a)?, m.set(b)?, m.set(c)?)
    }
}

/// Entropy of a probability vector in bits.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

/// Maps values within [`IDENTITY_TOL`] below zero to exactly zero.
pub fn clamp_nonnegative(v: f64) -> f64 {
    if (-IDENTITY_TOL..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// Entropies of marginals of one joint law, memoized by variable set.
pub struct InfoMeasures<'a> {
    law: &'a ProbTensor,
    cache: RefCell<HashMap<VarSet, f64>>,
}

impl<'a> InfoMeasures<'a> {
    pub fn law(&self) -> &'a ProbTensor {
        self.law
    }

    pub fn set(&self, names: &[&str]) -> Result<VarSet> {
        self.law.axes.var_set(names)
    }

    pub fn entropy(&self, vars: VarSet) -> f64 {
        if vars.is_empty() {
            return 0.0;
        }
        if let Some(h) = self.cache.borrow().get(&vars) {
            return *h;
        }
        let h = entropy_bits(&self.law.marginal_values(vars));
        self.cache.borrow_mut().insert(vars, h);
        h
    }

    pub fn conditional_entropy(&self, a: VarSet, given: VarSet) -> Result<f64> {
        if !a.is_disjoint(given) {
            return domain("conditional entropy needs disjoint variable sets");
        }
        Ok(clamp_nonnegative(
            self.entropy(a | given) - self.entropy(given),
        ))
    }

    /// `I(a; b | c)` before clamping.
    pub fn mi_raw(&self, a: VarSet, b: VarSet, c: VarSet) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return domain("mutual information needs nonempty variable sets");
        }
        if !(a.is_disjoint(b) && a.is_disjoint(c) && b.is_disjoint(c)) {
            return domain("mutual information needs pairwise disjoint variable sets");
        }
        Ok(self.entropy(a | c) + self.entropy(b | c) - self.entropy(a | b | c) - self.entropy(c))
    }

    pub fn mi(&self, a: VarSet, b: VarSet, c: VarSet) -> Result<f64> {
        self.mi_raw(a, b, c).map(clamp_nonnegative)
    }

    /// Named form of [`InfoMeasures::mi`].
    pub fn cmi(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<f64> {
        self.mi(self.set(a)?, self.set(b)?, self.set(c)?)
    }

    /// Named form of [`InfoMeasures::conditional_entropy`].
    pub fn cond_entropy(&self, a: &[&str], given: &[&str]) -> Result<f64> {
        self.conditional_entropy(self.set(a)?, self.set(given)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn spec(axes: &[(&str, usize)]) -> AlphabetSpec {
        AlphabetSpec::new(axes).unwrap()
    }

    fn random_joint(rng: &mut impl Rng, axes: &[(&str, usize)]) -> ProbTensor {
        let s = spec(axes);
        let raw: Vec<f64> = (0..s.total()).map(|_| rng.gen::<f64>()).collect();
        let z: f64 = raw.iter().sum();
        ProbTensor::joint(s, raw.into_iter().map(|v| v / z).collect()).unwrap()
    }

    #[test]
    fn alphabet_rejects_duplicates_and_empty_axes() {
        assert!(AlphabetSpec::new(&[("X", 2), ("X", 3)]).is_err());
        assert!(AlphabetSpec::new(&[("X", 0)]).is_err());
    }

    #[test]
    fn joint_and_kernel_validation() {
        assert!(ProbTensor::joint(spec(&[("X", 2)]), vec![0.5, 0.4]).is_err());
        assert!(ProbTensor::joint(spec(&[("X", 2)]), vec![1.5, -0.5]).is_err());
        assert!(ProbTensor::joint(spec(&[("X", 2)]), vec![0.5, 0.5 + 1e-10]).is_ok());
        let k = ProbTensor::kernel(spec(&[("X", 2), ("Y", 2)]), 1, vec![0.3, 0.7, 1.0, 0.0]);
        assert!(k.is_ok());
        let bad = ProbTensor::kernel(spec(&[("X", 2), ("Y", 2)]), 1, vec![0.3, 0.6, 1.0, 0.0]);
        match bad {
            Err(MarcError::Normalization { residual, .. }) => assert!((residual - 0.1).abs() < 1e-12),
            other => panic!("expected normalization error, got {other:?}"),
        }
    }

    #[test]
    fn marginalize_uniform_pair() {
        let t = ProbTensor::uniform(spec(&[("X", 2), ("Y", 2)]));
        let m = t.marginalize(&["X"]).unwrap();
        assert_eq!(m.values(), &[0.5, 0.5]);
    }

    #[test]
    fn marginalize_point_mass() {
        let t = ProbTensor::joint(spec(&[("X", 2), ("Y", 2)]), vec![0.0, 1.0, 0.0, 0.0]).unwrap();
        let m = t.marginalize(&["Y"]).unwrap();
        assert_eq!(m.values(), &[0.0, 1.0]);
    }

    #[test]
    fn marginalize_matches_double_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = random_joint(&mut rng, &[("A", 2), ("B", 3), ("C", 2)]);
        let m = t.marginalize(&["C", "A"]).unwrap();
        assert_eq!(m.axes().names(), &["A", "C"]);
        for a in 0..2 {
            for c in 0..2 {
                let mut s = 0.0;
                for b in 0..3 {
                    s += t.get(&[a, b, c]);
                }
                assert!((m.get(&[a, c]) - s).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn marginalize_unknown_variable_is_domain_error() {
        let t = ProbTensor::uniform(spec(&[("X", 2)]));
        assert!(matches!(t.marginalize(&["Z"]), Err(MarcError::Domain(_))));
    }

    #[test]
    fn entropy_examples() {
        let t = ProbTensor::uniform(spec(&[("X", 2)]));
        assert!((t.entropy(&["X"]).unwrap() - 1.0).abs() < 1e-15);
        let p = ProbTensor::joint(spec(&[("X", 3)]), vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(p.entropy(&["X"]).unwrap(), 0.0);
        let b = ProbTensor::joint(spec(&[("X", 2)]), vec![0.89, 0.11]).unwrap();
        // -0.11 log2 0.11 - 0.89 log2 0.89
        assert!((b.entropy(&["X"]).unwrap() - 0.4999).abs() < 1e-3);
        assert!(t.entropy(&[]).is_err());
    }

    #[test]
    fn mutual_information_extremes() {
        let ind = ProbTensor::uniform(spec(&[("X", 2), ("Y", 2)]));
        assert_eq!(ind.mutual_information(&["X"], &["Y"]).unwrap(), 0.0);
        let copy = ProbTensor::joint(spec(&[("X", 2), ("Y", 2)]), vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!((copy.mutual_information(&["X"], &["Y"]).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn overlapping_sets_rejected() {
        let t = ProbTensor::uniform(spec(&[("X", 2), ("Y", 2)]));
        assert!(matches!(
            t.conditional_mutual_information(&["X"], &["X", "Y"], &[]),
            Err(MarcError::Domain(_))
        ));
    }

    #[test]
    fn cmi_matches_conditional_entropy_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let t = random_joint(&mut rng, &[("X", 3), ("Y", 2), ("Z", 3)]);
            let direct = t.conditional_mutual_information(&["X"], &["Y"], &["Z"]).unwrap();
            let hxz = t.conditional_entropy(&["X"], &["Z"]).unwrap();
            let hyz = t.conditional_entropy(&["Y"], &["Z"]).unwrap();
            let hxyz = t.conditional_entropy(&["X", "Y"], &["Z"]).unwrap();
            assert!((direct - (hxz + hyz - hxyz)).abs() <= 1e-12);
            let sym = t.conditional_mutual_information(&["Y"], &["X"], &["Z"]).unwrap();
            assert!((direct - sym).abs() <= 1e-15);
        }
    }

    #[test]
    fn split_axis_keeps_layout() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_joint(&mut rng, &[("A", 6), ("B", 2)]);
        let s = t.split_axis("A", [("A1", 2), ("A2", 3)]).unwrap();
        assert_eq!(s.get(&[1, 2, 1]), t.get(&[5, 1]));
        assert!(t.split_axis("A", [("A1", 4), ("A2", 2)]).is_err());
    }
}
