//! Region evaluation by model and class name, as used by the front ends.

use crate::channel::{validate_marco_any, ClassName, ClassTag, DiscreteMarc};
use crate::error::{domain, Result};
use crate::io::Distribution;
use crate::region::{self, RateRegion};
use crate::{random, rng};

pub const MODELS: [&str; 7] = ["general", "mac", "kw", "madrc", "mardrc", "masdrc", "marco"];

/// Resolves a class name; `marco` picks the first split that fits.
pub fn class_tag(name: &str, marc: &DiscreteMarc) -> Result<ClassTag> {
    let class: ClassName = name.parse()?;
    Ok(match class {
        ClassName::General => ClassTag::General,
        ClassName::Madrc => ClassTag::Madrc,
        ClassName::Mardrc => ClassTag::Mardrc,
        ClassName::Masdrc => ClassTag::Masdrc,
        ClassName::Marco => match marc.split() {
            Some(s) => ClassTag::Marco(*s),
            None => match validate_marco_any(marc).0 {
                Some(split) => ClassTag::Marco(split),
                None => return domain("no orthogonal split fits this channel's alphabets"),
            },
        },
    })
}

fn mismatch<T>(model: &str, dist: &Distribution) -> Result<T> {
    domain(format!("model {model} cannot use a {} distribution", dist.kind()))
}

/// Region of `model` at `dist`. With `class`, `model` must be `general` and
/// the class's auxiliary substitution is applied to a relay-conditioned law.
pub fn evaluate(marc: &DiscreteMarc, dist: &Distribution, model: &str, class: Option<&str>) -> Result<RateRegion> {
    match (model, class) {
        ("general", Some(c)) => {
            let tag = class_tag(c, marc)?;
            let Some(rc) = dist.relay_conditioned() else {
                return mismatch("general with a substitution", dist);
            };
            Ok(region::specialize_general(marc, &rc, &tag)?.general)
        }
        (_, Some(_)) => domain("a class substitution applies only to the general model"),
        ("general" | "mac", None) => {
            let Some(f) = dist.factorized() else {
                return mismatch(model, dist);
            };
            if model == "general" {
                region::region_general(marc, &f)
            } else {
                region::region_mac_slepian_wolf(marc, &f)
            }
        }
        ("kw", None) => match dist {
            Distribution::Kw(k) => region::region_kw(marc, k),
            _ => mismatch(model, dist),
        },
        ("madrc", None) => region::region_madrc(marc, &dist.input_law()),
        ("mardrc", None) => region::region_mardrc(marc, &dist.input_law()),
        ("masdrc", None) => region::region_masdrc(marc, &dist.input_law()),
        ("marco", None) => {
            let with_split = match (marc.split(), dist) {
                (Some(_), _) => marc.clone(),
                (None, Distribution::Marco(m)) => marc.clone().with_split(*m.split())?,
                (None, _) => match validate_marco_any(marc).0 {
                    Some(s) => marc.clone().with_split(s)?,
                    None => return domain("no orthogonal split fits this channel"),
                },
            };
            region::region_marco(&with_split, &dist.input_law())
        }
        (other, None) => domain(format!("unknown model {other}; expected one of {}", MODELS.join(", "))),
    }
}

/// Gap between the substituted general region and the class region on
/// `trials` random input laws; law `t` is drawn from stream `(seed, t)`.
pub fn specialization_gaps(marc: &DiscreteMarc, tag: &ClassTag, trials: usize, seed: u64) -> Result<Vec<f64>> {
    if *tag == ClassTag::General {
        return domain("a specialization check needs a special class");
    }
    let s = marc.sizes();
    (0..trials)
        .map(|t| {
            let mut r = rng::stream(seed, &[t as u64]);
            let input = match tag {
                ClassTag::Marco(split) => random::marco_input(&mut r, *split, s.xr).to_relay_conditioned(),
                _ => random::relay_conditioned_input(&mut r, s.x1, s.x2, s.xr),
            };
            Ok(region::specialize_general(marc, &input, tag)?.max_diff)
        })
        .collect()
}
