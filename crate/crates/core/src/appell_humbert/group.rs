//! The nilpotent group `Π⊗ℚ`, a central extension of `Γ⊗ℚ` by `Λ⊗ℚ`.
//!
//! Two coordinate systems are used. Triangular coordinates `(y, x)` follow
//! the law `(y, x)(y′, x′) = (y + y′ + T⁻(x, x′), x + x′)`. Symmetric
//! coordinates `η = 2(y + S(x, x))` turn the law into
//! `(η, x)(η′, x′) = (η + η′ + A(x, x′), x + x′)`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{AlternatingLatticeForm, TriangularSplitting};
use crate::scalar::{rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupElement {
    #[serde(with = "rational_vec")]
    pub y: Vec<Rational>,
    #[serde(with = "rational_vec")]
    pub x: Vec<Rational>,
}

mod rational_vec {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::scalar::{GaussianRational, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<GaussianRational>::deserialize(d)?;
        raw.into_iter()
            .map(|z| {
                if z.is_real() {
                    Ok(z.re().clone())
                } else {
                    Err(serde::de::Error::custom("group coordinates must be rational"))
                }
            })
            .collect()
    }
}

fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg(a: &[Rational]) -> Vec<Rational> {
    a.iter().map(|x| -x).collect()
}

fn scale(a: &[Rational], s: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * s).collect()
}

impl GroupElement {
    pub fn new(y: Vec<Rational>, x: Vec<Rational>) -> Self {
        GroupElement { y, x }
    }

    pub fn identity(lambda_rank: usize, gamma_rank: usize) -> Self {
        GroupElement {
            y: vec![Rational::zero(); lambda_rank],
            x: vec![Rational::zero(); gamma_rank],
        }
    }

    pub fn from_ints(y: &[i64], x: &[i64]) -> Self {
        GroupElement {
            y: y.iter().map(|&v| rat(v)).collect(),
            x: x.iter().map(|&v| rat(v)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.y.iter().chain(&self.x).all(Zero::is_zero)
    }
}

/// `(y, x)(y′, x′) = (y + y′ + T⁻(x, x′), x + x′)`.
pub fn group_multiply(g: &GroupElement, h: &GroupElement, split: &TriangularSplitting) -> GroupElement {
    let t = split.tminus_eval(&g.x, &h.x);
    GroupElement {
        y: add(&add(&g.y, &h.y), &t),
        x: add(&g.x, &h.x),
    }
}

/// `(y, x)⁻¹ = (−y − 2S(x, x), −x)`.
pub fn group_inverse(g: &GroupElement, split: &TriangularSplitting) -> GroupElement {
    let s = split.s_eval(&g.x, &g.x);
    GroupElement {
        y: add(&neg(&g.y), &scale(&s, &rat(-2))),
        x: neg(&g.x),
    }
}

/// `g h g⁻¹ h⁻¹`.
pub fn commutator(g: &GroupElement, h: &GroupElement, split: &TriangularSplitting) -> GroupElement {
    let gh = group_multiply(g, h, split);
    let ghg = group_multiply(&gh, &group_inverse(g, split), split);
    group_multiply(&ghg, &group_inverse(h, split), split)
}

/// Triangular to symmetric coordinates: `(y, x) ↦ (2(y + S(x, x)), x)`.
pub fn to_symmetric(g: &GroupElement, split: &TriangularSplitting) -> GroupElement {
    let s = split.s_eval(&g.x, &g.x);
    GroupElement {
        y: scale(&add(&g.y, &s), &rat(2)),
        x: g.x.clone(),
    }
}

/// Inverse of [`to_symmetric`].
pub fn from_symmetric(g: &GroupElement, split: &TriangularSplitting) -> GroupElement {
    let s = split.s_eval(&g.x, &g.x);
    let half = Rational::new(1.into(), 2.into());
    GroupElement {
        y: add(&scale(&g.y, &half), &neg(&s)),
        x: g.x.clone(),
    }
}

/// `(η, x)(η′, x′) = (η + η′ + A(x, x′), x + x′)`.
pub fn symmetric_multiply(g: &GroupElement, h: &GroupElement, form: &AlternatingLatticeForm) -> GroupElement {
    let a = form.eval_rational(&g.x, &h.x);
    GroupElement {
        y: add(&add(&g.y, &h.y), &a),
        x: add(&g.x, &h.x),
    }
}

/// `(η, x)⁻¹ = (−η, −x)`.
pub fn symmetric_inverse(g: &GroupElement) -> GroupElement {
    GroupElement {
        y: neg(&g.y),
        x: neg(&g.x),
    }
}

/// `2S(γ, γ)`; an error if it is not integral.
pub fn lift_correction(gamma: &[i64], split: &TriangularSplitting) -> Result<Vec<Rational>> {
    let g: Vec<Rational> = gamma.iter().map(|&v| rat(v)).collect();
    let c = scale(&split.s_eval(&g, &g), &rat(2));
    if c.iter().all(Rational::is_integer) {
        Ok(c)
    } else {
        Err(Error::Domain("2S(γ, γ) is not integral".into()))
    }
}

/// Right action of a lattice vector in symmetric coordinates:
/// `(η, x)γ̂ = (η + A(x, γ) + 2S(γ, γ), x + γ)`.
pub fn lattice_action(
    g: &GroupElement,
    gamma: &[Rational],
    form: &AlternatingLatticeForm,
    split: &TriangularSplitting,
) -> Result<GroupElement> {
    if gamma.len() != g.x.len() {
        return Err(Error::Dimension("γ has the wrong length".into()));
    }
    let ints: Vec<i64> = gamma
        .iter()
        .map(|c| {
            if c.is_integer() {
                i64::try_from(c.to_integer()).map_err(|_| Error::Domain("γ entry out of range".into()))
            } else {
                Err(Error::Domain(format!("lattice vector has non-integral entry {c}")))
            }
        })
        .collect::<Result<_>>()?;
    let corr = lift_correction(&ints, split)?;
    let a = form.eval_rational(&g.x, gamma);
    Ok(GroupElement {
        y: add(&add(&g.y, &a), &corr),
        x: add(&g.x, gamma),
    })
}
