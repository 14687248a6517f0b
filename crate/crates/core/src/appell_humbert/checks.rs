//! Randomized verification of the group-model laws on rational points.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::{triangular_splitting, AlternatingLatticeForm};
use crate::matrix::{is_zero_vec, Vector};
use crate::scalar::{frac, GaussianRational, Rational};
use crate::structures::PeriodSubspace;

use super::group::{
    group_inverse, group_multiply, lattice_action, symmetric_inverse, symmetric_multiply, GroupElement,
};
use super::model::{inversion_differential, psi, psi_inverse, right_translation_differential, t10_fiber};
use super::{check_riemann, decompose};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawResult {
    pub law: String,
    pub points: usize,
    pub passed: usize,
}

impl LawResult {
    pub fn ok(&self) -> bool {
        self.points > 0 && self.passed == self.points
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCheckReport {
    pub seed: u64,
    pub laws: Vec<LawResult>,
    /// Sampled points where the inversion differential fails to preserve
    /// the complex structure.
    pub inversion_counterexamples: usize,
}

impl GroupCheckReport {
    pub fn all_passed(&self) -> bool {
        self.laws.iter().all(LawResult::ok)
    }

    pub fn law(&self, name: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.law == name)
    }
}

struct Sampler(ChaCha8Rng);

impl Sampler {
    fn rational(&mut self) -> Rational {
        frac(self.0.gen_range(-9..=9), self.0.gen_range(1..=4))
    }

    fn rationals(&mut self, n: usize) -> Vec<Rational> {
        (0..n).map(|_| self.rational()).collect()
    }

    fn gaussians(&mut self, n: usize) -> Vector {
        (0..n)
            .map(|_| GaussianRational::new(self.rational(), self.rational()))
            .collect()
    }

    fn integers(&mut self, n: usize) -> Vec<Rational> {
        (0..n).map(|_| frac(self.0.gen_range(-5..=5), 1)).collect()
    }

    fn element(&mut self, lr: usize, gr: usize) -> GroupElement {
        GroupElement::new(self.rationals(lr), self.rationals(gr))
    }
}

struct Tally {
    laws: Vec<LawResult>,
}

impl Tally {
    fn record(&mut self, law: &str, ok: bool) {
        let entry = match self.laws.iter_mut().find(|l| l.law == law) {
            Some(e) => e,
            None => {
                self.laws.push(LawResult {
                    law: law.to_string(),
                    points: 0,
                    passed: 0,
                });
                self.laws.last_mut().expect("just pushed")
            }
        };
        entry.points += 1;
        entry.passed += usize::from(ok);
    }
}

fn complexify(v: &[Rational]) -> Vector {
    v.iter().cloned().map(GaussianRational::from_rational).collect()
}

/// Checks the group laws for `form`, and, when `(V, U)` satisfy the Riemann
/// relation, the laws of the complex model, on `points` random points each.
pub fn check_group_laws(
    form: &AlternatingLatticeForm,
    structures: Option<(&PeriodSubspace, &PeriodSubspace)>,
    seed: u64,
    points: usize,
) -> Result<GroupCheckReport> {
    let split = triangular_splitting(form);
    let (lr, gr) = (form.lambda_rank(), form.gamma_rank());
    let mut rng = Sampler(ChaCha8Rng::seed_from_u64(seed));
    let mut tally = Tally { laws: Vec::new() };
    let e = GroupElement::identity(lr, gr);

    for _ in 0..points {
        let (a, b, c) = (rng.element(lr, gr), rng.element(lr, gr), rng.element(lr, gr));
        let left = group_multiply(&group_multiply(&a, &b, &split), &c, &split);
        let right = group_multiply(&a, &group_multiply(&b, &c, &split), &split);
        tally.record("associativity", left == right);

        tally.record(
            "identity",
            group_multiply(&a, &e, &split) == a && group_multiply(&e, &a, &split) == a,
        );

        let ai = group_inverse(&a, &split);
        let inv_ok = group_multiply(&a, &ai, &split).is_identity()
            && group_multiply(&ai, &a, &split).is_identity()
            && group_inverse(&group_multiply(&a, &b, &split), &split)
                == group_multiply(&group_inverse(&b, &split), &ai, &split);
        tally.record("inverse", inv_ok);

        let (g1, g2) = (rng.integers(gr), rng.integers(gr));
        let sum: Vec<Rational> = g1.iter().zip(&g2).map(|(x, y)| x + y).collect();
        let two_step = lattice_action(&lattice_action(&a, &g1, form, &split)?, &g2, form, &split)?;
        let one_step = lattice_action(&a, &sum, form, &split)?;
        let composition_ok = two_step.x == one_step.x
            && two_step.y.iter().zip(&one_step.y).all(|(p, q)| (p - q).is_integer());
        tally.record("lattice action composition", composition_ok);
    }

    let mut inversion_counterexamples = 0;
    if let Some((v, u)) = structures {
        let dec = decompose(form, v, u)?;
        if check_riemann(&dec) {
            let (m, d) = (dec.m(), dec.d());
            for _ in 0..points {
                let g = rng.element(lr, gr);
                let (pu, pv) = psi(&dec, &g)?;
                tally.record("psi round trip (group)", psi_inverse(&dec, &pu, &pv)? == g);

                let (u0, v0) = (rng.gaussians(d), rng.gaussians(m));
                let back = psi(&dec, &psi_inverse(&dec, &u0, &v0)?)?;
                tally.record("psi round trip (U + V)", back == (u0.clone(), v0.clone()));

                let h = rng.element(lr, gr);
                let tg = t10_fiber(&dec, &g)?;
                let pushed = right_translation_differential(&dec, &h, &tg)?;
                let tgh = t10_fiber(&dec, &symmetric_multiply(&g, &h, form))?;
                tally.record("right invariance", pushed.same_column_span(&tgh)?);

                // Ψ ∘ R_h ∘ Ψ⁻¹ (u, v) = (p_U(η_h) + u + F_{x_h}(v), v + p_V(x_h))
                let start = psi_inverse(&dec, &u0, &v0)?;
                let (u1, v1) = psi(&dec, &symmetric_multiply(&start, &h, form))?;
                let xh = complexify(&h.x);
                let f = dec.cocycle(&xh, &v0)?;
                let yu = dec.p_u(&complexify(&h.y))?;
                let eu: Vector = (0..d).map(|j| &yu[j] + &u0[j] + &f[j]).collect();
                let xv = dec.p_v(&xh)?;
                let ev: Vector = v0.iter().zip(&xv).map(|(p, q)| p + q).collect();
                tally.record("conjugated translation", u1 == eu && v1 == ev);

                // D(i) maps T_g onto T_{g⁻¹} exactly when B″(x_V, ·) = 0.
                let mapped = inversion_differential(&tg);
                let target = t10_fiber(&dec, &symmetric_inverse(&g))?;
                let preserved = mapped.same_column_span(&target)?;
                let gxv = dec.p_v(&complexify(&g.x))?;
                let predicted = (0..m).all(|k| {
                    let mut ek = vec![GaussianRational::zero(); m];
                    ek[k] = GaussianRational::one();
                    is_zero_vec(&dec.bdoubleprime_eval(&gxv, &ek))
                });
                tally.record("inversion differential", preserved == predicted);
                inversion_counterexamples += usize::from(!preserved);
            }
        }
    }

    Ok(GroupCheckReport {
        seed,
        laws: tally.laws,
        inversion_counterexamples,
    })
}
