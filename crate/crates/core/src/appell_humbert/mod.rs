//! Decomposition of `A` relative to complex structures `(V, U)`.
//!
//! Writing `P = [V | V̄]` and `Q = [U | Ū]`, the transformed components
//! `Ã_j = Σ_k (Q⁻¹)_{jk} PᵀA_kP` give `A` in `(V ⊕ V̄) × (V ⊕ V̄) → U ⊕ Ū`
//! coordinates. For `j < d` the blocks of `Ã_j` are
//!
//! ```text
//! [ B′_j     B″_j ]
//! [ −B″_jᵀ   O_j  ]
//! ```
//!
//! where `B″_j[a][b] = B″(v_a, v̄_b)` and `O_j` is the `Λ²V̄ᵛ⊗U` block
//! whose vanishing is the Riemann relation.

pub mod checks;
pub mod group;
pub mod model;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::AlternatingLatticeForm;
use crate::matrix::{conj_vec, ExactMatrix, Vector};
use crate::poly::{self, Polynomial};
use crate::scalar::GaussianRational;
use crate::structures::{PeriodSubspace, SplittingFrame};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearDecomposition {
    m: usize,
    d: usize,
    form: AlternatingLatticeForm,
    v: PeriodSubspace,
    u: PeriodSubspace,
    v_frame: SplittingFrame,
    u_frame: SplittingFrame,
    transformed: Vec<ExactMatrix>,
    bprime: Vec<ExactMatrix>,
    bdoubleprime: Vec<ExactMatrix>,
    obstruction: Vec<ExactMatrix>,
}

/// Block entries rendered as scalar strings, for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionSummary {
    pub bprime: Vec<Vec<Vec<GaussianRational>>>,
    pub bdoubleprime: Vec<Vec<Vec<GaussianRational>>>,
    pub obstruction: Vec<Vec<Vec<GaussianRational>>>,
    pub riemann_ok: bool,
}

fn rows_of(m: &ExactMatrix) -> Vec<Vec<GaussianRational>> {
    (0..m.rows()).map(|r| m.row(r)).collect()
}

fn check_dims(form: &AlternatingLatticeForm, v: &PeriodSubspace, u: &PeriodSubspace) -> Result<()> {
    if v.ambient_rank() != 2 * form.m || v.dim() != form.m {
        return Err(Error::Dimension(format!(
            "V must be a {}-dimensional subspace of a rank-{} lattice, got dim {} in rank {}",
            form.m,
            2 * form.m,
            v.dim(),
            v.ambient_rank()
        )));
    }
    if u.ambient_rank() != 2 * form.d || u.dim() != form.d {
        return Err(Error::Dimension(format!(
            "U must be a {}-dimensional subspace of a rank-{} lattice, got dim {} in rank {}",
            form.d,
            2 * form.d,
            u.dim(),
            u.ambient_rank()
        )));
    }
    Ok(())
}

pub fn decompose(
    form: &AlternatingLatticeForm,
    v: &PeriodSubspace,
    u: &PeriodSubspace,
) -> Result<BilinearDecomposition> {
    check_dims(form, v, u)?;
    let (m, d) = (form.m, form.d);
    let v_frame = v.frame();
    let u_frame = u.frame();
    let p = v_frame.p();
    let pt = p.transpose();
    let pulled: Vec<ExactMatrix> = form
        .component_matrices()
        .iter()
        .map(|a| pt.mul(a).and_then(|x| x.mul(p)))
        .collect::<Result<_>>()?;
    let qinv = u_frame.p_inverse();
    let transformed: Vec<ExactMatrix> = (0..2 * d)
        .map(|j| {
            pulled.iter().enumerate().fold(ExactMatrix::zeros(2 * m, 2 * m), |acc, (k, b)| {
                acc.add(&b.scale(&qinv[(j, k)])).expect("same shape")
            })
        })
        .collect();
    let block = |j: usize, r: usize, c: usize| transformed[j].submatrix(r..r + m, c..c + m);
    let bprime = (0..d).map(|j| block(j, 0, 0)).collect();
    let bdoubleprime = (0..d).map(|j| block(j, 0, m)).collect();
    let obstruction = (0..d).map(|j| block(j, m, m)).collect();
    Ok(BilinearDecomposition {
        m,
        d,
        form: form.clone(),
        v: v.clone(),
        u: u.clone(),
        v_frame,
        u_frame,
        transformed,
        bprime,
        bdoubleprime,
        obstruction,
    })
}

/// True iff the `Λ²V̄ᵛ⊗U` block vanishes.
pub fn check_riemann(decomp: &BilinearDecomposition) -> bool {
    decomp.obstruction.iter().all(ExactMatrix::is_zero)
}

/// Independent integrability test: `A(v, v′) ∈ U` for every pair of basis
/// vectors of `V`, decided by a rank computation in `Λ⊗ℂ`.
pub fn bracket_closure_oracle(
    form: &AlternatingLatticeForm,
    v: &PeriodSubspace,
    u: &PeriodSubspace,
) -> Result<bool> {
    check_dims(form, v, u)?;
    let ub = u.basis();
    for a in 0..v.dim() {
        for b in a + 1..v.dim() {
            let w = form.eval(&v.basis_vector(a), &v.basis_vector(b));
            if !ub.spans(&w)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

impl BilinearDecomposition {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn form(&self) -> &AlternatingLatticeForm {
        &self.form
    }

    pub fn v(&self) -> &PeriodSubspace {
        &self.v
    }

    pub fn u(&self) -> &PeriodSubspace {
        &self.u
    }

    pub fn v_frame(&self) -> &SplittingFrame {
        &self.v_frame
    }

    pub fn u_frame(&self) -> &SplittingFrame {
        &self.u_frame
    }

    /// All `2d` transformed components, `U` then `Ū`.
    pub fn transformed(&self) -> &[ExactMatrix] {
        &self.transformed
    }

    pub fn bprime(&self) -> &[ExactMatrix] {
        &self.bprime
    }

    pub fn bdoubleprime(&self) -> &[ExactMatrix] {
        &self.bdoubleprime
    }

    pub fn obstruction(&self) -> &[ExactMatrix] {
        &self.obstruction
    }

    pub fn conj_bprime(&self) -> Vec<ExactMatrix> {
        self.bprime.iter().map(ExactMatrix::conj).collect()
    }

    pub fn conj_bdoubleprime(&self) -> Vec<ExactMatrix> {
        self.bdoubleprime.iter().map(ExactMatrix::conj).collect()
    }

    pub fn bprime_is_zero(&self) -> bool {
        self.bprime.iter().all(ExactMatrix::is_zero)
    }

    pub fn bdoubleprime_is_zero(&self) -> bool {
        self.bdoubleprime.iter().all(ExactMatrix::is_zero)
    }

    pub fn require_riemann(&self) -> Result<()> {
        if check_riemann(self) {
            Ok(())
        } else {
            Err(Error::Precondition(
                "the Riemann relation fails: A has a nonzero component in Λ²V̄ᵛ⊗U".into(),
            ))
        }
    }

    pub fn summary(&self) -> DecompositionSummary {
        DecompositionSummary {
            bprime: self.bprime.iter().map(rows_of).collect(),
            bdoubleprime: self.bdoubleprime.iter().map(rows_of).collect(),
            obstruction: self.obstruction.iter().map(rows_of).collect(),
            riemann_ok: check_riemann(self),
        }
    }

    /// `p_V(x)` for `x ∈ Γ⊗ℂ`.
    pub fn p_v(&self, x: &[GaussianRational]) -> Result<Vector> {
        self.v_frame.project(x)
    }

    /// `p_U(y)` for `y ∈ Λ⊗ℂ`.
    pub fn p_u(&self, y: &[GaussianRational]) -> Result<Vector> {
        self.u_frame.project(y)
    }

    /// `B′(a, b)` for `a, b` in V-coordinates.
    pub fn bprime_eval(&self, a: &[GaussianRational], b: &[GaussianRational]) -> Vector {
        self.bprime.iter().map(|m| m.bilinear(a, b)).collect()
    }

    /// `B″(a, b̄)` for `a` in V-coordinates and `b̄` given by its coordinates in
    /// the conjugate basis.
    pub fn bdoubleprime_eval(&self, a: &[GaussianRational], b_bar: &[GaussianRational]) -> Vector {
        self.bdoubleprime.iter().map(|m| m.bilinear(a, b_bar)).collect()
    }

    /// `B″` extended to `Γ⊗ℂ` by `B″(a, b) = B″(a_V, b_V̄) − B″(b_V, a_V̄)`.
    pub fn bdoubleprime_extended(&self, a: &[GaussianRational], b: &[GaussianRational]) -> Result<Vector> {
        let ca = self.v_frame.coordinates(a)?;
        let cb = self.v_frame.coordinates(b)?;
        let m = self.m;
        let first = self.bdoubleprime_eval(&ca[..m], &cb[m..]);
        let second = self.bdoubleprime_eval(&cb[..m], &ca[m..]);
        Ok(first.iter().zip(&second).map(|(x, y)| x - y).collect())
    }

    /// Cocycle `F_γ(v) = B′(v, a) + 2B″(v, ā) + B″(a, ā)` with `a = p_V(γ)`.
    pub fn cocycle(&self, gamma: &[GaussianRational], v: &[GaussianRational]) -> Result<Vector> {
        self.require_riemann()?;
        if v.len() != self.m {
            return Err(Error::Dimension(format!("expected {} V-coordinates", self.m)));
        }
        let a = self.p_v(gamma)?;
        let a_bar = conj_vec(&a);
        let two = GaussianRational::from_int(2);
        let t1 = self.bprime_eval(v, &a);
        let t2 = self.bdoubleprime_eval(v, &a_bar);
        let t3 = self.bdoubleprime_eval(&a, &a_bar);
        Ok((0..self.d).map(|j| &t1[j] + &two * &t2[j] + &t3[j]).collect())
    }

    /// Rebuilds the integer components of `A` from the blocks by undoing both
    /// basis changes.
    pub fn reassemble(&self) -> Result<Vec<ExactMatrix>> {
        let (m, d) = (self.m, self.d);
        let mut tilde = Vec::with_capacity(2 * d);
        for j in 0..d {
            let (bp, bpp, ob) = (&self.bprime[j], &self.bdoubleprime[j], &self.obstruction[j]);
            tilde.push(ExactMatrix::from_fn(2 * m, 2 * m, |r, c| match (r < m, c < m) {
                (true, true) => bp[(r, c)].clone(),
                (true, false) => bpp[(r, c - m)].clone(),
                (false, true) => -&bpp[(c, r - m)],
                (false, false) => ob[(r - m, c - m)].clone(),
            }));
        }
        for j in 0..d {
            let (bp, bpp, ob) = (&self.bprime[j], &self.bdoubleprime[j], &self.obstruction[j]);
            tilde.push(ExactMatrix::from_fn(2 * m, 2 * m, |r, c| match (r < m, c < m) {
                (true, true) => ob[(r, c)].conj(),
                (true, false) => -bpp[(c - m, r)].conj(),
                (false, true) => bpp[(r - m, c)].conj(),
                (false, false) => bp[(r - m, c - m)].conj(),
            }));
        }
        let pinv = self.v_frame.p_inverse();
        let pinv_t = pinv.transpose();
        let q = self.u_frame.p();
        (0..2 * d)
            .map(|k| {
                let mut acc = ExactMatrix::zeros(2 * m, 2 * m);
                for (j, t) in tilde.iter().enumerate() {
                    acc = acc.add(&t.scale(&q[(k, j)]))?;
                }
                pinv_t.mul(&acc)?.mul(pinv)
            })
            .collect()
    }
}

/// Components `D_k` of `D(v₁, v₂) = i·A(v₁, v̄₂)` in the real basis of `Λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianSystem {
    pub components: Vec<ExactMatrix>,
}

impl HermitianSystem {
    pub fn is_hermitian(&self) -> bool {
        self.components.iter().all(|d| *d == d.conj_transpose())
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ExactMatrix::is_zero)
    }
}

pub fn hermitian_system(form: &AlternatingLatticeForm, v: &PeriodSubspace) -> Result<HermitianSystem> {
    if v.ambient_rank() != form.gamma_rank() {
        return Err(Error::Dimension("V does not live in Γ⊗ℂ".into()));
    }
    let basis = v.basis();
    let conj = basis.conj();
    let i = GaussianRational::i();
    let components = form
        .component_matrices()
        .iter()
        .map(|a| Ok(basis.transpose().mul(a)?.mul(&conj)?.scale(&i)))
        .collect::<Result<_>>()?;
    Ok(HermitianSystem { components })
}

/// `det(Σ λ_k D_k)` as a polynomial in `λ_1..λ_{2d}`.
pub fn discriminant_form(system: &HermitianSystem) -> Polynomial {
    let nvars = system.components.len();
    let size = system.components.first().map_or(0, ExactMatrix::rows);
    if size == 0 {
        return Polynomial::constant(nvars, GaussianRational::one());
    }
    let entries: Vec<Vec<Polynomial>> = (0..size)
        .map(|r| {
            (0..size)
                .map(|c| {
                    let coeffs: Vec<GaussianRational> =
                        system.components.iter().map(|d| d[(r, c)].clone()).collect();
                    Polynomial::linear(&coeffs)
                })
                .collect()
        })
        .collect();
    poly::determinant(&entries, nvars)
}

#[cfg(test)]
mod tests;
