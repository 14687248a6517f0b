//! The right-invariant complex structure on `Π⊗ℝ` and the trivialization
//! `Ψ : Π⊗ℝ → U ⊕ V`. All group elements here are in symmetric coordinates
//! `(η, x)`, see [`super::group`].

use crate::error::{Error, Result};
use crate::matrix::{conj_vec, ExactMatrix, Vector};
use crate::scalar::{GaussianRational, Rational};

use super::group::GroupElement;
use super::BilinearDecomposition;

fn complexify(v: &[Rational]) -> Vector {
    v.iter().cloned().map(GaussianRational::from_rational).collect()
}

fn realify(v: &[GaussianRational]) -> Result<Vec<Rational>> {
    v.iter()
        .map(|z| {
            if z.is_real() {
                Ok(z.re().clone())
            } else {
                Err(Error::Domain(format!("expected a real coordinate, got {z}")))
            }
        })
        .collect()
}

/// Basis of `T^{(1,0)}_{(η,x)} = {(u + A(v, x), v) : u ∈ U, v ∈ V}` inside
/// `(Λ ⊕ Γ)⊗ℂ`, as the columns of a `(2d + 2m) × (d + m)` matrix.
pub fn t10_fiber(decomp: &BilinearDecomposition, g: &GroupElement) -> Result<ExactMatrix> {
    decomp.require_riemann()?;
    let (m, d) = (decomp.m(), decomp.d());
    let form = decomp.form();
    let x = complexify(&g.x);
    let mut columns = Vec::with_capacity(d + m);
    for j in 0..d {
        let mut col = decomp.u().basis_vector(j);
        col.extend(std::iter::repeat_with(GaussianRational::zero).take(2 * m));
        columns.push(col);
    }
    for i in 0..m {
        let v = decomp.v().basis_vector(i);
        let mut col = form.eval(&v, &x);
        col.extend(v);
        columns.push(col);
    }
    ExactMatrix::from_columns(2 * d + 2 * m, &columns)
}

/// Differential of `R_h : g ↦ g h`, acting on `(δη, δx)` columns:
/// `(δη + A(δx, x_h), δx)`.
pub fn right_translation_differential(
    decomp: &BilinearDecomposition,
    h: &GroupElement,
    tangent: &ExactMatrix,
) -> Result<ExactMatrix> {
    let lr = 2 * decomp.d();
    let form = decomp.form();
    let xh = complexify(&h.x);
    let columns: Vec<Vector> = tangent
        .columns()
        .into_iter()
        .map(|col| {
            let shift = form.eval(&col[lr..], &xh);
            let mut out = col.clone();
            for (o, s) in out.iter_mut().zip(shift) {
                *o += &s;
            }
            out
        })
        .collect();
    ExactMatrix::from_columns(tangent.rows(), &columns)
}

/// Differential of inversion `(η, x) ↦ (−η, −x)`.
pub fn inversion_differential(tangent: &ExactMatrix) -> ExactMatrix {
    tangent.scale(&-GaussianRational::one())
}

/// `Ψ(η, x) = (p_U(η) − B″(x̄_V, x_V), x_V)`.
pub fn psi(decomp: &BilinearDecomposition, g: &GroupElement) -> Result<(Vector, Vector)> {
    decomp.require_riemann()?;
    let x = complexify(&g.x);
    let xv = decomp.p_v(&x)?;
    let u0 = decomp.p_u(&complexify(&g.y))?;
    // B″(x̄_V, x_V) = −B″(x_V, x̄_V)
    let corr = decomp.bdoubleprime_eval(&xv, &conj_vec(&xv));
    let u = u0.iter().zip(&corr).map(|(a, b)| a + b).collect();
    Ok((u, xv))
}

/// `Ψ⁻¹(u, v) = (u + ū + B″(v̄, v) + conj B″(v̄, v), v + v̄)`.
pub fn psi_inverse(decomp: &BilinearDecomposition, u: &[GaussianRational], v: &[GaussianRational]) -> Result<GroupElement> {
    decomp.require_riemann()?;
    if u.len() != decomp.d() || v.len() != decomp.m() {
        return Err(Error::Dimension("Ψ⁻¹ expects (d, m) coordinates".into()));
    }
    let b = decomp.bdoubleprime_eval(v, &conj_vec(v));
    let w: Vector = u.iter().zip(&b).map(|(a, c)| a - c).collect();
    let eta = decomp.u_frame().real_point(&w);
    let x = decomp.v_frame().real_point(v);
    Ok(GroupElement::new(realify(&eta)?, realify(&x)?))
}
