//! Complex structures on `Γ⊗ℝ` and `Λ⊗ℝ` given by period subspaces
//! `V ⊂ Γ⊗ℂ` with `V ⊕ V̄ = Γ⊗ℂ`.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ExactMatrix, Vector};
use crate::scalar::{GaussianRational, Rational};

/// JSON shape of a period subspace: `2k` rows of `k` scalars.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceRepr {
    pub basis: Vec<Vec<GaussianRational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSubspace {
    basis: ExactMatrix,
    orientation: Rational,
}

impl PeriodSubspace {
    pub fn ambient_rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn basis_vector(&self, k: usize) -> Vector {
        self.basis.column(k)
    }

    /// `i^k · det[basis | conj basis]`, always a nonzero rational.
    pub fn orientation_scalar(&self) -> &Rational {
        &self.orientation
    }

    pub fn positively_oriented(&self) -> bool {
        self.orientation.is_positive()
    }

    /// `[basis | conj basis]`.
    pub fn stacked(&self) -> ExactMatrix {
        self.basis.hstack(&self.basis.conj()).expect("same row count")
    }

    pub fn frame(&self) -> SplittingFrame {
        let p = self.stacked();
        let p_inverse = p
            .inverse()
            .expect("square")
            .expect("validated subspace has invertible frame");
        SplittingFrame {
            dim: self.dim(),
            p,
            p_inverse,
        }
    }

    pub fn to_repr(&self) -> SubspaceRepr {
        SubspaceRepr {
            basis: (0..self.basis.rows()).map(|r| self.basis.row(r)).collect(),
        }
    }
}

impl TryFrom<SubspaceRepr> for PeriodSubspace {
    type Error = Error;

    fn try_from(repr: SubspaceRepr) -> Result<Self> {
        let basis = ExactMatrix::from_rows(repr.basis)
            .map_err(|e| Error::MalformedSubspace(e.to_string()))?;
        validate_subspace(basis)
    }
}

impl Serialize for PeriodSubspace {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PeriodSubspace {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SubspaceRepr::deserialize(d)?;
        PeriodSubspace::try_from(repr).map_err(serde::de::Error::custom)
    }
}

/// Validates a `2k × k` basis: full column rank and `V ∩ V̄ = 0`.
pub fn validate_subspace(basis: ExactMatrix) -> Result<PeriodSubspace> {
    let k = basis.cols();
    if k == 0 || basis.rows() != 2 * k {
        return Err(Error::MalformedSubspace(format!(
            "basis must be 2k x k with k > 0, got {} x {}",
            basis.rows(),
            k
        )));
    }
    if basis.rank() < k {
        return Err(Error::MalformedSubspace("basis columns are linearly dependent".into()));
    }
    let p = basis.hstack(&basis.conj())?;
    let det = p.determinant()?;
    if det.is_zero() {
        return Err(Error::DegenerateStructure(
            "V meets its conjugate nontrivially".into(),
        ));
    }
    let scalar = GaussianRational::i_pow(k) * det;
    debug_assert!(scalar.is_real());
    Ok(PeriodSubspace {
        basis,
        orientation: scalar.re().clone(),
    })
}

/// `P = [basis | conj basis]` together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingFrame {
    dim: usize,
    p: ExactMatrix,
    p_inverse: ExactMatrix,
}

impl SplittingFrame {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> &ExactMatrix {
        &self.p
    }

    pub fn p_inverse(&self) -> &ExactMatrix {
        &self.p_inverse
    }

    fn check(&self, x: &[GaussianRational]) -> Result<()> {
        if x.len() != 2 * self.dim {
            return Err(Error::Dimension(format!(
                "expected a vector of length {}, got {}",
                2 * self.dim,
                x.len()
            )));
        }
        Ok(())
    }

    /// Coordinates of `x` in the basis `[basis | conj basis]`.
    pub fn coordinates(&self, x: &[GaussianRational]) -> Result<Vector> {
        self.check(x)?;
        self.p_inverse.mul_vec(x)
    }

    /// `p_V(x)` in V-coordinates.
    pub fn project(&self, x: &[GaussianRational]) -> Result<Vector> {
        let mut c = self.coordinates(x)?;
        c.truncate(self.dim);
        Ok(c)
    }

    /// `p_V̄(x)` in coordinates of the conjugate basis.
    pub fn project_conj(&self, x: &[GaussianRational]) -> Result<Vector> {
        Ok(self.coordinates(x)?.split_off(self.dim))
    }

    /// `p_V` of a rational vector.
    pub fn project_rational(&self, x: &[Rational]) -> Result<Vector> {
        let z: Vector = x.iter().cloned().map(GaussianRational::from_rational).collect();
        self.project(&z)
    }

    /// `basis · c + conj(basis) · c̄`, the real vector with `p_V = c`.
    pub fn real_point(&self, c: &[GaussianRational]) -> Vector {
        self.embed(c, &crate::matrix::conj_vec(c))
    }

    /// `basis · a + conj(basis) · b`.
    pub fn embed(&self, a: &[GaussianRational], b: &[GaussianRational]) -> Vector {
        let mut coords = a.to_vec();
        coords.extend_from_slice(b);
        self.p.mul_vec(&coords).expect("frame dimensions")
    }
}
