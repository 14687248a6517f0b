//! Integral alternating forms `A : Λ²Γ → Λ` with `Γ ≅ ℤ^{2m}`, `Λ ≅ ℤ^{2d}`.
//!
//! The form is stored componentwise in a fixed basis `λ_1..λ_{2d}` of `Λ`:
//! `A(γ, γ') = Σ_k (γᵀ A_k γ') λ_k`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ExactMatrix, Vector};
use crate::poly::Polynomial;
use crate::scalar::{frac, rat, GaussianRational, Rational};

pub type IntMatrix = Vec<Vec<i64>>;

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AlternatingLatticeForm {
    pub m: usize,
    pub d: usize,
    pub components: Vec<IntMatrix>,
}

impl AlternatingLatticeForm {
    /// Builds and validates a form; see [`validate_form`].
    pub fn new(m: usize, d: usize, components: Vec<IntMatrix>) -> Result<Self> {
        validate_form(AlternatingLatticeForm { m, d, components })
    }

    pub fn zero(m: usize, d: usize) -> Self {
        AlternatingLatticeForm {
            m,
            d,
            components: vec![vec![vec![0; 2 * m]; 2 * m]; 2 * d],
        }
    }

    pub fn gamma_rank(&self) -> usize {
        2 * self.m
    }

    pub fn lambda_rank(&self) -> usize {
        2 * self.d
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().flatten().flatten().all(|&x| x == 0)
    }

    pub fn component_matrix(&self, k: usize) -> ExactMatrix {
        ExactMatrix::from_int_rows(&self.components[k]).expect("validated square component")
    }

    pub fn component_matrices(&self) -> Vec<ExactMatrix> {
        (0..self.lambda_rank()).map(|k| self.component_matrix(k)).collect()
    }

    /// `A(x, y)` for complex vectors, as `Λ⊗ℂ` coordinates.
    pub fn eval(&self, x: &[GaussianRational], y: &[GaussianRational]) -> Vector {
        self.component_matrices().iter().map(|a| a.bilinear(x, y)).collect()
    }

    /// `A(γ, γ')` on integral vectors.
    pub fn eval_int(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        self.components
            .iter()
            .map(|a| {
                let mut s = 0i64;
                for (i, xi) in x.iter().enumerate() {
                    for (j, yj) in y.iter().enumerate() {
                        s += xi * a[i][j] * yj;
                    }
                }
                s
            })
            .collect()
    }

    /// `A(x, y)` for rational vectors.
    pub fn eval_rational(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        self.components
            .iter()
            .map(|a| {
                let mut s = Rational::zero();
                for (i, xi) in x.iter().enumerate() {
                    if xi.is_zero() {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        if a[i][j] != 0 {
                            s += xi * rat(a[i][j]) * yj;
                        }
                    }
                }
                s
            })
            .collect()
    }

    /// The `2d·2m × 2m` matrix `[A_1; …; A_{2d}]`.
    pub fn stacked_matrix(&self) -> ExactMatrix {
        let rows: Vec<Vec<i64>> = self.components.iter().flatten().cloned().collect();
        if rows.is_empty() {
            return ExactMatrix::zeros(0, self.gamma_rank());
        }
        ExactMatrix::from_int_rows(&rows).expect("validated components")
    }

    /// Change of basis of `Γ`: the new basis vectors are the columns of `p`,
    /// so every component becomes `pᵀ A_k p`.
    pub fn change_gamma_basis(&self, p: &IntMatrix) -> Result<Self> {
        let n = self.gamma_rank();
        if p.len() != n || p.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("Γ basis change must be {n}x{n}")));
        }
        let components = self
            .components
            .iter()
            .map(|a| {
                (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| {
                                let mut s = 0;
                                for r in 0..n {
                                    for c in 0..n {
                                        s += p[r][i] * a[r][c] * p[c][j];
                                    }
                                }
                                s
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        AlternatingLatticeForm::new(self.m, self.d, components)
    }

    /// Replaces the components by the combinations `A'_k = Σ_l n[k][l] A_l`.
    pub fn recombine_lambda(&self, n: &IntMatrix) -> Result<Self> {
        let r = self.lambda_rank();
        if n.len() != r || n.iter().any(|row| row.len() != r) {
            return Err(Error::Dimension(format!("Λ recombination must be {r}x{r}")));
        }
        let size = self.gamma_rank();
        let components = n
            .iter()
            .map(|row| {
                let mut out = vec![vec![0; size]; size];
                for (l, &w) in row.iter().enumerate() {
                    for i in 0..size {
                        for j in 0..size {
                            out[i][j] += w * self.components[l][i][j];
                        }
                    }
                }
                out
            })
            .collect();
        AlternatingLatticeForm::new(self.m, self.d, components)
    }
}

/// Checks component count, sizes and that every component is alternating.
pub fn validate_form(form: AlternatingLatticeForm) -> Result<AlternatingLatticeForm> {
    let n = 2 * form.m;
    if form.m == 0 {
        return Err(Error::MalformedForm("base dimension m must be positive".into()));
    }
    if form.components.len() != 2 * form.d {
        return Err(Error::MalformedForm(format!(
            "expected {} components for d = {}, got {}",
            2 * form.d,
            form.d,
            form.components.len()
        )));
    }
    for (k, a) in form.components.iter().enumerate() {
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return Err(Error::MalformedForm(format!("component {} is not {n}x{n}", k + 1)));
        }
        for i in 0..n {
            if a[i][i] != 0 {
                return Err(Error::MalformedForm(format!(
                    "component {} has nonzero diagonal entry at ({}, {})",
                    k + 1,
                    i + 1,
                    i + 1
                )));
            }
            for j in 0..i {
                if a[i][j] != -a[j][i] {
                    return Err(Error::MalformedForm(format!(
                        "component {} is not alternating at ({}, {})",
                        k + 1,
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
    }
    Ok(form)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormKernel {
    pub dim: usize,
    pub basis: Vec<Vector>,
}

/// `{x ∈ Γ⊗ℚ : A(x, ·) = 0}`.
pub fn kernel_of_form(form: &AlternatingLatticeForm) -> FormKernel {
    let basis = form.stacked_matrix().kernel_basis();
    FormKernel {
        dim: basis.len(),
        basis,
    }
}

/// The `2d × C(2m, 2)` matrix whose columns are the values `A(γ_i, γ_j)`, `i < j`.
pub fn value_matrix(form: &AlternatingLatticeForm) -> ExactMatrix {
    let n = form.gamma_rank();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    ExactMatrix::from_fn(form.lambda_rank(), pairs.len(), |k, p| {
        let (i, j) = pairs[p];
        GaussianRational::from_int(form.components[k][i][j])
    })
}

/// Dimension over ℚ of the span of the values of `A`.
pub fn image_dimension(form: &AlternatingLatticeForm) -> usize {
    value_matrix(form).rank()
}

/// `A = T⁻ − ᵗT⁻` with `T⁻` the strictly lower triangular part, and the
/// symmetric form `S = −(T⁻ + ᵗT⁻)/4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangularSplitting {
    pub tminus: Vec<IntMatrix>,
    pub s: Vec<Vec<Vec<Rational>>>,
}

pub fn triangular_splitting(form: &AlternatingLatticeForm) -> TriangularSplitting {
    let n = form.gamma_rank();
    let tminus: Vec<IntMatrix> = form
        .components
        .iter()
        .map(|a| {
            (0..n)
                .map(|j| (0..n).map(|h| if j > h { a[j][h] } else { 0 }).collect())
                .collect()
        })
        .collect();
    let s = tminus
        .iter()
        .map(|t| {
            (0..n)
                .map(|i| (0..n).map(|j| frac(-(t[i][j] + t[j][i]), 4)).collect())
                .collect()
        })
        .collect();
    let split = TriangularSplitting { tminus, s };
    debug_assert!(split.reconstructs(form));
    split
}

impl TriangularSplitting {
    pub fn lambda_rank(&self) -> usize {
        self.tminus.len()
    }

    /// `T⁻(x, y)` as `Λ⊗ℚ` coordinates.
    pub fn tminus_eval(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        self.tminus
            .iter()
            .map(|t| {
                let mut acc = Rational::zero();
                for (i, xi) in x.iter().enumerate() {
                    for (j, yj) in y.iter().enumerate() {
                        if t[i][j] != 0 {
                            acc += xi * rat(t[i][j]) * yj;
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// `S(x, y)` as `Λ⊗ℚ` coordinates.
    pub fn s_eval(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        self.s
            .iter()
            .map(|s| {
                let mut acc = Rational::zero();
                for (i, xi) in x.iter().enumerate() {
                    for (j, yj) in y.iter().enumerate() {
                        if !s[i][j].is_zero() {
                            acc += xi * &s[i][j] * yj;
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// Checks `A_k = T⁻_k − ᵗT⁻_k` and `T⁻ + 2S = A/2` entrywise.
    pub fn reconstructs(&self, form: &AlternatingLatticeForm) -> bool {
        let n = form.gamma_rank();
        self.tminus.iter().zip(&self.s).zip(&form.components).all(|((t, s), a)| {
            (0..n).all(|i| {
                (0..n).all(|j| {
                    a[i][j] == t[i][j] - t[j][i]
                        && rat(t[i][j]) + rat(2) * &s[i][j] == frac(a[i][j], 2)
                })
            })
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RealPointVerdict {
    RealPoint,
    ComplexConjugatePointsOnly,
    IdenticallyZero,
    Undecided,
}

impl RealPointVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            RealPointVerdict::RealPoint => "real-point",
            RealPointVerdict::ComplexConjugatePointsOnly => "complex-conjugate-points-only",
            RealPointVerdict::IdenticallyZero => "identically-zero",
            RealPointVerdict::Undecided => "undecided",
        }
    }
}

/// Pfaffian of the pencil `μ₁A₁ + μ₂A₂` for `m = 2`, `d = 1`.
///
/// `pf_coefficients = [a, b, c]` for `a·μ₁² + b·μ₁μ₂ + c·μ₂²`, normalized so
/// that the first nonzero coefficient is positive (only the zero locus on the
/// pencil matters). `raw_coefficients` keep the sign of the usual
/// `m₁₂m₃₄ − m₁₃m₂₄ + m₁₄m₂₃` convention.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfaffianPencilReport {
    pub pf_coefficients: Vec<i64>,
    pub raw_coefficients: Vec<i64>,
    pub discriminant: i64,
    pub form: String,
    pub real_point_verdict: RealPointVerdict,
}

/// Raw coefficients `[a, b, c]` of `Pf(μ₁A₁ + μ₂A₂)`.
pub fn pencil_pfaffian_raw(form: &AlternatingLatticeForm) -> Result<[i64; 3]> {
    if form.m != 2 || form.d != 1 {
        return Err(Error::UnsupportedSize(format!(
            "Pfaffian pencil analysis needs m = 2, d = 1 (got m = {}, d = {})",
            form.m, form.d
        )));
    }
    let a1 = &form.components[0];
    let a2 = &form.components[1];
    // Each entry is the linear form (a1[i][j], a2[i][j]) in (μ₁, μ₂); the
    // product of two such forms contributes to μ₁², μ₁μ₂, μ₂².
    let prod = |(i, j): (usize, usize), (k, l): (usize, usize)| -> [i64; 3] {
        let (p1, p2) = (a1[i][j], a2[i][j]);
        let (q1, q2) = (a1[k][l], a2[k][l]);
        [p1 * q1, p1 * q2 + p2 * q1, p2 * q2]
    };
    let t1 = prod((0, 1), (2, 3));
    let t2 = prod((0, 2), (1, 3));
    let t3 = prod((0, 3), (1, 2));
    Ok([
        t1[0] - t2[0] + t3[0],
        t1[1] - t2[1] + t3[1],
        t1[2] - t2[2] + t3[2],
    ])
}

pub fn pfaffian_pencil(form: &AlternatingLatticeForm) -> Result<PfaffianPencilReport> {
    let raw = pencil_pfaffian_raw(form)?;
    let sign = raw.iter().find(|&&c| c != 0).map_or(1, |c| c.signum());
    let pf: Vec<i64> = raw.iter().map(|c| c * sign).collect();
    let (a, b, c) = (pf[0], pf[1], pf[2]);
    let discriminant = b * b - 4 * a * c;
    let real_point_verdict = if pf.iter().all(|&x| x == 0) {
        RealPointVerdict::IdenticallyZero
    } else if discriminant >= 0 {
        RealPointVerdict::RealPoint
    } else {
        RealPointVerdict::ComplexConjugatePointsOnly
    };
    let mut poly = Polynomial::zero(2);
    poly.add_term(vec![2, 0], GaussianRational::from_int(a));
    poly.add_term(vec![1, 1], GaussianRational::from_int(b));
    poly.add_term(vec![0, 2], GaussianRational::from_int(c));
    Ok(PfaffianPencilReport {
        pf_coefficients: pf,
        raw_coefficients: raw.to_vec(),
        discriminant,
        form: poly.render(&["μ1", "μ2"]),
        real_point_verdict,
    })
}

/// `μ₁A₁ + μ₂A₂ + …` as an exact matrix.
pub fn pencil_matrix(form: &AlternatingLatticeForm, mu: &[i64]) -> ExactMatrix {
    let n = form.gamma_rank();
    ExactMatrix::from_fn(n, n, |i, j| {
        GaussianRational::from_int(
            form.components
                .iter()
                .zip(mu)
                .map(|(a, w)| w * a[i][j])
                .sum(),
        )
    })
}
