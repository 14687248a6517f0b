//! Cohomological invariants of the total space and deformation-theoretic
//! verdicts for the Appell-Humbert family.
//!
//! Conventions: `ω_k = conj B′_k` is the image of the `k`-th dual basis vector
//! of `Ūᵛ` under `B̄′ : Ūᵛ → Λ²V̄ᵛ`. Elements of `Λ^p V̄ᵛ` are indexed by
//! increasing index tuples.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::appell_humbert::BilinearDecomposition;
use crate::error::{Error, Result};
use crate::matrix::{ExactMatrix, Vector};
use crate::scalar::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub h0_omega1: usize,
    pub h0_closed_coker: usize,
    #[serde(rename = "h1_O")]
    pub h1_o: usize,
    #[serde(rename = "h2_O")]
    pub h2_o: usize,
    #[serde(rename = "E3_02")]
    pub e3_02: usize,
    #[serde(rename = "E3_20")]
    pub e3_20: usize,
    #[serde(rename = "E3_11")]
    pub e3_11: usize,
    pub parallelizable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KsCase {
    I,
    Ii,
    Iii,
    Iv,
    None,
}

impl fmt::Display for KsCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KsCase::I => "i",
            KsCase::Ii => "ii",
            KsCase::Iii => "iii",
            KsCase::Iv => "iv",
            KsCase::None => "none",
        })
    }
}

/// Every sufficient condition for surjectivity of the Kodaira-Spencer map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KsConditions {
    /// `Ker(B̄′) = 0`.
    pub i: bool,
    /// `d = 1` and `B′ ≠ 0`.
    pub ii: bool,
    /// `d = 1` and `v ↦ B(v, ·)` injective on `V`.
    pub iii: bool,
    /// `B″ = 0` and `B′ : Λ²V → U` surjective.
    pub iv: bool,
    pub a_is_zero: bool,
}

impl KsConditions {
    pub fn first(&self) -> KsCase {
        if self.i {
            KsCase::I
        } else if self.ii {
            KsCase::Ii
        } else if self.iii {
            KsCase::Iii
        } else if self.iv {
            KsCase::Iv
        } else {
            KsCase::None
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformationReport {
    #[serde(rename = "G_rank")]
    pub g_rank: usize,
    #[serde(rename = "tangent_dim_TB")]
    pub tangent_dim_tb: usize,
    pub tangent_dim_complete: usize,
    pub smooth: bool,
    pub ks_surjective_case: KsCase,
    pub ks_conditions: KsConditions,
    pub not_kaehler: bool,
}

/// Increasing pairs `(a, b)` with `a < b < n`.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// Increasing triples with entries below `n`.
pub fn triples(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// `ω_k` as a vector over the increasing pairs.
fn omega(decomp: &BilinearDecomposition) -> Vec<Vector> {
    let ps = pairs(decomp.m());
    decomp
        .conj_bprime()
        .iter()
        .map(|w| ps.iter().map(|&(a, b)| w[(a, b)].clone()).collect())
        .collect()
}

/// Matrix of `B̄′ : Ūᵛ → Λ²V̄ᵛ`, one column per `ω_k`.
pub fn conj_bprime_matrix(decomp: &BilinearDecomposition) -> ExactMatrix {
    let rows = pairs(decomp.m()).len();
    let om = omega(decomp);
    ExactMatrix::from_fn(rows, decomp.d(), |r, k| om[k][r].clone())
}

fn flatten(m: &ExactMatrix) -> Vector {
    (0..m.rows()).flat_map(|r| m.row(r)).collect()
}

/// `d − rank(Uᵛ → (V⊗V̄)ᵛ)`, the annihilator of the image of `B″`.
pub fn h0_omega1_coker(decomp: &BilinearDecomposition) -> Result<usize> {
    decomp.require_riemann()?;
    let rows: Vec<Vector> = decomp.bdoubleprime().iter().map(flatten).collect();
    let mat = ExactMatrix::from_rows(rows)?;
    Ok(decomp.d() - mat.rank())
}

pub fn h0_omega1(decomp: &BilinearDecomposition) -> Result<usize> {
    Ok(decomp.m() + h0_omega1_coker(decomp)?)
}

/// Dimension of the annihilator of the image of `B = B′ + B″`.
pub fn closed_forms_coker(decomp: &BilinearDecomposition) -> Result<usize> {
    decomp.require_riemann()?;
    let rows: Vec<Vector> = decomp
        .bprime()
        .iter()
        .zip(decomp.bdoubleprime())
        .map(|(bp, bpp)| {
            let mut r = flatten(bp);
            r.extend(flatten(bpp));
            r
        })
        .collect();
    Ok(decomp.d() - ExactMatrix::from_rows(rows)?.rank())
}

/// `m + dim Ker(B̄′ : Ūᵛ → Λ²V̄ᵛ)`.
pub fn h1_o(decomp: &BilinearDecomposition) -> Result<usize> {
    decomp.require_riemann()?;
    Ok(decomp.m() + conj_bprime_matrix(decomp).nullity())
}

/// `(E₃^{0,2}, E₃^{2,0}, E₃^{1,1})`.
pub fn h2_o_summands(decomp: &BilinearDecomposition) -> Result<(usize, usize, usize)> {
    decomp.require_riemann()?;
    let (m, d) = (decomp.m(), decomp.d());
    let om = omega(decomp);
    let mp = pairs(m);
    let np = mp.len();

    // Λ²Ūᵛ → Ūᵛ⊗Λ²V̄ᵛ, e_k∧e_l ↦ e_l⊗ω_k − e_k⊗ω_l
    let dp = pairs(d);
    let mut wedge = ExactMatrix::zeros(d * np, dp.len());
    for (col, &(k, l)) in dp.iter().enumerate() {
        for p in 0..np {
            wedge[(l * np + p, col)] += &om[k][p];
            wedge[(k * np + p, col)] -= &om[l][p];
        }
    }
    let e02 = wedge.nullity();

    let e20 = np - conj_bprime_matrix(decomp).rank();

    // Ūᵛ⊗V̄ᵛ → Λ³V̄ᵛ, e_k⊗φ ↦ ω_k∧φ
    let tr = triples(m);
    let pair_index = |a: usize, b: usize| mp.iter().position(|&p| p == (a, b)).expect("pair");
    let mut cup = ExactMatrix::zeros(tr.len(), d * m);
    for k in 0..d {
        for c0 in 0..m {
            let col = k * m + c0;
            for (row, &(a, b, c)) in tr.iter().enumerate() {
                // (ω∧φ)(a,b,c) = ω_ab φ_c − ω_ac φ_b + ω_bc φ_a with φ = e_{c0}
                if c == c0 {
                    wedge_add(&mut cup, row, col, &om[k][pair_index(a, b)], false);
                }
                if b == c0 {
                    wedge_add(&mut cup, row, col, &om[k][pair_index(a, c)], true);
                }
                if a == c0 {
                    wedge_add(&mut cup, row, col, &om[k][pair_index(b, c)], false);
                }
            }
        }
    }
    let e11 = cup.nullity();
    Ok((e02, e20, e11))
}

fn wedge_add(m: &mut ExactMatrix, r: usize, c: usize, v: &GaussianRational, negate: bool) {
    if negate {
        m[(r, c)] -= v;
    } else {
        m[(r, c)] += v;
    }
}

pub fn h2_o(decomp: &BilinearDecomposition) -> Result<usize> {
    let (a, b, c) = h2_o_summands(decomp)?;
    Ok(a + b + c)
}

pub fn cohomology(decomp: &BilinearDecomposition) -> Result<CohomologyReport> {
    let (e3_02, e3_20, e3_11) = h2_o_summands(decomp)?;
    Ok(CohomologyReport {
        h0_omega1: h0_omega1(decomp)?,
        h0_closed_coker: closed_forms_coker(decomp)?,
        h1_o: h1_o(decomp)?,
        h2_o: e3_02 + e3_20 + e3_11,
        e3_02,
        e3_20,
        e3_11,
        parallelizable: decomp.bdoubleprime_is_zero(),
    })
}

/// Matrix of the tangent-space map
/// `G(L, M)(v, v′) = conj(M B′(v, v′)) − B″(conj Lv, v̄′) + B″(conj Lv′, v̄)`.
///
/// `G` is conjugate-linear in `(L, M)`; the matrix acts on `ℓ = conj L`
/// (`m²` entries, index `b·m + a` for the coefficient of `v_b` in
/// `conj(L v_a)`) followed by `μ = conj M` (`d²` entries, index `i·d + j`).
/// Rows are indexed by `(i, a < a′)`.
pub fn tangent_map_g(decomp: &BilinearDecomposition) -> Result<ExactMatrix> {
    decomp.require_riemann()?;
    let (m, d) = (decomp.m(), decomp.d());
    let ps = pairs(m);
    let bp = decomp.conj_bprime();
    let bpp = decomp.bdoubleprime();
    let mut g = ExactMatrix::zeros(d * ps.len(), m * m + d * d);
    for i in 0..d {
        for (p, &(a, a2)) in ps.iter().enumerate() {
            let row = i * ps.len() + p;
            for b in 0..m {
                g[(row, b * m + a)] -= &bpp[i][(b, a2)];
                g[(row, b * m + a2)] += &bpp[i][(b, a)];
            }
            for j in 0..d {
                g[(row, m * m + i * d + j)] += &bp[j][(a, a2)];
            }
        }
    }
    Ok(g)
}

/// Matrix of `v ↦ B(v, ·)` from `V` to `(Γ⊗ℂ)ᵛ⊗U`; rows `(j, b)` for the
/// `V` part then `(j, b̄)` for the `V̄` part.
fn first_factor_matrix(decomp: &BilinearDecomposition) -> ExactMatrix {
    let (m, d) = (decomp.m(), decomp.d());
    let mut out = ExactMatrix::zeros(2 * d * m, m);
    for j in 0..d {
        for b in 0..m {
            for a in 0..m {
                out[(j * m + b, a)] = decomp.bprime()[j][(a, b)].clone();
                out[(d * m + j * m + b, a)] = decomp.bdoubleprime()[j][(a, b)].clone();
            }
        }
    }
    out
}

/// A nonzero `v ∈ V` (as a vector of `Γ⊗ℂ`) with `B(v, ·) ≡ 0`, if any.
pub fn degenerate_first_factor(decomp: &BilinearDecomposition) -> Result<Option<Vector>> {
    decomp.require_riemann()?;
    if decomp.d() != 1 {
        return Err(Error::Precondition(format!(
            "first-factor degeneracy is analysed for d = 1, got d = {}",
            decomp.d()
        )));
    }
    Ok(first_factor_matrix(decomp)
        .kernel_basis()
        .into_iter()
        .next()
        .map(|c| decomp.v().basis().mul_vec(&c).expect("m coordinates")))
}

pub fn ks_conditions(decomp: &BilinearDecomposition) -> Result<KsConditions> {
    decomp.require_riemann()?;
    let d = decomp.d();
    let bprime_rank = conj_bprime_matrix(decomp).rank();
    let bprime_nonzero = !decomp.bprime_is_zero();
    Ok(KsConditions {
        i: bprime_rank == d,
        ii: d == 1 && bprime_nonzero,
        iii: d == 1 && first_factor_matrix(decomp).nullity() == 0,
        iv: decomp.bdoubleprime_is_zero() && bprime_rank == d,
        a_is_zero: decomp.form().is_zero(),
    })
}

pub fn ks_surjectivity(decomp: &BilinearDecomposition) -> Result<KsCase> {
    Ok(ks_conditions(decomp)?.first())
}

pub fn deformation(decomp: &BilinearDecomposition) -> Result<DeformationReport> {
    let (m, d) = (decomp.m(), decomp.d());
    let g = tangent_map_g(decomp)?;
    let g_rank = g.rank();
    let tangent_dim_tb = m * m + d * d - g_rank;
    let ks = ks_conditions(decomp)?;
    Ok(DeformationReport {
        g_rank,
        tangent_dim_tb,
        tangent_dim_complete: tangent_dim_tb + m * d,
        // With A = 0 the Riemann relation is empty and the space is open.
        smooth: g_rank == g.rows() || decomp.form().is_zero(),
        ks_surjective_case: ks.first(),
        ks_conditions: ks,
        not_kaehler: !decomp.form().is_zero(),
    })
}

/// Conditions 1) and 2) for `(L, Σ v_i ⊗ ū_iᵛ)` to lie in the kernel of the
/// coboundary map. `l[(b, a)]` is the coefficient of `v̄_b` in `L v_a`; each
/// tensor entry is `(v_i, ū_iᵛ)` in `V`- and `Ūᵛ`-coordinates.
pub fn kernel_of_f_conditions(
    decomp: &BilinearDecomposition,
    l: &ExactMatrix,
    tensor: &[(Vector, Vector)],
) -> Result<(bool, bool)> {
    decomp.require_riemann()?;
    let (m, d) = (decomp.m(), decomp.d());
    if l.rows() != m || l.cols() != m {
        return Err(Error::Dimension(format!("L must be {m}x{m}")));
    }
    let om = conj_bprime_matrix(decomp);
    for (v, uv) in tensor {
        if v.len() != m || uv.len() != d {
            return Err(Error::Dimension("tensor entries must be (m, d) vectors".into()));
        }
        let image = om.mul_vec(uv)?;
        if !crate::matrix::is_zero_vec(&image) {
            return Err(Error::Precondition(
                "tensor factor is not in the kernel of the conjugate of B′".into(),
            ));
        }
    }

    // 1) B″(L̄)(v̄_a, v̄_a′) = Σ_b conj(L_ba) B″(v_b, v̄_a′) − Σ_b conj(L_ba′) B″(v_b, v̄_a)
    //    must equal M̄∘B̄′ for some M̄.
    let ps = pairs(m);
    let bpp = decomp.bdoubleprime();
    let mut cond1 = true;
    for bi in bpp.iter().take(d) {
        let target: Vector = ps
            .iter()
            .map(|&(a, a2)| {
                (0..m)
                    .map(|b| &l[(b, a)].conj() * &bi[(b, a2)] - &l[(b, a2)].conj() * &bi[(b, a)])
                    .sum()
            })
            .collect();
        if om.solve(&target)?.is_none() {
            cond1 = false;
            break;
        }
    }

    // 2) Σ_i B″(v_i) ⊗ ū_iᵛ = 0 in V̄ᵛ⊗U⊗Ūᵛ
    let mut cond2 = true;
    'outer: for b in 0..m {
        for bj in bpp {
            for k in 0..d {
                let s: GaussianRational = tensor
                    .iter()
                    .map(|(v, uv)| {
                        let bv: GaussianRational = (0..m).map(|a| &v[a] * &bj[(a, b)]).sum();
                        bv * &uv[k]
                    })
                    .sum();
                if !s.is_zero() {
                    cond2 = false;
                    break 'outer;
                }
            }
        }
    }
    Ok((cond1, cond2))
}
