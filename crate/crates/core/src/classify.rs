//! Problem instances, builders for the standard examples, and the full
//! classification pipeline.

use std::fmt::Write as _;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::appell_humbert::{bracket_closure_oracle, check_riemann, decompose};
use crate::error::{Error, Result};
use crate::invariants::{cohomology, deformation, CohomologyReport, DeformationReport};
use crate::lattice::{
    image_dimension, kernel_of_form, pfaffian_pencil, validate_form, AlternatingLatticeForm, IntMatrix,
    PfaffianPencilReport, RealPointVerdict,
};
use crate::matrix::{conj_vec, ExactMatrix, Vector};
use crate::scalar::GaussianRational;
use crate::structures::{validate_subspace, PeriodSubspace, SubspaceRepr};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProblemInstance {
    #[serde(rename = "A")]
    pub a: AlternatingLatticeForm,
    #[serde(rename = "V", skip_serializing_if = "Option::is_none")]
    pub v: Option<PeriodSubspace>,
    #[serde(rename = "U", skip_serializing_if = "Option::is_none")]
    pub u: Option<PeriodSubspace>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    #[serde(rename = "A")]
    a: AlternatingLatticeForm,
    #[serde(rename = "V")]
    v: Option<SubspaceRepr>,
    #[serde(rename = "U")]
    u: Option<SubspaceRepr>,
}

impl ProblemInstance {
    pub fn new(a: AlternatingLatticeForm, v: Option<PeriodSubspace>, u: Option<PeriodSubspace>) -> Result<Self> {
        let a = validate_form(a)?;
        if let Some(v) = &v {
            if v.ambient_rank() != 2 * a.m {
                return Err(Error::Dimension(format!(
                    "V has {} rows but Γ has rank {}",
                    v.ambient_rank(),
                    2 * a.m
                )));
            }
        }
        if let Some(u) = &u {
            if u.ambient_rank() != 2 * a.d {
                return Err(Error::Dimension(format!(
                    "U has {} rows but Λ has rank {}",
                    u.ambient_rank(),
                    2 * a.d
                )));
            }
        }
        Ok(ProblemInstance { a, v, u })
    }

    /// Parses and validates a JSON instance.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawInstance =
            serde_json::from_str(text).map_err(|e| Error::Instance(e.to_string()))?;
        let v = raw.v.map(PeriodSubspace::try_from).transpose()?;
        let u = raw.u.map(PeriodSubspace::try_from).transpose()?;
        ProblemInstance::new(raw.a, v, u)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }
}

/// The form `Σ_{j,l} z_j C^{(k)}_{jl} w_l` on `ℤ[i]^m` with values in
/// `ℤ[i]^d`, written in the real bases `e_j, i·e_j`. Each `C^{(k)}` must be
/// antisymmetric with Gaussian integer entries `(re, im)`.
pub fn complex_bilinear_form(m: usize, coeffs: &[Vec<Vec<(i64, i64)>>]) -> Result<AlternatingLatticeForm> {
    let d = coeffs.len();
    let n = 2 * m;
    let mut components = vec![vec![vec![0i64; n]; n]; 2 * d];
    for (k, c) in coeffs.iter().enumerate() {
        if c.len() != m || c.iter().any(|r| r.len() != m) {
            return Err(Error::Dimension(format!("coefficient matrix {} must be {m}x{m}", k + 1)));
        }
        for j in 0..m {
            for l in 0..m {
                let (p, q) = c[j][l];
                let (a, b, cc, dd) = (2 * j, 2 * j + 1, 2 * l, 2 * l + 1);
                let re = &mut components[2 * k];
                re[a][cc] += p;
                re[b][dd] -= p;
                re[a][dd] -= q;
                re[b][cc] -= q;
                let im = &mut components[2 * k + 1];
                im[a][cc] += q;
                im[b][dd] -= q;
                im[a][dd] += p;
                im[b][cc] += p;
            }
        }
    }
    AlternatingLatticeForm::new(m, d, components)
}

/// `V` spanned by `e_{2j} + i·e_{2j+1}`: the complex structure of `ℤ[i]^k`.
pub fn standard_structure(k: usize) -> PeriodSubspace {
    let basis = ExactMatrix::from_fn(2 * k, k, |r, c| {
        if r == 2 * c {
            GaussianRational::one()
        } else if r == 2 * c + 1 {
            GaussianRational::i()
        } else {
            GaussianRational::zero()
        }
    });
    validate_subspace(basis).expect("standard structure is valid")
}

/// `A((a, b), (a′, b′)) = ab′ − a′b` on `ℤ[i]²`.
pub fn iwasawa_form() -> AlternatingLatticeForm {
    complex_bilinear_form(2, &[vec![vec![(0, 0), (1, 0)], vec![(-1, 0), (0, 0)]]])
        .expect("iwasawa form is alternating")
}

pub fn build_iwasawa() -> ProblemInstance {
    ProblemInstance {
        a: iwasawa_form(),
        v: Some(standard_structure(2)),
        u: Some(standard_structure(1)),
    }
}

/// Iwasawa form with `V` spanned by `(1, i, 0, 0)` and `(0, 0, 1, −i)`, for
/// which `B′ = 0`.
pub fn build_deformed_iwasawa() -> ProblemInstance {
    let g = GaussianRational::from_ints;
    let basis = ExactMatrix::from_rows(vec![
        vec![g(1, 0), g(0, 0)],
        vec![g(0, 1), g(0, 0)],
        vec![g(0, 0), g(1, 0)],
        vec![g(0, 0), g(0, -1)],
    ])
    .expect("rectangular");
    ProblemInstance {
        a: iwasawa_form(),
        v: Some(validate_subspace(basis).expect("valid structure")),
        u: Some(standard_structure(1)),
    }
}

/// `A₁ = e^{12}`, `A₂ = e^{34}`.
pub fn split_form() -> AlternatingLatticeForm {
    let mut a1 = vec![vec![0; 4]; 4];
    a1[0][1] = 1;
    a1[1][0] = -1;
    let mut a2 = vec![vec![0; 4]; 4];
    a2[2][3] = 1;
    a2[3][2] = -1;
    AlternatingLatticeForm::new(2, 1, vec![a1, a2]).expect("alternating")
}

/// The form whose pencil is `[[0, M], [−Mᵀ, 0]]` with
/// `M = [[−μ₁, −μ₂], [μ₂, −μ₁]]`.
pub fn block_form() -> AlternatingLatticeForm {
    let block = |m: [[i64; 2]; 2]| -> IntMatrix {
        let mut a = vec![vec![0; 4]; 4];
        for r in 0..2 {
            for c in 0..2 {
                a[r][c + 2] = m[r][c];
                a[c + 2][r] = -m[r][c];
            }
        }
        a
    };
    AlternatingLatticeForm::new(2, 1, vec![block([[-1, 0], [0, -1]]), block([[0, -1], [1, 0]])])
        .expect("alternating")
}

/// A `U` containing every `A(v_a, v_b)`, completed by standard vectors, when
/// one exists.
pub fn riemann_compatible_u(form: &AlternatingLatticeForm, v: &PeriodSubspace) -> Option<PeriodSubspace> {
    let d = form.d;
    let mut span: Vec<Vector> = Vec::new();
    for a in 0..v.dim() {
        for b in a + 1..v.dim() {
            let w = form.eval(&v.basis_vector(a), &v.basis_vector(b));
            let candidate = ExactMatrix::from_columns(2 * d, &[span.clone(), vec![w.clone()]].concat()).ok()?;
            if candidate.rank() > span.len() {
                span.push(w);
            }
        }
    }
    if span.len() > d {
        return None;
    }
    let mut cols = span;
    let standard = standard_structure(d);
    for k in 0..d {
        if cols.len() == d {
            break;
        }
        let e = standard.basis_vector(k);
        let trial = ExactMatrix::from_columns(2 * d, &[cols.clone(), vec![e.clone()]].concat()).ok()?;
        let with_conj: Vec<Vector> = trial.columns().iter().map(|c| conj_vec(c)).collect();
        if trial.hstack(&ExactMatrix::from_columns(2 * d, &with_conj).ok()?).ok()?.rank() == 2 * trial.cols() {
            cols.push(e);
        }
    }
    validate_subspace(ExactMatrix::from_columns(2 * d, &cols).ok()?).ok()
}

fn random_structure(rng: &mut ChaCha8Rng, k: usize, range: i64) -> Option<PeriodSubspace> {
    let basis = ExactMatrix::from_fn(2 * k, k, |_, _| {
        GaussianRational::from_ints(rng.gen_range(-range..=range), rng.gen_range(-range..=range))
    });
    validate_subspace(basis).ok()
}

/// Randomized search for `(V, U)` satisfying the Riemann relation. The
/// standard structure is tried first; a `None` result proves nothing.
pub fn find_witness(form: &AlternatingLatticeForm, seed: u64, attempts: usize) -> Option<(PeriodSubspace, PeriodSubspace)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let accept = |v: &PeriodSubspace| -> Option<(PeriodSubspace, PeriodSubspace)> {
        let u = riemann_compatible_u(form, v)?;
        let dec = decompose(form, v, &u).ok()?;
        check_riemann(&dec).then(|| (v.clone(), u))
    };
    if let Some(found) = accept(&standard_structure(form.m)) {
        return Some(found);
    }
    for _ in 0..attempts {
        if let Some(v) = random_structure(&mut rng, form.m, 3) {
            if let Some(found) = accept(&v) {
                return Some(found);
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MainTheoremVerdict {
    ConnectedComponent,
    CriterionFails,
    NotApplicable,
}

impl MainTheoremVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            MainTheoremVerdict::ConnectedComponent => "connected-component",
            MainTheoremVerdict::CriterionFails => "criterion-fails",
            MainTheoremVerdict::NotApplicable => "not-applicable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSummary {
    pub is_zero: bool,
    pub kernel_dim: usize,
    pub nondegenerate: bool,
    pub image_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationSummary {
    pub v_scalar: String,
    pub v_positive: bool,
    pub u_scalar: String,
    pub u_positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainTheoremTrace {
    pub size_supported: bool,
    pub nontrivial_extension: bool,
    pub nondegenerate: bool,
    pub image_dim_two: bool,
    pub real_point: Option<RealPointVerdict>,
    pub bundle_point_known: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub seed: u64,
    #[serde(rename = "V")]
    pub v: SubspaceRepr,
    #[serde(rename = "U")]
    pub u: SubspaceRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub m: usize,
    pub d: usize,
    pub form: FormSummary,
    pub riemann_ok: Option<bool>,
    pub bracket_closure: Option<bool>,
    pub orientation: Option<OrientationSummary>,
    pub cohomology: Option<CohomologyReport>,
    pub deformation: Option<DeformationReport>,
    pub pencil: Option<PfaffianPencilReport>,
    pub main_theorem: MainTheoremTrace,
    pub main_theorem_verdict: MainTheoremVerdict,
    pub not_kaehler: bool,
    pub witness: Option<WitnessReport>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ClassifyOptions {
    /// Seed for a witness search when `V` or `U` is missing.
    pub find_witness: Option<u64>,
}

pub fn classify(instance: &ProblemInstance) -> Result<ClassificationReport> {
    classify_with(instance, ClassifyOptions::default())
}

pub fn classify_with(instance: &ProblemInstance, options: ClassifyOptions) -> Result<ClassificationReport> {
    let form = validate_form(instance.a.clone())?;
    let (m, d) = (form.m, form.d);
    let kernel = kernel_of_form(&form);
    let image_dim = image_dimension(&form);
    let summary = FormSummary {
        is_zero: form.is_zero(),
        kernel_dim: kernel.dim,
        nondegenerate: kernel.dim == 0,
        image_dim,
    };
    let mut warnings = Vec::new();

    let pencil = match pfaffian_pencil(&form) {
        Ok(p) => Some(p),
        Err(Error::UnsupportedSize(_)) => None,
        Err(e) => return Err(e),
    };

    let mut witness = None;
    let pair = match (&instance.v, &instance.u) {
        (Some(v), Some(u)) => Some((v.clone(), u.clone())),
        _ => match options.find_witness {
            Some(seed) => match find_witness(&form, seed, 500) {
                Some((v, u)) => {
                    warnings.push("V and U come from a heuristic randomized search".into());
                    witness = Some(WitnessReport {
                        seed,
                        v: v.to_repr(),
                        u: u.to_repr(),
                    });
                    Some((v, u))
                }
                None => {
                    warnings.push("heuristic search found no (V, U) satisfying the Riemann relation".into());
                    None
                }
            },
            None => None,
        },
    };

    let mut riemann_ok = None;
    let mut bracket_closure = None;
    let mut orientation = None;
    let mut coh = None;
    let mut def = None;
    if let Some((v, u)) = &pair {
        let dec = decompose(&form, v, u)?;
        let ok = check_riemann(&dec);
        riemann_ok = Some(ok);
        bracket_closure = Some(bracket_closure_oracle(&form, v, u)?);
        orientation = Some(OrientationSummary {
            v_scalar: v.orientation_scalar().to_string(),
            v_positive: v.positively_oriented(),
            u_scalar: u.orientation_scalar().to_string(),
            u_positive: u.positively_oriented(),
        });
        if !v.positively_oriented() {
            warnings.push("V has negative orientation".into());
        }
        if !u.positively_oriented() {
            warnings.push("U has negative orientation".into());
        }
        if ok {
            coh = Some(cohomology(&dec)?);
            def = Some(deformation(&dec)?);
        } else {
            warnings.push("Riemann relation fails; bundle invariants skipped".into());
        }
    }

    let size_supported = m == 2 && d == 1;
    let nontrivial_extension = !form.is_zero();
    let real_point = pencil.as_ref().map(|p| p.real_point_verdict);
    let trace = MainTheoremTrace {
        size_supported,
        nontrivial_extension,
        nondegenerate: summary.nondegenerate,
        image_dim_two: image_dim == 2,
        real_point,
        bundle_point_known: riemann_ok == Some(true),
    };
    let verdict = if !size_supported || !nontrivial_extension {
        MainTheoremVerdict::NotApplicable
    } else if trace.nondegenerate && trace.image_dim_two && real_point == Some(RealPointVerdict::RealPoint) {
        MainTheoremVerdict::ConnectedComponent
    } else {
        MainTheoremVerdict::CriterionFails
    };

    Ok(ClassificationReport {
        m,
        d,
        form: summary,
        riemann_ok,
        bracket_closure,
        orientation,
        cohomology: coh,
        deformation: def,
        pencil,
        main_theorem: trace,
        main_theorem_verdict: verdict,
        not_kaehler: nontrivial_extension,
        witness,
        warnings,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn render_report(report: &ClassificationReport, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => render_text(report),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

fn render_text(r: &ClassificationReport) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "m: {}", r.m);
    let _ = writeln!(w, "d: {}", r.d);
    let _ = writeln!(w, "form zero: {}", r.form.is_zero);
    let _ = writeln!(w, "form kernel dim: {}", r.form.kernel_dim);
    let _ = writeln!(w, "form image dim: {}", r.form.image_dim);
    match r.riemann_ok {
        Some(ok) => {
            let _ = writeln!(w, "riemann relation: {}", yes_no(ok));
        }
        None => {
            let _ = writeln!(w, "riemann relation: not checked (V or U missing)");
        }
    }
    if let Some(b) = r.bracket_closure {
        let _ = writeln!(w, "bracket closure oracle: {}", yes_no(b));
    }
    if let Some(o) = &r.orientation {
        let _ = writeln!(w, "orientation scalar V: {}", o.v_scalar);
        let _ = writeln!(w, "orientation scalar U: {}", o.u_scalar);
    }
    if let Some(c) = &r.cohomology {
        let _ = writeln!(w, "parallelizable: {}", c.parallelizable);
        let _ = writeln!(w, "h0_omega1: {}", c.h0_omega1);
        let _ = writeln!(w, "closed forms cokernel: {}", c.h0_closed_coker);
        let _ = writeln!(w, "h1_O: {}", c.h1_o);
        let _ = writeln!(
            w,
            "h2_O: {} (E3_02 = {}, E3_20 = {}, E3_11 = {})",
            c.h2_o, c.e3_02, c.e3_20, c.e3_11
        );
    }
    if let Some(dr) = &r.deformation {
        let _ = writeln!(w, "G rank: {}", dr.g_rank);
        let _ = writeln!(w, "tangent dim (Appell-Humbert space): {}", dr.tangent_dim_tb);
        let _ = writeln!(w, "tangent dim (complete family): {}", dr.tangent_dim_complete);
        let _ = writeln!(w, "smooth: {}", dr.smooth);
        let k = &dr.ks_conditions;
        let _ = writeln!(
            w,
            "kodaira-spencer surjectivity: {} (i: {}, ii: {}, iii: {}, iv: {})",
            dr.ks_surjective_case, k.i, k.ii, k.iii, k.iv
        );
    }
    match &r.pencil {
        Some(p) => {
            let _ = writeln!(w, "pfaffian: {} ({})", p.form, p.real_point_verdict.as_str());
        }
        None => {
            let _ = writeln!(w, "pfaffian: unsupported size");
        }
    }
    let t = &r.main_theorem;
    let _ = writeln!(w, "main theorem trace:");
    let _ = writeln!(w, "  size m = 2, d = 1: {}", yes_no(t.size_supported));
    let _ = writeln!(w, "  nontrivial extension: {}", yes_no(t.nontrivial_extension));
    let _ = writeln!(w, "  condition 1a, A nondegenerate: {}", yes_no(t.nondegenerate));
    let _ = writeln!(w, "  condition 1b, image dimension 2: {}", yes_no(t.image_dim_two));
    let rp = match t.real_point {
        Some(v) => v.as_str(),
        None => "not evaluated",
    };
    let _ = writeln!(w, "  condition 2, real point on the Pfaffian quadric: {rp}");
    let _ = writeln!(w, "  bundle point known: {}", t.bundle_point_known);
    let _ = writeln!(w, "verdict: {}", r.main_theorem_verdict.as_str());
    let _ = writeln!(w, "not_kaehler: {}", r.not_kaehler);
    if let Some(wit) = &r.witness {
        let _ = writeln!(w, "witness seed: {}", wit.seed);
    }
    for warning in &r.warnings {
        let _ = writeln!(w, "warning: {warning}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iwasawa_values() {
        let a = iwasawa_form();
        assert_eq!(a.eval_int(&[1, 0, 0, 0], &[0, 0, 1, 0]), vec![1, 0]);
        assert_eq!(a.eval_int(&[0, 1, 0, 0], &[0, 0, 0, 1]), vec![-1, 0]);
        assert_eq!(a.eval_int(&[1, 0, 0, 0], &[0, 1, 0, 0]), vec![0, 0]);
        let c = &a.components;
        assert_eq!((c[0][0][2], c[0][1][3], c[1][0][3], c[1][1][2]), (1, -1, 1, 1));
        let nonzero = c.iter().flatten().flatten().filter(|&&x| x != 0).count();
        assert_eq!(nonzero, 8);
    }

    #[test]
    fn standard_verdicts() {
        let r = classify(&build_iwasawa()).unwrap();
        assert_eq!(r.main_theorem_verdict, MainTheoremVerdict::CriterionFails);
        assert_eq!(r.riemann_ok, Some(true));
        assert!(r.not_kaehler);

        let split = ProblemInstance::new(split_form(), None, None).unwrap();
        let r = classify(&split).unwrap();
        assert_eq!(r.main_theorem_verdict, MainTheoremVerdict::ConnectedComponent);

        let zero = ProblemInstance::new(AlternatingLatticeForm::zero(2, 1), None, None).unwrap();
        let r = classify(&zero).unwrap();
        assert_eq!(r.main_theorem_verdict, MainTheoremVerdict::NotApplicable);
        assert!(!r.not_kaehler);
    }

    #[test]
    fn vanishing_pencil_forces_degenerate_form() {
        // A₁ = e^{12}, A₂ = e^{13}: every combination has rank 2
        let mut a1 = vec![vec![0; 4]; 4];
        a1[0][1] = 1;
        a1[1][0] = -1;
        let mut a2 = vec![vec![0; 4]; 4];
        a2[0][2] = 1;
        a2[2][0] = -1;
        let form = AlternatingLatticeForm::new(2, 1, vec![a1, a2]).unwrap();
        let r = classify(&ProblemInstance::new(form, None, None).unwrap()).unwrap();
        assert_eq!(r.pencil.as_ref().unwrap().real_point_verdict, RealPointVerdict::IdenticallyZero);
        assert!(!r.form.nondegenerate);
        assert_eq!(r.main_theorem_verdict, MainTheoremVerdict::CriterionFails);
    }

    #[test]
    fn block_pencil() {
        let p = pfaffian_pencil(&block_form()).unwrap();
        assert_eq!(p.form, "μ1^2 + μ2^2");
        assert_eq!(p.raw_coefficients, vec![-1, 0, -1]);
    }

    #[test]
    fn witness_search() {
        let (v, u) = find_witness(&split_form(), 7, 200).expect("witness");
        let dec = decompose(&split_form(), &v, &u).unwrap();
        assert!(check_riemann(&dec));
    }

    #[test]
    fn rendering_is_deterministic() {
        let r = classify(&build_iwasawa()).unwrap();
        let text = render_report(&r, Format::Text);
        assert_eq!(text, render_report(&r, Format::Text));
        assert!(text.lines().any(|l| l == "parallelizable: true"));
        assert!(text.lines().any(|l| l == "tangent dim (complete family): 6"));
        let json = render_report(&r, Format::Json);
        let back: ClassificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn instance_json_round_trip() {
        let inst = build_iwasawa();
        let back = ProblemInstance::from_json(&inst.to_json()).unwrap();
        assert_eq!(back, inst);
        assert!(matches!(ProblemInstance::from_json("{\"A\": 3}"), Err(Error::Instance(_))));
        let degenerate = r#"{"A":{"m":2,"d":1,"components":[[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]],[[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]]},
            "V":{"basis":[["1","0"],["0","1"],["2","0"],["0","3"]]}}"#;
        assert!(matches!(
            ProblemInstance::from_json(degenerate),
            Err(Error::DegenerateStructure(_))
        ));
    }
}
