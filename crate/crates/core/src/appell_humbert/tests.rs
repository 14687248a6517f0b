use proptest::prelude::*;

use super::*;
use crate::classify::{build_iwasawa, iwasawa_form, standard_structure};
use crate::strategies::{form, riemann_instance, small_gaussian, structure};
use crate::structures::validate_subspace;

fn g(re: i64, im: i64) -> GaussianRational {
    GaussianRational::from_ints(re, im)
}

fn iwasawa_decomp() -> BilinearDecomposition {
    let inst = build_iwasawa();
    decompose(&inst.a, inst.v.as_ref().unwrap(), inst.u.as_ref().unwrap()).unwrap()
}

fn violating_v() -> PeriodSubspace {
    validate_subspace(
        ExactMatrix::from_rows(vec![
            vec![g(1, 0), g(0, 0)],
            vec![g(0, 0), g(1, 0)],
            vec![g(0, 0), g(0, 1)],
            vec![g(0, 1), g(0, 0)],
        ])
        .unwrap(),
    )
    .unwrap()
}

fn int_vec(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, n)
}

fn complex(v: &[i64]) -> Vector {
    v.iter().map(|&x| GaussianRational::from_int(x)).collect()
}

#[test]
fn zero_form_blocks() {
    let v = standard_structure(2);
    let u = standard_structure(1);
    let dec = decompose(&AlternatingLatticeForm::zero(2, 1), &v, &u).unwrap();
    assert!(dec.bprime_is_zero() && dec.bdoubleprime_is_zero());
    assert!(check_riemann(&dec));
    assert!(bracket_closure_oracle(dec.form(), &v, &u).unwrap());
    let gamma = complex(&[1, 2, 3, 4]);
    let f = dec.cocycle(&gamma, &[g(1, 1), g(0, 2)]).unwrap();
    assert!(crate::matrix::is_zero_vec(&f));
}

#[test]
fn iwasawa_blocks() {
    let dec = iwasawa_decomp();
    assert!(!dec.bprime_is_zero());
    assert!(dec.bdoubleprime_is_zero());
    assert!(dec.obstruction()[0].is_zero());
    assert!(check_riemann(&dec));
    assert!(bracket_closure_oracle(dec.form(), dec.v(), dec.u()).unwrap());
    // B′ is alternating
    let bp = &dec.bprime()[0];
    assert_eq!(*bp, bp.transpose().scale(&-GaussianRational::one()));
}

#[test]
fn violating_pair() {
    let a = iwasawa_form();
    let u = standard_structure(1);
    let v = violating_v();
    let dec = decompose(&a, &v, &u).unwrap();
    assert!(!dec.obstruction()[0].is_zero());
    assert!(!check_riemann(&dec));
    assert!(!bracket_closure_oracle(&a, &v, &u).unwrap());
    assert!(matches!(dec.cocycle(&complex(&[1, 0, 0, 0]), &[g(1, 0), g(0, 0)]), Err(Error::Precondition(_))));

    let h = hermitian_system(&a, &v).unwrap();
    assert!(h.is_hermitian());
    assert!(!h.is_zero());
    let disc = discriminant_form(&h);
    assert!(disc.has_real_coefficients());
    assert_eq!(disc.homogeneous_degree(), Some(2));
}

#[test]
fn mismatched_dimensions() {
    let a = iwasawa_form();
    let u = standard_structure(1);
    assert!(matches!(decompose(&a, &u, &u), Err(Error::Dimension(_))));
}

#[test]
fn hermitian_examples() {
    let zero = hermitian_system(&AlternatingLatticeForm::zero(2, 1), &standard_structure(2)).unwrap();
    assert!(zero.is_zero());
    assert!(discriminant_form(&zero).is_zero());
    let iw = hermitian_system(&iwasawa_form(), &standard_structure(2)).unwrap();
    assert!(iw.is_zero());

    let one = HermitianSystem {
        components: vec![
            ExactMatrix::from_int_rows(&[vec![1]]).unwrap(),
            ExactMatrix::from_int_rows(&[vec![0]]).unwrap(),
        ],
    };
    assert_eq!(discriminant_form(&one), Polynomial::variable(2, 0));
}

#[test]
fn iwasawa_cocycle_is_bprime() {
    let dec = iwasawa_decomp();
    let gamma = complex(&[1, 0, 0, 0]);
    let a = dec.p_v(&gamma).unwrap();
    for k in 0..2 {
        let mut v = vec![GaussianRational::zero(); 2];
        v[k] = GaussianRational::one();
        assert_eq!(dec.cocycle(&gamma, &v).unwrap(), dec.bprime_eval(&v, &a));
    }
    assert!(crate::matrix::is_zero_vec(&dec.cocycle(&complex(&[0; 4]), &[g(2, 1), g(0, 3)]).unwrap()));
}

#[test]
fn reassembly_of_fixed_instances() {
    for dec in [iwasawa_decomp(), decompose(&iwasawa_form(), &violating_v(), &standard_structure(1)).unwrap()] {
        let back = dec.reassemble().unwrap();
        assert_eq!(back, dec.form().component_matrices());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn riemann_matches_oracle(a in form(2, 1), v in structure(2), u in structure(1)) {
        let dec = decompose(&a, &v, &u).unwrap();
        prop_assert_eq!(check_riemann(&dec), bracket_closure_oracle(&a, &v, &u).unwrap());
    }

    #[test]
    fn reassembly(a in form(2, 1), v in structure(2), u in structure(1)) {
        let dec = decompose(&a, &v, &u).unwrap();
        prop_assert_eq!(dec.reassemble().unwrap(), a.component_matrices());
    }

    #[test]
    fn hermitian_symmetry(a in form(2, 1), v in structure(2), u in structure(1)) {
        let h = hermitian_system(&a, &v).unwrap();
        prop_assert!(h.is_hermitian());
        let dec = decompose(&a, &v, &u).unwrap();
        prop_assert_eq!(h.is_zero(), dec.bdoubleprime_is_zero());
        prop_assert!(discriminant_form(&h).has_real_coefficients());
    }

    #[test]
    fn mixed_block_extension_is_alternating(dec in riemann_instance(), x in int_vec(4), y in int_vec(4)) {
        let (x, y) = (complex(&x), complex(&y));
        let xy = dec.bdoubleprime_extended(&x, &y).unwrap();
        let yx = dec.bdoubleprime_extended(&y, &x).unwrap();
        for (p, q) in xy.iter().zip(&yx) {
            prop_assert_eq!(p, &-q);
        }
    }

    #[test]
    fn cocycle_closes_modulo_lambda(dec in riemann_instance(), g1 in int_vec(4), g2 in int_vec(4), v in prop::collection::vec(small_gaussian(), 2)) {
        let (c1, c2) = (complex(&g1), complex(&g2));
        let sum: Vector = c1.iter().zip(&c2).map(|(a, b)| a + b).collect();
        let shift = dec.p_v(&c2).unwrap();
        let moved: Vector = v.iter().zip(&shift).map(|(a, b)| a + b).collect();
        let lhs = dec.cocycle(&sum, &v).unwrap();
        let f1 = dec.cocycle(&c1, &moved).unwrap();
        let f2 = dec.cocycle(&c2, &v).unwrap();
        let diff: Vector = (0..dec.d()).map(|j| &lhs[j] - &f1[j] - &f2[j]).collect();
        let lambda = dec.form().eval_int(&g1, &g2);
        prop_assert_eq!(diff, dec.p_u(&complex(&lambda)).unwrap());
    }
}
