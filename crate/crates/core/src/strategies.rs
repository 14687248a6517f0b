//! Proptest strategies shared by the unit tests.

use proptest::prelude::*;

use crate::appell_humbert::{check_riemann, decompose, BilinearDecomposition};
use crate::classify::riemann_compatible_u;
use crate::lattice::AlternatingLatticeForm;
use crate::matrix::ExactMatrix;
use crate::scalar::{frac, GaussianRational};
use crate::structures::{validate_subspace, PeriodSubspace};

pub fn small_gaussian() -> impl Strategy<Value = GaussianRational> {
    (-3i64..=3, -3i64..=3, 1i64..=2).prop_map(|(a, b, c)| GaussianRational::new(frac(a, c), frac(b, c)))
}

pub fn structure(k: usize) -> impl Strategy<Value = PeriodSubspace> {
    prop::collection::vec(small_gaussian(), 2 * k * k).prop_filter_map("degenerate", move |e| {
        validate_subspace(ExactMatrix::from_fn(2 * k, k, |r, c| e[r * k + c].clone())).ok()
    })
}

pub fn form(m: usize, d: usize) -> impl Strategy<Value = AlternatingLatticeForm> {
    let n = 2 * m;
    let per = n * (n - 1) / 2;
    prop::collection::vec(-3i64..=3, per * 2 * d).prop_map(move |e| {
        let comps = e
            .chunks(per)
            .map(|c| {
                let mut a = vec![vec![0; n]; n];
                let mut it = c.iter();
                for i in 0..n {
                    for j in i + 1..n {
                        let x = *it.next().unwrap();
                        a[i][j] = x;
                        a[j][i] = -x;
                    }
                }
                a
            })
            .collect();
        AlternatingLatticeForm::new(m, d, comps).unwrap()
    })
}

/// Random `m = 2, d = 1` form with a Riemann-compatible `(V, U)`.
pub fn riemann_instance() -> impl Strategy<Value = BilinearDecomposition> {
    (form(2, 1), structure(2)).prop_filter_map("no compatible U", |(a, v)| {
        let u = riemann_compatible_u(&a, &v)?;
        let dec = decompose(&a, &v, &u).ok()?;
        check_riemann(&dec).then_some(dec)
    })
}
