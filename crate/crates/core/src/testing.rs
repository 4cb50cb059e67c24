// Random inputs shared by the property tests.

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::sample::select;

use crate::exact_algebra::{IntegerMatrix, RootOfUnity};
use crate::seifert_knot::SeifertMatrix;

pub fn elementary_product(n: usize, ops: &[(usize, usize, i64)]) -> IntegerMatrix {
    let mut p = IntegerMatrix::identity(n);
    for &(i, j, c) in ops {
        let (i, j) = (i % n, j % n);
        if i == j {
            continue;
        }
        for col in 0..n {
            let v = &p[(j, col)] * BigInt::from(c);
            p[(i, col)] += v;
        }
    }
    p
}

/// Unimodular integer matrix built from elementary row operations.
pub fn unimodular(n: usize) -> impl Strategy<Value = IntegerMatrix> {
    prop::collection::vec((0..n.max(1), 0..n.max(1), -1i64..=1), 0..6).prop_map(move |ops| elementary_product(n, &ops))
}

/// Symmetric part with entries in [−2, 2] plus the standard symplectic part,
/// optionally moved by a unimodular congruence with entries kept in [−3, 3].
pub fn seifert(max_genus: usize) -> impl Strategy<Value = SeifertMatrix> {
    (1..=max_genus)
        .prop_flat_map(|g| {
            let n = 2 * g;
            (
                Just(n),
                prop::collection::vec(-2i64..=2, n * (n + 1) / 2),
                prop::collection::vec((0..n, 0..n, -1i64..=1), 0..4),
            )
        })
        .prop_filter_map("entries outside [-3, 3]", |(n, sym, ops)| {
            seifert_from_parts(n, &sym, &ops)
        })
}

pub fn seifert_from_parts(n: usize, sym: &[i64], ops: &[(usize, usize, i64)]) -> Option<SeifertMatrix> {
    let mut a = IntegerMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i..n {
            a[(i, j)] = BigInt::from(sym[k]);
            a[(j, i)] = BigInt::from(sym[k]);
            k += 1;
        }
    }
    for i in (0..n).step_by(2) {
        a[(i, i + 1)] += 1;
    }
    let p = elementary_product(n, ops);
    let a = p.transpose().mul(&a).mul(&p);
    if a.max_abs_entry() > BigInt::from(3) {
        return None;
    }
    SeifertMatrix::new(a).ok()
}

/// ω ≠ 1 of order d ∈ {2, 3, 4, 5, 6, 15}.
pub fn root() -> impl Strategy<Value = RootOfUnity> {
    select(vec![2u64, 3, 4, 5, 6, 15]).prop_flat_map(|d| (1..d as i64).prop_map(move |k| RootOfUnity::new(k, d)))
}

/// Nonsingular symmetric integer matrix of size ≤ 3 with |det| ≤ max_det.
pub fn symmetric_presentation(max_det: u64) -> impl Strategy<Value = IntegerMatrix> {
    (1usize..=3)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(-6i64..=6, n * (n + 1) / 2)))
        .prop_filter_map("singular or too large", move |(n, sym)| {
            let mut b = IntegerMatrix::zeros(n, n);
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    b[(i, j)] = BigInt::from(sym[k]);
                    b[(j, i)] = BigInt::from(sym[k]);
                    k += 1;
                }
            }
            let det = b.determinant();
            (det != BigInt::from(0) && det.magnitude() <= &max_det.into()).then_some(b)
        })
}

/// Σ c_k ζ^k with small integer c_k at a level in {3, 4, 5, 8}.
pub fn cyclotomic_matrix(max_n: usize) -> impl Strategy<Value = crate::exact_algebra::CycloMatrix> {
    use crate::exact_algebra::{CycloMatrix, CyclotomicScalar};
    (select(vec![3u64, 4, 5, 8]), 1..=max_n).prop_flat_map(|(d, n)| {
        prop::collection::vec(prop::collection::vec(-2i64..=2, d as usize), n * n).prop_map(move |cs| {
            let entries: Vec<CyclotomicScalar> = cs
                .iter()
                .map(|c| {
                    c.iter().enumerate().fold(CyclotomicScalar::zero(d), |acc, (k, &v)| {
                        &acc + &CyclotomicScalar::zeta_pow(d, k as i64).scale(&BigInt::from(v).into())
                    })
                })
                .collect();
            CycloMatrix::from_vec(n, n, entries)
        })
    })
}

/// C-complex data with μ ≤ 3 colors, one component per color and size ≤ 5.
pub fn ccomplex() -> impl Strategy<Value = crate::ccomplex_link::CComplexData> {
    use crate::ccomplex_link::{CComplexData, SignVector};
    (1usize..=3, 1usize..=5)
        .prop_flat_map(|(mu, n)| {
            let half = 1usize << (mu - 1);
            (
                Just(mu),
                Just(n),
                prop::collection::vec(prop::collection::vec(-2i64..=2, n * n), half),
            )
        })
        .prop_map(|(mu, n, mats)| {
            let positive: Vec<SignVector> = SignVector::all(mu).into_iter().filter(|e| e.signs()[0] > 0).collect();
            let mut matrices = std::collections::BTreeMap::new();
            for (eps, entries) in positive.into_iter().zip(mats) {
                let m = IntegerMatrix::from_vec(n, n, entries.into_iter().map(BigInt::from).collect());
                matrices.insert(eps.negated(), m.transpose());
                matrices.insert(eps, m);
            }
            CComplexData::new(mu, (0..mu).collect(), matrices).unwrap()
        })
}

/// Point of 𝕋^μ with coordinates ≠ 1.
pub fn point(mu: usize) -> impl Strategy<Value = Vec<RootOfUnity>> {
    prop::collection::vec(root(), mu)
}

/// Small knots with varied signature functions.
pub fn companion_pool() -> Vec<SeifertMatrix> {
    [
        vec![vec![-1, 1], vec![0, -1]],
        vec![vec![1, 0], vec![-1, 1]],
        vec![vec![0, 1], vec![2, 0]],
        vec![vec![1, 1], vec![0, -1]],
        vec![
            vec![-1, 1, 0, 0],
            vec![0, -1, 1, 0],
            vec![0, 0, -1, 1],
            vec![0, 0, 0, -1],
        ],
    ]
    .iter()
    .map(|rows| SeifertMatrix::from_rows(rows).unwrap())
    .collect()
}
