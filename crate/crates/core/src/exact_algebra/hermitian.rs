use std::fmt;

use num_integer::Integer;

use super::interval::{certified_sign_with, DEFAULT_PRECISION_BITS};
use super::{AlgebraError, CycloMatrix, CyclotomicScalar};

/// Square matrix over Q(ζ_d) equal to its conjugate transpose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianForm {
    level: u64,
    entries: CycloMatrix,
}

impl HermitianForm {
    /// Lifts all entries to a common level and checks the Hermitian condition exactly.
    pub fn new(entries: CycloMatrix) -> Result<Self, AlgebraError> {
        if !entries.is_square() {
            return Err(AlgebraError::NotSquare {
                rows: entries.rows(),
                cols: entries.cols(),
            });
        }
        let n = entries.rows();
        let mut level = 1;
        for i in 0..n {
            for j in 0..n {
                level = level.lcm(&entries[(i, j)].level());
            }
        }
        let entries = entries.map(|x| x.lift_to(level));
        for i in 0..n {
            for j in i..n {
                if entries[(j, i)] != entries[(i, j)].conj() {
                    return Err(AlgebraError::NotHermitian { row: i, col: j });
                }
            }
        }
        Ok(Self { level, entries })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &CycloMatrix {
        &self.entries
    }
}

/// Signature and nullity of a Hermitian form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignatureResult {
    pub signature: i64,
    pub nullity: usize,
    pub dim: usize,
}

impl SignatureResult {
    pub fn zero() -> Self {
        Self {
            signature: 0,
            nullity: 0,
            dim: 0,
        }
    }

    /// Checks |σ| + η ≤ dim and σ ≡ dim − η (mod 2).
    pub fn is_consistent(&self) -> bool {
        let rank = self.dim as i64 - self.nullity as i64;
        self.signature.unsigned_abs() as usize + self.nullity <= self.dim && (rank - self.signature).rem_euclid(2) == 0
    }
}

impl fmt::Display for SignatureResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sign {} null {} (dim {})", self.signature, self.nullity, self.dim)
    }
}

pub fn hermitian_signature(h: &HermitianForm) -> SignatureResult {
    hermitian_signature_with(h, DEFAULT_PRECISION_BITS)
}

/// Congruence diagonalization with certified pivot signs.
pub fn hermitian_signature_with(h: &HermitianForm, start_bits: u32) -> SignatureResult {
    let n = h.dim();
    let mut a: Vec<Vec<CyclotomicScalar>> = h.entries.to_rows();
    let mut active: Vec<usize> = (0..n).collect();
    let mut signature = 0i64;
    let mut rank = 0usize;

    while !active.is_empty() {
        if let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
            let p = active.remove(pos);
            let pivot = a[p][p].clone();
            signature +=
                i64::from(certified_sign_with(&pivot, start_bits).expect("diagonal of a Hermitian form is real"));
            rank += 1;
            let inv = pivot.inv().expect("pivot is nonzero");
            for &i in &active {
                if a[i][p].is_zero() {
                    continue;
                }
                let f = &a[i][p] * &inv;
                for &j in &active {
                    if !a[p][j].is_zero() {
                        let t = &f * &a[p][j];
                        a[i][j] = &a[i][j] - &t;
                    }
                }
            }
            continue;
        }
        let pair = active
            .iter()
            .enumerate()
            .find_map(|(s, &i)| active[s + 1..].iter().find(|&&j| !a[i][j].is_zero()).map(|&j| (i, j)));
        let Some((i, j)) = pair else { break };
        // Hyperbolic block [[0, b], [b̄, 0]] has signature 0 and inverse [[0, 1/b̄], [1/b, 0]].
        active.retain(|&k| k != i && k != j);
        rank += 2;
        let inv_b = a[i][j].inv().expect("nonzero coupling");
        let inv_bbar = a[j][i].inv().expect("nonzero coupling");
        for &k in &active {
            let (aki, akj) = (a[k][i].clone(), a[k][j].clone());
            if aki.is_zero() && akj.is_zero() {
                continue;
            }
            let left_i = &aki * &inv_bbar;
            let left_j = &akj * &inv_b;
            for &l in &active {
                let t = &(&left_i * &a[j][l]) + &(&left_j * &a[i][l]);
                if !t.is_zero() {
                    a[k][l] = &a[k][l] - &t;
                }
            }
        }
    }

    let result = SignatureResult {
        signature,
        nullity: n - rank,
        dim: n,
    };
    debug_assert_eq!(rank, rank_over_cyclotomic(h.entries()));
    debug_assert!(result.is_consistent());
    result
}

/// Exact rank by Gaussian elimination over Q(ζ_d).
pub fn rank_over_cyclotomic(m: &CycloMatrix) -> usize {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows(), m.cols());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][c].inv().expect("pivot is nonzero");
        for r in rank + 1..rows {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] * &inv;
            for k in c..cols {
                if !a[rank][k].is_zero() {
                    let t = &f * &a[rank][k];
                    a[r][k] = &a[r][k] - &t;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::IntegerMatrix;

    fn int_form(rows: &[&[i64]], level: u64) -> HermitianForm {
        HermitianForm::new(IntegerMatrix::from_rows(rows).to_cyclotomic(level)).unwrap()
    }

    #[test]
    fn spec_examples() {
        let r = hermitian_signature(&int_form(&[&[2]], 7));
        assert_eq!((r.signature, r.nullity), (1, 0));
        let r = hermitian_signature(&int_form(&[&[0, 1], &[1, 0]], 1));
        assert_eq!((r.signature, r.nullity), (0, 0));
        let r = hermitian_signature(&int_form(&[&[-4, 2], &[2, -4]], 2));
        assert_eq!((r.signature, r.nullity), (-2, 0));
    }

    #[test]
    fn degenerate_and_hyperbolic_mix() {
        let h = int_form(&[&[0, 1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, -3]], 1);
        assert_eq!(
            hermitian_signature(&h),
            SignatureResult {
                signature: -1,
                nullity: 1,
                dim: 4
            }
        );
        let h = int_form(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]], 1);
        assert_eq!(hermitian_signature(&h).signature, -1);
    }

    #[test]
    fn complex_entries() {
        // [[0, 1 - ζ3], [1 - ζ̄3, 0]] is hyperbolic.
        let one = CyclotomicScalar::one(3);
        let b = &one - &CyclotomicScalar::zeta(3);
        let zero = CyclotomicScalar::zero(3);
        let m = CycloMatrix::from_vec(2, 2, vec![zero.clone(), b.clone(), b.conj(), zero]);
        let r = hermitian_signature(&HermitianForm::new(m).unwrap());
        assert_eq!((r.signature, r.nullity), (0, 0));
    }

    #[test]
    fn rejects_non_hermitian() {
        let z = CyclotomicScalar::zeta(3);
        let m = CycloMatrix::from_vec(1, 1, vec![z]);
        assert!(matches!(HermitianForm::new(m), Err(AlgebraError::NotHermitian { .. })));
        let m = IntegerMatrix::from_rows(&[[0, 1], [2, 0]]).to_cyclotomic(1);
        assert!(HermitianForm::new(m).is_err());
    }

    #[test]
    fn ranks() {
        assert_eq!(rank_over_cyclotomic(&IntegerMatrix::zeros(3, 3).to_cyclotomic(1)), 0);
        assert_eq!(rank_over_cyclotomic(&IntegerMatrix::identity(4).to_cyclotomic(5)), 4);
        let one = CyclotomicScalar::one(3);
        let zero = CyclotomicScalar::zero(3);
        let m = CycloMatrix::from_vec(
            2,
            2,
            vec![&one - &CyclotomicScalar::zeta(3), zero.clone(), zero.clone(), zero],
        );
        assert_eq!(rank_over_cyclotomic(&m), 1);
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::exact_algebra::{certified_sign, smith_normal_form, IntegerMatrix};
    use crate::testing::cyclotomic_matrix;
    use num_traits::{Signed, Zero};
    use proptest::prelude::*;

    fn hermitian_part(b: &CycloMatrix) -> HermitianForm {
        let bs = b.conj_transpose();
        let n = b.rows();
        HermitianForm::new(CycloMatrix::from_fn(n, n, |i, j| &b[(i, j)] + &bs[(i, j)])).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn congruence_invariance(b in cyclotomic_matrix(4), seed in cyclotomic_matrix(4)) {
            let h = hermitian_part(&b);
            let n = h.dim();
            let d = seed.rows().min(n);
            // P: the seed's top-left block padded with the identity.
            let level = h.level();
            let p = CycloMatrix::from_fn(n, n, |i, j| {
                if i < d && j < d {
                    seed[(i, j)].clone()
                } else if i == j {
                    CyclotomicScalar::one(level)
                } else {
                    CyclotomicScalar::zero(level)
                }
            });
            prop_assume!(rank_over_cyclotomic(&p) == n);
            let moved = p.conj_transpose().mul(h.entries()).mul(&p);
            let moved = HermitianForm::new(moved).unwrap();
            prop_assert_eq!(hermitian_signature(&moved), hermitian_signature(&h));
        }

        #[test]
        fn opposite_signs(b in cyclotomic_matrix(1)) {
            let x = hermitian_part(&b).entries()[(0, 0)].clone();
            prop_assume!(!x.is_zero());
            let s = certified_sign(&x).unwrap();
            let t = certified_sign(&-&x).unwrap();
            prop_assert_eq!(s * t, -1);
        }

        #[test]
        fn snf_diagonal_product_is_det(rows in prop::collection::vec(prop::collection::vec(-9i64..=9, 4), 1..=4)) {
            let n = rows.len();
            let m = IntegerMatrix::from_rows(&rows.iter().map(|r| r[..n].to_vec()).collect::<Vec<_>>());
            let det = m.determinant();
            prop_assume!(!det.is_zero());
            let snf = smith_normal_form(&m);
            let prod = snf.diagonal().iter().fold(num_bigint::BigInt::from(1), |a, x| a * x);
            prop_assert_eq!(prod, det.abs());
            prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        }
    }
}
