//! Invariants of a knot computed from one of its Seifert matrices.
//!
//! Conventions: Δ(t) ≐ det(A − tAᵀ) and the Levine–Tristram form at ω is
//! (1 − ω̄)A + (1 − ω)Aᵀ, so the right-handed trefoil [[−1, 1], [0, −1]] has
//! signature −2 at ω = −1.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact_algebra::{
    hermitian_signature_with, CycloMatrix, CyclotomicScalar, HermitianForm, IntegerMatrix, Rational, RootOfUnity,
    SignatureResult, DEFAULT_PRECISION_BITS,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeifertError {
    #[error("Seifert matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("Seifert matrix must have even size, got {0}")]
    OddSize(usize),
    #[error("det(A - A^T) = {det}, expected 1")]
    NotUnimodular { det: BigInt },
    #[error("evaluation point must differ from 1")]
    OmegaIsOne,
    #[error("mod 2 intersection pairing is degenerate")]
    DegeneratePairing,
    #[error("Arf invariant is 1, so no symplectic basis with q(e_i) = 0 exists")]
    ArfNonzero,
}

/// Square integer matrix A of even size with det(A − Aᵀ) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeifertMatrix {
    a: IntegerMatrix,
}

impl SeifertMatrix {
    pub fn new(a: IntegerMatrix) -> Result<Self, SeifertError> {
        if !a.is_square() {
            return Err(SeifertError::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        if !a.rows().is_multiple_of(2) {
            return Err(SeifertError::OddSize(a.rows()));
        }
        let det = a.sub(&a.transpose()).determinant();
        if !det.is_one() {
            return Err(SeifertError::NotUnimodular { det });
        }
        Ok(Self { a })
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, SeifertError> {
        Self::new(IntegerMatrix::from_rows(rows))
    }

    pub fn unknot() -> Self {
        Self {
            a: IntegerMatrix::zeros(0, 0),
        }
    }

    pub fn matrix(&self) -> &IntegerMatrix {
        &self.a
    }

    pub fn size(&self) -> usize {
        self.a.rows()
    }

    /// Genus of the surface the matrix comes from.
    pub fn genus(&self) -> usize {
        self.size() / 2
    }

    /// Seifert matrix of the connected sum.
    pub fn connected_sum(&self, other: &Self) -> Self {
        Self {
            a: IntegerMatrix::block_diag(&[self.a.clone(), other.a.clone()], BigInt::zero()),
        }
    }

    /// Seifert matrix of the mirror image, −Aᵀ.
    pub fn mirror(&self) -> Self {
        Self {
            a: self.a.transpose().neg(),
        }
    }

    /// Symmetrization A + Aᵀ, which presents the linking form of the double branched cover.
    pub fn symmetrized(&self) -> IntegerMatrix {
        self.a.add(&self.a.transpose())
    }
}

/// Integer Laurent polynomial normalized to lowest exponent 0 and positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    /// Normalizes a coefficient list given lowest degree first.
    pub fn normalized(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(coeffs.len());
        coeffs.drain(..lead);
        if coeffs.last().is_some_and(Signed::is_negative) {
            coeffs.iter_mut().for_each(|c| *c = -&*c);
        }
        Self { coeffs }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coefficient(&self, exponent: i64) -> BigInt {
        usize::try_from(exponent)
            .ok()
            .and_then(|e| self.coeffs.get(e).cloned())
            .unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval_int(&self, t: i64) -> BigInt {
        let t = BigInt::from(t);
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * &t + c)
    }

    pub fn eval(&self, t: &CyclotomicScalar) -> CyclotomicScalar {
        let mut acc = CyclotomicScalar::zero(t.level());
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * t) + &CyclotomicScalar::from_rational(t.level(), Rational::from_integer(c.clone()));
        }
        acc
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            if e == 0 || !abs.is_one() {
                write!(f, "{abs}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// det(A − tAᵀ), recovered by interpolation through t = 0, …, n.
pub fn alexander_polynomial(s: &SeifertMatrix) -> LaurentPoly {
    let a = s.matrix();
    let n = a.rows();
    if n == 0 {
        return LaurentPoly::normalized(vec![BigInt::one()]);
    }
    let at = a.transpose();
    let values: Vec<BigInt> = (0..=n as i64)
        .map(|t| a.sub(&at.map(|x| x * t)).determinant())
        .collect();
    // Lagrange interpolation in the monomial basis.
    let mut coeffs = vec![Rational::zero(); n + 1];
    for (i, yi) in values.iter().enumerate() {
        let mut basis = vec![Rational::one()];
        let mut denom = BigInt::one();
        for j in 0..=n {
            if j == i {
                continue;
            }
            let mut next = vec![Rational::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * BigInt::from(j);
            }
            basis = next;
            denom *= BigInt::from(i as i64 - j as i64);
        }
        let scale = Rational::new(yi.clone(), denom);
        for (k, b) in basis.iter().enumerate() {
            coeffs[k] += b * &scale;
        }
    }
    let coeffs = coeffs
        .into_iter()
        .map(|c| {
            debug_assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    LaurentPoly::normalized(coeffs)
}

/// The Hermitian matrix (1 − ω̄)A + (1 − ω)Aᵀ.
pub fn lt_form(s: &SeifertMatrix, omega: &RootOfUnity) -> Result<HermitianForm, SeifertError> {
    if omega.is_one() {
        return Err(SeifertError::OmegaIsOne);
    }
    let d = omega.order();
    let one = CyclotomicScalar::one(d);
    let w = omega.to_scalar();
    let c1 = &one - &w.conj();
    let c2 = &one - &w;
    let a = s.matrix();
    let m = CycloMatrix::from_fn(a.rows(), a.cols(), |i, j| {
        &c1.scale(&Rational::from_integer(a[(i, j)].clone())) + &c2.scale(&Rational::from_integer(a[(j, i)].clone()))
    });
    Ok(HermitianForm::new(m).expect("Levine-Tristram form is Hermitian by construction"))
}

/// Levine–Tristram signature and nullity at a root of unity ω ≠ 1.
pub fn lt_signature_nullity(s: &SeifertMatrix, omega: &RootOfUnity) -> Result<SignatureResult, SeifertError> {
    lt_signature_nullity_with(s, omega, DEFAULT_PRECISION_BITS)
}

pub fn lt_signature_nullity_with(
    s: &SeifertMatrix,
    omega: &RootOfUnity,
    start_bits: u32,
) -> Result<SignatureResult, SeifertError> {
    let h = lt_form(s, omega)?;
    Ok(hermitian_signature_with(&h, start_bits))
}

/// Vector over Z/2, one byte per coordinate.
pub type Z2Vector = Vec<u8>;

/// The form q(x) = xᵀAx mod 2 refining the pairing (A + Aᵀ) mod 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticRefinement {
    a: Vec<Vec<u8>>,
    pairing: Vec<Vec<u8>>,
}

impl QuadraticRefinement {
    pub fn new(a: &IntegerMatrix) -> Result<Self, SeifertError> {
        let n = a.rows();
        let two = BigInt::from(2);
        let m: Vec<Vec<u8>> = (0..n)
            .map(|i| {
                (0..a.cols())
                    .map(|j| (&a[(i, j)] % &two).abs().to_u8().unwrap())
                    .collect()
            })
            .collect();
        if !a.is_square() {
            return Err(SeifertError::NotSquare {
                rows: n,
                cols: a.cols(),
            });
        }
        let pairing: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| m[i][j] ^ m[j][i]).collect()).collect();
        if rank_mod2(&pairing) != n {
            return Err(SeifertError::DegeneratePairing);
        }
        Ok(Self { a: m, pairing })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn q(&self, x: &[u8]) -> u8 {
        let mut s = 0u8;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &xj) in x.iter().enumerate() {
                s ^= self.a[i][j] & xj;
            }
        }
        s
    }

    pub fn pair(&self, x: &[u8], y: &[u8]) -> u8 {
        let mut s = 0u8;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                s ^= self.pairing[i][j] & yj;
            }
        }
        s
    }

    /// Some symplectic basis of the pairing, as pairs (e_i, f_i).
    pub fn symplectic_basis(&self) -> Vec<(Z2Vector, Z2Vector)> {
        let n = self.dim();
        let mut pool: Vec<Z2Vector> = (0..n).map(|i| (0..n).map(|j| u8::from(i == j)).collect()).collect();
        let mut pairs = Vec::with_capacity(n / 2);
        while let Some(e) = pool.pop() {
            let k = pool
                .iter()
                .position(|v| self.pair(&e, v) == 1)
                .expect("pairing restricted to the complement stays nondegenerate");
            let f = pool.swap_remove(k);
            for w in pool.iter_mut() {
                let (we, wf) = (self.pair(w, &e), self.pair(w, &f));
                for i in 0..n {
                    w[i] ^= (wf & e[i]) ^ (we & f[i]);
                }
            }
            pairs.push((e, f));
        }
        pairs
    }

    pub fn arf(&self) -> u8 {
        self.symplectic_basis()
            .iter()
            .fold(0, |acc, (e, f)| acc ^ (self.q(e) & self.q(f)))
    }
}

fn rank_mod2(m: &[Vec<u8>]) -> usize {
    let mut rows: Vec<Vec<u8>> = m.to_vec();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c] == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] == 1 {
                for k in 0..cols {
                    rows[r][k] ^= rows[rank][k];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Arf invariant of the Seifert quadratic refinement.
pub fn arf(s: &SeifertMatrix) -> Result<u8, SeifertError> {
    Ok(QuadraticRefinement::new(s.matrix())?.arf())
}

/// Arf invariant from Δ(−1) = det(A + Aᵀ): zero iff Δ(−1) ≡ ±1 mod 8.
pub fn arf_via_determinant(s: &SeifertMatrix) -> u8 {
    let r = (s.symmetrized().determinant().abs() % BigInt::from(8)).to_u8().unwrap();
    u8::from(!matches!(r, 1 | 7))
}

/// Symplectic basis {e_i, f_i} of the mod 2 pairing with q(e_i) = 0 for every i.
pub fn symplectic_basis_null_e(s: &SeifertMatrix) -> Result<Vec<(Z2Vector, Z2Vector)>, SeifertError> {
    let qr = QuadraticRefinement::new(s.matrix())?;
    let mut pairs = qr.symplectic_basis();
    for p in pairs.iter_mut() {
        if qr.q(&p.0) == 1 && qr.q(&p.1) == 0 {
            std::mem::swap(&mut p.0, &mut p.1);
        }
    }
    let bad: Vec<usize> = (0..pairs.len()).filter(|&i| qr.q(&pairs[i].0) == 1).collect();
    if bad.len() % 2 == 1 {
        return Err(SeifertError::ArfNonzero);
    }
    // Two pairs with q = 1 everywhere become (e1 + e2, f1), (f1 + f2, e2).
    for two in bad.chunks(2) {
        let (i, j) = (two[0], two[1]);
        let (e1, f1) = pairs[i].clone();
        let (e2, f2) = pairs[j].clone();
        let sum = |x: &Z2Vector, y: &Z2Vector| -> Z2Vector { x.iter().zip(y).map(|(a, b)| a ^ b).collect() };
        pairs[i] = (sum(&e1, &e2), f1.clone());
        pairs[j] = (sum(&f1, &f2), e2);
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trefoil() -> SeifertMatrix {
        SeifertMatrix::from_rows(&[[-1, 1], [0, -1]]).unwrap()
    }

    fn knot_946() -> SeifertMatrix {
        SeifertMatrix::from_rows(&[[0, 1], [2, 0]]).unwrap()
    }

    fn coeffs(p: &LaurentPoly) -> Vec<i64> {
        p.coefficients().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn validation() {
        assert!(matches!(
            SeifertMatrix::from_rows(&[[1, 0], [0, 1]]),
            Err(SeifertError::NotUnimodular { .. })
        ));
        assert!(matches!(
            SeifertMatrix::from_rows(&[[1]]),
            Err(SeifertError::OddSize(1))
        ));
    }

    #[test]
    fn alexander_examples() {
        assert_eq!(coeffs(&alexander_polynomial(&SeifertMatrix::unknot())), vec![1]);
        let p = alexander_polynomial(&knot_946());
        assert_eq!(coeffs(&p), vec![2, -5, 2]);
        assert_eq!(p.to_string(), "2t^2 - 5t + 2");
        assert_eq!(coeffs(&alexander_polynomial(&trefoil())), vec![1, -1, 1]);
        assert_eq!(p.eval_int(-1), BigInt::from(9));
    }

    #[test]
    fn lt_examples() {
        let m1 = RootOfUnity::minus_one();
        let r = lt_signature_nullity(&trefoil(), &m1).unwrap();
        assert_eq!((r.signature, r.nullity), (-2, 0));
        let r = lt_signature_nullity(&SeifertMatrix::unknot(), &RootOfUnity::new(1, 5)).unwrap();
        assert_eq!((r.signature, r.nullity), (0, 0));
        let r = lt_signature_nullity(&knot_946(), &m1).unwrap();
        assert_eq!((r.signature, r.nullity), (0, 0));
        assert_eq!(
            lt_signature_nullity(&trefoil(), &RootOfUnity::one()),
            Err(SeifertError::OmegaIsOne)
        );
    }

    #[test]
    fn trefoil_signature_function() {
        // Jumps at the roots e^{±2πi/6} of t² − t + 1.
        for (k, d, sig, null) in [
            (1, 12, 0, 0),
            (1, 6, -1, 1),
            (1, 3, -2, 0),
            (1, 2, -2, 0),
            (5, 6, -1, 1),
        ] {
            let r = lt_signature_nullity(&trefoil(), &RootOfUnity::new(k, d)).unwrap();
            assert_eq!((r.signature, r.nullity), (sig, null), "{k}/{d}");
        }
    }

    #[test]
    fn arf_examples() {
        assert_eq!(arf(&SeifertMatrix::unknot()), Ok(0));
        assert_eq!(arf(&trefoil()), Ok(1));
        assert_eq!(arf(&knot_946()), Ok(0));
        assert_eq!(arf_via_determinant(&trefoil()), 1);
        assert_eq!(arf_via_determinant(&knot_946()), 0);
        assert_eq!(arf_via_determinant(&SeifertMatrix::unknot()), 0);
    }

    #[test]
    fn null_bases() {
        assert_eq!(symplectic_basis_null_e(&SeifertMatrix::unknot()), Ok(vec![]));
        let b = symplectic_basis_null_e(&knot_946()).unwrap();
        let qr = QuadraticRefinement::new(knot_946().matrix()).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(qr.q(&b[0].0), 0);
        assert_eq!(qr.pair(&b[0].0, &b[0].1), 1);
        let fig8 = SeifertMatrix::from_rows(&[[1, 1], [0, -1]]).unwrap();
        assert_eq!(symplectic_basis_null_e(&fig8), Err(SeifertError::ArfNonzero));
        // Two trefoils: both pairs have q = 1 on e and f.
        let tt = trefoil().connected_sum(&trefoil());
        let b = symplectic_basis_null_e(&tt).unwrap();
        let qr = QuadraticRefinement::new(tt.matrix()).unwrap();
        for (i, (e, f)) in b.iter().enumerate() {
            assert_eq!(qr.q(e), 0);
            for (j, (e2, f2)) in b.iter().enumerate() {
                assert_eq!(qr.pair(e, f2), u8::from(i == j));
                assert_eq!(qr.pair(e, e2), 0);
                assert_eq!(qr.pair(f, f2), 0);
            }
        }
    }

    #[test]
    fn mirror_flips_signature() {
        let left = trefoil().mirror();
        let r = lt_signature_nullity(&left, &RootOfUnity::new(1, 3)).unwrap();
        assert_eq!((r.signature, r.nullity), (2, 0));
    }
}

#[cfg(test)]
mod properties {
    use super::*;
    use crate::testing::{root, seifert, unimodular};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn conjugate_root_gives_same_values(s in seifert(3), w in root()) {
            prop_assert_eq!(
                lt_signature_nullity(&s, &w).unwrap(),
                lt_signature_nullity(&s, &w.conj()).unwrap()
            );
        }

        #[test]
        fn arf_matches_determinant(s in seifert(4)) {
            prop_assert_eq!(arf(&s).unwrap(), arf_via_determinant(&s));
        }

        #[test]
        fn arf_congruence_invariant(s in seifert(3), p in (1usize..=3).prop_flat_map(|g| unimodular(2 * g))) {
            prop_assume!(p.rows() == s.size());
            let moved = SeifertMatrix::new(p.transpose().mul(s.matrix()).mul(&p)).unwrap();
            prop_assert_eq!(arf(&moved).unwrap(), arf(&s).unwrap());
        }

        #[test]
        fn null_e_basis_postconditions(s in seifert(4)) {
            let qr = QuadraticRefinement::new(s.matrix()).unwrap();
            match symplectic_basis_null_e(&s) {
                Err(SeifertError::ArfNonzero) => prop_assert_eq!(qr.arf(), 1),
                Err(e) => prop_assert!(false, "unexpected error {e}"),
                Ok(pairs) => {
                    prop_assert_eq!(qr.arf(), 0);
                    prop_assert_eq!(pairs.len(), s.genus());
                    for (i, (ei, fi)) in pairs.iter().enumerate() {
                        prop_assert_eq!(qr.q(ei), 0);
                        for (j, (ej, fj)) in pairs.iter().enumerate() {
                            prop_assert_eq!(qr.pair(ei, fj), u8::from(i == j));
                            prop_assert_eq!(qr.pair(ei, ej), 0);
                            prop_assert_eq!(qr.pair(fi, fj), 0);
                        }
                    }
                }
            }
        }

        #[test]
        fn nullity_vanishes_off_alexander_roots(s in seifert(3), w in root()) {
            let delta = alexander_polynomial(&s).eval(&w.to_scalar());
            let r = lt_signature_nullity(&s, &w).unwrap();
            if !delta.is_zero() {
                prop_assert_eq!(r.nullity, 0);
            }
        }
    }
}
