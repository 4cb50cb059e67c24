//! Multivariable signatures and nullities of colored links from C-complex data.
//!
//! For ω = (ω_1, …, ω_μ) the Hermitian matrix is
//! H(ω) = Σ_ε ∏_i (1 − ω̄_i^{ε_i}) A^ε, where ω̄_i^{+1} = conj(ω_i) and ω̄_i^{−1} = ω_i.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::exact_algebra::{
    hermitian_signature_with, CycloMatrix, CyclotomicScalar, HermitianForm, IntegerMatrix, Rational, RootOfUnity,
    DEFAULT_PRECISION_BITS,
};
use crate::seifert_knot::SeifertMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CComplexError {
    #[error("evaluation point has a coordinate equal to 1")]
    OmegaIsOne,
    #[error("malformed C-complex: {0}")]
    Malformed(String),
    #[error("evaluation point has {got} coordinates, expected {expected}")]
    PointDimension { expected: usize, got: usize },
}

/// A vector ε ∈ {±1}^μ, written as a string such as `"++-"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Self {
        assert!(signs.iter().all(|s| *s == 1 || *s == -1), "signs must be ±1");
        Self(signs)
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }

    /// All 2^μ sign vectors in lexicographic order.
    pub fn all(mu: usize) -> Vec<Self> {
        (0..1usize << mu)
            .map(|bits| {
                Self(
                    (0..mu)
                        .map(|i| if bits >> (mu - 1 - i) & 1 == 0 { 1 } else { -1 })
                        .collect(),
                )
            })
            .collect()
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", if *s > 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = CComplexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(CComplexError::Malformed(format!("bad sign string `{s}`"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

/// Generalized Seifert matrices of a C-complex for a μ-colored link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CComplexData {
    num_colors: usize,
    color_of_component: Vec<usize>,
    matrices: BTreeMap<SignVector, IntegerMatrix>,
}

impl CComplexData {
    /// Validates coloring and matrix family. Colors are 0-based.
    pub fn new(
        num_colors: usize,
        color_of_component: Vec<usize>,
        matrices: BTreeMap<SignVector, IntegerMatrix>,
    ) -> Result<Self, CComplexError> {
        let bad = |m: String| Err(CComplexError::Malformed(m));
        if num_colors == 0 {
            return bad("at least one color is required".into());
        }
        if color_of_component.len() < num_colors {
            return bad(format!(
                "{} components cannot carry {} colors",
                color_of_component.len(),
                num_colors
            ));
        }
        for c in 0..num_colors {
            if !color_of_component.contains(&c) {
                return bad(format!("color {} is used by no component", c + 1));
            }
        }
        if let Some(c) = color_of_component.iter().find(|&&c| c >= num_colors) {
            return bad(format!("component color {} exceeds {}", c + 1, num_colors));
        }
        if matrices.len() != 1 << num_colors {
            return bad(format!(
                "expected {} sign vectors, found {}",
                1usize << num_colors,
                matrices.len()
            ));
        }
        let size = matrices.values().next().map_or(0, IntegerMatrix::rows);
        for (eps, m) in &matrices {
            if eps.signs().len() != num_colors {
                return bad(format!("sign vector {eps} has wrong length"));
            }
            if !m.is_square() || m.rows() != size {
                return bad(format!("matrix for {eps} is not {size}x{size}"));
            }
            match matrices.get(&eps.negated()) {
                Some(opp) if *opp == m.transpose() => {}
                _ => return bad(format!("A^{} is not the transpose of A^{eps}", eps.negated())),
            }
        }
        Ok(Self {
            num_colors,
            color_of_component,
            matrices,
        })
    }

    /// Rejects inputs claiming a disconnected surface of some color.
    pub fn check_surface_components(&self, counts: &[usize]) -> Result<(), CComplexError> {
        if counts.len() != self.num_colors {
            return Err(CComplexError::Malformed(format!(
                "{} surface counts for {} colors",
                counts.len(),
                self.num_colors
            )));
        }
        match counts.iter().position(|&c| c != 1) {
            Some(i) => Err(CComplexError::Malformed(format!(
                "surface of color {} has {} components; connected surfaces are required",
                i + 1,
                counts[i]
            ))),
            None => Ok(()),
        }
    }

    /// One-color data A^+ = A, A^- = Aᵀ of a knot.
    pub fn from_seifert(s: &SeifertMatrix) -> Self {
        let a = s.matrix().clone();
        let matrices = BTreeMap::from([(SignVector(vec![1]), a.clone()), (SignVector(vec![-1]), a.transpose())]);
        Self {
            num_colors: 1,
            color_of_component: vec![0],
            matrices,
        }
    }

    /// Same matrix for every sign vector; it must then be symmetric.
    pub fn constant(
        num_colors: usize,
        color_of_component: Vec<usize>,
        a: IntegerMatrix,
    ) -> Result<Self, CComplexError> {
        let matrices = SignVector::all(num_colors)
            .into_iter()
            .map(|e| (e, a.clone()))
            .collect();
        Self::new(num_colors, color_of_component, matrices)
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn num_components(&self) -> usize {
        self.color_of_component.len()
    }

    pub fn color_of_component(&self) -> &[usize] {
        &self.color_of_component
    }

    pub fn size(&self) -> usize {
        self.matrices.values().next().map_or(0, IntegerMatrix::rows)
    }

    pub fn matrices(&self) -> &BTreeMap<SignVector, IntegerMatrix> {
        &self.matrices
    }

    /// Applies A^ε ↦ PᵀA^εP to every matrix.
    pub fn congruent(&self, p: &IntegerMatrix) -> Self {
        let pt = p.transpose();
        Self {
            num_colors: self.num_colors,
            color_of_component: self.color_of_component.clone(),
            matrices: self
                .matrices
                .iter()
                .map(|(e, m)| (e.clone(), pt.mul(m).mul(p)))
                .collect(),
        }
    }
}

/// Signature and corrected nullity of a colored link at one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LinkSignature {
    pub sigma: i64,
    pub eta: usize,
}

pub fn build_hermitian(cc: &CComplexData, omega: &[RootOfUnity]) -> Result<HermitianForm, CComplexError> {
    if omega.len() != cc.num_colors {
        return Err(CComplexError::PointDimension {
            expected: cc.num_colors,
            got: omega.len(),
        });
    }
    if omega.iter().any(RootOfUnity::is_one) {
        return Err(CComplexError::OmegaIsOne);
    }
    let level = omega.iter().fold(1u64, |l, w| num_integer::lcm(l, w.order()));
    let one = CyclotomicScalar::one(level);
    let n = cc.size();
    let mut h = CycloMatrix::from_fn(n, n, |_, _| CyclotomicScalar::zero(level));
    for (eps, a) in &cc.matrices {
        let mut coef = one.clone();
        for (w, &s) in omega.iter().zip(eps.signs()) {
            let wbar_pow = if s > 0 { w.conj() } else { *w };
            coef = &coef * &(&one - &wbar_pow.to_scalar().lift_to(level));
        }
        for i in 0..n {
            for j in 0..n {
                if !num_traits::Zero::is_zero(&a[(i, j)]) {
                    let t = coef.scale(&Rational::from_integer(a[(i, j)].clone()));
                    h[(i, j)] = &h[(i, j)] + &t;
                }
            }
        }
    }
    Ok(HermitianForm::new(h).expect("C-complex form is Hermitian for valid data"))
}

pub fn multivariable_signature_nullity(
    cc: &CComplexData,
    omega: &[RootOfUnity],
) -> Result<LinkSignature, CComplexError> {
    multivariable_signature_nullity_with(cc, omega, DEFAULT_PRECISION_BITS)
}

/// σ_L(ω) and η_L(ω) = nullity of H(ω) + (μ − 1).
pub fn multivariable_signature_nullity_with(
    cc: &CComplexData,
    omega: &[RootOfUnity],
    start_bits: u32,
) -> Result<LinkSignature, CComplexError> {
    let h = build_hermitian(cc, omega)?;
    let r = hermitian_signature_with(&h, start_bits);
    Ok(LinkSignature {
        sigma: r.signature,
        eta: r.nullity + cc.num_colors - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn six_component() -> CComplexData {
        CComplexData::constant(
            3,
            vec![0, 0, 1, 1, 2, 2],
            IntegerMatrix::from_rows(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]]),
        )
        .unwrap()
    }

    #[test]
    fn sign_vectors() {
        let all = SignVector::all(2);
        let names: Vec<String> = all.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["++", "+-", "-+", "--"]);
        assert_eq!("+-".parse::<SignVector>().unwrap().negated().to_string(), "-+");
        assert!("+x".parse::<SignVector>().is_err());
    }

    #[test]
    fn trefoil_form() {
        let s = SeifertMatrix::from_rows(&[[-1, 1], [0, -1]]).unwrap();
        let h = build_hermitian(&CComplexData::from_seifert(&s), &[RootOfUnity::minus_one()]).unwrap();
        assert_eq!(
            *h.entries(),
            IntegerMatrix::from_rows(&[[-4, 2], [2, -4]]).to_cyclotomic(2)
        );
        let r = multivariable_signature_nullity(&CComplexData::from_seifert(&s), &[RootOfUnity::minus_one()]).unwrap();
        assert_eq!(r, LinkSignature { sigma: -2, eta: 0 });
    }

    #[test]
    fn six_component_values() {
        let cc = six_component();
        let m1 = RootOfUnity::minus_one();
        let h = build_hermitian(&cc, &[m1; 3]).unwrap();
        assert_eq!(
            *h.entries(),
            IntegerMatrix::from_rows(&[[0, 64, 64], [64, 0, 64], [64, 64, 0]]).to_cyclotomic(2)
        );
        assert_eq!(
            multivariable_signature_nullity(&cc, &[m1; 3]).unwrap(),
            LinkSignature { sigma: -1, eta: 2 }
        );
    }

    #[test]
    fn unknot_and_errors() {
        let cc = CComplexData::from_seifert(&SeifertMatrix::unknot());
        assert_eq!(
            multivariable_signature_nullity(&cc, &[RootOfUnity::minus_one()]).unwrap(),
            LinkSignature { sigma: 0, eta: 0 }
        );
        assert_eq!(
            build_hermitian(&cc, &[RootOfUnity::one()]),
            Err(CComplexError::OmegaIsOne)
        );
        assert!(matches!(
            build_hermitian(&cc, &[]),
            Err(CComplexError::PointDimension { .. })
        ));
    }

    #[test]
    fn malformed_inputs() {
        let a = IntegerMatrix::from_rows(&[[0, 1], [2, 0]]);
        assert!(CComplexData::constant(1, vec![0], a.clone()).is_err());
        let ok = IntegerMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert!(CComplexData::constant(2, vec![0, 0], ok.clone()).is_err());
        assert!(CComplexData::constant(2, vec![0, 2], ok.clone()).is_err());
        let mut m = BTreeMap::new();
        m.insert(SignVector::new(vec![1]), a.clone());
        assert!(CComplexData::new(1, vec![0], m).is_err());
        let cc = six_component();
        assert!(cc.check_surface_components(&[1, 1, 1]).is_ok());
        assert!(cc.check_surface_components(&[1, 2, 1]).is_err());
    }
}
