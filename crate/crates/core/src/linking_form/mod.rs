//! Linking forms presented by nondegenerate symmetric integer matrices.
//!
//! The group is Zⁿ/BZⁿ, written in Smith coordinates: if UBV = D then x ↦ Ux
//! identifies it with ⊕ Z/d_i over the invariant factors d_i > 1. Enumerations
//! run independently on each primary part and are combined as direct products.

mod group;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub(crate) use group::{PairedGroup, SubgroupData};

use crate::exact_algebra::{prime_power_base, smith_normal_form, IntegerMatrix, Matrix, Rational, RootOfUnity};
use crate::seifert_knot::SeifertMatrix;

/// Default limit on the group order for subgroup enumeration.
pub const DEFAULT_ENUM_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinkingFormError {
    #[error("presentation matrix is not symmetric")]
    NotSymmetric,
    #[error("presentation matrix is singular")]
    DegenerateForm,
    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    GroupTooLarge { order: String, bound: u64 },
    #[error("vector has {got} coordinates, expected {expected}")]
    WrongLength { expected: usize, got: usize },
}

/// Element of the group in Smith coordinates, one residue per invariant factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Vec<u64>);

impl GroupElement {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A subgroup, listed by generators and by all of its elements in sorted order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    generators: Vec<GroupElement>,
    elements: Vec<GroupElement>,
}

impl Subgroup {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn generators(&self) -> &[GroupElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

/// Isotropic subgroup G with |G|² equal to the order of the ambient group.
pub type Metabolizer = Subgroup;

/// Orthogonal decomposition of the group into two nonsingular summands.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Splitting {
    pub beta1: Subgroup,
    pub beta2: Subgroup,
}

/// Character χ_x = λ(x, ·) identified with the group element x.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character {
    pub element: GroupElement,
    pub order: u64,
}

#[derive(Clone, Debug)]
pub(crate) struct PrimaryPart {
    pub p: u64,
    pub group: PairedGroup,
    // (factor index in the full group, multiplier d_i / p^{a_i})
    embedding: Vec<(usize, u64)>,
}

#[derive(Clone, Debug)]
pub struct LinkingForm {
    presentation: IntegerMatrix,
    b_inv: Matrix<Rational>,
    u: IntegerMatrix,
    factor_rows: Vec<usize>,
    invariant_factors: Vec<u64>,
    generators: Vec<Vec<BigInt>>,
    group: PairedGroup,
    enum_bound: u64,
}

impl LinkingForm {
    pub fn new(b: IntegerMatrix) -> Result<Self, LinkingFormError> {
        if !b.is_symmetric() {
            return Err(LinkingFormError::NotSymmetric);
        }
        let det = b.determinant();
        if det.is_zero() {
            return Err(LinkingFormError::DegenerateForm);
        }
        if det.abs() > BigInt::from(1u64 << 62) {
            return Err(LinkingFormError::GroupTooLarge {
                order: det.abs().to_string(),
                bound: 1 << 62,
            });
        }
        let n = b.rows();
        let snf = smith_normal_form(&b);
        let diag = snf.diagonal();
        let factor_rows: Vec<usize> = (0..n).filter(|&i| diag[i] > BigInt::one()).collect();
        let invariant_factors: Vec<u64> = factor_rows
            .iter()
            .map(|&i| diag[i].to_u64().expect("bounded by |det|"))
            .collect();
        let u_inv = snf
            .u
            .to_rational()
            .inverse()
            .expect("unimodular")
            .map(|x| x.to_integer());
        let generators: Vec<Vec<BigInt>> = factor_rows
            .iter()
            .map(|&i| (0..n).map(|r| u_inv[(r, i)].clone()).collect())
            .collect();
        let b_inv = b.to_rational().inverse().expect("nonsingular");
        let exponent = invariant_factors.last().copied().unwrap_or(1);
        let gram: Vec<Vec<u64>> = generators
            .iter()
            .map(|gi| {
                generators
                    .iter()
                    .map(|gj| residue(&bilinear(&b_inv, gi, gj), exponent))
                    .collect()
            })
            .collect();
        let group = PairedGroup::new(invariant_factors.clone(), exponent, gram);
        Ok(Self {
            presentation: b,
            b_inv,
            u: snf.u,
            factor_rows,
            invariant_factors,
            generators,
            group,
            enum_bound: DEFAULT_ENUM_BOUND,
        })
    }

    /// Form presented by A + Aᵀ.
    pub fn from_seifert(s: &SeifertMatrix) -> Result<Self, LinkingFormError> {
        Self::new(s.symmetrized())
    }

    pub fn with_enum_bound(mut self, bound: u64) -> Self {
        self.enum_bound = bound;
        self
    }

    pub fn enum_bound(&self) -> u64 {
        self.enum_bound
    }

    pub fn presentation(&self) -> &IntegerMatrix {
        &self.presentation
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> u64 {
        self.group.size()
    }

    pub fn exponent(&self) -> u64 {
        self.group.exponent()
    }

    /// Smallest number of generators of the group.
    pub fn min_generators(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Representatives in the original coordinates of the Smith generators.
    pub fn generator_vectors(&self) -> &[Vec<BigInt>] {
        &self.generators
    }

    pub fn element_from_vector(&self, x: &[BigInt]) -> Result<GroupElement, LinkingFormError> {
        let n = self.presentation.rows();
        if x.len() != n {
            return Err(LinkingFormError::WrongLength {
                expected: n,
                got: x.len(),
            });
        }
        let s = self.u.mul_vec(x);
        Ok(GroupElement(
            self.factor_rows
                .iter()
                .zip(&self.invariant_factors)
                .map(|(&i, &d)| s[i].mod_floor(&BigInt::from(d)).to_u64().unwrap())
                .collect(),
        ))
    }

    pub fn element_from_i64(&self, x: &[i64]) -> Result<GroupElement, LinkingFormError> {
        let v: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
        self.element_from_vector(&v)
    }

    /// Image of the i-th standard basis vector of Zⁿ.
    pub fn basis_element(&self, i: usize) -> GroupElement {
        let n = self.presentation.rows();
        let v: Vec<BigInt> = (0..n).map(|j| BigInt::from(u8::from(i == j))).collect();
        self.element_from_vector(&v).expect("length matches")
    }

    /// A vector in the original coordinates representing `x`.
    pub fn element_to_vector(&self, x: &GroupElement) -> Vec<BigInt> {
        let n = self.presentation.rows();
        let mut v = vec![BigInt::zero(); n];
        for (c, g) in x.0.iter().zip(&self.generators) {
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += gi * BigInt::from(*c);
            }
        }
        v
    }

    /// xᵀB⁻¹y mod 1 for integer vectors in the original coordinates.
    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> Rational {
        frac(&bilinear(&self.b_inv, x, y))
    }

    pub fn pair_i64(&self, x: &[i64], y: &[i64]) -> Rational {
        let x: Vec<BigInt> = x.iter().map(|&c| c.into()).collect();
        let y: Vec<BigInt> = y.iter().map(|&c| c.into()).collect();
        self.pair(&x, &y)
    }

    /// Pairing of two group elements as an element of Q/Z.
    pub fn pair_elements(&self, a: &GroupElement, b: &GroupElement) -> RootOfUnity {
        let num = self.group.pair(self.index_of(a), self.index_of(b));
        RootOfUnity::new(num as i64, self.group.exponent())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.element_at(self.group.add(self.index_of(a), self.index_of(b)))
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.element_at(self.group.neg(self.index_of(a)))
    }

    pub fn element_order(&self, a: &GroupElement) -> u64 {
        self.group.element_order(self.index_of(a))
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.invariant_factors.len()])
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.group.size()).map(|i| self.element_at(i))
    }

    pub(crate) fn index_of(&self, a: &GroupElement) -> u64 {
        self.group.index(&a.0)
    }

    pub(crate) fn element_at(&self, i: u64) -> GroupElement {
        GroupElement(self.group.coords(i))
    }

    /// Exhaustive check that every nonzero element pairs nontrivially with a generator.
    pub fn is_nonsingular(&self) -> bool {
        let fs: Vec<Vec<u64>> = (0..self.invariant_factors.len())
            .map(|i| {
                let mut c = vec![0; self.invariant_factors.len()];
                c[i] = 1;
                self.group.functional(self.group.index(&c))
            })
            .collect();
        (1..self.group.size()).all(|x| fs.iter().any(|f| self.group.apply(f, x) != 0))
    }

    pub(crate) fn check_bound(&self) -> Result<(), LinkingFormError> {
        if self.order() > self.enum_bound {
            return Err(LinkingFormError::GroupTooLarge {
                order: self.order().to_string(),
                bound: self.enum_bound,
            });
        }
        Ok(())
    }

    pub(crate) fn primary_parts(&self) -> Vec<PrimaryPart> {
        let mut primes: Vec<u64> = Vec::new();
        for &d in &self.invariant_factors {
            let mut m = d;
            let mut p = 2;
            while m > 1 {
                if p * p > m {
                    p = m;
                }
                if m % p == 0 {
                    if !primes.contains(&p) {
                        primes.push(p);
                    }
                    while m % p == 0 {
                        m /= p;
                    }
                }
                p += 1;
            }
        }
        primes.sort_unstable();
        let e = self.group.exponent();
        primes
            .into_iter()
            .map(|p| {
                let mut embedding = Vec::new();
                let mut orders = Vec::new();
                for (i, &d) in self.invariant_factors.iter().enumerate() {
                    let mut pa = 1;
                    while d % (pa * p) == 0 {
                        pa *= p;
                    }
                    if pa > 1 {
                        embedding.push((i, d / pa));
                        orders.push(pa);
                    }
                }
                let part_exp = orders.iter().copied().max().unwrap_or(1);
                let gram = embedding
                    .iter()
                    .map(|&(i, ci)| {
                        embedding
                            .iter()
                            .map(|&(j, cj)| {
                                let mut a = vec![0; self.invariant_factors.len()];
                                let mut b = a.clone();
                                a[i] = ci;
                                b[j] = cj;
                                let v = self.group.pair(self.group.index(&a), self.group.index(&b));
                                let scaled = v as u128 * part_exp as u128;
                                debug_assert_eq!(scaled % e as u128, 0);
                                (scaled / e as u128) as u64 % part_exp
                            })
                            .collect()
                    })
                    .collect();
                PrimaryPart {
                    p,
                    group: PairedGroup::new(orders, part_exp, gram),
                    embedding,
                }
            })
            .collect()
    }

    pub(crate) fn embed(&self, part: &PrimaryPart, x: u64) -> u64 {
        let c = part.group.coords(x);
        let mut full = vec![0u64; self.invariant_factors.len()];
        for (&(i, ci), t) in part.embedding.iter().zip(c) {
            full[i] = (ci as u128 * t as u128 % self.invariant_factors[i] as u128) as u64;
        }
        self.group.index(&full)
    }

    // Direct sum of one subgroup per primary part.
    pub(crate) fn combine(&self, parts: &[PrimaryPart], chosen: &[&SubgroupData]) -> Subgroup {
        let mut elements: Vec<u64> = vec![0];
        let mut generators = Vec::new();
        for (part, s) in parts.iter().zip(chosen) {
            let embedded: Vec<u64> = s.elements.iter().map(|&x| self.embed(part, x)).collect();
            elements = elements
                .iter()
                .flat_map(|&a| embedded.iter().map(move |&b| (a, b)))
                .map(|(a, b)| self.group.add(a, b))
                .collect();
            generators.extend(s.generators.iter().map(|&g| self.embed(part, g)));
        }
        let mut elements: Vec<GroupElement> = elements.into_iter().map(|i| self.element_at(i)).collect();
        elements.sort();
        Subgroup {
            generators: generators.into_iter().map(|i| self.element_at(i)).collect(),
            elements,
        }
    }

    fn product<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
        let mut out: Vec<Vec<T>> = vec![vec![]];
        for l in lists {
            out = out
                .iter()
                .flat_map(|prefix| {
                    l.iter().map(move |x| {
                        let mut v = prefix.clone();
                        v.push(x.clone());
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Metabolizers of each primary part.
    pub(crate) fn primary_metabolizers(&self, part: &PrimaryPart) -> Vec<SubgroupData> {
        let n = part.group.size();
        part.group
            .isotropic_subgroups(part.p)
            .into_iter()
            .filter(|g| (g.elements.len() as u64).pow(2) == n)
            .collect()
    }

    /// All isotropic subgroups G with |G|² = |group|.
    pub fn enumerate_metabolizers(&self) -> Result<Vec<Metabolizer>, LinkingFormError> {
        self.check_bound()?;
        let parts = self.primary_parts();
        let per_prime: Vec<Vec<SubgroupData>> = parts.iter().map(|p| self.primary_metabolizers(p)).collect();
        let mut out: Vec<Subgroup> = Self::product(&per_prime)
            .iter()
            .map(|choice| {
                let refs: Vec<&SubgroupData> = choice.iter().collect();
                self.combine(&parts, &refs)
            })
            .collect();
        out.sort_by(|a, b| a.elements.cmp(&b.elements));
        Ok(out)
    }

    /// Nonzero elements of prime-power order in `g`, as characters.
    pub fn prime_power_characters(&self, g: &Subgroup) -> Vec<Character> {
        g.elements
            .iter()
            .filter_map(|x| {
                let order = self.element_order(x);
                prime_power_base(order).map(|_| Character {
                    element: x.clone(),
                    order,
                })
            })
            .collect()
    }

    /// χ(y) = λ(x, y) for the character attached to x.
    pub fn character_value(&self, chi: &Character, y: &GroupElement) -> RootOfUnity {
        self.pair_elements(&chi.element, y)
    }

    /// Orthogonal splittings (β₁, β₂) into nonsingular summands with β₁ needing at most r generators.
    pub fn orthogonal_splittings(&self, r: usize) -> Result<Vec<Splitting>, LinkingFormError> {
        self.check_bound()?;
        let parts = self.primary_parts();
        let per_prime: Vec<Vec<(SubgroupData, SubgroupData)>> = parts
            .iter()
            .map(|part| {
                let g = &part.group;
                g.subgroups_of_rank_at_most(part.p, r.min(u32::MAX as usize) as u32)
                    .into_iter()
                    .filter(|h| g.is_nondegenerate_on(h))
                    .map(|h| {
                        let perp = g.perp(&h.generators);
                        (h, perp)
                    })
                    .collect()
            })
            .collect();
        let mut out: Vec<Splitting> = Self::product(&per_prime)
            .iter()
            .map(|choice| {
                let h1: Vec<&SubgroupData> = choice.iter().map(|(a, _)| a).collect();
                let h2: Vec<&SubgroupData> = choice.iter().map(|(_, b)| b).collect();
                Splitting {
                    beta1: self.combine(&parts, &h1),
                    beta2: self.combine(&parts, &h2),
                }
            })
            .collect();
        out.sort_by(|a, b| (a.beta1.order(), &a.beta1.elements).cmp(&(b.beta1.order(), &b.beta1.elements)));
        Ok(out)
    }

    /// Metabolizers of the restriction of the form to a nonsingular subgroup.
    pub fn metabolizers_within(&self, s: &Subgroup) -> Result<Vec<Metabolizer>, LinkingFormError> {
        self.check_bound()?;
        let parts = self.primary_parts();
        let per_prime: Vec<Vec<SubgroupData>> = parts
            .iter()
            .map(|part| {
                let g = &part.group;
                let inside: Vec<bool> = (0..g.size())
                    .map(|x| s.contains(&self.element_at(self.embed(part, x))))
                    .collect();
                let size = inside.iter().filter(|&&b| b).count() as u64;
                g.scan_subgroups(
                    part.p,
                    |t, x| {
                        inside[x as usize] && g.pair(x, x) == 0 && {
                            let f = g.functional(x);
                            t.generators.iter().all(|&y| g.apply(&f, y) == 0)
                        }
                    },
                    |_| true,
                )
                .into_iter()
                .filter(|t| (t.elements.len() as u64).pow(2) == size)
                .collect()
            })
            .collect();
        let mut out: Vec<Subgroup> = Self::product(&per_prime)
            .iter()
            .map(|choice| {
                let refs: Vec<&SubgroupData> = choice.iter().collect();
                self.combine(&parts, &refs)
            })
            .collect();
        out.sort_by(|a, b| a.elements.cmp(&b.elements));
        Ok(out)
    }

    /// Isotropic G in a primary part with G a direct summand of G^⊥ and G^⊥/G of rank ≤ r.
    ///
    /// These are exactly the metabolizers of β₂ over orthogonal splittings β₁ ⊕ β₂
    /// with rank β₁ ≤ r, with β₁ ≅ G^⊥/G.
    pub(crate) fn split_metabolizer_candidates(&self, part: &PrimaryPart, r: usize) -> Vec<(SubgroupData, u32)> {
        let g = &part.group;
        g.isotropic_subgroups(part.p)
            .into_iter()
            .filter_map(|t| {
                let perp = g.perp(&t.generators);
                let rank = g.quotient_rank(&t, &perp, part.p);
                (rank as usize <= r && g.is_pure_in(&t, &perp, part.p)).then_some((t, rank))
            })
            .collect()
    }

    pub(crate) fn embed_subgroup(&self, part: &PrimaryPart, s: &SubgroupData) -> Subgroup {
        self.combine(std::slice::from_ref(part), &[s])
    }

    /// Smallest number of generators of a subgroup.
    pub fn subgroup_min_generators(&self, s: &Subgroup) -> usize {
        let idx: Vec<u64> = s.elements.iter().map(|x| self.index_of(x)).collect();
        self.primary_parts()
            .iter()
            .map(|part| {
                let p = part.p;
                let torsion = idx.iter().filter(|&&x| self.group.scale(x, p) == 0).count() as u64;
                torsion.ilog(p) as usize
            })
            .max()
            .unwrap_or(0)
    }
}

fn bilinear(m: &Matrix<Rational>, x: &[BigInt], y: &[BigInt]) -> Rational {
    let mut acc = Rational::zero();
    for (i, xi) in x.iter().enumerate() {
        if xi.is_zero() {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() {
                acc += &m[(i, j)] * (xi * yj);
            }
        }
    }
    acc
}

fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

fn residue(r: &Rational, exponent: u64) -> u64 {
    let f = frac(r) * BigInt::from(exponent);
    debug_assert!(f.is_integer(), "pairing denominator must divide the exponent");
    f.to_integer().to_u64().unwrap()
}


#[cfg(test)]
mod properties {
    use super::*;
    use crate::testing::symmetric_presentation;
    use proptest::prelude::*;
    use std::collections::HashSet;

    fn vectors(n: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-20i64..=20, n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn pairing_ignores_lattice_shifts(
            (b, x, y, z) in symmetric_presentation(2000).prop_flat_map(|b| {
                let n = b.rows();
                (Just(b), vectors(n), vectors(n), vectors(n))
            })
        ) {
            let lf = LinkingForm::new(b.clone()).unwrap();
            let big = |v: &[i64]| v.iter().map(|&t| BigInt::from(t)).collect::<Vec<_>>();
            let bz = b.mul_vec(&big(&z));
            let shifted: Vec<BigInt> = big(&x).iter().zip(&bz).map(|(a, c)| a + c).collect();
            prop_assert_eq!(lf.pair(&shifted, &big(&y)), lf.pair(&big(&x), &big(&y)));
        }

        #[test]
        fn adjoint_is_bijective(b in symmetric_presentation(2000)) {
            let lf = LinkingForm::new(b).unwrap();
            let basis: Vec<GroupElement> = (0..lf.presentation().rows()).map(|i| lf.basis_element(i)).collect();
            let images: HashSet<Vec<RootOfUnity>> = lf
                .elements()
                .map(|x| basis.iter().map(|e| lf.pair_elements(&x, e)).collect())
                .collect();
            prop_assert_eq!(images.len() as u64, lf.order());
        }

        #[test]
        fn metabolizers_satisfy_invariants(b in symmetric_presentation(400)) {
            let lf = LinkingForm::new(b).unwrap();
            for g in lf.enumerate_metabolizers().unwrap() {
                prop_assert_eq!(g.order() * g.order(), lf.order());
                for x in g.elements() {
                    for y in g.elements() {
                        prop_assert!(lf.pair_elements(x, y).is_one());
                        prop_assert!(g.contains(&lf.add(x, y)));
                    }
                }
            }
        }

        #[test]
        fn splittings_are_symmetric(b in symmetric_presentation(400)) {
            let lf = LinkingForm::new(b).unwrap();
            let r = lf.min_generators();
            let all = lf.orthogonal_splittings(r).unwrap();
            let set: HashSet<(Vec<GroupElement>, Vec<GroupElement>)> = all
                .iter()
                .map(|s| (s.beta1.elements().to_vec(), s.beta2.elements().to_vec()))
                .collect();
            for s in &all {
                prop_assert_eq!(s.beta1.order() * s.beta2.order(), lf.order());
                for x in s.beta1.elements() {
                    for y in s.beta2.elements() {
                        prop_assert!(lf.pair_elements(x, y).is_one());
                    }
                }
                let swapped = (s.beta2.elements().to_vec(), s.beta1.elements().to_vec());
                prop_assert!(set.contains(&swapped));
            }
        }
    }
}
