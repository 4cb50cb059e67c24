// Finite abelian groups ⊕ Z/n_i with a Q/Z-valued symmetric pairing, elements
// addressed by mixed-radix index. Subgroup enumeration lives here.

use std::collections::HashSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    pub fn new(n: u64) -> Self {
        Self {
            words: vec![0; n.div_ceil(64) as usize],
        }
    }

    pub fn get(&self, i: u64) -> bool {
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: u64) {
        self.words[(i / 64) as usize] |= 1 << (i % 64);
    }
}

#[derive(Clone, Debug)]
pub(crate) struct PairedGroup {
    orders: Vec<u64>,
    strides: Vec<u64>,
    size: u64,
    exponent: u64,
    gram: Vec<Vec<u64>>,
}

/// Subgroup as a sorted element list plus the generators it was built from.
#[derive(Clone, Debug)]
pub(crate) struct SubgroupData {
    pub elements: Vec<u64>,
    pub generators: Vec<u64>,
    pub members: Bitset,
}

impl PairedGroup {
    /// `gram[i][j] / exponent` is the pairing of generators i and j.
    pub fn new(orders: Vec<u64>, exponent: u64, gram: Vec<Vec<u64>>) -> Self {
        let mut strides = Vec::with_capacity(orders.len());
        let mut size = 1u64;
        for &o in &orders {
            strides.push(size);
            size = size.checked_mul(o).expect("group order overflows u64");
        }
        Self {
            orders,
            strides,
            size,
            exponent,
            gram,
        }
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn coords(&self, x: u64) -> Vec<u64> {
        self.orders
            .iter()
            .zip(&self.strides)
            .map(|(&o, &s)| x / s % o)
            .collect()
    }

    pub fn index(&self, c: &[u64]) -> u64 {
        c.iter()
            .zip(&self.orders)
            .zip(&self.strides)
            .map(|((&ci, &o), &s)| ci % o * s)
            .sum()
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let mut out = 0;
        for (&o, &s) in self.orders.iter().zip(&self.strides) {
            out += (a / s % o + b / s % o) % o * s;
        }
        out
    }

    pub fn scale(&self, a: u64, k: u64) -> u64 {
        let mut out = 0;
        for (&o, &s) in self.orders.iter().zip(&self.strides) {
            out += ((a / s % o) as u128 * k as u128 % o as u128) as u64 * s;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        let mut out = 0;
        for (&o, &s) in self.orders.iter().zip(&self.strides) {
            out += (o - a / s % o) % o * s;
        }
        out
    }

    /// Numerator of the pairing over `exponent`.
    pub fn pair(&self, a: u64, b: u64) -> u64 {
        let e = self.exponent as u128;
        let ca = self.coords(a);
        let cb = self.coords(b);
        let mut acc: u128 = 0;
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                if y != 0 {
                    acc = (acc + x as u128 * y as u128 % e * self.gram[i][j] as u128) % e;
                }
            }
        }
        acc as u64
    }

    /// Coefficients f with pair(x, g) = Σ x_i f_i mod exponent.
    pub fn functional(&self, g: u64) -> Vec<u64> {
        let e = self.exponent as u128;
        let cg = self.coords(g);
        (0..self.orders.len())
            .map(|i| {
                cg.iter()
                    .enumerate()
                    .fold(0u128, |acc, (j, &y)| (acc + y as u128 * self.gram[i][j] as u128) % e) as u64
            })
            .collect()
    }

    pub fn apply(&self, f: &[u64], x: u64) -> u64 {
        let e = self.exponent as u128;
        let mut acc = 0u128;
        for ((&o, &s), &fi) in self.orders.iter().zip(&self.strides).zip(f) {
            acc = (acc + (x / s % o) as u128 * fi as u128) % e;
        }
        acc as u64
    }

    pub fn element_order(&self, a: u64) -> u64 {
        self.coords(a)
            .iter()
            .zip(&self.orders)
            .map(|(&c, &o)| o / num_integer::gcd(c, o))
            .fold(1, num_integer::lcm)
    }

    pub fn trivial_subgroup(&self) -> SubgroupData {
        let mut members = Bitset::new(self.size);
        members.set(0);
        SubgroupData {
            elements: vec![0],
            generators: vec![],
            members,
        }
    }

    /// Subgroup generated by `gens`.
    #[cfg(test)]
    pub fn span(&self, gens: &[u64]) -> SubgroupData {
        let mut s = self.trivial_subgroup();
        for &g in gens {
            if !s.members.get(g) {
                s = self.extend(&s, g, |_| {});
            }
        }
        s
    }

    /// ⟨S, x⟩; `on_coset(k·x + s)` is called for every new element with its multiplier k.
    fn extend(&self, s: &SubgroupData, x: u64, mut on_coset: impl FnMut((u64, u64))) -> SubgroupData {
        let mut elements = s.elements.clone();
        let mut members = s.members.clone();
        let mut cur = x;
        let mut k = 1;
        while !s.members.get(cur) {
            for &y in &s.elements {
                let z = self.add(y, cur);
                members.set(z);
                elements.push(z);
                on_coset((k, z));
            }
            cur = self.add(cur, x);
            k += 1;
        }
        elements.sort_unstable();
        let mut generators = s.generators.clone();
        generators.push(x);
        SubgroupData {
            elements,
            generators,
            members,
        }
    }

    /// Number of elements killed by p.
    pub fn p_torsion_count(&self, elements: &[u64], p: u64) -> u64 {
        elements.iter().filter(|&&x| self.scale(x, p) == 0).count() as u64
    }

    /// Orthogonal complement of the subgroup generated by `gens`.
    pub fn perp(&self, gens: &[u64]) -> SubgroupData {
        let fs: Vec<Vec<u64>> = gens.iter().map(|&g| self.functional(g)).collect();
        let mut s = self.trivial_subgroup();
        for y in 0..self.size {
            if !s.members.get(y) && fs.iter().all(|f| self.apply(f, y) == 0) {
                s = self.extend(&s, y, |_| {});
            }
        }
        s
    }

    pub fn is_nondegenerate_on(&self, s: &SubgroupData) -> bool {
        let fs: Vec<Vec<u64>> = s.generators.iter().map(|&g| self.functional(g)).collect();
        s.elements
            .iter()
            .all(|&x| x == 0 || fs.iter().any(|f| self.apply(f, x) != 0))
    }

    /// Breadth-first enumeration of the subgroups of a p-group accepted by `accept_step`.
    ///
    /// `accept_step(S, x)` decides whether x may be adjoined to S; `keep(T)` whether the
    /// resulting T is recorded and explored further. Both must be inherited by subgroups
    /// for the scan to be complete.
    pub fn scan_subgroups(
        &self,
        p: u64,
        accept_step: impl Fn(&SubgroupData, u64) -> bool,
        keep: impl Fn(&SubgroupData) -> bool,
    ) -> Vec<SubgroupData> {
        let root = self.trivial_subgroup();
        let mut seen: HashSet<Bitset> = HashSet::from([root.members.clone()]);
        let mut frontier = vec![root.clone()];
        let mut out = vec![root];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for s in &frontier {
                let mut covered = s.members.clone();
                for x in 0..self.size {
                    if covered.get(x) || !accept_step(s, x) {
                        continue;
                    }
                    let mut marks = Vec::new();
                    let t = self.extend(s, x, |(k, z)| {
                        if k % p != 0 {
                            marks.push(z);
                        }
                    });
                    // Every k·x + s with p ∤ k generates the same T over S.
                    for z in marks {
                        covered.set(z);
                    }
                    if !keep(&t) || !seen.insert(t.members.clone()) {
                        continue;
                    }
                    next.push(t.clone());
                    out.push(t);
                }
            }
            frontier = next;
        }
        out.sort_by(|a, b| (a.elements.len(), &a.elements).cmp(&(b.elements.len(), &b.elements)));
        out
    }

    pub fn isotropic_subgroups(&self, p: u64) -> Vec<SubgroupData> {
        self.scan_subgroups(
            p,
            |s, x| {
                if self.pair(x, x) != 0 {
                    return false;
                }
                let f = self.functional(x);
                s.generators.iter().all(|&g| self.apply(&f, g) == 0)
            },
            |_| true,
        )
    }

    pub fn rank(&self, s: &SubgroupData, p: u64) -> u32 {
        let t = self.p_torsion_count(&s.elements, p);
        t.ilog(p)
    }

    pub fn subgroups_of_rank_at_most(&self, p: u64, r: u32) -> Vec<SubgroupData> {
        self.scan_subgroups(p, |_, _| true, |t| self.rank(t, p) <= r)
    }

    /// Whether S is a direct summand of the larger subgroup A (S ⊂ A).
    pub fn is_pure_in(&self, s: &SubgroupData, a: &SubgroupData, p: u64) -> bool {
        let mut pj = p;
        while pj <= self.exponent.max(1) {
            let mut pja = Bitset::new(self.size);
            for &x in &a.elements {
                pja.set(self.scale(x, pj));
            }
            let mut pjs = Bitset::new(self.size);
            for &x in &s.elements {
                pjs.set(self.scale(x, pj));
            }
            for &x in &s.elements {
                if pja.get(x) != pjs.get(x) {
                    return false;
                }
            }
            pj *= p;
        }
        true
    }

    /// Rank of A/S for subgroups S ⊂ A of a p-group.
    pub fn quotient_rank(&self, s: &SubgroupData, a: &SubgroupData, p: u64) -> u32 {
        let count = a.elements.iter().filter(|&&x| s.members.get(self.scale(x, p))).count() as u64;
        (count / s.elements.len() as u64).ilog(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hyperbolic(p: u64, copies: usize) -> PairedGroup {
        let n = 2 * copies;
        let gram = (0..n)
            .map(|i| (0..n).map(|j| u64::from(i / 2 == j / 2 && i != j)).collect())
            .collect();
        PairedGroup::new(vec![p; n], p, gram)
    }

    #[test]
    fn arithmetic() {
        let g = PairedGroup::new(vec![4, 6], 12, vec![vec![3, 0], vec![0, 2]]);
        assert_eq!(g.size(), 24);
        let a = g.index(&[3, 5]);
        assert_eq!(g.coords(a), vec![3, 5]);
        assert_eq!(g.coords(g.add(a, a)), vec![2, 4]);
        assert_eq!(g.add(a, g.neg(a)), 0);
        assert_eq!(g.element_order(a), 12);
        assert_eq!(g.pair(a, a), (9 * 3 + 25 * 2) % 12);
    }

    #[test]
    fn counts_subgroups_of_elementary_groups() {
        // Number of subgroups of (Z/3)^2: 1 + 4 + 1.
        let g = hyperbolic(3, 1);
        assert_eq!(g.subgroups_of_rank_at_most(3, 2).len(), 6);
        assert_eq!(g.subgroups_of_rank_at_most(3, 1).len(), 5);
        // Isotropic: trivial and the two coordinate axes.
        assert_eq!(g.isotropic_subgroups(3).len(), 3);
        // (Z/2)^4 has 1 + 15 + 35 + 15 + 1 subgroups.
        let g = hyperbolic(2, 2);
        assert_eq!(g.subgroups_of_rank_at_most(2, 4).len(), 67);
    }

    #[test]
    fn counts_subgroups_of_z4_z2() {
        // Z/4 ⊕ Z/2 has 8 subgroups.
        let g = PairedGroup::new(vec![4, 2], 4, vec![vec![1, 0], vec![0, 2]]);
        assert_eq!(g.subgroups_of_rank_at_most(2, 2).len(), 8);
    }

    #[test]
    fn purity() {
        let g = PairedGroup::new(vec![4], 4, vec![vec![1]]);
        let whole = g.span(&[1]);
        let two = g.span(&[2]);
        assert!(!g.is_pure_in(&two, &whole, 2));
        assert!(g.is_pure_in(&whole, &whole, 2));
        assert_eq!(g.quotient_rank(&two, &whole, 2), 1);
    }
}
