// Casson–Gordon genus and stabilization obstructions.
//
// A candidate is an orthogonal splitting β = β₁ ⊕ β₂ with rank β₁ ≤ r and a
// metabolizer G of β₂. Equivalently G is isotropic, a direct summand of G^⊥,
// and G^⊥/G ≅ β₁ has rank ≤ r. Prime-power characters of G live in single
// primary parts, so the search runs prime by prime.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::casson_gordon::{CgError, CgEvaluation};
use crate::exact_algebra::Rational;
use crate::linking_form::{GroupElement, LinkingForm, Subgroup};

use super::ObstructionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Obstructed,
    NotObstructed,
}

/// |σ(K,χ) + σ_K(−1)| ≤ η(K,χ) + threshold for the character of one element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalityInstance {
    pub element: GroupElement,
    pub order: u64,
    pub evaluation: CgEvaluation,
    pub lhs: Rational,
    pub rhs: Rational,
}

impl InequalityInstance {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

/// A candidate metabolizer together with a character in it that violates the inequality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub metabolizer: Subgroup,
    pub beta1_rank: usize,
    pub violation: InequalityInstance,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObstructionWitness {
    /// |σ_K(−1)| exceeds the rank allowed for β₁.
    SignatureExceedsRank { sigma_minus1: i64, rank: usize },
    /// Every candidate in the p-primary part contains a violating character.
    PrimeRefuted { p: u64, refutations: Vec<Refutation> },
    /// Every splitting and metabolizer pair contains a violating character.
    AllPairsRefuted { pairs: usize },
    /// A metabolizer all of whose prime-power characters satisfy the inequality.
    Survivor { metabolizer: Subgroup, beta1_rank: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionResult {
    pub verdict: Verdict,
    pub rank_bound: usize,
    pub threshold: u64,
    pub sigma_minus1: i64,
    pub witness: ObstructionWitness,
}

struct Checker<'a> {
    lf: &'a LinkingForm,
    sigma: Rational,
    threshold: Rational,
    eval: &'a dyn Fn(&GroupElement) -> Result<CgEvaluation, CgError>,
    memo: RefCell<HashMap<GroupElement, InequalityInstance>>,
}

impl<'a> Checker<'a> {
    fn new(
        lf: &'a LinkingForm,
        sigma_minus1: i64,
        threshold: u64,
        eval: &'a dyn Fn(&GroupElement) -> Result<CgEvaluation, CgError>,
    ) -> Self {
        Self {
            lf,
            sigma: Rational::from_integer(BigInt::from(sigma_minus1)),
            threshold: Rational::from_integer(BigInt::from(threshold)),
            eval,
            memo: RefCell::default(),
        }
    }

    fn check(&self, x: &GroupElement) -> Result<InequalityInstance, CgError> {
        if let Some(i) = self.memo.borrow().get(x) {
            return Ok(i.clone());
        }
        let evaluation = (self.eval)(x)?;
        let lhs = (&evaluation.value.sigma + &self.sigma).abs();
        let rhs = Rational::from_integer(BigInt::from(evaluation.value.eta)) + &self.threshold;
        let inst = InequalityInstance {
            element: x.clone(),
            order: self.lf.element_order(x),
            evaluation,
            lhs,
            rhs,
        };
        self.memo.borrow_mut().insert(x.clone(), inst.clone());
        Ok(inst)
    }

    // First violating character among the nonzero elements, if any.
    fn first_violation<'x>(
        &self,
        elements: impl IntoIterator<Item = &'x GroupElement>,
    ) -> Result<Option<InequalityInstance>, CgError> {
        for x in elements {
            if x.is_zero() {
                continue;
            }
            let inst = self.check(x)?;
            if !inst.holds() {
                return Ok(Some(inst));
            }
        }
        Ok(None)
    }
}

fn search(
    lf: &LinkingForm,
    rank_bound: usize,
    threshold: u64,
    sigma_minus1: i64,
    cg_eval: &dyn Fn(&GroupElement) -> Result<CgEvaluation, CgError>,
) -> Result<ObstructionResult, ObstructionError> {
    let result = |verdict, witness| ObstructionResult {
        verdict,
        rank_bound,
        threshold,
        sigma_minus1,
        witness,
    };
    if sigma_minus1.unsigned_abs() as usize > rank_bound {
        return Ok(result(
            Verdict::Obstructed,
            ObstructionWitness::SignatureExceedsRank {
                sigma_minus1,
                rank: rank_bound,
            },
        ));
    }
    lf.check_bound()?;
    let checker = Checker::new(lf, sigma_minus1, threshold, cg_eval);
    let parts = lf.primary_parts();
    let mut chosen = Vec::new();
    let mut beta1_rank = 0;
    for part in &parts {
        let mut refutations = Vec::new();
        let mut survivor = None;
        for (g, rank) in lf.split_metabolizer_candidates(part, rank_bound) {
            let embedded = lf.embed_subgroup(part, &g);
            match checker.first_violation(embedded.elements())? {
                Some(violation) => refutations.push(Refutation {
                    metabolizer: embedded,
                    beta1_rank: rank as usize,
                    violation,
                }),
                None => {
                    survivor = Some((g, rank));
                    break;
                }
            }
        }
        match survivor {
            Some((g, rank)) => {
                beta1_rank = beta1_rank.max(rank as usize);
                chosen.push(g);
            }
            None => {
                return Ok(result(
                    Verdict::Obstructed,
                    ObstructionWitness::PrimeRefuted { p: part.p, refutations },
                ))
            }
        }
    }
    let refs: Vec<_> = chosen.iter().collect();
    Ok(result(
        Verdict::NotObstructed,
        ObstructionWitness::Survivor {
            metabolizer: lf.combine(&parts, &refs),
            beta1_rank,
        },
    ))
}

fn search_by_splittings(
    lf: &LinkingForm,
    rank_bound: usize,
    threshold: u64,
    sigma_minus1: i64,
    cg_eval: &dyn Fn(&GroupElement) -> Result<CgEvaluation, CgError>,
) -> Result<ObstructionResult, ObstructionError> {
    let result = |verdict, witness| ObstructionResult {
        verdict,
        rank_bound,
        threshold,
        sigma_minus1,
        witness,
    };
    if sigma_minus1.unsigned_abs() as usize > rank_bound {
        return Ok(result(
            Verdict::Obstructed,
            ObstructionWitness::SignatureExceedsRank {
                sigma_minus1,
                rank: rank_bound,
            },
        ));
    }
    let checker = Checker::new(lf, sigma_minus1, threshold, cg_eval);
    let mut pairs = 0;
    for split in lf.orthogonal_splittings(rank_bound)? {
        for g in lf.metabolizers_within(&split.beta2)? {
            let chars = lf.prime_power_characters(&g);
            if checker.first_violation(chars.iter().map(|c| &c.element))?.is_none() {
                return Ok(result(
                    Verdict::NotObstructed,
                    ObstructionWitness::Survivor {
                        beta1_rank: lf.subgroup_min_generators(&split.beta1),
                        metabolizer: g,
                    },
                ));
            }
            pairs += 1;
        }
    }
    Ok(result(
        Verdict::Obstructed,
        ObstructionWitness::AllPairsRefuted { pairs },
    ))
}

/// Obstructed means the knot bounds no genus-g surface in D⁴, so g₄ ≥ g + 1.
pub fn gilmer_g4_obstruct(
    lf: &LinkingForm,
    g: u64,
    sigma_minus1: i64,
    cg_eval: &dyn Fn(&GroupElement) -> Result<CgEvaluation, CgError>,
) -> Result<ObstructionResult, ObstructionError> {
    search(lf, 2 * g as usize, 4 * g + 1, sigma_minus1, cg_eval)
}

/// Obstructed means sn ≥ n + 1.
pub fn cg_sn_obstruct(
    lf: &LinkingForm,
    n: u64,
    sigma_minus1: i64,
    cg_eval: &dyn Fn(&GroupElement) -> Result<CgEvaluation, CgError>,
) -> Result<ObstructionResult, ObstructionError> {
    search(lf, 4 * n as usize, 4 * n + 1, sigma_minus1, cg_eval)
}

/// Same verdict as [`gilmer_g4_obstruct`], enumerating splittings and metabolizers directly.
pub fn gilmer_g4_obstruct_by_splittings(
    lf: &LinkingForm,
    g: u64,
    sigma_minus1: i64,
    cg_eval: &dyn Fn(&GroupElement) -> Result<CgEvaluation, CgError>,
) -> Result<ObstructionResult, ObstructionError> {
    search_by_splittings(lf, 2 * g as usize, 4 * g + 1, sigma_minus1, cg_eval)
}

/// Same verdict as [`cg_sn_obstruct`], enumerating splittings and metabolizers directly.
pub fn cg_sn_obstruct_by_splittings(
    lf: &LinkingForm,
    n: u64,
    sigma_minus1: i64,
    cg_eval: &dyn Fn(&GroupElement) -> Result<CgEvaluation, CgError>,
) -> Result<ObstructionResult, ObstructionError> {
    search_by_splittings(lf, 4 * n as usize, 4 * n + 1, sigma_minus1, cg_eval)
}
