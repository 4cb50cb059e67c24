//! Casson–Gordon σ and η of winding-number-zero satellites and connected sums.
//!
//! Pattern invariants σ(R, χ), η(R, χ) come from user tables. For a 2-fold
//! cover the satellite R(J, η) adds σ_J(ω^{χ(η̃_i)}) for both lifts η̃_1, η̃_2
//! of every infection curve and η_J at the lifts where χ does not vanish,
//! with σ_J(1) = η_J(1) = 0. Connected sums add one to η when both characters
//! are nontrivial.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exact_algebra::{
    prime_power_base, IntegerMatrix, Rational, RootOfUnity, SignatureResult, DEFAULT_PRECISION_BITS,
};
use crate::linking_form::{GroupElement, LinkingForm, LinkingFormError};
use crate::seifert_knot::{lt_signature_nullity_with, SeifertError, SeifertMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CgError {
    #[error("character order {order} is not a prime power")]
    NotPrimePower { order: u64 },
    #[error("pattern `{pattern}` has no base entry for the character {character}")]
    MissingBaseEntry { pattern: String, character: String },
    #[error("infection site `{site}` has winding number {winding}; only 0 is supported")]
    WindingNonZero { site: String, winding: i64 },
    #[error("unknown generator label `{0}`")]
    UnknownLabel(String),
    #[error("generator label `{0}` is used twice")]
    DuplicateLabel(String),
    #[error("invalid base table for `{pattern}`: {reason}")]
    InvalidBaseTable { pattern: String, reason: String },
    #[error("pattern `{0}` is used as a companion but has no Seifert matrix")]
    MissingSeifert(String),
    #[error("only 2-fold branched covers are supported, got {0}")]
    UnsupportedCover(u32),
    #[error("invalid curve `{0}`")]
    BadCurve(String),
    #[error("Seifert matrix does not present the pattern tables' linking form")]
    PresentationMismatch,
    #[error(transparent)]
    Seifert(#[from] SeifertError),
    #[error(transparent)]
    LinkingForm(#[from] LinkingFormError),
}

/// Casson–Gordon signature and nullity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct CgValue {
    pub sigma: Rational,
    pub eta: u64,
}

impl CgValue {
    pub fn new(sigma: Rational, eta: u64) -> Self {
        Self { sigma, eta }
    }

    pub fn from_ints(sigma: i64, eta: u64) -> Self {
        Self::new(Rational::from_integer(sigma.into()), eta)
    }
}

impl fmt::Display for CgValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(σ {}, η {})", self.sigma, self.eta)
    }
}

/// Integer combination of generator labels, such as `f1 - e2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve {
    terms: Vec<(String, i64)>,
}

impl Curve {
    pub fn label(name: &str) -> Self {
        Self {
            terms: vec![(name.to_string(), 1)],
        }
    }

    pub fn terms(&self) -> &[(String, i64)] {
        &self.terms
    }
}

impl FromStr for Curve {
    type Err = CgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CgError::BadCurve(s.to_string());
        let words: Vec<&str> = s.split_whitespace().collect();
        let word_char = |c: char| c.is_alphanumeric() || c == '_' || c == '\'';
        if words
            .windows(2)
            .any(|w| w[0].ends_with(word_char) && w[1].starts_with(word_char))
        {
            return Err(bad());
        }
        let compact: String = words.concat();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let mut sign = 1;
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1;
                rest = r;
            } else if !terms.is_empty() {
                return Err(bad());
            }
            let digits = rest.chars().take_while(char::is_ascii_digit).count();
            let coef: i64 = if digits == 0 {
                1
            } else {
                rest[..digits].parse().map_err(|_| bad())?
            };
            rest = &rest[digits..];
            rest = rest.strip_prefix('*').unwrap_or(rest);
            let name_len = rest
                .char_indices()
                .take_while(|&(i, c)| c.is_alphabetic() || c == '_' || (i > 0 && (c.is_ascii_digit() || c == '\'')))
                .count();
            if name_len == 0 {
                return Err(bad());
            }
            let name: String = rest.chars().take(name_len).collect();
            rest = &rest[name.len()..];
            terms.push((name, sign * coef));
        }
        Ok(Self { terms })
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, c)) in self.terms.iter().enumerate() {
            let sep = match (i, *c < 0) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            write!(f, "{sep}")?;
            if c.abs() != 1 {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "{name}")?;
        }
        Ok(())
    }
}

/// Character given by its values in Q/Z on generator labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct LabelCharacter {
    values: BTreeMap<String, RootOfUnity>,
}

impl LabelCharacter {
    pub fn new(values: impl IntoIterator<Item = (String, RootOfUnity)>) -> Self {
        Self {
            values: values.into_iter().collect(),
        }
    }

    pub fn get(&self, label: &str) -> Option<RootOfUnity> {
        self.values.get(label).copied()
    }

    pub fn values(&self) -> &BTreeMap<String, RootOfUnity> {
        &self.values
    }

    pub fn eval(&self, curve: &Curve) -> Result<RootOfUnity, CgError> {
        let mut acc = RootOfUnity::one();
        for (name, c) in &curve.terms {
            let v = self.get(name).ok_or_else(|| CgError::UnknownLabel(name.clone()))?;
            acc = acc.add(&v.pow(*c));
        }
        Ok(acc)
    }

    fn restrict(&self, labels: &[String]) -> Result<Vec<RootOfUnity>, CgError> {
        labels
            .iter()
            .map(|l| self.get(l).ok_or_else(|| CgError::UnknownLabel(l.clone())))
            .collect()
    }

    pub fn negated(&self) -> Self {
        Self {
            values: self.values.iter().map(|(k, v)| (k.clone(), v.neg())).collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.values.values().map(RootOfUnity::order).fold(1, num_integer::lcm)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.values().all(RootOfUnity::is_one)
    }
}

impl fmt::Display for LabelCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (k, v)) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}: {v}")?;
        }
        write!(f, "}}")
    }
}

fn key_string(labels: &[String], key: &[RootOfUnity]) -> String {
    let parts: Vec<String> = labels.iter().zip(key).map(|(l, v)| format!("{l}: {v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// User-supplied σ(R, χ), η(R, χ) for the characters of one pattern knot R.
///
/// The linking form on H₁(Σ₂(R)) is presented with the labels as basis, and
/// characters are keyed by their values on the labels.
#[derive(Clone, Debug)]
pub struct PatternBaseTable {
    name: String,
    labels: Vec<String>,
    form: LinkingForm,
    entries: BTreeMap<Vec<RootOfUnity>, CgValue>,
}

impl PatternBaseTable {
    pub fn new(
        name: &str,
        labels: Vec<String>,
        presentation: IntegerMatrix,
        entries: impl IntoIterator<Item = (Vec<RootOfUnity>, CgValue)>,
    ) -> Result<Self, CgError> {
        let invalid = |reason: String| CgError::InvalidBaseTable {
            pattern: name.to_string(),
            reason,
        };
        if labels.len() != presentation.rows() {
            return Err(invalid(format!(
                "{} labels for a {}x{} presentation",
                labels.len(),
                presentation.rows(),
                presentation.cols()
            )));
        }
        let form = LinkingForm::new(presentation)?;
        let table = Self {
            name: name.to_string(),
            labels,
            form,
            entries: BTreeMap::new(),
        };
        let valid = table.character_keys();
        let supplied = entries;
        let mut entries: BTreeMap<Vec<RootOfUnity>, CgValue> = BTreeMap::new();
        for (key, value) in supplied {
            if key.len() != table.labels.len() {
                return Err(invalid(format!(
                    "key {} has the wrong length",
                    key_string(&table.labels, &key)
                )));
            }
            if !valid.contains_key(&key) {
                return Err(invalid(format!(
                    "{} is not a character of the linking form",
                    key_string(&table.labels, &key)
                )));
            }
            if key.iter().all(RootOfUnity::is_one) && !value.sigma.is_zero() {
                return Err(invalid("the trivial character must have σ = 0".into()));
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(invalid(format!("duplicate entry {}", key_string(&table.labels, &key))));
            }
        }
        for (key, value) in &entries {
            let neg: Vec<RootOfUnity> = key.iter().map(RootOfUnity::neg).collect();
            match entries.get(&neg) {
                Some(v) if v == value => {}
                Some(_) => {
                    return Err(invalid(format!(
                        "values at {} and its negative differ",
                        key_string(&table.labels, key)
                    )))
                }
                None => {
                    return Err(invalid(format!(
                        "missing the negative of {}",
                        key_string(&table.labels, key)
                    )))
                }
            }
        }
        Ok(Self { entries, ..table })
    }

    /// Table with σ = η = 0 for every character.
    pub fn zero(name: &str, labels: Vec<String>, presentation: IntegerMatrix) -> Result<Self, CgError> {
        let probe = Self::new(name, labels.clone(), presentation.clone(), [])?;
        let keys: Vec<Vec<RootOfUnity>> = probe.character_keys().into_keys().collect();
        Self::new(
            name,
            labels,
            presentation,
            keys.into_iter().map(|k| (k, CgValue::default())),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn form(&self) -> &LinkingForm {
        &self.form
    }

    pub fn entries(&self) -> &BTreeMap<Vec<RootOfUnity>, CgValue> {
        &self.entries
    }

    pub fn get(&self, key: &[RootOfUnity]) -> Option<&CgValue> {
        self.entries.get(key)
    }

    /// Value vectors of all characters, each with its linking-form element.
    pub fn character_keys(&self) -> BTreeMap<Vec<RootOfUnity>, GroupElement> {
        let basis: Vec<GroupElement> = (0..self.labels.len()).map(|i| self.form.basis_element(i)).collect();
        self.form
            .elements()
            .map(|x| {
                let key = basis.iter().map(|b| self.form.pair_elements(&x, b)).collect();
                (key, x)
            })
            .collect()
    }

    /// Largest |σ| and η over characters of order 1 or a power of a prime.
    pub fn max_abs_values(&self) -> (Rational, u64) {
        let mut s = Rational::zero();
        let mut e = 0;
        for (k, v) in &self.entries {
            let order = k.iter().map(RootOfUnity::order).fold(1, num_integer::lcm);
            if order == 1 || prime_power_base(order).is_some() {
                s = s.max(v.sigma.abs());
                e = e.max(v.eta);
            }
        }
        (s, e)
    }
}

#[derive(Debug, Default)]
struct LtCache(Mutex<HashMap<RootOfUnity, SignatureResult>>);

impl Clone for LtCache {
    fn clone(&self) -> Self {
        Self(Mutex::new(self.0.lock().unwrap().clone()))
    }
}

#[derive(Clone, Debug)]
pub enum CompanionKind {
    Knot,
    Tree(Box<SatelliteTree>),
}

/// Companion knot J of an infection, with Levine–Tristram values memoized.
#[derive(Clone, Debug)]
pub struct Companion {
    kind: CompanionKind,
    seifert: SeifertMatrix,
    cache: Arc<LtCache>,
}

impl Companion {
    pub fn knot(seifert: SeifertMatrix) -> Self {
        Self {
            kind: CompanionKind::Knot,
            seifert,
            cache: Arc::default(),
        }
    }

    pub fn unknot() -> Self {
        Self::knot(SeifertMatrix::unknot())
    }

    /// A satellite used as companion; its Seifert matrix is that of its pattern.
    pub fn tree(tree: SatelliteTree) -> Result<Self, CgError> {
        let seifert = tree.seifert_matrix()?;
        Ok(Self {
            kind: CompanionKind::Tree(Box::new(tree)),
            seifert,
            cache: Arc::default(),
        })
    }

    pub fn kind(&self) -> &CompanionKind {
        &self.kind
    }

    pub fn seifert(&self) -> &SeifertMatrix {
        &self.seifert
    }

    /// (σ_J(ω), η_J(ω)), with both zero at ω = 1.
    pub fn lt(&self, omega: &RootOfUnity, start_bits: u32) -> Result<SignatureResult, CgError> {
        if omega.is_one() {
            return Ok(SignatureResult::zero());
        }
        if let Some(r) = self.cache.0.lock().unwrap().get(omega) {
            return Ok(*r);
        }
        let r = lt_signature_nullity_with(&self.seifert, omega, start_bits)?;
        self.cache.0.lock().unwrap().insert(*omega, r);
        Ok(r)
    }
}

#[derive(Clone, Debug)]
pub struct InfectionSite {
    pub label: String,
    pub lifts: [Curve; 2],
    pub companion: Companion,
    pub winding: i64,
}

impl InfectionSite {
    /// Winding-zero site whose two lifts are both the curve `curve`.
    pub fn new(label: &str, curve: Curve, companion: Companion) -> Self {
        Self {
            label: label.to_string(),
            lifts: [curve.clone(), curve],
            companion,
            winding: 0,
        }
    }
}

/// Pattern R = R_1 # ⋯ # R_k with infection sites.
#[derive(Clone, Debug)]
pub struct PatternNode {
    name: String,
    summands: Vec<Arc<PatternBaseTable>>,
    sites: Vec<InfectionSite>,
    seifert: Option<SeifertMatrix>,
}

impl PatternNode {
    pub fn new(
        name: &str,
        summands: Vec<Arc<PatternBaseTable>>,
        sites: Vec<InfectionSite>,
        seifert: Option<SeifertMatrix>,
    ) -> Result<Self, CgError> {
        let mut labels = BTreeSet::new();
        for s in &summands {
            for l in s.labels() {
                if !labels.insert(l.clone()) {
                    return Err(CgError::DuplicateLabel(l.clone()));
                }
            }
        }
        for site in &sites {
            if site.winding != 0 {
                return Err(CgError::WindingNonZero {
                    site: site.label.clone(),
                    winding: site.winding,
                });
            }
            for lift in &site.lifts {
                for (l, _) in lift.terms() {
                    if !labels.contains(l) {
                        return Err(CgError::UnknownLabel(l.clone()));
                    }
                }
            }
        }
        Ok(Self {
            name: name.to_string(),
            summands,
            sites,
            seifert,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn summands(&self) -> &[Arc<PatternBaseTable>] {
        &self.summands
    }

    pub fn sites(&self) -> &[InfectionSite] {
        &self.sites
    }

    pub fn seifert(&self) -> Option<&SeifertMatrix> {
        self.seifert.as_ref()
    }

    fn labels(&self) -> Vec<String> {
        self.summands.iter().flat_map(|s| s.labels().iter().cloned()).collect()
    }

    /// Infects along the chosen sites and tabulates the result as a single pattern,
    /// keeping the other sites for later.
    pub fn infect_partially(&self, chosen: &[usize], start_bits: u32) -> Result<PatternNode, CgError> {
        let labels = self.labels();
        let presentation = IntegerMatrix::block_diag(
            &self
                .summands
                .iter()
                .map(|s| s.form().presentation().clone())
                .collect::<Vec<_>>(),
            BigInt::zero(),
        );
        let inner = PatternNode {
            name: self.name.clone(),
            summands: self.summands.clone(),
            sites: chosen.iter().map(|&i| self.sites[i].clone()).collect(),
            seifert: self.seifert.clone(),
        };
        let probe = PatternBaseTable::new(&self.name, labels.clone(), presentation.clone(), [])?;
        let mut entries = Vec::new();
        for key in probe.character_keys().into_keys() {
            let order = key.iter().map(RootOfUnity::order).fold(1, num_integer::lcm);
            if order != 1 && prime_power_base(order).is_none() {
                continue;
            }
            let chi = LabelCharacter::new(labels.iter().cloned().zip(key.iter().copied()));
            let v = evaluate_pattern(&inner, &chi, start_bits)?.value;
            entries.push((key, v));
        }
        let names: Vec<&str> = chosen.iter().map(|&i| self.sites[i].label.as_str()).collect();
        let name = format!("{}[{}]", self.name, names.join(","));
        let table = PatternBaseTable::new(&name, labels, presentation, entries)?;
        let rest = (0..self.sites.len())
            .filter(|i| !chosen.contains(i))
            .map(|i| self.sites[i].clone())
            .collect();
        PatternNode::new(&name, vec![Arc::new(table)], rest, self.seifert.clone())
    }
}

#[derive(Clone, Debug)]
pub enum SatelliteTree {
    Pattern(PatternNode),
    ConnectedSum(Box<SatelliteTree>, Box<SatelliteTree>),
}

impl SatelliteTree {
    pub fn connected_sum(left: SatelliteTree, right: SatelliteTree) -> Result<Self, CgError> {
        let l: BTreeSet<String> = left.labels().into_iter().collect();
        if let Some(dup) = right.labels().into_iter().find(|x| l.contains(x)) {
            return Err(CgError::DuplicateLabel(dup));
        }
        Ok(Self::ConnectedSum(Box::new(left), Box::new(right)))
    }

    /// Generator labels in basis order.
    pub fn labels(&self) -> Vec<String> {
        match self {
            Self::Pattern(p) => p.labels(),
            Self::ConnectedSum(a, b) => {
                let mut v = a.labels();
                v.extend(b.labels());
                v
            }
        }
    }

    /// Block sum of the pattern tables' presentation matrices, in label order.
    pub fn presentation(&self) -> IntegerMatrix {
        let blocks: Vec<IntegerMatrix> = self
            .pattern_nodes()
            .iter()
            .flat_map(|p| p.summands.iter().map(|s| s.form().presentation().clone()))
            .collect();
        IntegerMatrix::block_diag(&blocks, BigInt::zero())
    }

    fn pattern_nodes(&self) -> Vec<&PatternNode> {
        match self {
            Self::Pattern(p) => vec![p],
            Self::ConnectedSum(a, b) => {
                let mut v = a.pattern_nodes();
                v.extend(b.pattern_nodes());
                v
            }
        }
    }

    /// Seifert matrix of the knot, equal to that of its patterns for winding-zero infections.
    pub fn seifert_matrix(&self) -> Result<SeifertMatrix, CgError> {
        match self {
            Self::Pattern(p) => p.seifert.clone().ok_or_else(|| CgError::MissingSeifert(p.name.clone())),
            Self::ConnectedSum(a, b) => Ok(a.seifert_matrix()?.connected_sum(&b.seifert_matrix()?)),
        }
    }

    /// All characters of the labels' linking form.
    pub fn characters(&self) -> Vec<LabelCharacter> {
        let mut out = vec![LabelCharacter::default()];
        for node in self.pattern_nodes() {
            for s in &node.summands {
                let keys: Vec<Vec<RootOfUnity>> = s.character_keys().into_keys().collect();
                out = out
                    .iter()
                    .flat_map(|c| {
                        keys.iter().map(move |k| {
                            let mut v = c.values.clone();
                            v.extend(s.labels().iter().cloned().zip(k.iter().copied()));
                            LabelCharacter { values: v }
                        })
                    })
                    .collect();
            }
        }
        out
    }
}

/// One additive contribution to a Casson–Gordon evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CgTerm {
    Base {
        pattern: String,
        character: String,
        trivial: bool,
        value: CgValue,
    },
    CompanionLift {
        site: String,
        lift: usize,
        curve: String,
        omega: RootOfUnity,
        sigma: i64,
        eta: u64,
    },
    SumCorrection {
        eta: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CgEvaluation {
    pub value: CgValue,
    pub terms: Vec<CgTerm>,
}

impl CgEvaluation {
    fn from_terms(terms: Vec<CgTerm>) -> Self {
        let mut value = CgValue::default();
        for t in &terms {
            match t {
                CgTerm::Base { value: v, .. } => {
                    value.sigma += &v.sigma;
                    value.eta += v.eta;
                }
                CgTerm::CompanionLift { sigma, eta, .. } => {
                    value.sigma += Rational::from_integer(BigInt::from(*sigma));
                    value.eta += eta;
                }
                CgTerm::SumCorrection { eta } => value.eta += eta,
            }
        }
        Self { value, terms }
    }
}

/// σ(K, χ), η(K, χ) for the knot described by `tree` and a character on its labels.
pub fn satellite_sigma_eta(tree: &SatelliteTree, chi: &LabelCharacter, n: u32) -> Result<CgEvaluation, CgError> {
    satellite_sigma_eta_with(tree, chi, n, DEFAULT_PRECISION_BITS)
}

pub fn satellite_sigma_eta_with(
    tree: &SatelliteTree,
    chi: &LabelCharacter,
    n: u32,
    start_bits: u32,
) -> Result<CgEvaluation, CgError> {
    if n != 2 {
        return Err(CgError::UnsupportedCover(n));
    }
    let labels = tree.labels();
    let restricted = LabelCharacter::new(
        labels
            .iter()
            .map(|l| {
                chi.get(l)
                    .map(|v| (l.clone(), v))
                    .ok_or_else(|| CgError::UnknownLabel(l.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?,
    );
    let order = restricted.order();
    if order != 1 && prime_power_base(order).is_none() {
        return Err(CgError::NotPrimePower { order });
    }
    let (terms, _) = evaluate_tree(tree, &restricted, start_bits)?;
    Ok(CgEvaluation::from_terms(terms))
}

// Returns the terms and whether χ is nontrivial on this subtree.
fn evaluate_tree(tree: &SatelliteTree, chi: &LabelCharacter, start_bits: u32) -> Result<(Vec<CgTerm>, bool), CgError> {
    match tree {
        SatelliteTree::Pattern(p) => {
            let nontrivial = p.labels().iter().any(|l| chi.get(l).is_some_and(|v| !v.is_one()));
            Ok((evaluate_pattern(p, chi, start_bits)?.terms, nontrivial))
        }
        SatelliteTree::ConnectedSum(a, b) => {
            let (mut ta, na) = evaluate_tree(a, chi, start_bits)?;
            let (tb, nb) = evaluate_tree(b, chi, start_bits)?;
            ta.extend(tb);
            if na && nb {
                ta.push(CgTerm::SumCorrection { eta: 1 });
            }
            Ok((ta, na || nb))
        }
    }
}

fn evaluate_pattern(p: &PatternNode, chi: &LabelCharacter, start_bits: u32) -> Result<CgEvaluation, CgError> {
    let mut terms = Vec::new();
    let mut nontrivial = 0u64;
    for s in &p.summands {
        let key = chi.restrict(s.labels())?;
        let value = s.get(&key).cloned().ok_or_else(|| CgError::MissingBaseEntry {
            pattern: s.name().to_string(),
            character: key_string(s.labels(), &key),
        })?;
        let trivial = key.iter().all(RootOfUnity::is_one);
        nontrivial += u64::from(!trivial);
        terms.push(CgTerm::Base {
            pattern: s.name().to_string(),
            character: key_string(s.labels(), &key),
            trivial,
            value,
        });
    }
    if nontrivial > 1 {
        terms.push(CgTerm::SumCorrection { eta: nontrivial - 1 });
    }
    for site in &p.sites {
        for (i, lift) in site.lifts.iter().enumerate() {
            let omega = chi.eval(lift)?;
            let lt = site.companion.lt(&omega, start_bits)?;
            terms.push(CgTerm::CompanionLift {
                site: site.label.clone(),
                lift: i + 1,
                curve: lift.to_string(),
                omega,
                sigma: lt.signature,
                eta: if omega.is_one() { 0 } else { lt.nullity as u64 },
            });
        }
    }
    Ok(CgEvaluation::from_terms(terms))
}

/// σ and η of K₁ # K₂ for χ₁ ⊕ χ₂ from the values and triviality of each side.
pub fn connected_sum_sigma_eta(a: (&CgValue, bool), b: (&CgValue, bool)) -> CgValue {
    let (va, trivial_a) = a;
    let (vb, trivial_b) = b;
    CgValue {
        sigma: &va.sigma + &vb.sigma,
        eta: va.eta + vb.eta + u64::from(!trivial_a && !trivial_b),
    }
}

/// Cover bookkeeping for a satellite with winding number w in an n-fold cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindingBookkeeping {
    pub h: u64,
    pub cover_degree: u64,
    pub copies: u64,
}

impl WindingBookkeeping {
    /// Whether the companion terms reduce to Levine–Tristram values (w ≡ 0 mod n).
    pub fn lt_reducible(&self) -> bool {
        self.cover_degree == 1
    }
}

pub fn general_winding_bookkeeping(n: u64, w: i64) -> WindingBookkeeping {
    assert!(n >= 1, "cover degree must be positive");
    let h = num_integer::gcd(n, w.unsigned_abs());
    WindingBookkeeping {
        h,
        cover_degree: n / h,
        copies: h,
    }
}

/// Characters of a knot's linking form evaluated through its satellite description.
#[derive(Clone, Debug)]
pub struct KnotCgSource {
    tree: SatelliteTree,
    form: LinkingForm,
    labels: Vec<String>,
    basis: Vec<GroupElement>,
    start_bits: u32,
}

impl KnotCgSource {
    /// The tree's Seifert matrix must symmetrize to the block sum of its pattern presentations.
    pub fn new(tree: SatelliteTree) -> Result<Self, CgError> {
        let seifert = tree.seifert_matrix()?;
        if seifert.symmetrized() != tree.presentation() {
            return Err(CgError::PresentationMismatch);
        }
        let form = LinkingForm::from_seifert(&seifert)?;
        let labels = tree.labels();
        let basis = (0..labels.len()).map(|i| form.basis_element(i)).collect();
        Ok(Self {
            tree,
            form,
            labels,
            basis,
            start_bits: DEFAULT_PRECISION_BITS,
        })
    }

    pub fn with_precision(mut self, start_bits: u32) -> Self {
        self.start_bits = start_bits;
        self
    }

    pub fn with_enum_bound(mut self, bound: u64) -> Self {
        self.form = self.form.with_enum_bound(bound);
        self
    }

    pub fn tree(&self) -> &SatelliteTree {
        &self.tree
    }

    pub fn form(&self) -> &LinkingForm {
        &self.form
    }

    /// χ_x(label_j) = λ(x, e_j).
    pub fn character_of(&self, x: &GroupElement) -> LabelCharacter {
        LabelCharacter::new(
            self.labels
                .iter()
                .cloned()
                .zip(self.basis.iter().map(|b| self.form.pair_elements(x, b))),
        )
    }

    pub fn cg_eval(&self, x: &GroupElement) -> Result<CgEvaluation, CgError> {
        satellite_sigma_eta_with(&self.tree, &self.character_of(x), 2, self.start_bits)
    }
}


#[cfg(test)]
mod properties {
    use super::*;
    use crate::testing::companion_pool;
    use proptest::prelude::*;

    const SUMMANDS: [(&str, [[i64; 2]; 2]); 4] = [
        ("h3", [[0, 3], [3, 0]]),
        ("h5", [[0, 5], [5, 0]]),
        ("c3", [[2, 1], [1, 2]]),
        ("h2", [[0, 2], [2, 0]]),
    ];

    #[derive(Clone, Debug)]
    struct Spec {
        summands: Vec<usize>,
        seeds: Vec<u64>,
        sites: Vec<(Vec<i64>, usize)>,
    }

    fn table(idx: usize, k: usize, seed: u64) -> PatternBaseTable {
        let (name, rows) = SUMMANDS[idx];
        let labels = vec![format!("e{k}"), format!("f{k}")];
        let b = IntegerMatrix::from_rows(&rows);
        let zero = PatternBaseTable::zero(name, labels.clone(), b.clone()).unwrap();
        let mut entries = Vec::new();
        for key in zero.entries().keys() {
            let neg: Vec<RootOfUnity> = key.iter().map(RootOfUnity::neg).collect();
            let rep = std::cmp::min(key.clone(), neg);
            let h = rep
                .iter()
                .fold(seed, |acc, r| acc.wrapping_mul(31).wrapping_add(r.num() * 7 + r.den()));
            let trivial = key.iter().all(RootOfUnity::is_one);
            let sigma = if trivial { 0 } else { (h % 7) as i64 - 3 };
            entries.push((key.clone(), CgValue::from_ints(sigma, (h / 7) % 3)));
        }
        PatternBaseTable::new(&format!("{name}_{k}"), labels, b, entries).unwrap()
    }

    fn spec() -> impl Strategy<Value = Spec> {
        (1usize..=2)
            .prop_flat_map(|k| {
                (
                    prop::collection::vec(0usize..SUMMANDS.len(), k),
                    prop::collection::vec(any::<u64>(), k),
                    prop::collection::vec((prop::collection::vec(-1i64..=1, 2 * k), 0usize..5), 2..=4),
                )
            })
            .prop_map(|(summands, seeds, sites)| Spec { summands, seeds, sites })
    }

    fn build(spec: &Spec, unknotted: bool) -> PatternNode {
        let pool = companion_pool();
        let tables: Vec<Arc<PatternBaseTable>> = spec
            .summands
            .iter()
            .zip(&spec.seeds)
            .enumerate()
            .map(|(k, (&i, &s))| Arc::new(table(i, k, s)))
            .collect();
        let labels: Vec<String> = tables.iter().flat_map(|t| t.labels().to_vec()).collect();
        let sites = spec
            .sites
            .iter()
            .enumerate()
            .map(|(i, (coefs, c))| {
                let mut terms: Vec<(String, i64)> = labels
                    .iter()
                    .zip(coefs)
                    .filter(|(_, &c)| c != 0)
                    .map(|(l, &c)| (l.clone(), c))
                    .collect();
                if terms.is_empty() {
                    terms.push((labels[0].clone(), 1));
                }
                let companion = if unknotted {
                    Companion::unknot()
                } else {
                    Companion::knot(pool[*c].clone())
                };
                InfectionSite::new(&format!("s{i}"), Curve { terms }, companion)
            })
            .collect();
        PatternNode::new("P", tables, sites, None).unwrap()
    }

    fn prime_power_characters(node: &PatternNode) -> Vec<LabelCharacter> {
        SatelliteTree::Pattern(node.clone())
            .characters()
            .into_iter()
            .filter(|c| c.order() == 1 || prime_power_base(c.order()).is_some())
            .collect()
    }

    fn eval(node: &PatternNode, chi: &LabelCharacter) -> CgEvaluation {
        satellite_sigma_eta(&SatelliteTree::Pattern(node.clone()), chi, 2).unwrap()
    }

    fn base_only(ev: &CgEvaluation) -> CgValue {
        let mut v = CgValue::default();
        for t in &ev.terms {
            match t {
                CgTerm::Base { value, .. } => {
                    v.sigma += &value.sigma;
                    v.eta += value.eta;
                }
                CgTerm::SumCorrection { eta } => v.eta += eta,
                CgTerm::CompanionLift { .. } => {}
            }
        }
        v
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn infection_order_does_not_matter(s in spec(), perm_seed in any::<u64>()) {
            let node = build(&s, false);
            let mut order: Vec<String> = node.sites().iter().map(|x| x.label.clone()).collect();
            let mut rng = perm_seed;
            for i in (1..order.len()).rev() {
                rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                order.swap(i, (rng >> 33) as usize % (i + 1));
            }
            let mut step = node.clone();
            for label in &order {
                let idx = step.sites().iter().position(|x| &x.label == label).unwrap();
                step = step.infect_partially(&[idx], DEFAULT_PRECISION_BITS).unwrap();
            }
            prop_assert!(step.sites().is_empty());
            let table = &step.summands()[0];
            for chi in prime_power_characters(&node) {
                let key: Vec<RootOfUnity> = table.labels().iter().map(|l| chi.get(l).unwrap()).collect();
                prop_assert_eq!(table.get(&key), Some(&eval(&node, &chi).value));
            }
        }

        #[test]
        fn unknot_companions_leave_base_values(s in spec()) {
            let node = build(&s, true);
            for chi in prime_power_characters(&node) {
                let ev = eval(&node, &chi);
                prop_assert_eq!(&ev.value, &base_only(&ev));
                if node.summands().len() == 1 {
                    let t = &node.summands()[0];
                    let key: Vec<RootOfUnity> = t.labels().iter().map(|l| chi.get(l).unwrap()).collect();
                    prop_assert_eq!(Some(&ev.value), t.get(&key));
                }
            }
        }

        #[test]
        fn negated_character_same_values(s in spec()) {
            let node = build(&s, false);
            for chi in prime_power_characters(&node) {
                prop_assert_eq!(eval(&node, &chi).value, eval(&node, &chi.negated()).value);
            }
        }

        #[test]
        fn eta_dominates_base(s in spec()) {
            let node = build(&s, false);
            for chi in prime_power_characters(&node) {
                let ev = eval(&node, &chi);
                prop_assert!(ev.value.eta >= base_only(&ev).eta);
            }
        }
    }
}
