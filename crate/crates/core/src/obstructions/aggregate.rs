// Combination of lower and upper bound rules into intervals for sn and g₄.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::casson_gordon::KnotCgSource;
use crate::ccomplex_link::CComplexData;
use crate::exact_algebra::RootOfUnity;
use crate::seifert_knot::{arf, lt_signature_nullity_with, SeifertMatrix};

use super::search::{cg_sn_obstruct, gilmer_g4_obstruct, Verdict};
use super::{format_point, is_admissible, point_bound, EvalOptions, ObstructionError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quantity {
    Sn,
    G4,
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantity::Sn => "sn",
            Quantity::G4 => "g4",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    /// sn is defined for a knot only when Arf(K) = 0.
    ArfGate,
    /// sn is defined for a link only when its stable-sliceness invariants vanish.
    SchneidermanGate,
    /// g₄ ≥ ⌈(|σ_K(ω)| + η_K(ω))/2⌉.
    SignatureGenus,
    /// sn ≥ ⌈(|σ_L(ω)| + |η_L(ω) − m + 1|)/2⌉.
    StableSignature,
    /// g₄ ≥ g + 1 when the Casson–Gordon genus search is obstructed at g.
    CassonGordonGenus,
    /// sn ≥ n + 1 when the Casson–Gordon stabilization search is obstructed at n.
    CassonGordonStable,
    /// sn ≥ 1 when g₄ ≥ 1.
    NotSlice,
    /// g₄ ≤ genus of the Seifert surface.
    SeifertGenus,
    /// sn ≤ g₄ for knots with Arf(K) = 0.
    StableGenus,
    /// sn ≤ k when unknotting k winding-zero companions leaves a slice knot.
    WindingPattern,
    /// User-asserted upper bound.
    AssertedUpper,
}

impl RuleId {
    pub const ALL: [RuleId; 11] = [
        RuleId::ArfGate,
        RuleId::SchneidermanGate,
        RuleId::SignatureGenus,
        RuleId::StableSignature,
        RuleId::CassonGordonGenus,
        RuleId::CassonGordonStable,
        RuleId::NotSlice,
        RuleId::SeifertGenus,
        RuleId::StableGenus,
        RuleId::WindingPattern,
        RuleId::AssertedUpper,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleId::ArfGate => "arf-gate",
            RuleId::SchneidermanGate => "schneiderman-gate",
            RuleId::SignatureGenus => "signature-genus",
            RuleId::StableSignature => "stable-signature",
            RuleId::CassonGordonGenus => "casson-gordon-genus",
            RuleId::CassonGordonStable => "casson-gordon-stable",
            RuleId::NotSlice => "not-slice",
            RuleId::SeifertGenus => "seifert-genus",
            RuleId::StableGenus => "stable-genus",
            RuleId::WindingPattern => "winding-pattern",
            RuleId::AssertedUpper => "asserted-upper",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleSet(BTreeSet<RuleId>);

impl RuleSet {
    pub fn all() -> Self {
        Self(RuleId::ALL.into_iter().collect())
    }

    pub fn only(rules: impl IntoIterator<Item = RuleId>) -> Self {
        Self(rules.into_iter().collect())
    }

    pub fn without(mut self, rule: RuleId) -> Self {
        self.0.remove(&rule);
        self
    }

    pub fn contains(&self, rule: RuleId) -> bool {
        self.0.contains(&rule)
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        Self::all()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Contribution {
    Lower(u64),
    Upper(u64),
    Defined,
    Undefined,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Point {
        omega: Vec<RootOfUnity>,
        sigma: i64,
        eta: u64,
    },
    /// The genus or stabilization number refuted by an obstruction search.
    Candidate {
        candidate: u64,
        sigma_minus1: i64,
    },
    Bound {
        quantity: Quantity,
        value: u64,
    },
    SeifertGenus {
        genus: u64,
    },
    Arf {
        arf: u8,
    },
    Schneiderman {
        failing: Vec<String>,
    },
    Sites {
        sites: Vec<String>,
        note: String,
    },
    Note(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProvenanceEntry {
    pub quantity: Quantity,
    pub rule: RuleId,
    pub contribution: Contribution,
    pub witness: Witness,
}

/// Certified interval for sn or g₄; `upper = None` means unbounded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub quantity: Quantity,
    pub defined: bool,
    pub lower: u64,
    pub upper: Option<u64>,
    pub provenance: Vec<ProvenanceEntry>,
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.defined, self.upper) {
            (false, _) => write!(f, "{} undefined", self.quantity),
            (true, Some(u)) if u == self.lower => write!(f, "{} = {}", self.quantity, u),
            (true, Some(u)) => write!(f, "{} ∈ [{}, {}]", self.quantity, self.lower, u),
            (true, None) => write!(f, "{} ∈ [{}, ∞)", self.quantity, self.lower),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assertion {
    pub quantity: Quantity,
    pub upper: u64,
    pub note: String,
}

/// Inputs deciding stable sliceness of a link with vanishing pairwise linking numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StablySliceInputs {
    pub triple_linking: Vec<i64>,
    pub sato_levine_mod2: Vec<u8>,
    pub arf_components: Vec<u8>,
    pub pairwise_linking_zero: bool,
}

impl Default for StablySliceInputs {
    fn default() -> Self {
        Self {
            triple_linking: vec![],
            sato_levine_mod2: vec![],
            arf_components: vec![],
            pairwise_linking_zero: true,
        }
    }
}

impl StablySliceInputs {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.pairwise_linking_zero {
            out.push("pairwise linking numbers".to_string());
        }
        if self.triple_linking.iter().any(|&x| x != 0) {
            out.push("triple linking numbers".to_string());
        }
        if self.sato_levine_mod2.iter().any(|&x| x % 2 != 0) {
            out.push("mod 2 Sato-Levine invariants".to_string());
        }
        if self.arf_components.iter().any(|&x| x % 2 != 0) {
            out.push("component Arf invariants".to_string());
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct KnotSubject {
    pub seifert: SeifertMatrix,
    pub points: Vec<RootOfUnity>,
    pub cg: Option<KnotCgSource>,
    /// Winding-zero sites whose companions may be unknotted to reach a slice knot.
    pub slice_after_unknotting: Option<(Vec<String>, String)>,
    pub assertions: Vec<Assertion>,
}

impl KnotSubject {
    pub fn new(seifert: SeifertMatrix) -> Self {
        Self {
            seifert,
            points: vec![RootOfUnity::minus_one()],
            cg: None,
            slice_after_unknotting: None,
            assertions: vec![],
        }
    }

    /// Knot given by a satellite description; its Seifert matrix is the pattern's.
    pub fn from_satellite(cg: KnotCgSource) -> Result<Self, ObstructionError> {
        let mut k = Self::new(cg.tree().seifert_matrix()?);
        k.cg = Some(cg);
        Ok(k)
    }
}

#[derive(Clone, Debug)]
pub struct LinkSubject {
    pub cc: CComplexData,
    pub points: Vec<Vec<RootOfUnity>>,
    pub stably_slice: StablySliceInputs,
    pub assertions: Vec<Assertion>,
}

#[derive(Clone, Debug)]
pub enum Subject {
    Knot(KnotSubject),
    Link(LinkSubject),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AggregateReport {
    pub sn: BoundReport,
    pub g4: Option<BoundReport>,
}

struct Collector {
    quantity: Quantity,
    entries: Vec<ProvenanceEntry>,
}

impl Collector {
    fn new(quantity: Quantity) -> Self {
        Self {
            quantity,
            entries: Vec::new(),
        }
    }

    fn push(&mut self, rule: RuleId, contribution: Contribution, witness: Witness) {
        self.entries.push(ProvenanceEntry {
            quantity: self.quantity,
            rule,
            contribution,
            witness,
        });
    }

    fn finish(self) -> Result<BoundReport, ObstructionError> {
        let defined = !self.entries.iter().any(|e| e.contribution == Contribution::Undefined);
        let lower = self
            .entries
            .iter()
            .filter_map(|e| match e.contribution {
                Contribution::Lower(v) => Some(v),
                _ => None,
            })
            .max()
            .unwrap_or(0);
        let upper = self
            .entries
            .iter()
            .filter_map(|e| match e.contribution {
                Contribution::Upper(v) => Some(v),
                _ => None,
            })
            .min();
        if defined {
            if let Some(u) = upper.filter(|&u| u < lower) {
                return Err(ObstructionError::InconsistentBounds {
                    quantity: self.quantity,
                    lower,
                    upper: u,
                });
            }
        }
        Ok(BoundReport {
            quantity: self.quantity,
            defined,
            lower: if defined { lower } else { 0 },
            upper: if defined { upper } else { None },
            provenance: self.entries,
        })
    }
}

fn check_point(point: &[RootOfUnity], opts: &EvalOptions) -> Result<(), ObstructionError> {
    if opts.assume_admissible || is_admissible(point) {
        Ok(())
    } else {
        Err(ObstructionError::InadmissiblePoint {
            point: format_point(point),
        })
    }
}

fn genus_point(k: &KnotSubject, omega: &RootOfUnity, opts: &EvalOptions) -> Result<(u64, Witness), ObstructionError> {
    check_point(std::slice::from_ref(omega), opts)?;
    let r = lt_signature_nullity_with(&k.seifert, omega, opts.precision_bits)?;
    let value = r.signature.unsigned_abs() + r.nullity as u64;
    Ok((
        value.div_ceil(2),
        Witness::Point {
            omega: vec![*omega],
            sigma: r.signature,
            eta: r.nullity as u64,
        },
    ))
}

fn stable_point(
    cc: &CComplexData,
    omega: &[RootOfUnity],
    opts: &EvalOptions,
) -> Result<(u64, Witness), ObstructionError> {
    let p = point_bound(cc, omega, opts)?;
    Ok((
        p.bound,
        Witness::Point {
            omega: p.omega,
            sigma: p.signature.sigma,
            eta: p.signature.eta as u64,
        },
    ))
}

fn sigma_minus1(k: &KnotSubject, opts: &EvalOptions) -> Result<i64, ObstructionError> {
    Ok(lt_signature_nullity_with(&k.seifert, &RootOfUnity::minus_one(), opts.precision_bits)?.signature)
}

fn obstructed_at(src: &KnotCgSource, quantity: Quantity, candidate: u64, sigma: i64) -> Result<bool, ObstructionError> {
    let eval = |x: &_| src.cg_eval(x);
    let r = match quantity {
        Quantity::G4 => gilmer_g4_obstruct(src.form(), candidate, sigma, &eval)?,
        Quantity::Sn => cg_sn_obstruct(src.form(), candidate, sigma, &eval)?,
    };
    Ok(r.verdict == Verdict::Obstructed)
}

// Largest candidate c with every c' ≤ c obstructed, if any.
fn largest_obstructed(src: &KnotCgSource, quantity: Quantity, sigma: i64) -> Result<Option<u64>, ObstructionError> {
    let mut c = 0;
    while obstructed_at(src, quantity, c, sigma)? {
        c += 1;
    }
    Ok(c.checked_sub(1))
}

fn best(items: impl IntoIterator<Item = (u64, Witness)>) -> Option<(u64, Witness)> {
    items
        .into_iter()
        .fold(None, |acc: Option<(u64, Witness)>, (v, w)| match acc {
            Some((b, bw)) if b >= v => Some((b, bw)),
            _ => Some((v, w)),
        })
}

fn knot_g4(k: &KnotSubject, rules: &RuleSet, opts: &EvalOptions) -> Result<BoundReport, ObstructionError> {
    let mut c = Collector::new(Quantity::G4);
    if rules.contains(RuleId::SignatureGenus) {
        let points = k
            .points
            .iter()
            .map(|w| genus_point(k, w, opts))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some((v, w)) = best(points).filter(|(v, _)| *v > 0) {
            c.push(RuleId::SignatureGenus, Contribution::Lower(v), w);
        }
    }
    if let (true, Some(src)) = (rules.contains(RuleId::CassonGordonGenus), &k.cg) {
        let sigma = sigma_minus1(k, opts)?;
        if let Some(g) = largest_obstructed(src, Quantity::G4, sigma)? {
            c.push(
                RuleId::CassonGordonGenus,
                Contribution::Lower(g + 1),
                Witness::Candidate {
                    candidate: g,
                    sigma_minus1: sigma,
                },
            );
        }
    }
    if rules.contains(RuleId::SeifertGenus) {
        let genus = k.seifert.genus() as u64;
        c.push(
            RuleId::SeifertGenus,
            Contribution::Upper(genus),
            Witness::SeifertGenus { genus },
        );
    }
    push_assertions(&mut c, &k.assertions, rules);
    c.finish()
}

fn push_assertions(c: &mut Collector, assertions: &[Assertion], rules: &RuleSet) {
    if !rules.contains(RuleId::AssertedUpper) {
        return;
    }
    let quantity = c.quantity;
    for a in assertions.iter().filter(|a| a.quantity == quantity) {
        c.push(
            RuleId::AssertedUpper,
            Contribution::Upper(a.upper),
            Witness::Note(a.note.clone()),
        );
    }
}

fn knot_sn(
    k: &KnotSubject,
    g4: &BoundReport,
    rules: &RuleSet,
    opts: &EvalOptions,
) -> Result<BoundReport, ObstructionError> {
    let mut c = Collector::new(Quantity::Sn);
    let a = arf(&k.seifert)?;
    if rules.contains(RuleId::ArfGate) {
        let verdict = if a == 0 {
            Contribution::Defined
        } else {
            Contribution::Undefined
        };
        c.push(RuleId::ArfGate, verdict, Witness::Arf { arf: a });
        if a != 0 {
            return c.finish();
        }
    }
    if rules.contains(RuleId::StableSignature) {
        let cc = CComplexData::from_seifert(&k.seifert);
        let points = k
            .points
            .iter()
            .map(|w| stable_point(&cc, &[*w], opts))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some((v, w)) = best(points).filter(|(v, _)| *v > 0) {
            c.push(RuleId::StableSignature, Contribution::Lower(v), w);
        }
    }
    if let (true, Some(src)) = (rules.contains(RuleId::CassonGordonStable), &k.cg) {
        let sigma = sigma_minus1(k, opts)?;
        if let Some(n) = largest_obstructed(src, Quantity::Sn, sigma)? {
            c.push(
                RuleId::CassonGordonStable,
                Contribution::Lower(n + 1),
                Witness::Candidate {
                    candidate: n,
                    sigma_minus1: sigma,
                },
            );
        }
    }
    if rules.contains(RuleId::NotSlice) && g4.lower >= 1 {
        c.push(
            RuleId::NotSlice,
            Contribution::Lower(1),
            Witness::Bound {
                quantity: Quantity::G4,
                value: g4.lower,
            },
        );
    }
    if let (true, Some(u), 0) = (rules.contains(RuleId::StableGenus), g4.upper, a) {
        c.push(
            RuleId::StableGenus,
            Contribution::Upper(u),
            Witness::Bound {
                quantity: Quantity::G4,
                value: u,
            },
        );
    }
    if let (true, Some((sites, note))) = (rules.contains(RuleId::WindingPattern), &k.slice_after_unknotting) {
        c.push(
            RuleId::WindingPattern,
            Contribution::Upper(winding_pattern_bound(k, sites)?),
            Witness::Sites {
                sites: sites.clone(),
                note: note.clone(),
            },
        );
    }
    push_assertions(&mut c, &k.assertions, rules);
    c.finish()
}

fn winding_pattern_bound(k: &KnotSubject, sites: &[String]) -> Result<u64, ObstructionError> {
    let tree =
        k.cg.as_ref()
            .map(KnotCgSource::tree)
            .ok_or(ObstructionError::RuleNotApplicable(RuleId::WindingPattern))?;
    let known = site_labels(tree);
    for s in sites {
        if !known.contains(s) {
            return Err(crate::casson_gordon::CgError::UnknownLabel(s.clone()).into());
        }
    }
    Ok(sites.iter().collect::<BTreeSet<_>>().len() as u64)
}

fn site_labels(tree: &crate::casson_gordon::SatelliteTree) -> BTreeSet<String> {
    use crate::casson_gordon::SatelliteTree;
    match tree {
        SatelliteTree::Pattern(p) => p.sites().iter().map(|s| s.label.clone()).collect(),
        SatelliteTree::ConnectedSum(a, b) => {
            let mut s = site_labels(a);
            s.extend(site_labels(b));
            s
        }
    }
}

fn link_sn(l: &LinkSubject, rules: &RuleSet, opts: &EvalOptions) -> Result<BoundReport, ObstructionError> {
    let mut c = Collector::new(Quantity::Sn);
    if rules.contains(RuleId::SchneidermanGate) {
        let failing = l.stably_slice.failures();
        let verdict = if failing.is_empty() {
            Contribution::Defined
        } else {
            Contribution::Undefined
        };
        c.push(
            RuleId::SchneidermanGate,
            verdict,
            Witness::Schneiderman {
                failing: failing.clone(),
            },
        );
        if !failing.is_empty() {
            return c.finish();
        }
    }
    if rules.contains(RuleId::StableSignature) {
        let points = l
            .points
            .iter()
            .map(|w| stable_point(&l.cc, w, opts))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some((v, w)) = best(points).filter(|(v, _)| *v > 0) {
            c.push(RuleId::StableSignature, Contribution::Lower(v), w);
        }
    }
    push_assertions(&mut c, &l.assertions, rules);
    c.finish()
}

/// Bound intervals for sn (and g₄ for knots) from every active rule, with provenance.
pub fn aggregate(subject: &Subject, rules: &RuleSet, opts: &EvalOptions) -> Result<AggregateReport, ObstructionError> {
    match subject {
        Subject::Knot(k) => {
            let g4 = knot_g4(k, rules, opts)?;
            let sn = knot_sn(k, &g4, rules, opts)?;
            Ok(AggregateReport { sn, g4: Some(g4) })
        }
        Subject::Link(l) => Ok(AggregateReport {
            sn: link_sn(l, rules, opts)?,
            g4: None,
        }),
    }
}

/// Re-derives the contribution of one provenance entry from its witness alone.
pub fn replay(
    subject: &Subject,
    entry: &ProvenanceEntry,
    opts: &EvalOptions,
) -> Result<Contribution, ObstructionError> {
    let not_applicable = || ObstructionError::RuleNotApplicable(entry.rule);
    let gate = |ok: bool| {
        if ok {
            Contribution::Defined
        } else {
            Contribution::Undefined
        }
    };
    match (&entry.rule, &entry.witness, subject) {
        (RuleId::ArfGate, Witness::Arf { .. }, Subject::Knot(k)) => Ok(gate(arf(&k.seifert)? == 0)),
        (RuleId::SchneidermanGate, Witness::Schneiderman { .. }, Subject::Link(l)) => {
            Ok(gate(l.stably_slice.failures().is_empty()))
        }
        (RuleId::SignatureGenus, Witness::Point { omega, .. }, Subject::Knot(k)) => {
            let [w] = omega.as_slice() else {
                return Err(not_applicable());
            };
            Ok(Contribution::Lower(genus_point(k, w, opts)?.0))
        }
        (RuleId::StableSignature, Witness::Point { omega, .. }, Subject::Knot(k)) => {
            let cc = CComplexData::from_seifert(&k.seifert);
            Ok(Contribution::Lower(stable_point(&cc, omega, opts)?.0))
        }
        (RuleId::StableSignature, Witness::Point { omega, .. }, Subject::Link(l)) => {
            Ok(Contribution::Lower(stable_point(&l.cc, omega, opts)?.0))
        }
        (
            RuleId::CassonGordonGenus | RuleId::CassonGordonStable,
            Witness::Candidate { candidate, .. },
            Subject::Knot(k),
        ) => {
            let src = k.cg.as_ref().ok_or_else(not_applicable)?;
            let q = if entry.rule == RuleId::CassonGordonGenus {
                Quantity::G4
            } else {
                Quantity::Sn
            };
            let sigma = sigma_minus1(k, opts)?;
            let hit = obstructed_at(src, q, *candidate, sigma)?;
            Ok(Contribution::Lower(if hit { candidate + 1 } else { 0 }))
        }
        (RuleId::NotSlice, Witness::Bound { value, .. }, _) => Ok(Contribution::Lower(u64::from(*value >= 1))),
        (RuleId::SeifertGenus, Witness::SeifertGenus { .. }, Subject::Knot(k)) => {
            Ok(Contribution::Upper(k.seifert.genus() as u64))
        }
        (RuleId::StableGenus, Witness::Bound { value, .. }, Subject::Knot(k)) => {
            if arf(&k.seifert)? == 0 {
                Ok(Contribution::Upper(*value))
            } else {
                Err(not_applicable())
            }
        }
        (RuleId::WindingPattern, Witness::Sites { sites, .. }, Subject::Knot(k)) => {
            Ok(Contribution::Upper(winding_pattern_bound(k, sites)?))
        }
        (RuleId::AssertedUpper, Witness::Note(note), _) => {
            let assertions = match subject {
                Subject::Knot(k) => &k.assertions,
                Subject::Link(l) => &l.assertions,
            };
            assertions
                .iter()
                .find(|a| a.quantity == entry.quantity && &a.note == note)
                .map(|a| Contribution::Upper(a.upper))
                .ok_or_else(not_applicable)
        }
        _ => Err(not_applicable()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_algebra::IntegerMatrix;

    fn replay_all(subject: &Subject, report: &AggregateReport) {
        let opts = EvalOptions::default();
        for e in report
            .sn
            .provenance
            .iter()
            .chain(report.g4.iter().flat_map(|g| &g.provenance))
        {
            assert_eq!(replay(subject, e, &opts).unwrap(), e.contribution, "{e:?}");
        }
    }

    #[test]
    fn trefoil_sn_is_undefined() {
        let k = KnotSubject::new(SeifertMatrix::from_rows(&[[-1, 1], [0, -1]]).unwrap());
        let s = Subject::Knot(k);
        let r = aggregate(&s, &RuleSet::all(), &EvalOptions::default()).unwrap();
        assert!(!r.sn.defined);
        assert_eq!(r.sn.to_string(), "sn undefined");
        assert_eq!(r.g4.as_ref().unwrap().to_string(), "g4 = 1");
        replay_all(&s, &r);
    }

    #[test]
    fn unknot_is_trivial() {
        let s = Subject::Knot(KnotSubject::new(SeifertMatrix::unknot()));
        let r = aggregate(&s, &RuleSet::all(), &EvalOptions::default()).unwrap();
        assert_eq!(r.sn.to_string(), "sn = 0");
        assert_eq!(r.g4.unwrap().to_string(), "g4 = 0");
    }

    #[test]
    fn six_component_link() {
        let a = IntegerMatrix::from_rows(&[[0, 1, 1], [1, 0, 1], [1, 1, 0]]);
        let cc = CComplexData::constant(3, vec![0, 0, 1, 1, 2, 2], a).unwrap();
        let mut l = LinkSubject {
            cc,
            points: vec![vec![RootOfUnity::minus_one(); 3]],
            stably_slice: StablySliceInputs::default(),
            assertions: vec![Assertion {
                quantity: Quantity::Sn,
                upper: 2,
                note: "slice after two band passes".into(),
            }],
        };
        let s = Subject::Link(l.clone());
        let r = aggregate(&s, &RuleSet::all(), &EvalOptions::default()).unwrap();
        assert_eq!(r.sn.to_string(), "sn = 2");
        assert!(r.g4.is_none());
        replay_all(&s, &r);
        l.assertions[0].upper = 1;
        assert_eq!(
            aggregate(&Subject::Link(l.clone()), &RuleSet::all(), &EvalOptions::default()).unwrap_err(),
            ObstructionError::InconsistentBounds {
                quantity: Quantity::Sn,
                lower: 2,
                upper: 1
            }
        );
        l.stably_slice.triple_linking = vec![1];
        let r = aggregate(&Subject::Link(l), &RuleSet::all(), &EvalOptions::default()).unwrap();
        assert!(!r.sn.defined);
    }

    #[test]
    fn rules_parse() {
        for r in RuleId::ALL {
            assert_eq!(r.name().parse::<RuleId>().unwrap(), r);
        }
        assert!("nope".parse::<RuleId>().is_err());
    }
}
