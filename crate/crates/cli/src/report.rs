//! Reports. Both the JSON and the text output are rendered from these types;
//! rationals and roots of unity are carried as strings.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::input::FORMAT_VERSION;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub format: u32,
    pub command: String,
    pub results: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub target: String,
    pub body: Body,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Body {
    Invariants(Invariants),
    Multisig(Multisig),
    Arf(ArfOut),
    LinkingForm(LinkingFormOut),
    Metabolizers(MetabolizersOut),
    CgSatellite(CgSatelliteOut),
    Bounds(BoundsOut),
    G4Check(G4CheckOut),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub genus: usize,
    pub alexander: String,
    pub determinant: String,
    pub arf: u8,
    pub points: Vec<KnotPoint>,
    pub cobordism: Option<CobordismOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnotPoint {
    pub omega: String,
    pub sigma: i64,
    pub nullity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CobordismOut {
    pub to: String,
    pub omega: String,
    pub signature_term: i64,
    pub nullity_term: i64,
    pub bound: i64,
    pub inequality: String,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multisig {
    pub colors: usize,
    pub components: usize,
    pub points: Vec<LinkPoint>,
    pub sn_lower_bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkPoint {
    pub omega: Vec<String>,
    pub sigma: i64,
    pub eta: usize,
    pub value: u64,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArfOut {
    pub arf: u8,
    pub arf_via_determinant: u8,
    /// Pairs (e_i, f_i) as bit strings, present when the Arf invariant vanishes.
    pub null_e_basis: Option<Vec<[String; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkingFormOut {
    pub order: u64,
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<Vec<String>>,
    pub pairing: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetabolizersOut {
    pub order: u64,
    pub metabolizers: Vec<SubgroupOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupOut {
    pub order: u64,
    /// Generators in the coordinates of the presentation matrix.
    pub generators: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgSatelliteOut {
    pub characters: Vec<CgOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CgOut {
    pub character: String,
    pub order: u64,
    pub sigma: String,
    pub eta: u64,
    pub terms: Vec<TermOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "term", rename_all = "kebab-case")]
pub enum TermOut {
    Base {
        pattern: String,
        character: String,
        sigma: String,
        eta: u64,
    },
    CompanionLift {
        site: String,
        lift: usize,
        curve: String,
        omega: String,
        sigma: i64,
        eta: u64,
    },
    SumCorrection {
        eta: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsOut {
    pub sn: BoundOut,
    pub g4: Option<BoundOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundOut {
    pub summary: String,
    pub defined: bool,
    pub lower: u64,
    pub upper: Option<u64>,
    pub provenance: Vec<ProvenanceOut>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceOut {
    pub rule: String,
    pub contribution: String,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct G4CheckOut {
    pub genus: u64,
    /// "obstructed" or "inconclusive".
    pub verdict: String,
    pub rank_bound: usize,
    pub threshold: u64,
    pub sigma_minus1: i64,
    pub witness: WitnessOut,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "witness", rename_all = "kebab-case")]
pub enum WitnessOut {
    SignatureExceedsRank {
        sigma_minus1: i64,
        rank: usize,
    },
    PrimeRefuted {
        p: u64,
        refutations: Vec<RefutationOut>,
    },
    AllPairsRefuted {
        pairs: usize,
    },
    Survivor {
        beta1_rank: usize,
        metabolizer: SubgroupOut,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationOut {
    pub metabolizer: SubgroupOut,
    pub beta1_rank: usize,
    pub element: Vec<String>,
    pub order: u64,
    pub sigma: String,
    pub eta: u64,
    pub lhs: String,
    pub rhs: String,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            format: FORMAT_VERSION,
            command: command.to_string(),
            results: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if self.results.is_empty() {
            writeln!(out, "{}: no requests", self.command).unwrap();
        }
        for e in &self.results {
            writeln!(out, "{} {}", self.command, e.target).unwrap();
            e.body.render(&mut out);
        }
        out
    }
}

fn vector(v: &[String]) -> String {
    format!("({})", v.join(", "))
}

fn subgroup(s: &SubgroupOut) -> String {
    let gens: Vec<String> = s.generators.iter().map(|g| vector(g)).collect();
    format!("<{}> of order {}", gens.join(", "), s.order)
}

impl Body {
    fn render(&self, out: &mut String) {
        match self {
            Body::Invariants(b) => {
                writeln!(
                    out,
                    "  genus {}, Δ(t) = {}, det = {}, Arf = {}",
                    b.genus, b.alexander, b.determinant, b.arf
                )
                .unwrap();
                for p in &b.points {
                    writeln!(out, "  ω = e^(2πi·{}): σ = {}, η = {}", p.omega, p.sigma, p.nullity).unwrap();
                }
                if let Some(c) = &b.cobordism {
                    let verdict = if c.holds { "holds" } else { "fails" };
                    writeln!(
                        out,
                        "  cobordism to {} at ω = e^(2πi·{}): {} {verdict}",
                        c.to, c.omega, c.inequality
                    )
                    .unwrap();
                }
            }
            Body::Multisig(b) => {
                writeln!(out, "  {} colors, {} components", b.colors, b.components).unwrap();
                for p in &b.points {
                    writeln!(
                        out,
                        "  ω = {}: σ = {}, η = {}, |σ| + |η - m + 1| = {}, sn ≥ {}",
                        vector(&p.omega),
                        p.sigma,
                        p.eta,
                        p.value,
                        p.bound
                    )
                    .unwrap();
                }
                writeln!(out, "  sn ≥ {}", b.sn_lower_bound).unwrap();
            }
            Body::Arf(b) => {
                writeln!(out, "  Arf = {} (via determinant: {})", b.arf, b.arf_via_determinant).unwrap();
                if let Some(basis) = &b.null_e_basis {
                    for (i, [e, f]) in basis.iter().enumerate() {
                        writeln!(out, "  e{} = {e}, f{} = {f}", i + 1, i + 1).unwrap();
                    }
                }
            }
            Body::LinkingForm(b) => {
                let factors: Vec<String> = b.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
                let group = if factors.is_empty() {
                    "0".to_string()
                } else {
                    factors.join(" + ")
                };
                writeln!(out, "  H = {group}, order {}", b.order).unwrap();
                for (g, row) in b.generators.iter().zip(&b.pairing) {
                    writeln!(out, "  {}: pairings {}", vector(g), row.join(" ")).unwrap();
                }
            }
            Body::Metabolizers(b) => {
                writeln!(
                    out,
                    "  {} metabolizers in a group of order {}",
                    b.metabolizers.len(),
                    b.order
                )
                .unwrap();
                for m in &b.metabolizers {
                    writeln!(out, "  {}", subgroup(m)).unwrap();
                }
            }
            Body::CgSatellite(b) => {
                for c in &b.characters {
                    writeln!(
                        out,
                        "  χ = {} (order {}): σ = {}, η = {}",
                        c.character, c.order, c.sigma, c.eta
                    )
                    .unwrap();
                    for t in &c.terms {
                        match t {
                            TermOut::Base {
                                pattern,
                                character,
                                sigma,
                                eta,
                            } => writeln!(out, "    {pattern} at {character}: σ {sigma}, η {eta}").unwrap(),
                            TermOut::CompanionLift {
                                site,
                                lift,
                                curve,
                                omega,
                                sigma,
                                eta,
                            } => writeln!(
                                out,
                                "    site {site} lift {lift} ({curve}) at {omega}: σ {sigma}, η {eta}"
                            )
                            .unwrap(),
                            TermOut::SumCorrection { eta } => writeln!(out, "    connected sum: η {eta}").unwrap(),
                        }
                    }
                }
            }
            Body::Bounds(b) => {
                for bound in std::iter::once(&b.sn).chain(&b.g4) {
                    writeln!(out, "  {}", bound.summary).unwrap();
                    for p in &bound.provenance {
                        writeln!(out, "    {}: {} ({})", p.rule, p.contribution, p.witness).unwrap();
                    }
                }
            }
            Body::G4Check(b) => {
                writeln!(
                    out,
                    "  genus {}: {} (β1 rank ≤ {}, threshold {}, σ(-1) = {})",
                    b.genus, b.verdict, b.rank_bound, b.threshold, b.sigma_minus1
                )
                .unwrap();
                match &b.witness {
                    WitnessOut::SignatureExceedsRank { sigma_minus1, rank } => {
                        writeln!(out, "  |σ(-1)| = {} exceeds {rank}", sigma_minus1.abs()).unwrap()
                    }
                    WitnessOut::PrimeRefuted { p, refutations } => {
                        writeln!(
                            out,
                            "  all {} candidates in the {p}-primary part are refuted",
                            refutations.len()
                        )
                        .unwrap();
                        for r in refutations.iter().take(3) {
                            writeln!(
                                out,
                                "    {}: χ{} of order {} gives {} > {}",
                                subgroup(&r.metabolizer),
                                vector(&r.element),
                                r.order,
                                r.lhs,
                                r.rhs
                            )
                            .unwrap();
                        }
                    }
                    WitnessOut::AllPairsRefuted { pairs } => {
                        writeln!(out, "  all {pairs} splitting and metabolizer pairs are refuted").unwrap()
                    }
                    WitnessOut::Survivor {
                        beta1_rank,
                        metabolizer,
                    } => writeln!(
                        out,
                        "  surviving metabolizer {} with β1 of rank {beta1_rank}",
                        subgroup(metabolizer)
                    )
                    .unwrap(),
                }
            }
        }
    }
}
