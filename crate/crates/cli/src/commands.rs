//! Request dispatch: each subcommand turns library results into report entries.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use snbound_core::casson_gordon::{satellite_sigma_eta_with, CgTerm, KnotCgSource};
use snbound_core::exact_algebra::DEFAULT_PRECISION_BITS;
use snbound_core::linking_form::DEFAULT_ENUM_BOUND;
use snbound_core::obstructions::{
    aggregate, cobordism_inequality, gilmer_g4_obstruct, point_bound, CobordismContext, Contribution, EvalOptions,
    KnotSubject, LinkSubject, ObstructionResult, ObstructionWitness, RuleId, RuleSet, Subject, Witness,
};
use snbound_core::seifert_knot::{
    alexander_polynomial, arf, arf_via_determinant, lt_signature_nullity_with, symplectic_basis_null_e,
};
use snbound_core::{
    BoundReport, CComplexData, CgEvaluation, LabelCharacter, LinkingForm, RootOfUnity, SeifertMatrix, Subgroup, Verdict,
};

use crate::error::CliError;
use crate::input::{PointDef, RequestDef};
use crate::model::{parse_points, parse_root, Problem, Satellite, Target};
use crate::report::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Invariants,
    Multisig,
    Arf,
    LinkingForm,
    Metabolizers,
    CgSatellite,
    SnBounds,
    G4Check,
}

impl Command {
    pub const ALL: [Command; 8] = [
        Command::Invariants,
        Command::Multisig,
        Command::Arf,
        Command::LinkingForm,
        Command::Metabolizers,
        Command::CgSatellite,
        Command::SnBounds,
        Command::G4Check,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Invariants => "invariants",
            Command::Multisig => "multisig",
            Command::Arf => "arf",
            Command::LinkingForm => "linkingform",
            Command::Metabolizers => "metabolizers",
            Command::CgSatellite => "cg-satellite",
            Command::SnBounds => "sn-bounds",
            Command::G4Check => "g4-check",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub assume_admissible: bool,
    pub enum_bound: u64,
    pub precision_start: u32,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            assume_admissible: false,
            enum_bound: DEFAULT_ENUM_BOUND,
            precision_start: DEFAULT_PRECISION_BITS,
        }
    }
}

impl Options {
    fn eval(&self) -> EvalOptions {
        EvalOptions {
            assume_admissible: self.assume_admissible,
            precision_bits: self.precision_start,
        }
    }
}

/// Runs the requests of `problem` for `command`, or the given targets if any.
pub fn run(
    problem: &Problem,
    command: Command,
    targets: &[String],
    opts: &Options,
    mut on_timing: impl FnMut(&str, Duration),
) -> Result<Report, CliError> {
    for r in &problem.requests {
        if !Command::ALL.iter().any(|c| c.name() == r.command) {
            return Err(CliError::semantic(format!(
                "request names unknown command `{}`",
                r.command
            )));
        }
    }
    let requests: Vec<RequestDef> = if targets.is_empty() {
        problem
            .requests
            .iter()
            .filter(|r| r.command == command.name())
            .cloned()
            .collect()
    } else {
        targets
            .iter()
            .map(|t| RequestDef {
                command: command.name().to_string(),
                target: t.clone(),
                points: None,
                genus: None,
                character: None,
                rules: None,
                exclude: vec![],
                cobordism: None,
            })
            .collect()
    };
    let ctx = Ctx { problem, opts };
    let mut report = Report::new(command.name());
    for req in &requests {
        let start = Instant::now();
        let target = problem.target(&req.target)?;
        let bodies = match command {
            Command::Invariants => vec![Body::Invariants(ctx.invariants(&target, req)?)],
            Command::Multisig => vec![Body::Multisig(ctx.multisig(&target, req)?)],
            Command::Arf => vec![Body::Arf(ctx.arf(&target)?)],
            Command::LinkingForm => vec![Body::LinkingForm(ctx.linking_form(&target)?)],
            Command::Metabolizers => vec![Body::Metabolizers(ctx.metabolizers(&target)?)],
            Command::CgSatellite => vec![Body::CgSatellite(ctx.cg_satellite(&target, req)?)],
            Command::SnBounds => vec![Body::Bounds(ctx.bounds(&target, req)?)],
            Command::G4Check => ctx.g4_check(&target, req)?.into_iter().map(Body::G4Check).collect(),
        };
        for body in bodies {
            report.results.push(Entry {
                target: req.target.clone(),
                body,
            });
        }
        on_timing(&req.target, start.elapsed());
    }
    Ok(report)
}

struct Ctx<'a> {
    problem: &'a Problem,
    opts: &'a Options,
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(T::to_string).collect()
}

fn bits(v: &[u8]) -> String {
    v.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
}

fn subgroup_out(lf: &LinkingForm, s: &Subgroup) -> SubgroupOut {
    SubgroupOut {
        order: s.order(),
        generators: s
            .generators()
            .iter()
            .map(|g| strings(&lf.element_to_vector(g)))
            .collect(),
    }
}

fn terms_out(ev: &CgEvaluation) -> Vec<TermOut> {
    ev.terms
        .iter()
        .map(|t| match t {
            CgTerm::Base {
                pattern,
                character,
                value,
                ..
            } => TermOut::Base {
                pattern: pattern.clone(),
                character: character.clone(),
                sigma: value.sigma.to_string(),
                eta: value.eta,
            },
            CgTerm::CompanionLift {
                site,
                lift,
                curve,
                omega,
                sigma,
                eta,
            } => TermOut::CompanionLift {
                site: site.clone(),
                lift: *lift,
                curve: curve.clone(),
                omega: omega.to_string(),
                sigma: *sigma,
                eta: *eta,
            },
            CgTerm::SumCorrection { eta } => TermOut::SumCorrection { eta: *eta },
        })
        .collect()
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::Point { omega, sigma, eta } => {
            format!("ω = ({}): σ = {sigma}, η = {eta}", strings(omega).join(", "))
        }
        Witness::Candidate {
            candidate,
            sigma_minus1,
        } => {
            format!("candidate {candidate} refuted, σ(-1) = {sigma_minus1}")
        }
        Witness::Bound { quantity, value } => format!("from {quantity} bound {value}"),
        Witness::SeifertGenus { genus } => format!("Seifert genus {genus}"),
        Witness::Arf { arf } => format!("Arf = {arf}"),
        Witness::Schneiderman { failing } if failing.is_empty() => "all invariants vanish".to_string(),
        Witness::Schneiderman { failing } => format!("nonvanishing: {}", failing.join(", ")),
        Witness::Sites { sites, note } if note.is_empty() => format!("unknotting {}", sites.join(", ")),
        Witness::Sites { sites, note } => format!("unknotting {}: {note}", sites.join(", ")),
        Witness::Note(s) => s.clone(),
    }
}

fn bound_out(b: &BoundReport) -> BoundOut {
    BoundOut {
        summary: b.to_string(),
        defined: b.defined,
        lower: b.lower,
        upper: b.upper,
        provenance: b
            .provenance
            .iter()
            .map(|p| ProvenanceOut {
                rule: p.rule.to_string(),
                contribution: match p.contribution {
                    Contribution::Lower(v) => format!("lower {v}"),
                    Contribution::Upper(v) => format!("upper {v}"),
                    Contribution::Defined => "defined".to_string(),
                    Contribution::Undefined => "undefined".to_string(),
                },
                witness: witness_text(&p.witness),
            })
            .collect(),
    }
}

fn g4_out(lf: &LinkingForm, genus: u64, r: &ObstructionResult) -> G4CheckOut {
    let witness = match &r.witness {
        ObstructionWitness::SignatureExceedsRank { sigma_minus1, rank } => WitnessOut::SignatureExceedsRank {
            sigma_minus1: *sigma_minus1,
            rank: *rank,
        },
        ObstructionWitness::PrimeRefuted { p, refutations } => WitnessOut::PrimeRefuted {
            p: *p,
            refutations: refutations
                .iter()
                .map(|f| RefutationOut {
                    metabolizer: subgroup_out(lf, &f.metabolizer),
                    beta1_rank: f.beta1_rank,
                    element: strings(&lf.element_to_vector(&f.violation.element)),
                    order: f.violation.order,
                    sigma: f.violation.evaluation.value.sigma.to_string(),
                    eta: f.violation.evaluation.value.eta,
                    lhs: f.violation.lhs.to_string(),
                    rhs: f.violation.rhs.to_string(),
                })
                .collect(),
        },
        ObstructionWitness::AllPairsRefuted { pairs } => WitnessOut::AllPairsRefuted { pairs: *pairs },
        ObstructionWitness::Survivor {
            metabolizer,
            beta1_rank,
        } => WitnessOut::Survivor {
            beta1_rank: *beta1_rank,
            metabolizer: subgroup_out(lf, metabolizer),
        },
    };
    G4CheckOut {
        genus,
        verdict: match r.verdict {
            Verdict::Obstructed => "obstructed",
            Verdict::NotObstructed => "inconclusive",
        }
        .to_string(),
        rank_bound: r.rank_bound,
        threshold: r.threshold,
        sigma_minus1: r.sigma_minus1,
        witness,
    }
}

impl Ctx<'_> {
    fn seifert(&self, target: &Target) -> Result<SeifertMatrix, CliError> {
        match target {
            Target::Knot(k) => Ok(k.seifert.clone()),
            Target::Satellite(s) => Ok(s.tree.seifert_matrix()?),
            Target::Link(_) => Err(CliError::semantic("this command needs a knot, not a link")),
        }
    }

    fn satellite<'t>(&self, target: &'t Target) -> Result<&'t Satellite, CliError> {
        match target {
            Target::Satellite(s) => Ok(s),
            _ => Err(CliError::semantic("this command needs a satellite with base tables")),
        }
    }

    fn cg_source(&self, s: &Satellite) -> Result<KnotCgSource, CliError> {
        Ok(KnotCgSource::new(s.tree.clone())?
            .with_precision(self.opts.precision_start)
            .with_enum_bound(self.opts.enum_bound))
    }

    fn linking(&self, target: &Target) -> Result<LinkingForm, CliError> {
        Ok(LinkingForm::from_seifert(&self.seifert(target)?)?.with_enum_bound(self.opts.enum_bound))
    }

    fn knot_points(&self, target: &Target, req: &RequestDef) -> Result<Vec<RootOfUnity>, CliError> {
        match &req.points {
            Some(ps) => ps
                .iter()
                .map(|p| match p {
                    PointDef::Knot(s) => parse_root(s),
                    PointDef::Link(_) => Err(CliError::Parse("knot points are single roots k/d".into())),
                })
                .collect(),
            None => Ok(match target {
                Target::Knot(k) => k.points.clone(),
                Target::Satellite(s) => s.points.clone(),
                Target::Link(_) => vec![],
            }),
        }
    }

    fn link_points(
        &self,
        cc: &CComplexData,
        target: &Target,
        req: &RequestDef,
    ) -> Result<Vec<Vec<RootOfUnity>>, CliError> {
        let points = match &req.points {
            Some(ps) => ps
                .iter()
                .map(|p| match p {
                    PointDef::Link(v) => parse_points(v),
                    PointDef::Knot(s) => Ok(vec![parse_root(s)?]),
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => match target {
                Target::Link(l) => l.points.clone(),
                _ => self.knot_points(target, req)?.into_iter().map(|w| vec![w]).collect(),
            },
        };
        Ok(if points.is_empty() {
            vec![vec![RootOfUnity::minus_one(); cc.num_colors()]]
        } else {
            points
        })
    }

    fn invariants(&self, target: &Target, req: &RequestDef) -> Result<Invariants, CliError> {
        let s = self.seifert(target)?;
        let points = self.knot_points(target, req)?;
        let bits = self.opts.precision_start;
        let sigs = points
            .par_iter()
            .map(|w| lt_signature_nullity_with(&s, w, bits))
            .collect::<Result<Vec<_>, _>>()?;
        let cobordism = match &req.cobordism {
            None => None,
            Some(c) => {
                let other = if c.to == "unknot" {
                    SeifertMatrix::unknot()
                } else {
                    self.seifert(&self.problem.target(&c.to)?)?
                };
                let w = parse_root(&c.point)?;
                let a = lt_signature_nullity_with(&s, &w, bits)?;
                let b = lt_signature_nullity_with(&other, &w, bits)?;
                let ctx = CobordismContext {
                    sign_v: c.sign_v,
                    euler_v: c.euler_v,
                    euler_surfaces: c.euler_surfaces.clone(),
                    double_points: c.double_points,
                };
                let ineq = cobordism_inequality(&ctx, a.signature, a.nullity as i64, b.signature, b.nullity as i64);
                Some(CobordismOut {
                    to: c.to.clone(),
                    omega: w.to_string(),
                    signature_term: ineq.signature_term,
                    nullity_term: ineq.nullity_term,
                    bound: ineq.bound,
                    inequality: ineq.to_string(),
                    holds: ineq.holds(),
                })
            }
        };
        Ok(Invariants {
            genus: s.genus(),
            alexander: alexander_polynomial(&s).to_string(),
            determinant: s.symmetrized().determinant().magnitude().to_string(),
            arf: arf(&s)?,
            points: points
                .iter()
                .zip(sigs)
                .map(|(w, r)| KnotPoint {
                    omega: w.to_string(),
                    sigma: r.signature,
                    nullity: r.nullity,
                })
                .collect(),
            cobordism,
        })
    }

    fn multisig(&self, target: &Target, req: &RequestDef) -> Result<Multisig, CliError> {
        let cc = match target {
            Target::Link(l) => l.cc.clone(),
            _ => CComplexData::from_seifert(&self.seifert(target)?),
        };
        let points = self.link_points(&cc, target, req)?;
        let eval = self.opts.eval();
        let bounds = points
            .par_iter()
            .map(|w| point_bound(&cc, w, &eval))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Multisig {
            colors: cc.num_colors(),
            components: cc.num_components(),
            sn_lower_bound: bounds.iter().map(|b| b.bound).max().unwrap_or(0),
            points: bounds
                .iter()
                .map(|b| LinkPoint {
                    omega: strings(&b.omega),
                    sigma: b.signature.sigma,
                    eta: b.signature.eta,
                    value: b.value,
                    bound: b.bound,
                })
                .collect(),
        })
    }

    fn arf(&self, target: &Target) -> Result<ArfOut, CliError> {
        let s = self.seifert(target)?;
        let a = arf(&s)?;
        let null_e_basis = if a == 0 {
            Some(
                symplectic_basis_null_e(&s)?
                    .iter()
                    .map(|(e, f)| [bits(e), bits(f)])
                    .collect(),
            )
        } else {
            None
        };
        Ok(ArfOut {
            arf: a,
            arf_via_determinant: arf_via_determinant(&s),
            null_e_basis,
        })
    }

    fn linking_form(&self, target: &Target) -> Result<LinkingFormOut, CliError> {
        let lf = self.linking(target)?;
        let gens = lf.generator_vectors();
        Ok(LinkingFormOut {
            order: lf.order(),
            invariant_factors: lf.invariant_factors().to_vec(),
            generators: gens.iter().map(|g| strings(g)).collect(),
            pairing: gens
                .iter()
                .map(|x| gens.iter().map(|y| lf.pair(x, y).to_string()).collect())
                .collect(),
        })
    }

    fn metabolizers(&self, target: &Target) -> Result<MetabolizersOut, CliError> {
        let lf = self.linking(target)?;
        let mets = lf.enumerate_metabolizers()?;
        Ok(MetabolizersOut {
            order: lf.order(),
            metabolizers: mets.iter().map(|m| subgroup_out(&lf, m)).collect(),
        })
    }

    fn cg_satellite(&self, target: &Target, req: &RequestDef) -> Result<CgSatelliteOut, CliError> {
        let sat = self.satellite(target)?;
        let characters: Vec<LabelCharacter> = match &req.character {
            Some(map) => {
                let values = map
                    .iter()
                    .map(|(l, v)| Ok((l.clone(), parse_root(v)?)))
                    .collect::<Result<Vec<_>, CliError>>()?;
                vec![LabelCharacter::new(values)]
            }
            None => sat
                .tree
                .characters()
                .into_iter()
                .filter(|c| c.order() == 1 || snbound_core::exact_algebra::prime_power_base(c.order()).is_some())
                .collect(),
        };
        let bits = self.opts.precision_start;
        let evaluations = characters
            .par_iter()
            .map(|c| satellite_sigma_eta_with(&sat.tree, c, 2, bits))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CgSatelliteOut {
            characters: characters
                .iter()
                .zip(&evaluations)
                .map(|(c, ev)| CgOut {
                    character: c.to_string(),
                    order: c.order(),
                    sigma: ev.value.sigma.to_string(),
                    eta: ev.value.eta,
                    terms: terms_out(ev),
                })
                .collect(),
        })
    }

    fn rules(&self, req: &RequestDef) -> Result<RuleSet, CliError> {
        let parse = |s: &String| s.parse::<RuleId>().map_err(CliError::Semantic);
        let mut set = match &req.rules {
            Some(list) => RuleSet::only(list.iter().map(parse).collect::<Result<Vec<_>, _>>()?),
            None => RuleSet::all(),
        };
        for r in &req.exclude {
            set = set.without(parse(r)?);
        }
        Ok(set)
    }

    fn subject(&self, target: &Target, req: &RequestDef) -> Result<Subject, CliError> {
        let assertions = self.problem.assertions_for(&req.target);
        Ok(match target {
            Target::Knot(k) => {
                let mut s = KnotSubject::new(k.seifert.clone());
                s.points = self.knot_points(target, req)?;
                s.assertions = assertions;
                Subject::Knot(s)
            }
            Target::Satellite(sat) => {
                let mut s = KnotSubject::from_satellite(self.cg_source(sat)?)?;
                s.points = self.knot_points(target, req)?;
                s.slice_after_unknotting = sat.slice_after_unknotting.clone();
                s.assertions = assertions;
                Subject::Knot(s)
            }
            Target::Link(l) => Subject::Link(LinkSubject {
                cc: l.cc.clone(),
                points: self.link_points(&l.cc, target, req)?,
                stably_slice: l.stably_slice.clone(),
                assertions,
            }),
        })
    }

    fn bounds(&self, target: &Target, req: &RequestDef) -> Result<BoundsOut, CliError> {
        let report = aggregate(&self.subject(target, req)?, &self.rules(req)?, &self.opts.eval())?;
        Ok(BoundsOut {
            sn: bound_out(&report.sn),
            g4: report.g4.as_ref().map(bound_out),
        })
    }

    fn g4_check(&self, target: &Target, req: &RequestDef) -> Result<Vec<G4CheckOut>, CliError> {
        let sat = self.satellite(target)?;
        let src = self.cg_source(sat)?;
        let seifert = sat.tree.seifert_matrix()?;
        let sigma_minus1 =
            lt_signature_nullity_with(&seifert, &RootOfUnity::minus_one(), self.opts.precision_start)?.signature;
        let eval = |x: &snbound_core::GroupElement| src.cg_eval(x);
        let check = |g: u64| -> Result<G4CheckOut, CliError> {
            let r = gilmer_g4_obstruct(src.form(), g, sigma_minus1, &eval)?;
            Ok(g4_out(src.form(), g, &r))
        };
        match req.genus {
            Some(g) => Ok(vec![check(g)?]),
            None => {
                // Genera below the first inconclusive one are all obstructed.
                let mut out = Vec::new();
                for g in 0..=seifert.genus() as u64 {
                    let r = check(g)?;
                    let done = r.verdict != "obstructed";
                    out.push(r);
                    if done {
                        break;
                    }
                }
                Ok(out)
            }
        }
    }
}
