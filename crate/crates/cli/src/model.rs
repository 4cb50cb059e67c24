//! Resolution of a parsed problem file into library objects.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use snbound_core::casson_gordon::{Companion, Curve, InfectionSite, PatternBaseTable, PatternNode};
use snbound_core::obstructions::{Assertion, Quantity, StablySliceInputs};
use snbound_core::{
    CComplexData, CgValue, IntegerMatrix, Rational, RootOfUnity, SatelliteTree, SeifertMatrix, SignVector,
};

use crate::error::CliError;
use crate::input::{LinkDef, Number, PatternDef, ProblemFile, RequestDef, TableDef};

#[derive(Clone, Debug)]
pub struct Knot {
    pub seifert: SeifertMatrix,
    pub points: Vec<RootOfUnity>,
}

#[derive(Clone, Debug)]
pub struct Link {
    pub cc: CComplexData,
    pub points: Vec<Vec<RootOfUnity>>,
    pub stably_slice: StablySliceInputs,
}

#[derive(Clone, Debug)]
pub struct Satellite {
    pub tree: SatelliteTree,
    pub points: Vec<RootOfUnity>,
    pub slice_after_unknotting: Option<(Vec<String>, String)>,
}

pub enum Target<'a> {
    Knot(&'a Knot),
    Link(&'a Link),
    Satellite(&'a Satellite),
}

pub struct Problem {
    pub knots: BTreeMap<String, Knot>,
    pub links: BTreeMap<String, Link>,
    pub satellites: BTreeMap<String, Satellite>,
    pub assertions: Vec<(String, Assertion)>,
    pub requests: Vec<RequestDef>,
}

pub fn parse_root(s: &str) -> Result<RootOfUnity, CliError> {
    s.parse()
        .map_err(|e: snbound_core::exact_algebra::ParseRootError| CliError::Parse(e.to_string()))
}

pub fn parse_points(points: &[String]) -> Result<Vec<RootOfUnity>, CliError> {
    points.iter().map(|p| parse_root(p)).collect()
}

fn parse_number(n: &Number) -> Result<Rational, CliError> {
    match n {
        Number::Int(k) => Ok(Rational::from_integer((*k).into())),
        Number::Text(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("invalid rational `{s}`"))),
    }
}

fn matrix(rows: &[Vec<i64>], what: &str) -> Result<IntegerMatrix, CliError> {
    let n = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != n) {
        return Err(CliError::semantic(format!("{what}: rows have different lengths")));
    }
    Ok(IntegerMatrix::from_rows(rows))
}

fn seifert(rows: &[Vec<i64>], what: &str) -> Result<SeifertMatrix, CliError> {
    SeifertMatrix::new(matrix(rows, what)?).map_err(|e| CliError::semantic(format!("{what}: {e}")))
}

fn default_knot_points(points: &[String]) -> Result<Vec<RootOfUnity>, CliError> {
    if points.is_empty() {
        Ok(vec![RootOfUnity::minus_one()])
    } else {
        parse_points(points)
    }
}

fn build_link(name: &str, def: &LinkDef) -> Result<Link, CliError> {
    let what = format!("link `{name}`");
    if def.colors.contains(&0) {
        return Err(CliError::semantic(format!("{what}: colors are numbered from 1")));
    }
    let mu = def.colors.iter().copied().max().unwrap_or(0);
    let colors: Vec<usize> = def.colors.iter().map(|c| c - 1).collect();
    let cc = match (&def.matrix, &def.matrices) {
        (Some(a), None) => CComplexData::constant(mu, colors, matrix(a, &what)?),
        (None, Some(ms)) => {
            let mut family = BTreeMap::new();
            for (key, rows) in ms {
                let eps: SignVector = key.parse()?;
                family.insert(eps, matrix(rows, &what)?);
            }
            let given: Vec<(SignVector, IntegerMatrix)> = family.iter().map(|(e, m)| (e.clone(), m.clone())).collect();
            for (eps, m) in given {
                family.entry(eps.negated()).or_insert_with(|| m.transpose());
            }
            CComplexData::new(mu, colors, family)
        }
        _ => {
            return Err(CliError::semantic(format!(
                "{what}: give exactly one of `matrix` or `matrices`"
            )))
        }
    }
    .map_err(|e| CliError::semantic(format!("{what}: {e}")))?;
    if let Some(counts) = &def.surfaces {
        cc.check_surface_components(counts)
            .map_err(|e| CliError::semantic(format!("{what}: {e}")))?;
    }
    let points = def
        .points
        .iter()
        .map(|p| parse_points(p))
        .collect::<Result<Vec<_>, _>>()?;
    let stably_slice = def
        .stably_slice
        .as_ref()
        .map(|s| StablySliceInputs {
            triple_linking: s.triple_linking.clone(),
            sato_levine_mod2: s.sato_levine_mod2.clone(),
            arf_components: s.arf.clone(),
            pairwise_linking_zero: s.pairwise_linking_zero,
        })
        .unwrap_or_default();
    Ok(Link {
        cc,
        points,
        stably_slice,
    })
}

fn build_table(name: &str, def: &TableDef, suffix: &str) -> Result<PatternBaseTable, CliError> {
    let labels: Vec<String> = def.labels.iter().map(|l| format!("{l}{suffix}")).collect();
    let b = matrix(&def.presentation, &format!("table `{name}`"))?;
    let full_name = if suffix.is_empty() {
        name.to_string()
    } else {
        format!("{name}_{suffix}")
    };
    let mut entries: BTreeMap<Vec<RootOfUnity>, CgValue> = if def.zero {
        PatternBaseTable::zero(&full_name, labels.clone(), b.clone())?
            .entries()
            .clone()
    } else {
        BTreeMap::new()
    };
    for e in &def.entries {
        let key = parse_points(&e.chi)?;
        entries.insert(key, CgValue::new(parse_number(&e.sigma)?, e.eta));
    }
    Ok(PatternBaseTable::new(&full_name, labels, b, entries)?)
}

fn renamed_curve(text: &str, suffix: &str) -> Result<Curve, CliError> {
    let c: Curve = text.parse()?;
    if suffix.is_empty() {
        return Ok(c);
    }
    let renamed: Vec<String> = c.terms().iter().map(|(l, k)| format!("{k}*{l}{suffix}")).collect();
    Ok(renamed.join(" + ").replace("+ -", "- ").parse()?)
}

struct Builder<'a> {
    file: &'a ProblemFile,
    knots: &'a BTreeMap<String, Knot>,
    tables: HashMap<(String, String), Arc<PatternBaseTable>>,
    trees: HashMap<String, SatelliteTree>,
    in_progress: BTreeSet<String>,
}

impl<'a> Builder<'a> {
    fn table(&mut self, name: &str, suffix: &str) -> Result<Arc<PatternBaseTable>, CliError> {
        let key = (name.to_string(), suffix.to_string());
        if let Some(t) = self.tables.get(&key) {
            return Ok(t.clone());
        }
        let def = self
            .file
            .tables
            .get(name)
            .ok_or_else(|| CliError::semantic(format!("unknown table `{name}`")))?;
        let t = Arc::new(build_table(name, def, suffix)?);
        self.tables.insert(key, t.clone());
        Ok(t)
    }

    fn companion(&mut self, name: &str) -> Result<Companion, CliError> {
        if name == "unknot" {
            return Ok(Companion::unknot());
        }
        if let Some(k) = self.knots.get(name) {
            return Ok(Companion::knot(k.seifert.clone()));
        }
        if self.file.satellites.contains_key(name) {
            return Ok(Companion::tree(self.tree(name)?)?);
        }
        Err(CliError::semantic(format!("unknown companion `{name}`")))
    }

    fn pattern(&mut self, name: &str, def: &PatternDef, suffix: &str) -> Result<PatternNode, CliError> {
        let summands = def
            .summands
            .iter()
            .map(|t| self.table(t, suffix))
            .collect::<Result<Vec<_>, _>>()?;
        let mut sites = Vec::new();
        for s in &def.sites {
            let companion = self.companion(&s.companion)?;
            let label = format!("{}{suffix}", s.label);
            let mut site = match (&s.curve, &s.lifts) {
                (Some(c), None) => InfectionSite::new(&label, renamed_curve(c, suffix)?, companion),
                (None, Some([a, b])) => {
                    let mut site = InfectionSite::new(&label, renamed_curve(a, suffix)?, companion);
                    site.lifts[1] = renamed_curve(b, suffix)?;
                    site
                }
                _ => {
                    return Err(CliError::semantic(format!(
                        "site `{}` of pattern `{name}`: give exactly one of `curve` or `lifts`",
                        s.label
                    )))
                }
            };
            site.winding = s.winding;
            sites.push(site);
        }
        let seifert_matrix = def
            .seifert
            .as_ref()
            .map(|rows| seifert(rows, &format!("pattern `{name}`")))
            .transpose()?;
        let full_name = if suffix.is_empty() {
            name.to_string()
        } else {
            format!("{name}_{suffix}")
        };
        Ok(PatternNode::new(&full_name, summands, sites, seifert_matrix)?)
    }

    fn tree(&mut self, name: &str) -> Result<SatelliteTree, CliError> {
        if let Some(t) = self.trees.get(name) {
            return Ok(t.clone());
        }
        if !self.in_progress.insert(name.to_string()) {
            return Err(CliError::semantic(format!("satellite `{name}` is its own companion")));
        }
        let def = &self.file.satellites[name];
        if def.sum.is_empty() {
            return Err(CliError::semantic(format!("satellite `{name}` has no patterns")));
        }
        let mut tree: Option<SatelliteTree> = None;
        for item in &def.sum {
            let (pname, suffix) = item.split_once('@').unwrap_or((item.as_str(), ""));
            let pdef = self
                .file
                .patterns
                .get(pname)
                .ok_or_else(|| CliError::semantic(format!("unknown pattern `{pname}`")))?;
            let node = SatelliteTree::Pattern(self.pattern(pname, pdef, suffix)?);
            tree = Some(match tree {
                None => node,
                Some(t) => SatelliteTree::connected_sum(t, node)?,
            });
        }
        let tree = tree.unwrap();
        self.in_progress.remove(name);
        self.trees.insert(name.to_string(), tree.clone());
        Ok(tree)
    }
}

fn quantity(s: &str) -> Result<Quantity, CliError> {
    match s {
        "sn" => Ok(Quantity::Sn),
        "g4" => Ok(Quantity::G4),
        _ => Err(CliError::semantic(format!("unknown quantity `{s}`, expected sn or g4"))),
    }
}

impl Problem {
    pub fn from_file(file: ProblemFile) -> Result<Self, CliError> {
        let mut seen = BTreeSet::new();
        let names = file.knots.keys().chain(file.links.keys()).chain(file.satellites.keys());
        for n in names {
            if n == "unknot" || !seen.insert(n.clone()) {
                return Err(CliError::semantic(format!("name `{n}` is used twice or reserved")));
            }
        }
        let mut knots = BTreeMap::new();
        for (name, def) in &file.knots {
            let knot = Knot {
                seifert: seifert(&def.seifert, &format!("knot `{name}`"))?,
                points: default_knot_points(&def.points)?,
            };
            knots.insert(name.clone(), knot);
        }
        let links = file
            .links
            .iter()
            .map(|(n, d)| Ok((n.clone(), build_link(n, d)?)))
            .collect::<Result<BTreeMap<_, _>, CliError>>()?;
        let mut builder = Builder {
            file: &file,
            knots: &knots,
            tables: HashMap::new(),
            trees: HashMap::new(),
            in_progress: BTreeSet::new(),
        };
        for name in file.tables.keys() {
            builder.table(name, "")?;
        }
        let mut satellites = BTreeMap::new();
        for (name, def) in &file.satellites {
            let sat = Satellite {
                tree: builder.tree(name)?,
                points: default_knot_points(&def.points)?,
                slice_after_unknotting: def
                    .slice_after_unknotting
                    .as_ref()
                    .map(|s| (s.sites.clone(), s.note.clone())),
            };
            satellites.insert(name.clone(), sat);
        }
        let assertions = file
            .assertions
            .iter()
            .map(|a| {
                if !seen.contains(&a.target) {
                    return Err(CliError::semantic(format!(
                        "assertion names unknown target `{}`",
                        a.target
                    )));
                }
                let assertion = Assertion {
                    quantity: quantity(&a.quantity)?,
                    upper: a.upper,
                    note: a.note.clone(),
                };
                Ok((a.target.clone(), assertion))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            knots,
            links,
            satellites,
            assertions,
            requests: file.requests,
        })
    }

    pub fn target(&self, name: &str) -> Result<Target<'_>, CliError> {
        if let Some(k) = self.knots.get(name) {
            return Ok(Target::Knot(k));
        }
        if let Some(l) = self.links.get(name) {
            return Ok(Target::Link(l));
        }
        if let Some(s) = self.satellites.get(name) {
            return Ok(Target::Satellite(s));
        }
        Err(CliError::semantic(format!("unknown target `{name}`")))
    }

    pub fn assertions_for(&self, name: &str) -> Vec<Assertion> {
        self.assertions
            .iter()
            .filter(|(t, _)| t == name)
            .map(|(_, a)| a.clone())
            .collect()
    }
}
