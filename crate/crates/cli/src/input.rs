//! Problem files: a versioned TOML description of knots, links, satellite
//! patterns, assertions and requests.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::CliError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub format: u32,
    #[serde(default)]
    pub knots: BTreeMap<String, KnotDef>,
    #[serde(default)]
    pub links: BTreeMap<String, LinkDef>,
    #[serde(default)]
    pub tables: BTreeMap<String, TableDef>,
    #[serde(default)]
    pub patterns: BTreeMap<String, PatternDef>,
    #[serde(default)]
    pub satellites: BTreeMap<String, SatelliteDef>,
    #[serde(default)]
    pub assertions: Vec<AssertionDef>,
    #[serde(default)]
    pub requests: Vec<RequestDef>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnotDef {
    pub seifert: Vec<Vec<i64>>,
    #[serde(default)]
    pub points: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkDef {
    /// Color of each component, 1-based.
    pub colors: Vec<usize>,
    /// One matrix used for every sign vector.
    pub matrix: Option<Vec<Vec<i64>>>,
    /// Matrices keyed by sign strings such as "+-+"; missing keys are filled by transposes.
    pub matrices: Option<BTreeMap<String, Vec<Vec<i64>>>>,
    /// Number of connected pieces of each colored surface.
    pub surfaces: Option<Vec<usize>>,
    #[serde(default)]
    pub points: Vec<Vec<String>>,
    pub stably_slice: Option<StablySliceDef>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StablySliceDef {
    #[serde(default)]
    pub triple_linking: Vec<i64>,
    #[serde(default)]
    pub sato_levine_mod2: Vec<u8>,
    #[serde(default)]
    pub arf: Vec<u8>,
    #[serde(default = "yes")]
    pub pairwise_linking_zero: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDef {
    pub labels: Vec<String>,
    pub presentation: Vec<Vec<i64>>,
    /// Start from σ = η = 0 on every character; `entries` then override.
    #[serde(default)]
    pub zero: bool,
    #[serde(default)]
    pub entries: Vec<EntryDef>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDef {
    pub chi: Vec<String>,
    pub sigma: Number,
    #[serde(default)]
    pub eta: u64,
}

/// An integer or a rational written as a string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternDef {
    pub summands: Vec<String>,
    pub seifert: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub sites: Vec<SiteDef>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteDef {
    pub label: String,
    pub curve: Option<String>,
    /// The two lifts of the infection curve, when they differ.
    pub lifts: Option<[String; 2]>,
    #[serde(default = "unknot")]
    pub companion: String,
    #[serde(default)]
    pub winding: i64,
}

fn unknot() -> String {
    "unknot".to_string()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SatelliteDef {
    /// Patterns summed from left to right; `P@s` appends `s` to every label of `P`.
    pub sum: Vec<String>,
    #[serde(default)]
    pub points: Vec<String>,
    pub slice_after_unknotting: Option<SliceDef>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceDef {
    pub sites: Vec<String>,
    #[serde(default)]
    pub note: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssertionDef {
    pub target: String,
    pub quantity: String,
    pub upper: u64,
    #[serde(default)]
    pub note: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestDef {
    pub command: String,
    pub target: String,
    pub points: Option<Vec<PointDef>>,
    pub genus: Option<u64>,
    pub character: Option<BTreeMap<String, String>>,
    pub rules: Option<Vec<String>>,
    #[serde(default)]
    pub exclude: Vec<String>,
    pub cobordism: Option<CobordismDef>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum PointDef {
    Knot(String),
    Link(Vec<String>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CobordismDef {
    pub to: String,
    #[serde(default = "half_turn")]
    pub point: String,
    pub sign_v: i64,
    pub euler_v: i64,
    pub euler_surfaces: Vec<i64>,
    #[serde(default)]
    pub double_points: u64,
}

fn half_turn() -> String {
    "1/2".to_string()
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: Self = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if file.format != FORMAT_VERSION {
            return Err(CliError::Parse(format!(
                "unsupported format {}, expected {FORMAT_VERSION}",
                file.format
            )));
        }
        Ok(file)
    }
}
