//! Input document format. See `docs/input-format.md` for the prose description.

use std::collections::BTreeMap;

use serde::Deserialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema_version: u32,
    #[serde(default)]
    pub poset: Option<PosetSpec>,
    #[serde(default)]
    pub complex: Option<ComplexSpec>,
    #[serde(default)]
    pub system: Option<SystemSpec>,
    #[serde(default)]
    pub options: Options,
    #[serde(default)]
    pub obstruction: Option<ObstructionSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(String, String)>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ComplexSpec {
    Cells { ambient: usize, cells: Vec<String> },
    Boundary { boundary_of: usize },
    Cube { cube: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GroupSpec {
    Invariants {
        rank: usize,
        #[serde(default)]
        torsion: Vec<i64>,
    },
    Presentation {
        generators: usize,
        /// Each entry is one relation vector of length `generators`.
        #[serde(default)]
        relations: Vec<Vec<i64>>,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    #[serde(default)]
    pub constant: Option<GroupSpec>,
    #[serde(default)]
    pub default_group: Option<GroupSpec>,
    #[serde(default)]
    pub groups: BTreeMap<String, GroupSpec>,
    #[serde(default)]
    pub maps: Vec<MapSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub from: String,
    pub to: String,
    /// Row-major; one row per generator of the target group.
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub offset: Option<i64>,
    #[serde(default)]
    pub coefficient_degree: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstructionSpec {
    pub cube_dim: usize,
    #[serde(default)]
    pub linear: bool,
    /// Keyed by facet cell, e.g. `"1**"`; missing facets carry the zero class.
    #[serde(default)]
    pub facet_classes: BTreeMap<String, Vec<i64>>,
    #[serde(default)]
    pub transports: Option<TransportSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportSpec {
    pub target: GroupSpec,
    pub maps: BTreeMap<String, TransportMap>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportMap {
    pub matrix: Vec<Vec<i64>>,
    #[serde(default)]
    pub sign: Option<i8>,
}
