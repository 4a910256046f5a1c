//! Named instances, random grids and the JSON instance format.

mod format;
mod generators;
mod grid;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use format::{canonical_json, parse_instance, serialize_instance};
pub use generators::{
    gen_bucket_tight, gen_no_nash_sum, gen_ring, no_nash_routing, verify_no_nash_table, CostTriple, NoNashRow,
    NO_NASH_PASSIVE, NO_NASH_TABLE,
};
pub use grid::{gen_random_grid, GridSpec, MAX_GRID_NODES};

use crate::error::Result;
use crate::game::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorSpec {
    Ring { n: usize },
    NoNashSum,
    BucketTight { a: usize },
    RandomGrid(GridSpec),
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Instance> {
        match self {
            GeneratorSpec::Ring { n } => gen_ring(*n),
            GeneratorSpec::NoNashSum => gen_no_nash_sum(),
            GeneratorSpec::BucketTight { a } => gen_bucket_tight(*a),
            GeneratorSpec::RandomGrid(g) => gen_random_grid(g),
        }
    }
}

/// Generator kind names as used on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    Ring,
    NoNashSum,
    BucketTight,
    RandomGrid,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 4] = [
        GeneratorKind::Ring,
        GeneratorKind::NoNashSum,
        GeneratorKind::BucketTight,
        GeneratorKind::RandomGrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Ring => "ring",
            GeneratorKind::NoNashSum => "no-nash-sum",
            GeneratorKind::BucketTight => "bucket-tight",
            GeneratorKind::RandomGrid => "random-grid",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown generator kind `{s}`"))
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    spec.generate()
}
