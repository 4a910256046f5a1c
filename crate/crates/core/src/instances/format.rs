use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{Edge, Instance, Path, Player};

// Field order is alphabetical so derived serialization already has sorted keys.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    edges: Vec<EdgeFile>,
    nodes: usize,
    players: Vec<PlayerFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeFile {
    id: usize,
    u: usize,
    v: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlayerFile {
    dest: usize,
    paths: Vec<Vec<usize>>,
    source: usize,
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let edges = file.edges.into_iter().map(|e| Edge::new(e.id, e.u, e.v)).collect();
    let players = file
        .players
        .into_iter()
        .map(|p| Player::new(p.source, p.dest, p.paths.into_iter().map(Path::new).collect()))
        .collect();
    Instance::new(file.nodes, edges, players)
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
pub fn serialize_instance(inst: &Instance) -> String {
    let file = InstanceFile {
        edges: inst
            .edges
            .iter()
            .map(|e| EdgeFile { id: e.id, u: e.u, v: e.v })
            .collect(),
        nodes: inst.node_count,
        players: inst
            .players
            .iter()
            .map(|p| PlayerFile {
                dest: p.dest,
                paths: p.strategies.iter().map(|s| s.edges().to_vec()).collect(),
                source: p.source,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("instance serializes");
    text.push('\n');
    text
}

/// Pretty JSON with object keys sorted at every level.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json::Map is a BTreeMap without the preserve_order feature
    let v = serde_json::to_value(value)?;
    let mut text = serde_json::to_string_pretty(&v)?;
    text.push('\n');
    Ok(text)
}
