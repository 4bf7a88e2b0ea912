//! JSON (de)serialization for trees, transition systems, and tiling
//! instances. Field order is fixed by the structs and props are stored
//! sorted, so saved fixtures diff cleanly.

use crate::models::{ModelError, TransitionSystem, Tree};
use crate::tiling::TilingInstance;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("tiling instance: {0}")]
    Tiling(String),
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    root: u64,
    nodes: Vec<TreeNodeJson>,
}

#[derive(Serialize, Deserialize)]
struct TreeNodeJson {
    id: u64,
    props: Vec<String>,
    children: Vec<u64>,
}

/// Parse and validate a tree from its JSON form.
pub fn load_tree(json: &[u8]) -> Result<Tree, JsonError> {
    let t: TreeJson = serde_json::from_slice(json)?;
    let parts = t
        .nodes
        .into_iter()
        .map(|n| (n.id, n.props, n.children))
        .collect();
    Ok(Tree::from_parts(t.root, parts)?)
}

pub fn save_tree(tree: &Tree) -> String {
    let mut nodes: Vec<TreeNodeJson> = tree
        .node_ids()
        .map(|v| TreeNodeJson {
            id: tree.ext_id(v),
            props: tree.props(v).iter().cloned().collect(),
            children: tree.children(v).iter().map(|&c| tree.ext_id(c)).collect(),
        })
        .collect();
    nodes.sort_by_key(|n| n.id);
    let t = TreeJson { root: tree.ext_id(tree.root()), nodes };
    serde_json::to_string_pretty(&t).expect("tree serialization cannot fail")
}

#[derive(Serialize, Deserialize)]
struct TsJson {
    initial: u64,
    states: Vec<TsStateJson>,
    edges: Vec<(u64, u64)>,
}

#[derive(Serialize, Deserialize)]
struct TsStateJson {
    id: u64,
    props: Vec<String>,
}

pub fn load_transition_system(json: &[u8]) -> Result<TransitionSystem, JsonError> {
    let t: TsJson = serde_json::from_slice(json)?;
    let states = t.states.into_iter().map(|s| (s.id, s.props)).collect();
    Ok(TransitionSystem::from_parts(t.initial, states, t.edges)?)
}

pub fn save_transition_system(ts: &TransitionSystem) -> String {
    let mut states: Vec<TsStateJson> = ts
        .states()
        .iter()
        .map(|s| TsStateJson { id: s.ext_id, props: s.props.iter().cloned().collect() })
        .collect();
    states.sort_by_key(|s| s.id);
    let t = TsJson { initial: ts.states()[ts.initial()].ext_id, states, edges: ts.edges() };
    serde_json::to_string_pretty(&t).expect("transition system serialization cannot fail")
}

#[derive(Serialize, Deserialize)]
struct TilingJson {
    tiles: Vec<String>,
    #[serde(rename = "H")]
    h: Vec<(String, String)>,
    #[serde(rename = "V")]
    v: Vec<(String, String)>,
    #[serde(rename = "F")]
    f: Vec<String>,
    #[serde(rename = "L")]
    l: Vec<String>,
    n: usize,
}

pub fn load_tiling_instance(json: &[u8]) -> Result<TilingInstance, JsonError> {
    let t: TilingJson = serde_json::from_slice(json)?;
    TilingInstance::new(t.tiles, t.h, t.v, t.f, t.l, t.n).map_err(|e| JsonError::Tiling(e.to_string()))
}

pub fn save_tiling_instance(inst: &TilingInstance) -> String {
    let t = TilingJson {
        tiles: inst.tiles().to_vec(),
        h: inst.h_pairs(),
        v: inst.v_pairs(),
        f: inst.f_tiles(),
        l: inst.l_tiles(),
        n: inst.n(),
    };
    serde_json::to_string_pretty(&t).expect("tiling serialization cannot fail")
}
