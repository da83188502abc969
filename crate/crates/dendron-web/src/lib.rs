//! Three library calls exposed to the browser page in `www/`.
//! Every function takes text and returns a JSON string; errors come back as
//! `{"error": "..."}` so the page never has to catch.

use std::sync::Arc;

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use dendron::json as io;
use dendron::necklace::Necklace;
use dendron::w::mapping_space;

fn no_files(_: &str) -> Option<String> {
    None
}

fn reply(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

pub fn parse_value(text: &str) -> Result<Value, String> {
    let t = io::tree_from_text(text).map_err(|e| e.to_string())?;
    Ok(json!({
        "tree": t.print(),
        "canonical": t.canonical().print(),
        "leaves": io::edge_names(&t, t.leaf_mask()),
        "inner": io::edge_names(&t, t.inner_mask()),
        "dot": io::tree_to_dot(&t),
    }))
}

pub fn beads_value(tree: &str, joints: &str) -> Result<Value, String> {
    let t = Arc::new(io::tree_from_text(tree).map_err(|e| e.to_string())?);
    let d = io::parse_edges(&t, joints).map_err(|e| e.to_string())?;
    let n = Necklace::new(t.clone(), d).map_err(|e| e.to_string())?;
    let beads: Vec<String> = n.beads().iter().map(|b| t.face_tree(b).0.print()).collect();
    Ok(json!({ "beads": beads, "joint_tree": n.joint_face().source().print() }))
}

/// Cells per dimension of `Map(η_{x1..xn}, η_{x0})` for a `rep:`, `boundary:`,
/// `horn:E:` or `sc:` presheaf on a tree with at most `max_edges` edges.
pub fn space_value(presheaf: &str, signature: &str, max_edges: usize) -> Result<Value, String> {
    let x = io::presheaf_spec(presheaf, &no_files).map_err(|e| e.to_string())?;
    if let Some(u) = x.base() {
        if u.len() > max_edges {
            return Err(format!("tree has {} edges, the page allows {max_edges}", u.len()));
        }
    }
    let sig = io::parse_signature(&x, signature).map_err(|e| e.to_string())?;
    let bound = x.base().map_or(max_edges, |u| u.len());
    let s = mapping_space(&x, &sig, bound)?;
    Ok(json!({ "counts": s.counts(), "cells": s.to_json()["cells"] }))
}

#[wasm_bindgen]
pub fn parse(text: &str) -> String {
    reply(parse_value(text))
}

#[wasm_bindgen]
pub fn beads(tree: &str, joints: &str) -> String {
    reply(beads_value(tree, joints))
}

#[wasm_bindgen]
pub fn space(presheaf: &str, signature: &str) -> String {
    reply(space_value(presheaf, signature, 7))
}
