//! JSON forms of trees, maps, necklaces and presentations, plus the
//! `kind:...` presheaf specs used on the command line.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::map::{Factorization, MapClass, MapError, TreeMap};
use crate::necklace::{Necklace, NecklaceError};
use crate::presheaf::{Colimit, DendroidalSet, Dendrex, Presheaf, PresentationError, Relation};
use crate::tree::{bit, members, Edge, EdgeSet, Face, Node, Tree, TreeError};
use crate::w::Signature;

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Necklace(#[from] NecklaceError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("bad json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Other(String),
}

impl InputError {
    pub fn kind(&self) -> &'static str {
        match self {
            InputError::Tree(_) => "tree",
            InputError::Map(_) => "map",
            InputError::Necklace(_) => "necklace",
            InputError::Presentation(_) => "presentation",
            InputError::Json(_) => "json",
            InputError::Other(_) => "input",
        }
    }
}

fn other(msg: impl Into<String>) -> InputError {
    InputError::Other(msg.into())
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct VertexJson {
    pub out: String,
    #[serde(rename = "in")]
    pub inputs: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TreeJson {
    pub root: String,
    pub vertices: Vec<VertexJson>,
}

/// Vertices are listed in preorder of their out-edges.
pub fn tree_to_json(t: &Tree) -> TreeJson {
    let vertices = t
        .vertices()
        .into_iter()
        .map(|v| VertexJson { out: t.name(v).to_string(), inputs: t.inputs(v).unwrap().iter().map(|&c| t.name(c).to_string()).collect() })
        .collect();
    TreeJson { root: t.name(t.root()).to_string(), vertices }
}

pub fn tree_from_json(j: &TreeJson) -> Result<Tree, TreeError> {
    let mut tops: HashMap<&str, &[String]> = HashMap::new();
    for v in &j.vertices {
        if tops.insert(v.out.as_str(), &v.inputs).is_some() {
            return Err(TreeError::Invalid(format!("`{}` is the output of two vertices", v.out)));
        }
    }
    let mut seen = HashSet::new();
    fn rec<'a>(name: &'a str, tops: &HashMap<&str, &'a [String]>, seen: &mut HashSet<&'a str>) -> Result<Node, TreeError> {
        if !seen.insert(name) {
            return Err(TreeError::Invalid(format!("edge `{name}` is reached twice")));
        }
        Ok(match tops.get(name) {
            None => Node::leaf(name),
            Some(ins) => Node::vertex(name, ins.iter().map(|c| rec(c, tops, seen)).collect::<Result<_, _>>()?),
        })
    }
    let node = rec(&j.root, &tops, &mut seen)?;
    if let Some(v) = j.vertices.iter().find(|v| !seen.contains(v.out.as_str())) {
        return Err(TreeError::Invalid(format!("vertex `{}` is not connected to the root", v.out)));
    }
    Tree::from_node(&node)
}

/// DSL text, or tree JSON when the text starts with `{`.
pub fn tree_from_text(text: &str) -> Result<Tree, InputError> {
    let text = text.trim();
    if text.starts_with('{') {
        let j: TreeJson = serde_json::from_str(text)?;
        Ok(tree_from_json(&j)?)
    } else {
        Ok(Tree::parse(text)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapJson {
    pub source: TreeJson,
    pub target: TreeJson,
    pub assignment: BTreeMap<String, String>,
}

pub fn map_to_json(m: &TreeMap) -> MapJson {
    MapJson { source: tree_to_json(m.source()), target: tree_to_json(m.target()), assignment: m.pairs().into_iter().collect() }
}

pub fn map_from_json(j: &MapJson) -> Result<TreeMap, InputError> {
    let s = Arc::new(tree_from_json(&j.source)?);
    let t = Arc::new(tree_from_json(&j.target)?);
    let pairs: Vec<(String, String)> = j.assignment.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
    Ok(TreeMap::from_names(s, t, &pairs)?)
}

/// `a:x,b:y,...`
pub fn parse_assignment(text: &str) -> Result<Vec<(String, String)>, InputError> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(|| other(format!("assignment entry `{p}` is not `source:target`")))?;
            Ok((a.trim().to_string(), b.trim().to_string()))
        })
        .collect()
}

pub fn edge_set(t: &Tree, names: &[String]) -> Result<EdgeSet, InputError> {
    names.iter().try_fold(0, |m, n| Ok(m | bit(t.edge_of(n)?)))
}

pub fn edge_names(t: &Tree, m: EdgeSet) -> Vec<String> {
    members(m).map(|e| t.name(e).to_string()).collect()
}

/// Comma-separated edge names; empty text is the empty set.
pub fn parse_edges(t: &Tree, text: &str) -> Result<EdgeSet, InputError> {
    let names: Vec<String> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect();
    edge_set(t, &names)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NecklaceJson {
    pub carrier: TreeJson,
    pub joints: Vec<String>,
}

pub fn necklace_to_json(n: &Necklace) -> NecklaceJson {
    NecklaceJson { carrier: tree_to_json(&n.carrier), joints: n.print_joints() }
}

pub fn necklace_from_json(j: &NecklaceJson) -> Result<Necklace, InputError> {
    let t = Arc::new(tree_from_json(&j.carrier)?);
    let joints = edge_set(&t, &j.joints)?;
    Ok(Necklace::new(t, joints)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationJson {
    pub from: usize,
    pub to: usize,
    pub map: MapJson,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresentationJson {
    pub generators: Vec<TreeJson>,
    pub relations: Vec<RelationJson>,
}

pub fn presentation_from_json(j: &PresentationJson) -> Result<Colimit, InputError> {
    let generators: Vec<Arc<Tree>> = j.generators.iter().map(|g| tree_from_json(g).map(Arc::new)).collect::<Result<_, _>>()?;
    let mut relations = Vec::new();
    for r in &j.relations {
        let (Some(a), Some(b)) = (generators.get(r.from), generators.get(r.to)) else {
            return Err(PresentationError::Index(relations.len()).into());
        };
        let pairs: Vec<(String, String)> = r.map.assignment.iter().map(|(x, y)| (x.clone(), y.clone())).collect();
        let map = TreeMap::from_names(a.clone(), b.clone(), &pairs)?;
        relations.push(Relation { from: r.from, to: r.to, map });
    }
    Ok(Colimit::new(generators, relations)?)
}

/// Edges as arcs from the vertex (or leaf end) on top to the vertex below.
pub fn tree_to_dot(t: &Tree) -> String {
    let mut out = String::from("digraph tree {\n  rankdir=BT;\n  node [shape=circle, label=\"\", width=0.12];\n  out [shape=none];\n");
    for e in 0..t.len() {
        if t.is_leaf(e) {
            out.push_str(&format!("  l{e} [shape=none];\n"));
        }
    }
    for e in 0..t.len() {
        let top = if t.is_leaf(e) { format!("l{e}") } else { format!("v{e}") };
        let below = t.parent(e).map_or("out".to_string(), |p| format!("v{p}"));
        out.push_str(&format!("  {top} -> {below} [label={:?}];\n", t.name(e)));
    }
    out.push_str("}\n");
    out
}

pub fn face_to_json(t: &Tree, f: &Face) -> Value {
    let (ft, _) = t.face_tree(f);
    json!({
        "tree": ft.print(),
        "edges": edge_names(t, f.edge_set()),
        "outer": f.is_outer(),
        "closure": edge_names(t, f.edges),
    })
}

/// The face of `t` whose face tree, in the edge names of `t`, is `sub`.
pub fn face_from_tree(t: &Tree, sub: &Tree) -> Option<Face> {
    let text = sub.print();
    crate::face::enumerate_faces(t, crate::face::FaceKind::All).into_iter().find(|f| t.face_tree(f).0.print() == text)
}

pub fn class_to_json(c: &MapClass) -> Value {
    let mut m = serde_json::Map::new();
    for k in crate::map::Class::ALL {
        m.insert(k.name().to_string(), Value::Bool(c.has(k)));
    }
    Value::Object(m)
}

pub fn factorization_to_json(f: &Factorization) -> Value {
    let part = |m: &TreeMap| json!({"map": map_to_json(m), "identity": m.is_identity()});
    json!({"iso": part(&f.iso), "pd": part(&f.pd), "pi": part(&f.pi), "po": part(&f.po)})
}

/// Resolve a tree argument: a readable file (DSL or tree JSON) or inline DSL.
pub fn tree_arg(text: &str, read: &dyn Fn(&str) -> Option<String>) -> Result<Tree, InputError> {
    match read(text) {
        Some(body) => tree_from_text(&body),
        None => tree_from_text(text),
    }
}

/// `rep:T`, `boundary:T`, `horn:e,f:T`, `sc:T`, `necklace:j,k:T`, or a
/// presentation JSON (`pres:FILE`, or a bare file name). `T` is inline DSL
/// or a file read by `read`.
pub fn presheaf_spec(spec: &str, read: &dyn Fn(&str) -> Option<String>) -> Result<Presheaf, InputError> {
    let (kind, rest) = spec.split_once(':').unwrap_or(("pres", spec));
    let tree = |s: &str| tree_arg(s, read).map(Arc::new);
    let with_edges = |rest: &str| -> Result<(Arc<Tree>, EdgeSet), InputError> {
        let (es, t) = rest.split_once(':').ok_or_else(|| other(format!("`{kind}` needs `EDGES:TREE`")))?;
        let t = tree(t)?;
        let m = parse_edges(&t, es)?;
        Ok((t, m))
    };
    Ok(match kind {
        "rep" => Presheaf::representable(tree(rest)?),
        "boundary" => Presheaf::boundary(tree(rest)?),
        "sc" => Presheaf::segal_core(tree(rest)?),
        "horn" => {
            let (t, e) = with_edges(rest)?;
            if e == 0 || e & !t.inner_mask() != 0 {
                return Err(other("a horn needs a non-empty set of inner edges"));
            }
            Presheaf::horn(t, e)
        }
        "necklace" => {
            let (t, e) = with_edges(rest)?;
            Necklace::new(t.clone(), e)?;
            Presheaf::necklace(t, e)
        }
        "pres" => {
            let body = read(rest).ok_or_else(|| other(format!("cannot read presentation `{rest}`")))?;
            let j: PresentationJson = serde_json::from_str(&body)?;
            Presheaf::Colimit(Arc::new(presentation_from_json(&j)?))
        }
        _ => return Err(other(format!("unknown presheaf kind `{kind}`"))),
    })
}

/// A color: the label of a dendrex at `η`, or `g:e` for a generator edge of a presentation.
pub fn parse_color(x: &Presheaf, text: &str) -> Result<Dendrex, InputError> {
    let eta = Arc::new(Tree::stick("x"));
    let cells = x.dendrices(&eta);
    if let Some(d) = cells.iter().find(|d| x.label(d) == text) {
        return Ok(d.clone());
    }
    if let (Presheaf::Colimit(c), Some((g, e))) = (x, text.split_once(':')) {
        let g: usize = g.parse().map_err(|_| other(format!("bad generator in color `{text}`")))?;
        let t = c.generators.get(g).ok_or_else(|| other(format!("no generator {g}")))?;
        let e: Edge = t.edge_of(e)?;
        return Ok(c.representative(&eta, Dendrex { gen: g, map: vec![e] }));
    }
    Err(other(format!("`{text}` is not a color of the presheaf")))
}

/// `x1,...,xn;x0`, or `leaf-root` for a presheaf on a tree.
pub fn parse_signature(x: &Presheaf, text: &str) -> Result<Signature<Dendrex>, InputError> {
    if text == "leaf-root" {
        let u = x.base().ok_or_else(|| other("`leaf-root` needs a presheaf on a single tree"))?;
        let d = |e: Edge| Dendrex { gen: 0, map: vec![e] };
        return Ok(Signature { leaves: u.leaves().into_iter().map(d).collect(), root: d(u.root()) });
    }
    let (ls, r) = text.split_once(';').ok_or_else(|| other("signature must look like `a,b;r`"))?;
    let leaves = ls.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|c| parse_color(x, c)).collect::<Result<_, _>>()?;
    Ok(Signature { leaves, root: parse_color(x, r.trim())? })
}
