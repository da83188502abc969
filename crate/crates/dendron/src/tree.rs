//! Planar rooted trees with named edges, their broad relations, and a text syntax.
//!
//! Edges are stored in planar depth-first order, so edge `0` is always the root and
//! the edges above an edge `e` form the contiguous range `e..end(e)`.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// Index of an edge in planar depth-first order.
pub type Edge = usize;

/// Set of edges as a bitmask. Trees are limited to [`MAX_EDGES`] edges.
pub type EdgeSet = u64;

pub const MAX_EDGES: usize = 64;

#[inline]
pub fn bit(e: Edge) -> EdgeSet {
    1u64 << e
}

/// Iterate the members of an edge set in increasing order.
pub fn members(mut s: EdgeSet) -> impl Iterator<Item = Edge> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let e = s.trailing_zeros() as Edge;
            s &= s - 1;
            Some(e)
        }
    })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("duplicate edge name `{name}` at byte {pos}")]
    Duplicate { name: String, pos: usize },
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("tree has {0} edges, at most 64 are supported")]
    TooLarge(usize),
    #[error("invalid tree: {0}")]
    Invalid(String),
    #[error("cannot graft: {0}")]
    Graft(String),
}

/// Nested description of a tree: an edge with an optional vertex on top.
/// `inputs == None` is a leaf, `Some(vec![])` a nullary vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub name: String,
    pub inputs: Option<Vec<Node>>,
}

impl Node {
    pub fn leaf(name: &str) -> Node {
        Node { name: name.to_string(), inputs: None }
    }
    pub fn vertex(name: &str, inputs: Vec<Node>) -> Node {
        Node { name: name.to_string(), inputs: Some(inputs) }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tree {
    names: Vec<String>,
    kids: Vec<Option<Vec<Edge>>>,
    parent: Vec<Option<Edge>>,
    end: Vec<Edge>,
}

/// Preorder builder shared by every tree constructor.
#[derive(Default)]
pub(crate) struct Builder {
    pub names: Vec<String>,
    pub kids: Vec<Option<Vec<Edge>>>,
    pub origin: Vec<Edge>,
}

impl Builder {
    pub fn push(&mut self, name: String, origin: Edge) -> Edge {
        self.names.push(name);
        self.kids.push(None);
        self.origin.push(origin);
        self.names.len() - 1
    }
    pub fn finish(self) -> Result<(Tree, Vec<Edge>), TreeError> {
        let t = Tree::from_parts(self.names, self.kids)?;
        Ok((t, self.origin))
    }
}

impl Tree {
    /// Build from preorder arrays. `kids[e]` must list edges greater than `e`
    /// in preorder; names must be distinct.
    pub(crate) fn from_parts(names: Vec<String>, kids: Vec<Option<Vec<Edge>>>) -> Result<Tree, TreeError> {
        let n = names.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if n > MAX_EDGES {
            return Err(TreeError::TooLarge(n));
        }
        let mut seen = HashSet::new();
        for nm in &names {
            if !seen.insert(nm.as_str()) {
                return Err(TreeError::Duplicate { name: nm.clone(), pos: 0 });
            }
        }
        let mut parent = vec![None; n];
        for (e, k) in kids.iter().enumerate() {
            if let Some(k) = k {
                for &c in k {
                    if c <= e || c >= n || parent[c].is_some() {
                        return Err(TreeError::Invalid("inputs are not in planar preorder".into()));
                    }
                    parent[c] = Some(e);
                }
            }
        }
        let mut end = vec![0; n];
        for e in (0..n).rev() {
            end[e] = match &kids[e] {
                Some(k) if !k.is_empty() => end[*k.last().unwrap()],
                _ => e + 1,
            };
        }
        if end[0] != n || (1..n).any(|e| parent[e].is_none()) {
            return Err(TreeError::Invalid("edges are not connected to the root".into()));
        }
        // Preorder check: the first child of e is e+1 and siblings are contiguous.
        for e in 0..n {
            if let Some(k) = &kids[e] {
                let mut next = e + 1;
                for &c in k {
                    if c != next {
                        return Err(TreeError::Invalid("inputs are not in planar preorder".into()));
                    }
                    next = end[c];
                }
            }
        }
        Ok(Tree { names, kids, parent, end })
    }

    pub fn from_node(node: &Node) -> Result<Tree, TreeError> {
        fn rec(b: &mut Builder, nd: &Node) -> Edge {
            let me = b.push(nd.name.clone(), 0);
            if let Some(ins) = &nd.inputs {
                let mut ch = Vec::with_capacity(ins.len());
                for c in ins {
                    ch.push(rec(b, c));
                }
                b.kids[me] = Some(ch);
            }
            me
        }
        let mut b = Builder::default();
        rec(&mut b, node);
        Ok(b.finish()?.0)
    }

    pub fn to_node(&self) -> Node {
        self.node_at(0)
    }

    fn node_at(&self, e: Edge) -> Node {
        Node {
            name: self.names[e].clone(),
            inputs: self.kids[e].as_ref().map(|k| k.iter().map(|&c| self.node_at(c)).collect()),
        }
    }

    /// The stick tree η with a single edge.
    pub fn stick(name: &str) -> Tree {
        Tree::from_parts(vec![name.to_string()], vec![None]).unwrap()
    }

    /// Corolla with the given root and leaves.
    pub fn corolla(root: &str, leaves: &[&str]) -> Result<Tree, TreeError> {
        Tree::from_node(&Node::vertex(root, leaves.iter().map(|l| Node::leaf(l)).collect()))
    }

    pub fn parse(text: &str) -> Result<Tree, TreeError> {
        Parser::new(text).parse()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_stick(&self) -> bool {
        self.names.len() == 1 && self.kids[0].is_none()
    }

    pub fn root(&self) -> Edge {
        0
    }

    pub fn name(&self, e: Edge) -> &str {
        &self.names[e]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edge(&self, name: &str) -> Option<Edge> {
        self.names.iter().position(|n| n == name)
    }

    pub fn edge_of(&self, name: &str) -> Result<Edge, TreeError> {
        self.edge(name).ok_or_else(|| TreeError::UnknownEdge(name.to_string()))
    }

    pub fn name_index(&self) -> HashMap<&str, Edge> {
        self.names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()
    }

    /// The inputs of the vertex on top of `e`, or `None` if `e` is a leaf.
    pub fn inputs(&self, e: Edge) -> Option<&[Edge]> {
        self.kids[e].as_deref()
    }

    pub fn parent(&self, e: Edge) -> Option<Edge> {
        self.parent[e]
    }

    pub fn is_leaf(&self, e: Edge) -> bool {
        self.kids[e].is_none()
    }

    /// One past the last edge above `e` in preorder.
    pub fn end(&self, e: Edge) -> Edge {
        self.end[e]
    }

    /// `x` lies above `y` or equals it.
    pub fn above_eq(&self, x: Edge, y: Edge) -> bool {
        y <= x && x < self.end[y]
    }

    pub fn leaves(&self) -> Vec<Edge> {
        (0..self.len()).filter(|&e| self.is_leaf(e)).collect()
    }

    /// Out-edges of vertices, in planar order.
    pub fn vertices(&self) -> Vec<Edge> {
        (0..self.len()).filter(|&e| !self.is_leaf(e)).collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.kids.iter().filter(|k| k.is_some()).count()
    }

    pub fn all_mask(&self) -> EdgeSet {
        if self.len() == 64 {
            !0
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn leaf_mask(&self) -> EdgeSet {
        self.leaves().into_iter().fold(0, |m, e| m | bit(e))
    }

    pub fn inner_mask(&self) -> EdgeSet {
        self.all_mask() & !self.leaf_mask() & !bit(0)
    }

    pub fn inner_edges(&self) -> Vec<Edge> {
        members(self.inner_mask()).collect()
    }

    /// Compact planar shape: per edge in preorder, 0 for a leaf and arity+1 otherwise.
    pub fn shape(&self) -> Vec<u8> {
        self.kids.iter().map(|k| k.as_ref().map_or(0, |k| k.len() as u8 + 1)).collect()
    }

    /// Rebuild a tree from a shape with edge names "0", "1", ...
    pub fn from_shape(shape: &[u8]) -> Result<Tree, TreeError> {
        fn rec(shape: &[u8], pos: &mut usize, kids: &mut Vec<Option<Vec<Edge>>>) -> Result<Edge, TreeError> {
            let me = *pos;
            let s = *shape.get(me).ok_or_else(|| TreeError::Invalid("truncated shape".into()))?;
            *pos += 1;
            kids.push(None);
            if s > 0 {
                let mut ch = Vec::new();
                for _ in 0..(s - 1) {
                    ch.push(rec(shape, pos, kids)?);
                }
                kids[me] = Some(ch);
            }
            Ok(me)
        }
        let mut kids = Vec::new();
        let mut pos = 0;
        rec(shape, &mut pos, &mut kids)?;
        if pos != shape.len() {
            return Err(TreeError::Invalid("trailing shape entries".into()));
        }
        let names = (0..kids.len()).map(|i| i.to_string()).collect();
        Tree::from_parts(names, kids)
    }

    /// Same planar tree with edges renamed to their preorder index.
    pub fn canonical(&self) -> Tree {
        Tree {
            names: (0..self.len()).map(|i| i.to_string()).collect(),
            kids: self.kids.clone(),
            parent: self.parent.clone(),
            end: self.end.clone(),
        }
    }

    /// Canonical representative together with the renaming old name -> new name.
    pub fn canonical_form(&self) -> (Tree, Vec<(String, String)>) {
        let c = self.canonical();
        let ren = self.names.iter().cloned().zip(c.names.iter().cloned()).collect();
        (c, ren)
    }

    /// Rename edges; `f` must be injective.
    pub fn renamed(&self, f: impl Fn(Edge, &str) -> String) -> Result<Tree, TreeError> {
        let names: Vec<String> = self.names.iter().enumerate().map(|(e, n)| f(e, n)).collect();
        Tree::from_parts(names, self.kids.clone())
    }

    /// Descend from `rhs`, stopping at edges of `stop`; returns the edges reached
    /// in planar order, or `None` if a leaf of the tree outside `stop` is met.
    fn descend(&self, stop: EdgeSet, rhs: Edge, reached: &mut Vec<Edge>, region: &mut EdgeSet) -> bool {
        *region |= bit(rhs);
        if stop & bit(rhs) != 0 {
            reached.push(rhs);
            return true;
        }
        match &self.kids[rhs] {
            None => false,
            Some(k) => k.iter().all(|&c| self.descend(stop, c, reached, region)),
        }
    }

    /// Broad relation `lhs ≤ rhs`: an outer subtree rooted at `rhs` has leaf tuple `lhs`
    /// (in planar order if `planar`, as a multiset otherwise).
    pub fn leq(&self, lhs: &[Edge], rhs: Edge, planar: bool) -> bool {
        let mut stop = 0u64;
        for &l in lhs {
            if stop & bit(l) != 0 {
                return false;
            }
            stop |= bit(l);
        }
        let mut reached = Vec::with_capacity(lhs.len());
        let mut region = 0;
        if !self.descend(stop, rhs, &mut reached, &mut region) || reached.len() != lhs.len() {
            return false;
        }
        !planar || reached == lhs
    }

    /// Name-based [`Tree::leq`].
    pub fn broad_leq(&self, lhs: &[&str], rhs: &str, planar: bool) -> Result<bool, TreeError> {
        let l: Vec<Edge> = lhs.iter().map(|n| self.edge_of(n)).collect::<Result<_, _>>()?;
        Ok(self.leq(&l, self.edge_of(rhs)?, planar))
    }

    /// The outer face witnessing `leaves ≤ rhs`, if the relation holds.
    pub fn witness(&self, leaves: EdgeSet, rhs: Edge) -> Option<Face> {
        let mut reached = Vec::new();
        let mut region = 0;
        if !self.descend(leaves, rhs, &mut reached, &mut region) || reached.len() != leaves.count_ones() as usize {
            return None;
        }
        Some(Face { edges: region, leaves, kept: region & !leaves & !bit(rhs) })
    }

    /// All outer faces rooted at `e`, as (planar leaf list, face).
    pub fn outer_faces_at(&self, e: Edge) -> Vec<(Vec<Edge>, Face)> {
        let mut out = vec![(vec![e], Face { edges: bit(e), leaves: bit(e), kept: 0 })];
        if let Some(k) = &self.kids[e] {
            let mut acc: Vec<(Vec<Edge>, EdgeSet, EdgeSet)> = vec![(vec![], bit(e), 0)];
            for &c in k {
                let sub = self.outer_faces_at(c);
                let mut next = Vec::with_capacity(acc.len() * sub.len());
                for (l, ed, lv) in &acc {
                    for (sl, sf) in &sub {
                        let mut nl = l.clone();
                        nl.extend_from_slice(sl);
                        next.push((nl, ed | sf.edges, lv | sf.leaves));
                    }
                }
                acc = next;
            }
            for (l, ed, lv) in acc {
                out.push((l, Face { edges: ed, leaves: lv, kept: ed & !lv & !bit(e) }));
            }
        }
        out
    }

    /// Every outer face of the tree.
    pub fn outer_faces(&self) -> Vec<Face> {
        (0..self.len()).flat_map(|e| self.outer_faces_at(e).into_iter().map(|(_, f)| f)).collect()
    }

    /// Build the tree of a face; its edges keep their names. Returns the face tree
    /// and, per face edge, the edge of `self` it comes from.
    pub fn face_tree(&self, f: &Face) -> (Tree, Vec<Edge>) {
        fn rec(t: &Tree, f: &Face, b: &mut Builder, e: Edge) -> Edge {
            let me = b.push(t.names[e].clone(), e);
            if f.leaves & bit(e) == 0 {
                let mut ch = Vec::new();
                collect(t, f, b, e, &mut ch);
                b.kids[me] = Some(ch);
            }
            me
        }
        fn collect(t: &Tree, f: &Face, b: &mut Builder, e: Edge, ch: &mut Vec<Edge>) {
            for &c in t.kids[e].as_deref().unwrap_or(&[]) {
                if f.leaves & bit(c) != 0 || f.kept & bit(c) != 0 {
                    ch.push(rec(t, f, b, c));
                } else {
                    collect(t, f, b, c, ch);
                }
            }
        }
        let mut b = Builder::default();
        rec(self, f, &mut b, f.root());
        b.finish().expect("faces of valid trees are valid")
    }

    /// Graft `upper` onto the leaf `at` of `self`; `at` must also be the root of `upper`.
    pub fn graft(&self, upper: &Tree, at: &str) -> Result<Tree, TreeError> {
        let l = self.edge(at).ok_or_else(|| TreeError::Graft(format!("`{at}` is not an edge of the lower tree")))?;
        if !self.is_leaf(l) {
            return Err(TreeError::Graft(format!("`{at}` is not a leaf of the lower tree")));
        }
        if upper.name(0) != at {
            return Err(TreeError::Graft(format!("`{at}` is not the root of the upper tree")));
        }
        let lower_names: HashSet<&str> = self.names.iter().map(|s| s.as_str()).collect();
        if let Some(clash) = upper.names[1..].iter().find(|n| lower_names.contains(n.as_str())) {
            return Err(TreeError::Graft(format!("edge `{clash}` occurs in both trees")));
        }
        fn splice(n: &mut Node, at: &str, upper: &Node) {
            if n.name == at {
                *n = upper.clone();
                return;
            }
            if let Some(ins) = &mut n.inputs {
                for c in ins {
                    splice(c, at, upper);
                }
            }
        }
        let mut node = self.to_node();
        splice(&mut node, at, &upper.to_node());
        Tree::from_node(&node)
    }

    /// Serialize in the text syntax.
    pub fn print(&self) -> String {
        let mut s = String::new();
        self.print_at(0, &mut s);
        s
    }

    fn print_at(&self, e: Edge, s: &mut String) {
        s.push_str(&self.names[e]);
        if let Some(k) = &self.kids[e] {
            s.push('(');
            for (i, &c) in k.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                self.print_at(c, s);
            }
            s.push(')');
        }
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print())
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({})", self.print())
    }
}

/// A planar face of a tree: an outer face (given by its edges and leaves) with a
/// set of inner edges kept; the other inner edges of the outer face are contracted.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Face {
    /// Edges of the outer closure.
    pub edges: EdgeSet,
    /// Leaves of the outer closure (and of the face).
    pub leaves: EdgeSet,
    /// Kept inner edges.
    pub kept: EdgeSet,
}

impl Face {
    pub fn whole(t: &Tree) -> Face {
        Face { edges: t.all_mask(), leaves: t.leaf_mask(), kept: t.inner_mask() }
    }

    pub fn root(&self) -> Edge {
        self.edges.trailing_zeros() as Edge
    }

    /// Inner edges of the outer closure.
    pub fn closure_inner(&self) -> EdgeSet {
        self.edges & !self.leaves & !bit(self.root())
    }

    pub fn is_outer(&self) -> bool {
        self.kept == self.closure_inner()
    }

    pub fn closure(&self) -> Face {
        Face { kept: self.closure_inner(), ..*self }
    }

    /// Edges of the face itself.
    pub fn edge_set(&self) -> EdgeSet {
        (self.edges & !self.closure_inner()) | self.kept
    }

    pub fn with_kept(&self, kept: EdgeSet) -> Face {
        Face { kept: kept & self.closure_inner(), ..*self }
    }

    /// Whether `self` factors through `other` (both faces of the same tree).
    pub fn within(&self, other: &Face, t: &Tree) -> bool {
        if self.edge_set() & !other.edge_set() != 0 {
            return false;
        }
        let (ot, origin) = t.face_tree(other);
        let (st, sorigin) = t.face_tree(self);
        let pos: HashMap<Edge, Edge> = origin.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        st.vertices().into_iter().all(|v| {
            let lhs: Vec<Edge> = st.inputs(v).unwrap().iter().map(|&c| pos[&sorigin[c]]).collect();
            ot.leq(&lhs, pos[&sorigin[v]], false)
        })
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    seen: HashSet<String>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, bytes: src.as_bytes(), pos: 0, seen: HashSet::new() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn err(&self, msg: &str) -> TreeError {
        TreeError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn parse(mut self) -> Result<Tree, TreeError> {
        self.skip_ws();
        if self.pos == self.bytes.len() {
            return Err(TreeError::Empty);
        }
        let node = self.tree()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("unexpected trailing input"));
        }
        let count = self.seen.len();
        if count > MAX_EDGES {
            return Err(TreeError::TooLarge(count));
        }
        Tree::from_node(&node)
    }

    fn ident(&mut self) -> Result<String, TreeError> {
        self.skip_ws();
        let start = self.pos;
        for (i, ch) in self.src[start..].char_indices() {
            if !(ch.is_alphanumeric() || ch == '_' || ch == '\'' || ch == '.' || ch == '-') {
                self.pos = start + i;
                break;
            }
            self.pos = start + i + ch.len_utf8();
        }
        if self.pos == start {
            return Err(self.err("expected an edge name"));
        }
        let name = self.src[start..self.pos].to_string();
        if !self.seen.insert(name.clone()) {
            return Err(TreeError::Duplicate { name, pos: start });
        }
        Ok(name)
    }

    fn tree(&mut self) -> Result<Node, TreeError> {
        let name = self.ident()?;
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'(' {
            self.pos += 1;
            self.skip_ws();
            let mut ins = Vec::new();
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b')' {
                self.pos += 1;
                return Ok(Node::vertex(&name, ins));
            }
            loop {
                ins.push(self.tree()?);
                self.skip_ws();
                match self.bytes.get(self.pos) {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.err("expected `,` or `)`")),
                }
            }
            Ok(Node::vertex(&name, ins))
        } else {
            Ok(Node::leaf(&name))
        }
    }
}

/// All planar tree shapes with exactly `n` edges, named by preorder index.
pub fn trees_with_edges(n: usize) -> Vec<Tree> {
    fn shapes(n: usize, memo: &mut HashMap<usize, Vec<Vec<u8>>>) -> Vec<Vec<u8>> {
        if let Some(v) = memo.get(&n) {
            return v.clone();
        }
        let mut out = Vec::new();
        if n == 1 {
            out.push(vec![0]);
        }
        if n >= 1 {
            // root edge with a vertex whose inputs use n-1 edges in total
            for seq in forests(n - 1, memo) {
                let (arity, body) = seq;
                let mut s = vec![arity as u8 + 1];
                s.extend(body);
                out.push(s);
            }
        }
        memo.insert(n, out.clone());
        out
    }
    fn forests(n: usize, memo: &mut HashMap<usize, Vec<Vec<u8>>>) -> Vec<(usize, Vec<u8>)> {
        if n == 0 {
            return vec![(0, vec![])];
        }
        let mut out = Vec::new();
        for first in 1..=n {
            let heads = shapes(first, memo);
            let tails = forests(n - first, memo);
            for h in &heads {
                for (k, t) in &tails {
                    let mut s = h.clone();
                    s.extend(t);
                    out.push((k + 1, s));
                }
            }
        }
        out
    }
    if n == 0 {
        return vec![];
    }
    let mut memo = HashMap::new();
    shapes(n, &mut memo).iter().map(|s| Tree::from_shape(s).unwrap()).collect()
}

/// All planar tree shapes with between 1 and `max` edges.
pub fn trees_up_to(max: usize) -> Vec<Tree> {
    (1..=max).flat_map(trees_with_edges).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t21() -> Tree {
        Tree::parse("r(c(a,b),d,e())").unwrap()
    }

    #[test]
    fn parse_paper_tree() {
        let t = t21();
        assert_eq!(t.len(), 6);
        let r = t.edge("r").unwrap();
        let names: Vec<&str> = t.inputs(r).unwrap().iter().map(|&e| t.name(e)).collect();
        assert_eq!(names, ["c", "d", "e"]);
        assert_eq!(t.inputs(t.edge("e").unwrap()), Some(&[][..]));
        let leaves: Vec<&str> = t.leaves().iter().map(|&e| t.name(e)).collect();
        assert_eq!(leaves, ["a", "b", "d"]);
        let inner: Vec<&str> = t.inner_edges().iter().map(|&e| t.name(e)).collect();
        assert_eq!(inner, ["c", "e"]);
        assert_eq!(t.print(), "r(c(a,b),d,e())");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(Tree::parse(""), Err(TreeError::Empty));
        assert_eq!(Tree::parse("  "), Err(TreeError::Empty));
        assert_eq!(Tree::parse("r(a,a)"), Err(TreeError::Duplicate { name: "a".into(), pos: 4 }));
        assert!(matches!(Tree::parse("r(a,"), Err(TreeError::Syntax { pos: 4, .. })));
        assert!(matches!(Tree::parse("r(a b)"), Err(TreeError::Syntax { pos: 4, .. })));
        assert!(matches!(Tree::parse("r)"), Err(TreeError::Syntax { pos: 1, .. })));
        assert_eq!(Tree::parse(" x ").unwrap().print(), "x");
        assert_eq!(Tree::parse("r( a , b )").unwrap().print(), "r(a,b)");
    }

    #[test]
    fn broad_relations_of_paper_tree() {
        let t = t21();
        for (lhs, ok) in [
            (&["c", "d", "e"][..], true),
            (&["a", "b", "d", "e"][..], true),
            (&["c", "d"][..], true),
            (&["a", "b", "d"][..], true),
            (&["a", "b"][..], false),
            (&["r"][..], true),
        ] {
            assert_eq!(t.broad_leq(lhs, "r", true).unwrap(), ok, "{lhs:?}");
        }
        assert!(t.broad_leq(&["b", "a"], "c", false).unwrap());
        assert!(!t.broad_leq(&["b", "a"], "c", true).unwrap());
        assert!(t.broad_leq(&[], "e", true).unwrap());
        assert!(t.broad_leq(&["q"], "r", true).is_err());
    }

    #[test]
    fn canonical_forms() {
        let a = Tree::parse("r(a,b)").unwrap();
        let b = Tree::parse("s(x,y)").unwrap();
        assert_eq!(a.canonical(), b.canonical());
        assert_eq!(Tree::stick("x").canonical().print(), "0");
        let c = Tree::parse("r(a(),b)").unwrap();
        let d = Tree::parse("r(b,a())").unwrap();
        assert_ne!(c.canonical(), d.canonical());
    }

    #[test]
    fn tree_counts() {
        // A = x + x/(1-A)
        let counts: Vec<usize> = (1..=6).map(|n| trees_with_edges(n).len()).collect();
        assert_eq!(&counts[..5], &[2, 2, 6, 22, 90]);
        for n in 1..=6 {
            for t in trees_with_edges(n) {
                assert_eq!(t.len(), n);
                assert_eq!(Tree::from_shape(&t.shape()).unwrap(), t);
            }
        }
    }

    #[test]
    fn grafting() {
        let lower = Tree::parse("r(a,b)").unwrap();
        let upper = Tree::parse("a(c,d)").unwrap();
        assert_eq!(lower.graft(&upper, "a").unwrap().print(), "r(a(c,d),b)");
        let t = t21();
        assert_eq!(Tree::stick("r").graft(&t, "r").unwrap(), t);
        assert!(lower.graft(&Tree::parse("b(a)").unwrap(), "b").is_err());
        assert!(lower.graft(&upper, "r").is_err());
    }

    #[test]
    fn faces_build() {
        let t = t21();
        let e = |n: &str| t.edge(n).unwrap();
        let f = t.witness(bit(e("a")) | bit(e("b")) | bit(e("d")), e("r")).unwrap();
        let (ft, origin) = t.face_tree(&f);
        assert_eq!(ft.print(), "r(c(a,b),d,e())");
        assert_eq!(origin, (0..6).collect::<Vec<_>>());
        let (inner, _) = t.face_tree(&f.with_kept(bit(e("c"))));
        assert_eq!(inner.print(), "r(c(a,b),d)");
        let (lr, _) = t.face_tree(&f.with_kept(0));
        assert_eq!(lr.print(), "r(a,b,d)");
        assert!(t.witness(bit(e("c")) | bit(e("d")), e("r")).is_some());
        assert_eq!(t.outer_faces_at(e("e")).len(), 2);
    }
}
