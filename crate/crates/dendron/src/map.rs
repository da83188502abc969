//! Maps between trees: validation, classification, composition, factorization.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::tree::{bit, members, Builder, Edge, EdgeSet, Face, Tree, TreeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("relation ({}) <= {rhs} goes to ({}) <= {img_rhs}, which does not hold in the target", lhs.join(","), img_lhs.join(","))]
    RelationViolation { lhs: Vec<String>, rhs: String, img_lhs: Vec<String>, img_rhs: String },
    #[error("assignment has {got} entries for {expected} source edges")]
    Arity { got: usize, expected: usize },
    #[error("source edge `{0}` has no image")]
    Missing(String),
    #[error("cannot compose: the maps are not composable")]
    Mismatch,
    #[error("enumeration bound exceeded: trees have {0} edges, bound is {1}")]
    Bound(usize, usize),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// A map of trees, stored as an edge assignment.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeMap {
    source: Arc<Tree>,
    target: Arc<Tree>,
    assign: Vec<Edge>,
}

impl fmt::Debug for TreeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self
            .assign
            .iter()
            .enumerate()
            .map(|(s, &t)| format!("{}:{}", self.source.name(s), self.target.name(t)))
            .collect();
        write!(f, "{} -> {} [{}]", self.source, self.target, pairs.join(","))
    }
}

/// First generating relation of `s` not preserved by `assign`.
pub fn violation(s: &Tree, t: &Tree, assign: &[Edge]) -> Option<Edge> {
    s.vertices().into_iter().find(|&v| {
        let lhs: Vec<Edge> = s.inputs(v).unwrap().iter().map(|&c| assign[c]).collect();
        !t.leq(&lhs, assign[v], false)
    })
}

impl TreeMap {
    pub fn new(source: Arc<Tree>, target: Arc<Tree>, assign: Vec<Edge>) -> Result<TreeMap, MapError> {
        if assign.len() != source.len() {
            return Err(MapError::Arity { got: assign.len(), expected: source.len() });
        }
        if let Some(&bad) = assign.iter().find(|&&e| e >= target.len()) {
            return Err(MapError::Tree(TreeError::UnknownEdge(bad.to_string())));
        }
        if let Some(v) = violation(&source, &target, &assign) {
            let ins = source.inputs(v).unwrap();
            return Err(MapError::RelationViolation {
                lhs: ins.iter().map(|&c| source.name(c).to_string()).collect(),
                rhs: source.name(v).to_string(),
                img_lhs: ins.iter().map(|&c| target.name(assign[c]).to_string()).collect(),
                img_rhs: target.name(assign[v]).to_string(),
            });
        }
        Ok(TreeMap { source, target, assign })
    }

    /// Build without checking relations; the caller guarantees validity.
    pub fn new_unchecked(source: Arc<Tree>, target: Arc<Tree>, assign: Vec<Edge>) -> TreeMap {
        debug_assert!(violation(&source, &target, &assign).is_none(), "invalid map");
        TreeMap { source, target, assign }
    }

    /// Validate an assignment given by edge names.
    pub fn from_names(source: Arc<Tree>, target: Arc<Tree>, pairs: &[(String, String)]) -> Result<TreeMap, MapError> {
        let mut assign = vec![usize::MAX; source.len()];
        for (a, b) in pairs {
            assign[source.edge_of(a)?] = target.edge_of(b)?;
        }
        if let Some(s) = assign.iter().position(|&e| e == usize::MAX) {
            return Err(MapError::Missing(source.name(s).to_string()));
        }
        TreeMap::new(source, target, assign)
    }

    pub fn identity(t: Arc<Tree>) -> TreeMap {
        let assign = (0..t.len()).collect();
        TreeMap { source: t.clone(), target: t, assign }
    }

    /// The edge `e` of `t`, as a map from the stick tree.
    pub fn edge_of(t: &Arc<Tree>, e: Edge) -> TreeMap {
        TreeMap { source: Arc::new(Tree::stick(t.name(e))), target: t.clone(), assign: vec![e] }
    }

    pub fn source(&self) -> &Arc<Tree> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Tree> {
        &self.target
    }

    pub fn assignment(&self) -> &[Edge] {
        &self.assign
    }

    pub fn apply(&self, e: Edge) -> Edge {
        self.assign[e]
    }

    pub fn pairs(&self) -> Vec<(String, String)> {
        self.assign
            .iter()
            .enumerate()
            .map(|(s, &t)| (self.source.name(s).to_string(), self.target.name(t).to_string()))
            .collect()
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &TreeMap) -> Result<TreeMap, MapError> {
        if *f.target != *self.source {
            return Err(MapError::Mismatch);
        }
        Ok(TreeMap {
            source: f.source.clone(),
            target: self.target.clone(),
            assign: f.assign.iter().map(|&e| self.assign[e]).collect(),
        })
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &TreeMap) -> Result<TreeMap, MapError> {
        g.after(self)
    }

    pub fn image(&self) -> EdgeSet {
        self.assign.iter().fold(0, |m, &e| m | bit(e))
    }

    pub fn is_identity(&self) -> bool {
        *self.source == *self.target && self.assign.iter().enumerate().all(|(i, &e)| i == e)
    }

    pub fn is_injective(&self) -> bool {
        self.image().count_ones() as usize == self.assign.len()
    }

    pub fn is_surjective(&self) -> bool {
        self.image() == self.target.all_mask()
    }

    pub fn is_tall(&self) -> bool {
        let leaves: EdgeSet = self.source.leaves().into_iter().fold(0, |m, l| m | bit(self.assign[l]));
        self.assign[0] == 0
            && leaves == self.target.leaf_mask()
            && self.source.leaves().len() == self.target.leaves().len()
    }

    /// Every generating relation lands in planar order.
    pub fn is_planar(&self) -> bool {
        self.source.vertices().into_iter().all(|v| {
            let ins = self.source.inputs(v).unwrap();
            ins.windows(2).all(|w| self.assign[w[0]] < self.assign[w[1]])
        })
    }

    /// Interval condition: no edge strictly between two image edges is missed.
    pub fn is_interval_convex(&self) -> bool {
        let img = self.image();
        members(img).all(|x| {
            let mut y = self.target.parent(x);
            let mut missed = false;
            while let Some(p) = y {
                if img & bit(p) != 0 {
                    if missed {
                        return false;
                    }
                } else {
                    missed = true;
                }
                y = self.target.parent(p);
            }
            true
        })
    }

    /// The witness of each generating relation keeps its inner edges inside the image.
    pub fn is_convex(&self) -> bool {
        let img = self.image();
        self.source.vertices().into_iter().all(|v| {
            let lhs = self.source.inputs(v).unwrap().iter().fold(0, |m, &c| m | bit(self.assign[c]));
            match self.target.witness(lhs, self.assign[v]) {
                Some(w) => w.closure_inner() & !img == 0,
                None => false,
            }
        })
    }

    /// The outer closure of the image: witness of the image of the leaf-root relation.
    pub fn closure(&self) -> Face {
        let leaves = self.source.leaves().into_iter().fold(0, |m, l| m | bit(self.assign[l]));
        self.target.witness(leaves, self.assign[0]).expect("valid maps preserve the leaf-root relation")
    }

    /// The image as a face of the target.
    pub fn image_face(&self) -> Face {
        let f = self.closure();
        f.with_kept(self.image())
    }

    pub fn classify(&self) -> MapClass {
        let fz = factorize(self);
        let face = self.is_injective();
        MapClass {
            tall: self.is_tall(),
            face,
            inner_face: face && fz.po.is_identity(),
            outer_face: face && fz.pi.is_identity(),
            degeneracy: self.is_surjective() && self.is_tall(),
            planar: self.is_planar(),
            convex: self.is_convex(),
            iso: face && self.is_surjective() && self.is_tall(),
        }
    }

    /// Tall map followed by an outer face.
    pub fn tall_outer(&self) -> (TreeMap, TreeMap) {
        let f = self.closure();
        let (bar, origin) = self.target.face_tree(&f);
        let pos = position_table(&origin, self.target.len());
        let bar = Arc::new(bar);
        let t = TreeMap { source: self.source.clone(), target: bar.clone(), assign: self.assign.iter().map(|&e| pos[e]).collect() };
        (t, TreeMap { source: bar, target: self.target.clone(), assign: origin })
    }

    /// Degeneracy (including the reordering isomorphism) followed by a planar face.
    pub fn degeneracy_face(&self) -> (TreeMap, TreeMap) {
        let f = self.image_face();
        let (img, origin) = self.target.face_tree(&f);
        let pos = position_table(&origin, self.target.len());
        let img = Arc::new(img);
        let d = TreeMap { source: self.source.clone(), target: img.clone(), assign: self.assign.iter().map(|&e| pos[e]).collect() };
        (d, TreeMap { source: img, target: self.target.clone(), assign: origin })
    }
}

pub(crate) fn position_table(origin: &[Edge], n: usize) -> Vec<Edge> {
    let mut pos = vec![usize::MAX; n];
    for (i, &e) in origin.iter().enumerate() {
        pos[e] = i;
    }
    pos
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct MapClass {
    pub tall: bool,
    pub face: bool,
    pub inner_face: bool,
    pub outer_face: bool,
    pub degeneracy: bool,
    pub planar: bool,
    pub convex: bool,
    pub iso: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    Tall,
    Face,
    InnerFace,
    OuterFace,
    Degeneracy,
    Planar,
    Convex,
    Iso,
}

impl Class {
    pub const ALL: [Class; 8] =
        [Class::Tall, Class::Face, Class::InnerFace, Class::OuterFace, Class::Degeneracy, Class::Planar, Class::Convex, Class::Iso];

    pub fn name(self) -> &'static str {
        match self {
            Class::Tall => "tall",
            Class::Face => "face",
            Class::InnerFace => "inner_face",
            Class::OuterFace => "outer_face",
            Class::Degeneracy => "degeneracy",
            Class::Planar => "planar",
            Class::Convex => "convex",
            Class::Iso => "iso",
        }
    }
}

impl MapClass {
    pub fn has(&self, c: Class) -> bool {
        match c {
            Class::Tall => self.tall,
            Class::Face => self.face,
            Class::InnerFace => self.inner_face,
            Class::OuterFace => self.outer_face,
            Class::Degeneracy => self.degeneracy,
            Class::Planar => self.planar,
            Class::Convex => self.convex,
            Class::Iso => self.iso,
        }
    }
}

/// `φ = po ∘ pi ∘ pd ∘ iso`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub iso: TreeMap,
    pub pd: TreeMap,
    pub pi: TreeMap,
    pub po: TreeMap,
}

impl Factorization {
    pub fn planarized(&self) -> &Arc<Tree> {
        &self.pd.source
    }
    pub fn image(&self) -> &Arc<Tree> {
        &self.pi.source
    }
    pub fn closure(&self) -> &Arc<Tree> {
        &self.po.source
    }
    pub fn compose(&self) -> TreeMap {
        self.po.after(&self.pi).and_then(|m| m.after(&self.pd)).and_then(|m| m.after(&self.iso)).unwrap()
    }
}

pub fn factorize(m: &TreeMap) -> Factorization {
    let (s, t) = (&m.source, &m.target);
    let f = m.closure();
    let a = f.with_kept(m.image());
    let (bar, bar_origin) = t.face_tree(&f);
    let (img, img_origin) = t.face_tree(&a);
    let bar_pos = position_table(&bar_origin, t.len());
    let img_pos = position_table(&img_origin, t.len());
    let bar = Arc::new(bar);
    let img = Arc::new(img);
    let po = TreeMap { source: bar.clone(), target: t.clone(), assign: bar_origin };
    let pi = TreeMap { source: img.clone(), target: bar, assign: img_origin.iter().map(|&e| bar_pos[e]).collect() };

    // Reorder siblings of S by the planar order of their images.
    fn rec(s: &Tree, m: &TreeMap, b: &mut Builder, e: Edge) {
        let me = b.push(s.name(e).to_string(), e);
        if let Some(ins) = s.inputs(e) {
            let mut ord = ins.to_vec();
            ord.sort_by_key(|&c| m.assign[c]);
            if ins.len() > 1 {
                assert!(ord.windows(2).all(|w| m.assign[w[0]] != m.assign[w[1]]), "siblings with equal images");
            }
            let mut ch = Vec::with_capacity(ord.len());
            for c in ord {
                ch.push(b.names.len());
                rec(s, m, b, c);
            }
            b.kids[me] = Some(ch);
        }
    }
    let mut b = Builder::default();
    rec(s, m, &mut b, 0);
    let (sp, sp_origin) = b.finish().expect("reordering keeps the tree valid");
    let sp = Arc::new(sp);
    let iso = TreeMap { source: s.clone(), target: sp.clone(), assign: position_table(&sp_origin, s.len()) };
    let pd = TreeMap { source: sp, target: img, assign: sp_origin.iter().map(|&e| img_pos[m.assign[e]]).collect() };
    Factorization { iso, pd, pi, po }
}

/// Corolla on the leaves of `t` with the planar tall map into `t`; `lr(η) = η`.
pub fn leaf_root(t: &Arc<Tree>) -> (Arc<Tree>, TreeMap) {
    if t.is_stick() {
        return (t.clone(), TreeMap::identity(t.clone()));
    }
    let leaves = t.leaves();
    let names: Vec<&str> = leaves.iter().map(|&l| t.name(l)).collect();
    let c = Arc::new(Tree::corolla(t.name(0), &names).expect("names are distinct"));
    let mut assign = vec![0];
    assign.extend(leaves);
    (c.clone(), TreeMap { source: c, target: t.clone(), assign })
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Fast enumeration of every map `s -> t`, by descending through the vertices of `s`
/// and choosing an outer face of `t` for each one. Deterministic order.
pub fn maps_between(s: &Tree, t: &Tree) -> Vec<Vec<Edge>> {
    let verts = s.vertices();
    let max_k = verts.iter().map(|&v| s.inputs(v).unwrap().len()).max().unwrap_or(0);
    let perms: Vec<Vec<Vec<usize>>> = (0..=max_k).map(permutations).collect();
    // relations of t rooted at each edge, grouped by arity
    let rels: Vec<HashMap<usize, Vec<Vec<Edge>>>> = (0..t.len())
        .map(|e| {
            let mut g: HashMap<usize, Vec<Vec<Edge>>> = HashMap::new();
            for (l, _) in t.outer_faces_at(e) {
                g.entry(l.len()).or_default().push(l);
            }
            g
        })
        .collect();
    let mut out = Vec::new();
    let mut assign = vec![usize::MAX; s.len()];
    fn go(
        i: usize,
        s: &Tree,
        verts: &[Edge],
        rels: &[HashMap<usize, Vec<Vec<Edge>>>],
        perms: &[Vec<Vec<usize>>],
        assign: &mut Vec<Edge>,
        out: &mut Vec<Vec<Edge>>,
    ) {
        if i == verts.len() {
            out.push(assign.clone());
            return;
        }
        let v = verts[i];
        let ins = s.inputs(v).unwrap();
        let Some(cands) = rels[assign[v]].get(&ins.len()) else { return };
        for l in cands {
            for p in &perms[ins.len()] {
                for (j, &c) in ins.iter().enumerate() {
                    assign[c] = l[p[j]];
                }
                go(i + 1, s, verts, rels, perms, assign, out);
            }
        }
    }
    for r in 0..t.len() {
        assign[0] = r;
        go(0, s, &verts, &rels, &perms, &mut assign, &mut out);
    }
    out
}

/// Every map `s -> t` as a [`TreeMap`].
pub fn all_maps(s: &Arc<Tree>, t: &Arc<Tree>) -> Vec<TreeMap> {
    maps_between(s, t)
        .into_iter()
        .map(|a| TreeMap { source: s.clone(), target: t.clone(), assign: a })
        .collect()
}

/// Exhaustive enumeration over all edge functions, filtered by validity and by the
/// required classes. Exponential; meant as a reference.
pub fn enumerate_maps(s: &Arc<Tree>, t: &Arc<Tree>, required: &[Class], bound: usize) -> Result<Vec<TreeMap>, MapError> {
    let big = s.len().max(t.len());
    if big > bound {
        return Err(MapError::Bound(big, bound));
    }
    let mut out = Vec::new();
    let mut assign = vec![0usize; s.len()];
    loop {
        if violation(s, t, &assign).is_none() {
            let m = TreeMap { source: s.clone(), target: t.clone(), assign: assign.clone() };
            let needs_class = !required.is_empty();
            if !needs_class || {
                let c = m.classify();
                required.iter().all(|&r| c.has(r))
            } {
                out.push(m);
            }
        }
        // odometer, last position fastest
        let mut i = assign.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            assign[i] += 1;
            if assign[i] < t.len() {
                break;
            }
            assign[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tr(s: &str) -> Arc<Tree> {
        Arc::new(Tree::parse(s).unwrap())
    }

    fn map(s: &str, t: &str, pairs: &str) -> Result<TreeMap, MapError> {
        let p: Vec<(String, String)> = pairs
            .split(',')
            .map(|kv| {
                let (a, b) = kv.split_once(':').unwrap();
                (a.to_string(), b.to_string())
            })
            .collect();
        TreeMap::from_names(tr(s), tr(t), &p)
    }

    const T: &str = "r(c(a,b),d,e())";

    #[test]
    fn example_maps() {
        assert!(!map("r(d,b,a)", T, "r:r,a:a,b:b,d:d").unwrap().is_planar());
        let s1 = map("r(a,b,d)", T, "r:r,a:a,b:b,d:d").unwrap();
        let c = s1.classify();
        assert!(c.inner_face && !c.outer_face && c.planar);
        let s2 = map("r(c(a,b),d,e)", T, "r:r,c:c,a:a,b:b,d:d,e:e").unwrap();
        assert!(s2.classify().outer_face);
        let s3 = map("r(a,b,d,e)", T, "r:r,a:a,b:b,d:d,e:e").unwrap();
        let c3 = s3.classify();
        assert!(c3.face && !c3.inner_face && !c3.outer_face);
        let fz = factorize(&s3);
        assert!(fz.pd.is_identity() && fz.iso.is_identity());
        assert!(!fz.pi.is_identity() && !fz.po.is_identity());
        let s4 = map("r(c(a,b),d(d'),e())", T, "r:r,c:c,a:a,b:b,d:d,d':d,e:e").unwrap();
        let c4 = s4.classify();
        assert!(c4.degeneracy && !c4.face);
        let fz = factorize(&s4);
        assert!(fz.pi.is_identity() && fz.po.is_identity());
        let s5 = map("r(c,d(d'),e)", T, "r:r,c:c,d:d,d':d,e:e").unwrap();
        assert!(s5.classify().convex);
        assert!(matches!(map("r(c(b),d)", T, "r:r,c:c,b:b,d:d"), Err(MapError::RelationViolation { .. })));
    }

    #[test]
    fn identity_is_everything() {
        let id = TreeMap::identity(tr(T));
        let c = id.classify();
        assert!(c.tall && c.face && c.inner_face && c.outer_face && c.degeneracy && c.planar && c.convex && c.iso);
        let fz = factorize(&id);
        assert!(fz.iso.is_identity() && fz.pd.is_identity() && fz.pi.is_identity() && fz.po.is_identity());
    }

    #[test]
    fn counts() {
        assert_eq!(maps_between(&Tree::stick("x"), &tr(T)).len(), 6);
        assert_eq!(maps_between(&Tree::stick("x"), &Tree::stick("y")).len(), 1);
        assert_eq!(maps_between(&tr("r(a,b)"), &tr("r(a,b)")).len(), 2);
        assert_eq!(enumerate_maps(&tr("r(a,b)"), &tr("r(a,b)"), &[], 8).unwrap().len(), 2);
        assert!(enumerate_maps(&tr("r(a,b)"), &tr(T), &[], 4).is_err());
    }

    #[test]
    fn leaf_root_of_paper_tree() {
        let (c, m) = leaf_root(&tr(T));
        assert_eq!(c.print(), "r(a,b,d)");
        assert!(m.classify().inner_face && m.is_planar());
        let (c, m) = leaf_root(&tr("x"));
        assert_eq!(c.print(), "x");
        assert!(m.is_identity());
    }

    #[test]
    fn stump_contraction_is_not_convex() {
        // the inner face contracting an edge capped by a nullary vertex
        let m = map("r(y)", "r(x(),y)", "r:r,y:y").unwrap();
        assert!(m.is_interval_convex());
        assert!(!m.is_convex());
        assert!(!factorize(&m).pi.is_identity());
    }
}
