//! Planar faces of a tree and the posets they form.

use std::sync::Arc;

use crate::map::TreeMap;
use crate::tree::{bit, members, Edge, EdgeSet, Face, Tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaceKind {
    All,
    Inner,
    Outer,
    SegalCore,
}

impl FaceKind {
    pub fn parse(s: &str) -> Option<FaceKind> {
        Some(match s {
            "all" => FaceKind::All,
            "inner" => FaceKind::Inner,
            "outer" => FaceKind::Outer,
            "segal_core" | "sc" => FaceKind::SegalCore,
            _ => return None,
        })
    }
}

/// Every subset of `mask`, smallest first.
pub fn subsets(mask: EdgeSet) -> Vec<EdgeSet> {
    let mut out = vec![0];
    for e in members(mask) {
        let n = out.len();
        for i in 0..n {
            out.push(out[i] | bit(e));
        }
    }
    out.sort_by_key(|s| (s.count_ones(), *s));
    out
}

/// Faces of the requested kind, in a fixed order.
pub fn enumerate_faces(t: &Tree, kind: FaceKind) -> Vec<Face> {
    let mut out: Vec<Face> = match kind {
        FaceKind::Inner => subsets(t.inner_mask()).into_iter().map(|k| Face::whole(t).with_kept(k)).collect(),
        FaceKind::Outer => t.outer_faces(),
        FaceKind::SegalCore => t.outer_faces().into_iter().filter(|f| f.closure_inner() == 0).collect(),
        FaceKind::All => t
            .outer_faces()
            .into_iter()
            .flat_map(|f| subsets(f.closure_inner()).into_iter().map(move |k| f.with_kept(k)))
            .collect(),
    };
    out.sort_by_key(|f| (f.root(), f.edges.count_ones(), f.edges, f.leaves, f.kept.count_ones(), f.kept));
    out
}

/// The face as a tree together with its planar face map into `t`.
pub fn face_map(t: &Arc<Tree>, f: &Face) -> TreeMap {
    let (ft, origin) = t.face_tree(f);
    TreeMap::new_unchecked(Arc::new(ft), t.clone(), origin)
}

/// Inclusion of faces of one tree: edges contained and outer closures nested.
pub fn face_leq(a: &Face, b: &Face) -> bool {
    let verts = |f: &Face| f.edges & !f.leaves;
    a.edge_set() & !b.edge_set() == 0 && a.edges & !b.edges == 0 && verts(a) & !verts(b) == 0
}

/// The vertex corolla on top of `v` as an outer face.
pub fn vertex_face(t: &Tree, v: Edge) -> Face {
    let ins = t.inputs(v).expect("not a vertex");
    let leaves = ins.iter().fold(0, |m, &c| m | bit(c));
    t.witness(leaves, v).expect("vertex relations hold")
}

/// Face poset of a tree, ordered by inclusion.
#[derive(Clone, Debug)]
pub struct FacePoset {
    pub base: Arc<Tree>,
    pub kind: FaceKind,
    pub elements: Vec<Face>,
}

impl FacePoset {
    pub fn new(base: Arc<Tree>, kind: FaceKind) -> FacePoset {
        let elements = enumerate_faces(&base, kind);
        FacePoset { base, kind, elements }
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        face_leq(&self.elements[i], &self.elements[j])
    }

    pub fn index_of(&self, f: &Face) -> Option<usize> {
        self.elements.iter().position(|g| g == f)
    }

    /// Join in the inner face lattice: union of kept inner edges.
    pub fn join(&self, i: usize, j: usize) -> Option<usize> {
        if self.kind != FaceKind::Inner {
            return None;
        }
        let (a, b) = (&self.elements[i], &self.elements[j]);
        self.index_of(&a.with_kept(a.kept | b.kept))
    }

    /// Pairs `(i, j)` with `i < j` in the order, for export.
    pub fn relations(&self) -> Vec<(usize, usize)> {
        let n = self.elements.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.leq(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Join of two inner faces of the same outer face, as a face.
pub fn inner_join(a: &Face, b: &Face) -> Face {
    debug_assert_eq!((a.edges, a.leaves), (b.edges, b.leaves));
    a.with_kept(a.kept | b.kept)
}
