use std::collections::BTreeSet;
use std::sync::Arc;

use dendron::map::violation;
use dendron::tree::{bit, members, Edge, EdgeSet, Face, Tree};
use dendron::TreeMap;

pub fn subsets(mask: EdgeSet) -> Vec<EdgeSet> {
    let mut out = vec![0];
    for e in members(mask) {
        let n = out.len();
        for i in 0..n {
            out.push(out[i] | bit(e));
        }
    }
    out
}

pub fn permutations(k: usize) -> Vec<Vec<usize>> {
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
    out
}

/// Every face of `t` with its face tree and a position table for relabelling.
pub struct FaceTable {
    pub faces: Vec<(Face, Arc<Tree>, Vec<usize>)>,
}

impl FaceTable {
    pub fn new(t: &Tree) -> FaceTable {
        let mut faces = Vec::new();
        for v in t.outer_faces() {
            for sub in subsets(v.closure_inner()) {
                let u = v.with_kept(sub);
                let (ut, origin) = t.face_tree(&u);
                let mut pos = vec![usize::MAX; t.len()];
                for (i, &e) in origin.iter().enumerate() {
                    pos[e] = i;
                }
                faces.push((u, Arc::new(ut), pos));
            }
        }
        FaceTable { faces }
    }
}

/// Number of ways to write `m` as iso, planar degeneracy, planar inner face, planar
/// outer face, searching all outer faces, all inner faces of those, and all
/// reorderings of the source.
pub fn count_factorizations(m: &TreeMap) -> usize {
    count_factorizations_with(&FaceTable::new(m.target()), m)
}

pub fn count_factorizations_with(table: &FaceTable, m: &TreeMap) -> usize {
    let s = m.source();
    let img = m.image();
    let mut count = 0;
    for (u, ut, pos) in &table.faces {
        // the middle map has to be onto, so its image is the face's edge set
        if img != u.edge_set() {
            continue;
        }
        let a: Vec<Edge> = m.assignment().iter().map(|&e| pos[e]).collect();
        if violation(s, ut, &a).is_some() {
            continue;
        }
        let d = TreeMap::new_unchecked(s.clone(), ut.clone(), a.clone());
        if !(d.is_surjective() && d.is_tall()) {
            continue;
        }
        let mut ways = 1;
        for vtx in s.vertices() {
            let ins = s.inputs(vtx).unwrap();
            ways *= permutations(ins.len())
                .iter()
                .filter(|p| p.windows(2).all(|w| a[ins[w[0]]] < a[ins[w[1]]]))
                .count();
        }
        count += ways;
    }
    count
}

/// All broad relations of `t` (planar tuples) obtained by closing the generating
/// relations and identities under substitution.
pub fn relation_closure(t: &Tree) -> BTreeSet<(Vec<Edge>, Edge)> {
    let mut rels: BTreeSet<(Vec<Edge>, Edge)> = (0..t.len()).map(|e| (vec![e], e)).collect();
    for v in t.vertices() {
        rels.insert((t.inputs(v).unwrap().to_vec(), v));
    }
    loop {
        let cur: Vec<_> = rels.iter().cloned().collect();
        let mut grew = false;
        for (lhs, rhs) in &cur {
            for (i, &x) in lhs.iter().enumerate() {
                for (l2, r2) in &cur {
                    if *r2 == x {
                        let mut n = lhs[..i].to_vec();
                        n.extend_from_slice(l2);
                        n.extend_from_slice(&lhs[i + 1..]);
                        if rels.insert((n, *rhs)) {
                            grew = true;
                        }
                    }
                }
            }
        }
        if !grew {
            return rels;
        }
    }
}
