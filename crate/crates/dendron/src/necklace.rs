//! Necklaces: a tree with a set of joints, i.e. a planar inner face `J -> T`.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::face::{face_leq, face_map};
use crate::map::{position_table, TreeMap};
use crate::presheaf::{collapse, DendroidalSet};
use crate::tree::{bit, members, Edge, EdgeSet, Face, Tree};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NecklaceError {
    #[error("`{0}` is not an inner edge of the carrier")]
    NotInner(String),
    #[error("the face is not an outer face")]
    NotOuter,
    #[error("carrier map is not a face map")]
    NotFace,
    #[error("bead {0} has {1} receiving beads")]
    Receiving(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Necklace {
    pub carrier: Arc<Tree>,
    pub joints: EdgeSet,
}

impl Necklace {
    pub fn new(carrier: Arc<Tree>, joints: EdgeSet) -> Result<Necklace, NecklaceError> {
        if let Some(e) = members(joints & !carrier.inner_mask()).next() {
            return Err(NecklaceError::NotInner(e.to_string()));
        }
        Ok(Necklace { carrier, joints })
    }

    pub fn from_names(carrier: Arc<Tree>, joints: &[&str]) -> Result<Necklace, NecklaceError> {
        let mut m = 0;
        for j in joints {
            let e = carrier.edge(j).ok_or_else(|| NecklaceError::NotInner(j.to_string()))?;
            if carrier.inner_mask() & bit(e) == 0 {
                return Err(NecklaceError::NotInner(j.to_string()));
            }
            m |= bit(e);
        }
        Ok(Necklace { carrier, joints: m })
    }

    /// Joints = all inner edges: the Segal core.
    pub fn segal_core(t: Arc<Tree>) -> Necklace {
        let j = t.inner_mask();
        Necklace { carrier: t, joints: j }
    }

    /// No joints: the representable.
    pub fn whole(t: Arc<Tree>) -> Necklace {
        Necklace { carrier: t, joints: 0 }
    }

    /// Edges of the joint tree `J` inside the carrier.
    pub fn joint_edges(&self) -> EdgeSet {
        let t = &self.carrier;
        t.leaf_mask() | bit(0) | self.joints
    }

    /// The joint tree and its planar inner face into the carrier.
    pub fn joint_face(&self) -> TreeMap {
        face_map(&self.carrier, &Face::whole(&self.carrier).with_kept(self.joints))
    }

    /// Beads as outer faces, in planar order of the vertices of `J`.
    pub fn beads(&self) -> Vec<Face> {
        let t = &self.carrier;
        let j = self.joint_edges();
        let mut out = Vec::new();
        for v in t.vertices() {
            if j & bit(v) == 0 {
                continue;
            }
            // descend until joints or leaves
            let mut leaves = 0;
            let mut stack: Vec<Edge> = t.inputs(v).unwrap().iter().rev().copied().collect();
            while let Some(e) = stack.pop() {
                if j & bit(e) != 0 {
                    leaves |= bit(e);
                } else {
                    stack.extend(t.inputs(e).unwrap().iter().rev().copied());
                }
            }
            out.push(t.witness(leaves, v).expect("beads are outer faces"));
        }
        out
    }

    pub fn bead_maps(&self) -> Vec<TreeMap> {
        self.beads().iter().map(|b| face_map(&self.carrier, b)).collect()
    }

    /// Whether the face `u` of the carrier lies in the necklace.
    pub fn contains_face(&self, u: &Face) -> bool {
        u.closure_inner() & self.joints == 0
    }

    /// Whether the dendrex `m: S -> T` lies in the necklace.
    pub fn contains(&self, m: &TreeMap) -> bool {
        self.contains_face(&m.closure())
    }

    /// Restriction to an outer face: carrier `F`, joints those inside `F`.
    pub fn restrict(&self, f: &Face) -> Result<(Necklace, TreeMap), NecklaceError> {
        if !f.is_outer() {
            return Err(NecklaceError::NotOuter);
        }
        let m = face_map(&self.carrier, f);
        let pos = position_table(m.assignment(), self.carrier.len());
        let joints = members(self.joints & f.closure_inner()).fold(0, |acc, e| acc | bit(pos[e]));
        Ok((Necklace { carrier: m.source().clone(), joints }, m))
    }

    /// Whether the joint-edge decomposition of the carrier holds: `J` and the inner
    /// edges of the beads partition the edges.
    pub fn partition_holds(&self) -> bool {
        let mut seen = self.joint_edges();
        let mut total = seen.count_ones();
        for b in self.beads() {
            let i = b.closure_inner();
            if i & seen != 0 {
                return false;
            }
            seen |= i;
            total += i.count_ones();
        }
        seen == self.carrier.all_mask() && total as usize == self.carrier.len()
    }

    pub fn print_joints(&self) -> Vec<String> {
        members(self.joints).map(|e| self.carrier.name(e).to_string()).collect()
    }
}

/// The inner-edge criterion for `φ: T -> T'` to give a map of necklaces.
pub fn necklace_map_check(n: &Necklace, n2: &Necklace, phi: &TreeMap) -> bool {
    let img_j = members(n.joint_edges()).fold(0, |m, e| m | bit(phi.apply(e)));
    n2.joints & phi.closure().closure_inner() & !img_j == 0
}

/// Direct test: every bead of `n` lands in the necklace `n2`.
pub fn necklace_map_direct(n: &Necklace, n2: &Necklace, phi: &TreeMap) -> bool {
    n.bead_maps().iter().all(|b| n2.contains(&phi.after(b).expect("beads map into the carrier")))
}

/// For a face map of necklaces, the bead of `n2` receiving each bead of `n`.
pub fn bead_pushforward(n: &Necklace, n2: &Necklace, phi: &TreeMap) -> Result<Vec<usize>, NecklaceError> {
    if !phi.is_injective() {
        return Err(NecklaceError::NotFace);
    }
    let targets = n2.beads();
    n.bead_maps()
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let img = phi.after(b).unwrap().image_face();
            let hits: Vec<usize> = (0..targets.len()).filter(|&k| face_leq(&img, &targets[k])).collect();
            if hits.len() == 1 {
                Ok(hits[0])
            } else {
                Err(NecklaceError::Receiving(i, hits.len()))
            }
        })
        .collect()
}

/// A map from a necklace representable into `X`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NecklaceCell<C> {
    /// The carrier is a stick: just a color.
    Stick(C),
    /// One dendrex per bead, in bead order.
    Beads(Vec<C>),
}

/// All maps `Ω[n] -> X`: families of bead dendrices agreeing on the joints.
pub fn necklace_dendrices<X: DendroidalSet>(n: &Necklace, x: &X) -> Vec<NecklaceCell<X::Cell>> {
    if n.carrier.is_stick() {
        return x.dendrices(&n.carrier).into_iter().map(NecklaceCell::Stick).collect();
    }
    let t = &n.carrier;
    let per_bead: Vec<Vec<(X::Cell, Vec<(Edge, X::Cell)>)>> = n
        .bead_maps()
        .iter()
        .map(|m| {
            let bt = m.source();
            x.dendrices(bt)
                .into_iter()
                .map(|c| {
                    let col = members(n.joints)
                        .filter_map(|j| m.assignment().iter().position(|&e| e == j).map(|k| (j, k)))
                        .map(|(j, k)| (j, x.restrict(&c, &TreeMap::edge_of(bt, k))))
                        .collect();
                    (c, col)
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    let mut col: Vec<Option<X::Cell>> = vec![None; t.len()];
    let mut pick = Vec::new();
    fn go<C: Clone + Eq>(
        i: usize,
        pb: &[Vec<(C, Vec<(Edge, C)>)>],
        col: &mut Vec<Option<C>>,
        pick: &mut Vec<C>,
        out: &mut Vec<NecklaceCell<C>>,
    ) {
        if i == pb.len() {
            out.push(NecklaceCell::Beads(pick.clone()));
            return;
        }
        'cand: for (c, cs) in &pb[i] {
            let mut set = Vec::new();
            for (e, k) in cs {
                match &col[*e] {
                    Some(old) if old != k => {
                        for &s in &set {
                            col[s] = None;
                        }
                        continue 'cand;
                    }
                    Some(_) => {}
                    None => {
                        col[*e] = Some(k.clone());
                        set.push(*e);
                    }
                }
            }
            pick.push(c.clone());
            go(i + 1, pb, col, pick, out);
            pick.pop();
            for s in set {
                col[s] = None;
            }
        }
    }
    go(0, &per_bead, &mut col, &mut pick, &mut out);
    out
}

/// Restrict a necklace cell along a map of necklaces `φ: n -> n2`.
/// Each bead of `n` is sent into some bead of `n2` (or lands on a stick).
pub fn pull_cell<X: DendroidalSet>(x: &X, n: &Necklace, n2: &Necklace, phi: &TreeMap, cell: &NecklaceCell<X::Cell>) -> NecklaceCell<X::Cell> {
    PullPlan::new(n, n2, phi).apply(x, cell)
}

/// The part of `pull_cell` that does not depend on the cell: for every bead of
/// `n` (or the stick), which bead of `n2` it lands in and the map into it.
#[derive(Clone, Debug)]
pub struct PullPlan {
    stick: bool,
    steps: Vec<(usize, TreeMap)>,
}

impl PullPlan {
    pub fn new(n: &Necklace, n2: &Necklace, phi: &TreeMap) -> PullPlan {
        let target_beads = n2.bead_maps();
        let target_faces: Vec<Face> = target_beads.iter().map(|b| b.image_face()).collect();
        let step = |m: TreeMap| -> (usize, TreeMap) {
            if n2.carrier.is_stick() {
                return (0, m);
            }
            let img = m.image_face();
            let k = target_faces.iter().position(|b| face_leq(&img, b)).expect("lands in the necklace");
            let bm = &target_beads[k];
            let pos = position_table(bm.assignment(), n2.carrier.len());
            (k, TreeMap::new_unchecked(m.source().clone(), bm.source().clone(), m.assignment().iter().map(|&e| pos[e]).collect()))
        };
        let steps = if n.carrier.is_stick() { vec![step(phi.clone())] } else { n.bead_maps().iter().map(|b| step(phi.after(b).unwrap())).collect() };
        PullPlan { stick: n.carrier.is_stick(), steps }
    }

    pub fn apply<X: DendroidalSet>(&self, x: &X, cell: &NecklaceCell<X::Cell>) -> NecklaceCell<X::Cell> {
        let eval = |(k, m): &(usize, TreeMap)| match cell {
            NecklaceCell::Stick(c) => x.restrict(c, m),
            NecklaceCell::Beads(cs) => x.restrict(&cs[*k], m),
        };
        if self.stick {
            NecklaceCell::Stick(eval(&self.steps[0]))
        } else {
            NecklaceCell::Beads(self.steps.iter().map(eval).collect())
        }
    }
}

/// Result of splitting off the degenerate part of a necklace cell.
#[derive(Clone, Debug)]
pub struct TndFactorization<C> {
    /// Necklace degeneracy on carriers.
    pub degeneracy: TreeMap,
    pub necklace: Necklace,
    pub cell: NecklaceCell<C>,
}

/// Factor a map `Ω[n] -> X` as a necklace degeneracy followed by a totally
/// non-degenerate map, collapsing one unary vertex at a time.
pub fn tnd_factorize<X: DendroidalSet>(x: &X, n: &Necklace, cell: &NecklaceCell<X::Cell>) -> TndFactorization<X::Cell> {
    let mut total = TreeMap::identity(n.carrier.clone());
    let mut cur = n.clone();
    let mut cur_cell = cell.clone();
    'outer: loop {
        let NecklaceCell::Beads(cs) = &cur_cell else { break };
        let beads = cur.bead_maps();
        for (k, bm) in beads.iter().enumerate() {
            let bt = bm.source();
            for p in bt.vertices() {
                if bt.inputs(p).unwrap().len() != 1 {
                    continue;
                }
                let (_, sg, dl) = collapse(bt, p);
                if x.restrict(&x.restrict(&cs[k], &dl), &sg) != cs[k] {
                    continue;
                }
                let (n2, sigma) = collapse_necklace(&cur, bm.apply(p));
                let next = push_degenerate(x, &cur, &n2, &sigma, cs);
                total = sigma.after(&total).unwrap();
                cur = n2;
                cur_cell = next;
                continue 'outer;
            }
        }
        break;
    }
    TndFactorization { degeneracy: total, necklace: cur, cell: cur_cell }
}

/// Collapse the unary vertex on `p` in the carrier; joints follow along.
pub fn collapse_necklace(n: &Necklace, p: Edge) -> (Necklace, TreeMap) {
    let (small, sigma, _) = collapse(&n.carrier, p);
    let joints = members(n.joints).fold(0, |m, e| m | bit(sigma.apply(e))) & small.inner_mask();
    (Necklace { carrier: small, joints }, sigma)
}

/// Transport bead dendrices along an elementary necklace degeneracy `σ: n -> n2`
/// under which they are degenerate: each new bead is read off through a section.
pub fn push_degenerate<X: DendroidalSet>(x: &X, n: &Necklace, n2: &Necklace, sigma: &TreeMap, cs: &[X::Cell]) -> NecklaceCell<X::Cell> {
    if n2.carrier.is_stick() {
        let c = x.restrict(&cs[0], &TreeMap::new_unchecked(Arc::new(Tree::stick("_")), n.bead_maps()[0].source().clone(), vec![0]));
        return NecklaceCell::Stick(c);
    }
    let old = n.bead_maps();
    let mut out = Vec::new();
    for b2 in n2.bead_maps() {
        let want: BTreeSet<Edge> = b2.assignment().iter().copied().collect();
        let k = old
            .iter()
            .position(|b| b.assignment().iter().map(|&e| sigma.apply(e)).collect::<BTreeSet<_>>() == want)
            .expect("each new bead is the image of an old bead");
        let b = &old[k];
        // section: pick, for each edge of the new bead, a preimage inside the old bead,
        // preferring the lower edge of a collapsed pair
        let sec: Vec<Edge> = b2
            .assignment()
            .iter()
            .map(|&e2| b.assignment().iter().position(|&e| sigma.apply(e) == e2).unwrap())
            .collect();
        let s = TreeMap::new(b2.source().clone(), b.source().clone(), sec).expect("sections of degeneracies are maps");
        out.push(x.restrict(&cs[k], &s));
    }
    NecklaceCell::Beads(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::Presheaf;

    fn tr(s: &str) -> Arc<Tree> {
        Arc::new(Tree::parse(s).unwrap())
    }

    #[test]
    fn extremes() {
        let t = tr("r(c(a,b),d,e())");
        let sc = Necklace::segal_core(t.clone());
        assert_eq!(sc.beads().len(), 3);
        let whole = Necklace::whole(t.clone());
        assert_eq!(whole.beads(), vec![Face::whole(&t)]);
        assert!(sc.partition_holds() && whole.partition_holds());
        assert!(!sc.contains_face(&Face::whole(&t)));
        let eta = Necklace::whole(tr("x"));
        assert!(eta.beads().is_empty());
    }

    #[test]
    fn whole_to_core_is_not_a_map() {
        let t = tr("r(c(a,b),d,e())");
        let id = TreeMap::identity(t.clone());
        assert!(!necklace_map_check(&Necklace::whole(t.clone()), &Necklace::segal_core(t.clone()), &id));
        assert!(necklace_map_check(&Necklace::segal_core(t.clone()), &Necklace::whole(t.clone()), &id));
        assert_eq!(bead_pushforward(&Necklace::segal_core(t.clone()), &Necklace::whole(t), &id).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn necklace_families_of_representable() {
        let t = tr("r(c(a,b),d)");
        let x = Presheaf::representable(t.clone());
        let fam = necklace_dendrices(&Necklace::segal_core(t.clone()), &x);
        let whole = necklace_dendrices(&Necklace::whole(t.clone()), &x);
        // Segal: the two agree in number
        assert_eq!(fam.len(), whole.len());
    }

    #[test]
    fn tnd_recovers_collapsed() {
        let t = tr("r(c(a,b),d)");
        let x = Presheaf::representable(t.clone());
        let s = tr("r(c(a,b),d(d'))");
        let n = Necklace::from_names(s.clone(), &["c", "d"]).unwrap();
        let m = TreeMap::from_names(s.clone(), t.clone(), &[("r", "r"), ("c", "c"), ("a", "a"), ("b", "b"), ("d", "d"), ("d'", "d")].map(|(a, b)| (a.to_string(), b.to_string()))).unwrap();
        let cell = pull_cell(&x, &n, &Necklace::whole(t.clone()), &m, &NecklaceCell::Beads(vec![crate::presheaf::Dendrex { gen: 0, map: (0..t.len()).collect() }]));
        let f = tnd_factorize(&x, &n, &cell);
        assert_eq!(f.necklace.carrier.print(), "r(c(a,b),d)");
        assert_eq!(f.necklace.beads().len(), 2);
    }
}
