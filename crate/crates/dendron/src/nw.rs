//! Strings `S -> J_0 -> ... -> J_n -> F -> T`: simplices of the nerve of `W(T)`.
//!
//! A string is stored as the composite `φ: S -> T` plus the kept inner edges
//! `K_0 ⊆ ... ⊆ K_n` of the outer closure `F` of `φS`; `J_k` keeps exactly `K_k`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::map::{all_maps, position_table, TreeMap};
use crate::necklace::Necklace;
use crate::presheaf::DendroidalSet;
use crate::tree::{bit, members, Edge, EdgeSet, Face, Tree};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NwString {
    pub phi: TreeMap,
    pub chain: Vec<EdgeSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NwError {
    Level(usize),
    Chain,
}

impl std::fmt::Display for NwError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NwError::Level(i) => write!(f, "operator index {i} out of range"),
            NwError::Chain => write!(f, "chain is not a string of inner faces"),
        }
    }
}

impl std::error::Error for NwError {}

impl NwString {
    pub fn new(phi: TreeMap, chain: Vec<EdgeSet>) -> Result<NwString, NwError> {
        let s = NwString { phi, chain };
        if s.is_valid(None) {
            Ok(s)
        } else {
            Err(NwError::Chain)
        }
    }

    pub fn level(&self) -> usize {
        self.chain.len() - 1
    }

    /// `F`, the outer closure of the image.
    pub fn closure(&self) -> Face {
        self.phi.closure()
    }

    /// `J_k` as a face of the target.
    pub fn j(&self, k: usize) -> Face {
        self.closure().with_kept(self.chain[k])
    }

    /// Lowest admissible `K_0`: the image's inner edges, plus the joints of `n` inside `F`.
    pub fn floor(phi: &TreeMap, necklace: Option<EdgeSet>) -> EdgeSet {
        let f = phi.closure();
        phi.image_face().kept | necklace.unwrap_or(0) & f.closure_inner()
    }

    pub fn is_valid(&self, necklace: Option<EdgeSet>) -> bool {
        let top = self.closure().closure_inner();
        let lo = NwString::floor(&self.phi, necklace);
        !self.chain.is_empty()
            && self.chain[0] & lo == lo
            && self.chain.windows(2).all(|w| w[0] & !w[1] == 0)
            && self.chain.last().unwrap() & !top == 0
    }

    /// `d_i`: drop `J_i`.
    pub fn face(&self, i: usize) -> Result<NwString, NwError> {
        if i > self.level() || self.level() == 0 {
            return Err(NwError::Level(i));
        }
        let mut chain = self.chain.clone();
        chain.remove(i);
        Ok(NwString { phi: self.phi.clone(), chain })
    }

    /// `s_i`: repeat `J_i`.
    pub fn degeneracy(&self, i: usize) -> Result<NwString, NwError> {
        if i > self.level() {
            return Err(NwError::Level(i));
        }
        let mut chain = self.chain.clone();
        chain.insert(i, chain[i]);
        Ok(NwString { phi: self.phi.clone(), chain })
    }

    /// Restriction along `ψ: S* -> S`: `K*_k = K_k ∩ E^i(F*)`.
    pub fn pullback(&self, psi: &TreeMap) -> NwString {
        let phi = self.phi.after(psi).expect("ψ lands in the source");
        let top = phi.closure().closure_inner();
        NwString { chain: self.chain.iter().map(|k| k & top).collect(), phi }
    }

    /// Restriction built from the tall-outer factorizations, step by step.
    pub fn pullback_by_diagram(&self, psi: &TreeMap) -> NwString {
        let t = self.phi.target();
        let mut prev = self.phi.after(psi).unwrap();
        let mut faces = Vec::new();
        for k in 0..self.chain.len() {
            let jk = crate::face::face_map(t, &self.j(k));
            let into = corestrict(&prev, &jk);
            let (_, outer) = into.tall_outer();
            let star = jk.after(&outer).unwrap();
            faces.push(star.image_face());
            prev = star;
        }
        let phi = self.phi.after(psi).unwrap();
        let top = phi.closure().closure_inner();
        NwString { chain: faces.iter().map(|f| f.edge_set() & top).collect(), phi }
    }

    /// Pushforward along `φ': T -> T'`: `K'_k = φ'(E(J_k)) ∩ E^i(F')`.
    pub fn pushforward(&self, g: &TreeMap) -> NwString {
        let phi = g.after(&self.phi).expect("composable");
        let top = phi.closure().closure_inner();
        let chain = (0..self.chain.len())
            .map(|k| members(self.j(k).edge_set()).fold(0, |m, e| m | bit(g.apply(e))) & top)
            .collect();
        NwString { phi, chain }
    }

    /// Pushforward built backwards from degeneracy-face factorizations.
    pub fn pushforward_by_diagram(&self, g: &TreeMap) -> NwString {
        let t = self.phi.target();
        let n = self.chain.len();
        let mut primes: Vec<Face> = vec![Face::whole(g.target()); n];
        // J_n -> T -> T'
        let jn = crate::face::face_map(t, &self.j(n - 1));
        let (_, face) = g.after(&jn).unwrap().degeneracy_face();
        primes[n - 1] = face.image_face();
        let mut next_face = face;
        for k in (0..n - 1).rev() {
            // J_k -> J_{k+1} -> J'_{k+1}
            let jk = crate::face::face_map(t, &self.j(k));
            let jk1 = crate::face::face_map(t, &self.j(k + 1));
            let step = corestrict(&jk, &jk1);
            let down = corestrict(&g.after(&jk1).unwrap(), &next_face);
            let (_, f) = down.after(&step).unwrap().degeneracy_face();
            let f = next_face.after(&f).unwrap();
            primes[k] = f.image_face();
            next_face = f;
        }
        let phi = g.after(&self.phi).unwrap();
        let top = phi.closure().closure_inner();
        NwString { chain: primes.iter().map(|f| f.edge_set() & top).collect(), phi }
    }

    pub fn print(&self) -> NwPrint {
        let t = self.phi.target();
        let names = |m: EdgeSet| members(m).map(|e| t.name(e).to_string()).collect::<Vec<_>>();
        NwPrint {
            source: self.phi.source().print(),
            target: t.print(),
            map: self.phi.pairs().into_iter().collect(),
            closure: names(self.closure().edges),
            chain: self.chain.iter().map(|&k| names(k)).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct NwPrint {
    pub source: String,
    pub target: String,
    pub map: std::collections::BTreeMap<String, String>,
    /// Edges of the region of `F`.
    pub closure: Vec<String>,
    /// Kept inner edges of each `J_k`.
    pub chain: Vec<Vec<String>>,
}

/// `m` viewed as a map into the source of the face map `f`; the image must lie in it.
pub fn corestrict(m: &TreeMap, f: &TreeMap) -> TreeMap {
    let pos = position_table(f.assignment(), f.target().len());
    let assign: Vec<Edge> = m.assignment().iter().map(|&e| pos[e]).collect();
    assert!(assign.iter().all(|&e| e != usize::MAX), "image leaves the face");
    TreeMap::new_unchecked(m.source().clone(), f.source().clone(), assign)
}

/// Weakly increasing chains `lo ⊆ K_0 ⊆ ... ⊆ K_n ⊆ lo ∪ free` of length `n + 1`.
pub fn chains(lo: EdgeSet, free: EdgeSet, n: usize) -> Vec<Vec<EdgeSet>> {
    let free: Vec<Edge> = members(free).collect();
    let mut out = Vec::new();
    let mut entry = vec![0usize; free.len()];
    loop {
        out.push((0..=n).map(|k| free.iter().zip(&entry).filter(|(_, &p)| p <= k).fold(lo, |m, (&e, _)| m | bit(e))).collect());
        let mut i = 0;
        while i < entry.len() {
            entry[i] += 1;
            if entry[i] <= n + 1 {
                break;
            }
            entry[i] = 0;
            i += 1;
        }
        if i == entry.len() {
            break;
        }
    }
    out.sort();
    out
}

/// Maps into a fixed base tree, keyed by the shape of the source.
type MapCache = Arc<Mutex<HashMap<Vec<u8>, Arc<Vec<TreeMap>>>>>;

/// `NW(T)` or `NW(n)` at a fixed simplicial level, as a dendroidal set.
#[derive(Clone, Debug)]
pub struct NwLevel {
    pub base: Arc<Tree>,
    pub joints: Option<EdgeSet>,
    pub level: usize,
    maps: MapCache,
}

impl NwLevel {
    pub fn tree(base: Arc<Tree>, level: usize) -> NwLevel {
        NwLevel { base, joints: None, level, maps: MapCache::default() }
    }

    pub fn necklace(n: &Necklace, level: usize) -> NwLevel {
        NwLevel { base: n.carrier.clone(), joints: Some(n.joints), level, maps: MapCache::default() }
    }

    /// Same base, other joints or level; the map cache is shared.
    pub fn sibling(&self, joints: Option<EdgeSet>, level: usize) -> NwLevel {
        NwLevel { joints, level, ..self.clone() }
    }

    fn maps_from(&self, s: &Arc<Tree>) -> Arc<Vec<TreeMap>> {
        let key = s.shape();
        if let Some(m) = self.maps.lock().unwrap().get(&key) {
            if m.first().map_or(true, |f| **f.source() == **s) {
                return m.clone();
            }
        }
        let m = Arc::new(all_maps(s, &self.base));
        self.maps.lock().unwrap().insert(key, m.clone());
        m
    }

    /// Strings over a fixed composite `φ`.
    pub fn over(&self, phi: &TreeMap) -> Vec<NwString> {
        let lo = NwString::floor(phi, self.joints);
        let free = phi.closure().closure_inner() & !lo;
        chains(lo, free, self.level).into_iter().map(|chain| NwString { phi: phi.clone(), chain }).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NwCell {
    pub map: Vec<Edge>,
    pub chain: Vec<EdgeSet>,
}

impl DendroidalSet for NwLevel {
    type Cell = NwCell;

    fn dendrices(&self, s: &Arc<Tree>) -> Vec<NwCell> {
        self.maps_from(s)
            .iter()
            .flat_map(|m| self.over(m))
            .map(|w| NwCell { map: w.phi.assignment().to_vec(), chain: w.chain })
            .collect()
    }

    fn restrict(&self, x: &NwCell, phi: &TreeMap) -> NwCell {
        let m = TreeMap::new_unchecked(phi.target().clone(), self.base.clone(), x.map.clone());
        let w = NwString { phi: m, chain: x.chain.clone() }.pullback(phi);
        NwCell { map: w.phi.assignment().to_vec(), chain: w.chain }
    }

    /// The restriction to an edge keeps only its image; `η` has no inner edges.
    fn coloring(&self, _s: &Arc<Tree>, x: &NwCell) -> Vec<NwCell> {
        x.map.iter().map(|&e| NwCell { map: vec![e], chain: vec![0; x.chain.len()] }).collect()
    }

    fn label(&self, x: &NwCell) -> String {
        let names: Vec<&str> = x.map.iter().map(|&e| self.base.name(e)).collect();
        format!("{}|{:?}", names.join(","), x.chain)
    }
}

/// `J^φ = φS ∨ J_F`, as the kept inner edges of `F`, together with `F`.
pub fn j_phi(n: &Necklace, phi: &TreeMap) -> Face {
    let f = phi.closure();
    f.with_kept(phi.image_face().kept | n.joints & f.closure_inner())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::leaf_root;

    fn tr(s: &str) -> Arc<Tree> {
        Arc::new(Tree::parse(s).unwrap())
    }

    #[test]
    fn small_counts() {
        let eta = tr("x");
        for n in 0..4 {
            assert_eq!(NwLevel::tree(eta.clone(), n).dendrices(&eta).len(), 1);
        }
        let c2 = tr("r(a,b)");
        assert_eq!(NwLevel::tree(c2.clone(), 0).dendrices(&c2).len(), 2);
        let t = tr("r(c(a,b),d,e())");
        let (lr, m) = leaf_root(&t);
        assert_eq!(NwLevel::tree(t.clone(), 1).over(&m).len(), 9);
        let at_lr = NwLevel::tree(t, 1).dendrices(&lr).into_iter().filter(|c| c.map == m.assignment()).count();
        assert_eq!(at_lr, 9);
    }

    #[test]
    fn simplicial_identity() {
        let t = tr("r(c(a,b),d,e())");
        let (_, m) = leaf_root(&t);
        for w in NwLevel::tree(t.clone(), 2).over(&m) {
            for i in 0..=2 {
                assert_eq!(w.degeneracy(i).unwrap().face(i).unwrap(), w);
                assert_eq!(w.degeneracy(i).unwrap().face(i + 1).unwrap(), w);
            }
        }
    }

    #[test]
    fn diagram_forms_agree() {
        let t = tr("r(c(a,b),d(f),e())");
        let s = tr("x(y,z)");
        for n in 0..3 {
            let nw = NwLevel::tree(t.clone(), n);
            for c in nw.dendrices(&s) {
                let w = NwString { phi: TreeMap::new_unchecked(s.clone(), t.clone(), c.map.clone()), chain: c.chain.clone() };
                for psi in all_maps(&tr("p(q)"), &s) {
                    assert_eq!(w.pullback(&psi), w.pullback_by_diagram(&psi));
                }
                for g in all_maps(&t, &tr("r(c(a,b),d,e(),g)")) {
                    assert_eq!(w.pushforward(&g), w.pushforward_by_diagram(&g));
                }
            }
        }
    }

    #[test]
    fn coloring_is_restriction() {
        let t = tr("r(c(a,b),d(f),e())");
        let s = tr("x(y(z),w)");
        let x = NwLevel::necklace(&Necklace::segal_core(t.clone()), 2);
        for c in x.dendrices(&s) {
            let slow: Vec<NwCell> = (0..s.len()).map(|e| x.restrict(&c, &TreeMap::edge_of(&s, e))).collect();
            assert_eq!(x.coloring(&s, &c), slow);
        }
    }

    #[test]
    fn join_examples() {
        let t = tr("r(c(a,b),d,e())");
        let (_, lr) = leaf_root(&t);
        let sc = Necklace::segal_core(t.clone());
        assert_eq!(j_phi(&sc, &lr), Face::whole(&t));
        let id = TreeMap::identity(t.clone());
        assert_eq!(j_phi(&Necklace::whole(t.clone()), &id), Face::whole(&t));
    }
}
