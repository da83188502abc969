//! Finite dendroidal sets: representables, their boundary, horn and Segal core
//! subpresheaves, necklace representables and finite colimits of representables.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::face::vertex_face;
use crate::map::{all_maps, position_table, TreeMap};
use crate::tree::{bit, trees_up_to, Edge, EdgeSet, Face, Node, Tree};

/// A presheaf on trees, queried one shape at a time.
pub trait DendroidalSet {
    type Cell: Clone + Eq + Ord + Hash + Debug;

    /// All dendrices of shape `s`, in a fixed order. Depends only on the
    /// planar shape of `s`, not on its edge names.
    fn dendrices(&self, s: &Arc<Tree>) -> Vec<Self::Cell>;

    /// `x·φ` for `φ: s' -> s` and `x` a dendrex of shape `s`.
    fn restrict(&self, x: &Self::Cell, phi: &TreeMap) -> Self::Cell;

    /// Short printable name, used for colors in reports.
    fn label(&self, x: &Self::Cell) -> String {
        format!("{x:?}")
    }

    fn colors(&self) -> Vec<Self::Cell> {
        self.dendrices(&Arc::new(Tree::stick("_")))
    }

    /// Edge colors of a dendrex of shape `s`.
    fn coloring(&self, s: &Arc<Tree>, x: &Self::Cell) -> Vec<Self::Cell> {
        (0..s.len()).map(|e| self.restrict(x, &TreeMap::edge_of(s, e))).collect()
    }
}

/// Subpresheaves of a representable, tested on the image face of a dendrex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    Whole,
    Boundary,
    /// Inner horn for a non-empty set of inner edges.
    Horn(EdgeSet),
    SegalCore,
    /// Union of the beads of the necklace with these joints.
    Necklace(EdgeSet),
}

/// Whether the face `f` of `t` lies in the given part.
pub fn face_in_part(t: &Tree, part: Part, f: &Face) -> bool {
    match part {
        Part::Whole => true,
        Part::Boundary => *f != Face::whole(t),
        // generated by the faces that do not contain the inner face contracting E
        Part::Horn(e) => {
            let rest = t.inner_mask() & !e;
            !(f.edges == t.all_mask() && f.leaves == t.leaf_mask() && f.kept & rest == rest)
        }
        Part::SegalCore => f.closure_inner() == 0,
        Part::Necklace(j) => f.closure_inner() & j == 0,
    }
}

/// A dendrex of a [`Presheaf`]: a generator index and a map into that generator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct Dendrex {
    pub gen: usize,
    pub map: Vec<Edge>,
}

#[derive(Clone, Debug)]
pub enum Presheaf {
    Sub { base: Arc<Tree>, part: Part },
    Colimit(Arc<Colimit>),
}

impl Presheaf {
    pub fn representable(t: Arc<Tree>) -> Presheaf {
        Presheaf::Sub { base: t, part: Part::Whole }
    }
    pub fn boundary(t: Arc<Tree>) -> Presheaf {
        Presheaf::Sub { base: t, part: Part::Boundary }
    }
    pub fn horn(t: Arc<Tree>, e: EdgeSet) -> Presheaf {
        assert!(e != 0 && e & !t.inner_mask() == 0, "horn needs a non-empty set of inner edges");
        Presheaf::Sub { base: t, part: Part::Horn(e) }
    }
    pub fn segal_core(t: Arc<Tree>) -> Presheaf {
        Presheaf::Sub { base: t, part: Part::SegalCore }
    }
    pub fn necklace(t: Arc<Tree>, joints: EdgeSet) -> Presheaf {
        Presheaf::Sub { base: t, part: Part::Necklace(joints) }
    }

    /// The ambient tree, for subpresheaves of a representable.
    pub fn base(&self) -> Option<&Arc<Tree>> {
        match self {
            Presheaf::Sub { base, .. } => Some(base),
            Presheaf::Colimit(_) => None,
        }
    }

    /// Map out of the dendrex as a tree map, for subpresheaves of a representable.
    pub fn as_map(&self, s: &Arc<Tree>, x: &Dendrex) -> Option<TreeMap> {
        self.base().map(|b| TreeMap::new_unchecked(s.clone(), b.clone(), x.map.clone()))
    }

    pub fn contains(&self, m: &TreeMap) -> bool {
        match self {
            Presheaf::Sub { base, part } => **m.target() == **base && face_in_part(base, *part, &m.image_face()),
            Presheaf::Colimit(_) => false,
        }
    }
}

impl DendroidalSet for Presheaf {
    type Cell = Dendrex;

    fn dendrices(&self, s: &Arc<Tree>) -> Vec<Dendrex> {
        match self {
            Presheaf::Sub { base, part } => all_maps(s, base)
                .into_iter()
                .filter(|m| face_in_part(base, *part, &m.image_face()))
                .map(|m| Dendrex { gen: 0, map: m.assignment().to_vec() })
                .collect(),
            Presheaf::Colimit(c) => c.dendrices(s),
        }
    }

    fn restrict(&self, x: &Dendrex, phi: &TreeMap) -> Dendrex {
        let map: Vec<Edge> = phi.assignment().iter().map(|&e| x.map[e]).collect();
        match self {
            Presheaf::Sub { .. } => Dendrex { gen: x.gen, map },
            Presheaf::Colimit(c) => c.representative(phi.source(), Dendrex { gen: x.gen, map }),
        }
    }

    fn label(&self, x: &Dendrex) -> String {
        match self {
            Presheaf::Sub { base, .. } => x.map.iter().map(|&e| base.name(e)).collect::<Vec<_>>().join(","),
            Presheaf::Colimit(c) => {
                let t = &c.generators[x.gen];
                let names: Vec<&str> = x.map.iter().map(|&e| t.name(e)).collect();
                format!("{}:{}", x.gen, names.join(","))
            }
        }
    }
}

/// Minimal union-find with path halving.
#[derive(Clone, Debug, Default)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    /// Merge; the smaller root wins so representatives are the least index.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

/// One arrow of a presentation: generator `from` maps into generator `to`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub from: usize,
    pub to: usize,
    pub map: TreeMap,
}

#[derive(Debug)]
struct Quotient {
    /// (generator, map) in enumeration order; the representative is the first
    /// element of each class
    rep: HashMap<Dendrex, Dendrex>,
    reps: Vec<Dendrex>,
}

/// Colimit of a finite diagram of representables.
#[derive(Debug)]
pub struct Colimit {
    pub generators: Vec<Arc<Tree>>,
    pub relations: Vec<Relation>,
    cache: Mutex<HashMap<Vec<u8>, Arc<Quotient>>>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PresentationError {
    #[error("relation {0} refers to a missing generator")]
    Index(usize),
    #[error("relation {0}: map does not go between the named generators")]
    Ends(usize),
}

impl Colimit {
    pub fn new(generators: Vec<Arc<Tree>>, relations: Vec<Relation>) -> Result<Colimit, PresentationError> {
        for (i, r) in relations.iter().enumerate() {
            let (Some(a), Some(b)) = (generators.get(r.from), generators.get(r.to)) else {
                return Err(PresentationError::Index(i));
            };
            if **r.map.source() != **a || **r.map.target() != **b {
                return Err(PresentationError::Ends(i));
            }
        }
        Ok(Colimit { generators, relations, cache: Mutex::new(HashMap::new()) })
    }

    fn quotient(&self, s: &Arc<Tree>) -> Arc<Quotient> {
        let key = s.shape();
        if let Some(q) = self.cache.lock().unwrap().get(&key) {
            return q.clone();
        }
        let mut elems: Vec<Dendrex> = Vec::new();
        let mut index: HashMap<Dendrex, usize> = HashMap::new();
        for (g, t) in self.generators.iter().enumerate() {
            for m in all_maps(s, t) {
                let d = Dendrex { gen: g, map: m.assignment().to_vec() };
                index.insert(d.clone(), elems.len());
                elems.push(d);
            }
        }
        let mut uf = UnionFind::new(elems.len());
        for r in &self.relations {
            for (i, d) in elems.iter().enumerate() {
                if d.gen != r.from {
                    continue;
                }
                let img = Dendrex { gen: r.to, map: d.map.iter().map(|&e| r.map.apply(e)).collect() };
                uf.union(i, index[&img]);
            }
        }
        let mut rep = HashMap::new();
        let mut reps = Vec::new();
        for i in 0..elems.len() {
            let root = uf.find(i);
            if root == i {
                reps.push(elems[i].clone());
            }
            rep.insert(elems[i].clone(), elems[root].clone());
        }
        let q = Arc::new(Quotient { rep, reps });
        self.cache.lock().unwrap().insert(key, q.clone());
        q
    }

    pub fn dendrices(&self, s: &Arc<Tree>) -> Vec<Dendrex> {
        self.quotient(s).reps.clone()
    }

    pub fn representative(&self, s: &Arc<Tree>, d: Dendrex) -> Dendrex {
        self.quotient(s).rep[&d].clone()
    }
}

/// Collapse the unary vertex on top of `p`, merging its input into `p`.
/// Returns the smaller tree, the degeneracy onto it and a section of that degeneracy.
pub fn collapse(s: &Arc<Tree>, p: Edge) -> (Arc<Tree>, TreeMap, TreeMap) {
    let ins = s.inputs(p).expect("not a vertex");
    assert_eq!(ins.len(), 1, "only unary vertices collapse");
    let q = ins[0];
    fn rec(s: &Tree, e: Edge, p: Edge, q: Edge) -> Node {
        let (name, src) = (s.name(e), if e == p { q } else { e });
        Node {
            name: name.to_string(),
            inputs: s.inputs(src).map(|k| k.iter().map(|&c| rec(s, c, p, q)).collect()),
        }
    }
    let small = Arc::new(Tree::from_node(&rec(s, 0, p, q)).expect("collapse keeps the tree valid"));
    let idx = small.name_index();
    let sigma: Vec<Edge> = (0..s.len()).map(|e| idx[s.name(if e == q { p } else { e })]).collect();
    let back = position_table(&sigma, small.len());
    // every edge of the small tree but p has one preimage; send p to p
    let delta: Vec<Edge> = (0..small.len()).map(|e| if e == sigma[p] { p } else { back[e] }).collect();
    let sigma = TreeMap::new_unchecked(s.clone(), small.clone(), sigma);
    let delta = TreeMap::new_unchecked(small, s.clone(), delta);
    (sigma.target().clone(), sigma, delta)
}

/// Eilenberg–Zilber form: `x = y·σ` with `σ` a degeneracy and `y` non-degenerate,
/// found by collapsing unary vertices greedily.
pub fn ez_normal_form<X: DendroidalSet>(x: &X, s: &Arc<Tree>, cell: &X::Cell) -> (TreeMap, X::Cell) {
    let mut sigma = TreeMap::identity(s.clone());
    let mut cur = cell.clone();
    let mut shape = s.clone();
    'outer: loop {
        for p in shape.vertices() {
            if shape.inputs(p).unwrap().len() != 1 {
                continue;
            }
            let (small, sg, dl) = collapse(&shape, p);
            let y = x.restrict(&cur, &dl);
            if x.restrict(&y, &sg) == cur {
                sigma = sg.after(&sigma).unwrap();
                cur = y;
                shape = small;
                continue 'outer;
            }
        }
        return (sigma, cur);
    }
}

pub fn is_degenerate<X: DendroidalSet>(x: &X, s: &Arc<Tree>, cell: &X::Cell) -> bool {
    !ez_normal_form(x, s, cell).0.is_identity()
}

/// One failing (tree, coloring) of the strict Segal condition.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SegalFailure {
    pub tree: String,
    pub coloring: BTreeMap<String, String>,
    pub fiber: usize,
    pub families: usize,
    pub injective: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SegalReport {
    pub pass: bool,
    pub bound: usize,
    pub trees_checked: usize,
    pub colorings_checked: usize,
    pub witness: Option<SegalFailure>,
    pub failures: Vec<SegalFailure>,
}

/// Check `X_c(T) -> ∏_v X_{c_v}(T_v)` on one tree; returns (colorings, failures).
pub fn segal_at<X: DendroidalSet>(x: &X, t: &Arc<Tree>) -> (usize, Vec<SegalFailure>) {
    let verts = t.vertices();
    if verts.is_empty() {
        // the product over no vertices is a point, and so is each fiber
        return (x.dendrices(t).len(), vec![]);
    }
    let incl: Vec<TreeMap> = verts.iter().map(|&v| crate::face::face_map(t, &vertex_face(t, v))).collect();
    // per vertex: dendrices with the colors of their edges, keyed by edges of t
    let mut per_vertex: Vec<Vec<(X::Cell, Vec<(Edge, X::Cell)>)>> = Vec::new();
    for m in &incl {
        let tv = m.source();
        let cells = x.dendrices(tv);
        per_vertex.push(
            cells
                .into_iter()
                .map(|c| {
                    let col = x.coloring(tv, &c).into_iter().enumerate().map(|(e, k)| (m.apply(e), k)).collect();
                    (c, col)
                })
                .collect(),
        );
    }
    let mut families: BTreeMap<Vec<X::Cell>, usize> = BTreeMap::new();
    let mut col: Vec<Option<X::Cell>> = vec![None; t.len()];
    fn go<C: Clone + Ord>(
        i: usize,
        pv: &[Vec<(C, Vec<(Edge, C)>)>],
        col: &mut Vec<Option<C>>,
        out: &mut BTreeMap<Vec<C>, usize>,
    ) {
        if i == pv.len() {
            let key: Vec<C> = col.iter().map(|c| c.clone().expect("every edge meets a vertex")).collect();
            *out.entry(key).or_default() += 1;
            return;
        }
        'cand: for (_, cs) in &pv[i] {
            let mut set = Vec::new();
            for (e, c) in cs {
                match &col[*e] {
                    Some(old) if old != c => {
                        for &s in &set {
                            col[s] = None;
                        }
                        continue 'cand;
                    }
                    Some(_) => {}
                    None => {
                        col[*e] = Some(c.clone());
                        set.push(*e);
                    }
                }
            }
            go(i + 1, pv, col, out);
            for s in set {
                col[s] = None;
            }
        }
    }
    go(0, &per_vertex, &mut col, &mut families);

    let mut fibers: BTreeMap<Vec<X::Cell>, Vec<Vec<X::Cell>>> = BTreeMap::new();
    for c in x.dendrices(t) {
        let key = x.coloring(t, &c);
        let parts: Vec<X::Cell> = incl.iter().map(|m| x.restrict(&c, m)).collect();
        fibers.entry(key).or_default().push(parts);
    }
    let mut keys: Vec<&Vec<X::Cell>> = families.keys().chain(fibers.keys()).collect();
    keys.sort();
    keys.dedup();
    let mut failures = Vec::new();
    for k in &keys {
        let fam = families.get(*k).copied().unwrap_or(0);
        let fib = fibers.get(*k).cloned().unwrap_or_default();
        let mut sorted = fib.clone();
        sorted.sort();
        sorted.dedup();
        let injective = sorted.len() == fib.len();
        if !injective || fib.len() != fam {
            failures.push(SegalFailure {
                tree: t.print(),
                coloring: (0..t.len()).map(|e| (t.name(e).to_string(), x.label(&k[e]))).collect(),
                fiber: fib.len(),
                families: fam,
                injective,
            });
        }
    }
    (keys.len(), failures)
}

/// Strict Segal condition on every tree with at most `bound` edges.
pub fn segal_check<X: DendroidalSet>(x: &X, bound: usize) -> SegalReport {
    let mut trees_checked = 0;
    let mut colorings_checked = 0;
    let mut failures = Vec::new();
    for t in trees_up_to(bound) {
        let t = Arc::new(t);
        let (n, f) = segal_at(x, &t);
        trees_checked += 1;
        colorings_checked += n;
        failures.extend(f);
    }
    SegalReport { pass: failures.is_empty(), bound, trees_checked, colorings_checked, witness: failures.first().cloned(), failures }
}

/// Experimental variant: `X(T) -> X(Λ^e[T])` for each single inner edge `e`,
/// a family being compatible dendrices on the maximal faces of the horn.
pub fn horn_segal_check<X: DendroidalSet>(x: &X, bound: usize) -> SegalReport {
    let mut trees_checked = 0;
    let mut colorings_checked = 0;
    let mut failures = Vec::new();
    for t in trees_up_to(bound) {
        let t = Arc::new(t);
        trees_checked += 1;
        for e in t.inner_edges() {
            let faces: Vec<Face> = crate::face::enumerate_faces(&t, crate::face::FaceKind::All)
                .into_iter()
                .filter(|f| face_in_part(&t, Part::Horn(bit(e)), f))
                .collect();
            let maximal: Vec<Face> = faces
                .iter()
                .filter(|f| !faces.iter().any(|g| g != *f && crate::face::face_leq(f, g)))
                .copied()
                .collect();
            let maps: Vec<TreeMap> = maximal.iter().map(|f| crate::face::face_map(&t, f)).collect();
            // common faces of each pair, as maps into both members
            let mut checks: Vec<(usize, usize, TreeMap, TreeMap)> = Vec::new();
            for i in 0..maximal.len() {
                for j in i + 1..maximal.len() {
                    for f in &faces {
                        if crate::face::face_leq(f, &maximal[i]) && crate::face::face_leq(f, &maximal[j]) {
                            checks.push((i, j, into_face(&t, f, &maximal[i]), into_face(&t, f, &maximal[j])));
                        }
                    }
                }
            }
            let cells: Vec<Vec<X::Cell>> = maps.iter().map(|m| x.dendrices(m.source())).collect();
            let mut count = 0usize;
            let mut pick = vec![0usize; maximal.len()];
            if cells.iter().all(|c| !c.is_empty()) {
                loop {
                    let ok = checks.iter().all(|(i, j, a, b)| x.restrict(&cells[*i][pick[*i]], a) == x.restrict(&cells[*j][pick[*j]], b));
                    if ok {
                        count += 1;
                    }
                    let mut k = 0;
                    while k < pick.len() {
                        pick[k] += 1;
                        if pick[k] < cells[k].len() {
                            break;
                        }
                        pick[k] = 0;
                        k += 1;
                    }
                    if k == pick.len() {
                        break;
                    }
                }
            }
            let total = x.dendrices(&t).len();
            colorings_checked += 1;
            if total != count {
                failures.push(SegalFailure {
                    tree: t.print(),
                    coloring: BTreeMap::from([("horn".to_string(), t.name(e).to_string())]),
                    fiber: total,
                    families: count,
                    injective: true,
                });
            }
        }
    }
    SegalReport { pass: failures.is_empty(), bound, trees_checked, colorings_checked, witness: failures.first().cloned(), failures }
}

/// The face `f` of `t`, as a map into the face tree of `g ⊇ f`.
fn into_face(t: &Arc<Tree>, f: &Face, g: &Face) -> TreeMap {
    let (ft, fo) = t.face_tree(f);
    let (gt, go) = t.face_tree(g);
    let pos = position_table(&go, t.len());
    TreeMap::new_unchecked(Arc::new(ft), Arc::new(gt), fo.iter().map(|&e| pos[e]).collect())
}
