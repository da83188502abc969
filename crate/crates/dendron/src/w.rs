//! Simplices of `W_!(X)`: quadruples `(n, φ, x, J_•)`, their normal forms,
//! the generating moves between them, and mapping spaces over corollas.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::map::{all_maps, position_table, TreeMap};
use crate::necklace::{collapse_necklace, necklace_dendrices, necklace_map_check, pull_cell, tnd_factorize, Necklace, NecklaceCell};
use crate::nw::{chains, corestrict, NwString};
use crate::presheaf::{is_degenerate, DendroidalSet};
use crate::sset::{cube, pushout_product_domain, SimplicialSet};
use crate::tree::{bit, members, trees_up_to, Edge, EdgeSet, Face, Node, Tree};

/// `φ: S -> T` tall with `φS ⊆ J`, `x: Ω[n] -> X`, and kept inner edges
/// `K_0 ⊆ ... ⊆ K_n` of `T` with `K_0 ⊇ joints`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quadruple<C> {
    pub necklace: Necklace,
    pub phi: TreeMap,
    pub cell: NecklaceCell<C>,
    pub chain: Vec<EdgeSet>,
}

impl<C: Clone + Eq + Ord + std::hash::Hash + std::fmt::Debug> Quadruple<C> {
    pub fn carrier(&self) -> &Arc<Tree> {
        &self.necklace.carrier
    }

    pub fn dim(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn check(&self) -> Result<(), String> {
        let t = self.carrier();
        let d = self.necklace.joints;
        if **self.phi.target() != **t {
            return Err("φ does not land in the carrier".into());
        }
        if !self.phi.is_tall() {
            return Err("φ is not tall".into());
        }
        if self.phi.image() & t.inner_mask() & !d != 0 {
            return Err("φS is not inside J".into());
        }
        if self.chain.is_empty() || self.chain[0] & d != d || self.chain.windows(2).any(|w| w[0] & !w[1] != 0) || self.chain.last().unwrap() & !t.inner_mask() != 0 {
            return Err("bad chain".into());
        }
        match (&self.cell, t.is_stick()) {
            (NecklaceCell::Stick(_), true) => Ok(()),
            (NecklaceCell::Beads(b), false) if b.len() == self.necklace.beads().len() => Ok(()),
            _ => Err("cell does not match the beads".into()),
        }
    }

    pub fn is_flanked(&self) -> bool {
        self.chain[0] == self.necklace.joints && *self.chain.last().unwrap() == self.carrier().inner_mask()
    }

    fn as_string(&self) -> NwString {
        NwString { phi: self.phi.clone(), chain: self.chain.clone() }
    }
}

pub fn is_totally_nondegenerate<X: DendroidalSet>(x: &X, n: &Necklace, cell: &NecklaceCell<X::Cell>) -> bool {
    match cell {
        NecklaceCell::Stick(_) => true,
        NecklaceCell::Beads(cs) => n.bead_maps().iter().zip(cs).all(|(b, c)| !is_degenerate(x, b.source(), c)),
    }
}

/// Edge colors of a necklace cell, indexed by carrier edges.
pub fn cell_colors<X: DendroidalSet>(x: &X, n: &Necklace, cell: &NecklaceCell<X::Cell>) -> Vec<X::Cell> {
    match cell {
        NecklaceCell::Stick(c) => vec![c.clone()],
        NecklaceCell::Beads(cs) => {
            let mut out: Vec<Option<X::Cell>> = vec![None; n.carrier.len()];
            for (b, c) in n.bead_maps().iter().zip(cs) {
                for (k, &e) in b.assignment().iter().enumerate() {
                    if out[e].is_none() {
                        out[e] = Some(x.restrict(c, &TreeMap::edge_of(b.source(), k)));
                    }
                }
            }
            out.into_iter().map(|c| c.expect("beads cover the carrier")).collect()
        }
    }
}

/// Replace the necklace by `J_0 -> J_n`.
pub fn flank<X: DendroidalSet>(x: &X, q: &Quadruple<X::Cell>) -> (Quadruple<X::Cell>, TreeMap) {
    let t = q.carrier();
    let iota = crate::face::face_map(t, &Face::whole(t).with_kept(*q.chain.last().unwrap()));
    let pos = position_table(iota.assignment(), t.len());
    let remap = |m: EdgeSet| members(m).fold(0, |acc, e| acc | bit(pos[e]));
    let n2 = Necklace { carrier: iota.source().clone(), joints: remap(q.chain[0]) };
    let cell = pull_cell(x, &n2, &q.necklace, &iota, &q.cell);
    let q2 = Quadruple { phi: corestrict(&q.phi, &iota), chain: q.chain.iter().map(|&k| remap(k)).collect(), necklace: n2, cell };
    (q2, iota)
}

/// Split off the necklace degeneracy of `x` and push the chain along it.
pub fn tnd<X: DendroidalSet>(x: &X, q: &Quadruple<X::Cell>) -> (Quadruple<X::Cell>, TreeMap) {
    let f = tnd_factorize(x, &q.necklace, &q.cell);
    let w = q.as_string().pushforward(&f.degeneracy);
    (Quadruple { necklace: f.necklace, phi: w.phi, cell: f.cell, chain: w.chain }, f.degeneracy)
}

/// Every isomorphism from `t` onto a tree named by planar position.
pub fn replanarizations(t: &Arc<Tree>) -> Vec<TreeMap> {
    let verts: Vec<Edge> = t.vertices();
    let perms: Vec<Vec<Vec<usize>>> = verts.iter().map(|&v| permutations(t.inputs(v).unwrap().len())).collect();
    let mut pick = vec![0usize; verts.len()];
    let mut out = Vec::new();
    loop {
        let choice: std::collections::HashMap<Edge, &Vec<usize>> = verts.iter().zip(&pick).enumerate().map(|(i, (&v, &p))| (v, &perms[i][p])).collect();
        fn rec(t: &Tree, e: Edge, choice: &std::collections::HashMap<Edge, &Vec<usize>>) -> Node {
            Node {
                name: t.name(e).to_string(),
                inputs: t.inputs(e).map(|ins| choice[&e].iter().map(|&i| rec(t, ins[i], choice)).collect()),
            }
        }
        let tmp = Tree::from_node(&rec(t, 0, &choice)).expect("reordering keeps the tree valid");
        let assign: Vec<Edge> = (0..t.len()).map(|e| tmp.edge(t.name(e)).unwrap()).collect();
        out.push(TreeMap::new_unchecked(t.clone(), Arc::new(tmp.canonical()), assign));
        let mut k = 0;
        while k < pick.len() {
            pick[k] += 1;
            if pick[k] < perms[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
        if k == pick.len() {
            break;
        }
    }
    out
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

pub fn inverse(iso: &TreeMap) -> TreeMap {
    TreeMap::new_unchecked(iso.target().clone(), iso.source().clone(), position_table(iso.assignment(), iso.target().len()))
}

/// Move a quadruple along a carrier isomorphism.
pub fn transport<X: DendroidalSet>(x: &X, q: &Quadruple<X::Cell>, iso: &TreeMap) -> Quadruple<X::Cell> {
    let img = |m: EdgeSet| members(m).fold(0, |acc, e| acc | bit(iso.apply(e)));
    let n2 = Necklace { carrier: iso.target().clone(), joints: img(q.necklace.joints) };
    let cell = pull_cell(x, &n2, &q.necklace, &inverse(iso), &q.cell);
    Quadruple { phi: iso.after(&q.phi).unwrap(), chain: q.chain.iter().map(|&k| img(k)).collect(), necklace: n2, cell }
}

/// The least transport over all re-planarizations of the carrier.
pub fn canonical<X: DendroidalSet>(x: &X, q: &Quadruple<X::Cell>) -> Quadruple<X::Cell> {
    replanarizations(q.carrier())
        .iter()
        .map(|iso| transport(x, q, iso))
        .min_by(|a, b| key(a).cmp(&key(b)))
        .unwrap()
}

fn key<C: Ord + Clone>(q: &Quadruple<C>) -> (Vec<u8>, EdgeSet, Vec<Edge>, Vec<EdgeSet>, NecklaceCell<C>) {
    (q.necklace.carrier.shape(), q.necklace.joints, q.phi.assignment().to_vec(), q.chain.clone(), q.cell.clone())
}

/// Flanked, totally non-degenerate, canonically planar.
pub fn normalize<X: DendroidalSet>(x: &X, q: &Quadruple<X::Cell>) -> Quadruple<X::Cell> {
    let (a, _) = flank(x, q);
    let (b, _) = tnd(x, &a);
    canonical(x, &b)
}

/// One generating move `from -> to` along a carrier map.
#[derive(Clone, Debug)]
pub struct Step<C> {
    pub from: Quadruple<C>,
    pub to: Quadruple<C>,
    pub map: TreeMap,
}

/// `to.φ = ψ from.φ`, `from.x = to.x ψ`, `to.J = ψ from.J`, with `ψ` a map of necklaces.
pub fn verify_step<X: DendroidalSet>(x: &X, s: &Step<X::Cell>) -> Result<(), String> {
    s.from.check()?;
    s.to.check()?;
    let psi = &s.map;
    if **psi.source() != **s.from.carrier() || **psi.target() != **s.to.carrier() {
        return Err("carrier map has the wrong ends".into());
    }
    if crate::map::violation(psi.source(), psi.target(), psi.assignment()).is_some() {
        return Err("carrier map is not a map".into());
    }
    if !necklace_map_check(&s.from.necklace, &s.to.necklace, psi) {
        return Err("not a map of necklaces".into());
    }
    if psi.after(&s.from.phi).unwrap() != s.to.phi {
        return Err("φ' ≠ ψφ".into());
    }
    if pull_cell(x, &s.from.necklace, &s.to.necklace, psi, &s.to.cell) != s.from.cell {
        return Err("x ≠ x'ψ".into());
    }
    if s.from.as_string().pushforward(psi).chain != s.to.chain {
        return Err("J' ≠ ψJ".into());
    }
    Ok(())
}

/// Steps from `q` to its normal form: flanking, one collapse at a time, then the planar iso.
pub fn path_to_normal<X: DendroidalSet>(x: &X, q: &Quadruple<X::Cell>) -> Vec<Step<X::Cell>> {
    let mut steps = Vec::new();
    let (a, iota) = flank(x, q);
    steps.push(Step { from: a.clone(), to: q.clone(), map: iota });
    let mut cur = a;
    loop {
        let (b, sigma) = tnd_one(x, &cur);
        match sigma {
            Some(sigma) => {
                steps.push(Step { from: cur.clone(), to: b.clone(), map: sigma });
                cur = b;
            }
            None => break,
        }
    }
    let c = canonical(x, &cur);
    let iso = replanarizations(cur.carrier()).into_iter().find(|iso| transport(x, &cur, iso) == c).unwrap();
    steps.push(Step { from: cur, to: c, map: iso });
    steps
}

/// One elementary collapse, if some bead dendrex is degenerate there.
fn tnd_one<X: DendroidalSet>(x: &X, q: &Quadruple<X::Cell>) -> (Quadruple<X::Cell>, Option<TreeMap>) {
    let NecklaceCell::Beads(cs) = &q.cell else { return (q.clone(), None) };
    for (k, bm) in q.necklace.bead_maps().iter().enumerate() {
        let bt = bm.source();
        for p in bt.vertices() {
            if bt.inputs(p).unwrap().len() != 1 {
                continue;
            }
            let (_, sg, dl) = crate::presheaf::collapse(bt, p);
            if x.restrict(&x.restrict(&cs[k], &dl), &sg) != cs[k] {
                continue;
            }
            let (n2, sigma) = collapse_necklace(&q.necklace, bm.apply(p));
            // the collapsed cell: restrict through a section, bead by bead
            let cell = crate::necklace::push_degenerate(x, &q.necklace, &n2, &sigma, cs);
            let w = q.as_string().pushforward(&sigma);
            return (Quadruple { necklace: n2, phi: w.phi, cell, chain: w.chain }, Some(sigma));
        }
    }
    (q.clone(), None)
}

/// Zigzag from `a` to `b` through their common normal form, every step checked.
/// Consecutive steps share an end; the direction of each step is that of its map.
pub fn zigzag<X: DendroidalSet>(x: &X, a: &Quadruple<X::Cell>, b: &Quadruple<X::Cell>, max_len: usize) -> Option<Vec<Step<X::Cell>>> {
    let pa = path_to_normal(x, a);
    let pb = path_to_normal(x, b);
    if pa.last().unwrap().to != pb.last().unwrap().to || pa.len() + pb.len() > max_len {
        return None;
    }
    let all: Vec<Step<X::Cell>> = pa.into_iter().chain(pb.into_iter().rev()).collect();
    if all.iter().all(|s| verify_step(x, s).is_ok()) {
        Some(all)
    } else {
        None
    }
}

/// A random move into `q`: a quadruple on a bigger or re-planarized necklace mapping to it.
pub fn random_move_into<X: DendroidalSet, R: Rng>(x: &X, q: &Quadruple<X::Cell>, rng: &mut R) -> Option<Step<X::Cell>> {
    match rng.gen_range(0..3) {
        0 => inner_face_move(x, q, rng),
        1 => degeneracy_move(x, q, rng),
        _ => {
            let isos = replanarizations(q.carrier());
            let iso = &isos[rng.gen_range(0..isos.len())];
            let back = inverse(iso);
            Some(Step { from: transport(x, q, iso), to: q.clone(), map: back })
        }
    }
}

fn random_between<R: Rng>(lo: EdgeSet, hi: EdgeSet, rng: &mut R) -> EdgeSet {
    members(hi & !lo).fold(lo, |m, e| if rng.gen_bool(0.5) { m | bit(e) } else { m })
}

fn inner_face_move<X: DendroidalSet, R: Rng>(x: &X, q: &Quadruple<X::Cell>, rng: &mut R) -> Option<Step<X::Cell>> {
    let t = q.carrier();
    let kn = *q.chain.last().unwrap();
    let keep = random_between(kn, t.inner_mask(), rng);
    let joints = random_between(q.necklace.joints, q.chain[0], rng);
    let iota = crate::face::face_map(t, &Face::whole(t).with_kept(keep));
    let pos = position_table(iota.assignment(), t.len());
    let remap = |m: EdgeSet| members(m).fold(0, |acc, e| acc | bit(pos[e]));
    let n2 = Necklace { carrier: iota.source().clone(), joints: remap(joints) };
    let cell = pull_cell(x, &n2, &q.necklace, &iota, &q.cell);
    let from = Quadruple { phi: corestrict(&q.phi, &iota), chain: q.chain.iter().map(|&k| remap(k)).collect(), necklace: n2, cell };
    Some(Step { from, to: q.clone(), map: iota })
}

/// Insert a unary vertex on `e`: the new upper edge takes `e`'s place above.
pub fn split_edge(t: &Arc<Tree>, e: Edge) -> (Arc<Tree>, TreeMap) {
    let mut fresh = format!("{}'", t.name(e));
    while t.edge(&fresh).is_some() {
        fresh.push('\'');
    }
    fn rec(t: &Tree, cur: Edge, e: Edge, fresh: &str) -> Node {
        let above = Node { name: if cur == e { fresh.to_string() } else { t.name(cur).to_string() }, inputs: t.inputs(cur).map(|k| k.iter().map(|&c| rec(t, c, e, fresh)).collect()) };
        if cur == e {
            Node { name: t.name(e).to_string(), inputs: Some(vec![above]) }
        } else {
            above
        }
    }
    let big = Arc::new(Tree::from_node(&rec(t, 0, e, &fresh)).unwrap());
    let assign = (0..big.len()).map(|k| if big.name(k) == fresh { e } else { t.edge(big.name(k)).unwrap() }).collect();
    (big.clone(), TreeMap::new_unchecked(big, t.clone(), assign))
}

fn degeneracy_move<X: DendroidalSet, R: Rng>(x: &X, q: &Quadruple<X::Cell>, rng: &mut R) -> Option<Step<X::Cell>> {
    let t = q.carrier();
    let e = rng.gen_range(0..t.len());
    let (big, sigma) = split_edge(t, e);
    let pre = |m: EdgeSet| (0..big.len()).filter(|&y| m & bit(sigma.apply(y)) != 0).fold(0, |acc, y| acc | bit(y)) & big.inner_mask();
    let outer_t = t.all_mask() & !t.inner_mask();
    let mut joints = pre(q.necklace.joints);
    let pair: Vec<Edge> = members(joints).filter(|&y| sigma.apply(y) == e).collect();
    if pair.len() == 2 && rng.gen_bool(0.5) {
        joints &= !bit(pair[rng.gen_range(0..2)]);
    }
    let chain: Vec<EdgeSet> = q.chain.iter().map(|&k| pre(k | outer_t)).collect();
    let n2 = Necklace { carrier: big.clone(), joints };
    let s = q.phi.source();
    let lower = big.edge(t.name(e)).unwrap();
    let upper = (0..big.len()).find(|&y| y != lower && sigma.apply(y) == e).unwrap();
    for _ in 0..20 {
        let assign: Vec<Edge> = (0..s.len())
            .map(|k| {
                let img = q.phi.apply(k);
                if img == e {
                    if rng.gen_bool(0.5) {
                        lower
                    } else {
                        upper
                    }
                } else {
                    big.edge(t.name(img)).unwrap()
                }
            })
            .collect();
        let Ok(phi) = TreeMap::new(s.clone(), big.clone(), assign) else { continue };
        if !phi.is_tall() || phi.image() & big.inner_mask() & !joints != 0 || chain[0] & joints != joints {
            continue;
        }
        let cell = pull_cell(x, &n2, &q.necklace, &sigma, &q.cell);
        let from = Quadruple { necklace: n2, phi, cell, chain };
        return Some(Step { from, to: q.clone(), map: sigma });
    }
    None
}

/// Source corolla for a signature of arity `n`: root `0`, leaves `1..=n`.
pub fn corolla(n: usize) -> Arc<Tree> {
    let leaves: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = leaves.iter().map(String::as_str).collect();
    Arc::new(Tree::corolla("0", &refs).unwrap())
}

/// `(x_1, ..., x_n; x_0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature<C> {
    pub leaves: Vec<C>,
    pub root: C,
}

impl<C: Clone> Signature<C> {
    /// Colors of the corolla's edges in planar order.
    pub fn coloring(&self) -> Vec<C> {
        std::iter::once(self.root.clone()).chain(self.leaves.iter().cloned()).collect()
    }
}

type Carriers = Arc<Vec<(Arc<Tree>, Vec<TreeMap>)>>;

/// Carriers with as many leaves as `s` and at most `bound` edges, each with
/// the tall maps from `s`. Memoized; the list does not depend on `X`.
fn tall_carriers(s: &Arc<Tree>, bound: usize) -> Carriers {
    static CACHE: OnceLock<Mutex<HashMap<(String, usize), Carriers>>> = OnceLock::new();
    let key = (s.print(), bound);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&key) {
        return c.clone();
    }
    let leaves = s.leaves().len();
    let found: Carriers = Arc::new(
        trees_up_to(bound)
            .into_iter()
            .filter(|t| t.leaves().len() == leaves)
            .filter_map(|t| {
                let t = Arc::new(t);
                let talls: Vec<TreeMap> = all_maps(s, &t).into_iter().filter(|m| m.is_tall()).collect();
                (!talls.is_empty()).then_some((t, talls))
            })
            .collect(),
    );
    cache.lock().unwrap().insert(key, found.clone());
    found
}

/// Strictly increasing chains from `lo` to `hi`, of every length.
pub fn strict_chains(lo: EdgeSet, hi: EdgeSet) -> Vec<Vec<EdgeSet>> {
    if lo == hi {
        return vec![vec![lo]];
    }
    let mut out = Vec::new();
    for step in crate::face::subsets(hi & !lo).into_iter().filter(|&m| m != 0) {
        for mut rest in strict_chains(lo | step, hi) {
            rest.insert(0, lo);
            out.push(rest);
        }
    }
    out
}

fn normal_forms<X: DendroidalSet>(
    x: &X,
    s: &Arc<Tree>,
    bound: usize,
    coloring: Option<&[X::Cell]>,
    chains_for: impl Fn(EdgeSet, EdgeSet) -> Vec<Vec<EdgeSet>>,
) -> Vec<Quadruple<X::Cell>> {
    let mut out = BTreeSet::new();
    for (t, talls) in tall_carriers(s, bound).iter() {
        for joints in crate::face::subsets(t.inner_mask()) {
            let cs = chains_for(joints, t.inner_mask());
            if cs.is_empty() {
                continue;
            }
            let n = Necklace { carrier: t.clone(), joints };
            for cell in necklace_dendrices(&n, x) {
                if !is_totally_nondegenerate(x, &n, &cell) {
                    continue;
                }
                let colors = cell_colors(x, &n, &cell);
                for phi in talls {
                    if phi.image() & t.inner_mask() & !joints != 0 {
                        continue;
                    }
                    if let Some(want) = coloring {
                        if phi.assignment().iter().zip(want).any(|(&e, c)| colors[e] != *c) {
                            continue;
                        }
                    }
                    for c in &cs {
                        let q = Quadruple { necklace: n.clone(), phi: phi.clone(), cell: cell.clone(), chain: c.clone() };
                        out.insert(canonical(x, &q));
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Normal forms over `s`, at simplicial level `level`, with carriers of at most `bound` edges.
/// With `strict`, only strictly increasing chains (non-degenerate simplices).
pub fn wx_simplices<X: DendroidalSet>(x: &X, s: &Arc<Tree>, level: usize, bound: usize, strict: bool, coloring: Option<&[X::Cell]>) -> Vec<Quadruple<X::Cell>> {
    normal_forms(x, s, bound, coloring, |joints, inner| {
        chains(joints, inner & !joints, level)
            .into_iter()
            .filter(|c| c[0] == joints && *c.last().unwrap() == inner)
            .filter(|c| !strict || c.windows(2).all(|w| w[0] != w[1]))
            .collect()
    })
}

/// Normal-form label: carrier, joints, φ, bead dendrices and chain.
pub fn describe<X: DendroidalSet>(x: &X, q: &Quadruple<X::Cell>) -> String {
    let t = q.carrier();
    let names = |m: EdgeSet| members(m).map(|e| t.name(e).to_string()).collect::<Vec<_>>().join(",");
    let cell = match &q.cell {
        NecklaceCell::Stick(c) => x.label(c),
        NecklaceCell::Beads(cs) => cs.iter().map(|c| x.label(c)).collect::<Vec<_>>().join("|"),
    };
    let phi: Vec<&str> = q.phi.assignment().iter().map(|&e| t.name(e)).collect();
    let chain: Vec<String> = q.chain.iter().map(|&k| format!("{{{}}}", names(k))).collect();
    format!("{} J={{{}}} φ={} x={} K={}", t.print(), names(q.necklace.joints), phi.join(","), cell, chain.join("<"))
}

/// `W_!(X)(x_1, ..., x_n; x_0)` from normal forms with carriers of at most `bound` edges.
pub fn mapping_space<X: DendroidalSet>(x: &X, sig: &Signature<X::Cell>, bound: usize) -> Result<SimplicialSet, String> {
    let s = corolla(sig.leaves.len());
    let coloring = sig.coloring();
    let cells = normal_forms(x, &s, bound, Some(&coloring), strict_chains);
    SimplicialSet::from_chains(
        cells,
        |q| describe(x, q),
        |q| q.dim(),
        |q, i| {
            let mut d = q.clone();
            d.chain.remove(i);
            let nf = normalize(x, &d);
            let mut distinct = nf.chain.clone();
            distinct.dedup();
            let surj: Vec<usize> = nf.chain.iter().map(|k| distinct.iter().position(|m| m == k).unwrap()).collect();
            let nd = canonical(x, &Quadruple { chain: distinct, ..nf });
            (nd, surj)
        },
    )
}

/// Which of the three closed forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedKind {
    Representable,
    Boundary,
    Horn(EdgeSet),
}

/// Closed forms for `Ω[U]`, `∂Ω[U]` and `Λ^E[U]`; the signature is given as edges of `U`.
pub fn closed_form_mapping_space(kind: ClosedKind, u: &Arc<Tree>, sig: &Signature<Edge>) -> SimplicialSet {
    let c = corolla(sig.leaves.len());
    let Ok(m) = TreeMap::new(c, u.clone(), sig.coloring()) else { return SimplicialSet::empty() };
    let f = m.closure();
    let inner = f.closure_inner().count_ones() as usize;
    if f != Face::whole(u) {
        return cube(inner);
    }
    match kind {
        ClosedKind::Representable => cube(inner),
        ClosedKind::Boundary => pushout_product_domain(inner, 0),
        ClosedKind::Horn(e) => pushout_product_domain(inner - e.count_ones() as usize, e.count_ones() as usize),
    }
}

/// The leaf-root signature of `u`, as edges.
pub fn leaf_root_signature(u: &Tree) -> Signature<Edge> {
    Signature { leaves: u.leaves(), root: 0 }
}

/// Signature of colors of a subpresheaf of `Ω[U]` from edges of `U`.
pub fn edge_signature(sig: &Signature<Edge>) -> Signature<crate::presheaf::Dendrex> {
    let d = |e: Edge| crate::presheaf::Dendrex { gen: 0, map: vec![e] };
    Signature { leaves: sig.leaves.iter().map(|&e| d(e)).collect(), root: d(sig.root) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::Presheaf;
    use crate::sset::iso_check;
    use rand::SeedableRng;

    fn tr(s: &str) -> Arc<Tree> {
        Arc::new(Tree::parse(s).unwrap())
    }

    #[test]
    fn leaf_root_vectors() {
        let u = tr("r(c(a,b),d,e())");
        let sig = leaf_root_signature(&u);
        let cases = [
            (Presheaf::representable(u.clone()), ClosedKind::Representable, vec![4, 5, 2]),
            (Presheaf::boundary(u.clone()), ClosedKind::Boundary, vec![4, 4]),
            (Presheaf::horn(u.clone(), bit(u.edge("c").unwrap())), ClosedKind::Horn(bit(u.edge("c").unwrap())), vec![4, 3]),
        ];
        for (x, kind, want) in cases {
            let got = mapping_space(&x, &edge_signature(&sig), u.len()).unwrap();
            got.check().unwrap();
            assert_eq!(got.counts(), want);
            assert!(iso_check(&got, &closed_form_mapping_space(kind, &u, &sig)).is_some());
        }
    }

    #[test]
    fn normalize_is_idempotent_and_move_invariant() {
        let u = tr("r(c(a,b),d)");
        let x = Presheaf::representable(u.clone());
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let s = corolla(3);
        let qs = wx_simplices(&x, &s, 1, 4, false, None);
        assert!(!qs.is_empty());
        for q in qs.iter().take(20) {
            assert_eq!(normalize(&x, q), *q);
            let mut cur = q.clone();
            for _ in 0..3 {
                if let Some(step) = random_move_into(&x, &cur, &mut rng) {
                    verify_step(&x, &step).unwrap();
                    assert_eq!(normalize(&x, &step.from), *q);
                    cur = step.from;
                }
            }
            assert!(zigzag(&x, &cur, q, 64).is_some());
        }
    }

    #[test]
    fn flanking_turns_inner_face_ending_into_identity() {
        let u = tr("r(c(a,b),d)");
        let x = Presheaf::representable(u.clone());
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let qs = wx_simplices(&x, &corolla(3), 1, 5, false, None);
        let mut unflanked = 0;
        for q in &qs {
            let mut cur = q.clone();
            for _ in 0..4 {
                let Some(step) = random_move_into(&x, &cur, &mut rng) else { break };
                cur = step.from;
                let w = cur.as_string();
                let last = w.j(w.chain.len() - 1);
                assert!(last.leaves == cur.carrier().leaf_mask() && last.edges & cur.carrier().inner_mask() == *cur.chain.last().unwrap());
                let (fl, iota) = flank(&x, &cur);
                let wf = fl.as_string();
                assert_eq!(wf.j(wf.chain.len() - 1), Face::whole(fl.carrier()));
                assert_eq!(wf.pushforward(&iota), w);
                unflanked += usize::from(!cur.is_flanked());
            }
        }
        assert!(unflanked > 0);
    }
}
