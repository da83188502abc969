//! Operations of `τX` at corollas, by bounded search over triples
//! `Ω[C] -> Ω[T] <- Ω[n] -> X` modulo tall maps of necklaces.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use crate::map::{all_maps, TreeMap};
use crate::necklace::{necklace_map_check, Necklace, NecklaceCell, PullPlan};
use crate::presheaf::{DendroidalSet, UnionFind};
use crate::tree::{trees_up_to, EdgeSet, Tree};
use crate::w::{corolla, replanarizations};

#[derive(Clone, Debug)]
pub struct TauResult<C> {
    pub arity: usize,
    pub bound: usize,
    pub triples: usize,
    /// Class count for every signature (root color first) that occurs.
    pub classes: BTreeMap<Vec<C>, usize>,
}

/// The part of the search that does not depend on `X`: carriers with `arity`
/// leaves and at most `bound` edges, tall maps from the corolla into them,
/// and the tall necklace maps between them.
#[derive(Clone, Debug)]
pub struct TauGeometry {
    pub arity: usize,
    pub bound: usize,
    carriers: Vec<Arc<Tree>>,
    talls: Vec<Vec<TreeMap>>,
    /// distinct bead shapes
    shapes: Vec<Arc<Tree>>,
    blocks: Vec<BlockShape>,
    moves: Vec<Move>,
}

/// One necklace `(carrier, D)`: its beads as (shape id, carrier edge of each bead edge).
#[derive(Clone, Debug)]
struct BlockShape {
    carrier: usize,
    beads: Vec<(usize, Vec<usize>)>,
}

#[derive(Clone, Debug)]
struct Move {
    from: usize,
    to: usize,
    /// `k -> k'` with `ψ t_k = t_k'`
    moved: Vec<(usize, usize)>,
    /// blocks of the joint sets `(D, D')` for which `ψ` is a necklace map, with the pullback plan
    joints: Vec<(usize, usize, PullPlan)>,
}

fn plans(
    block_of: &HashMap<(usize, EdgeSet), usize>,
    (i, ti): (usize, &Arc<Tree>),
    (j, tj): (usize, &Arc<Tree>),
    psi: &TreeMap,
    pairs: Vec<(EdgeSet, EdgeSet)>,
) -> Vec<(usize, usize, PullPlan)> {
    pairs
        .into_iter()
        .map(|(di, dj)| {
            let ni = Necklace { carrier: ti.clone(), joints: di };
            let nj = Necklace { carrier: tj.clone(), joints: dj };
            (block_of[&(i, di)], block_of[&(j, dj)], PullPlan::new(&ni, &nj, psi))
        })
        .collect()
}

impl TauGeometry {
    pub fn new(arity: usize, bound: usize) -> TauGeometry {
        Self::build(arity, bound, true)
    }

    /// With `reduced`, each map keeps only its extreme joint pairs: a pair
    /// `(D, D')` factors through `(D0, D0')` when `D0 ⊆ D` and `D' ⊆ D0'`,
    /// with identity restrictions on either side, and those restrictions are
    /// added separately one joint at a time.
    fn build(arity: usize, bound: usize, reduced: bool) -> TauGeometry {
        let c = corolla(arity);
        // reduced: one planar structure per isomorphism class, the others are
        // reached through isomorphisms, which are tall necklace maps
        let carriers: Vec<Arc<Tree>> = trees_up_to(bound)
            .into_iter()
            .filter(|t| t.leaves().len() == arity)
            .map(Arc::new)
            .filter(|t| !reduced || replanarizations(t).iter().all(|r| r.target().shape() >= t.shape()))
            .collect();
        let talls: Vec<Vec<TreeMap>> = carriers.iter().map(|t| all_maps(&c, t).into_iter().filter(|m| m.is_tall()).collect()).collect();
        let mut shapes: Vec<Arc<Tree>> = Vec::new();
        let mut shape_id: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut blocks = Vec::new();
        let mut block_of = HashMap::new();
        for (i, t) in carriers.iter().enumerate() {
            for d in crate::face::subsets(t.inner_mask()) {
                let beads = if t.is_stick() {
                    Vec::new()
                } else {
                    Necklace { carrier: t.clone(), joints: d }
                        .bead_maps()
                        .into_iter()
                        .map(|b| {
                            let id = *shape_id.entry(b.source().shape()).or_insert_with(|| {
                                shapes.push(b.source().clone());
                                shapes.len() - 1
                            });
                            (id, b.assignment().to_vec())
                        })
                        .collect()
                };
                block_of.insert((i, d), blocks.len());
                blocks.push(BlockShape { carrier: i, beads });
            }
        }
        let tall_index: Vec<HashMap<Vec<usize>, usize>> =
            talls.iter().map(|ts| ts.iter().enumerate().map(|(k, m)| (m.assignment().to_vec(), k)).collect()).collect();
        let mut moves = Vec::new();
        for (i, ti) in carriers.iter().enumerate() {
            for (j, tj) in carriers.iter().enumerate() {
                for psi in all_maps(ti, tj).into_iter().filter(|m| m.is_tall()) {
                    let moved: Vec<(usize, usize)> = talls[i]
                        .iter()
                        .enumerate()
                        .filter_map(|(k, t)| tall_index[j].get(psi.after(t).unwrap().assignment()).map(|&kk| (k, kk)))
                        .collect();
                    let mut joints = Vec::new();
                    for dj in crate::face::subsets(tj.inner_mask()) {
                        let nj = Necklace { carrier: tj.clone(), joints: dj };
                        for di in crate::face::subsets(ti.inner_mask()) {
                            let ni = Necklace { carrier: ti.clone(), joints: di };
                            if necklace_map_check(&ni, &nj, &psi) {
                                joints.push((di, dj));
                            }
                        }
                    }
                    if reduced {
                        let all = joints.clone();
                        joints.retain(|&(di, dj)| !all.iter().any(|&(a, b)| (a, b) != (di, dj) && a & !di == 0 && dj & !b == 0));
                    }
                    if !moved.is_empty() {
                        let joints = plans(&block_of, (i, ti), (j, tj), &psi, joints);
                        moves.push(Move { from: i, to: j, moved, joints });
                    }
                }
            }
            if reduced {
                let moved = (0..talls[i].len()).map(|k| (k, k)).collect();
                let joints = crate::face::subsets(ti.inner_mask())
                    .into_iter()
                    .flat_map(|d| crate::tree::members(d).map(move |e| (d, d & !crate::tree::bit(e))))
                    .collect();
                let psi = TreeMap::identity(ti.clone());
                let joints = plans(&block_of, (i, ti), (i, ti), &psi, joints);
                moves.push(Move { from: i, to: i, moved, joints });
            }
        }
        TauGeometry { arity, bound, carriers, talls, shapes, blocks, moves }
    }

    pub fn carriers(&self) -> usize {
        self.carriers.len()
    }
}

/// Partition all triples with carriers of at most `bound` edges.
pub fn tau_operations<X: DendroidalSet>(x: &X, arity: usize, bound: usize) -> TauResult<X::Cell> {
    tau_operations_in(&TauGeometry::new(arity, bound), x)
}

pub fn tau_operations_in<X: DendroidalSet>(g: &TauGeometry, x: &X) -> TauResult<X::Cell> {
    // triple (block, cell, k) gets id base + cell_index * talls[carrier].len() + k
    struct Block<C> {
        base: usize,
        /// sorted, so lookups are binary searches
        cells: Vec<NecklaceCell<C>>,
    }
    // dendrices depend only on the shape, so each bead shape is enumerated once
    let per_shape: Vec<Vec<(X::Cell, Vec<X::Cell>)>> = g
        .shapes
        .iter()
        .map(|s| x.dendrices(s).into_iter().map(|c| (c.clone(), x.coloring(s, &c))).collect())
        .collect();
    let mut sigs: Vec<Vec<X::Cell>> = Vec::new();
    let mut blocks: Vec<Block<X::Cell>> = Vec::with_capacity(g.blocks.len());
    for b in &g.blocks {
        let t = &g.carriers[b.carrier];
        let mut cells: Vec<(NecklaceCell<X::Cell>, Vec<X::Cell>)> = if t.is_stick() {
            x.dendrices(t).into_iter().map(|c| (NecklaceCell::Stick(c.clone()), vec![c])).collect()
        } else {
            assemble(&b.beads, &per_shape, t.len())
        };
        cells.sort_by(|a, b| a.0.cmp(&b.0));
        let base = sigs.len();
        for (_, colors) in &cells {
            for m in &g.talls[b.carrier] {
                sigs.push(m.assignment().iter().map(|&e| colors[e].clone()).collect());
            }
        }
        blocks.push(Block { base, cells: cells.into_iter().map(|c| c.0).collect() });
    }
    let mut uf = UnionFind::new(sigs.len());
    for mv in &g.moves {
        let (wi, wj) = (g.talls[mv.from].len(), g.talls[mv.to].len());
        for (bi, bj, plan) in &mv.joints {
            let target = &blocks[*bj];
            if target.cells.is_empty() {
                continue;
            }
            let source = &blocks[*bi];
            for (c, cell) in target.cells.iter().enumerate() {
                let p = source.cells.binary_search(&plan.apply(x, cell)).expect("pullback is a necklace cell");
                for &(k, kk) in &mv.moved {
                    uf.union(source.base + p * wi + k, target.base + c * wj + kk);
                }
            }
        }
    }
    let mut classes: BTreeMap<Vec<X::Cell>, usize> = BTreeMap::new();
    for id in 0..sigs.len() {
        if uf.find(id) == id {
            *classes.entry(sigs[id].clone()).or_default() += 1;
        }
    }
    TauResult { arity: g.arity, bound: g.bound, triples: sigs.len(), classes }
}

/// Necklace cells of a non-stick carrier with `len` edges, with their edge
/// colors: one cell per bead whose colorings agree on shared edges.
fn assemble<C: Clone + Eq>(beads: &[(usize, Vec<usize>)], per_shape: &[Vec<(C, Vec<C>)>], len: usize) -> Vec<(NecklaceCell<C>, Vec<C>)> {
    fn go<C: Clone + Eq>(
        i: usize,
        beads: &[(usize, Vec<usize>)],
        per_shape: &[Vec<(C, Vec<C>)>],
        col: &mut Vec<Option<C>>,
        pick: &mut Vec<C>,
        out: &mut Vec<(NecklaceCell<C>, Vec<C>)>,
    ) {
        let Some((shape, edges)) = beads.get(i) else {
            out.push((NecklaceCell::Beads(pick.clone()), col.iter().map(|c| c.clone().expect("beads cover the carrier")).collect()));
            return;
        };
        'cand: for (c, colors) in &per_shape[*shape] {
            let mut set = Vec::new();
            for (&e, k) in edges.iter().zip(colors) {
                match &col[e] {
                    Some(old) if old != k => {
                        for &s in &set {
                            col[s] = None;
                        }
                        continue 'cand;
                    }
                    Some(_) => {}
                    None => {
                        col[e] = Some(k.clone());
                        set.push(e);
                    }
                }
            }
            pick.push(c.clone());
            go(i + 1, beads, per_shape, col, pick, out);
            pick.pop();
            for &s in &set {
                col[s] = None;
            }
        }
    }
    let mut out = Vec::new();
    go(0, beads, per_shape, &mut vec![None; len], &mut Vec::new(), &mut out);
    out
}

/// `|X_c(C)|` for every coloring `c` of the corolla.
pub fn corolla_fibers<X: DendroidalSet>(x: &X, arity: usize) -> BTreeMap<Vec<X::Cell>, usize> {
    let c = corolla(arity);
    let mut out = BTreeMap::new();
    for d in x.dendrices(&c) {
        *out.entry(x.coloring(&c, &d)).or_default() += 1;
    }
    out
}
