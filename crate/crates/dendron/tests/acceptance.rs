//! Acceptance run: one line per criterion. Pass a criterion number to run only that one.
//!
//! Exit status is 0 when every criterion passes, or when a criterion whose literal
//! statement is false still passes in its corrected form (reported as FAIL with
//! the analysis and a second line for the corrected claim).

mod common;

// the exhaustive runs spend much of their time allocating small vectors
#[global_allocator]
static ALLOC: mimalloc::MiMalloc = mimalloc::MiMalloc;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::oracle::{count_factorizations_with, FaceTable};
use dendron::face::{enumerate_faces, face_leq, face_map, subsets, FaceKind};
use dendron::map::all_maps;
use dendron::necklace::{necklace_map_check, Necklace};
use dendron::nw::{corestrict, NwLevel};
use dendron::presheaf::{segal_check, Dendrex, Presheaf};
use dendron::sset::iso_check;
use dendron::tau::{corolla_fibers, tau_operations_in, TauGeometry};
use dendron::tree::{bit, members, trees_up_to, EdgeSet, Face, Tree};
use dendron::w::{
    closed_form_mapping_space, corolla, edge_signature, mapping_space, normalize, random_move_into, verify_step, wx_simplices, zigzag,
    ClosedKind, Quadruple, Signature, Step,
};
use dendron::{factorize, TreeMap};

enum Verdict {
    Pass(String),
    Fail(String),
    /// The literal statement is false; `corrected` reports the repaired claim.
    Defect { analysis: String, corrected: Result<String, String> },
}

type Check = fn() -> Verdict;

fn tr(s: &str) -> Arc<Tree> {
    Arc::new(Tree::parse(s).unwrap())
}

fn trees(max: usize) -> Vec<Arc<Tree>> {
    trees_up_to(max).into_iter().map(Arc::new).collect()
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Verdict::Fail(format!($($fmt)+));
        }
    };
}

fn c1_factorization() -> Verdict {
    let ts = trees(6);
    let tables: Vec<FaceTable> = ts.iter().map(|t| FaceTable::new(t)).collect();
    let mut maps = 0usize;
    for s in &ts {
        for (t, table) in ts.iter().zip(&tables) {
            for m in all_maps(s, t) {
                maps += 1;
                let f = factorize(&m);
                ensure!(f.compose() == m, "factors of {} -> {} do not recompose", s.print(), t.print());
                let (iso, pd, pi, po) = (f.iso.classify(), f.pd.classify(), f.pi.classify(), f.po.classify());
                ensure!(
                    iso.iso && pd.degeneracy && pd.planar && pi.inner_face && pi.planar && po.outer_face && po.planar,
                    "factor classes wrong for {} -> {}",
                    s.print(),
                    t.print()
                );
                let n = count_factorizations_with(table, &m);
                ensure!(n == 1, "oracle finds {n} factorizations of {:?} : {} -> {}", m.pairs(), s.print(), t.print());
            }
        }
    }
    Verdict::Pass(format!("{} trees, {maps} maps, each with exactly one factor quadruple", ts.len()))
}

/// Colorings of `t2` induced by tall surjective maps `t2 -> t`.
fn degeneracy_colorings(t: &Arc<Tree>, tests: &[Arc<Tree>]) -> BTreeSet<(String, BTreeMap<String, String>)> {
    let mut out = BTreeSet::new();
    for s in tests {
        for m in all_maps(s, t) {
            if m.is_tall() && m.is_surjective() {
                out.insert((s.print(), (0..s.len()).map(|e| (s.name(e).to_string(), t.name(m.apply(e)).to_string())).collect()));
            }
        }
    }
    out
}

fn c2_segal() -> Verdict {
    let ts = trees(5);
    for s in &ts {
        let r = segal_check(&Presheaf::representable(s.clone()), 5);
        ensure!(r.pass, "Ω[{}] fails: {:?}", s.print(), r.witness);
    }
    let (mut passing, mut elsewhere) = (Vec::new(), Vec::new());
    let mut literal_ok = 0;
    let mut corrected_err = None;
    for t in ts.iter().filter(|t| t.vertex_count() >= 1) {
        let r = segal_check(&Presheaf::boundary(t.clone()), 5);
        let got: BTreeSet<_> = r.failures.iter().map(|f| (f.tree.clone(), f.coloring.clone())).collect();
        let leaf_root_only = r.failures.iter().all(|f| {
            let s = Tree::parse(&f.tree).unwrap();
            let img = |e| f.coloring[s.name(e)].as_str();
            let mut got: Vec<&str> = s.leaves().into_iter().map(img).collect();
            let mut want: Vec<&str> = t.leaves().into_iter().map(|e| t.name(e)).collect();
            got.sort();
            want.sort();
            img(s.root()) == t.name(t.root()) && got == want
        });
        if !r.pass && leaf_root_only {
            literal_ok += 1;
        } else if r.pass {
            passing.push(t.print());
        } else {
            elsewhere.push(t.print());
        }
        let want = if t.vertex_count() >= 2 { degeneracy_colorings(t, &ts) } else { BTreeSet::new() };
        if got != want && corrected_err.is_none() {
            corrected_err = Some(format!("∂Ω[{}]: failures {:?} expected {:?}", t.print(), got, want));
        }
    }
    if passing.is_empty() && elsewhere.is_empty() {
        return Verdict::Pass(format!("{} representables pass; {literal_ok} boundaries fail only at leaf-root colorings", ts.len()));
    }
    Verdict::Defect {
        analysis: format!(
            "∂Ω[T] satisfies the Segal condition for the trees {:?} (the condition is vacuous on corollas, \
             and ∂Ω[C_n] is the discrete set of colors); fails away from leaf-root colorings for {:?}; \
             the other {literal_ok} trees behave as stated",
            passing, elsewhere
        ),
        corrected: match corrected_err {
            None => Ok(format!(
                "{} representables pass; ∂Ω[T] passes iff T has one vertex, otherwise fails exactly at colorings induced by tall surjections onto T",
                ts.len()
            )),
            Some(e) => Err(e),
        },
    }
}

/// Outer faces that are beads of `(t, d)`, found without the necklace module.
fn oracle_beads(t: &Tree, d: EdgeSet) -> BTreeSet<Face> {
    let outer_j = t.leaf_mask() | bit(t.root()) | d;
    t.outer_faces()
        .into_iter()
        .filter(|b| b.edges.count_ones() > 1 || t.inputs(b.root()).map_or(false, |i| i.is_empty()) && b.leaves == 0)
        .filter(|b| b.closure_inner() & d == 0 && outer_j & bit(b.root()) != 0 && b.leaves & !outer_j == 0)
        .filter(|b| {
            // maximal: every edge of J on the boundary of the region is a leaf or root of b
            members(b.edges).all(|e| e == b.root() || b.leaves & bit(e) != 0 || outer_j & bit(e) == 0)
        })
        .collect()
}

fn oracle_member(t: &Tree, beads: &BTreeSet<Face>, u: &Face) -> bool {
    beads.iter().any(|b| face_leq(u, b)) || (beads.is_empty() && u.edge_set().count_ones() == 1 && t.len() == 1)
}

fn c3_necklace() -> Verdict {
    let ts = trees(6);
    let (mut necklaces, mut pairs) = (0, 0);
    for t in &ts {
        let faces = enumerate_faces(t, FaceKind::All);
        for d in subsets(t.inner_mask()) {
            let n = Necklace::new(t.clone(), d).unwrap();
            necklaces += 1;
            let beads: BTreeSet<Face> = n.beads().into_iter().collect();
            ensure!(beads == oracle_beads(t, d), "beads of {} with joints {d:b} disagree with the oracle", t.print());
            let inner_sum: u32 = beads.iter().map(|b| b.closure_inner().count_ones()).sum();
            ensure!(
                n.partition_holds() && t.len() as u32 == n.joint_edges().count_ones() + inner_sum,
                "edge partition fails for {} joints {d:b}",
                t.print()
            );
            for f in t.outer_faces() {
                let (nf, m) = n.restrict(&f).unwrap();
                for u in &faces {
                    pairs += 1;
                    let in_f = face_leq(u, &f);
                    let lhs = in_f && nf.contains(&corestrict(&face_map(t, u), &m));
                    let rhs = in_f && oracle_member(t, &beads, u);
                    ensure!(lhs == rhs, "intersection fails: {} joints {d:b}, F {:?}, U {:?}", t.print(), f, u);
                }
            }
        }
    }
    let ts5 = trees(5);
    let mut checked = 0usize;
    for s in &ts5 {
        for t in &ts5 {
            for phi in all_maps(s, t) {
                for d in subsets(s.inner_mask()) {
                    let n = Necklace::new(s.clone(), d).unwrap();
                    let bead_maps = n.bead_maps();
                    for d2 in subsets(t.inner_mask()) {
                        let n2 = Necklace::new(t.clone(), d2).unwrap();
                        let beads2 = oracle_beads(t, d2);
                        let direct = bead_maps.iter().all(|b| oracle_member(t, &beads2, &phi.after(b).unwrap().image_face()));
                        checked += 1;
                        ensure!(
                            necklace_map_check(&n, &n2, &phi) == direct,
                            "criterion and bead test disagree: {:?} {} {d:b} -> {} {d2:b}",
                            phi.pairs(),
                            s.print(),
                            t.print()
                        );
                    }
                }
            }
        }
    }
    Verdict::Pass(format!("{necklaces} necklaces, {pairs} (F, U) pairs, {checked} carrier-map checks"))
}

fn c4_figure() -> Verdict {
    let beads_text = ["a(e1(l1,l2),l3)", "b(f1(f2()))", "c(g1(),g2())", "d(c,h1(h2()))", "r(a,b,d)"];
    let b: Vec<Tree> = beads_text.iter().map(|s| Tree::parse(s).unwrap()).collect();
    let mut t = b[4].clone();
    for (i, at) in [(0, "a"), (1, "b"), (3, "d"), (2, "c")] {
        match t.graft(&b[i], at) {
            Ok(g) => t = g,
            Err(e) => return Verdict::Fail(format!("graft at {at}: {e}")),
        }
    }
    let expected = Tree::parse("r(a(e1(l1,l2),l3),b(f1(f2())),d(c(g1(),g2()),h1(h2())))").unwrap();
    ensure!(t.print() == expected.print() && t.canonical() == expected.canonical(), "grafting gives {}", t.print());
    let t = Arc::new(t);
    let n = Necklace::from_names(t.clone(), &["a", "b", "c", "d"]).unwrap();
    let printed: Vec<String> = n.beads().iter().map(|f| t.face_tree(f).0.print()).collect();
    let want: Vec<String> = [4, 0, 1, 3, 2].iter().map(|&i| beads_text[i].to_string()).collect();
    ensure!(printed == want, "beads {printed:?}");
    ensure!(n.partition_holds(), "edge partition fails");
    let sub = Tree::parse("r(a(e1,l3),b(f1(f2)),d(c,h1(h2)))").unwrap();
    let Some(f) = dendron::json::face_from_tree(&t, &sub) else { return Verdict::Fail("face F not found".into()) };
    ensure!(f.is_outer(), "F is not outer");
    let (nf, _) = n.restrict(&f).unwrap();
    let got: Vec<String> = nf.beads().iter().map(|b| nf.carrier.face_tree(b).0.print()).collect();
    let want = ["r(a,b,d)", "a(e1,l3)", "b(f1(f2))", "d(c,h1(h2))"];
    ensure!(got == want, "restricted beads {got:?}");
    ensure!(!got.contains(&beads_text[2].to_string()), "T3 survives");
    Verdict::Pass(format!("T = {}; beads after restriction {:?}", t.print(), got))
}

fn c5_nw_segal() -> Verdict {
    let ts = trees(5);
    let mut runs = 0;
    for t in &ts {
        let base = NwLevel::tree(t.clone(), 0);
        for level in 0..=3 {
            let mut xs = vec![base.sibling(None, level)];
            for d in subsets(t.inner_mask()) {
                Necklace::new(t.clone(), d).unwrap();
                xs.push(base.sibling(Some(d), level));
            }
            for x in xs {
                runs += 1;
                let r = segal_check(&x, 5);
                ensure!(r.pass, "NW over {} joints {:?} level {level}: {:?}", t.print(), x.joints, r.witness);
            }
        }
    }
    Verdict::Pass(format!("{runs} (base, level) pairs pass on test trees up to 5 edges"))
}

fn c6_closed_forms() -> Verdict {
    let mut spaces = 0;
    for u in trees(5).into_iter().filter(|u| u.inner_edges().len() <= 3) {
        let mut kinds = vec![(Presheaf::representable(u.clone()), ClosedKind::Representable), (Presheaf::boundary(u.clone()), ClosedKind::Boundary)];
        for e in subsets(u.inner_mask()).into_iter().filter(|&e| e != 0) {
            kinds.push((Presheaf::horn(u.clone(), e), ClosedKind::Horn(e)));
        }
        for sig in signatures(&u) {
            for (x, kind) in &kinds {
                spaces += 1;
                let got = match mapping_space(x, &edge_signature(&sig), u.len()) {
                    Ok(s) => s,
                    Err(e) => return Verdict::Fail(format!("{} {:?}: {e}", u.print(), kind)),
                };
                if let Err(e) = got.check() {
                    return Verdict::Fail(format!("{} {:?}: {e}", u.print(), kind));
                }
                let want = closed_form_mapping_space(*kind, &u, &sig);
                ensure!(
                    iso_check(&got, &want).is_some(),
                    "{} {:?} sig {:?}: {:?} vs closed form {:?}",
                    u.print(),
                    kind,
                    sig,
                    got.counts(),
                    want.counts()
                );
            }
        }
    }
    let u = tr("r(c(a,b),d,e())");
    let sig = dendron::w::leaf_root_signature(&u);
    let c = bit(u.edge("c").unwrap());
    let mut vectors = Vec::new();
    for x in [Presheaf::representable(u.clone()), Presheaf::boundary(u.clone()), Presheaf::horn(u.clone(), c)] {
        let mut v = mapping_space(&x, &edge_signature(&sig), u.len()).unwrap().counts();
        v.resize(3, 0);
        vectors.push(v);
    }
    ensure!(vectors == [vec![4, 5, 2], vec![4, 4, 0], vec![4, 3, 0]], "leaf-root vectors {vectors:?}");
    Verdict::Pass(format!("{spaces} spaces iso to closed forms; leaf-root vectors {vectors:?}"))
}

/// Every signature realized by a map from a corolla, plus a few that are not.
fn signatures(u: &Arc<Tree>) -> Vec<Signature<usize>> {
    let mut out = Vec::new();
    for n in 0..=u.len() {
        let c = corolla(n);
        let mut seen = BTreeSet::new();
        for m in all_maps(&c, u) {
            let a = m.assignment().to_vec();
            if seen.insert(a.clone()) {
                out.push(Signature { leaves: a[1..].to_vec(), root: a[0] });
            }
        }
    }
    // unrealizable: a leaf as root over the root, and a repeated leaf
    if let Some(&l) = u.leaves().first() {
        out.push(Signature { leaves: vec![0], root: l });
        out.push(Signature { leaves: vec![l, l], root: 0 });
    }
    out
}

fn follows(a: &Quadruple<Dendrex>, b: &Quadruple<Dendrex>, steps: &[Step<Dendrex>]) -> bool {
    let mut cur = a.clone();
    for s in steps {
        if s.from == cur {
            cur = s.to.clone();
        } else if s.to == cur {
            cur = s.from.clone();
        } else {
            return false;
        }
    }
    cur == *b
}

fn c7_normal_forms() -> Verdict {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let u = tr("r(c(a,b),d(e))");
    let c = bit(u.edge("c").unwrap());
    let xs = [
        Presheaf::representable(u.clone()),
        Presheaf::boundary(u.clone()),
        Presheaf::horn(u.clone(), c),
        Presheaf::segal_core(u.clone()),
        Presheaf::necklace(u.clone(), c),
    ];
    let sources = [corolla(1), corolla(2), corolla(3), tr("x(y(z,w))"), tr("x(y,z(w))")];
    let mut pools: Vec<(usize, Vec<Quadruple<Dendrex>>)> = Vec::new();
    for (i, x) in xs.iter().enumerate() {
        for s in &sources {
            for level in 0..=2 {
                let qs = wx_simplices(x, s, level, 5, false, None);
                if !qs.is_empty() {
                    pools.push((i, qs));
                }
            }
        }
    }
    ensure!(!pools.is_empty(), "no normal forms generated");
    let (mut quads, mut moves, mut zigzags) = (0, 0, 0);
    while quads < 1000 {
        let (i, pool) = &pools[rng.gen_range(0..pools.len())];
        let x = &xs[*i];
        let q0 = &pool[rng.gen_range(0..pool.len())];
        ensure!(normalize(x, q0) == *q0, "normal form is not fixed: {:?}", q0.chain);
        let mut ends = Vec::new();
        for _ in 0..2 {
            let mut cur = q0.clone();
            for _ in 0..rng.gen_range(1..=4) {
                if let Some(step) = random_move_into(x, &cur, &mut rng) {
                    if let Err(e) = verify_step(x, &step) {
                        return Verdict::Fail(format!("generated move is not a move: {e}"));
                    }
                    moves += 1;
                    ensure!(normalize(x, &step.from) == normalize(x, &step.to), "normal form changes along a move");
                    cur = step.from;
                }
            }
            quads += 1;
            let nf = normalize(x, &cur);
            ensure!(nf == *q0, "normal form of a moved quadruple differs from its origin");
            ensure!(normalize(x, &nf) == nf, "normalize is not idempotent");
            ends.push(cur);
        }
        match zigzag(x, &ends[0], &ends[1], 64) {
            Some(path) => {
                for s in &path {
                    if let Err(e) = verify_step(x, s) {
                        return Verdict::Fail(format!("zigzag step is not a move: {e}"));
                    }
                }
                ensure!(follows(&ends[0], &ends[1], &path), "zigzag does not connect its ends");
                zigzags += 1;
            }
            None => return Verdict::Fail("no zigzag between quadruples with equal normal forms".into()),
        }
    }
    Verdict::Pass(format!("{quads} quadruples, {moves} moves, {zigzags} zigzags"))
}

fn c8_tau() -> Verdict {
    let ts = trees(5);
    let max_arity = ts.iter().map(|t| t.leaves().len()).max().unwrap();
    let geoms: Vec<TauGeometry> = (0..=max_arity).map(|n| TauGeometry::new(n, 6)).collect();
    let mut runs = 0;
    for t in &ts {
        let rep = Presheaf::representable(t.clone());
        for g in &geoms {
            let fibers = corolla_fibers(&rep, g.arity);
            let segal = tau_operations_in(g, &rep);
            ensure!(segal.classes == fibers, "τΩ[{}] arity {}: {:?} vs {:?}", t.print(), g.arity, segal.classes, fibers);
            for d in subsets(t.inner_mask()) {
                let x = Presheaf::necklace(t.clone(), d);
                let got = tau_operations_in(g, &x);
                runs += 1;
                ensure!(got.classes == fibers, "τΩ[n] on {} joints {d:b} arity {}: {:?} vs {:?}", t.print(), g.arity, got.classes, fibers);
            }
        }
    }
    for n in 0..=3 {
        let x = Presheaf::boundary(corolla(n));
        for g in &geoms {
            ensure!(tau_operations_in(g, &x).classes == corolla_fibers(&x, g.arity), "τ∂Ω[C_{n}] arity {}", g.arity);
        }
    }
    Verdict::Pass(format!("{runs} necklace runs at carrier bound 6 match Ω(T) fibers; representables and ∂Ω[C_n] match |X_c(C)|"))
}

fn random_map(rng: &mut StdRng, pool: &[Arc<Tree>], from: &Arc<Tree>) -> Option<TreeMap> {
    for _ in 0..20 {
        let t = &pool[rng.gen_range(0..pool.len())];
        let ms = all_maps(from, t);
        if !ms.is_empty() {
            return Some(ms[rng.gen_range(0..ms.len())].clone());
        }
    }
    None
}

fn random_into(rng: &mut StdRng, pool: &[Arc<Tree>], to: &Arc<Tree>) -> Option<TreeMap> {
    for _ in 0..20 {
        let s = &pool[rng.gen_range(0..pool.len())];
        let ms = all_maps(s, to);
        if !ms.is_empty() {
            return Some(ms[rng.gen_range(0..ms.len())].clone());
        }
    }
    None
}

fn c9_functoriality() -> Verdict {
    let mut rng = StdRng::seed_from_u64(0xf00d);
    let small = trees(4);
    let mid = trees(5);
    let mut done = 0;
    while done < 500 {
        let t = mid[rng.gen_range(0..mid.len())].clone();
        let Some(phi) = random_into(&mut rng, &small, &t) else { continue };
        let d = subsets(t.inner_mask());
        let d = d[rng.gen_range(0..d.len())];
        let level = rng.gen_range(0..=3);
        let strings = NwLevel::necklace(&Necklace::new(t.clone(), d).unwrap(), level).over(&phi);
        let w = strings[rng.gen_range(0..strings.len())].clone();
        let Some(psi1) = random_into(&mut rng, &small, phi.source()) else { continue };
        let Some(psi2) = random_into(&mut rng, &small, psi1.source()) else { continue };
        let Some(g1) = random_map(&mut rng, &mid, &t) else { continue };
        let Some(g2) = random_map(&mut rng, &mid, g1.target()) else { continue };
        done += 1;
        let p = w.pullback(&psi1);
        ensure!(p == w.pullback_by_diagram(&psi1), "pullback forms differ");
        ensure!(w.pullback(&psi1.after(&psi2).unwrap()) == p.pullback(&psi2), "pullback is not functorial");
        let q = w.pushforward(&g1);
        ensure!(q == w.pushforward_by_diagram(&g1), "pushforward forms differ");
        ensure!(w.pushforward(&g2.after(&g1).unwrap()) == q.pushforward(&g2), "pushforward is not functorial");
        ensure!(q.pullback(&psi1) == p.pushforward(&g1), "pullback and pushforward do not commute");
        ensure!(p.is_valid(Some(d)) && q.is_valid(None), "results are not strings");
        for i in 0..=level {
            ensure!(w.degeneracy(i).unwrap().pullback(&psi1) == p.degeneracy(i).unwrap(), "pullback misses s_{i}");
            ensure!(w.degeneracy(i).unwrap().pushforward(&g1) == q.degeneracy(i).unwrap(), "pushforward misses s_{i}");
            if level > 0 {
                ensure!(w.face(i).unwrap().pullback(&psi1) == p.face(i).unwrap(), "pullback misses d_{i}");
                ensure!(w.face(i).unwrap().pushforward(&g1) == q.face(i).unwrap(), "pushforward misses d_{i}");
            }
        }
        // every necklace on the target that g1 maps into keeps the string
        let t2 = g1.target();
        let n = Necklace::new(t.clone(), d).unwrap();
        for d2 in subsets(t2.inner_mask()) {
            let n2 = Necklace::new(t2.clone(), d2).unwrap();
            if necklace_map_check(&n, &n2, &g1) {
                ensure!(q.is_valid(Some(d2)), "pushforward leaves NW(n') for {} -> {}", t.print(), t2.print());
            }
        }
    }
    Verdict::Pass(format!("{done} random configurations"))
}

fn main() {
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let criteria: [(usize, &str, u64, Check); 9] = [
        (1, "factorization uniqueness", 60, c1_factorization),
        (2, "strict Segal for representables and boundaries", 60, c2_segal),
        (3, "necklace calculus", 120, c3_necklace),
        (4, "encoded necklace reproduction", 1, c4_figure),
        (5, "NW levelwise Segal", 120, c5_nw_segal),
        (6, "closed-form mapping spaces", 300, c6_closed_forms),
        (7, "normal-form soundness and completeness", 300, c7_normal_forms),
        (8, "tau coherence", 120, c8_tau),
        (9, "functoriality squares", 60, c9_functoriality),
    ];
    let mut bad = 0;
    for (k, name, budget, f) in criteria {
        if !only.is_empty() && !only.contains(&k) {
            continue;
        }
        let start = Instant::now();
        let v = f();
        let secs = start.elapsed();
        let over = secs > Duration::from_secs(budget);
        let time = format!("{:.1}s of {budget}s{}", secs.as_secs_f64(), if over { ", over budget" } else { "" });
        match v {
            Verdict::Pass(d) if !over => println!("criterion {k} PASS  {name}: {d} ({time})"),
            Verdict::Pass(d) => {
                bad += 1;
                println!("criterion {k} FAIL  {name}: {d} ({time})")
            }
            Verdict::Fail(d) => {
                bad += 1;
                println!("criterion {k} FAIL  {name}: {d} ({time})")
            }
            Verdict::Defect { analysis, corrected } => {
                println!("criterion {k} FAIL  {name}: statement does not hold as written; {analysis} ({time})");
                match corrected {
                    Ok(d) if !over => println!("criterion {k} corrected PASS  {d}"),
                    Ok(d) => {
                        bad += 1;
                        println!("criterion {k} corrected FAIL  {d} (over budget)")
                    }
                    Err(d) => {
                        bad += 1;
                        println!("criterion {k} corrected FAIL  {d}")
                    }
                }
            }
        }
    }
    if bad > 0 {
        std::process::exit(1);
    }
}
