//! Finite simplicial sets stored by their non-degenerate cells.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

/// A possibly degenerate simplex: a non-degenerate cell pulled back along a
/// monotone surjection `[m] -> [dim cell]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub cell: usize,
    pub surj: Vec<usize>,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.surj.len() - 1
    }

    /// Positions `j` with `surj[j] == surj[j+1]`: the degeneracy word.
    pub fn deg(&self) -> Vec<usize> {
        (0..self.surj.len().saturating_sub(1)).filter(|&j| self.surj[j] == self.surj[j + 1]).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    /// Dimension of each cell.
    pub dims: Vec<usize>,
    pub labels: Vec<String>,
    /// `faces[c][i] = d_i c`, for cells of positive dimension.
    pub faces: Vec<Vec<Simplex>>,
}

impl SimplicialSet {
    pub fn empty() -> SimplicialSet {
        SimplicialSet { dims: vec![], labels: vec![], faces: vec![] }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Non-degenerate cell counts by dimension.
    pub fn counts(&self) -> Vec<usize> {
        let top = self.dims.iter().max().map(|d| d + 1).unwrap_or(0);
        let mut v = vec![0; top];
        for &d in &self.dims {
            v[d] += 1;
        }
        v
    }

    pub fn cells_of_dim(&self, d: usize) -> Vec<usize> {
        (0..self.len()).filter(|&c| self.dims[c] == d).collect()
    }

    pub fn nondegenerate(&self, c: usize) -> Simplex {
        Simplex { cell: c, surj: (0..=self.dims[c]).collect() }
    }

    /// `d_i` of any simplex.
    pub fn face_of(&self, x: &Simplex, i: usize) -> Simplex {
        let mut s = x.surj.clone();
        let v = s.remove(i);
        if s.contains(&v) {
            return Simplex { cell: x.cell, surj: s };
        }
        // the value v disappeared: apply d_v to the cell
        let inner = &self.faces[x.cell][v];
        let squeezed: Vec<usize> = s.iter().map(|&w| if w > v { w - 1 } else { w }).collect();
        Simplex { cell: inner.cell, surj: squeezed.iter().map(|&w| inner.surj[w]).collect() }
    }

    /// `d_i d_j = d_{j-1} d_i` for `i < j` on every cell, and referenced cells exist.
    pub fn check(&self) -> Result<(), String> {
        for c in 0..self.len() {
            let d = self.dims[c];
            if self.faces[c].len() != if d == 0 { 0 } else { d + 1 } {
                return Err(format!("cell {c} has {} faces", self.faces[c].len()));
            }
            for f in &self.faces[c] {
                if f.cell >= self.len() || f.dim() + 1 != d || self.dims[f.cell] != *f.surj.last().unwrap() {
                    return Err(format!("bad face of cell {c}"));
                }
            }
            if d < 2 {
                continue;
            }
            let x = self.nondegenerate(c);
            for j in 0..=d {
                for i in 0..j {
                    let a = self.face_of(&self.face_of(&x, j), i);
                    let b = self.face_of(&self.face_of(&x, i), j - 1);
                    if a != b {
                        return Err(format!("simplicial identity fails on cell {c} at ({i},{j})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Build from chains in some finite set: `faces(chain, i)` must return a weakly
    /// increasing chain whose distinct entries form another listed chain.
    pub fn from_chains<K: Ord + Clone>(chains: Vec<K>, label: impl Fn(&K) -> String, dim: impl Fn(&K) -> usize, face: impl Fn(&K, usize) -> (K, Vec<usize>)) -> Result<SimplicialSet, String> {
        let mut chains = chains;
        chains.sort_by(|a, b| (dim(a), a).cmp(&(dim(b), b)));
        chains.dedup();
        let index: BTreeMap<K, usize> = chains.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let mut faces = Vec::new();
        for k in &chains {
            let d = dim(k);
            let mut fs = Vec::new();
            if d > 0 {
                for i in 0..=d {
                    let (nd, surj) = face(k, i);
                    let cell = *index.get(&nd).ok_or_else(|| format!("face {i} of {} is not a listed cell", label(k)))?;
                    fs.push(Simplex { cell, surj });
                }
            }
            faces.push(fs);
        }
        Ok(SimplicialSet { dims: chains.iter().map(&dim).collect(), labels: chains.iter().map(&label).collect(), faces })
    }

    /// Stable JSON: cells by dimension and their faces.
    pub fn to_json(&self) -> Value {
        let id = |c: usize| format!("{}:{}", self.dims[c], self.cells_of_dim(self.dims[c]).iter().position(|&x| x == c).unwrap());
        let mut cells: BTreeMap<String, Vec<String>> = BTreeMap::new();
        let mut faces: BTreeMap<String, Value> = BTreeMap::new();
        let mut labels: BTreeMap<String, String> = BTreeMap::new();
        for c in 0..self.len() {
            cells.entry(self.dims[c].to_string()).or_default().push(id(c));
            labels.insert(id(c), self.labels[c].clone());
            if self.dims[c] > 0 {
                let fs: Vec<Value> = self.faces[c].iter().map(|f| json!({"deg": f.deg(), "cell": id(f.cell)})).collect();
                faces.insert(id(c), Value::Array(fs));
            }
        }
        json!({"cells": cells, "faces": faces, "labels": labels})
    }

    pub fn from_json(v: &Value) -> Result<SimplicialSet, String> {
        let cells = v.get("cells").and_then(Value::as_object).ok_or("missing cells")?;
        let mut ids: Vec<(usize, String)> = Vec::new();
        for (d, list) in cells {
            let d: usize = d.parse().map_err(|_| format!("bad dimension {d}"))?;
            for c in list.as_array().ok_or("cells must be lists")? {
                ids.push((d, c.as_str().ok_or("cell ids are strings")?.to_string()));
            }
        }
        let index: HashMap<String, usize> = ids.iter().enumerate().map(|(i, (_, s))| (s.clone(), i)).collect();
        let empty = serde_json::Map::new();
        let faces_v = v.get("faces").and_then(Value::as_object).unwrap_or(&empty);
        let labels_v = v.get("labels").and_then(Value::as_object);
        let mut faces = Vec::new();
        for (d, id) in &ids {
            let mut fs = Vec::new();
            if *d > 0 {
                for f in faces_v.get(id).and_then(Value::as_array).ok_or(format!("no faces for {id}"))? {
                    let cell = *index.get(f["cell"].as_str().unwrap_or("")).ok_or(format!("unknown face cell in {id}"))?;
                    let deg: Vec<usize> = f["deg"].as_array().ok_or("deg must be a list")?.iter().filter_map(Value::as_u64).map(|x| x as usize).collect();
                    // rebuild the surjection from the repeated positions
                    let mut surj = Vec::with_capacity(*d);
                    let mut val = 0;
                    for j in 0..*d {
                        surj.push(val);
                        if !deg.contains(&j) {
                            val += 1;
                        }
                    }
                    fs.push(Simplex { cell, surj });
                }
            }
            faces.push(fs);
        }
        let labels = ids
            .iter()
            .map(|(_, id)| labels_v.and_then(|l| l.get(id)).and_then(Value::as_str).unwrap_or(id).to_string())
            .collect();
        let s = SimplicialSet { dims: ids.iter().map(|(d, _)| *d).collect(), labels, faces };
        s.check()?;
        Ok(s)
    }

    /// 1-skeleton in DOT: vertices, and an arc `d_1 e -> d_0 e` per edge.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph sset {\n");
        for c in self.cells_of_dim(0) {
            out.push_str(&format!("  v{c} [label={:?}];\n", self.labels[c]));
        }
        for c in self.cells_of_dim(1) {
            let (a, b) = (self.faces[c][1].cell, self.faces[c][0].cell);
            out.push_str(&format!("  v{a} -> v{b} [label={:?}];\n", self.labels[c]));
        }
        out.push_str("}\n");
        out
    }
}

/// A finite poset by its order relation.
pub fn nerve_of_poset(n: usize, leq: impl Fn(usize, usize) -> bool, label: impl Fn(usize) -> String) -> SimplicialSet {
    let lt = |a: usize, b: usize| a != b && leq(a, b);
    let mut chains: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut frontier = chains.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for c in &frontier {
            for j in 0..n {
                if lt(*c.last().unwrap(), j) {
                    let mut d = c.clone();
                    d.push(j);
                    next.push(d);
                }
            }
        }
        chains.extend(next.iter().cloned());
        frontier = next;
    }
    SimplicialSet::from_chains(
        chains,
        |c| c.iter().map(|&i| label(i)).collect::<Vec<_>>().join("<"),
        |c| c.len() - 1,
        |c, i| {
            let mut d = c.clone();
            d.remove(i);
            let k = d.len();
            (d, (0..k).collect())
        },
    )
    .expect("chains are closed under deletion")
}

fn subset_label(m: u64, k: usize) -> String {
    let items: Vec<String> = (0..k).filter(|i| m >> i & 1 == 1).map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// The nerve of the Boolean lattice on `k` elements.
pub fn cube(k: usize) -> SimplicialSet {
    nerve_of_poset(1 << k, |a, b| a & !b == 0, |m| subset_label(m as u64, k))
}

/// Domain of `({0,1} -> Δ[1])^{□b} □ ({1} -> Δ[1])^{□e}`, inside `cube(b + e)`:
/// chains constant on some boundary axis, or containing some endpoint axis throughout.
pub fn pushout_product_domain(b: usize, e: usize) -> SimplicialSet {
    let k = b + e;
    let full = cube(k);
    let keep = |c: usize| -> bool {
        let chain = chain_of(&full, c);
        let first = chain[0];
        let last = *chain.last().unwrap();
        (0..b).any(|a| (first >> a & 1) == (last >> a & 1)) || (b..k).any(|a| first >> a & 1 == 1)
    };
    full.subcomplex(keep)
}

/// Vertices (as bitmasks) of a cube cell, from its label.
fn chain_of(s: &SimplicialSet, c: usize) -> Vec<usize> {
    s.labels[c]
        .split('<')
        .map(|part| part.trim_matches(|ch| ch == '{' || ch == '}').split(',').filter(|x| !x.is_empty()).fold(0usize, |m, x| m | 1 << x.parse::<usize>().unwrap()))
        .collect()
}

impl SimplicialSet {
    /// Cells satisfying `keep`; must be closed under faces.
    pub fn subcomplex(&self, keep: impl Fn(usize) -> bool) -> SimplicialSet {
        let kept: Vec<usize> = (0..self.len()).filter(|&c| keep(c)).collect();
        let pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        SimplicialSet {
            dims: kept.iter().map(|&c| self.dims[c]).collect(),
            labels: kept.iter().map(|&c| self.labels[c].clone()).collect(),
            faces: kept
                .iter()
                .map(|&c| self.faces[c].iter().map(|f| Simplex { cell: *pos.get(&f.cell).expect("not closed under faces"), surj: f.surj.clone() }).collect())
                .collect(),
        }
    }
}

/// Isomorphism search: a dimension-preserving bijection of cells commuting with faces.
pub fn iso_check(a: &SimplicialSet, b: &SimplicialSet) -> Option<Vec<usize>> {
    if a.counts() != b.counts() {
        return None;
    }
    // cofaces per cell, for degree profiles
    let profile = |s: &SimplicialSet| -> Vec<(usize, Vec<usize>)> {
        let mut up = vec![vec![0usize; s.counts().len() + 1]; s.len()];
        for c in 0..s.len() {
            for f in &s.faces[c] {
                up[f.cell][s.dims[c]] += 1;
            }
        }
        (0..s.len()).map(|c| (s.dims[c], up[c].clone())).collect()
    };
    let (pa, pb) = (profile(a), profile(b));
    // assign top-dimensional cells first: faces then follow
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by_key(|&c| std::cmp::Reverse(a.dims[c]));
    let mut map = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    let mut trail = Vec::new();
    struct Ctx<'a> {
        a: &'a SimplicialSet,
        b: &'a SimplicialSet,
        pa: Vec<(usize, Vec<usize>)>,
        pb: Vec<(usize, Vec<usize>)>,
    }
    /// Assign `x -> y` and everything it forces; false on conflict (partial work stays on the trail).
    fn assign(cx: &Ctx, x: usize, y: usize, map: &mut [usize], used: &mut [bool], trail: &mut Vec<usize>) -> bool {
        let mut todo = vec![(x, y)];
        while let Some((x, y)) = todo.pop() {
            if map[x] == y {
                continue;
            }
            if map[x] != usize::MAX || used[y] || cx.pa[x] != cx.pb[y] {
                return false;
            }
            map[x] = y;
            used[y] = true;
            trail.push(x);
            for (fa, fb) in cx.a.faces[x].iter().zip(&cx.b.faces[y]) {
                if fa.surj != fb.surj {
                    return false;
                }
                todo.push((fa.cell, fb.cell));
            }
        }
        true
    }
    fn go(i: usize, order: &[usize], cx: &Ctx, map: &mut Vec<usize>, used: &mut Vec<bool>, trail: &mut Vec<usize>) -> bool {
        let Some(&c) = order.get(i) else { return true };
        if map[c] != usize::MAX {
            return go(i + 1, order, cx, map, used, trail);
        }
        for t in 0..cx.b.len() {
            if used[t] || cx.pa[c] != cx.pb[t] {
                continue;
            }
            let mark = trail.len();
            if assign(cx, c, t, map, used, trail) && go(i + 1, order, cx, map, used, trail) {
                return true;
            }
            while trail.len() > mark {
                let x = trail.pop().unwrap();
                used[map[x]] = false;
                map[x] = usize::MAX;
            }
        }
        false
    }
    let cx = Ctx { a, b, pa, pb };
    if go(0, &order, &cx, &mut map, &mut used, &mut trail) {
        Some(map)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_counts() {
        assert_eq!(cube(0).counts(), vec![1]);
        assert_eq!(cube(1).counts(), vec![2, 1]);
        assert_eq!(cube(2).counts(), vec![4, 5, 2]);
        assert_eq!(cube(3).counts(), vec![8, 19, 18, 6]);
        for k in 0..4 {
            cube(k).check().unwrap();
        }
    }

    #[test]
    fn domains() {
        assert_eq!(pushout_product_domain(1, 0).counts(), vec![2]);
        assert_eq!(pushout_product_domain(2, 0).counts(), vec![4, 4]);
        assert_eq!(pushout_product_domain(1, 1).counts(), vec![4, 3]);
        assert!(pushout_product_domain(0, 0).is_empty());
        assert_eq!(pushout_product_domain(0, 1).counts(), vec![1]);
    }

    #[test]
    fn isos() {
        let c2 = cube(2);
        assert!(iso_check(&c2, &c2).is_some());
        let chain = nerve_of_poset(2, |a, b| a <= b, |i| i.to_string());
        assert!(iso_check(&cube(1), &chain).is_some());
        assert!(iso_check(&c2, &pushout_product_domain(2, 0)).is_none());
        // two squares glued differently: a 3-chain vs the square's diagonal triangle count
        let tri = nerve_of_poset(3, |a, b| a <= b, |i| i.to_string());
        assert!(iso_check(&tri, &pushout_product_domain(1, 1)).is_none());
    }

    #[test]
    fn json_round_trip() {
        let c = cube(2);
        let back = SimplicialSet::from_json(&c.to_json()).unwrap();
        assert!(iso_check(&c, &back).is_some());
        assert_eq!(c.to_dot().matches("->").count(), 5);
    }
}
