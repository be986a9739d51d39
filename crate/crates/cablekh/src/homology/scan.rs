//! Crossing-by-crossing computation of Betti tables.
//!
//! Crossings are appended in an order that greedily minimizes the number of
//! open boundary edges. After each append every closed circle is replaced by
//! two degree-shifted generators (one when the circle is marked and the
//! reduced theory is requested), and invertible entries of the differential
//! are cancelled immediately. At the end all tangles are empty and no
//! differential survives, so the remaining generators are the homology.

use std::collections::{BTreeMap, BTreeSet};

use smallvec::SmallVec;

use super::cob::{cap_off, compose, fuse, glue_mor, saddle_parts, Comp, End, Fusion, Mor, Tangle};
use super::{BettiTable, HomologyError};
use crate::diagram::{BasePoint, Crossing, EdgeId, LinkDiagram};

/// Scan state bits fit in a u64 and deloop labels in a u128.
pub const SCAN_MAX_CROSSINGS: usize = 60;
pub const SCAN_MAX_FREE_LOOPS: usize = 8;

/// Generator name: the resolution bit per appended crossing plus the label
/// chosen at each deloop along its history (bit set = x).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
struct Key {
    state_len: u8,
    state: u64,
    label_len: u8,
    labels: u128,
}

impl Key {
    fn push_state(mut self, bit: bool) -> Key {
        debug_assert!((self.state_len as usize) < 64);
        if bit {
            self.state |= 1 << self.state_len;
        }
        self.state_len += 1;
        self
    }

    fn push_label(mut self, x: bool) -> Key {
        debug_assert!((self.label_len as usize) < 128);
        if x {
            self.labels |= 1 << self.label_len;
        }
        self.label_len += 1;
        self
    }

    fn weight(&self) -> i32 {
        self.state.count_ones() as i32
    }

    fn label_degree(&self) -> i32 {
        self.label_len as i32 - 2 * self.labels.count_ones() as i32
    }
}

struct Vertex {
    tng: Tangle,
    outs: BTreeMap<Key, Mor>,
    ins: BTreeSet<Key>,
}

struct ScanComplex {
    verts: BTreeMap<Key, Vertex>,
    reduced: bool,
}

impl ScanComplex {
    fn new(free_loops: usize, marked_loop: Option<usize>, reduced: bool) -> Self {
        let comps = (0..free_loops)
            .map(|i| Comp::Circle { marked: reduced && marked_loop == Some(i) })
            .collect();
        let (tng, _) = Tangle::sorted_from(comps);
        let mut verts = BTreeMap::new();
        verts.insert(
            Key::default(),
            Vertex { tng, outs: BTreeMap::new(), ins: BTreeSet::new() },
        );
        ScanComplex { verts, reduced }
    }

    fn num_verts(&self) -> usize {
        self.verts.len()
    }

    fn tangle(&self, k: &Key) -> &Tangle {
        &self.verts[k].tng
    }

    fn edge(&self, k: &Key, l: &Key) -> &Mor {
        &self.verts[k].outs[l]
    }

    fn has_edge(&self, k: &Key, l: &Key) -> bool {
        self.verts[k].outs.contains_key(l)
    }

    fn add_edge(&mut self, k: Key, l: Key, f: Mor) {
        debug_assert!(!f.is_zero());
        debug_assert!(!self.has_edge(&k, &l));
        self.verts.get_mut(&k).unwrap().outs.insert(l, f);
        self.verts.get_mut(&l).unwrap().ins.insert(k);
    }

    fn remove_edge(&mut self, k: &Key, l: &Key) -> Mor {
        self.verts.get_mut(l).unwrap().ins.remove(k);
        self.verts.get_mut(k).unwrap().outs.remove(l).unwrap()
    }

    fn remove_vertex(&mut self, k: &Key) {
        let v = self.verts.remove(k).unwrap();
        for j in v.ins {
            self.verts.get_mut(&j).unwrap().outs.remove(k);
        }
        for l in v.outs.keys() {
            self.verts.get_mut(l).unwrap().ins.remove(k);
        }
    }

    fn rename_vertex(&mut self, old: &Key, new: Key) {
        debug_assert_ne!(old, &new);
        let v = self.verts.remove(old).unwrap();
        for j in &v.ins {
            let f = self.verts.get_mut(j).unwrap().outs.remove(old).unwrap();
            self.verts.get_mut(j).unwrap().outs.insert(new, f);
        }
        for l in v.outs.keys() {
            let ins = &mut self.verts.get_mut(l).unwrap().ins;
            ins.remove(old);
            ins.insert(new);
        }
        self.verts.insert(new, v);
    }

    fn duplicate_vertex(&mut self, k: &Key, copy: Key) {
        let v = &self.verts[k];
        let (tng, ins, outs) = (v.tng.clone(), v.ins.clone(), v.outs.clone());
        for j in &ins {
            let f = self.verts[j].outs[k].clone();
            self.verts.get_mut(j).unwrap().outs.insert(copy, f);
        }
        for l in outs.keys() {
            self.verts.get_mut(l).unwrap().ins.insert(copy);
        }
        self.verts.insert(copy, Vertex { tng, outs, ins });
    }

    /// Appends one crossing: every vertex splits into its 0- and 1-child,
    /// edges are glued along the newly closed boundary edges, and a saddle
    /// connects the two children of each vertex.
    fn append(&mut self, x: &Crossing, open: &BTreeSet<EdgeId>, bp_edge: Option<EdgeId>) {
        let edges = x.edges();
        let mut glue: Vec<EdgeId> = Vec::new();
        for (i, &e) in edges.iter().enumerate() {
            if edges[..i].contains(&e) {
                continue;
            }
            let twice = edges.iter().filter(|&&f| f == e).count() == 2;
            if twice || open.contains(&e) {
                glue.push(e);
            }
        }
        let mark = |a: EdgeId, b: EdgeId| {
            bp_edge.is_some_and(|bp| (a == bp || b == bp) && !open.contains(&bp))
        };
        let arcs = |pairs: [(EdgeId, EdgeId); 2]| {
            [
                Comp::arc(pairs[0].0, pairs[0].1, mark(pairs[0].0, pairs[0].1)),
                Comp::arc(pairs[1].0, pairs[1].1, mark(pairs[1].0, pairs[1].1)),
            ]
        };
        let res = [arcs(x.zero_smoothing()), arcs(x.one_smoothing())];

        let old = std::mem::take(&mut self.verts);
        struct Prepared {
            combined: Vec<Comp>,
            fus: Fusion,
        }
        let mut prep: BTreeMap<(Key, usize), Prepared> = BTreeMap::new();
        for (&k, v) in &old {
            for r in 0..2 {
                let mut combined = v.tng.comps().to_vec();
                combined.extend_from_slice(&res[r]);
                let fus = fuse(&combined, &glue);
                prep.insert((k, r), Prepared { combined, fus });
            }
        }

        for ((k, r), p) in &prep {
            self.verts.insert(
                k.push_state(*r == 1),
                Vertex { tng: p.fus.tangle.clone(), outs: BTreeMap::new(), ins: BTreeSet::new() },
            );
        }
        for (k, v) in &old {
            for (l, f) in &v.outs {
                for r in 0..2 {
                    let ps = &prep[&(*k, r)];
                    let pt = &prep[&(*l, r)];
                    let parts = f.parts_extended(v.tng.len(), old[l].tng.len(), &res[r]);
                    let g = glue_mor(&parts, &ps.combined, &ps.fus, &pt.fus, &glue);
                    if !g.is_zero() {
                        self.add_edge(k.push_state(r == 1), l.push_state(r == 1), g);
                    }
                }
            }
            let n = v.tng.len() as u8;
            let parts = saddle_parts(&v.tng, [n, n + 1]);
            let p0 = &prep[&(*k, 0)];
            let p1 = &prep[&(*k, 1)];
            let g = glue_mor(&parts, &p0.combined, &p0.fus, &p1.fus, &glue);
            if !g.is_zero() {
                self.add_edge(k.push_state(false), k.push_state(true), g);
            }
        }
    }

    /// Splits off the first circle of a vertex. The x-labeled copy caps
    /// incoming edges plainly and outgoing edges with a dot; the 1-labeled
    /// copy does the opposite. A marked circle keeps only its x-copy when
    /// the reduced theory is being computed.
    fn deloop(&mut self, k: Key) -> SmallVec<[Key; 2]> {
        let v = &self.verts[&k];
        let r = v.tng.first_circle().expect("deloop needs a circle");
        let marked = v.tng.comps()[r].is_marked();
        let (new_tng, removal) = v.tng.without(r);

        let kx = k.push_label(true);
        self.rename_vertex(&k, kx);
        let mut keys: SmallVec<[Key; 2]> = SmallVec::new();
        keys.push(kx);
        if !(self.reduced && marked) {
            let k1 = k.push_label(false);
            self.duplicate_vertex(&kx, k1);
            keys.push(k1);
        }
        self.cap_vertex(kx, r as u8, false, true, &removal, &new_tng);
        if let Some(&k1) = keys.get(1) {
            self.cap_vertex(k1, r as u8, true, false, &removal, &new_tng);
        }
        keys
    }

    fn cap_vertex(
        &mut self,
        k: Key,
        comp: u8,
        death_dot: bool,
        birth_dot: bool,
        removal: &[Option<u8>],
        new_tng: &Tangle,
    ) {
        let ins: Vec<Key> = self.verts[&k].ins.iter().copied().collect();
        for j in ins {
            let f = self.remove_edge(&j, &k);
            let f = cap_off(&f, End::Tgt, comp, death_dot, removal);
            if !f.is_zero() {
                self.add_edge(j, k, f);
            }
        }
        let outs: Vec<Key> = self.verts[&k].outs.keys().copied().collect();
        for l in outs {
            let g = self.remove_edge(&k, &l);
            let g = cap_off(&g, End::Src, comp, birth_dot, removal);
            if !g.is_zero() {
                self.add_edge(k, l, g);
            }
        }
        self.verts.get_mut(&k).unwrap().tng = new_tng.clone();
    }

    /// Smallest-fill invertible edge incident to a vertex.
    fn find_invertible_at(&self, k: &Key) -> Option<(Key, Key)> {
        let v = &self.verts[k];
        let candidates = v
            .ins
            .iter()
            .map(|i| (*i, *k))
            .chain(v.outs.keys().map(|j| (*k, *j)));
        let mut best = None;
        let mut best_score = usize::MAX;
        for (i, j) in candidates {
            let f = &self.verts[&i].outs[&j];
            if f.is_invertible(self.tangle(&i), self.tangle(&j)) {
                let score =
                    (self.verts[&i].outs.len() - 1) * (self.verts[&j].ins.len() - 1);
                if score == 0 {
                    return Some((i, j));
                }
                if score < best_score {
                    best = Some((i, j));
                    best_score = score;
                }
            }
        }
        best
    }

    /// Gaussian cancellation of an invertible edge k0 -> k1.
    fn eliminate(&mut self, k0: &Key, k1: &Key) {
        let f_inv = self.edge(k0, k1).inverted();
        let t0 = self.tangle(k0).clone();
        let t1 = self.tangle(k1).clone();
        let v1_in: Vec<Key> = self.verts[k1].ins.iter().filter(|&j| j != k0).copied().collect();
        let v0_out: Vec<Key> = self.verts[k0].outs.keys().filter(|&l| l != k1).copied().collect();
        for w0 in &v1_in {
            for w1 in &v0_out {
                let b = self.edge(w0, k1);
                let half = compose(b, &f_inv, &t1, self.tangle(w0), &t0);
                if half.is_zero() {
                    continue;
                }
                let c = self.edge(k0, w1);
                let cab = compose(&half, c, &t0, self.tangle(w0), self.tangle(w1));
                if cab.is_zero() {
                    continue;
                }
                let mut d = if self.has_edge(w0, w1) {
                    self.remove_edge(w0, w1)
                } else {
                    Mor::zero()
                };
                d.add(cab);
                if !d.is_zero() {
                    self.add_edge(*w0, *w1, d);
                }
            }
        }
        self.remove_vertex(k0);
        self.remove_vertex(k1);
    }

    /// Deloops every circle, cancelling eagerly around each new vertex.
    fn deloop_and_cancel(&mut self, budget: usize) -> Result<(), HomologyError> {
        let mut work: BTreeSet<Key> = self
            .verts
            .iter()
            .filter(|(_, v)| v.tng.first_circle().is_some())
            .map(|(k, _)| *k)
            .collect();
        while let Some(k) = work.pop_first() {
            if !self.verts.contains_key(&k) || self.verts[&k].tng.first_circle().is_none() {
                continue;
            }
            for nk in self.deloop(k) {
                while self.verts.contains_key(&nk) {
                    match self.find_invertible_at(&nk) {
                        Some((i, j)) => self.eliminate(&i, &j),
                        None => break,
                    }
                }
                if self.verts.get(&nk).is_some_and(|v| v.tng.first_circle().is_some()) {
                    work.insert(nk);
                }
            }
            if self.num_verts() > budget {
                return Err(HomologyError::BudgetExceeded {
                    generators: self.num_verts(),
                    budget,
                });
            }
        }
        Ok(())
    }

    /// Cancels until no invertible edge remains anywhere.
    fn cancel_all(&mut self) {
        loop {
            let mut acted = false;
            let keys: Vec<Key> = self.verts.keys().copied().collect();
            for k in keys {
                while self.verts.contains_key(&k) {
                    match self.find_invertible_at(&k) {
                        Some((i, j)) => {
                            self.eliminate(&i, &j);
                            acted = true;
                        }
                        None => break,
                    }
                }
            }
            if !acted {
                break;
            }
        }
    }

    fn into_betti(
        self,
        n_pos: i32,
        n_neg: i32,
        reduced: bool,
    ) -> Result<BettiTable, HomologyError> {
        let mut ranks: BTreeMap<(i32, i32), usize> = BTreeMap::new();
        for (k, v) in &self.verts {
            if !v.tng.is_empty() || !v.outs.is_empty() {
                return Err(HomologyError::Internal(
                    "scan finished with unresolved tangles or differentials".into(),
                ));
            }
            let i = k.weight() - n_neg;
            let mut j = k.label_degree() + k.weight() + n_pos - 2 * n_neg;
            if reduced {
                j += 1;
            }
            *ranks.entry((i, j)).or_insert(0) += 1;
        }
        Ok(BettiTable::from_ranks(ranks))
    }
}

/// Order minimizing the open frontier, greedily; ties go to the lowest index.
pub fn greedy_order(d: &LinkDiagram) -> Vec<usize> {
    let n = d.num_crossings();
    let mut remaining: BTreeSet<usize> = (0..n).collect();
    let mut open: BTreeSet<EdgeId> = BTreeSet::new();
    let mut order = Vec::with_capacity(n);
    while !remaining.is_empty() {
        let t = *remaining
            .iter()
            .min_by_key(|&&t| frontier_after(d.crossings()[t].edges(), &open))
            .unwrap();
        remaining.remove(&t);
        apply_frontier(d.crossings()[t].edges(), &mut open);
        order.push(t);
    }
    order
}

fn frontier_after(edges: [EdgeId; 4], open: &BTreeSet<EdgeId>) -> usize {
    let mut f = open.len();
    for (i, &e) in edges.iter().enumerate() {
        if edges[..i].contains(&e) {
            continue;
        }
        if edges.iter().filter(|&&x| x == e).count() == 2 {
            continue;
        }
        if open.contains(&e) {
            f -= 1;
        } else {
            f += 1;
        }
    }
    f
}

fn apply_frontier(edges: [EdgeId; 4], open: &mut BTreeSet<EdgeId>) {
    for (i, &e) in edges.iter().enumerate() {
        if edges[..i].contains(&e) {
            continue;
        }
        if edges.iter().filter(|&&x| x == e).count() == 2 {
            continue;
        }
        if !open.remove(&e) {
            open.insert(e);
        }
    }
}

/// Betti table via the scanning pipeline. Equals the dense computation on
/// every input both can handle.
pub fn scan_compute(
    d: &LinkDiagram,
    reduced: bool,
    budget: usize,
) -> Result<BettiTable, HomologyError> {
    let n = d.num_crossings();
    if n > SCAN_MAX_CROSSINGS || d.num_free_loops() > SCAN_MAX_FREE_LOOPS {
        return Err(HomologyError::ScanLimit {
            crossings: n,
            free_loops: d.num_free_loops(),
        });
    }
    let basepoint = match (reduced, d.basepoint()) {
        (true, None) => return Err(HomologyError::Cube(crate::cube::CubeError::MissingBasepoint)),
        (true, bp) => bp,
        (false, _) => None,
    };
    let bp_edge = match basepoint {
        Some(BasePoint::Edge(e)) => Some(e),
        _ => None,
    };
    let marked_loop = match basepoint {
        Some(BasePoint::Loop(i)) => Some(i),
        _ => None,
    };

    let mut cx = ScanComplex::new(d.num_free_loops(), marked_loop, reduced);
    cx.deloop_and_cancel(budget)?;
    let mut open: BTreeSet<EdgeId> = BTreeSet::new();
    for t in greedy_order(d) {
        let x = &d.crossings()[t];
        cx.append(x, &open, bp_edge);
        apply_frontier(x.edges(), &mut open);
        cx.deloop_and_cancel(budget)?;
    }
    cx.cancel_all();
    let (n_pos, n_neg) = d.signed_crossing_counts();
    cx.into_betti(n_pos as i32, n_neg as i32, reduced)
}
