//! Crossingless tangles and GF(2) linear combinations of cobordisms between
//! them, the morphisms of the scanning pipeline.
//!
//! A cobordism is stored as a partition of the source and target components
//! into connected surface pieces, each carrying a dot count and an Euler
//! characteristic. Over GF(2) a piece vanishes as soon as it has two dots or
//! positive genus, and a closed piece evaluates to 1 exactly when it is a
//! once-dotted sphere; no other relations are needed.

use smallvec::SmallVec;

use crate::diagram::EdgeId;

/// A connected piece of a crossingless tangle: an open arc between two
/// boundary edges or a closed circle. `marked` records whether the piece
/// has absorbed the basepoint edge.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Comp {
    Arc { lo: EdgeId, hi: EdgeId, marked: bool },
    Circle { marked: bool },
}

impl Comp {
    pub fn arc(a: EdgeId, b: EdgeId, marked: bool) -> Comp {
        Comp::Arc { lo: a.min(b), hi: a.max(b), marked }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, Comp::Circle { .. })
    }

    pub fn is_marked(&self) -> bool {
        match *self {
            Comp::Arc { marked, .. } | Comp::Circle { marked } => marked,
        }
    }

    /// Euler characteristic of the piece as a gluing interface.
    fn interface_chi(&self) -> i16 {
        if self.is_circle() {
            0
        } else {
            1
        }
    }

    fn end_multiplicity(&self, e: EdgeId) -> usize {
        match *self {
            Comp::Arc { lo, hi, .. } => (lo == e) as usize + (hi == e) as usize,
            Comp::Circle { .. } => 0,
        }
    }
}

/// A sorted list of tangle components. Stored tangles have pairwise distinct
/// arc endpoints; duplicate circles may coexist transiently between an
/// append and the delooping pass that follows it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct Tangle {
    comps: Vec<Comp>,
}

impl Tangle {
    pub fn empty() -> Self {
        Tangle::default()
    }

    pub fn comps(&self) -> &[Comp] {
        &self.comps
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn first_circle(&self) -> Option<usize> {
        self.comps.iter().position(Comp::is_circle)
    }

    /// Sorts components, returning the map from input position to sorted
    /// position. The sort is stable so equal circles keep their order.
    pub fn sorted_from(comps: Vec<Comp>) -> (Tangle, Vec<u8>) {
        assert!(comps.len() <= u8::MAX as usize);
        let mut order: Vec<usize> = (0..comps.len()).collect();
        order.sort_by_key(|&i| comps[i]);
        let mut map = vec![0u8; comps.len()];
        for (new, &old) in order.iter().enumerate() {
            map[old] = new as u8;
        }
        let sorted = order.into_iter().map(|i| comps[i]).collect();
        (Tangle { comps: sorted }, map)
    }

    /// Removes one component; `map[old] = None` for it, shifted otherwise.
    pub fn without(&self, idx: usize) -> (Tangle, Vec<Option<u8>>) {
        let mut comps = self.comps.clone();
        comps.remove(idx);
        let map = (0..self.comps.len())
            .map(|k| match k.cmp(&idx) {
                std::cmp::Ordering::Less => Some(k as u8),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(k as u8 - 1),
            })
            .collect();
        (Tangle { comps }, map)
    }
}

/// One connected surface piece of a cobordism: the source and target tangle
/// components it attaches to, its dots (capped at 2, which already means
/// zero), and its Euler characteristic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Part {
    src: SmallVec<[u8; 4]>,
    tgt: SmallVec<[u8; 4]>,
    dots: u8,
    chi: i16,
}

impl Part {
    pub fn identity(idx_src: u8, idx_tgt: u8, comp: &Comp) -> Part {
        Part {
            src: SmallVec::from_slice(&[idx_src]),
            tgt: SmallVec::from_slice(&[idx_tgt]),
            dots: 0,
            chi: comp.interface_chi(),
        }
    }

    pub fn saddle(src: [u8; 2], tgt: [u8; 2]) -> Part {
        Part { src: SmallVec::from_slice(&src), tgt: SmallVec::from_slice(&tgt), dots: 0, chi: 1 }
    }

    fn is_closed(&self) -> bool {
        self.src.is_empty() && self.tgt.is_empty()
    }

    /// Closed piece evaluation: 1 for an once-dotted sphere, else 0.
    fn closed_value(&self) -> bool {
        self.chi == 2 && self.dots == 1
    }

    /// Whether an open piece is a zero morphism: two dots, or positive genus
    /// computed from chi and the count of boundary circles.
    fn is_open_zero(&self, src: &Tangle, tgt: &Tangle) -> bool {
        if self.dots >= 2 {
            return true;
        }
        let mut b = 0usize;
        let mut src_arcs: SmallVec<[(EdgeId, EdgeId); 4]> = SmallVec::new();
        let mut tgt_arcs: SmallVec<[(EdgeId, EdgeId); 4]> = SmallVec::new();
        for &k in &self.src {
            match src.comps()[k as usize] {
                Comp::Circle { .. } => b += 1,
                Comp::Arc { lo, hi, .. } => src_arcs.push((lo, hi)),
            }
        }
        for &k in &self.tgt {
            match tgt.comps()[k as usize] {
                Comp::Circle { .. } => b += 1,
                Comp::Arc { lo, hi, .. } => tgt_arcs.push((lo, hi)),
            }
        }
        b += boundary_cycles(&src_arcs, &tgt_arcs);
        let two_g = 2 - self.chi as i64 - b as i64;
        debug_assert!(two_g >= 0 && two_g % 2 == 0, "bad genus data: {self:?}");
        two_g > 0
    }
}

/// Number of boundary circles traced through source arcs, vertical segments
/// and target arcs. Source and target arcs cover the same endpoints.
fn boundary_cycles(src_arcs: &[(EdgeId, EdgeId)], tgt_arcs: &[(EdgeId, EdgeId)]) -> usize {
    debug_assert_eq!(src_arcs.len(), tgt_arcs.len());
    let n = src_arcs.len();
    if n == 0 {
        return 0;
    }
    let mut visited_src = vec![false; n];
    let mut cycles = 0;
    let tgt_at = |e: EdgeId| {
        tgt_arcs
            .iter()
            .position(|&(a, b)| a == e || b == e)
            .expect("target arc covers every source endpoint")
    };
    for start in 0..n {
        if visited_src[start] {
            continue;
        }
        cycles += 1;
        let mut s = start;
        let mut enter = src_arcs[start].0;
        loop {
            visited_src[s] = true;
            let (a, b) = src_arcs[s];
            let exit = if enter == a { b } else { a };
            // cross to the target arc at this endpoint and back
            let t = tgt_at(exit);
            let (ta, tb) = tgt_arcs[t];
            let back = if exit == ta { tb } else { ta };
            if back == src_arcs[start].0 && {
                let next = src_arcs.iter().position(|&(a, b)| a == back || b == back).unwrap();
                next == start
            } {
                break;
            }
            s = src_arcs.iter().position(|&(a, b)| a == back || b == back).unwrap();
            enter = back;
            if s == start && enter == src_arcs[start].0 {
                break;
            }
        }
    }
    cycles
}

/// A single cobordism, a GF(2) monomial: parts partition all components of
/// the source and target tangles.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Cob {
    parts: Vec<Part>,
}

impl Cob {
    fn from_parts(mut parts: Vec<Part>) -> Cob {
        for p in &mut parts {
            p.src.sort_unstable();
            p.tgt.sort_unstable();
        }
        parts.sort_unstable();
        Cob { parts }
    }

    pub fn identity(t: &Tangle) -> Cob {
        let parts = t
            .comps()
            .iter()
            .enumerate()
            .map(|(i, c)| Part::identity(i as u8, i as u8, c))
            .collect();
        Cob::from_parts(parts)
    }

    /// Inverse of an identity-like cobordism: swap source and target.
    fn inverted(&self) -> Cob {
        let parts = self
            .parts
            .iter()
            .map(|p| Part { src: p.tgt.clone(), tgt: p.src.clone(), dots: p.dots, chi: p.chi })
            .collect();
        Cob::from_parts(parts)
    }

    fn is_identity_like(&self, src: &Tangle, tgt: &Tangle) -> bool {
        self.parts.iter().all(|p| {
            p.dots == 0
                && p.src.len() == 1
                && p.tgt.len() == 1
                && {
                    let cs = src.comps()[p.src[0] as usize];
                    let ct = tgt.comps()[p.tgt[0] as usize];
                    cs == ct && p.chi == cs.interface_chi()
                }
        })
    }
}

/// A GF(2) sum of cobordisms, kept sorted and duplicate-free.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Mor {
    cobs: Vec<Cob>,
}

impl Mor {
    pub fn zero() -> Mor {
        Mor::default()
    }

    pub fn identity(t: &Tangle) -> Mor {
        Mor { cobs: vec![Cob::identity(t)] }
    }

    pub fn is_zero(&self) -> bool {
        self.cobs.is_empty()
    }

    pub fn num_cobs(&self) -> usize {
        self.cobs.len()
    }

    fn add_cob(&mut self, cob: Cob) {
        match self.cobs.binary_search(&cob) {
            Ok(i) => {
                self.cobs.remove(i);
            }
            Err(i) => self.cobs.insert(i, cob),
        }
    }

    pub fn add(&mut self, other: Mor) {
        for c in other.cobs {
            self.add_cob(c);
        }
    }

    pub fn is_invertible(&self, src: &Tangle, tgt: &Tangle) -> bool {
        self.cobs.len() == 1 && self.cobs[0].is_identity_like(src, tgt)
    }

    pub fn inverted(&self) -> Mor {
        debug_assert_eq!(self.cobs.len(), 1);
        Mor { cobs: vec![self.cobs[0].inverted()] }
    }

    /// Part lists for gluing: each cobordism's parts plus identity parts
    /// over the appended components, placed after the source and target
    /// tangle prefixes of the given lengths.
    pub fn parts_extended(
        &self,
        src_prefix: usize,
        tgt_prefix: usize,
        appended: &[Comp],
    ) -> Vec<Vec<Part>> {
        self.cobs
            .iter()
            .map(|c| {
                let mut ps = c.parts.clone();
                for (i, comp) in appended.iter().enumerate() {
                    ps.push(Part::identity((src_prefix + i) as u8, (tgt_prefix + i) as u8, comp));
                }
                ps
            })
            .collect()
    }
}

/// The identity over a tangle together with one saddle joining the two
/// resolution arcs appended at the given positions on both sides.
pub fn saddle_parts(t: &Tangle, appended: [u8; 2]) -> Vec<Vec<Part>> {
    let mut ps: Vec<Part> = t
        .comps()
        .iter()
        .enumerate()
        .map(|(i, c)| Part::identity(i as u8, i as u8, c))
        .collect();
    ps.push(Part::saddle(appended, appended));
    vec![ps]
}

/// Result of fusing a component list along newly closed edges.
pub struct Fusion {
    pub tangle: Tangle,
    /// combined input index -> fused sorted index
    pub map: Vec<u8>,
}

/// Fuses components along the given edges: components sharing a closed edge
/// chain into one arc, or into a circle when no endpoint remains.
pub fn fuse(comps: &[Comp], glue: &[EdgeId]) -> Fusion {
    assert!(comps.len() <= u8::MAX as usize);
    let mut uf: Vec<usize> = (0..comps.len()).collect();
    fn find(uf: &mut Vec<usize>, mut i: usize) -> usize {
        while uf[i] != i {
            uf[i] = uf[uf[i]];
            i = uf[i];
        }
        i
    }
    for &e in glue {
        let holders: SmallVec<[usize; 2]> = comps
            .iter()
            .enumerate()
            .filter(|(_, c)| c.end_multiplicity(e) > 0)
            .map(|(i, _)| i)
            .collect();
        debug_assert!(!holders.is_empty());
        let r0 = find(&mut uf, holders[0]);
        for &h in &holders[1..] {
            let r = find(&mut uf, h);
            let (a, b) = (r0.min(r), r0.max(r));
            uf[b] = a;
        }
    }

    // assemble one component per class
    let mut class_members: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..comps.len() {
        let r = find(&mut uf, i);
        class_members.entry(r).or_default().push(i);
    }
    let mut fused: Vec<Comp> = Vec::with_capacity(class_members.len());
    let mut class_of: Vec<usize> = vec![0; comps.len()];
    for (ci, (_, members)) in class_members.iter().enumerate() {
        let marked = members.iter().any(|&i| comps[i].is_marked());
        if members.len() == 1 && comps[members[0]].is_circle() {
            fused.push(Comp::Circle { marked });
        } else {
            let mut ends: SmallVec<[EdgeId; 8]> = SmallVec::new();
            for &i in members {
                if let Comp::Arc { lo, hi, .. } = comps[i] {
                    ends.push(lo);
                    ends.push(hi);
                }
            }
            for &e in glue {
                for _ in 0..2 {
                    if let Some(p) = ends.iter().position(|&x| x == e) {
                        ends.remove(p);
                    }
                }
            }
            match ends.len() {
                0 => fused.push(Comp::Circle { marked }),
                2 => fused.push(Comp::arc(ends[0], ends[1], marked)),
                k => panic!("fused component with {k} open ends"),
            }
        }
        for &i in members {
            class_of[i] = ci;
        }
    }
    let (tangle, perm) = Tangle::sorted_from(fused);
    let map = class_of.into_iter().map(|c| perm[c]).collect();
    Fusion { tangle, map }
}

/// Glues a morphism with the components appended by a new crossing, closing
/// the given edges. `parts` index into the combined source and target lists.
/// Returns the morphism between the fused tangles.
pub fn glue_mor(
    mor_parts: &[Vec<Part>],
    combined_src: &[Comp],
    src_fusion: &Fusion,
    tgt_fusion: &Fusion,
    glue: &[EdgeId],
) -> Mor {
    let mut out = Mor::zero();
    'cob: for parts in mor_parts {
        // owner of every combined source component
        let mut owner = vec![usize::MAX; combined_src.len()];
        for (pi, p) in parts.iter().enumerate() {
            for &k in &p.src {
                owner[k as usize] = pi;
            }
        }
        let mut uf: Vec<usize> = (0..parts.len()).collect();
        fn find(uf: &mut Vec<usize>, mut i: usize) -> usize {
            while uf[i] != i {
                uf[i] = uf[uf[i]];
                i = uf[i];
            }
            i
        }
        let mut penalty = vec![0i16; parts.len()];
        for &e in glue {
            let mut holders: SmallVec<[usize; 2]> = SmallVec::new();
            for (i, c) in combined_src.iter().enumerate() {
                for _ in 0..c.end_multiplicity(e) {
                    holders.push(i);
                }
            }
            debug_assert_eq!(holders.len(), 2, "glue edge {e} must have two open ends");
            let (p1, p2) = (owner[holders[0]], owner[holders[1]]);
            let (r1, r2) = (find(&mut uf, p1), find(&mut uf, p2));
            let root = r1.min(r2);
            uf[r1.max(r2)] = root;
            penalty[root] += 1;
        }

        // merge part classes and remap through the fusions
        let mut classes: std::collections::BTreeMap<usize, Part> = Default::default();
        let mut extra_penalty: std::collections::BTreeMap<usize, i16> = Default::default();
        for (pi, p) in parts.iter().enumerate() {
            let r = find(&mut uf, pi);
            extra_penalty
                .entry(r)
                .and_modify(|x| *x += penalty[pi])
                .or_insert(penalty[pi]);
            let entry = classes.entry(r).or_insert_with(|| Part {
                src: SmallVec::new(),
                tgt: SmallVec::new(),
                dots: 0,
                chi: 0,
            });
            for &k in &p.src {
                let m = src_fusion.map[k as usize];
                if !entry.src.contains(&m) {
                    entry.src.push(m);
                }
            }
            for &k in &p.tgt {
                let m = tgt_fusion.map[k as usize];
                if !entry.tgt.contains(&m) {
                    entry.tgt.push(m);
                }
            }
            entry.dots = entry.dots.saturating_add(p.dots);
            entry.chi += p.chi;
        }
        let mut new_parts = Vec::with_capacity(classes.len());
        for (r, mut part) in classes {
            part.chi -= extra_penalty[&r];
            debug_assert!(!part.is_closed(), "append cannot close a part");
            if part.is_open_zero(&src_fusion.tangle, &tgt_fusion.tangle) {
                continue 'cob;
            }
            new_parts.push(part);
        }
        out.add_cob(Cob::from_parts(new_parts));
    }
    out
}

/// Composition f then g along the middle tangle.
pub fn compose(f: &Mor, g: &Mor, mid: &Tangle, src: &Tangle, tgt: &Tangle) -> Mor {
    let mut out = Mor::zero();
    for cf in &f.cobs {
        'pair: for cg in &g.cobs {
            let nf = cf.parts.len();
            let mut uf: Vec<usize> = (0..nf + cg.parts.len()).collect();
            fn find(uf: &mut Vec<usize>, mut i: usize) -> usize {
                while uf[i] != i {
                    uf[i] = uf[uf[i]];
                    i = uf[i];
                }
                i
            }
            let mut f_owner = vec![usize::MAX; mid.len()];
            for (pi, p) in cf.parts.iter().enumerate() {
                for &k in &p.tgt {
                    f_owner[k as usize] = pi;
                }
            }
            let mut g_owner = vec![usize::MAX; mid.len()];
            for (pi, p) in cg.parts.iter().enumerate() {
                for &k in &p.src {
                    g_owner[k as usize] = pi;
                }
            }
            let mut penalty = vec![0i16; nf + cg.parts.len()];
            for (m, comp) in mid.comps().iter().enumerate() {
                let (a, b) = (f_owner[m], g_owner[m] + nf);
                let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
                let root = ra.min(rb);
                uf[ra.max(rb)] = root;
                penalty[root] += comp.interface_chi();
            }

            let mut classes: std::collections::BTreeMap<usize, Part> = Default::default();
            let mut extra: std::collections::BTreeMap<usize, i16> = Default::default();
            for i in 0..nf + cg.parts.len() {
                let r = find(&mut uf, i);
                extra.entry(r).and_modify(|x| *x += penalty[i]).or_insert(penalty[i]);
                let p = if i < nf { &cf.parts[i] } else { &cg.parts[i - nf] };
                let entry = classes.entry(r).or_insert_with(|| Part {
                    src: SmallVec::new(),
                    tgt: SmallVec::new(),
                    dots: 0,
                    chi: 0,
                });
                if i < nf {
                    entry.src.extend_from_slice(&p.src);
                } else {
                    entry.tgt.extend_from_slice(&p.tgt);
                }
                entry.dots = entry.dots.saturating_add(p.dots);
                entry.chi += p.chi;
            }
            let mut new_parts = Vec::with_capacity(classes.len());
            for (r, mut part) in classes {
                part.chi -= extra[&r];
                if part.is_closed() {
                    if part.closed_value() {
                        continue; // factor of 1
                    }
                    continue 'pair; // factor of 0
                }
                if part.is_open_zero(src, tgt) {
                    continue 'pair;
                }
                new_parts.push(part);
            }
            out.add_cob(Cob::from_parts(new_parts));
        }
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum End {
    Src,
    Tgt,
}

/// Caps the given circle component off every cobordism of a morphism, with
/// or without a dot, remapping the capped side through `removal_map`.
pub fn cap_off(
    mor: &Mor,
    end: End,
    comp_idx: u8,
    dotted: bool,
    removal_map: &[Option<u8>],
) -> Mor {
    let mut out = Mor::zero();
    'cob: for cob in &mor.cobs {
        let mut parts = Vec::with_capacity(cob.parts.len());
        for p in &cob.parts {
            let side = if end == End::Src { &p.src } else { &p.tgt };
            let touches = side.contains(&comp_idx);
            let mut q = p.clone();
            let side_mut = if end == End::Src { &mut q.src } else { &mut q.tgt };
            side_mut.retain(|k| *k != comp_idx);
            for k in side_mut.iter_mut() {
                *k = removal_map[*k as usize].expect("only the capped component is removed");
            }
            if touches {
                q.chi += 1;
                if dotted {
                    q.dots = q.dots.saturating_add(1);
                }
                if q.dots >= 2 {
                    continue 'cob;
                }
                if q.is_closed() {
                    if q.closed_value() {
                        continue; // factor of 1
                    }
                    continue 'cob; // zero
                }
            }
            parts.push(q);
        }
        out.add_cob(Cob::from_parts(parts));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> Tangle {
        Tangle::sorted_from(vec![Comp::Circle { marked: false }]).0
    }

    fn two_circles() -> Tangle {
        Tangle::sorted_from(vec![Comp::Circle { marked: false }; 2]).0
    }

    #[test]
    fn identity_is_invertible() {
        let t = Tangle::sorted_from(vec![
            Comp::arc(1, 2, false),
            Comp::arc(3, 4, false),
            Comp::Circle { marked: false },
        ])
        .0;
        let id = Mor::identity(&t);
        assert!(id.is_invertible(&t, &t));
        let sq = compose(&id, &id, &t, &t, &t);
        assert_eq!(sq, id);
    }

    #[test]
    fn marked_mismatch_is_not_invertible() {
        let s = Tangle::sorted_from(vec![Comp::arc(1, 2, true)]).0;
        let t = Tangle::sorted_from(vec![Comp::arc(1, 2, false)]).0;
        let id_like = Mor { cobs: vec![Cob::identity(&s)] };
        assert!(!id_like.is_invertible(&s, &t));
    }

    #[test]
    fn split_then_merge_vanishes() {
        // pants: one circle to two, then back: a genus-one piece, zero here
        let c1 = circle();
        let c2 = two_circles();
        let split = Mor {
            cobs: vec![Cob::from_parts(vec![Part {
                src: SmallVec::from_slice(&[0]),
                tgt: SmallVec::from_slice(&[0, 1]),
                dots: 0,
                chi: -1,
            }])],
        };
        let merge = Mor {
            cobs: vec![Cob::from_parts(vec![Part {
                src: SmallVec::from_slice(&[0, 1]),
                tgt: SmallVec::from_slice(&[0]),
                dots: 0,
                chi: -1,
            }])],
        };
        let round = compose(&split, &merge, &c2, &c1, &c1);
        assert!(round.is_zero());
    }

    #[test]
    fn merge_then_split_is_not_zero() {
        // two circles to one and back out: genus zero, survives
        let c2 = two_circles();
        let c1 = circle();
        let merge = Mor {
            cobs: vec![Cob::from_parts(vec![Part {
                src: SmallVec::from_slice(&[0, 1]),
                tgt: SmallVec::from_slice(&[0]),
                dots: 0,
                chi: -1,
            }])],
        };
        let split = Mor {
            cobs: vec![Cob::from_parts(vec![Part {
                src: SmallVec::from_slice(&[0]),
                tgt: SmallVec::from_slice(&[0, 1]),
                dots: 0,
                chi: -1,
            }])],
        };
        let round = compose(&merge, &split, &c1, &c2, &c2);
        assert!(!round.is_zero());
    }

    #[test]
    fn sphere_evaluations() {
        // cup then cap on a circle: sphere = 0, one dot = 1, two dots = 0
        let empty = Tangle::empty();
        let c = circle();
        let cup = |dots: u8| Mor {
            cobs: vec![Cob::from_parts(vec![Part {
                src: SmallVec::new(),
                tgt: SmallVec::from_slice(&[0]),
                dots,
                chi: 1,
            }])],
        };
        let cap = |dots: u8| Mor {
            cobs: vec![Cob::from_parts(vec![Part {
                src: SmallVec::from_slice(&[0]),
                tgt: SmallVec::new(),
                dots,
                chi: 1,
            }])],
        };
        let plain = compose(&cup(0), &cap(0), &c, &empty, &empty);
        assert!(plain.is_zero());
        let dotted = compose(&cup(1), &cap(0), &c, &empty, &empty);
        assert_eq!(dotted.num_cobs(), 1); // the empty cobordism, scalar 1
        let double = compose(&cup(1), &cap(1), &c, &empty, &empty);
        assert!(double.is_zero());
    }

    #[test]
    fn gf2_addition_cancels() {
        let t = circle();
        let mut m = Mor::identity(&t);
        m.add(Mor::identity(&t));
        assert!(m.is_zero());
    }

    #[test]
    fn fuse_chain_of_arcs() {
        // two arcs sharing edge 2 fuse to one arc 1-3
        let comps = vec![Comp::arc(1, 2, false), Comp::arc(2, 3, true)];
        let f = fuse(&comps, &[2]);
        assert_eq!(f.tangle.comps(), &[Comp::arc(1, 3, true)]);
        assert_eq!(f.map, vec![0, 0]);
    }

    #[test]
    fn fuse_closes_circle() {
        let comps = vec![Comp::arc(1, 2, false), Comp::arc(1, 2, false)];
        let f = fuse(&comps, &[1, 2]);
        assert_eq!(f.tangle.comps(), &[Comp::Circle { marked: false }]);
    }

    #[test]
    fn fuse_self_loop() {
        let comps = vec![Comp::arc(5, 5, true)];
        let f = fuse(&comps, &[5]);
        assert_eq!(f.tangle.comps(), &[Comp::Circle { marked: true }]);
    }

    #[test]
    fn boundary_cycle_counting() {
        // identity rectangle over one arc: one boundary circle
        assert_eq!(boundary_cycles(&[(1, 2)], &[(1, 2)]), 1);
        // saddle: four arcs re-paired, still one boundary circle
        assert_eq!(boundary_cycles(&[(1, 2), (3, 4)], &[(1, 4), (2, 3)]), 1);
        // two disjoint rectangles: two boundary circles
        assert_eq!(boundary_cycles(&[(1, 2), (3, 4)], &[(1, 2), (3, 4)]), 2);
    }
}
