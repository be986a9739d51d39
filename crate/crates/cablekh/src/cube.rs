//! The cube of resolutions and the bigraded chain complex over GF(2).
//!
//! Every crossing is smoothed by a bit choice (0: the smoothing joining
//! slots a-b and c-d, 1: joining a-d and b-c); a full choice vector yields a
//! disjoint union of circles. Generators label each circle with `1` or `x`,
//! graded by i = weight - n⁻ and j = (#1 - #x) + i + n⁺ - n⁻. Merges apply
//! m(1,1)=1, m(1,x)=m(x,1)=x, m(x,x)=0 and splits apply Δ(1)=1⊗x+x⊗1,
//! Δ(x)=x⊗x. The reduced complex is the subcomplex of generators whose
//! basepoint circle is labeled x, with j shifted by +1.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagram::{BasePoint, EdgeId, LinkDiagram};
use crate::homology::gf2::Gf2Matrix;

/// Full-cube construction refuses diagrams above this many crossings; the
/// scanning pipeline handles larger inputs.
pub const DENSE_HARD_CAP: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CubeError {
    #[error("choice vector has length {got}, diagram has {want} crossings")]
    LengthMismatch { got: usize, want: usize },
    #[error("states are not adjacent across a single 0->1 bit")]
    NotAdjacent,
    #[error("reduced complex requested but the diagram has no basepoint")]
    MissingBasepoint,
    #[error("{n} crossings exceed the dense cap of {cap}")]
    CrossingCapExceeded { n: usize, cap: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// One vertex of the cube: a choice per crossing and the resulting circles.
/// Circles with edges come first, sorted by minimal edge; each free loop of
/// the diagram contributes a trailing edgeless circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionState {
    choices: Vec<bool>,
    circles: Vec<Vec<EdgeId>>,
}

impl ResolutionState {
    pub fn choices(&self) -> &[bool] {
        &self.choices
    }

    pub fn weight(&self) -> usize {
        self.choices.iter().filter(|&&b| b).count()
    }

    pub fn num_circles(&self) -> usize {
        self.circles.len()
    }

    pub fn circles(&self) -> &[Vec<EdgeId>] {
        &self.circles
    }

    pub fn circle_of(&self, e: EdgeId) -> Option<usize> {
        self.circles.iter().position(|c| c.binary_search(&e).is_ok())
    }

    fn num_edge_circles(&self) -> usize {
        self.circles.iter().filter(|c| !c.is_empty()).count()
    }

    /// Circle carrying the basepoint.
    pub fn basepoint_circle(&self, bp: BasePoint) -> Option<usize> {
        match bp {
            BasePoint::Edge(e) => self.circle_of(e),
            BasePoint::Loop(i) => {
                (i < self.circles.len() - self.num_edge_circles())
                    .then(|| self.num_edge_circles() + i)
            }
        }
    }
}

/// Computes the circle decomposition for one choice vector.
pub fn resolve(d: &LinkDiagram, choices: &[bool]) -> Result<ResolutionState, CubeError> {
    if choices.len() != d.num_crossings() {
        return Err(CubeError::LengthMismatch { got: choices.len(), want: d.num_crossings() });
    }
    let edges: Vec<EdgeId> = d.edges().collect();
    let index: BTreeMap<EdgeId, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut uf = UnionFind::new(edges.len());
    for (x, &c) in d.crossings().iter().zip(choices) {
        let pairs = if c { x.one_smoothing() } else { x.zero_smoothing() };
        for (a, b) in pairs {
            uf.union(index[&a], index[&b]);
        }
    }
    let mut by_root: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
    for (i, &e) in edges.iter().enumerate() {
        by_root.entry(uf.find(i)).or_default().push(e);
    }
    let mut circles: Vec<Vec<EdgeId>> = by_root.into_values().collect();
    for c in &mut circles {
        c.sort_unstable();
    }
    circles.sort_by_key(|c| c[0]);
    circles.extend(std::iter::repeat_with(Vec::new).take(d.num_free_loops()));
    Ok(ResolutionState { choices: choices.to_vec(), circles })
}

/// How flipping one crossing transforms circles: which source circles are
/// affected, where every untouched circle lands, and the merge/split shape.
enum Elementary {
    Merge { u: usize, v: usize, w: usize },
    Split { u: usize, w1: usize, w2: usize },
}

struct EdgeTransform {
    kind: Elementary,
    /// map[k] = target circle index for source circles untouched by the flip
    map: Vec<Option<usize>>,
}

fn edge_transform(
    d: &LinkDiagram,
    from: &ResolutionState,
    to: &ResolutionState,
) -> Result<EdgeTransform, CubeError> {
    let n = d.num_crossings();
    if from.choices.len() != n || to.choices.len() != n {
        return Err(CubeError::LengthMismatch {
            got: from.choices.len().max(to.choices.len()),
            want: n,
        });
    }
    let mut flipped = None;
    for t in 0..n {
        match (from.choices[t], to.choices[t]) {
            (false, true) if flipped.is_none() => flipped = Some(t),
            (a, b) if a == b => {}
            _ => return Err(CubeError::NotAdjacent),
        }
    }
    let t = flipped.ok_or(CubeError::NotAdjacent)?;
    let x = &d.crossings()[t];
    let [(a, _), (c, _)] = x.zero_smoothing();
    let [(a1, _), (b1, _)] = x.one_smoothing();

    let u = from.circle_of(a).unwrap();
    let v = from.circle_of(c).unwrap();
    let kind = if u != v {
        let w = to.circle_of(a).unwrap();
        Elementary::Merge { u, v, w }
    } else {
        let (w1, w2) = (to.circle_of(a1).unwrap(), to.circle_of(b1).unwrap());
        if w1 == w2 {
            return Err(CubeError::Internal(format!(
                "flip of crossing {t} neither merges nor splits"
            )));
        }
        Elementary::Split { u, w1, w2 }
    };

    let (nec_from, nec_to) = (from.num_edge_circles(), to.num_edge_circles());
    let map = (0..from.num_circles())
        .map(|k| {
            let touched = match kind {
                Elementary::Merge { u, v, .. } => k == u || k == v,
                Elementary::Split { u, .. } => k == u,
            };
            if touched {
                None
            } else if k >= nec_from {
                Some(nec_to + (k - nec_from))
            } else {
                Some(to.circle_of(from.circles[k][0]).unwrap())
            }
        })
        .collect();
    Ok(EdgeTransform { kind, map })
}

/// Images of a labeling mask (bit set = circle labeled x) under the flip.
fn apply_transform(tr: &EdgeTransform, labels: u32) -> smallvec::SmallVec<[u32; 2]> {
    let mut base = 0u32;
    for (k, m) in tr.map.iter().enumerate() {
        if let Some(j) = m {
            if labels >> k & 1 == 1 {
                base |= 1 << j;
            }
        }
    }
    match tr.kind {
        Elementary::Merge { u, v, w } => {
            let (xu, xv) = (labels >> u & 1, labels >> v & 1);
            match (xu, xv) {
                (1, 1) => smallvec::smallvec![],
                (0, 0) => smallvec::smallvec![base],
                _ => smallvec::smallvec![base | 1 << w],
            }
        }
        Elementary::Split { u, w1, w2 } => {
            if labels >> u & 1 == 1 {
                smallvec::smallvec![base | 1 << w1 | 1 << w2]
            } else {
                smallvec::smallvec![base | 1 << w2, base | 1 << w1]
            }
        }
    }
}

/// The component of the differential between two adjacent states, as a
/// matrix on full labeling spaces. Column index = source labeling mask, row
/// index = target labeling mask, low bit = first circle, set bit = x.
pub fn edge_map(
    d: &LinkDiagram,
    from: &ResolutionState,
    to: &ResolutionState,
) -> Result<Gf2Matrix, CubeError> {
    let tr = edge_transform(d, from, to)?;
    let mut m = Gf2Matrix::new(1 << to.num_circles(), 1 << from.num_circles());
    for labels in 0..1u32 << from.num_circles() {
        for img in apply_transform(&tr, labels) {
            m.set(img as usize, labels as usize);
        }
    }
    Ok(m)
}

/// A chain group basis element: a state plus a labeling of its circles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub state: u32,
    pub labels: u32,
}

/// Bigraded chain groups with one boundary matrix per bidegree, mapping
/// (i, j) to (i+1, j).
pub struct BigradedComplex {
    groups: BTreeMap<(i32, i32), Vec<Generator>>,
    boundaries: BTreeMap<(i32, i32), Gf2Matrix>,
    reduced: bool,
}

impl BigradedComplex {
    pub fn groups(&self) -> &BTreeMap<(i32, i32), Vec<Generator>> {
        &self.groups
    }

    pub fn boundary(&self, i: i32, j: i32) -> Option<&Gf2Matrix> {
        self.boundaries.get(&(i, j))
    }

    pub fn boundaries(&self) -> &BTreeMap<(i32, i32), Gf2Matrix> {
        &self.boundaries
    }

    pub fn dim(&self, i: i32, j: i32) -> usize {
        self.groups.get(&(i, j)).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Verifies that consecutive boundary matrices compose to zero.
    pub fn check_d_squared(&self) -> bool {
        self.boundaries.iter().all(|(&(i, j), d0)| {
            self.boundaries
                .get(&(i + 1, j))
                .map_or(true, |d1| d1.mul(d0).is_zero())
        })
    }
}

/// Builds the full cube complex. For the reduced flavor the diagram must
/// carry a basepoint; the basepoint circle of every generator is labeled x.
pub fn build_complex(
    d: &LinkDiagram,
    reduced: bool,
    max_crossings: usize,
) -> Result<BigradedComplex, CubeError> {
    let n = d.num_crossings();
    let cap = max_crossings.min(DENSE_HARD_CAP);
    if n > cap {
        return Err(CubeError::CrossingCapExceeded { n, cap });
    }
    let basepoint = match (reduced, d.basepoint()) {
        (true, None) => return Err(CubeError::MissingBasepoint),
        (true, Some(bp)) => Some(bp),
        (false, _) => None,
    };
    let (n_pos, n_neg) = d.signed_crossing_counts();
    let (n_pos, n_neg) = (n_pos as i32, n_neg as i32);

    let mut states = Vec::with_capacity(1 << n);
    for s in 0..1u32 << n {
        let choices: Vec<bool> = (0..n).map(|t| s >> t & 1 == 1).collect();
        states.push(resolve(d, &choices)?);
    }

    let grading = |st: &ResolutionState, labels: u32| -> (i32, i32) {
        let i = st.weight() as i32 - n_neg;
        let x_count = labels.count_ones() as i32;
        let mut j = (st.num_circles() as i32 - 2 * x_count) + i + n_pos - n_neg;
        if reduced {
            j += 1;
        }
        (i, j)
    };
    let gen_labels = |st: &ResolutionState| -> Vec<u32> {
        let c = st.num_circles();
        let bp_circle = basepoint.map(|bp| {
            st.basepoint_circle(bp)
                .expect("basepoint circle exists in every state")
        });
        (0..1u32 << c)
            .filter(|l| bp_circle.map_or(true, |b| l >> b & 1 == 1))
            .collect()
    };

    // enumerate generators per bidegree, ordered by (state, labels)
    let mut groups: BTreeMap<(i32, i32), Vec<Generator>> = BTreeMap::new();
    for (s, st) in states.iter().enumerate() {
        for labels in gen_labels(st) {
            groups
                .entry(grading(st, labels))
                .or_default()
                .push(Generator { state: s as u32, labels });
        }
    }
    let index: BTreeMap<Generator, usize> = groups
        .values()
        .flat_map(|gens| gens.iter().enumerate().map(|(k, &g)| (g, k)))
        .collect();

    // boundary matrices, sized up front, filled one cube edge at a time
    let mut boundaries: BTreeMap<(i32, i32), Gf2Matrix> = groups
        .iter()
        .map(|(&(i, j), gens)| {
            let target_dim = groups.get(&(i + 1, j)).map_or(0, Vec::len);
            ((i, j), Gf2Matrix::new(target_dim, gens.len()))
        })
        .collect();
    for (s, st) in states.iter().enumerate() {
        let s = s as u32;
        for t in 0..n {
            if s >> t & 1 == 1 {
                continue;
            }
            let s1 = s | 1 << t;
            let tr = edge_transform(d, st, &states[s1 as usize])?;
            for labels in gen_labels(st) {
                let col = index[&Generator { state: s, labels }];
                let m = boundaries.get_mut(&grading(st, labels)).unwrap();
                for img in apply_transform(&tr, labels) {
                    let tgt = Generator { state: s1, labels: img };
                    let Some(&row) = index.get(&tgt) else {
                        return Err(CubeError::Internal(format!(
                            "missing target generator for {tgt:?}"
                        )));
                    };
                    m.set(row, col);
                }
            }
        }
    }
    Ok(BigradedComplex { groups, boundaries, reduced })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.parent[i] != i {
            self.parent[i] = self.parent[self.parent[i]];
            i = self.parent[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOPF: &str = "X[1,3,2,4] X[3,1,4,2]";
    const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

    #[test]
    fn resolve_free_loop() {
        let d = LinkDiagram::parse("U1").unwrap();
        let st = resolve(&d, &[]).unwrap();
        assert_eq!(st.num_circles(), 1);
    }

    #[test]
    fn resolve_hopf_states() {
        let d = LinkDiagram::parse(HOPF).unwrap();
        assert_eq!(resolve(&d, &[false, false]).unwrap().num_circles(), 2);
        assert_eq!(resolve(&d, &[true, false]).unwrap().num_circles(), 1);
        assert_eq!(resolve(&d, &[false, true]).unwrap().num_circles(), 1);
        assert_eq!(resolve(&d, &[true, true]).unwrap().num_circles(), 2);
    }

    #[test]
    fn resolve_length_mismatch() {
        let d = LinkDiagram::parse(HOPF).unwrap();
        assert!(matches!(
            resolve(&d, &[false]),
            Err(CubeError::LengthMismatch { got: 1, want: 2 })
        ));
    }

    #[test]
    fn adjacent_states_change_circles_by_one() {
        let d = LinkDiagram::parse(TREFOIL).unwrap();
        for s in 0..8u32 {
            let from = resolve(&d, &[s & 1 == 1, s >> 1 & 1 == 1, s >> 2 & 1 == 1]).unwrap();
            for t in 0..3 {
                if s >> t & 1 == 1 {
                    continue;
                }
                let s1 = s | 1 << t;
                let to = resolve(&d, &[s1 & 1 == 1, s1 >> 1 & 1 == 1, s1 >> 2 & 1 == 1]).unwrap();
                let diff = from.num_circles() as i64 - to.num_circles() as i64;
                assert_eq!(diff.abs(), 1);
            }
        }
    }

    #[test]
    fn edge_map_merge_and_split_values() {
        let d = LinkDiagram::parse(HOPF).unwrap();
        let from = resolve(&d, &[false, false]).unwrap(); // 2 circles
        let to = resolve(&d, &[true, false]).unwrap(); // 1 circle
        let m = edge_map(&d, &from, &to).unwrap();
        // merge: 1*1 = 1, 1*x = x*1 = x, x*x = 0
        assert!(m.get(0b0, 0b00));
        assert!(m.get(0b1, 0b01));
        assert!(m.get(0b1, 0b10));
        assert!(!m.get(0b0, 0b11) && !m.get(0b1, 0b11));

        let back = resolve(&d, &[true, true]).unwrap(); // split back to 2 circles
        let s = edge_map(&d, &to, &back).unwrap();
        // split: Delta(1) = 1@x + x@1, Delta(x) = x@x
        assert!(s.get(0b01, 0b0));
        assert!(s.get(0b10, 0b0));
        assert!(!s.get(0b00, 0b0) && !s.get(0b11, 0b0));
        assert!(s.get(0b11, 0b1));
    }

    #[test]
    fn edge_map_rejects_non_adjacent() {
        let d = LinkDiagram::parse(HOPF).unwrap();
        let a = resolve(&d, &[false, false]).unwrap();
        let b = resolve(&d, &[true, true]).unwrap();
        assert!(matches!(edge_map(&d, &a, &b), Err(CubeError::NotAdjacent)));
        assert!(matches!(edge_map(&d, &b, &a), Err(CubeError::NotAdjacent)));
    }

    #[test]
    fn unknot_complex_unreduced() {
        let d = LinkDiagram::parse("U1").unwrap();
        let c = build_complex(&d, false, DENSE_HARD_CAP).unwrap();
        assert_eq!(c.total_dim(), 2);
        assert_eq!(c.dim(0, 1), 1);
        assert_eq!(c.dim(0, -1), 1);
    }

    #[test]
    fn unknot_complex_reduced() {
        let d = LinkDiagram::parse("U1").unwrap().with_default_basepoint();
        let c = build_complex(&d, true, DENSE_HARD_CAP).unwrap();
        assert_eq!(c.total_dim(), 1);
        assert_eq!(c.dim(0, 0), 1);
    }

    #[test]
    fn unlink_reduced_dimension() {
        let d = LinkDiagram::parse("U2").unwrap().with_default_basepoint();
        let c = build_complex(&d, true, DENSE_HARD_CAP).unwrap();
        assert_eq!(c.total_dim(), 2);
    }

    #[test]
    fn reduced_needs_basepoint() {
        let d = LinkDiagram::parse("U1").unwrap();
        assert!(matches!(
            build_complex(&d, true, DENSE_HARD_CAP),
            Err(CubeError::MissingBasepoint)
        ));
    }

    #[test]
    fn crossing_cap() {
        let d = LinkDiagram::parse(TREFOIL).unwrap();
        assert!(matches!(
            build_complex(&d, false, 2),
            Err(CubeError::CrossingCapExceeded { n: 3, cap: 2 })
        ));
    }

    #[test]
    fn total_dimension_is_sum_over_states() {
        let d = LinkDiagram::parse(TREFOIL).unwrap();
        let c = build_complex(&d, false, DENSE_HARD_CAP).unwrap();
        let mut expect = 0usize;
        for s in 0..8u32 {
            let st = resolve(&d, &[s & 1 == 1, s >> 1 & 1 == 1, s >> 2 & 1 == 1]).unwrap();
            expect += 1 << st.num_circles();
        }
        assert_eq!(c.total_dim(), expect);

        let dr = d.with_default_basepoint();
        let cr = build_complex(&dr, true, DENSE_HARD_CAP).unwrap();
        assert_eq!(cr.total_dim() * 2, expect);
    }

    #[test]
    fn d_squared_zero() {
        for pd in ["U1", HOPF, TREFOIL, "X[1,2,2,1]", "X[1,2,2,3] X[4,4,1,3]"] {
            let d = LinkDiagram::parse(pd).unwrap().with_default_basepoint();
            for reduced in [false, true] {
                let c = build_complex(&d, reduced, DENSE_HARD_CAP).unwrap();
                assert!(c.check_d_squared(), "d^2 != 0 for {pd} reduced={reduced}");
            }
        }
    }

    #[test]
    fn boundaries_preserve_j() {
        // implicit in construction: every image generator lands in (i+1, j);
        // verify via the index lookup not erroring and d^2 = 0 on a sample
        let d = LinkDiagram::parse(TREFOIL).unwrap();
        let c = build_complex(&d, false, DENSE_HARD_CAP).unwrap();
        for (&(i, j), m) in c.boundaries() {
            assert_eq!(m.cols(), c.dim(i, j));
            assert_eq!(m.rows(), c.dim(i + 1, j));
        }
    }
}
