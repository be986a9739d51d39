//! Betti tables of bigraded complexes over GF(2): a dense full-cube path
//! and the scanning pipeline for diagrams beyond the dense cap.

pub mod gf2;

mod cob;
mod scan;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::cube::{build_complex, BigradedComplex, CubeError};
use crate::diagram::LinkDiagram;

pub use gf2::{rank_gf2, Gf2Matrix};
pub use scan::{greedy_order, scan_compute, SCAN_MAX_CROSSINGS, SCAN_MAX_FREE_LOOPS};

#[derive(Debug, Error)]
pub enum HomologyError {
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error("scan generator budget exceeded: {generators} live generators > {budget}")]
    BudgetExceeded { generators: usize, budget: usize },
    #[error("diagram too large for the scan pipeline: {crossings} crossings, {free_loops} free loops")]
    ScanLimit { crossings: usize, free_loops: usize },
    #[error("boundary matrices violate the bigrading")]
    GradingViolation,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl HomologyError {
    /// Resource exhaustion (caps and budgets) as opposed to bad input or an
    /// internal bug.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            HomologyError::BudgetExceeded { .. }
                | HomologyError::ScanLimit { .. }
                | HomologyError::Cube(CubeError::CrossingCapExceeded { .. })
        )
    }
}

/// Homology ranks per bidegree (i, j). Zero entries are not stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiTable {
    ranks: BTreeMap<(i32, i32), usize>,
}

impl BettiTable {
    pub fn from_ranks(ranks: BTreeMap<(i32, i32), usize>) -> Self {
        let ranks = ranks.into_iter().filter(|&(_, b)| b > 0).collect();
        BettiTable { ranks }
    }

    pub fn get(&self, i: i32, j: i32) -> usize {
        self.ranks.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((i32, i32), usize)> + '_ {
        self.ranks.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// Two-variable Poincaré polynomial, rendered with t marking the
    /// homological and q the quantum grading.
    pub fn poincare_string(&self) -> String {
        if self.ranks.is_empty() {
            return "0".to_string();
        }
        let term = |((i, j), b): ((i32, i32), usize)| {
            let mut s = String::new();
            if b != 1 {
                s.push_str(&b.to_string());
            }
            if i != 0 {
                s.push_str(&format!("t^{i}"));
            }
            if j != 0 {
                s.push_str(&format!("q^{j}"));
            }
            if s.is_empty() {
                s.push('1');
            }
            s
        };
        self.iter().map(term).collect::<Vec<_>>().join(" + ")
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poincare_string())
    }
}

/// Homology of a complex: b = dim - rank d - rank d_prev, per bidegree.
pub fn betti(c: &BigradedComplex) -> Result<BettiTable, HomologyError> {
    for (&(i, j), m) in c.boundaries() {
        if m.cols() != c.dim(i, j) || m.rows() != c.dim(i + 1, j) {
            return Err(HomologyError::GradingViolation);
        }
    }
    let mut ranks = BTreeMap::new();
    for (&(i, j), gens) in c.groups() {
        let out = c.boundary(i, j).map_or(0, |m| gf2::rank_gf2(m));
        let into = c.boundary(i - 1, j).map_or(0, |m| gf2::rank_gf2(m));
        let b = gens.len() - out - into;
        if b > 0 {
            ranks.insert((i, j), b);
        }
    }
    Ok(BettiTable::from_ranks(ranks))
}

/// Which pipeline computes a Betti table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Dense,
    Scan,
    Auto,
}

/// Resource caps for the two pipelines and the polynomial oracle.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    /// Dense full-cube limit; also the switch point of `Algorithm::Auto`.
    pub dense_max_crossings: usize,
    /// Maximum live generators in the scanning pipeline.
    pub scan_budget: usize,
    /// Crossing limit for the state-sum polynomial oracle.
    pub oracle_max_crossings: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            dense_max_crossings: 12,
            scan_budget: 1_000_000,
            oracle_max_crossings: 20,
        }
    }
}

/// Computes the Betti table of the Khovanov homology of a diagram.
pub fn compute_betti(
    d: &LinkDiagram,
    reduced: bool,
    algorithm: Algorithm,
    caps: &Caps,
) -> Result<BettiTable, HomologyError> {
    match algorithm {
        Algorithm::Dense => betti(&build_complex(d, reduced, caps.dense_max_crossings)?),
        Algorithm::Scan => scan_compute(d, reduced, caps.scan_budget),
        Algorithm::Auto => {
            if d.num_crossings() <= caps.dense_max_crossings {
                betti(&build_complex(d, reduced, caps.dense_max_crossings)?)
            } else {
                scan_compute(d, reduced, caps.scan_budget)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::DENSE_HARD_CAP;
    use crate::diagram::LinkDiagram;

    const HOPF: &str = "X[1,3,2,4] X[3,1,4,2]";
    const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";
    const FIG8: &str = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]";

    fn dense(pd: &str, reduced: bool) -> BettiTable {
        let mut d = LinkDiagram::parse(pd).unwrap();
        if reduced {
            d = d.with_default_basepoint();
        }
        betti(&build_complex(&d, reduced, DENSE_HARD_CAP).unwrap()).unwrap()
    }

    fn scanned(pd: &str, reduced: bool) -> BettiTable {
        let mut d = LinkDiagram::parse(pd).unwrap();
        if reduced {
            d = d.with_default_basepoint();
        }
        scan_compute(&d, reduced, 1 << 22).unwrap()
    }

    #[test]
    fn unknot_dense() {
        let t = dense("U1", false);
        assert_eq!(t.get(0, 1), 1);
        assert_eq!(t.get(0, -1), 1);
        assert_eq!(t.total(), 2);
        let r = dense("U1", true);
        assert_eq!(r.get(0, 0), 1);
        assert_eq!(r.total(), 1);
    }

    #[test]
    fn trefoil_dense_totals() {
        assert_eq!(dense(TREFOIL, false).total(), 6);
        assert_eq!(dense(TREFOIL, true).total(), 3);
    }

    #[test]
    fn scan_matches_dense_bidegree_by_bidegree() {
        for pd in [
            "U1",
            "U2",
            "X[1,2,2,1]",
            "X[1,1,2,2]",
            "X[1,2,2,3] X[4,4,1,3]",
            HOPF,
            TREFOIL,
            FIG8,
        ] {
            for reduced in [false, true] {
                assert_eq!(
                    scanned(pd, reduced),
                    dense(pd, reduced),
                    "scan vs dense mismatch on {pd} reduced={reduced}"
                );
            }
        }
    }

    #[test]
    fn mirror_preserves_total_rank() {
        for pd in [HOPF, TREFOIL, FIG8] {
            let d = LinkDiagram::parse(pd).unwrap();
            let m = d.mirror();
            let td = betti(&build_complex(&d, false, DENSE_HARD_CAP).unwrap()).unwrap();
            let tm = betti(&build_complex(&m, false, DENSE_HARD_CAP).unwrap()).unwrap();
            assert_eq!(td.total(), tm.total(), "{pd}");
        }
    }

    #[test]
    fn rank_doubles_from_reduced_to_unreduced() {
        for pd in ["U1", "U2", HOPF, TREFOIL, FIG8] {
            assert_eq!(dense(pd, false).total(), 2 * dense(pd, true).total(), "{pd}");
        }
    }

    #[test]
    fn basepoint_choice_does_not_change_reduced_ranks() {
        let d = LinkDiagram::parse(TREFOIL).unwrap();
        let tables: Vec<BettiTable> = d
            .edges()
            .map(|e| {
                let db = d
                    .clone()
                    .with_basepoint(crate::diagram::BasePoint::Edge(e))
                    .unwrap();
                betti(&build_complex(&db, true, DENSE_HARD_CAP).unwrap()).unwrap()
            })
            .collect();
        for t in &tables[1..] {
            assert_eq!(t, &tables[0]);
        }
    }

    #[test]
    fn auto_dispatches_on_crossing_count() {
        let d = LinkDiagram::parse(TREFOIL).unwrap();
        let caps = Caps { dense_max_crossings: 2, ..Caps::default() };
        // above the dense cap, auto routes to the scan pipeline
        let t = compute_betti(&d, false, Algorithm::Auto, &caps).unwrap();
        assert_eq!(t.total(), 6);
        // explicit dense refuses
        assert!(matches!(
            compute_betti(&d, false, Algorithm::Dense, &caps),
            Err(HomologyError::Cube(CubeError::CrossingCapExceeded { .. }))
        ));
    }
}
