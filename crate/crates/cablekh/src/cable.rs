//! Parallel cables of knot diagrams with the Seifert framing.
//!
//! The blackboard cable replaces every strand by n parallel copies, turning
//! each crossing into an n×n grid of crossings of the same sign. The Seifert
//! framing is restored by inserting -writhe full twists at one point of the
//! cable, after which any two cable components have linking number zero.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagram::{BasePoint, EdgeId, LinkDiagram, PdError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CableError {
    #[error("cabling requires a knot diagram, found {0} components")]
    MultiComponent(usize),
    #[error("insertion locus not found: strands must be distinct edges of the diagram")]
    InsertionLocus,
    #[error(transparent)]
    Pd(#[from] PdError),
}

/// Number of parallel copies and the signed count of full twists inserted to
/// realize the framing. For the Seifert framing the twist correction is the
/// negated writhe of the input diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CableSpec {
    pub n: usize,
    pub twist_correction: i64,
}

impl CableSpec {
    pub fn seifert(d: &LinkDiagram, n: usize) -> CableSpec {
        assert!(n >= 1);
        CableSpec { n, twist_correction: -d.writhe() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwistSign {
    Positive,
    Negative,
}

/// The n parallel copies of a knot diagram with the blackboard framing.
/// Copy 0 runs to the left of the original strand; the k-th copy of input
/// edge e gets the deterministic label `n * rank(e) + k + 1` where rank is
/// the position of e among the sorted input edges.
pub fn blackboard_cable(d: &LinkDiagram, n: usize) -> Result<LinkDiagram, CableError> {
    blackboard_cable_with_bundles(d, n).map(|(c, _)| c)
}

pub(crate) fn blackboard_cable_with_bundles(
    d: &LinkDiagram,
    n: usize,
) -> Result<(LinkDiagram, BTreeMap<(EdgeId, usize), EdgeId>), CableError> {
    assert!(n >= 1);
    if d.num_components() != 1 {
        return Err(CableError::MultiComponent(d.num_components()));
    }
    if d.num_crossings() == 0 {
        // the crossingless unknot cables to the trivial n-component link
        let cable = LinkDiagram::from_parts(vec![], n, Some(BasePoint::Loop(0)))?;
        return Ok((cable, BTreeMap::new()));
    }

    let mut next: EdgeId = 1;
    let mut fresh = |count: usize| {
        let start = next;
        next += count as EdgeId;
        start
    };
    let mut bundle: BTreeMap<(EdgeId, usize), EdgeId> = BTreeMap::new();
    for e in d.edges() {
        let start = fresh(n);
        for k in 0..n {
            bundle.insert((e, k), start + k as EdgeId);
        }
    }

    let mut raw: Vec<[EdgeId; 4]> = Vec::with_capacity(n * n * d.num_crossings());
    for x in d.crossings() {
        let [a, b, c, dd] = x.edges();
        // interior segments of the under rows (t = 1..n-1) and over rows
        let under_base = fresh(n * (n - 1).max(0));
        let over_base = fresh(n * (n - 1).max(0));
        let under = |i: usize, t: usize| -> EdgeId {
            if t == 0 {
                bundle[&(a, i)]
            } else if t == n {
                bundle[&(c, i)]
            } else {
                under_base + (i * (n - 1) + (t - 1)) as EdgeId
            }
        };
        if x.sign() > 0 {
            // over-strand runs b -> d; copy 0 of the over bundle hugs slot a
            let over = |j: usize, s: usize| -> EdgeId {
                if s == 0 {
                    bundle[&(b, j)]
                } else if s == n {
                    bundle[&(dd, j)]
                } else {
                    over_base + (j * (n - 1) + (s - 1)) as EdgeId
                }
            };
            for i in 0..n {
                for j in 0..n {
                    raw.push([under(i, j), over(j, n - 1 - i), under(i, j + 1), over(j, n - i)]);
                }
            }
        } else {
            // over-strand runs d -> b; copy 0 of the over bundle hugs slot c
            let over = |j: usize, s: usize| -> EdgeId {
                if s == 0 {
                    bundle[&(dd, j)]
                } else if s == n {
                    bundle[&(b, j)]
                } else {
                    over_base + (j * (n - 1) + (s - 1)) as EdgeId
                }
            };
            for i in 0..n {
                for j in 0..n {
                    raw.push([under(i, n - 1 - j), over(j, i + 1), under(i, n - j), over(j, i)]);
                }
            }
        }
    }

    let bp_source = match d.basepoint() {
        Some(BasePoint::Edge(e)) => e,
        _ => d.edges().next().expect("diagram with crossings has edges"),
    };
    let bp = BasePoint::Edge(bundle[&(bp_source, 0)]);
    let cable = LinkDiagram::from_parts(raw, 0, Some(bp))?;
    Ok((cable, bundle))
}

/// Inserts `count` full twists of the given sign across the listed parallel
/// strands. Each full twist on m strands is the braid (σ1…σ_{m-1})^m and
/// adds m(m-1) crossings of that sign; the strand permutation is trivial.
pub fn full_twist_insertion(
    d: &LinkDiagram,
    strands: &[EdgeId],
    sign: TwistSign,
    count: usize,
) -> Result<LinkDiagram, CableError> {
    let m = strands.len();
    for (i, &e) in strands.iter().enumerate() {
        if strands[..i].contains(&e) || d.edge_ports(e).is_none() {
            return Err(CableError::InsertionLocus);
        }
    }
    if count == 0 || m <= 1 {
        return Ok(d.clone());
    }

    let heads: Vec<_> = strands.iter().map(|&e| d.edge_ports(e).unwrap().1).collect();
    let mut raw: Vec<[EdgeId; 4]> = d.crossings().iter().map(|x| x.edges()).collect();
    let mut next: EdgeId = d.edges().max().unwrap() + 1;
    let mut cur: Vec<EdgeId> = strands.to_vec();
    for _ in 0..count {
        for _ in 0..m {
            for p in 0..m - 1 {
                let (a, b) = (cur[p], cur[p + 1]);
                let (c, dd) = (next, next + 1);
                next += 2;
                match sign {
                    TwistSign::Positive => raw.push([a, b, dd, c]),
                    TwistSign::Negative => raw.push([b, dd, c, a]),
                }
                cur[p] = c;
                cur[p + 1] = dd;
            }
        }
    }
    // the braid output at position p reattaches to the head of strand p
    for p in 0..m {
        if cur[p] != strands[p] {
            let h = heads[p];
            raw[h.crossing][h.slot] = cur[p];
        }
    }
    Ok(LinkDiagram::from_parts(raw, d.num_free_loops(), d.basepoint())?)
}

/// The n-cable with the framing induced by a Seifert surface: blackboard
/// cable plus -writhe full twists inserted at the bundle of the smallest
/// input edge. Any two components of the result have linking number zero.
pub fn seifert_framed_cable(d: &LinkDiagram, n: usize) -> Result<LinkDiagram, CableError> {
    let spec = CableSpec::seifert(d, n);
    let (bb, bundle) = blackboard_cable_with_bundles(d, n)?;
    if spec.twist_correction == 0 || n == 1 || d.num_crossings() == 0 {
        return Ok(bb);
    }
    let base = d.edges().next().unwrap();
    let strands: Vec<EdgeId> = (0..n).map(|k| bundle[&(base, k)]).collect();
    let sign = if spec.twist_correction > 0 { TwistSign::Positive } else { TwistSign::Negative };
    full_twist_insertion(&bb, &strands, sign, spec.twist_correction.unsigned_abs() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";
    const FIG8: &str = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]";

    #[test]
    fn unknot_cables_to_unlink() {
        let u = LinkDiagram::parse("U1").unwrap();
        let c = blackboard_cable(&u, 2).unwrap();
        assert_eq!(c.num_crossings(), 0);
        assert_eq!(c.num_components(), 2);
        let s = seifert_framed_cable(&u, 3).unwrap();
        assert_eq!(s.num_components(), 3);
        assert_eq!(s.basepoint(), Some(BasePoint::Loop(0)));
    }

    #[test]
    fn blackboard_counts() {
        let t = LinkDiagram::parse(TREFOIL).unwrap();
        let c = blackboard_cable(&t, 2).unwrap();
        assert_eq!(c.num_crossings(), 12);
        assert_eq!(c.num_components(), 2);
        assert_eq!(c.writhe(), 4 * t.writhe());

        let f = LinkDiagram::parse(FIG8).unwrap();
        let c = blackboard_cable(&f, 2).unwrap();
        assert_eq!(c.num_crossings(), 16);
        assert_eq!(c.num_components(), 2);
        assert_eq!(c.writhe(), 0);
    }

    #[test]
    fn blackboard_rejects_links() {
        let hopf = LinkDiagram::parse("X[1,3,2,4] X[3,1,4,2]").unwrap();
        assert_eq!(blackboard_cable(&hopf, 2), Err(CableError::MultiComponent(2)));
    }

    #[test]
    fn blackboard_linking_is_writhe() {
        let t = LinkDiagram::parse(TREFOIL).unwrap();
        let c = blackboard_cable(&t, 2).unwrap();
        assert_eq!(c.linking_number(0, 1), t.writhe());
    }

    #[test]
    fn twist_insertion_counts() {
        let t = LinkDiagram::parse(TREFOIL).unwrap();
        let (bb, bundle) = blackboard_cable_with_bundles(&t, 2).unwrap();
        let strands = [bundle[&(1, 0)], bundle[&(1, 1)]];

        let same = full_twist_insertion(&bb, &strands, TwistSign::Negative, 0).unwrap();
        assert_eq!(same, bb);

        let one = full_twist_insertion(&bb, &strands, TwistSign::Negative, 1).unwrap();
        assert_eq!(one.num_crossings(), bb.num_crossings() + 2);
        assert_eq!(one.writhe(), bb.writhe() - 2);

        let three = full_twist_insertion(&bb, &strands, TwistSign::Negative, 3).unwrap();
        assert_eq!(three.num_crossings(), bb.num_crossings() + 6);
        assert_eq!(three.num_components(), 2);
    }

    #[test]
    fn twist_insertion_bad_locus() {
        let t = LinkDiagram::parse(TREFOIL).unwrap();
        let bb = blackboard_cable(&t, 2).unwrap();
        assert_eq!(
            full_twist_insertion(&bb, &[9999, 10000], TwistSign::Positive, 1),
            Err(CableError::InsertionLocus)
        );
        assert_eq!(
            full_twist_insertion(&bb, &[1, 1], TwistSign::Positive, 1),
            Err(CableError::InsertionLocus)
        );
    }

    #[test]
    fn seifert_cable_shapes() {
        let t = LinkDiagram::parse(TREFOIL).unwrap();
        let c = seifert_framed_cable(&t, 2).unwrap();
        assert_eq!(c.num_crossings(), 18);
        assert_eq!(c.num_components(), 2);
        assert_eq!(c.linking_number(0, 1), 0);

        let c3 = seifert_framed_cable(&t, 3).unwrap();
        assert_eq!(c3.num_crossings(), 27 + 18);
        assert_eq!(c3.num_components(), 3);
        for i in 0..3 {
            for j in i + 1..3 {
                assert_eq!(c3.linking_number(i, j), 0, "pair ({i},{j})");
            }
        }
    }

    #[test]
    fn seifert_equals_blackboard_at_writhe_zero() {
        let f = LinkDiagram::parse(FIG8).unwrap();
        let c = seifert_framed_cable(&f, 2).unwrap();
        assert_eq!(c, blackboard_cable(&f, 2).unwrap());
        assert_eq!(c.num_crossings(), 16);
        assert_eq!(c.linking_number(0, 1), 0);
    }

    #[test]
    fn kinked_unknot_cable() {
        let k = LinkDiagram::parse("X[1,2,2,1]").unwrap();
        let c = seifert_framed_cable(&k, 2).unwrap();
        assert_eq!(c.num_crossings(), 6);
        assert_eq!(c.num_components(), 2);
        assert_eq!(c.linking_number(0, 1), 0);
    }

    #[test]
    fn cable_pd_roundtrips() {
        let t = LinkDiagram::parse(TREFOIL).unwrap();
        let c = seifert_framed_cable(&t, 2).unwrap();
        let s = c.to_pd_string();
        assert_eq!(LinkDiagram::parse(&s).unwrap(), c);
    }

    #[test]
    fn cable_basepoint_is_on_copy_zero() {
        let t = LinkDiagram::parse(TREFOIL).unwrap().with_default_basepoint();
        let c = seifert_framed_cable(&t, 2).unwrap();
        let Some(BasePoint::Edge(e)) = c.basepoint() else {
            panic!("cable carries an edge basepoint")
        };
        assert!(c.component_of_edge(e).is_some());
    }
}
