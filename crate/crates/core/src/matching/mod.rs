//! The pseudo-distance `d` on the extended half-plane and the matching
//! (bottleneck) distance between cornerpoint diagrams.
//!
//! The solver searches the sorted set of candidate costs (pairwise max-norm
//! distances, half-persistences and the gap between the points at infinity)
//! for the smallest value whose threshold graph admits a perfect matching.
//! Every point gets a private diagonal slot on the other side, and diagonal
//! slots may pair with each other at no cost, so routing a pair "through the
//! diagonal" never needs to be spelled out.

mod bipartite;

use crate::diagram::{Diagram, ExtendedPoint};
use crate::error::{Error, Result};
use crate::extract_diagram;
use crate::size_pair::SizePair;

use bipartite::Bipartite;

/// Point of the closed extended half-plane: finite with `x ≤ y` (on the
/// diagonal when `x == y`) or at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PlanePoint {
    Finite { x: f64, y: f64 },
    Infinity { x: f64 },
}

impl PlanePoint {
    pub fn diagonal(t: f64) -> Self {
        PlanePoint::Finite { x: t, y: t }
    }
}

impl From<ExtendedPoint> for PlanePoint {
    fn from(p: ExtendedPoint) -> Self {
        if p.is_at_infinity() {
            PlanePoint::Infinity { x: p.x }
        } else {
            PlanePoint::Finite { x: p.x, y: p.y }
        }
    }
}

/// `d(p, q) = min{ max(|x-x'|, |y-y'|), max((y-x)/2, (y'-x')/2) }`.
///
/// Two points at infinity are at distance `|x - x'|`; a point at infinity is
/// infinitely far from every finite point.
pub fn pseudo_distance(p: PlanePoint, q: PlanePoint) -> f64 {
    match (p, q) {
        (PlanePoint::Infinity { x: a }, PlanePoint::Infinity { x: b }) => (a - b).abs(),
        (PlanePoint::Infinity { .. }, _) | (_, PlanePoint::Infinity { .. }) => f64::INFINITY,
        (PlanePoint::Finite { x, y }, PlanePoint::Finite { x: x2, y: y2 }) => {
            let direct = (x - x2).abs().max((y - y2).abs());
            let via_diagonal = ((y - x) / 2.0).max((y2 - x2) / 2.0);
            direct.min(via_diagonal)
        }
    }
}

fn linf(a: &ExtendedPoint, b: &ExtendedPoint) -> f64 {
    (a.x - b.x).abs().max((a.y - b.y).abs())
}

/// One side of a matched pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MatchTarget {
    Point(ExtendedPoint),
    Infinity,
    Diagonal,
}

/// An optimal pairing between two diagrams. The points at infinity are
/// paired with each other; every proper point, counted with multiplicity,
/// appears exactly once.
#[derive(Clone, Debug, PartialEq)]
pub struct Matching {
    pub pairs: Vec<(MatchTarget, MatchTarget)>,
    pub bottleneck_cost: f64,
}

impl Matching {
    fn side(target: MatchTarget, diagram: &Diagram) -> Option<PlanePoint> {
        match target {
            MatchTarget::Point(p) => Some(p.into()),
            MatchTarget::Infinity => Some(PlanePoint::Infinity {
                x: diagram.infinity_x(),
            }),
            MatchTarget::Diagonal => None,
        }
    }

    /// Cost of each pair under `d`; `left` resolves the abscissa of the
    /// point at infinity for the left side, `right` for the right side.
    pub fn pair_costs(&self, left: &Diagram, right: &Diagram) -> Vec<f64> {
        self.pairs
            .iter()
            .map(
                |&(a, b)| match (Self::side(a, left), Self::side(b, right)) {
                    (Some(p), Some(q)) => pseudo_distance(p, q),
                    (Some(PlanePoint::Finite { x, y }), None)
                    | (None, Some(PlanePoint::Finite { x, y })) => (y - x) / 2.0,
                    (Some(PlanePoint::Infinity { .. }), None)
                    | (None, Some(PlanePoint::Infinity { .. })) => f64::INFINITY,
                    (None, None) => 0.0,
                },
            )
            .collect()
    }

    /// Checks coverage of both diagrams and that the stored cost is the
    /// maximum pair cost.
    pub fn is_valid_for(&self, left: &Diagram, right: &Diagram) -> bool {
        let mut lhs = Vec::new();
        let mut rhs = Vec::new();
        let mut infinity_pairs = 0;
        for &(a, b) in &self.pairs {
            match (a, b) {
                (MatchTarget::Infinity, MatchTarget::Infinity) => infinity_pairs += 1,
                (MatchTarget::Infinity, _) | (_, MatchTarget::Infinity) => return false,
                _ => {}
            }
            if let MatchTarget::Point(p) = a {
                lhs.push(p);
            }
            if let MatchTarget::Point(q) = b {
                rhs.push(q);
            }
        }
        let sorted = |mut v: Vec<ExtendedPoint>| {
            v.sort_by(|a, b| a.total_cmp(b));
            v
        };
        let max_cost = self.pair_costs(left, right).into_iter().fold(0.0, f64::max);
        infinity_pairs == 1
            && sorted(lhs) == left.expanded()
            && sorted(rhs) == right.expanded()
            && max_cost == self.bottleneck_cost
    }
}

/// Exact matching distance with one optimal matching as witness.
///
/// Among optimal matchings the witness is the lexicographically smallest
/// assignment, listing left points in diagram order and preferring right
/// points (in diagram order) over the diagonal.
pub fn matching_distance(d1: &Diagram, d2: &Diagram) -> (f64, Matching) {
    let left = d1.expanded();
    let right = d2.expanded();
    let (n, m) = (left.len(), right.len());
    let infinity_gap = (d1.infinity_x() - d2.infinity_x()).abs();

    let mut candidates = Vec::with_capacity(n * m + n + m + 1);
    candidates.push(infinity_gap);
    for a in &left {
        candidates.push(a.half_persistence());
        for b in &right {
            candidates.push(linf(a, b));
        }
    }
    candidates.extend(right.iter().map(ExtendedPoint::half_persistence));
    candidates.retain(|&c| c >= infinity_gap);
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // left vertices: proper points of d1, then diagonal slots of d2's points;
    // right vertices: proper points of d2, then diagonal slots of d1's points
    let graph_at = |t: f64| {
        let mut g = Bipartite::new(n + m, m + n);
        for (i, a) in left.iter().enumerate() {
            for (j, b) in right.iter().enumerate() {
                if linf(a, b) <= t {
                    g.add_edge(i, j);
                }
            }
            if a.half_persistence() <= t {
                g.add_edge(i, m + i);
            }
        }
        for (j, b) in right.iter().enumerate() {
            if b.half_persistence() <= t {
                g.add_edge(n + j, j);
            }
            for i in 0..n {
                g.add_edge(n + j, m + i);
            }
        }
        g
    };
    let perfect = |t: f64| {
        let mut g = graph_at(t);
        let mate = g.maximum_matching();
        mate.iter().all(Option::is_some).then_some((g, mate))
    };

    // the largest candidate sends everything to the diagonal, so it is feasible
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect(candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let cost = candidates[lo];
    let (g, mate) = perfect(cost).expect("largest candidate is always feasible");
    let mate = g.lex_min_perfect(mate);

    let mut pairs = Vec::with_capacity(1 + n + m);
    pairs.push((MatchTarget::Infinity, MatchTarget::Infinity));
    for (i, a) in left.iter().enumerate() {
        let other = if mate[i] < m {
            MatchTarget::Point(right[mate[i]])
        } else {
            MatchTarget::Diagonal
        };
        pairs.push((MatchTarget::Point(*a), other));
    }
    for &r in &mate[n..] {
        if r < m {
            pairs.push((MatchTarget::Diagonal, MatchTarget::Point(right[r])));
        }
    }
    let mut matching = Matching {
        pairs,
        bottleneck_cost: cost,
    };
    matching.bottleneck_cost = matching.pair_costs(d1, d2).into_iter().fold(0.0, f64::max);
    (cost, matching)
}

/// Largest total multiplicity per side accepted by the brute-force oracle.
pub const BRUTE_FORCE_CAP: usize = 8;

/// Matching distance by exhaustive enumeration of assignments; an oracle for
/// [`matching_distance`] on small diagrams.
pub fn brute_force_matching_distance(d1: &Diagram, d2: &Diagram) -> Result<f64> {
    let left = d1.expanded();
    let right = d2.expanded();
    for size in [left.len(), right.len()] {
        if size > BRUTE_FORCE_CAP {
            return Err(Error::SizeCap {
                size,
                cap: BRUTE_FORCE_CAP,
            });
        }
    }
    let base = (d1.infinity_x() - d2.infinity_x()).abs();
    let mut used = vec![false; right.len()];
    let mut best = f64::INFINITY;
    assign(0, base, &left, &right, &mut used, &mut best);
    Ok(best)
}

fn assign(
    i: usize,
    running: f64,
    left: &[ExtendedPoint],
    right: &[ExtendedPoint],
    used: &mut [bool],
    best: &mut f64,
) {
    if running >= *best {
        return;
    }
    if i == left.len() {
        let rest = right
            .iter()
            .zip(used.iter())
            .filter(|(_, &u)| !u)
            .map(|(b, _)| pseudo_distance((*b).into(), PlanePoint::diagonal(b.x)))
            .fold(running, f64::max);
        *best = best.min(rest);
        return;
    }
    let a = left[i];
    let to_diagonal = pseudo_distance(a.into(), PlanePoint::diagonal(a.x));
    assign(i + 1, running.max(to_diagonal), left, right, used, best);
    for j in 0..right.len() {
        if !used[j] {
            used[j] = true;
            let c = pseudo_distance(a.into(), right[j].into());
            assign(i + 1, running.max(c), left, right, used, best);
            used[j] = false;
        }
    }
}

/// Compares the diagrams of `φ` and a perturbation `ψ` with
/// `max |φ - ψ| ≤ eps`. Returns the matching distance and whether both it and
/// the displacement of the point at infinity stay within `eps`.
pub fn stability_probe(sp: &SizePair, psi: &[f64], eps: f64) -> Result<(f64, bool)> {
    if psi.len() != sp.len() {
        return Err(Error::InvalidDiagram(format!(
            "perturbation has {} values for {} vertices",
            psi.len(),
            sp.len()
        )));
    }
    let found = sp
        .values()
        .iter()
        .zip(psi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if !(found <= eps) {
        return Err(Error::PerturbationTooLarge { found, bound: eps });
    }
    let perturbed = sp.with_values(psi.to_vec())?;
    let (d_phi, d_psi) = (extract_diagram(sp), extract_diagram(&perturbed));
    let (dist, _) = matching_distance(&d_phi, &d_psi);
    let infinity_shift = (d_phi.infinity_x() - d_psi.infinity_x()).abs();
    Ok((dist, dist <= eps && infinity_shift <= eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(x: f64, y: f64) -> PlanePoint {
        PlanePoint::Finite { x, y }
    }

    #[test]
    fn pseudo_distance_examples() {
        assert_eq!(pseudo_distance(fin(1.0, 3.0), fin(2.0, 4.0)), 1.0);
        assert_eq!(
            pseudo_distance(
                PlanePoint::Infinity { x: 0.0 },
                PlanePoint::Infinity { x: 2.0 }
            ),
            2.0
        );
        assert_eq!(pseudo_distance(fin(1.0, 1.5), fin(10.0, 10.2)), 0.25);
        assert_eq!(pseudo_distance(fin(1.0, 3.0), fin(1.0, 3.0)), 0.0);
        assert_eq!(
            pseudo_distance(PlanePoint::diagonal(1.0), PlanePoint::diagonal(7.0)),
            0.0
        );
        assert_eq!(
            pseudo_distance(fin(1.0, 3.0), PlanePoint::Infinity { x: 1.0 }),
            f64::INFINITY
        );
        assert_eq!(
            pseudo_distance(fin(1.0, 3.0), PlanePoint::diagonal(40.0)),
            1.0
        );
    }

    #[test]
    fn distance_to_itself_is_zero() {
        let d = Diagram::new(0.0, [(1.0, 2.0, 2), (0.0, 3.0, 1)]).unwrap();
        let (dist, m) = matching_distance(&d, &d);
        assert_eq!(dist, 0.0);
        assert!(m.is_valid_for(&d, &d));
        for (a, b) in &m.pairs {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn lone_point_goes_to_diagonal() {
        let d1 = Diagram::new(0.0, [(1.0, 3.0, 1)]).unwrap();
        let d2 = Diagram::empty(0.0);
        let (dist, m) = matching_distance(&d1, &d2);
        assert_eq!(dist, 1.0);
        let expected = ExtendedPoint::proper(1.0, 3.0).unwrap();
        assert_eq!(
            m.pairs[1],
            (MatchTarget::Point(expected), MatchTarget::Diagonal)
        );
        assert!(m.is_valid_for(&d1, &d2));
        assert_eq!(brute_force_matching_distance(&d1, &d2).unwrap(), 1.0);
    }

    #[test]
    fn two_against_one() {
        let d1 = Diagram::new(0.0, [(1.0, 2.0, 1), (0.0, 3.0, 1)]).unwrap();
        let d2 = Diagram::new(0.5, [(1.2, 2.1, 1)]).unwrap();
        // sending (0,3) to (1.2,2.1) costs 1.2 and beats the diagonal (1.5)
        let oracle = brute_force_matching_distance(&d1, &d2).unwrap();
        assert_eq!(oracle, 1.2);
        let (dist, m) = matching_distance(&d1, &d2);
        assert_eq!(dist, oracle);
        assert!(m.is_valid_for(&d1, &d2));
    }

    #[test]
    fn brute_force_small_cases() {
        let e0 = Diagram::empty(0.0);
        let e3 = Diagram::empty(0.3);
        assert_eq!(brute_force_matching_distance(&e0, &e3).unwrap(), 0.3);
        let a = Diagram::new(0.0, [(1.0, 3.0, 1)]).unwrap();
        let b = Diagram::new(0.0, [(2.0, 4.0, 1)]).unwrap();
        assert_eq!(brute_force_matching_distance(&a, &b).unwrap(), 1.0);
        let big = Diagram::new(0.0, [(1.0, 3.0, 9)]).unwrap();
        assert_eq!(
            brute_force_matching_distance(&big, &a),
            Err(Error::SizeCap { size: 9, cap: 8 })
        );
    }

    #[test]
    fn stability_examples() {
        let sp = SizePair::path(&[0.0, 2.0, 1.0, 3.0, 0.0]).unwrap();
        let same = sp.values().to_vec();
        assert_eq!(stability_probe(&sp, &same, 0.0).unwrap(), (0.0, true));
        let (dist, holds) = stability_probe(&sp, &[0.0, 2.0, 1.0625, 3.0, 0.0], 0.0625).unwrap();
        assert!(holds);
        assert_eq!(dist, 0.0625);
        assert!(matches!(
            stability_probe(&sp, &[0.0, 2.0, 1.5, 3.0, 0.0], 0.25),
            Err(Error::PerturbationTooLarge { .. })
        ));
    }
}
