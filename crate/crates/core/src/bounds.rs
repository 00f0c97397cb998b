//! Lower bounds for the natural pseudo-distance between size pairs.
//!
//! Three quantities are compared here: the jump bound `s` obtained from pairs
//! of points where one reduced size function exceeds the other, the matching
//! distance, and (for small graphs) the exact minimum over graph
//! isomorphisms of the sup-norm change in the measuring function. They always
//! satisfy `s ≤ d_match ≤ exact`.

use crate::diagram::{extract_diagram, Diagram};
use crate::error::{Error, Result};
use crate::matching::{matching_distance, Matching};
use crate::size_pair::SizePair;

/// Largest vertex count accepted by [`exact_graph_pseudo_distance`].
pub const ISOMORPHISM_CAP: usize = 9;

/// Pair `((x, y), (ξ, η))` of query points.
pub type JumpWitness = ((f64, f64), (f64, f64));

/// The jump bound and a pair `((x, y), (ξ, η))` attaining it in the limit.
#[derive(Clone, Debug, PartialEq)]
pub struct EarlierBound {
    pub value: f64,
    pub witness: Option<JumpWitness>,
}

/// Half-open interval `[lo, hi)` of one coordinate; `lo` may be `-∞` and
/// `hi` may be `+∞`.
#[derive(Clone, Copy, Debug)]
struct Span {
    lo: f64,
    hi: f64,
}

impl Span {
    fn sample(&self) -> f64 {
        if self.lo.is_finite() {
            self.lo
        } else {
            self.hi - 1.0
        }
    }
}

fn spans(mut breaks: Vec<f64>) -> Vec<Span> {
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let mut out = Vec::with_capacity(breaks.len() + 1);
    let mut lo = f64::NEG_INFINITY;
    for b in breaks {
        out.push(Span { lo, hi: b });
        lo = b;
    }
    out.push(Span {
        lo,
        hi: f64::INFINITY,
    });
    out
}

/// Cells on which `ℓ*` is constant, with the constant value.
fn cells(d: &Diagram) -> Vec<(Span, Span, usize)> {
    let xs = spans(
        std::iter::once(d.infinity_x())
            .chain(d.points().iter().map(|(p, _)| p.x))
            .collect(),
    );
    let ys = spans(d.points().iter().map(|(p, _)| p.y).collect());
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for &sx in &xs {
        for &sy in &ys {
            out.push((sx, sy, d.count(sx.sample(), sy.sample())));
        }
    }
    out
}

/// Supremum of `min{ξ - x, y - η}` over `x ≤ ξ < η ≤ y`, `x < y`, with each
/// coordinate in its cell, or `None` when that set is empty.
fn cell_pair_sup(sx: Span, sy: Span, sxi: Span, seta: Span) -> Option<(f64, JumpWitness)> {
    let a = sx.lo;
    let top = sy.hi;
    let xi_lo = sxi.lo.max(a);
    let xi_hi = sxi.hi.min(seta.hi).min(top);
    if !(xi_lo < xi_hi && seta.lo < top) {
        return None;
    }
    // over the closure: x = a and y = top are optimal, leaving a concave
    // function of ξ with η = max(β, ξ)
    let f = |xi: f64| (xi - a).min(top - seta.lo.max(xi));
    let mut best: Option<(f64, f64)> = None;
    for c in [xi_lo, xi_hi, seta.lo, (a + top) / 2.0, a + top - seta.lo] {
        let xi = c.clamp(xi_lo, xi_hi);
        if !xi.is_finite() {
            continue;
        }
        let v = f(xi);
        if best.is_none_or(|(bv, _)| v > bv) {
            best = Some((v, xi));
        }
    }
    let (value, xi) = best?;
    let eta = seta.lo.max(xi);
    let y = if top.is_finite() {
        top
    } else {
        sy.lo.max(eta + value)
    };
    Some((value, ((a, y), (xi, eta))))
}

/// Best lower bound obtainable from pairs `((x, y), (ξ, η))` with `ξ ≥ x`,
/// `η ≤ y` and `ℓ*₁(x, y) > ℓ*₂(ξ, η)`: the supremum of `min{ξ - x, y - η}`.
///
/// Both functions are constant on the cells cut out by their cornerpoint
/// coordinates, so the supremum is computed exactly cell pair by cell pair.
/// Returns 0 without witness when no such pair exists.
pub fn earlier_bound(d1: &Diagram, d2: &Diagram) -> EarlierBound {
    let first = cells(d1);
    let second = cells(d2);
    let mut best = EarlierBound {
        value: 0.0,
        witness: None,
    };
    for &(sx, sy, l1) in &first {
        if l1 == 0 {
            continue;
        }
        for &(sxi, seta, l2) in &second {
            if l1 <= l2 {
                continue;
            }
            if let Some((value, witness)) = cell_pair_sup(sx, sy, sxi, seta) {
                if best.witness.is_none() || value > best.value {
                    best = EarlierBound {
                        value,
                        witness: Some(witness),
                    };
                }
            }
        }
    }
    best.value = best.value.max(0.0);
    best
}

/// `min_h max_v |φ₁(v) - φ₂(h(v))|` over graph isomorphisms `h`, together
/// with a minimising isomorphism.
pub fn optimal_isomorphism(sp1: &SizePair, sp2: &SizePair) -> Result<(f64, Vec<usize>)> {
    let n = sp1.len();
    if n.max(sp2.len()) > ISOMORPHISM_CAP {
        return Err(Error::SizeCap {
            size: n.max(sp2.len()),
            cap: ISOMORPHISM_CAP,
        });
    }
    if n != sp2.len() || sp1.edges().len() != sp2.edges().len() {
        return Err(Error::NonIsomorphic);
    }
    let mut search = IsoSearch {
        sp1,
        sp2,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        best: f64::INFINITY,
        best_map: None,
    };
    search.extend(0, 0.0);
    match search.best_map {
        Some(map) => Ok((search.best, map)),
        None => Err(Error::NonIsomorphic),
    }
}

/// Exact pseudo-distance between two small isomorphic graphs, taken over
/// graph isomorphisms.
pub fn exact_graph_pseudo_distance(sp1: &SizePair, sp2: &SizePair) -> Result<f64> {
    optimal_isomorphism(sp1, sp2).map(|(d, _)| d)
}

struct IsoSearch<'a> {
    sp1: &'a SizePair,
    sp2: &'a SizePair,
    map: Vec<usize>,
    used: Vec<bool>,
    best: f64,
    best_map: Option<Vec<usize>>,
}

impl IsoSearch<'_> {
    fn extend(&mut self, v: usize, running: f64) {
        if self.best_map.is_some() && running >= self.best {
            return;
        }
        if v == self.sp1.len() {
            self.best = running;
            self.best_map = Some(self.map.clone());
            return;
        }
        for w in 0..self.sp2.len() {
            if self.used[w] || self.sp1.neighbors(v).len() != self.sp2.neighbors(w).len() {
                continue;
            }
            // adjacency with every already-mapped vertex must be preserved
            let consistent =
                (0..v).all(|u| self.sp1.has_edge(u, v) == self.sp2.has_edge(self.map[u], w));
            if !consistent {
                continue;
            }
            let cost = running.max((self.sp1.value(v) - self.sp2.value(w)).abs());
            self.used[w] = true;
            self.map[v] = w;
            self.extend(v + 1, cost);
            self.used[w] = false;
        }
        self.map[v] = usize::MAX;
    }
}

/// The bound chain `earlier_bound ≤ d_match ≤ exact` for two size pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub d_match: f64,
    pub earlier_bound_s: f64,
    pub exact_pseudo_distance: Option<f64>,
    pub matching: Matching,
    pub earlier_witness: Option<JumpWitness>,
}

impl BoundReport {
    pub fn chain_holds(&self) -> bool {
        self.earlier_bound_s <= self.d_match
            && self.exact_pseudo_distance.is_none_or(|e| self.d_match <= e)
    }
}

/// Builds the bound chain, attempting the exact pseudo-distance when both
/// graphs are within [`ISOMORPHISM_CAP`]. A broken chain is reported as
/// [`Error::Invariant`].
pub fn bound_report(sp1: &SizePair, sp2: &SizePair) -> Result<BoundReport> {
    bound_report_with_cap(sp1, sp2, ISOMORPHISM_CAP)
}

/// As [`bound_report`] with a custom vertex cap for the exact computation;
/// `cap == 0` disables it. Non-isomorphic graphs have no exact value.
pub fn bound_report_with_cap(sp1: &SizePair, sp2: &SizePair, cap: usize) -> Result<BoundReport> {
    let (d1, d2) = (extract_diagram(sp1), extract_diagram(sp2));
    let (d_match, matching) = matching_distance(&d1, &d2);
    let earlier = earlier_bound(&d1, &d2);
    let exact = if sp1.len().max(sp2.len()) <= cap.min(ISOMORPHISM_CAP) {
        match exact_graph_pseudo_distance(sp1, sp2) {
            Ok(e) => Some(e),
            Err(Error::NonIsomorphic) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let report = BoundReport {
        d_match,
        earlier_bound_s: earlier.value,
        exact_pseudo_distance: exact,
        matching,
        earlier_witness: earlier.witness,
    };
    if !report.chain_holds() {
        return Err(Error::Invariant(format!(
            "bound chain broken: s = {}, d_match = {}, exact = {:?}",
            report.earlier_bound_s, report.d_match, report.exact_pseudo_distance
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_against_empty() {
        let d1 = Diagram::new(0.0, [(1.0, 3.0, 1)]).unwrap();
        let d2 = Diagram::empty(0.0);
        let b = earlier_bound(&d1, &d2);
        assert_eq!(b.value, 1.0);
        let ((x, y), (xi, eta)) = b.witness.unwrap();
        assert_eq!((x, y, xi, eta), (1.0, 3.0, 2.0, 2.0));
    }

    #[test]
    fn identical_diagrams_give_zero() {
        let d = Diagram::new(0.0, [(1.0, 2.0, 1), (0.0, 3.0, 1)]).unwrap();
        assert_eq!(earlier_bound(&d, &d).value, 0.0);
        assert_eq!(
            earlier_bound(&Diagram::empty(0.0), &Diagram::empty(0.0)).value,
            0.0
        );
    }

    #[test]
    fn shifted_infinity_is_detected() {
        // ℓ₁ = 1 on x ≥ 0, ℓ₂ = 0 for ξ < 2
        let b = earlier_bound(&Diagram::empty(0.0), &Diagram::empty(2.0));
        assert_eq!(b.value, 2.0);
        // the reverse direction has no admissible pair
        let r = earlier_bound(&Diagram::empty(2.0), &Diagram::empty(0.0));
        assert_eq!(
            r,
            EarlierBound {
                value: 0.0,
                witness: None
            }
        );
    }

    #[test]
    fn exact_pseudo_distance_examples() {
        let sp = SizePair::path(&[0.0, 2.0, 1.0, 3.0, 0.0]).unwrap();
        assert_eq!(exact_graph_pseudo_distance(&sp, &sp).unwrap(), 0.0);
        let reversed = SizePair::path(&[0.0, 3.0, 1.0, 2.0, 0.0]).unwrap();
        assert_eq!(exact_graph_pseudo_distance(&sp, &reversed).unwrap(), 0.0);
        let shifted = sp
            .with_values(sp.values().iter().map(|v| v + 0.5).collect())
            .unwrap();
        assert_eq!(exact_graph_pseudo_distance(&sp, &shifted).unwrap(), 0.5);
        let star = SizePair::from_indexed(
            vec![1.0, 0.0, 0.0, 0.0, 0.0],
            &[(0, 1), (0, 2), (0, 3), (0, 4)],
        )
        .unwrap();
        assert_eq!(
            exact_graph_pseudo_distance(&sp, &star),
            Err(Error::NonIsomorphic)
        );
        let long = SizePair::path(&[0.0; 10]).unwrap();
        assert!(matches!(
            exact_graph_pseudo_distance(&long, &long),
            Err(Error::SizeCap { size: 10, cap: 9 })
        ));
    }

    #[test]
    fn report_chain() {
        let sp = SizePair::path(&[0.0, 2.0, 1.0, 3.0, 0.0]).unwrap();
        let r = bound_report(&sp, &sp).unwrap();
        assert_eq!(
            (r.earlier_bound_s, r.d_match, r.exact_pseudo_distance),
            (0.0, 0.0, Some(0.0))
        );
        let bumped = sp.with_values(vec![0.0, 2.0, 1.25, 3.0, 0.0]).unwrap();
        let r = bound_report(&sp, &bumped).unwrap();
        assert!(r.d_match <= 0.25);
        assert_eq!(r.exact_pseudo_distance, Some(0.25));
        let none = bound_report_with_cap(&sp, &bumped, 0).unwrap();
        assert_eq!(none.exact_pseudo_distance, None);
    }
}
