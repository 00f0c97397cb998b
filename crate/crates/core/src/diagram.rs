//! Cornerpoint diagrams: extraction from a size pair by an elder-rule sweep,
//! evaluation of `ℓ*` from a diagram, and the finite-difference multiplicity
//! formulas that serve as an independent check on extraction.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::size_pair::{check_half_plane, min_gap, rsf_unchecked, SizePair};
use crate::union_find::DisjointSets;

/// A point of `Δ*`: either proper (`x < y`, both finite) or at infinity
/// (`y = +∞`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtendedPoint {
    pub x: f64,
    pub y: f64,
}

impl ExtendedPoint {
    pub fn proper(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidDiagram(format!(
                "non-finite coordinate in ({x}, {y})"
            )));
        }
        check_half_plane(x, y)?;
        Ok(ExtendedPoint { x, y })
    }

    pub fn at_infinity(x: f64) -> Self {
        ExtendedPoint {
            x,
            y: f64::INFINITY,
        }
    }

    pub fn is_proper(&self) -> bool {
        self.y.is_finite()
    }

    pub fn is_at_infinity(&self) -> bool {
        self.y == f64::INFINITY
    }

    /// Max-norm distance to the diagonal, `(y - x) / 2`.
    pub fn half_persistence(&self) -> f64 {
        (self.y - self.x) / 2.0
    }

    pub(crate) fn total_cmp(&self, other: &Self) -> Ordering {
        self.x
            .total_cmp(&other.x)
            .then_with(|| self.y.total_cmp(&other.y))
    }
}

/// One cornerpoint at infinity plus a finite multiset of proper cornerpoints.
///
/// Proper points are kept sorted by `(x, y)` with duplicates merged into
/// their multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagram {
    infinity_x: f64,
    points: Vec<(ExtendedPoint, usize)>,
}

impl Diagram {
    pub fn new<I>(infinity_x: f64, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64, usize)>,
    {
        if !infinity_x.is_finite() {
            return Err(Error::InvalidDiagram(format!(
                "infinity abscissa {infinity_x} is not finite"
            )));
        }
        let mut pts = Vec::new();
        for (x, y, mult) in points {
            if mult == 0 {
                return Err(Error::InvalidDiagram(format!(
                    "point ({x}, {y}) has multiplicity 0"
                )));
            }
            pts.push((ExtendedPoint::proper(x, y)?, mult));
        }
        Ok(Self::from_points(infinity_x, pts))
    }

    pub fn empty(infinity_x: f64) -> Self {
        Diagram {
            infinity_x,
            points: Vec::new(),
        }
    }

    fn from_points(infinity_x: f64, mut pts: Vec<(ExtendedPoint, usize)>) -> Self {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut points: Vec<(ExtendedPoint, usize)> = Vec::with_capacity(pts.len());
        for (p, m) in pts {
            match points.last_mut() {
                Some((q, n)) if q.total_cmp(&p) == Ordering::Equal => *n += m,
                _ => points.push((p, m)),
            }
        }
        Diagram { infinity_x, points }
    }

    pub fn infinity_x(&self) -> f64 {
        self.infinity_x
    }

    pub fn infinity_point(&self) -> ExtendedPoint {
        ExtendedPoint::at_infinity(self.infinity_x)
    }

    /// Proper cornerpoints with multiplicities, sorted by `(x, y)`.
    pub fn points(&self) -> &[(ExtendedPoint, usize)] {
        &self.points
    }

    /// Sum of multiplicities of the proper cornerpoints.
    pub fn total_multiplicity(&self) -> usize {
        self.points.iter().map(|(_, m)| m).sum()
    }

    /// Proper cornerpoints repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<ExtendedPoint> {
        self.points
            .iter()
            .flat_map(|&(p, m)| std::iter::repeat_n(p, m))
            .collect()
    }

    pub fn multiplicity_of(&self, x: f64, y: f64) -> usize {
        self.points
            .iter()
            .find(|(p, _)| p.x == x && p.y == y)
            .map_or(0, |&(_, m)| m)
    }

    /// Representation-formula count, valid for any `(x, y)`.
    pub(crate) fn count(&self, x: f64, y: f64) -> usize {
        let inf = usize::from(self.infinity_x <= x);
        inf + self
            .points
            .iter()
            .filter(|(p, _)| p.x <= x && p.y > y)
            .map(|(_, m)| m)
            .sum::<usize>()
    }
}

/// Cornerpoint diagram of a size pair.
///
/// Vertices are swept by `(value, index)`; each vertex opens a component and
/// is merged with its already-swept neighbours. On a merge the component with
/// the younger birth (ties: larger elder index) dies at the current value and
/// emits `(birth, value)` unless the pair has zero persistence.
pub fn extract_diagram(sp: &SizePair) -> Diagram {
    let n = sp.len();
    let values = sp.values();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut rank = vec![0usize; n];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }

    let mut ds = DisjointSets::new(n);
    // elder vertex of the component rooted at each root
    let mut elder: Vec<usize> = (0..n).collect();
    let mut pairs = Vec::new();

    for &v in &order {
        let level = values[v];
        for &u in sp.neighbors(v) {
            if rank[u] > rank[v] {
                continue;
            }
            let (ru, rv) = (ds.find(u), ds.find(v));
            if ru == rv {
                continue;
            }
            let (eu, ev) = (elder[ru], elder[rv]);
            let (old, young) = if rank[eu] < rank[ev] {
                (eu, ev)
            } else {
                (ev, eu)
            };
            let birth = values[young];
            if birth < level {
                pairs.push((ExtendedPoint { x: birth, y: level }, 1));
            }
            let root = ds.union(ru, rv);
            elder[root] = old;
        }
    }

    let root = ds.find(0);
    debug_assert_eq!(values[elder[root]], sp.min_value());
    Diagram::from_points(values[elder[root]], pairs)
}

/// `ℓ*(x, y)` recovered from the diagram: the total multiplicity of
/// cornerpoints (the one at infinity included) with `px ≤ x` and `py > y`.
pub fn evaluate_diagram(d: &Diagram, x: f64, y: f64) -> Result<usize> {
    check_half_plane(x, y)?;
    Ok(d.count(x, y))
}

fn half_gap(sp: &SizePair, extra: &[f64]) -> f64 {
    let mut vals = sp.critical_values();
    vals.extend_from_slice(extra);
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    // a constant function with a single probe leaves no gap at all
    min_gap(&vals).unwrap_or(1.0) / 2.0
}

/// Multiplicity of `(x, y)` from the four-corner alternating sum of `ℓ*`.
///
/// `ε` is half the smallest gap among the critical values and the query
/// coordinates (capped by a quarter of `y - x`), below which `ℓ*` is
/// constant, so the minimum over `ε` is attained.
pub fn multiplicity(sp: &SizePair, x: f64, y: f64) -> Result<usize> {
    check_half_plane(x, y)?;
    let eps = half_gap(sp, &[x, y]).min((y - x) / 4.0);
    let l = |a: f64, b: f64| rsf_unchecked(sp, a, b) as i64;
    let mu = l(x + eps, y - eps) - l(x - eps, y - eps) - l(x + eps, y + eps) + l(x - eps, y + eps);
    usize::try_from(mu).map_err(|_| Error::Invariant(format!("negative multiplicity {mu}")))
}

/// Multiplicity of the vertical line `x = k` as a cornerpoint at infinity.
pub fn multiplicity_at_infinity(sp: &SizePair, k: f64) -> usize {
    let eps = half_gap(sp, &[k]);
    let far = sp.max_value().max(k + eps) + 1.0;
    rsf_unchecked(sp, k + eps, far) - rsf_unchecked(sp, k - eps, far)
}

/// Total multiplicity of cornerpoints in the semi-open square
/// `(x̄ - η, x̄ + η] × (ȳ - η, ȳ + η]`, by finite differences of `ℓ*`.
pub fn count_in_square(sp: &SizePair, center: ExtendedPoint, eta: f64) -> Result<usize> {
    let (cx, cy) = (center.x, center.y);
    if !center.is_proper() || !(eta > 0.0) || !(cx + eta < cy - eta) {
        return Err(Error::DegenerateSquare { x: cx, y: cy, eta });
    }
    let l = |a: f64, b: f64| rsf_unchecked(sp, a, b) as i64;
    let n = l(cx + eta, cy - eta) - l(cx - eta, cy - eta) - l(cx + eta, cy + eta)
        + l(cx - eta, cy + eta);
    usize::try_from(n).map_err(|_| Error::Invariant(format!("negative square count {n}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> SizePair {
        SizePair::path(&[0.0, 2.0, 1.0, 3.0, 0.0]).unwrap()
    }

    fn star() -> SizePair {
        SizePair::from_indexed(vec![1.0, 0.0, 0.0, 0.0], &[(0, 1), (0, 2), (0, 3)]).unwrap()
    }

    #[test]
    fn path_diagram() {
        let d = extract_diagram(&path());
        assert_eq!(
            d,
            Diagram::new(0.0, [(0.0, 3.0, 1), (1.0, 2.0, 1)]).unwrap()
        );
        assert_eq!(d.points()[0].0, ExtendedPoint { x: 0.0, y: 3.0 });
    }

    #[test]
    fn single_vertex_and_star() {
        let single = SizePair::from_indexed(vec![4.5], &[]).unwrap();
        assert_eq!(extract_diagram(&single), Diagram::empty(4.5));
        assert_eq!(
            extract_diagram(&star()),
            Diagram::new(0.0, [(0.0, 1.0, 2)]).unwrap()
        );
    }

    #[test]
    fn flat_plateau_emits_nothing() {
        let sp = SizePair::path(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(extract_diagram(&sp), Diagram::empty(1.0));
    }

    #[test]
    fn evaluate_examples() {
        let d = extract_diagram(&path());
        assert_eq!(evaluate_diagram(&d, 0.5, 1.0).unwrap(), 2);
        assert_eq!(evaluate_diagram(&d, -1.0, 5.0).unwrap(), 0);
        assert!(evaluate_diagram(&d, 2.0, 2.0).is_err());
    }

    #[test]
    fn summation_identity_on_layered_diagram() {
        // m at infinity, p with multiplicity 2, q and r simple
        let d = Diagram::new(0.0, [(1.0, 6.0, 2), (3.0, 5.0, 1), (4.0, 7.0, 1)]).unwrap();
        // right of p.x, below p.y, left of q.x and r.x
        assert_eq!(evaluate_diagram(&d, 2.0, 5.5).unwrap(), 3);
    }

    #[test]
    fn multiplicity_examples() {
        let sp = path();
        assert_eq!(multiplicity(&sp, 1.0, 2.0).unwrap(), 1);
        assert_eq!(multiplicity(&sp, 0.0, 3.0).unwrap(), 1);
        assert_eq!(multiplicity(&sp, 0.5, 2.5).unwrap(), 0);
        assert_eq!(multiplicity(&star(), 0.0, 1.0).unwrap(), 2);
        assert!(multiplicity(&sp, 3.0, 1.0).is_err());
    }

    #[test]
    fn multiplicity_at_infinity_examples() {
        let sp = path();
        assert_eq!(multiplicity_at_infinity(&sp, 0.0), 1);
        assert_eq!(multiplicity_at_infinity(&sp, 1.0), 0);
        assert_eq!(multiplicity_at_infinity(&sp, -3.0), 0);
        assert_eq!(multiplicity_at_infinity(&sp, 10.0), 0);
    }

    #[test]
    fn square_counts() {
        let sp = path();
        let c = |x, y| ExtendedPoint::proper(x, y).unwrap();
        assert_eq!(count_in_square(&sp, c(1.0, 2.0), 0.25).unwrap(), 1);
        assert_eq!(count_in_square(&sp, c(0.5, 2.5), 0.25).unwrap(), 0);
        assert_eq!(count_in_square(&star(), c(0.0, 1.0), 0.25).unwrap(), 2);
        assert!(matches!(
            count_in_square(&sp, c(1.0, 2.0), 0.5),
            Err(Error::DegenerateSquare { .. })
        ));
        assert!(count_in_square(&sp, c(1.0, 2.0), 0.0).is_err());
    }

    #[test]
    fn diagram_validation() {
        assert!(Diagram::new(0.0, [(2.0, 1.0, 1)]).is_err());
        assert!(Diagram::new(0.0, [(1.0, 2.0, 0)]).is_err());
        assert!(Diagram::new(f64::NAN, []).is_err());
        let merged = Diagram::new(0.0, [(1.0, 2.0, 1), (1.0, 2.0, 2)]).unwrap();
        assert_eq!(merged.points(), &[(ExtendedPoint { x: 1.0, y: 2.0 }, 3)]);
    }
}
