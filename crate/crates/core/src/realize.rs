//! Realization of two prescribed diagrams by piecewise-linear fields on a
//! rectangle `[0, 1] × [min φ, S]` whose pointwise sup-norm gap equals the
//! matching distance between the diagrams.
//!
//! Each matched pair of an optimal matching gets three columns at
//! `x = 1/(3i+1), 1/(3i), 1/(3i-1)`. A proper cornerpoint `(x, y)` becomes a
//! pit on the middle column (bottom `x`, rim `y`, centred at height
//! `(x + y)/2`) flanked by columns that hold the rim value across the pit's
//! span; a cornerpoint matched to the diagonal faces a plateau at its
//! midpoint height in the other field. Columns `x = 0` and `x = 1` are
//! linear in `y`, and the fields are linear in `x` between columns.
//!
//! All arithmetic is exact over the rationals; `f64` inputs convert exactly.

use num::{BigRational, Signed, ToPrimitive, Zero};

use crate::diagram::{extract_diagram, Diagram, ExtendedPoint};
use crate::error::{Error, Result};
use crate::matching::{matching_distance, MatchTarget};
use crate::size_pair::SizePair;

pub type Rational = BigRational;

fn rat(v: f64) -> Result<Rational> {
    Rational::from_float(v).ok_or_else(|| Error::Realization(format!("non-finite value {v}")))
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn to_f64(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

/// Piecewise-linear profile of one column: values at increasing heights.
#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub ys: Vec<Rational>,
    pub values: Vec<Rational>,
}

impl Column {
    fn from_knots(knots: Vec<(Rational, Rational)>) -> Self {
        let (ys, values) = knots.into_iter().unzip();
        Column { ys, values }
    }

    /// Linear interpolation, constant beyond the end knots.
    pub fn eval(&self, y: &Rational) -> Rational {
        let k = self.ys.partition_point(|b| b <= y);
        if k == 0 {
            return self.values[0].clone();
        }
        if k == self.ys.len() {
            return self.values[k - 1].clone();
        }
        let (y0, y1) = (&self.ys[k - 1], &self.ys[k]);
        let (v0, v1) = (&self.values[k - 1], &self.values[k]);
        v0 + (v1 - v0) * (y - y0) / (y1 - y0)
    }
}

/// A field on `[0, 1] × [bottom, S]` given by column profiles at `x_breaks`
/// and linear interpolation in `x` between them.
#[derive(Clone, Debug, PartialEq)]
pub struct RectField {
    x_breaks: Vec<Rational>,
    columns: Vec<Column>,
    bottom: Rational,
    top: Rational,
}

impl RectField {
    pub fn x_breaks(&self) -> &[Rational] {
        &self.x_breaks
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    /// Lower edge of the rectangle (the smaller of the two minima).
    pub fn bottom(&self) -> &Rational {
        &self.bottom
    }

    /// Upper edge `S` of the rectangle.
    pub fn top(&self) -> &Rational {
        &self.top
    }

    pub fn value_at(&self, x: &Rational, y: &Rational) -> Rational {
        let k = self.x_breaks.partition_point(|b| b <= x);
        if k == 0 {
            return self.columns[0].eval(y);
        }
        if k == self.x_breaks.len() {
            return self.columns[k - 1].eval(y);
        }
        let (x0, x1) = (&self.x_breaks[k - 1], &self.x_breaks[k]);
        let (v0, v1) = (self.columns[k - 1].eval(y), self.columns[k].eval(y));
        &v0 + (&v1 - &v0) * (x - x0) / (x1 - x0)
    }

    /// Sorted union of every column's breakpoints.
    pub fn y_grid(&self) -> Vec<Rational> {
        let mut ys: Vec<Rational> = self.columns.iter().flat_map(|c| c.ys.clone()).collect();
        ys.sort();
        ys.dedup();
        ys
    }

    pub fn to_json(&self) -> crate::io::RectFieldJson {
        crate::io::RectFieldJson {
            x_breaks: self.x_breaks.iter().map(to_f64).collect(),
            y_breaks_per_column: self
                .columns
                .iter()
                .map(|c| c.ys.iter().map(to_f64).collect())
                .collect(),
            values_per_column: self
                .columns
                .iter()
                .map(|c| c.values.iter().map(to_f64).collect())
                .collect(),
            s: to_f64(&self.top),
            min_phi: to_f64(&self.bottom),
        }
    }
}

/// How a matched index sits in the two index sets.
#[derive(Clone, Debug, PartialEq)]
pub enum PairKind {
    /// Proper points on both sides.
    Both,
    /// Only the field with the lower minimum has a proper point here.
    LowerOnly,
    /// Only the field with the higher minimum has a proper point here.
    UpperOnly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealizationParams {
    /// Upper edge `S` of the rectangle.
    pub s: Rational,
    /// Lower edge, the smaller of the two minima.
    pub bottom: Rational,
    /// Whether the second diagram has the lower minimum and was built as
    /// the lower field.
    pub swapped: bool,
    /// Per matched index (1-based column group `i` at position `i - 1`).
    pub kinds: Vec<PairKind>,
    pub centers: Vec<Rational>,
    pub epsilons: Vec<Rational>,
    /// Exact cost of the matching used for the construction.
    pub matching_cost: Rational,
}

struct Side {
    floor: Rational,
    rim: Rational,
}

fn side(p: &ExtendedPoint) -> Result<Side> {
    Ok(Side {
        floor: rat(p.x)?,
        rim: rat(p.y)?,
    })
}

/// Builds the two fields for `d1` and `d2` (returned in that order).
///
/// The construction is checked before returning: the largest gap between
/// the fields over the breakpoint grid must equal the exact cost of the
/// matching it was built from.
pub fn realize(d1: &Diagram, d2: &Diagram) -> Result<(RectField, RectField, RealizationParams)> {
    for d in [d1, d2] {
        if let Some((p, _)) = d.points().iter().find(|(p, _)| p.x < d.infinity_x()) {
            return Err(Error::InvalidDiagram(format!(
                "point ({}, {}) lies left of the point at infinity {}",
                p.x,
                p.y,
                d.infinity_x()
            )));
        }
    }
    let swapped = d1.infinity_x() > d2.infinity_x();
    let (lower, upper) = if swapped { (d2, d1) } else { (d1, d2) };
    let (_, witness) = matching_distance(lower, upper);

    let bottom = rat(lower.infinity_x())?;
    let upper_min = rat(upper.infinity_x())?;
    let mut top = upper_min.clone();
    for d in [lower, upper] {
        for (p, _) in d.points() {
            top = top.max(rat(p.y)?);
        }
    }
    let top = top + int(1);

    let mut pairs: Vec<(Option<ExtendedPoint>, Option<ExtendedPoint>)> = witness
        .pairs
        .iter()
        .filter_map(|&(a, b)| match (a, b) {
            (MatchTarget::Point(p), MatchTarget::Point(q)) => Some((Some(p), Some(q))),
            (MatchTarget::Point(p), MatchTarget::Diagonal) => Some((Some(p), None)),
            (MatchTarget::Diagonal, MatchTarget::Point(q)) => Some((None, Some(q))),
            _ => None,
        })
        .collect();
    // larger features sit closer to x = 1
    let weight = |pair: &(Option<ExtendedPoint>, Option<ExtendedPoint>)| {
        let h = |p: &Option<ExtendedPoint>| p.map_or(0.0, |p| p.half_persistence());
        h(&pair.0).max(h(&pair.1))
    };
    pairs.sort_by(|a, b| weight(b).total_cmp(&weight(a)));

    let identity = Column::from_knots(vec![
        (bottom.clone(), bottom.clone()),
        (top.clone(), top.clone()),
    ]);
    let upper_boundary = Column::from_knots(vec![
        (bottom.clone(), upper_min.clone()),
        (top.clone(), top.clone()),
    ]);
    let pit = |start: &Rational, s: &Side, m: &Rational, e: &Rational| {
        Column::from_knots(vec![
            (bottom.clone(), start.clone()),
            (m - e, s.rim.clone()),
            (m.clone(), s.floor.clone()),
            (m + e, s.rim.clone()),
            (top.clone(), top.clone()),
        ])
    };
    let shelf = |start: &Rational, level: &Rational, m: &Rational, e: &Rational| {
        Column::from_knots(vec![
            (bottom.clone(), start.clone()),
            (m - e, level.clone()),
            (m + e, level.clone()),
            (top.clone(), top.clone()),
        ])
    };

    let two = int(2);
    let mut x_breaks = vec![Rational::zero(), int(1)];
    let mut low_cols = vec![identity.clone(), identity];
    let mut up_cols = vec![upper_boundary.clone(), upper_boundary];
    let mut kinds = Vec::with_capacity(pairs.len());
    let mut centers = Vec::with_capacity(pairs.len());
    let mut epsilons = Vec::with_capacity(pairs.len());
    let mut matching_cost = (&upper_min - &bottom).abs();

    for (idx, (a, b)) in pairs.iter().enumerate() {
        let i = idx as i64 + 1;
        let (kind, anchor) = match (a, b) {
            (Some(p), Some(_)) => (PairKind::Both, *p),
            (Some(p), None) => (PairKind::LowerOnly, *p),
            (None, Some(q)) => (PairKind::UpperOnly, *q),
            (None, None) => unreachable!("diagonal pairs are filtered out"),
        };
        let anchor = side(&anchor)?;
        let m = (&anchor.floor + &anchor.rim) / &two;
        let persistence = &anchor.rim - &anchor.floor;
        let eps = (&persistence / int(4)).min(&m - &bottom).min(&top - &m) / &two;
        if !eps.is_positive() {
            return Err(Error::Realization(format!(
                "pit width for index {i} is not positive"
            )));
        }

        let (lo_mid, lo_flank, up_mid, up_flank, cost) = match kind {
            PairKind::Both => {
                let (p, q) = (side(&a.unwrap())?, side(&b.unwrap())?);
                let cost = (&p.floor - &q.floor).abs().max((&p.rim - &q.rim).abs());
                (
                    pit(&bottom, &p, &m, &eps),
                    shelf(&bottom, &p.rim, &m, &eps),
                    pit(&upper_min, &q, &m, &eps),
                    shelf(&upper_min, &q.rim, &m, &eps),
                    cost,
                )
            }
            PairKind::LowerOnly => {
                let p = side(&a.unwrap())?;
                let up = if m > upper_min {
                    shelf(&upper_min, &m, &m, &eps)
                } else {
                    Column::from_knots(vec![
                        (bottom.clone(), upper_min.clone()),
                        (&m + &eps, upper_min.clone()),
                        (top.clone(), top.clone()),
                    ])
                };
                (
                    pit(&bottom, &p, &m, &eps),
                    shelf(&bottom, &p.rim, &m, &eps),
                    up.clone(),
                    up,
                    &persistence / &two,
                )
            }
            PairKind::UpperOnly => {
                let q = side(&b.unwrap())?;
                let plateau = shelf(&bottom, &m, &m, &eps);
                (
                    plateau.clone(),
                    plateau,
                    pit(&upper_min, &q, &m, &eps),
                    shelf(&upper_min, &q.rim, &m, &eps),
                    &persistence / &two,
                )
            }
        };
        matching_cost = matching_cost.max(cost);
        for (x, lo, up) in [
            (
                Rational::new((1).into(), (3 * i + 1).into()),
                &lo_flank,
                &up_flank,
            ),
            (Rational::new((1).into(), (3 * i).into()), &lo_mid, &up_mid),
            (
                Rational::new((1).into(), (3 * i - 1).into()),
                &lo_flank,
                &up_flank,
            ),
        ] {
            x_breaks.push(x);
            low_cols.push(lo.clone());
            up_cols.push(up.clone());
        }
        kinds.push(kind);
        centers.push(m);
        epsilons.push(eps);
    }

    let mut order: Vec<usize> = (0..x_breaks.len()).collect();
    order.sort_by(|&p, &q| x_breaks[p].cmp(&x_breaks[q]));
    let pick = |cols: &[Column]| order.iter().map(|&k| cols[k].clone()).collect::<Vec<_>>();
    let x_sorted: Vec<Rational> = order.iter().map(|&k| x_breaks[k].clone()).collect();
    let low = RectField {
        x_breaks: x_sorted.clone(),
        columns: pick(&low_cols),
        bottom: bottom.clone(),
        top: top.clone(),
    };
    let up = RectField {
        x_breaks: x_sorted,
        columns: pick(&up_cols),
        bottom: bottom.clone(),
        top: top.clone(),
    };

    let gap = max_gap(&low, &up);
    if gap != matching_cost {
        return Err(Error::Invariant(format!(
            "field gap {} differs from matching cost {}",
            gap, matching_cost
        )));
    }
    let params = RealizationParams {
        s: top,
        bottom,
        swapped,
        kinds,
        centers,
        epsilons,
        matching_cost,
    };
    Ok(if swapped {
        (up, low, params)
    } else {
        (low, up, params)
    })
}

/// Largest `|f - g|` over the nodes of the shared breakpoint grid. Both
/// fields are linear in `x` between columns and in `y` between grid rows,
/// so this is their sup-norm distance.
pub fn max_gap(f: &RectField, g: &RectField) -> Rational {
    let mut ys = f.y_grid();
    ys.extend(g.y_grid());
    ys.sort();
    ys.dedup();
    let mut best = Rational::zero();
    for (cf, cg) in f.columns.iter().zip(&g.columns) {
        for y in &ys {
            best = best.max((cf.eval(y) - cg.eval(y)).abs());
        }
    }
    best
}

/// Grid graph on the field's breakpoint lattice. Every row interval is cut
/// into `refine` equal parts; vertices are 4-connected and carry the field
/// value rounded to the nearest `f64`.
pub fn discretize(field: &RectField, refine: usize) -> SizePair {
    let refine = refine.max(1);
    let knots = field.y_grid();
    let mut ys = Vec::with_capacity(knots.len() * refine);
    for w in knots.windows(2) {
        let step = (&w[1] - &w[0]) / int(refine as i64);
        for k in 0..refine {
            ys.push(&w[0] + &step * int(k as i64));
        }
    }
    ys.extend(knots.last().cloned());

    let rows = ys.len();
    let cols = field.columns.len();
    let mut values = Vec::with_capacity(rows * cols);
    for column in &field.columns {
        values.extend(ys.iter().map(|y| to_f64(&column.eval(y))));
    }
    let mut edges = Vec::with_capacity(2 * rows * cols);
    for c in 0..cols {
        for r in 0..rows {
            let v = c * rows + r;
            if r + 1 < rows {
                edges.push((v, v + 1));
            }
            if c + 1 < cols {
                edges.push((v, v + rows));
            }
        }
    }
    SizePair::from_indexed(values, &edges).expect("grid graphs are connected")
}

/// Outcome of checking a realization against its inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizationReport {
    pub first_roundtrip: bool,
    pub second_roundtrip: bool,
    pub refinement_stable: bool,
    pub gap: Rational,
    pub d_match: f64,
    pub tight: bool,
}

impl RealizationReport {
    pub fn passed(&self) -> bool {
        self.first_roundtrip && self.second_roundtrip && self.refinement_stable && self.tight
    }
}

/// Realizes `d1`, `d2`, extracts the diagrams of both discretized fields at
/// `refine` and `2 * refine`, and compares the gap with the matching distance.
pub fn verify_realization(
    d1: &Diagram,
    d2: &Diagram,
    refine: usize,
) -> Result<(RectField, RectField, RealizationParams, RealizationReport)> {
    let (f, g, params) = realize(d1, d2)?;
    let extract_at = |field: &RectField, r: usize| extract_diagram(&discretize(field, r));
    let (f1, g1) = (extract_at(&f, refine), extract_at(&g, refine));
    let (f2, g2) = (extract_at(&f, 2 * refine), extract_at(&g, 2 * refine));
    let (d_match, _) = matching_distance(d1, d2);
    let gap = max_gap(&f, &g);
    let tight = Some(&gap) == rat(d_match).ok().as_ref() && gap == params.matching_cost;
    let report = RealizationReport {
        first_roundtrip: &f1 == d1,
        second_roundtrip: &g1 == d2,
        refinement_stable: f1 == f2 && g1 == g2,
        gap,
        d_match,
        tight,
    };
    Ok((f, g, params, report))
}
