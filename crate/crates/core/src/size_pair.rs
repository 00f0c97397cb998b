//! Finite connected graphs with a measuring function on the vertices, and
//! direct evaluation of reduced size functions on them.
//!
//! An edge belongs to the sublevel set `{φ ≤ y}` exactly when both of its
//! endpoints do (lower-star convention), so every query below reduces to a
//! union-find pass over the induced subgraph.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::union_find::DisjointSets;

/// A connected vertex-weighted graph standing in for a size pair `(M, φ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SizePair {
    ids: Vec<String>,
    values: Vec<f64>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl SizePair {
    /// Builds a size pair from `(id, value)` vertices and `(id, id)` edges.
    pub fn new<I, S>(vertices: Vec<(String, f64)>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, (id, _)) in vertices.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(id.clone()));
            }
        }
        let lookup = |id: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(id.to_string()))
        };
        let mut indexed = Vec::new();
        for (u, v) in edges {
            indexed.push((lookup(u.as_ref())?, lookup(v.as_ref())?));
        }
        let (ids, values) = vertices.into_iter().unzip();
        Self::build(ids, values, &indexed)
    }

    /// Builds a size pair whose vertex ids are the decimal indices `0..n`.
    pub fn from_indexed(values: Vec<f64>, edges: &[(usize, usize)]) -> Result<Self> {
        let ids = (0..values.len()).map(|i| i.to_string()).collect();
        Self::build(ids, values, edges)
    }

    /// Path graph `v0 - v1 - ... - v(n-1)`.
    pub fn path(values: &[f64]) -> Result<Self> {
        let edges: Vec<_> = (1..values.len()).map(|i| (i - 1, i)).collect();
        Self::from_indexed(values.to_vec(), &edges)
    }

    fn build(ids: Vec<String>, values: Vec<f64>, edges: &[(usize, usize)]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { id: ids[i].clone() });
        }
        let n = values.len();
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u >= n || v >= n {
                let bad = if u >= n { u } else { v };
                return Err(Error::UnknownVertex(bad.to_string()));
            }
            if u == v {
                return Err(Error::SelfLoop(ids[u].clone()));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(Error::DuplicateEdge(ids[u].clone(), ids[v].clone()));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            normalized.push(key);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let sp = SizePair {
            ids,
            values,
            edges: normalized,
            adjacency,
        };
        let components = sp.component_count();
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(sp)
    }

    fn component_count(&self) -> usize {
        let mut ds = DisjointSets::new(self.len());
        for &(u, v) in &self.edges {
            ds.union(u, v);
        }
        (0..self.len()).filter(|&i| ds.find(i) == i).count()
    }

    /// Same graph with a different measuring function.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.len() {
            return Err(Error::InvalidDiagram(format!(
                "expected {} values, got {}",
                self.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue {
                id: self.ids[i].clone(),
            });
        }
        Ok(SizePair {
            values,
            ..self.clone()
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, vertex: usize) -> &str {
        &self.ids[vertex]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|s| s == id)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, vertex: usize) -> f64 {
        self.values[vertex]
    }

    /// Edges as index pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, vertex: usize) -> &[usize] {
        &self.adjacency[vertex]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency[u].binary_search(&v).is_ok()
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Distinct vertex values in increasing order.
    pub fn critical_values(&self) -> Vec<f64> {
        let mut vals = self.values.clone();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        vals
    }

    /// Smallest positive gap between distinct critical values, `None` when
    /// the function is constant.
    pub fn min_critical_gap(&self) -> Option<f64> {
        min_gap(&self.critical_values())
    }

    /// Union-find over the subgraph induced by `{φ ≤ level}`.
    pub(crate) fn sublevel_sets(&self, level: f64) -> DisjointSets {
        let mut ds = DisjointSets::new(self.len());
        for &(u, v) in &self.edges {
            if self.values[u] <= level && self.values[v] <= level {
                ds.union(u, v);
            }
        }
        ds
    }
}

pub(crate) fn min_gap(sorted_distinct: &[f64]) -> Option<f64> {
    sorted_distinct
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(None, |acc: Option<f64>, g| {
            Some(acc.map_or(g, |a| a.min(g)))
        })
}

/// Connected components of `{φ ≤ threshold}` as sorted vertex-index sets.
#[derive(Clone, Debug, PartialEq)]
pub struct SublevelPartition {
    pub threshold: f64,
    pub components: Vec<Vec<usize>>,
}

impl SublevelPartition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

/// Connected components of the subgraph induced by `{v : φ(v) ≤ y}`.
///
/// Components are listed in order of their smallest vertex index.
pub fn sublevel_components(sp: &SizePair, y: f64) -> SublevelPartition {
    let mut ds = sp.sublevel_sets(y);
    let mut by_root: HashMap<usize, usize> = HashMap::new();
    let mut components: Vec<Vec<usize>> = Vec::new();
    for v in 0..sp.len() {
        if sp.values[v] > y {
            continue;
        }
        let root = ds.find(v);
        let slot = *by_root.entry(root).or_insert_with(|| {
            components.push(Vec::new());
            components.len() - 1
        });
        components[slot].push(v);
    }
    SublevelPartition {
        threshold: y,
        components,
    }
}

pub(crate) fn check_half_plane(x: f64, y: f64) -> Result<()> {
    if x < y {
        Ok(())
    } else {
        Err(Error::OutsideHalfPlane { x, y })
    }
}

/// `ℓ*(x, y)`: the number of components of `{φ ≤ y}` containing a vertex
/// with `φ ≤ x`. Requires `x < y`.
pub fn reduced_size_function(sp: &SizePair, x: f64, y: f64) -> Result<usize> {
    check_half_plane(x, y)?;
    Ok(rsf_unchecked(sp, x, y))
}

pub(crate) fn rsf_unchecked(sp: &SizePair, x: f64, y: f64) -> usize {
    let mut ds = sp.sublevel_sets(y);
    let mut roots: Vec<usize> = (0..sp.len())
        .filter(|&v| sp.values[v] <= x)
        .map(|v| ds.find(v))
        .collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// Validates that `map` (indexed by vertices of `sp1`) is a graph
/// isomorphism onto `sp2`.
pub(crate) fn check_isomorphism(sp1: &SizePair, sp2: &SizePair, map: &[usize]) -> Result<()> {
    if sp1.len() != sp2.len() || map.len() != sp1.len() {
        return Err(Error::NotIsomorphism("vertex counts differ".into()));
    }
    if sp1.edges.len() != sp2.edges.len() {
        return Err(Error::NotIsomorphism("edge counts differ".into()));
    }
    let mut hit = vec![false; sp2.len()];
    for &target in map {
        if target >= sp2.len() || std::mem::replace(&mut hit[target], true) {
            return Err(Error::NotIsomorphism("map is not a bijection".into()));
        }
    }
    for &(u, v) in &sp1.edges {
        if !sp2.has_edge(map[u], map[v]) {
            return Err(Error::NotIsomorphism(format!(
                "edge {}-{} has no image",
                sp1.ids[u], sp1.ids[v]
            )));
        }
    }
    Ok(())
}

/// Checks `ℓ*₁(x − h, y + h) ≤ ℓ*₂(x, y)` at every grid point, where `map`
/// is an isomorphism from `sp1` to `sp2` moving values by at most `h`.
///
/// The inequality always holds; a `false` result points at a bug.
pub fn shifted_inequality_check(
    sp1: &SizePair,
    sp2: &SizePair,
    map: &[usize],
    h: f64,
    grid: &[(f64, f64)],
) -> Result<bool> {
    check_isomorphism(sp1, sp2, map)?;
    let found = (0..sp1.len())
        .map(|v| (sp1.values[v] - sp2.values[map[v]]).abs())
        .fold(0.0, f64::max);
    if !(found <= h) {
        return Err(Error::PerturbationTooLarge { found, bound: h });
    }
    for &(x, y) in grid {
        check_half_plane(x, y)?;
        if rsf_unchecked(sp1, x - h, y + h) > rsf_unchecked(sp2, x, y) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path() -> SizePair {
        SizePair::path(&[0.0, 2.0, 1.0, 3.0, 0.0]).unwrap()
    }

    #[test]
    fn components_at_level_one() {
        let p = sublevel_components(&path(), 1.0);
        assert_eq!(p.components, vec![vec![0], vec![2], vec![4]]);
    }

    #[test]
    fn components_whole_and_empty() {
        assert_eq!(
            sublevel_components(&path(), 3.0).components,
            vec![vec![0, 1, 2, 3, 4]]
        );
        assert!(sublevel_components(&path(), -1.0).is_empty());
    }

    #[test]
    fn rsf_examples() {
        let sp = path();
        assert_eq!(reduced_size_function(&sp, 0.5, 1.0).unwrap(), 2);
        assert_eq!(reduced_size_function(&sp, -0.5, 1.0).unwrap(), 0);
        assert_eq!(reduced_size_function(&sp, 3.0, 4.0).unwrap(), 1);
        assert!(matches!(
            reduced_size_function(&sp, 1.0, 1.0),
            Err(Error::OutsideHalfPlane { .. })
        ));
    }

    #[test]
    fn rejects_invalid_graphs() {
        assert_eq!(SizePair::from_indexed(vec![], &[]), Err(Error::EmptyGraph));
        assert_eq!(
            SizePair::from_indexed(vec![0.0, 1.0, 2.0], &[(0, 1)]),
            Err(Error::Disconnected { components: 2 })
        );
        assert!(matches!(
            SizePair::from_indexed(vec![0.0, 1.0], &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(..))
        ));
        assert!(matches!(
            SizePair::from_indexed(vec![0.0, 1.0], &[(0, 1), (1, 1)]),
            Err(Error::SelfLoop(_))
        ));
        assert!(matches!(
            SizePair::from_indexed(vec![0.0, f64::NAN], &[(0, 1)]),
            Err(Error::NonFiniteValue { .. })
        ));
        let named = SizePair::new(vec![("a".into(), 0.0), ("b".into(), 1.0)], vec![("a", "c")]);
        assert_eq!(named, Err(Error::UnknownVertex("c".into())));
    }

    #[test]
    fn shifted_inequality_identity_and_perturbation() {
        let sp = path();
        let id: Vec<usize> = (0..5).collect();
        let crit = sp.critical_values();
        let grid: Vec<(f64, f64)> = crit
            .iter()
            .flat_map(|&x| crit.iter().map(move |&y| (x, y)))
            .filter(|(x, y)| x < y)
            .collect();
        assert!(shifted_inequality_check(&sp, &sp, &id, 0.0, &grid).unwrap());

        let bumped = sp.with_values(vec![0.0, 2.0, 1.1, 3.0, 0.0]).unwrap();
        assert!(shifted_inequality_check(&sp, &bumped, &id, 0.1 + 1e-12, &grid).unwrap());
        assert!(shifted_inequality_check(&bumped, &sp, &id, 0.1 + 1e-12, &grid).unwrap());
        assert!(matches!(
            shifted_inequality_check(&sp, &bumped, &id, 0.05, &grid),
            Err(Error::PerturbationTooLarge { .. })
        ));
    }

    #[test]
    fn shifted_inequality_rejects_non_isomorphism() {
        let sp = path();
        // swapping the two ends of an interior edge breaks adjacency
        let bad = vec![0, 2, 1, 3, 4];
        assert!(matches!(
            shifted_inequality_check(&sp, &sp, &bad, 10.0, &[(0.0, 1.0)]),
            Err(Error::NotIsomorphism(_))
        ));
        let reversed = vec![4, 3, 2, 1, 0];
        // reversal swaps the values 2 and 3
        assert!(shifted_inequality_check(&sp, &sp, &reversed, 1.0, &[(0.5, 1.0)]).unwrap());
    }
}
