//! Seeded generators for fuzzing and self-tests.
//!
//! All values are dyadic rationals with small denominators, so sums,
//! differences and midpoints stay exact in `f64`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::Diagram;
use crate::size_pair::SizePair;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Multiple of `1/denominator` in `[0, levels / denominator]`.
pub fn dyadic<R: Rng + ?Sized>(rng: &mut R, levels: u32, denominator: u32) -> f64 {
    f64::from(rng.gen_range(0..=levels)) / f64::from(denominator)
}

/// Connected graph on `n ≥ 1` vertices: a random spanning tree plus each
/// remaining pair independently with probability `extra`. Values are
/// multiples of `1/8` in `[0, 4]`, so ties are common.
pub fn connected_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, extra: f64) -> SizePair {
    let values = (0..n).map(|_| dyadic(rng, 32, 8)).collect();
    let mut edges = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for k in 1..n {
        let parent = order[rng.gen_range(0..k)];
        let (a, b) = (order[k], parent);
        edges.push((a.min(b), a.max(b)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.gen_bool(extra) {
                edges.push((u, v));
            }
        }
    }
    SizePair::from_indexed(values, &edges).expect("spanning tree keeps the graph connected")
}

/// Perturbation of `values` by at most `eps`, where `eps = k/64` for some
/// `k ≥ 1` and every offset is a multiple of `1/64`.
pub fn perturbation<R: Rng + ?Sized>(rng: &mut R, values: &[f64]) -> (f64, Vec<f64>) {
    let k: i32 = rng.gen_range(1..64);
    let eps = f64::from(k) / 64.0;
    let psi = values
        .iter()
        .map(|v| v + f64::from(rng.gen_range(-k..=k)) / 64.0)
        .collect();
    (eps, psi)
}

/// Diagram with up to `max_points` distinct proper points of multiplicity
/// 1..=`max_mult`, total multiplicity at most `max_total`. Coordinates are
/// multiples of `1/8` in `[0, 4]`; the point at infinity is in `[0, 1]` and
/// no abscissa lies to its left, as in any diagram extracted from a graph.
pub fn diagram<R: Rng + ?Sized>(
    rng: &mut R,
    max_points: usize,
    max_mult: usize,
    max_total: usize,
) -> Diagram {
    let infinity_x = dyadic(rng, 8, 8);
    let count = rng.gen_range(0..=max_points);
    let mut points = Vec::with_capacity(count);
    let mut total = 0;
    for _ in 0..count {
        let room = max_total - total;
        if room == 0 {
            break;
        }
        let mult = rng.gen_range(1..=max_mult.min(room));
        let x = infinity_x + dyadic(rng, 31 - (infinity_x * 8.0) as u32, 8);
        let y = x + f64::from(rng.gen_range(1..=32 - (x * 8.0) as u32)) / 8.0;
        points.push((x, y, mult));
        total += mult;
    }
    Diagram::new(infinity_x, points).expect("generated points lie above the diagonal")
}

/// A graph and an isomorphic copy: vertices relabelled by a random
/// permutation, edges carried along, and values shifted by multiples of
/// `1/8` of size at most `1/2`.
pub fn isomorphic_pair<R: Rng + ?Sized>(rng: &mut R, n: usize, extra: f64) -> (SizePair, SizePair) {
    let first = connected_graph(rng, n, extra);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut values = vec![0.0; n];
    for (v, &image) in perm.iter().enumerate() {
        values[image] = first.value(v) + f64::from(rng.gen_range(-4..=4)) / 8.0;
    }
    let edges: Vec<(usize, usize)> = first
        .edges()
        .iter()
        .map(|&(u, v)| (perm[u], perm[v]))
        .collect();
    let second = SizePair::from_indexed(values, &edges).expect("isomorphic image is connected");
    (first, second)
}
