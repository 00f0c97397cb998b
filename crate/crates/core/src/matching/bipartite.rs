//! Hopcroft–Karp maximum matching plus a lexicographic-minimisation pass
//! over perfect matchings.

use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Bipartite graph with adjacency lists from left to right vertices.
/// Lists are kept sorted so that lower right indices are preferred.
#[derive(Clone, Debug)]
pub(crate) struct Bipartite {
    n_right: usize,
    adj: Vec<Vec<usize>>,
}

impl Bipartite {
    pub(crate) fn new(n_left: usize, n_right: usize) -> Self {
        Bipartite {
            n_right,
            adj: vec![Vec::new(); n_left],
        }
    }

    pub(crate) fn add_edge(&mut self, left: usize, right: usize) {
        debug_assert!(right < self.n_right);
        self.adj[left].push(right);
    }

    fn n_left(&self) -> usize {
        self.adj.len()
    }

    fn finish(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable();
            list.dedup();
        }
    }

    /// Maximum matching; returns the partner of each left vertex.
    pub(crate) fn maximum_matching(&mut self) -> Vec<Option<usize>> {
        self.finish();
        let (n, m) = (self.n_left(), self.n_right);
        let mut mate_l = vec![NIL; n];
        let mut mate_r = vec![NIL; m];
        let mut dist = vec![0usize; n];
        loop {
            // BFS layering from free left vertices
            let mut queue = VecDeque::new();
            for u in 0..n {
                if mate_l[u] == NIL {
                    dist[u] = 0;
                    queue.push_back(u);
                } else {
                    dist[u] = usize::MAX;
                }
            }
            let mut found = false;
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    let w = mate_r[v];
                    if w == NIL {
                        found = true;
                    } else if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            if !found {
                break;
            }
            let mut it = vec![0usize; n];
            for u in 0..n {
                if mate_l[u] == NIL {
                    self.augment(u, &mut mate_l, &mut mate_r, &mut dist, &mut it);
                }
            }
        }
        mate_l
            .into_iter()
            .map(|v| (v != NIL).then_some(v))
            .collect()
    }

    fn augment(
        &self,
        u: usize,
        mate_l: &mut [usize],
        mate_r: &mut [usize],
        dist: &mut [usize],
        it: &mut [usize],
    ) -> bool {
        while it[u] < self.adj[u].len() {
            let v = self.adj[u][it[u]];
            it[u] += 1;
            let w = mate_r[v];
            if w == NIL || (dist[w] == dist[u] + 1 && self.augment(w, mate_l, mate_r, dist, it)) {
                mate_l[u] = v;
                mate_r[v] = u;
                return true;
            }
        }
        dist[u] = usize::MAX;
        false
    }

    /// Rewrites a perfect matching into the lexicographically smallest one
    /// (comparing partner indices of left vertices in order).
    pub(crate) fn lex_min_perfect(&self, mate: Vec<Option<usize>>) -> Vec<usize> {
        let n = self.n_left();
        let mut mate_l: Vec<usize> = mate.into_iter().map(|m| m.expect("perfect")).collect();
        let mut mate_r = vec![NIL; self.n_right];
        for (u, &v) in mate_l.iter().enumerate() {
            mate_r[v] = u;
        }
        for u in 0..n {
            let current = mate_l[u];
            for &v in &self.adj[u] {
                if v >= current {
                    break;
                }
                let owner = mate_r[v];
                if owner < u {
                    continue;
                }
                // alternating path from `owner` back to `current`, avoiding
                // locked left vertices (< u), u itself and v
                if let Some(path) = self.reroute(owner, current, u, v, &mate_l, &mate_r) {
                    let mut right = current;
                    for &l in path.iter().rev() {
                        let next = mate_l[l];
                        mate_l[l] = right;
                        mate_r[right] = l;
                        right = next;
                    }
                    mate_l[u] = v;
                    mate_r[v] = u;
                    break;
                }
            }
        }
        mate_l
    }

    fn reroute(
        &self,
        start: usize,
        target: usize,
        locked_below: usize,
        forbidden: usize,
        mate_l: &[usize],
        mate_r: &[usize],
    ) -> Option<Vec<usize>> {
        let mut seen = vec![false; self.n_right];
        seen[forbidden] = true;
        // stack of (left vertex, cursor); the lefts on it form the path
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        while let Some(top) = stack.last_mut() {
            let l = top.0;
            if top.1 == self.adj[l].len() {
                stack.pop();
                continue;
            }
            let r = self.adj[l][top.1];
            top.1 += 1;
            if seen[r] || r == mate_l[l] {
                continue;
            }
            seen[r] = true;
            if r == target {
                return Some(stack.iter().map(|&(l, _)| l).collect());
            }
            let next = mate_r[r];
            if next != NIL && next > locked_below {
                stack.push((next, 0));
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_max(n: usize, m: usize, edges: &[(usize, usize)]) -> usize {
        fn go(u: usize, n: usize, used: &mut Vec<bool>, adj: &[Vec<usize>]) -> usize {
            if u == n {
                return 0;
            }
            let mut best = go(u + 1, n, used, adj);
            for &v in &adj[u] {
                if !used[v] {
                    used[v] = true;
                    best = best.max(1 + go(u + 1, n, used, adj));
                    used[v] = false;
                }
            }
            best
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj[u].push(v);
        }
        go(0, n, &mut vec![false; m], &adj)
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.gen_range(1..7);
            let m = rng.gen_range(1..7);
            let mut edges = Vec::new();
            let mut g = Bipartite::new(n, m);
            for u in 0..n {
                for v in 0..m {
                    if rng.gen_bool(0.35) {
                        edges.push((u, v));
                        g.add_edge(u, v);
                    }
                }
            }
            let mate = g.maximum_matching();
            let size = mate.iter().flatten().count();
            assert_eq!(size, brute_max(n, m, &edges));
            let mut used = vec![false; m];
            for (u, v) in mate.iter().enumerate() {
                if let Some(v) = *v {
                    assert!(edges.contains(&(u, v)));
                    assert!(!std::mem::replace(&mut used[v], true));
                }
            }
        }
    }

    #[test]
    fn lex_min_is_smallest() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        for _ in 0..400 {
            let n = rng.gen_range(1..6);
            let mut g = Bipartite::new(n, n);
            let mut adj = vec![Vec::new(); n];
            for u in 0..n {
                for v in 0..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v);
                        adj[u].push(v);
                    }
                }
            }
            let mate = g.maximum_matching();
            if mate.iter().any(Option::is_none) {
                continue;
            }
            checked += 1;
            let lex = g.lex_min_perfect(mate);
            // brute force over permutations
            let mut best: Option<Vec<usize>> = None;
            let mut perm: Vec<usize> = (0..n).collect();
            permute(&mut perm, 0, &mut |p| {
                if (0..n).all(|u| adj[u].contains(&p[u]))
                    && best.as_ref().is_none_or(|b| p < b.as_slice())
                {
                    best = Some(p.to_vec());
                }
            });
            assert_eq!(Some(lex), best);
        }
        assert!(checked > 20);
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }
}
