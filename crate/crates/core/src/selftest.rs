//! Property suites run by the `selftest` command.

use crate::bounds::{bound_report_with_cap, earlier_bound};
use crate::diagram::{evaluate_diagram, extract_diagram, multiplicity, Diagram};
use crate::gen;
use crate::io::diagram_to_json;
use crate::matching::{brute_force_matching_distance, matching_distance, stability_probe};
use crate::realize::verify_realization;
use crate::size_pair::{reduced_size_function, SizePair};

#[derive(Clone, Debug, PartialEq)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Instances per suite.
    pub cases: usize,
    /// Size limit for oracle-backed suites; 0 skips them.
    pub cap: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            cases: 100,
            cap: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Pass {
        cases: usize,
    },
    /// Smallest failing instance found, rendered as text.
    Fail {
        counterexample: String,
    },
    Skipped,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub outcome: Outcome,
}

impl SuiteResult {
    pub fn is_failure(&self) -> bool {
        matches!(self.outcome, Outcome::Fail { .. })
    }
}

type Suite = fn(&SelftestConfig, u64) -> Outcome;

/// Runs every suite, in name order.
pub fn run(config: &SelftestConfig) -> Vec<SuiteResult> {
    let suites: [(&'static str, bool, Suite); 6] = [
        ("bound_chain", true, bound_chain),
        ("metric_axioms", false, metric_axioms),
        ("oracle_equivalence", true, oracle_equivalence),
        ("realization", false, realization),
        ("representation", false, representation),
        ("stability", false, stability),
    ];
    suites
        .iter()
        .enumerate()
        .map(|(k, &(name, needs_oracle, suite))| SuiteResult {
            name,
            outcome: if needs_oracle && config.cap == 0 {
                Outcome::Skipped
            } else {
                suite(config, config.seed.wrapping_add(k as u64))
            },
        })
        .collect()
}

/// Keeps the smallest failure seen so far.
struct Failures(Option<(usize, String)>);

impl Failures {
    fn record(&mut self, size: usize, text: impl FnOnce() -> String) {
        if self.0.as_ref().is_none_or(|(s, _)| size < *s) {
            self.0 = Some((size, text()));
        }
    }

    fn outcome(self, cases: usize) -> Outcome {
        match self.0 {
            Some((_, counterexample)) => Outcome::Fail { counterexample },
            None => Outcome::Pass { cases },
        }
    }
}

fn describe_graph(sp: &SizePair) -> String {
    format!("values={:?} edges={:?}", sp.values(), sp.edges())
}

/// Query grid: critical values, their midpoints and one point beyond each end.
fn query_grid(sp: &SizePair) -> Vec<f64> {
    let c = sp.critical_values();
    let mut g = c.clone();
    g.extend(c.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    g.push(c[0] - 1.0);
    g.push(c[c.len() - 1] + 1.0);
    g.sort_by(f64::total_cmp);
    g
}

fn representation(config: &SelftestConfig, seed: u64) -> Outcome {
    let mut rng = gen::rng(seed);
    let mut failures = Failures(None);
    for _ in 0..config.cases {
        let n = rand::Rng::gen_range(&mut rng, 1..=20);
        let sp = gen::connected_graph(&mut rng, n, 0.15);
        let d = extract_diagram(&sp);
        let grid = query_grid(&sp);
        let mut ok = true;
        'grid: for &x in &grid {
            for &y in grid.iter().filter(|&&y| y > x) {
                if evaluate_diagram(&d, x, y) != reduced_size_function(&sp, x, y) {
                    ok = false;
                    break 'grid;
                }
            }
        }
        ok &= d
            .points()
            .iter()
            .all(|(p, m)| multiplicity(&sp, p.x, p.y) == Ok(*m));
        if !ok {
            failures.record(n, || describe_graph(&sp));
        }
    }
    failures.outcome(config.cases)
}

fn metric_axioms(config: &SelftestConfig, seed: u64) -> Outcome {
    let mut rng = gen::rng(seed);
    let mut failures = Failures(None);
    for _ in 0..config.cases {
        let ds: Vec<Diagram> = (0..3).map(|_| gen::diagram(&mut rng, 4, 2, 6)).collect();
        let d = |a: usize, b: usize| matching_distance(&ds[a], &ds[b]).0;
        let ok = d(0, 0) == 0.0
            && d(0, 1) == d(1, 0)
            && d(0, 2) <= d(0, 1) + d(1, 2) + 1e-12
            && d(0, 1) >= 0.0;
        if !ok {
            let size = ds.iter().map(Diagram::total_multiplicity).sum();
            failures.record(size, || {
                ds.iter().map(diagram_to_json).collect::<Vec<_>>().join(" ")
            });
        }
    }
    failures.outcome(config.cases)
}

fn stability(config: &SelftestConfig, seed: u64) -> Outcome {
    let mut rng = gen::rng(seed);
    let mut failures = Failures(None);
    for _ in 0..config.cases {
        let n = rand::Rng::gen_range(&mut rng, 1..=15);
        let sp = gen::connected_graph(&mut rng, n, 0.2);
        let (eps, psi) = gen::perturbation(&mut rng, sp.values());
        if !matches!(stability_probe(&sp, &psi, eps), Ok((_, true))) {
            failures.record(n, || {
                format!("{} psi={psi:?} eps={eps}", describe_graph(&sp))
            });
        }
    }
    failures.outcome(config.cases)
}

fn oracle_equivalence(config: &SelftestConfig, seed: u64) -> Outcome {
    let mut rng = gen::rng(seed);
    let mut failures = Failures(None);
    let cap = config.cap.min(crate::matching::BRUTE_FORCE_CAP);
    for _ in 0..config.cases {
        let d1 = gen::diagram(&mut rng, cap, 2, cap);
        let d2 = gen::diagram(&mut rng, cap, 2, cap);
        let fast = matching_distance(&d1, &d2).0;
        if brute_force_matching_distance(&d1, &d2) != Ok(fast) {
            let size = d1.total_multiplicity() + d2.total_multiplicity();
            failures.record(size, || {
                format!("{} {}", diagram_to_json(&d1), diagram_to_json(&d2))
            });
        }
    }
    failures.outcome(config.cases)
}

fn bound_chain(config: &SelftestConfig, seed: u64) -> Outcome {
    let mut rng = gen::rng(seed);
    let mut failures = Failures(None);
    let cap = config.cap.min(crate::bounds::ISOMORPHISM_CAP);
    for _ in 0..config.cases {
        let n = rand::Rng::gen_range(&mut rng, 1..=cap);
        let (a, b) = gen::isomorphic_pair(&mut rng, n, 0.3);
        let ok = match bound_report_with_cap(&a, &b, cap) {
            Ok(report) => report.chain_holds() && report.exact_pseudo_distance.is_some(),
            Err(_) => false,
        };
        let (d1, d2) = (extract_diagram(&a), extract_diagram(&b));
        let ok = ok && earlier_bound(&d1, &d2).value <= matching_distance(&d1, &d2).0;
        if !ok {
            failures.record(n, || {
                format!("{} | {}", describe_graph(&a), describe_graph(&b))
            });
        }
    }
    failures.outcome(config.cases)
}

fn realization(config: &SelftestConfig, seed: u64) -> Outcome {
    let mut rng = gen::rng(seed);
    let mut failures = Failures(None);
    for _ in 0..config.cases {
        let d1 = gen::diagram(&mut rng, 5, 1, 5);
        let d2 = gen::diagram(&mut rng, 5, 1, 5);
        let ok = matches!(verify_realization(&d1, &d2, 1), Ok((_, _, _, r)) if r.passed());
        if !ok {
            let size = d1.total_multiplicity() + d2.total_multiplicity();
            failures.record(size, || {
                format!("{} {}", diagram_to_json(&d1), diagram_to_json(&d2))
            });
        }
    }
    failures.outcome(config.cases)
}
