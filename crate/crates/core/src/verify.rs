//! Seeded property checks on a single graph: interlacing, impact bounds,
//! second-order accuracy of the first-order estimates, condition bounds,
//! normalized Laplacian range, bipartivity, and monotonicity under edge
//! removal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::graph::{EdgeRef, Graph};
use crate::matrix;
use crate::procedures::{interlacing_check, perron_greedy_bipartize, GreedyOptions};
use crate::sensitivity::{
    estimate_vs_actual, fiedler_impact_matrix, perron_impact_matrix, perron_vector_condition_lower_bound,
    structured_condition, ImpactKind,
};
use crate::spectral::{Solver, DENSE_THRESHOLD};

/// Errors of the first-order estimate below this are treated as roundoff and
/// not used for the ratio test.
pub const ESTIMATE_NOISE_FLOOR: f64 = 1e-10;

/// Allowed range of `error(tau = 1e-4) / error(tau = 1e-3)`; exact second
/// order gives 0.01.
pub const RATIO_RANGE: (f64, f64) = (0.001, 0.05);

/// Largest graph on which the greedy monotonicity check runs.
const GREEDY_LIMIT: usize = 300;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub skipped: usize,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &'static str) -> Self {
        CheckOutcome {
            name,
            passed: true,
            checked: 0,
            skipped: 0,
            detail: String::new(),
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.passed {
            self.passed = false;
            self.detail = what();
        }
    }

    fn skip(mut self, why: &str) -> Self {
        self.skipped += 1;
        if self.detail.is_empty() {
            self.detail = why.to_string();
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// `error(1e-4) / error(1e-3)` of the first-order estimate for edge `e`, or
/// `None` when the error at `tau = 1e-3` is below the noise floor.
pub fn first_order_error_ratio(solver: &Solver, g: &Graph, e: EdgeRef, kind: ImpactKind) -> Result<Option<f64>> {
    let coarse = estimate_vs_actual(solver, g, e, 1e-3, kind)?.abs_error;
    if coarse < ESTIMATE_NOISE_FLOOR {
        return Ok(None);
    }
    let fine = estimate_vs_actual(solver, g, e, 1e-4, kind)?.abs_error;
    Ok(Some(fine / coarse))
}

/// Runs every check, sampling `trials` edges with the given seed.
pub fn verify_graph(solver: &Solver, g: &Graph, trials: usize, seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<EdgeRef> = g.edges().map(|(e, _)| e).collect();
    let sample: Vec<EdgeRef> = if edges.is_empty() {
        Vec::new()
    } else {
        (0..trials).map(|_| edges[rng.random_range(0..edges.len())]).collect()
    };
    let connected = g.is_connected() && g.edge_count() > 0;
    let dense = g.node_count() <= DENSE_THRESHOLD;

    let checks = vec![
        interlacing(solver, g, &sample, dense)?,
        first_order(solver, g, &sample, connected, ImpactKind::Perron)?,
        first_order(solver, g, &sample, connected, ImpactKind::Fiedler)?,
        impact_bounds(solver, g, connected)?,
        perron_bounds(solver, g, connected)?,
        normalized_range(solver, g, dense)?,
        bipartivity(solver, g)?,
        fiedler_monotone(solver, g, &sample)?,
        greedy_monotone(solver, g, connected)?,
    ];
    Ok(VerifyReport { seed, trials, checks })
}

fn interlacing(solver: &Solver, g: &Graph, sample: &[EdgeRef], dense: bool) -> Result<CheckOutcome> {
    let mut c = CheckOutcome::new("laplacian-interlacing");
    if !dense {
        return Ok(c.skip("graph too large for full spectra"));
    }
    let before = solver.full_spectrum(&matrix::laplacian(g))?;
    for &e in sample {
        let after = solver.full_spectrum(&matrix::laplacian(&g.remove_edge(e)?))?;
        let v = interlacing_check(&before, &after)?;
        c.record(v.is_none(), || format!("removing {e}: {v:?}"));
    }
    Ok(c)
}

fn first_order(
    solver: &Solver,
    g: &Graph,
    sample: &[EdgeRef],
    connected: bool,
    kind: ImpactKind,
) -> Result<CheckOutcome> {
    let name = match kind {
        ImpactKind::Perron => "perron-first-order",
        ImpactKind::Fiedler => "fiedler-first-order",
    };
    let mut c = CheckOutcome::new(name);
    if !connected {
        return Ok(c.skip("graph not connected"));
    }
    if kind == ImpactKind::Fiedler && !solver.fiedler_candidate(g)?.pair.simple {
        return Ok(c.skip("Fiedler value not simple"));
    }
    for &e in sample {
        match first_order_error_ratio(solver, g, e, kind)? {
            Some(r) => c.record((RATIO_RANGE.0..=RATIO_RANGE.1).contains(&r), || {
                format!("edge {e}: error ratio {r:.3e}")
            }),
            None => c.skipped += 1,
        }
    }
    Ok(c)
}

fn impact_bounds(solver: &Solver, g: &Graph, connected: bool) -> Result<CheckOutcome> {
    let mut c = CheckOutcome::new("impact-bounds");
    if !connected {
        return Ok(c.skip("graph not connected"));
    }
    let p = solver.perron_pair(g)?;
    let r = perron_impact_matrix(g, &p.pair)?;
    c.record(r.frobenius <= r.bound * (1.0 + 1e-12), || {
        format!("||R_rho||_F = {} > {}", r.frobenius, r.bound)
    });
    if g.is_unweighted() {
        let ks = structured_condition(&p.pair.vector, g)?.0;
        let eq = 2f64.sqrt() / p.pair.value * ks;
        c.record((r.frobenius - eq).abs() <= 1e-10, || {
            format!("||R_rho||_F = {} differs from sqrt2 kappa_S / rho = {eq}", r.frobenius)
        });
    }
    let f = solver.fiedler_candidate(g)?;
    if f.pair.simple {
        let r = fiedler_impact_matrix(g, &f.pair)?;
        c.record(r.frobenius <= r.bound * (1.0 + 1e-12), || {
            format!("||R_mu||_F = {} > {}", r.frobenius, r.bound)
        });
    } else {
        c.skipped += 1;
    }
    Ok(c)
}

fn perron_bounds(solver: &Solver, g: &Graph, connected: bool) -> Result<CheckOutcome> {
    let mut c = CheckOutcome::new("perron-bounds");
    if !connected || g.node_count() < 2 {
        return Ok(c.skip("graph not connected"));
    }
    let p = solver.perron_pair(g)?;
    let (rho, second, n) = (p.pair.value, p.second_largest, g.node_count());
    let ku = 1.0 / p.pair.gap;
    let lb = perron_vector_condition_lower_bound(n, rho);
    c.record(ku >= lb * (1.0 - 1e-12), || format!("kappa(u) = {ku} below {lb}"));
    let floor = -rho / (n as f64 - 1.0);
    c.record(second >= floor - 1e-12 * rho && second < rho, || {
        format!("lambda_(n-1) = {second} outside [{floor}, {rho})")
    });
    Ok(c)
}

fn normalized_range(solver: &Solver, g: &Graph, dense: bool) -> Result<CheckOutcome> {
    let mut c = CheckOutcome::new("normalized-laplacian-range");
    let Ok(nl) = matrix::normalized_laplacian(g) else {
        return Ok(c.skip("graph has isolated nodes"));
    };
    if !dense {
        return Ok(c.skip("graph too large for full spectra"));
    }
    let s = solver.full_spectrum(&nl)?;
    let (lo, hi) = (s.values[0], s.values[s.len() - 1]);
    c.record(lo >= -1e-8 && hi <= 2.0 + 1e-8, || {
        format!("spectrum spans [{lo}, {hi}]")
    });
    Ok(c)
}

fn bipartivity(solver: &Solver, g: &Graph) -> Result<CheckOutcome> {
    let mut c = CheckOutcome::new("bipartivity");
    let Ok(b) = solver.bipartivity(g) else {
        return Ok(c.skip("graph has isolated nodes"));
    };
    let coloring = g.two_coloring().is_some();
    c.record(b.is_bipartite == coloring, || {
        format!("spectral verdict {} but 2-coloring says {coloring}", b.is_bipartite)
    });
    Ok(c)
}

fn fiedler_monotone(solver: &Solver, g: &Graph, sample: &[EdgeRef]) -> Result<CheckOutcome> {
    let mut c = CheckOutcome::new("fiedler-monotone");
    if g.node_count() < 2 {
        return Ok(c.skip("single node"));
    }
    let mu = solver.laplacian_bottom(g, 2)?[1];
    for &e in sample {
        let after = solver.laplacian_bottom(&g.remove_edge(e)?, 2)?[1];
        c.record(after <= mu + 1e-10, || {
            format!("removing {e} raised mu from {mu} to {after}")
        });
    }
    Ok(c)
}

fn greedy_monotone(solver: &Solver, g: &Graph, connected: bool) -> Result<CheckOutcome> {
    let mut c = CheckOutcome::new("greedy-perron-decreasing");
    if !connected || g.node_count() < 2 {
        return Ok(c.skip("graph not connected"));
    }
    if g.node_count() > GREEDY_LIMIT {
        return Ok(c.skip("graph too large for the greedy check"));
    }
    let t = perron_greedy_bipartize(solver, g, true, &GreedyOptions::default())?;
    let mut prev = t.initial_perron;
    for s in &t.steps {
        c.record(s.perron_after < prev, || {
            format!("removing {} left rho at {} (was {prev})", s.edge, s.perron_after)
        });
        prev = s.perron_after;
    }
    Ok(c)
}
