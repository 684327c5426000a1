//! Spectral bipartition, Perron-guided greedy bipartization and Laplacian
//! interlacing checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Bipartition, EdgeRef, Graph, PartitionMethod};
use crate::sensitivity::{perron_impact_matrix, ImpactMatrix};
use crate::spectral::{EigenPair, PerronPair, Solver, SpectrumSlice};

/// Default `kappa(u)` above which a greedy step is flagged as unreliable.
pub const KAPPA_FLAG: f64 = 1e3;

/// Tolerance for the interlacing inequalities.
pub const INTERLACING_TOL: f64 = 1e-8;

fn simple_vector(fiedler: &EigenPair) -> Result<&[f64]> {
    if fiedler.simple {
        Ok(&fiedler.vector)
    } else {
        Err(Error::FiedlerNotSimple { gap: fiedler.gap })
    }
}

fn split(g: &Graph, v: &[f64], below: impl Fn(f64) -> bool, method: PartitionMethod) -> Result<Bipartition> {
    let (part1, part2): (Vec<usize>, Vec<usize>) = (1..=v.len()).partition(|&k| below(v[k - 1]));
    let mut p = Bipartition::new(part1, part2, method);
    p.cut_weight = g.cut_weight(&p)?;
    Ok(p)
}

/// Nodes with a negative Fiedler vector entry form `N1`, the rest `N2`.
pub fn fiedler_sign_partition(g: &Graph, fiedler: &EigenPair) -> Result<Bipartition> {
    let v = simple_vector(fiedler)?;
    split(g, v, |x| x < 0.0, PartitionMethod::FiedlerSign)
}

/// Median of `v`; the mean of the two middle values for even length.
pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Splits at the median `beta` of the Fiedler vector: `v_i < beta` goes to
/// `N1`. The threshold is reported in the partition.
pub fn fiedler_median_partition(g: &Graph, fiedler: &EigenPair) -> Result<Bipartition> {
    let v = simple_vector(fiedler)?;
    let beta = median(v);
    let at = v.iter().filter(|&&x| x == beta).count();
    if 2 * at > v.len() || v.iter().all(|&x| x >= beta) {
        return Err(Error::DegenerateMedian { median: beta });
    }
    let mut p = split(g, v, |x| x < beta, PartitionMethod::FiedlerMedian)?;
    p.threshold = Some(beta);
    Ok(p)
}

/// One edge removal (or weight decrement) of a greedy bipartization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemovalStep {
    pub edge: EdgeRef,
    /// Perron impact value that selected the edge.
    pub estimate: f64,
    pub weight_before: f64,
    pub weight_after: f64,
    /// Perron value of the graph after the step.
    pub perron_after: f64,
    /// `kappa(u)` of the graph after the step; `None` once disconnected.
    pub kappa_u_after: Option<f64>,
    /// `kappa_u_after` exceeded the flag threshold.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RemovalTrace {
    pub method: PartitionMethod,
    pub recompute: bool,
    pub initial_perron: f64,
    pub initial_kappa_u: f64,
    pub steps: Vec<RemovalStep>,
    /// Components of the final (disconnected) graph, 1-based.
    pub final_components: Vec<Vec<usize>>,
    pub final_perron: f64,
    /// Second smallest Laplacian eigenvalue of the final graph (zero up to
    /// roundoff).
    pub final_fiedler: f64,
    /// Largest `kappa(u)` over the initial and every intermediate connected graph.
    pub max_kappa_u_seen: f64,
    #[serde(skip)]
    pub final_graph: Graph,
}

impl RemovalTrace {
    /// The two sides when the final graph has exactly two components.
    pub fn bipartition(&self) -> Option<Bipartition> {
        match self.final_components.as_slice() {
            [a, b] => {
                let mut p = Bipartition::new(a.clone(), b.clone(), self.method);
                p.cut_weight = 0.0;
                Some(p)
            }
            _ => None,
        }
    }
}

/// Options for the greedy loops.
#[derive(Debug, Clone)]
pub struct GreedyOptions {
    pub kappa_flag: f64,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        GreedyOptions { kappa_flag: KAPPA_FLAG }
    }
}

fn kappa_u(p: &PerronPair) -> f64 {
    1.0 / p.pair.gap
}

struct Monitor<'a> {
    solver: &'a Solver,
    opts: &'a GreedyOptions,
    max_kappa: f64,
}

impl Monitor<'_> {
    /// Records a step on the new graph; returns the Perron pair while the
    /// graph is still connected.
    fn step(
        &mut self,
        g: &Graph,
        edge: EdgeRef,
        estimate: f64,
        weight_before: f64,
        steps: &mut Vec<RemovalStep>,
    ) -> Result<Option<PerronPair>> {
        let weight_after = g.weight(edge).unwrap_or(0.0);
        let (perron_after, kappa, pair) = if g.is_connected() {
            let p = self.solver.perron_pair(g)?;
            let k = kappa_u(&p);
            self.max_kappa = self.max_kappa.max(k);
            (p.pair.value, Some(k), Some(p))
        } else {
            (self.solver.adjacency_top(g, 1)?[0], None, None)
        };
        steps.push(RemovalStep {
            edge,
            estimate,
            weight_before,
            weight_after,
            perron_after,
            kappa_u_after: kappa,
            flagged: kappa.is_some_and(|k| k > self.opts.kappa_flag),
        });
        Ok(pair)
    }

    fn finish(
        &self,
        method: PartitionMethod,
        recompute: bool,
        initial: &PerronPair,
        steps: Vec<RemovalStep>,
        g: Graph,
    ) -> Result<RemovalTrace> {
        let final_perron = steps.last().map_or(initial.pair.value, |s| s.perron_after);
        let final_fiedler = self.solver.laplacian_bottom(&g, 2)?[1];
        Ok(RemovalTrace {
            method,
            recompute,
            initial_perron: initial.pair.value,
            initial_kappa_u: kappa_u(initial),
            steps,
            final_components: g.connected_components(),
            final_perron,
            final_fiedler,
            max_kappa_u_seen: self.max_kappa,
            final_graph: g,
        })
    }
}

fn start(solver: &Solver, g: &Graph) -> Result<PerronPair> {
    if g.node_count() < 2 {
        return Err(Error::NotConnected);
    }
    solver.perron_pair(g)
}

/// Removes the edge with the largest Perron impact until the graph
/// disconnects. With `recompute`, the Perron pair and impact matrix are
/// refreshed after every removal; otherwise edges are taken in the order of
/// the initial ranking.
pub fn perron_greedy_bipartize(
    solver: &Solver,
    g: &Graph,
    recompute: bool,
    opts: &GreedyOptions,
) -> Result<RemovalTrace> {
    let initial = start(solver, g)?;
    let mut mon = Monitor {
        solver,
        opts,
        max_kappa: kappa_u(&initial),
    };
    let mut steps = Vec::new();
    let mut current = g.clone();

    if recompute {
        let mut pair = initial.clone();
        loop {
            let r: ImpactMatrix = perron_impact_matrix(&current, &pair.pair)?;
            let (e, est) = r.argmax().expect("connected graph with n >= 2 has edges");
            let w = current.weight(e).expect("impact support is the edge set");
            current = current.remove_edge(e)?;
            match mon.step(&current, e, est, w, &mut steps)? {
                Some(next) => pair = next,
                None => break,
            }
        }
    } else {
        let ranking = perron_impact_matrix(&current, &initial.pair)?.ranked();
        for (e, est) in ranking {
            let w = current.weight(e).expect("ranked edges exist until removed");
            current = current.remove_edge(e)?;
            if mon.step(&current, e, est, w, &mut steps)?.is_none() {
                break;
            }
        }
    }
    mon.finish(PartitionMethod::PerronGreedy, recompute, &initial, steps, current)
}

/// Integer-weighted variant: each step lowers the weight of the edge with
/// the largest Perron impact by one (dropping the edge at zero),
/// recomputing after every step, until the graph disconnects.
pub fn decrement_greedy_bipartize(solver: &Solver, g: &Graph, opts: &GreedyOptions) -> Result<RemovalTrace> {
    if let Some((e, w)) = g.edges().find(|(_, w)| w.fract() != 0.0) {
        return Err(Error::NonIntegerWeights {
            i: e.i,
            j: e.j,
            weight: w,
        });
    }
    let initial = start(solver, g)?;
    let mut mon = Monitor {
        solver,
        opts,
        max_kappa: kappa_u(&initial),
    };
    let mut steps = Vec::new();
    let mut current = g.clone();
    let mut pair = initial.clone();
    loop {
        let r = perron_impact_matrix(&current, &pair.pair)?;
        let (e, est) = r.argmax().expect("connected graph with n >= 2 has edges");
        let w = current.weight(e).expect("impact support is the edge set");
        current = current.with_weight(e, w - 1.0)?;
        match mon.step(&current, e, est, w, &mut steps)? {
            Some(next) => pair = next,
            None => break,
        }
    }
    mon.finish(PartitionMethod::DecrementGreedy, true, &initial, steps, current)
}

/// Which interlacing inequality failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterlacingSide {
    /// `after_k <= before_k` failed.
    AfterAboveBefore,
    /// `before_k <= after_{k+1}` failed.
    BeforeAboveNextAfter,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterlacingViolation {
    /// 1-based index `k`.
    pub index: usize,
    pub side: InterlacingSide,
    pub lhs: f64,
    pub rhs: f64,
}

/// Checks `after_1 <= before_1 <= after_2 <= ... <= after_n <= before_n`
/// for ascending Laplacian spectra before and after removing one edge, and
/// returns the first violation.
pub fn interlacing_check(before: &SpectrumSlice, after: &SpectrumSlice) -> Result<Option<InterlacingViolation>> {
    let (a, b) = (&before.values, &after.values);
    if a.len() != b.len() {
        return Err(Error::OrderMismatch(a.len(), b.len()));
    }
    for k in 0..a.len() {
        if b[k] > a[k] + INTERLACING_TOL {
            return Ok(Some(InterlacingViolation {
                index: k + 1,
                side: InterlacingSide::AfterAboveBefore,
                lhs: b[k],
                rhs: a[k],
            }));
        }
        if k + 1 < a.len() && a[k] > b[k + 1] + INTERLACING_TOL {
            return Ok(Some(InterlacingViolation {
                index: k + 1,
                side: InterlacingSide::BeforeAboveNextAfter,
                lhs: a[k],
                rhs: b[k + 1],
            }));
        }
    }
    Ok(None)
}
