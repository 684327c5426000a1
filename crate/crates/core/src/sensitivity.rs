//! Edge-level sensitivity of the Perron and Fiedler values.
//!
//! Adjacency and Laplacian matrices are symmetric, so left and right
//! eigenvectors coincide: every eigenvalue condition number is 1, the
//! Wilkinson perturbation of a unit eigenvector `x` is `x x^T`, and the
//! structured condition number is the Frobenius norm of `x x^T` restricted
//! to the sparsity pattern.
//!
//! Removing (or scaling by `1 - tau`) edge `e(i <-> j)` with weight `a_ij`
//! shifts the eigenvalues to first order by
//!
//! ```text
//! (rho - rho(tau)) / rho ~ (2 tau / rho) a_ij u_i u_j
//! (mu  - mu(tau))  / mu  ~ (tau / mu)    a_ij (v_i - v_j)^2
//! ```
//!
//! and the impact matrices collect these values over all edges.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph};
use crate::matrix::{self, SymMatrix, SymmetricOperator};
use crate::spectral::{simplicity_tol, EigenPair, FiedlerPair, PerronPair, Solver, SpectrumSlice};

/// Relative tolerance for treating two impact values as tied.
pub const TIE_TOL: f64 = 1e-12;

const UNIT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    /// `1 / cos(theta)` between left and right eigenvectors; 1 here.
    pub kappa_eigenvalue: f64,
    pub kappa_structured: f64,
    /// Reciprocal of the distance to the nearest other eigenvalue.
    pub kappa_vector: f64,
    /// `(n - 1) / (n rho)`; Perron pairs only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perron_vector_lower_bound: Option<f64>,
}

/// Condition number of the eigenvector of a normal matrix whose eigenvalue
/// is separated from the rest of the spectrum by `gap`.
pub fn eigvec_condition(gap: f64) -> Result<f64> {
    if gap > 0.0 && gap.is_finite() {
        Ok(1.0 / gap)
    } else {
        Err(Error::ZeroGap(gap))
    }
}

/// Lower bound `(n - 1) / (n rho)` on the Perron vector condition number.
pub fn perron_vector_condition_lower_bound(n: usize, rho: f64) -> f64 {
    (n as f64 - 1.0) / (n as f64 * rho)
}

/// `kappa(u)` read off an ascending adjacency spectrum, `None` when the
/// spectral radius is not simple.
pub fn perron_vector_condition(spectrum: &SpectrumSlice) -> Option<f64> {
    let n = spectrum.len();
    if n < 2 {
        return None;
    }
    let scale = spectrum.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let gap = spectrum.values[n - 1] - spectrum.values[n - 2];
    (gap > simplicity_tol(scale)).then(|| 1.0 / gap)
}

/// `kappa(v)` read off an ascending Laplacian spectrum: the smallest nonzero
/// eigenvalue plays the Fiedler value, and the condition number is the
/// reciprocal of its distance to zero or to the next eigenvalue, whichever
/// is closer. `None` when that eigenvalue is multiple.
pub fn fiedler_vector_condition(spectrum: &SpectrumSlice) -> Option<f64> {
    let scale = spectrum.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = simplicity_tol(scale);
    let k = spectrum.values.iter().position(|&x| x > tol)?;
    let mu = spectrum.values[k];
    let mut gap = mu;
    if let Some(&next) = spectrum.values.get(k + 1) {
        if next - mu <= tol {
            return None;
        }
        gap = gap.min(next - mu);
    }
    Some(1.0 / gap)
}

/// Unit-norm Wilkinson perturbation of a symmetric eigenproblem.
#[derive(Debug, Clone, PartialEq)]
pub enum WilkinsonMatrix {
    /// `x x^T`
    Rank1 { x: Vec<f64> },
    /// `(x x^T)|_S / ||(x x^T)|_S||_F`, stored as 0-based lower-triangle
    /// entries `(r, c, value)` with `r >= c`.
    Structured {
        order: usize,
        entries: Vec<(usize, usize, f64)>,
    },
}

impl WilkinsonMatrix {
    pub fn order(&self) -> usize {
        match self {
            WilkinsonMatrix::Rank1 { x } => x.len(),
            WilkinsonMatrix::Structured { order, .. } => *order,
        }
    }

    pub fn is_structured(&self) -> bool {
        matches!(self, WilkinsonMatrix::Structured { .. })
    }

    /// Entry at 1-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            WilkinsonMatrix::Rank1 { x } => x[i - 1] * x[j - 1],
            WilkinsonMatrix::Structured { entries, .. } => {
                let (r, c) = if i >= j { (i - 1, j - 1) } else { (j - 1, i - 1) };
                entries
                    .binary_search_by(|&(a, b, _)| (a, b).cmp(&(r, c)))
                    .map_or(0.0, |k| entries[k].2)
            }
        }
    }

    pub fn frobenius(&self) -> f64 {
        match self {
            WilkinsonMatrix::Rank1 { x } => x.iter().map(|v| v * v).sum::<f64>(),
            WilkinsonMatrix::Structured { entries, .. } => entries
                .iter()
                .map(|&(r, c, v)| if r == c { v * v } else { 2.0 * v * v })
                .sum::<f64>()
                .sqrt(),
        }
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<f64> {
        let n = self.order();
        nalgebra::DMatrix::from_fn(n, n, |r, c| self.get(r + 1, c + 1))
    }
}

fn check_unit(x: &[f64]) -> Result<()> {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > UNIT_TOL {
        return Err(Error::NotUnitNorm(norm));
    }
    Ok(())
}

/// Wilkinson perturbation `u u^T` of a symmetric matrix with unit eigenvector `u`.
pub fn wilkinson(u: &[f64]) -> Result<WilkinsonMatrix> {
    check_unit(u)?;
    Ok(WilkinsonMatrix::Rank1 { x: u.to_vec() })
}

/// Structured condition number and perturbation for the sparsity pattern of
/// `m` (its nonzero entries, diagonal included).
pub fn structured_condition_pattern(x: &[f64], m: &SymMatrix) -> Result<(f64, WilkinsonMatrix)> {
    check_unit(x)?;
    let n = m.order();
    let mut entries = Vec::with_capacity(m.nnz());
    for r in 0..n {
        for (c, v) in m.off_diagonal_row(r) {
            if c < r && v != 0.0 {
                entries.push((r, c, x[r] * x[c]));
            }
        }
        if m.diagonal()[r] != 0.0 {
            entries.push((r, r, x[r] * x[r]));
        }
    }
    entries.sort_by_key(|&(r, c, _)| (r, c));
    let kappa = entries
        .iter()
        .map(|&(r, c, v)| if r == c { v * v } else { 2.0 * v * v })
        .sum::<f64>()
        .sqrt();
    if kappa == 0.0 {
        return Err(Error::EmptyGraph);
    }
    entries.iter_mut().for_each(|e| e.2 /= kappa);
    Ok((kappa, WilkinsonMatrix::Structured { order: n, entries }))
}

/// Structured condition number `kappa_S = ||(u u^T)|_S||_F` over the edge
/// pattern of `g` (zero diagonal), with the normalized perturbation `W_S`.
pub fn structured_condition(u: &[f64], g: &Graph) -> Result<(f64, WilkinsonMatrix)> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    structured_condition_pattern(u, &matrix::adjacency(g))
}

fn edge_weight(g: &Graph, e: EdgeRef) -> Result<f64> {
    g.weight(e).ok_or(Error::NoSuchEdge { i: e.i, j: e.j })
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau <= 1.0 {
        Ok(())
    } else {
        Err(Error::TauOutOfRange(tau))
    }
}

/// First-order relative drop of the Perron value when edge `e` is scaled by
/// `1 - tau`: `(2 tau / rho) a_ij u_i u_j`.
pub fn perron_shift_estimate(g: &Graph, perron: &EigenPair, e: EdgeRef, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    let w = edge_weight(g, e)?;
    let u = &perron.vector;
    Ok(2.0 * tau / perron.value * w * u[e.i - 1] * u[e.j - 1])
}

/// First-order relative drop of the Fiedler value when edge `e` is scaled by
/// `1 - tau`: `(tau / mu) a_ij (v_i - v_j)^2`.
pub fn fiedler_shift_estimate(g: &Graph, fiedler: &EigenPair, e: EdgeRef, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    if !fiedler.simple {
        return Err(Error::FiedlerNotSimple { gap: fiedler.gap });
    }
    let w = edge_weight(g, e)?;
    let v = &fiedler.vector;
    Ok(tau / fiedler.value * w * (v[e.i - 1] - v[e.j - 1]).powi(2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ImpactKind {
    Perron,
    Fiedler,
}

/// Strictly-lower-triangular matrix of relative edge importances; its
/// support is exactly the edge set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImpactMatrix {
    pub kind: ImpactKind,
    /// Canonical edge order.
    pub entries: Vec<(EdgeRef, f64)>,
    pub frobenius: f64,
    /// Upper bound on `frobenius`.
    pub bound: f64,
    /// True when `bound` is the conservative weighted Fiedler bound
    /// `(1/mu) ||A|_L||_F max (v_i - v_j)^2` rather than a closed form.
    pub bound_is_conservative: bool,
}

impl ImpactMatrix {
    fn from_entries(kind: ImpactKind, entries: Vec<(EdgeRef, f64)>, bound: f64, conservative: bool) -> Self {
        let frobenius = entries.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
        ImpactMatrix {
            kind,
            entries,
            frobenius,
            bound,
            bound_is_conservative: conservative,
        }
    }

    pub fn get(&self, e: EdgeRef) -> Option<f64> {
        self.entries
            .binary_search_by(|(x, _)| x.cmp(&e))
            .ok()
            .map(|k| self.entries[k].1)
    }

    /// Entries by decreasing value; exact ties by smallest `(j, i)`.
    pub fn ranked(&self) -> Vec<(EdgeRef, f64)> {
        let mut r = self.entries.clone();
        r.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.tie_key().cmp(&b.0.tie_key())));
        r
    }

    pub fn top(&self, k: usize) -> Vec<(EdgeRef, f64)> {
        let mut r = self.ranked();
        r.truncate(k);
        r
    }

    /// Largest entry; values within a relative [`TIE_TOL`] of the maximum
    /// are ties, resolved by smallest `(j, i)`.
    pub fn argmax(&self) -> Option<(EdgeRef, f64)> {
        let max = self.entries.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
        self.entries
            .iter()
            .filter(|(_, v)| *v >= max - TIE_TOL * max.abs())
            .min_by_key(|(e, _)| e.tie_key())
            .copied()
    }

    /// Edges whose value lies within relative [`TIE_TOL`] of the maximum.
    pub fn maximizers(&self) -> Vec<EdgeRef> {
        let max = self.entries.iter().map(|e| e.1).fold(f64::NEG_INFINITY, f64::max);
        self.entries
            .iter()
            .filter(|(_, v)| *v >= max - TIE_TOL * max.abs())
            .map(|(e, _)| *e)
            .collect()
    }

    /// Mean of the strictly positive entries.
    pub fn mean_positive(&self) -> f64 {
        let (sum, count) = self
            .entries
            .iter()
            .filter(|(_, v)| *v > 0.0)
            .fold((0.0, 0usize), |(s, c), (_, v)| (s + v, c + 1));
        if count == 0 {
            0.0
        } else {
            sum / count as f64
        }
    }
}

fn lower_weight_norm(g: &Graph) -> f64 {
    g.edges().map(|(_, w)| w * w).sum::<f64>().sqrt()
}

/// Perron impact matrix `R = (2/rho) A|_L o (u u^T)|_L` with the bound
/// `||R||_F <= (sqrt 2 / rho) kappa_S ||A|_L||_F`.
pub fn perron_impact_matrix(g: &Graph, perron: &EigenPair) -> Result<ImpactMatrix> {
    let n = g.node_count();
    let u = &perron.vector;
    let rho = perron.value;
    if u.len() != n || rho.is_nan() || rho <= 0.0 || u.iter().any(|&x| x < -1e-8) {
        return Err(Error::NotPerronPair);
    }
    let a = matrix::adjacency(g);
    let mut au = vec![0.0; n];
    a.apply(u, &mut au);
    let res = au.iter().zip(u).map(|(y, x)| (y - rho * x).powi(2)).sum::<f64>().sqrt();
    if res > 1e-6 * rho.max(1.0) {
        return Err(Error::NotPerronPair);
    }
    let (kappa_s, _) = structured_condition(u, g)?;
    let entries = g
        .edges()
        .map(|(e, w)| (e, 2.0 / rho * w * u[e.i - 1] * u[e.j - 1]))
        .collect();
    let bound = 2f64.sqrt() / rho * kappa_s * lower_weight_norm(g);
    Ok(ImpactMatrix::from_entries(ImpactKind::Perron, entries, bound, false))
}

/// Fiedler impact matrix `R = (1/mu) A|_L o Y|_L`, `y_ij = (v_i - v_j)^2`.
/// Unweighted graphs get the bound `2 sqrt(m) / mu`.
pub fn fiedler_impact_matrix(g: &Graph, fiedler: &EigenPair) -> Result<ImpactMatrix> {
    if !fiedler.simple {
        return Err(Error::FiedlerNotSimple { gap: fiedler.gap });
    }
    let v = &fiedler.vector;
    let mu = fiedler.value;
    let mut ymax = 0.0f64;
    let entries = g
        .edges()
        .map(|(e, w)| {
            let y = (v[e.i - 1] - v[e.j - 1]).powi(2);
            ymax = ymax.max(y);
            (e, w * y / mu)
        })
        .collect();
    let (bound, conservative) = if g.is_unweighted() {
        (2.0 * (g.edge_count() as f64).sqrt() / mu, false)
    } else {
        (lower_weight_norm(g) * ymax / mu, true)
    };
    Ok(ImpactMatrix::from_entries(
        ImpactKind::Fiedler,
        entries,
        bound,
        conservative,
    ))
}

/// Perron condition diagnostics.
pub fn perron_condition(g: &Graph, perron: &PerronPair) -> Result<ConditionReport> {
    let (kappa_s, _) = structured_condition(&perron.pair.vector, g)?;
    Ok(ConditionReport {
        kappa_eigenvalue: 1.0,
        kappa_structured: kappa_s,
        kappa_vector: eigvec_condition(perron.pair.gap)?,
        perron_vector_lower_bound: Some(perron_vector_condition_lower_bound(g.node_count(), perron.pair.value)),
    })
}

/// Fiedler condition diagnostics; the structured pattern is the Laplacian's.
pub fn fiedler_condition(g: &Graph, fiedler: &FiedlerPair) -> Result<ConditionReport> {
    if !fiedler.pair.simple {
        return Err(Error::FiedlerNotSimple { gap: fiedler.pair.gap });
    }
    let (kappa_s, _) = structured_condition_pattern(&fiedler.pair.vector, &matrix::laplacian(g))?;
    Ok(ConditionReport {
        kappa_eigenvalue: 1.0,
        kappa_structured: kappa_s,
        kappa_vector: eigvec_condition(fiedler.pair.gap)?,
        perron_vector_lower_bound: None,
    })
}

/// First-order estimate against the recomputed relative shift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimateCheck {
    pub estimate: f64,
    pub actual: f64,
    pub abs_error: f64,
}

/// Compares the first-order estimate for scaling `e` by `1 - tau` with the
/// relative shift obtained by recomputing the eigenvalue.
pub fn estimate_vs_actual(solver: &Solver, g: &Graph, e: EdgeRef, tau: f64, kind: ImpactKind) -> Result<EstimateCheck> {
    let scaled = g.scale_edge(e, tau)?;
    let (estimate, actual) = match kind {
        ImpactKind::Perron => {
            let p = solver.perron_pair(g)?;
            let est = perron_shift_estimate(g, &p.pair, e, tau)?;
            let after = solver.adjacency_top(&scaled, 1)?[0];
            (est, (p.pair.value - after) / p.pair.value)
        }
        ImpactKind::Fiedler => {
            let f = solver.fiedler_pair(g)?;
            let est = fiedler_shift_estimate(g, &f.pair, e, tau)?;
            let after = solver.laplacian_bottom(&scaled, 2)?[1];
            (est, (f.pair.value - after) / f.pair.value)
        }
    };
    Ok(EstimateCheck {
        estimate,
        actual,
        abs_error: (estimate - actual).abs(),
    })
}
