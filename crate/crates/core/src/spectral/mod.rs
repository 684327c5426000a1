//! Perron and Fiedler eigenpairs, spectra and bipartivity.
//!
//! Matrices up to [`Solver::dense_threshold`] are diagonalized densely;
//! larger ones go through the restarted Lanczos solver in [`lanczos`].
//! Spectra are reported in ascending order.

pub mod lanczos;

use nalgebra::SymmetricEigen;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{self, MatrixKind, SymMatrix, SymmetricOperator};

pub use lanczos::{End, LanczosParams};

/// Default order above which the iterative solver is used.
pub const DENSE_THRESHOLD: usize = 2048;

/// Tolerance for counting eigenvalues of `A_D` at -1.
pub const MINUS_ONE_TOL: f64 = 1e-8;

/// An eigenvalue with its unit eigenvector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub value: f64,
    pub vector: Vec<f64>,
    /// Distance to the nearest other eigenvalue.
    pub gap: f64,
    /// `||M x - lambda x||_2`
    pub residual: f64,
    pub simple: bool,
}

/// Perron pair of an adjacency matrix plus the next eigenvalue down.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerronPair {
    pub pair: EigenPair,
    pub second_largest: f64,
}

/// Fiedler pair of a Laplacian plus the third-smallest eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiedlerPair {
    pub pair: EigenPair,
    /// `alpha_3`, or `None` for two-node graphs.
    pub third_smallest: Option<f64>,
}

/// Ascending eigenvalues of one graph matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumSlice {
    pub values: Vec<f64>,
    pub which: MatrixKind,
}

impl SpectrumSlice {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// k-th smallest, 1-based.
    pub fn ascending(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }

    /// k-th largest, 1-based.
    pub fn descending(&self, k: usize) -> Option<f64> {
        self.values.len().checked_sub(k).map(|i| self.values[i])
    }
}

/// Extreme eigenpairs in ascending eigenvalue order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremePairs {
    pub spectrum: SpectrumSlice,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
}

/// The two canned requests of the analysis pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extreme {
    LargestTwo,
    SmallestThree,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BipartivityReport {
    pub is_bipartite: bool,
    pub multiplicity_minus_one: usize,
    pub components: usize,
}

/// Eigensolver front end.
#[derive(Debug, Clone)]
pub struct Solver {
    pub dense_threshold: usize,
    pub lanczos: LanczosParams,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            dense_threshold: DENSE_THRESHOLD,
            lanczos: LanczosParams::default(),
        }
    }
}

/// Gap below which two eigenvalues count as equal.
pub fn simplicity_tol(norm: f64) -> f64 {
    (1e-10 * norm).max(1e-8)
}

fn residual(m: &dyn SymmetricOperator, value: f64, x: &[f64]) -> f64 {
    let mut y = vec![0.0; x.len()];
    m.apply(x, &mut y);
    y.iter()
        .zip(x)
        .map(|(a, b)| (a - value * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Flips `x` so that its largest-magnitude entry is positive; near-ties
/// (relative 1e-12) go to the lowest index.
pub fn normalize_sign(x: &mut [f64]) {
    let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(lead) = x.iter().find(|v| v.abs() >= big * (1.0 - 1e-12)) {
        if *lead < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

/// Flips a Perron vector to the positive orthant.
fn normalize_perron_sign(x: &mut [f64]) {
    if x.iter().sum::<f64>() < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

/// All eigenpairs of a dense-scale matrix, ascending.
pub(crate) fn dense_eigen(m: &SymMatrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let eig = SymmetricEigen::new(m.to_dense());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = order
        .iter()
        .map(|&k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect();
    (values, vectors)
}

impl Solver {
    /// Solver that never takes the dense path.
    pub fn iterative() -> Self {
        Solver {
            dense_threshold: 0,
            ..Default::default()
        }
    }

    pub fn with_dense_threshold(mut self, threshold: usize) -> Self {
        self.dense_threshold = threshold;
        self
    }

    /// Every eigenvalue of `m`, ascending.
    pub fn full_spectrum(&self, m: &SymMatrix) -> Result<SpectrumSlice> {
        let order = m.order();
        let limit = self.dense_threshold.max(DENSE_THRESHOLD);
        if order > limit {
            return Err(Error::TooLargeForDense { order, limit });
        }
        let (values, _) = dense_eigen(m);
        Ok(SpectrumSlice {
            values,
            which: m.kind(),
        })
    }

    /// The `k` eigenpairs at one end of the spectrum of `m`, returned in
    /// ascending eigenvalue order. Laplacian-type matrices have their known
    /// null vector deflated on the iterative path.
    pub fn extremes(&self, m: &SymMatrix, k: usize, end: End) -> Result<ExtremePairs> {
        let n = m.order();
        let k = k.min(n);
        let (mut values, mut vectors, mut residuals);
        if n <= self.dense_threshold {
            let (all_values, all_vectors) = dense_eigen(m);
            let range = match end {
                End::Smallest => 0..k,
                End::Largest => n - k..n,
            };
            values = all_values[range.clone()].to_vec();
            vectors = all_vectors[range].to_vec();
            residuals = values
                .iter()
                .zip(&vectors)
                .map(|(&v, x)| residual(m, v, x))
                .collect::<Vec<_>>();
        } else {
            let laplacian_like = matches!(m.kind(), MatrixKind::Laplacian | MatrixKind::SupraLaplacian);
            if laplacian_like && end == End::Smallest {
                let ones = vec![1.0 / (n as f64).sqrt(); n];
                values = vec![0.0];
                vectors = vec![ones.clone()];
                residuals = vec![residual(m, 0.0, &ones)];
                if k > 1 {
                    let r = lanczos::extreme_pairs(m, k - 1, end, &[ones], &self.lanczos)?;
                    values.extend(r.values);
                    vectors.extend(r.vectors);
                    residuals.extend(r.residuals);
                }
            } else {
                let r = lanczos::extreme_pairs(m, k, end, &[], &self.lanczos)?;
                values = r.values;
                vectors = r.vectors;
                residuals = r.residuals;
                if end == End::Largest {
                    values.reverse();
                    vectors.reverse();
                    residuals.reverse();
                }
            }
        }
        Ok(ExtremePairs {
            spectrum: SpectrumSlice {
                values,
                which: m.kind(),
            },
            vectors,
            residuals,
        })
    }

    pub fn extreme_eigenpairs(&self, m: &SymMatrix, which: Extreme) -> Result<ExtremePairs> {
        match which {
            Extreme::LargestTwo => self.extremes(m, 2, End::Largest),
            Extreme::SmallestThree => self.extremes(m, 3, End::Smallest),
        }
    }

    /// Perron pair `(rho, u)` of a connected graph, `u > 0`.
    pub fn perron_pair(&self, g: &Graph) -> Result<PerronPair> {
        if g.edge_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        if !g.is_connected() {
            return Err(Error::NotConnected);
        }
        let a = matrix::adjacency(g);
        let top = self.extremes(&a, 2, End::Largest)?;
        let rho = top.spectrum.values[1];
        let second = top.spectrum.values[0];
        let mut u = top.vectors[1].clone();
        normalize_perron_sign(&mut u);
        let gap = rho - second;
        Ok(PerronPair {
            pair: EigenPair {
                value: rho,
                vector: u,
                gap,
                residual: top.residuals[1],
                simple: gap > simplicity_tol(a.norm_bound()),
            },
            second_largest: second,
        })
    }

    /// Fiedler pair of a connected graph regardless of whether `alpha_2` is
    /// simple; check `pair.simple` before using the vector.
    pub fn fiedler_candidate(&self, g: &Graph) -> Result<FiedlerPair> {
        if g.edge_count() == 0 {
            return Err(Error::EmptyGraph);
        }
        if !g.is_connected() {
            return Err(Error::NotConnected);
        }
        let l = matrix::laplacian(g);
        let low = self.extremes(&l, 3, End::Smallest)?;
        let mu = low.spectrum.values[1];
        let third = low.spectrum.values.get(2).copied();
        let mut v = low.vectors[1].clone();
        // exact orthogonality to the null vector
        let n = v.len() as f64;
        let mean = v.iter().sum::<f64>() / n;
        v.iter_mut().for_each(|x| *x -= mean);
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= nv);
        normalize_sign(&mut v);
        let upper = third.map_or(f64::INFINITY, |a3| a3 - mu);
        Ok(FiedlerPair {
            pair: EigenPair {
                value: mu,
                residual: residual(&l, mu, &v),
                vector: v,
                gap: mu.min(upper),
                simple: upper > simplicity_tol(l.norm_bound()),
            },
            third_smallest: third,
        })
    }

    /// Fiedler pair, refusing a multiple `alpha_2`.
    pub fn fiedler_pair(&self, g: &Graph) -> Result<FiedlerPair> {
        let f = self.fiedler_candidate(g)?;
        if !f.pair.simple {
            return Err(Error::FiedlerNotSimple {
                gap: f.third_smallest.map_or(f64::INFINITY, |a3| a3 - f.pair.value),
            });
        }
        Ok(f)
    }

    /// `k` largest adjacency eigenvalues, descending. Works on disconnected
    /// graphs.
    pub fn adjacency_top(&self, g: &Graph, k: usize) -> Result<Vec<f64>> {
        let mut v = self.extremes(&matrix::adjacency(g), k, End::Largest)?.spectrum.values;
        v.reverse();
        Ok(v)
    }

    /// `k` smallest Laplacian eigenvalues, ascending. Works on disconnected
    /// graphs.
    pub fn laplacian_bottom(&self, g: &Graph, k: usize) -> Result<Vec<f64>> {
        Ok(self.extremes(&matrix::laplacian(g), k, End::Smallest)?.spectrum.values)
    }

    /// Bipartivity from the multiplicity of -1 in the reduced adjacency
    /// spectrum: the graph is bipartite iff every component contributes one.
    pub fn bipartivity(&self, g: &Graph) -> Result<BipartivityReport> {
        let ad = matrix::reduced_adjacency(g)?;
        let components = g.connected_components().len();
        let low = if ad.order() <= self.dense_threshold {
            dense_eigen(&ad).0
        } else {
            // at most one -1 per component
            self.extremes(&ad, components + 1, End::Smallest)?.spectrum.values
        };
        let multiplicity = low.iter().filter(|&&x| (x + 1.0).abs() <= MINUS_ONE_TOL).count();
        Ok(BipartivityReport {
            is_bipartite: multiplicity == components,
            multiplicity_minus_one: multiplicity,
            components,
        })
    }
}

pub fn perron_pair(g: &Graph) -> Result<PerronPair> {
    Solver::default().perron_pair(g)
}

pub fn fiedler_pair(g: &Graph) -> Result<FiedlerPair> {
    Solver::default().fiedler_pair(g)
}

pub fn full_spectrum(m: &SymMatrix) -> Result<SpectrumSlice> {
    Solver::default().full_spectrum(m)
}

pub fn extreme_eigenpairs(m: &SymMatrix, which: Extreme) -> Result<ExtremePairs> {
    Solver::default().extreme_eigenpairs(m, which)
}

pub fn bipartivity(g: &Graph) -> Result<BipartivityReport> {
    Solver::default().bipartivity(g)
}
