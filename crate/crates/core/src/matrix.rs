//! Sparse symmetric matrices derived from a graph.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Which graph matrix a matrix or spectrum belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixKind {
    Adjacency,
    Laplacian,
    NormalizedLaplacian,
    ReducedAdjacency,
    SupraAdjacency,
    SupraLaplacian,
}

/// Anything that can apply a symmetric matrix to a vector.
pub trait SymmetricOperator {
    fn order(&self) -> usize;

    /// `y = M x`
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// Upper bound on the spectral norm.
    fn norm_bound(&self) -> f64;
}

/// A real symmetric matrix: off-diagonal entries in CSR form (both
/// triangles, each written from the same source number so `(i,j)` and `(j,i)`
/// agree bit for bit) plus a separate diagonal that is always accumulated
/// last in products.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    order: usize,
    kind: MatrixKind,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    diag: Vec<f64>,
}

impl SymMatrix {
    /// Assembles from 0-based strictly-lower entries `(r, c, v)` with `r > c`
    /// and an explicit diagonal. Duplicate off-diagonal positions are summed.
    pub fn from_lower(
        order: usize,
        kind: MatrixKind,
        lower: impl IntoIterator<Item = (usize, usize, f64)>,
        diag: &[f64],
    ) -> Self {
        assert_eq!(diag.len(), order);
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); order];
        for (r, c, v) in lower {
            debug_assert!(r > c && r < order);
            rows[r].push((c, v));
            rows[c].push((r, v));
        }
        let mut row_ptr = Vec::with_capacity(order + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut last: Option<usize> = None;
            for (c, v) in row {
                if last == Some(c) {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(c);
                    vals.push(v);
                    last = Some(c);
                }
            }
            row_ptr.push(cols.len());
        }
        SymMatrix {
            order,
            kind,
            row_ptr,
            cols,
            vals,
            diag: diag.to_vec(),
        }
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    /// Relabels the matrix kind without touching the entries.
    pub fn with_kind(mut self, kind: MatrixKind) -> Self {
        self.kind = kind;
        self
    }

    /// Entry `(r, c)`, 0-based.
    pub fn get(&self, r: usize, c: usize) -> f64 {
        if r == c {
            return self.diag[r];
        }
        let row = &self.cols[self.row_ptr[r]..self.row_ptr[r + 1]];
        match row.binary_search(&c) {
            Ok(k) => self.vals[self.row_ptr[r] + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diag
    }

    /// Stored off-diagonal entries of row `r` as `(col, value)`, ascending.
    pub fn off_diagonal_row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        self.cols[span.clone()]
            .iter()
            .copied()
            .zip(self.vals[span].iter().copied())
    }

    /// Number of stored nonzeros, diagonal included.
    pub fn nnz(&self) -> usize {
        self.vals.len() + self.diag.iter().filter(|&&d| d != 0.0).count()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        let ones = vec![1.0; self.order];
        let mut y = vec![0.0; self.order];
        self.apply(&ones, &mut y);
        y
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.order, self.order);
        for r in 0..self.order {
            for (c, v) in self.off_diagonal_row(r) {
                m[(r, c)] = v;
            }
            m[(r, r)] = self.diag[r];
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.vals.iter().chain(&self.diag).map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `x^T M x`
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut y = vec![0.0; self.order];
        self.apply(x, &mut y);
        x.iter().zip(&y).map(|(a, b)| a * b).sum()
    }
}

impl SymmetricOperator for SymMatrix {
    fn order(&self) -> usize {
        self.order
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (r, out) in y.iter_mut().enumerate() {
            let off: f64 = self.off_diagonal_row(r).map(|(c, v)| v * x[c]).sum();
            *out = off + self.diag[r] * x[r];
        }
    }

    fn norm_bound(&self) -> f64 {
        // max absolute row sum bounds the spectral norm of a symmetric matrix
        (0..self.order)
            .map(|r| self.diag[r].abs() + self.off_diagonal_row(r).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

/// Adjacency matrix `A`: zero diagonal, `a_ij = w` per edge.
pub fn adjacency(g: &Graph) -> SymMatrix {
    let n = g.node_count();
    SymMatrix::from_lower(n, MatrixKind::Adjacency, g.raw_edges(), &vec![0.0; n])
}

/// Graph Laplacian `L = D - A`. The diagonal is the sum of the stored
/// off-diagonal row entries in storage order, so `L 1 = 0` exactly.
pub fn laplacian(g: &Graph) -> SymMatrix {
    let n = g.node_count();
    let a = adjacency(g);
    let diag: Vec<f64> = (0..n).map(|r| a.off_diagonal_row(r).map(|(_, v)| v).sum()).collect();
    SymMatrix::from_lower(
        n,
        MatrixKind::Laplacian,
        g.raw_edges().map(|(r, c, w)| (r, c, -w)),
        &diag,
    )
}

fn inverse_sqrt_degrees(g: &Graph) -> Result<Vec<f64>> {
    g.degrees()
        .into_iter()
        .enumerate()
        .map(|(k, d)| {
            if d > 0.0 {
                Ok(1.0 / d.sqrt())
            } else {
                Err(Error::IsolatedNode(k + 1))
            }
        })
        .collect()
}

/// Reduced adjacency `A_D = D^{-1/2} A D^{-1/2}`.
pub fn reduced_adjacency(g: &Graph) -> Result<SymMatrix> {
    let s = inverse_sqrt_degrees(g)?;
    let n = g.node_count();
    Ok(SymMatrix::from_lower(
        n,
        MatrixKind::ReducedAdjacency,
        g.raw_edges().map(|(r, c, w)| (r, c, s[r] * w * s[c])),
        &vec![0.0; n],
    ))
}

/// Normalized Laplacian `I - D^{-1/2} A D^{-1/2}`.
pub fn normalized_laplacian(g: &Graph) -> Result<SymMatrix> {
    let s = inverse_sqrt_degrees(g)?;
    let n = g.node_count();
    Ok(SymMatrix::from_lower(
        n,
        MatrixKind::NormalizedLaplacian,
        g.raw_edges().map(|(r, c, w)| (r, c, -s[r] * w * s[c])),
        &vec![1.0; n],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::SymmetricEigen;

    fn sorted_eigs(m: &SymMatrix) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(m.to_dense()).eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    #[test]
    fn k2_matrices() {
        let g = Graph::new(2, &[(2, 1, 1.0)]).unwrap();
        assert_eq!(
            adjacency(&g).to_dense(),
            DMatrix::from_row_slice(2, 2, &[0., 1., 1., 0.])
        );
        assert_eq!(
            laplacian(&g).to_dense(),
            DMatrix::from_row_slice(2, 2, &[1., -1., -1., 1.])
        );
        let g5 = Graph::new(2, &[(2, 1, 5.0)]).unwrap();
        let nl = normalized_laplacian(&g5).unwrap();
        assert_eq!(nl.to_dense(), DMatrix::from_row_slice(2, 2, &[1., -1., -1., 1.]));
        let e = sorted_eigs(&nl);
        assert!(e[0].abs() < 1e-14 && (e[1] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn p3_laplacian_spectrum() {
        let g = Graph::new(3, &[(2, 1, 1.0), (3, 2, 1.0)]).unwrap();
        let l = laplacian(&g);
        assert_eq!(l.get(0, 0), 1.0);
        assert_eq!(l.get(1, 1), 2.0);
        let e = sorted_eigs(&l);
        for (a, b) in e.iter().zip([0.0, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn example1_adjacency_entries() {
        let g = Graph::new(
            6,
            &[
                (4, 1, 0.5),
                (4, 2, 1.0),
                (4, 3, 1.0),
                (5, 4, 1.0),
                (5, 3, 1.0),
                (6, 5, 0.5),
            ],
        )
        .unwrap();
        let a = adjacency(&g);
        assert_eq!(a.get(3, 0), 0.5);
        assert_eq!(a.get(0, 3), 0.5);
        assert_eq!(a.get(5, 4), 0.5);
        assert_eq!(a.get(4, 3), 1.0);
        assert_eq!(a.get(2, 0), 0.0);
        assert_eq!(a.nnz(), 12);
    }

    #[test]
    fn normalized_laplacian_bipartite_and_odd_cycle() {
        let p6 = Graph::new(6, &[(2, 1, 1.0), (3, 2, 1.0), (4, 3, 1.0), (5, 4, 1.0), (6, 5, 1.0)]).unwrap();
        let top = *sorted_eigs(&normalized_laplacian(&p6).unwrap()).last().unwrap();
        assert!((top - 2.0).abs() < 1e-10);

        let k3 = Graph::new(3, &[(2, 1, 1.0), (3, 2, 1.0), (3, 1, 1.0)]).unwrap();
        let top = *sorted_eigs(&normalized_laplacian(&k3).unwrap()).last().unwrap();
        assert!((top - 1.5).abs() < 1e-12);

        let lonely = Graph::new(3, &[(2, 1, 1.0)]).unwrap();
        assert_eq!(normalized_laplacian(&lonely), Err(Error::IsolatedNode(3)));
    }

    #[test]
    fn laplacian_rows_sum_to_exact_zero() {
        let g = Graph::new(4, &[(2, 1, 0.1), (3, 1, 0.7), (4, 3, 1e-9), (4, 2, 3.3)]).unwrap();
        assert!(laplacian(&g).row_sums().iter().all(|&s| s == 0.0));
        let a = adjacency(&g).to_dense();
        assert_eq!(a, a.transpose());
        assert!((0..4).all(|k| a[(k, k)] == 0.0));
    }
}
