//! Multiplex networks: `l` layers on a shared node set, each node coupled to
//! its copies in every other layer with weight `gamma`.
//!
//! Supra-node `(h, i)` (layer `h`, node `i`, both 0-based) has index
//! `h n + i`, so the supra-adjacency matrix is
//! `B = blkdiag(A_1, ..., A_l) + gamma (1 1^T (x) I_n - I_nl)` and the
//! supra-Laplacian is `M = blkdiag(L_1, ..., L_l) + gamma (l I_nl - 1 1^T (x) I_n)`.
//! Both are the adjacency and Laplacian of one ordinary graph on `n l`
//! nodes, which is how they are assembled.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::{self, MatrixKind, SymMatrix, SymmetricOperator};
use crate::spectral::Solver;

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplexNetwork {
    n: usize,
    layers: Vec<Graph>,
    gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregation {
    Sum,
    Average,
}

impl MultiplexNetwork {
    pub fn new(layers: Vec<Graph>, gamma: f64) -> Result<Self> {
        if layers.len() < 2 {
            return Err(Error::InvalidMultiplex(format!(
                "need at least 2 layers, got {}",
                layers.len()
            )));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidMultiplex(format!("coupling {gamma} is not positive")));
        }
        let n = layers[0].node_count();
        if let Some((h, g)) = layers.iter().enumerate().find(|(_, g)| g.node_count() != n) {
            return Err(Error::InvalidMultiplex(format!(
                "layer {} has {} nodes, layer 1 has {n}",
                h + 1,
                g.node_count()
            )));
        }
        Ok(MultiplexNetwork { n, layers, gamma })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Graph] {
        &self.layers
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The graph whose adjacency is `B` and whose Laplacian is `M`.
    pub fn supra_graph(&self) -> Graph {
        let (n, l) = (self.n, self.layers.len());
        let mut edges = Vec::new();
        for (h, g) in self.layers.iter().enumerate() {
            edges.extend(g.edges().map(|(e, w)| (h * n + e.i, h * n + e.j, w)));
        }
        for h in 1..l {
            for k in 0..h {
                edges.extend((1..=n).map(|i| (h * n + i, k * n + i, self.gamma)));
            }
        }
        Graph::new(n * l, &edges).expect("supra-graph edges are valid")
    }

    /// Layer weights combined entrywise, summed or averaged.
    pub fn aggregate(&self, mode: Aggregation) -> Graph {
        let mut acc = std::collections::BTreeMap::new();
        for g in &self.layers {
            for (e, w) in g.edges() {
                *acc.entry(e).or_insert(0.0) += w;
            }
        }
        let scale = match mode {
            Aggregation::Sum => 1.0,
            Aggregation::Average => 1.0 / self.layers.len() as f64,
        };
        let edges: Vec<_> = acc.into_iter().map(|(e, w)| (e.i, e.j, w * scale)).collect();
        Graph::new(self.n, &edges).expect("aggregated edges are valid")
    }
}

/// Supra-adjacency matrix `B(gamma)`.
pub fn supra_adjacency(mx: &MultiplexNetwork) -> SymMatrix {
    matrix::adjacency(&mx.supra_graph()).with_kind(MatrixKind::SupraAdjacency)
}

/// Supra-Laplacian `M(gamma)`; rows sum to exactly zero.
pub fn supra_laplacian(mx: &MultiplexNetwork) -> SymMatrix {
    matrix::laplacian(&mx.supra_graph()).with_kind(MatrixKind::SupraLaplacian)
}

/// `B(gamma)` applied without assembling it: `y_h = A_h x_h + gamma (sum_k x_k - x_h)`.
pub struct SupraAdjacencyOperator {
    n: usize,
    gamma: f64,
    layers: Vec<SymMatrix>,
}

impl SupraAdjacencyOperator {
    pub fn new(mx: &MultiplexNetwork) -> Self {
        SupraAdjacencyOperator {
            n: mx.n,
            gamma: mx.gamma,
            layers: mx.layers.iter().map(matrix::adjacency).collect(),
        }
    }
}

impl SymmetricOperator for SupraAdjacencyOperator {
    fn order(&self) -> usize {
        self.n * self.layers.len()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.n;
        let mut total = vec![0.0; n];
        for block in x.chunks(n) {
            total.iter_mut().zip(block).for_each(|(t, v)| *t += v);
        }
        for (h, a) in self.layers.iter().enumerate() {
            let span = h * n..(h + 1) * n;
            a.apply(&x[span.clone()], &mut y[span.clone()]);
            for ((out, t), xi) in y[span.clone()].iter_mut().zip(&total).zip(&x[span]) {
                *out += self.gamma * (t - xi);
            }
        }
    }

    fn norm_bound(&self) -> f64 {
        let layer = self.layers.iter().map(|a| a.norm_bound()).fold(0.0, f64::max);
        layer + self.gamma * (self.layers.len() - 1) as f64
    }
}

/// Supra-Perron vector reshaped to `n x l`, with node versatility.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigentensor {
    pub rho: f64,
    /// Column `h` holds the layer-`h` block of the supra-Perron vector.
    pub columns: Vec<Vec<f64>>,
    /// Row sums `U 1_l`.
    pub versatility: Vec<f64>,
}

impl Eigentensor {
    /// Entry for 1-based node `i` in 1-based layer `h`.
    pub fn get(&self, i: usize, h: usize) -> f64 {
        self.columns[h - 1][i - 1]
    }

    /// Columns stacked back into the supra-Perron vector.
    pub fn flatten(&self) -> Vec<f64> {
        self.columns.concat()
    }
}

/// Eigentensor of `B(gamma)`.
pub fn eigentensor(solver: &Solver, mx: &MultiplexNetwork) -> Result<Eigentensor> {
    let p = solver.perron_pair(&mx.supra_graph())?;
    let columns: Vec<Vec<f64>> = p.pair.vector.chunks(mx.n).map(<[f64]>::to_vec).collect();
    let versatility = (0..mx.n).map(|i| columns.iter().map(|c| c[i]).sum()).collect();
    Ok(Eigentensor {
        rho: p.pair.value,
        columns,
        versatility,
    })
}

/// Second smallest eigenvalue `mu_B` of `M(gamma)`.
pub fn supra_fiedler_value(solver: &Solver, mx: &MultiplexNetwork) -> Result<f64> {
    Ok(solver.laplacian_bottom(&mx.supra_graph(), 2)?[1])
}

/// `mu_B <= min(mu_avg, gamma l)`, with `mu_avg` the Fiedler value of the
/// average network.
pub fn fiedler_upper_bound(mu_avg: f64, gamma: f64, layers: usize) -> f64 {
    mu_avg.min(gamma * layers as f64)
}

/// Headline multiplex quantities.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiplexSummary {
    pub nodes: usize,
    pub layers: usize,
    pub gamma: f64,
    pub supra_perron: f64,
    pub supra_fiedler: f64,
    pub average_fiedler: f64,
    pub fiedler_bound: f64,
    pub versatility: Vec<f64>,
}

pub fn summarize(solver: &Solver, mx: &MultiplexNetwork) -> Result<MultiplexSummary> {
    let t = eigentensor(solver, mx)?;
    let mu_b = supra_fiedler_value(solver, mx)?;
    let avg = mx.aggregate(Aggregation::Average);
    let mu_avg = if avg.node_count() < 2 {
        0.0
    } else {
        solver.laplacian_bottom(&avg, 2)?[1]
    };
    Ok(MultiplexSummary {
        nodes: mx.n,
        layers: mx.layers.len(),
        gamma: mx.gamma,
        supra_perron: t.rho,
        supra_fiedler: mu_b,
        average_fiedler: mu_avg,
        fiedler_bound: fiedler_upper_bound(mu_avg, mx.gamma, mx.layers.len()),
        versatility: t.versatility,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::Fixture;
    use crate::generate::{random_connected, Weights};
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn dense_eigs(m: &DMatrix<f64>) -> Vec<f64> {
        let mut v: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Block formula assembled densely, independent of the supra-graph.
    fn dense_supra(mx: &MultiplexNetwork, laplacian: bool) -> DMatrix<f64> {
        let (n, l, g) = (mx.node_count(), mx.layer_count(), mx.gamma());
        let mut m = DMatrix::zeros(n * l, n * l);
        for (h, layer) in mx.layers().iter().enumerate() {
            let a = if laplacian {
                matrix::laplacian(layer).to_dense()
            } else {
                matrix::adjacency(layer).to_dense()
            };
            m.view_mut((h * n, h * n), (n, n)).copy_from(&a);
        }
        for h in 0..l {
            for k in 0..l {
                for i in 0..n {
                    let (r, c) = (h * n + i, k * n + i);
                    if laplacian {
                        m[(r, c)] += if h == k { g * (l as f64 - 1.0) } else { -g };
                    } else if h != k {
                        m[(r, c)] += g;
                    }
                }
            }
        }
        m
    }

    fn single_node(l: usize, gamma: f64) -> MultiplexNetwork {
        MultiplexNetwork::new(vec![Graph::new(1, &[]).unwrap(); l], gamma).unwrap()
    }

    #[test]
    fn validation() {
        let one = vec![Fixture::P3.graph()];
        assert!(matches!(
            MultiplexNetwork::new(one, 1.0),
            Err(Error::InvalidMultiplex(_))
        ));
        let mixed = vec![Fixture::P3.graph(), Fixture::P6.graph()];
        assert!(matches!(
            MultiplexNetwork::new(mixed, 1.0),
            Err(Error::InvalidMultiplex(_))
        ));
        let two = vec![Fixture::P3.graph(); 2];
        assert!(MultiplexNetwork::new(two.clone(), 0.0).is_err());
        assert!(MultiplexNetwork::new(two, f64::NAN).is_err());
    }

    #[test]
    fn single_node_two_layers() {
        let mx = single_node(2, 0.7);
        assert_eq!(
            supra_adjacency(&mx).to_dense(),
            DMatrix::from_row_slice(2, 2, &[0.0, 0.7, 0.7, 0.0])
        );
        assert_eq!(
            supra_laplacian(&mx).to_dense(),
            DMatrix::from_row_slice(2, 2, &[0.7, -0.7, -0.7, 0.7])
        );
        let s = Solver::default();
        assert_abs_diff_eq!(supra_fiedler_value(&s, &mx).unwrap(), 1.4, epsilon = 1e-14);
        assert_eq!(fiedler_upper_bound(f64::INFINITY, 0.7, 2), 1.4);
        let t = eigentensor(&s, &mx).unwrap();
        assert_abs_diff_eq!(t.rho, 0.7, epsilon = 1e-14);
        assert_abs_diff_eq!(t.get(1, 1), 0.5f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(t.get(1, 2), 0.5f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(t.versatility[0], 2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn three_k2_layers_match_block_formula() {
        let mx = MultiplexNetwork::new(vec![Fixture::K2.graph(); 3], 0.3).unwrap();
        assert_eq!(supra_adjacency(&mx).to_dense(), dense_supra(&mx, false));
        let m = supra_laplacian(&mx);
        assert_eq!(m.to_dense(), dense_supra(&mx, true));
        assert!(m.row_sums().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn identical_layers_shift_spectrum() {
        let g = random_connected(8, 6, Weights::Uniform(0.5, 1.5), 3);
        let gamma = 0.37;
        let mx = MultiplexNetwork::new(vec![g.clone(), g.clone()], gamma).unwrap();
        let a = dense_eigs(&matrix::adjacency(&g).to_dense());
        let mut expected: Vec<f64> = a.iter().flat_map(|x| [x - gamma, x + gamma]).collect();
        expected.sort_by(f64::total_cmp);
        let b = dense_eigs(&supra_adjacency(&mx).to_dense());
        for (x, y) in b.iter().zip(&expected) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
        let t = eigentensor(&Solver::default(), &mx).unwrap();
        for i in 0..8 {
            assert_abs_diff_eq!(t.columns[0][i], t.columns[1][i], epsilon = 1e-12);
        }
    }

    #[test]
    fn weak_and_strong_coupling_limits() {
        let s = Solver::default();
        let layers = vec![
            random_connected(9, 5, Weights::Unit, 11),
            random_connected(9, 7, Weights::Unit, 12),
        ];
        let weak = MultiplexNetwork::new(layers.clone(), 1e-4).unwrap();
        let mu = supra_fiedler_value(&s, &weak).unwrap();
        assert!((mu - 2e-4).abs() < 0.05 * 2e-4);

        let strong = MultiplexNetwork::new(layers, 1e4).unwrap();
        let mu = supra_fiedler_value(&s, &strong).unwrap();
        let avg = strong.aggregate(Aggregation::Average);
        let mu_avg = s.laplacian_bottom(&avg, 2).unwrap()[1];
        assert!((mu - mu_avg).abs() < 0.05 * mu_avg);
    }

    #[test]
    fn star_hub_is_most_versatile() {
        let star = Graph::new(5, &[(2, 1, 1.0), (3, 1, 1.0), (4, 1, 1.0), (5, 1, 1.0)]).unwrap();
        let mx = MultiplexNetwork::new(vec![star, Graph::new(5, &[]).unwrap()], 0.5).unwrap();
        let t = eigentensor(&Solver::default(), &mx).unwrap();
        let hub = t.versatility[0];
        assert!(t.versatility[1..].iter().all(|&v| v < hub));
        assert_abs_diff_eq!(t.flatten().iter().map(|x| x * x).sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn aggregation() {
        let a = Graph::new(3, &[(2, 1, 1.0), (3, 2, 2.0)]).unwrap();
        let b = Graph::new(3, &[(2, 1, 3.0)]).unwrap();
        let mx = MultiplexNetwork::new(vec![a, b], 1.0).unwrap();
        let sum = mx.aggregate(Aggregation::Sum);
        assert_eq!(sum, Graph::new(3, &[(2, 1, 4.0), (3, 2, 2.0)]).unwrap());
        let avg = mx.aggregate(Aggregation::Average);
        assert_eq!(avg, Graph::new(3, &[(2, 1, 2.0), (3, 2, 1.0)]).unwrap());

        let g = Fixture::Example1.graph();
        let copies = MultiplexNetwork::new(vec![g.clone(); 4], 1.0).unwrap();
        let back = copies.aggregate(Aggregation::Average);
        for ((e1, w1), (e2, w2)) in back.edges().zip(g.edges()) {
            assert_eq!(e1, e2);
            assert_abs_diff_eq!(w1, w2, epsilon = 1e-15);
        }
    }

    #[test]
    fn operator_matches_assembled_matrix() {
        let layers = vec![
            random_connected(7, 4, Weights::Uniform(0.1, 2.0), 1),
            random_connected(7, 2, Weights::Uniform(0.1, 2.0), 2),
            random_connected(7, 9, Weights::Uniform(0.1, 2.0), 3),
        ];
        let mx = MultiplexNetwork::new(layers, 0.8).unwrap();
        let op = SupraAdjacencyOperator::new(&mx);
        let b = supra_adjacency(&mx);
        let x: Vec<f64> = (0..21).map(|k| (k as f64 * 0.37).sin()).collect();
        let (mut y1, mut y2) = (vec![0.0; 21], vec![0.0; 21]);
        op.apply(&x, &mut y1);
        b.apply(&x, &mut y2);
        for (p, q) in y1.iter().zip(&y2) {
            assert_abs_diff_eq!(p, q, epsilon = 1e-13);
        }
        assert!(op.norm_bound() >= b.norm_bound() - 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn laplacian_forms_agree_and_bound_holds(
            n in 2usize..10, l in 2usize..5, seed in any::<u64>(), loggamma in -3.0f64..3.0
        ) {
            let layers: Vec<Graph> = (0..l)
                .map(|h| random_connected(n, n / 2, Weights::Uniform(0.2, 2.0), seed.wrapping_add(h as u64)))
                .collect();
            let gamma = 10f64.powf(loggamma);
            let mx = MultiplexNetwork::new(layers, gamma).unwrap();
            let b = supra_adjacency(&mx).to_dense();
            let deg = DMatrix::from_diagonal(&(&b * nalgebra::DVector::from_element(n * l, 1.0)));
            let m = supra_laplacian(&mx).to_dense();
            prop_assert!((&deg - &b - &m).amax() <= 1e-12 * (1.0 + gamma));

            let s = Solver::default();
            let mu_b = supra_fiedler_value(&s, &mx).unwrap();
            let mu_avg = s.laplacian_bottom(&mx.aggregate(Aggregation::Average), 2).unwrap()[1];
            prop_assert!(mu_b <= fiedler_upper_bound(mu_avg, gamma, l) + 1e-8);
        }

        #[test]
        fn identical_layers_perron_shift(n in 2usize..10, l in 2usize..5, seed in any::<u64>(), gamma in 0.01f64..5.0) {
            let g = random_connected(n, n, Weights::Uniform(0.2, 2.0), seed);
            let mx = MultiplexNetwork::new(vec![g.clone(); l], gamma).unwrap();
            let s = Solver::default();
            let rho_a = s.perron_pair(&g).unwrap().pair.value;
            let t = eigentensor(&s, &mx).unwrap();
            prop_assert!((t.rho - (rho_a + gamma * (l as f64 - 1.0))).abs() < 1e-8);
        }

        #[test]
        fn layer_permutation_permutes_columns(n in 2usize..8, seed in any::<u64>(), gamma in 0.1f64..2.0) {
            let layers: Vec<Graph> = (0..3)
                .map(|h| random_connected(n, 2, Weights::Uniform(0.5, 1.5), seed ^ h))
                .collect();
            let s = Solver::default();
            let t = eigentensor(&s, &MultiplexNetwork::new(layers.clone(), gamma).unwrap()).unwrap();
            let swapped = vec![layers[2].clone(), layers[0].clone(), layers[1].clone()];
            let u = eigentensor(&s, &MultiplexNetwork::new(swapped, gamma).unwrap()).unwrap();
            for (a, b) in [(0, 2), (1, 0), (2, 1)] {
                for i in 0..n {
                    prop_assert!((u.columns[a][i] - t.columns[b][i]).abs() < 1e-9);
                }
            }
        }
    }
}
