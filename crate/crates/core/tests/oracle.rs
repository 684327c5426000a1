mod common;

use pfnet::generate::{random_connected, Weights};
use pfnet::multiplex::{self, MultiplexNetwork};
use pfnet::sensitivity::{perron_impact_matrix, structured_condition};
use pfnet::{matrix, Graph, Solver};
use proptest::prelude::*;

fn graph_strategy() -> impl Strategy<Value = Graph> {
    (3usize..16, 0usize..12, any::<u64>(), any::<bool>()).prop_map(|(n, extra, seed, unit)| {
        let w = if unit {
            Weights::Unit
        } else {
            Weights::Uniform(0.2, 3.0)
        };
        random_connected(n, extra, w, seed)
    })
}

#[test]
fn jacobi_matches_path_closed_form() {
    let n = 9;
    let edges: Vec<_> = (2..=n).map(|i| (i, i - 1, 1.0)).collect();
    let g = Graph::new(n, &edges).unwrap();
    let e = common::jacobi(common::adjacency(&g));
    for (k, x) in e.values.iter().enumerate() {
        let want = 2.0 * (std::f64::consts::PI * (n - k) as f64 / (n + 1) as f64).cos();
        assert!((x - want).abs() < 1e-12, "{k}: {x} vs {want}");
    }
}

#[test]
fn bfs_oracle_on_cycles() {
    let cycle = |n: usize| {
        let mut edges: Vec<_> = (2..=n).map(|i| (i, i - 1, 1.0)).collect();
        edges.push((n, 1, 1.0));
        Graph::new(n, &edges).unwrap()
    };
    assert!(common::is_bipartite(&cycle(6)));
    assert!(!common::is_bipartite(&cycle(7)));
}

#[test]
fn lanczos_agrees_with_dense_on_larger_graphs() {
    let dense = Solver::default();
    let lanczos = Solver::iterative();
    for seed in 0..4 {
        let g = random_connected(300, 150, Weights::Uniform(0.5, 2.0), seed);
        let a = dense.perron_pair(&g).unwrap();
        let b = lanczos.perron_pair(&g).unwrap();
        assert!((a.pair.value - b.pair.value).abs() < 1e-9);
        assert!((a.second_largest - b.second_largest).abs() < 1e-8);
        assert!(common::max_diff(&a.pair.vector, &b.pair.vector) < 1e-7);
        let la = dense.laplacian_bottom(&g, 3).unwrap();
        let lb = lanczos.laplacian_bottom(&g, 3).unwrap();
        assert!(common::max_diff(&la, &lb) < 1e-8, "{la:?} vs {lb:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn perron_pair_matches_oracle(g in graph_strategy()) {
        let p = Solver::default().perron_pair(&g).unwrap();
        let (rho, u) = common::perron(&g);
        prop_assert!((p.pair.value - rho).abs() < 1e-10);
        prop_assert!(u.iter().all(|&x| x > 0.0));
        prop_assert!(common::max_diff(&p.pair.vector, &u) < 1e-7);
    }

    #[test]
    fn spectra_match_oracle(g in graph_strategy()) {
        let s = Solver::default();
        let l = s.full_spectrum(&matrix::laplacian(&g)).unwrap();
        prop_assert!(common::max_diff(&l.values, &common::jacobi(common::laplacian(&g)).values) < 1e-10);
        let nl = s.full_spectrum(&matrix::normalized_laplacian(&g).unwrap()).unwrap();
        let on = common::jacobi(common::normalized_laplacian(&g)).values;
        prop_assert!(common::max_diff(&nl.values, &on) < 1e-10);
    }

    #[test]
    fn perron_impact_and_structured_condition_match_oracle(g in graph_strategy()) {
        let p = Solver::default().perron_pair(&g).unwrap();
        let (rho, u) = common::perron(&g);
        let r = perron_impact_matrix(&g, &p.pair).unwrap();
        let mut sq = 0.0;
        for (e, w) in g.edges() {
            let want = 2.0 / rho * w * u[e.i - 1] * u[e.j - 1];
            prop_assert!((r.get(e).unwrap() - want).abs() < 1e-9);
            sq += (u[e.i - 1] * u[e.j - 1]).powi(2);
        }
        let ks = structured_condition(&p.pair.vector, &g).unwrap().0;
        prop_assert!((ks - (2.0 * sq).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn supra_matrices_match_block_formula(
        n in 3usize..8,
        l in 2usize..4,
        seed in any::<u64>(),
        gamma in 1e-3f64..10.0,
    ) {
        let layers: Vec<Graph> = (0..l as u64)
            .map(|h| random_connected(n, 2, Weights::Uniform(0.5, 2.0), seed ^ h))
            .collect();
        let mx = MultiplexNetwork::new(layers.clone(), gamma).unwrap();
        let b = multiplex::supra_adjacency(&mx).to_dense();
        let m = multiplex::supra_laplacian(&mx).to_dense();
        let ob = common::supra_adjacency(&layers, gamma);
        let om = common::supra_laplacian(&layers, gamma);
        for i in 0..n * l {
            for j in 0..n * l {
                prop_assert!((b[(i, j)] - ob[i][j]).abs() < 1e-14);
                prop_assert!((m[(i, j)] - om[i][j]).abs() < 1e-14);
            }
        }
    }
}
