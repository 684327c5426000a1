//! Reference computations for the integration tests. Nothing here calls the
//! library's numerics: spectra come from a cyclic Jacobi iteration on dense
//! matrices built straight from the edge list.

#![allow(dead_code)]

use pfnet::Graph;

pub type Dense = Vec<Vec<f64>>;

/// Eigen-decomposition of a dense symmetric matrix.
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// `vectors[k]` belongs to `values[k]`; unit norm.
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
pub fn jacobi(mut a: Dense) -> Eigen {
    let n = a.len();
    let mut v: Dense = (0..n).map(|i| (0..n).map(|j| f64::from(i == j)).collect()).collect();
    let total: f64 = a.iter().flatten().map(|x| x * x).sum();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off <= 1e-30 * total.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut().chain(v.iter_mut()) {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = c * xp - s * xq;
                    row[q] = s * xp + c * xq;
                }
                let (row_p, row_q) = (a[p].clone(), a[q].clone());
                for (k, (xp, xq)) in row_p.into_iter().zip(row_q).enumerate() {
                    a[p][k] = c * xp - s * xq;
                    a[q][k] = s * xp + c * xq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x][x].total_cmp(&a[y][y]));
    Eigen {
        values: order.iter().map(|&k| a[k][k]).collect(),
        vectors: order.iter().map(|&k| v.iter().map(|row| row[k]).collect()).collect(),
    }
}

pub fn adjacency(g: &Graph) -> Dense {
    let n = g.node_count();
    let mut a = vec![vec![0.0; n]; n];
    for (e, w) in g.edges() {
        a[e.i - 1][e.j - 1] = w;
        a[e.j - 1][e.i - 1] = w;
    }
    a
}

pub fn laplacian(g: &Graph) -> Dense {
    let mut l = adjacency(g);
    for (i, row) in l.iter_mut().enumerate() {
        let d: f64 = row.iter().sum();
        row.iter_mut().for_each(|x| *x = -*x);
        row[i] = d;
    }
    l
}

/// `I - D^{-1/2} A D^{-1/2}`; the graph must have no isolated nodes.
pub fn normalized_laplacian(g: &Graph) -> Dense {
    let a = adjacency(g);
    let d: Vec<f64> = a.iter().map(|r| r.iter().sum::<f64>()).collect();
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| f64::from(i == j) - a[i][j] / (d[i] * d[j]).sqrt())
                .collect()
        })
        .collect()
}

/// Largest eigenvalue and its eigenvector with positive sum.
pub fn perron(g: &Graph) -> (f64, Vec<f64>) {
    let e = jacobi(adjacency(g));
    let k = e.values.len() - 1;
    let mut u = e.vectors[k].clone();
    if u.iter().sum::<f64>() < 0.0 {
        u.iter_mut().for_each(|x| *x = -*x);
    }
    (e.values[k], u)
}

/// Breadth-first 2-coloring; true when no edge joins two nodes of one color.
pub fn is_bipartite(g: &Graph) -> bool {
    let n = g.node_count();
    let mut nbrs = vec![Vec::new(); n];
    for (e, _) in g.edges() {
        nbrs[e.i - 1].push(e.j - 1);
        nbrs[e.j - 1].push(e.i - 1);
    }
    let mut color: Vec<Option<bool>> = vec![None; n];
    for s in 0..n {
        if color[s].is_some() {
            continue;
        }
        color[s] = Some(false);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let cx = color[x].unwrap();
            for &y in &nbrs[x] {
                match color[y] {
                    None => {
                        color[y] = Some(!cx);
                        queue.push_back(y);
                    }
                    Some(cy) if cy == cx => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// `blkdiag(A_h) + gamma (1 1^T (x) I - I)`, node `i` of layer `h` at `h n + i`.
pub fn supra_adjacency(layers: &[Graph], gamma: f64) -> Dense {
    supra(layers, adjacency, 0.0, gamma)
}

/// `blkdiag(L_h) + gamma (l I - 1 1^T (x) I)`.
pub fn supra_laplacian(layers: &[Graph], gamma: f64) -> Dense {
    let l = layers.len() as f64;
    supra(layers, laplacian, gamma * (l - 1.0), -gamma)
}

fn supra(layers: &[Graph], block: fn(&Graph) -> Dense, diag_shift: f64, coupling: f64) -> Dense {
    let n = layers[0].node_count();
    let size = n * layers.len();
    let mut m = vec![vec![0.0; size]; size];
    for (h, g) in layers.iter().enumerate() {
        for (i, row) in block(g).into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                m[h * n + i][h * n + j] = x;
            }
            m[h * n + i][h * n + i] += diag_shift;
        }
    }
    for h1 in 0..layers.len() {
        for h2 in (0..layers.len()).filter(|&h| h != h1) {
            for i in 0..n {
                m[h1 * n + i][h2 * n + i] = coupling;
            }
        }
    }
    m
}

/// Largest absolute entrywise difference of two vectors.
pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// `max_diff` after flipping `a` if that brings it closer to `b`.
pub fn max_diff_up_to_sign(a: &[f64], b: &[f64]) -> f64 {
    let neg: Vec<f64> = a.iter().map(|x| -x).collect();
    max_diff(a, b).min(max_diff(&neg, b))
}
