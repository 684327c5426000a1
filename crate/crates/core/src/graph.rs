//! Simple weighted undirected graphs.
//!
//! Nodes are 1-based at the API boundary (`EdgeRef`, component lists, file
//! formats) and 0-based in the internal storage. Each undirected edge is kept
//! once, in canonical orientation `i > j`, sorted by `(i, j)`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// An undirected edge `e(i <-> j)` in canonical form `i > j`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeRef {
    pub i: usize,
    pub j: usize,
}

impl EdgeRef {
    /// Builds the canonical reference for the unordered pair `{a, b}`.
    pub fn new(a: usize, b: usize) -> Self {
        if a > b {
            EdgeRef { i: a, j: b }
        } else {
            EdgeRef { i: b, j: a }
        }
    }

    /// Ordering used to break ties in rankings: smallest `(j, i)` first.
    pub fn tie_key(&self) -> (usize, usize) {
        (self.j, self.i)
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Edge {
    // 0-based, hi > lo
    hi: usize,
    lo: usize,
    w: f64,
}

/// A simple weighted undirected graph on nodes `1..=n` with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph from 1-based `(i, j, w)` triples in either orientation.
    pub fn new(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyNodeSet);
        }
        let mut map = BTreeMap::new();
        for &(a, b, w) in edges {
            for index in [a, b] {
                if index == 0 || index > n {
                    return Err(Error::IndexOutOfRange { index, n });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            let e = EdgeRef::new(a, b);
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonPositiveWeight {
                    i: e.i,
                    j: e.j,
                    weight: w,
                });
            }
            if map.insert((e.i, e.j), w).is_some() {
                return Err(Error::DuplicateEdge { i: e.i, j: e.j });
            }
        }
        let edges = map
            .into_iter()
            .map(|((i, j), w)| Edge {
                hi: i - 1,
                lo: j - 1,
                w,
            })
            .collect();
        Ok(Graph { n, edges })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical order as `(EdgeRef, weight)`.
    pub fn edges(&self) -> impl Iterator<Item = (EdgeRef, f64)> + '_ {
        self.edges.iter().map(|e| {
            (
                EdgeRef {
                    i: e.hi + 1,
                    j: e.lo + 1,
                },
                e.w,
            )
        })
    }

    /// Edges as 0-based `(hi, lo, w)`.
    pub(crate) fn raw_edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.edges.iter().map(|e| (e.hi, e.lo, e.w))
    }

    fn position(&self, e: EdgeRef) -> Option<usize> {
        if e.j == 0 || e.i > self.n || e.i <= e.j {
            return None;
        }
        self.edges
            .binary_search_by(|x| (x.hi, x.lo).cmp(&(e.i - 1, e.j - 1)))
            .ok()
    }

    /// Weight of edge `e`, or `None` if absent.
    pub fn weight(&self, e: EdgeRef) -> Option<f64> {
        self.position(e).map(|p| self.edges[p].w)
    }

    pub fn has_edge(&self, e: EdgeRef) -> bool {
        self.position(e).is_some()
    }

    /// True when every weight equals one.
    pub fn is_unweighted(&self) -> bool {
        self.edges.iter().all(|e| e.w == 1.0)
    }

    /// Weighted degrees, 0-based.
    pub fn degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for e in &self.edges {
            d[e.hi] += e.w;
            d[e.lo] += e.w;
        }
        d
    }

    /// Multiplies the weight of `e` by `1 - tau`; `tau = 1` deletes the edge.
    pub fn scale_edge(&self, e: EdgeRef, tau: f64) -> Result<Graph> {
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::TauOutOfRange(tau));
        }
        let p = self.position(e).ok_or(Error::NoSuchEdge { i: e.i, j: e.j })?;
        let mut g = self.clone();
        if tau == 1.0 {
            g.edges.remove(p);
        } else {
            g.edges[p].w *= 1.0 - tau;
        }
        Ok(g)
    }

    /// Removes edge `e`.
    pub fn remove_edge(&self, e: EdgeRef) -> Result<Graph> {
        self.scale_edge(e, 1.0)
    }

    /// Sets the weight of `e`, adding the edge if it is absent; a weight of
    /// zero removes it.
    pub fn with_weight(&self, e: EdgeRef, w: f64) -> Result<Graph> {
        if e.i > self.n {
            return Err(Error::IndexOutOfRange { index: e.i, n: self.n });
        }
        if w == 0.0 {
            return self.remove_edge(e);
        }
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::NonPositiveWeight {
                i: e.i,
                j: e.j,
                weight: w,
            });
        }
        let mut g = self.clone();
        match self.position(e) {
            Some(p) => g.edges[p].w = w,
            None => {
                g.edges.push(Edge {
                    hi: e.i - 1,
                    lo: e.j - 1,
                    w,
                });
                g.edges.sort_by_key(|x| (x.hi, x.lo));
            }
        }
        Ok(g)
    }

    /// 0-based adjacency lists.
    pub(crate) fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.hi].push(e.lo);
            adj[e.lo].push(e.hi);
        }
        adj
    }

    /// A proper 2-coloring (0-based node order) if the graph is bipartite.
    pub fn two_coloring(&self) -> Option<Vec<bool>> {
        let adj = self.neighbors();
        let mut color: Vec<Option<bool>> = vec![None; self.n];
        let mut queue = std::collections::VecDeque::new();
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(false);
            queue.push_back(s);
            while let Some(v) = queue.pop_front() {
                let c = color[v].expect("queued nodes are colored");
                for &w in &adj[v] {
                    match color[w] {
                        None => {
                            color[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(d) if d == c => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.expect("every node visited")).collect())
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.neighbors();
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut count = 1;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    queue.push_back(y);
                }
            }
        }
        count == self.n
    }

    /// Maximal connected node sets, 1-based, each ascending, ordered by their
    /// smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let adj = self.neighbors();
        let mut label = vec![usize::MAX; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if label[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            label[start] = id;
            let mut members = vec![start + 1];
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if label[y] == usize::MAX {
                        label[y] = id;
                        members.push(y + 1);
                        queue.push_back(y);
                    }
                }
            }
            members.sort_unstable();
            comps.push(members);
        }
        comps
    }

    /// Subgraph induced by the 1-based `nodes`, relabeled `1..=nodes.len()`
    /// in the given order.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> Result<Graph> {
        let mut map = vec![usize::MAX; self.n];
        for (k, &v) in nodes.iter().enumerate() {
            if v == 0 || v > self.n {
                return Err(Error::IndexOutOfRange { index: v, n: self.n });
            }
            map[v - 1] = k + 1;
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .filter(|e| map[e.hi] != usize::MAX && map[e.lo] != usize::MAX)
            .map(|e| (map[e.hi], map[e.lo], e.w))
            .collect();
        Graph::new(nodes.len(), &edges)
    }

    /// Total weight of the edges crossing `p`.
    pub fn cut_weight(&self, p: &Bipartition) -> Result<f64> {
        let side = p.sides(self.n)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| side[e.hi] != side[e.lo])
            .map(|e| e.w)
            .sum())
    }
}

/// How a bipartition was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionMethod {
    FiedlerSign,
    FiedlerMedian,
    PerronGreedy,
    DecrementGreedy,
    Given,
}

/// Two disjoint nonempty node sets covering `1..=n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bipartition {
    pub part1: Vec<usize>,
    pub part2: Vec<usize>,
    pub method: PartitionMethod,
    pub cut_weight: f64,
    /// Split threshold for the median method.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

impl Bipartition {
    /// A partition with no cut weight attached yet.
    pub fn new(part1: Vec<usize>, part2: Vec<usize>, method: PartitionMethod) -> Self {
        Bipartition {
            part1,
            part2,
            method,
            cut_weight: 0.0,
            threshold: None,
        }
    }

    /// Side of each node (0-based): `false` for part 1. Validates coverage.
    fn sides(&self, n: usize) -> Result<Vec<bool>> {
        if self.part1.is_empty() || self.part2.is_empty() {
            return Err(Error::InvalidPartition("empty part".into()));
        }
        let mut side = vec![None; n];
        for (s, part) in [(false, &self.part1), (true, &self.part2)] {
            for &v in part {
                if v == 0 || v > n {
                    return Err(Error::InvalidPartition(format!("node {v} out of range")));
                }
                if side[v - 1].replace(s).is_some() {
                    return Err(Error::InvalidPartition(format!("node {v} listed twice")));
                }
            }
        }
        side.into_iter()
            .enumerate()
            .map(|(k, s)| s.ok_or_else(|| Error::InvalidPartition(format!("node {} missing", k + 1))))
            .collect()
    }

    /// The two parts as an unordered pair, for comparisons that ignore which
    /// side is called part 1.
    pub fn unordered(&self) -> (Vec<usize>, Vec<usize>) {
        if self.part1 <= self.part2 {
            (self.part1.clone(), self.part2.clone())
        } else {
            (self.part2.clone(), self.part1.clone())
        }
    }
}
