//! Built-in small graphs used throughout the tests and by `pfnet fixture`.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    K2,
    P3,
    P6,
    Example1,
    Example3Left,
    Example3Right,
    Triangle,
}

impl Fixture {
    pub const ALL: [Fixture; 7] = [
        Fixture::K2,
        Fixture::P3,
        Fixture::P6,
        Fixture::Example1,
        Fixture::Example3Left,
        Fixture::Example3Right,
        Fixture::Triangle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::K2 => "k2",
            Fixture::P3 => "p3",
            Fixture::P6 => "p6",
            Fixture::Example1 => "example1",
            Fixture::Example3Left => "example3-left",
            Fixture::Example3Right => "example3-right",
            Fixture::Triangle => "triangle",
        }
    }

    /// Where the fixture comes from.
    pub fn provenance(self) -> &'static str {
        match self {
            Fixture::K2 => "single unit edge",
            Fixture::P3 => "unweighted path on 3 nodes",
            Fixture::P6 => "unweighted path on 6 nodes (tridiagonal Toeplitz adjacency)",
            Fixture::Example1 => "weighted 6-node graph with rho = 2.2431 and mu = 0.4100",
            Fixture::Example3Left => "unweighted triangle {4,5,6} with pendants 1-4, 2-5, 3-6 (anti-community {1,2,3})",
            Fixture::Example3Right => "as example3-left with the triangle edges at weight 0.5",
            Fixture::Triangle => "unweighted K3",
        }
    }

    fn edges(self) -> (usize, Vec<(usize, usize, f64)>) {
        match self {
            Fixture::K2 => (2, vec![(2, 1, 1.0)]),
            Fixture::P3 => (3, vec![(2, 1, 1.0), (3, 2, 1.0)]),
            Fixture::P6 => (6, (2..=6).map(|i| (i, i - 1, 1.0)).collect()),
            Fixture::Example1 => (
                6,
                vec![
                    (4, 1, 0.5),
                    (4, 2, 1.0),
                    (4, 3, 1.0),
                    (5, 4, 1.0),
                    (5, 3, 1.0),
                    (6, 5, 0.5),
                ],
            ),
            Fixture::Example3Left => (
                6,
                vec![
                    (4, 1, 1.0),
                    (5, 2, 1.0),
                    (6, 3, 1.0),
                    (5, 4, 1.0),
                    (6, 4, 1.0),
                    (6, 5, 1.0),
                ],
            ),
            Fixture::Example3Right => (
                6,
                vec![
                    (4, 1, 1.0),
                    (5, 2, 1.0),
                    (6, 3, 1.0),
                    (5, 4, 0.5),
                    (6, 4, 0.5),
                    (6, 5, 0.5),
                ],
            ),
            Fixture::Triangle => (3, vec![(2, 1, 1.0), (3, 2, 1.0), (3, 1, 1.0)]),
        }
    }

    pub fn graph(self) -> Graph {
        let (n, edges) = self.edges();
        Graph::new(n, &edges).expect("fixture graphs are valid")
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Fixture::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFixture(s.to_string()))
    }
}
