//! Edge sensitivity of the Perron value (spectral radius of the adjacency
//! matrix) and the Fiedler value (algebraic connectivity) of weighted
//! undirected networks.
//!
//! The crate computes Perron and Fiedler eigenpairs, first-order estimates
//! of how much each edge moves them, the impact matrices that rank edges by
//! that effect, and eigenvector condition numbers that say how far those
//! rankings can be trusted. On top of that sit spectral bipartition
//! procedures and multiplex (supra-matrix) tools.
//!
//! ```
//! use pfnet::{fixtures::Fixture, sensitivity, spectral};
//!
//! let g = Fixture::Example1.graph();
//! let perron = spectral::perron_pair(&g).unwrap();
//! let impact = sensitivity::perron_impact_matrix(&g, &perron.pair).unwrap();
//! let (edge, value) = impact.argmax().unwrap();
//! assert_eq!((edge.i, edge.j), (5, 4));
//! assert!((value - 0.2826).abs() < 1e-4);
//! ```

pub mod error;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod io;
pub mod matrix;
pub mod multiplex;
pub mod procedures;
pub mod report;
pub mod sensitivity;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Bipartition, EdgeRef, Graph, PartitionMethod};
pub use matrix::{MatrixKind, SymMatrix, SymmetricOperator};
pub use multiplex::{Aggregation, Eigentensor, MultiplexNetwork};
pub use procedures::{GreedyOptions, RemovalStep, RemovalTrace};
pub use report::{AnalysisReport, ReportFormat};
pub use sensitivity::{ConditionReport, ImpactKind, ImpactMatrix, WilkinsonMatrix};
pub use spectral::{EigenPair, FiedlerPair, PerronPair, Solver, SpectrumSlice};
