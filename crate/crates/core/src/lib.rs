//! Discrete-time quantum walks on graphs: operator assembly, Szegedy
//! walks, the spectral map from the vertex-space discriminant, equilateral
//! quantum-graph walks and positive supports of Grover powers, with
//! brute-force eigensolver checks for each closed form.

pub mod compare;
pub mod eigen;
pub mod error;
pub mod graph;
pub mod grover_support;
pub mod linalg;
pub mod operators;
pub mod oracle;
pub mod quantum_graph;
pub mod spectral_map;
pub mod spectrum;
pub mod szegedy;

pub use error::{Error, Result};
pub use graph::Graph;
pub use linalg::ComplexMatrix;
pub use spectrum::{Provenance, Spectrum};
