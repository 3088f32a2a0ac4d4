//! Induced biclaw detection, structural statistics and Hamiltonian cycle
//! construction for bipartite graphs.

pub mod cli;
pub mod detect;
pub mod generate;
pub mod graph;
pub mod hamilton;
pub mod oracle;
pub mod rng;
pub mod structure;

pub use detect::{find_induced_biclaw, is_biclaw_free, BiclawEmbedding, BiclawSearch, DetectError};
pub use generate::{BadSpec, GenSpec, NamedGraph};
pub use graph::{BipartiteGraph, GraphError, Side, VertexRef};
pub use hamilton::{hamiltonian_cycle, verify_cycle, CycleWitness, HamiltonError, PathWitness, Stage};
pub use structure::{constants, density_report, diameter, kst_bound, s_set, u_set, Diameter, StructureError};
