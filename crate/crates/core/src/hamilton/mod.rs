//! Constructive Hamiltonian cycles in dense, biclaw-free balanced bipartite
//! graphs.
//!
//! The pipeline runs in stages: escort matching for low-degree vertices, a
//! cover path threaded through them with short connectors, a cycle in the
//! dense remainder, and a splice that inserts the path into that cycle.

mod connector;
mod cover;
mod dense;
mod escort;
mod pipeline;
mod splice;
mod witness;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{BipartiteGraph, VertexRef};
use crate::oracle::OracleError;
use crate::structure::StructureError;

pub use connector::short_connector;
pub use cover::cover_path;
pub use dense::{dense_cycle, rotation_extension};
pub use escort::{escort_matching, CopyTag, DemandCopy, Escort, EscortAssignment};
pub use pipeline::{hamiltonian_cycle, hamiltonian_cycle_with, Fallback, HamiltonOptions, HamiltonOutcome, PipelineFailure, Route};
pub use splice::splice;
pub use witness::{verify_cycle, CycleCheck, CycleWitness, PathWitness, WitnessViolation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HamiltonError {
    #[error("Hall condition fails: {} demand copies see only {} vertices", demand.len(), neighborhood.len())]
    HallViolation {
        demand: Vec<DemandCopy>,
        neighborhood: Vec<VertexRef>,
    },
    #[error("no connector of length at most 3 from {from} to {to} ({from_options} and {to_options} usable neighbors)")]
    NoConnector {
        from: VertexRef,
        to: VertexRef,
        from_options: usize,
        to_options: usize,
    },
    #[error("minimum degree {min_degree} is not above half of {part_size}")]
    DenseHypothesisUnmet { min_degree: usize, part_size: usize },
    #[error("no cycle edge to splice into ({start_attachments} cycle neighbors at the path start, {end_attachments} at the end)")]
    NoSpliceEdge {
        start_attachments: usize,
        end_attachments: usize,
    },
    #[error("no Hamiltonian cycle found: {0}")]
    NotFound(String),
    #[error("graph is not Hamiltonian")]
    NonHamiltonian,
    #[error("unbalanced graph: |X| = {nx}, |Y| = {ny}")]
    Unbalanced { nx: usize, ny: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("constructed cycle is invalid: {0}")]
    Verification(WitnessViolation),
}

impl HamiltonError {
    /// Short snake_case tag, used in CSV and JSON output.
    pub fn kind(&self) -> &'static str {
        match self {
            HamiltonError::HallViolation { .. } => "hall_violation",
            HamiltonError::NoConnector { .. } => "no_connector",
            HamiltonError::DenseHypothesisUnmet { .. } => "dense_hypothesis_unmet",
            HamiltonError::NoSpliceEdge { .. } => "no_splice_edge",
            HamiltonError::NotFound(_) => "not_found",
            HamiltonError::NonHamiltonian => "non_hamiltonian",
            HamiltonError::Unbalanced { .. } => "unbalanced",
            HamiltonError::Disconnected => "disconnected",
            HamiltonError::InvalidInput(_) => "invalid_input",
            HamiltonError::Structure(_) => "structure",
            HamiltonError::Oracle(_) => "oracle",
            HamiltonError::Verification(_) => "verification",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Precondition,
    EscortMatching,
    ShortConnector,
    CoverPath,
    DenseCycle,
    Splice,
    Verify,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Precondition => "precondition",
            Stage::EscortMatching => "escort_matching",
            Stage::ShortConnector => "short_connector",
            Stage::CoverPath => "cover_path",
            Stage::DenseCycle => "dense_cycle",
            Stage::Splice => "splice",
            Stage::Verify => "verify",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An error tagged with the stage that raised it.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{stage}: {error}")]
pub struct StageFailure {
    pub stage: Stage,
    pub error: HamiltonError,
}

impl StageFailure {
    pub fn new(stage: Stage, error: HamiltonError) -> Self {
        StageFailure { stage, error }
    }
}

/// A set of vertices of one graph, stored as a flag per flat index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexSet {
    nx: usize,
    flags: Vec<bool>,
}

impl VertexSet {
    pub fn new(g: &BipartiteGraph) -> Self {
        VertexSet {
            nx: g.nx(),
            flags: vec![false; g.vertex_count()],
        }
    }

    pub fn from_vertices<I: IntoIterator<Item = VertexRef>>(g: &BipartiteGraph, vs: I) -> Self {
        let mut s = VertexSet::new(g);
        for v in vs {
            s.insert(v);
        }
        s
    }

    fn slot(&self, v: VertexRef) -> usize {
        match v.side {
            crate::graph::Side::X => v.index,
            crate::graph::Side::Y => self.nx + v.index,
        }
    }

    pub fn insert(&mut self, v: VertexRef) {
        let i = self.slot(v);
        self.flags[i] = true;
    }

    pub fn remove(&mut self, v: VertexRef) {
        let i = self.slot(v);
        self.flags[i] = false;
    }

    /// Out-of-range vertices are never members.
    pub fn contains(&self, v: VertexRef) -> bool {
        if v.side == crate::graph::Side::X && v.index >= self.nx {
            return false;
        }
        self.flags.get(self.slot(v)).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.flags.iter().filter(|&&f| f).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.flags.iter().any(|&f| f)
    }
}
