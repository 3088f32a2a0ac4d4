use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use super::{cover_path, dense_cycle, splice, CycleWitness, HamiltonError, PathWitness, Stage, StageFailure};
use crate::graph::{BipartiteGraph, VertexRef};
use crate::oracle::{oracle_hamiltonian_with, OracleError, DEFAULT_HAMILTON_CAP};

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonOptions {
    pub epsilon: f64,
    /// Largest vertex count handed to the exact fallback.
    pub oracle_cap: usize,
    pub deadline: Option<Instant>,
}

impl Default for HamiltonOptions {
    fn default() -> Self {
        HamiltonOptions {
            epsilon: 0.01,
            oracle_cap: DEFAULT_HAMILTON_CAP,
            deadline: None,
        }
    }
}

/// How the returned cycle was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum Route {
    Pipeline,
    /// The constructive pipeline failed at `failed`; the exact oracle
    /// found a cycle instead.
    OracleFallback { failed: StageFailure },
}

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonOutcome {
    pub cycle: CycleWitness,
    pub route: Route,
}

/// What happened after the pipeline itself failed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fallback {
    /// The graph was too large for the exact oracle.
    Skipped,
    /// The oracle proved that no Hamiltonian cycle exists.
    NonHamiltonian,
    /// The oracle gave up (deadline).
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{failure}")]
pub struct PipelineFailure {
    pub failure: StageFailure,
    pub fallback: Fallback,
}

impl PipelineFailure {
    pub fn stage(&self) -> Stage {
        self.failure.stage
    }
}

pub fn hamiltonian_cycle(g: &BipartiteGraph, epsilon: f64) -> Result<HamiltonOutcome, PipelineFailure> {
    hamiltonian_cycle_with(
        g,
        &HamiltonOptions {
            epsilon,
            ..HamiltonOptions::default()
        },
    )
}

/// Runs cover path, dense cycle and splice, verifies the result, and falls
/// back to the exact oracle on small graphs if any stage fails.
pub fn hamiltonian_cycle_with(g: &BipartiteGraph, opts: &HamiltonOptions) -> Result<HamiltonOutcome, PipelineFailure> {
    let failure = match construct(g, opts.epsilon) {
        Ok(cycle) => {
            return Ok(HamiltonOutcome {
                cycle,
                route: Route::Pipeline,
            })
        }
        Err(f) => f,
    };
    if g.vertex_count() > opts.oracle_cap {
        return Err(PipelineFailure {
            failure,
            fallback: Fallback::Skipped,
        });
    }
    match oracle_hamiltonian_with(g, opts.oracle_cap, opts.deadline) {
        Ok(Some(cycle)) => {
            debug_assert!(cycle.validate(g).is_ok());
            Ok(HamiltonOutcome {
                cycle,
                route: Route::OracleFallback { failed: failure },
            })
        }
        Ok(None) => Err(PipelineFailure {
            failure,
            fallback: Fallback::NonHamiltonian,
        }),
        Err(e @ (OracleError::Timeout | OracleError::TooLarge { .. } | OracleError::BudgetExceeded { .. })) => {
            Err(PipelineFailure {
                failure,
                fallback: Fallback::Failed(e.to_string()),
            })
        }
    }
}

fn construct(g: &BipartiteGraph, epsilon: f64) -> Result<CycleWitness, StageFailure> {
    let pre = |e| StageFailure::new(Stage::Precondition, e);
    if !g.is_balanced() {
        return Err(pre(HamiltonError::Unbalanced { nx: g.nx(), ny: g.ny() }));
    }
    if g.nx() < 2 {
        return Err(pre(HamiltonError::NonHamiltonian));
    }
    if !g.is_connected() {
        return Err(pre(HamiltonError::Disconnected));
    }

    let path = cover_path(g, epsilon)?;
    let (h, x_map, y_map) = g.without_vertices(&path.vertices);
    let lift = |v: VertexRef| match v.side {
        crate::graph::Side::X => VertexRef::x(x_map[v.index]),
        crate::graph::Side::Y => VertexRef::y(y_map[v.index]),
    };

    let cycle = match h.nx() {
        0 => return close_path(g, &path),
        1 => {
            // a single remaining edge is inserted as a two-vertex path
            let rest = PathWitness::new(vec![lift(VertexRef::y(0)), lift(VertexRef::x(0))]);
            if !g.adjacent(rest.vertices[0], rest.vertices[1]) {
                return Err(StageFailure::new(
                    Stage::DenseCycle,
                    HamiltonError::NotFound("the two leftover vertices are not adjacent".into()),
                ));
            }
            let mut joined = path.vertices.clone();
            joined.extend(&rest.vertices);
            return close_path(g, &PathWitness::new(joined));
        }
        m => {
            let delta = h.min_degree();
            if 2 * delta <= m {
                return Err(StageFailure::new(
                    Stage::DenseCycle,
                    HamiltonError::DenseHypothesisUnmet {
                        min_degree: delta,
                        part_size: m,
                    },
                ));
            }
            let local = dense_cycle(&h).map_err(|e| StageFailure::new(Stage::DenseCycle, e))?;
            CycleWitness::new(local.vertices.into_iter().map(lift).collect())
        }
    };
    let spliced = splice(g, &cycle, &path).map_err(|e| StageFailure::new(Stage::Splice, e))?;
    spliced
        .validate(g)
        .map_err(|v| StageFailure::new(Stage::Verify, HamiltonError::Verification(v)))?;
    Ok(spliced)
}

/// A spanning path whose ends are adjacent is already a Hamiltonian cycle.
fn close_path(g: &BipartiteGraph, path: &PathWitness) -> Result<CycleWitness, StageFailure> {
    let cycle = CycleWitness::new(path.vertices.clone());
    cycle.validate(g).map_err(|_| {
        StageFailure::new(
            Stage::Splice,
            HamiltonError::NoSpliceEdge {
                start_attachments: 0,
                end_attachments: 0,
            },
        )
    })?;
    Ok(cycle)
}
