use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{BipartiteGraph, GraphError, VertexRef};

/// Why a vertex sequence is not a valid path or cycle witness.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessViolation {
    #[error("empty sequence")]
    Empty,
    #[error("cycle has {len} vertices, at least 4 are required")]
    TooShort { len: usize },
    #[error("cycle has odd length {len}")]
    OddLength { len: usize },
    #[error("{vertex} at position {position} is out of range")]
    OutOfRange { position: usize, vertex: VertexRef },
    #[error("{vertex} appears more than once")]
    Repeated { vertex: VertexRef },
    #[error("positions {position} and {next} are on the same side")]
    NotAlternating { position: usize, next: usize },
    #[error("{from} and {to} are consecutive but not adjacent")]
    NotAdjacent { from: VertexRef, to: VertexRef },
    #[error("cycle covers {covered} of {total} vertices")]
    NotSpanning { covered: usize, total: usize },
}

/// Checks range, distinctness, alternation and adjacency of consecutive
/// entries; with `closed` the last entry must also be adjacent to the first.
fn check_walk(g: &BipartiteGraph, vs: &[VertexRef], closed: bool) -> Result<(), WitnessViolation> {
    let mut seen = vec![false; g.vertex_count()];
    for (i, &v) in vs.iter().enumerate() {
        if !g.contains(v) {
            return Err(WitnessViolation::OutOfRange { position: i, vertex: v });
        }
        let f = g.flat_index(v);
        if seen[f] {
            return Err(WitnessViolation::Repeated { vertex: v });
        }
        seen[f] = true;
    }
    let n = vs.len();
    let hops = if closed { n } else { n.saturating_sub(1) };
    for i in 0..hops {
        let j = (i + 1) % n;
        if vs[i].side == vs[j].side {
            return Err(WitnessViolation::NotAlternating { position: i, next: j });
        }
        if !g.adjacent(vs[i], vs[j]) {
            return Err(WitnessViolation::NotAdjacent { from: vs[i], to: vs[j] });
        }
    }
    Ok(())
}

fn parse_tokens(s: &str) -> Result<Vec<VertexRef>, GraphError> {
    s.split_whitespace().map(str::parse).collect()
}

fn write_tokens(f: &mut fmt::Formatter<'_>, vs: &[VertexRef]) -> fmt::Result {
    for (i, v) in vs.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PathWitness {
    pub vertices: Vec<VertexRef>,
}

impl PathWitness {
    pub fn new(vertices: Vec<VertexRef>) -> Self {
        PathWitness { vertices }
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Number of edges.
    pub fn length(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn first(&self) -> Option<VertexRef> {
        self.vertices.first().copied()
    }

    pub fn last(&self) -> Option<VertexRef> {
        self.vertices.last().copied()
    }

    pub fn reversed(&self) -> PathWitness {
        PathWitness::new(self.vertices.iter().rev().copied().collect())
    }

    pub fn validate(&self, g: &BipartiteGraph) -> Result<(), WitnessViolation> {
        if self.vertices.is_empty() {
            return Err(WitnessViolation::Empty);
        }
        check_walk(g, &self.vertices, false)
    }
}

impl fmt::Display for PathWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tokens(f, &self.vertices)
    }
}

impl FromStr for PathWitness {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tokens(s).map(PathWitness::new)
    }
}

/// A cyclic vertex order. The closing edge from the last entry back to the
/// first is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CycleWitness {
    pub vertices: Vec<VertexRef>,
}

impl CycleWitness {
    pub fn new(vertices: Vec<VertexRef>) -> Self {
        CycleWitness { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Checks that this is a cycle of `g`, without requiring it to span.
    pub fn validate_cycle(&self, g: &BipartiteGraph) -> Result<(), WitnessViolation> {
        let len = self.vertices.len();
        if len < 4 {
            return Err(WitnessViolation::TooShort { len });
        }
        if len % 2 == 1 {
            return Err(WitnessViolation::OddLength { len });
        }
        check_walk(g, &self.vertices, true)
    }

    /// Checks that this is a Hamiltonian cycle of `g`.
    pub fn validate(&self, g: &BipartiteGraph) -> Result<(), WitnessViolation> {
        self.validate_cycle(g)?;
        if self.vertices.len() != g.vertex_count() {
            return Err(WitnessViolation::NotSpanning {
                covered: self.vertices.len(),
                total: g.vertex_count(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for CycleWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tokens(f, &self.vertices)
    }
}

impl FromStr for CycleWitness {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tokens(s).map(CycleWitness::new)
    }
}

/// Result of [`verify_cycle`]: a flag plus the first violation found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleCheck {
    pub valid: bool,
    pub violation: Option<WitnessViolation>,
}

pub fn verify_cycle(g: &BipartiteGraph, cycle: &CycleWitness) -> CycleCheck {
    match cycle.validate(g) {
        Ok(()) => CycleCheck { valid: true, violation: None },
        Err(v) => CycleCheck { valid: false, violation: Some(v) },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::cycle;

    fn cyc(s: &str) -> CycleWitness {
        s.parse().unwrap()
    }

    #[test]
    fn c6_cycle_verifies() {
        let g = cycle(3);
        assert!(verify_cycle(&g, &cyc("X0 Y0 X1 Y1 X2 Y2")).valid);
    }

    #[test]
    fn four_cycle_in_k33_does_not_span() {
        let g = BipartiteGraph::complete(3, 3);
        let check = verify_cycle(&g, &cyc("X0 Y0 X1 Y1"));
        assert_eq!(
            check.violation,
            Some(WitnessViolation::NotSpanning { covered: 4, total: 6 })
        );
    }

    #[test]
    fn non_edge_hop_is_reported() {
        let g = cycle(3);
        // X0 Y1 is not an edge of C6
        let check = verify_cycle(&g, &cyc("X0 Y1 X1 Y0 X2 Y2"));
        assert!(matches!(check.violation, Some(WitnessViolation::NotAdjacent { .. })));
    }

    #[test]
    fn shape_violations() {
        let g = BipartiteGraph::complete(3, 3);
        assert_eq!(cyc("X0 Y0").validate(&g), Err(WitnessViolation::TooShort { len: 2 }));
        assert_eq!(cyc("X0 Y0 X1 Y1 X2").validate(&g), Err(WitnessViolation::OddLength { len: 5 }));
        assert!(matches!(
            cyc("X0 Y0 X0 Y1").validate(&g),
            Err(WitnessViolation::Repeated { .. })
        ));
        assert!(matches!(
            cyc("X0 X1 Y0 Y1").validate(&g),
            Err(WitnessViolation::NotAlternating { .. })
        ));
        assert!(matches!(
            cyc("X0 Y0 X1 Y9").validate(&g),
            Err(WitnessViolation::OutOfRange { .. })
        ));
    }

    #[test]
    fn paths() {
        let g = cycle(3);
        let p: PathWitness = "Y0 X1 Y1".parse().unwrap();
        assert_eq!(p.validate(&g), Ok(()));
        assert_eq!(p.length(), 2);
        assert_eq!(p.reversed().to_string(), "Y1 X1 Y0");
        assert_eq!(PathWitness::new(vec![]).validate(&g), Err(WitnessViolation::Empty));
        assert!("X0 Q1".parse::<PathWitness>().is_err());
    }
}
