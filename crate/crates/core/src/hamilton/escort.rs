use std::fmt;

use serde::Serialize;

use super::HamiltonError;
use crate::graph::{BipartiteGraph, Side, VertexRef};
use crate::structure::{u_set, DeficiencySet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CopyTag {
    Minus,
    Plus,
}

/// One of the two demand copies of a low-degree vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DemandCopy {
    pub vertex: VertexRef,
    pub copy: CopyTag,
}

impl fmt::Display for DemandCopy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.copy {
            CopyTag::Minus => '-',
            CopyTag::Plus => '+',
        };
        write!(f, "{}{}", self.vertex, tag)
    }
}

/// `u` together with its two private neighbors `minus` and `plus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Escort {
    pub u: VertexRef,
    pub minus: VertexRef,
    pub plus: VertexRef,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EscortAssignment {
    /// X-side vertices first, each side ascending.
    pub pairs: Vec<Escort>,
}

impl EscortAssignment {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Checks that escorts are neighbors of their vertex, lie outside the
    /// low-degree sets, and are pairwise distinct.
    pub fn validate(&self, g: &BipartiteGraph, low: &[VertexRef]) -> Result<(), String> {
        let mut used = Vec::new();
        for e in &self.pairs {
            for w in [e.minus, e.plus] {
                if !g.adjacent(e.u, w) {
                    return Err(format!("{w} is not a neighbor of {}", e.u));
                }
                if low.contains(&w) {
                    return Err(format!("{w} is itself low-degree"));
                }
                if used.contains(&w) {
                    return Err(format!("{w} escorts two vertices"));
                }
                used.push(w);
            }
        }
        Ok(())
    }
}

/// Low-degree sets for both sides at `epsilon`.
pub(crate) fn low_degree_sets(
    g: &BipartiteGraph,
    epsilon: f64,
) -> Result<(DeficiencySet, DeficiencySet), HamiltonError> {
    Ok((u_set(g, Side::X, epsilon)?, u_set(g, Side::Y, epsilon)?))
}

/// Assigns every vertex of `U_X(epsilon) ∪ U_Y(epsilon)` two distinct
/// neighbors outside both sets, all escorts pairwise distinct.
///
/// Each low-degree vertex contributes two demand copies; a maximum matching
/// from copies to admissible neighbors is grown one augmenting path at a
/// time, copies taken in order (X side first, then ascending index, minus
/// before plus) and neighbors tried ascending. When a copy cannot be
/// matched, the copies reached by the failed search together with the
/// neighbors they see form a Hall violation.
pub fn escort_matching(g: &BipartiteGraph, epsilon: f64) -> Result<EscortAssignment, HamiltonError> {
    let (ux, uy) = low_degree_sets(g, epsilon)?;
    let low: Vec<VertexRef> = ux.members.iter().chain(uy.members.iter()).copied().collect();
    let mut is_low = vec![false; g.vertex_count()];
    for &v in &low {
        is_low[g.flat_index(v)] = true;
    }

    let demand: Vec<DemandCopy> = low
        .iter()
        .flat_map(|&vertex| {
            [CopyTag::Minus, CopyTag::Plus].map(|copy| DemandCopy { vertex, copy })
        })
        .collect();
    let supply: Vec<Vec<usize>> = demand
        .iter()
        .map(|d| {
            g.neighbor_refs(d.vertex)
                .map(|w| g.flat_index(w))
                .filter(|&f| !is_low[f])
                .collect()
        })
        .collect();

    let mut owner: Vec<Option<usize>> = vec![None; g.vertex_count()];
    for d in 0..demand.len() {
        let mut visited = vec![false; g.vertex_count()];
        if !augment(d, &supply, &mut owner, &mut visited) {
            let mut copies = vec![demand[d]];
            let mut neighborhood = Vec::new();
            for (f, &seen) in visited.iter().enumerate() {
                if seen {
                    neighborhood.push(g.from_flat_index(f));
                    if let Some(o) = owner[f] {
                        copies.push(demand[o]);
                    }
                }
            }
            copies.sort();
            return Err(HamiltonError::HallViolation {
                demand: copies,
                neighborhood,
            });
        }
    }

    let mut matched = vec![0usize; demand.len()];
    for (f, o) in owner.iter().enumerate() {
        if let Some(d) = o {
            matched[*d] = f;
        }
    }
    let pairs = low
        .iter()
        .enumerate()
        .map(|(i, &u)| Escort {
            u,
            minus: g.from_flat_index(matched[2 * i]),
            plus: g.from_flat_index(matched[2 * i + 1]),
        })
        .collect();
    Ok(EscortAssignment { pairs })
}

/// Kuhn's augmenting-path step. A free neighbor is taken directly before
/// any reassignment is attempted, so uncontested copies keep their least
/// neighbor.
fn augment(d: usize, supply: &[Vec<usize>], owner: &mut [Option<usize>], visited: &mut [bool]) -> bool {
    if let Some(&s) = supply[d].iter().find(|&&s| !visited[s] && owner[s].is_none()) {
        visited[s] = true;
        owner[s] = Some(d);
        return true;
    }
    for &s in &supply[d] {
        if visited[s] {
            continue;
        }
        visited[s] = true;
        let free = match owner[s] {
            None => true,
            Some(o) => augment(o, supply, owner, visited),
        };
        if free {
            owner[s] = Some(d);
            return true;
        }
    }
    false
}
