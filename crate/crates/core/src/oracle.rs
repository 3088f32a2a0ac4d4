//! Brute-force references. These favor being obviously correct over speed
//! and share no search code with the fast paths they check.

use std::time::Instant;

use thiserror::Error;

use crate::detect::BiclawEmbedding;
use crate::graph::BipartiteGraph;
use crate::hamilton::CycleWitness;

pub const DEFAULT_BICLAW_BUDGET: u64 = 10_000_000;
pub const DEFAULT_HAMILTON_CAP: usize = 22;
pub const MAX_HAMILTON_CAP: usize = 26;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exhaustive search needs {needed} candidate checks, budget is {budget}")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("{vertices} vertices exceed the oracle cap of {cap}")]
    TooLarge { vertices: usize, cap: usize },
    #[error("oracle deadline exceeded")]
    Timeout,
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = match acc.checked_mul((n - i) as u64) {
            Some(v) => v / (i as u64 + 1),
            None => return u64::MAX,
        };
    }
    acc
}

/// Advances `idx` (a strictly increasing k-subset of `0..n`) to the next
/// subset in lexicographic order. Returns false after the last one.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Every k-subset of `items`, in lexicographic order of positions.
fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k > items.len() {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut out = vec![idx.iter().map(|&i| items[i]).collect()];
    while next_combination(&mut idx, items.len()) {
        out.push(idx.iter().map(|&i| items[i]).collect());
    }
    out
}

/// Exhaustive induced `S_{a,b}` search with the default budget.
pub fn oracle_induced_biclaw(g: &BipartiteGraph, a: usize, b: usize) -> Result<Option<BiclawEmbedding>, OracleError> {
    oracle_induced_biclaw_with(g, a, b, DEFAULT_BICLAW_BUDGET, None)
}

/// Tries every center edge, every `a`-subset of the center Y-vertex's other
/// neighbors and every `b`-subset of the center X-vertex's other neighbors,
/// in lexicographic order, and returns the first induced embedding.
///
/// The total number of `(A, B)` candidates is computed up front and must
/// not exceed `budget`.
pub fn oracle_induced_biclaw_with(
    g: &BipartiteGraph,
    a: usize,
    b: usize,
    budget: u64,
    deadline: Option<Instant>,
) -> Result<Option<BiclawEmbedding>, OracleError> {
    let needed = g.edges().fold(0u64, |acc, (x, y)| {
        let per = binomial(g.y_neighbors(y).len().saturating_sub(1), a)
            .saturating_mul(binomial(g.x_neighbors(x).len().saturating_sub(1), b));
        acc.saturating_add(per)
    });
    if needed > budget {
        return Err(OracleError::BudgetExceeded { needed, budget });
    }
    for (x, y) in g.edges() {
        if let Some(d) = deadline {
            if Instant::now() >= d {
                return Err(OracleError::Timeout);
            }
        }
        let others_x: Vec<usize> = g.y_neighbors(y).iter().copied().filter(|&v| v != x).collect();
        let others_y: Vec<usize> = g.x_neighbors(x).iter().copied().filter(|&v| v != y).collect();
        let choices_b = subsets(&others_y, b);
        for set_a in subsets(&others_x, a) {
            for set_b in &choices_b {
                let induced = set_a
                    .iter()
                    .all(|&xa| set_b.iter().all(|&yb| !g.has_edge(xa, yb)));
                if induced {
                    return Ok(Some(BiclawEmbedding {
                        center_x: x,
                        center_y: y,
                        leaves_x: set_a,
                        leaves_y: set_b.clone(),
                    }));
                }
            }
        }
    }
    Ok(None)
}

pub fn oracle_hamiltonian(g: &BipartiteGraph) -> Result<Option<CycleWitness>, OracleError> {
    oracle_hamiltonian_with(g, DEFAULT_HAMILTON_CAP, None)
}

/// Held–Karp style subset dynamic program anchored at X0.
///
/// `reach[mask]` is the set of vertices `v` such that some path starts at
/// the anchor, visits exactly the non-anchor vertices in `mask`, and ends at
/// `v`. A Hamiltonian cycle exists iff the full mask reaches a neighbor of
/// the anchor. `cap` is clamped to [`MAX_HAMILTON_CAP`].
pub fn oracle_hamiltonian_with(
    g: &BipartiteGraph,
    cap: usize,
    deadline: Option<Instant>,
) -> Result<Option<CycleWitness>, OracleError> {
    let cap = cap.min(MAX_HAMILTON_CAP);
    let n = g.vertex_count();
    if n > cap {
        return Err(OracleError::TooLarge { vertices: n, cap });
    }
    if !g.is_balanced() || g.nx() < 2 {
        return Ok(None);
    }
    // vertex flat index i >= 1 maps to bit i - 1
    let others = n - 1;
    let bit_of = |flat: usize| 1u32 << (flat - 1);
    let mut adj = vec![0u32; n];
    let mut anchor_adj = 0u32;
    for v in g.vertices() {
        let fv = g.flat_index(v);
        for w in g.neighbor_refs(v) {
            let fw = g.flat_index(w);
            if fw == 0 {
                continue;
            }
            if fv == 0 {
                anchor_adj |= bit_of(fw);
            } else {
                adj[fv] |= bit_of(fw);
            }
        }
    }
    let full: u32 = if others == 32 { u32::MAX } else { (1u32 << others) - 1 };
    let mut reach = vec![0u32; 1usize << others];
    for i in 0..others {
        if anchor_adj & (1 << i) != 0 {
            reach[1usize << i] |= 1 << i;
        }
    }
    for mask in 1..=full {
        if mask & 0xFFFF == 0 {
            if let Some(d) = deadline {
                if Instant::now() >= d {
                    return Err(OracleError::Timeout);
                }
            }
        }
        let mut ends = reach[mask as usize];
        while ends != 0 {
            let e = ends.trailing_zeros() as usize;
            ends &= ends - 1;
            let mut next = adj[e + 1] & !mask;
            while next != 0 {
                let w = next.trailing_zeros();
                next &= next - 1;
                reach[(mask | (1 << w)) as usize] |= 1 << w;
            }
        }
    }
    let closing = reach[full as usize] & anchor_adj;
    if closing == 0 {
        return Ok(None);
    }
    let mut end = closing.trailing_zeros() as usize;
    let mut mask = full;
    let mut tail = vec![end + 1];
    while mask.count_ones() > 1 {
        let prev = mask & !(1 << end);
        let candidates = reach[prev as usize] & adj[end + 1];
        end = candidates.trailing_zeros() as usize;
        tail.push(end + 1);
        mask = prev;
    }
    // tail runs from the closing neighbor back to the anchor's first step
    let mut vertices = vec![g.from_flat_index(0)];
    vertices.extend(tail.iter().rev().map(|&f| g.from_flat_index(f)));
    Ok(Some(CycleWitness::new(vertices)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{biclaw, complete_minus_permutation, cycle};
    use crate::hamilton::verify_cycle;

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(10, 0), 1);
        assert_eq!(binomial(200, 100), u64::MAX);
    }

    #[test]
    fn lexicographic_subsets() {
        assert_eq!(
            subsets(&[4, 5, 6, 7], 2),
            vec![vec![4, 5], vec![4, 6], vec![4, 7], vec![5, 6], vec![5, 7], vec![6, 7]]
        );
        assert_eq!(subsets(&[1, 2], 0), vec![Vec::<usize>::new()]);
        assert!(subsets(&[1], 2).is_empty());
    }

    #[test]
    fn biclaw_examples() {
        let s33 = biclaw(3, 3);
        let w = oracle_induced_biclaw(&s33, 3, 3).unwrap().unwrap();
        w.validate(&s33).unwrap();
        assert_eq!(oracle_induced_biclaw(&BipartiteGraph::complete(3, 3), 1, 1).unwrap(), None);
        let c6 = cycle(3);
        let w = oracle_induced_biclaw(&c6, 1, 1).unwrap().unwrap();
        w.validate(&c6).unwrap();
    }

    #[test]
    fn biclaw_budget() {
        let g = BipartiteGraph::complete(12, 12);
        assert!(matches!(
            oracle_induced_biclaw_with(&g, 3, 3, 1000, None),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn hamiltonian_examples() {
        let c6 = cycle(3);
        let c = oracle_hamiltonian(&c6).unwrap().unwrap();
        assert!(verify_cycle(&c6, &c).valid);
        assert_eq!(oracle_hamiltonian(&biclaw(1, 1)).unwrap(), None);
        let km = complete_minus_permutation(&[0, 1, 2, 3]);
        let c = oracle_hamiltonian(&km).unwrap().unwrap();
        assert!(verify_cycle(&km, &c).valid);
    }

    #[test]
    fn hamiltonian_size_cap() {
        let g = BipartiteGraph::complete(12, 12);
        assert_eq!(
            oracle_hamiltonian(&g),
            Err(OracleError::TooLarge { vertices: 24, cap: 22 })
        );
        let c = oracle_hamiltonian_with(&g, 24, None).unwrap().unwrap();
        assert!(verify_cycle(&g, &c).valid);
    }

    #[test]
    fn unbalanced_and_tiny_are_not_hamiltonian() {
        assert_eq!(oracle_hamiltonian(&BipartiteGraph::complete(2, 3)).unwrap(), None);
        assert_eq!(oracle_hamiltonian(&BipartiteGraph::complete(1, 1)).unwrap(), None);
    }
}
