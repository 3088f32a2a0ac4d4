use super::{CycleWitness, HamiltonError};
use crate::graph::BipartiteGraph;
use crate::graph::VertexRef;
use crate::oracle::{oracle_hamiltonian, DEFAULT_HAMILTON_CAP};

/// Hamiltonian cycle of a balanced bipartite graph with parts of size `m`.
///
/// Uses path extension with rotations. When `δ(g) > m/2` this always
/// succeeds. Otherwise it still tries, and on failure falls back to the
/// exact oracle if `2m` is within its default cap.
pub fn dense_cycle(g: &BipartiteGraph) -> Result<CycleWitness, HamiltonError> {
    if !g.is_balanced() {
        return Err(HamiltonError::Unbalanced { nx: g.nx(), ny: g.ny() });
    }
    let m = g.nx();
    if m < 2 {
        return Err(HamiltonError::InvalidInput(format!("parts of size {m} cannot carry a cycle")));
    }
    let dense = 2 * g.min_degree() > m;
    match rotation_extension(g) {
        Some(c) => Ok(c),
        None if g.vertex_count() <= DEFAULT_HAMILTON_CAP => match oracle_hamiltonian(g)? {
            Some(c) => Ok(c),
            None => Err(HamiltonError::NonHamiltonian),
        },
        None if dense => Err(HamiltonError::NotFound(
            "rotation search failed despite the degree condition".into(),
        )),
        None => Err(HamiltonError::NotFound(format!(
            "rotation search gave up; minimum degree {} is not above {m}/2",
            g.min_degree()
        ))),
    }
}

/// The rotation search on its own, without the exact fallback. Returns
/// `None` when it gets stuck or exceeds its step cap of `4m²`, which cannot
/// happen when `δ(g) > m/2`.
pub fn rotation_extension(g: &BipartiteGraph) -> Option<CycleWitness> {
    if !g.is_balanced() || g.nx() < 2 {
        return None;
    }
    RotationSearch::new(g).run()
}

struct RotationSearch<'a> {
    g: &'a BipartiteGraph,
    on_path: Vec<bool>,
    steps: usize,
    step_cap: usize,
}

impl<'a> RotationSearch<'a> {
    fn new(g: &'a BipartiteGraph) -> Self {
        let m = g.nx();
        RotationSearch {
            g,
            on_path: vec![false; g.vertex_count()],
            steps: 0,
            step_cap: 4 * m * m,
        }
    }

    fn tick(&mut self) -> Option<()> {
        self.steps += 1;
        (self.steps <= self.step_cap).then_some(())
    }

    fn mark(&mut self, v: VertexRef, on: bool) {
        let f = self.g.flat_index(v);
        self.on_path[f] = on;
    }

    fn is_on(&self, v: VertexRef) -> bool {
        self.on_path[self.g.flat_index(v)]
    }

    fn reset_marks(&mut self, path: &[VertexRef]) {
        self.on_path.iter_mut().for_each(|f| *f = false);
        for &v in path {
            self.mark(v, true);
        }
    }

    /// Extends the tail with least-index off-path neighbors until stuck.
    fn extend_tail(&mut self, path: &mut Vec<VertexRef>) -> Option<()> {
        loop {
            let tail = *path.last()?;
            let next = self.g.neighbor_refs(tail).find(|&w| !self.is_on(w));
            match next {
                Some(w) => {
                    self.tick()?;
                    path.push(w);
                    self.mark(w, true);
                }
                None => return Some(()),
            }
        }
    }

    fn run(mut self) -> Option<CycleWitness> {
        let g = self.g;
        let total = g.vertex_count();
        let start = VertexRef::x(0);
        let mut path = vec![start];
        self.mark(start, true);
        loop {
            self.extend_tail(&mut path)?;
            path.reverse();
            self.extend_tail(&mut path)?;
            self.tick()?;
            if path.len() % 2 == 1 {
                path = self.reroute_odd(&path)?;
                self.reset_marks(&path);
                continue;
            }
            let cycle = self.close(&path)?;
            if cycle.len() == total {
                return Some(CycleWitness::new(cycle));
            }
            path = self.open(&cycle)?;
            self.reset_marks(&path);
        }
    }

    /// Both ends of `path` lie on the same side and cannot be extended.
    /// Finds an off-path vertex `w` on the other side and a position `j`
    /// with `p_0 ~ p_j` and `w ~ p_{j-1}`, and returns
    /// `w, p_{j-1}, ..., p_0, p_j, ..., p_{k-1}`. Tries the reversed path
    /// if the forward one has no such pair.
    fn reroute_odd(&self, path: &[VertexRef]) -> Option<Vec<VertexRef>> {
        let g = self.g;
        let side = path[0].side.opposite();
        let outside: Vec<VertexRef> = g.side_vertices(side).filter(|&w| !self.is_on(w)).collect();
        let forward = path.to_vec();
        let backward: Vec<VertexRef> = path.iter().rev().copied().collect();
        for p in [forward, backward] {
            for &w in &outside {
                let hit = (1..p.len())
                    .step_by(2)
                    .find(|&j| g.adjacent(p[0], p[j]) && g.adjacent(w, p[j - 1]));
                if let Some(j) = hit {
                    let mut out = Vec::with_capacity(p.len() + 1);
                    out.push(w);
                    out.extend(p[..j].iter().rev());
                    out.extend(&p[j..]);
                    return Some(out);
                }
            }
        }
        None
    }

    /// Closes an even path with stuck ends into a cycle on the same vertex
    /// set, directly or through a crossing pair `p_0 ~ p_{i+1}`,
    /// `p_{k-1} ~ p_i`.
    fn close(&self, path: &[VertexRef]) -> Option<Vec<VertexRef>> {
        let g = self.g;
        let k = path.len();
        if k < 4 {
            return None;
        }
        if g.adjacent(path[0], path[k - 1]) {
            return Some(path.to_vec());
        }
        let i = (0..k - 1)
            .step_by(2)
            .find(|&i| g.adjacent(path[0], path[i + 1]) && g.adjacent(path[k - 1], path[i]))?;
        let mut out = path[..=i].to_vec();
        out.extend(path[i + 1..].iter().rev());
        Some(out)
    }

    /// Opens a non-spanning cycle at the first cycle vertex with an
    /// off-cycle neighbor `w`: `w, c_i, c_{i+1}, ..., c_{i-1}`.
    fn open(&self, cycle: &[VertexRef]) -> Option<Vec<VertexRef>> {
        let g = self.g;
        let (i, w) = cycle
            .iter()
            .enumerate()
            .find_map(|(i, &c)| g.neighbor_refs(c).find(|&w| !self.is_on(w)).map(|w| (i, w)))?;
        let mut out = Vec::with_capacity(cycle.len() + 1);
        out.push(w);
        out.extend(&cycle[i..]);
        out.extend(&cycle[..i]);
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete_minus_permutation, cycle, GenSpec};
    use crate::hamilton::verify_cycle;
    use crate::rng::SplitMix64;

    #[test]
    fn complete_graphs() {
        for m in 2..12 {
            let g = BipartiteGraph::complete(m, m);
            let c = dense_cycle(&g).unwrap();
            assert!(verify_cycle(&g, &c).valid, "K_{m},{m}");
        }
    }

    #[test]
    fn dense_random_graphs_never_need_the_oracle() {
        let mut rng = SplitMix64::new(5);
        for trial in 0..200 {
            let m = 12 + rng.below(30);
            let perm = rng.permutation(m);
            let mut g = complete_minus_permutation(&perm);
            // thin it further while keeping the degree above m/2
            let mut edges: Vec<(usize, usize)> = g.edges().collect();
            rng.shuffle(&mut edges);
            let mut deg_x = vec![m - 1; m];
            let mut deg_y = vec![m - 1; m];
            edges.retain(|&(x, y)| {
                let keep = rng.below(3) != 0 || 2 * (deg_x[x] - 1) <= m || 2 * (deg_y[y] - 1) <= m;
                if !keep {
                    deg_x[x] -= 1;
                    deg_y[y] -= 1;
                }
                keep
            });
            g = BipartiteGraph::new(m, m, edges).unwrap();
            assert!(2 * g.min_degree() > m);
            let c = RotationSearch::new(&g).run().unwrap_or_else(|| panic!("trial {trial} failed"));
            assert!(verify_cycle(&g, &c).valid);
        }
    }

    #[test]
    fn sparse_inputs_fall_back_or_fail() {
        let g = cycle(5);
        let c = dense_cycle(&g).unwrap();
        assert!(verify_cycle(&g, &c).valid);
        let p = GenSpec::Named(crate::generate::NamedGraph::P4).generate().unwrap();
        assert_eq!(dense_cycle(&p), Err(HamiltonError::NonHamiltonian));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(matches!(
            dense_cycle(&BipartiteGraph::complete(2, 3)),
            Err(HamiltonError::Unbalanced { .. })
        ));
        assert!(matches!(
            dense_cycle(&BipartiteGraph::complete(1, 1)),
            Err(HamiltonError::InvalidInput(_))
        ));
    }
}
