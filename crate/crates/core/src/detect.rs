//! Induced `(a, b)`-biclaw detection.
//!
//! `S_{a,b}` is the double star with center edge `x–y`, `a` pendant
//! X-vertices hanging off `y` and `b` pendant Y-vertices hanging off `x`.
//! A graph contains it as an induced subgraph exactly when some edge `x–y`
//! has sets `A ⊆ N(y) \ {x}` and `B ⊆ N(x) \ {y}` of sizes `a` and `b` with
//! no edges between them, so the search runs per edge.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{BipartiteGraph, VertexRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectError {
    #[error("X{x}–Y{y} is not an edge")]
    NotAnEdge { x: usize, y: usize },
    #[error("search deadline exceeded")]
    Timeout,
}

/// A witness for an induced `S_{a,b}`.
///
/// `center_x` and `leaves_x` index X; `center_y` and `leaves_y` index Y.
/// `leaves_x` hang off `center_y`, `leaves_y` hang off `center_x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiclawEmbedding {
    pub center_x: usize,
    pub center_y: usize,
    pub leaves_x: Vec<usize>,
    pub leaves_y: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingViolation {
    #[error("{0} is not a vertex of the graph")]
    OutOfRange(VertexRef),
    #[error("center edge X{0}–Y{1} missing")]
    MissingCenterEdge(usize, usize),
    #[error("leaf {leaf} is not adjacent to its center {center}")]
    DetachedLeaf { leaf: VertexRef, center: VertexRef },
    #[error("leaves X{0} and Y{1} are adjacent")]
    LeafEdge(usize, usize),
    #[error("vertex {0} repeated")]
    Repeated(VertexRef),
}

impl BiclawEmbedding {
    pub fn center_refs(&self) -> (VertexRef, VertexRef) {
        (VertexRef::x(self.center_x), VertexRef::y(self.center_y))
    }

    /// Sizes `(a, b)` of the embedded biclaw.
    pub fn shape(&self) -> (usize, usize) {
        (self.leaves_x.len(), self.leaves_y.len())
    }

    pub fn vertices(&self) -> Vec<VertexRef> {
        let mut v = vec![VertexRef::x(self.center_x), VertexRef::y(self.center_y)];
        v.extend(self.leaves_x.iter().map(|&i| VertexRef::x(i)));
        v.extend(self.leaves_y.iter().map(|&j| VertexRef::y(j)));
        v
    }

    /// Checks that the witness spans an induced `S_{a,b}` in `g`.
    pub fn validate(&self, g: &BipartiteGraph) -> Result<(), EmbeddingViolation> {
        let vs = self.vertices();
        if let Some(&v) = vs.iter().find(|&&v| !g.contains(v)) {
            return Err(EmbeddingViolation::OutOfRange(v));
        }
        let mut sorted = vs.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(EmbeddingViolation::Repeated(w[0]));
        }
        if !g.has_edge(self.center_x, self.center_y) {
            return Err(EmbeddingViolation::MissingCenterEdge(self.center_x, self.center_y));
        }
        for &xl in &self.leaves_x {
            if !g.has_edge(xl, self.center_y) {
                return Err(EmbeddingViolation::DetachedLeaf {
                    leaf: VertexRef::x(xl),
                    center: VertexRef::y(self.center_y),
                });
            }
        }
        for &yl in &self.leaves_y {
            if !g.has_edge(self.center_x, yl) {
                return Err(EmbeddingViolation::DetachedLeaf {
                    leaf: VertexRef::y(yl),
                    center: VertexRef::x(self.center_x),
                });
            }
        }
        for &xl in &self.leaves_x {
            for &yl in &self.leaves_y {
                if g.has_edge(xl, yl) {
                    return Err(EmbeddingViolation::LeafEdge(xl, yl));
                }
            }
        }
        Ok(())
    }
}

fn join(ids: &[usize]) -> String {
    ids.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for BiclawEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "biclaw x={} y={} A={} B={}",
            self.center_x,
            self.center_y,
            join(&self.leaves_x),
            join(&self.leaves_y)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed biclaw record: {0}")]
pub struct ParseEmbeddingError(String);

impl FromStr for BiclawEmbedding {
    type Err = ParseEmbeddingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseEmbeddingError(s.to_string());
        let mut fields = s.split_whitespace();
        if fields.next() != Some("biclaw") {
            return Err(err());
        }
        let mut field = |key: &str| -> Result<&str, ParseEmbeddingError> {
            fields
                .next()
                .and_then(|f| f.strip_prefix(key))
                .and_then(|f| f.strip_prefix('='))
                .ok_or_else(err)
        };
        let one = |v: &str| v.parse::<usize>().map_err(|_| err());
        let list = |v: &str| -> Result<Vec<usize>, ParseEmbeddingError> {
            if v.is_empty() {
                return Ok(Vec::new());
            }
            v.split(',').map(|t| t.parse::<usize>().map_err(|_| err())).collect()
        };
        let center_x = one(field("x")?)?;
        let center_y = one(field("y")?)?;
        let leaves_x = list(field("A")?)?;
        let leaves_y = list(field("B")?)?;
        if fields.next().is_some() {
            return Err(err());
        }
        Ok(BiclawEmbedding {
            center_x,
            center_y,
            leaves_x,
            leaves_y,
        })
    }
}

/// Configurable search for an induced `S_{a,b}`.
///
/// Whatever the schedule, the reported witness is the least in
/// `(edge, A, B)` lexicographic order.
#[derive(Debug, Clone)]
pub struct BiclawSearch {
    a: usize,
    b: usize,
    deadline: Option<Instant>,
    parallel: bool,
}

impl BiclawSearch {
    pub fn new(a: usize, b: usize) -> Self {
        BiclawSearch {
            a,
            b,
            deadline: None,
            parallel: true,
        }
    }

    pub fn deadline(mut self, deadline: Option<Instant>) -> Self {
        self.deadline = deadline;
        self
    }

    pub fn parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn run(&self, g: &BipartiteGraph) -> Result<Option<BiclawEmbedding>, DetectError> {
        let ctx = EdgeSearch::new(g, self.a, self.b, self.deadline);
        // An edge can host a witness only if d(y) >= a+1 and d(x) >= b+1.
        let edges: Vec<(usize, usize)> = g
            .edges()
            .filter(|&(x, y)| g.y_neighbors(y).len() > self.a && g.x_neighbors(x).len() > self.b)
            .collect();
        let probe = |&(x, y): &(usize, usize)| -> Option<Result<BiclawEmbedding, DetectError>> {
            match ctx.witness(x, y) {
                Ok(Some((leaves_x, leaves_y))) => Some(Ok(BiclawEmbedding {
                    center_x: x,
                    center_y: y,
                    leaves_x,
                    leaves_y,
                })),
                Ok(None) => None,
                Err(e) => Some(Err(e)),
            }
        };
        let found = if self.parallel {
            edges.par_iter().find_map_first(probe)
        } else {
            edges.iter().find_map(probe)
        };
        found.transpose()
    }
}

/// Lexicographically least `(A, B)` for the edge `x–y`, or `None`.
///
/// `A ⊆ N(y) \ {x}` has size `a`, `B ⊆ N(x) \ {y}` has size `b`, and no
/// edge joins `A` to `B`.
pub fn complement_biclique_witness(
    g: &BipartiteGraph,
    x: usize,
    y: usize,
    a: usize,
    b: usize,
) -> Result<Option<LeafSets>, DetectError> {
    if !g.has_edge(x, y) {
        return Err(DetectError::NotAnEdge { x, y });
    }
    EdgeSearch::new(g, a, b, None).witness(x, y)
}

pub fn find_induced_biclaw(g: &BipartiteGraph, a: usize, b: usize) -> Option<BiclawEmbedding> {
    BiclawSearch::new(a, b)
        .run(g)
        .expect("no deadline, so no timeout")
}

pub fn is_biclaw_free(g: &BipartiteGraph, t: usize) -> bool {
    find_induced_biclaw(g, t, t).is_none()
}

/// Leaf sets `(A, B)`: X-leaves first, then Y-leaves.
pub type LeafSets = (Vec<usize>, Vec<usize>);

const DEADLINE_STRIDE: u64 = 1 << 12;

struct EdgeSearch<'g> {
    g: &'g BipartiteGraph,
    a: usize,
    b: usize,
    deadline: Option<Instant>,
    /// Y-side non-neighbors of each X-vertex, ascending. Dense inputs make
    /// these short, which is where the first-level filter gets its speed.
    non_adj: Vec<Vec<usize>>,
    /// X-side non-neighbors of each Y-vertex, ascending.
    non_adj_y: Vec<Vec<usize>>,
    /// Row-major adjacency bits, built when `nx * ny` is at most
    /// `MATRIX_LIMIT`; larger graphs fall back to binary search.
    matrix: Option<Vec<u64>>,
    /// Vertices that can sit in some complement `K_{a,b}` at all.
    viable_x: Vec<bool>,
    viable_y: Vec<bool>,
}

/// Cap on `sum_w |non_adj(w)|^2` for the viability pass; denser
/// complements skip it and treat every vertex as viable.
const VIABILITY_BUDGET: usize = 1 << 24;

/// A vertex `v` on one side can lie in a complement biclique with `own`
/// vertices on its side and `other` on the far side only if `own - 1`
/// further vertices share at least `other` of its non-neighbors (and it
/// has `other` non-neighbors itself).
fn viability(own_non: &[Vec<usize>], far_non: &[Vec<usize>], own: usize, other: usize) -> Vec<bool> {
    let n = own_non.len();
    if other == 0 {
        return vec![true; n];
    }
    let base: Vec<bool> = own_non.iter().map(|l| l.len() >= other).collect();
    if own <= 1 {
        return base;
    }
    let work: usize = far_non.iter().map(|l| l.len() * l.len()).sum();
    if work > VIABILITY_BUDGET {
        return base;
    }
    let mut shared = vec![0usize; n];
    let mut touched = Vec::new();
    (0..n)
        .map(|v| {
            if !base[v] {
                return false;
            }
            for &w in &own_non[v] {
                for &u in &far_non[w] {
                    if u != v && base[u] {
                        if shared[u] == 0 {
                            touched.push(u);
                        }
                        shared[u] += 1;
                    }
                }
            }
            let partners = touched.iter().filter(|&&u| shared[u] >= other).count();
            for u in touched.drain(..) {
                shared[u] = 0;
            }
            partners + 1 >= own
        })
        .collect()
}

const MATRIX_LIMIT: usize = 1 << 26;

impl<'g> EdgeSearch<'g> {
    fn new(g: &'g BipartiteGraph, a: usize, b: usize, deadline: Option<Instant>) -> Self {
        let non_adj = (0..g.nx())
            .map(|x| {
                let mut out = Vec::with_capacity(g.ny() - g.x_neighbors(x).len());
                let mut nbrs = g.x_neighbors(x).iter().peekable();
                for yy in 0..g.ny() {
                    if nbrs.peek() == Some(&&yy) {
                        nbrs.next();
                    } else {
                        out.push(yy);
                    }
                }
                out
            })
            .collect::<Vec<Vec<usize>>>();
        let mut non_adj_y = vec![Vec::new(); g.ny()];
        for (x, row) in non_adj.iter().enumerate() {
            for &yy in row {
                non_adj_y[yy].push(x);
            }
        }
        let matrix = (g.nx().saturating_mul(g.ny()) <= MATRIX_LIMIT).then(|| {
            let mut bits = vec![0u64; (g.nx() * g.ny()).div_ceil(64)];
            for (x, y) in g.edges() {
                let i = x * g.ny() + y;
                bits[i / 64] |= 1 << (i % 64);
            }
            bits
        });
        let viable_x = viability(&non_adj, &non_adj_y, a, b);
        let viable_y = viability(&non_adj_y, &non_adj, b, a);
        EdgeSearch {
            g,
            a,
            b,
            deadline,
            viable_x,
            viable_y,
            non_adj,
            non_adj_y,
            matrix,
        }
    }

    fn witness(&self, x: usize, y: usize) -> Result<Option<LeafSets>, DetectError> {
        self.check_deadline()?;
        let cand_a: Vec<usize> = self
            .g
            .y_neighbors(y)
            .iter()
            .copied()
            .filter(|&v| v != x && self.viable_x[v])
            .collect();
        if cand_a.len() < self.a {
            return Ok(None);
        }
        let cand_b: Vec<usize> = self
            .g
            .x_neighbors(x)
            .iter()
            .copied()
            .filter(|&w| w != y && self.viable_y[w])
            .collect();
        if cand_a.len() < self.a || cand_b.len() < self.b {
            return Ok(None);
        }
        if self.a == 0 {
            return Ok(Some((Vec::new(), cand_b[..self.b].to_vec())));
        }
        let mut state = DfsState {
            cand_a: &cand_a,
            chosen: Vec::with_capacity(self.a),
            steps: 0,
            x,
            y,
        };
        Ok(self
            .extend(&mut state, 0, &cand_b)?
            .map(|leaves_y| (state.chosen, leaves_y)))
    }

    /// Tries every continuation of `state.chosen` with candidates from
    /// `cand_a[start..]`; `inter` holds the Y-candidates not adjacent to any
    /// chosen vertex, in ascending order.
    fn extend(&self, state: &mut DfsState<'_>, start: usize, inter: &[usize]) -> Result<Option<Vec<usize>>, DetectError> {
        if state.chosen.len() == self.a {
            return Ok(Some(inter[..self.b].to_vec()));
        }
        let need = self.a - state.chosen.len();
        let end = state.cand_a.len() + 1 - need;
        if start >= end {
            return Ok(None);
        }
        for i in self.positions(state, start, end, inter) {
            state.steps += 1;
            if state.steps.is_multiple_of(DEADLINE_STRIDE) {
                self.check_deadline()?;
            }
            let v = state.cand_a[i];
            let next = if state.chosen.is_empty() {
                self.first_level(state.x, state.y, v, inter)
            } else {
                inter.iter().copied().filter(|&w| !self.adjacent(v, w)).collect()
            };
            if next.len() < self.b {
                continue;
            }
            state.chosen.push(v);
            if let Some(found) = self.extend(state, i + 1, &next)? {
                return Ok(Some(found));
            }
            state.chosen.pop();
        }
        Ok(None)
    }

    /// Positions in `cand_a[start..end]` worth trying, ascending. A useful
    /// vertex misses at least `b` members of `inter`, so it is a
    /// non-neighbor of one of the first `inter.len() - b + 1`; below the
    /// first level those non-neighborhoods are usually the shorter list.
    fn positions(&self, state: &DfsState<'_>, start: usize, end: usize, inter: &[usize]) -> Vec<usize> {
        if state.chosen.is_empty() || self.b == 0 {
            return (start..end).collect();
        }
        let window = &inter[..inter.len() + 1 - self.b];
        let pool: usize = window.iter().map(|&w| self.non_adj_y[w].len()).sum();
        if pool >= end - start {
            return (start..end).collect();
        }
        let slice = &state.cand_a[start..end];
        let mut out: Vec<usize> = window
            .iter()
            .flat_map(|&w| self.non_adj_y[w].iter())
            .filter_map(|v| slice.binary_search(v).ok().map(|p| start + p))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    #[inline]
    fn adjacent(&self, x: usize, y: usize) -> bool {
        match &self.matrix {
            Some(bits) => {
                let i = x * self.g.ny() + y;
                bits[i / 64] >> (i % 64) & 1 == 1
            }
            None => self.g.has_edge(x, y),
        }
    }

    fn check_deadline(&self) -> Result<(), DetectError> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(DetectError::Timeout),
            _ => Ok(()),
        }
    }

    /// `cand_b \ N(v)`, computed from whichever of `cand_b` or `v`'s
    /// non-neighborhood is shorter.
    fn first_level(&self, x: usize, y: usize, v: usize, cand_b: &[usize]) -> Vec<usize> {
        let non = &self.non_adj[v];
        if non.len() < cand_b.len() {
            non.iter()
                .copied()
                .filter(|&w| w != y && self.adjacent(x, w))
                .collect()
        } else {
            cand_b.iter().copied().filter(|&w| !self.adjacent(v, w)).collect()
        }
    }
}

struct DfsState<'a> {
    cand_a: &'a [usize],
    chosen: Vec<usize>,
    steps: u64,
    x: usize,
    y: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn biclaw_graph(a: usize, b: usize) -> BipartiteGraph {
        let edges = std::iter::once((0, 0))
            .chain((1..=a).map(|i| (i, 0)))
            .chain((1..=b).map(|j| (0, j)));
        BipartiteGraph::new(a + 1, b + 1, edges).unwrap()
    }

    fn c6() -> BipartiteGraph {
        BipartiteGraph::new(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]).unwrap()
    }

    fn k44_minus_matching() -> BipartiteGraph {
        let edges = (0..4).flat_map(|x| (0..4).filter(move |&y| y != x).map(move |y| (x, y)));
        BipartiteGraph::new(4, 4, edges).unwrap()
    }

    #[test]
    fn complete_graph_has_no_witness() {
        let g = BipartiteGraph::complete(3, 3);
        for (x, y) in g.edges() {
            assert_eq!(complement_biclique_witness(&g, x, y, 1, 1).unwrap(), None);
        }
    }

    #[test]
    fn path_on_four_vertices() {
        let g = biclaw_graph(1, 1);
        assert_eq!(
            complement_biclique_witness(&g, 0, 0, 1, 1).unwrap(),
            Some((vec![1], vec![1]))
        );
    }

    #[test]
    fn s33_center_edge() {
        let g = biclaw_graph(3, 3);
        assert_eq!(
            complement_biclique_witness(&g, 0, 0, 3, 3).unwrap(),
            Some((vec![1, 2, 3], vec![1, 2, 3]))
        );
    }

    #[test]
    fn not_an_edge() {
        let g = biclaw_graph(1, 1);
        assert_eq!(
            complement_biclique_witness(&g, 1, 1, 1, 1),
            Err(DetectError::NotAnEdge { x: 1, y: 1 })
        );
    }

    #[test]
    fn eight_cycle_is_22_free() {
        let edges = (0..4).flat_map(|i| [(i, i), ((i + 1) % 4, i)]);
        let c8 = BipartiteGraph::new(4, 4, edges).unwrap();
        assert_eq!(find_induced_biclaw(&c8, 2, 2), None);
    }

    #[test]
    fn six_cycle_contains_s11() {
        let g = c6();
        let w = find_induced_biclaw(&g, 1, 1).unwrap();
        w.validate(&g).unwrap();
        // least edge is X0–Y0; least A is X1, then B = least of N(X0)\{Y0} off N(X1)
        assert_eq!(w.to_string(), "biclaw x=0 y=0 A=1 B=2");
    }

    #[test]
    fn k44_minus_matching_is_22_free() {
        assert_eq!(find_induced_biclaw(&k44_minus_matching(), 2, 2), None);
    }

    #[test]
    fn freeness_examples() {
        for n in 1..6 {
            for t in 1..4 {
                assert!(is_biclaw_free(&BipartiteGraph::complete(n, n), t));
            }
        }
        let s33 = biclaw_graph(3, 3);
        assert!(!is_biclaw_free(&s33, 3));
        assert!(is_biclaw_free(&s33, 4));
    }

    #[test]
    fn record_round_trip() {
        let w = BiclawEmbedding {
            center_x: 4,
            center_y: 2,
            leaves_x: vec![0, 7],
            leaves_y: vec![1],
        };
        assert_eq!(w.to_string(), "biclaw x=4 y=2 A=0,7 B=1");
        assert_eq!(w.to_string().parse::<BiclawEmbedding>().unwrap(), w);
        assert!("biclaw x=1 y=2 A=3".parse::<BiclawEmbedding>().is_err());
        assert!("claw x=1 y=2 A=3 B=4".parse::<BiclawEmbedding>().is_err());
    }

    #[test]
    fn validation_catches_violations() {
        let g = c6();
        let bad = BiclawEmbedding {
            center_x: 0,
            center_y: 0,
            leaves_x: vec![1],
            leaves_y: vec![1],
        };
        assert_eq!(bad.validate(&g), Err(EmbeddingViolation::DetachedLeaf {
            leaf: VertexRef::y(1),
            center: VertexRef::x(0),
        }));
        let leaf_edge = BiclawEmbedding {
            center_x: 0,
            center_y: 0,
            leaves_x: vec![1],
            leaves_y: vec![2],
        };
        assert!(leaf_edge.validate(&BipartiteGraph::complete(3, 3)).is_err());
    }

    #[test]
    fn expired_deadline_times_out() {
        let g = k44_minus_matching();
        let past = Instant::now() - std::time::Duration::from_secs(1);
        for parallel in [false, true] {
            let res = BiclawSearch::new(2, 2).deadline(Some(past)).parallel(parallel).run(&g);
            assert_eq!(res, Err(DetectError::Timeout));
        }
        let future = Instant::now() + std::time::Duration::from_secs(600);
        assert_eq!(BiclawSearch::new(2, 2).deadline(Some(future)).run(&g), Ok(None));
    }
}
