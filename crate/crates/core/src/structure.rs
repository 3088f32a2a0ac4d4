//! Structural statistics: deficiency sets, diameter, the Kővári–Sós–Turán
//! bound, the constant ladder `C1..C6`, and a density report that collects
//! them for one graph.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{BipartiteGraph, Side, VertexRef};
use crate::rng::SplitMix64;

/// Slack for comparing an integer degree with a real threshold, so that
/// thresholds like `0.9 * 10` count as exactly 9.
const THRESHOLD_SLACK: f64 = 1e-9;

/// Values beyond this are reported as [`Magnitude::Huge`].
pub const HUGE_THRESHOLD: f64 = 1e300;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error("target set is empty")]
    EmptyTarget,
    #[error("base and target must lie on opposite sides")]
    SameSide,
    #[error("target set mixes both sides")]
    MixedTarget,
    #[error("side {0} is empty or has maximum degree 0")]
    EmptySide(Side),
    #[error("epsilon {0} outside (0, 1)")]
    BadEpsilon(f64),
}

pub(crate) fn within(count: usize, threshold: f64) -> bool {
    count as f64 <= threshold + THRESHOLD_SLACK
}

fn check_epsilon(epsilon: f64) -> Result<(), StructureError> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(StructureError::BadEpsilon(epsilon))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DeficiencyKind {
    /// Few neighbors inside a target set.
    S,
    /// Low degree relative to the side's maximum degree.
    U,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Target {
    Set(Vec<VertexRef>),
    SideMax { side: Side, max_degree: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeficiencySet {
    pub kind: DeficiencyKind,
    pub epsilon: f64,
    pub base: Vec<VertexRef>,
    pub target: Target,
    /// Ascending.
    pub members: Vec<VertexRef>,
}

impl DeficiencySet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexRef) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

/// Members of `base` with at most `(1 - epsilon)|target|` neighbors in `target`.
pub fn s_set(
    g: &BipartiteGraph,
    base: &[VertexRef],
    target: &[VertexRef],
    epsilon: f64,
) -> Result<DeficiencySet, StructureError> {
    check_epsilon(epsilon)?;
    let first = target.first().ok_or(StructureError::EmptyTarget)?;
    let target_side = first.side;
    if target.iter().any(|v| v.side != target_side) {
        return Err(StructureError::MixedTarget);
    }
    if base.iter().any(|v| v.side == target_side) {
        return Err(StructureError::SameSide);
    }
    let mut in_target = vec![false; g.side_len(target_side)];
    let mut distinct = 0;
    for v in target {
        if !in_target[v.index] {
            in_target[v.index] = true;
            distinct += 1;
        }
    }
    let threshold = (1.0 - epsilon) * distinct as f64;
    let mut members: Vec<VertexRef> = base
        .iter()
        .copied()
        .filter(|&v| {
            let into = g.neighbors(v).iter().filter(|&&w| in_target[w]).count();
            within(into, threshold)
        })
        .collect();
    members.sort_unstable();
    members.dedup();
    Ok(DeficiencySet {
        kind: DeficiencyKind::S,
        epsilon,
        base: base.to_vec(),
        target: Target::Set(target.to_vec()),
        members,
    })
}

/// Vertices of `side` with degree at most `(1 - epsilon)` times the side's maximum degree.
pub fn u_set(g: &BipartiteGraph, side: Side, epsilon: f64) -> Result<DeficiencySet, StructureError> {
    check_epsilon(epsilon)?;
    let max_degree = g.max_degree(side);
    if max_degree == 0 {
        return Err(StructureError::EmptySide(side));
    }
    let threshold = (1.0 - epsilon) * max_degree as f64;
    let members = g
        .side_vertices(side)
        .filter(|&v| within(g.degree(v), threshold))
        .collect();
    Ok(DeficiencySet {
        kind: DeficiencyKind::U,
        epsilon,
        base: g.side_vertices(side).collect(),
        target: Target::SideMax { side, max_degree },
        members,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Diameter {
    Finite(usize),
    Infinite,
}

impl Diameter {
    pub fn finite(self) -> Option<usize> {
        match self {
            Diameter::Finite(d) => Some(d),
            Diameter::Infinite => None,
        }
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Diameter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Diameter::Finite(d) => s.serialize_u64(*d as u64),
            Diameter::Infinite => s.serialize_none(),
        }
    }
}

/// All-sources breadth-first search. The empty graph is treated as disconnected.
pub fn diameter(g: &BipartiteGraph) -> Diameter {
    if g.vertex_count() == 0 {
        return Diameter::Infinite;
    }
    let sources: Vec<VertexRef> = g.vertices().collect();
    sources
        .par_iter()
        .map(|&s| {
            let dist = g.bfs_distances(s);
            match dist.iter().max().copied() {
                Some(usize::MAX) => Diameter::Infinite,
                Some(d) => Diameter::Finite(d),
                None => Diameter::Finite(0),
            }
        })
        .max()
        .unwrap_or(Diameter::Infinite)
}

/// `(s-1)^(1/t) (|B|-t+1) |A|^(1-1/t) + (t-1)|A|`: a strict upper bound on the
/// edge count of a `K_{s,t}`-free bipartite graph with parts `A`, `B`.
pub fn kst_bound(s: usize, t: usize, size_a: usize, size_b: usize) -> f64 {
    let (s, t, a, b) = (s as f64, t as f64, size_a as f64, size_b as f64);
    (s - 1.0).powf(1.0 / t) * (b - t + 1.0) * a.powf(1.0 - 1.0 / t) + (t - 1.0) * a
}

/// A nonnegative real that may have saturated past [`HUGE_THRESHOLD`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Magnitude {
    Finite(f64),
    Huge,
}

impl Magnitude {
    fn of(v: f64) -> Self {
        if v.is_finite() && v <= HUGE_THRESHOLD {
            Magnitude::Finite(v)
        } else {
            Magnitude::Huge
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Magnitude::Finite(v) => Some(v),
            Magnitude::Huge => None,
        }
    }

    fn scale(self, k: f64) -> Self {
        match self {
            Magnitude::Finite(v) => Magnitude::of(v * k),
            Magnitude::Huge => Magnitude::Huge,
        }
    }

    fn max(self, other: Self) -> Self {
        match (self, other) {
            (Magnitude::Finite(a), Magnitude::Finite(b)) => Magnitude::Finite(a.max(b)),
            _ => Magnitude::Huge,
        }
    }

    /// Whether this value is at most `n`.
    pub fn is_at_most(self, n: usize) -> bool {
        match self {
            Magnitude::Finite(v) => v <= n as f64,
            Magnitude::Huge => false,
        }
    }
}

impl Serialize for Magnitude {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Magnitude::Finite(v) => s.serialize_f64(*v),
            Magnitude::Huge => s.serialize_str("huge"),
        }
    }
}

/// The six degree thresholds behind the density argument.
///
/// `c1` is `(2/eps * (t-1)^(1/t))^t`, the bound the complement-counting
/// argument actually delivers; `c1_undoubled` is the same expression
/// without the factor 2, kept for reference only.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantLadder {
    pub t: usize,
    pub epsilon: f64,
    pub c1: Magnitude,
    pub c1_undoubled: Magnitude,
    pub c2: Magnitude,
    pub c3: Magnitude,
    pub c4: Magnitude,
    pub c5: Magnitude,
    pub c6: Magnitude,
}

fn c1(t: usize, eps: f64) -> Magnitude {
    let base = 2.0 / eps * ((t as f64 - 1.0).powf(1.0 / t as f64));
    Magnitude::of(base.powi(t as i32))
}

fn c1_undoubled(t: usize, eps: f64) -> Magnitude {
    let base = 1.0 / eps * ((t as f64 - 1.0).powf(1.0 / t as f64));
    Magnitude::of(base.powi(t as i32))
}

fn c2(t: usize, eps: f64) -> Magnitude {
    Magnitude::of((t as f64 + 1.0) / eps).max(c1(t + 1, eps))
}

fn c3(t: usize, eps: f64) -> Magnitude {
    c2(t, eps / 4.0).scale(4.0)
}

fn c4(t: usize, eps: f64) -> Magnitude {
    c3(t, eps / 4.0).scale(4.0).max(c2(t, eps / 4.0).scale(4.0))
}

fn c5(t: usize) -> Magnitude {
    c3(t, 0.25).scale(4.0).max(Magnitude::Finite(10.0))
}

pub fn constants(t: usize, epsilon: f64) -> ConstantLadder {
    let (c2v, c3v, c4v, c5v) = (c2(t, epsilon), c3(t, epsilon), c4(t, epsilon), c5(t));
    ConstantLadder {
        t,
        epsilon,
        c1: c1(t, epsilon),
        c1_undoubled: c1_undoubled(t, epsilon),
        c2: c2v,
        c3: c3v,
        c4: c4v,
        c5: c5v,
        c6: c2v.max(c3v).max(c4v).max(c5v),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub edge_count: usize,
    pub density_ratio: f64,
    pub diameter: Diameter,
    /// epsilon -> |U_X(eps)| + |U_Y(eps)|
    pub u_sizes: BTreeMap<String, usize>,
    /// epsilon -> max over sampled (a in X, b in Y) of |S_{N(a)}^{N(b)}(eps)|
    pub s_max: BTreeMap<String, usize>,
    pub sampled_pairs: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOptions {
    pub epsilons: Vec<f64>,
    /// `None` means `min(nx*ny, 10000)`; at or above `nx*ny` every pair is used.
    pub pairs: Option<usize>,
    pub seed: u64,
}

impl Default for DensityOptions {
    fn default() -> Self {
        DensityOptions {
            epsilons: vec![0.01],
            pairs: None,
            seed: 0,
        }
    }
}

pub const DEFAULT_PAIR_CAP: usize = 10_000;

pub fn epsilon_key(eps: f64) -> String {
    format!("{eps}")
}

pub fn density_report(g: &BipartiteGraph, opts: &DensityOptions) -> DensityReport {
    let total_pairs = g.nx() * g.ny();
    let want = opts.pairs.unwrap_or(total_pairs.min(DEFAULT_PAIR_CAP));
    let pairs: Vec<(usize, usize)> = if want >= total_pairs {
        (0..g.nx()).flat_map(|a| (0..g.ny()).map(move |b| (a, b))).collect()
    } else {
        let mut rng = SplitMix64::new(opts.seed);
        (0..want).map(|_| (rng.below(g.nx()), rng.below(g.ny()))).collect()
    };

    // Row bitsets over X for each Y-vertex, to count |N(v) ∩ N(b)| quickly.
    let words = g.nx().div_ceil(64).max(1);
    let rows: Vec<Vec<u64>> = (0..g.ny())
        .map(|y| {
            let mut row = vec![0u64; words];
            for &x in g.y_neighbors(y) {
                row[x / 64] |= 1 << (x % 64);
            }
            row
        })
        .collect();

    let s_max_per_eps: Vec<usize> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let target = g.y_neighbors(b);
            if target.is_empty() {
                return vec![0; opts.epsilons.len()];
            }
            let mut mask = vec![0u64; words];
            for &x in target {
                mask[x / 64] |= 1 << (x % 64);
            }
            let overlaps: Vec<usize> = g
                .x_neighbors(a)
                .iter()
                .map(|&v| {
                    rows[v]
                        .iter()
                        .zip(&mask)
                        .map(|(r, m)| (r & m).count_ones() as usize)
                        .sum()
                })
                .collect();
            opts.epsilons
                .iter()
                .map(|&eps| {
                    let threshold = (1.0 - eps) * target.len() as f64;
                    overlaps.iter().filter(|&&o| within(o, threshold)).count()
                })
                .collect::<Vec<usize>>()
        })
        .reduce(
            || vec![0; opts.epsilons.len()],
            |a, b| a.iter().zip(&b).map(|(p, q)| *p.max(q)).collect(),
        );

    let u_size = |eps: f64| -> usize {
        [Side::X, Side::Y]
            .into_iter()
            .map(|side| u_set(g, side, eps).map_or(0, |s| s.len()))
            .sum()
    };

    DensityReport {
        edge_count: g.edge_count(),
        density_ratio: if total_pairs == 0 {
            0.0
        } else {
            g.edge_count() as f64 / total_pairs as f64
        },
        diameter: diameter(g),
        u_sizes: opts.epsilons.iter().map(|&e| (epsilon_key(e), u_size(e))).collect(),
        s_max: opts
            .epsilons
            .iter()
            .zip(s_max_per_eps)
            .map(|(&e, m)| (epsilon_key(e), m))
            .collect(),
        sampled_pairs: pairs.len(),
        seed: opts.seed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{complete_minus_permutation, cycle};

    fn xs(ids: &[usize]) -> Vec<VertexRef> {
        ids.iter().map(|&i| VertexRef::x(i)).collect()
    }

    fn ys(ids: &[usize]) -> Vec<VertexRef> {
        ids.iter().map(|&i| VertexRef::y(i)).collect()
    }

    #[test]
    fn s_set_complete_is_empty() {
        let g = BipartiteGraph::complete(3, 3);
        let s = s_set(&g, &xs(&[0, 1, 2]), &ys(&[0, 1, 2]), 0.5).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn s_set_hand_count() {
        // d_Y(x0)=4, d_Y(x1)=2, d_Y(x2)=1; threshold (1-0.25)*4 = 3
        let g = BipartiteGraph::new(3, 4, [(0, 0), (0, 1), (0, 2), (0, 3), (1, 0), (1, 1), (2, 3)]).unwrap();
        let s = s_set(&g, &xs(&[0, 1, 2]), &ys(&[0, 1, 2, 3]), 0.25).unwrap();
        assert_eq!(s.members, xs(&[1, 2]));
    }

    #[test]
    fn s_set_tiny_threshold_keeps_isolated_only() {
        let g = BipartiteGraph::new(3, 4, [(0, 0), (1, 3)]).unwrap();
        let s = s_set(&g, &xs(&[0, 1, 2]), &ys(&[0, 1, 2, 3]), 0.999).unwrap();
        assert_eq!(s.members, xs(&[2]));
    }

    #[test]
    fn s_set_errors() {
        let g = BipartiteGraph::complete(2, 2);
        assert_eq!(s_set(&g, &xs(&[0]), &[], 0.5), Err(StructureError::EmptyTarget));
        assert_eq!(s_set(&g, &xs(&[0]), &xs(&[1]), 0.5), Err(StructureError::SameSide));
        assert_eq!(
            s_set(&g, &xs(&[0]), &[VertexRef::y(0), VertexRef::x(1)], 0.5),
            Err(StructureError::MixedTarget)
        );
        assert_eq!(s_set(&g, &xs(&[0]), &ys(&[0]), 1.0), Err(StructureError::BadEpsilon(1.0)));
    }

    #[test]
    fn u_set_hand_count() {
        // X-degrees (5, 5, 4, 2); threshold 0.7 * 5 = 3.5
        let mut edges = Vec::new();
        for (x, d) in [5usize, 5, 4, 2].into_iter().enumerate() {
            edges.extend((0..d).map(|y| (x, y)));
        }
        let g = BipartiteGraph::new(4, 5, edges).unwrap();
        assert_eq!(u_set(&g, Side::X, 0.3).unwrap().members, xs(&[3]));
    }

    #[test]
    fn u_set_regular_and_max_vertex() {
        let g = cycle(5);
        for eps in [0.01, 0.3, 0.9] {
            assert!(u_set(&g, Side::X, eps).unwrap().is_empty());
        }
        let star = BipartiteGraph::new(3, 3, [(0, 0), (0, 1), (0, 2), (1, 0)]).unwrap();
        assert!(!u_set(&star, Side::X, 0.99).unwrap().contains(VertexRef::x(0)));
        let empty = BipartiteGraph::new(2, 2, []).unwrap();
        assert_eq!(u_set(&empty, Side::X, 0.5), Err(StructureError::EmptySide(Side::X)));
    }

    #[test]
    fn diameters() {
        for n in 2..6 {
            assert_eq!(diameter(&BipartiteGraph::complete(n, n)), Diameter::Finite(2));
        }
        assert_eq!(diameter(&cycle(3)), Diameter::Finite(3));
        let k22 = BipartiteGraph::complete(2, 2);
        assert_eq!(diameter(&k22.disjoint_union(&k22)), Diameter::Infinite);
    }

    #[test]
    fn kst_values() {
        assert!((kst_bound(2, 2, 4, 4) - 10.0).abs() < 1e-9);
        for (a, b) in [(1, 1), (3, 7), (0, 2)] {
            assert!(kst_bound(1, 1, a, b).abs() < 1e-12);
        }
        assert!((kst_bound(2, 3, 8, 8) - 40.0).abs() < 1e-9);
    }

    #[test]
    fn ladder_values() {
        let l = constants(2, 0.5);
        assert!((l.c1.value().unwrap() - 16.0).abs() < 1e-9);
        assert!((l.c1_undoubled.value().unwrap() - 4.0).abs() < 1e-9);
        assert!((l.c2.value().unwrap() - 128.0).abs() < 1e-9);

        let l1 = constants(1, 0.25);
        assert_eq!(l1.c1, Magnitude::Finite(0.0));
        // c2(1, eps) = max(2/eps, c1(2, eps)) = max(8, (2*4*1)^2 = 64)
        assert!((l1.c2.value().unwrap() - 64.0).abs() < 1e-9);
    }

    #[test]
    fn ladder_saturates() {
        let l = constants(80, 0.001);
        assert_eq!(l.c6, Magnitude::Huge);
        assert!(!l.c6.is_at_most(usize::MAX));
    }

    #[test]
    fn density_examples() {
        let opts = DensityOptions {
            epsilons: vec![0.01, 0.25],
            ..Default::default()
        };
        let r = density_report(&BipartiteGraph::complete(5, 5), &opts);
        assert_eq!(r.density_ratio, 1.0);
        assert_eq!(r.diameter, Diameter::Finite(2));
        assert!(r.u_sizes.values().all(|&v| v == 0));
        assert!(r.s_max.values().all(|&v| v == 0));
        assert_eq!(r.sampled_pairs, 25);

        let c6 = density_report(&cycle(3), &opts);
        assert!((c6.density_ratio - 6.0 / 9.0).abs() < 1e-12);
        assert_eq!(c6.diameter, Diameter::Finite(3));

        let km = density_report(&complete_minus_permutation(&[0, 1, 2, 3]), &opts);
        assert_eq!(km.density_ratio, 0.75);
    }

    #[test]
    fn density_sampling_is_seeded() {
        let g = complete_minus_permutation(&[3, 0, 1, 2]);
        let opts = DensityOptions {
            epsilons: vec![0.3],
            pairs: Some(5),
            seed: 42,
        };
        let a = density_report(&g, &opts);
        assert_eq!(a, density_report(&g, &opts));
        assert_eq!(a.sampled_pairs, 5);
        let json = serde_json::to_string(&a).unwrap();
        assert!(json.starts_with("{\"edge_count\":12,\"density_ratio\":0.75,\"diameter\":"));
        assert!(json.contains("\"u_sizes\":{\"0.3\":0}"));
    }
}
