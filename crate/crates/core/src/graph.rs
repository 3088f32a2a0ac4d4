//! Immutable bipartite graphs with independent index spaces per side.
//!
//! A vertex is addressed by a [`VertexRef`]: a side tag plus a 0-based index
//! into that side. Edges always join an X-vertex to a Y-vertex, so same-side
//! edges are unrepresentable. Adjacency lists are kept sorted ascending.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::X => f.write_str("X"),
            Side::Y => f.write_str("Y"),
        }
    }
}

/// A vertex, written `X<i>` or `Y<j>` in text form.
///
/// Ordering is side first (all of X before Y), then index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexRef {
    pub side: Side,
    pub index: usize,
}

impl VertexRef {
    pub const fn x(index: usize) -> Self {
        VertexRef { side: Side::X, index }
    }

    pub const fn y(index: usize) -> Self {
        VertexRef { side: Side::Y, index }
    }
}

impl fmt::Display for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.side, self.index)
    }
}

impl Serialize for VertexRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl FromStr for VertexRef {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::Syntax {
            line: 0,
            message: format!("bad vertex token {s:?}"),
        };
        let side = match s.as_bytes().first() {
            Some(b'X') | Some(b'x') => Side::X,
            Some(b'Y') | Some(b'y') => Side::Y,
            _ => return Err(bad()),
        };
        let index = s[1..].parse::<usize>().map_err(|_| bad())?;
        Ok(VertexRef { side, index })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("edge endpoint {side}{index} out of range (side has {bound} vertices)")]
    IndexOutOfRange {
        side: Side,
        index: usize,
        bound: usize,
    },
    #[error("syntax error on line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    x_adj: Vec<Vec<usize>>,
    y_adj: Vec<Vec<usize>>,
    edge_count: usize,
}

impl BipartiteGraph {
    /// Builds a graph from `(x, y)` pairs. Duplicates are dropped.
    pub fn new<I>(nx: usize, ny: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut x_adj = vec![Vec::new(); nx];
        for (x, y) in edges {
            if x >= nx {
                return Err(GraphError::IndexOutOfRange {
                    side: Side::X,
                    index: x,
                    bound: nx,
                });
            }
            if y >= ny {
                return Err(GraphError::IndexOutOfRange {
                    side: Side::Y,
                    index: y,
                    bound: ny,
                });
            }
            x_adj[x].push(y);
        }
        let mut y_adj = vec![Vec::new(); ny];
        let mut edge_count = 0;
        for (x, list) in x_adj.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
            for &y in list.iter() {
                y_adj[y].push(x);
            }
        }
        // y_adj is filled in ascending x order, so already sorted.
        Ok(BipartiteGraph {
            x_adj,
            y_adj,
            edge_count,
        })
    }

    pub fn complete(nx: usize, ny: usize) -> Self {
        let edges = (0..nx).flat_map(|x| (0..ny).map(move |y| (x, y)));
        Self::new(nx, ny, edges).expect("indices in range")
    }

    pub fn nx(&self) -> usize {
        self.x_adj.len()
    }

    pub fn ny(&self) -> usize {
        self.y_adj.len()
    }

    pub fn side_len(&self, side: Side) -> usize {
        match side {
            Side::X => self.nx(),
            Side::Y => self.ny(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.nx() + self.ny()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_balanced(&self) -> bool {
        self.nx() == self.ny()
    }

    pub fn contains(&self, v: VertexRef) -> bool {
        v.index < self.side_len(v.side)
    }

    /// Sorted opposite-side neighbor indices of `v`.
    ///
    /// Panics if `v` is out of range.
    pub fn neighbors(&self, v: VertexRef) -> &[usize] {
        match v.side {
            Side::X => &self.x_adj[v.index],
            Side::Y => &self.y_adj[v.index],
        }
    }

    pub fn x_neighbors(&self, x: usize) -> &[usize] {
        &self.x_adj[x]
    }

    pub fn y_neighbors(&self, y: usize) -> &[usize] {
        &self.y_adj[y]
    }

    pub fn neighbor_refs(&self, v: VertexRef) -> impl Iterator<Item = VertexRef> + '_ {
        let side = v.side.opposite();
        self.neighbors(v)
            .iter()
            .map(move |&index| VertexRef { side, index })
    }

    pub fn degree(&self, v: VertexRef) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        // search the shorter list
        match (self.x_adj.get(x), self.y_adj.get(y)) {
            (Some(xs), Some(ys)) if xs.len() <= ys.len() => xs.binary_search(&y).is_ok(),
            (Some(_), Some(ys)) => ys.binary_search(&x).is_ok(),
            _ => false,
        }
    }

    /// Adjacency between two vertex refs; same-side pairs are never adjacent.
    pub fn adjacent(&self, u: VertexRef, v: VertexRef) -> bool {
        match (u.side, v.side) {
            (Side::X, Side::Y) => self.has_edge(u.index, v.index),
            (Side::Y, Side::X) => self.has_edge(v.index, u.index),
            _ => false,
        }
    }

    /// All edges in ascending `(x, y)` order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.x_adj
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y)))
    }

    /// X-vertices first, then Y-vertices, each ascending.
    pub fn vertices(&self) -> impl Iterator<Item = VertexRef> {
        (0..self.nx())
            .map(VertexRef::x)
            .chain((0..self.ny()).map(VertexRef::y))
    }

    pub fn side_vertices(&self, side: Side) -> impl Iterator<Item = VertexRef> {
        (0..self.side_len(side)).map(move |index| VertexRef { side, index })
    }

    pub fn max_degree(&self, side: Side) -> usize {
        let lists = match side {
            Side::X => &self.x_adj,
            Side::Y => &self.y_adj,
        };
        lists.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.x_adj
            .iter()
            .chain(self.y_adj.iter())
            .map(Vec::len)
            .min()
            .unwrap_or(0)
    }

    /// Dense index: X-vertices occupy `0..nx`, Y-vertices `nx..nx+ny`.
    pub fn flat_index(&self, v: VertexRef) -> usize {
        match v.side {
            Side::X => v.index,
            Side::Y => self.nx() + v.index,
        }
    }

    pub fn from_flat_index(&self, i: usize) -> VertexRef {
        if i < self.nx() {
            VertexRef::x(i)
        } else {
            VertexRef::y(i - self.nx())
        }
    }

    /// Breadth-first distances from `source` over the flat index space;
    /// `usize::MAX` marks unreachable vertices.
    pub fn bfs_distances(&self, source: VertexRef) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[self.flat_index(source)] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[self.flat_index(v)];
            for w in self.neighbor_refs(v) {
                let slot = &mut dist[self.flat_index(w)];
                if *slot == usize::MAX {
                    *slot = d + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// The empty graph counts as disconnected.
    pub fn is_connected(&self) -> bool {
        match self.vertices().next() {
            None => false,
            Some(s) => self.bfs_distances(s).iter().all(|&d| d != usize::MAX),
        }
    }

    /// The graph with `removed` deleted, plus maps from new indices to old
    /// ones (`x_map[new_x] = old_x`, likewise for Y).
    pub fn without_vertices(&self, removed: &[VertexRef]) -> (BipartiteGraph, Vec<usize>, Vec<usize>) {
        let mut gone_x = vec![false; self.nx()];
        let mut gone_y = vec![false; self.ny()];
        for v in removed {
            match v.side {
                Side::X => gone_x[v.index] = true,
                Side::Y => gone_y[v.index] = true,
            }
        }
        let x_map: Vec<usize> = (0..self.nx()).filter(|&x| !gone_x[x]).collect();
        let y_map: Vec<usize> = (0..self.ny()).filter(|&y| !gone_y[y]).collect();
        let mut y_new = vec![usize::MAX; self.ny()];
        for (new, &old) in y_map.iter().enumerate() {
            y_new[old] = new;
        }
        let edges = x_map.iter().enumerate().flat_map(|(nx_i, &old_x)| {
            let y_new = &y_new;
            self.x_adj[old_x]
                .iter()
                .filter(move |&&y| y_new[y] != usize::MAX)
                .map(move |&y| (nx_i, y_new[y]))
        });
        let sub = BipartiteGraph::new(x_map.len(), y_map.len(), edges).expect("remapped indices in range");
        (sub, x_map, y_map)
    }

    /// Disjoint union: `other`'s vertices are appended after `self`'s on each side.
    pub fn disjoint_union(&self, other: &BipartiteGraph) -> BipartiteGraph {
        let (ox, oy) = (self.nx(), self.ny());
        let edges = self
            .edges()
            .chain(other.edges().map(|(x, y)| (x + ox, y + oy)));
        BipartiteGraph::new(ox + other.nx(), oy + other.ny(), edges).expect("indices in range")
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let histogram = |lists: &[Vec<usize>]| {
            let mut h = vec![0usize; lists.iter().map(Vec::len).max().map_or(0, |d| d + 1)];
            for l in lists {
                h[l.len()] += 1;
            }
            h
        };
        DegreeProfile {
            min_degree: self.min_degree(),
            max_degree_x: self.max_degree(Side::X),
            max_degree_y: self.max_degree(Side::Y),
            degree_histogram_x: histogram(&self.x_adj),
            degree_histogram_y: histogram(&self.y_adj),
            edge_count: self.edge_count,
            is_balanced: self.is_balanced(),
            is_connected: self.is_connected(),
        }
    }

    /// Text form: `bip <nx> <ny> <m>` followed by `e <x> <y>` lines sorted by `(x, y)`.
    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::with_capacity(16 + self.edge_count * 10);
        writeln!(out, "bip {} {} {}", self.nx(), self.ny(), self.edge_count).unwrap();
        for (x, y) in self.edges() {
            writeln!(out, "e {x} {y}").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let syntax = |line: usize, message: String| GraphError::Syntax { line, message };
        let mut header: Option<(usize, usize, usize)> = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim_end();
            if line.trim_start().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let nums = |fields: &[&str]| -> Result<Vec<usize>, GraphError> {
                fields
                    .iter()
                    .map(|f| {
                        f.parse::<usize>()
                            .map_err(|_| syntax(lineno, format!("expected a nonnegative integer, got {f:?}")))
                    })
                    .collect()
            };
            match (header, fields.first().copied()) {
                (None, Some("bip")) => {
                    if fields.len() != 4 {
                        return Err(syntax(lineno, "header must be `bip <nx> <ny> <m>`".into()));
                    }
                    let v = nums(&fields[1..])?;
                    header = Some((v[0], v[1], v[2]));
                    edges.reserve(v[2]);
                }
                (None, _) => return Err(syntax(lineno, "expected `bip` header".into())),
                (Some((_, _, m)), Some("e")) => {
                    if fields.len() != 3 {
                        return Err(syntax(lineno, "edge line must be `e <x> <y>`".into()));
                    }
                    if edges.len() == m {
                        return Err(syntax(lineno, format!("more than {m} edge lines")));
                    }
                    let v = nums(&fields[1..])?;
                    edges.push((v[0], v[1]));
                }
                (Some(_), _) => return Err(syntax(lineno, format!("unexpected line {line:?}"))),
            }
        }
        let (nx, ny, m) = header.ok_or_else(|| syntax(0, "missing `bip` header".into()))?;
        if edges.len() != m {
            return Err(syntax(0, format!("header promises {m} edges, found {}", edges.len())));
        }
        Self::new(nx, ny, edges)
    }
}

impl fmt::Display for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for BipartiteGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeProfile {
    pub min_degree: usize,
    pub max_degree_x: usize,
    pub max_degree_y: usize,
    /// `degree_histogram_x[d]` = number of X-vertices of degree `d`.
    pub degree_histogram_x: Vec<usize>,
    pub degree_histogram_y: Vec<usize>,
    pub edge_count: usize,
    pub is_balanced: bool,
    pub is_connected: bool,
}
