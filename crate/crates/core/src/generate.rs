//! Seeded corpus generators.
//!
//! Every family is a pure function of its [`GenSpec`]; randomness comes from
//! [`SplitMix64`] seeded with the spec's `seed`. A spec also has a compact
//! text form, `family:key=value,...`, used on the command line and in
//! experiment rows.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::BipartiteGraph;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad generator spec: {0}")]
pub struct BadSpec(pub String);

const MATCHING_ATTEMPTS: usize = 100_000;
const COMPLEMENT_ATTEMPTS: usize = 1_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedGraph {
    /// Path on four vertices, X1–Y0–X0–Y1 (the biclaw `S_{1,1}`).
    P4,
    C6,
    C8,
    K33,
    K44,
    /// `K_{4,4}` minus the matching `{Xi–Yi}`.
    K44MinusMatching,
    S33,
}

impl NamedGraph {
    pub const ALL: [NamedGraph; 7] = [
        NamedGraph::P4,
        NamedGraph::C6,
        NamedGraph::C8,
        NamedGraph::K33,
        NamedGraph::K44,
        NamedGraph::K44MinusMatching,
        NamedGraph::S33,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedGraph::P4 => "p4",
            NamedGraph::C6 => "c6",
            NamedGraph::C8 => "c8",
            NamedGraph::K33 => "k33",
            NamedGraph::K44 => "k44",
            NamedGraph::K44MinusMatching => "k44_minus_matching",
            NamedGraph::S33 => "s33",
        }
    }

    pub fn build(self) -> BipartiteGraph {
        match self {
            NamedGraph::P4 => biclaw(1, 1),
            NamedGraph::C6 => cycle(3),
            NamedGraph::C8 => cycle(4),
            NamedGraph::K33 => BipartiteGraph::complete(3, 3),
            NamedGraph::K44 => BipartiteGraph::complete(4, 4),
            NamedGraph::K44MinusMatching => complete_minus_permutation(&[0, 1, 2, 3]),
            NamedGraph::S33 => biclaw(3, 3),
        }
    }
}

impl FromStr for NamedGraph {
    type Err = BadSpec;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NamedGraph::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| BadSpec(format!("unknown named graph {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GenSpec {
    Complete { nx: usize, ny: usize },
    /// `K_{n,n}` minus one seeded perfect matching.
    CompleteMinusMatching { n: usize, seed: u64 },
    /// `K_{n,n}` minus the union of `removal` edge-disjoint seeded perfect
    /// matchings, so every vertex loses exactly `removal` edges. Removals
    /// whose bipartite complement contains `K_{t,t}` are rejected, which
    /// makes the result induced `S_{t,t}`-free.
    CompleteMinusSparse { n: usize, removal: usize, t: usize, seed: u64 },
    RandomBipartite { nx: usize, ny: usize, p: f64, seed: u64 },
    /// The cycle `C_{2n}`: `Xi–Yi` and `Yi–X(i+1 mod n)`.
    Cycle { n: usize },
    /// The biclaw `S_{a,b}` itself; X0–Y0 is the center edge.
    Biclaw { a: usize, b: usize },
    /// `K_{n,n}` where `k` seeded vertices (either side) keep only `degree`
    /// neighbors. Planted vertices on the same side get pairwise disjoint
    /// neighborhoods among the unplanted opposite vertices.
    Planted { n: usize, k: usize, degree: usize, seed: u64 },
    Named(NamedGraph),
}

impl GenSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GenSpec::Complete { .. } => "complete",
            GenSpec::CompleteMinusMatching { .. } => "complete_minus_matching",
            GenSpec::CompleteMinusSparse { .. } => "complete_minus_sparse",
            GenSpec::RandomBipartite { .. } => "random_bipartite",
            GenSpec::Cycle { .. } => "cycle",
            GenSpec::Biclaw { .. } => "biclaw",
            GenSpec::Planted { .. } => "planted",
            GenSpec::Named(_) => "named",
        }
    }

    pub fn generate(&self) -> Result<BipartiteGraph, BadSpec> {
        match *self {
            GenSpec::Complete { nx, ny } => Ok(BipartiteGraph::complete(nx, ny)),
            GenSpec::CompleteMinusMatching { n, seed } => {
                if n == 0 {
                    return Err(BadSpec("complete_minus_matching needs n >= 1".into()));
                }
                let perm = SplitMix64::new(seed).permutation(n);
                Ok(complete_minus_permutation(&perm))
            }
            GenSpec::CompleteMinusSparse { n, removal, t, seed } => complete_minus_sparse(n, removal, t, seed),
            GenSpec::RandomBipartite { nx, ny, p, seed } => {
                if !(0.0..=1.0).contains(&p) {
                    return Err(BadSpec(format!("edge probability {p} outside [0, 1]")));
                }
                let mut rng = SplitMix64::new(seed);
                let mut edges = Vec::new();
                for x in 0..nx {
                    for y in 0..ny {
                        if rng.unit() < p {
                            edges.push((x, y));
                        }
                    }
                }
                Ok(BipartiteGraph::new(nx, ny, edges).expect("indices in range"))
            }
            GenSpec::Cycle { n } => {
                if n < 2 {
                    return Err(BadSpec("cycle needs n >= 2".into()));
                }
                Ok(cycle(n))
            }
            GenSpec::Biclaw { a, b } => Ok(biclaw(a, b)),
            GenSpec::Planted { n, k, degree, seed } => planted(n, k, degree, seed),
            GenSpec::Named(g) => Ok(g.build()),
        }
    }
}

impl fmt::Display for GenSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.family())?;
        match self {
            GenSpec::Complete { nx, ny } => write!(f, "nx={nx},ny={ny}"),
            GenSpec::CompleteMinusMatching { n, seed } => write!(f, "n={n},seed={seed}"),
            GenSpec::CompleteMinusSparse { n, removal, t, seed } => {
                write!(f, "n={n},removal={removal},t={t},seed={seed}")
            }
            GenSpec::RandomBipartite { nx, ny, p, seed } => write!(f, "nx={nx},ny={ny},p={p},seed={seed}"),
            GenSpec::Cycle { n } => write!(f, "n={n}"),
            GenSpec::Biclaw { a, b } => write!(f, "a={a},b={b}"),
            GenSpec::Planted { n, k, degree, seed } => write!(f, "n={n},k={k},degree={degree},seed={seed}"),
            GenSpec::Named(g) => write!(f, "name={}", g.name()),
        }
    }
}

struct Params<'a> {
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(body: &'a str) -> Result<Self, BadSpec> {
        let pairs = body
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|kv| {
                kv.split_once('=')
                    .map(|(k, v)| (k.trim(), v.trim()))
                    .ok_or_else(|| BadSpec(format!("expected key=value, got {kv:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Params { pairs })
    }

    fn raw(&self, key: &str) -> Option<&'a str> {
        self.pairs.iter().find(|(k, _)| *k == key).map(|&(_, v)| v)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, BadSpec> {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|_| BadSpec(format!("bad value {v:?} for {key}"))))
            .transpose()
    }

    fn req<T: FromStr>(&self, key: &str) -> Result<T, BadSpec> {
        self.get(key)?.ok_or_else(|| BadSpec(format!("missing parameter {key}")))
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<(), BadSpec> {
        match self.pairs.iter().find(|(k, _)| !allowed.contains(k)) {
            Some((k, _)) => Err(BadSpec(format!("unknown parameter {k}"))),
            None => Ok(()),
        }
    }
}

impl FromStr for GenSpec {
    type Err = BadSpec;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (family, body) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let p = Params::parse(body)?;
        let seed = || p.get::<u64>("seed").map(|s| s.unwrap_or(0));
        let spec = match family {
            "complete" => {
                p.check_keys(&["n", "nx", "ny"])?;
                let n = p.get::<usize>("n")?;
                let nx = p.get("nx")?.or(n).ok_or_else(|| BadSpec("complete needs n or nx,ny".into()))?;
                let ny = p.get("ny")?.or(n).unwrap_or(nx);
                GenSpec::Complete { nx, ny }
            }
            "complete_minus_matching" => {
                p.check_keys(&["n", "seed"])?;
                GenSpec::CompleteMinusMatching {
                    n: p.req("n")?,
                    seed: seed()?,
                }
            }
            "complete_minus_sparse" => {
                p.check_keys(&["n", "removal", "t", "seed"])?;
                let removal = p.req("removal")?;
                GenSpec::CompleteMinusSparse {
                    n: p.req("n")?,
                    removal,
                    t: p.get("t")?.unwrap_or(removal.max(1)),
                    seed: seed()?,
                }
            }
            "random_bipartite" => {
                p.check_keys(&["n", "nx", "ny", "p", "seed"])?;
                let n = p.get::<usize>("n")?;
                let nx = p.get("nx")?.or(n).ok_or_else(|| BadSpec("random_bipartite needs n or nx,ny".into()))?;
                GenSpec::RandomBipartite {
                    nx,
                    ny: p.get("ny")?.or(n).unwrap_or(nx),
                    p: p.req("p")?,
                    seed: seed()?,
                }
            }
            "cycle" => {
                p.check_keys(&["n", "seed"])?;
                GenSpec::Cycle { n: p.req("n")? }
            }
            "biclaw" => {
                p.check_keys(&["a", "b"])?;
                GenSpec::Biclaw {
                    a: p.req("a")?,
                    b: p.req("b")?,
                }
            }
            "planted" => {
                p.check_keys(&["n", "k", "degree", "seed"])?;
                GenSpec::Planted {
                    n: p.req("n")?,
                    k: p.req("k")?,
                    degree: p.get("degree")?.unwrap_or(3),
                    seed: seed()?,
                }
            }
            "named" => {
                p.check_keys(&["name"])?;
                GenSpec::Named(p.req::<String>("name")?.parse()?)
            }
            other => return Err(BadSpec(format!("unknown family {other:?}"))),
        };
        Ok(spec)
    }
}

pub fn generate(spec: &GenSpec) -> Result<BipartiteGraph, BadSpec> {
    spec.generate()
}

pub fn cycle(n: usize) -> BipartiteGraph {
    let edges = (0..n).flat_map(|i| [(i, i), ((i + 1) % n, i)]);
    BipartiteGraph::new(n, n, edges).expect("indices in range")
}

pub fn biclaw(a: usize, b: usize) -> BipartiteGraph {
    let edges = std::iter::once((0, 0))
        .chain((1..=a).map(|i| (i, 0)))
        .chain((1..=b).map(|j| (0, j)));
    BipartiteGraph::new(a + 1, b + 1, edges).expect("indices in range")
}

/// `K_{n,n}` minus `{Xi–Y(perm[i])}`.
pub fn complete_minus_permutation(perm: &[usize]) -> BipartiteGraph {
    let n = perm.len();
    let edges = (0..n).flat_map(|x| (0..n).filter(move |&y| y != perm[x]).map(move |y| (x, y)));
    BipartiteGraph::new(n, n, edges).expect("indices in range")
}

fn complete_minus_sparse(n: usize, removal: usize, t: usize, seed: u64) -> Result<BipartiteGraph, BadSpec> {
    if removal > n {
        return Err(BadSpec(format!("cannot remove {removal} matchings from K_{{{n},{n}}}")));
    }
    if t == 0 {
        return Err(BadSpec("complete_minus_sparse needs t >= 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    'outer: for _ in 0..COMPLEMENT_ATTEMPTS {
        // comp[x] = Y-vertices removed from x
        let mut comp: Vec<Vec<usize>> = vec![Vec::with_capacity(removal); n];
        for _ in 0..removal {
            let mut placed = false;
            for _ in 0..MATCHING_ATTEMPTS {
                let perm = rng.permutation(n);
                if (0..n).all(|x| !comp[x].contains(&perm[x])) {
                    for x in 0..n {
                        comp[x].push(perm[x]);
                    }
                    placed = true;
                    break;
                }
            }
            if !placed {
                continue 'outer;
            }
        }
        if complement_has_biclique(n, &comp, t) {
            continue;
        }
        let edges = (0..n).flat_map(|x| {
            let gone = &comp[x];
            (0..n).filter(move |y| !gone.contains(y)).map(move |y| (x, y))
        });
        return Ok(BipartiteGraph::new(n, n, edges).expect("indices in range"));
    }
    Err(BadSpec(format!(
        "complete_minus_sparse n={n} removal={removal} t={t}: no admissible removal found"
    )))
}

/// Whether the removed-edge graph `comp` (X-vertex -> removed Y-vertices)
/// contains `K_{t,t}`.
fn complement_has_biclique(n: usize, comp: &[Vec<usize>], t: usize) -> bool {
    if comp.iter().all(|c| c.len() < t) {
        return false;
    }
    let mut comp_y: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (x, ys) in comp.iter().enumerate() {
        for &y in ys {
            comp_y[y].push(x);
        }
    }
    for ys in comp {
        let mut ys = ys.clone();
        ys.sort_unstable();
        for subset in combinations(&ys, t) {
            let mut common: Vec<usize> = comp_y[subset[0]].clone();
            for &y in &subset[1..] {
                common.retain(|x| comp_y[y].contains(x));
            }
            if common.len() >= t {
                return true;
            }
        }
    }
    false
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, k, 0, &mut Vec::with_capacity(k), &mut out);
    out
}

fn planted(n: usize, k: usize, degree: usize, seed: u64) -> Result<BipartiteGraph, BadSpec> {
    if k > n {
        return Err(BadSpec(format!("cannot plant {k} vertices with n={n}")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut kx = 0;
    for _ in 0..k {
        if rng.below(2) == 0 {
            kx += 1;
        }
    }
    let ky = k - kx;
    if kx.max(ky) > 0 && degree * kx.max(ky) > n - kx.min(ky) {
        return Err(BadSpec(format!(
            "planted n={n} k={k} degree={degree}: not enough room for disjoint neighborhoods"
        )));
    }
    let planted_x: Vec<usize> = rng.permutation(n)[..kx].to_vec();
    let planted_y: Vec<usize> = rng.permutation(n)[..ky].to_vec();
    let mut free_y: Vec<usize> = (0..n).filter(|y| !planted_y.contains(y)).collect();
    let mut free_x: Vec<usize> = (0..n).filter(|x| !planted_x.contains(x)).collect();
    rng.shuffle(&mut free_y);
    rng.shuffle(&mut free_x);

    let mut edges = Vec::new();
    for &x in &free_x {
        for &y in &free_y {
            edges.push((x, y));
        }
    }
    for (i, &x) in planted_x.iter().enumerate() {
        edges.extend(free_y[i * degree..(i + 1) * degree].iter().map(|&y| (x, y)));
    }
    for (i, &y) in planted_y.iter().enumerate() {
        edges.extend(free_x[i * degree..(i + 1) * degree].iter().map(|&x| (x, y)));
    }
    Ok(BipartiteGraph::new(n, n, edges).expect("indices in range"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Side, VertexRef};

    #[test]
    fn cycle_three_is_c6() {
        let expected = BipartiteGraph::new(3, 3, [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2)]).unwrap();
        assert_eq!(GenSpec::Cycle { n: 3 }.generate().unwrap(), expected);
        assert!(GenSpec::Cycle { n: 1 }.generate().is_err());
    }

    #[test]
    fn complete_minus_matching_degrees() {
        let g = GenSpec::CompleteMinusMatching { n: 4, seed: 7 }.generate().unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert!(g.vertices().all(|v| g.degree(v) == 3));
    }

    #[test]
    fn s33_shape() {
        let g = GenSpec::Biclaw { a: 3, b: 3 }.generate().unwrap();
        assert_eq!(g.degree(VertexRef::x(0)), 4);
        assert_eq!(g.degree(VertexRef::y(0)), 4);
        for i in 1..4 {
            assert_eq!(g.degree(VertexRef::x(i)), 1);
            assert_eq!(g.degree(VertexRef::y(i)), 1);
        }
    }

    #[test]
    fn sparse_removal_is_regular() {
        for n in [6, 9, 20] {
            for removal in 0..=3 {
                for seed in 0..5 {
                    let g = GenSpec::CompleteMinusSparse { n, removal, t: 3, seed }.generate().unwrap();
                    assert!(g.vertices().all(|v| g.degree(v) == n - removal), "n={n} r={removal}");
                }
            }
        }
    }

    #[test]
    fn sparse_removal_rejects_impossible() {
        // K_{3,3} minus three disjoint matchings is empty; its complement is K_{3,3}
        assert!(GenSpec::CompleteMinusSparse { n: 3, removal: 3, t: 3, seed: 0 }.generate().is_err());
        assert!(GenSpec::CompleteMinusSparse { n: 3, removal: 4, t: 3, seed: 0 }.generate().is_err());
    }

    #[test]
    fn random_is_deterministic() {
        let spec = GenSpec::RandomBipartite { nx: 7, ny: 5, p: 0.4, seed: 11 };
        assert_eq!(spec.generate().unwrap(), spec.generate().unwrap());
        let other = GenSpec::RandomBipartite { nx: 7, ny: 5, p: 0.4, seed: 12 };
        assert_ne!(spec.generate().unwrap(), other.generate().unwrap());
    }

    #[test]
    fn planted_degrees() {
        for seed in 0..20 {
            let g = GenSpec::Planted { n: 20, k: 5, degree: 3, seed }.generate().unwrap();
            let low: Vec<VertexRef> = g.vertices().filter(|&v| g.degree(v) == 3).collect();
            assert_eq!(low.len(), 5);
            for side in [Side::X, Side::Y] {
                let mut seen = Vec::new();
                for v in low.iter().filter(|v| v.side == side) {
                    for &w in g.neighbors(*v) {
                        assert!(!seen.contains(&w), "shared neighbor");
                        seen.push(w);
                    }
                }
            }
        }
    }

    #[test]
    fn spec_text_round_trip() {
        let specs = [
            GenSpec::Complete { nx: 3, ny: 4 },
            GenSpec::CompleteMinusMatching { n: 4, seed: 7 },
            GenSpec::CompleteMinusSparse { n: 20, removal: 3, t: 3, seed: 1 },
            GenSpec::RandomBipartite { nx: 5, ny: 6, p: 0.35, seed: 2 },
            GenSpec::Cycle { n: 3 },
            GenSpec::Biclaw { a: 2, b: 3 },
            GenSpec::Planted { n: 20, k: 2, degree: 3, seed: 9 },
            GenSpec::Named(NamedGraph::K44MinusMatching),
        ];
        for s in specs {
            assert_eq!(s.to_string().parse::<GenSpec>().unwrap(), s);
        }
        assert_eq!("complete:n=3".parse::<GenSpec>().unwrap(), GenSpec::Complete { nx: 3, ny: 3 });
        assert!("cycle:m=3".parse::<GenSpec>().is_err());
        assert!("moebius:n=3".parse::<GenSpec>().is_err());
        assert!("named:name=petersen".parse::<GenSpec>().is_err());
    }

    #[test]
    fn named_graphs() {
        assert_eq!(NamedGraph::P4.build().edge_count(), 3);
        assert_eq!(NamedGraph::K44MinusMatching.build().edge_count(), 12);
        assert_eq!(NamedGraph::C8.build().edge_count(), 8);
    }
}
