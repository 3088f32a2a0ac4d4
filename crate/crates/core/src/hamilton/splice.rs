use super::{CycleWitness, HamiltonError, PathWitness};
use crate::graph::{BipartiteGraph, Side};

/// Inserts `path` (from a Y-vertex `y'` to an X-vertex `x'`) into `cycle`.
///
/// Looks for the first cycle edge `u v`, with `u ∈ Y` and `v ∈ X`, such
/// that `u ~ x'` and `v ~ y'`, and replaces it by `v, y', ..., x', u`. The
/// path must be vertex-disjoint from the cycle.
pub fn splice(g: &BipartiteGraph, cycle: &CycleWitness, path: &PathWitness) -> Result<CycleWitness, HamiltonError> {
    let (Some(start), Some(end)) = (path.first(), path.last()) else {
        return Err(HamiltonError::InvalidInput("empty path".into()));
    };
    if start.side != Side::Y || end.side != Side::X {
        return Err(HamiltonError::InvalidInput(format!(
            "path must run from Y to X, got {start} to {end}"
        )));
    }
    if cycle.vertices.iter().any(|v| path.vertices.contains(v)) {
        return Err(HamiltonError::InvalidInput("path and cycle share a vertex".into()));
    }
    let c = &cycle.vertices;
    let len = c.len();
    for i in 0..len {
        let (a, b) = (c[i], c[(i + 1) % len]);
        let (u, v) = if a.side == Side::Y { (a, b) } else { (b, a) };
        if !(g.adjacent(u, end) && g.adjacent(v, start)) {
            continue;
        }
        let mut out = Vec::with_capacity(len + path.len());
        out.extend(&c[..=i]);
        if a.side == Side::Y {
            out.extend(path.vertices.iter().rev());
        } else {
            out.extend(&path.vertices);
        }
        out.extend(&c[i + 1..]);
        return Ok(CycleWitness::new(out));
    }
    let attachments = |w| c.iter().filter(|&&v| g.adjacent(v, w)).count();
    Err(HamiltonError::NoSpliceEdge {
        start_attachments: attachments(start),
        end_attachments: attachments(end),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamilton::verify_cycle;

    #[test]
    fn splices_into_k44() {
        let g = BipartiteGraph::complete(4, 4);
        let cycle: CycleWitness = "X0 Y0 X1 Y1 X2 Y2".parse().unwrap();
        let path: PathWitness = "Y3 X3".parse().unwrap();
        let out = splice(&g, &cycle, &path).unwrap();
        assert_eq!(out.to_string(), "X0 Y3 X3 Y0 X1 Y1 X2 Y2");
        assert!(verify_cycle(&g, &out).valid);
    }

    #[test]
    fn reversed_orientation_when_edge_starts_on_y() {
        // only the wrap-around edge Y2 X0 works: Y2 ~ X3 and X0 ~ Y3
        let edges = [
            (0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (0, 2),
            (3, 2), (0, 3), (3, 3),
        ];
        let g = BipartiteGraph::new(4, 4, edges).unwrap();
        let cycle: CycleWitness = "X0 Y0 X1 Y1 X2 Y2".parse().unwrap();
        let path: PathWitness = "Y3 X3".parse().unwrap();
        let out = splice(&g, &cycle, &path).unwrap();
        assert_eq!(out.to_string(), "X0 Y0 X1 Y1 X2 Y2 X3 Y3");
        assert!(verify_cycle(&g, &out).valid);
    }

    #[test]
    fn missing_attachments_are_reported() {
        let edges = [(0, 0), (1, 0), (1, 1), (0, 1), (2, 2)];
        let g = BipartiteGraph::new(3, 3, edges).unwrap();
        let cycle: CycleWitness = "X0 Y0 X1 Y1".parse().unwrap();
        let path: PathWitness = "Y2 X2".parse().unwrap();
        assert_eq!(
            splice(&g, &cycle, &path),
            Err(HamiltonError::NoSpliceEdge { start_attachments: 0, end_attachments: 0 })
        );
        assert!(splice(&g, &cycle, &"X2 Y2".parse().unwrap()).is_err());
    }
}
