use super::{HamiltonError, PathWitness, VertexSet};
use crate::graph::{BipartiteGraph, VertexRef};

/// Shortest `u`–`v` path of length at most 3 whose interior avoids
/// `forbidden`.
///
/// Same-side endpoints are joined through their least common usable
/// neighbor. Opposite-side endpoints use the direct edge when present and
/// otherwise the lexicographically least `u, u', z, v` with `u' ∈ N(u)` and
/// `z ∈ N(v)`.
pub fn short_connector(
    g: &BipartiteGraph,
    u: VertexRef,
    v: VertexRef,
    forbidden: &VertexSet,
) -> Result<PathWitness, HamiltonError> {
    for w in [u, v] {
        if !g.contains(w) {
            return Err(HamiltonError::InvalidInput(format!("{w} is out of range")));
        }
    }
    if u == v {
        return Err(HamiltonError::InvalidInput(format!("connector endpoints coincide at {u}")));
    }
    let usable = |w: &VertexRef| *w != u && *w != v && !forbidden.contains(*w);

    if u.side == v.side {
        let nv: Vec<VertexRef> = g.neighbor_refs(v).filter(usable).collect();
        if let Some(w) = g.neighbor_refs(u).filter(usable).find(|w| nv.binary_search(w).is_ok()) {
            return Ok(PathWitness::new(vec![u, w, v]));
        }
    } else {
        if g.adjacent(u, v) {
            return Ok(PathWitness::new(vec![u, v]));
        }
        let nv: Vec<VertexRef> = g.neighbor_refs(v).filter(usable).collect();
        for u1 in g.neighbor_refs(u).filter(usable) {
            if let Some(&z) = nv.iter().find(|&&z| g.adjacent(u1, z)) {
                return Ok(PathWitness::new(vec![u, u1, z, v]));
            }
        }
    }
    Err(HamiltonError::NoConnector {
        from: u,
        to: v,
        from_options: g.neighbor_refs(u).filter(usable).count(),
        to_options: g.neighbor_refs(v).filter(usable).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::cycle;

    #[test]
    fn same_side_uses_common_neighbor() {
        let g = cycle(4);
        // X0 and X1 share Y0
        let p = short_connector(&g, VertexRef::x(0), VertexRef::x(1), &VertexSet::new(&g)).unwrap();
        assert_eq!(p.to_string(), "X0 Y0 X1");
    }

    #[test]
    fn opposite_sides_direct_or_three() {
        let g = cycle(4);
        let none = VertexSet::new(&g);
        let p = short_connector(&g, VertexRef::x(0), VertexRef::y(0), &none).unwrap();
        assert_eq!(p.to_string(), "X0 Y0");
        let p = short_connector(&g, VertexRef::x(0), VertexRef::y(1), &none).unwrap();
        assert_eq!(p.to_string(), "X0 Y0 X1 Y1");
        p.validate(&g).unwrap();
    }

    #[test]
    fn forbidden_interior_is_avoided() {
        let g = cycle(4);
        let blocked = VertexSet::from_vertices(&g, [VertexRef::y(0)]);
        let p = short_connector(&g, VertexRef::x(0), VertexRef::y(1), &blocked);
        assert!(matches!(p, Err(HamiltonError::NoConnector { from_options: 1, .. })));
    }

    #[test]
    fn far_apart_vertices_have_no_connector() {
        let g = cycle(5);
        let r = short_connector(&g, VertexRef::x(0), VertexRef::x(2), &VertexSet::new(&g));
        assert!(matches!(r, Err(HamiltonError::NoConnector { .. })));
    }
}
