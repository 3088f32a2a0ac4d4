use super::escort::low_degree_sets;
use super::{escort_matching, short_connector, HamiltonError, PathWitness, Stage, StageFailure, VertexSet};
use crate::graph::{BipartiteGraph, Side};

/// A path from a Y-vertex to an X-vertex that passes through every vertex
/// of `U_X(epsilon) ∪ U_Y(epsilon)`, each flanked by its two escorts.
///
/// With `m` low-degree vertices the path is
/// `u_0+ P_0 u_1- u_1 u_1+ P_1 ... u_m- u_m u_m+ P_m u_{m+1}-`, where the
/// endpoints `u_0+ ∈ Y` and `u_{m+1}- ∈ X` are the least-index vertices
/// outside the low-degree sets and the escort pool, and each `P_i` is a
/// short connector. Connectors avoid the path built so far and every
/// vertex reserved for later. The result has at most `5m + 4` edges. When
/// `m = 0` the path is the least edge between the two complements.
pub fn cover_path(g: &BipartiteGraph, epsilon: f64) -> Result<PathWitness, StageFailure> {
    let fail = |stage: Stage| move |error: HamiltonError| StageFailure::new(stage, error);
    let (ux, uy) = low_degree_sets(g, epsilon).map_err(fail(Stage::EscortMatching))?;
    let escorts = escort_matching(g, epsilon).map_err(fail(Stage::EscortMatching))?;

    let mut reserved = VertexSet::from_vertices(g, ux.members.iter().chain(uy.members.iter()).copied());
    if escorts.is_empty() {
        return trivial_edge(g, &reserved);
    }
    for e in &escorts.pairs {
        reserved.insert(e.minus);
        reserved.insert(e.plus);
    }
    let free_on = |side: Side| g.side_vertices(side).find(|&v| !reserved.contains(v));
    let not_found = |what: &str| {
        StageFailure::new(
            Stage::CoverPath,
            HamiltonError::NotFound(format!("no free {what} endpoint for the cover path")),
        )
    };
    let start = free_on(Side::Y).ok_or_else(|| not_found("Y"))?;
    let end = free_on(Side::X).ok_or_else(|| not_found("X"))?;
    reserved.insert(start);
    reserved.insert(end);

    let mut path = vec![start];
    let targets = escorts.pairs.iter().map(|e| e.minus).chain(std::iter::once(end));
    for (i, target) in targets.enumerate() {
        let current = *path.last().expect("path is never empty");
        let mut forbidden = reserved.clone();
        for &v in &path {
            forbidden.insert(v);
        }
        forbidden.remove(current);
        forbidden.remove(target);
        let link = short_connector(g, current, target, &forbidden).map_err(fail(Stage::ShortConnector))?;
        for &v in &link.vertices[1..] {
            path.push(v);
        }
        if let Some(e) = escorts.pairs.get(i) {
            path.push(e.u);
            path.push(e.plus);
        }
    }
    let path = PathWitness::new(path);
    debug_assert_eq!(path.validate(g), Ok(()));
    debug_assert!(path.length() <= 5 * escorts.len() + 4);
    Ok(path)
}

fn trivial_edge(g: &BipartiteGraph, low: &VertexSet) -> Result<PathWitness, StageFailure> {
    g.side_vertices(Side::Y)
        .filter(|&y| !low.contains(y))
        .find_map(|y| {
            g.neighbor_refs(y)
                .find(|&x| !low.contains(x))
                .map(|x| PathWitness::new(vec![y, x]))
        })
        .ok_or_else(|| {
            StageFailure::new(
                Stage::CoverPath,
                HamiltonError::NotFound("no edge between the high-degree parts".into()),
            )
        })
}
