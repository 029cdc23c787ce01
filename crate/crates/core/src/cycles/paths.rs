//! Paths and orbits for a pair of directions.
//!
//! Points are edges of a bipartite multigraph whose nodes are the fibers of
//! a¹ and a². A closed path is a cycle in that graph, and orbits are its
//! connected components.

use serde::Serialize;

use super::{fiberize, Projection};
use crate::error::Result;
use crate::geometry::PointConfig;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Path {
    pub points: Vec<usize>,
    /// Index (0 or 1) of the direction shared by the first two points.
    pub first: usize,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub members: Vec<usize>,
}

/// A closed path with distinct points, if the set has one.
pub fn closed_path_search(points: &PointConfig, a1: &[crate::Rational], a2: &[crate::Rational]) -> Result<Option<Path>> {
    let h = [Projection::Linear(a1.to_vec()), Projection::Linear(a2.to_vec())];
    let fm = fiberize(points, &h)?;
    let n0 = fm.fibers(0).len();
    let nodes = n0 + fm.fibers(1).len();
    // adjacency: node -> (neighbour node, point)
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes];
    for j in 0..points.len() {
        let u = fm.fiber_of(0, j);
        let v = n0 + fm.fiber_of(1, j);
        adj[u].push((v, j));
        adj[v].push((u, j));
    }
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nodes];
    let mut visited = vec![false; nodes];
    for root in 0..nodes {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            let via = parent[u].map(|(_, e)| e);
            for &(v, e) in &adj[u] {
                if Some(e) == via {
                    continue;
                }
                if visited[v] {
                    return Ok(Some(extract_cycle(&parent, u, v, e, n0)));
                }
                visited[v] = true;
                parent[v] = Some((u, e));
                stack.push(v);
            }
        }
    }
    Ok(None)
}

/// Closes the tree paths from `u` and `v` to their common ancestor with the
/// edge `e` = (u, v).
fn extract_cycle(parent: &[Option<(usize, usize)>], u: usize, v: usize, e: usize, n0: usize) -> Path {
    let ancestors = |mut x: usize| {
        let mut chain = vec![x];
        while let Some((p, _)) = parent[x] {
            chain.push(p);
            x = p;
        }
        chain
    };
    let au = ancestors(u);
    let av = ancestors(v);
    let lca = *au.iter().find(|x| av.contains(x)).expect("same tree");
    // Node sequence u → lca → v, then the edge back to u.
    let mut edges = Vec::new();
    let mut x = u;
    while x != lca {
        let (p, pe) = parent[x].expect("below lca");
        edges.push((x, pe));
        x = p;
    }
    let mut down = Vec::new();
    let mut y = v;
    while y != lca {
        let (p, pe) = parent[y].expect("below lca");
        down.push((p, pe));
        y = p;
    }
    // edges[k] = (node where the edge leaves, point); after reversing `down`
    // the second leg runs from lca to v.
    let mut seq: Vec<(usize, usize)> = edges;
    seq.extend(down.into_iter().rev());
    seq.push((v, e));
    // Consecutive edges seq[k], seq[k+1] meet at the node where seq[k+1] leaves.
    let pts: Vec<usize> = seq.iter().map(|&(_, p)| p).collect();
    let shared_first = seq[1 % seq.len()].0;
    let first = usize::from(shared_first >= n0);
    Path { points: pts, first, closed: true }
}

/// Orbit partition: points joined by a path, via union-find on shared fibers.
pub fn orbits(points: &PointConfig, a1: &[crate::Rational], a2: &[crate::Rational]) -> Result<Vec<Orbit>> {
    let h = [Projection::Linear(a1.to_vec()), Projection::Linear(a2.to_vec())];
    let fm = fiberize(points, &h)?;
    let n = points.len();
    let mut uf: Vec<usize> = (0..n).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for i in 0..2 {
        for fiber in fm.fibers(i) {
            for w in fiber.windows(2) {
                let (a, b) = (find(&mut uf, w[0]), find(&mut uf, w[1]));
                if a != b {
                    uf[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for j in 0..n {
        let r = find(&mut uf, j);
        groups.entry(r).or_default().push(j);
    }
    Ok(groups.into_values().map(|members| Orbit { members }).collect())
}
