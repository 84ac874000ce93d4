//! Structural predicates: quotient type, Cayley certificates, edge orbits,
//! the edge 3-colouring and the `n = 4m` exception among the odd/even graphs.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut_search::{full_aut, SearchError};
use crate::constructions::{build_xb, ConstructionError, XbParams};
use crate::graph_core::{edge, Edge, EdgeClass, FactorGraph};
use crate::perm::Perm;
use crate::perm_group::PermGroup;

/// Cycle lengths annotated on each edge orbit.
pub const ORBIT_CYCLE_LENGTHS: [usize; 4] = [4, 6, 7, 8];

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("quotient by the rings is not a cycle")]
    NotCycleQuotient,
    #[error("group is not regular on the vertex set")]
    NotRegular,
    #[error("no group element maps v(0,0) to {0}")]
    MissingElement(String),
    #[error("element mapping v(0,0) to {0} is not an involution")]
    NotInvolution(String),
    #[error("orbit map is not an isomorphism onto the Cayley graph")]
    CayleyMismatch,
    #[error("deleted edge class is not a perfect matching")]
    NotMatching,
    #[error("m must be odd, got {0}")]
    EvenM(u32),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

/// The quotient of a graph by its ring partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientGraph {
    pub nodes: u32,
    pub edges: BTreeSet<(u32, u32)>,
}

impl QuotientGraph {
    pub fn degree(&self, x: u32) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == x || b == x)
            .count()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.nodes as usize];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(a, b) in &self.edges {
                let other = if a == x {
                    b
                } else if b == x {
                    a
                } else {
                    continue;
                };
                if !std::mem::replace(&mut seen[other as usize], true) {
                    stack.push(other);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// Connected, 2-regular, at least three nodes.
    pub fn is_cycle(&self) -> bool {
        self.nodes >= 3 && self.is_connected() && (0..self.nodes).all(|x| self.degree(x) == 2)
    }
}

pub fn quotient_graph(g: &FactorGraph) -> QuotientGraph {
    let grid = g.grid();
    let edges = (0..g.order() as u32)
        .map(|v| {
            let (a, b) = (grid.ring_of(v), grid.ring_of(g.outside(v)));
            (a.min(b), a.max(b))
        })
        .collect();
    QuotientGraph {
        nodes: grid.m,
        edges,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuotientKind {
    /// Both `v_{0,+-1}` have their outside neighbour in the ring opposite to that of `v_{0,0}`.
    Alternating,
    /// Exactly one of `v_{0,+-1}` shares the outside ring of `v_{0,0}`.
    Bialternating,
    /// Both `v_{0,+-1}` share the outside ring of `v_{0,0}`.
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientType {
    pub kind: QuotientKind,
    /// Rings of `N(v_{0,-1})`, `N(v_{0,0})`, `N(v_{0,1})` after orienting so that `N(v_{0,0})` is in `V_1`.
    pub evidence: [u32; 3],
}

/// Alternating or bialternating, read off at `v_{0,-1}, v_{0,0}, v_{0,1}`.
pub fn classify_quotient_type(g: &FactorGraph) -> Result<QuotientType, AnalysisError> {
    if !quotient_graph(g).is_cycle() {
        return Err(AnalysisError::NotCycleQuotient);
    }
    let grid = g.grid();
    let m = grid.m;
    let ring = |j: i64| grid.ring_of(g.outside(grid.v(0, j)));
    // reflect ring indices when v_{0,0} points backwards
    let flip = ring(0) == m - 1;
    let orient = |r: u32| if flip { (m - r) % m } else { r };
    let evidence = [orient(ring(-1)), orient(ring(0)), orient(ring(1))];
    let forward = [evidence[0], evidence[2]]
        .iter()
        .filter(|&&r| r == 1)
        .count();
    let kind = match forward {
        0 => QuotientKind::Alternating,
        1 => QuotientKind::Bialternating,
        _ => QuotientKind::Neither,
    };
    Ok(QuotientType { kind, evidence })
}

/// Three involutions generating a regular group, and the orbit-map check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CayleyCertificate {
    /// `s_k` maps `v_{0,0}` to its `k`-th neighbour (previous, next, outside).
    pub involutions: Vec<Perm>,
}

/// Connection set of `g` as a Cayley graph of the regular group `group`.
///
/// With the orbit map `h -> h(v_{0,0})`, the vertex `h(v_{0,0})` is adjacent
/// to `h(s(v_{0,0}))` for each `s` in the connection set.
pub fn cayley_certificate(
    g: &FactorGraph,
    group: &PermGroup,
) -> Result<CayleyCertificate, AnalysisError> {
    if !group.is_regular() {
        return Err(AnalysisError::NotRegular);
    }
    let grid = g.grid();
    let mut involutions = Vec::with_capacity(3);
    for w in g.neighbors(0) {
        let name = grid.vertex(w).to_string();
        let s = group
            .elements()
            .iter()
            .find(|e| e.apply(0) == w)
            .ok_or_else(|| AnalysisError::MissingElement(name.clone()))?;
        if !s.is_involution() {
            return Err(AnalysisError::NotInvolution(name));
        }
        involutions.push(s.clone().with_label(format!("s[{name}]")));
    }
    for h in group.elements() {
        let x = h.apply(0);
        let mut images: Vec<u32> = involutions.iter().map(|s| s.then(h).apply(0)).collect();
        images.sort_unstable();
        let mut nbrs = g.neighbors(x).to_vec();
        nbrs.sort_unstable();
        if images != nbrs {
            return Err(AnalysisError::CayleyMismatch);
        }
    }
    Ok(CayleyCertificate { involutions })
}

/// One orbit of the automorphism group on edges.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeOrbit {
    pub representative: Edge,
    pub size: usize,
    pub classes: BTreeMap<EdgeClass, usize>,
    /// Number of cycles of each length in [`ORBIT_CYCLE_LENGTHS`] through the representative.
    pub cycles: BTreeMap<usize, u64>,
    pub edges: Vec<Edge>,
}

/// Edge orbits of `group`, ordered by least edge.
pub fn edge_orbits(g: &FactorGraph, group: &PermGroup) -> Vec<EdgeOrbit> {
    let mut seen: HashSet<Edge> = HashSet::new();
    let mut out = Vec::new();
    for (u, v, _) in g.edges() {
        if seen.contains(&(u, v)) {
            continue;
        }
        let orbit: BTreeSet<Edge> = group
            .elements()
            .iter()
            .map(|p| edge(p.apply(u), p.apply(v)))
            .collect();
        seen.extend(orbit.iter().copied());
        let mut classes = BTreeMap::new();
        for &(a, b) in &orbit {
            *classes
                .entry(g.edge_class(a, b).expect("images of edges are edges"))
                .or_insert(0) += 1;
        }
        let cycles = ORBIT_CYCLE_LENGTHS
            .iter()
            .map(|&len| {
                (
                    len,
                    g.count_cycles_through_edge(u, v, len)
                        .expect("edge within window"),
                )
            })
            .collect();
        out.push(EdgeOrbit {
            representative: (u, v),
            size: orbit.len(),
            classes,
            cycles,
            edges: orbit.into_iter().collect(),
        });
    }
    out
}

/// Edge orbits of the full automorphism group.
pub fn edge_orbit_report(g: &FactorGraph, limit: usize) -> Result<Vec<EdgeOrbit>, AnalysisError> {
    Ok(edge_orbits(g, &oracle_group(g, limit)?))
}

/// The full automorphism group from the search, as a [`PermGroup`].
pub fn oracle_group(g: &FactorGraph, limit: usize) -> Result<PermGroup, AnalysisError> {
    let aut = full_aut(g, limit)?;
    Ok(PermGroup::from_elements(
        g.order(),
        aut.generators,
        aut.elements,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeColor {
    Green,
    Red,
    Blue,
}

/// Links and jumps red; ring edges `v_{i,j} v_{i,j+1}` green for odd `j`, blue otherwise.
pub fn edge_coloring(g: &FactorGraph) -> Vec<(u32, u32, EdgeColor)> {
    let grid = g.grid();
    g.edges()
        .into_iter()
        .map(|(u, v, class)| {
            let color = if class != EdgeClass::Ring {
                EdgeColor::Red
            } else {
                // the lower endpoint along the ring is the one whose successor is the other
                let (a, b) = (grid.vertex(u), grid.vertex(v));
                let start = if (a.j + 1) % grid.n == b.j { a.j } else { b.j };
                if start % 2 == 1 {
                    EdgeColor::Green
                } else {
                    EdgeColor::Blue
                }
            };
            (u, v, color)
        })
        .collect()
}

/// Lengths of the cycles left after deleting the edge orbit of `v_{0,0} v_{0,1}`.
pub fn green_deletion_cycles(
    g: &FactorGraph,
    group: &PermGroup,
) -> Result<Vec<usize>, AnalysisError> {
    let orbit: HashSet<Edge> = group
        .elements()
        .iter()
        .map(|p| edge(p.apply(0), p.apply(1)))
        .collect();
    let mut covered = vec![0u8; g.order()];
    for &(u, v) in &orbit {
        covered[u as usize] += 1;
        covered[v as usize] += 1;
    }
    if covered.iter().any(|&c| c != 1) {
        return Err(AnalysisError::NotMatching);
    }
    let rest: Vec<Vec<u32>> = (0..g.order() as u32)
        .map(|v| {
            g.neighbors(v)
                .into_iter()
                .filter(|&w| !orbit.contains(&edge(v, w)))
                .collect()
        })
        .collect();
    let mut seen = vec![false; g.order()];
    let mut lengths = Vec::new();
    for start in 0..g.order() {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start as u32];
        seen[start] = true;
        let mut size = 0;
        while let Some(x) = stack.pop() {
            size += 1;
            for &w in &rest[x as usize] {
                if !std::mem::replace(&mut seen[w as usize], true) {
                    stack.push(w);
                }
            }
        }
        lengths.push(size);
    }
    lengths.sort_unstable();
    Ok(lengths)
}

/// Whether the 10-vertex walk `v23 v22 v12 v11 v10 v00 v01 v1a v1(a+1) v1(a+2)`
/// closes to a cycle.
pub fn ten_cycle_check(g: &FactorGraph, a: u32) -> bool {
    let grid = g.grid();
    let a = a as i64;
    let walk = [
        grid.v(2, 3),
        grid.v(2, 2),
        grid.v(1, 2),
        grid.v(1, 1),
        grid.v(1, 0),
        grid.v(0, 0),
        grid.v(0, 1),
        grid.v(1, a),
        grid.v(1, a + 1),
        grid.v(1, a + 2),
    ];
    let distinct = walk.iter().collect::<HashSet<_>>().len() == walk.len();
    distinct && (0..walk.len()).all(|k| g.is_adjacent(walk[k], walk[(k + 1) % walk.len()]))
}

/// Automorphism data for an odd-`m`, even-`l` graph.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OddEvenReport {
    pub params: XbParams,
    pub aut_order: usize,
    pub stabilizer_order: usize,
    pub c_invariant: bool,
    /// Whether `n = 4m`, where extra automorphisms are expected.
    pub exceptional: bool,
    /// The automorphism fixing `v_{1,1}` and swapping `v_{0,1}`, `v_{1,0}`, when unique.
    pub eta: Option<Perm>,
}

pub fn odd_even_report(p: &XbParams, limit: usize) -> Result<OddEvenReport, AnalysisError> {
    let g = build_xb(p)?;
    let group = oracle_group(&g, limit)?;
    let grid = g.grid();
    let (v01, v10, v11) = (grid.v(0, 1), grid.v(1, 0), grid.v(1, 1));
    let mut etas = group
        .elements()
        .iter()
        .filter(|e| e.apply(v11) == v11 && e.apply(v01) == v10 && e.apply(v10) == v01);
    let eta = match (etas.next(), etas.next()) {
        (Some(e), None) => Some(e.clone().with_label("eta")),
        _ => None,
    };
    let rings = grid.rings();
    Ok(OddEvenReport {
        params: *p,
        aut_order: group.order(),
        stabilizer_order: group.point_stabilizer_order(0),
        c_invariant: group.block_preserving_subgroup(&rings).order() == group.order(),
        exceptional: p.n == 4 * p.m,
        eta,
    })
}

/// The graph `X_b(m, 4m, 1, 4, 4m-2)` for odd `m`.
pub fn eta_exception_check(m: u32, limit: usize) -> Result<OddEvenReport, AnalysisError> {
    if m.is_multiple_of(2) {
        return Err(AnalysisError::EvenM(m));
    }
    let (m, n) = (m as i64, 4 * m as i64);
    let p = XbParams::new(m, n, 1, 4, n - 2)?;
    odd_even_report(&p, limit)
}
