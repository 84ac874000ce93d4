//! Brute-force automorphism groups and isomorphisms.
//!
//! Individualization and refinement: a fixed source path individualizes one
//! vertex per level (first vertex of the smallest, lowest-coloured
//! non-singleton cell); the search then tries every vertex of the matching
//! cell on the target side, pruning whenever the refinement traces diverge.
//! Every discrete leaf gives a candidate map that is checked edge by edge,
//! so the search returns the whole group without relying on closure.
//!
//! This module deliberately uses nothing from the formula or group modules.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::graph_core::FactorGraph;
use crate::perm::Perm;

pub const DEFAULT_VERTEX_LIMIT: usize = 512;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("graph has {0} vertices, above the oracle limit {1}")]
    LimitExceeded(usize, usize),
}

/// Colouring after one refinement run, plus a fingerprint of every round.
#[derive(Clone, Debug)]
pub struct ColorRefinement {
    pub color: Vec<u32>,
    pub cells: usize,
    pub stable: bool,
    trace: Vec<u64>,
}

impl ColorRefinement {
    pub fn is_discrete(&self) -> bool {
        self.cells == self.color.len()
    }
}

/// The complete automorphism group as found by the search.
#[derive(Clone, Debug)]
pub struct AutGroup {
    /// First automorphism found below each branch of the identity path.
    pub generators: Vec<Perm>,
    /// Every automorphism, identity first.
    pub elements: Vec<Perm>,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Plain adjacency-list graph the search runs on.
struct Adj {
    nbrs: Vec<Vec<u32>>,
    stride: usize,
}

impl Adj {
    fn new(mut nbrs: Vec<Vec<u32>>) -> Self {
        nbrs.iter_mut().for_each(|l| l.sort_unstable());
        let stride = nbrs.iter().map(Vec::len).max().unwrap_or(0) + 1;
        Adj { nbrs, stride }
    }

    fn len(&self) -> usize {
        self.nbrs.len()
    }

    fn has_edge(&self, u: u32, v: u32) -> bool {
        self.nbrs[u as usize].binary_search(&v).is_ok()
    }
}

/// Iterated refinement by `(colour, sorted neighbour colours)`.
///
/// New colours are ranks of signatures in sorted order, so the result does
/// not depend on the vertex labelling.
fn refine(adj: &Adj, mut color: Vec<u32>) -> ColorRefinement {
    let order = adj.len();
    let stride = adj.stride;
    let mut keys = vec![u32::MAX; order * stride];
    let mut idx: Vec<u32> = (0..order as u32).collect();
    let mut trace = Vec::new();
    let mut cells = count_cells(&color);
    loop {
        for v in 0..order {
            let key = &mut keys[v * stride..(v + 1) * stride];
            key[0] = color[v];
            for (slot, &w) in key[1..].iter_mut().zip(&adj.nbrs[v]) {
                *slot = color[w as usize];
            }
            let deg = adj.nbrs[v].len();
            key[1..1 + deg].sort_unstable();
        }
        let key = |v: u32| &keys[v as usize * stride..(v as usize + 1) * stride];
        idx.sort_unstable_by(|&a, &b| key(a).cmp(key(b)));
        let mut hasher = DefaultHasher::new();
        let mut rank = 0u32;
        for (pos, &v) in idx.iter().enumerate() {
            if pos > 0 && key(v) != key(idx[pos - 1]) {
                rank += 1;
            }
            key(v).hash(&mut hasher);
            color[v as usize] = rank;
        }
        trace.push(hasher.finish());
        let new_cells = rank as usize + 1;
        if new_cells == cells {
            break;
        }
        cells = new_cells;
    }
    ColorRefinement {
        color,
        cells,
        stable: true,
        trace,
    }
}

fn count_cells(color: &[u32]) -> usize {
    let mut c = color.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Gives `v` its own colour, keeping the relative order of all others.
fn individualize(color: &[u32], v: u32) -> Vec<u32> {
    color
        .iter()
        .enumerate()
        .map(|(u, &c)| 2 * c + (u as u32 != v) as u32)
        .collect()
}

/// Colour of the cell to branch on: smallest non-singleton, then lowest colour.
fn target_cell(color: &[u32], cells: usize) -> Option<u32> {
    let mut size = vec![0usize; cells];
    color.iter().for_each(|&c| size[c as usize] += 1);
    (0..cells as u32)
        .filter(|&c| size[c as usize] > 1)
        .min_by_key(|&c| (size[c as usize], c))
}

struct Level {
    refinement: ColorRefinement,
    cell: Option<u32>,
    chosen: u32,
}

/// Fixed sequence of individualizations on the source graph.
fn source_path(adj: &Adj) -> Vec<Level> {
    let mut levels = Vec::new();
    let mut r = refine(adj, vec![0; adj.len()]);
    loop {
        let cell = target_cell(&r.color, r.cells);
        let chosen = match cell {
            Some(c) => r
                .color
                .iter()
                .position(|&x| x == c)
                .expect("non-empty cell") as u32,
            None => u32::MAX,
        };
        let next = cell.map(|_| refine(adj, individualize(&r.color, chosen)));
        levels.push(Level {
            refinement: r,
            cell,
            chosen,
        });
        match next {
            Some(n) => r = n,
            None => return levels,
        }
    }
}

struct Search<'a> {
    src: &'a Adj,
    dst: &'a Adj,
    path: Vec<Level>,
    want_all: bool,
    found: Vec<Perm>,
    generators: Vec<Perm>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize, r: ColorRefinement, on_identity: bool) {
        let level = &self.path[depth];
        let Some(cell) = level.cell else {
            self.leaf(&r);
            return;
        };
        let chosen = level.chosen;
        let candidates: Vec<u32> = (0..r.color.len() as u32)
            .filter(|&w| r.color[w as usize] == cell)
            .collect();
        // the identity branch first so generators are recorded below the others
        let ordered: Vec<u32> = if on_identity {
            std::iter::once(chosen)
                .chain(candidates.iter().copied().filter(|&w| w != chosen))
                .collect()
        } else {
            candidates
        };
        for w in ordered {
            if !self.want_all && !self.found.is_empty() {
                return;
            }
            let next = refine(self.dst, individualize(&r.color, w));
            let expected = &self.path[depth + 1].refinement;
            if next.cells != expected.cells || next.trace != expected.trace {
                continue;
            }
            let before = self.found.len();
            let identity_branch = on_identity && w == chosen;
            self.run(depth + 1, next, identity_branch);
            if on_identity && !identity_branch && self.found.len() > before {
                self.generators.push(self.found[before].clone());
            }
        }
    }

    fn leaf(&mut self, r: &ColorRefinement) {
        let src = &self.path.last().expect("path is non-empty").refinement;
        if !r.is_discrete() || !src.is_discrete() {
            return;
        }
        let mut by_color = vec![0u32; r.color.len()];
        for (w, &c) in r.color.iter().enumerate() {
            by_color[c as usize] = w as u32;
        }
        let images: Vec<u32> = src.color.iter().map(|&c| by_color[c as usize]).collect();
        let is_iso = (0..self.src.len() as u32).all(|u| {
            self.src.nbrs[u as usize]
                .iter()
                .all(|&v| self.dst.has_edge(images[u as usize], images[v as usize]))
        });
        if is_iso {
            let label = format!("aut{}", self.found.len());
            self.found.push(
                Perm::from_images(label, images).expect("discrete colourings give bijections"),
            );
        }
    }
}

fn check_limit(order: usize, limit: usize) -> Result<(), SearchError> {
    if order > limit {
        Err(SearchError::LimitExceeded(order, limit))
    } else {
        Ok(())
    }
}

/// Every automorphism of `g`.
pub fn full_aut(g: &FactorGraph, limit: usize) -> Result<AutGroup, SearchError> {
    full_aut_adj(g.adjacency_lists(), limit)
}

/// Every automorphism of a graph given by adjacency lists.
pub fn full_aut_adj(adjacency: Vec<Vec<u32>>, limit: usize) -> Result<AutGroup, SearchError> {
    check_limit(adjacency.len(), limit)?;
    let adj = Adj::new(adjacency);
    let path = source_path(&adj);
    let start = path[0].refinement.clone();
    let mut search = Search {
        src: &adj,
        dst: &adj,
        path,
        want_all: true,
        found: Vec::new(),
        generators: Vec::new(),
    };
    search.run(0, start, true);
    let mut elements = search.found;
    // the all-identity branch is explored first, so its leaf comes first
    debug_assert!(elements.first().is_some_and(Perm::is_identity));
    if let Some(first) = elements.first_mut() {
        first.label = "id".into();
    }
    Ok(AutGroup {
        generators: search.generators,
        elements,
    })
}

/// An explicit isomorphism `g1 -> g2`, if one exists.
pub fn are_isomorphic(
    g1: &FactorGraph,
    g2: &FactorGraph,
    limit: usize,
) -> Result<Option<Perm>, SearchError> {
    are_isomorphic_adj(g1.adjacency_lists(), g2.adjacency_lists(), limit)
}

pub fn are_isomorphic_adj(
    a: Vec<Vec<u32>>,
    b: Vec<Vec<u32>>,
    limit: usize,
) -> Result<Option<Perm>, SearchError> {
    check_limit(a.len(), limit)?;
    check_limit(b.len(), limit)?;
    if a.len() != b.len() {
        return Ok(None);
    }
    let (src, dst) = (Adj::new(a), Adj::new(b));
    let path = source_path(&src);
    let start = refine(&dst, vec![0; dst.len()]);
    if start.cells != path[0].refinement.cells || start.trace != path[0].refinement.trace {
        return Ok(None);
    }
    let mut search = Search {
        src: &src,
        dst: &dst,
        path,
        want_all: false,
        found: Vec::new(),
        generators: Vec::new(),
    };
    search.run(0, start, false);
    Ok(search.found.pop().map(|p| p.with_label("iso")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle_adj(n: u32) -> Vec<Vec<u32>> {
        (0..n).map(|v| vec![(v + n - 1) % n, (v + 1) % n]).collect()
    }

    /// Petersen graph: outer 5-cycle, inner pentagram, spokes.
    fn petersen() -> Vec<Vec<u32>> {
        (0..10u32)
            .map(|v| {
                if v < 5 {
                    vec![(v + 1) % 5, (v + 4) % 5, v + 5]
                } else {
                    let i = v - 5;
                    vec![5 + (i + 2) % 5, 5 + (i + 3) % 5, i]
                }
            })
            .collect()
    }

    #[test]
    fn cycles_are_dihedral() {
        for n in 3..12 {
            let g = full_aut_adj(cycle_adj(n), 64).unwrap();
            assert_eq!(g.order(), 2 * n as usize);
            assert!(g.elements[0].is_identity());
        }
    }

    #[test]
    fn petersen_has_120() {
        assert_eq!(full_aut_adj(petersen(), 64).unwrap().order(), 120);
    }

    #[test]
    fn k33_and_cube() {
        let k33: Vec<Vec<u32>> = (0..6)
            .map(|v| if v < 3 { vec![3, 4, 5] } else { vec![0, 1, 2] })
            .collect();
        assert_eq!(full_aut_adj(k33, 64).unwrap().order(), 72);
        let cube: Vec<Vec<u32>> = (0..8u32).map(|v| vec![v ^ 1, v ^ 2, v ^ 4]).collect();
        assert_eq!(full_aut_adj(cube, 64).unwrap().order(), 48);
    }

    #[test]
    fn generators_generate() {
        let g = full_aut_adj(petersen(), 64).unwrap();
        // closure by hand so the test stays independent of the group module
        let mut seen: std::collections::HashSet<Vec<u32>> =
            [Perm::identity(10).into_images()].into();
        let mut frontier: Vec<Perm> = vec![Perm::identity(10)];
        while let Some(p) = frontier.pop() {
            for s in &g.generators {
                let q = p.then(s);
                if seen.insert(q.images().to_vec()) {
                    frontier.push(q);
                }
            }
        }
        assert_eq!(seen.len(), 120);
    }

    #[test]
    fn isomorphism_of_relabelled_graph() {
        let a = petersen();
        let pi: Vec<u32> = vec![3, 7, 1, 9, 0, 2, 8, 4, 6, 5];
        let mut b = vec![Vec::new(); 10];
        for (u, nb) in a.iter().enumerate() {
            b[pi[u] as usize] = nb.iter().map(|&w| pi[w as usize]).collect();
        }
        let iso = are_isomorphic_adj(a.clone(), b.clone(), 64)
            .unwrap()
            .unwrap();
        for (u, nb) in a.iter().enumerate() {
            for &w in nb {
                assert!(b[iso.apply(u as u32) as usize].contains(&iso.apply(w)));
            }
        }
        let c6 = cycle_adj(6);
        let two_triangles: Vec<Vec<u32>> = (0..6u32)
            .map(|v| {
                let base = v / 3 * 3;
                vec![base + (v + 1) % 3, base + (v + 2) % 3]
            })
            .collect();
        assert!(are_isomorphic_adj(c6, two_triangles, 64).unwrap().is_none());
    }

    #[test]
    fn limit() {
        assert_eq!(
            full_aut_adj(cycle_adj(20), 10).unwrap_err(),
            SearchError::LimitExceeded(20, 10)
        );
    }
}
