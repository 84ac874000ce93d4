//! Labeled cubic graphs on the ring grid `Z_m x Z_n`.
//!
//! Every graph here carries a distinguished 2-factor: the `m` rings
//! `V_i = {(i, j) : j in Z_n}` with `(i, j) ~ (i, j +- 1)`. Each vertex has
//! exactly one further edge, its *outside* edge, which is either a link
//! (between `V_i` and `V_{i+1}`, `i <= m - 2`) or a jump (between `V_{m-1}`
//! and `V_0`). Vertices are identified with the flat index `i * n + j`
//! everywhere: permutations, graph6 output and edge identity all use it.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Longest cycle length accepted by [`FactorGraph::count_cycles_through_edge`].
pub const MAX_CYCLE_LEN: usize = 12;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("cycle length {0} outside the supported window 3..={MAX_CYCLE_LEN}")]
    CycleLength(usize),
    #[error("{0} is not an edge")]
    NotAnEdge(String),
    #[error("invalid edge-list json: {0}")]
    Json(#[from] serde_json::Error),
}

/// A vertex `v_{i,j}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId {
    pub i: u32,
    pub j: u32,
}

impl VertexId {
    pub fn new(i: u32, j: u32) -> Self {
        VertexId { i, j }
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v({},{})", self.i, self.j)
    }
}

/// The index grid `Z_m x Z_n`; all coordinate arithmetic goes through here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    pub m: u32,
    pub n: u32,
}

impl Grid {
    pub fn new(m: u32, n: u32) -> Self {
        Grid { m, n }
    }

    pub fn order(&self) -> usize {
        (self.m * self.n) as usize
    }

    /// Flat index of `v_{i,j}`, reducing `i` mod `m` and `j` mod `n`.
    #[inline]
    pub fn v(&self, i: i64, j: i64) -> u32 {
        let i = i.rem_euclid(self.m as i64) as u32;
        let j = j.rem_euclid(self.n as i64) as u32;
        i * self.n + j
    }

    #[inline]
    pub fn flat(&self, v: VertexId) -> u32 {
        v.i * self.n + v.j
    }

    #[inline]
    pub fn vertex(&self, flat: u32) -> VertexId {
        VertexId::new(flat / self.n, flat % self.n)
    }

    #[inline]
    pub fn ring_of(&self, flat: u32) -> u32 {
        flat / self.n
    }

    /// Flat indices of `V_i`, in order of `j`.
    pub fn ring(&self, i: u32) -> impl Iterator<Item = u32> + '_ {
        let base = i * self.n;
        (0..self.n).map(move |j| base + j)
    }

    /// The ring partition `{V_0, ..., V_{m-1}}`.
    pub fn rings(&self) -> Vec<Vec<u32>> {
        (0..self.m).map(|i| self.ring(i).collect()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeClass {
    Ring,
    Link,
    Jump,
}

impl EdgeClass {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeClass::Ring => "ring",
            EdgeClass::Link => "link",
            EdgeClass::Jump => "jump",
        }
    }
}

/// Unordered edge of flat indices, smaller endpoint first.
pub type Edge = (u32, u32);

#[inline]
pub fn edge(u: u32, v: u32) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Export formats understood by [`FactorGraph::export`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Graph6,
    Dot,
    Json,
}

/// A cubic graph on `Z_m x Z_n` together with its ring 2-factor.
///
/// Immutable once built; every constructor checks the structural invariants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorGraph {
    grid: Grid,
    outside: Vec<u32>,
    outside_class: Vec<EdgeClass>,
    family_label: String,
}

impl FactorGraph {
    /// Builds a graph from its outside edges; ring edges are implied.
    ///
    /// Fails unless the outside edges form a perfect matching whose edges
    /// join distinct rings and carry the class matching their endpoints.
    pub fn from_outside_edges<I>(
        grid: Grid,
        family_label: impl Into<String>,
        edges: I,
    ) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (u32, u32, EdgeClass)>,
    {
        if grid.m < 2 || grid.n < 4 {
            return Err(GraphError::Malformed(format!(
                "need m >= 2 and n >= 4, got m = {}, n = {}",
                grid.m, grid.n
            )));
        }
        let order = grid.order();
        let mut outside = vec![u32::MAX; order];
        let mut outside_class = vec![EdgeClass::Ring; order];
        for (u, v, class) in edges {
            if u as usize >= order || v as usize >= order {
                return Err(GraphError::Malformed(format!(
                    "vertex index out of range in edge {u}-{v}"
                )));
            }
            let (ru, rv) = (grid.ring_of(u), grid.ring_of(v));
            let expected = outside_class_between(grid, ru, rv).ok_or_else(|| {
                GraphError::Malformed(format!(
                    "edge {}-{} joins rings {ru} and {rv}, which are not consecutive",
                    grid.vertex(u),
                    grid.vertex(v)
                ))
            })?;
            if !expected.contains(&class) {
                return Err(GraphError::Malformed(format!(
                    "edge {}-{} tagged {} but joins rings {ru} and {rv}",
                    grid.vertex(u),
                    grid.vertex(v),
                    class.as_str()
                )));
            }
            for (x, y) in [(u, v), (v, u)] {
                if outside[x as usize] != u32::MAX {
                    return Err(GraphError::Malformed(format!(
                        "{} has two outside edges",
                        grid.vertex(x)
                    )));
                }
                outside[x as usize] = y;
                outside_class[x as usize] = class;
            }
        }
        if let Some(v) = outside.iter().position(|&w| w == u32::MAX) {
            return Err(GraphError::Malformed(format!(
                "{} has no outside edge",
                grid.vertex(v as u32)
            )));
        }
        Ok(FactorGraph {
            grid,
            outside,
            outside_class,
            family_label: family_label.into(),
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn m(&self) -> u32 {
        self.grid.m
    }

    pub fn n(&self) -> u32 {
        self.grid.n
    }

    pub fn order(&self) -> usize {
        self.grid.order()
    }

    pub fn family_label(&self) -> &str {
        &self.family_label
    }

    /// The three neighbours of `v`: previous and next on its ring, then the outside neighbour.
    #[inline]
    pub fn neighbors(&self, v: u32) -> [u32; 3] {
        let n = self.grid.n;
        let (i, j) = (v / n, v % n);
        [
            i * n + (j + n - 1) % n,
            i * n + (j + 1) % n,
            self.outside[v as usize],
        ]
    }

    #[inline]
    pub fn outside(&self, v: u32) -> u32 {
        self.outside[v as usize]
    }

    pub fn outside_neighbor(&self, v: VertexId) -> VertexId {
        self.grid.vertex(self.outside(self.grid.flat(v)))
    }

    pub fn is_adjacent(&self, u: u32, v: u32) -> bool {
        self.neighbors(u).contains(&v)
    }

    pub fn edge_class(&self, u: u32, v: u32) -> Option<EdgeClass> {
        if self.outside[u as usize] == v {
            Some(self.outside_class[u as usize])
        } else if self.is_adjacent(u, v) {
            Some(EdgeClass::Ring)
        } else {
            None
        }
    }

    /// All edges, canonical and sorted.
    pub fn edges(&self) -> Vec<(u32, u32, EdgeClass)> {
        let mut out = Vec::with_capacity(self.order() * 3 / 2);
        for u in 0..self.order() as u32 {
            for w in self.neighbors(u) {
                if u < w {
                    out.push((u, w, self.edge_class(u, w).expect("neighbour")));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<u32>> {
        (0..self.order() as u32)
            .map(|v| self.neighbors(v).to_vec())
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let order = self.order();
        let mut seen = vec![false; order];
        let mut queue = VecDeque::from([0u32]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == order
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![u8::MAX; self.order()];
        for start in 0..self.order() as u32 {
            if side[start as usize] != u8::MAX {
                continue;
            }
            side[start as usize] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if side[w as usize] == u8::MAX {
                        side[w as usize] = 1 - side[u as usize];
                        queue.push_back(w);
                    } else if side[w as usize] == side[u as usize] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Length of a shortest cycle, by a breadth-first search from every vertex.
    pub fn girth(&self) -> usize {
        let order = self.order();
        let mut best = usize::MAX;
        let mut dist = vec![u32::MAX; order];
        let mut parent = vec![u32::MAX; order];
        for root in 0..order as u32 {
            dist.iter_mut().for_each(|d| *d = u32::MAX);
            dist[root as usize] = 0;
            parent[root as usize] = u32::MAX;
            let mut queue = VecDeque::from([root]);
            'bfs: while let Some(u) = queue.pop_front() {
                if 2 * dist[u as usize] as usize + 1 >= best {
                    break;
                }
                for w in self.neighbors(u) {
                    if dist[w as usize] == u32::MAX {
                        dist[w as usize] = dist[u as usize] + 1;
                        parent[w as usize] = u;
                        queue.push_back(w);
                    } else if parent[u as usize] != w {
                        let len = (dist[u as usize] + dist[w as usize] + 1) as usize;
                        best = best.min(len);
                        if len <= 3 {
                            break 'bfs;
                        }
                    }
                }
            }
        }
        best
    }

    /// Number of distinct cycles of length exactly `len` through the edge `{u, v}`.
    ///
    /// Exhaustive: counts simple `v -> u` paths with `len - 1` edges that do
    /// not use the edge itself.
    pub fn count_cycles_through_edge(&self, u: u32, v: u32, len: usize) -> Result<u64, GraphError> {
        if !(3..=MAX_CYCLE_LEN).contains(&len) {
            return Err(GraphError::CycleLength(len));
        }
        if !self.is_adjacent(u, v) {
            return Err(GraphError::NotAnEdge(format!(
                "{}-{}",
                self.grid.vertex(u),
                self.grid.vertex(v)
            )));
        }
        let mut on_path = vec![false; self.order()];
        on_path[v as usize] = true;
        let mut count = 0;
        self.extend_paths(v, u, len - 1, &mut on_path, &mut count, u, v);
        Ok(count)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_paths(
        &self,
        at: u32,
        target: u32,
        remaining: usize,
        on_path: &mut [bool],
        count: &mut u64,
        eu: u32,
        ev: u32,
    ) {
        for w in self.neighbors(at) {
            if w == target {
                // closing step; the bare edge itself is not a cycle
                if remaining == 1 && !(at == ev && target == eu) {
                    *count += 1;
                }
                continue;
            }
            if remaining <= 1 || on_path[w as usize] {
                continue;
            }
            on_path[w as usize] = true;
            self.extend_paths(w, target, remaining - 1, on_path, count, eu, ev);
            on_path[w as usize] = false;
        }
    }

    pub fn export(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Graph6 => self.to_graph6().into_bytes(),
            Format::Dot => self.to_dot().into_bytes(),
            Format::Json => self.to_json().into_bytes(),
        }
    }

    /// graph6 string over the flat vertex order, without trailing newline.
    pub fn to_graph6(&self) -> String {
        let order = self.order();
        let mut bytes = graph6_size_header(order);
        let mut acc = 0u8;
        let mut nbits = 0;
        for j in 1..order as u32 {
            for i in 0..j {
                acc = (acc << 1) | self.is_adjacent(i, j) as u8;
                nbits += 1;
                if nbits == 6 {
                    bytes.push(acc + 63);
                    acc = 0;
                    nbits = 0;
                }
            }
        }
        if nbits > 0 {
            bytes.push((acc << (6 - nbits)) + 63);
        }
        String::from_utf8(bytes).expect("graph6 is printable ascii")
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("graph \"{}\" {{\n", self.family_label.replace('"', "'"));
        for v in 0..self.order() as u32 {
            let id = self.grid.vertex(v);
            out.push_str(&format!("  {v} [label=\"{},{}\"];\n", id.i, id.j));
        }
        for (u, w, class) in self.edges() {
            let color = match class {
                EdgeClass::Ring => "black",
                EdgeClass::Link => "red",
                EdgeClass::Jump => "blue",
            };
            out.push_str(&format!(
                "  {u} -- {w} [class={}, color={color}];\n",
                class.as_str()
            ));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_edge_list(&self) -> EdgeListJson {
        EdgeListJson {
            m: self.grid.m,
            n: self.grid.n,
            family_label: self.family_label.clone(),
            edges: self.edges(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_edge_list()).expect("edge list serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let parsed: EdgeListJson = serde_json::from_str(text)?;
        Self::from_edge_list(&parsed)
    }

    pub fn from_edge_list(list: &EdgeListJson) -> Result<Self, GraphError> {
        let grid = Grid::new(list.m, list.n);
        let mut ring_edges = Vec::new();
        let mut outside = Vec::new();
        for &(u, w, class) in &list.edges {
            match class {
                EdgeClass::Ring => ring_edges.push(edge(u, w)),
                _ => outside.push((u, w, class)),
            }
        }
        let graph = Self::from_outside_edges(grid, list.family_label.clone(), outside)?;
        ring_edges.sort_unstable();
        let expected: Vec<Edge> = graph
            .edges()
            .into_iter()
            .filter(|e| e.2 == EdgeClass::Ring)
            .map(|(u, w, _)| (u, w))
            .collect();
        if ring_edges != expected {
            return Err(GraphError::Malformed(
                "ring edges do not form the standard rings".into(),
            ));
        }
        Ok(graph)
    }

    /// Edge counts per class.
    pub fn class_counts(&self) -> BTreeMap<EdgeClass, usize> {
        let mut counts = BTreeMap::new();
        for (_, _, c) in self.edges() {
            *counts.entry(c).or_insert(0) += 1;
        }
        counts
    }

    /// The canonical labelling pattern of vertices `v_{0,j}`: ring index of each outside neighbour.
    pub fn outside_rings_of_ring(&self, i: u32) -> Vec<u32> {
        self.grid
            .ring(i)
            .map(|v| self.grid.ring_of(self.outside(v)))
            .collect()
    }
}

/// Classes an outside edge between rings `ru` and `rv` may carry.
fn outside_class_between(grid: Grid, ru: u32, rv: u32) -> Option<Vec<EdgeClass>> {
    let m = grid.m;
    let (lo, hi) = if ru < rv { (ru, rv) } else { (rv, ru) };
    let mut classes = Vec::new();
    if hi == lo + 1 {
        classes.push(EdgeClass::Link);
    }
    if lo == 0 && hi == m - 1 {
        classes.push(EdgeClass::Jump);
    }
    (!classes.is_empty()).then_some(classes)
}

fn graph6_size_header(order: usize) -> Vec<u8> {
    if order <= 62 {
        vec![order as u8 + 63]
    } else if order <= 258_047 {
        vec![
            126,
            ((order >> 12) & 63) as u8 + 63,
            ((order >> 6) & 63) as u8 + 63,
            (order & 63) as u8 + 63,
        ]
    } else {
        let mut out = vec![126, 126];
        for shift in (0..6).rev() {
            out.push(((order >> (6 * shift)) & 63) as u8 + 63);
        }
        out
    }
}

/// On-disk edge list: `{"m", "n", "family_label", "edges": [[u, v, class], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeListJson {
    pub m: u32,
    pub n: u32,
    pub family_label: String,
    pub edges: Vec<(u32, u32, EdgeClass)>,
}
