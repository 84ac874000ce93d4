//! Permutation groups by full materialization.

use std::collections::{HashSet, VecDeque};

use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph_core::FactorGraph;
use crate::perm::Perm;

pub const DEFAULT_BOUND: usize = 1_000_000;

/// Random elements checked on top of the generators in [`PermGroup::preserves_partition`].
const PARTITION_SAMPLES: usize = 100;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order exceeds the bound {0}")]
    BoundExceeded(usize),
    #[error("generators have mixed degrees")]
    Degree,
}

/// A closed permutation group with all of its elements.
#[derive(Clone, Debug)]
pub struct PermGroup {
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    degree: usize,
}

impl PermGroup {
    /// Breadth-first closure of `gens`, in a deterministic element order.
    pub fn close(degree: usize, gens: &[Perm], bound: usize) -> Result<Self, GroupError> {
        if gens.iter().any(|g| g.degree() != degree) {
            return Err(GroupError::Degree);
        }
        let id = Perm::identity(degree);
        let mut seen: HashSet<Vec<u32>> = HashSet::from([id.images().to_vec()]);
        let mut elements = vec![id];
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            for g in gens {
                let next = elements[k].then(g);
                if seen.insert(next.images().to_vec()) {
                    if elements.len() >= bound {
                        return Err(GroupError::BoundExceeded(bound));
                    }
                    queue.push_back(elements.len());
                    elements.push(next.with_label(format!("e{}", elements.len())));
                }
            }
        }
        Ok(PermGroup {
            generators: gens.to_vec(),
            elements,
            degree,
        })
    }

    /// Wraps an element list already known to be a group.
    pub fn from_elements(degree: usize, generators: Vec<Perm>, elements: Vec<Perm>) -> Self {
        PermGroup {
            generators,
            elements,
            degree,
        }
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.elements.iter().any(|e| e.same_map(p))
    }

    /// Orbits on `[0, degree)`, each sorted, ordered by least element.
    pub fn orbits(&self) -> Vec<Vec<u32>> {
        let mut orbit_of = vec![usize::MAX; self.degree];
        let mut orbits = Vec::new();
        for start in 0..self.degree as u32 {
            if orbit_of[start as usize] != usize::MAX {
                continue;
            }
            let id = orbits.len();
            let mut orbit = vec![start];
            orbit_of[start as usize] = id;
            let mut k = 0;
            while k < orbit.len() {
                let v = orbit[k];
                k += 1;
                for e in self.elements.iter().chain(&self.generators) {
                    let w = e.apply(v);
                    if orbit_of[w as usize] == usize::MAX {
                        orbit_of[w as usize] = id;
                        orbit.push(w);
                    }
                }
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        orbits
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits().iter().map(Vec::len).collect()
    }

    pub fn is_transitive(&self) -> bool {
        self.degree > 0
            && self
                .elements
                .iter()
                .map(|e| e.apply(0))
                .collect::<HashSet<_>>()
                .len()
                == self.degree
    }

    pub fn is_regular(&self) -> bool {
        self.order() == self.degree && self.is_transitive()
    }

    /// Every element maps each block onto a block.
    ///
    /// Decided on the generators, then re-checked on random elements.
    pub fn preserves_partition(&self, blocks: &[Vec<u32>], seed: u64) -> bool {
        let mut block_of = vec![usize::MAX; self.degree];
        for (b, block) in blocks.iter().enumerate() {
            for &v in block {
                block_of[v as usize] = b;
            }
        }
        let maps_blocks = |p: &Perm| {
            blocks.iter().all(|block| {
                let target = block_of[p.apply(block[0]) as usize];
                block
                    .iter()
                    .all(|&v| block_of[p.apply(v) as usize] == target)
            })
        };
        if !self.generators.iter().all(maps_blocks) {
            return false;
        }
        let mut rng = StdRng::seed_from_u64(seed);
        (0..PARTITION_SAMPLES).all(|_| maps_blocks(&self.elements[rng.gen_range(0..self.order())]))
    }

    /// The subgroup of elements satisfying `keep`, with a greedy generating set.
    pub fn filter<F: Fn(&Perm) -> bool>(&self, keep: F) -> PermGroup {
        let elements: Vec<Perm> = self.elements.iter().filter(|e| keep(e)).cloned().collect();
        let mut generators: Vec<Perm> = Vec::new();
        let mut span: HashSet<Vec<u32>> =
            HashSet::from([Perm::identity(self.degree).into_images()]);
        for e in &elements {
            if span.contains(e.images()) {
                continue;
            }
            generators.push(e.clone());
            span = PermGroup::close(self.degree, &generators, elements.len() + 1)
                .expect("subgroup of a finite group")
                .elements
                .into_iter()
                .map(Perm::into_images)
                .collect();
        }
        PermGroup {
            generators,
            elements,
            degree: self.degree,
        }
    }

    /// Elements mapping every block onto a block.
    pub fn block_preserving_subgroup(&self, blocks: &[Vec<u32>]) -> PermGroup {
        let mut block_of = vec![usize::MAX; self.degree];
        for (b, block) in blocks.iter().enumerate() {
            for &v in block {
                block_of[v as usize] = b;
            }
        }
        self.filter(|p| {
            blocks.iter().all(|block| {
                let target = block_of[p.apply(block[0]) as usize];
                block
                    .iter()
                    .all(|&v| block_of[p.apply(v) as usize] == target)
            })
        })
    }

    pub fn setwise_stabilizer_order(&self, set: &[u32]) -> usize {
        let mut member = vec![false; self.degree];
        set.iter().for_each(|&v| member[v as usize] = true);
        self.elements
            .iter()
            .filter(|e| set.iter().all(|&v| member[e.apply(v) as usize]))
            .count()
    }

    pub fn point_stabilizer_order(&self, v: u32) -> usize {
        self.elements.iter().filter(|e| e.apply(v) == v).count()
    }

    pub fn point_stabilizer(&self, v: u32) -> PermGroup {
        self.filter(|e| e.apply(v) == v)
    }

    /// Sharply transitive on the `s`-arcs of `g` (`s` in `{1, 2}`).
    pub fn is_s_arc_regular(&self, g: &FactorGraph, s: usize) -> bool {
        assert!((1..=2).contains(&s), "s must be 1 or 2");
        let arcs = g.order() * 3 * if s == 2 { 2 } else { 1 };
        if self.order() != arcs {
            return false;
        }
        let base: Vec<u32> = {
            let a = g.neighbors(0)[0];
            if s == 1 {
                vec![0, a]
            } else {
                let c = g.neighbors(a).into_iter().find(|&x| x != 0).expect("cubic");
                vec![0, a, c]
            }
        };
        let images: HashSet<Vec<u32>> = self
            .elements
            .iter()
            .map(|e| base.iter().map(|&v| e.apply(v)).collect())
            .collect();
        images.len() == arcs
    }

    pub fn report(&self, reference: u32) -> GroupReport {
        GroupReport {
            generators: self.generators.clone(),
            order: self.order(),
            orbit_sizes: self.orbit_sizes(),
            point_stabilizer_order: self.point_stabilizer_order(reference),
        }
    }
}

/// Serializable summary of a group.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupReport {
    pub generators: Vec<Perm>,
    pub order: usize,
    pub orbit_sizes: Vec<usize>,
    pub point_stabilizer_order: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: u32) -> Perm {
        Perm::from_images("c", (0..n).map(|v| (v + 1) % n).collect()).unwrap()
    }

    fn flip(n: u32) -> Perm {
        Perm::from_images("f", (0..n).map(|v| (n - v) % n).collect()).unwrap()
    }

    #[test]
    fn trivial_and_dihedral() {
        let g = PermGroup::close(5, &[Perm::identity(5)], 10).unwrap();
        assert_eq!(g.order(), 1);
        let d = PermGroup::close(6, &[cycle(6), flip(6)], 100).unwrap();
        assert_eq!(d.order(), 12);
        assert!(d.is_transitive());
        assert!(!d.is_regular());
        assert_eq!(d.point_stabilizer_order(0), 2);
        assert_eq!(d.setwise_stabilizer_order(&[0, 1, 2, 3, 4, 5]), 12);
        assert_eq!(d.setwise_stabilizer_order(&[0, 3]), 4);
        let c = PermGroup::close(6, &[cycle(6)], 100).unwrap();
        assert!(c.is_regular());
    }

    #[test]
    fn bound_exceeded() {
        assert_eq!(
            PermGroup::close(6, &[cycle(6), flip(6)], 5).unwrap_err(),
            GroupError::BoundExceeded(5)
        );
    }

    #[test]
    fn deterministic() {
        let a = PermGroup::close(8, &[cycle(8), flip(8)], 100).unwrap();
        let b = PermGroup::close(8, &[cycle(8), flip(8)], 100).unwrap();
        let ia: Vec<_> = a.elements().iter().map(|e| e.images().to_vec()).collect();
        let ib: Vec<_> = b.elements().iter().map(|e| e.images().to_vec()).collect();
        assert_eq!(ia, ib);
    }

    #[test]
    fn partitions_and_filter() {
        let d = PermGroup::close(6, &[cycle(6), flip(6)], 100).unwrap();
        let pairs = vec![vec![0, 3], vec![1, 4], vec![2, 5]];
        assert!(d.preserves_partition(&pairs, 1));
        let halves = vec![vec![0, 1, 2], vec![3, 4, 5]];
        assert!(!d.preserves_partition(&halves, 1));
        let sub = d.block_preserving_subgroup(&halves);
        assert_eq!(sub.order(), 4);
        let regen = PermGroup::close(6, sub.generators(), 100).unwrap();
        assert_eq!(regen.order(), 4);
        assert_eq!(d.orbits(), vec![vec![0, 1, 2, 3, 4, 5]]);
    }
}
