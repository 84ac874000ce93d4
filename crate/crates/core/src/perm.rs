//! Permutations of the flat vertex set `[0, mn)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("image array is not a bijection on [0, {0})")]
    NotBijection(usize),
    #[error("degree mismatch: {0} vs {1}")]
    Degree(usize, usize),
}

/// A permutation stored as its image array: `images[v]` is the image of `v`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Perm {
    pub label: String,
    images: Vec<u32>,
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm({:?}: {:?})", self.label, self.images)
    }
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            label: "id".into(),
            images: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(label: impl Into<String>, images: Vec<u32>) -> Result<Self, PermError> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &x in &images {
            if x as usize >= degree || std::mem::replace(&mut seen[x as usize], true) {
                return Err(PermError::NotBijection(degree));
            }
        }
        Ok(Perm {
            label: label.into(),
            images,
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn into_images(self) -> Vec<u32> {
        self.images
    }

    #[inline]
    pub fn apply(&self, v: u32) -> u32 {
        self.images[v as usize]
    }

    /// `self` followed by `other`, i.e. `v -> other(self(v))`.
    ///
    /// In the usual right-to-left product notation this is `other * self`.
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Perm {
            label: format!("{}.{}", other.label, self.label),
            images: self
                .images
                .iter()
                .map(|&x| other.images[x as usize])
                .collect(),
        }
    }

    /// Right-to-left product `self * other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        other.then(self)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.degree()];
        for (v, &x) in self.images.iter().enumerate() {
            inv[x as usize] = v as u32;
        }
        Perm {
            label: format!("{}^-1", self.label),
            images: inv,
        }
    }

    pub fn pow(&self, k: u32) -> Perm {
        let mut out = Perm::identity(self.degree());
        for _ in 0..k {
            out = out.then(self);
        }
        out.with_label(format!("{}^{k}", self.label))
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(v, &x)| v as u32 == x)
    }

    pub fn is_involution(&self) -> bool {
        !self.is_identity()
            && self
                .images
                .iter()
                .enumerate()
                .all(|(v, &x)| self.images[x as usize] == v as u32)
    }

    /// Conjugate by a relabelling `pi`: the map `pi * self * pi^-1`.
    pub fn conjugate_by(&self, pi: &Perm) -> Perm {
        let mut out = vec![0u32; self.degree()];
        for v in 0..self.degree() {
            out[pi.images[v] as usize] = pi.images[self.images[v] as usize];
        }
        Perm {
            label: self.label.clone(),
            images: out,
        }
    }

    /// Same underlying map, ignoring labels.
    pub fn same_map(&self, other: &Perm) -> bool {
        self.images == other.images
    }
}
