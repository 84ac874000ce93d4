//! The named automorphisms, built from their coordinate formulas as image
//! arrays and certified against the edge set.

use thiserror::Error;

use crate::constructions::{build_n8, N8Kind, XbParams};
use crate::graph_core::{EdgeClass, FactorGraph, Grid};
use crate::perm::Perm;

#[derive(Debug, Error)]
pub enum AutError {
    #[error("alpha is undefined for l odd and m even")]
    AlphaParity,
    #[error("beta is undefined for l odd")]
    BetaParity,
    #[error("{0}: image slot written twice or left empty")]
    Transcription(String),
    #[error("{label} is not an automorphism: edge {u}-{v} ({class}) maps to a non-edge")]
    NotAutomorphism {
        label: String,
        u: String,
        v: String,
        class: &'static str,
    },
    #[error("rho = alpha.gamma does not act as the 2-step rotation on V_0")]
    RhoMismatch,
    #[error("no ring-preserving extension of the seed rotation exists")]
    NoExtension,
    #[error("{0}")]
    Construction(String),
}

/// Fills an image array slot by slot, refusing double writes.
struct SlotWriter {
    label: String,
    images: Vec<u32>,
}

impl SlotWriter {
    fn new(label: &str, degree: usize) -> Self {
        SlotWriter {
            label: label.into(),
            images: vec![u32::MAX; degree],
        }
    }

    fn set(&mut self, from: u32, to: u32) -> Result<(), AutError> {
        let slot = &mut self.images[from as usize];
        if *slot != u32::MAX {
            return Err(AutError::Transcription(self.label.clone()));
        }
        *slot = to;
        Ok(())
    }

    fn finish(self) -> Result<Perm, AutError> {
        if self.images.contains(&u32::MAX) {
            return Err(AutError::Transcription(self.label));
        }
        Perm::from_images(self.label.clone(), self.images)
            .map_err(|_| AutError::Transcription(self.label))
    }
}

/// `gamma`: shifts `V_i` to `V_{i+1}` by two steps; `V_{m-1}` wraps to
/// `V_0` by a rotation (`l` even) or a reflection (`l` odd).
pub fn gamma_of(p: &XbParams) -> Perm {
    gamma_with(p.grid(), p.l as i64)
}

/// `gamma` on an arbitrary grid with wrap parameter `l`.
pub fn gamma_with(grid: Grid, l: i64) -> Perm {
    let (m, n) = (grid.m as i64, grid.n as i64);
    let mut images = vec![0u32; grid.order()];
    for i in 0..m {
        for j in 0..n {
            images[grid.v(i, j) as usize] = if i < m - 1 {
                grid.v(i + 1, j + 2)
            } else if l % 2 == 0 {
                grid.v(0, l + j - 2 * (m - 2))
            } else {
                grid.v(0, l - j + 2 * (m - 2))
            };
        }
    }
    Perm::from_images("gamma", images).expect("gamma is a bijection")
}

/// `alpha`: swaps `V_0` and `V_1` pointwise and pairs `V_{m-k}` with
/// `V_{k+1}` for `1 <= k <= m-2`.
pub fn alpha_of(p: &XbParams) -> Result<Perm, AutError> {
    if !p.l_even() && p.m_even() {
        return Err(AutError::AlphaParity);
    }
    let grid = p.grid();
    let (m, n, l, b) = (p.m as i64, p.n as i64, p.l as i64, p.b as i64);
    let mut w = SlotWriter::new("alpha", grid.order());
    for j in 0..n {
        w.set(grid.v(0, j), grid.v(1, j))?;
        w.set(grid.v(1, j), grid.v(0, j))?;
    }
    for k in 1..=m - 2 {
        let (i, eps) = if k % 2 == 0 {
            (k / 2, 0)
        } else {
            ((k + 1) / 2, 1)
        };
        let s = m - k;
        for t in 0..n {
            let target = if p.l_even() {
                l + 2 + 2 * eps - i * b + t
            } else {
                l + 4 * i + 2 * (eps - 1) - t
            };
            w.set(grid.v(s, 2 * s + t), grid.v(k + 1, target))?;
        }
    }
    w.finish()
}

/// `beta`: a ring-preserving reflection, defined when `l` is even.
pub fn beta_of(p: &XbParams) -> Result<Perm, AutError> {
    if !p.l_even() {
        return Err(AutError::BetaParity);
    }
    let grid = p.grid();
    let (m, n, a, b) = (p.m as i64, p.n as i64, p.a as i64, p.b as i64);
    let mut images = vec![0u32; grid.order()];
    for r in 0..m {
        for j in 0..n {
            let target = if p.m_even() {
                let (i, eps) = (r / 2, r % 2);
                eps * (a - 1) + 1 + i * (4 - b) - j
            } else {
                1 - j
            };
            images[grid.v(r, j) as usize] = grid.v(r, target);
        }
    }
    Ok(Perm::from_images("beta", images).expect("beta is a bijection"))
}

/// `rho = alpha . gamma` (gamma first), checked to rotate `V_0` by two.
pub fn rho_of(g: &FactorGraph, alpha: &Perm, gamma: &Perm) -> Result<Perm, AutError> {
    let rho = gamma.then(alpha).with_label("rho");
    let grid = g.grid();
    let rotates = (0..grid.n as i64).all(|j| rho.apply(grid.v(0, j)) == grid.v(0, j + 2));
    if !rotates {
        return Err(AutError::RhoMismatch);
    }
    certify(g, &rho)?;
    Ok(rho)
}

/// `{gamma, phi0, phi1, alpha}` for `X_b^1(m)` or `X_b^2(m)`, each certified.
pub fn n8_exceptional_gens(kind: N8Kind, m: u32) -> Result<Vec<Perm>, AutError> {
    let g = build_n8(kind, m).map_err(|e| AutError::Construction(e.to_string()))?;
    let grid = g.grid();
    let gamma = gamma_with(grid, 6);
    let phi0 = extend_c_preserving(&g, 0, 1, 4)?.with_label("phi0");
    let phi1 = extend_c_preserving(&g, 1, 1, 4)?.with_label("phi1");
    let alpha = n8_alpha(kind, grid)?;
    let gens = vec![gamma, phi0, phi1, alpha];
    for p in &gens {
        certify(&g, p)?;
    }
    Ok(gens)
}

fn n8_alpha(kind: N8Kind, grid: Grid) -> Result<Perm, AutError> {
    let m = grid.m as i64;
    let m0 = m / 3;
    let mut w = SlotWriter::new("alpha", grid.order());
    for j in 0..8 {
        w.set(grid.v(0, j), grid.v(1, j))?;
        w.set(grid.v(1, j), grid.v(0, j))?;
    }
    for i in 1..=m0 {
        for eps in 0..3 {
            let k = 3 * i - eps;
            if !(1..=m - 2).contains(&k) {
                continue;
            }
            for j in 0..8 {
                let image = match (eps, kind) {
                    (0 | 1, _) => grid.v(3 * i + 1 - eps, 2 * m0 + 4 * i + j),
                    (_, N8Kind::Xb1) => grid.v(3 * i - 1, 1 - 2 * m0 - j),
                    (_, N8Kind::Xb2) => grid.v(3 * i - 1, 5 - 2 * m0 - j),
                };
                w.set(grid.v(m - k, j), image)?;
            }
        }
    }
    w.finish()
}

/// Extends the ring map `v_{r,j} -> v_{r, s*j + t}` on `V_r` to an
/// automorphism preserving every ring setwise, by propagating through
/// `phi(N(v)) = N(phi(v))` and solving a dihedral map on each new ring.
pub fn extend_c_preserving(g: &FactorGraph, r: u32, s: i64, t: i64) -> Result<Perm, AutError> {
    let grid = g.grid();
    let n = grid.n as i64;
    // ring -> (target ring, sign, shift)
    let mut ring_map: Vec<Option<(u32, i64, i64)>> = vec![None; grid.m as usize];
    ring_map[r as usize] = Some((r, s, t));
    let mut queue = vec![r];
    while let Some(ring) = queue.pop() {
        let (tr, s, t) = ring_map[ring as usize].expect("queued rings are mapped");
        let image = |j: i64| grid.v(tr as i64, s * j + t);
        // constraints on neighbouring rings, grouped by ring
        let mut constraints: Vec<(u32, i64, u32, i64)> = Vec::new();
        for j in 0..n {
            let v = grid.v(ring as i64, j);
            let w = g.outside(v);
            let fw = g.outside(image(j));
            let (wv, fv) = (grid.vertex(w), grid.vertex(fw));
            constraints.push((wv.i, wv.j as i64, fv.i, fv.j as i64));
        }
        for &(wr, wj, fr, fj) in &constraints {
            match ring_map[wr as usize] {
                Some((tr2, s2, t2)) => {
                    if tr2 != fr || (s2 * wj + t2).rem_euclid(n) != fj {
                        return Err(AutError::NoExtension);
                    }
                }
                None => {
                    let same: Vec<(i64, i64)> = constraints
                        .iter()
                        .filter(|c| c.0 == wr)
                        .map(|c| if c.2 != fr { (-1, -1) } else { (c.1, c.3) })
                        .collect();
                    if same.iter().any(|&(x, _)| x < 0) {
                        return Err(AutError::NoExtension);
                    }
                    let map = solve_dihedral(&same, n).ok_or(AutError::NoExtension)?;
                    ring_map[wr as usize] = Some((fr, map.0, map.1));
                    queue.push(wr);
                }
            }
        }
    }
    let mut w = SlotWriter::new("phi", grid.order());
    for (ring, map) in ring_map.iter().enumerate() {
        let (tr, s, t) = map.ok_or(AutError::NoExtension)?;
        for j in 0..n {
            w.set(grid.v(ring as i64, j), grid.v(tr as i64, s * j + t))
                .map_err(|_| AutError::NoExtension)?;
        }
    }
    let phi = w.finish().map_err(|_| AutError::NoExtension)?;
    certify(g, &phi).map_err(|_| AutError::NoExtension)?;
    Ok(phi)
}

/// The unique `j -> s*j + t` (`s = +-1`) consistent with every pair, if any.
fn solve_dihedral(pairs: &[(i64, i64)], n: i64) -> Option<(i64, i64)> {
    let mut found = None;
    for s in [1, -1] {
        let (x, y) = pairs[0];
        let t = (y - s * x).rem_euclid(n);
        if pairs
            .iter()
            .all(|&(x, y)| (s * x + t - y).rem_euclid(n) == 0)
        {
            if found.is_some() {
                // ambiguous: constraints do not pin down the reflection
                return None;
            }
            found = Some((s, t));
        }
    }
    found
}

/// First edge whose image is not an edge, if any.
pub fn first_violation(g: &FactorGraph, p: &Perm) -> Option<(u32, u32, EdgeClass)> {
    assert_eq!(p.degree(), g.order(), "degree mismatch");
    g.edges()
        .into_iter()
        .find(|&(u, v, _)| !g.is_adjacent(p.apply(u), p.apply(v)))
}

pub fn is_automorphism(g: &FactorGraph, p: &Perm) -> bool {
    first_violation(g, p).is_none()
}

/// `Ok` if `p` is an automorphism, otherwise the violating edge.
pub fn certify(g: &FactorGraph, p: &Perm) -> Result<(), AutError> {
    match first_violation(g, p) {
        None => Ok(()),
        Some((u, v, class)) => Err(AutError::NotAutomorphism {
            label: p.label.clone(),
            u: g.grid().vertex(u).to_string(),
            v: g.grid().vertex(v).to_string(),
            class: class.as_str(),
        }),
    }
}

/// `p(N(v)) = N(p(v))` for every vertex.
pub fn commutes_with_outside(g: &FactorGraph, p: &Perm) -> bool {
    (0..g.order() as u32).all(|v| p.apply(g.outside(v)) == g.outside(p.apply(v)))
}

/// Formula generators for an `X_b` tuple: `gamma`, `alpha` when defined,
/// and `beta` when `l` is even.
pub fn formula_gens(p: &XbParams) -> Vec<Perm> {
    let mut gens = vec![gamma_of(p)];
    if let Ok(a) = alpha_of(p) {
        gens.push(a);
    }
    if let Ok(b) = beta_of(p) {
        gens.push(b);
    }
    gens
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{alpha_condition, build_xb, gamma_condition};

    fn p(m: i64, n: i64, a: i64, b: i64, l: i64) -> XbParams {
        XbParams::new(m, n, a, b, l).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let q = p(5, 12, 1, 8, 7);
        let grid = q.grid();
        let gamma = gamma_of(&q);
        assert_eq!(gamma.apply(grid.v(0, 0)), grid.v(1, 2));
        assert_eq!(gamma.apply(grid.v(4, 6)), grid.v(0, 7));
        let q2 = p(3, 12, 1, 4, 2);
        assert!(is_automorphism(&build_xb(&q2).unwrap(), &gamma_of(&q2)));
    }

    #[test]
    fn gamma_failure_reports_jump() {
        let q = p(3, 12, 1, 4, 3);
        let g = build_xb(&q).unwrap();
        let (_, _, class) = first_violation(&g, &gamma_of(&q)).unwrap();
        assert_eq!(class, EdgeClass::Jump);
    }

    #[test]
    fn alpha_examples() {
        let q = p(5, 12, 1, 8, 7);
        let grid = q.grid();
        let alpha = alpha_of(&q).unwrap();
        assert_eq!(alpha.apply(grid.v(0, 0)), grid.v(1, 0));
        assert!(alpha.pow(2).is_identity());
        for j in 0..12 {
            assert_eq!(alpha.apply(grid.v(3, 6 + j)), grid.v(3, 9 - j));
            assert_eq!(alpha.apply(grid.v(4, 8 + j)), grid.v(2, 11 - j));
        }
        let q2 = p(4, 8, 1, 4, 6);
        assert!(is_automorphism(
            &build_xb(&q2).unwrap(),
            &alpha_of(&q2).unwrap()
        ));
        assert!(matches!(
            alpha_of(&p(4, 12, 1, 8, 7)),
            Err(AutError::AlphaParity)
        ));
    }

    #[test]
    fn beta_examples() {
        let q = p(3, 12, 1, 4, 10);
        let beta = beta_of(&q).unwrap();
        assert_eq!(beta.apply(0), 1);
        let q2 = p(4, 8, 1, 4, 6);
        let grid = q2.grid();
        let beta2 = beta_of(&q2).unwrap();
        assert_eq!(beta2.apply(grid.v(2, 0)), grid.v(2, 1));
        assert!((0..grid.order() as u32).all(|v| grid.ring_of(beta2.apply(v)) == grid.ring_of(v)));
        assert!(is_automorphism(&build_xb(&q2).unwrap(), &beta2));
        assert!(beta_of(&p(5, 12, 1, 8, 7)).is_err());
    }

    #[test]
    fn rho_examples() {
        let q = p(5, 12, 1, 8, 7);
        let g = build_xb(&q).unwrap();
        let grid = g.grid();
        let rho = rho_of(&g, &alpha_of(&q).unwrap(), &gamma_of(&q)).unwrap();
        assert_eq!(rho.apply(grid.v(0, 0)), grid.v(0, 2));
        assert_eq!(rho.pow(2).apply(grid.v(1, 0)), grid.v(1, 8));
        let half = rho.pow(6);
        assert!(grid.ring(0).all(|v| half.apply(v) == v));
    }

    #[test]
    fn n8_generators_certify() {
        for kind in [N8Kind::Xb1, N8Kind::Xb2] {
            for m in [3, 6, 9] {
                let gens = n8_exceptional_gens(kind, m).unwrap();
                let g = build_n8(kind, m).unwrap();
                let grid = g.grid();
                let alpha = &gens[3];
                assert!(alpha.pow(2).is_identity());
                assert!(gens.iter().all(|p| commutes_with_outside(&g, p)));
                let phi0 = &gens[1];
                assert!((0..8).all(|j| phi0.apply(grid.v(0, j)) == grid.v(0, j + 4)));
                let on_v1: Vec<u32> = (0..8).map(|j| phi0.apply(grid.v(1, j)) - 8).collect();
                let d = (on_v1[1] + 8 - on_v1[0]) % 8;
                assert_eq!(d, 7, "phi0 reflects V_1 for {kind:?} m={m}");
            }
        }
    }

    #[test]
    fn n8_alpha_small_case() {
        let gens = n8_exceptional_gens(N8Kind::Xb1, 3).unwrap();
        let grid = Grid::new(3, 8);
        for j in 0..8 {
            assert_eq!(gens[3].apply(grid.v(1, j)), grid.v(0, j));
            assert_eq!(gens[3].apply(grid.v(2, j)), grid.v(2, -1 - j));
        }
        let gens2 = n8_exceptional_gens(N8Kind::Xb2, 3).unwrap();
        for j in 0..8 {
            assert_eq!(gens2[3].apply(grid.v(2, j)), grid.v(2, 3 - j));
        }
    }

    #[test]
    fn generator_conditions_on_small_range() {
        for (m, n, a, b, l) in [
            (5, 12, 1, 8, 7),
            (3, 12, 1, 4, 10),
            (4, 8, 1, 4, 6),
            (3, 12, 1, 4, 3),
        ] {
            let q = p(m, n, a, b, l);
            let g = build_xb(&q).unwrap();
            assert_eq!(is_automorphism(&g, &gamma_of(&q)), gamma_condition(&q));
            if let Ok(alpha) = alpha_of(&q) {
                if gamma_condition(&q) {
                    assert_eq!(is_automorphism(&g, &alpha), alpha_condition(&q));
                }
            }
        }
    }
}
