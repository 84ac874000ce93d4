use bcq::analysis::oracle_group;
use bcq::aut_search::full_aut;
use bcq::automorphisms::*;
use bcq::constructions::*;
use bcq::perm_group::{PermGroup, DEFAULT_BOUND};
use bcq::verify::relabel_check;

fn params(m: i64, n: i64, a: i64, b: i64, l: i64) -> XbParams {
    XbParams::new(m, n, a, b, l).unwrap()
}

#[test]
fn formula_groups_have_expected_orders() {
    let p = params(5, 12, 1, 8, 7);
    let g = build_xb(&p).unwrap();
    let group =
        PermGroup::close(60, &[alpha_of(&p).unwrap(), gamma_of(&p)], DEFAULT_BOUND).unwrap();
    assert_eq!(group.order(), 60);
    assert!(group.is_regular());
    assert_eq!(
        group.setwise_stabilizer_order(&g.grid().ring(0).collect::<Vec<_>>()),
        12
    );
    assert!(group.preserves_partition(&g.grid().rings(), 7));

    let q = params(3, 12, 1, 4, 10);
    let group = PermGroup::close(36, &formula_gens(&q), DEFAULT_BOUND).unwrap();
    assert_eq!(group.order(), 36);
    assert!(group.is_regular());
}

#[test]
fn ring_stabilizer_is_dihedral_of_order_n() {
    for (m, n, a, b, l) in [
        (5, 12, 1, 8, 7),
        (3, 12, 1, 4, 10),
        (4, 8, 1, 4, 6),
        (3, 36, 1, 4, 22),
    ] {
        let p = params(m, n, a, b, l);
        let g = build_xb(&p).unwrap();
        let group = PermGroup::close(g.order(), &formula_gens(&p), DEFAULT_BOUND).unwrap();
        assert!(group.is_regular(), "{p}");
        let v0: Vec<u32> = g.grid().ring(0).collect();
        assert_eq!(group.setwise_stabilizer_order(&v0), n as usize, "{p}");
    }
}

#[test]
fn exceptional_subgroup_without_alpha_has_two_orbits() {
    for kind in [N8Kind::Xb1, N8Kind::Xb2] {
        for m in [3, 6] {
            let gens = n8_exceptional_gens(kind, m).unwrap();
            let degree = 8 * m as usize;
            let three = PermGroup::close(degree, &gens[..3], DEFAULT_BOUND).unwrap();
            assert!(!three.is_transitive());
            assert_eq!(three.orbits().len(), 2);
            let all = PermGroup::close(degree, &gens, DEFAULT_BOUND).unwrap();
            assert!(all.is_regular());
        }
    }
}

#[test]
fn oracle_contains_formula_automorphisms() {
    for (m, n, a, b, l) in [
        (5, 12, 1, 8, 7),
        (3, 12, 1, 4, 10),
        (4, 8, 1, 4, 6),
        (3, 12, 1, 4, 2),
    ] {
        let p = params(m, n, a, b, l);
        let g = build_xb(&p).unwrap();
        let aut = oracle_group(&g, 512).unwrap();
        for gen in formula_gens(&p).iter().filter(|q| is_automorphism(&g, q)) {
            assert!(aut.contains(gen), "{p} {}", gen.label);
        }
    }
    for kind in [N8Kind::Xb1, N8Kind::Xb2] {
        let g = build_n8(kind, 6).unwrap();
        let aut = oracle_group(&g, 512).unwrap();
        assert!(n8_exceptional_gens(kind, 6)
            .unwrap()
            .iter()
            .all(|q| aut.contains(q)));
    }
}

#[test]
fn oracle_is_conjugation_consistent() {
    let fixtures = [
        build_xb(&params(3, 12, 1, 4, 10)).unwrap(),
        build_xb(&params(3, 8, 5, 4, 3)).unwrap(),
        build_xb1(3).unwrap(),
        build_mobius_or_prism(5, LadderKind::Prism).unwrap(),
    ];
    for g in &fixtures {
        let aut = oracle_group(g, 512).unwrap();
        for seed in 0..3 {
            assert!(
                relabel_check(g, &aut, seed, 512).unwrap(),
                "{}",
                g.family_label()
            );
        }
    }
}

#[test]
fn oracle_elements_form_a_group() {
    let g = build_xb(&params(3, 12, 1, 4, 10)).unwrap();
    let aut = full_aut(&g, 512).unwrap();
    let closed = PermGroup::close(g.order(), &aut.generators, DEFAULT_BOUND).unwrap();
    assert_eq!(closed.order(), aut.order());
    assert!(aut.elements.iter().all(|e| is_automorphism(&g, e)));
}

#[test]
fn arc_regularity() {
    let g = build_xb(&params(3, 8, 5, 4, 3)).unwrap();
    let aut = oracle_group(&g, 512).unwrap();
    assert_eq!(aut.order(), 144);
    assert!(aut.is_s_arc_regular(&g, 2));
    assert!(!aut.is_s_arc_regular(&g, 1));

    let p = params(5, 12, 1, 8, 7);
    let g = build_xb(&p).unwrap();
    let regular = PermGroup::close(60, &formula_gens(&p), DEFAULT_BOUND).unwrap();
    assert!(!regular.is_s_arc_regular(&g, 1));

    for m in 3..=6 {
        let prism = build_mobius_or_prism(m, LadderKind::Prism).unwrap();
        let aut = oracle_group(&prism, 512).unwrap();
        assert_eq!(aut.point_stabilizer_order(0), 2);
        assert_eq!(aut.order(), 8 * m as usize);
        assert!(!aut.is_s_arc_regular(&prism, 1));
        let ring_preserving = aut.block_preserving_subgroup(&prism.grid().rings());
        assert!(ring_preserving.is_transitive());
        assert!(ring_preserving.order() < aut.order());
    }
}

#[test]
fn alpha_is_an_involution_whenever_it_is_an_automorphism() {
    let mut checked = 0;
    for m in 3..=6i64 {
        for n in [8i64, 12, 16, 20] {
            for a in 0..n {
                for b in 0..n {
                    for l in 0..n {
                        let p = params(m, n, a, b, l);
                        if !validate_xb(&p).is_empty() {
                            continue;
                        }
                        let Ok(alpha) = alpha_of(&p) else { continue };
                        if is_automorphism(&build_xb(&p).unwrap(), &alpha) {
                            assert!(alpha.is_involution(), "{p}");
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 0);
}
