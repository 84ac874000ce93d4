use bcq::analysis::*;
use bcq::automorphisms::{formula_gens, is_automorphism};
use bcq::constructions::*;
use bcq::graph_core::{EdgeClass, FactorGraph, Grid};
use bcq::perm_group::{PermGroup, DEFAULT_BOUND};

fn params(m: i64, n: i64, a: i64, b: i64, l: i64) -> XbParams {
    XbParams::new(m, n, a, b, l).unwrap()
}

/// Three 4-rings with `v_{i,2k} ~ v_{i+1,2k+1}`: every even vertex points forward.
fn alternating_fixture() -> FactorGraph {
    let grid = Grid::new(3, 4);
    let edges = (0..3i64).flat_map(|i| {
        (0..2i64).map(move |k| {
            let class = if i == 2 {
                EdgeClass::Jump
            } else {
                EdgeClass::Link
            };
            (grid.v(i, 2 * k), grid.v(i + 1, 2 * k + 1), class)
        })
    });
    FactorGraph::from_outside_edges(grid, "alternating", edges).unwrap()
}

#[test]
fn quotient_kinds() {
    let g = alternating_fixture();
    assert!(quotient_graph(&g).is_cycle());
    assert_eq!(
        classify_quotient_type(&g).unwrap().kind,
        QuotientKind::Alternating
    );
    for (m, n, a, b, l) in [(5, 12, 1, 8, 7), (3, 12, 1, 4, 10), (4, 8, 1, 4, 6)] {
        let g = build_xb(&params(m, n, a, b, l)).unwrap();
        let q = classify_quotient_type(&g).unwrap();
        assert_eq!(q.kind, QuotientKind::Bialternating);
        assert_eq!(q.evidence[1], 1);
    }
}

#[test]
fn two_rings_have_no_cycle_quotient() {
    let grid = Grid::new(2, 4);
    let edges = (0..4i64).map(|j| (grid.v(0, j), grid.v(1, j), EdgeClass::Link));
    let g = FactorGraph::from_outside_edges(grid, "prism", edges).unwrap();
    assert!(!quotient_graph(&g).is_cycle());
    assert!(matches!(
        classify_quotient_type(&g),
        Err(AnalysisError::NotCycleQuotient)
    ));
}

#[test]
fn cayley_certificates_on_fixtures() {
    for (m, n, a, b, l) in [
        (5, 12, 1, 8, 7),
        (3, 12, 1, 4, 10),
        (3, 36, 1, 4, 22),
        (6, 8, 1, 4, 2),
    ] {
        let p = params(m, n, a, b, l);
        let g = build_xb(&p).unwrap();
        let group = PermGroup::close(g.order(), &formula_gens(&p), DEFAULT_BOUND).unwrap();
        let cert = cayley_certificate(&g, &group).unwrap();
        assert_eq!(cert.involutions.len(), 3);
        assert!(cert
            .involutions
            .iter()
            .all(|s| s.is_involution() && is_automorphism(&g, s)));
    }
}

#[test]
fn cayley_rejects_non_regular_groups() {
    let g = build_xb(&params(3, 12, 1, 4, 10)).unwrap();
    let aut = oracle_group(&g, 512).unwrap();
    assert!(matches!(
        cayley_certificate(&g, &aut),
        Err(AnalysisError::NotRegular)
    ));
}

#[test]
fn edge_orbits_of_small_fixtures() {
    let g = build_xb(&params(5, 12, 1, 8, 7)).unwrap();
    let orbits = edge_orbit_report(&g, 512).unwrap();
    let sizes: Vec<usize> = orbits.iter().map(|o| o.size).collect();
    assert_eq!(sizes.iter().sum::<usize>(), 90);
    assert!(orbits
        .iter()
        .all(|o| o.cycles.len() == ORBIT_CYCLE_LENGTHS.len()));

    // the extra automorphism swaps ring edges with outside edges
    let g = build_xb(&params(3, 12, 1, 4, 10)).unwrap();
    let orbits = edge_orbit_report(&g, 512).unwrap();
    assert_eq!(orbits.len(), 2);
    assert!(orbits.iter().any(|o| o.classes.len() > 1));
}

#[test]
fn coloring_partitions_the_edges() {
    let g = build_xb1(3).unwrap();
    let colors = edge_coloring(&g);
    assert_eq!(colors.len(), 36);
    for color in [EdgeColor::Green, EdgeColor::Red, EdgeColor::Blue] {
        let mut touched = vec![0; g.order()];
        for &(u, v, c) in &colors {
            if c == color {
                touched[u as usize] += 1;
                touched[v as usize] += 1;
            }
        }
        assert!(
            touched.iter().all(|&t| t == 1),
            "{color:?} is a perfect matching"
        );
    }
    let red = colors.iter().filter(|c| c.2 == EdgeColor::Red).count();
    assert_eq!(
        red,
        g.class_counts()
            .iter()
            .filter(|(c, _)| **c != EdgeClass::Ring)
            .map(|(_, k)| k)
            .sum::<usize>()
    );
}

#[test]
fn green_deletion_leaves_octagons() {
    for m in [3u32, 6] {
        let g = build_xb1(m).unwrap();
        let aut = oracle_group(&g, 512).unwrap();
        assert_eq!(
            green_deletion_cycles(&g, &aut).unwrap(),
            vec![2 * m as usize; 4]
        );
    }
}

#[test]
fn eta_appears_exactly_at_n_equals_4m() {
    for m in [3u32, 5] {
        let r = eta_exception_check(m, 512).unwrap();
        assert!(r.exceptional);
        assert_eq!(r.stabilizer_order, 2);
        assert!(!r.c_invariant);
        let eta = r.eta.expect("eta exists");
        assert!(eta.is_involution());
    }
    assert!(matches!(
        eta_exception_check(4, 512),
        Err(AnalysisError::EvenM(4))
    ));

    let generic = odd_even_report(&params(3, 36, 1, 4, 22), 512).unwrap();
    assert!(!generic.exceptional);
    assert_eq!(generic.aut_order, 108);
    assert_eq!(generic.stabilizer_order, 1);
    assert!(generic.c_invariant);
    assert!(generic.eta.is_none());
}

#[test]
fn odd_even_tuples_in_survey_range() {
    let mut seen = 0;
    for m in [3i64, 5] {
        for n in [8i64, 12, 16, 20] {
            for b in 0..n {
                for l in (0..n).step_by(2) {
                    let c = classify_theorem_case(m, n, 1, b, l);
                    if c.case != CaseKind::OddEven {
                        continue;
                    }
                    let r = odd_even_report(&params(m, n, 1, b, l), 512).unwrap();
                    assert_eq!(r.stabilizer_order > 1, r.exceptional, "{}", r.params);
                    assert_eq!(r.c_invariant, !r.exceptional, "{}", r.params);
                    seen += 1;
                }
            }
        }
    }
    assert!(seen > 0);
}

#[test]
fn ten_cycle_when_a_is_not_one() {
    let g = build_xb(&params(5, 12, 1, 8, 7)).unwrap();
    assert!(!ten_cycle_check(&g, 1));
    let g = build_xb(&params(3, 8, 5, 4, 3)).unwrap();
    assert!(ten_cycle_check(&g, 5));
}
