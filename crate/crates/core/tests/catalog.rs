use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use qmut::catalog::{
    classify, closure_graph, e82_closure, e82_mutation_graph, gen_a3n3, gen_dnll, gen_e82,
    E82Letter, Family, TypeAAttachment,
};
use qmut::covering::mutate_at_vertex_via_cover;
use qmut::triangulation::{
    enumerate_triangulations, g_invariant_triangulations, quotient_quiver, triangulation_to_quiver,
};
use qmut::{canonical_form, Quiver};

/// Every type-A quiver on `k` vertices (up to isomorphism) with each of its
/// connecting vertices.
fn attachments(k: usize) -> Vec<TypeAAttachment> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in enumerate_triangulations(k + 3) {
        let q: Quiver = triangulation_to_quiver(&t);
        if !seen.insert(canonical_form(&q)) {
            continue;
        }
        for v in q.vertices() {
            if let Ok(a) = TypeAAttachment::new(q.clone(), v.clone()) {
                out.push(a);
            }
        }
    }
    out
}

#[test]
fn e82_closure_reproduces_mutation_graph() {
    let start = Instant::now();
    let steps = e82_closure().unwrap();
    let elapsed = start.elapsed();
    for s in &steps {
        assert!(
            s.to.is_some(),
            "{} variant {} at {} left the catalog",
            s.from,
            s.variant,
            s.vertex
        );
    }
    assert_eq!(closure_graph(&steps), e82_mutation_graph());
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
}

#[test]
fn e82_round_trip() {
    for l in E82Letter::ALL {
        assert_eq!(classify(&gen_e82(l).qp).unwrap().family, Family::E82(l));
    }
}

#[test]
fn a3n3_round_trip() {
    for k in 1..=4 {
        for att in attachments(k) {
            let e = gen_a3n3(&att).unwrap();
            assert_eq!(
                classify(&e.qp),
                Some(e.descriptor.clone()),
                "{:?}",
                e.qp.quiver
            );
            assert_eq!(e.descriptor.n, k);
        }
    }
}

#[test]
fn dnll_round_trip() {
    let small = [TypeAAttachment::point(), TypeAAttachment::path(2).unwrap()];
    for q in 1..=4usize {
        for ell in 2..=4 {
            for mask in 0..1u32 << q {
                for att in &small {
                    let stars: BTreeMap<usize, TypeAAttachment> = (1..=q)
                        .filter(|i| mask >> (i - 1) & 1 == 1)
                        .map(|i| (i, att.clone()))
                        .collect();
                    let Ok(e) = gen_dnll(q, ell, &stars) else {
                        continue;
                    };
                    assert_eq!(
                        classify(&e.qp),
                        Some(e.descriptor.clone()),
                        "q={q} ell={ell} mask={mask}"
                    );
                }
            }
        }
    }
}

#[test]
fn dnll_with_larger_attachments() {
    for att in attachments(3) {
        let stars = BTreeMap::from([(1, att.clone()), (3, att)]);
        let e = gen_dnll(3, 2, &stars).unwrap();
        assert_eq!(classify(&e.qp), Some(e.descriptor));
    }
}

#[test]
fn quotients_of_invariant_triangulations_are_a3n3() {
    for n in 1..=3 {
        for t in g_invariant_triangulations(n) {
            let qp = quotient_quiver(&t).unwrap();
            let d = classify(&qp).unwrap_or_else(|| panic!("{:?}", qp.quiver));
            assert_eq!((d.family, d.n), (Family::A3n3, n));
        }
    }
}

#[test]
fn loop_mutation_stays_in_a3n3() {
    for k in 1..=4 {
        for att in attachments(k) {
            let e = gen_a3n3(&att).unwrap();
            let out = mutate_at_vertex_via_cover(&e.qp, att.connecting(), &e.cover, None).unwrap();
            let d = classify(&out).unwrap_or_else(|| panic!("{:?}", out.quiver));
            assert_eq!((d.family, d.n), (Family::A3n3, k));
        }
    }
}

#[test]
fn dnll_mutations_at_the_centre_stay_in_family() {
    let stars = BTreeMap::from([(1, TypeAAttachment::point())]);
    // with ell = 2 the loop lifts to a 2-cycle, which the cover cannot mutate
    let e = gen_dnll(1, 2, &stars).unwrap();
    assert!(mutate_at_vertex_via_cover(&e.qp, "s1", &e.cover, None)
        .unwrap_err()
        .is_unsupported_mutation());
    for ell in 3..=4 {
        let e = gen_dnll(1, ell, &stars).unwrap();
        let out = mutate_at_vertex_via_cover(&e.qp, "s1", &e.cover, None).unwrap();
        assert_eq!(
            classify(&out).map(|d| d.family),
            Some(Family::Dnll),
            "ell={ell}"
        );
    }
}
