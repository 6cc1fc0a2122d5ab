use std::collections::BTreeMap;

use proptest::prelude::*;
use qmut::covering::{build_cyclic_cover, project};
use qmut::potential::cyclic_derivative_of_cycle;
use qmut::{
    canonical_form, fz_mutate_matrix, fz_mutate_quiver, is_isomorphic, minimal_cycles, skew_matrix,
    Arrow, Quiver,
};

/// Loop-free, 2-cycle-free quiver on `n` vertices from signed multiplicities
/// of the pairs `i < j`.
fn quiver_from(n: usize, mults: &[i8]) -> Quiver {
    let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut arrows = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let m = mults[k];
            k += 1;
            let (s, t) = if m > 0 { (i, j) } else { (j, i) };
            for r in 0..m.unsigned_abs() {
                arrows.push(Arrow::new(
                    format!("e{i}_{j}_{r}"),
                    vertices[s].clone(),
                    vertices[t].clone(),
                ));
            }
        }
    }
    Quiver::new(vertices, arrows).unwrap()
}

fn arb_quiver(max_n: usize) -> impl Strategy<Value = Quiver> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        let mult = prop_oneof![3 => Just(0i8), 2 => -1i8..=1, 1 => -3i8..=3];
        proptest::collection::vec(mult, pairs).prop_map(move |m| quiver_from(n, &m))
    })
}

fn arb_quiver_with_vertex(max_n: usize) -> impl Strategy<Value = (Quiver, usize)> {
    arb_quiver(max_n).prop_flat_map(|q| {
        let n = q.vertex_count();
        (Just(q), 0..n)
    })
}

fn relabel(q: &Quiver, perm: &[usize]) -> Quiver {
    let map: BTreeMap<String, String> = q
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), format!("w{}", perm[i])))
        .collect();
    q.relabel(&map).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn extracted_matrices_are_skew(q in arb_quiver(8)) {
        let m = skew_matrix(&q, q.vertices()).unwrap();
        prop_assert_eq!(m.entries().transpose(), -m.entries());
    }

    #[test]
    fn fz_is_an_involution((q, k) in arb_quiver_with_vertex(8)) {
        let v = q.vertices()[k].clone();
        let twice = fz_mutate_quiver(&fz_mutate_quiver(&q, &v).unwrap(), &v).unwrap();
        prop_assert_eq!(skew_matrix(&twice, q.vertices()).unwrap(), skew_matrix(&q, q.vertices()).unwrap());
    }

    #[test]
    fn quiver_and_matrix_mutation_agree((q, k) in arb_quiver_with_vertex(8)) {
        let v = q.vertices()[k].clone();
        let by_quiver = skew_matrix(&fz_mutate_quiver(&q, &v).unwrap(), q.vertices()).unwrap();
        let by_matrix = fz_mutate_matrix(&skew_matrix(&q, q.vertices()).unwrap(), k).unwrap();
        prop_assert_eq!(by_quiver, by_matrix);
    }

    #[test]
    fn canonical_form_is_relabeling_invariant(
        (q, perm) in arb_quiver(8).prop_flat_map(|q| {
            let n = q.vertex_count();
            (Just(q), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
    ) {
        let r = relabel(&q, &perm);
        prop_assert_eq!(canonical_form(&q), canonical_form(&r));
        prop_assert!(is_isomorphic(&q, &r).is_some());
    }

    #[test]
    fn canonical_form_decides_isomorphism(a in arb_quiver(5), b in arb_quiver(5)) {
        prop_assert_eq!(canonical_form(&a) == canonical_form(&b), is_isomorphic(&a, &b).is_some());
    }

    #[test]
    fn derivative_ignores_rotation(q in arb_quiver(6), shift in 0usize..8) {
        for c in minimal_cycles(&q) {
            let k = shift % c.len();
            let rotated: Vec<String> = c[k..].iter().chain(&c[..k]).cloned().collect();
            for a in &c {
                prop_assert_eq!(cyclic_derivative_of_cycle(&c, a), cyclic_derivative_of_cycle(&rotated, a));
            }
        }
    }

    #[test]
    fn covers_are_locally_bijective(
        (q, ell, shifts) in arb_quiver(5).prop_flat_map(|q| {
            let m = q.arrows().len();
            (Just(q), 2usize..=4, proptest::collection::vec(0usize..4, m))
        })
    ) {
        let shifts: BTreeMap<String, usize> =
            q.arrows().iter().zip(&shifts).map(|(a, &s)| (a.id.clone(), s % ell)).collect();
        let cm = build_cyclic_cover(&q, ell, &shifts).unwrap();
        prop_assert!(cm.is_locally_bijective());
        prop_assert_eq!(cm.cover.vertex_count(), ell * q.vertex_count());
        prop_assert_eq!(cm.cover.arrows().len(), ell * q.arrows().len());
        let back = project(&cm, &cm.cover).unwrap();
        prop_assert_eq!(skew_matrix(&back, q.vertices()).unwrap(), skew_matrix(&q, q.vertices()).unwrap());
    }
}
