use std::collections::BTreeMap;

use qmut::covering::{
    build_cyclic_cover, fiber_shape, mutate_fiber, project, CoveringMap, FiberShape,
};
use qmut::cycle::{derive_cb_indices, mutate_cycle, mutate_cycles};
use qmut::fixtures;
use qmut::potential::QuiverWithPotential;
use qmut::{fz_mutate_quiver, is_isomorphic, mutate_at_vertex_via_cover, skew_matrix, CoverPreset};

#[test]
fn a9_base_gives_loop_and_reversed_triangle() {
    let f = fixtures::a9_base();
    let out = mutate_at_vertex_via_cover(&f.qp, "1", f.preset.as_ref().unwrap(), None).unwrap();
    assert!(is_isomorphic(&out.quiver, &f.expected).is_some());
    assert!(out.quiver.has_loop_at("1"));
    // the loop cubed survives in the projected potential
    assert!(out
        .potential
        .terms()
        .iter()
        .any(|t| t.cycle.len() == 3 && t.cycle.iter().all(|a| *a == t.cycle[0])));
}

#[test]
fn d6_base_returns_itself() {
    let f = fixtures::d6_base();
    let out = mutate_at_vertex_via_cover(&f.qp, "1", f.preset.as_ref().unwrap(), None).unwrap();
    assert!(is_isomorphic(&out.quiver, &f.expected).is_some());
}

#[test]
fn cover_of_a9_base_is_the_a9_quiver() {
    let base = fixtures::a9_base();
    let cm = CoveringMap::from_preset(&base.qp.quiver, base.preset.as_ref().unwrap()).unwrap();
    assert!(is_isomorphic(&cm.cover, &fixtures::a9().qp.quiver).is_some());
    assert!(cm.is_locally_bijective());
    let lifted = cm.lift_potential(&base.qp.potential).unwrap();
    assert_eq!(lifted.terms().len(), 4);
}

#[test]
fn projecting_the_mutated_a9_gives_the_base_result() {
    let base = fixtures::a9_base();
    let cm = CoveringMap::from_preset(&base.qp.quiver, base.preset.as_ref().unwrap()).unwrap();
    let a9 = fixtures::a9();
    // the a9 fixture is the cover with sheet names; map it onto the cover
    let map = is_isomorphic(&a9.qp.quiver, &cm.cover).unwrap();
    let spec = a9.spec.as_ref().unwrap();
    let renamed_q = a9.qp.quiver.relabel(&map).unwrap();
    let arrow_map: BTreeMap<String, String> = a9
        .qp
        .quiver
        .arrows()
        .iter()
        .map(|a| {
            let (s, t) = (&map[&a.source], &map[&a.target]);
            (
                a.id.clone(),
                cm.cover
                    .arrows()
                    .iter()
                    .find(|b| &b.source == s && &b.target == t)
                    .unwrap()
                    .id
                    .clone(),
            )
        })
        .collect();
    let spec = spec.renamed(|v| map[v].clone(), |a| arrow_map[a].clone());
    assert_eq!(
        skew_matrix(&renamed_q, cm.cover.vertices()).unwrap(),
        skew_matrix(&cm.cover, cm.cover.vertices()).unwrap()
    );
    let mutated = mutate_cycle(&cm.cover, &spec).unwrap();
    assert!(is_isomorphic(&project(&cm, &mutated).unwrap(), &base.expected).is_some());
}

#[test]
fn annotation_and_derivation_agree_on_the_fiber() {
    let base = fixtures::a9_base();
    let preset = base.preset.clone().unwrap();
    let (cm, derived) = mutate_fiber(&base.qp, "1", &preset, None).unwrap();
    let FiberShape::Cycles(cycles) = fiber_shape(&cm, "1").unwrap() else {
        panic!("expected a cycle fiber")
    };
    let lifted = QuiverWithPotential::new(
        cm.cover.clone(),
        cm.lift_potential(&base.qp.potential).unwrap(),
    )
    .unwrap();
    let spec = derive_cb_indices(&lifted, &cycles[0]).unwrap();
    let (_, annotated) = mutate_fiber(&base.qp, "1", &preset, Some(&spec)).unwrap();
    let order = cm.cover.vertices().to_vec();
    assert_eq!(
        skew_matrix(&derived, &order).unwrap(),
        skew_matrix(&annotated, &order).unwrap()
    );
}

#[test]
fn plain_vertex_through_cover_is_plain_fz() {
    // vertex 2 of the a9 base has no loop or 2-cycle: the cover agrees with FZ
    let base = fixtures::a9_base();
    let out =
        mutate_at_vertex_via_cover(&base.qp, "2", base.preset.as_ref().unwrap(), None).unwrap();
    let q = base.qp.quiver.without_arrows(&["alpha".to_string()].into());
    let fz = fz_mutate_quiver(&q, "2").unwrap();
    let loop_id = out
        .quiver
        .arrows()
        .iter()
        .find(|a| a.is_loop())
        .unwrap()
        .id
        .clone();
    let out_plain = out.quiver.without_arrows(&[loop_id].into());
    assert!(is_isomorphic(&out_plain, &fz).is_some());
}

#[test]
fn two_cycles_in_one_fiber_commute() {
    // shift 2 on a loop with ell = 6 splits the fiber into two 3-cycles
    let base = fixtures::a9_base();
    let shifts = BTreeMap::from([("alpha".to_string(), 2)]);
    let cm = build_cyclic_cover(&base.qp.quiver, 6, &shifts).unwrap();
    let FiberShape::Cycles(cycles) = fiber_shape(&cm, "1").unwrap() else {
        panic!("expected a cycle fiber")
    };
    assert_eq!(cycles.len(), 2);
    let lifted = QuiverWithPotential::new(
        cm.cover.clone(),
        cm.lift_potential(&base.qp.potential).unwrap(),
    )
    .unwrap();
    let specs: Vec<_> = cycles
        .iter()
        .map(|c| derive_cb_indices(&lifted, c).unwrap())
        .collect();
    let forward = mutate_cycles(&cm.cover, &specs).unwrap();
    let backward = mutate_cycles(&cm.cover, &[specs[1].clone(), specs[0].clone()]).unwrap();
    let order = cm.cover.vertices().to_vec();
    assert_eq!(
        skew_matrix(&forward, &order).unwrap(),
        skew_matrix(&backward, &order).unwrap()
    );
    let (_, via_fiber) =
        mutate_fiber(&base.qp, "1", &CoverPreset { ell: 6, shifts }, None).unwrap();
    assert_eq!(
        skew_matrix(&forward, &order).unwrap(),
        skew_matrix(&via_fiber, &order).unwrap()
    );
    let projected = project(&cm, &forward).unwrap();
    assert!(is_isomorphic(&projected, &base.expected).is_some());
}

#[test]
fn presets_round_trip_through_json() {
    for name in ["a9-3", "d6-3"] {
        let p = CoverPreset::named(name).unwrap();
        assert_eq!(CoverPreset::from_json(&p.to_json()).unwrap(), p);
    }
    assert!(CoverPreset::from_json(r#"{"ell": 3, "shift": {}}"#).is_err());
}
