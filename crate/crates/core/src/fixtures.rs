//! Worked examples shipped with the library: the A9 and preprojective A6
//! cycle mutations, the D6 cover, and the two loop quivers they cover.

use crate::covering::CoverPreset;
use crate::cycle::CycleSpec;
use crate::potential::{Potential, QuiverWithPotential};
use crate::quiver::{Arrow, Quiver};

/// A named example: the quiver with potential, the cycle annotation or
/// cover preset it is mutated with, and the expected result.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub qp: QuiverWithPotential,
    pub spec: Option<CycleSpec>,
    pub preset: Option<CoverPreset>,
    /// Vertex mutated through the cover, for base fixtures.
    pub vertex: Option<&'static str>,
    pub expected: Quiver,
}

pub const NAMES: [&str; 5] = ["a9", "ppA6", "d6-cover", "a9-base", "d6-base"];

pub fn named(name: &str) -> Option<Fixture> {
    match name {
        "a9" => Some(a9()),
        "ppA6" => Some(pp_a6()),
        "d6-cover" => Some(d6_cover()),
        "a9-base" => Some(a9_base()),
        "d6-base" => Some(d6_base()),
        _ => None,
    }
}

/// Fixtures that carry a cycle annotation (mutated with the cycle rule).
pub fn cycle_fixtures() -> Vec<Fixture> {
    vec![a9(), pp_a6(), d6_cover()]
}

fn v(base: impl std::fmt::Display, sheet: usize) -> String {
    format!("{base}_{}", sheet % 3 + 1)
}

fn ids(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn build(vertices: Vec<String>, arrows: Vec<Arrow>) -> Quiver {
    Quiver::new(vertices, arrows).expect("fixture quivers are well formed")
}

fn cover_vertices(bases: &[u32]) -> Vec<String> {
    bases
        .iter()
        .flat_map(|&b| (0..3).map(move |k| v(b, k)))
        .collect()
}

/// Nine-vertex quiver: the cycle `alpha_k: 1_k -> 1_{k+1}` and triangles
/// `beta_k: 1_k -> 2_k`, `gamma_k: 2_k -> 3_k`, `delta_k: 3_k -> 1_k`.
pub fn a9() -> Fixture {
    let mut arrows = Vec::new();
    for k in 0..3 {
        arrows.push(Arrow::new(v("alpha", k), v(1, k), v(1, k + 1)));
        arrows.push(Arrow::new(v("beta", k), v(1, k), v(2, k)));
        arrows.push(Arrow::new(v("gamma", k), v(2, k), v(3, k)));
        arrows.push(Arrow::new(v("delta", k), v(3, k), v(1, k)));
    }
    let quiver = build(cover_vertices(&[1, 2, 3]), arrows);
    let spec = CycleSpec {
        cycle: ids(&["1_1", "1_2", "1_3"]),
        c_index: (0..3).map(|k| (v("delta", k), 1)).collect(),
        b_index: (0..3).map(|k| (v("beta", k), 1)).collect(),
    };
    let mut expected = Vec::new();
    for k in 0..3 {
        expected.push(Arrow::new(v("alpha", k), v(1, k), v(1, k + 1)));
        expected.push(Arrow::new(v("p", k), v(1, k), v(3, k + 1)));
        expected.push(Arrow::new(v("q", k), v(3, k + 1), v(2, k + 2)));
        expected.push(Arrow::new(v("r", k), v(2, k + 2), v(1, k)));
    }
    Fixture {
        name: "a9",
        qp: QuiverWithPotential::with_minimal_cycles(quiver),
        spec: Some(spec),
        preset: None,
        vertex: None,
        expected: build(cover_vertices(&[1, 2, 3]), expected),
    }
}

fn edge(s: &str, t: &str) -> Arrow {
    Arrow::new(format!("{s}->{t}"), s, t)
}

/// Fifteen-vertex preprojective quiver of type A6 with the 3-cycle on the
/// vertices `5_y`; arrows are named `source->target`.
pub fn pp_a6() -> Fixture {
    let mut arrows = Vec::new();
    for y in 0..3 {
        let x = y + 1;
        for (s, t) in [(5, 3), (3, 4), (4, 5), (5, 2), (2, 4), (4, 1), (1, 2)] {
            arrows.push(edge(&v(s, y), &v(t, y)));
        }
        arrows.push(edge(&v(2, y), &v(3, x)));
        arrows.push(edge(&v(3, x), &v(5, y)));
        arrows.push(edge(&v(5, y), &v(5, x)));
    }
    let quiver = build(cover_vertices(&[1, 2, 3, 4, 5]), arrows);
    let mut c_index = std::collections::BTreeMap::new();
    let mut b_index = std::collections::BTreeMap::new();
    for y in 0..3 {
        c_index.insert(format!("{}->{}", v(3, y + 1), v(5, y)), 0);
        c_index.insert(format!("{}->{}", v(4, y), v(5, y)), 1);
        b_index.insert(format!("{}->{}", v(5, y), v(3, y)), 0);
        b_index.insert(format!("{}->{}", v(5, y), v(2, y)), 1);
    }
    let spec = CycleSpec {
        cycle: ids(&["5_1", "5_2", "5_3"]),
        c_index,
        b_index,
    };
    let mut expected = Vec::new();
    for y in 0..3 {
        let (up, down) = (y + 1, y + 2);
        for (s, t) in [
            (v(5, y), v(3, y)),
            (v(5, y), v(4, up)),
            (v(2, down), v(5, y)),
            (v(4, up), v(2, down)),
            (v(1, down), v(2, down)),
            (v(3, up), v(5, y)),
            (v(4, down), v(1, down)),
            (v(5, y), v(5, up)),
        ] {
            expected.push(edge(&s, &t));
        }
    }
    let potential = Potential::new(
        &quiver,
        crate::quiver::minimal_cycles(&quiver)
            .into_iter()
            .filter(|c| c.len() == 3)
            .map(|c| (1, c)),
    )
    .expect("triangles are cycles");
    Fixture {
        name: "ppA6",
        qp: QuiverWithPotential::new(quiver, potential).expect("potential uses quiver arrows"),
        spec: Some(spec),
        preset: None,
        vertex: None,
        expected: build(cover_vertices(&[1, 2, 3, 4, 5]), expected),
    }
}

/// Six-vertex cover: `alpha_j: 1_j -> 1_{j+1}`, `beta_j: 1_{j+1} -> 2_j`,
/// `gamma_j: 2_j -> 1_j`. Mutating the cycle returns the same shape.
pub fn d6_cover() -> Fixture {
    let mut arrows = Vec::new();
    for j in 0..3 {
        arrows.push(Arrow::new(v("alpha", j), v(1, j), v(1, j + 1)));
        arrows.push(Arrow::new(v("beta", j), v(1, j + 1), v(2, j)));
        arrows.push(Arrow::new(v("gamma", j), v(2, j), v(1, j)));
    }
    let quiver = build(cover_vertices(&[1, 2]), arrows);
    let spec = CycleSpec {
        cycle: ids(&["1_1", "1_2", "1_3"]),
        c_index: (0..3).map(|j| (v("gamma", j), 0)).collect(),
        b_index: (0..3).map(|j| (v("beta", j), 0)).collect(),
    };
    Fixture {
        name: "d6-cover",
        qp: QuiverWithPotential::with_minimal_cycles(quiver.clone()),
        spec: Some(spec),
        preset: None,
        vertex: None,
        expected: quiver,
    }
}

/// Loop `alpha` at 1 and the triangle `beta: 1 -> 2`, `gamma: 2 -> 3`,
/// `delta: 3 -> 1`, potential `alpha^3 + beta gamma delta`.
pub fn a9_base() -> Fixture {
    let quiver = Quiver::from_triples(
        &["1", "2", "3"],
        &[
            ("alpha", "1", "1"),
            ("beta", "1", "2"),
            ("gamma", "2", "3"),
            ("delta", "3", "1"),
        ],
    )
    .expect("fixture quiver");
    let potential = Potential::new(
        &quiver,
        [
            (1, ids(&["alpha", "alpha", "alpha"])),
            (1, ids(&["beta", "gamma", "delta"])),
        ],
    )
    .expect("fixture potential");
    let expected = Quiver::from_triples(
        &["1", "2", "3"],
        &[
            ("alpha", "1", "1"),
            ("x", "1", "3"),
            ("y", "3", "2"),
            ("z", "2", "1"),
        ],
    )
    .expect("fixture quiver");
    Fixture {
        name: "a9-base",
        qp: QuiverWithPotential::new(quiver, potential).expect("fixture"),
        spec: None,
        preset: CoverPreset::named("a9-3"),
        vertex: Some("1"),
        expected,
    }
}

/// Loop `alpha` at 1 with the 2-cycle `beta: 1 -> 2`, `gamma: 2 -> 1`,
/// potential `alpha^3 + alpha beta gamma`.
pub fn d6_base() -> Fixture {
    let quiver = Quiver::from_triples(
        &["1", "2"],
        &[("alpha", "1", "1"), ("beta", "1", "2"), ("gamma", "2", "1")],
    )
    .expect("fixture quiver");
    let potential = Potential::new(
        &quiver,
        [
            (1, ids(&["alpha", "alpha", "alpha"])),
            (1, ids(&["alpha", "beta", "gamma"])),
        ],
    )
    .expect("fixture potential");
    Fixture {
        name: "d6-base",
        qp: QuiverWithPotential::new(quiver.clone(), potential).expect("fixture"),
        spec: None,
        preset: CoverPreset::named("d6-3"),
        vertex: Some("1"),
        expected: quiver,
    }
}
