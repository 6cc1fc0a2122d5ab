use std::collections::BTreeMap;
use std::fmt::Write;

use qmut::canonical::canonical_order;
use qmut::explore::MutationClass;
use qmut::json::{qp_to_json, quiver_to_json};
use qmut::potential::QuiverWithPotential;
use qmut::{Arrow, Quiver};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// DOT digraph with arrow ids as edge labels.
pub fn dot(q: &Quiver) -> String {
    let mut out = String::from("digraph Q {\n");
    for v in q.vertices() {
        writeln!(out, "  {};", quote(v)).unwrap();
    }
    for a in q.arrows() {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&a.source),
            quote(&a.target),
            quote(&a.id)
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

/// Relabel vertices by canonical position `0..n` and arrows `e0, e1, ..`
/// in order of their endpoints, so isomorphic quivers become equal.
pub fn canonical_quiver(q: &Quiver) -> Quiver {
    let order = canonical_order(q);
    let pos: BTreeMap<&str, usize> = order
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    let mut ends: Vec<(usize, usize)> = q
        .arrows()
        .iter()
        .map(|a| (pos[a.source.as_str()], pos[a.target.as_str()]))
        .collect();
    ends.sort_unstable();
    let arrows = ends
        .iter()
        .enumerate()
        .map(|(k, &(s, t))| Arrow::new(format!("e{k}"), s.to_string(), t.to_string()))
        .collect();
    Quiver::new((0..order.len()).map(|i| i.to_string()).collect(), arrows)
        .expect("relabeling keeps the quiver valid")
}

/// DOT without edge labels on the canonical relabeling.
pub fn canonical_dot(q: &Quiver) -> String {
    let c = canonical_quiver(q);
    let mut out = String::from("digraph Q {\n");
    for v in c.vertices() {
        writeln!(out, "  {};", quote(v)).unwrap();
    }
    for a in c.arrows() {
        writeln!(out, "  {} -> {};", quote(&a.source), quote(&a.target)).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn canonical_json(q: &Quiver) -> String {
    quiver_to_json(&canonical_quiver(q))
}

pub fn json(qp: &QuiverWithPotential) -> String {
    qp_to_json(qp)
}

/// Exchange graph of an explored class; nodes are class indices.
pub fn exchange_graph_dot(class: &MutationClass) -> String {
    let mut out = String::from("graph exchange {\n");
    for (i, (f, d)) in class.forms.iter().zip(&class.depths).enumerate() {
        writeln!(out, "  {i} [label={}, depth={d}];", quote(&f.to_string())).unwrap();
    }
    for (i, j) in &class.edges {
        writeln!(out, "  {i} -- {j};").unwrap();
    }
    out.push_str("}\n");
    out
}
