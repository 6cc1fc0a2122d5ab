//! Canonical forms and isomorphism tests for small quivers.
//!
//! The canonical form is computed by partition refinement with
//! individualization: vertices are split by invariant signatures, ties are
//! broken by trying every vertex of the first non-singleton cell, and the
//! lexicographically least adjacency matrix over all leaves wins. Swapping
//! structurally identical vertices is an automorphism, so only one of each
//! such group is tried. Components are canonicalized separately and sorted.
//!
//! `is_isomorphic` is a separate backtracking matcher; it shares no code with
//! the canonical form so the two can be checked against each other.

use std::collections::BTreeMap;
use std::fmt;

use crate::quiver::Quiver;

/// Canonical encoding: vertex count followed by the arrow-count matrix in
/// canonical vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u32>);

impl CanonicalForm {
    pub fn vertex_count(&self) -> usize {
        self.0[0] as usize
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.vertex_count();
        write!(f, "{n}:")?;
        for i in 0..n {
            if i > 0 {
                f.write_str("/")?;
            }
            for j in 0..n {
                write!(f, "{}", encode_digit(self.0[1 + i * n + j]))?;
            }
        }
        Ok(())
    }
}

fn encode_digit(x: u32) -> String {
    if x < 10 {
        x.to_string()
    } else {
        format!("({x})")
    }
}

pub fn canonical_form(q: &Quiver) -> CanonicalForm {
    canonical_form_of_matrix(&q.adjacency())
}

/// Vertex ids of `q` in canonical order.
pub fn canonical_order(q: &Quiver) -> Vec<String> {
    canonical_order_of_matrix(&q.adjacency())
        .into_iter()
        .map(|i| q.vertices()[i].clone())
        .collect()
}

pub fn canonical_form_of_matrix(adj: &[Vec<u32>]) -> CanonicalForm {
    let order = canonical_order_of_matrix(adj);
    CanonicalForm(encode(adj, &order))
}

pub fn canonical_order_of_matrix(adj: &[Vec<u32>]) -> Vec<usize> {
    let mut parts: Vec<(Vec<u32>, Vec<usize>)> = components(adj)
        .into_iter()
        .map(|comp| {
            let sub: Vec<Vec<u32>> = comp
                .iter()
                .map(|&i| comp.iter().map(|&j| adj[i][j]).collect())
                .collect();
            let local = canonical_connected(&sub);
            let order: Vec<usize> = local.iter().map(|&i| comp[i]).collect();
            (encode(adj, &order), order)
        })
        .collect();
    parts.sort();
    parts.into_iter().flat_map(|(_, order)| order).collect()
}

fn encode(adj: &[Vec<u32>], order: &[usize]) -> Vec<u32> {
    let mut out = Vec::with_capacity(1 + order.len() * order.len());
    out.push(order.len() as u32);
    for &i in order {
        for &j in order {
            out.push(adj[i][j]);
        }
    }
    out
}

fn components(adj: &[Vec<u32>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut k = 0;
        while k < members.len() {
            let v = members[k];
            k += 1;
            for w in 0..n {
                if comp[w] == usize::MAX && (adj[v][w] > 0 || adj[w][v] > 0) {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

struct Search<'a> {
    adj: &'a [Vec<u32>],
    best: Option<(Vec<u32>, Vec<usize>)>,
}

fn canonical_connected(adj: &[Vec<u32>]) -> Vec<usize> {
    let n = adj.len();
    if n == 0 {
        return Vec::new();
    }
    let mut search = Search { adj, best: None };
    search.run(vec![(0..n).collect()]);
    search.best.expect("at least one leaf").1
}

impl Search<'_> {
    fn run(&mut self, cells: Vec<Vec<usize>>) {
        let cells = refine(self.adj, cells);
        match cells.iter().position(|c| c.len() > 1) {
            None => {
                let order: Vec<usize> = cells.into_iter().flatten().collect();
                let enc = encode(self.adj, &order);
                if self.best.as_ref().is_none_or(|(b, _)| enc < *b) {
                    self.best = Some((enc, order));
                }
            }
            Some(pos) => {
                let cell = cells[pos].clone();
                let mut tried: Vec<usize> = Vec::new();
                for &v in &cell {
                    if tried.iter().any(|&w| twins(self.adj, v, w)) {
                        continue;
                    }
                    tried.push(v);
                    let mut next = cells.clone();
                    next[pos] = vec![v];
                    next.insert(pos + 1, cell.iter().copied().filter(|&w| w != v).collect());
                    self.run(next);
                }
            }
        }
    }
}

/// Swapping `v` and `w` preserves every arrow count.
fn twins(adj: &[Vec<u32>], v: usize, w: usize) -> bool {
    if adj[v][v] != adj[w][w] || adj[v][w] != adj[w][v] {
        return false;
    }
    (0..adj.len())
        .filter(|&x| x != v && x != w)
        .all(|x| adj[v][x] == adj[w][x] && adj[x][v] == adj[x][w])
}

/// Split cells by each vertex's arrow counts towards every cell until stable.
/// Sub-cells are ordered by signature, which keeps the result invariant
/// under relabeling.
fn refine(adj: &[Vec<u32>], mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    loop {
        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut keyed: Vec<(Vec<u32>, usize)> = cell
                .iter()
                .map(|&v| (signature(adj, &cells, v), v))
                .collect();
            keyed.sort();
            let mut start = 0;
            for i in 1..=keyed.len() {
                if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                    next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                    start = i;
                }
            }
        }
        if next.len() == cells.len() {
            return next;
        }
        cells = next;
    }
}

fn signature(adj: &[Vec<u32>], cells: &[Vec<usize>], v: usize) -> Vec<u32> {
    let mut sig = vec![adj[v][v]];
    for cell in cells {
        let mut counts: Vec<(u32, u32)> = cell.iter().map(|&w| (adj[v][w], adj[w][v])).collect();
        counts.sort_unstable();
        sig.push(u32::MAX);
        for (o, i) in counts {
            sig.push(o);
            sig.push(i);
        }
    }
    sig
}

/// A vertex bijection preserving arrow multiplicities in both directions.
pub fn is_isomorphic(q1: &Quiver, q2: &Quiver) -> Option<BTreeMap<String, String>> {
    if q1.vertex_count() != q2.vertex_count() || q1.arrows().len() != q2.arrows().len() {
        return None;
    }
    let (a1, a2) = (q1.adjacency(), q2.adjacency());
    let map = match_matrices(&a1, &a2)?;
    Some(
        map.iter()
            .enumerate()
            .map(|(i, &j)| (q1.vertices()[i].clone(), q2.vertices()[j].clone()))
            .collect(),
    )
}

fn degree_signature(adj: &[Vec<u32>], v: usize) -> (u32, Vec<u32>, Vec<u32>) {
    let n = adj.len();
    let mut out: Vec<u32> = (0..n)
        .filter(|&w| w != v && adj[v][w] > 0)
        .map(|w| adj[v][w])
        .collect();
    let mut inc: Vec<u32> = (0..n)
        .filter(|&w| w != v && adj[w][v] > 0)
        .map(|w| adj[w][v])
        .collect();
    out.sort_unstable();
    inc.sort_unstable();
    (adj[v][v], out, inc)
}

/// Backtracking matcher: returns `map` with `a1[i][j] == a2[map[i]][map[j]]`.
pub fn match_matrices(a1: &[Vec<u32>], a2: &[Vec<u32>]) -> Option<Vec<usize>> {
    let n = a1.len();
    if a2.len() != n {
        return None;
    }
    let s1: Vec<_> = (0..n).map(|v| degree_signature(a1, v)).collect();
    let s2: Vec<_> = (0..n).map(|v| degree_signature(a2, v)).collect();
    let (mut sorted1, mut sorted2) = (s1.clone(), s2.clone());
    sorted1.sort();
    sorted2.sort();
    if sorted1 != sorted2 {
        return None;
    }
    // order q1's vertices so each one is as constrained as possible
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = order
                    .iter()
                    .filter(|&&u| a1[u][v] > 0 || a1[v][u] > 0)
                    .count();
                let degree: u32 = (0..n).map(|w| a1[v][w] + a1[w][v]).sum();
                (links, degree, std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend_match(a1, a2, &s1, &s2, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend_match(
    a1: &[Vec<u32>],
    a2: &[Vec<u32>],
    s1: &[(u32, Vec<u32>, Vec<u32>)],
    s2: &[(u32, Vec<u32>, Vec<u32>)],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..a2.len() {
        if used[w] || s1[v] != s2[w] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| {
            let mu = map[u];
            a1[u][v] == a2[mu][w] && a1[v][u] == a2[w][mu]
        });
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend_match(a1, a2, s1, s2, order, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}
