//! Quivers as directed multigraphs with stable arrow ids.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, SkewMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arrow {
    pub id: String,
    pub source: String,
    pub target: String,
}

impl Arrow {
    pub fn new(
        id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        Self {
            id: id.into(),
            source: source.into(),
            target: target.into(),
        }
    }

    pub fn is_loop(&self) -> bool {
        self.source == self.target
    }
}

/// Finite quiver. Vertices keep their declared order, arrows are kept
/// sorted by id. Loops, parallel arrows and 2-cycles are all allowed.
#[derive(Clone, Debug)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    index: HashMap<String, usize>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

impl Quiver {
    pub fn new(vertices: Vec<String>, mut arrows: Vec<Arrow>) -> Result<Self> {
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        arrows.sort();
        for pair in arrows.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::DuplicateArrow(pair[0].id.clone()));
            }
        }
        for a in &arrows {
            for end in [&a.source, &a.target] {
                if !index.contains_key(end) {
                    return Err(Error::UnknownVertex(end.clone()));
                }
            }
        }
        Ok(Self {
            vertices,
            arrows,
            index,
        })
    }

    /// Convenience constructor from `(id, source, target)` triples.
    pub fn from_triples(vertices: &[&str], arrows: &[(&str, &str, &str)]) -> Result<Self> {
        Self::new(
            vertices.iter().map(|v| v.to_string()).collect(),
            arrows
                .iter()
                .map(|&(id, s, t)| Arrow::new(id, s, t))
                .collect(),
        )
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, v: &str) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn has_vertex(&self, v: &str) -> bool {
        self.index.contains_key(v)
    }

    pub fn arrow(&self, id: &str) -> Option<&Arrow> {
        self.arrows
            .binary_search_by(|a| a.id.as_str().cmp(id))
            .ok()
            .map(|i| &self.arrows[i])
    }

    pub fn arrows_from<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a Arrow> + 'a {
        self.arrows.iter().filter(move |a| a.source == v)
    }

    pub fn arrows_into<'a>(&'a self, v: &'a str) -> impl Iterator<Item = &'a Arrow> + 'a {
        self.arrows.iter().filter(move |a| a.target == v)
    }

    pub fn multiplicity(&self, u: &str, v: &str) -> usize {
        self.arrows
            .iter()
            .filter(|a| a.source == u && a.target == v)
            .count()
    }

    /// Arrow counts in declared vertex order: `adj[i][j]` = #arrows i -> j.
    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let n = self.vertices.len();
        let mut adj = vec![vec![0u32; n]; n];
        for a in &self.arrows {
            adj[self.index[&a.source]][self.index[&a.target]] += 1;
        }
        adj
    }

    pub fn has_loop_at(&self, v: &str) -> bool {
        self.arrows.iter().any(|a| a.is_loop() && a.source == v)
    }

    pub fn on_two_cycle(&self, v: &str) -> bool {
        self.arrows_from(v)
            .filter(|a| !a.is_loop())
            .any(|a| self.multiplicity(&a.target, v) > 0)
    }

    pub fn has_loops(&self) -> bool {
        self.arrows.iter().any(Arrow::is_loop)
    }

    pub fn has_two_cycles(&self) -> bool {
        self.vertices.iter().any(|v| self.on_two_cycle(v))
    }

    /// Subquiver on `keep` with every arrow between kept vertices.
    pub fn induced(&self, keep: &[String]) -> Quiver {
        let set: BTreeSet<&str> = keep.iter().map(String::as_str).collect();
        let arrows = self
            .arrows
            .iter()
            .filter(|a| set.contains(a.source.as_str()) && set.contains(a.target.as_str()))
            .cloned()
            .collect();
        Quiver::new(keep.to_vec(), arrows).expect("induced subquiver of a valid quiver")
    }

    pub fn without_arrows(&self, drop: &BTreeSet<String>) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .filter(|a| !drop.contains(&a.id))
            .cloned()
            .collect();
        Quiver::new(self.vertices.clone(), arrows).expect("arrow removal keeps validity")
    }

    /// Rename vertices; names missing from `map` are kept.
    pub fn relabel(&self, map: &BTreeMap<String, String>) -> Result<Quiver> {
        let rename = |v: &String| map.get(v).cloned().unwrap_or_else(|| v.clone());
        Quiver::new(
            self.vertices.iter().map(rename).collect(),
            self.arrows
                .iter()
                .map(|a| Arrow::new(a.id.clone(), rename(&a.source), rename(&a.target)))
                .collect(),
        )
    }

    /// Weakly connected components as lists of vertex indices, each sorted,
    /// ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        for a in &self.arrows {
            let (s, t) = (
                find(&mut parent, self.index[&a.source]),
                find(&mut parent, self.index[&a.target]),
            );
            if s != t {
                parent[s.max(t)] = s.min(t);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            let r = find(&mut parent, v);
            groups.entry(r).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// `base` if unused as an arrow id, otherwise `base` with primes appended.
    pub fn fresh_arrow_id(&self, base: &str) -> String {
        let mut id = base.to_string();
        while self.arrow(&id).is_some() {
            id.push('\'');
        }
        id
    }
}

/// Net arrow counts in the given vertex order; loops and 2-cycles cancel.
pub fn skew_matrix(q: &Quiver, order: &[String]) -> Result<SkewMatrix> {
    let perm = order_permutation(q, order)?;
    let adj = q.adjacency();
    let n = order.len();
    let m = IntMatrix::from_fn(n, n, |i, j| {
        i64::from(adj[perm[i]][perm[j]]) - i64::from(adj[perm[j]][perm[i]])
    });
    SkewMatrix::new(m)
}

/// Skew matrix in the quiver's own vertex order.
pub fn skew_matrix_default(q: &Quiver) -> SkewMatrix {
    skew_matrix(q, q.vertices()).expect("declared order is a permutation")
}

fn order_permutation(q: &Quiver, order: &[String]) -> Result<Vec<usize>> {
    if order.len() != q.vertex_count() {
        return Err(Error::InvalidOrder(format!(
            "expected {} vertices, got {}",
            q.vertex_count(),
            order.len()
        )));
    }
    let mut seen = vec![false; order.len()];
    let mut perm = Vec::with_capacity(order.len());
    for v in order {
        let i = q
            .index_of(v)
            .ok_or_else(|| Error::InvalidOrder(format!("unknown vertex `{v}`")))?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::InvalidOrder(format!("vertex `{v}` repeated")));
        }
        perm.push(i);
    }
    Ok(perm)
}

fn toggle_reversal(id: &str) -> String {
    match id.strip_suffix('*') {
        Some(stripped) => stripped.to_string(),
        None => format!("{id}*"),
    }
}

/// Arrow-level FZ mutation: compose paths through `v`, reverse the arrows at
/// `v`, then cancel opposite pairs between vertices that received composites.
/// Reversed arrows get a `*` suffix (removed again on a second reversal),
/// composites are named `[a b]`.
pub fn fz_mutate_quiver(q: &Quiver, v: &str) -> Result<Quiver> {
    if !q.has_vertex(v) {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    if q.has_loop_at(v) || q.on_two_cycle(v) {
        return Err(Error::LoopOrTwoCycle(v.to_string()));
    }
    let incoming: Vec<&Arrow> = q.arrows_into(v).collect();
    let outgoing: Vec<&Arrow> = q.arrows_from(v).collect();

    let mut arrows: Vec<Arrow> = Vec::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for a in q.arrows() {
        let out = if a.target == v || a.source == v {
            Arrow::new(toggle_reversal(&a.id), a.target.clone(), a.source.clone())
        } else {
            a.clone()
        };
        used.insert(out.id.clone());
        arrows.push(out);
    }
    let mut touched: BTreeSet<(String, String)> = BTreeSet::new();
    for a in &incoming {
        for b in &outgoing {
            let mut id = format!("[{} {}]", a.id, b.id);
            while used.contains(&id) {
                id.push('\'');
            }
            used.insert(id.clone());
            let pair = if a.source < b.target {
                (a.source.clone(), b.target.clone())
            } else {
                (b.target.clone(), a.source.clone())
            };
            touched.insert(pair);
            arrows.push(Arrow::new(id, a.source.clone(), b.target.clone()));
        }
    }
    let arrows = cancel_two_cycles(arrows, Some(&touched));
    Quiver::new(q.vertices().to_vec(), arrows)
}

/// Cancel opposite arrow pairs greedily by lexicographic id. With `only`
/// set, just those unordered vertex pairs are considered.
pub(crate) fn cancel_two_cycles(
    arrows: Vec<Arrow>,
    only: Option<&BTreeSet<(String, String)>>,
) -> Vec<Arrow> {
    let mut by_pair: BTreeMap<(String, String), (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, a) in arrows.iter().enumerate() {
        if a.is_loop() {
            continue;
        }
        if a.source < a.target {
            by_pair
                .entry((a.source.clone(), a.target.clone()))
                .or_default()
                .0
                .push(i);
        } else {
            by_pair
                .entry((a.target.clone(), a.source.clone()))
                .or_default()
                .1
                .push(i);
        }
    }
    let mut drop = vec![false; arrows.len()];
    for (pair, (mut fwd, mut bwd)) in by_pair {
        if only.is_some_and(|set| !set.contains(&pair)) {
            continue;
        }
        fwd.sort_by(|&x, &y| arrows[x].id.cmp(&arrows[y].id));
        bwd.sort_by(|&x, &y| arrows[x].id.cmp(&arrows[y].id));
        for (&x, &y) in fwd.iter().zip(bwd.iter()) {
            drop[x] = true;
            drop[y] = true;
        }
    }
    arrows
        .into_iter()
        .zip(drop)
        .filter(|(_, d)| !d)
        .map(|(a, _)| a)
        .collect()
}

/// Minimal cycles: oriented cycles visiting each vertex once whose vertex
/// set induces exactly the cycle's arrows. Loops are ignored when checking
/// longer cycles; a loop is itself minimal when it is the only loop at its
/// vertex. Returned as arrow-id sequences rotated to their lexicographically
/// least form, sorted.
pub fn minimal_cycles(q: &Quiver) -> Vec<Vec<String>> {
    let n = q.vertex_count();
    let adj = q.adjacency();
    let mut out_arrows: Vec<Vec<(usize, &Arrow)>> = vec![Vec::new(); n];
    for a in q.arrows() {
        let (s, t) = (
            q.index_of(&a.source).unwrap(),
            q.index_of(&a.target).unwrap(),
        );
        out_arrows[s].push((t, a));
    }
    let mut found: BTreeSet<Vec<String>> = BTreeSet::new();
    for start in 0..n {
        if adj[start][start] == 1 {
            let a = out_arrows[start]
                .iter()
                .find(|(t, _)| *t == start)
                .unwrap()
                .1;
            found.insert(vec![a.id.clone()]);
        }
        let mut path_vertices = vec![start];
        let mut path_arrows: Vec<&Arrow> = Vec::new();
        extend_cycle(
            start,
            &adj,
            &out_arrows,
            &mut path_vertices,
            &mut path_arrows,
            &mut found,
        );
    }
    found.into_iter().collect()
}

fn extend_cycle<'a>(
    start: usize,
    adj: &[Vec<u32>],
    out_arrows: &[Vec<(usize, &'a Arrow)>],
    path_vertices: &mut Vec<usize>,
    path_arrows: &mut Vec<&'a Arrow>,
    found: &mut BTreeSet<Vec<String>>,
) {
    let last = *path_vertices.last().unwrap();
    for &(next, arrow) in &out_arrows[last] {
        if next == start && path_vertices.len() >= 2 {
            if induced_arrow_count(adj, path_vertices) == path_vertices.len() as u32 {
                let mut ids: Vec<String> = path_arrows.iter().map(|a| a.id.clone()).collect();
                ids.push(arrow.id.clone());
                found.insert(normalize_rotation(&ids));
            }
            continue;
        }
        if next <= start || path_vertices.contains(&next) {
            continue;
        }
        // any arrow between `next` and an earlier path vertex other than the
        // one just used (or a closing arrow back to start) is a chord
        let chord = path_vertices.iter().any(|&u| {
            let expected_in = u32::from(u == last);
            let expected_back = u32::from(u == start);
            adj[u][next] > expected_in || adj[next][u] > expected_back
        });
        if chord {
            continue;
        }
        path_vertices.push(next);
        path_arrows.push(arrow);
        extend_cycle(start, adj, out_arrows, path_vertices, path_arrows, found);
        path_vertices.pop();
        path_arrows.pop();
    }
}

fn induced_arrow_count(adj: &[Vec<u32>], vs: &[usize]) -> u32 {
    vs.iter()
        .flat_map(|&i| vs.iter().filter(move |&&j| j != i).map(move |&j| adj[i][j]))
        .sum()
}

/// Rotate a cyclic sequence to its lexicographically least rotation.
pub fn normalize_rotation(cycle: &[String]) -> Vec<String> {
    (0..cycle.len().max(1))
        .map(|r| {
            cycle[r..]
                .iter()
                .chain(&cycle[..r])
                .cloned()
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}
