//! Triangulations of convex polygons and their type-A quivers.
//!
//! Polygon vertices are `0..ngon` in clockwise order. Each diagonal is a
//! quiver vertex named `a-b` (`a < b`); inside a triangle, every diagonal
//! side has an arrow to the diagonal side that follows it clockwise.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use crate::canonical::{canonical_form, CanonicalForm};
use crate::covering::{project_by_action, DeckAction};
use crate::error::{Error, Result};
use crate::potential::{Path, Potential, QuiverWithPotential};
use crate::quiver::{minimal_cycles, Arrow, Quiver};

pub type Diagonal = (usize, usize);

fn norm(a: usize, b: usize) -> Diagonal {
    (a.min(b), a.max(b))
}

pub fn diagonal_name(d: Diagonal) -> String {
    format!("{}-{}", d.0, d.1)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triangulation {
    ngon: usize,
    diagonals: BTreeSet<Diagonal>,
}

fn crosses(d: Diagonal, e: Diagonal) -> bool {
    let ((a, b), (c, x)) = (d, e);
    (a < c && c < b && b < x) || (c < a && a < x && x < b)
}

impl Triangulation {
    pub fn new(ngon: usize, diagonals: impl IntoIterator<Item = Diagonal>) -> Result<Self> {
        if ngon < 3 {
            return Err(Error::InvalidTriangulation(format!(
                "a {ngon}-gon is not a polygon"
            )));
        }
        let mut set = BTreeSet::new();
        for (a, b) in diagonals {
            let d = norm(a, b);
            if d.1 >= ngon || d.1 - d.0 < 2 || (d.0 == 0 && d.1 == ngon - 1) {
                return Err(Error::InvalidTriangulation(format!(
                    "{a}-{b} is not a diagonal of the {ngon}-gon"
                )));
            }
            if !set.insert(d) {
                return Err(Error::InvalidTriangulation(format!(
                    "diagonal {a}-{b} repeated"
                )));
            }
        }
        if set.len() != ngon - 3 {
            return Err(Error::InvalidTriangulation(format!(
                "{} diagonals given, a triangulation of the {ngon}-gon has {}",
                set.len(),
                ngon - 3
            )));
        }
        for d in &set {
            for e in &set {
                if crosses(*d, *e) {
                    return Err(Error::InvalidTriangulation(format!(
                        "diagonals {} and {} cross",
                        diagonal_name(*d),
                        diagonal_name(*e)
                    )));
                }
            }
        }
        Ok(Self {
            ngon,
            diagonals: set,
        })
    }

    /// Parse `"0-2,2-4"`.
    pub fn parse(ngon: usize, text: &str) -> Result<Self> {
        let mut ds = Vec::new();
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = part.split_once('-').ok_or_else(|| {
                Error::InvalidTriangulation(format!("cannot read diagonal `{part}`"))
            })?;
            let parse = |s: &str| {
                s.trim().parse::<usize>().map_err(|_| {
                    Error::InvalidTriangulation(format!("cannot read diagonal `{part}`"))
                })
            };
            ds.push((parse(a)?, parse(b)?));
        }
        Self::new(ngon, ds)
    }

    pub fn ngon(&self) -> usize {
        self.ngon
    }

    pub fn diagonals(&self) -> &BTreeSet<Diagonal> {
        &self.diagonals
    }

    fn is_edge(&self, a: usize, b: usize) -> bool {
        let d = norm(a, b);
        d.1 - d.0 == 1 || (d.0 == 0 && d.1 == self.ngon - 1) || self.diagonals.contains(&d)
    }

    /// All triangles `(a, b, c)` with `a < b < c`.
    pub fn triangles(&self) -> Vec<(usize, usize, usize)> {
        let n = self.ngon;
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !self.is_edge(a, b) {
                    continue;
                }
                for c in b + 1..n {
                    if self.is_edge(b, c) && self.is_edge(a, c) {
                        out.push((a, b, c));
                    }
                }
            }
        }
        out
    }

    pub fn rotate(&self, by: usize) -> Triangulation {
        let n = self.ngon;
        Triangulation {
            ngon: n,
            diagonals: self
                .diagonals
                .iter()
                .map(|&(a, b)| norm((a + by) % n, (b + by) % n))
                .collect(),
        }
    }
}

pub fn triangulation_to_quiver(t: &Triangulation) -> Quiver {
    let vertices: Vec<String> = t.diagonals.iter().map(|&d| diagonal_name(d)).collect();
    let mut arrows = Vec::new();
    for (a, b, c) in t.triangles() {
        // clockwise order of sides: ab, bc, ca
        let sides = [norm(a, b), norm(b, c), norm(a, c)];
        for i in 0..3 {
            let (d, e) = (sides[i], sides[(i + 1) % 3]);
            if t.diagonals.contains(&d) && t.diagonals.contains(&e) {
                let (dn, en) = (diagonal_name(d), diagonal_name(e));
                arrows.push(Arrow::new(format!("{dn}>{en}"), dn, en));
            }
        }
    }
    Quiver::new(vertices, arrows).expect("triangulation quivers are well formed")
}

/// Replace `d` by the other diagonal of the quadrilateral around it.
pub fn flip(t: &Triangulation, d: Diagonal) -> Result<Triangulation> {
    let d = norm(d.0, d.1);
    if !t.diagonals.contains(&d) {
        return Err(Error::InvalidTriangulation(format!(
            "{} is not in the triangulation",
            diagonal_name(d)
        )));
    }
    let apexes: Vec<usize> = (0..t.ngon)
        .filter(|&x| x != d.0 && x != d.1 && t.is_edge(x, d.0) && t.is_edge(x, d.1))
        .collect();
    debug_assert_eq!(apexes.len(), 2);
    let mut diagonals = t.diagonals.clone();
    diagonals.remove(&d);
    diagonals.insert(norm(apexes[0], apexes[1]));
    Ok(Triangulation {
        ngon: t.ngon,
        diagonals,
    })
}

/// Every triangulation of the `ngon`-gon, by choosing the apex of the
/// triangle on the side `0 - (ngon-1)` and recursing on both sides.
pub fn enumerate_triangulations(ngon: usize) -> Vec<Triangulation> {
    let mut memo: HashMap<(usize, usize), Vec<Vec<Diagonal>>> = HashMap::new();
    sub_triangulations(0, ngon - 1, &mut memo)
        .into_iter()
        .map(|ds| Triangulation {
            ngon,
            diagonals: ds.into_iter().collect(),
        })
        .collect()
}

fn sub_triangulations(
    lo: usize,
    hi: usize,
    memo: &mut HashMap<(usize, usize), Vec<Vec<Diagonal>>>,
) -> Vec<Vec<Diagonal>> {
    if hi - lo < 2 {
        return vec![Vec::new()];
    }
    if let Some(v) = memo.get(&(lo, hi)) {
        return v.clone();
    }
    let mut out = Vec::new();
    for apex in lo + 1..hi {
        let left = sub_triangulations(lo, apex, memo);
        let right = sub_triangulations(apex, hi, memo);
        for l in &left {
            for r in &right {
                let mut ds = Vec::with_capacity(l.len() + r.len() + 2);
                if apex - lo >= 2 {
                    ds.push((lo, apex));
                }
                if hi - apex >= 2 {
                    ds.push((apex, hi));
                }
                ds.extend(l);
                ds.extend(r);
                out.push(ds);
            }
        }
    }
    memo.insert((lo, hi), out.clone());
    out
}

/// Triangulations of the `(3n+3)`-gon fixed by the rotation `k -> k + n + 1`.
pub fn g_invariant_triangulations(n: usize) -> Vec<Triangulation> {
    let ngon = 3 * n + 3;
    let mut out: Vec<Triangulation> = enumerate_triangulations(ngon)
        .into_iter()
        .filter(|t| t.rotate(n + 1) == *t)
        .collect();
    out.sort();
    out
}

/// The diagonals forming the triangle fixed by the rotation, if any.
pub fn central_triangle(t: &Triangulation) -> Option<[Diagonal; 3]> {
    if !t.ngon.is_multiple_of(3) {
        return None;
    }
    let step = t.ngon / 3;
    t.diagonals.iter().find_map(|&(a, b)| {
        if b - a != step {
            return None;
        }
        let c = (b + step) % t.ngon;
        let tri = [norm(a, b), norm(b, c), norm(c, a)];
        tri.iter().all(|d| t.diagonals.contains(d)).then_some(tri)
    })
}

/// Quotient of the triangulation quiver by the rotation of order 3. The
/// central triangle becomes a loop `alpha`; the potential is `alpha^3` plus
/// the minimal cycles away from the loop.
pub fn quotient_quiver(t: &Triangulation) -> Result<QuiverWithPotential> {
    if !t.ngon.is_multiple_of(3) || t.ngon < 6 {
        return Err(Error::InvalidTriangulation(
            "rotation quotients need a (3n+3)-gon".into(),
        ));
    }
    let step = t.ngon / 3;
    if t.rotate(step) != *t {
        return Err(Error::InvalidTriangulation(
            "triangulation is not invariant under the rotation".into(),
        ));
    }
    let central = central_triangle(t).expect("invariant triangulations contain a central triangle");
    let q = triangulation_to_quiver(t);
    let rot = |d: Diagonal| norm((d.0 + step) % t.ngon, (d.1 + step) % t.ngon);
    let mut vertex_base = BTreeMap::new();
    let mut deck = BTreeMap::new();
    let mut representative = BTreeMap::new();
    let mut base_vertices = Vec::new();
    for &d in &t.diagonals {
        let orbit = [d, rot(d), rot(rot(d))];
        let rep = *orbit.iter().min().unwrap();
        let base = diagonal_name(rep);
        if rep == d {
            base_vertices.push(base.clone());
            representative.insert(base.clone(), diagonal_name(d));
        }
        vertex_base.insert(diagonal_name(d), base);
        deck.insert(diagonal_name(d), diagonal_name(rot(d)));
    }
    // the central triangle's arrows all land on the loop
    let mut arrow_names = BTreeMap::new();
    for a in q.arrows() {
        let ends = [&a.source, &a.target];
        if ends
            .iter()
            .all(|v| central.iter().any(|&c| diagonal_name(c) == **v))
        {
            arrow_names.insert(a.id.clone(), "alpha".to_string());
        }
    }
    let action = DeckAction {
        ell: 3,
        base_vertices,
        vertex_base,
        deck,
        representative,
        arrow_names,
    };
    let base = project_by_action(&q, &Potential::empty(), &action)?.quiver;
    let without_loop = base.without_arrows(&BTreeSet::from(["alpha".to_string()]));
    let loop_term: Path = vec!["alpha".to_string(); 3];
    let terms = std::iter::once((1, loop_term))
        .chain(minimal_cycles(&without_loop).into_iter().map(|c| (1, c)));
    let potential = Potential::new(&base, terms)?;
    QuiverWithPotential::new(base, potential)
}

type FormCache = Mutex<HashMap<usize, Arc<HashSet<CanonicalForm>>>>;

fn type_a_forms(k: usize) -> Arc<HashSet<CanonicalForm>> {
    static CACHE: OnceLock<FormCache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(forms) = cache.lock().expect("cache lock").get(&k) {
        return forms.clone();
    }
    let forms: HashSet<CanonicalForm> = enumerate_triangulations(k + 3)
        .iter()
        .map(|t| canonical_form(&triangulation_to_quiver(t)))
        .collect();
    let forms = Arc::new(forms);
    cache.lock().expect("cache lock").insert(k, forms.clone());
    forms
}

/// Whether `q` is the quiver of a triangulation of the `(k+3)`-gon, `k` the
/// number of vertices, i.e. a cluster-tilted quiver of type `A_k`.
pub fn is_type_a(q: &Quiver) -> bool {
    let k = q.vertex_count();
    if k == 0 || q.has_loops() || q.has_two_cycles() || !q.is_connected() {
        return false;
    }
    if q.vertices()
        .iter()
        .any(|v| q.arrows_from(v).count() > 2 || q.arrows_into(v).count() > 2)
    {
        return false;
    }
    type_a_forms(k).contains(&canonical_form(q))
}
