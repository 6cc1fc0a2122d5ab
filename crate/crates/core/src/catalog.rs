//! The 2-CY tilted algebras of finite type that are not cluster-tilted:
//! the families `A3n3` and `Dnll` and the seven `E82` quivers, with the
//! cover presets used to mutate them and a structural classifier.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::canonical::{canonical_form, CanonicalForm};
use crate::covering::{mutate_at_vertex_via_cover, CoverPreset};
use crate::error::{Error, Result};
use crate::potential::{Path, Potential, QuiverWithPotential};
use crate::quiver::{minimal_cycles, Arrow, Quiver};
use crate::triangulation::is_type_a;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum E82Letter {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl E82Letter {
    pub const ALL: [E82Letter; 7] = [
        Self::A,
        Self::B,
        Self::C,
        Self::D,
        Self::E,
        Self::F,
        Self::G,
    ];

    pub fn as_char(self) -> char {
        (b'a' + Self::ALL.iter().position(|&l| l == self).unwrap() as u8) as char
    }
}

impl fmt::Display for E82Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for E82Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c @ 'a'..='g'), None) => Ok(Self::ALL[(c as u8 - b'a') as usize]),
            _ => Err(Error::InvalidCatalog(format!(
                "unknown E82 letter `{s}`, expected a..g"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A3n3,
    Dnll,
    E82(E82Letter),
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::A3n3 => write!(f, "A3n3"),
            Family::Dnll => write!(f, "Dnll"),
            Family::E82(l) => write!(f, "E82{l}"),
        }
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Family and parameters of a catalog quiver. `n` is the number of
/// vertices; `star_pattern` marks the starred positions of the central
/// cycle, rotated to its smallest form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Descriptor {
    pub family: Family,
    pub n: usize,
    pub ell: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub star_pattern: Option<Vec<bool>>,
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} ell={}", self.family, self.n, self.ell)?;
        if let Some(q) = self.q {
            write!(f, " q={q}")?;
        }
        if let Some(p) = &self.star_pattern {
            let s: String = p.iter().map(|&b| if b { '*' } else { '.' }).collect();
            write!(f, " stars={s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub descriptor: Descriptor,
    pub qp: QuiverWithPotential,
    /// Cover on which every vertex can be mutated.
    pub cover: CoverPreset,
}

/// Quiver of a cluster-tilted algebra of type A with a connecting vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeAAttachment {
    quiver: Quiver,
    connecting: String,
}

fn is_on_triangle(q: &Quiver, v: &str) -> bool {
    minimal_cycles(q)
        .iter()
        .any(|c| c.len() == 3 && c.iter().any(|a| q.arrow(a).is_some_and(|a| a.source == v)))
}

fn degree(q: &Quiver, v: &str) -> usize {
    q.arrows_from(v).count() + q.arrows_into(v).count()
}

impl TypeAAttachment {
    pub fn new(quiver: Quiver, connecting: impl Into<String>) -> Result<Self> {
        let connecting = connecting.into();
        if !quiver.has_vertex(&connecting) {
            return Err(Error::UnknownVertex(connecting));
        }
        if !is_type_a(&quiver) {
            return Err(Error::InvalidCatalog(
                "attachment is not a cluster-tilted quiver of type A".into(),
            ));
        }
        let d = degree(&quiver, &connecting);
        if d > 2 || (d == 2 && !is_on_triangle(&quiver, &connecting)) {
            return Err(Error::InvalidCatalog(format!(
                "`{connecting}` is not a connecting vertex"
            )));
        }
        Ok(Self { quiver, connecting })
    }

    /// A single vertex `1`.
    pub fn point() -> Self {
        Self {
            quiver: Quiver::new(vec!["1".into()], Vec::new()).unwrap(),
            connecting: "1".into(),
        }
    }

    /// The linear quiver `1 -> 2 -> ... -> k`, connected at `1`.
    pub fn path(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidCatalog("an attachment needs a vertex".into()));
        }
        let vertices: Vec<String> = (1..=k).map(|i| i.to_string()).collect();
        let arrows = (1..k)
            .map(|i| Arrow::new(format!("a{i}"), i.to_string(), (i + 1).to_string()))
            .collect();
        Self::new(Quiver::new(vertices, arrows)?, "1")
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn connecting(&self) -> &str {
        &self.connecting
    }
}

fn power(cycle: &[&str], times: usize) -> Path {
    (0..times)
        .flat_map(|_| cycle.iter().map(|s| s.to_string()))
        .collect()
}

/// Loop `alpha` at the connecting vertex of `attachment`, potential
/// `alpha^3` plus the triangles of the attachment.
pub fn gen_a3n3(attachment: &TypeAAttachment) -> Result<CatalogEntry> {
    let att = &attachment.quiver;
    let loop_id = att.fresh_arrow_id("alpha");
    let mut arrows = att.arrows().to_vec();
    arrows.push(Arrow::new(
        loop_id.clone(),
        attachment.connecting.clone(),
        attachment.connecting.clone(),
    ));
    let quiver = Quiver::new(att.vertices().to_vec(), arrows)?;
    let terms = std::iter::once((1, power(&[&loop_id], 3)))
        .chain(minimal_cycles(att).into_iter().map(|c| (1, c)));
    let potential = Potential::new(&quiver, terms)?;
    let n = quiver.vertex_count();
    Ok(CatalogEntry {
        descriptor: Descriptor {
            family: Family::A3n3,
            n,
            ell: 3,
            q: None,
            star_pattern: None,
        },
        qp: QuiverWithPotential::new(quiver, potential)?,
        cover: CoverPreset {
            ell: 3,
            shifts: BTreeMap::from([(loop_id, 1)]),
        },
    })
}

fn centre(i: usize) -> String {
    format!("c{i}")
}

fn star(i: usize) -> String {
    format!("s{i}")
}

/// Central oriented `q`-cycle `alpha1 ... alphaq` with power `ell` in the
/// potential; at each starred position `i` a triangle through the star
/// vertex `s{i}`, where the given type-A attachment is glued.
pub fn gen_dnll(
    q: usize,
    ell: usize,
    stars: &BTreeMap<usize, TypeAAttachment>,
) -> Result<CatalogEntry> {
    if q == 0 {
        return Err(Error::InvalidCatalog(
            "the central cycle needs at least one arrow".into(),
        ));
    }
    if ell < 2 {
        return Err(Error::InvalidCatalog(
            "ell must be at least 2; ell = 1 is a cluster category".into(),
        ));
    }
    if let Some(&i) = stars.keys().find(|&&i| i == 0 || i > q) {
        return Err(Error::InvalidCatalog(format!(
            "star position {i} is outside 1..{q}"
        )));
    }
    if q == 1 && stars.is_empty() {
        return Err(Error::InvalidCatalog(
            "with q = 1 a star must be present".into(),
        ));
    }
    let next = |i: usize| i % q + 1;
    let mut vertices: Vec<String> = (1..=q).map(centre).collect();
    let mut arrows: Vec<Arrow> = (1..=q)
        .map(|i| Arrow::new(format!("alpha{i}"), centre(i), centre(next(i))))
        .collect();
    let central: Vec<String> = arrows.iter().map(|a| a.id.clone()).collect();
    let mut terms: Vec<(i64, Path)> = vec![(
        1,
        power(&central.iter().map(String::as_str).collect::<Vec<_>>(), ell),
    )];
    for (&i, att) in stars {
        let rename = |v: &str| {
            if v == att.connecting {
                star(i)
            } else {
                format!("s{i}.{v}")
            }
        };
        for v in att.quiver.vertices() {
            vertices.push(rename(v));
        }
        for a in att.quiver.arrows() {
            arrows.push(Arrow::new(
                format!("s{i}.{}", a.id),
                rename(&a.source),
                rename(&a.target),
            ));
        }
        for c in minimal_cycles(&att.quiver) {
            terms.push((1, c.iter().map(|a| format!("s{i}.{a}")).collect()));
        }
        arrows.push(Arrow::new(format!("beta{i}"), centre(next(i)), star(i)));
        arrows.push(Arrow::new(format!("gamma{i}"), star(i), centre(i)));
        terms.push((
            1,
            vec![format!("alpha{i}"), format!("beta{i}"), format!("gamma{i}")],
        ));
    }
    let quiver = Quiver::new(vertices, arrows)?;
    let n = quiver.vertex_count();
    if n * ell < 4 {
        return Err(Error::InvalidCatalog(format!(
            "n ell = {} is below 4",
            n * ell
        )));
    }
    let potential = Potential::new(&quiver, terms)?;
    let mut shifts = BTreeMap::from([(format!("alpha{q}"), 1)]);
    if stars.contains_key(&q) {
        shifts.insert(format!("gamma{q}"), ell - 1);
    }
    let pattern: Vec<bool> = (1..=q).map(|i| stars.contains_key(&i)).collect();
    Ok(CatalogEntry {
        descriptor: Descriptor {
            family: Family::Dnll,
            n,
            ell,
            q: Some(q),
            star_pattern: Some(smallest_rotation(&pattern)),
        },
        qp: QuiverWithPotential::new(quiver, potential)?,
        cover: CoverPreset { ell, shifts },
    })
}

fn smallest_rotation(p: &[bool]) -> Vec<bool> {
    (0..p.len().max(1))
        .map(|k| {
            p.iter()
                .cycle()
                .skip(k)
                .take(p.len())
                .copied()
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

/// Undirected edges of a letter, as (id, first end, second end).
type Pendant = (&'static str, &'static str, &'static str);

struct LetterData {
    arrows: &'static [(&'static str, &'static str, &'static str)],
    pendants: &'static [Pendant],
    potential: &'static [&'static [&'static str]],
    shifts: &'static [(&'static str, usize)],
}

fn letter_data(letter: E82Letter) -> LetterData {
    match letter {
        E82Letter::A => LetterData {
            arrows: &[("alpha", "2", "3"), ("beta", "3", "2")],
            pendants: &[("mu", "1", "2"), ("nu", "3", "4")],
            potential: &[&["alpha", "beta", "alpha", "beta"]],
            shifts: &[("alpha", 1)],
        },
        E82Letter::B => LetterData {
            arrows: &[
                ("alpha", "2", "3"),
                ("beta", "3", "2"),
                ("gamma", "3", "4"),
                ("delta", "4", "2"),
            ],
            pendants: &[("mu", "1", "2")],
            potential: &[
                &["alpha", "beta", "alpha", "beta"],
                &["alpha", "gamma", "delta"],
            ],
            shifts: &[("alpha", 1), ("gamma", 1)],
        },
        E82Letter::C => LetterData {
            arrows: &[
                ("alpha", "2", "3"),
                ("gamma", "3", "4"),
                ("delta", "4", "2"),
            ],
            pendants: &[("mu", "1", "2")],
            potential: &[&["alpha", "gamma", "delta", "alpha", "gamma", "delta"]],
            shifts: &[("alpha", 1)],
        },
        E82Letter::D => LetterData {
            arrows: &[
                ("alpha", "2", "3"),
                ("beta", "3", "2"),
                ("gamma", "3", "4"),
                ("delta", "4", "2"),
            ],
            pendants: &[("mu", "1", "3")],
            potential: &[
                &["alpha", "beta", "alpha", "beta"],
                &["alpha", "gamma", "delta"],
            ],
            shifts: &[("alpha", 1), ("gamma", 1)],
        },
        E82Letter::E => LetterData {
            arrows: &[
                ("alpha", "1", "2"),
                ("beta", "2", "1"),
                ("gamma", "3", "2"),
                ("delta", "3", "4"),
                ("rho", "1", "3"),
                ("epsilon", "4", "1"),
            ],
            pendants: &[],
            potential: &[
                &["alpha", "beta", "alpha", "beta"],
                &["rho", "gamma", "beta"],
                &["rho", "delta", "epsilon"],
            ],
            shifts: &[("alpha", 1)],
        },
        E82Letter::F => LetterData {
            arrows: &[
                ("alpha", "1", "2"),
                ("beta", "2", "1"),
                ("gamma", "2", "3"),
                ("delta", "4", "3"),
                ("rho", "3", "1"),
                ("epsilon", "1", "4"),
            ],
            pendants: &[],
            potential: &[
                &["alpha", "beta", "alpha", "beta"],
                &["rho", "alpha", "gamma"],
                &["rho", "epsilon", "delta"],
            ],
            shifts: &[("alpha", 1), ("rho", 1), ("epsilon", 1)],
        },
        E82Letter::G => LetterData {
            arrows: &[
                ("alpha", "1", "2"),
                ("beta", "2", "1"),
                ("gamma", "2", "3"),
                ("delta", "3", "4"),
                ("epsilon", "4", "1"),
            ],
            pendants: &[],
            potential: &[
                &["alpha", "beta", "alpha", "beta"],
                &["alpha", "gamma", "delta", "epsilon"],
            ],
            shifts: &[("alpha", 1), ("gamma", 1)],
        },
    }
}

fn e82_entry(letter: E82Letter, flips: usize) -> CatalogEntry {
    let data = letter_data(letter);
    let mut arrows: Vec<Arrow> = data
        .arrows
        .iter()
        .map(|&(id, s, t)| Arrow::new(id, s, t))
        .collect();
    for (k, &(id, s, t)) in data.pendants.iter().enumerate() {
        let (s, t) = if flips >> k & 1 == 1 { (t, s) } else { (s, t) };
        arrows.push(Arrow::new(id, s, t));
    }
    let quiver = Quiver::new((1..=4).map(|i| i.to_string()).collect(), arrows)
        .expect("letter quivers are well formed");
    let terms = data
        .potential
        .iter()
        .map(|c| (1, c.iter().map(|s| s.to_string()).collect()));
    let potential = Potential::new(&quiver, terms).expect("letter potentials are cycles");
    CatalogEntry {
        descriptor: Descriptor {
            family: Family::E82(letter),
            n: 4,
            ell: 2,
            q: None,
            star_pattern: None,
        },
        qp: QuiverWithPotential::new(quiver, potential)
            .expect("letter potentials use quiver arrows"),
        cover: CoverPreset::new(2, data.shifts),
    }
}

/// The letter with its undirected edges oriented first end to second end.
pub fn gen_e82(letter: E82Letter) -> CatalogEntry {
    e82_entry(letter, 0)
}

/// Every orientation of the letter's undirected edges.
pub fn e82_variants(letter: E82Letter) -> Vec<CatalogEntry> {
    let count = letter_data(letter).pendants.len();
    (0..1usize << count)
        .map(|flips| e82_entry(letter, flips))
        .collect()
}

pub type LetterGraph = BTreeSet<(E82Letter, E82Letter)>;

/// The mutation graph of the seven letters, edges as ordered pairs `x < y`.
pub fn e82_mutation_graph() -> LetterGraph {
    use E82Letter::*;
    [
        (A, B),
        (A, D),
        (B, C),
        (C, D),
        (F, G),
        (E, G),
        (B, F),
        (D, E),
        (C, F),
        (C, E),
        (B, D),
    ]
    .into_iter()
    .collect()
}

fn e82_forms() -> &'static HashMap<CanonicalForm, E82Letter> {
    static FORMS: OnceLock<HashMap<CanonicalForm, E82Letter>> = OnceLock::new();
    FORMS.get_or_init(|| {
        let mut map = HashMap::new();
        for letter in E82Letter::ALL {
            for entry in e82_variants(letter) {
                let previous = map.insert(canonical_form(&entry.qp.quiver), letter);
                assert!(
                    previous.is_none_or(|p| p == letter),
                    "letters {letter} and {previous:?} share a quiver"
                );
            }
        }
        map
    })
}

/// The letter whose quiver (in some orientation) is isomorphic to `q`.
pub fn e82_letter_of(q: &Quiver) -> Option<E82Letter> {
    if q.vertex_count() != 4 {
        return None;
    }
    e82_forms().get(&canonical_form(q)).copied()
}

/// One mutation step from a letter variant at a vertex.
#[derive(Clone, Debug)]
pub struct E82Step {
    pub from: E82Letter,
    pub variant: usize,
    pub vertex: String,
    pub to: Option<E82Letter>,
}

/// Mutate every orientation of every letter at every vertex through its
/// 2-fold cover and record which letter each result is.
pub fn e82_closure() -> Result<Vec<E82Step>> {
    let mut steps = Vec::new();
    for letter in E82Letter::ALL {
        for (variant, entry) in e82_variants(letter).into_iter().enumerate() {
            for v in entry.qp.quiver.vertices() {
                let out = mutate_at_vertex_via_cover(&entry.qp, v, &entry.cover, None)?;
                steps.push(E82Step {
                    from: letter,
                    variant,
                    vertex: v.clone(),
                    to: e82_letter_of(&out.quiver),
                });
            }
        }
    }
    Ok(steps)
}

/// Graph of distinct letters joined by a closure step.
pub fn closure_graph(steps: &[E82Step]) -> LetterGraph {
    steps
        .iter()
        .filter_map(|s| s.to.map(|t| (s.from.min(t), s.from.max(t))))
        .filter(|(x, y)| x != y)
        .collect()
}

/// The families with the parameters `gen` accepts.
pub fn list() -> Vec<(&'static str, &'static str)> {
    vec![
        (
            "A3n3",
            "loop with alpha^3 glued to a type-A attachment; n = number of vertices, n >= 1",
        ),
        (
            "Dnll",
            "central q-cycle with potential power ell >= 2 and optional stars; n ell >= 4",
        ),
        (
            "E82a..E82g",
            "the seven four-vertex quivers of the E8,2 mutation class",
        ),
    ]
}

/// Proper power term of the potential: its primitive cycle and exponent.
fn power_term(p: &Potential) -> Option<(Vec<String>, usize)> {
    let mut found = None;
    for t in p.terms() {
        let len = t.cycle.len();
        let period =
            (1..len).find(|&d| len % d == 0 && (d..len).all(|i| t.cycle[i] == t.cycle[i - d]));
        if let Some(d) = period {
            if found.is_some() {
                return None;
            }
            found = Some((t.cycle[..d].to_vec(), len / d));
        }
    }
    found
}

/// Family and parameters of `qp`, if it is one of the catalog quivers. The
/// power `ell` is read off the potential.
pub fn classify(qp: &QuiverWithPotential) -> Option<Descriptor> {
    let q = &qp.quiver;
    if q.vertex_count() == 0 || !q.is_connected() {
        return None;
    }
    if let Some(letter) = e82_letter_of(q) {
        return Some(Descriptor {
            family: Family::E82(letter),
            n: 4,
            ell: 2,
            q: None,
            star_pattern: None,
        });
    }
    let (cycle, ell) = power_term(&qp.potential)?;
    let cycle: Vec<&Arrow> = cycle.iter().map(|a| q.arrow(a)).collect::<Option<_>>()?;
    let n = q.vertex_count();
    if cycle.len() == 1 && !q.has_two_cycles() {
        let v = &cycle[0].source;
        let rest = q.without_arrows(&BTreeSet::from([cycle[0].id.clone()]));
        if ell != 3 || rest.has_loops() || !is_type_a(&rest) {
            return None;
        }
        let d = degree(&rest, v);
        if d > 2 || (d == 2 && !is_on_triangle(&rest, v)) {
            return None;
        }
        return Some(Descriptor {
            family: Family::A3n3,
            n,
            ell,
            q: None,
            star_pattern: None,
        });
    }
    classify_dnll(q, &cycle, ell)
}

fn classify_dnll(q: &Quiver, cycle: &[&Arrow], ell: usize) -> Option<Descriptor> {
    let len = cycle.len();
    let centre: Vec<&str> = cycle.iter().map(|a| a.source.as_str()).collect();
    if centre.iter().collect::<BTreeSet<_>>().len() != len || n_ell_too_small(q.vertex_count(), ell)
    {
        return None;
    }
    let position: BTreeMap<&str, usize> = centre.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let cycle_ids: BTreeSet<&str> = cycle.iter().map(|a| a.id.as_str()).collect();
    // star vertex -> (in from centre, out to centre)
    let mut links: BTreeMap<&str, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for a in q.arrows() {
        if cycle_ids.contains(a.id.as_str()) {
            continue;
        }
        match (
            position.get(a.source.as_str()),
            position.get(a.target.as_str()),
        ) {
            (Some(_), Some(_)) => return None,
            (Some(&i), None) => links.entry(&a.target).or_default().0.push(i),
            (None, Some(&i)) => links.entry(&a.source).or_default().1.push(i),
            (None, None) => {}
        }
    }
    let mut stars: BTreeMap<usize, &str> = BTreeMap::new();
    for (s, (ins, outs)) in &links {
        // triangle alpha_i beta_i gamma_i: centre_{i+1} -> s -> centre_i
        let [from] = ins[..] else { return None };
        let [to] = outs[..] else { return None };
        if from != (to + 1) % len || stars.insert(to, s).is_some() {
            return None;
        }
    }
    if len == 1 && stars.is_empty() {
        return None;
    }
    let others: Vec<String> = q
        .vertices()
        .iter()
        .filter(|v| !position.contains_key(v.as_str()))
        .cloned()
        .collect();
    let rest = q.induced(&others);
    for comp in rest.components() {
        let names: Vec<String> = comp.iter().map(|&i| rest.vertices()[i].clone()).collect();
        let in_comp: Vec<&&str> = stars
            .values()
            .filter(|s| names.iter().any(|n| n == **s))
            .collect();
        let [s] = in_comp[..] else { return None };
        let part = rest.induced(&names);
        let d = degree(&part, s);
        if !is_type_a(&part) || d > 2 || (d == 2 && !is_on_triangle(&part, s)) {
            return None;
        }
    }
    let pattern: Vec<bool> = (0..len).map(|i| stars.contains_key(&i)).collect();
    Some(Descriptor {
        family: Family::Dnll,
        n: q.vertex_count(),
        ell,
        q: Some(len),
        star_pattern: Some(smallest_rotation(&pattern)),
    })
}

fn n_ell_too_small(n: usize, ell: usize) -> bool {
    ell < 2 || n * ell < 4
}
