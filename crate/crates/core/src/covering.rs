//! Cyclic Galois covers of quivers built from voltage assignments, and
//! mutation at loops and 2-cycles by mutating the fiber upstairs.
//!
//! A base arrow `a: u -> w` with shift `s` lifts to the arrows
//! `(u, k) -> (w, k + s)` for every sheet `k` in `Z/ell`. Cover vertices
//! are named `{u}_{k+1}` and lifted arrows `{a}_{k+1}`, with `k` the sheet of
//! the source.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cycle::{derive_cb_indices, mutate_cycles, CycleSpec};
use crate::error::{Error, Result};
use crate::potential::{Path, Potential, QuiverWithPotential};
use crate::quiver::{fz_mutate_quiver, normalize_rotation, Arrow, Quiver};

/// Order of the deck group plus a shift per base arrow (missing arrows have
/// shift 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverPreset {
    pub ell: usize,
    #[serde(default)]
    pub shifts: BTreeMap<String, usize>,
}

impl CoverPreset {
    pub fn new(ell: usize, shifts: &[(&str, usize)]) -> Self {
        Self {
            ell,
            shifts: shifts.iter().map(|&(a, s)| (a.to_string(), s)).collect(),
        }
    }

    pub fn shift(&self, arrow: &str) -> usize {
        self.shifts.get(arrow).copied().unwrap_or(0)
    }

    /// Shipped presets: `a9-3` and `d6-3`.
    pub fn named(name: &str) -> Option<Self> {
        match name {
            "a9-3" => Some(Self::new(3, &[("alpha", 1)])),
            "d6-3" => Some(Self::new(3, &[("alpha", 1), ("beta", 2)])),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("presets always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug)]
pub struct CoveringMap {
    pub cover: Quiver,
    pub base: Quiver,
    pub ell: usize,
    shifts: BTreeMap<String, usize>,
    vertex_proj: BTreeMap<String, (String, usize)>,
    arrow_proj: BTreeMap<String, (String, usize)>,
    vertex_names: BTreeMap<(String, usize), String>,
}

pub fn cover_vertex_name(v: &str, sheet: usize) -> String {
    format!("{v}_{}", sheet + 1)
}

pub fn cover_arrow_name(a: &str, sheet: usize) -> String {
    format!("{a}_{}", sheet + 1)
}

pub fn build_cyclic_cover(
    base: &Quiver,
    ell: usize,
    shifts: &BTreeMap<String, usize>,
) -> Result<CoveringMap> {
    if ell < 2 {
        return Err(Error::InvalidCover(format!(
            "ell = {ell}, covers need ell >= 2"
        )));
    }
    for (a, &s) in shifts {
        if base.arrow(a).is_none() {
            return Err(Error::UnknownArrow(a.clone()));
        }
        if s >= ell {
            return Err(Error::InvalidCover(format!(
                "shift {s} of `{a}` is outside Z/{ell}"
            )));
        }
    }
    let shift = |a: &str| shifts.get(a).copied().unwrap_or(0);
    for a in base.arrows() {
        if a.is_loop() && shift(&a.id) == 0 {
            return Err(Error::InvalidCover(format!(
                "loop `{}` needs a nonzero shift",
                a.id
            )));
        }
    }
    let mut vertices = Vec::new();
    let mut vertex_proj = BTreeMap::new();
    let mut vertex_names = BTreeMap::new();
    for v in base.vertices() {
        for k in 0..ell {
            let name = cover_vertex_name(v, k);
            if vertex_proj.insert(name.clone(), (v.clone(), k)).is_some() {
                return Err(Error::InvalidCover(format!(
                    "cover vertex name `{name}` is ambiguous"
                )));
            }
            vertex_names.insert((v.clone(), k), name.clone());
            vertices.push(name);
        }
    }
    let mut arrows = Vec::new();
    let mut arrow_proj = BTreeMap::new();
    for a in base.arrows() {
        for k in 0..ell {
            let id = cover_arrow_name(&a.id, k);
            let target_sheet = (k + shift(&a.id)) % ell;
            arrows.push(Arrow::new(
                id.clone(),
                vertex_names[&(a.source.clone(), k)].clone(),
                vertex_names[&(a.target.clone(), target_sheet)].clone(),
            ));
            arrow_proj.insert(id, (a.id.clone(), k));
        }
    }
    let cover = Quiver::new(vertices, arrows)
        .map_err(|e| Error::InvalidCover(format!("lifted arrow names collide: {e}")))?;
    Ok(CoveringMap {
        cover,
        base: base.clone(),
        ell,
        shifts: shifts.clone(),
        vertex_proj,
        arrow_proj,
        vertex_names,
    })
}

impl CoveringMap {
    pub fn from_preset(base: &Quiver, preset: &CoverPreset) -> Result<Self> {
        build_cyclic_cover(base, preset.ell, &preset.shifts)
    }

    pub fn vertex_proj(&self, v: &str) -> Option<&str> {
        self.vertex_proj.get(v).map(|(b, _)| b.as_str())
    }

    pub fn sheet(&self, v: &str) -> Option<usize> {
        self.vertex_proj.get(v).map(|&(_, k)| k)
    }

    /// Base arrow of a lifted arrow.
    pub fn arrow_proj(&self, a: &str) -> Option<&str> {
        self.arrow_proj.get(a).map(|(b, _)| b.as_str())
    }

    pub fn lift_vertex(&self, v: &str, sheet: usize) -> Option<&str> {
        self.vertex_names
            .get(&(v.to_string(), sheet % self.ell))
            .map(String::as_str)
    }

    pub fn fiber(&self, v: &str) -> Vec<String> {
        (0..self.ell)
            .filter_map(|k| self.lift_vertex(v, k).map(str::to_string))
            .collect()
    }

    pub fn shift(&self, a: &str) -> usize {
        self.shifts.get(a).copied().unwrap_or(0)
    }

    /// Deck generator on vertices: `(u, k) -> (u, k + 1)`.
    pub fn deck_vertex(&self, v: &str) -> Option<String> {
        let (b, k) = self.vertex_proj.get(v)?;
        self.lift_vertex(b, k + 1).map(str::to_string)
    }

    /// Deck generator on lifted arrows.
    pub fn deck_arrow(&self, a: &str) -> Option<String> {
        let (b, k) = self.arrow_proj.get(a)?;
        Some(cover_arrow_name(b, (k + 1) % self.ell))
    }

    /// Every cover vertex has exactly one lift of each base arrow at it.
    pub fn is_locally_bijective(&self) -> bool {
        self.cover.vertices().iter().all(|x| {
            let b = self.vertex_proj(x).unwrap();
            let out: Vec<&str> = self
                .cover
                .arrows_from(x)
                .map(|a| self.arrow_proj(&a.id).unwrap())
                .collect();
            let inc: Vec<&str> = self
                .cover
                .arrows_into(x)
                .map(|a| self.arrow_proj(&a.id).unwrap())
                .collect();
            let base_out: Vec<&str> = self.base.arrows_from(b).map(|a| a.id.as_str()).collect();
            let base_in: Vec<&str> = self.base.arrows_into(b).map(|a| a.id.as_str()).collect();
            sorted(out) == sorted(base_out) && sorted(inc) == sorted(base_in)
        })
    }

    /// Lift each base term from every sheet; the term must close up.
    pub fn lift_potential(&self, p: &Potential) -> Result<Potential> {
        let mut cycles: BTreeMap<Path, i64> = BTreeMap::new();
        for t in p.terms() {
            for start in 0..self.ell {
                let mut sheet = start;
                let mut lifted = Vec::with_capacity(t.cycle.len());
                for a in &t.cycle {
                    lifted.push(cover_arrow_name(a, sheet));
                    sheet = (sheet + self.shift(a)) % self.ell;
                }
                if sheet != start {
                    return Err(Error::InvalidCover(format!(
                        "potential term {:?} does not lift to cycles: total shift is nonzero",
                        t.cycle
                    )));
                }
                cycles.insert(normalize_rotation(&lifted), t.coeff);
            }
        }
        Potential::new(&self.cover, cycles.into_iter().map(|(c, k)| (k, c)))
    }

    fn action(&self) -> DeckAction {
        DeckAction {
            ell: self.ell,
            base_vertices: self.base.vertices().to_vec(),
            vertex_base: self
                .vertex_proj
                .iter()
                .map(|(v, (b, _))| (v.clone(), b.clone()))
                .collect(),
            deck: self
                .vertex_proj
                .keys()
                .map(|v| (v.clone(), self.deck_vertex(v).unwrap()))
                .collect(),
            representative: self
                .base
                .vertices()
                .iter()
                .map(|b| (b.clone(), self.lift_vertex(b, 0).unwrap().to_string()))
                .collect(),
            arrow_names: self
                .arrow_proj
                .iter()
                .map(|(a, (b, _))| (a.clone(), b.clone()))
                .collect(),
        }
    }
}

fn sorted(mut v: Vec<&str>) -> Vec<&str> {
    v.sort_unstable();
    v
}

/// A free action of `Z/ell` on the vertices of a quiver, enough to form the
/// quotient quiver.
#[derive(Clone, Debug)]
pub struct DeckAction {
    pub ell: usize,
    /// Quotient vertices in output order.
    pub base_vertices: Vec<String>,
    /// Quotient vertex of every vertex upstairs.
    pub vertex_base: BTreeMap<String, String>,
    /// Image of every vertex upstairs under the generator.
    pub deck: BTreeMap<String, String>,
    /// Chosen vertex upstairs over each quotient vertex.
    pub representative: BTreeMap<String, String>,
    /// Preferred quotient names for arrows upstairs; others keep their id.
    pub arrow_names: BTreeMap<String, String>,
}

impl DeckAction {
    fn power(&self, v: &str, k: usize) -> String {
        let mut x = v.to_string();
        for _ in 0..k {
            x = self.deck[&x].clone();
        }
        x
    }

    /// Steps from the representative of `v`'s orbit to `v`.
    fn offset(&self, v: &str) -> usize {
        let rep = &self.representative[&self.vertex_base[v]];
        (0..self.ell)
            .find(|&k| self.power(rep, k) == v)
            .expect("free action")
    }
}

/// Quotient of a deck-invariant quiver (and its potential) by `action`.
pub fn project_by_action(
    q: &Quiver,
    potential: &Potential,
    action: &DeckAction,
) -> Result<QuiverWithPotential> {
    let ours: BTreeSet<&String> = q.vertices().iter().collect();
    let theirs: BTreeSet<&String> = action.vertex_base.keys().collect();
    if ours != theirs {
        return Err(Error::InvalidCover(
            "quiver vertices differ from the cover's".into(),
        ));
    }
    // arrows grouped by endpoints, sorted by id, so that deck images can be
    // matched position by position
    let mut by_pair: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
    for a in q.arrows() {
        by_pair
            .entry((a.source.clone(), a.target.clone()))
            .or_default()
            .push(a.id.clone());
    }
    for ((s, t), ids) in &by_pair {
        let image = (action.deck[s].clone(), action.deck[t].clone());
        let count = by_pair.get(&image).map_or(0, Vec::len);
        if count != ids.len() {
            return Err(Error::NotDeckInvariant(format!(
                "{} arrow(s) {s} -> {t} but {count} arrow(s) {} -> {}",
                ids.len(),
                image.0,
                image.1
            )));
        }
    }
    // name one arrow per orbit: the one leaving the representative
    let mut base_name: BTreeMap<String, String> = BTreeMap::new();
    let mut base_arrows: Vec<Arrow> = Vec::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for b in &action.base_vertices {
        let rep = &action.representative[b];
        for a in q.arrows_from(rep) {
            let mut name = action
                .arrow_names
                .get(&a.id)
                .cloned()
                .unwrap_or_else(|| a.id.clone());
            while !used.insert(name.clone()) {
                name.push('\'');
            }
            base_name.insert(a.id.clone(), name.clone());
            base_arrows.push(Arrow::new(
                name,
                b.clone(),
                action.vertex_base[&a.target].clone(),
            ));
        }
    }
    let quotient_arrow = |id: &str| -> String {
        let a = q.arrow(id).unwrap();
        let k = action.offset(&a.source);
        let back = action.ell - k;
        let key = (action.power(&a.source, back), action.power(&a.target, back));
        let here = &by_pair[&(a.source.clone(), a.target.clone())];
        let idx = here.iter().position(|x| x == id).unwrap();
        base_name[&by_pair[&key][idx]].clone()
    };
    let base = Quiver::new(action.base_vertices.clone(), base_arrows)?;
    let mut terms: BTreeMap<Path, i64> = BTreeMap::new();
    for t in potential.terms() {
        let projected: Path = t.cycle.iter().map(|a| quotient_arrow(a)).collect();
        terms.insert(normalize_rotation(&projected), t.coeff);
    }
    let potential = Potential::new(&base, terms.into_iter().map(|(c, k)| (k, c)))?;
    QuiverWithPotential::new(base, potential)
}

/// One base arrow per deck orbit of `q`'s arrows.
pub fn project(cm: &CoveringMap, q: &Quiver) -> Result<Quiver> {
    Ok(project_by_action(q, &Potential::empty(), &cm.action())?.quiver)
}

pub fn project_with_potential(
    cm: &CoveringMap,
    qp: &QuiverWithPotential,
) -> Result<QuiverWithPotential> {
    project_by_action(&qp.quiver, &qp.potential, &cm.action())
}

/// How the fiber of the mutated vertex sits in the cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberShape {
    /// No arrows inside the fiber.
    Isolated(Vec<String>),
    /// Disjoint oriented cycles, each listed in arrow order.
    Cycles(Vec<Vec<String>>),
}

pub fn fiber_shape(cm: &CoveringMap, v: &str) -> Result<FiberShape> {
    if !cm.base.has_vertex(v) {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    let fiber = cm.fiber(v);
    let induced = cm.cover.induced(&fiber);
    if induced.arrows().is_empty() {
        return Ok(FiberShape::Isolated(fiber));
    }
    let mut next: BTreeMap<&str, &str> = BTreeMap::new();
    for x in &fiber {
        let outs: Vec<&Arrow> = induced.arrows_from(x).collect();
        let ins = induced.arrows_into(x).count();
        if outs.len() != 1 || ins != 1 {
            return Err(Error::Unsupported(format!(
                "the fiber over `{v}` is neither a union of oriented cycles nor a set of isolated vertices"
            )));
        }
        next.insert(x.as_str(), outs[0].target.as_str());
    }
    let mut seen: BTreeSet<&str> = BTreeSet::new();
    let mut cycles = Vec::new();
    for x in &fiber {
        if seen.contains(x.as_str()) {
            continue;
        }
        let mut cycle = Vec::new();
        let mut y = x.as_str();
        while seen.insert(y) {
            cycle.push(y.to_string());
            y = next[y];
        }
        if cycle.len() < 3 {
            return Err(Error::Unsupported(format!(
                "the fiber over `{v}` contains a cycle of length {}; at least 3 is needed",
                cycle.len()
            )));
        }
        cycles.push(cycle);
    }
    Ok(FiberShape::Cycles(cycles))
}

/// Mutate the whole fiber of `v` in the cover and return the cover with the
/// mutated quiver upstairs.
pub fn mutate_fiber(
    base: &QuiverWithPotential,
    v: &str,
    preset: &CoverPreset,
    annotation: Option<&CycleSpec>,
) -> Result<(CoveringMap, Quiver)> {
    let cm = CoveringMap::from_preset(&base.quiver, preset)?;
    if cm.cover.has_loops() || cm.cover.has_two_cycles() {
        return Err(Error::Unsupported(
            "the lifted quiver has loops or 2-cycles; choose shifts that separate them".into(),
        ));
    }
    let mutated = match fiber_shape(&cm, v)? {
        FiberShape::Isolated(fiber) => {
            let mut q = cm.cover.clone();
            for x in &fiber {
                q = fz_mutate_quiver(&q, x)?;
            }
            q
        }
        FiberShape::Cycles(cycles) => {
            let specs = match annotation {
                Some(spec) => specs_from_annotation(&cm, spec, &cycles)?,
                None => {
                    let potential = if base.potential.is_empty() {
                        Potential::sum_of_minimal_cycles(&cm.cover)
                    } else {
                        cm.lift_potential(&base.potential)?
                    };
                    let lifted = QuiverWithPotential::new(cm.cover.clone(), potential)?;
                    cycles
                        .iter()
                        .map(|c| derive_cb_indices(&lifted, c))
                        .collect::<Result<Vec<_>>>()?
                }
            };
            mutate_cycles(&cm.cover, &specs)?
        }
    };
    Ok((cm, mutated))
}

/// Spread an annotation of one fiber cycle to the others along the deck.
fn specs_from_annotation(
    cm: &CoveringMap,
    spec: &CycleSpec,
    cycles: &[Vec<String>],
) -> Result<Vec<CycleSpec>> {
    let mut out: Vec<CycleSpec> = Vec::new();
    let mut current = spec.clone();
    for _ in 0..cm.ell {
        let members: BTreeSet<&String> = current.cycle.iter().collect();
        let known = out
            .iter()
            .any(|s| s.cycle.iter().any(|v| members.contains(v)));
        if !known {
            if !cycles
                .iter()
                .any(|c| c.iter().collect::<BTreeSet<_>>() == members)
            {
                return Err(Error::InvalidCycleSpec(
                    "annotation does not describe a fiber cycle".into(),
                ));
            }
            out.push(current.clone());
        }
        current = current.renamed(
            |v| cm.deck_vertex(v).unwrap_or_else(|| v.to_string()),
            |a| cm.deck_arrow(a).unwrap_or_else(|| a.to_string()),
        );
    }
    Ok(out)
}

/// Mutation at a base vertex through the cover: mutate the fiber upstairs
/// (cycle rule for loop fibers, FZ at every fiber vertex otherwise) and
/// project back. The result carries the projection of the upstairs
/// sum-of-minimal-cycles potential.
pub fn mutate_at_vertex_via_cover(
    base: &QuiverWithPotential,
    v: &str,
    preset: &CoverPreset,
    annotation: Option<&CycleSpec>,
) -> Result<QuiverWithPotential> {
    let (cm, mutated) = mutate_fiber(base, v, preset, annotation)?;
    let upstairs = QuiverWithPotential::with_minimal_cycles(mutated);
    project_with_potential(&cm, &upstairs)
}
