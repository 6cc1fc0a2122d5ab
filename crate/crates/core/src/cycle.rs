//! Mutation at an oriented cycle of summand vertices.
//!
//! A [`CycleSpec`] names the cycle `v_0 -> v_1 -> ... -> v_{l-1} -> v_0` and
//! sorts every arrow between the cycle and the rest of the quiver by how many
//! cycle steps it composes with before the composite factors through an arrow
//! outside the cycle. [`mutate_cycle`] applies the resulting quiver rule and
//! [`congruence_mutate`] gives the matrix-level answer `S M S^t` as a cross-check.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use itertools::Itertools;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_form_of_matrix, CanonicalForm};
use crate::error::{Error, Result};
use crate::matrix::{cyclic_permutation, power, IntMatrix, SkewMatrix};
use crate::potential::{Path, QuiverWithPotential};
use crate::quiver::{cancel_two_cycles, skew_matrix, Arrow, Quiver};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleSpec {
    /// Cycle vertices in order; `cycle[i] -> cycle[i + 1]` is an arrow.
    pub cycle: Vec<String>,
    /// Index for every arrow entering the cycle from outside.
    pub c_index: BTreeMap<String, usize>,
    /// Index for every arrow leaving the cycle.
    pub b_index: BTreeMap<String, usize>,
}

impl CycleSpec {
    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("cycle specs always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Rename vertices and arrows, e.g. to move a spec along a deck action.
    pub fn renamed(
        &self,
        vertex: impl Fn(&str) -> String,
        arrow: impl Fn(&str) -> String,
    ) -> CycleSpec {
        CycleSpec {
            cycle: self.cycle.iter().map(|v| vertex(v)).collect(),
            c_index: self.c_index.iter().map(|(a, &i)| (arrow(a), i)).collect(),
            b_index: self.b_index.iter().map(|(a, &i)| (arrow(a), i)).collect(),
        }
    }

    /// Check the spec against `q`: the cycle condition, full coverage of the
    /// boundary arrows, index ranges and `C_i^t = A^{i+1} B_i` for `i <= l-3`.
    pub fn validate(&self, q: &Quiver) -> Result<()> {
        cycle_arrows(q, &self.cycle)?;
        let l = self.cycle.len();
        let bip = classify_bipartition(q, &self.cycle)?;
        let expect_keys = |arrows: &[String],
                           map: &BTreeMap<String, usize>,
                           what: &str|
         -> Result<()> {
            let want: BTreeSet<&String> = arrows.iter().collect();
            let have: BTreeSet<&String> = map.keys().collect();
            if want != have {
                let missing: Vec<_> = want.difference(&have).collect();
                let extra: Vec<_> = have.difference(&want).collect();
                return Err(Error::InvalidCycleSpec(format!(
                    "{what} must list exactly the arrows {what_dir}; missing {missing:?}, unexpected {extra:?}",
                    what_dir = if what == "c_index" { "entering the cycle" } else { "leaving the cycle" }
                )));
            }
            if let Some((a, i)) = map.iter().find(|(_, &i)| i > l - 2) {
                return Err(Error::InvalidCycleSpec(format!(
                    "{what}[{a}] = {i} exceeds l - 2 = {}",
                    l - 2
                )));
            }
            Ok(())
        };
        expect_keys(&bip.fm, &self.c_index, "c_index")?;
        expect_keys(&bip.mf, &self.b_index, "b_index")?;
        // C_i[x][k] must equal B_i[k + i + 1][x]
        let pos: BTreeMap<&str, usize> = self
            .cycle
            .iter()
            .enumerate()
            .map(|(k, v)| (v.as_str(), k))
            .collect();
        for i in 0..l.saturating_sub(2) {
            let mut lhs: BTreeMap<(String, usize), i64> = BTreeMap::new();
            for (id, _) in self.c_index.iter().filter(|(_, &c)| c == i) {
                let g = q.arrow(id).unwrap();
                let k = pos[g.target.as_str()];
                *lhs.entry((g.source.clone(), (k + i + 1) % l)).or_default() += 1;
            }
            let mut rhs: BTreeMap<(String, usize), i64> = BTreeMap::new();
            for (id, _) in self.b_index.iter().filter(|(_, &b)| b == i) {
                let b = q.arrow(id).unwrap();
                *rhs.entry((b.target.clone(), pos[b.source.as_str()]))
                    .or_default() += 1;
            }
            if lhs != rhs {
                return Err(Error::InvalidCycleSpec(format!(
                    "index {i} arrows entering and leaving the cycle do not match up (C_{i}^t != A^{} B_{i})",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

/// The arrows `alpha_k: v_k -> v_{k+1}` of the cycle, after checking the
/// cycle vertices induce exactly that cycle and nothing else.
fn cycle_arrows(q: &Quiver, cycle: &[String]) -> Result<Vec<String>> {
    let l = cycle.len();
    if l < 3 {
        return Err(Error::InvalidCycleSpec(format!(
            "cycle length {l} is below 3"
        )));
    }
    let set: BTreeSet<&String> = cycle.iter().collect();
    if set.len() != l {
        return Err(Error::InvalidCycleSpec("cycle repeats a vertex".into()));
    }
    for v in cycle {
        if !q.has_vertex(v) {
            return Err(Error::UnknownVertex(v.clone()));
        }
    }
    let induced = q.induced(cycle);
    if induced.arrows().len() != l {
        return Err(Error::InvalidCycleSpec(format!(
            "cycle vertices induce {} arrows, expected exactly {l}",
            induced.arrows().len()
        )));
    }
    (0..l)
        .map(|k| {
            let (s, t) = (&cycle[k], &cycle[(k + 1) % l]);
            induced
                .arrows_from(s)
                .find(|a| &a.target == t)
                .map(|a| a.id.clone())
                .ok_or_else(|| Error::InvalidCycleSpec(format!("no arrow {s} -> {t} on the cycle")))
        })
        .collect()
}

/// Arrow ids grouped by which side of the vertex bipartition their ends lie
/// on (`m` = the given vertices, `f` = the rest).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bipartition {
    pub mm: Vec<String>,
    pub mf: Vec<String>,
    pub fm: Vec<String>,
    pub ff: Vec<String>,
}

pub fn classify_bipartition(q: &Quiver, m: &[String]) -> Result<Bipartition> {
    for v in m {
        if !q.has_vertex(v) {
            return Err(Error::UnknownVertex(v.clone()));
        }
    }
    let set: BTreeSet<&String> = m.iter().collect();
    let mut out = Bipartition::default();
    for a in q.arrows() {
        let slot = match (set.contains(&a.source), set.contains(&a.target)) {
            (true, true) => &mut out.mm,
            (true, false) => &mut out.mf,
            (false, true) => &mut out.fm,
            (false, false) => &mut out.ff,
        };
        slot.push(a.id.clone());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Decision {
    Yes,
    No,
    Unknown,
}

impl Decision {
    fn and(self, other: Decision) -> Decision {
        match (self, other) {
            (Decision::No, _) | (_, Decision::No) => Decision::No,
            (Decision::Unknown, _) | (_, Decision::Unknown) => Decision::Unknown,
            _ => Decision::Yes,
        }
    }

    fn or(self, other: Decision) -> Decision {
        match (self, other) {
            (Decision::Yes, _) | (_, Decision::Yes) => Decision::Yes,
            (Decision::Unknown, _) | (_, Decision::Unknown) => Decision::Unknown,
            _ => Decision::No,
        }
    }
}

struct Rule {
    lhs: Path,
    /// Paths the left side may be replaced by (signs dropped); empty means
    /// the left side is zero.
    rhs: Vec<Path>,
}

/// Decides "this path factors through an arrow outside the cycle" by
/// rewriting with the cyclic derivatives of the potential.
struct Rewriter<'a> {
    rules: Vec<Rule>,
    outside: &'a BTreeSet<String>,
    max_len: usize,
    max_depth: usize,
}

impl<'a> Rewriter<'a> {
    fn new(qp: &QuiverWithPotential, outside: &'a BTreeSet<String>, l: usize) -> Self {
        let mut rules = Vec::new();
        for a in qp.quiver.arrows() {
            let relation = qp.potential.cyclic_derivative(&a.id);
            let terms: Vec<Path> = relation.terms().map(|(p, _)| p.clone()).collect();
            for (i, t) in terms.iter().enumerate() {
                let rhs = terms
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, p)| p.clone())
                    .collect();
                rules.push(Rule {
                    lhs: t.clone(),
                    rhs,
                });
            }
        }
        Self {
            rules,
            outside,
            max_len: 2 * l,
            max_depth: 2 * l,
        }
    }

    fn factors(&self, path: &[String]) -> Decision {
        let mut seen = vec![path.to_vec()];
        self.factors_from(path, 0, &mut seen)
    }

    fn factors_from(&self, path: &[String], depth: usize, seen: &mut Vec<Path>) -> Decision {
        if path.iter().any(|a| self.outside.contains(a)) {
            return Decision::Yes;
        }
        if path.len() > self.max_len || depth > self.max_depth {
            return Decision::Unknown;
        }
        let mut result = Decision::No;
        for rule in &self.rules {
            let n = rule.lhs.len();
            if n == 0 || n > path.len() {
                continue;
            }
            for pos in 0..=path.len() - n {
                if path[pos..pos + n] != rule.lhs[..] {
                    continue;
                }
                if rule.rhs.is_empty() {
                    return Decision::Yes;
                }
                let mut all = Decision::Yes;
                for r in &rule.rhs {
                    let next: Path = path[..pos]
                        .iter()
                        .chain(r)
                        .chain(&path[pos + n..])
                        .cloned()
                        .collect();
                    let sub = if seen.contains(&next) {
                        Decision::No
                    } else {
                        seen.push(next.clone());
                        let d = self.factors_from(&next, depth + 1, seen);
                        seen.pop();
                        d
                    };
                    all = all.and(sub);
                    if all == Decision::No {
                        break;
                    }
                }
                result = result.or(all);
                if result == Decision::Yes {
                    return result;
                }
            }
        }
        result
    }
}

/// Compute the C/B indices of every boundary arrow from the potential:
/// `c_index(g)` is the least `i <= l-3` such that `g` followed by `i + 1`
/// cycle arrows rewrites into paths through arrows outside the cycle, and
/// `l - 2` if there is none. `b_index` is the dual for arrows leaving.
pub fn derive_cb_indices(qp: &QuiverWithPotential, cycle: &[String]) -> Result<CycleSpec> {
    let q = &qp.quiver;
    let alphas = cycle_arrows(q, cycle)?;
    let l = cycle.len();
    let bip = classify_bipartition(q, cycle)?;
    let outside: BTreeSet<String> = bip.ff.iter().cloned().collect();
    let rewriter = Rewriter::new(qp, &outside, l);
    let pos: BTreeMap<&str, usize> = cycle
        .iter()
        .enumerate()
        .map(|(k, v)| (v.as_str(), k))
        .collect();

    let first_factoring = |id: &str, make_path: &dyn Fn(usize) -> Path| -> Result<usize> {
        for i in 0..=l - 3 {
            match rewriter.factors(&make_path(i)) {
                Decision::Yes => return Ok(i),
                Decision::Unknown => return Err(Error::UndecidableAnnotation(id.to_string())),
                Decision::No => {}
            }
        }
        Ok(l - 2)
    };

    let mut c_index = BTreeMap::new();
    for id in &bip.fm {
        let k = pos[q.arrow(id).unwrap().target.as_str()];
        let make = |i: usize| -> Path {
            std::iter::once(id.clone())
                .chain((0..=i).map(|j| alphas[(k + j) % l].clone()))
                .collect()
        };
        c_index.insert(id.clone(), first_factoring(id, &make)?);
    }
    let mut b_index = BTreeMap::new();
    for id in &bip.mf {
        let k = pos[q.arrow(id).unwrap().source.as_str()];
        let make = |i: usize| -> Path {
            (0..=i)
                .rev()
                .map(|j| alphas[(k + l - 1 - j) % l].clone())
                .chain(std::iter::once(id.clone()))
                .collect()
        };
        b_index.insert(id.clone(), first_factoring(id, &make)?);
    }
    let spec = CycleSpec {
        cycle: cycle.to_vec(),
        c_index,
        b_index,
    };
    spec.validate(q)?;
    Ok(spec)
}

fn require_clean(q: &Quiver) -> Result<()> {
    if q.has_loops() || q.has_two_cycles() {
        return Err(Error::Unsupported(
            "cycle mutation needs a quiver without loops or 2-cycles; lift to a cover first".into(),
        ));
    }
    Ok(())
}

/// Mutation at the cycle described by `spec`.
pub fn mutate_cycle(q: &Quiver, spec: &CycleSpec) -> Result<Quiver> {
    mutate_cycles(q, std::slice::from_ref(spec))
}

/// Simultaneous mutation at several vertex-disjoint, mutually non-adjacent
/// cycles. Every rewrite is read off the input quiver.
pub fn mutate_cycles(q: &Quiver, specs: &[CycleSpec]) -> Result<Quiver> {
    require_clean(q)?;
    let mut all_cycle_vertices: BTreeSet<&String> = BTreeSet::new();
    for spec in specs {
        spec.validate(q)?;
        for v in &spec.cycle {
            if !all_cycle_vertices.insert(v) {
                return Err(Error::InvalidCycleSpec(format!(
                    "vertex {v} is on two of the cycles"
                )));
            }
        }
    }
    for (i, s1) in specs.iter().enumerate() {
        for s2 in &specs[i + 1..] {
            let joined: Vec<String> = s1.cycle.iter().chain(&s2.cycle).cloned().collect();
            if q.induced(&joined).arrows().len() != s1.len() + s2.len() {
                return Err(Error::InvalidCycleSpec(
                    "cycles are joined by arrows".into(),
                ));
            }
        }
    }

    let mut removed: BTreeSet<String> = BTreeSet::new();
    let mut added: Vec<Arrow> = Vec::new();
    for spec in specs {
        let l = spec.len();
        let alphas = cycle_arrows(q, &spec.cycle)?;
        let pos: BTreeMap<&str, usize> = spec
            .cycle
            .iter()
            .enumerate()
            .map(|(k, v)| (v.as_str(), k))
            .collect();
        let alpha_run = |from: usize, count: usize| -> Vec<&str> {
            (0..count)
                .map(|j| alphas[(from + j) % l].as_str())
                .collect()
        };
        // (b) entering arrows with the top index turn around
        for (id, &c) in &spec.c_index {
            if c == l - 2 {
                let g = q.arrow(id).unwrap();
                let k = pos[g.target.as_str()];
                let name = format!("[{} {}]^t", id, alpha_run(k, l - 1).join(" "));
                added.push(Arrow::new(
                    name,
                    spec.cycle[(k + l - 1) % l].clone(),
                    g.source.clone(),
                ));
                removed.insert(id.clone());
            }
        }
        // (c) leaving arrows likewise
        for (id, &b) in &spec.b_index {
            if b == l - 2 {
                let beta = q.arrow(id).unwrap();
                let k = pos[beta.source.as_str()];
                let name = format!("[{} {}]^t", alpha_run(k + 1, l - 1).join(" "), id);
                added.push(Arrow::new(
                    name,
                    beta.target.clone(),
                    spec.cycle[(k + 1) % l].clone(),
                ));
                removed.insert(id.clone());
            }
        }
        // (e) composites through the cycle that do not factor outside it
        for (gid, &c) in &spec.c_index {
            let g = q.arrow(gid).unwrap();
            let k = pos[g.target.as_str()];
            for (bid, &b) in &spec.b_index {
                if c.max(b) != l - 2 {
                    continue;
                }
                let beta = q.arrow(bid).unwrap();
                let j = (pos[beta.source.as_str()] + l - k) % l;
                if j > c.min(b) {
                    continue;
                }
                let mut parts = vec![gid.as_str()];
                parts.extend(alpha_run(k, j));
                parts.push(bid.as_str());
                added.push(Arrow::new(
                    format!("[{}]", parts.join(" ")),
                    g.source.clone(),
                    beta.target.clone(),
                ));
            }
        }
    }

    let mut used: HashSet<String> = HashSet::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    for a in q
        .arrows()
        .iter()
        .filter(|a| !removed.contains(&a.id))
        .cloned()
        .chain(added)
    {
        if a.is_loop() {
            continue;
        }
        let mut a = a;
        while !used.insert(a.id.clone()) {
            a.id.push('\'');
        }
        arrows.push(a);
    }
    let arrows = cancel_two_cycles(arrows, None);
    Quiver::new(q.vertices().to_vec(), arrows)
}

/// Block data of a quiver split by a cycle: vertex order is the cycle
/// followed by the remaining vertices in the quiver's order.
#[derive(Clone, Debug)]
pub struct CycleBlocks {
    pub order: Vec<String>,
    pub l: usize,
    /// Cyclic permutation matrix of the cycle.
    pub a: IntMatrix,
    /// `b_parts[i][(k, x)]`: arrows `v_k -> x` with index `i`.
    pub b_parts: Vec<IntMatrix>,
    /// `c_parts[i][(x, k)]`: arrows `x -> v_k` with index `i`.
    pub c_parts: Vec<IntMatrix>,
    /// Arrows among the remaining vertices.
    pub d: IntMatrix,
    /// Skew matrix of the whole quiver in `order`.
    pub m: SkewMatrix,
}

impl CycleBlocks {
    pub fn new(q: &Quiver, spec: &CycleSpec) -> Result<Self> {
        spec.validate(q)?;
        let l = spec.len();
        let set: BTreeSet<&String> = spec.cycle.iter().collect();
        let rest: Vec<String> = q
            .vertices()
            .iter()
            .filter(|v| !set.contains(v))
            .cloned()
            .collect();
        let f = rest.len();
        let order: Vec<String> = spec.cycle.iter().chain(&rest).cloned().collect();
        let cpos: BTreeMap<&str, usize> = spec
            .cycle
            .iter()
            .enumerate()
            .map(|(k, v)| (v.as_str(), k))
            .collect();
        let fpos: BTreeMap<&str, usize> = rest
            .iter()
            .enumerate()
            .map(|(k, v)| (v.as_str(), k))
            .collect();
        let mut b_parts = vec![IntMatrix::zeros(l, f); l - 1];
        let mut c_parts = vec![IntMatrix::zeros(f, l); l - 1];
        for (id, &i) in &spec.b_index {
            let a = q.arrow(id).unwrap();
            b_parts[i][(cpos[a.source.as_str()], fpos[a.target.as_str()])] += 1;
        }
        for (id, &i) in &spec.c_index {
            let a = q.arrow(id).unwrap();
            c_parts[i][(fpos[a.source.as_str()], cpos[a.target.as_str()])] += 1;
        }
        let mut d = IntMatrix::zeros(f, f);
        for a in q.arrows() {
            if let (Some(&s), Some(&t)) = (fpos.get(a.source.as_str()), fpos.get(a.target.as_str()))
            {
                d[(s, t)] += 1;
            }
        }
        let m = skew_matrix(q, &order)?;
        Ok(Self {
            order,
            l,
            a: cyclic_permutation(l),
            b_parts,
            c_parts,
            d,
            m,
        })
    }

    pub fn f(&self) -> usize {
        self.order.len() - self.l
    }

    pub fn b(&self) -> IntMatrix {
        self.b_parts
            .iter()
            .fold(IntMatrix::zeros(self.l, self.f()), |acc, x| acc + x)
    }

    pub fn c(&self) -> IntMatrix {
        self.c_parts
            .iter()
            .fold(IntMatrix::zeros(self.f(), self.l), |acc, x| acc + x)
    }

    /// `sum_{j=0}^{i} A^j`
    fn a_sum(&self, i: usize) -> IntMatrix {
        (0..=i).fold(IntMatrix::zeros(self.l, self.l), |acc, j| {
            acc + power(&self.a, j)
        })
    }

    /// `sum_{j=0}^{i} A^{-j}`
    fn a_inv_sum(&self, i: usize) -> IntMatrix {
        let inv = self.a.transpose();
        (0..=i).fold(IntMatrix::zeros(self.l, self.l), |acc, j| {
            acc + power(&inv, j)
        })
    }
}

/// The exchange matrix of the cycle mutation, plain and with the top-left
/// block twisted by `A^{-1}` so that it maps onto the mutated quiver's own
/// vertex labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeMatrix {
    pub order: Vec<String>,
    pub untwisted: IntMatrix,
    pub twisted: IntMatrix,
}

pub fn build_exchange_matrix(blocks: &CycleBlocks) -> ExchangeMatrix {
    let (l, f) = (blocks.l, blocks.f());
    let n = l + f;
    let x = blocks
        .c_parts
        .iter()
        .enumerate()
        .fold(IntMatrix::zeros(f, l), |acc, (i, ci)| {
            acc + ci * blocks.a_sum(i)
        });
    let assemble = |top_left: &IntMatrix| {
        let mut s = IntMatrix::zeros(n, n);
        s.view_mut((0, 0), (l, l)).copy_from(top_left);
        s.view_mut((l, 0), (f, l)).copy_from(&x);
        s.view_mut((l, l), (f, f))
            .copy_from(&IntMatrix::identity(f, f));
        s
    };
    let minus_identity = -IntMatrix::identity(l, l);
    let minus_inverse = -blocks.a.transpose();
    ExchangeMatrix {
        order: blocks.order.clone(),
        untwisted: assemble(&minus_identity),
        twisted: assemble(&minus_inverse),
    }
}

/// `S M S^t`.
pub fn congruence_mutate(m: &SkewMatrix, s: &IntMatrix) -> Result<SkewMatrix> {
    if s.nrows() != m.dim() || s.ncols() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: s.nrows().max(s.ncols()),
        });
    }
    SkewMatrix::new(s * m.entries() * s.transpose())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Four exact matrix identities behind the cycle rule, evaluated on this
/// instance:
/// 1. the cycle block of `S M S^t` is `A - A^t`;
/// 2. the terms quadratic in `C_{l-2}` cancel;
/// 3. the double sum over indices below `l-2` vanishes;
/// 4. the off-diagonal block equals
///    `sum C_i - sum B_i^t + (A^{l-1} B_{l-2})^t - C_{l-2} A^{l-1}` (sums over `i <= l-3`).
pub fn verify_block_identities(blocks: &CycleBlocks) -> IdentityReport {
    let (l, f) = (blocks.l, blocks.f());
    let a = &blocks.a;
    let a_inv = a.transpose();
    let top = l - 2;
    let s = build_exchange_matrix(blocks);
    let mutated = &s.twisted * blocks.m.entries() * s.twisted.transpose();

    let cycle_block = mutated.view((0, 0), (l, l)).into_owned();
    let first = cycle_block == a - a.transpose();

    let c_top = &blocks.c_parts[top];
    let sum_top = blocks.a_sum(top);
    let c_sum = c_top * &sum_top;
    let quadratic = &c_sum * (a - &a_inv) * c_sum.transpose()
        - c_top * &sum_top * c_top.transpose()
        + c_top * c_sum.transpose();
    let second = quadratic == IntMatrix::zeros(f, f);

    let identity = IntMatrix::identity(l, l);
    let mut double_sum = IntMatrix::zeros(f, f);
    for i1 in 0..top {
        for i2 in 0..top {
            let bracket = blocks.a_sum(i1) * (a - &a_inv) * blocks.a_inv_sum(i2)
                + blocks.a_sum(i1) * (power(&a_inv, i2 + 1) - &identity)
                + (&identity - power(a, i1 + 1)) * blocks.a_inv_sum(i2);
            double_sum += &blocks.c_parts[i1] * bracket * blocks.c_parts[i2].transpose();
        }
    }
    let third = double_sum == IntMatrix::zeros(f, f);

    let low_c = (0..top).fold(IntMatrix::zeros(f, l), |acc, i| acc + &blocks.c_parts[i]);
    let low_b = (0..top).fold(IntMatrix::zeros(l, f), |acc, i| acc + &blocks.b_parts[i]);
    let a_last = power(a, l - 1);
    let closed =
        low_c - low_b.transpose() + (&a_last * &blocks.b_parts[top]).transpose() - c_top * &a_last;
    let fourth = mutated.view((l, 0), (f, l)).into_owned() == closed;

    IdentityReport {
        checks: vec![
            IdentityCheck {
                name: "cycle block is A - A^t",
                passed: first,
            },
            IdentityCheck {
                name: "top-index quadratic terms cancel",
                passed: second,
            },
            IdentityCheck {
                name: "lower-index double sum vanishes",
                passed: third,
            },
            IdentityCheck {
                name: "off-diagonal block closed form",
                passed: fourth,
            },
        ],
    }
}

/// Shortest FZ mutation sequence from `q` into the isomorphism class of
/// `target`, by breadth-first search over canonical forms.
pub fn find_fz_sequence(q: &Quiver, target: &Quiver, max_depth: usize) -> Option<Vec<String>> {
    find_fz_sequence_within(q, target, max_depth, q.vertices())
}

/// As [`find_fz_sequence`], mutating only at vertices in `allowed`.
pub fn find_fz_sequence_within(
    q: &Quiver,
    target: &Quiver,
    max_depth: usize,
    allowed: &[String],
) -> Option<Vec<String>> {
    if q.has_loops() || q.has_two_cycles() || target.has_loops() || target.has_two_cycles() {
        return None;
    }
    let allowed: Vec<usize> = allowed.iter().filter_map(|v| q.index_of(v)).collect();
    let goal = canonical_form_of_matrix(&target.adjacency());
    let start = skew_matrix(q, q.vertices()).ok()?;
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    let first = form_of(&start);
    if first == goal {
        return Some(Vec::new());
    }
    seen.insert(first);
    let mut queue: VecDeque<(SkewMatrix, Vec<usize>)> = VecDeque::from([(start, Vec::new())]);
    while let Some((m, path)) = queue.pop_front() {
        if path.len() >= max_depth {
            continue;
        }
        for &k in &allowed {
            if path.last() == Some(&k) {
                continue;
            }
            let next = m.mutate(k).expect("index in range");
            let form = form_of(&next);
            if !seen.insert(form.clone()) {
                continue;
            }
            let mut p = path.clone();
            p.push(k);
            if form == goal {
                return Some(p.into_iter().map(|i| q.vertices()[i].clone()).collect());
            }
            queue.push_back((next, p));
        }
    }
    None
}

/// Labeled variant of [`find_fz_sequence`]: mutate only at `allowed` and
/// stop when the skew matrix equals `target`'s in the same vertex labels,
/// allowing the `allowed` vertices to be permuted among themselves (at most
/// 8 of them). Vertices outside `allowed` must match exactly.
pub fn find_labeled_fz_sequence(
    q: &Quiver,
    target: &Quiver,
    max_depth: usize,
    allowed: &[String],
) -> Option<Vec<String>> {
    if q.has_loops() || q.has_two_cycles() || target.has_loops() || target.has_two_cycles() {
        return None;
    }
    let order = q.vertices();
    let start = skew_matrix(q, order).ok()?;
    let goal = skew_matrix(target, order).ok()?;
    let movable: Vec<usize> = allowed.iter().filter_map(|v| q.index_of(v)).collect();
    if movable.len() > 8 {
        return None;
    }
    let goals: HashSet<SkewMatrix> = movable
        .iter()
        .copied()
        .permutations(movable.len())
        .map(|images| {
            let mut perm: Vec<usize> = (0..order.len()).collect();
            for (&from, &to) in movable.iter().zip(&images) {
                perm[from] = to;
            }
            goal.permuted(&perm)
        })
        .collect();
    if goals.contains(&start) {
        return Some(Vec::new());
    }
    let mut seen: HashSet<SkewMatrix> = HashSet::from([start.clone()]);
    let mut queue: VecDeque<(SkewMatrix, Vec<usize>)> = VecDeque::from([(start, Vec::new())]);
    while let Some((m, path)) = queue.pop_front() {
        if path.len() >= max_depth {
            continue;
        }
        for &k in &movable {
            if path.last() == Some(&k) {
                continue;
            }
            let next = m.mutate(k).expect("index in range");
            if !seen.insert(next.clone()) {
                continue;
            }
            let mut p = path.clone();
            p.push(k);
            if goals.contains(&next) {
                return Some(p.into_iter().map(|i| order[i].clone()).collect());
            }
            queue.push_back((next, p));
        }
    }
    None
}

pub(crate) fn positive_part(m: &SkewMatrix) -> Vec<Vec<u32>> {
    m.to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|x| x.max(0) as u32).collect())
        .collect()
}

fn form_of(m: &SkewMatrix) -> CanonicalForm {
    canonical_form_of_matrix(&positive_part(m))
}

/// Exchange matrix as a plain row list, for reports.
pub fn matrix_rows(m: &DMatrix<i64>) -> Vec<Vec<i64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}
