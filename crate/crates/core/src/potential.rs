//! Potentials (integer combinations of cycles up to rotation) and their
//! cyclic derivatives.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::quiver::{minimal_cycles, normalize_rotation, Quiver};

pub type Path = Vec<String>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PotentialTerm {
    pub coeff: i64,
    pub cycle: Path,
}

/// Terms are stored rotated to their least form, merged, zero terms dropped,
/// and sorted by cycle.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Potential {
    terms: Vec<PotentialTerm>,
}

impl Potential {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Build a potential, checking every term is a cycle of `q`.
    pub fn new(q: &Quiver, terms: impl IntoIterator<Item = (i64, Path)>) -> Result<Self> {
        let mut merged: BTreeMap<Path, i64> = BTreeMap::new();
        for (coeff, cycle) in terms {
            check_cycle(q, &cycle)?;
            *merged.entry(normalize_rotation(&cycle)).or_default() += coeff;
        }
        Ok(Self {
            terms: merged
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(cycle, coeff)| PotentialTerm { coeff, cycle })
                .collect(),
        })
    }

    /// Coefficient one on every minimal cycle of `q`.
    pub fn sum_of_minimal_cycles(q: &Quiver) -> Self {
        Self::new(q, minimal_cycles(q).into_iter().map(|c| (1, c)))
            .expect("minimal cycles are cycles")
    }

    pub fn terms(&self) -> &[PotentialTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn cyclic_derivative(&self, arrow: &str) -> PathSum {
        let mut out = PathSum::default();
        for t in &self.terms {
            out.add_all(&cyclic_derivative_of_cycle(&t.cycle, arrow), t.coeff);
        }
        out
    }

    pub fn arrows(&self) -> impl Iterator<Item = &String> {
        self.terms.iter().flat_map(|t| t.cycle.iter())
    }
}

pub fn sum_of_minimal_cycles_potential(q: &Quiver) -> Potential {
    Potential::sum_of_minimal_cycles(q)
}

pub fn cyclic_derivative(p: &Potential, arrow: &str) -> PathSum {
    p.cyclic_derivative(arrow)
}

/// Sum of `y x` over every way of writing `cycle` as `x arrow y`.
pub fn cyclic_derivative_of_cycle(cycle: &[String], arrow: &str) -> PathSum {
    let mut out = PathSum::default();
    for (i, a) in cycle.iter().enumerate() {
        if a == arrow {
            let path: Path = cycle[i + 1..].iter().chain(&cycle[..i]).cloned().collect();
            out.add(path, 1);
        }
    }
    out
}

fn check_cycle(q: &Quiver, cycle: &[String]) -> Result<()> {
    if cycle.is_empty() {
        return Err(Error::InvalidPotential("empty cycle".into()));
    }
    let arrows = cycle
        .iter()
        .map(|id| q.arrow(id).ok_or_else(|| Error::UnknownArrow(id.clone())))
        .collect::<Result<Vec<_>>>()?;
    for (i, a) in arrows.iter().enumerate() {
        let next = arrows[(i + 1) % arrows.len()];
        if a.target != next.source {
            return Err(Error::InvalidPotential(format!(
                "`{}` does not compose with `{}`",
                a.id, next.id
            )));
        }
    }
    Ok(())
}

/// Formal integer combination of paths.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathSum(BTreeMap<Path, i64>);

impl PathSum {
    pub fn add(&mut self, path: Path, coeff: i64) {
        let slot = self.0.entry(path.clone()).or_default();
        *slot += coeff;
        if *slot == 0 {
            self.0.remove(&path);
        }
    }

    pub fn add_all(&mut self, other: &PathSum, scale: i64) {
        for (p, c) in &other.0 {
            self.add(p.clone(), c * scale);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Path, i64)> {
        self.0.iter().map(|(p, c)| (p, *c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, path: &[String]) -> i64 {
        self.0.get(path).copied().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverWithPotential {
    pub quiver: Quiver,
    pub potential: Potential,
}

impl QuiverWithPotential {
    pub fn new(quiver: Quiver, potential: Potential) -> Result<Self> {
        for id in potential.arrows() {
            if quiver.arrow(id).is_none() {
                return Err(Error::UnknownArrow(id.clone()));
            }
        }
        Ok(Self { quiver, potential })
    }

    pub fn without_potential(quiver: Quiver) -> Self {
        Self {
            quiver,
            potential: Potential::empty(),
        }
    }

    pub fn with_minimal_cycles(quiver: Quiver) -> Self {
        let potential = Potential::sum_of_minimal_cycles(&quiver);
        Self { quiver, potential }
    }
}
