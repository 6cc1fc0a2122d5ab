//! Breadth-first exploration of a mutation class up to isomorphism.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::canonical::{canonical_form_of_matrix, CanonicalForm};
use crate::cycle::positive_part;
use crate::error::{Error, Result};
use crate::matrix::SkewMatrix;
use crate::quiver::{skew_matrix, Quiver};

/// Isomorphism classes reached from a quiver, in discovery order.
#[derive(Clone, Debug)]
pub struct MutationClass {
    pub forms: Vec<CanonicalForm>,
    /// Depth at which each class was first reached.
    pub depths: Vec<usize>,
    /// Exchange graph on class indices, `(i, j)` with `i < j`.
    pub edges: BTreeSet<(usize, usize)>,
    /// False when some class at the depth limit still had unexplored
    /// neighbours.
    pub complete: bool,
}

impl MutationClass {
    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Number of new classes per depth.
    pub fn counts_per_depth(&self) -> Vec<usize> {
        let max = self.depths.iter().copied().max().unwrap_or(0);
        let mut counts = vec![0; max + 1];
        for &d in &self.depths {
            counts[d] += 1;
        }
        counts
    }

    pub fn index_of(&self, form: &CanonicalForm) -> Option<usize> {
        self.forms.iter().position(|f| f == form)
    }
}

/// Explore FZ mutations of `q` up to `max_depth` steps.
pub fn explore(q: &Quiver, max_depth: usize) -> Result<MutationClass> {
    if q.has_loops() || q.has_two_cycles() {
        return Err(Error::Unsupported(
            "the mutation class is only defined for quivers without loops or 2-cycles".into(),
        ));
    }
    let start = skew_matrix(q, q.vertices())?;
    let form = |m: &SkewMatrix| canonical_form_of_matrix(&positive_part(m));
    let mut index: HashMap<CanonicalForm, usize> = HashMap::new();
    let mut class = MutationClass {
        forms: Vec::new(),
        depths: Vec::new(),
        edges: BTreeSet::new(),
        complete: true,
    };
    let first = form(&start);
    index.insert(first.clone(), 0);
    class.forms.push(first);
    class.depths.push(0);
    let mut queue = VecDeque::from([(start, 0usize, 0usize)]);
    while let Some((m, id, depth)) = queue.pop_front() {
        for k in 0..m.dim() {
            let next = m.mutate(k).expect("index in range");
            let f = form(&next);
            let j = match index.get(&f) {
                Some(&j) => j,
                None if depth < max_depth => {
                    let j = class.forms.len();
                    index.insert(f.clone(), j);
                    class.forms.push(f);
                    class.depths.push(depth + 1);
                    queue.push_back((next, j, depth + 1));
                    j
                }
                None => {
                    class.complete = false;
                    continue;
                }
            };
            if j != id {
                class.edges.insert((id.min(j), id.max(j)));
            }
        }
    }
    Ok(class)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_is_one_class() {
        let q = Quiver::from_triples(&["1", "2"], &[("a", "1", "2")]).unwrap();
        let c = explore(&q, 5).unwrap();
        assert_eq!(c.len(), 1);
        assert!(c.complete);
    }

    #[test]
    fn a3_has_four_shapes() {
        // linear in three orientations up to isomorphism, and the 3-cycle
        let q =
            Quiver::from_triples(&["1", "2", "3"], &[("a", "1", "2"), ("b", "2", "3")]).unwrap();
        let c = explore(&q, 10).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.complete);
        assert_eq!(c.counts_per_depth().iter().sum::<usize>(), 4);
    }

    #[test]
    fn kronecker_grows_without_bound() {
        let q = Quiver::from_triples(
            &["1", "2", "3"],
            &[("a", "1", "2"), ("b", "1", "2"), ("c", "2", "3")],
        )
        .unwrap();
        let c = explore(&q, 3).unwrap();
        assert!(!c.complete);
    }

    #[test]
    fn loops_are_rejected() {
        let q = Quiver::from_triples(&["1"], &[("a", "1", "1")]).unwrap();
        assert!(explore(&q, 2).unwrap_err().is_unsupported_mutation());
    }
}
