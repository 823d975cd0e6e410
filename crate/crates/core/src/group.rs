//! Permutation groups of small degree, stored as fully enumerated element lists.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Default element budget for closures.
pub const DEFAULT_CLOSURE_CAP: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashSet<Perm>,
}

impl PermGroup {
    pub fn trivial(degree: usize) -> Self {
        let id = Perm::identity(degree);
        PermGroup {
            degree,
            generators: Vec::new(),
            elements: vec![id.clone()],
            index: HashSet::from([id]),
        }
    }

    /// Breadth-first closure from the identity, multiplying by generators in
    /// the given order. Duplicate and identity generators are dropped first.
    pub fn closure(degree: usize, generators: &[Perm], cap: usize) -> Result<Self> {
        if let Some(bad) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::DegreeMismatch {
                left: degree,
                right: bad.degree(),
            });
        }
        let mut gens: Vec<Perm> = Vec::new();
        let mut seen_gens = HashSet::new();
        for g in generators {
            if !g.is_identity() && seen_gens.insert(g.clone()) {
                gens.push(g.clone());
            }
        }

        let id = Perm::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashSet::from([id]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in &gens {
                let next = elements[i].then(g);
                if index.contains(&next) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(Error::CapExceeded { cap });
                }
                index.insert(next.clone());
                queue.push_back(elements.len());
                elements.push(next);
            }
        }
        Ok(PermGroup {
            degree,
            generators: gens,
            elements,
            index,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    /// Elements in breadth-first discovery order; the identity comes first.
    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn contains(&self, p: &Perm) -> bool {
        self.index.contains(p)
    }

    pub fn is_abelian(&self) -> bool {
        let els = &self.elements;
        (0..els.len()).all(|i| (0..i).all(|j| els[i].then(&els[j]) == els[j].then(&els[i])))
    }

    pub fn generators_commute(&self) -> bool {
        let gens = &self.generators;
        (0..gens.len()).all(|i| (0..i).all(|j| gens[i].then(&gens[j]) == gens[j].then(&gens[i])))
    }

    /// Subgroup of elements fixing `point`, in the parent's element order.
    /// The generator list of the result is its full element list.
    pub fn stabilizer(&self, point: usize) -> PermGroup {
        assert!(
            point < self.degree,
            "point {point} outside degree {}",
            self.degree
        );
        let elements: Vec<Perm> = self
            .elements
            .iter()
            .filter(|p| p.fixes(point))
            .cloned()
            .collect();
        PermGroup {
            degree: self.degree,
            generators: elements
                .iter()
                .filter(|p| !p.is_identity())
                .cloned()
                .collect(),
            index: elements.iter().cloned().collect(),
            elements,
        }
    }

    /// Orbit of `point`, sorted.
    pub fn orbit(&self, point: usize) -> Vec<usize> {
        let mut orbit: Vec<usize> = self
            .elements
            .iter()
            .map(|p| p.apply(point))
            .collect::<HashSet<_>>()
            .into_iter()
            .collect();
        orbit.sort_unstable();
        orbit
    }

    /// Elements sorted by number of moved points, then by cycle notation.
    pub fn sorted_for_display(&self) -> Vec<Perm> {
        let mut v = self.elements.clone();
        v.sort_by_cached_key(|p| (p.moved_points(), p.to_string()));
        v
    }

    pub fn same_elements(&self, other: &PermGroup) -> bool {
        self.order() == other.order() && self.elements.iter().all(|p| other.contains(p))
    }
}
