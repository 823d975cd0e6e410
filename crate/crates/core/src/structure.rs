//! Multiplication and inner mapping groups, nuclei, center, subloops,
//! normality, factor loops and the upper central series.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::PermGroup;
use crate::mask::SubsetMask;
use crate::perm::Perm;
use crate::table::{Elem, LoopTable};

/// Largest order for which [`all_subloops`] runs.
pub const SUBLOOP_ORDER_LIMIT: usize = 16;

/// `Mlt(Q)`, generated by all left and right translations.
pub fn mlt(q: &LoopTable, cap: usize) -> Result<PermGroup> {
    let gens: Vec<Perm> = q
        .elements()
        .flat_map(|x| [q.left_translation(x), q.right_translation(x)])
        .collect();
    PermGroup::closure(q.order(), &gens, cap)
}

/// Bruck's generators of `Inn(Q)`: for every `x` the map `T_x = R_x L_x⁻¹`,
/// followed for every `y` by `R_{x,y} = R_x R_y R_{xy}⁻¹` and
/// `L_{x,y} = L_x L_y L_{yx}⁻¹`.
pub fn inner_generators(q: &LoopTable) -> Vec<Perm> {
    let left: Vec<Perm> = q.elements().map(|x| q.left_translation(x)).collect();
    let right: Vec<Perm> = q.elements().map(|x| q.right_translation(x)).collect();
    let left_inv: Vec<Perm> = left.iter().map(Perm::inverse).collect();
    let right_inv: Vec<Perm> = right.iter().map(Perm::inverse).collect();
    let mut gens = Vec::with_capacity(q.order() * (2 * q.order() + 1));
    for x in q.elements() {
        gens.push(right[x].then(&left_inv[x]));
        for y in q.elements() {
            gens.push(right[x].then(&right[y]).then(&right_inv[q.mul(x, y)]));
            gens.push(left[x].then(&left[y]).then(&left_inv[q.mul(y, x)]));
        }
    }
    gens
}

/// `Inn(Q)`, as the closure of [`inner_generators`].
pub fn inn(q: &LoopTable, cap: usize) -> Result<PermGroup> {
    PermGroup::closure(q.order(), &inner_generators(q), cap)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Nuclei {
    pub left: SubsetMask,
    pub right: SubsetMask,
    pub middle: SubsetMask,
    pub nucleus: SubsetMask,
}

pub fn nuclei(q: &LoopTable) -> Nuclei {
    let n = q.order();
    let pairs_hold =
        |pred: &dyn Fn(Elem, Elem) -> bool| q.elements().all(|x| q.elements().all(|y| pred(x, y)));
    let left = SubsetMask::from_elems(
        n,
        q.elements()
            .filter(|&a| pairs_hold(&|x, y| q.mul(q.mul(a, x), y) == q.mul(a, q.mul(x, y)))),
    );
    let right = SubsetMask::from_elems(
        n,
        q.elements()
            .filter(|&a| pairs_hold(&|x, y| q.mul(q.mul(x, y), a) == q.mul(x, q.mul(y, a)))),
    );
    let middle = SubsetMask::from_elems(
        n,
        q.elements()
            .filter(|&a| pairs_hold(&|x, y| q.mul(q.mul(x, a), y) == q.mul(x, q.mul(a, y)))),
    );
    Nuclei {
        left,
        right,
        middle,
        nucleus: left.intersect(&right).intersect(&middle),
    }
}

/// Elements commuting with everything. Not necessarily a subloop.
pub fn commutant(q: &LoopTable) -> SubsetMask {
    SubsetMask::from_elems(
        q.order(),
        q.elements()
            .filter(|&a| q.elements().all(|x| q.mul(a, x) == q.mul(x, a))),
    )
}

pub fn center(q: &LoopTable) -> SubsetMask {
    commutant(q).intersect(&nuclei(q).nucleus)
}

/// Least subloop containing `seed` and the identity.
pub fn subloop_generated(q: &LoopTable, seed: SubsetMask) -> SubsetMask {
    let mut s = seed;
    s.insert(0);
    let mut queue: VecDeque<Elem> = s.iter().collect();
    let mut members: Vec<Elem> = s.to_vec();
    while let Some(x) = queue.pop_front() {
        let mut found = Vec::new();
        for &y in &members {
            for z in [
                q.mul(x, y),
                q.mul(y, x),
                q.ldiv(x, y),
                q.ldiv(y, x),
                q.rdiv(x, y),
                q.rdiv(y, x),
            ] {
                if !s.contains(z) {
                    s.insert(z);
                    found.push(z);
                }
            }
        }
        queue.extend(found.iter().copied());
        members.extend(found);
    }
    s
}

/// Every subloop, sorted by size and then by element list.
pub fn all_subloops(q: &LoopTable) -> Result<Vec<SubsetMask>> {
    if q.order() > SUBLOOP_ORDER_LIMIT {
        return Err(Error::OrderCap {
            what: "subloop listing",
            order: q.order(),
            limit: SUBLOOP_ORDER_LIMIT,
        });
    }
    let start = SubsetMask::identity_only(q.order());
    let mut found = BTreeSet::from([start]);
    let mut work = vec![start];
    while let Some(s) = work.pop() {
        for x in q.elements().filter(|&x| !s.contains(x)) {
            let mut seed = s;
            seed.insert(x);
            let t = subloop_generated(q, seed);
            if found.insert(t) {
                work.push(t);
            }
        }
    }
    let mut out: Vec<SubsetMask> = found.into_iter().collect();
    out.sort_by_key(|m| (m.len(), m.to_vec()));
    Ok(out)
}

/// A subloop is normal iff every inner mapping generator maps it onto itself.
pub fn is_normal(q: &LoopTable, s: &SubsetMask) -> bool {
    s.is_subloop_of(q) && maps_onto_itself(s, &inner_generators(q))
}

/// Normality tested against every element of `inn`.
pub fn is_normal_under(q: &LoopTable, s: &SubsetMask, inn: &PermGroup) -> bool {
    s.is_subloop_of(q) && maps_onto_itself(s, inn.elements())
}

fn maps_onto_itself(s: &SubsetMask, maps: &[Perm]) -> bool {
    maps.iter()
        .all(|p| s.iter().all(|x| s.contains(p.apply(x))))
}

#[derive(Clone, Debug)]
pub struct FactorLoop {
    pub quotient: LoopTable,
    /// `projection[x]` is the quotient index of the coset `xS`.
    pub projection: Vec<Elem>,
    /// Least element of each coset, indexed by quotient element.
    pub representatives: Vec<Elem>,
}

impl FactorLoop {
    /// All elements whose coset is quotient element `c`.
    pub fn preimage(&self, mask: &SubsetMask) -> SubsetMask {
        SubsetMask::from_elems(
            self.projection.len(),
            (0..self.projection.len()).filter(|&x| mask.contains(self.projection[x])),
        )
    }
}

/// `Q/S` with cosets `xS` ordered by their least element.
pub fn factor_loop(q: &LoopTable, s: &SubsetMask) -> Result<FactorLoop> {
    if !is_normal(q, s) {
        return Err(Error::NotNormal);
    }
    let n = q.order();
    let coset = |x: Elem| SubsetMask::from_elems(n, s.iter().map(|t| q.mul(x, t)));

    let mut projection = vec![usize::MAX; n];
    let mut representatives = Vec::new();
    for x in q.elements() {
        if projection[x] != usize::MAX {
            continue;
        }
        let c = coset(x);
        let idx = representatives.len();
        for y in c.iter() {
            if projection[y] != usize::MAX {
                return Err(Error::IllDefined(format!(
                    "cosets of {} and {} overlap without coinciding",
                    x + 1,
                    y + 1
                )));
            }
            projection[y] = idx;
        }
        representatives.push(x);
    }
    // every member of a coset must generate that same coset
    for x in q.elements() {
        if coset(x) != coset(representatives[projection[x]]) {
            return Err(Error::IllDefined(format!("{}S is not a block", x + 1)));
        }
    }

    let m = representatives.len();
    let mut cells = vec![usize::MAX; m * m];
    for x in q.elements() {
        for y in q.elements() {
            let (a, b) = (projection[x], projection[y]);
            let c = projection[q.mul(x, y)];
            let slot = &mut cells[a * m + b];
            if *slot == usize::MAX {
                *slot = c;
            } else if *slot != c {
                return Err(Error::IllDefined(format!(
                    "product of cosets {} and {} is not constant",
                    representatives[a] + 1,
                    representatives[b] + 1
                )));
            }
        }
    }
    let quotient = LoopTable::from_flat(m, cells)
        .map_err(|e| Error::IllDefined(format!("quotient is not a loop: {e}")))?;
    Ok(FactorLoop {
        quotient,
        projection,
        representatives,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nilpotency {
    Nilpotent(usize),
    NotNilpotent,
}

impl Nilpotency {
    pub fn class(&self) -> Option<usize> {
        match *self {
            Nilpotency::Nilpotent(k) => Some(k),
            Nilpotency::NotNilpotent => None,
        }
    }

    pub fn at_most(&self, k: usize) -> bool {
        self.class().is_some_and(|c| c <= k)
    }
}

impl fmt::Display for Nilpotency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nilpotency::Nilpotent(k) => write!(f, "{k}"),
            Nilpotency::NotNilpotent => f.write_str("not nilpotent"),
        }
    }
}

/// Serialized as the class number, or `null` when not nilpotent.
impl Serialize for Nilpotency {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.class().serialize(serializer)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub terms: Vec<SubsetMask>,
    pub verdict: Nilpotency,
}

/// `Z_0 = {1}`, `Z_{i+1}` = preimage of `Z(Q/Z_i)`, until `Q` is reached or a term repeats.
pub fn upper_central_series(q: &LoopTable) -> Result<SeriesReport> {
    let mut terms = vec![SubsetMask::identity_only(q.order())];
    loop {
        let last = *terms.last().expect("series is nonempty");
        if last.is_full() {
            return Ok(SeriesReport {
                verdict: Nilpotency::Nilpotent(terms.len() - 1),
                terms,
            });
        }
        let factor = factor_loop(q, &last)?;
        let next = factor.preimage(&center(&factor.quotient));
        if next == last {
            return Ok(SeriesReport {
                terms,
                verdict: Nilpotency::NotNilpotent,
            });
        }
        terms.push(next);
    }
}

pub fn nilpotency_class(q: &LoopTable) -> Result<Nilpotency> {
    upper_central_series(q).map(|s| s.verdict)
}
