use std::fmt;

use serde::Serialize;

use crate::table::{Elem, LoopTable, MAX_ORDER};

/// A subset of the elements of a loop of order at most 64.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    n: u8,
    bits: u64,
}

impl SubsetMask {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_ORDER);
        SubsetMask {
            n: n as u8,
            bits: 0,
        }
    }

    pub fn full(n: usize) -> Self {
        let bits = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        SubsetMask { n: n as u8, bits }
    }

    pub fn identity_only(n: usize) -> Self {
        Self::from_elems(n, [0])
    }

    pub fn from_elems<I: IntoIterator<Item = Elem>>(n: usize, elems: I) -> Self {
        let mut m = Self::empty(n);
        for x in elems {
            m.insert(x);
        }
        m
    }

    /// Parses 1-based labels such as `{1,2}` or `1 2`.
    pub fn from_labels(n: usize, text: &str) -> Option<Self> {
        let mut m = Self::empty(n);
        for tok in text
            .trim_matches(|c| c == '{' || c == '}')
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
        {
            let v: usize = tok.parse().ok()?;
            if v == 0 || v > n {
                return None;
            }
            m.insert(v - 1);
        }
        Some(m)
    }

    pub fn order(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn insert(&mut self, x: Elem) {
        assert!(x < self.order());
        self.bits |= 1 << x;
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        x < self.order() && self.bits >> x & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.order())
    }

    pub fn intersect(&self, other: &SubsetMask) -> SubsetMask {
        SubsetMask {
            n: self.n,
            bits: self.bits & other.bits,
        }
    }

    pub fn union(&self, other: &SubsetMask) -> SubsetMask {
        SubsetMask {
            n: self.n,
            bits: self.bits | other.bits,
        }
    }

    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = Elem> + '_ {
        let bits = self.bits;
        (0..self.order()).filter(move |&x| bits >> x & 1 == 1)
    }

    pub fn to_vec(&self) -> Vec<Elem> {
        self.iter().collect()
    }

    /// 1-based labels in increasing order.
    pub fn labels(&self) -> Vec<usize> {
        self.iter().map(|x| x + 1).collect()
    }

    /// Closed under multiplication and both divisions (and nonempty).
    pub fn is_subloop_of(&self, q: &LoopTable) -> bool {
        !self.is_empty()
            && self.iter().all(|x| {
                self.iter().all(|y| {
                    self.contains(q.mul(x, y))
                        && self.contains(q.ldiv(x, y))
                        && self.contains(q.rdiv(x, y))
                })
            })
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(usize::to_string).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetMask{self}")
    }
}

impl Serialize for SubsetMask {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.labels().serialize(serializer)
    }
}
