//! Permutations of `{0..n-1}` acting on the right.
//!
//! `x.apply(p)` is written `xp` in loop-theory texts and products are read
//! left to right: `x(pq) = (xp)q`. Cycle notation uses 1-based labels.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    image: Vec<u8>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        assert!(degree <= 256, "degree {degree} does not fit in u8 images");
        Perm {
            image: (0..degree).map(|i| i as u8).collect(),
        }
    }

    /// Builds a permutation from its image list, checking bijectivity.
    pub fn from_images<I>(images: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let image: Vec<usize> = images.into_iter().collect();
        let n = image.len();
        let mut seen = vec![false; n];
        for &y in &image {
            if y >= n || seen[y] {
                return Err(Error::Format(format!(
                    "image list {image:?} is not a bijection"
                )));
            }
            seen[y] = true;
        }
        Ok(Perm {
            image: image.into_iter().map(|y| y as u8).collect(),
        })
    }

    /// Internal constructor for image lists already known to be bijective.
    pub(crate) fn from_raw(image: Vec<u8>) -> Self {
        debug_assert!({
            let mut s = image.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| v as usize == i)
        });
        Perm { image }
    }

    /// Parses 1-based cycle notation such as `(1,2)(3,4,5)` or `()`.
    pub fn parse_cycles(degree: usize, text: &str) -> Result<Self> {
        let mut image: Vec<usize> = (0..degree).collect();
        let mut seen = vec![false; degree];
        let bad = || Error::Format(format!("bad cycle notation `{text}`"));
        let mut rest = text.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('(').ok_or_else(bad)?;
            let close = body.find(')').ok_or_else(bad)?;
            let inner = body[..close].trim();
            rest = body[close + 1..].trim_start();
            if inner.is_empty() {
                continue;
            }
            let points = inner
                .split(',')
                .map(|t| match t.trim().parse::<usize>() {
                    Ok(v) if v >= 1 && v <= degree => Ok(v - 1),
                    _ => Err(bad()),
                })
                .collect::<Result<Vec<_>>>()?;
            for (i, &p) in points.iter().enumerate() {
                if std::mem::replace(&mut seen[p], true) {
                    return Err(bad());
                }
                image[p] = points[(i + 1) % points.len()];
            }
        }
        Perm::from_images(image)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.image.iter().map(|&y| y as usize)
    }

    /// `x(pq) = (xp)q`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(self.then(other))
    }

    /// Unchecked [`Perm::compose`]; panics on degree mismatch.
    pub(crate) fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm {
            image: self
                .image
                .iter()
                .map(|&y| other.image[y as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut image = vec![0u8; self.degree()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y as usize] = x as u8;
        }
        Perm { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &y)| i == y as usize)
    }

    pub fn fixes(&self, x: usize) -> bool {
        self.apply(x) == x
    }

    pub fn moved_points(&self) -> usize {
        self.image
            .iter()
            .enumerate()
            .filter(|&(i, &y)| i != y as usize)
            .count()
    }

    /// Nontrivial cycles, each starting at its smallest point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut done = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if done[start] || self.fixes(start) {
                continue;
            }
            let mut cycle = vec![start];
            done[start] = true;
            let mut x = self.apply(start);
            while x != start {
                done[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Sorted cycle lengths including fixed points as 1-cycles.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lens: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lens.extend(std::iter::repeat_n(
            1,
            self.degree() - lens.iter().sum::<usize>(),
        ));
        lens.sort_unstable();
        lens
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cycle in cycles {
            f.write_str("(")?;
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, s: &str) -> Perm {
        Perm::parse_cycles(n, s).unwrap()
    }

    #[test]
    fn compose_with_identity() {
        let q = p(6, "(1,3,5,2,4,6)");
        assert_eq!(q.compose(&Perm::identity(6)).unwrap(), q);
        assert_eq!(Perm::identity(6).compose(&q).unwrap(), q);
    }

    #[test]
    fn transposition_squares_to_identity() {
        let t = p(2, "(1,2)");
        assert!(t.compose(&t).unwrap().is_identity());
    }

    #[test]
    fn square_of_six_cycle() {
        let r3 = p(6, "(1,3,5,2,4,6)");
        assert_eq!(r3.compose(&r3).unwrap().to_string(), "(1,5,4)(2,6,3)");
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = p(3, "(1,2)");
        let b = p(3, "(2,3)");
        // 1 -a-> 2 -b-> 3
        assert_eq!(a.compose(&b).unwrap().apply(0), 2);
        assert_eq!(b.compose(&a).unwrap().apply(0), 1);
    }

    #[test]
    fn inverses() {
        assert!(Perm::identity(4).inverse().is_identity());
        assert_eq!(p(2, "(1,2)").inverse(), p(2, "(1,2)"));
        assert_eq!(p(6, "(1,3,5,2,4,6)").inverse().to_string(), "(1,6,4,2,5,3)");
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let err = Perm::identity(2).compose(&Perm::identity(3)).unwrap_err();
        assert!(matches!(err, Error::DegreeMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn cycle_notation_round_trip() {
        for s in ["()", "(1,2)(3,4)(5,6)", "(1,5,4)(2,6,3)", "(2,6)"] {
            assert_eq!(p(6, s).to_string(), s);
        }
        assert!(Perm::parse_cycles(3, "(1,4)").is_err());
        assert!(Perm::parse_cycles(3, "(1,2)(2,3)").is_err());
        assert!(Perm::from_images([0, 0, 1]).is_err());
    }

    #[test]
    fn cycle_type_counts_fixed_points() {
        assert_eq!(p(6, "(1,5,4)").cycle_type(), vec![1, 1, 1, 3]);
    }
}
