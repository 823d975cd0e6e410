//! Loop multiplication tables and the three quasigroup operations.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::perm::Perm;

/// Element index. `0` is the identity; rendered as label `1`.
pub type Elem = usize;

/// Largest supported order. Subsets of a loop must fit in a `u64` mask.
pub const MAX_ORDER: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    BadDimension,
    NotLatin,
    NoIdentity,
    BadToken,
}

/// Locations are 1-based, as in the input text.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("bad dimension: {0}")]
    BadDimension(String),
    #[error("bad token `{token}` at row {row}, column {col}")]
    BadToken {
        token: String,
        row: usize,
        col: usize,
    },
    #[error("row {row}, column {col} breaks the identity pattern")]
    NoIdentity { row: usize, col: usize },
    #[error("not a Latin square: value {value} repeats at row {row}, column {col}")]
    NotLatin {
        row: usize,
        col: usize,
        value: usize,
    },
}

impl ParseError {
    pub fn kind(&self) -> ParseErrorKind {
        match self {
            ParseError::BadDimension(_) => ParseErrorKind::BadDimension,
            ParseError::BadToken { .. } => ParseErrorKind::BadToken,
            ParseError::NoIdentity { .. } => ParseErrorKind::NoIdentity,
            ParseError::NotLatin { .. } => ParseErrorKind::NotLatin,
        }
    }
}

/// A finite loop given by its Cayley table, with identity at index 0.
///
/// Left and right division tables are derived once at construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LoopTable {
    n: usize,
    mul: Vec<u8>,
    ldiv: Vec<u8>,
    rdiv: Vec<u8>,
}

impl LoopTable {
    /// Validates a row-major 0-based table.
    pub fn from_flat(n: usize, cells: Vec<usize>) -> Result<Self, ParseError> {
        if n == 0 || n > MAX_ORDER {
            return Err(ParseError::BadDimension(format!(
                "order {n} outside 1..={MAX_ORDER}"
            )));
        }
        if cells.len() != n * n {
            return Err(ParseError::BadDimension(format!(
                "expected {} entries, found {}",
                n * n,
                cells.len()
            )));
        }
        for (i, &v) in cells.iter().enumerate() {
            if v >= n {
                return Err(ParseError::BadToken {
                    token: (v + 1).to_string(),
                    row: i / n + 1,
                    col: i % n + 1,
                });
            }
        }
        for i in 0..n {
            if cells[i] != i {
                return Err(ParseError::NoIdentity { row: 1, col: i + 1 });
            }
            if cells[i * n] != i {
                return Err(ParseError::NoIdentity { row: i + 1, col: 1 });
            }
        }
        let mut in_row = vec![0u64; n];
        let mut in_col = vec![0u64; n];
        for r in 0..n {
            for c in 0..n {
                let v = cells[r * n + c];
                let bit = 1u64 << v;
                if in_row[r] & bit != 0 || in_col[c] & bit != 0 {
                    return Err(ParseError::NotLatin {
                        row: r + 1,
                        col: c + 1,
                        value: v + 1,
                    });
                }
                in_row[r] |= bit;
                in_col[c] |= bit;
            }
        }
        Ok(Self::from_latin_unchecked(
            n,
            cells.into_iter().map(|v| v as u8).collect(),
        ))
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, ParseError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(ParseError::BadDimension("table is not square".into()));
        }
        Self::from_flat(n, rows.concat())
    }

    /// Caller guarantees a normalized Latin square.
    pub(crate) fn from_latin_unchecked(n: usize, mul: Vec<u8>) -> Self {
        let mut ldiv = vec![0u8; n * n];
        let mut rdiv = vec![0u8; n * n];
        for x in 0..n {
            for y in 0..n {
                let p = mul[x * n + y] as usize;
                // x\p = y and p/y = x
                ldiv[x * n + p] = y as u8;
                rdiv[p * n + y] = x as u8;
            }
        }
        LoopTable { n, mul, ldiv, rdiv }
    }

    /// Parses the canonical text format: `#` comment lines, the order, then
    /// `n*n` whitespace-separated 1-based labels in row-major order.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut tokens = text
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .flat_map(str::split_whitespace);
        let first = tokens
            .next()
            .ok_or_else(|| ParseError::BadDimension("empty input".into()))?;
        let n: usize = first
            .parse()
            .map_err(|_| ParseError::BadDimension(format!("`{first}` is not an order")))?;
        if n == 0 || n > MAX_ORDER {
            return Err(ParseError::BadDimension(format!(
                "order {n} outside 1..={MAX_ORDER}"
            )));
        }
        let mut cells = Vec::with_capacity(n * n);
        for (i, tok) in tokens.enumerate() {
            if i >= n * n {
                return Err(ParseError::BadDimension(format!(
                    "more than {} entries",
                    n * n
                )));
            }
            match tok.parse::<usize>() {
                Ok(v) if (1..=n).contains(&v) => cells.push(v - 1),
                _ => {
                    return Err(ParseError::BadToken {
                        token: tok.to_string(),
                        row: i / n + 1,
                        col: i % n + 1,
                    })
                }
            }
        }
        Self::from_flat(n, cells)
    }

    /// Canonical text: the order on its own line, then one line per row.
    pub fn render(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|v| (v + 1).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.n
    }

    pub fn rows(&self) -> Vec<Vec<Elem>> {
        self.mul
            .chunks(self.n)
            .map(|r| r.iter().map(|&v| v as usize).collect())
            .collect()
    }

    /// Row-major cells, 0-based.
    pub fn cells(&self) -> &[u8] {
        &self.mul
    }

    #[inline]
    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        self.mul[x * self.n + y] as usize
    }

    /// The unique `z` with `x·z = y`.
    #[inline]
    pub fn ldiv(&self, x: Elem, y: Elem) -> Elem {
        self.ldiv[x * self.n + y] as usize
    }

    /// The unique `z` with `z·y = x`.
    #[inline]
    pub fn rdiv(&self, x: Elem, y: Elem) -> Elem {
        self.rdiv[x * self.n + y] as usize
    }

    /// `L_x : y ↦ x·y`.
    pub fn left_translation(&self, x: Elem) -> Perm {
        Perm::from_raw(self.mul[x * self.n..(x + 1) * self.n].to_vec())
    }

    /// `R_x : y ↦ y·x`.
    pub fn right_translation(&self, x: Elem) -> Perm {
        Perm::from_raw((0..self.n).map(|y| self.mul[y * self.n + x]).collect())
    }

    /// The opposite loop `x∘y = y·x`, used to derive right-sided checks from left-sided ones.
    pub fn transpose(&self) -> LoopTable {
        let n = self.n;
        let mul = (0..n * n).map(|i| self.mul[(i % n) * n + i / n]).collect();
        Self::from_latin_unchecked(n, mul)
    }

    pub fn is_associative(&self) -> bool {
        self.elements().all(|x| {
            self.elements().all(|y| {
                let xy = self.mul(x, y);
                self.elements()
                    .all(|z| self.mul(xy, z) == self.mul(x, self.mul(y, z)))
            })
        })
    }

    pub fn is_commutative(&self) -> bool {
        self.elements()
            .all(|x| (0..x).all(|y| self.mul(x, y) == self.mul(y, x)))
    }
}

impl fmt::Debug for LoopTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LoopTable({:?})", self.rows())
    }
}

impl fmt::Display for LoopTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for LoopTable {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LoopTable::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::example1;

    #[test]
    fn parses_example1() {
        let text = "# Example loop\n6\n1 2 3 4 5 6\n2 1 4 3 6 5\n3 4 5 6 1 2\n\
                    4 3 6 5 2 1\n5 6 2 1 3 4\n6 5 1 2 4 3\n";
        let q = LoopTable::parse(text).unwrap();
        assert_eq!(q.order(), 6);
        assert_eq!(q, example1());
    }

    #[test]
    fn parses_trivial_loop() {
        let q = LoopTable::parse("1\n1").unwrap();
        assert_eq!(q.order(), 1);
        assert_eq!(q.mul(0, 0), 0);
    }

    #[test]
    fn duplicate_in_row_is_not_latin() {
        let err = LoopTable::parse("2\n1 2\n2 2").unwrap_err();
        assert_eq!(err.kind(), ParseErrorKind::NotLatin);
        assert!(matches!(
            err,
            ParseError::NotLatin {
                row: 2,
                value: 2,
                ..
            }
        ));
    }

    #[test]
    fn parse_errors() {
        let kind = |s: &str| LoopTable::parse(s).unwrap_err().kind();
        assert_eq!(kind(""), ParseErrorKind::BadDimension);
        assert_eq!(kind("0"), ParseErrorKind::BadDimension);
        assert_eq!(kind("65"), ParseErrorKind::BadDimension);
        assert_eq!(kind("2\n1 2 2"), ParseErrorKind::BadDimension);
        assert_eq!(kind("2\n1 2 2 1 1"), ParseErrorKind::BadDimension);
        assert_eq!(kind("2\n1 2 2 x"), ParseErrorKind::BadToken);
        assert_eq!(kind("2\n1 2 2 3"), ParseErrorKind::BadToken);
        assert_eq!(kind("2\n2 1 1 2"), ParseErrorKind::NoIdentity);
        assert_eq!(kind("3\n1 2 3 2 1 3 3 3 1"), ParseErrorKind::NotLatin);
    }

    #[test]
    fn example1_products_and_divisions() {
        let q = example1();
        // labels are 1-based in prose, 0-based here
        assert_eq!(q.mul(2, 4), 0);
        assert_eq!(q.mul(4, 2), 1);
        assert_eq!(q.mul(2, q.mul(2, 3)), 1);
        assert_eq!(q.mul(q.mul(2, 2), 3), 0);
        assert_eq!(q.ldiv(1, 3), 2);
        assert_eq!(q.ldiv(4, 0), 3);
        assert_eq!(q.rdiv(0, 2), 5);
        assert_eq!(q.ldiv(2, 0), 4);
        for x in q.elements() {
            assert_eq!(q.mul(0, x), x);
        }
    }

    #[test]
    fn example1_translations() {
        let q = example1();
        assert_eq!(q.left_translation(1).to_string(), "(1,2)(3,4)(5,6)");
        assert_eq!(q.right_translation(2).to_string(), "(1,3,5,2,4,6)");
        assert!(q.left_translation(0).is_identity());
        assert!(q.right_translation(0).is_identity());
    }

    #[test]
    fn render_round_trip() {
        let q = example1();
        assert_eq!(LoopTable::parse(&q.render()).unwrap(), q);
        assert!(q.render().starts_with("6\n1 2 3 4 5 6\n"));
    }

    #[test]
    fn transpose_swaps_arguments() {
        let q = example1();
        let t = q.transpose();
        for x in q.elements() {
            for y in q.elements() {
                assert_eq!(t.mul(x, y), q.mul(y, x));
            }
        }
        assert_eq!(t.transpose(), q);
    }
}
