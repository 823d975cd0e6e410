//! Exhaustive generation of loops of small order as normalized Latin squares.
//!
//! Cells outside the identity row and column are filled in row-major order,
//! smallest admissible value first, so tables come out in increasing
//! lexicographic order of their row-major cells.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::conjecture::{is_aim, AimMethod};
use crate::error::{Error, Result};
use crate::structure::nilpotency_class;
use crate::table::LoopTable;
use crate::variety::{variety_membership, VarietyId};

/// Largest order for unfiltered or cheaply filtered exhaustive runs.
pub const ENUMERATION_ORDER_LIMIT: usize = 7;
/// Largest order for filters that analyse each table in depth.
pub const ANALYSIS_ORDER_LIMIT: usize = 6;

/// Depth-first iterator over all normalized Latin squares of one order,
/// optionally restricted to completions of a fixed prefix of free cells.
pub struct NormalizedLoops {
    n: usize,
    grid: Vec<u8>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
    /// Free cells as `(row, col)`, in fill order.
    cells: Vec<(usize, usize)>,
    /// Value currently placed in each free cell, if any.
    placed: Vec<Option<u8>>,
    fixed: usize,
    depth: usize,
    done: bool,
}

impl NormalizedLoops {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_prefix(n, &[])
    }

    /// Completions of `prefix`, which gives 0-based values for the first
    /// free cells in fill order. An inconsistent prefix yields nothing.
    pub fn with_prefix(n: usize, prefix: &[usize]) -> Result<Self> {
        if n == 0 || n > ENUMERATION_ORDER_LIMIT {
            return Err(Error::OrderCap {
                what: "exhaustive enumeration",
                order: n,
                limit: ENUMERATION_ORDER_LIMIT,
            });
        }
        let mut grid = vec![0u8; n * n];
        let mut row_used = vec![0u64; n];
        let mut col_used = vec![0u64; n];
        for i in 0..n {
            grid[i] = i as u8;
            grid[i * n] = i as u8;
            row_used[i] |= 1 << i;
            col_used[i] |= 1 << i;
        }
        let cells: Vec<(usize, usize)> = (1..n).flat_map(|r| (1..n).map(move |c| (r, c))).collect();
        let mut it = NormalizedLoops {
            n,
            grid,
            row_used,
            col_used,
            placed: vec![None; cells.len()],
            cells,
            fixed: prefix.len(),
            depth: prefix.len(),
            done: false,
        };
        if prefix.len() > it.cells.len() {
            it.done = true;
        }
        for (k, &v) in prefix.iter().enumerate().take(it.cells.len()) {
            let (r, c) = it.cells[k];
            let bit = 1u64 << v;
            if v >= n || (it.row_used[r] | it.col_used[c]) & bit != 0 {
                it.done = true;
                break;
            }
            it.place(k, v as u8);
        }
        Ok(it)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    fn place(&mut self, k: usize, v: u8) {
        let (r, c) = self.cells[k];
        self.grid[r * self.n + c] = v;
        self.row_used[r] |= 1 << v;
        self.col_used[c] |= 1 << v;
        self.placed[k] = Some(v);
    }

    fn unplace(&mut self, k: usize) -> Option<u8> {
        let v = self.placed[k].take()?;
        let (r, c) = self.cells[k];
        self.row_used[r] &= !(1 << v);
        self.col_used[c] &= !(1 << v);
        Some(v)
    }

    /// Moves cell `k` to its next admissible value.
    fn advance(&mut self, k: usize) -> bool {
        let start = self.unplace(k).map_or(0, |v| v as usize + 1);
        let (r, c) = self.cells[k];
        let used = self.row_used[r] | self.col_used[c];
        match (start..self.n).find(|&v| used >> v & 1 == 0) {
            Some(v) => {
                self.place(k, v as u8);
                true
            }
            None => false,
        }
    }

    /// The next table as row-major 0-based cells.
    pub fn next_grid(&mut self) -> Option<&[u8]> {
        if self.done {
            return None;
        }
        let total = self.cells.len();
        loop {
            if self.depth == total {
                if total == self.fixed {
                    self.done = true;
                } else {
                    self.depth = total - 1;
                }
                return Some(&self.grid);
            }
            if self.advance(self.depth) {
                self.depth += 1;
            } else if self.depth == self.fixed {
                self.done = true;
                return None;
            } else {
                self.depth -= 1;
            }
        }
    }

    /// Number of tables remaining.
    pub fn count_remaining(mut self) -> u64 {
        let mut count = 0;
        while self.next_grid().is_some() {
            count += 1;
        }
        count
    }
}

impl Iterator for NormalizedLoops {
    type Item = LoopTable;

    fn next(&mut self) -> Option<LoopTable> {
        let n = self.n;
        self.next_grid()
            .map(|g| LoopTable::from_latin_unchecked(n, g.to_vec()))
    }
}

/// All admissible fillings of row 1 (the row of element `2`), in order.
/// Each is a prefix for [`NormalizedLoops::with_prefix`].
pub fn second_row_prefixes(n: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, col: usize, used: u64, row: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if col == n {
            out.push(row.clone());
            return;
        }
        // column `col` already holds `col` in row 0
        for v in 0..n {
            if v != col && used >> v & 1 == 0 {
                row.push(v);
                extend(n, col + 1, used | 1 << v, row, out);
                row.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n >= 2 {
        extend(n, 1, 1 << 1, &mut Vec::new(), &mut out);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Filter {
    Aim,
    NotAim,
    Nonassociative,
    Commutative,
    ClassAtMost(usize),
    Variety(VarietyId),
}

impl Filter {
    fn order_limit(&self) -> usize {
        match self {
            Filter::Aim | Filter::NotAim | Filter::ClassAtMost(_) => ANALYSIS_ORDER_LIMIT,
            Filter::Variety(VarietyId::Automorphic) => ANALYSIS_ORDER_LIMIT,
            _ => ENUMERATION_ORDER_LIMIT,
        }
    }

    pub fn matches(&self, q: &LoopTable) -> Result<bool> {
        const CAP: usize = crate::group::DEFAULT_CLOSURE_CAP;
        Ok(match *self {
            Filter::Aim => is_aim(q, AimMethod::ViaGroup, CAP)?,
            Filter::NotAim => !is_aim(q, AimMethod::ViaGroup, CAP)?,
            Filter::Nonassociative => !q.is_associative(),
            Filter::Commutative => q.is_commutative(),
            Filter::ClassAtMost(k) => nilpotency_class(q)?.at_most(k),
            Filter::Variety(v) => match variety_membership(q, v, CAP) {
                Err(Error::NoTwoSidedInverses(_)) => false,
                other => other?,
            },
        })
    }
}

impl fmt::Display for Filter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Filter::Aim => f.write_str("aim"),
            Filter::NotAim => f.write_str("not-aim"),
            Filter::Nonassociative => f.write_str("nonassociative"),
            Filter::Commutative => f.write_str("commutative"),
            Filter::ClassAtMost(k) => write!(f, "class<={k}"),
            Filter::Variety(v) => write!(f, "variety:{v}"),
        }
    }
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let lower = s.to_ascii_lowercase();
        if let Some(v) = lower.strip_prefix("variety:") {
            return Ok(Filter::Variety(v.parse()?));
        }
        if let Some(k) = lower
            .strip_prefix("class<=")
            .or_else(|| lower.strip_prefix("class≤"))
        {
            return k
                .parse()
                .map(Filter::ClassAtMost)
                .map_err(|_| Error::UnknownFilter(s.to_string()));
        }
        match lower.as_str() {
            "aim" => Ok(Filter::Aim),
            "not-aim" => Ok(Filter::NotAim),
            "nonassociative" => Ok(Filter::Nonassociative),
            "commutative" => Ok(Filter::Commutative),
            _ => Err(Error::UnknownFilter(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Count,
    Emit,
    FindFirst,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumSpec {
    pub order: usize,
    pub filters: Vec<Filter>,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnumOutput {
    Count(u64),
    Tables(Vec<LoopTable>),
    First(Option<LoopTable>),
}

impl EnumSpec {
    pub fn new(order: usize, mode: Mode) -> Self {
        EnumSpec {
            order,
            filters: Vec::new(),
            mode,
        }
    }

    pub fn with_filters(mut self, filters: impl IntoIterator<Item = Filter>) -> Self {
        self.filters.extend(filters);
        self
    }

    fn validate(&self) -> Result<()> {
        let limit = self
            .filters
            .iter()
            .map(Filter::order_limit)
            .fold(ENUMERATION_ORDER_LIMIT, usize::min);
        if self.order == 0 || self.order > limit {
            return Err(Error::OrderCap {
                what: "exhaustive enumeration with these filters",
                order: self.order,
                limit,
            });
        }
        Ok(())
    }

    fn accepts(&self, q: &LoopTable) -> Result<bool> {
        for f in &self.filters {
            if !f.matches(q)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn run_from(&self, iter: NormalizedLoops) -> Result<EnumOutput> {
        if self.filters.is_empty() && self.mode == Mode::Count {
            return Ok(EnumOutput::Count(iter.count_remaining()));
        }
        let mut iter = iter.map(|q| self.accepts(&q).map(|ok| ok.then_some(q)));
        match self.mode {
            Mode::Count => {
                let mut count = 0;
                for item in iter {
                    count += item?.is_some() as u64;
                }
                Ok(EnumOutput::Count(count))
            }
            Mode::Emit => {
                let mut tables = Vec::new();
                for item in iter {
                    tables.extend(item?);
                }
                Ok(EnumOutput::Tables(tables))
            }
            Mode::FindFirst => {
                for item in iter.by_ref() {
                    if let Some(q) = item? {
                        return Ok(EnumOutput::First(Some(q)));
                    }
                }
                Ok(EnumOutput::First(None))
            }
        }
    }

    /// Streams matching tables to `visit` in emission order, stopping early
    /// when it returns `false`.
    pub fn for_each(&self, mut visit: impl FnMut(LoopTable) -> bool) -> Result<()> {
        self.validate()?;
        for q in NormalizedLoops::new(self.order)? {
            if self.accepts(&q)? && !visit(q) {
                break;
            }
        }
        Ok(())
    }

    /// Runs the enumeration, splitting the search over the choices for the
    /// second row when `threads > 1`. Results do not depend on `threads`.
    pub fn run(&self, threads: usize) -> Result<EnumOutput> {
        self.validate()?;
        if threads <= 1 || self.order <= 2 {
            return self.run_from(NormalizedLoops::new(self.order)?);
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Format(format!("cannot start worker threads: {e}")))?;
        let prefixes = second_row_prefixes(self.order);
        let parts: Vec<EnumOutput> = pool.install(|| {
            prefixes
                .par_iter()
                .map(|p| self.run_from(NormalizedLoops::with_prefix(self.order, p)?))
                .collect::<Result<Vec<_>>>()
        })?;
        Ok(match self.mode {
            Mode::Count => EnumOutput::Count(
                parts
                    .iter()
                    .map(|p| match p {
                        EnumOutput::Count(c) => *c,
                        _ => unreachable!(),
                    })
                    .sum(),
            ),
            Mode::Emit => EnumOutput::Tables(
                parts
                    .into_iter()
                    .flat_map(|p| match p {
                        EnumOutput::Tables(t) => t,
                        _ => unreachable!(),
                    })
                    .collect(),
            ),
            Mode::FindFirst => EnumOutput::First(parts.into_iter().find_map(|p| match p {
                EnumOutput::First(f) => f,
                _ => unreachable!(),
            })),
        })
    }
}

/// Convenience: every normalized loop of order `n`, in emission order.
pub fn all_loops(n: usize) -> Result<Vec<LoopTable>> {
    Ok(NormalizedLoops::new(n)?.collect())
}
