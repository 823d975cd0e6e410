//! Built-in loop tables used as test subjects and CLI fixtures.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::table::{LoopTable, MAX_ORDER};

/// The order-6 AIM loop of nilpotency class 2 used as the running example.
pub const EXAMPLE1_ROWS: [[usize; 6]; 6] = [
    [1, 2, 3, 4, 5, 6],
    [2, 1, 4, 3, 6, 5],
    [3, 4, 5, 6, 1, 2],
    [4, 3, 6, 5, 2, 1],
    [5, 6, 2, 1, 3, 4],
    [6, 5, 1, 2, 4, 3],
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fixture {
    Example1,
    /// Cyclic group of the given order.
    Cyclic(usize),
    Klein4,
    /// Dihedral group of order `2k`.
    Dihedral(usize),
    Quaternion8,
    /// Elementary abelian 2-group of order `2^k`.
    Elementary2(usize),
}

impl Fixture {
    pub fn new(name: &str, parameter: Option<usize>) -> Result<Self> {
        let need = |what: &str| -> Result<usize> {
            parameter.ok_or_else(|| Error::BadFixtureParameter {
                name: name.to_string(),
                reason: format!("missing parameter ({what})"),
            })
        };
        let fixture = match name.to_ascii_lowercase().as_str() {
            "example1" => Fixture::Example1,
            "cyclic" => Fixture::Cyclic(need("order")?),
            "klein4" => Fixture::Klein4,
            "dihedral" => Fixture::Dihedral(need("number of rotations")?),
            "quaternion8" => Fixture::Quaternion8,
            "elementary2" => Fixture::Elementary2(need("rank")?),
            _ => return Err(Error::UnknownFixture(name.to_string())),
        };
        let takes_parameter = matches!(
            fixture,
            Fixture::Cyclic(_) | Fixture::Dihedral(_) | Fixture::Elementary2(_)
        );
        if parameter.is_some() && !takes_parameter {
            return Err(Error::BadFixtureParameter {
                name: name.to_string(),
                reason: "takes no parameter".into(),
            });
        }
        fixture.validate()?;
        Ok(fixture)
    }

    fn validate(&self) -> Result<()> {
        let bad = |reason: String| {
            Err(Error::BadFixtureParameter {
                name: self.name().to_string(),
                reason,
            })
        };
        match *self {
            Fixture::Cyclic(n) if n == 0 || n > MAX_ORDER => {
                bad(format!("order {n} outside 1..={MAX_ORDER}"))
            }
            Fixture::Dihedral(k) if k < 1 || 2 * k > MAX_ORDER => {
                bad(format!("rotation count {k} outside 1..={}", MAX_ORDER / 2))
            }
            Fixture::Elementary2(k) if k > 6 => bad(format!("rank {k} outside 0..=6")),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Fixture::Example1 => "example1",
            Fixture::Cyclic(_) => "cyclic",
            Fixture::Klein4 => "klein4",
            Fixture::Dihedral(_) => "dihedral",
            Fixture::Quaternion8 => "quaternion8",
            Fixture::Elementary2(_) => "elementary2",
        }
    }

    pub fn is_group(&self) -> bool {
        !matches!(self, Fixture::Example1)
    }

    pub fn table(&self) -> LoopTable {
        match *self {
            Fixture::Example1 => example1(),
            Fixture::Cyclic(n) => from_fn(n, |x, y| (x + y) % n),
            Fixture::Klein4 => from_fn(4, |x, y| x ^ y),
            Fixture::Dihedral(k) => dihedral(k),
            Fixture::Quaternion8 => quaternion8(),
            Fixture::Elementary2(k) => from_fn(1 << k, |x, y| x ^ y),
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fixture::Cyclic(k) | Fixture::Dihedral(k) | Fixture::Elementary2(k) => {
                write!(f, "{} {k}", self.name())
            }
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for Fixture {
    type Err = Error;

    /// Accepts `name` or `name k`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split_whitespace();
        let name = parts.next().unwrap_or_default();
        let parameter = parts
            .next()
            .map(|p| {
                p.parse::<usize>().map_err(|_| Error::BadFixtureParameter {
                    name: name.to_string(),
                    reason: format!("`{p}` is not an integer"),
                })
            })
            .transpose()?;
        if parts.next().is_some() {
            return Err(Error::BadFixtureParameter {
                name: name.to_string(),
                reason: "too many parameters".into(),
            });
        }
        Fixture::new(name, parameter)
    }
}

/// Looks up a fixture by name and optional parameter and builds its table.
pub fn builtin_table(name: &str, parameter: Option<usize>) -> Result<LoopTable> {
    Fixture::new(name, parameter).map(|f| f.table())
}

pub fn example1() -> LoopTable {
    let rows: Vec<Vec<usize>> = EXAMPLE1_ROWS
        .iter()
        .map(|r| r.iter().map(|v| v - 1).collect())
        .collect();
    LoopTable::from_rows(&rows).expect("example table is a loop")
}

fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> LoopTable {
    let cells = (0..n * n).map(|i| f(i / n, i % n)).collect();
    LoopTable::from_flat(n, cells).expect("fixture is a loop")
}

/// `r^a s^b` is stored at index `a + k*b`.
fn dihedral(k: usize) -> LoopTable {
    from_fn(2 * k, |x, y| {
        let (a, b) = (x % k, x / k);
        let (c, d) = (y % k, y / k);
        let rot = if b == 0 { (a + c) % k } else { (a + k - c) % k };
        rot + k * ((b + d) % 2)
    })
}

/// Index `2u + s` is the unit `(-1)^s u` with `u` in `1, i, j, k`.
fn quaternion8() -> LoopTable {
    // unit products: (sign, unit)
    const UNIT: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    from_fn(8, |x, y| {
        let (sign, unit) = UNIT[x / 2][y / 2];
        2 * unit + (sign + x % 2 + y % 2) % 2
    })
}
