//! Membership in the standard varieties of loops.
//!
//! Right-sided varieties are checked by running the left-sided check on the
//! opposite loop `x∘y = y·x`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::conjecture::first_failure;
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::structure::inn;
use crate::table::{Elem, LoopTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarietyId {
    Group,
    AbelianGroup,
    Steiner,
    Extra,
    Automorphic,
    CLoop,
    CC,
    LC,
    RC,
    LeftBol,
    RightBol,
    LCC,
    RCC,
    Moufang,
    LeftBruck,
    RightBruck,
}

impl VarietyId {
    pub const ALL: [VarietyId; 16] = [
        VarietyId::Group,
        VarietyId::AbelianGroup,
        VarietyId::Steiner,
        VarietyId::Extra,
        VarietyId::Automorphic,
        VarietyId::CLoop,
        VarietyId::CC,
        VarietyId::LC,
        VarietyId::RC,
        VarietyId::LeftBol,
        VarietyId::RightBol,
        VarietyId::LCC,
        VarietyId::RCC,
        VarietyId::Moufang,
        VarietyId::LeftBruck,
        VarietyId::RightBruck,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            VarietyId::Group => "Group",
            VarietyId::AbelianGroup => "AbelianGroup",
            VarietyId::Steiner => "Steiner",
            VarietyId::Extra => "Extra",
            VarietyId::Automorphic => "Automorphic",
            VarietyId::CLoop => "CLoop",
            VarietyId::CC => "CC",
            VarietyId::LC => "LC",
            VarietyId::RC => "RC",
            VarietyId::LeftBol => "LeftBol",
            VarietyId::RightBol => "RightBol",
            VarietyId::LCC => "LCC",
            VarietyId::RCC => "RCC",
            VarietyId::Moufang => "Moufang",
            VarietyId::LeftBruck => "LeftBruck",
            VarietyId::RightBruck => "RightBruck",
        }
    }

    /// Defining equations in prover syntax, one clause per line.
    pub fn axioms(&self) -> Vec<&'static str> {
        const ASSOC: &str = "(x * y) * z = x * (y * z).";
        const COMM: &str = "x * y = y * x.";
        const LEFT_BOL: &str = "x * (y * (x * z)) = (x * (y * x)) * z.";
        const RIGHT_BOL: &str = "((z * x) * y) * x = z * ((x * y) * x).";
        const LCC: &str = "x \\ (y * (x * z)) = (x \\ (y * x)) * z.";
        const RCC: &str = "((z * x) * y) / x = z * ((x * y) / x).";
        const AIP: &str = "(x * y) \\ 1 = (x \\ 1) * (y \\ 1).";
        match self {
            VarietyId::Group => vec![ASSOC],
            VarietyId::AbelianGroup => vec![ASSOC, COMM],
            VarietyId::Steiner => vec![COMM, "x * (y * x) = y."],
            VarietyId::Extra => vec!["x * (y * (z * x)) = ((x * y) * z) * x."],
            VarietyId::Automorphic => vec![
                "T(x * y,z) = T(x,z) * T(y,z).",
                "L(x * y,z,w) = L(x,z,w) * L(y,z,w).",
                "R(x * y,z,w) = R(x,z,w) * R(y,z,w).",
            ],
            VarietyId::CLoop => vec!["((x * y) * y) * z = x * (y * (y * z))."],
            VarietyId::CC => vec![LCC, RCC],
            VarietyId::LC => vec![
                "x * (x * (y * z)) = (x * (x * y)) * z.",
                "x * (x * (y * z)) = ((x * x) * y) * z.",
                "(x * x) * (y * z) = (x * (x * y)) * z.",
                "x * (y * (y * z)) = (x * (y * y)) * z.",
            ],
            VarietyId::RC => vec![
                "((z * y) * x) * x = z * ((y * x) * x).",
                "((z * y) * x) * x = z * (y * (x * x)).",
                "(z * y) * (x * x) = z * ((y * x) * x).",
                "((z * y) * y) * x = z * ((y * y) * x).",
            ],
            VarietyId::LeftBol => vec![LEFT_BOL],
            VarietyId::RightBol => vec![RIGHT_BOL],
            VarietyId::LCC => vec![LCC],
            VarietyId::RCC => vec![RCC],
            VarietyId::Moufang => vec![LEFT_BOL, RIGHT_BOL],
            VarietyId::LeftBruck => vec![LEFT_BOL, AIP],
            VarietyId::RightBruck => vec![RIGHT_BOL, AIP],
        }
    }
}

impl fmt::Display for VarietyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for VarietyId {
    type Err = Error;

    /// Case-insensitive; `-`, `_` and spaces are ignored, and a trailing
    /// `loop` is optional (`left-bol`, `LeftBol`, `c-loop`, `C`).
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        let key = key
            .strip_suffix("loop")
            .filter(|k| !k.is_empty())
            .unwrap_or(&key);
        let key = match key {
            "c" => "cloop",
            "abelian" => "abeliangroup",
            other => other,
        };
        VarietyId::ALL
            .into_iter()
            .find(|v| v.name().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::UnknownVariety(s.to_string()))
    }
}

impl Serialize for VarietyId {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Why a loop is not in a variety. Element tuples are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietyWitness {
    /// A defining identity fails at this tuple.
    Identity {
        identity: &'static str,
        tuple: Vec<Elem>,
    },
    /// `L_x L_y L_x⁻¹` (or the right-handed analogue) is not a translation.
    NotConjugacyClosed {
        side: &'static str,
        x: Elem,
        y: Elem,
    },
    /// The inner mapping `map` is not multiplicative at `(x, y)`.
    NotAutomorphism { map: Perm, x: Elem, y: Elem },
}

impl fmt::Display for VarietyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels = |t: &[Elem]| {
            t.iter()
                .map(|v| (v + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            VarietyWitness::Identity { identity, tuple } => {
                write!(f, "{identity} fails at ({})", labels(tuple))
            }
            VarietyWitness::NotConjugacyClosed { side, x, y } => write!(
                f,
                "{side}_{x}{side}_{y}{side}_{x}^-1 is not a {} translation",
                if *side == "L" { "left" } else { "right" },
                x = x + 1,
                y = y + 1
            ),
            VarietyWitness::NotAutomorphism { map, x, y } => {
                write!(
                    f,
                    "inner mapping {map} is not multiplicative at ({},{})",
                    x + 1,
                    y + 1
                )
            }
        }
    }
}

fn identity3(
    q: &LoopTable,
    identity: &'static str,
    holds: impl Fn(Elem, Elem, Elem) -> bool,
) -> Option<VarietyWitness> {
    first_failure(q.order(), 3, |t| holds(t[0], t[1], t[2]))
        .map(|tuple| VarietyWitness::Identity { identity, tuple })
}

fn associativity(q: &LoopTable) -> Option<VarietyWitness> {
    identity3(q, "(xy)z = x(yz)", |x, y, z| {
        q.mul(q.mul(x, y), z) == q.mul(x, q.mul(y, z))
    })
}

fn commutativity(q: &LoopTable) -> Option<VarietyWitness> {
    first_failure(q.order(), 2, |t| q.mul(t[0], t[1]) == q.mul(t[1], t[0])).map(|tuple| {
        VarietyWitness::Identity {
            identity: "xy = yx",
            tuple,
        }
    })
}

fn left_bol(q: &LoopTable) -> Option<VarietyWitness> {
    let m = |a, b| q.mul(a, b);
    identity3(q, "x(y(xz)) = (x(yx))z", |x, y, z| {
        m(x, m(y, m(x, z))) == m(m(x, m(y, x)), z)
    })
}

fn left_c(q: &LoopTable) -> Option<VarietyWitness> {
    let m = |a, b| q.mul(a, b);
    identity3(q, "x(x(yz)) = (x(xy))z", |x, y, z| {
        m(x, m(x, m(y, z))) == m(m(x, m(x, y)), z)
    })
}

/// `L_x L_y L_x⁻¹` equals `L_z`, necessarily with `z = x\(yx)`.
fn left_conjugacy_closed(q: &LoopTable, side: &'static str) -> Option<VarietyWitness> {
    first_failure(q.order(), 2, |t| {
        let (x, y) = (t[0], t[1]);
        let z = q.ldiv(x, q.mul(y, x));
        q.elements()
            .all(|u| q.ldiv(x, q.mul(y, q.mul(x, u))) == q.mul(z, u))
    })
    .map(|t| VarietyWitness::NotConjugacyClosed {
        side,
        x: t[0],
        y: t[1],
    })
}

fn two_sided_inverses(q: &LoopTable) -> Result<Vec<Elem>> {
    q.elements()
        .map(|x| {
            let inv = q.ldiv(x, 0);
            if inv == q.rdiv(0, x) {
                Ok(inv)
            } else {
                Err(Error::NoTwoSidedInverses(x + 1))
            }
        })
        .collect()
}

fn automorphic_inverse(q: &LoopTable) -> Result<Option<VarietyWitness>> {
    let inv = two_sided_inverses(q)?;
    Ok(first_failure(q.order(), 2, |t| {
        inv[q.mul(t[0], t[1])] == q.mul(inv[t[0]], inv[t[1]])
    })
    .map(|tuple| VarietyWitness::Identity {
        identity: "(xy)^-1 = x^-1 y^-1",
        tuple,
    }))
}

/// Every element of `Inn(Q)` is checked, in display order.
fn automorphic(q: &LoopTable, cap: usize) -> Result<Option<VarietyWitness>> {
    let group = inn(q, cap)?;
    for map in group.sorted_for_display() {
        if let Some(t) = first_failure(q.order(), 2, |t| {
            map.apply(q.mul(t[0], t[1])) == q.mul(map.apply(t[0]), map.apply(t[1]))
        }) {
            return Ok(Some(VarietyWitness::NotAutomorphism {
                map,
                x: t[0],
                y: t[1],
            }));
        }
    }
    Ok(None)
}

/// `None` when `q` lies in the variety, otherwise a counterexample.
pub fn variety_check(q: &LoopTable, v: VarietyId, cap: usize) -> Result<Option<VarietyWitness>> {
    let m = |a, b| q.mul(a, b);
    Ok(match v {
        VarietyId::Group => associativity(q),
        VarietyId::AbelianGroup => associativity(q).or_else(|| commutativity(q)),
        VarietyId::Steiner => commutativity(q).or_else(|| {
            first_failure(q.order(), 2, |t| m(t[0], m(t[1], t[0])) == t[1]).map(|tuple| {
                VarietyWitness::Identity {
                    identity: "x(yx) = y",
                    tuple,
                }
            })
        }),
        VarietyId::Extra => identity3(q, "x(y(zx)) = ((xy)z)x", |x, y, z| {
            m(x, m(y, m(z, x))) == m(m(m(x, y), z), x)
        }),
        VarietyId::CLoop => identity3(q, "((xy)y)z = x(y(yz))", |x, y, z| {
            m(m(m(x, y), y), z) == m(x, m(y, m(y, z)))
        }),
        VarietyId::Automorphic => automorphic(q, cap)?,
        VarietyId::LC => left_c(q),
        VarietyId::RC => left_c(&q.transpose()),
        VarietyId::LeftBol => left_bol(q),
        VarietyId::RightBol => left_bol(&q.transpose()),
        VarietyId::LCC => left_conjugacy_closed(q, "L"),
        VarietyId::RCC => left_conjugacy_closed(&q.transpose(), "R"),
        VarietyId::CC => {
            left_conjugacy_closed(q, "L").or_else(|| left_conjugacy_closed(&q.transpose(), "R"))
        }
        VarietyId::Moufang => left_bol(q).or_else(|| left_bol(&q.transpose())),
        VarietyId::LeftBruck => {
            let aip = automorphic_inverse(q)?;
            left_bol(q).or(aip)
        }
        VarietyId::RightBruck => {
            let aip = automorphic_inverse(q)?;
            left_bol(&q.transpose()).or(aip)
        }
    })
}

pub fn variety_membership(q: &LoopTable, v: VarietyId, cap: usize) -> Result<bool> {
    variety_check(q, v, cap).map(|w| w.is_none())
}
