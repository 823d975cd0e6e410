//! Associators, commutators, the two characterizations of AIM loops, the
//! goal identities, the quotient-based oracle for them, and the aggregated
//! conjecture report.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::structure::{self, center, factor_loop, is_normal, nuclei, Nilpotency};
use crate::table::{Elem, LoopTable};

/// `[x,y,z] = (x·yz) \ (xy·z)`.
#[inline]
pub fn associator(q: &LoopTable, x: Elem, y: Elem, z: Elem) -> Elem {
    q.ldiv(q.mul(x, q.mul(y, z)), q.mul(q.mul(x, y), z))
}

/// `[x,y] = (yx) \ (xy)`.
#[inline]
pub fn commutator(q: &LoopTable, x: Elem, y: Elem) -> Elem {
    q.ldiv(q.mul(y, x), q.mul(x, y))
}

/// `T(u,x) = x \ (u·x)`, the image of `u` under `T_x`.
#[inline]
pub fn t_map(q: &LoopTable, u: Elem, x: Elem) -> Elem {
    q.ldiv(x, q.mul(u, x))
}

/// `L(u,x,y) = (yx) \ (y·xu)`, the image of `u` under `L_{x,y}`.
#[inline]
pub fn l_map(q: &LoopTable, u: Elem, x: Elem, y: Elem) -> Elem {
    q.ldiv(q.mul(y, x), q.mul(y, q.mul(x, u)))
}

/// `R(u,x,y) = (ux·y) / (xy)`, the image of `u` under `R_{x,y}`.
#[inline]
pub fn r_map(q: &LoopTable, u: Elem, x: Elem, y: Elem) -> Elem {
    q.rdiv(q.mul(q.mul(u, x), y), q.mul(x, y))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InnerFn {
    T,
    L,
    R,
}

/// Pointwise inner function; `args` is `[u, x]` for `T` and `[u, x, y]` otherwise.
pub fn inner_fn(q: &LoopTable, kind: InnerFn, args: &[Elem]) -> Result<Elem> {
    match (kind, args) {
        (InnerFn::T, &[u, x]) => Ok(t_map(q, u, x)),
        (InnerFn::L, &[u, x, y]) => Ok(l_map(q, u, x, y)),
        (InnerFn::R, &[u, x, y]) => Ok(r_map(q, u, x, y)),
        _ => Err(Error::Format(format!(
            "{kind:?} takes {} arguments, got {}",
            if kind == InnerFn::T { 2 } else { 3 },
            args.len()
        ))),
    }
}

/// Lexicographically least tuple in `{0..n}^arity` failing `holds`.
pub(crate) fn first_failure(
    n: usize,
    arity: usize,
    mut holds: impl FnMut(&[Elem]) -> bool,
) -> Option<Vec<Elem>> {
    let mut t = vec![0; arity];
    loop {
        if !holds(&t) {
            return Some(t);
        }
        let mut i = arity;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AimMethod {
    /// `Inn(Q)` is enumerated and tested for commutativity.
    ViaGroup,
    /// The six commutation identities between inner mapping generators,
    /// evaluated pointwise over all tuples.
    ViaIdentities,
}

/// Precomputed inner function tables, indexed `[u][x]` or `[u][x][y]`.
struct InnerTables {
    n: usize,
    t: Vec<u8>,
    l: Vec<u8>,
    r: Vec<u8>,
}

impl InnerTables {
    fn new(q: &LoopTable) -> Self {
        let n = q.order();
        let mut t = Vec::with_capacity(n * n);
        let mut l = Vec::with_capacity(n * n * n);
        let mut r = Vec::with_capacity(n * n * n);
        for u in 0..n {
            for x in 0..n {
                t.push(t_map(q, u, x) as u8);
                for y in 0..n {
                    l.push(l_map(q, u, x, y) as u8);
                    r.push(r_map(q, u, x, y) as u8);
                }
            }
        }
        InnerTables { n, t, l, r }
    }

    #[inline]
    fn t(&self, u: Elem, x: Elem) -> Elem {
        self.t[u * self.n + x] as usize
    }

    #[inline]
    fn l(&self, u: Elem, x: Elem, y: Elem) -> Elem {
        self.l[(u * self.n + x) * self.n + y] as usize
    }

    #[inline]
    fn r(&self, u: Elem, x: Elem, y: Elem) -> Elem {
        self.r[(u * self.n + x) * self.n + y] as usize
    }
}

/// Names of the six commutation schemas, in checking order.
pub const AIM_SCHEMAS: [&str; 6] = [
    "T(T(u,x),y) = T(T(u,y),x)",
    "L(L(u,x,y),z,w) = L(L(u,z,w),x,y)",
    "R(R(u,x,y),z,w) = R(R(u,z,w),x,y)",
    "T(L(u,x,y),z) = L(T(u,z),x,y)",
    "T(R(u,x,y),z) = R(T(u,z),x,y)",
    "L(R(u,x,y),z,w) = R(L(u,z,w),x,y)",
];

type Schema<'a> = dyn Fn(&[Elem]) -> bool + 'a;

/// First failing commutation schema (index into [`AIM_SCHEMAS`]) with its
/// least witness `(u,x,y,...)`, or `None` when all six hold.
pub fn aim_identity_failure(q: &LoopTable) -> Option<(usize, Vec<Elem>)> {
    let f = InnerTables::new(q);
    let n = q.order();
    let checks: [(usize, &Schema); 6] = [
        (3, &|a| {
            f.t(f.t(a[0], a[1]), a[2]) == f.t(f.t(a[0], a[2]), a[1])
        }),
        (5, &|a| {
            f.l(f.l(a[0], a[1], a[2]), a[3], a[4]) == f.l(f.l(a[0], a[3], a[4]), a[1], a[2])
        }),
        (5, &|a| {
            f.r(f.r(a[0], a[1], a[2]), a[3], a[4]) == f.r(f.r(a[0], a[3], a[4]), a[1], a[2])
        }),
        (4, &|a| {
            f.t(f.l(a[0], a[1], a[2]), a[3]) == f.l(f.t(a[0], a[3]), a[1], a[2])
        }),
        (4, &|a| {
            f.t(f.r(a[0], a[1], a[2]), a[3]) == f.r(f.t(a[0], a[3]), a[1], a[2])
        }),
        (5, &|a| {
            f.l(f.r(a[0], a[1], a[2]), a[3], a[4]) == f.r(f.l(a[0], a[3], a[4]), a[1], a[2])
        }),
    ];
    checks
        .iter()
        .enumerate()
        .find_map(|(i, (arity, holds))| first_failure(n, *arity, holds).map(|w| (i, w)))
}

pub fn is_aim(q: &LoopTable, method: AimMethod, cap: usize) -> Result<bool> {
    match method {
        AimMethod::ViaGroup => Ok(structure::inn(q, cap)?.is_abelian()),
        AimMethod::ViaIdentities => Ok(aim_identity_failure(q).is_none()),
    }
}

/// Goal identities, labelled as in the prover input files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GoalId {
    AK1,
    AK2,
    AK3,
    Ka,
    Aa1,
    Aa2,
    Aa3,
    /// `[[x,y],z] = 1`, the extra goal for nilpotency class at most 2.
    Kk,
}

impl GoalId {
    pub const ALL: [GoalId; 8] = [
        GoalId::AK1,
        GoalId::AK2,
        GoalId::AK3,
        GoalId::Ka,
        GoalId::Aa1,
        GoalId::Aa2,
        GoalId::Aa3,
        GoalId::Kk,
    ];

    /// The seven goals of the default problem.
    pub const STANDARD: [GoalId; 7] = [
        GoalId::AK1,
        GoalId::AK2,
        GoalId::AK3,
        GoalId::Ka,
        GoalId::Aa1,
        GoalId::Aa2,
        GoalId::Aa3,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            GoalId::AK1 => "aK1",
            GoalId::AK2 => "aK2",
            GoalId::AK3 => "aK3",
            GoalId::Ka => "Ka",
            GoalId::Aa1 => "aa1",
            GoalId::Aa2 => "aa2",
            GoalId::Aa3 => "aa3",
            GoalId::Kk => "Kk",
        }
    }

    /// The equation in prover syntax, without label.
    pub fn equation(&self) -> &'static str {
        match self {
            GoalId::AK1 => "a(K(x,y),z,u) = 1",
            GoalId::AK2 => "a(x,K(y,z),u) = 1",
            GoalId::AK3 => "a(x,y,K(z,u)) = 1",
            GoalId::Ka => "K(a(x,y,z),u) = 1",
            GoalId::Aa1 => "a(a(x,y,z),u,w) = 1",
            GoalId::Aa2 => "a(x,a(y,z,u),w) = 1",
            GoalId::Aa3 => "a(x,y,a(z,u,w)) = 1",
            GoalId::Kk => "K(K(x,y),z) = 1",
        }
    }

    /// Variables in order of first appearance.
    pub fn variables(&self) -> &'static [&'static str] {
        match self {
            GoalId::AK1 | GoalId::AK2 | GoalId::AK3 | GoalId::Ka => &["x", "y", "z", "u"],
            GoalId::Aa1 | GoalId::Aa2 | GoalId::Aa3 => &["x", "y", "z", "u", "w"],
            GoalId::Kk => &["x", "y", "z"],
        }
    }
}

impl fmt::Display for GoalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for GoalId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GoalId::ALL
            .into_iter()
            .find(|g| g.label().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Format(format!("unknown goal `{s}`")))
    }
}

impl Serialize for GoalId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoalOutcome {
    pub goal: GoalId,
    pub holds: bool,
    /// Least counterexample, 1-based, present exactly when the goal fails.
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoalReport {
    /// One entry per goal, in [`GoalId::ALL`] order.
    pub outcomes: Vec<GoalOutcome>,
}

impl GoalReport {
    pub fn holds(&self, goal: GoalId) -> bool {
        self.outcome(goal).holds
    }

    pub fn outcome(&self, goal: GoalId) -> &GoalOutcome {
        self.outcomes
            .iter()
            .find(|o| o.goal == goal)
            .expect("every goal is reported")
    }

    pub fn all_hold(&self, goals: &[GoalId]) -> bool {
        goals.iter().all(|&g| self.holds(g))
    }

    /// aa1 ∧ aa2 ∧ aa3 ∧ aK1 ∧ aK2 ∧ aK3: associators and commutators lie in the nucleus.
    pub fn quotient_by_nucleus_abelian_group(&self) -> bool {
        self.all_hold(&[
            GoalId::Aa1,
            GoalId::Aa2,
            GoalId::Aa3,
            GoalId::AK1,
            GoalId::AK2,
            GoalId::AK3,
        ])
    }

    /// aa1 ∧ aa2 ∧ aa3 ∧ Ka: associators lie in the center.
    pub fn quotient_by_center_group(&self) -> bool {
        self.all_hold(&[GoalId::Aa1, GoalId::Aa2, GoalId::Aa3, GoalId::Ka])
    }
}

/// Evaluates every goal identity exhaustively, using `a(x,y,z) = [x,y,z]`
/// and `K(x,y) = [x,y]`.
pub fn check_goals(q: &LoopTable) -> GoalReport {
    let n = q.order();
    let mut assoc = vec![0u8; n * n * n];
    let mut comm = vec![0u8; n * n];
    for x in 0..n {
        for y in 0..n {
            comm[x * n + y] = commutator(q, x, y) as u8;
            for z in 0..n {
                assoc[(x * n + y) * n + z] = associator(q, x, y, z) as u8;
            }
        }
    }
    let a = |x: Elem, y: Elem, z: Elem| assoc[(x * n + y) * n + z] as usize;
    let k = |x: Elem, y: Elem| comm[x * n + y] as usize;

    let outcomes = GoalId::ALL
        .iter()
        .map(|&goal| {
            let arity = goal.variables().len();
            let witness = first_failure(n, arity, |t| {
                let value = match goal {
                    GoalId::AK1 => a(k(t[0], t[1]), t[2], t[3]),
                    GoalId::AK2 => a(t[0], k(t[1], t[2]), t[3]),
                    GoalId::AK3 => a(t[0], t[1], k(t[2], t[3])),
                    GoalId::Ka => k(a(t[0], t[1], t[2]), t[3]),
                    GoalId::Aa1 => a(a(t[0], t[1], t[2]), t[3], t[4]),
                    GoalId::Aa2 => a(t[0], a(t[1], t[2], t[3]), t[4]),
                    GoalId::Aa3 => a(t[0], t[1], a(t[2], t[3], t[4])),
                    GoalId::Kk => k(k(t[0], t[1]), t[2]),
                };
                value == 0
            });
            GoalOutcome {
                goal,
                holds: witness.is_none(),
                witness: witness.map(|w| w.iter().map(|v| v + 1).collect()),
            }
        })
        .collect();
    GoalReport { outcomes }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientOracle {
    pub n_normal: bool,
    pub q_mod_n_abelian_group: bool,
    pub q_mod_z_group: bool,
}

/// Builds `Q/N(Q)` and `Q/Z(Q)` directly and tests their tables by brute force.
pub fn quotient_oracle(q: &LoopTable) -> QuotientOracle {
    let nucleus = nuclei(q).nucleus;
    let (n_normal, q_mod_n_abelian_group) = if is_normal(q, &nucleus) {
        match factor_loop(q, &nucleus) {
            Ok(f) => (
                true,
                f.quotient.is_associative() && f.quotient.is_commutative(),
            ),
            Err(_) => (false, false),
        }
    } else {
        (false, false)
    };
    let q_mod_z_group = factor_loop(q, &center(q))
        .map(|f| f.quotient.is_associative())
        .unwrap_or(false);
    QuotientOracle {
        n_normal,
        q_mod_n_abelian_group,
        q_mod_z_group,
    }
}

/// The four identities defining LC loops, in the order
/// `x(x(yz)) = (x(xy))z`, `x(x(yz)) = ((xx)y)z`, `(xx)(yz) = (x(xy))z`,
/// `x(y(yz)) = (x(yy))z`.
pub fn lc_profile(q: &LoopTable) -> [bool; 4] {
    let m = |a, b| q.mul(a, b);
    let all = |f: &dyn Fn(Elem, Elem, Elem) -> bool| {
        first_failure(q.order(), 3, |t| f(t[0], t[1], t[2])).is_none()
    };
    [
        all(&|x, y, z| m(x, m(x, m(y, z))) == m(m(x, m(x, y)), z)),
        all(&|x, y, z| m(x, m(x, m(y, z))) == m(m(m(x, x), y), z)),
        all(&|x, y, z| m(m(x, x), m(y, z)) == m(m(x, m(x, y)), z)),
        all(&|x, y, z| m(x, m(y, m(y, z))) == m(m(x, m(y, y)), z)),
    ]
}

/// `x ↦ x²` is a bijection.
pub fn is_uniquely_2_divisible(q: &LoopTable) -> bool {
    let mut seen = vec![false; q.order()];
    q.elements()
        .all(|x| !std::mem::replace(&mut seen[q.mul(x, x)], true))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub is_aim: bool,
    pub is_aim_via_identities: bool,
    pub n_normal: bool,
    pub q_mod_n_abelian_group: bool,
    pub q_mod_z_group: bool,
    pub class: Nilpotency,
    pub consistent_with_conjecture: bool,
    pub goals: GoalReport,
}

/// Aggregates both AIM routes, the quotient oracle, the goal suite and the
/// nilpotency class, and cross-checks the goal route against the oracle.
pub fn check_conjecture(q: &LoopTable, cap: usize) -> Result<ConjectureReport> {
    let is_aim_group = is_aim(q, AimMethod::ViaGroup, cap)?;
    let is_aim_identities = is_aim(q, AimMethod::ViaIdentities, cap)?;
    if is_aim_group != is_aim_identities {
        return Err(Error::InconsistentLemma2(format!(
            "inner mapping group abelian = {is_aim_group}, commutation identities = {is_aim_identities}"
        )));
    }
    let oracle = quotient_oracle(q);
    let goals = check_goals(q);
    if oracle.n_normal && goals.quotient_by_nucleus_abelian_group() != oracle.q_mod_n_abelian_group
    {
        return Err(Error::InconsistentLemma2(format!(
            "goals say Q/N abelian group = {}, quotient says {}",
            goals.quotient_by_nucleus_abelian_group(),
            oracle.q_mod_n_abelian_group
        )));
    }
    if goals.quotient_by_center_group() != oracle.q_mod_z_group {
        return Err(Error::InconsistentLemma2(format!(
            "goals say Q/Z group = {}, quotient says {}",
            goals.quotient_by_center_group(),
            oracle.q_mod_z_group
        )));
    }
    let class = structure::nilpotency_class(q)?;
    let consistent_with_conjecture = !is_aim_group
        || (oracle.n_normal
            && oracle.q_mod_n_abelian_group
            && oracle.q_mod_z_group
            && class.at_most(3));
    Ok(ConjectureReport {
        is_aim: is_aim_group,
        is_aim_via_identities: is_aim_identities,
        n_normal: oracle.n_normal,
        q_mod_n_abelian_group: oracle.q_mod_n_abelian_group,
        q_mod_z_group: oracle.q_mod_z_group,
        class,
        consistent_with_conjecture,
        goals,
    })
}
