//! First-order problem files for the abelian-inner-mappings question, and
//! the iterate-orderings/accumulate-hints driver around an external prover.

mod adapters;
mod p9loop;

pub use adapters::{AdapterConfig, ExecAdapter, MockAdapter, MockRecord, PROVER_CMD_ENV};
pub use p9loop::{
    eliminate_assumptions, p9loop_run, AdapterError, AdapterResult, DirectiveRef, Elimination,
    EliminationReport, Injected, IterationLog, Limits, P9LoopOutcome, ProverAdapter, Verdict,
};

use std::fmt;
use std::str::FromStr;

use crate::conjecture::GoalId;
use crate::error::{Error, Result};
use crate::variety::VarietyId;

/// Assumption block of the default problem: loop axioms, definitions of the
/// associator `a`, commutator `K` and inner functions `L`, `R`, `T`, the
/// compatibility implications, and the six commutation schemas.
pub const BASE_ASSUMPTIONS: &[&str] = &[
    "   ",
    "   1 * x = x.           x * 1 = x.",
    "   x \\ (x * y) = y.     x * (x \\ y) = y.",
    "   (x * y) / y = x.     (x / y) * y = x.",
    "",
    "   ",
    "   (x * (y * z)) \\ ((x * y) * z) = a(x,y,z).",
    "",
    "   ",
    "   (x * y) \\ (y * x) = K(y,x).",
    "",
    "   ",
    "   ",
    "   (y * x) \\ (y * (x * u)) = L(u,x,y).",
    "",
    "   ",
    "   ((u * x) * y) / (x * y) = R(u,x,y).",
    "",
    "   ",
    "   x \\ (u * x) = T(u,x).",
    "",
    "   ",
    "   a(x,y,z) = 1 -> L(z,y,x) = z.    L(x,y,z) = x -> a(z,y,x) = 1.",
    "   T(x,y) = x -> T(y,x) = y.        T(x,y) = x -> K(x,y) = 1.",
    "   K(x,y) = 1 -> T(x,y) = x.",
    "",
    "   ",
    "   T(T(u,x),y) = T(T(u,y),x).",
    "   L(L(u,x,y),z,w) = L(L(u,z,w),x,y).",
    "   R(R(u,x,y),z,w) = R(R(u,z,w),x,y).",
    "   T(L(u,x,y),z) = L(T(u,z),x,y).",
    "   T(R(u,x,y),z) = R(T(u,z),x,y).",
    "   L(R(u,x,y),z,w) = R(L(u,z,w),x,y).",
];

pub const RESTRICT_DENIALS: &str = "set(restrict_denials).";
pub const CLEAR_BACK_DEMOD: &str = "clear(back_demod).";

const INDENT: &str = "   ";
const LABEL_COLUMN: usize = 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxAssumption {
    /// Left inner mappings preserve inverses.
    LeftInnerInverse,
}

impl AuxAssumption {
    pub fn clause(&self) -> &'static str {
        match self {
            AuxAssumption::LeftInnerInverse => "L(x,y,z) \\ 1 = L(x \\ 1,y,z).",
        }
    }
}

impl FromStr for AuxAssumption {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left-inner-inverse" => Ok(AuxAssumption::LeftInnerInverse),
            _ => Err(Error::Format(format!("unknown auxiliary assumption `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Goal {
    Standard(GoalId),
    /// A verbatim clause, e.g. an injected assumption being eliminated.
    Clause(String),
}

impl Goal {
    /// The goal as a bare clause, without its label.
    pub fn clause(&self) -> String {
        match self {
            Goal::Standard(g) => format!("{}.", g.equation()),
            Goal::Clause(c) => c.clone(),
        }
    }

    fn render(&self) -> String {
        match self {
            Goal::Standard(g) => format!(
                "{INDENT}{:<width$}# label(\"{}\").",
                g.equation(),
                g.label(),
                width = LABEL_COLUMN
            ),
            Goal::Clause(c) => format!("{INDENT}{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverProblem {
    /// Option lines placed before the first block, e.g. [`RESTRICT_DENIALS`].
    pub directives: Vec<String>,
    /// Assumption block lines, verbatim including indentation.
    pub base: Vec<String>,
    pub variety_axioms: Vec<String>,
    pub aux_assumptions: Vec<String>,
    pub goals: Vec<Goal>,
    /// Further blocks (hints, demodulators) rendered verbatim after the goals.
    pub trailing: Vec<String>,
}

impl Default for ProverProblem {
    fn default() -> Self {
        ProverProblem {
            directives: Vec::new(),
            base: BASE_ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
            variety_axioms: Vec::new(),
            aux_assumptions: Vec::new(),
            goals: GoalId::STANDARD
                .iter()
                .map(|&g| Goal::Standard(g))
                .collect(),
            trailing: Vec::new(),
        }
    }
}

impl ProverProblem {
    pub fn with_variety(mut self, v: VarietyId) -> Self {
        self.variety_axioms
            .extend(v.axioms().into_iter().map(str::to_string));
        self
    }

    pub fn with_aux(mut self, aux: AuxAssumption) -> Self {
        self.aux_assumptions.push(aux.clause().to_string());
        self
    }

    pub fn with_goals(mut self, goals: &[GoalId]) -> Result<Self> {
        if goals.is_empty() {
            return Err(Error::Format("a problem needs at least one goal".into()));
        }
        let mut sorted = goals.to_vec();
        sorted.sort();
        sorted.dedup();
        self.goals = sorted.into_iter().map(Goal::Standard).collect();
        Ok(self)
    }

    /// Strictly forward, demodulation-free search.
    pub fn forward_only(mut self) -> Self {
        for d in [RESTRICT_DENIALS, CLEAR_BACK_DEMOD] {
            if !self.directives.iter().any(|x| x == d) {
                self.directives.push(d.to_string());
            }
        }
        self
    }

    /// Every assumption clause text, trimmed, excluding blank lines.
    pub fn assumption_clauses(&self) -> impl Iterator<Item = &str> {
        self.base
            .iter()
            .chain(&self.variety_axioms)
            .chain(&self.aux_assumptions)
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for d in &self.directives {
            out.push_str(d);
            out.push('\n');
        }
        if !self.directives.is_empty() {
            out.push('\n');
        }
        out.push_str("formulas(assumptions).\n");
        for line in &self.base {
            out.push_str(line);
            out.push('\n');
        }
        for clause in self.variety_axioms.iter().chain(&self.aux_assumptions) {
            out.push_str(INDENT);
            out.push_str(clause);
            out.push('\n');
        }
        out.push_str("end_of_list.\n\nformulas(goals).\n");
        for g in &self.goals {
            out.push_str(&g.render());
            out.push('\n');
        }
        out.push_str("end_of_list.\n");
        for line in &self.trailing {
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    /// Reads a problem file. Lines before the first block become
    /// directives; the assumptions block becomes `base`; goal lines equal
    /// (up to whitespace) to a standard goal are recognised as such; all
    /// text after the goals block is kept verbatim.
    pub fn from_text(text: &str) -> Result<Self> {
        enum State {
            Preamble,
            Assumptions,
            BetweenBlocks,
            Goals,
            Trailing,
        }
        let squash = |s: &str| s.split_whitespace().collect::<String>();
        let standard: Vec<(String, GoalId)> = GoalId::ALL
            .iter()
            .map(|&g| (squash(&Goal::Standard(g).render()), g))
            .collect();

        let mut p = ProverProblem {
            directives: Vec::new(),
            base: Vec::new(),
            variety_axioms: Vec::new(),
            aux_assumptions: Vec::new(),
            goals: Vec::new(),
            trailing: Vec::new(),
        };
        let mut state = State::Preamble;
        let (mut saw_assumptions, mut saw_goals) = (false, false);
        for line in text.lines() {
            let t = line.trim();
            match state {
                State::Preamble | State::BetweenBlocks => {
                    if t == "formulas(assumptions)." && !saw_assumptions {
                        saw_assumptions = true;
                        state = State::Assumptions;
                    } else if t == "formulas(goals)." && !saw_goals {
                        saw_goals = true;
                        state = State::Goals;
                    } else if matches!(state, State::Preamble) && !t.is_empty() {
                        p.directives.push(t.to_string());
                    } else if !t.is_empty() {
                        return Err(Error::Format(format!(
                            "unexpected line between blocks: `{t}`"
                        )));
                    }
                }
                State::Assumptions => {
                    if t == "end_of_list." {
                        state = State::BetweenBlocks;
                    } else {
                        p.base.push(line.to_string());
                    }
                }
                State::Goals => {
                    if t == "end_of_list." {
                        state = State::Trailing;
                    } else if !t.is_empty() {
                        let key = squash(line);
                        match standard.iter().find(|(s, _)| *s == key) {
                            Some(&(_, g)) => p.goals.push(Goal::Standard(g)),
                            None => p.goals.push(Goal::Clause(t.to_string())),
                        }
                    }
                }
                State::Trailing => p.trailing.push(line.to_string()),
            }
        }
        if !saw_assumptions || !saw_goals || !matches!(state, State::Trailing) {
            return Err(Error::Format(
                "expected a formulas(assumptions) block and a formulas(goals) block".into(),
            ));
        }
        if p.goals.is_empty() {
            return Err(Error::Format("goal list is empty".into()));
        }
        Ok(p)
    }
}

impl fmt::Display for ProverProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Verbatim transcription of the reference problem file.
pub const GOLDEN_PROBLEM: &str = include_str!("../../data/aim_problem.in");
