use std::collections::HashSet;
use std::time::Duration;

use thiserror::Error;

use super::{Goal, ProverProblem};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Limits {
    /// Wall-clock budget per prover launch.
    pub max_seconds: Option<f64>,
    /// Only the first `max_iterations` directives are tried.
    pub max_iterations: Option<usize>,
}

impl Limits {
    pub fn timeout(&self) -> Option<Duration> {
        self.max_seconds.map(Duration::from_secs_f64)
    }
}

/// A term-ordering directive with its 1-based position in the ordering list.
#[derive(Clone, Copy, Debug)]
pub struct DirectiveRef<'a> {
    pub index: usize,
    pub text: &'a str,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AdapterResult {
    pub proved: bool,
    pub proof_text: Option<String>,
    /// Derived clauses that matched hints, verbatim.
    pub hint_matchers: Vec<String>,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{0}")]
pub struct AdapterError(pub String);

/// One prover launch on a rendered problem under one ordering directive.
/// Hitting a resource limit is a normal unproved result, not an error.
pub trait ProverAdapter {
    fn launch(
        &mut self,
        problem: &str,
        directive: DirectiveRef<'_>,
        limits: &Limits,
    ) -> std::result::Result<AdapterResult, AdapterError>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved { iteration: usize, proof: String },
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Injected {
    pub clause: String,
    /// Iteration whose run produced the clause.
    pub from_iteration: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterationLog {
    pub iteration: usize,
    pub directive: String,
    /// Injected assumptions present in this launch.
    pub injected: Vec<String>,
    pub proved: bool,
    pub hint_matchers: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct P9LoopOutcome {
    pub verdict: Verdict,
    pub problem: ProverProblem,
    pub directives: Vec<String>,
    pub iterations: Vec<IterationLog>,
    pub injected_assumptions: Vec<Injected>,
}

impl P9LoopOutcome {
    pub fn proved(&self) -> bool {
        matches!(self.verdict, Verdict::Proved { .. })
    }

    pub fn injected_clauses(&self) -> Vec<&str> {
        self.injected_assumptions
            .iter()
            .map(|i| i.clause.as_str())
            .collect()
    }

    /// Injected assumptions whose text occurs in the proof.
    pub fn used_assumptions(&self) -> Vec<&Injected> {
        match &self.verdict {
            Verdict::Proved { proof, .. } => {
                let proof = squash(proof);
                self.injected_assumptions
                    .iter()
                    .filter(|i| proof.contains(&squash(&i.clause)))
                    .collect()
            }
            Verdict::Exhausted => Vec::new(),
        }
    }
}

pub(crate) fn squash(s: &str) -> String {
    s.split_whitespace().collect()
}

/// Runs the prover with each directive in turn until a proof is found. After
/// every failed run its hint matchers are added to the assumptions of all
/// later runs.
pub fn p9loop_run(
    problem: &ProverProblem,
    orderings: &[String],
    limits: &Limits,
    adapter: &mut dyn ProverAdapter,
) -> Result<P9LoopOutcome> {
    if orderings.is_empty() {
        return Err(Error::EmptyOrderingList);
    }
    let mut seen: HashSet<String> = problem.assumption_clauses().map(squash).collect();
    seen.extend(problem.goals.iter().map(|g| squash(&g.clause())));
    let mut injected: Vec<Injected> = Vec::new();
    let mut iterations = Vec::new();
    let budget = limits.max_iterations.unwrap_or(usize::MAX);

    for (i, directive) in orderings.iter().enumerate().take(budget) {
        let iteration = i + 1;
        let mut current = problem.clone();
        current
            .aux_assumptions
            .extend(injected.iter().map(|h| h.clause.clone()));
        let result = adapter
            .launch(
                &current.render(),
                DirectiveRef {
                    index: iteration,
                    text: directive,
                },
                limits,
            )
            .map_err(|e| Error::AdapterFailure {
                iteration,
                diagnostics: e.0,
            })?;
        iterations.push(IterationLog {
            iteration,
            directive: directive.clone(),
            injected: injected.iter().map(|h| h.clause.clone()).collect(),
            proved: result.proved,
            hint_matchers: result.hint_matchers.clone(),
        });
        if result.proved {
            return Ok(P9LoopOutcome {
                verdict: Verdict::Proved {
                    iteration,
                    proof: result.proof_text.unwrap_or_default(),
                },
                problem: problem.clone(),
                directives: orderings.to_vec(),
                iterations,
                injected_assumptions: injected,
            });
        }
        for h in result.hint_matchers {
            if seen.insert(squash(&h)) {
                injected.push(Injected {
                    clause: h,
                    from_iteration: iteration,
                });
            }
        }
    }
    Ok(P9LoopOutcome {
        verdict: Verdict::Exhausted,
        problem: problem.clone(),
        directives: orderings.to_vec(),
        iterations,
        injected_assumptions: injected,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub assumption: String,
    pub outcome: P9LoopOutcome,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EliminationReport {
    pub steps: Vec<Elimination>,
    pub underived: Vec<String>,
}

impl EliminationReport {
    pub fn is_complete(&self) -> bool {
        self.underived.is_empty()
    }
}

/// Recovers derivations of injected assumptions used in a proof. Each one is
/// made the sole goal of a new run over the same directives, with only the
/// assumptions that were available when it was produced. Assumptions used
/// by those sub-proofs are eliminated in turn, so the report is complete
/// once every step is proved and `underived` is empty.
pub fn eliminate_assumptions(
    outcome: &P9LoopOutcome,
    adapter: &mut dyn ProverAdapter,
    limits: &Limits,
) -> Result<EliminationReport> {
    let mut report = EliminationReport::default();
    let mut visited = HashSet::new();
    eliminate_into(outcome, adapter, limits, &mut visited, &mut report)?;
    Ok(report)
}

fn eliminate_into(
    outcome: &P9LoopOutcome,
    adapter: &mut dyn ProverAdapter,
    limits: &Limits,
    visited: &mut HashSet<String>,
    report: &mut EliminationReport,
) -> Result<()> {
    let Verdict::Proved { proof, .. } = &outcome.verdict else {
        return Ok(());
    };
    let proof = squash(proof);
    let mut queue: Vec<&Injected> = outcome
        .injected_assumptions
        .iter()
        .filter(|i| proof.contains(&squash(&i.clause)))
        .filter(|i| visited.insert(squash(&i.clause)))
        .collect();
    let mut next = 0;
    while next < queue.len() {
        let target = queue[next];
        next += 1;
        let available = || {
            outcome
                .injected_assumptions
                .iter()
                .filter(|i| i.from_iteration < target.from_iteration)
        };
        let mut sub = outcome.problem.clone();
        sub.goals = vec![Goal::Clause(target.clause.clone())];
        sub.aux_assumptions
            .extend(available().map(|i| i.clause.clone()));
        let sub_outcome = p9loop_run(&sub, &outcome.directives, limits, adapter)?;
        match &sub_outcome.verdict {
            Verdict::Proved { proof, .. } => {
                let proof = squash(proof);
                for dep in available().filter(|i| proof.contains(&squash(&i.clause))) {
                    if visited.insert(squash(&dep.clause)) {
                        queue.push(dep);
                    }
                }
            }
            Verdict::Exhausted => report.underived.push(target.clause.clone()),
        }
        report.steps.push(Elimination {
            assumption: target.clause.clone(),
            outcome: sub_outcome.clone(),
        });
        // hints injected during the sub-run itself
        eliminate_into(&sub_outcome, adapter, limits, visited, report)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prover::MockAdapter;

    const H: &str = "x * (y * x) = (x * y) * x.";

    fn orderings() -> Vec<String> {
        ["lex([1,*,\\,/]).", "lex([*,1,\\,/]).", "lex([/,\\,*,1])."]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    fn scripted(extra: &str) -> MockAdapter {
        MockAdapter::parse(&format!(
            "# hint at 2, needed at 3\n\
             1 | proved:no | requires: | emits-hints:\n\
             2 | proved:no | requires: | emits-hints: {H}\n\
             3 | proved:yes | requires: {H} | emits-hints:\n\
             {extra}"
        ))
        .unwrap()
    }

    #[test]
    fn proved_on_first_directive() {
        let mut mock = MockAdapter::parse("1 | proved:yes | requires: | emits-hints:").unwrap();
        let out = p9loop_run(
            &ProverProblem::default(),
            &orderings(),
            &Limits::default(),
            &mut mock,
        )
        .unwrap();
        assert!(matches!(out.verdict, Verdict::Proved { iteration: 1, .. }));
        assert!(out.injected_assumptions.is_empty());
        let report = eliminate_assumptions(&out, &mut mock, &Limits::default()).unwrap();
        assert!(report.steps.is_empty() && report.is_complete());
    }

    #[test]
    fn hint_from_iteration_two_proves_at_three() {
        let mut mock = scripted("");
        let out = p9loop_run(
            &ProverProblem::default(),
            &orderings(),
            &Limits::default(),
            &mut mock,
        )
        .unwrap();
        assert!(matches!(out.verdict, Verdict::Proved { iteration: 3, .. }));
        assert_eq!(out.injected_clauses(), vec![H]);
        assert_eq!(out.injected_assumptions[0].from_iteration, 2);
        assert_eq!(out.iterations.len(), 3);
        assert!(out.iterations[1].injected.is_empty());
        assert_eq!(out.iterations[2].injected, vec![H.to_string()]);
        assert_eq!(out.used_assumptions().len(), 1);

        let again = p9loop_run(
            &ProverProblem::default(),
            &orderings(),
            &Limits::default(),
            &mut mock,
        )
        .unwrap();
        assert_eq!(out, again);
    }

    #[test]
    fn without_the_hint_the_run_is_exhausted() {
        let mut mock =
            MockAdapter::parse(&format!("3 | proved:yes | requires: {H} | emits-hints:")).unwrap();
        let out = p9loop_run(
            &ProverProblem::default(),
            &orderings(),
            &Limits::default(),
            &mut mock,
        )
        .unwrap();
        assert_eq!(out.verdict, Verdict::Exhausted);
        assert_eq!(out.iterations.len(), 3);
    }

    #[test]
    fn iteration_budget() {
        let mut mock = scripted("");
        let limits = Limits {
            max_iterations: Some(2),
            ..Limits::default()
        };
        let out = p9loop_run(&ProverProblem::default(), &orderings(), &limits, &mut mock).unwrap();
        assert_eq!(out.verdict, Verdict::Exhausted);
        assert_eq!(out.iterations.len(), 2);
        assert_eq!(out.injected_clauses(), vec![H]);
    }

    #[test]
    fn empty_orderings() {
        let mut mock = scripted("");
        let err = p9loop_run(
            &ProverProblem::default(),
            &[],
            &Limits::default(),
            &mut mock,
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptyOrderingList));
    }

    #[test]
    fn adapter_failure_carries_iteration() {
        struct Broken;
        impl ProverAdapter for Broken {
            fn launch(
                &mut self,
                _: &str,
                d: DirectiveRef<'_>,
                _: &Limits,
            ) -> std::result::Result<AdapterResult, AdapterError> {
                if d.index == 2 {
                    Err(AdapterError("segfault".into()))
                } else {
                    Ok(AdapterResult::default())
                }
            }
        }
        let err = p9loop_run(
            &ProverProblem::default(),
            &orderings(),
            &Limits::default(),
            &mut Broken,
        )
        .unwrap_err();
        match err {
            Error::AdapterFailure {
                iteration,
                diagnostics,
            } => {
                assert_eq!(iteration, 2);
                assert_eq!(diagnostics, "segfault");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn elimination_derives_the_hint() {
        let mut mock = scripted(&format!(
            "1 | proved:yes | requires: | emits-hints: | goal: {H}"
        ));
        let out = p9loop_run(
            &ProverProblem::default(),
            &orderings(),
            &Limits::default(),
            &mut mock,
        )
        .unwrap();
        let report = eliminate_assumptions(&out, &mut mock, &Limits::default()).unwrap();
        assert_eq!(report.steps.len(), 1);
        assert_eq!(report.steps[0].assumption, H);
        assert!(matches!(
            report.steps[0].outcome.verdict,
            Verdict::Proved { iteration: 1, .. }
        ));
        assert!(report.is_complete());
        let rendered = report.steps[0].outcome.problem.render();
        assert!(rendered.contains(H));
        assert!(!rendered.contains("label(\"aK1\")"));
    }

    #[test]
    fn failed_sub_run_leaves_hint_underived() {
        let mut mock = scripted(&format!(
            "1 | proved:no | requires: | emits-hints: | goal: {H}"
        ));
        let out = p9loop_run(
            &ProverProblem::default(),
            &orderings(),
            &Limits::default(),
            &mut mock,
        )
        .unwrap();
        let report = eliminate_assumptions(&out, &mut mock, &Limits::default()).unwrap();
        assert_eq!(report.underived, vec![H.to_string()]);
        assert!(!report.is_complete());
    }

    #[test]
    fn nested_dependencies_are_followed() {
        let g = "x * (x * y) = (x * x) * y.";
        let mut mock = MockAdapter::parse(&format!(
            "1 | proved:no | requires: | emits-hints: {g}\n\
             2 | proved:no | requires: | emits-hints: {H}\n\
             3 | proved:yes | requires: {H} | emits-hints:\n\
             1 | proved:no | requires: | emits-hints: | goal: {H}\n\
             2 | proved:yes | requires: {g} | emits-hints: | goal: {H}\n\
             1 | proved:yes | requires: | emits-hints: | goal: {g}\n"
        ))
        .unwrap();
        let out = p9loop_run(
            &ProverProblem::default(),
            &orderings(),
            &Limits::default(),
            &mut mock,
        )
        .unwrap();
        assert_eq!(out.injected_clauses(), vec![g, H]);
        assert_eq!(out.used_assumptions().len(), 1);
        let report = eliminate_assumptions(&out, &mut mock, &Limits::default()).unwrap();
        let targets: Vec<_> = report.steps.iter().map(|s| s.assumption.as_str()).collect();
        assert_eq!(targets, vec![H, g]);
        assert!(report.is_complete());
    }
}
