use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use serde::Deserialize;

use super::p9loop::{squash, AdapterError, AdapterResult, DirectiveRef, Limits, ProverAdapter};
use super::ProverProblem;
use crate::error::{Error, Result};

/// Environment variable that overrides the external prover command.
pub const PROVER_CMD_ENV: &str = "AIMLOOP_PROVER_CMD";

/// One scripted response of the [`MockAdapter`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MockRecord {
    pub directive: usize,
    pub proved: bool,
    /// Assumptions that must be present for `proved` to take effect.
    pub requires: Vec<String>,
    /// Hint matchers reported when the run does not prove the goal.
    pub emits_hints: Vec<String>,
    /// Restricts the record to problems having this clause as a goal.
    pub goal: Option<String>,
}

/// Scripted, stateless adapter for tests and dry runs.
///
/// Script lines have the form
///
/// ```text
/// directive-index | proved:{yes,no} | requires: clause;clause | emits-hints: clause;clause [| goal: clause]
/// ```
///
/// with `#` comments and blank lines ignored. Clauses in a list are separated
/// by `;`. A launch uses the first record for its directive index whose goal
/// matches the problem, preferring records with a `goal` field; with no
/// matching record the run fails silently.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MockAdapter {
    pub records: Vec<MockRecord>,
}

impl MockAdapter {
    pub fn parse(script: &str) -> Result<Self> {
        let mut records = Vec::new();
        for (lineno, line) in script.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad =
                |what: &str| Error::Format(format!("mock script line {}: {what}", lineno + 1));
            let fields: Vec<&str> = line.split('|').map(str::trim).collect();
            if !(4..=5).contains(&fields.len()) {
                return Err(bad("expected 4 or 5 `|`-separated fields"));
            }
            let directive = fields[0]
                .parse()
                .ok()
                .filter(|&d: &usize| d >= 1)
                .ok_or_else(|| bad("directive index must be a positive integer"))?;
            let proved = match fields[1].strip_prefix("proved:").map(str::trim) {
                Some("yes") => true,
                Some("no") => false,
                _ => return Err(bad("second field must be proved:yes or proved:no")),
            };
            let clauses = |field: &str, key: &str| -> Result<Vec<String>> {
                let rest = field
                    .strip_prefix(key)
                    .ok_or_else(|| bad(&format!("expected `{key}`")))?;
                Ok(rest
                    .split(';')
                    .map(str::trim)
                    .filter(|c| !c.is_empty())
                    .map(str::to_string)
                    .collect())
            };
            let requires = clauses(fields[2], "requires:")?;
            let emits_hints = clauses(fields[3], "emits-hints:")?;
            let goal = match fields.get(4) {
                Some(f) => Some(
                    clauses(f, "goal:")?
                        .pop()
                        .ok_or_else(|| bad("empty goal field"))?,
                ),
                None => None,
            };
            records.push(MockRecord {
                directive,
                proved,
                requires,
                emits_hints,
                goal,
            });
        }
        Ok(MockAdapter { records })
    }
}

impl ProverAdapter for MockAdapter {
    fn launch(
        &mut self,
        problem: &str,
        directive: DirectiveRef<'_>,
        _limits: &Limits,
    ) -> std::result::Result<AdapterResult, AdapterError> {
        let parsed = ProverProblem::from_text(problem).map_err(|e| AdapterError(e.to_string()))?;
        let goals: Vec<String> = parsed.goals.iter().map(|g| squash(&g.clause())).collect();
        let assumptions: Vec<String> = parsed.assumption_clauses().map(squash).collect();

        let candidates = self
            .records
            .iter()
            .filter(|r| r.directive == directive.index);
        let record = candidates
            .clone()
            .find(|r| r.goal.as_ref().is_some_and(|g| goals.contains(&squash(g))))
            .or_else(|| candidates.clone().find(|r| r.goal.is_none()));
        let Some(record) = record else {
            return Ok(AdapterResult::default());
        };
        let satisfied = record
            .requires
            .iter()
            .all(|c| assumptions.contains(&squash(c)));
        if record.proved && satisfied {
            let mut proof = format!(
                "% mock proof, directive {} ({})\n",
                directive.index, directive.text
            );
            for c in &record.requires {
                proof.push_str(c);
                proof.push_str("  [assumption].\n");
            }
            proof.push_str("$F.  [goal].\n");
            Ok(AdapterResult {
                proved: true,
                proof_text: Some(proof),
                hint_matchers: Vec::new(),
            })
        } else {
            Ok(AdapterResult {
                proved: false,
                proof_text: None,
                hint_matchers: record.emits_hints.clone(),
            })
        }
    }
}

/// Adapter configuration file contents (TOML).
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AdapterConfig {
    /// Command template; `{input}` is replaced by the problem file path.
    pub command: Option<String>,
    pub max_seconds: Option<f64>,
    pub workdir: Option<PathBuf>,
}

/// Runs an external prover through `sh -c`.
///
/// The problem is written to a temporary file with the ordering directive
/// as its first line. If the template has no `{input}` placeholder the file
/// is piped to standard input instead. Output is interpreted line by line:
///
/// * a proof was found if a line contains `THEOREM PROVED` or starts with
///   `============================== PROOF`;
/// * the proof text is the output between that banner and
///   `============================== end of proof` (or the whole output);
/// * a hint matcher is either a line `hint_matcher: <clause>` or a
///   given-clause record `given #N (H,...): ID <clause>.  [justification].`
///   whose selection flag is `H`.
///
/// Exceeding the wall-clock limit kills the process and counts as unproved.
#[derive(Clone, Debug)]
pub struct ExecAdapter {
    pub command: String,
    pub workdir: Option<PathBuf>,
}

impl ExecAdapter {
    pub fn new(command: impl Into<String>) -> Self {
        ExecAdapter {
            command: command.into(),
            workdir: None,
        }
    }

    /// `command`, unless the environment override is set.
    pub fn from_env_or(command: impl Into<String>) -> Self {
        match std::env::var(PROVER_CMD_ENV) {
            Ok(cmd) if !cmd.trim().is_empty() => Self::new(cmd),
            _ => Self::new(command),
        }
    }

    pub fn parse_output(output: &str) -> AdapterResult {
        const BANNER: &str = "============================== PROOF";
        const END: &str = "============================== end of proof";
        let proved = output
            .lines()
            .any(|l| l.contains("THEOREM PROVED") || l.starts_with(BANNER));
        let proof_text = proved.then(|| match output.find(BANNER) {
            Some(start) => {
                let rest = &output[start..];
                rest[..rest.find(END).map_or(rest.len(), |e| e + END.len())].to_string()
            }
            None => output.to_string(),
        });
        let mut hint_matchers: Vec<String> = Vec::new();
        for line in output.lines().map(str::trim) {
            let clause = if let Some(c) = line.strip_prefix("hint_matcher:") {
                Some(c.trim().to_string())
            } else {
                given_hint_clause(line)
            };
            if let Some(c) = clause.filter(|c| !c.is_empty()) {
                if !hint_matchers.contains(&c) {
                    hint_matchers.push(c);
                }
            }
        }
        AdapterResult {
            proved,
            proof_text,
            hint_matchers: if proved { Vec::new() } else { hint_matchers },
        }
    }
}

/// `given #12 (H,wt=7): 34 x * y = y * x.  [para(1,2)].` → `x * y = y * x.`
fn given_hint_clause(line: &str) -> Option<String> {
    let rest = line.strip_prefix("given #")?;
    let open = rest.find('(')?;
    let close = rest.find("):")?;
    let flags = &rest[open + 1..close];
    if !flags.split(',').any(|f| f.trim() == "H") {
        return None;
    }
    let body = rest[close + 2..].trim_start();
    let body = body.split_once(' ').map(|(_, b)| b)?;
    let body = match body.rfind("  [") {
        Some(i) => &body[..i],
        None => body,
    };
    let body = body.trim();
    Some(if body.ends_with('.') {
        body.to_string()
    } else {
        format!("{body}.")
    })
}

/// Kills the shell and everything it started, so the output pipes close.
fn kill_tree(child: &mut std::process::Child) {
    #[cfg(unix)]
    let _ = Command::new("kill")
        .args(["-KILL", "--", &format!("-{}", child.id())])
        .stderr(Stdio::null())
        .status();
    let _ = child.kill();
    let _ = child.wait();
}

impl ProverAdapter for ExecAdapter {
    fn launch(
        &mut self,
        problem: &str,
        directive: DirectiveRef<'_>,
        limits: &Limits,
    ) -> std::result::Result<AdapterResult, AdapterError> {
        let fail = |what: &str, e: std::io::Error| AdapterError(format!("{what}: {e}"));
        let mut file = match &self.workdir {
            Some(dir) => tempfile::Builder::new().suffix(".in").tempfile_in(dir),
            None => tempfile::Builder::new().suffix(".in").tempfile(),
        }
        .map_err(|e| fail("cannot create problem file", e))?;
        write!(file, "{}\n{}", directive.text, problem)
            .map_err(|e| fail("cannot write problem file", e))?;
        let path = file.path().display().to_string();

        let uses_placeholder = self.command.contains("{input}");
        let script = self
            .command
            .replace("{input}", &format!("'{}'", path.replace('\'', "'\\''")));
        let mut cmd = Command::new("sh");
        cmd.arg("-c")
            .arg(&script)
            .stdout(Stdio::piped())
            .stderr(Stdio::piped());
        cmd.stdin(if uses_placeholder {
            Stdio::null()
        } else {
            Stdio::from(
                std::fs::File::open(file.path())
                    .map_err(|e| fail("cannot reopen problem file", e))?,
            )
        });
        if let Some(dir) = &self.workdir {
            cmd.current_dir(dir);
        }
        #[cfg(unix)]
        std::os::unix::process::CommandExt::process_group(&mut cmd, 0);
        let mut child = cmd
            .spawn()
            .map_err(|e| fail(&format!("cannot start `{script}`"), e))?;

        let drain = |mut pipe: Box<dyn Read + Send>| {
            thread::spawn(move || {
                let mut buf = String::new();
                let _ = pipe.read_to_string(&mut buf);
                buf
            })
        };
        let stdout = drain(Box::new(child.stdout.take().expect("piped stdout")));
        let stderr = drain(Box::new(child.stderr.take().expect("piped stderr")));

        let started = Instant::now();
        let mut timed_out = false;
        let status = loop {
            match child
                .try_wait()
                .map_err(|e| fail("cannot wait for prover", e))?
            {
                Some(status) => break Some(status),
                None if limits.timeout().is_some_and(|t| started.elapsed() >= t) => {
                    kill_tree(&mut child);
                    timed_out = true;
                    break None;
                }
                None => thread::sleep(Duration::from_millis(10)),
            }
        };
        let out = stdout.join().unwrap_or_default();
        let err = stderr.join().unwrap_or_default();

        let result = Self::parse_output(&out);
        if !timed_out && !result.proved {
            if let Some(status) = status {
                // a prover exits nonzero when it gives up; no output at all is a failure
                if !status.success() && out.trim().is_empty() {
                    return Err(AdapterError(format!(
                        "`{script}` exited with {status}: {}",
                        err.trim()
                    )));
                }
            }
        }
        Ok(result)
    }
}
