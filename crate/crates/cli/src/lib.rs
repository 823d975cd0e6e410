//! The `aimloop` command line.

pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use aimloop::conjecture::{check_conjecture, check_goals, GoalId};
use aimloop::enumerate::{EnumOutput, EnumSpec, Filter, Mode};
use aimloop::group::DEFAULT_CLOSURE_CAP;
use aimloop::prover::{
    eliminate_assumptions, p9loop_run, AdapterConfig, AuxAssumption, ExecAdapter, Limits,
    MockAdapter, P9LoopOutcome, ProverAdapter, ProverProblem, Verdict,
};
use aimloop::variety::{variety_check, VarietyId};
use aimloop::{Error, Fixture, LoopTable};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub const DEFAULT_PROVER_COMMAND: &str = "prover9 -f {input}";

#[derive(Debug, Parser)]
#[command(
    name = "aimloop",
    version,
    about = "Finite loops with abelian inner mapping groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural report: Mlt, Inn, nuclei, center, subloops, central series.
    Analyze {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        opts: ReportOpts,
    },
    /// Evaluate the eight goal identities.
    Goals {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        json: bool,
    },
    /// Test membership in a named variety.
    Variety {
        #[command(flatten)]
        source: Source,
        /// Variety name, e.g. LC, Moufang, "left Bol".
        #[arg(long)]
        name: VarietyId,
        #[command(flatten)]
        opts: ReportOpts,
    },
    /// AIM status, quotient conditions and class, cross-checked.
    Conjecture {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        opts: ReportOpts,
    },
    /// Enumerate normalized loop tables of one order.
    Enumerate {
        #[arg(long)]
        order: usize,
        /// Comma-separated: aim, not-aim, nonassociative, commutative, class<=K, variety:NAME.
        #[arg(long, value_delimiter = ',')]
        filter: Vec<Filter>,
        #[arg(long, group = "mode")]
        count: bool,
        #[arg(long, group = "mode")]
        first: bool,
        #[arg(long, group = "mode")]
        emit: bool,
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Write a prover input file.
    Export {
        #[arg(long)]
        variety: Option<VarietyId>,
        /// Comma-separated goal labels, or `all`.
        #[arg(long, value_delimiter = ',')]
        goals: Vec<String>,
        #[arg(long)]
        aux: Vec<AuxAssumption>,
        /// Add the forward-reasoning directives.
        #[arg(long)]
        forward_only: bool,
        /// Output path, `-` for standard output.
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Run the prover over a list of term orderings, carrying hint matchers forward.
    P9loop {
        #[arg(long)]
        input: PathBuf,
        /// One directive per line, `#` comments.
        #[arg(long)]
        orderings: PathBuf,
        /// `mock:SCRIPT` or `exec:COMMAND` (`exec` alone uses the configured command).
        #[arg(long)]
        adapter: String,
        #[arg(long)]
        adapter_config: Option<PathBuf>,
        #[arg(long)]
        max_seconds: Option<f64>,
        #[arg(long)]
        max_iterations: Option<usize>,
        /// Afterwards, try to derive every injected assumption used in the proof.
        #[arg(long)]
        eliminate: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print a built-in table.
    Fixture { name: String, k: Option<usize> },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Table file, `-` for standard input.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Built-in table, e.g. `--fixture example1` or `--fixture cyclic 5`.
    #[arg(long, num_args = 1..=2, value_names = ["NAME", "K"])]
    fixture: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct ReportOpts {
    #[arg(long)]
    json: bool,
    /// Largest permutation group that will be enumerated.
    #[arg(long, default_value_t = DEFAULT_CLOSURE_CAP)]
    cap: usize,
}

/// Exit status classes.
#[derive(Debug)]
pub enum Failure {
    /// Bad input or a resource cap; exit 2.
    User(String),
    /// Independent computations disagree; exit 1.
    Internal(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::User(_) => 2,
            Failure::Internal(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::User(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::User(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let (Failure::User(msg) | Failure::Internal(msg)) = &f;
            let _ = writeln!(err, "error: {msg}");
            f.code()
        }
    }
}

fn read_path(path: &Path) -> io::Result<String> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
            .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    }
}

fn fixture_param(k: Option<&String>) -> std::result::Result<Option<usize>, Failure> {
    k.map(|k| {
        k.parse()
            .map_err(|_| Failure::User(format!("fixture parameter `{k}` is not a number")))
    })
    .transpose()
}

fn load(source: &Source) -> std::result::Result<LoopTable, Failure> {
    if let Some(path) = &source.file {
        let text = read_path(path)?;
        return LoopTable::parse(&text)
            .map_err(|e| Failure::User(format!("{}: {e}", path.display())));
    }
    let parts = source.fixture.as_deref().unwrap_or_default();
    let name = parts.first().map(String::as_str).unwrap_or_default();
    Ok(Fixture::new(name, fixture_param(parts.get(1))?)?.table())
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Analyze { source, opts } => {
            let q = load(&source)?;
            let a = report::analyze(&q, opts.cap)?;
            if opts.json {
                json_line(out, &a)?;
            } else {
                write!(out, "{}", report::render_analysis(&a))?;
            }
            if a.inconsistencies.is_empty() {
                Ok(())
            } else {
                Err(Failure::Internal(a.inconsistencies.join("; ")))
            }
        }
        Command::Goals { source, json } => {
            let q = load(&source)?;
            let goals = check_goals(&q);
            if json {
                json_line(out, &goals.outcomes)
            } else {
                write!(out, "{}", report::render_goals(&goals.outcomes))?;
                Ok(())
            }
        }
        Command::Variety { source, name, opts } => {
            let q = load(&source)?;
            let witness = variety_check(&q, name, opts.cap)?;
            if opts.json {
                #[derive(Serialize)]
                struct V {
                    variety: VarietyId,
                    member: bool,
                    witness: Option<String>,
                }
                json_line(
                    out,
                    &V {
                        variety: name,
                        member: witness.is_none(),
                        witness: witness.map(|w| w.to_string()),
                    },
                )
            } else {
                match witness {
                    None => writeln!(out, "{name}: true")?,
                    Some(w) => writeln!(out, "{name}: false ({w})")?,
                }
                Ok(())
            }
        }
        Command::Conjecture { source, opts } => {
            let q = load(&source)?;
            let r = check_conjecture(&q, opts.cap)?;
            if opts.json {
                return json_line(out, &r);
            }
            writeln!(out, "AIM (inner mapping group): {}", r.is_aim)?;
            writeln!(
                out,
                "AIM (commutation identities): {}",
                r.is_aim_via_identities
            )?;
            writeln!(out, "N normal: {}", r.n_normal)?;
            writeln!(
                out,
                "Q/N abelian group: goals {}, quotient {}",
                r.goals.quotient_by_nucleus_abelian_group(),
                if r.n_normal {
                    r.q_mod_n_abelian_group.to_string()
                } else {
                    "undefined".into()
                }
            )?;
            writeln!(
                out,
                "Q/Z group: goals {}, quotient {}",
                r.goals.quotient_by_center_group(),
                r.q_mod_z_group
            )?;
            writeln!(out, "class: {}", r.class)?;
            writeln!(
                out,
                "consistent with conjecture: {}",
                r.consistent_with_conjecture
            )?;
            Ok(())
        }
        Command::Enumerate {
            order,
            filter,
            count: _,
            first,
            emit,
            threads,
        } => {
            if threads == 0 {
                return Err(Failure::User("--threads must be at least 1".into()));
            }
            let mode = if first {
                Mode::FindFirst
            } else if emit {
                Mode::Emit
            } else {
                Mode::Count
            };
            let spec = EnumSpec::new(order, mode).with_filters(filter);
            if mode == Mode::Emit && threads == 1 {
                let mut sep = "";
                let mut io_err = None;
                spec.for_each(|q| match write!(out, "{sep}{}", q.render()) {
                    Ok(()) => {
                        sep = "\n";
                        true
                    }
                    Err(e) => {
                        io_err = Some(e);
                        false
                    }
                })?;
                return io_err.map_or(Ok(()), |e| Err(e.into()));
            }
            match spec.run(threads)? {
                EnumOutput::Count(c) => writeln!(out, "{c}")?,
                EnumOutput::Tables(tables) => {
                    let blocks: Vec<String> = tables.iter().map(LoopTable::render).collect();
                    write!(out, "{}", blocks.join("\n"))?;
                }
                EnumOutput::First(Some(q)) => write!(out, "{}", q.render())?,
                EnumOutput::First(None) => {}
            }
            Ok(())
        }
        Command::Export {
            variety,
            goals,
            aux,
            forward_only,
            output,
        } => {
            let mut problem = ProverProblem::default();
            if forward_only {
                problem = problem.forward_only();
            }
            if let Some(v) = variety {
                problem = problem.with_variety(v);
            }
            for a in aux {
                problem = problem.with_aux(a);
            }
            if !goals.is_empty() {
                let ids: Vec<GoalId> = if goals.len() == 1 && goals[0].eq_ignore_ascii_case("all") {
                    GoalId::ALL.to_vec()
                } else {
                    goals
                        .iter()
                        .map(|g| g.parse())
                        .collect::<aimloop::Result<_>>()?
                };
                problem = problem.with_goals(&ids)?;
            }
            let text = problem.render();
            if output == Path::new("-") {
                write!(out, "{text}")?;
            } else {
                fs::write(&output, text)
                    .map_err(|e| Failure::User(format!("{}: {e}", output.display())))?;
            }
            Ok(())
        }
        Command::P9loop {
            input,
            orderings,
            adapter,
            adapter_config,
            max_seconds,
            max_iterations,
            eliminate,
            json,
        } => {
            let problem = ProverProblem::from_text(&read_path(&input)?)?;
            let orderings = parse_orderings(&read_path(&orderings)?);
            let config: AdapterConfig = match &adapter_config {
                Some(path) => toml::from_str(&read_path(path)?)
                    .map_err(|e| Failure::User(format!("{}: {e}", path.display())))?,
                None => AdapterConfig::default(),
            };
            let limits = Limits {
                max_seconds: max_seconds.or(config.max_seconds),
                max_iterations,
            };
            let mut adapter = make_adapter(&adapter, &config)?;
            let outcome = p9loop_run(&problem, &orderings, &limits, adapter.as_mut())?;
            let elimination = if eliminate && outcome.proved() {
                Some(eliminate_assumptions(&outcome, adapter.as_mut(), &limits)?)
            } else {
                None
            };
            if json {
                json_line(out, &p9loop_json(&outcome, elimination.as_ref()))
            } else {
                write!(out, "{}", p9loop_text(&outcome, elimination.as_ref()))?;
                Ok(())
            }
        }
        Command::Fixture { name, k } => {
            let q = Fixture::new(&name, k)?.table();
            write!(out, "{}", q.render())?;
            Ok(())
        }
    }
}

pub fn parse_orderings(text: &str) -> Vec<String> {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or_default().trim())
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect()
}

fn make_adapter(
    spec: &str,
    config: &AdapterConfig,
) -> std::result::Result<Box<dyn ProverAdapter>, Failure> {
    if let Some(script) = spec.strip_prefix("mock:") {
        let text = read_path(Path::new(script))?;
        return Ok(Box::new(MockAdapter::parse(&text)?));
    }
    let command = match spec.strip_prefix("exec") {
        Some("") => config
            .command
            .clone()
            .unwrap_or_else(|| DEFAULT_PROVER_COMMAND.to_string()),
        Some(rest) if rest.starts_with(':') => rest[1..].to_string(),
        _ => {
            return Err(Failure::User(format!(
                "unknown adapter `{spec}`, expected mock:SCRIPT or exec:COMMAND"
            )))
        }
    };
    let mut adapter = ExecAdapter::from_env_or(command);
    adapter.workdir = config.workdir.clone();
    Ok(Box::new(adapter))
}

#[derive(Serialize)]
struct IterationJson<'a> {
    iteration: usize,
    directive: &'a str,
    injected: &'a [String],
    proved: bool,
    hint_matchers: &'a [String],
}

#[derive(Serialize)]
struct EliminationJson<'a> {
    assumption: &'a str,
    proved: bool,
    iteration: Option<usize>,
}

#[derive(Serialize)]
struct P9LoopJson<'a> {
    proved: bool,
    iteration: Option<usize>,
    proof: Option<&'a str>,
    iterations: Vec<IterationJson<'a>>,
    injected_assumptions: Vec<&'a str>,
    used_assumptions: Vec<&'a str>,
    eliminated: Option<Vec<EliminationJson<'a>>>,
    underived: Option<&'a [String]>,
}

fn proved_at(o: &P9LoopOutcome) -> Option<(usize, &str)> {
    match &o.verdict {
        Verdict::Proved { iteration, proof } => Some((*iteration, proof.as_str())),
        Verdict::Exhausted => None,
    }
}

fn p9loop_json<'a>(
    o: &'a P9LoopOutcome,
    elim: Option<&'a aimloop::prover::EliminationReport>,
) -> P9LoopJson<'a> {
    P9LoopJson {
        proved: o.proved(),
        iteration: proved_at(o).map(|p| p.0),
        proof: proved_at(o).map(|p| p.1),
        iterations: o
            .iterations
            .iter()
            .map(|i| IterationJson {
                iteration: i.iteration,
                directive: &i.directive,
                injected: &i.injected,
                proved: i.proved,
                hint_matchers: &i.hint_matchers,
            })
            .collect(),
        injected_assumptions: o.injected_clauses(),
        used_assumptions: o
            .used_assumptions()
            .iter()
            .map(|i| i.clause.as_str())
            .collect(),
        eliminated: elim.map(|r| {
            r.steps
                .iter()
                .map(|s| EliminationJson {
                    assumption: &s.assumption,
                    proved: s.outcome.proved(),
                    iteration: proved_at(&s.outcome).map(|p| p.0),
                })
                .collect()
        }),
        underived: elim.map(|r| r.underived.as_slice()),
    }
}

fn p9loop_text(o: &P9LoopOutcome, elim: Option<&aimloop::prover::EliminationReport>) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    for i in &o.iterations {
        let _ = writeln!(
            s,
            "iteration {}: {} | {} injected | {} | {} hint matchers",
            i.iteration,
            i.directive,
            i.injected.len(),
            if i.proved { "proved" } else { "not proved" },
            i.hint_matchers.len()
        );
    }
    match proved_at(o) {
        Some((k, _)) => {
            let _ = writeln!(s, "verdict: proved at iteration {k}");
        }
        None => s.push_str("verdict: exhausted\n"),
    }
    for c in o.injected_clauses() {
        let _ = writeln!(s, "injected: {c}");
    }
    for c in o.used_assumptions() {
        let _ = writeln!(s, "used: {}", c.clause);
    }
    if let Some(r) = elim {
        for step in &r.steps {
            match proved_at(&step.outcome) {
                Some((k, _)) => {
                    let _ = writeln!(s, "derived at iteration {k}: {}", step.assumption);
                }
                None => {
                    let _ = writeln!(s, "not derived: {}", step.assumption);
                }
            }
        }
        let _ = writeln!(
            s,
            "elimination: {}",
            if r.is_complete() {
                "complete"
            } else {
                "incomplete"
            }
        );
    }
    s
}
