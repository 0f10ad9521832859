//! Command-line front end. Exit codes: 0 ok, 1 alerts found by `analyze`,
//! 2 usage, input or startup errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::advisor::{self, Advisory, DispatchPolicy, PlanValidationReport, Severity, StepVerdict};
use crate::landmarks::{LandmarkOrdering, LandmarkOrigin, Status};
use crate::pddl::{self, DomainModel, PddlError, ProblemInstance};
use crate::service::{self, SessionStore};
use crate::session::{self, Session, SessionConfig, Transcript, TranscriptOutcome};
use crate::task::{parse_call, Atom, GroundAction};

#[derive(Debug, Parser)]
#[command(name = "radar", version, about = "Landmark-based alerts and suggestions for plans written in PDDL")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the advisories for a problem and an optional plan
    Analyze {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        problem: PathBuf,
        /// One ground action id per line
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the landmark graph with statuses and orderings
    Landmarks {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Host the session API
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "RADAR_DATA_DIR", default_value = "radar-data")]
        data_dir: PathBuf,
        #[arg(long, default_value = "block", value_parser = parse_policy)]
        dispatch_policy: DispatchPolicy,
    },
    /// Replay a scenario event file and print the transcript
    Replay {
        scenario: PathBuf,
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn parse_policy(s: &str) -> Result<DispatchPolicy, String> {
    s.parse()
}

/// Failure that ends the process with exit code 2.
#[derive(Debug)]
pub struct CliError(pub String);

type CliResult<T> = Result<T, CliError>;

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

pub fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Analyze { domain, problem, plan, format } => {
            let report = analyze_files(&domain, &problem, plan.as_deref())?;
            print!("{}", render(&report, format, render_analyze));
            let alerts = report.advisories.iter().any(|a| a.severity == Severity::Alert);
            Ok(if alerts { ExitCode::from(1) } else { ExitCode::SUCCESS })
        }
        Command::Landmarks { domain, problem, format } => {
            let report = landmarks_files(&domain, &problem)?;
            print!("{}", render(&report, format, render_landmarks));
            Ok(ExitCode::SUCCESS)
        }
        Command::Replay { scenario, domain, problem, format } => {
            let transcript = replay_files(&scenario, &domain, &problem)?;
            print!("{}", render(&transcript, format, render_transcript));
            Ok(ExitCode::SUCCESS)
        }
        Command::Serve { port, data_dir, dispatch_policy } => {
            serve(port, data_dir, dispatch_policy)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn render<T: Serialize>(value: &T, format: Format, text: fn(&T) -> String) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(value).expect("report serializes") + "\n",
        Format::Text => text(value),
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError(format!("{}: {e}", path.display())))
}

fn located(path: &Path, e: PddlError) -> CliError {
    CliError(format!("{}:{e}", path.display()))
}

fn load(domain: &Path, problem: &Path) -> CliResult<(String, String, DomainModel, ProblemInstance)> {
    let dtext = read(domain)?;
    let ptext = read(problem)?;
    let dom = pddl::parse_domain(&dtext).map_err(|e| located(domain, e))?;
    let prob = pddl::parse_problem(&ptext, &dom).map_err(|e| located(problem, e))?;
    Ok((dtext, ptext, dom, prob))
}

/// Reads a plan file: one action id per line in `name(a,b)` or
/// `(name a b)` form. Blank lines and `;` comments are ignored.
pub fn parse_plan<'a>(text: &str, actions: &'a [GroundAction]) -> Result<Vec<&'a GroundAction>, String> {
    let ids = pddl::by_id(actions);
    let mut plan = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split(';').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, args) = parse_call(line).map_err(|e| format!("line {}: {}", n + 1, e.0))?;
        let id = crate::task::format_call(&head, &args);
        let action = ids.get(id.as_str()).ok_or_else(|| format!("line {}: unknown action `{id}`", n + 1))?;
        plan.push(*action);
    }
    Ok(plan)
}

#[derive(Debug, Clone, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct AnalyzeReport {
    pub domain: String,
    pub problem: String,
    pub advisories: Vec<Advisory>,
    pub validation: PlanValidationReport,
}

pub fn analyze_files(domain: &Path, problem: &Path, plan: Option<&Path>) -> CliResult<AnalyzeReport> {
    let (_, _, dom, prob) = load(domain, problem)?;
    let actions = pddl::ground(&dom, &prob);
    let plan_text = plan.map(read).transpose()?.unwrap_or_default();
    let steps = parse_plan(&plan_text, &actions)
        .map_err(|e| CliError(format!("{}: {e}", plan.unwrap_or(Path::new("plan")).display())))?;
    let init = prob.initial_state();
    let analysis = advisor::analyze_initial(&actions, &init, &prob.goal, &steps);
    Ok(AnalyzeReport {
        domain: dom.name,
        problem: prob.name,
        advisories: analysis.advisories,
        validation: analysis.validation,
    })
}

fn severity_tag(s: Severity) -> &'static str {
    match s {
        Severity::Alert => "ALERT",
        Severity::Suggestion => "SUGGESTION",
        Severity::Info => "INFO",
    }
}

fn write_advisories(out: &mut String, advisories: &[Advisory], indent: &str) {
    for a in advisories {
        let _ = writeln!(out, "{indent}[{}] {}: {}", severity_tag(a.severity), kind_name(a), a.message);
    }
}

fn kind_name(a: &Advisory) -> String {
    serde_json::to_value(a.kind).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn render_analyze(r: &AnalyzeReport) -> String {
    let mut out = format!("problem {} (domain {})\n", r.problem, r.domain);
    if !r.validation.steps.is_empty() {
        out.push_str("plan:\n");
        for s in &r.validation.steps {
            let verdict = match s.verdict {
                StepVerdict::Ok => "ok",
                StepVerdict::Invalid => "invalid",
                StepVerdict::NotEvaluated => "not evaluated",
            };
            let _ = writeln!(out, "  {:>2}. {} [{verdict}]", s.index + 1, s.action);
        }
    }
    out.push_str("advisories:\n");
    write_advisories(&mut out, &r.advisories, "  ");
    out
}

#[derive(Debug, Clone, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct LandmarkEntry {
    pub index: usize,
    pub disjuncts: Vec<Atom>,
    pub origin: LandmarkOrigin,
    pub verified: bool,
    pub level: Option<usize>,
    pub status: Status,
}

#[derive(Debug, Clone, Serialize, Deserialize, schemars::JsonSchema)]
#[serde(rename_all = "camelCase")]
pub struct LandmarksReport {
    pub domain: String,
    pub problem: String,
    pub landmarks: Vec<LandmarkEntry>,
    pub orders: Vec<LandmarkOrdering>,
    pub unreachable_goals: Vec<Atom>,
    pub partial: bool,
}

pub fn landmarks_files(domain: &Path, problem: &Path) -> CliResult<LandmarksReport> {
    let (_, _, dom, prob) = load(domain, problem)?;
    let actions = pddl::ground(&dom, &prob);
    let init = prob.initial_state();
    let analysis = advisor::analyze_initial(&actions, &init, &prob.goal, &[]);
    let graph = analysis.landmarks;
    let landmarks = graph
        .nodes
        .iter()
        .zip(&analysis.statuses)
        .enumerate()
        .map(|(index, (lm, st))| LandmarkEntry {
            index,
            disjuncts: lm.disjuncts.iter().cloned().collect(),
            origin: lm.origin,
            verified: lm.verified,
            level: graph.levels[index],
            status: st.status,
        })
        .collect();
    Ok(LandmarksReport {
        domain: dom.name,
        problem: prob.name,
        landmarks,
        orders: graph.orders,
        unreachable_goals: graph.unreachable_goals,
        partial: graph.partial,
    })
}

fn render_landmarks(r: &LandmarksReport) -> String {
    let mut out = format!("problem {} (domain {})\nlandmarks:\n", r.problem, r.domain);
    for lm in &r.landmarks {
        let label = lm.disjuncts.iter().map(ToString::to_string).collect::<Vec<_>>().join(" | ");
        let level = lm.level.map_or("inf".to_string(), |l| l.to_string());
        let status = serde_json::to_value(lm.status).unwrap();
        let origin = serde_json::to_value(lm.origin).unwrap();
        let _ = writeln!(
            out,
            "  {:>2}. {label}  level {level}  {}  {}",
            lm.index,
            origin.as_str().unwrap(),
            status.as_str().unwrap()
        );
    }
    out.push_str("orderings:\n");
    for o in &r.orders {
        let kind = serde_json::to_value(o.kind).unwrap();
        let _ = writeln!(out, "  {} -> {} ({})", o.from, o.to, kind.as_str().unwrap());
    }
    out
}

pub fn replay_files(scenario: &Path, domain: &Path, problem: &Path) -> CliResult<Transcript> {
    let (dtext, ptext, _, _) = load(domain, problem)?;
    let events =
        session::parse_events(&read(scenario)?).map_err(|e| CliError(format!("{}: {e}", scenario.display())))?;
    let mut session = Session::create_with_id("replay", &dtext, &ptext, SessionConfig::default())
        .map_err(|e| CliError(e.to_string()))?;
    Ok(session::replay(&mut session, &events))
}

fn render_transcript(t: &Transcript) -> String {
    let mut out = String::from("initial advisories:\n");
    write_advisories(&mut out, &t.initial_advisories, "  ");
    for e in &t.entries {
        let command = serde_json::to_string(&e.command).unwrap();
        let _ = writeln!(out, "event {} at {} ms: {}", e.index + 1, e.at_millis, e.note);
        let _ = writeln!(out, "  command {command}");
        match &e.outcome {
            TranscriptOutcome::Accepted { response } => {
                let _ = writeln!(out, "  accepted, revision {}", response.revision);
                write_advisories(&mut out, &response.advisories, "    ");
            }
            TranscriptOutcome::Rejected { code, message, .. } => {
                let _ = writeln!(out, "  rejected {code}: {message}");
            }
        }
    }
    let _ = writeln!(out, "final revision {}, goals satisfied: {}", t.final_revision, t.goal_satisfied);
    out
}

fn serve(port: u16, data_dir: PathBuf, policy: DispatchPolicy) -> CliResult<()> {
    let _ = tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .try_init();
    let defaults = SessionConfig { dispatch_policy: policy, ..SessionConfig::default() };
    let store =
        SessionStore::open(data_dir.clone(), defaults).map_err(|e| CliError(format!("{}: {e}", data_dir.display())))?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError(e.to_string()))?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(("127.0.0.1", port))
            .await
            .map_err(|e| CliError(format!("cannot bind port {port}: {e}")))?;
        tracing::info!(port, sessions = store.len(), data_dir = %data_dir.display(), "serving");
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        service::serve(listener, Arc::new(store), shutdown).await.map_err(|e| CliError(e.to_string()))
    })
}
