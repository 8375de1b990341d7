use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::CliError;
use crate::eval::{evaluate, Value};
use crate::expr::parse;
use crate::report;
use crate::scenario::{builtin_names, Scenario};
use crate::suite::{run_suite, scenario_checks, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "gencyc", version, about = "Diamond and bullet products of generalized cycle classes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the verification suite, or the expectations of one scenario.
    Verify {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, i64)>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Evaluate an expression.
    Eval {
        expr: String,
        #[command(flatten)]
        source: ScenarioArgs,
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        json: bool,
    },
    /// Degree of a class expression.
    Deg {
        expr: String,
        #[command(flatten)]
        source: ScenarioArgs,
        #[arg(long)]
        json: bool,
    },
    /// Per-dimension multiplicities of a class expression at a marked point.
    Mult {
        expr: String,
        #[arg(long)]
        point: String,
        #[command(flatten)]
        source: ScenarioArgs,
        #[arg(long)]
        json: bool,
    },
    /// List the built-in scenarios, or print one as JSON.
    Scenarios { name: Option<String> },
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario JSON file.
    #[arg(long, required_unless_present = "builtin", conflicts_with = "builtin")]
    pub scenario: Option<PathBuf>,
    /// Name of a built-in scenario.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Parameter override, `name=value`.
    #[arg(long = "param", value_parser = parse_param)]
    pub params: Vec<(String, i64)>,
}

fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or("expected name=value")?;
    let v = v.trim().parse().map_err(|_| format!("`{v}` is not an integer"))?;
    Ok((k.trim().to_string(), v))
}

fn load(scenario: Option<&PathBuf>, builtin: Option<&str>, params: &[(String, i64)]) -> Result<Scenario, CliError> {
    let overrides: BTreeMap<String, i64> = params.iter().cloned().collect();
    match (scenario, builtin) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
            Scenario::from_json(&text, &overrides)
        }
        (None, Some(name)) => Scenario::builtin(name, &overrides),
        (None, None) => Err(CliError::Scenario("no scenario given".into())),
    }
}

fn load_args(a: &ScenarioArgs) -> Result<Scenario, CliError> {
    load(a.scenario.as_ref(), a.builtin.as_deref(), &a.params)
}

fn eval_text(text: &str, s: &Scenario) -> Result<(Value, Vec<gencyc_core::TraceEntry>), CliError> {
    let e = parse(text).map_err(|error| CliError::Parse {
        source_text: text.to_string(),
        error,
    })?;
    evaluate(&e, s)
}

fn class_value(text: &str, s: &Scenario) -> Result<gencyc_core::GCycleClass, CliError> {
    match eval_text(text, s)?.0 {
        Value::Class(c) => Ok(c),
        v => Err(CliError::Type(format!("`{text}` is {}, expected a class", v.type_name()))),
    }
}

/// Runs a command, writing to `out`; returns the exit status.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    match cli.command {
        Command::Verify {
            json,
            scenario,
            builtin,
            params,
            seed,
        } => {
            if scenario.is_some() || builtin.is_some() {
                let s = load(scenario.as_ref(), builtin.as_deref(), &params)?;
                let checks = scenario_checks(&s, &s.name);
                let passed = checks.iter().all(|c| c.passed);
                if json {
                    let items: Vec<_> = checks
                        .iter()
                        .map(|c| serde_json::json!({ "check": c.title, "passed": c.passed, "detail": c.detail }))
                        .collect();
                    let doc = serde_json::json!({ "scenario": s.name, "passed": passed, "checks": items });
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json")).map_err(io)?;
                } else {
                    for c in &checks {
                        writeln!(
                            out,
                            "[{}] {}{}",
                            if c.passed { "PASS" } else { "FAIL" },
                            c.title,
                            if c.passed { String::new() } else { format!(": {}", c.detail) }
                        )
                        .map_err(io)?;
                    }
                }
                return Ok(if passed { 0 } else { 1 });
            }
            let r = run_suite(seed);
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r.to_json()).expect("json")).map_err(io)?;
            } else {
                writeln!(out, "{}", r.to_text()).map_err(io)?;
            }
            Ok(if r.passed() { 0 } else { 1 })
        }
        Command::Eval {
            expr,
            source,
            trace,
            json,
        } => {
            let s = load_args(&source)?;
            let (v, t) = eval_text(&expr, &s)?;
            if json {
                let doc = report::eval_json(&s.name, &expr, &v, trace.then_some(t.as_slice()));
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("json")).map_err(io)?;
            } else {
                writeln!(out, "{}", report::value_text(&v)).map_err(io)?;
                if trace && !t.is_empty() {
                    writeln!(out, "derivation:\n{}", report::trace_text(&t)).map_err(io)?;
                }
            }
            Ok(0)
        }
        Command::Deg { expr, source, json } => {
            let s = load_args(&source)?;
            let d = class_value(&expr, &s)?.deg_l();
            if json {
                writeln!(out, "{}", serde_json::json!({ "expr": expr, "degree": d.to_string() })).map_err(io)?;
            } else {
                writeln!(out, "{d}").map_err(io)?;
            }
            Ok(0)
        }
        Command::Mult {
            expr,
            point,
            source,
            json,
        } => {
            let s = load_args(&source)?;
            let m = class_value(&expr, &s)?.mult_at(&point)?;
            if json {
                let doc = serde_json::json!({ "expr": expr, "point": point, "multiplicities": report::multiplicities_json(&m) });
                writeln!(out, "{doc}").map_err(io)?;
            } else {
                let v = Value::Mult { point, values: m };
                writeln!(out, "{v}").map_err(io)?;
            }
            Ok(0)
        }
        Command::Scenarios { name } => {
            match name {
                None => {
                    for n in builtin_names() {
                        writeln!(out, "{n}").map_err(io)?;
                    }
                }
                Some(n) => {
                    let src = crate::scenario::builtin_source(&n)
                        .ok_or_else(|| CliError::Scenario(format!("no built-in scenario `{n}`")))?;
                    write!(out, "{src}").map_err(io)?;
                }
            }
            Ok(0)
        }
    }
}
