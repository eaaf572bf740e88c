//! Document parser and batch runner for the `rankp` command.

pub mod ast;
pub mod commands;
pub mod eval;
pub mod lexer;
pub mod parser;

use rankp_core::degeneration::ExtensionPolicy;
use rankp_core::fp::Window;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use ast::{Document, Expr, Mode, Pos};
use commands::Outcome;

pub use parser::parse_document;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorClass {
    Syntax,
    Type,
}

#[derive(Clone, Debug, Error)]
#[error("{} error at {pos}: {message}", match .class { ErrorClass::Syntax => "syntax", ErrorClass::Type => "type" })]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
    pub class: ErrorClass,
}

impl SyntaxError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError { pos, message: message.into(), class: ErrorClass::Syntax }
    }

    pub fn typed(pos: Pos, message: impl Into<String>) -> Self {
        SyntaxError { pos, message: message.into(), class: ErrorClass::Type }
    }
}

/// A single expression (used to reparse rendered output).
pub fn parse_expression(text: &str, mode: Mode) -> Result<Expr, SyntaxError> {
    let doc = parse_document(&format!("mode {} p=2\n__e = {text}\n", mode.name()))?;
    match doc.statements.into_iter().next() {
        Some(ast::Statement::Binding(b)) => Ok(b.value),
        _ => Err(SyntaxError::new(Pos::default(), "expected an expression")),
    }
}

/// Problems that stop a run before any directive executes (exit code 2).
#[derive(Debug, Error)]
pub enum SetupError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("configuration error: {0}")]
    Config(rankp_core::Error),
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub prec: Option<i64>,
    pub window: Option<Window>,
    pub extend: ExtensionPolicy,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options { prec: None, window: None, extend: ExtensionPolicy::Off, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct ErrorInfo {
    pub kind: &'static str,
    pub message: String,
    pub details: Value,
}

impl From<&rankp_core::Error> for ErrorInfo {
    fn from(e: &rankp_core::Error) -> Self {
        use rankp_core::Error as E;
        let details = match e {
            E::ExtensionRequired { c } => serde_json::json!({ "c": c }),
            E::MissingTorsorAtNode { node } => serde_json::json!({ "node": node }),
            E::BadN { n, v_lambda } => serde_json::json!({ "n": n, "v_lambda": v_lambda }),
            E::NeedsRamifiedExtension { v_lambda } => serde_json::json!({ "v_lambda": v_lambda }),
            E::RamifiedInputContent { content } => serde_json::json!({ "content": content }),
            _ => serde_json::json!({}),
        };
        ErrorInfo { kind: e.kind_name(), message: e.to_string(), details }
    }
}

/// One line of the output stream.
#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub index: usize,
    pub line: usize,
    pub command: &'static str,
    pub input: String,
    pub status: Status,
    pub result: Option<Value>,
    pub error: Option<ErrorInfo>,
}

/// Runs every directive (concurrently) and returns the records in order.
pub fn run(doc: &Document, opts: &Options) -> Result<Vec<Record>, SetupError> {
    let Some(header) = &doc.header else {
        return Ok(Vec::new());
    };
    let mut header = header.clone();
    if let Some(n) = opts.prec {
        header.n = n;
    }
    if let Some(w) = opts.window {
        header.window = w;
    }
    let ctx = eval::Context::new(&header, doc).map_err(SetupError::Config)?;
    let directives: Vec<_> = doc.directives().collect();
    Ok(directives
        .par_iter()
        .enumerate()
        .map(|(index, d)| {
            let seed = opts.seed.wrapping_add(index as u64);
            let (status, result, error) = match commands::run_command(&d.command, &ctx, opts.extend, seed) {
                Ok(Outcome::Value(v)) => (Status::Ok, Some(v), None),
                Ok(Outcome::Verdict(pass, v)) => (if pass { Status::Ok } else { Status::Fail }, Some(v), None),
                Err(e) => (Status::Error, None, Some(ErrorInfo::from(&e))),
            };
            Record { index, line: d.pos.line, command: d.command.name(), input: d.command.to_string(), status, result, error }
        })
        .collect())
}

/// 0 when every directive succeeded and every verdict passed, 1 otherwise.
pub fn exit_code(records: &[Record]) -> i32 {
    if records.iter().all(|r| r.status == Status::Ok) {
        0
    } else {
        1
    }
}

fn summarize(v: &Value) -> String {
    let Value::Object(map) = v else { return v.to_string() };
    let mut parts = Vec::new();
    for (k, x) in map {
        match x {
            Value::Bool(_) | Value::Number(_) => parts.push(format!("{k}={x}")),
            Value::Null => parts.push(format!("{k}=-")),
            Value::String(s) if s.len() <= 40 => parts.push(format!("{k}={s}")),
            Value::String(_) => parts.push(format!("{k}=…")),
            _ => {}
        }
    }
    parts.join(" ")
}

/// Human-readable table.
pub fn render_table(records: &[Record]) -> String {
    let rows: Vec<[String; 5]> = records
        .iter()
        .map(|r| {
            let status = match r.status {
                Status::Ok => "ok",
                Status::Fail => "FAIL",
                Status::Error => "error",
            };
            let summary = match (&r.result, &r.error) {
                (_, Some(e)) => format!("{}: {}", e.kind, e.message),
                (Some(v), None) => summarize(v),
                (None, None) => String::new(),
            };
            [r.index.to_string(), r.line.to_string(), r.command.to_string(), status.to_string(), summary]
        })
        .collect();
    let head = ["#", "line", "command", "status", "result"].map(String::from);
    let mut widths = [0usize; 4];
    for row in std::iter::once(&head).chain(&rows) {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(&head).chain(&rows) {
        for (w, cell) in widths.iter().zip(row) {
            out.push_str(&format!("{cell:<w$}  "));
        }
        out.push_str(&row[4]);
        out.push('\n');
    }
    out
}
