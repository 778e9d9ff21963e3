//! Rendering reports as JSON, text or DOT.

use std::fmt::Write;

use anyhow::{bail, Result};
use clap::ValueEnum;
use fotheory::{Generator, Report, TruncatedSymSS};

pub const DOT_LIMIT: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

pub fn emit_report(report: &Report, format: Format) -> Result<()> {
    match format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report_text(report)),
        Format::Dot => bail!("reports have no DOT form; use export-dot"),
    }
    Ok(())
}

pub fn emit_value(value: &serde_json::Value, format: Format) -> Result<()> {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value)?),
        Format::Text => print!("{}", value_text(value, "")),
        Format::Dot => bail!("this command has no DOT form; use export-dot"),
    }
    Ok(())
}

fn report_text(report: &Report) -> String {
    let mut out = String::new();
    let verdict = if report.passed() { "pass" } else { "fail" };
    let _ = writeln!(out, "{}: {verdict}", report.check);
    for (key, value) in &report.stats {
        let _ = writeln!(out, "  {key}: {value}");
    }
    for note in &report.notes {
        let _ = writeln!(out, "  note: {note}");
    }
    for w in &report.witnesses {
        let params: Vec<String> = w.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "  witness {} [{}]", w.condition, params.join(" "));
        for (level, label) in w.levels.iter().zip(&w.elements) {
            let _ = writeln!(out, "    level {level}: {label}");
        }
        for m in &w.maps {
            let _ = writeln!(out, "    {m}");
        }
    }
    out
}

fn value_text(value: &serde_json::Value, indent: &str) -> String {
    let mut out = String::new();
    match value {
        serde_json::Value::Object(map) => {
            for (key, v) in map {
                if v.is_object() || v.as_array().is_some_and(|a| a.iter().any(|x| x.is_object())) {
                    let _ = writeln!(out, "{indent}{key}:");
                    out.push_str(&value_text(v, &format!("{indent}  ")));
                } else {
                    let _ = writeln!(out, "{indent}{key}: {}", scalar(v));
                }
            }
        }
        serde_json::Value::Array(items) => {
            for item in items {
                let _ = writeln!(out, "{indent}-");
                out.push_str(&value_text(item, &format!("{indent}  ")));
            }
        }
        other => {
            let _ = writeln!(out, "{indent}{}", scalar(other));
        }
    }
    out
}

fn scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) => items
            .iter()
            .map(|x| if x.is_array() { format!("({})", scalar(x)) } else { scalar(x) })
            .collect::<Vec<_>>()
            .join(", "),
        other => other.to_string(),
    }
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// The face maps from `level` to `level - 1` as a directed graph.
pub fn dot(t: &TruncatedSymSS, level: usize) -> Result<String> {
    if level < 2 || level > t.max_dim() {
        bail!("--level must lie between 2 and the truncation {}", t.max_dim());
    }
    for n in [level - 1, level] {
        if t.level_size(n) > DOT_LIMIT {
            bail!("level {n} has {} elements; DOT export allows at most {DOT_LIMIT}", t.level_size(n));
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(t.name()));
    let _ = writeln!(out, "  rankdir=LR;");
    for n in [level, level - 1] {
        for x in 0..t.level_size(n) as u32 {
            let _ = writeln!(out, "  \"{n}:{x}\" [label={}];", quote(t.label(n, x)));
        }
    }
    for i in 1..=level {
        let table = t.generator_table(Generator::Forget(i), level);
        for (x, y) in table.iter().enumerate() {
            let _ = writeln!(
                out,
                "  \"{level}:{x}\" -> \"{}:{y}\" [label={}];",
                level - 1,
                quote(&Generator::Forget(i).name())
            );
        }
    }
    out.push('}');
    Ok(out)
}
