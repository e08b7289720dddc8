//! Plain, JSON and XML reports.

use std::fmt::Write;

use serde_json::{json, Value as Json};

use crate::eval::Value;
use crate::frontend::types::{CType, SourceLocation};
use crate::instrument::PropertyListing;

use super::render::{binary_text, decimal_text, render_value, short_value};
use super::trace::{Trace, TraceStepKind};
use super::{property_function, PropertyResult, VerificationResult};

pub const SEPARATOR: &str = "----------------------------------------------------";

fn location_words(loc: &SourceLocation) -> String {
    let mut s = format!("file {} line {}", loc.file, loc.line);
    if let Some(f) = &loc.function {
        let _ = write!(s, " function {f}");
    }
    s
}

fn values_text(values: &[(Value, CType)]) -> String {
    values
        .iter()
        .map(|(v, t)| render_value(v, t))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn trace_text(trace: &Trace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Trace for {}:", trace.property.id);
    for step in &trace.steps {
        out.push('\n');
        match &step.loc {
            Some(loc) => {
                let _ = writeln!(out, "State {} {} thread 0", step.state, location_words(loc));
            }
            None => {
                let _ = writeln!(out, "State {} thread 0", step.state);
            }
        }
        let _ = writeln!(out, "{SEPARATOR}");
        match &step.kind {
            TraceStepKind::Input { name, values } => {
                let _ = writeln!(out, "  INPUT {name}: {}", values_text(values));
            }
            TraceStepKind::Output { name, values } => {
                let _ = writeln!(out, "  OUTPUT {name}: {}", values_text(values));
            }
            TraceStepKind::Assignment { lhs, value, ty } => {
                let _ = writeln!(out, "  {lhs}={}", render_value(value, ty));
            }
        }
    }
    out.push_str("\nViolated property:\n");
    if let Some(loc) = trace.loc.as_ref().or(trace.property.loc.as_ref()) {
        let _ = writeln!(out, "  {}", location_words(loc));
    }
    let _ = writeln!(out, "  {}", trace.property.description);
    let _ = writeln!(out, "  {}", trace.property.condition);
    out
}

fn property_line(r: &PropertyResult) -> String {
    let p = &r.property;
    match &p.loc {
        Some(loc) => format!("[{}] line {} {}: {}", p.id, loc.line, p.description, r.status.text()),
        None => format!("[{}] {}: {}", p.id, p.description, r.status.text()),
    }
}

pub fn verdict(successful: bool) -> &'static str {
    if successful {
        "VERIFICATION SUCCESSFUL"
    } else {
        "VERIFICATION FAILED"
    }
}

/// The `** Results:` block, optional traces, summary and verdict.
pub fn plain(result: &VerificationResult, traces: bool) -> String {
    let mut out = String::new();
    if !result.results.is_empty() {
        out.push_str("\n** Results:\n");
        let mut group: Option<(String, String)> = None;
        for r in &result.results {
            let file = r
                .property
                .loc
                .as_ref()
                .map_or("<unknown>".to_string(), |l| l.file.to_string());
            let function = property_function(&r.property.id).to_string();
            let key = (file, function);
            if group.as_ref() != Some(&key) {
                let _ = writeln!(out, "{} function {}", key.0, key.1);
                group = Some(key);
            }
            let _ = writeln!(out, "{}", property_line(r));
        }
        if traces {
            for r in &result.results {
                if let Some(t) = &r.trace {
                    out.push('\n');
                    out.push_str(&trace_text(t));
                }
            }
        }
        let _ = writeln!(
            out,
            "\n** {} of {} failed ({} iterations)",
            result.failed(),
            result.total(),
            result.iterations
        );
    }
    let _ = writeln!(out, "{}", verdict(result.successful()));
    out
}

fn location_json(loc: &Option<std::sync::Arc<SourceLocation>>) -> Json {
    match loc {
        Some(l) => json!({
            "file": l.file.as_ref(),
            "line": l.line,
            "function": l.function.as_deref(),
        }),
        None => Json::Null,
    }
}

fn value_json(v: &Value, ty: &CType) -> Json {
    match (v, ty.width()) {
        (Value::Scalar(x), Some(w)) => json!({
            "data": decimal_text(*x, ty),
            "binary": binary_text(*x, w),
            "type": ty.c_name(),
        }),
        _ => json!({ "data": short_value(v, ty), "type": ty.c_name() }),
    }
}

pub fn trace_json(trace: &Trace) -> Json {
    let mut steps: Vec<Json> = trace
        .steps
        .iter()
        .map(|s| {
            let mut obj = match &s.kind {
                TraceStepKind::Input { name, values } | TraceStepKind::Output { name, values } => {
                    let kind = if matches!(s.kind, TraceStepKind::Input { .. }) {
                        "input"
                    } else {
                        "output"
                    };
                    json!({
                        "stepType": kind,
                        "name": name,
                        "values": values.iter().map(|(v, t)| value_json(v, t)).collect::<Vec<_>>(),
                    })
                }
                TraceStepKind::Assignment { lhs, value, ty } => json!({
                    "stepType": "assignment",
                    "lhs": lhs,
                    "value": value_json(value, ty),
                }),
            };
            obj["state"] = json!(s.state);
            obj["sourceLocation"] = location_json(&s.loc);
            obj
        })
        .collect();
    steps.push(json!({
        "stepType": "failure",
        "property": trace.property.id,
        "reason": trace.property.description,
        "condition": trace.property.condition.to_string(),
        "sourceLocation": location_json(&trace.loc),
    }));
    Json::Array(steps)
}

pub fn json(result: &VerificationResult) -> Json {
    let props: Vec<Json> = result
        .results
        .iter()
        .map(|r| {
            let mut obj = json!({
                "property": r.property.id,
                "class": r.property.class.name(),
                "description": r.property.description,
                "status": r.status.text(),
                "sourceLocation": location_json(&r.property.loc),
            });
            if let Some(t) = &r.trace {
                obj["trace"] = trace_json(t);
            }
            obj
        })
        .collect();
    json!({
        "result": props,
        "summary": {
            "failed": result.failed(),
            "total": result.total(),
            "iterations": result.iterations,
        },
        "cProverStatus": if result.successful() { "success" } else { "failure" },
    })
}

pub fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '&' => out.push_str("&amp;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn location_xml(loc: &Option<std::sync::Arc<SourceLocation>>) -> String {
    match loc {
        Some(l) => format!(
            "<location file=\"{}\" line=\"{}\" function=\"{}\"/>",
            xml_escape(&l.file),
            l.line,
            xml_escape(l.function.as_deref().unwrap_or(""))
        ),
        None => String::new(),
    }
}

fn value_xml(v: &Value, ty: &CType) -> String {
    match (v, ty.width()) {
        (Value::Scalar(x), Some(w)) => format!(
            "<value binary=\"{}\">{}</value>",
            binary_text(*x, w),
            xml_escape(&decimal_text(*x, ty))
        ),
        _ => format!("<value>{}</value>", xml_escape(&short_value(v, ty))),
    }
}

pub fn trace_xml(trace: &Trace) -> String {
    let mut out = String::from("<goto_trace>\n");
    for s in &trace.steps {
        let loc = location_xml(&s.loc);
        match &s.kind {
            TraceStepKind::Input { name, values } | TraceStepKind::Output { name, values } => {
                let tag = if matches!(s.kind, TraceStepKind::Input { .. }) {
                    "input"
                } else {
                    "output"
                };
                let vals: String = values.iter().map(|(v, t)| value_xml(v, t)).collect();
                let _ = writeln!(
                    out,
                    "<{tag} state=\"{}\" name=\"{}\">{loc}{vals}</{tag}>",
                    s.state,
                    xml_escape(name)
                );
            }
            TraceStepKind::Assignment { lhs, value, ty } => {
                let _ = writeln!(
                    out,
                    "<assignment state=\"{}\" lhs=\"{}\">{loc}{}</assignment>",
                    s.state,
                    xml_escape(lhs),
                    value_xml(value, ty)
                );
            }
        }
    }
    let _ = writeln!(
        out,
        "<failure property=\"{}\" reason=\"{}\">{}<condition>{}</condition></failure>",
        xml_escape(&trace.property.id),
        xml_escape(&trace.property.description),
        location_xml(&trace.loc),
        xml_escape(&trace.property.condition.to_string())
    );
    out.push_str("</goto_trace>\n");
    out
}

pub fn xml(result: &VerificationResult) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<cprover>\n");
    for r in &result.results {
        let _ = writeln!(
            out,
            "<result property=\"{}\" class=\"{}\" status=\"{}\">",
            xml_escape(&r.property.id),
            r.property.class.name(),
            r.status.text()
        );
        let _ = writeln!(
            out,
            "<description>{}</description>",
            xml_escape(&r.property.description)
        );
        let loc = location_xml(&r.property.loc);
        if !loc.is_empty() {
            let _ = writeln!(out, "{loc}");
        }
        if let Some(t) = &r.trace {
            out.push_str(&trace_xml(t));
        }
        out.push_str("</result>\n");
    }
    let _ = writeln!(
        out,
        "<summary failed=\"{}\" total=\"{}\" iterations=\"{}\"/>",
        result.failed(),
        result.total(),
        result.iterations
    );
    let _ = writeln!(
        out,
        "<cprover-status>{}</cprover-status>",
        if result.successful() { "SUCCESS" } else { "FAILURE" }
    );
    out.push_str("</cprover>\n");
    out
}

/// The `--show-properties` listing.
pub fn show_properties(props: &[PropertyListing]) -> String {
    let mut out = String::new();
    for p in props {
        let _ = writeln!(out, "Property {}:", p.id);
        match &p.loc {
            Some(loc) => {
                let mut words = location_words(loc);
                if loc.function.is_none() {
                    let _ = write!(words, " function {}", p.function);
                }
                let _ = writeln!(out, "  {words}");
            }
            None => {
                let _ = writeln!(out, "  function {}", p.function);
            }
        }
        let _ = writeln!(out, "  {}", p.description);
        let _ = writeln!(out, "  {}\n", p.condition);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn escapes() {
        assert_eq!(xml_escape("a<b & `c'"), "a&lt;b &amp; `c&apos;");
    }
}
