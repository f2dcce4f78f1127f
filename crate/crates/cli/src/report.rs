//! Rendering of command results: session-style text and a JSON envelope.

use serde_json::{json, Value};

/// One entry of a text report. Top-level items are numbered `[k]:`.
#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Text(String),
    /// Several lines printed under one number (`_[1]=...`, `_[1,2]=...`).
    Lines(Vec<String>),
    /// A nested numbered list.
    List(Vec<Item>),
}

impl Item {
    pub fn text(s: impl Into<String>) -> Item {
        Item::Text(s.into())
    }

    pub fn lines(v: Vec<String>) -> Item {
        Item::Lines(v)
    }

    pub fn list(v: Vec<Item>) -> Item {
        Item::List(v)
    }
}

#[derive(Clone, Debug)]
pub struct CommandReport {
    /// Canonical echo of the statement, without the trailing `;`.
    pub command: String,
    pub kind: String,
    pub ring: String,
    pub params: Vec<String>,
    pub vars: Vec<String>,
    pub ordering: String,
    pub items: Vec<Item>,
    pub result: Value,
    /// Wall time; rendered only on request since it breaks byte determinism.
    pub elapsed_ms: u128,
}

pub const ENGINE: &str = "parametra";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn write_items(out: &mut String, items: &[Item], indent: usize) {
    let pad = " ".repeat(indent);
    for (k, item) in items.iter().enumerate() {
        out.push_str(&format!("{pad}[{}]:\n", k + 1));
        match item {
            Item::Text(t) => out.push_str(&format!("{pad}   {t}\n")),
            Item::Lines(ls) => {
                for l in ls {
                    out.push_str(&format!("{pad}   {l}\n"));
                }
            }
            Item::List(sub) => write_items(out, sub, indent + 3),
        }
    }
}

/// Session-style text: each command is echoed as `> cmd;` and followed by its items.
pub fn render_text(reports: &[CommandReport], timing: bool) -> String {
    let mut out = String::new();
    for (i, r) in reports.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("> {};\n", r.command));
        write_items(&mut out, &r.items, 0);
        if timing {
            out.push_str(&format!("// {} ms\n", r.elapsed_ms));
        }
    }
    out
}

pub fn render_json(reports: &[CommandReport], timing: bool) -> Value {
    let commands: Vec<Value> = reports
        .iter()
        .map(|r| {
            let mut v = json!({
                "command": r.command,
                "kind": r.kind,
                "ring": { "name": r.ring, "parameters": r.params, "variables": r.vars },
                "ordering": r.ordering,
                "result": r.result,
            });
            if timing {
                v["timing_ms"] = json!(r.elapsed_ms as u64);
            }
            v
        })
        .collect();
    json!({ "engine": ENGINE, "version": VERSION, "commands": commands })
}

/// JSON error object for failed runs; completed commands are kept.
pub fn render_json_error(reports: &[CommandReport], kind: &str, message: &str) -> Value {
    let mut v = render_json(reports, false);
    v["error"] = json!({ "kind": kind, "message": message });
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_numbering() {
        let r = CommandReport {
            command: "genericity M".into(),
            kind: "genericity".into(),
            ring: "r".into(),
            params: vec![],
            vars: vec!["d".into()],
            ordering: "(c,dp)".into(),
            items: vec![Item::text("a"), Item::list(vec![Item::text("g"), Item::text("l1-l2")])],
            result: Value::Null,
            elapsed_ms: 0,
        };
        let t = render_text(&[r], false);
        assert_eq!(t, "> genericity M;\n[1]:\n   a\n[2]:\n   [1]:\n      g\n   [2]:\n      l1-l2\n");
    }
}
