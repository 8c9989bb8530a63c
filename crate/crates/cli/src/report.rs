//! Report trees and their two renderings.

use std::fmt::{Display, Write};

use quasiline::rng::GENERATOR_NAME;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Node {
    Value(String),
    List(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl Node {
    pub fn value(v: impl Display) -> Node {
        Node::Value(v.to_string())
    }

    pub fn values<T: Display>(items: impl IntoIterator<Item = T>) -> Node {
        Node::List(items.into_iter().map(Node::value).collect())
    }

    fn is_scalar(&self) -> bool {
        matches!(self, Node::Value(_))
    }

    fn is_flat_list(&self) -> bool {
        matches!(self, Node::List(items) if items.iter().all(Node::is_scalar))
    }

    fn inline(&self) -> String {
        match self {
            Node::Value(v) => v.clone(),
            Node::List(items) => {
                let parts: Vec<String> = items.iter().map(Node::inline).collect();
                format!("[{}]", parts.join(", "))
            }
            Node::Map(entries) if entries.is_empty() => "{}".into(),
            Node::Map(_) => unreachable!("maps are rendered as blocks"),
        }
    }
}

/// Ordered key/value pairs; insertion order is output order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Fields(Vec<(String, Node)>);

impl Fields {
    pub fn new() -> Self {
        Fields(Vec::new())
    }

    pub fn put(&mut self, key: &str, v: impl Display) -> &mut Self {
        self.0.push((key.into(), Node::value(v)));
        self
    }

    pub fn node(&mut self, key: &str, n: Node) -> &mut Self {
        self.0.push((key.into(), n));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, n)| n)
    }

    pub fn into_node(self) -> Node {
        Node::Map(self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub body: Fields,
}

impl Report {
    pub fn new(command: &str, seed: u64) -> Self {
        Report { command: command.into(), seed, body: Fields::new() }
    }

    pub fn get(&self, key: &str) -> Option<&Node> {
        self.body.get(key)
    }

    /// The scalar stored at `key`, if there is one.
    pub fn scalar(&self, key: &str) -> Option<&str> {
        match self.get(key) {
            Some(Node::Value(v)) => Some(v),
            _ => None,
        }
    }

    fn header(&self) -> Vec<(String, Node)> {
        vec![
            ("command".into(), Node::value(&self.command)),
            ("seed".into(), Node::value(self.seed)),
            ("generator".into(), Node::value(GENERATOR_NAME)),
        ]
    }

    /// `key: value` lines with two-space indented blocks and `- ` list items.
    pub fn structured(&self) -> String {
        let mut out = String::new();
        let mut all = self.header();
        all.extend(self.body.0.iter().cloned());
        write_entries(&mut out, &all, 0);
        out
    }

    pub fn human(&self) -> String {
        let mut out = format!("{} (seed {}, {})\n", self.command, self.seed, GENERATOR_NAME);
        write_human(&mut out, &self.body.0, 1);
        out
    }
}

fn pad(depth: usize) -> String {
    "  ".repeat(depth)
}

fn write_entries(out: &mut String, entries: &[(String, Node)], depth: usize) {
    for (k, v) in entries {
        write_entry(out, &format!("{}{k}:", pad(depth)), v, depth);
    }
}

/// Writes `lead` followed by `v`, where `lead` already carries indentation.
fn write_entry(out: &mut String, lead: &str, v: &Node, depth: usize) {
    match v {
        Node::Value(_) => writeln!(out, "{lead} {}", v.inline()).unwrap(),
        Node::List(items) if items.is_empty() || v.is_flat_list() => writeln!(out, "{lead} {}", v.inline()).unwrap(),
        Node::Map(entries) if entries.is_empty() => writeln!(out, "{lead} {{}}").unwrap(),
        Node::List(items) => {
            writeln!(out, "{lead}").unwrap();
            for item in items {
                write_item(out, item, depth + 1);
            }
        }
        Node::Map(entries) => {
            writeln!(out, "{lead}").unwrap();
            write_entries(out, entries, depth + 1);
        }
    }
}

fn write_item(out: &mut String, item: &Node, depth: usize) {
    match item {
        Node::Map(entries) if !entries.is_empty() => {
            let (k0, v0) = &entries[0];
            write_entry(out, &format!("{}- {k0}:", pad(depth)), v0, depth + 1);
            write_entries(out, &entries[1..], depth + 1);
        }
        Node::List(items) if !item.is_flat_list() => {
            writeln!(out, "{}-", pad(depth)).unwrap();
            for i in items {
                write_item(out, i, depth + 1);
            }
        }
        _ => writeln!(out, "{}- {}", pad(depth), item.inline()).unwrap(),
    }
}

fn write_human(out: &mut String, entries: &[(String, Node)], depth: usize) {
    for (k, v) in entries {
        let label = k.replace('-', " ");
        match v {
            Node::Value(_) => writeln!(out, "{}{label}: {}", pad(depth), v.inline()).unwrap(),
            Node::List(items) if items.is_empty() => writeln!(out, "{}{label}: none", pad(depth)).unwrap(),
            _ if v.is_flat_list() => writeln!(out, "{}{label}: {}", pad(depth), v.inline()).unwrap(),
            Node::List(items) => {
                writeln!(out, "{}{label} ({}):", pad(depth), items.len()).unwrap();
                for (i, item) in items.iter().enumerate() {
                    match item {
                        Node::Map(e) => {
                            writeln!(out, "{}#{}", pad(depth + 1), i + 1).unwrap();
                            write_human(out, e, depth + 2);
                        }
                        _ => writeln!(out, "{}{}", pad(depth + 1), item.inline()).unwrap(),
                    }
                }
            }
            Node::Map(e) => {
                writeln!(out, "{}{label}:", pad(depth)).unwrap();
                write_human(out, e, depth + 1);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new("demo", 7);
        r.body.put("h0", 1).node("point", Node::values([0, 0])).node("empty", Node::List(vec![]));
        let mut cone = Fields::new();
        cone.put("index", 0).node("rays", Node::values([0, 1]));
        r.body.node("cones", Node::List(vec![cone.into_node()]));
        r.body.node("rows", Node::List(vec![Node::values([1, 2]), Node::values([3])]));
        r
    }

    #[test]
    fn structured_layout() {
        let expected = "\
command: demo
seed: 7
generator: ChaCha8Rng
h0: 1
point: [0, 0]
empty: []
cones:
  - index: 0
    rays: [0, 1]
rows:
  - [1, 2]
  - [3]
";
        assert_eq!(sample().structured(), expected);
    }

    #[test]
    fn human_layout_has_header() {
        let h = sample().human();
        assert!(h.starts_with("demo (seed 7, ChaCha8Rng)\n"));
        assert!(h.contains("  cones (1):\n    #1\n      index: 0\n"));
        assert!(h.contains("  empty: none\n"));
    }

    #[test]
    fn nested_maps_indent() {
        let mut r = Report::new("x", 0);
        let mut inner = Fields::new();
        inner.put("a", 1);
        let mut outer = Fields::new();
        outer.node("inner", inner.into_node());
        r.body.node("outer", outer.into_node());
        assert!(r.structured().ends_with("outer:\n  inner:\n    a: 1\n"));
        assert_eq!(r.scalar("outer"), None);
    }
}
