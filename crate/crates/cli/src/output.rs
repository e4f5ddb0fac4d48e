//! Table rendering.  CSV and JSON carry the same header and the same values;
//! floats are written as shortest round-trip decimals in both.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::config::Config;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Flag(bool),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:?}"),
            Cell::Flag(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    /// Non-finite numbers have no JSON representation and become `null`.
    fn json(&self) -> Value {
        match self {
            Cell::Num(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Flag(b) => Value::Bool(*b),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| *c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[j] {
                    Cell::Num(v) => v,
                    _ => f64::NAN,
                })
                .collect(),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Reproducibility record emitted ahead of every table.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub tool: String,
    pub command: String,
    pub seed: u64,
    pub config: Vec<(String, String, String)>,
}

impl Provenance {
    pub fn new(command: &str, cfg: &Config) -> Self {
        Provenance {
            tool: format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            seed: cfg.int("langevin", "seed") as u64,
            config: cfg
                .entries()
                .into_iter()
                .map(|(s, k, v)| (s.to_string(), k.to_string(), v.to_string()))
                .collect(),
        }
    }
}

pub fn render(table: &Table, prov: &Provenance, format: Format) -> String {
    match format {
        Format::Csv => render_csv(table, prov),
        Format::Json => render_json(table, prov),
    }
}

fn render_csv(table: &Table, prov: &Provenance) -> String {
    let mut out = String::new();
    writeln!(out, "# tool = {}", prov.tool).unwrap();
    writeln!(out, "# command = {}", prov.command).unwrap();
    writeln!(out, "# seed = {}", prov.seed).unwrap();
    for (s, k, v) in &prov.config {
        writeln!(out, "# {s}.{k} = {v}").unwrap();
    }
    writeln!(out, "{}", table.columns.join(",")).unwrap();
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(Cell::csv).collect();
        writeln!(out, "{}", cells.join(",")).unwrap();
    }
    out
}

fn render_json(table: &Table, prov: &Provenance) -> String {
    let config: serde_json::Map<String, Value> = prov
        .config
        .iter()
        .map(|(s, k, v)| (format!("{s}.{k}"), Value::String(v.clone())))
        .collect();
    let rows: Vec<Value> = table.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
    let doc = json!({
        "provenance": { "tool": prov.tool, "command": prov.command, "seed": prov.seed, "config": config },
        "columns": table.columns,
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("table serializes");
    s.push('\n');
    s
}
