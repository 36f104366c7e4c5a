//! Fixed-column records rendered as TSV or JSON.
//!
//! TSV: a header line, one line per row, then free-form summary lines.
//! JSON: one object with the same columns as keys of each row, plus the
//! command echo, inputs, summary, tool version and elapsed time.

use std::time::Instant;

use serde_json::{json, Map, Value};

pub struct Record {
    pub command: &'static str,
    pub inputs: Value,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<String>,
    pub extra: Map<String, Value>,
}

impl Record {
    pub fn new(command: &'static str, inputs: Value, columns: &[&'static str]) -> Self {
        Record { command, inputs, columns: columns.to_vec(), rows: Vec::new(), summary: Vec::new(), extra: Map::new() }
    }

    pub fn row(&mut self, values: Vec<Value>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn render_tsv(&self) -> String {
        let mut out = self.columns.join("\t");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(cell).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        for line in &self.summary {
            out.push_str(line);
            out.push('\n');
        }
        out
    }

    pub fn render_json(&self, started: Instant) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().map(|c| c.to_string()).zip(r.iter().cloned()).collect()))
            .collect();
        let mut obj = json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": rows,
            "summary": self.summary,
        });
        let map = obj.as_object_mut().expect("object literal");
        map.extend(self.extra.clone());
        map.insert("tool_version".into(), json!(modform_core::certify::TOOL_VERSION));
        map.insert("elapsed_ms".into(), json!(started.elapsed().as_millis() as u64));
        let mut s = serde_json::to_string(&obj).expect("json");
        s.push('\n');
        s
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
