use serde::Serialize;
use serde_json::Value;

use crate::args::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// A rectangular view of a report, shared by the CSV and text renderings.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Everything a subcommand produces before rendering.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub config: Value,
    /// Plain description of the computed quantity.
    pub quantity: &'static str,
    pub summary: Vec<(&'static str, Value)>,
    pub report: Value,
    pub table: Table,
    /// Set when a checked invariant failed; the report is still emitted.
    pub violation: Option<String>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    command: &'a str,
    config: &'a Value,
    quantity: &'a str,
    summary: serde_json::Map<String, Value>,
    report: &'a Value,
}

pub fn render(format: Format, command: &str, out: &Outcome) -> String {
    match format {
        Format::Json => {
            let summary = out
                .summary
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect();
            let env = Envelope {
                schema: SCHEMA_VERSION,
                command,
                config: &out.config,
                quantity: out.quantity,
                summary,
                report: &out.report,
            };
            let mut s = serde_json::to_string_pretty(&env).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => header_comments(command, out) + &csv_body(&out.table),
        Format::Text => header_comments(command, out) + &text_body(&out.table),
    }
}

fn header_comments(command: &str, out: &Outcome) -> String {
    let mut s = format!(
        "# schema: {SCHEMA_VERSION}\n# command: {command}\n# config: {}\n# quantity: {}\n",
        serde_json::to_string(&out.config).expect("config serializes"),
        out.quantity
    );
    for (k, v) in &out.summary {
        match v {
            Value::String(text) => s.push_str(&format!("# {k}: {text}\n")),
            other => s.push_str(&format!("# {k}: {other}\n")),
        }
    }
    s
}

fn csv_body(table: &Table) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header).expect("in-memory write");
    for row in &table.rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn text_body(table: &Table) -> String {
    let mut widths: Vec<usize> = table.header.iter().map(|h| h.len()).collect();
    for row in &table.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut s = line(table.header.clone());
    for row in &table.rows {
        s.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn outcome() -> Outcome {
        Outcome {
            config: serde_json::json!({"p": 3}),
            quantity: "q",
            summary: vec![("verdict", "inconclusive".into()), ("from", Value::Null)],
            report: serde_json::json!([1, 2]),
            table: Table {
                header: vec!["s", "value"],
                rows: vec![
                    vec!["1".into(), "10".into()],
                    vec!["2".into(), "a,b".into()],
                ],
            },
            violation: None,
        }
    }

    #[test]
    fn csv_quotes_and_header() {
        let s = render(Format::Csv, "tower", &outcome());
        assert!(s.starts_with("# schema: 1\n# command: tower\n# config: {\"p\":3}\n"));
        assert!(s.contains("# verdict: inconclusive\n# from: null\n"));
        assert!(s.ends_with("s,value\n1,10\n2,\"a,b\"\n"));
    }

    #[test]
    fn text_is_aligned() {
        let s = render(Format::Text, "tower", &outcome());
        assert!(s.ends_with("s  value\n1     10\n2    a,b\n"));
    }

    #[test]
    fn json_envelope_order() {
        let s = render(Format::Json, "tower", &outcome());
        let keys: Vec<_> = [
            "schema", "command", "config", "quantity", "summary", "report",
        ]
        .iter()
        .map(|k| s.find(&format!("\"{k}\"")).unwrap())
        .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }
}
