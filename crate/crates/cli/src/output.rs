use std::io::{self, Write};

use serde_json::{json, Map, Value};

use crate::args::Format;

/// One cell of an output table.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(usize),
    Text(String),
    Empty,
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
            Cell::Empty => Value::Null,
        }
    }
}

/// Fixed-point rendering shared by every format.
pub fn float_cell(x: f64) -> Cell {
    if x.is_finite() {
        Cell::Text(format!("{x:.12}"))
    } else {
        Cell::Empty
    }
}

pub struct Table {
    /// `(key, value)` pairs describing the whole run.
    pub meta: Vec<(&'static str, Value)>,
    pub columns: Vec<&'static str>,
    /// Columns shown in the human-readable table; the rest repeat `meta`.
    pub table_columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Table => self.write_table(out),
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_table(&self, out: &mut impl Write) -> io::Result<()> {
        let meta: Vec<String> = self
            .meta
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}={s}"),
                other => format!("{k}={other}"),
            })
            .collect();
        writeln!(out, "# {}", meta.join(" "))?;
        let picks: Vec<usize> = self
            .table_columns
            .iter()
            .map(|c| {
                self.columns
                    .iter()
                    .position(|k| k == c)
                    .expect("table column exists")
            })
            .collect();
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| picks.iter().map(|&i| r[i].text()).collect())
            .collect();
        let widths: Vec<usize> = picks
            .iter()
            .enumerate()
            .map(|(n, &i)| {
                cells
                    .iter()
                    .map(|r| r[n].len())
                    .chain([self.columns[i].len()])
                    .max()
                    .unwrap()
            })
            .collect();
        let line = |fields: Vec<String>| {
            let padded: Vec<String> = fields
                .iter()
                .zip(&widths)
                .map(|(f, w)| format!("{f:>w$}"))
                .collect();
            padded.join("  ")
        };
        writeln!(
            out,
            "{}",
            line(picks.iter().map(|&i| self.columns[i].to_string()).collect())
        )?;
        for r in cells {
            writeln!(out, "{}", line(r))?;
        }
        Ok(())
    }

    fn write_csv(&self, out: &mut impl Write) -> io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r.iter().map(Cell::text))?;
        }
        w.flush()
    }

    fn write_json(&self, out: &mut impl Write) -> io::Result<()> {
        let meta: Map<String, Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(k, c)| (k.to_string(), c.json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let doc = json!({ "meta": meta, "rows": rows });
        serde_json::to_writer_pretty(&mut *out, &doc)?;
        writeln!(out)
    }
}
