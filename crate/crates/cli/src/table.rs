//! Tabular output with embedded run metadata, as CSV or JSON.
//!
//! CSV dialect: comma separated, `.` decimal, mandatory header row, `nan`
//! literal for sentinels, `#`-prefixed comment lines carrying the resolved
//! configuration. JSON carries the same configuration as an object (NaN
//! cells become null).

use std::io::Write;

/// A float cell rendered shortest-round-trip, NaN as `nan`.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

pub struct Table {
    /// Resolved configuration echoed into every output.
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(command: &str) -> Self {
        Table {
            meta: vec![
                ("tool".into(), format!("fracal {}", env!("CARGO_PKG_VERSION"))),
                ("command".into(), command.into()),
            ],
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        self.meta.push((key.into(), value.to_string()));
        self
    }

    pub fn columns(&mut self, cols: &[&str]) -> &mut Self {
        self.columns = cols.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn row(&mut self, cells: Vec<f64>) -> &mut Self {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
        self
    }

    pub fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        for (k, v) in &self.meta {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn write_json(&self, w: &mut dyn Write) -> std::io::Result<()> {
        let mut config = serde_json::Map::new();
        for (k, v) in &self.meta {
            // keep numbers as numbers so the config object can be fed back
            // through --config verbatim
            let value = match v.parse::<f64>() {
                Ok(x) if x.is_finite() => serde_json::Number::from_f64(x)
                    .map(serde_json::Value::Number)
                    .unwrap_or_else(|| serde_json::Value::String(v.clone())),
                _ => serde_json::Value::String(v.clone()),
            };
            config.insert(k.clone(), value);
        }
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                serde_json::Value::Array(
                    row.iter()
                        .map(|v| {
                            serde_json::Number::from_f64(*v)
                                .map(serde_json::Value::Number)
                                .unwrap_or(serde_json::Value::Null)
                        })
                        .collect(),
                )
            })
            .collect();
        let doc = serde_json::json!({
            "config": serde_json::Value::Object(config),
            "columns": self.columns,
            "rows": rows,
        });
        writeln!(w, "{}", serde_json::to_string_pretty(&doc)?)
    }
}
