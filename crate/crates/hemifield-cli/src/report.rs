//! Tabular command output, rendered as CSV or JSON.
//!
//! Every command produces one [`Table`]: named parameters echoing the
//! invocation plus a rectangular grid of result cells. CSV renders the header
//! line and the data rows, nothing else, so output pipes straight into
//! plotting tools; JSON wraps the same cells as
//! `{"params": {...}, "results": [...]}`. Numeric leaves go through
//! [`fmt_sig`] in both formats, so the two carry identical digit strings and
//! repeated runs of a deterministic command are byte-identical.

use clap::ValueEnum;

/// Output format selector shared by every command.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Header line plus one line per result row.
    Csv,
    /// One object with `params` (invocation echo) and `results` (row objects).
    Json,
}

/// A real number rendered to 12 significant digits in scientific notation.
/// Exact zero is normalised first so `-0.0` cannot leak a stray sign.
pub fn fmt_sig(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

/// One table cell.
#[derive(Debug, Clone)]
pub enum Cell {
    /// A real number, rendered with [`fmt_sig`].
    Num(f64),
    /// An exact tally, rendered as an integer.
    Count(u64),
    /// A label.
    Text(String),
}

impl Cell {
    /// Text cell from anything string-like.
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn csv(&self) -> String {
        match self {
            Cell::Num(x) => fmt_sig(*x),
            Cell::Count(k) => k.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) => serde_json::Value::String(fmt_sig(*x)),
            Cell::Count(k) => serde_json::Value::from(*k),
            Cell::Text(s) => serde_json::Value::String(s.clone()),
        }
    }
}

/// One command's output: parameter echo plus a rectangular result grid.
#[derive(Debug)]
pub struct Table {
    params: Vec<(String, Cell)>,
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Empty table with the given column names.
    pub fn new(columns: &[&str]) -> Self {
        Self {
            params: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Record one invocation parameter (JSON output only; CSV stays bare).
    pub fn with_param(mut self, name: &str, value: Cell) -> Self {
        self.params.push((name.to_string(), value));
        self
    }

    /// Append one result row.
    ///
    /// # Panics
    /// Panics if the row width does not match the column count.
    pub fn push_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    /// Render in the requested format, with a trailing newline.
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn render_json(&self) -> String {
        let mut params = serde_json::Map::new();
        for (name, cell) in &self.params {
            params.insert(name.clone(), cell.json());
        }
        let results: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut object = serde_json::Map::new();
                for (name, cell) in self.columns.iter().zip(row) {
                    object.insert(name.clone(), cell.json());
                }
                serde_json::Value::Object(object)
            })
            .collect();
        let mut root = serde_json::Map::new();
        root.insert("params".to_string(), serde_json::Value::Object(params));
        root.insert("results".to_string(), serde_json::Value::Array(results));
        let mut out = serde_json::to_string_pretty(&serde_json::Value::Object(root))
            .expect("tables serialise infallibly");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting_is_stable() {
        assert_eq!(fmt_sig(0.125), "1.25000000000e-1");
        assert_eq!(fmt_sig(0.0), "0.00000000000e0");
        assert_eq!(fmt_sig(-0.0), "0.00000000000e0");
        assert_eq!(fmt_sig(-2.0f64.sqrt()), "-1.41421356237e0");
    }

    #[test]
    fn csv_is_header_plus_rows_only() {
        let mut t = Table::new(&["name", "value"]).with_param("ignored", Cell::Count(1));
        t.push_row(vec![Cell::text("x"), Cell::Num(0.5)]);
        t.push_row(vec![Cell::text("k"), Cell::Count(7)]);
        assert_eq!(
            t.render(Format::Csv),
            "name,value\nx,5.00000000000e-1\nk,7\n"
        );
    }

    #[test]
    fn json_nests_params_and_results_with_formatted_leaves() {
        let mut t = Table::new(&["value"]).with_param("seed", Cell::Count(42));
        t.push_row(vec![Cell::Num(0.25)]);
        let parsed: serde_json::Value = serde_json::from_str(&t.render(Format::Json)).unwrap();
        assert_eq!(parsed["params"]["seed"], 42);
        assert_eq!(parsed["results"][0]["value"], "2.50000000000e-1");
    }
}
