use std::io::{self, Write};

use serde_json::{json, Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) if *x != 0.0 && (x.abs() < 1e-4 || x.abs() >= 1e16) => format!("{x:e}"),
            Cell::Num(x) => format!("{x}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Rows in grid order plus a metadata block.
#[derive(Clone, Debug, Default)]
pub struct SweepTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Row index and reason for every row whose values are placeholders.
    pub flags: Vec<(usize, String)>,
}

impl SweepTable {
    pub fn new(columns: Vec<&'static str>) -> Self {
        SweepTable {
            columns,
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.push((key.into(), value.to_string()));
    }

    pub fn write_csv(&self, w: &mut impl Write) -> io::Result<()> {
        for (k, v) in &self.metadata {
            writeln!(w, "# {k} = {v}")?;
        }
        for (i, reason) in &self.flags {
            writeln!(w, "# flagged row {i}: {reason}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut meta = Map::new();
        for (k, v) in &self.metadata {
            meta.insert(k.clone(), json!(v));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let flags: Vec<Value> = self.flags.iter().map(|(i, r)| json!({"row": i, "reason": r})).collect();
        json!({
            "metadata": meta,
            "columns": self.columns,
            "rows": rows,
            "flags": flags,
        })
    }

    pub fn write_json(&self, w: &mut impl Write) -> io::Result<()> {
        serde_json::to_writer_pretty(&mut *w, &self.to_json())?;
        writeln!(w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepTable {
        let mut t = SweepTable::new(vec!["a", "b", "name"]);
        t.meta("command", "fig1");
        t.push(vec![0.1.into(), 3usize.into(), "x,y".into()]);
        t.push(vec![2.5e-17.into(), 0usize.into(), "z".into()]);
        t.flags.push((0, "singular".into()));
        t
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        sample().write_csv(&mut out).unwrap();
        let s = String::from_utf8(out).unwrap();
        assert_eq!(s, "# command = fig1\n# flagged row 0: singular\na,b,name\n0.1,3,\"x,y\"\n2.5e-17,0,z\n");
    }

    #[test]
    fn json_mirrors_columns() {
        let v = sample().to_json();
        assert_eq!(v["columns"][2], "name");
        assert_eq!(v["rows"][0][0], 0.1);
        assert_eq!(v["flags"][0]["row"], 0);
    }
}
