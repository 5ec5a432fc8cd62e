use std::io::Write;

use serde::ser::{Serialize, SerializeMap, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};

use super::config::Format;

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        // + 0.0 folds -0 into 0
        format!("{:.16e}", x + 0.0)
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    /// Written as an empty CSV field or JSON null.
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, format: Format, w: W) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => self.write_json(w),
        }
    }

    /// Comment lines starting with '#', a header row, then the data.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for c in &self.comments {
            for line in c.lines() {
                writeln!(w, "# {line}")?;
            }
        }
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns).map_err(csv_error)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|c| match c {
                Cell::Num(x) => fmt_float(*x),
                Cell::Int(i) => i.to_string(),
                Cell::Text(s) => s.clone(),
                Cell::Missing => String::new(),
            }))
            .map_err(csv_error)?;
        }
        out.flush()?;
        Ok(())
    }

    /// An array with one object per row, keys in column order.
    pub fn write_json<W: Write>(&self, mut w: W) -> Result<()> {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let values = row.iter().map(raw_cell).collect::<Result<Vec<_>>>()?;
                Ok(JsonRow {
                    columns: &self.columns,
                    values,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        serde_json::to_writer_pretty(&mut w, &rows).map_err(|e| Error::Io(e.into()))?;
        writeln!(w)?;
        Ok(())
    }
}

struct JsonRow<'a> {
    columns: &'a [String],
    values: Vec<Box<RawValue>>,
}

impl Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.columns.len()))?;
        for (k, v) in self.columns.iter().zip(&self.values) {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

/// Numbers keep all 17 digits instead of serde_json's shortest form.
fn raw_cell(cell: &Cell) -> Result<Box<RawValue>> {
    let text = match cell {
        Cell::Num(x) if x.is_finite() => fmt_float(*x),
        Cell::Num(_) | Cell::Missing => "null".to_string(),
        Cell::Int(i) => i.to_string(),
        Cell::Text(t) => serde_json::to_string(t).map_err(|e| Error::Io(e.into()))?,
    };
    RawValue::from_string(text).map_err(|e| Error::Io(e.into()))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.into())
}
