use std::io::{self, Write};

/// A time series with one row per grid point and `#`-prefixed metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write_metadata<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for (key, value) in &self.metadata {
            writeln!(w, "# {key}: {value}")?;
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        self.write_metadata(w)?;
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            write_row(w, None, row)?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ASCII output")
    }
}

/// Seventeen significant digits, so values round-trip exactly.
pub fn format_number(x: f64) -> String {
    // -0.0 and 0.0 print identically
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn write_row<W: Write>(w: &mut W, lead: Option<f64>, row: &[f64]) -> io::Result<()> {
    let cells: Vec<String> = lead.iter().chain(row).map(|&x| format_number(x)).collect();
    writeln!(w, "{}", cells.join(","))
}

/// All sweep blocks in one CSV with a leading column holding the swept value.
/// Writes nothing when there are no blocks.
pub fn write_sweep_csv<W: Write>(
    parameter: &str,
    blocks: &[(f64, Table)],
    w: &mut W,
) -> io::Result<()> {
    let Some((_, first)) = blocks.first() else {
        return Ok(());
    };
    first.write_metadata(w)?;
    writeln!(w, "# sweep-parameter: {parameter}")?;
    let values: Vec<String> = blocks.iter().map(|(v, _)| format_number(*v)).collect();
    writeln!(w, "# sweep-values: {}", values.join(" "))?;
    writeln!(w, "{parameter},{}", first.columns.join(","))?;
    for (value, table) in blocks {
        for row in &table.rows {
            write_row(w, Some(*value), row)?;
        }
    }
    Ok(())
}
