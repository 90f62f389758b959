//! Deterministic text output helpers shared by the exporters.

use std::io::{self, Write};

use crate::real::Real;

/// 17 significant digits, '.' decimal separator. Identical inputs format to
/// identical bytes on every platform.
pub fn csv_number<T: Real>(v: T) -> String {
    format!("{:.16e}", v)
}

/// Column-oriented CSV table with '\n' line endings.
pub fn write_table<W: Write, T: Real>(
    w: &mut W,
    header: &[&str],
    columns: &[&[T]],
) -> io::Result<()> {
    assert_eq!(header.len(), columns.len());
    let rows = columns.first().map_or(0, |c| c.len());
    for c in columns {
        assert_eq!(c.len(), rows, "ragged columns");
    }
    w.write_all(header.join(",").as_bytes())?;
    w.write_all(b"\n")?;
    for r in 0..rows {
        let line: Vec<String> = columns.iter().map(|c| csv_number(c[r])).collect();
        w.write_all(line.join(",").as_bytes())?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
