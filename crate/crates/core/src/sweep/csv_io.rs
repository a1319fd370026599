use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::SweepRecord;
use crate::error::{Error, Result};
use crate::hh::TheoremId;

pub const CSV_HEADER: [&str; 13] = [
    "theorem_id",
    "family_id",
    "alpha",
    "s",
    "x",
    "p",
    "q",
    "lhs",
    "rhs",
    "margin",
    "ratio",
    "certified",
    "quad_error_est",
];

// 17 significant digits round-trip every f64.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_records<W: Write>(records: &[SweepRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.theorem.as_str().to_string(),
            r.family_id.clone(),
            fmt_f64(r.alpha),
            fmt_f64(r.s),
            fmt_f64(r.x),
            fmt_f64(r.p),
            fmt_f64(r.q),
            fmt_f64(r.lhs),
            fmt_f64(r.rhs),
            fmt_f64(r.margin),
            fmt_f64(r.ratio),
            r.certified.to_string(),
            fmt_f64(r.quad_error_est),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv(records: &[SweepRecord], path: impl AsRef<Path>) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    write_records(records, file)
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<SweepRecord>> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let mut idx = [0usize; 13];
    for (slot, name) in idx.iter_mut().zip(CSV_HEADER) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("missing column '{name}'")))?;
    }
    if headers.len() != CSV_HEADER.len() {
        let extra: Vec<_> = headers.iter().filter(|h| !CSV_HEADER.contains(h)).collect();
        return Err(Error::Schema(format!("unexpected columns {extra:?}")));
    }

    let mut records = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = row + 2;
        let field = |k: usize| rec.get(idx[k]).unwrap_or("");
        let num = |k: usize| -> Result<f64> {
            field(k).trim().parse::<f64>().map_err(|_| {
                Error::Schema(format!("line {line}: column '{}' is not a number: '{}'", CSV_HEADER[k], field(k)))
            })
        };
        let theorem: TheoremId = field(0).parse()?;
        let certified = match field(11).trim() {
            "true" => true,
            "false" => false,
            other => {
                return Err(Error::Schema(format!("line {line}: column 'certified' must be true/false, got '{other}'")))
            }
        };
        records.push(SweepRecord {
            theorem,
            family_id: field(1).to_string(),
            alpha: num(2)?,
            s: num(3)?,
            x: num(4)?,
            p: num(5)?,
            q: num(6)?,
            lhs: num(7)?,
            rhs: num(8)?,
            margin: num(9)?,
            ratio: num(10)?,
            certified,
            quad_error_est: num(12)?,
        });
    }
    Ok(records)
}
