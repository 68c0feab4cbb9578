//! CSV and point-cloud writers with a fixed dialect: comma separator, header
//! row, LF line endings and 17 significant digits for reals.

use std::io::{self, Write};

use crate::csf::{CsfFrame, EightDiagnostics};
use crate::geoflow::{BoundaryCurve, PeriodRecord, SpherePoint};

/// Formats a real with 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table writer over any `io::Write`.
pub struct Table<W: Write> {
    inner: csv::Writer<W>,
    width: usize,
}

impl<W: Write> Table<W> {
    pub fn new(out: W, header: &[&str]) -> io::Result<Self> {
        let mut inner = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        inner.write_record(header).map_err(io::Error::other)?;
        Ok(Self { inner, width: header.len() })
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) -> io::Result<()> {
        if cells.len() != self.width {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                format!("row has {} cells, header has {}", cells.len(), self.width),
            ));
        }
        self.inner.write_record(cells.iter().map(|c| c.as_ref())).map_err(io::Error::other)
    }

    pub fn reals(&mut self, values: &[f64]) -> io::Result<()> {
        let cells: Vec<String> = values.iter().map(|&v| real(v)).collect();
        self.row(&cells)
    }

    pub fn finish(self) -> io::Result<W> {
        self.inner.into_inner().map_err(|e| io::Error::other(e.to_string()))
    }
}

fn to_string(f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> io::Result<String> {
    let mut buf = Vec::new();
    f(&mut buf)?;
    String::from_utf8(buf).map_err(io::Error::other)
}

/// Columns `alpha, beta, t0, t1, P, source`.
pub fn period_table_csv(records: &[PeriodRecord]) -> io::Result<String> {
    to_string(|buf| {
        let mut t = Table::new(buf, &["alpha", "beta", "t0", "t1", "P", "source"])?;
        for r in records {
            t.row(&[real(r.alpha), real(r.beta), real(r.t0), real(r.t1), real(r.period), r.source.as_str().to_string()])?;
        }
        t.finish().map(|_| ())
    })
}

/// Columns `x0, a, b, da_dx0, db_dx0`.
pub fn boundary_csv(curve: &BoundaryCurve) -> io::Result<String> {
    to_string(|buf| {
        let mut t = Table::new(buf, &["x0", "a", "b", "da_dx0", "db_dx0"])?;
        for p in &curve.points {
            t.reals(&[p.x0, p.a, p.b, p.da_dx0, p.db_dx0])?;
        }
        t.finish().map(|_| ())
    })
}

/// Columns `dir_x, dir_y, dir_z, end_x, end_y, end_z`.
pub fn sphere_csv(cloud: &[SpherePoint]) -> io::Result<String> {
    to_string(|buf| {
        let mut t = Table::new(buf, &["dir_x", "dir_y", "dir_z", "end_x", "end_y", "end_z"])?;
        for p in cloud {
            let (d, e) = (p.direction, p.endpoint);
            t.reals(&[d.x, d.y, d.z, e.x, e.y, e.z])?;
        }
        t.finish().map(|_| ())
    })
}

/// One `v x y z` line per endpoint.
pub fn sphere_obj(cloud: &[SpherePoint]) -> String {
    let mut s = String::with_capacity(cloud.len() * 72);
    for p in cloud {
        let e = p.endpoint;
        s.push_str(&format!("v {} {} {}\n", real(e.x), real(e.y), real(e.z)));
    }
    s
}

/// Columns `t, point_index, x, y`, one row per vertex per frame.
pub fn frames_csv(frames: &[CsfFrame]) -> io::Result<String> {
    to_string(|buf| {
        let mut t = Table::new(buf, &["t", "point_index", "x", "y"])?;
        for f in frames {
            let time = real(f.diagnostics.time);
            for (i, p) in f.curve.points().iter().enumerate() {
                t.row(&[time.clone(), i.to_string(), real(p[0]), real(p[1])])?;
            }
        }
        t.finish().map(|_| ())
    })
}

pub fn diagnostics_csv(rows: &[EightDiagnostics]) -> io::Result<String> {
    to_string(|buf| {
        let mut t = Table::new(buf, &EightDiagnostics::CSV_HEADER)?;
        for d in rows {
            t.reals(&d.csv_row())?;
        }
        t.finish().map(|_| ())
    })
}

/// Equal-length columns under the given names.
pub fn columns_csv(header: &[&str], columns: &[&[f64]]) -> io::Result<String> {
    if header.len() != columns.len() || columns.windows(2).any(|w| w[0].len() != w[1].len()) {
        return Err(io::Error::new(io::ErrorKind::InvalidInput, "ragged columns"));
    }
    let rows = columns.first().map_or(0, |c| c.len());
    to_string(|buf| {
        let mut t = Table::new(buf, header)?;
        for i in 0..rows {
            let r: Vec<f64> = columns.iter().map(|c| c[i]).collect();
            t.reals(&r)?;
        }
        t.finish().map(|_| ())
    })
}
