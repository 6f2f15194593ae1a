use std::fs::File;
use std::io::{Read, Write};
use std::ops::Range;
use std::path::Path;

use crate::error::{Error, Result};

pub const TRACE_HEADER: [&str; 12] = [
    "t", "y_star", "y", "u", "u_ff", "u_fb", "i_d", "i_q", "i_a", "i_b", "v_d", "v_q",
];

/// Sampled closed-loop record, one entry per controller period.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimTrace {
    pub t: Vec<f64>,
    pub y_star: Vec<f64>,
    pub y: Vec<f64>,
    pub u: Vec<f64>,
    pub u_ff: Vec<f64>,
    pub u_fb: Vec<f64>,
    pub i_d: Vec<f64>,
    pub i_q: Vec<f64>,
    pub i_a: Vec<f64>,
    pub i_b: Vec<f64>,
    pub v_d: Vec<f64>,
    pub v_q: Vec<f64>,
}

/// One row of a [`SimTrace`].
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub y_star: f64,
    pub y: f64,
    pub u: f64,
    pub u_ff: f64,
    pub u_fb: f64,
    pub i_d: f64,
    pub i_q: f64,
    pub i_a: f64,
    pub i_b: f64,
    pub v_d: f64,
    pub v_q: f64,
}

impl TraceSample {
    fn fields(&self) -> [f64; 12] {
        [
            self.t, self.y_star, self.y, self.u, self.u_ff, self.u_fb, self.i_d, self.i_q, self.i_a,
            self.i_b, self.v_d, self.v_q,
        ]
    }
}

impl SimTrace {
    pub fn with_capacity(n: usize) -> Self {
        let v = || Vec::with_capacity(n);
        SimTrace {
            t: v(),
            y_star: v(),
            y: v(),
            u: v(),
            u_ff: v(),
            u_fb: v(),
            i_d: v(),
            i_q: v(),
            i_a: v(),
            i_b: v(),
            v_d: v(),
            v_q: v(),
        }
    }

    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn push(&mut self, s: TraceSample) {
        self.t.push(s.t);
        self.y_star.push(s.y_star);
        self.y.push(s.y);
        self.u.push(s.u);
        self.u_ff.push(s.u_ff);
        self.u_fb.push(s.u_fb);
        self.i_d.push(s.i_d);
        self.i_q.push(s.i_q);
        self.i_a.push(s.i_a);
        self.i_b.push(s.i_b);
        self.v_d.push(s.v_d);
        self.v_q.push(s.v_q);
    }

    pub fn sample(&self, k: usize) -> TraceSample {
        TraceSample {
            t: self.t[k],
            y_star: self.y_star[k],
            y: self.y[k],
            u: self.u[k],
            u_ff: self.u_ff[k],
            u_fb: self.u_fb[k],
            i_d: self.i_d[k],
            i_q: self.i_q[k],
            i_a: self.i_a[k],
            i_b: self.i_b[k],
            v_d: self.v_d[k],
            v_q: self.v_q[k],
        }
    }

    /// Copy of the samples in `range`.
    pub fn window(&self, range: Range<usize>) -> SimTrace {
        let mut out = SimTrace::with_capacity(range.len());
        for k in range {
            out.push(self.sample(k));
        }
        out
    }

    /// Tracking error `y* - y` per sample.
    pub fn tracking_error(&self) -> Vec<f64> {
        self.y_star.iter().zip(&self.y).map(|(r, y)| r - y).collect()
    }

    fn columns(&self) -> [&Vec<f64>; 12] {
        [
            &self.t, &self.y_star, &self.y, &self.u, &self.u_ff, &self.u_fb, &self.i_d, &self.i_q, &self.i_a,
            &self.i_b, &self.v_d, &self.v_q,
        ]
    }

    fn check_lengths(&self) -> Result<()> {
        let n = self.len();
        for c in self.columns() {
            if c.len() != n {
                return Err(Error::LengthMismatch {
                    what: "trace columns",
                    left: n,
                    right: c.len(),
                });
            }
        }
        Ok(())
    }

    /// Writes the trace as CSV with the fixed header. Values carry 17
    /// significant digits so that reading them back is lossless.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        self.check_lengths()?;
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(TRACE_HEADER)?;
        let mut row: Vec<String> = Vec::with_capacity(TRACE_HEADER.len());
        for k in 0..self.len() {
            row.clear();
            row.extend(self.sample(k).fields().iter().map(|v| format_f64(*v)));
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::Csv(e.into()))?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<SimTrace> {
        let mut r = csv::Reader::from_reader(reader);
        let header = r.headers()?.clone();
        if header.iter().ne(TRACE_HEADER.iter().copied()) {
            return Err(Error::Shape(format!(
                "unexpected trace header {:?}, expected {:?}",
                header.iter().collect::<Vec<_>>(),
                TRACE_HEADER
            )));
        }
        let mut out = SimTrace::default();
        for (line, rec) in r.records().enumerate() {
            let rec = rec?;
            let mut v = [0.0; 12];
            for (slot, field) in v.iter_mut().zip(rec.iter()) {
                *slot = field.trim().parse().map_err(|_| {
                    Error::Shape(format!("row {}: cannot parse `{field}` as a number", line + 2))
                })?;
            }
            out.push(TraceSample {
                t: v[0],
                y_star: v[1],
                y: v[2],
                u: v[3],
                u_ff: v[4],
                u_fb: v[5],
                i_d: v[6],
                i_q: v[7],
                i_a: v[8],
                i_b: v[9],
                v_d: v[10],
                v_q: v[11],
            });
        }
        Ok(out)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(f))
    }

    pub fn load(path: &Path) -> Result<SimTrace> {
        let f = File::open(path).map_err(|e| Error::io(path, e))?;
        SimTrace::read_csv(std::io::BufReader::new(f))
    }
}

/// Fixed 17-significant-digit scientific notation.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample(seed: f64) -> TraceSample {
        TraceSample {
            t: seed * 1e-4,
            y_star: seed.sin() * 18.0,
            y: seed.cos() / 3.0,
            u: -seed * 1e-7,
            u_ff: 1.0 / 3.0,
            u_fb: f64::MIN_POSITIVE,
            i_d: -0.0,
            i_q: 1e300,
            i_a: 2.0f64.sqrt(),
            i_b: -1e-300,
            v_d: 0.1 + 0.2,
            v_q: seed,
        }
    }

    #[test]
    fn header_is_fixed() {
        let mut buf = Vec::new();
        SimTrace::default().write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "t,y_star,y,u,u_ff,u_fb,i_d,i_q,i_a,i_b,v_d,v_q\n");
    }

    #[test]
    fn rejects_wrong_header() {
        let data = "t,y\n0,1\n";
        assert!(SimTrace::read_csv(data.as_bytes()).is_err());
    }

    #[test]
    fn window_copies_range() {
        let mut tr = SimTrace::default();
        for k in 0..10 {
            tr.push(sample(k as f64));
        }
        let w = tr.window(3..7);
        assert_eq!(w.len(), 4);
        assert_eq!(w.sample(0), tr.sample(3));
    }

    proptest! {
        #[test]
        fn csv_roundtrip_is_bit_exact(vals in proptest::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 1..40)) {
            let mut tr = SimTrace::default();
            for v in &vals {
                let mut s = sample(*v % 1e3);
                s.y = *v;
                s.u = -*v;
                tr.push(s);
            }
            let mut buf = Vec::new();
            tr.write_csv(&mut buf).unwrap();
            let back = SimTrace::read_csv(buf.as_slice()).unwrap();
            for k in 0..tr.len() {
                prop_assert_eq!(back.sample(k).fields().map(f64::to_bits), tr.sample(k).fields().map(f64::to_bits));
            }
        }
    }
}
