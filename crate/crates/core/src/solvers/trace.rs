//! Per-iteration trace records and their CSV form.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const TRACE_COLUMNS: [&str; 10] = [
    "k",
    "objective",
    "smoothed_objective",
    "gap",
    "gamma",
    "bound_adaptive",
    "bound_nonadaptive",
    "lyapunov",
    "feasibility",
    "elapsed_ns",
];

/// One reported iterate. Quantities that do not apply are `NaN`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub k: usize,
    pub objective: f64,
    pub smoothed_objective: f64,
    pub gap: f64,
    pub gamma: f64,
    pub bound_adaptive: f64,
    pub bound_nonadaptive: f64,
    pub lyapunov: f64,
    pub feasibility: f64,
    pub elapsed_ns: u64,
}

impl TraceRow {
    pub fn new(k: usize) -> Self {
        TraceRow {
            k,
            objective: f64::NAN,
            smoothed_objective: f64::NAN,
            gap: f64::NAN,
            gamma: f64::NAN,
            bound_adaptive: f64::NAN,
            bound_nonadaptive: f64::NAN,
            lyapunov: f64::NAN,
            feasibility: f64::NAN,
            elapsed_ns: 0,
        }
    }

    /// Bitwise equality, treating `NaN` fields as equal to themselves.
    pub fn same_bits(&self, other: &TraceRow) -> bool {
        let a = self.floats();
        let b = other.floats();
        self.k == other.k
            && self.elapsed_ns == other.elapsed_ns
            && a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits())
    }

    fn floats(&self) -> [f64; 8] {
        [
            self.objective,
            self.smoothed_objective,
            self.gap,
            self.gamma,
            self.bound_adaptive,
            self.bound_nonadaptive,
            self.lyapunov,
            self.feasibility,
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    /// Free-form `key: value` notes written as `#` comment lines.
    pub header: Vec<(String, String)>,
    pub rows: Vec<TraceRow>,
}

fn fmt_float(out: &mut String, v: f64) {
    if v.is_nan() {
        out.push_str("NaN");
    } else if v.is_infinite() {
        out.push_str(if v > 0.0 { "inf" } else { "-inf" });
    } else {
        let _ = write!(out, "{v:.16e}");
    }
}

impl Trace {
    pub fn note(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.header.push((key.into(), value.into()));
    }

    pub fn last(&self) -> Option<&TraceRow> {
        self.rows.last()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.header {
            let _ = writeln!(out, "# {}: {}", k, v.replace('\n', " "));
        }
        out.push_str(&TRACE_COLUMNS.join(","));
        out.push('\n');
        for r in &self.rows {
            let _ = write!(out, "{}", r.k);
            for v in r.floats() {
                out.push(',');
                fmt_float(&mut out, v);
            }
            let _ = writeln!(out, ",{}", r.elapsed_ns);
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Trace> {
        let mut trace = Trace::default();
        let mut seen_header = false;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim_start();
                match rest.split_once(": ") {
                    Some((k, v)) => trace.note(k, v),
                    None => trace.note(rest, ""),
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if !seen_header {
                if fields != TRACE_COLUMNS {
                    return Err(Error::Parse(format!("line {}: unexpected trace header", lineno + 1)));
                }
                seen_header = true;
                continue;
            }
            if fields.len() != TRACE_COLUMNS.len() {
                return Err(Error::Parse(format!(
                    "line {}: expected {} fields, found {}",
                    lineno + 1,
                    TRACE_COLUMNS.len(),
                    fields.len()
                )));
            }
            let bad = |what: &str| Error::Parse(format!("line {}: bad {what}", lineno + 1));
            let float = |i: usize| fields[i].parse::<f64>().map_err(|_| bad(TRACE_COLUMNS[i]));
            trace.rows.push(TraceRow {
                k: fields[0].parse().map_err(|_| bad("k"))?,
                objective: float(1)?,
                smoothed_objective: float(2)?,
                gap: float(3)?,
                gamma: float(4)?,
                bound_adaptive: float(5)?,
                bound_nonadaptive: float(6)?,
                lyapunov: float(7)?,
                feasibility: float(8)?,
                elapsed_ns: fields[9].parse().map_err(|_| bad("elapsed_ns"))?,
            });
        }
        if !seen_header {
            return Err(Error::Parse("missing trace header".into()));
        }
        Ok(trace)
    }
}

/// What a run records besides the iterates.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceOptions<T> {
    /// Minimizer used for `R_0`, bounds and the Lyapunov column; defaults to the problem's reference.
    pub x_star: Option<Vec<T>>,
    /// Optimal value used for the gap column; defaults to the problem's reference.
    pub f_star: Option<T>,
    /// Record cumulative wall time. Off by default so traces are byte-reproducible.
    pub timing: bool,
    /// Record every `report_every`-th iterate (and always the last).
    pub report_every: usize,
}

impl<T> Default for TraceOptions<T> {
    fn default() -> Self {
        TraceOptions {
            x_star: None,
            f_star: None,
            timing: false,
            report_every: 1,
        }
    }
}

impl<T: Scalar> TraceOptions<T> {
    pub fn with_reference(x_star: Option<Vec<T>>, f_star: Option<T>) -> Self {
        TraceOptions {
            x_star,
            f_star,
            ..Default::default()
        }
    }
}

pub(crate) struct Recorder {
    start: Option<Instant>,
    every: usize,
    last: usize,
}

impl Recorder {
    pub(crate) fn new<T>(opts: &TraceOptions<T>, last: usize) -> Self {
        Recorder {
            start: opts.timing.then(Instant::now),
            every: opts.report_every.max(1),
            last,
        }
    }

    pub(crate) fn wants(&self, k: usize) -> bool {
        k.is_multiple_of(self.every) || k == self.last
    }

    pub(crate) fn elapsed_ns(&self) -> u64 {
        self.start
            .map_or(0, |s| s.elapsed().as_nanos().min(u64::MAX as u128) as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_is_lossless() {
        let mut t = Trace::default();
        t.note("algorithm", "adaptive");
        let mut r = TraceRow::new(1);
        r.objective = 0.1 + 0.2;
        r.gap = 1.0 / 3.0;
        r.gamma = f64::MIN_POSITIVE;
        r.bound_adaptive = f64::INFINITY;
        r.lyapunov = -123456.789e-300;
        r.elapsed_ns = 42;
        t.rows.push(r);
        t.rows.push(TraceRow::new(2));
        let back = Trace::from_csv(&t.to_csv()).unwrap();
        assert_eq!(back.header, t.header);
        assert_eq!(back.rows.len(), 2);
        for (a, b) in back.rows.iter().zip(&t.rows) {
            assert!(a.same_bits(b));
        }
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(Trace::from_csv("k,objective\n").is_err());
        let head = TRACE_COLUMNS.join(",");
        assert!(Trace::from_csv(&format!("{head}\n1,2,3\n")).is_err());
        assert!(Trace::from_csv("").is_err());
    }
}
