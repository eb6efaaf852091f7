//! Result rows and bit-exact CSV emission.

use std::io::Write;
use std::time::Duration;

/// One emitted estimate.
#[derive(Debug, Clone)]
pub struct ResultRow {
    pub experiment: String,
    pub cell: String,
    pub test: String,
    pub estimate: f64,
    pub std_err: f64,
    pub reps: u64,
    pub seed: u64,
    /// Recorded for logs; never serialized (CSV output is deterministic).
    pub wall_time: Duration,
}

pub const CSV_HEADER: &str = "experiment,cell,test,estimate,std_err,reps,seed";

/// Serialize rows with LF endings and 6-significant-digit floats.
pub fn write_csv<W: Write>(mut w: W, rows: &[ResultRow]) -> std::io::Result<()> {
    w.write_all(CSV_HEADER.as_bytes())?;
    w.write_all(b"\n")?;
    for r in rows {
        let line = format!(
            "{},{},{},{},{},{},{}\n",
            r.experiment,
            r.cell,
            r.test,
            fmt_g6(r.estimate),
            fmt_g6(r.std_err),
            r.reps,
            r.seed
        );
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// Format with 6 significant digits: plain decimal notation when the
/// magnitude is in [1e-4, 1e6), scientific otherwise, trailing zeros
/// trimmed.
pub fn fmt_g6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        trim_trailing_zeros(format!("{:.*}", decimals, x))
    } else {
        let s = format!("{:.5e}", x);
        // "1.234560e-7" -> trim mantissa zeros
        match s.split_once('e') {
            Some((mant, exp)) => format!("{}e{}", trim_trailing_zeros(mant.to_string()), exp),
            None => s,
        }
    }
}

fn trim_trailing_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    t.to_string()
}
