//! Two-parameter grids of rectification results and their CSV form.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;

use crate::config::{ConfigError, RunConfig};
use crate::spectral;
use crate::transport::{self, RectificationResult};

pub const CSV_HEADER: &str = "param1,param2,J_fwd,J_rev,R,flags";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Flag {
    DegenerateSpectrum,
    DecoupledMode,
    RUndefined,
    SameSign,
    NoConvergence,
}

impl Flag {
    pub fn token(self) -> &'static str {
        match self {
            Flag::DegenerateSpectrum => "DEGENERATE_SPECTRUM",
            Flag::DecoupledMode => "DECOUPLED_MODE",
            Flag::RUndefined => "R_UNDEFINED",
            Flag::SameSign => "SAME_SIGN",
            Flag::NoConvergence => "NO_CONVERGENCE",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param1: f64,
    pub param2: f64,
    pub j_fwd: f64,
    pub j_rev: f64,
    pub r: Option<f64>,
    pub flags: Vec<Flag>,
}

/// Warning flags of one rectification result, in a fixed order.
pub fn flags(r: &RectificationResult) -> Vec<Flag> {
    let checks = [
        (r.degenerate, Flag::DegenerateSpectrum),
        (r.decoupled > 0, Flag::DecoupledMode),
        (r.r.is_none(), Flag::RUndefined),
        (r.same_sign(), Flag::SameSign),
    ];
    checks.into_iter().filter(|c| c.0).map(|c| c.1).collect()
}

/// Grid points in row-major order: the first axis is the slow index.
pub fn grid(config: &RunConfig) -> Result<Vec<(f64, f64)>, ConfigError> {
    let [a, b] = config
        .axes
        .as_ref()
        .ok_or_else(|| ConfigError::Schema {
            field: "sweep".into(),
            message: "required for a sweep".into(),
        })?;
    let (xs, ys) = (a.values(), b.values());
    Ok(xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect())
}

/// Evaluate one grid point. Numerical trouble is reported through flags.
pub fn evaluate_point(config: &RunConfig, p1: f64, p2: f64) -> Result<SweepRow, ConfigError> {
    let [a, b] = config.axes.as_ref().expect("sweep axes");
    let overrides: Vec<(&str, f64)> = a
        .params
        .iter()
        .map(|p| (p.as_str(), p1))
        .chain(b.params.iter().map(|p| (p.as_str(), p2)))
        .collect();
    let (chain, baths) = config.point(&overrides)?;
    let row = match spectral::boundary_modes(&chain) {
        Ok(modes) => {
            let r = transport::rectify_modes(&modes, baths, chain.gamma());
            let flags = flags(&r);
            SweepRow {
                param1: p1,
                param2: p2,
                j_fwd: r.j_fwd,
                j_rev: r.j_rev,
                r: r.r,
                flags,
            }
        }
        Err(_) => SweepRow {
            param1: p1,
            param2: p2,
            j_fwd: f64::NAN,
            j_rev: f64::NAN,
            r: None,
            flags: vec![Flag::NoConvergence, Flag::RUndefined],
        },
    };
    Ok(row)
}

/// Evaluate the whole grid on `threads` workers. Row order and values do not
/// depend on the thread count.
pub fn run_sweep(config: &RunConfig, threads: usize) -> Result<Vec<SweepRow>, ConfigError> {
    let points = grid(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool");
    pool.install(|| {
        points
            .par_iter()
            .map(|&(x, y)| evaluate_point(config, x, y))
            .collect()
    })
}

/// Float with 17 significant digits; undefined values as `nan`.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

pub fn emit_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let flags: Vec<&str> = row.flags.iter().map(|f| f.token()).collect();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            format_float(row.param1),
            format_float(row.param2),
            format_float(row.j_fwd),
            format_float(row.j_rev),
            format_float(row.r.unwrap_or(f64::NAN)),
            flags.join(";")
        )?;
    }
    out.flush()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    fn config(template: &str, steps: usize) -> RunConfig {
        let text = format!(
            r#"{{
            "schema_version": 1,
            "chain": {{ {template} }},
            "baths": {{ "t": 10, "delta_t": 5 }},
            "sweep": {{ "axes": [
                {{ "param": "{a}", "min": -4, "max": 4, "steps": {steps} }},
                {{ "param": "{b}", "min": -4, "max": 4, "steps": {steps} }}
            ] }}
        }}"#,
            a = if template.contains("field") { "h1" } else { "alpha1" },
            b = if template.contains("field") { "h2" } else { "alpha2" },
        );
        parse_config(text.as_bytes()).unwrap()
    }

    fn field_junction(steps: usize) -> RunConfig {
        config(r#""template": "field-junction", "n": 12, "alpha": 1"#, steps)
    }

    #[test]
    fn one_row_csv() {
        let row = SweepRow {
            param1: 1.0,
            param2: 2.0,
            j_fwd: 3.0,
            j_rev: -2.0,
            r: Some(0.5),
            flags: vec![],
        };
        let mut buf = Vec::new();
        emit_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "param1,param2,J_fwd,J_rev,R,flags\n\
             1.0000000000000000e0,2.0000000000000000e0,3.0000000000000000e0,-2.0000000000000000e0,5.0000000000000000e-1,\n"
        );
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn undefined_r_row() {
        let row = SweepRow {
            param1: 0.0,
            param2: 0.0,
            j_fwd: 0.0,
            j_rev: 0.0,
            r: None,
            flags: vec![Flag::DegenerateSpectrum, Flag::RUndefined],
        };
        let mut buf = Vec::new();
        emit_csv(&[row], &mut buf).unwrap();
        let line = String::from_utf8(buf).unwrap().lines().nth(1).unwrap().to_string();
        assert!(line.ends_with(",nan,DEGENERATE_SPECTRUM;R_UNDEFINED"), "{line}");
    }

    #[test]
    fn floats_round_trip() {
        for v in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn rows_are_row_major() {
        let c = field_junction(3);
        let rows = run_sweep(&c, 2).unwrap();
        let coords: Vec<(f64, f64)> = rows.iter().map(|r| (r.param1, r.param2)).collect();
        assert_eq!(coords[..4], [(-4.0, -4.0), (-4.0, 0.0), (-4.0, 4.0), (0.0, -4.0)]);
    }

    #[test]
    fn output_does_not_depend_on_threads() {
        let c = field_junction(9);
        let render = |threads| {
            let mut buf = Vec::new();
            emit_csv(&run_sweep(&c, threads).unwrap(), &mut buf).unwrap();
            buf
        };
        let one = render(1);
        assert_eq!(one, render(4));
        assert_eq!(one, render(1));
    }

    #[test]
    fn symmetric_diagonal_and_identity() {
        let rows = run_sweep(&field_junction(9), 2).unwrap();
        for row in &rows {
            if row.param1 == row.param2 {
                assert!(row.r.unwrap().abs() < 1e-10);
            }
            if let Some(r) = row.r {
                let den = row.j_fwd.min(row.j_rev.abs());
                assert!((r * den - (row.j_fwd + row.j_rev)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn zero_field_coupling_junction_rectifies() {
        let c = config(r#""template": "coupling-junction", "n": 12, "h": 0"#, 5);
        let rows = run_sweep(&c, 2).unwrap();
        let off_diagonal = rows
            .iter()
            .filter(|r| r.param1 != r.param2 && r.param1 != 0.0 && r.param2 != 0.0);
        assert!(off_diagonal.clone().count() > 0);
        for row in off_diagonal {
            if row.param1.abs() != row.param2.abs() {
                assert!(row.r.unwrap().abs() > 1e-8, "{row:?}");
            }
        }
    }
}
