//! Persistence: CSV for time series, JSON for fields.
//!
//! Floats are written with shortest round-trip formatting, so
//! `load(save(x)) == x` bit-exactly for finite values.

use std::io::Write;
use std::path::Path;

use crate::error::CoreError;
use crate::field::Field;
use crate::timeseries::{TimeSeries, TsRow};

fn fmt_f64(v: f64) -> String {
    // `{:?}` on f64 is the shortest representation that parses back exactly.
    format!("{v:?}")
}

pub fn save_timeseries(ts: &TimeSeries, path: &Path) -> Result<(), CoreError> {
    let mut out = String::new();
    out.push('t');
    for name in &ts.mu_names {
        out.push(',');
        out.push_str(name);
    }
    out.push_str(",residual,newton_iters");
    let has_change = ts.rows.iter().any(|r| r.profile_change.is_some());
    if has_change {
        out.push_str(",profile_change");
    }
    out.push('\n');
    for row in &ts.rows {
        out.push_str(&fmt_f64(row.t));
        for mu in &row.mu {
            out.push(',');
            out.push_str(&fmt_f64(*mu));
        }
        out.push(',');
        out.push_str(&fmt_f64(row.residual));
        out.push(',');
        out.push_str(&row.newton_iters.to_string());
        if has_change {
            out.push(',');
            out.push_str(&fmt_f64(row.profile_change.unwrap_or(0.0)));
        }
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())
}

pub fn load_timeseries(path: &Path) -> Result<TimeSeries, CoreError> {
    let text = std::fs::read_to_string(path).map_err(|e| CoreError::io(path, e))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| CoreError::Malformed {
        path: path.display().to_string(),
        reason: "empty file".into(),
    })?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.first() != Some(&"t") {
        return Err(CoreError::Malformed {
            path: path.display().to_string(),
            reason: "header must start with t".into(),
        });
    }
    let has_change = cols.last() == Some(&"profile_change");
    let fixed_tail = if has_change { 3 } else { 2 };
    if cols.len() < 1 + fixed_tail {
        return Err(CoreError::Malformed {
            path: path.display().to_string(),
            reason: "too few columns".into(),
        });
    }
    let n_mu = cols.len() - 1 - fixed_tail;
    let mu_names = cols[1..1 + n_mu].iter().map(|s| s.to_string()).collect();
    let mut ts = TimeSeries::new(mu_names);
    for (lineno, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != cols.len() {
            return Err(CoreError::Malformed {
                path: path.display().to_string(),
                reason: format!("line {}: wrong column count", lineno + 2),
            });
        }
        let parse = |s: &str| -> Result<f64, CoreError> {
            s.parse().map_err(|_| CoreError::Malformed {
                path: path.display().to_string(),
                reason: format!("line {}: bad number {s:?}", lineno + 2),
            })
        };
        let t = parse(parts[0])?;
        let mu = parts[1..1 + n_mu]
            .iter()
            .map(|s| parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let residual = parse(parts[1 + n_mu])?;
        let newton_iters =
            parts[2 + n_mu]
                .parse::<usize>()
                .map_err(|_| CoreError::Malformed {
                    path: path.display().to_string(),
                    reason: format!("line {}: bad iteration count", lineno + 2),
                })?;
        let profile_change = if has_change {
            Some(parse(parts[3 + n_mu])?)
        } else {
            None
        };
        ts.push(TsRow {
            t,
            mu,
            residual,
            newton_iters,
            profile_change,
        })?;
    }
    Ok(ts)
}

pub fn save_field(field: &Field, path: &Path) -> Result<(), CoreError> {
    let json = serde_json::to_string(field).map_err(|e| CoreError::Malformed {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    write_atomic(path, json.as_bytes())
}

pub fn load_field(path: &Path) -> Result<Field, CoreError> {
    let text = std::fs::read_to_string(path).map_err(|e| CoreError::io(path, e))?;
    let field: Field = serde_json::from_str(&text).map_err(|e| CoreError::Malformed {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    // Re-validate invariants on load.
    Field::new(field.grid, field.m, field.values)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CoreError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| CoreError::io(path, e))?;
        }
    }
    let mut file = std::fs::File::create(path).map_err(|e| CoreError::io(path, e))?;
    file.write_all(bytes).map_err(|e| CoreError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;

    fn tmpdir() -> std::path::PathBuf {
        let dir = std::env::temp_dir().join(format!("fw-core-io-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }

    #[test]
    fn empty_series_writes_header_only() {
        let path = tmpdir().join("empty.csv");
        let ts = TimeSeries::with_mu_count(2);
        save_timeseries(&ts, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "t,mu_1,mu_2,residual,newton_iters\n");
    }

    #[test]
    fn single_row_round_trips() {
        let path = tmpdir().join("one.csv");
        let mut ts = TimeSeries::with_mu_count(1);
        ts.push(TsRow {
            t: 0.0,
            mu: vec![0.07],
            residual: 1e-12,
            newton_iters: 3,
            profile_change: None,
        })
        .unwrap();
        save_timeseries(&ts, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().count(), 2);
        let back = load_timeseries(&path).unwrap();
        assert_eq!(back, ts);
    }

    #[test]
    fn field_round_trip_is_bit_exact() {
        let path = tmpdir().join("field.json");
        let g = Grid1D::new(-1.0, 1.0, 5).unwrap();
        let f = Field::from_fn_1d(g, 2, |x| vec![x.sin(), (x * 7.3).cos() / 3.0]);
        save_field(&f, &path).unwrap();
        let back = load_field(&path).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn malformed_field_rejected() {
        let path = tmpdir().join("bad.json");
        std::fs::write(&path, "{\"grid\":").unwrap();
        assert!(matches!(
            load_field(&path),
            Err(CoreError::Malformed { .. })
        ));
    }
}
