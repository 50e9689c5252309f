use crate::error::CoreError;

/// One logged step of a freezing run.
#[derive(Debug, Clone, PartialEq)]
pub struct TsRow {
    pub t: f64,
    pub mu: Vec<f64>,
    pub residual: f64,
    pub newton_iters: usize,
    pub profile_change: Option<f64>,
}

/// Time series of algebraic variables and solver diagnostics.
///
/// `mu_names` labels the algebraic columns (`mu_1`, ... for translations,
/// `S12,c1,c2` for SE(2) runs).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimeSeries {
    pub mu_names: Vec<String>,
    pub rows: Vec<TsRow>,
}

impl TimeSeries {
    pub fn new(mu_names: Vec<String>) -> Self {
        TimeSeries {
            mu_names,
            rows: Vec::new(),
        }
    }

    pub fn with_mu_count(n: usize) -> Self {
        Self::new((1..=n).map(|i| format!("mu_{i}")).collect())
    }

    pub fn push(&mut self, row: TsRow) -> Result<(), CoreError> {
        if row.mu.len() != self.mu_names.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "row has {} mu entries, series has {} columns",
                row.mu.len(),
                self.mu_names.len()
            )));
        }
        if !row.residual.is_finite() {
            return Err(CoreError::InvalidValue(
                "time-series residual must be finite".into(),
            ));
        }
        if let Some(last) = self.rows.last() {
            if row.t <= last.t {
                return Err(CoreError::InvalidValue(format!(
                    "time must be strictly increasing: {} after {}",
                    row.t, last.t
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn last_mu(&self) -> Option<&[f64]> {
        self.rows.last().map(|r| r.mu.as_slice())
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strictly_increasing_time_enforced() {
        let mut ts = TimeSeries::with_mu_count(1);
        ts.push(TsRow {
            t: 0.0,
            mu: vec![0.07],
            residual: 1e-12,
            newton_iters: 3,
            profile_change: None,
        })
        .unwrap();
        let bad = TsRow {
            t: 0.0,
            mu: vec![0.07],
            residual: 1e-12,
            newton_iters: 3,
            profile_change: None,
        };
        assert!(ts.push(bad).is_err());
    }

    #[test]
    fn mu_arity_checked() {
        let mut ts = TimeSeries::with_mu_count(2);
        let bad = TsRow {
            t: 0.0,
            mu: vec![0.07],
            residual: 0.0,
            newton_iters: 0,
            profile_change: None,
        };
        assert!(ts.push(bad).is_err());
    }
}
