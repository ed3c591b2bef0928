//! Tabular results shared by the experiments and the serializers.

use serde::Serialize;

use crate::error::{Error, Result};

/// Named column with its unit ("1" for dimensionless).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: &str, unit: &str) -> Self {
        Self { name: name.into(), unit: unit.into() }
    }

    /// Header label `name_unit`, or just `name` when dimensionless.
    pub fn label(&self) -> String {
        if self.unit == "1" {
            self.name.clone()
        } else {
            format!("{}_{}", self.name, self.unit)
        }
    }
}

/// Rows of numbers under a fixed set of columns.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepTable {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

impl SweepTable {
    pub fn new(columns: Vec<Column>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::DimensionMismatch { expected: self.columns.len(), found: row.len() });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Values of the named column, top to bottom.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

/// Time series: a time column plus named observables sampled on it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub series: Vec<(Column, Vec<f64>)>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>) -> Self {
        Self { times, series: Vec::new() }
    }

    pub fn add(&mut self, column: Column, values: Vec<f64>) -> Result<()> {
        if values.len() != self.times.len() {
            return Err(Error::DimensionMismatch { expected: self.times.len(), found: values.len() });
        }
        self.series.push((column, values));
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&[f64]> {
        self.series.iter().find(|(c, _)| c.name == name).map(|(_, v)| v.as_slice())
    }

    /// Flattens into a table whose first column is time in seconds.
    pub fn to_table(&self) -> SweepTable {
        let mut columns = vec![Column::new("t", "s")];
        columns.extend(self.series.iter().map(|(c, _)| c.clone()));
        let rows = self
            .times
            .iter()
            .enumerate()
            .map(|(k, &t)| std::iter::once(t).chain(self.series.iter().map(|(_, v)| v[k])).collect())
            .collect();
        SweepTable { columns, rows }
    }
}

/// max |a − b| divided by the peak-to-peak range of `reference`.
pub fn normalized_deviation(reference: &[f64], other: &[f64]) -> f64 {
    let (lo, hi) = reference
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = hi - lo;
    let dev = reference.iter().zip(other).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if span > 0.0 {
        dev / span
    } else if dev == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_shape_checks() {
        let mut t = SweepTable::new(vec![Column::new("B", "mT"), Column::new("mean", "1")]);
        assert!(t.push(vec![1.0]).is_err());
        t.push(vec![1.0, 0.5]).unwrap();
        assert_eq!(t.column("mean").unwrap(), vec![0.5]);
        assert_eq!(t.columns[0].label(), "B_mT");
        assert_eq!(t.columns[1].label(), "mean");
    }

    #[test]
    fn trajectory_flattening() {
        let mut tr = Trajectory::new(vec![0.0, 1.0]);
        tr.add(Column::new("p", "1"), vec![1.0, 0.0]).unwrap();
        assert!(tr.add(Column::new("q", "1"), vec![1.0]).is_err());
        let table = tr.to_table();
        assert_eq!(table.rows, vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn deviation_metric() {
        assert_eq!(normalized_deviation(&[0.0, 2.0], &[0.0, 2.0]), 0.0);
        assert_eq!(normalized_deviation(&[0.0, 2.0], &[0.1, 2.0]), 0.05);
        assert_eq!(normalized_deviation(&[1.0, 1.0], &[1.0, 2.0]), f64::INFINITY);
    }
}
