use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::RawDocument;
use crate::linalg::Matrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum YearScaling {
    /// Zero mean, unit sample standard deviation.
    #[default]
    CenterScale,
    Raw,
}

/// Covariate rows `X_d = [1, journal dummies, year]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrevalenceDesign {
    pub x: Matrix,
    pub column_names: Vec<String>,
}

impl PrevalenceDesign {
    pub fn new(x: Matrix, column_names: Vec<String>) -> Result<Self> {
        if column_names.len() != x.cols() {
            return Err(Error::Dimension("one name per design column required".into()));
        }
        if (0..x.rows()).any(|d| x[(d, 0)] != 1.0) {
            return Err(Error::Validation("first design column must be all ones".into()));
        }
        if !x.is_finite() {
            return Err(Error::Validation("design matrix has non-finite entries".into()));
        }
        Ok(Self { x, column_names })
    }

    pub fn n_docs(&self) -> usize {
        self.x.rows()
    }

    pub fn n_covariates(&self) -> usize {
        self.x.cols()
    }

    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let p = self.x.cols();
        let mut data = Vec::with_capacity(indices.len() * p);
        for &i in indices {
            data.extend_from_slice(self.x.row(i));
        }
        Self {
            x: Matrix::from_row_major(indices.len(), p, data).expect("consistent shape"),
            column_names: self.column_names.clone(),
        }
    }
}

pub const INTERCEPT: &str = "(intercept)";
pub const YEAR: &str = "year";

/// Builds the design for `retained` ids (row order follows `retained`).
/// The lexicographically smallest journal is the reference level.
pub fn build_design(
    docs: &[RawDocument],
    retained: &[String],
    scaling: YearScaling,
) -> Result<PrevalenceDesign> {
    let by_id: BTreeMap<&str, &RawDocument> = docs.iter().map(|d| (d.id.as_str(), d)).collect();
    let rows: Vec<&RawDocument> = retained
        .iter()
        .map(|id| {
            by_id
                .get(id.as_str())
                .copied()
                .ok_or_else(|| Error::Validation(alloc::format!("no record for id {id:?}")))
        })
        .collect::<Result<_>>()?;
    if rows.is_empty() {
        return Err(Error::Config("design needs at least one journal level".into()));
    }
    if rows.len() < 2 {
        return Err(Error::Config("a single document cannot identify prevalence coefficients".into()));
    }
    let levels: Vec<&str> =
        rows.iter().map(|d| d.journal.as_str()).collect::<BTreeSet<_>>().into_iter().collect();
    let dummies = &levels[1..];

    let years: Vec<f64> = rows.iter().map(|d| f64::from(d.year)).collect();
    let scaled = match scaling {
        YearScaling::Raw => years,
        YearScaling::CenterScale => standardize(&years),
    };

    let p = 2 + dummies.len();
    let mut x = Matrix::zeros(rows.len(), p);
    for (d, doc) in rows.iter().enumerate() {
        x[(d, 0)] = 1.0;
        if let Some(j) = dummies.iter().position(|l| *l == doc.journal) {
            x[(d, 1 + j)] = 1.0;
        }
        x[(d, p - 1)] = scaled[d];
    }
    let mut names = Vec::with_capacity(p);
    names.push(String::from(INTERCEPT));
    names.extend(dummies.iter().map(|l| alloc::format!("journal:{l}")));
    names.push(String::from(YEAR));
    PrevalenceDesign::new(x, names)
}

/// Centers and divides by the sample standard deviation; a constant column
/// is only centered.
fn standardize(values: &[f64]) -> Vec<f64> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    let sd = libm::sqrt(ss / (n - 1.0));
    values.iter().map(|v| if sd > 0.0 { (v - mean) / sd } else { v - mean }).collect()
}
