use std::path::Path;

use serde::Deserialize;

use super::{InstanceError, ScoreMatrix};

pub const HISTOGRAM_BINS: usize = 32;

/// Shape signature of one fragment: 32 non-negative bin heights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    bins: [i64; HISTOGRAM_BINS],
}

impl Histogram {
    pub fn new(bins: &[i64]) -> Result<Self, InstanceError> {
        if bins.len() != HISTOGRAM_BINS {
            return Err(InstanceError::Histogram(format!(
                "expected {HISTOGRAM_BINS} bins, got {}",
                bins.len()
            )));
        }
        if let Some((k, b)) = bins.iter().enumerate().find(|(_, &b)| b < 0) {
            return Err(InstanceError::Histogram(format!(
                "bin {k} is negative ({b})"
            )));
        }
        let mut arr = [0; HISTOGRAM_BINS];
        arr.copy_from_slice(bins);
        Ok(Self { bins: arr })
    }

    pub fn bins(&self) -> &[i64; HISTOGRAM_BINS] {
        &self.bins
    }
}

/// Manhattan distance between two histograms, clamped to at least 1 so that
/// a real pair never scores like the dummy.
pub fn manhattan_score(a: &Histogram, b: &Histogram) -> i64 {
    let d: i64 = a.bins.iter().zip(&b.bins).map(|(x, y)| (x - y).abs()).sum();
    d.max(1)
}

/// Score matrix with `query.len()` rows and `target.len() + 1` columns.
pub fn build_score_matrix(
    query: &[Histogram],
    target: &[Histogram],
) -> Result<ScoreMatrix, InstanceError> {
    if query.is_empty() || target.is_empty() {
        return Err(InstanceError::Histogram(
            "fragment lists must be non-empty".into(),
        ));
    }
    let rows: Vec<Vec<i64>> = query
        .iter()
        .map(|q| target.iter().map(|t| manhattan_score(q, t)).collect())
        .collect();
    ScoreMatrix::from_real_rows(&rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum FragmentId {
    Number(i64),
    Name(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FragmentRecord {
    #[allow(dead_code)]
    id: FragmentId,
    bins: Vec<i64>,
}

/// Reads a histogram file: a JSON list of `{"id": .., "bins": [32 ints]}`.
/// Fragment order in the file defines the fragment index.
pub fn load_histograms(path: &Path) -> Result<Vec<Histogram>, InstanceError> {
    let text = std::fs::read_to_string(path)?;
    let records: Vec<FragmentRecord> = serde_json::from_str(&text)?;
    records
        .iter()
        .enumerate()
        .map(|(i, r)| {
            Histogram::new(&r.bins)
                .map_err(|e| InstanceError::Histogram(format!("fragment {i}: {e}")))
        })
        .collect()
}
