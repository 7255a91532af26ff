//! Labelled training data and its CSV representation.
//!
//! Files have a header row; the feature columns come first and the last
//! column is named `y` and holds labels in {−1, +1}.

use std::path::Path;

use nalgebra::DMatrix;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingSet {
    features: DMatrix<f64>,
    labels: Vec<i8>,
}

impl TrainingSet {
    pub fn new(features: DMatrix<f64>, labels: Vec<i8>) -> Result<Self> {
        if features.nrows() != labels.len() {
            return Err(Error::Shape(format!(
                "{} feature rows but {} labels",
                features.nrows(),
                labels.len()
            )));
        }
        if labels.len() < 2 {
            return Err(Error::Domain(
                "a training set needs at least two examples".into(),
            ));
        }
        if features.ncols() == 0 {
            return Err(Error::Domain(
                "a training set needs at least one feature".into(),
            ));
        }
        if let Some(i) = labels.iter().position(|&y| y != 1 && y != -1) {
            return Err(Error::Domain(format!(
                "label {} of example {i} is not ±1",
                labels[i]
            )));
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite feature value".into()));
        }
        Ok(Self { features, labels })
    }

    /// Builds a set from feature rows.
    pub fn from_rows(rows: &[Vec<f64>], labels: Vec<i8>) -> Result<Self> {
        let p = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != p) {
            return Err(Error::Shape("feature rows have different lengths".into()));
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(DMatrix::from_row_slice(rows.len(), p, &flat), labels)
    }

    pub fn features(&self) -> &DMatrix<f64> {
        &self.features
    }

    pub fn labels(&self) -> &[i8] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.features.row(i).iter().copied().collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.len()).map(|i| self.row(i))
    }

    /// Index pairs of identical feature rows that carry different labels.
    pub fn conflicting_duplicates(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.labels[i] != self.labels[j] && self.features.row(i) == self.features.row(j)
                {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Per-column `(min, max)` of the features.
    pub fn feature_ranges(&self) -> Vec<(f64, f64)> {
        self.features
            .column_iter()
            .map(|c| (c.min(), c.max()))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for j in 0..self.n_features() {
            out.push_str(&format!("x{},", j + 1));
        }
        out.push_str("y\n");
        for i in 0..self.len() {
            for v in self.features.row(i).iter() {
                out.push_str(&format!("{v},"));
            }
            out.push_str(&format!("{}\n", self.labels[i]));
        }
        out
    }
}

/// Parses CSV text. Error line numbers are 1-based and count the header.
pub fn parse_csv(text: &str) -> Result<TrainingSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Data {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    if header.len() < 2 {
        return Err(Error::Data {
            line: 1,
            message: "expected at least one feature column and a label column".into(),
        });
    }
    if header.get(header.len() - 1) != Some("y") {
        return Err(Error::Data {
            line: 1,
            message: "last column must be named y".into(),
        });
    }
    let p = header.len() - 1;
    let mut flat = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Data {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        for j in 0..p {
            let field = &record[j];
            let v: f64 = field.parse().map_err(|_| Error::Data {
                line,
                message: format!("feature {:?} is not a number", field),
            })?;
            if !v.is_finite() {
                return Err(Error::Data {
                    line,
                    message: "non-finite feature".into(),
                });
            }
            flat.push(v);
        }
        let label = match record[p].parse::<f64>() {
            Ok(1.0) => 1,
            Ok(-1.0) => -1,
            _ => {
                return Err(Error::Data {
                    line,
                    message: format!("label {:?} is not -1 or +1", &record[p]),
                })
            }
        };
        labels.push(label);
    }
    let n = labels.len();
    TrainingSet::new(DMatrix::from_row_slice(n, p, &flat), labels).map_err(|e| Error::Data {
        line: n + 1,
        message: e.to_string(),
    })
}

pub fn read_csv(path: &Path) -> Result<TrainingSet> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Data {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    parse_csv(&text)
}

/// The four-point linearly separable set shipped in `data/toy4.csv`.
pub fn toy_set() -> TrainingSet {
    parse_csv(include_str!("../data/toy4.csv")).expect("bundled data set is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_bundled_set() {
        let set = toy_set();
        assert_eq!(set.len(), 4);
        assert_eq!(set.n_features(), 2);
        assert_eq!(set.labels(), &[1, 1, -1, -1]);
        assert_eq!(set.row(2), vec![-0.8, -0.9]);
        assert!(set.conflicting_duplicates().is_empty());
    }

    #[test]
    fn round_trips_through_csv() {
        let set = toy_set();
        assert_eq!(parse_csv(&set.to_csv()).unwrap(), set);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_csv("a,y\n1,1\n2,0\n").unwrap_err();
        assert_eq!(
            err,
            Error::Data {
                line: 3,
                message: "label \"0\" is not -1 or +1".into()
            }
        );
        let err = parse_csv("a,y\n1,1\nfoo,-1\n").unwrap_err();
        assert!(matches!(err, Error::Data { line: 3, .. }));
        let err = parse_csv("a,label\n1,1\n").unwrap_err();
        assert!(matches!(err, Error::Data { line: 1, .. }));
        let err = parse_csv("a,b,y\n1,1\n").unwrap_err();
        assert!(matches!(err, Error::Data { line: 2, .. }));
        let err = parse_csv("a,y\n1,1\n").unwrap_err();
        assert!(matches!(err, Error::Data { line: 2, .. }));
    }

    #[test]
    fn flags_conflicting_duplicates() {
        let set = parse_csv("a,y\n1,1\n1,-1\n2,1\n").unwrap();
        assert_eq!(set.conflicting_duplicates(), vec![(0, 1)]);
    }
}
