//! Ordinary least squares, residual sum of squares and misclassification rates.

use nalgebra::{DMatrix, DVector};

use crate::dataset::TrainingSet;
use crate::{linalg, Error, Result};

/// Regression design matrix whose first column is the intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    x: DMatrix<f64>,
}

impl DesignMatrix {
    /// Prepends a column of ones to `features` (N×p).
    pub fn with_intercept(features: &DMatrix<f64>) -> Self {
        let n = features.nrows();
        let x = DMatrix::from_fn(n, features.ncols() + 1, |r, c| {
            if c == 0 {
                1.0
            } else {
                features[(r, c - 1)]
            }
        });
        Self { x }
    }

    /// Wraps a matrix that already carries the intercept column.
    pub fn from_matrix(x: DMatrix<f64>) -> Result<Self> {
        if x.ncols() == 0 || x.column(0).iter().any(|&v| v != 1.0) {
            return Err(Error::Validation(
                "first design column must be all ones".into(),
            ));
        }
        Ok(Self { x })
    }

    /// Intercept plus every power `x_j^d`, `1 ≤ d ≤ degree`, of each feature.
    pub fn polynomial(features: &DMatrix<f64>, degree: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::Domain("polynomial degree must be at least 1".into()));
        }
        let p = features.ncols();
        let expanded = DMatrix::from_fn(features.nrows(), p * degree as usize, |r, c| {
            features[(r, c % p)].powi((c / p) as i32 + 1)
        });
        Ok(Self::with_intercept(&expanded))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn n_samples(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_coefficients(&self) -> usize {
        self.x.ncols()
    }
}

/// Solves the normal equations `XᵀX β = Xᵀy`.
pub fn ols_fit(design: &DesignMatrix, y: &[f64]) -> Result<DVector<f64>> {
    let x = design.matrix();
    if y.len() != x.nrows() {
        return Err(Error::Shape(format!(
            "{} responses for {} rows",
            y.len(),
            x.nrows()
        )));
    }
    if x.nrows() < x.ncols() {
        return Err(Error::RankDeficient(format!(
            "{} samples cannot determine {} coefficients",
            x.nrows(),
            x.ncols()
        )));
    }
    let gram = x.transpose() * x;
    let rhs = x.transpose() * DVector::from_column_slice(y);
    linalg::solve(&gram, &rhs).map_err(|e| match e {
        Error::Singular(m) => Error::RankDeficient(format!("XᵀX is singular: {m}")),
        other => other,
    })
}

/// `(y − Xβ)ᵀ(y − Xβ)`.
pub fn rss(design: &DesignMatrix, y: &[f64], beta: &DVector<f64>) -> Result<f64> {
    let x = design.matrix();
    if y.len() != x.nrows() || beta.len() != x.ncols() {
        return Err(Error::Shape(format!(
            "X is {}×{}, y has {} entries, β has {}",
            x.nrows(),
            x.ncols(),
            y.len(),
            beta.len()
        )));
    }
    let r = DVector::from_column_slice(y) - x * beta;
    Ok(r.norm_squared())
}

/// Fraction of positions where `predictions` and `labels` differ.
pub fn empirical_error<T: PartialEq>(predictions: &[T], labels: &[T]) -> Result<f64> {
    if predictions.is_empty() {
        return Err(Error::Domain("no predictions to score".into()));
    }
    if predictions.len() != labels.len() {
        return Err(Error::Shape(format!(
            "{} predictions for {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    let wrong = predictions
        .iter()
        .zip(labels)
        .filter(|(p, l)| p != l)
        .count();
    Ok(wrong as f64 / labels.len() as f64)
}

/// Misclassification rate of `predictor` on a held-out set. Disjointness
/// from the training data is the caller's responsibility.
pub fn holdout_error<F>(mut predictor: F, test: &TrainingSet) -> Result<f64>
where
    F: FnMut(&[f64]) -> Result<i8>,
{
    let predictions = test
        .rows()
        .map(|x| predictor(&x))
        .collect::<Result<Vec<_>>>()?;
    empirical_error(&predictions, test.labels())
}

/// Training and held-out misclassification rates. The holdout rate is an
/// estimate of the generalization error, which is not observable directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorReport {
    pub empirical_error: f64,
    pub holdout_error: Option<f64>,
}

impl ErrorReport {
    pub fn new(empirical_error: f64, holdout_error: Option<f64>) -> Result<Self> {
        let ok = |v: f64| (0.0..=1.0).contains(&v);
        if !ok(empirical_error) || !holdout_error.is_none_or(ok) {
            return Err(Error::Domain("error rates must lie in [0, 1]".into()));
        }
        Ok(Self {
            empirical_error,
            holdout_error,
        })
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn line_design() -> DesignMatrix {
        DesignMatrix::with_intercept(&DMatrix::from_column_slice(3, 1, &[0.0, 1.0, 2.0]))
    }

    #[test]
    fn fits_a_line() {
        let beta = ols_fit(&line_design(), &[0.0, 1.0, 2.0]).unwrap();
        assert!(beta[0].abs() < 1e-14 && (beta[1] - 1.0).abs() < 1e-14);
        assert!(rss(&line_design(), &[0.0, 1.0, 2.0], &beta).unwrap() < 1e-28);
    }

    #[test]
    fn rejects_collinear_columns() {
        let f = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 2.0, 2.0, 3.0, 3.0]);
        let err = ols_fit(&DesignMatrix::with_intercept(&f), &[1.0, 2.0, 3.0]).unwrap_err();
        assert!(matches!(err, Error::RankDeficient(_)));
        let err = ols_fit(&line_design(), &[1.0]).unwrap_err();
        assert!(matches!(err, Error::Shape(_)));
    }

    #[test]
    fn single_residual() {
        let d = DesignMatrix::from_matrix(DMatrix::from_element(1, 1, 1.0)).unwrap();
        assert_eq!(
            rss(&d, &[1.0], &DVector::from_element(1, 0.0)).unwrap(),
            1.0
        );
        assert!(DesignMatrix::from_matrix(DMatrix::from_element(1, 1, 2.0)).is_err());
    }

    #[test]
    fn polynomial_features() {
        let d =
            DesignMatrix::polynomial(&DMatrix::from_column_slice(4, 1, &[-1.0, 0.0, 1.0, 2.0]), 2)
                .unwrap();
        let y: Vec<f64> = [-1.0f64, 0.0, 1.0, 2.0]
            .iter()
            .map(|x| 1.0 - x + 3.0 * x * x)
            .collect();
        let beta = ols_fit(&d, &y).unwrap();
        for (b, c) in beta.iter().zip([1.0, -1.0, 3.0]) {
            assert!((b - c).abs() < 1e-12);
        }
    }

    #[test]
    fn error_rates() {
        assert_eq!(empirical_error(&[1, -1], &[1, -1]).unwrap(), 0.0);
        assert_eq!(empirical_error(&[1, -1], &[-1, 1]).unwrap(), 1.0);
        assert_eq!(
            empirical_error(&[1, 1, 1, 1], &[1, 1, 1, -1]).unwrap(),
            0.25
        );
        assert!(matches!(
            empirical_error::<i8>(&[], &[]),
            Err(Error::Domain(_))
        ));

        let set = crate::dataset::toy_set();
        let truth = |x: &[f64]| Ok(if x[0] > 0.0 { 1 } else { -1 });
        assert_eq!(holdout_error(truth, &set).unwrap(), 0.0);
        assert_eq!(holdout_error(|_| Ok(1), &set).unwrap(), 0.5);
        assert!(ErrorReport::new(0.5, Some(1.5)).is_err());
        assert!(ErrorReport::new(0.0, None).is_ok());
    }

    fn random_problem(seed: u64) -> (DesignMatrix, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, p) = (rng.random_range(5..30), rng.random_range(1..5));
        let f = DMatrix::from_fn(n, p, |_, _| rng.random_range(-2.0..2.0));
        let y = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        (DesignMatrix::with_intercept(&f), y)
    }

    proptest! {
        #[test]
        fn normal_equation_residual_is_orthogonal(seed in any::<u64>()) {
            let (d, y) = random_problem(seed);
            let beta = ols_fit(&d, &y).unwrap();
            let yv = DVector::from_column_slice(&y);
            let xt = d.matrix().transpose();
            let lhs = (&xt * (&yv - d.matrix() * &beta)).norm();
            prop_assert!(lhs <= 1e-8 * (&xt * &yv).norm().max(1e-300));
        }

        #[test]
        fn ols_minimizes_rss(seed in any::<u64>()) {
            let (d, y) = random_problem(seed);
            let beta = ols_fit(&d, &y).unwrap();
            let best = rss(&d, &y, &beta).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            for _ in 0..100 {
                let delta = DVector::from_fn(beta.len(), |_, _| rng.random_range(-1.0..1.0));
                let delta = delta.normalize() * 0.1;
                prop_assert!(rss(&d, &y, &(&beta + delta)).unwrap() >= best);
            }
        }

        #[test]
        fn recovers_planted_coefficients(seed in any::<u64>()) {
            let (d, _) = random_problem(seed);
            let mut rng = ChaCha8Rng::seed_from_u64(!seed);
            let c = DVector::from_fn(d.n_coefficients(), |_, _| rng.random_range(-3.0..3.0));
            let y: Vec<f64> = (d.matrix() * &c).iter().copied().collect();
            let beta = ols_fit(&d, &y).unwrap();
            prop_assert!((&beta - &c).amax() < 1e-9);
        }

        #[test]
        fn error_rate_ignores_order(labels in prop::collection::vec(prop::bool::ANY, 1..40), shift in 0usize..40) {
            let truth: Vec<i8> = labels.iter().map(|&b| if b { 1 } else { -1 }).collect();
            let pred: Vec<i8> = truth.iter().enumerate().map(|(i, &y)| if i % 3 == 0 { -y } else { y }).collect();
            let base = empirical_error(&pred, &truth).unwrap();
            let k = shift % truth.len();
            let mut t2 = truth.clone();
            let mut p2 = pred.clone();
            t2.rotate_left(k);
            p2.rotate_left(k);
            t2.reverse();
            p2.reverse();
            prop_assert_eq!(empirical_error(&p2, &t2).unwrap(), base);
        }
    }
}
