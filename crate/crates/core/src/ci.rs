//! Conditional-independence testing: a d-separation oracle, a Fisher-Z test
//! on Gaussian data, and a counting/caching wrapper used by every learner run.

use std::cell::OnceCell;
use std::collections::HashMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::graph::Dag;
use crate::sets;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CiError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("correlation submatrix is numerically singular (rcond {rcond:.3e})")]
    SingularSubmatrix { rcond: f64 },
    #[error("conditioning set of size {cond} needs more than {samples} samples")]
    InsufficientSamples { cond: usize, samples: usize },
}

/// Canonical query `x ⊥ y | s` with `x < y` and `s` sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CiQuery {
    x: usize,
    y: usize,
    s: Vec<usize>,
}

impl CiQuery {
    pub fn new(x: usize, y: usize, s: &[usize]) -> Result<Self, CiError> {
        if x == y {
            return Err(CiError::InvalidQuery(format!("x = y = {x}")));
        }
        let mut s = s.to_vec();
        sets::normalize(&mut s);
        if sets::contains(&s, x) || sets::contains(&s, y) {
            return Err(CiError::InvalidQuery(format!(
                "conditioning set {s:?} contains an endpoint of ({x}, {y})"
            )));
        }
        Ok(CiQuery {
            x: x.min(y),
            y: x.max(y),
            s,
        })
    }

    pub fn x(&self) -> usize {
        self.x
    }

    pub fn y(&self) -> usize {
        self.y
    }

    pub fn s(&self) -> &[usize] {
        &self.s
    }

    fn check_range(&self, n: usize) -> Result<(), CiError> {
        let max = self.s.last().copied().unwrap_or(0).max(self.y);
        if max >= n {
            return Err(CiError::InvalidQuery(format!(
                "vertex {max} out of range for {n} variables"
            )));
        }
        Ok(())
    }
}

/// A source of conditional-independence answers.
pub trait CiTest {
    fn n_vars(&self) -> usize;

    /// `Ok(true)` when `q.x ⊥ q.y | q.s` is accepted.
    fn test(&mut self, q: &CiQuery) -> Result<bool, CiError>;
}

/// Answers queries by d-separation in a known DAG.
#[derive(Debug, Clone, Copy)]
pub struct OracleTester<'a> {
    dag: &'a Dag,
}

impl<'a> OracleTester<'a> {
    pub fn new(dag: &'a Dag) -> Self {
        OracleTester { dag }
    }
}

impl CiTest for OracleTester<'_> {
    fn n_vars(&self) -> usize {
        self.dag.n()
    }

    fn test(&mut self, q: &CiQuery) -> Result<bool, CiError> {
        q.check_range(self.dag.n())?;
        Ok(self.dag.d_separated_unchecked(q.x, q.y, &q.s))
    }
}

/// Samples of jointly Gaussian variables with their correlation matrix.
///
/// Alongside the raw values the dataset keeps every column centered and
/// scaled to unit norm, so that for a set of variables the thin QR factor `R`
/// of those columns satisfies `RᵀR = correlation`. Partial correlations come
/// from a Cholesky solve on the correlation submatrix when that is well
/// conditioned, and from `R` otherwise; `R` has the square root of the
/// correlation matrix's condition number, which keeps near-deterministic
/// variables (deep linear chains) usable.
#[derive(Debug, Clone)]
pub struct GaussianDataset {
    n_vars: usize,
    n_samples: usize,
    values: Vec<f64>,
    unit: Vec<f64>,
    correlation: DMatrix<f64>,
}

impl GaussianDataset {
    /// `columns[j]` holds every sample of variable `j`.
    pub fn from_columns(columns: Vec<Vec<f64>>) -> Result<Self, CiError> {
        let n_vars = columns.len();
        let n_samples = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != n_samples) {
            return Err(CiError::InvalidQuery("columns differ in length".into()));
        }
        let mut values = Vec::with_capacity(n_vars * n_samples);
        let mut unit = Vec::with_capacity(n_vars * n_samples);
        for c in &columns {
            values.extend_from_slice(c);
            let mean = c.iter().sum::<f64>() / n_samples.max(1) as f64;
            let norm = c
                .iter()
                .map(|v| (v - mean) * (v - mean))
                .sum::<f64>()
                .sqrt();
            let scale = if norm > 0.0 { 1.0 / norm } else { 0.0 };
            unit.extend(c.iter().map(|v| (v - mean) * scale));
        }
        let unit_cols = DMatrix::from_column_slice(n_samples, n_vars, &unit);
        let mut correlation = unit_cols.tr_mul(&unit_cols);
        for j in 0..n_vars {
            correlation[(j, j)] = 1.0;
        }
        Ok(GaussianDataset {
            n_vars,
            n_samples,
            values,
            unit,
            correlation,
        })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.values[j * self.n_samples..(j + 1) * self.n_samples]
    }

    pub fn correlation(&self) -> &DMatrix<f64> {
        &self.correlation
    }

    /// Sample partial correlation of `(x, y)` given `s`.
    pub fn partial_correlation(&self, x: usize, y: usize, s: &[usize]) -> Result<f64, CiError> {
        let mut idx = Vec::with_capacity(s.len() + 2);
        idx.push(x);
        idx.push(y);
        idx.extend_from_slice(s);
        let k = idx.len();
        let sub = DMatrix::from_fn(k, k, |i, j| self.correlation[(idx[i], idx[j])]);
        if eigen_rcond(&sub) >= RCOND_TOLERANCE {
            if let Some(chol) = sub.cholesky() {
                let mut e0 = DVector::zeros(k);
                e0[0] = 1.0;
                let mut e1 = DVector::zeros(k);
                e1[1] = 1.0;
                let p0 = chol.solve(&e0);
                let p1 = chol.solve(&e1);
                return Ok(-p0[1] / (p0[0] * p1[1]).sqrt());
            }
        }
        let r = self.factor(&idx)?;
        let rt = r.transpose();
        let column = |i: usize| {
            let mut e = DVector::zeros(k);
            e[i] = 1.0;
            let w = rt.solve_lower_triangular(&e).expect("nonsingular factor");
            r.solve_upper_triangular(&w).expect("nonsingular factor")
        };
        let (p0, p1) = (column(0), column(1));
        Ok(-p0[1] / (p0[0] * p1[1]).sqrt())
    }

    /// Upper-triangular `R` with `RᵀR` equal to the correlation submatrix on
    /// `idx`, or an error when `R` is numerically singular.
    fn factor(&self, idx: &[usize]) -> Result<DMatrix<f64>, CiError> {
        let n = self.n_samples;
        let a = DMatrix::from_fn(n, idx.len(), |i, j| self.unit[idx[j] * n + i]);
        let r = a.qr().r();
        if r.nrows() < idx.len() {
            return Err(CiError::SingularSubmatrix { rcond: 0.0 });
        }
        let sv = r.singular_values();
        let hi = sv.max();
        let rcond = if hi > 0.0 { sv.min() / hi } else { 0.0 };
        if rcond.is_nan() || rcond < RCOND_TOLERANCE {
            return Err(CiError::SingularSubmatrix { rcond });
        }
        Ok(r)
    }

    /// Inverse of the full correlation matrix.
    fn precision(&self) -> Result<DMatrix<f64>, CiError> {
        if eigen_rcond(&self.correlation) >= RCOND_TOLERANCE {
            if let Some(chol) = self.correlation.clone().cholesky() {
                return Ok(chol.inverse());
            }
        }
        let all: Vec<usize> = (0..self.n_vars).collect();
        let r = self.factor(&all)?;
        let r_inv = r
            .solve_upper_triangular(&DMatrix::identity(self.n_vars, self.n_vars))
            .expect("nonsingular factor");
        Ok(&r_inv * r_inv.transpose())
    }
}

const RCOND_TOLERANCE: f64 = 1e-12;
const RHO_CLAMP: f64 = 1e-12;

fn eigen_rcond(m: &DMatrix<f64>) -> f64 {
    let eig = SymmetricEigen::new(m.clone());
    let (lo, hi) = eig
        .eigenvalues
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| {
            (lo.min(v), hi.max(v.abs()))
        });
    if hi > 0.0 {
        lo / hi
    } else {
        0.0
    }
}

/// Fisher-Z test of zero partial correlation at significance `alpha`.
#[derive(Debug)]
pub struct FisherZTester<'a> {
    data: &'a GaussianDataset,
    alpha: f64,
    critical: f64,
    // Inverse of the full correlation matrix, for total-conditioning queries.
    precision: OnceCell<Result<DMatrix<f64>, CiError>>,
}

impl<'a> FisherZTester<'a> {
    pub fn new(data: &'a GaussianDataset, alpha: f64) -> Result<Self, CiError> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(CiError::InvalidQuery(format!(
                "significance level {alpha} outside (0, 1)"
            )));
        }
        let normal = Normal::new(0.0, 1.0).expect("standard normal");
        Ok(FisherZTester {
            data,
            alpha,
            critical: normal.inverse_cdf(1.0 - alpha / 2.0),
            precision: OnceCell::new(),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Test statistic `sqrt(n - |s| - 3) * |atanh(rho)|`.
    pub fn statistic(&self, q: &CiQuery) -> Result<f64, CiError> {
        q.check_range(self.data.n_vars)?;
        let cond = q.s.len();
        if cond + 3 > self.data.n_samples {
            return Err(CiError::InsufficientSamples {
                cond,
                samples: self.data.n_samples,
            });
        }
        let rho = if cond + 2 == self.data.n_vars && cond > 0 {
            let prec = self
                .precision
                .get_or_init(|| self.data.precision())
                .as_ref()
                .map_err(Clone::clone)?;
            -prec[(q.x, q.y)] / (prec[(q.x, q.x)] * prec[(q.y, q.y)]).sqrt()
        } else {
            self.data.partial_correlation(q.x, q.y, &q.s)?
        };
        let rho = rho.clamp(-1.0 + RHO_CLAMP, 1.0 - RHO_CLAMP);
        let z = 0.5 * ((1.0 + rho) / (1.0 - rho)).ln();
        Ok(((self.data.n_samples - cond - 3) as f64).sqrt() * z.abs())
    }
}

impl CiTest for FisherZTester<'_> {
    fn n_vars(&self) -> usize {
        self.data.n_vars
    }

    fn test(&mut self, q: &CiQuery) -> Result<bool, CiError> {
        Ok(self.statistic(q)? <= self.critical)
    }
}

/// Per-run accounting of performed tests.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiStats {
    pub total_tests: u64,
    pub dedup_hits: u64,
    pub conditioning_size_sum: u64,
    pub max_conditioning_size: u64,
}

impl CiStats {
    /// Average conditioning-set size over performed tests.
    pub fn asc(&self) -> f64 {
        if self.total_tests == 0 {
            0.0
        } else {
            self.conditioning_size_sum as f64 / self.total_tests as f64
        }
    }

    /// Counts accumulated since `earlier` was taken. The maximum is kept as is.
    pub fn since(&self, earlier: &CiStats) -> CiStats {
        CiStats {
            total_tests: self.total_tests - earlier.total_tests,
            dedup_hits: self.dedup_hits - earlier.dedup_hits,
            conditioning_size_sum: self.conditioning_size_sum - earlier.conditioning_size_sum,
            max_conditioning_size: self.max_conditioning_size,
        }
    }
}

/// Wraps a tester, counting unique canonical queries and caching answers.
#[derive(Debug)]
pub struct CountingTester<T> {
    inner: T,
    cache: HashMap<CiQuery, Result<bool, CiError>>,
    stats: CiStats,
}

impl<T: CiTest> CountingTester<T> {
    pub fn new(inner: T) -> Self {
        CountingTester {
            inner,
            cache: HashMap::new(),
            stats: CiStats::default(),
        }
    }

    pub fn stats(&self) -> CiStats {
        self.stats
    }

    pub fn inner(&self) -> &T {
        &self.inner
    }

    pub fn into_inner(self) -> T {
        self.inner
    }

    /// Convenience for `test(&CiQuery::new(x, y, s)?)`.
    pub fn independent(&mut self, x: usize, y: usize, s: &[usize]) -> Result<bool, CiError> {
        let q = CiQuery::new(x, y, s)?;
        self.test(&q)
    }
}

impl<T: CiTest> CiTest for CountingTester<T> {
    fn n_vars(&self) -> usize {
        self.inner.n_vars()
    }

    fn test(&mut self, q: &CiQuery) -> Result<bool, CiError> {
        if let Some(hit) = self.cache.get(q) {
            self.stats.dedup_hits += 1;
            return hit.clone();
        }
        let answer = self.inner.test(q);
        if !matches!(answer, Err(CiError::InvalidQuery(_))) {
            let size = q.s.len() as u64;
            self.stats.total_tests += 1;
            self.stats.conditioning_size_sum += size;
            self.stats.max_conditioning_size = self.stats.max_conditioning_size.max(size);
            self.cache.insert(q.clone(), answer.clone());
        }
        answer
    }
}

/// Independence decision with a singular submatrix read as dependence.
pub(crate) fn accepts_independence<T: CiTest>(
    tester: &mut T,
    x: usize,
    y: usize,
    s: &[usize],
) -> Result<bool, CiError> {
    let q = CiQuery::new(x, y, s)?;
    match tester.test(&q) {
        Err(CiError::SingularSubmatrix { .. }) => Ok(false),
        other => other,
    }
}
