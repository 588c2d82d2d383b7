//! Forward-difference calculus and Newton-Maclaurin series.
//!
//! A sequence `y(n)` is expanded about a base index `m` as
//!
//! ```text
//! y(n) = sum_k binom(n - m, k) * D^k y(m),      D y(n) = y(n+1) - y(n)
//! ```
//!
//! Differences are taken by repeated subtraction rather than the alternating
//! binomial formula so the cancellation error stays visible. On noisy data
//! anything beyond order ~20 is numerically meaningless; the tests stay at
//! order 10 or below.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values a sequence may carry: real or complex.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Default
{
}

impl Scalar for f64 {}
impl Scalar for Complex64 {}

/// A finite sequence `y(0), y(1), ..., y(N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSequence<T> {
    values: Vec<T>,
}

impl<T: Scalar> SampledSequence<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParams(
                "sampled sequence must be non-empty".into(),
            ));
        }
        Ok(Self { values })
    }

    /// Samples `f(0), ..., f(last)`.
    pub fn from_fn(last: usize, f: impl Fn(usize) -> T) -> Self {
        Self {
            values: (0..=last).map(f).collect(),
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn last_index(&self) -> usize {
        self.values.len() - 1
    }

    fn window(&self, n: usize, k: usize) -> Result<&[T]> {
        let end =
            n.checked_add(k)
                .filter(|&e| e <= self.last_index())
                .ok_or(Error::IndexOutOfRange {
                    index: (n + k) as i64,
                    len: self.values.len(),
                })?;
        Ok(&self.values[n..=end])
    }
}

/// `D^k y(n)` by k-fold repeated subtraction.
pub fn forward_difference<T: Scalar>(seq: &SampledSequence<T>, k: usize, n: usize) -> Result<T> {
    let mut work = seq.window(n, k)?.to_vec();
    for order in 0..k {
        for i in 0..(k - order) {
            work[i] = work[i + 1] - work[i];
        }
    }
    Ok(work[0])
}

/// All differences `D^0 y(m), ..., D^order y(m)` from one difference table.
pub fn difference_table<T: Scalar>(
    seq: &SampledSequence<T>,
    m: usize,
    order: usize,
) -> Result<Vec<T>> {
    difference_table_of(seq.window(m, order)?)
}

fn difference_table_of<T: Scalar>(window: &[T]) -> Result<Vec<T>> {
    let order = window.len() - 1;
    let mut work = window.to_vec();
    let mut out = Vec::with_capacity(order + 1);
    out.push(work[0]);
    for level in 0..order {
        for i in 0..(order - level) {
            work[i] = work[i + 1] - work[i];
        }
        out.push(work[0]);
    }
    Ok(out)
}

/// Generalized binomial coefficient `x (x-1) ... (x-k+1) / k!` for integer `x`.
///
/// Exact (integer arithmetic) while the intermediate values fit in `i128`.
pub fn binomial_coefficient(x: i64, k: u32) -> f64 {
    let mut acc: i128 = 1;
    for j in 0..k as i128 {
        let factor = x as i128 - j;
        if factor == 0 {
            return 0.0;
        }
        match acc.checked_mul(factor) {
            // C(x, j) * (x - j) is always divisible by j + 1
            Some(p) => acc = p / (j + 1),
            None => return binomial_float(x, k),
        }
    }
    acc as f64
}

fn binomial_float(x: i64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (x as f64 - j as f64) / (j as f64 + 1.0))
}

/// `sum_{k=0}^{order} binom(n - m, k) D^k y(m)`.
pub fn newton_partial_sum<T: Scalar>(
    seq: &SampledSequence<T>,
    m: usize,
    n: i64,
    order: usize,
) -> Result<T> {
    let diffs = difference_table(seq, m, order)?;
    Ok(weighted_sum(&diffs, n - m as i64))
}

fn weighted_sum<T: Scalar>(coeffs: &[T], offset: i64) -> T {
    coeffs
        .iter()
        .enumerate()
        .fold(T::default(), |acc, (k, &c)| {
            acc + c * binomial_coefficient(offset, k as u32)
        })
}

type CoefficientFn = dyn Fn(usize, i64) -> Complex64 + Send + Sync;

/// A two-scale expansion `y(n, m) = sum_{k<=K} Y_k(m) binom(n - m, k)`.
///
/// The coefficient functions `Y_k(m)` may carry the small parameter
/// implicitly; only the truncation order `K` is explicit.
pub struct TwoScaleExpansion {
    order: usize,
    coefficients: Box<CoefficientFn>,
}

impl TwoScaleExpansion {
    /// Expansion with explicitly given coefficient functions `(k, m) -> Y_k(m)`.
    pub fn from_coefficients(
        order: usize,
        coefficients: impl Fn(usize, i64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            order,
            coefficients: Box::new(coefficients),
        }
    }

    /// Expansion of a family of local solutions `(n, m) -> y_loc(n; m)`:
    /// `Y_k(m)` is the k-th forward difference in `n` of `y_loc(., m)` at `n = m`.
    pub fn from_local_solution(
        order: usize,
        local: impl Fn(i64, i64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self::from_coefficients(order, move |k, m| {
            let window: Vec<Complex64> = (0..=k as i64).map(|j| local(m + j, m)).collect();
            difference_table_of(&window)
                .map(|d| d[k])
                .unwrap_or_default()
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coefficient(&self, k: usize, m: i64) -> Complex64 {
        (self.coefficients)(k, m)
    }

    pub fn evaluate(&self, n: i64, m: i64) -> Complex64 {
        let coeffs: Vec<Complex64> = (0..=self.order).map(|k| self.coefficient(k, m)).collect();
        weighted_sum(&coeffs, n - m)
    }
}

/// `|y(n, m+1) - y(n, m)|`; zero for an exact expansion.
pub fn check_envelope_constancy(exp: &TwoScaleExpansion, n: i64, m: i64) -> f64 {
    (exp.evaluate(n, m + 1) - exp.evaluate(n, m)).norm()
}
