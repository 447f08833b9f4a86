//! Finite complex power series with optional analyticity certificate.

use num_complex::Complex64;

use crate::error::{parameter, Result};

/// The represented function is analytic on `|z| <= radius` and bounded there
/// by `sup_bound`. Cauchy estimates then give `|c_k| <= sup_bound * radius^-k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certification {
    pub radius: f64,
    pub sup_bound: f64,
}

impl Certification {
    pub fn new(radius: f64, sup_bound: f64) -> Result<Self> {
        if !(radius > 1.0) || !radius.is_finite() {
            return parameter(format!("certification radius must be finite and > 1, got {radius}"));
        }
        if !(sup_bound >= 0.0) {
            return parameter(format!("certification bound must be >= 0, got {sup_bound}"));
        }
        Ok(Certification { radius, sup_bound })
    }

    /// Cauchy bound on `sup_{|z|<=1} |Σ_{k>degree} c_k z^k|`.
    pub fn tail_bound(&self, degree: usize) -> f64 {
        let r = self.radius;
        self.sup_bound * r.powf(-((degree + 1) as f64)) / (1.0 - 1.0 / r)
    }
}

/// Coefficients `c_0..c_D` of `Σ c_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
    certification: Option<Certification>,
}

impl PowerSeries {
    /// An empty coefficient vector is read as the zero series.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        PowerSeries { coeffs, certification: None }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `z^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); k + 1];
        c[k] = Complex64::new(1.0, 0.0);
        Self::new(c)
    }

    pub fn with_certification(mut self, cert: Certification) -> Self {
        self.certification = Some(cert);
        self
    }

    pub fn certification(&self) -> Option<Certification> {
        self.certification
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Index of the last stored coefficient (not trimmed of zeros).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient `k`, zero beyond the stored range.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// First `degree + 1` coefficients. The certificate is kept since it
    /// describes the underlying function, not the stored prefix.
    pub fn truncated(&self, degree: usize) -> PowerSeries {
        let mut coeffs: Vec<Complex64> = self.coeffs.iter().take(degree + 1).copied().collect();
        coeffs.resize(degree + 1, Complex64::new(0.0, 0.0));
        PowerSeries { coeffs, certification: self.certification }
    }

    /// Product truncated at `max_degree`.
    pub fn mul_truncated(&self, other: &PowerSeries, max_degree: usize) -> PowerSeries {
        PowerSeries::new(convolve_truncated(&self.coeffs, &other.coeffs, max_degree))
    }

    pub fn scale(&self, s: Complex64) -> PowerSeries {
        PowerSeries::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Coefficientwise difference; the shorter series is zero-padded.
    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        PowerSeries::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let n = self.coeffs.len().max(other.coeffs.len());
        PowerSeries::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    /// `Σ |c_k|^2`, the squared Hardy-space norm of the stored polynomial.
    pub fn h2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ |c_k|`, an upper bound for the sup-norm on the closed disk.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }
}

pub(crate) fn convolve_truncated(a: &[Complex64], b: &[Complex64], max_degree: usize) -> Vec<Complex64> {
    let len = (a.len() + b.len() - 1).min(max_degree + 1);
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        if ai == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficients of `exp(s)` from those of `s`, truncated at `s.len() - 1`:
/// `e_0 = exp(s_0)`, `k e_k = Σ_{j=1..k} j s_j e_{k-j}`.
pub(crate) fn exp_series(s: &[Complex64]) -> Vec<Complex64> {
    let n = s.len();
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return e;
    }
    e[0] = s[0].exp();
    // js[j] = j * s_j
    let js: Vec<Complex64> = s.iter().enumerate().map(|(j, &c)| c * j as f64).collect();
    for k in 1..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k {
            acc += js[j] * e[k - j];
        }
        e[k] = acc / k as f64;
    }
    e
}
