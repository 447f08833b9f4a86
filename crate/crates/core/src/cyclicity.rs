//! Polynomials `p_n` with `θ p_n → 1` pointwise and `|θ p_n| w <= 2`.
//!
//! For `r_n = 1 − 1/n` the function `Q_n(z) = 1/θ(r_n z)` is analytic on
//! `|z| < 1/r_n`. Its Taylor polynomial `p_n`, cut where the Cauchy tail on
//! the circle `R_n = (1 + 1/r_n)/2` drops below `1/n`, is within `1/n` of
//! `Q_n` on the closed disk. If the envelope `min_{|z|<=r} |θ|` stays above a
//! decreasing `w`, then `|θ Q_n| w <= 1` and so `|θ p_n| w <= 1 + 1/n`.
//!
//! Whether a given measure has an envelope above `w` is checked on a finite
//! radius grid ([`envelope_dominates`]); [`scale_mass_to_dominate`] shrinks
//! a measure's mass until that grid check passes.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{parameter, validation, Error, Result};
use crate::functions::{min_modulus_envelope, InnerFunctionSpec, SingularMeasure};
use crate::series::{exp_series, Certification, PowerSeries};
use crate::weights::StepMultiplier;

/// `ε` in `w(r) = min(1 − ε, (1 − r)^a)`.
pub const POWER_LOG_EPS: f64 = 1e-3;

/// Envelope comparisons accept `E(r) >= w(r) (1 − slack)` so that exact
/// equality survives rounding in the complex Herglotz sum.
pub const ENVELOPE_RELATIVE_SLACK: f64 = 1e-9;

/// Angles per circle for envelope checks.
pub const ENVELOPE_ANGLES: usize = 4096;

/// Largest `j` of the default radius grid `1 − 2^{−j}`.
pub const DEFAULT_J_MAX: u32 = 10;

/// Smallest mass scale tried is `2^{−MAX_HALVINGS}`.
pub const MAX_HALVINGS: i32 = 40;

/// Hard cap on polynomial degree in [`certified_truncation`].
pub const DEGREE_CAP: usize = 1_000_000;

/// Paper-level growth constant in `sup |θ p_n| w <= 2`.
pub const GROWTH_CONSTANT: f64 = 2.0;

/// Decreasing `w : [0, 1) → (0, 1)` with `w(r) → 0` as `r → 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthWeight {
    /// `exp(−m (1+r)/(1−r))`, the envelope of a single atom of mass `m`.
    ExponentialPoisson { m: f64 },
    /// `min(1 − ε, (1 − r)^a)`
    PowerLog { a: f64 },
    /// Piecewise-linear through `(breakpoints[i], values[i])`; breakpoints run
    /// from 0 to 1 and the value at 1 is 0.
    Tabulated { breakpoints: Vec<f64>, values: Vec<f64> },
    /// `(2 W)^{−1/2}` for a step multiplier `W >= 1`.
    InverseSqrtMultiplier { multiplier: StepMultiplier },
}

impl GrowthWeight {
    pub fn validate(&self) -> Result<()> {
        match self {
            GrowthWeight::ExponentialPoisson { m } if !(*m > 0.0) || !m.is_finite() => {
                validation(format!("ExponentialPoisson needs finite m > 0, got {m}"))
            }
            GrowthWeight::PowerLog { a } if !(*a > 0.0) || !a.is_finite() => {
                validation(format!("PowerLog needs finite a > 0, got {a}"))
            }
            GrowthWeight::Tabulated { breakpoints, values } => {
                if breakpoints.len() < 2 || breakpoints.len() != values.len() {
                    return validation("tabulated weight needs matching breakpoints/values, at least two");
                }
                if breakpoints[0] != 0.0 || *breakpoints.last().unwrap() != 1.0 {
                    return validation("tabulated weight breakpoints must run from 0 to 1");
                }
                if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
                    return validation("tabulated weight breakpoints must be strictly increasing");
                }
                if *values.last().unwrap() != 0.0 {
                    return validation("tabulated weight must reach 0 at r = 1");
                }
                let interior = &values[..values.len() - 1];
                if interior.iter().any(|v| !(*v > 0.0 && *v < 1.0)) {
                    return validation("tabulated weight values must lie in (0, 1) before r = 1");
                }
                if values.windows(2).any(|w| w[1] > w[0]) {
                    return validation("tabulated weight must be nonincreasing");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        match self {
            GrowthWeight::ExponentialPoisson { m } => (-m * (1.0 + r) / (1.0 - r)).exp(),
            GrowthWeight::PowerLog { a } => (1.0 - POWER_LOG_EPS).min((1.0 - r).powf(*a)),
            GrowthWeight::Tabulated { breakpoints, values } => {
                if r >= 1.0 {
                    return 0.0;
                }
                let i = breakpoints.partition_point(|&b| b <= r).clamp(1, breakpoints.len() - 1);
                let (x0, x1) = (breakpoints[i - 1], breakpoints[i]);
                let (y0, y1) = (values[i - 1], values[i]);
                y0 + (y1 - y0) * (r - x0) / (x1 - x0)
            }
            GrowthWeight::InverseSqrtMultiplier { multiplier } => (2.0 * multiplier.value(r)).powf(-0.5),
        }
    }
}

/// `1 − 2^{−j}` for `j = 1..=j_max`, keeping radii `<= r_max`.
pub fn geometric_radii(j_max: u32, r_max: f64) -> Vec<f64> {
    (1..=j_max).map(|j| 1.0 - 2f64.powi(-(j as i32))).filter(|&r| r <= r_max).collect()
}

/// `1 − 2^{−12 i/(count−1)}`, from 0 up to `1 − 2^{−12}`.
pub fn growth_radii(count: usize) -> Vec<f64> {
    if count <= 1 {
        return vec![0.0; count];
    }
    (0..count).map(|i| 1.0 - 2f64.powf(-12.0 * i as f64 / (count - 1) as f64)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominationRow {
    pub r: f64,
    pub envelope: f64,
    pub weight: f64,
    /// `envelope − weight`
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominationReport {
    pub ok: bool,
    pub rows: Vec<DominationRow>,
    pub angles: usize,
}

fn dominates(envelope: f64, weight: f64) -> bool {
    envelope >= weight * (1.0 - ENVELOPE_RELATIVE_SLACK)
}

pub fn envelope_dominates(measure: &SingularMeasure, w: &GrowthWeight, radii: &[f64], angles: usize) -> Result<DominationReport> {
    if radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
        return parameter("envelope radii must lie in (0, 1)");
    }
    if radii.windows(2).any(|p| p[1] < p[0]) {
        return parameter("envelope radii must be sorted");
    }
    let spec = InnerFunctionSpec::singular(measure.clone());
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let envelope = min_modulus_envelope(&spec, r, angles)?.value;
        let weight = w.eval(r);
        rows.push(DominationRow { r, envelope, weight, margin: envelope - weight });
    }
    let ok = rows.iter().all(|row| dominates(row.envelope, row.weight));
    Ok(DominationReport { ok, rows, angles })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledMeasure {
    pub measure: SingularMeasure,
    pub scale: f64,
    pub report: DominationReport,
}

/// Largest `s ∈ {1, 1/2, …, 2^{−40}}` for which `s·shape` dominates `w` on
/// the grid `geometric_radii(j_max, r_max)`.
///
/// Since `|θ_{s ν}| = |θ_ν|^s`, the envelope of every candidate is a power of
/// the shape's envelope, which is computed once per radius. The a-priori
/// bound `|θ(z)| >= exp(−s ν(T) (1+r)/(1−r))` accepts a candidate without
/// looking at the grid values when it already dominates.
pub fn scale_mass_to_dominate(shape: &SingularMeasure, w: &GrowthWeight, r_max: f64, j_max: u32) -> Result<ScaledMeasure> {
    if !(r_max > 0.0 && r_max < 1.0) {
        return parameter(format!("r_max must lie in (0, 1), got {r_max}"));
    }
    w.validate()?;
    let radii = geometric_radii(j_max, r_max);
    let spec = InnerFunctionSpec::singular(shape.clone());
    let base: Vec<f64> = radii
        .iter()
        .map(|&r| min_modulus_envelope(&spec, r, ENVELOPE_ANGLES).map(|e| e.value))
        .collect::<Result<_>>()?;
    let total = shape.total_mass();
    let weights: Vec<f64> = radii.iter().map(|&r| w.eval(r)).collect();
    for i in 0..=MAX_HALVINGS {
        let s = 2f64.powi(-i);
        let a_priori = radii
            .iter()
            .zip(&weights)
            .all(|(&r, &wr)| dominates((-s * total * (1.0 + r) / (1.0 - r)).exp(), wr));
        let on_grid = a_priori || base.iter().zip(&weights).all(|(&e, &wr)| dominates(e.powf(s), wr));
        if on_grid {
            let measure = shape.scaled(s)?;
            let report = envelope_dominates(&measure, w, &radii, ENVELOPE_ANGLES)?;
            return Ok(ScaledMeasure { measure, scale: s, report });
        }
    }
    Err(Error::ConstructionFailed(format!(
        "no mass scale down to 2^-{MAX_HALVINGS} dominates the weight on the radius grid"
    )))
}

pub fn dilation_radius(n: usize) -> f64 {
    1.0 - 1.0 / n as f64
}

/// `R_n = (1 + 1/r_n)/2`, halfway between 1 and the singularity radius of `Q_n`.
pub fn certification_radius(n: usize) -> f64 {
    (1.0 + 1.0 / dilation_radius(n)) / 2.0
}

/// Coefficients of `Q_n(z) = 1/θ(r_n z) = exp(Σ u_k r_n^k z^k)` to degree `k`,
/// certified on `|z| = R_n` by `exp(ν(T)(1 + r_n R_n)/(1 − r_n R_n))`.
pub fn reciprocal_dilation_series(measure: &SingularMeasure, n: usize, k: usize) -> Result<PowerSeries> {
    if n < 2 {
        return parameter(format!("n must be >= 2, got {n}"));
    }
    let r = dilation_radius(n);
    let mut pow = 1.0;
    let v: Vec<Complex64> = measure
        .herglotz_coefficients(k)
        .into_iter()
        .map(|u| {
            let out = u * pow;
            pow *= r;
            out
        })
        .collect();
    let radius = certification_radius(n);
    let rho = r * radius;
    let bound = (measure.total_mass() * (1.0 + rho) / (1.0 - rho)).exp();
    Ok(PowerSeries::new(exp_series(&v)).with_certification(Certification::new(radius, bound)?))
}

/// Smallest `D` with `M R^{−(D+1)}/(1 − 1/R) <= ε`, and that tail value.
pub fn truncation_degree(cert: Certification, eps: f64) -> Result<(usize, f64)> {
    if !(eps > 0.0) {
        return parameter(format!("truncation target must be > 0, got {eps}"));
    }
    let tail = |d: usize| cert.tail_bound(d);
    if tail(0) <= eps {
        return Ok((0, tail(0)));
    }
    let needed = (cert.sup_bound / ((1.0 - 1.0 / cert.radius) * eps)).ln() / cert.radius.ln() - 1.0;
    if !needed.is_finite() || needed > DEGREE_CAP as f64 {
        return Err(Error::TruncationInfeasible { required: needed, cap: DEGREE_CAP });
    }
    let mut d = needed.ceil().max(0.0) as usize;
    while d > 0 && tail(d - 1) <= eps {
        d -= 1;
    }
    while tail(d) > eps {
        d += 1;
    }
    if d > DEGREE_CAP {
        return Err(Error::TruncationInfeasible { required: d as f64, cap: DEGREE_CAP });
    }
    Ok((d, tail(d)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedPolynomial {
    pub polynomial: PowerSeries,
    /// Bound on `sup_{|z|<=1} |f − polynomial|`.
    pub sup_error: f64,
}

/// Taylor truncation of a certified series at the smallest degree whose
/// Cauchy tail is at most `eps`. `source(D)` must return the series to
/// degree at least `D`.
pub fn certified_truncation<F>(cert: Certification, eps: f64, source: F) -> Result<CertifiedPolynomial>
where
    F: FnOnce(usize) -> Result<PowerSeries>,
{
    let (degree, sup_error) = truncation_degree(cert, eps)?;
    let series = source(degree)?;
    if series.degree() < degree {
        return parameter(format!("source returned degree {} < required {degree}", series.degree()));
    }
    Ok(CertifiedPolynomial { polynomial: series.truncated(degree), sup_error })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproximantEntry {
    pub n: usize,
    pub r_n: f64,
    pub p_n: PowerSeries,
    pub sup_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproximantBundle {
    pub measure: SingularMeasure,
    pub weight: GrowthWeight,
    pub entries: Vec<ApproximantEntry>,
}

/// `p_n` for every `n` in `n_list`, each within `1/n` of `1/θ(r_n z)` on the
/// closed disk. The measure must dominate `w` on the default radius grid.
pub fn build_approximants(measure: &SingularMeasure, w: &GrowthWeight, n_list: &[usize]) -> Result<ApproximantBundle> {
    w.validate()?;
    let radii = geometric_radii(DEFAULT_J_MAX, 1.0 - 2f64.powi(-(DEFAULT_J_MAX as i32)));
    let report = envelope_dominates(measure, w, &radii, ENVELOPE_ANGLES)?;
    if !report.ok {
        let worst = report
            .rows
            .iter()
            .find(|row| !dominates(row.envelope, row.weight))
            .map(|row| row.r)
            .unwrap_or(f64::NAN);
        return Err(Error::ConstructionFailed(format!("envelope falls below the weight at r = {worst}")));
    }
    let entries = n_list
        .par_iter()
        .map(|&n| {
            if n < 2 {
                return parameter(format!("n must be >= 2, got {n}"));
            }
            let cert = reciprocal_dilation_series(measure, n, 0)?.certification().expect("certified");
            let eps = 1.0 / n as f64;
            let approx = certified_truncation(cert, eps, |d| reciprocal_dilation_series(measure, n, d))?;
            Ok(ApproximantEntry { n, r_n: dilation_radius(n), p_n: approx.polynomial, sup_error: approx.sup_error })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ApproximantBundle { measure: measure.clone(), weight: w.clone(), entries })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    /// Grid maximum of `|θ(z) p_n(z)| w(|z|)`; 0 for an empty grid.
    pub max: f64,
    pub ok: bool,
}

/// `max |θ p_n| w` over `radii × angles` equispaced points per circle.
pub fn verify_growth_bound(bundle: &ApproximantBundle, radii: &[f64], angles: usize) -> Vec<GrowthRow> {
    let points: Vec<Complex64> = radii
        .iter()
        .flat_map(|&r| (0..angles).map(move |j| Complex64::from_polar(r, TAU * j as f64 / angles as f64)))
        .collect();
    let thetas: Vec<Complex64> = points.par_iter().map(|&z| (-bundle.measure.herglotz_unchecked(z)).exp()).collect();
    let weights: Vec<f64> = points.iter().map(|z| bundle.weight.eval(z.norm())).collect();
    bundle
        .entries
        .iter()
        .map(|e| {
            let max = points
                .par_iter()
                .zip(&thetas)
                .zip(&weights)
                .map(|((&z, &t), &w)| (t * e.p_n.eval(z)).norm() * w)
                .reduce(|| 0.0, f64::max);
            GrowthRow { n: e.n, max, ok: max <= GROWTH_CONSTANT + 1e-9 }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub z: Complex64,
    pub n: usize,
    /// `|θ(z) p_n(z) − 1|`
    pub deviation: f64,
    /// `sup_error + |θ(z)/θ(r_n z) − 1|`
    pub bound: f64,
}

pub fn verify_pointwise_convergence(bundle: &ApproximantBundle, points: &[Complex64]) -> Result<Vec<ConvergenceRow>> {
    let mut rows = Vec::with_capacity(points.len() * bundle.entries.len());
    for &z in points {
        if !(z.norm() < 1.0) {
            return crate::error::domain(format!("sample point {z} is not inside the disk"));
        }
        let theta = (-bundle.measure.herglotz_unchecked(z)).exp();
        for e in &bundle.entries {
            let deviation = (theta * e.p_n.eval(z) - 1.0).norm();
            let dilated = (-bundle.measure.herglotz_unchecked(z * e.r_n)).exp();
            let bound = e.sup_error + (theta / dilated - 1.0).norm();
            rows.push(ConvergenceRow { z, n: e.n, deviation, bound });
        }
    }
    Ok(rows)
}

/// Sampled `max_{|z|=1} |Q_n(z) − p_n(z)|` with `Q_n` evaluated in closed form.
pub fn sampled_truncation_error(measure: &SingularMeasure, entry: &ApproximantEntry, samples: usize) -> f64 {
    (0..samples)
        .into_par_iter()
        .map(|j| {
            let z = Complex64::from_polar(1.0, TAU * j as f64 / samples as f64);
            let q = measure.herglotz_unchecked(z * entry.r_n).exp();
            (q - entry.p_n.eval(z)).norm()
        })
        .reduce(|| 0.0, f64::max)
}
