//! Radial weights with prescribed moments, step multipliers, and weighted
//! Bergman norms.
//!
//! [`moment_weight`] builds a piecewise-constant `Λ` on `[0, 1)` whose odd
//! monomial moments `∫ x^{2N+1} Λ(x) dx` dominate a decreasing sequence `μ_N`.
//! The pieces are the intervals `I_n = [1 − 1/n, 1 − 1/(n+1))` for
//! `n = 2..=n_max`; the interval for `n = 1` is skipped because
//! `inf_{x ∈ (0,1)} x^3 = 0`. Starting at `n = 2` the constant
//! `α = min_{n≥2} (1 − 1/n)^{2n+1} = 1/32` is positive, and running the
//! telescoping sum on `μ̃_n = μ_{n−2}` keeps every moment above `μ_N` up to the
//! dropped tail `μ̃_{n_max+1}`.
//!
//! [`multiplier_weight`] is the classical step function that makes an
//! integrable `g` stay integrable after multiplication by something that
//! blows up at 1.

use crate::cyclicity::GrowthWeight;
use crate::error::{parameter, validation, Result};
use crate::series::PowerSeries;

/// `min_{n≥2} (1 − 1/n)^{2n+1}`, attained at `n = 2`.
pub const MOMENT_ALPHA: f64 = 1.0 / 32.0;

pub const DEFAULT_N_MAX: usize = 400;

/// Largest level count for [`multiplier_weight`]; keeps `2^n` and `2·2^n` finite.
pub const MAX_LEVELS: usize = 1000;

/// Increasing positive sequence `λ_n → ∞`.
#[derive(Debug, Clone, PartialEq)]
pub enum LambdaSequence {
    /// `λ_n = (n+1)^a`
    Power { a: f64 },
    /// `λ_n = log(n + 2)`
    Logarithmic,
    Tabulated { values: Vec<f64> },
}

impl LambdaSequence {
    pub fn validate(&self) -> Result<()> {
        match self {
            LambdaSequence::Power { a } if !(*a > 0.0) || !a.is_finite() => {
                validation(format!("power exponent must be finite and > 0, got {a}"))
            }
            LambdaSequence::Tabulated { values } => {
                if values.len() < 2 {
                    return validation("tabulated λ needs at least two values");
                }
                if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
                    return validation("tabulated λ must be finite and positive");
                }
                // step sequences (as produced by the embedding construction) are allowed
                if values.windows(2).any(|w| w[1] < w[0]) || values[values.len() - 1] <= values[0] {
                    return validation("tabulated λ must be nondecreasing and not constant");
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn value(&self, n: usize) -> Result<f64> {
        match self {
            LambdaSequence::Power { a } => Ok(((n + 1) as f64).powf(*a)),
            LambdaSequence::Logarithmic => Ok(((n + 2) as f64).ln()),
            LambdaSequence::Tabulated { values } => values
                .get(n)
                .copied()
                .ok_or_else(|| crate::Error::Parameter(format!("λ_{n} is beyond the table of {}", values.len()))),
        }
    }

    /// `1/λ_0, …, 1/λ_{len−1}`.
    pub fn reciprocals(&self, len: usize) -> Result<Vec<f64>> {
        self.validate()?;
        (0..len).map(|n| self.value(n).map(|v| 1.0 / v)).collect()
    }
}

/// Metadata left behind when an infinite construction is cut at `n_max`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation {
    pub n_max: usize,
    /// Value `μ̃_{n_max+1}` dropped from the telescoping sum.
    pub residual: f64,
}

/// Piecewise-constant nonnegative function on `[0, 1)`.
///
/// Piece `m` is `[breakpoints[m], breakpoints[m+1])` with value `values[m]`;
/// the weight is zero on `[breakpoints.last(), 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialWeight {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    truncation: Option<Truncation>,
}

impl RadialWeight {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() != values.len() + 1 || values.is_empty() {
            return validation("need one more breakpoint than values and at least one piece");
        }
        if breakpoints[0] != 0.0 {
            return validation("first breakpoint must be 0");
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return validation("breakpoints must be strictly increasing");
        }
        if *breakpoints.last().unwrap() > 1.0 {
            return validation("last breakpoint must be <= 1");
        }
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return validation("weight values must be finite and nonnegative");
        }
        Ok(RadialWeight { breakpoints, values, truncation: None })
    }

    /// `Λ ≡ c` on `[0, 1)`.
    pub fn constant(c: f64) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![c])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn truncation(&self) -> Option<Truncation> {
        self.truncation
    }

    /// `(left, right, value)` per piece.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints.windows(2).zip(&self.values).map(|(w, &v)| (w[0], w[1], v))
    }

    pub fn value_at(&self, x: f64) -> f64 {
        if !(x >= 0.0) || x >= *self.breakpoints.last().unwrap() {
            return 0.0;
        }
        let m = self.breakpoints.partition_point(|&b| b <= x) - 1;
        self.values[m]
    }

    pub fn total(&self) -> f64 {
        self.pieces().map(|(a, b, v)| v * (b - a)).sum()
    }

    /// `∫_{1−gap}^{1} Λ`, with the cut point given by its distance to 1 so
    /// that cuts very close to 1 keep full precision.
    pub fn tail_integral_from_gap(&self, gap: f64) -> f64 {
        let mut acc = 0.0;
        for (a, b, v) in self.pieces() {
            let (ga, gb) = (1.0 - a, 1.0 - b);
            if gb >= gap {
                continue;
            }
            let width = if ga <= gap { ga - gb } else { gap - gb };
            acc += v * width;
        }
        acc
    }
}

/// `Λ = Σ_{n=2}^{n_max} c_n 1_{I_n}` with `c_n = α^{-1} |I_n|^{-1} (μ̃_n − μ̃_{n+1})`
/// and `μ̃_n = μ_{n−2}`.
///
/// `mu` must hold `μ_0..μ_{n_max−1}` (extra entries are ignored), be finite,
/// nonnegative, nonincreasing, and actually decrease somewhere.
pub fn moment_weight(mu: &[f64], n_max: usize) -> Result<RadialWeight> {
    if n_max < 2 {
        return parameter(format!("n_max must be >= 2, got {n_max}"));
    }
    if mu.len() < n_max {
        return parameter(format!("need μ_0..μ_{} ({} values), got {}", n_max - 1, n_max, mu.len()));
    }
    let mu = &mu[..n_max];
    if mu.iter().any(|m| !(*m >= 0.0) || !m.is_finite()) {
        return validation("μ must be finite and nonnegative");
    }
    if !(mu[0] > 0.0) {
        return validation("μ_0 must be positive");
    }
    if mu.windows(2).any(|w| w[1] > w[0]) {
        return validation("μ must be nonincreasing");
    }
    if mu[n_max - 1] == mu[0] {
        return validation("μ is constant on the requested range and cannot tend to 0");
    }
    let shifted = |n: usize| mu[n - 2];
    let mut breakpoints = vec![0.0, 0.5];
    let mut values = vec![0.0];
    for n in 2..=n_max {
        let nf = n as f64;
        breakpoints.push(1.0 - 1.0 / (nf + 1.0));
        let next = if n < n_max { shifted(n + 1) } else { mu[n_max - 1] };
        let width = 1.0 / (nf * (nf + 1.0));
        values.push((shifted(n) - next) / (MOMENT_ALPHA * width));
    }
    let mut w = RadialWeight::new(breakpoints, values)?;
    w.truncation = Some(Truncation { n_max, residual: mu[n_max - 1] });
    Ok(w)
}

/// `∫_0^1 x^{2N+1} Λ(x) dx`, summed in closed form over the pieces.
pub fn monomial_moment(weight: &RadialWeight, n: usize) -> f64 {
    let p = (2 * n + 2) as f64;
    weight
        .pieces()
        .filter(|(_, _, v)| *v != 0.0)
        .map(|(a, b, v)| v * (b.powf(p) - a.powf(p)) / p)
        .sum()
}

/// Moments `0..=k_max`.
pub fn monomial_moments(weight: &RadialWeight, k_max: usize) -> Vec<f64> {
    (0..=k_max).map(|k| monomial_moment(weight, k)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentRow {
    pub n: usize,
    pub moment: f64,
    pub target: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub rows: Vec<MomentRow>,
    /// Dropped tail of the construction; margins down to `−residual` pass.
    pub residual: f64,
    pub all_pass: bool,
}

pub fn verify_moments(weight: &RadialWeight, mu: &[f64], n_check: usize) -> Result<MomentReport> {
    if let Some(t) = weight.truncation {
        if n_check + 2 > t.n_max {
            return parameter(format!("can only check N <= n_max − 2 = {}", t.n_max.saturating_sub(2)));
        }
    }
    if mu.len() <= n_check {
        return parameter(format!("need μ_0..μ_{n_check}"));
    }
    let residual = weight.truncation.map_or(0.0, |t| t.residual);
    let rows: Vec<MomentRow> = (0..=n_check)
        .map(|n| {
            let moment = monomial_moment(weight, n);
            MomentRow { n, moment, target: mu[n], margin: moment - mu[n] }
        })
        .collect();
    let all_pass = rows.iter().all(|r| r.margin >= -residual);
    Ok(MomentReport { rows, residual, all_pass })
}

/// `W = 1` on `[0, t_1)`, `W = 2^n` on `[t_n, t_{n+1})`, `W = 2^M` on `[t_M, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepMultiplier {
    /// `1 − t_n`, nonincreasing.
    gaps: Vec<f64>,
    /// `∫_{t_n}^1 g` for the weight the multiplier was built from.
    tails: Vec<f64>,
    total: f64,
}

impl StepMultiplier {
    pub fn levels(&self) -> usize {
        self.gaps.len()
    }

    pub fn thresholds(&self) -> Vec<f64> {
        self.gaps.iter().map(|g| 1.0 - g).collect()
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn tails(&self) -> &[f64] {
        &self.tails
    }

    /// Exponent `n` with `W(t) = 2^n`.
    pub fn level_at(&self, t: f64) -> usize {
        let gap = 1.0 - t;
        self.gaps.iter().take_while(|&&g| gap <= g).count()
    }

    pub fn value(&self, t: f64) -> f64 {
        2f64.powi(self.level_at(t) as i32)
    }

    /// `∫_{t_n}^{t_{n+1}} W g` for `n = 0..=M` (with `t_0 = 0`, `t_{M+1} = 1`).
    pub fn level_integrals(&self, g: &RadialWeight) -> Vec<f64> {
        let mut tails = Vec::with_capacity(self.gaps.len() + 2);
        tails.push(g.tail_integral_from_gap(1.0));
        tails.extend(self.gaps.iter().map(|&gap| g.tail_integral_from_gap(gap)));
        tails.push(0.0);
        tails
            .windows(2)
            .enumerate()
            .map(|(n, w)| 2f64.powi(n as i32) * (w[0] - w[1]).max(0.0))
            .collect()
    }

    /// `∫_0^1 W g`, exact for piecewise-constant `g`.
    pub fn weighted_integral(&self, g: &RadialWeight) -> f64 {
        self.level_integrals(g).iter().sum()
    }

    /// Total mass of the weight the multiplier was built from.
    pub fn base_total(&self) -> f64 {
        self.total
    }
}

/// Thresholds `t_n = inf{t : ∫_t^1 g <= 4^{−n}}` for `n = 1..=levels`.
pub fn multiplier_weight(g: &RadialWeight, levels: usize) -> Result<StepMultiplier> {
    if levels == 0 || levels > MAX_LEVELS {
        return parameter(format!("levels must lie in 1..={MAX_LEVELS}, got {levels}"));
    }
    let pieces: Vec<(f64, f64, f64)> = g.pieces().collect();
    // suffix[m] = ∫_{x_m}^1 g over pieces m..
    let mut suffix = vec![0.0; pieces.len() + 1];
    for m in (0..pieces.len()).rev() {
        let (a, b, v) = pieces[m];
        suffix[m] = suffix[m + 1] + v * (b - a);
    }
    let total = suffix[0];
    let mut gaps = Vec::with_capacity(levels);
    let mut tails = Vec::with_capacity(levels);
    for n in 1..=levels {
        let target = 0.25f64.powi(n as i32);
        if total <= target {
            gaps.push(1.0);
            tails.push(total);
            continue;
        }
        // last piece whose left-end tail exceeds the target
        let m = (0..pieces.len()).rev().find(|&m| suffix[m] > target).expect("total exceeds target");
        let (_, b, v) = pieces[m];
        let gap = (1.0 - b) + (target - suffix[m + 1]) / v;
        gaps.push(gap);
        tails.push(target);
    }
    Ok(StepMultiplier { gaps, tails, total })
}

/// `w = (2W)^{−1/2}` with `W = multiplier_weight(Λ)`: decreasing, below 1,
/// tending to 0, and `∫ Λ/w² = 2 ∫ W Λ < ∞`.
pub fn decay_weight(lambda_weight: &RadialWeight, levels: usize) -> Result<GrowthWeight> {
    let multiplier = multiplier_weight(lambda_weight, levels)?;
    Ok(GrowthWeight::InverseSqrtMultiplier { multiplier })
}

/// `∫_D |g|² Λ(|z|) dA = Σ_k |g_k|² · 2 ∫_0^1 r^{2k+1} Λ(r) dr` (normalised area).
pub fn weighted_bergman_norm_sq(g: &PowerSeries, weight: &RadialWeight) -> f64 {
    g.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm_sqr() != 0.0)
        .map(|(k, c)| c.norm_sqr() * 2.0 * monomial_moment(weight, k))
        .sum()
}

/// Same sum with precomputed moments (entries beyond `moments.len()` are dropped).
pub fn weighted_bergman_norm_sq_with(g: &PowerSeries, moments: &[f64]) -> f64 {
    g.coeffs().iter().zip(moments).map(|(c, m)| c.norm_sqr() * 2.0 * m).sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaNormCheck {
    /// `Σ |f_k|²/λ_k`
    pub lhs: f64,
    /// `½ ∫_D |f|² Λ dA`
    pub rhs: f64,
    pub ok: bool,
}

/// Checks `Σ |f_k|²/λ_k <= ½ ∫_D |f|² Λ(|z|) dA` for `Λ = moment_weight(1/λ)`.
pub fn verify_lambdanorm(f: &PowerSeries, lambda: &LambdaSequence, weight: &RadialWeight) -> Result<LambdaNormCheck> {
    let n_max = weight
        .truncation
        .ok_or_else(|| crate::Error::Parameter("weight was not built by moment_weight".into()))?
        .n_max;
    if f.degree() + 2 > n_max {
        return parameter(format!("degree {} exceeds the moment guarantee n_max − 2 = {}", f.degree(), n_max - 2));
    }
    let mut lhs = 0.0;
    for (k, c) in f.coeffs().iter().enumerate() {
        lhs += c.norm_sqr() / lambda.value(k)?;
    }
    let rhs = 0.5 * weighted_bergman_norm_sq(f, weight);
    Ok(LambdaNormCheck { lhs, rhs, ok: lhs <= rhs * (1.0 + 1e-12) })
}
