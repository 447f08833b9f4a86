//! Coefficient weights `α_n` controlled by a modulus of continuity.
//!
//! If `|f(ζ) − f(rζ)| <= ω(1 − r) ‖f‖_ω` on the circle, Parseval turns this
//! into `Σ (1 − r^n)² |f_n|² <= ω(1 − r)² ‖f‖²_ω`. Choosing radii `r_N` with
//! `ω(1 − r_N) <= 2^{−N}` and cut-offs `K(N)` with `r_N^{2K(N)} < 1/2` makes
//! `(1 − r_N^n)² > (1 − 2^{−1/2})²` for `n >= K(N)`, so the tail beyond
//! `K(N)` carries at most `4^{−N}(1 − 2^{−1/2})^{−2}‖f‖²_ω`. Setting
//! `α_n = 2^N` on `[K(N), K(N+1))` then gives
//! `Σ α_n |f_n|² <= C ‖f‖²_ω` with `C = 1 + (1 − 2^{−1/2})^{−2}`.
//!
//! Note the radial difference has `(1 − r^n)²` in it, not `1 − r^{2n}`; the
//! latter is larger and would not be bounded by the left side.

use std::f64::consts::{E, LN_2, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{parameter, validation, Result};
use crate::series::PowerSeries;
use crate::weights::LambdaSequence;

/// `1 + (1 − 2^{−1/2})^{−2} ≈ 12.657`.
pub fn embedding_constant() -> f64 {
    1.0 + (1.0 - std::f64::consts::FRAC_1_SQRT_2).powi(-2)
}

/// Most angles per circle in [`omega_norm_estimate`].
pub const MAX_BOUNDARY_GRID: usize = 2048;
pub const MIN_BOUNDARY_GRID: usize = 64;

/// Relative width at which the bisection for `1 − r_N` stops.
pub const GAP_TOLERANCE: f64 = 1e-14;

/// Largest `p` for which `(log(e/t))^{−p}/t` is nonincreasing on `(0, 2]`.
pub fn log_inverse_max_power() -> f64 {
    1.0 - LN_2
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModulusOfContinuity {
    /// `t^a`, `0 < a < 1`
    Hoelder { a: f64 },
    /// `(log(e/t))^{−p}` for `t <= 2`, constant beyond.
    LogInverse { p: f64 },
    /// Piecewise-linear through `(breakpoints[i], values[i])` starting at
    /// `(0, 0)`, constant after the last breakpoint.
    Tabulated { breakpoints: Vec<f64>, values: Vec<f64> },
}

impl ModulusOfContinuity {
    /// Continuity, monotonicity, `ω(0) = 0` and `ω(t)/t` nonincreasing.
    /// `ω(t)/t → ∞` holds for both named families; a table is linear near 0
    /// and cannot satisfy it, which is accepted.
    pub fn validate(&self) -> Result<()> {
        match self {
            ModulusOfContinuity::Hoelder { a } if !(*a > 0.0 && *a < 1.0) => {
                validation(format!("Hoelder exponent must lie in (0, 1), got {a}"))
            }
            ModulusOfContinuity::LogInverse { p } if !(*p > 0.0 && *p <= log_inverse_max_power()) => validation(format!(
                "LogInverse power must lie in (0, 1 − ln 2] for ω(t)/t to decrease, got {p}"
            )),
            ModulusOfContinuity::Tabulated { breakpoints, values } => {
                if breakpoints.len() < 2 || breakpoints.len() != values.len() {
                    return validation("tabulated ω needs matching breakpoints/values, at least two");
                }
                if breakpoints[0] != 0.0 || values[0] != 0.0 {
                    return validation("tabulated ω must start at (0, 0)");
                }
                if breakpoints.windows(2).any(|w| !(w[0] < w[1])) || values.windows(2).any(|w| !(w[0] < w[1])) {
                    return validation("tabulated ω must be strictly increasing");
                }
                // ω(t)/t is nonincreasing on a segment iff the segment's line meets
                // the vertical axis at a nonnegative value
                for i in 1..breakpoints.len() - 1 {
                    let slope = (values[i + 1] - values[i]) / (breakpoints[i + 1] - breakpoints[i]);
                    if values[i] - slope * breakpoints[i] < -1e-15 * values[i] {
                        return validation("tabulated ω(t)/t must be nonincreasing");
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            ModulusOfContinuity::Hoelder { a } => t.powf(*a),
            ModulusOfContinuity::LogInverse { p } => (E / t.min(2.0)).ln().powf(-p),
            ModulusOfContinuity::Tabulated { breakpoints, values } => {
                let last = breakpoints.len() - 1;
                if t >= breakpoints[last] {
                    return values[last];
                }
                let i = breakpoints.partition_point(|&b| b <= t).clamp(1, last);
                let (x0, x1) = (breakpoints[i - 1], breakpoints[i]);
                values[i - 1] + (values[i] - values[i - 1]) * (t - x0) / (x1 - x0)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialDifference {
    /// `Σ (1 − r^n)² |f_n|²`
    pub lhs: f64,
    /// Circle quadrature of `|f(ζ) − f(rζ)|²`.
    pub rhs: f64,
}

/// Both sides of `∫_T |f(ζ) − f(rζ)|² dm = Σ (1 − r^n)² |f_n|²`. The
/// quadrature uses a power of two `>= 2(deg + 1)` nodes, which is exact for
/// the trigonometric polynomial being integrated.
pub fn radial_difference_identity(f: &PowerSeries, r: f64) -> Result<RadialDifference> {
    if !(r > 0.0 && r < 1.0) {
        return parameter(format!("r must lie in (0, 1), got {r}"));
    }
    let mut pow: f64 = 1.0;
    let mut lhs = 0.0;
    for c in f.coeffs() {
        lhs += (1.0 - pow).powi(2) * c.norm_sqr();
        pow *= r;
    }
    let nodes = (2 * (f.degree() + 1)).next_power_of_two().max(MIN_BOUNDARY_GRID);
    let sum: f64 = (0..nodes)
        .into_par_iter()
        .map(|j| {
            let z = Complex64::from_polar(1.0, TAU * j as f64 / nodes as f64);
            (f.eval(z) - f.eval(z * r)).norm_sqr()
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    Ok(RadialDifference { lhs, rhs: sum / nodes as f64 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingLevel {
    pub level: u32,
    /// `1 − r_N`
    pub gap: f64,
    pub r: f64,
    /// First index with `r_N^{2n} < 1/2` (raised if needed to stay strictly
    /// above the previous level's).
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkippedLevel {
    pub level: u32,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSequence {
    pub levels: Vec<EmbeddingLevel>,
    /// `α_0, …, α_{n_max}`
    pub alpha: Vec<f64>,
    pub constant: f64,
    pub skipped: Vec<SkippedLevel>,
}

impl EmbeddingSequence {
    pub fn n_max(&self) -> usize {
        self.alpha.len() - 1
    }

    /// `α` as a tabulated `λ`, for feeding into the moment-weight pipeline.
    pub fn lambda_sequence(&self) -> LambdaSequence {
        LambdaSequence::Tabulated { values: self.alpha.clone() }
    }
}

/// Largest `δ ∈ (0, 1]` with `ω(δ) <= target`, to relative width
/// [`GAP_TOLERANCE`]; `None` when no positive double qualifies.
pub fn level_gap(omega: &ModulusOfContinuity, target: f64) -> Option<f64> {
    if omega.eval(1.0) <= target {
        return Some(1.0);
    }
    let mut hi = 1.0;
    let mut lo = 0.5;
    while omega.eval(lo) > target {
        hi = lo;
        lo *= 0.5;
        if lo == 0.0 {
            return None;
        }
    }
    while hi - lo > GAP_TOLERANCE * lo {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if omega.eval(mid) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Minimal integer `K >= 1` with `(1 − gap)^{2K} < 1/2`.
pub fn half_power_index(gap: f64) -> f64 {
    let log_r = (-gap).ln_1p();
    if log_r == f64::NEG_INFINITY {
        return 1.0;
    }
    let below = |k: f64| 2.0 * k * log_r < -LN_2;
    let mut k = (LN_2 / (-2.0 * log_r)).floor().max(0.0) + 1.0;
    if k >= 2f64.powi(52) {
        // integers are no longer exact; this is far beyond any usable n_max
        return k;
    }
    while k > 1.0 && below(k - 1.0) {
        k -= 1.0;
    }
    while !below(k) {
        k += 1.0;
    }
    k
}

/// Levels `N = 1..=n_levels` and `α_0..α_{n_max}`.
pub fn embedding_sequence(omega: &ModulusOfContinuity, n_levels: u32, n_max: usize) -> Result<EmbeddingSequence> {
    omega.validate()?;
    let mut levels: Vec<EmbeddingLevel> = Vec::new();
    let mut skipped = Vec::new();
    for level in 1..=n_levels {
        let Some(gap) = level_gap(omega, 2f64.powi(-(level as i32))) else {
            skipped.push(SkippedLevel { level, reason: "ω does not reach 2^-N at any positive gap".into() });
            continue;
        };
        let mut k = half_power_index(gap);
        if let Some(prev) = levels.last() {
            k = k.max(prev.k as f64 + 1.0);
        }
        if k > n_max as f64 {
            skipped.push(SkippedLevel { level, reason: format!("K(N) = {k} exceeds n_max = {n_max}") });
            continue;
        }
        levels.push(EmbeddingLevel { level, gap, r: 1.0 - gap, k: k as usize });
    }
    let mut alpha = vec![1.0; n_max + 1];
    for lv in &levels {
        let v = 2f64.powi(lv.level as i32);
        alpha[lv.k..].iter_mut().for_each(|a| *a = v);
    }
    Ok(EmbeddingSequence { levels, alpha, constant: embedding_constant(), skipped })
}

/// `max_T |f| + max_{ζ≠ξ} |f(ζ) − f(ξ)|/ω(|ζ − ξ|)` over `grid_n` equispaced
/// boundary points. A lower bound for `‖f‖_ω`.
pub fn omega_norm_estimate(f: &PowerSeries, omega: &ModulusOfContinuity, grid_n: usize) -> Result<f64> {
    if !(2..=MAX_BOUNDARY_GRID).contains(&grid_n) {
        return parameter(format!("boundary grid must have 2..={MAX_BOUNDARY_GRID} points, got {grid_n}"));
    }
    let values: Vec<Complex64> = (0..grid_n)
        .map(|j| f.eval(Complex64::from_polar(1.0, TAU * j as f64 / grid_n as f64)))
        .collect();
    let sup = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    // pairs at the same index offset share the chord length 2 sin(π d/n)
    let quotient = (1..grid_n)
        .into_par_iter()
        .map(|d| {
            let w = omega.eval(2.0 * (PI * d as f64 / grid_n as f64).sin());
            let diff = (0..grid_n).map(|j| (values[j] - values[(j + d) % grid_n]).norm()).fold(0.0, f64::max);
            if diff == 0.0 {
                0.0
            } else {
                diff / w
            }
        })
        .reduce(|| 0.0, f64::max);
    Ok(sup + quotient)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbeddingCheck {
    /// `Σ α_n |f_n|²`
    pub lhs: f64,
    /// `C · estimate²`
    pub rhs: f64,
    pub estimate: f64,
    pub grid_n: usize,
    pub ok: bool,
}

/// Relative change below which a grid doubling counts as stable.
pub const REFINEMENT_TOLERANCE: f64 = 0.01;

/// `Σ α_n |f_n|² <= C ‖f‖²_ω`, with `‖f‖_ω` estimated on a boundary grid that
/// starts at 64 points and doubles until two successive doublings change the
/// estimate by less than 1% (or the grid reaches 2048 points).
pub fn verify_embedding(f: &PowerSeries, omega: &ModulusOfContinuity, seq: &EmbeddingSequence) -> Result<EmbeddingCheck> {
    if f.degree() > seq.n_max() {
        return parameter(format!("degree {} exceeds the sequence length n_max = {}", f.degree(), seq.n_max()));
    }
    let lhs: f64 = f.coeffs().iter().zip(&seq.alpha).map(|(c, a)| a * c.norm_sqr()).sum();
    let mut grid_n = MIN_BOUNDARY_GRID;
    let mut estimate = omega_norm_estimate(f, omega, grid_n)?;
    let mut stable = 0;
    while grid_n < MAX_BOUNDARY_GRID && stable < 2 {
        grid_n *= 2;
        let next = omega_norm_estimate(f, omega, grid_n)?;
        let change = if next == 0.0 { 0.0 } else { (next - estimate).abs() / next };
        stable = if change < REFINEMENT_TOLERANCE { stable + 1 } else { 0 };
        estimate = next;
    }
    let rhs = seq.constant * estimate * estimate;
    Ok(EmbeddingCheck { lhs, rhs, estimate, grid_n, ok: lhs <= rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_value() {
        assert!((embedding_constant() - 12.656854249492380).abs() < 1e-12);
    }

    #[test]
    fn radial_difference_examples() {
        let rd = radial_difference_identity(&PowerSeries::from_real(&[0.0, 1.0]), 0.5).unwrap();
        assert!((rd.lhs - 0.25).abs() < 1e-15 && (rd.rhs - 0.25).abs() < 1e-15);
        let rd = radial_difference_identity(&PowerSeries::from_real(&[3.0]), 0.7).unwrap();
        assert_eq!(rd.lhs, 0.0);
        assert!(rd.rhs.abs() < 1e-28);
        let f = PowerSeries::from_real(&[0.0, 1.0, 1.0]);
        let rd = radial_difference_identity(&f, 0.9).unwrap();
        assert!((rd.lhs - 0.0461).abs() < 1e-15);
        // independent dense quadrature
        let n = 4096;
        let dense: f64 = (0..n)
            .map(|j| {
                let z = Complex64::from_polar(1.0, TAU * j as f64 / n as f64);
                (f.eval(z) - f.eval(z * 0.9)).norm_sqr()
            })
            .sum::<f64>()
            / n as f64;
        assert!((rd.rhs - dense).abs() < 1e-12);
        assert!(radial_difference_identity(&f, 1.0).is_err());
    }

    #[test]
    fn printed_form_is_not_the_identity() {
        // Σ (1 − r^{2n})|f_n|² differs from the radial difference for z
        let f = PowerSeries::from_real(&[0.0, 1.0]);
        let rd = radial_difference_identity(&f, 0.5).unwrap();
        assert!((rd.rhs - (1.0 - 0.25)).abs() > 0.4);
    }

    #[test]
    fn hoelder_levels_match_closed_form() {
        let omega = ModulusOfContinuity::Hoelder { a: 0.5 };
        let seq = embedding_sequence(&omega, 6, 10_000).unwrap();
        for lv in &seq.levels {
            let exact = 4f64.powi(-(lv.level as i32));
            assert!((lv.gap - exact).abs() <= 2e-14 * exact, "{lv:?}");
        }
        assert_eq!(seq.levels[0].r, 0.75);
        assert_eq!(seq.levels[0].k, 2);
        assert_eq!(&seq.alpha[..3], &[1.0, 1.0, 2.0]);
        // integer scan for K(N)
        for lv in &seq.levels {
            let scan = (1..).find(|&k| lv.r.powi(2 * k) < 0.5).unwrap() as usize;
            assert_eq!(lv.k, scan);
        }
        assert!(seq.levels.windows(2).all(|w| w[0].k < w[1].k && w[0].r < w[1].r));
        assert!(seq.alpha.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn zero_levels_give_unit_sequence() {
        let seq = embedding_sequence(&ModulusOfContinuity::Hoelder { a: 0.25 }, 0, 20).unwrap();
        assert!(seq.alpha.iter().all(|&a| a == 1.0));
        assert_eq!(seq.alpha.len(), 21);
    }

    #[test]
    fn levels_beyond_n_max_are_skipped() {
        let seq = embedding_sequence(&ModulusOfContinuity::Hoelder { a: 0.5 }, 20, 100).unwrap();
        assert!(!seq.skipped.is_empty());
        assert!(seq.levels.iter().all(|lv| lv.k <= 100));
    }

    #[test]
    fn log_inverse_bisection() {
        let omega = ModulusOfContinuity::LogInverse { p: 0.3 };
        omega.validate().unwrap();
        assert!(ModulusOfContinuity::LogInverse { p: 0.5 }.validate().is_err());
        for n in 1..6 {
            let target = 2f64.powi(-n);
            let gap = level_gap(&omega, target).unwrap();
            // closed form: δ = e · exp(−target^{−1/p})
            let exact = E * (-target.powf(-1.0 / 0.3)).exp();
            if exact < 1.0 && exact > 1e-300 {
                assert!((gap - exact).abs() <= 1e-13 * exact, "n={n} {gap} {exact}");
            }
        }
    }

    #[test]
    fn half_power_index_edge_cases() {
        assert_eq!(half_power_index(1.0), 1.0);
        assert_eq!(half_power_index(0.25), 2.0);
        let gap = 1e-9;
        let k = half_power_index(gap);
        assert!(2.0 * k * (-gap).ln_1p() < -LN_2);
        assert!(2.0 * (k - 1.0) * (-gap).ln_1p() >= -LN_2);
        assert!(half_power_index(1e-40) > 1e39);
    }

    #[test]
    fn omega_norm_examples() {
        let h = ModulusOfContinuity::Hoelder { a: 0.5 };
        let c = omega_norm_estimate(&PowerSeries::constant(Complex64::new(0.0, 2.0)), &h, 64).unwrap();
        assert!((c - 2.0).abs() < 1e-15);
        let z = omega_norm_estimate(&PowerSeries::monomial(1), &h, 256).unwrap();
        assert!((z - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        // a → 1: chord^{1−a} peaks at 2^{1−a}
        let near = omega_norm_estimate(&PowerSeries::monomial(1), &ModulusOfContinuity::Hoelder { a: 0.99 }, 256).unwrap();
        assert!((near - (1.0 + 2f64.powf(0.01))).abs() < 1e-12);
        assert!(omega_norm_estimate(&PowerSeries::monomial(1), &h, 4096).is_err());
    }

    #[test]
    fn embedding_examples() {
        let omega = ModulusOfContinuity::Hoelder { a: 0.5 };
        let seq = embedding_sequence(&omega, 12, 200).unwrap();
        let one = verify_embedding(&PowerSeries::constant(Complex64::new(1.0, 0.0)), &omega, &seq).unwrap();
        assert_eq!(one.lhs, 1.0);
        assert!(one.ok);
        for m in 0..=200 {
            let check = verify_embedding(&PowerSeries::monomial(m), &omega, &seq).unwrap();
            assert_eq!(check.lhs, seq.alpha[m]);
            assert!(check.ok, "m={m} {check:?}");
        }
        assert!(verify_embedding(&PowerSeries::monomial(201), &omega, &seq).is_err());
    }

    #[test]
    fn tabulated_modulus() {
        let omega = ModulusOfContinuity::Tabulated { breakpoints: vec![0.0, 0.5, 2.0], values: vec![0.0, 0.5, 0.8] };
        omega.validate().unwrap();
        assert!((omega.eval(0.25) - 0.25).abs() < 1e-15);
        assert_eq!(omega.eval(3.0), 0.8);
        let convex = ModulusOfContinuity::Tabulated { breakpoints: vec![0.0, 0.5, 1.0], values: vec![0.0, 0.1, 0.9] };
        assert!(convex.validate().is_err());
    }
}
