//! Inner and outer functions on the unit disk.
//!
//! An inner function is stored by its data: finitely many zeros `α_n` and a
//! positive measure `ν` on the circle, so that
//!
//! ```text
//! θ(z) = Π (conj(α)/|α|) (z − α)/(1 − conj(α) z) · exp(−∫ (ζ+z)/(ζ−z) dν(ζ)).
//! ```
//!
//! The Blaschke normalisation is the one written above, so a single zero at
//! `α = 0.5` gives `B(0) = −0.5`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::error::{domain, parameter, validation, Result};
use crate::series::{exp_series, PowerSeries};

/// Default number of middle-thirds levels when expanding a Cantor component.
pub const DEFAULT_CANTOR_DEPTH: u32 = 12;

/// A point `e^{i angle}` of the unit circle, angle kept in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub fn new(angle: f64) -> Self {
        let mut a = angle.rem_euclid(TAU);
        // rem_euclid can round up to exactly TAU for tiny negative inputs
        if a >= TAU {
            a = 0.0;
        }
        CirclePoint(a)
    }

    pub fn angle(self) -> f64 {
        self.0
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub position: CirclePoint,
    pub mass: f64,
}

/// Middle-thirds Cantor measure on an arc, expanded to `2^depth` equal atoms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CantorComponent {
    pub center: CirclePoint,
    pub arc_width: f64,
    pub depth: u32,
    pub total_mass: f64,
}

impl CantorComponent {
    /// Centers of the `2^depth` level-`depth` intervals, each with mass
    /// `total_mass / 2^depth`.
    pub fn expand(&self) -> Vec<Atom> {
        // intervals as (left end, length) relative to the arc's left end
        let mut intervals = vec![(0.0_f64, self.arc_width)];
        for _ in 0..self.depth {
            let mut next = Vec::with_capacity(intervals.len() * 2);
            for &(left, len) in &intervals {
                let third = len / 3.0;
                next.push((left, third));
                next.push((left + 2.0 * third, third));
            }
            intervals = next;
        }
        let start = self.center.angle() - self.arc_width / 2.0;
        let mass = self.total_mass / intervals.len() as f64;
        intervals
            .into_iter()
            .map(|(left, len)| Atom { position: CirclePoint::new(start + left + len / 2.0), mass })
            .collect()
    }
}

/// Positive finite measure on the circle: atoms plus Cantor-type components.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularMeasure {
    atoms: Vec<Atom>,
    cantor: Vec<CantorComponent>,
    expanded: Vec<Atom>,
    points: Vec<Complex64>,
}

impl SingularMeasure {
    pub fn new(atoms: Vec<Atom>, cantor: Vec<CantorComponent>) -> Result<Self> {
        for a in &atoms {
            if !(a.mass > 0.0) || !a.mass.is_finite() {
                return validation(format!("atom mass must be finite and > 0, got {}", a.mass));
            }
        }
        for c in &cantor {
            if !(c.total_mass > 0.0) || !c.total_mass.is_finite() {
                return validation(format!("cantor mass must be finite and > 0, got {}", c.total_mass));
            }
            if !(c.arc_width > 0.0 && c.arc_width <= TAU) {
                return validation(format!("cantor arc width must lie in (0, 2π], got {}", c.arc_width));
            }
            if c.depth == 0 || c.depth > 24 {
                return validation(format!("cantor depth must lie in 1..=24, got {}", c.depth));
            }
        }
        if atoms.is_empty() && cantor.is_empty() {
            return validation("measure has no atoms and no cantor components");
        }
        let mut expanded = atoms.clone();
        for c in &cantor {
            expanded.extend(c.expand());
        }
        let points = expanded.iter().map(|a| a.position.to_complex()).collect();
        Ok(SingularMeasure { atoms, cantor, expanded, points })
    }

    pub fn atom(angle: f64, mass: f64) -> Result<Self> {
        Self::new(vec![Atom { position: CirclePoint::new(angle), mass }], Vec::new())
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn cantor_components(&self) -> &[CantorComponent] {
        &self.cantor
    }

    /// All atoms after Cantor expansion.
    pub fn expanded(&self) -> &[Atom] {
        &self.expanded
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>() + self.cantor.iter().map(|c| c.total_mass).sum::<f64>()
    }

    /// Same support, every mass multiplied by `s > 0`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return parameter(format!("mass scale must be finite and > 0, got {s}"));
        }
        let atoms = self.atoms.iter().map(|a| Atom { mass: a.mass * s, ..*a }).collect();
        let cantor = self.cantor.iter().map(|c| CantorComponent { total_mass: c.total_mass * s, ..*c }).collect();
        Self::new(atoms, cantor)
    }

    /// Herglotz transform without the domain check.
    pub(crate) fn herglotz_unchecked(&self, z: Complex64) -> Complex64 {
        self.expanded
            .iter()
            .zip(&self.points)
            .map(|(a, &zeta)| (zeta + z) / (zeta - z) * a.mass)
            .sum()
    }

    /// Herglotz coefficients `u_0 = ν(T)`, `u_k = 2 Σ_j m_j e^{−ikθ_j}` for `k <= k_max`.
    pub fn herglotz_coefficients(&self, k_max: usize) -> Vec<Complex64> {
        let mut u = vec![Complex64::new(0.0, 0.0); k_max + 1];
        u[0] = Complex64::new(self.total_mass(), 0.0);
        for (k, uk) in u.iter_mut().enumerate().skip(1) {
            let kf = k as f64;
            *uk = self
                .expanded
                .iter()
                .map(|a| Complex64::from_polar(2.0 * a.mass, -(kf * a.position.angle()).rem_euclid(TAU)))
                .sum();
        }
        u
    }
}

/// Finitely many zeros `α` with `0 < |α| < 1`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BlaschkeZeros(Vec<Complex64>);

impl BlaschkeZeros {
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        for a in &zeros {
            let r = a.norm();
            if !(r > 0.0 && r < 1.0) {
                return validation(format!("Blaschke zero {a} must satisfy 0 < |α| < 1"));
            }
        }
        Ok(BlaschkeZeros(zeros))
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InnerFunctionSpec {
    zeros: BlaschkeZeros,
    singular: Option<SingularMeasure>,
}

impl InnerFunctionSpec {
    pub fn new(zeros: BlaschkeZeros, singular: Option<SingularMeasure>) -> Result<Self> {
        if zeros.is_empty() && singular.is_none() {
            return validation("inner function needs zeros or a singular measure");
        }
        Ok(InnerFunctionSpec { zeros, singular })
    }

    pub fn singular(measure: SingularMeasure) -> Self {
        InnerFunctionSpec { zeros: BlaschkeZeros::default(), singular: Some(measure) }
    }

    pub fn zeros(&self) -> &BlaschkeZeros {
        &self.zeros
    }

    pub fn measure(&self) -> Option<&SingularMeasure> {
        self.singular.as_ref()
    }
}

/// Piecewise-constant `log|g|` on the circle.
///
/// Piece `i` covers `[breakpoints[i], breakpoints[i+1])`, the last piece
/// wraps around to `breakpoints[0] + 2π`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLogModulus {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl BoundaryLogModulus {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return validation("need as many breakpoints as values, at least one");
        }
        if breakpoints.iter().any(|b| !(0.0..TAU).contains(b)) {
            return validation("breakpoints must lie in [0, 2π)");
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return validation("breakpoints must be strictly increasing");
        }
        if values.iter().any(|v| !v.is_finite()) {
            return validation("log-modulus values must be finite");
        }
        Ok(BoundaryLogModulus { breakpoints, values })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(vec![0.0], vec![value])
    }

    /// `(start, end, value)` for every piece, with `end` possibly beyond `2π`.
    pub fn pieces(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.breakpoints.len();
        (0..n).map(move |i| {
            let start = self.breakpoints[i];
            let end = if i + 1 < n { self.breakpoints[i + 1] } else { self.breakpoints[0] + TAU };
            (start, end, self.values[i])
        })
    }
}

fn check_disk(z: Complex64) -> Result<()> {
    if !(z.norm() < 1.0) {
        return domain(format!("|z| = {} is not < 1", z.norm()));
    }
    Ok(())
}

/// `Σ m (ζ+z)/(ζ−z)` over the expanded atoms.
pub fn eval_herglotz(measure: &SingularMeasure, z: Complex64) -> Result<Complex64> {
    check_disk(z)?;
    Ok(measure.herglotz_unchecked(z))
}

pub fn eval_singular_inner(measure: &SingularMeasure, z: Complex64) -> Result<Complex64> {
    Ok((-eval_herglotz(measure, z)?).exp())
}

pub fn eval_blaschke(zeros: &BlaschkeZeros, z: Complex64) -> Result<Complex64> {
    check_disk(z)?;
    Ok(blaschke_unchecked(zeros, z))
}

fn blaschke_unchecked(zeros: &BlaschkeZeros, z: Complex64) -> Complex64 {
    zeros
        .zeros()
        .iter()
        .map(|&a| (a.conj() / a.norm()) * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z))
        .product()
}

pub fn eval_inner(spec: &InnerFunctionSpec, z: Complex64) -> Result<Complex64> {
    check_disk(z)?;
    Ok(inner_unchecked(spec, z))
}

pub(crate) fn inner_unchecked(spec: &InnerFunctionSpec, z: Complex64) -> Complex64 {
    let b = blaschke_unchecked(&spec.zeros, z);
    match &spec.singular {
        Some(m) => b * (-m.herglotz_unchecked(z)).exp(),
        None => b,
    }
}

/// Outer function with boundary log-modulus `data`, by trapezoidal quadrature
/// of the Herglotz integral against normalised arc length. Panels are split
/// at the breakpoints so each panel integrates a constant value.
pub fn eval_outer(data: &BoundaryLogModulus, z: Complex64, quadrature_points: usize) -> Result<Complex64> {
    check_disk(z)?;
    if quadrature_points < 64 {
        return parameter(format!("need at least 64 quadrature points, got {quadrature_points}"));
    }
    let mut integral = Complex64::new(0.0, 0.0);
    for (start, end, value) in data.pieces() {
        if value == 0.0 {
            continue;
        }
        let len = end - start;
        let panels = ((quadrature_points as f64 * len / TAU).ceil() as usize).max(2);
        let h = len / panels as f64;
        let kernel = |t: f64| {
            let zeta = Complex64::from_polar(1.0, t);
            (zeta + z) / (zeta - z)
        };
        let mut sum = (kernel(start) + kernel(end)) * 0.5;
        for i in 1..panels {
            sum += kernel(start + i as f64 * h);
        }
        integral += sum * (h / TAU) * value;
    }
    Ok(integral.exp())
}

/// Minimum of `|θ|` over `grid_n` equispaced points of `|z| = r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub value: f64,
    /// Some Blaschke zero lies in `|z| <= r`, so `value` is a circle minimum
    /// only and not the disk minimum.
    pub zeros_inside: bool,
}

pub fn min_modulus_envelope(spec: &InnerFunctionSpec, r: f64, grid_n: usize) -> Result<Envelope> {
    if !(r >= 0.0 && r < 1.0) {
        return domain(format!("envelope radius must lie in [0, 1), got {r}"));
    }
    if grid_n == 0 {
        return parameter("envelope grid needs at least one point");
    }
    let zeros_inside = spec.zeros.zeros().iter().any(|a| a.norm() <= r);
    let value = if r == 0.0 {
        inner_unchecked(spec, Complex64::new(0.0, 0.0)).norm()
    } else {
        (0..grid_n)
            .into_par_iter()
            .map(|j| {
                let z = Complex64::from_polar(r, TAU * j as f64 / grid_n as f64);
                inner_unchecked(spec, z).norm()
            })
            .reduce(|| f64::INFINITY, f64::min)
    };
    Ok(Envelope { value, zeros_inside })
}

/// Taylor coefficients `c_0..c_K` of `exp(−∫ (ζ+z)/(ζ−z) dν)` by series
/// exponentiation of the Herglotz coefficients.
pub fn taylor_singular_inner(measure: &SingularMeasure, k: usize) -> PowerSeries {
    let neg_u: Vec<Complex64> = measure.herglotz_coefficients(k).into_iter().map(|c| -c).collect();
    PowerSeries::new(exp_series(&neg_u))
}

/// Taylor coefficients of a single Blaschke factor up to degree `k`:
/// `c_0 = −|α|`, `c_j = (ᾱ/|α|) ᾱ^{j−1} (1 − |α|²)`.
fn blaschke_factor_series(a: Complex64, k: usize) -> Vec<Complex64> {
    let unit = a.conj() / a.norm();
    let mut out = Vec::with_capacity(k + 1);
    out.push(Complex64::new(-a.norm(), 0.0));
    let mut pow = Complex64::new(1.0, 0.0);
    for _ in 1..=k {
        out.push(unit * pow * (1.0 - a.norm_sqr()));
        pow *= a.conj();
    }
    out
}

/// Taylor coefficients of the full inner function up to degree `k`.
pub fn taylor_inner(spec: &InnerFunctionSpec, k: usize) -> PowerSeries {
    let mut acc = match &spec.singular {
        Some(m) => taylor_singular_inner(m, k),
        None => PowerSeries::constant(Complex64::new(1.0, 0.0)),
    };
    for &a in spec.zeros.zeros() {
        acc = acc.mul_truncated(&PowerSeries::new(blaschke_factor_series(a, k)), k);
    }
    acc.truncated(k)
}

/// Coefficients `c_k ≈ ρ^{−k} (1/N) Σ_j f(ρ ω^j) ω^{−jk}`, `ω = e^{2πi/N}`.
///
/// Aliasing adds `Σ_{m≥1} c_{k+mN} ρ^{mN}` to each returned coefficient.
pub fn taylor_via_fft<F>(evaluator: F, radius: f64, k: usize, samples: usize) -> Result<PowerSeries>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    if !(radius > 0.0 && radius <= 1.0) {
        return parameter(format!("sampling radius must lie in (0, 1], got {radius}"));
    }
    if !samples.is_power_of_two() {
        return parameter(format!("sample count {samples} is not a power of two"));
    }
    if samples < 4 * k || samples < 4 {
        return parameter(format!("need samples >= max(4K, 4); K = {k}, samples = {samples}"));
    }
    let mut buf: Vec<Complex64> = (0..samples)
        .into_par_iter()
        .map(|j| evaluator(Complex64::from_polar(radius, TAU * j as f64 / samples as f64)))
        .collect();
    FftPlanner::new().plan_fft_forward(samples).process(&mut buf);
    let n = samples as f64;
    let coeffs = buf.into_iter().take(k + 1).enumerate().map(|(i, x)| x / (n * radius.powi(i as i32))).collect();
    Ok(PowerSeries::new(coeffs))
}
