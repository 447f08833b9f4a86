//! Model space `K_θ = H² ⊖ θH²` in coefficient space, and the pipeline that
//! shows why an element of `K_θ` cannot have `Σ λ_k |f_k|² < ∞`.
//!
//! Elements are kept in split form `f = a − θ b` alongside their truncated
//! Taylor series. Pairings against `θH²` then use `⟨θ b, θ y⟩ = ⟨b, y⟩`
//! exactly instead of pairing two truncated series: the coefficients of a
//! singular inner function decay only like `k^{−3/4}`, so truncated pairings
//! miss `1 − Σ_{k<=K} |θ_k|²`, which is about `10^{−2}` at `K = 1024`.
//!
//! The pipeline follows the non-membership argument. With `g_n = θ p_n − 1`
//! and `f ∈ K_θ`, `f(0) = −⟨f, g_n⟩`; Cauchy–Schwarz against the moment
//! weight gives `|f(0)|² <= (Σ λ_k |f_k|²) · B_n / 2` where
//! `B_n = ∫ |g_n|² Λ dA`. As `B_n → 0` the weighted sum must blow up.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::cyclicity::{
    build_approximants, growth_radii, scale_mass_to_dominate, verify_growth_bound, ApproximantBundle, GrowthRow,
    GrowthWeight, DEFAULT_J_MAX,
};
use crate::error::{domain, parameter, Result};
use crate::functions::{taylor_singular_inner, SingularMeasure};
use crate::series::{convolve_truncated, PowerSeries};
use crate::weights::{decay_weight, moment_weight, monomial_moments, weighted_bergman_norm_sq_with, LambdaSequence, RadialWeight, DEFAULT_N_MAX};

/// `Σ_k f_k conj(g_k)`, the `H²` inner product of two finite series.
pub fn pairing(f: &PowerSeries, g: &PowerSeries) -> Complex64 {
    f.coeffs().iter().zip(g.coeffs()).map(|(a, b)| a * b.conj()).sum()
}

/// `sqrt(1 − Σ_{k<=m} |θ_k|²)`: the `H²` norm of the tail of an inner
/// function beyond degree `m`, padded for rounding in the sum.
pub fn inner_tail_norm(theta: &PowerSeries, m: usize) -> f64 {
    let head: f64 = theta.coeffs().iter().take(m + 1).map(|c| c.norm_sqr()).sum();
    ((1.0 - head).max(0.0) + 4.0 * (m + 1) as f64 * f64::EPSILON).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Provenance {
    Kernel { lambda: Complex64 },
    Projected,
    /// Not known to lie in `K_θ`; used for negative controls.
    Raw,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KThetaElement {
    /// Taylor coefficients of `a − θ b` up to degree `K`.
    pub series: PowerSeries,
    pub a: PowerSeries,
    pub b: PowerSeries,
    pub provenance: Provenance,
    /// `H²` bound on the difference between the element and `series`.
    pub truncation_error: f64,
}

impl KThetaElement {
    /// Wraps an arbitrary series as `a = f`, `b = 0`.
    pub fn raw(f: PowerSeries) -> Self {
        KThetaElement { a: f.clone(), series: f, b: PowerSeries::zero(), provenance: Provenance::Raw, truncation_error: 0.0 }
    }

    /// `⟨f, θ y⟩ = ⟨a, θ y⟩ − ⟨b, y⟩` for a polynomial `y`; `θ` must be known
    /// to the degree of `a`.
    pub fn pairing_with_theta_multiple(&self, theta: &PowerSeries, y: &PowerSeries) -> Result<Complex64> {
        let d = self.a.degree();
        if theta.degree() < d {
            return parameter(format!("θ is known to degree {} but the element needs {d}", theta.degree()));
        }
        let theta_y = PowerSeries::new(convolve_truncated(theta.coeffs(), y.coeffs(), d));
        Ok(pairing(&self.a, &theta_y) - pairing(&self.b, y))
    }
}

fn geometric(lambda: Complex64, k: usize) -> PowerSeries {
    let c = lambda.conj();
    let mut pow = Complex64::new(1.0, 0.0);
    PowerSeries::new(
        (0..=k)
            .map(|_| {
                let out = pow;
                pow *= c;
                out
            })
            .collect(),
    )
}

fn require_theta_degree(theta: &PowerSeries, k: usize) -> Result<()> {
    if theta.degree() < k {
        return parameter(format!("θ must be known to degree {k}, got {}", theta.degree()));
    }
    Ok(())
}

/// Reproducing kernel `(1 − conj(θ(λ)) θ(z)) / (1 − conj(λ) z)` of `K_θ`,
/// truncated at degree `k`. `θ` is the Taylor series of an inner function,
/// known to degree at least `k`.
pub fn ktheta_kernel(theta: &PowerSeries, lambda: Complex64, k: usize) -> Result<KThetaElement> {
    let rho = lambda.norm();
    if !(rho < 1.0) {
        return domain(format!("kernel point {lambda} is not inside the disk"));
    }
    require_theta_degree(theta, k)?;
    let theta_k = theta.truncated(k);
    let c = theta_k.eval(lambda).conj();
    let a = geometric(lambda, k);
    let b = a.scale(c);
    let theta_a = PowerSeries::new(convolve_truncated(theta_k.coeffs(), a.coeffs(), k));
    let series = a.sub(&theta_a.scale(c));

    let norm_sq = 1.0 / (1.0 - rho * rho);
    let geo_tail = |m: usize| rho.powi(m as i32 + 1) * norm_sq.sqrt();
    let split = k / 2;
    let head_l1 = (0..=split).map(|j| rho.powi(j as i32)).sum::<f64>();
    let theta_s_tail = head_l1 * inner_tail_norm(&theta_k, k - split) + geo_tail(split);
    let c_error = inner_tail_norm(&theta_k, k) * geo_tail(k);
    let truncation_error = geo_tail(k) + (c.norm() + c_error) * theta_s_tail + c_error * norm_sq.sqrt();
    Ok(KThetaElement { series, a, b, provenance: Provenance::Kernel { lambda }, truncation_error })
}

/// `P₊(conj(θ) f)`: coefficient `i` is `Σ_{k>=i} f_k conj(θ_{k−i})`.
fn co_analytic_part(theta: &PowerSeries, f: &PowerSeries) -> PowerSeries {
    let fc = f.coeffs();
    let tc = theta.coeffs();
    PowerSeries::new(
        (0..fc.len())
            .map(|i| fc[i..].iter().zip(tc).map(|(fk, t)| fk * t.conj()).sum())
            .collect(),
    )
}

/// Orthogonal projection `f − θ P₊(conj(θ) f)` of a polynomial of degree
/// `<= k`; `θ` must be known to degree `k`.
pub fn project_ktheta(f: &PowerSeries, theta: &PowerSeries, k: usize) -> Result<KThetaElement> {
    if f.degree() > k {
        return parameter(format!("input degree {} exceeds K = {k}", f.degree()));
    }
    require_theta_degree(theta, k)?;
    let theta_k = theta.truncated(k);
    let b = co_analytic_part(&theta_k, f);
    let theta_b = PowerSeries::new(convolve_truncated(theta_k.coeffs(), b.coeffs(), k));
    let series = f.truncated(k).sub(&theta_b);
    let truncation_error = b.l1_norm() * inner_tail_norm(&theta_k, k - f.degree());
    Ok(KThetaElement { series, a: f.clone(), b, provenance: Provenance::Projected, truncation_error })
}

/// Projection of an element given in split form: `P(a − θ b) = P a`.
pub fn project_element(e: &KThetaElement, theta: &PowerSeries, k: usize) -> Result<KThetaElement> {
    let mut out = project_ktheta(&e.a, theta, k)?;
    if let Provenance::Kernel { .. } = e.provenance {
        out.provenance = e.provenance;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakCyclicity {
    /// `|⟨f, θ p_n⟩|`
    pub orth: f64,
    /// `|⟨f, 1⟩ − f(0)|`
    pub anchor: f64,
}

pub fn weak_cyclicity_residual(f: &KThetaElement, theta: &PowerSeries, p_n: &PowerSeries) -> Result<WeakCyclicity> {
    let orth = f.pairing_with_theta_multiple(theta, p_n)?.norm();
    let one = PowerSeries::constant(Complex64::new(1.0, 0.0));
    let anchor = (pairing(&f.series, &one) - f.series.eval(Complex64::new(0.0, 0.0))).norm();
    Ok(WeakCyclicity { orth, anchor })
}

pub const DEFAULT_PIPELINE_K: usize = 4096;
pub const DEFAULT_MULTIPLIER_LEVELS: usize = 40;
pub const DEFAULT_CERTIFICATE_FRACTION: f64 = 0.9;
/// Constant `c` in `Σ |g_k|²/λ_k <= c ∫ |g|² Λ dA`.
pub const DEFAULT_NORM_CONSTANT: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub lambda: LambdaSequence,
    pub shape: SingularMeasure,
    pub n_list: Vec<usize>,
    pub k: usize,
    pub kernel_points: Vec<Complex64>,
    pub n_max: usize,
    pub levels: usize,
    pub fraction: f64,
    pub norm_constant: f64,
    pub radii: usize,
    pub angles: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            lambda: LambdaSequence::Power { a: 1.0 },
            shape: SingularMeasure::atom(0.0, 1.0).expect("valid atom"),
            n_list: vec![2, 4, 8, 16, 32],
            k: DEFAULT_PIPELINE_K,
            kernel_points: vec![Complex64::new(0.0, 0.0)],
            n_max: DEFAULT_N_MAX,
            levels: DEFAULT_MULTIPLIER_LEVELS,
            fraction: DEFAULT_CERTIFICATE_FRACTION,
            norm_constant: DEFAULT_NORM_CONSTANT,
            radii: 64,
            angles: 1024,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRow {
    pub n: usize,
    /// `∫ |θ p_n − 1|² Λ dA` from the coefficients up to `K`.
    pub b_n: f64,
    pub degree: usize,
    pub sup_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DominatedRow {
    pub n: usize,
    /// Grid maximum of `|g_n|² w² / 4` where `Λ > 0`; the bound holds iff `<= 1`.
    pub max_ratio: f64,
    pub ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateRow {
    pub n: usize,
    pub lambda0: Complex64,
    pub k_prime: usize,
    /// `Σ_{k<=K′} λ_k |f_k|²`
    pub partial_sum: f64,
    /// `fraction · |f(0)|² / (c · B_n)`
    pub threshold: f64,
    pub reached: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateSummary {
    pub n: usize,
    pub lambda0: Complex64,
    pub threshold: f64,
    /// Smallest `K′ <= K` with the partial sum at the threshold.
    pub first_k: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthRow {
    pub n: usize,
    pub lambda0: Complex64,
    pub residual: WeakCyclicity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub lambda_weight: RadialWeight,
    pub weight: GrowthWeight,
    pub scale: f64,
    pub bundle: ApproximantBundle,
    pub decay: Vec<DecayRow>,
    /// `B_n` nonincreasing along `n_list`.
    pub decay_monotone: bool,
    /// `B_first / B_last`.
    pub decay_ratio: f64,
    pub growth: Vec<GrowthRow>,
    pub dominated: Vec<DominatedRow>,
    pub certificates: Vec<CertificateRow>,
    pub summaries: Vec<CertificateSummary>,
    pub orthogonality: Vec<OrthRow>,
}

impl PipelineReport {
    pub fn decay_ok(&self) -> bool {
        self.decay_monotone && self.decay_ratio > 4.0
    }

    pub fn dominated_ok(&self) -> bool {
        self.dominated.iter().all(|r| r.ok)
    }

    pub fn certificates_ok(&self) -> bool {
        self.summaries.iter().all(|s| s.first_k.is_some())
    }
}

/// `1, 2, 4, …` up to `k`, always ending in `k`.
pub fn certificate_ladder(k: usize) -> Vec<usize> {
    let mut out: Vec<usize> = std::iter::successors(Some(1usize), |&x| x.checked_mul(2)).take_while(|&x| x < k).collect();
    out.push(k);
    out
}

pub fn theorem_pipeline(cfg: &PipelineConfig) -> Result<PipelineReport> {
    cfg.lambda.validate()?;
    if cfg.n_list.is_empty() {
        return parameter("n_list must not be empty");
    }
    if !(cfg.fraction > 0.0 && cfg.fraction <= 1.0) || !(cfg.norm_constant > 0.0) {
        return parameter("certificate fraction must lie in (0, 1] and the norm constant must be > 0");
    }
    if let Some(z) = cfg.kernel_points.iter().find(|z| !(z.norm() < 1.0)) {
        return domain(format!("kernel point {z} is not inside the disk"));
    }

    // the weighted partial sums run to K
    cfg.lambda.value(cfg.k.max(cfg.n_max))?;
    let mu = cfg.lambda.reciprocals(cfg.n_max)?;
    let lambda_weight = moment_weight(&mu, cfg.n_max)?;
    let weight = decay_weight(&lambda_weight, cfg.levels)?;
    let r_max = 1.0 - 2f64.powi(-(DEFAULT_J_MAX as i32));
    let scaled = scale_mass_to_dominate(&cfg.shape, &weight, r_max, DEFAULT_J_MAX)?;
    let bundle = build_approximants(&scaled.measure, &weight, &cfg.n_list)?;

    let theta = taylor_singular_inner(&bundle.measure, cfg.k);
    let moments = monomial_moments(&lambda_weight, cfg.k);
    let products: Vec<PowerSeries> = bundle
        .entries
        .par_iter()
        .map(|e| PowerSeries::new(convolve_truncated(theta.coeffs(), e.p_n.coeffs(), cfg.k)))
        .collect();
    let decay: Vec<DecayRow> = bundle
        .entries
        .iter()
        .zip(&products)
        .map(|(e, prod)| {
            let g = prod.sub(&PowerSeries::constant(Complex64::new(1.0, 0.0)));
            DecayRow { n: e.n, b_n: weighted_bergman_norm_sq_with(&g, &moments), degree: e.p_n.degree(), sup_error: e.sup_error }
        })
        .collect();
    let decay_monotone = decay.windows(2).all(|w| w[1].b_n <= w[0].b_n);
    let decay_ratio = decay[0].b_n / decay[decay.len() - 1].b_n;

    let radii = growth_radii(cfg.radii);
    let growth = verify_growth_bound(&bundle, &radii, cfg.angles);
    let dominated = dominated_bound(&bundle, &lambda_weight, &radii, cfg.angles);

    let mut certificates = Vec::new();
    let mut summaries = Vec::new();
    let mut orthogonality = Vec::new();
    let ladder = certificate_ladder(cfg.k);
    for &lambda0 in &cfg.kernel_points {
        let kernel = ktheta_kernel(&theta, lambda0, cfg.k)?;
        let f0 = kernel.series.coeff(0);
        let mut partial = Vec::with_capacity(cfg.k + 1);
        let mut acc = 0.0;
        for (j, c) in kernel.series.coeffs().iter().enumerate() {
            acc += cfg.lambda.value(j)? * c.norm_sqr();
            partial.push(acc);
        }
        for (row, e) in decay.iter().zip(&bundle.entries) {
            let threshold = cfg.fraction * f0.norm_sqr() / (cfg.norm_constant * row.b_n);
            for &kp in &ladder {
                certificates.push(CertificateRow {
                    n: row.n,
                    lambda0,
                    k_prime: kp,
                    partial_sum: partial[kp],
                    threshold,
                    reached: partial[kp] >= threshold,
                });
            }
            let first_k = partial.iter().position(|&s| s >= threshold);
            summaries.push(CertificateSummary { n: row.n, lambda0, threshold, first_k });
            let residual = weak_cyclicity_residual(&kernel, &theta, &e.p_n)?;
            orthogonality.push(OrthRow { n: row.n, lambda0, residual });
        }
    }

    Ok(PipelineReport {
        lambda_weight,
        weight,
        scale: scaled.scale,
        bundle,
        decay,
        decay_monotone,
        decay_ratio,
        growth,
        dominated,
        certificates,
        summaries,
        orthogonality,
    })
}

/// `|g_n|² Λ <= 4 Λ / w²` on the grid, i.e. `|g_n| w <= 2` wherever `Λ > 0`.
pub fn dominated_bound(bundle: &ApproximantBundle, lambda_weight: &RadialWeight, radii: &[f64], angles: usize) -> Vec<DominatedRow> {
    let points: Vec<Complex64> = radii
        .iter()
        .filter(|&&r| lambda_weight.value_at(r) > 0.0)
        .flat_map(|&r| (0..angles).map(move |j| Complex64::from_polar(r, TAU * j as f64 / angles as f64)))
        .collect();
    let thetas: Vec<Complex64> = points.par_iter().map(|&z| (-bundle.measure.herglotz_unchecked(z)).exp()).collect();
    bundle
        .entries
        .iter()
        .map(|e| {
            let max_ratio = points
                .par_iter()
                .zip(&thetas)
                .map(|(&z, &t)| {
                    let w = bundle.weight.eval(z.norm());
                    (t * e.p_n.eval(z) - 1.0).norm_sqr() * w * w / 4.0
                })
                .reduce(|| 0.0, f64::max);
            DominatedRow { n: e.n, max_ratio, ok: max_ratio <= 1.0 }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functions::eval_singular_inner;
    use crate::rng::Lcg64;

    fn theta_of(mass: f64, k: usize) -> (SingularMeasure, PowerSeries) {
        let m = SingularMeasure::atom(0.0, mass).unwrap();
        let t = taylor_singular_inner(&m, k);
        (m, t)
    }

    #[test]
    fn pairing_examples() {
        let f = PowerSeries::from_real(&[3.0, 0.0, 1.0]);
        assert_eq!(pairing(&f, &PowerSeries::from_real(&[1.0])), Complex64::new(3.0, 0.0));
        assert_eq!(pairing(&PowerSeries::monomial(1), &PowerSeries::monomial(1)), Complex64::new(1.0, 0.0));
        assert_eq!(pairing(&f, &PowerSeries::zero()), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn kernel_at_origin() {
        let (_, theta) = theta_of(1.0, 256);
        let k0 = ktheta_kernel(&theta, Complex64::new(0.0, 0.0), 256).unwrap();
        assert!((k0.series.coeff(0).re - (1.0 - (-2.0f64).exp())).abs() < 1e-15);
        for j in 1..10 {
            assert!((k0.series.coeff(j) + theta.coeff(j) * (-1.0f64).exp()).norm() < 1e-15);
        }
    }

    #[test]
    fn kernel_value_at_origin_matches_closed_form() {
        let (m, theta) = theta_of(0.5, 512);
        let lam = Complex64::new(0.3, -0.4);
        let k = ktheta_kernel(&theta, lam, 512).unwrap();
        let expected = 1.0 - eval_singular_inner(&m, lam).unwrap().conj() * (-0.5f64).exp();
        assert!((k.series.coeff(0) - expected).norm() < 1e-14);
        // and the full closed form inside the disk
        let z = Complex64::new(0.2, 0.1);
        let closed = (1.0 - eval_singular_inner(&m, lam).unwrap().conj() * eval_singular_inner(&m, z).unwrap()) / (1.0 - lam.conj() * z);
        assert!((k.series.eval(z) - closed).norm() < 1e-12);
        assert!(ktheta_kernel(&theta, Complex64::new(1.0, 0.0), 16).is_err());
    }

    #[test]
    fn kernel_reproduces_values() {
        // ⟨g, k_λ⟩ = g(λ) for g ∈ K_θ; take g = k_μ
        let (m, theta) = theta_of(1.0, 1024);
        let lam = Complex64::new(0.2, 0.3);
        let mu = Complex64::new(-0.1, 0.25);
        let kl = ktheta_kernel(&theta, lam, 1024).unwrap();
        let km = ktheta_kernel(&theta, mu, 1024).unwrap();
        let closed = (1.0 - eval_singular_inner(&m, mu).unwrap().conj() * eval_singular_inner(&m, lam).unwrap()) / (1.0 - mu.conj() * lam);
        // ⟨k_μ, a_λ − θ b_λ⟩ with the θ part paired in split form
        let v = pairing(&km.series, &kl.a) - km.pairing_with_theta_multiple(&theta, &kl.b).unwrap();
        assert!((v - closed).norm() < 1e-12, "{v} vs {closed}");
    }

    #[test]
    fn kernel_is_orthogonal_to_theta_multiples() {
        for &mass in &[0.5, 2.0] {
            let (_, theta) = theta_of(mass, 1024);
            for &lam in &[Complex64::new(0.0, 0.0), Complex64::new(0.9, 0.0), Complex64::new(-0.5, 0.6)] {
                let k = ktheta_kernel(&theta, lam, 1024).unwrap();
                for j in 0..=64 {
                    let v = k.pairing_with_theta_multiple(&theta, &PowerSeries::monomial(j)).unwrap();
                    assert!(v.norm() <= 1e-7, "mass {mass} λ {lam} j {j}: {v}");
                }
            }
        }
    }

    #[test]
    fn truncated_pairing_misses_the_tail_mass() {
        // naive ⟨k_0, θ⟩ over truncated series equals e^{-m} τ², not 0
        let mass = 1.0;
        let (_, theta) = theta_of(mass, 1024);
        let k0 = ktheta_kernel(&theta, Complex64::new(0.0, 0.0), 1024).unwrap();
        let naive = pairing(&k0.series, &theta).norm();
        let tau_sq = inner_tail_norm(&theta, 1024).powi(2);
        assert!(tau_sq > 1e-3);
        assert!((naive - (-mass).exp() * tau_sq).abs() < 1e-10 + 1e-6 * naive, "{naive} vs {}", (-mass).exp() * tau_sq);
    }

    #[test]
    fn projection_examples() {
        let (_, theta) = theta_of(1.0, 512);
        // θ·z lies in θH²
        let f = theta.truncated(300).mul_truncated(&PowerSeries::monomial(1), 301);
        let p = project_ktheta(&f, &theta, 512).unwrap();
        assert!(p.series.h2_norm_sq().sqrt() <= p.truncation_error + 1e-12);
        // 1 ↦ k_0
        let p1 = project_ktheta(&PowerSeries::constant(Complex64::new(1.0, 0.0)), &theta, 512).unwrap();
        let k0 = ktheta_kernel(&theta, Complex64::new(0.0, 0.0), 512).unwrap();
        assert!(p1.series.sub(&k0.series).h2_norm_sq().sqrt() < 1e-14);
        assert!(project_ktheta(&PowerSeries::monomial(600), &theta, 512).is_err());
    }

    #[test]
    fn projection_fixes_kernels() {
        let (_, theta) = theta_of(2.0, 1024);
        let lam = Complex64::new(0.6, -0.6);
        let k = ktheta_kernel(&theta, lam, 1024).unwrap();
        let p = project_element(&k, &theta, 1024).unwrap();
        assert!(p.series.sub(&k.series).h2_norm_sq().sqrt() <= 1e-8);
        assert!(p.b.sub(&k.b).h2_norm_sq().sqrt() <= 1e-8);
    }

    #[test]
    fn projection_is_idempotent_on_random_polynomials() {
        let (_, theta) = theta_of(1.0, 1024);
        let mut rng = Lcg64::new(7);
        for _ in 0..5 {
            let f = PowerSeries::new(rng.polynomial(64));
            let p = project_ktheta(&f, &theta, 1024).unwrap();
            let pp = project_element(&p, &theta, 1024).unwrap();
            assert!(pp.series.sub(&p.series).h2_norm_sq().sqrt() <= 1e-8);
            // and P f ⟂ θ z^j in split form
            for j in 0..8 {
                assert!(p.pairing_with_theta_multiple(&theta, &PowerSeries::monomial(j)).unwrap().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn weak_cyclicity_examples() {
        let w = GrowthWeight::ExponentialPoisson { m: 1.0 };
        let m = SingularMeasure::atom(0.0, 1.0).unwrap();
        let bundle = build_approximants(&m, &w, &[2, 8]).unwrap();
        let theta = taylor_singular_inner(&m, 2048);
        let k0 = ktheta_kernel(&theta.truncated(512), Complex64::new(0.0, 0.0), 512).unwrap();
        for e in &bundle.entries {
            let r = weak_cyclicity_residual(&k0, &theta, &e.p_n).unwrap();
            assert!(r.orth <= 1e-8, "{r:?}");
            assert_eq!(r.anchor, 0.0);
            let zero = weak_cyclicity_residual(&KThetaElement::raw(PowerSeries::zero()), &theta, &e.p_n).unwrap();
            assert_eq!(zero.orth, 0.0);
            // θ itself pairs with θ p_n to conj(p_n(0)) up to the truncated tail mass
            let neg = weak_cyclicity_residual(&KThetaElement::raw(theta.clone()), &theta, &e.p_n).unwrap();
            let p0 = e.p_n.coeff(0).norm();
            assert!(neg.orth > 0.5 * p0);
            assert!((neg.orth - p0).abs() < 0.05 * p0 + e.p_n.l1_norm() * inner_tail_norm(&theta, 2048 - e.p_n.degree()));
        }
    }

    #[test]
    fn ladder_shape() {
        assert_eq!(certificate_ladder(4096).len(), 13);
        assert_eq!(certificate_ladder(5), vec![1, 2, 4, 5]);
        assert_eq!(certificate_ladder(1), vec![1]);
    }

    #[test]
    fn pipeline_rejects_constant_lambda() {
        let cfg = PipelineConfig { lambda: LambdaSequence::Tabulated { values: vec![1.0; 500] }, ..PipelineConfig::default() };
        assert!(theorem_pipeline(&cfg).is_err());
    }

    #[test]
    fn small_pipeline_runs() {
        let cfg = PipelineConfig { n_list: vec![2], k: 512, n_max: 100, radii: 16, angles: 128, ..PipelineConfig::default() };
        let rep = theorem_pipeline(&cfg).unwrap();
        assert_eq!(rep.decay.len(), 1);
        assert_eq!(rep.summaries.len(), 1);
        assert!(rep.dominated_ok());
        assert!(rep.growth.iter().all(|g| g.ok));
        assert!(rep.orthogonality.iter().all(|o| o.residual.orth < 1e-10));
    }
}
