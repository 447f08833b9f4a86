use innergrowth::cyclicity::{build_approximants, growth_radii, verify_growth_bound, verify_pointwise_convergence, GrowthWeight};
use innergrowth::functions::SingularMeasure;
use innergrowth::model::{theorem_pipeline, PipelineConfig};
use innergrowth::spectra::{embedding_sequence, ModulusOfContinuity};
use innergrowth::weights::LambdaSequence;
use innergrowth::Complex64;

#[test]
fn default_pipeline_shape() {
    let rep = theorem_pipeline(&PipelineConfig::default()).unwrap();
    assert_eq!(rep.decay.len(), 5);
    assert!(rep.decay_monotone);
    assert!(rep.dominated_ok());
    assert!(rep.certificates_ok());
    assert!(rep.growth.iter().all(|g| g.ok));
    // the kernel at 0 is orthogonal to every θ p_n
    assert!(rep.orthogonality.iter().all(|o| o.residual.orth < 1e-12 && o.residual.anchor == 0.0));
    // thresholds grow as B_n shrinks, and so do the first certified indices
    let firsts: Vec<usize> = rep.summaries.iter().map(|s| s.first_k.unwrap()).collect();
    assert!(firsts.windows(2).all(|w| w[0] <= w[1]), "{firsts:?}");
}

#[test]
fn pipeline_accepts_embedding_sequence_as_lambda() {
    let seq = embedding_sequence(&ModulusOfContinuity::Hoelder { a: 0.5 }, 10, 1024).unwrap();
    let cfg = PipelineConfig {
        lambda: seq.lambda_sequence(),
        n_max: 200,
        k: 1024,
        n_list: vec![2, 8],
        kernel_points: vec![Complex64::new(0.0, 0.0), Complex64::new(0.3, 0.2)],
        radii: 16,
        angles: 256,
        ..PipelineConfig::default()
    };
    let rep = theorem_pipeline(&cfg).unwrap();
    assert!(rep.dominated_ok());
    assert_eq!(rep.summaries.len(), 4);
    assert!(rep.orthogonality.iter().all(|o| o.residual.orth < 1e-10));
}

#[test]
fn pipeline_with_logarithmic_lambda() {
    let cfg = PipelineConfig { lambda: LambdaSequence::Logarithmic, k: 1024, n_list: vec![2, 4], radii: 8, angles: 128, ..PipelineConfig::default() };
    let rep = theorem_pipeline(&cfg).unwrap();
    assert!(rep.decay[1].b_n <= rep.decay[0].b_n);
}

#[test]
fn growth_bound_for_cantor_measure() {
    let cantor = innergrowth::functions::CantorComponent { center: innergrowth::functions::CirclePoint::new(0.0), arc_width: 1.0, depth: 8, total_mass: 0.05 };
    let m = SingularMeasure::new(vec![], vec![cantor]).unwrap();
    let w = GrowthWeight::PowerLog { a: 2.0 };
    let bundle = build_approximants(&m, &w, &[2, 4, 8]).unwrap();
    let rows = verify_growth_bound(&bundle, &growth_radii(24), 256);
    assert!(rows.iter().all(|r| r.ok), "{rows:?}");
    let conv = verify_pointwise_convergence(&bundle, &[Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.9)]).unwrap();
    assert!(conv.iter().all(|r| r.deviation <= r.bound + 1e-12));
}
