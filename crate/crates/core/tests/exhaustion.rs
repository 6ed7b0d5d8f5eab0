mod common;

use spectral_cover::spectral::{lambda0_exhaustion, ExhaustionOptions, SymmetricOperator};
use spectral_cover::{build_cover, dense_oracle, lambda0_finite, Error, Graph, SolverOptions, SpectralEstimate};

fn run(opts: &ExhaustionOptions, (b, v, a): (spectral_cover::BaseGraph, spectral_cover::Voltage, spectral_cover::DeckAction)) -> SpectralEstimate {
    match lambda0_exhaustion(&b, &v, &a, opts) {
        Ok(e) => e,
        Err(Error::NotConverged { estimate, .. }) => *estimate,
        Err(e) => panic!("{e}"),
    }
}

/// Dirichlet λ₀ of the ball of radius R in the 4-regular tree, through the
/// radial reduction: a radial function is a path with weights 3ᵏ·(4/3)
/// between levels, solved densely.
fn tree_ball_radial(radius: usize) -> f64 {
    let n = radius + 1;
    let sizes: Vec<f64> = (0..=radius + 1).map(|k| if k == 0 { 1.0 } else { 4.0 * 3f64.powi(k as i32 - 1) }).collect();
    // generalized problem (A, M): M = sphere sizes; A = L on the level path
    let mut a = vec![0.0; n * n];
    for k in 0..n {
        a[k * n + k] += 4.0 * sizes[k];
        if k + 1 < n {
            let w = sizes[k + 1];
            a[k * n + k + 1] -= w;
            a[(k + 1) * n + k] -= w;
        }
    }
    for i in 0..n {
        for j in 0..n {
            a[i * n + j] /= (sizes[i] * sizes[j]).sqrt();
        }
    }
    let (vals, _) = spectral_cover::spectral::jacobi::symmetric_eigen(&a, n, 100).unwrap();
    vals[0]
}

#[test]
fn tree_balls_against_radial_oracle() {
    let mut opts = ExhaustionOptions::new(vec![1, 2, 3, 4, 6]);
    opts.stop_early = false;
    let est = run(&opts, common::tree());
    for t in &est.trace {
        let want = tree_ball_radial(t.radius);
        assert!((t.value - want).abs() < 1e-9, "R={}: {} vs {want}", t.radius, t.value);
    }
    assert!((est.trace[1].value - 1.3542486889354093).abs() < 1e-9);
    assert!((est.trace[3].value - 0.9110873652449945).abs() < 1e-9);
    for pair in est.trace.windows(2) {
        assert!(pair[1].value <= pair[0].value + 1e-10);
    }
    assert!(est.value > 4.0 - 2.0 * 3f64.sqrt());
}

#[test]
fn z2_cover_trace_stays_above_the_base() {
    let (b, v, a) = common::z2_over_c4();
    let base = dense_oracle(&b).unwrap().value;
    assert!((base - -0.1231056256176605).abs() < 1e-12);
    let mut opts = ExhaustionOptions::new(vec![2, 4, 8, 16]);
    opts.stop_early = false;
    let est = run(&opts, (b, v, a));
    for pair in est.trace.windows(2) {
        assert!(pair[1].value <= pair[0].value + 1e-10);
    }
    assert!(est.trace.iter().all(|t| t.value >= base - 1e-9));
}

#[test]
fn dense_and_lanczos_agree_on_cover_windows() {
    for (b, v, a) in [common::z2_over_c4(), common::heisenberg_over_wedge(), common::z_over_c3()] {
        let cover = build_cover(&b, &v, &a, 5).unwrap();
        let op = SymmetricOperator::assemble(&cover, |z| !cover.is_interior(z)).unwrap();
        if op.dim() > 512 {
            continue;
        }
        let opts = SolverOptions::default();
        let d = spectral_cover::spectral::dense_eigenpair(&op, &opts).unwrap();
        let l = spectral_cover::spectral::lanczos_eigenpair(&op, None, &opts).unwrap();
        assert!((d.value - l.value).abs() <= 1e-8);
        assert!(cover.vertex_count() > op.dim());
    }
    let (b, _, _) = common::z2_over_c4();
    assert!((lambda0_finite(&b, &SolverOptions::default()).unwrap().value - dense_oracle(&b).unwrap().value).abs() < 1e-12);
}
