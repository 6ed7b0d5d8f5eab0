mod common;

use spectral_cover::folner::{orbit_ball, verify_folner, Verdict};
use spectral_cover::spectral::ground_state;
use spectral_cover::{
    build_cover, displacement_set, pullup, pushdown, rayleigh, search_folner, DeckAction, Error, FolnerCertificate,
    SolverOptions, TestFunction, Voltage, BaseGraph, Letter, Word,
};

#[test]
fn trivial_action_has_no_excess() {
    let base = BaseGraph::cycle(5).unwrap().with_potential(vec![0.2, -0.4, 0.0, 0.1, 0.3]).unwrap();
    let action = DeckAction::trivial(1).unwrap();
    let cover = build_cover(&base, &Voltage::identity(&base), &action, 12).unwrap();
    let (_, f) = ground_state(&base, &SolverOptions::default()).unwrap();
    let g = displacement_set(&cover, 2).unwrap();
    let cert = search_folner(&action, &g, 0.1, 10).unwrap().certificate.unwrap();
    let out = pullup(&f, &cover, &cert, 2).unwrap();
    assert!(out.cutoff.iter().all(|(_, c)| c == 1.0));
    assert!(out.report.excess.abs() < 1e-14);
    assert_eq!((out.report.q_plus, out.report.q_minus), (1, 0));
}

#[test]
fn constant_on_the_line() {
    // χ·f₁ is c on the N points of F: two boundary edges, mass N c²
    let (base, voltage, action) = common::line();
    let f = TestFunction::from_pairs([(0, 0.7)]).unwrap();
    let g = Word(vec![Letter::new(0, false)]);
    for n in [5usize, 20, 80] {
        let states: Vec<_> = (0..n).map(|k| action.act_word(&action.basepoint(), &Word(vec![g.0[0]; k]))).collect();
        let window = orbit_ball(&action, n + 2, 10_000).unwrap();
        let cert = verify_folner(&window, &states, &[g.clone(), g.inverse()], 1.0).unwrap().certificate().unwrap();
        let cover = build_cover(&base, &voltage, &action, n + 8).unwrap();
        let out = pullup(&f, &cover, &cert, 0).unwrap();
        let exact = 2.0 / n as f64;
        assert!((out.report.rayleigh_lifted - exact).abs() < 1e-14);
        assert_eq!(out.report.rayleigh_base, 0.0);
    }
}

fn z2_run(eps: f64) -> spectral_cover::PullupReport {
    let (base, voltage, action) = common::z2_over_c4();
    let (_, f) = ground_state(&base, &SolverOptions::default()).unwrap();
    let r = 2;
    let g = displacement_set(&build_cover(&base, &voltage, &action, 2 * (2 * r + 2)).unwrap(), r).unwrap();
    let cert: FolnerCertificate = search_folner(&action, &g, eps, 1_000_000).unwrap().certificate.unwrap();
    let mut radius = 2 * (2 * r + 2);
    loop {
        let cover = build_cover(&base, &voltage, &action, radius).unwrap();
        match pullup(&f, &cover, &cert, r) {
            Ok(out) => {
                assert!(out.report.clean_cell_deviation < 1e-12);
                let down = pushdown(&cover, &out.function).unwrap();
                assert!(rayleigh(&base, &down).unwrap() <= out.report.rayleigh_lifted + 1e-12);
                return out.report;
            }
            Err(Error::WindowTooSmall(_) | Error::InsufficientMargin(_)) => radius *= 2,
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn z2_excess_shrinks_with_epsilon() {
    let coarse = z2_run(0.5);
    let fine = z2_run(0.1);
    assert!(fine.excess < coarse.excess);
    assert!(fine.excess >= -1e-12);
    assert_eq!(coarse.g_size, 25);
}

#[test]
fn rejects_support_beyond_r() {
    let (base, voltage, action) = common::z2_over_c4();
    let cover = build_cover(&base, &voltage, &action, 16).unwrap();
    let f = TestFunction::from_pairs([(2, 1.0)]).unwrap();
    let window = orbit_ball(&action, 2, 100).unwrap();
    let Verdict::Accepted(cert) = verify_folner(&window, &[action.basepoint()], &[], 0.5).unwrap() else { panic!() };
    assert!(matches!(pullup(&f, &cover, &cert, 1), Err(Error::InsufficientMargin(_))));
    assert!(pullup(&f, &cover, &cert, 2).is_ok());
}
