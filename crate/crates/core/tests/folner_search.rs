use spectral_cover::folner::{orbit_ball, verify_folner, Verdict};
use spectral_cover::{search_folner, DeckAction, Word};

fn words(action: &DeckAction, ws: &[&str]) -> Vec<Word> {
    ws.iter().map(|w| action.parse_word(w).unwrap()).collect()
}

#[test]
fn lamplighter_certificate_reverifies() {
    let action = DeckAction::lamplighter();
    let g = words(&action, &["t", "a", "t^-1", "a^-1"]);
    let out = search_folner(&action, &g, 0.2, 100_000).unwrap();
    let cert = out.certificate.expect("lamplighter is amenable");
    assert!(out.states_explored <= 100_000);
    let window = orbit_ball(&action, 20, 1_000_000).unwrap();
    assert_eq!(verify_folner(&window, &cert.states, &g, 0.2).unwrap(), Verdict::Accepted(cert));
}

#[test]
fn heisenberg_ball_certificate() {
    let action = DeckAction::heisenberg();
    let g = words(&action, &["x", "y", "x^-1", "y^-1"]);
    let cert = search_folner(&action, &g, 0.3, 200_000).unwrap().certificate.unwrap();
    let window = orbit_ball(&action, 40, 2_000_000).unwrap();
    assert!(matches!(verify_folner(&window, &cert.states, &g, 0.3).unwrap(), Verdict::Accepted(_)));
}

#[test]
fn free_group_exhausts_the_budget() {
    let action = DeckAction::free(2).unwrap();
    let g = words(&action, &["a", "b", "a^-1", "b^-1"]);
    let out = search_folner(&action, &g, 0.3, 100_000).unwrap();
    assert!(out.certificate.is_none());
    assert!(!out.candidates.is_empty());
    // independent check: F spans a forest in the 4-regular tree, so at most
    // |F| − 1 of its 4|F|/2 edges stay inside and the four defects add up to
    // at least 2 + 2/|F|; some generator has defect above 1/2
    for c in &out.candidates {
        assert!(c.max_defect >= 0.5 + 0.5 / c.size as f64 - 1e-12, "{c:?}");
    }
    assert!(out.best_max_defect > 0.3);
}

#[test]
fn schreier_finite_orbit_is_invariant() {
    // a finite transitive action: the whole orbit has defect 0
    let action = DeckAction::schreier(vec!["s".into()], vec![vec![1, 2, 0]]).unwrap();
    let g = words(&action, &["s", "s^-1"]);
    let cert = search_folner(&action, &g, 0.01, 100).unwrap().certificate.unwrap();
    assert_eq!(cert.size(), 3);
    assert_eq!(cert.max_defect(), 0.0);
}
