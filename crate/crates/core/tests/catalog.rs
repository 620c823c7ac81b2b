use ehrhard::catalog::{self, NAMES};
use ehrhard::render::render_scene;
use ehrhard::rigidity::{rigidity_verdict, Verdict};
use ehrhard::sweep::{default_resolutions, sweep};

#[test]
fn koch_approximants_are_non_rigid() {
    for m in 0..=4 {
        let p = catalog::profile("koch", m as f64).unwrap();
        let r = rigidity_verdict(&p);
        assert_eq!(r.verdict, Verdict::NonRigid, "iteration {m}");
        let inside = catalog::koch_inside(&p, m);
        let minus = &r.counterexample.as_deref().unwrap().certificate.minus;
        assert!(!inside.is_empty() && inside.iter().all(|c| minus.contains(c)), "iteration {m}");
    }
}

#[test]
fn ring_boundaries_grow() {
    let measures: Vec<f64> =
        (1..=5).map(|k| catalog::rings(k, 5).unwrap().g_boundary_measure()).collect();
    assert!(measures.windows(2).all(|w| w[1] > w[0]), "{measures:?}");
}

#[test]
fn mistico_sweep_defaults() {
    let rows = sweep("mistico", &default_resolutions("mistico").unwrap()).unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.verdict == Verdict::NonRigid));
    let ln: Vec<f64> = rows.iter().map(|r| r.ln_excess.unwrap()).collect();
    assert!(ln.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn fig3_at_finer_resolution() {
    let report = catalog::run("fig3-01", Some(1.0 / 16.0)).unwrap();
    assert!(report.passed(), "{:#?}", report.checks);
}

#[test]
fn reports_and_pictures_are_deterministic() {
    for name in NAMES {
        if *name == "g-per-finito" {
            continue;
        }
        let a = catalog::run(name, None).unwrap();
        let b = catalog::run(name, None).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap(), "{name}");
        let cert = a.report.counterexample.as_deref().map(|c| &c.certificate);
        assert_eq!(render_scene(&a.profile, cert), render_scene(&b.profile, cert), "{name}");
    }
}

#[test]
fn mistico_picture_has_the_dashed_segment() {
    let p = catalog::profile("mistico", 0.25).unwrap();
    let svg = render_scene(&p, None);
    // One blocked facet per column along x₂ = 0.
    assert_eq!(svg.matches("stroke-dasharray").count(), 8);
}
