use twistor_core::curvature::{ModelName, ModelParams};
use twistor_core::gh::{classify, residual, W2W3Reading};
use twistor_core::sampling::Sampler;
use twistor_core::theorems::{verify_theorem, TheoremId};
use twistor_core::{
    Component, Condition, CurvatureOperator, GhClass, Params, SamplingConfig, StructureIndex,
};

fn model(name: ModelName, s: f64) -> CurvatureOperator {
    name.build(&ModelParams::scalar(s)).unwrap()
}

fn params(t1: f64, n: u8) -> Params {
    Params::new(t1, 0.7, n).unwrap()
}

fn cfg() -> SamplingConfig {
    SamplingConfig::with_seed(7)
}

fn detected(r: &CurvatureOperator, c: Component, t1: f64, n: u8) -> GhClass {
    classify(r, c, params(t1, n), &cfg()).unwrap().detected
}

#[test]
fn flat_plus_plus_is_hermitian_semi_kaehler() {
    let flat = CurvatureOperator::ZERO;
    for n in [1, 2] {
        assert_eq!(detected(&flat, Component::PLUS_PLUS, 1.0, n), GhClass::W3);
    }
    let pp = Component::PLUS_PLUS;
    assert_eq!(
        residual(Condition::Codiff, &flat, pp, params(1.0, 1), &cfg()).unwrap(),
        0.0
    );
    assert!(residual(Condition::Nijenhuis, &flat, pp, params(1.0, 1), &cfg()).unwrap() < 1e-9);
    for n in 1..=4 {
        let d = residual(Condition::CovDeriv, &flat, pp, params(1.0, n), &cfg()).unwrap();
        assert!(d > 0.1, "n={n}: {d}");
    }
}

#[test]
fn constant_curvature_examples() {
    let pm = Component::PLUS_MINUS;
    let pos = model(ModelName::ConstantCurvature, 12.0);
    let neg = model(ModelName::ConstantCurvature, -12.0);
    assert_eq!(detected(&pos, pm, 0.25, 3), GhClass::W1W3);
    assert_eq!(detected(&neg, pm, 0.5, 3), GhClass::W2W3);
    assert_eq!(detected(&neg, pm, 0.5, 4), GhClass::W2W3);
}

#[test]
fn relaxed_witnesses() {
    let pm = Component::PLUS_MINUS;
    let k = model(ModelName::KaehlerWitness, 12.0);
    assert_eq!(detected(&k, pm, 0.5, 1), GhClass::K);
    let w1 = model(ModelName::W1Witness, 12.0);
    assert_eq!(detected(&w1, pm, 0.25, 3), GhClass::W1);
    let w2 = model(ModelName::W2Witness, -12.0);
    assert_eq!(detected(&w2, pm, 0.5, 4), GhClass::W2);
    let report = classify(&k, pm, params(0.5, 1), &cfg()).unwrap();
    assert!(!report.strict);
    assert!(report.flags.iter().any(|f| f.contains("strict")));
}

#[test]
fn passing_classes_form_an_upper_set() {
    let mut sampler = Sampler::new(3);
    for _ in 0..4 {
        let r = sampler.strict_operator();
        for n in 1..=4 {
            let report = classify(&r, Component::PLUS_MINUS, params(0.6, n), &cfg()).unwrap();
            for &c in &report.passing {
                for above in GhClass::ALL {
                    if c.is_below(above) {
                        assert!(report.passes(above), "{c} passes but {above} does not");
                    }
                }
            }
            assert!(report.passes(report.detected) || report.detected == GhClass::Other);
        }
    }
}

#[test]
fn only_possible_classes_occur_for_strict_operators() {
    let mut sampler = Sampler::new(21);
    for _ in 0..10 {
        let r = sampler.strict_operator();
        let t1 = sampler.uniform(0.1, 3.0);
        for component in Component::ALL {
            for n in StructureIndex::ALL {
                let report = classify(&r, component, params(t1, n.get()), &cfg()).unwrap();
                assert!(
                    GhClass::possible_for(n).contains(&report.detected),
                    "{} for n={n} on {component}",
                    report.detected
                );
                assert!(report.flags.iter().all(|f| !f.contains("impossible")));
            }
        }
    }
}

/// Reversing the orientation of the base exchanges `Λ²₊` and `Λ²₋`, hence the
/// components `++ ↔ --` and `+- ↔ -+`.
#[test]
fn orientation_reversal_preserves_the_class() {
    let mut sampler = Sampler::new(4);
    let cases = [
        (CurvatureOperator::ZERO, Component::PLUS_PLUS, 1.0),
        (
            model(ModelName::ConstantCurvature, 12.0),
            Component::PLUS_MINUS,
            0.25,
        ),
        (
            model(ModelName::ConstantCurvature, -12.0),
            Component::PLUS_MINUS,
            0.5,
        ),
        (
            model(ModelName::KaehlerWitness, 12.0),
            Component::PLUS_MINUS,
            0.5,
        ),
        (
            model(ModelName::W2Witness, -12.0),
            Component::PLUS_MINUS,
            0.5,
        ),
        (sampler.strict_operator(), Component::PLUS_PLUS, 0.8),
    ];
    for (r, component, t1) in cases {
        for n in 1..=4 {
            let fwd = classify(&r, component, params(t1, n), &cfg()).unwrap();
            let rev = classify(
                &r.reverse_orientation(),
                component.reversed(),
                params(t1, n),
                &cfg(),
            )
            .unwrap();
            assert_eq!(fwd.detected, rev.detected, "{component} n={n}");
            assert_eq!(fwd.passing, rev.passing);
        }
    }
}

#[test]
fn classification_is_deterministic() {
    let r = model(ModelName::ConstantCurvature, -12.0);
    let a = classify(&r, Component::PLUS_MINUS, params(0.5, 3), &cfg()).unwrap();
    let b = classify(&r, Component::PLUS_MINUS, params(0.5, 3), &cfg()).unwrap();
    assert_eq!(a, b);
    let other = classify(
        &r,
        Component::PLUS_MINUS,
        params(0.5, 3),
        &SamplingConfig::with_seed(8),
    )
    .unwrap();
    assert_ne!(a.residuals, other.residuals);
}

#[test]
fn an_impossible_tolerance_leaves_only_exact_zeros() {
    let cfg = SamplingConfig {
        tol: 1e-30,
        ..cfg()
    };
    let report = classify(
        &CurvatureOperator::ZERO,
        Component::PLUS_PLUS,
        params(1.0, 1),
        &cfg,
    )
    .unwrap();
    // δΩ is linear in the curvature, hence exactly zero for the flat model.
    assert_eq!(report.residuals.get(Condition::Codiff), 0.0);
    assert_eq!(report.detected, GhClass::W1W2W3);
    let report = classify(
        &model(ModelName::ConstantCurvature, 12.0),
        Component::PLUS_PLUS,
        params(1.0, 1),
        &cfg,
    )
    .unwrap();
    assert_eq!(report.detected, GhClass::Other);
}

#[test]
fn repeated_w2w3_reading_is_available() {
    let cfg = SamplingConfig {
        w2w3: W2W3Reading::Repeated,
        ..cfg()
    };
    let r = model(ModelName::ConstantCurvature, -12.0);
    let literal = residual(
        Condition::W2W3,
        &r,
        Component::PLUS_MINUS,
        params(0.5, 3),
        &cfg,
    )
    .unwrap();
    assert!(literal.is_finite());
}

#[test]
fn theorems_with_witnesses_hold() {
    for id in TheoremId::ALL {
        if matches!(id, TheoremId::T4_3b | TheoremId::T4_4b) {
            continue;
        }
        let outcome = verify_theorem(id, &cfg()).unwrap();
        let failures: Vec<_> = outcome.failures().map(|e| e.label.clone()).collect();
        assert!(outcome.passed, "{id}: {failures:?}");
    }
}

/// With the traceless-Ricci block removed, the anti-self-dual operator gives
/// `δΩ = 0` and `W3` on `+-`; these are the diagnostic rows of 4.3b / 4.4b.
#[test]
fn einstein_anti_self_dual_diagnostics_hold() {
    for id in [TheoremId::T4_3b, TheoremId::T4_4b] {
        let outcome = verify_theorem(id, &cfg()).unwrap();
        let diagnostics: Vec<_> = outcome.evidence.iter().filter(|e| e.diagnostic).collect();
        assert!(!diagnostics.is_empty());
        assert!(diagnostics.iter().all(|e| e.holds()), "{id}");
    }
}
