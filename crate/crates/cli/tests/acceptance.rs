//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Run with `cargo test --test acceptance`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::process::{Command, ExitCode};

use twistor_core::consistency::{
    fibre_kaehler, lemma_curvature_commutator, twistor_checks, CheckResult, SelftestOptions,
};
use twistor_core::four_dim::cross;
use twistor_core::gh::classify;
use twistor_core::linalg::{inner_g4, mul4, sub4};
use twistor_core::sampling::Sampler;
use twistor_core::theorems::{verify_theorem, Bound, TheoremId, TheoremOutcome, T2};
use twistor_core::{
    Component, GTangent, GhClass, Params, SamplingConfig, Sign, StructureIndex, TwistorTensors,
    TwoVector,
};

const SEED: u64 = 7;
const INVARIANT_TOL: f64 = 1e-10;
const INVARIANT_DRAWS: usize = 200;

/// Directions asserting that a structure lies in a class.
const POSITIVE: [TheoremId; 11] = [
    TheoremId::T4_2b,
    TheoremId::T4_3a,
    TheoremId::T4_3b,
    TheoremId::T4_4a,
    TheoremId::T4_4b,
    TheoremId::T4_5a,
    TheoremId::T4_5b,
    TheoremId::T4_6b,
    TheoremId::T4_7b,
    TheoremId::T4_8b,
    TheoremId::T4_9b,
];

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }
}

fn report(label: &str, v: &Verdict) -> bool {
    let mark = if v.passed { "PASS" } else { "FAIL" };
    println!("{label:<14} {mark}  {}", v.detail);
    v.passed
}

fn checks(results: &[CheckResult]) -> Verdict {
    let failing: Vec<_> = results.iter().filter(|c| !c.passed()).collect();
    let worst = results
        .iter()
        .map(|c| format!("{} {:.1e}", c.name, c.max_residual))
        .collect::<Vec<_>>()
        .join(", ");
    match failing.first() {
        None => Verdict::new(true, worst),
        Some(c) => Verdict::new(
            false,
            format!(
                "{} {:e} > {:e} at {}",
                c.name, c.max_residual, c.tol, c.witness
            ),
        ),
    }
}

fn criterion_1() -> Verdict {
    let opts = SelftestOptions {
        seed: SEED,
        trials: 500,
        ..SelftestOptions::default()
    };
    checks(&twistor_checks(&opts))
}

fn criterion_2() -> Verdict {
    checks(&[lemma_curvature_commutator(SEED, 1000)])
}

fn criterion_3() -> Verdict {
    checks(&[fibre_kaehler(SEED, 20)])
}

/// Membership residuals of one positive direction.
fn positive_direction(outcome: &TheoremOutcome) -> Verdict {
    let rows: Vec<_> = outcome
        .evidence
        .iter()
        .filter(|e| e.bound == Bound::AtMost && !e.diagnostic)
        .collect();
    let worst = rows.iter().map(|e| e.value).fold(0.0, f64::max);
    match rows.iter().find(|e| !e.holds()) {
        None => Verdict::new(
            !rows.is_empty(),
            format!("{} rows, max residual {worst:.1e}", rows.len()),
        ),
        Some(e) => Verdict::new(
            false,
            format!("{} = {:.3e} > {:e}", e.label, e.value, e.threshold),
        ),
    }
}

/// Non-membership and perturbation rows; each must exceed its threshold.
fn negative_rows(outcomes: &[TheoremOutcome]) -> Verdict {
    let rows: Vec<_> = outcomes
        .iter()
        .flat_map(|o| o.evidence.iter().map(move |e| (o.id, e)))
        .filter(|(_, e)| e.bound == Bound::Above)
        .collect();
    let smallest = rows
        .iter()
        .map(|(_, e)| e.value / e.threshold)
        .fold(f64::INFINITY, f64::min);
    match rows.iter().find(|(_, e)| !e.holds()) {
        None => Verdict::new(
            !rows.is_empty(),
            format!("{} rows, smallest margin x{smallest:.1}", rows.len()),
        ),
        Some((id, e)) => Verdict::new(
            false,
            format!("{id}: {} = {:.3e} <= {:e}", e.label, e.value, e.threshold),
        ),
    }
}

fn criterion_6() -> Verdict {
    let cfg = SamplingConfig::with_seed(SEED);
    let mut sampler = Sampler::new(SEED);
    let mut seen = std::collections::BTreeSet::new();
    for k in 0..10 {
        let r = sampler.strict_operator();
        let t1 = sampler.uniform(0.1, 3.0);
        for component in Component::ALL {
            for n in StructureIndex::ALL {
                let params = Params::new(t1, T2, n.get()).expect("positive");
                let report = classify(&r, component, params, &cfg).expect("valid config");
                if !GhClass::possible_for(n).contains(&report.detected) {
                    return Verdict::new(
                        false,
                        format!("operator {k} on {component} n={n}: {}", report.detected),
                    );
                }
                seen.insert(report.detected.to_string());
            }
        }
    }
    let seen: Vec<_> = seen.into_iter().collect();
    Verdict::new(true, format!("classes seen: {}", seen.join(" ")))
}

fn criterion_7() -> Verdict {
    let args = [
        "classify",
        "--model",
        "constant_curvature",
        "--s",
        "-12",
        "--component",
        "+-",
        "--n",
        "4",
        "--t1",
        "0.5",
        "--seed",
        "3",
    ];
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_twistor"))
            .args(args)
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    if !a.status.success() || !b.status.success() {
        return Verdict::new(false, String::from_utf8_lossy(&a.stderr).into_owned());
    }
    Verdict::new(
        a.stdout == b.stdout && !a.stdout.is_empty(),
        format!(
            "{} bytes, identical: {}",
            a.stdout.len(),
            a.stdout == b.stdout
        ),
    )
}

fn max_diff(a: &GTangent, b: &GTangent) -> f64 {
    let mut m = 0.0f64;
    for i in 0..4 {
        m = m.max((a.x[i] - b.x[i]).abs());
        for j in 0..4 {
            m = m.max((a.v.v1[i][j] - b.v.v1[i][j]).abs());
            m = m.max((a.v.v2[i][j] - b.v.v2[i][j]).abs());
        }
    }
    m
}

fn criterion_8() -> Verdict {
    let mut sampler = Sampler::new(SEED);
    let mut worst = [0.0f64; 6];
    for _ in 0..INVARIANT_DRAWS {
        let component = Component::ALL[(sampler.uniform(0.0, 4.0) as usize).min(3)];
        let n = 1 + (sampler.uniform(0.0, 4.0) as u8).min(3);
        let params =
            Params::new(sampler.uniform(0.1, 4.0), sampler.uniform(0.1, 4.0), n).expect("positive");
        let t = TwistorTensors::new(
            sampler.point(component),
            sampler.symmetric_operator(),
            params,
        );
        let (a, b) = (sampler.tangent(&t), sampler.tangent(&t));
        let (ja, jb) = (t.jn(&a).expect("vertical"), t.jn(&b).expect("vertical"));
        let scale = 1.0 + t.norm(&a) * t.norm(&b);

        let jja = t.jn(&ja).expect("vertical");
        worst[0] = worst[0].max(max_diff(&jja, &-a) / (1.0 + t.norm(&a)));

        let h = t.metric(&a, &b).expect("vertical");
        worst[1] = worst[1].max((t.metric(&ja, &jb).expect("vertical") - h).abs() / scale);

        let ab = t.omega(&a, &b).expect("vertical");
        let ba = t.omega(&b, &a).expect("vertical");
        worst[2] = worst[2].max((ab + ba).abs() / scale);

        let basis: Vec<TwoVector> = [Sign::Plus, Sign::Minus]
            .into_iter()
            .flat_map(|s| (1..=3).map(move |i| TwoVector::s(s, i)))
            .collect();
        for (i, e) in basis.iter().enumerate() {
            for (j, f) in basis.iter().enumerate() {
                let g = inner_g4(&e.endomorphism(), &f.endomorphism());
                worst[3] = worst[3].max((g - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }

        let s = if sampler.uniform(0.0, 1.0) < 0.5 {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let (sigma, tau) = (
            TwoVector::from_half(s, sampler.normals()),
            TwoVector::from_half(s, sampler.normals()),
        );
        let (p, q) = (sigma.endomorphism(), tau.endomorphism());
        let comm = TwoVector::from_endomorphism(&sub4(&mul4(&p, &q), &mul4(&q, &p)));
        let crossed = cross(&sigma, &tau, s).expect("same half");
        let lhs = comm * (s.factor() * FRAC_1_SQRT_2);
        worst[4] = worst[4].max((lhs - crossed).norm() / (1.0 + sigma.norm() * tau.norm()));

        let (u, w) = (sampler.two_vector(), sampler.two_vector());
        let g = inner_g4(&u.endomorphism(), &w.endomorphism());
        worst[5] = worst[5].max((g - u.dot(&w)).abs() / (1.0 + u.norm() * w.norm()));
    }
    let names = [
        "J²=-Id",
        "H-compat",
        "Ω antisym",
        "s-basis",
        "cross/commutator",
        "Λ² isometry",
    ];
    let detail = names
        .iter()
        .zip(worst)
        .map(|(n, w)| format!("{n} {w:.1e}"))
        .collect::<Vec<_>>()
        .join(", ");
    Verdict::new(
        worst.iter().all(|&w| w <= INVARIANT_TOL),
        format!("{INVARIANT_DRAWS} draws: {detail}"),
    )
}

fn main() -> ExitCode {
    let cfg = SamplingConfig::with_seed(SEED);
    let outcomes: Vec<TheoremOutcome> = TheoremId::ALL
        .iter()
        .map(|&id| verify_theorem(id, &cfg).expect("valid config"))
        .collect();

    let mut all = true;
    all &= report("criterion 1", &criterion_1());
    all &= report("criterion 2", &criterion_2());
    all &= report("criterion 3", &criterion_3());

    let mut failed = Vec::new();
    for o in outcomes.iter().filter(|o| POSITIVE.contains(&o.id)) {
        let v = positive_direction(o);
        if !report(&format!("  {}", o.id), &v) {
            failed.push(o.id.to_string());
        }
    }
    let c4 = if failed.is_empty() {
        Verdict::new(true, format!("{} positive directions", POSITIVE.len()))
    } else {
        Verdict::new(false, format!("failing: {}", failed.join(", ")))
    };
    all &= report("criterion 4", &c4);

    all &= report("criterion 5", &negative_rows(&outcomes));
    all &= report("criterion 6", &criterion_6());
    all &= report("criterion 7", &criterion_7());
    all &= report("criterion 8", &criterion_8());

    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
