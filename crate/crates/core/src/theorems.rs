//! Reproduction of the classification theorems for `(H_t, J^n)`.
//!
//! Positive directions run the class conditions on a witness operator.
//! Negative directions either exhibit a violating configuration on `G₊₊` or
//! perturb one hypothesis of a witness (add `W₊`, `B` or `W₋` noise, shift
//! `s`, scale `t₁` by 1.1) and check that the class condition breaks.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::curvature::{compose, CurvatureBlocks, CurvatureOperator, ModelName, ModelParams};
use crate::error::{Error, Result};
use crate::four_dim::{sphere_to_j, Sign, TwoVector};
use crate::gh::{classify, GhClass, Residuals, SamplingConfig};
use crate::linalg::{frobenius3, frobenius6, Mat3, Vec4, ZERO4};
use crate::sampling::Sampler;
use crate::twistor::{
    Component, GTangent, Params, ProductTwistorPoint, StructureIndex, TwistorTensors,
    VerticalVector,
};

/// Perturbed residuals must exceed this.
pub const BREAK_THRESHOLD: f64 = 1e-3;
/// `DΩ` on `G₊₊` must exceed this for `n = 1, 2`.
pub const NOT_KAEHLER_THRESHOLD: f64 = 0.1;
/// Relative size of hypothesis perturbations.
pub const PERTURBATION: f64 = 0.1;
/// `t₂` used throughout; every statement holds for all `t₂ > 0`.
pub const T2: f64 = 0.7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    T4_2a,
    T4_2b,
    T4_3a,
    T4_3b,
    T4_4a,
    T4_4b,
    T4_5a,
    T4_5b,
    T4_6a,
    T4_6b,
    T4_7a,
    T4_7b,
    T4_8a,
    T4_8b,
    T4_9a,
    T4_9b,
}

impl TheoremId {
    pub const ALL: [TheoremId; 16] = [
        TheoremId::T4_2a,
        TheoremId::T4_2b,
        TheoremId::T4_3a,
        TheoremId::T4_3b,
        TheoremId::T4_4a,
        TheoremId::T4_4b,
        TheoremId::T4_5a,
        TheoremId::T4_5b,
        TheoremId::T4_6a,
        TheoremId::T4_6b,
        TheoremId::T4_7a,
        TheoremId::T4_7b,
        TheoremId::T4_8a,
        TheoremId::T4_8b,
        TheoremId::T4_9a,
        TheoremId::T4_9b,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T4_2a => "4.2a",
            TheoremId::T4_2b => "4.2b",
            TheoremId::T4_3a => "4.3a",
            TheoremId::T4_3b => "4.3b",
            TheoremId::T4_4a => "4.4a",
            TheoremId::T4_4b => "4.4b",
            TheoremId::T4_5a => "4.5a",
            TheoremId::T4_5b => "4.5b",
            TheoremId::T4_6a => "4.6a",
            TheoremId::T4_6b => "4.6b",
            TheoremId::T4_7a => "4.7a",
            TheoremId::T4_7b => "4.7b",
            TheoremId::T4_8a => "4.8a",
            TheoremId::T4_8b => "4.8b",
            TheoremId::T4_9a => "4.9a",
            TheoremId::T4_9b => "4.9b",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            TheoremId::T4_2a => "n=1,2 on G++ is never Kähler",
            TheoremId::T4_2b => {
                "n=1,2 on G+- is Kähler iff Einstein, s>0, ASD, W- = -(s/12)Id, t1 = 6/s"
            }
            TheoremId::T4_3a => "n=1,2 on G++ is in W3 iff ASD and scalar flat",
            TheoremId::T4_3b => "n=1,2 on G+- is in W3 iff ASD",
            TheoremId::T4_4a => "n=3,4 on G++ is semi-Kähler iff ASD and scalar flat",
            TheoremId::T4_4b => "n=3,4 on G+- is semi-Kähler iff ASD",
            TheoremId::T4_5a => "n=3,4 on G++ is quasi-Kähler iff ASD and Ricci flat",
            TheoremId::T4_5b => "n=3,4 on G+- is quasi-Kähler iff Einstein, ASD, R|Λ²- = 0",
            TheoremId::T4_6a => "n=3,4 on G++ is never in W1+W3",
            TheoremId::T4_6b => "n=3,4 on G+- is in W1+W3 iff Einstein, s>0, ASD, t1 = 3/s",
            TheoremId::T4_7a => "n=3,4 on G++ is never in W2+W3",
            TheoremId::T4_7b => "n=3,4 on G+- is in W2+W3 iff Einstein, s<0, ASD, t1 = -6/s",
            TheoremId::T4_8a => "n=3,4 on G++ is never in W1",
            TheoremId::T4_8b => {
                "n=3,4 on G+- is in W1 iff Einstein, s>0, ASD, W- = -(s/12)Id, t1 = 3/s"
            }
            TheoremId::T4_9a => "n=3,4 on G++ is never in W2",
            TheoremId::T4_9b => {
                "n=3,4 on G+- is in W2 iff Einstein, s<0, ASD, W- = -(s/12)Id, t1 = -6/s"
            }
        }
    }

    fn structures(self) -> [StructureIndex; 2] {
        use TheoremId::*;
        let pick = |a, b| [StructureIndex::ALL[a], StructureIndex::ALL[b]];
        match self {
            T4_2a | T4_2b | T4_3a | T4_3b => pick(0, 1),
            _ => pick(2, 3),
        }
    }

    fn class(self) -> GhClass {
        use TheoremId::*;
        match self {
            T4_2a | T4_2b => GhClass::K,
            T4_3a | T4_3b => GhClass::W3,
            T4_4a | T4_4b => GhClass::W1W2W3,
            T4_5a | T4_5b => GhClass::W1W2,
            T4_6a | T4_6b => GhClass::W1W3,
            T4_7a | T4_7b => GhClass::W2W3,
            T4_8a | T4_8b => GhClass::W1,
            T4_9a | T4_9b => GhClass::W2,
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "theorem",
                value: s.to_string(),
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    /// `value ≤ threshold`.
    AtMost,
    /// `value > threshold`.
    Above,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evidence {
    pub label: String,
    pub value: f64,
    pub threshold: f64,
    pub bound: Bound,
    /// Reported for context only; does not affect the verdict.
    pub diagnostic: bool,
}

impl Evidence {
    pub fn holds(&self) -> bool {
        match self.bound {
            Bound::AtMost => self.value <= self.threshold,
            Bound::Above => self.value > self.threshold,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremOutcome {
    pub id: TheoremId,
    pub passed: bool,
    pub evidence: Vec<Evidence>,
}

impl TheoremOutcome {
    pub fn failures(&self) -> impl Iterator<Item = &Evidence> {
        self.evidence.iter().filter(|e| !e.diagnostic && !e.holds())
    }
}

/// One hypothesis perturbation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Perturbation {
    WPlus,
    B,
    WMinus,
    Scalar,
    T1,
}

impl Perturbation {
    fn label(self) -> &'static str {
        match self {
            Perturbation::WPlus => "W+ noise",
            Perturbation::B => "B noise",
            Perturbation::WMinus => "W- noise",
            Perturbation::Scalar => "s shift",
            Perturbation::T1 => "t1 x 1.1",
        }
    }
}

/// A witness: curvature blocks on a component with a given `t₁`.
#[derive(Clone, Debug)]
struct Witness {
    label: String,
    blocks: CurvatureBlocks,
    component: Component,
    t1: f64,
}

impl Witness {
    fn model(name: ModelName, s: f64, component: Component, t1: f64) -> Self {
        let blocks = name
            .blocks(&ModelParams::scalar(s))
            .expect("built-in witness parameters are valid");
        Self {
            label: format!("{name}(s={s}) {component} t1={t1}"),
            blocks,
            component,
            t1,
        }
    }

    fn operator(&self) -> CurvatureOperator {
        compose(&self.blocks).expect("witness blocks are symmetric")
    }

    fn perturbed(&self, p: Perturbation, sampler: &mut Sampler) -> Self {
        let scale = {
            let norm = frobenius6(self.operator().matrix());
            if norm > 0.0 {
                PERTURBATION * norm
            } else {
                PERTURBATION
            }
        };
        let mut w = self.clone();
        let b = &mut w.blocks;
        match p {
            Perturbation::WPlus => {
                add_scaled(&mut b.w_plus, &sampler.traceless_symmetric3(), scale)
            }
            Perturbation::B => add_scaled(&mut b.b, &sampler.mat3(), scale),
            Perturbation::WMinus => {
                add_scaled(&mut b.w_minus, &sampler.traceless_symmetric3(), scale)
            }
            Perturbation::Scalar => b.s += 12.0 * scale,
            Perturbation::T1 => w.t1 *= 1.1,
        }
        w.label = format!("{} + {}", self.label, p.label());
        w
    }

    fn residuals(&self, n: StructureIndex, cfg: &SamplingConfig) -> Residuals {
        let params = Params::new(self.t1, T2, n.get()).expect("positive witness parameters");
        classify(&self.operator(), self.component, params, cfg)
            .expect("validated config")
            .residuals
    }
}

/// Adds `scale · noise / |noise|`.
fn add_scaled(target: &mut Mat3, noise: &Mat3, scale: f64) {
    let norm = frobenius3(noise).max(1e-12);
    for i in 0..3 {
        for j in 0..3 {
            target[i][j] += scale * noise[i][j] / norm;
        }
    }
}

pub fn verify_theorem(id: TheoremId, cfg: &SamplingConfig) -> Result<TheoremOutcome> {
    cfg.validate()?;
    let mut v = Verifier {
        id,
        cfg,
        evidence: Vec::new(),
        sampler: Sampler::new(cfg.seed.wrapping_add(1)),
    };
    v.run();
    let passed = v.evidence.iter().all(|e| e.diagnostic || e.holds());
    Ok(TheoremOutcome {
        id,
        passed,
        evidence: v.evidence,
    })
}

pub fn verify_all(cfg: &SamplingConfig) -> Result<Vec<TheoremOutcome>> {
    TheoremId::ALL
        .into_iter()
        .map(|id| verify_theorem(id, cfg))
        .collect()
}

struct Verifier<'a> {
    id: TheoremId,
    cfg: &'a SamplingConfig,
    evidence: Vec<Evidence>,
    sampler: Sampler,
}

impl Verifier<'_> {
    fn push(&mut self, label: String, value: f64, threshold: f64, bound: Bound, diagnostic: bool) {
        self.evidence.push(Evidence {
            label,
            value,
            threshold,
            bound,
            diagnostic,
        });
    }

    fn run(&mut self) {
        use ModelName::*;
        use Perturbation::*;
        use TheoremId::*;
        let pp = Component::PLUS_PLUS;
        let pm = Component::PLUS_MINUS;
        match self.id {
            T4_2a => {
                self.explicit_not_kaehler();
                for w in [
                    Witness::model(Flat, 0.0, pp, 1.0),
                    Witness::model(ConstantCurvature, 12.0, pp, 0.5),
                    Witness::model(ConstantCurvature, -12.0, pp, 0.5),
                ] {
                    self.expect_fails(&w, NOT_KAEHLER_THRESHOLD);
                }
            }
            T4_2b => {
                let w = Witness::model(KaehlerWitness, 12.0, pm, 0.5);
                self.expect_class(&w, false);
                self.perturb(&w, &[WPlus, B, WMinus, T1]);
            }
            T4_3a | T4_4a => {
                let flat = Witness::model(Flat, 0.0, pp, 1.0);
                self.expect_class(&flat, false);
                let general = self.asd_general(0.0, pp);
                self.expect_class(&general, false);
                self.perturb(&flat, &[WPlus, Scalar]);
            }
            T4_3b | T4_4b => {
                let s = 12.0 * self.sampler.normal();
                let general = self.asd_general(s, pm);
                self.expect_class(&general, false);
                let mut einstein = general.clone();
                einstein.blocks.b = [[0.0; 3]; 3];
                einstein.label = format!("{} with B = 0", general.label);
                self.expect_class(&einstein, true);
                self.perturb(&einstein, &[WPlus]);
            }
            T4_5a => {
                let w_minus = self.sampler.traceless_symmetric3();
                let w = Witness {
                    label: "asd_ricci_flat(random W-) ++".to_string(),
                    blocks: CurvatureBlocks::new(0.0, [[0.0; 3]; 3], [[0.0; 3]; 3], w_minus),
                    component: pp,
                    t1: 0.8,
                };
                self.expect_class(&w, false);
                self.perturb(&w, &[WPlus, Scalar]);
            }
            T4_5b => {
                let s = 5.0;
                let w = Witness {
                    label: format!("einstein_asd(s={s}, W- = -(s/12)Id) +-"),
                    blocks: KaehlerWitness
                        .blocks(&ModelParams::scalar(s))
                        .expect("valid"),
                    component: pm,
                    t1: 0.8,
                };
                self.expect_class(&w, false);
                self.perturb(&w, &[WPlus, B, Scalar]);
            }
            T4_6a => {
                self.explicit_codiff(12.0);
                self.never_on_plus_plus(0.25);
            }
            T4_6b => {
                let w = Witness::model(ConstantCurvature, 12.0, pm, 0.25);
                self.expect_class(&w, false);
                self.perturb(&w, &[WPlus, B, T1]);
            }
            T4_7a => {
                self.explicit_codiff(-12.0);
                self.never_on_plus_plus(0.5);
            }
            T4_7b => {
                let w = Witness::model(ConstantCurvature, -12.0, pm, 0.5);
                self.expect_class(&w, false);
                self.perturb(&w, &[WPlus, B, T1]);
            }
            T4_8a => self.never_on_plus_plus(0.25),
            T4_8b => {
                let w = Witness::model(W1Witness, 12.0, pm, 0.25);
                self.expect_class(&w, false);
                self.perturb(&w, &[WPlus, B, WMinus, T1]);
            }
            T4_9a => self.never_on_plus_plus(0.5),
            T4_9b => {
                let w = Witness::model(W2Witness, -12.0, pm, 0.5);
                self.expect_class(&w, false);
                self.perturb(&w, &[WPlus, B, WMinus, T1]);
            }
        }
    }

    fn asd_general(&mut self, s: f64, component: Component) -> Witness {
        let blocks = CurvatureBlocks::new(
            s,
            self.sampler.mat3(),
            [[0.0; 3]; 3],
            self.sampler.traceless_symmetric3(),
        );
        Witness {
            label: format!("asd_general(s={s:.4}, random B, random W-) {component}"),
            blocks,
            component,
            t1: 0.8,
        }
    }

    fn class_label(&self, w: &Witness, n: StructureIndex) -> String {
        let conds: Vec<&str> = self
            .id
            .class()
            .conditions()
            .iter()
            .map(|c| c.name())
            .collect();
        format!(
            "{} n={}: {} [{}]",
            w.label,
            n,
            self.id.class(),
            conds.join(", ")
        )
    }

    fn expect_class(&mut self, w: &Witness, diagnostic: bool) {
        for n in self.id.structures() {
            let r = w.residuals(n, self.cfg).class_residual(self.id.class());
            let label = self.class_label(w, n);
            self.push(label, r, self.cfg.tol, Bound::AtMost, diagnostic);
        }
    }

    fn expect_fails(&mut self, w: &Witness, threshold: f64) {
        for n in self.id.structures() {
            let r = w.residuals(n, self.cfg).class_residual(self.id.class());
            let label = self.class_label(w, n);
            self.push(label, r, threshold, Bound::Above, false);
        }
    }

    fn perturb(&mut self, w: &Witness, kinds: &[Perturbation]) {
        for &p in kinds {
            let perturbed = w.perturbed(p, &mut self.sampler);
            self.expect_fails(&perturbed, BREAK_THRESHOLD);
        }
    }

    fn never_on_plus_plus(&mut self, t1: f64) {
        let pp = Component::PLUS_PLUS;
        let mut witnesses = vec![
            Witness::model(ModelName::Flat, 0.0, pp, t1),
            Witness::model(ModelName::ConstantCurvature, 12.0, pp, t1),
            Witness::model(ModelName::ConstantCurvature, -12.0, pp, t1),
        ];
        let s = 12.0 * self.sampler.normal();
        witnesses.push(self.asd_general(s, pp));
        for w in &witnesses {
            self.expect_fails(w, BREAK_THRESHOLD);
        }
    }

    /// `(D_V Ω)(E₁, E₃)` at `J = √2(s₁⁺, s₂⁺)`, `V = (0, s₁⁺)`.
    fn explicit_not_kaehler(&mut self) {
        let point = point_from(TwoVector::s(Sign::Plus, 1), TwoVector::s(Sign::Plus, 2));
        let v = GTangent::vertical(VerticalVector {
            v1: ZERO4,
            v2: TwoVector::s(Sign::Plus, 1).endomorphism(),
        });
        let e1: Vec4 = [1.0, 0.0, 0.0, 0.0];
        let e3: Vec4 = [0.0, 0.0, 1.0, 0.0];
        for n in self.id.structures() {
            let r = CurvatureOperator::identity();
            let t = TwistorTensors::new(point, r, Params::new(0.5, T2, n.get()).expect("valid"));
            let value = t
                .cov_deriv(&v, &GTangent::horizontal(e1), &GTangent::horizontal(e3))
                .expect("vertical by construction");
            self.push(
                format!(
                    "|(D_V Ω)(E1,E3)| at J = √2(s1+, s2+), V2 = s1+, constant_curvature(12) n={n}"
                ),
                value.abs(),
                BREAK_THRESHOLD,
                Bound::Above,
                false,
            );
        }
    }

    /// `δΩ(0, s₁⁺)` at `J = √2(s₃⁺, s₂⁺)` on constant curvature `s`.
    fn explicit_codiff(&mut self, s: f64) {
        let point = point_from(TwoVector::s(Sign::Plus, 3), TwoVector::s(Sign::Plus, 2));
        let v = GTangent::vertical(VerticalVector {
            v1: ZERO4,
            v2: TwoVector::s(Sign::Plus, 1).endomorphism(),
        });
        let r = CurvatureOperator::identity().scale(s / 12.0);
        for n in self.id.structures() {
            let t = TwistorTensors::new(point, r, Params::new(1.0, T2, n.get()).expect("valid"));
            let value = t.codiff(&v).expect("vertical by construction");
            self.push(
                format!("|δΩ(V)| at J = √2(s3+, s2+), V2 = s1+, constant_curvature({s}) n={n}"),
                value.abs(),
                BREAK_THRESHOLD,
                Bound::Above,
                false,
            );
        }
    }
}

fn point_from(u1: TwoVector, u2: TwoVector) -> ProductTwistorPoint {
    ProductTwistorPoint::new(
        sphere_to_j(&u1, Sign::Plus).expect("unit"),
        sphere_to_j(&u2, Sign::Plus).expect("unit"),
    )
}
