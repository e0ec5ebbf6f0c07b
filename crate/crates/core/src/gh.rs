//! Gray-Hervella classes of `(H_t, J^n)` detected by seeded sampling.
//!
//! Each defining condition is evaluated on random points of one component and
//! random tangent arguments; its residual is the supremum over the sample of
//! `|value| / (1 + Π |arg|_{H_t})`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::curvature::{decompose, CurvatureOperator};
use crate::error::{Error, Result};
use crate::sampling::Sampler;
use crate::twistor::{Component, GTangent, NijenhuisReading, Params, TwistorTensors};

/// A defining condition, named as in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// `DΩ = 0`.
    CovDeriv,
    /// `(D_A Ω)(A, B) = 0`.
    NearlyKaehler,
    /// `dΩ = 0`.
    ExtDeriv,
    /// `N = 0`.
    Nijenhuis,
    /// `δΩ = 0`.
    Codiff,
    /// `(D_A Ω)(B, C) + (D_{JA} Ω)(JB, C) = 0`.
    QuasiKaehler,
    /// `(D_A Ω)(A, C) - (D_{JA} Ω)(JA, C) = 0`.
    W1W3,
    /// Cyclic sum of `(D_A Ω)(B, C) - (D_{JA} Ω)(JB, C)` vanishes.
    W2W3,
}

impl Condition {
    pub const ALL: [Condition; 8] = [
        Condition::CovDeriv,
        Condition::NearlyKaehler,
        Condition::ExtDeriv,
        Condition::Nijenhuis,
        Condition::Codiff,
        Condition::QuasiKaehler,
        Condition::W1W3,
        Condition::W2W3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Condition::CovDeriv => "DΩ",
            Condition::NearlyKaehler => "W1-cond",
            Condition::ExtDeriv => "dΩ",
            Condition::Nijenhuis => "N",
            Condition::Codiff => "δΩ",
            Condition::QuasiKaehler => "quasi-cond",
            Condition::W1W3 => "W1W3-cond",
            Condition::W2W3 => "W2W3-cond",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Condition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Condition::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "condition",
                value: s.to_string(),
            })
    }
}

/// The classes reachable by the structures studied here.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GhClass {
    K,
    W1,
    W2,
    W3,
    W1W2,
    W1W3,
    W2W3,
    W1W2W3,
    Other,
}

impl GhClass {
    /// Bottom to top; earlier entries are never above later ones.
    pub const ALL: [GhClass; 9] = [
        GhClass::K,
        GhClass::W1,
        GhClass::W2,
        GhClass::W3,
        GhClass::W1W2,
        GhClass::W1W3,
        GhClass::W2W3,
        GhClass::W1W2W3,
        GhClass::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GhClass::K => "K",
            GhClass::W1 => "W1",
            GhClass::W2 => "W2",
            GhClass::W3 => "W3",
            GhClass::W1W2 => "W1W2",
            GhClass::W1W3 => "W1W3",
            GhClass::W2W3 => "W2W3",
            GhClass::W1W2W3 => "W1W2W3",
            GhClass::Other => "OTHER",
        }
    }

    /// Components `W_i` spanned, as a bit set; `Other` also carries `W₄`.
    fn bits(self) -> u8 {
        match self {
            GhClass::K => 0b0000,
            GhClass::W1 => 0b0001,
            GhClass::W2 => 0b0010,
            GhClass::W3 => 0b0100,
            GhClass::W1W2 => 0b0011,
            GhClass::W1W3 => 0b0101,
            GhClass::W2W3 => 0b0110,
            GhClass::W1W2W3 => 0b0111,
            GhClass::Other => 0b1111,
        }
    }

    /// Lattice order: `self ⊆ other`.
    pub fn is_below(self, other: GhClass) -> bool {
        self.bits() & !other.bits() == 0
    }

    /// Conditions whose vanishing defines the class.
    pub fn conditions(self) -> &'static [Condition] {
        use Condition::*;
        match self {
            GhClass::K => &[CovDeriv],
            GhClass::W1 => &[NearlyKaehler],
            GhClass::W2 => &[ExtDeriv],
            GhClass::W3 => &[Nijenhuis, Codiff],
            GhClass::W1W2 => &[QuasiKaehler],
            GhClass::W1W3 => &[W1W3, Codiff],
            GhClass::W2W3 => &[W2W3, Codiff],
            GhClass::W1W2W3 => &[Codiff],
            GhClass::Other => &[],
        }
    }

    /// Classes that can occur for a genuine (strict) curvature operator.
    pub fn possible_for(n: crate::twistor::StructureIndex) -> &'static [GhClass] {
        if n.is_eells_salamon() {
            &[
                GhClass::W1,
                GhClass::W2,
                GhClass::W1W2,
                GhClass::W1W3,
                GhClass::W2W3,
                GhClass::W1W2W3,
                GhClass::Other,
            ]
        } else {
            &[GhClass::K, GhClass::W3, GhClass::Other]
        }
    }
}

impl fmt::Display for GhClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GhClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GhClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "class",
                value: s.to_string(),
            })
    }
}

/// Sign between the two terms of the `W₁ ⊕ W₃` condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum W1W3Reading {
    /// `(D_A Ω)(A, C) - (D_{JA} Ω)(JA, C)`, which contains `W₃`.
    #[default]
    Minus,
    /// `(D_A Ω)(A, C) + (D_{JA} Ω)(JA, C)`.
    Plus,
}

/// Arguments inside the cyclic sum of the `W₂ ⊕ W₃` condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum W2W3Reading {
    /// `𝔖_{A,B,C} [(D_A Ω)(B, C) - (D_{JA} Ω)(JB, C)]`.
    #[default]
    ThreeArgument,
    /// `𝔖_{A,B,C} [(D_A Ω)(A, C) - (D_{JA} Ω)(JA, C)]`.
    Repeated,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplingConfig {
    pub seed: u64,
    pub num_points: usize,
    pub num_arg_triples: usize,
    pub tol: f64,
    pub w1w3: W1W3Reading,
    pub w2w3: W2W3Reading,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            num_points: 64,
            num_arg_triples: 32,
            tol: 1e-9,
            w1w3: W1W3Reading::default(),
            w2w3: W2W3Reading::default(),
        }
    }
}

impl SamplingConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_points == 0 {
            return Err(invalid("samples", "must be positive"));
        }
        if self.num_arg_triples == 0 {
            return Err(invalid("triples", "must be positive"));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(invalid("tol", "must be a positive finite number"));
        }
        Ok(())
    }
}

fn invalid(name: &'static str, reason: &str) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.to_string(),
    }
}

/// How the `(X^h, Y^h, V)` Nijenhuis component was read, with the sampled
/// discrepancy of each reading from the covariant-derivative identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NijenhuisResolution {
    pub selected: NijenhuisReading,
    pub discrepancy: [f64; 2],
}

impl NijenhuisResolution {
    pub fn note(&self) -> String {
        let [a, b] = self.discrepancy;
        format!(
            "N(X^h,Y^h,V) read as {} (identity discrepancy {:.3e}; {} gives {:.3e})",
            self.selected.as_str(),
            if self.selected == NijenhuisReading::SignOnFirstTerm {
                a
            } else {
                b
            },
            other_reading(self.selected).as_str(),
            if self.selected == NijenhuisReading::SignOnFirstTerm {
                b
            } else {
                a
            },
        )
    }
}

fn other_reading(r: NijenhuisReading) -> NijenhuisReading {
    match r {
        NijenhuisReading::SignOnFirstTerm => NijenhuisReading::SignOnBoth,
        NijenhuisReading::SignOnBoth => NijenhuisReading::SignOnFirstTerm,
    }
}

/// Supremum residual of every condition.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Residuals([f64; 8]);

impl Residuals {
    pub fn get(&self, c: Condition) -> f64 {
        self.0[c.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Condition, f64)> + '_ {
        Condition::ALL.into_iter().map(|c| (c, self.get(c)))
    }

    /// Largest residual among the defining conditions of `class`.
    pub fn class_residual(&self, class: GhClass) -> f64 {
        class
            .conditions()
            .iter()
            .map(|c| self.get(*c))
            .fold(0.0, f64::max)
    }

    fn bump(&mut self, c: Condition, v: f64) {
        let slot = &mut self.0[c.index()];
        // NaN must never pass a class
        if v.is_nan() || v > *slot {
            *slot = if v.is_nan() { f64::INFINITY } else { v };
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassReport {
    pub component: Component,
    pub params: Params,
    pub config: SamplingConfig,
    pub strict: bool,
    pub residuals: Residuals,
    /// Every class whose conditions pass, bottom to top.
    pub passing: Vec<GhClass>,
    pub detected: GhClass,
    pub flags: Vec<String>,
    pub nijenhuis: NijenhuisResolution,
}

impl ClassReport {
    pub fn passes(&self, class: GhClass) -> bool {
        self.passing.contains(&class)
    }
}

/// Per-sample evaluator of the condition values.
struct Evaluator<'a> {
    t: &'a TwistorTensors,
    cfg: &'a SamplingConfig,
}

impl Evaluator<'_> {
    fn d(&self, a: &GTangent, b: &GTangent, c: &GTangent) -> f64 {
        self.t
            .cov_deriv(a, b, c)
            .expect("sampled tangents are vertical")
    }

    fn j(&self, a: &GTangent) -> GTangent {
        self.t.jn(a).expect("sampled tangents are vertical")
    }

    fn record(
        &self,
        res: &mut Residuals,
        nij: &mut [f64; 2],
        a: &GTangent,
        b: &GTangent,
        c: &GTangent,
    ) {
        let t = self.t;
        let (na, nb, nc) = (t.norm(a), t.norm(b), t.norm(c));
        let abc = 1.0 + na * nb * nc;
        let aab = 1.0 + na * na * nb;
        let aac = 1.0 + na * na * nc;
        let (ja, jb) = (self.j(a), self.j(b));

        res.bump(Condition::CovDeriv, self.d(a, b, c).abs() / abc);
        res.bump(Condition::NearlyKaehler, self.d(a, a, b).abs() / aab);
        res.bump(
            Condition::ExtDeriv,
            t.ext_deriv(a, b, c).expect("vertical").abs() / abc,
        );
        let n = t.nijenhuis(a, b, c).expect("vertical");
        res.bump(Condition::Nijenhuis, n.abs() / abc);
        for (slot, reading) in nij.iter_mut().zip(NijenhuisReading::ALL) {
            let closed = t.nijenhuis_closed(a, b, c, reading).expect("vertical");
            *slot = slot.max((closed - n).abs() / abc);
        }
        res.bump(
            Condition::Codiff,
            t.codiff(a).expect("vertical").abs() / (1.0 + na),
        );
        res.bump(
            Condition::QuasiKaehler,
            (self.d(a, b, c) + self.d(&ja, &jb, c)).abs() / abc,
        );
        let sign = match self.cfg.w1w3 {
            W1W3Reading::Minus => -1.0,
            W1W3Reading::Plus => 1.0,
        };
        res.bump(
            Condition::W1W3,
            (self.d(a, a, c) + sign * self.d(&ja, &ja, c)).abs() / aac,
        );
        let w23 = match self.cfg.w2w3 {
            W2W3Reading::ThreeArgument => {
                let f = |x: &GTangent, y: &GTangent, z: &GTangent| {
                    self.d(x, y, z) - self.d(&self.j(x), &self.j(y), z)
                };
                f(a, b, c) + f(b, c, a) + f(c, a, b)
            }
            W2W3Reading::Repeated => {
                let f = |x: &GTangent, z: &GTangent| {
                    let jx = self.j(x);
                    self.d(x, x, z) - self.d(&jx, &jx, z)
                };
                f(a, c) + f(b, a) + f(c, b)
            }
        };
        let norm = match self.cfg.w2w3 {
            W2W3Reading::ThreeArgument => abc,
            W2W3Reading::Repeated => 1.0 + (na * na * nc).max(nb * nb * na).max(nc * nc * nb),
        };
        res.bump(Condition::W2W3, w23.abs() / norm);
    }
}

/// Samples all condition residuals and the Nijenhuis reading discrepancies.
fn sample(
    r: &CurvatureOperator,
    component: Component,
    params: Params,
    cfg: &SamplingConfig,
) -> (Residuals, [f64; 2]) {
    let mut sampler = Sampler::new(cfg.seed);
    let mut res = Residuals::default();
    let mut nij = [0.0; 2];
    for _ in 0..cfg.num_points {
        let point = sampler.point(component);
        let t = TwistorTensors::new(point, *r, params);
        let ev = Evaluator { t: &t, cfg };
        for _ in 0..cfg.num_arg_triples {
            let a = sampler.tangent(&t);
            let b = sampler.tangent(&t);
            let c = sampler.tangent(&t);
            ev.record(&mut res, &mut nij, &a, &b, &c);
        }
    }
    (res, nij)
}

/// Supremum residual of one condition.
pub fn residual(
    cond: Condition,
    r: &CurvatureOperator,
    component: Component,
    params: Params,
    cfg: &SamplingConfig,
) -> Result<f64> {
    cfg.validate()?;
    Ok(sample(r, component, params, cfg).0.get(cond))
}

pub fn classify(
    r: &CurvatureOperator,
    component: Component,
    params: Params,
    cfg: &SamplingConfig,
) -> Result<ClassReport> {
    cfg.validate()?;
    let (residuals, discrepancy) = sample(r, component, params, cfg);
    let passing: Vec<GhClass> = GhClass::ALL
        .into_iter()
        .filter(|c| residuals.class_residual(*c) <= cfg.tol)
        .collect();
    let minimal: Vec<GhClass> = passing
        .iter()
        .copied()
        .filter(|c| !passing.iter().any(|d| d != c && d.is_below(*c)))
        .collect();
    let detected = minimal[0];

    let mut flags = Vec::new();
    if minimal.len() > 1 {
        let names: Vec<&str> = minimal.iter().map(|c| c.as_str()).collect();
        flags.push(format!("multiple minimal classes: {}", names.join(", ")));
    }
    for c in GhClass::ALL {
        if detected.is_below(c) && !passing.contains(&c) {
            flags.push(format!(
                "lattice violation: {} detected but {} fails",
                detected, c
            ));
        }
    }
    let strict = decompose(r).strict;
    if !strict {
        flags.push("non-strict curvature operator (Weyl blocks not traceless)".to_string());
    } else if !GhClass::possible_for(params.n).contains(&detected) {
        flags.push(format!(
            "class {} is impossible for n = {} with a strict operator",
            detected, params.n
        ));
    }
    let selected = if discrepancy[0] <= discrepancy[1] {
        NijenhuisReading::SignOnFirstTerm
    } else {
        NijenhuisReading::SignOnBoth
    };
    Ok(ClassReport {
        component,
        params,
        config: *cfg,
        strict,
        residuals,
        passing,
        detected,
        flags,
        nijenhuis: NijenhuisResolution {
            selected,
            discrepancy,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(seed: u64) -> SamplingConfig {
        SamplingConfig {
            seed,
            num_points: 8,
            num_arg_triples: 8,
            ..SamplingConfig::default()
        }
    }

    #[test]
    fn lattice_order() {
        for c in GhClass::ALL {
            assert!(GhClass::K.is_below(c));
            assert!(c.is_below(GhClass::Other));
            assert!(c.is_below(c));
        }
        assert!(GhClass::W1.is_below(GhClass::W1W3));
        assert!(!GhClass::W2.is_below(GhClass::W1W3));
        assert!(GhClass::W1W2.is_below(GhClass::W1W2W3));
        assert!(!GhClass::Other.is_below(GhClass::W1W2W3));
    }

    #[test]
    fn names_round_trip() {
        for c in Condition::ALL {
            assert_eq!(c.name().parse::<Condition>().unwrap(), c);
        }
        for c in GhClass::ALL {
            assert_eq!(c.as_str().parse::<GhClass>().unwrap(), c);
        }
        assert!("bogus".parse::<Condition>().is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = SamplingConfig::default();
        assert!(c.validate().is_ok());
        c.tol = 0.0;
        assert!(c.validate().is_err());
        c = SamplingConfig {
            num_points: 0,
            ..SamplingConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn flat_is_w3_on_plus_plus() {
        let p = Params::new(1.0, 1.0, 1).unwrap();
        let rep = classify(&CurvatureOperator::ZERO, Component::PLUS_PLUS, p, &quick(1)).unwrap();
        assert_eq!(rep.detected, GhClass::W3);
        assert!(rep.flags.is_empty(), "{:?}", rep.flags);
        assert_eq!(rep.residuals.get(Condition::Codiff), 0.0);
        assert!(rep.residuals.get(Condition::CovDeriv) > 0.1);
    }

    #[test]
    fn tiny_tolerance_gives_other() {
        let p = Params::new(1.0, 1.0, 1).unwrap();
        let mut cfg = quick(1);
        cfg.tol = 1e-30;
        let rep = classify(&CurvatureOperator::ZERO, Component::PLUS_PLUS, p, &cfg).unwrap();
        // δΩ vanishes exactly for flat, but N is only zero up to rounding.
        assert!(matches!(rep.detected, GhClass::Other | GhClass::W1W2W3));
    }

    #[test]
    fn classify_is_deterministic() {
        let p = Params::new(0.5, 1.5, 3).unwrap();
        let r = CurvatureOperator::identity();
        let a = classify(&r, Component::PLUS_MINUS, p, &quick(5)).unwrap();
        let b = classify(&r, Component::PLUS_MINUS, p, &quick(5)).unwrap();
        assert_eq!(a, b);
    }
}
