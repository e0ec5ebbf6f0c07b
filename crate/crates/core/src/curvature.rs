//! Algebraic curvature operators on `Λ²R⁴` and their block decomposition
//!
//! ```text
//! R = | (s/12) Id + W₊        Bᵀ          |
//!     |        B         (s/12) Id + W₋   |
//! ```
//!
//! in the `(s⁺, s⁻)` ordering, where `B : Λ²₊ → Λ²₋` is the traceless Ricci
//! part and `W±` are the Weyl blocks. Operators whose `W±` are not traceless
//! are allowed and marked non-strict.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::four_dim::TwoVector;
use crate::linalg::{
    max_abs3, max_abs6, symmetric_residual3, symmetric_residual6, trace3, Mat3, Mat4, Mat6, Vec4,
    IDENTITY3, ZERO3,
};
use crate::twistor::{Params, ProductTwistorPoint, TwistorTensors, VerticalVector};

const SYMMETRY_TOL: f64 = 1e-12;
const STRICT_TOL: f64 = 1e-10;

/// A symmetric endomorphism of `Λ²R⁴`, stored in the `s_i^±` basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureOperator {
    m: Mat6,
}

impl CurvatureOperator {
    pub const ZERO: CurvatureOperator = CurvatureOperator { m: [[0.0; 6]; 6] };

    pub fn new(m: Mat6) -> Result<Self> {
        let residual = symmetric_residual6(&m);
        if residual > SYMMETRY_TOL * (1.0 + max_abs6(&m)) {
            return Err(Error::NotSymmetric { residual });
        }
        Ok(Self { m })
    }

    pub fn identity() -> Self {
        let mut m = [[0.0; 6]; 6];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self { m }
    }

    pub fn matrix(&self) -> &Mat6 {
        &self.m
    }

    pub fn apply(&self, sigma: &TwoVector) -> TwoVector {
        let mut out = [0.0; 6];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..6).map(|j| self.m[i][j] * sigma.0[j]).sum();
        }
        TwoVector(out)
    }

    /// `g(R σ, τ)`.
    #[inline]
    pub fn pair(&self, sigma: &TwoVector, tau: &TwoVector) -> f64 {
        let mut acc = 0.0;
        for i in 0..6 {
            let mut row = 0.0;
            for j in 0..6 {
                row += self.m[i][j] * sigma.0[j];
            }
            acc += row * tau.0[i];
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = self.m;
        for i in 0..6 {
            for j in 0..6 {
                m[i][j] += other.m[i][j];
            }
        }
        Self { m }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            m: self.m.map(|row| row.map(|v| v * s)),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..6).map(|i| self.m[i][i]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        max_abs6(&self.m)
    }

    /// The skew endomorphism `r` of `R⁴` with `g(r z, w) = g(R(x∧y), z∧w)`.
    pub fn curvature_endo(&self, x: &Vec4, y: &Vec4) -> Mat4 {
        self.apply(&TwoVector::wedge(x, y)).endomorphism()
    }

    /// Conjugation by the orientation-reversing reflection `e₄ ↦ -e₄`.
    ///
    /// The reflection acts on `Λ²` by the signed swap `s₁± ↦ s₁∓`,
    /// `s₂± ↦ s₂∓`, `s₃± ↦ -s₃∓`, which exchanges the roles of `W₊` and `W₋`.
    pub fn reverse_orientation(&self) -> Self {
        let q = |i: usize| -> (usize, f64) {
            let target = (i + 3) % 6;
            (target, if i % 3 == 2 { -1.0 } else { 1.0 })
        };
        let mut m = [[0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                let (a, sa) = q(i);
                let (b, sb) = q(j);
                m[a][b] = sa * sb * self.m[i][j];
            }
        }
        Self { m }
    }
}

/// `H_t(R(X,Y)J, V) = 2 g(R(t₁(J₁V₁)^∧ + t₂(J₂V₂)^∧), X∧Y)`, where `R(X,Y)`
/// acts on each `J_k` by commutator.
pub fn coupling(
    r: &CurvatureOperator,
    x: &Vec4,
    y: &Vec4,
    point: &ProductTwistorPoint,
    v: &VerticalVector,
    params: &Params,
) -> Result<f64> {
    TwistorTensors::new(*point, *r, *params).coupling(x, y, v)
}

/// The `(s, B, W₊, W₋)` decomposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureBlocks {
    pub s: f64,
    /// Block `Λ²₊ → Λ²₋`: `b[i][j] = g(R s_j⁺, s_i⁻)`.
    pub b: Mat3,
    pub w_plus: Mat3,
    pub w_minus: Mat3,
    pub strict: bool,
}

impl CurvatureBlocks {
    /// Blocks with `strict` computed from the Weyl traces.
    pub fn new(s: f64, b: Mat3, w_plus: Mat3, w_minus: Mat3) -> Self {
        Self {
            s,
            b,
            w_plus,
            w_minus,
            strict: is_traceless(&w_plus) && is_traceless(&w_minus),
        }
    }

    pub fn constant(s: f64) -> Self {
        Self::new(s, ZERO3, ZERO3, ZERO3)
    }
}

fn is_traceless(w: &Mat3) -> bool {
    trace3(w).abs() <= STRICT_TOL
}

pub fn decompose(r: &CurvatureOperator) -> CurvatureBlocks {
    let m = &r.m;
    let s = 2.0 * r.trace();
    let shift = s / 12.0;
    let mut b = ZERO3;
    let mut w_plus = ZERO3;
    let mut w_minus = ZERO3;
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = m[i + 3][j];
            w_plus[i][j] = m[i][j];
            w_minus[i][j] = m[i + 3][j + 3];
        }
        w_plus[i][i] -= shift;
        w_minus[i][i] -= shift;
    }
    CurvatureBlocks::new(s, b, w_plus, w_minus)
}

pub fn compose(blocks: &CurvatureBlocks) -> Result<CurvatureOperator> {
    for w in [&blocks.w_plus, &blocks.w_minus] {
        let residual = symmetric_residual3(w);
        if residual > SYMMETRY_TOL * (1.0 + max_abs3(w)) {
            return Err(Error::NotSymmetric { residual });
        }
    }
    let shift = blocks.s / 12.0;
    let mut m = [[0.0; 6]; 6];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = blocks.w_plus[i][j];
            m[i + 3][j + 3] = blocks.w_minus[i][j];
            m[i + 3][j] = blocks.b[i][j];
            m[j][i + 3] = blocks.b[i][j];
        }
        m[i][i] += shift;
        m[i + 3][i + 3] += shift;
    }
    Ok(CurvatureOperator { m })
}

/// Built-in curvature models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModelName {
    Flat,
    ConstantCurvature,
    AsdRicciFlat,
    EinsteinAsd,
    AsdGeneral,
    /// Constant `s/12` on `Λ²₊`, zero on `Λ²₋`.
    KaehlerWitness,
    /// Same operator as [`ModelName::KaehlerWitness`], meant for `t₁ = 3/s`.
    W1Witness,
    /// As above with `s < 0`, meant for `t₁ = -6/s`.
    W2Witness,
}

impl ModelName {
    pub const ALL: [ModelName; 8] = [
        ModelName::Flat,
        ModelName::ConstantCurvature,
        ModelName::AsdRicciFlat,
        ModelName::EinsteinAsd,
        ModelName::AsdGeneral,
        ModelName::KaehlerWitness,
        ModelName::W1Witness,
        ModelName::W2Witness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelName::Flat => "flat",
            ModelName::ConstantCurvature => "constant_curvature",
            ModelName::AsdRicciFlat => "asd_ricci_flat",
            ModelName::EinsteinAsd => "einstein_asd",
            ModelName::AsdGeneral => "asd_general",
            ModelName::KaehlerWitness => "kaehler_witness",
            ModelName::W1Witness => "w1_witness",
            ModelName::W2Witness => "w2_witness",
        }
    }

    /// Which of `s`, `B`, `W₋` the model reads.
    pub fn uses(self) -> (bool, bool, bool) {
        match self {
            ModelName::Flat => (false, false, false),
            ModelName::ConstantCurvature
            | ModelName::KaehlerWitness
            | ModelName::W1Witness
            | ModelName::W2Witness => (true, false, false),
            ModelName::AsdRicciFlat => (false, false, true),
            ModelName::EinsteinAsd => (true, false, true),
            ModelName::AsdGeneral => (true, true, true),
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ModelName::Flat => "zero curvature",
            ModelName::ConstantCurvature => "(s/12) Id on all of Λ²",
            ModelName::AsdRicciFlat => "s = 0, B = 0, W+ = 0, traceless W-",
            ModelName::EinsteinAsd => "B = 0, W+ = 0, given s and W-",
            ModelName::AsdGeneral => "W+ = 0, given s, B and W-",
            ModelName::KaehlerWitness => "(s/12) Id on Λ²+, zero on Λ²- (non-strict)",
            ModelName::W1Witness => "as kaehler_witness, used with t1 = 3/s (non-strict)",
            ModelName::W2Witness => {
                "as kaehler_witness with s < 0, used with t1 = -6/s (non-strict)"
            }
        }
    }

    pub fn build(self, params: &ModelParams) -> Result<CurvatureOperator> {
        compose(&self.blocks(params)?)
    }

    pub fn blocks(self, params: &ModelParams) -> Result<CurvatureBlocks> {
        let ModelParams { s, b, w_minus } = *params;
        let (uses_s, uses_b, uses_w) = self.uses();
        let name = self.as_str();
        let invalid = |reason: String| Error::InvalidModel { name, reason };
        if !s.is_finite()
            || b.iter()
                .flatten()
                .chain(w_minus.iter().flatten())
                .any(|v| !v.is_finite())
        {
            return Err(invalid("parameters must be finite".to_string()));
        }
        if !uses_s && s != 0.0 {
            return Err(invalid(format!("scalar curvature is fixed to 0, got {s}")));
        }
        if !uses_b && max_abs3(&b) != 0.0 {
            return Err(invalid("Einstein models require B = 0".to_string()));
        }
        if !uses_w && max_abs3(&w_minus) != 0.0 {
            return Err(invalid("W- is determined by the model".to_string()));
        }
        let residual = symmetric_residual3(&w_minus);
        if residual > SYMMETRY_TOL * (1.0 + max_abs3(&w_minus)) {
            return Err(Error::NotSymmetric { residual });
        }
        let annihilate_minus = {
            let mut w = IDENTITY3;
            for row in w.iter_mut() {
                for v in row.iter_mut() {
                    *v *= -s / 12.0;
                }
            }
            w
        };
        Ok(match self {
            ModelName::Flat => CurvatureBlocks::constant(0.0),
            ModelName::ConstantCurvature => CurvatureBlocks::constant(s),
            ModelName::AsdRicciFlat => {
                if !is_traceless(&w_minus) {
                    return Err(invalid("W- must be traceless".to_string()));
                }
                CurvatureBlocks::new(0.0, ZERO3, ZERO3, w_minus)
            }
            ModelName::EinsteinAsd => CurvatureBlocks::new(s, ZERO3, ZERO3, w_minus),
            ModelName::AsdGeneral => CurvatureBlocks::new(s, b, ZERO3, w_minus),
            ModelName::KaehlerWitness | ModelName::W1Witness => {
                CurvatureBlocks::new(s, ZERO3, ZERO3, annihilate_minus)
            }
            ModelName::W2Witness => {
                if s >= 0.0 {
                    return Err(invalid(format!("requires s < 0, got {s}")));
                }
                CurvatureBlocks::new(s, ZERO3, ZERO3, annihilate_minus)
            }
        })
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ModelName::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Unknown {
                kind: "model",
                value: s.to_string(),
            })
    }
}

/// Inputs for [`ModelName::build`]; fields a model does not read must be zero.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct ModelParams {
    pub s: f64,
    pub b: Mat3,
    pub w_minus: Mat3,
}

impl ModelParams {
    pub fn scalar(s: f64) -> Self {
        Self {
            s,
            ..Self::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: [f64; 6]) -> CurvatureOperator {
        let mut m = [[0.0; 6]; 6];
        for i in 0..6 {
            m[i][i] = d[i];
        }
        CurvatureOperator::new(m).unwrap()
    }

    #[test]
    fn identity_decomposes_to_s_12() {
        let b = decompose(&CurvatureOperator::identity());
        assert_eq!(b.s, 12.0);
        assert_eq!(b.b, ZERO3);
        assert_eq!(b.w_plus, ZERO3);
        assert_eq!(b.w_minus, ZERO3);
        assert!(b.strict);
    }

    #[test]
    fn zero_decomposes_to_zero() {
        let b = decompose(&CurvatureOperator::ZERO);
        assert_eq!(b, CurvatureBlocks::constant(0.0));
    }

    #[test]
    fn half_identity_is_non_strict() {
        let b = decompose(&diag([1.0, 1.0, 1.0, 0.0, 0.0, 0.0]));
        assert_eq!(b.s, 6.0);
        assert_eq!(
            b.w_plus,
            [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.5]]
        );
        assert!(!b.strict);
    }

    #[test]
    fn compose_places_blocks() {
        let w = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 0.0]];
        let r = compose(&CurvatureBlocks::new(0.0, ZERO3, ZERO3, w)).unwrap();
        assert_eq!(r, diag([0.0, 0.0, 0.0, 1.0, -1.0, 0.0]));
        assert_eq!(
            compose(&CurvatureBlocks::constant(12.0)).unwrap(),
            CurvatureOperator::identity()
        );
    }

    #[test]
    fn asymmetric_rejected() {
        let mut m = [[0.0; 6]; 6];
        m[0][1] = 1.0;
        assert!(matches!(
            CurvatureOperator::new(m),
            Err(Error::NotSymmetric { .. })
        ));
        let mut w = ZERO3;
        w[0][2] = 1.0;
        assert!(compose(&CurvatureBlocks::new(0.0, ZERO3, w, ZERO3)).is_err());
    }

    #[test]
    fn models() {
        assert_eq!(
            ModelName::Flat.build(&ModelParams::default()).unwrap(),
            CurvatureOperator::ZERO
        );
        assert_eq!(
            ModelName::ConstantCurvature
                .build(&ModelParams::scalar(12.0))
                .unwrap(),
            CurvatureOperator::identity()
        );
        assert_eq!(
            ModelName::KaehlerWitness
                .build(&ModelParams::scalar(12.0))
                .unwrap(),
            diag([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])
        );
        assert!(
            !ModelName::W1Witness
                .blocks(&ModelParams::scalar(12.0))
                .unwrap()
                .strict
        );
    }

    #[test]
    fn model_errors() {
        assert!(ModelName::W2Witness
            .build(&ModelParams::scalar(1.0))
            .is_err());
        assert!(ModelName::W2Witness
            .build(&ModelParams::scalar(0.0))
            .is_err());
        let mut p = ModelParams::scalar(3.0);
        p.b[0][1] = 0.5;
        assert!(ModelName::EinsteinAsd.build(&p).is_err());
        assert!(ModelName::AsdGeneral.build(&p).is_ok());
        let q = ModelParams {
            w_minus: IDENTITY3,
            ..ModelParams::default()
        };
        assert!(ModelName::AsdRicciFlat.build(&q).is_err());
        assert!("bogus".parse::<ModelName>().is_err());
        for m in ModelName::ALL {
            assert_eq!(m.as_str().parse::<ModelName>().unwrap(), m);
        }
    }

    #[test]
    fn curvature_endo_of_identity() {
        let e1 = [1.0, 0.0, 0.0, 0.0];
        let e2 = [0.0, 1.0, 0.0, 0.0];
        let r = CurvatureOperator::identity().curvature_endo(&e1, &e2);
        let img = crate::linalg::apply4(&r, &e1);
        assert!((img[1] - 1.0).abs() < 1e-15 && img[0].abs() < 1e-15);
        let back = CurvatureOperator::identity().curvature_endo(&e2, &e1);
        assert!((crate::linalg::apply4(&back, &e1)[1] + 1.0).abs() < 1e-15);
        assert_eq!(
            CurvatureOperator::ZERO.curvature_endo(&e1, &e2),
            [[0.0; 4]; 4]
        );
    }

    #[test]
    fn orientation_reversal_swaps_weyl_blocks() {
        let wp = [[1.0, 2.0, 0.0], [2.0, -3.0, 0.5], [0.0, 0.5, 2.0]];
        let r = compose(&CurvatureBlocks::new(5.0, ZERO3, wp, ZERO3)).unwrap();
        let rev = decompose(&r.reverse_orientation());
        assert_eq!(rev.w_plus, ZERO3);
        assert!((max_abs3(&rev.w_minus) - 3.0).abs() < 1e-12);
        assert_eq!(r.reverse_orientation().reverse_orientation(), r);
    }
}
