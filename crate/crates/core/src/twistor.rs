//! The product twistor space `Z ×_M Z` at a single point.
//!
//! A tangent vector is a horizontal part `X ∈ R⁴` plus a vertical pair
//! `(V₁, V₂)` with `V_k` anticommuting with `J_k`. The metric is
//! `H_t = g + t₁ G + t₂ G`, and `J^n` acts as `J₁` horizontally and by
//! `(J₁V₁, ±J₂V₂)` up to an overall sign vertically.
//!
//! All derivatives are evaluated in a normal frame at the base point, so the
//! curvature operator is the only input besides the point and the parameters.

use alloc::string::ToString;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use crate::curvature::CurvatureOperator;
use crate::error::{Error, Result};
use crate::fibre::VERIFY_TOL;
use crate::four_dim::{vertical_basis, OrientedComplexStructure4, Sign, TwoVector};
use crate::linalg::{
    add4, anticommutator_residual4, apply4, dot4, inner_g4, max_abs4, mul4, scale4, sub4, Mat4,
    Vec4, ZERO4,
};

/// Which of the four almost complex structures `J¹ … J⁴`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StructureIndex(u8);

impl StructureIndex {
    pub const ALL: [StructureIndex; 4] = [
        StructureIndex(1),
        StructureIndex(2),
        StructureIndex(3),
        StructureIndex(4),
    ];

    pub fn new(n: u8) -> Result<Self> {
        if (1..=4).contains(&n) {
            Ok(Self(n))
        } else {
            Err(Error::InvalidParameter {
                name: "n",
                reason: alloc::format!("must be 1, 2, 3 or 4, got {n}"),
            })
        }
    }

    pub fn get(self) -> u8 {
        self.0
    }

    /// `+1` for `n ∈ {1, 4}`, `-1` for `n ∈ {2, 3}`.
    pub fn sigma(self) -> f64 {
        match self.0 {
            1 | 4 => 1.0,
            _ => -1.0,
        }
    }

    /// `(-1)^n`.
    pub fn parity(self) -> f64 {
        if self.0.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Signs `(a, b)` with `J^n(V₁, V₂) = (a J₁V₁, b J₂V₂)`.
    pub fn vertical_signs(self) -> (f64, f64) {
        match self.0 {
            1 => (1.0, 1.0),
            2 => (1.0, -1.0),
            3 => (-1.0, 1.0),
            _ => (-1.0, -1.0),
        }
    }

    /// Whether `J^n` restricts to the Eells-Salamon structure on the first factor.
    pub fn is_eells_salamon(self) -> bool {
        self.0 >= 3
    }
}

impl fmt::Display for StructureIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `t = (t₁, t₂)` and the structure index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub t1: f64,
    pub t2: f64,
    pub n: StructureIndex,
}

impl Params {
    pub fn new(t1: f64, t2: f64, n: u8) -> Result<Self> {
        for (name, t) in [("t1", t1), ("t2", t2)] {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: alloc::format!("must be a positive finite number, got {t}"),
                });
            }
        }
        Ok(Self {
            t1,
            t2,
            n: StructureIndex::new(n)?,
        })
    }

    pub fn with_n(self, n: StructureIndex) -> Self {
        Self { n, ..self }
    }
}

/// Connected component `Z_{ε₁} ×_M Z_{ε₂}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Component {
    pub first: Sign,
    pub second: Sign,
}

impl Component {
    pub const PLUS_PLUS: Component = Component::new(Sign::Plus, Sign::Plus);
    pub const PLUS_MINUS: Component = Component::new(Sign::Plus, Sign::Minus);
    pub const MINUS_PLUS: Component = Component::new(Sign::Minus, Sign::Plus);
    pub const MINUS_MINUS: Component = Component::new(Sign::Minus, Sign::Minus);
    pub const ALL: [Component; 4] = [
        Component::PLUS_PLUS,
        Component::PLUS_MINUS,
        Component::MINUS_PLUS,
        Component::MINUS_MINUS,
    ];

    pub const fn new(first: Sign, second: Sign) -> Self {
        Self { first, second }
    }

    pub fn reversed(self) -> Self {
        Self::new(self.first.flip(), self.second.flip())
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.first.symbol(), self.second.symbol())
    }
}

impl FromStr for Component {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let sign = |c: char| match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        };
        let mut chars = s.chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(a), Some(b), None) => match (sign(a), sign(b)) {
                (Some(a), Some(b)) => Ok(Component::new(a, b)),
                _ => Err(unknown_component(s)),
            },
            _ => Err(unknown_component(s)),
        }
    }
}

fn unknown_component(s: &str) -> Error {
    Error::Unknown {
        kind: "component",
        value: s.to_string(),
    }
}

/// A point `J = (J₁, J₂)` of a fibre of `Z ×_M Z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductTwistorPoint {
    pub j1: OrientedComplexStructure4,
    pub j2: OrientedComplexStructure4,
}

impl ProductTwistorPoint {
    pub fn new(j1: OrientedComplexStructure4, j2: OrientedComplexStructure4) -> Self {
        Self { j1, j2 }
    }

    pub fn component(&self) -> Component {
        Component::new(self.j1.sign(), self.j2.sign())
    }

    /// Orientation reversal `e₄ ↦ -e₄` applied to both factors.
    pub fn reflect(&self) -> Self {
        let r = |j: &OrientedComplexStructure4| {
            OrientedComplexStructure4::new(crate::four_dim::reflect_endomorphism(j.matrix()))
                .expect("reflection preserves complex structures")
        };
        Self::new(r(&self.j1), r(&self.j2))
    }
}

/// A vertical vector `(V₁, V₂)`. Verticality is checked when a tensor is
/// evaluated on it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerticalVector {
    pub v1: Mat4,
    pub v2: Mat4,
}

impl VerticalVector {
    pub const ZERO: VerticalVector = VerticalVector {
        v1: ZERO4,
        v2: ZERO4,
    };

    pub fn new(point: &ProductTwistorPoint, v1: Mat4, v2: Mat4) -> Result<Self> {
        let v = Self { v1, v2 };
        v.check(point)?;
        Ok(v)
    }

    pub fn check(&self, point: &ProductTwistorPoint) -> Result<()> {
        for (j, v) in [(point.j1.matrix(), &self.v1), (point.j2.matrix(), &self.v2)] {
            let skew = crate::linalg::skew_residual4(v);
            if skew > VERIFY_TOL * (1.0 + max_abs4(v)) {
                return Err(Error::NotSkew { residual: skew });
            }
            let residual = anticommutator_residual4(j, v);
            if residual > VERIFY_TOL * (1.0 + max_abs4(v)) {
                return Err(Error::NotTangent { residual });
            }
        }
        Ok(())
    }
}

impl Add for VerticalVector {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            v1: add4(&self.v1, &o.v1),
            v2: add4(&self.v2, &o.v2),
        }
    }
}

impl Mul<f64> for VerticalVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self {
            v1: scale4(&self.v1, s),
            v2: scale4(&self.v2, s),
        }
    }
}

/// `X^h + (V₁, V₂)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GTangent {
    pub x: Vec4,
    pub v: VerticalVector,
}

impl GTangent {
    pub const ZERO: GTangent = GTangent {
        x: [0.0; 4],
        v: VerticalVector::ZERO,
    };

    pub fn new(x: Vec4, v: VerticalVector) -> Self {
        Self { x, v }
    }

    pub fn horizontal(x: Vec4) -> Self {
        Self::new(x, VerticalVector::ZERO)
    }

    pub fn vertical(v: VerticalVector) -> Self {
        Self::new([0.0; 4], v)
    }

    pub fn horizontal_part(&self) -> Self {
        Self::horizontal(self.x)
    }

    pub fn vertical_part(&self) -> Self {
        Self::vertical(self.v)
    }
}

impl Add for GTangent {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut x = self.x;
        for (a, b) in x.iter_mut().zip(o.x) {
            *a += b;
        }
        Self::new(x, self.v + o.v)
    }
}

impl Sub for GTangent {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for GTangent {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul<f64> for GTangent {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x.map(|v| v * s), self.v * s)
    }
}

/// The two readings of the printed formula for `H(N(X^h, Y^h), V)`, whose
/// parentheses do not close.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NijenhuisReading {
    /// `2(-1)^n g(R Q, X∧J₁Y + J₁X∧Y) - 2 g(R P, X∧Y - J₁X∧J₁Y)`.
    SignOnFirstTerm,
    /// `2(-1)^n [g(R Q, X∧J₁Y + J₁X∧Y) - 2 g(R P, X∧Y - J₁X∧J₁Y)]`.
    SignOnBoth,
}

impl NijenhuisReading {
    pub const ALL: [NijenhuisReading; 2] = [
        NijenhuisReading::SignOnFirstTerm,
        NijenhuisReading::SignOnBoth,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NijenhuisReading::SignOnFirstTerm => "sign-on-first-term",
            NijenhuisReading::SignOnBoth => "sign-on-both",
        }
    }
}

/// Residuals of the restriction identities to the first twistor factor.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct RestrictionResidual {
    pub metric: f64,
    pub omega: f64,
    pub cov_deriv: f64,
    pub ext_deriv: f64,
    pub codiff: f64,
}

impl RestrictionResidual {
    pub fn max(&self) -> f64 {
        [
            self.metric,
            self.omega,
            self.cov_deriv,
            self.ext_deriv,
            self.codiff,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `(H_t, J^n)` at a point with a given curvature operator.
#[derive(Clone, Copy, Debug)]
pub struct TwistorTensors {
    point: ProductTwistorPoint,
    r: CurvatureOperator,
    params: Params,
    j1_wedge: TwoVector,
    /// Sign in front of `t₁V₁^∧` inside the covariant derivative, by `n`.
    sign_table: [f64; 4],
}

impl TwistorTensors {
    pub fn new(point: ProductTwistorPoint, r: CurvatureOperator, params: Params) -> Self {
        Self {
            point,
            r,
            params,
            j1_wedge: point.j1.two_vector(),
            sign_table: [1.0, -1.0, -1.0, 1.0],
        }
    }

    /// Replaces the `n ↦ σ(n)` table used by the covariant derivative. Used
    /// only to build negative controls for the consistency checks.
    #[doc(hidden)]
    pub fn with_sign_table(mut self, table: [f64; 4]) -> Self {
        self.sign_table = table;
        self
    }

    pub fn point(&self) -> &ProductTwistorPoint {
        &self.point
    }

    pub fn curvature(&self) -> &CurvatureOperator {
        &self.r
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    fn check(&self, args: &[&GTangent]) -> Result<()> {
        args.iter().try_for_each(|a| a.v.check(&self.point))
    }

    fn j1(&self) -> &Mat4 {
        self.point.j1.matrix()
    }

    fn j1x(&self, x: &Vec4) -> Vec4 {
        apply4(self.j1(), x)
    }

    /// `t₁ (J₁V₁)^∧ + t₂ (J₂V₂)^∧`.
    fn p_vec(&self, v: &VerticalVector) -> TwoVector {
        let a = TwoVector::from_endomorphism(&mul4(self.j1(), &v.v1));
        let b = TwoVector::from_endomorphism(&mul4(self.point.j2.matrix(), &v.v2));
        a * self.params.t1 + b * self.params.t2
    }

    /// `σ t₁ V₁^∧ + t₂ V₂^∧`.
    fn q_vec(&self, v: &VerticalVector, sigma: f64) -> TwoVector {
        TwoVector::from_endomorphism(&v.v1) * (sigma * self.params.t1)
            + TwoVector::from_endomorphism(&v.v2) * self.params.t2
    }

    fn true_sigma(&self) -> f64 {
        self.params.n.sigma()
    }

    // ---- metric and structure ---------------------------------------------

    fn metric_raw(&self, a: &GTangent, b: &GTangent) -> f64 {
        dot4(&a.x, &b.x)
            + self.params.t1 * inner_g4(&a.v.v1, &b.v.v1)
            + self.params.t2 * inner_g4(&a.v.v2, &b.v.v2)
    }

    fn jn_raw(&self, a: &GTangent) -> GTangent {
        let (s1, s2) = self.params.n.vertical_signs();
        GTangent::new(
            self.j1x(&a.x),
            VerticalVector {
                v1: scale4(&mul4(self.j1(), &a.v.v1), s1),
                v2: scale4(&mul4(self.point.j2.matrix(), &a.v.v2), s2),
            },
        )
    }

    fn omega_raw(&self, a: &GTangent, b: &GTangent) -> f64 {
        self.metric_raw(&self.jn_raw(a), b)
    }

    pub fn metric(&self, a: &GTangent, b: &GTangent) -> Result<f64> {
        self.check(&[a, b])?;
        Ok(self.metric_raw(a, b))
    }

    pub fn jn(&self, a: &GTangent) -> Result<GTangent> {
        self.check(&[a])?;
        Ok(self.jn_raw(a))
    }

    /// `Ω(A, B) = H_t(J^n A, B)`.
    pub fn omega(&self, a: &GTangent, b: &GTangent) -> Result<f64> {
        self.check(&[a, b])?;
        Ok(self.omega_raw(a, b))
    }

    /// `H_t`-norm.
    pub fn norm(&self, a: &GTangent) -> f64 {
        libm::sqrt(self.metric_raw(a, a).max(0.0))
    }

    // ---- covariant derivative ---------------------------------------------

    /// `(D_V Ω)(X^h, Y^h)`.
    fn vhh(&self, v: &VerticalVector, x: &Vec4, y: &Vec4) -> f64 {
        let first = dot4(&apply4(&v.v1, x), y);
        let (jx, jy) = (self.j1x(x), self.j1x(y));
        let w = TwoVector::wedge(x, &jy) + TwoVector::wedge(&jx, y);
        first - self.r.pair(&self.p_vec(v), &w)
    }

    /// `(D_{Z^h} Ω)(X^h, V)`.
    fn hhv(&self, z: &Vec4, x: &Vec4, v: &VerticalVector, sigma: f64) -> f64 {
        let zx = TwoVector::wedge(z, x);
        let zjx = TwoVector::wedge(z, &self.j1x(x));
        self.params.n.parity() * self.r.pair(&self.q_vec(v, sigma), &zx)
            + self.r.pair(&self.p_vec(v), &zjx)
    }

    fn cov_deriv_raw(&self, a: &GTangent, b: &GTangent, c: &GTangent) -> f64 {
        let sigma = self.sign_table[usize::from(self.params.n.get() - 1)];
        self.vhh(&a.v, &b.x, &c.x) + self.hhv(&a.x, &b.x, &c.v, sigma)
            - self.hhv(&a.x, &c.x, &b.v, sigma)
    }

    /// `(D_A Ω)(B, C)`.
    pub fn cov_deriv(&self, a: &GTangent, b: &GTangent, c: &GTangent) -> Result<f64> {
        self.check(&[a, b, c])?;
        Ok(self.cov_deriv_raw(a, b, c))
    }

    // ---- exterior derivative ----------------------------------------------

    /// `dΩ(X^h, Y^h, V)`.
    fn d_hhv(&self, x: &Vec4, y: &Vec4, v: &VerticalVector) -> f64 {
        dot4(&apply4(&v.v1, x), y)
            + 2.0
                * self.params.n.parity()
                * self
                    .r
                    .pair(&self.q_vec(v, self.true_sigma()), &TwoVector::wedge(x, y))
    }

    fn ext_deriv_raw(&self, a: &GTangent, b: &GTangent, c: &GTangent) -> f64 {
        self.d_hhv(&a.x, &b.x, &c.v) + self.d_hhv(&b.x, &c.x, &a.v) + self.d_hhv(&c.x, &a.x, &b.v)
    }

    /// `dΩ(A, B, C)` from the closed form.
    pub fn ext_deriv(&self, a: &GTangent, b: &GTangent, c: &GTangent) -> Result<f64> {
        self.check(&[a, b, c])?;
        Ok(self.ext_deriv_raw(a, b, c))
    }

    fn ext_deriv_cyclic_raw(&self, a: &GTangent, b: &GTangent, c: &GTangent) -> f64 {
        self.cov_deriv_raw(a, b, c) + self.cov_deriv_raw(b, c, a) + self.cov_deriv_raw(c, a, b)
    }

    /// `dΩ(A, B, C)` as the cyclic sum of `(D_A Ω)(B, C)`.
    pub fn ext_deriv_cyclic(&self, a: &GTangent, b: &GTangent, c: &GTangent) -> Result<f64> {
        self.check(&[a, b, c])?;
        Ok(self.ext_deriv_cyclic_raw(a, b, c))
    }

    // ---- codifferential ----------------------------------------------------

    fn codiff_raw(&self, a: &GTangent) -> f64 {
        -2.0 * self.r.pair(&self.p_vec(&a.v), &self.j1_wedge)
    }

    /// `δΩ(A)` from the closed form.
    pub fn codiff(&self, a: &GTangent) -> Result<f64> {
        self.check(&[a])?;
        Ok(self.codiff_raw(a))
    }

    fn codiff_frame_trace_raw(&self, a: &GTangent) -> f64 {
        -self
            .frame()
            .iter()
            .map(|e| self.cov_deriv_raw(e, e, a))
            .sum::<f64>()
    }

    /// `δΩ(A) = -Σ (D_{E_α} Ω)(E_α, A)` over an orthonormal frame.
    pub fn codiff_frame_trace(&self, a: &GTangent) -> Result<f64> {
        self.check(&[a])?;
        Ok(self.codiff_frame_trace_raw(a))
    }

    /// `H_t`-orthonormal frame: `e₁ … e₄` horizontally, then the vertical
    /// bases of each factor scaled by `1/√t_k`.
    pub fn frame(&self) -> [GTangent; 8] {
        let mut out = [GTangent::ZERO; 8];
        for (i, e) in out.iter_mut().take(4).enumerate() {
            e.x[i] = 1.0;
        }
        let s1 = 1.0 / libm::sqrt(self.params.t1);
        let s2 = 1.0 / libm::sqrt(self.params.t2);
        let [a, b] = vertical_basis(&self.point.j1);
        let [c, d] = vertical_basis(&self.point.j2);
        out[4].v.v1 = scale4(&a, s1);
        out[5].v.v1 = scale4(&b, s1);
        out[6].v.v2 = scale4(&c, s2);
        out[7].v.v2 = scale4(&d, s2);
        out
    }

    // ---- Nijenhuis tensor -------------------------------------------------

    fn nijenhuis_raw(&self, a: &GTangent, b: &GTangent, c: &GTangent) -> f64 {
        let (ja, jb) = (self.jn_raw(a), self.jn_raw(b));
        self.cov_deriv_raw(a, &jb, c) - self.cov_deriv_raw(b, &ja, c)
            + self.cov_deriv_raw(&ja, b, c)
            - self.cov_deriv_raw(&jb, a, c)
    }

    /// `H_t(N(A, B), C)` from the covariant derivative of `Ω`.
    pub fn nijenhuis(&self, a: &GTangent, b: &GTangent, c: &GTangent) -> Result<f64> {
        self.check(&[a, b, c])?;
        Ok(self.nijenhuis_raw(a, b, c))
    }

    /// `H_t(N(X^h, Y^h), V)`.
    fn n_hhv(&self, x: &Vec4, y: &Vec4, v: &VerticalVector, reading: NijenhuisReading) -> f64 {
        let (jx, jy) = (self.j1x(x), self.j1x(y));
        let sym = TwoVector::wedge(x, &jy) + TwoVector::wedge(&jx, y);
        let anti = TwoVector::wedge(x, y) - TwoVector::wedge(&jx, &jy);
        let q = self.r.pair(&self.q_vec(v, self.true_sigma()), &sym);
        let p = self.r.pair(&self.p_vec(v), &anti);
        let parity = self.params.n.parity();
        match reading {
            NijenhuisReading::SignOnFirstTerm => 2.0 * parity * q - 2.0 * p,
            NijenhuisReading::SignOnBoth => 2.0 * parity * (q - 2.0 * p),
        }
    }

    /// `H_t(N(X^h, V), Y^h)`.
    fn n_hvh(&self, x: &Vec4, v: &VerticalVector, y: &Vec4) -> f64 {
        if self.params.n.is_eells_salamon() {
            2.0 * dot4(&apply4(&mul4(self.j1(), &v.v1), x), y)
        } else {
            0.0
        }
    }

    fn nijenhuis_closed_raw(
        &self,
        a: &GTangent,
        b: &GTangent,
        c: &GTangent,
        reading: NijenhuisReading,
    ) -> f64 {
        self.n_hhv(&a.x, &b.x, &c.v, reading) + self.n_hvh(&a.x, &b.v, &c.x)
            - self.n_hvh(&b.x, &a.v, &c.x)
    }

    /// `H_t(N(A, B), C)` from the component formulas, under a reading of the
    /// `(X^h, Y^h, V)` component.
    pub fn nijenhuis_closed(
        &self,
        a: &GTangent,
        b: &GTangent,
        c: &GTangent,
        reading: NijenhuisReading,
    ) -> Result<f64> {
        self.check(&[a, b, c])?;
        Ok(self.nijenhuis_closed_raw(a, b, c, reading))
    }

    // ---- Levi-Civita pieces and curvature coupling -------------------------

    /// `2 g(R(t₁(J₁V₁)^∧ + t₂(J₂V₂)^∧), X∧Y)`, which equals `H_t(R(X,Y)J, V)`.
    pub fn coupling(&self, x: &Vec4, y: &Vec4, v: &VerticalVector) -> Result<f64> {
        v.check(&self.point)?;
        Ok(2.0 * self.r.pair(&self.p_vec(v), &TwoVector::wedge(x, y)))
    }

    /// Vertical part of `D_{X^h} Y^h`, namely `½ R(X,Y)J` with `R(X,Y)` acting
    /// on `J_k` by commutator.
    pub fn lc_horizontal_vertical_part(&self, x: &Vec4, y: &Vec4) -> VerticalVector {
        let r = self.r.curvature_endo(x, y);
        let comm = |j: &Mat4| scale4(&sub4(&mul4(&r, j), &mul4(j, &r)), 0.5);
        VerticalVector {
            v1: comm(self.j1()),
            v2: comm(self.point.j2.matrix()),
        }
    }

    /// `H_t(D_V X^h, Y^h)`.
    pub fn lc_vertical_horizontal(&self, v: &VerticalVector, x: &Vec4, y: &Vec4) -> Result<f64> {
        v.check(&self.point)?;
        Ok(-self.r.pair(&self.p_vec(v), &TwoVector::wedge(x, y)))
    }

    // ---- restriction to the first factor -----------------------------------

    /// Compares the product-space tensors on arguments whose second vertical
    /// part vanishes with the corresponding tensors of a single twistor space
    /// `(Z, h_{t₁}, J)` over the first factor. `J` is the Atiyah-Hitchin-Singer
    /// structure for `n = 1, 2` and the Eells-Salamon structure for `n = 3, 4`.
    pub fn restriction_check(
        &self,
        a: &GTangent,
        b: &GTangent,
        c: &GTangent,
    ) -> Result<RestrictionResidual> {
        self.check(&[a, b, c])?;
        for arg in [a, b, c] {
            let m = max_abs4(&arg.v.v2);
            if m != 0.0 {
                return Err(Error::InvalidParameter {
                    name: "second vertical part",
                    reason: alloc::format!("must vanish for the restriction check, got {m:e}"),
                });
            }
        }
        let single = SingleTwistor {
            j: *self.j1(),
            j_wedge: self.j1_wedge,
            r: &self.r,
            t: self.params.t1,
            eells_salamon: self.params.n.is_eells_salamon(),
        };
        let (sa, sb, sc) = (single_arg(a), single_arg(b), single_arg(c));
        Ok(RestrictionResidual {
            metric: (single.metric(&sa, &sb) - self.metric_raw(a, b)).abs(),
            omega: (single.omega(&sa, &sb) - self.omega_raw(a, b)).abs(),
            cov_deriv: (single.cov_deriv(&sa, &sb, &sc) - self.cov_deriv_raw(a, b, c)).abs(),
            ext_deriv: (single.ext_deriv(&sa, &sb, &sc) - self.ext_deriv_raw(a, b, c)).abs(),
            codiff: (single.codiff(&sa) - self.codiff_raw(a)).abs(),
        })
    }
}

fn single_arg(a: &GTangent) -> (Vec4, Mat4) {
    (a.x, a.v.v1)
}

/// The twistor space of one factor with metric `h_t = g + tG` and the
/// structure `X ↦ JX`, `V ↦ ±JV`. Evaluated from its own closed forms, so it
/// serves as an independent oracle for the restriction identities.
struct SingleTwistor<'a> {
    j: Mat4,
    j_wedge: TwoVector,
    r: &'a CurvatureOperator,
    t: f64,
    eells_salamon: bool,
}

impl SingleTwistor<'_> {
    /// `ε` with `J V = ε J∘V`; `+1` for Atiyah-Hitchin-Singer.
    fn eps(&self) -> f64 {
        if self.eells_salamon {
            -1.0
        } else {
            1.0
        }
    }

    fn metric(&self, a: &(Vec4, Mat4), b: &(Vec4, Mat4)) -> f64 {
        dot4(&a.0, &b.0) + self.t * inner_g4(&a.1, &b.1)
    }

    fn omega(&self, a: &(Vec4, Mat4), b: &(Vec4, Mat4)) -> f64 {
        let ja = (
            apply4(&self.j, &a.0),
            scale4(&mul4(&self.j, &a.1), self.eps()),
        );
        self.metric(&ja, b)
    }

    fn jv_wedge(&self, v: &Mat4) -> TwoVector {
        TwoVector::from_endomorphism(&mul4(&self.j, v))
    }

    fn vhh(&self, v: &Mat4, x: &Vec4, y: &Vec4) -> f64 {
        let (jx, jy) = (apply4(&self.j, x), apply4(&self.j, y));
        dot4(&apply4(v, x), y)
            - self.t
                * self.r.pair(
                    &self.jv_wedge(v),
                    &(TwoVector::wedge(x, &jy) + TwoVector::wedge(&jx, y)),
                )
    }

    fn hhv(&self, z: &Vec4, x: &Vec4, v: &Mat4) -> f64 {
        let jx = apply4(&self.j, x);
        -self.eps()
            * self.t
            * self
                .r
                .pair(&TwoVector::from_endomorphism(v), &TwoVector::wedge(z, x))
            + self.t * self.r.pair(&self.jv_wedge(v), &TwoVector::wedge(z, &jx))
    }

    fn cov_deriv(&self, a: &(Vec4, Mat4), b: &(Vec4, Mat4), c: &(Vec4, Mat4)) -> f64 {
        self.vhh(&a.1, &b.0, &c.0) + self.hhv(&a.0, &b.0, &c.1) - self.hhv(&a.0, &c.0, &b.1)
    }

    fn d_hhv(&self, x: &Vec4, y: &Vec4, v: &Mat4) -> f64 {
        dot4(&apply4(v, x), y)
            - 2.0
                * self.eps()
                * self.t
                * self
                    .r
                    .pair(&TwoVector::from_endomorphism(v), &TwoVector::wedge(x, y))
    }

    fn ext_deriv(&self, a: &(Vec4, Mat4), b: &(Vec4, Mat4), c: &(Vec4, Mat4)) -> f64 {
        self.d_hhv(&a.0, &b.0, &c.1) + self.d_hhv(&b.0, &c.0, &a.1) + self.d_hhv(&c.0, &a.0, &b.1)
    }

    fn codiff(&self, a: &(Vec4, Mat4)) -> f64 {
        -2.0 * self.t * self.r.pair(&self.jv_wedge(&a.1), &self.j_wedge)
    }
}
