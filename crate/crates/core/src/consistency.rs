//! Internal-consistency oracles: every closed form is compared against an
//! independent evaluation on seeded random data.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::fibre::{
    fibre_levi_civita, kaehler_k, EuclideanSpace, FibreTangentVector, KaehlerImage,
    OrthogonalComplexStructure, ProjectedConstant, SkewEndomorphism,
};
use crate::four_dim::TwoVector;
use crate::linalg::{inner_g4, mul4, sub4, Matrix};
use crate::sampling::Sampler;
use crate::twistor::{Component, NijenhuisReading, Params, StructureIndex, TwistorTensors};

pub const IDENTITY_TOL: f64 = 1e-10;
pub const FINITE_DIFFERENCE_TOL: f64 = 1e-6;

/// Flips every entry of the `σ(n)` table, as a negative control.
pub const CORRUPTED_SIGN_TABLE: [f64; 4] = [-1.0, 1.0, 1.0, -1.0];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Random configurations per check and per `(component, n)`.
    pub trials: usize,
    /// Configurations per dimension for the fibre check.
    pub fibre_trials: usize,
    pub corrupt_sign_table: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 500,
            fibre_trials: 20,
            corrupt_sign_table: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub max_residual: f64,
    pub tol: f64,
    /// Where the largest residual occurred.
    pub witness: String,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tol
    }
}

struct Tracker {
    name: &'static str,
    tol: f64,
    max: f64,
    witness: String,
}

impl Tracker {
    fn new(name: &'static str, tol: f64) -> Self {
        Self {
            name,
            tol,
            max: 0.0,
            witness: String::from("none"),
        }
    }

    fn record(&mut self, value: f64, witness: impl FnOnce() -> String) {
        if value.is_nan() || value > self.max {
            self.max = if value.is_nan() { f64::INFINITY } else { value };
            self.witness = witness();
        }
    }

    fn finish(self) -> CheckResult {
        CheckResult {
            name: self.name,
            max_residual: self.max,
            tol: self.tol,
            witness: self.witness,
        }
    }
}

pub fn selftest(opts: &SelftestOptions) -> Vec<CheckResult> {
    let mut out = twistor_checks(opts);
    out.push(lemma_curvature_commutator(
        opts.seed,
        2 * opts.trials.max(1),
    ));
    out.push(fibre_kaehler(opts.seed, opts.fibre_trials));
    out
}

/// `d = 𝔖 D`, `δ = -trace D`, the Nijenhuis identity and the restriction
/// identities over `G₊₊` and `G₊₋` for every `n`.
pub fn twistor_checks(opts: &SelftestOptions) -> Vec<CheckResult> {
    let mut d = Tracker::new("d=antisym D", IDENTITY_TOL);
    let mut delta = Tracker::new("δ=−trace", IDENTITY_TOL);
    let mut nij = Tracker::new("N-identity", IDENTITY_TOL);
    let mut restr = Tracker::new("restriction_check", IDENTITY_TOL);
    let mut sampler = Sampler::new(opts.seed);
    for component in [Component::PLUS_PLUS, Component::PLUS_MINUS] {
        for n in StructureIndex::ALL {
            for trial in 0..opts.trials {
                let r = sampler.symmetric_operator();
                let params = Params::new(
                    sampler.uniform(0.2, 3.0),
                    sampler.uniform(0.2, 3.0),
                    n.get(),
                )
                .expect("positive");
                let mut t = TwistorTensors::new(sampler.point(component), r, params);
                if opts.corrupt_sign_table {
                    t = t.with_sign_table(CORRUPTED_SIGN_TABLE);
                }
                let (a, b, c) = (
                    sampler.tangent(&t),
                    sampler.tangent(&t),
                    sampler.tangent(&t),
                );
                let scale = 1.0 + t.norm(&a) * t.norm(&b) * t.norm(&c);
                let at = || {
                    format!(
                        "seed {} component {component} n={n} trial {trial}",
                        opts.seed
                    )
                };

                let closed = t.ext_deriv(&a, &b, &c).expect("vertical");
                let cyclic = t.ext_deriv_cyclic(&a, &b, &c).expect("vertical");
                d.record((closed - cyclic).abs() / scale, at);

                let closed = t.codiff(&a).expect("vertical");
                let trace = t.codiff_frame_trace(&a).expect("vertical");
                delta.record((closed - trace).abs() / (1.0 + t.norm(&a)), at);

                let identity = t.nijenhuis(&a, &b, &c).expect("vertical");
                let closed = t
                    .nijenhuis_closed(&a, &b, &c, NijenhuisReading::SignOnFirstTerm)
                    .expect("vertical");
                nij.record((identity - closed).abs() / scale, at);

                let (fa, fb, fc) = (
                    sampler.first_factor_tangent(&t),
                    sampler.first_factor_tangent(&t),
                    sampler.first_factor_tangent(&t),
                );
                let fscale = 1.0 + t.norm(&fa) * t.norm(&fb) * t.norm(&fc);
                let res = t
                    .restriction_check(&fa, &fb, &fc)
                    .expect("first factor only");
                restr.record(res.max() / fscale, at);
            }
        }
    }
    vec![d.finish(), delta.finish(), nij.finish(), restr.finish()]
}

/// `G([R(X,Y), a], b) = g(R([a,b]^∧), X∧Y)` for random symmetric `R`.
pub fn lemma_curvature_commutator(seed: u64, trials: usize) -> CheckResult {
    let mut tr = Tracker::new("Lemma R[a,b]", IDENTITY_TOL);
    let mut sampler = Sampler::new(seed.wrapping_add(17));
    for trial in 0..trials {
        let r = sampler.symmetric_operator();
        let (a, b) = (sampler.skew4(), sampler.skew4());
        let (x, y) = (sampler.vec4(), sampler.vec4());
        let rxy = r.curvature_endo(&x, &y);
        let lhs = inner_g4(&sub4(&mul4(&rxy, &a), &mul4(&a, &rxy)), &b);
        let ab = TwoVector::from_endomorphism(&sub4(&mul4(&a, &b), &mul4(&b, &a)));
        let rhs = r.pair(&ab, &TwoVector::wedge(&x, &y));
        let scale = 1.0
            + r.max_abs()
                * TwoVector::from_endomorphism(&a).norm()
                * TwoVector::from_endomorphism(&b).norm()
                * crate::linalg::norm(&x)
                * crate::linalg::norm(&y);
        tr.record((lhs - rhs).abs() / scale, || {
            format!("seed {seed} trial {trial}")
        });
    }
    tr.finish()
}

/// `D𝒦 = 0` on the fibre with finite-difference derivatives, dims 4 and 6.
pub fn fibre_kaehler(seed: u64, trials: usize) -> CheckResult {
    let mut tr = Tracker::new("fibre DK=0", FINITE_DIFFERENCE_TOL);
    let mut sampler = Sampler::new(seed.wrapping_add(29));
    for dim in [4, 6] {
        let space = EuclideanSpace::new(dim).expect("even");
        for trial in 0..trials {
            let j = random_complex_structure(&mut sampler, space);
            let x = random_tangent(&mut sampler, &j);
            let field = ProjectedConstant {
                q: random_skew(&mut sampler, dim),
            };
            let y = fibre_levi_civita(&field, &x).expect("tangent");
            let lhs = fibre_levi_civita(&KaehlerImage(field), &x).expect("tangent");
            let rhs = kaehler_k(&y).expect("tangent");
            let diff = lhs.value().matrix().sub(rhs.value().matrix()).max_abs();
            tr.record(diff, || format!("seed {seed} dim {dim} trial {trial}"));
        }
    }
    tr.finish()
}

pub fn random_skew(sampler: &mut Sampler, dim: usize) -> Matrix {
    let a = Matrix::from_fn(dim, |_, _| 0.0);
    let mut a = a;
    for i in 0..dim {
        for j in (i + 1)..dim {
            let v = sampler.normal();
            a[(i, j)] = -v;
            a[(j, i)] = v;
        }
    }
    a
}

/// Haar-like orthogonal matrix by Gram-Schmidt on normal columns.
pub fn random_orthogonal(sampler: &mut Sampler, dim: usize) -> Matrix {
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| sampler.normal()).collect();
        for c in &cols {
            let p = crate::linalg::dot(&v, c);
            for (vi, ci) in v.iter_mut().zip(c) {
                *vi -= p * ci;
            }
        }
        let n = crate::linalg::norm(&v);
        if n > 1e-6 {
            cols.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    Matrix::from_fn(dim, |i, j| cols[j][i])
}

/// `q J₀ qᵀ` for the standard `J₀` and a random orthogonal `q`.
pub fn random_complex_structure(
    sampler: &mut Sampler,
    space: EuclideanSpace,
) -> OrthogonalComplexStructure {
    let q = random_orthogonal(sampler, space.dim());
    let j0 = OrthogonalComplexStructure::standard(space);
    let m = q.mul(j0.matrix()).mul(&q.transpose());
    let skew = SkewEndomorphism::new(antisymmetrize(&m)).expect("conjugate of a skew matrix");
    OrthogonalComplexStructure::new(skew).expect("conjugate of a complex structure")
}

pub fn random_tangent(sampler: &mut Sampler, j: &OrthogonalComplexStructure) -> FibreTangentVector {
    let w = random_skew(sampler, j.dim());
    let v = SkewEndomorphism::new(antisymmetrize(&j.project_tangent(&w))).expect("skew");
    FibreTangentVector::new(j.clone(), v).expect("projected onto the tangent space")
}

/// Removes rounding asymmetry from a matrix that is skew in exact arithmetic.
fn antisymmetrize(m: &Matrix) -> Matrix {
    m.sub(&m.transpose()).scale(0.5)
}
