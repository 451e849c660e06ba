//! The cubic equivariant vector field on `C^2 = R^4` in double precision.
//!
//! Coordinates are `z1 = x1 + i x2`, `z2 = x3 + i x4`, the same ordering as
//! the quaternion components `x1 + x2 i + x3 j + x4 k`. The field is
//!
//! ```text
//! z1' = lambda z1 + c1 z1 (|z1|^2 + |z2|^2) + c2 z1 |z2|^2 + c3 k conj(z1) z2^2
//! z2' = lambda z2 + c1 z2 (|z1|^2 + |z2|^2) + c2 z2 |z1|^2 + c3 k z1^2 conj(z2)
//! ```
//!
//! with `k = i` for the Hamiltonian coupling and `k = 1` for the gradient one.
//! The `c1` and `c2` parts are `grad(I2^2)/4` and `grad(I41)/2`; the gradient
//! `c3` part is `grad(I42)/4` and the Hamiltonian one is `-J grad(I42)/4`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteRotationGroup, Subgroup};
use crate::invariants::{eval_generic, symmetry_defect, InvariantPolynomial, SymmetryMode};
use crate::isotropy::isotropy_types;
use crate::quat::{Quaternion, RotationElement};
use crate::series::{branch_plane, Family, FamilySpec};

/// Seed for every pseudo-random sample in this module.
pub const SEED: u64 = 0x5eed_0004;
pub const DEFAULT_SAMPLES: usize = 16;
const FD_STEP: f64 = 1e-5;

pub type Vec4 = [f64; 4];
pub type Mat4 = [[f64; 4]; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    Hamiltonian,
    Gradient,
}

impl Coupling {
    /// The coupling under which the series group's field is equivariant.
    pub fn natural_for(family: Family) -> Coupling {
        match family {
            Family::G3 | Family::F3 => Coupling::Gradient,
            _ => Coupling::Hamiltonian,
        }
    }
}

impl std::str::FromStr for Coupling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hamiltonian" => Ok(Coupling::Hamiltonian),
            "gradient" => Ok(Coupling::Gradient),
            _ => Err(Error::Parse(format!("unknown coupling '{s}' (expected hamiltonian or gradient)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicCoefficients {
    pub lambda: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub coupling: Coupling,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StatePoint {
    pub z1: Complex64,
    pub z2: Complex64,
}

impl StatePoint {
    pub fn from_real(x: &Vec4) -> StatePoint {
        StatePoint {
            z1: Complex64::new(x[0], x[1]),
            z2: Complex64::new(x[2], x[3]),
        }
    }

    pub fn to_real(&self) -> Vec4 {
        [self.z1.re, self.z1.im, self.z2.re, self.z2.im]
    }

    pub fn is_finite(&self) -> bool {
        self.to_real().iter().all(|v| v.is_finite())
    }
}

impl Serialize for StatePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Pair {
            z1: [f64; 2],
            z2: [f64; 2],
        }
        Pair {
            z1: [self.z1.re, self.z1.im],
            z2: [self.z2.re, self.z2.im],
        }
        .serialize(s)
    }
}

/// Scalars the field can be evaluated over: plain floats and first-order jets.
pub(crate) trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn cst(v: f64) -> Self;
}

impl Scalar for f64 {
    fn cst(v: f64) -> Self {
        v
    }
}

/// Value plus gradient with respect to the four coordinates.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Jet {
    v: f64,
    d: Vec4,
}

impl Jet {
    fn var(x: &Vec4, k: usize) -> Jet {
        let mut d = [0.0; 4];
        d[k] = 1.0;
        Jet { v: x[k], d }
    }

    fn seed(x: &Vec4) -> [Jet; 4] {
        std::array::from_fn(|k| Jet::var(x, k))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d: std::array::from_fn(|k| self.d[k] + o.d[k]) }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet { v: self.v - o.v, d: std::array::from_fn(|k| self.d[k] - o.d[k]) }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet { v: self.v * o.v, d: std::array::from_fn(|k| self.d[k] * o.v + self.v * o.d[k]) }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, d: self.d.map(|x| -x) }
    }
}

impl Scalar for Jet {
    fn cst(v: f64) -> Self {
        Jet { v, d: [0.0; 4] }
    }
}

/// The three cubic monomial maps without their coefficients.
fn monomials<T: Scalar>(x: [T; 4], coupling: Coupling) -> [[T; 4]; 3] {
    let [x1, x2, x3, x4] = x;
    let r1 = x1 * x1 + x2 * x2;
    let r2 = x3 * x3 + x4 * x4;
    let s = r1 + r2;
    let p1 = [x1 * s, x2 * s, x3 * s, x4 * s];
    let p2 = [x1 * r2, x2 * r2, x3 * r1, x4 * r1];
    let two = T::cst(2.0);
    let (a, b) = (x1 * x1 - x2 * x2, two * x1 * x2);
    let (c, d) = (x3 * x3 - x4 * x4, two * x3 * x4);
    // conj(z1) z2^2 = u1 + i v1, z1^2 conj(z2) = u2 + i v2
    let (u1, v1) = (x1 * c + x2 * d, x1 * d - x2 * c);
    let (u2, v2) = (a * x3 + b * x4, b * x3 - a * x4);
    let p3 = match coupling {
        Coupling::Gradient => [u1, v1, u2, v2],
        Coupling::Hamiltonian => [-v1, u1, -v2, u2],
    };
    [p1, p2, p3]
}

fn field_generic<T: Scalar>(c: &CubicCoefficients, x: [T; 4]) -> [T; 4] {
    let [p1, p2, p3] = monomials(x, c.coupling);
    let (l, a, b, d) = (T::cst(c.lambda), T::cst(c.c1), T::cst(c.c2), T::cst(c.c3));
    std::array::from_fn(|k| l * x[k] + a * p1[k] + b * p2[k] + d * p3[k])
}

pub fn cubic_field(c: &CubicCoefficients, z: &StatePoint) -> StatePoint {
    StatePoint::from_real(&cubic_field_real(c, &z.to_real()))
}

pub fn cubic_field_real(c: &CubicCoefficients, x: &Vec4) -> Vec4 {
    field_generic(c, *x)
}

/// The four parts `lambda x`, `c1 P1`, `c2 P2`, `c3 P3` of the field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldParts {
    pub linear: Vec4,
    pub c1: Vec4,
    pub c2: Vec4,
    pub c3: Vec4,
}

pub fn field_parts(c: &CubicCoefficients, x: &Vec4) -> FieldParts {
    let [p1, p2, p3] = monomials(*x, c.coupling);
    FieldParts {
        linear: x.map(|v| c.lambda * v),
        c1: p1.map(|v| c.c1 * v),
        c2: p2.map(|v| c.c2 * v),
        c3: p3.map(|v| c.c3 * v),
    }
}

/// Exact (forward-mode) Jacobian, `J[i][k] = d f_i / d x_k`.
pub fn jacobian(c: &CubicCoefficients, x: &Vec4) -> Mat4 {
    field_generic(c, Jet::seed(x)).map(|f| f.d)
}

/// Jacobian of one monomial part (0, 1, 2 for `P1`, `P2`, `P3`).
fn part_jacobian(part: usize, coupling: Coupling, x: &Vec4) -> Mat4 {
    monomials(Jet::seed(x), coupling)[part].map(|f| f.d)
}

fn central_difference(f: impl Fn(&Vec4) -> Vec4, x: &Vec4) -> Mat4 {
    let mut jac = [[0.0; 4]; 4];
    for k in 0..4 {
        let (mut xp, mut xm) = (*x, *x);
        xp[k] += FD_STEP;
        xm[k] -= FD_STEP;
        let (fp, fm) = (f(&xp), f(&xm));
        for i in 0..4 {
            jac[i][k] = (fp[i] - fm[i]) / (2.0 * FD_STEP);
        }
    }
    jac
}

fn central_gradient(f: impl Fn(&Vec4) -> f64, x: &Vec4) -> Vec4 {
    std::array::from_fn(|k| {
        let (mut xp, mut xm) = (*x, *x);
        xp[k] += FD_STEP;
        xm[k] -= FD_STEP;
        (f(&xp) - f(&xm)) / (2.0 * FD_STEP)
    })
}

fn invariant_gradient(p: InvariantPolynomial, x: &Vec4) -> Vec4 {
    eval_generic(p, Jet::seed(x), |k| Jet::cst(k as f64)).d
}

pub fn mat_vec(m: &Mat4, x: &Vec4) -> Vec4 {
    std::array::from_fn(|i| (0..4).map(|k| m[i][k] * x[k]).sum())
}

fn sup_norm(x: &Vec4) -> f64 {
    x.iter().fold(0.0, |a, v| a.max(v.abs()))
}

fn sup_diff(a: &Vec4, b: &Vec4) -> f64 {
    (0..4).fold(0.0, |m, k| m.max((a[k] - b[k]).abs()))
}

/// Deterministic states, uniform in `[-1, 1]^4`.
pub fn sample_states(n: usize) -> Vec<Vec4> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..n).map(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0))).collect()
}

/// `n` random coefficient sets admitting the branch: `lambda / c1 < 0`,
/// `c1` bounded away from zero and `c2 + c3` away from `c1`.
pub fn admissible_coefficients(n: usize, seed: u64, coupling: Coupling) -> Vec<CubicCoefficients> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let c1: f64 = rng.gen_range(0.25..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let lambda = -c1.signum() * rng.gen_range(0.1..2.0);
        let (c2, c3): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if (c2 + c3 - c1).abs() < 1e-2 {
            continue;
        }
        out.push(CubicCoefficients { lambda, c1, c2, c3, coupling });
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EquivarianceReport {
    pub samples: usize,
    /// `max |f(M x) - M f(x)|` over the group and the samples.
    pub group_residual: f64,
    /// The same for the phase rotations `e^{i phi}`, `phi = 2 pi k / 64`.
    pub s1_residual: f64,
}

pub fn group_matrices(g: &FiniteRotationGroup) -> Vec<Mat4> {
    g.elements().par_iter().map(|e| e.to_matrix().to_f64()).collect()
}

pub fn equivariance_residual(c: &CubicCoefficients, g: &FiniteRotationGroup, samples: usize) -> EquivarianceReport {
    let xs = sample_states(samples.max(1));
    let fx: Vec<Vec4> = xs.iter().map(|x| cubic_field_real(c, x)).collect();
    let residual = |m: &Mat4| {
        xs.iter()
            .zip(&fx)
            .map(|(x, f)| sup_diff(&cubic_field_real(c, &mat_vec(m, x)), &mat_vec(m, f)))
            .fold(0.0, f64::max)
    };
    let group_residual = group_matrices(g).par_iter().map(residual).reduce(|| 0.0, f64::max);
    let s1_residual = (0..64)
        .map(|k| {
            let (s, co) = (2.0 * std::f64::consts::PI * k as f64 / 64.0).sin_cos();
            residual(&[[co, -s, 0.0, 0.0], [s, co, 0.0, 0.0], [0.0, 0.0, co, -s], [0.0, 0.0, s, co]])
        })
        .fold(0.0, f64::max);
    EquivarianceReport {
        samples: xs.len(),
        group_residual,
        s1_residual,
    }
}

/// Largest out-of-plane component of the field over 16 points of every
/// isotropy fixed plane of `g`.
pub fn flow_invariance_defect(c: &CubicCoefficients, g: &FiniteRotationGroup) -> Result<f64> {
    let analysis = isotropy_types(g)?;
    let coords = sample_states(DEFAULT_SAMPLES);
    let mut worst: f64 = 0.0;
    for t in &analysis.types {
        let basis = orthonormalize(&t.fix.to_f64());
        for w in &coords {
            let mut x = [0.0; 4];
            for (b, a) in basis.iter().zip(w) {
                for k in 0..4 {
                    x[k] += a * b[k];
                }
            }
            let f = cubic_field_real(c, &x);
            let mut out = f;
            for b in &basis {
                let p = dot(&f, b);
                for k in 0..4 {
                    out[k] -= p * b[k];
                }
            }
            worst = worst.max(sup_norm(&out));
        }
    }
    Ok(worst)
}

fn dot(a: &Vec4, b: &Vec4) -> f64 {
    (0..4).map(|k| a[k] * b[k]).sum()
}

fn orthonormalize(vs: &[Vec4]) -> Vec<Vec4> {
    let mut out: Vec<Vec4> = Vec::new();
    for v in vs {
        let mut w = *v;
        for b in &out {
            let p = dot(&w, b);
            for k in 0..4 {
                w[k] -= p * b[k];
            }
        }
        let n = dot(&w, &w).sqrt();
        out.push(w.map(|x| x / n));
    }
    out
}

fn asymmetry(j: &Mat4) -> f64 {
    let scale = j.iter().flatten().fold(1e-300_f64, |a, v| a.max(v.abs()));
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for k in 0..i {
            worst = worst.max((j[i][k] - j[k][i]).abs());
        }
    }
    worst / scale
}

fn relative_diff(a: &Vec4, b: &Vec4) -> f64 {
    sup_diff(a, b) / sup_norm(b).max(1e-300)
}

/// Numeric and exact checks of the gradient / Hamiltonian decomposition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructureReport {
    pub coupling: Coupling,
    pub samples: usize,
    /// Relative asymmetry of the finite-difference Jacobians of the parts.
    pub jacobian_asymmetry: [f64; 3],
    /// Relative deviation of the `c1`, `c2` parts from `grad(I2^2)/4`, `grad(I41)/2`.
    pub gradient_deviation: [f64; 2],
    /// Largest `|div|` of the `c1` part (generically nonzero).
    pub divergence_c1: f64,
    /// Largest `|div|` of the `c3` part.
    pub divergence_c3: f64,
    /// Deviation of the `c3` part from `grad(I42)/4` (gradient) or `-J grad(I42)/4` (Hamiltonian).
    pub c3_identity: f64,
    /// `I42(g x) = -I42(x)` on the coset (Hamiltonian) or `I42(g x) = I42(x)`
    /// on the whole group (gradient), exactly at the rational probe points.
    pub i42_symmetry_exact: bool,
    pub i42_symmetry_max: f64,
    /// `M_g J = -J M_g` holds exactly for every element of the coset
    /// (required for the Hamiltonian coupling only).
    pub j_anticommutes: bool,
    pub passed: bool,
}

pub const SYMMETRY_TOL: f64 = 1e-6;
pub const DIVERGENCE_TOL: f64 = 1e-8;
pub const IDENTITY_TOL: f64 = 1e-8;

/// `J = [i, 1]` in the field of `g`.
pub fn j_element(g: &FiniteRotationGroup) -> RotationElement {
    let f = g.field();
    RotationElement::make_element(Quaternion::i(f), Quaternion::one(f)).expect("[i,1] is a rotation")
}

pub fn structure_checks(c: &CubicCoefficients, g: &FiniteRotationGroup, f: &Subgroup) -> Result<StructureReport> {
    if 2 * f.order() != g.order() || !g.is_subgroup(f.members()) {
        return Err(Error::NotIndexTwo);
    }
    let xs = sample_states(DEFAULT_SAMPLES);
    let jm = j_element(g).to_matrix();
    let jf = jm.to_f64();
    let mut rep = StructureReport {
        coupling: c.coupling,
        samples: xs.len(),
        jacobian_asymmetry: [0.0; 3],
        gradient_deviation: [0.0; 2],
        divergence_c1: 0.0,
        divergence_c3: 0.0,
        c3_identity: 0.0,
        i42_symmetry_exact: false,
        i42_symmetry_max: 0.0,
        j_anticommutes: false,
        passed: false,
    };
    for x in &xs {
        for part in 0..3 {
            let fd = central_difference(|y| monomials(*y, c.coupling)[part], x);
            rep.jacobian_asymmetry[part] = rep.jacobian_asymmetry[part].max(asymmetry(&fd));
        }
        let [p1, p2, p3] = monomials(*x, c.coupling);
        let g1 = central_gradient(|y| InvariantPolynomial::I2.eval_f64(y).powi(2), x).map(|v| v / 4.0);
        let g2 = central_gradient(|y| InvariantPolynomial::I41.eval_f64(y), x).map(|v| v / 2.0);
        rep.gradient_deviation[0] = rep.gradient_deviation[0].max(relative_diff(&p1, &g1));
        rep.gradient_deviation[1] = rep.gradient_deviation[1].max(relative_diff(&p2, &g2));
        let trace = |m: &Mat4| (0..4).map(|k| m[k][k]).sum::<f64>();
        rep.divergence_c1 = rep.divergence_c1.max(trace(&part_jacobian(0, c.coupling, x)).abs());
        rep.divergence_c3 = rep.divergence_c3.max(trace(&part_jacobian(2, c.coupling, x)).abs());
        let grad = invariant_gradient(InvariantPolynomial::I42, x).map(|v| v / 4.0);
        let expected = match c.coupling {
            Coupling::Gradient => grad,
            Coupling::Hamiltonian => mat_vec(&jf, &grad).map(|v| -v),
        };
        rep.c3_identity = rep.c3_identity.max(sup_diff(&p3, &expected));
    }
    let coset: Vec<usize> = (0..g.order()).filter(|&i| !f.contains(i)).collect();
    let d = match c.coupling {
        Coupling::Hamiltonian => symmetry_defect(InvariantPolynomial::I42, g, &coset, SymmetryMode::AntiInvariant),
        Coupling::Gradient => {
            let all: Vec<usize> = (0..g.order()).collect();
            symmetry_defect(InvariantPolynomial::I42, g, &all, SymmetryMode::Invariant)
        }
    };
    rep.i42_symmetry_exact = d.exact_zero;
    rep.i42_symmetry_max = d.max_abs;
    rep.j_anticommutes = coset.par_iter().all(|&i| {
        let m = g.element(i).to_matrix();
        m.mul(&jm) == jm.mul(&m).neg()
    });
    let symmetric_parts = match c.coupling {
        Coupling::Gradient => 3,
        Coupling::Hamiltonian => 2,
    };
    rep.passed = rep.jacobian_asymmetry[..symmetric_parts].iter().all(|&a| a < SYMMETRY_TOL)
        && rep.gradient_deviation.iter().all(|&a| a < SYMMETRY_TOL)
        && (c.coupling == Coupling::Gradient || rep.divergence_c3 < DIVERGENCE_TOL)
        && rep.c3_identity < IDENTITY_TOL
        && rep.i42_symmetry_exact
        && (c.coupling == Coupling::Gradient || rep.j_anticommutes);
    Ok(rep)
}

/// Equilibrium on the branch plane and its in-plane linearization.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BranchReport {
    pub family: String,
    /// Orthonormal basis `(u, v)` of the plane; the branch is `beta v`.
    pub plane: [Vec4; 2],
    pub beta: f64,
    pub equilibrium: StatePoint,
    pub residual: f64,
    pub in_plane_jacobian: [[f64; 2]; 2],
    /// Eigenvalues as `(re, im)`, sorted by real part.
    pub jacobian_eigenvalues: [[f64; 2]; 2],
    /// Largest entry difference between the finite-difference and exact in-plane Jacobians.
    pub finite_difference_deviation: f64,
    /// `{lambda (1 - (c2 + c3) / c1), -2 lambda}`.
    pub stated_eigenvalues: [f64; 2],
    pub stated_deviation: f64,
    /// `{-lambda (c2 + s c3) / c1, -2 lambda}` with `s = +1` for `G_1`, `G_2` and
    /// `s = -1` for `G_3`; only for the family's natural coupling.
    pub corrected_eigenvalues: Option<[f64; 2]>,
    pub corrected_deviation: Option<f64>,
}

fn eigen2(m: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let tr = m[0][0] + m[1][1];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let disc = tr * tr / 4.0 - det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        [[tr / 2.0 - s, 0.0], [tr / 2.0 + s, 0.0]]
    } else {
        let s = (-disc).sqrt();
        [[tr / 2.0, -s], [tr / 2.0, s]]
    }
}

fn sorted_deviation(ev: &[[f64; 2]; 2], mut expected: [f64; 2]) -> f64 {
    expected.sort_by(f64::total_cmp);
    (0..2).fold(0.0, |a, k| a.max((ev[k][0] - expected[k]).abs()).max(ev[k][1].abs()))
}

fn project(jac: &Mat4, basis: &[Vec4; 2]) -> [[f64; 2]; 2] {
    std::array::from_fn(|a| std::array::from_fn(|b| dot(&basis[a], &mat_vec(jac, &basis[b]))))
}

pub fn branch_and_jacobian(c: &CubicCoefficients, spec: &FamilySpec) -> Result<BranchReport> {
    if c.c1 == 0.0 || !c.c1.is_finite() {
        return Err(Error::BranchPrecondition("c1 must be finite and nonzero".into()));
    }
    if !(c.lambda / c.c1 < 0.0) {
        return Err(Error::BranchPrecondition(format!(
            "lambda / c1 = {} must be negative for a real branch",
            c.lambda / c.c1
        )));
    }
    if c.c2 + c.c3 == c.c1 {
        return Err(Error::BranchPrecondition("c2 + c3 must differ from c1".into()));
    }
    let (_, plane) = branch_plane(spec)?;
    let basis = orthonormalize(&[plane[0].to_f64(), plane[1].to_f64()]);
    let basis = [basis[0], basis[1]];
    let beta = (-c.lambda / c.c1).sqrt();
    let x = basis[1].map(|v| beta * v);
    let residual = sup_norm(&cubic_field_real(c, &x));
    let exact = project(&jacobian(c, &x), &basis);
    let fd = project(&central_difference(|y| cubic_field_real(c, y), &x), &basis);
    let finite_difference_deviation = (0..2)
        .flat_map(|a| (0..2).map(move |b| (a, b)))
        .fold(0.0_f64, |m, (a, b)| m.max((exact[a][b] - fd[a][b]).abs()));
    let ev = eigen2(&exact);
    let stated = [c.lambda * (1.0 - (c.c2 + c.c3) / c.c1), -2.0 * c.lambda];
    let sigma = match spec.family {
        Family::G3 => -1.0,
        _ => 1.0,
    };
    let corrected = (c.coupling == Coupling::natural_for(spec.family))
        .then(|| [-c.lambda * (c.c2 + sigma * c.c3) / c.c1, -2.0 * c.lambda]);
    Ok(BranchReport {
        family: spec.to_string(),
        plane: basis,
        beta,
        equilibrium: StatePoint::from_real(&x),
        residual,
        in_plane_jacobian: exact,
        jacobian_eigenvalues: ev,
        finite_difference_deviation,
        stated_eigenvalues: stated,
        stated_deviation: sorted_deviation(&ev, stated),
        corrected_eigenvalues: corrected,
        corrected_deviation: corrected.map(|e| sorted_deviation(&ev, e)),
    })
}

/// Fixed-step RK4 from `x0` over `[0, t_end]`; returns `(t, x)` at every step.
pub fn integrate(c: &CubicCoefficients, x0: &Vec4, t_end: f64, dt: f64) -> Result<Vec<(f64, Vec4)>> {
    if !(dt > 0.0 && dt.is_finite() && t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::Parse(format!("integration needs dt > 0 and T >= 0 (got T = {t_end}, dt = {dt})")));
    }
    let steps = (t_end / dt).round() as usize;
    let f = |x: &Vec4| cubic_field_real(c, x);
    let axpy = |x: &Vec4, a: f64, k: &Vec4| -> Vec4 { std::array::from_fn(|i| x[i] + a * k[i]) };
    let mut out = Vec::with_capacity(steps + 1);
    let mut x = *x0;
    out.push((0.0, x));
    for n in 1..=steps {
        let k1 = f(&x);
        let k2 = f(&axpy(&x, dt / 2.0, &k1));
        let k3 = f(&axpy(&x, dt / 2.0, &k2));
        let k4 = f(&axpy(&x, dt, &k3));
        x = std::array::from_fn(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
        out.push((n as f64 * dt, x));
        if !x.iter().all(|v| v.is_finite()) {
            break;
        }
    }
    Ok(out)
}
