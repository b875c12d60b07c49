//! Octonionic Lorentz transformations.
//!
//! A factor `S` is a 2×2 matrix whose entries all lie in one complex
//! subspace `span(1, e_k)` and whose determinant is `±1`. Vectors transform
//! as `X -> (S X) S†`, spinors as `v^A -> S^A_B v^B` and co-spinors as
//! `w_A -> -w_B S_A^B`. Factors from different subspaces do not multiply
//! into a single matrix; they are composed by nesting.

use num_complex::Complex64;

use crate::clifford::TensorVector;
use crate::error::{Error, Result};
use crate::matrix::OctMatrix2;
use crate::minkowski::{complex_to_oct, lower_mixed, oct_to_complex, Hermitian2, C2};
use crate::octonion::{Octonion, SubspaceIndex, SUBSPACE_TOL};

/// Allowed deviation of `det S` from a real unit.
pub const DET_TOL: f64 = 1e-10;

pub type Spinor = [Octonion; 2];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzFactor {
    s: OctMatrix2,
    subspace: SubspaceIndex,
    det: f64,
}

/// The single imaginary unit used by the entries of `m`, if any.
fn subspace_of(m: &OctMatrix2) -> Result<SubspaceIndex> {
    let mut units: Vec<usize> = m
        .entries()
        .flat_map(|z| z.support(SUBSPACE_TOL).collect::<Vec<_>>())
        .collect();
    units.sort_unstable();
    units.dedup();
    match units.as_slice() {
        [] => Ok(SubspaceIndex::REAL),
        [k] => SubspaceIndex::new(*k),
        _ => Err(Error::MixedSubspace(units)),
    }
}

fn to_c2(m: &OctMatrix2, k: SubspaceIndex) -> Result<C2> {
    let mut out = C2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = oct_to_complex(m.get(i, j), k)?;
        }
    }
    Ok(out)
}

fn from_c2(m: &C2, k: SubspaceIndex) -> OctMatrix2 {
    OctMatrix2(std::array::from_fn(|i| {
        std::array::from_fn(|j| complex_to_oct(m[(i, j)], k))
    }))
}

/// `exp(t G)` for traceless `G`, using `G² = -det(G) I`.
fn expm_traceless(g: &C2, t: f64) -> C2 {
    let delta = -g.determinant();
    let z = delta * (t * t);
    let (ch, sh) = if z.norm() < 1e-6 {
        (
            1.0 + z / 2.0 + z * z / 24.0 + z * z * z / 720.0,
            t * (1.0 + z / 6.0 + z * z / 120.0 + z * z * z / 5040.0),
        )
    } else {
        let r = delta.sqrt();
        ((r * t).cosh(), (r * t).sinh() / r)
    };
    C2::identity() * ch + g * sh
}

impl LorentzFactor {
    pub fn identity() -> Self {
        LorentzFactor {
            s: OctMatrix2::IDENTITY,
            subspace: SubspaceIndex::REAL,
            det: 1.0,
        }
    }

    /// `S = exp(t G)` for a traceless generator `G` with entries in one
    /// complex subspace.
    pub fn exp(generator: &OctMatrix2, t: f64) -> Result<Self> {
        let k = subspace_of(generator)?;
        let g = to_c2(generator, k)?;
        let tr = g.trace().norm();
        if tr > SUBSPACE_TOL {
            return Err(Error::NotTraceless(tr));
        }
        Self::from_matrix(&from_c2(&expm_traceless(&g, t), k))
    }

    /// The discrete factor `diag(1, -1)`, with `det S = -1`.
    pub fn reflection() -> Self {
        LorentzFactor {
            s: OctMatrix2::diag(Octonion::ONE, -Octonion::ONE),
            subspace: SubspaceIndex::REAL,
            det: -1.0,
        }
    }

    /// Validates subspace membership and `det S = ±1`.
    pub fn from_matrix(s: &OctMatrix2) -> Result<Self> {
        let subspace = subspace_of(s)?;
        let d = s.det();
        let real_unit = (d.re().abs() - 1.0).abs() <= DET_TOL
            && d.norm_sqr() - d.re().powi(2) <= DET_TOL * DET_TOL;
        if !real_unit {
            return Err(Error::DeterminantNotUnit(d.to_string()));
        }
        Ok(LorentzFactor {
            s: *s,
            subspace,
            det: d.re().signum(),
        })
    }

    /// No validation; the subspace is reported as real and `det` is the real
    /// part of `m11 m22 - m12 m21`. Only for negative controls.
    pub fn unchecked(s: OctMatrix2) -> Self {
        LorentzFactor {
            s,
            subspace: SubspaceIndex::REAL,
            det: s.det().re(),
        }
    }

    pub fn matrix(&self) -> &OctMatrix2 {
        &self.s
    }

    pub fn subspace(&self) -> SubspaceIndex {
        self.subspace
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    /// `S_A^B`, the matrix acting on lower spinor indices.
    pub fn lowered(&self) -> OctMatrix2 {
        lower_mixed(&self.s)
    }

    pub fn act_vector(&self, x: &OctMatrix2) -> OctMatrix2 {
        (self.s * *x) * self.s.adjoint()
    }

    pub fn act_spinor(&self, v: Spinor) -> Spinor {
        self.s.mul_vec(v)
    }

    /// `w_A -> -w_B S_A^B`.
    pub fn act_cospinor(&self, w: Spinor) -> Spinor {
        let l = self.lowered();
        std::array::from_fn(|a| -(w[0] * l.get(a, 0) + w[1] * l.get(a, 1)))
    }

    /// `v^A -> (S^A_B ⊗ 1) v^B` on Clifford-valued components.
    pub fn act_spinor_vectors(&self, v: &[TensorVector; 2]) -> Result<[TensorVector; 2]> {
        let row = |a: usize| {
            v[0].left_mul(self.s.get(a, 0))
                .add(&v[1].left_mul(self.s.get(a, 1)))
        };
        Ok([row(0)?, row(1)?])
    }

    /// `w*_A -> -w*_B (S_A^B ⊗ 1)` on Clifford-valued components.
    pub fn act_cospinor_vectors(&self, w: &[TensorVector; 2]) -> Result<[TensorVector; 2]> {
        let l = self.lowered();
        let row = |a: usize| -> Result<TensorVector> {
            Ok(w[0]
                .right_mul(l.get(a, 0))
                .add(&w[1].right_mul(l.get(a, 1)))?
                .scale(-1.0))
        };
        Ok([row(0)?, row(1)?])
    }
}

/// Factors applied one after another, first factor innermost.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NestedTransform {
    pub factors: Vec<LorentzFactor>,
}

impl NestedTransform {
    pub fn new(factors: Vec<LorentzFactor>) -> Self {
        NestedTransform { factors }
    }

    pub fn det(&self) -> f64 {
        self.factors.iter().map(LorentzFactor::det).product()
    }

    pub fn act_vector_matrix(&self, x: &OctMatrix2) -> OctMatrix2 {
        self.factors.iter().fold(*x, |acc, f| f.act_vector(&acc))
    }

    pub fn act_vector(&self, x: &Hermitian2) -> Hermitian2 {
        Hermitian2::from_matrix_unchecked(&self.act_vector_matrix(&x.to_matrix()))
    }

    pub fn act_spinor(&self, v: Spinor) -> Spinor {
        self.factors.iter().fold(v, |acc, f| f.act_spinor(acc))
    }

    pub fn act_cospinor(&self, w: Spinor) -> Spinor {
        self.factors.iter().fold(w, |acc, f| f.act_cospinor(acc))
    }
}

/// Largest entry norm of `(Sv)(Sv)† - (S(vv†))S†`.
pub fn compatibility_residual(f: &LorentzFactor, v: Spinor) -> f64 {
    let sv = f.act_spinor(v);
    let lhs = OctMatrix2::outer(sv, sv);
    let rhs = f.act_vector(&OctMatrix2::outer(v, v));
    lhs.max_diff(&rhs)
}

/// `χ^A ψ_A + o.c. = 2 Re(χ^A ψ_A)`.
pub fn contraction(chi: Spinor, psi: Spinor) -> f64 {
    2.0 * (chi[0] * psi[0] + chi[1] * psi[1]).re()
}

/// `|contraction(Sχ, ψ') - det(S) contraction(χ, ψ)|`.
pub fn contraction_invariance_residual(f: &LorentzFactor, chi: Spinor, psi: Spinor) -> f64 {
    let after = contraction(f.act_spinor(chi), f.act_cospinor(psi));
    (after - f.det() * contraction(chi, psi)).abs()
}

/// Kinetic part of the Lagrangian density at one sample,
/// `∂_α c^A d_A^α + o.c.`, with `dc[α]` and `d[α]` supplied per world-sheet
/// index.
pub fn lagrangian_kinetic_density(dc: &[Spinor; 2], d: &[Spinor; 2]) -> f64 {
    contraction(dc[0], d[0]) + contraction(dc[1], d[1])
}

/// Density change when both fields are transformed by `f`, corrected for
/// the determinant sign.
pub fn lagrangian_invariance_residual(f: &LorentzFactor, dc: &[Spinor; 2], d: &[Spinor; 2]) -> f64 {
    let dc2 = dc.map(|v| f.act_spinor(v));
    let d2 = d.map(|w| f.act_cospinor(w));
    (lagrangian_kinetic_density(&dc2, &d2) - f.det() * lagrangian_kinetic_density(dc, d)).abs()
}

/// A small library of traceless generators.
pub mod generators {
    use super::*;

    /// Boost along the `σ^1 = diag(1, -1)` axis.
    pub fn boost_axis1() -> OctMatrix2 {
        OctMatrix2::diag(Octonion::real(0.5), Octonion::real(-0.5))
    }

    pub fn rotation_real() -> OctMatrix2 {
        OctMatrix2::new(
            Octonion::ZERO,
            Octonion::real(0.5),
            Octonion::real(-0.5),
            Octonion::ZERO,
        )
    }

    /// `diag(e_k, -e_k) / 2`.
    pub fn rotation(k: SubspaceIndex) -> OctMatrix2 {
        let e = Octonion::unit(k.get()) * 0.5;
        OctMatrix2::diag(e, -e)
    }

    /// `[[0, e_k*], [e_k, 0]] / 2`, the boost along `σ^{k+2}`.
    pub fn boost(k: SubspaceIndex) -> OctMatrix2 {
        let e = Octonion::unit(k.get()) * 0.5;
        OctMatrix2::new(Octonion::ZERO, e.conj(), e, Octonion::ZERO)
    }
}

/// A traceless generator in `span(1, e_k)` from four complex parameters
/// `[[p, q], [r, -p]]`.
pub fn generator_from_complex(
    p: Complex64,
    q: Complex64,
    r: Complex64,
    k: SubspaceIndex,
) -> OctMatrix2 {
    from_c2(&C2::new(p, q, r, -p), k)
}
