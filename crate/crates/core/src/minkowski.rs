//! Pauli matrices in 4 and 10 dimensions, the spinor metric, and the
//! determinant of 2×2 octonionic Hermitian matrices.
//!
//! A vector maps to `X = Σ_μ x^μ σ^μ`, so `det X = x_μ x^μ` with
//! `η = diag(1, -1, ..., -1)`. The inverse is `x^μ = ½ Re tr(σ^μ X)`.

use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{OctHermitian, OctMatrix2};
use crate::octonion::{Octonion, SubspaceIndex, SUBSPACE_TOL};

/// Complex 2×2 matrix, used for spinor-index objects inside one complex
/// subspace.
pub type C2 = Matrix2<Complex64>;

/// `ε_{AB} = ε^{AB}` as a matrix: `ε_12 = 1`, `ε_21 = -1`.
pub const EPS: [[f64; 2]; 2] = [[0.0, 1.0], [-1.0, 0.0]];

/// `V^A = ε^{AB} V_B`.
pub fn raise_index<T: Copy + std::ops::Neg<Output = T>>(v: [T; 2]) -> [T; 2] {
    [v[1], -v[0]]
}

/// `V_B = V^A ε_{AB}`.
pub fn lower_index<T: Copy + std::ops::Neg<Output = T>>(v: [T; 2]) -> [T; 2] {
    [-v[1], v[0]]
}

pub fn eps_c2() -> C2 {
    C2::new(
        Complex64::new(0.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, 0.0),
    )
}

/// `K_A^Ė = ε^{ĖḞ} K_{AḞ}`. Dotted indices use the same ε as undotted ones.
pub fn raise_dotted(k: &C2) -> C2 {
    k * eps_c2().transpose()
}

/// `K^{AḂ} = ε^{AC} ε^{ḂḊ} K_{CḊ}`.
pub fn raise_both(k: &C2) -> C2 {
    let e = eps_c2();
    e * k * e.transpose()
}

/// `K_{AḂ} = K^{CḊ} ε_{CA} ε_{ḊḂ}`.
pub fn lower_both(k: &C2) -> C2 {
    let e = eps_c2();
    e.transpose() * k * e
}

/// `S_A^B = ε^{BE} S^F_E ε_{FA}`, the action of `S` on lower indices.
pub fn lower_mixed(s: &OctMatrix2) -> OctMatrix2 {
    let et = OctMatrix2::new(
        Octonion::ZERO,
        -Octonion::ONE,
        Octonion::ONE,
        Octonion::ZERO,
    );
    (et * *s) * et
}

pub fn oct_to_complex(z: Octonion, k: SubspaceIndex) -> Result<Complex64> {
    if !z.in_subspace(k, SUBSPACE_TOL) {
        return Err(Error::MixedSubspace(
            z.support(SUBSPACE_TOL).filter(|&i| i > 0).collect(),
        ));
    }
    Ok(Complex64::new(
        z.re(),
        if k.get() == 0 { 0.0 } else { z[k.get()] },
    ))
}

/// `re + im·e_k`; for the real subspace the imaginary part is dropped.
pub fn complex_to_oct(c: Complex64, k: SubspaceIndex) -> Octonion {
    if k.get() == 0 {
        Octonion::real(c.re)
    } else {
        Octonion::from_complex(c.re, c.im, k)
    }
}

/// A 2×2 octonionic Hermitian matrix `[[a, c], [c*, b]]`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Hermitian2 {
    pub a: f64,
    pub b: f64,
    pub c: Octonion,
}

impl Hermitian2 {
    pub fn new(a: f64, b: f64, c: Octonion) -> Self {
        Hermitian2 { a, b, c }
    }

    pub fn identity() -> Self {
        Hermitian2::new(1.0, 1.0, Octonion::ZERO)
    }

    pub fn to_matrix(&self) -> OctMatrix2 {
        OctMatrix2::new(
            Octonion::real(self.a),
            self.c,
            self.c.conj(),
            Octonion::real(self.b),
        )
    }

    pub fn from_matrix(m: &OctMatrix2, tol: f64) -> Result<Self> {
        let devs = [
            (0, 0, m.get(0, 0).max_abs() - m.get(0, 0).re().abs()),
            (1, 1, m.get(1, 1).max_abs() - m.get(1, 1).re().abs()),
            (1, 0, (m.get(1, 0) - m.get(0, 1).conj()).max_abs()),
        ];
        for (row, col, deviation) in devs {
            if deviation > tol || !deviation.is_finite() {
                return Err(Error::NotHermitian {
                    row,
                    col,
                    deviation,
                });
            }
        }
        Ok(Self::from_matrix_unchecked(m))
    }

    /// Real diagonal parts and the upper off-diagonal entry, ignoring the rest.
    pub fn from_matrix_unchecked(m: &OctMatrix2) -> Self {
        Hermitian2::new(m.get(0, 0).re(), m.get(1, 1).re(), m.get(0, 1))
    }

    pub fn to_oct_hermitian(&self) -> OctHermitian {
        let m = self.to_matrix();
        OctHermitian::from_upper(2, |i, j| m.get(i, j))
    }

    pub fn from_oct_hermitian(h: &OctHermitian) -> Result<Self> {
        if h.n() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: h.n(),
            });
        }
        Ok(Hermitian2::new(
            h.get(0, 0).re(),
            h.get(1, 1).re(),
            h.get(0, 1),
        ))
    }

    /// `ab - |c|²`.
    pub fn det(&self) -> f64 {
        self.a * self.b - self.c.norm_sqr()
    }

    /// Requires `c` in `span(1, e_k)`.
    pub fn to_complex(&self, k: SubspaceIndex) -> Result<C2> {
        let c = oct_to_complex(self.c, k)?;
        Ok(C2::new(
            Complex64::new(self.a, 0.0),
            c,
            c.conj(),
            Complex64::new(self.b, 0.0),
        ))
    }

    pub fn from_complex(m: &C2, k: SubspaceIndex, tol: f64) -> Result<Self> {
        let dev = (m - m.adjoint())
            .iter()
            .fold(0.0f64, |acc, z| acc.max(z.norm()));
        if dev > tol || !dev.is_finite() {
            return Err(Error::NotHermitian {
                row: 1,
                col: 0,
                deviation: dev,
            });
        }
        Ok(Hermitian2::new(
            m[(0, 0)].re,
            m[(1, 1)].re,
            complex_to_oct(m[(0, 1)], k),
        ))
    }

    pub fn max_diff(&self, other: &Hermitian2) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.b - other.b).abs())
            .max((self.c - other.c).norm())
    }
}

/// The Pauli matrices `σ^μ` for `dim` 4 or 10.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaSet {
    dim: usize,
    matrices: Vec<OctMatrix2>,
}

impl SigmaSet {
    /// `I` and the standard Pauli matrices, with the complex unit `i` taken
    /// to be `e1`.
    pub fn four() -> Self {
        let (o, l, e1) = (Octonion::ZERO, Octonion::ONE, Octonion::unit(1));
        SigmaSet {
            dim: 4,
            matrices: vec![
                OctMatrix2::IDENTITY,
                OctMatrix2::new(o, l, l, o),
                OctMatrix2::new(o, -e1, e1, o),
                OctMatrix2::diag(l, -l),
            ],
        }
    }

    /// `σ^0 = I`, `σ^1 = diag(1, -1)`, `σ^{k+2} = [[0, e_k*], [e_k, 0]]`.
    pub fn ten() -> Self {
        let l = Octonion::ONE;
        let mut matrices = vec![OctMatrix2::IDENTITY, OctMatrix2::diag(l, -l)];
        for k in 0..8 {
            let e = Octonion::unit(k);
            matrices.push(OctMatrix2::new(Octonion::ZERO, e.conj(), e, Octonion::ZERO));
        }
        SigmaSet { dim: 10, matrices }
    }

    pub fn for_dim(dim: usize) -> Result<Self> {
        match dim {
            4 => Ok(Self::four()),
            10 => Ok(Self::ten()),
            _ => Err(Error::InvalidParameter(format!(
                "no Pauli set in dimension {dim}"
            ))),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, mu: usize) -> &OctMatrix2 {
        &self.matrices[mu]
    }

    /// The 4D set as complex matrices.
    pub fn complex(&self) -> Vec<C2> {
        let k = SubspaceIndex::new(1).expect("valid");
        self.matrices
            .iter()
            .map(|m| {
                C2::from_fn(|i, j| oct_to_complex(m.get(i, j), k).expect("4D Pauli set is complex"))
            })
            .collect()
    }
}

pub fn eta(mu: usize) -> f64 {
    if mu == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `x_μ x^μ`.
pub fn minkowski_norm(x: &[f64]) -> f64 {
    x.iter().enumerate().map(|(mu, v)| eta(mu) * v * v).sum()
}

pub fn vector_to_matrix(x: &[f64], s: &SigmaSet) -> Result<Hermitian2> {
    if x.len() != s.dim {
        return Err(Error::DimensionMismatch {
            expected: s.dim,
            got: x.len(),
        });
    }
    let m = x
        .iter()
        .zip(&s.matrices)
        .fold(OctMatrix2::default(), |acc, (v, sigma)| {
            acc + sigma.scale(*v)
        });
    Ok(Hermitian2::from_matrix_unchecked(&m))
}

pub fn matrix_to_vector(x: &Hermitian2, s: &SigmaSet) -> Vec<f64> {
    let m = x.to_matrix();
    s.matrices
        .iter()
        .map(|sigma| {
            let p = *sigma * m;
            0.5 * (p.get(0, 0) + p.get(1, 1)).re()
        })
        .collect()
}

pub fn det2(x: &Hermitian2) -> f64 {
    x.det()
}
