//! Octonionic matrices: n×n Hermitian matrices and general 2×2 matrices.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::octonion::Octonion;

/// An n×n octonionic matrix with `H[j][i] = conj(H[i][j])`.
///
/// Stored row-major. The diagonal is real.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "HermitianRepr", into = "HermitianRepr")]
pub struct OctHermitian {
    n: usize,
    entries: Vec<Octonion>,
}

#[derive(Serialize, Deserialize)]
struct HermitianRepr {
    n: usize,
    entries: Vec<Vec<Octonion>>,
}

impl TryFrom<HermitianRepr> for OctHermitian {
    type Error = Error;

    fn try_from(r: HermitianRepr) -> Result<Self> {
        if r.entries.len() != r.n {
            return Err(Error::DimensionMismatch {
                expected: r.n,
                got: r.entries.len(),
            });
        }
        let mut flat = Vec::with_capacity(r.n * r.n);
        for row in r.entries {
            if row.len() != r.n {
                return Err(Error::DimensionMismatch {
                    expected: r.n,
                    got: row.len(),
                });
            }
            flat.extend(row);
        }
        OctHermitian::new(r.n, flat, crate::resolve::DEFAULT_TOL)
    }
}

impl From<OctHermitian> for HermitianRepr {
    fn from(h: OctHermitian) -> Self {
        HermitianRepr {
            n: h.n,
            entries: h
                .entries
                .chunks(h.n.max(1))
                .map(<[Octonion]>::to_vec)
                .collect(),
        }
    }
}

impl OctHermitian {
    /// Validates Hermiticity to within `tol` (absolute, per coefficient) and
    /// snaps the input onto the exactly Hermitian matrix built from its upper
    /// triangle.
    pub fn new(n: usize, entries: Vec<Octonion>, tol: f64) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: entries.len(),
            });
        }
        for i in 0..n {
            for j in i..n {
                let dev = (entries[j * n + i] - entries[i * n + j].conj()).max_abs();
                if dev > tol || !dev.is_finite() {
                    return Err(Error::NotHermitian {
                        row: j,
                        col: i,
                        deviation: dev,
                    });
                }
            }
        }
        Ok(Self::from_upper(n, |i, j| entries[i * n + j]))
    }

    /// Builds the Hermitian matrix whose upper triangle (`i <= j`) is given by
    /// `upper`. Diagonal entries keep only their real part.
    pub fn from_upper(n: usize, mut upper: impl FnMut(usize, usize) -> Octonion) -> Self {
        let mut entries = vec![Octonion::ZERO; n * n];
        for i in 0..n {
            entries[i * n + i] = Octonion::real(upper(i, i).re());
            for j in i + 1..n {
                let z = upper(i, j);
                entries[i * n + j] = z;
                entries[j * n + i] = z.conj();
            }
        }
        OctHermitian { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_upper(n, |i, j| {
            if i == j {
                Octonion::ONE
            } else {
                Octonion::ZERO
            }
        })
    }

    pub fn diagonal(d: &[f64]) -> Self {
        Self::from_upper(d.len(), |i, j| {
            if i == j {
                Octonion::real(d[i])
            } else {
                Octonion::ZERO
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Octonion {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Octonion]> {
        self.entries.chunks(self.n.max(1))
    }

    /// Largest entry norm.
    pub fn max_norm(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest entry norm of `self - other`.
    pub fn max_diff(&self, other: &OctHermitian) -> f64 {
        assert_eq!(self.n, other.n, "size mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |m, (a, b)| m.max((*a - *b).norm()))
    }

    /// Largest `|H[j][i] - conj(H[i][j])|`; zero for values built by this type.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.n;
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                r = r.max((self.get(j, i) - self.get(i, j).conj()).norm());
            }
        }
        r
    }

    /// True when every entry lies in `span(1, e_k)`.
    pub fn in_subspace(&self, k: crate::octonion::SubspaceIndex, tol: f64) -> bool {
        self.entries.iter().all(|z| z.in_subspace(k, tol))
    }
}

/// A general 2×2 octonionic matrix. Products are evaluated entrywise in the
/// written order; no associativity is assumed.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct OctMatrix2(pub [[Octonion; 2]; 2]);

impl OctMatrix2 {
    pub const IDENTITY: OctMatrix2 = OctMatrix2([
        [Octonion::ONE, Octonion::ZERO],
        [Octonion::ZERO, Octonion::ONE],
    ]);

    pub fn new(m11: Octonion, m12: Octonion, m21: Octonion, m22: Octonion) -> Self {
        OctMatrix2([[m11, m12], [m21, m22]])
    }

    pub fn diag(a: Octonion, b: Octonion) -> Self {
        OctMatrix2([[a, Octonion::ZERO], [Octonion::ZERO, b]])
    }

    pub fn get(&self, i: usize, j: usize) -> Octonion {
        self.0[i][j]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        OctMatrix2([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.0;
        OctMatrix2([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    /// `m11 m22 - m12 m21`. Only meaningful when the entries share a complex
    /// subspace.
    pub fn det(&self) -> Octonion {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn mul_vec(&self, v: [Octonion; 2]) -> [Octonion; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    pub fn scale(&self, s: f64) -> Self {
        OctMatrix2(self.0.map(|row| row.map(|z| z * s)))
    }

    pub fn entries(&self) -> impl Iterator<Item = Octonion> + '_ {
        self.0.iter().flatten().copied()
    }

    pub fn max_diff(&self, other: &OctMatrix2) -> f64 {
        self.entries()
            .zip(other.entries())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// `v w†` for octonionic column vectors.
    pub fn outer(v: [Octonion; 2], w: [Octonion; 2]) -> Self {
        OctMatrix2(std::array::from_fn(|i| {
            std::array::from_fn(|j| v[i] * w[j].conj())
        }))
    }
}

impl Add for OctMatrix2 {
    type Output = OctMatrix2;

    fn add(self, rhs: OctMatrix2) -> OctMatrix2 {
        OctMatrix2(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] + rhs.0[i][j])
        }))
    }
}

impl Sub for OctMatrix2 {
    type Output = OctMatrix2;

    fn sub(self, rhs: OctMatrix2) -> OctMatrix2 {
        OctMatrix2(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.0[i][j] - rhs.0[i][j])
        }))
    }
}

impl Mul for OctMatrix2 {
    type Output = OctMatrix2;

    fn mul(self, rhs: OctMatrix2) -> OctMatrix2 {
        let (a, b) = (&self.0, &rhs.0);
        OctMatrix2(std::array::from_fn(|i| {
            std::array::from_fn(|j| a[i][0] * b[0][j] + a[i][1] * b[1][j])
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_hermitian() {
        let e1 = Octonion::unit(1);
        let bad = vec![Octonion::ONE, e1, e1, Octonion::ONE];
        assert!(matches!(
            OctHermitian::new(2, bad, 1e-12),
            Err(Error::NotHermitian { .. })
        ));
        let good = vec![Octonion::ONE, e1, -e1, Octonion::ONE];
        let h = OctHermitian::new(2, good, 1e-12).unwrap();
        assert_eq!(h.hermiticity_residual(), 0.0);
    }

    #[test]
    fn json_shape() {
        let h = OctHermitian::identity(2);
        let s = serde_json::to_string(&h).unwrap();
        assert!(s.starts_with(r#"{"n":2,"entries":[[[1.0,0.0"#));
        let back: OctHermitian = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        assert!(serde_json::from_str::<OctHermitian>(r#"{"n":2,"entries":[]}"#).is_err());
    }

    #[test]
    fn det_of_diagonal() {
        let s = OctMatrix2::diag(Octonion::real(2.0), Octonion::real(0.5));
        assert_eq!(s.det(), Octonion::ONE);
        assert_eq!((s * OctMatrix2::IDENTITY), s);
    }
}
