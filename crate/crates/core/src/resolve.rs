//! Resolution of octonionic Hermitian matrices into generating-space vectors.
//!
//! Every `H` factors as `H_ij = v_i • v_j*` with
//! `v_i = Σ_{k<=i} a_ik ⊗ e_k + b_ik ⊗ f_k`. Columns are processed in order,
//! like an indefinite Cholesky factorization, with all pivots real so that
//! division never depends on how octonion products are bracketed.

use serde::{Deserialize, Serialize};

use crate::clifford::{gram_matrix, inner, Generator, TensorVector};
use crate::error::{Error, Result};
use crate::matrix::OctHermitian;
use crate::minkowski::{vector_to_matrix, SigmaSet};
use crate::octonion::Octonion;

pub const DEFAULT_TOL: f64 = 1e-12;

/// Lower-triangular coefficients `a_ik`, `b_ik` of a resolution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resolution {
    n: usize,
    a: Vec<Vec<Octonion>>,
    b: Vec<Vec<Octonion>>,
}

impl Resolution {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn a(&self, i: usize, k: usize) -> Octonion {
        self.a[i][k]
    }

    pub fn b(&self, i: usize, k: usize) -> Octonion {
        self.b[i][k]
    }

    /// `v_i = Σ_k a_ik ⊗ e_k + b_ik ⊗ f_k`.
    pub fn vectors(&self) -> Vec<TensorVector> {
        (0..self.n)
            .map(|i| {
                let mut v = TensorVector::zero(self.n);
                for k in 0..self.n {
                    v.add_term(Generator::e(k + 1), self.a[i][k])
                        .expect("k < n");
                    v.add_term(Generator::f(k + 1), self.b[i][k])
                        .expect("k < n");
                }
                v
            })
            .collect()
    }

    /// Largest entry norm of `gram(vectors) - h`.
    pub fn reconstruction_residual(&self, h: &OctHermitian) -> f64 {
        let g = gram_matrix(&self.vectors()).expect("vectors share rank");
        g.max_diff(h)
    }
}

/// How diagonal pivots are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Residuals with `|r| < 1` take both pivots, `a_jj = sqrt(1 + max(r, 0))`
    /// and `b_jj = sqrt(1 - min(r, 0))`, and off-diagonal residuals are split
    /// between them with minimal norm. Every divisor is then at least one,
    /// which bounds coefficient growth.
    #[default]
    Banded,
    /// Both pivots equal one only when `|r| <= tol`; otherwise a single pivot
    /// `sqrt(|r|)`. Unstable when some `|r|` is small but above `tol`.
    Literal,
}

/// Factors `h` with [`PivotRule::Banded`]. Fails only if `h` is not Hermitian
/// to within `tol`.
pub fn resolve_hermitian(h: &OctHermitian, tol: f64) -> Result<Resolution> {
    resolve_hermitian_with(h, tol, PivotRule::Banded)
}

pub fn resolve_hermitian_with(h: &OctHermitian, tol: f64, rule: PivotRule) -> Result<Resolution> {
    let n = h.n();
    let dev = h.hermiticity_residual();
    if dev > tol {
        return Err(Error::NotHermitian {
            row: 0,
            col: 0,
            deviation: dev,
        });
    }
    let mut a = vec![vec![Octonion::ZERO; n]; n];
    let mut b = vec![vec![Octonion::ZERO; n]; n];

    for j in 0..n {
        let r = h.get(j, j).re()
            - (0..j)
                .map(|k| a[j][k].norm_sqr() - b[j][k].norm_sqr())
                .sum::<f64>();
        let (pa, pb) = match rule {
            PivotRule::Banded if r.abs() < 1.0 => {
                ((1.0 + r.max(0.0)).sqrt(), (1.0 - r.min(0.0)).sqrt())
            }
            PivotRule::Literal if r.abs() <= tol => (1.0, 1.0),
            _ if r > 0.0 => (r.sqrt(), 0.0),
            _ => (0.0, (-r).sqrt()),
        };
        a[j][j] = Octonion::real(pa);
        b[j][j] = Octonion::real(pb);

        // a_ij pa - b_ij pb = c
        for i in j + 1..n {
            let c = h.get(i, j)
                - (0..j)
                    .map(|k| a[i][k] * a[j][k].conj() - b[i][k] * b[j][k].conj())
                    .sum::<Octonion>();
            match (rule, pa != 0.0, pb != 0.0) {
                (PivotRule::Banded, true, true) => {
                    let d = pa * pa + pb * pb;
                    a[i][j] = c * (pa / d);
                    b[i][j] = -(c * (pb / d));
                }
                (PivotRule::Literal, true, true) => a[i][j] = c,
                (_, true, false) => a[i][j] = c / pa,
                _ => b[i][j] = -(c / pb),
            }
        }
    }
    Ok(Resolution { n, a, b })
}

/// The two spinor components `c^A` of a 4-vector, with checks.
#[derive(Clone, Debug)]
pub struct SpacetimeResolution {
    pub c: [TensorVector; 2],
    /// `max |c^A • c^B|`.
    pub isotropy_residual: f64,
    /// `max |c^A • c^B* - X^{AB}|`.
    pub reconstruction_residual: f64,
}

pub fn resolve_spacetime(x: [f64; 4]) -> Result<SpacetimeResolution> {
    let xm = vector_to_matrix(&x, &SigmaSet::four())?.to_oct_hermitian();
    let res = resolve_hermitian(&xm, DEFAULT_TOL)?;
    let [c0, c1]: [TensorVector; 2] = res.vectors().try_into().expect("2x2 input");
    let mut iso: f64 = 0.0;
    for u in [&c0, &c1] {
        for v in [&c0, &c1] {
            iso = iso.max(inner(u, v)?.norm());
        }
    }
    let rec = res.reconstruction_residual(&xm);
    Ok(SpacetimeResolution {
        c: [c0, c1],
        isotropy_residual: iso,
        reconstruction_residual: rec,
    })
}
