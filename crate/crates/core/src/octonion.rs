//! Octonion arithmetic over the basis `e0..e7`.
//!
//! The multiplication table is the Cayley–Dickson doubling of the
//! quaternions, `(a, b)(c, d) = (ac - d*b, da + bc*)`, with `e0..e3` the
//! quaternion units `1, i, j, k` of the first slot and `e4..e7` the same
//! units in the second slot. It is frozen below as a signed-index table;
//! the test module regenerates it from the doubling formula.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on coefficients used for subspace membership.
pub const SUBSPACE_TOL: f64 = 1e-12;

/// `MUL_TABLE[i][j] = (s, k)` means `e_i e_j = s e_k`.
pub const MUL_TABLE: [[(i8, u8); 8]; 8] = [
    [
        (1, 0),
        (1, 1),
        (1, 2),
        (1, 3),
        (1, 4),
        (1, 5),
        (1, 6),
        (1, 7),
    ],
    [
        (1, 1),
        (-1, 0),
        (1, 3),
        (-1, 2),
        (1, 5),
        (-1, 4),
        (-1, 7),
        (1, 6),
    ],
    [
        (1, 2),
        (-1, 3),
        (-1, 0),
        (1, 1),
        (1, 6),
        (1, 7),
        (-1, 4),
        (-1, 5),
    ],
    [
        (1, 3),
        (1, 2),
        (-1, 1),
        (-1, 0),
        (1, 7),
        (-1, 6),
        (1, 5),
        (-1, 4),
    ],
    [
        (1, 4),
        (-1, 5),
        (-1, 6),
        (-1, 7),
        (-1, 0),
        (1, 1),
        (1, 2),
        (1, 3),
    ],
    [
        (1, 5),
        (1, 4),
        (-1, 7),
        (1, 6),
        (-1, 1),
        (-1, 0),
        (-1, 3),
        (1, 2),
    ],
    [
        (1, 6),
        (1, 7),
        (1, 4),
        (-1, 5),
        (-1, 2),
        (1, 3),
        (-1, 0),
        (-1, 1),
    ],
    [
        (1, 7),
        (-1, 6),
        (1, 5),
        (1, 4),
        (-1, 3),
        (-1, 2),
        (1, 1),
        (-1, 0),
    ],
];

/// An octonion `c0 e0 + c1 e1 + ... + c7 e7`.
#[derive(Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Octonion(pub [f64; 8]);

/// Selects the complex subspace `span(1, e_k)`; `k = 0` is the real line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct SubspaceIndex(u8);

impl SubspaceIndex {
    pub const REAL: SubspaceIndex = SubspaceIndex(0);

    pub fn new(k: usize) -> Result<Self> {
        if k <= 7 {
            Ok(SubspaceIndex(k as u8))
        } else {
            Err(Error::InvalidIndex(format!(
                "subspace index {k} outside 0..=7"
            )))
        }
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// The seven imaginary subspaces `span(1, e1)` .. `span(1, e7)`.
    pub fn imaginary() -> impl Iterator<Item = SubspaceIndex> {
        (1..8u8).map(SubspaceIndex)
    }
}

impl TryFrom<u8> for SubspaceIndex {
    type Error = Error;

    fn try_from(k: u8) -> Result<Self> {
        SubspaceIndex::new(k as usize)
    }
}

impl From<SubspaceIndex> for u8 {
    fn from(k: SubspaceIndex) -> u8 {
        k.0
    }
}

impl Octonion {
    pub const ZERO: Octonion = Octonion([0.0; 8]);
    pub const ONE: Octonion = Octonion([1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);

    pub fn new(coeffs: [f64; 8]) -> Self {
        Octonion(coeffs)
    }

    pub fn real(x: f64) -> Self {
        let mut c = [0.0; 8];
        c[0] = x;
        Octonion(c)
    }

    /// Unit `e_i`. Panics if `i > 7`.
    pub fn unit(i: usize) -> Self {
        let mut c = [0.0; 8];
        c[i] = 1.0;
        Octonion(c)
    }

    /// `re + im e_k`, the image of a complex number in `span(1, e_k)`.
    pub fn from_complex(re: f64, im: f64, k: SubspaceIndex) -> Self {
        let mut c = [0.0; 8];
        c[0] = re;
        if k.get() == 0 {
            assert!(im == 0.0, "real subspace carries no imaginary part");
        } else {
            c[k.get()] = im;
        }
        Octonion(c)
    }

    pub fn coeffs(&self) -> &[f64; 8] {
        &self.0
    }

    pub fn re(&self) -> f64 {
        self.0[0]
    }

    pub fn conj(&self) -> Self {
        let mut c = self.0;
        for x in &mut c[1..] {
            *x = -*x;
        }
        Octonion(c)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.0[1..].iter().all(|x| x.abs() <= tol)
    }

    /// True iff every coefficient outside `{c0, c_k}` is within `tol` of zero.
    pub fn in_subspace(&self, k: SubspaceIndex, tol: f64) -> bool {
        self.0
            .iter()
            .enumerate()
            .skip(1)
            .all(|(i, x)| i == k.get() || x.abs() <= tol)
    }

    /// Imaginary units carrying a coefficient larger than `tol`.
    pub fn support(&self, tol: f64) -> impl Iterator<Item = usize> + '_ {
        (1..8).filter(move |&i| self.0[i].abs() > tol)
    }

    /// Multiplicative inverse `z* / |z|^2`. Returns `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        let n2 = self.norm_sqr();
        (n2 > 0.0).then(|| self.conj() / n2)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// `max(|a(ba) - (ab)a|, |a(ab) - (aa)b|)`.
pub fn alternativity_residual(a: Octonion, b: Octonion) -> f64 {
    let flexible = a * (b * a) - (a * b) * a;
    let left = a * (a * b) - (a * a) * b;
    flexible.norm().max(left.norm())
}

/// The associator `(ab)c - a(bc)`.
pub fn associator(a: Octonion, b: Octonion, c: Octonion) -> Octonion {
    (a * b) * c - a * (b * c)
}

impl fmt::Debug for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Octonion{:?}", self.0)
    }
}

impl fmt::Display for Octonion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0[0])?;
        for (i, x) in self.0.iter().enumerate().skip(1) {
            if *x != 0.0 {
                write!(f, " {} {}e{}", if *x < 0.0 { '-' } else { '+' }, x.abs(), i)?;
            }
        }
        Ok(())
    }
}

impl Index<usize> for Octonion {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl From<f64> for Octonion {
    fn from(x: f64) -> Self {
        Octonion::real(x)
    }
}

impl Add for Octonion {
    type Output = Octonion;

    fn add(self, rhs: Octonion) -> Octonion {
        Octonion(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl AddAssign for Octonion {
    fn add_assign(&mut self, rhs: Octonion) {
        for (x, y) in self.0.iter_mut().zip(rhs.0) {
            *x += y;
        }
    }
}

impl Sub for Octonion {
    type Output = Octonion;

    fn sub(self, rhs: Octonion) -> Octonion {
        Octonion(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl SubAssign for Octonion {
    fn sub_assign(&mut self, rhs: Octonion) {
        for (x, y) in self.0.iter_mut().zip(rhs.0) {
            *x -= y;
        }
    }
}

impl Neg for Octonion {
    type Output = Octonion;

    fn neg(self) -> Octonion {
        Octonion(self.0.map(|x| -x))
    }
}

impl Mul for Octonion {
    type Output = Octonion;

    fn mul(self, rhs: Octonion) -> Octonion {
        let mut out = [0.0; 8];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in rhs.0.iter().enumerate() {
                let (s, k) = MUL_TABLE[i][j];
                out[k as usize] += f64::from(s) * a * b;
            }
        }
        Octonion(out)
    }
}

impl Mul<f64> for Octonion {
    type Output = Octonion;

    fn mul(self, s: f64) -> Octonion {
        Octonion(self.0.map(|x| x * s))
    }
}

impl Mul<Octonion> for f64 {
    type Output = Octonion;

    fn mul(self, z: Octonion) -> Octonion {
        z * self
    }
}

impl Div<f64> for Octonion {
    type Output = Octonion;

    fn div(self, s: f64) -> Octonion {
        Octonion(self.0.map(|x| x / s))
    }
}

impl std::iter::Sum for Octonion {
    fn sum<I: Iterator<Item = Octonion>>(iter: I) -> Octonion {
        iter.fold(Octonion::ZERO, |acc, z| acc + z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Cayley–Dickson doubling on plain arrays, kept apart from MUL_TABLE.
    fn quat_mul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
        [
            a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
            a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
            a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
        ]
    }

    fn quat_conj(a: [f64; 4]) -> [f64; 4] {
        [a[0], -a[1], -a[2], -a[3]]
    }

    fn doubling_mul(x: [f64; 8], y: [f64; 8]) -> [f64; 8] {
        let (a, b) = ([x[0], x[1], x[2], x[3]], [x[4], x[5], x[6], x[7]]);
        let (c, d) = ([y[0], y[1], y[2], y[3]], [y[4], y[5], y[6], y[7]]);
        let ac = quat_mul(a, c);
        let db = quat_mul(quat_conj(d), b);
        let da = quat_mul(d, a);
        let bc = quat_mul(b, quat_conj(c));
        [
            ac[0] - db[0],
            ac[1] - db[1],
            ac[2] - db[2],
            ac[3] - db[3],
            da[0] + bc[0],
            da[1] + bc[1],
            da[2] + bc[2],
            da[3] + bc[3],
        ]
    }

    fn octonion() -> impl Strategy<Value = Octonion> {
        prop::array::uniform8(-2.0f64..2.0).prop_map(Octonion)
    }

    #[test]
    fn frozen_table_matches_doubling() {
        for i in 0..8 {
            for j in 0..8 {
                let p = doubling_mul(Octonion::unit(i).0, Octonion::unit(j).0);
                let (s, k) = MUL_TABLE[i][j];
                let mut expected = [0.0; 8];
                expected[k as usize] = f64::from(s);
                assert_eq!(p, expected, "e{i} e{j}");
            }
        }
    }

    #[test]
    fn basis_products() {
        assert_eq!(Octonion::unit(1) * Octonion::unit(1), -Octonion::ONE);
        assert_eq!(Octonion::unit(1) * Octonion::unit(2), Octonion::unit(3));
        for i in 1..8 {
            for j in 1..8 {
                let anti =
                    Octonion::unit(i) * Octonion::unit(j) + Octonion::unit(j) * Octonion::unit(i);
                let expected = if i == j {
                    Octonion::real(-2.0)
                } else {
                    Octonion::ZERO
                };
                assert_eq!(anti, expected);
            }
        }
    }

    #[test]
    fn conj_and_norm_examples() {
        assert_eq!(Octonion::ONE.conj(), Octonion::ONE);
        assert_eq!(Octonion::unit(5).conj(), -Octonion::unit(5));
        assert_eq!(Octonion::ZERO.norm(), 0.0);
        assert_eq!(Octonion::unit(7).norm(), 1.0);
        let z = Octonion::real(3.0) + 4.0 * Octonion::unit(2);
        assert_eq!(z.norm(), 5.0);
    }

    #[test]
    fn subspace_membership() {
        let k4 = SubspaceIndex::new(4).unwrap();
        let k1 = SubspaceIndex::new(1).unwrap();
        assert!((Octonion::real(2.0) + 3.0 * Octonion::unit(4)).in_subspace(k4, SUBSPACE_TOL));
        assert!(!(Octonion::unit(1) + Octonion::unit(2)).in_subspace(k1, SUBSPACE_TOL));
        assert!((Octonion::ONE + 1e-15 * Octonion::unit(3)).in_subspace(k1, SUBSPACE_TOL));
        assert!(SubspaceIndex::new(8).is_err());
    }

    #[test]
    fn associator_witness() {
        let w = associator(Octonion::unit(1), Octonion::unit(2), Octonion::unit(4));
        assert!(w.norm() > 1.0);
        assert_eq!(
            alternativity_residual(Octonion::unit(1), Octonion::unit(2)),
            0.0
        );
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(a in octonion(), b in octonion()) {
            let lhs = (a * b).norm();
            let rhs = a.norm() * b.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300) + 1e-300);
        }

        #[test]
        fn conj_is_involutive_antiautomorphism(a in octonion(), b in octonion()) {
            prop_assert_eq!(a.conj().conj(), a);
            let d = (a * b).conj() - b.conj() * a.conj();
            prop_assert!(d.norm() <= 1e-12 * (1.0 + a.norm() * b.norm()));
        }

        #[test]
        fn alternative(a in octonion(), b in octonion()) {
            let r = alternativity_residual(a, b);
            prop_assert!(r <= 1e-12 * (1.0 + a.norm()).powi(2) * (1.0 + b.norm()));
        }

        #[test]
        fn norm_sqr_is_real_part_of_z_zbar(z in octonion()) {
            let p = z * z.conj();
            prop_assert!((p.re() - z.norm_sqr()).abs() <= 1e-12 * (1.0 + z.norm_sqr()));
        }

        #[test]
        fn complex_subspace_closed(k in 1usize..8, a in prop::array::uniform2(-2.0f64..2.0), b in prop::array::uniform2(-2.0f64..2.0)) {
            let k = SubspaceIndex::new(k).unwrap();
            let x = Octonion::from_complex(a[0], a[1], k);
            let y = Octonion::from_complex(b[0], b[1], k);
            prop_assert!((x * y).in_subspace(k, 0.0));
            prop_assert!(x.conj().in_subspace(k, 0.0));
        }
    }
}
