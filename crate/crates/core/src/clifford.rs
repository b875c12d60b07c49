//! The generating space of the split Clifford algebra `Cl(2n, 2n, R)` and
//! its octonion-coefficient extension.
//!
//! Basis vectors are `e_k, e_k*, f_k, f_k*` for `k = 1..=n`. The bilinear
//! form used throughout is the anticommutator itself,
//!
//! ```text
//! B(e_i, e_j*) = B(e_j*, e_i) =  δ_ij
//! B(f_i, f_j*) = B(f_j*, f_i) = -δ_ij
//! ```
//!
//! with every other pair zero. On tensor vectors it extends as
//! `(z1 ⊗ u1)•(z2 ⊗ u2) = (z1 z2) B(u1, u2)`. Using the anticommutator
//! rather than half of it makes `H_ii = Σ |a_ik|² - |b_ik|²` hold with unit
//! weight in [`crate::resolve`].

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::OctHermitian;
use crate::octonion::Octonion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorKind {
    E,
    Estar,
    F,
    Fstar,
}

impl GeneratorKind {
    pub fn conj(self) -> Self {
        match self {
            GeneratorKind::E => GeneratorKind::Estar,
            GeneratorKind::Estar => GeneratorKind::E,
            GeneratorKind::F => GeneratorKind::Fstar,
            GeneratorKind::Fstar => GeneratorKind::F,
        }
    }

    /// Sign of the form against the conjugate kind: +1 in the e-sector,
    /// -1 in the f-sector.
    fn pairing_sign(self) -> f64 {
        match self {
            GeneratorKind::E | GeneratorKind::Estar => 1.0,
            GeneratorKind::F | GeneratorKind::Fstar => -1.0,
        }
    }
}

/// A basis vector of the generating space; `k` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub kind: GeneratorKind,
    pub k: usize,
}

impl Generator {
    pub fn new(kind: GeneratorKind, k: usize) -> Self {
        Generator { kind, k }
    }

    pub fn e(k: usize) -> Self {
        Generator::new(GeneratorKind::E, k)
    }

    pub fn e_star(k: usize) -> Self {
        Generator::new(GeneratorKind::Estar, k)
    }

    pub fn f(k: usize) -> Self {
        Generator::new(GeneratorKind::F, k)
    }

    pub fn f_star(k: usize) -> Self {
        Generator::new(GeneratorKind::Fstar, k)
    }

    pub fn conj(self) -> Self {
        Generator::new(self.kind.conj(), self.k)
    }

    /// The anticommutator `{self, other}` as a real number.
    pub fn form(self, other: Generator) -> f64 {
        if self.k == other.k && other.kind == self.kind.conj() {
            self.kind.pairing_sign()
        } else {
            0.0
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            GeneratorKind::E => "e",
            GeneratorKind::Estar => "e*",
            GeneratorKind::F => "f",
            GeneratorKind::Fstar => "f*",
        };
        write!(f, "{}_{}", name, self.k)
    }
}

/// An element of `O ⊗ V`: octonion coefficients over the generating basis
/// of `Cl(2n, 2n, R)`. Zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TensorVectorRepr", into = "TensorVectorRepr")]
pub struct TensorVector {
    n: usize,
    terms: BTreeMap<Generator, Octonion>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    kind: GeneratorKind,
    k: usize,
    coeff: Octonion,
}

#[derive(Serialize, Deserialize)]
struct TensorVectorRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

impl TryFrom<TensorVectorRepr> for TensorVector {
    type Error = Error;

    fn try_from(r: TensorVectorRepr) -> Result<Self> {
        let mut v = TensorVector::zero(r.n);
        for t in r.terms {
            v.add_term(Generator::new(t.kind, t.k), t.coeff)?;
        }
        Ok(v)
    }
}

impl From<TensorVector> for TensorVectorRepr {
    fn from(v: TensorVector) -> Self {
        TensorVectorRepr {
            n: v.n,
            terms: v
                .terms
                .into_iter()
                .map(|(g, coeff)| TermRepr {
                    kind: g.kind,
                    k: g.k,
                    coeff,
                })
                .collect(),
        }
    }
}

impl TensorVector {
    pub fn zero(n: usize) -> Self {
        TensorVector {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// `coeff ⊗ g` in rank `n`.
    pub fn basis(n: usize, g: Generator, coeff: Octonion) -> Result<Self> {
        let mut v = TensorVector::zero(n);
        v.add_term(g, coeff)?;
        Ok(v)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Adds `coeff ⊗ g`, rejecting generator indices outside `1..=n`.
    pub fn add_term(&mut self, g: Generator, coeff: Octonion) -> Result<()> {
        if g.k == 0 || g.k > self.n {
            return Err(Error::InvalidIndex(format!(
                "generator {g} outside rank {}",
                self.n
            )));
        }
        let slot = self.terms.entry(g).or_insert(Octonion::ZERO);
        *slot += coeff;
        if *slot == Octonion::ZERO {
            self.terms.remove(&g);
        }
        Ok(())
    }

    pub fn with_term(mut self, g: Generator, coeff: Octonion) -> Result<Self> {
        self.add_term(g, coeff)?;
        Ok(self)
    }

    pub fn coeff(&self, g: Generator) -> Octonion {
        self.terms.get(&g).copied().unwrap_or(Octonion::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Generator, Octonion)> + '_ {
        self.terms.iter().map(|(g, z)| (*g, *z))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn map_coeffs(&self, f: impl Fn(Octonion) -> Octonion) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(g, z)| (*g, f(*z)))
            .filter(|(_, z)| *z != Octonion::ZERO)
            .collect();
        TensorVector { n: self.n, terms }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map_coeffs(|z| z * s)
    }

    /// `(s ⊗ 1) · v`: every coefficient multiplied by `s` from the left.
    pub fn left_mul(&self, s: Octonion) -> Self {
        self.map_coeffs(|z| s * z)
    }

    /// `v · (s ⊗ 1)`.
    pub fn right_mul(&self, s: Octonion) -> Self {
        self.map_coeffs(|z| z * s)
    }

    pub fn add(&self, other: &TensorVector) -> Result<Self> {
        check_rank(self, other)?;
        let mut out = self.clone();
        for (g, z) in other.terms() {
            out.add_term(g, z)?;
        }
        Ok(out)
    }

    /// Largest coefficient norm of `self - other`.
    pub fn max_diff(&self, other: &TensorVector) -> f64 {
        let mut keys: Vec<Generator> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .copied()
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|g| (self.coeff(g) - other.coeff(g)).norm())
            .fold(0.0, f64::max)
    }
}

fn check_rank(u: &TensorVector, v: &TensorVector) -> Result<()> {
    if u.n != v.n {
        Err(Error::RankMismatch(u.n, v.n))
    } else {
        Ok(())
    }
}

/// The octonion-valued inner product `u • v`.
pub fn inner(u: &TensorVector, v: &TensorVector) -> Result<Octonion> {
    check_rank(u, v)?;
    let mut acc = Octonion::ZERO;
    for (g, z) in u.terms() {
        let partner = g.conj();
        if let Some(w) = v.terms.get(&partner) {
            acc += (z * *w) * g.form(partner);
        }
    }
    Ok(acc)
}

/// `(z ⊗ u)* = z* ⊗ u*`, extended linearly.
pub fn conj(v: &TensorVector) -> TensorVector {
    let terms = v.terms.iter().map(|(g, z)| (g.conj(), z.conj())).collect();
    TensorVector { n: v.n, terms }
}

/// `H[i][j] = v_i • v_j*`.
///
/// Only the upper triangle is evaluated; the lower one is its conjugate, so
/// the result is exactly Hermitian.
pub fn gram_matrix(vs: &[TensorVector]) -> Result<OctHermitian> {
    if let Some(first) = vs.first() {
        for v in vs {
            check_rank(first, v)?;
        }
    }
    let conjugated: Vec<TensorVector> = vs.iter().map(conj).collect();
    Ok(OctHermitian::from_upper(vs.len(), |i, j| {
        inner(&vs[i], &conjugated[j]).expect("ranks checked")
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn e(k: usize) -> Octonion {
        Octonion::unit(k)
    }

    fn tv(n: usize, terms: &[(Generator, Octonion)]) -> TensorVector {
        let mut v = TensorVector::zero(n);
        for (g, z) in terms {
            v.add_term(*g, *z).unwrap();
        }
        v
    }

    #[test]
    fn basis_pairings() {
        let one = Octonion::ONE;
        let u = tv(1, &[(Generator::e(1), one)]);
        assert_eq!(inner(&u, &conj(&u)).unwrap(), one);
        let f = tv(1, &[(Generator::f(1), one)]);
        assert_eq!(inner(&f, &conj(&f)).unwrap(), -one);
        let a = tv(1, &[(Generator::e(1), e(2))]);
        let b = tv(1, &[(Generator::e(1), e(3))]);
        assert_eq!(inner(&a, &conj(&b)).unwrap(), -(e(2) * e(3)));
    }

    #[test]
    fn sector_orthogonality() {
        let gens = |k| {
            [
                Generator::e(k),
                Generator::e_star(k),
                Generator::f(k),
                Generator::f_star(k),
            ]
        };
        for g in gens(1).into_iter().chain(gens(2)) {
            for h in gens(1).into_iter().chain(gens(2)) {
                let expected = if g.k == h.k && h.kind == g.kind.conj() {
                    g.kind.pairing_sign()
                } else {
                    0.0
                };
                assert_eq!(g.form(h), expected, "{g} {h}");
            }
        }
    }

    #[test]
    fn conjugation_rule() {
        let one = Octonion::ONE;
        let v = tv(1, &[(Generator::e(1), one)]);
        assert_eq!(conj(&v), tv(1, &[(Generator::e_star(1), one)]));
        let w = tv(2, &[(Generator::f(2), e(5))]);
        assert_eq!(conj(&w), tv(2, &[(Generator::f_star(2), -e(5))]));
    }

    #[test]
    fn gram_examples() {
        let one = Octonion::ONE;
        let vs = [
            tv(2, &[(Generator::e(1), one)]),
            tv(2, &[(Generator::e(2), one)]),
        ];
        assert_eq!(gram_matrix(&vs).unwrap(), OctHermitian::identity(2));
        let vs = [tv(1, &[(Generator::f(1), one)])];
        assert_eq!(gram_matrix(&vs).unwrap(), OctHermitian::diagonal(&[-1.0]));
    }

    #[test]
    fn rank_checks() {
        let a = TensorVector::zero(1);
        let b = TensorVector::zero(2);
        assert_eq!(inner(&a, &b), Err(Error::RankMismatch(1, 2)));
        assert!(gram_matrix(&[a, b]).is_err());
        assert!(TensorVector::basis(2, Generator::e(3), Octonion::ONE).is_err());
        assert!(TensorVector::basis(2, Generator::e(0), Octonion::ONE).is_err());
    }

    #[test]
    fn json_shape() {
        let v = tv(2, &[(Generator::f_star(2), e(1))]);
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(
            s,
            r#"{"n":2,"terms":[{"kind":"Fstar","k":2,"coeff":[0.0,1.0,0.0,0.0,0.0,0.0,0.0,0.0]}]}"#
        );
        assert_eq!(serde_json::from_str::<TensorVector>(&s).unwrap(), v);
    }

    fn kind() -> impl Strategy<Value = GeneratorKind> {
        prop_oneof![
            Just(GeneratorKind::E),
            Just(GeneratorKind::Estar),
            Just(GeneratorKind::F),
            Just(GeneratorKind::Fstar)
        ]
    }

    fn vector(n: usize) -> impl Strategy<Value = TensorVector> {
        prop::collection::vec((kind(), 1..=n, prop::array::uniform8(-1.0f64..1.0)), 0..6).prop_map(
            move |terms| {
                let mut v = TensorVector::zero(n);
                for (kind, k, c) in terms {
                    v.add_term(Generator::new(kind, k), Octonion(c)).unwrap();
                }
                v
            },
        )
    }

    proptest! {
        #[test]
        fn conj_is_involution(v in vector(3)) {
            prop_assert_eq!(conj(&conj(&v)), v);
        }

        #[test]
        fn inner_is_real_bilinear(u in vector(3), w in vector(3), v in vector(3), alpha in -3.0f64..3.0) {
            let lhs = inner(&u.scale(alpha).add(&w).unwrap(), &v).unwrap();
            let rhs = inner(&u, &v).unwrap() * alpha + inner(&w, &v).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
        }

        #[test]
        fn gram_is_exactly_hermitian(vs in prop::collection::vec(vector(3), 1..5)) {
            prop_assert_eq!(gram_matrix(&vs).unwrap().hermiticity_residual(), 0.0);
        }
    }
}
