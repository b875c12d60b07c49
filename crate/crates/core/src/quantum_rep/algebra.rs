use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::{PolyBasis, PolyOperator, SparseMatrix};
use super::quat::{QuatOperator, QuatUnit};
use crate::error::{Error, Result};
use crate::minkowski::{eta, raise_both, raise_dotted, SigmaSet, C2, EPS};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Sign in front of `iħ` on the right-hand side of a closure relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HbarSign {
    Plus,
    Minus,
}

impl HbarSign {
    pub fn factor(self) -> f64 {
        match self {
            HbarSign::Plus => 1.0,
            HbarSign::Minus => -1.0,
        }
    }
}

/// Position and momentum operators on polynomials of degree at most `N`.
#[derive(Clone, Debug)]
pub struct CanonicalRep {
    basis: PolyBasis,
    hbar: f64,
    q: [PolyOperator; 4],
    r: [PolyOperator; 4],
    safe: Vec<usize>,
}

/// `Q_μ = x_μ ·` and `R_ν = -iħ η_νν ∂_ν`. Requires `n ≥ 2`.
pub fn build_canonical(n: usize, hbar: f64) -> Result<CanonicalRep> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "degree bound {n} must be at least 2"
        )));
    }
    if !(hbar.is_finite() && hbar != 0.0) {
        return Err(Error::InvalidParameter(format!("hbar = {hbar}")));
    }
    Ok(build(n, hbar))
}

fn build(n: usize, hbar: f64) -> CanonicalRep {
    let basis = PolyBasis::new(n);
    let dim = basis.dim();
    let q = std::array::from_fn(|mu| {
        let m = SparseMatrix::from_columns(dim, |j| {
            let mut mono = basis.monomial(j);
            mono[mu] += 1;
            basis
                .index_of(&mono)
                .map(|i| vec![(i, re(1.0))])
                .unwrap_or_default()
        });
        PolyOperator::self_adjoint(m, 1)
    });
    let r = std::array::from_fn(|nu| {
        let m = SparseMatrix::from_columns(dim, |j| {
            let mut mono = basis.monomial(j);
            if mono[nu] == 0 {
                return Vec::new();
            }
            let e = mono[nu] as f64;
            mono[nu] -= 1;
            let i = basis.index_of(&mono).expect("lowering stays in basis");
            vec![(i, Complex64::new(0.0, -hbar * eta(nu) * e))]
        });
        PolyOperator::self_adjoint(m, -1)
    });
    let safe = basis.up_to_degree(n.saturating_sub(1));
    CanonicalRep {
        basis,
        hbar,
        q,
        r,
        safe,
    }
}

impl CanonicalRep {
    pub fn basis(&self) -> &PolyBasis {
        &self.basis
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn q(&self, mu: usize) -> &PolyOperator {
        &self.q[mu]
    }

    pub fn r(&self, nu: usize) -> &PolyOperator {
        &self.r[nu]
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Basis indices of degree at most `N - 1`.
    pub fn safe_columns(&self) -> &[usize] {
        &self.safe
    }

    pub fn identity(&self) -> PolyOperator {
        PolyOperator::identity(self.dim())
    }

    /// Largest matrix entry of `op` on the safe subspace.
    pub fn norm(&self, op: &PolyOperator) -> f64 {
        op.max_abs_on(&self.safe)
    }

    /// Max over all index pairs of the three canonical relations.
    pub fn canonical_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                worst = worst.max(self.norm(&self.q[mu].commutator(&self.q[nu])));
                worst = worst.max(self.norm(&self.r[mu].commutator(&self.r[nu])));
                let rhs = if mu == nu {
                    self.identity().scale(I * self.hbar * eta(mu))
                } else {
                    PolyOperator::zero(self.dim())
                };
                worst = worst.max(self.norm(&self.q[mu].commutator(&self.r[nu]).sub(&rhs)));
            }
        }
        worst
    }

    /// `A_μ = j ⊗ Q_μ`, `K_ν = k ⊗ R_ν`.
    pub fn spin_operators(&self) -> SpinOperators {
        SpinOperators {
            a: std::array::from_fn(|mu| QuatOperator::tagged(QuatUnit::J, self.q[mu].clone())),
            k: std::array::from_fn(|nu| QuatOperator::tagged(QuatUnit::K, self.r[nu].clone())),
        }
    }

    /// `Q_1 R_2 - Q_2 R_1`.
    pub fn jz_operator(&self) -> PolyOperator {
        self.q[1].mul(&self.r[2]).sub(&self.q[2].mul(&self.r[1]))
    }
}

#[derive(Clone, Debug)]
pub struct SpinOperators {
    pub a: [QuatOperator; 4],
    pub k: [QuatOperator; 4],
}

/// Max residual of `[A_μ,A_ν] = [K_μ,K_ν] = 0` and `{A_μ,K_ν} = -ħ η_μν`.
pub fn mixed_algebra_residual(rep: &CanonicalRep, ops: &SpinOperators) -> f64 {
    let cols = rep.safe_columns();
    let mut worst: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            worst = worst.max(ops.a[mu].commutator(&ops.a[nu]).max_abs_on(cols));
            worst = worst.max(ops.k[mu].commutator(&ops.k[nu]).max_abs_on(cols));
            let rhs = if mu == nu {
                rep.identity().scale(re(-rep.hbar() * eta(mu)))
            } else {
                PolyOperator::zero(rep.dim())
            };
            // jk QR + kj RQ = i ⊗ [Q, R]; only the collapsed form is a number
            let anti = ops.a[mu].anticommutator(&ops.k[nu]);
            worst = match anti.collapse() {
                Ok(x) => worst.max(x.sub(&rhs).max_abs_on(cols)),
                Err(_) => f64::INFINITY,
            };
        }
    }
    worst
}

/// A two-index spinor whose entries are quaternion-tagged operators.
#[derive(Clone, Debug)]
pub struct SpinorOperatorMatrix {
    pub entries: [[QuatOperator; 2]; 2],
}

/// `σ_μ^{AḂ}` for the 4D complex Pauli set.
fn sigma_upper() -> Vec<C2> {
    SigmaSet::four()
        .complex()
        .iter()
        .enumerate()
        .map(|(mu, s)| raise_both(s) * re(eta(mu)))
        .collect()
}

impl SpinorOperatorMatrix {
    /// `X_{AḂ} = σ^μ_{AḂ} X_μ`.
    pub fn from_vector(x: &[QuatOperator; 4]) -> Self {
        Self::combine(&SigmaSet::four().complex(), x)
    }

    /// `X_{AḂ} ↦ X_A^Ḃ`, contracting the dotted index with ε.
    pub fn raise_dotted(x: &[QuatOperator; 4]) -> Self {
        let s: Vec<C2> = SigmaSet::four()
            .complex()
            .iter()
            .map(raise_dotted)
            .collect();
        Self::combine(&s, x)
    }

    fn combine(s: &[C2], x: &[QuatOperator; 4]) -> Self {
        let entries = std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                (0..4).fold(QuatOperator::zero(x[0].dim()), |acc, mu| {
                    acc.add(&x[mu].scale(s[mu][(a, b)]))
                })
            })
        });
        SpinorOperatorMatrix { entries }
    }

    /// `X_μ = ½ σ_μ^{AḂ} X_{AḂ}`.
    pub fn to_vector(&self) -> [QuatOperator; 4] {
        let sup = sigma_upper();
        std::array::from_fn(|mu| {
            let mut acc = QuatOperator::zero(self.entries[0][0].dim());
            for a in 0..2 {
                for b in 0..2 {
                    acc = acc.add(&self.entries[a][b].scale(sup[mu][(a, b)] * 0.5));
                }
            }
            acc
        })
    }
}

/// Operator-valued symmetric spinor `M_{AB}`.
pub type OperatorSpinor = [[PolyOperator; 2]; 2];

/// `M⁰_(AB)`: the symmetrized `i K_A^Ė A_{BĖ}` with quaternion `i` read as
/// the complex unit.
pub fn angular_momentum(ops: &SpinOperators) -> Result<OperatorSpinor> {
    let kr = SpinorOperatorMatrix::raise_dotted(&ops.k);
    let am = SpinorOperatorMatrix::from_vector(&ops.a);
    let raw: [[QuatOperator; 2]; 2] = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            (0..2)
                .fold(QuatOperator::zero(ops.a[0].dim()), |acc, e| {
                    acc.add(&kr.entries[a][e].mul(&am.entries[b][e]))
                })
                .scale(I)
        })
    });
    let mut out: Vec<Vec<PolyOperator>> = Vec::with_capacity(2);
    for a in 0..2 {
        let mut row = Vec::with_capacity(2);
        for b in 0..2 {
            row.push(raw[a][b].add(&raw[b][a]).scale(re(0.5)).collapse()?);
        }
        out.push(row);
    }
    Ok(std::array::from_fn(|a| {
        std::array::from_fn(|b| out[a][b].clone())
    }))
}

fn dagger_spinor(m: &OperatorSpinor) -> OperatorSpinor {
    std::array::from_fn(|a| std::array::from_fn(|b| m[a][b].dagger()))
}

/// Max residual of
/// `[M_AB, M_EF] = ±iħ((M_AE ε_FB + M_BE ε_FA) + (M_AF ε_EB + M_BF ε_EA))`.
pub fn lorentz_closure_residual(rep: &CanonicalRep, m: &OperatorSpinor, sign: HbarSign) -> f64 {
    let c = I * rep.hbar() * sign.factor();
    let mut worst: f64 = 0.0;
    for (a, b, e, f) in quad(2) {
        let lhs = m[a][b].commutator(&m[e][f]);
        let rhs = m[a][e]
            .scale(re(EPS[f][b]))
            .add(&m[b][e].scale(re(EPS[f][a])))
            .add(&m[a][f].scale(re(EPS[e][b])))
            .add(&m[b][f].scale(re(EPS[e][a])))
            .scale(c);
        worst = worst.max(rep.norm(&lhs.sub(&rhs)));
    }
    worst
}

/// Max of `[M_AB, M†_ĖḞ]` over all indices.
pub fn dotted_commutator_residual(rep: &CanonicalRep, m: &OperatorSpinor) -> f64 {
    let md = dagger_spinor(m);
    quad(2)
        .map(|(a, b, e, f)| rep.norm(&m[a][b].commutator(&md[e][f])))
        .fold(0.0, f64::max)
}

fn quad(n: usize) -> impl Iterator<Item = (usize, usize, usize, usize)> {
    (0..n).flat_map(move |a| {
        (0..n).flat_map(move |b| (0..n).flat_map(move |e| (0..n).map(move |f| (a, b, e, f))))
    })
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// `N_1 = (i/4)(J†_11 - J†_22)`, `N_2 = ¼(J†_11 + J†_22)`, `N_3 = -(i/2) J†_12`.
pub fn three_vector_form(m: &OperatorSpinor) -> [PolyOperator; 3] {
    let jd = dagger_spinor(m);
    [
        jd[0][0].sub(&jd[1][1]).scale(I * 0.25),
        jd[0][0].add(&jd[1][1]).scale(re(0.25)),
        jd[0][1].scale(-I * 0.5),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeVectorResiduals {
    /// `[N_i, N_j] ∓ iħ ε_ijk N_k`.
    pub n_n: f64,
    /// `[N†_i, N†_j] ∓ iħ ε_ijk N†_k`.
    pub ndag_ndag: f64,
    /// `[N_i, N†_j]`.
    pub n_ndag: f64,
}

pub fn three_vector_residuals(
    rep: &CanonicalRep,
    n: &[PolyOperator; 3],
    sign: HbarSign,
) -> ThreeVectorResiduals {
    let nd: [PolyOperator; 3] = std::array::from_fn(|i| n[i].dagger());
    let c = I * rep.hbar() * sign.factor();
    let so3 = |v: &[PolyOperator; 3]| {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let rhs = (0..3).fold(PolyOperator::zero(rep.dim()), |acc, k| {
                    acc.add(&v[k].scale(c * levi_civita(i, j, k)))
                });
                worst = worst.max(rep.norm(&v[i].commutator(&v[j]).sub(&rhs)));
            }
        }
        worst
    };
    let mut mixed: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            mixed = mixed.max(rep.norm(&n[i].commutator(&nd[j])));
        }
    }
    ThreeVectorResiduals {
        n_n: so3(n),
        ndag_ndag: so3(&nd),
        n_ndag: mixed,
    }
}

/// Antisymmetric tensor of operators `M_μν`.
pub type OperatorTensor = [[PolyOperator; 4]; 4];

/// `M_ij = ε_ijk (N_k + N_k†)`, `M_0i = -i (N_i - N_i†)`.
pub fn tensor_from_three_vector(n: &[PolyOperator; 3]) -> OperatorTensor {
    let dim = n[0].dim();
    let mut t: OperatorTensor =
        std::array::from_fn(|_| std::array::from_fn(|_| PolyOperator::zero(dim)));
    for i in 0..3 {
        let boost = n[i].sub(&n[i].dagger()).scale(-I);
        t[i + 1][0] = boost.scale(re(-1.0));
        t[0][i + 1] = boost;
        for j in 0..3 {
            t[i + 1][j + 1] = (0..3).fold(PolyOperator::zero(dim), |acc, k| {
                acc.add(&n[k].add(&n[k].dagger()).scale(re(levi_civita(i, j, k))))
            });
        }
    }
    t
}

/// `M_μν = ¼ σ_μ^{AĖ} σ_ν^{BḞ} (J_AB ε_ĖḞ + J†_ĖḞ ε_AB)`.
pub fn tensor_from_spinor(m: &OperatorSpinor) -> OperatorTensor {
    let sup = sigma_upper();
    let md = dagger_spinor(m);
    let dim = m[0][0].dim();
    std::array::from_fn(|mu| {
        std::array::from_fn(|nu| {
            let mut acc = PolyOperator::zero(dim);
            for (a, e, b, f) in quad(2) {
                let w = sup[mu][(a, e)] * sup[nu][(b, f)] * 0.25;
                if w == re(0.0) {
                    continue;
                }
                let term = m[a][b]
                    .scale(re(EPS[e][f]))
                    .add(&md[e][f].scale(re(EPS[a][b])));
                acc = acc.add(&term.scale(w));
            }
            acc
        })
    })
}

/// `Q_μ R_ν - Q_ν R_μ`.
pub fn orbital_tensor(rep: &CanonicalRep) -> OperatorTensor {
    std::array::from_fn(|mu| {
        std::array::from_fn(|nu| rep.q(mu).mul(rep.r(nu)).sub(&rep.q(nu).mul(rep.r(mu))))
    })
}

/// Max of `M_μν + M_νμ`.
pub fn antisymmetry_residual(rep: &CanonicalRep, t: &OperatorTensor) -> f64 {
    let mut worst: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            worst = worst.max(rep.norm(&t[mu][nu].add(&t[nu][mu])));
        }
    }
    worst
}

/// Max residual of
/// `[M_μν, M_ρσ] = ±iħ((η_νρ M_μσ - η_μρ M_νσ) - (η_νσ M_μρ - η_μσ M_νρ))`.
pub fn tensor_closure_residual(rep: &CanonicalRep, t: &OperatorTensor, sign: HbarSign) -> f64 {
    let c = I * rep.hbar() * sign.factor();
    let g = |a: usize, b: usize| if a == b { eta(a) } else { 0.0 };
    let mut worst: f64 = 0.0;
    for (mu, nu, rho, sg) in quad(4) {
        let lhs = t[mu][nu].commutator(&t[rho][sg]);
        let rhs = t[mu][sg]
            .scale(re(g(nu, rho)))
            .sub(&t[nu][sg].scale(re(g(mu, rho))))
            .sub(&t[mu][rho].scale(re(g(nu, sg))))
            .add(&t[nu][rho].scale(re(g(mu, sg))))
            .scale(c);
        worst = worst.max(rep.norm(&lhs.sub(&rhs)));
    }
    worst
}

/// Max entrywise difference of two tensors on the safe subspace.
pub fn tensor_difference(rep: &CanonicalRep, a: &OperatorTensor, b: &OperatorTensor) -> f64 {
    let mut worst: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            worst = worst.max(rep.norm(&a[mu][nu].sub(&b[mu][nu])));
        }
    }
    worst
}

/// Eigenvalues of `Q_1 R_2 - Q_2 R_1` on homogeneous polynomials of degree
/// `d` in `x_1, x_2`, sorted ascending.
///
/// Rescaling `x_1^a x_2^b` by `sqrt(a! b!)` makes the block Hermitian, which
/// lets a Hermitian solver do the work; the generic complex Schur iteration
/// stalls on these blocks.
pub fn jz_block_spectrum(d: usize, hbar: f64) -> Result<Vec<f64>> {
    if !(hbar.is_finite() && hbar != 0.0) {
        return Err(Error::InvalidParameter(format!("hbar = {hbar}")));
    }
    let rep = build(d.max(1), hbar);
    jz_block(&rep, &rep.jz_operator(), d)
}

fn jz_block(rep: &CanonicalRep, jz: &PolyOperator, d: usize) -> Result<Vec<f64>> {
    let fact = |k: usize| (1..=k).map(|x| x as f64).product::<f64>();
    let block: Vec<usize> = (0..=d)
        .map(|a| {
            rep.basis()
                .index_of(&[0, a as u8, (d - a) as u8, 0])
                .expect("in basis")
        })
        .collect();
    let w: Vec<f64> = (0..=d).map(|a| (fact(a) * fact(d - a)).sqrt()).collect();
    let raw: DMatrix<Complex64> = jz.matrix().to_dense(&block, &block);
    let h = DMatrix::from_fn(d + 1, d + 1, |i, j| raw[(i, j)] * (w[i] / w[j]));
    let skew = (&h - h.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if skew > 1e-9 * rep.hbar().abs() {
        return Err(Error::InvalidParameter(format!(
            "rescaled J^z block not Hermitian ({skew:e})"
        )));
    }
    let mut out: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Eigenvalues of `Q_1 R_2 - Q_2 R_1` on polynomials in `x_1, x_2` of degree
/// at most `degree`, sorted ascending.
pub fn jz_spectrum(degree: usize, hbar: f64) -> Result<Vec<f64>> {
    if !(hbar.is_finite() && hbar != 0.0) {
        return Err(Error::InvalidParameter(format!("hbar = {hbar}")));
    }
    let rep = build(degree.max(1), hbar);
    let jz = rep.jz_operator();
    let mut out = Vec::new();
    for d in 0..=degree {
        out.extend(jz_block(&rep, &jz, d)?);
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Largest distance of `λ / ħ` from an integer.
pub fn integrality_residual(eigenvalues: &[f64], hbar: f64) -> f64 {
    eigenvalues
        .iter()
        .map(|l| (l / hbar - (l / hbar).round()).abs())
        .fold(0.0, f64::max)
}

/// Every relation checked on one truncation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantumReport {
    pub degree: usize,
    pub hbar: f64,
    pub dim: usize,
    pub safe_dim: usize,
    pub canonical: f64,
    pub mixed: f64,
    /// Largest entry of `M⁰` on the safe subspace.
    pub scale: f64,
    pub closure_plus: f64,
    pub closure_minus: f64,
    pub dotted: f64,
    pub three_vector_plus: ThreeVectorResiduals,
    pub three_vector_minus: ThreeVectorResiduals,
    pub tensor_antisymmetry: f64,
    pub tensor_closure_plus: f64,
    pub tensor_closure_minus: f64,
    pub spinor_tensor_antisymmetry: f64,
    pub spinor_tensor_closure_plus: f64,
    pub spinor_tensor_closure_minus: f64,
    /// `M_μν` from the three-vector against `Q_μ R_ν - Q_ν R_μ`.
    pub orbital_difference: f64,
    pub jz_degree: usize,
    pub jz_eigenvalues: Vec<f64>,
    pub jz_integrality: f64,
}

pub fn quantum_check(degree: usize, hbar: f64, jz_degree: usize) -> Result<QuantumReport> {
    let rep = build_canonical(degree, hbar)?;
    let ops = rep.spin_operators();
    let m = angular_momentum(&ops)?;
    let n = three_vector_form(&m);
    let t3 = tensor_from_three_vector(&n);
    let ts = tensor_from_spinor(&m);
    let jz = jz_spectrum(jz_degree, hbar)?;
    let scale = m.iter().flatten().map(|x| rep.norm(x)).fold(0.0, f64::max);
    Ok(QuantumReport {
        degree,
        hbar,
        dim: rep.dim(),
        safe_dim: rep.safe_columns().len(),
        canonical: rep.canonical_residual(),
        mixed: mixed_algebra_residual(&rep, &ops),
        scale,
        closure_plus: lorentz_closure_residual(&rep, &m, HbarSign::Plus),
        closure_minus: lorentz_closure_residual(&rep, &m, HbarSign::Minus),
        dotted: dotted_commutator_residual(&rep, &m),
        three_vector_plus: three_vector_residuals(&rep, &n, HbarSign::Plus),
        three_vector_minus: three_vector_residuals(&rep, &n, HbarSign::Minus),
        tensor_antisymmetry: antisymmetry_residual(&rep, &t3),
        tensor_closure_plus: tensor_closure_residual(&rep, &t3, HbarSign::Plus),
        tensor_closure_minus: tensor_closure_residual(&rep, &t3, HbarSign::Minus),
        spinor_tensor_antisymmetry: antisymmetry_residual(&rep, &ts),
        spinor_tensor_closure_plus: tensor_closure_residual(&rep, &ts, HbarSign::Plus),
        spinor_tensor_closure_minus: tensor_closure_residual(&rep, &ts, HbarSign::Minus),
        orbital_difference: tensor_difference(&rep, &t3, &orbital_tensor(&rep)),
        jz_integrality: integrality_residual(&jz, hbar),
        jz_degree,
        jz_eigenvalues: jz,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn apply(op: &PolyOperator, rep: &CanonicalRep, mono: [u8; 4]) -> Vec<(usize, Complex64)> {
        op.matrix()
            .column(rep.basis().index_of(&mono).unwrap())
            .to_vec()
    }

    fn at(rep: &CanonicalRep, mono: [u8; 4]) -> usize {
        rep.basis().index_of(&mono).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let hbar = 0.7;
        let rep = build_canonical(4, hbar).unwrap();
        let c00 = rep.q(0).commutator(rep.r(0));
        assert_eq!(
            apply(&c00, &rep, [0, 0, 0, 0]),
            vec![(0, Complex64::new(0.0, hbar))]
        );
        let c11 = rep.q(1).commutator(rep.r(1));
        let x2 = [0, 0, 1, 0];
        assert_eq!(
            apply(&c11, &rep, x2),
            vec![(at(&rep, x2), Complex64::new(0.0, -hbar))]
        );
        assert!(rep.canonical_residual() < 1e-15);
        assert!(build_canonical(1, 1.0).is_err());
        assert!(build_canonical(3, 0.0).is_err());
    }

    #[test]
    fn truncation_corner_breaks_canonical_relation() {
        let rep = build_canonical(3, 1.0).unwrap();
        let top: Vec<usize> = (0..rep.dim())
            .filter(|&i| rep.basis().degree_of(i) == 3)
            .collect();
        let c = rep.q(0).commutator(rep.r(0)).sub(&rep.identity().scale(I));
        assert!(c.max_abs_on(&top) > 0.5);
    }

    #[test]
    fn mixed_examples() {
        let rep = build_canonical(4, 1.0).unwrap();
        let ops = rep.spin_operators();
        let c = ops.a[0].commutator(&ops.a[1]);
        assert_eq!(c.max_abs_on(&[at(&rep, [1, 1, 0, 0])]), 0.0);
        let anti = ops.a[0].anticommutator(&ops.k[0]).collapse().unwrap();
        assert_eq!(
            apply(&anti, &rep, [0, 0, 0, 0]),
            vec![(0, Complex64::new(-1.0, 0.0))]
        );
        assert_eq!(mixed_algebra_residual(&rep, &ops), 0.0);
    }

    #[test]
    fn spinor_components_round_trip() {
        let rep = build_canonical(3, 1.0).unwrap();
        let ops = rep.spin_operators();
        for x in [&ops.a, &ops.k] {
            let back = SpinorOperatorMatrix::from_vector(x).to_vector();
            for mu in 0..4 {
                assert_eq!(
                    back[mu]
                        .sub(&x[mu])
                        .max_abs_on(&(0..rep.dim()).collect::<Vec<_>>()),
                    0.0
                );
            }
        }
    }

    #[test]
    fn zero_operators_close_trivially() {
        let rep = build_canonical(3, 1.0).unwrap();
        let z: OperatorSpinor =
            std::array::from_fn(|_| std::array::from_fn(|_| PolyOperator::zero(rep.dim())));
        assert_eq!(lorentz_closure_residual(&rep, &z, HbarSign::Plus), 0.0);
        let n = three_vector_form(&z);
        assert!(n.iter().all(|x| x.matrix().nnz() == 0));
        let t = tensor_from_spinor(&z);
        assert!(t.iter().flatten().all(|x| x.matrix().nnz() == 0));
    }

    #[test]
    fn closure_sign() {
        let rep = build_canonical(5, 1.0).unwrap();
        let m = angular_momentum(&rep.spin_operators()).unwrap();
        let low: Vec<usize> = (0..rep.dim())
            .filter(|&i| rep.basis().degree_of(i) <= 2)
            .collect();
        let (a, b, e, f) = (0, 0, 1, 1);
        let lhs = m[a][b].commutator(&m[e][f]);
        // every term is M_12 ε_21, so the bracket is -4 M_12
        let rhs = m[0][1].scale(re(-4.0));
        assert_eq!(lhs.sub(&rhs.scale(-I)).max_abs_on(&low), 0.0);
        assert!(lhs.sub(&rhs.scale(I)).max_abs_on(&low) > 0.5);
        assert_eq!(lorentz_closure_residual(&rep, &m, HbarSign::Minus), 0.0);
        assert!(lorentz_closure_residual(&rep, &m, HbarSign::Plus) > 0.5);
        assert_eq!(dotted_commutator_residual(&rep, &m), 0.0);
    }

    #[test]
    fn m0_is_symmetric() {
        let rep = build_canonical(3, 1.0).unwrap();
        let m = angular_momentum(&rep.spin_operators()).unwrap();
        assert_eq!(rep.norm(&m[0][1].sub(&m[1][0])), 0.0);
        assert!(rep.norm(&m[0][0]) > 0.5);
    }

    #[test]
    fn three_vector_and_tensors() {
        let rep = build_canonical(4, 1.0).unwrap();
        let m = angular_momentum(&rep.spin_operators()).unwrap();
        let n = three_vector_form(&m);
        let r = three_vector_residuals(&rep, &n, HbarSign::Minus);
        assert_eq!((r.n_n, r.ndag_ndag, r.n_ndag), (0.0, 0.0, 0.0));
        let t3 = tensor_from_three_vector(&n);
        let ts = tensor_from_spinor(&m);
        let orb = orbital_tensor(&rep);
        for t in [&t3, &ts] {
            assert_eq!(antisymmetry_residual(&rep, t), 0.0);
            assert_eq!(tensor_closure_residual(&rep, t, HbarSign::Minus), 0.0);
            assert!(tensor_closure_residual(&rep, t, HbarSign::Plus) > 0.5);
            assert_eq!(tensor_difference(&rep, t, &orb), 0.0);
        }
    }

    #[test]
    fn jz_small_blocks() {
        assert_eq!(jz_spectrum(0, 1.0).unwrap(), vec![0.0]);
        let b1 = jz_block_spectrum(1, 2.0).unwrap();
        assert!((b1[0] + 2.0).abs() < 1e-12 && (b1[1] - 2.0).abs() < 1e-12);
        let all = jz_spectrum(4, 1.0).unwrap();
        assert_eq!(all.len(), 15);
        assert!(all.iter().all(|l| l.abs() <= 4.0 + 1e-9));
        assert!(integrality_residual(&all, 1.0) < 1e-9);
    }

    // (x_1 + i x_2)^a (x_1 - i x_2)^b, expanded by hand, is an eigenvector
    // with eigenvalue ħ(b - a).
    #[test]
    fn jz_eigenvectors_from_binomials() {
        let hbar = 1.3;
        let deg = 5;
        let rep = build(deg, hbar);
        let jz = rep.jz_operator();
        let binom =
            |n: usize, k: usize| (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
        for d in 0..=deg {
            for a in 0..=d {
                let b = d - a;
                let mut v = vec![Complex64::new(0.0, 0.0); rep.dim()];
                for p in 0..=a {
                    for q in 0..=b {
                        // x_1^(a-p+b-q) x_2^(p+q) with coefficient C(a,p) i^p C(b,q) (-i)^q
                        let c = I.powu(p as u32) * (-I).powu(q as u32) * binom(a, p) * binom(b, q);
                        v[at(&rep, [0, (a - p + b - q) as u8, (p + q) as u8, 0])] += c;
                    }
                }
                let mut jv = vec![Complex64::new(0.0, 0.0); rep.dim()];
                for (j, &vj) in v.iter().enumerate() {
                    for &(i, x) in jz.matrix().column(j) {
                        jv[i] += x * vj;
                    }
                }
                let lambda = hbar * (b as f64 - a as f64);
                let err = jv
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| (x - y * lambda).norm())
                    .fold(0.0, f64::max);
                assert!(err < 1e-9, "d={d} a={a} err={err}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]
        #[test]
        fn relations_scale_with_hbar(n in 2usize..5, hbar in 0.1f64..3.0) {
            let rep = build_canonical(n, hbar).unwrap();
            prop_assert!(rep.canonical_residual() <= 1e-12 * hbar);
            let ops = rep.spin_operators();
            prop_assert!(mixed_algebra_residual(&rep, &ops) <= 1e-12 * hbar);
            let m = angular_momentum(&ops).unwrap();
            let scale = m.iter().flatten().map(|x| rep.norm(x)).fold(1.0, f64::max);
            prop_assert!(lorentz_closure_residual(&rep, &m, HbarSign::Minus) <= 1e-10 * scale * hbar);
            prop_assert!(dotted_commutator_residual(&rep, &m) <= 1e-10 * scale * hbar);
        }

        #[test]
        fn jz_integral(d in 0usize..7, hbar in 0.1f64..3.0) {
            let s = jz_block_spectrum(d, hbar).unwrap();
            prop_assert_eq!(s.len(), d + 1);
            prop_assert!(integrality_residual(&s, hbar) < 1e-9);
            for (k, l) in s.iter().enumerate() {
                prop_assert!((l / hbar - (2.0 * k as f64 - d as f64)).abs() < 1e-9);
            }
        }
    }
}
