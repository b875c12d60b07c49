use num_complex::Complex64;

use super::poly::PolyOperator;
use crate::error::{Error, Result};

/// Quaternion unit tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuatUnit {
    One,
    I,
    J,
    K,
}

impl QuatUnit {
    pub const ALL: [QuatUnit; 4] = [QuatUnit::One, QuatUnit::I, QuatUnit::J, QuatUnit::K];

    fn slot(self) -> usize {
        self as usize
    }

    /// `self · other = sign · unit`, with `ij = k`, `jk = i`, `ki = j`.
    pub fn mul(self, other: QuatUnit) -> (f64, QuatUnit) {
        use QuatUnit::*;
        match (self, other) {
            (One, u) | (u, One) => (1.0, u),
            (I, I) | (J, J) | (K, K) => (-1.0, One),
            (I, J) => (1.0, K),
            (J, I) => (-1.0, K),
            (J, K) => (1.0, I),
            (K, J) => (-1.0, I),
            (K, I) => (1.0, J),
            (I, K) => (-1.0, J),
        }
    }
}

/// A sum `Σ_u u ⊗ X_u` over quaternion tags, with complex scalars on the
/// operator parts commuting with the tags.
#[derive(Clone, Debug, PartialEq)]
pub struct QuatOperator {
    parts: [PolyOperator; 4],
}

impl QuatOperator {
    pub fn zero(dim: usize) -> Self {
        QuatOperator {
            parts: std::array::from_fn(|_| PolyOperator::zero(dim)),
        }
    }

    pub fn tagged(unit: QuatUnit, op: PolyOperator) -> Self {
        let mut q = Self::zero(op.dim());
        q.parts[unit.slot()] = op;
        q
    }

    pub fn part(&self, unit: QuatUnit) -> &PolyOperator {
        &self.parts[unit.slot()]
    }

    pub fn dim(&self) -> usize {
        self.parts[0].dim()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        QuatOperator {
            parts: std::array::from_fn(|u| self.parts[u].scale(c)),
        }
    }

    pub fn add(&self, other: &QuatOperator) -> Self {
        QuatOperator {
            parts: std::array::from_fn(|u| self.parts[u].add(&other.parts[u])),
        }
    }

    pub fn sub(&self, other: &QuatOperator) -> Self {
        QuatOperator {
            parts: std::array::from_fn(|u| self.parts[u].sub(&other.parts[u])),
        }
    }

    pub fn mul(&self, other: &QuatOperator) -> Self {
        let mut out = Self::zero(self.dim());
        for a in QuatUnit::ALL {
            let x = &self.parts[a.slot()];
            if x.matrix().nnz() == 0 {
                continue;
            }
            for b in QuatUnit::ALL {
                let y = &other.parts[b.slot()];
                if y.matrix().nnz() == 0 {
                    continue;
                }
                let (sign, c) = a.mul(b);
                let term = x.mul(y).scale(Complex64::new(sign, 0.0));
                out.parts[c.slot()] = out.parts[c.slot()].add(&term);
            }
        }
        out
    }

    pub fn commutator(&self, other: &QuatOperator) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &QuatOperator) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    pub fn max_abs_on(&self, cols: &[usize]) -> f64 {
        self.parts
            .iter()
            .map(|p| p.max_abs_on(cols))
            .fold(0.0, f64::max)
    }

    /// Maps `1 ⊗ X + i ⊗ Y` to `X + i Y`, identifying the quaternion `i`
    /// with the complex unit. Fails if a `j` or `k` part survives.
    pub fn collapse(&self) -> Result<PolyOperator> {
        for u in [QuatUnit::J, QuatUnit::K] {
            if self.part(u).matrix().nnz() != 0 {
                return Err(Error::InvalidParameter(format!(
                    "{u:?} component does not collapse"
                )));
            }
        }
        Ok(self.parts[0].add(&self.parts[1].scale(Complex64::new(0.0, 1.0))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_rep::poly::SparseMatrix;

    #[test]
    fn unit_table_is_associative() {
        for a in QuatUnit::ALL {
            for b in QuatUnit::ALL {
                for c in QuatUnit::ALL {
                    let (s1, ab) = a.mul(b);
                    let (s2, l) = ab.mul(c);
                    let (s3, bc) = b.mul(c);
                    let (s4, r) = a.mul(bc);
                    assert_eq!((s1 * s2, l), (s3 * s4, r));
                }
            }
        }
        assert_eq!(QuatUnit::J.mul(QuatUnit::K), (1.0, QuatUnit::I));
        assert_eq!(QuatUnit::K.mul(QuatUnit::J), (-1.0, QuatUnit::I));
    }

    #[test]
    fn tagged_products() {
        let x = PolyOperator::identity(3).scale(Complex64::new(2.0, 0.0));
        let j = QuatOperator::tagged(QuatUnit::J, x.clone());
        let k = QuatOperator::tagged(QuatUnit::K, PolyOperator::identity(3));
        let jk = j.mul(&k);
        assert_eq!(jk.part(QuatUnit::I), &x);
        assert_eq!(
            j.mul(&j).part(QuatUnit::One),
            &x.mul(&x).scale(Complex64::new(-1.0, 0.0))
        );
        assert!(j.collapse().is_err());
        let c = jk.collapse().unwrap();
        assert_eq!(c.matrix().get(1, 1), Complex64::new(0.0, 2.0));
    }

    #[test]
    fn collapse_of_zero() {
        let z = QuatOperator::zero(5).collapse().unwrap();
        assert_eq!(z.matrix(), &SparseMatrix::zeros(5));
    }
}
