use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Monomials `x0^a x1^b x2^c x3^d` of total degree at most `degree`,
/// ordered by degree and then lexicographically.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyBasis {
    degree: usize,
    monomials: Vec<[u8; 4]>,
    index: HashMap<[u8; 4], usize>,
}

impl PolyBasis {
    pub fn new(degree: usize) -> Self {
        let mut monomials = Vec::new();
        for d in 0..=degree {
            let mut layer = Vec::new();
            for a in 0..=d {
                for b in 0..=d - a {
                    for c in 0..=d - a - b {
                        layer.push([a as u8, b as u8, c as u8, (d - a - b - c) as u8]);
                    }
                }
            }
            layer.sort_unstable();
            monomials.extend(layer);
        }
        let index = monomials.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        PolyBasis {
            degree,
            monomials,
            index,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.monomials.len()
    }

    pub fn monomial(&self, i: usize) -> [u8; 4] {
        self.monomials[i]
    }

    pub fn index_of(&self, m: &[u8; 4]) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn degree_of(&self, i: usize) -> usize {
        self.monomials[i].iter().map(|&e| e as usize).sum()
    }

    /// Indices of monomials of degree at most `d`.
    pub fn up_to_degree(&self, d: usize) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.degree_of(i) <= d)
            .collect()
    }
}

/// Column-compressed complex matrix; column `j` is the image of basis
/// vector `j`, stored as `(row, value)` pairs sorted by row.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    dim: usize,
    cols: Vec<Vec<(usize, Complex64)>>,
}

impl SparseMatrix {
    pub fn zeros(dim: usize) -> Self {
        SparseMatrix {
            dim,
            cols: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        SparseMatrix {
            dim,
            cols: (0..dim)
                .map(|j| vec![(j, Complex64::new(1.0, 0.0))])
                .collect(),
        }
    }

    /// Builds column `j` from `f(j)`; duplicate rows are summed.
    pub fn from_columns(dim: usize, mut f: impl FnMut(usize) -> Vec<(usize, Complex64)>) -> Self {
        let cols = (0..dim)
            .map(|j| {
                let mut acc = vec![Complex64::new(0.0, 0.0); dim];
                let mut rows: Vec<usize> = Vec::new();
                for (i, v) in f(j) {
                    rows.push(i);
                    acc[i] += v;
                }
                compress(&mut acc, rows)
            })
            .collect();
        SparseMatrix { dim, cols }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, j: usize) -> &[(usize, Complex64)] {
        &self.cols[j]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.cols[j]
            .binary_search_by_key(&i, |e| e.0)
            .map(|k| self.cols[j][k].1)
            .unwrap_or_default()
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        if c == Complex64::new(0.0, 0.0) {
            return Self::zeros(self.dim);
        }
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|&(i, v)| (i, v * c)).collect())
            .collect();
        SparseMatrix {
            dim: self.dim,
            cols,
        }
    }

    pub fn add(&self, other: &SparseMatrix) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Self::from_columns(self.dim, |j| {
            self.cols[j].iter().chain(&other.cols[j]).copied().collect()
        })
    }

    pub fn mul(&self, other: &SparseMatrix) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let mut acc = vec![Complex64::new(0.0, 0.0); self.dim];
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut rows = Vec::new();
                for &(k, c) in col {
                    for &(i, v) in &self.cols[k] {
                        rows.push(i);
                        acc[i] += v * c;
                    }
                }
                compress(&mut acc, rows)
            })
            .collect();
        SparseMatrix {
            dim: self.dim,
            cols,
        }
    }

    /// Largest entry modulus within the listed columns.
    pub fn max_abs_on(&self, cols: &[usize]) -> f64 {
        cols.iter()
            .flat_map(|&j| self.cols[j].iter())
            .fold(0.0, |m, (_, v)| m.max(v.norm()))
    }

    pub fn to_dense(&self, rows: &[usize], cols: &[usize]) -> DMatrix<Complex64> {
        DMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }
}

/// Drains the touched rows of a dense accumulator into a sorted sparse
/// column, dropping exact zeros and resetting the accumulator.
fn compress(acc: &mut [Complex64], mut rows: Vec<usize>) -> Vec<(usize, Complex64)> {
    rows.sort_unstable();
    rows.dedup();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(rows.len());
    for i in rows {
        if acc[i] != zero {
            out.push((i, acc[i]));
        }
        acc[i] = zero;
    }
    out
}

/// A linear operator on the truncated polynomial space, together with the
/// truncation of its formal adjoint.
///
/// Both matrices are built by composing the generators `Q_μ`, `R_ν`, which
/// are formally self-adjoint, so `(XY)† = Y† X†` and `(cX)† = c* X†` are
/// tracked exactly. Results are reliable on inputs whose degree leaves room
/// for every intermediate raise; see [`PolyOperator::degree_shift`].
#[derive(Clone, Debug, PartialEq)]
pub struct PolyOperator {
    op: SparseMatrix,
    adj: SparseMatrix,
    shift: i32,
}

impl PolyOperator {
    pub fn new(op: SparseMatrix, adj: SparseMatrix, shift: i32) -> Self {
        assert_eq!(op.dim(), adj.dim(), "dimension mismatch");
        PolyOperator { op, adj, shift }
    }

    pub fn self_adjoint(op: SparseMatrix, shift: i32) -> Self {
        PolyOperator {
            adj: op.clone(),
            op,
            shift,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::self_adjoint(SparseMatrix::zeros(dim), 0)
    }

    pub fn identity(dim: usize) -> Self {
        Self::self_adjoint(SparseMatrix::identity(dim), 0)
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Upper bound on how much the operator raises polynomial degree.
    pub fn degree_shift(&self) -> i32 {
        self.shift
    }

    pub fn dagger(&self) -> Self {
        PolyOperator {
            op: self.adj.clone(),
            adj: self.op.clone(),
            shift: self.shift,
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        PolyOperator {
            op: self.op.scale(c),
            adj: self.adj.scale(c.conj()),
            shift: self.shift,
        }
    }

    pub fn add(&self, other: &PolyOperator) -> Self {
        PolyOperator {
            op: self.op.add(&other.op),
            adj: self.adj.add(&other.adj),
            shift: self.shift.max(other.shift),
        }
    }

    pub fn sub(&self, other: &PolyOperator) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `self · other`, with `other` applied first.
    pub fn mul(&self, other: &PolyOperator) -> Self {
        PolyOperator {
            op: self.op.mul(&other.op),
            adj: other.adj.mul(&self.adj),
            shift: self.shift + other.shift,
        }
    }

    pub fn commutator(&self, other: &PolyOperator) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &PolyOperator) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    pub fn max_abs_on(&self, cols: &[usize]) -> f64 {
        self.op.max_abs_on(cols)
    }
}
