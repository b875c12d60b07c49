//! Random inputs that honor each type's invariants, for sweeps and fixtures.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::clifford::{gram_matrix, Generator, TensorVector};
use crate::error::Result;
use crate::lorentz::{generator_from_complex, LorentzFactor, Spinor};
use crate::matrix::OctHermitian;
use crate::minkowski::C2;
use crate::octonion::{Octonion, SubspaceIndex};
use crate::string_modes::{Mode, ModeSpectrum, PhysicalConstants};

/// Coefficients uniform in `[-1, 1)`.
pub fn octonion<R: Rng + ?Sized>(rng: &mut R) -> Octonion {
    Octonion::new(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
}

pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random `n × n` octonionic Hermitian matrix with diagonal in `[-2, 2)`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> OctHermitian {
    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let upper: Vec<Octonion> = (0..n * n).map(|_| octonion(rng)).collect();
    OctHermitian::from_upper(n, |i, j| {
        if i == j {
            Octonion::real(diag[i])
        } else {
            upper[i * n + j]
        }
    })
}

/// Hermitian matrices with vanishing pivots: a random subset of diagonal
/// entries (always including the first) set to zero, or the Gram matrix of
/// isotropic vectors whose diagonal vanishes identically.
pub fn degenerate_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> OctHermitian {
    if n > 1 && rng.gen_bool(0.5) {
        let vs: Vec<TensorVector> = (0..n)
            .map(|_| {
                let z: Vec<Octonion> = (0..n).map(|_| octonion(rng)).collect();
                let mut v = TensorVector::zero(n);
                for k in 0..n {
                    // F weights are a permutation of the E weights, so v is isotropic
                    v.add_term(Generator::e(k + 1), z[k])
                        .expect("index in range");
                    v.add_term(Generator::f(k + 1), z[(k + 1) % n])
                        .expect("index in range");
                }
                v
            })
            .collect();
        return gram_matrix(&vs).expect("equal ranks");
    }
    let h = hermitian(rng, n);
    let zero: Vec<bool> = (0..n).map(|i| i == 0 || rng.gen_bool(0.5)).collect();
    OctHermitian::from_upper(n, |i, j| {
        if i == j && zero[i] {
            Octonion::ZERO
        } else {
            h.get(i, j)
        }
    })
}

pub fn spinor<R: Rng + ?Sized>(rng: &mut R) -> Spinor {
    [octonion(rng), octonion(rng)]
}

/// `exp(t G)` for a random traceless generator in `span(1, e_k)`, with
/// entries and `t` bounded so the factor stays well conditioned.
pub fn lorentz_factor<R: Rng + ?Sized>(rng: &mut R, k: SubspaceIndex) -> Result<LorentzFactor> {
    let g = generator_from_complex(complex(rng), complex(rng), complex(rng), k);
    LorentzFactor::exp(&g, rng.gen_range(-0.5..0.5))
}

fn hermitian_c2<R: Rng + ?Sized>(rng: &mut R) -> C2 {
    let z = complex(rng);
    C2::new(
        Complex64::new(rng.gen_range(-1.0..1.0), 0.0),
        z,
        z.conj(),
        Complex64::new(rng.gen_range(-1.0..1.0), 0.0),
    )
}

fn general_c2<R: Rng + ?Sized>(rng: &mut R) -> C2 {
    C2::new(complex(rng), complex(rng), complex(rng), complex(rng))
}

/// Random open-string solution with modes `±1..=max_mode`, paired so that
/// `A_{-n,n} = A_{n,-n}†`.
pub fn spectrum<R: Rng + ?Sized>(rng: &mut R, max_mode: i32) -> Result<ModeSpectrum> {
    let k = hermitian_c2(rng);
    let c0 = hermitian_c2(rng);
    let mut modes = BTreeMap::new();
    for n in 1..=max_mode {
        let anm = general_c2(rng);
        modes.insert(
            n,
            Mode {
                a: hermitian_c2(rng),
                anm,
            },
        );
        modes.insert(
            -n,
            Mode {
                a: hermitian_c2(rng),
                anm: anm.adjoint(),
            },
        );
    }
    let constants = PhysicalConstants::new(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0), 1.0)?;
    ModeSpectrum::new(k, c0, modes, constants)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolve::{resolve_hermitian, DEFAULT_TOL};
    use crate::string_modes::{enforce_boundary, RawSpectrum};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn degenerate_matrices_have_zero_pivots_and_resolve() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=6 {
            for _ in 0..10 {
                let h = degenerate_hermitian(&mut rng, n);
                assert!(h.get(0, 0).re().abs() <= 1e-14);
                assert!(h.hermiticity_residual() == 0.0);
                let r = resolve_hermitian(&h, DEFAULT_TOL).unwrap();
                assert!(r.reconstruction_residual(&h) <= 1e-10);
            }
        }
    }

    #[test]
    fn spectra_pass_boundary_enforcement() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let ms = spectrum(&mut rng, 3).unwrap();
        let raw = RawSpectrum {
            k: *ms.k(),
            c0: *ms.c0(),
            left: ms.modes().clone(),
            right: ms.modes().clone(),
            constants: ms.constants(),
        };
        assert_eq!(enforce_boundary(&raw).unwrap(), ms);
    }

    #[test]
    fn factors_have_unit_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in SubspaceIndex::imaginary() {
            let f = lorentz_factor(&mut rng, k).unwrap();
            assert!((f.det() - 1.0).abs() < 1e-10);
            assert_eq!(f.subspace(), k);
        }
    }

    #[test]
    fn same_seed_same_draws() {
        let a = hermitian(&mut ChaCha8Rng::seed_from_u64(1), 4);
        let b = hermitian(&mut ChaCha8Rng::seed_from_u64(1), 4);
        assert_eq!(a, b);
    }
}
