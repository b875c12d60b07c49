//! Open-string Fourier modes on a flat world sheet.
//!
//! A solution is fixed by the momentum matrix `K_{AḂ}`, the mode matrices
//! `A_n` and `A_{n,-n}` for `n ≠ 0`, and an offset `C0`, all complex 2×2.
//! World-sheet indices are ordered `(τ, σ)` with `η = diag(1, -1)`.

mod fields;
pub mod redshift;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::minkowski::{matrix_to_vector, Hermitian2, SigmaSet, C2};
use crate::octonion::SubspaceIndex;

pub use fields::{
    charge_density, charge_density_coefficients, conservation_residual, coordinates,
    coordinates_at, current_density, current_density_at, eom_residual, integrated_charge, FdGrid,
};

/// Tolerance for Hermiticity, mode pairing and left/right agreement.
pub const SPECTRUM_TOL: f64 = 1e-12;

/// Null wave vectors `k^{Lα}` and `k^{Rα}` with the index raised.
pub const K_LEFT: [f64; 2] = [1.0, -1.0];
pub const K_RIGHT: [f64; 2] = [1.0, 1.0];

pub fn max_abs(m: &C2) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn hermiticity_deviation(m: &C2) -> f64 {
    max_abs(&(m - m.adjoint()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub ell: f64,
    pub m: f64,
    pub hbar: f64,
}

impl PhysicalConstants {
    pub fn new(ell: f64, m: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("ell", ell), ("m", m), ("hbar", hbar)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(PhysicalConstants { ell, m, hbar })
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        PhysicalConstants {
            ell: 1.0,
            m: 1.0,
            hbar: 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorldsheetPoint {
    pub tau: f64,
    pub sigma: f64,
}

impl WorldsheetPoint {
    pub fn new(tau: f64, sigma: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&sigma) {
            return Err(Error::InvalidParameter(format!(
                "sigma = {sigma} outside [0, pi]"
            )));
        }
        Ok(WorldsheetPoint { tau, sigma })
    }
}

/// Coefficients of mode `n`: the Hermitian `A_n` and the general `A_{n,-n}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mode {
    pub a: C2,
    pub anm: C2,
}

/// Mode data with left- and right-moving coefficients kept apart.
#[derive(Clone, Debug, PartialEq)]
pub struct RawSpectrum {
    pub k: C2,
    pub c0: C2,
    pub left: BTreeMap<i32, Mode>,
    pub right: BTreeMap<i32, Mode>,
    pub constants: PhysicalConstants,
}

/// A validated open-string solution with `A^L = A^R`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSpectrum {
    k: C2,
    c0: C2,
    modes: BTreeMap<i32, Mode>,
    constants: PhysicalConstants,
}

impl ModeSpectrum {
    /// Checks Hermiticity of `K`, `C0` and every `A_n`, and the pairing
    /// `A_{-n,n} = A_{n,-n}†`.
    pub fn new(
        k: C2,
        c0: C2,
        modes: BTreeMap<i32, Mode>,
        constants: PhysicalConstants,
    ) -> Result<Self> {
        PhysicalConstants::new(constants.ell, constants.m, constants.hbar)?;
        for (what, m) in [("K", &k), ("C0", &c0)] {
            let dev = hermiticity_deviation(m);
            if dev > SPECTRUM_TOL {
                return Err(Error::InvalidParameter(format!(
                    "{what} is not Hermitian (deviation {dev:e})"
                )));
            }
        }
        for (&n, mode) in &modes {
            if n == 0 {
                return Err(Error::InvalidIndex("mode number 0".into()));
            }
            let dev = hermiticity_deviation(&mode.a);
            if dev > SPECTRUM_TOL {
                return Err(Error::InvalidParameter(format!(
                    "A_{n} is not Hermitian (deviation {dev:e})"
                )));
            }
            let partner = modes.get(&-n).ok_or(Error::UnpairedMode(n))?;
            if max_abs(&(partner.anm - mode.anm.adjoint())) > SPECTRUM_TOL {
                return Err(Error::UnpairedMode(n));
            }
        }
        Ok(ModeSpectrum {
            k,
            c0,
            modes,
            constants,
        })
    }

    /// A spectrum with no oscillator modes.
    pub fn free(k: C2, c0: C2, constants: PhysicalConstants) -> Result<Self> {
        Self::new(k, c0, BTreeMap::new(), constants)
    }

    pub fn k(&self) -> &C2 {
        &self.k
    }

    pub fn c0(&self) -> &C2 {
        &self.c0
    }

    pub fn modes(&self) -> &BTreeMap<i32, Mode> {
        &self.modes
    }

    pub fn constants(&self) -> PhysicalConstants {
        self.constants
    }

    pub fn max_mode(&self) -> i32 {
        self.modes.keys().map(|n| n.abs()).max().unwrap_or(0)
    }
}

/// Merges left- and right-moving coefficients, which the open-string
/// boundary conditions force to agree.
pub fn enforce_boundary(raw: &RawSpectrum) -> Result<ModeSpectrum> {
    let keys: std::collections::BTreeSet<i32> =
        raw.left.keys().chain(raw.right.keys()).copied().collect();
    let zero = Mode {
        a: C2::zeros(),
        anm: C2::zeros(),
    };
    for n in keys {
        let l = raw.left.get(&n).unwrap_or(&zero);
        let r = raw.right.get(&n).unwrap_or(&zero);
        let deviation = max_abs(&(l.a - r.a)).max(max_abs(&(l.anm - r.anm)));
        if deviation > SPECTRUM_TOL {
            return Err(Error::BoundaryViolation { mode: n, deviation });
        }
    }
    ModeSpectrum::new(raw.k, raw.c0, raw.left.clone(), raw.constants)
}

/// The conserved momentum matrix `P_{AḂ} = K_{AḂ}`.
pub fn momentum_matrix(ms: &ModeSpectrum) -> C2 {
    ms.k
}

/// `p^μ = ½ σ^μ K` in 4D.
pub fn momentum_vector(ms: &ModeSpectrum) -> [f64; 4] {
    let h = Hermitian2::from_complex(&ms.k, unit_subspace(), f64::INFINITY)
        .expect("tolerance is infinite");
    let p = matrix_to_vector(&h, &SigmaSet::four());
    [p[0], p[1], p[2], p[3]]
}

/// `p_μ p^μ = det K`.
pub fn mass_shell(ms: &ModeSpectrum) -> f64 {
    ms.k.determinant().re
}

/// Complex data are stored in `span(1, e1)`.
pub(crate) fn unit_subspace() -> SubspaceIndex {
    SubspaceIndex::new(1).expect("valid")
}

/// JSON form of a complex 2×2 matrix: `[[[re, im], [re, im]], [[re, im], [re, im]]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexMatrixRepr(pub [[[f64; 2]; 2]; 2]);

impl From<&C2> for ComplexMatrixRepr {
    fn from(m: &C2) -> Self {
        ComplexMatrixRepr(std::array::from_fn(|i| {
            std::array::from_fn(|j| [m[(i, j)].re, m[(i, j)].im])
        }))
    }
}

impl From<ComplexMatrixRepr> for C2 {
    fn from(r: ComplexMatrixRepr) -> Self {
        C2::from_fn(|i, j| Complex64::new(r.0[i][j][0], r.0[i][j][1]))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModeRecord {
    pub n: i32,
    #[serde(rename = "A")]
    pub a: Hermitian2,
    #[serde(rename = "Anm")]
    pub anm: ComplexMatrixRepr,
}

/// On-disk spectrum. Hermitian entries use the `{"a", "b", "c"}` form with
/// `c` in `span(1, e1)`. When `right_modes` is present the file describes a
/// two-sided spectrum that must pass [`enforce_boundary`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumFile {
    #[serde(rename = "K")]
    pub k: Hermitian2,
    #[serde(rename = "C0")]
    pub c0: Hermitian2,
    pub modes: Vec<ModeRecord>,
    pub ell: f64,
    pub m: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right_modes: Option<Vec<ModeRecord>>,
}

fn modes_from_records(records: &[ModeRecord]) -> Result<BTreeMap<i32, Mode>> {
    let mut out = BTreeMap::new();
    for r in records {
        let mode = Mode {
            a: r.a.to_complex(unit_subspace())?,
            anm: r.anm.into(),
        };
        if out.insert(r.n, mode).is_some() {
            return Err(Error::InvalidIndex(format!("mode {} listed twice", r.n)));
        }
    }
    Ok(out)
}

fn records_from_modes(modes: &BTreeMap<i32, Mode>) -> Vec<ModeRecord> {
    modes
        .iter()
        .map(|(&n, m)| ModeRecord {
            n,
            a: Hermitian2::from_complex(&m.a, unit_subspace(), f64::INFINITY)
                .expect("tolerance is infinite"),
            anm: (&m.anm).into(),
        })
        .collect()
}

impl SpectrumFile {
    pub fn to_raw(&self) -> Result<RawSpectrum> {
        let left = modes_from_records(&self.modes)?;
        let right = match &self.right_modes {
            Some(r) => modes_from_records(r)?,
            None => left.clone(),
        };
        Ok(RawSpectrum {
            k: self.k.to_complex(unit_subspace())?,
            c0: self.c0.to_complex(unit_subspace())?,
            left,
            right,
            constants: PhysicalConstants::new(self.ell, self.m, self.hbar.unwrap_or(1.0))?,
        })
    }

    /// Parses and validates, enforcing the boundary condition.
    pub fn to_spectrum(&self) -> Result<ModeSpectrum> {
        enforce_boundary(&self.to_raw()?)
    }

    pub fn from_spectrum(ms: &ModeSpectrum) -> Self {
        let h = |m: &C2| {
            Hermitian2::from_complex(m, unit_subspace(), f64::INFINITY)
                .expect("tolerance is infinite")
        };
        SpectrumFile {
            k: h(&ms.k),
            c0: h(&ms.c0),
            modes: records_from_modes(&ms.modes),
            ell: ms.constants.ell,
            m: ms.constants.m,
            hbar: Some(ms.constants.hbar),
            right_modes: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn herm(a: f64, b: f64, z: Complex64) -> C2 {
        C2::new(c(a, 0.0), z, z.conj(), c(b, 0.0))
    }

    fn pair(n: i32, a: C2, anm: C2) -> BTreeMap<i32, Mode> {
        BTreeMap::from([
            (n, Mode { a, anm }),
            (
                -n,
                Mode {
                    a,
                    anm: anm.adjoint(),
                },
            ),
        ])
    }

    #[test]
    fn pairing_is_enforced() {
        let anm = C2::new(c(0.1, 0.2), c(0.3, 0.0), c(0.0, -0.4), c(0.5, 0.5));
        let a = herm(0.2, -0.1, c(0.3, 0.1));
        let k = C2::identity();
        let ok = ModeSpectrum::new(k, k, pair(1, a, anm), PhysicalConstants::default());
        assert!(ok.is_ok());
        let lonely = BTreeMap::from([(2, Mode { a, anm })]);
        assert_eq!(
            ModeSpectrum::new(k, k, lonely, PhysicalConstants::default()),
            Err(Error::UnpairedMode(2))
        );
        let mut wrong = pair(1, a, anm);
        wrong.get_mut(&-1).unwrap().anm = anm;
        assert_eq!(
            ModeSpectrum::new(k, k, wrong, PhysicalConstants::default()),
            Err(Error::UnpairedMode(-1))
        );
    }

    #[test]
    fn boundary_enforcement() {
        let anm = C2::new(c(0.1, 0.2), c(0.3, 0.0), c(0.0, -0.4), c(0.5, 0.5));
        let a = herm(0.2, -0.1, c(0.3, 0.1));
        let left = pair(1, a, anm);
        let raw = RawSpectrum {
            k: C2::identity(),
            c0: C2::zeros(),
            left: left.clone(),
            right: left.clone(),
            constants: PhysicalConstants::default(),
        };
        assert_eq!(enforce_boundary(&raw).unwrap().modes(), &left);

        let negated = left
            .iter()
            .map(|(&n, m)| {
                (
                    n,
                    Mode {
                        a: -m.a,
                        anm: -m.anm,
                    },
                )
            })
            .collect();
        let bad = RawSpectrum {
            right: negated,
            ..raw.clone()
        };
        assert!(matches!(
            enforce_boundary(&bad),
            Err(Error::BoundaryViolation { .. })
        ));

        let nudged = left
            .iter()
            .map(|(&n, m)| {
                (
                    n,
                    Mode {
                        a: m.a * c(1.0 + 1e-15, 0.0),
                        anm: m.anm * c(1.0 + 1e-15, 0.0),
                    },
                )
            })
            .collect();
        assert!(enforce_boundary(&RawSpectrum {
            right: nudged,
            ..raw
        })
        .is_ok());
    }

    #[test]
    fn momentum_examples() {
        let one = PhysicalConstants::default();
        let ms = ModeSpectrum::free(C2::identity(), C2::zeros(), one).unwrap();
        assert_eq!(momentum_vector(&ms), [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(mass_shell(&ms), 1.0);
        let ms = ModeSpectrum::free(C2::zeros(), C2::zeros(), one).unwrap();
        assert_eq!(momentum_vector(&ms), [0.0; 4]);
        let k = herm(1.5, 0.5, c(0.3, -0.2));
        let ms = ModeSpectrum::free(k, C2::zeros(), one).unwrap();
        let p = momentum_vector(&ms);
        let back: C2 = SigmaSet::four()
            .complex()
            .iter()
            .zip(p)
            .map(|(s, x)| s * c(x, 0.0))
            .sum();
        assert!(max_abs(&(back - k)) < 1e-14);
        assert!((mass_shell(&ms) - crate::minkowski::minkowski_norm(&p)).abs() < 1e-14);
    }

    #[test]
    fn constants_must_be_positive() {
        assert!(PhysicalConstants::new(1.0, 0.0, 1.0).is_err());
        assert!(PhysicalConstants::new(-1.0, 1.0, 1.0).is_err());
        assert!(WorldsheetPoint::new(0.0, 4.0).is_err());
    }

    #[test]
    fn file_round_trip() {
        let anm = C2::new(c(0.1, 0.2), c(0.3, 0.0), c(0.0, -0.4), c(0.5, 0.5));
        let ms = ModeSpectrum::new(
            herm(2.0, 1.0, c(0.1, 0.2)),
            herm(0.0, 0.0, c(0.0, 0.0)),
            pair(2, herm(0.2, -0.1, c(0.3, 0.1)), anm),
            PhysicalConstants::new(1.5, 2.0, 1.0).unwrap(),
        )
        .unwrap();
        let json = serde_json::to_string(&SpectrumFile::from_spectrum(&ms)).unwrap();
        assert!(json.contains(r#""Anm":[[[0.1,0.2],[0.3,0.0]]"#));
        let back: SpectrumFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_spectrum().unwrap(), ms);
    }
}
