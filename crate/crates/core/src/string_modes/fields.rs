use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::{max_abs, ModeSpectrum, WorldsheetPoint, K_LEFT, K_RIGHT};
use crate::minkowski::{raise_both, raise_dotted, C2};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `e^{-i x}`.
fn phase(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, -x)
}

fn sym(m: &C2) -> C2 {
    (m + m.transpose()) * re(0.5)
}

/// `J^α_{AB}` for `α = (τ, σ)` at any `(τ, σ)`, including points outside the
/// string used by finite differences.
pub fn current_density_at(ms: &ModeSpectrum, tau: f64, sigma: f64) -> [C2; 2] {
    let c = ms.constants();
    let kr = raise_dotted(ms.k());
    let mut y = [C2::zeros(), C2::zeros()];
    for (&n, mode) in ms.modes() {
        let nf = n as f64;
        let left = mode.a + mode.anm * phase(nf * (tau + sigma));
        let right = mode.a + mode.anm * phase(nf * (tau - sigma));
        for alpha in 0..2 {
            y[alpha] += (left * re(K_LEFT[alpha]) + right * re(K_RIGHT[alpha])) / re(nf);
        }
    }
    let pre = I * (2.0 * c.ell / c.m);
    y.map(|ya| {
        let m = kr * ya.transpose() * pre;
        m + m.transpose()
    })
}

pub fn current_density(ms: &ModeSpectrum, pt: WorldsheetPoint) -> [C2; 2] {
    current_density_at(ms, pt.tau, pt.sigma)
}

/// Symmetrized charge-density coefficients `M^n_(AB)`, including `n = 0`,
/// such that `J^τ = (1/π) Σ_n M^n e^{-inτ} cos(nσ)`.
pub fn charge_density_coefficients(ms: &ModeSpectrum) -> BTreeMap<i32, C2> {
    let c = ms.constants();
    let kr = raise_dotted(ms.k());
    let scale = 8.0 * PI * c.ell / c.m;
    let a: C2 = ms
        .modes()
        .iter()
        .map(|(&n, m)| m.a / re(n as f64))
        .sum::<C2>()
        * re(scale);
    let mut out = BTreeMap::from([(0, sym(&(kr * a.transpose() * I)))]);
    for (&n, mode) in ms.modes() {
        let m = kr * mode.anm.transpose() * (I * scale / n as f64);
        out.insert(n, sym(&m));
    }
    out
}

/// `J^τ` rebuilt from the charge-density coefficients.
pub fn charge_density(coeffs: &BTreeMap<i32, C2>, tau: f64, sigma: f64) -> C2 {
    coeffs
        .iter()
        .map(|(&n, m)| m * (phase(n as f64 * tau) * (n as f64 * sigma).cos() / PI))
        .sum()
}

/// `∫_0^π J^τ dσ` by the trapezoidal rule on `samples` intervals, which is
/// exact for the cosine profiles of modes below `samples`.
pub fn integrated_charge(ms: &ModeSpectrum, tau: f64, samples: usize) -> C2 {
    let n = samples.max(1);
    let h = PI / n as f64;
    (0..=n)
        .map(|j| {
            let w = if j == 0 || j == n { 0.5 } else { 1.0 };
            current_density_at(ms, tau, j as f64 * h)[0] * re(w * h)
        })
        .sum()
}

/// `X^{AḂ}` at any `(τ, σ)`; even in `σ`.
pub fn coordinates_at(ms: &ModeSpectrum, tau: f64, sigma: f64) -> C2 {
    let c = ms.constants();
    let kup = raise_both(ms.k());
    let mut y = ms.k() * re(tau * tau);
    for (&n, mode) in ms.modes() {
        let n2 = (n as f64).powi(2);
        y +=
            (mode.a - mode.anm * (phase(n as f64 * tau) * (n as f64 * sigma).cos())) * re(8.0 / n2);
    }
    ms.c0() + kup * y.transpose() * kup * re(c.ell / c.m.powi(3))
}

pub fn coordinates(ms: &ModeSpectrum, pt: WorldsheetPoint) -> C2 {
    coordinates_at(ms, pt.tau, pt.sigma)
}

/// Centered finite-difference steps and a fixed lattice of sample points.
///
/// The τ step is twice the σ step. With equal steps the discrete divergence
/// of any function of `τ ± σ` cancels identically, which would hide the
/// truncation error the convergence checks look for.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdGrid {
    pub h_tau: f64,
    pub h_sigma: f64,
    /// Points per direction in the sample lattice.
    pub samples: usize,
}

impl FdGrid {
    /// Steps of a grid with `n` points over one τ-period `[0, 2π]` and over
    /// `[0, π]`.
    pub fn for_resolution(n: usize) -> Self {
        let cells = n.max(2) as f64 - 1.0;
        FdGrid {
            h_tau: 2.0 * PI / cells,
            h_sigma: PI / cells,
            samples: 64,
        }
    }

    pub fn with_step(h: f64) -> Self {
        FdGrid {
            h_tau: 2.0 * h,
            h_sigma: h,
            samples: 64,
        }
    }

    pub fn halved(&self) -> Self {
        FdGrid {
            h_tau: self.h_tau / 2.0,
            h_sigma: self.h_sigma / 2.0,
            samples: self.samples,
        }
    }

    /// Lattice points: τ over one period, σ strictly inside `(0, π)`.
    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let s = self.samples;
        (0..s).flat_map(move |i| {
            (0..s).map(move |j| {
                (
                    2.0 * PI * i as f64 / s as f64,
                    PI * (j + 1) as f64 / (s + 1) as f64,
                )
            })
        })
    }

    fn d_tau<T>(&self, f: impl Fn(f64) -> T, tau: f64) -> T
    where
        T: std::ops::Sub<Output = T> + std::ops::Div<Complex64, Output = T>,
    {
        (f(tau + self.h_tau) - f(tau - self.h_tau)) / re(2.0 * self.h_tau)
    }

    fn d_sigma<T>(&self, f: impl Fn(f64) -> T, sigma: f64) -> T
    where
        T: std::ops::Sub<Output = T> + std::ops::Div<Complex64, Output = T>,
    {
        (f(sigma + self.h_sigma) - f(sigma - self.h_sigma)) / re(2.0 * self.h_sigma)
    }
}

/// Largest entry of the discrete divergence `∂_τ J^τ + ∂_σ J^σ` over the
/// sample lattice.
pub fn conservation_residual(ms: &ModeSpectrum, grid: &FdGrid) -> f64 {
    grid.points()
        .map(|(tau, sigma)| {
            let dt = grid.d_tau(|t| current_density_at(ms, t, sigma)[0], tau);
            let ds = grid.d_sigma(|s| current_density_at(ms, tau, s)[1], sigma);
            max_abs(&(dt + ds))
        })
        .fold(0.0, f64::max)
}

/// Finite-difference residual of the first-order field equations
/// `∂_α C^A = (√(ℓm)/m²) η_{αβ} K^{AḂ} D^β_Ḃ` and `∂_α D^α = 0`.
///
/// Both sides are linear in the Clifford vectors `K_Ḃ`, `A^L_{nḂ}` and
/// `A^R_{nḂ}`, so the residual is evaluated coefficient by coefficient:
///
/// ```text
/// C^A  ∋ c K^{AḂ} [τ K_Ḃ + Σ (2i/n)(e^{-in(τ+σ)/2} A^L_{nḂ} + e^{-in(τ-σ)/2} A^R_{nḂ})]
/// D^β  ∋ δ^β_τ K_Ḃ + Σ (k^{Lβ} e^{-in(τ+σ)/2} A^L_{nḂ} + k^{Rβ} e^{-in(τ-σ)/2} A^R_{nḂ})
/// ```
///
/// with `c = √(ℓm)/m²`. The divergence of `D` is taken on the conjugate
/// mode functions `e^{+in(τ±σ)/2}`. The constant offset drops out.
pub fn eom_residual(ms: &ModeSpectrum, grid: &FdGrid) -> f64 {
    let consts = ms.constants();
    let weight = (consts.ell * consts.m).sqrt() / consts.m.powi(2) * max_abs(&raise_both(ms.k()));
    let eta = [1.0, -1.0];

    // (C coefficient, D^β coefficients, divergence-side D^β coefficients)
    type Profile = Box<dyn Fn(f64, f64) -> (Complex64, [Complex64; 2], [Complex64; 2])>;
    let mut profiles: Vec<Profile> = vec![Box::new(|t, _| {
        (re(t), [re(1.0), re(0.0)], [re(1.0), re(0.0)])
    })];
    for &n in ms.modes().keys() {
        let nf = n as f64;
        for (k, sign) in [(K_LEFT, 1.0), (K_RIGHT, -1.0)] {
            profiles.push(Box::new(move |t, s| {
                let u = nf * (t + sign * s) / 2.0;
                let d = [re(k[0]), re(k[1])];
                (
                    I * (2.0 / nf) * phase(u),
                    d.map(|x| x * phase(u)),
                    d.map(|x| x * phase(-u)),
                )
            }));
        }
    }

    let mut worst: f64 = 0.0;
    for f in &profiles {
        for (tau, sigma) in grid.points() {
            let (_, d, _) = f(tau, sigma);
            let dc = [
                grid.d_tau(|t| f(t, sigma).0, tau),
                grid.d_sigma(|s| f(tau, s).0, sigma),
            ];
            for alpha in 0..2 {
                worst = worst.max(weight * (dc[alpha] - d[alpha] * eta[alpha]).norm());
            }
            let div =
                grid.d_tau(|t| f(t, sigma).2[0], tau) + grid.d_sigma(|s| f(tau, s).2[1], sigma);
            worst = worst.max(div.norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::super::{Mode, PhysicalConstants};
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn herm(a: f64, b: f64, z: Complex64) -> C2 {
        C2::new(c(a, 0.0), z, z.conj(), c(b, 0.0))
    }

    fn spectrum(modes: &[(i32, C2, C2)]) -> ModeSpectrum {
        let mut map = BTreeMap::new();
        for &(n, a, anm) in modes {
            map.insert(n, Mode { a, anm });
            map.insert(
                -n,
                Mode {
                    a: a * c(0.5, 0.0),
                    anm: anm.adjoint(),
                },
            );
        }
        ModeSpectrum::new(
            herm(1.3, 0.4, c(0.2, -0.5)),
            herm(0.1, -0.2, c(0.3, 0.3)),
            map,
            PhysicalConstants::new(0.8, 1.7, 1.0).unwrap(),
        )
        .unwrap()
    }

    fn one_mode() -> ModeSpectrum {
        spectrum(&[(
            1,
            herm(0.3, -0.6, c(0.1, 0.4)),
            C2::new(c(0.2, 0.1), c(-0.3, 0.5), c(0.7, 0.0), c(0.1, -0.2)),
        )])
    }

    fn cplx() -> impl Strategy<Value = Complex64> {
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| c(a, b))
    }

    fn c2() -> impl Strategy<Value = C2> {
        prop::array::uniform4(cplx()).prop_map(|z| C2::new(z[0], z[1], z[2], z[3]))
    }

    fn h2() -> impl Strategy<Value = C2> {
        (-1.0f64..1.0, -1.0f64..1.0, cplx()).prop_map(|(a, b, z)| herm(a, b, z))
    }

    fn random_spectrum() -> impl Strategy<Value = ModeSpectrum> {
        prop::collection::vec((1i32..5, h2(), c2()), 1..3).prop_map(|v| spectrum(&v))
    }

    #[test]
    fn no_modes_no_current() {
        let ms = spectrum(&[]);
        let j = current_density_at(&ms, 0.7, 1.1);
        assert_eq!(j, [C2::zeros(), C2::zeros()]);
        assert!(charge_density_coefficients(&ms)
            .values()
            .all(|m| *m == C2::zeros()));
        assert_eq!(eom_residual(&ms, &FdGrid::with_step(1e-3)).min(0.0), 0.0);
    }

    #[test]
    fn endpoint_flux_vanishes() {
        let ms = one_mode();
        assert_eq!(max_abs(&current_density_at(&ms, 0.0, 0.0)[1]), 0.0);
        for tau in [0.3, 1.9, 4.4] {
            assert!(max_abs(&current_density_at(&ms, tau, 0.0)[1]) <= 1e-12);
            assert!(max_abs(&current_density_at(&ms, tau, PI)[1]) <= 1e-12);
        }
    }

    #[test]
    fn conservation_is_second_order() {
        let ms = one_mode();
        let g = FdGrid::with_step(1e-3);
        let r1 = conservation_residual(&ms, &g);
        let r2 = conservation_residual(&ms, &g.halved());
        let scale = FdGrid::with_step(1e-3)
            .points()
            .map(|(t, s)| max_abs(&current_density_at(&ms, t, s)[0]))
            .fold(0.0, f64::max);
        assert!(r1 <= 1e-6 * scale, "{r1} {scale}");
        assert!((r1 / r2 - 4.0).abs() < 0.5, "{}", r1 / r2);
    }

    #[test]
    fn charge_matches_current() {
        let ms = spectrum(&[
            (
                1,
                herm(0.3, -0.6, c(0.1, 0.4)),
                C2::new(c(0.2, 0.1), c(-0.3, 0.5), c(0.7, 0.0), c(0.1, -0.2)),
            ),
            (
                3,
                herm(-0.2, 0.5, c(0.0, 0.3)),
                C2::new(c(0.0, 0.4), c(0.6, -0.1), c(0.2, 0.2), c(-0.5, 0.0)),
            ),
        ]);
        let coeffs = charge_density_coefficients(&ms);
        for (tau, sigma) in [(0.2, 0.4), (3.0, 2.9), (5.5, 1.0)] {
            let j = current_density_at(&ms, tau, sigma)[0];
            assert!(max_abs(&(j - charge_density(&coeffs, tau, sigma))) < 1e-13);
        }
    }

    /// Trapezoidal quadrature, exact for trigonometric polynomials of low
    /// degree on a uniform periodic grid.
    fn integrate_sigma(ms: &ModeSpectrum, tau: f64, weight: impl Fn(f64) -> f64) -> C2 {
        let n = 256;
        let h = PI / n as f64;
        (0..=n)
            .map(|j| {
                let s = j as f64 * h;
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                current_density_at(ms, tau, s)[0] * c(w * h * weight(s), 0.0)
            })
            .sum()
    }

    #[test]
    fn quadrature_charge_and_spectral_profile() {
        let ms = one_mode();
        let coeffs = charge_density_coefficients(&ms);
        for tau in [0.0, 1.3, 2.6] {
            let q = integrate_sigma(&ms, tau, |_| 1.0);
            assert!(max_abs(&(q - coeffs[&0])) <= 1e-8);
            assert!(max_abs(&(integrated_charge(&ms, tau, 64) - coeffs[&0])) <= 1e-8);
            // ∫ J^τ cos(σ) dσ over [0, π] picks up (1/π)(M^1 e^{-iτ} + M^-1 e^{iτ}) π/2
            let q1 = integrate_sigma(&ms, tau, |s| s.cos());
            let expected = (coeffs[&1] * phase(tau) + coeffs[&-1] * phase(-tau)) * c(0.5, 0.0);
            assert!(max_abs(&(q1 - expected)) <= 1e-8);
        }
    }

    #[test]
    fn free_string_average_motion() {
        let ms = spectrum(&[]);
        let tau = 1.7;
        let k = ms.k();
        let kup = raise_both(k);
        let cst = ms.constants();
        let expected =
            ms.c0() + kup * k.transpose() * kup * c(cst.ell / cst.m.powi(3) * tau * tau, 0.0);
        assert!(max_abs(&(coordinates_at(&ms, tau, 0.4) - expected)) < 1e-14);
    }

    #[test]
    fn single_mode_oscillation_at_tau_zero() {
        let ms = one_mode();
        let cst = ms.constants();
        let kup = raise_both(ms.k());
        let sigma = 0.9;
        let osc = coordinates_at(&ms, 0.0, sigma) - coordinates_at(&ms, 0.0, PI / 2.0);
        let a1 = ms.modes()[&1].anm;
        let am1 = ms.modes()[&-1].anm;
        let direct = kup
            * (a1 + am1).transpose()
            * kup
            * c(-8.0 * cst.ell / cst.m.powi(3) * sigma.cos(), 0.0);
        assert!(max_abs(&(osc - direct)) < 1e-13);
    }

    #[test]
    fn eom_single_mode() {
        let ms = one_mode();
        let g = FdGrid::with_step(1e-3);
        let r1 = eom_residual(&ms, &g);
        let r2 = eom_residual(&ms, &g.halved());
        let scale = max_abs(&raise_both(ms.k())) * (ms.constants().ell * ms.constants().m).sqrt()
            / ms.constants().m.powi(2);
        assert!(r1 <= 1e-5 * scale.max(1.0));
        assert!((r1 / r2 - 4.0).abs() < 0.5, "{}", r1 / r2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn coordinates_hermitian_and_even(ms in random_spectrum(), tau in 0.0f64..6.3, sigma in 0.0f64..PI) {
            let x = coordinates_at(&ms, tau, sigma);
            prop_assert!(max_abs(&(x - x.adjoint())) <= 1e-12);
            prop_assert!(max_abs(&(x - coordinates_at(&ms, tau, -sigma))) <= 1e-12);
        }

        #[test]
        fn standing_wave_endpoints(ms in random_spectrum(), tau in 0.0f64..6.3) {
            let h = 1e-4;
            for s0 in [0.0, PI] {
                let d = (coordinates_at(&ms, tau, s0 + h) - coordinates_at(&ms, tau, s0 - h)) / c(2.0 * h, 0.0);
                prop_assert!(max_abs(&d) <= 1e-8);
            }
        }

        #[test]
        fn charge_independent_of_time(ms in random_spectrum(), t1 in 0.0f64..6.3, t2 in 0.0f64..6.3) {
            let q1 = integrate_sigma(&ms, t1, |_| 1.0);
            let q2 = integrate_sigma(&ms, t2, |_| 1.0);
            prop_assert!(max_abs(&(q1 - q2)) <= 1e-8);
        }
    }
}
