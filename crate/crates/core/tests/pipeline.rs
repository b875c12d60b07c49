use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cliffstring_core::clifford::gram_matrix;
use cliffstring_core::lorentz::LorentzFactor;
use cliffstring_core::minkowski::{matrix_to_vector, Hermitian2, SigmaSet};
use cliffstring_core::quantum_rep::{quantum_check, QuantumReport};
use cliffstring_core::resolve::{resolve_hermitian, resolve_spacetime, DEFAULT_TOL};
use cliffstring_core::string_modes::{
    conservation_residual, momentum_vector, FdGrid, SpectrumFile,
};
use cliffstring_core::{sample, SubspaceIndex};

#[test]
fn resolved_vectors_rebuild_their_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=6 {
        for degenerate in [false, true] {
            let h = if degenerate {
                sample::degenerate_hermitian(&mut rng, n)
            } else {
                sample::hermitian(&mut rng, n)
            };
            let r = resolve_hermitian(&h, DEFAULT_TOL).unwrap();
            let g = gram_matrix(&r.vectors()).unwrap();
            assert!(g.max_diff(&h) < 1e-10, "n = {n}, degenerate = {degenerate}");
        }
    }
}

// acting on the spinor components of x moves x by S X S†
#[test]
fn spinor_action_matches_vector_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let s4 = SigmaSet::four();
    for x in [
        [1.0, 0.2, -0.4, 0.7],
        [0.3, 0.0, 0.0, -2.0],
        [-1.5, 0.5, 0.5, 0.5],
    ] {
        let c = resolve_spacetime(x).unwrap().c;
        for f in [
            sample::lorentz_factor(&mut rng, SubspaceIndex::new(1).unwrap()).unwrap(),
            LorentzFactor::reflection(),
        ] {
            let moved = gram_matrix(&f.act_spinor_vectors(&c).unwrap()).unwrap();
            let moved = Hermitian2::from_oct_hermitian(&moved).unwrap();
            let xm = cliffstring_core::minkowski::vector_to_matrix(&x, &s4).unwrap();
            let expected = Hermitian2::from_matrix_unchecked(&f.act_vector(&xm.to_matrix()));
            assert!(moved.max_diff(&expected) < 1e-10);
            let y = matrix_to_vector(&moved, &s4);
            let norm = |v: &[f64]| v[0] * v[0] - v[1..].iter().map(|a| a * a).sum::<f64>();
            assert!((norm(&y) - f.det().powi(2) * norm(&x)).abs() < 1e-10);
        }
    }
}

#[test]
fn spectrum_file_round_trip_keeps_physics() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let ms = sample::spectrum(&mut rng, 2).unwrap();
    let text = serde_json::to_string(&SpectrumFile::from_spectrum(&ms)).unwrap();
    let back = serde_json::from_str::<SpectrumFile>(&text)
        .unwrap()
        .to_spectrum()
        .unwrap();
    let (p, q) = (momentum_vector(&ms), momentum_vector(&back));
    assert!(p.iter().zip(&q).all(|(a, b)| (a - b).abs() < 1e-14));
    let grid = FdGrid::for_resolution(64);
    assert!(
        (conservation_residual(&ms, &grid) - conservation_residual(&back, &grid)).abs() < 1e-12
    );
}

#[test]
fn quantum_report_serializes() {
    let r = quantum_check(3, 1.0, 2).unwrap();
    assert_eq!((r.dim, r.safe_dim), (35, 15));
    assert_eq!(r.closure_minus, 0.0);
    assert!(r.closure_plus > 1.0);
    let back: QuantumReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
}
