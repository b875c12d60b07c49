use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;

use cliffstring_core::lorentz::{
    compatibility_residual, contraction_invariance_residual, LorentzFactor, NestedTransform,
};
use cliffstring_core::minkowski::{
    det2, matrix_to_vector, minkowski_norm, vector_to_matrix, SigmaSet, C2,
};
use cliffstring_core::octonion::{alternativity_residual, Octonion, SubspaceIndex};
use cliffstring_core::quantum_rep::{quantum_check, HbarSign};
use cliffstring_core::resolve::{
    resolve_hermitian_with, resolve_spacetime, PivotRule, DEFAULT_TOL,
};
use cliffstring_core::string_modes::redshift::{
    emission_bound, hubble_rate, redshift, small_z_bound,
};
use cliffstring_core::string_modes::{
    charge_density_coefficients, conservation_residual, coordinates_at, current_density_at,
    eom_residual, integrated_charge, mass_shell, max_abs, momentum_vector, FdGrid, ModeSpectrum,
    SpectrumFile,
};
use cliffstring_core::{sample, OctHermitian, OctMatrix2};

use crate::args::{FixtureKind, Pivot, RunConfig, Sign};
use crate::report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or invalid input; exit status 2.
    #[error("input error: {0}")]
    Input(String),
    /// Anything else that stops a run; exit status 1.
    #[error("{0}")]
    Runtime(String),
}

type Result<T> = std::result::Result<T, CliError>;

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

fn rng(cfg: &RunConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline, to `path` or stdout.
pub fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(runtime)?;
    s.push('\n');
    match path {
        Some(p) => fs::write(p, s).map_err(|e| runtime(format!("{}: {e}", p.display()))),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

pub fn octonion_check(cfg: &RunConfig) -> Result<Report> {
    let trials = cfg.trials_or(10_000);
    let mut rng = rng(cfg);
    let (mut norm, mut alt, mut conj) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..trials {
        let a = sample::octonion(&mut rng);
        let b = sample::octonion(&mut rng);
        let (na, nb) = (a.norm(), b.norm());
        let scale = (na * nb).max(f64::MIN_POSITIVE);
        norm = norm.max(((a * b).norm() - na * nb).abs() / scale);
        alt = alt.max(alternativity_residual(a, b) / (scale * na.max(nb)).max(f64::MIN_POSITIVE));
        conj = conj.max(((a * b).conj() - b.conj() * a.conj()).norm() / scale);
    }
    let mut r = Report::new("octonion-check", cfg.seed);
    r.check(
        "norm_composition",
        norm,
        trials,
        cfg.tol("norm_composition", 1e-12),
    );
    r.check(
        "alternativity",
        alt,
        trials,
        cfg.tol("alternativity", 1e-12),
    );
    r.check("conjugation", conj, trials, cfg.tol("conjugation", 1e-12));

    let (e1, e2, e4, e7) = (
        Octonion::unit(1),
        Octonion::unit(2),
        Octonion::unit(4),
        Octonion::unit(7),
    );
    let lhs = (e1 * e2) * e4;
    let rhs = e1 * (e2 * e4);
    r.check(
        "associator_witness",
        (lhs - e7).norm().max((rhs + e7).norm()),
        1,
        0.0,
    );
    r.set(
        "witness",
        serde_json::json!({ "(e1 e2) e4": lhs, "e1 (e2 e4)": rhs }),
    );
    Ok(r)
}

pub fn resolve(cfg: &RunConfig, tol: Option<f64>, pivot: Pivot, max_n: usize) -> Result<Report> {
    let rule = match pivot {
        Pivot::Banded => PivotRule::Banded,
        Pivot::Literal => PivotRule::Literal,
    };
    let pivot_tol = tol.unwrap_or(DEFAULT_TOL);
    let bound = tol.unwrap_or_else(|| cfg.tol("reconstruction", 1e-10));
    let mut r = Report::new("resolve", cfg.seed);
    if let Some(path) = &cfg.input {
        let h: OctHermitian = read_json(path)?;
        let res = resolve_hermitian_with(&h, pivot_tol, rule).map_err(input)?;
        let residual = res.reconstruction_residual(&h);
        r.check("reconstruction", residual, 1, bound);
        r.set("resolution", &res);
        r.set("vectors", res.vectors());
        r.set("max_residual", residual);
        return Ok(r);
    }
    if max_n == 0 {
        return Err(input("--max-n must be at least 1"));
    }
    let trials = cfg.trials_or(200);
    let mut rng = rng(cfg);
    let mut worst = 0.0f64;
    for t in 0..trials {
        let n = 1 + t % max_n;
        let h = if t % 3 == 0 {
            sample::degenerate_hermitian(&mut rng, n)
        } else {
            sample::hermitian(&mut rng, n)
        };
        let res = resolve_hermitian_with(&h, pivot_tol, rule).map_err(runtime)?;
        worst = worst.max(res.reconstruction_residual(&h));
    }
    r.check("reconstruction", worst, trials, bound);

    let (mut round, mut iso) = (0.0f64, 0.0f64);
    for _ in 0..trials {
        let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let s = resolve_spacetime(x).map_err(runtime)?;
        round = round.max(s.reconstruction_residual);
        iso = iso.max(s.isotropy_residual);
    }
    r.check(
        "spacetime_round_trip",
        round,
        trials,
        cfg.tol("spacetime_round_trip", 1e-12),
    );
    r.check("isotropy", iso, trials, cfg.tol("isotropy", 1e-12));
    Ok(r)
}

/// A factor mixing `e1` and `e2`, outside every complex subspace.
fn mixed_factor<R: Rng>(rng: &mut R) -> LorentzFactor {
    let a = Octonion::unit(1) * rng.gen_range(0.5..1.0);
    let b = Octonion::unit(2) * rng.gen_range(0.5..1.0);
    LorentzFactor::unchecked(OctMatrix2::new(Octonion::ONE, a, b, Octonion::ONE))
}

pub fn lorentz_check(cfg: &RunConfig, nest_depth: usize) -> Result<Report> {
    if nest_depth == 0 {
        return Err(input("--nest-depth must be at least 1"));
    }
    let trials = cfg.trials_or(1000);
    let mut rng = rng(cfg);
    let sigma = SigmaSet::ten();
    let (mut det_res, mut norm_res, mut compat, mut contr, mut control) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut seen = [false; 8];
    let mut slot = 0usize;
    for t in 0..trials {
        let depth = 1 + t % nest_depth;
        let mut factors = Vec::with_capacity(depth);
        for _ in 0..depth {
            let k = SubspaceIndex::new(1 + slot % 7).expect("valid");
            slot += 1;
            seen[k.get()] = true;
            factors.push(sample::lorentz_factor(&mut rng, k).map_err(runtime)?);
        }
        if rng.gen_bool(0.25) {
            factors.push(LorentzFactor::reflection());
        }
        let nested = NestedTransform::new(factors);

        let x: Vec<f64> = (0..10).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let xm = vector_to_matrix(&x, &sigma).map_err(runtime)?;
        let y = nested.act_vector(&xm);
        let d0 = det2(&xm);
        det_res = det_res.max((det2(&y) - d0).abs() / (1.0 + d0.abs()));
        let n0 = minkowski_norm(&x);
        norm_res = norm_res
            .max((minkowski_norm(&matrix_to_vector(&y, &sigma)) - n0).abs() / (1.0 + n0.abs()));

        for f in &nested.factors {
            compat = compat.max(compatibility_residual(f, sample::spinor(&mut rng)));
            let (chi, psi) = (sample::spinor(&mut rng), sample::spinor(&mut rng));
            contr = contr.max(contraction_invariance_residual(f, chi, psi));
        }
        control = control.max(compatibility_residual(
            &mixed_factor(&mut rng),
            sample::spinor(&mut rng),
        ));
    }
    let exercised: Vec<usize> = (1..8).filter(|&k| seen[k]).collect();
    let mut r = Report::new("lorentz-check", cfg.seed);
    r.check(
        "det_preservation",
        det_res,
        trials,
        cfg.tol("det_preservation", 1e-10),
    );
    r.check(
        "norm_preservation",
        norm_res,
        trials,
        cfg.tol("norm_preservation", 1e-10),
    );
    r.check(
        "compatibility",
        compat,
        trials,
        cfg.tol("compatibility", 1e-10),
    );
    r.check(
        "contraction_invariance",
        contr,
        trials,
        cfg.tol("contraction_invariance", 1e-10),
    );
    r.check_above(
        "mixed_subspace_control",
        control,
        trials,
        cfg.tol("mixed_subspace_control", 0.1),
    );
    r.check(
        "subspaces_exercised",
        (7 - exercised.len()) as f64,
        trials,
        0.0,
    );
    r.set("max_det_residual", det_res);
    r.set("max_compat_residual", compat);
    r.set("max_contraction_residual", contr);
    r.set("max_mixed_control_residual", control);
    r.set("subspaces", exercised);
    r.set("nest_depth", nest_depth);
    Ok(r)
}

fn load_spectrum(cfg: &RunConfig, rng: &mut ChaCha8Rng, modes: i32) -> Result<ModeSpectrum> {
    match &cfg.input {
        Some(path) => read_json::<SpectrumFile>(path)?
            .to_spectrum()
            .map_err(input),
        None => sample::spectrum(rng, modes).map_err(runtime),
    }
}

/// `|r_h / r_{h/2} - 4|`, or 0 when both residuals sit at round-off.
fn order_deviation(coarse: f64, fine: f64) -> f64 {
    if coarse <= 1e-13 {
        return 0.0;
    }
    (coarse / fine - 4.0).abs()
}

pub fn string_modes(
    cfg: &RunConfig,
    grid: usize,
    modes: i32,
    csv: Option<&Path>,
    tau_samples: usize,
) -> Result<Report> {
    if grid < 4 {
        return Err(input("--grid must be at least 4"));
    }
    let mut rng = rng(cfg);
    let ms = load_spectrum(cfg, &mut rng, modes)?;
    let taus: Vec<f64> = (0..tau_samples.max(1))
        .map(|j| 2.0 * PI * j as f64 / tau_samples.max(1) as f64)
        .collect();
    let sigmas: Vec<f64> = (0..grid)
        .map(|i| PI * i as f64 / (grid - 1) as f64)
        .collect();

    let mut flux = 0.0f64;
    let mut even = 0.0f64;
    let mut charge = 0.0f64;
    let coeffs = charge_density_coefficients(&ms);
    for &tau in &taus {
        flux = flux.max(max_abs(&current_density_at(&ms, tau, 0.0)[1]));
        flux = flux.max(max_abs(&current_density_at(&ms, tau, PI)[1]));
        for &s in &sigmas {
            even = even.max(max_abs(
                &(coordinates_at(&ms, tau, -s) - coordinates_at(&ms, tau, s)),
            ));
            even = even.max(max_abs(
                &(coordinates_at(&ms, tau, PI + s) - coordinates_at(&ms, tau, PI - s)),
            ));
        }
        charge = charge.max(max_abs(&(integrated_charge(&ms, tau, grid) - coeffs[&0])));
    }

    let fd = FdGrid::for_resolution(grid);
    let (c1, c2) = (
        conservation_residual(&ms, &fd),
        conservation_residual(&ms, &fd.halved()),
    );
    let (e1, e2) = (eom_residual(&ms, &fd), eom_residual(&ms, &fd.halved()));

    let mut r = Report::new("string-modes", cfg.seed);
    let n = taus.len();
    r.check("endpoint_flux", flux, n, cfg.tol("endpoint_flux", 1e-12));
    r.check(
        "standing_wave_evenness",
        even,
        n * grid,
        cfg.tol("standing_wave_evenness", 1e-8),
    );
    r.check("charge", charge, n, cfg.tol("charge", 1e-8));
    r.check(
        "conservation_order",
        order_deviation(c1, c2),
        2,
        cfg.tol("conservation_order", 0.5),
    );
    r.check(
        "eom_order",
        order_deviation(e1, e2),
        2,
        cfg.tol("eom_order", 0.5),
    );
    r.set("conservation_residuals", [c1, c2]);
    r.set("eom_residuals", [e1, e2]);
    r.set("momentum", momentum_vector(&ms));
    r.set("mass_shell", mass_shell(&ms));
    r.set("max_mode", ms.max_mode());
    if let Some(path) = csv {
        write_grid_csv(&ms, &taus, &sigmas, path)?;
    }
    Ok(r)
}

fn push_matrix(row: &mut Vec<String>, m: &C2) {
    for i in 0..2 {
        for j in 0..2 {
            row.push(m[(i, j)].re.to_string());
            row.push(m[(i, j)].im.to_string());
        }
    }
}

fn write_grid_csv(ms: &ModeSpectrum, taus: &[f64], sigmas: &[f64], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(runtime)?;
    let mut header = vec!["tau".to_string(), "sigma".to_string()];
    for name in ["X", "Jtau", "Jsigma"] {
        for ij in ["11", "12", "21", "22"] {
            header.push(format!("{name}{ij}_re"));
            header.push(format!("{name}{ij}_im"));
        }
    }
    w.write_record(&header).map_err(runtime)?;
    for &tau in taus {
        for &s in sigmas {
            let mut row = vec![tau.to_string(), s.to_string()];
            push_matrix(&mut row, &coordinates_at(ms, tau, s));
            let j = current_density_at(ms, tau, s);
            push_matrix(&mut row, &j[0]);
            push_matrix(&mut row, &j[1]);
            w.write_record(&row).map_err(runtime)?;
        }
    }
    w.flush().map_err(runtime)
}

pub fn quantum(
    cfg: &RunConfig,
    degree: usize,
    hbar: f64,
    jz_degree: usize,
    sign: Sign,
) -> Result<Report> {
    let q = quantum_check(degree, hbar, jz_degree).map_err(input)?;
    let hs = match sign {
        Sign::Plus => HbarSign::Plus,
        Sign::Minus => HbarSign::Minus,
    };
    let pick = |plus: f64, minus: f64| if hs == HbarSign::Plus { plus } else { minus };
    let scale = q.scale.max(1.0) * hbar.abs().max(1.0);
    let tv = match hs {
        HbarSign::Plus => q.three_vector_plus,
        HbarSign::Minus => q.three_vector_minus,
    };
    let mut r = Report::new("quantum-check", cfg.seed);
    let tol = |name: &str, d: f64| cfg.tol(name, d);
    r.check(
        "canonical",
        q.canonical,
        q.safe_dim,
        tol("canonical", 1e-12) * hbar.abs().max(1.0),
    );
    r.check(
        "mixed",
        q.mixed,
        q.safe_dim,
        tol("mixed", 1e-12) * hbar.abs().max(1.0),
    );
    r.check(
        "lorentz_closure",
        pick(q.closure_plus, q.closure_minus),
        q.safe_dim,
        tol("lorentz_closure", 1e-10) * scale,
    );
    r.check(
        "dotted_commutator",
        q.dotted,
        q.safe_dim,
        tol("dotted_commutator", 1e-10) * scale,
    );
    r.check(
        "three_vector",
        tv.n_n.max(tv.ndag_ndag).max(tv.n_ndag),
        q.safe_dim,
        tol("three_vector", 1e-10) * scale,
    );
    r.check(
        "tensor_antisymmetry",
        q.tensor_antisymmetry.max(q.spinor_tensor_antisymmetry),
        q.safe_dim,
        tol("tensor_antisymmetry", 1e-12),
    );
    r.check(
        "tensor_closure",
        pick(
            q.tensor_closure_plus.max(q.spinor_tensor_closure_plus),
            q.tensor_closure_minus.max(q.spinor_tensor_closure_minus),
        ),
        q.safe_dim,
        tol("tensor_closure", 1e-10) * scale,
    );
    r.check(
        "jz_integrality",
        q.jz_integrality,
        q.jz_eigenvalues.len(),
        tol("jz_integrality", 1e-9),
    );
    r.set("closure_sign", hs);
    r.set("residuals", &q);
    Ok(r)
}

pub fn redshift_cmd(
    cfg: &RunConfig,
    t_emit: f64,
    t_obsv: f64,
    p: Option<f64>,
    z_obsv: Option<f64>,
) -> Result<Report> {
    let z = redshift(t_emit, t_obsv).map_err(input)?;
    let mut r = Report::new("redshift", cfg.seed);
    r.set("z", z);
    if let Some(p) = p {
        let dt = t_obsv - t_emit;
        let zo = z_obsv.unwrap_or(z);
        r.set("t_emit_min", emission_bound(dt, p, zo).map_err(input)?);
        r.set("small_z_bound", small_z_bound(p, hubble_rate(dt, zo)));
    }
    Ok(r)
}

pub fn gen_fixture(cfg: &RunConfig, kind: FixtureKind, n: usize, modes: i32) -> Result<()> {
    let mut rng = rng(cfg);
    let out = cfg.output.as_deref();
    match kind {
        FixtureKind::Hermitian => {
            if n == 0 {
                return Err(input("--n must be at least 1"));
            }
            write_json(&sample::hermitian(&mut rng, n), out)
        }
        FixtureKind::Spectrum => {
            let ms = sample::spectrum(&mut rng, modes).map_err(input)?;
            write_json(&SpectrumFile::from_spectrum(&ms), out)
        }
        FixtureKind::Spinor => write_json(&sample::spinor(&mut rng), out),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: usize) -> RunConfig {
        RunConfig {
            seed: 4,
            trials: Some(trials),
            tolerances: Default::default(),
            input: None,
            output: None,
        }
    }

    #[test]
    fn small_sweeps_pass() {
        assert!(octonion_check(&cfg(200)).unwrap().pass);
        assert!(resolve(&cfg(30), None, Pivot::Banded, 6).unwrap().pass);
        let l = lorentz_check(&cfg(30), 5).unwrap();
        assert!(l.pass, "{}", l.to_json());
        let s = string_modes(&cfg(1), 64, 2, None, 4).unwrap();
        assert!(s.pass, "{}", s.to_json());
    }

    #[test]
    fn redshift_value() {
        let r = redshift_cmd(&cfg(1), 1.0, 4.0, None, None).unwrap();
        assert_eq!(r.data["z"], 1.0);
        assert!(matches!(
            redshift_cmd(&cfg(1), 0.0, 4.0, None, None),
            Err(CliError::Input(_))
        ));
    }

    #[test]
    fn quantum_signs() {
        let plus = quantum(&cfg(1), 3, 1.0, 2, Sign::Plus).unwrap();
        assert!(!plus.checks["lorentz_closure"].pass);
        assert!(plus.checks["canonical"].pass && plus.checks["jz_integrality"].pass);
        assert!(quantum(&cfg(1), 3, 1.0, 2, Sign::Minus).unwrap().pass);
    }

    #[test]
    fn tolerance_override_applies() {
        let mut c = cfg(50);
        c.tolerances.insert("norm_composition".into(), 1e-30);
        let r = octonion_check(&c).unwrap();
        assert_eq!(r.checks["norm_composition"].tolerance, 1e-30);
    }
}
