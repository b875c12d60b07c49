use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cliffstring_core::lorentz::{self, LorentzFactor};
use cliffstring_core::minkowski::{matrix_to_vector, vector_to_matrix, SigmaSet};
use cliffstring_core::resolve::{self, PivotRule};
use cliffstring_core::string_modes::{self, redshift as rs, FdGrid, ModeSpectrum, SpectrumFile};
use cliffstring_core::{quantum_rep, sample, OctHermitian, OctMatrix2, SubspaceIndex};

fn err(e: cliffstring_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_to_py(py: Python<'_>, s: String) -> PyResult<Py<PyAny>> {
    Ok(py.import("json")?.call_method1("loads", (s,))?.unbind())
}

#[pyclass(name = "Octonion", module = "cliffstring", from_py_object)]
#[derive(Clone, Copy)]
struct PyOctonion(cliffstring_core::Octonion);

#[pymethods]
impl PyOctonion {
    #[new]
    #[pyo3(signature = (coeffs = [0.0; 8]))]
    fn new(coeffs: [f64; 8]) -> Self {
        PyOctonion(cliffstring_core::Octonion::new(coeffs))
    }

    /// The unit `e_i`, `0 <= i <= 7`.
    #[staticmethod]
    fn unit(i: usize) -> PyResult<Self> {
        if i > 7 {
            return Err(PyIndexError::new_err(format!(
                "unit index {i} out of range"
            )));
        }
        Ok(PyOctonion(cliffstring_core::Octonion::unit(i)))
    }

    #[getter]
    fn coeffs(&self) -> [f64; 8] {
        *self.0.coeffs()
    }

    #[getter]
    fn re(&self) -> f64 {
        self.0.re()
    }

    fn conj(&self) -> Self {
        PyOctonion(self.0.conj())
    }

    fn norm(&self) -> f64 {
        self.0.norm()
    }

    fn __add__(&self, other: &Self) -> Self {
        PyOctonion(self.0 + other.0)
    }

    fn __sub__(&self, other: &Self) -> Self {
        PyOctonion(self.0 - other.0)
    }

    fn __mul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        if let Ok(o) = other.extract::<PyOctonion>() {
            return Ok(PyOctonion(self.0 * o.0));
        }
        Ok(PyOctonion(self.0 * other.extract::<f64>()?))
    }

    fn __rmul__(&self, other: f64) -> Self {
        PyOctonion(self.0 * other)
    }

    fn __neg__(&self) -> Self {
        PyOctonion(-self.0)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Octonion({:?})", self.0.coeffs())
    }
}

/// `(a b) c - a (b c)`.
#[pyfunction]
fn associator(a: PyOctonion, b: PyOctonion, c: PyOctonion) -> PyOctonion {
    PyOctonion(cliffstring_core::octonion::associator(a.0, b.0, c.0))
}

fn hermitian_from(entries: Vec<Vec<PyOctonion>>, tol: f64) -> PyResult<OctHermitian> {
    let n = entries.len();
    if entries.iter().any(|row| row.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    OctHermitian::new(n, entries.into_iter().flatten().map(|z| z.0).collect(), tol).map_err(err)
}

#[pyclass(name = "Resolution", module = "cliffstring")]
struct PyResolution(resolve::Resolution);

#[pymethods]
impl PyResolution {
    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn a(&self, i: usize, k: usize) -> PyResult<PyOctonion> {
        self.check(i, k)?;
        Ok(PyOctonion(self.0.a(i, k)))
    }

    fn b(&self, i: usize, k: usize) -> PyResult<PyOctonion> {
        self.check(i, k)?;
        Ok(PyOctonion(self.0.b(i, k)))
    }

    /// Largest entry norm of the rebuilt matrix minus `entries`.
    fn reconstruction_residual(&self, entries: Vec<Vec<PyOctonion>>) -> PyResult<f64> {
        let h = hermitian_from(entries, f64::INFINITY)?;
        if h.n() != self.0.n() {
            return Err(PyValueError::new_err("size mismatch"));
        }
        Ok(self.0.reconstruction_residual(&h))
    }
}

impl PyResolution {
    fn check(&self, i: usize, k: usize) -> PyResult<()> {
        if i >= self.0.n() || k >= self.0.n() {
            return Err(PyIndexError::new_err(format!(
                "({i}, {k}) outside a {0}x{0} resolution",
                self.0.n()
            )));
        }
        Ok(())
    }
}

/// Resolves a Hermitian matrix given as rows of octonions.
#[pyfunction]
#[pyo3(signature = (entries, tol = resolve::DEFAULT_TOL, pivot = "banded"))]
fn resolve_hermitian(
    entries: Vec<Vec<PyOctonion>>,
    tol: f64,
    pivot: &str,
) -> PyResult<PyResolution> {
    let rule = match pivot {
        "banded" => PivotRule::Banded,
        "literal" => PivotRule::Literal,
        _ => {
            return Err(PyValueError::new_err(format!(
                "unknown pivot rule {pivot:?}"
            )))
        }
    };
    let h = hermitian_from(entries, tol)?;
    resolve::resolve_hermitian_with(&h, tol, rule)
        .map(PyResolution)
        .map_err(err)
}

/// Returns `(isotropy_residual, reconstruction_residual)` for a 4-vector.
#[pyfunction]
fn resolve_spacetime(x: [f64; 4]) -> PyResult<(f64, f64)> {
    let s = resolve::resolve_spacetime(x).map_err(err)?;
    Ok((s.isotropy_residual, s.reconstruction_residual))
}

#[pyclass(name = "LorentzFactor", module = "cliffstring")]
struct PyLorentzFactor(LorentzFactor);

type PyMatrix = [[PyOctonion; 2]; 2];

fn oct_matrix(m: PyMatrix) -> OctMatrix2 {
    OctMatrix2(m.map(|row| row.map(|z| z.0)))
}

#[pymethods]
impl PyLorentzFactor {
    /// `exp(t G)` for a traceless generator confined to one complex subspace.
    #[staticmethod]
    fn exp(generator: PyMatrix, t: f64) -> PyResult<Self> {
        LorentzFactor::exp(&oct_matrix(generator), t)
            .map(PyLorentzFactor)
            .map_err(err)
    }

    #[staticmethod]
    fn from_matrix(s: PyMatrix) -> PyResult<Self> {
        LorentzFactor::from_matrix(&oct_matrix(s))
            .map(PyLorentzFactor)
            .map_err(err)
    }

    /// Random factor in `span(1, e_k)`, reproducible from `seed`.
    #[staticmethod]
    fn random(k: usize, seed: u64) -> PyResult<Self> {
        let k = SubspaceIndex::new(k).map_err(err)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample::lorentz_factor(&mut rng, k)
            .map(PyLorentzFactor)
            .map_err(err)
    }

    #[staticmethod]
    fn reflection() -> Self {
        PyLorentzFactor(LorentzFactor::reflection())
    }

    fn det(&self) -> f64 {
        self.0.det()
    }

    fn subspace(&self) -> usize {
        self.0.subspace().get()
    }

    fn matrix(&self) -> PyMatrix {
        self.0.matrix().0.map(|row| row.map(PyOctonion))
    }

    /// Transforms a 10-vector through `X -> S X S†`.
    fn act_vector(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        let s = SigmaSet::ten();
        let xm = vector_to_matrix(&x, &s).map_err(err)?;
        let y = self.0.act_vector(&xm.to_matrix());
        Ok(matrix_to_vector(
            &cliffstring_core::minkowski::Hermitian2::from_matrix_unchecked(&y),
            &s,
        ))
    }

    fn act_spinor(&self, v: [PyOctonion; 2]) -> [PyOctonion; 2] {
        self.0.act_spinor(v.map(|z| z.0)).map(PyOctonion)
    }

    fn act_cospinor(&self, w: [PyOctonion; 2]) -> [PyOctonion; 2] {
        self.0.act_cospinor(w.map(|z| z.0)).map(PyOctonion)
    }

    fn compatibility_residual(&self, v: [PyOctonion; 2]) -> f64 {
        lorentz::compatibility_residual(&self.0, v.map(|z| z.0))
    }
}

/// `2 Re(χ^A ψ_A)`.
#[pyfunction]
fn contraction(chi: [PyOctonion; 2], psi: [PyOctonion; 2]) -> f64 {
    lorentz::contraction(chi.map(|z| z.0), psi.map(|z| z.0))
}

#[pyclass(name = "Spectrum", module = "cliffstring")]
struct PySpectrum(ModeSpectrum);

#[pymethods]
impl PySpectrum {
    #[staticmethod]
    #[pyo3(signature = (seed, max_mode = 2))]
    fn random(seed: u64, max_mode: i32) -> PyResult<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample::spectrum(&mut rng, max_mode)
            .map(PySpectrum)
            .map_err(err)
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        let file: SpectrumFile =
            serde_json::from_str(s).map_err(|e| PyValueError::new_err(e.to_string()))?;
        file.to_spectrum().map(PySpectrum).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&SpectrumFile::from_spectrum(&self.0)).expect("spectrum serializes")
    }

    fn momentum(&self) -> [f64; 4] {
        string_modes::momentum_vector(&self.0)
    }

    fn mass_shell(&self) -> f64 {
        string_modes::mass_shell(&self.0)
    }

    /// Finite-difference divergence of the current at grid resolution `n`.
    fn conservation_residual(&self, n: usize) -> f64 {
        string_modes::conservation_residual(&self.0, &FdGrid::for_resolution(n))
    }

    fn eom_residual(&self, n: usize) -> f64 {
        string_modes::eom_residual(&self.0, &FdGrid::for_resolution(n))
    }
}

#[pyfunction]
fn redshift(t_emit: f64, t_obsv: f64) -> PyResult<f64> {
    rs::redshift(t_emit, t_obsv).map_err(err)
}

#[pyfunction]
fn emission_bound(dt: f64, p: f64, z_obsv: f64) -> PyResult<f64> {
    rs::emission_bound(dt, p, z_obsv).map_err(err)
}

#[pyfunction]
fn small_z_bound(p: f64, h: f64) -> f64 {
    rs::small_z_bound(p, h)
}

/// All relations of the truncated polynomial representation, as a dict.
#[pyfunction]
#[pyo3(signature = (degree = quantum_rep::DEFAULT_DEGREE, hbar = 1.0, jz_degree = 4))]
fn quantum_check(
    py: Python<'_>,
    degree: usize,
    hbar: f64,
    jz_degree: usize,
) -> PyResult<Py<PyAny>> {
    let report = quantum_rep::quantum_check(degree, hbar, jz_degree).map_err(err)?;
    json_to_py(
        py,
        serde_json::to_string(&report).expect("report serializes"),
    )
}

#[pyfunction]
#[pyo3(signature = (degree, hbar = 1.0))]
fn jz_spectrum(degree: usize, hbar: f64) -> PyResult<Vec<f64>> {
    quantum_rep::jz_spectrum(degree, hbar).map_err(err)
}

#[pymodule]
fn cliffstring(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOctonion>()?;
    m.add_class::<PyResolution>()?;
    m.add_class::<PyLorentzFactor>()?;
    m.add_class::<PySpectrum>()?;
    m.add_function(wrap_pyfunction!(associator, m)?)?;
    m.add_function(wrap_pyfunction!(resolve_hermitian, m)?)?;
    m.add_function(wrap_pyfunction!(resolve_spacetime, m)?)?;
    m.add_function(wrap_pyfunction!(contraction, m)?)?;
    m.add_function(wrap_pyfunction!(redshift, m)?)?;
    m.add_function(wrap_pyfunction!(emission_bound, m)?)?;
    m.add_function(wrap_pyfunction!(small_z_bound, m)?)?;
    m.add_function(wrap_pyfunction!(quantum_check, m)?)?;
    m.add_function(wrap_pyfunction!(jz_spectrum, m)?)?;
    Ok(())
}
