//! Python bindings, importable as `qwasser`.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use qwasser::{
    check_isometry_with, run_sweep, self_distance_sym_closed, self_distance_xz_closed, to_csv, BlochAction,
    BlochVector, ComplexMatrix, CostOperator, Figure, QubitState, QwError, SignDomain, SignFunction,
    SolverMethod, SolverOptions, StateMap, StateRng, SweepConfig, TransportResult,
};

create_exception!(qwasser, NumericFailure, PyRuntimeError);

type Rows = Vec<Vec<Complex64>>;

fn err(e: QwError) -> PyErr {
    match e {
        QwError::InvalidArgument(m) => PyValueError::new_err(m),
        e @ QwError::NumericFailure { .. } => NumericFailure::new_err(e.to_string()),
    }
}

fn rows(m: &ComplexMatrix) -> Rows {
    m.entries().chunks(m.dim()).map(<[Complex64]>::to_vec).collect()
}

fn from_rows(rows: Rows) -> PyResult<ComplexMatrix> {
    let dim = rows.len();
    if rows.iter().any(|r| r.len() != dim) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    ComplexMatrix::from_entries(dim, &rows.concat()).map_err(err)
}

fn to_python<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> PyResult<T> {
    serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyclass(name = "QubitState", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyState(QubitState);

#[pymethods]
impl PyState {
    #[new]
    fn new(x: f64, y: f64, z: f64) -> PyResult<Self> {
        QubitState::from_xyz(x, y, z).map(PyState).map_err(err)
    }

    #[staticmethod]
    fn maximally_mixed() -> Self {
        PyState(QubitState::maximally_mixed())
    }

    #[staticmethod]
    fn from_matrix(m: Rows) -> PyResult<Self> {
        QubitState::from_matrix(&from_rows(m)?).map(PyState).map_err(err)
    }

    #[getter]
    fn bloch(&self) -> (f64, f64, f64) {
        let b = self.0.bloch();
        (b.x, b.y, b.z)
    }

    fn matrix(&self) -> Rows {
        rows(self.0.matrix())
    }

    #[pyo3(signature = (tol = 1e-9))]
    fn is_pure(&self, tol: f64) -> bool {
        self.0.is_pure(tol)
    }

    #[pyo3(signature = (tol = 1e-12))]
    fn is_real(&self, tol: f64) -> bool {
        self.0.is_real(tol)
    }

    fn conjugate(&self) -> Self {
        PyState(self.0.conjugate())
    }

    fn __repr__(&self) -> String {
        let b = self.0.bloch();
        format!("QubitState({}, {}, {})", b.x, b.y, b.z)
    }
}

#[pyclass(name = "CostOperator", frozen, from_py_object)]
#[derive(Clone)]
struct PyCost(CostOperator);

#[pymethods]
impl PyCost {
    #[staticmethod]
    fn sym() -> Self {
        PyCost(qwasser::cost_sym())
    }

    #[staticmethod]
    fn xz() -> Self {
        PyCost(qwasser::cost_xz())
    }

    /// Builds `Σ (A⊗I − I⊗Aᵀ)²` from Hermitian 2×2 generators.
    #[staticmethod]
    fn from_generators(generators: Vec<Rows>) -> PyResult<Self> {
        let gens = generators.into_iter().map(from_rows).collect::<PyResult<Vec<_>>>()?;
        qwasser::build_cost(&gens).map(PyCost).map_err(err)
    }

    #[getter]
    fn name(&self) -> String {
        self.0.name().to_string()
    }

    fn matrix(&self) -> Rows {
        rows(self.0.matrix())
    }

    fn eigenvalues(&self) -> Vec<f64> {
        self.0.spectrum().eigenvalues().to_vec()
    }

    fn __repr__(&self) -> String {
        format!("CostOperator({:?})", self.0.name())
    }
}

#[pyclass(name = "TransportResult", frozen)]
struct PyTransport(TransportResult);

#[pymethods]
impl PyTransport {
    /// Optimal transport cost, the squared distance.
    #[getter]
    fn value(&self) -> f64 {
        self.0.value
    }

    #[getter]
    fn distance(&self) -> f64 {
        self.0.distance
    }

    #[getter]
    fn iterations(&self) -> usize {
        self.0.iterations
    }

    #[getter]
    fn certificate(&self) -> &'static str {
        self.0.certificate.kind()
    }

    #[getter]
    fn gap(&self) -> Option<f64> {
        self.0.certificate.gap()
    }

    fn coupling(&self) -> Rows {
        rows(&self.0.coupling.matrix)
    }

    /// Dual potentials `(X, Y)` when the result carries a duality-gap certificate.
    fn dual(&self) -> Option<(Rows, Rows)> {
        match &self.0.certificate {
            qwasser::Certificate::DualityGap { dual, .. } => Some((rows(&dual.x), rows(&dual.y))),
            _ => None,
        }
    }

    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_python(py, &self.0)
    }

    fn __repr__(&self) -> String {
        format!("TransportResult(value={}, certificate={:?})", self.0.value, self.0.certificate.kind())
    }
}

#[pyclass(name = "StateMap", frozen, from_py_object)]
#[derive(Clone)]
struct PyMap(StateMap);

#[pymethods]
impl PyMap {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let m: StateMap = parse(text)?;
        m.validate().map_err(err)?;
        Ok(PyMap(m))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("maps serialize")
    }

    #[staticmethod]
    fn identity() -> Self {
        PyMap(StateMap::identity())
    }

    #[staticmethod]
    fn wigner_unitary(u: Rows) -> PyResult<Self> {
        let m = StateMap::WignerUnitary { u: from_rows(u)? };
        m.validate().map_err(err)?;
        Ok(PyMap(m))
    }

    #[staticmethod]
    fn wigner_anti_unitary(v: Rows) -> PyResult<Self> {
        let m = StateMap::WignerAntiUnitary { v: from_rows(v)? };
        m.validate().map_err(err)?;
        Ok(PyMap(m))
    }

    /// `e^{itσ_axis}` conjugation, axis in 1..=3.
    #[staticmethod]
    fn pauli_rotation(axis: usize, t: f64) -> PyResult<Self> {
        Ok(PyMap(StateMap::WignerUnitary { u: qwasser::pauli_exp(axis, t).map_err(err)? }))
    }

    #[staticmethod]
    fn rot_y(t: f64) -> Self {
        PyMap(StateMap::RotY { t })
    }

    #[staticmethod]
    fn reflect_yz() -> Self {
        PyMap(StateMap::ReflectYZ)
    }

    #[staticmethod]
    fn global_conjugation() -> Self {
        PyMap(StateMap::GlobalConjugation)
    }

    /// Conjugates states in the domain where `ε = −1`. With `seed` the sign is
    /// a seeded hash of the Bloch vector, otherwise the constant `sign`.
    #[staticmethod]
    #[pyo3(signature = (seed = None, sign = -1, all_nonreal = false))]
    fn sign_map(seed: Option<u64>, sign: i8, all_nonreal: bool) -> PyResult<Self> {
        let epsilon = match seed {
            Some(seed) => SignFunction::Hashed { seed },
            None => SignFunction::Constant { sign },
        };
        let domain = if all_nonreal { SignDomain::AllNonreal } else { SignDomain::PureNonreal };
        let m = StateMap::PureSignMap { domain, epsilon };
        m.validate().map_err(err)?;
        Ok(PyMap(m))
    }

    /// Composition applied right to left.
    #[staticmethod]
    fn compose(maps: Vec<PyMap>) -> Self {
        PyMap(StateMap::compose(maps.into_iter().map(|m| m.0).collect()))
    }

    fn apply(&self, state: &PyState) -> PyResult<PyState> {
        self.0.apply(&state.0).map(PyState).map_err(err)
    }

    fn __call__(&self, state: &PyState) -> PyResult<PyState> {
        self.apply(state)
    }

    /// The 3×3 orthogonal Bloch action, or `None` when the map is not affine.
    fn bloch_action(&self) -> PyResult<Option<[[f64; 3]; 3]>> {
        Ok(match self.0.bloch_action().map_err(err)? {
            BlochAction::Orthogonal(o) => Some(o),
            BlochAction::NotAffine => None,
        })
    }

    fn inverse(&self) -> PyResult<Self> {
        self.0.inverse().map(PyMap).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("StateMap({})", self.to_json())
    }
}

fn options(method: &str, gap_tol: Option<f64>, use_pure_fast_path: bool) -> PyResult<SolverOptions> {
    let method = match method {
        "ipm" | "interior-point" => SolverMethod::InteriorPoint,
        "admm" => SolverMethod::Admm,
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}, expected ipm or admm"))),
    };
    let mut opts = SolverOptions { method, use_pure_fast_path, ..SolverOptions::default() };
    if let Some(g) = gap_tol {
        opts.gap_tol = g;
    }
    opts.validate().map_err(err)?;
    Ok(opts)
}

/// Optimal transport cost between `rho` and `omega`.
#[pyfunction]
#[pyo3(signature = (rho, omega, cost, method = "ipm", gap_tol = None, use_pure_fast_path = true))]
fn solve(
    py: Python<'_>,
    rho: &PyState,
    omega: &PyState,
    cost: &PyCost,
    method: &str,
    gap_tol: Option<f64>,
    use_pure_fast_path: bool,
) -> PyResult<PyTransport> {
    let opts = options(method, gap_tol, use_pure_fast_path)?;
    let (r, o, c) = (rho.0, omega.0, cost.0.clone());
    py.detach(|| qwasser::solve_qw(&r, &o, &c, &opts)).map(PyTransport).map_err(err)
}

/// `D_C(ρ, ρ)²` from the canonical purification.
#[pyfunction]
fn self_distance(rho: &PyState, cost: &PyCost) -> PyResult<f64> {
    qwasser::self_distance(&rho.0, &cost.0).map_err(err)
}

#[pyfunction]
fn self_distance_closed(rho: &PyState, cost: &str) -> PyResult<f64> {
    let b: BlochVector = rho.0.bloch();
    match cost {
        "xz" => self_distance_xz_closed(b),
        "sym" => self_distance_sym_closed(b),
        other => return Err(PyValueError::new_err(format!("no closed form for cost {other:?}"))),
    }
    .map_err(err)
}

#[pyfunction]
fn trivial_cost(rho: &PyState, omega: &PyState, cost: &PyCost) -> f64 {
    qwasser::trivial_cost(&rho.0, &omega.0, &cost.0)
}

/// Compares `D(Φρ, Φω)` with `D(ρ, ω)` on seeded stratified pairs; returns the report as a dict.
#[pyfunction]
#[pyo3(signature = (map, cost, pairs = 200, tol = 1e-6, seed = 0, method = "ipm"))]
fn check_isometry<'py>(
    py: Python<'py>,
    map: &PyMap,
    cost: &PyCost,
    pairs: usize,
    tol: f64,
    seed: u64,
    method: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = options(method, None, true)?;
    let (m, c) = (map.0.clone(), cost.0.clone());
    let report = py
        .detach(|| check_isometry_with(&m, &c, pairs, tol, &mut StateRng::seed_from_u64(seed), &opts))
        .map_err(err)?;
    to_python(py, &report)
}

/// Runs a figure sweep. `config` is a JSON config string and takes
/// precedence over `figure`. Returns `(csv, summary)`.
#[pyfunction]
#[pyo3(signature = (figure = "fig1", config = None, seed = None))]
fn sweep<'py>(
    py: Python<'py>,
    figure: &str,
    config: Option<&str>,
    seed: Option<u64>,
) -> PyResult<(String, Bound<'py, PyAny>)> {
    let mut cfg: SweepConfig = match config {
        Some(text) => parse(text)?,
        None => SweepConfig::preset(parse::<Figure>(&format!("{figure:?}"))?).map_err(err)?,
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let out = py.detach(|| run_sweep(&cfg)).map_err(err)?;
    Ok((to_csv(&out.rows), to_python(py, &out.summary)?))
}

#[pymodule(name = "qwasser")]
fn qwasser_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyState>()?;
    m.add_class::<PyCost>()?;
    m.add_class::<PyTransport>()?;
    m.add_class::<PyMap>()?;
    m.add("NumericFailure", m.py().get_type::<NumericFailure>())?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(self_distance, m)?)?;
    m.add_function(wrap_pyfunction!(self_distance_closed, m)?)?;
    m.add_function(wrap_pyfunction!(trivial_cost, m)?)?;
    m.add_function(wrap_pyfunction!(check_isometry, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    Ok(())
}
