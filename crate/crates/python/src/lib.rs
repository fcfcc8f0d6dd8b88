//! Python bindings for `entcap`.
//!
//! Matrices are lists of rows of Python complex numbers; interaction
//! vectors are 3-tuples of floats.

use entcap::ancilla::{self, SearchSpace};
use entcap::canonical::{self, CanonicalAlpha, InteractionVector};
use entcap::capability;
use entcap::numerics::ComplexMatrix;
use entcap::states::{self, MeasureKind, PureState};
use num_complex::Complex64 as C64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

type Rows = Vec<Vec<C64>>;
type Angles = (f64, f64, f64);

fn err(e: entcap::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    ComplexMatrix::new(n, n, rows.into_iter().flatten().collect()).map_err(err)
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m[(r, c)]).collect())
        .collect()
}

fn iv(a: Angles) -> InteractionVector {
    InteractionVector::new(a.0, a.1, a.2)
}

fn tuple(a: [f64; 3]) -> Angles {
    (a[0], a[1], a[2])
}

/// Folds a raw vector in `[0, π/2)³` into the canonical chamber.
fn fold(a: Angles) -> PyResult<CanonicalAlpha> {
    Ok(canonical::canonicalize_capability(&iv(a)).map_err(err)?.0)
}

#[pyclass(name = "Decomposition", frozen, get_all)]
struct PyDecomposition {
    ua: Rows,
    ub: Rows,
    va: Rows,
    vb: Rows,
    alpha: Angles,
    phase: f64,
    residual: f64,
}

#[pymethods]
impl PyDecomposition {
    /// `e^{iφ} (UA⊗UB) Ud(α) (VA⊗VB)`.
    fn reconstruct(&self) -> PyResult<Rows> {
        let l = to_matrix(self.ua.clone())?.kron(&to_matrix(self.ub.clone())?);
        let r = to_matrix(self.va.clone())?.kron(&to_matrix(self.vb.clone())?);
        let g = &(&l * &canonical::build_ud(&iv(self.alpha))) * &r;
        Ok(to_rows(&g.scale(C64::from_polar(1.0, self.phase))))
    }

    fn __repr__(&self) -> String {
        format!(
            "Decomposition(alpha=({:.6}, {:.6}, {:.6}), residual={:.2e})",
            self.alpha.0, self.alpha.1, self.alpha.2, self.residual
        )
    }
}

#[pyclass(name = "GateCapability", frozen, get_all)]
struct PyGateCapability {
    decomposition: Py<PyDecomposition>,
    canonical_alpha: Angles,
    c_max: f64,
    perfect_entangler: bool,
    best_input: (Vec<C64>, Vec<C64>),
    output_state: Vec<C64>,
}

#[pymethods]
impl PyGateCapability {
    fn __repr__(&self) -> String {
        format!(
            "GateCapability(c_max={:.12}, perfect_entangler={})",
            self.c_max, self.perfect_entangler
        )
    }
}

fn wrap_decomposition(d: &canonical::CanonicalDecomposition) -> PyDecomposition {
    PyDecomposition {
        ua: to_rows(&d.ua),
        ub: to_rows(&d.ub),
        va: to_rows(&d.va),
        vb: to_rows(&d.vb),
        alpha: tuple(d.alpha.alpha),
        phase: d.phase,
        residual: d.residual,
    }
}

/// Canonical decomposition of a 4×4 unitary.
#[pyfunction]
fn decompose(matrix: Rows) -> PyResult<PyDecomposition> {
    let d = canonical::decompose(&to_matrix(matrix)?).map_err(err)?;
    Ok(wrap_decomposition(&d))
}

/// Maximal concurrence and a best product input for a 4×4 unitary.
#[pyfunction]
fn capability_of_gate(py: Python<'_>, matrix: Rows) -> PyResult<PyGateCapability> {
    let cap = capability::capability_of_gate(&to_matrix(matrix)?).map_err(err)?;
    let r = &cap.report;
    Ok(PyGateCapability {
        decomposition: Py::new(py, wrap_decomposition(&cap.decomposition))?,
        canonical_alpha: tuple(cap.canonical.alpha()),
        c_max: r.c_max,
        perfect_entangler: r.perfect_entangler,
        best_input: (r.best_input.0.to_vec(), r.best_input.1.to_vec()),
        output_state: r.output_state.amplitudes().to_vec(),
    })
}

/// `exp(−i Σ α_β σ_β⊗σ_β)` in the computational basis.
#[pyfunction]
fn build_ud(alpha: Angles) -> Rows {
    to_rows(&canonical::build_ud(&iv(alpha)))
}

/// Chamber representative of a raw vector with components in `[0, π/2)`.
#[pyfunction]
fn canonicalize(alpha: Angles) -> PyResult<Angles> {
    Ok(tuple(fold(alpha)?.alpha()))
}

#[pyfunction]
fn max_concurrence(alpha: Angles) -> PyResult<f64> {
    Ok(capability::max_concurrence(&fold(alpha)?))
}

#[pyfunction]
fn is_perfect_entangler(alpha: Angles) -> PyResult<bool> {
    Ok(capability::is_perfect_entangler(&fold(alpha)?))
}

/// Grid-plus-refinement maximum of the output concurrence over product inputs.
#[pyfunction]
#[pyo3(signature = (alpha, n_grid = 24))]
fn oracle_max_concurrence(alpha: Angles, n_grid: usize) -> f64 {
    capability::brute_force_max_concurrence(&iv(alpha), n_grid).value
}

#[pyfunction]
fn concurrence(amplitudes: Vec<C64>) -> PyResult<f64> {
    let s = PureState::new(amplitudes, 2, 2).map_err(err)?;
    entcap::magic::concurrence(&s).map_err(err)
}

/// `kind` is one of `entropy`, `schmidt`, `monotone:n`, `renyi`, `concurrence`.
#[pyfunction]
fn measure(amplitudes: Vec<C64>, dim_a: usize, dim_b: usize, kind: &str) -> PyResult<f64> {
    let k: MeasureKind = kind.parse().map_err(err)?;
    let s = PureState::new(amplitudes, dim_a, dim_b).map_err(err)?;
    states::measure(&s, k).map_err(err)
}

#[pyfunction]
fn schmidt_coefficients(amplitudes: Vec<C64>, dim_a: usize, dim_b: usize) -> PyResult<Vec<f64>> {
    Ok(PureState::new(amplitudes, dim_a, dim_b)
        .map_err(err)?
        .schmidt_coefficients())
}

/// Ancilla-assisted optimum; returns `(value, sa, sb, (θ, φ, χ)_A, (θ, φ, χ)_B)`.
#[pyfunction]
#[pyo3(signature = (alpha, kind, budget = 10, space = "full"))]
fn optimize_measure(
    alpha: Angles,
    kind: &str,
    budget: usize,
    space: &str,
) -> PyResult<(f64, f64, f64, Angles, Angles)> {
    let k: MeasureKind = kind.parse().map_err(err)?;
    let space = match space {
        "full" => SearchSpace::Full,
        "computational" => SearchSpace::ComputationalBases,
        "product" => SearchSpace::LocalProduct,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown search space `{other}`"
            )))
        }
    };
    let r = ancilla::optimize_measure_in(&iv(alpha), k, budget, space).map_err(err)?;
    let b = |q: ancilla::QubitBasis| (q.theta, q.phi, q.chi);
    Ok((
        r.value,
        r.input.sa,
        r.input.sb,
        b(r.input.basis_a),
        b(r.input.basis_b),
    ))
}

/// Rows `(α, E_me, E_pv)` for the isotropic family.
#[pyfunction]
fn fig1_scan(alpha_max: f64, steps: usize) -> PyResult<Vec<Angles>> {
    Ok(ancilla::fig1_scan(alpha_max, steps)
        .map_err(err)?
        .into_iter()
        .map(|r| (r.alpha, r.e_me, r.e_pv))
        .collect())
}

#[pyfunction]
fn renyi_crossover() -> f64 {
    ancilla::example2_crossover()
}

#[pymodule]
fn pyentcap(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDecomposition>()?;
    m.add_class::<PyGateCapability>()?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(capability_of_gate, m)?)?;
    m.add_function(wrap_pyfunction!(build_ud, m)?)?;
    m.add_function(wrap_pyfunction!(canonicalize, m)?)?;
    m.add_function(wrap_pyfunction!(max_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(is_perfect_entangler, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_max_concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(concurrence, m)?)?;
    m.add_function(wrap_pyfunction!(measure, m)?)?;
    m.add_function(wrap_pyfunction!(schmidt_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(optimize_measure, m)?)?;
    m.add_function(wrap_pyfunction!(fig1_scan, m)?)?;
    m.add_function(wrap_pyfunction!(renyi_crossover, m)?)?;
    Ok(())
}
