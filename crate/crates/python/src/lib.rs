//! Python bindings: exact coefficients, π⁺, reconstructed boundary terms and
//! reconciliation reports.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyComplex;

use wres_core::arith::GaussianRational;
use wres_core::assembler::{self, Aa38Branch, Config, Theorem, Variant};
use wres_core::clifford::{self, CliffordElement, Letter};
use wres_core::coeffs;
use wres_core::expr::{parse_ratfunc, parse_symbol, Scope};
use wres_core::geometric::GeometricExpression;
use wres_core::ratfunc::RatFuncXi;
use wres_core::report::{ReportConfig, ReportDocument};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// An exact element of ℚ(i).
#[pyclass(name = "Gaussian", frozen, eq, hash, skip_from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyGaussian(GaussianRational);

#[pymethods]
impl PyGaussian {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        wres_core::expr::parse_constant(text, 4).map(Self).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Gaussian('{}')", self.0)
    }

    fn __complex__<'py>(&self, py: Python<'py>) -> Bound<'py, PyComplex> {
        let (re, im) = self.0.to_f64_pair();
        PyComplex::from_doubles(py, re, im)
    }

    #[getter]
    fn real(&self) -> String {
        self.0.re().to_string()
    }

    #[getter]
    fn imag(&self) -> String {
        self.0.im().to_string()
    }

    fn __add__(&self, o: &Self) -> Self {
        Self(&self.0 + &o.0)
    }

    fn __sub__(&self, o: &Self) -> Self {
        Self(&self.0 - &o.0)
    }

    fn __mul__(&self, o: &Self) -> Self {
        Self(&self.0 * &o.0)
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        self.0.checked_div(&o.0).map(Self).map_err(err)
    }

    fn __neg__(&self) -> Self {
        Self(-self.0.clone())
    }

    fn latex(&self) -> String {
        self.0.to_latex()
    }
}

/// A rational function of ξ_n with poles at ±i.
#[pyclass(name = "RatFunc", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyRatFunc(RatFuncXi);

#[pymethods]
impl PyRatFunc {
    #[new]
    #[pyo3(signature = (text, n = 4))]
    fn new(text: &str, n: u32) -> PyResult<Self> {
        parse_ratfunc(text, n).map(Self).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("RatFunc('{}')", self.0.to_text())
    }

    fn __add__(&self, o: &Self) -> Self {
        Self(self.0.add(&o.0))
    }

    fn __sub__(&self, o: &Self) -> Self {
        Self(self.0.sub(&o.0))
    }

    fn __mul__(&self, o: &Self) -> Self {
        Self(self.0.mul(&o.0))
    }

    fn __truediv__(&self, o: &Self) -> PyResult<Self> {
        self.0.div(&o.0).map(Self).map_err(err)
    }

    /// Principal part at ξ_n = +i.
    fn pi_plus(&self) -> PyResult<Self> {
        self.0.pi_plus().map(Self).map_err(err)
    }

    #[pyo3(signature = (m = 1))]
    fn derivative(&self, m: u32) -> Self {
        Self(self.0.differentiate(m))
    }

    fn residue(&self) -> PyResult<PyGaussian> {
        self.0.poles_only_at_pm_i().map_err(err)?;
        Ok(PyGaussian(self.0.residue_at(&GaussianRational::i())))
    }

    /// c with ∮_{Γ⁺} f dξ_n = c·π.
    fn contour_integral(&self) -> PyResult<PyGaussian> {
        self.0.contour_integral_upper().map(PyGaussian).map_err(err)
    }

    #[pyo3(signature = (precision_bits = 256, nodes = 4096))]
    fn residue_numeric(&self, precision_bits: u32, nodes: usize) -> PyResult<(String, String)> {
        let z = wres_core::quadrature::contour_residue_numeric(&self.0, precision_bits, nodes).map_err(err)?;
        Ok((z.re.to_decimal(40), z.im.to_decimal(40)))
    }

    fn partial_fractions(&self) -> String {
        self.0.partial_fractions().to_text()
    }

    fn __call__(&self, x: &PyGaussian) -> PyResult<PyGaussian> {
        self.0.eval(&x.0).map(PyGaussian).map_err(err)
    }
}

/// A polynomial in the boundary-geometry atoms with ℚ(i) coefficients.
#[pyclass(name = "GeometricExpression", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PyGeometric(GeometricExpression);

#[pymethods]
impl PyGeometric {
    fn __str__(&self) -> String {
        self.0.to_text()
    }

    fn __repr__(&self) -> String {
        format!("<GeometricExpression {}>", self.0.to_text())
    }

    fn __add__(&self, o: &Self) -> Self {
        Self(self.0.add(&o.0))
    }

    fn __sub__(&self, o: &Self) -> Self {
        Self(self.0.sub(&o.0))
    }

    fn __mul__(&self, o: &Self) -> Self {
        Self(self.0.mul(&o.0))
    }

    fn __bool__(&self) -> bool {
        !self.0.is_zero()
    }

    fn latex(&self) -> String {
        self.0.to_latex()
    }

    fn json(&self) -> String {
        self.0.to_json().to_string()
    }

    /// {monomial tag: exact coefficient}
    fn terms(&self) -> Vec<(String, PyGaussian)> {
        self.0.terms().iter().map(|(m, c)| (m.tag_text(), PyGaussian(c.clone()))).collect()
    }

    fn coefficient(&self, monomial: &str) -> PyResult<PyGaussian> {
        let m = self
            .0
            .terms()
            .keys()
            .find(|m| m.tag_text() == monomial)
            .cloned();
        Ok(PyGaussian(m.map(|m| self.0.coefficient(&m)).unwrap_or_else(GaussianRational::zero)))
    }
}

fn config(aa38: &str) -> PyResult<Config> {
    let b: Aa38Branch = aa38.parse().map_err(err)?;
    Ok(Config::from_env().with_aa38(b))
}

fn theorem(t: &str) -> PyResult<Theorem> {
    t.parse().map_err(err)
}

/// Exact value of a named coefficient; `form` is "defining" or "closed".
#[pyfunction]
#[pyo3(signature = (name, n, form = "defining"))]
fn coefficient(name: &str, n: u32, form: &str) -> PyResult<PyGaussian> {
    let v = match form {
        "defining" => coeffs::coefficient_defining(name, n),
        "closed" => coeffs::coefficient_closed_form(name, n),
        other => return Err(err(format!("unknown form `{other}`"))),
    };
    v.map(PyGaussian).map_err(err)
}

#[pyfunction]
fn coefficient_names() -> Vec<&'static str> {
    coeffs::names().collect()
}

/// JSON report of the defining / closed / numeric sweep.
#[pyfunction]
#[pyo3(signature = (ns, names = None, precision_bits = 256, nodes = 4096))]
fn verify_coefficients(ns: Vec<u32>, names: Option<Vec<String>>, precision_bits: u32, nodes: usize) -> PyResult<String> {
    let names: Vec<String> = names.unwrap_or_else(|| coeffs::names().map(String::from).collect());
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let recs = coeffs::verify_sweep(&refs, &ns, precision_bits, nodes).map_err(err)?;
    let mut doc = ReportDocument::new(ReportConfig { precision_bits, nodes, ..ReportConfig::default() });
    for r in &recs {
        doc.push(r.to_json());
        doc.add_findings(r.findings());
    }
    Ok(doc.to_json())
}

#[pyfunction]
#[pyo3(signature = (expr, n = 4))]
fn pi_plus(expr: &str, n: u32) -> PyResult<String> {
    let s = parse_symbol(expr, &Scope::new(n)).map_err(err)?;
    Ok(s.pi_plus().map_err(err)?.to_text())
}

/// Trace over spinors of a word such as "CXI*CDXN*CXI".
#[pyfunction]
#[pyo3(signature = (word, n = 4))]
fn spinor_trace(word: &str, n: u32) -> PyResult<PyGaussian> {
    let letters: Vec<Letter> = if word.trim().is_empty() || word.trim() == "1" {
        Vec::new()
    } else {
        word.split('*').map(|t| Letter::from_tag(t.trim())).collect::<Result<_, _>>().map_err(err)?
    };
    let e = CliffordElement::from_word(&letters, GaussianRational::one());
    clifford::spinor_trace(&e, n).map(PyGaussian).map_err(err)
}

/// Boundary term of a theorem; variant "fixture" or "derived".
#[pyfunction]
#[pyo3(signature = (theorem_tag, n, variant = "fixture", aa38 = "printed"))]
fn boundary(theorem_tag: &str, n: u32, variant: &str, aa38: &str) -> PyResult<PyGeometric> {
    let v: Variant = variant.parse().map_err(err)?;
    assembler::boundary_term(theorem(theorem_tag)?, n, v, &config(aa38)?).map(PyGeometric).map_err(err)
}

#[pyfunction]
fn printed_theorem(theorem_tag: &str, n: u32) -> PyResult<PyGeometric> {
    assembler::printed_theorem(theorem(theorem_tag)?, n).map(PyGeometric).map_err(err)
}

#[pyfunction]
fn interior(n: u32) -> PyResult<PyGeometric> {
    assembler::interior_term(n).map(PyGeometric).map_err(err)
}

/// Reconciliation report as JSON.
#[pyfunction]
#[pyo3(signature = (theorem_tag, n, aa38 = "printed"))]
fn reconcile(theorem_tag: &str, n: u32, aa38: &str) -> PyResult<String> {
    let cfg = config(aa38)?;
    let r = assembler::reconcile(theorem(theorem_tag)?, n, &cfg).map_err(err)?;
    let mut doc = ReportDocument::new(ReportConfig { p0_rule: cfg.p0_rule.clone(), precision_bits: 0, nodes: 0, ..ReportConfig::default() });
    doc.push(r.to_json());
    doc.add_findings(r.findings.clone());
    Ok(doc.to_json())
}

/// Runs the command-line interface in-process: (exit code, stdout, stderr).
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = wres_core::cli::run_command(std::iter::once("wres-verifier".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn wres_verifier(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyGaussian>()?;
    m.add_class::<PyRatFunc>()?;
    m.add_class::<PyGeometric>()?;
    m.add_function(wrap_pyfunction!(coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(coefficient_names, m)?)?;
    m.add_function(wrap_pyfunction!(verify_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(pi_plus, m)?)?;
    m.add_function(wrap_pyfunction!(spinor_trace, m)?)?;
    m.add_function(wrap_pyfunction!(boundary, m)?)?;
    m.add_function(wrap_pyfunction!(printed_theorem, m)?)?;
    m.add_function(wrap_pyfunction!(interior, m)?)?;
    m.add_function(wrap_pyfunction!(reconcile, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
