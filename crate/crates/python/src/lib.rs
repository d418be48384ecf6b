//! Python bindings for `rtau`.
//!
//! Polynomials cross the boundary as ascending lists of exact `"p/q"`
//! strings; rationals as single strings. Integers written as `"3"` are
//! accepted on input.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rtau::canonical::{self, CanonicalClass};
use rtau::echelon::{echelon_of, EchelonResult, PivotRule};
use rtau::operator::DiffOperator;
use rtau::problem::ProblemFile;
use rtau::ratpoly::{format_rational, parse_rational, ClassicalKind, Polynomial, Rational};
use rtau::tau::{self, Condition, ConditionTerm, Perturbation};

create_exception!(
    pyrtau,
    RtauError,
    PyValueError,
    "Domain error raised by the rtau library."
);
create_exception!(pyrtau, ParseError, PyValueError, "Malformed problem file or number.");

fn domain(e: rtau::Error) -> PyErr {
    RtauError::new_err(e.to_string())
}

fn parse_rat(s: &str) -> PyResult<Rational> {
    parse_rational(s).map_err(|e| ParseError::new_err(e.to_string()))
}

fn parse_poly(coeffs: &[String]) -> PyResult<Polynomial> {
    Polynomial::from_strings(coeffs).map_err(|e| ParseError::new_err(e.to_string()))
}

fn poly_out(p: &Polynomial) -> Vec<String> {
    p.to_strings()
}

fn rats_out(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn pivot_rule(name: &str) -> PyResult<PivotRule> {
    match name {
        "smallest" => Ok(PivotRule::SmallestIndex),
        "largest" => Ok(PivotRule::LargestIndex),
        other => Err(PyValueError::new_err(format!(
            "unknown pivot rule `{other}` (expected smallest or largest)"
        ))),
    }
}

/// Linear differential operator `sum_i p_i(x) d^i/dx^i`.
#[pyclass(name = "Operator", module = "pyrtau", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyOperator {
    inner: DiffOperator,
}

#[pymethods]
impl PyOperator {
    /// Builds from coefficient polynomials `p_0, ..., p_nu`.
    #[new]
    fn new(coeffs: Vec<Vec<String>>) -> PyResult<Self> {
        let polys = coeffs.iter().map(|c| parse_poly(c)).collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: DiffOperator::new(polys).map_err(domain)?,
        })
    }

    /// Builds from `(derivative order, coefficients)` pairs.
    #[staticmethod]
    fn from_terms(terms: Vec<(usize, Vec<String>)>) -> PyResult<Self> {
        let terms = terms
            .into_iter()
            .map(|(i, c)| Ok((i, parse_poly(&c)?)))
            .collect::<PyResult<Vec<_>>>()?;
        Ok(Self {
            inner: DiffOperator::from_terms(terms).map_err(domain)?,
        })
    }

    #[getter]
    fn order(&self) -> usize {
        self.inner.order()
    }

    #[getter]
    fn height(&self) -> i64 {
        self.inner.height()
    }

    #[getter]
    fn depth(&self) -> i64 {
        self.inner.depth()
    }

    /// Leading-diagonal polynomial in `n`.
    #[getter]
    fn xi(&self) -> Vec<String> {
        poly_out(&self.inner.xi())
    }

    /// Natural roots of `xi`.
    #[getter]
    fn omega(&self) -> Vec<u64> {
        self.inner.profile().omega.into_iter().collect()
    }

    /// Largest natural root of `xi`, or -1.
    #[getter]
    fn cutoff(&self) -> i64 {
        self.inner.profile().cutoff
    }

    #[getter]
    fn finite_width(&self) -> usize {
        self.inner.profile().finite_width()
    }

    #[getter]
    fn coeffs(&self) -> Vec<Vec<String>> {
        self.inner.coeffs().iter().map(poly_out).collect()
    }

    fn apply(&self, poly: Vec<String>) -> PyResult<Vec<String>> {
        Ok(poly_out(&self.inner.apply(&parse_poly(&poly)?)))
    }

    fn monomial_image(&self, n: usize) -> Vec<String> {
        poly_out(&self.inner.monomial_image(n))
    }

    #[pyo3(signature = (rule = "smallest"))]
    fn echelon(&self, rule: &str) -> PyResult<PyEchelon> {
        let inner = echelon_of(&self.inner, &self.inner.profile(), pivot_rule(rule)?);
        Ok(PyEchelon { inner })
    }

    /// Canonical polynomials for every accessible degree up to `bound`.
    #[pyo3(signature = (bound, rule = "smallest"))]
    fn canonical(&self, bound: usize, rule: &str) -> PyResult<PyCanonicalBasis> {
        let ech = echelon_of(&self.inner, &self.inner.profile(), pivot_rule(rule)?);
        Ok(PyCanonicalBasis {
            inner: canonical::generate(&self.inner, &ech, bound),
        })
    }

    /// Runs the self-check suite and returns `(name, passed, detail)` triples.
    #[pyo3(signature = (bound = 10))]
    fn check(&self, bound: usize) -> Vec<(String, bool, String)> {
        rtau::verify::check_all(&self.inner, bound)
            .into_iter()
            .map(|c| (c.name, c.passed, c.detail))
            .collect()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Operator({})", self.inner)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Reduced finite block with its bases and inaccessible degrees.
#[pyclass(name = "Echelon", module = "pyrtau", frozen)]
struct PyEchelon {
    inner: EchelonResult,
}

#[pymethods]
impl PyEchelon {
    #[getter]
    fn reduced(&self) -> Vec<Vec<String>> {
        self.inner.reduced.rows().iter().map(|r| rats_out(r)).collect()
    }

    #[getter]
    fn standard_basis(&self) -> Vec<Vec<String>> {
        self.inner.standard_polys.iter().map(poly_out).collect()
    }

    #[getter]
    fn kernel(&self) -> Vec<Vec<String>> {
        self.inner.kernel_basis().iter().map(poly_out).collect()
    }

    #[getter]
    fn zero_rows(&self) -> usize {
        self.inner.zero_rows
    }

    #[getter]
    fn sigma(&self) -> Vec<usize> {
        self.inner.sigma.clone()
    }

    #[getter]
    fn inaccessible(&self) -> Vec<usize> {
        self.inner.inaccessible.iter().copied().collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Echelon(zero_rows={}, sigma={:?}, inaccessible={:?})",
            self.inner.zero_rows, self.inner.sigma, self.inner.inaccessible
        )
    }
}

/// Canonical polynomials `q_m` with residuals `r_m`, `D q_m = x^m + r_m`.
#[pyclass(name = "CanonicalBasis", module = "pyrtau", frozen)]
struct PyCanonicalBasis {
    inner: canonical::CanonicalBasis,
}

impl PyCanonicalBasis {
    fn entry(&self, m: usize) -> PyResult<&canonical::CanonicalEntry> {
        self.inner
            .get(m)
            .ok_or_else(|| PyValueError::new_err(format!("no canonical polynomial of index {m}")))
    }
}

#[pymethods]
impl PyCanonicalBasis {
    #[getter]
    fn indices(&self) -> Vec<usize> {
        self.inner.indices().collect()
    }

    #[getter]
    fn bound(&self) -> usize {
        self.inner.bound
    }

    #[getter]
    fn kernel(&self) -> Vec<Vec<String>> {
        self.inner.null_cps.iter().map(poly_out).collect()
    }

    #[getter]
    fn inaccessible(&self) -> Vec<usize> {
        self.inner.inaccessible.iter().copied().collect()
    }

    fn q(&self, m: usize) -> PyResult<Vec<String>> {
        Ok(poly_out(&self.entry(m)?.q))
    }

    fn r(&self, m: usize) -> PyResult<Vec<String>> {
        Ok(poly_out(&self.entry(m)?.r))
    }

    /// One of `primary_generic`, `primary_singular`, `derived_singular`.
    fn class_of(&self, m: usize) -> PyResult<&'static str> {
        Ok(self.entry(m)?.class.name())
    }

    /// `(m, class, q_m, r_m)` rows.
    fn table(&self) -> Vec<(usize, &'static str, Vec<String>, Vec<String>)> {
        self.inner
            .entries
            .values()
            .map(|e| (e.index, e.class.name(), poly_out(&e.q), poly_out(&e.r)))
            .collect()
    }

    fn has_derived_singular(&self) -> bool {
        self.inner
            .entries
            .values()
            .any(|e| e.class == CanonicalClass::DerivedSingular)
    }

    /// Solvability conditions on a generic right-hand side of the given degree,
    /// as `(s, coefficients of g_0..g_degree)` pairs.
    fn stmc(&self, degree: usize) -> PyResult<Vec<(usize, Vec<String>)>> {
        let eqs = tau::stmc(&self.inner, &tau::SymbolicPoly::generic(degree)).map_err(domain)?;
        Ok(eqs.into_iter().map(|(s, e)| (s, rats_out(&e.coeffs))).collect())
    }

    /// All polynomial solutions of `D y = g`: `(particular, kernel)`.
    fn exact_solve(&self, g: Vec<String>) -> PyResult<(Vec<String>, Vec<Vec<String>>)> {
        let sol = tau::exact_solve(&self.inner, &parse_poly(&g)?).map_err(domain)?;
        Ok((poly_out(&sol.particular), sol.kernel.iter().map(poly_out).collect()))
    }
}

/// Tau-perturbed problem `D y = f + H_n` with supplementary conditions.
#[pyclass(name = "TauProblem", module = "pyrtau", frozen)]
struct PyTauProblem {
    inner: tau::TauProblem,
}

type TermIn = (String, usize, String);

#[pymethods]
impl PyTauProblem {
    /// `conditions` is a list of `(terms, rhs)`, each term a
    /// `(point, derivative order, weight)` triple.
    #[new]
    #[pyo3(signature = (operator, rhs, conditions, kind = "chebyshev", interval = ("-1".to_string(), "1".to_string())))]
    fn new(
        operator: &PyOperator,
        rhs: Vec<String>,
        conditions: Vec<(Vec<TermIn>, String)>,
        kind: &str,
        interval: (String, String),
    ) -> PyResult<Self> {
        let kind = ClassicalKind::from_name(kind)
            .ok_or_else(|| PyValueError::new_err(format!("unknown perturbation kind `{kind}`")))?;
        let conditions = conditions
            .into_iter()
            .map(|(terms, rhs)| {
                let terms = terms
                    .into_iter()
                    .map(|(point, order, weight)| {
                        Ok(ConditionTerm {
                            point: parse_rat(&point)?,
                            order,
                            weight: parse_rat(&weight)?,
                        })
                    })
                    .collect::<PyResult<Vec<_>>>()?;
                Ok(Condition {
                    terms,
                    rhs: parse_rat(&rhs)?,
                })
            })
            .collect::<PyResult<Vec<_>>>()?;
        let perturbation = Perturbation {
            kind,
            interval: (parse_rat(&interval.0)?, parse_rat(&interval.1)?),
        };
        let inner = tau::TauProblem::new(operator.inner.clone(), parse_poly(&rhs)?, conditions, perturbation)
            .map_err(domain)?;
        Ok(Self { inner })
    }

    /// Parses the sectioned problem-file format.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let file = ProblemFile::parse(text).map_err(|e| ParseError::new_err(e.to_string()))?;
        Ok(Self {
            inner: file.to_problem().map_err(domain)?,
        })
    }

    fn to_text(&self) -> String {
        ProblemFile::from_problem(&self.inner).to_text()
    }

    #[getter]
    fn operator(&self) -> PyOperator {
        PyOperator {
            inner: self.inner.operator.clone(),
        }
    }

    #[getter]
    fn rhs(&self) -> Vec<String> {
        poly_out(&self.inner.rhs)
    }

    #[getter]
    fn tau_count(&self) -> usize {
        tau::tau_count(&self.inner.operator)
    }

    fn solve(&self, py: Python<'_>, n: usize) -> PyResult<PyTauSolution> {
        let problem = &self.inner;
        let sol = py.detach(|| tau::solve_tau(problem, n)).map_err(domain)?;
        let residual = tau::residual_report(&sol, problem, &[]);
        Ok(PyTauSolution {
            inner: sol,
            exact: residual.is_exact(),
        })
    }
}

#[pyclass(name = "TauSolution", module = "pyrtau", frozen)]
struct PyTauSolution {
    inner: tau::TauSolution,
    exact: bool,
}

#[pymethods]
impl PyTauSolution {
    #[getter]
    fn order(&self) -> usize {
        self.inner.order
    }

    #[getter]
    fn y(&self) -> Vec<String> {
        poly_out(&self.inner.y)
    }

    /// `y_n` coefficients as floats (approximate).
    #[getter]
    fn y_approx(&self) -> Vec<f64> {
        self.inner.y.coeffs().iter().map(rtau::ratpoly::to_f64).collect()
    }

    #[getter]
    fn taus(&self) -> Vec<String> {
        rats_out(&self.inner.taus)
    }

    #[getter]
    fn free_constants(&self) -> Vec<String> {
        rats_out(&self.inner.free_constants)
    }

    #[getter]
    fn kernel(&self) -> Vec<Vec<String>> {
        self.inner.kernel.iter().map(poly_out).collect()
    }

    /// `H_n`
    #[getter]
    fn perturbation(&self) -> Vec<String> {
        poly_out(&self.inner.perturbation)
    }

    #[getter]
    fn system_size(&self) -> usize {
        self.inner.system_size
    }

    /// Whether `D y_n - f - H_n` vanishes and every condition holds exactly.
    #[getter]
    fn exact(&self) -> bool {
        self.exact
    }

    /// Evaluates `y_n` exactly at a rational point.
    fn eval(&self, x: &str) -> PyResult<String> {
        Ok(format_rational(&self.inner.y.eval(&parse_rat(x)?)))
    }

    fn __repr__(&self) -> String {
        format!("TauSolution(order={}, y={})", self.inner.order, self.inner.y)
    }
}

/// Runs a CLI-style report (`analyze`, `canonical`, `solve`, `check`) on
/// problem-file text and returns its JSON rendering.
#[pyfunction]
#[pyo3(signature = (command, text, bound = None, order = None))]
fn report_json(command: &str, text: &str, bound: Option<usize>, order: Option<usize>) -> PyResult<String> {
    let file = ProblemFile::parse(text).map_err(|e| ParseError::new_err(e.to_string()))?;
    let op = file.diff_operator().map_err(domain)?;
    let bound = bound.or(file.options.bound).unwrap_or(10);
    let report = match command {
        "analyze" => rtau::report::analyze(&op),
        "canonical" => rtau::report::canonical(&op, bound),
        "check" => rtau::report::check(&op, bound),
        "solve" => {
            let n = order
                .or(file.options.order)
                .ok_or_else(|| PyValueError::new_err("solve needs an order"))?;
            rtau::report::solve(&file.to_problem().map_err(domain)?, n).map_err(domain)?
        }
        other => return Err(PyValueError::new_err(format!("unknown command `{other}`"))),
    };
    Ok(report.render(rtau::problem::OutputFormat::Json))
}

/// Chebyshev or Legendre polynomial of degree `k` shifted to `[a, b]`.
#[pyfunction]
#[pyo3(signature = (kind, k, a = "-1", b = "1"))]
fn classical_poly(kind: &str, k: usize, a: &str, b: &str) -> PyResult<Vec<String>> {
    let kind = ClassicalKind::from_name(kind).ok_or_else(|| PyValueError::new_err(format!("unknown kind `{kind}`")))?;
    let p = rtau::ratpoly::classical_poly(kind, k, &parse_rat(a)?, &parse_rat(b)?).map_err(domain)?;
    Ok(poly_out(&p))
}

#[pymodule]
fn pyrtau(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyOperator>()?;
    m.add_class::<PyEchelon>()?;
    m.add_class::<PyCanonicalBasis>()?;
    m.add_class::<PyTauProblem>()?;
    m.add_class::<PyTauSolution>()?;
    m.add_function(wrap_pyfunction!(report_json, m)?)?;
    m.add_function(wrap_pyfunction!(classical_poly, m)?)?;
    m.add("RtauError", m.py().get_type::<RtauError>())?;
    m.add("ParseError", m.py().get_type::<ParseError>())?;
    Ok(())
}
