//! Human-readable and structured reports for the command-line front end.
//!
//! Structured output is JSON. Every exact quantity is written as a `"p/q"`
//! string (polynomials as ascending lists of them); floating-point renderings
//! appear only under keys named `approx`.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::canonical::{generate, has_derived_singular};
use crate::echelon::{build_pi1, echelon_of, FiniteMatrix, PivotRule};
use crate::operator::DiffOperator;
use crate::problem::OutputFormat;
use crate::ratpoly::{display_rational, format_rational, rat, to_f64, Polynomial, Rational};
use crate::tau::{residual_report, solve_tau, TauProblem};
use crate::verify::check_all;
use crate::Result;

/// A rendered command result. `success` is false only when a check failed.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: Value,
    pub success: bool,
}

impl Report {
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Text => self.text.clone(),
            OutputFormat::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("reports are valid JSON");
                s.push('\n');
                s
            }
        }
    }
}

fn jrat(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

fn jpoly(p: &Polynomial) -> Value {
    Value::Array(p.coeffs().iter().map(jrat).collect())
}

fn jmatrix(m: &FiniteMatrix) -> Value {
    Value::Array(
        m.rows()
            .iter()
            .map(|r| Value::Array(r.iter().map(jrat).collect()))
            .collect(),
    )
}

fn fmt_set<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let v: Vec<String> = items.into_iter().map(|t| t.to_string()).collect();
    format!("{{{}}}", v.join(", "))
}

fn write_matrix(out: &mut String, title: &str, m: &FiniteMatrix) {
    let _ = writeln!(out, "{title} ({} x {}):", m.nrows(), m.ncols());
    if m.nrows() == 0 {
        out.push_str("  (empty)\n");
        return;
    }
    let cells: Vec<Vec<String>> = m
        .rows()
        .iter()
        .map(|r| r.iter().map(display_rational).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "  [ {} ]", line.join("  "));
    }
}

/// Everything known about the operator before canonical generation.
pub fn analyze(op: &DiffOperator) -> Report {
    let prof = op.profile();
    let pi1 = build_pi1(op, &prof);
    let ech = echelon_of(op, &prof, PivotRule::SmallestIndex);
    let index_ok = op.verify_height_index(ech.kernel_dim(), ech.deficiency());
    let derived = has_derived_singular(op, &ech);

    let mut t = String::new();
    let _ = writeln!(t, "operator: {op}");
    let _ = writeln!(t, "order ν = {}", op.order());
    let _ = writeln!(t, "height h = {}", prof.height);
    let _ = writeln!(t, "depth d = {}", prof.depth);
    let _ = writeln!(t, "ξ(n) = {}", prof.xi.display_in("n"));
    let _ = writeln!(t, "Ω = {}", fmt_set(&prof.omega));
    let _ = writeln!(t, "N = {}", prof.cutoff);
    write_matrix(&mut t, "top block Π₁", &pi1);
    write_matrix(&mut t, "reduced (pre-LREF)", &ech.reduced);
    t.push_str("standard basis:\n");
    for (k, p) in ech.standard_polys.iter().enumerate() {
        let _ = writeln!(t, "  e{k} = {p}");
    }
    t.push_str("σ:\n");
    for (row, sigma, _) in ech.nonzero_rows() {
        let _ = writeln!(t, "  row {row} -> {sigma}");
    }
    let _ = writeln!(t, "kernel basis: {}", fmt_set(ech.kernel_basis()));
    let _ = writeln!(t, "S = {}", fmt_set(&ech.inaccessible));
    let _ = writeln!(
        t,
        "index check card(S) - dim Ker = h: {} - {} = {} [{}]",
        ech.deficiency(),
        ech.kernel_dim(),
        prof.height,
        if index_ok { "ok" } else { "FAILED" }
    );
    let _ = writeln!(t, "derived-singular present: {}", if derived { "yes" } else { "no" });

    let json = json!({
        "command": "analyze",
        "operator": op.terms().map(|(i, p)| json!({"order": i, "coeff": jpoly(p)})).collect::<Vec<_>>(),
        "order": op.order(),
        "height": prof.height,
        "depth": prof.depth,
        "xi": jpoly(&prof.xi),
        "omega": prof.omega.iter().collect::<Vec<_>>(),
        "cutoff": prof.cutoff,
        "top_block": jmatrix(&pi1),
        "reduced": jmatrix(&ech.reduced),
        "zero_rows": ech.zero_rows,
        "standard_basis": ech.standard_polys.iter().map(jpoly).collect::<Vec<_>>(),
        "kernel": ech.kernel_basis().iter().map(jpoly).collect::<Vec<_>>(),
        "sigma": ech.nonzero_rows().map(|(row, s, _)| json!({"row": row, "sigma": s})).collect::<Vec<_>>(),
        "inaccessible": ech.inaccessible.iter().collect::<Vec<_>>(),
        "index_check": index_ok,
        "derived_singular_present": derived,
    });
    Report {
        text: t,
        json,
        success: true,
    }
}

/// Table of `(m, class, q_m, r_m)` for every accessible `m <= bound`.
pub fn canonical(op: &DiffOperator, bound: usize) -> Report {
    let ech = echelon_of(op, &op.profile(), PivotRule::SmallestIndex);
    let basis = generate(op, &ech, bound);
    let mut t = format!("canonical polynomials up to degree {bound}\n");
    let _ = writeln!(t, "S = {}", fmt_set(&basis.inaccessible));
    if basis.entries.is_empty() {
        t.push_str("(no accessible index up to the bound)\n");
    }
    for e in basis.entries.values() {
        let _ = writeln!(t, "m = {}  [{}]", e.index, e.class);
        let _ = writeln!(t, "  q = {}", e.q);
        let _ = writeln!(t, "  r = {}", e.r);
    }
    let rows: Vec<Value> = basis
        .entries
        .values()
        .map(|e| json!({"m": e.index, "class": e.class.name(), "q": jpoly(&e.q), "r": jpoly(&e.r)}))
        .collect();
    let json = json!({
        "command": "canonical",
        "bound": bound,
        "inaccessible": basis.inaccessible.iter().collect::<Vec<_>>(),
        "kernel": basis.null_cps.iter().map(jpoly).collect::<Vec<_>>(),
        "entries": rows,
    });
    Report {
        text: t,
        json,
        success: true,
    }
}

fn approx(q: &Rational) -> Value {
    json!({"exact": format_rational(q), "approx": to_f64(q)})
}

/// Solves at order `n` and appends the residual report, sampled at the
/// interval ends and midpoint.
pub fn solve(problem: &TauProblem, n: usize) -> Result<Report> {
    let sol = solve_tau(problem, n)?;
    let (a, b) = &problem.perturbation.interval;
    let points = [a.clone(), (a + b) / rat(2), b.clone()];
    let res = residual_report(&sol, problem, &points);

    let mut t = String::new();
    let _ = writeln!(t, "order n = {n}");
    let _ = writeln!(
        t,
        "perturbation: {} on [{}, {}]",
        problem.perturbation.kind.name(),
        display_rational(a),
        display_rational(b)
    );
    let _ = writeln!(t, "y_n = {}", sol.y);
    t.push_str("coefficients (exact, approx):\n");
    for (k, c) in sol.y.coeffs().iter().enumerate() {
        let _ = writeln!(t, "  x^{k}: {}  ~ {:.12e}", display_rational(c), to_f64(c));
    }
    t.push_str("τ:\n");
    if sol.taus.is_empty() {
        t.push_str("  (none)\n");
    }
    for (i, tau) in sol.taus.iter().enumerate() {
        let _ = writeln!(t, "  τ{} = {}  ~ {:.6e}", i + 1, display_rational(tau), to_f64(tau));
    }
    t.push_str("free constants:\n");
    if sol.free_constants.is_empty() {
        t.push_str("  (none)\n");
    }
    for (c, u) in sol.free_constants.iter().zip(&sol.kernel) {
        let _ = writeln!(t, "  {} for kernel element {u}", display_rational(c));
    }
    let _ = writeln!(t, "H_n = {}", sol.perturbation);
    let _ = writeln!(t, "system size = {}", sol.system_size);
    t.push_str("residual report:\n");
    let _ = writeln!(t, "  D y_n - f - H_n = {}", res.equation_residual);
    let conds: Vec<String> = res.condition_residuals.iter().map(display_rational).collect();
    let _ = writeln!(t, "  condition residuals = [{}]", conds.join(", "));
    let _ = writeln!(
        t,
        "  max |τ| = {}  ~ {:.6e}",
        display_rational(&res.max_abs_tau),
        to_f64(&res.max_abs_tau)
    );
    for (x, v) in &res.perturbation_values {
        let _ = writeln!(t, "  H_n({}) ~ {:.6e}", display_rational(x), to_f64(v));
    }
    let _ = writeln!(t, "  exact: {}", if res.is_exact() { "yes" } else { "no" });

    let json = json!({
        "command": "solve",
        "order": n,
        "perturbation": {
            "kind": problem.perturbation.kind.name(),
            "interval": [jrat(a), jrat(b)],
        },
        "y": jpoly(&sol.y),
        "y_approx": sol.y.coeffs().iter().map(to_f64).collect::<Vec<_>>(),
        "taus": sol.taus.iter().map(approx).collect::<Vec<_>>(),
        "free_constants": sol.free_constants.iter().map(jrat).collect::<Vec<_>>(),
        "kernel": sol.kernel.iter().map(jpoly).collect::<Vec<_>>(),
        "h_n": jpoly(&sol.perturbation),
        "system_size": sol.system_size,
        "residual": {
            "equation": jpoly(&res.equation_residual),
            "conditions": res.condition_residuals.iter().map(jrat).collect::<Vec<_>>(),
            "max_abs_tau": approx(&res.max_abs_tau),
            "h_n_samples": res.perturbation_values.iter().map(|(x, v)| json!({"x": jrat(x), "value": approx(v)})).collect::<Vec<_>>(),
            "exact": res.is_exact(),
        },
    });
    Ok(Report {
        text: t,
        json,
        success: true,
    })
}

/// Runs the self-check suite; the report fails if any check fails.
pub fn check(op: &DiffOperator, bound: usize) -> Report {
    let outcomes = check_all(op, bound);
    let success = outcomes.iter().all(|c| c.passed);
    let mut t = String::new();
    for c in &outcomes {
        let _ = writeln!(t, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    let _ = writeln!(
        t,
        "{}",
        if success {
            "all checks passed"
        } else {
            "some checks FAILED"
        }
    );
    let json = json!({
        "command": "check",
        "bound": bound,
        "passed": success,
        "checks": outcomes.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
    });
    Report { text: t, json, success }
}
