//! Line-oriented problem files.
//!
//! ```text
//! # (x^2+1) y'''' + (1-3x) y''' + 3 y'' = f
//! [operator]
//! d4 = 1, 0, 1
//! d3 = 1, -3
//! d2 = 3
//!
//! [rhs]
//! f = 0, 0, 0, 1
//!
//! [conditions]
//! y(0) = 0
//! y'(0) = 0
//! 2*y(1) + -1/2*y''(1) = 1
//! y3(-1) = 0
//!
//! [perturbation]
//! kind = chebyshev
//! interval = -1, 1
//!
//! [options]
//! bound = 10
//! order = 7
//! format = text
//! ```
//!
//! Polynomials are ascending coefficient lists; every number is an exact
//! rational `p/q` or an integer. A condition is a `+`-separated sum of terms
//! `[weight*]y<order>(point)`, where the order is written as primes, as
//! digits, or as `^(k)`.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::operator::DiffOperator;
use crate::ratpoly::{format_rational, parse_rational, rat, ClassicalKind, Polynomial, Rational};
use crate::tau::{Condition, ConditionTerm, Perturbation, TauProblem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "text" => Ok(OutputFormat::Text),
            "json" | "structured" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected text or json)")),
        }
    }
}

impl OutputFormat {
    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Text => "text",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub bound: Option<usize>,
    pub order: Option<usize>,
    pub format: Option<OutputFormat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemFile {
    pub operator: Vec<(usize, Polynomial)>,
    pub rhs: Polynomial,
    pub conditions: Vec<Condition>,
    pub perturbation: Perturbation,
    pub options: Options,
}

impl ProblemFile {
    pub fn diff_operator(&self) -> crate::Result<DiffOperator> {
        DiffOperator::from_terms(self.operator.iter().cloned())
    }

    pub fn to_problem(&self) -> crate::Result<TauProblem> {
        TauProblem::new(
            self.diff_operator()?,
            self.rhs.clone(),
            self.conditions.clone(),
            self.perturbation.clone(),
        )
    }

    pub fn from_problem(problem: &TauProblem) -> Self {
        Self {
            operator: problem.operator.terms().map(|(i, p)| (i, p.clone())).collect(),
            rhs: problem.rhs.clone(),
            conditions: problem.conditions.clone(),
            perturbation: problem.perturbation.clone(),
            options: Options::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Parser::default().run(text)
    }

    /// Canonical serialization; every rational is written as `p/q`.
    pub fn to_text(&self) -> String {
        let poly = |p: &Polynomial| {
            if p.is_zero() {
                "0/1".to_string()
            } else {
                p.to_strings().join(", ")
            }
        };
        let mut out = String::from("[operator]\n");
        for (i, p) in &self.operator {
            let _ = writeln!(out, "d{i} = {}", poly(p));
        }
        let _ = writeln!(out, "\n[rhs]\nf = {}", poly(&self.rhs));
        out.push_str("\n[conditions]\n");
        for c in &self.conditions {
            let terms: Vec<String> = c
                .terms
                .iter()
                .map(|t| {
                    format!(
                        "{}*y{}({})",
                        format_rational(&t.weight),
                        t.order,
                        format_rational(&t.point)
                    )
                })
                .collect();
            let _ = writeln!(out, "{} = {}", terms.join(" + "), format_rational(&c.rhs));
        }
        let (a, b) = &self.perturbation.interval;
        let _ = writeln!(
            out,
            "\n[perturbation]\nkind = {}\ninterval = {}, {}",
            self.perturbation.kind.name(),
            format_rational(a),
            format_rational(b)
        );
        let o = &self.options;
        if o.bound.is_some() || o.order.is_some() || o.format.is_some() {
            out.push_str("\n[options]\n");
            if let Some(b) = o.bound {
                let _ = writeln!(out, "bound = {b}");
            }
            if let Some(n) = o.order {
                let _ = writeln!(out, "order = {n}");
            }
            if let Some(f) = o.format {
                let _ = writeln!(out, "format = {}", f.name());
            }
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Operator,
    Rhs,
    Conditions,
    Perturbation,
    Options,
}

/// Text slice with its 1-based column in the current line.
#[derive(Clone, Copy)]
struct Span<'a> {
    text: &'a str,
    column: usize,
}

impl<'a> Span<'a> {
    fn trim(self) -> Self {
        let lead = self.text.len() - self.text.trim_start().len();
        Span {
            text: self.text.trim(),
            column: self.column + lead,
        }
    }

    fn split_once(self, pat: char) -> Option<(Span<'a>, Span<'a>)> {
        let k = self.text.find(pat)?;
        Some((
            Span {
                text: &self.text[..k],
                column: self.column,
            },
            Span {
                text: &self.text[k + 1..],
                column: self.column + k + 1,
            },
        ))
    }

    fn split(self, pat: char) -> Vec<Span<'a>> {
        let mut out = Vec::new();
        let mut rest = self;
        while let Some((head, tail)) = rest.split_once(pat) {
            out.push(head);
            rest = tail;
        }
        out.push(rest);
        out
    }
}

#[derive(Default)]
struct Parser {
    line: usize,
    operator: Vec<(usize, Polynomial)>,
    rhs: Option<Polynomial>,
    conditions: Vec<Condition>,
    kind: Option<ClassicalKind>,
    interval: Option<(Rational, Rational)>,
    options: Options,
}

impl Parser {
    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column,
            message: message.into(),
        }
    }

    fn rational(&self, s: Span) -> Result<Rational, ParseError> {
        let s = s.trim();
        parse_rational(s.text).map_err(|_| self.err(s.column, format!("invalid rational `{}`", s.text)))
    }

    fn natural(&self, s: Span) -> Result<usize, ParseError> {
        let s = s.trim();
        s.text
            .parse()
            .map_err(|_| self.err(s.column, format!("expected a natural number, got `{}`", s.text)))
    }

    fn poly(&self, s: Span) -> Result<Polynomial, ParseError> {
        let s = s.trim();
        if s.text.is_empty() {
            return Err(self.err(s.column, "empty coefficient list"));
        }
        let coeffs = s
            .split(',')
            .into_iter()
            .map(|c| self.rational(c))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Polynomial::new(coeffs))
    }

    fn run(mut self, text: &str) -> Result<ProblemFile, ParseError> {
        let mut section = Section::None;
        let mut seen_operator = false;
        for (k, raw) in text.lines().enumerate() {
            self.line = k + 1;
            let content = raw.split('#').next().unwrap_or("");
            let span = Span {
                text: content,
                column: 1,
            }
            .trim();
            if span.text.is_empty() {
                continue;
            }
            if let Some(name) = span.text.strip_prefix('[') {
                let Some(name) = name.strip_suffix(']') else {
                    return Err(self.err(span.column, "unterminated section header"));
                };
                section = match name.trim() {
                    "operator" => {
                        seen_operator = true;
                        Section::Operator
                    }
                    "rhs" => Section::Rhs,
                    "conditions" => Section::Conditions,
                    "perturbation" => Section::Perturbation,
                    "options" => Section::Options,
                    other => return Err(self.err(span.column + 1, format!("unknown section `{other}`"))),
                };
                continue;
            }
            match section {
                Section::None => return Err(self.err(span.column, "content before the first section")),
                Section::Conditions => {
                    let c = self.condition(span)?;
                    self.conditions.push(c);
                }
                _ => {
                    let Some((key, value)) = span.split_once('=') else {
                        return Err(self.err(span.column, "expected `key = value`"));
                    };
                    self.key_value(section, key.trim(), value)?;
                }
            }
        }
        self.line = 0;
        if !seen_operator || self.operator.is_empty() {
            return Err(self.err(0, "missing [operator] section"));
        }
        let (a, b) = self.interval.take().unwrap_or((rat(-1), rat(1)));
        Ok(ProblemFile {
            operator: self.operator,
            rhs: self.rhs.unwrap_or_default(),
            conditions: self.conditions,
            perturbation: Perturbation {
                kind: self.kind.unwrap_or(ClassicalKind::ChebyshevFirst),
                interval: (a, b),
            },
            options: self.options,
        })
    }

    fn key_value(&mut self, section: Section, key: Span, value: Span) -> Result<(), ParseError> {
        match section {
            Section::Operator => {
                let order = key
                    .text
                    .strip_prefix('d')
                    .and_then(|o| o.parse::<usize>().ok())
                    .ok_or_else(|| self.err(key.column, format!("expected `d<order>`, got `{}`", key.text)))?;
                if self.operator.iter().any(|(o, _)| *o == order) {
                    return Err(self.err(key.column, format!("duplicate coefficient for d{order}")));
                }
                let p = self.poly(value)?;
                self.operator.push((order, p));
            }
            Section::Rhs => match key.text {
                "f" => self.rhs = Some(self.poly(value)?),
                other => return Err(self.err(key.column, format!("unknown rhs key `{other}`"))),
            },
            Section::Perturbation => match key.text {
                "kind" => {
                    let v = value.trim();
                    self.kind = Some(
                        ClassicalKind::from_name(v.text)
                            .ok_or_else(|| self.err(v.column, format!("unknown perturbation kind `{}`", v.text)))?,
                    );
                }
                "interval" => {
                    let Some((a, b)) = value.split_once(',') else {
                        return Err(self.err(value.column, "expected `a, b`"));
                    };
                    let (a, b) = (self.rational(a)?, self.rational(b)?);
                    if a >= b {
                        return Err(self.err(value.trim().column, "interval must satisfy a < b"));
                    }
                    self.interval = Some((a, b));
                }
                other => return Err(self.err(key.column, format!("unknown perturbation key `{other}`"))),
            },
            Section::Options => match key.text {
                "bound" => self.options.bound = Some(self.natural(value)?),
                "order" => self.options.order = Some(self.natural(value)?),
                "format" => {
                    let v = value.trim();
                    self.options.format = Some(v.text.parse().map_err(|e: String| self.err(v.column, e))?);
                }
                other => return Err(self.err(key.column, format!("unknown option `{other}`"))),
            },
            Section::None | Section::Conditions => unreachable!(),
        }
        Ok(())
    }

    fn condition(&self, span: Span) -> Result<Condition, ParseError> {
        let Some((lhs, rhs)) = span.split_once('=') else {
            return Err(self.err(span.column, "expected `terms = value`"));
        };
        let terms = lhs
            .split('+')
            .into_iter()
            .map(|t| self.term(t.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Condition {
            terms,
            rhs: self.rational(rhs)?,
        })
    }

    /// `[weight*]y<order>(point)`
    fn term(&self, t: Span) -> Result<ConditionTerm, ParseError> {
        if t.text.is_empty() {
            return Err(self.err(t.column, "empty condition term"));
        }
        let (weight, body) = match t.split_once('*') {
            Some((w, b)) => (self.rational(w)?, b.trim()),
            None => (rat(1), t),
        };
        let Some(rest) = body.text.strip_prefix('y') else {
            return Err(self.err(body.column, format!("expected `y`, got `{}`", body.text)));
        };
        let open = rest
            .rfind('(')
            .ok_or_else(|| self.err(body.column, "missing `(point)`"))?;
        let Some(point_text) = rest[open + 1..].strip_suffix(')') else {
            return Err(self.err(body.column + 1 + open, "missing closing `)`"));
        };
        let order_text = &rest[..open];
        let order = if order_text.is_empty() {
            0
        } else if order_text.chars().all(|c| c == '\'') {
            order_text.len()
        } else if let Some(k) = order_text.strip_prefix("^(").and_then(|k| k.strip_suffix(')')) {
            self.natural(Span {
                text: k,
                column: body.column + 3,
            })?
        } else {
            self.natural(Span {
                text: order_text,
                column: body.column + 1,
            })?
        };
        let point = self.rational(Span {
            text: point_text,
            column: body.column + 2 + open,
        })?;
        Ok(ConditionTerm { point, order, weight })
    }
}
