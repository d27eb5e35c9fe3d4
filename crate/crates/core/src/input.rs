//! Ring files and ideal expressions.
//!
//! A ring file is a sequence of `;`-terminated statements; `#` starts a
//! comment that runs to the end of the line.
//!
//! ```text
//! char <int>;                      # 0 for the rationals, otherwise a prime
//! vars <name> <name> ...;
//! mod <poly>, <poly>, ...;         # defining ideal, optional
//! dim <int>;                       # dimension override, optional
//! cm true|false;                   # Cohen-Macaulay assertion, optional
//! ideal <Name> = <poly>, ...;      # any number of named ideals
//! ```
//!
//! `char` and `vars` must precede any statement containing polynomials.
//!
//! Ideal expressions combine generator lists `(f, g, ...)`, named ideals and
//! the maximal ideal `m` with `+`, `*` and `^k`. Inside parentheses a
//! generator list is tried before a nested expression.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Field, FieldSpec};
use crate::poly::parse::Cursor;
use crate::poly::{ParseError, ParsedPolynomial, TermOrder};
use crate::rings::{make_ring, IdealHandle, Limits, RingError, RingExt, RingOptions, RingPresentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{line}:{column}: {message}")]
    Semantic {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// The content of a ring file, independent of any field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingFile {
    pub field: FieldSpec,
    pub variables: Vec<String>,
    pub defining: Vec<ParsedPolynomial>,
    pub dim: Option<usize>,
    pub cm: Option<bool>,
    pub ideals: Vec<(String, Vec<ParsedPolynomial>)>,
}

fn semantic(at: (usize, usize), message: impl Into<String>) -> InputError {
    InputError::Semantic {
        line: at.0,
        column: at.1,
        message: message.into(),
    }
}

/// Blanks out comments while keeping every other character in place.
fn strip_comments(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_comment = false;
    for c in text.chars() {
        match c {
            '\n' => {
                in_comment = false;
                out.push('\n');
            }
            '#' => {
                in_comment = true;
                out.push(' ');
            }
            _ if in_comment => out.push(' '),
            _ => out.push(c),
        }
    }
    out
}

fn poly_list(cur: &mut Cursor<'_>, vars: &[String]) -> Result<Vec<ParsedPolynomial>, ParseError> {
    let mut out = vec![cur.polynomial(vars)?];
    while cur.eat(',') {
        out.push(cur.polynomial(vars)?);
    }
    Ok(out)
}

/// Every coefficient must have a denominator that is invertible in `field`.
fn check_coefficients(
    field: FieldSpec,
    polys: &[ParsedPolynomial],
    at: (usize, usize),
) -> Result<(), InputError> {
    let FieldSpec::Prime(p) = field else {
        return Ok(());
    };
    let p = num_bigint::BigInt::from(p);
    for f in polys {
        for (_, c) in f.terms() {
            if num_integer::Integer::mod_floor(c.denom(), &p) == num_bigint::BigInt::from(0) {
                return Err(semantic(at, format!("denominator {} vanishes modulo {p}", c.denom())));
            }
        }
    }
    Ok(())
}

impl RingFile {
    pub fn parse(text: &str) -> Result<RingFile, InputError> {
        let clean = strip_comments(text);
        let mut cur = Cursor::new(&clean);
        let mut field = None;
        let mut variables: Option<Vec<String>> = None;
        let mut defining = None;
        let mut dim = None;
        let mut cm = None;
        let mut ideals: Vec<(String, Vec<ParsedPolynomial>)> = Vec::new();
        loop {
            cur.skip_ws();
            if cur.at_end() {
                break;
            }
            let at = cur.position();
            let key = cur
                .identifier()
                .ok_or_else(|| cur.error("expected a statement keyword"))?;
            let once = |seen: bool| {
                if seen {
                    Err(semantic(at, format!("'{key}' declared twice")))
                } else {
                    Ok(())
                }
            };
            let needs_ring = |field: &Option<FieldSpec>, vars: &Option<Vec<String>>| {
                if field.is_none() || vars.is_none() {
                    Err(semantic(at, format!("'{key}' must come after 'char' and 'vars'")))
                } else {
                    Ok(())
                }
            };
            match key.as_str() {
                "char" => {
                    once(field.is_some())?;
                    let c = cur.unsigned()?;
                    let spec = FieldSpec::from_characteristic(c)
                        .map_err(|_| semantic(at, format!("characteristic {c} is neither 0 nor a prime")))?;
                    field = Some(spec);
                }
                "vars" => {
                    once(variables.is_some())?;
                    let mut vs = Vec::new();
                    while let Some(v) = cur.identifier() {
                        vs.push(v);
                    }
                    if vs.is_empty() {
                        return Err(cur.error("expected variable names").into());
                    }
                    variables = Some(vs);
                }
                "mod" => {
                    once(defining.is_some())?;
                    needs_ring(&field, &variables)?;
                    let polys = poly_list(&mut cur, variables.as_deref().unwrap())?;
                    check_coefficients(field.unwrap(), &polys, at)?;
                    defining = Some(polys);
                }
                "dim" => {
                    once(dim.is_some())?;
                    dim = Some(cur.unsigned()? as usize);
                }
                "cm" => {
                    once(cm.is_some())?;
                    let vat = cur.clone();
                    cm = Some(match cur.identifier().as_deref() {
                        Some("true") => true,
                        Some("false") => false,
                        _ => return Err(vat.error("expected 'true' or 'false'").into()),
                    });
                }
                "ideal" => {
                    needs_ring(&field, &variables)?;
                    let name = cur.identifier().ok_or_else(|| cur.error("expected an ideal name"))?;
                    if ideals.iter().any(|(n, _)| *n == name) {
                        return Err(semantic(at, format!("ideal '{name}' declared twice")));
                    }
                    cur.expect('=')?;
                    let polys = poly_list(&mut cur, variables.as_deref().unwrap())?;
                    check_coefficients(field.unwrap(), &polys, at)?;
                    ideals.push((name, polys));
                }
                other => return Err(semantic(at, format!("unknown statement '{other}'"))),
            }
            cur.expect(';')?;
        }
        let end = cur.position();
        let field = field.ok_or_else(|| semantic(end, "missing 'char' statement"))?;
        let variables = variables.ok_or_else(|| semantic(end, "missing 'vars' statement"))?;
        Ok(RingFile {
            field,
            variables,
            defining: defining.unwrap_or_default(),
            dim,
            cm,
            ideals,
        })
    }

    /// Canonical text; parsing it gives back an equal `RingFile`.
    pub fn to_text(&self) -> String {
        let vars = &self.variables;
        let list = |ps: &[ParsedPolynomial]| {
            ps.iter()
                .map(|p| p.format_with(vars))
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut out = format!("char {};\nvars {};\n", self.field.characteristic(), vars.join(" "));
        if !self.defining.is_empty() {
            out.push_str(&format!("mod {};\n", list(&self.defining)));
        }
        if let Some(d) = self.dim {
            out.push_str(&format!("dim {d};\n"));
        }
        if let Some(cm) = self.cm {
            out.push_str(&format!("cm {cm};\n"));
        }
        for (name, gens) in &self.ideals {
            out.push_str(&format!("ideal {name} = {};\n", list(gens)));
        }
        out
    }

    /// Builds the ring over `field`, which must match the declared
    /// characteristic, together with its named ideals in file order.
    pub fn build<F: Field>(
        &self,
        field: F,
        name: Option<String>,
        limits: Limits,
    ) -> Result<ParsedInput<F>, InputError> {
        if field.spec() != self.field {
            return Err(semantic(
                (0, 0),
                format!("ring file declares {} but {} was requested", self.field, field.spec()),
            ));
        }
        let order = TermOrder::DegRevLex;
        let defining = self
            .defining
            .iter()
            .map(|p| p.to_polynomial(&field, order))
            .collect::<Result<Vec<_>, _>>()
            .map_err(RingError::from)?;
        let options = RingOptions {
            name,
            dim: self.dim,
            cm: self.cm.unwrap_or(false),
            limits,
        };
        let ring = make_ring(field.clone(), self.variables.clone(), defining, order, options)?;
        let mut ideals = Vec::with_capacity(self.ideals.len());
        for (n, gens) in &self.ideals {
            let gens = gens
                .iter()
                .map(|p| p.to_polynomial(&field, order))
                .collect::<Result<Vec<_>, _>>()
                .map_err(RingError::from)?;
            ideals.push((n.clone(), ring.ideal(gens)?));
        }
        Ok(ParsedInput { ring, ideals })
    }
}

/// The ring file describing `ring`, for embedding in replayable reports.
pub fn ring_file_of<F: Field>(ring: &RingPresentation<F>) -> RingFile {
    RingFile {
        field: ring.field().spec(),
        variables: ring.variables().to_vec(),
        defining: ring.defining().iter().map(ParsedPolynomial::from_polynomial).collect(),
        dim: (ring.dim_source() == crate::rings::DimSource::Override).then_some(ring.dim()),
        cm: Some(ring.cm_asserted()),
        ideals: Vec::new(),
    }
}

/// A constructed ring with the ideals declared next to it.
#[derive(Debug, Clone)]
pub struct ParsedInput<F: Field> {
    pub ring: Arc<RingPresentation<F>>,
    pub ideals: Vec<(String, IdealHandle<F>)>,
}

impl<F: Field> ParsedInput<F> {
    pub fn ideal(&self, name: &str) -> Option<&IdealHandle<F>> {
        self.ideals.iter().find(|(n, _)| n == name).map(|(_, i)| i)
    }

    /// Reads an ideal expression against this ring and its named ideals.
    pub fn eval(&self, text: &str) -> Result<IdealHandle<F>, InputError> {
        let names: Vec<String> = self.ideals.iter().map(|(n, _)| n.clone()).collect();
        let expr = parse_ideal_expr(text, self.ring.variables(), &names)?;
        let named: HashMap<&str, &IdealHandle<F>> =
            self.ideals.iter().map(|(n, i)| (n.as_str(), i)).collect();
        expr.evaluate(&self.ring, &named)
    }
}

/// Parses a ring file over the field it declares, as a concrete `F`.
pub fn parse_input<F: Field>(text: &str, field: F) -> Result<ParsedInput<F>, InputError> {
    RingFile::parse(text)?.build(field, None, Limits::default())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdealExpr {
    Generators(Vec<ParsedPolynomial>),
    Named(String),
    Maximal,
    Sum(Box<IdealExpr>, Box<IdealExpr>),
    Product(Box<IdealExpr>, Box<IdealExpr>),
    Power(Box<IdealExpr>, u32),
}

impl IdealExpr {
    pub fn evaluate<F: Field>(
        &self,
        ring: &Arc<RingPresentation<F>>,
        named: &HashMap<&str, &IdealHandle<F>>,
    ) -> Result<IdealHandle<F>, InputError> {
        Ok(match self {
            IdealExpr::Generators(gens) => {
                let polys = gens
                    .iter()
                    .map(|p| p.to_polynomial(ring.field(), ring.order()))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(RingError::from)?;
                ring.ideal(polys)?
            }
            IdealExpr::Named(n) => (*named
                .get(n.as_str())
                .ok_or_else(|| semantic((1, 1), format!("unknown ideal '{n}'")))?)
            .clone(),
            IdealExpr::Maximal => ring.maximal_ideal(),
            IdealExpr::Sum(a, b) => a.evaluate(ring, named)?.sum(&b.evaluate(ring, named)?)?,
            IdealExpr::Product(a, b) => a
                .evaluate(ring, named)?
                .product(&b.evaluate(ring, named)?)?,
            IdealExpr::Power(a, k) => a.evaluate(ring, named)?.power(*k)?,
        })
    }
}

/// Parses an ideal expression such as `(x,y)^2`, `J*m^2 + I` or `x^7, y^7`.
pub fn parse_ideal_expr(
    text: &str,
    vars: &[String],
    names: &[String],
) -> Result<IdealExpr, ParseError> {
    let mut cur = Cursor::new(text);
    let e = list_or_expr(&mut cur, vars, names)?;
    cur.skip_ws();
    if !cur.at_end() {
        return Err(cur.error("unexpected trailing input"));
    }
    Ok(e)
}

/// A generator list running up to `)` or the end, else an expression.
fn list_or_expr(cur: &mut Cursor<'_>, vars: &[String], names: &[String]) -> Result<IdealExpr, ParseError> {
    let save = cur.clone();
    if let Ok(list) = poly_list(cur, vars) {
        cur.skip_ws();
        if cur.at_end() || cur.peek() == ')' {
            return Ok(IdealExpr::Generators(list));
        }
    }
    *cur = save;
    sum(cur, vars, names)
}

fn sum(cur: &mut Cursor<'_>, vars: &[String], names: &[String]) -> Result<IdealExpr, ParseError> {
    let mut e = product(cur, vars, names)?;
    while cur.eat('+') {
        e = IdealExpr::Sum(Box::new(e), Box::new(product(cur, vars, names)?));
    }
    Ok(e)
}

fn product(cur: &mut Cursor<'_>, vars: &[String], names: &[String]) -> Result<IdealExpr, ParseError> {
    let mut e = power(cur, vars, names)?;
    while cur.eat('*') {
        e = IdealExpr::Product(Box::new(e), Box::new(power(cur, vars, names)?));
    }
    Ok(e)
}

fn power(cur: &mut Cursor<'_>, vars: &[String], names: &[String]) -> Result<IdealExpr, ParseError> {
    let mut e = atom(cur, vars, names)?;
    while cur.eat('^') {
        let at = cur.clone();
        let k = cur.unsigned()?;
        let k = u32::try_from(k).map_err(|_| at.error("exponent too large"))?;
        e = IdealExpr::Power(Box::new(e), k);
    }
    Ok(e)
}

fn atom(cur: &mut Cursor<'_>, vars: &[String], names: &[String]) -> Result<IdealExpr, ParseError> {
    if cur.eat('(') {
        let e = list_or_expr(cur, vars, names)?;
        cur.expect(')')?;
        return Ok(e);
    }
    let at = cur.clone();
    match cur.identifier() {
        Some(n) if names.contains(&n) => Ok(IdealExpr::Named(n)),
        Some(n) if n == "m" => Ok(IdealExpr::Maximal),
        Some(n) => Err(at.error(format!("unknown ideal '{n}'; write generator lists in parentheses"))),
        None => Err(at.error("expected an ideal")),
    }
}
