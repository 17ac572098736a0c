//! Closed-form analytic symbols: a small expression language, exact
//! evaluation on the closed disk or ball, zeros with multiplicities and
//! certified boundary extrema.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{ring_values, winding_number, ToleranceConfig, Winding};
use crate::roots::{clustered_roots, eval_with_derivative, Root};
use crate::series::{MultiPoly, PowerSeries};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Zeros of a denominator within this distance outside the unit circle
/// still count as vanishing on the closed disk.
const CLOSED_DISK_SLACK: f64 = 1e-9;
/// Roots closer than this are one root of higher multiplicity.
const CLUSTER_TOL: f64 = 1e-7;
const MAX_BOUNDARY_SAMPLES: usize = 1 << 20;
const MAX_REFINE_EVALS: usize = 400_000;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Constant(Complex64),
    /// z_j, 1-based; `z` alone is z₁.
    Coordinate(usize),
    /// One-variable polynomial, ascending coefficients.
    Poly(Vec<Complex64>),
    Sum(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Product(Box<Node>, Box<Node>),
    Quotient(Box<Node>, Box<Node>),
    /// (a − z)/(1 − āz) with |a| < 1.
    Blaschke(Complex64),
    Power(Box<Node>, u32),
}

impl Node {
    fn sum(a: Node, b: Node) -> Node {
        Node::Sum(Box::new(a), Box::new(b))
    }
    fn neg(a: Node) -> Node {
        Node::Neg(Box::new(a))
    }
    fn product(a: Node, b: Node) -> Node {
        Node::Product(Box::new(a), Box::new(b))
    }
    fn quotient(a: Node, b: Node) -> Node {
        Node::Quotient(Box::new(a), Box::new(b))
    }
    fn power(a: Node, m: u32) -> Node {
        Node::Power(Box::new(a), m)
    }

    fn max_coordinate(&self) -> usize {
        match self {
            Node::Coordinate(j) => *j,
            Node::Constant(_) | Node::Blaschke(_) => 0,
            Node::Poly(_) => 1,
            Node::Neg(a) | Node::Power(a, _) => a.max_coordinate(),
            Node::Sum(a, b) | Node::Product(a, b) | Node::Quotient(a, b) => a.max_coordinate().max(b.max_coordinate()),
        }
    }

    /// Upper bound on the degree of the rational form (numerator plus denominator).
    fn degree_bound(&self) -> usize {
        match self {
            Node::Constant(_) => 0,
            Node::Coordinate(_) | Node::Blaschke(_) => 1,
            Node::Poly(c) => c.len().saturating_sub(1),
            Node::Neg(a) => a.degree_bound(),
            Node::Power(a, m) => a.degree_bound().saturating_mul(*m as usize),
            Node::Sum(a, b) | Node::Product(a, b) | Node::Quotient(a, b) => a.degree_bound() + b.degree_bound(),
        }
    }

    /// Value and complex derivative at z (one variable).
    fn eval1(&self, z: Complex64) -> (Complex64, Complex64) {
        match self {
            Node::Constant(c) => (*c, ZERO),
            Node::Coordinate(_) => (z, ONE),
            Node::Poly(c) => eval_with_derivative(c, z),
            Node::Sum(a, b) => {
                let (x, dx) = a.eval1(z);
                let (y, dy) = b.eval1(z);
                (x + y, dx + dy)
            }
            Node::Neg(a) => {
                let (x, dx) = a.eval1(z);
                (-x, -dx)
            }
            Node::Product(a, b) => {
                let (x, dx) = a.eval1(z);
                let (y, dy) = b.eval1(z);
                (x * y, dx * y + x * dy)
            }
            Node::Quotient(a, b) => {
                let (x, dx) = a.eval1(z);
                let (y, dy) = b.eval1(z);
                (x / y, (dx * y - x * dy) / (y * y))
            }
            Node::Blaschke(a) => {
                let den = ONE - a.conj() * z;
                ((a - z) / den, (a.norm_sqr() - 1.0) / (den * den))
            }
            Node::Power(a, m) => {
                if *m == 0 {
                    return (ONE, ZERO);
                }
                let (x, dx) = a.eval1(z);
                let lower = x.powu(m - 1);
                (lower * x, lower * dx * *m as f64)
            }
        }
    }

    /// Symbolic derivative in one variable.
    fn derivative(&self) -> Node {
        match self {
            Node::Constant(_) => Node::Constant(ZERO),
            Node::Coordinate(_) => Node::Constant(ONE),
            Node::Poly(c) => Node::Poly(PowerSeries::polynomial(c.clone()).derivative().coeffs().to_vec()),
            Node::Sum(a, b) => Node::sum(a.derivative(), b.derivative()),
            Node::Neg(a) => Node::neg(a.derivative()),
            Node::Product(a, b) => Node::sum(
                Node::product(a.derivative(), (**b).clone()),
                Node::product((**a).clone(), b.derivative()),
            ),
            Node::Quotient(a, b) => Node::quotient(
                Node::sum(
                    Node::product(a.derivative(), (**b).clone()),
                    Node::neg(Node::product((**a).clone(), b.derivative())),
                ),
                Node::power((**b).clone(), 2),
            ),
            Node::Blaschke(a) => Node::quotient(
                Node::Constant(Complex64::new(a.norm_sqr() - 1.0, 0.0)),
                Node::power(Node::Poly(vec![ONE, -a.conj()]), 2),
            ),
            Node::Power(a, m) => match m {
                0 => Node::Constant(ZERO),
                1 => a.derivative(),
                _ => Node::product(
                    Node::product(Node::Constant(Complex64::new(*m as f64, 0.0)), Node::power((**a).clone(), m - 1)),
                    a.derivative(),
                ),
            },
        }
    }

    /// Exact rational form p/q in one variable; constant denominators are
    /// folded into the numerator.
    fn rational(&self) -> Rational {
        let r = match self {
            Node::Constant(c) => Rational::poly(vec![*c]),
            Node::Coordinate(_) => Rational::poly(vec![ZERO, ONE]),
            Node::Poly(c) => Rational::poly(c.clone()),
            Node::Blaschke(a) => Rational {
                num: PowerSeries::polynomial(vec![*a, -ONE]),
                den: PowerSeries::polynomial(vec![ONE, -a.conj()]),
            },
            Node::Neg(a) => {
                let r = a.rational();
                Rational { num: -&r.num, den: r.den }
            }
            Node::Sum(a, b) => {
                let (x, y) = (a.rational(), b.rational());
                if x.den == y.den {
                    Rational { num: &x.num + &y.num, den: x.den }
                } else {
                    Rational { num: &(&x.num * &y.den) + &(&y.num * &x.den), den: &x.den * &y.den }
                }
            }
            Node::Product(a, b) => {
                let (x, y) = (a.rational(), b.rational());
                Rational { num: &x.num * &y.num, den: &x.den * &y.den }
            }
            Node::Quotient(a, b) => {
                let (x, y) = (a.rational(), b.rational());
                Rational { num: &x.num * &y.den, den: &x.den * &y.num }
            }
            Node::Power(a, m) => {
                let x = a.rational();
                Rational { num: binary_pow(&x.num, *m, None), den: binary_pow(&x.den, *m, None) }
            }
        };
        r.normalized()
    }

    /// Taylor expansion at 0 through degree k.
    fn series(&self, k: usize) -> PowerSeries {
        let s = match self {
            Node::Constant(c) => PowerSeries::constant(*c),
            Node::Coordinate(_) => PowerSeries::monomial(1, ONE),
            Node::Poly(c) => PowerSeries::polynomial(c.clone()),
            Node::Neg(a) => -&a.series(k),
            Node::Sum(a, b) => &a.series(k) + &b.series(k),
            Node::Product(a, b) => &a.series(k) * &b.series(k),
            Node::Quotient(a, b) => {
                let (x, y) = (a.series(k), b.series(k));
                if y.is_exact() && y.truncation_degree() == 0 {
                    x.scale(ONE / y.coeff(0))
                } else {
                    x.divide(&y, k).expect("validated denominators do not vanish at 0")
                }
            }
            Node::Blaschke(a) => PowerSeries::polynomial(vec![*a, -ONE])
                .divide(&PowerSeries::polynomial(vec![ONE, -a.conj()]), k)
                .expect("constant term is 1"),
            Node::Power(a, m) => binary_pow(&a.series(k), *m, Some(k)),
        };
        if s.is_exact() && s.truncation_degree() <= k {
            s
        } else {
            s.truncate(k)
        }
    }

    fn to_multi(&self, dim: usize) -> Result<MultiPoly> {
        let unsupported = || Error::Argument("symbols in more than one variable must be polynomials".into());
        Ok(match self {
            Node::Constant(c) => MultiPoly::constant(dim, *c),
            Node::Coordinate(j) => MultiPoly::coordinate(dim, *j)?,
            Node::Poly(_) | Node::Blaschke(_) => return Err(unsupported()),
            Node::Neg(a) => a.to_multi(dim)?.scale(-ONE),
            Node::Sum(a, b) => a.to_multi(dim)?.add(&b.to_multi(dim)?),
            Node::Product(a, b) => a.to_multi(dim)?.mul(&b.to_multi(dim)?),
            Node::Power(a, m) => a.to_multi(dim)?.pow(*m),
            Node::Quotient(a, b) => {
                let den = b.to_multi(dim)?;
                if den.total_degree() > 0 {
                    return Err(unsupported());
                }
                let c = den.terms().next().map(|(_, c)| *c).unwrap_or(ZERO);
                if c == ZERO {
                    return Err(Error::DenominatorVanishes { witness: ZERO });
                }
                a.to_multi(dim)?.scale(ONE / c)
            }
        })
    }

    fn render(&self, dim: usize, out: &mut String) {
        match self {
            Node::Constant(c) => out.push_str(&render_complex(*c)),
            Node::Coordinate(j) => {
                if dim == 1 {
                    out.push('z');
                } else {
                    out.push_str(&format!("z{j}"));
                }
            }
            Node::Poly(c) => {
                out.push('(');
                let mut first = true;
                for (k, a) in c.iter().enumerate() {
                    if *a == ZERO && !(k == 0 && c.iter().all(|x| *x == ZERO)) {
                        continue;
                    }
                    if !first {
                        out.push('+');
                    }
                    first = false;
                    out.push_str(&render_complex(*a));
                    match k {
                        0 => {}
                        1 => out.push_str("*z"),
                        _ => out.push_str(&format!("*z^{k}")),
                    }
                }
                if first {
                    out.push('0');
                }
                out.push(')');
            }
            Node::Sum(a, b) => binary(out, dim, a, "+", b),
            Node::Product(a, b) => binary(out, dim, a, "*", b),
            Node::Quotient(a, b) => binary(out, dim, a, "/", b),
            Node::Neg(a) => {
                out.push_str("-(");
                a.render(dim, out);
                out.push(')');
            }
            Node::Blaschke(a) => {
                out.push_str("B(");
                out.push_str(&format!("{}", a.re));
                if a.im != 0.0 {
                    out.push_str(&format!("{}{}i", if a.im < 0.0 { "-" } else { "+" }, a.im.abs()));
                }
                out.push(')');
            }
            Node::Power(a, m) => {
                out.push('(');
                a.render(dim, out);
                out.push_str(&format!(")^{m}"));
            }
        }
    }
}

fn binary(out: &mut String, dim: usize, a: &Node, op: &str, b: &Node) {
    out.push('(');
    a.render(dim, out);
    out.push(')');
    out.push_str(op);
    out.push('(');
    b.render(dim, out);
    out.push(')');
}

fn render_complex(c: Complex64) -> String {
    match (c.re, c.im) {
        (re, 0.0) => {
            if re < 0.0 || (re == 0.0 && re.is_sign_negative()) {
                format!("(-{})", -re)
            } else {
                format!("{re}")
            }
        }
        (re, im) => {
            let re_part = if re < 0.0 { format!("-{}", -re) } else { format!("{re}") };
            format!("({re_part}{}{}i)", if im < 0.0 { "-" } else { "+" }, im.abs())
        }
    }
}

/// Repeated squaring; `budget` truncates intermediate products.
fn binary_pow(base: &PowerSeries, m: u32, budget: Option<usize>) -> PowerSeries {
    let clip = |s: PowerSeries| match budget {
        Some(k) if s.truncation_degree() > k => s.truncate(k),
        _ => s,
    };
    let mut result = PowerSeries::constant(ONE);
    let mut square = clip(base.clone());
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            result = clip(&result * &square);
        }
        e >>= 1;
        if e > 0 {
            square = clip(&square * &square);
        }
    }
    result
}

/// p/q as exact polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct Rational {
    pub num: PowerSeries,
    pub den: PowerSeries,
}

impl Rational {
    fn poly(c: Vec<Complex64>) -> Self {
        Self { num: PowerSeries::polynomial(c), den: PowerSeries::constant(ONE) }
    }

    fn normalized(self) -> Self {
        let den = trim(&self.den);
        let num = trim(&self.num);
        if den.truncation_degree() == 0 {
            Self { num: num.scale(ONE / den.coeff(0)), den: PowerSeries::constant(ONE) }
        } else {
            Self { num, den }
        }
    }
}

fn trim(p: &PowerSeries) -> PowerSeries {
    let c = p.coeffs();
    let mut end = c.len();
    while end > 1 && c[end - 1] == ZERO {
        end -= 1;
    }
    PowerSeries::polynomial(c[..end].to_vec())
}

// ---------------------------------------------------------------------------
// Parsing

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { position: self.pos, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected '{}'", c as char))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Node::sum(lhs, self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Node::sum(lhs, Node::neg(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    lhs = Node::product(lhs, self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    lhs = Node::quotient(lhs, self.factor()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Node> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Node::neg(self.factor()?));
        }
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.error("expected an unsigned integer exponent");
            }
            let digits = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits");
            let m: u32 = digits.parse().map_err(|_| Error::Syntax { position: start, message: "exponent too large".into() })?;
            return Ok(Node::power(base, m));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Node> {
        match self.peek() {
            None => self.error("unexpected end of input"),
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let x = self.number()?;
                if self.peek() == Some(b'i') {
                    self.pos += 1;
                    Ok(Node::Constant(Complex64::new(0.0, x)))
                } else {
                    Ok(Node::Constant(Complex64::new(x, 0.0)))
                }
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Node::Constant(Complex64::i()))
            }
            Some(b'z') => {
                self.pos += 1;
                match self.text.get(self.pos) {
                    Some(d @ b'1'..=b'3') => {
                        self.pos += 1;
                        Ok(Node::Coordinate((d - b'0') as usize))
                    }
                    Some(d) if d.is_ascii_alphanumeric() => self.error("unknown coordinate; use z, z1, z2 or z3"),
                    _ => Ok(Node::Coordinate(1)),
                }
            }
            Some(b'B') => {
                self.pos += 1;
                self.expect(b'(')?;
                let start = self.pos;
                let a = self.complex()?;
                self.expect(b')')?;
                if a.norm() >= 1.0 {
                    return Err(Error::Syntax { position: start, message: format!("Blaschke parameter {a} must satisfy |a| < 1") });
                }
                Ok(Node::Blaschke(a))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) => self.error(format!("unexpected character '{}'", c as char)),
        }
    }

    fn signed_number(&mut self) -> Result<f64> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            Ok(-self.number()?)
        } else {
            self.number()
        }
    }

    /// number (('+'|'-') number? 'i')? | number 'i'
    fn complex(&mut self) -> Result<Complex64> {
        let re = self.signed_number()?;
        match self.peek() {
            Some(b'i') => {
                self.pos += 1;
                Ok(Complex64::new(0.0, re))
            }
            Some(sign @ (b'+' | b'-')) => {
                self.pos += 1;
                let s = if sign == b'-' { -1.0 } else { 1.0 };
                let im = match self.peek() {
                    Some(b'i') => 1.0,
                    _ => self.number()?,
                };
                self.expect(b'i')?;
                Ok(Complex64::new(re, s * im))
            }
            _ => Ok(Complex64::new(re, 0.0)),
        }
    }

    fn number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.pos < p.text.len() && p.text[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut count = digits(self);
        if self.text.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            count += digits(self);
        }
        if count == 0 {
            self.pos = start;
            return self.error("expected a number");
        }
        if matches!(self.text.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.text.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = mark;
            }
        }
        let s = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii number");
        s.parse().map_err(|_| Error::Syntax { position: start, message: format!("malformed number '{s}'") })
    }
}

fn as_poly(node: &Node) -> Option<Vec<Complex64>> {
    match node {
        Node::Constant(c) => Some(vec![*c]),
        Node::Coordinate(1) => Some(vec![ZERO, ONE]),
        Node::Poly(c) => Some(c.clone()),
        _ => None,
    }
}

/// Collapses sums and negations of polynomial leaves into `Poly` nodes.
fn fold(node: Node) -> Node {
    match node {
        Node::Sum(a, b) => {
            let (a, b) = (fold(*a), fold(*b));
            match (as_poly(&a), as_poly(&b)) {
                (Some(p), Some(q)) => Node::Poly((PowerSeries::polynomial(p) + PowerSeries::polynomial(q)).coeffs().to_vec()),
                _ => Node::sum(a, b),
            }
        }
        Node::Neg(a) => {
            let a = fold(*a);
            match as_poly(&a) {
                Some(p) => Node::Poly(p.iter().map(|c| -c).collect()),
                None => Node::neg(a),
            }
        }
        Node::Product(a, b) => Node::product(fold(*a), fold(*b)),
        Node::Quotient(a, b) => Node::quotient(fold(*a), fold(*b)),
        Node::Power(a, m) => Node::power(fold(*a), m),
        leaf => leaf,
    }
}

fn validate_one_variable(node: &Node) -> Result<()> {
    match node {
        Node::Constant(_) | Node::Coordinate(_) | Node::Poly(_) => Ok(()),
        Node::Blaschke(a) => {
            if a.norm() < 1.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!("Blaschke parameter {a} must satisfy |a| < 1")))
            }
        }
        Node::Neg(a) | Node::Power(a, _) => validate_one_variable(a),
        Node::Sum(a, b) | Node::Product(a, b) => {
            validate_one_variable(a)?;
            validate_one_variable(b)
        }
        Node::Quotient(a, b) => {
            validate_one_variable(a)?;
            validate_one_variable(b)?;
            // b's own denominators are zero-free on the closed disk, so only
            // its numerator can vanish there
            let num = b.rational().num;
            if num.coeffs().iter().all(|c| *c == ZERO) {
                return Err(Error::DenominatorVanishes { witness: ZERO });
            }
            let closest = clustered_roots(num.coeffs(), CLUSTER_TOL)
                .into_iter()
                .map(|r| r.location)
                .filter(|r| r.norm() <= 1.0 + CLOSED_DISK_SLACK)
                .min_by(|x, y| x.norm().total_cmp(&y.norm()));
            match closest {
                Some(witness) => Err(Error::DenominatorVanishes { witness }),
                None => Ok(()),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Symbols

/// A validated analytic symbol on the unit disk (n = 1) or ball (n = 2, 3).
#[derive(Debug, Clone)]
pub struct Symbol {
    node: Node,
    dim: usize,
    rational: OnceLock<Rational>,
    multi: Option<MultiPoly>,
}

impl PartialEq for Symbol {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node && self.dim == other.dim
    }
}

/// Parses a symbol, inferring the dimension from the coordinates used.
pub fn parse_symbol(text: &str) -> Result<Symbol> {
    Symbol::parse(text)
}

impl Symbol {
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_dim(text, None)
    }

    /// Parses in a fixed dimension; coordinates beyond it are rejected.
    pub fn parse_in(text: &str, dim: usize) -> Result<Self> {
        Self::parse_with_dim(text, Some(dim))
    }

    fn parse_with_dim(text: &str, dim: Option<usize>) -> Result<Self> {
        let mut parser = Parser { text: text.as_bytes(), pos: 0 };
        let node = parser.expr()?;
        if parser.peek().is_some() {
            return parser.error("unexpected trailing input");
        }
        let used = node.max_coordinate().max(1);
        let dim = dim.unwrap_or(used);
        if used > dim {
            return Err(Error::Argument(format!("coordinate z{used} used in dimension {dim}")));
        }
        Self::new(node, dim)
    }

    /// Validates the invariants of `node` in dimension `dim`.
    pub fn new(node: Node, dim: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Argument(format!("dimension must be 1, 2 or 3, got {dim}")));
        }
        if node.max_coordinate() > dim {
            return Err(Error::Argument(format!("coordinate z{} used in dimension {dim}", node.max_coordinate())));
        }
        if dim == 1 {
            let node = fold(node);
            validate_one_variable(&node)?;
            Ok(Self { node, dim, rational: OnceLock::new(), multi: None })
        } else {
            let multi = node.to_multi(dim)?;
            Ok(Self { node, dim, rational: OnceLock::new(), multi: Some(multi) })
        }
    }

    /// Polynomial symbol in one variable.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        Self::trusted(Node::Poly(coeffs))
    }

    /// The peak function ((1 + ξ̄z)/2)^k.
    pub fn peak(xi: Complex64, k: u32) -> Self {
        Self::trusted(Node::power(Node::Poly(vec![Complex64::new(0.5, 0.0), xi.conj() * 0.5]), k))
    }

    fn trusted(node: Node) -> Self {
        Self { node, dim: 1, rational: OnceLock::new(), multi: None }
    }

    /// u − λ
    pub fn shifted(&self, lambda: Complex64) -> Symbol {
        let node = Node::sum(self.node.clone(), Node::Constant(-lambda));
        match &self.multi {
            None => Self::trusted(fold(node)),
            Some(m) => Self {
                node,
                dim: self.dim,
                rational: OnceLock::new(),
                multi: Some(m.add(&MultiPoly::constant(self.dim, -lambda))),
            },
        }
    }

    /// c·u
    pub fn scaled(&self, c: Complex64) -> Symbol {
        let node = Node::product(Node::Constant(c), self.node.clone());
        match &self.multi {
            None => Self::trusted(node),
            Some(m) => Self { node, dim: self.dim, rational: OnceLock::new(), multi: Some(m.scale(c)) },
        }
    }

    /// Pointwise product of two symbols in one variable.
    pub fn times(&self, other: &Symbol) -> Result<Symbol> {
        self.require_one_variable("multiplication")?;
        other.require_one_variable("multiplication")?;
        Ok(Self::trusted(Node::product(self.node.clone(), other.node.clone())))
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Polynomial form for n > 1.
    pub fn multi(&self) -> Option<&MultiPoly> {
        self.multi.as_ref()
    }

    fn require_one_variable(&self, what: &str) -> Result<()> {
        if self.dim == 1 {
            Ok(())
        } else {
            Err(Error::Argument(format!("{what} needs a symbol in one variable")))
        }
    }

    /// Exact rational form p/q (n = 1).
    pub fn rational(&self) -> Result<&Rational> {
        self.require_one_variable("the rational form")?;
        Ok(self.rational.get_or_init(|| self.node.rational()))
    }

    pub fn degree_bound(&self) -> usize {
        match &self.multi {
            Some(m) => m.total_degree(),
            None => self.node.degree_bound(),
        }
    }

    /// Closed-form value at a point of the closed ball.
    pub fn eval(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.dim {
            return Err(Error::Argument(format!("expected a point with {} coordinates", self.dim)));
        }
        let r = point.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(r <= 1.0 + 1e-12) {
            return Err(Error::Domain(format!("point with modulus {r} lies outside the closed unit ball")));
        }
        Ok(match &self.multi {
            Some(m) => m.eval(point),
            None => self.node.eval1(point[0]).0,
        })
    }

    /// Value at z without the domain check (n = 1).
    pub fn value(&self, z: Complex64) -> Complex64 {
        self.node.eval1(z).0
    }

    /// Value and complex derivative at z (n = 1).
    pub fn value_and_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        self.node.eval1(z)
    }

    /// Symbolic derivative u′ (n = 1).
    pub fn derivative(&self) -> Result<Symbol> {
        self.require_one_variable("differentiation")?;
        Ok(Self::trusted(fold(self.node.derivative())))
    }

    /// Taylor coefficients at 0 through degree k (n = 1).
    pub fn to_series(&self, k: usize) -> Result<PowerSeries> {
        self.require_one_variable("series expansion")?;
        Ok(self.node.series(k))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.node.render(self.dim, &mut out);
        out
    }

    /// Samples of u(e^{it}) at t = 2πj/m.
    pub fn boundary_samples(&self, m: usize) -> Vec<Complex64> {
        (0..m).into_par_iter().map(|j| self.value(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64))).collect()
    }

    fn boundary_sample_count(&self) -> usize {
        (64 * self.node.degree_bound().max(1)).clamp(4096, MAX_BOUNDARY_SAMPLES)
    }

    /// Lipschitz constant in t of u(e^{it}): sampled max |u′| corrected by
    /// the sampled max |u″| over half a grid step.
    fn boundary_lipschitz(&self, m: usize) -> f64 {
        let d2 = fold(self.node.derivative().derivative());
        let h = 2.0 * PI / m as f64;
        let (d1_max, d2_max) = (0..m)
            .into_par_iter()
            .map(|j| {
                let z = Complex64::from_polar(1.0, h * j as f64);
                (self.node.eval1(z).1.norm(), d2.eval1(z).0.norm())
            })
            .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
        d1_max + 1.5 * d2_max * h
    }

    /// Certified minimum of |u(e^{it}) − λ| (n = 1).
    pub fn boundary_min_modulus(&self, lambda: Complex64, tol: &ToleranceConfig) -> Result<BoundaryMin> {
        self.require_one_variable("boundary minimum")?;
        let m = self.boundary_sample_count();
        let lip = self.boundary_lipschitz(m);
        let e = refine_boundary_extremum(|t| (self.value(Complex64::from_polar(1.0, t)) - lambda).norm(), m, lip, tol);
        Ok(BoundaryMin { min: e.value, argmin_angle: e.angle, lower_bound: e.bound, lipschitz: lip })
    }

    /// Certified maximum of |u(e^{it})| (n = 1).
    pub fn boundary_max_modulus(&self, tol: &ToleranceConfig) -> Result<BoundaryMax> {
        self.require_one_variable("boundary maximum")?;
        let m = self.boundary_sample_count();
        let lip = self.boundary_lipschitz(m);
        let e = refine_boundary_extremum(|t| -self.value(Complex64::from_polar(1.0, t)).norm(), m, lip, tol);
        Ok(BoundaryMax { max: -e.value, argmax_angle: e.angle, upper_bound: -e.bound })
    }

    /// ‖u‖_∞ over the ball. For n = 1 this is the boundary maximum; for
    /// n > 1 the sphere is scanned along complex lines and refined locally.
    pub fn sup_norm(&self, tol: &ToleranceConfig) -> Result<SupNorm> {
        match &self.multi {
            None => {
                let b = self.boundary_max_modulus(tol)?;
                Ok(SupNorm {
                    value: b.max,
                    witness: vec![Complex64::from_polar(1.0, b.argmax_angle)],
                    resolution: b.upper_bound - b.max,
                })
            }
            Some(p) => Ok(sphere_max(p)),
        }
    }

    /// Zeros of u − λ in the open disk with multiplicities, cross-checked
    /// against the winding number of the boundary image (n = 1).
    pub fn zeros_in_disk(&self, lambda: Complex64, tol: &ToleranceConfig) -> Result<ZeroSet> {
        let bm = self.boundary_min_modulus(lambda, tol)?;
        if bm.min <= tol.rel_tol * (1.0 + lambda.norm()) {
            return Err(Error::BoundaryZero { angle: bm.argmin_angle });
        }
        let r = self.rational()?;
        let shifted = &r.num - &r.den.scale(lambda);
        let zeros: Vec<Root> = clustered_roots(shifted.coeffs(), CLUSTER_TOL)
            .into_iter()
            .filter(|z| z.location.norm() < 1.0)
            .collect();
        let total_count: usize = zeros.iter().map(|z| z.multiplicity).sum();

        // each chord must turn by less than π around λ
        let needed = (4.0 * PI * bm.lipschitz / bm.min).ceil() as usize;
        let m = needed.max(self.boundary_sample_count()).min(4 * MAX_BOUNDARY_SAMPLES);
        let winding = match winding_number(&self.boundary_samples(m), lambda, 0.0) {
            Winding::Around(k) => k,
            Winding::OnBoundary => return Err(Error::BoundaryZero { angle: bm.argmin_angle }),
        };
        if winding != total_count as i64 {
            return Err(Error::Consistency(format!(
                "found {total_count} zeros of u - λ in the disk but the boundary image winds {winding} times"
            )));
        }
        Ok(ZeroSet { zeros, total_count, winding })
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroSet {
    pub zeros: Vec<Root>,
    pub total_count: usize,
    pub winding: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryMin {
    pub min: f64,
    pub argmin_angle: f64,
    pub lower_bound: f64,
    /// Lipschitz constant of t ↦ u(e^{it}) used for the bound.
    pub lipschitz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryMax {
    pub max: f64,
    pub argmax_angle: f64,
    pub upper_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupNorm {
    pub value: f64,
    pub witness: Vec<Complex64>,
    /// Gap to the certified bound (n = 1) or angular grid spacing (n > 1).
    pub resolution: f64,
}

struct Extremum {
    value: f64,
    angle: f64,
    bound: f64,
}

#[derive(PartialEq)]
struct Interval {
    lower: f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    depth: u32,
}

impl Eq for Interval {}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interval {
    // min-heap on the lower bound
    fn cmp(&self, other: &Self) -> Ordering {
        other.lower.total_cmp(&self.lower)
    }
}

/// Minimum of a `lip`-Lipschitz periodic function on [0, 2π): grid scan
/// followed by best-first bisection of intervals whose Lipschitz lower
/// bound is below the incumbent.
fn refine_boundary_extremum(f: impl Fn(f64) -> f64 + Sync, m: usize, lip: f64, tol: &ToleranceConfig) -> Extremum {
    let h = 2.0 * PI / m as f64;
    let values: Vec<f64> = (0..m).into_par_iter().map(|j| f(h * j as f64)).collect();
    let (mut best, mut best_t) = (f64::INFINITY, 0.0);
    for (j, &v) in values.iter().enumerate() {
        if v < best {
            best = v;
            best_t = h * j as f64;
        }
    }
    let lower = |fa: f64, fb: f64, width: f64| 0.5 * (fa + fb - lip * width);
    let mut heap: BinaryHeap<Interval> = (0..m)
        .map(|j| {
            let (fa, fb) = (values[j], values[(j + 1) % m]);
            Interval { lower: lower(fa, fb, h), a: h * j as f64, fa, b: h * (j + 1) as f64, fb, depth: 0 }
        })
        .collect();
    let mut evals = 0;
    let mut bound = best;
    while let Some(iv) = heap.pop() {
        let slack = tol.rel_tol * best.abs().max(1e-300);
        if iv.lower >= best - slack {
            bound = iv.lower.min(best);
            break;
        }
        if iv.depth >= tol.boundary_refine_depth || evals >= MAX_REFINE_EVALS {
            bound = iv.lower.min(best);
            // remaining intervals cannot be refined further; their minimum
            // lower bound is the certificate
            if let Some(rest) = heap.iter().map(|i| i.lower).min_by(f64::total_cmp) {
                bound = bound.min(rest);
            }
            break;
        }
        let mid = 0.5 * (iv.a + iv.b);
        let fm = f(mid);
        evals += 1;
        if fm < best {
            best = fm;
            best_t = mid;
        }
        let half = 0.5 * (iv.b - iv.a);
        heap.push(Interval { lower: lower(iv.fa, fm, half), a: iv.a, fa: iv.fa, b: mid, fb: fm, depth: iv.depth + 1 });
        heap.push(Interval { lower: lower(fm, iv.fb, half), a: mid, fa: fm, b: iv.b, fb: iv.fb, depth: iv.depth + 1 });
    }
    Extremum { value: best, angle: best_t.rem_euclid(2.0 * PI), bound: bound.min(best) }
}

// ---------------------------------------------------------------------------
// Sphere scans for n > 1

/// Unit direction for angles (θ, φ₂) in n = 2 or (θ, ψ, φ₂, φ₃) in n = 3;
/// the phase of the first coordinate is carried by the slice variable.
pub(crate) fn sphere_direction(dim: usize, angles: &[f64]) -> Vec<Complex64> {
    match dim {
        2 => vec![
            Complex64::new(angles[0].cos(), 0.0),
            Complex64::from_polar(angles[0].sin(), angles[1]),
        ],
        _ => vec![
            Complex64::new(angles[0].cos(), 0.0),
            Complex64::from_polar(angles[0].sin() * angles[1].cos(), angles[2]),
            Complex64::from_polar(angles[0].sin() * angles[1].sin(), angles[3]),
        ],
    }
}

/// Grid of direction angles covering the sphere modulo a common phase.
pub(crate) fn sphere_grid(dim: usize) -> (Vec<Vec<f64>>, f64) {
    let (polar, azimuth) = if dim == 2 { (65, 128) } else { (17, 32) };
    let dp = 0.5 * PI / (polar - 1) as f64;
    let da = 2.0 * PI / azimuth as f64;
    let mut grid = Vec::new();
    for i in 0..polar {
        let theta = dp * i as f64;
        if dim == 2 {
            for j in 0..azimuth {
                grid.push(vec![theta, da * j as f64]);
            }
        } else {
            for k in 0..polar {
                for j in 0..azimuth {
                    for l in 0..azimuth {
                        grid.push(vec![theta, dp * k as f64, da * j as f64, da * l as f64]);
                    }
                }
            }
        }
    }
    (grid, dp.max(da))
}

fn sphere_max(p: &MultiPoly) -> SupNorm {
    let dim = p.dim();
    let m = (8 * (p.total_degree() + 1)).next_power_of_two().max(64);
    let (grid, spacing) = sphere_grid(dim);
    let mut scored: Vec<(f64, Vec<f64>)> = grid
        .into_par_iter()
        .map(|angles| {
            let slice = p.slice(&sphere_direction(dim, &angles));
            let vals = ring_values(slice.coeffs(), 1.0, m);
            let (j, v) = vals
                .iter()
                .enumerate()
                .map(|(j, v)| (j, v.norm()))
                .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
            let mut params = angles;
            params.push(2.0 * PI * j as f64 / m as f64);
            (v, params)
        })
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    scored.truncate(8);

    let point = |params: &[f64]| -> Vec<Complex64> {
        let (angles, t) = params.split_at(params.len() - 1);
        let phase = Complex64::from_polar(1.0, t[0]);
        sphere_direction(dim, angles).into_iter().map(|w| w * phase).collect()
    };
    let objective = |params: &[f64]| p.eval(&point(params)).norm();
    let (value, params) = scored
        .into_iter()
        .map(|(v, start)| compass_maximize(&objective, start, v, spacing))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap_or((0.0, vec![0.0; if dim == 2 { 3 } else { 5 }]));
    SupNorm { value, witness: point(&params), resolution: spacing }
}

fn compass_maximize(f: &dyn Fn(&[f64]) -> f64, mut x: Vec<f64>, mut fx: f64, mut step: f64) -> (f64, Vec<f64>) {
    while step > 1e-10 {
        let mut improved = false;
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[i] += dir * step;
                let fy = f(&y);
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (fx, x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse_symbol("z").unwrap().node(), &Node::Coordinate(1));
        match parse_symbol("(z-0.5)*(z-2)").unwrap().node() {
            Node::Product(a, b) => {
                assert_eq!(**a, Node::Poly(vec![c(-0.5, 0.0), ONE]));
                assert_eq!(**b, Node::Poly(vec![c(-2.0, 0.0), ONE]));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_symbol("1/(z-0.5)") {
            Err(Error::DenominatorVanishes { witness }) => assert!((witness - c(0.5, 0.0)).norm() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        assert_eq!(parse_symbol("z+*2").unwrap_err(), Error::Syntax { position: 2, message: "unexpected character '*'".into() });
        assert!(matches!(parse_symbol("(z"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse_symbol("z^"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_symbol("z4"), Err(Error::Syntax { position: 1, .. })));
        assert!(matches!(parse_symbol("B(1)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_symbol("z z"), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse_symbol("1/(z-1)"), Err(Error::DenominatorVanishes { .. })));
        assert!(matches!(parse_symbol("1/(z-z)"), Err(Error::DenominatorVanishes { .. })));
        assert!(parse_symbol("1/(z-1.001)").is_ok());
    }

    #[test]
    fn parse_grammar_details() {
        let u = parse_symbol(" B( 0.5 - 0.25i ) * 2.5e-1 + i*z^2 - 3 ").unwrap();
        let z = c(0.3, -0.2);
        let a = c(0.5, -0.25);
        let want = (a - z) / (ONE - a.conj() * z) * 0.25 + Complex64::i() * z * z - 3.0;
        assert!((u.eval(&[z]).unwrap() - want).norm() < 1e-15);
        assert_eq!(parse_symbol("2i").unwrap().eval(&[ZERO]).unwrap(), c(0.0, 2.0));
        assert_eq!(parse_symbol("-z^2").unwrap().eval(&[c(0.5, 0.0)]).unwrap(), c(-0.25, 0.0));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(parse_symbol("z").unwrap().eval(&[Complex64::i()]).unwrap(), Complex64::i());
        assert_eq!(parse_symbol("((1+z)/2)^3").unwrap().eval(&[ONE]).unwrap(), ONE);
        assert_eq!(parse_symbol("B(0.5)").unwrap().eval(&[c(0.5, 0.0)]).unwrap(), ZERO);
        assert!(matches!(parse_symbol("z").unwrap().eval(&[c(1.1, 0.0)]), Err(Error::Domain(_))));
        let u = parse_symbol("z1*z2").unwrap();
        assert_eq!(u.dim(), 2);
        assert!(u.eval(&[c(0.8, 0.0), c(0.7, 0.0)]).is_err());
        assert_eq!(u.eval(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap(), c(0.0, 0.48));
    }

    #[test]
    fn higher_dimensions_are_polynomial_only() {
        assert!(matches!(parse_symbol("B(0.5)*z2"), Err(Error::Argument(_))));
        assert!(matches!(parse_symbol("1/(1+z1*z2/2)"), Err(Error::Argument(_))));
        assert!(parse_symbol("(z1+z2)/2").is_ok());
        assert_eq!(Symbol::parse_in("z", 3).unwrap().dim(), 3);
        assert!(Symbol::parse_in("z3", 2).is_err());
    }

    #[test]
    fn zeros_examples() {
        let t = tol();
        let z = parse_symbol("z").unwrap().zeros_in_disk(ZERO, &t).unwrap();
        assert_eq!(z.total_count, 1);
        assert!(z.zeros[0].location.norm() < 1e-14);
        let z2 = parse_symbol("z^2").unwrap().zeros_in_disk(ZERO, &t).unwrap();
        assert_eq!(z2.zeros.len(), 1);
        assert_eq!(z2.zeros[0].multiplicity, 2);
        let q = parse_symbol("(z-0.5)*(z-2)").unwrap().zeros_in_disk(ZERO, &t).unwrap();
        assert_eq!(q.total_count, 1);
        assert!((q.zeros[0].location - c(0.5, 0.0)).norm() < 1e-12);
        assert!(matches!(parse_symbol("z").unwrap().zeros_in_disk(ONE, &t), Err(Error::BoundaryZero { .. })));
    }

    #[test]
    fn zeros_of_rational_and_blaschke_symbols() {
        let t = tol();
        let u = parse_symbol("B(0.3+0.4i)^2*(z-0.1)/(z-3)").unwrap();
        let zs = u.zeros_in_disk(ZERO, &t).unwrap();
        assert_eq!(zs.total_count, 3);
        let double = zs.zeros.iter().find(|r| r.multiplicity == 2).unwrap();
        assert!((double.location - c(0.3, 0.4)).norm() < 1e-6);
        // level sets of a Blaschke factor have exactly one interior point
        assert_eq!(parse_symbol("B(0.5)").unwrap().zeros_in_disk(c(0.2, 0.1), &t).unwrap().total_count, 1);
    }

    #[test]
    fn boundary_min_examples() {
        let t = tol();
        let u = parse_symbol("z").unwrap();
        assert!((u.boundary_min_modulus(ZERO, &t).unwrap().min - 1.0).abs() < 1e-12);
        assert!((u.boundary_min_modulus(c(2.0, 0.0), &t).unwrap().min - 1.0).abs() < 1e-12);
        let q = parse_symbol("(z-0.5)*(z-2)").unwrap().boundary_min_modulus(ZERO, &t).unwrap();
        assert!((q.min - 0.5).abs() < 1e-9, "{q:?}");
        assert!(q.argmin_angle.min(2.0 * PI - q.argmin_angle) < 1e-4);
        assert!(q.lower_bound <= q.min && q.lower_bound > 0.49);
    }

    #[test]
    fn sup_norm_examples() {
        let t = tol();
        assert!((parse_symbol("z").unwrap().sup_norm(&t).unwrap().value - 1.0).abs() < 1e-12);
        let s = parse_symbol("z^2+3").unwrap().sup_norm(&t).unwrap();
        assert!((s.value - 4.0).abs() < 1e-12);
        assert!(s.resolution < 1e-6);
        for k in [1, 7, 64] {
            let v = Symbol::peak(ONE, k).sup_norm(&t).unwrap().value;
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sup_norm_on_the_ball() {
        let t = tol();
        let s = parse_symbol("z1").unwrap();
        assert_eq!(s.dim(), 1);
        let s = Symbol::parse_in("z1", 2).unwrap().sup_norm(&t).unwrap();
        assert!((s.value - 1.0).abs() < 1e-9);
        // |z1 z2| ≤ (|z1|² + |z2|²)/2
        let s = parse_symbol("z1*z2").unwrap().sup_norm(&t).unwrap();
        assert!((s.value - 0.5).abs() < 1e-9);
        let s = parse_symbol("z1*z2*z3").unwrap().sup_norm(&t).unwrap();
        assert!((s.value - 3f64.powf(-1.5)).abs() < 1e-8, "{s:?}");
    }

    #[test]
    fn to_series_examples() {
        let s = parse_symbol("z-2").unwrap().to_series(8).unwrap();
        assert_eq!(s.coeffs(), &[c(-2.0, 0.0), ONE]);
        let s = parse_symbol("1/(1-z/2)").unwrap().to_series(3).unwrap();
        assert_eq!(s.coeffs(), &[ONE, c(0.5, 0.0), c(0.25, 0.0), c(0.125, 0.0)]);
        // (0.5 − z)/(1 − 0.5z) = 0.5 − Σ_{n≥1} 0.75·0.5^{n−1} z^n
        let s = parse_symbol("B(0.5)").unwrap().to_series(10).unwrap();
        assert!((s.coeff(0) - c(0.5, 0.0)).norm() < 1e-15);
        for n in 1..=10 {
            assert!((s.coeff(n) + c(0.75 * 0.5f64.powi(n as i32 - 1), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn derivative_matches_forward_mode() {
        let u = parse_symbol("B(0.2-0.5i)^3*(z^2+1)/(2+z)").unwrap();
        let du = u.derivative().unwrap();
        for z in [ZERO, c(0.4, 0.3), c(-0.9, 0.1), Complex64::from_polar(1.0, 2.0)] {
            let (_, d) = u.value_and_derivative(z);
            assert!((du.value(z) - d).norm() < 1e-12 * d.norm().max(1.0));
            let h = 1e-6;
            let fd = (u.value(z + h) - u.value(z - h)) / (2.0 * h);
            assert!((fd - d).norm() < 1e-6 * d.norm().max(1.0));
        }
    }

    #[test]
    fn render_round_trips() {
        for text in ["z", "(z-0.5)*(z-2)", "B(0.3-0.4i)^2/(3+z)", "-(2i)*z^3 + (1-i)", "((1+z)/2)^5", "z1*z2 - 0.5*z2^3"] {
            let u = parse_symbol(text).unwrap();
            let back = Symbol::parse_in(&u.render(), u.dim()).unwrap();
            let pt: Vec<Complex64> = (0..u.dim()).map(|j| c(0.3 - 0.1 * j as f64, 0.2)).collect();
            assert!((u.eval(&pt).unwrap() - back.eval(&pt).unwrap()).norm() < 1e-14, "{text} -> {}", u.render());
        }
    }
}
