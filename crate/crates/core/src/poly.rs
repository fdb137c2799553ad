//! Exact polynomials: multivariate polynomials for vector field coefficients,
//! univariate Laurent polynomials for curves, and polynomial vector fields.
//!
//! Text grammar (whitespace ignored):
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*      division only by non-zero constants
//! factor := atom ('^' ['-'] integer)?       negative powers only for Laurent input
//! atom   := integer | name | '(' expr ')'
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Polynomial in `nvars` variables with exponent vectors as keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly<S> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, S::one())
    }

    /// The variable `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, e, S::one())
    }

    pub fn monomial(nvars: usize, exponents: Vec<u32>, c: S) -> Self {
        assert_eq!(exponents.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exponents, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponents: &[u32]) -> S {
        self.terms.get(exponents).cloned().unwrap_or_else(S::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, e: Vec<u32>, c: S) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(S::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x.clone() * c.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.nvars), |acc, _| acc.mul(self))
    }

    /// Partial derivative in `x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c.clone() * S::from_count(e[i] as usize));
            }
        }
        out
    }

    pub fn eval(&self, point: &[S]) -> S {
        self.terms.iter().fold(S::zero(), |acc, (e, c)| {
            let m = e.iter().zip(point).fold(c.clone(), |m, (k, x)| m * x.pow_u32(*k));
            acc + m
        })
    }

    /// `p(a + u)` as a polynomial in `u`.
    pub fn shift(&self, a: &[S]) -> Self {
        let n = self.nvars;
        let shifted: Vec<Poly<S>> = (0..n).map(|i| Self::var(n, i).add(&Self::constant(n, a[i].clone()))).collect();
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let m = e.iter().enumerate().fold(Self::constant(n, c.clone()), |m, (i, k)| m.mul(&shifted[i].pow(*k)));
            out = out.add(&m);
        }
        out
    }

    /// Substitutes `x_i = curve[i]`.
    pub fn compose(&self, curve: &[Laurent<S>]) -> Laurent<S> {
        self.terms.iter().fold(Laurent::zero(), |acc, (e, c)| {
            let m = e.iter().zip(curve).fold(Laurent::constant(c.clone()), |m, (k, x)| m.mul(&x.pow(*k)));
            acc.add(&m)
        })
    }

    pub fn parse(text: &str, names: &[&str]) -> Result<Self> {
        Parser::new(text, names).parse::<Poly<S>>()
    }

    /// Default variable names `x1, ..., xn`; for `n <= 3` the aliases `x, y, z` are accepted as well.
    pub fn parse_default(text: &str, nvars: usize) -> Result<Self> {
        let names = default_names(nvars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        match Self::parse(text, &refs) {
            Err(Error::PolyParse { .. }) if nvars <= 3 => {
                let aliases = &["x", "y", "z"][..nvars];
                Self::parse(text, aliases).or_else(|_| Self::parse(text, &refs))
            }
            other => other,
        }
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| if *k == 1 { names[i].to_string() } else { format!("{}^{}", names[i], k) })
                .collect();
            push_term(&mut out, c, &vars.join("*"));
        }
        out
    }
}

pub fn default_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("x{i}")).collect()
}

fn push_term<S: Scalar>(out: &mut String, c: &S, monomial: &str) {
    let negative = c.is_negative();
    let magnitude = c.abs();
    if out.is_empty() {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    if monomial.is_empty() {
        out.push_str(&magnitude.to_string());
    } else if magnitude.is_one() {
        out.push_str(monomial);
    } else {
        out.push_str(&format!("{magnitude}*{monomial}"));
    }
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.nvars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

/// Laurent polynomial in one variable (`s` in curve data).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Laurent<S> {
    terms: BTreeMap<i32, S>,
}

impl<S: Scalar> Laurent<S> {
    pub fn zero() -> Self {
        Laurent { terms: BTreeMap::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(c, 0)
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn monomial(c: S, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Laurent { terms }
    }

    /// `c_0 + c_1 s + c_2 s^2 + ...`
    pub fn from_coeffs(coeffs: Vec<S>) -> Self {
        let terms = coeffs.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as i32, c)).collect();
        Laurent { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &S)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    /// Lowest exponent with a non-zero coefficient.
    pub fn valuation(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, exp: i32) -> S {
        self.terms.get(&exp).cloned().unwrap_or_else(S::zero)
    }

    fn add_term(&mut self, e: i32, c: S) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(S::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Laurent { terms: self.terms.iter().map(|(e, x)| (*e, x.clone() * c.clone())).collect() }
    }

    /// Multiplication by `s^k`.
    pub fn shift(&self, k: i32) -> Self {
        Laurent { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Exact quotient; `None` if `other` does not divide `self` in the Laurent ring.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let v = other.valuation()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lead = other.terms[&other.degree()?].clone();
        let dv = other.degree()? - v;
        let mut rem = self.clone();
        let mut quotient = Self::zero();
        while let Some(d) = rem.degree() {
            if d - rem.valuation()? < dv {
                return None;
            }
            let c = rem.terms[&d].clone() / lead.clone();
            let e = d - other.degree()?;
            quotient.add_term(e, c.clone());
            rem = rem.sub(&other.shift(e).scale(&c));
        }
        Some(quotient)
    }

    pub fn eval(&self, s: &S) -> S {
        self.terms.iter().fold(S::zero(), |acc, (e, c)| {
            let p = if *e >= 0 { s.pow_u32(*e as u32) } else { S::one() / s.pow_u32((-*e) as u32) };
            acc + c.clone() * p
        })
    }

    /// Substitutes `s ↦ c · s`.
    pub fn rescale(&self, c: &S) -> Self {
        Laurent {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| {
                    let p = if *e >= 0 { c.pow_u32(*e as u32) } else { S::one() / c.pow_u32((-*e) as u32) };
                    (*e, x.clone() * p)
                })
                .collect(),
        }
    }

    pub fn parse(text: &str, var: &str) -> Result<Self> {
        Parser::new(text, &[var]).parse::<Laurent<S>>()
    }

    pub fn display_with(&self, var: &str) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in &self.terms {
            let m = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            push_term(&mut out, c, &m);
        }
        out
    }
}

impl<S: Scalar> fmt::Display for Laurent<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with("s"))
    }
}

/// Polynomial vector field `Σ a_i ∂_i` on `Q^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField<S> {
    components: Vec<Poly<S>>,
}

impl<S: Scalar> VectorField<S> {
    pub fn new(components: Vec<Poly<S>>) -> Result<Self> {
        let n = components.len();
        if let Some(p) = components.iter().find(|p| p.nvars() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: p.nvars() });
        }
        Ok(VectorField { components })
    }

    pub fn zero(n: usize) -> Self {
        VectorField { components: vec![Poly::zero(n); n] }
    }

    /// `∂_i`
    pub fn coordinate(n: usize, i: usize) -> Self {
        let mut f = Self::zero(n);
        f.components[i] = Poly::one(n);
        f
    }

    pub fn parse(components: &[&str], names: &[&str]) -> Result<Self> {
        Self::new(components.iter().map(|c| Poly::parse(c, names)).collect::<Result<_>>()?)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly<S>] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Poly::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        VectorField { components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn scale(&self, c: &S) -> Self {
        VectorField { components: self.components.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn mul_poly(&self, f: &Poly<S>) -> Self {
        VectorField { components: self.components.iter().map(|a| a.mul(f)).collect() }
    }

    /// The derivation `f ↦ Σ a_i ∂_i f`.
    pub fn apply(&self, f: &Poly<S>) -> Poly<S> {
        self.components.iter().enumerate().fold(Poly::zero(f.nvars()), |acc, (i, a)| acc.add(&a.mul(&f.derivative(i))))
    }

    /// `[A, B] = A(B) - B(A)` componentwise.
    pub fn bracket(&self, other: &Self) -> Self {
        VectorField {
            components: (0..self.dim())
                .map(|k| self.apply(&other.components[k]).sub(&other.apply(&self.components[k])))
                .collect(),
        }
    }

    pub fn eval(&self, point: &[S]) -> Vec<S> {
        self.components.iter().map(|p| p.eval(point)).collect()
    }

    pub fn shift(&self, a: &[S]) -> Self {
        VectorField { components: self.components.iter().map(|p| p.shift(a)).collect() }
    }

    pub fn compose(&self, curve: &[Laurent<S>]) -> Vec<Laurent<S>> {
        self.components.iter().map(|p| p.compose(curve)).collect()
    }

    pub fn display_with(&self, names: &[&str]) -> Vec<String> {
        self.components.iter().map(|p| p.display_with(names)).collect()
    }
}

trait Ring: Sized {
    type Scalar: Scalar;
    fn from_scalar(c: Self::Scalar, nvars: usize) -> Self;
    fn variable(i: usize, nvars: usize) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn constant_value(&self) -> Option<Self::Scalar>;
    fn power(&self, k: i32) -> std::result::Result<Self, &'static str>;
}

impl<S: Scalar> Ring for Poly<S> {
    type Scalar = S;
    fn from_scalar(c: S, nvars: usize) -> Self {
        Poly::constant(nvars, c)
    }
    fn variable(i: usize, nvars: usize) -> Self {
        Poly::var(nvars, i)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn constant_value(&self) -> Option<S> {
        self.as_constant()
    }
    fn power(&self, k: i32) -> std::result::Result<Self, &'static str> {
        if k < 0 {
            return Err("negative exponents are not allowed in polynomials");
        }
        Ok(self.pow(k as u32))
    }
}

impl<S: Scalar> Ring for Laurent<S> {
    type Scalar = S;
    fn from_scalar(c: S, _: usize) -> Self {
        Laurent::constant(c)
    }
    fn variable(_: usize, _: usize) -> Self {
        Laurent::monomial(S::one(), 1)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn constant_value(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }
    fn power(&self, k: i32) -> std::result::Result<Self, &'static str> {
        if k >= 0 {
            return Ok(self.pow(k as u32));
        }
        if self.terms.len() != 1 {
            return Err("negative exponents need a monomial base");
        }
        let (e, c) = self.terms.iter().next().expect("one term");
        let inv = Laurent::monomial(S::one() / c.clone(), -*e);
        Ok(inv.pow((-k) as u32))
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn new(text: &str, names: &'a [&'a str]) -> Self {
        Parser { chars: text.chars().collect(), pos: 0, names }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::PolyParse { column: self.pos + 1, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parse<R: Ring>(mut self) -> Result<R> {
        if self.peek().is_none() {
            return Err(self.error("empty expression"));
        }
        let value = self.expr::<R>()?;
        if self.peek().is_some() {
            return Err(self.error(format!("unexpected '{}'", self.chars[self.pos])));
        }
        Ok(value)
    }

    fn expr<R: Ring>(&mut self) -> Result<R> {
        let nvars = self.names.len();
        let minus_one = || R::from_scalar(-R::Scalar::one(), nvars);
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.term::<R>()?.times(&minus_one())
            }
            Some('+') => {
                self.pos += 1;
                self.term::<R>()?
            }
            _ => self.term::<R>()?,
        };
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            let t = self.term::<R>()?;
            acc = if c == '+' { acc.plus(&t) } else { acc.plus(&t.times(&minus_one())) };
        }
        Ok(acc)
    }

    fn term<R: Ring>(&mut self) -> Result<R> {
        let mut acc = self.factor::<R>()?;
        while let Some(c @ ('*' | '/')) = self.peek() {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let f = self.factor::<R>()?;
            if c == '*' {
                acc = acc.times(&f);
            } else {
                match f.constant_value() {
                    Some(v) if !v.is_zero() => {
                        acc = acc.times(&R::from_scalar(R::Scalar::one() / v, self.names.len()))
                    }
                    _ => {
                        self.pos = start;
                        return Err(self.error("division only by non-zero constants"));
                    }
                }
            }
        }
        Ok(acc)
    }

    fn factor<R: Ring>(&mut self) -> Result<R> {
        let base = self.atom::<R>()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let negative = self.peek() == Some('-');
            if negative {
                self.pos += 1;
            }
            let start = self.pos;
            let k = self.integer()?;
            let k: i32 = k.parse().map_err(|_| {
                self.pos = start;
                self.error("exponent too large")
            })?;
            let k = if negative { -k } else { k };
            return base.power(k).map_err(|m| {
                self.pos = start;
                self.error(m)
            });
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn atom<R: Ring>(&mut self) -> Result<R> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr::<R>()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.integer()?;
                let value = digits.parse::<R::Scalar>().map_err(|_| self.error("invalid number"))?;
                Ok(R::from_scalar(value, self.names.len()))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len()
                    && (self.chars[self.pos].is_alphanumeric() || matches!(self.chars[self.pos], '_' | '\''))
                {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(R::variable(i, self.names.len())),
                    None => {
                        self.pos = start;
                        Err(self.error(format!("unknown variable '{name}'")))
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn parse_and_evaluate() {
        let p = Poly::<Rational>::parse("x^2*y/2 - 3*(x - y) + 1", &["x", "y"]).unwrap();
        assert_eq!(p.eval(&[q(2, 1), q(3, 1)]), q(10, 1));
        assert_eq!(p.eval(&[q(1, 1), q(0, 1)]), q(-2, 1));
        assert_eq!(p.total_degree(), Some(3));
        let same = Poly::<Rational>::parse(&p.display_with(&["x", "y"]), &["x", "y"]).unwrap();
        assert_eq!(same, p);
        assert!(matches!(Poly::<Rational>::parse_default("x2 - z", 3), Err(Error::PolyParse { column: 6, .. })));
        assert_eq!(Poly::<Rational>::parse_default("y*z", 3).unwrap(), Poly::var(3, 1).mul(&Poly::var(3, 2)));
    }

    #[test]
    fn parse_errors_report_columns() {
        let err = Poly::<Rational>::parse("x + * y", &["x", "y"]).unwrap_err();
        assert!(matches!(err, Error::PolyParse { column: 5, .. }), "{err:?}");
        let err = Poly::<Rational>::parse("x / y", &["x", "y"]).unwrap_err();
        assert!(matches!(err, Error::PolyParse { column: 5, .. }), "{err:?}");
        assert!(Poly::<Rational>::parse("x^-1", &["x"]).is_err());
        assert!(Poly::<Rational>::parse("(x", &["x"]).is_err());
        assert!(Poly::<Rational>::parse("", &["x"]).is_err());
    }

    #[test]
    fn derivative_and_shift() {
        let p = Poly::<Rational>::parse("x^3 + x*y", &["x", "y"]).unwrap();
        assert_eq!(p.derivative(0), Poly::parse("3*x^2 + y", &["x", "y"]).unwrap());
        let shifted = p.shift(&[q(1, 1), q(2, 1)]);
        for pt in [[q(0, 1), q(0, 1)], [q(1, 2), q(-3, 1)]] {
            let moved = [pt[0].clone() + q(1, 1), pt[1].clone() + q(2, 1)];
            assert_eq!(shifted.eval(&pt), p.eval(&moved));
        }
    }

    #[test]
    fn laurent_arithmetic() {
        let a = Laurent::<Rational>::parse("s^-2 + 3 - s/2", "s").unwrap();
        assert_eq!(a.valuation(), Some(-2));
        assert_eq!(a.coeff(1), q(-1, 2));
        let b = Laurent::<Rational>::parse("(1 + s)^2", "s").unwrap();
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(b.div_exact(&Laurent::parse("1 - s", "s").unwrap()), None);
        assert_eq!(a.eval(&q(2, 1)), q(1, 4) + q(3, 1) - q(1, 1));
        assert_eq!(Laurent::<Rational>::parse(&a.to_string(), "s").unwrap(), a);
        assert_eq!(a.rescale(&q(2, 1)).eval(&q(1, 1)), a.eval(&q(2, 1)));
    }

    #[test]
    fn vector_field_brackets() {
        let names = ["x", "y", "z"];
        let x = VectorField::<Rational>::parse(&["1", "0", "y^2/2"], &names).unwrap();
        let y = VectorField::<Rational>::parse(&["0", "1", "0"], &names).unwrap();
        let xy = x.bracket(&y);
        assert_eq!(xy, VectorField::parse(&["0", "0", "-y"], &names).unwrap());
        assert_eq!(y.bracket(&xy), VectorField::parse(&["0", "0", "-1"], &names).unwrap());
        assert!(x.bracket(&xy).is_zero());
        assert!(x.bracket(&x).is_zero());
    }

    #[test]
    fn compose_with_curve() {
        let p = Poly::<Rational>::parse("x*y^2", &["x", "y"]).unwrap();
        let curve = [Laurent::constant(q(3, 1)), Laurent::monomial(q(2, 1), 1)];
        assert_eq!(p.compose(&curve), Laurent::monomial(q(12, 1), 2));
    }
}
