//! Sparse homogeneous polynomials over `ℚ`.
//!
//! A [`Form`] stores its coefficients in the plain monomial basis
//! `f = Σ c_I x^I`. The divided-power ("scaled") coefficients
//! `a_I = c_I · i₀!⋯iₙ!` that the catalecticant matrices are written in are
//! produced on demand by [`Form::scaled_coefficient`].
//!
//! The same type is used for forms in the dual ring `T = ℚ[y₀,…,yₙ]`, which act
//! on ordinary forms by differentiation ([`Form::apply_diff`]). Only the
//! variable letter used for printing differs.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact_linalg::MatrixQ;

/// Exact rational scalar; always kept in lowest terms with a positive denominator.
pub type Scalar = BigRational;

pub(crate) fn int(v: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(v))
}

pub(crate) fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Exponent vector of a monomial. Ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        Exponent(entries)
    }

    pub fn zero(nvars: usize) -> Self {
        Exponent(vec![0; nvars])
    }

    /// `x_i` as an exponent.
    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Exponent(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self ≥ other`.
    pub fn divides_into(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    /// `i₀!⋯iₙ!`
    pub fn factorial_product(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, &e| acc * factorial(e))
    }
}

impl Add for &Exponent {
    type Output = Exponent;

    fn add(self, rhs: &Exponent) -> Exponent {
        assert_eq!(self.0.len(), rhs.0.len(), "exponent length mismatch");
        Exponent(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All exponents of degree `t` in `nvars` variables, in descending graded-lex order.
///
/// ```
/// use secant_core::monomial_basis;
/// let b = monomial_basis(2, 2);
/// let entries: Vec<_> = b.iter().map(|e| e.entries().to_vec()).collect();
/// assert_eq!(entries, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
/// ```
pub fn monomial_basis(nvars: usize, t: u32) -> Vec<Exponent> {
    fn fill(prefix: &mut Vec<u32>, remaining_vars: usize, t: u32, out: &mut Vec<Exponent>) {
        if remaining_vars == 1 {
            prefix.push(t);
            out.push(Exponent(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=t).rev() {
            prefix.push(e);
            fill(prefix, remaining_vars - 1, t - e, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if t == 0 {
            out.push(Exponent(Vec::new()));
        }
        return out;
    }
    fill(&mut Vec::with_capacity(nvars), nvars, t, &mut out);
    out
}

/// A monomial basis together with the reverse lookup `exponent → position`.
#[derive(Clone, Debug)]
pub struct MonomialIndex {
    basis: Vec<Exponent>,
    position: HashMap<Exponent, usize>,
}

impl MonomialIndex {
    pub fn new(nvars: usize, t: u32) -> Self {
        let basis = monomial_basis(nvars, t);
        let position = basis
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        MonomialIndex { basis, position }
    }

    pub fn basis(&self) -> &[Exponent] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn position(&self, e: &Exponent) -> Option<usize> {
        self.position.get(e).copied()
    }
}

/// Homogeneous polynomial of fixed degree in a fixed number of variables.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Form {
    nvars: usize,
    degree: u32,
    coeffs: BTreeMap<Exponent, Scalar>,
}

impl Form {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        Form {
            nvars,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn monomial(exponent: Exponent, coeff: Scalar) -> Self {
        let mut f = Form::zero(exponent.nvars(), exponent.degree());
        f.add_term(exponent, coeff);
        f
    }

    /// Builds a form from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(nvars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Scalar)>,
    {
        let mut f = Form::zero(nvars, degree);
        for (e, c) in terms {
            if e.nvars() != nvars {
                return Err(Error::NvarsMismatch {
                    left: nvars,
                    right: e.nvars(),
                });
            }
            if e.degree() != degree {
                return Err(Error::Inhomogeneous {
                    expected: degree,
                    found: e.degree(),
                });
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    /// Linear form `Σ cᵢ xᵢ`.
    pub fn linear(coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Exponent::unit(n, i), c.clone()));
        Form::from_terms(n, 1, terms).expect("linear terms are homogeneous")
    }

    /// Reads a coefficient vector over `monomial_basis(nvars, degree)`.
    pub fn from_dense(nvars: usize, degree: u32, values: &[Scalar]) -> Result<Self> {
        let basis = monomial_basis(nvars, degree);
        if basis.len() != values.len() {
            return Err(Error::LengthMismatch {
                expected: basis.len(),
                found: values.len(),
            });
        }
        Form::from_terms(nvars, degree, basis.into_iter().zip(values.iter().cloned()))
    }

    /// Coefficient vector over the given basis (which must be of this degree).
    pub fn to_dense(&self, index: &MonomialIndex) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); index.len()];
        for (e, c) in &self.coeffs {
            let pos = index
                .position(e)
                .expect("monomial index built for a different degree");
            v[pos] = c.clone();
        }
        v
    }

    fn add_term(&mut self, e: Exponent, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.coeffs.iter().rev()
    }

    /// Plain coefficient `c_I` (zero if absent).
    pub fn coefficient(&self, e: &Exponent) -> Scalar {
        self.coeffs.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Divided-power coefficient `a_I = c_I · i₀!⋯iₙ!`.
    pub fn scaled_coefficient(&self, e: &Exponent) -> Result<Scalar> {
        if e.nvars() != self.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: e.nvars(),
            });
        }
        if e.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: e.degree(),
            });
        }
        Ok(match self.coeffs.get(e) {
            Some(c) => c * Scalar::from_integer(e.factorial_product()),
            None => Scalar::zero(),
        })
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        if s.is_zero() {
            return Form::zero(self.nvars, self.degree);
        }
        Form {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Form {
        let mut acc = Form::monomial(Exponent::zero(self.nvars), Scalar::one());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Same form viewed in more variables (new variables appended, unused).
    pub fn extend_vars(&self, nvars: usize) -> Form {
        assert!(nvars >= self.nvars, "cannot drop variables by extension");
        let coeffs = self
            .coeffs
            .iter()
            .map(|(e, c)| {
                let mut v = e.0.clone();
                v.resize(nvars, 0);
                (Exponent(v), c.clone())
            })
            .collect();
        Form {
            nvars,
            degree: self.degree,
            coeffs,
        }
    }

    /// Drops trailing variables. Fails if a dropped variable occurs.
    pub fn truncate_vars(&self, nvars: usize) -> Result<Form> {
        let mut out = Form::zero(nvars, self.degree);
        for (e, c) in &self.coeffs {
            if let Some(i) = e.0[nvars.min(e.0.len())..].iter().position(|&x| x > 0) {
                return Err(Error::VariableOutOfRange {
                    index: nvars + i,
                    nvars,
                });
            }
            out.coeffs.insert(Exponent(e.0[..nvars].to_vec()), c.clone());
        }
        Ok(out)
    }

    /// Contraction `g(∂₀,…,∂ₙ) f` with `g = self` in the dual ring.
    ///
    /// `∂^J x^I = I!/(I−J)! · x^{I−J}` when `J ≤ I`, and zero otherwise.
    pub fn apply_diff(&self, f: &Form) -> Result<Form> {
        if self.nvars != f.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: f.nvars,
            });
        }
        if self.degree > f.degree {
            return Err(Error::DegreeMismatch {
                expected: f.degree,
                found: self.degree,
            });
        }
        let mut out = Form::zero(f.nvars, f.degree - self.degree);
        for (j, gc) in &self.coeffs {
            for (i, fc) in &f.coeffs {
                if let Some(rest) = i.checked_sub(j) {
                    let falling: BigInt = i
                        .0
                        .iter()
                        .zip(&j.0)
                        .map(|(&a, &b)| ((a - b + 1)..=a).fold(BigInt::one(), |p, k| p * k))
                        .product();
                    out.add_term(rest, gc * fc * Scalar::from_integer(falling));
                }
            }
        }
        Ok(out)
    }

    /// `f(A·x)`: each `xᵢ` is replaced by `Σⱼ A[i][j] xⱼ`.
    pub fn substitute_linear(&self, change: &LinearChange) -> Result<Form> {
        let n = change.dim();
        if n != self.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: n,
            });
        }
        let images: Vec<Form> = (0..n)
            .map(|i| Form::linear(change.matrix().row(i)))
            .collect();
        Ok(self.substitute_images(&images))
    }

    /// Replaces `xᵢ` by the linear form `images[i]`, which may live in a
    /// different number of variables.
    pub(crate) fn substitute_images(&self, images: &[Form]) -> Form {
        debug_assert_eq!(images.len(), self.nvars);
        let m = images.first().map_or(self.nvars, Form::nvars);
        let mut power_cache: HashMap<(usize, u32), Form> = HashMap::new();
        let mut out = Form::zero(m, self.degree);
        for (e, c) in &self.coeffs {
            let mut term = Form::monomial(Exponent::zero(m), c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = power_cache
                    .entry((i, k))
                    .or_insert_with(|| images[i].pow(k));
                term = &term * &*p;
            }
            for (e, c) in term.coeffs {
                out.add_term(e, c);
            }
        }
        out
    }

    /// Text form with the given variable letter (`x` for forms, `y` for dual forms).
    pub fn to_text(&self, var: char) -> String {
        if self.coeffs.is_empty() {
            return if self.degree == 0 || self.nvars == 0 {
                "0".to_string()
            } else {
                format!("0*{var}0^{}", self.degree)
            };
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = format_monomial(e, var);
            if mono.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{abs}*{mono}"));
            }
        }
        s
    }
}

fn format_monomial(e: &Exponent, var: char) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.0.iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(format!("{var}{i}")),
            _ => parts.push(format!("{var}{i}^{k}")),
        }
    }
    parts.join("*")
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text('x'))
    }
}

impl Add for &Form {
    type Output = Form;

    fn add(self, rhs: &Form) -> Form {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in addition");
        assert_eq!(self.degree, rhs.degree, "degree mismatch in addition");
        let mut out = self.clone();
        for (e, c) in &rhs.coeffs {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Form {
    type Output = Form;

    fn neg(self) -> Form {
        self.scale(&-Scalar::one())
    }
}

impl Sub for &Form {
    type Output = Form;

    fn sub(self, rhs: &Form) -> Form {
        self + &(-rhs)
    }
}

impl Mul for &Form {
    type Output = Form;

    fn mul(self, rhs: &Form) -> Form {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in product");
        let mut out = Form::zero(self.nvars, self.degree + rhs.degree);
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

/// Invertible linear change of coordinates `x ↦ A·x`.
///
/// Substitution is a right action: `f∘(AB) = (f∘A)∘B`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearChange {
    matrix: MatrixQ,
}

impl LinearChange {
    pub fn new(matrix: MatrixQ) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(Error::LengthMismatch {
                expected: matrix.rows(),
                found: matrix.cols(),
            });
        }
        if crate::exact_linalg::rref(&matrix).rank != matrix.rows() {
            return Err(Error::SingularMatrix);
        }
        Ok(LinearChange { matrix })
    }

    pub fn identity(n: usize) -> Self {
        LinearChange {
            matrix: MatrixQ::identity(n),
        }
    }

    /// Sends `xᵢ ↦ x_{perm[i]}`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut m = MatrixQ::zeros(n, n);
        for (i, &p) in perm.iter().enumerate() {
            if p >= n {
                return Err(Error::VariableOutOfRange { index: p, nvars: n });
            }
            m.set(i, p, Scalar::one());
        }
        LinearChange::new(m)
    }

    pub fn matrix(&self) -> &MatrixQ {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn inverse(&self) -> LinearChange {
        LinearChange {
            matrix: self
                .matrix
                .inverse()
                .expect("invertibility checked at construction"),
        }
    }

    /// `A·B`, so that `f∘(A·B) = (f∘A)∘B`.
    pub fn compose(&self, other: &LinearChange) -> LinearChange {
        LinearChange {
            matrix: self.matrix.mul(&other.matrix),
        }
    }
}

/// Parses a form in variables `x0 … x{nvars-1}`.
pub fn parse_form(text: &str, nvars: usize) -> Result<Form> {
    Parser::new(text, 'x', nvars).parse()
}

/// Parses a form of the dual ring in variables `y0 … y{nvars-1}`.
pub fn parse_dual_form(text: &str, nvars: usize) -> Result<Form> {
    Parser::new(text, 'y', nvars).parse()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    var: u8,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, var: char, nvars: usize) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            var: var as u8,
            nvars,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse as integer"))
    }

    fn small_integer(&mut self) -> Result<u32> {
        let start = self.pos;
        let v = self.integer()?;
        u32::try_from(v).or_else(|_| {
            self.pos = start;
            self.err("integer too large")
        })
    }

    fn parse(mut self) -> Result<Form> {
        if self.peek().is_none() {
            return self.err("empty input");
        }
        let mut terms = Vec::new();
        let mut sign = if self.eat(b'-') { -1 } else { 1 };
        loop {
            let (e, c) = self.term()?;
            terms.push((e, if sign < 0 { -c } else { c }));
            match self.peek() {
                None => break,
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                Some(_) => return self.err("expected '+', '-' or end of input"),
            }
        }
        let degree = terms[0].0.degree();
        for (e, _) in &terms {
            if e.degree() != degree {
                return Err(Error::Inhomogeneous {
                    expected: degree,
                    found: e.degree(),
                });
            }
        }
        Form::from_terms(self.nvars, degree, terms)
    }

    fn term(&mut self) -> Result<(Exponent, Scalar)> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let coeff = if self.eat(b'/') {
                    let den = self.integer()?;
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    Scalar::new(num, den)
                } else {
                    Scalar::from_integer(num)
                };
                if self.eat(b'*') {
                    Ok((self.mono()?, coeff))
                } else {
                    Ok((Exponent::zero(self.nvars), coeff))
                }
            }
            Some(c) if c == self.var => Ok((self.mono()?, Scalar::one())),
            Some(_) => self.err("expected coefficient or variable"),
            None => self.err("unexpected end of input"),
        }
    }

    fn mono(&mut self) -> Result<Exponent> {
        let mut e = vec![0u32; self.nvars];
        loop {
            if !self.eat(self.var) {
                return self.err(format!("expected '{}'", self.var as char));
            }
            let at = self.pos;
            let idx = self.integer()?;
            let idx = usize::try_from(idx).unwrap_or(usize::MAX);
            if idx >= self.nvars {
                self.pos = at;
                return Err(Error::VariableOutOfRange {
                    index: idx,
                    nvars: self.nvars,
                });
            }
            let power = if self.eat(b'^') {
                self.small_integer()?
            } else {
                1
            };
            e[idx] += power;
            if !self.eat(b'*') {
                return Ok(Exponent(e));
            }
        }
    }
}
