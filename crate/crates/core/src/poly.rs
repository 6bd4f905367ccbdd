//! Homogeneous forms in `x0..xn` and their restriction to the rational normal curve
//! `x_m = s^(e-m) t^m` (`m <= e`), `x_m = 0` (`m > e`).

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{format_scalar, is_negative, Field, FieldSpec};
use crate::form::BinaryForm;

/// Hypersurface degree `d`, curve degree `e`, ambient dimension `n`, and the coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveContext {
    pub d: u32,
    pub e: u32,
    pub n: u32,
    pub field: FieldSpec,
}

impl CurveContext {
    pub fn new(d: u32, e: u32, n: u32, field: FieldSpec) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidContext(format!("d = {d} must be at least 2")));
        }
        if e < 1 {
            return Err(Error::InvalidContext(format!("e = {e} must be at least 1")));
        }
        if n < 3 {
            return Err(Error::InvalidContext(format!("n = {n} must be at least 3")));
        }
        if e > n {
            return Err(Error::InvalidContext(format!("e = {e} exceeds n = {n}")));
        }
        let field = field.validate()?;
        let p = field.characteristic();
        if p != 0 && (e as u64).is_multiple_of(p) {
            return Err(Error::InvalidContext(format!(
                "field characteristic {p} divides the curve degree e = {e}"
            )));
        }
        Ok(CurveContext { d, e, n, field })
    }

    pub fn for_field<F: Field>(d: u32, e: u32, n: u32) -> Result<Self> {
        Self::new(d, e, n, F::spec())
    }

    pub fn with_n(self, n: u32) -> Result<Self> {
        Self::new(self.d, self.e, n, self.field)
    }

    pub fn nvars(&self) -> usize {
        self.n as usize + 1
    }
}

impl fmt::Display for CurveContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(d,e,n) = ({},{},{}) over {}", self.d, self.e, self.n, self.field)
    }
}

pub type Exponents = Vec<u32>;

/// A homogeneous polynomial with sparse terms keyed by exponent vector.
///
/// Keys are ordered lexicographically, so the last entry is the leading term in graded
/// lexicographic order with `x0 > x1 > ... > xn`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly<F> {
    context: CurveContext,
    degree: u32,
    terms: BTreeMap<Exponents, F>,
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(context: CurveContext, degree: u32) -> Self {
        MultiPoly {
            context,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(context: CurveContext, c: F) -> Self {
        Self::monomial(context, vec![0; context.nvars()], c)
    }

    pub fn monomial(context: CurveContext, exps: Exponents, c: F) -> Self {
        assert_eq!(exps.len(), context.nvars(), "exponent vector length");
        let degree = exps.iter().sum();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        MultiPoly {
            context,
            degree,
            terms,
        }
    }

    pub fn var(context: CurveContext, m: usize) -> Self {
        let mut exps = vec![0; context.nvars()];
        exps[m] = 1;
        Self::monomial(context, exps, F::one())
    }

    /// Product of variables given by index, e.g. `[0, 0, 3]` for `x0^2*x3`.
    pub fn from_vars(context: CurveContext, vars: &[usize]) -> Self {
        let mut exps = vec![0; context.nvars()];
        for &v in vars {
            exps[v] += 1;
        }
        Self::monomial(context, exps, F::one())
    }

    pub fn context(&self) -> CurveContext {
        self.context
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, F> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_term(&self) -> Option<(&Exponents, &F)> {
        self.terms.last_key_value()
    }

    fn add_term(&mut self, exps: Exponents, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_same(&self, rhs: &Self) -> Result<()> {
        if self.degree != rhs.degree && !self.is_zero() && !rhs.is_zero() {
            return Err(Error::DegreeMismatch(self.degree as i64, rhs.degree as i64));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.check_same(rhs)?;
        let mut out = if self.is_zero() {
            Self::zero(self.context, rhs.degree)
        } else {
            self.clone()
        };
        for (k, v) in &rhs.terms {
            out.add_term(k.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.try_add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Self::zero(self.context, self.degree);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero(self.context, self.degree + rhs.degree);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let exps = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(exps, x.clone() * y.clone());
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.context, F::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// The same polynomial read in a context with at least as many variables.
    pub fn embed(&self, context: CurveContext) -> Result<Self> {
        if context.n < self.context.n {
            return Err(Error::InvalidContext(format!(
                "cannot embed from n = {} into n = {}",
                self.context.n, context.n
            )));
        }
        let mut out = Self::zero(context, self.degree);
        for (k, v) in &self.terms {
            let mut exps = k.clone();
            exps.resize(context.nvars(), 0);
            out.add_term(exps, v.clone());
        }
        Ok(out)
    }

    pub fn partial(&self, m: usize) -> Self {
        let mut out = Self::zero(self.context, self.degree.saturating_sub(1));
        for (k, v) in &self.terms {
            if k[m] == 0 {
                continue;
            }
            let mut exps = k.clone();
            exps[m] -= 1;
            out.add_term(exps, v.clone() * F::from_i64(k[m] as i64));
        }
        out
    }

    /// Substitutes the curve parametrization; the result has degree `e * degree`.
    pub fn restrict(&self) -> BinaryForm<F> {
        let e = self.context.e;
        let degree = (e * self.degree) as i64;
        let mut coeffs = vec![F::zero(); degree as usize + 1];
        for (k, v) in &self.terms {
            if k.iter().skip(e as usize + 1).any(|&x| x > 0) {
                continue;
            }
            let b: u32 = k.iter().enumerate().map(|(m, &x)| m as u32 * x).sum();
            coeffs[b as usize] += v.clone();
        }
        BinaryForm::from_coeffs(degree, coeffs).expect("sized by degree")
    }

    /// Splits off the terms divisible by `x_k`, returning the cofactor and the rest.
    pub fn split_variable(&self, k: usize) -> (Self, Self) {
        let mut cofactor = Self::zero(self.context, self.degree.saturating_sub(1));
        let mut rest = Self::zero(self.context, self.degree);
        for (exps, v) in &self.terms {
            if exps[k] > 0 {
                let mut e = exps.clone();
                e[k] -= 1;
                cofactor.add_term(e, v.clone());
            } else {
                rest.add_term(exps.clone(), v.clone());
            }
        }
        (cofactor, rest)
    }

    /// Parses `text` and checks it is homogeneous of `expected_degree`.
    pub fn parse(text: &str, context: CurveContext, expected_degree: u32) -> Result<Self> {
        let mut parser = Parser {
            chars: text.chars().collect(),
            pos: 0,
            nvars: context.nvars(),
        };
        let raw = parser.expr::<F>()?;
        parser.ws();
        if parser.pos != parser.chars.len() {
            return Err(Error::parse(parser.pos, "unexpected trailing input"));
        }
        let mut out = Self::zero(context, expected_degree);
        for (exps, c) in raw {
            if c.is_zero() {
                continue;
            }
            let deg: u32 = exps.iter().sum();
            if deg != expected_degree {
                return Err(Error::NotHomogeneous {
                    expected: expected_degree,
                    detail: format!("term of degree {deg} in `{}`", text.trim()),
                });
            }
            out.add_term(exps, c);
        }
        Ok(out)
    }
}

/// `Q_{i,j} = x_i x_{j-1} - x_{i-1} x_j` for `1 <= i < j <= e`.
pub fn build_quadric<F: Field>(context: CurveContext, i: u32, j: u32) -> Result<MultiPoly<F>> {
    if !(1 <= i && i < j && j <= context.e) {
        return Err(Error::IndexOutOfRange(format!(
            "quadric Q({i},{j}) needs 1 <= i < j <= e = {}",
            context.e
        )));
    }
    let (i, j) = (i as usize, j as usize);
    let a = MultiPoly::from_vars(context, &[i, j - 1]);
    let b = MultiPoly::from_vars(context, &[i - 1, j]);
    a.try_sub(&b)
}

/// Restrictions of the partial derivatives `dF/dx_m`, `m = 0..=n`.
pub fn gradient_on_curve<F: Field>(f: &MultiPoly<F>) -> Vec<BinaryForm<F>> {
    (0..f.context().nvars())
        .map(|m| f.partial(m).restrict())
        .collect()
}

/// A degree-`k` lift of a form of degree `e*k`: `s^(ek-i) t^i` with `i = q e + r` goes to
/// `x_e^q x_r x_0^(k-q-1)`, and `t^(ek)` to `x_e^k`.
pub fn lift_binary_form<F: Field>(
    h: &BinaryForm<F>,
    context: CurveContext,
    k: u32,
) -> Result<MultiPoly<F>> {
    let e = context.e as usize;
    if h.degree() != (e as i64) * k as i64 {
        return Err(Error::Precondition(format!(
            "form of degree {} cannot be lifted to degree {k}: expected degree e*k = {}",
            h.degree(),
            e as i64 * k as i64
        )));
    }
    let mut out = MultiPoly::zero(context, k);
    let total = e * k as usize;
    for (i, c) in h.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut exps = vec![0u32; context.nvars()];
        if i == total {
            exps[e] += k;
        } else {
            let (q, r) = (i / e, i % e);
            exps[e] += q as u32;
            exps[r] += 1;
            exps[0] += k - q as u32 - 1;
        }
        out.add_term(exps, c.clone());
    }
    Ok(out)
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (exps, c)) in self.terms.iter().rev().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts = Vec::new();
            let is_const = exps.iter().all(|&x| x == 0);
            if !mag.is_one() || is_const {
                parts.push(format_scalar(&mag));
            }
            for (m, &x) in exps.iter().enumerate() {
                match x {
                    0 => {}
                    1 => parts.push(format!("x{m}")),
                    _ => parts.push(format!("x{m}^{x}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

type RawPoly<F> = Vec<(Exponents, F)>;

struct Parser {
    chars: Vec<char>,
    pos: usize,
    nvars: usize,
}

impl Parser {
    fn ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.ws();
        self.chars.get(self.pos).copied()
    }

    fn int(&mut self) -> Option<BigInt> {
        self.ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (start != self.pos).then(|| {
            self.chars[start..self.pos]
                .iter()
                .collect::<String>()
                .parse()
                .expect("digits")
        })
    }

    fn expr<F: Field>(&mut self) -> Result<RawPoly<F>> {
        let mut acc: RawPoly<F> = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    1
                }
                Some('-') | Some('\u{2212}') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            let term = self.term::<F>()?;
            for (e, c) in term {
                acc.push((e, if sign < 0 { -c } else { c }));
            }
        }
        Ok(collect(acc))
    }

    fn term<F: Field>(&mut self) -> Result<RawPoly<F>> {
        let mut acc = self.power::<F>()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            let rhs = self.power::<F>()?;
            acc = multiply(&acc, &rhs);
        }
        Ok(acc)
    }

    fn power<F: Field>(&mut self) -> Result<RawPoly<F>> {
        let base = self.atom::<F>()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let at = self.pos;
            let k: u32 = self
                .int()
                .and_then(|v| u32::try_from(v).ok())
                .ok_or_else(|| Error::parse(at, "expected exponent"))?;
            let mut acc = vec![(vec![0; self.nvars], F::one())];
            for _ in 0..k {
                acc = multiply(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom<F: Field>(&mut self) -> Result<RawPoly<F>> {
        let at = {
            self.ws();
            self.pos
        };
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr::<F>()?;
                if self.peek() != Some(')') {
                    return Err(Error::parse(self.pos, "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('-') | Some('\u{2212}') => {
                self.pos += 1;
                let inner = self.atom::<F>()?;
                Ok(inner.into_iter().map(|(e, c)| (e, -c)).collect())
            }
            Some('x') => {
                self.pos += 1;
                let idx = self
                    .int()
                    .ok_or_else(|| Error::parse(at + 1, "expected variable index"))?;
                let idx: usize = usize::try_from(idx)
                    .ok()
                    .filter(|&i| i < self.nvars)
                    .ok_or_else(|| {
                        Error::IndexOutOfRange(format!(
                            "variable at position {at} exceeds x{}",
                            self.nvars - 1
                        ))
                    })?;
                let mut exps = vec![0; self.nvars];
                exps[idx] = 1;
                Ok(vec![(exps, F::one())])
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.int().expect("digit present");
                Ok(vec![(vec![0; self.nvars], F::from_bigint(&v))])
            }
            _ => Err(Error::parse(at, "expected number, variable or `(`")),
        }
    }
}

fn multiply<F: Field>(a: &RawPoly<F>, b: &RawPoly<F>) -> RawPoly<F> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for (x, c) in a {
        for (y, d) in b {
            out.push((
                x.iter().zip(y).map(|(i, j)| i + j).collect(),
                c.clone() * d.clone(),
            ));
        }
    }
    collect(out)
}

fn collect<F: Field>(raw: RawPoly<F>) -> RawPoly<F> {
    let mut map: BTreeMap<Exponents, F> = BTreeMap::new();
    for (e, c) in raw {
        *map.entry(e).or_insert_with(F::zero) += c;
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}
