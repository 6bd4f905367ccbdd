//! Binary forms: homogeneous polynomials in `s, t`.
//!
//! A form of degree `D` stores `D + 1` coefficients, index `i` holding the coefficient of
//! `s^(D-i) t^i`. Negative degrees are allowed and carry no coefficients; they stand for the
//! zero entries of graded matrices whose slot has negative degree.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{format_scalar, is_negative, Field};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BinaryForm<F> {
    degree: i64,
    coeffs: Vec<F>,
}

fn slots(degree: i64) -> usize {
    if degree < 0 {
        0
    } else {
        degree as usize + 1
    }
}

impl<F: Field> BinaryForm<F> {
    pub fn zero(degree: i64) -> Self {
        BinaryForm {
            degree,
            coeffs: vec![F::zero(); slots(degree)],
        }
    }

    pub fn constant(c: F) -> Self {
        BinaryForm {
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    /// `c * s^a * t^b`.
    pub fn monomial(c: F, a: u32, b: u32) -> Self {
        let mut f = Self::zero((a + b) as i64);
        f.coeffs[b as usize] = c;
        f
    }

    pub fn s() -> Self {
        Self::monomial(F::one(), 1, 0)
    }

    pub fn t() -> Self {
        Self::monomial(F::one(), 0, 1)
    }

    pub fn from_coeffs(degree: i64, coeffs: Vec<F>) -> Result<Self> {
        if coeffs.len() != slots(degree) {
            return Err(Error::DegreeMismatch(degree, coeffs.len() as i64 - 1));
        }
        Ok(BinaryForm { degree, coeffs })
    }

    pub fn from_i64_coeffs(degree: i64, coeffs: &[i64]) -> Self {
        Self::from_coeffs(degree, coeffs.iter().map(|&c| F::from_i64(c)).collect())
            .expect("coefficient count matches degree")
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    /// Coefficient of `s^(degree-i) t^i`.
    pub fn coeff(&self, i: usize) -> F {
        self.coeffs.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.degree == 0 && !self.is_zero()
    }

    fn combine(&self, rhs: &Self, f: impl Fn(F, F) -> F) -> Result<Self> {
        if self.degree != rhs.degree {
            if rhs.is_zero() {
                return Ok(self.clone());
            }
            if self.is_zero() {
                return Ok(rhs.map(|c| f(F::zero(), c.clone())));
            }
            return Err(Error::DegreeMismatch(self.degree, rhs.degree));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| f(a.clone(), b.clone()))
            .collect();
        Ok(BinaryForm {
            degree: self.degree,
            coeffs,
        })
    }

    fn map(&self, f: impl Fn(&F) -> F) -> Self {
        BinaryForm {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Sum; a zero operand of another degree is absorbed.
    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.combine(rhs, |a, b| a - b)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let degree = self.degree + rhs.degree;
        let mut out = Self::zero(degree);
        if out.coeffs.is_empty() {
            return out;
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a.clone())
    }

    /// Multiplies by `s^a t^b`.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        let degree = self.degree + (a + b) as i64;
        let mut out = Self::zero(degree);
        if self.degree >= 0 {
            for (i, c) in self.coeffs.iter().enumerate() {
                out.coeffs[i + b as usize] = c.clone();
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, s0: &F, t0: &F) -> Result<F> {
        if s0.is_zero() && t0.is_zero() {
            return Err(Error::ZeroPoint);
        }
        let n = self.coeffs.len();
        let mut sp = vec![F::one(); n];
        let mut tp = vec![F::one(); n];
        for k in 1..n {
            sp[k] = sp[k - 1].clone() * s0.clone();
            tp[k] = tp[k - 1].clone() * t0.clone();
        }
        let mut acc = F::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c.clone() * sp[n - 1 - i].clone() * tp[i].clone();
        }
        Ok(acc)
    }

    /// Index of the first nonzero coefficient (the power of `t` dividing the form).
    fn t_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Index of the last nonzero coefficient.
    fn t_top(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Exponents `(a, b)` of the largest monomial `s^a t^b` dividing a nonzero form.
    pub fn monomial_content(&self) -> Option<(u32, u32)> {
        let lo = self.t_valuation()?;
        let hi = self.t_top()?;
        Some(((self.degree as usize - hi) as u32, lo as u32))
    }

    /// Quotient by `s^a t^b`, if it divides.
    pub fn div_monomial(&self, a: u32, b: u32) -> Option<Self> {
        let degree = self.degree - (a + b) as i64;
        if self.is_zero() {
            return Some(Self::zero(degree));
        }
        if degree < 0 {
            return None;
        }
        let (sa, tb) = self.monomial_content()?;
        if sa < a || tb < b {
            return None;
        }
        let coeffs = self.coeffs[b as usize..b as usize + slots(degree)].to_vec();
        Some(BinaryForm { degree, coeffs })
    }

    /// Exact quotient `self / divisor`, `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let degree = self.degree - divisor.degree;
        if self.is_zero() {
            return Some(Self::zero(degree));
        }
        let g_lo = divisor.t_valuation()?;
        if degree < 0 {
            return None;
        }
        // Low-order-first division of the dehomogenized polynomials in t.
        let mut rem = self.coeffs.clone();
        let inv = divisor.coeffs[g_lo].inv().expect("nonzero pivot");
        let mut q = vec![F::zero(); slots(degree)];
        for k in 0..q.len() {
            let idx = k + g_lo;
            if idx >= rem.len() {
                break;
            }
            let c = rem[idx].clone() * inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, g) in divisor.coeffs.iter().enumerate().skip(g_lo) {
                if !g.is_zero() {
                    if k + j >= rem.len() {
                        return None;
                    }
                    rem[k + j] -= c.clone() * g.clone();
                }
            }
            q[k] = c;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(BinaryForm { degree, coeffs: q })
        } else {
            None
        }
    }

    /// Divides by the leading coefficient of the dehomogenization at `s = 1`.
    pub fn monic(&self) -> Self {
        match self.t_top() {
            Some(hi) => {
                let inv = self.coeffs[hi].inv().expect("nonzero");
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    /// Greatest common divisor, monic at `s = 1`; a constant gcd is returned as `1`.
    pub fn gcd(forms: &[Self]) -> Result<Self> {
        let nonzero: Vec<&Self> = forms.iter().filter(|f| !f.is_zero()).collect();
        if nonzero.is_empty() {
            return Err(Error::AllZero);
        }
        let mut min_s = u32::MAX;
        let mut min_t = u32::MAX;
        let mut g: Option<Vec<F>> = None;
        for f in nonzero {
            let (a, b) = f.monomial_content().expect("nonzero form");
            min_s = min_s.min(a);
            min_t = min_t.min(b);
            let core = f.div_monomial(a, b).expect("content divides");
            let poly = trim(core.coeffs);
            g = Some(match g {
                None => poly,
                Some(h) => poly_gcd(h, poly),
            });
            if g.as_ref().is_some_and(|h| h.len() == 1) && min_s == 0 && min_t == 0 {
                break;
            }
        }
        let mut core = g.expect("at least one form");
        let lead = core.last().expect("nonzero").inv().expect("nonzero");
        for c in core.iter_mut() {
            *c *= lead.clone();
        }
        let degree = core.len() as i64 - 1;
        let core = BinaryForm {
            degree,
            coeffs: core,
        };
        Ok(core.shift(min_s, min_t))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let terms = parse_terms::<F>(text)?;
        let degree = terms
            .iter()
            .map(|(_, a, b)| (a + b) as i64)
            .next()
            .unwrap_or(0);
        Self::assemble(terms, degree)
    }

    /// Parses with a known degree, so that `0` and other degree-free texts are accepted.
    pub fn parse_with_degree(text: &str, degree: i64) -> Result<Self> {
        let terms = parse_terms::<F>(text)?;
        Self::assemble(terms, degree)
    }

    fn assemble(terms: Vec<(F, u32, u32)>, degree: i64) -> Result<Self> {
        let mut f = Self::zero(degree);
        for (c, a, b) in terms {
            if c.is_zero() {
                continue;
            }
            if (a + b) as i64 != degree {
                return Err(Error::DegreeMismatch(degree, (a + b) as i64));
            }
            f.coeffs[b as usize] += c;
        }
        Ok(f)
    }
}

fn trim<F: Field>(mut v: Vec<F>) -> Vec<F> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

/// Euclidean gcd of univariate polynomials given low-order first, both nonzero.
fn poly_gcd<F: Field>(mut a: Vec<F>, mut b: Vec<F>) -> Vec<F> {
    a = trim(a);
    b = trim(b);
    while !(b.len() == 1 && b[0].is_zero()) {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn poly_rem<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let mut r = a.to_vec();
    let lead_inv = b.last().expect("nonempty").inv().expect("nonzero leading");
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let c = r.last().unwrap().clone() * lead_inv.clone();
        let off = r.len() - b.len();
        for (j, bj) in b.iter().enumerate() {
            r[off + j] -= c.clone() * bj.clone();
        }
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(F::zero());
        }
    }
    trim(r)
}

impl<F: Field> fmt::Display for BinaryForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let a = self.degree as usize - i;
            let b = i;
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            if neg {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let mut parts = Vec::new();
            if !mag.is_one() || (a == 0 && b == 0) {
                parts.push(format_scalar(&mag));
            }
            match a {
                0 => {}
                1 => parts.push("s".to_string()),
                _ => parts.push(format!("s^{a}")),
            }
            match b {
                0 => {}
                1 => parts.push("t".to_string()),
                _ => parts.push(format!("t^{b}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Parses a sum of terms `c*s^a*t^b` into `(coefficient, a, b)` triples.
fn parse_terms<F: Field>(text: &str) -> Result<Vec<(F, u32, u32)>> {
    let bytes: Vec<char> = text.chars().collect();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let read_int = |pos: &mut usize| -> Option<BigInt> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            None
        } else {
            bytes[start..*pos].iter().collect::<String>().parse().ok()
        }
    };
    let mut terms = Vec::new();
    skip_ws(&mut pos);
    if pos == bytes.len() {
        return Err(Error::parse(0, "empty form"));
    }
    loop {
        skip_ws(&mut pos);
        let mut negative = false;
        while pos < bytes.len() && (bytes[pos] == '+' || bytes[pos] == '-' || bytes[pos] == '\u{2212}') {
            if bytes[pos] != '+' {
                negative = !negative;
            }
            pos += 1;
            skip_ws(&mut pos);
        }
        let mut coeff = F::one();
        let mut a = 0u32;
        let mut b = 0u32;
        loop {
            skip_ws(&mut pos);
            let at = pos;
            if pos < bytes.len() && bytes[pos].is_ascii_digit() {
                let num = read_int(&mut pos).ok_or_else(|| Error::parse(at, "bad integer"))?;
                let mut den = BigInt::one();
                if pos < bytes.len() && bytes[pos] == '/' {
                    pos += 1;
                    den = read_int(&mut pos)
                        .ok_or_else(|| Error::parse(pos, "expected denominator"))?;
                }
                let c = F::from_fraction(&num, &den)
                    .ok_or_else(|| Error::parse(at, "denominator vanishes in the field"))?;
                coeff *= c;
            } else if pos < bytes.len() && (bytes[pos] == 's' || bytes[pos] == 't') {
                let var = bytes[pos];
                pos += 1;
                skip_ws(&mut pos);
                let mut e = 1u32;
                if pos < bytes.len() && bytes[pos] == '^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    let ep = pos;
                    e = read_int(&mut pos)
                        .and_then(|v| u32::try_from(v).ok())
                        .ok_or_else(|| Error::parse(ep, "expected exponent"))?;
                }
                if var == 's' {
                    a += e;
                } else {
                    b += e;
                }
            } else {
                return Err(Error::parse(at, "expected coefficient, `s` or `t`"));
            }
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == '*' {
                pos += 1;
                continue;
            }
            break;
        }
        if negative {
            coeff = -coeff;
        }
        terms.push((coeff, a, b));
        skip_ws(&mut pos);
        if pos == bytes.len() {
            break;
        }
        if !(bytes[pos] == '+' || bytes[pos] == '-' || bytes[pos] == '\u{2212}') {
            return Err(Error::parse(pos, "expected `+` or `-`"));
        }
    }
    Ok(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_rational::BigRational;

    type Q = BinaryForm<BigRational>;
    type G = BinaryForm<Fp<101>>;

    fn q(text: &str) -> Q {
        Q::parse(text).unwrap()
    }

    #[test]
    fn monomial_product() {
        assert_eq!(q("s^10").mul(&Q::t()), q("s^10*t"));
    }

    #[test]
    fn difference_of_pure_powers() {
        let f = q("t^11").try_sub(&q("s^11")).unwrap();
        assert_eq!(f.to_string(), "-s^11+t^11");
    }

    #[test]
    fn add_mismatch() {
        assert_eq!(
            q("s^2").try_add(&q("s")),
            Err(Error::DegreeMismatch(2, 1))
        );
        assert_eq!(q("s^2").try_add(&Q::zero(5)).unwrap(), q("s^2"));
        assert_eq!(Q::zero(-1).try_add(&q("s*t")).unwrap(), q("s*t"));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(Q::gcd(&[q("s^2*t"), q("s^3")]).unwrap(), q("s^2"));
        let g = Q::gcd(&[q("s^10*t"), q("-s^11+t^11"), q("-s*t^10")]).unwrap();
        assert_eq!(g, Q::one());
        assert_eq!(Q::gcd(&[Q::zero(3)]), Err(Error::AllZero));
        assert_eq!(
            Q::gcd(&[q("s^2-t^2"), q("s^2+2*s*t+t^2")]).unwrap(),
            q("s+t")
        );
    }

    #[test]
    fn eval_examples() {
        let one = BigRational::one();
        let zero = BigRational::zero();
        assert!(q("s^2-t^2").eval(&one, &one).unwrap().is_zero());
        assert!(q("s^10*t").eval(&zero, &one).unwrap().is_zero());
        assert!(q("-s*t^10").eval(&zero, &one).unwrap().is_zero());
        assert_eq!(q("-s^11+t^11").eval(&zero, &one).unwrap(), one);
        assert_eq!(q("s").eval(&zero, &zero), Err(Error::ZeroPoint));
    }

    #[test]
    fn division() {
        let f = q("s^2-t^2");
        assert_eq!(f.div_exact(&q("s-t")).unwrap(), q("s+t"));
        assert_eq!(f.div_exact(&q("s")), None);
        assert_eq!(q("s^3*t^2").div_monomial(2, 1).unwrap(), q("s*t"));
        assert_eq!(q("s^3*t^2").div_monomial(0, 3), None);
        assert_eq!(q("s^4*t+s^3*t^2").div_exact(&q("s^3*t")).unwrap(), q("s+t"));
    }

    #[test]
    fn print_parse_round_trip() {
        for text in ["-s^11+t^11", "s^4*t", "3*s^2-2*s*t+t^2", "1", "-1", "1/2*s+t"] {
            assert_eq!(q(text).to_string(), text);
        }
        assert_eq!(Q::parse_with_degree("0", 4).unwrap(), Q::zero(4));
        assert_eq!(G::parse("-s").unwrap().to_string(), "-s");
        assert!(Q::parse("s^2+t").is_err());
        assert!(Q::parse("s^2+").is_err());
        assert!(Q::parse("x").is_err());
    }
}
