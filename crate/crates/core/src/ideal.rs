//! Hypersurfaces through the curve, presented as `F = sum F_ij Q_ij + sum G_k x_k`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::poly::{build_quadric, CurveContext, MultiPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealCombination<F> {
    context: CurveContext,
    quadric_coeffs: BTreeMap<(u32, u32), MultiPoly<F>>,
    linear_coeffs: BTreeMap<u32, MultiPoly<F>>,
}

impl<F: Field> IdealCombination<F> {
    pub fn new(context: CurveContext) -> Self {
        IdealCombination {
            context,
            quadric_coeffs: BTreeMap::new(),
            linear_coeffs: BTreeMap::new(),
        }
    }

    pub fn context(&self) -> CurveContext {
        self.context
    }

    pub fn quadric_coeffs(&self) -> &BTreeMap<(u32, u32), MultiPoly<F>> {
        &self.quadric_coeffs
    }

    pub fn linear_coeffs(&self) -> &BTreeMap<u32, MultiPoly<F>> {
        &self.linear_coeffs
    }

    pub fn quadric(&self, i: u32, j: u32) -> Option<&MultiPoly<F>> {
        self.quadric_coeffs.get(&(i, j))
    }

    pub fn linear(&self, k: u32) -> Option<&MultiPoly<F>> {
        self.linear_coeffs.get(&k)
    }

    /// Adds `coeff` to `F_ij`.
    pub fn add_quadric(&mut self, i: u32, j: u32, coeff: MultiPoly<F>) -> Result<()> {
        let ctx = self.context;
        if !(1 <= i && i < j && j <= ctx.e) {
            return Err(Error::IndexOutOfRange(format!(
                "quadric Q({i},{j}) needs 1 <= i < j <= e = {}",
                ctx.e
            )));
        }
        let coeff = self.adopt(coeff, ctx.d - 2)?;
        let sum = match self.quadric_coeffs.remove(&(i, j)) {
            Some(old) => old.try_add(&coeff)?,
            None => coeff,
        };
        if !sum.is_zero() {
            self.quadric_coeffs.insert((i, j), sum);
        }
        Ok(())
    }

    /// Adds `coeff` to `G_k`.
    pub fn add_linear(&mut self, k: u32, coeff: MultiPoly<F>) -> Result<()> {
        let ctx = self.context;
        if !(ctx.e < k && k <= ctx.n) {
            return Err(Error::IndexOutOfRange(format!(
                "linear coefficient G_{k} needs e < k <= n ({} < k <= {})",
                ctx.e, ctx.n
            )));
        }
        let coeff = self.adopt(coeff, ctx.d - 1)?;
        let sum = match self.linear_coeffs.remove(&k) {
            Some(old) => old.try_add(&coeff)?,
            None => coeff,
        };
        if !sum.is_zero() {
            self.linear_coeffs.insert(k, sum);
        }
        Ok(())
    }

    fn adopt(&self, p: MultiPoly<F>, degree: u32) -> Result<MultiPoly<F>> {
        if p.is_zero() {
            return Ok(MultiPoly::zero(self.context, degree));
        }
        if p.degree() != degree {
            return Err(Error::NotHomogeneous {
                expected: degree,
                detail: format!("coefficient `{p}` has degree {}", p.degree()),
            });
        }
        if p.context().n > self.context.n {
            return Err(Error::InvalidContext(format!(
                "coefficient lives in n = {} but the combination in n = {}",
                p.context().n,
                self.context.n
            )));
        }
        p.embed(self.context)
    }

    /// Reads the same combination in a larger ambient space.
    pub fn embed(&self, n: u32) -> Result<Self> {
        let context = self.context.with_n(n)?;
        let mut out = Self::new(context);
        for (&(i, j), p) in &self.quadric_coeffs {
            out.add_quadric(i, j, p.embed(context)?)?;
        }
        for (&k, p) in &self.linear_coeffs {
            out.add_linear(k, p.embed(context)?)?;
        }
        Ok(out)
    }

    pub fn assemble(&self) -> MultiPoly<F> {
        let ctx = self.context;
        let mut f = MultiPoly::zero(ctx, ctx.d);
        for (&(i, j), p) in &self.quadric_coeffs {
            let q = build_quadric(ctx, i, j).expect("indices validated on insertion");
            f = f.try_add(&p.mul(&q)).expect("homogeneous of degree d");
        }
        for (&k, p) in &self.linear_coeffs {
            let x = MultiPoly::var(ctx, k as usize);
            f = f.try_add(&p.mul(&x)).expect("homogeneous of degree d");
        }
        f
    }

    /// Hypersurface file text.
    pub fn to_hsf(&self) -> String {
        let ctx = self.context;
        let mut out = String::new();
        let _ = writeln!(out, "d = {}", ctx.d);
        let _ = writeln!(out, "e = {}", ctx.e);
        let _ = writeln!(out, "n = {}", ctx.n);
        let _ = writeln!(out, "field = {}", ctx.field);
        for (&(i, j), p) in &self.quadric_coeffs {
            let _ = writeln!(out, "Q {i} {j} : {p}");
        }
        for (&k, p) in &self.linear_coeffs {
            let _ = writeln!(out, "X {k} : {p}");
        }
        out
    }
}

/// Writes `F` as an ideal combination.
///
/// Cofactors of `x_k` are peeled off for `k = n, ..., e+1`; the rest is divided by the quadrics
/// under graded lex order with `x0 > ... > xn`, whose leading terms are `x_(i-1) x_j`.
pub fn decompose_into_ideal<F: Field>(f: &MultiPoly<F>) -> Result<IdealCombination<F>> {
    let ctx = f.context();
    if f.degree() != ctx.d && !f.is_zero() {
        return Err(Error::NotHomogeneous {
            expected: ctx.d,
            detail: format!("input has degree {}", f.degree()),
        });
    }
    let mut out = IdealCombination::new(ctx);
    let mut rest = f.clone();
    for k in (ctx.e + 1..=ctx.n).rev() {
        let (cofactor, remaining) = rest.split_variable(k as usize);
        if !cofactor.is_zero() {
            out.add_linear(k, cofactor)?;
        }
        rest = remaining;
    }
    let mut remainder = MultiPoly::zero(ctx, ctx.d);
    while let Some((lead, c)) = rest.leading_term() {
        let lead = lead.clone();
        let c = c.clone();
        let lo = lead.iter().position(|&x| x > 0).expect("nonconstant");
        let hi = lead.iter().rposition(|&x| x > 0).expect("nonconstant");
        if hi >= lo + 2 {
            // Q_(lo+1, hi) has leading term -x_lo x_hi.
            let (i, j) = (lo as u32 + 1, hi as u32);
            let mut exps = lead.clone();
            exps[lo] -= 1;
            exps[hi] -= 1;
            let q = MultiPoly::monomial(ctx, exps, -c);
            let quadric = build_quadric(ctx, i, j)?;
            rest = rest.try_sub(&q.mul(&quadric))?;
            out.add_quadric(i, j, q)?;
        } else {
            let term = MultiPoly::monomial(ctx, lead, c);
            rest = rest.try_sub(&term)?;
            remainder = remainder.try_add(&term)?;
        }
    }
    if !remainder.is_zero() {
        return Err(Error::NotInIdeal {
            remainder: remainder.to_string(),
            order: "graded lex with x0 > x1 > ... > xn".to_string(),
        });
    }
    Ok(out)
}

/// Parses a hypersurface file.
///
/// Header lines `d = `, `e = `, `n = ` and optionally `field = rational | prime:<p>`; body lines
/// `Q i j : poly`, `X k : poly`, or `F : poly` for a full polynomial to be decomposed.
/// A `field` header must agree with `F`.
pub fn parse_hsf<F: Field>(text: &str) -> Result<IdealCombination<F>> {
    let mut header: BTreeMap<String, (usize, String)> = BTreeMap::new();
    let mut body = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((lhs, rhs)) = line.split_once('=') {
            let key = lhs.trim();
            if ["d", "e", "n", "field"].contains(&key) {
                header.insert(key.to_string(), (lineno + 1, rhs.trim().to_string()));
                continue;
            }
        }
        body.push((lineno + 1, line.to_string()));
    }
    let num = |key: &str| -> Result<u32> {
        let (line, v) = header
            .get(key)
            .ok_or_else(|| Error::parse(0, format!("missing header `{key} = <int>`")))?;
        v.parse()
            .map_err(|_| Error::parse(*line, format!("`{key}` must be a nonnegative integer")))
    };
    let (d, e, n) = (num("d")?, num("e")?, num("n")?);
    if let Some((line, v)) = header.get("field") {
        let spec: FieldSpec = v
            .parse()
            .map_err(|_| Error::parse(*line, format!("bad field `{v}`")))?;
        if spec != F::spec() {
            return Err(Error::Precondition(format!(
                "file requests field {spec} but the computation runs over {}",
                F::spec()
            )));
        }
    }
    let ctx = CurveContext::for_field::<F>(d, e, n)?;
    let mut out = IdealCombination::new(ctx);
    for (line, text) in body {
        let (lhs, rhs) = text
            .split_once(':')
            .ok_or_else(|| Error::parse(line, "expected `Q i j : poly`, `X k : poly` or `F : poly`"))?;
        let words: Vec<&str> = lhs.split_whitespace().collect();
        let index = |w: &str| -> Result<u32> {
            w.parse()
                .map_err(|_| Error::parse(line, format!("bad index `{w}`")))
        };
        let at_line = |err: Error| match err {
            Error::Parse { pos, msg } => Error::parse(line, format!("column {pos}: {msg}")),
            other => other,
        };
        match words.as_slice() {
            ["Q", i, j] => {
                let p = MultiPoly::parse(rhs, ctx, d - 2).map_err(at_line)?;
                out.add_quadric(index(i)?, index(j)?, p)?;
            }
            ["X", k] => {
                let p = MultiPoly::parse(rhs, ctx, d - 1).map_err(at_line)?;
                out.add_linear(index(k)?, p)?;
            }
            ["F"] => {
                let p = MultiPoly::parse(rhs, ctx, d).map_err(at_line)?;
                let part = decompose_into_ideal(&p)?;
                for ((i, j), q) in part.quadric_coeffs {
                    out.add_quadric(i, j, q)?;
                }
                for (k, g) in part.linear_coeffs {
                    out.add_linear(k, g)?;
                }
            }
            _ => {
                return Err(Error::parse(
                    line,
                    format!("unrecognized line `{text}`"),
                ))
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn ctx(d: u32, e: u32, n: u32) -> CurveContext {
        CurveContext::for_field::<Q>(d, e, n).unwrap()
    }

    #[test]
    fn decompose_single_quadric() {
        let c = ctx(2, 3, 3);
        let f = MultiPoly::<Q>::parse("x1^2 - x0*x2", c, 2).unwrap();
        let comb = decompose_into_ideal(&f).unwrap();
        assert_eq!(comb.quadric_coeffs().len(), 1);
        assert_eq!(comb.quadric(1, 2).unwrap().to_string(), "1");
        assert!(comb.linear_coeffs().is_empty());
    }

    #[test]
    fn decompose_worked_cubic() {
        let c = ctx(3, 3, 3);
        let f = MultiPoly::<Q>::parse("x0*(x1^2 - x0*x2) + x3*(x2^2 - x1*x3)", c, 3).unwrap();
        let comb = decompose_into_ideal(&f).unwrap();
        assert_eq!(comb.quadric_coeffs().len(), 2);
        assert_eq!(comb.quadric(1, 2).unwrap().to_string(), "x0");
        assert_eq!(comb.quadric(2, 3).unwrap().to_string(), "x3");
        assert_eq!(comb.assemble(), f);
    }

    #[test]
    fn decompose_rejects_nonmember() {
        let c = ctx(2, 2, 3);
        let f = MultiPoly::<Q>::parse("x0^2 + x3^2", c, 2).unwrap();
        match decompose_into_ideal(&f) {
            Err(Error::NotInIdeal { remainder, order }) => {
                assert_eq!(remainder, "x0^2");
                assert!(order.contains("graded lex"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn degenerate_line() {
        let c = ctx(3, 1, 3);
        let f = MultiPoly::<Q>::parse("x2*x0^2 + x3*x1*x2", c, 3).unwrap();
        let comb = decompose_into_ideal(&f).unwrap();
        assert!(comb.quadric_coeffs().is_empty());
        assert_eq!(comb.assemble(), f);
    }

    #[test]
    fn hsf_round_trip() {
        let text = "# worked cubic\nd = 3\ne = 3\nn = 4\nfield = rational\nQ 1 2 : x0\nQ 2 3 : x3\nX 4 : x0*x3\n";
        let comb = parse_hsf::<Q>(text).unwrap();
        assert_eq!(comb.linear(4).unwrap().to_string(), "x0*x3");
        let again = parse_hsf::<Q>(&comb.to_hsf()).unwrap();
        assert_eq!(again, comb);
        let bad = "d = 3\ne = 3\nn = 3\nQ 1 2 : 1\n";
        assert!(matches!(parse_hsf::<Q>(bad), Err(Error::NotHomogeneous { .. })));
        let full = "d = 3\ne = 3\nn = 3\nF : x0*x1^2 - x0^2*x2 + x3*x2^2 - x1*x3^2\n";
        let comb = parse_hsf::<Q>(full).unwrap();
        assert_eq!(comb.quadric(2, 3).unwrap().to_string(), "x3");
    }
}
