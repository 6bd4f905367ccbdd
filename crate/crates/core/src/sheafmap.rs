//! Graded maps `O(b_1) + ... + O(b_r) -> O(c_1) + ... + O(c_k)` on `P^1`.
//!
//! Entry `(i, j)` is a binary form of degree `c_i - b_j`. Kernels are read off from section
//! counts: with `N(m)` the nullity on global sections after twisting by `m`,
//! `N(m) - N(m-1) = #{i : a_i >= -m}` for `ker = O(a_1) + ... + O(a_r)`.

use std::fmt::{self, Write as _};

use itertools::Itertools;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::form::BinaryForm;
use crate::ideal::IdealCombination;
use crate::linalg;
use crate::poly::{gradient_on_curve, CurveContext};
use crate::splitting::SplittingType;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedSheafMap<F> {
    target: Vec<i64>,
    source: Vec<i64>,
    entries: Vec<Vec<BinaryForm<F>>>,
}

fn sections(a: i64) -> usize {
    if a < 0 {
        0
    } else {
        a as usize + 1
    }
}

impl<F: Field> GradedSheafMap<F> {
    /// Checks shapes and entry degrees. Zero entries are normalized to their slot degree.
    pub fn new(target: Vec<i64>, source: Vec<i64>, entries: Vec<Vec<BinaryForm<F>>>) -> Result<Self> {
        if entries.len() != target.len() {
            return Err(Error::TwistMismatch(format!(
                "{} rows of entries for {} target twists",
                entries.len(),
                target.len()
            )));
        }
        let mut entries = entries;
        for (i, row) in entries.iter_mut().enumerate() {
            if row.len() != source.len() {
                return Err(Error::TwistMismatch(format!(
                    "row {} has {} entries for {} source twists",
                    i + 1,
                    row.len(),
                    source.len()
                )));
            }
            for (j, f) in row.iter_mut().enumerate() {
                let deg = target[i] - source[j];
                if f.is_zero() {
                    *f = BinaryForm::zero(deg);
                } else if f.degree() != deg {
                    return Err(Error::TwistMismatch(format!(
                        "entry ({},{}) = {f} has degree {}, slot needs {deg}",
                        i + 1,
                        j + 1,
                        f.degree()
                    )));
                }
            }
        }
        Ok(GradedSheafMap {
            target,
            source,
            entries,
        })
    }

    pub fn zero(target: Vec<i64>, source: Vec<i64>) -> Self {
        let entries = target
            .iter()
            .map(|c| source.iter().map(|b| BinaryForm::zero(c - b)).collect())
            .collect();
        GradedSheafMap {
            target,
            source,
            entries,
        }
    }

    pub fn identity(twists: Vec<i64>) -> Self {
        let mut m = Self::zero(twists.clone(), twists);
        for i in 0..m.rows() {
            m.entries[i][i] = BinaryForm::one();
        }
        m
    }

    /// Builds entry `(i, j)` from `f(i, j, degree)`, zero-based.
    pub fn from_fn(
        target: Vec<i64>,
        source: Vec<i64>,
        mut f: impl FnMut(usize, usize, i64) -> BinaryForm<F>,
    ) -> Result<Self> {
        let entries = target
            .iter()
            .enumerate()
            .map(|(i, c)| {
                source
                    .iter()
                    .enumerate()
                    .map(|(j, b)| f(i, j, c - b))
                    .collect()
            })
            .collect();
        Self::new(target, source, entries)
    }

    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn cols(&self) -> usize {
        self.source.len()
    }

    pub fn source(&self) -> &[i64] {
        &self.source
    }

    pub fn target(&self) -> &[i64] {
        &self.target
    }

    /// Zero-based entry.
    pub fn entry(&self, i: usize, j: usize) -> &BinaryForm<F> {
        &self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<BinaryForm<F>>] {
        &self.entries
    }

    pub fn column(&self, j: usize) -> Vec<BinaryForm<F>> {
        self.entries.iter().map(|row| row[j].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(BinaryForm::is_zero)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if inner.target != self.source {
            return Err(Error::TwistMismatch(format!(
                "cannot compose: inner target {:?} differs from outer source {:?}",
                inner.target, self.source
            )));
        }
        let mut out = Self::zero(self.target.clone(), inner.source.clone());
        for i in 0..self.rows() {
            for j in 0..inner.cols() {
                let mut acc = BinaryForm::zero(self.target[i] - inner.source[j]);
                for k in 0..self.cols() {
                    let (a, b) = (&self.entries[i][k], &inner.entries[k][j]);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.try_add(&a.mul(b))?;
                }
                out.entries[i][j] = acc;
            }
        }
        Ok(out)
    }

    /// Transpose with negated twists.
    pub fn dual(&self) -> Self {
        let entries = (0..self.cols()).map(|j| self.column(j)).collect();
        GradedSheafMap {
            target: self.source.iter().map(|b| -b).collect(),
            source: self.target.iter().map(|c| -c).collect(),
            entries,
        }
    }

    /// `self` on top of `bottom`.
    pub fn stack(&self, bottom: &Self) -> Result<Self> {
        if self.source != bottom.source {
            return Err(Error::TwistMismatch(format!(
                "cannot stack maps with sources {:?} and {:?}",
                self.source, bottom.source
            )));
        }
        let mut out = self.clone();
        out.target.extend_from_slice(&bottom.target);
        out.entries.extend(bottom.entries.iter().cloned());
        Ok(out)
    }

    /// `[self | right]`.
    pub fn hstack(&self, right: &Self) -> Result<Self> {
        if self.target != right.target {
            return Err(Error::TwistMismatch(format!(
                "cannot place maps with targets {:?} and {:?} side by side",
                self.target, right.target
            )));
        }
        let mut out = self.clone();
        out.source.extend_from_slice(&right.source);
        for (row, extra) in out.entries.iter_mut().zip(&right.entries) {
            row.extend(extra.iter().cloned());
        }
        Ok(out)
    }

    /// Columns in the given order.
    pub fn select_columns(&self, order: &[usize]) -> Self {
        GradedSheafMap {
            target: self.target.clone(),
            source: order.iter().map(|&j| self.source[j]).collect(),
            entries: self
                .entries
                .iter()
                .map(|row| order.iter().map(|&j| row[j].clone()).collect())
                .collect(),
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = self.clone();
        for f in out.entries.iter_mut().flatten() {
            *f = f.scale(c);
        }
        out
    }

    pub fn eval(&self, s0: &F, t0: &F) -> Result<Vec<Vec<F>>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|f| if f.is_zero() { Ok(F::zero()) } else { f.eval(s0, t0) })
                    .collect()
            })
            .collect()
    }

    /// Coefficient matrix of the map on global sections after twisting by `m`, with its column
    /// count. Source block `j` lists the coefficients of a form of degree `b_j + m`.
    pub fn section_matrix(&self, m: i64) -> (Vec<Vec<F>>, usize) {
        let col_len: Vec<usize> = self.source.iter().map(|b| sections(b + m)).collect();
        let row_len: Vec<usize> = self.target.iter().map(|c| sections(c + m)).collect();
        let ncols: usize = col_len.iter().sum();
        let nrows: usize = row_len.iter().sum();
        let mut mat = vec![vec![F::zero(); ncols]; nrows];
        let mut r0 = 0;
        for (i, &rl) in row_len.iter().enumerate() {
            let mut c0 = 0;
            for (j, &cl) in col_len.iter().enumerate() {
                let f = &self.entries[i][j];
                if !f.is_zero() && cl > 0 {
                    for (k, a) in f.coeffs().iter().enumerate() {
                        if a.is_zero() {
                            continue;
                        }
                        for q in 0..cl {
                            mat[r0 + k + q][c0 + q] += a.clone();
                        }
                    }
                }
                c0 += cl;
            }
            r0 += rl;
        }
        (mat, ncols)
    }

    /// `dim ker H^0(M(m))`.
    pub fn section_kernel_dim(&self, m: i64) -> usize {
        let (mat, ncols) = self.section_matrix(m);
        ncols - linalg::rank(&mat, ncols)
    }

    /// Rank over the function field, from ranks at enough points of `P^1` to avoid every zero
    /// of a nonvanishing maximal minor. Points are `(0,1)` and `(1,λ)` for `λ = 0, 1, 2, ...`.
    pub fn generic_rank(&self) -> usize {
        let full = self.rows().min(self.cols());
        let max_deg = self
            .entries
            .iter()
            .flatten()
            .filter(|f| !f.is_zero())
            .map(BinaryForm::degree)
            .max();
        let Some(max_deg) = max_deg else {
            return 0;
        };
        if full == 0 {
            return 0;
        }
        let needed = full as u64 * max_deg as u64 + 1;
        let available = match F::characteristic() {
            0 => u64::MAX,
            p => p + 1,
        };
        let mut best = 0;
        for k in 0..needed.min(available) {
            let (s0, t0) = match k {
                0 => (F::zero(), F::one()),
                _ => (F::one(), F::from_i64(k as i64 - 1)),
            };
            let vals = self.eval(&s0, &t0).expect("points are nonzero");
            best = best.max(linalg::rank(&vals, self.cols()));
            if best == full {
                break;
            }
        }
        best
    }

    /// Lowest twist a kernel summand can have:
    /// `sum b - max(0, rows * max c) - max(0, cols * max b)`.
    fn kernel_twist_floor(&self) -> i64 {
        let sum_b: i64 = self.source.iter().sum();
        let max_b = self.source.iter().copied().max().unwrap_or(0);
        let max_c = self.target.iter().copied().max().unwrap_or(0);
        sum_b - (self.rows() as i64 * max_c).max(0) - (self.cols() as i64 * max_b).max(0)
    }

    /// Splitting type of `ker M`, from the section-count scan.
    pub fn splitting_of_kernel(&self) -> Result<SplittingType> {
        if self.cols() == 0 {
            return Ok(SplittingType::new(vec![]));
        }
        let r = self.cols() - self.generic_rank();
        if r == 0 {
            return Ok(SplittingType::new(vec![]));
        }
        let max_b = *self.source.iter().max().expect("nonempty");
        let floor = self.kernel_twist_floor();
        let mut parts = Vec::new();
        let (mut prev_n, mut prev_d) = (0usize, 0usize);
        for m in -max_b..=-floor {
            let n_m = self.section_kernel_dim(m);
            let d_m = n_m.checked_sub(prev_n).ok_or_else(|| {
                Error::Certification(format!("section kernel dimension dropped at twist {m}"))
            })?;
            if d_m < prev_d || d_m > r {
                return Err(Error::Certification(format!(
                    "section counts at twist {m} are inconsistent with a kernel of rank {r}"
                )));
            }
            parts.extend(std::iter::repeat_n(-m, d_m - prev_d));
            if d_m == r {
                let expected: usize = parts.iter().map(|a| sections(a + m + 1)).sum();
                let got = self.section_kernel_dim(m + 1);
                if got != expected {
                    return Err(Error::Certification(format!(
                        "kernel splitting {:?} predicts {expected} sections at twist {}, found {got}",
                        parts,
                        m + 1
                    )));
                }
                return Ok(SplittingType::new(parts));
            }
            prev_n = n_m;
            prev_d = d_m;
        }
        Err(Error::Certification(format!(
            "section counts did not reach kernel rank {r} by twist {}",
            -floor
        )))
    }

    /// A map `K` whose columns generate `ker M`, source twists in descending order.
    ///
    /// At each twist, kernel sections modulo `s`- and `t`-multiples of earlier ones give the new
    /// generators; a canonical complement is taken by reduced row echelon form.
    pub fn kernel_matrix(&self) -> Result<Self> {
        let r = self.cols() - self.generic_rank();
        if r == 0 {
            return Ok(Self::zero(self.source.clone(), vec![]));
        }
        let max_b = *self.source.iter().max().expect("nonempty");
        let floor = self.kernel_twist_floor();
        let mut gens: Vec<(i64, Vec<BinaryForm<F>>)> = Vec::new();
        let mut prev: Vec<Vec<F>> = Vec::new();
        for m in -max_b..=-floor {
            let (mat, ncols) = self.section_matrix(m);
            let v = linalg::nullspace(&mat, ncols);
            let mut w = Vec::with_capacity(2 * prev.len());
            for p in &prev {
                w.push(self.raise(p, m, false));
                w.push(self.raise(p, m, true));
            }
            let w_pivots = linalg::rref(&mut w, ncols);
            let mut fresh: Vec<Vec<F>> = v
                .iter()
                .map(|x| {
                    let mut x = x.clone();
                    linalg::reduce(&mut x, &w, &w_pivots);
                    x
                })
                .filter(|x| x.iter().any(|c| !c.is_zero()))
                .collect();
            linalg::rref(&mut fresh, ncols);
            for g in fresh {
                gens.push((-m, self.split_sections(&g, m)));
            }
            if gens.len() > r {
                return Err(Error::Certification(format!(
                    "found {} kernel generators for a kernel of rank {r}",
                    gens.len()
                )));
            }
            if gens.len() == r {
                break;
            }
            prev = v;
        }
        if gens.len() != r {
            return Err(Error::Certification(format!(
                "only {} of {r} kernel generators found by twist {}",
                gens.len(),
                -floor
            )));
        }
        let source: Vec<i64> = gens.iter().map(|(a, _)| *a).collect();
        let entries = (0..self.cols())
            .map(|j| gens.iter().map(|(_, col)| col[j].clone()).collect())
            .collect();
        let k = Self::new(self.source.clone(), source, entries)?;
        if !self.compose(&k)?.is_zero() {
            return Err(Error::Certification("kernel matrix does not compose to zero".into()));
        }
        if !k.full_rank_everywhere() {
            return Err(Error::Certification(
                "kernel matrix drops rank at a point of P^1".into(),
            ));
        }
        Ok(k)
    }

    /// Multiplies a section vector at twist `m - 1` by `s` (or `t`), giving one at twist `m`.
    fn raise(&self, v: &[F], m: i64, by_t: bool) -> Vec<F> {
        let mut out = Vec::new();
        let mut off = 0;
        for b in &self.source {
            let old = sections(b + m - 1);
            let mut block = vec![F::zero(); sections(b + m)];
            for (i, c) in v[off..off + old].iter().enumerate() {
                block[i + usize::from(by_t)] = c.clone();
            }
            off += old;
            out.extend(block);
        }
        out
    }

    /// Splits a section vector at twist `m` into one form per source summand.
    fn split_sections(&self, v: &[F], m: i64) -> Vec<BinaryForm<F>> {
        let mut off = 0;
        self.source
            .iter()
            .map(|b| {
                let len = sections(b + m);
                let f = BinaryForm::from_coeffs(b + m, v[off..off + len].to_vec())
                    .expect("block length matches degree");
                off += len;
                f
            })
            .collect()
    }

    /// `δ` with `ker δ = image N`, for `N` of full rank at every point.
    pub fn cokernel_matrix(&self) -> Result<Self> {
        if !self.full_rank_everywhere() {
            return Err(Error::Precondition(
                "cokernel needs a map of full rank at every point of P^1".into(),
            ));
        }
        Ok(self.dual().kernel_matrix()?.dual())
    }

    /// Maximal minors, each as a binary form (zero minors included).
    pub fn maximal_minors(&self) -> Vec<BinaryForm<F>> {
        let k = self.rows().min(self.cols());
        if k == 0 {
            return vec![];
        }
        if self.rows() >= self.cols() {
            (0..self.rows())
                .combinations(k)
                .map(|rows| det(rows.iter().map(|&i| self.entries[i].clone()).collect()))
                .collect()
        } else {
            (0..self.cols())
                .combinations(k)
                .map(|cols| {
                    det(self
                        .entries
                        .iter()
                        .map(|row| cols.iter().map(|&j| row[j].clone()).collect())
                        .collect())
                })
                .collect()
        }
    }

    /// Whether the maximal minors have no common zero on `P^1`.
    pub fn full_rank_everywhere(&self) -> bool {
        let k = self.rows().min(self.cols());
        if k == 0 {
            return true;
        }
        let mut acc: Option<BinaryForm<F>> = None;
        let minors = if self.rows() >= self.cols() {
            (0..self.rows()).combinations(k).collect::<Vec<_>>()
        } else {
            (0..self.cols()).combinations(k).collect::<Vec<_>>()
        };
        for idx in minors {
            let minor = if self.rows() >= self.cols() {
                det(idx.iter().map(|&i| self.entries[i].clone()).collect())
            } else {
                det(self
                    .entries
                    .iter()
                    .map(|row| idx.iter().map(|&j| row[j].clone()).collect())
                    .collect())
            };
            if minor.is_zero() {
                continue;
            }
            let g = match acc {
                None => BinaryForm::gcd(&[minor]),
                Some(g) => BinaryForm::gcd(&[g, minor]),
            }
            .expect("nonzero input");
            if g.is_constant() {
                return true;
            }
            acc = Some(g);
        }
        false
    }

    /// Text form: a `map R x C : [c..] <- [b..]` header, then `(i,j) : form` for nonzero entries.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "map {} x {} : {} <- {}\n",
            self.rows(),
            self.cols(),
            twist_list(&self.target),
            twist_list(&self.source)
        );
        for (i, row) in self.entries.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                if !f.is_zero() {
                    let _ = writeln!(out, "({},{}) : {f}", i + 1, j + 1);
                }
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "empty map text"))?;
        let bad_header = || Error::parse(0, format!("malformed map header `{header}`"));
        let rest = header.strip_prefix("map").ok_or_else(bad_header)?;
        let (shape, twists) = rest.split_once(':').ok_or_else(bad_header)?;
        let (r, c) = shape.split_once('x').ok_or_else(bad_header)?;
        let rows: usize = r.trim().parse().map_err(|_| bad_header())?;
        let cols: usize = c.trim().parse().map_err(|_| bad_header())?;
        let (tgt, src) = twists.split_once("<-").ok_or_else(bad_header)?;
        let target: Vec<i64> = serde_json::from_str(tgt.trim()).map_err(|_| bad_header())?;
        let source: Vec<i64> = serde_json::from_str(src.trim()).map_err(|_| bad_header())?;
        if target.len() != rows || source.len() != cols {
            return Err(Error::parse(0, "map header shape disagrees with its twist lists"));
        }
        let mut m = Self::zero(target, source);
        for (k, line) in lines {
            let bad = || Error::parse(k, format!("malformed entry line `{line}`"));
            let (pos, form) = line.split_once(':').ok_or_else(bad)?;
            let pos = pos.trim().strip_prefix('(').and_then(|p| p.strip_suffix(')'));
            let (i, j) = pos.and_then(|p| p.split_once(',')).ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let j: usize = j.trim().parse().map_err(|_| bad())?;
            if !(1..=rows).contains(&i) || !(1..=cols).contains(&j) {
                return Err(Error::IndexOutOfRange(format!("entry ({i},{j}) in a {rows}x{cols} map")));
            }
            let deg = m.target[i - 1] - m.source[j - 1];
            m.entries[i - 1][j - 1] = BinaryForm::parse_with_degree(form, deg)?;
        }
        Ok(m)
    }

    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .entries
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter().enumerate().filter(|(_, f)| !f.is_zero()).map(move |(j, f)| {
                    json!({ "i": i + 1, "j": j + 1, "form": f.to_string() })
                })
            })
            .collect();
        json!({
            "rows": self.rows(),
            "cols": self.cols(),
            "target": self.target,
            "source": self.source,
            "entries": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::parse(0, format!("map JSON: {what}"));
        let twists = |key: &str| -> Result<Vec<i64>> {
            serde_json::from_value(v.get(key).cloned().ok_or_else(|| bad(key))?)
                .map_err(|_| bad(key))
        };
        let mut text = String::new();
        let target = twists("target")?;
        let source = twists("source")?;
        let _ = writeln!(
            text,
            "map {} x {} : {} <- {}",
            target.len(),
            source.len(),
            twist_list(&target),
            twist_list(&source)
        );
        for e in v.get("entries").and_then(Value::as_array).ok_or_else(|| bad("entries"))? {
            let i = e.get("i").and_then(Value::as_u64).ok_or_else(|| bad("entry i"))?;
            let j = e.get("j").and_then(Value::as_u64).ok_or_else(|| bad("entry j"))?;
            let f = e.get("form").and_then(Value::as_str).ok_or_else(|| bad("entry form"))?;
            let _ = writeln!(text, "({i},{j}) : {f}");
        }
        Self::from_text(&text)
    }
}

fn twist_list(v: &[i64]) -> String {
    format!("[{}]", v.iter().join(","))
}

impl<F: Field> fmt::Display for GradedSheafMap<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Determinant by fraction-free elimination; intermediate quotients are exact.
fn det<F: Field>(mut a: Vec<Vec<BinaryForm<F>>>) -> BinaryForm<F> {
    let k = a.len();
    let mut prev = BinaryForm::one();
    let mut negate = false;
    for p in 0..k {
        let Some(piv) = (p..k).find(|&i| !a[i][p].is_zero()) else {
            return BinaryForm::zero(0);
        };
        if piv != p {
            a.swap(p, piv);
            negate = !negate;
        }
        if p + 1 == k {
            break;
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let lhs = a[p][p].mul(&a[i][j]);
                let rhs = a[i][p].mul(&a[p][j]);
                let num = lhs.try_sub(&rhs).expect("minor entries are homogeneous");
                a[i][j] = num.div_exact(&prev).expect("fraction-free elimination divides exactly");
            }
        }
        prev = a[p][p].clone();
    }
    let d = a[k - 1][k - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// `β : O(e+1)^e + O(e)^(n-e) -> O(e+2)^(e-1) + O(e)^(n-e)`.
pub fn build_beta<F: Field>(context: CurveContext) -> GradedSheafMap<F> {
    let (e, n) = (context.e as usize, context.n as usize);
    let ei = e as i64;
    let mut source = vec![ei + 1; e];
    source.extend(std::iter::repeat_n(ei, n - e));
    let mut target = vec![ei + 2; e - 1];
    target.extend(std::iter::repeat_n(ei, n - e));
    let mut m = GradedSheafMap::zero(target, source);
    for i in 0..e - 1 {
        m.entries[i][i] = BinaryForm::t();
        m.entries[i][i + 1] = BinaryForm::s().neg();
    }
    for k in 0..n - e {
        m.entries[e - 1 + k][e + k] = BinaryForm::one();
    }
    m
}

/// `ψ_F : O(e+2)^(e-1) + O(e)^(n-e) -> O(de)`.
pub fn build_psi<F: Field>(f: &IdealCombination<F>) -> GradedSheafMap<F> {
    let ctx = f.context();
    let (d, e, n) = (ctx.d as i64, ctx.e as i64, ctx.n as i64);
    let mut source = vec![e + 2; (e - 1) as usize];
    source.extend(std::iter::repeat_n(e, (n - e) as usize));
    let mut m = GradedSheafMap::zero(vec![d * e], source);
    for (&(i, j), p) in f.quadric_coeffs() {
        let r = p.restrict();
        for l in i..j {
            let (i, j, l) = (i as i64, j as i64, l as i64);
            let term = r.shift((e - j - i + l) as u32, (j + i - l - 2) as u32);
            let slot = &mut m.entries[0][(l - 1) as usize];
            *slot = slot.try_add(&term).expect("column degree is e(d-1)-2");
        }
    }
    for (&k, g) in f.linear_coeffs() {
        m.entries[0][k as usize - 2] = g.restrict();
    }
    m
}

/// `δ_F = ψ_F ∘ β`, whose kernel is `T_X|_C`.
pub fn build_delta<F: Field>(f: &IdealCombination<F>) -> GradedSheafMap<F> {
    build_psi(f)
        .compose(&build_beta(f.context()))
        .expect("ψ source matches β target")
}

/// `df : O(2) -> O(e+1)^e + O(e)^(n-e)`, the column `(s^(e-1), ..., t^(e-1); 0, ..., 0)`.
pub fn build_df<F: Field>(context: CurveContext) -> GradedSheafMap<F> {
    let (e, n) = (context.e as usize, context.n as usize);
    let ei = e as i64;
    let mut target = vec![ei + 1; e];
    target.extend(std::iter::repeat_n(ei, n - e));
    let mut m = GradedSheafMap::zero(target, vec![2]);
    for i in 0..e {
        m.entries[i][0] = BinaryForm::monomial(F::one(), (e - 1 - i) as u32, i as u32);
    }
    m
}

/// The gradient row `O(e)^(n+1) -> O(de)` with entries `dF/dx_m` restricted to the curve.
pub fn build_gradient<F: Field>(f: &IdealCombination<F>) -> GradedSheafMap<F> {
    let ctx = f.context();
    let grad = gradient_on_curve(&f.assemble());
    let source = vec![ctx.e as i64; grad.len()];
    GradedSheafMap::new(vec![(ctx.d * ctx.e) as i64], source, vec![grad])
        .expect("restricted partials have degree e(d-1)")
}

/// Whether the restricted partials have no common zero on the curve.
pub fn check_smooth_along_curve<F: Field>(f: &IdealCombination<F>) -> bool {
    let grad = gradient_on_curve(&f.assemble());
    BinaryForm::gcd(&grad).is_ok_and(|g| g.is_constant())
}

/// Compares `h^0` of `ker δ_F (m)` with `h^0` of the gradient kernel minus the Euler line.
pub fn h0_euler_crosscheck<F: Field>(f: &IdealCombination<F>, m: i64) -> Result<bool> {
    if m < -1 {
        return Err(Error::Precondition(format!(
            "Euler cross-check needs twist m >= -1, got {m}"
        )));
    }
    if !check_smooth_along_curve(f) {
        return Err(Error::Precondition(
            "Euler cross-check needs X smooth along the curve".into(),
        ));
    }
    let lhs = build_delta(f).section_kernel_dim(m);
    let rhs = build_gradient(f).section_kernel_dim(m) as i64 - (m + 1).max(0);
    Ok(lhs as i64 == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MultiPoly;
    use crate::Rational;

    type Q = Rational;

    fn bf(text: &str) -> BinaryForm<Q> {
        BinaryForm::parse(text).unwrap()
    }

    fn quintic() -> IdealCombination<Q> {
        let ctx = CurveContext::for_field::<Q>(5, 3, 3).unwrap();
        let mut f = IdealCombination::new(ctx);
        f.add_quadric(1, 2, MultiPoly::from_vars(ctx, &[0, 0, 0])).unwrap();
        f.add_quadric(2, 3, MultiPoly::from_vars(ctx, &[3, 3, 3])).unwrap();
        f
    }

    fn cubic() -> IdealCombination<Q> {
        let ctx = CurveContext::for_field::<Q>(3, 3, 3).unwrap();
        let mut f = IdealCombination::new(ctx);
        f.add_quadric(1, 2, MultiPoly::var(ctx, 0)).unwrap();
        f.add_quadric(2, 3, MultiPoly::var(ctx, 3)).unwrap();
        f
    }

    #[test]
    fn beta_and_df() {
        let ctx = CurveContext::for_field::<Q>(3, 3, 3).unwrap();
        let b = build_beta::<Q>(ctx);
        assert_eq!(b.to_text(), "map 2 x 3 : [5,5] <- [4,4,4]\n(1,1) : t\n(1,2) : -s\n(2,2) : t\n(2,3) : -s\n");
        for e in 1..=8 {
            let ctx = CurveContext::for_field::<Q>(2, e, 9).unwrap();
            let b = build_beta::<Q>(ctx);
            assert!(b.compose(&build_df(ctx)).unwrap().is_zero());
        }
        let ctx = CurveContext::for_field::<Q>(2, 1, 4).unwrap();
        let b = build_beta::<Q>(ctx);
        assert_eq!((b.rows(), b.cols()), (3, 4));
        assert!(b.column(0).iter().all(BinaryForm::is_zero));
    }

    #[test]
    fn worked_quintic() {
        let f = quintic();
        let psi = build_psi(&f);
        assert_eq!(psi.entries()[0], vec![bf("s^10"), bf("t^10")]);
        let delta = build_delta(&f);
        assert_eq!(delta.entries()[0], vec![bf("s^10*t"), bf("-s^11+t^11"), bf("-s*t^10")]);
        assert_eq!(delta.section_kernel_dim(-2), 1);
        assert_eq!(delta.splitting_of_kernel().unwrap().parts(), &[-5, 2]);
        assert_eq!(psi.splitting_of_kernel().unwrap().parts(), &[-5]);
        assert!(h0_euler_crosscheck(&f, -2).is_err());
    }

    #[test]
    fn worked_cubic_kernel() {
        let f = cubic();
        let delta = build_delta(&f);
        assert_eq!(delta.entries()[0], vec![bf("s^4*t"), bf("-s^5+t^5"), bf("-s*t^4")]);
        assert_eq!(delta.splitting_of_kernel().unwrap().parts(), &[1, 2]);
        let k = delta.kernel_matrix().unwrap();
        assert_eq!(k.source(), &[2, 1]);
        assert_eq!(k.column(0), vec![bf("s^2"), bf("s*t"), bf("t^2")]);
        assert_eq!(k.column(1), vec![bf("t^3"), BinaryForm::zero(3), bf("s^3")]);
        assert!(check_smooth_along_curve(&f));
        for m in -1..=2 {
            assert!(h0_euler_crosscheck(&f, m).unwrap());
        }
    }

    #[test]
    fn small_maps() {
        let st = GradedSheafMap::<Q>::new(vec![1], vec![0, 0], vec![vec![bf("s"), bf("t")]]).unwrap();
        assert_eq!(st.section_kernel_dim(1), 1);
        assert_eq!(st.section_kernel_dim(-3), 0);
        let k = st.kernel_matrix().unwrap();
        assert_eq!(k.source(), &[-1]);
        assert!(st.compose(&k).unwrap().is_zero());
        let dual = st.dual();
        assert_eq!(dual.target(), &[0, 0]);
        assert_eq!(dual.source(), &[-1]);
        assert_eq!(dual.dual(), st);
        let coker = dual.cokernel_matrix().unwrap();
        assert_eq!(coker.rows(), 1);
        assert!(coker.compose(&dual).unwrap().is_zero());

        let bad = GradedSheafMap::<Q>::new(vec![1, 2], vec![0], vec![vec![bf("s")], vec![bf("s*t")]]).unwrap();
        assert!(!bad.full_rank_everywhere());
        assert!(bad.cokernel_matrix().is_err());
    }

    #[test]
    fn degree_checks() {
        let err = GradedSheafMap::<Q>::new(vec![1], vec![0], vec![vec![bf("s^2")]]);
        assert!(matches!(err, Err(Error::TwistMismatch(_))));
        let a = GradedSheafMap::<Q>::identity(vec![1, 2]);
        let b = GradedSheafMap::<Q>::identity(vec![1]);
        assert!(a.compose(&b).is_err());
    }

    #[test]
    fn text_and_json_round_trip() {
        let delta = build_delta(&quintic());
        let text = delta.to_text();
        assert_eq!(GradedSheafMap::<Q>::from_text(&text).unwrap(), delta);
        assert_eq!(GradedSheafMap::<Q>::from_json(&delta.to_json()).unwrap(), delta);
        assert!(GradedSheafMap::<Q>::from_text("map 1 x 1 : [0] <- [0]\n(2,1) : 1").is_err());
    }

    #[test]
    fn determinants() {
        let m = vec![
            vec![bf("t^3"), bf("s^2")],
            vec![bf("s^3"), bf("t^2")],
        ];
        assert_eq!(det(m), bf("t^5-s^5"));
    }
}
