//! Explicit hypersurfaces for the splitting theorems, and the dimension-extension engine.
//!
//! A step from `P^n` to `P^(n+1)` takes the kernel matrix `K` of `δ_F`, a matrix `J` of one of
//! three shapes, solves `K = N_1 J`, stacks `N = (N_1; coker J)` and reads the new `δ` off as
//! the cokernel of `N`. Its last entry `g` lifts to the cofactor `G_(n+1)` of `x_(n+1)`.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::predicted_splitting;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::form::BinaryForm;
use crate::ideal::IdealCombination;
use crate::linalg;
use crate::poly::{lift_binary_form, CurveContext, MultiPoly};
use crate::sheafmap::{build_delta, check_smooth_along_curve, GradedSheafMap};
use crate::splitting::SplittingType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtensionStrategy {
    J0,
    J1,
    J2,
}

impl fmt::Display for ExtensionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExtensionStrategy::J0 => "J0",
            ExtensionStrategy::J1 => "J1",
            ExtensionStrategy::J2 => "J2",
        })
    }
}

impl ExtensionStrategy {
    /// The strategy turning kernel splitting `current` into `target` one dimension up.
    pub fn select(current: &SplittingType, target: &SplittingType, e: u32) -> Result<Self> {
        let e = e as i64;
        if current.with(&[e]) == *target {
            return Ok(ExtensionStrategy::J0);
        }
        let one = current.without(&[e - 2]).map(|s| s.with(&[e - 1, e - 1]));
        if one.as_ref() == Some(target) {
            return Ok(ExtensionStrategy::J1);
        }
        let two = current
            .without(&[e - 3, e - 3])
            .map(|s| s.with(&[e - 2, e - 2, e - 2]));
        if two.as_ref() == Some(target) {
            return Ok(ExtensionStrategy::J2);
        }
        Err(Error::NoSolution(format!(
            "no single J0/J1/J2 step turns {current} into {target} (e = {e})"
        )))
    }

    /// Twist of the kernel summands the strategy consumes.
    fn consumed(self, e: i64) -> Vec<i64> {
        match self {
            ExtensionStrategy::J0 => vec![],
            ExtensionStrategy::J1 => vec![e - 2],
            ExtensionStrategy::J2 => vec![e - 3, e - 3],
        }
    }
}

/// One certified extension step.
#[derive(Debug, Clone)]
pub struct ExtensionStep<F> {
    pub input_f: IdealCombination<F>,
    pub strategy: ExtensionStrategy,
    pub output_f: IdealCombination<F>,
    /// Kernel of the input `δ`, columns reordered so the consumed summands come first.
    pub kernel: GradedSheafMap<F>,
    pub j: GradedSheafMap<F>,
    pub n1: GradedSheafMap<F>,
    pub n2: GradedSheafMap<F>,
    /// `N = (N_1; N_2)`, the kernel of `delta_out`.
    pub n: GradedSheafMap<F>,
    pub delta_out: GradedSheafMap<F>,
    pub g: BinaryForm<F>,
    pub target_splitting: SplittingType,
}

impl<F: Field> ExtensionStep<F> {
    pub fn to_json(&self) -> Value {
        json!({
            "strategy": self.strategy.to_string(),
            "input_F": self.input_f.to_hsf(),
            "output_F": self.output_f.to_hsf(),
            "K": self.kernel.to_json(),
            "J": self.j.to_json(),
            "N1": self.n1.to_json(),
            "N2": self.n2.to_json(),
            "N": self.n.to_json(),
            "delta": self.delta_out.to_json(),
            "g": self.g.to_string(),
            "target_splitting": self.target_splitting.parts(),
        })
    }
}

fn monomial<F: Field>(ctx: CurveContext, vars: &[usize]) -> MultiPoly<F> {
    MultiPoly::from_vars(ctx, vars)
}

/// `Σ x_(vars) Q_(l,l+1)` over the given `(l, vars)`.
fn diagonal_chain<F: Field>(ctx: CurveContext, terms: &[(u32, Vec<usize>)]) -> Result<IdealCombination<F>> {
    let mut f = IdealCombination::new(ctx);
    for (l, vars) in terms {
        f.add_quadric(*l, l + 1, monomial(ctx, vars))?;
    }
    Ok(f)
}

fn quadric_seed<F: Field>(ctx: CurveContext) -> Result<IdealCombination<F>> {
    diagonal_chain(ctx, &(1..ctx.e).map(|l| (l, vec![])).collect::<Vec<_>>())
}

fn cubic_seed<F: Field>(ctx: CurveContext) -> Result<IdealCombination<F>> {
    let e = ctx.e as usize;
    let terms: Vec<(u32, Vec<usize>)> = match e {
        3 => vec![(1, vec![0]), (2, vec![3])],
        // From e = 4 on: x_(l-1) for l <= e-3, then x_(e-2) and x_e.
        _ => (1..e)
            .map(|l| {
                let var = match l {
                    _ if l + 2 == e => e - 2,
                    _ if l + 1 == e => e,
                    _ => l - 1,
                };
                (l as u32, vec![var])
            })
            .collect(),
    };
    diagonal_chain(ctx, &terms)
}

/// Increments of the `ψ` ladder used for `(d, e, n) = (4, 5, 5)`, found by [`search_ladder_seed`].
pub const QUARTIC_E5_LADDER: [u32; 3] = [4, 4, 5];

/// Reading of the coefficient of `Q_(n-2,n-1)` in the quartic family with `n >= 7`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuarticCoefficient {
    /// `x_(n-2)^2`.
    Square,
    /// `x_(n-2) x_(n-1)`, the reading that reproduces the family's `ψ`.
    Product,
}

/// The quartic seed family at `e = n >= 7` under either reading of the `Q_(n-2,n-1)` coefficient.
pub fn quartic_family<F: Field>(ctx: CurveContext, reading: QuarticCoefficient) -> Result<IdealCombination<F>> {
    let n = ctx.e as usize;
    let mut terms: Vec<(u32, Vec<usize>)> = (1..=n - 5).map(|l| (l as u32, vec![l - 1, l - 1])).collect();
    terms.push(((n - 4) as u32, vec![n - 5, n - 4]));
    terms.push(((n - 3) as u32, vec![n - 3, n - 3]));
    terms.push((
        (n - 2) as u32,
        match reading {
            QuarticCoefficient::Square => vec![n - 2, n - 2],
            QuarticCoefficient::Product => vec![n - 2, n - 1],
        },
    ));
    terms.push(((n - 1) as u32, vec![n, n]));
    diagonal_chain(ctx, &terms)
}

fn quartic_seed<F: Field>(ctx: CurveContext) -> Result<IdealCombination<F>> {
    match ctx.e {
        4 => diagonal_chain(ctx, &[(1, vec![0, 0]), (2, vec![2, 2]), (3, vec![4, 4])]),
        5 => ladder_seed(ctx, &QUARTIC_E5_LADDER),
        6 => {
            let mut f = diagonal_chain(
                ctx,
                &[
                    (1, vec![0, 0]),
                    (2, vec![0, 3]),
                    (3, vec![3, 3]),
                    (4, vec![3, 6]),
                    (5, vec![6, 6]),
                ],
            )?;
            f.add_quadric(3, 6, monomial(ctx, &[3, 3]))?;
            Ok(f)
        }
        _ => {
            let target = exact_prediction(ctx.d, ctx.e, ctx.n)?;
            let square = quartic_family(ctx, QuarticCoefficient::Square)?;
            if kernel_splitting(&square)? == target {
                return Ok(square);
            }
            let product = quartic_family(ctx, QuarticCoefficient::Product)?;
            if kernel_splitting(&product)? == target {
                return Ok(product);
            }
            Err(Error::Certification(format!(
                "neither reading of the quartic family gives {target} at e = n = {}",
                ctx.e
            )))
        }
    }
}

/// `ψ` targets `s^(D-τ_l) t^(τ_l)` with `τ_1 = 0` and the given increments, `D = e(d-1)-2`.
pub fn ladder_targets<F: Field>(ctx: CurveContext, increments: &[u32]) -> Result<Vec<BinaryForm<F>>> {
    let big = ctx.e as i64 * (ctx.d as i64 - 1) - 2;
    if increments.len() + 2 != ctx.e as usize {
        return Err(Error::Precondition(format!(
            "a ladder for e = {} needs {} increments, got {}",
            ctx.e,
            ctx.e as usize - 2,
            increments.len()
        )));
    }
    let mut tau = 0i64;
    let mut out = vec![BinaryForm::monomial(F::one(), big as u32, 0)];
    for &k in increments {
        tau += k as i64;
        if tau > big {
            return Err(Error::Precondition(format!("ladder exponent {tau} exceeds degree {big}")));
        }
        out.push(BinaryForm::monomial(F::one(), (big - tau) as u32, tau as u32));
    }
    Ok(out)
}

fn ladder_seed<F: Field>(ctx: CurveContext, increments: &[u32]) -> Result<IdealCombination<F>> {
    lift_psi_targets(&ladder_targets::<F>(ctx, increments)?, ctx)
}

/// Ladders for `(d, n, n)` with `n >= 2d - 2`: steps of `d - 1`, then `2d - 4` steps of `d`.
pub fn general_degree_ladder(d: u32, n: u32) -> Vec<u32> {
    let mut out = vec![d - 1; (n + 2 - 2 * d) as usize];
    out.extend(std::iter::repeat_n(d, (2 * d - 4) as usize));
    out
}

/// Searches ladders with positive increments summing to `e(d-1)-2`, most balanced first, for a
/// smooth seed at `n = e` whose `T_X|_C` is `target`.
pub fn search_ladder_seed<F: Field>(
    ctx: CurveContext,
    target: &SplittingType,
) -> Result<(Vec<u32>, IdealCombination<F>)> {
    let total = ctx.e * (ctx.d - 1) - 2;
    let parts = ctx.e as usize - 2;
    let mut candidates = Vec::new();
    compositions(total, parts, &mut vec![], &mut candidates);
    candidates.sort_by_key(|c| {
        let spread = c.iter().max().unwrap_or(&0) - c.iter().min().unwrap_or(&0);
        (spread, c.clone())
    });
    for inc in candidates {
        let Ok(f) = ladder_seed::<F>(ctx, &inc) else {
            continue;
        };
        if check_smooth_along_curve(&f) && kernel_splitting(&f)? == *target {
            return Ok((inc, f));
        }
    }
    Err(Error::NoSolution(format!("no ψ ladder gives {target} at {ctx}")))
}

fn compositions(total: u32, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    for k in 1..=total.saturating_sub(parts as u32 - 1) {
        prefix.push(k);
        compositions(total - k, parts - 1, prefix, out);
        prefix.pop();
    }
}

fn kernel_splitting<F: Field>(f: &IdealCombination<F>) -> Result<SplittingType> {
    build_delta(f).splitting_of_kernel()
}

fn exact_prediction(d: u32, e: u32, n: u32) -> Result<SplittingType> {
    predicted_splitting(d, e, n)?
        .exact_splitting()
        .cloned()
        .ok_or_else(|| Error::Unsupported(format!("no exact splitting is predicted at (d,e,n) = ({d},{e},{n})")))
}

/// Quadric coefficients whose `ψ` columns are `targets` (linear part zero).
///
/// Each target divisible by `s^(e-l-1) t^(l-1)` is realized on `Q_(l,l+1)` alone; otherwise the
/// restrictions of all `F_(i,j)` are solved for at once.
pub fn lift_psi_targets<F: Field>(targets: &[BinaryForm<F>], context: CurveContext) -> Result<IdealCombination<F>> {
    let (d, e) = (context.d as i64, context.e as i64);
    if targets.len() as i64 != e - 1 {
        return Err(Error::Precondition(format!(
            "expected {} ψ targets for e = {e}, got {}",
            e - 1,
            targets.len()
        )));
    }
    let col_deg = e * (d - 1) - 2;
    for t in targets {
        if !t.is_zero() && t.degree() != col_deg {
            return Err(Error::DegreeMismatch(col_deg, t.degree()));
        }
    }
    let diagonal: Option<Vec<BinaryForm<F>>> = targets
        .iter()
        .enumerate()
        .map(|(k, t)| {
            let l = k as u32 + 1;
            t.div_monomial(context.e - l - 1, l - 1)
        })
        .collect();
    let mut f = IdealCombination::new(context);
    if let Some(restrictions) = diagonal {
        for (k, r) in restrictions.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let l = k as u32 + 1;
            f.add_quadric(l, l + 1, lift_binary_form(r, context, context.d - 2)?)?;
        }
        return Ok(f);
    }
    // Unknowns: coefficients of every F_(i,j)|_C, degree e(d-2).
    let r_deg = e * (d - 2);
    let width = (r_deg + 1) as usize;
    let pairs: Vec<(i64, i64)> = (1..e).flat_map(|i| (i + 1..=e).map(move |j| (i, j))).collect();
    let rows_per_col = (col_deg + 1) as usize;
    let ncols = pairs.len() * width;
    let mut mat = vec![vec![F::zero(); ncols]; (e - 1) as usize * rows_per_col];
    let mut rhs = vec![F::zero(); mat.len()];
    for (p, &(i, j)) in pairs.iter().enumerate() {
        for l in i..j {
            let t_shift = (j + i - l - 2) as usize;
            let row0 = (l - 1) as usize * rows_per_col;
            for q in 0..width {
                mat[row0 + q + t_shift][p * width + q] += F::one();
            }
        }
    }
    for (k, t) in targets.iter().enumerate() {
        for (q, c) in t.coeffs().iter().enumerate() {
            rhs[k * rows_per_col + q] = c.clone();
        }
    }
    let sol = linalg::solve(&mat, &rhs, ncols).ok_or_else(|| {
        Error::NoSolution(format!(
            "ψ targets are outside the image of the quadric coefficients at {context}"
        ))
    })?;
    for (p, &(i, j)) in pairs.iter().enumerate() {
        let r = BinaryForm::from_coeffs(r_deg, sol[p * width..(p + 1) * width].to_vec())?;
        if !r.is_zero() {
            f.add_quadric(i as u32, j as u32, lift_binary_form(&r, context, context.d - 2)?)?;
        }
    }
    Ok(f)
}

fn check_constructive_range(d: u32, e: u32, n: u32) -> Result<()> {
    if e > n || n < 3 {
        return Err(Error::Precondition(format!("need 3 <= n and e <= n, got (d,e,n) = ({d},{e},{n})")));
    }
    let unsupported = |why: String| Err(Error::Unsupported(why));
    match d {
        0 | 1 => Err(Error::Precondition(format!("hypersurface degree d = {d} < 2"))),
        2 if e < 2 => unsupported("lines on quadrics are outside the constructive range (quadrics theorem needs e >= 2)".into()),
        3 if e < 3 => unsupported(format!(
            "cubics with e = {e} are settled by the slope corollary, not by an explicit construction"
        )),
        4 if e < 4 => unsupported(format!(
            "quartics with e = {e} are settled by the slope corollary, not by an explicit construction"
        )),
        d if d >= 5 && !(e == n && n >= 2 * d - 2) => unsupported(format!(
            "degree {d} is constructed only for e = n >= 2d-2 (general-degree theorem); got e = {e}, n = {n}"
        )),
        _ => Ok(()),
    }
}

/// The explicit hypersurface for `(d, e, n)`: a seed at `n = e`, then the induction steps.
pub fn generate_example<F: Field>(d: u32, e: u32, n: u32) -> Result<IdealCombination<F>> {
    check_constructive_range(d, e, n)?;
    if d == 2 {
        return quadric_seed(CurveContext::for_field::<F>(d, e, n)?);
    }
    let seed_ctx = CurveContext::for_field::<F>(d, e, e)?;
    let mut f = match d {
        3 => cubic_seed(seed_ctx)?,
        4 => quartic_seed(seed_ctx)?,
        _ => ladder_seed(seed_ctx, &general_degree_ladder(d, e))?,
    };
    let mut kernel = None;
    for target in extension_schedule(d, e, n)?.into_iter().skip(1) {
        let step = extend_with_kernel(&f, kernel.take(), &target)?;
        kernel = Some(step.n.clone());
        f = step.output_f;
    }
    Ok(f)
}

/// Predicted splittings for `n = e, e+1, ..., n_target`.
pub fn extension_schedule(d: u32, e: u32, n_target: u32) -> Result<Vec<SplittingType>> {
    check_constructive_range(d, e, n_target)?;
    let start = e.max(3);
    (start..=n_target).map(|n| exact_prediction(d, e, n)).collect()
}

/// Strategies of the steps in [`extension_schedule`].
pub fn extension_plan(d: u32, e: u32, n_target: u32) -> Result<Vec<ExtensionStrategy>> {
    let schedule = extension_schedule(d, e, n_target)?;
    schedule
        .windows(2)
        .map(|w| ExtensionStrategy::select(&w[0], &w[1], e))
        .collect()
}

/// Extends `F` from `P^n` to `P^(n+1)` so that `T_X|_C` becomes `target`.
pub fn extend_dimension<F: Field>(f: &IdealCombination<F>, target: &SplittingType) -> Result<ExtensionStep<F>> {
    extend_with_kernel(f, None, target)
}

/// As [`extend_dimension`], reusing a known kernel matrix of `δ_F`.
pub fn extend_with_kernel<F: Field>(
    f: &IdealCombination<F>,
    kernel: Option<GradedSheafMap<F>>,
    target: &SplittingType,
) -> Result<ExtensionStep<F>> {
    let ctx = f.context();
    let (d, e, n) = (ctx.d as i64, ctx.e as i64, ctx.n as i64);
    if target.rank() as i64 != n || target.degree() != e * (n + 2 - d) {
        return Err(Error::Precondition(format!(
            "target {target} needs rank {n} and degree {}",
            e * (n + 2 - d)
        )));
    }
    let delta_in = build_delta(f);
    let k = match kernel {
        Some(k) => k,
        None => delta_in.kernel_matrix()?,
    };
    let current = SplittingType::new(k.source().to_vec());
    let strategy = ExtensionStrategy::select(&current, target, ctx.e)?;

    // Consumed columns first, the rest in ascending twist order.
    let mut order: Vec<usize> = (0..k.cols()).collect();
    order.sort_by_key(|&j| k.source()[j]);
    let mut front = Vec::new();
    for a in strategy.consumed(e) {
        let pos = order
            .iter()
            .position(|&j| k.source()[j] == a && !front.contains(&j))
            .expect("strategy selection found the summand");
        front.push(order.remove(pos));
    }
    front.extend(order);
    let k = k.select_columns(&front);

    let (j, n1, n2) = match strategy {
        ExtensionStrategy::J0 => j0(&k, e)?,
        ExtensionStrategy::J1 => j1(&k)?,
        ExtensionStrategy::J2 => j2(&k)?,
    };
    if n1.compose(&j)? != k {
        return Err(Error::Certification(format!("{strategy}: N1 * J differs from K")));
    }
    if !n2.compose(&j)?.is_zero() {
        return Err(Error::Certification(format!("{strategy}: N2 * J is not zero")));
    }
    let n_map = n1.stack(&n2)?;
    let raw = n_map.cokernel_matrix()?;
    let delta_out = normalize(&raw, &delta_in)?;
    if !delta_out.compose(&n_map)?.is_zero() {
        return Err(Error::Certification("δ_out does not annihilate N".into()));
    }
    let g = delta_out.entry(0, n as usize).clone();
    let out_ctx = ctx.with_n(ctx.n + 1)?;
    let mut output_f = f.embed(ctx.n + 1)?;
    if !g.is_zero() {
        output_f.add_linear(ctx.n + 1, lift_binary_form(&g, out_ctx, ctx.d - 1)?)?;
    }
    if build_delta(&output_f) != delta_out {
        return Err(Error::Certification("lifted hypersurface does not induce δ_out".into()));
    }
    let found = delta_out.splitting_of_kernel()?;
    if found != *target || SplittingType::new(n_map.source().to_vec()) != *target {
        return Err(Error::Certification(format!(
            "{strategy} step produced {found}, expected {target}"
        )));
    }
    Ok(ExtensionStep {
        input_f: f.clone(),
        strategy,
        output_f,
        kernel: k,
        j,
        n1,
        n2,
        n: n_map,
        delta_out,
        g,
        target_splitting: target.clone(),
    })
}

type Lemma<F> = (GradedSheafMap<F>, GradedSheafMap<F>, GradedSheafMap<F>);

fn j0<F: Field>(k: &GradedSheafMap<F>, e: i64) -> Result<Lemma<F>> {
    let a = k.source().to_vec();
    let mut big_e = a.clone();
    big_e.push(e);
    let r = a.len();
    let j = GradedSheafMap::from_fn(big_e.clone(), a, |i, c, _| {
        if i == c {
            BinaryForm::one()
        } else {
            BinaryForm::zero(0)
        }
    })?;
    let n1 = k.hstack(&GradedSheafMap::zero(k.target().to_vec(), vec![e]))?;
    let n2 = GradedSheafMap::from_fn(vec![e], big_e, |_, c, _| {
        if c == r {
            BinaryForm::one()
        } else {
            BinaryForm::zero(0)
        }
    })?;
    Ok((j, n1, n2))
}

/// Splits `k = s p + c t^deg`.
fn split_s<F: Field>(k: &BinaryForm<F>) -> (BinaryForm<F>, F) {
    let deg = k.degree();
    let c = k.coeff(deg as usize);
    let p = BinaryForm::from_coeffs(deg - 1, k.coeffs()[..deg as usize].to_vec()).expect("degree >= 1");
    (p, c)
}

/// Splits `k = t q + c s^deg`.
fn split_t<F: Field>(k: &BinaryForm<F>) -> (BinaryForm<F>, F) {
    let deg = k.degree();
    let c = k.coeff(0);
    let q = BinaryForm::from_coeffs(deg - 1, k.coeffs()[1..].to_vec()).expect("degree >= 1");
    (q, c)
}

fn mono<F: Field>(c: F, a: i64, b: i64) -> BinaryForm<F> {
    BinaryForm::monomial(c, a as u32, b as u32)
}

fn j1<F: Field>(k: &GradedSheafMap<F>) -> Result<Lemma<F>> {
    let src = k.source();
    let a = src[0];
    let mut big_e = vec![a + 1];
    big_e.extend_from_slice(&src[1..]);
    big_e.push(a + 1);
    let last = big_e.len() - 1;
    let j = GradedSheafMap::from_fn(big_e.clone(), src.to_vec(), |i, c, _| match (i, c) {
        (0, 0) => BinaryForm::s(),
        (i, 0) if i == last => BinaryForm::t(),
        (i, c) if i == c && i > 0 => BinaryForm::one(),
        _ => BinaryForm::zero(0),
    })?;
    let mut rows = Vec::new();
    for i in 0..k.rows() {
        let k1 = k.entry(i, 0);
        let deg = k1.degree();
        if deg < 1 {
            return Err(Error::Precondition("J1 needs kernel targets of twist above a".into()));
        }
        let (p, c) = split_s(k1);
        let mut row = vec![p];
        row.extend((1..k.cols()).map(|c| k.entry(i, c).clone()));
        row.push(mono(c, 0, deg - 1));
        rows.push(row);
    }
    let n1 = GradedSheafMap::new(k.target().to_vec(), big_e.clone(), rows)?;
    let n2 = GradedSheafMap::from_fn(vec![a + 2], big_e, |_, c, _| match c {
        0 => BinaryForm::t(),
        c if c == last => BinaryForm::s().neg(),
        _ => BinaryForm::zero(0),
    })?;
    Ok((j, n1, n2))
}

fn j2<F: Field>(k: &GradedSheafMap<F>) -> Result<Lemma<F>> {
    let src = k.source();
    let a = src[0];
    let mut big_e = vec![a + 1, a + 1];
    big_e.extend_from_slice(&src[2..]);
    big_e.push(a + 1);
    let last = big_e.len() - 1;
    let j = GradedSheafMap::from_fn(big_e.clone(), src.to_vec(), |i, c, _| match (i, c) {
        (0, 0) => BinaryForm::s(),
        (1, 1) => BinaryForm::t(),
        (i, 0) if i == last => BinaryForm::t(),
        (i, 1) if i == last => BinaryForm::s(),
        (i, c) if i == c && i > 1 => BinaryForm::one(),
        _ => BinaryForm::zero(0),
    })?;
    let mut rows = Vec::new();
    for i in 0..k.rows() {
        let deg = k.entry(i, 0).degree();
        if deg < 2 {
            return Err(Error::Precondition("J2 needs kernel targets of twist at least a + 2".into()));
        }
        let (p, c1) = split_s(k.entry(i, 0));
        let (q, c2) = split_t(k.entry(i, 1));
        let b1 = p.try_sub(&mono(c2.clone(), deg - 2, 1))?;
        let b2 = q.try_sub(&mono(c1.clone(), 1, deg - 2))?;
        let b_last = mono(c1, 0, deg - 1).try_add(&mono(c2, deg - 1, 0))?;
        let mut row = vec![b1, b2];
        row.extend((2..k.cols()).map(|c| k.entry(i, c).clone()));
        row.push(b_last);
        rows.push(row);
    }
    let n1 = GradedSheafMap::new(k.target().to_vec(), big_e.clone(), rows)?;
    let n2 = GradedSheafMap::from_fn(vec![a + 3], big_e, |_, c, _| match c {
        0 => BinaryForm::monomial(F::one(), 0, 2),
        1 => BinaryForm::monomial(F::one(), 2, 0),
        c if c == last => BinaryForm::monomial(-F::one(), 1, 1),
        _ => BinaryForm::zero(0),
    })?;
    Ok((j, n1, n2))
}

/// Scales the cokernel row so that its first entries are those of `delta_in`.
fn normalize<F: Field>(raw: &GradedSheafMap<F>, delta_in: &GradedSheafMap<F>) -> Result<GradedSheafMap<F>> {
    let n = delta_in.cols();
    if raw.rows() != 1 || raw.cols() != n + 1 || raw.target() != delta_in.target() {
        return Err(Error::Certification(format!(
            "cokernel of N has shape {}x{} into {:?}; expected 1x{} into {:?}",
            raw.rows(),
            raw.cols(),
            raw.target(),
            n + 1,
            delta_in.target()
        )));
    }
    let pivot = (0..n).find(|&j| !delta_in.entry(0, j).is_zero()).ok_or_else(|| {
        Error::Precondition("input δ is zero".into())
    })?;
    let want = delta_in.entry(0, pivot);
    let have = raw.entry(0, pivot);
    let idx = want.coeffs().iter().position(|c| !c.is_zero()).expect("nonzero");
    let scale = have
        .coeff(idx)
        .inv()
        .map(|inv| want.coeff(idx) * inv)
        .ok_or_else(|| Error::Certification("cokernel of N does not extend the input δ".into()))?;
    let out = raw.scale(&scale);
    for j in 0..n {
        if out.entry(0, j) != delta_in.entry(0, j) {
            return Err(Error::Certification(format!(
                "cokernel of N does not extend the input δ: entry {} is {} instead of {}",
                j + 1,
                out.entry(0, j),
                delta_in.entry(0, j)
            )));
        }
    }
    Ok(out)
}
