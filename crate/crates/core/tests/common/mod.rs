//! Seeded random inputs shared by the integration tests.
#![allow(dead_code)]

use bgsplit::{
    check_smooth_along_curve, BinaryForm, CurveContext, Field, GradedSheafMap, IdealCombination,
    MultiPoly, SplittingType,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_form<F: Field>(rng: &mut TestRng, degree: i64, density: f64) -> BinaryForm<F> {
    if degree < 0 {
        return BinaryForm::zero(degree);
    }
    let coeffs = (0..=degree)
        .map(|_| {
            if rng.gen_bool(density) {
                F::from_i64(rng.gen_range(-5..=5))
            } else {
                F::zero()
            }
        })
        .collect();
    BinaryForm::from_coeffs(degree, coeffs).unwrap()
}

/// A graded map with `rows < cols <= 6` that has full rank at every point.
pub fn random_surjective_map<F: Field>(rng: &mut TestRng) -> GradedSheafMap<F> {
    loop {
        let rows = rng.gen_range(1..=3usize);
        let cols = rng.gen_range(rows + 1..=6usize);
        let target: Vec<i64> = (0..rows).map(|_| rng.gen_range(4..=8)).collect();
        let source: Vec<i64> = (0..cols).map(|_| rng.gen_range(0..=6)).collect();
        let density = rng.gen_range(0.3..0.9);
        let m = GradedSheafMap::from_fn(target, source, |_, _, deg| {
            random_form::<F>(rng, deg, density)
        })
        .unwrap();
        if m.full_rank_everywhere() {
            return m;
        }
    }
}

/// An arbitrary graded map with small twists, possibly degenerate.
pub fn random_map<F: Field>(rng: &mut TestRng, rows: usize, cols: usize) -> GradedSheafMap<F> {
    let target: Vec<i64> = (0..rows).map(|_| rng.gen_range(-2..=4)).collect();
    let source: Vec<i64> = (0..cols).map(|_| rng.gen_range(-3..=2)).collect();
    GradedSheafMap::from_fn(target, source, |_, _, deg| random_form::<F>(rng, deg, 0.6)).unwrap()
}

pub fn random_poly<F: Field>(rng: &mut TestRng, ctx: CurveContext, degree: u32, terms: usize) -> MultiPoly<F> {
    let mut p = MultiPoly::zero(ctx, degree);
    for _ in 0..terms {
        let vars: Vec<usize> = (0..degree).map(|_| rng.gen_range(0..ctx.nvars())).collect();
        let c = F::from_i64(*[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap());
        p = p.try_add(&MultiPoly::from_vars(ctx, &vars).scale(&c)).unwrap();
    }
    p
}

/// A random ideal combination, smooth along the curve, with `2 <= d <= max_d` and `2 <= e <= n <= max_n`.
pub fn random_combination<F: Field>(rng: &mut TestRng, max_d: u32, max_n: u32) -> IdealCombination<F> {
    loop {
        let d = rng.gen_range(2..=max_d);
        let n = rng.gen_range(3..=max_n);
        let e = rng.gen_range(2..=n);
        let Ok(ctx) = CurveContext::for_field::<F>(d, e, n) else {
            continue;
        };
        let mut f = IdealCombination::new(ctx);
        for i in 1..e {
            for j in i + 1..=e {
                if rng.gen_bool(0.5) {
                    f.add_quadric(i, j, random_poly(rng, ctx, d - 2, 2)).unwrap();
                }
            }
        }
        for k in e + 1..=n {
            if rng.gen_bool(0.7) {
                f.add_linear(k, random_poly(rng, ctx, d - 1, 2)).unwrap();
            }
        }
        if check_smooth_along_curve(&f) {
            return f;
        }
    }
}

/// Every splitting type of rank `r` and degree `degree` with parts in `[-bound, bound]`.
pub fn splitting_types(r: usize, degree: i64, bound: i64) -> Vec<SplittingType> {
    fn go(r: usize, degree: i64, lo: i64, bound: i64, prefix: &mut Vec<i64>, out: &mut Vec<SplittingType>) {
        if r == 0 {
            if degree == 0 {
                out.push(SplittingType::new(prefix.clone()));
            }
            return;
        }
        // The remaining parts are at least `a` and at most `bound`.
        for a in lo..=bound {
            let rem = degree - a;
            let k = r as i64 - 1;
            if rem < a * k {
                break;
            }
            if rem > bound * k {
                continue;
            }
            prefix.push(a);
            go(r - 1, rem, a, bound, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(r, degree, -bound, bound, &mut Vec::new(), &mut out);
    out
}
