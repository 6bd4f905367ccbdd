//! Worked examples and values frozen from the independent sympy oracle (`tools/oracle.py`).

use bgsplit::{
    build_delta, build_psi, extend_dimension, extend_with_kernel, generate_example, parse_hsf,
    BinaryForm, CurveContext, ExtensionStrategy, GradedSheafMap, IdealCombination, MultiPoly,
    Rational, SplittingType,
};
use serde_json::Value;

type Q = Rational;

fn bf(text: &str) -> BinaryForm<Q> {
    BinaryForm::parse(text).unwrap()
}

fn forms(texts: &[&str]) -> Vec<BinaryForm<Q>> {
    texts.iter().map(|t| bf(t)).collect()
}

fn oracle() -> Value {
    serde_json::from_str(include_str!("data/oracle.json")).unwrap()
}

fn combination(d: u32, e: u32, n: u32, quad: &[(u32, u32, &str)], lin: &[(u32, &str)]) -> IdealCombination<Q> {
    let ctx = CurveContext::for_field::<Q>(d, e, n).unwrap();
    let mut f = IdealCombination::new(ctx);
    for &(i, j, p) in quad {
        f.add_quadric(i, j, MultiPoly::parse(p, ctx, d - 2).unwrap()).unwrap();
    }
    for &(k, p) in lin {
        f.add_linear(k, MultiPoly::parse(p, ctx, d - 1).unwrap()).unwrap();
    }
    f
}

fn oracle_case(name: &str) -> IdealCombination<Q> {
    match name {
        "quintic_5_3_3" => combination(5, 3, 3, &[(1, 2, "x0^3"), (2, 3, "x3^3")], &[]),
        "cubic_3_3_3" => combination(3, 3, 3, &[(1, 2, "x0"), (2, 3, "x3")], &[]),
        "cubic_3_3_4" => combination(3, 3, 4, &[(1, 2, "x0"), (2, 3, "x3")], &[(4, "x0*x3")]),
        "quartic_4_4_4" => combination(4, 4, 4, &[(1, 2, "x0^2"), (2, 3, "x2^2"), (3, 4, "x4^2")], &[]),
        "quartic_4_6_6" => combination(
            4,
            6,
            6,
            &[
                (1, 2, "x0^2"),
                (2, 3, "x0*x3"),
                (3, 4, "x3^2"),
                (4, 5, "x3*x6"),
                (5, 6, "x6^2"),
                (3, 6, "x3^2"),
            ],
            &[],
        ),
        other => panic!("unknown oracle case {other}"),
    }
}

#[test]
fn oracle_delta_nullities_and_splitting() {
    let data = oracle();
    for (name, case) in data.as_object().unwrap() {
        let f = oracle_case(name);
        let delta = build_delta(&f);
        let want: Vec<BinaryForm<Q>> = case["delta"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| bf(v.as_str().unwrap()))
            .collect();
        assert_eq!(delta.entries()[0], want, "{name}: delta");
        for (m, k) in case["nullities"].as_object().unwrap() {
            let m: i64 = m.parse().unwrap();
            assert_eq!(delta.section_kernel_dim(m) as u64, k.as_u64().unwrap(), "{name}: N({m})");
        }
        let parts: Vec<i64> = case["splitting"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v.as_i64().unwrap())
            .collect();
        assert_eq!(delta.splitting_of_kernel().unwrap(), SplittingType::new(parts), "{name}");
    }
}

#[test]
fn quintic_surface() {
    let f = oracle_case("quintic_5_3_3");
    assert_eq!(build_psi(&f).entries()[0], forms(&["s^10", "t^10"]));
    let delta = build_delta(&f);
    assert_eq!(delta.entries()[0], forms(&["s^10*t", "-s^11+t^11", "-s*t^10"]));
    assert_eq!(delta.section_kernel_dim(-2), 1);
    assert_eq!(delta.splitting_of_kernel().unwrap(), SplittingType::new([-5, 2]));
    assert_eq!(build_psi(&f).splitting_of_kernel().unwrap(), SplittingType::new([-5]));
    let gcd = BinaryForm::gcd(&delta.entries()[0]).unwrap();
    assert_eq!(gcd.degree(), 0);
}

#[test]
fn cubic_surface_kernel() {
    let f = generate_example::<Q>(3, 3, 3).unwrap();
    assert_eq!(f, oracle_case("cubic_3_3_3"));
    let delta = build_delta(&f);
    assert_eq!(delta.entries()[0], forms(&["s^4*t", "-s^5+t^5", "-s*t^4"]));
    let printed = GradedSheafMap::new(
        vec![4, 4, 4],
        vec![1, 2],
        vec![forms(&["t^3", "s^2"]), forms(&["0", "s*t"]), forms(&["s^3", "t^2"])],
    )
    .unwrap();
    assert!(printed.full_rank_everywhere());
    assert!(delta.compose(&printed).unwrap().is_zero());
    let k = delta.kernel_matrix().unwrap();
    assert!(delta.compose(&k).unwrap().is_zero());
    let mut twists = k.source().to_vec();
    twists.sort();
    assert_eq!(twists, vec![1, 2]);
}

fn printed_cubic_step() -> (GradedSheafMap<Q>, GradedSheafMap<Q>, GradedSheafMap<Q>) {
    let j = GradedSheafMap::new(
        vec![2, 2, 2],
        vec![1, 2],
        vec![forms(&["s", "0"]), forms(&["0", "1"]), forms(&["t", "0"])],
    )
    .unwrap();
    let n1 = GradedSheafMap::new(
        vec![4, 4, 4],
        vec![2, 2, 2],
        vec![
            forms(&["0", "s^2", "t^2"]),
            forms(&["0", "s*t", "0"]),
            forms(&["s^2", "t^2", "0"]),
        ],
    )
    .unwrap();
    let n2 = GradedSheafMap::new(vec![3], vec![2, 2, 2], vec![forms(&["t", "0", "-s"])]).unwrap();
    (j, n1, n2)
}

#[test]
fn cubic_extension_reproduces_printed_matrices() {
    let f = oracle_case("cubic_3_3_3");
    let k_printed = GradedSheafMap::new(
        vec![4, 4, 4],
        vec![1, 2],
        vec![forms(&["t^3", "s^2"]), forms(&["0", "s*t"]), forms(&["s^3", "t^2"])],
    )
    .unwrap();
    let target = SplittingType::new([2, 2, 2]);
    let step = extend_with_kernel(&f, Some(k_printed), &target).unwrap();
    let (j, n1, n2) = printed_cubic_step();
    assert_eq!(step.strategy, ExtensionStrategy::J1);
    assert_eq!(step.j, j);
    assert_eq!(step.n1, n1);
    assert_eq!(step.n2, n2);
    assert_eq!(
        step.delta_out.entries()[0],
        forms(&["s^4*t", "-s^5+t^5", "-s*t^4", "s^3*t^3"])
    );
    assert_eq!(step.g, bf("s^3*t^3"));
    assert_eq!(step.output_f, oracle_case("cubic_3_3_4"));
    let g4 = step.output_f.linear(4).unwrap();
    assert_eq!(g4.to_string(), "x0*x3");
    assert_eq!(step.target_splitting, target);
}

#[test]
fn cubic_extension_from_computed_kernel() {
    let f = oracle_case("cubic_3_3_3");
    let step = extend_dimension(&f, &SplittingType::new([2, 2, 2])).unwrap();
    assert_eq!(step.strategy, ExtensionStrategy::J1);
    assert!(step.n1.compose(&step.j).unwrap() == step.kernel);
    assert!(step.n2.compose(&step.j).unwrap().is_zero());
    assert_eq!(
        step.delta_out.entries()[0],
        forms(&["s^4*t", "-s^5+t^5", "-s*t^4", "s^3*t^3"])
    );
    assert_eq!(build_delta(&step.output_f), step.delta_out);
    assert_eq!(
        step.delta_out.splitting_of_kernel().unwrap(),
        SplittingType::new([2, 2, 2])
    );

    let next = extend_dimension(&step.output_f, &SplittingType::new([2, 2, 2, 3])).unwrap();
    assert_eq!(next.strategy, ExtensionStrategy::J0);
    assert_eq!(next.output_f.assemble(), step.output_f.assemble().embed(next.output_f.context()).unwrap());
    let mut expected = step.delta_out.entries()[0].clone();
    expected.push(BinaryForm::zero(6));
    assert_eq!(next.delta_out.entries()[0], expected);
}

#[test]
fn generated_small_cases_match_printed() {
    assert_eq!(generate_example::<Q>(3, 3, 4).unwrap(), oracle_case("cubic_3_3_4"));
    assert_eq!(generate_example::<Q>(4, 4, 4).unwrap(), oracle_case("quartic_4_4_4"));
    assert_eq!(generate_example::<Q>(4, 6, 6).unwrap(), oracle_case("quartic_4_6_6"));
    assert!(generate_example::<Q>(5, 3, 3).is_err(), "outside the constructive range");
}

#[test]
fn cubic_e4_printed_delta() {
    let f = generate_example::<Q>(3, 4, 4).unwrap();
    assert_eq!(
        build_delta(&f).entries()[0],
        forms(&["s^6*t", "-s^7+s^3*t^4", "-s^4*t^3+t^7", "-s*t^6"])
    );
    assert_eq!(
        build_delta(&f).splitting_of_kernel().unwrap(),
        SplittingType::new([2, 3, 3])
    );
}

#[test]
fn frozen_quartic_e5_ladder() {
    let f = generate_example::<Q>(4, 5, 5).unwrap();
    let frozen = parse_hsf::<Q>(&f.to_hsf()).unwrap();
    assert_eq!(frozen, f);
    assert_eq!(
        build_delta(&f).splitting_of_kernel().unwrap(),
        SplittingType::new([2, 2, 3, 3])
    );
}
