use bgsplit::{
    build_delta, check_smooth_along_curve, extend_dimension, extend_with_kernel, extension_plan, extension_schedule,
    generate_example, predicted_splitting, CurveContext, Error, ExtensionStrategy, Gf32003,
    SplittingType,
};
use bgsplit::constructor::{
    general_degree_ladder, quartic_family, search_ladder_seed, QuarticCoefficient,
    QUARTIC_E5_LADDER,
};
use ExtensionStrategy::{J0, J1, J2};

type P = Gf32003;

fn st(p: &[i64]) -> SplittingType {
    SplittingType::new(p.to_vec())
}

#[test]
fn cubic_schedule() {
    assert_eq!(
        extension_schedule(3, 3, 5).unwrap(),
        vec![st(&[1, 2]), st(&[2, 2, 2]), st(&[2, 2, 2, 3])]
    );
    assert_eq!(extension_plan(3, 3, 5).unwrap(), vec![J1, J0]);
    assert_eq!(extension_plan(3, 6, 9).unwrap(), vec![J1, J0, J0]);
}

#[test]
fn quartic_plans_follow_the_induction() {
    for e in 4..=6u32 {
        let n_max = 2 * e + 4;
        let plan = extension_plan(4, e, n_max).unwrap();
        for (k, s) in plan.iter().enumerate() {
            let n = e + 1 + k as u32;
            let want = match n {
                _ if n == e + 1 => J2,
                _ if n <= 2 * e + 1 => J1,
                _ => J0,
            };
            assert_eq!(*s, want, "e = {e}, n = {n}");
        }
    }
    let schedule = extension_schedule(4, 4, 7).unwrap();
    for (k, s) in schedule.iter().enumerate() {
        let n = 4 + k as u32;
        assert_eq!(Some(s), predicted_splitting(4, 4, n).unwrap().exact_splitting());
    }
}

#[test]
fn quadrics_need_only_j0() {
    assert!(extension_plan(2, 5, 9).unwrap().iter().all(|&s| s == J0));
}

#[test]
fn each_step_is_certified() {
    for (d, e, n) in [(3, 3, 6), (3, 5, 7), (4, 4, 7), (4, 5, 8)] {
        let mut f = generate_example::<P>(d, e, e).unwrap();
        let mut kernel = None;
        for target in extension_schedule(d, e, n).unwrap().into_iter().skip(1) {
            let step = extend_with_kernel(&f, kernel.take(), &target).unwrap();
            assert_eq!(step.n1.compose(&step.j).unwrap(), step.kernel);
            assert!(step.n2.compose(&step.j).unwrap().is_zero());
            assert!(step.delta_out.compose(&step.n).unwrap().is_zero());
            assert!(step.n.full_rank_everywhere());
            let mut twists = step.n.source().to_vec();
            twists.sort();
            assert_eq!(twists, target.parts());
            let delta_in = build_delta(&f);
            assert_eq!(
                step.delta_out.entries()[0][..delta_in.cols()],
                delta_in.entries()[0][..]
            );
            assert_eq!(build_delta(&step.output_f), step.delta_out);
            kernel = Some(step.n.clone());
            f = step.output_f;
        }
        assert_eq!(f, generate_example::<P>(d, e, n).unwrap());
    }
}

#[test]
fn printed_cokernel_rows() {
    let f = generate_example::<P>(4, 4, 4).unwrap();
    let target = extension_schedule(4, 4, 5).unwrap()[1].clone();
    let step = extend_dimension(&f, &target).unwrap();
    assert_eq!(step.strategy, J2);
    let row: Vec<String> = step.n2.entries()[0].iter().map(|g| g.to_string()).collect();
    assert_eq!(row[..2], ["t^2".to_string(), "s^2".to_string()]);
    assert_eq!(row.last().unwrap(), "-s*t");
    assert!(row[2..row.len() - 1].iter().all(|g| g == "0"));

    let f = generate_example::<P>(3, 4, 4).unwrap();
    let target = extension_schedule(3, 4, 5).unwrap()[1].clone();
    let step = extend_dimension(&f, &target).unwrap();
    assert_eq!(step.strategy, J1);
    let row: Vec<String> = step.n2.entries()[0].iter().map(|g| g.to_string()).collect();
    assert_eq!(row[0], "t");
    assert_eq!(row.last().unwrap(), "-s");
}

#[test]
fn unreachable_target_is_rejected() {
    let f = generate_example::<P>(3, 3, 3).unwrap();
    assert!(extend_dimension(&f, &st(&[1, 1, 4])).is_err());
    assert!(extend_dimension(&f, &st(&[2, 2])).is_err());
}

#[test]
fn generated_examples_are_smooth() {
    for (d, e_lo, n_max) in [(2, 2, 8), (3, 3, 8), (4, 4, 8)] {
        for e in e_lo..=n_max {
            for n in e.max(3)..=n_max {
                let f = generate_example::<P>(d, e, n).unwrap();
                assert!(check_smooth_along_curve(&f), "({d},{e},{n})");
            }
        }
    }
}

#[test]
fn unsupported_ranges() {
    assert!(matches!(generate_example::<P>(5, 6, 6), Err(Error::Unsupported(_))));
    assert!(matches!(generate_example::<P>(5, 8, 9), Err(Error::Unsupported(_))));
    assert!(generate_example::<P>(5, 8, 8).is_ok());
}

#[test]
fn quartic_family_readings() {
    let ctx = CurveContext::for_field::<P>(4, 8, 8).unwrap();
    let want = predicted_splitting(4, 8, 8).unwrap().exact_splitting().cloned().unwrap();
    let square = quartic_family::<P>(ctx, QuarticCoefficient::Square).unwrap();
    let product = quartic_family::<P>(ctx, QuarticCoefficient::Product).unwrap();
    assert_ne!(build_delta(&square).splitting_of_kernel().unwrap(), want);
    assert_eq!(build_delta(&product).splitting_of_kernel().unwrap(), want);
}

#[test]
fn quartic_e5_ladder_search() {
    let ctx = CurveContext::for_field::<P>(4, 5, 5).unwrap();
    let want = predicted_splitting(4, 5, 5).unwrap().exact_splitting().cloned().unwrap();
    let (ladder, _) = search_ladder_seed::<P>(ctx, &want).unwrap();
    assert_eq!(ladder, QUARTIC_E5_LADDER);
}

#[test]
fn general_ladder_shape() {
    assert_eq!(general_degree_ladder(5, 8), vec![5; 6]);
    assert_eq!(general_degree_ladder(5, 10), vec![4, 4, 5, 5, 5, 5, 5, 5]);
    assert_eq!(general_degree_ladder(6, 11), vec![5, 6, 6, 6, 6, 6, 6, 6, 6]);
    for (d, n) in [(5, 8), (5, 11), (6, 10), (6, 11)] {
        let ladder = general_degree_ladder(d, n);
        assert_eq!(ladder.len() as u32, n - 2);
        assert_eq!(ladder.iter().sum::<u32>(), n * (d - 1) - 2);
    }
}
