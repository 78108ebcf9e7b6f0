use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tin_gdof::ext::pos;
use tin_gdof::region::RowTag;
use tin_gdof::verify::random::{dyadic_power, dyadic_profile, random_order, random_power};
use tin_gdof::verify::{
    duality_certificate, finite_p_convergence, region_cross_validation, Direction, GridSpec,
};
use tin_gdof::{
    beta_exponents, check_tin_optimality, contains, extreme_points, gamma_exponents,
    ibc_finite_p_rates, ibc_gdof_bounds, imac_gdof_bounds, normalize_imac_power, parse_profile,
    random_profile, serialize_profile, tin_optimal_region, CellOrder, DecodingOrder, FinitePConfig,
    GdofTuple, Interval, NetworkProfile, PowerAllocation, Verdict, TOL,
};

fn profile_strategy(max_cells: usize) -> impl Strategy<Value = NetworkProfile> {
    (1..=max_cells, any::<u64>()).prop_map(|(cells, seed)| {
        random_profile(
            cells,
            Interval::new(0.0, 3.0).unwrap(),
            Interval::new(0.0, 3.0).unwrap(),
            seed,
        )
        .unwrap()
    })
}

fn scheme(profile: &NetworkProfile, seed: u64) -> (DecodingOrder, PowerAllocation) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (
        random_order(profile.cells(), &mut rng),
        random_power(profile.cells(), 4.5, &mut rng),
    )
}

/// Profiles meeting the TIN-optimality conditions, by rejection.
fn optimal_profile(cells: usize, seed: u64) -> NetworkProfile {
    (seed..)
        .map(|s| {
            random_profile(
                cells,
                Interval::new(1.0, 3.0).unwrap(),
                Interval::new(0.0, 0.5).unwrap(),
                s,
            )
            .unwrap()
        })
        .find(|p| check_tin_optimality(p).verdict == Verdict::Optimal)
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn bounds_are_nonnegative_and_capped(p in profile_strategy(4), seed in any::<u64>()) {
        let (order, power) = scheme(&p, seed);
        for d in [ibc_gdof_bounds(&p, &order, &power).unwrap(), imac_gdof_bounds(&p, &order, &power).unwrap()] {
            for k in 0..p.cells() {
                for l in 0..2 {
                    prop_assert!(d.get(k, l) >= 0.0);
                    prop_assert!(d.get(k, l) <= p.direct(k, l) + TOL);
                    if power.get(k, l) == f64::NEG_INFINITY {
                        prop_assert_eq!(d.get(k, l), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn reformulations_reproduce_bounds_exactly(cells in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = dyadic_profile(cells, 3.0, &mut rng);
        let order = random_order(cells, &mut rng);
        let power = dyadic_power(cells, 4.0, &mut rng);
        let beta = beta_exponents(&p, &order, &power).unwrap();
        let gamma = gamma_exponents(&p, &order, &power).unwrap();
        let ibc = ibc_gdof_bounds(&p, &order, &power).unwrap();
        let imac = imac_gdof_bounds(&p, &order, &power).unwrap();
        for k in 0..cells {
            for l in 0..2 {
                prop_assert_eq!(ibc.get(k, l), pos(power.get(k, l) + beta.get(k, l)));
                prop_assert_eq!(imac.get(k, l), pos(p.direct(k, l) + power.get(k, l) - gamma.get(k, l)));
            }
        }
    }

    #[test]
    fn duality_both_directions(p in profile_strategy(4), seed in any::<u64>()) {
        let (order, power) = scheme(&p, seed);
        for direction in [Direction::IbcToImac, Direction::ImacToIbc] {
            let r = duality_certificate(&p, &order, &power, direction).unwrap();
            prop_assert!(r.deficit <= 1e-9, "{:?}", r);
            prop_assert!(r.mapped_power.as_slice().iter().all(|x| *x <= 0.0));
        }
    }

    #[test]
    fn normalization_never_shrinks_uplink_box(p in profile_strategy(3), seed in any::<u64>()) {
        let (order, power) = scheme(&p, seed);
        let (o2, p2) = normalize_imac_power(&p, &order, &power).unwrap();
        let before = imac_gdof_bounds(&p, &order, &power).unwrap();
        let after = imac_gdof_bounds(&p, &o2, &p2).unwrap();
        prop_assert!(before.max_excess_over(&after) <= 1e-9);
        prop_assert!(tin_gdof::tin::imac_order_satisfied(&p, &o2, &p2).unwrap());
    }

    #[test]
    fn sampled_tuples_lie_in_optimal_region(cells in 1usize..=3, pseed in 0u64..10_000, seed in any::<u64>()) {
        let p = optimal_profile(cells, pseed);
        let region = tin_optimal_region(&p);
        let (order, power) = scheme(&p, seed);
        let d = ibc_gdof_bounds(&p, &order, &power).unwrap();
        prop_assert!(contains(&region, &d, TOL).unwrap().inside, "{:?}", d);
    }

    #[test]
    fn region_grows_with_direct_links(cells in 1usize..=3, seed in any::<u64>(), bump in 0.0f64..1.0) {
        let p = optimal_profile(cells, seed % 10_000);
        let stronger = NetworkProfile::from_fn(cells, |k, l, i| {
            p.alpha(k, l, i) + if k == i && l == 1 { bump } else { 0.0 }
        }).unwrap();
        let small = tin_optimal_region(&p);
        let big = tin_optimal_region(&stronger);
        // same row structure, right-hand sides never decrease
        for (a, b) in small.rows().iter().zip(big.rows()) {
            prop_assert_eq!(&a.coeffs, &b.coeffs);
            prop_assert!(b.rhs >= a.rhs - 1e-12);
        }
    }

    #[test]
    fn serialization_round_trips(p in profile_strategy(4)) {
        prop_assert_eq!(parse_profile(&serialize_profile(&p)).unwrap(), p);
    }
}

// Vertex enumeration in six dimensions is the slow part; fewer cases.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn region_commutes_with_cell_relabeling(cells in 2usize..=3, seed in any::<u64>(), rot in 1usize..3) {
        let p = random_profile(cells, Interval::new(1.0, 3.0).unwrap(), Interval::new(0.0, 1.0).unwrap(), seed).unwrap();
        let sigma: Vec<usize> = (0..cells).map(|k| (k + rot) % cells).collect();
        let q = p.permute_cells(&sigma).unwrap();
        let map = |v: &GdofTuple| {
            let mut out = vec![0.0; 2 * cells];
            for k in 0..cells {
                for l in 0..2 {
                    out[2 * sigma[k] + l] = v.get(k, l);
                }
            }
            GdofTuple::new(out).unwrap()
        };
        prop_assert_eq!(check_tin_optimality(&p).verdict, check_tin_optimality(&q).verdict);
        let vp: Vec<GdofTuple> = extreme_points(&tin_optimal_region(&p)).unwrap().iter().map(map).collect();
        let vq = extreme_points(&tin_optimal_region(&q)).unwrap();
        prop_assert_eq!(vp.len(), vq.len());
        for v in &vp {
            prop_assert!(vq.iter().any(|w| v.max_excess_over(w).abs() < 1e-9 && w.max_excess_over(v).abs() < 1e-9));
        }
    }

    #[test]
    fn vertices_are_feasible_and_tight(cells in 1usize..=3, seed in any::<u64>()) {
        let p = random_profile(cells, Interval::new(0.0, 3.0).unwrap(), Interval::new(0.0, 1.0).unwrap(), seed).unwrap();
        let region = tin_optimal_region(&p);
        for v in extreme_points(&region).unwrap() {
            prop_assert!(contains(&region, &v, 1e-7).unwrap().inside);
            let tight = region.rows().iter().filter(|r| (r.lhs(v.as_slice()) - r.rhs).abs() <= 1e-7).count();
            prop_assert!(tight >= region.dim());
        }
    }
}

#[test]
fn every_row_kind_is_present_for_three_cells() {
    let region = tin_optimal_region(&optimal_profile(3, 1));
    for name in ["nonneg", "percell", "cyclic"] {
        assert!(region.rows().iter().any(|r| r.tag.name() == name));
    }
    let longest = region
        .rows()
        .iter()
        .filter_map(|r| match &r.tag {
            RowTag::Cyclic { sequence, .. } => Some(sequence.len()),
            _ => None,
        })
        .max();
    assert_eq!(longest, Some(3));
}

#[test]
fn coverage_slack_never_grows_when_grid_is_halved() {
    for (cells, seed) in [(1, 5), (2, 11), (2, 23)] {
        let p = optimal_profile(cells, seed);
        let floor = -1.5 * p.max_alpha();
        let coarse = region_cross_validation(&p, &GridSpec::new(floor, 4, true).unwrap()).unwrap();
        let fine = region_cross_validation(&p, &GridSpec::new(floor, 7, true).unwrap()).unwrap();
        assert_eq!(coarse.containment_violations, 0);
        assert_eq!(fine.containment_violations, 0);
        assert_eq!(coarse.vertices.len(), fine.vertices.len());
        for (c, f) in coarse.vertices.iter().zip(&fine.vertices) {
            assert_eq!(c.vertex, f.vertex);
            assert!(f.slack <= c.slack + 1e-12, "{:?} vs {:?}", f, c);
        }
        assert!(fine.max_slack <= coarse.max_slack + 1e-12);
    }
}

#[test]
fn finite_p_gaps_shrink_for_random_schemes() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for n in 0..40 {
        let p = random_profile(
            1 + n % 3,
            Interval::new(0.5, 3.0).unwrap(),
            Interval::new(0.0, 2.0).unwrap(),
            n as u64,
        )
        .unwrap();
        let order = random_order(p.cells(), &mut rng);
        // grid exponents only: every nonzero share is exactly representable
        let power = PowerAllocation::new(
            (0..p.dim())
                .map(|_| [0.0, -0.5, -1.0, f64::NEG_INFINITY][rand::Rng::gen_range(&mut rng, 0..4)])
                .collect(),
        )
        .unwrap();
        let r = finite_p_convergence(&p, &order, &power, &[1e6, 1e12], 0.5).unwrap();
        assert!(r.rows[1].max_gap <= r.rows[0].max_gap + 1e-12, "{r:?}");
    }
}

#[test]
fn finite_p_rates_are_order_sensitive() {
    let p = NetworkProfile::symmetric(1, [1.0, 2.0], 0.0).unwrap();
    let fp = FinitePConfig::new(1e6, vec![0.5, 0.5], None).unwrap();
    let natural = ibc_finite_p_rates(&p, &DecodingOrder::identity(1), &fp).unwrap();
    let swapped =
        ibc_finite_p_rates(&p, &DecodingOrder::new(vec![CellOrder::Swapped]), &fp).unwrap();
    assert_ne!(natural, swapped);
    assert!(natural.iter().chain(&swapped).all(|r| *r >= 0.0));
}
