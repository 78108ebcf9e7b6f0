//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! `cargo test -p tin-gdof --test acceptance` runs everything; extra
//! arguments (`-- 3 7`) select criteria by number.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tin_gdof::ext::pos;
use tin_gdof::region::{expected_row_count, RowTag};
use tin_gdof::verify::random::{dyadic_power, dyadic_profile, random_order, random_power};
use tin_gdof::verify::{
    duality_certificate, finite_p_convergence, lemma1_random_search, region_cross_validation,
    sample_tin_region, Direction, GridSpec, Side,
};
use tin_gdof::{
    beta_exponents, check_tin_optimality, enumerate_cyclic_sequences, extreme_points,
    gamma_exponents, ibc_gdof_bounds, imac_gdof_bounds, normalize_imac_power, random_profile,
    tin_optimal_region, DecodingOrder, Interval, NetworkProfile, PowerAllocation, Verdict,
};

const SEED: u64 = 20_180_601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn e1() -> NetworkProfile {
    NetworkProfile::symmetric(2, [1.0, 2.0], 0.5).unwrap()
}

fn ac1_duality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let draws = 10_000;
    let mut worst = f64::NEG_INFINITY;
    let mut over = 0;
    for n in 0..draws {
        let cells = 1 + n % 4;
        let profile = random_profile(
            cells,
            Interval::new(0.0, 3.0).unwrap(),
            Interval::new(0.0, 3.0).unwrap(),
            rng.gen(),
        )
        .unwrap();
        let order = random_order(cells, &mut rng);
        let power = random_power(cells, 4.5, &mut rng);
        for direction in [Direction::IbcToImac, Direction::ImacToIbc] {
            let report = duality_certificate(&profile, &order, &power, direction).unwrap();
            worst = worst.max(report.deficit);
            if report.deficit > 1e-9 {
                over += 1;
            }
        }
    }
    outcome(
        over == 0,
        format!("{draws} draws x 2 directions, worst deficit {worst:.3e}, {over} above 1e-9"),
    )
}

fn ac2_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let draws = 10_000;
    let mut mismatches = 0;
    for n in 0..draws {
        let cells = 1 + n % 4;
        let profile = dyadic_profile(cells, 3.0, &mut rng);
        let order = random_order(cells, &mut rng);
        let power = dyadic_power(cells, 4.0, &mut rng);

        let ibc = ibc_gdof_bounds(&profile, &order, &power).unwrap();
        let beta = beta_exponents(&profile, &order, &power).unwrap();
        let via_beta: Vec<f64> = power
            .as_slice()
            .iter()
            .zip(beta.as_slice())
            .map(|(r, b)| pos(r + b))
            .collect();

        let imac = imac_gdof_bounds(&profile, &order, &power).unwrap();
        let gamma = gamma_exponents(&profile, &order, &power).unwrap();
        let via_gamma: Vec<f64> = (0..cells)
            .flat_map(|k| (0..2).map(move |l| (k, l)))
            .map(|(k, l)| pos(profile.direct(k, l) + power.get(k, l) - gamma.get(k, l)))
            .collect();

        if ibc.as_slice() != via_beta.as_slice() || imac.as_slice() != via_gamma.as_slice() {
            mismatches += 1;
        }
    }
    outcome(
        mismatches == 0,
        format!("{draws} lattice draws, {mismatches} inexact"),
    )
}

fn ac3_cross_validation() -> Outcome {
    let mut profiles = vec![e1()];
    let mut seed = SEED + 3;
    let mut rejected = 0;
    while profiles.len() < 51 {
        let cells = if profiles.len() % 2 == 1 { 2 } else { 3 };
        let cross_hi = if cells == 2 { 0.6 } else { 0.5 };
        let p = random_profile(
            cells,
            Interval::new(1.0, 3.0).unwrap(),
            Interval::new(0.0, cross_hi).unwrap(),
            seed,
        )
        .unwrap();
        seed += 1;
        if check_tin_optimality(&p).verdict == Verdict::Optimal {
            profiles.push(p);
        } else {
            rejected += 1;
        }
    }
    let mut violations = 0;
    let mut failed = 0;
    let mut worst_ratio = 0.0f64;
    let mut samples = 0u64;
    for p in &profiles {
        let grid = GridSpec::default_for(p);
        let report = region_cross_validation(p, &grid).unwrap();
        samples += report.samples;
        violations += report.containment_violations;
        worst_ratio = worst_ratio.max(report.max_slack / report.eps_cov);
        if !report.passed {
            failed += 1;
        }
    }
    outcome(
        failed == 0,
        format!(
            "{} profiles ({rejected} draws rejected), {samples} samples, {violations} outside, worst slack/eps_cov {worst_ratio:.3}",
            profiles.len()
        ),
    )
}

fn ac4_single_cell() -> Outcome {
    let p = NetworkProfile::symmetric(1, [1.0, 2.0], 0.0).unwrap();
    let region = tin_optimal_region(&p);
    let mut rows: Vec<(Vec<f64>, f64, &str)> = region
        .rows()
        .iter()
        .map(|r| (r.coeffs.clone(), r.rhs, r.tag.name()))
        .collect();
    rows.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut want = vec![
        (vec![-1.0, 0.0], 0.0, "nonneg"),
        (vec![0.0, -1.0], 0.0, "nonneg"),
        (vec![1.0, 0.0], 1.0, "percell"),
        (vec![1.0, 1.0], 2.0, "percell"),
    ];
    want.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let rows_ok = rows == want
        && region
            .rows()
            .iter()
            .all(|r| !matches!(r.tag, RowTag::Cyclic { .. }));

    let verts: Vec<Vec<f64>> = extreme_points(&region)
        .unwrap()
        .iter()
        .map(|v| v.as_slice().to_vec())
        .collect();
    let want_verts = vec![
        vec![0.0, 0.0],
        vec![0.0, 2.0],
        vec![1.0, 0.0],
        vec![1.0, 1.0],
    ];
    let verts_ok = verts == want_verts;

    let grid = GridSpec::new(-2.0, 3, true).unwrap();
    let samples = sample_tin_region(&p, Side::Ibc, &grid).unwrap();
    let hit_all = want_verts
        .iter()
        .all(|v| samples.iter().any(|s| s.bounds.as_slice() == v.as_slice()));
    outcome(
        rows_ok && verts_ok && hit_all,
        format!("rows exact: {rows_ok}, vertices {verts:?}, all sampled exactly: {hit_all}"),
    )
}

fn ac5_counts() -> Outcome {
    let counts: Vec<usize> = (2..=4)
        .map(|k| enumerate_cyclic_sequences(k).len())
        .collect();
    let formula_ok = (1..=5).all(|k| {
        let p = NetworkProfile::symmetric(k, [1.0, 2.0], 0.25).unwrap();
        tin_optimal_region(&p).rows().len() as u128 == expected_row_count(k)
    });
    outcome(
        counts == [1, 5, 20] && formula_ok,
        format!("cyclic sequences for K=2,3,4: {counts:?}; row formula K<=5: {formula_ok}"),
    )
}

fn ac6_lemma1() -> Outcome {
    let r = lemma1_random_search(100_000, SEED + 6);
    outcome(
        r.passed && r.max_gap <= 1.0 + 1e-12,
        format!(
            "max gap {:.6} bits (boundary families {:.6})",
            r.max_gap, r.boundary_max_gap
        ),
    )
}

fn ac7_convergence() -> Outcome {
    let p = e1();
    let order = DecodingOrder::identity(2);
    let power = PowerAllocation::full(2);
    let r = finite_p_convergence(&p, &order, &power, &[1e6, 1e12], 0.05).unwrap();
    let bounds_ok = r.bounds.as_slice() == [0.0, 1.5, 0.0, 1.5];
    let (lo, hi) = (&r.rows[0], &r.rows[1]);
    let per_ue = (0..4).all(|u| hi.gaps[u] < 0.05 && hi.gaps[u] < lo.gaps[u]);
    outcome(
        bounds_ok && per_ue,
        format!("gaps at 1e6 {:.4?}, at 1e12 {:.4?}", lo.gaps, hi.gaps),
    )
}

fn ac8_normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let mut checked = 0;
    let mut worst = f64::NEG_INFINITY;
    while checked < 1000 {
        let cells = 1 + rng.gen_range(0..3);
        let profile = random_profile(
            cells,
            Interval::new(0.0, 3.0).unwrap(),
            Interval::new(0.0, 2.0).unwrap(),
            rng.gen(),
        )
        .unwrap();
        let order = random_order(cells, &mut rng);
        let power = random_power(cells, 4.5, &mut rng);
        if tin_gdof::tin::imac_order_satisfied(&profile, &order, &power).unwrap() {
            continue;
        }
        let before = imac_gdof_bounds(&profile, &order, &power).unwrap();
        let (o2, p2) = normalize_imac_power(&profile, &order, &power).unwrap();
        let after = imac_gdof_bounds(&profile, &o2, &p2).unwrap();
        worst = worst.max(before.max_excess_over(&after));
        checked += 1;
    }
    outcome(
        worst <= 1e-9,
        format!("{checked} violating inputs, worst shortfall {worst:.3e}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("duality certificates", ac1_duality),
        ("reformulation identities", ac2_identities),
        ("region cross-validation", ac3_cross_validation),
        ("single-cell ground truth", ac4_single_cell),
        ("cyclic enumeration counts", ac5_counts),
        ("Gaussian gap bound", ac6_lemma1),
        ("finite-P convergence", ac7_convergence),
        ("order-swap normalization", ac8_normalization),
    ];
    let selected: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut all_passed = true;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let id = n + 1;
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let Outcome { passed, detail } = run();
        all_passed &= passed;
        println!(
            "AC{id} {} {name}: {detail} ({:.1}s)",
            if passed { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
