#![allow(clippy::needless_range_loop, clippy::field_reassign_with_default)]

//! Acceptance suite: one test per criterion, each printing a PASS line with
//! its measured numbers. Run with
//!   cargo test -p avekit-cli --test acceptance -- --test-threads=1 --nocapture

use avekit::analysis::{
    certify_error, check_unique_all_rhs, check_unsolvable, condition_numbers, solution_bounds,
    TriState,
};
use avekit::core::linalg::inverse;
use avekit::core::mat;
use avekit::correction::{correct_both, Attainment};
use avekit::solvers::*;
use avekit::transforms::{ave_to_lcp, brute_force_bounded, gave_to_ave, GaveToAveMode};
use avekit::{AveProblem, Mat, SolverConfig, Status};
use avekit_cli::dispatch::{run_method, StartPoint};
use avekit_cli::gen::{gen_instance, GenKind};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::Instant;

fn fig1a() -> AveProblem {
    AveProblem::new(
        Mat::from_rows(&[vec![0.0, 0.0], vec![-1.0, -0.5]]),
        vec![-1.0, -1.0],
    )
    .unwrap()
}

fn fig1b() -> AveProblem {
    AveProblem::new(
        Mat::from_rows(&[vec![0.0, 1.0], vec![-2.0, 3.0]]),
        vec![-3.0, -6.0],
    )
    .unwrap()
}

fn example1() -> AveProblem {
    AveProblem::new(
        Mat::from_rows(&[vec![3.0, 1.0], vec![6.0, 5.0]]),
        vec![3.0, 10.0],
    )
    .unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_vec(r: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| r.random_range(-scale..scale)).collect()
}

#[test]
fn criterion_01_three_point_solution_set() {
    let p = fig1a();
    enumerate_solutions(&p, false, 20).unwrap(); // warm-up outside the clock
    let clock = Instant::now();
    let set = enumerate_solutions(&p, false, 20).unwrap();
    let elapsed = clock.elapsed();
    let points = set.points();
    assert_eq!(points.len(), 3);
    assert!(set.affine_pieces().is_empty());
    for want in [[1.0, 0.0], [-1.0, -4.0], [-1.0, 4.0 / 3.0]] {
        let hit = points.iter().find(|x| mat::dist_inf(x, &want) < 1e-10);
        let hit = hit.unwrap_or_else(|| panic!("missing point {want:?}"));
        assert!(p.residual_inf(hit) <= 1e-10);
    }
    assert!(elapsed.as_micros() < 1000, "took {elapsed:?}, budget 1 ms");
    println!(
        "ACCEPTANCE 01 (three isolated points, residuals <= 1e-10, {:?}): PASS",
        elapsed
    );
}

#[test]
fn criterion_02_point_plus_ray() {
    let p = fig1b();
    enumerate_solutions(&p, false, 20).unwrap();
    let clock = Instant::now();
    let set = enumerate_solutions(&p, false, 20).unwrap();
    let elapsed = clock.elapsed();
    let points = set.points();
    assert_eq!(points.len(), 1, "exactly one isolated point");
    assert!(mat::dist_inf(points[0], &[-1.0, -2.0]) < 1e-10);
    let affine = set.affine_pieces();
    assert_eq!(affine.len(), 1, "exactly one ray, no spurious pieces");
    let (_, ray) = affine[0];
    assert_eq!(ray.span, SpanKind::Ray);
    assert!(mat::dist_inf(&ray.base, &[3.0, 0.0]) < 1e-10);
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    assert!((ray.dirs[0][0] - inv_sqrt2).abs() < 1e-10);
    assert!((ray.dirs[0][1] - inv_sqrt2).abs() < 1e-10);
    assert!(elapsed.as_micros() < 1000, "took {elapsed:?}, budget 1 ms");
    println!(
        "ACCEPTANCE 02 (isolated point plus normalized ray, {:?}): PASS",
        elapsed
    );
}

#[test]
fn criterion_03_linearization_stall_and_escape() {
    let p = example1();
    let cfg = SolverConfig::default();
    let sla = solve_concave_sla(&p, &[0.0, 0.0], &cfg);
    assert_eq!(sla.status, Status::Stalled);
    assert!(
        mat::dist_inf(&sla.x, &[5.0 / 3.0, 0.0]) <= 1e-8,
        "stall point {:?}",
        sla.x
    );
    assert!(sla.residual_inf > 1e-3, "the stall point must not solve the system");

    let zh = solve_concave_zh(&p, &[0.0, 0.0], &cfg);
    assert_eq!(zh.status, Status::Converged);
    assert!(mat::dist_inf(&zh.x, &[1.0, 1.0]) <= 1e-9);
    println!("ACCEPTANCE 03 (stall at (5/3, 0), escape to (1, 1)): PASS");
}

#[test]
fn criterion_04_non_regular_counterexamples() {
    // first matrix: singular member [[-2, 2], [-2, 2]]
    let a1 = Mat::from_rows(&[vec![-1.0, 2.0], vec![-2.0, 1.0]]);
    let rep1 = check_unique_all_rhs(&a1, 20);
    assert_eq!(rep1.unique_for_all_b, TriState::No);
    let member1 = rep1
        .verdict("05_exact_regularity")
        .unwrap()
        .matrix_evidence()
        .unwrap()
        .clone();
    let want1 = Mat::from_rows(&[vec![-2.0, 2.0], vec![-2.0, 2.0]]);
    for i in 0..2 {
        for j in 0..2 {
            assert!((member1[(i, j)] - want1[(i, j)]).abs() <= 1e-12);
        }
    }
    // spectral radius of A^-1 is 1/sqrt(3): complex pair, modulus sqrt(det)
    let ai = inverse(&a1).unwrap();
    let tr = ai[(0, 0)] + ai[(1, 1)];
    let det = ai[(0, 0)] * ai[(1, 1)] - ai[(0, 1)] * ai[(1, 0)];
    let disc = tr * tr - 4.0 * det;
    assert!(disc < 0.0, "complex eigenvalue pair expected");
    let rho = det.sqrt();
    assert!((rho - 1.0 / 3.0f64.sqrt()).abs() <= 1e-9);

    // second matrix: eigenvalues 1.25 +- 0.9682...i yet still not regular;
    // singular member [[-1.5, 1.5], [-4, 4]]
    let a2 = Mat::from_rows(&[vec![-1.0, 1.5], vec![-4.0, 3.5]]);
    let tr2 = a2[(0, 0)] + a2[(1, 1)];
    let det2 = a2[(0, 0)] * a2[(1, 1)] - a2[(0, 1)] * a2[(1, 0)];
    let disc2 = tr2 * tr2 - 4.0 * det2;
    assert!(disc2 < 0.0);
    assert!((tr2 / 2.0 - 1.25).abs() <= 1e-12, "real part 1.25");
    assert!(((-disc2).sqrt() / 2.0 - 3.75f64.sqrt() / 2.0).abs() <= 1e-9);
    assert!((3.75f64.sqrt() / 2.0 - 0.9682).abs() < 1e-4); // printed rounding
    let rep2 = check_unique_all_rhs(&a2, 20);
    assert_eq!(rep2.unique_for_all_b, TriState::No);
    let member2 = rep2
        .verdict("05_exact_regularity")
        .unwrap()
        .matrix_evidence()
        .unwrap()
        .clone();
    let want2 = Mat::from_rows(&[vec![-1.5, 1.5], vec![-4.0, 4.0]]);
    for i in 0..2 {
        for j in 0..2 {
            assert!(
                (member2[(i, j)] - want2[(i, j)]).abs() <= 1e-12,
                "member {member2:?}"
            );
        }
    }
    println!("ACCEPTANCE 04 (counterexample certificates match entrywise): PASS");
}

#[test]
fn criterion_05_oracle_equivalence_suite() {
    let clock = Instant::now();
    let methods = [
        "newton",
        "newton-mod",
        "newton-relaxed",
        "newton-inexact",
        "picard",
        "picard-omega",
        "picard-hss",
        "sor",
        "splitting",
        "ggs",
        "pggs",
        "sla",
        "hybrid",
        "zh",
        "sign-accord",
        "auto",
    ];
    let kinds = [
        GenKind::Uniform,
        GenKind::SigmaGt1,
        GenKind::RhoInvLt1,
        GenKind::DiagDom,
        GenKind::Exp2n,
    ];
    let cfg = SolverConfig::default();
    let params = BTreeMap::new();
    let mut converged = 0usize;
    let mut violations = 0usize;
    for idx in 0..500usize {
        let n = 2 + (idx % 7); // n in 2..=8
        let kind = kinds[idx % kinds.len()];
        let bundle = gen_instance(kind, n, idx as u64, &params).unwrap();
        let p = bundle.to_ave().unwrap();
        let set = enumerate_solutions(&p, false, 20).unwrap();
        for m in methods {
            let out = run_method(m, &p, None, &StartPoint::Zero, &cfg, &params).unwrap();
            if out.status == Status::Converged {
                converged += 1;
                if !set.contains(&out.x, 1e-7) {
                    violations += 1;
                    eprintln!(
                        "violation: {m} on {} idx {idx}: dist {}",
                        kind.as_str(),
                        set.distance_inf(&out.x)
                    );
                }
            }
        }
    }
    let elapsed = clock.elapsed();
    assert_eq!(violations, 0);
    assert!(converged > 2000, "converged runs: {converged}");
    assert!(elapsed.as_secs() < 60, "took {elapsed:?}, budget 60 s");
    println!(
        "ACCEPTANCE 05 (500 instances, {converged} converged runs, 0 violations, {:?}): PASS",
        elapsed
    );
}

#[test]
fn criterion_06_bounds_and_soundness_suite() {
    let mut r = rng(600);
    let mut bounded_checked = 0usize;
    let mut unsolvable_checked = 0usize;
    for idx in 0..200usize {
        let n = 2 + (idx % 9); // n <= 10
        // random contraction: rho(|A|) < 1
        let p = loop {
            let raw = Mat::from_vec(n, n, random_vec(&mut r, n * n, 1.0));
            let rho = avekit::core::linalg::spectral_radius_nonneg(&raw.abs());
            if let Ok(rho) = rho {
                if rho > 1e-9 {
                    let a = raw.scale(r.random_range(0.3..0.95) / rho);
                    break AveProblem::new(a, random_vec(&mut r, n, 1.0)).unwrap();
                }
            }
        };
        let bounds = solution_bounds(&p).unwrap();
        let set = enumerate_solutions(&p, false, 20).unwrap();
        for x in set.points() {
            bounded_checked += 1;
            for i in 0..n {
                assert!(x[i].abs() <= bounds.u[i] + 1e-9, "box violated at idx {idx}");
            }
        }
        let rep = check_unsolvable(&p);
        if rep.any_holds() {
            unsolvable_checked += 1;
            assert!(set.is_empty(), "idx {idx}: unsolvable certificate vs nonempty set");
        }
    }
    // the uniqueness leg needs regular instances (a contraction never is:
    // the Perron direction u of |A| gives |Au| <= |A|u < u, a nontrivial
    // witness), so certified-regular instances are generated separately
    let mut unique_checked = 0usize;
    for idx in 0..50usize {
        let n = 2 + (idx % 9);
        let bundle = gen_instance(GenKind::SigmaGt1, n, 4242 + idx as u64, &BTreeMap::new())
            .unwrap();
        let p = bundle.to_ave().unwrap();
        let rep = check_unique_all_rhs(&p.a, 20);
        if rep.unique_for_all_b != TriState::Yes {
            continue;
        }
        unique_checked += 1;
        for _ in 0..20 {
            let b = random_vec(&mut r, n, 2.0);
            let q = AveProblem::new(p.a.clone(), b).unwrap();
            let set = enumerate_solutions(&q, false, 20).unwrap();
            assert_eq!(set.points().len(), 1);
            assert!(set.affine_pieces().is_empty());
        }
    }
    assert!(bounded_checked >= 50, "box checks: {bounded_checked}");
    assert!(unsolvable_checked >= 30, "unsolvable checks: {unsolvable_checked}");
    assert!(unique_checked >= 40, "uniqueness checks: {unique_checked}");
    println!(
        "ACCEPTANCE 06 (boxes x{bounded_checked}, empty-set certificates x{unsolvable_checked}, unique instances x{unique_checked}): PASS"
    );
}

#[test]
fn criterion_07_hybrid_success_rate() {
    let clock = Instant::now();
    let mut cfg = SolverConfig::default();
    cfg.tol = 1e-8;
    let params = BTreeMap::new();
    let mut success = 0usize;
    let mut total = 0usize;
    let sizes: Vec<usize> = std::iter::repeat_n(50, 40)
        .chain(std::iter::repeat_n(100, 40))
        .chain(std::iter::repeat_n(200, 20))
        .collect();
    for (idx, &n) in sizes.iter().enumerate() {
        let bundle = gen_instance(GenKind::SigmaGt1, n, idx as u64, &params).unwrap();
        let p = bundle.to_ave().unwrap();
        let out = solve_concave_hybrid(&p, &vec![0.0; n], 20, &cfg);
        total += 1;
        if out.status == Status::Converged
            && out.residual_inf <= 1e-8 * (1.0 + mat::norm_inf(&p.b))
        {
            success += 1;
        }
    }
    let elapsed = clock.elapsed();
    let rate = success as f64 / total as f64;
    assert!(rate >= 0.95, "hybrid success rate {rate}");
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}, budget 5 min");
    println!(
        "ACCEPTANCE 07 (hybrid success {success}/{total} on n in {{50, 100, 200}}, {:?}): PASS",
        elapsed
    );
}

#[test]
fn criterion_08_sign_accord_flip_counts() {
    let n = 100usize;
    let cfg = SolverConfig::default();
    let params = BTreeMap::new();
    let mut flips_total = 0usize;
    for seed in 0..50u64 {
        let bundle = gen_instance(GenKind::SigmaGt1, n, 7000 + seed, &params).unwrap();
        let p = bundle.to_ave().unwrap();
        let out = solve_sign_accord_ave(&p, &cfg);
        assert_eq!(out.status, Status::Converged, "seed {seed}");
        assert!(out.residual_inf <= 1e-9, "seed {seed}: residual {}", out.residual_inf);
        flips_total += out.iterations;
    }
    let mean_flips = flips_total as f64 / 50.0;
    assert!(
        mean_flips <= 0.5 * n as f64,
        "mean flip count {mean_flips} exceeds 0.5 n"
    );
    println!(
        "ACCEPTANCE 08 (sign accord on n = 100: mean flips {mean_flips:.2} <= 50, all converged): PASS"
    );
}

#[test]
fn criterion_09_transform_round_trips() {
    let mut r = rng(900);
    let mut lcp_trips = 0usize;
    let mut block_trips = 0usize;
    for idx in 0..100usize {
        let n = 2 + (idx % 5); // n <= 6
        let a = loop {
            let raw = Mat::from_vec(n, n, random_vec(&mut r, n * n, 1.0));
            let (smin, _) = avekit::core::linalg::extreme_singular_values(&raw);
            if smin > 1e-6 {
                break raw.scale(1.3 / smin);
            }
        };
        let p = AveProblem::new(a, random_vec(&mut r, n, 1.0)).unwrap();
        let set = enumerate_solutions(&p, false, 20).unwrap();

        // complementarity round trip
        if let Ok(fwd) = ave_to_lcp(&p) {
            if let Ok(back) = avekit::transforms::lcp_to_ave(&fwd.lcp) {
                let set_back = enumerate_solutions(&back.ave, false, 20).unwrap();
                assert_eq!(set.points().len(), set_back.points().len(), "idx {idx}");
                for x in set.points() {
                    let (w, z) = fwd.wz_from_x(x);
                    assert!(set_back.contains(&back.x_from(&w, &z), 1e-7), "idx {idx}");
                }
                for y in set_back.points() {
                    let (w, z) = back.wz_from_x(y);
                    assert!(set.contains(&fwd.x_from(&w, &z), 1e-7), "idx {idx}");
                }
                lcp_trips += 1;
            }
        }

        // block embedding round trip
        let red = gave_to_ave(&p.to_gave(), GaveToAveMode::Block3n).unwrap();
        if 3 * n <= 20 {
            let set3 = enumerate_solutions(&red.ave, false, 20).unwrap();
            assert_eq!(set3.points().len(), set.points().len(), "idx {idx}");
            for w in set3.points() {
                assert!(set.contains(&red.x_from(w), 1e-7), "idx {idx}");
            }
            block_trips += 1;
        }
    }
    assert!(lcp_trips >= 90, "complementarity trips: {lcp_trips}");
    assert!(block_trips >= 90, "block trips: {block_trips}");

    // mixed 0-1 brute force against the oracle on the reference fixtures
    let p = fig1a();
    let bounds = solution_bounds(&p).unwrap();
    let lower = mat::vec_scale(&bounds.u, -1.0);
    let found = brute_force_bounded(&p, &lower, &bounds.u, 20).unwrap();
    let set = enumerate_solutions(&p, false, 20).unwrap();
    assert_eq!(found.len(), 3);
    for x in &found {
        assert!(set.contains(x, 1e-7));
    }
    let p = example1();
    // no automatic box here (rho(|A|) >= 1); any box containing the unique
    // solution is valid
    assert!(solution_bounds(&p).is_err());
    let found = brute_force_bounded(&p, &[-5.0, -5.0], &[5.0, 5.0], 20).unwrap();
    assert_eq!(found.len(), 1);
    assert!(mat::dist_inf(&found[0], &[1.0, 1.0]) < 1e-8);
    println!(
        "ACCEPTANCE 09 (complementarity x{lcp_trips}, block x{block_trips}, mixed 0-1 fixtures): PASS"
    );
}

#[test]
fn criterion_10_correction_identities() {
    let cfg = SolverConfig::default();
    let params = BTreeMap::new();
    for idx in 0..50usize {
        let n = 2 + (idx % 5); // n <= 6
        let bundle = gen_instance(GenKind::Infeasible, n, 1000 + idx as u64, &params).unwrap();
        let p = bundle.to_ave().unwrap();
        let res = correct_both(&p, &cfg);
        let fro2 = res.r_mat.norm_frobenius().powi(2) + mat::dot(&res.r_vec, &res.r_vec);
        assert!(
            (fro2 - res.objective).abs() <= 1e-8 * res.objective.max(1e-30),
            "idx {idx}: Frobenius identity off: {fro2} vs {}",
            res.objective
        );
        let ax = res.corrected_a.matvec(&res.x_star);
        let feas: Vec<f64> = (0..n)
            .map(|i| ax[i] - res.x_star[i].abs() - res.corrected_b[i])
            .collect();
        assert!(mat::norm_inf(&feas) <= 1e-8, "idx {idx}: corrected system infeasible");
    }

    // scalar fixtures to three significant digits
    let p = AveProblem::new(Mat::zeros(1, 1), vec![1.0]).unwrap();
    let res = correct_both(&p, &cfg);
    assert_eq!(res.attained, Attainment::Yes);
    assert!((res.objective - 1.0).abs() < 1e-3);
    assert!(res.x_star[0].abs() < 1e-6);

    let p = AveProblem::new(Mat::from_rows(&[vec![0.3]]), vec![1.0]).unwrap();
    let res = correct_both(&p, &cfg);
    assert_eq!(res.attained, Attainment::SuspectedNotAttained);
    assert!((res.objective - 0.49).abs() < 0.49 * 1e-3, "{}", res.objective);
    println!("ACCEPTANCE 10 (correction identities on 50 infeasible instances + scalar fixtures): PASS");
}

#[test]
fn criterion_11_condition_number_bound() {
    let mut r = rng(1100);
    let params = BTreeMap::new();
    let mut instances = 0usize;
    for idx in 0..100usize {
        let n = 2 + (idx % 7); // n <= 8
        let bundle = gen_instance(GenKind::SigmaGt1, n, 2000 + idx as u64, &params).unwrap();
        let p = bundle.to_ave().unwrap();
        let cond = condition_numbers(&p.a, 2, 20).unwrap();
        if !cond.c.is_finite() {
            continue;
        }
        let set = enumerate_solutions(&p, false, 20).unwrap();
        let points = set.points();
        if points.len() != 1 {
            continue;
        }
        let x_star = points[0].clone();
        instances += 1;
        for _ in 0..100 {
            let x = mat::vec_add(&x_star, &random_vec(&mut r, n, 1.0));
            let cert = certify_error(&p, &x, &cond).unwrap();
            let true_err = mat::norm_two(&mat::vec_sub(&x, &x_star));
            assert!(
                cert.absolute >= true_err - 1e-9,
                "idx {idx}: bound {} < error {}",
                cert.absolute,
                true_err
            );
        }
    }
    assert_eq!(instances, 100, "every generated instance must participate");
    println!("ACCEPTANCE 11 (condition-number bound, 100 instances x 100 perturbations, 0 violations): PASS");
}

#[test]
fn criterion_12_bench_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let suite = dir.path().join("suite.json");
    std::fs::write(
        &suite,
        r#"{
  "generators": [
    {"kind": "sigma_gt1", "sizes": [4, 6], "seeds": [1, 2, 3]},
    {"kind": "infeasible", "sizes": [3], "seeds": [9]}
  ],
  "solvers": [
    {"method": "newton"},
    {"method": "picard"},
    {"method": "hybrid", "params": {"itmax": 15}}
  ]
}"#,
    )
    .unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    for (out, jobs) in [(&csv_a, "1"), (&csv_b, "3")] {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_avekit"))
            .args([
                "bench",
                "--suite",
                suite.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--jobs",
                jobs,
            ])
            .stdout(std::process::Stdio::null())
            .status()
            .unwrap();
        assert!(status.success());
    }
    let strip_timing = |text: &str| -> String {
        text.lines()
            .map(|line| {
                // drop the final wall_time_ms column
                match line.rfind(',') {
                    Some(pos) => &line[..pos],
                    None => line,
                }
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = strip_timing(&std::fs::read_to_string(&csv_a).unwrap());
    let b = strip_timing(&std::fs::read_to_string(&csv_b).unwrap());
    assert_eq!(a, b, "CSV outputs differ beyond the timing column");
    assert!(a.lines().count() > 1);
    println!("ACCEPTANCE 12 (byte-identical CSV modulo timing across runs and job counts): PASS");
}
