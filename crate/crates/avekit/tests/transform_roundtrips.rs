//! Transform round-trips against the enumeration oracle: complementarity
//! reductions preserve solution sets both ways, the block embedding projects
//! bijectively, the mixed 0-1 brute force reproduces the oracle, hull
//! vertices enclose sampled member solutions, and Kronecker vectorization
//! commutes with the absolute value.

mod common;

use avekit::core::lp::{solve_lp, LinearProgram, LpStatus, RowKind};
use avekit::core::mat;
use avekit::solvers::enumerate_solutions;
use avekit::transforms::*;
use avekit::{AveProblem, GaveProblem, Mat};
#[allow(unused_imports)]
use avekit::Status;
use rand::Rng;

#[test]
fn ave_to_lcp_transports_solutions_both_ways() {
    let mut r = common::rng(30);
    let mut checked = 0usize;
    for trial in 0..40 {
        let n = 2 + (trial % 5); // n <= 6
        let p = common::sigma_gt1_instance(&mut r, n, 0.3);
        let Ok(red) = ave_to_lcp(&p) else { continue };
        let set = enumerate_solutions(&p, false, 20).unwrap();
        for x in set.points() {
            let (w, z) = red.wz_from_x(x);
            assert!(
                red.lcp.violation(&w, &z) < 1e-7,
                "trial {trial}: complementary pair violated"
            );
            let back = red.x_from(&w, &z);
            assert!(mat::dist_inf(&back, x) < 1e-9);
            checked += 1;
        }
    }
    assert!(checked >= 30);
}

#[test]
fn lcp_round_trip_preserves_solution_sets() {
    let mut r = common::rng(31);
    for trial in 0..30 {
        let n = 2 + (trial % 5);
        let p = common::sigma_gt1_instance(&mut r, n, 0.3);
        let Ok(fwd) = ave_to_lcp(&p) else { continue };
        let Ok(back) = lcp_to_ave(&fwd.lcp) else { continue };
        let set_a = enumerate_solutions(&p, false, 20).unwrap();
        let set_b = enumerate_solutions(&back.ave, false, 20).unwrap();
        // the two systems share solutions through the w/z correspondence
        assert_eq!(set_a.points().len(), set_b.points().len(), "trial {trial}");
        for x in set_a.points() {
            let (w, z) = fwd.wz_from_x(x);
            let y = back.x_from(&w, &z);
            assert!(
                set_b.contains(&y, 1e-7),
                "trial {trial}: transported point missing"
            );
        }
        for y in set_b.points() {
            let (w, z) = back.wz_from_x(y);
            let x = fwd.x_from(&w, &z);
            assert!(set_a.contains(&x, 1e-7), "trial {trial}: reverse transport");
        }
    }
}

#[test]
fn block_reduction_projects_bijectively() {
    let mut r = common::rng(32);
    for trial in 0..20 {
        let n = 2;
        let p = common::sigma_gt1_instance(&mut r, n, 0.4);
        let g = p.to_gave();
        let red = gave_to_ave(&g, GaveToAveMode::Block3n).unwrap();
        let set6 = enumerate_solutions(&red.ave, false, 20).unwrap();
        let set2 = enumerate_solutions(&p, false, 20).unwrap();
        assert_eq!(set6.points().len(), set2.points().len(), "trial {trial}");
        for w in set6.points() {
            let x = red.x_from(w);
            assert!(set2.contains(&x, 1e-7));
        }
        for x in set2.points() {
            let w = red.embed(x);
            assert!(red.ave.residual_inf(&w) < 1e-9);
        }
    }
}

#[test]
fn milp_brute_force_equals_enumeration_on_contractions() {
    let mut r = common::rng(33);
    let mut nonempty = 0usize;
    for trial in 0..30 {
        let n = 2 + (trial % 4);
        let mut p = common::contraction_instance(&mut r, n);
        if trial % 2 == 0 {
            // negative right-hand sides favour solvable contraction systems
            p = AveProblem::new(p.a.clone(), p.b.iter().map(|v| -v.abs() - 0.1).collect())
                .unwrap();
        }
        let Ok(bounds) = avekit::analysis::solution_bounds(&p) else {
            continue;
        };
        if bounds.empty {
            continue;
        }
        let lower = mat::vec_scale(&bounds.u, -1.0);
        let found = brute_force_bounded(&p, &lower, &bounds.u, 20).unwrap();
        let set = enumerate_solutions(&p, false, 20).unwrap();
        assert_eq!(found.len(), set.points().len(), "trial {trial}");
        for x in &found {
            assert!(set.contains(x, 1e-7));
        }
        nonempty += (!found.is_empty()) as usize;
    }
    assert!(nonempty >= 10);
}

#[test]
fn kron_vectorization_commutes_with_abs() {
    let mut r = common::rng(34);
    for _ in 0..20 {
        let x = common::random_matrix(&mut r, 3, 5.0);
        assert_eq!(x.abs().vec_cols(), mat::vec_abs(&x.vec_cols()));
    }
}

#[test]
fn sylvester_reduction_solves_and_reshapes() {
    // AXB + C|X|D = E with B = D = I and diagonally dominant A
    let a = Mat::from_rows(&[vec![4.0, 1.0], vec![0.0, 5.0]]);
    let c = Mat::identity(2).scale(-1.0);
    let x_true = Mat::from_rows(&[vec![1.0, -2.0], vec![0.5, 1.5]]);
    // E = A X + C |X|
    let e = a.matmul(&x_true).add(&c.matmul(&x_true.abs()));
    let red = sylvester_to_gave(&a, &Mat::identity(2), &c, &Mat::identity(2), &e).unwrap();
    // solve through the sign accord algorithm on the 4x4 system
    let out = avekit::solvers::solve_sign_accord(&red.gave, &Default::default());
    assert_eq!(out.status, avekit::Status::Converged);
    let x_mat = red.unvec(&out.x);
    let resid = a
        .matmul(&x_mat)
        .add(&c.matmul(&x_mat.abs()))
        .sub(&e)
        .max_abs();
    assert!(resid < 1e-9);
}

#[test]
fn hull_vertices_enclose_sampled_member_solutions() {
    let mut r = common::rng(35);
    let ai = IntervalMatrix::new(
        Mat::from_rows(&[vec![3.0, 1.0], vec![6.0, 5.0]]),
        Mat::from_rows(&[vec![0.05, 0.05], vec![0.05, 0.05]]),
    )
    .unwrap();
    let bi = IntervalVector::new(vec![3.0, 10.0], vec![0.1, 0.1]).unwrap();
    let verts = interval_hull_vertices(&ai, &bi, 20).unwrap();
    assert_eq!(verts.len(), 4);

    // 500 random member systems: every solution must lie in conv(vertices)
    for _ in 0..500 {
        let mut a = ai.center.clone();
        for i in 0..2 {
            for j in 0..2 {
                a[(i, j)] += r.random_range(-1.0..1.0) * ai.radius[(i, j)];
            }
        }
        let b: Vec<f64> = (0..2)
            .map(|i| bi.center[i] + r.random_range(-1.0..1.0) * bi.radius[i])
            .collect();
        let x = avekit::core::linalg::lu_solve(&a, &b).unwrap();
        // membership in the convex hull via a tiny feasibility LP over the
        // vertex weights
        let k = verts.len();
        let mut lp = LinearProgram::new(k);
        for j in 0..k {
            lp.nonneg[j] = true;
        }
        lp.push_row(&vec![1.0; k], RowKind::Eq, 1.0);
        for dim in 0..2 {
            let row: Vec<f64> = verts.iter().map(|(_, v)| v[dim]).collect();
            lp.push_row(&row, RowKind::Eq, x[dim]);
        }
        let sol = solve_lp(&lp);
        assert_eq!(
            sol.status,
            LpStatus::Optimal,
            "sample outside the vertex hull: {x:?}"
        );
    }
}

#[test]
fn alternatives_witness_is_machine_checkable() {
    let mut r = common::rng(36);
    for trial in 0..25 {
        let n = 2 + (trial % 3);
        let a = common::random_matrix(&mut r, n, 1.5);
        let d = Mat::identity(n);
        match theorem_of_alternatives(&a, &d, 20).unwrap() {
            Alternatives::UniqueForAll { .. } => {
                // cross-check with the one-parameter family test (B = I)
                let rep = avekit::analysis::check_unique_all_rhs(&a, 20);
                assert_eq!(rep.unique_for_all_b, avekit::analysis::TriState::Yes);
            }
            Alternatives::NontrivialWitness { x, .. } => {
                assert!(mat::norm_two(&x) > 1e-6);
                let ax = a.matvec(&x);
                let dax = d.matvec(&mat::vec_abs(&x));
                for i in 0..n {
                    assert!(ax[i].abs() <= dax[i] + 1e-9, "trial {trial}");
                }
            }
        }
    }
}

#[test]
fn gerlach_membership_on_reference_solutions() {
    let p = AveProblem::new(
        Mat::from_rows(&[vec![0.0, 0.0], vec![-1.0, -0.5]]),
        vec![-1.0, -1.0],
    )
    .unwrap();
    for x in [[1.0, 0.0], [-1.0, -4.0], [-1.0, 4.0 / 3.0]] {
        assert!(ave_membership(&p, &x));
    }
    assert!(!ave_membership(&p, &[0.3, 0.3]));

    // weak membership of x = 0 holds whenever the upper bound is >= 0
    let ai = IntervalMatrix::new(Mat::identity(2), Mat::identity(2)).unwrap();
    let bi = IntervalVector::exact(vec![0.5, 0.0]);
    let (weak, _) = weak_strong_membership(&ai, &bi, &[0.0, 0.0]);
    assert!(weak);
}

#[test]
fn gave_uniqueness_through_3n_block_matches_direct_test() {
    // the reduction is solution-preserving, so unique solvability of the
    // original system shows up as a single projected point
    let g = GaveProblem::new(
        Mat::from_rows(&[vec![4.0, 1.0], vec![-1.0, 5.0]]),
        Mat::from_rows(&[vec![0.5, 0.0], vec![0.2, 0.4]]),
        vec![1.0, -2.0],
    )
    .unwrap();
    let rep = avekit::analysis::check_unique_all_rhs_gave(&g.a, &g.b, 20);
    assert_eq!(rep.unique_for_all_b, avekit::analysis::TriState::Yes);
    let red = gave_to_ave(&g, GaveToAveMode::Block3n).unwrap();
    let set = enumerate_solutions(&red.ave, false, 20).unwrap();
    assert_eq!(set.points().len(), 1);
    assert!(g.residual_inf(&red.x_from(set.points()[0])) < 1e-8);
}
