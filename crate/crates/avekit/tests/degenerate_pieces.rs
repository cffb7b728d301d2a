//! Solution sets with higher-dimensional pieces: a segment clipped by its
//! orthant on both sides, and a full-dimensional cone of solutions.

use avekit::core::mat;
use avekit::correction::{min_norm_solution, sparse_solution, MinNormKind};
use avekit::solvers::{enumerate_solutions, SpanKind};
use avekit::{AveProblem, Mat};

/// In the positive orthant the system reduces to x1 + x2 = 1: the solutions
/// there form the segment from (1, 0) to (0, 1); the boundary points also
/// solve the neighbouring orthant systems and must be absorbed.
fn segment_instance() -> AveProblem {
    AveProblem::new(
        Mat::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]),
        vec![1.0, 1.0],
    )
    .unwrap()
}

#[test]
fn segment_piece_is_reported_once_with_exact_extent() {
    let p = segment_instance();
    let set = enumerate_solutions(&p, false, 20).unwrap();
    assert!(set.points().is_empty(), "endpoints belong to the segment");
    let affine = set.affine_pieces();
    assert_eq!(affine.len(), 1);
    let (_, seg) = affine[0];
    match seg.span {
        SpanKind::Segment(len) => assert!((len - 2.0f64.sqrt()).abs() < 1e-9),
        other => panic!("expected a segment, got {other:?}"),
    }
    // endpoints (1, 0) and (0, 1)
    let end = mat::vec_add(
        &seg.base,
        &mat::vec_scale(&seg.dirs[0], 2.0f64.sqrt()),
    );
    let mut endpoints = [seg.base.clone(), end];
    endpoints.sort_by(|a, b| a[0].partial_cmp(&b[0]).unwrap());
    assert!(mat::dist_inf(&endpoints[0], &[0.0, 1.0]) < 1e-9);
    assert!(mat::dist_inf(&endpoints[1], &[1.0, 0.0]) < 1e-9);
    // membership along and off the segment
    assert!(set.contains(&[0.5, 0.5], 1e-9));
    assert!(set.contains(&[0.25, 0.75], 1e-9));
    assert!(!set.contains(&[0.7, 0.7], 1e-3));
    assert!(!set.contains(&[1.5, -0.5], 1e-3));
}

#[test]
fn selection_on_the_segment() {
    let p = segment_instance();
    // least Euclidean norm at the midpoint
    let x = min_norm_solution(&p, MinNormKind::Euclid, 20).unwrap();
    assert!(mat::dist_inf(&x, &[0.5, 0.5]) < 1e-9);
    // max-norm minimum is also the midpoint (max coordinate 0.5)
    let x = min_norm_solution(&p, MinNormKind::MaxNorm, 20).unwrap();
    assert!((mat::norm_inf(&x) - 0.5).abs() < 1e-9);
    // the sparsest solutions are the endpoints with one nonzero
    let x = sparse_solution(&p, 20).unwrap();
    let nnz = x.iter().filter(|v| v.abs() > 1e-9).count();
    assert_eq!(nnz, 1);
    assert!(p.residual_inf(&x) < 1e-9);
}

#[test]
fn full_dimensional_solution_cone() {
    // x - |x| = 0 holds exactly on the whole positive orthant
    let p = AveProblem::new(Mat::identity(2), vec![0.0, 0.0]).unwrap();
    let set = enumerate_solutions(&p, false, 20).unwrap();
    assert!(!set.is_empty());
    // a two-dimensional piece is present
    assert!(set
        .affine_pieces()
        .iter()
        .any(|(_, a)| a.dim() == 2 && a.span == SpanKind::Polyhedral));
    // membership: interior, boundary, and outside
    assert!(set.contains(&[5.0, 7.0], 1e-9));
    assert!(set.contains(&[3.0, 0.0], 1e-9));
    assert!(set.contains(&[0.0, 0.0], 1e-9));
    assert!(!set.contains(&[-1.0, 3.0], 1e-3));
    // minimum norm is the origin
    let x = min_norm_solution(&p, MinNormKind::Euclid, 20).unwrap();
    assert!(mat::norm_inf(&x) < 1e-9);
}
