use ffdist_web::{curve_view, pair_grid_view, spectrum_view};

#[test]
fn full_pair_set_fills_the_grid() {
    let g = pair_grid_view("3", 2, "uniform-random", 81, 1).unwrap();
    assert_eq!(g.q, 3);
    assert_eq!(g.attained, 9);
    assert_eq!(g.cells.len(), 9);
    assert!(g.cells.iter().all(|&c| c >= 1));
    assert_eq!(g.certified, g.cells.iter().filter(|&&c| c == 2).count());
    assert_eq!(g.tau, 5);
}

#[test]
fn extension_field_grid() {
    let g = pair_grid_view("3^2/1:0:1", 1, "product", 40, 2).unwrap();
    assert_eq!(g.labels.len(), 9);
    assert_eq!(g.labels[4], "1:1");
    assert!(g.e_size >= 40);
}

#[test]
fn spectrum_of_full_plane() {
    let v = spectrum_view("3", 2, 2, 9, 9, 0).unwrap();
    assert_eq!(v.counts, vec![9, 36, 36]);
    assert_eq!(v.delta, 3);
    assert_eq!(v.triples, "297");
    assert!(v.triple_bound_ratio.is_some());
}

#[test]
fn curve_aggregates_by_size() {
    let c = curve_view("3", 2, "thm11", &[10, 47, 81], 5, 3).unwrap();
    assert_eq!(c.points.len(), 3);
    assert_eq!(c.points[2].full, 1.0);
    assert!(c.points[0].min_ratio <= c.points[0].mean_ratio);
    assert!((c.threshold - 46.765_372).abs() < 1e-5);
}

#[test]
fn bad_parameters_are_errors() {
    assert!(pair_grid_view("4", 2, "uniform-random", 5, 0).is_err());
    assert!(pair_grid_view("3", 2, "nope", 5, 0).is_err());
    assert!(spectrum_view("5", 2, 2, 26, 1, 0).is_err());
    assert!(curve_view("5", 3, "thm14", &[5], 1, 0).is_err());
}
