use gvm_spdc::gvm::{orientation_distance, theta_pmf};
use gvm_spdc::hom::two_fold_trace;
use gvm_spdc::jsa::{linspace, purity_of_matrix, sinc};
use gvm_spdc::optics::{group_index, index_at};
use gvm_spdc::{Geometry, JsaGrid, PhotonTriple64, Registry};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0..1.0f64, rows * cols).prop_map(move |v| DMatrix::from_vec(rows, cols, v))
}

proptest! {
    #[test]
    fn purity_is_bounded_by_rank(m in (2usize..12, 2usize..12).prop_flat_map(|(r, c)| matrix(r, c))) {
        prop_assume!(m.norm() > 1e-6);
        let p = purity_of_matrix(&m).unwrap();
        let k = m.nrows().min(m.ncols()) as f64;
        prop_assert!(p <= 1.0 + 1e-12);
        prop_assert!(p >= 1.0 / k - 1e-12);
    }

    #[test]
    fn orientation_distance_is_a_metric_on_lines(a in -720.0..720.0f64, b in -720.0..720.0f64) {
        let d = orientation_distance(a, b);
        prop_assert!((0.0..=90.0).contains(&d));
        prop_assert!((d - orientation_distance(b, a)).abs() < 1e-9);
        prop_assert!(orientation_distance(a, a + 180.0) < 1e-9);
    }

    #[test]
    fn sinc_is_bounded(x in -1e3..1e3f64) {
        prop_assert!(sinc(x).abs() <= 1.0);
    }

    #[test]
    fn triples_conserve_energy(p in 0.3..3.0f64, f in 1.01..10.0f64) {
        let t = PhotonTriple64::from_pump_signal(p, p * f).unwrap();
        prop_assert!(t.energy_residual().abs() < 1e-12 / p);
        prop_assert!(t.idler > p);
    }

    #[test]
    fn exchanging_photons_reflects_the_ridge(lp in 0.7..1.4f64, f in 1.4..2.6f64) {
        let reg = Registry::bundled();
        let r = reg.get("KTP").unwrap();
        let inter = r.interaction.interaction();
        let t = PhotonTriple64::from_pump_signal(lp, lp * f).unwrap();
        prop_assume!(r.in_transparency(t.idler));
        let g = Geometry::Qpm { period: 30.0, order: 1 };
        let a = theta_pmf(r, &inter, &g, &t).unwrap().angle().unwrap();
        let b = theta_pmf(r, &inter.swapped(), &g, &t.swapped()).unwrap().angle().unwrap();
        prop_assert!(orientation_distance(b, 90.0 - a) < 1e-9);
    }

    #[test]
    fn group_index_matches_finite_difference(k in 0usize..6, x in 0.05..0.95f64) {
        let reg = Registry::bundled();
        let id = ["LT", "LN", "KTP", "KN", "BaTiO3", "OP-ZnSe"][k];
        let r = reg.get(id).unwrap();
        let inter = r.interaction.interaction();
        let [lo, hi] = r.transparency;
        let l = lo + (hi - lo) * x;
        let g = Geometry::Qpm { period: 20.0, order: 1 };
        let h = l * 1e-5;
        let n = |l: f64| index_at(r, &g, inter.idler, l).unwrap();
        let fd = n(l) - l * (n(l + h) - n(l - h)) / (2.0 * h);
        let ng = group_index(r, &g, inter.idler, l).unwrap();
        prop_assert!((ng - fd).abs() / ng < 1e-6, "{} at {}: {} vs {}", id, l, ng, fd);
    }

    #[test]
    fn two_fold_trace_is_even(m in matrix(10, 10), tau in 0.0..500.0f64) {
        prop_assume!(m.norm() > 1e-6);
        let ax = linspace(1.5, 1.7, 10);
        let g = JsaGrid::from_amplitude(ax.clone(), ax, m).unwrap();
        let t = two_fold_trace(&g, &[-tau, tau]).unwrap();
        prop_assert!((t.probability[0] - t.probability[1]).abs() < 1e-12);
    }
}
