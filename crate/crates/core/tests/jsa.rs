use gvm_spdc::jsa::{
    build_jsa, half_max_width, linspace, marginals_fwhm, phase_matching_function, pump_envelope, purity_of_matrix,
    schmidt_purity, sinc,
};
use gvm_spdc::survey::solve_preset;
use gvm_spdc::{Error, GridSpec, GvmCondition, JsaGrid, PumpSpec, Registry, Span};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};

fn gram_purity(a: &DMatrix<f64>) -> f64 {
    let rho = a * a.transpose();
    let t = rho.trace();
    (&rho * &rho).trace() / (t * t)
}

fn desk_grid(id: &str, c: GvmCondition, n: usize) -> JsaGrid<f64> {
    let reg = Registry::bundled();
    let r = reg.get(id).unwrap();
    let s = &solve_preset(r, c).unwrap()[0];
    let (len, bw) = gvm_spdc::jsa::desk_parameters(c);
    let pump = PumpSpec::new(s.triple.pump, bw * 1e-3).unwrap();
    build_jsa(r, &s.interaction, &s.geometry, &pump, len, &GridSpec::degenerate(s.triple.pump, n)).unwrap()
}

#[test]
fn pump_intensity_fwhm_is_1_67_bandwidths() {
    let pump = PumpSpec::new(1.5_f64, 0.008).unwrap();
    let idler = 3.0;
    let lp = linspace(1.5 - 0.03, 1.5 + 0.03, 6001);
    let intensity: Vec<f64> = lp
        .iter()
        .map(|&p| {
            let signal = 1.0 / (1.0 / p - 1.0 / idler);
            pump_envelope(&pump, signal, idler).powi(2)
        })
        .collect();
    let w = half_max_width(&lp, &intensity).unwrap();
    assert!((w / (1.67 * 0.008) - 1.0).abs() < 0.02, "{w}");
    assert!((pump.intensity_fwhm() - w).abs() / w < 0.02);
}

#[test]
fn sinc_zero_and_length_scaling() {
    assert!(sinc(std::f64::consts::PI).abs() < 1e-15);
    assert!(sinc(2.0 * std::f64::consts::PI).abs() < 1e-15);
    assert_eq!(sinc(0.0_f64), 1.0);

    let reg = Registry::bundled();
    let r = reg.get("KTP").unwrap();
    let s = &solve_preset(r, GvmCondition::Gvm3).unwrap()[0];
    let idler = s.triple.idler;
    let signals = linspace(s.triple.signal - 0.004, s.triple.signal + 0.004, 4001);
    let width = |len: f64| {
        let y: Vec<f64> = signals
            .iter()
            .map(|&ls| phase_matching_function(r, &s.interaction, &s.geometry, len, ls, idler).unwrap().powi(2))
            .collect();
        half_max_width(&signals, &y).unwrap()
    };
    let ratio = width(10.0) / width(20.0);
    assert!((ratio - 2.0).abs() < 0.02, "{ratio}");
}

#[test]
fn separable_amplitude_is_pure() {
    let x = linspace(1.5_f64, 1.7, 40);
    let y = linspace(3.0_f64, 3.4, 30);
    let a = DMatrix::from_fn(40, 30, |i, j| {
        (-(x[i] - 1.6).powi(2) / 0.001).exp() * (1.0 + 0.5 * (y[j] * 7.0).sin())
    });
    let g = JsaGrid::from_amplitude(x, y, a).unwrap();
    assert!((schmidt_purity(&g).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn svd_purity_matches_gram_trace_on_random_matrices() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(7);
    for _ in 0..20 {
        let a = DMatrix::from_fn(20, 20, |_, _| rng.gen_range(-1.0..1.0));
        let svd = purity_of_matrix(&a).unwrap();
        let gram = gram_purity(&a);
        assert!((svd - gram).abs() < 1e-9, "{svd} vs {gram}");
    }
}

#[test]
fn purity_ignores_scale_and_transposition() {
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    let a: DMatrix<f64> = DMatrix::from_fn(24, 17, |_, _| rng.gen_range(0.0..1.0));
    let p = purity_of_matrix(&a).unwrap();
    assert!((purity_of_matrix(&(&a * 37.5)).unwrap() - p).abs() < 1e-12);
    assert!((purity_of_matrix(&a.transpose()).unwrap() - p).abs() < 1e-12);
    let g = JsaGrid::from_amplitude(linspace(1.0, 2.0, 24), linspace(2.0, 3.0, 17), a).unwrap();
    assert!((schmidt_purity(&g.transposed()).unwrap() - schmidt_purity(&g).unwrap()).abs() < 1e-12);
}

#[test]
fn undefined_purity_and_bad_axes_are_errors() {
    assert_eq!(purity_of_matrix(&DMatrix::<f64>::zeros(4, 4)), Err(Error::UndefinedPurity));
    let ax = linspace(1.0, 2.0, 4);
    assert!(matches!(
        JsaGrid::from_amplitude(ax.clone(), vec![1.0, 1.1, 1.3, 1.4], DMatrix::from_element(4, 4, 1.0)),
        Err(Error::Axis(_))
    ));
    assert!(matches!(
        JsaGrid::from_amplitude(ax.clone(), ax.clone(), DMatrix::from_element(4, 3, 1.0)),
        Err(Error::Axis(_))
    ));
    let reg = Registry::bundled();
    let r = reg.get("KTP").unwrap();
    let s = &solve_preset(r, GvmCondition::Gvm3).unwrap()[0];
    let pump = PumpSpec::new(s.triple.pump, 0.002).unwrap();
    let small = GridSpec::degenerate(s.triple.pump, 8);
    assert!(matches!(build_jsa(r, &s.interaction, &s.geometry, &pump, 10.0, &small), Err(Error::Grid(_))));
    let wide = GridSpec::degenerate(s.triple.pump, 32).with_span(Span::Explicit { signal: 6.0, idler: 6.0 });
    assert!(matches!(build_jsa(r, &s.interaction, &s.geometry, &pump, 10.0, &wide), Err(Error::Grid(_))));
}

#[test]
fn symmetric_gaussian_has_equal_marginal_widths() {
    let ax = linspace(1.5_f64, 1.7, 81);
    let a = DMatrix::from_fn(81, 81, |i, j| {
        let (u, v) = (ax[i] - 1.6, ax[j] - 1.6);
        (-(u * u + v * v + 1.2 * u * v) / 0.0008).exp()
    });
    let g = JsaGrid::from_amplitude(ax.clone(), ax, a).unwrap();
    let m = marginals_fwhm(&g);
    let (s, i) = (m.fwhm_signal.unwrap(), m.fwhm_idler.unwrap());
    assert!((s - i).abs() < 1e-12 * s);
    assert!(!m.signal_clipped && !m.idler_clipped);
}

#[test]
fn ridge_orientation_shows_in_the_marginals() {
    // Pump matched to the signal: the idler band is the narrow one.
    let bto = marginals_fwhm(&desk_grid("BaTiO3", GvmCondition::Gvm1, 200));
    assert!(bto.fwhm_signal.unwrap() > 5.0 * bto.fwhm_idler.unwrap());
    let lgse = marginals_fwhm(&desk_grid("LGSe", GvmCondition::Gvm2, 200));
    assert!(lgse.fwhm_idler.unwrap() > 5.0 * lgse.fwhm_signal.unwrap());
    let ktp = marginals_fwhm(&desk_grid("KTP", GvmCondition::Gvm3, 200));
    let ratio = ktp.fwhm_signal.unwrap() / ktp.fwhm_idler.unwrap();
    assert!((ratio - 1.0).abs() < 0.05, "{ratio}");
}

#[test]
fn purity_is_converged_at_the_default_grid() {
    for (id, c) in [("BaTiO3", GvmCondition::Gvm1), ("LGSe", GvmCondition::Gvm2)] {
        let p200 = schmidt_purity(&desk_grid(id, c, 200)).unwrap();
        let p400 = schmidt_purity(&desk_grid(id, c, 400)).unwrap();
        assert!((p200 - p400).abs() < 0.005, "{id}: {p200} vs {p400}");
    }
}

#[test]
fn auto_span_keeps_the_boundary_dark() {
    let g = desk_grid("KTP", GvmCondition::Gvm3, 200);
    let jsi = g.intensity();
    let peak = jsi.max();
    let n = g.n_signal() - 1;
    for k in 0..=n {
        for v in [jsi[(0, k)], jsi[(n, k)], jsi[(k, 0)], jsi[(k, n)]] {
            assert!(v < 1e-4 * peak);
        }
    }
}
