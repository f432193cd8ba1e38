use gvm_spdc::nonlinear::d_eff;
use gvm_spdc::optics::{group_index, index_at};
use gvm_spdc::{Branch, DEff, Geometry, PhotonTriple, Plane, Registry};

fn single_constant_registry() -> Registry {
    Registry::from_toml_str(
        r#"
schema_version = 1
[[crystal]]
id = "C4"
formula = "test"
optical_class = "isotropic"
point_group = "-43m"
transparency = [0.5, 5.0]
method = "qpm"
golden = true
references = []
interaction = { type = "type-0", pump = "n", signal = "n", idler = "n" }
[crystal.dispersion.n]
source = "test"
provenance = "verbatim"
valid_range = [0.5, 5.0]
terms = [{ kind = "constant", a = 4.0 }]
"#,
    )
    .unwrap()
}

#[test]
fn constant_model_index_and_group_index() {
    let reg = single_constant_registry();
    let r = reg.get("C4").unwrap();
    let g = Geometry::Qpm { period: 10.0, order: 1 };
    for l in [0.6, 1.0, 3.3] {
        assert_eq!(index_at(r, &g, Branch::N, l).unwrap(), 2.0);
        assert_eq!(group_index(r, &g, Branch::N, l).unwrap(), 2.0);
    }
}

#[test]
fn extraordinary_index_hits_the_ellipse_endpoints() {
    let reg = Registry::bundled();
    for id in ["AGSe", "GaSe", "HGS", "CGA", "AAS"] {
        let r = reg.get(id).unwrap();
        let l = 0.5 * (r.transparency[0] + r.transparency[1]);
        let no: f64 = r.refractive_index("o", l).unwrap();
        let ne: f64 = r.refractive_index("e", l).unwrap();
        let at = |theta: f64| index_at(r, &Geometry::Uniaxial { theta, phi: 0.0 }, Branch::E, l).unwrap();
        assert_eq!(at(0.0), no, "{id}");
        assert!((at(90.0) - ne).abs() < 1e-15, "{id}");
    }
}

#[test]
fn extraordinary_index_is_monotone_in_theta() {
    let reg = Registry::bundled();
    for r in reg.iter().filter(|r| r.optical_class.is_uniaxial()) {
        let [lo, hi] = r.transparency;
        for k in 0..10 {
            let l = lo + (hi - lo) * (k as f64 + 0.5) / 10.0;
            let vals: Vec<f64> = (0..=90)
                .map(|t| index_at(r, &Geometry::Uniaxial { theta: t as f64, phi: 0.0 }, Branch::E, l).unwrap())
                .collect();
            let rising = vals[90] >= vals[0];
            for w in vals.windows(2) {
                assert!(if rising { w[1] >= w[0] } else { w[1] <= w[0] }, "{} at {l}", r.id);
            }
        }
    }
}

#[test]
fn lise_in_plane_index_lies_between_the_principal_indices() {
    let reg = Registry::bundled();
    let r = reg.get("LISe").unwrap();
    let l = 3.824;
    let g = Geometry::BiaxialPlane { plane: Plane::Xy, angle: 45.8 };
    let n = index_at(r, &g, Branch::InPlane, l).unwrap();
    let nx: f64 = r.refractive_index("x", l).unwrap();
    let ny: f64 = r.refractive_index("y", l).unwrap();
    assert!(n > nx.min(ny) && n < nx.max(ny), "{nx} < {n} < {ny}");
    let nz: f64 = r.refractive_index("z", l).unwrap();
    assert_eq!(index_at(r, &g, Branch::Normal, l).unwrap(), nz);
}

#[test]
fn group_index_matches_finite_difference_at_fixed_angle() {
    let reg = Registry::bundled();
    let cases: Vec<(&str, Geometry<f64>, Branch, f64)> = vec![
        ("AGSe", Geometry::Uniaxial { theta: 79.9, phi: 0.0 }, Branch::E, 2.457),
        ("AGSe", Geometry::Uniaxial { theta: 79.9, phi: 0.0 }, Branch::O, 4.914),
        ("GaSe", Geometry::Uniaxial { theta: 16.1, phi: 0.0 }, Branch::E, 4.378),
        ("LGS", Geometry::BiaxialPlane { plane: Plane::Xy, angle: 55.5 }, Branch::InPlane, 2.696),
        ("LGS", Geometry::BiaxialPlane { plane: Plane::Xy, angle: 55.5 }, Branch::Normal, 2.696),
        ("KTP", Geometry::Qpm { period: 45.0, order: 1 }, Branch::Z, 1.584),
        ("OP-ZnSe", Geometry::Qpm { period: 263.0, order: 1 }, Branch::N, 6.806),
    ];
    for (id, g, b, l) in cases {
        let r = reg.get(id).unwrap();
        let h = l * 1e-5;
        let n = index_at(r, &g, b, l).unwrap();
        let slope = (index_at(r, &g, b, l + h).unwrap() - index_at(r, &g, b, l - h).unwrap()) / (2.0 * h);
        let fd = n - l * slope;
        let ng = group_index(r, &g, b, l).unwrap();
        assert!((ng - fd).abs() / ng < 1e-6, "{id} {b:?}: {ng} vs {fd}");
    }
}

#[test]
fn ktp_gvm2_pump_and_idler_group_indices_agree() {
    let reg = Registry::bundled();
    let r = reg.get("KTP").unwrap();
    let inter = r.interaction.interaction();
    let g = Geometry::Qpm { period: 72.2, order: 1 };
    let np: f64 = group_index(r, &g, inter.pump, 1.169).unwrap();
    let ni = group_index(r, &g, inter.idler, 2.338).unwrap();
    assert!((np - ni).abs() < 1e-4, "{np} vs {ni}");
}

#[test]
fn zinc_selenide_first_order_d_eff() {
    let reg = Registry::bundled();
    let r = reg.get("OP-ZnSe").unwrap();
    let inter = r.interaction.interaction();
    let t = PhotonTriple::degenerate(3.403);
    let d: f64 = d_eff(r, &inter, &Geometry::Qpm { period: 263.0, order: 1 }, &t).unwrap().value().unwrap();
    assert!((d - 19.1).abs() / 19.1 < 0.15, "{d}");
}

#[test]
fn missing_nonlinear_data_is_unknown_not_zero() {
    let reg = Registry::bundled();
    for id in ["THI", "PMN-0.38PT"] {
        let r = reg.get(id).unwrap();
        let inter = r.interaction.interaction();
        let g = match r.method {
            gvm_spdc::Method::Bpm => Geometry::Uniaxial { theta: 30.0, phi: 0.0 },
            gvm_spdc::Method::Qpm => Geometry::Qpm { period: 900.0, order: 1 },
        };
        let t = PhotonTriple::degenerate(3.0);
        assert!(matches!(d_eff(r, &inter, &g, &t).unwrap(), DEff::Unknown(_)), "{id}");
    }
}

#[test]
fn miller_scaling_is_identity_at_the_measurement_wavelengths() {
    // KTP coefficients were measured by 1.064 um second-harmonic generation.
    let reg = Registry::bundled();
    let r = reg.get("KTP").unwrap();
    let inter = r.interaction.interaction();
    let t = PhotonTriple::degenerate(0.532);
    let d = d_eff(r, &inter, &Geometry::Qpm { period: 10.0, order: 1 }, &t).unwrap().value().unwrap();
    // y -> z + y picks d24 alone.
    let oracle = 2.0 / std::f64::consts::PI * 3.64;
    assert!((d - oracle).abs() < 1e-12, "{d} vs {oracle}");
}

#[test]
fn qpm_order_three_is_a_third_of_order_one() {
    let reg = Registry::bundled();
    for id in ["LT", "LN", "KTP", "BaTiO3", "OP-ZnSe"] {
        let r = reg.get(id).unwrap();
        let inter = r.interaction.interaction();
        let t = PhotonTriple::degenerate(1.6);
        let d1: f64 = d_eff(r, &inter, &Geometry::Qpm { period: 20.0, order: 1 }, &t).unwrap().value().unwrap();
        let d3: f64 = d_eff(r, &inter, &Geometry::Qpm { period: 60.0, order: 3 }, &t).unwrap().value().unwrap();
        assert!((d3 - d1 / 3.0).abs() <= 1e-14 * d1.abs().max(1.0), "{id}");
    }
}

#[test]
fn gallium_selenide_d_eff_matches_the_point_group_formula() {
    // -62m, e -> o + e: |d_eff| = |d22| cos²θ |cos 3φ|, scaled by Miller's rule.
    let reg = Registry::bundled();
    let r = reg.get("GaSe").unwrap();
    let inter = r.interaction.interaction();
    let t = PhotonTriple::degenerate(2.189);
    for (theta, phi) in [(16.1, 0.0), (16.1, 10.0), (40.0, 20.0)] {
        let g = Geometry::Uniaxial { theta, phi };
        let d = d_eff(r, &inter, &g, &t).unwrap().value().unwrap();
        let chi = |b: Branch, l: f64| {
            let n = index_at(r, &g, b, l).unwrap();
            n * n - 1.0
        };
        let here = chi(inter.pump, t.pump) * chi(inter.signal, t.signal) * chi(inter.idler, t.idler);
        let there = chi(inter.pump, 5.3) * chi(inter.signal, 10.6) * chi(inter.idler, 10.6);
        let (th, ph) = (theta.to_radians(), phi.to_radians());
        let oracle = 54.0 * th.cos().powi(2) * (3.0 * ph).cos().abs() * here / there;
        assert!((d.abs() - oracle).abs() < 1e-9 * oracle, "{theta} {phi}: {d} vs {oracle}");
    }
}
