use std::f64::consts::PI;

use gvm_spdc::optics::index_at;
use gvm_spdc::phasematch::{bulk_mismatch, delta_k, pm_map, poling_period, solve_bpm_angle, DK_TOLERANCE};
use gvm_spdc::{BpmPlane, Branch, Error, Geometry, PhotonTriple64, Registry};

fn angles(id: &str, pump: f64) -> gvm_spdc::Result<Vec<f64>> {
    let reg = Registry::bundled();
    let r = reg.get(id).unwrap();
    let plane = BpmPlane::for_record(r)?;
    solve_bpm_angle(r, &r.interaction.interaction(), &plane, &PhotonTriple64::degenerate(pump))
}

#[test]
fn photon_triples_conserve_energy() {
    let t = PhotonTriple64::from_pump_signal(0.775, 1.3).unwrap();
    assert!(t.energy_residual().abs() < 1e-15);
    assert!((1.0 / t.idler - (1.0 / 0.775 - 1.0 / 1.3)).abs() < 1e-14);
    assert!(PhotonTriple64::from_pump_signal(1.0, 0.9).is_err());
    let d = PhotonTriple64::degenerate(1.5);
    assert_eq!((d.signal, d.idler), (3.0, 3.0));
    let s = t.swapped();
    assert_eq!((s.signal, s.idler), (t.idler, t.signal));
}

#[test]
fn poling_period_cancels_the_mismatch() {
    let reg = Registry::bundled();
    for id in ["LT", "LN", "KTP", "KN", "BaTiO3", "OP-ZnSe"] {
        let r = reg.get(id).unwrap();
        let inter = r.interaction.interaction();
        let t = PhotonTriple64::degenerate(1.2 * r.transparency[0].max(0.5));
        let period = poling_period(r, &inter, &t, 1).unwrap();
        let dk = delta_k(r, &inter, &Geometry::Qpm { period, order: 1 }, &t).unwrap();
        let bulk = bulk_mismatch(r, &inter, &Geometry::Qpm { period, order: 1 }, &t).unwrap();
        assert!(dk.abs() < 1e-12 * bulk.abs().max(1.0), "{id}: {dk}");
    }
}

#[test]
fn third_order_period_is_three_times_first() {
    let reg = Registry::bundled();
    for id in ["LT", "KTP", "OP-ZnSe"] {
        let r = reg.get(id).unwrap();
        let inter = r.interaction.interaction();
        let t = PhotonTriple64::degenerate(2.0);
        let p1 = poling_period(r, &inter, &t, 1).unwrap();
        let p3 = poling_period(r, &inter, &t, 3).unwrap();
        assert!((p3 - 3.0 * p1).abs() <= 1e-12 * p3, "{id}");
    }
}

#[test]
fn isotropic_mismatch_is_the_dispersion_of_one_index() {
    let reg = Registry::bundled();
    let r = reg.get("OP-ZnSe").unwrap();
    let inter = r.interaction.interaction();
    let g = Geometry::Qpm { period: 1.0, order: 1 };
    for lp in [1.0, 2.0, 3.4, 4.5] {
        let t = PhotonTriple64::degenerate(lp);
        let n = |l: f64| index_at(r, &g, Branch::N, l).unwrap();
        let oracle = 2.0 * PI / lp * (n(lp) - n(2.0 * lp));
        let dk = bulk_mismatch(r, &inter, &g, &t).unwrap();
        assert!(dk > 0.0);
        assert!((dk - oracle).abs() < 1e-12 * oracle, "{lp}: {dk} vs {oracle}");
    }
}

#[test]
fn ktp_gvm3_period_is_about_45_um() {
    let reg = Registry::bundled();
    let r = reg.get("KTP").unwrap();
    let p = poling_period(r, &r.interaction.interaction(), &PhotonTriple64::degenerate(0.792), 1).unwrap();
    assert!((p - 45.0).abs() < 0.5, "{p}");
}

#[test]
fn zinc_selenide_period_is_symmetric_under_photon_exchange() {
    let reg = Registry::bundled();
    let r = reg.get("OP-ZnSe").unwrap();
    let inter = r.interaction.interaction();
    for ls in [5.5, 6.0, 7.5, 9.0] {
        let t = PhotonTriple64::from_pump_signal(3.4, ls).unwrap();
        let a = poling_period(r, &inter, &t, 1).unwrap();
        let b = poling_period(r, &inter, &t.swapped(), 1).unwrap();
        assert!((a - b).abs() < 1e-12 * a, "{ls}: {a} vs {b}");
    }
}

#[test]
fn single_point_map_agrees_with_direct_calls() {
    let reg = Registry::bundled();
    let r = reg.get("KTP").unwrap();
    let inter = r.interaction.interaction();
    let m = pm_map(r, &inter, (0.8, 0.8), (1.5, 1.5), 1, 1).unwrap();
    let t = PhotonTriple64::from_pump_signal(0.8, 1.5).unwrap();
    assert_eq!(m.period[0][0], Some(poling_period(r, &inter, &t, 1).unwrap()));
    let geom = Geometry::Qpm { period: m.period[0][0].unwrap(), order: 1 };
    let theta = gvm_spdc::gvm::theta_pmf(r, &inter, &geom, &t).unwrap().angle();
    assert_eq!(m.theta_pmf[0][0], theta);
}

#[test]
fn map_marks_points_outside_the_window() {
    let reg = Registry::bundled();
    let r = reg.get("KTP").unwrap();
    let inter = r.interaction.interaction();
    // Pump 1.0, signal 1.05 puts the idler past KTP's 4.5 um edge.
    let m = pm_map(r, &inter, (1.0, 1.0), (1.05, 2.0), 1, 5).unwrap();
    assert_eq!(m.period[0][0], None);
    assert!(m.period[0][4].is_some());
    assert!(matches!(pm_map(r, &inter, (0.1, 1.0), (1.5, 2.0), 3, 3), Err(Error::Range { .. })));
    assert!(matches!(pm_map(r, &inter, (0.8, 1.0), (1.5, 2.0), 0, 3), Err(Error::Grid(_))));
}

#[test]
fn zinc_selenide_map_is_symmetric_about_degeneracy() {
    let reg = Registry::bundled();
    let r = reg.get("OP-ZnSe").unwrap();
    let inter = r.interaction.interaction();
    // The two signal points are each other's idler at this pump.
    let lp: f64 = 3.4;
    let (s_lo, s_hi) = (6.0, 1.0 / (1.0 / lp - 1.0 / 6.0));
    let m = pm_map(r, &inter, (lp, lp), (s_lo, s_hi), 1, 2).unwrap();
    let (a, b) = (m.period[0][0].unwrap(), m.period[0][1].unwrap());
    assert!((a - b).abs() < 1e-9 * a, "{a} vs {b}");
    let m = pm_map(r, &inter, (3.2, 3.6), (5.0, 8.0), 10, 10).unwrap();
    assert!(m.period.iter().flatten().all(|p| p.is_none_or(|p| p > 0.0)));
}

#[test]
fn bpm_roots_meet_the_tolerance() {
    let reg = Registry::bundled();
    for (id, lp) in [("AGSe", 2.457), ("GaSe", 2.189), ("HGS", 1.704), ("LGS", 1.347), ("CGA", 3.692)] {
        let r = reg.get(id).unwrap();
        let inter = r.interaction.interaction();
        let plane = BpmPlane::for_record(r).unwrap();
        let t = PhotonTriple64::degenerate(lp);
        for a in solve_bpm_angle(r, &inter, &plane, &t).unwrap() {
            let dk = delta_k(r, &inter, &plane.geometry(a), &t).unwrap();
            assert!(dk.abs() < DK_TOLERANCE, "{id} at {a}: {dk}");
            assert!((0.0..=90.0).contains(&a));
        }
    }
}

#[test]
fn silver_gallium_selenide_phase_matches_near_80_degrees() {
    let reg = Registry::bundled();
    let r = reg.get("AGSe").unwrap();
    let inter = r.interaction.interaction();
    let t = PhotonTriple64::degenerate(2.457);
    let theta = angles("AGSe", 2.457).unwrap()[0];
    assert!((theta - 79.9).abs() < 0.5, "{theta}");
    let dk = bulk_mismatch(r, &inter, &Geometry::Uniaxial { theta: 79.9, phi: 0.0 }, &t).unwrap();
    assert!(dk.abs() < 1e-3, "{dk}");
}

#[test]
fn mercury_thiogallate_angle() {
    let theta = angles("HGS", 1.704).unwrap()[0];
    assert!((theta - 60.1).abs() < 0.3, "{theta}");
}

#[test]
fn silver_thiogallate_at_one_micron_has_no_solution() {
    assert!(matches!(angles("AGS", 1.0), Err(Error::NoSolution(_))));
}

#[test]
fn isotropic_crystals_cannot_use_bpm() {
    let reg = Registry::bundled();
    assert!(BpmPlane::<f64>::for_record(reg.get("OP-ZnSe").unwrap()).is_err());
}

#[test]
fn angle_moves_continuously_with_the_pump() {
    for (id, lps) in [
        ("AGS", [1.688, 2.845, 2.187]),
        ("HGS", [1.704, 2.819, 2.206]),
        ("CGA", [3.692, 5.825, 4.690]),
        ("AGSe", [2.457, 4.079, 3.136]),
        ("GaSe", [2.189, 3.657, 2.833]),
        ("TAS", [3.620, 5.535, 4.570]),
    ] {
        for lp in lps {
            let a = angles(id, lp).unwrap()[0];
            let b = angles(id, lp + 0.001).unwrap()[0];
            assert!((a - b).abs() < 0.5, "{id} at {lp}: {a} -> {b}");
        }
    }
}
