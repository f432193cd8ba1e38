use gvm_spdc::gvm::solve_gvm_qpm;
use gvm_spdc::jsa::{build_jsa, schmidt_purity};
use gvm_spdc::{Geometry32, GridSpec, GvmCondition, GvmSolution32, PhotonTriple32, PumpSpec32, Registry};

#[test]
fn single_precision_reproduces_the_ktp_solutions() {
    let reg = Registry::bundled();
    let r = reg.get("KTP").unwrap();
    let inter = r.interaction.interaction();
    for c in GvmCondition::ALL {
        let s32: Vec<GvmSolution32> = solve_gvm_qpm(r, &inter, c, (0.4f32, 2.0), 1).unwrap();
        let s64 = solve_gvm_qpm(r, &inter, c, (0.4f64, 2.0), 1).unwrap();
        assert_eq!(s32.len(), s64.len());
        for (a, b) in s32.iter().zip(&s64) {
            assert!((a.triple.pump as f64 - b.triple.pump).abs() < 1e-4, "{c}");
            let (pa, pb) = (a.geometry.period().unwrap() as f64, b.geometry.period().unwrap());
            assert!((pa - pb).abs() / pb < 1e-3, "{c}: {pa} vs {pb}");
        }
    }
}

#[test]
fn single_precision_jsa_purity() {
    let reg = Registry::bundled();
    let r = reg.get("KTP").unwrap();
    let inter = r.interaction.interaction();
    let t = PhotonTriple32::degenerate(0.7923);
    let g: Geometry32 = Geometry32::Qpm { period: 45.0, order: 1 };
    let pump = PumpSpec32::new(t.pump, 0.002).unwrap();
    let grid = build_jsa(r, &inter, &g, &pump, 10.0, &GridSpec::degenerate(t.pump, 64)).unwrap();
    let p32 = schmidt_purity(&grid).unwrap() as f64;

    let g64 = gvm_spdc::Geometry64::Qpm { period: 45.0, order: 1 };
    let pump64 = gvm_spdc::PumpSpec64::new(0.7923, 0.002).unwrap();
    let grid64 = build_jsa(r, &inter, &g64, &pump64, 10.0, &GridSpec::degenerate(0.7923, 64)).unwrap();
    let p64 = schmidt_purity(&grid64).unwrap();
    assert!((p32 - p64).abs() < 1e-3, "{p32} vs {p64}");
}
