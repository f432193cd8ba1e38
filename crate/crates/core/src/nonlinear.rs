//! Effective nonlinear coefficient from point-group tensors.
//!
//! The second-order tensor is rebuilt from the registry entries using the
//! point-group relations under Kleinman symmetry, contracted with the three
//! field directions, and each element is scaled from its measurement
//! wavelength with Miller's rule.

use std::fmt;

use crate::crystal::CrystalRecord;
use crate::error::{Error, Result};
use crate::optics::{index_with_slope_impl, polarization_vector, Geometry, Interaction};
use crate::phasematch::PhotonTriple;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub enum DEff<T> {
    /// pm/V
    Known(T),
    Unknown(String),
}

impl<T: Real> DEff<T> {
    pub fn value(&self) -> Option<T> {
        match self {
            DEff::Known(v) => Some(*v),
            DEff::Unknown(_) => None,
        }
    }
}

impl<T: Real> fmt::Display for DEff<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DEff::Known(v) => write!(f, "{v}"),
            DEff::Unknown(_) => write!(f, "unknown"),
        }
    }
}

/// (contracted label, independent symbol, sign)
type Relation = (&'static str, usize, f64);

/// Kleinman-reduced relations; labels absent from a table vanish.
fn relations(point_group: &str) -> Result<&'static [Relation]> {
    const C6_4MM: &[Relation] = &[
        ("d15", 0, 1.0),
        ("d24", 0, 1.0),
        ("d31", 0, 1.0),
        ("d32", 0, 1.0),
        ("d33", 1, 1.0),
    ];
    const C3M: &[Relation] = &[
        ("d15", 0, 1.0),
        ("d24", 0, 1.0),
        ("d31", 0, 1.0),
        ("d32", 0, 1.0),
        ("d33", 1, 1.0),
        ("d22", 2, 1.0),
        ("d21", 2, -1.0),
        ("d16", 2, -1.0),
    ];
    const S4: &[Relation] = &[
        ("d14", 0, 1.0),
        ("d25", 0, 1.0),
        ("d36", 0, 1.0),
        ("d15", 1, 1.0),
        ("d31", 1, 1.0),
        ("d24", 1, -1.0),
        ("d32", 1, -1.0),
    ];
    const D2D_TD: &[Relation] = &[("d14", 0, 1.0), ("d25", 0, 1.0), ("d36", 0, 1.0)];
    const D3H: &[Relation] = &[("d22", 0, 1.0), ("d21", 0, -1.0), ("d16", 0, -1.0)];
    const C2V: &[Relation] = &[
        ("d15", 0, 1.0),
        ("d31", 0, 1.0),
        ("d24", 1, 1.0),
        ("d32", 1, 1.0),
        ("d33", 2, 1.0),
    ];
    match point_group {
        "6" | "4mm" => Ok(C6_4MM),
        "3m" => Ok(C3M),
        "-4" => Ok(S4),
        "-42m" | "-43m" => Ok(D2D_TD),
        "-62m" => Ok(D3H),
        "mm2" => Ok(C2V),
        other => Err(Error::UnsupportedPointGroup(other.to_string())),
    }
}

fn contracted(j: usize, k: usize) -> usize {
    match (j.min(k), j.max(k)) {
        (0, 0) => 0,
        (1, 1) => 1,
        (2, 2) => 2,
        (1, 2) => 3,
        (0, 2) => 4,
        _ => 5,
    }
}

fn label(i: usize, l: usize) -> String {
    format!("d{}{}", i + 1, l + 1)
}

/// χ = n² − 1 for the three waves at the given wavelengths.
fn chi_product<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    geometry: &Geometry<T>,
    lambdas: [T; 3],
    checked: bool,
) -> Result<T> {
    let branches = [interaction.pump, interaction.signal, interaction.idler];
    let mut prod = T::one();
    for (b, l) in branches.into_iter().zip(lambdas) {
        let (n, _) = index_with_slope_impl(record, geometry, b, l, checked)?;
        prod *= n * n - T::one();
    }
    Ok(prod)
}

/// Miller factor from a second-harmonic measurement at `measured_um`.
fn miller<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    geometry: &Geometry<T>,
    triple: &PhotonTriple<T>,
    measured_um: f64,
) -> Result<T> {
    let lm = T::lit(measured_um);
    let here = chi_product(
        record,
        interaction,
        geometry,
        [triple.pump, triple.signal, triple.idler],
        true,
    )?;
    let there = chi_product(
        record,
        interaction,
        geometry,
        [lm / T::lit(2.0), lm, lm],
        false,
    )?;
    if !(there > T::zero()) || !(here > T::zero()) {
        return Err(Error::ModelIntegrity(
            "non-positive susceptibility in Miller scaling".into(),
        ));
    }
    Ok(here / there)
}

/// Effective nonlinear coefficient in pm/V.
///
/// Returns `Unknown` when the crystal is marked as lacking nonlinear data or
/// when a tensor element with a non-vanishing projection is missing.
pub fn d_eff<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    geometry: &Geometry<T>,
    triple: &PhotonTriple<T>,
) -> Result<DEff<T>> {
    let table = relations(&record.point_group)?;
    if record.d_unknown {
        return Ok(DEff::Unknown("no nonlinear data available".into()));
    }
    let nsym = table.iter().map(|r| r.1 + 1).max().unwrap_or(0);

    // Value and measurement wavelength per independent symbol.
    let mut sym: Vec<Option<(f64, f64)>> = vec![None; nsym];
    for entry in &record.d_entries {
        if let Some(&(_, s, sign)) = table.iter().find(|r| r.0 == entry.tensor) {
            if sym[s].is_none() {
                sym[s] = Some((sign * entry.magnitude, entry.wavelength));
            }
        }
    }

    let ep = polarization_vector(record, geometry, interaction.pump)?;
    let es = polarization_vector(record, geometry, interaction.signal)?;
    let ei = polarization_vector(record, geometry, interaction.idler)?;

    let mut coeff = vec![T::zero(); nsym];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let name = label(i, contracted(j, k));
                if let Some(&(_, s, sign)) = table.iter().find(|r| r.0 == name) {
                    coeff[s] += T::lit(sign) * ep[i] * es[j] * ei[k];
                }
            }
        }
    }

    let mut total = T::zero();
    for (s, c) in coeff.iter().enumerate() {
        if c.abs() < T::lit(1e-9) {
            continue;
        }
        let Some((value, measured)) = sym[s] else {
            let names: Vec<&str> = table.iter().filter(|r| r.1 == s).map(|r| r.0).collect();
            return Ok(DEff::Unknown(format!("missing tensor element {}", names.join("/"))));
        };
        let scale = miller(record, interaction, geometry, triple, measured)?;
        total += *c * T::lit(value) * scale;
    }

    if let Geometry::Qpm { order, .. } = *geometry {
        total = total * T::lit(2.0) / (T::lit(order as f64) * T::PI());
    }
    Ok(DEff::Known(total))
}
