//! Wave-vector mismatch, BPM angle roots, poling periods and nondegenerate maps.

use rayon::prelude::*;

use crate::crystal::{CrystalRecord, OpticalClass};
use crate::error::{Error, Result};
use crate::gvm::{theta_pmf, ThetaPmf};
use crate::optics::{index_at, Geometry, Interaction, Plane};
use crate::roots::{bisect, scan_brackets};
use crate::scalar::Real;

/// Pump, signal and idler vacuum wavelengths in micrometers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotonTriple<T> {
    pub pump: T,
    pub signal: T,
    pub idler: T,
}

impl<T: Real> PhotonTriple<T> {
    /// λ_s = λ_i = 2 λ_p.
    pub fn degenerate(pump: T) -> Self {
        let two = T::lit(2.0);
        Self {
            pump,
            signal: two * pump,
            idler: two * pump,
        }
    }

    /// Idler from energy conservation.
    pub fn from_pump_signal(pump: T, signal: T) -> Result<Self> {
        let inv = T::one() / pump - T::one() / signal;
        if !(inv > T::zero()) {
            return Err(Error::Geometry(format!(
                "signal {signal} um must be longer than pump {pump} um"
            )));
        }
        Ok(Self {
            pump,
            signal,
            idler: T::one() / inv,
        })
    }

    /// Pump from energy conservation.
    pub fn from_signal_idler(signal: T, idler: T) -> Self {
        Self {
            pump: T::one() / (T::one() / signal + T::one() / idler),
            signal,
            idler,
        }
    }

    pub fn energy_residual(&self) -> T {
        T::one() / self.pump - T::one() / self.signal - T::one() / self.idler
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.energy_residual().abs();
        if r.to_f64_lossy() < 1e-12 {
            Ok(())
        } else {
            Err(Error::Geometry(format!("energy conservation violated by {r} 1/um")))
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            pump: self.pump,
            signal: self.idler,
            idler: self.signal,
        }
    }
}

fn k<T: Real>(n: T, lambda: T) -> T {
    T::lit(2.0) * T::PI() * n / lambda
}

/// k_p − k_s − k_i in rad/um, without any grating vector.
pub fn bulk_mismatch<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    geometry: &Geometry<T>,
    triple: &PhotonTriple<T>,
) -> Result<T> {
    let np = index_at(record, geometry, interaction.pump, triple.pump)?;
    let ns = index_at(record, geometry, interaction.signal, triple.signal)?;
    let ni = index_at(record, geometry, interaction.idler, triple.idler)?;
    Ok(k(np, triple.pump) - k(ns, triple.signal) - k(ni, triple.idler))
}

/// Δk in rad/um. QPM subtracts the grating vector 2πm/Λ from |k_p − k_s − k_i|,
/// matching [`poling_period`].
pub fn delta_k<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    geometry: &Geometry<T>,
    triple: &PhotonTriple<T>,
) -> Result<T> {
    let dk = bulk_mismatch(record, interaction, geometry, triple)?;
    Ok(match *geometry {
        Geometry::Qpm { period, order } => {
            dk.abs() - T::lit(2.0) * T::PI() * T::lit(order as f64) / period
        }
        _ => dk,
    })
}

/// Where a BPM angle lives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BpmPlane<T> {
    /// Uniaxial crystal; the solved angle is θ at this azimuth φ (deg).
    Uniaxial { phi: T },
    /// Biaxial principal plane; the solved angle is φ (xy) or θ (xz, yz).
    Biaxial(Plane),
}

impl<T: Real> BpmPlane<T> {
    pub fn geometry(&self, angle: T) -> Geometry<T> {
        match *self {
            BpmPlane::Uniaxial { phi } => Geometry::Uniaxial { theta: angle, phi },
            BpmPlane::Biaxial(plane) => Geometry::BiaxialPlane { plane, angle },
        }
    }

    pub fn for_record(record: &CrystalRecord) -> Result<Self> {
        match record.optical_class {
            OpticalClass::UniaxialNegative | OpticalClass::UniaxialPositive => {
                Ok(BpmPlane::Uniaxial { phi: T::zero() })
            }
            OpticalClass::Biaxial => record
                .interaction
                .plane
                .map(BpmPlane::Biaxial)
                .ok_or_else(|| Error::Geometry(format!("{} has no BPM plane", record.id))),
            OpticalClass::Isotropic => Err(Error::Geometry(format!(
                "{} is isotropic and cannot be birefringently phase matched",
                record.id
            ))),
        }
    }
}

pub const ANGLE_SCAN_STEP_DEG: f64 = 0.1;
pub const DK_TOLERANCE: f64 = 1e-8;

/// All angles in [0°, 90°] with Δk = 0, ascending.
pub fn solve_bpm_angle<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    plane: &BpmPlane<T>,
    triple: &PhotonTriple<T>,
) -> Result<Vec<T>> {
    let f = |a: T| bulk_mismatch(record, interaction, &plane.geometry(a), triple);
    let steps = (90.0 / ANGLE_SCAN_STEP_DEG).round() as usize;
    let scan = scan_brackets(f, T::zero(), T::lit(90.0), steps)?;
    let mut roots = Vec::with_capacity(scan.brackets.len());
    for (a, b, fa, fb) in scan.brackets {
        roots.push(bisect(f, a, b, fa, fb, T::lit(DK_TOLERANCE))?);
    }
    if roots.is_empty() {
        return Err(Error::NoSolution(format!(
            "{}: no phase-matching angle for {} at {:?} um; delta-k ranges over [{}, {}] rad/um",
            record.id,
            interaction.label(),
            (triple.pump, triple.signal, triple.idler),
            scan.min,
            scan.max
        )));
    }
    Ok(roots)
}

/// Λ = 2π m / |k_p − k_s − k_i| in micrometers.
pub fn poling_period<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    triple: &PhotonTriple<T>,
    order: u32,
) -> Result<T> {
    let probe = Geometry::Qpm {
        period: T::one(),
        order: 1,
    };
    let dk = bulk_mismatch(record, interaction, &probe, triple)?;
    if dk == T::zero() {
        return Err(Error::DegenerateGrating);
    }
    Ok(T::lit(2.0) * T::PI() * T::lit(order as f64) / dk.abs())
}

/// Poling period and ridge angle over a (λ_p, λ_s) grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PmMap<T> {
    pub pump_axis: Vec<T>,
    pub signal_axis: Vec<T>,
    /// `period[p][s]`, um; `None` where the idler leaves the transparency window.
    pub period: Vec<Vec<Option<T>>>,
    /// `theta_pmf[p][s]`, degrees; `None` where absent or singular.
    pub theta_pmf: Vec<Vec<Option<T>>>,
    /// Grid points flagged as the all-GVM convergence point.
    pub singular: Vec<(usize, usize)>,
}

fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * T::lit(i as f64) / T::lit((n - 1) as f64))
        .collect()
}

/// First-order Λ and θ_PMF over a nondegenerate grid for a QPM interaction.
pub fn pm_map<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    pump_range: (T, T),
    signal_range: (T, T),
    n_pump: usize,
    n_signal: usize,
) -> Result<PmMap<T>> {
    if n_pump == 0 || n_signal == 0 {
        return Err(Error::Grid("map needs at least one point per axis".into()));
    }
    for (name, (lo, hi)) in [("pump", pump_range), ("signal", signal_range)] {
        for l in [lo, hi] {
            if !record.in_transparency(l.to_f64_lossy()) {
                return Err(Error::Range {
                    what: format!("{} {name} range", record.id),
                    lambda: l.to_f64_lossy(),
                    lo: record.transparency[0],
                    hi: record.transparency[1],
                });
            }
        }
    }
    let pump_axis = linspace(pump_range.0, pump_range.1, n_pump);
    let signal_axis = linspace(signal_range.0, signal_range.1, n_signal);

    let rows: Vec<(Vec<Option<T>>, Vec<Option<T>>, Vec<usize>)> = pump_axis
        .par_iter()
        .map(|&lp| {
            let mut period = Vec::with_capacity(n_signal);
            let mut angle = Vec::with_capacity(n_signal);
            let mut singular = Vec::new();
            for (j, &ls) in signal_axis.iter().enumerate() {
                let point = PhotonTriple::from_pump_signal(lp, ls)
                    .ok()
                    .filter(|t| record.in_transparency(t.idler.to_f64_lossy()));
                let Some(triple) = point else {
                    period.push(None);
                    angle.push(None);
                    continue;
                };
                let lam = poling_period(record, interaction, &triple, 1).ok();
                let geom = Geometry::Qpm {
                    period: lam.unwrap_or(T::one()),
                    order: 1,
                };
                let th = match theta_pmf(record, interaction, &geom, &triple) {
                    Ok(ThetaPmf::Angle(a)) => Some(a),
                    Ok(ThetaPmf::Singular) => {
                        singular.push(j);
                        None
                    }
                    Err(_) => None,
                };
                period.push(lam);
                angle.push(th);
            }
            (period, angle, singular)
        })
        .collect();

    let mut map = PmMap {
        pump_axis,
        signal_axis,
        period: Vec::with_capacity(n_pump),
        theta_pmf: Vec::with_capacity(n_pump),
        singular: Vec::new(),
    };
    for (i, (p, a, s)) in rows.into_iter().enumerate() {
        map.period.push(p);
        map.theta_pmf.push(a);
        map.singular.extend(s.into_iter().map(|j| (i, j)));
    }
    Ok(map)
}
