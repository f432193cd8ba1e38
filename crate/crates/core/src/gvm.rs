//! Group-velocity-matching residuals, the ridge angle θ_PMF, and joint solvers.

use std::fmt;

use crate::crystal::CrystalRecord;
use crate::error::{Error, Result};
use crate::jsa::predicted_purity;
use crate::nonlinear::{d_eff, DEff};
use crate::optics::{inverse_group_velocity, Geometry, Interaction};
use crate::phasematch::{poling_period, solve_bpm_angle, BpmPlane, PhotonTriple};
use crate::roots::bisect;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GvmCondition {
    /// Pump matched to the signal: ridge at 0°.
    Gvm1,
    /// Pump matched to the idler: ridge at 90°.
    Gvm2,
    /// Pump matched to the mean of signal and idler: ridge at 45°.
    Gvm3,
}

impl GvmCondition {
    pub const ALL: [GvmCondition; 3] = [GvmCondition::Gvm1, GvmCondition::Gvm2, GvmCondition::Gvm3];

    pub fn label(self) -> &'static str {
        match self {
            GvmCondition::Gvm1 => "GVM1",
            GvmCondition::Gvm2 => "GVM2",
            GvmCondition::Gvm3 => "GVM3",
        }
    }

    /// Ridge angle the condition produces, degrees.
    pub fn ridge_deg(self) -> f64 {
        match self {
            GvmCondition::Gvm1 => 0.0,
            GvmCondition::Gvm2 => 90.0,
            GvmCondition::Gvm3 => 45.0,
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gvm1" | "1" => Some(GvmCondition::Gvm1),
            "gvm2" | "2" => Some(GvmCondition::Gvm2),
            "gvm3" | "3" => Some(GvmCondition::Gvm3),
            _ => None,
        }
    }
}

impl fmt::Display for GvmCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Inverse group velocities (pump, signal, idler) in fs/um.
pub fn inverse_velocities<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    geometry: &Geometry<T>,
    triple: &PhotonTriple<T>,
) -> Result<(T, T, T)> {
    Ok((
        inverse_group_velocity(record, geometry, interaction.pump, triple.pump)?,
        inverse_group_velocity(record, geometry, interaction.signal, triple.signal)?,
        inverse_group_velocity(record, geometry, interaction.idler, triple.idler)?,
    ))
}

fn residual_of<T: Real>((p, s, i): (T, T, T), condition: GvmCondition) -> T {
    match condition {
        GvmCondition::Gvm1 => p - s,
        GvmCondition::Gvm2 => p - i,
        GvmCondition::Gvm3 => (p - s) + (p - i),
    }
}

/// Inverse-velocity difference in fs/um for the chosen condition.
pub fn gvm_residual<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    geometry: &Geometry<T>,
    triple: &PhotonTriple<T>,
    condition: GvmCondition,
) -> Result<T> {
    let v = inverse_velocities(record, interaction, geometry, triple)?;
    Ok(residual_of(v, condition))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ThetaPmf<T> {
    /// Degrees in [0, 180).
    Angle(T),
    /// All three inverse group velocities coincide; the ridge is undefined.
    Singular,
}

impl<T: Real> ThetaPmf<T> {
    pub fn angle(&self) -> Option<T> {
        match self {
            ThetaPmf::Angle(a) => Some(*a),
            ThetaPmf::Singular => None,
        }
    }
}

pub const SINGULAR_THRESHOLD: f64 = 1e-12;

/// Distance between two line orientations, degrees, modulo 180.
pub fn orientation_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(180.0);
    d.min(180.0 - d)
}

pub fn theta_pmf<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    geometry: &Geometry<T>,
    triple: &PhotonTriple<T>,
) -> Result<ThetaPmf<T>> {
    let (p, s, i) = inverse_velocities(record, interaction, geometry, triple)?;
    let num = -(p - s);
    let den = p - i;
    let eps = T::lit(SINGULAR_THRESHOLD);
    if num.abs() < eps && den.abs() < eps {
        return Ok(ThetaPmf::Singular);
    }
    let mut a = num.atan2(den).to_degrees();
    let half_turn = T::lit(180.0);
    if a < T::zero() {
        a += half_turn;
    }
    if a >= half_turn {
        a -= half_turn;
    }
    Ok(ThetaPmf::Angle(a))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GvmSolution<T> {
    pub crystal: String,
    pub condition: GvmCondition,
    pub interaction: Interaction,
    pub triple: PhotonTriple<T>,
    pub geometry: Geometry<T>,
    pub theta_pmf: ThetaPmf<T>,
    pub d_eff: DEff<T>,
    /// Schmidt purity at the desk-scale source parameters for the condition.
    pub predicted_purity: Option<T>,
}

pub const LAMBDA_SCAN_STEP_UM: f64 = 0.010;
const RESIDUAL_TARGET: f64 = 1e-12;

/// Default pump search window: the whole transparency window for the pump
/// with the degenerate photons still inside it.
pub fn default_pump_range(record: &CrystalRecord) -> (f64, f64) {
    (record.transparency[0], record.transparency[1] / 2.0)
}

fn scan_points<T: Real>(lo: T, hi: T) -> Vec<T> {
    let step = T::lit(LAMBDA_SCAN_STEP_UM);
    let n = ((hi - lo) / step).ceil().to_usize().unwrap_or(0).max(1);
    (0..=n)
        .map(|i| (lo + step * T::lit(i as f64)).min(hi))
        .collect()
}

/// Scan an outer residual over λ_p and refine every sign change between
/// feasible neighbours.
fn outer_roots<T, F>(f: F, lo: T, hi: T, what: &str) -> Result<Vec<T>>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let xs = scan_points(lo, hi);
    let samples: Vec<Option<T>> = xs.iter().map(|&x| f(x).ok()).collect();
    let feasible: Vec<T> = samples.iter().flatten().copied().collect();
    if feasible.is_empty() {
        return Err(Error::NoSolution(format!(
            "{what}: no feasible pump wavelength in [{lo}, {hi}] um"
        )));
    }
    let mut roots = Vec::new();
    for w in 0..xs.len().saturating_sub(1) {
        let (Some(fa), Some(fb)) = (samples[w], samples[w + 1]) else {
            continue;
        };
        if fa == T::zero() {
            roots.push(xs[w]);
        } else if (fa < T::zero()) != (fb < T::zero()) && fb != T::zero() {
            roots.push(bisect(&f, xs[w], xs[w + 1], fa, fb, T::lit(RESIDUAL_TARGET))?);
        }
    }
    if let Some(Some(last)) = samples.last() {
        if *last == T::zero() {
            roots.push(*xs.last().unwrap());
        }
    }
    if roots.is_empty() {
        let min = feasible.iter().copied().fold(T::infinity(), T::min);
        let max = feasible.iter().copied().fold(T::neg_infinity(), T::max);
        return Err(Error::NoSolution(format!(
            "{what}: residual keeps one sign over [{lo}, {hi}] um, range [{min}, {max}] fs/um"
        )));
    }
    Ok(roots)
}

fn finish<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    condition: GvmCondition,
    triple: PhotonTriple<T>,
    geometry: Geometry<T>,
) -> Result<GvmSolution<T>> {
    let theta = theta_pmf(record, interaction, &geometry, &triple)?;
    let d = d_eff(record, interaction, &geometry, &triple)?;
    let purity = predicted_purity(record, interaction, &geometry, &triple, condition).ok();
    Ok(GvmSolution {
        crystal: record.id.clone(),
        condition,
        interaction: *interaction,
        triple,
        geometry,
        theta_pmf: theta,
        d_eff: d,
        predicted_purity: purity,
    })
}

/// Degenerate BPM solutions where phase matching and `condition` hold together.
/// The first (smallest) phase-matching angle is followed at each pump wavelength.
pub fn solve_gvm_bpm<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    plane: &BpmPlane<T>,
    condition: GvmCondition,
    pump_range: (T, T),
) -> Result<Vec<GvmSolution<T>>> {
    let angle_at = |lp: T| -> Result<T> {
        let triple = PhotonTriple::degenerate(lp);
        Ok(solve_bpm_angle(record, interaction, plane, &triple)?[0])
    };
    let residual = |lp: T| -> Result<T> {
        let geom = plane.geometry(angle_at(lp)?);
        gvm_residual(record, interaction, &geom, &PhotonTriple::degenerate(lp), condition)
    };
    let what = format!("{} {} {}", record.id, interaction.label(), condition);
    outer_roots(residual, pump_range.0, pump_range.1, &what)?
        .into_iter()
        .map(|lp| {
            let geom = plane.geometry(angle_at(lp)?);
            finish(record, interaction, condition, PhotonTriple::degenerate(lp), geom)
        })
        .collect()
}

/// Degenerate QPM solutions; the poling period absorbs the mismatch.
pub fn solve_gvm_qpm<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    condition: GvmCondition,
    pump_range: (T, T),
    order: u32,
) -> Result<Vec<GvmSolution<T>>> {
    let probe = Geometry::Qpm {
        period: T::one(),
        order,
    };
    let residual = |lp: T| {
        gvm_residual(record, interaction, &probe, &PhotonTriple::degenerate(lp), condition)
    };
    let what = format!("{} {} {}", record.id, interaction.label(), condition);
    outer_roots(residual, pump_range.0, pump_range.1, &what)?
        .into_iter()
        .map(|lp| {
            let triple = PhotonTriple::degenerate(lp);
            let period = poling_period(record, interaction, &triple, order)?;
            finish(record, interaction, condition, triple, Geometry::Qpm { period, order })
        })
        .collect()
}

pub const AZIMUTH_STEP_DEG: f64 = 0.5;

/// Uniaxial phase matching does not depend on φ, so the azimuth is free to
/// maximize |d_eff|. Scans [0°, 90°]; keeps the given φ when nothing beats it.
pub fn maximize_azimuth<T: Real>(record: &CrystalRecord, solution: GvmSolution<T>) -> Result<GvmSolution<T>> {
    let Geometry::Uniaxial { theta, phi } = solution.geometry else {
        return Ok(solution);
    };
    let magnitude = |phi: T| -> Result<Option<T>> {
        let geom = Geometry::Uniaxial { theta, phi };
        Ok(d_eff(record, &solution.interaction, &geom, &solution.triple)?
            .value()
            .map(|v| v.abs()))
    };
    let Some(mut best_mag) = magnitude(phi)? else {
        return Ok(solution);
    };
    let mut best = phi;
    let steps = (90.0 / AZIMUTH_STEP_DEG).round() as usize;
    for k in 0..=steps {
        let candidate = T::lit(k as f64 * AZIMUTH_STEP_DEG);
        if let Some(m) = magnitude(candidate)? {
            if m > best_mag * T::lit(1.0 + 1e-9) {
                best_mag = m;
                best = candidate;
            }
        }
    }
    let geometry = Geometry::Uniaxial { theta, phi: best };
    let d = d_eff(record, &solution.interaction, &geometry, &solution.triple)?;
    Ok(GvmSolution {
        geometry,
        d_eff: d,
        ..solution
    })
}
