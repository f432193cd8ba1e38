//! Angle-dependent indices, group indices and polarization directions.
//!
//! Angles are in degrees, wavelengths in micrometers, inverse group
//! velocities in fs/um.

use serde::{Deserialize, Serialize};

use crate::crystal::{CrystalRecord, OpticalClass};
use crate::error::{Error, Result};
use crate::scalar::{rad, Real, C_UM_PER_FS};

/// Polarization branch of one wave.
///
/// `X`, `Y` and `Z` select a principal axis directly and are used for
/// quasi-phase-matching along a principal axis of a biaxial crystal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    #[serde(rename = "o")]
    O,
    #[serde(rename = "e")]
    E,
    #[serde(rename = "in-plane")]
    InPlane,
    #[serde(rename = "normal")]
    Normal,
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
    #[serde(rename = "z")]
    Z,
    #[serde(rename = "n")]
    N,
}

impl Branch {
    pub fn label(self) -> &'static str {
        match self {
            Branch::O => "o",
            Branch::E => "e",
            Branch::InPlane => "in-plane",
            Branch::Normal => "normal",
            Branch::X => "x",
            Branch::Y => "y",
            Branch::Z => "z",
            Branch::N => "n",
        }
    }

    pub fn valid_for(self, class: OpticalClass) -> bool {
        match class {
            OpticalClass::UniaxialPositive | OpticalClass::UniaxialNegative => {
                matches!(self, Branch::O | Branch::E)
            }
            OpticalClass::Biaxial => matches!(
                self,
                Branch::InPlane | Branch::Normal | Branch::X | Branch::Y | Branch::Z
            ),
            OpticalClass::Isotropic => self == Branch::N,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    Xy,
    Xz,
    Yz,
}

impl Plane {
    pub fn label(self) -> &'static str {
        match self {
            Plane::Xy => "xy",
            Plane::Xz => "xz",
            Plane::Yz => "yz",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TypeTag {
    #[serde(rename = "type-0")]
    Type0,
    #[serde(rename = "type-I")]
    TypeI,
    #[serde(rename = "type-II")]
    TypeII,
}

impl TypeTag {
    pub fn label(self) -> &'static str {
        match self {
            TypeTag::Type0 => "type-0",
            TypeTag::TypeI => "type-I",
            TypeTag::TypeII => "type-II",
        }
    }
}

/// Polarization assignment for pump, signal and idler.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interaction {
    pub tag: TypeTag,
    pub pump: Branch,
    pub signal: Branch,
    pub idler: Branch,
}

impl Interaction {
    pub fn new(tag: TypeTag, pump: Branch, signal: Branch, idler: Branch) -> Result<Self> {
        let it = Self {
            tag,
            pump,
            signal,
            idler,
        };
        it.validate()?;
        Ok(it)
    }

    pub fn validate(&self) -> Result<()> {
        match self.tag {
            TypeTag::Type0 if !(self.pump == self.signal && self.signal == self.idler) => Err(
                Error::Geometry("type-0 needs identical branches for all three waves".into()),
            ),
            TypeTag::TypeII if self.signal == self.idler => Err(Error::Geometry(
                "type-II needs different signal and idler branches".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Same interaction with the signal and idler labels exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            signal: self.idler,
            idler: self.signal,
            ..*self
        }
    }

    pub fn label(&self) -> String {
        format!(
            "{} {}->{}+{}",
            self.tag.label(),
            self.pump.label(),
            self.signal.label(),
            self.idler.label()
        )
    }
}

/// Propagation geometry. Angles in degrees, period in micrometers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Geometry<T> {
    /// Uniaxial birefringent phase matching at polar angle θ and azimuth φ.
    Uniaxial { theta: T, phi: T },
    /// Biaxial phase matching in a principal plane. The angle is φ for the
    /// xy plane (θ = 90°) and θ for the xz (φ = 0°) and yz (φ = 90°) planes.
    BiaxialPlane { plane: Plane, angle: T },
    /// Quasi-phase matching with propagation along a principal axis
    /// (perpendicular to the optic axis for uniaxial crystals).
    Qpm { period: T, order: u32 },
}

impl<T: Real> Geometry<T> {
    pub fn validate(&self) -> Result<()> {
        let in_quadrant = |a: T| a >= T::zero() && a <= T::lit(90.0);
        match *self {
            Geometry::Uniaxial { theta, phi } => {
                if in_quadrant(theta) && in_quadrant(phi) {
                    Ok(())
                } else {
                    Err(Error::Geometry(format!("angles ({theta}, {phi}) outside [0, 90] deg")))
                }
            }
            Geometry::BiaxialPlane { angle, .. } => {
                if in_quadrant(angle) {
                    Ok(())
                } else {
                    Err(Error::Geometry(format!("angle {angle} outside [0, 90] deg")))
                }
            }
            Geometry::Qpm { period, order } => {
                if !(period > T::zero()) {
                    Err(Error::Geometry(format!("poling period {period} must be positive")))
                } else if order == 0 || order % 2 == 0 {
                    Err(Error::Geometry(format!("QPM order {order} must be odd and positive")))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// The BPM angle, or `None` for QPM.
    pub fn angle(&self) -> Option<T> {
        match *self {
            Geometry::Uniaxial { theta, .. } => Some(theta),
            Geometry::BiaxialPlane { angle, .. } => Some(angle),
            Geometry::Qpm { .. } => None,
        }
    }

    pub fn period(&self) -> Option<T> {
        match *self {
            Geometry::Qpm { period, .. } => Some(period),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> Geometry<f64> {
        match *self {
            Geometry::Uniaxial { theta, phi } => Geometry::Uniaxial {
                theta: theta.to_f64_lossy(),
                phi: phi.to_f64_lossy(),
            },
            Geometry::BiaxialPlane { plane, angle } => Geometry::BiaxialPlane {
                plane,
                angle: angle.to_f64_lossy(),
            },
            Geometry::Qpm { period, order } => Geometry::Qpm {
                period: period.to_f64_lossy(),
                order,
            },
        }
    }
}

/// Combine two principal indices on an index ellipse:
/// 1/n² = a/n1² + b/n2², returning n and dn/dλ.
fn ellipse<T: Real>((n1, d1): (T, T), (n2, d2): (T, T), a: T, b: T) -> (T, T) {
    let inv = a / (n1 * n1) + b / (n2 * n2);
    let n = T::one() / inv.sqrt();
    let dn = n * n * n * (a * d1 / (n1 * n1 * n1) + b * d2 / (n2 * n2 * n2));
    (n, dn)
}

fn mismatch(record: &CrystalRecord, branch: Branch, what: &str) -> Error {
    Error::Geometry(format!(
        "branch {} is not available for {} ({}) in {what}",
        branch.label(),
        record.id,
        record.optical_class.label()
    ))
}

pub(crate) fn index_with_slope_impl<T: Real>(
    record: &CrystalRecord,
    geometry: &Geometry<T>,
    branch: Branch,
    lambda: T,
    checked: bool,
) -> Result<(T, T)> {
    if !branch.valid_for(record.optical_class) {
        return Err(mismatch(record, branch, "this crystal"));
    }
    let p = |axis: &str| record.principal(axis, lambda, checked);
    match (record.optical_class, branch) {
        (OpticalClass::Isotropic, _) => p("n"),
        (_, Branch::O) => p("o"),
        (_, Branch::X) => p("x"),
        (_, Branch::Y) => p("y"),
        (_, Branch::Z) => p("z"),
        (_, Branch::E) => match *geometry {
            Geometry::Uniaxial { theta, .. } => {
                let t = rad(theta);
                let (c, s) = (t.cos(), t.sin());
                Ok(ellipse(p("o")?, p("e")?, c * c, s * s))
            }
            Geometry::Qpm { .. } => p("e"),
            Geometry::BiaxialPlane { .. } => Err(mismatch(record, branch, "a biaxial plane geometry")),
        },
        (_, Branch::InPlane) | (_, Branch::Normal) => {
            let Geometry::BiaxialPlane { plane, angle } = *geometry else {
                return Err(mismatch(record, branch, "a non-planar geometry"));
            };
            let a = rad(angle);
            let (c, s) = (a.cos(), a.sin());
            match (plane, branch) {
                (Plane::Xy, Branch::Normal) => p("z"),
                (Plane::Xz, Branch::Normal) => p("y"),
                (Plane::Yz, Branch::Normal) => p("x"),
                (Plane::Xy, _) => Ok(ellipse(p("y")?, p("x")?, c * c, s * s)),
                (Plane::Xz, _) => Ok(ellipse(p("x")?, p("z")?, c * c, s * s)),
                (Plane::Yz, _) => Ok(ellipse(p("y")?, p("z")?, c * c, s * s)),
            }
        }
        (_, Branch::N) => Err(mismatch(record, branch, "this crystal")),
    }
}

/// Refractive index seen by `branch` at wavelength `lambda` (um).
pub fn index_at<T: Real>(
    record: &CrystalRecord,
    geometry: &Geometry<T>,
    branch: Branch,
    lambda: T,
) -> Result<T> {
    index_with_slope_impl(record, geometry, branch, lambda, true).map(|(n, _)| n)
}

/// dn/dλ at fixed angles, per um.
pub fn index_slope<T: Real>(
    record: &CrystalRecord,
    geometry: &Geometry<T>,
    branch: Branch,
    lambda: T,
) -> Result<T> {
    index_with_slope_impl(record, geometry, branch, lambda, true).map(|(_, d)| d)
}

/// Group index n − λ dn/dλ at fixed angles.
pub fn group_index<T: Real>(
    record: &CrystalRecord,
    geometry: &Geometry<T>,
    branch: Branch,
    lambda: T,
) -> Result<T> {
    let (n, d) = index_with_slope_impl(record, geometry, branch, lambda, true)?;
    Ok(n - lambda * d)
}

/// Inverse group velocity n_g / c in fs/um.
pub fn inverse_group_velocity<T: Real>(
    record: &CrystalRecord,
    geometry: &Geometry<T>,
    branch: Branch,
    lambda: T,
) -> Result<T> {
    Ok(group_index(record, geometry, branch, lambda)? / T::lit(C_UM_PER_FS))
}

/// Unit electric-field direction in the crystal frame, ignoring walk-off.
///
/// Isotropic crystals are poled for fields along [111], the usual
/// orientation for orientation-patterned zinc-blende materials.
pub fn polarization_vector<T: Real>(
    record: &CrystalRecord,
    geometry: &Geometry<T>,
    branch: Branch,
) -> Result<[T; 3]> {
    if !branch.valid_for(record.optical_class) {
        return Err(mismatch(record, branch, "this crystal"));
    }
    let (z, one) = (T::zero(), T::one());
    if record.optical_class == OpticalClass::Isotropic {
        let a = T::one() / T::lit(3.0).sqrt();
        return Ok([a, a, a]);
    }
    match branch {
        Branch::X => return Ok([one, z, z]),
        Branch::Y => return Ok([z, one, z]),
        Branch::Z => return Ok([z, z, one]),
        _ => {}
    }
    let (theta, phi) = match *geometry {
        Geometry::Uniaxial { theta, phi } => (rad(theta), rad(phi)),
        Geometry::Qpm { .. } => (T::FRAC_PI_2(), z),
        Geometry::BiaxialPlane { plane, angle } => {
            let a = rad(angle);
            let (c, s) = (a.cos(), a.sin());
            return match (plane, branch) {
                (Plane::Xy, Branch::Normal) => Ok([z, z, one]),
                (Plane::Xz, Branch::Normal) => Ok([z, one, z]),
                (Plane::Yz, Branch::Normal) => Ok([one, z, z]),
                (Plane::Xy, Branch::InPlane) => Ok([-s, c, z]),
                (Plane::Xz, Branch::InPlane) => Ok([c, z, -s]),
                (Plane::Yz, Branch::InPlane) => Ok([z, c, -s]),
                _ => Err(mismatch(record, branch, "a biaxial plane geometry")),
            };
        }
    };
    match branch {
        Branch::O => Ok([phi.sin(), -phi.cos(), z]),
        Branch::E => Ok([theta.cos() * phi.cos(), theta.cos() * phi.sin(), -theta.sin()]),
        _ => Err(mismatch(record, branch, "this geometry")),
    }
}
