//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point type the physics kernels are written against.
///
/// Implemented for `f32` and `f64`. Registry data is stored as `f64` and
/// converted on use, so `f32` trades accuracy for memory in large grids.
pub trait Real:
    Float + FloatConst + NumAssign + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Convert an `f64` literal or registry value.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Speed of light in micrometers per femtosecond.
pub const C_UM_PER_FS: f64 = 0.299_792_458;

/// Angular frequency (rad/fs) of light with vacuum wavelength `lambda_um`.
#[inline]
pub fn omega<T: Real>(lambda_um: T) -> T {
    T::lit(2.0) * T::PI() * T::lit(C_UM_PER_FS) / lambda_um
}

/// Vacuum wavelength (um) for angular frequency `w` in rad/fs.
#[inline]
pub fn wavelength<T: Real>(w: T) -> T {
    T::lit(2.0) * T::PI() * T::lit(C_UM_PER_FS) / w
}

#[inline]
pub fn deg<T: Real>(rad: T) -> T {
    rad.to_degrees()
}

#[inline]
pub fn rad<T: Real>(deg: T) -> T {
    deg.to_radians()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_round_trips() {
        let w = omega(1.55_f64);
        assert!((wavelength(w) - 1.55).abs() < 1e-14);
        let w32 = omega(1.55_f32);
        assert!((wavelength(w32) - 1.55).abs() < 1e-5);
    }
}
