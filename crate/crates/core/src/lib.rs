//! Group-velocity-matched spontaneous parametric down-conversion.
//!
//! Crystal dispersion and nonlinear data, birefringent and quasi phase
//! matching, GVM solvers, joint spectral amplitudes with Schmidt purity, and
//! Hong-Ou-Mandel interference. Units: micrometers, femtoseconds, rad/fs.
//!
//! Numerical routines are generic over [`Real`] (`f32` or `f64`); the `*64`
//! and `*32` aliases name the common instantiations.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod crystal;
pub mod error;
pub mod gvm;
pub mod hom;
pub mod jsa;
pub mod nonlinear;
pub mod optics;
pub mod phasematch;
pub mod roots;
pub mod scalar;
pub mod survey;

pub use crystal::{CrystalRecord, DispersionModel, Method, NonlinearEntry, OpticalClass, Registry, Term};
pub use error::{Error, Result};
pub use gvm::{GvmCondition, GvmSolution, ThetaPmf};
pub use hom::{HomTrace, Interfere};
pub use jsa::{GridSpec, JsaGrid, PumpSpec, Span};
pub use nonlinear::DEff;
pub use optics::{Branch, Geometry, Interaction, Plane, TypeTag};
pub use phasematch::{BpmPlane, PhotonTriple};
pub use scalar::{Real, C_UM_PER_FS};

pub type Geometry64 = Geometry<f64>;
pub type Geometry32 = Geometry<f32>;
pub type PhotonTriple64 = PhotonTriple<f64>;
pub type PhotonTriple32 = PhotonTriple<f32>;
pub type GvmSolution64 = GvmSolution<f64>;
pub type GvmSolution32 = GvmSolution<f32>;
pub type JsaGrid64 = JsaGrid<f64>;
pub type JsaGrid32 = JsaGrid<f32>;
pub type PumpSpec64 = PumpSpec<f64>;
pub type PumpSpec32 = PumpSpec<f32>;
pub type HomTrace64 = HomTrace<f64>;
pub type HomTrace32 = HomTrace<f32>;
