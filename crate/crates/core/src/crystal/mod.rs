//! Crystal registry: dispersion models, transparency windows and nonlinear data.

mod dispersion;
mod record;
mod registry;

pub use dispersion::{DispersionModel, Provenance, Term};
pub use record::{CrystalRecord, InteractionPreset, Method, NonlinearEntry, OpticalClass};
pub use registry::{Registry, BUNDLED, SCHEMA_VERSION};
