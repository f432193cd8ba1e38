use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::dispersion::DispersionModel;
use crate::error::{Error, Result};
use crate::optics::{Branch, Interaction, Plane, TypeTag};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OpticalClass {
    #[serde(rename = "uniaxial-positive")]
    UniaxialPositive,
    #[serde(rename = "uniaxial-negative")]
    UniaxialNegative,
    #[serde(rename = "biaxial")]
    Biaxial,
    #[serde(rename = "isotropic")]
    Isotropic,
}

impl OpticalClass {
    pub fn axes(self) -> &'static [&'static str] {
        match self {
            OpticalClass::UniaxialPositive | OpticalClass::UniaxialNegative => &["e", "o"],
            OpticalClass::Biaxial => &["x", "y", "z"],
            OpticalClass::Isotropic => &["n"],
        }
    }

    pub fn is_uniaxial(self) -> bool {
        matches!(
            self,
            OpticalClass::UniaxialPositive | OpticalClass::UniaxialNegative
        )
    }

    pub fn label(self) -> &'static str {
        match self {
            OpticalClass::UniaxialPositive => "uniaxial-positive",
            OpticalClass::UniaxialNegative => "uniaxial-negative",
            OpticalClass::Biaxial => "biaxial",
            OpticalClass::Isotropic => "isotropic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bpm,
    Qpm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearEntry {
    /// Contracted label such as "d31", or a composite such as "d+".
    pub tensor: String,
    /// pm/V, sign preserved.
    pub magnitude: f64,
    /// Measurement wavelength, um.
    pub wavelength: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uncertainty: Option<f64>,
}

/// The interaction a crystal is surveyed with.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InteractionPreset {
    #[serde(rename = "type")]
    pub tag: TypeTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<Plane>,
    pub pump: Branch,
    pub signal: Branch,
    pub idler: Branch,
}

impl InteractionPreset {
    pub fn interaction(&self) -> Interaction {
        Interaction {
            tag: self.tag,
            pump: self.pump,
            signal: self.signal,
            idler: self.idler,
        }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalRecord {
    pub id: String,
    pub formula: String,
    pub optical_class: OpticalClass,
    pub point_group: String,
    pub transparency: [f64; 2],
    pub method: Method,
    /// False when the dispersion data is not a literature model.
    pub golden: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclusion: Option<String>,
    /// Nonlinear data explicitly marked as unavailable.
    #[serde(default, skip_serializing_if = "is_false")]
    pub d_unknown: bool,
    pub references: Vec<String>,
    pub interaction: InteractionPreset,
    pub dispersion: BTreeMap<String, DispersionModel>,
    #[serde(default, rename = "d", skip_serializing_if = "Vec::is_empty")]
    pub d_entries: Vec<NonlinearEntry>,
}

impl CrystalRecord {
    pub fn axis(&self, label: &str) -> Result<&DispersionModel> {
        self.dispersion.get(label).ok_or_else(|| {
            Error::Geometry(format!("{} has no axis `{label}`", self.id))
        })
    }

    /// n(λ) on a principal axis, λ in um.
    pub fn refractive_index<T: Real>(&self, axis: &str, lambda: T) -> Result<T> {
        let what = format!("{} axis {axis}", self.id);
        self.axis(axis)?
            .index_with_slope(lambda, &what)
            .map(|(n, _)| n)
    }

    pub(crate) fn principal<T: Real>(&self, axis: &str, lambda: T, checked: bool) -> Result<(T, T)> {
        let model = self.axis(axis)?;
        if checked {
            let l = lambda.to_f64_lossy();
            if !self.in_transparency(l) {
                return Err(Error::Range {
                    what: format!("{} transparency", self.id),
                    lambda: l,
                    lo: self.transparency[0],
                    hi: self.transparency[1],
                });
            }
            model.index_with_slope(lambda, &format!("{} axis {axis}", self.id))
        } else {
            model.index_with_slope_unchecked(lambda)
        }
    }

    pub fn in_transparency(&self, lambda: f64) -> bool {
        lambda >= self.transparency[0] && lambda <= self.transparency[1]
    }

    /// Pass/fail per wavelength; the window is inclusive.
    pub fn transparency_check(&self, lambdas: &[f64]) -> Vec<bool> {
        lambdas.iter().map(|&l| self.in_transparency(l)).collect()
    }

    pub fn is_excluded(&self) -> bool {
        !self.golden
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |message: String| Error::Validation {
            record: self.id.clone(),
            message,
        };
        let [lo, hi] = self.transparency;
        if !(lo > 0.0 && lo < hi) {
            return Err(fail(format!("transparency [{lo}, {hi}] is not an interval above zero")));
        }
        let expected = self.optical_class.axes();
        let have: Vec<&str> = self.dispersion.keys().map(String::as_str).collect();
        if have != expected {
            return Err(fail(format!(
                "{} record needs axes {:?}, found {:?}",
                self.optical_class.label(),
                expected,
                have
            )));
        }
        if !self.golden && self.exclusion.is_none() {
            return Err(fail("non-golden record must state its exclusion".into()));
        }
        for (axis, model) in &self.dispersion {
            if model.valid_range[0] > lo || model.valid_range[1] < hi {
                return Err(fail(format!(
                    "axis {axis} valid range {:?} does not cover the transparency window",
                    model.valid_range
                )));
            }
            for i in 0..200 {
                let l = lo + (hi - lo) * i as f64 / 199.0;
                match model.index_with_slope_unchecked(l) {
                    Ok((n, _)) if n.is_finite() && n >= 1.0 => {}
                    Ok((n, _)) => {
                        return Err(fail(format!("axis {axis}: n = {n} at {l} um")));
                    }
                    Err(e) => return Err(fail(format!("axis {axis}: {e}"))),
                }
            }
        }
        for entry in &self.d_entries {
            if !(entry.wavelength > 0.0) {
                return Err(fail(format!("{} has a non-positive wavelength", entry.tensor)));
            }
        }
        let p = &self.interaction;
        for b in [p.pump, p.signal, p.idler] {
            if !b.valid_for(self.optical_class) {
                return Err(fail(format!(
                    "branch {} is not valid for a {} crystal",
                    b.label(),
                    self.optical_class.label()
                )));
            }
        }
        p.interaction().validate().map_err(|e| fail(e.to_string()))?;
        if self.optical_class == OpticalClass::Biaxial
            && self.method == Method::Bpm
            && p.plane.is_none()
        {
            return Err(fail("biaxial BPM preset needs a principal plane".into()));
        }
        Ok(())
    }
}
