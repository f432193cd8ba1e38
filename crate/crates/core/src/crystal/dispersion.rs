use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// One additive contribution to n²(λ), λ in micrometers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Term {
    /// A
    Constant { a: f64 },
    /// B / (λ² − C)
    Pole { b: f64, c: f64 },
    /// B λ² / (λ² − C)
    Resonance { b: f64, c: f64 },
    /// D λ^k
    Power { d: f64, k: i32 },
}

/// How a model's coefficients were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Copied digit for digit from the cited publication.
    Verbatim,
    /// Taken from a handbook reproduction of the cited form.
    Transcribed,
    /// Representative values with no published source; not a literature model.
    Approximate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionModel {
    pub source: String,
    pub provenance: Provenance,
    pub valid_range: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_range: Option<[f64; 2]>,
    pub terms: Vec<Term>,
}

const POLE_GUARD: f64 = 1e-12;

impl DispersionModel {
    pub fn new(terms: Vec<Term>, valid_range: [f64; 2]) -> Self {
        Self {
            source: String::new(),
            provenance: Provenance::Approximate,
            valid_range,
            fit_range: None,
            terms,
        }
    }

    pub fn contains(&self, lambda: f64) -> bool {
        lambda >= self.valid_range[0] && lambda <= self.valid_range[1]
    }

    /// n² and d(n²)/dλ without the range check.
    pub fn n2_with_slope<T: Real>(&self, lambda: T) -> Result<(T, T)> {
        let l2 = lambda * lambda;
        let two = T::lit(2.0);
        let mut n2 = T::zero();
        let mut dn2 = T::zero();
        for term in &self.terms {
            match *term {
                Term::Constant { a } => n2 += T::lit(a),
                Term::Pole { b, c } | Term::Resonance { b, c } => {
                    let (b, c) = (T::lit(b), T::lit(c));
                    let den = l2 - c;
                    if den.abs() < T::lit(POLE_GUARD) {
                        return Err(Error::ModelIntegrity(format!(
                            "lambda = {lambda} um sits on a pole at C = {c}"
                        )));
                    }
                    if matches!(term, Term::Pole { .. }) {
                        n2 += b / den;
                        dn2 -= two * b * lambda / (den * den);
                    } else {
                        n2 += b * l2 / den;
                        dn2 -= two * b * c * lambda / (den * den);
                    }
                }
                Term::Power { d, k } => {
                    let d = T::lit(d);
                    n2 += d * lambda.powi(k);
                    dn2 += d * T::lit(k as f64) * lambda.powi(k - 1);
                }
            }
        }
        Ok((n2, dn2))
    }

    /// n and dn/dλ without the range check; used for Miller extrapolation.
    pub fn index_with_slope_unchecked<T: Real>(&self, lambda: T) -> Result<(T, T)> {
        let (n2, dn2) = self.n2_with_slope(lambda)?;
        if !(n2 > T::zero()) {
            return Err(Error::ModelIntegrity(format!(
                "n^2 = {n2} is not positive at {lambda} um"
            )));
        }
        let n = n2.sqrt();
        Ok((n, dn2 / (T::lit(2.0) * n)))
    }

    pub fn index_with_slope<T: Real>(&self, lambda: T, what: &str) -> Result<(T, T)> {
        let l = lambda.to_f64_lossy();
        if !self.contains(l) {
            return Err(Error::Range {
                what: what.to_string(),
                lambda: l,
                lo: self.valid_range[0],
                hi: self.valid_range[1],
            });
        }
        self.index_with_slope_unchecked(lambda)
    }

    pub fn index<T: Real>(&self, lambda: T) -> Result<T> {
        self.index_with_slope(lambda, "dispersion model").map(|(n, _)| n)
    }

    pub fn dn_dlambda<T: Real>(&self, lambda: T) -> Result<T> {
        self.index_with_slope(lambda, "dispersion model").map(|(_, d)| d)
    }

    /// n_g = n − λ dn/dλ
    pub fn group_index<T: Real>(&self, lambda: T) -> Result<T> {
        let (n, d) = self.index_with_slope(lambda, "dispersion model")?;
        Ok(n - lambda * d)
    }
}
