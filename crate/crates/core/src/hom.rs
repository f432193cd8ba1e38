//! Two-fold and heralded four-fold Hong-Ou-Mandel interference.
//!
//! Grids are uniform in wavelength, so every sample carries the frequency
//! weight δω = 2πc·δλ/λ² before the amplitude is renormalized.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::jsa::{argmax, marginals_fwhm, width_at_level, JsaGrid};
use crate::scalar::{omega, Real, C_UM_PER_FS};

#[derive(Clone, Debug, PartialEq)]
pub struct HomTrace<T> {
    /// fs
    pub delays: Vec<T>,
    pub probability: Vec<T>,
    pub visibility: T,
    /// fs; `None` when the trace has no dip.
    pub fwhm: Option<T>,
}

/// Which photons meet at the beamsplitter in the four-fold experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interfere {
    /// Signals interfere, idlers herald.
    Signals,
    /// Idlers interfere, signals herald.
    Idlers,
}

pub const DEFAULT_DELAYS: usize = 201;
pub const DELAY_HALF_SPAN_WIDTHS: f64 = 5.0;

fn frequencies<T: Real>(axis: &[T]) -> Vec<T> {
    axis.iter().map(|&l| omega(l)).collect()
}

fn riemann_weights<T: Real>(axis: &[T]) -> Vec<T> {
    let step = (axis[axis.len() - 1] - axis[0]) / T::lit((axis.len() - 1) as f64);
    let two_pi_c = T::lit(2.0) * T::PI() * T::lit(C_UM_PER_FS);
    axis.iter().map(|&l| two_pi_c * step / (l * l)).collect()
}

/// Amplitude with √(δω_s δω_i) folded in, renormalized to unit Frobenius norm.
pub fn weighted_amplitude<T: Real>(grid: &JsaGrid<T>) -> DMatrix<T> {
    let ws = riemann_weights(&grid.signal_axis);
    let wi = riemann_weights(&grid.idler_axis);
    let g = DMatrix::from_fn(grid.n_signal(), grid.n_idler(), |a, b| {
        grid.amplitude[(a, b)] * (ws[a] * wi[b]).sqrt()
    });
    let norm = g.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt();
    g / norm
}

/// ½ − ½ Σ_ab K[a,b] cos((ω_b − ω_a)τ) for every delay, using
/// cos(ω_bτ − ω_aτ) = cᵃcᵇ + sᵃsᵇ.
fn cross_trace<T: Real>(kernel: &DMatrix<T>, w: &[T], delays: &[T]) -> Vec<T> {
    let half = T::lit(0.5);
    delays
        .par_iter()
        .map(|&tau| {
            let c = DVector::from_iterator(w.len(), w.iter().map(|&x| (x * tau).cos()));
            let s = DVector::from_iterator(w.len(), w.iter().map(|&x| (x * tau).sin()));
            let kc = kernel * &c;
            let ks = kernel * &s;
            let cross = c.dot(&kc) + s.dot(&ks);
            half - half * cross
        })
        .collect()
}

fn trace_from<T: Real>(delays: &[T], probability: Vec<T>) -> HomTrace<T> {
    let (visibility, fwhm) = extract_visibility_fwhm(delays, &probability);
    HomTrace {
        delays: delays.to_vec(),
        probability,
        visibility,
        fwhm,
    }
}

/// Two-fold coincidence probability between signal and idler of one source.
pub fn two_fold_trace<T: Real>(grid: &JsaGrid<T>, delays: &[T]) -> Result<HomTrace<T>> {
    if !grid.has_identical_axes() {
        return Err(Error::Axis(
            "two-fold interference needs identical signal and idler axes".into(),
        ));
    }
    let g = weighted_amplitude(grid);
    let kernel = g.component_mul(&g.transpose());
    let w = frequencies(&grid.signal_axis);
    Ok(trace_from(delays, cross_trace(&kernel, &w, delays)))
}

/// Heralded four-fold coincidence probability between two sources.
///
/// With M = g gᵀ summed over the heralding axis, the interference term is
/// Σ_ab M₁[b,a] M₂[a,b] cos((ω_b − ω_a)τ), costing O(N³) once and O(N²)
/// per delay.
pub fn four_fold_trace<T: Real>(
    grid1: &JsaGrid<T>,
    grid2: &JsaGrid<T>,
    delays: &[T],
    which: Interfere,
) -> Result<HomTrace<T>> {
    let (a1, a2);
    let (g1, g2) = match which {
        Interfere::Signals => (grid1, grid2),
        Interfere::Idlers => {
            a1 = grid1.transposed();
            a2 = grid2.transposed();
            (&a1, &a2)
        }
    };
    if g1.signal_axis != g2.signal_axis {
        return Err(Error::Axis(
            "the interfering axes of the two grids must be identical samplings".into(),
        ));
    }
    let f1 = weighted_amplitude(g1);
    let f2 = weighted_amplitude(g2);
    let m1 = &f1 * f1.transpose();
    let m2 = &f2 * f2.transpose();
    let kernel = m1.transpose().component_mul(&m2);
    let w = frequencies(&g1.signal_axis);
    Ok(trace_from(delays, cross_trace(&kernel, &w, delays)))
}

/// 201 delays over ±5 dip widths, the width estimated as 4 ln2/Δω. The span
/// stops at half the revival period 2π/δω of the sampled spectrum, past which
/// the trace repeats and the plateau would be misread.
fn delays_for_bandwidth<T: Real>(delta_omega: T, alias_free: T, n: usize) -> Vec<T> {
    let width = T::lit(4.0) * T::LN_2() / delta_omega;
    let half = (T::lit(DELAY_HALF_SPAN_WIDTHS) * width).min(alias_free);
    crate::jsa::linspace(-half, half, n)
}

fn axis_bandwidth<T: Real>(axis: &[T], fwhm: Option<T>) -> T {
    let center = axis[axis.len() / 2];
    let dl = fwhm.unwrap_or(axis[axis.len() - 1] - axis[0]);
    T::lit(2.0) * T::PI() * T::lit(C_UM_PER_FS) * dl / (center * center)
}

/// π/δω for the coarsest frequency step on the axis.
fn alias_free_delay<T: Real>(axis: &[T]) -> T {
    let step = riemann_weights(axis).into_iter().fold(T::zero(), T::max);
    T::PI() / step
}

pub fn default_two_fold_delays<T: Real>(grid: &JsaGrid<T>) -> Vec<T> {
    let m = marginals_fwhm(grid);
    let ds = axis_bandwidth(&grid.signal_axis, m.fwhm_signal);
    let di = axis_bandwidth(&grid.idler_axis, m.fwhm_idler);
    let limit = alias_free_delay(&grid.signal_axis).min(alias_free_delay(&grid.idler_axis));
    delays_for_bandwidth((ds * ds + di * di).sqrt(), limit, DEFAULT_DELAYS)
}

pub fn default_four_fold_delays<T: Real>(grid: &JsaGrid<T>, which: Interfere) -> Vec<T> {
    let m = marginals_fwhm(grid);
    let (dw, limit) = match which {
        Interfere::Signals => (
            axis_bandwidth(&grid.signal_axis, m.fwhm_signal),
            alias_free_delay(&grid.signal_axis),
        ),
        Interfere::Idlers => (
            axis_bandwidth(&grid.idler_axis, m.fwhm_idler),
            alias_free_delay(&grid.idler_axis),
        ),
    };
    delays_for_bandwidth(dw, limit, DEFAULT_DELAYS)
}

pub const PLATEAU_FRACTION: f64 = 0.10;

/// Visibility (P_plateau − P_min)/P_plateau and dip FWHM.
///
/// The plateau is the mean over the outer 10% of delays, the minimum is
/// refined with a parabola through the lowest sample and its neighbours, and
/// the FWHM is taken at half depth by linear interpolation. A trace whose
/// lowest sample sits on an end, or that never drops, has no dip.
pub fn extract_visibility_fwhm<T: Real>(delays: &[T], probability: &[T]) -> (T, Option<T>) {
    let n = probability.len();
    if n < 3 || delays.len() != n {
        return (T::zero(), None);
    }
    let k = ((n as f64 * PLATEAU_FRACTION / 2.0).round() as usize).max(1);
    let outer = probability[..k].iter().chain(&probability[n - k..]);
    let plateau = outer.fold(T::zero(), |a, &b| a + b) / T::lit((2 * k) as f64);

    let depth: Vec<T> = probability.iter().map(|&p| plateau - p).collect();
    let Some(i) = argmax(&depth) else {
        return (T::zero(), None);
    };
    if i == 0 || i == n - 1 || !(depth[i] > T::zero()) || !(plateau > T::zero()) {
        return (T::zero(), None);
    }
    let (y0, y1, y2) = (probability[i - 1], probability[i], probability[i + 1]);
    let curv = y0 - T::lit(2.0) * y1 + y2;
    let p_min = if curv > T::zero() {
        (y1 - (y0 - y2) * (y0 - y2) / (T::lit(8.0) * curv)).min(y1)
    } else {
        y1
    };
    let visibility = (plateau - p_min) / plateau;
    let fwhm = width_at_level(delays, &depth, i, (plateau - p_min) / T::lit(2.0));
    (visibility, fwhm)
}
