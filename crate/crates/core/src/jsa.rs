//! Pump envelope, phase-matching function, joint spectral amplitude grids,
//! marginal spectra and Schmidt purity.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::crystal::CrystalRecord;
use crate::error::{Error, Result};
use crate::gvm::GvmCondition;
use crate::optics::{Geometry, Interaction};
use crate::phasematch::{bulk_mismatch, PhotonTriple};
use crate::scalar::{omega, Real, C_UM_PER_FS};

/// Gaussian pump: central wavelength and bandwidth parameter, both in um.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PumpSpec<T> {
    pub center: T,
    /// Δλ; the intensity FWHM is 2√ln2·Δλ ≈ 1.67 Δλ.
    pub bandwidth: T,
}

impl<T: Real> PumpSpec<T> {
    pub fn new(center: T, bandwidth: T) -> Result<Self> {
        if !(center > T::zero()) || !(bandwidth > T::zero()) || !(bandwidth < center) {
            return Err(Error::Grid(format!(
                "pump bandwidth {bandwidth} um must be positive and below the centre {center} um"
            )));
        }
        Ok(Self { center, bandwidth })
    }

    /// σ_p in rad/fs: the angular-frequency width spanned by λ₀ ± Δλ/2.
    pub fn sigma(&self) -> T {
        let two_pi_c = T::lit(2.0) * T::PI() * T::lit(C_UM_PER_FS);
        let l = self.center;
        let d = self.bandwidth;
        two_pi_c * d / (l * l - d * d / T::lit(4.0))
    }

    /// Intensity FWHM in um.
    pub fn intensity_fwhm(&self) -> T {
        T::lit(2.0) * T::LN_2().sqrt() * self.bandwidth
    }

    /// Intensity FWHM mapped onto a down-converted axis centred at `lambda`.
    fn mapped_fwhm(&self, lambda: T) -> T {
        let r = lambda / self.center;
        self.intensity_fwhm() * r * r
    }
}

/// Pump envelope exp(−½((ω_s + ω_i − ω_p0)/σ_p)²).
pub fn pump_envelope<T: Real>(pump: &PumpSpec<T>, signal: T, idler: T) -> T {
    let x = (omega(signal) + omega(idler) - omega(pump.center)) / pump.sigma();
    (-x * x / T::lit(2.0)).exp()
}

/// sin(x)/x with the removable singularity filled.
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-8) {
        T::one() - x * x / T::lit(6.0)
    } else {
        x.sin() / x
    }
}

/// sinc(Δk L/2) with the pump wavelength fixed by energy conservation.
///
/// For QPM the grating is subtracted from |k_p − k_s − k_i|, so the result
/// does not depend on the sign the bulk mismatch carries.
pub fn phase_matching_function<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    geometry: &Geometry<T>,
    length_mm: T,
    signal: T,
    idler: T,
) -> Result<T> {
    let triple = PhotonTriple::from_signal_idler(signal, idler);
    let bulk = bulk_mismatch(record, interaction, geometry, &triple)?;
    let dk = match *geometry {
        Geometry::Qpm { period, order } => {
            bulk.abs() - T::lit(2.0) * T::PI() * T::lit(order as f64) / period
        }
        _ => bulk,
    };
    let l_um = length_mm * T::lit(1000.0);
    Ok(sinc(dk * l_um / T::lit(2.0)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Span<T> {
    /// Grow windows until the boundary intensity is negligible.
    Auto,
    /// Full widths of the signal and idler windows, um.
    Explicit { signal: T, idler: T },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec<T> {
    pub n: usize,
    pub signal_center: T,
    pub idler_center: T,
    pub span: Span<T>,
    /// Force identical signal and idler axes (needed for two-fold HOM).
    pub square: bool,
}

pub const DEFAULT_GRID: usize = 200;
pub const MIN_GRID: usize = 16;
pub const EDGE_FRACTION: f64 = 1e-4;
pub const SPAN_GROWTH: f64 = 1.25;
pub const SPAN_CAP_FWHM: f64 = 40.0;

impl<T: Real> GridSpec<T> {
    /// Auto-spanned N×N grid centred on a degenerate point.
    pub fn degenerate(pump: T, n: usize) -> Self {
        let c = T::lit(2.0) * pump;
        Self {
            n,
            signal_center: c,
            idler_center: c,
            span: Span::Auto,
            square: false,
        }
    }

    pub fn with_span(mut self, span: Span<T>) -> Self {
        self.span = span;
        self
    }

    pub fn square(mut self, square: bool) -> Self {
        self.square = square;
        self
    }
}

/// How a grid was produced.
#[derive(Clone, Debug, PartialEq)]
pub struct JsaSource<T> {
    pub crystal: String,
    pub interaction: Interaction,
    pub geometry: Geometry<T>,
    pub length_mm: T,
    pub pump: PumpSpec<T>,
}

/// Real joint spectral amplitude; rows follow the signal axis, columns the idler.
#[derive(Clone, Debug, PartialEq)]
pub struct JsaGrid<T: Real> {
    pub signal_axis: Vec<T>,
    pub idler_axis: Vec<T>,
    pub amplitude: DMatrix<T>,
    pub source: Option<JsaSource<T>>,
}

pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![lo];
    }
    let last = T::lit((n - 1) as f64);
    (0..n)
        .map(|i| lo + (hi - lo) * T::lit(i as f64) / last)
        .collect()
}

fn check_axis<T: Real>(name: &str, axis: &[T]) -> Result<()> {
    if axis.len() < 2 {
        return Err(Error::Axis(format!("{name} axis needs at least two samples")));
    }
    let step = axis[1] - axis[0];
    if !(step > T::zero()) {
        return Err(Error::Axis(format!("{name} axis must be strictly increasing")));
    }
    let tol = T::epsilon().sqrt() * step;
    for w in axis.windows(2) {
        if ((w[1] - w[0]) - step).abs() > tol {
            return Err(Error::Axis(format!("{name} axis must be uniformly spaced")));
        }
    }
    Ok(())
}

fn frobenius<T: Real>(m: &DMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, &x| acc + x * x).sqrt()
}

impl<T: Real> JsaGrid<T> {
    /// Wrap an amplitude matrix with its axes and normalize it.
    pub fn from_amplitude(signal_axis: Vec<T>, idler_axis: Vec<T>, amplitude: DMatrix<T>) -> Result<Self> {
        check_axis("signal", &signal_axis)?;
        check_axis("idler", &idler_axis)?;
        if amplitude.nrows() != signal_axis.len() || amplitude.ncols() != idler_axis.len() {
            return Err(Error::Axis(format!(
                "amplitude is {}x{} but axes have {} and {} samples",
                amplitude.nrows(),
                amplitude.ncols(),
                signal_axis.len(),
                idler_axis.len()
            )));
        }
        let norm = frobenius(&amplitude);
        if !(norm > T::zero()) {
            return Err(Error::UndefinedPurity);
        }
        Ok(Self {
            signal_axis,
            idler_axis,
            amplitude: amplitude / norm,
            source: None,
        })
    }

    pub fn n_signal(&self) -> usize {
        self.signal_axis.len()
    }

    pub fn n_idler(&self) -> usize {
        self.idler_axis.len()
    }

    /// |amplitude|²
    pub fn intensity(&self) -> DMatrix<T> {
        self.amplitude.map(|a| a * a)
    }

    /// Same state with signal and idler exchanged.
    pub fn transposed(&self) -> Self {
        Self {
            signal_axis: self.idler_axis.clone(),
            idler_axis: self.signal_axis.clone(),
            amplitude: self.amplitude.transpose(),
            source: self.source.clone(),
        }
    }

    pub fn has_identical_axes(&self) -> bool {
        self.signal_axis == self.idler_axis
    }
}

struct Evaluator<'a, T: Real> {
    record: &'a CrystalRecord,
    interaction: &'a Interaction,
    geometry: &'a Geometry<T>,
    pump: &'a PumpSpec<T>,
    length_mm: T,
}

impl<T: Real> Evaluator<'_, T> {
    fn amplitude(&self, signal: T, idler: T) -> Result<T> {
        let pmf = phase_matching_function(
            self.record,
            self.interaction,
            self.geometry,
            self.length_mm,
            signal,
            idler,
        )?;
        Ok(pump_envelope(self.pump, signal, idler) * pmf)
    }

    fn max_intensity(&self, points: impl Iterator<Item = (T, T)>) -> Result<T> {
        let mut m = T::zero();
        for (s, i) in points {
            let a = self.amplitude(s, i)?;
            m = m.max(a * a);
        }
        Ok(m)
    }
}

fn transparency_limit<T: Real>(record: &CrystalRecord, center: T) -> T {
    let lo = T::lit(record.transparency[0]);
    let hi = T::lit(record.transparency[1]);
    T::lit(2.0) * (center - lo).min(hi - center)
}

/// Full spans from the boundary-intensity rule.
fn auto_spans<T: Real>(eval: &Evaluator<'_, T>, spec: &GridSpec<T>) -> Result<(T, T)> {
    let (cs, ci, n) = (spec.signal_center, spec.idler_center, spec.n);
    let (ms, mi) = (eval.pump.mapped_fwhm(cs), eval.pump.mapped_fwhm(ci));
    let half = T::lit(0.5);
    let cap_s = (T::lit(SPAN_CAP_FWHM) * ms).min(transparency_limit(eval.record, cs));
    let cap_i = (T::lit(SPAN_CAP_FWHM) * mi).min(transparency_limit(eval.record, ci));
    let mut ss = (half * ms).min(cap_s);
    let mut si = (half * mi).min(cap_i);
    if spec.square {
        ss = ss.max(si).min(cap_s.min(cap_i));
        si = ss;
    }
    let growth = T::lit(SPAN_GROWTH);
    let frac = T::lit(EDGE_FRACTION);

    for _ in 0..200 {
        let ls = linspace(cs - half * ss, cs + half * ss, n);
        let li = linspace(ci - half * si, ci + half * si, n);
        let peak = eval
            .max_intensity(li.iter().map(|&i| (cs, i)))?
            .max(eval.max_intensity(ls.iter().map(|&s| (s, ci)))?);
        let edge_s = eval.max_intensity(
            [ls[0], ls[n - 1]]
                .into_iter()
                .flat_map(|s| li.iter().map(move |&i| (s, i))),
        )?;
        let edge_i = eval.max_intensity(
            [li[0], li[n - 1]]
                .into_iter()
                .flat_map(|i| ls.iter().map(move |&s| (s, i))),
        )?;
        let mut grow_s = edge_s > frac * peak && ss < cap_s;
        let mut grow_i = edge_i > frac * peak && si < cap_i;
        if spec.square {
            grow_s = grow_s || grow_i;
            grow_i = grow_s;
        }
        if !grow_s && !grow_i {
            break;
        }
        if grow_s {
            ss = (ss * growth).min(cap_s);
        }
        if grow_i {
            si = (si * growth).min(cap_i);
        }
        if spec.square {
            ss = ss.min(si);
            si = ss;
        }
    }
    Ok((ss, si))
}

fn check_corners<T: Real>(record: &CrystalRecord, ls: &[T], li: &[T]) -> Result<()> {
    let (lo, hi) = (record.transparency[0], record.transparency[1]);
    for &s in [ls[0], ls[ls.len() - 1]].iter() {
        for &i in [li[0], li[li.len() - 1]].iter() {
            let p = T::one() / (T::one() / s + T::one() / i);
            for l in [s, i, p] {
                if !record.in_transparency(l.to_f64_lossy()) {
                    return Err(Error::Grid(format!(
                        "grid corner (signal {s} um, idler {i} um, pump {p} um) leaves the {} transparency window [{lo}, {hi}] um",
                        record.id
                    )));
                }
            }
        }
    }
    Ok(())
}

/// PEF·PMF on an N×N wavelength grid, Frobenius-normalized.
pub fn build_jsa<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    geometry: &Geometry<T>,
    pump: &PumpSpec<T>,
    length_mm: T,
    spec: &GridSpec<T>,
) -> Result<JsaGrid<T>> {
    if spec.n < MIN_GRID {
        return Err(Error::Grid(format!(
            "grid size {} is below the minimum of {MIN_GRID}",
            spec.n
        )));
    }
    if !(length_mm > T::zero()) {
        return Err(Error::Grid(format!("crystal length {length_mm} mm must be positive")));
    }
    if spec.square && spec.signal_center != spec.idler_center {
        return Err(Error::Axis("identical axes need equal signal and idler centres".into()));
    }
    let eval = Evaluator {
        record,
        interaction,
        geometry,
        pump,
        length_mm,
    };
    let (ss, si) = match spec.span {
        Span::Auto => auto_spans(&eval, spec)?,
        Span::Explicit { signal, idler } => {
            if !(signal > T::zero()) || !(idler > T::zero()) {
                return Err(Error::Grid("spans must be positive".into()));
            }
            if spec.square {
                let s = signal.max(idler);
                (s, s)
            } else {
                (signal, idler)
            }
        }
    };
    let half = T::lit(0.5);
    let ls = linspace(spec.signal_center - half * ss, spec.signal_center + half * ss, spec.n);
    let li = linspace(spec.idler_center - half * si, spec.idler_center + half * si, spec.n);
    check_corners(record, &ls, &li)?;

    let rows: Vec<Vec<T>> = ls
        .par_iter()
        .map(|&s| li.iter().map(|&i| eval.amplitude(s, i)).collect::<Result<Vec<T>>>())
        .collect::<Result<_>>()?;
    let amplitude = DMatrix::from_row_iterator(spec.n, spec.n, rows.into_iter().flatten());
    let mut grid = JsaGrid::from_amplitude(ls, li, amplitude)?;
    grid.source = Some(JsaSource {
        crystal: record.id.clone(),
        interaction: *interaction,
        geometry: *geometry,
        length_mm,
        pump: *pump,
    });
    Ok(grid)
}

/// Width of the peak at `peak_idx` where `y` crosses `level`, by linear
/// interpolation. `None` if either side never drops to the level.
pub fn width_at_level<T: Real>(x: &[T], y: &[T], peak_idx: usize, level: T) -> Option<T> {
    let cross = |a: usize, b: usize| x[a] + (level - y[a]) * (x[b] - x[a]) / (y[b] - y[a]);
    let mut a = peak_idx;
    while a > 0 && y[a] > level {
        a -= 1;
    }
    let mut b = peak_idx;
    while b + 1 < y.len() && y[b] > level {
        b += 1;
    }
    if y[a] > level || y[b] > level || a == b {
        return None;
    }
    Some(cross(b - 1, b) - cross(a, a + 1))
}

pub(crate) fn argmax<T: Real>(y: &[T]) -> Option<usize> {
    y.iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, _)| i)
}

/// Full width at half maximum by linear interpolation.
pub fn half_max_width<T: Real>(x: &[T], y: &[T]) -> Option<T> {
    let i = argmax(y)?;
    if !(y[i] > T::zero()) {
        return None;
    }
    width_at_level(x, y, i, y[i] / T::lit(2.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Marginals<T> {
    /// Σ_i |f(s, i)|² per signal sample.
    pub signal: Vec<T>,
    /// Σ_s |f(s, i)|² per idler sample.
    pub idler: Vec<T>,
    /// um
    pub fwhm_signal: Option<T>,
    pub fwhm_idler: Option<T>,
    /// The peak sits on the boundary or a half-maximum crossing is missing.
    pub signal_clipped: bool,
    pub idler_clipped: bool,
}

fn clipped<T: Real>(y: &[T], fwhm: &Option<T>) -> bool {
    let peak = argmax(y).unwrap_or(0);
    fwhm.is_none() || peak == 0 || peak == y.len() - 1
}

pub fn marginals_fwhm<T: Real>(grid: &JsaGrid<T>) -> Marginals<T> {
    let jsi = grid.intensity();
    let signal: Vec<T> = jsi.row_iter().map(|r| r.iter().fold(T::zero(), |a, &b| a + b)).collect();
    let idler: Vec<T> = jsi
        .column_iter()
        .map(|c| c.iter().fold(T::zero(), |a, &b| a + b))
        .collect();
    let fwhm_signal = half_max_width(&grid.signal_axis, &signal);
    let fwhm_idler = half_max_width(&grid.idler_axis, &idler);
    Marginals {
        signal_clipped: clipped(&signal, &fwhm_signal),
        idler_clipped: clipped(&idler, &fwhm_idler),
        signal,
        idler,
        fwhm_signal,
        fwhm_idler,
    }
}

/// Σ p_n² with p_n = s_n²/Σ s², from the singular values of `m`.
/// The decomposition runs in `f64` whatever the storage type.
pub fn purity_of_matrix<T: Real>(m: &DMatrix<T>) -> Result<T> {
    let a: DMatrix<f64> = m.map(|x| x.to_f64_lossy());
    if a.iter().all(|&x| x == 0.0) || a.iter().any(|x| !x.is_finite()) {
        return Err(Error::UndefinedPurity);
    }
    let s = a.singular_values();
    let total: f64 = s.iter().map(|v| v * v).sum();
    let purity: f64 = s.iter().map(|v| (v * v / total).powi(2)).sum();
    Ok(T::lit(purity))
}

pub fn schmidt_purity<T: Real>(grid: &JsaGrid<T>) -> Result<T> {
    purity_of_matrix(&grid.amplitude)
}

/// Crystal length (mm) and pump bandwidth Δλ (nm) used to rate each condition.
pub fn desk_parameters(condition: GvmCondition) -> (f64, f64) {
    match condition {
        GvmCondition::Gvm1 => (100.0, 4.0),
        GvmCondition::Gvm2 => (200.0, 8.0),
        GvmCondition::Gvm3 => (100.0, 11.0),
    }
}

/// Schmidt purity of the auto-spanned 200×200 JSA at the desk parameters.
pub fn predicted_purity<T: Real>(
    record: &CrystalRecord,
    interaction: &Interaction,
    geometry: &Geometry<T>,
    triple: &PhotonTriple<T>,
    condition: GvmCondition,
) -> Result<T> {
    let (length_mm, bw_nm) = desk_parameters(condition);
    let pump = PumpSpec::new(triple.pump, T::lit(bw_nm * 1e-3))?;
    let spec = GridSpec {
        n: DEFAULT_GRID,
        signal_center: triple.signal,
        idler_center: triple.idler,
        span: Span::Auto,
        square: false,
    };
    let grid = build_jsa(record, interaction, geometry, &pump, T::lit(length_mm), &spec)?;
    schmidt_purity(&grid)
}
