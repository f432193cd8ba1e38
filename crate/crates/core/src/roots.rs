//! Bracketing scan and bisection.

use crate::error::Result;
use crate::scalar::Real;

pub struct Scan<T> {
    /// (a, b, f(a), f(b)) for each sign change, ascending in x.
    pub brackets: Vec<(T, T, T, T)>,
    pub min: T,
    pub max: T,
}

/// Sample `f` at `steps + 1` evenly spaced points and collect sign changes.
/// An exact zero at a sample opens a degenerate bracket at that sample.
pub fn scan_brackets<T, F>(f: F, lo: T, hi: T, steps: usize) -> Result<Scan<T>>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let dx = (hi - lo) / T::lit(steps as f64);
    let mut brackets = Vec::new();
    let mut min = T::infinity();
    let mut max = T::neg_infinity();
    let mut prev: Option<(T, T)> = None;
    for i in 0..=steps {
        let x = if i == steps { hi } else { lo + dx * T::lit(i as f64) };
        let fx = f(x)?;
        min = min.min(fx);
        max = max.max(fx);
        if fx == T::zero() {
            brackets.push((x, x, fx, fx));
        } else if let Some((xp, fp)) = prev {
            if fp != T::zero() && (fp < T::zero()) != (fx < T::zero()) {
                brackets.push((xp, x, fp, fx));
            }
        }
        prev = Some((x, fx));
    }
    Ok(Scan { brackets, min, max })
}

/// Bisection on a sign-changing bracket until |f| < `tol` or the interval
/// stops shrinking. Returns the evaluated point with the smallest |f|.
pub fn bisect<T, F>(f: F, mut a: T, mut b: T, mut fa: T, fb: T, tol: T) -> Result<T>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    if a == b {
        return Ok(a);
    }
    let mut best = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
    let half = T::lit(0.5);
    for _ in 0..400 {
        if best.1.abs() < tol {
            break;
        }
        let m = a + (b - a) * half;
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let fm = f(m)?;
        if fm.abs() < best.1.abs() {
            best = (m, fm);
        }
        if fm == T::zero() {
            break;
        }
        if (fm < T::zero()) == (fa < T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(best.0)
}
