//! Scalar root finding, adaptive quadrature and finite differences.
//!
//! Everything here works on caller-supplied closures and keeps no state, so
//! the routines can be called concurrently from any number of threads.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("root finder did not converge within {max_iter} iterations (last bracket [{lo}, {hi}])")]
    MaxIterExceeded { max_iter: usize, lo: f64, hi: f64 },
    #[error("adaptive quadrature exceeded {max} subdivisions on [{a}, {b}]")]
    MaxSubdivisions { max: usize, a: f64, b: f64 },
    #[error("function returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    #[error("invalid interval: lo = {lo} must be smaller than hi = {hi}")]
    InvalidInterval { lo: f64, hi: f64 },
}

/// Convergence controls shared by the root finder and the quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_iter: usize,
}

impl Tolerance {
    pub const fn new(rel: f64, abs: f64, max_iter: usize) -> Self {
        Self { rel, abs, max_iter }
    }

    /// Default relative tolerance with an absolute floor of `1e-12 * scale`.
    pub fn scaled(scale: f64) -> Self {
        Self { abs: 1e-12 * scale.abs(), ..Self::default() }
    }

    pub fn with_rel(self, rel: f64) -> Self {
        Self { rel, ..self }
    }

    pub fn with_abs(self, abs: f64) -> Self {
        Self { abs, ..self }
    }

    fn width_bound(&self, x: f64) -> f64 {
        self.abs.max(self.rel * x.abs())
    }

    pub fn is_valid(&self) -> bool {
        self.rel > 0.0 && self.abs >= 0.0 && self.max_iter >= 1
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rel: 1e-12, abs: 0.0, max_iter: 200 }
    }
}

/// An interval known to contain a sign change of some function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub f_lo: f64,
    pub f_hi: f64,
}

impl Bracket {
    /// Evaluates `f` at both ends and checks for a sign change.
    pub fn new<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64) -> Result<Self, NumericsError> {
        let f_lo = finite(lo, f(lo))?;
        let f_hi = finite(hi, f(hi))?;
        Self::from_values(lo, hi, f_lo, f_hi)
    }

    pub fn from_values(lo: f64, hi: f64, f_lo: f64, f_hi: f64) -> Result<Self, NumericsError> {
        if !(lo < hi) {
            return Err(NumericsError::InvalidInterval { lo, hi });
        }
        if f_lo * f_hi > 0.0 {
            return Err(NumericsError::NoSignChange { lo, hi, f_lo, f_hi });
        }
        Ok(Self { lo, hi, f_lo, f_hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn finite(x: f64, fx: f64) -> Result<f64, NumericsError> {
    if fx.is_finite() {
        Ok(fx)
    } else {
        Err(NumericsError::NonFinite { x })
    }
}

/// Brent's method: inverse quadratic interpolation and secant steps,
/// falling back to bisection whenever a step would leave the bracket or
/// converge too slowly. Never evaluates `f` outside `[lo, hi]`.
pub fn find_root_bracketed<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: Bracket,
    tol: Tolerance,
) -> Result<f64, NumericsError> {
    let Bracket { lo, hi, f_lo, f_hi } = bracket;
    if f_lo * f_hi > 0.0 {
        return Err(NumericsError::NoSignChange { lo, hi, f_lo, f_hi });
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }

    let (mut a, mut b, mut fa, mut fb) = (lo, hi, f_lo, f_hi);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..tol.max_iter {
        if fb * fc > 0.0 {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol.width_bound(b);
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }

        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        // keep every evaluation inside the caller's interval
        b = b.clamp(lo, hi);
        fb = finite(b, f(b))?;
    }

    Err(NumericsError::MaxIterExceeded { max_iter: tol.max_iter, lo: b.min(c), hi: b.max(c) })
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64), NumericsError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = finite(center, f(center))?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = finite(center - dx, f(center - dx))?;
        let f2 = finite(center + dx, f(center + dx))?;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).abs()))
}

/// Signed integral of `f` over `[a, b]` by globally adaptive Gauss-Kronrod
/// (7/15) panels. `tol.max_iter` bounds the number of panel splits.
pub fn integrate_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<f64, NumericsError> {
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let (v0, e0) = gk15(&mut f, lo, hi)?;
    let mut panels = vec![(lo, hi, v0, e0)];
    let mut total = v0;
    let mut err = e0;
    let mut splits = 0;

    while err > tol.abs.max(tol.rel * total.abs()) {
        if splits >= tol.max_iter {
            return Err(NumericsError::MaxSubdivisions { max: tol.max_iter, a, b });
        }
        // split the panel with the largest error estimate
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("at least one panel");
        let (pa, pb, pv, pe) = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        if !(pa < mid && mid < pb) {
            // the panel cannot be split further in f64
            return Err(NumericsError::MaxSubdivisions { max: splits, a, b });
        }
        let (lv, le) = gk15(&mut f, pa, mid)?;
        let (rv, re) = gk15(&mut f, mid, pb)?;
        total += lv + rv - pv;
        err += le + re - pe;
        panels.push((pa, mid, lv, le));
        panels.push((mid, pb, rv, re));
        splits += 1;
    }

    // resum to shed the drift of the running updates
    let total: f64 = panels.iter().map(|p| p.2).sum();
    Ok(sign * total)
}

/// Central difference `(f(x+h) - f(x-h)) / 2h`.
pub fn fd_derivative<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Second central difference `(f(x+h) - 2f(x) + f(x-h)) / h^2`.
pub fn fd_second_derivative<F: FnMut(f64) -> f64>(mut f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)
}

/// `n` points spaced geometrically from `lo` to `hi` inclusive (both > 0).
pub fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let ratio = (hi / lo).ln() / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
            v[n - 1] = hi;
            v
        }
    }
}

/// `n` points spaced uniformly from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| lo + step * i as f64).collect();
            v[n - 1] = hi;
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::cell::RefCell;

    #[test]
    fn sqrt_two() {
        let f = |x: f64| x * x - 2.0;
        let b = Bracket::new(f, 1.0, 2.0).unwrap();
        let r = find_root_bracketed(f, b, Tolerance::default()).unwrap();
        assert_relative_eq!(r, std::f64::consts::SQRT_2, max_relative = 1e-12);
    }

    #[test]
    fn identity_root_at_zero() {
        let f = |x: f64| x;
        let b = Bracket::new(f, -1.0, 1.0).unwrap();
        let r = find_root_bracketed(f, b, Tolerance::default().with_abs(1e-15)).unwrap();
        assert!(r.abs() < 1e-14);
    }

    #[test]
    fn no_sign_change_is_reported() {
        let err = Bracket::new(|x: f64| x * x + 1.0, -1.0, 1.0).unwrap_err();
        assert!(matches!(err, NumericsError::NoSignChange { .. }));
        let forged = Bracket { lo: 0.0, hi: 1.0, f_lo: 1.0, f_hi: 2.0 };
        assert!(matches!(
            find_root_bracketed(|x| x + 1.0, forged, Tolerance::default()),
            Err(NumericsError::NoSignChange { .. })
        ));
    }

    #[test]
    fn max_iter_exceeded() {
        let f = |x: f64| x.powi(3) - 0.3;
        let b = Bracket::new(f, -10.0, 10.0).unwrap();
        let err = find_root_bracketed(f, b, Tolerance::new(1e-15, 0.0, 2)).unwrap_err();
        assert!(matches!(err, NumericsError::MaxIterExceeded { .. }));
    }

    #[test]
    fn never_leaves_the_bracket() {
        let seen = RefCell::new(Vec::new());
        let f = |x: f64| {
            seen.borrow_mut().push(x);
            (x - 0.7).atan() * 1e3 + (x - 0.7).powi(3)
        };
        let b = Bracket::new(f, 0.5, 3.0).unwrap();
        let r = find_root_bracketed(f, b, Tolerance::default()).unwrap();
        assert_relative_eq!(r, 0.7, max_relative = 1e-11);
        assert!(seen.borrow().iter().all(|&x| (0.5..=3.0).contains(&x)));
    }

    #[test]
    fn quadrature_basics() {
        let v = integrate_adaptive(|x| x * x, 0.0, 1.0, Tolerance::default()).unwrap();
        assert_relative_eq!(v, 1.0 / 3.0, max_relative = 1e-14);
        assert_eq!(integrate_adaptive(|x| x.exp(), 2.0, 2.0, Tolerance::default()).unwrap(), 0.0);
        let fwd = integrate_adaptive(|x| x.sin(), 0.0, 3.0, Tolerance::default()).unwrap();
        let bwd = integrate_adaptive(|x| x.sin(), 3.0, 0.0, Tolerance::default()).unwrap();
        assert_eq!(fwd, -bwd);
        assert_relative_eq!(fwd, 1.0 - 3f64.cos(), max_relative = 1e-13);
    }

    #[test]
    fn quadrature_log_integrand() {
        // integral of 1/x is ln
        let v = integrate_adaptive(|x| 1.0 / x, 1e-3, 10.0, Tolerance::default()).unwrap();
        assert_relative_eq!(v, (1e4f64).ln(), max_relative = 1e-12);
    }

    #[test]
    fn quadrature_gives_up() {
        let err = integrate_adaptive(|x| x.sqrt().recip(), 0.0, 1.0, Tolerance::new(1e-14, 0.0, 5))
            .unwrap_err();
        assert!(matches!(err, NumericsError::MaxSubdivisions { .. }));
    }

    #[test]
    fn central_difference() {
        assert_relative_eq!(fd_derivative(|x| x * x, 3.0, 1e-5), 6.0, epsilon = 1e-8);
        assert_eq!(fd_derivative(|_| 4.2, 1.0, 1e-3), 0.0);
        assert_relative_eq!(fd_second_derivative(|x| x * x, 1.0, 1e-3), 2.0, epsilon = 1e-6);
    }

    #[test]
    fn spaced_grids() {
        let g = geomspace(1.0, 100.0, 3);
        assert_relative_eq!(g[1], 10.0, max_relative = 1e-14);
        assert_eq!(g[2], 100.0);
        assert_eq!(linspace(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
