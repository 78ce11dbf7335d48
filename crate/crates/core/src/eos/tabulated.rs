use serde::{Deserialize, Serialize};

use super::EosError;
use crate::numerics::{find_root_bracketed, integrate_adaptive, Bracket, NumericsError, Tolerance};

/// `v(p)` from samples, interpolated with a monotone piecewise cubic
/// (Fritsch-Carlson slopes). Slopes are rebuilt on deserialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableData", into = "TableData")]
pub struct TabulatedEos {
    p: Vec<f64>,
    v: Vec<f64>,
    d: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct TableData {
    pressures: Vec<f64>,
    volumes: Vec<f64>,
}

impl TryFrom<TableData> for TabulatedEos {
    type Error = EosError;
    fn try_from(t: TableData) -> Result<Self, EosError> {
        Self::new(t.pressures, t.volumes)
    }
}

impl From<TabulatedEos> for TableData {
    fn from(t: TabulatedEos) -> Self {
        Self { pressures: t.p, volumes: t.v }
    }
}

impl TabulatedEos {
    pub fn new(p: Vec<f64>, v: Vec<f64>) -> Result<Self, EosError> {
        let bad = |s: &str| Err(EosError::InvalidParameter(s.to_string()));
        if p.len() != v.len() {
            return bad("pressure and volume samples differ in length");
        }
        if p.len() < 3 {
            return bad("need at least three samples");
        }
        if p.iter().chain(&v).any(|x| !x.is_finite()) {
            return bad("samples must be finite");
        }
        if v.iter().any(|&x| x <= 0.0) {
            return bad("volumes must be positive");
        }
        if p.windows(2).any(|w| w[1] <= w[0]) {
            return bad("pressures must be strictly increasing");
        }
        if v.windows(2).any(|w| w[1] >= w[0]) {
            return bad("volumes must be strictly decreasing in pressure");
        }
        let d = pchip_slopes(&p, &v);
        Ok(Self { p, v, d })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.p[0], *self.p.last().unwrap())
    }

    pub fn samples(&self) -> (&[f64], &[f64]) {
        (&self.p, &self.v)
    }

    pub(crate) fn sample_grid(&self) -> Vec<f64> {
        let mut g = Vec::with_capacity(4 * self.p.len());
        for w in self.p.windows(2) {
            for k in 0..4 {
                g.push(w[0] + (w[1] - w[0]) * (k as f64 + 0.5) / 4.0);
            }
        }
        g
    }

    fn segment(&self, p: f64) -> usize {
        let i = self.p.partition_point(|&x| x <= p);
        i.saturating_sub(1).min(self.p.len() - 2)
    }

    /// Value, first and second derivative of the interpolant.
    fn hermite(&self, p: f64) -> (f64, f64, f64) {
        let i = self.segment(p);
        let h = self.p[i + 1] - self.p[i];
        let t = (p - self.p[i]) / h;
        let (y0, y1) = (self.v[i], self.v[i + 1]);
        let (m0, m1) = (self.d[i] * h, self.d[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let val = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        let d1 = (6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1;
        let d2 = (12.0 * t - 6.0) * y0 + (6.0 * t - 4.0) * m0 + (-12.0 * t + 6.0) * y1 + (6.0 * t - 2.0) * m1;
        (val, d1 / h, d2 / (h * h))
    }

    pub fn volume(&self, p: f64) -> f64 {
        self.hermite(p).0
    }

    pub fn sound_speed(&self, p: f64) -> f64 {
        let (v, dv, _) = self.hermite(p);
        v / (-dv).sqrt()
    }

    pub fn fundamental(&self, p: f64) -> f64 {
        let (v, dv, d2v) = self.hermite(p);
        v * d2v / (2.0 * dv * dv)
    }

    pub fn pressure(&self, v: f64) -> Result<f64, EosError> {
        let (lo, hi) = self.domain();
        if !(v <= self.v[0] && v >= *self.v.last().unwrap()) {
            return Err(EosError::VolumeDomain { v });
        }
        let g = |p: f64| self.volume(p) - v;
        let b = Bracket::new(g, lo, hi)?;
        Ok(find_root_bracketed(g, b, Tolerance::default().with_abs(1e-15 * (hi - lo)))?)
    }

    /// `∫_{p1}^{p2} v dp`, exact for the cubic pieces.
    pub fn volume_integral(&self, p1: f64, p2: f64) -> f64 {
        let (a, b, sign) = if p1 <= p2 { (p1, p2, 1.0) } else { (p2, p1, -1.0) };
        let mut total = 0.0;
        let mut x = a;
        while x < b {
            let i = self.segment(x);
            let end = self.p[i + 1].min(b);
            let end = if end <= x { b } else { end };
            // two-point Gauss-Legendre is exact for cubics
            let c = 0.5 * (x + end);
            let r = 0.5 * (end - x) / 3f64.sqrt();
            total += 0.5 * (end - x) * (self.piece(i, c - r) + self.piece(i, c + r));
            x = end;
        }
        sign * total
    }

    /// `∫_{p1}^{p2} v/a dp`, integrated piece by piece since `a` has kinks
    /// at the nodes.
    pub fn rarefaction_integral(&self, p1: f64, p2: f64) -> Result<f64, NumericsError> {
        let (a, b, sign) = if p1 <= p2 { (p1, p2, 1.0) } else { (p2, p1, -1.0) };
        // v/a = √(-dv/dp)
        let integrand = |p: f64| (-self.hermite(p).1).sqrt();
        let mut total = 0.0;
        let mut x = a;
        while x < b {
            let i = self.segment(x);
            let end = self.p[i + 1].min(b);
            let end = if end <= x { b } else { end };
            let scale = integrand(x) * (end - x);
            total += integrate_adaptive(integrand, x, end, Tolerance::new(1e-13, 1e-16 * scale.abs(), 200))?;
            x = end;
        }
        Ok(sign * total)
    }

    fn piece(&self, i: usize, p: f64) -> f64 {
        let h = self.p[i + 1] - self.p[i];
        let t = (p - self.p[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.v[i]
            + (t3 - 2.0 * t2 + t) * self.d[i] * h
            + (-2.0 * t3 + 3.0 * t2) * self.v[i + 1]
            + (t3 - t2) * self.d[i + 1] * h
    }
}

fn pchip_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}
