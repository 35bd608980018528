//! Test functions: a small analytic catalog with known Mellin images, and
//! tabulated data with spline interpolation.

use std::fmt;
use std::path::Path;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::gamma::complex_gamma;

/// The registered analytic test functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Builtin {
    /// `e^{−ax}`
    ExpDecay { a: f64 },
    /// `x^b e^{−ax}`
    PowerExp { a: f64, b: f64 },
    /// `τ² e^{−aτ²}`
    GaussEvenTau { a: f64 },
    /// `e^{−aτ²}`; does not vanish at the origin.
    Gauss { a: f64 },
}

pub const CATALOG: [&str; 4] = ["exp_decay", "power_exp", "gauss_even_tau", "gauss"];

impl Builtin {
    fn eval(&self, x: f64) -> f64 {
        match *self {
            Builtin::ExpDecay { a } => (-a * x).exp(),
            Builtin::PowerExp { a, b } => {
                if x == 0.0 {
                    if b == 0.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    x.powf(b) * (-a * x).exp()
                }
            }
            Builtin::GaussEvenTau { a } => x * x * (-a * x * x).exp(),
            Builtin::Gauss { a } => (-a * x * x).exp(),
        }
    }

    fn image(&self) -> MellinImage {
        match *self {
            Builtin::ExpDecay { a } => MellinImage::GammaPower { a, b: 0.0 },
            Builtin::PowerExp { a, b } => MellinImage::GammaPower { a, b },
            Builtin::GaussEvenTau { a } => MellinImage::HalfGaussian { a, b: 2.0 },
            Builtin::Gauss { a } => MellinImage::HalfGaussian { a, b: 0.0 },
        }
    }

    fn validate(&self) -> Result<()> {
        let (a, b) = match *self {
            Builtin::ExpDecay { a } | Builtin::GaussEvenTau { a } | Builtin::Gauss { a } => {
                (a, 0.0)
            }
            Builtin::PowerExp { a, b } => (a, b),
        };
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "decay parameter must be positive, got a = {a}"
            )));
        }
        if !(b > -1.0) || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "power must exceed −1, got b = {b}"
            )));
        }
        Ok(())
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::ExpDecay { a } => write!(f, "exp_decay(a={a})"),
            Builtin::PowerExp { a, b } => write!(f, "power_exp(a={a},b={b})"),
            Builtin::GaussEvenTau { a } => write!(f, "gauss_even_tau(a={a})"),
            Builtin::Gauss { a } => write!(f, "gauss(a={a})"),
        }
    }
}

/// Closed-form Mellin image `f*(s) = ∫₀^∞ f(x) x^{s−1} dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MellinImage {
    /// `Γ(s+b) a^{−s−b}`, the image of `x^b e^{−ax}`, for `Re s > −b`.
    GammaPower { a: f64, b: f64 },
    /// `Γ((s+b)/2) / (2 a^{(s+b)/2})`, the image of `x^b e^{−ax²}`, for `Re s > −b`.
    HalfGaussian { a: f64, b: f64 },
}

impl MellinImage {
    /// Left edge of the half-plane of convergence.
    pub fn strip_left(&self) -> f64 {
        match *self {
            MellinImage::GammaPower { b, .. } | MellinImage::HalfGaussian { b, .. } => -b,
        }
    }

    /// The image, analytically continued to the left of the strip (it is
    /// meromorphic there); poles are errors.
    pub fn eval(&self, s: Complex64) -> Result<Complex64> {
        match *self {
            MellinImage::GammaPower { a, b } => {
                let w = s + b;
                Ok(complex_gamma(w)? * (-w * a.ln()).exp())
            }
            MellinImage::HalfGaussian { a, b } => {
                let w = 0.5 * (s + b);
                Ok(complex_gamma(w)? * (-w * a.ln()).exp() * 0.5)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    Linear,
    #[default]
    Cubic,
}

/// Tabulated samples with a natural cubic spline (or linear) interpolant;
/// zero outside the grid.
#[derive(Debug, Clone)]
pub struct Table {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives of the natural spline at the nodes.
    m: Vec<f64>,
    interpolation: Interpolation,
    warned: Arc<AtomicBool>,
}

impl PartialEq for Table {
    fn eq(&self, other: &Self) -> bool {
        self.xs == other.xs && self.ys == other.ys && self.interpolation == other.interpolation
    }
}

impl Table {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidParameter(format!(
                "table has {} abscissas but {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.len() < 4 {
            return Err(Error::InvalidParameter(format!(
                "table needs at least 4 points, got {}",
                xs.len()
            )));
        }
        if let Some(bad) = xs.iter().chain(ys.iter()).find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "table contains non-finite entry {bad}"
            )));
        }
        if let Some(i) = (1..xs.len()).find(|&i| xs[i] <= xs[i - 1]) {
            return Err(Error::InvalidParameter(format!(
                "table abscissas must be strictly ascending: {} then {}",
                xs[i - 1],
                xs[i]
            )));
        }
        let m = natural_spline(&xs, &ys);
        Ok(Table {
            xs,
            ys,
            m,
            interpolation,
            warned: Arc::new(AtomicBool::new(false)),
        })
    }

    /// Reads a two-column CSV (abscissa, value). A first row that does not
    /// parse as numbers is taken as a header; any later malformed row is an
    /// error.
    pub fn from_csv(path: &Path, interpolation: Interpolation) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for (line, rec) in reader.records().enumerate() {
            let rec =
                rec.map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
            let parsed: Option<(f64, f64)> = if rec.len() == 2 {
                match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
                    (Ok(a), Ok(b)) => Some((a, b)),
                    _ => None,
                }
            } else {
                None
            };
            match parsed {
                Some((a, b)) => {
                    xs.push(a);
                    ys.push(b);
                }
                None if line == 0 => {}
                None => {
                    return Err(Error::InvalidParameter(format!(
                        "{}: row {} is not two numeric columns",
                        path.display(),
                        line + 1
                    )))
                }
            }
        }
        Table::new(xs, ys, interpolation)
    }

    pub fn abscissas(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn support(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    fn eval(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            if !self.warned.swap(true, Ordering::Relaxed) {
                log::warn!(
                    "tabulated function evaluated outside [{lo}, {hi}]; extrapolating as zero"
                );
            }
            return 0.0;
        }
        // Interval [x_i, x_{i+1}] containing x.
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.ys[i],
            Err(i) => i - 1,
        };
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        match self.interpolation {
            Interpolation::Linear => y0 + t * (y1 - y0),
            Interpolation::Cubic => {
                let a = 1.0 - t;
                a * y0
                    + t * y1
                    + h * h / 6.0 * ((a * a * a - a) * self.m[i] + (t * t * t - t) * self.m[i + 1])
            }
        }
    }
}

/// Second derivatives of the natural cubic spline (Thomas algorithm).
fn natural_spline(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    for i in 1..n - 1 {
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        let a = h0;
        let b = 2.0 * (h0 + h1);
        let r = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
        let denom = b - a * c[i - 1];
        c[i] = h1 / denom;
        d[i] = (r - a * d[i - 1]) / denom;
    }
    for i in (1..n - 1).rev() {
        m[i] = d[i] - c[i] * m[i + 1];
    }
    m
}

#[derive(Debug, Clone, PartialEq)]
pub enum FunctionKind {
    Builtin(Builtin),
    Tabulated(Table),
}

/// A test function `f(x)` on `(0, ∞)` (or `g(τ)`), optionally scaled.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub kind: FunctionKind,
    pub scale: f64,
}

impl SampledFunction {
    pub fn builtin(b: Builtin) -> Result<Self> {
        b.validate()?;
        Ok(SampledFunction {
            kind: FunctionKind::Builtin(b),
            scale: 1.0,
        })
    }

    pub fn exp_decay(a: f64) -> Result<Self> {
        Self::builtin(Builtin::ExpDecay { a })
    }

    pub fn power_exp(a: f64, b: f64) -> Result<Self> {
        Self::builtin(Builtin::PowerExp { a, b })
    }

    pub fn gauss_even_tau(a: f64) -> Result<Self> {
        Self::builtin(Builtin::GaussEvenTau { a })
    }

    pub fn gauss(a: f64) -> Result<Self> {
        Self::builtin(Builtin::Gauss { a })
    }

    pub fn tabulated(table: Table) -> Self {
        SampledFunction {
            kind: FunctionKind::Tabulated(table),
            scale: 1.0,
        }
    }

    /// Parses `name(params)` with positional or `key=value` parameters,
    /// e.g. `exp_decay(1)`, `power_exp(a=2, b=0.5)`, `gauss_even_tau`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (name, args) = match spec.find('(') {
            Some(open) => {
                if !spec.ends_with(')') {
                    return Err(Error::InvalidParameter(format!(
                        "unbalanced parentheses in '{spec}'"
                    )));
                }
                (spec[..open].trim(), &spec[open + 1..spec.len() - 1])
            }
            None => (spec, ""),
        };
        let keys: &[&str] = match name {
            "exp_decay" | "gauss_even_tau" | "gauss" => &["a"],
            "power_exp" => &["a", "b"],
            _ => {
                return Err(Error::InvalidParameter(format!(
                    "unknown function '{name}'; known: {}",
                    CATALOG.join(", ")
                )))
            }
        };
        let mut values: Vec<Option<f64>> = vec![None; keys.len()];
        for (pos, raw) in args
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .enumerate()
        {
            let (slot, text) = match raw.split_once('=') {
                Some((k, v)) => {
                    let k = k.trim();
                    let slot = keys.iter().position(|&key| key == k).ok_or_else(|| {
                        Error::InvalidParameter(format!("'{name}' has no parameter '{k}'"))
                    })?;
                    (slot, v.trim())
                }
                None => {
                    if pos >= keys.len() {
                        return Err(Error::InvalidParameter(format!(
                            "too many parameters for '{name}'"
                        )));
                    }
                    (pos, raw)
                }
            };
            let v: f64 = text.parse().map_err(|_| {
                Error::InvalidParameter(format!("parameter '{text}' of '{name}' is not a number"))
            })?;
            if values[slot].replace(v).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "parameter '{}' given twice",
                    keys[slot]
                )));
            }
        }
        let a = values[0].unwrap_or(1.0);
        let b = match name {
            "exp_decay" => Builtin::ExpDecay { a },
            "power_exp" => Builtin::PowerExp {
                a,
                b: values[1].unwrap_or(1.0),
            },
            "gauss_even_tau" => Builtin::GaussEvenTau { a },
            _ => Builtin::Gauss { a },
        };
        Self::builtin(b)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        SampledFunction {
            kind: self.kind.clone(),
            scale: self.scale * alpha,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.scale
            * match &self.kind {
                FunctionKind::Builtin(b) => b.eval(x),
                FunctionKind::Tabulated(t) => t.eval(x),
            }
    }

    pub fn mellin_image(&self) -> Option<MellinImage> {
        match &self.kind {
            FunctionKind::Builtin(b) => Some(b.image()),
            FunctionKind::Tabulated(_) => None,
        }
    }

    /// `f*(s)` from the closed-form image, scaled.
    pub fn image_at(&self, s: Complex64) -> Result<Complex64> {
        match self.mellin_image() {
            Some(img) => Ok(img.eval(s)? * self.scale),
            None => Err(Error::Capability(
                "tabulated functions have no analytic Mellin image; continuation is unavailable"
                    .into(),
            )),
        }
    }

    /// Power `b` in `f(x) ~ x^b` at the origin, for declaring endpoint
    /// behaviour to the quadrature.
    pub fn leading_power(&self) -> f64 {
        match &self.kind {
            FunctionKind::Builtin(Builtin::PowerExp { b, .. }) => *b,
            // τ² at the origin is smooth; no declaration needed.
            _ => 0.0,
        }
    }

    /// A point beyond which the function is below roughly `1e−16` of its scale.
    pub fn effective_support(&self) -> f64 {
        match &self.kind {
            FunctionKind::Builtin(b) => match *b {
                Builtin::ExpDecay { a } => 37.0 / a,
                Builtin::PowerExp { a, b } => (37.0 + 2.0 * b.max(0.0) * (1.0 + 37.0 / a).ln()) / a,
                Builtin::GaussEvenTau { a } => (40.0 / a).sqrt(),
                Builtin::Gauss { a } => (37.0 / a).sqrt(),
            },
            FunctionKind::Tabulated(t) => t.support().1,
        }
    }

    /// Exponential rate used to size the first quadrature panel.
    pub fn decay_hint(&self) -> f64 {
        match &self.kind {
            FunctionKind::Builtin(Builtin::ExpDecay { a } | Builtin::PowerExp { a, .. }) => *a,
            _ => 8.0 / self.effective_support(),
        }
    }

    /// Whether `g(0) = g'(0) = 0`, as the inversion of `G` assumes.
    pub fn vanishes_to_second_order(&self) -> bool {
        match &self.kind {
            FunctionKind::Builtin(b) => match *b {
                Builtin::GaussEvenTau { .. } => true,
                Builtin::PowerExp { b, .. } => b > 1.0,
                Builtin::ExpDecay { .. } | Builtin::Gauss { .. } => false,
            },
            FunctionKind::Tabulated(t) => {
                let (lo, _) = t.support();
                let scale = t.values().iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let h = 1e-4 * (t.support().1 - lo);
                let at0 = t.eval(lo).abs();
                let slope = ((t.eval(lo + h) - t.eval(lo)) / h).abs();
                lo.abs() <= h && at0 <= 1e-8 * scale && slope <= 1e-4 * scale
            }
        }
    }

    pub fn describe(&self) -> String {
        let base = match &self.kind {
            FunctionKind::Builtin(b) => b.to_string(),
            FunctionKind::Tabulated(t) => {
                let (lo, hi) = t.support();
                format!(
                    "tabulated({} points on [{lo}, {hi}], {:?})",
                    t.abscissas().len(),
                    t.interpolation()
                )
            }
        };
        if self.scale == 1.0 {
            base
        } else {
            format!("{}*{base}", self.scale)
        }
    }
}
