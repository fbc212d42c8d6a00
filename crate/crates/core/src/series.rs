//! Voronoi series for the circle and divisor problems, the inner Bessel sums
//! and the remainder series assembled from the lattice function `f`.

use alloc::vec::Vec;
use core::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::accel::{block_envelope, extrapolate_to_zero, reduce, Averaging};
use crate::arith::{conjecture_lhs, d, r2, Flavor};
use crate::eulermac::{f_sin2, f_sin2_deriv, limit_diff, FMethod, FunctionModel, IntegralFrom};
use crate::quad::{integrate_with, kelvin_integral, QuadOptions, KELVIN_Y_MAX};
use crate::roots::{brent, first_sign_change};
use crate::specfun::{cos_two_pi, j1, ramanujan_i1, si, EULER_GAMMA};
use crate::sum::Accumulator;
use crate::{Decimal, Error, EvalConfig, Result, SeriesValue};

/// Tolerances for Bessel evaluations inside long sums, where each term only
/// needs to be good to well below the envelope of the partial sums.
fn summand_config() -> EvalConfig {
    EvalConfig {
        target_abs_tol: 1e-10,
        target_rel_tol: 1e-10,
        ..EvalConfig::default()
    }
}

/// `(n, theta, x)` with `Y_n = pi (n + theta) x` and
/// `Y*_n = pi (n + 1 - theta) x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaParams {
    pub theta: f64,
    pub x: f64,
    pub n: u64,
}

impl ThetaParams {
    pub fn new(n: u64, theta: f64, x: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::Domain {
                what: "ThetaParams",
                value: theta,
                reason: "theta must lie in (0, 1)",
            });
        }
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::Domain {
                what: "ThetaParams",
                value: x,
                reason: "x must be finite and positive",
            });
        }
        Ok(Self { theta, x, n })
    }

    pub fn y(&self) -> f64 {
        PI * (self.n as f64 + self.theta) * self.x
    }

    pub fn y_star(&self) -> f64 {
        PI * (self.n as f64 + 1.0 - self.theta) * self.x
    }

    /// The same `n` and `x` with `theta` replaced by `1 - theta`.
    pub fn mirrored(&self) -> Self {
        Self {
            theta: 1.0 - self.theta,
            ..*self
        }
    }
}

/// Truncation of the nested sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSpec {
    pub inner_m: usize,
    /// Number of outer terms.
    pub outer_n: usize,
    pub averaging: Averaging,
}

impl TruncationSpec {
    pub fn new(outer_n: usize, averaging: Averaging) -> Self {
        Self {
            inner_m: 100_000,
            outer_n,
            averaging,
        }
    }

    fn require_averaging(&self, what: &'static str) -> Result<()> {
        if self.averaging == Averaging::None {
            return Err(Error::Domain {
                what,
                value: self.outer_n as f64,
                reason: "the outer series converges only conditionally; choose an averaging mode",
            });
        }
        Ok(())
    }
}

fn check_x(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            what,
            value: x,
            reason: "x must be finite and positive",
        })
    }
}

/// Reduces partials and adds the bias-free part of the term errors.
fn reduced(
    partials: &[f64],
    averaging: Averaging,
    term_err: f64,
    method: &'static str,
) -> SeriesValue {
    let (v, env) = reduce(partials, averaging);
    SeriesValue::new(v, env + term_err, partials.len(), method)
}

/// `pi x + sum_{n<=N} r2(n) sqrt(x/n) J_1(2 pi sqrt(n x))`, reduced by
/// `averaging` over the partial sums `n = 1..N`.
pub fn voronoi_circle(x: f64, n_terms: usize, averaging: Averaging) -> Result<SeriesValue> {
    check_x("voronoi_circle", x)?;
    let main = PI * x;
    if n_terms == 0 {
        return Ok(SeriesValue::exact(main, "voronoi"));
    }
    let cfg = summand_config();
    let mut acc = Accumulator::new();
    acc.add(main);
    let mut partials = Vec::with_capacity(n_terms);
    let mut err = 0.0;
    for n in 1..=n_terms as u64 {
        let r = r2(n)?;
        if r != 0 {
            let nf = n as f64;
            let w = r as f64 * (x / nf).sqrt();
            let j = j1(2.0 * PI * (nf * x).sqrt(), &cfg)?;
            acc.add(w * j.value);
            err += w * j.est_error;
        }
        partials.push(acc.value());
    }
    Ok(reduced(
        &partials,
        averaging,
        err + acc.rounding(),
        "voronoi",
    ))
}

/// `x log x + (2 gamma - 1) x + 1/4 + sum_{n<=N} d(n) sqrt(x/n) I_1(4 pi sqrt(n x))`
/// with `I_1 = -Y_1 - (2/pi) K_1`.
pub fn voronoi_divisor(x: f64, n_terms: usize, averaging: Averaging) -> Result<SeriesValue> {
    check_x("voronoi_divisor", x)?;
    let main = x * x.ln() + (2.0 * EULER_GAMMA - 1.0) * x + 0.25;
    if n_terms == 0 {
        return Ok(SeriesValue::exact(main, "voronoi"));
    }
    let cfg = summand_config();
    let mut acc = Accumulator::new();
    acc.add(main);
    let mut partials = Vec::with_capacity(n_terms);
    let mut err = 0.0;
    for n in 1..=n_terms as u64 {
        let nf = n as f64;
        let w = d(n)? as f64 * (x / nf).sqrt();
        let i = ramanujan_i1(4.0 * PI * (nf * x).sqrt(), &cfg)?;
        acc.add(w * i.value);
        err += w * i.est_error;
        partials.push(acc.value());
    }
    Ok(reduced(
        &partials,
        averaging,
        err + acc.rounding(),
        "voronoi",
    ))
}

/// Route for `sum_m J_1(4 pi sqrt(m (n + theta) x)) / sqrt(m (n + theta))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InnerMethod {
    /// Through the lattice function `f`.
    ClosedF,
    /// Through the Kelvin integral; `Y_n <= 25` only.
    Kelvin,
    /// Through the limit difference of `sin^2(Y_n u)` truncated at `m`.
    Direct { m: usize },
}

impl InnerMethod {
    pub fn name(&self) -> &'static str {
        match self {
            InnerMethod::ClosedF => "closed_f",
            InnerMethod::Kelvin => "kelvin",
            InnerMethod::Direct { .. } => "direct",
        }
    }
}

/// `sqrt(x) (-pi + 1/(2Y) + 2 f(Y)/Y)`.
fn inner_closed_f(p: &ThetaParams) -> Result<SeriesValue> {
    let y = p.y();
    let sx = p.x.sqrt();
    let f = f_sin2(y, FMethod::Lattice)?;
    let v = sx * (-PI + 0.5 / y + 2.0 * f.value / y);
    let err =
        sx * 2.0 * f.est_error / y + 4.0 * f64::EPSILON * sx * (PI + 0.5 / y + 2.0 * f.value / y);
    Ok(SeriesValue::new(v, err, f.terms_used, "closed_f"))
}

pub fn inner_j1(p: &ThetaParams, method: InnerMethod) -> Result<SeriesValue> {
    let y = p.y();
    let sx = p.x.sqrt();
    match method {
        InnerMethod::ClosedF => inner_closed_f(p),
        InnerMethod::Kelvin => {
            if y > KELVIN_Y_MAX {
                return Err(Error::Domain {
                    what: "inner_j1",
                    value: y,
                    reason: "the Kelvin route needs Y_n <= 25",
                });
            }
            let k = kelvin_integral(y)?;
            let c = 2.0 * SQRT_2 / y;
            let v = sx * (-PI + 0.5 / y - c * k.value);
            let err = sx * c * k.est_error
                + 4.0 * f64::EPSILON * sx * (PI + 0.5 / y + (c * k.value).abs());
            Ok(SeriesValue::new(v, err, k.evaluations, "kelvin"))
        }
        InnerMethod::Direct { m } => {
            let c = PI * (p.n as f64 + p.theta) * sx;
            let l = limit_diff(&FunctionModel::Sin2 { a: y }, m, IntegralFrom::Zero)?;
            let v = 2.0 / c * l.value + 0.5 / c;
            let err = 2.0 / c * l.est_error + 4.0 * f64::EPSILON * (v.abs() + 0.5 / c);
            Ok(SeriesValue::new(v, err, m, "direct"))
        }
    }
}

/// `(1/(pi (n+theta) sqrt x)) [sum_{m<=M} sin(2 Y/m) - int_0^M sin(2Y/t) dt]`.
pub fn inner_i1(p: &ThetaParams, m: usize) -> Result<SeriesValue> {
    if m < 1000 {
        return Err(Error::Domain {
            what: "inner_i1",
            value: m as f64,
            reason: "M must be at least 1000",
        });
    }
    let c = PI * (p.n as f64 + p.theta) * p.x.sqrt();
    let l = limit_diff(
        &FunctionModel::Sin { a: 2.0 * p.y() },
        m,
        IntegralFrom::Zero,
    )?;
    Ok(SeriesValue::new(
        l.value / c,
        l.est_error / c,
        m,
        "limit_difference",
    ))
}

/// Partial sum of the telescoping series and its closed value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CotTelescope {
    pub partial: SeriesValue,
    pub closed: f64,
}

/// `sum_{n<N} [1/(2 pi (n+theta) sqrt x) - 1/(2 pi (n+1-theta) sqrt x)]`
/// against `cot(pi theta)/(2 sqrt x)`.
pub fn cot_telescope(theta: f64, x: f64, n_terms: usize) -> Result<CotTelescope> {
    let p = ThetaParams::new(0, theta, x)?;
    let sx = p.x.sqrt();
    let closed = cot_pi(theta) / (2.0 * sx);
    let mut acc = Accumulator::new();
    for n in 0..n_terms {
        let nf = n as f64;
        acc.add(1.0 / (2.0 * PI * (nf + theta) * sx) - 1.0 / (2.0 * PI * (nf + 1.0 - theta) * sx));
    }
    // sum_{n>=N} 1/((n+a)(n+1-a)) <= 1/(N+a-1) with a = min(theta, 1-theta)
    let a = theta.min(1.0 - theta);
    let tail = (1.0 - 2.0 * theta).abs() / (2.0 * PI * sx * (n_terms as f64 + a - 1.0).max(a));
    Ok(CotTelescope {
        partial: SeriesValue::new(acc.value(), tail + acc.rounding(), n_terms, "partial_sum"),
        closed,
    })
}

/// `cot(pi theta)`, exactly zero at one half.
fn cot_pi(theta: f64) -> f64 {
    if theta == 0.5 {
        0.0
    } else {
        1.0 / (PI * theta).tan()
    }
}

/// `f(Y)/Y - f(Y*)/Y*` for outer index `n`, with its error.
fn outer_term(p: &ThetaParams) -> Result<(f64, f64)> {
    let (y, ys) = (p.y(), p.y_star());
    if y == ys {
        return Ok((0.0, 0.0));
    }
    let a = f_sin2(y, FMethod::Lattice)?;
    let b = f_sin2(ys, FMethod::Lattice)?;
    Ok((
        a.value / y - b.value / ys,
        a.est_error / y + b.est_error / ys,
    ))
}

/// `P(x) = 1 + 4x sum_{n>=0} (f(Y_n)/Y_n - f(Y*_n)/Y*_n)` with `theta = 1/4`,
/// reduced over the partial sums of the first `outer_n` terms.
///
/// Each term carries the smooth part `-(1/(4Y_n) - 1/(4Y*_n))`, whose tail
/// decays like `1/n` and would bias the averages. Its sum telescopes to
/// `-cot(pi/4)/(4x)`, so every partial sum is corrected by the closed tail of
/// that part before averaging.
pub fn p_series(x: f64, spec: &TruncationSpec) -> Result<SeriesValue> {
    check_x("p_series", x)?;
    spec.require_averaging("p_series")?;
    if spec.outer_n == 0 {
        return Ok(SeriesValue::exact(1.0, "p_series"));
    }
    let mut acc = Accumulator::new();
    let mut partials = Vec::with_capacity(spec.outer_n);
    let mut err = 0.0;
    for n in 0..spec.outer_n as u64 {
        let p = ThetaParams::new(n, 0.25, x)?;
        let (t, e) = outer_term(&p)?;
        let smooth = 0.25 / p.y() - 0.25 / p.y_star();
        acc.add(4.0 * x * (t + smooth));
        err += 4.0 * x * e;
        partials.push(acc.value());
    }
    Ok(reduced(
        &partials,
        spec.averaging,
        err + acc.rounding(),
        "p_series",
    ))
}

/// Both sides of the divisor-sum identity
/// `sum_{n<=x} F(x/n) sin(2 pi n theta) = pi x (1/2 - theta) - cot(pi theta)/4
///  + (sqrt x / 2) sum_n [J(n, theta) - J(n, 1 - theta)]`
/// where `J` is the inner Bessel sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conjecture1 {
    pub lhs: f64,
    pub rhs: SeriesValue,
}

impl Conjecture1 {
    /// Whether the exact left side lies within the right side's envelope.
    pub fn contains_lhs(&self) -> bool {
        (self.lhs - self.rhs.value).abs() <= self.rhs.est_error
    }
}

pub fn conjecture1_check(x: &Decimal, theta: f64, spec: &TruncationSpec) -> Result<Conjecture1> {
    spec.require_averaging("conjecture1_check")?;
    let lhs = conjecture_lhs(x, theta, Flavor::Sin)?;
    let xf = x.to_f64();
    let base = PI * xf * (0.5 - theta) - 0.25 * cot_pi(theta);
    let half = 0.5 * xf.sqrt();
    let mut acc = Accumulator::new();
    acc.add(base);
    let mut partials = Vec::with_capacity(spec.outer_n);
    let mut err = 0.0;
    for n in 0..spec.outer_n as u64 {
        let p = ThetaParams::new(n, theta, xf)?;
        if theta != 0.5 {
            let a = inner_closed_f(&p)?;
            let b = inner_closed_f(&p.mirrored())?;
            acc.add(half * (a.value - b.value));
            err += half * (a.est_error + b.est_error);
        }
        partials.push(acc.value());
    }
    let rhs = if partials.is_empty() {
        SeriesValue::exact(base, "conjecture1")
    } else {
        reduced(
            &partials,
            spec.averaging,
            err + acc.rounding(),
            "conjecture1",
        )
    };
    Ok(Conjecture1 { lhs, rhs })
}

/// Outcome of one row of the mean-value scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowStatus {
    Ok,
    XiNotFound,
    LambdaNotFound,
}

impl RowStatus {
    pub fn name(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::XiNotFound => "xi_not_found",
            RowStatus::LambdaNotFound => "lambda_not_found",
        }
    }
}

/// One row of the mean-value scan. Missing values are NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiLambdaRow {
    pub n: u64,
    pub y: f64,
    pub y_star: f64,
    pub xi: f64,
    pub lambda: f64,
    pub xi_residual: f64,
    pub lambda_residual: f64,
    /// `|xi - lambda| xi^{3/4}`.
    pub metric: f64,
    pub status: RowStatus,
}

/// Residual demanded of accepted roots.
pub const ROOT_RESIDUAL_MAX: f64 = 1e-10;

/// Cells in the first sign-change scan and in the dense rescan.
const XI_SCAN: usize = 256;
const XI_DENSE_SCAN: usize = 4096;

fn f_over_y_deriv(xi: f64) -> Result<f64> {
    let f = f_sin2(xi, FMethod::Lattice)?.value;
    let fd = f_sin2_deriv(xi)?.value;
    Ok(fd / xi - f / (xi * xi))
}

/// The mean-value point `xi` of `f(Y)/Y` on `[Y_n, Y*_n]` with
/// `theta = 1/4`: the smallest root of
/// `f'(xi)/xi - f(xi)/xi^2 = [f(Y*)/Y* - f(Y)/Y] / (Y* - Y)`.
pub fn xi_solve(n: u64, x: f64) -> Result<XiLambdaRow> {
    let p = ThetaParams::new(n, 0.25, x)?;
    let (y, ys) = (p.y(), p.y_star());
    let diff = f_sin2(ys, FMethod::Lattice)?.value / ys - f_sin2(y, FMethod::Lattice)?.value / y;
    let width = ys - y;
    let slope = diff / width;
    let mut row = XiLambdaRow {
        n,
        y,
        y_star: ys,
        xi: f64::NAN,
        lambda: f64::NAN,
        xi_residual: f64::NAN,
        lambda_residual: f64::NAN,
        metric: f64::NAN,
        status: RowStatus::XiNotFound,
    };
    let g = |t: f64| f_over_y_deriv(t).map(|v| v - slope).unwrap_or(f64::NAN);
    let cell =
        first_sign_change(g, y, ys, XI_SCAN).or_else(|| first_sign_change(g, y, ys, XI_DENSE_SCAN));
    let Some((lo, hi)) = cell else {
        return Ok(row);
    };
    let xi = if lo == hi {
        lo
    } else {
        brent(g, lo, hi, 1e-15 * hi, "xi_solve")?
    };
    row.xi = xi;
    row.xi_residual = (f_over_y_deriv(xi)? * width - diff).abs();
    if row.xi_residual < ROOT_RESIDUAL_MAX {
        row.status = RowStatus::LambdaNotFound;
    }
    Ok(row)
}

/// Step of the outward search for `lambda` and its reach on either side.
const LAMBDA_STEP: f64 = PI / 64.0;
const LAMBDA_REACH: f64 = PI;

/// Completes `row` with the root of `f'(X) = Si(2 xi)` nearest to `xi`.
pub fn lambda_solve(row: XiLambdaRow) -> Result<XiLambdaRow> {
    let mut row = row;
    if row.xi.is_nan() || row.status == RowStatus::XiNotFound {
        return Ok(row);
    }
    let xi = row.xi;
    let target = si(2.0 * xi, &EvalConfig::default())?.value;
    let h = |t: f64| {
        f_sin2_deriv(t)
            .map(|v| v.value - target)
            .unwrap_or(f64::NAN)
    };
    let steps = (LAMBDA_REACH / LAMBDA_STEP).round() as usize;
    let mut found = None;
    let h0 = h(xi);
    if h0 == 0.0 {
        found = Some(xi);
    }
    let (mut up, mut down) = (h0, h0);
    for k in 1..=steps {
        if found.is_some() {
            break;
        }
        let a = xi + (k - 1) as f64 * LAMBDA_STEP;
        let b = xi + k as f64 * LAMBDA_STEP;
        let hb = h(b);
        let c = xi - k as f64 * LAMBDA_STEP;
        let hc = if c > 0.0 { h(c) } else { f64::NAN };
        let right = (hb.signum() != up.signum()).then_some((a, b));
        let left = (hc.is_finite() && hc.signum() != down.signum())
            .then_some((c, xi - (k - 1) as f64 * LAMBDA_STEP));
        let mut candidates = Vec::new();
        for (lo, hi) in [right, left].into_iter().flatten() {
            candidates.push(brent(h, lo, hi, 1e-15 * hi, "lambda_solve")?);
        }
        found = candidates
            .into_iter()
            .min_by(|p, q| (p - xi).abs().total_cmp(&(q - xi).abs()));
        up = hb;
        down = hc;
    }
    let Some(lambda) = found else {
        row.status = RowStatus::LambdaNotFound;
        return Ok(row);
    };
    row.lambda = lambda;
    row.lambda_residual = h(lambda).abs();
    row.metric = (xi - lambda).abs() * xi.powf(0.75);
    row.status = if row.xi_residual < ROOT_RESIDUAL_MAX && row.lambda_residual < ROOT_RESIDUAL_MAX {
        RowStatus::Ok
    } else {
        RowStatus::LambdaNotFound
    };
    Ok(row)
}

/// `c_2(x) = sum_k sin(2x/k)/k - Si(2x)`.
pub fn c2_func(x: f64) -> Result<SeriesValue> {
    check_x("c2_func", x)?;
    let fd = f_sin2_deriv(x)?;
    let s = si(2.0 * x, &EvalConfig::default())?;
    Ok(SeriesValue::new(
        fd.value - s.value,
        fd.est_error + s.est_error,
        fd.terms_used,
        "lattice",
    ))
}

/// Which of the two quarter-shifted cosine series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Which {
    /// Shift `1/4`.
    Plus,
    /// Shift `3/4`.
    Minus,
}

impl Which {
    fn shift(self) -> f64 {
        match self {
            Which::Plus => 0.25,
            Which::Minus => 0.75,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarterCosine {
    pub closed: f64,
    pub abel: SeriesValue,
}

/// Abel radii `r = 1 - h` used before extrapolating to `h = 0`.
const ABEL_H: [f64; 3] = [4e-3, 2e-3, 1e-3];

/// `sum_n r^n cos(pi (n + c) x) / (pi (n + c))` extrapolated to `r = 1`.
pub fn quarter_cosine_abel(x: f64, which: Which) -> Result<SeriesValue> {
    check_x("quarter_cosine", x)?;
    let c = which.shift();
    let mut vals = [0.0; 3];
    let mut used = 0;
    for (i, h) in ABEL_H.iter().enumerate() {
        let r = 1.0 - h;
        let mut acc = Accumulator::new();
        let mut w = 1.0;
        let mut n = 0usize;
        // r^n below 1e-18
        let last = (41.5 / h) as usize;
        while n <= last {
            let nc = n as f64 + c;
            acc.add(w * cos_two_pi(0.5 * nc * x) / (PI * nc));
            w *= r;
            n += 1;
        }
        used = used.max(n);
        vals[i] = acc.value();
    }
    let (v, e) = extrapolate_to_zero(&ABEL_H, &vals);
    Ok(SeriesValue::new(v, e, used, "abel"))
}

/// `Re phi(e^{-i pi x/4})` with `phi_1 = (2/pi)(atan z + atanh z)` and
/// `phi_2 = (2/pi)(atanh z - atan z)`, next to the Abel sum of the series.
pub fn quarter_cosine(x: f64, which: Which) -> Result<QuarterCosine> {
    check_x("quarter_cosine", x)?;
    let half = 0.5 * x;
    if half == half.round() {
        let point = match (half - 4.0 * (half / 4.0).floor()) as u32 {
            0 => "1",
            1 => "-i",
            2 => "-1",
            _ => "i",
        };
        return Err(Error::Degenerate {
            what: "quarter_cosine",
            x,
            point,
        });
    }
    let z = Complex64::new(cos_two_pi(-x / 8.0), crate::specfun::sin_two_pi(-x / 8.0));
    let phi = match which {
        Which::Plus => z.atan() + z.atanh(),
        Which::Minus => z.atanh() - z.atan(),
    } * (2.0 / PI);
    let abel = quarter_cosine_abel(x, which)?;
    Ok(QuarterCosine {
        closed: phi.re,
        abel,
    })
}

/// `1 + 2 Re sum_{k<=K} (1 - (4/pi) atan(e^{-i pi x/(2k)}))` together with
/// the skipped singular `k` (those with `x/k` an odd integer).
#[derive(Debug, Clone, PartialEq)]
pub struct PhiP {
    pub value: SeriesValue,
    pub singular: Vec<u64>,
}

pub fn phi_p_eval(x: &Decimal, k_max: u64) -> Result<PhiP> {
    let xf = x.to_f64();
    check_x("phi_p_eval", xf)?;
    let mut acc = Accumulator::new();
    acc.add(1.0);
    let mut singular = Vec::new();
    for k in 1..=k_max {
        if odd_quotient(x, k) {
            singular.push(k);
            continue;
        }
        let t = xf / (4.0 * k as f64);
        let z = Complex64::new(cos_two_pi(-t), crate::specfun::sin_two_pi(-t));
        let term = Complex64::new(1.0, 0.0) - z.atan() * (4.0 / PI);
        acc.add(2.0 * term.re);
    }
    // Each term is 0 or 2 according to the sign of cos(pi x/(2k)); all terms
    // with k > x vanish.
    let est = if (k_max as f64) >= xf {
        acc.rounding() + 4.0 * f64::EPSILON * acc.abs_total()
    } else {
        2.0 * (xf.ceil() - k_max as f64)
    };
    Ok(PhiP {
        value: SeriesValue::new(acc.value(), est, k_max as usize, "phi_p"),
        singular,
    })
}

/// Whether `x / k` is an odd integer.
fn odd_quotient(x: &Decimal, k: u64) -> bool {
    let den = (k as i128) * 10i128.pow(x.scale());
    x.mantissa() % den == 0 && (x.mantissa() / den) % 2 != 0
}

/// Left side, right side and residual of the cosine transform check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineTransform {
    pub integral: SeriesValue,
    pub rhs: f64,
    pub residual: f64,
}

/// `int_0^T J_1(4 pi sqrt(t c x)) / sqrt(t c) cos(2 pi t w) dt` against
/// `sin^2(pi c x / w) / (pi c sqrt x)`, `c = n + theta`. The range is cut at
/// the zeros of the cosine and the partial integrals are block-averaged.
pub fn cosine_transform_check(p: &ThetaParams, w: f64, t_max: f64) -> Result<CosineTransform> {
    check_x("cosine_transform_check", w)?;
    let c = p.n as f64 + p.theta;
    let cx = c * p.x;
    let rhs = {
        let s = (PI * cx / w).sin();
        s * s / (PI * c * p.x.sqrt())
    };
    let half = 0.5 / w;
    let panels = ((t_max - 0.5 * half) / half).floor().max(1.0) as usize;
    if panels < 8 {
        return Err(Error::Domain {
            what: "cosine_transform_check",
            value: t_max,
            reason: "truncation point covers fewer than 8 half-periods",
        });
    }
    let cfg = summand_config();
    let bad = core::cell::Cell::new(None);
    let mut g = |t: f64| {
        if t == 0.0 {
            // J_1(z)/sqrt(t c) -> 2 pi sqrt(x) as t -> 0
            return 2.0 * PI * p.x.sqrt();
        }
        let z = 4.0 * PI * (t * cx).sqrt();
        match j1(z, &cfg) {
            Ok(v) => v.value / (t * c).sqrt() * cos_two_pi(t * w),
            Err(e) => {
                bad.set(Some(e));
                f64::NAN
            }
        }
    };
    let mut edges = Vec::with_capacity(panels + 1);
    edges.push(0.0);
    for k in 0..panels {
        edges.push(0.5 * half + k as f64 * half);
    }
    let mut acc = Accumulator::new();
    let mut partials = Vec::with_capacity(panels);
    let mut err = 0.0;
    for win in edges.windows(2) {
        let r = integrate_with(
            &mut g,
            win[0],
            win[1],
            QuadOptions::best_effort(1e-13, 1e-11),
        );
        if let Some(e) = bad.take() {
            return Err(e);
        }
        let r = r?;
        acc.add(r.value);
        err += r.est_error;
        partials.push(acc.value());
    }
    let (v, env) = block_envelope(&partials);
    let integral = SeriesValue::new(v, env + err, panels, "paired_panels");
    Ok(CosineTransform {
        integral,
        rhs,
        residual: (v - rhs).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_params_geometry() {
        let p = ThetaParams::new(3, 0.25, 2.0).unwrap();
        assert!((p.y_star() - p.y() - PI * 0.5 * 2.0).abs() < 1e-12);
        assert!(ThetaParams::new(0, 1.0, 1.0).is_err());
    }

    #[test]
    fn cot_half_is_zero() {
        let c = cot_telescope(0.5, 3.0, 10).unwrap();
        assert_eq!(c.closed, 0.0);
        assert_eq!(c.partial.value, 0.0);
    }

    #[test]
    fn odd_quotients() {
        let x: Decimal = "6".parse().unwrap();
        assert!(odd_quotient(&x, 2));
        assert!(odd_quotient(&x, 6));
        assert!(!odd_quotient(&x, 3));
        assert!(!odd_quotient(&x, 4));
    }
}
