//! Numerical check of the tempered Liouville fractional derivative
//!
//! ```text
//! D u(t) = e^{-lambda t} / Gamma(1 - sigma) * d/dt  int_{-inf}^t (t - s)^{-sigma} e^{lambda s} u(s) ds
//! ```
//!
//! applied to `u(s) = e^{-s ln p}`. Substituting `u = t - s` turns the inner
//! integral into `e^{t c} int_0^inf u^{-sigma} e^{-c u} du` with
//! `c = lambda - ln p`, which equals `e^{t c} Gamma(1 - sigma) c^{sigma - 1}`.
//! The derivative then has the closed form `e^{-t ln p} c^sigma`, i.e.
//! `p (lambda - ln p)^sigma` at `t = -1`.
//!
//! Here the integral is evaluated by quadrature and differentiated by central
//! differences, so the closed form can be checked against an independent
//! route.

mod gamma;
mod quad;

pub use gamma::gamma_fn;
pub use quad::{integrate, QuadResult};

use crate::error::{domain, Error, Result};

/// Default relative tolerance for the singular Laplace integral.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;

const MAX_SEGMENTS: usize = 2000;

/// Parameters of one derivative evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracParams {
    sigma: f64,
    lambda: f64,
    p: f64,
    t: f64,
}

impl FracParams {
    pub fn new(sigma: f64, lambda: f64, p: f64, t: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma < 1.0) {
            return domain(format!(
                "fractional order sigma = {sigma} must lie in (0, 1)"
            ));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return domain(format!("lambda = {lambda} must be finite and >= 0"));
        }
        if !(p > 0.0 && p < 1.0) {
            return domain(format!("p = {p} must lie in (0, 1)"));
        }
        if !t.is_finite() {
            return domain(format!("t = {t} must be finite"));
        }
        Ok(Self {
            sigma,
            lambda,
            p,
            t,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Exponential decay rate `lambda - ln p` of the shifted integrand.
    pub fn decay_rate(&self) -> f64 {
        self.lambda - self.p.ln()
    }

    pub fn at(&self, t: f64) -> Result<Self> {
        Self::new(self.sigma, self.lambda, self.p, t)
    }
}

/// `int_0^inf u^{-sigma} e^{-c u} du` to relative accuracy `tol`.
///
/// On `(0, 1]` the substitution `u = v^{1/(1 - sigma)}` makes the integrand
/// bounded. The tail is integrated up to the point where `e^{-c u}` drops below
/// `tol * 1e-3`, and the remaining mass, bounded by `U^{-sigma} e^{-c U} / c`,
/// is added to the error estimate.
pub fn laplace_singular_quad(c: f64, sigma: f64, tol: f64) -> Result<QuadResult> {
    if !(c > 0.0 && c.is_finite()) {
        return domain(format!("decay rate c = {c} must be finite and > 0"));
    }
    if !(sigma > 0.0 && sigma < 1.0) {
        return domain(format!("sigma = {sigma} must lie in (0, 1)"));
    }
    if !(tol > 0.0) {
        return domain(format!("tolerance {tol} must be > 0"));
    }

    let piece_tol = 0.25 * tol;
    let power = 1.0 / (1.0 - sigma);
    let head = integrate(
        |v: f64| power * (-c * v.powf(power)).exp(),
        0.0,
        1.0,
        0.0,
        piece_tol,
        MAX_SEGMENTS,
    )?;

    let cutoff = ((1e3 / tol).ln() / c).max(1.0);
    let body = if cutoff > 1.0 {
        integrate(
            |u: f64| u.powf(-sigma) * (-c * u).exp(),
            1.0,
            cutoff,
            0.0,
            piece_tol,
            MAX_SEGMENTS,
        )?
    } else {
        QuadResult {
            value: 0.0,
            err_estimate: 0.0,
            evaluations: 0,
        }
    };
    let tail_bound = cutoff.powf(-sigma) * (-c * cutoff).exp() / c;

    let value = head.value + body.value;
    let err_estimate = head.err_estimate + body.err_estimate + tail_bound;
    if err_estimate > tol * value.abs() {
        return Err(Error::ToleranceNotReached {
            tol,
            estimate: err_estimate / value.abs(),
        });
    }
    Ok(QuadResult {
        value,
        err_estimate,
        evaluations: head.evaluations + body.evaluations,
    })
}

/// `I(t) = int_{-inf}^t (t - s)^{-sigma} e^{lambda s} e^{-s ln p} ds` by quadrature.
pub fn tempered_integral(params: &FracParams, tol: f64) -> Result<QuadResult> {
    let c = params.decay_rate();
    let q = laplace_singular_quad(c, params.sigma, tol)?;
    let scale = (params.t * c).exp();
    Ok(QuadResult {
        value: scale * q.value,
        err_estimate: scale * q.err_estimate,
        evaluations: q.evaluations,
    })
}

/// Finite-difference settings for [`tempered_derivative_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffOptions {
    pub h: f64,
    /// Combine steps `h` and `h / 2` with one Richardson extrapolation.
    pub richardson: bool,
    pub quad_tol: f64,
}

impl DiffOptions {
    /// Default step `1e-5 * max(1, |t|)`.
    pub fn for_point(t: f64) -> Self {
        Self {
            h: default_step(t),
            richardson: false,
            quad_tol: DEFAULT_QUAD_TOL,
        }
    }
}

pub fn default_step(t: f64) -> f64 {
    1e-5 * t.abs().max(1.0)
}

fn central_difference(params: &FracParams, h: f64, tol: f64) -> Result<f64> {
    let ahead = tempered_integral(&params.at(params.t + h)?, tol)?;
    let behind = tempered_integral(&params.at(params.t - h)?, tol)?;
    Ok((ahead.value - behind.value) / (2.0 * h))
}

/// Numerical tempered derivative at `params.t()` with step `h`.
pub fn tempered_derivative_numeric(params: &FracParams, h: f64) -> Result<f64> {
    tempered_derivative_with(
        params,
        &DiffOptions {
            h,
            richardson: false,
            quad_tol: DEFAULT_QUAD_TOL,
        },
    )
}

pub fn tempered_derivative_with(params: &FracParams, opts: &DiffOptions) -> Result<f64> {
    if !(opts.h > 0.0 && opts.h.is_finite()) {
        return domain(format!("step h = {} must be finite and > 0", opts.h));
    }
    let mut slope = central_difference(params, opts.h, opts.quad_tol)?;
    if opts.richardson {
        let fine = central_difference(params, 0.5 * opts.h, opts.quad_tol)?;
        slope = (4.0 * fine - slope) / 3.0;
    }
    let prefactor = (-params.lambda * params.t).exp() / gamma_fn(1.0 - params.sigma)?;
    Ok(prefactor * slope)
}

/// `e^{-t ln p} (lambda - ln p)^sigma`.
pub fn closed_form_derivative(params: &FracParams) -> f64 {
    (-params.t * params.p.ln()).exp() * params.decay_rate().powf(params.sigma)
}

/// One row of a numeric-versus-closed-form comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracCheck {
    pub p: f64,
    pub sigma: f64,
    pub lambda: f64,
    pub t: f64,
    pub numeric: f64,
    pub closed_form: f64,
    pub rel_err: f64,
}

impl FracCheck {
    /// `|numeric - closed| <= max(rel_tol * |closed|, abs_tol)`.
    pub fn within(&self, rel_tol: f64, abs_tol: f64) -> bool {
        (self.numeric - self.closed_form).abs() <= (rel_tol * self.closed_form.abs()).max(abs_tol)
    }
}

pub fn check_point(params: &FracParams, opts: &DiffOptions) -> Result<FracCheck> {
    let numeric = tempered_derivative_with(params, opts)?;
    let closed_form = closed_form_derivative(params);
    Ok(FracCheck {
        p: params.p,
        sigma: params.sigma,
        lambda: params.lambda,
        t: params.t,
        numeric,
        closed_form,
        rel_err: ((numeric - closed_form) / closed_form).abs(),
    })
}

/// `{0.1, 0.2, ..., 0.9}`, used for both `p` and `sigma`.
pub fn tenths() -> Vec<f64> {
    (1..=9).map(|k| k as f64 / 10.0).collect()
}

pub const LAMBDA_GRID: [f64; 4] = [0.0, 0.5, 1.0, 2.0];

/// Checks every combination, ordered by `(t, p, sigma, lambda)`, using the
/// default step for each `t`.
pub fn verify_grid(
    ps: &[f64],
    sigmas: &[f64],
    lambdas: &[f64],
    ts: &[f64],
    quad_tol: f64,
) -> Result<Vec<FracCheck>> {
    let mut rows = Vec::with_capacity(ps.len() * sigmas.len() * lambdas.len() * ts.len());
    for &t in ts {
        let opts = DiffOptions {
            quad_tol,
            ..DiffOptions::for_point(t)
        };
        for &p in ps {
            for &sigma in sigmas {
                for &lambda in lambdas {
                    rows.push(check_point(&FracParams::new(sigma, lambda, p, t)?, &opts)?);
                }
            }
        }
    }
    Ok(rows)
}
