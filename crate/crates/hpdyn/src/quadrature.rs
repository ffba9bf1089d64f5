//! Adaptive Gauss-Kronrod quadrature for complex-valued integrands, with the
//! real-line compactification `t = tan(theta)` and a logarithmic map for
//! far tails.
//!
//! Every integral takes a list of *hints*: abscissae where the integrand has
//! localized structure (near-singular points, scale transitions). Hints seed
//! the initial panel edges so the adaptive bisection finds the structure
//! without spending its budget on a blind search.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// 15-point Kronrod abscissae (positive half, QUADPACK QK15).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Embedded 7-point Gauss weights (odd-index abscissae of `XGK`).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const EVALS_PER_PANEL: usize = 15;

/// Tolerances and node budget for one integral.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Budget of integrand evaluations for the whole adaptive run.
    pub max_evals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_evals: 1 << 15,
        }
    }
}

impl QuadConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

fn qk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut vals = [Complex64::new(0.0, 0.0); 15];
    vals[7] = fc;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut resabs = WGK[7] * fc.norm();
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        vals[j] = f1;
        vals[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let value = kronrod * half;
    let raw = ((kronrod - gauss) * half).norm();
    let resabs = resabs * half.abs();
    // Resultant of |f - mean|, the scale the error estimate is rescaled by.
    let mean = kronrod * 0.5;
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((vals[j] - mean).norm() + (vals[14 - j] - mean).norm());
    }
    let resasc = resasc * half.abs();
    Panel {
        a,
        b,
        value,
        err: rescale_error(raw, resabs, resasc),
    }
}

/// QUADPACK error-estimate rescaling: sharpens the raw `|K - G|` difference
/// once the two rules nearly agree, and floors it at rounding level.
fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut scaled = err.abs();
    if resasc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / resasc).powf(1.5);
        scaled = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * resabs);
    }
    scaled
}

/// Integrates `f` over `[a, b]`, subdividing at interior `hints` first.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    hints: &[f64],
    cfg: &QuadConfig,
) -> Result<Complex64> {
    if !(a < b) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut edges: Vec<f64> = vec![a, b];
    for &h in hints {
        if h > a && h < b {
            edges.push(h);
        }
    }
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut panels: Vec<Panel> = Vec::with_capacity(64);
    let mut evals = 0usize;
    for w in edges.windows(2) {
        panels.push(qk15(&f, w[0], w[1]));
        evals += EVALS_PER_PANEL;
    }

    let min_width = f64::EPSILON * (a.abs() + b.abs() + 1.0);
    let mut settled_err = 0.0;

    loop {
        let total: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum::<f64>() + settled_err;
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.norm());
        if err <= tol {
            return Ok(total);
        }

        // Split the worst unsaturated panel.
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| (p.b - p.a) > min_width)
            .max_by(|(_, p), (_, q)| p.err.total_cmp(&q.err))
            .map(|(i, _)| i);
        let Some(idx) = worst else {
            // Every panel is at machine granularity.
            return Err(Error::QuadratureFailure {
                error: err,
                tolerance: tol,
                evals,
            });
        };
        if evals + 2 * EVALS_PER_PANEL > cfg.max_evals {
            return Err(Error::QuadratureFailure {
                error: err,
                tolerance: tol,
                evals,
            });
        }
        let p = panels.swap_remove(idx);
        let mid = 0.5 * (p.a + p.b);
        let left = qk15(&f, p.a, mid);
        let right = qk15(&f, mid, p.b);
        evals += 2 * EVALS_PER_PANEL;
        // Keep the error of panels that stopped shrinking out of the heap.
        for child in [left, right] {
            if (child.b - child.a) <= min_width {
                settled_err += child.err;
            }
            panels.push(child);
        }
    }
}

/// Integrates `f` over the whole real line through `t = tan(theta)`.
///
/// `hints_t` are abscissae in `t`-space; both tails are compactified uniformly.
pub fn integrate_real_line<F: Fn(f64) -> Complex64>(
    f: F,
    hints_t: &[f64],
    cfg: &QuadConfig,
) -> Result<Complex64> {
    integrate_tan_range(f, f64::NEG_INFINITY, f64::INFINITY, hints_t, cfg)
}

/// Integrates `f` over `[t_lo, t_hi]` (either side may be infinite) in the
/// `theta = atan(t)` variable, so wide ranges keep well-conditioned panels.
pub fn integrate_tan_range<F: Fn(f64) -> Complex64>(
    f: F,
    t_lo: f64,
    t_hi: f64,
    hints_t: &[f64],
    cfg: &QuadConfig,
) -> Result<Complex64> {
    let lo = t_lo.atan();
    let hi = t_hi.atan();
    let hints: Vec<f64> = hints_t.iter().map(|t| t.atan()).collect();
    let g = |theta: f64| {
        let t = theta.tan();
        let sec2 = 1.0 + t * t;
        f(t) * sec2
    };
    integrate(g, lo, hi, &hints, cfg)
}

/// Integrates a far tail `int_{t0}^{inf} g(t) dt` in the variable `v = ln t`,
/// remapped to `s in (0, 1)` by `v = v0 + s/(1-s)`.
///
/// The caller supplies the `v`-space integrand `w(v) = g(e^v) e^v`, which stays
/// representable even when `e^v` does not.
pub fn integrate_semiline_log<F: Fn(f64) -> Complex64>(
    w: F,
    t0: f64,
    hints_v: &[f64],
    cfg: &QuadConfig,
) -> Result<Complex64> {
    let v0 = t0.ln();
    let hints: Vec<f64> = hints_v
        .iter()
        .filter(|&&v| v > v0)
        .map(|v| {
            let d = v - v0;
            d / (1.0 + d)
        })
        .collect();
    let g = |s: f64| {
        let om = 1.0 - s;
        let v = v0 + s / om;
        w(v) / (om * om)
    };
    integrate(g, 0.0, 1.0, &hints, cfg)
}
