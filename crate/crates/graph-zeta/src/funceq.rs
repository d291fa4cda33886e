//! Completions of the zeta function, the involution behind the functional
//! equation, singularity-region geometry, and the closed forms for the
//! integer lattice.
//!
//! For an essentially `(q+1)`-regular graph the completed Bartholdi zeta
//!
//! ```text
//! xi(z, u) = (1-(1-u)^2 z^2)^{(q-1)/2} (1-(q+1)z+(1-u)(q+u)z^2) Z(z, u)
//! ```
//!
//! extends analytically to the complement of
//! `Omega = {(z, u) : g(z, u) in [-d, d]}` with
//! `g(z, u) = (1 + (1-u)(q+u) z^2)/z`, where it equals
//! `(g - (q+1)) / det_tau(g I - A)` and is invariant under
//! `psi: z -> 1/((1-u)(q+u) z)` because `g o psi = g`. The two evaluation
//! routes implemented here (series times prefactors inside the convergence
//! disc, shifted determinant outside) agree on the overlap, which is what
//! makes the functional-equation tests non-circular.
//!
//! The single-variable sets `Omega_w = {z : (1 + w z^2)/z in [-d, d]}`
//! govern whether extension is possible at all: they disconnect the plane
//! exactly for real `w` with `0 < w <= d^2/4`. Both the analytic classifier
//! and an independent flood-fill oracle are provided.

use num_complex::Complex64;

use crate::error::{Result, ZetaError};
use crate::numerics::simpson;
use crate::operators::TraceContext;
use crate::spectral::{by_parts_integral, det_tau_shifted, SpectralCdf};
use crate::zeta::{euler_prefactor, log_zeta_series, zeta_eval, DEFAULT_TORUS_GRID};

/// Geometry parameters for membership tests in the singularity regions.
#[derive(Clone, Copy, Debug)]
pub struct RegionParams {
    /// Degree bound `d` (equal to `q + 1` for regular contexts).
    pub d: f64,
    pub q: usize,
    /// Half-width of the tolerance band around the measure-zero region.
    pub eps_band: f64,
}

impl RegionParams {
    pub fn regular(q: usize) -> Self {
        Self {
            d: q as f64 + 1.0,
            q,
            eps_band: 1e-9,
        }
    }
}

/// The pencil invariant `g(z, u) = (1 + (1-u)(q+u) z^2)/z` and the involution
/// point `psi(z, u) = 1/((1-u)(q+u) z)`.
///
/// `g o psi = g` holds identically, which is the entire content of the
/// functional equation once the determinant route is in place.
pub fn g_and_psi(z: Complex64, u: Complex64, q: usize) -> Result<(Complex64, Complex64)> {
    if z.norm() < 1e-300 {
        return Err(ZetaError::Domain("g is singular at z = 0".into()));
    }
    let w = (1.0 - u) * (q as f64 + u);
    if w.norm() < 1e-300 {
        return Err(ZetaError::Domain(
            "psi is undefined at u = 1 and u = -q".into(),
        ));
    }
    let g = (1.0 + w * z * z) / z;
    Ok((g, 1.0 / (w * z)))
}

/// Membership in the band around `Omega = {(z,u) : g(z,u) in [-d, d]}`.
/// `z = 0` lies outside `Omega`.
pub fn omega_membership(z: Complex64, u: Complex64, params: &RegionParams) -> bool {
    if z.norm() < 1e-300 {
        return false;
    }
    let w = (1.0 - u) * (params.q as f64 + u);
    let g = (1.0 + w * z * z) / z;
    g.im.abs() <= params.eps_band && g.re.abs() <= params.d + params.eps_band
}

/// Analytic classifier: `Omega_w` disconnects the plane iff `w` is real with
/// `0 < w <= d^2/4`.
pub fn omega_w_disconnects(w: Complex64, d: f64) -> Result<bool> {
    if d <= 0.0 {
        return Err(ZetaError::BadParameter("need d > 0".into()));
    }
    let real = w.im.abs() <= 1e-12 * w.norm().max(1.0);
    Ok(real && w.re > 0.0 && w.re <= d * d / 4.0 + 1e-12)
}

/// Sampled polylines tracing `Omega_w = {z : (1 + w z^2)/z in [-d, d]}`,
/// adjacent samples no farther apart than `spacing`.
///
/// The set is parametrized by the two roots of `w z^2 - t z + 1 = 0` for
/// `t in [-d, d]`; for `w = 0` it degenerates to the half-lines `|z| >= 1/d`
/// on the real axis, clipped at `clip`.
pub fn omega_w_curve(w: Complex64, d: f64, spacing: f64, clip: f64) -> Vec<Vec<Complex64>> {
    if w.norm() < 1e-14 {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut x = 1.0 / d;
        while x <= clip {
            pos.push(Complex64::new(x, 0.0));
            neg.push(Complex64::new(-x, 0.0));
            x += spacing.max(1e-6);
        }
        return vec![pos, neg];
    }
    let roots = |t: f64| -> [Complex64; 2] {
        let disc = (Complex64::new(t * t, 0.0) - 4.0 * w).sqrt();
        [
            (t + disc) / (2.0 * w),
            (t - disc) / (2.0 * w),
        ]
    };
    // pair roots for continuity as t advances
    let pair = |prev: &[Complex64; 2], cur: &[Complex64; 2]| -> [Complex64; 2] {
        let keep = (cur[0] - prev[0]).norm() + (cur[1] - prev[1]).norm();
        let swap = (cur[1] - prev[0]).norm() + (cur[0] - prev[1]).norm();
        if swap < keep {
            [cur[1], cur[0]]
        } else {
            *cur
        }
    };
    let mut branch0 = Vec::new();
    let mut branch1 = Vec::new();
    let mut t = -d;
    let mut cur = roots(t);
    branch0.push(cur[0]);
    branch1.push(cur[1]);
    while t < d {
        let mut step = (d - t).min(d / 64.0);
        let mut next;
        let mut nroots;
        let mut depth = 0;
        loop {
            next = t + step;
            nroots = pair(&cur, &roots(next));
            let jump = (nroots[0] - cur[0]).norm().max((nroots[1] - cur[1]).norm());
            if jump <= spacing || depth >= 48 {
                break;
            }
            step *= 0.5;
            depth += 1;
        }
        t = next;
        cur = nroots;
        branch0.push(cur[0]);
        branch1.push(cur[1]);
    }
    vec![branch0, branch1]
}

/// Flood-fill disconnection oracle on a square grid covering three times the
/// bounding disc of `Omega_w`.
///
/// Cells visited by the sampled curve are obstacles (with diagonal gaps
/// sealed so the 4-connected free region cannot leak through); free cells
/// are flooded from the grid boundary and the set disconnects the plane iff
/// the flood never reaches the free cell nearest the origin.
pub fn omega_disconnection_oracle(w: Complex64, d: f64, grid: usize) -> Result<bool> {
    if grid < 64 {
        return Err(ZetaError::BadParameter("grid must be >= 64".into()));
    }
    if d <= 0.0 {
        return Err(ZetaError::BadParameter("need d > 0".into()));
    }
    let extent = if w.norm() < 1e-14 {
        3.0 * (1.0 / d + 1.0)
    } else {
        3.0 * (d + (d * d + 4.0 * w.norm()).sqrt()) / (2.0 * w.norm())
    };
    let h = 2.0 * extent / grid as f64;
    let cell_of = |z: Complex64| -> Option<(usize, usize)> {
        let ix = ((z.re + extent) / h).floor();
        let iy = ((z.im + extent) / h).floor();
        if ix < 0.0 || iy < 0.0 || ix >= grid as f64 || iy >= grid as f64 {
            None
        } else {
            Some((ix as usize, iy as usize))
        }
    };

    let mut obstacle = vec![false; grid * grid];
    let idx = |i: usize, j: usize| j * grid + i;
    for branch in omega_w_curve(w, d, h / 2.0, extent * 0.98) {
        let mut prev: Option<(usize, usize)> = None;
        for z in branch {
            let Some((i, j)) = cell_of(z) else {
                prev = None;
                continue;
            };
            obstacle[idx(i, j)] = true;
            if let Some((pi, pj)) = prev {
                if pi.abs_diff(i) == 1 && pj.abs_diff(j) == 1 {
                    // seal the diagonal so 4-connected flow cannot slip through
                    obstacle[idx(i, pj)] = true;
                }
            }
            prev = Some((i, j));
        }
    }

    // flood the free cells from the boundary
    let mut reached = vec![false; grid * grid];
    let mut queue = std::collections::VecDeque::new();
    for i in 0..grid {
        for &j in &[0usize, grid - 1] {
            for (a, b) in [(i, j), (j, i)] {
                if !obstacle[idx(a, b)] && !reached[idx(a, b)] {
                    reached[idx(a, b)] = true;
                    queue.push_back((a, b));
                }
            }
        }
    }
    while let Some((i, j)) = queue.pop_front() {
        let push = |a: usize, b: usize, reached: &mut Vec<bool>, queue: &mut std::collections::VecDeque<(usize, usize)>| {
            if !obstacle[idx(a, b)] && !reached[idx(a, b)] {
                reached[idx(a, b)] = true;
                queue.push_back((a, b));
            }
        };
        if i > 0 {
            push(i - 1, j, &mut reached, &mut queue);
        }
        if i + 1 < grid {
            push(i + 1, j, &mut reached, &mut queue);
        }
        if j > 0 {
            push(i, j - 1, &mut reached, &mut queue);
        }
        if j + 1 < grid {
            push(i, j + 1, &mut reached, &mut queue);
        }
    }

    // free cell nearest the origin (the origin is never on Omega_w)
    let center = (grid / 2) as i64;
    let mut origin_cell = None;
    'search: for radius in 0..(grid as i64 / 2) {
        let mut best: Option<(f64, (usize, usize))> = None;
        for di in -radius..=radius {
            for dj in -radius..=radius {
                if di.abs().max(dj.abs()) != radius {
                    continue;
                }
                let (i, j) = ((center + di) as usize, (center + dj) as usize);
                if i >= grid || j >= grid || obstacle[idx(i, j)] {
                    continue;
                }
                let cx = -extent + (i as f64 + 0.5) * h;
                let cy = -extent + (j as f64 + 0.5) * h;
                let r2 = cx * cx + cy * cy;
                if best.is_none_or(|(b, _)| r2 < b) {
                    best = Some((r2, (i, j)));
                }
            }
        }
        if let Some((_, cell)) = best {
            origin_cell = Some(cell);
            break 'search;
        }
    }
    let Some((oi, oj)) = origin_cell else {
        return Err(ZetaError::Domain(
            "no free cell near the origin at this resolution".into(),
        ));
    };
    Ok(!reached[idx(oi, oj)])
}

fn require_regular(ctx: &TraceContext, q: usize) -> Result<()> {
    let ok = match ctx {
        TraceContext::Finite(f) => f.graph.is_regular() && f.graph.max_degree() == q + 1,
        TraceContext::Periodic(p) => p
            .coordinates()
            .iter()
            .enumerate()
            .all(|(v, _)| p.lattice_degree(v) == q + 1),
        TraceContext::SelfSimilar(_) => false,
    };
    if ok {
        Ok(())
    } else {
        Err(ZetaError::Domain(format!(
            "completion prefactors require a {}-regular context",
            q + 1
        )))
    }
}

/// Completed Bartholdi zeta through the series route (inside the convergence
/// disc): prefactors times `Z` as a trace state.
pub fn xi_series_route(
    ctx: &TraceContext,
    z: Complex64,
    u: Complex64,
    q: usize,
) -> Result<Complex64> {
    require_regular(ctx, q)?;
    if z.norm() < 1e-300 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let bound = ctx.alpha(u);
    let rho = bound.alpha * z.norm();
    if rho >= 0.9 {
        return Err(ZetaError::Domain(format!(
            "series route needs alpha |z| < 0.9, got {rho}"
        )));
    }
    // truncation order for ~1e-14 tails
    let m_max = ((-32.0 / rho.ln()).ceil() as usize).clamp(30, 400);
    let mut series = log_zeta_series(ctx, u, m_max)?;
    let tau_id = ctx.tau_identity();
    if tau_id != 1.0 {
        for c in series.coefficients.iter_mut() {
            *c /= tau_id;
        }
    }
    let zeta = zeta_eval(&series, z)?.value;
    let one = Complex64::new(1.0, 0.0);
    let pref1 = euler_prefactor(u, z, (q as f64 - 1.0) / 2.0)?;
    let pref2 = one - (q as f64 + 1.0) * z + (one - u) * (q as f64 + u) * z * z;
    Ok(pref1 * pref2 * zeta)
}

/// Completed Bartholdi zeta through the determinant route, valid on all of
/// `Omega^c`: `xi = (g - (q+1)) / det_tau(g I - A)`.
pub fn xi_det_route(
    ctx: &TraceContext,
    z: Complex64,
    u: Complex64,
    q: usize,
) -> Result<Complex64> {
    require_regular(ctx, q)?;
    if z.norm() < 1e-300 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let params = RegionParams::regular(q);
    if omega_membership(z, u, &params) {
        return Err(ZetaError::Domain(
            "(z, u) lies in the singularity band Omega".into(),
        ));
    }
    let w = (1.0 - u) * (q as f64 + u);
    let g = (1.0 + w * z * z) / z;
    let cdf = crate::spectral::spectral_cdf(ctx, DEFAULT_TORUS_GRID)?;
    let det = det_tau_shifted(&cdf, g)?;
    Ok((g - (q as f64 + 1.0)) / det)
}

/// Completed Bartholdi zeta: series route inside `|z| < 1/(2 alpha)`,
/// determinant route elsewhere in `Omega^c`.
pub fn xi_bartholdi(
    ctx: &TraceContext,
    z: Complex64,
    u: Complex64,
    q: usize,
) -> Result<Complex64> {
    let params = RegionParams::regular(q);
    if omega_membership(z, u, &params) {
        return Err(ZetaError::Domain(
            "(z, u) lies in the singularity band Omega".into(),
        ));
    }
    let bound = ctx.alpha(u);
    if bound.alpha * z.norm() < 0.5 {
        xi_series_route(ctx, z, u, q)
    } else {
        xi_det_route(ctx, z, u, q)
    }
}

/// The Ihara completion `xi(z) = (1-z^2)^{(q-1)/2} (1-(q+1)z+qz^2) Z(z)`,
/// obtained from the Bartholdi extension at `u = 0`.
pub fn xi_ihara(ctx: &TraceContext, z: Complex64, q: usize) -> Result<Complex64> {
    xi_bartholdi(ctx, z, Complex64::new(0.0, 0.0), q)
}

/// Spectral form of the Ihara completion:
/// `xi(z) = exp(-integral_{-d}^{d} z F(lambda)/(1+qz^2-lambda z) dlambda)`.
pub fn xi_ihara_spectral(cdf: &SpectralCdf, z: Complex64, q: usize) -> Result<Complex64> {
    Ok((-by_parts_integral(cdf, z, q)?).exp())
}

/// Largest subinterval of `(-2 sqrt q, 2 sqrt q)` on which `F` increases by
/// less than `tol`, provided it is wider than `d/100`; `q = d - 1`.
///
/// When such a gap exists the completed zeta extends analytically through it
/// and the functional equation holds; a dense spectrum yields `None`.
pub fn hole_extension_applicable(cdf: &SpectralCdf, tol: f64) -> Option<(f64, f64)> {
    let d = cdf.support_bound();
    let q = d - 1.0;
    if q < 1.0 {
        return None;
    }
    let hi = 2.0 * q.sqrt();
    let lo = -hi;
    let inside: Vec<(f64, f64)> = cdf
        .atoms()
        .iter()
        .copied()
        .filter(|&(l, _)| l > lo && l < hi)
        .collect();
    let mut points = vec![lo];
    points.extend(inside.iter().map(|&(l, _)| l));
    points.push(hi);
    let mut prefix = vec![0.0];
    for &(_, w) in &inside {
        prefix.push(prefix.last().unwrap() + w);
    }
    prefix.push(*prefix.last().unwrap());
    // mass strictly inside (points[i], points[j]) is prefix[j-1] - prefix[i]
    let n = points.len();
    let mut best: Option<(f64, f64)> = None;
    let mut j = 1usize;
    for i in 0..n - 1 {
        if j <= i {
            j = i + 1;
        }
        while j + 1 < n && prefix[j] - prefix[i] < tol {
            j += 1;
        }
        // widest valid end for this i: j while mass < tol
        let jj = if prefix[j.saturating_sub(1).max(i)] - prefix[i] < tol && j < n {
            j
        } else {
            j - 1
        };
        if jj > i {
            let mass = prefix[jj - 1] - prefix[i];
            if mass < tol {
                let width = points[jj] - points[i];
                if best.is_none_or(|(a, b)| width > b - a) {
                    best = Some((points[i], points[jj]));
                }
            }
        }
    }
    best.filter(|(a, b)| b - a >= d / 100.0)
}

/// Contour variant of the spectral completion: integrates along
/// `[-d, c - eps]`, the semicircle `|lambda - c| = eps` on the side
/// `sigma in {+1, -1}`, and `[c + eps, d]`, with `c = 2 corner sqrt(q)`.
///
/// `phi` must be the analytic continuation of the distribution function
/// across the corner; when a reference distribution is supplied, `phi` is
/// checked against it on the real segments. Only `q >= 2` admits such
/// continuations usefully (for `q = 1` the corner sits at the endpoint of
/// the spectrum and the hole criterion already applies), so smaller `q` is
/// rejected.
#[allow(clippy::too_many_arguments)]
pub fn contour_xi<F>(
    phi: F,
    side: i8,
    corner: i8,
    eps: f64,
    z: Complex64,
    q: usize,
    d: f64,
    reference: Option<(&SpectralCdf, f64)>,
) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    if q < 2 {
        return Err(ZetaError::Domain(
            "contour extension requires q >= 2".into(),
        ));
    }
    if side.abs() != 1 || corner.abs() != 1 {
        return Err(ZetaError::BadParameter("side and corner must be +-1".into()));
    }
    let c = 2.0 * corner as f64 * (q as f64).sqrt();
    if !(eps > 0.0 && c - eps > -d && c + eps < d) {
        return Err(ZetaError::BadParameter(format!(
            "semicircle [{} +- {eps}] must fit inside (-{d}, {d})",
            c
        )));
    }
    if z.norm() < 1e-300 {
        return Ok(Complex64::new(1.0, 0.0));
    }

    // the integrand is singular where lambda = 1/z + qz; keep away from the
    // contour
    let v = 1.0 / z + q as f64 * z;
    let dist = contour_distance(v, c, eps, d, side);
    if dist <= 1e-8 * (1.0 + v.norm()) {
        return Err(ZetaError::SingularIntegrand(format!(
            "1/z + qz = {v} lies on the integration contour"
        )));
    }

    if let Some((cdf, tol)) = reference {
        for seg in [(-d, c - eps), (c + eps, d)] {
            for k in 0..=32 {
                let l = seg.0 + (seg.1 - seg.0) * k as f64 / 32.0;
                let diff = (phi(Complex64::new(l, 0.0)).re - cdf.value(l)).abs();
                if diff > tol {
                    return Err(ZetaError::AnalyticityViolation(format!(
                        "phi({l}) differs from F by {diff}"
                    )));
                }
            }
        }
    }

    let kern = |lambda: Complex64| -> Complex64 {
        z * phi(lambda) / (1.0 + q as f64 * z * z - lambda * z)
    };
    let seg1 = simpson(|l| kern(Complex64::new(l, 0.0)), -d, c - eps, 256);
    let seg2 = simpson(|l| kern(Complex64::new(l, 0.0)), c + eps, d, 256);
    // semicircle from c - eps to c + eps on the chosen side
    let arc = if side == 1 {
        -simpson(
            |th| {
                let lam = c + eps * Complex64::from_polar(1.0, th);
                kern(lam) * Complex64::new(0.0, eps) * Complex64::from_polar(1.0, th)
            },
            0.0,
            std::f64::consts::PI,
            256,
        )
    } else {
        simpson(
            |th| {
                let lam = c + eps * Complex64::from_polar(1.0, th);
                kern(lam) * Complex64::new(0.0, eps) * Complex64::from_polar(1.0, th)
            },
            std::f64::consts::PI,
            2.0 * std::f64::consts::PI,
            256,
        )
    };
    Ok((-(seg1 + arc + seg2)).exp())
}

fn contour_distance(v: Complex64, c: f64, eps: f64, d: f64, side: i8) -> f64 {
    let seg_dist = |a: f64, b: f64| -> f64 {
        let x = v.re.clamp(a, b);
        (v - Complex64::new(x, 0.0)).norm()
    };
    let mut dist = seg_dist(-d, c - eps).min(seg_dist(c + eps, d));
    let rel = v - Complex64::new(c, 0.0);
    let on_side = if side == 1 { rel.im >= 0.0 } else { rel.im <= 0.0 };
    let arc_dist = if on_side {
        (rel.norm() - eps).abs()
    } else {
        // nearest arc points are the endpoints on the real axis
        (v - Complex64::new(c - eps, 0.0))
            .norm()
            .min((v - Complex64::new(c + eps, 0.0)).norm())
    };
    dist = dist.min(arc_dist);
    dist
}

/// Sampled polyline of `Omega~_q = {z : 1/z + qz in Gamma}` for the contour
/// above.
pub fn omega_tilde_curve(
    q: usize,
    eps: f64,
    d: f64,
    side: i8,
    corner: i8,
    samples: usize,
) -> Vec<Complex64> {
    let c = 2.0 * corner as f64 * (q as f64).sqrt();
    let mut lambdas = Vec::with_capacity(3 * samples);
    for k in 0..=samples {
        let t = k as f64 / samples as f64;
        lambdas.push(Complex64::new(-d + (c - eps + d) * t, 0.0));
    }
    for k in 0..=samples {
        let th = if side == 1 {
            std::f64::consts::PI * (1.0 - k as f64 / samples as f64)
        } else {
            std::f64::consts::PI * (1.0 + k as f64 / samples as f64)
        };
        lambdas.push(c + eps * Complex64::from_polar(1.0, th));
    }
    for k in 0..=samples {
        let t = k as f64 / samples as f64;
        lambdas.push(Complex64::new(c + eps + (d - c - eps) * t, 0.0));
    }
    let mut out = Vec::with_capacity(2 * lambdas.len());
    for lam in lambdas {
        // z solving q z^2 - lambda z + 1 = 0
        let disc = (lam * lam - 4.0 * q as f64).sqrt();
        out.push((lam + disc) / (2.0 * q as f64));
        out.push((lam - disc) / (2.0 * q as f64));
    }
    out
}

/// Values of the closed-form zeta of the integer lattice.
#[derive(Clone, Copy, Debug)]
pub struct ClairValue {
    pub inv_zeta: Complex64,
    pub zeta: Complex64,
}

/// Closed form on `Z`:
/// `1/Z(z, u) = (1+(1-u^2)z^2)/2 * (1 + sqrt(1 - 4z^2/(1+(1-u^2)z^2)^2))`.
///
/// The square root is `+1` at `z = 0` and the principal branch realizes the
/// analytic extension on both components of the complement of
/// `{(z, u) : (1+(1-u^2)z^2)/z in [-2, 2]}` (the root's argument only
/// touches the negative axis on that set). At `u = 0` this gives `Z = 1`
/// inside the unit circle and `Z = z^{-2}` outside.
pub fn clair_zeta(z: Complex64, u: Complex64) -> Result<ClairValue> {
    let base = 1.0 + (1.0 - u * u) * z * z;
    if z.norm() > 1e-300 {
        let g = base / z;
        if g.im.abs() <= 1e-9 && g.re.abs() <= 2.0 + 1e-9 {
            return Err(ZetaError::Domain(format!(
                "(z, u) lies on the singular set of the lattice zeta (g = {g})"
            )));
        }
    }
    let s = (1.0 - 4.0 * z * z / (base * base)).sqrt();
    let inv_zeta = base / 2.0 * (1.0 + s);
    Ok(ClairValue {
        inv_zeta,
        zeta: 1.0 / inv_zeta,
    })
}

/// Ihara completion of the lattice zeta: `xi(z) = (1-z)^2 Z(z, 0)`, equal to
/// `(z-1)^2` inside the unit circle and `(1/z-1)^2` outside.
pub fn clair_xi(z: Complex64) -> Result<Complex64> {
    let v = clair_zeta(z, Complex64::new(0.0, 0.0))?;
    let one = Complex64::new(1.0, 0.0);
    Ok((one - z) * (one - z) * v.zeta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{finite_family, periodic_lattice, FamilyKind, PeriodicSpec};
    use crate::numerics::SplitMix64;
    use crate::spectral::spectral_cdf;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn psi_is_an_involution_and_preserves_g() {
        let mut rng = SplitMix64::new(41);
        for q in [1usize, 2, 3] {
            for _ in 0..64 {
                let z = rng.complex_in_annulus(0.05, 2.0);
                let u = rng.complex_in_annulus(0.0, 0.8);
                let (g, pz) = g_and_psi(z, u, q).unwrap();
                let (g2, ppz) = g_and_psi(pz, u, q).unwrap();
                assert!((g - g2).norm() < 1e-12 * g.norm().max(1.0));
                assert!((ppz - z).norm() < 1e-12 * z.norm().max(1.0));
            }
        }
    }

    #[test]
    fn psi_fixed_point() {
        let u = c(0.3, 0.1);
        let q = 2;
        let w = (1.0 - u) * (q as f64 + u);
        let z = 1.0 / w.sqrt();
        let (_, pz) = g_and_psi(z, u, q).unwrap();
        assert!((pz - z).norm() < 1e-12);
    }

    #[test]
    fn psi_at_u_zero_is_one_over_qz() {
        let z = c(0.4, 0.2);
        let (_, pz) = g_and_psi(z, c(0.0, 0.0), 3).unwrap();
        assert!((pz - 1.0 / (3.0 * z)).norm() < 1e-14);
    }

    #[test]
    fn membership_examples() {
        let params = RegionParams::regular(2);
        // g = 2 sqrt 2 at z = 1/sqrt 2, u = 0: inside [-3, 3]
        assert!(omega_membership(c(1.0 / 2f64.sqrt(), 0.0), c(0.0, 0.0), &params));
        // tiny z: g ~ 100, outside
        assert!(!omega_membership(c(0.01, 0.0), c(0.0, 0.0), &params));
        assert!(!omega_membership(c(0.0, 0.0), c(0.0, 0.0), &params));
        // the circle |z| = 1/sqrt q at u = 0 lies inside Omega
        for k in 0..8 {
            let th = std::f64::consts::TAU * k as f64 / 8.0;
            let z = Complex64::from_polar(1.0 / 2f64.sqrt(), th);
            assert!(omega_membership(z, c(0.0, 0.0), &params), "theta = {th}");
        }
    }

    #[test]
    fn membership_is_psi_invariant() {
        let params = RegionParams::regular(2);
        let mut rng = SplitMix64::new(7);
        for _ in 0..128 {
            let z = rng.complex_in_annulus(0.05, 2.0);
            let u = rng.complex_in_annulus(0.0, 0.7);
            if let Ok((_, pz)) = g_and_psi(z, u, 2) {
                assert_eq!(
                    omega_membership(z, u, &params),
                    omega_membership(pz, u, &params)
                );
            }
        }
    }

    #[test]
    fn classifier_examples() {
        assert!(omega_w_disconnects(c(0.5, 0.0), 2.0).unwrap());
        assert!(!omega_w_disconnects(c(2.0, 0.0), 2.0).unwrap());
        assert!(!omega_w_disconnects(c(0.3, 0.1), 2.0).unwrap());
        assert!(!omega_w_disconnects(c(0.0, 0.0), 2.0).unwrap());
        assert!(omega_w_disconnects(c(1.0, 0.0), 2.0).unwrap()); // w = d^2/4
        assert!(!omega_w_disconnects(c(-0.5, 0.0), 2.0).unwrap());
    }

    #[test]
    fn oracle_agrees_with_classifier_on_spot_checks() {
        for (w, d) in [
            (c(0.5, 0.0), 2.0),
            (c(1.0, 0.0), 2.0),
            (c(2.0, 0.0), 2.0),
            (c(0.0, 1.0), 2.0),
            (c(0.0, 0.0), 2.0),
            (c(-0.7, 0.0), 2.0),
            (c(0.3, 0.1), 2.0),
        ] {
            let expect = omega_w_disconnects(w, d).unwrap();
            let got = omega_disconnection_oracle(w, d, 256).unwrap();
            assert_eq!(got, expect, "w = {w}");
        }
    }

    #[test]
    fn xi_routes_agree_on_overlap() {
        for g in [
            finite_family(FamilyKind::Complete, 4).unwrap(),
            finite_family(FamilyKind::Petersen, 10).unwrap(),
        ] {
            let ctx = TraceContext::finite(g);
            let u = c(0.2, 0.1);
            let alpha = ctx.alpha(u).alpha;
            for k in 1..=6 {
                let z = Complex64::from_polar(0.4 * k as f64 / 6.0 / alpha, 0.7 * k as f64);
                let params = RegionParams::regular(2);
                if omega_membership(z, u, &params) {
                    continue;
                }
                let a = xi_series_route(&ctx, z, u, 2).unwrap();
                let b = xi_det_route(&ctx, z, u, 2).unwrap();
                assert!((a - b).norm() < 1e-8, "z = {z}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn functional_equation_on_k4_samples() {
        let ctx = TraceContext::finite(finite_family(FamilyKind::Complete, 4).unwrap());
        let u = c(0.2, 0.0);
        for k in 1..=5 {
            let z = Complex64::from_polar(0.02 * k as f64, 1.1 * k as f64);
            let (_, pz) = g_and_psi(z, u, 2).unwrap();
            let a = xi_bartholdi(&ctx, z, u, 2).unwrap();
            let b = xi_bartholdi(&ctx, pz, u, 2).unwrap();
            assert!((a - b).norm() < 1e-8, "z = {z}: {a} vs {b}");
        }
    }

    #[test]
    fn xi_limits_at_origin() {
        let ctx = TraceContext::finite(finite_family(FamilyKind::Complete, 4).unwrap());
        let zero = c(0.0, 0.0);
        assert_eq!(xi_bartholdi(&ctx, zero, c(0.3, 0.1), 2).unwrap(), c(1.0, 0.0));
        let d = 3.0;
        let phi = smoothstep_cdf_fn(d);
        assert_eq!(
            contour_xi(&phi, 1, 1, 0.1, zero, 2, d, None).unwrap(),
            c(1.0, 0.0)
        );
    }

    #[test]
    fn xi_on_c4_matches_closed_form() {
        let ctx = TraceContext::finite(finite_family(FamilyKind::Cycle, 4).unwrap());
        let z = c(0.3, 0.0);
        let xi = xi_bartholdi(&ctx, z, c(0.0, 0.0), 1).unwrap();
        let expect = (1.0 - z) * (1.0 - z) * (1.0 - z.powu(4)).powf(-0.5);
        assert!((xi - expect).norm() < 1e-9, "{xi} vs {expect}");
    }

    #[test]
    fn spectral_xi_matches_bartholdi_at_u_zero() {
        let ctx = TraceContext::finite(finite_family(FamilyKind::Complete, 4).unwrap());
        let cdf = spectral_cdf(&ctx, 64).unwrap();
        let z = c(0.1, 0.0);
        let a = xi_ihara_spectral(&cdf, z, 2).unwrap();
        let b = xi_bartholdi(&ctx, z, c(0.0, 0.0), 2).unwrap();
        assert!((a - b).norm() < 1e-6, "{a} vs {b}");
        assert_eq!(
            xi_ihara_spectral(&cdf, c(0.0, 0.0), 2).unwrap(),
            c(1.0, 0.0)
        );
    }

    #[test]
    fn evaluation_at_gap_roots_is_finite() {
        // K4 has a spectral gap around x = 0; the roots of 1 + qz^2 - xz = 0
        // at x = 0, q = 2 are z = +-i/sqrt(2). The Stieltjes determinant is
        // analytic there and the by-parts completion exists as a principal
        // value.
        let ctx = TraceContext::finite(finite_family(FamilyKind::Complete, 4).unwrap());
        let cdf = spectral_cdf(&ctx, 64).unwrap();
        let z_plus = c(0.0, 1.0 / 2f64.sqrt());
        let xi_at = xi_ihara_spectral(&cdf, z_plus, 2).unwrap();
        assert!(xi_at.norm().is_finite() && xi_at.norm() > 0.0);

        // the determinant route is smooth in a neighborhood of z+
        let det_at = crate::spectral::stieltjes_log_det(&cdf, z_plus, 2).unwrap();
        for k in 0..4 {
            let dz = Complex64::from_polar(1e-3, 0.4 + std::f64::consts::FRAC_PI_2 * k as f64);
            let det_near = crate::spectral::stieltjes_log_det(&cdf, z_plus + dz, 2).unwrap();
            assert!(
                (det_near - det_at).norm() < 1e-2,
                "determinant jumps near z+: {det_at} vs {det_near}"
            );
        }

        // approaching z+ radially (the pole stays off the real axis), the
        // by-parts value converges in modulus to the principal value
        let near = xi_ihara_spectral(&cdf, z_plus * 0.9995, 2).unwrap();
        assert!((near.norm() - xi_at.norm()).abs() < 1e-2);
    }

    #[test]
    fn hole_detection() {
        // K4: eigenvalues {3, -1^3}; inside (-2 sqrt 2, 2 sqrt 2) there is a
        // flat stretch from -1 to the right end
        let ctx = TraceContext::finite(finite_family(FamilyKind::Complete, 4).unwrap());
        let cdf = spectral_cdf(&ctx, 64).unwrap();
        let (a, b) = hole_extension_applicable(&cdf, 1e-9).expect("gap found");
        assert!(a <= -1.0 + 1e-9 && b >= 2.0, "({a}, {b})");
        assert!(a < 0.0 && 0.0 < b);

        // lattice: dense spectrum, no usable gap
        let lat = periodic_lattice(&PeriodicSpec::z_lattice(), 4).unwrap();
        let lcdf = spectral_cdf(&lat, 2048).unwrap();
        assert!(hole_extension_applicable(&lcdf, 1e-6).is_none());
    }

    fn smoothstep_cdf_fn(d: f64) -> impl Fn(Complex64) -> Complex64 {
        move |lam: Complex64| {
            let s = (lam + d) / (2.0 * d);
            s * s * (3.0 - 2.0 * s)
        }
    }

    #[test]
    fn contour_null_test_and_pairing() {
        let q = 2usize;
        let d = 3.0;
        let phi = smoothstep_cdf_fn(d);
        // straight-line evaluation with the same (exactly represented) F
        let atoms: Vec<(f64, f64)> = {
            // fine discretization of the smooth CDF as atoms for the
            // straight-line reference
            let n = 4000usize;
            let mut atoms = Vec::with_capacity(n);
            let mut prev = 0.0;
            for k in 1..=n {
                let l = -d + 2.0 * d * k as f64 / n as f64;
                let f = phi(c(l, 0.0)).re;
                atoms.push((l - d / n as f64, f - prev));
                prev = f;
            }
            atoms
        };
        let cdf = SpectralCdf::from_atoms(atoms, d, crate::spectral::CdfKind::Sampled).unwrap();
        let z = c(0.11, 0.06);
        let straight = xi_ihara_spectral(&cdf, z, q).unwrap();
        let contour = contour_xi(&phi, 1, 1, 0.12, z, q, d, Some((&cdf, 1e-3))).unwrap();
        assert!(
            (straight - contour).norm() < 1e-4 * straight.norm(),
            "{straight} vs {contour}"
        );

        // the paired evaluation z -> 1/(qz) uses the identical kernel values
        let z2 = 1.0 / (q as f64 * z);
        let a = contour_xi(&phi, 1, 1, 0.12, z, q, d, None).unwrap();
        let b = contour_xi(&phi, 1, 1, 0.12, z2, q, d, None).unwrap();
        assert!((a - b).norm() < 1e-7 * a.norm().max(1.0), "{a} vs {b}");
    }

    #[test]
    fn contour_rejects_q_one_and_bad_phi() {
        let phi = smoothstep_cdf_fn(2.0);
        assert!(matches!(
            contour_xi(&phi, 1, 1, 0.1, c(0.1, 0.0), 1, 2.0, None),
            Err(ZetaError::Domain(_))
        ));

        // a phi that disagrees with the reference F is rejected
        let d = 3.0;
        let ctx = TraceContext::finite(finite_family(FamilyKind::Complete, 4).unwrap());
        let cdf = spectral_cdf(&ctx, 64).unwrap();
        let err = contour_xi(&phi, 1, 1, 0.1, c(0.05, 0.0), 2, d, Some((&cdf, 1e-6)));
        assert!(matches!(err, Err(ZetaError::AnalyticityViolation(_))));
    }

    #[test]
    fn clair_values() {
        let v = clair_zeta(c(0.5, 0.0), c(0.0, 0.0)).unwrap();
        assert!((v.zeta - c(1.0, 0.0)).norm() < 1e-12);
        let v = clair_zeta(c(2.0, 0.0), c(0.0, 0.0)).unwrap();
        assert!((v.zeta - c(0.25, 0.0)).norm() < 1e-12);
        let xi = clair_xi(c(0.5, 0.0)).unwrap();
        assert!((xi - c(0.25, 0.0)).norm() < 1e-12);
        let xi_out = clair_xi(c(2.0, 0.0)).unwrap();
        assert!((xi_out - c(0.25, 0.0)).norm() < 1e-12); // (1/2 - 1)^2
        // points on the unit circle are rejected at u = 0
        assert!(clair_zeta(c(1.0, 0.0), c(0.0, 0.0)).is_err());
    }
}
