//! Shared numeric helpers: branch-tracked logarithms and powers, quadrature,
//! Taylor coefficient extraction and deterministic sampling.
//!
//! Every analytic quantity in this crate that involves a logarithm or a
//! fractional power fixes its branch by continuation along an explicit path
//! (usually the radial segment from the origin), never by silently taking the
//! principal branch. The helpers here centralise that policy.

use num_complex::Complex64;

use crate::error::{Result, ZetaError};

/// `u^k` with the combinatorial convention `0^0 = 1`.
///
/// Cycle weights `u^{bc}` and `u^{cbc}` must count unweighted objects when the
/// exponent vanishes, also at `u = 0`.
pub fn cpow(u: Complex64, k: usize) -> Complex64 {
    if k == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        u.powu(k as u32)
    }
}

/// Principal logarithm shifted so the branch cut avoids the half-plane
/// `Re(e^{-i phi} w) > 0`.
///
/// For a family of points known to lie in a common open half-plane (for
/// example `g - lambda` with `lambda` in a real segment not containing `g`),
/// `log_halfplane(w, phi)` with `phi` the direction of the separating normal
/// gives one consistent analytic branch for the whole family.
pub fn log_halfplane(w: Complex64, phi: f64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, -phi);
    let shifted = rot * w;
    Complex64::new(shifted.norm().ln(), shifted.arg()) + Complex64::new(0.0, phi)
}

/// Continuously tracked logarithm along a sampled path of nonzero values.
///
/// `values[0]` anchors the branch via its principal logarithm; every later
/// point picks the branch closest to its predecessor. The caller is
/// responsible for sampling densely enough that consecutive points never jump
/// by more than (say) a quarter turn; `continued_log_radial` below does that
/// adaptively.
pub fn track_log(values: &[Complex64], anchor: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(values.len());
    let mut prev = anchor;
    for &v in values {
        let mut lg = Complex64::new(v.norm().ln(), v.arg());
        let mut k = ((prev.im - lg.im) / std::f64::consts::TAU).round();
        lg.im += k * std::f64::consts::TAU;
        // one refinement step in case of rounding at the pi boundary
        k = ((prev.im - lg.im) / std::f64::consts::TAU).round();
        lg.im += k * std::f64::consts::TAU;
        prev = lg;
        out.push(lg);
    }
    out
}

/// `log f(z)` continued from `t = 0` to `t = 1` along `t -> f(t)`, where
/// `f(0)` is anchored at its principal logarithm.
///
/// The path is subdivided adaptively until consecutive samples move by less
/// than half a radian in argument and less than a factor `e^{1/2}` in
/// modulus. Fails with `SingularPencil` if `f` vanishes (or nearly vanishes)
/// on the path or if the required resolution exceeds the refinement budget.
pub fn continued_log_path<F>(f: F, steps: usize) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    const TINY: f64 = 1e-300;
    let mut t_prev = 0.0_f64;
    let mut v_prev = f(0.0);
    if v_prev.norm() < TINY {
        return Err(ZetaError::SingularPencil {
            at: "path start".into(),
        });
    }
    let mut log_acc = Complex64::new(v_prev.norm().ln(), v_prev.arg());
    let n = steps.max(2);
    for k in 1..=n {
        let mut t_next = k as f64 / n as f64;
        let mut v_next = f(t_next);
        let mut depth = 0usize;
        loop {
            if v_next.norm() < TINY {
                return Err(ZetaError::SingularPencil {
                    at: format!("path parameter t = {t_next}"),
                });
            }
            let ratio = v_next / v_prev;
            if ratio.arg().abs() <= 0.5 && ratio.norm().ln().abs() <= 0.5 {
                log_acc += Complex64::new(ratio.norm().ln(), ratio.arg());
                break;
            }
            depth += 1;
            if depth > 48 {
                return Err(ZetaError::SingularPencil {
                    at: format!("no resolution near t = {t_next}"),
                });
            }
            t_next = 0.5 * (t_prev + t_next);
            v_next = f(t_next);
        }
        t_prev = t_next;
        v_prev = v_next;
        if t_prev >= 1.0 {
            break;
        }
        if k == n && t_prev < 1.0 {
            // adaptive bisection stopped short; finish the remaining piece
            let rest = continued_log_rest(&f, t_prev, v_prev)?;
            log_acc += rest;
            break;
        }
    }
    Ok(log_acc)
}

fn continued_log_rest<F>(f: &F, mut t: f64, mut v: Complex64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    let mut guard = 0usize;
    while t < 1.0 {
        guard += 1;
        if guard > 4096 {
            return Err(ZetaError::SingularPencil {
                at: "path refinement budget".into(),
            });
        }
        let mut t_next = 1.0_f64.min(t + (1.0 - t));
        let mut v_next = f(t_next);
        let mut depth = 0usize;
        while v_next.norm() < 1e-300
            || (v_next / v).arg().abs() > 0.5
            || (v_next / v).norm().ln().abs() > 0.5
        {
            depth += 1;
            if depth > 48 {
                return Err(ZetaError::SingularPencil {
                    at: format!("no resolution near t = {t_next}"),
                });
            }
            t_next = 0.5 * (t + t_next);
            v_next = f(t_next);
        }
        let ratio = v_next / v;
        acc += Complex64::new(ratio.norm().ln(), ratio.arg());
        t = t_next;
        v = v_next;
    }
    Ok(acc)
}

/// `log f(z)` continued along the radial segment from `0` to `z`,
/// `f` evaluated at `t*z`.
pub fn continued_log_radial<F>(f: F, z: Complex64, steps: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    continued_log_path(|t| f(z * t), steps)
}

/// `f(z)^p` for real `p`, branch continued radially from `z = 0` where the
/// base is assumed to be `1`.
pub fn continued_power_radial<F>(f: F, z: Complex64, p: f64, steps: usize) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let lg = continued_log_radial(f, z, steps)?;
    Ok((lg * p).exp())
}

/// Composite Simpson rule on `[a, b]` with `2n` panels.
pub fn simpson<F>(f: F, a: f64, b: f64, n: usize) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let n = n.max(1);
    let h = (b - a) / (2 * n) as f64;
    let mut acc = f(a) + f(b);
    for k in 1..2 * n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(a + k as f64 * h) * w;
    }
    acc * (h / 3.0)
}

/// Taylor coefficients `c_0..c_m` of an analytic `f` by trapezoid sampling of
/// the Cauchy integral on the circle `|z| = r`.
///
/// The sample count is fixed (deterministic output); for analytic `f` the
/// error decays geometrically in the sample count, so 512 points leave the
/// aliasing error at `c_m ~ c_{m+512} r^512` — negligible for the radii used
/// here.
pub fn taylor_via_cauchy<F>(f: F, r: f64, m_max: usize) -> Vec<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let n = 512usize.max(4 * (m_max + 1));
    let vals: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / n as f64;
            f(Complex64::from_polar(r, th))
        })
        .collect();
    (0..=m_max)
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, v) in vals.iter().enumerate() {
                let th = std::f64::consts::TAU * k as f64 * m as f64 / n as f64;
                acc += v * Complex64::from_polar(1.0, -th);
            }
            acc / (n as f64 * r.powi(m as i32))
        })
        .collect()
}

/// Deterministic 64-bit generator (SplitMix64) for reproducible sample grids.
///
/// Used instead of a `rand` dependency: every CLI run and test that needs
/// "random" sample points derives them from a fixed seed so that identical
/// inputs produce byte-identical outputs.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform point in the annulus `r_lo <= |z| <= r_hi`.
    pub fn complex_in_annulus(&mut self, r_lo: f64, r_hi: f64) -> Complex64 {
        let r = self.range(r_lo, r_hi);
        let th = self.range(0.0, std::f64::consts::TAU);
        Complex64::from_polar(r, th)
    }
}

/// Parse a complex literal such as `0.5`, `-1.2e-3`, `0.3+0.2i`, `-i`, `2i`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(ZetaError::Parse("empty complex literal".into()));
    }
    let bad = |t: &str| ZetaError::Parse(format!("invalid complex literal `{t}`"));
    if let Some(im_part) = compact.strip_suffix(['i', 'j']) {
        // find the split between real and imaginary parts: the last +/- that
        // is not part of an exponent
        let bytes = im_part.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        match split {
            Some(k) => {
                let re: f64 = im_part[..k].parse().map_err(|_| bad(s))?;
                let im_str = &im_part[k..];
                let im: f64 = match im_str {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => im_str.parse().map_err(|_| bad(s))?,
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = match im_part {
                    "" | "+" => 1.0,
                    "-" => -1.0,
                    _ => im_part.parse().map_err(|_| bad(s))?,
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = compact.parse().map_err(|_| bad(s))?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Render a complex value in the same syntax `parse_complex` accepts.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cpow_zero_conventions() {
        assert_eq!(cpow(c(0.0, 0.0), 0), c(1.0, 0.0));
        assert_eq!(cpow(c(0.0, 0.0), 3), c(0.0, 0.0));
        assert_eq!(cpow(c(2.0, 0.0), 3), c(8.0, 0.0));
    }

    #[test]
    fn continued_log_tracks_winding() {
        // f(t) = e^{2 pi i t} winds once around the origin; the continued log
        // must end at 2 pi i, not at 0.
        let lg = continued_log_path(
            |t| Complex64::from_polar(1.0, std::f64::consts::TAU * t),
            16,
        )
        .unwrap();
        assert!((lg - c(0.0, std::f64::consts::TAU)).norm() < 1e-12);
    }

    #[test]
    fn continued_log_radial_matches_principal_when_safe() {
        let z = c(0.3, 0.1);
        let lg = continued_log_radial(|w| 1.0 + w * w, z, 8).unwrap();
        let expect = (1.0 + z * z).ln();
        assert!((lg - expect).norm() < 1e-12);
    }

    #[test]
    fn continued_log_detects_zero_on_path() {
        let res = continued_log_radial(|w| w - 0.5, c(1.0, 0.0), 8);
        assert!(res.is_err());
    }

    #[test]
    fn simpson_integrates_polynomial_exactly() {
        let v = simpson(|x| c(x * x * x - x, 2.0), 0.0, 2.0, 32);
        assert!((v - c(2.0, 4.0)).norm() < 1e-12);
    }

    #[test]
    fn cauchy_taylor_of_rational_function() {
        // 1/(1-z) = sum z^m
        let cs = taylor_via_cauchy(|z| 1.0 / (1.0 - z), 0.25, 6);
        for (m, cm) in cs.iter().enumerate() {
            assert!(
                (cm - c(1.0, 0.0)).norm() < 1e-12,
                "coefficient {m} was {cm}"
            );
        }
    }

    #[test]
    fn log_halfplane_branches() {
        // points on the negative real axis, separated by the direction pi
        let w = c(-2.0, 0.0);
        let lg = log_halfplane(w, std::f64::consts::PI);
        assert!((lg.re - 2.0_f64.ln()).abs() < 1e-14);
        assert!((lg.im - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn parse_complex_forms() {
        assert_eq!(parse_complex("0.5").unwrap(), c(0.5, 0.0));
        assert_eq!(parse_complex("0.3+0.2i").unwrap(), c(0.3, 0.2));
        assert_eq!(parse_complex("-0.3-0.2i").unwrap(), c(-0.3, -0.2));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("2e-3i").unwrap(), c(0.0, 2e-3));
        assert_eq!(parse_complex("1e2+1e-2i").unwrap(), c(100.0, 0.01));
        assert!(parse_complex("foo").is_err());
    }

    #[test]
    fn splitmix_is_deterministic() {
        let mut a = SplitMix64::new(7);
        let mut b = SplitMix64::new(7);
        for _ in 0..16 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }
}
