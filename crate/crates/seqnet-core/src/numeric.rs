//! Scalar special functions backing the statistical tests and simulators:
//! the standard normal CDF and quantile, the regularized incomplete gamma
//! (chi-square tails), and the bivariate normal rectangle probability.

#[allow(unused_imports)]
use num_traits::Float;

use core::f64::consts::{PI, SQRT_2};

/// Standard normal CDF Φ(x).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard normal upper tail 1 − Φ(x), accurate far into the tail.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / SQRT_2)
}

/// Two-sided normal p-value P(|Z| ≥ |z|).
pub fn normal_two_sided_p(z: f64) -> f64 {
    libm::erfc(z.abs() / SQRT_2)
}

/// Standard normal quantile Φ⁻¹(p) for p ∈ (0, 1), by bisection on the CDF.
///
/// Bisection keeps the quantile exactly consistent with `normal_cdf`, which
/// matters because the simulators use both sides of the pair.
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile needs p in (0,1)");
    let (mut lo, mut hi) = (-40.0_f64, 40.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Regularized lower incomplete gamma P(a, x).
pub fn gamma_p(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0, "gamma_p needs a > 0, x >= 0");
    if x == 0.0 {
        return 0.0;
    }
    if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_contfrac(a, x)
    }
}

/// Regularized upper incomplete gamma Q(a, x) = 1 − P(a, x).
pub fn gamma_q(a: f64, x: f64) -> f64 {
    assert!(a > 0.0 && x >= 0.0, "gamma_q needs a > 0, x >= 0");
    if x == 0.0 {
        return 1.0;
    }
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_contfrac(a, x)
    }
}

/// Chi-square upper tail P(X ≥ x) with `df` degrees of freedom.
pub fn chi_square_sf(x: f64, df: f64) -> f64 {
    assert!(df > 0.0, "chi-square needs df > 0");
    if x <= 0.0 {
        return 1.0;
    }
    gamma_q(0.5 * df, 0.5 * x)
}

// Power series for P(a,x), valid (and fast) for x < a + 1.
fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut sum = 1.0 / a;
    let mut del = sum;
    for _ in 0..500 {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * 1e-16 {
            break;
        }
    }
    sum * (-x + a * x.ln() - libm::lgamma(a)).exp()
}

// Lentz continued fraction for Q(a,x), valid for x >= a + 1.
fn gamma_q_contfrac(a: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x + a * x.ln() - libm::lgamma(a)).exp() * h
}

/// Bivariate standard normal rectangle probability P(Z₁ ≤ h, Z₂ ≤ k) with
/// correlation `rho`, via the single-integral reduction
/// Φ₂(h,k,ρ) = Φ(h)Φ(k) + (1/2π)∫₀^ρ φ₂(h,k;r) dr.
pub fn bvn_cdf(h: f64, k: f64, rho: f64) -> f64 {
    assert!(rho > -1.0 && rho < 1.0, "bvn_cdf needs |rho| < 1");
    let base = normal_cdf(h) * normal_cdf(k);
    if rho == 0.0 {
        return base;
    }
    let f = |r: f64| {
        let om = 1.0 - r * r;
        (-(h * h + k * k - 2.0 * r * h * k) / (2.0 * om)).exp() / om.sqrt()
    };
    base + adaptive_simpson(&f, 0.0, rho, 1e-12, 30) / (2.0 * PI)
}

/// Adaptive Simpson quadrature; `f` must be smooth on [a, b].
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_step(f, a, b, fa, fb, fc, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let c = 0.5 * (a + b);
    let d = 0.5 * (a + c);
    let e = 0.5 * (c + b);
    let (fd, fe) = (f(d), f(e));
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        left + right + (left + right - whole) / 15.0
    } else {
        simpson_step(f, a, c, fa, fc, fd, left, 0.5 * tol, depth - 1)
            + simpson_step(f, c, b, fc, fb, fe, right, 0.5 * tol, depth - 1)
    }
}
