//! Gamma-type constants shared by the numerical modules.

use statrs::function::beta::beta_reg;
use statrs::function::gamma;

pub fn ln_gamma(x: f64) -> f64 {
    gamma::ln_gamma(x)
}

pub fn gamma_fn(x: f64) -> f64 {
    gamma::gamma(x)
}

/// `c_λ = Γ(λ+1/2) / (Γ(λ) Γ(1/2))`, the normalizer of `dm_λ`.
pub fn dm_normalizer(lambda: f64) -> f64 {
    (ln_gamma(lambda + 0.5) - ln_gamma(lambda) - 0.5 * std::f64::consts::PI.ln()).exp()
}

/// `m_λ{θ > θ0}`; with `s = (1-θ)/2` the law of `s` is `Beta(λ, λ+1)`.
pub fn dm_upper_tail(lambda: f64, theta0: f64) -> f64 {
    if lambda == 0.0 {
        return if theta0 < 1.0 { 1.0 } else { 0.0 };
    }
    let s = ((1.0 - theta0) / 2.0).clamp(0.0, 1.0);
    beta_reg(lambda, lambda + 1.0, s)
}

pub fn digamma(x: f64) -> f64 {
    gamma::digamma(x)
}

/// `₂F₁(a, b; c; z)` for `0 ≤ z < 1`, with `1 - z` passed separately so that
/// arguments near `1` keep full relative accuracy. Requires `a, b > 0` or one
/// of them zero; `c - a - b` may be any real, integer values use the
/// logarithmic expansions around `z = 1`.
pub fn hyp2f1_unit(a: f64, b: f64, c: f64, z: f64, one_minus_z: f64) -> f64 {
    if a == 0.0 || b == 0.0 || z == 0.0 {
        return 1.0;
    }
    if z < 0.5 {
        return gauss_series(a, b, c, z);
    }
    let m = c - a - b;
    let mi = m.round();
    if (m - mi).abs() > 1e-12 {
        // Non-integer gap: the two-term connection formula.
        let w = one_minus_z;
        let g = gamma::gamma;
        let s1 = g(c) * g(m) / (g(c - a) * g(c - b)) * gauss_series(a, b, 1.0 - m, w);
        let s2 = g(c) * g(-m) / (g(a) * g(b)) * w.powf(m) * gauss_series(c - a, c - b, 1.0 + m, w);
        return s1 + s2;
    }
    let mi = mi as i64;
    let w = one_minus_z;
    let lw = w.ln();
    if mi == 0 {
        let pre = (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)).exp();
        let (mut pa, mut pb, mut p1) = (digamma(a), digamma(b), digamma(1.0));
        let mut term = 1.0;
        let mut sum = 0.0;
        for n in 0..400 {
            let nf = n as f64;
            if n > 0 {
                term *= (a + nf - 1.0) * (b + nf - 1.0) / (nf * nf) * w;
                pa += 1.0 / (a + nf - 1.0);
                pb += 1.0 / (b + nf - 1.0);
                p1 += 1.0 / nf;
            }
            let t = term * (2.0 * p1 - pa - pb - lw);
            sum += t;
            if n > 2 && t.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        return pre * sum;
    }
    if mi > 0 {
        let m = mi as usize;
        let mf = m as f64;
        let mut finite = 0.0;
        let mut term = 1.0;
        for n in 0..m {
            let nf = n as f64;
            if n > 0 {
                term *= (a + nf - 1.0) * (b + nf - 1.0) / (nf * (nf - mf)) * w;
            }
            finite += term;
        }
        let pre1 = (ln_gamma(mf) + ln_gamma(a + b + mf) - ln_gamma(a + mf) - ln_gamma(b + mf)).exp();
        let pre2 = (ln_gamma(a + b + mf) - ln_gamma(a) - ln_gamma(b)).exp();
        let (mut pa, mut pb) = (digamma(a + mf), digamma(b + mf));
        let (mut p1, mut pm) = (digamma(1.0), digamma(mf + 1.0));
        let mut term = 1.0 / factorial(m);
        let mut sum = 0.0;
        for n in 0..400 {
            let nf = n as f64;
            if n > 0 {
                term *= (a + mf + nf - 1.0) * (b + mf + nf - 1.0) / (nf * (nf + mf)) * w;
                pa += 1.0 / (a + mf + nf - 1.0);
                pb += 1.0 / (b + mf + nf - 1.0);
                p1 += 1.0 / nf;
                pm += 1.0 / (nf + mf);
            }
            let t = term * (lw - p1 - pm + pa + pb);
            sum += t;
            if n > 2 && t.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        // -(z-1)^m = -(-w)^m.
        let sign = if m % 2 == 0 { -1.0 } else { 1.0 };
        return pre1 * finite + sign * w.powi(m as i32) * pre2 * sum;
    }
    let m = (-mi) as usize;
    let mf = m as f64;
    let mut finite = 0.0;
    let mut term = 1.0;
    for n in 0..m {
        let nf = n as f64;
        if n > 0 {
            term *= (a - mf + nf - 1.0) * (b - mf + nf - 1.0) / (nf * (nf - mf)) * w;
        }
        finite += term;
    }
    let pre1 = (ln_gamma(mf) + ln_gamma(a + b - mf) - ln_gamma(a) - ln_gamma(b)).exp();
    let g2 = 1.0 / (gamma::gamma(a - mf) * gamma::gamma(b - mf));
    let pre2 = gamma::gamma(a + b - mf) * g2;
    let (mut pa, mut pb) = (digamma(a), digamma(b));
    let (mut p1, mut pm) = (digamma(1.0), digamma(mf + 1.0));
    let mut term = 1.0 / factorial(m);
    let mut sum = 0.0;
    for n in 0..400 {
        let nf = n as f64;
        if n > 0 {
            term *= (a + nf - 1.0) * (b + nf - 1.0) / (nf * (nf + mf)) * w;
            pa += 1.0 / (a + nf - 1.0);
            pb += 1.0 / (b + nf - 1.0);
            p1 += 1.0 / nf;
            pm += 1.0 / (nf + mf);
        }
        let t = term * (lw - p1 - pm + pa + pb);
        sum += t;
        if n > 2 && t.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    pre1 * w.powi(-(m as i32)) * finite - sign * pre2 * sum
}

fn factorial(m: usize) -> f64 {
    (1..=m).map(|k| k as f64).product()
}

fn gauss_series(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..2000 {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}
