//! Special functions needed by the closed-form majorant formulas.

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Exponential integral `E1(x) = ∫_x^∞ e^{-t}/t dt` for `x > 0`.
pub(crate) fn exp_integral_e1(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= 1.0 {
        // Alternating power series; converges quickly for x <= 1.
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            let kf = k as f64;
            term *= -x / kf;
            let contrib = term / kf;
            sum += contrib;
            if contrib.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() - sum
    } else {
        // Modified Lentz evaluation of the continued fraction.
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..1000 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        h * (-x).exp()
    }
}

/// Bernoulli numbers B_2, B_4, ..., B_16.
const BERNOULLI_EVEN: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

/// Scaled Hurwitz zeta `q^s ζ(s, q) = Σ_{k≥0} (q / (q + k))^s` for `s > 1`,
/// `q > 0`. The scaling keeps the result in range for large `s` and `q`.
///
/// Direct summation up to a shift `n ≥ max(16, s + 20)`, then Euler–Maclaurin
/// with eight Bernoulli corrections.
pub(crate) fn hurwitz_zeta_scaled(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    let shift_target = 16.0_f64.max(s + 20.0);
    let m = (shift_target - q).ceil().max(0.0) as usize;
    let mut sum = 0.0;
    for k in 0..m {
        sum += (q / (q + k as f64)).powf(s);
    }
    let n = q + m as f64;
    // (q/n)^s carries the q^s scaling for every remainder term.
    let base = (q / n).powf(s);
    sum += base * n / (s - 1.0);
    sum += 0.5 * base;

    // B_{2j}/(2j)! * s(s+1)...(s+2j-2) * n^{-2j+1}, times (q/n)^s
    let mut rising = s;
    let mut factorial = 2.0;
    let mut power = base / n;
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        sum += b / factorial * rising * power;
        let jj = (j + 1) as f64;
        rising *= (s + 2.0 * jj - 1.0) * (s + 2.0 * jj);
        factorial *= (2.0 * jj + 1.0) * (2.0 * jj + 2.0);
        power /= n * n;
    }
    sum
}

/// Hurwitz zeta `ζ(s, q) = Σ_{k≥0} (q + k)^{-s}` for `s > 1`, `q > 0`.
#[cfg(test)]
pub(crate) fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    q.powf(-s) * hurwitz_zeta_scaled(s, q)
}
