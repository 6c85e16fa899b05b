use crate::error::{Error, Result};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)) for k = 1..=8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const SHIFT: f64 = 15.0;

/// Tail of the Stirling series, valid for z >= 15 to below 1e-17.
fn stirling_tail(z: f64) -> f64 {
    let r = 1.0 / z;
    let r2 = r * r;
    let mut acc = 0.0;
    for c in STIRLING.iter().rev() {
        acc = acc * r2 + c;
    }
    acc * r
}

/// ln Γ(x) for x > 0.
///
/// Integers up to 30 go through the factorial, so ln Γ(1) = ln Γ(2) = 0
/// exactly. Otherwise upward recurrence to x >= 15 followed by an
/// eight-term Stirling series. Relative error stays below 1e-13 on
/// [0.5, 1e6] except in the immediate neighbourhood of the zeros at 1 and
/// 2, where the absolute error is about 1e-15.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("log_gamma needs x > 0, got {x}")));
    }
    if x.fract() == 0.0 && x <= 30.0 {
        let fact: f64 = (2..x as u32).map(f64::from).product();
        return Ok(fact.ln());
    }
    let mut z = x;
    let mut prod = 1.0;
    while z < SHIFT {
        prod *= z;
        z += 1.0;
    }
    let base = (z - 0.5) * z.ln() - z + HALF_LN_2PI + stirling_tail(z);
    Ok(base - prod.ln())
}

/// ln Γ(y + 1/2) - ln Γ(y + 1) for y >= 15 without cancellation.
pub(crate) fn log_half_ratio_asymptotic(y: f64) -> f64 {
    let u = y + 0.5;
    let v = y + 1.0;
    y * (-0.5 / v).ln_1p() - 0.5 * v.ln() + 0.5 + (stirling_tail(u) - stirling_tail(v))
}
