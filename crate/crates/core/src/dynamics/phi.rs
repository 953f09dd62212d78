//! The exponential-integrator functions `φ₁(z) = (eᶻ − 1)/z` and
//! `φ₂(z) = (eᶻ − 1 − z)/z²`.

const SERIES_RADIUS: f64 = 0.5;
const TERMS: usize = 16;

/// `Σ zᵏ/(k + shift)!` for small `|z|`.
fn series(z: f64, shift: usize) -> f64 {
    let mut fact = (1..=shift).map(|i| i as f64).product::<f64>();
    let mut pow = 1.0;
    let mut sum = 0.0;
    for k in 0..TERMS {
        sum += pow / fact;
        pow *= z;
        fact *= (k + shift + 1) as f64;
    }
    sum
}

pub fn phi1(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        series(z, 1)
    } else {
        z.exp_m1() / z
    }
}

pub fn phi2(z: f64) -> f64 {
    if z.abs() < SERIES_RADIUS {
        series(z, 2)
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}
