//! Deterministic point sets on `S^{n-1}`.

use std::f64::consts::PI;

use crate::linalg;

/// The "grid" used for sampling `Q(β)` and `N∞`: the two points of `S^0`,
/// `k` equally spaced angles on the circle, a Fibonacci lattice on `S^2`,
/// and normalized Halton points for higher dimensions.
pub fn grid(n: usize, k: usize) -> Vec<Vec<f64>> {
    match n {
        0 => Vec::new(),
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..k)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / k as f64;
                vec![th.cos(), th.sin()]
            })
            .collect(),
        3 => fibonacci(k),
        _ => halton_sphere(n, k),
    }
}

/// Low-discrepancy directions that avoid the symmetric angles of [`grid`]:
/// golden-angle points on the circle, Fibonacci on `S^2`, Halton beyond.
pub fn quasi_random(n: usize, k: usize) -> Vec<Vec<f64>> {
    match n {
        0 => Vec::new(),
        1 => (0..k)
            .map(|i| vec![if i % 2 == 0 { 1.0 } else { -1.0 }])
            .collect(),
        2 => {
            let phi = (5f64.sqrt() - 1.0) / 2.0;
            (0..k)
                .map(|i| {
                    let th = 2.0 * PI * ((i as f64 + 0.5) * phi).fract();
                    vec![th.cos(), th.sin()]
                })
                .collect()
        }
        3 => fibonacci(k),
        _ => halton_sphere(n, k),
    }
}

fn fibonacci(k: usize) -> Vec<Vec<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..k)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / k as f64;
            let r = (1.0 - z * z).sqrt();
            let th = golden * i as f64;
            vec![r * th.cos(), r * th.sin(), z]
        })
        .collect()
}

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Halton points of the cube `[-1, 1]^n` kept when inside the unit ball
/// (and not too close to the origin), then projected to the sphere.
fn halton_sphere(n: usize, k: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(k);
    let mut i = 1u64;
    while out.len() < k {
        let p: Vec<f64> = (0..n)
            .map(|d| 2.0 * radical_inverse(i, PRIMES[d % PRIMES.len()]) - 1.0)
            .collect();
        let r = linalg::norm(&p);
        if r <= 1.0 && r > 0.1 {
            out.push(linalg::scale(&p, 1.0 / r));
        }
        i += 1;
    }
    out
}
