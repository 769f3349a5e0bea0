//! Digamma family helpers for the Dirichlet fit.

pub use statrs::function::gamma::{digamma, ln_gamma};

/// Trigamma via upward recurrence and the asymptotic series.
pub fn trigamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 10.0 {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    acc + 1.0 / x
        + x2 / 2.0
        + (1.0 / x)
            * x2
            * (1.0 / 6.0
                - x2 * (1.0 / 30.0 - x2 * (1.0 / 42.0 - x2 * (1.0 / 30.0 - x2 * 5.0 / 66.0))))
}

/// Inverse of digamma by Newton's method from Minka's initialiser.
pub fn inv_digamma(y: f64) -> f64 {
    const EULER: f64 = 0.577_215_664_901_532_9;
    let mut x = if y >= -2.22 {
        y.exp() + 0.5
    } else {
        -1.0 / (y + EULER)
    };
    for _ in 0..8 {
        let step = (digamma(x) - y) / trigamma(x);
        x -= step;
        if x <= 0.0 {
            x = 1e-12;
        }
        if step.abs() < 1e-15 * x {
            break;
        }
    }
    x
}
