//! Exact solution of the two-dimensional Burgers Riemann problem on the
//! unit square with flux `u^2 (1, 1) / 2`.

fn initial(x: f64, y: f64) -> f64 {
    if x <= 0.5 && y >= 0.5 {
        -0.2
    } else if x >= 0.5 && y >= 0.5 {
        -1.0
    } else if x <= 0.5 && y <= 0.5 {
        0.5
    } else {
        0.8
    }
}

/// Exact solution at time `t >= 0`. Boundaries between regions belong to
/// the region listed first.
pub fn exact_burgers_corner(t: f64, p: &[f64]) -> f64 {
    let (x, y) = (p[0], p[1]);
    if t <= 0.0 {
        return initial(x, y);
    }
    let x1 = 0.5 - 0.6 * t;
    let x2 = 0.5 - 0.25 * t;
    let x3 = 0.5 + 0.5 * t;
    let x4 = 0.5 + 0.8 * t;
    if x <= x1 {
        if y >= 0.5 + 0.15 * t {
            -0.2
        } else {
            0.5
        }
    } else if x <= x2 {
        if y >= -8.0 * x / 7.0 + 15.0 / 14.0 - 15.0 * t / 28.0 {
            -1.0
        } else {
            0.5
        }
    } else if x <= x3 {
        if y >= x / 6.0 + 5.0 / 12.0 - 5.0 * t / 24.0 {
            -1.0
        } else {
            0.5
        }
    } else if x <= x4 {
        let s = x + t - 0.5;
        if y >= x - 5.0 / (18.0 * t) * s * s {
            -1.0
        } else {
            (2.0 * x - 1.0) / (2.0 * t)
        }
    } else if y >= 0.5 - 0.1 * t {
        -1.0
    } else {
        0.8
    }
}
