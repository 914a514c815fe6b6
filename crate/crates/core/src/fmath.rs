//! Float helpers routed through `libm` so the crate never needs std float
//! intrinsics and produces the same bits on every platform.

pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

/// Rounds half away from zero.
pub fn round(x: f64) -> f64 {
    libm::round(x)
}

pub fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

/// Logistic function, saturating cleanly to 0/1 for extreme inputs.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + exp(-x))
    } else {
        let e = exp(x);
        e / (1.0 + e)
    }
}

/// Binary log-loss of a raw score `s` against label `y`, in the
/// numerically stable softplus form.
pub fn log_loss_raw(s: f64, y: f64) -> f64 {
    // softplus(-s) for y=1, softplus(s) for y=0
    let z = if y > 0.5 { -s } else { s };
    if z > 30.0 {
        z
    } else {
        ln(1.0 + exp(z))
    }
}
