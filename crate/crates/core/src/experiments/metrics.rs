use crate::error::{Error, Result};

fn check(y_star: &[f64], y: &[f64]) -> Result<()> {
    if y_star.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if y_star.len() != y.len() {
        return Err(Error::LengthMismatch {
            what: "reference and output",
            left: y_star.len(),
            right: y.len(),
        });
    }
    Ok(())
}

/// Mean absolute tracking error `(1/N) Σ |y*(k) − y(k)|`.
pub fn mae(y_star: &[f64], y: &[f64]) -> Result<f64> {
    check(y_star, y)?;
    let sum: f64 = y_star.iter().zip(y).map(|(r, v)| (r - v).abs()).sum();
    Ok(sum / y_star.len() as f64)
}

/// Largest absolute tracking error.
pub fn max_abs_error(y_star: &[f64], y: &[f64]) -> Result<f64> {
    check(y_star, y)?;
    Ok(y_star.iter().zip(y).fold(0.0, |m, (r, v)| m.max((r - v).abs())))
}

/// Mean absolute error over the samples where the reference holds still
/// (`y*(k) == y*(k−1)`). Zero if there are none.
pub fn standstill_error(y_star: &[f64], y: &[f64]) -> Result<f64> {
    check(y_star, y)?;
    let (mut sum, mut n) = (0.0, 0usize);
    for k in 1..y_star.len() {
        if y_star[k] == y_star[k - 1] {
            sum += (y_star[k] - y[k]).abs();
            n += 1;
        }
    }
    Ok(if n == 0 { 0.0 } else { sum / n as f64 })
}
