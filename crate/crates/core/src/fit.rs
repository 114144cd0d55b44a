/// Ordinary least squares line through `(x, y)`; returns
/// `(slope, intercept, max |residual|)`. `None` when `x` has no spread.
pub(crate) fn least_squares_line(x: &[f64], y: &[f64]) -> Option<(f64, f64, f64)> {
    let n = x.len() as f64;
    if x.len() < 2 || x.len() != y.len() {
        return None;
    }
    let xm = x.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - xm).powi(2)).sum();
    if sxx <= 0.0 || !sxx.is_finite() {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - xm) * (b - ym)).sum();
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let residual = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - (intercept + slope * a)).abs())
        .fold(0.0, f64::max);
    Some((slope, intercept, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 0.5 * v - 1.0).collect();
        let (s, i, r) = least_squares_line(&x, &y).unwrap();
        assert!((s - 0.5).abs() < 1e-15 && (i + 1.0).abs() < 1e-15 && r < 1e-15);
        assert!(least_squares_line(&[2.0, 2.0], &[1.0, 3.0]).is_none());
    }
}
