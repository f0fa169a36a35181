use crate::error::{Error, Result};

/// Ordinary least-squares line through `points`, returned as
/// `(intercept, slope)`.
pub fn fit_linear(points: &[(f64, f64)]) -> Result<(f64, f64)> {
    if points.len() < 2 {
        return Err(Error::DegenerateFit("fewer than two points"));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (sxx, sxy) = points.iter().fold((0.0, 0.0), |(sxx, sxy), &(x, y)| {
        let dx = x - mean_x;
        (sxx + dx * dx, sxy + dx * (y - mean_y))
    });
    if sxx.is_nan() || sxx <= 0.0 {
        return Err(Error::DegenerateFit("constant x"));
    }
    let slope = sxy / sxx;
    Ok((mean_y - slope * mean_x, slope))
}

/// [`fit_linear`], falling back to the flat line through the mean of `y`
/// when `x` is constant.
pub(crate) fn fit_linear_or_mean(points: &[(f64, f64)]) -> (f64, f64) {
    match fit_linear(points) {
        Ok(fit) => fit,
        Err(_) => {
            let mean_y = points.iter().map(|p| p.1).sum::<f64>() / points.len().max(1) as f64;
            (mean_y, 0.0)
        }
    }
}
