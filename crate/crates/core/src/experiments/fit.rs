use crate::error::{Error, Result};

use super::anytime::TracePoint;

/// `ratio ~ coefficient * nodes^exponent`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit {
    pub coefficient: f64,
    pub exponent: f64,
}

impl PowerLawFit {
    pub fn predict(&self, nodes: f64) -> f64 {
        self.coefficient * nodes.powf(self.exponent)
    }
}

/// Ordinary least squares of `ln ratio` on `ln nodes`. Needs at least two
/// distinct node counts; every point must have `nodes >= 1` and a finite
/// `ratio >= 1`.
pub fn fit_power_law(points: &[TracePoint]) -> Result<PowerLawFit> {
    if points.len() < 2 {
        return Err(Error::Fit(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    if let Some(p) = points
        .iter()
        .find(|p| p.nodes < 1 || !(p.ratio >= 1.0 && p.ratio.is_finite()))
    {
        return Err(Error::Fit(format!(
            "point out of domain: nodes={}, ratio={}",
            p.nodes, p.ratio
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.nodes as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.ratio.ln()).collect();
    let count = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / count;
    let mean_y = ys.iter().sum::<f64>() / count;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all points share one node count".into()));
    }
    let exponent = sxy / sxx;
    Ok(PowerLawFit {
        coefficient: (mean_y - exponent * mean_x).exp(),
        exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(nodes: u64, ratio: f64) -> TracePoint {
        TracePoint { nodes, ratio }
    }

    #[test]
    fn recovers_exact_law() {
        let points: Vec<TracePoint> = [1u64, 10, 100, 1000, 54321]
            .iter()
            .map(|&n| pt(n, 2.0 * (n as f64).sqrt()))
            .collect();
        let fit = fit_power_law(&points).unwrap();
        assert!((fit.coefficient - 2.0).abs() < 1e-6);
        assert!((fit.exponent - 0.5).abs() < 1e-6);
    }

    #[test]
    fn two_points_interpolate() {
        let fit = fit_power_law(&[pt(10, 3.0), pt(1000, 12.0)]).unwrap();
        assert!((fit.predict(10.0) - 3.0).abs() < 1e-9);
        assert!((fit.predict(1000.0) - 12.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(fit_power_law(&[pt(5, 1.0)]).is_err());
        assert!(fit_power_law(&[pt(0, 1.0), pt(5, 2.0)]).is_err());
        assert!(fit_power_law(&[pt(3, 0.5), pt(5, 2.0)]).is_err());
        assert!(fit_power_law(&[pt(3, 2.0), pt(5, f64::INFINITY)]).is_err());
        assert!(fit_power_law(&[pt(3, 2.0), pt(3, 4.0)]).is_err());
    }

    proptest! {
        #[test]
        fn recovers_any_law(a in 1.0f64..100.0, c in 0.0f64..2.0, start in 1u64..50) {
            let points: Vec<TracePoint> = (0..6).map(|k| {
                let n = start * 7u64.pow(k);
                pt(n, a * (n as f64).powf(c))
            }).collect();
            let fit = fit_power_law(&points).unwrap();
            prop_assert!((fit.exponent - c).abs() < 1e-9);
            prop_assert!((fit.coefficient - a).abs() < 1e-8 * a);
        }
    }
}
