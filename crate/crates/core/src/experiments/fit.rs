use super::ExperimentError;
use crate::format::{content_lines, FormatError};

/// `y ≈ scale · x^exponent`, fitted by least squares on `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub exponent: f64,
    pub scale: f64,
    /// Sum of squared residuals in log space.
    pub residual: f64,
}

pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerFit, ExperimentError> {
    if points.len() < 3 {
        return Err(ExperimentError::InvalidSpec(format!(
            "a power-law fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some(&(x, y)) = points
        .iter()
        .find(|&&(x, y)| !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()))
    {
        return Err(ExperimentError::InvalidSpec(format!(
            "nonpositive point ({x}, {y})"
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(ExperimentError::InvalidSpec(
            "all x values are equal".into(),
        ));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let residual = logs
        .iter()
        .map(|p| (p.1 - intercept - exponent * p.0).powi(2))
        .sum();
    Ok(PowerFit {
        exponent,
        scale: intercept.exp(),
        residual,
    })
}

/// Pulls two numeric columns out of a comma-separated table whose first
/// content line names the columns. Columns are picked by name or by
/// 0-based index.
pub fn parse_xy_table(input: &str, x: &str, y: &str) -> Result<Vec<(f64, f64)>, FormatError> {
    let mut lines = content_lines(input);
    let Some((hline, header)) = lines.next() else {
        return Ok(Vec::new());
    };
    let names: Vec<&str> = header.split(',').map(str::trim).collect();
    let pick = |col: &str| {
        names
            .iter()
            .position(|&n| n == col)
            .or_else(|| col.parse::<usize>().ok().filter(|&i| i < names.len()))
            .ok_or_else(|| FormatError::Invalid {
                line: hline,
                reason: format!("no column {col:?}"),
            })
    };
    let (xi, yi) = (pick(x)?, pick(y)?);
    let mut out = Vec::new();
    for (line, text) in lines {
        let f: Vec<&str> = text.split(',').map(str::trim).collect();
        if f.len() != names.len() {
            return Err(FormatError::WrongFieldCount {
                line,
                expected: names.len(),
                found: f.len(),
            });
        }
        let num = |i: usize| {
            parse_number(f[i]).ok_or_else(|| FormatError::BadNumber {
                line,
                field: i + 1,
                text: f[i].to_string(),
            })
        };
        out.push((num(xi)?, num(yi)?));
    }
    Ok(out)
}

/// Decimal or `a/b`.
fn parse_number(t: &str) -> Option<f64> {
    let v = match t.split_once('/') {
        Some((a, b)) => a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?,
        None => t.parse::<f64>().ok()?,
    };
    v.is_finite().then_some(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let pts: Vec<(f64, f64)> = [16.0, 64.0, 256.0]
            .iter()
            .map(|&x: &f64| (x, x.powf(1.5)))
            .collect();
        let f = fit_power_law(&pts).unwrap();
        assert!((f.exponent - 1.5).abs() < 1e-12);
        assert!(f.residual < 1e-20);
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x, 7.0 * y)).collect();
        let f = fit_power_law(&scaled).unwrap();
        assert!((f.exponent - 1.5).abs() < 1e-12);
        assert!((f.scale - 7.0).abs() < 1e-9);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(fit_power_law(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(fit_power_law(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
        assert!(fit_power_law(&[(2.0, 1.0), (2.0, 2.0), (2.0, 3.0)]).is_err());
    }

    #[test]
    fn noisy_residual_is_positive() {
        let f = fit_power_law(&[(1.0, 1.0), (2.0, 5.0), (4.0, 9.0)]).unwrap();
        assert!(f.residual > 0.0);
    }

    #[test]
    fn table_columns() {
        let t = "# sweep\nvalue,trials,cost\n1/4,10,3.5\n16,10,7\n";
        assert_eq!(
            parse_xy_table(t, "value", "cost").unwrap(),
            vec![(0.25, 3.5), (16.0, 7.0)]
        );
        assert_eq!(
            parse_xy_table(t, "0", "1").unwrap(),
            vec![(0.25, 10.0), (16.0, 10.0)]
        );
        assert!(parse_xy_table(t, "nope", "cost").is_err());
        assert!(parse_xy_table("a,b\n1,\n", "a", "b").is_err());
        assert!(parse_xy_table("a,b\n1,2,3\n", "a", "b").is_err());
        assert!(parse_xy_table("", "a", "b").unwrap().is_empty());
    }
}
