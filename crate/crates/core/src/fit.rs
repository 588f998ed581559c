//! Least-squares polynomial fits for scaling checks.

#[derive(Debug, Clone, PartialEq)]
pub struct Fit {
    /// Coefficients from the constant term upwards.
    pub coefficients: Vec<f64>,
    pub r_squared: f64,
}

impl Fit {
    pub fn predict(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }
}

/// Fits a polynomial of the given degree by solving the normal equations.
pub fn polynomial_fit(xs: &[f64], ys: &[f64], degree: usize) -> Fit {
    assert_eq!(xs.len(), ys.len(), "x and y lengths differ");
    assert!(xs.len() > degree, "need more points than the degree");
    let m = degree + 1;
    let mut a = vec![vec![0.0; m + 1]; m];
    for (&x, &y) in xs.iter().zip(ys) {
        let powers: Vec<f64> = (0..m).map(|i| x.powi(i as i32)).collect();
        for i in 0..m {
            for j in 0..m {
                a[i][j] += powers[i] * powers[j];
            }
            a[i][m] += powers[i] * y;
        }
    }
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty");
        a.swap(col, pivot);
        for row in 0..m {
            if row != col && a[col][col] != 0.0 {
                let f = a[row][col] / a[col][col];
                for k in col..=m {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    let coefficients: Vec<f64> = (0..m)
        .map(|i| if a[i][i] == 0.0 { 0.0 } else { a[i][m] / a[i][i] })
        .collect();
    let mut fit = Fit {
        coefficients,
        r_squared: 0.0,
    };
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = xs.iter().zip(ys).map(|(&x, &y)| (y - fit.predict(x)).powi(2)).sum();
    fit.r_squared = if ss_tot == 0.0 {
        if ss_res == 0.0 { 1.0 } else { 0.0 }
    } else {
        1.0 - ss_res / ss_tot
    };
    fit
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Fit {
    polynomial_fit(xs, ys, 1)
}

pub fn quadratic_fit(xs: &[f64], ys: &[f64]) -> Fit {
    polynomial_fit(xs, ys, 2)
}
