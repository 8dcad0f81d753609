use std::f64::consts::PI;

/// `P_l(cos θ)` for l = 0..=l_max.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreRow {
    pub theta: f64,
    pub values: Vec<f64>,
}

impl LegendreRow {
    pub fn l_max(&self) -> usize {
        self.values.len() - 1
    }
}

/// Upward three-term recurrence `(l+1)P_{l+1} = (2l+1)xP_l − lP_{l−1}`.
/// The endpoints θ = 0 and θ = π are filled exactly with `(±1)^l`.
pub fn legendre_row(theta: f64, l_max: usize) -> LegendreRow {
    let mut values = vec![0.0; l_max + 1];
    fill_legendre(theta, &mut values);
    LegendreRow { theta, values }
}

/// In-place variant of [`legendre_row`]; `out.len()` sets `l_max + 1`.
pub fn fill_legendre(theta: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    if theta == 0.0 {
        out.fill(1.0);
        return;
    }
    if theta == PI {
        for (l, v) in out.iter_mut().enumerate() {
            *v = if l % 2 == 0 { 1.0 } else { -1.0 };
        }
        return;
    }
    let x = theta.cos();
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = x;
    for l in 1..out.len() - 1 {
        let lf = l as f64;
        out[l + 1] = ((2.0 * lf + 1.0) * x * out[l] - lf * out[l - 1]) / (lf + 1.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reference::GaussLegendre;

    #[test]
    fn endpoints() {
        assert!(legendre_row(0.0, 500).values.iter().all(|&v| v == 1.0));
        let back = legendre_row(PI, 9);
        assert_eq!(back.values[8], 1.0);
        assert_eq!(back.values[9], -1.0);
        assert_eq!(legendre_row(1.0, 0).values, vec![1.0]);
    }

    #[test]
    fn right_angle_values() {
        let row = legendre_row(PI / 2.0, 4);
        assert!(row.values[1].abs() < 1e-16);
        assert!((row.values[2] + 0.5).abs() < 1e-15);
        assert!((row.values[4] - 0.375).abs() < 1e-15);
    }

    #[test]
    fn orthogonality_by_quadrature() {
        let rule = GaussLegendre::new(64);
        let rows: Vec<LegendreRow> = rule.nodes().iter().map(|&x| legendre_row(x.acos(), 50)).collect();
        for j in 0..=50 {
            for k in 0..=50 {
                let integral: f64 = rows
                    .iter()
                    .zip(rule.weights())
                    .map(|(row, w)| w * row.values[j] * row.values[k])
                    .sum();
                let expected = if j == k { 2.0 / (2.0 * k as f64 + 1.0) } else { 0.0 };
                assert!((integral - expected).abs() < 1e-10, "j = {j}, k = {k}: {integral}");
            }
        }
    }

    #[test]
    fn bounded_and_recurrent_at_large_order() {
        for theta in [1e-4, 0.003, 0.5, 1.7, 3.1] {
            let row = legendre_row(theta, 8000);
            let x = theta.cos();
            for l in 1..8000 {
                let lf = l as f64;
                let residual = (lf + 1.0) * row.values[l + 1] - (2.0 * lf + 1.0) * x * row.values[l]
                    + lf * row.values[l - 1];
                assert!(residual.abs() <= 1e-12 * lf.max(1.0), "theta {theta} l {l}");
            }
            assert!(row.values.iter().all(|v| v.abs() <= 1.0 + 1e-12));
        }
    }
}
