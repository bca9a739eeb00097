//! Finite-difference weights on arbitrary (non-uniform) grids.

/// Fornberg's recursion: `w[k][j]` is the weight of `nodes[j]` in the
/// k-th derivative at `z`, for `k = 0..=max_order`.
pub fn fornberg_weights(z: f64, nodes: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - z;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Width of the stencils used by [`grid_derivatives`].
pub const STENCIL_POINTS: usize = 5;

/// First and second derivatives of sampled data, 5-point stencils.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDerivatives {
    pub first: Vec<f64>,
    pub second: Vec<f64>,
    /// True where the stencil could not be centred (the two points at each end).
    pub one_sided: Vec<bool>,
}

/// Derivatives at every grid point. Interior points use the centred 5-point
/// stencil (fourth order on uniform grids); the edges use the nearest five
/// nodes and are flagged in `one_sided`.
///
/// Panics if `x` and `y` differ in length or hold fewer than five samples.
pub fn grid_derivatives(x: &[f64], y: &[f64]) -> GridDerivatives {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    assert!(n >= STENCIL_POINTS, "need at least {STENCIL_POINTS} samples");
    let half = STENCIL_POINTS / 2;
    let mut first = Vec::with_capacity(n);
    let mut second = Vec::with_capacity(n);
    let mut one_sided = Vec::with_capacity(n);
    for i in 0..n {
        let start = i.saturating_sub(half).min(n - STENCIL_POINTS);
        let window = start..start + STENCIL_POINTS;
        let w = fornberg_weights(x[i], &x[window.clone()], 2);
        let ys = &y[window];
        first.push(w[1].iter().zip(ys).map(|(a, b)| a * b).sum());
        second.push(w[2].iter().zip(ys).map(|(a, b)| a * b).sum());
        one_sided.push(i < half || i + half >= n);
    }
    GridDerivatives {
        first,
        second,
        one_sided,
    }
}

/// Three-point second derivative, used only to gauge the 5-point estimate.
pub fn second_derivative_low_order(x: &[f64], y: &[f64], i: usize) -> f64 {
    let n = x.len();
    let start = i.saturating_sub(1).min(n - 3);
    let w = fornberg_weights(x[i], &x[start..start + 3], 2);
    w[2].iter().zip(&y[start..start + 3]).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_centred_weights() {
        let nodes = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let w = fornberg_weights(0.0, &nodes, 2);
        let d1 = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        let d2 = [-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0];
        for j in 0..5 {
            assert!((w[1][j] - d1[j]).abs() < 1e-14);
            assert!((w[2][j] - d2[j]).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_for_quartics_on_uneven_grid() {
        let x = [0.1, 0.25, 0.3, 0.55, 0.9, 1.0, 1.4];
        let p = |t: f64| 1.0 - 2.0 * t + 3.0 * t.powi(3) - t.powi(4);
        let dp = |t: f64| -2.0 + 9.0 * t * t - 4.0 * t.powi(3);
        let ddp = |t: f64| 18.0 * t - 12.0 * t * t;
        let y: Vec<f64> = x.iter().map(|&t| p(t)).collect();
        let d = grid_derivatives(&x, &y);
        for i in 0..x.len() {
            assert!((d.first[i] - dp(x[i])).abs() < 1e-10, "i = {i}");
            assert!((d.second[i] - ddp(x[i])).abs() < 1e-9, "i = {i}");
        }
        assert_eq!(
            d.one_sided,
            vec![true, true, false, false, false, true, true]
        );
    }
}
