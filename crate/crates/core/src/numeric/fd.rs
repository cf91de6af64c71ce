//! Finite-difference derivatives on uniform grids.
//!
//! Weights come from Fornberg's recursion, so any derivative order and
//! accuracy order can be requested. Periodic data wraps around; open data
//! switches to one-sided stencils near the ends.

/// Accuracy order used throughout the crate.
pub const DEFAULT_FD_ORDER: usize = 6;

/// Weights for the `m`-th derivative at `x0` from values at `nodes`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

fn central_width(deriv: usize, order: usize) -> usize {
    2 * deriv.div_ceil(2) - 1 + order
}

/// `deriv`-th derivative of uniformly spaced `values` with step `h`.
///
/// Stencils shrink automatically when fewer samples than the requested
/// stencil are available.
pub fn derivative(values: &[f64], h: f64, deriv: usize, order: usize, periodic: bool) -> Vec<f64> {
    let n = values.len();
    if deriv == 0 {
        return values.to_vec();
    }
    let width = central_width(deriv, order).min(n | 1);
    let width = if width > n { n - (1 - n % 2) } else { width };
    let r = width / 2;
    let offsets: Vec<f64> = (0..width).map(|k| k as f64 - r as f64).collect();
    let central = fornberg_weights(0.0, &offsets, deriv);
    let scale = h.powi(deriv as i32);
    let mut out = vec![0.0; n];
    if periodic {
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, w) in central.iter().enumerate() {
                let idx = (i + n + k - r) % n;
                acc += w * values[idx];
            }
            *o = acc / scale;
        }
        return out;
    }
    for i in r..n.saturating_sub(r) {
        let mut acc = 0.0;
        for (k, w) in central.iter().enumerate() {
            acc += w * values[i + k - r];
        }
        out[i] = acc / scale;
    }
    let side = (deriv + order).min(n);
    let nodes: Vec<f64> = (0..side).map(|k| k as f64).collect();
    for i in 0..r.min(n) {
        let w = fornberg_weights(i as f64, &nodes, deriv);
        out[i] = w.iter().zip(values).map(|(w, v)| w * v).sum::<f64>() / scale;
        let j = n - 1 - i;
        if j >= r && j + r < n {
            continue;
        }
        let wr = fornberg_weights((side - 1 - i) as f64, &nodes, deriv);
        out[j] = wr
            .iter()
            .zip(&values[n - side..])
            .map(|(w, v)| w * v)
            .sum::<f64>()
            / scale;
    }
    out
}
