//! Quadrature on uniform grids and Gauss–Legendre panels.

use std::collections::BTreeMap;
use std::num::NonZeroUsize;
use std::sync::{Mutex, OnceLock};

use gauss_quad::legendre::GaussLegendre;

/// ∫ of uniformly sampled data.
///
/// Periodic data (samples covering one period, endpoint excluded) uses the
/// trapezoid rule, which is spectrally accurate there. Open data uses
/// composite Simpson with a 3/8 tail for an odd number of intervals.
pub fn integrate_uniform(values: &[f64], h: f64, periodic: bool) -> f64 {
    let n = values.len();
    if periodic {
        return values.iter().sum::<f64>() * h;
    }
    match n {
        0 | 1 => 0.0,
        2 => 0.5 * h * (values[0] + values[1]),
        3 => h / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        _ => {
            let intervals = n - 1;
            let simpson_end = if intervals.is_multiple_of(2) {
                n - 1
            } else {
                n - 4
            };
            let mut acc = values[0] + values[simpson_end];
            for (i, v) in values.iter().enumerate().take(simpson_end).skip(1) {
                acc += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
            }
            let mut total = acc * h / 3.0;
            if simpson_end != n - 1 {
                let t = &values[n - 4..];
                total += 3.0 * h / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3]);
            }
            total
        }
    }
}

/// Running integral from the first sample, fourth-order accurate.
pub fn cumulative_uniform(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let mut out = vec![0.0; n];
    if n < 4 {
        for i in 1..n {
            out[i] = out[i - 1] + 0.5 * h * (values[i - 1] + values[i]);
        }
        return out;
    }
    for i in 0..n - 1 {
        let step = if i == 0 {
            h / 24.0 * (9.0 * values[0] + 19.0 * values[1] - 5.0 * values[2] + values[3])
        } else if i == n - 2 {
            h / 24.0
                * (9.0 * values[n - 1] + 19.0 * values[n - 2] - 5.0 * values[n - 3] + values[n - 4])
        } else {
            h / 24.0 * (-values[i - 1] + 13.0 * values[i] + 13.0 * values[i + 1] - values[i + 2])
        };
        out[i + 1] = out[i] + step;
    }
    out
}

type NodeTable = BTreeMap<usize, Vec<(f64, f64)>>;

/// Gauss–Legendre nodes and weights on [−1, 1], memoized per degree.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    static CACHE: OnceLock<Mutex<NodeTable>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
    map.entry(n)
        .or_insert_with(|| {
            GaussLegendre::new(NonZeroUsize::new(n.max(1)).unwrap())
                .as_node_weight_pairs()
                .to_vec()
        })
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simpson_handles_both_parities() {
        for n in [21usize, 22, 4, 5] {
            let h = 1.0 / (n - 1) as f64;
            let v: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(3)).collect();
            assert!(
                (integrate_uniform(&v, h, false) - 0.25).abs() < 1e-13,
                "n = {n}"
            );
        }
    }

    #[test]
    fn periodic_trapezoid_is_spectral() {
        let n = 64;
        let h = 2.0 * PI / n as f64;
        let v: Vec<f64> = (0..n).map(|i| (i as f64 * h).cos().exp()).collect();
        // 2π I₀(1)
        let exact = 2.0 * PI * 1.266_065_877_752_008_4;
        assert!((integrate_uniform(&v, h, true) - exact).abs() < 1e-13);
    }

    #[test]
    fn cumulative_is_fourth_order() {
        let n = 201;
        let h = 2.0 / (n - 1) as f64;
        let v: Vec<f64> = (0..n).map(|i| (i as f64 * h).exp()).collect();
        let c = cumulative_uniform(&v, h);
        for (i, x) in c.iter().enumerate() {
            let exact = (i as f64 * h).exp() - 1.0;
            assert!((x - exact).abs() < 1e-9);
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let s: f64 = gauss_legendre(16).iter().map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
    }
}
