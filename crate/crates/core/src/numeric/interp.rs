//! Local polynomial interpolation.

/// Barycentric Lagrange interpolation through `(xs[i], ys[i])`.
fn lagrange(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, (&xi, &yi)) in xs.iter().zip(ys).enumerate() {
        let dx = x - xi;
        if dx == 0.0 {
            return yi;
        }
        let mut w = 1.0;
        for (j, &xj) in xs.iter().enumerate() {
            if j != i {
                w *= xi - xj;
            }
        }
        let t = 1.0 / (w * dx);
        num += t * yi;
        den += t;
    }
    num / den
}

/// Interpolate uniformly spaced `values` (first sample at `x0`, step `h`) at
/// `x` with a centered stencil of `width` points. Periodic data wraps.
pub fn lagrange_uniform(
    values: &[f64],
    x0: f64,
    h: f64,
    x: f64,
    width: usize,
    periodic: bool,
) -> f64 {
    let n = values.len();
    let width = width.min(n);
    let u = (x - x0) / h;
    let base = u.floor() as i64 - (width as i64 / 2 - 1);
    let start = if periodic {
        base
    } else {
        base.clamp(0, (n - width) as i64)
    };
    let mut xs = Vec::with_capacity(width);
    let mut ys = Vec::with_capacity(width);
    for k in 0..width as i64 {
        let idx = start + k;
        xs.push(idx as f64);
        ys.push(values[idx.rem_euclid(n as i64) as usize]);
    }
    lagrange(&xs, &ys, u)
}

/// Interpolate at `x` from monotone increasing `nodes` with a local stencil
/// of `width` points around the bracketing interval.
pub fn lagrange_nonuniform(nodes: &[f64], values: &[f64], x: f64, width: usize) -> f64 {
    let n = nodes.len();
    let width = width.min(n);
    let pos = nodes.partition_point(|&t| t <= x);
    let base = pos as i64 - width as i64 / 2;
    let start = base.clamp(0, (n - width) as i64) as usize;
    let xs = &nodes[start..start + width];
    let ys = &values[start..start + width];
    // Center the abscissae for conditioning.
    let mid = xs[width / 2];
    let scale = (xs[width - 1] - xs[0]).abs().max(f64::MIN_POSITIVE);
    let xs: Vec<f64> = xs.iter().map(|t| (t - mid) / scale).collect();
    lagrange(&xs, ys, (x - mid) / scale)
}
