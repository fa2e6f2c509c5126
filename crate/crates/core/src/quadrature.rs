//! Composite Simpson quadrature on uniform nodes.

/// Default node count for phase and detuning integrals.
pub const DEFAULT_NODES: usize = 4097;

/// Integrates `f` over `[a, b]` with composite Simpson on `nodes` points.
/// An even `nodes` is bumped to the next odd count; fewer than 3 nodes is treated as 3.
pub fn simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, nodes: usize) -> f64 {
    let n = nodes.max(3) | 1;
    let intervals = n - 1;
    let h = (b - a) / intervals as f64;
    let mut sum = f(a) + f(b);
    for k in 1..intervals {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * k as f64);
    }
    sum * h / 3.0
}

/// Uniform sample times `t_k = a + k (b − a)/(nodes − 1)`.
pub fn uniform_nodes(a: f64, b: f64, nodes: usize) -> impl Iterator<Item = f64> {
    let n = nodes.max(2);
    let h = (b - a) / (n - 1) as f64;
    (0..n).map(move |k| if k + 1 == n { b } else { a + h * k as f64 })
}
