/// Bessel function of the first kind `J_n(x)` by its power series; accurate to
/// ~1e-15 for `|x| ≲ 10`.
pub fn bessel_j(order: i32, x: f64) -> f64 {
    let n = order.unsigned_abs();
    let mut term = (0.5 * x).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let q = -0.25 * x * x;
    let mut sum = term;
    let mut k = 0u32;
    while k < 200 {
        k += 1;
        term *= q / (f64::from(k) * f64::from(k + n));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    if order < 0 && n % 2 == 1 {
        -sum
    } else {
        sum
    }
}
