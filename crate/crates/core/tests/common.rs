#![allow(dead_code)]

use geogate::linalg::{max_abs, Operator};

pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: got {actual:.15e}, expected {expected:.15e} (tol {tol:e})"
    );
}

pub fn assert_rel(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol * expected.abs(),
        "{what}: got {actual:.15e}, expected {expected:.15e} (rel tol {tol:e})"
    );
}

pub fn assert_matrix(actual: &Operator, expected: &Operator, tol: f64, what: &str) {
    let err = max_abs(&(actual - expected));
    assert!(err <= tol, "{what}: max deviation {err:e} > {tol:e}\n{actual}\n{expected}");
}
