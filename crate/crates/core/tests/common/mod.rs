#![allow(dead_code)]

use proptest::prelude::*;
use relcr::exactlin::{Matrix, Subspace};
use relcr::scalar::{int, Rational};

pub fn to_matrix(rows: &[Vec<i64>], cols: usize) -> Matrix {
    Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()).unwrap()
}

/// `rows × cols` integer matrix with entries in `-r..=r`.
pub fn int_rows(rows: usize, cols: usize, r: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-r..=r, cols), rows)
}

pub fn matrix(rows: usize, cols: usize, r: i64) -> impl Strategy<Value = Matrix> {
    int_rows(rows, cols, r).prop_map(move |m| to_matrix(&m, cols))
}

pub fn invertible(n: usize, r: i64) -> impl Strategy<Value = Matrix> {
    matrix(n, n, r).prop_filter("singular", Matrix::is_invertible)
}

/// Span of up to `max_vecs` random vectors in `Q^n`.
pub fn subspace(n: usize, max_vecs: usize) -> impl Strategy<Value = Subspace> {
    (0..=max_vecs)
        .prop_flat_map(move |k| matrix(k, n, 2))
        .prop_map(move |m| Subspace::span(n, &m).unwrap())
}

pub fn rat_vec(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}
