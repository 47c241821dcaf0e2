//! Small vector helpers over generic fields; points are slices.

use alloc::vec::Vec;

use crate::scalar::Field;

pub fn add<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn sub<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

pub fn scale<T: Field>(a: &[T], s: &T) -> Vec<T> {
    a.iter().map(|x| x.clone() * s.clone()).collect()
}

pub fn dot<T: Field>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x.clone() * y.clone();
    }
    acc
}

pub fn cross3<T: Field>(a: &[T], b: &[T]) -> Vec<T> {
    debug_assert!(a.len() == 3 && b.len() == 3);
    alloc::vec![
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

pub fn norm(a: &[f64]) -> f64 {
    num_traits::Float::sqrt(dot(a, a))
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    norm(&sub(a, b))
}

/// a + s (b - c)
pub fn affine_step<T: Field>(a: &[T], s: &T, b: &[T], c: &[T]) -> Vec<T> {
    add(a, &scale(&sub(b, c), s))
}
