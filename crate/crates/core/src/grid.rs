//! Dense 2D arrays indexed by lattice points, shared by the net and
//! pattern fills.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid2<T> {
    pub w: usize,
    pub h: usize,
    data: Vec<T>,
}

impl<T: Clone + Default> Grid2<T> {
    pub fn new(w: usize, h: usize) -> Self {
        Grid2 { w, h, data: vec![T::default(); w * h] }
    }
}

impl<T> Grid2<T> {
    pub fn from_fn(w: usize, h: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(w * h);
        for j in 0..h {
            for i in 0..w {
                data.push(f(i, j));
            }
        }
        Grid2 { w, h, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        debug_assert!(i < self.w && j < self.h);
        &self.data[j * self.w + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        debug_assert!(i < self.w && j < self.h);
        self.data[j * self.w + i] = v;
    }

    pub fn iter_indexed(&self) -> impl Iterator<Item = ((usize, usize), &T)> {
        let w = self.w;
        self.data.iter().enumerate().map(move |(k, v)| ((k % w, k / w), v))
    }
}
