use std::ops::{Index, IndexMut};

/// Dense rank-4 tensor over `n` orbital indices, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor4 {
    n: usize,
    data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(n: usize) -> Self {
        Tensor4 {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Largest deviation from the 8-fold real-orbital symmetry, with the
    /// tensor read in chemist order `(ij|kl)`.
    pub fn chemist_symmetry_error(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self[(i, j, k, l)];
                        for w in [
                            self[(j, i, k, l)],
                            self[(i, j, l, k)],
                            self[(k, l, i, j)],
                            self[(l, k, j, i)],
                        ] {
                            worst = worst.max((v - w).abs());
                        }
                    }
                }
            }
        }
        worst
    }

    /// Reorders chemist `(pr|qs)` into physicist `<pq|rs>` or back; the
    /// shuffle is its own inverse.
    pub fn swap_middle(&self) -> Tensor4 {
        let n = self.n;
        let mut out = Tensor4::zeros(n);
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        out[(p, q, r, s)] = self[(p, r, q, s)];
                    }
                }
            }
        }
        out
    }
}

impl Index<(usize, usize, usize, usize)> for Tensor4 {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j, k, l): (usize, usize, usize, usize)) -> &f64 {
        &self.data[self.offset(i, j, k, l)]
    }
}

impl IndexMut<(usize, usize, usize, usize)> for Tensor4 {
    #[inline]
    fn index_mut(&mut self, (i, j, k, l): (usize, usize, usize, usize)) -> &mut f64 {
        let o = self.offset(i, j, k, l);
        &mut self.data[o]
    }
}
