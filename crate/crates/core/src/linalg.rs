//! Dense complex matrices of order 1 or 2, which is all the per-receiver
//! effective systems ever need.

use crate::channel::C64;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmallMat {
    n: usize,
    a: [[C64; 2]; 2],
}

impl SmallMat {
    pub fn zeros(n: usize) -> Self {
        assert!(n == 1 || n == 2, "only order 1 or 2 is supported, got {n}");
        SmallMat {
            n,
            a: [[ZERO; 2]; 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.a[i][i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, v) in row.iter().enumerate() {
                m.a[i][j] = *v;
            }
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        debug_assert!(i < self.n && j < self.n);
        self.a[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        assert!(i < self.n && j < self.n);
        self.a[i][j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<C64>> {
        (0..self.n).map(|i| self.a[i][..self.n].to_vec()).collect()
    }

    pub fn det(&self) -> C64 {
        match self.n {
            1 => self.a[0][0],
            _ => self.a[0][0] * self.a[1][1] - self.a[0][1] * self.a[1][0],
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.a[i][i]).sum()
    }

    pub fn frobenius_sqr(&self) -> f64 {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.a[i][j].norm_sqr())
            .sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[i][j] = self.a[j][i].conj();
            }
        }
        m
    }

    pub fn mul(&self, other: &SmallMat) -> Self {
        assert_eq!(self.n, other.n);
        let mut m = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[i][j] = (0..self.n).map(|k| self.a[i][k] * other.a[k][j]).sum();
            }
        }
        m
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d == ZERO {
            return None;
        }
        let mut m = Self::zeros(self.n);
        match self.n {
            1 => m.a[0][0] = d.inv(),
            _ => {
                m.a[0][0] = self.a[1][1] / d;
                m.a[0][1] = -self.a[0][1] / d;
                m.a[1][0] = -self.a[1][0] / d;
                m.a[1][1] = self.a[0][0] / d;
            }
        }
        Some(m)
    }

    /// Solve `self * x = b` by Cramer's rule.
    pub fn solve(&self, b: &[C64]) -> Option<Vec<C64>> {
        assert_eq!(b.len(), self.n);
        let d = self.det();
        if d == ZERO {
            return None;
        }
        Some(match self.n {
            1 => vec![b[0] / d],
            _ => vec![
                (b[0] * self.a[1][1] - self.a[0][1] * b[1]) / d,
                (self.a[0][0] * b[1] - b[0] * self.a[1][0]) / d,
            ],
        })
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|k| self.a[i][k] * x[k]).sum())
            .collect()
    }
}
