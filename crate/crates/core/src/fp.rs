//! Prime-field arithmetic and dense exact linear algebra over `F_p`.
//!
//! Everything here is exact: ranks and kernel dimensions come from Gaussian
//! elimination over the field, never from floating point. Primes are capped
//! at `2^31` so that products of two reduced elements fit in a `u64`.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} exceeds the 2^31 limit")]
    TooLarge(u64),
}

/// A prime field `F_p`, `p < 2^31`. Default is `F_32003`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldPrime {
    p: u64,
}

impl Default for FieldPrime {
    fn default() -> Self {
        Self { p: 32003 }
    }
}

impl FieldPrime {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p >= 1 << 31 {
            return Err(FieldError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(self) -> u64 {
        self.p
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse by Fermat; `a` must be nonzero mod `p`.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0, "inverse of zero");
        self.pow(a, self.p - 2)
    }

    /// Reduce a signed integer into `[0, p)`.
    pub fn reduce_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Dense row-major matrix over a fixed prime field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    field: FieldPrime,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(field: FieldPrime, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: FieldPrime, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn field(&self) -> FieldPrime {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        debug_assert!(v < self.field.p);
        self.data[r * self.cols + c] = v;
    }

    pub fn add_assign_at(&mut self, r: usize, c: usize, v: u64) {
        let cur = self.get(r, c);
        let nv = self.field.add(cur, v % self.field.p);
        self.set(r, c, nv);
    }

    pub fn mul(&self, rhs: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let f = self.field;
        let mut out = FpMatrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = f.add(out.get(i, j), f.mul(a, rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Rank by in-place elimination on a scratch copy.
    pub fn rank(&self) -> usize {
        let f = self.field;
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let at = |m: &Vec<u64>, r: usize, c: usize| m[r * cols + c];
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| at(&m, r, col) != 0) else {
                continue;
            };
            if pivot != rank {
                for c in 0..cols {
                    m.swap(rank * cols + c, pivot * cols + c);
                }
            }
            let inv = f.inv(at(&m, rank, col));
            for r in rank + 1..rows {
                let lead = at(&m, r, col);
                if lead == 0 {
                    continue;
                }
                let factor = f.mul(lead, inv);
                for c in col..cols {
                    let v = f.sub(at(&m, r, c), f.mul(factor, at(&m, rank, c)));
                    m[r * cols + c] = v;
                }
            }
            rank += 1;
        }
        rank
    }

    /// `dim ker = cols - rank`: exact over the field.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }
}
