//! Small dense complex matrices sized for the four-dimensional state
//! (a+, a-, z, p) and its 2x2 quadrature blocks.

use num_complex::Complex64;

pub type C64 = Complex64;

/// 2x2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [[C64; 2]; 2]);

impl Mat2 {
    pub fn zero() -> Self {
        Mat2([[C64::new(0.0, 0.0); 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        m.0[0][0] = C64::new(1.0, 0.0);
        m.0[1][1] = C64::new(1.0, 0.0);
        m
    }

    pub fn from_real(r: [[f64; 2]; 2]) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = C64::new(r[i][j], 0.0);
            }
        }
        m
    }

    /// Rotation matrix R(theta) = [[cos, -sin], [sin, cos]].
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::from_real([[c, -s], [s, c]])
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] *= s;
            }
        }
        m
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn mul(&self, rhs: &Mat2) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        m
    }

    pub fn add(&self, rhs: &Mat2) -> Self {
        let mut m = *self;
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] += rhs.0[i][j];
            }
        }
        m
    }

    pub fn sub(&self, rhs: &Mat2) -> Self {
        let mut m = *self;
        for i in 0..2 {
            for j in 0..2 {
                m.0[i][j] -= rhs.0[i][j];
            }
        }
        m
    }

    pub fn inv(&self) -> Option<Mat2> {
        let det = self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0];
        if det.norm() == 0.0 {
            return None;
        }
        let inv_det = det.inv();
        Some(Mat2([
            [self.0[1][1] * inv_det, -self.0[0][1] * inv_det],
            [-self.0[1][0] * inv_det, self.0[0][0] * inv_det],
        ]))
    }

    /// Row vector (v0, v1) times the matrix: returns a length-2 complex row.
    pub fn left_mul_row(&self, v: [f64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[1][0] * v[1],
            self.0[0][1] * v[0] + self.0[1][1] * v[1],
        ]
    }

    /// Matrix times a complex column vector.
    pub fn mul_vec(&self, v: [C64; 2]) -> [C64; 2] {
        [
            self.0[0][0] * v[0] + self.0[0][1] * v[1],
            self.0[1][0] * v[0] + self.0[1][1] * v[1],
        ]
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                s += self.0[i][j].norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                m = m.max(self.0[i][j].norm());
            }
        }
        m
    }

    /// Squared Euclidean norm of row `i`.
    pub fn row_norm_sqr(&self, i: usize) -> f64 {
        self.0[i][0].norm_sqr() + self.0[i][1].norm_sqr()
    }
}

/// 4x4 complex matrix, row-major.
#[derive(Clone, Copy, Debug)]
pub struct Mat4(pub [[C64; 4]; 4]);

impl Mat4 {
    pub fn zero() -> Self {
        Mat4([[C64::new(0.0, 0.0); 4]; 4])
    }

    pub fn from_real(r: [[f64; 4]; 4]) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.0[i][j] = C64::new(r[i][j], 0.0);
            }
        }
        m
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inv(&self) -> Option<Mat4> {
        let mut a = self.0;
        let mut b = Mat4::zero().0;
        for i in 0..4 {
            b[i][i] = C64::new(1.0, 0.0);
        }
        for col in 0..4 {
            let mut pivot = col;
            let mut best = a[col][col].norm();
            for r in (col + 1)..4 {
                if a[r][col].norm() > best {
                    best = a[r][col].norm();
                    pivot = r;
                }
            }
            if best == 0.0 {
                return None;
            }
            a.swap(col, pivot);
            b.swap(col, pivot);
            let inv_p = a[col][col].inv();
            for j in 0..4 {
                a[col][j] *= inv_p;
                b[col][j] *= inv_p;
            }
            for r in 0..4 {
                if r == col {
                    continue;
                }
                let f = a[r][col];
                if f.norm() == 0.0 {
                    continue;
                }
                for j in 0..4 {
                    let ac = a[col][j];
                    let bc = b[col][j];
                    a[r][j] -= f * ac;
                    b[r][j] -= f * bc;
                }
            }
        }
        Some(Mat4(b))
    }

    /// Extract the 2x2 block with top-left corner at (row, col).
    pub fn block2(&self, row: usize, col: usize) -> Mat2 {
        Mat2([
            [self.0[row][col], self.0[row][col + 1]],
            [self.0[row + 1][col], self.0[row + 1][col + 1]],
        ])
    }
}

/// Solve the real dense system `a x = b` in place (Gaussian elimination with
/// partial pivoting). `a` is n x n row-major. Returns None if singular.
pub fn solve_real(n: usize, a: &mut [f64], b: &mut [f64]) -> Option<()> {
    assert_eq!(a.len(), n * n);
    assert_eq!(b.len(), n);
    for col in 0..n {
        let mut pivot = col;
        let mut best = a[col * n + col].abs();
        for r in (col + 1)..n {
            let v = a[r * n + col].abs();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if best == 0.0 {
            return None;
        }
        if pivot != col {
            for j in 0..n {
                a.swap(col * n + j, pivot * n + j);
            }
            b.swap(col, pivot);
        }
        let p = a[col * n + col];
        for r in (col + 1)..n {
            let f = a[r * n + col] / p;
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                a[r * n + j] -= f * a[col * n + j];
            }
            b[r] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut x = b[col];
        for j in (col + 1)..n {
            x -= a[col * n + j] * b[j];
        }
        b[col] = x / a[col * n + col];
    }
    Some(())
}
