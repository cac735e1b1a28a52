//! Dense 64x64 matrices and the small amount of linear algebra the kernel
//! regression needs: Cholesky factorization of SPD systems and a Jacobi
//! eigendecomposition used for the pseudo-inverse fallback.

use crate::scalar::Scalar;

/// Side length of the flattened block space (8*8).
pub const DIM: usize = 64;

/// A dense `64x64` matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct Matrix64<T> {
    data: Vec<T>,
}

impl<T: Scalar> Matrix64<T> {
    pub fn zeros() -> Self {
        Self {
            data: vec![T::zero(); DIM * DIM],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..DIM {
            m.data[i * DIM + i] = T::one();
        }
        m
    }

    /// Builds a matrix from a function of (row, column).
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(DIM * DIM);
        for r in 0..DIM {
            for c in 0..DIM {
                data.push(f(r, c));
            }
        }
        Self { data }
    }

    /// Builds a matrix from `64*64` row-major entries.
    pub fn from_entries(entries: &[T]) -> Self {
        assert_eq!(entries.len(), DIM * DIM, "expected 4096 entries");
        Self {
            data: entries.to_vec(),
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> T {
        self.data[r * DIM + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * DIM + c] = v;
    }

    /// Row-major view of all entries.
    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * DIM..(r + 1) * DIM]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|r, c| self.at(c, r))
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros();
        for r in 0..DIM {
            for k in 0..DIM {
                let a = self.at(r, k);
                if a == T::zero() {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * DIM..(r + 1) * DIM];
                for c in 0..DIM {
                    out_row[c] += a * rhs_row[c];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[T; DIM]) -> [T; DIM] {
        let mut out = [T::zero(); DIM];
        for r in 0..DIM {
            let row = self.row(r);
            let mut acc = T::zero();
            for c in 0..DIM {
                acc += row[c] * v[c];
            }
            out[r] = acc;
        }
        out
    }

    /// `self += u * v^T`.
    pub fn add_outer(&mut self, u: &[T; DIM], v: &[T; DIM]) {
        for r in 0..DIM {
            let ur = u[r];
            if ur == T::zero() {
                continue;
            }
            let row = &mut self.data[r * DIM..(r + 1) * DIM];
            for c in 0..DIM {
                row[c] += ur * v[c];
            }
        }
    }

    /// `self += lambda * I`.
    pub fn add_scaled_identity(&mut self, lambda: T) {
        for i in 0..DIM {
            self.data[i * DIM + i] += lambda;
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a += *b;
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&rhs.data) {
            *a -= *b;
        }
        out
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    pub fn trace(&self) -> T {
        (0..DIM).map(|i| self.at(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .map(|&x| x * x)
            .fold(T::zero(), |a, b| a + b)
            .sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Cholesky factorization `self = L * L^T` for symmetric positive-definite
    /// input. Returns `None` when a pivot falls below `DIM * eps * max_diag`,
    /// i.e. the matrix is numerically singular or indefinite.
    pub fn cholesky(&self) -> Option<Cholesky64<T>> {
        let max_diag = (0..DIM).fold(T::zero(), |acc, i| acc.max(self.at(i, i).abs()));
        let tol = T::from_f64(DIM as f64) * T::epsilon() * max_diag;
        let mut lower = Self::zeros();
        for c in 0..DIM {
            let mut diag = self.at(c, c);
            for k in 0..c {
                let l = lower.at(c, k);
                diag -= l * l;
            }
            if !(diag > tol) || !diag.is_finite() {
                return None;
            }
            let d = diag.sqrt();
            lower.set(c, c, d);
            for r in (c + 1)..DIM {
                let mut sum = self.at(r, c);
                for k in 0..c {
                    sum -= lower.at(r, k) * lower.at(c, k);
                }
                lower.set(r, c, sum / d);
            }
        }
        Some(Cholesky64 { lower })
    }

    /// Eigendecomposition of a symmetric matrix by the cyclic Jacobi method.
    /// Returns `(q, eigenvalues)` with `self = q * diag(eigenvalues) * q^T`;
    /// columns of `q` are the eigenvectors.
    pub fn symmetric_eigen(&self) -> (Self, [T; DIM]) {
        let mut a = self.clone();
        let mut q = Self::identity();
        let half = T::from_f64(0.5);

        for _sweep in 0..64 {
            let mut off = T::zero();
            for r in 0..DIM {
                for c in (r + 1)..DIM {
                    off += a.at(r, c).abs();
                }
            }
            let scale = a.max_abs().max(T::min_positive_value());
            if off <= T::epsilon() * scale * T::from_f64((DIM * DIM) as f64) {
                break;
            }
            for p in 0..DIM {
                for r in (p + 1)..DIM {
                    let apq = a.at(p, r);
                    if apq.abs() <= T::epsilon() * scale {
                        continue;
                    }
                    // Jacobi rotation zeroing a[p][r].
                    let theta = half * (a.at(r, r) - a.at(p, p)) / apq;
                    let t = {
                        let sign = if theta >= T::zero() {
                            T::one()
                        } else {
                            -T::one()
                        };
                        sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                    };
                    let cos = T::one() / (t * t + T::one()).sqrt();
                    let sin = t * cos;
                    for k in 0..DIM {
                        let akp = a.at(k, p);
                        let akr = a.at(k, r);
                        a.set(k, p, cos * akp - sin * akr);
                        a.set(k, r, sin * akp + cos * akr);
                    }
                    for k in 0..DIM {
                        let apk = a.at(p, k);
                        let ark = a.at(r, k);
                        a.set(p, k, cos * apk - sin * ark);
                        a.set(r, k, sin * apk + cos * ark);
                    }
                    for k in 0..DIM {
                        let qkp = q.at(k, p);
                        let qkr = q.at(k, r);
                        q.set(k, p, cos * qkp - sin * qkr);
                        q.set(k, r, sin * qkp + cos * qkr);
                    }
                }
            }
        }

        let mut eig = [T::zero(); DIM];
        for i in 0..DIM {
            eig[i] = a.at(i, i);
        }
        (q, eig)
    }

    /// Moore-Penrose pseudo-inverse of a symmetric matrix. Eigenvalues with
    /// magnitude below `rel_cutoff * max_abs_eigenvalue` are treated as zero.
    pub fn pseudo_inverse_symmetric(&self, rel_cutoff: T) -> Self {
        let (q, eig) = self.symmetric_eigen();
        let max_eig = eig.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()));
        let cutoff = rel_cutoff * max_eig;
        let mut inv_eig = [T::zero(); DIM];
        for i in 0..DIM {
            if eig[i].abs() > cutoff {
                inv_eig[i] = T::one() / eig[i];
            }
        }
        // q * diag(inv_eig) * q^T
        let mut out = Self::zeros();
        for r in 0..DIM {
            for c in 0..DIM {
                let mut acc = T::zero();
                for k in 0..DIM {
                    acc += q.at(r, k) * inv_eig[k] * q.at(c, k);
                }
                out.set(r, c, acc);
            }
        }
        out
    }
}

impl<T> std::fmt::Debug for Matrix64<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Matrix64(64x64)")
    }
}

/// Lower-triangular Cholesky factor of an SPD matrix.
pub struct Cholesky64<T> {
    lower: Matrix64<T>,
}

impl<T: Scalar> Cholesky64<T> {
    /// Solves `A x = b` where `A = L * L^T`.
    pub fn solve(&self, b: &[T; DIM]) -> [T; DIM] {
        let mut y = *b;
        // forward: L y = b
        for i in 0..DIM {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lower.at(i, j) * y[j];
            }
            y[i] = acc / self.lower.at(i, i);
        }
        // backward: L^T x = y
        for i in (0..DIM).rev() {
            let mut acc = y[i];
            for j in (i + 1)..DIM {
                acc -= self.lower.at(j, i) * y[j];
            }
            y[i] = acc / self.lower.at(i, i);
        }
        y
    }
}
