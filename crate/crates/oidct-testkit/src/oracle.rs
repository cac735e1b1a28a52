//! Independent reference computations used as test oracles. These stay
//! deliberately naive — direct double loops over the defining formulas and
//! Gauss-Jordan elimination — and share no code with the library paths they
//! check.

const N: usize = 8;

fn norm(k: usize) -> f64 {
    if k == 0 {
        1.0 / 2.0f64.sqrt()
    } else {
        1.0
    }
}

/// Textbook 2-D DCT-II of an 8x8 block, summed term by term:
/// `X(u,v) = c(u) c(v) / 4 * sum_ij x(i,j) cos((2i+1)u pi/16) cos((2j+1)v pi/16)`.
pub fn naive_forward_dct(pixels: &[f64; N * N]) -> [f64; N * N] {
    let mut out = [0.0; N * N];
    for u in 0..N {
        for v in 0..N {
            let mut sum = 0.0;
            for i in 0..N {
                for j in 0..N {
                    let ci = (((2 * i + 1) * u) as f64 * std::f64::consts::PI / 16.0).cos();
                    let cj = (((2 * j + 1) * v) as f64 * std::f64::consts::PI / 16.0).cos();
                    sum += pixels[i * N + j] * ci * cj;
                }
            }
            out[u * N + v] = norm(u) * norm(v) / 4.0 * sum;
        }
    }
    out
}

/// Textbook inverse of [`naive_forward_dct`]:
/// `x(i,j) = sum_uv c(u) c(v) / 4 * X(u,v) cos((2i+1)u pi/16) cos((2j+1)v pi/16)`.
pub fn naive_inverse_dct(coeffs: &[f64; N * N]) -> [f64; N * N] {
    let mut out = [0.0; N * N];
    for i in 0..N {
        for j in 0..N {
            let mut sum = 0.0;
            for u in 0..N {
                for v in 0..N {
                    let ci = (((2 * i + 1) * u) as f64 * std::f64::consts::PI / 16.0).cos();
                    let cj = (((2 * j + 1) * v) as f64 * std::f64::consts::PI / 16.0).cos();
                    sum += norm(u) * norm(v) / 4.0 * coeffs[u * N + v] * ci * cj;
                }
            }
            out[i * N + j] = sum;
        }
    }
    out
}

const DIM: usize = 64;

/// Brute-force ridge least-squares kernel for the stacked system: with
/// pixel vectors and coefficient vectors as matrix columns, forms
/// `P D^T` and `D D^T + lambda I` explicitly and solves by Gauss-Jordan
/// elimination with partial pivoting. Panics if the system is singular.
pub fn least_squares_kernel(
    pixel_cols: &[[f64; DIM]],
    coeff_cols: &[[f64; DIM]],
    lambda: f64,
) -> Vec<[f64; DIM]> {
    assert_eq!(pixel_cols.len(), coeff_cols.len());
    let mut cross = vec![[0.0f64; DIM]; DIM]; // P D^T
    let mut auto = vec![[0.0f64; DIM]; DIM]; // D D^T + lambda I
    for (p, d) in pixel_cols.iter().zip(coeff_cols) {
        for r in 0..DIM {
            for c in 0..DIM {
                cross[r][c] += p[r] * d[c];
                auto[r][c] += d[r] * d[c];
            }
        }
    }
    for (i, row) in auto.iter_mut().enumerate() {
        row[i] += lambda;
    }
    let inv = gauss_jordan_inverse(&auto);
    let mut kernel = vec![[0.0f64; DIM]; DIM];
    for r in 0..DIM {
        for c in 0..DIM {
            let mut acc = 0.0;
            for k in 0..DIM {
                acc += cross[r][k] * inv[k][c];
            }
            kernel[r][c] = acc;
        }
    }
    kernel
}

fn gauss_jordan_inverse(matrix: &[[f64; DIM]]) -> Vec<[f64; DIM]> {
    let mut a: Vec<[f64; DIM]> = matrix.to_vec();
    let mut inv = vec![[0.0f64; DIM]; DIM];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..DIM {
        let pivot_row = (col..DIM)
            .max_by(|&r1, &r2| a[r1][col].abs().total_cmp(&a[r2][col].abs()))
            .unwrap();
        assert!(a[pivot_row][col].abs() > 1e-12, "singular system");
        a.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let pivot = a[col][col];
        for c in 0..DIM {
            a[col][c] /= pivot;
            inv[col][c] /= pivot;
        }
        for r in 0..DIM {
            if r == col {
                continue;
            }
            let factor = a[r][col];
            if factor == 0.0 {
                continue;
            }
            for c in 0..DIM {
                a[r][c] -= factor * a[col][c];
                inv[r][c] -= factor * inv[col][c];
            }
        }
    }
    inv
}
