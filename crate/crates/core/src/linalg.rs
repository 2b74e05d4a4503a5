//! Small dense linear algebra over [`Real`] scalars (row-major `n×n` slices).

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::real::Real;

/// Determinant by Gaussian elimination with partial pivoting on point values.
pub fn determinant<T: Real>(m: &[T], n: usize) -> T {
    assert_eq!(m.len(), n * n);
    if n == 0 {
        panic!("determinant of an empty matrix");
    }
    let mut a: Vec<T> = m.to_vec();
    let mut det = a[0].lift(1.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                math::abs(a[i * n + col].re())
                    .partial_cmp(&math::abs(a[j * n + col].re()))
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .unwrap();
        if a[pivot * n + col].re() == 0.0 {
            return a[0].lift(0.0);
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            det = -det;
        }
        let p = a[col * n + col].clone();
        det = det * p.clone();
        for row in col + 1..n {
            let factor = a[row * n + col].clone() / p.clone();
            for k in col + 1..n {
                let v = a[row * n + k].clone() - factor.clone() * a[col * n + k].clone();
                a[row * n + k] = v;
            }
        }
    }
    det
}

/// Inverse by Gauss–Jordan elimination with partial pivoting. Returns `None`
/// when a pivot's point value falls below `tiny` times the largest entry.
pub fn inverse<T: Real>(m: &[T], n: usize, tiny: f64) -> Option<Vec<T>> {
    assert_eq!(m.len(), n * n);
    let scale = m.iter().map(|x| math::abs(x.re())).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    let mut a: Vec<T> = m.to_vec();
    let mut inv: Vec<T> = (0..n * n)
        .map(|i| m[0].lift(if i / n == i % n { 1.0 } else { 0.0 }))
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| {
                math::abs(a[i * n + col].re())
                    .partial_cmp(&math::abs(a[j * n + col].re()))
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .unwrap();
        if math::abs(a[pivot * n + col].re()) <= tiny * scale {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
                inv.swap(pivot * n + k, col * n + k);
            }
        }
        let p = a[col * n + col].clone();
        for k in 0..n {
            a[col * n + k] = a[col * n + k].clone() / p.clone();
            inv[col * n + k] = inv[col * n + k].clone() / p.clone();
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let factor = a[row * n + col].clone();
            for k in 0..n {
                let v = a[row * n + k].clone() - factor.clone() * a[col * n + k].clone();
                a[row * n + k] = v;
                let w = inv[row * n + k].clone() - factor.clone() * inv[col * n + k].clone();
                inv[row * n + k] = w;
            }
        }
    }
    Some(inv)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(m: &[f64], n: usize) -> Vec<f64> {
    let mut a = m.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        let diag: f64 = (0..n).map(|i| a[i * n + i] * a[i * n + i]).sum();
        if off <= 1e-30 * (diag + 1e-300) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (math::abs(theta) + math::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Least-squares solution of an overdetermined `rows × cols` system through
/// the normal equations (adequate for the tiny, well-scaled systems here).
pub fn least_squares(a: &[f64], b: &[f64], rows: usize, cols: usize) -> Option<Vec<f64>> {
    let mut ata = vec![0.0; cols * cols];
    let mut atb = vec![0.0; cols];
    for r in 0..rows {
        for i in 0..cols {
            atb[i] += a[r * cols + i] * b[r];
            for j in 0..cols {
                ata[i * cols + j] += a[r * cols + i] * a[r * cols + j];
            }
        }
    }
    let inv = inverse(&ata, cols, 1e-14)?;
    Some(
        (0..cols)
            .map(|i| (0..cols).map(|j| inv[i * cols + j] * atb[j]).sum())
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_lorentzian_diagonal() {
        let m = [-2.0, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 4.0];
        let inv = inverse(&m, 3, 1e-14).unwrap();
        assert_eq!(inv[0], -0.5);
        assert_eq!(inv[4], 2.0);
        assert_eq!(inv[8], 0.25);
        assert_eq!(determinant(&m, 3), -4.0);
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = [1.0, 2.0, 2.0, 4.0];
        assert!(inverse(&m, 2, 1e-12).is_none());
        assert_eq!(determinant(&m, 2), 0.0);
    }

    #[test]
    fn eigenvalues_of_symmetric_2x2() {
        let m = [2.0, 1.0, 1.0, 2.0];
        let mut ev = symmetric_eigenvalues(&m, 2);
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 3.0).abs() < 1e-14);
    }
}
