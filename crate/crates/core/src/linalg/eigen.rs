use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a Hermitian matrix, in descending order.
///
/// Cyclic complex Jacobi: each pivot is first phase-rotated so the
/// off-diagonal entry is real, then annihilated by a real plane rotation.
/// Iterates until the off-diagonal Frobenius norm drops below `1e-12`
/// relative to the matrix scale.
pub fn hermitian_eigenvalues<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<T>> {
    if !a.is_hermitian(T::tol(1e-10)) {
        return Err(Error::Precondition("matrix is not Hermitian".into()));
    }
    let n = a.dim();
    let mut m = a.clone();
    for i in 0..n {
        m[(i, i)] = Complex::new(m[(i, i)].re, T::zero());
    }
    let scale = m.frobenius_norm().max(T::one());
    let tol = T::tol(1e-12) * scale;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&m) <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, p, q);
            }
        }
    }

    let mut eig: Vec<T> = (0..n).map(|i| m[(i, i)].re).collect();
    eig.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    Ok(eig)
}

fn off_diagonal_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    let n = m.dim();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc = acc + m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate<T: Real>(m: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let b = m[(p, q)];
    let b_abs = b.norm();
    if b_abs <= T::min_positive_value() {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (b_abs + b_abs);
    let t =
        if theta == T::zero() { T::one() } else { theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt()) };
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;
    // b = |b| e^{i phi}; phase factor e^{-i phi}
    let phase = b.conj() / b_abs;

    let g_pp = Complex::new(c, T::zero());
    let g_pq = Complex::new(s, T::zero());
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    let n = m.dim();
    for k in 0..n {
        let kp = m[(k, p)];
        let kq = m[(k, q)];
        m[(k, p)] = kp * g_pp + kq * g_qp;
        m[(k, q)] = kp * g_pq + kq * g_qq;
    }
    for k in 0..n {
        let pk = m[(p, k)];
        let qk = m[(q, k)];
        m[(p, k)] = g_pp.conj() * pk + g_qp.conj() * qk;
        m[(q, k)] = g_pq.conj() * pk + g_qq.conj() * qk;
    }
    let zero = Complex::new(T::zero(), T::zero());
    m[(p, q)] = zero;
    m[(q, p)] = zero;
    m[(p, p)] = Complex::new(m[(p, p)].re, T::zero());
    m[(q, q)] = Complex::new(m[(q, q)].re, T::zero());
}
