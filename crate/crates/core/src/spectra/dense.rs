//! Dense eigensolvers: cyclic Jacobi for Hermitian matrices, and Householder
//! Hessenberg reduction followed by single-shift complex QR for everything
//! else. Eigenvectors for the general path come from back substitution on the
//! Schur factor.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{vec_norm_2, ComplexMatrix, C64, ONE, ZERO};

/// Largest dimension handed to the dense solvers.
pub const DENSE_CAP: usize = 2000;

/// Eigenvalues of a square matrix with the worst eigenpair residual.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    /// Sorted by `(Re, Im)` after rounding to 1e-12.
    pub eigenvalues: Vec<C64>,
    /// `max ||M v - lambda v||_2` over the computed unit eigenvectors.
    pub residual: f64,
}

impl Spectrum {
    pub fn max_abs(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_im(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}

fn sort_key(z: &C64) -> (i64, i64) {
    ((z.re / 1e-12).round() as i64, (z.im / 1e-12).round() as i64)
}

pub(crate) fn sort_eigenvalues(values: &mut [C64]) {
    values.sort_by_key(sort_key);
}

/// Eigenvalues with a residual certificate. Hermitian input goes through
/// Jacobi (real eigenvalues), anything else through complex Schur.
pub fn eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
    }
    let n = m.rows();
    if n > DENSE_CAP {
        return Err(Error::SizeCap { what: "dense eigensolver", size: n, cap: DENSE_CAP });
    }
    let (values, vectors) = if m.is_hermitian(0.0) {
        let (vals, vecs) = hermitian_eigen(m)?;
        (vals.into_iter().map(|x| C64::new(x, 0.0)).collect::<Vec<_>>(), vecs)
    } else {
        schur_eigen(m)?
    };
    let mut residual: f64 = 0.0;
    for (k, &lambda) in values.iter().enumerate() {
        let v = vectors.column(k);
        let mv = m.mul_vec(&v);
        let r: Vec<C64> = mv.iter().zip(&v).map(|(a, b)| a - lambda * b).collect();
        residual = residual.max(vec_norm_2(&r) / vec_norm_2(&v));
    }
    if !(residual <= tol) {
        return Err(Error::Numeric(format!(
            "eigenpair residual {residual:e} exceeds tolerance {tol:e} (n = {n})"
        )));
    }
    let mut eigenvalues = values;
    sort_eigenvalues(&mut eigenvalues);
    Ok(Spectrum { eigenvalues, residual })
}

/// Cyclic Jacobi for a Hermitian matrix. Returns unsorted real eigenvalues and
/// the unitary matrix whose columns are the matching eigenvectors.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    const MAX_SWEEPS: usize = 100;
    let n = m.rows();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut w = ComplexMatrix::identity(n);
    let scale = a.frobenius();
    if scale == 0.0 {
        return Ok((vec![0.0; n], w));
    }
    for _sweep in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * scale * 0.5 {
            return Ok(((0..n).map(|i| a[(i, i)].re).collect(), w));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // V = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let vpp = C64::new(c, 0.0);
                let vpq = C64::new(s, 0.0);
                let vqp = -phase.conj() * s;
                let vqq = phase.conj() * c;
                for k in 0..n {
                    let (xp, xq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = xp * vpp + xq * vqp;
                    a[(k, q)] = xp * vpq + xq * vqq;
                }
                for k in 0..n {
                    let (xp, xq) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = vpp.conj() * xp + vqp.conj() * xq;
                    a[(q, k)] = vpq.conj() * xp + vqq.conj() * xq;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let (xp, xq) = (w[(k, p)], w[(k, q)]);
                    w[(k, p)] = xp * vpp + xq * vqp;
                    w[(k, q)] = xp * vpq + xq * vqq;
                }
            }
        }
    }
    Err(Error::NoConvergence { routine: "hermitian jacobi", iterations: MAX_SWEEPS })
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn hermitian_max_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    let (vals, _) = hermitian_eigen(m)?;
    Ok(vals.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ZERO);
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let nrm = na.hypot(nb);
    (na / nrm, (a / na) * b.conj() / nrm)
}

/// Householder reduction to upper Hessenberg form, `A = Q H Q^*`.
fn hessenberg(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = m.rows();
    let mut h = m.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = vec_norm_2(&x);
        if alpha == 0.0 {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let mut v = x;
        v[0] += phase * alpha;
        let vn = vec_norm_2(&v);
        if vn == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= vn);
        // H <- (I - 2 v v^*) H (I - 2 v v^*) on rows/cols k+1..n
        for j in 0..n {
            let dot: C64 = (0..v.len()).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            for i in 0..v.len() {
                h[(k + 1 + i, j)] -= 2.0 * v[i] * dot;
            }
        }
        for i in 0..n {
            let dot: C64 = (0..v.len()).map(|j| h[(i, k + 1 + j)] * v[j]).sum();
            for j in 0..v.len() {
                h[(i, k + 1 + j)] -= 2.0 * dot * v[j].conj();
            }
        }
        for i in 0..n {
            let dot: C64 = (0..v.len()).map(|j| q[(i, k + 1 + j)] * v[j]).sum();
            for j in 0..v.len() {
                q[(i, k + 1 + j)] -= 2.0 * dot * v[j].conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

/// Complex Schur form `A = Z T Z^*` with `T` upper triangular.
pub fn complex_schur(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    const MAX_ITER_PER_EIGENVALUE: usize = 100;
    let n = m.rows();
    let (mut h, mut z) = hessenberg(m);
    if n <= 1 {
        return Ok((h, z));
    }
    let norm = h.max_abs().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let mut rot: Vec<(f64, C64)> = Vec::with_capacity(n);
    while hi > 0 {
        // find the start of the unreduced block ending at hi
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= eps * diag || sub <= eps * norm * 1e-3 {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if iter > MAX_ITER_PER_EIGENVALUE {
            return Err(Error::NoConvergence { routine: "complex schur", iterations: total });
        }
        let shift = if iter % 11 == 0 {
            // exceptional shift
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            let a = h[(hi - 1, hi - 1)];
            let b = h[(hi - 1, hi)];
            let c = h[(hi, hi - 1)];
            let d = h[(hi, hi)];
            let half = (a - d) * 0.5;
            let disc = (half * half + b * c).sqrt();
            let s1 = d - b * c / (half + disc);
            let s2 = d - b * c / (half - disc);
            let pick = |s: C64| if s.re.is_finite() && s.im.is_finite() { Some(s) } else { None };
            match (pick(s1), pick(s2)) {
                (Some(x), Some(y)) => {
                    if (x - d).norm() <= (y - d).norm() {
                        x
                    } else {
                        y
                    }
                }
                (Some(x), None) | (None, Some(x)) => x,
                (None, None) => d,
            }
        };
        for k in lo..=hi {
            h[(k, k)] -= shift;
        }
        rot.clear();
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = ZERO;
            rot.push((c, s));
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = lo + idx;
            let top = (k + 2).min(hi);
            for i in 0..=top {
                let (x, y) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
            for i in 0..n {
                let (x, y) = (z[(i, k)], z[(i, k + 1)]);
                z[(i, k)] = x * c + y * s.conj();
                z[(i, k + 1)] = -x * s + y * c;
            }
        }
        for k in lo..=hi {
            h[(k, k)] += shift;
        }
    }
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = ZERO;
        }
    }
    Ok((h, z))
}

/// Eigenvalues in Schur order and the matrix of unit eigenvectors.
fn schur_eigen(m: &ComplexMatrix) -> Result<(Vec<C64>, ComplexMatrix)> {
    let n = m.rows();
    let (t, z) = complex_schur(m)?;
    let values: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let smin = (f64::EPSILON * t.max_abs()).max(f64::MIN_POSITIVE * 1e10);
    let mut vecs = ComplexMatrix::zeros(n, n);
    let mut y = vec![ZERO; n];
    for k in 0..n {
        y.iter_mut().for_each(|v| *v = ZERO);
        y[k] = ONE;
        let lambda = values[k];
        for i in (0..k).rev() {
            let s: C64 = (i + 1..=k).map(|j| t[(i, j)] * y[j]).sum();
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < smin {
                denom = C64::new(smin, 0.0);
            }
            y[i] = -s / denom;
            let big = y[i..=k].iter().map(|v| v.norm()).fold(0.0, f64::max);
            if big > 1e150 {
                y[i..=k].iter_mut().for_each(|v| *v /= big);
            }
        }
        let v = z.mul_vec(&y);
        let vn = vec_norm_2(&v);
        for i in 0..n {
            vecs[(i, k)] = v[i] / vn;
        }
    }
    Ok((values, vecs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_matrix(n: usize, seed: u64) -> ComplexMatrix {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn identity_and_swap() {
        let s = eigenvalues(&ComplexMatrix::identity(3), 1e-12).unwrap();
        assert_eq!(s.eigenvalues, vec![ONE; 3]);
        let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let s = eigenvalues(&swap, 1e-12).unwrap();
        assert!((s.eigenvalues[0] + ONE).norm() < 1e-14);
        assert!((s.eigenvalues[1] - ONE).norm() < 1e-14);
    }

    #[test]
    fn schur_path_on_non_normal_matrices() {
        for seed in 0..5 {
            let m = random_matrix(30, seed);
            let s = eigenvalues(&m, 1e-10).unwrap();
            let tr: C64 = s.eigenvalues.iter().sum();
            assert!((tr - m.trace()).norm() < 1e-8 * 30.0);
        }
    }

    #[test]
    fn rotation_has_imaginary_spectrum() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let s = eigenvalues(&m, 1e-12).unwrap();
        assert!((s.eigenvalues[0] - C64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((s.eigenvalues[1] - C64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn jordan_block_residual_is_small() {
        let m = ComplexMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[0.0, 2.0, 1.0], &[0.0, 0.0, 2.0]]);
        let s = eigenvalues(&m, 1e-8).unwrap();
        for z in &s.eigenvalues {
            assert!((z - C64::new(2.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn hermitian_path_is_real() {
        let a = random_matrix(12, 3);
        let h = &a + &a.adjoint();
        let s = eigenvalues(&h, 1e-10).unwrap();
        assert!(s.eigenvalues.iter().all(|z| z.im == 0.0));
        let tr: C64 = s.eigenvalues.iter().sum();
        assert!((tr - h.trace()).norm() < 1e-10);
    }

    #[test]
    fn rejects_non_square() {
        assert!(eigenvalues(&ComplexMatrix::zeros(2, 3), 1e-10).is_err());
    }
}
