//! `l^p -> l^p` operator norms of complex matrices.
//!
//! Exact values are available at `p = 1, 2, inf`. For other exponents we give
//! a lower bound from Boyd's fixed-point iteration (the value is attained at
//! an explicit vector) and an upper bound from Riesz–Thorin interpolation
//! between the endpoint norms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::PExponent;
use crate::matrix::{vec_norm_p, vec_norm_p_pow, ComplexMatrix, C64, I, ONE, ZERO};
use crate::spectra::dense::hermitian_max_eigenvalue;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// Extra starting points are only tried up to this column count.
const MULTISTART_MAX_COLS: usize = 64;
const RANDOM_STARTS: usize = 4;

/// Two-sided bound on `||M||_{p->p}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormEstimate {
    pub lower: f64,
    pub upper: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Endpoint {
    One,
    Infinity,
}

/// `[[1, i alpha], [i alpha, 1]]`.
pub fn a_alpha(alpha: f64) -> ComplexMatrix {
    let off = I * alpha;
    ComplexMatrix::from_fn(2, 2, |i, j| if i == j { ONE } else { off })
}

pub fn opnorm_endpoint(m: &ComplexMatrix, which: Endpoint) -> f64 {
    match which {
        Endpoint::One => m.norm_one(),
        Endpoint::Infinity => m.norm_inf(),
    }
}

/// Largest singular value, `sqrt(lambda_max(M^* M))`.
pub fn opnorm_2(m: &ComplexMatrix) -> Result<f64> {
    // work with the smaller Gram matrix
    let gram = if m.rows() < m.cols() { m.matmul(&m.adjoint()) } else { m.adjoint().matmul(m) };
    Ok(hermitian_max_eigenvalue(&gram)?.max(0.0).sqrt())
}

/// Riesz–Thorin upper bound on `||M||_{p->p}` for `p` in `[1, inf]`.
///
/// For `p <= 2` this is `||M||_1^t ||M||_2^(1-t)` with `t = 2/p - 1`, and for
/// `p > 2` the mirror bound `||M||_inf^t ||M||_2^(1-t)` with `t = 1 - 2/p`.
pub fn opnorm_interp_upper(m: &ComplexMatrix, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidExponent(p));
    }
    if p == 2.0 {
        return opnorm_2(m);
    }
    let (endpoint, t) = if p < 2.0 { (m.norm_one(), 2.0 / p - 1.0) } else { (m.norm_inf(), 1.0 - 2.0 / p) };
    if t == 1.0 {
        return Ok(endpoint);
    }
    let two = opnorm_2(m)?;
    Ok(endpoint.powf(t) * two.powf(1.0 - t))
}

/// `phase(v) |v|^(e)`, computed after scaling by the largest modulus.
fn signed_power(v: &[C64], e: f64) -> Vec<C64> {
    let mx = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if mx == 0.0 {
        return vec![ZERO; v.len()];
    }
    v.iter()
        .map(|&z| {
            let a = z.norm();
            if a == 0.0 {
                ZERO
            } else {
                (z / a) * (a / mx).powf(e)
            }
        })
        .collect()
}

fn normalize_p(v: &mut [C64], p: f64) -> bool {
    let n = vec_norm_p(v, p);
    if n == 0.0 || !n.is_finite() {
        return false;
    }
    v.iter_mut().for_each(|z| *z /= n);
    true
}

struct Ascent {
    value: f64,
    iterations: usize,
    converged: bool,
}

fn boyd_from(m: &ComplexMatrix, p: f64, start: Vec<C64>, tol: f64, max_iter: usize) -> Ascent {
    let q = p / (p - 1.0);
    let mut x = start;
    if !normalize_p(&mut x, p) {
        return Ascent { value: 0.0, iterations: 0, converged: true };
    }
    let mut best = vec_norm_p(&m.mul_vec(&x), p);
    let mut prev = best;
    for it in 1..=max_iter {
        let y = m.mul_vec(&x);
        let dual = signed_power(&y, p - 1.0);
        let z = m.adjoint_mul_vec(&dual);
        let mut next = signed_power(&z, q - 1.0);
        if !normalize_p(&mut next, p) {
            return Ascent { value: best, iterations: it, converged: true };
        }
        let val = vec_norm_p(&m.mul_vec(&next), p);
        best = best.max(val);
        x = next;
        if (val - prev).abs() <= tol * val.max(1.0) {
            return Ascent { value: best, iterations: it, converged: true };
        }
        prev = val;
    }
    Ascent { value: best, iterations: max_iter, converged: false }
}

/// Boyd's power iteration for `||M||_{p->p}`.
///
/// The lower bound is `||M x||_p / ||x||_p` at the best iterate found, so it
/// never exceeds the true norm. Starts from the all-ones vector with a small
/// deterministic perturbation; small matrices also try each basis vector and
/// a few fixed pseudo-random starts. The upper bound is the interpolation
/// bound, and both coincide at `p = 2`.
pub fn opnorm_boyd(m: &ComplexMatrix, p: PExponent, tol: f64, max_iter: usize) -> Result<NormEstimate> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let pv = p.value();
    let n = m.cols();
    if pv == 2.0 {
        let v = opnorm_2(m)?;
        return Ok(NormEstimate { lower: v, upper: v, iterations: 0, converged: true });
    }
    let mut starts: Vec<Vec<C64>> = Vec::new();
    starts.push(
        (0..n)
            .map(|k| {
                let t = (k + 1) as f64;
                C64::new(1.0 + 1e-3 * t.sin(), 1e-3 * t.cos())
            })
            .collect(),
    );
    if n <= MULTISTART_MAX_COLS {
        for j in 0..n {
            let mut e = vec![ZERO; n];
            e[j] = ONE;
            starts.push(e);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_b0d1);
        for _ in 0..RANDOM_STARTS {
            starts.push((0..n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect());
        }
    }
    let mut best = Ascent { value: 0.0, iterations: 0, converged: true };
    let mut iterations = 0;
    for s in starts {
        let a = boyd_from(m, pv, s, tol, max_iter);
        iterations += a.iterations;
        if a.value > best.value {
            best = a;
        }
    }
    let mut upper = opnorm_interp_upper(m, pv)?;
    if best.value > upper {
        // equal up to rounding, e.g. for isometries
        if best.value - upper > 1e-12 * upper.max(1.0) {
            return Err(Error::Numeric(format!(
                "attained value {} exceeds interpolation bound {upper}",
                best.value
            )));
        }
        upper = best.value;
    }
    Ok(NormEstimate { lower: best.value, upper, iterations, converged: best.converged })
}

pub fn opnorm_boyd_default(m: &ComplexMatrix, p: PExponent) -> Result<NormEstimate> {
    opnorm_boyd(m, p, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// The interpolation estimate for `A(alpha)` against the explicit bound
/// `1 + theta |alpha| + (1 - theta) alpha^2 / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LemmaEstimate {
    pub alpha: f64,
    pub p: f64,
    pub theta: f64,
    pub interp: f64,
    pub linear_bound: f64,
    pub ok: bool,
}

pub fn lemma_estimate_check(alpha: f64, p: PExponent) -> Result<LemmaEstimate> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha must be finite, got {alpha}")));
    }
    let theta = p.theta();
    let interp = opnorm_interp_upper(&a_alpha(alpha), p.value())?;
    let linear_bound = 1.0 + theta * alpha.abs() + (1.0 - theta) * alpha * alpha / 2.0;
    Ok(LemmaEstimate { alpha, p: p.value(), theta, interp, linear_bound, ok: interp <= linear_bound + 1e-12 })
}

/// Slack allowed in the contraction precondition and the inequality itself.
pub const PSPACE_TOL: f64 = 1e-9;

/// Both sides of the p-space inequality for `X = l^p_d`:
/// `sum_i ||sum_j M_ij x_j||_p^p` and `sum_k ||x_k||_p^p`.
pub fn pspace_sides(m: &ComplexMatrix, vectors: &[Vec<C64>], p: PExponent) -> Result<(f64, f64)> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::DimensionMismatch { expected: n, found: m.cols() });
    }
    if vectors.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: vectors.len() });
    }
    let d = vectors[0].len();
    if let Some(v) = vectors.iter().find(|v| v.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: v.len() });
    }
    let pv = p.value();
    let lhs = (0..n)
        .map(|i| {
            let mut acc = vec![ZERO; d];
            for (j, xj) in vectors.iter().enumerate() {
                let mij = m[(i, j)];
                acc.iter_mut().zip(xj).for_each(|(a, &x)| *a += mij * x);
            }
            vec_norm_p_pow(&acc, pv)
        })
        .sum();
    let rhs = vectors.iter().map(|x| vec_norm_p_pow(x, pv)).sum();
    Ok((lhs, rhs))
}

/// Checks the p-space contraction inequality for one matrix and one tuple of
/// vectors in `l^p_d`.
///
/// `m` must be a `p`-contraction; this is verified with the Boyd lower bound
/// and rejected as a precondition failure otherwise. A finite check like this
/// can only falsify, never prove.
pub fn pspace_inequality_check(m: &ComplexMatrix, vectors: &[Vec<C64>], p: PExponent) -> Result<bool> {
    let est = opnorm_boyd(m, p, DEFAULT_TOL, 2_000)?;
    if est.lower > 1.0 + PSPACE_TOL {
        return Err(Error::InvalidParameter(format!(
            "matrix is not a {}-contraction: norm >= {}",
            p.value(),
            est.lower
        )));
    }
    let (lhs, rhs) = pspace_sides(m, vectors, p)?;
    Ok(lhs <= rhs + PSPACE_TOL)
}

/// Families of `p`-contractions used to exercise the p-space inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContractionKind {
    /// A random complex matrix divided by its interpolation upper bound.
    Scaled,
    /// Unimodular diagonal times permutation.
    Isometry,
    /// Random convex combination of permutation matrices.
    DoublyStochastic,
}

impl ContractionKind {
    pub const ALL: [ContractionKind; 3] = [ContractionKind::Scaled, ContractionKind::Isometry, ContractionKind::DoublyStochastic];

    pub fn name(self) -> &'static str {
        match self {
            ContractionKind::Scaled => "scaled",
            ContractionKind::Isometry => "isometry",
            ContractionKind::DoublyStochastic => "doubly-stochastic",
        }
    }
}

/// An `n x n` matrix with `||M||_{p->p} <= 1`.
pub fn random_contraction<R: Rng>(n: usize, p: PExponent, kind: ContractionKind, rng: &mut R) -> Result<ComplexMatrix> {
    match kind {
        ContractionKind::Scaled => {
            let m = ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let bound = opnorm_interp_upper(&m, p.value())?;
            Ok(if bound > 0.0 { m.scale_real(1.0 / bound) } else { m })
        }
        ContractionKind::Isometry => Ok(crate::freegroup::random_lp_isometry_with(n, rng)),
        ContractionKind::DoublyStochastic => {
            let terms = 3;
            let w: Vec<f64> = (0..terms).map(|_| rng.random_range(0.0..1.0)).collect();
            let total: f64 = w.iter().sum();
            let mut m = ComplexMatrix::zeros(n, n);
            for wk in w {
                let mut perm: Vec<usize> = (0..n).collect();
                rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), rng);
                for (col, &row) in perm.iter().enumerate() {
                    m[(row, col)] += C64::new(wk / total, 0.0);
                }
            }
            Ok(m)
        }
    }
}
