//! Averaged norms for representations of amenable groups.
//!
//! For a uniformly bounded representation `pi` and a finite window `F` of
//! group elements, `||x||_F = ( |F|^{-1} sum_{g in F} ||pi(g) x||_p^p )^{1/p}`
//! replaces the invariant mean by a uniform average. On a finite group with
//! the whole group as window the result is exactly `pi`-invariant; on `Z` the
//! failure of invariance shrinks as the window `[-N, N]` grows.
//!
//! The averaged norm is `x -> ||B x||_p` for a stacked matrix `B`, so it is
//! the restriction of an `l^p` norm to a subspace and therefore a `p`-norm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exponents::PExponent;
use crate::groups::FiniteGroup;
use crate::matrix::{vec_norm_p, ComplexMatrix, C64, ZERO};
use crate::pnorm::opnorm_boyd;
use crate::spectra::dense::hermitian_eigen;

/// Tolerance for `pi(g) pi(h) = pi(gh)`.
pub const HOMOMORPHISM_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
enum Kind {
    Finite { group: FiniteGroup, matrices: Vec<ComplexMatrix>, generators: Vec<usize> },
    Integers { t: ComplexMatrix, t_inv: ComplexMatrix },
}

/// A representation of a finite group or of `Z` on `C^d`, viewed as `l^p_d`.
///
/// Group elements are addressed by `i64` labels: `0..order` for finite
/// groups, the integer itself for `Z`.
#[derive(Clone, Debug)]
pub struct AmenableRep {
    kind: Kind,
    p: PExponent,
    dim: usize,
}

/// A finite set of group elements to average over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Window {
    /// Every element of a finite group.
    Full,
    /// `[-n, n]` in `Z`.
    Symmetric(u64),
    Elements(Vec<i64>),
}

impl AmenableRep {
    /// `matrices[g]` is `pi(g)`; `generators` are the labels the isometry
    /// defect is measured against (all elements if empty).
    pub fn finite(group: FiniteGroup, matrices: Vec<ComplexMatrix>, generators: Vec<usize>, p: PExponent) -> Result<Self> {
        let n = group.order();
        if matrices.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: matrices.len() });
        }
        let dim = matrices[0].rows();
        for m in &matrices {
            if !m.is_square() || m.rows() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.rows().max(m.cols()) });
            }
            m.lu()?;
        }
        for a in 0..n {
            for b in 0..n {
                let err = (&matrices[a].matmul(&matrices[b]) - &matrices[group.mul(a, b)]).max_abs();
                if err > HOMOMORPHISM_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "not a homomorphism: pi({a}) pi({b}) is off by {err:e}"
                    )));
                }
            }
        }
        if let Some(&g) = generators.iter().find(|&&g| g >= n) {
            return Err(Error::InvalidParameter(format!("generator label {g} out of range")));
        }
        let generators = if generators.is_empty() { (0..n).collect() } else { generators };
        Ok(Self { kind: Kind::Finite { group, matrices, generators }, p, dim })
    }

    /// `pi(n) = T^n`.
    pub fn integers(t: ComplexMatrix, p: PExponent) -> Result<Self> {
        if !t.is_square() {
            return Err(Error::DimensionMismatch { expected: t.rows(), found: t.cols() });
        }
        let dim = t.rows();
        let t_inv = t.inverse()?;
        Ok(Self { kind: Kind::Integers { t, t_inv }, p, dim })
    }

    pub fn p(&self) -> PExponent {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Labels used as generators by [`isometry_defect`].
    pub fn generators(&self) -> Vec<i64> {
        match &self.kind {
            Kind::Finite { generators, .. } => generators.iter().map(|&g| g as i64).collect(),
            Kind::Integers { .. } => vec![1],
        }
    }

    /// Resolves a window to explicit labels.
    pub fn window_elements(&self, window: &Window) -> Result<Vec<i64>> {
        let elems = match (window, &self.kind) {
            (Window::Full, Kind::Finite { group, .. }) => (0..group.order() as i64).collect(),
            (Window::Full, Kind::Integers { .. }) => {
                return Err(Error::InvalidParameter("Z has no finite full window".into()));
            }
            (Window::Symmetric(_), Kind::Finite { .. }) => {
                return Err(Error::InvalidParameter("symmetric windows are for Z".into()));
            }
            (Window::Symmetric(n), Kind::Integers { .. }) => {
                let n = *n as i64;
                (-n..=n).collect()
            }
            (Window::Elements(v), Kind::Finite { group, .. }) => {
                if let Some(&g) = v.iter().find(|&&g| g < 0 || g as usize >= group.order()) {
                    return Err(Error::InvalidParameter(format!("label {g} is not a group element")));
                }
                v.clone()
            }
            (Window::Elements(v), Kind::Integers { .. }) => v.clone(),
        };
        if elems.is_empty() {
            return Err(Error::InvalidParameter("window is empty".into()));
        }
        Ok(elems)
    }

    /// `pi(g)` for one label.
    pub fn matrix(&self, g: i64) -> ComplexMatrix {
        match &self.kind {
            Kind::Finite { matrices, .. } => matrices[g as usize].clone(),
            Kind::Integers { .. } => self.matrices(&[g]).pop().expect("one element"),
        }
    }

    /// `pi(g)` for every label; powers of `T` are built incrementally and
    /// shared across the window.
    pub fn matrices(&self, elems: &[i64]) -> Vec<ComplexMatrix> {
        match &self.kind {
            Kind::Finite { matrices, .. } => elems.iter().map(|&g| matrices[g as usize].clone()).collect(),
            Kind::Integers { t, t_inv } => {
                let max_pos = elems.iter().copied().filter(|&n| n > 0).max().unwrap_or(0) as usize;
                let max_neg = elems.iter().copied().filter(|&n| n < 0).map(|n| -n).max().unwrap_or(0) as usize;
                let powers = |base: &ComplexMatrix, k: usize| {
                    let mut out = vec![ComplexMatrix::identity(self.dim)];
                    for i in 0..k {
                        out.push(out[i].matmul(base));
                    }
                    out
                };
                let pos = powers(t, max_pos);
                let neg = powers(t_inv, max_neg);
                elems
                    .iter()
                    .map(|&n| if n >= 0 { pos[n as usize].clone() } else { neg[(-n) as usize].clone() })
                    .collect()
            }
        }
    }
}

/// `x -> ||stack x||_p` with `stack` the `|F|^{-1/p} pi(g)` blocks.
#[derive(Clone, Debug)]
pub struct AveragedNorm {
    p: PExponent,
    window: Vec<i64>,
    stack: ComplexMatrix,
}

impl AveragedNorm {
    pub fn eval(&self, x: &[C64]) -> f64 {
        vec_norm_p(&self.stack.mul_vec(x), self.p.value())
    }

    pub fn stack(&self) -> &ComplexMatrix {
        &self.stack
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    pub fn p(&self) -> PExponent {
        self.p
    }
}

/// Ratio of smallest to largest singular value below which the stack counts
/// as rank deficient.
const RANK_TOL: f64 = 1e-12;

/// Builds the averaged norm over a window.
pub fn folner_norm(rep: &AmenableRep, window: &Window) -> Result<AveragedNorm> {
    let elems = rep.window_elements(window)?;
    let scale = (elems.len() as f64).powf(-1.0 / rep.p.value());
    let blocks: Vec<ComplexMatrix> = rep.matrices(&elems).into_iter().map(|m| m.scale_real(scale)).collect();
    let stack = ComplexMatrix::vstack(&blocks)?;
    let (vals, _) = hermitian_eigen(&stack.adjoint().matmul(&stack))?;
    let max = vals.iter().copied().fold(0.0, f64::max);
    let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > RANK_TOL * RANK_TOL * max) {
        return Err(Error::Singular("averaged norm stack is rank deficient".into()));
    }
    Ok(AveragedNorm { p: rep.p, window: elems, stack })
}

/// `x -> max_{g in F} ||pi(g) x||_p`. Invariant for every group once `F` is
/// the whole group, at the price of only being a 1-norm in general.
#[derive(Clone, Debug)]
pub struct SupNorm {
    p: PExponent,
    window: Vec<i64>,
    mats: Vec<ComplexMatrix>,
}

impl SupNorm {
    pub fn eval(&self, x: &[C64]) -> f64 {
        self.mats.iter().map(|m| vec_norm_p(&m.mul_vec(x), self.p.value())).fold(0.0, f64::max)
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }
}

pub fn sup_norm(rep: &AmenableRep, window: &Window) -> Result<SupNorm> {
    let elems = rep.window_elements(window)?;
    let mats = rep.matrices(&elems);
    Ok(SupNorm { p: rep.p, window: elems, mats })
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
    (0..d).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
}

/// `phase(y) |y|^{p-1}`.
fn dual_direction(y: &[C64], p: f64) -> Vec<C64> {
    y.iter()
        .map(|&z| {
            let a = z.norm();
            if a == 0.0 {
                ZERO
            } else {
                z * a.powf(p - 2.0)
            }
        })
        .collect()
}

/// Local ascent of `log ||C x||_p - log ||B x||_p` along the Wirtinger
/// gradient, built from the same dual vectors as the Boyd map.
fn ascend_ratio(c: &ComplexMatrix, b: &ComplexMatrix, p: f64, mut x: Vec<C64>, steps: usize) -> f64 {
    let ratio = |x: &[C64]| vec_norm_p(&c.mul_vec(x), p) / vec_norm_p(&b.mul_vec(x), p);
    let mut cur = ratio(&x);
    for _ in 0..steps {
        let y = c.mul_vec(&x);
        let u = b.mul_vec(&x);
        let ny = vec_norm_p(&y, p).powf(p);
        let nu = vec_norm_p(&u, p).powf(p);
        let gy = c.adjoint_mul_vec(&dual_direction(&y, p));
        let gu = b.adjoint_mul_vec(&dual_direction(&u, p));
        let grad: Vec<C64> = gy.iter().zip(&gu).map(|(a, b)| a / ny - b / nu).collect();
        let gnorm = grad.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if gnorm == 0.0 || !gnorm.is_finite() {
            break;
        }
        let mut step = 0.5 * xnorm / gnorm;
        let mut improved = false;
        for _ in 0..30 {
            let cand: Vec<C64> = x.iter().zip(&grad).map(|(a, g)| a + g * step).collect();
            let r = ratio(&cand);
            if r > cur {
                cur = r;
                let n = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                x = cand.into_iter().map(|z| z / n).collect();
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    cur
}

/// Number of best random samples that get refined by ascent.
const REFINED_SAMPLES: usize = 8;
const ASCENT_STEPS: usize = 60;

/// Largest relative change `| ||pi(g) x||_F - ||x||_F | / ||x||_F` over the
/// representation's generators and sampled vectors.
///
/// Samples are uniform in the complex cube; the best few in each direction
/// (norm increasing, norm decreasing) are refined by gradient ascent.
pub fn isometry_defect(rep: &AmenableRep, norm: &AveragedNorm, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParameter("isometry defect needs samples >= 1".into()));
    }
    let p = norm.p.value();
    let b = &norm.stack;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<Vec<C64>> = (0..samples).map(|_| random_vector(&mut rng, rep.dim)).collect();
    let mut worst: f64 = 0.0;
    for g in rep.generators() {
        let c = b.matmul(&rep.matrix(g));
        let mut scored: Vec<(f64, usize)> = xs
            .par_iter()
            .enumerate()
            .map(|(i, x)| (vec_norm_p(&c.mul_vec(x), p) / vec_norm_p(&b.mul_vec(x), p), i))
            .collect();
        scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let up = scored.iter().rev().take(REFINED_SAMPLES).map(|&(_, i)| i);
        let down = scored.iter().take(REFINED_SAMPLES).map(|&(_, i)| i);
        let rmax = up
            .map(|i| ascend_ratio(&c, b, p, xs[i].clone(), ASCENT_STEPS))
            .fold(scored.last().map_or(1.0, |s| s.0), f64::max);
        let inv_rmin = down
            .map(|i| ascend_ratio(b, &c, p, xs[i].clone(), ASCENT_STEPS))
            .fold(1.0 / scored[0].0, f64::max);
        worst = worst.max(rmax - 1.0).max(1.0 - 1.0 / inv_rmin);
    }
    Ok(worst.max(0.0))
}

/// Same as [`isometry_defect`] for the sup variant, random samples only.
pub fn sup_norm_defect(rep: &AmenableRep, norm: &SupNorm, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidParameter("isometry defect needs samples >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<Vec<C64>> = (0..samples).map(|_| random_vector(&mut rng, rep.dim)).collect();
    let mut worst: f64 = 0.0;
    for g in rep.generators() {
        let pg = rep.matrix(g);
        let d = xs
            .par_iter()
            .map(|x| {
                let base = norm.eval(x);
                (norm.eval(&pg.mul_vec(x)) - base).abs() / base
            })
            .reduce(|| 0.0, f64::max);
        worst = worst.max(d);
    }
    Ok(worst)
}

/// Lower estimate of `sup_g ||pi(g)||_{p->p}` over a window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UniformBound {
    pub value: f64,
    pub window_size: usize,
    /// The same estimate over the inner half of the window.
    pub half_window_value: f64,
    /// False when doubling the window more than multiplies the estimate by
    /// [`GROWTH_FACTOR`], the signature of geometric growth.
    pub bounded: bool,
}

pub const GROWTH_FACTOR: f64 = 2.0;

/// Max over the window of the Boyd lower bound for `||pi(g)||_{p->p}`.
pub fn uniform_bound(rep: &AmenableRep, window: &Window, p: PExponent) -> Result<UniformBound> {
    let elems = rep.window_elements(window)?;
    let mats = rep.matrices(&elems);
    let norms: Vec<f64> = mats
        .par_iter()
        .map(|m| opnorm_boyd(m, p, 1e-12, 2_000).map(|e| e.lower))
        .collect::<Result<_>>()?;
    let value = norms.iter().copied().fold(0.0, f64::max);
    let reach = elems.iter().map(|g| g.unsigned_abs()).max().unwrap_or(0);
    let half_window_value = match window {
        Window::Symmetric(_) | Window::Elements(_) if matches!(rep.kind, Kind::Integers { .. }) => elems
            .iter()
            .zip(&norms)
            .filter(|(g, _)| 2 * g.unsigned_abs() <= reach)
            .map(|(_, &v)| v)
            .fold(0.0, f64::max),
        _ => value,
    };
    let bounded = value <= GROWTH_FACTOR * half_window_value;
    Ok(UniformBound { value, window_size: elems.len(), half_window_value, bounded })
}

/// A fixed real `d x d` matrix with 2-norm condition number `cond`:
/// `Q_1 diag(1, ..., cond) Q_2` with `Q_i` products of plane rotations at
/// fixed angles.
pub fn conditioned_matrix(d: usize, cond: f64) -> Result<ComplexMatrix> {
    if d == 0 || !(cond >= 1.0) {
        return Err(Error::InvalidParameter(format!("need d >= 1 and cond >= 1, got d = {d}, cond = {cond}")));
    }
    let rotations = |angle0: f64| {
        let mut q = ComplexMatrix::identity(d);
        for i in 0..d {
            for j in i + 1..d {
                let a = angle0 + 0.37 * (i + 2 * j) as f64;
                let (s, c) = a.sin_cos();
                let mut g = ComplexMatrix::identity(d);
                g[(i, i)] = C64::new(c, 0.0);
                g[(j, j)] = C64::new(c, 0.0);
                g[(i, j)] = C64::new(-s, 0.0);
                g[(j, i)] = C64::new(s, 0.0);
                q = q.matmul(&g);
            }
        }
        q
    };
    let sigma: Vec<C64> = (0..d)
        .map(|k| C64::new(if d == 1 { 1.0 } else { cond.powf(k as f64 / (d - 1) as f64) }, 0.0))
        .collect();
    Ok(rotations(0.3).matmul(&ComplexMatrix::diag(&sigma)).matmul(&rotations(1.1)))
}

/// `S diag(e^{i phi_k}) S^{-1}`.
pub fn conjugated_phases(s: &ComplexMatrix, phases: &[f64]) -> Result<ComplexMatrix> {
    if phases.len() != s.rows() {
        return Err(Error::DimensionMismatch { expected: s.rows(), found: phases.len() });
    }
    let d: Vec<C64> = phases.iter().map(|&f| C64::from_polar(1.0, f)).collect();
    Ok(s.matmul(&ComplexMatrix::diag(&d)).matmul(&s.inverse()?))
}

/// `S pi(g) S^{-1}` for every element of a finite representation.
pub fn conjugate_all(s: &ComplexMatrix, mats: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let s_inv = s.inverse()?;
    Ok(mats.iter().map(|m| s.matmul(m).matmul(&s_inv)).collect())
}

/// One row of a defect-versus-window sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DefectRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub window_size: usize,
    pub defect: f64,
    pub uniform_bound: f64,
    pub p: f64,
}

/// Defect of the averaged norm on `[-N, N]` for each `N`.
pub fn integer_defect_sweep(rep: &AmenableRep, windows: &[u64], samples: usize, seed: u64) -> Result<Vec<DefectRow>> {
    windows
        .iter()
        .map(|&n| {
            let w = Window::Symmetric(n);
            let norm = folner_norm(rep, &w)?;
            let defect = isometry_defect(rep, &norm, samples, seed)?;
            let ub = uniform_bound(rep, &w, rep.p)?;
            Ok(DefectRow { n, window_size: norm.window.len(), defect, uniform_bound: ub.value, p: rep.p.value() })
        })
        .collect()
}
