//! Spectra of `mu_1`: the lens containment experiment for families of
//! `l^p` isometries, and the Perron value of truncated `mu_1` on Cayley balls
//! against the Kesten radius `sqrt(2r - 1) / r`.

pub mod dense;

use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

pub use dense::{eigenvalues, hermitian_eigen, Spectrum, DENSE_CAP};

use crate::error::{Error, Result};
use crate::exponents::PExponent;
use crate::freegroup::{mu1_of_representation, random_lp_isometry_with, CayleyBall, GeneratorFamily};

/// `sqrt(2r - 1) / r`, the spectral radius of `mu_1` on `l^2(F_r)`.
pub fn kesten_radius(r: usize) -> Result<f64> {
    if r == 0 {
        return Err(Error::InvalidParameter("kesten radius needs r >= 1".into()));
    }
    let rf = r as f64;
    Ok((2.0 * rf - 1.0).sqrt() / rf)
}

pub const SPARSE_MAX_ITER: usize = 1_000_000;

/// Perron value of the truncated `mu_1` on a ball.
///
/// Power iteration on `(mu_1 + I) / 2` from the all-ones vector; the graph is
/// bipartite, so the shift keeps `-rho` from competing with `rho`. Stops when
/// the Rayleigh-quotient residual is below `tol * rho`, which bounds the
/// distance to an eigenvalue.
pub fn spectral_radius_sparse(ball: &CayleyBall, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let n = ball.len();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    let mut y = vec![0.0; n];
    for _ in 0..SPARSE_MAX_ITER {
        ball.mu1_apply(&x, &mut y);
        let rho: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        if rho == 0.0 {
            // no edges at all
            if y.iter().all(|&v| v == 0.0) {
                return Ok(0.0);
            }
        }
        let resid = x.iter().zip(&y).map(|(a, b)| (b - rho * a).powi(2)).sum::<f64>().sqrt();
        if resid <= tol * rho.abs() {
            return Ok(rho);
        }
        let mut norm = 0.0;
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = 0.5 * (*xi + yi);
            norm += *xi * *xi;
        }
        let norm = norm.sqrt();
        x.iter_mut().for_each(|v| *v /= norm);
    }
    Err(Error::NoConvergence { routine: "sparse power iteration", iterations: SPARSE_MAX_ITER })
}

/// Inputs of [`lens_experiment`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LensConfig {
    pub p: PExponent,
    pub r: usize,
    pub d: usize,
    pub trials: usize,
    pub seed: u64,
    /// Slack on both lens inequalities.
    pub tol: f64,
    /// Bound on the eigenpair residual.
    pub eigen_tol: f64,
}

impl LensConfig {
    pub fn new(p: PExponent, r: usize, d: usize, trials: usize, seed: u64) -> Self {
        Self { p, r, d, trials, seed, tol: 1e-8, eigen_tol: 1e-9 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LensTrial {
    pub trial: usize,
    pub seed: u64,
    pub p: f64,
    pub r: usize,
    pub d: usize,
    pub max_abs: f64,
    pub max_im: f64,
    /// `1 - max |lambda|`.
    pub margin_abs: f64,
    /// `theta - max |Im lambda|`.
    pub margin_im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LensReport {
    pub theta: f64,
    pub trials: Vec<LensTrial>,
    /// Trials whose eigensolve failed, with the diagnostic.
    pub failures: Vec<(usize, String)>,
    pub worst_margin_abs: f64,
    pub worst_margin_im: f64,
    pub violations: usize,
}

/// Seed for trial `k`, a fixed mix of the base seed and the trial index.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed ^ (trial as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// For each trial, draws `r` random isometries of `l^p_d`, forms `mu_1` and
/// records how close its spectrum comes to the edge of the lens.
pub fn lens_experiment(cfg: &LensConfig) -> Result<LensReport> {
    if cfg.r == 0 || cfg.d == 0 || cfg.trials == 0 {
        return Err(Error::InvalidParameter("lens experiment needs r, d, trials >= 1".into()));
    }
    let theta = cfg.p.theta();
    let outcomes: Vec<std::result::Result<LensTrial, (usize, String)>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = trial_seed(cfg.seed, trial);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let gens = (0..cfg.r).map(|_| random_lp_isometry_with(cfg.d, &mut rng)).collect();
            let fam = GeneratorFamily::new(gens).map_err(|e| (trial, e.to_string()))?;
            let spectrum = eigenvalues(&mu1_of_representation(&fam), cfg.eigen_tol).map_err(|e| (trial, e.to_string()))?;
            let (max_abs, max_im) = (spectrum.max_abs(), spectrum.max_abs_im());
            Ok(LensTrial {
                trial,
                seed,
                p: cfg.p.value(),
                r: cfg.r,
                d: cfg.d,
                max_abs,
                max_im,
                margin_abs: 1.0 - max_abs,
                margin_im: theta - max_im,
            })
        })
        .collect();
    let mut trials = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(t) => trials.push(t),
            Err(f) => failures.push(f),
        }
    }
    let worst_margin_abs = trials.iter().map(|t| t.margin_abs).fold(f64::INFINITY, f64::min);
    let worst_margin_im = trials.iter().map(|t| t.margin_im).fold(f64::INFINITY, f64::min);
    let violations = trials.iter().filter(|t| t.margin_abs < -cfg.tol || t.margin_im < -cfg.tol).count();
    Ok(LensReport { theta, trials, failures, worst_margin_abs, worst_margin_im, violations })
}

/// Lens margins for an explicit family (no sampling).
pub fn lens_margins(fam: &GeneratorFamily, p: PExponent, eigen_tol: f64) -> Result<(f64, f64)> {
    let spectrum = eigenvalues(&mu1_of_representation(fam), eigen_tol)?;
    Ok((1.0 - spectrum.max_abs(), p.theta() - spectrum.max_abs_im()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freegroup::{mu1_truncated, random_signed_permutation};
    use crate::matrix::{ComplexMatrix, C64};

    /// Perron value of the ball via the level quotient: radial functions are
    /// invariant, giving a symmetric tridiagonal matrix with off-diagonals
    /// `sqrt(2r)` (first edge) and `sqrt(2r-1)`, solved densely.
    fn radial_oracle(r: usize, n: usize) -> f64 {
        let m = ComplexMatrix::from_fn(n + 1, n + 1, |i, j| {
            if i.abs_diff(j) == 1 {
                let w = if i.min(j) == 0 { (2 * r) as f64 } else { (2 * r - 1) as f64 };
                C64::new(w.sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let (vals, _) = hermitian_eigen(&m).unwrap();
        vals.into_iter().fold(f64::MIN, f64::max) / (2 * r) as f64
    }

    #[test]
    fn kesten_examples() {
        assert!((kesten_radius(2).unwrap() - 0.866_025_403_784_438_6).abs() < 1e-15);
        assert_eq!(kesten_radius(1).unwrap(), 1.0);
        assert!((kesten_radius(5).unwrap() - 0.6).abs() < 1e-15);
        assert!(kesten_radius(0).is_err());
    }

    #[test]
    fn star_graph_spectrum() {
        let m = mu1_truncated(&CayleyBall::new(2, 1).unwrap()).unwrap();
        let s = eigenvalues(&m, 1e-12).unwrap();
        let expect = [-0.5, 0.0, 0.0, 0.0, 0.5];
        for (z, e) in s.eigenvalues.iter().zip(expect) {
            assert!((z - C64::new(e, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn sparse_radius_examples() {
        let b = CayleyBall::new(2, 1).unwrap();
        assert!((spectral_radius_sparse(&b, 1e-12).unwrap() - 0.5).abs() < 1e-11);
        assert_eq!(spectral_radius_sparse(&CayleyBall::new(2, 0).unwrap(), 1e-12).unwrap(), 0.0);
        for n in [1, 3, 10] {
            let b = CayleyBall::new(1, n).unwrap();
            let expect = (std::f64::consts::PI / (2 * n + 2) as f64).cos();
            assert!((spectral_radius_sparse(&b, 1e-12).unwrap() - expect).abs() < 1e-10, "n = {n}");
        }
    }

    #[test]
    fn sparse_radius_matches_radial_oracle() {
        // frozen from the level-quotient oracle
        let rho8 = spectral_radius_sparse(&CayleyBall::new(2, 8).unwrap(), 1e-13).unwrap();
        assert!((rho8 - 0.830_014_897_578_613).abs() < 1e-10);
        assert!((radial_oracle(2, 8) - 0.830_014_897_578_613).abs() < 1e-12);
        for (r, n) in [(2, 3), (3, 4), (2, 6)] {
            let got = spectral_radius_sparse(&CayleyBall::new(r, n).unwrap(), 1e-13).unwrap();
            assert!((got - radial_oracle(r, n)).abs() < 1e-10);
        }
    }

    #[test]
    fn sparse_radius_is_monotone_and_below_kesten() {
        let target = kesten_radius(2).unwrap();
        let mut prev = 0.0;
        for n in 1..=8 {
            let rho = spectral_radius_sparse(&CayleyBall::new(2, n).unwrap(), 1e-12).unwrap();
            assert!(rho >= prev);
            assert!(rho <= target + 1e-9);
            prev = rho;
        }
    }

    #[test]
    fn lens_trivial_families() {
        let p = PExponent::new(1.5).unwrap();
        let fam = GeneratorFamily::new(vec![ComplexMatrix::identity(4); 2]).unwrap();
        let (ma, mi) = lens_margins(&fam, p, 1e-12).unwrap();
        assert!(ma.abs() < 1e-15);
        assert!((mi - 1.0 / 3.0).abs() < 1e-15);

        let swap = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let fam = GeneratorFamily::new(vec![swap]).unwrap();
        let (_, mi) = lens_margins(&fam, p, 1e-12).unwrap();
        assert!((mi - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn lens_experiment_small_run() {
        let cfg = LensConfig::new(PExponent::new(1.5).unwrap(), 2, 20, 100, 7);
        let rep = lens_experiment(&cfg).unwrap();
        assert_eq!(rep.trials.len(), 100);
        assert!(rep.failures.is_empty());
        assert_eq!(rep.violations, 0);
        assert!(rep.worst_margin_abs >= -1e-8);
        assert!(rep.worst_margin_im >= -1e-8);
        assert_eq!(lens_experiment(&cfg).unwrap(), rep);
    }

    #[test]
    fn lens_experiment_rejects_zero_trials() {
        let cfg = LensConfig::new(PExponent::new(1.5).unwrap(), 2, 20, 0, 7);
        assert!(lens_experiment(&cfg).is_err());
    }

    #[test]
    fn signed_permutations_give_real_spectrum() {
        let fam = GeneratorFamily::new((0..3).map(|k| random_signed_permutation(15, k)).collect()).unwrap();
        let s = eigenvalues(&mu1_of_representation(&fam), 1e-10).unwrap();
        assert!(s.max_abs_im() <= 1e-10);
    }
}
