//! The subcommands. Each validates its parameters up front, then computes a
//! [`Table`] in memory.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use pisom::freegroup::{ball_size, BALL_CAP};
use pisom::isometrize::{conditioned_matrix, conjugate_all, conjugated_phases, folner_norm, isometry_defect, uniform_bound, AmenableRep, Window};
use pisom::littlewood::{build_instance, t1_norm, to_text, Element, GroupIndexSet, SupportedFunction};
use pisom::pnorm::{a_alpha, lemma_estimate_check, opnorm_boyd_default, pspace_sides, random_contraction, ContractionKind, PSPACE_TOL};
use pisom::spectra::{kesten_radius, lens_experiment, spectral_radius_sparse, trial_seed, LensConfig};
use pisom::{pytlik_witness, CayleyBall, ComplexMatrix, FiniteGroup, LpStatus, PExponent, C64};

use crate::table::Table;
use crate::{CliError, Format};

/// Rendered output of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    /// False when a check failed; the output is still written.
    pub ok: bool,
    /// Diagnostics for standard error.
    pub notes: Vec<String>,
}

fn render(table: &Table, format: Option<Format>, default: Format, ok: bool, notes: Vec<String>) -> Outcome {
    let text = match format.unwrap_or(default) {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    Outcome { text, ok, notes }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(usage(format!("{name} must be positive, got {v}")))
    }
}

fn at_least_one(name: &str, v: usize) -> Result<usize, CliError> {
    if v >= 1 {
        Ok(v)
    } else {
        Err(usage(format!("{name} must be at least 1")))
    }
}

fn exponents(ps: &[f64]) -> Result<Vec<PExponent>, CliError> {
    if ps.is_empty() {
        return Err(usage("p list is empty"));
    }
    ps.iter().map(|&p| PExponent::new(p).map_err(CliError::from)).collect()
}

macro_rules! mergeable {
    ($ty:ident { $($f:ident),* $(,)? }) => {
        impl $ty {
            /// Fills unset fields from the config file section.
            pub fn merge(self, file: Option<Self>) -> Self {
                let file = file.unwrap_or_default();
                Self { $($f: self.$f.or(file.$f)),* }
            }
        }
    };
}

#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaArgs {
    /// Comma-separated alpha grid.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub alpha: Option<Vec<f64>>,
    /// Comma-separated exponents.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
}
mergeable!(LemmaArgs { alpha, p });

pub const DEFAULT_ALPHAS: [f64; 10] = [-0.5, -0.25, -0.1, -0.05, -0.01, 0.01, 0.05, 0.1, 0.25, 0.5];

pub fn lemma_estimate(a: LemmaArgs, format: Option<Format>) -> Result<Outcome, CliError> {
    let alphas = a.alpha.unwrap_or_else(|| DEFAULT_ALPHAS.to_vec());
    if alphas.is_empty() {
        return Err(usage("alpha grid is empty"));
    }
    if let Some(x) = alphas.iter().find(|x| !x.is_finite()) {
        return Err(usage(format!("alpha must be finite, got {x}")));
    }
    let ps = exponents(&a.p.unwrap_or_else(|| vec![1.1, 1.5, 1.9]))?;
    let mut t = Table::new(&["alpha", "p", "theta", "boyd_lower", "interp_upper", "linear_bound", "ok"]);
    let mut all_ok = true;
    for &p in &ps {
        for &alpha in &alphas {
            let est = lemma_estimate_check(alpha, p)?;
            let boyd = opnorm_boyd_default(&a_alpha(alpha), p)?.lower;
            let ok = est.ok && boyd <= est.interp + 1e-12;
            all_ok &= ok;
            t.push(vec![alpha.into(), p.value().into(), est.theta.into(), boyd.into(), est.interp.into(), est.linear_bound.into(), ok.into()]);
        }
    }
    Ok(render(&t, format, Format::Csv, all_ok, vec![]))
}

#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LensArgs {
    #[arg(long)]
    pub p: Option<f64>,
    /// Number of generators.
    #[arg(long)]
    pub r: Option<usize>,
    /// Dimension of l^p_d.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Slack on the lens inequalities.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(skip)]
    pub seed: Option<u64>,
}
mergeable!(LensArgs { p, r, d, trials, tol, seed });

pub fn lens(a: LensArgs, seed: Option<u64>, format: Option<Format>) -> Result<Outcome, CliError> {
    let p = PExponent::new(a.p.unwrap_or(1.5))?;
    let r = at_least_one("r", a.r.unwrap_or(2))?;
    let d = at_least_one("d", a.d.unwrap_or(20))?;
    let trials = at_least_one("trials", a.trials.unwrap_or(100))?;
    let mut cfg = LensConfig::new(p, r, d, trials, seed.unwrap_or(7));
    if let Some(tol) = a.tol {
        cfg.tol = positive("tol", tol)?;
    }
    let report = lens_experiment(&cfg)?;
    let mut t = Table::new(&["trial", "seed", "p", "r", "d", "max_abs", "max_im", "margin_abs", "margin_im"]);
    for tr in &report.trials {
        t.push(vec![
            tr.trial.into(),
            tr.seed.into(),
            tr.p.into(),
            tr.r.into(),
            tr.d.into(),
            tr.max_abs.into(),
            tr.max_im.into(),
            tr.margin_abs.into(),
            tr.margin_im.into(),
        ]);
    }
    let mut notes: Vec<String> = report.failures.iter().map(|(k, m)| format!("trial {k}: {m}")).collect();
    if report.violations > 0 {
        notes.push(format!("{} trials leave the lens region", report.violations));
    }
    let ok = report.violations == 0 && report.failures.is_empty();
    Ok(render(&t, format, Format::Csv, ok, notes))
}

#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KestenArgs {
    #[arg(long)]
    pub r: Option<usize>,
    /// Comma-separated ball radii.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Relative residual for the power iteration.
    #[arg(long)]
    pub tol: Option<f64>,
}
mergeable!(KestenArgs { r, n, tol });

pub fn kesten(a: KestenArgs, format: Option<Format>) -> Result<Outcome, CliError> {
    let r = at_least_one("r", a.r.unwrap_or(2))?;
    let ns = a.n.unwrap_or_else(|| (1..=8).collect());
    if ns.is_empty() {
        return Err(usage("radius list is empty"));
    }
    let tol = positive("tol", a.tol.unwrap_or(1e-12))?;
    for &n in &ns {
        let size = ball_size(r, n);
        if size > BALL_CAP as u128 {
            return Err(pisom::Error::SizeCap { what: "cayley ball", size: size.min(usize::MAX as u128) as usize, cap: BALL_CAP }.into());
        }
    }
    let target = kesten_radius(r)?;
    let mut t = Table::new(&["n", "ball_size", "radius", "kesten_target", "gap"]);
    let mut radii = vec![];
    for &n in &ns {
        let ball = CayleyBall::new(r, n)?;
        let rho = spectral_radius_sparse(&ball, tol)?;
        radii.push(rho);
        t.push(vec![n.into(), ball.len().into(), rho.into(), target.into(), (target - rho).into()]);
    }
    let increasing = radii.windows(2).all(|w| w[1] > w[0]);
    let below = radii.iter().all(|&x| x <= target + 1e-9);
    let mut notes = vec![];
    if !increasing {
        notes.push("radii are not strictly increasing".to_string());
    }
    if !below {
        notes.push("a radius exceeds the target".to_string());
    }
    Ok(render(&t, format, Format::Csv, increasing && below, notes))
}

/// `S3`, `D5`, `Z/7` (or `C7`), all realised by permutations.
pub fn parse_group(name: &str) -> Result<FiniteGroup, CliError> {
    let bad = || usage(format!("unknown group '{name}' (use Sk, Dn or Z/n)"));
    let lower = name.trim().to_ascii_lowercase();
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    let g = if let Some(k) = lower.strip_prefix("z/").or_else(|| lower.strip_prefix('c')) {
        let n = num(k)?;
        if n == 0 {
            return Err(bad());
        }
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        FiniteGroup::from_permutations(format!("Z/{n}"), &[rot])?
    } else if let Some(k) = lower.strip_prefix('s') {
        FiniteGroup::symmetric(num(k)?)?
    } else if let Some(k) = lower.strip_prefix('d') {
        FiniteGroup::dihedral(num(k)?)?
    } else {
        return Err(bad());
    };
    Ok(g)
}

#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FolnerArgs {
    /// `Z` for powers of one matrix, or a finite group (Sk, Dn, Z/n) in its
    /// permutation representation.
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Condition number of the conjugating matrix.
    #[arg(long)]
    pub cond: Option<f64>,
    /// Eigenvalue angles of the generator of Z.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub phases: Option<Vec<f64>>,
    /// Window half-widths N for Z.
    #[arg(long, value_delimiter = ',')]
    pub windows: Option<Vec<u64>>,
    /// Random vectors per generator.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(skip)]
    pub seed: Option<u64>,
}
mergeable!(FolnerArgs { group, p, cond, phases, windows, samples, seed });

/// Defect allowed for a full-group average.
pub const FINITE_DEFECT_TOL: f64 = 1e-10;

pub fn folner(a: FolnerArgs, seed: Option<u64>, format: Option<Format>) -> Result<Outcome, CliError> {
    let p = PExponent::new(a.p.unwrap_or(1.5))?;
    let cond = a.cond.unwrap_or(10.0);
    if !(cond >= 1.0 && cond.is_finite()) {
        return Err(usage(format!("cond must be >= 1, got {cond}")));
    }
    let samples = at_least_one("samples", a.samples.unwrap_or(400))?;
    let seed = seed.unwrap_or(17);
    let group = a.group.unwrap_or_else(|| "Z".into());
    let mut t = Table::new(&["N", "window_size", "defect", "uniform_bound", "p"]);
    let mut notes = vec![];
    let ok;
    if group.eq_ignore_ascii_case("z") {
        let phases = a.phases.unwrap_or_else(|| vec![0.7, 1.9, 3.1]);
        if phases.is_empty() || phases.iter().any(|f| !f.is_finite()) {
            return Err(usage("phases must be a nonempty list of finite angles"));
        }
        let windows = a.windows.unwrap_or_else(|| vec![8, 16, 32, 64]);
        if windows.is_empty() {
            return Err(usage("window list is empty"));
        }
        let s = conditioned_matrix(phases.len(), cond)?;
        let rep = AmenableRep::integers(conjugated_phases(&s, &phases)?, p)?;
        let mut defects = vec![];
        for &n in &windows {
            let w = Window::Symmetric(n);
            let norm = folner_norm(&rep, &w)?;
            let defect = isometry_defect(&rep, &norm, samples, seed)?;
            let ub = uniform_bound(&rep, &w, p)?;
            defects.push(defect);
            t.push(vec![n.into(), norm.window().len().into(), defect.into(), ub.value.into(), p.value().into()]);
        }
        ok = defects.windows(2).all(|w| w[1] < w[0]);
        if !ok {
            notes.push("defect does not decrease with the window".into());
        }
    } else {
        let g = parse_group(&group)?;
        let mats = g.permutation_matrices().expect("groups are parsed as permutation groups");
        let s = conditioned_matrix(mats[0].rows(), cond)?;
        let order = g.order();
        let rep = AmenableRep::finite(g, conjugate_all(&s, &mats)?, vec![], p)?;
        let norm = folner_norm(&rep, &Window::Full)?;
        let defect = isometry_defect(&rep, &norm, samples, seed)?;
        let ub = uniform_bound(&rep, &Window::Full, p)?;
        t.push(vec![order.into(), order.into(), defect.into(), ub.value.into(), p.value().into()]);
        ok = defect <= FINITE_DEFECT_TOL;
        if !ok {
            notes.push(format!("full-group defect {defect:e} exceeds {FINITE_DEFECT_TOL:e}"));
        }
    }
    Ok(render(&t, format, Format::Csv, ok, notes))
}

#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LittlewoodArgs {
    /// `ball`, `interval`, or a finite group (Sk, Dn, Z/n).
    #[arg(long)]
    pub group: Option<String>,
    /// Rank of the free group for `ball`.
    #[arg(long)]
    pub r: Option<usize>,
    /// Ball radii, or interval half-widths.
    #[arg(long, value_delimiter = ',')]
    pub radii: Option<Vec<usize>>,
    /// `delta`, `generators` (ball only) or `random`.
    #[arg(long)]
    pub function: Option<String>,
    /// Support radius of random functions on balls and intervals.
    #[arg(long)]
    pub support_radius: Option<usize>,
    /// Probability that a random function is nonzero at an element.
    #[arg(long)]
    pub density: Option<f64>,
    /// Multiplies the function.
    #[arg(long, allow_negative_numbers = true)]
    pub scale: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Also write instances and solutions as text to this file.
    #[arg(long)]
    pub record: Option<PathBuf>,
    #[arg(skip)]
    pub seed: Option<u64>,
}
mergeable!(LittlewoodArgs { group, r, radii, function, support_radius, density, scale, tol, record, seed });

fn random_function(elements: &[Element], density: f64, seed: u64) -> SupportedFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = vec![];
    for e in elements {
        if rng.random_bool(density) {
            pairs.push((e.clone(), rng.random_range(-1.0..1.0)));
        }
    }
    SupportedFunction::from_pairs(pairs)
}

pub fn littlewood(a: LittlewoodArgs, seed: Option<u64>, format: Option<Format>) -> Result<Outcome, CliError> {
    let group = a.group.unwrap_or_else(|| "Z/12".into()).to_ascii_lowercase();
    let function = a.function.unwrap_or_else(|| "delta".into()).to_ascii_lowercase();
    let tol = positive("tol", a.tol.unwrap_or(1e-10))?;
    let density = a.density.unwrap_or(0.6);
    if !(0.0..=1.0).contains(&density) {
        return Err(usage(format!("density must lie in [0, 1], got {density}")));
    }
    let scale = a.scale.unwrap_or(1.0);
    if !scale.is_finite() {
        return Err(usage("scale must be finite"));
    }
    let seed = seed.unwrap_or(1);
    let support_radius = a.support_radius.unwrap_or(1);
    if !matches!(function.as_str(), "delta" | "generators" | "random") {
        return Err(usage(format!("unknown function '{function}'")));
    }

    // (label n, index set, function, reach of s^{-1} t for restricting f)
    let mut instances: Vec<(usize, GroupIndexSet, SupportedFunction, Option<usize>)> = vec![];
    match group.as_str() {
        "ball" => {
            let r = at_least_one("r", a.r.unwrap_or(2))?;
            let radii = a.radii.unwrap_or_else(|| vec![1, 2, 3, 4]);
            if radii.is_empty() {
                return Err(usage("radius list is empty"));
            }
            let f = match function.as_str() {
                "delta" => SupportedFunction::delta(Element::Word(pisom::Word::identity())),
                "generators" => SupportedFunction::free_generators(r),
                _ => {
                    let support: Vec<Element> = CayleyBall::new(r, support_radius)?.words().iter().cloned().map(Element::Word).collect();
                    random_function(&support, density, seed)
                }
            };
            for n in radii {
                let size = ball_size(r, n);
                if size > pisom::littlewood::INDEX_CAP as u128 {
                    return Err(pisom::Error::SizeCap { what: "littlewood index set", size: size as usize, cap: pisom::littlewood::INDEX_CAP }.into());
                }
                instances.push((n, GroupIndexSet::FreeBall(CayleyBall::new(r, n)?), f.scale(scale), Some(2 * n)));
            }
        }
        "interval" => {
            let radii = a.radii.unwrap_or_else(|| vec![4]);
            if radii.is_empty() {
                return Err(usage("radius list is empty"));
            }
            let m = support_radius as i64;
            let f = match function.as_str() {
                "delta" => SupportedFunction::delta(Element::Integer(0)),
                "random" => random_function(&(-m..=m).map(Element::Integer).collect::<Vec<_>>(), density, seed),
                _ => return Err(usage("generators is only defined on free-group balls")),
            };
            for n in radii {
                if 2 * n + 1 > pisom::littlewood::INDEX_CAP {
                    return Err(pisom::Error::SizeCap { what: "littlewood index set", size: 2 * n + 1, cap: pisom::littlewood::INDEX_CAP }.into());
                }
                instances.push((n, GroupIndexSet::IntegerInterval(n as i64), f.scale(scale), Some(2 * n)));
            }
        }
        name => {
            let g = parse_group(name)?;
            let idx = GroupIndexSet::Finite(g);
            let f = match function.as_str() {
                "delta" => SupportedFunction::delta(Element::Finite(0)),
                "random" => random_function(&idx.elements(), density, seed),
                _ => return Err(usage("generators is only defined on free-group balls")),
            };
            instances.push((idx.len(), idx, f.scale(scale), None));
        }
    }

    let mut t = Table::new(&["n", "index_size", "t1_lower", "l1", "l2", "ratio_q2"]);
    let mut record = String::new();
    let mut ok = true;
    let mut notes = vec![];
    for (n, idx, f, reach) in instances {
        let inst = build_instance(&f, idx)?;
        let res = t1_norm(&inst, tol)?;
        if res.status != LpStatus::Optimal {
            ok = false;
            notes.push(format!("n = {n}: LP stopped with status {}", res.status));
        }
        let seen = match reach {
            Some(k) => f.restrict(|e| match e {
                Element::Word(w) => w.len() <= k,
                Element::Integer(z) => z.unsigned_abs() as usize <= k,
                Element::Finite(_) => true,
            }),
            None => f.clone(),
        };
        let (l1, l2) = (seen.lq_norm(1.0), seen.lq_norm(2.0));
        let ratio = if res.value > 0.0 { l2 / res.value } else { f64::NAN };
        t.push(vec![n.into(), inst.size().into(), res.value.into(), l1.into(), l2.into(), ratio.into()]);
        if a.record.is_some() {
            if !record.is_empty() {
                record.push('\n');
            }
            record.push_str(&to_text(&inst, &res));
        }
    }
    if let Some(path) = &a.record {
        std::fs::write(path, record).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(render(&t, format, Format::Csv, ok, notes))
}

#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessArgs {
    /// Comma-separated exponents.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
}
mergeable!(WitnessArgs { p });

pub fn witness(a: WitnessArgs, format: Option<Format>) -> Result<Outcome, CliError> {
    let ps = exponents(&a.p.unwrap_or_else(|| vec![1.5]))?;
    let mut t = Table::new(&["p", "theta", "r", "z0_re", "z0_im", "ellipse_margin", "lens_margin"]);
    let mut ok = true;
    for p in ps {
        let w = pytlik_witness(p)?;
        ok &= w.ellipse_margin > 0.0 && w.lens_margin > 0.0;
        t.push(vec![w.p.into(), w.theta.into(), w.r.into(), w.z0.re.into(), w.z0.im.into(), w.ellipse_margin.into(), w.lens_margin.into()]);
    }
    let text = match format.unwrap_or(Format::Json) {
        Format::Csv => t.to_csv(),
        Format::Json => t.to_json_object(),
    };
    Ok(Outcome { text, ok, notes: vec![] })
}

#[derive(Debug, Clone, Default, clap::Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PspaceArgs {
    /// Comma-separated exponents.
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Size of the contraction matrix.
    #[arg(long)]
    pub n: Option<usize>,
    /// Dimension of l^p_d holding the vectors.
    #[arg(long)]
    pub d: Option<usize>,
    /// Trials per exponent.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(skip)]
    pub seed: Option<u64>,
}
mergeable!(PspaceArgs { p, n, d, trials, seed });

pub fn pspace_check(a: PspaceArgs, seed: Option<u64>, format: Option<Format>) -> Result<Outcome, CliError> {
    let ps = exponents(&a.p.unwrap_or_else(|| vec![1.2, 1.5]))?;
    let n = at_least_one("n", a.n.unwrap_or(4))?;
    let d = at_least_one("d", a.d.unwrap_or(5))?;
    let trials = at_least_one("trials", a.trials.unwrap_or(1000))?;
    let seed = seed.unwrap_or(0);
    let mut t = Table::new(&["trial", "seed", "p", "n", "d", "kind", "lhs", "rhs", "ok"]);
    let mut violations = 0;
    for (pi, &p) in ps.iter().enumerate() {
        for k in 0..trials {
            let s = trial_seed(seed, pi * trials + k);
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let kind = ContractionKind::ALL[k % ContractionKind::ALL.len()];
            let m: ComplexMatrix = random_contraction(n, p, kind, &mut rng)?;
            let xs: Vec<Vec<C64>> =
                (0..n).map(|_| (0..d).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()).collect();
            let (lhs, rhs) = pspace_sides(&m, &xs, p)?;
            let ok = lhs <= rhs + PSPACE_TOL;
            violations += usize::from(!ok);
            t.push(vec![k.into(), s.into(), p.value().into(), n.into(), d.into(), kind.name().into(), lhs.into(), rhs.into(), ok.into()]);
        }
    }
    let notes = if violations > 0 { vec![format!("{violations} violations")] } else { vec![] };
    Ok(render(&t, format, Format::Csv, violations == 0, notes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_names() {
        assert_eq!(parse_group("S3").unwrap().order(), 6);
        assert_eq!(parse_group("d4").unwrap().order(), 8);
        assert_eq!(parse_group("Z/12").unwrap().order(), 12);
        assert_eq!(parse_group("C5").unwrap().order(), 5);
        assert!(parse_group("Q8").is_err());
        assert!(parse_group("Z/0").is_err());
    }

    #[test]
    fn merge_prefers_command_line() {
        let cli = LensArgs { p: Some(1.2), ..Default::default() };
        let file = LensArgs { p: Some(1.9), r: Some(3), ..Default::default() };
        let m = cli.merge(Some(file));
        assert_eq!(m.p, Some(1.2));
        assert_eq!(m.r, Some(3));
    }

    #[test]
    fn witness_record() {
        let o = witness(WitnessArgs { p: Some(vec![1.5]) }, None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&o.text).unwrap();
        assert_eq!(v["r"], 2);
        assert!((v["z0_im"].as_f64().unwrap() - 5.0 / 12.0).abs() < 1e-15);
        assert!(o.ok);
    }
}
