//! Littlewood `T_1` norms by linear programming.
//!
//! For a finitely supported `f` on a group and a finite index set `S`, the
//! kernel `F(s, t) = f(s^{-1} t)` is split as `F = f_1 + f_2`, and the cost of
//! a split is the largest row `l^1` sum of `f_1` plus the largest column
//! `l^1` sum of `f_2`. The minimal cost over all splits is computed exactly by
//! the simplex method. On a finite group with `S` the whole group this is the
//! `T_1` norm itself; on a ball of a free group it is a lower bound for the
//! norm over the whole group.
//!
//! Only real functions enter the LP. An optimal split may always be taken
//! entrywise of the form `f_1 = w F`, `f_2 = (1 - w) F` with `0 <= w <= 1`:
//! clipping any other split to that form lowers both absolute values. So the
//! LP has one weight per nonzero of `F`, plus the two sup variables.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::{CayleyBall, Word};
use crate::groups::FiniteGroup;
use crate::simplex::{LinearProgram, LpStatus, Relation, SimplexOptions};

/// Tolerance on `f_1 + f_2 = F` when checking a certificate.
pub const CERTIFICATE_TOL: f64 = 1e-8;
/// Largest index set accepted by [`t1_norm`]; the dense basis inverse has
/// side `2 |S|`.
pub const INDEX_CAP: usize = 400;
/// Largest number of LP weights (nonzeros of `F`).
pub const LP_VARIABLE_CAP: usize = 200_000;

/// An element of one of the supported groups.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    /// Label in a [`FiniteGroup`].
    Finite(usize),
    Integer(i64),
    Word(Word),
}

impl std::fmt::Display for Element {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Element::Finite(g) => write!(f, "{g}"),
            Element::Integer(n) => write!(f, "{n}"),
            Element::Word(w) => write!(f, "{w}"),
        }
    }
}

/// The rows and columns of a kernel, together with `(s, t) -> s^{-1} t`.
#[derive(Clone, Debug)]
pub enum GroupIndexSet {
    /// A whole finite group.
    Finite(FiniteGroup),
    /// `[-n, n]` inside `Z`.
    IntegerInterval(i64),
    /// A ball in a free group.
    FreeBall(CayleyBall),
}

impl GroupIndexSet {
    pub fn len(&self) -> usize {
        match self {
            GroupIndexSet::Finite(g) => g.order(),
            GroupIndexSet::IntegerInterval(n) => (2 * n + 1) as usize,
            GroupIndexSet::FreeBall(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> Vec<Element> {
        match self {
            GroupIndexSet::Finite(g) => (0..g.order()).map(Element::Finite).collect(),
            GroupIndexSet::IntegerInterval(n) => (-n..=*n).map(Element::Integer).collect(),
            GroupIndexSet::FreeBall(b) => b.words().iter().cloned().map(Element::Word).collect(),
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            GroupIndexSet::Finite(_) => Element::Finite(0),
            GroupIndexSet::IntegerInterval(_) => Element::Integer(0),
            GroupIndexSet::FreeBall(_) => Element::Word(Word::identity()),
        }
    }

    /// `s^{-1} t` for positions `s`, `t` in [`Self::elements`].
    pub fn quotient(&self, s: usize, t: usize) -> Element {
        match self {
            GroupIndexSet::Finite(g) => Element::Finite(g.mul(g.inv(s), t)),
            GroupIndexSet::IntegerInterval(_) => Element::Integer(t as i64 - s as i64),
            GroupIndexSet::FreeBall(b) => Element::Word(b.words()[s].inverse().mul(&b.words()[t])),
        }
    }

    fn accepts(&self, e: &Element) -> bool {
        match (self, e) {
            (GroupIndexSet::Finite(g), Element::Finite(k)) => *k < g.order(),
            (GroupIndexSet::IntegerInterval(_), Element::Integer(_)) => true,
            (GroupIndexSet::FreeBall(b), Element::Word(w)) => w.letters().iter().all(|l| l.unsigned_abs() as usize <= b.r()),
            _ => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GroupIndexSet::Finite(g) => format!("finite {}", g.name()),
            GroupIndexSet::IntegerInterval(n) => format!("interval {n}"),
            GroupIndexSet::FreeBall(b) => format!("ball {} {}", b.r(), b.radius()),
        }
    }
}

/// A finitely supported real function; absent elements are zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SupportedFunction(BTreeMap<Element, f64>);

impl SupportedFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn delta(e: Element) -> Self {
        Self::from_pairs([(e, 1.0)])
    }

    /// Sum of values on repeated elements; zeros are dropped.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Element, f64)>) -> Self {
        let mut m = BTreeMap::new();
        for (e, v) in pairs {
            *m.entry(e).or_insert(0.0) += v;
        }
        m.retain(|_, v| *v != 0.0);
        Self(m)
    }

    /// Indicator of the words of length exactly one in `F_r`.
    pub fn free_generators(r: usize) -> Self {
        Self::from_pairs(crate::freegroup::signed_generators(r).into_iter().map(|g| (Element::Word(Word::reduce([g])), 1.0)))
    }

    pub fn get(&self, e: &Element) -> f64 {
        self.0.get(e).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Element, f64)> {
        self.0.iter().map(|(e, &v)| (e, v))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, lambda: f64) -> Self {
        Self::from_pairs(self.0.iter().map(|(e, &v)| (e.clone(), lambda * v)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_pairs(self.0.iter().chain(other.0.iter()).map(|(e, &v)| (e.clone(), v)))
    }

    /// `(sum |f|^q)^{1/q}`.
    pub fn lq_norm(&self, q: f64) -> f64 {
        self.0.values().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q)
    }

    /// Restriction to the elements accepted by `keep`.
    pub fn restrict(&self, keep: impl Fn(&Element) -> bool) -> Self {
        Self(self.0.iter().filter(|(e, _)| keep(e)).map(|(e, &v)| (e.clone(), v)).collect())
    }
}

/// A dense real `n x n` kernel, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Kernel {
    n: usize,
    data: Vec<f64>,
}

impl Kernel {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn from_vec(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: data.len() });
        }
        Ok(Self { n, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, s: usize, t: usize) -> f64 {
        self.data[s * self.n + t]
    }

    pub fn set(&mut self, s: usize, t: usize, v: f64) {
        self.data[s * self.n + t] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn max_row_abs_sum(&self) -> f64 {
        self.data.chunks(self.n.max(1)).map(|r| r.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn max_col_abs_sum(&self) -> f64 {
        (0..self.n).map(|t| (0..self.n).map(|s| self.get(s, t).abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn nonzeros(&self) -> usize {
        self.data.iter().filter(|v| **v != 0.0).count()
    }
}

#[derive(Clone, Debug)]
pub struct LittlewoodInstance {
    index: GroupIndexSet,
    elements: Vec<Element>,
    f: SupportedFunction,
    kernel: Kernel,
}

impl LittlewoodInstance {
    pub fn index_set(&self) -> &GroupIndexSet {
        &self.index
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn function(&self) -> &SupportedFunction {
        &self.f
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

/// Builds `F(s, t) = f(s^{-1} t)` and checks it is constant on each set
/// `{(s, t) : s^{-1} t = g}`. On a finite group the left-translation
/// invariance `F(gs, gt) = F(s, t)` is checked as well.
///
/// Values of `f` at elements that never occur as `s^{-1} t` do not enter.
pub fn build_instance(f: &SupportedFunction, index: GroupIndexSet) -> Result<LittlewoodInstance> {
    if let Some((e, _)) = f.support().find(|(e, _)| !index.accepts(e)) {
        return Err(Error::InvalidParameter(format!("element {e} does not belong to {}", index.describe())));
    }
    if let Some((e, v)) = f.support().find(|(_, v)| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!("f({e}) = {v} is not finite")));
    }
    let elements = index.elements();
    let n = elements.len();
    let mut kernel = Kernel::zeros(n);
    let mut seen: HashMap<Element, f64> = HashMap::new();
    for s in 0..n {
        for t in 0..n {
            let q = index.quotient(s, t);
            let v = f.get(&q);
            let prev = *seen.entry(q).or_insert(v);
            if prev.to_bits() != v.to_bits() {
                return Err(Error::Numeric("kernel is not constant on cosets".into()));
            }
            kernel.set(s, t, v);
        }
    }
    if let GroupIndexSet::Finite(g) = &index {
        for h in 0..n {
            for s in 0..n {
                for t in 0..n {
                    if kernel.get(g.mul(h, s), g.mul(h, t)) != kernel.get(s, t) {
                        return Err(Error::Numeric("kernel is not left invariant".into()));
                    }
                }
            }
        }
    }
    Ok(LittlewoodInstance { index, elements, f: f.clone(), kernel })
}

#[derive(Clone, Debug)]
pub struct T1Result {
    pub value: f64,
    pub f1: Kernel,
    pub f2: Kernel,
    pub c1: f64,
    pub c2: f64,
    pub status: LpStatus,
    pub iterations: usize,
}

pub fn t1_norm(instance: &LittlewoodInstance, tol: f64) -> Result<T1Result> {
    t1_norm_with(instance, &SimplexOptions { tol, ..SimplexOptions::default() })
}

/// Minimal split cost. The returned `c1`, `c2` and `value` are recomputed
/// from the split itself, so they satisfy the certificate invariants exactly
/// in floating point.
pub fn t1_norm_with(instance: &LittlewoodInstance, opts: &SimplexOptions) -> Result<T1Result> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let n = instance.size();
    if n > INDEX_CAP {
        return Err(Error::SizeCap { what: "littlewood index set", size: n, cap: INDEX_CAP });
    }
    let kern = &instance.kernel;
    let nz: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|s| (0..n).map(move |t| (s, t)))
        .filter_map(|(s, t)| {
            let a = kern.get(s, t);
            (a != 0.0).then_some((s, t, a.abs()))
        })
        .collect();
    if nz.len() > LP_VARIABLE_CAP {
        return Err(Error::SizeCap { what: "littlewood LP variables", size: nz.len(), cap: LP_VARIABLE_CAP });
    }
    let split = |w: &[f64]| {
        let mut f1 = Kernel::zeros(n);
        let mut f2 = Kernel::zeros(n);
        for (k, &(s, t, _)) in nz.iter().enumerate() {
            let a = kern.get(s, t);
            let x = w[k].clamp(0.0, 1.0) * a;
            f1.set(s, t, x);
            f2.set(s, t, a - x);
        }
        (f1, f2)
    };
    let finish = |f1: Kernel, f2: Kernel, status: LpStatus, iterations: usize| {
        let (c1, c2) = (f1.max_row_abs_sum(), f2.max_col_abs_sum());
        T1Result { value: c1 + c2, f1, f2, c1, c2, status, iterations }
    };
    if nz.is_empty() {
        return Ok(finish(Kernel::zeros(n), Kernel::zeros(n), LpStatus::Optimal, 0));
    }

    // variables: w_k for each nonzero, then c1, c2
    let m = nz.len();
    let (c1, c2) = (m, m + 1);
    let mut lp = LinearProgram::new(m + 2);
    lp.set_objective(c1, 1.0);
    lp.set_objective(c2, 1.0);
    let mut rows: Vec<Vec<(usize, f64)>> = vec![vec![]; n];
    let mut cols: Vec<Vec<(usize, f64)>> = vec![vec![]; n];
    let mut col_total = vec![0.0; n];
    for (k, &(s, t, a)) in nz.iter().enumerate() {
        lp.set_upper(k, 1.0);
        rows[s].push((k, a));
        cols[t].push((k, a));
        col_total[t] += a;
    }
    for mut r in rows.into_iter().filter(|r| !r.is_empty()) {
        r.push((c1, -1.0));
        lp.add_constraint(r, Relation::Le, 0.0)?;
    }
    // sum_s (1 - w) |F| <= c2
    for (t, mut c) in cols.into_iter().enumerate().filter(|(_, c)| !c.is_empty()) {
        c.push((c2, 1.0));
        lp.add_constraint(c, Relation::Ge, col_total[t])?;
    }
    let sol = lp.solve(opts)?;
    match sol.status {
        LpStatus::Optimal => {
            let (f1, f2) = split(&sol.x);
            Ok(finish(f1, f2, LpStatus::Optimal, sol.iterations))
        }
        LpStatus::IterationLimit => {
            // keep the current point if it is a valid split, else the trivial one
            let w = if sol.feasible { sol.x } else { vec![1.0; m] };
            let (f1, f2) = split(&w);
            let iterate = finish(f1, f2, LpStatus::IterationLimit, sol.iterations);
            let (f1, f2) = split(&vec![1.0; m]);
            let trivial = finish(f1, f2, LpStatus::IterationLimit, sol.iterations);
            Ok(if iterate.value <= trivial.value { iterate } else { trivial })
        }
        LpStatus::Infeasible | LpStatus::Unbounded => {
            // w = 1 with large c1 is always feasible and the cost is bounded below by 0
            Err(Error::Numeric(format!("littlewood LP reported {}", sol.status)))
        }
    }
}

/// Cost of an explicit split `F = f1 + f2`: an upper bound for the optimum.
pub fn verify_decomposition(instance: &LittlewoodInstance, f1: &Kernel, f2: &Kernel) -> Result<f64> {
    let n = instance.size();
    for k in [f1, f2] {
        if k.size() != n {
            return Err(Error::DimensionMismatch { expected: n, found: k.size() });
        }
    }
    let kern = &instance.kernel;
    let mut worst: f64 = 0.0;
    for i in 0..n * n {
        worst = worst.max((f1.data[i] + f2.data[i] - kern.data[i]).abs());
    }
    if !(worst <= CERTIFICATE_TOL) {
        return Err(Error::InvalidCertificate(format!("f1 + f2 differs from F by {worst:e}")));
    }
    Ok(f1.max_row_abs_sum() + f2.max_col_abs_sum())
}

/// `||f||_q / t1`.
pub fn lq_t1_ratio(f: &SupportedFunction, q: f64, t1: f64) -> Result<f64> {
    if !(1.0..f64::INFINITY).contains(&q) {
        return Err(Error::InvalidParameter(format!("q must lie in [1, inf), got {q}")));
    }
    if !(t1 >= 0.0) {
        return Err(Error::InvalidParameter(format!("t1 must be nonnegative, got {t1}")));
    }
    if t1 == 0.0 {
        return Err(Error::InvalidParameter("ratio undefined for a zero norm".into()));
    }
    Ok(f.lq_norm(q) / t1)
}

/// Bounds for a complex function from the LP on its real and imaginary
/// parts: `max(|Re f|, |Im f|) <= ||f|| <= |Re f| + |Im f|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexT1Bounds {
    pub lower: f64,
    pub upper: f64,
}

pub fn t1_norm_complex(re: &SupportedFunction, im: &SupportedFunction, index: &GroupIndexSet, tol: f64) -> Result<ComplexT1Bounds> {
    let a = t1_norm(&build_instance(re, index.clone())?, tol)?.value;
    let b = t1_norm(&build_instance(im, index.clone())?, tol)?.value;
    Ok(ComplexT1Bounds { lower: a.max(b), upper: a + b })
}

/// Plain-text record of an instance and its solution.
pub fn to_text(instance: &LittlewoodInstance, result: &T1Result) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "index {}", instance.index.describe());
    let _ = writeln!(s, "elements {}", instance.elements.len());
    for e in &instance.elements {
        let _ = writeln!(s, "{e}");
    }
    let support: Vec<_> = instance.f.support().collect();
    let _ = writeln!(s, "support {}", support.len());
    for (e, v) in support {
        let _ = writeln!(s, "{v:.16e} {e}");
    }
    let _ = writeln!(s, "value {:.16e}", result.value);
    let _ = writeln!(s, "c1 {:.16e}", result.c1);
    let _ = writeln!(s, "c2 {:.16e}", result.c2);
    let _ = writeln!(s, "status {}", result.status);
    s
}

/// One ball radius of a truncation sweep.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub index_size: usize,
    /// LP optimum on the ball, a lower bound for the norm on `F_r`.
    pub t1_lower: f64,
    pub l1: f64,
    pub l2: f64,
    pub ratio_q2: f64,
}

/// Solves the ball instances for each radius in parallel.
pub fn truncation_sweep(r: usize, radii: &[usize], f: &SupportedFunction, tol: f64) -> Result<Vec<SweepRow>> {
    radii
        .par_iter()
        .map(|&n| {
            let ball = CayleyBall::new(r, n)?;
            let inst = build_instance(f, GroupIndexSet::FreeBall(ball))?;
            let res = t1_norm(&inst, tol)?;
            let seen = f.restrict(|e| matches!(e, Element::Word(w) if w.len() <= 2 * n));
            let (l1, l2) = (seen.lq_norm(1.0), seen.lq_norm(2.0));
            let ratio_q2 = if res.value > 0.0 { l2 / res.value } else { f64::NAN };
            Ok(SweepRow { n, index_size: inst.size(), t1_lower: res.value, l1, l2, ratio_q2 })
        })
        .collect()
}
