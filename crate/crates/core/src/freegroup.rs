//! The free group `F_r`: reduced words, Cayley balls, generator families and
//! the Markov operator `mu_1 = (1/2r) sum (g_i + g_i^{-1})`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64, I, ZERO};

/// Default cap on the number of words in a ball.
pub const BALL_CAP: usize = 1_000_000;

/// Largest ball for which a dense `mu_1` matrix is built.
pub const DENSE_BALL_CAP: usize = 4000;

/// A reduced word. Letters are signed generator indices: `k` is `a_k`,
/// `-k` is `a_k^{-1}`, `1 <= k <= r`.
///
/// Words order by length, then lexicographically with
/// `a_1 < a_1^{-1} < a_2 < a_2^{-1} < ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<i32>);

fn letter_rank(l: i32) -> i32 {
    2 * (l.abs() - 1) + i32::from(l < 0)
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().map(|&l| letter_rank(l)).cmp(other.0.iter().map(|&l| letter_rank(l))))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Word {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// Freely reduces the given letters.
    pub fn reduce(letters: impl IntoIterator<Item = i32>) -> Self {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            assert!(l != 0, "zero is not a generator index");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Self(out)
    }

    /// Accepts only already reduced sequences.
    pub fn from_reduced(letters: Vec<i32>) -> Result<Self> {
        if letters.contains(&0) {
            return Err(Error::InvalidParameter("zero letter in word".into()));
        }
        if letters.windows(2).any(|w| w[0] == -w[1]) {
            return Err(Error::InvalidParameter(format!("word {letters:?} is not reduced")));
        }
        Ok(Self(letters))
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(|&l| -l).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::reduce(self.0.iter().chain(other.0.iter()).copied())
    }

    /// `self * g` for a single signed generator.
    pub fn mul_letter(&self, g: i32) -> Word {
        let mut v = self.0.clone();
        if v.last() == Some(&-g) {
            v.pop();
        } else {
            v.push(g);
        }
        Word(v)
    }
}

impl std::fmt::Display for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Signed generators of `F_r` in word order: `1, -1, 2, -2, ...`.
pub fn signed_generators(r: usize) -> Vec<i32> {
    (1..=r as i32).flat_map(|k| [k, -k]).collect()
}

/// Closed-form number of reduced words of length at most `n` in `F_r`.
pub fn ball_size(r: usize, n: usize) -> u128 {
    if r == 0 {
        return 1;
    }
    if r == 1 {
        return 2 * n as u128 + 1;
    }
    let q = 2 * r as u128 - 1;
    1 + 2 * r as u128 * (q.pow(n as u32) - 1) / (q - 1)
}

/// All reduced words of length `<= n` in `F_r`, with right-multiplication
/// adjacency restricted to the ball.
#[derive(Clone, Debug, PartialEq)]
pub struct CayleyBall {
    r: usize,
    radius: usize,
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    /// `adjacency[w][k]` is the index of `w * signed_generators(r)[k]`.
    adjacency: Vec<Vec<Option<usize>>>,
}

impl CayleyBall {
    pub fn new(r: usize, n: usize) -> Result<Self> {
        Self::with_cap(r, n, BALL_CAP)
    }

    pub fn with_cap(r: usize, n: usize, cap: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("free group needs r >= 1".into()));
        }
        let size = ball_size(r, n);
        if size > cap as u128 {
            return Err(Error::SizeCap { what: "cayley ball", size: size.min(usize::MAX as u128) as usize, cap });
        }
        let gens = signed_generators(r);
        let mut words = vec![Word::identity()];
        let mut frontier = vec![Word::identity()];
        for _ in 0..n {
            // extending a sorted level letter by letter keeps the next level sorted
            let mut next = Vec::with_capacity(frontier.len() * (2 * r - 1).max(1));
            for w in &frontier {
                for &g in &gens {
                    if w.0.last() != Some(&-g) {
                        next.push(w.mul_letter(g));
                    }
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        debug_assert!(words.windows(2).all(|w| w[0] < w[1]));
        let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
        let adjacency = words
            .iter()
            .map(|w| gens.iter().map(|&g| index.get(&w.mul_letter(g)).copied()).collect())
            .collect();
        Ok(Self { r, radius: n, words, index, adjacency })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[i].iter().filter_map(|x| *x)
    }

    pub fn adjacency(&self) -> &[Vec<Option<usize>>] {
        &self.adjacency
    }

    /// `y = mu_1 x` for the truncated operator, without building a matrix.
    pub fn mu1_apply(&self, x: &[f64], y: &mut [f64]) {
        let w = 1.0 / (2.0 * self.r as f64);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = w * self.neighbors(i).map(|j| x[j]).sum::<f64>();
        }
    }

    /// Text form: a header `r n count`, then one word per line as signed
    /// integers separated by spaces (the identity is an empty line).
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.r, self.radius, self.words.len());
        for w in &self.words {
            for (i, l) in w.0.iter().enumerate() {
                if i > 0 {
                    s.push(' ');
                }
                let _ = write!(s, "{l}");
            }
            s.push('\n');
        }
        s
    }

    /// Parses [`CayleyBall::to_text`] output and checks it against a fresh
    /// enumeration.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let fields: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|e| Error::Parse { line: 1, msg: e.to_string() }))
            .collect::<Result<_>>()?;
        let [r, n, count] = fields[..] else {
            return Err(Error::Parse { line: 1, msg: "expected `r n count`".into() });
        };
        let mut words = Vec::with_capacity(count);
        for (k, line) in lines.enumerate() {
            let letters = line
                .split_whitespace()
                .map(|t| t.parse::<i32>().map_err(|e| Error::Parse { line: k + 2, msg: e.to_string() }))
                .collect::<Result<Vec<_>>>()?;
            if letters.iter().any(|l| l.unsigned_abs() as usize > r) {
                return Err(Error::Parse { line: k + 2, msg: format!("letter out of range for r = {r}") });
            }
            words.push(Word::from_reduced(letters).map_err(|e| Error::Parse { line: k + 2, msg: e.to_string() })?);
        }
        if words.len() != count {
            return Err(Error::Parse { line: 1, msg: format!("header says {count} words, found {}", words.len()) });
        }
        let ball = Self::new(r, n)?;
        if ball.words != words {
            return Err(Error::Parse { line: 1, msg: "word list does not match the ball".into() });
        }
        Ok(ball)
    }
}

/// Dense truncated `mu_1` on a ball: `(1/2r) A` with `A` the adjacency matrix
/// of the ball, edges leaving the ball dropped.
pub fn mu1_truncated(ball: &CayleyBall) -> Result<ComplexMatrix> {
    let n = ball.len();
    if n > DENSE_BALL_CAP {
        return Err(Error::SizeCap { what: "dense mu_1", size: n, cap: DENSE_BALL_CAP });
    }
    let w = C64::new(1.0 / (2.0 * ball.r() as f64), 0.0);
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in ball.neighbors(i) {
            m[(i, j)] = w;
        }
    }
    Ok(m)
}

/// Tolerance on `||G G^{-1} - I||_max`, relative to `||G||_max ||G^{-1}||_max`.
pub const INVERSE_RESIDUAL_TOL: f64 = 1e-12;

/// Invertible matrices `G_1, ..., G_r` of a common dimension together with
/// their inverses.
#[derive(Clone, Debug)]
pub struct GeneratorFamily {
    gens: Vec<ComplexMatrix>,
    inverses: Vec<ComplexMatrix>,
}

impl GeneratorFamily {
    pub fn new(gens: Vec<ComplexMatrix>) -> Result<Self> {
        let d = gens.first().ok_or_else(|| Error::InvalidParameter("empty generator family".into()))?.rows();
        let mut inverses = Vec::with_capacity(gens.len());
        for g in &gens {
            if !g.is_square() || g.rows() != d {
                return Err(Error::DimensionMismatch { expected: d, found: g.rows().max(g.cols()) });
            }
            let id = ComplexMatrix::identity(d);
            let adj = g.adjoint();
            // unitary generators get their exact inverse
            let inv = if (&g.matmul(&adj) - &id).max_abs() <= 4.0 * f64::EPSILON * d as f64 {
                adj
            } else {
                g.inverse()?
            };
            let resid = (&g.matmul(&inv) - &id).max_abs();
            let scale = g.max_abs() * inv.max_abs();
            if resid > INVERSE_RESIDUAL_TOL * scale.max(1.0) * d as f64 {
                return Err(Error::Singular(format!("inverse residual {resid:e} too large")));
            }
            inverses.push(inv);
        }
        Ok(Self { gens, inverses })
    }

    pub fn r(&self) -> usize {
        self.gens.len()
    }

    pub fn dim(&self) -> usize {
        self.gens[0].rows()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.gens
    }

    pub fn inverses(&self) -> &[ComplexMatrix] {
        &self.inverses
    }

    /// `sum_i (G_i + G_i^{-1})`.
    pub fn symmetric_sum(&self) -> ComplexMatrix {
        let d = self.dim();
        let mut s = ComplexMatrix::zeros(d, d);
        for (g, h) in self.gens.iter().zip(&self.inverses) {
            s = &s + &(g + h);
        }
        s
    }
}

/// `(1/2r) sum (G_i + G_i^{-1})`.
pub fn mu1_of_representation(fam: &GeneratorFamily) -> ComplexMatrix {
    fam.symmetric_sum().scale_real(1.0 / (2.0 * fam.r() as f64))
}

/// `2r I + i alpha sum (G_i + G_i^{-1})`, i.e. `2r (1 + i alpha mu_1)`.
pub fn phi_alpha(fam: &GeneratorFamily, alpha: f64) -> ComplexMatrix {
    let d = fam.dim();
    let two_r = C64::new(2.0 * fam.r() as f64, 0.0);
    &ComplexMatrix::identity(d).scale(two_r) + &fam.symmetric_sum().scale(I * alpha)
}

/// `x -> (x, G_1^{-1} x, ..., x, G_r^{-1} x)`, a map `l^p_d -> l^p_{2rd}`.
pub fn stacking_map(fam: &GeneratorFamily) -> ComplexMatrix {
    let id = ComplexMatrix::identity(fam.dim());
    let blocks: Vec<ComplexMatrix> = fam.inverses.iter().flat_map(|h| [id.clone(), h.clone()]).collect();
    ComplexMatrix::vstack(&blocks).expect("blocks share a width")
}

/// `(v_1, w_1, ..., v_r, w_r) -> sum_i (v_i + G_i w_i)`, a map
/// `l^p_{2rd} -> l^p_d`.
pub fn costacking_map(fam: &GeneratorFamily) -> ComplexMatrix {
    let id = ComplexMatrix::identity(fam.dim());
    let blocks: Vec<ComplexMatrix> = fam.gens.iter().flat_map(|g| [id.clone(), g.clone()]).collect();
    ComplexMatrix::hstack(&blocks).expect("blocks share a height")
}

/// A uniformly random surjective isometry of `l^p_d` for `p != 2`: a
/// permutation matrix times a diagonal of independent uniform phases.
/// Deterministic in `seed` (ChaCha8).
pub fn random_lp_isometry(d: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_lp_isometry_with(d, &mut rng)
}

pub fn random_lp_isometry_with<R: Rng>(d: usize, rng: &mut R) -> ComplexMatrix {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    let mut m = ComplexMatrix::zeros(d, d);
    for (col, &row) in perm.iter().enumerate() {
        let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        m[(row, col)] = C64::from_polar(1.0, phi);
    }
    m
}

/// Signed permutation matrix (real entries `+-1`), deterministic in `seed`.
pub fn random_signed_permutation(d: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(&mut rng);
    let mut m = ComplexMatrix::zeros(d, d);
    for (col, &row) in perm.iter().enumerate() {
        m[(row, col)] = C64::new(if rng.random_bool(0.5) { 1.0 } else { -1.0 }, 0.0);
    }
    m
}

/// Nonzero count per column, used to sanity-check isometry samples.
pub fn column_support(m: &ComplexMatrix) -> Vec<usize> {
    (0..m.cols()).map(|j| (0..m.rows()).filter(|&i| m[(i, j)] != ZERO).count()).collect()
}
