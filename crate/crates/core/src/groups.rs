//! Small finite groups given by multiplication tables.

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, C64};

/// A finite group on the labels `0..order`, with `0` the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    /// Permutation realisation of each element, when the group was built
    /// from permutations.
    perms: Option<Vec<Vec<usize>>>,
}

impl FiniteGroup {
    /// Validates a Cayley table: identity at label 0, closure, inverses and
    /// associativity.
    pub fn from_table(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidParameter("malformed group table".into()));
        }
        if (0..n).any(|g| table[0][g] != g || table[g][0] != g) {
            return Err(Error::InvalidParameter("label 0 is not the identity".into()));
        }
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| table[g][h] == 0)
                .ok_or_else(|| Error::InvalidParameter(format!("element {g} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidParameter("table is not associative".into()));
                    }
                }
            }
        }
        Ok(Self { name: name.into(), table, inverse, perms: None })
    }

    /// The group generated by the given permutations of `0..k`, elements
    /// sorted lexicographically (so the identity comes first). Products act
    /// as `(g h)(x) = g(h(x))`.
    pub fn from_permutations(name: impl Into<String>, gens: &[Vec<usize>]) -> Result<Self> {
        let k = gens.first().map_or(0, |g| g.len());
        let id: Vec<usize> = (0..k).collect();
        let compose = |g: &[usize], h: &[usize]| -> Vec<usize> { h.iter().map(|&x| g[x]).collect() };
        let mut elems = vec![id.clone()];
        let mut frontier = vec![id];
        while let Some(e) = frontier.pop() {
            for g in gens {
                let next = compose(g, &e);
                if !elems.contains(&next) {
                    elems.push(next.clone());
                    frontier.push(next);
                }
            }
            if elems.len() > 50_000 {
                return Err(Error::SizeCap { what: "permutation group", size: elems.len(), cap: 50_000 });
            }
        }
        elems.sort();
        let pos = |p: &Vec<usize>| elems.binary_search(p).expect("closed under products");
        let table: Vec<Vec<usize>> =
            elems.iter().map(|a| elems.iter().map(|b| pos(&compose(a, b))).collect()).collect();
        let mut g = Self::from_table(name, table)?;
        g.perms = Some(elems);
        Ok(g)
    }

    /// `Z/n`, label `k` is the residue `k`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("cyclic group needs n >= 1".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(format!("Z/{n}"), table)
    }

    /// The full symmetric group on `k` points.
    pub fn symmetric(k: usize) -> Result<Self> {
        if k == 0 || k > 6 {
            return Err(Error::InvalidParameter(format!("symmetric group S_{k} not supported")));
        }
        let mut gens = vec![];
        if k > 1 {
            let mut t: Vec<usize> = (0..k).collect();
            t.swap(0, 1);
            gens.push(t);
            gens.push((0..k).map(|i| (i + 1) % k).collect());
        } else {
            gens.push(vec![0]);
        }
        Self::from_permutations(format!("S{k}"), &gens)
    }

    /// The dihedral group of order `2n` acting on the vertices of an `n`-gon.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter("dihedral group needs n >= 3".into()));
        }
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(format!("D{n}"), &[rot, refl])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn permutations(&self) -> Option<&[Vec<usize>]> {
        self.perms.as_deref()
    }

    /// Label of a permutation, for groups built from permutations.
    pub fn element_of_permutation(&self, perm: &[usize]) -> Option<usize> {
        self.perms.as_ref()?.iter().position(|p| p == perm)
    }

    /// Permutation matrices `P_g e_x = e_{g(x)}`.
    pub fn permutation_matrices(&self) -> Option<Vec<ComplexMatrix>> {
        let perms = self.perms.as_ref()?;
        Some(
            perms
                .iter()
                .map(|p| {
                    let k = p.len();
                    let mut m = ComplexMatrix::zeros(k, k);
                    for (x, &gx) in p.iter().enumerate() {
                        m[(gx, x)] = C64::new(1.0, 0.0);
                    }
                    m
                })
                .collect(),
        )
    }
}
