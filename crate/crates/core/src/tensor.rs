//! Exact sparse matrices on tensor powers of an `n`-dimensional space.
//!
//! A basis vector `e_{i1} ⊗ ... ⊗ e_{ik}` (1-based `i`) is stored at the
//! flat index `Σ (i_l - 1) n^(k-l)`, leg 1 most significant. Entries are
//! rational functions over the matrix's parameter ring.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{Ctx, Rat, RatFunc};

#[derive(Clone, Debug, PartialEq)]
pub struct TensorMat {
    n: usize,
    legs: usize,
    ring: Ctx,
    entries: BTreeMap<(usize, usize), RatFunc>,
}

/// A nonzero entry: 1-based multi-indices and the value.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub row: Vec<usize>,
    pub col: Vec<usize>,
    pub value: RatFunc,
}

impl TensorMat {
    pub fn zero(n: usize, legs: usize, ring: &Ctx) -> Self {
        assert!(n >= 1 && legs >= 1, "dimension and leg count must be positive");
        TensorMat { n, legs, ring: ring.clone(), entries: BTreeMap::new() }
    }

    pub fn identity(n: usize, legs: usize, ring: &Ctx) -> Self {
        let mut m = Self::zero(n, legs, ring);
        for i in 0..m.dim() {
            m.entries.insert((i, i), RatFunc::one(ring));
        }
        m
    }

    /// The flip `e_i ⊗ e_j -> e_j ⊗ e_i`.
    pub fn swap(n: usize, ring: &Ctx) -> Self {
        Self::permutation(n, &[1, 0], ring)
    }

    /// The leg permutation sending `v_1 ⊗ ... ⊗ v_k` to
    /// `v_{σ(1)} ⊗ ... ⊗ v_{σ(k)}`, with `sigma` 0-based.
    pub fn permutation(n: usize, sigma: &[usize], ring: &Ctx) -> Self {
        let legs = sigma.len();
        let mut m = Self::zero(n, legs, ring);
        for col in 0..m.dim() {
            let c = m.unflatten0(col);
            let r: Vec<usize> = sigma.iter().map(|&s| c[s]).collect();
            let row = m.flatten0(&r);
            m.entries.insert((row, col), RatFunc::one(ring));
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn ring(&self) -> &Ctx {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.legs as u32)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    fn flatten0(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.n + i)
    }

    fn unflatten0(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.legs];
        for l in (0..self.legs).rev() {
            out[l] = flat % self.n;
            flat /= self.n;
        }
        out
    }

    /// Flat index of a 1-based multi-index.
    pub fn flat_index(&self, idx: &[usize]) -> Result<usize> {
        if idx.len() != self.legs || idx.iter().any(|&i| i == 0 || i > self.n) {
            return Err(Error::InvalidArgument(format!(
                "index {idx:?} outside 1..={} on {} legs",
                self.n, self.legs
            )));
        }
        Ok(idx.iter().fold(0, |acc, &i| acc * self.n + (i - 1)))
    }

    /// 1-based multi-index of a flat index.
    pub fn multi_index(&self, flat: usize) -> Vec<usize> {
        self.unflatten0(flat).into_iter().map(|i| i + 1).collect()
    }

    pub fn get(&self, row: &[usize], col: &[usize]) -> RatFunc {
        let key = (self.flatten0(&to0(row)), self.flatten0(&to0(col)));
        self.entries.get(&key).cloned().unwrap_or_else(|| RatFunc::zero(&self.ring))
    }

    pub fn get_flat(&self, row: usize, col: usize) -> RatFunc {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(|| RatFunc::zero(&self.ring))
    }

    pub fn set(&mut self, row: &[usize], col: &[usize], value: RatFunc) -> Result<()> {
        let key = (self.flat_index(row)?, self.flat_index(col)?);
        self.set_flat(key.0, key.1, value)
    }

    pub fn set_flat(&mut self, row: usize, col: usize, value: RatFunc) -> Result<()> {
        self.ring.check(value.ctx())?;
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
        Ok(())
    }

    /// Adds `value` to an entry.
    pub fn add_at(&mut self, row: &[usize], col: &[usize], value: &RatFunc) -> Result<()> {
        let key = (self.flat_index(row)?, self.flat_index(col)?);
        let cur = self.get_flat(key.0, key.1);
        self.set_flat(key.0, key.1, cur.checked_add(value)?)
    }

    /// Nonzero entries in (row, col) order of the flattening.
    pub fn entries(&self) -> impl Iterator<Item = Entry> + '_ {
        self.entries.iter().map(|(&(r, c), v)| Entry {
            row: self.multi_index(r),
            col: self.multi_index(c),
            value: v.clone(),
        })
    }

    pub fn flat_entries(&self) -> impl Iterator<Item = (&(usize, usize), &RatFunc)> {
        self.entries.iter()
    }

    /// Lexicographically first nonzero entry.
    pub fn first_nonzero(&self) -> Option<Entry> {
        self.entries().next()
    }

    fn check_same_shape(&self, other: &TensorMat) -> Result<()> {
        if self.n != other.n || self.legs != other.legs {
            return Err(Error::DimensionMismatch(format!(
                "n={} legs={} vs n={} legs={}",
                self.n, self.legs, other.n, other.legs
            )));
        }
        self.ring.check(&other.ring)
    }

    pub fn add(&self, other: &TensorMat) -> Result<TensorMat> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (&k, v) in &other.entries {
            let cur = out.get_flat(k.0, k.1);
            out.set_flat(k.0, k.1, cur.checked_add(v)?)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TensorMat) -> Result<TensorMat> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TensorMat {
        self.map_unchecked(|v| -v)
    }

    pub fn scale(&self, c: &RatFunc) -> Result<TensorMat> {
        self.ring.check(c.ctx())?;
        self.map(|v| v.checked_mul(c))
    }

    pub fn scale_rat(&self, c: &Rat) -> TensorMat {
        self.map_unchecked(|v| v.scale(c))
    }

    fn map_unchecked(&self, f: impl Fn(&RatFunc) -> RatFunc) -> TensorMat {
        let mut out = TensorMat::zero(self.n, self.legs, &self.ring);
        for (&k, v) in &self.entries {
            let w = f(v);
            if !w.is_zero() {
                out.entries.insert(k, w);
            }
        }
        out
    }

    /// Applies `f` to every stored entry, keeping the ring.
    pub fn map(&self, f: impl Fn(&RatFunc) -> Result<RatFunc> + Sync) -> Result<TensorMat> {
        self.map_into(&self.ring.clone(), f)
    }

    /// Applies `f` to every stored entry; results must live in `ring`.
    pub fn map_into(&self, ring: &Ctx, f: impl Fn(&RatFunc) -> Result<RatFunc> + Sync) -> Result<TensorMat> {
        let items: Vec<(&(usize, usize), &RatFunc)> = self.entries.iter().collect();
        let mapped: Result<Vec<((usize, usize), RatFunc)>> =
            items.par_iter().map(|(k, v)| Ok((**k, f(v)?))).collect();
        let mut out = TensorMat::zero(self.n, self.legs, ring);
        for (k, v) in mapped? {
            out.set_flat(k.0, k.1, v)?;
        }
        Ok(out)
    }

    /// Moves every entry into another parameter ring by variable name.
    pub fn reembed(&self, ring: &Ctx) -> Result<TensorMat> {
        self.map_into(ring, |v| v.reembed(ring))
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &TensorMat) -> Result<TensorMat> {
        self.check_same_shape(other)?;
        let dim = self.dim();
        let mut rows_b: Vec<Vec<(usize, &RatFunc)>> = vec![Vec::new(); dim];
        for (&(r, c), v) in &other.entries {
            rows_b[r].push((c, v));
        }
        let mut rows_a: Vec<Vec<(usize, &RatFunc)>> = vec![Vec::new(); dim];
        for (&(r, c), v) in &self.entries {
            rows_a[r].push((c, v));
        }
        let ring = &self.ring;
        let rows: Vec<Vec<(usize, RatFunc)>> = rows_a
            .par_iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, Vec<RatFunc>> = BTreeMap::new();
                for &(k, a) in row {
                    for &(j, b) in &rows_b[k] {
                        acc.entry(j).or_default().push(a * b);
                    }
                }
                acc.into_iter()
                    .map(|(j, terms)| (j, RatFunc::sum(ring, terms)))
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        let mut out = TensorMat::zero(self.n, self.legs, ring);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row {
                out.entries.insert((i, j), v);
            }
        }
        Ok(out)
    }

    /// Product of a chain of matrices, left to right.
    pub fn product(factors: &[&TensorMat]) -> Result<TensorMat> {
        let (first, rest) = factors
            .split_first()
            .ok_or_else(|| Error::InvalidArgument("empty product".into()))?;
        rest.iter().try_fold((*first).clone(), |acc, m| acc.mul(m))
    }

    pub fn transpose(&self) -> TensorMat {
        let mut out = TensorMat::zero(self.n, self.legs, &self.ring);
        for (&(r, c), v) in &self.entries {
            out.entries.insert((c, r), v.clone());
        }
        out
    }

    /// Conjugation by the leg flip, `P · M · P`, on a 2-leg matrix.
    pub fn flip(&self) -> Result<TensorMat> {
        self.require_legs(2)?;
        let mut out = TensorMat::zero(self.n, 2, &self.ring);
        for (&(r, c), v) in &self.entries {
            let (r, c) = (self.swap_flat(r), self.swap_flat(c));
            out.entries.insert((r, c), v.clone());
        }
        Ok(out)
    }

    fn swap_flat(&self, f: usize) -> usize {
        (f % self.n) * self.n + f / self.n
    }

    pub fn require_legs(&self, legs: usize) -> Result<()> {
        if self.legs != legs {
            return Err(Error::DimensionMismatch(format!("expected {legs} legs, found {}", self.legs)));
        }
        Ok(())
    }

    /// Places a 2-leg matrix on the ordered legs `(a, b)` (0-based) of a
    /// `total`-leg space, identity on the remaining legs.
    pub fn embed(&self, a: usize, b: usize, total: usize) -> Result<TensorMat> {
        self.require_legs(2)?;
        if a == b || a >= total || b >= total {
            return Err(Error::InvalidArgument(format!("legs ({a},{b}) of {total}")));
        }
        let rest: Vec<usize> = (0..total).filter(|&l| l != a && l != b).collect();
        let mut out = TensorMat::zero(self.n, total, &self.ring);
        let others = self.n.pow(rest.len() as u32);
        for (&(r, c), v) in &self.entries {
            let (r1, r2) = (r / self.n, r % self.n);
            let (c1, c2) = (c / self.n, c % self.n);
            for o in 0..others {
                let mut row = vec![0; total];
                let mut col = vec![0; total];
                let mut rem = o;
                for &l in rest.iter().rev() {
                    row[l] = rem % self.n;
                    col[l] = rem % self.n;
                    rem /= self.n;
                }
                row[a] = r1;
                row[b] = r2;
                col[a] = c1;
                col[b] = c2;
                out.entries.insert((out.flatten0(&row), out.flatten0(&col)), v.clone());
            }
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other` (legs concatenate).
    pub fn kron(&self, other: &TensorMat) -> Result<TensorMat> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch("kron of different leg dimensions".into()));
        }
        self.ring.check(&other.ring)?;
        let od = other.dim();
        let mut out = TensorMat::zero(self.n, self.legs + other.legs, &self.ring);
        for (&(r, c), a) in &self.entries {
            for (&(s, d), b) in &other.entries {
                out.entries.insert((r * od + s, c * od + d), a * b);
            }
        }
        Ok(out)
    }

    /// Determinant of a 1-leg (plain `n × n`) matrix by fraction-based
    /// Gaussian elimination.
    pub fn determinant(&self) -> Result<RatFunc> {
        self.require_legs(1)?;
        let n = self.n;
        let mut a: Vec<Vec<RatFunc>> = (0..n)
            .map(|i| (0..n).map(|j| self.get_flat(i, j)).collect())
            .collect();
        let mut det = RatFunc::one(&self.ring);
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
                return Ok(RatFunc::zero(&self.ring));
            };
            if p != k {
                a.swap(p, k);
                det = -det;
            }
            let pivot = a[k][k].clone();
            det = det.checked_mul(&pivot)?;
            let inv = pivot.inv()?;
            let (top, rest) = a.split_at_mut(k + 1);
            let pivot_row = &top[k];
            for row in rest {
                if row[k].is_zero() {
                    continue;
                }
                let f = row[k].checked_mul(&inv)?;
                for (x, y) in row[k..].iter_mut().zip(&pivot_row[k..]) {
                    *x = x.checked_sub(&f.checked_mul(y)?)?;
                }
            }
        }
        Ok(det)
    }

    /// Sets `var = value` in every entry and drops `var` from the ring.
    /// Fails with `PolePersists` if some reduced denominator vanishes there.
    pub fn specialize(&self, var: &str, value: &Rat) -> Result<TensorMat> {
        self.ring.require(var)?;
        let ring = self.ring.without(&[var]);
        self.map_into(&ring, |v| v.limit_subst(var, value)?.reembed(&ring))
    }
}

fn to0(idx: &[usize]) -> Vec<usize> {
    idx.iter().map(|&i| i.wrapping_sub(1)).collect()
}
