//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vector under the
//! graded-lexicographic order, so the leading term is the last entry.
//! Zero coefficients are never stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::context::Ctx;
use super::rat::Rat;
use crate::error::{Error, Result};

/// Exponent vector, ordered graded-lexicographically with the first
/// variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when every exponent allows it.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Monomial(out))
    }

    pub fn meet(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct MPoly {
    ctx: Ctx,
    terms: BTreeMap<Monomial, Rat>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.same(&other.ctx) && self.terms == other.terms
    }
}

impl Eq for MPoly {}

impl MPoly {
    pub fn zero(ctx: &Ctx) -> Self {
        MPoly { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::constant(ctx, Rat::one())
    }

    pub fn constant(ctx: &Ctx, c: Rat) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ctx.len()), c);
        }
        p
    }

    pub fn var(ctx: &Ctx, name: &str) -> Result<Self> {
        Ok(Self::var_at(ctx, ctx.require(name)?))
    }

    pub fn var_at(ctx: &Ctx, idx: usize) -> Self {
        let mut e = vec![0; ctx.len()];
        e[idx] = 1;
        Self::term(ctx, Monomial(e), Rat::one())
    }

    pub fn term(ctx: &Ctx, m: Monomial, c: Rat) -> Self {
        assert_eq!(m.0.len(), ctx.len(), "exponent vector length");
        let mut p = Self::zero(ctx);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Rat)>>(ctx: &Ctx, it: I) -> Self {
        let mut p = Self::zero(ctx);
        for (e, c) in it {
            assert_eq!(e.len(), ctx.len(), "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The value when the polynomial is constant (zero included).
    pub fn constant_value(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Monomial::one(self.ctx.len()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Smallest exponent of `var` among the terms (the `var`-adic valuation).
    pub fn min_degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).min().unwrap_or(0)
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Indices of the variables actually occurring.
    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.ctx.len()).filter(|&v| self.uses_var(v)).collect()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn add_scaled(&mut self, other: &MPoly, c: &Rat, shift: &Monomial) {
        for (m, a) in &other.terms {
            self.add_term(m.mul(shift), a * c);
        }
    }

    pub fn checked_add(&self, other: &MPoly) -> Result<MPoly> {
        self.ctx.check(&other.ctx)?;
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MPoly) -> Result<MPoly> {
        self.ctx.check(&other.ctx)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MPoly) -> Result<MPoly> {
        self.ctx.check(&other.ctx)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MPoly::zero(&self.ctx));
        }
        if let Some(c) = self.constant_value() {
            return Ok(other.scale(&c));
        }
        if let Some(c) = other.constant_value() {
            return Ok(self.scale(&c));
        }
        let mut out = MPoly::zero(&self.ctx);
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.ctx);
        }
        MPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MPoly {
        let mut acc = MPoly::one(&self.ctx);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, m: &Monomial) -> MPoly {
        MPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect(),
        }
    }

    /// Divides by the leading coefficient so the leading coefficient is 1.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// The greatest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.ctx.len()),
            Some(first) => it.fold(first.clone(), |acc, m| acc.meet(m)),
        }
    }

    /// Exact quotient `self / g`; fails when `g` does not divide `self`.
    pub fn divide_exact(&self, g: &MPoly) -> Result<MPoly> {
        self.ctx.check(&g.ctx)?;
        let (lm, lc) = match g.leading() {
            None => return Err(Error::ZeroDenominator),
            Some((m, c)) => (m.clone(), c.clone()),
        };
        if let Some(c) = g.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quo = MPoly::zero(&self.ctx);
        let lc_inv = lc.recip();
        while let Some((m, c)) = rem.leading() {
            let Some(t) = m.div(&lm) else {
                return Err(Error::NotDivisible(format!("{self} by {g}")));
            };
            let c = c * &lc_inv;
            rem.add_scaled(g, &-&c, &t);
            quo.add_term(t, c);
        }
        Ok(quo)
    }

    /// `Some(self / g)` when `g` divides `self`.
    pub fn try_divide(&self, g: &MPoly) -> Option<MPoly> {
        self.divide_exact(g).ok()
    }

    /// Coefficients with respect to `var`, lowest degree first. Each
    /// coefficient lives in the same context with `var` absent.
    pub fn to_univariate(&self, var: usize) -> Vec<MPoly> {
        let deg = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(&self.ctx); deg + 1];
        for (m, c) in &self.terms {
            let mut e = m.clone();
            let d = e.0[var] as usize;
            e.0[var] = 0;
            out[d].terms.insert(e, c.clone());
        }
        out
    }

    pub fn from_univariate(coeffs: &[MPoly], var: usize, ctx: &Ctx) -> MPoly {
        let mut out = MPoly::zero(ctx);
        for (d, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut e = m.clone();
                e.0[var] += d as u32;
                out.terms.insert(e, a.clone());
            }
        }
        out
    }

    /// Simultaneous substitution of polynomials for variables; `None`
    /// leaves a variable unchanged. The result lives in `target`.
    pub fn compose(&self, images: &[Option<MPoly>], target: &Ctx) -> Result<MPoly> {
        if images.len() != self.ctx.len() {
            return Err(Error::InvalidArgument("substitution arity".into()));
        }
        let mut resolved = Vec::with_capacity(images.len());
        for (i, img) in images.iter().enumerate() {
            match img {
                Some(p) => {
                    target.check(&p.ctx)?;
                    resolved.push(p.clone());
                }
                None => resolved.push(MPoly::var(target, &self.ctx.vars()[i])?),
            }
        }
        // Powers are cached per variable since monomials share them.
        let mut powers: Vec<Vec<MPoly>> = resolved.iter().map(|p| vec![MPoly::one(target), p.clone()]).collect();
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MPoly::constant(target, c.clone());
            for (v, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[v];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &cache[1];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Re-expresses the polynomial in another context by variable name.
    pub fn reembed(&self, target: &Ctx) -> Result<MPoly> {
        if self.ctx.same(target) {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.ctx.len());
        for (i, name) in self.ctx.vars().iter().enumerate() {
            match target.index_of(name) {
                Some(j) => map.push(Some(j)),
                None if !self.uses_var(i) => map.push(None),
                None => return Err(Error::UnknownVariable(name.clone())),
            }
        }
        let mut out = MPoly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; target.len()];
            for (i, &k) in m.0.iter().enumerate() {
                if let Some(j) = map[i] {
                    e[j] += k;
                }
            }
            out.terms.insert(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Substitutes a rational constant for one variable.
    pub fn eval_var(&self, var: usize, value: &Rat) -> MPoly {
        let mut out = MPoly::zero(&self.ctx);
        let mut pows = vec![Rat::one()];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            while pows.len() <= e {
                let next = pows.last().unwrap() * value;
                pows.push(next);
            }
            let mut k = m.clone();
            k.0[var] = 0;
            out.add_term(k, c * &pows[e]);
        }
        out
    }

    /// Partial derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> MPoly {
        let mut out = MPoly::zero(&self.ctx);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut k = m.clone();
            k.0[var] -= 1;
            out.add_term(k, c * Rat::from_integer(e.into()));
        }
        out
    }
}

macro_rules! poly_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&MPoly> for &MPoly {
            type Output = MPoly;
            fn $m(self, rhs: &MPoly) -> MPoly {
                self.$checked(rhs).expect("polynomial context mismatch")
            }
        }
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $m(self, rhs: MPoly) -> MPoly {
                (&self).$m(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::int;

    fn ctx() -> Ctx {
        Ctx::new(&["z1", "z2", "h"])
    }

    #[test]
    fn grlex_leading_term() {
        let c = ctx();
        let z1 = MPoly::var(&c, "z1").unwrap();
        let z2 = MPoly::var(&c, "z2").unwrap();
        let p = &(&z2 * &z2) + &z1;
        assert_eq!(p.leading().unwrap().0, &Monomial(vec![0, 2, 0]));
        let q = &(&z1 * &z2) + &(&z2 * &z2);
        assert_eq!(q.leading().unwrap().0, &Monomial(vec![1, 1, 0]));
    }

    #[test]
    fn exact_division_by_hand() {
        let c = ctx();
        let z1 = MPoly::var(&c, "z1").unwrap();
        let z2 = MPoly::var(&c, "z2").unwrap();
        let h = MPoly::var(&c, "h").unwrap();
        // (z1 + h)(z2 - h) - z2 z1 = h (z2 - z1 - h)
        let f = &(&(&z1 + &h) * &(&z2 - &h)) - &(&z2 * &z1);
        let g = &(&z1 - &z2) + &h;
        assert_eq!(f.divide_exact(&g).unwrap(), -&h);
        let sq = &(&z1 * &z1) - &(&z2 * &z2);
        assert_eq!(sq.divide_exact(&(&z1 - &z2)).unwrap(), &z1 + &z2);
        assert!(MPoly::zero(&c).divide_exact(&g).unwrap().is_zero());
        assert!(matches!(z1.divide_exact(&g), Err(Error::NotDivisible(_))));
        assert_eq!(z1.divide_exact(&MPoly::zero(&c)), Err(Error::ZeroDenominator));
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = MPoly::var(&ctx(), "h").unwrap();
        let b = MPoly::var(&Ctx::new(&["h"]), "h").unwrap();
        assert!(matches!(a.checked_add(&b), Err(Error::ContextMismatch { .. })));
    }

    #[test]
    fn compose_and_eval() {
        let c = ctx();
        let z1 = MPoly::var(&c, "z1").unwrap();
        let h = MPoly::var(&c, "h").unwrap();
        let f = &z1 * &z1;
        let g = f.compose(&[Some(&z1 + &h), None, None], &c).unwrap();
        assert_eq!(g, &(&(&z1 * &z1) + &(&z1 * &h).scale(&int(2))) + &(&h * &h));
        assert_eq!(g.eval_var(2, &int(0)), f);
    }
}
