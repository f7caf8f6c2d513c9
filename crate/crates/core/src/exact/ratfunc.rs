//! Canonical reduced rational functions.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::context::Ctx;
use super::gcd::gcd;
use super::poly::MPoly;
use super::rat::{format_rat, Rat};
use crate::error::{Error, Result};

/// `num / den` with `gcd(num, den) = 1` and `den` of leading coefficient 1.
/// Two equal rational functions always have identical representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        num.ctx().check(den.ctx())?;
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.ctx()));
        }
        if let Some(c) = den.constant_value() {
            let den = MPoly::one(den.ctx());
            return Ok(RatFunc { num: num.scale(&c.recip()), den });
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.divide_exact(&g)?, den.divide_exact(&g)?)
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            Ok(RatFunc { num, den })
        } else {
            let inv = lc.recip();
            Ok(RatFunc { num: num.scale(&inv), den: den.scale(&inv) })
        }
    }

    /// Skips the gcd when the caller knows the pair is coprime.
    fn from_coprime(num: MPoly, den: MPoly) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.recip();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn zero(ctx: &Ctx) -> Self {
        RatFunc { num: MPoly::zero(ctx), den: MPoly::one(ctx) }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::constant(ctx, Rat::one())
    }

    pub fn constant(ctx: &Ctx, c: Rat) -> Self {
        RatFunc { num: MPoly::constant(ctx, c), den: MPoly::one(ctx) }
    }

    pub fn var(ctx: &Ctx, name: &str) -> Result<Self> {
        Ok(Self::from(MPoly::var(ctx, name)?))
    }

    pub fn ctx(&self) -> &Ctx {
        self.num.ctx()
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rat> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.num.uses_var(var) || self.den.uses_var(var)
    }

    pub fn checked_add(&self, other: &RatFunc) -> Result<RatFunc> {
        self.ctx().check(other.ctx())?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.den.is_one() && other.den.is_one() {
            return Ok(RatFunc { num: &self.num + &other.num, den: self.den.clone() });
        }
        if self.den == other.den {
            return RatFunc::new(&self.num + &other.num, self.den.clone());
        }
        if other.den.is_one() {
            // (a + c b) / b stays coprime to b.
            return Ok(RatFunc::from_coprime(&self.num + &(&other.num * &self.den), self.den.clone()));
        }
        if self.den.is_one() {
            return Ok(RatFunc::from_coprime(&(&self.num * &other.den) + &other.num, other.den.clone()));
        }
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let num = &(&self.num * &other.den) + &(&other.num * &self.den);
            return Ok(RatFunc::from_coprime(num, &self.den * &other.den));
        }
        let b1 = self.den.divide_exact(&g)?;
        let d1 = other.den.divide_exact(&g)?;
        let num = &(&self.num * &d1) + &(&other.num * &b1);
        // Only factors of g can cancel against the new numerator.
        let g2 = gcd(&num, &g);
        if g2.is_one() {
            Ok(RatFunc::from_coprime(num, &(&b1 * &d1) * &g))
        } else {
            let num = num.divide_exact(&g2)?;
            let g = g.divide_exact(&g2)?;
            Ok(RatFunc::from_coprime(num, &(&b1 * &d1) * &g))
        }
    }

    pub fn checked_sub(&self, other: &RatFunc) -> Result<RatFunc> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &RatFunc) -> Result<RatFunc> {
        self.ctx().check(other.ctx())?;
        if self.is_zero() || other.is_zero() {
            return Ok(RatFunc::zero(self.ctx()));
        }
        if self.den.is_one() && other.den.is_one() {
            return Ok(RatFunc { num: &self.num * &other.num, den: self.den.clone() });
        }
        if let Some(c) = self.constant_value() {
            return Ok(other.scale(&c));
        }
        if let Some(c) = other.constant_value() {
            return Ok(self.scale(&c));
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.divide_exact(&g1)?;
        let d2 = other.den.divide_exact(&g1)?;
        let n2 = other.num.divide_exact(&g2)?;
        let d1 = self.den.divide_exact(&g2)?;
        Ok(RatFunc::from_coprime(&n1 * &n2, &d1 * &d2))
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<RatFunc> {
        self.checked_mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(RatFunc::from_coprime(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &Rat) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero(self.ctx());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, k: i32) -> Result<RatFunc> {
        if k < 0 {
            return self.inv()?.pow(-k);
        }
        let k = k as u32;
        Ok(RatFunc { num: self.num.pow(k), den: self.den.pow(k) })
    }

    /// Sum of many terms. Terms sharing a denominator are combined at the
    /// numerator level before any gcd work.
    pub fn sum<I: IntoIterator<Item = RatFunc>>(ctx: &Ctx, items: I) -> RatFunc {
        let mut groups: Vec<(MPoly, MPoly)> = Vec::new();
        for t in items {
            if t.is_zero() {
                continue;
            }
            match groups.iter_mut().find(|(d, _)| *d == t.den) {
                Some((_, n)) => *n = &*n + &t.num,
                None => groups.push((t.den, t.num)),
            }
        }
        let mut acc = RatFunc::zero(ctx);
        for (den, num) in groups {
            let term = if den.is_one() {
                RatFunc { num, den }
            } else {
                RatFunc::new(num, den).expect("nonzero denominator")
            };
            acc = &acc + &term;
        }
        acc
    }

    /// Simultaneous substitution `var -> image` (missing entries are kept),
    /// followed by canonicalization.
    pub fn substitute(&self, images: &[Option<RatFunc>], target: &Ctx) -> Result<RatFunc> {
        let n = subst_poly(&self.num, images, target)?;
        let d = subst_poly(&self.den, images, target)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        n.checked_div(&d)
    }

    /// Substitution by variable name within the same context.
    pub fn substitute_named(&self, assignment: &[(&str, RatFunc)]) -> Result<RatFunc> {
        let mut images = vec![None; self.ctx().len()];
        for (name, img) in assignment {
            images[self.ctx().require(name)?] = Some(img.clone());
        }
        self.substitute(&images, &self.ctx().clone())
    }

    /// Specializes `var` to `value`. Defined whenever the reduced
    /// denominator does not vanish there, in which case it is the limit.
    pub fn limit_subst(&self, var: &str, value: &Rat) -> Result<RatFunc> {
        let v = self.ctx().require(var)?;
        let d = self.den.eval_var(v, value);
        if d.is_zero() {
            return Err(Error::PolePersists { var: var.to_string(), value: format_rat(value) });
        }
        RatFunc::new(self.num.eval_var(v, value), d)
    }

    pub fn reembed(&self, target: &Ctx) -> Result<RatFunc> {
        Ok(RatFunc::from_coprime(self.num.reembed(target)?, self.den.reembed(target)?))
    }

    /// Order of vanishing at `var = 0` (negative for a pole).
    pub fn valuation(&self, var: usize) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.num.min_degree_in(var) as i64 - self.den.min_degree_in(var) as i64)
    }

    /// Coefficient of `var^k` when the function is polynomial in `var`
    /// (denominator free of it).
    pub fn coeff_in(&self, var: usize, k: u32) -> Option<RatFunc> {
        if self.den.uses_var(var) {
            return None;
        }
        let coeffs = self.num.to_univariate(var);
        let c = coeffs.get(k as usize).cloned().unwrap_or_else(|| MPoly::zero(self.ctx()));
        Some(RatFunc::new(c, self.den.clone()).expect("nonzero denominator"))
    }

    /// Derivative with respect to `var`.
    pub fn derivative(&self, var: usize) -> RatFunc {
        let n = &(&self.num.derivative(var) * &self.den) - &(&self.num * &self.den.derivative(var));
        RatFunc::new(n, &self.den * &self.den).expect("nonzero denominator")
    }
}

fn subst_poly(p: &MPoly, images: &[Option<RatFunc>], target: &Ctx) -> Result<RatFunc> {
    if images.len() != p.ctx().len() {
        return Err(Error::InvalidArgument("substitution arity".into()));
    }
    // Polynomial images need no intermediate gcds.
    if images.iter().all(|i| i.as_ref().is_none_or(|r| r.is_polynomial())) {
        let polys: Vec<Option<MPoly>> = images.iter().map(|i| i.as_ref().map(|r| r.num.clone())).collect();
        return Ok(RatFunc::from(p.compose(&polys, target)?));
    }
    // Otherwise bring everything over a common denominator: each variable
    // image is n_v / d_v, and a term of degree e_v in v contributes
    // n_v^e_v d_v^(D_v - e_v) over the common d_v^(D_v).
    let vars: Vec<usize> = (0..images.len()).collect();
    let degs: Vec<u32> = vars.iter().map(|&v| p.degree_in(v)).collect();
    let mut parts: Vec<(MPoly, MPoly)> = Vec::with_capacity(images.len());
    for (i, img) in images.iter().enumerate() {
        match img {
            Some(r) => {
                target.check(r.ctx())?;
                parts.push((r.num.clone(), r.den.clone()));
            }
            None => {
                let name = &p.ctx().vars()[i];
                parts.push((MPoly::var(target, name)?, MPoly::one(target)));
            }
        }
    }
    let mut pow_cache: Vec<(Vec<MPoly>, Vec<MPoly>)> = parts
        .iter()
        .map(|(n, d)| (vec![MPoly::one(target), n.clone()], vec![MPoly::one(target), d.clone()]))
        .collect();
    fn power(cache: &mut Vec<MPoly>, e: usize) -> MPoly {
        while cache.len() <= e {
            let next = &cache[cache.len() - 1] * &cache[1];
            cache.push(next);
        }
        cache[e].clone()
    }
    let mut num = MPoly::zero(target);
    for (m, c) in p.terms() {
        let mut t = MPoly::constant(target, c.clone());
        for (v, &e) in m.0.iter().enumerate() {
            let dv = degs[v];
            if dv == 0 {
                continue;
            }
            let (nc, dc) = &mut pow_cache[v];
            if e > 0 {
                t = &t * &power(nc, e as usize);
            }
            if dv > e && !dc[1].is_one() {
                t = &t * &power(dc, (dv - e) as usize);
            }
        }
        num = &num + &t;
    }
    let mut den = MPoly::one(target);
    for (v, &dv) in degs.iter().enumerate() {
        if dv > 0 && !pow_cache[v].1[1].is_one() {
            den = &den * &power(&mut pow_cache[v].1, dv as usize);
        }
    }
    RatFunc::new(num, den)
}

impl From<MPoly> for RatFunc {
    fn from(p: MPoly) -> Self {
        let den = MPoly::one(p.ctx());
        RatFunc { num: p, den }
    }
}

macro_rules! rf_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc {
                self.$checked(rhs).expect(concat!("rational function ", stringify!($m)))
            }
        }
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
    };
}

rf_binop!(Add, add, checked_add);
rf_binop!(Sub, sub, checked_sub);
rf_binop!(Mul, mul, checked_mul);
rf_binop!(Div, div, checked_div);

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::{int, rat};

    #[test]
    fn canonical_examples() {
        let c = Ctx::new(&["z1", "z2", "h"]);
        let z1 = MPoly::var(&c, "z1").unwrap();
        let z2 = MPoly::var(&c, "z2").unwrap();
        let h = MPoly::var(&c, "h").unwrap();
        let f = RatFunc::new(&(&z1 * &z1) - &(&z2 * &z2), &z1 - &z2).unwrap();
        assert_eq!(f.num(), &(&z1 + &z2));
        assert!(f.den().is_one());
        let g = RatFunc::new(h.scale(&int(2)), MPoly::constant(&c, int(4))).unwrap();
        assert_eq!(g.num(), &h.scale(&rat(1, 2)));
        assert!(g.den().is_one());
        assert_eq!(RatFunc::new(z1.clone(), MPoly::zero(&c)), Err(Error::ZeroDenominator));
    }

    #[test]
    fn coprime_pair_kept() {
        let c = Ctx::new(&["p"]);
        let p = MPoly::var(&c, "p").unwrap();
        let one = MPoly::one(&c);
        let f = RatFunc::new(&p.pow(2) - &one, &p.pow(2) + &one).unwrap();
        assert_eq!(f.num(), &(&p.pow(2) - &one));
        assert_eq!(f.den(), &(&p.pow(2) + &one));
    }

    #[test]
    fn denominator_normalized() {
        let c = Ctx::new(&["x", "y"]);
        let x = MPoly::var(&c, "x").unwrap();
        let y = MPoly::var(&c, "y").unwrap();
        let f = RatFunc::new(y.clone(), &y.scale(&int(3)) - &x.scale(&int(6))).unwrap();
        // grlex leading term of the denominator is x
        assert_eq!(f.den().leading_coeff(), int(1));
        assert_eq!(f.num(), &y.scale(&rat(-1, 6)));
    }

    #[test]
    fn substitution() {
        let c = Ctx::new(&["z1", "z2", "p"]);
        let z1 = RatFunc::var(&c, "z1").unwrap();
        let z2 = RatFunc::var(&c, "z2").unwrap();
        let p = RatFunc::var(&c, "p").unwrap();
        let f = (&z1 - &z2).inv().unwrap();
        let g = f.substitute_named(&[("z1", &z1 + &p), ("z2", &z2 - &p)]).unwrap();
        let expect = (&(&z1 - &z2) + &p.scale(&int(2))).inv().unwrap();
        assert_eq!(g, expect);
        assert_eq!(p.substitute_named(&[]).unwrap(), p);
        let pinv = p.inv().unwrap();
        let h = (&z1 * &z1).substitute_named(&[("z1", &z1 * &pinv)]).unwrap();
        assert_eq!(h, &(&z1 * &z1) * &(&pinv * &pinv));
        assert_eq!(
            f.substitute_named(&[("z2", z1.clone())]),
            Err(Error::ZeroDenominator)
        );
    }

    #[test]
    fn limits() {
        let c = Ctx::new(&["p"]);
        let p = MPoly::var(&c, "p").unwrap();
        let one = MPoly::one(&c);
        let f = RatFunc::new(&p.pow(2) - &one, &p - &one).unwrap();
        assert_eq!(f.limit_subst("p", &int(1)).unwrap(), RatFunc::constant(&c, int(2)));
        let pole = RatFunc::new(one.clone(), &p - &one).unwrap();
        assert!(matches!(pole.limit_subst("p", &int(1)), Err(Error::PolePersists { .. })));
        let n3 = RatFunc::new(
            &(&p.pow(3) - &one) * &(&p + &one),
            &(&p.pow(3) + &one) * &(&p - &one),
        )
        .unwrap();
        assert_eq!(n3.limit_subst("p", &int(1)).unwrap(), RatFunc::constant(&c, int(3)));
    }
}
