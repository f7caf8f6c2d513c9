//! Operators on the rational function field in `z1, ..., zk`.
//!
//! An operator is a finite sum `Σ c_i(z) · S_i ∘ Π_i` where `Π_i` permutes
//! the z-variables and `S_i` is a per-variable affine substitution
//! `z_j -> s_j z_j + o_j` with parameter-only `s_j, o_j`. Applied to `f`:
//!
//! ```text
//! (S ∘ Π f)(z) = f(y_{π(1)}, ..., y_{π(k)}),   y_j = s_j z_j + o_j
//! ```
//!
//! so the permutation acts first. Composition stays inside this class.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{int, Ctx, MPoly, Monomial, RatFunc};
use crate::tensor::TensorMat;

/// Name of the `i`-th z-variable (0-based).
pub fn zvar(i: usize) -> String {
    format!("z{}", i + 1)
}

/// Context `z1..zk` followed by the parameter ring.
pub fn op_context(k: usize, ring: &Ctx) -> Ctx {
    let z: Vec<String> = (0..k).map(zvar).collect();
    Ctx::new(&z).join(ring)
}

/// Per-variable affine substitution `z_j -> scale_j · z_j + offset_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSub {
    pub maps: Vec<(RatFunc, RatFunc)>,
}

impl AffineSub {
    pub fn identity(ctx: &Ctx, k: usize) -> Self {
        AffineSub { maps: vec![(RatFunc::one(ctx), RatFunc::zero(ctx)); k] }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OpTerm {
    pub coeff: RatFunc,
    /// `perm[i]` is the variable fed into argument `i`.
    pub perm: Vec<usize>,
    pub sub: AffineSub,
}

impl OpTerm {
    /// The image of argument `i` under the substitution part.
    fn argument(&self, i: usize, zs: &[RatFunc]) -> RatFunc {
        let j = self.perm[i];
        let (s, o) = &self.sub.maps[j];
        &(s * &zs[j]) + o
    }

    /// Whether the permutation part is the transposition of a 2-variable term.
    pub fn swap(&self) -> bool {
        self.perm.iter().enumerate().any(|(i, &p)| i != p)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldOp {
    k: usize,
    ring: Ctx,
    ctx: Ctx,
    terms: Vec<OpTerm>,
}

impl FieldOp {
    pub fn zero(k: usize, ring: &Ctx) -> Self {
        FieldOp { k, ring: ring.clone(), ctx: op_context(k, ring), terms: Vec::new() }
    }

    pub fn identity(k: usize, ring: &Ctx) -> Self {
        let id: Vec<usize> = (0..k).collect();
        Self::zero(k, ring).with_term(None, &id, None)
    }

    /// The flip `P f(z1, z2) = f(z2, z1)`.
    pub fn swap(ring: &Ctx) -> Self {
        Self::zero(2, ring).with_term(None, &[1, 0], None)
    }

    /// A single substitution `z_j -> s_j z_j + o_j` with coefficient 1.
    pub fn affine(k: usize, ring: &Ctx, maps: Vec<(RatFunc, RatFunc)>) -> Result<Self> {
        let op = Self::zero(k, ring);
        let id: Vec<usize> = (0..k).collect();
        op.check_sub(&maps)?;
        Ok(op.with_term(None, &id, Some(AffineSub { maps })))
    }

    fn check_sub(&self, maps: &[(RatFunc, RatFunc)]) -> Result<()> {
        if maps.len() != self.k {
            return Err(Error::InvalidArgument("substitution arity".into()));
        }
        for (s, o) in maps {
            self.ctx.check(s.ctx())?;
            self.ctx.check(o.ctx())?;
            if s.is_zero() {
                return Err(Error::InvalidArgument("substitution scale must be nonzero".into()));
            }
            if (0..self.k).any(|v| s.uses_var(v) || o.uses_var(v)) {
                return Err(Error::InvalidArgument("substitution must not involve z-variables".into()));
            }
        }
        Ok(())
    }

    fn with_term(mut self, coeff: Option<RatFunc>, perm: &[usize], sub: Option<AffineSub>) -> Self {
        let coeff = coeff.unwrap_or_else(|| RatFunc::one(&self.ctx));
        let sub = sub.unwrap_or_else(|| AffineSub::identity(&self.ctx, self.k));
        self.push(OpTerm { coeff, perm: perm.to_vec(), sub });
        self
    }

    fn push(&mut self, t: OpTerm) {
        if t.coeff.is_zero() {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|u| u.perm == t.perm && u.sub == t.sub) {
            let c = &self.terms[pos].coeff + &t.coeff;
            if c.is_zero() {
                self.terms.remove(pos);
            } else {
                self.terms[pos].coeff = c;
            }
        } else {
            self.terms.push(t);
        }
    }

    /// Builds an operator from raw terms, merging duplicates.
    pub fn from_terms(k: usize, ring: &Ctx, terms: Vec<OpTerm>) -> Result<Self> {
        let mut op = Self::zero(k, ring);
        for t in terms {
            op.ctx.check(t.coeff.ctx())?;
            op.check_sub(&t.sub.maps)?;
            let mut sorted = t.perm.clone();
            sorted.sort_unstable();
            if sorted != (0..k).collect::<Vec<_>>() {
                return Err(Error::InvalidArgument(format!("{:?} is not a permutation", t.perm)));
            }
            op.push(t);
        }
        Ok(op)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ring(&self) -> &Ctx {
        &self.ring
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> &[OpTerm] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `z_i` as an element of the operator's context.
    pub fn z(&self, i: usize) -> RatFunc {
        RatFunc::var(&self.ctx, &zvar(i)).expect("z-variable in context")
    }

    /// A parameter, or anything else in the shared grammar, in the
    /// operator's context.
    pub fn lift(&self, f: &RatFunc) -> Result<RatFunc> {
        f.reembed(&self.ctx)
    }

    fn check_compatible(&self, other: &FieldOp) -> Result<()> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch(format!("{} vs {} z-variables", self.k, other.k)));
        }
        self.ctx.check(&other.ctx)
    }

    pub fn add(&self, other: &FieldOp) -> Result<FieldOp> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FieldOp) -> Result<FieldOp> {
        self.add(&other.scale(&RatFunc::constant(&self.ctx, int(-1)))?)
    }

    /// Left multiplication by a function: `c · op`.
    pub fn scale(&self, c: &RatFunc) -> Result<FieldOp> {
        self.ctx.check(c.ctx())?;
        let mut out = Self::zero(self.k, &self.ring);
        for t in &self.terms {
            out.push(OpTerm { coeff: &t.coeff * c, ..t.clone() });
        }
        Ok(out)
    }

    /// Applies the substitution part of `t` to a function.
    fn act(&self, t: &OpTerm, f: &RatFunc) -> Result<RatFunc> {
        let zs: Vec<RatFunc> = (0..self.k).map(|i| self.z(i)).collect();
        let mut images: Vec<Option<RatFunc>> = vec![None; self.ctx.len()];
        for (i, img) in images.iter_mut().enumerate().take(self.k) {
            *img = Some(t.argument(i, &zs));
        }
        f.substitute(&images, &self.ctx)
    }

    /// Image of an arbitrary rational function.
    pub fn apply_rat(&self, f: &RatFunc) -> Result<RatFunc> {
        self.ctx.check(f.ctx())?;
        let parts: Result<Vec<RatFunc>> = self
            .terms
            .iter()
            .map(|t| Ok(&t.coeff * &self.act(t, f)?))
            .collect();
        Ok(RatFunc::sum(&self.ctx, parts?))
    }

    /// Image of a polynomial in the z-variables; the result must again be
    /// polynomial in the z-variables (coefficients may be rational in the
    /// parameters).
    pub fn apply(&self, f: &MPoly) -> Result<RatFunc> {
        let img = self.apply_rat(&RatFunc::from(f.clone()))?;
        if (0..self.k).any(|v| img.den().uses_var(v)) {
            return Err(Error::NotDivisible(format!("image of {f} is {img}")));
        }
        Ok(img)
    }

    /// Operator composition `self ∘ other`.
    pub fn compose(&self, other: &FieldOp) -> Result<FieldOp> {
        self.check_compatible(other)?;
        let k = self.k;
        let mut out = Self::zero(k, &self.ring);
        for a in &self.terms {
            let mut inv_a = vec![0; k];
            for (i, &p) in a.perm.iter().enumerate() {
                inv_a[p] = i;
            }
            for b in &other.terms {
                let perm: Vec<usize> = (0..k).map(|i| a.perm[b.perm[i]]).collect();
                let maps = (0..k)
                    .map(|j| {
                        let (sb, ob) = &b.sub.maps[inv_a[j]];
                        let (sa, oa) = &a.sub.maps[j];
                        (sb * sa, &(sb * oa) + ob)
                    })
                    .collect();
                let coeff = &a.coeff * &self.act(a, &b.coeff)?;
                out.push(OpTerm { coeff, perm, sub: AffineSub { maps } });
            }
        }
        Ok(out)
    }

    /// Inverse of a single-term operator.
    pub fn inverse(&self) -> Result<FieldOp> {
        let [t] = self.terms.as_slice() else {
            return Err(Error::InvalidArgument("only single-term operators are inverted".into()));
        };
        let k = self.k;
        let mut perm = vec![0; k];
        for (i, &p) in t.perm.iter().enumerate() {
            perm[p] = i;
        }
        let maps = (0..k)
            .map(|i| {
                let (s, o) = &t.sub.maps[t.perm[i]];
                let si = s.inv()?;
                Ok((si.clone(), -(o * &si)))
            })
            .collect::<Result<Vec<_>>>()?;
        let sigma_inv = Self::zero(k, &self.ring).with_term(None, &perm, Some(AffineSub { maps }));
        let c_inv = t.coeff.inv()?;
        // (c σ)^{-1} = σ^{-1} ∘ c^{-1}
        let after = Self::zero(k, &self.ring).with_term(Some(c_inv), &(0..k).collect::<Vec<_>>(), None);
        sigma_inv.compose(&after)
    }

    /// Places a two-variable operator on the ordered variables `(a, b)`
    /// (0-based) of a `total`-variable space.
    pub fn embed_leg(&self, a: usize, b: usize, total: usize) -> Result<FieldOp> {
        if self.k != 2 {
            return Err(Error::InvalidArgument("embed_leg expects a two-variable operator".into()));
        }
        if a == b || a >= total || b >= total {
            return Err(Error::InvalidArgument(format!("legs ({a},{b}) of {total}")));
        }
        let target = Self::zero(total, &self.ring);
        let tctx = target.ctx.clone();
        let legs = [a, b];
        let mut images: Vec<Option<RatFunc>> = vec![None; self.ctx.len()];
        images[0] = Some(target.z(a));
        images[1] = Some(target.z(b));
        let mut terms = Vec::new();
        for t in &self.terms {
            let coeff = t.coeff.substitute(&images, &tctx)?;
            let mut perm: Vec<usize> = (0..total).collect();
            perm[a] = legs[t.perm[0]];
            perm[b] = legs[t.perm[1]];
            let mut maps = vec![(RatFunc::one(&tctx), RatFunc::zero(&tctx)); total];
            for (i, &l) in legs.iter().enumerate() {
                let (s, o) = &t.sub.maps[i];
                maps[l] = (s.reembed(&tctx)?, o.reembed(&tctx)?);
            }
            terms.push(OpTerm { coeff, perm, sub: AffineSub { maps } });
        }
        FieldOp::from_terms(total, &self.ring, terms)
    }

    /// Matrix of the operator on polynomials of degree `< n` in each
    /// z-variable, in the monomial basis `e_i <-> z^(i-1)`.
    pub fn restrict(&self, n: usize) -> Result<TensorMat> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        let dim = n.pow(self.k as u32);
        let columns: Vec<Result<Vec<(usize, RatFunc)>>> =
            (0..dim).into_par_iter().map(|col| self.column(col, n)).collect();
        let mut m = TensorMat::zero(n, self.k, &self.ring);
        for (col, entries) in columns.into_iter().enumerate() {
            for (row, v) in entries? {
                m.set_flat(row, col, v)?;
            }
        }
        Ok(m)
    }

    /// Image of the `col`-th basis monomial of the box of side `n`.
    fn column(&self, col: usize, n: usize) -> Result<Vec<(usize, RatFunc)>> {
        let mut e = vec![0u32; self.ctx.len()];
        let mut rem = col;
        for v in (0..self.k).rev() {
            e[v] = (rem % n) as u32;
            rem /= n;
        }
        let f = MPoly::term(&self.ctx, Monomial(e), int(1));
        let img = self.apply(&f)?;
        self.split_image(&img, n)
    }

    /// The action matrix on the box of exponents `<= bound`, computed
    /// column by column and cut off after the first nonzero column. Zero
    /// exactly when the full action matrix is.
    pub fn action_prefix(&self, bound: usize) -> Result<TensorMat> {
        let n = bound + 1;
        let mut m = TensorMat::zero(n, self.k, &self.ring);
        if self.is_zero() {
            return Ok(m);
        }
        for col in 0..n.pow(self.k as u32) {
            let entries = self.column(col, n)?;
            let stop = !entries.is_empty();
            for (row, v) in entries {
                m.set_flat(row, col, v)?;
            }
            if stop {
                break;
            }
        }
        Ok(m)
    }

    /// Splits a z-polynomial image into (flat row, coefficient) pairs.
    fn split_image(&self, img: &RatFunc, n: usize) -> Result<Vec<(usize, RatFunc)>> {
        let k = self.k;
        let den = img.den().reembed(&self.ring)?;
        let mut by_row: std::collections::BTreeMap<usize, Vec<(Vec<u32>, crate::exact::Rat)>> =
            Default::default();
        for (m, c) in img.num().terms() {
            if m.0[..k].iter().any(|&e| e as usize >= n) {
                return Err(Error::NotClosed(format!("image {img} has degree >= {n}")));
            }
            let row = m.0[..k].iter().fold(0, |acc, &e| acc * n + e as usize);
            by_row.entry(row).or_default().push((m.0[k..].to_vec(), c.clone()));
        }
        by_row
            .into_iter()
            .map(|(row, terms)| {
                let p = MPoly::from_terms(&self.ring, terms);
                Ok((row, RatFunc::new(p, den.clone())?))
            })
            .collect()
    }

    /// Action on the box of monomials with every exponent `<= bound`.
    pub fn action_matrix(&self, bound: usize) -> Result<TensorMat> {
        self.restrict(bound + 1)
    }

    /// Monomial exponent bound used to decide operator equality for
    /// affine substitutions at dimension `n`.
    pub fn equality_bound(n: usize) -> usize {
        2 * (1 + n)
    }

    /// First monomial `z^e` (all exponents `<= bound`, flat order) on which
    /// `self` and `other` differ, with the difference of the images.
    pub fn box_witness(&self, other: &FieldOp, bound: usize) -> Result<Option<(Vec<u32>, RatFunc)>> {
        let diff = self.sub(other)?;
        if diff.is_zero() {
            return Ok(None);
        }
        let k = self.k;
        let side = bound + 1;
        for flat in 0..side.pow(k as u32) {
            let mut e = vec![0u32; self.ctx.len()];
            let mut rem = flat;
            for v in (0..k).rev() {
                e[v] = (rem % side) as u32;
                rem /= side;
            }
            let f = RatFunc::from(MPoly::term(&self.ctx, Monomial(e.clone()), int(1)));
            let img = diff.apply_rat(&f)?;
            if !img.is_zero() {
                e.truncate(k);
                return Ok(Some((e, img)));
            }
        }
        Ok(None)
    }

    /// Decides `self == other` by their action on all monomials with
    /// exponents `<= bound`.
    pub fn equals_on_box(&self, other: &FieldOp, bound: usize) -> Result<bool> {
        Ok(self.box_witness(other, bound)?.is_none())
    }

    /// Specializes parameters by name, producing an operator over `ring`.
    pub fn specialize(&self, ring: &Ctx, values: &[(&str, RatFunc)]) -> Result<FieldOp> {
        let target = Self::zero(self.k, ring);
        let tctx = target.ctx.clone();
        let mut images: Vec<Option<RatFunc>> = vec![None; self.ctx.len()];
        for (name, v) in values {
            images[self.ctx.require(name)?] = Some(v.reembed(&tctx)?);
        }
        let map = |f: &RatFunc| f.substitute(&images, &tctx);
        let mut terms = Vec::new();
        for t in &self.terms {
            let maps = t
                .sub
                .maps
                .iter()
                .map(|(s, o)| Ok((map(s)?, map(o)?)))
                .collect::<Result<Vec<_>>>()?;
            terms.push(OpTerm { coeff: map(&t.coeff)?, perm: t.perm.clone(), sub: AffineSub { maps } });
        }
        FieldOp::from_terms(self.k, ring, terms)
    }

    pub fn to_json(&self) -> Vec<OpTermJson> {
        self.terms
            .iter()
            .map(|t| OpTermJson {
                swap: (self.k == 2).then(|| t.swap()),
                perm: (self.k != 2).then(|| t.perm.clone()),
                sub: t
                    .sub
                    .maps
                    .iter()
                    .enumerate()
                    .map(|(j, (s, o))| (zvar(j), [s.to_string(), o.to_string()]))
                    .collect(),
                coeff: t.coeff.to_string(),
            })
            .collect()
    }

    pub fn from_json(k: usize, ring: &Ctx, terms: &[OpTermJson]) -> Result<FieldOp> {
        let ctx = op_context(k, ring);
        let parse = |s: &str| crate::exact::parse_ratfunc(s, &ctx);
        let mut out = Vec::new();
        for t in terms {
            let perm = match (&t.perm, t.swap) {
                (Some(p), _) => p.clone(),
                (None, Some(true)) if k == 2 => vec![1, 0],
                (None, _) => (0..k).collect(),
            };
            let mut maps = Vec::with_capacity(k);
            for j in 0..k {
                let [s, o] = t
                    .sub
                    .get(&zvar(j))
                    .ok_or_else(|| Error::InvalidArgument(format!("missing substitution for {}", zvar(j))))?;
                maps.push((parse(s)?, parse(o)?));
            }
            out.push(OpTerm { coeff: parse(&t.coeff)?, perm, sub: AffineSub { maps } });
        }
        FieldOp::from_terms(k, ring, out)
    }
}

/// Serialized operator term: `{swap, sub: {var: [scale, offset]}, coeff}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpTermJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub swap: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub perm: Option<Vec<usize>>,
    pub sub: std::collections::BTreeMap<String, [String; 2]>,
    pub coeff: String,
}
