//! The named operators and matrices: the rational Shibukawa-Ueno operator,
//! `R_p` by both routes, its classical limit, `b_CG`, the Cremmer-Gervais
//! operators and their modified forms.

use num_bigint::BigInt;

use crate::error::Result;
use crate::exact::{binomial, int, Ctx, Rat, RatFunc};
use crate::funcfield::{op_context, FieldOp};
use crate::tensor::TensorMat;

/// `1` if `i <= k < j`, `-1` if `j <= k < i`, else `0`.
pub fn eta(i: i64, j: i64, k: i64) -> i64 {
    if i <= k && k < j {
        1
    } else if j <= k && k < i {
        -1
    } else {
        0
    }
}

/// Two-variable affine substitution `(z1, z2) -> (s1 z1 + o1, s2 z2 + o2)`
/// with parameters given in the ring.
fn affine2(ring: &Ctx, s1: &RatFunc, o1: &RatFunc, s2: &RatFunc, o2: &RatFunc) -> Result<FieldOp> {
    let ctx = op_context(2, ring);
    let l = |f: &RatFunc| f.reembed(&ctx);
    FieldOp::affine(2, ring, vec![(l(s1)?, l(o1)?), (l(s2)?, l(o2)?)])
}

/// `F~_p f = f(z1 + p, z2 - p)`.
pub fn shift_twist(p: &RatFunc) -> Result<FieldOp> {
    let ring = p.ctx();
    let one = RatFunc::one(ring);
    affine2(ring, &one, p, &one, &-p)
}

/// `F_p f = f(z1 / p, p z2)`.
pub fn scale_twist(p: &RatFunc) -> Result<FieldOp> {
    let ring = p.ctx();
    let zero = RatFunc::zero(ring);
    affine2(ring, &p.inv()?, &zero, p, &zero)
}

/// `phi_t f = f(z1 - t, z2 - t)`.
pub fn diagonal_shift(t: &RatFunc) -> Result<FieldOp> {
    let ring = t.ctx();
    let one = RatFunc::one(ring);
    affine2(ring, &one, &-t, &one, &-t)
}

/// `F + c (F - P)`.
fn twisted(f: &FieldOp, c: &RatFunc) -> Result<FieldOp> {
    let p = FieldOp::swap(f.ring());
    f.add(&f.sub(&p)?.scale(c)?)
}

/// `I + κ (I - P) / (z1 - z2)`.
pub fn make_su_op(kappa: &RatFunc) -> Result<FieldOp> {
    let ring = kappa.ctx();
    let id = FieldOp::identity(2, ring);
    let k = id.lift(kappa)?;
    let c = k.checked_div(&(&id.z(0) - &id.z(1)))?;
    id.add(&id.sub(&FieldOp::swap(ring))?.scale(&c)?)
}

/// The untwisted nilpotent part `(I - P) / (z1 - z2)`.
pub fn make_r_op(ring: &Ctx) -> Result<FieldOp> {
    let id = FieldOp::identity(2, ring);
    let c = (&id.z(0) - &id.z(1)).inv()?;
    id.sub(&FieldOp::swap(ring))?.scale(&c)
}

/// `R_p = F~_h - (h n / (z1 - z2 + h)) (F~_h - P)`.
pub fn make_rp_op(n: usize, h: &RatFunc) -> Result<FieldOp> {
    let f = shift_twist(h)?;
    let hh = f.lift(h)?;
    let c = -(hh.scale(&int(n as i64)).checked_div(&(&(&f.z(0) - &f.z(1)) + &hh))?);
    twisted(&f, &c)
}

/// `R_p` entry by entry from the closed binomial formula, over `Q[h]`.
pub fn rp_matrix_formula(n: usize) -> Result<TensorMat> {
    let ring = Ctx::new(&["h"]);
    let h = RatFunc::var(&ring, "h")?;
    let nn = n as i64;
    let mut m = TensorMat::zero(n, 2, &ring);
    for i in 0..nn {
        for j in 0..nn {
            for a in 0..nn {
                for b in 0..nn {
                    let mut sum = binomial(i, a) * binomial(j, b);
                    let mut tail = BigInt::from(0);
                    for k in 0..=i {
                        let e = eta(j, k, a);
                        if e == 0 {
                            continue;
                        }
                        let sign = if (k - a).rem_euclid(2) == 0 { 1 } else { -1 };
                        tail += binomial(i, k) * binomial(j + k - a - 1, b) * (sign * e);
                    }
                    sum += tail * nn;
                    if (j - b).rem_euclid(2) == 1 {
                        sum = -sum;
                    }
                    if sum == 0.into() {
                        continue;
                    }
                    let v = h.pow((i + j - a - b) as i32)?.scale(&Rat::from_integer(sum));
                    let row = [a as usize + 1, b as usize + 1];
                    let col = [i as usize + 1, j as usize + 1];
                    m.set(&row, &col, v)?;
                }
            }
        }
    }
    Ok(m)
}

/// Adds `c · (E_ab ∧ E_cd)` with `x ∧ y = x⊗y - y⊗x`; indices 1-based,
/// units with an index outside `1..=n` are absent.
fn add_wedge(m: &mut TensorMat, c: i64, (a, b): (usize, usize), (cc, d): (usize, usize)) -> Result<()> {
    let n = m.n();
    let ok = |x: usize| (1..=n).contains(&x);
    if c == 0 || ![a, b, cc, d].into_iter().all(ok) {
        return Ok(());
    }
    let v = RatFunc::constant(m.ring(), int(c));
    m.add_at(&[a, cc], &[b, d], &v)?;
    m.add_at(&[cc, a], &[d, b], &-&v)
}

/// `r_p = n Σ_{i<j} Σ_{k=i}^{j-1} E_{k,i} ∧ E_{i+j-k-1,j}
///      + Σ_{i,j} (j-1) E_{j-1,j} ∧ E_{i,i}`.
pub fn classical_rp(n: usize) -> Result<TensorMat> {
    let mut m = TensorMat::zero(n, 2, &Ctx::empty());
    let nn = n as i64;
    for i in 1..=n {
        for j in i + 1..=n {
            for k in i..j {
                add_wedge(&mut m, nn, (k, i), (i + j - k - 1, j))?;
            }
        }
    }
    for i in 1..=n {
        for j in 2..=n {
            add_wedge(&mut m, j as i64 - 1, (j - 1, j), (i, i))?;
        }
    }
    Ok(m)
}

/// `b_CG = n Σ_{i<j} Σ_{k=1}^{j-i} E_{i,j-k+1} ∧ E_{j,i+k}
///       + Σ_{i,j} (n-j) E_{i,i} ∧ E_{j,j+1}`.
pub fn b_cg(n: usize) -> Result<TensorMat> {
    let mut m = TensorMat::zero(n, 2, &Ctx::empty());
    let nn = n as i64;
    for i in 1..=n {
        for j in i + 1..=n {
            for k in 1..=j - i {
                add_wedge(&mut m, nn, (i, j - k + 1), (j, i + k))?;
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            add_wedge(&mut m, nn - j as i64, (i, i), (j, j + 1))?;
        }
    }
    Ok(m)
}

/// Image under `φ ⊗ φ` with `φ(E_ij) = -E_{n+1-j, n+1-i}`.
pub fn phi_map(m: &TensorMat) -> Result<TensorMat> {
    m.require_legs(2)?;
    let n = m.n();
    let r = |x: usize| n + 1 - x;
    let mut out = TensorMat::zero(n, 2, m.ring());
    for e in m.entries() {
        let (a, c) = (e.row[0], e.row[1]);
        let (b, d) = (e.col[0], e.col[1]);
        out.set(&[r(b), r(d)], &[r(a), r(c)], e.value)?;
    }
    Ok(out)
}

/// `R = (q^ p z2 / (p z2 - z1)) P + (q - q^ p z2 / (p z2 - z1)) F_p`,
/// `q^ = q - 1/q`. Both parameters live in the same ring.
pub fn make_cg_op(p: &RatFunc, q: &RatFunc) -> Result<FieldOp> {
    p.ctx().check(q.ctx())?;
    let f = scale_twist(p)?;
    let (pp, qq) = (f.lift(p)?, f.lift(q)?);
    let qhat = &qq - &qq.inv()?;
    let pz2 = &pp * &f.z(1);
    let a = (&qhat * &pz2).checked_div(&(&pz2 - &f.z(0)))?;
    let swap = FieldOp::swap(f.ring()).scale(&a)?;
    swap.add(&f.scale(&(&qq - &a))?)
}

/// `Q = (2M + (q⁻¹ - q) P) / (q + q⁻¹)` and `λ = (1 - q²)² / (1 + q²)²`.
pub fn hecke_to_mqybe(m: &TensorMat, q: &RatFunc) -> Result<(TensorMat, RatFunc)> {
    m.require_legs(2)?;
    m.ring().check(q.ctx())?;
    let qi = q.inv()?;
    let p = TensorMat::swap(m.n(), m.ring());
    let num = m.scale_rat(&int(2)).add(&p.scale(&(&qi - q))?)?;
    let out = num.scale(&(q + &qi).inv()?)?;
    let q2 = q * q;
    let one = RatFunc::one(q.ctx());
    let lambda = (&(&one - &q2) * &(&one - &q2)).checked_div(&(&(&one + &q2) * &(&one + &q2)))?;
    Ok((out, lambda))
}

/// `(pⁿ - 1) / (pⁿ + 1)` in the operator context of `f`.
fn cayley(f: &FieldOp, p: &RatFunc, n: usize) -> Result<RatFunc> {
    let pn = f.lift(p)?.pow(n as i32)?;
    let one = RatFunc::one(f.ctx());
    (&pn - &one).checked_div(&(&pn + &one))
}

/// `Q_p = F_p - ((pⁿ-1)(z2 + z1/p)) / ((pⁿ+1)(z2 - z1/p)) (F_p - P)`.
pub fn make_qp_op(n: usize, p: &RatFunc) -> Result<FieldOp> {
    let f = scale_twist(p)?;
    let z1p = f.z(0).checked_div(&f.lift(p)?)?;
    let ratio = (&f.z(1) + &z1p).checked_div(&(&f.z(1) - &z1p))?;
    twisted(&f, &-(&cayley(&f, p, n)? * &ratio))
}

/// `B_{p,h,n}`: twist `F~_{p,h} f = f(z1/p + h/p, p z2 - h)` with the two
/// correction terms.
pub fn make_boundary_op(n: usize, p: &RatFunc, h: &RatFunc) -> Result<FieldOp> {
    p.ctx().check(h.ctx())?;
    let pi = p.inv()?;
    let f = affine2(p.ctx(), &pi, &(h * &pi), p, &-h)?;
    let (pp, hh) = (f.lift(p)?, f.lift(h)?);
    let one = RatFunc::one(f.ctx());
    let r = cayley(&f, p, n)?;
    let pz2 = &pp * &f.z(1);
    let den = &(&pz2 - &f.z(0)) - &hh;
    let first = (&pz2 + &f.z(0)).checked_div(&den)?;
    let second = (&hh * &(&pp + &one)).checked_div(&(&(&pp - &one) * &den))?;
    twisted(&f, &(&r * &(&second - &first)))
}
