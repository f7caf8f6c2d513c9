//! Exact residuals of the matrix and operator equations. A residual is
//! zero only when every entry cancels identically.

use serde::Serialize;

use crate::constructors::{
    b_cg, classical_rp, diagonal_shift, make_boundary_op, make_qp_op, make_r_op, make_rp_op, make_su_op, phi_map,
    rp_matrix_formula, shift_twist,
};
use crate::error::{Error, Result};
use crate::exact::{int, Ctx, Rat, RatFunc};
use crate::funcfield::FieldOp;
use crate::tensor::{Entry, TensorMat};

#[derive(Clone, Debug)]
pub struct Residual {
    pub matrix: TensorMat,
    pub is_zero: bool,
    /// First nonzero entry in flattened `(row, col)` order.
    pub witness: Option<Entry>,
}

impl Residual {
    pub fn new(matrix: TensorMat) -> Self {
        let witness = matrix.first_nonzero();
        Residual { is_zero: witness.is_none(), matrix, witness }
    }

    pub fn report(&self) -> Report {
        Report {
            zero: self.is_zero,
            n: self.matrix.n(),
            legs: self.matrix.legs(),
            nonzero_entries: self.matrix.nnz(),
            witness: self.witness.as_ref().map(|w| WitnessReport {
                row: w.row.clone(),
                col: w.col.clone(),
                value: w.value.to_string(),
            }),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub zero: bool,
    pub n: usize,
    pub legs: usize,
    pub nonzero_entries: usize,
    pub witness: Option<WitnessReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub row: Vec<usize>,
    pub col: Vec<usize>,
    pub value: String,
}

fn legs3(m: &TensorMat) -> Result<[TensorMat; 3]> {
    m.require_legs(2)?;
    Ok([m.embed(0, 1, 3)?, m.embed(0, 2, 3)?, m.embed(1, 2, 3)?])
}

/// `R12 R13 R23 - R23 R13 R12`.
fn ybe_difference(m: &TensorMat) -> Result<TensorMat> {
    let [m12, m13, m23] = legs3(m)?;
    let lhs = TensorMat::product(&[&m12, &m13, &m23])?;
    let rhs = TensorMat::product(&[&m23, &m13, &m12])?;
    lhs.sub(&rhs)
}

pub fn qybe_residual(m: &TensorMat) -> Result<Residual> {
    Ok(Residual::new(ybe_difference(m)?))
}

/// The cyclic leg permutations `(P_123, P_213)`. `P_123` moves the
/// factor in slot `i` to slot `σ(i)`, `σ = (123)`:
/// `v1⊗v2⊗v3 -> v3⊗v1⊗v2`; `P_213` is its inverse.
pub fn cyclic_perms(n: usize, ring: &Ctx) -> (TensorMat, TensorMat) {
    (TensorMat::permutation(n, &[2, 0, 1], ring), TensorMat::permutation(n, &[1, 2, 0], ring))
}

/// `R12 R13 R23 - R23 R13 R12 - λ (P_123 R12 - P_213 R23)`.
pub fn mqybe_residual(m: &TensorMat, lambda: &RatFunc) -> Result<Residual> {
    m.ring().check(lambda.ctx())?;
    let mut diff = ybe_difference(m)?;
    if !lambda.is_zero() {
        let [m12, _, m23] = legs3(m)?;
        let (p123, p213) = cyclic_perms(m.n(), m.ring());
        let rhs = p123.mul(&m12)?.sub(&p213.mul(&m23)?)?;
        diff = diff.sub(&rhs.scale(lambda)?)?;
    }
    Ok(Residual::new(diff))
}

fn commutator(a: &TensorMat, b: &TensorMat) -> Result<TensorMat> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// `[r12, r13] + [r12, r23] + [r13, r23] - μ Ω` with `Ω = P_123 - P_213`.
pub fn cybe_residual(r: &TensorMat, mu: &RatFunc) -> Result<Residual> {
    r.ring().check(mu.ctx())?;
    let [r12, r13, r23] = legs3(r)?;
    let mut s = commutator(&r12, &r13)?.add(&commutator(&r12, &r23)?)?.add(&commutator(&r13, &r23)?)?;
    if !mu.is_zero() {
        let (p123, p213) = cyclic_perms(r.n(), r.ring());
        s = s.sub(&p123.sub(&p213)?.scale(mu)?)?;
    }
    Ok(Residual::new(s))
}

/// `(PM - q)(PM + q⁻¹)`.
pub fn hecke_residual(m: &TensorMat, q: &RatFunc) -> Result<Residual> {
    m.require_legs(2)?;
    m.ring().check(q.ctx())?;
    let id = TensorMat::identity(m.n(), 2, m.ring());
    let pm = TensorMat::swap(m.n(), m.ring()).mul(m)?;
    let a = pm.sub(&id.scale(q)?)?;
    let b = pm.add(&id.scale(&q.inv()?)?)?;
    Ok(Residual::new(a.mul(&b)?))
}

/// `(P Q P) Q - I`.
pub fn unitarity_residual(q: &TensorMat) -> Result<Residual> {
    q.require_legs(2)?;
    let id = TensorMat::identity(q.n(), 2, q.ring());
    Ok(Residual::new(q.flip()?.mul(q)?.sub(&id)?))
}

/// Constant and linear coefficients in `h` of a matrix polynomial in `h`,
/// as matrices over the remaining parameters.
pub fn semiclassical(m: &TensorMat) -> Result<(TensorMat, TensorMat)> {
    let hv = m.ring().require("h")?;
    let rest = m.ring().without(&["h"]);
    if let Some(e) = m.entries().find(|e| e.value.den().uses_var(hv)) {
        return Err(Error::NotPolynomialIn { var: "h".into(), entry: format!("{:?},{:?}: {}", e.row, e.col, e.value) });
    }
    let order = |k: u32| {
        m.map_into(&rest, |v| v.coeff_in(hv, k).expect("checked above").reembed(&rest))
    };
    Ok((order(0)?, order(1)?))
}

/// `restrict(r, n)²` for the nilpotent `r = (I - P)/(z1 - z2)`.
pub fn nilpotent_residual(n: usize) -> Result<Residual> {
    let r = make_r_op(&Ctx::empty())?.restrict(n)?;
    Ok(Residual::new(r.mul(&r)?))
}

/// `restrict(I + κ r, n) - exp(κ restrict(r, n))`, the exponential summed
/// until its terms vanish (they must, `r` being nilpotent).
pub fn exponential_residual(n: usize) -> Result<Residual> {
    let ring = Ctx::new(&["kappa"]);
    let kappa = RatFunc::var(&ring, "kappa")?;
    let kr = make_r_op(&ring)?.restrict(n)?.scale(&kappa)?;
    let mut term = TensorMat::identity(n, 2, &ring);
    let mut exp = term.clone();
    let dim = n * n;
    for m in 1..=dim + 1 {
        term = term.mul(&kr)?.scale_rat(&Rat::new(1.into(), (m as i64).into()));
        if term.is_zero() {
            break;
        }
        if m > dim {
            return Err(Error::InvalidArgument("r is not nilpotent".into()));
        }
        exp = exp.add(&term)?;
    }
    let su = make_su_op(&kappa)?.restrict(n)?;
    Ok(Residual::new(su.sub(&exp)?))
}

/// Residual of an operator identity `lhs = rhs`: the action of the
/// difference on the monomials with exponents `<= bound`, truncated after
/// the first column that does not vanish.
pub fn operator_residual(lhs: &FieldOp, rhs: &FieldOp, bound: usize) -> Result<Residual> {
    Ok(Residual::new(lhs.sub(rhs)?.action_prefix(bound)?))
}

/// The four twist relations for `F = F~_p` and `R = I + κ(I - P)/(z1 - z2)`,
/// with `p` and `κ` symbolic.
pub fn twist_lemma(bound: usize) -> Result<Vec<(&'static str, Residual)>> {
    let ring = Ctx::new(&["kappa", "p"]);
    let p = RatFunc::var(&ring, "p")?;
    let kappa = RatFunc::var(&ring, "kappa")?;
    let f = shift_twist(&p)?;
    let r = make_su_op(&kappa)?;
    let leg = |op: &FieldOp, a, b| op.embed_leg(a, b, 3);
    let (f12, f13, f23) = (leg(&f, 0, 1)?, leg(&f, 0, 2)?, leg(&f, 1, 2)?);
    let (r12, r23) = (leg(&r, 0, 1)?, leg(&r, 1, 2)?);
    let chain = |ops: &[&FieldOp]| -> Result<FieldOp> {
        ops[1..].iter().try_fold(ops[0].clone(), |acc, o| acc.compose(o))
    };
    Ok(vec![
        ("F21 = F12^-1", operator_residual(&f.embed_leg(1, 0, 2)?, &f.inverse()?, bound)?),
        (
            "F12 F13 F23 = F23 F13 F12",
            operator_residual(&chain(&[&f12, &f13, &f23])?, &chain(&[&f23, &f13, &f12])?, bound)?,
        ),
        (
            "R12 F23 F13 = F13 F23 R12",
            operator_residual(&chain(&[&r12, &f23, &f13])?, &chain(&[&f13, &f23, &r12])?, bound)?,
        ),
        (
            "R23 F12 F13 = F13 F12 R23",
            operator_residual(&chain(&[&r23, &f12, &f13])?, &chain(&[&f13, &f12, &r23])?, bound)?,
        ),
    ])
}

/// `φ_t Q_p φ_t⁻¹ - B_{p,h,n}` on the monomial box, with `t = h/(p - 1)`
/// plus an optional perturbation.
pub fn similarity_check(n: usize, perturb: Option<&Rat>) -> Result<Residual> {
    let ring = Ctx::new(&["p", "h"]);
    let p = RatFunc::var(&ring, "p")?;
    let h = RatFunc::var(&ring, "h")?;
    let mut t = h.checked_div(&(&p - &RatFunc::one(&ring)))?;
    if let Some(d) = perturb {
        t = &t + &RatFunc::constant(&ring, d.clone());
    }
    let phi = diagonal_shift(&t)?;
    let lhs = phi.compose(&make_qp_op(n, &p)?)?.compose(&phi.inverse()?)?;
    operator_residual(&lhs, &make_boundary_op(n, &p, &h)?, FieldOp::equality_bound(n))
}

/// `lim_{p→1} restrict(B_{p,h,n}, n) - R_p` entrywise, over `Q[h]`.
pub fn boundary_limit(n: usize) -> Result<Residual> {
    let ring = Ctx::new(&["p", "h"]);
    let p = RatFunc::var(&ring, "p")?;
    let h = RatFunc::var(&ring, "h")?;
    let b = make_boundary_op(n, &p, &h)?.restrict(n)?;
    let hring = Ctx::new(&["h"]);
    let lim = b.map_into(&hring, |v| v.limit_subst("p", &int(1))?.reembed(&hring))?;
    Ok(Residual::new(lim.sub(&rp_matrix_formula(n)?)?))
}

/// h-adic valuation of `λ = (1 - pⁿ)²/(1 + pⁿ)²` along `p = 1 + ε h`.
pub fn lambda_valuation(n: usize) -> Result<Option<i64>> {
    let ring = Ctx::new(&["eps", "h"]);
    let one = RatFunc::one(&ring);
    let p = &one + &(&RatFunc::var(&ring, "eps")? * &RatFunc::var(&ring, "h")?);
    let pn = p.pow(n as i32)?;
    let a = &one - &pn;
    let b = &one + &pn;
    let lambda = (&a * &a).checked_div(&(&b * &b))?;
    Ok(lambda.valuation(ring.require("h")?))
}

/// `rp_matrix_formula(n) - restrict(R_p, n)` over `Q[h]`.
pub fn formula_vs_operator(n: usize) -> Result<Residual> {
    let ring = Ctx::new(&["h"]);
    let h = RatFunc::var(&ring, "h")?;
    let op = make_rp_op(n, &h)?.restrict(n)?;
    Ok(Residual::new(rp_matrix_formula(n)?.sub(&op)?))
}

/// Projective comparison of `(φ⊗φ)(b_CG)` with `r_p`: the scalar `c` read
/// off the first nonzero entry of `r_p`, and the residual
/// `(φ⊗φ)(b_CG) - c r_p`. No scalar exists when `r_p = 0`.
pub fn bcg_vs_rp(n: usize) -> Result<(Option<Rat>, Residual)> {
    let image = phi_map(&b_cg(n)?)?;
    let rp = classical_rp(n)?;
    let Some(w) = rp.first_nonzero() else {
        return Ok((None, Residual::new(image)));
    };
    let num = image.get(&w.row, &w.col).constant_value().unwrap_or_default();
    let den = w.value.constant_value().expect("constant matrix");
    let c = num / den;
    let diff = image.sub(&rp.scale_rat(&c))?;
    Ok((Some(c), Residual::new(diff)))
}
