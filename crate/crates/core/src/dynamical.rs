//! Dynamical matrices over `Q(ν1, ..., νn)`: weight shifts, the rational
//! dynamical solution, the change of basis `A`, and the dynamical braid and
//! vertex-IRF checks.
//!
//! The basis vector `e_i` has weight `ν_i` and `(ν_i, ν_j) = δ_ij - 1/n`.
//! Shifting by the weight of `e_j` with sign `s` sends every
//! `ν_i -> ν_i + s (δ_ij - 1/n)`.

use std::fmt;
use std::str::FromStr;

use crate::constructors::make_rp_op;
use crate::error::{Error, Result};
use crate::exact::{Ctx, Rat, RatFunc};
use crate::tensor::TensorMat;
use crate::verifiers::Residual;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+1" | "1" | "+" => Ok(Sign::Plus),
            "-1" | "-" => Ok(Sign::Minus),
            _ => Err(Error::InvalidArgument(format!("sign must be +1 or -1, got `{s}`"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// Weights `ν1..νn` as independent generators with the pairing
/// `δ_ij - 1/n`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightBasis {
    n: usize,
    ring: Ctx,
}

impl WeightBasis {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        let names: Vec<String> = (1..=n).map(|i| format!("nu{i}")).collect();
        Ok(WeightBasis { n, ring: Ctx::new(&names) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Ctx {
        &self.ring
    }

    /// `ν_i`, 1-based.
    pub fn nu(&self, i: usize) -> RatFunc {
        RatFunc::var(&self.ring, &format!("nu{i}")).expect("weight in range")
    }

    /// `(ν_i, ν_j)`, 1-based.
    pub fn pairing(&self, i: usize, j: usize) -> Rat {
        let d = if i == j { Rat::from_integer(1.into()) } else { Rat::from_integer(0.into()) };
        d - Rat::new(1.into(), (self.n as i64).into())
    }

    /// Shift of `f` by the weight of `e_j`.
    pub fn shift(&self, f: &RatFunc, j: usize, sign: Sign) -> Result<RatFunc> {
        self.ring.check(f.ctx())?;
        if j == 0 || j > self.n {
            return Err(Error::InvalidArgument(format!("basis index {j} outside 1..={}", self.n)));
        }
        let s = Rat::from_integer(sign.value().into());
        let images: Vec<Option<RatFunc>> = (1..=self.n)
            .map(|i| Some(&self.nu(i) + &RatFunc::constant(&self.ring, &s * &self.pairing(i, j))))
            .collect();
        f.substitute(&images, &self.ring)
    }
}

/// A matrix on tensor powers of `V_n` with coefficients in the weight field.
#[derive(Clone, Debug, PartialEq)]
pub struct DynMat {
    basis: WeightBasis,
    matrix: TensorMat,
}

impl DynMat {
    pub fn new(basis: WeightBasis, matrix: TensorMat) -> Result<Self> {
        basis.ring.check(matrix.ring())?;
        if matrix.n() != basis.n {
            return Err(Error::DimensionMismatch("matrix and weight basis differ in n".into()));
        }
        Ok(DynMat { basis, matrix })
    }

    pub fn basis(&self) -> &WeightBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &TensorMat {
        &self.matrix
    }

    pub fn mul(&self, other: &DynMat) -> Result<DynMat> {
        DynMat::new(self.basis.clone(), self.matrix.mul(&other.matrix)?)
    }
}

/// `𝓡(e_i⊗e_j) = e_i⊗e_j / (ν_i - ν_j + δ_ij) + e_j⊗e_i (1 - 1/(ν_i - ν_j + δ_ij))`.
pub fn make_dyn_r(basis: &WeightBasis) -> Result<DynMat> {
    let n = basis.n;
    let ring = &basis.ring;
    let mut m = TensorMat::zero(n, 2, ring);
    for i in 1..=n {
        for j in 1..=n {
            let d = RatFunc::constant(ring, Rat::from_integer(((i == j) as i64).into()));
            let alpha = (&(&basis.nu(i) - &basis.nu(j)) + &d).inv()?;
            let beta = &RatFunc::one(ring) - &alpha;
            m.add_at(&[i, j], &[i, j], &alpha)?;
            m.add_at(&[j, i], &[i, j], &beta)?;
        }
    }
    DynMat::new(basis.clone(), m)
}

/// `A(e_i) = Σ_k e_k ⊗ ν_k^(i-1)`: entry `(k, i)` is `ν_k^(i-1)`.
pub fn make_a(basis: &WeightBasis) -> Result<DynMat> {
    let n = basis.n;
    let mut m = TensorMat::zero(n, 1, &basis.ring);
    for k in 1..=n {
        for i in 1..=n {
            m.set(&[k], &[i], basis.nu(k).pow(i as i32 - 1)?)?;
        }
    }
    DynMat::new(basis.clone(), m)
}

/// `Π_{k<l} (ν_l - ν_k)`.
pub fn vandermonde(basis: &WeightBasis) -> RatFunc {
    let mut acc = RatFunc::one(&basis.ring);
    for k in 1..=basis.n {
        for l in k + 1..=basis.n {
            acc = &acc * &(&basis.nu(l) - &basis.nu(k));
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    /// `M ⊗~ 1`: coefficients shifted by the weight of the last leg.
    Left,
    /// `1 ⊗~ M`: coefficients unchanged.
    Right,
}

/// Places an `l`-leg dynamical matrix on `l + 1` legs.
pub fn dyn_embed(m: &DynMat, placement: Placement, sign: Sign) -> Result<DynMat> {
    let basis = &m.basis;
    let n = basis.n;
    let l = m.matrix.legs();
    let mut out = TensorMat::zero(n, l + 1, &basis.ring);
    for e in m.matrix.entries() {
        for k in 1..=n {
            let (row, col, v) = match placement {
                Placement::Left => {
                    let mut row = e.row.clone();
                    let mut col = e.col.clone();
                    row.push(k);
                    col.push(k);
                    (row, col, basis.shift(&e.value, k, sign)?)
                }
                Placement::Right => {
                    let mut row = vec![k];
                    let mut col = vec![k];
                    row.extend(&e.row);
                    col.extend(&e.col);
                    (row, col, e.value.clone())
                }
            };
            out.set(&row, &col, v)?;
        }
    }
    DynMat::new(basis.clone(), out)
}

/// `M12 M23 M12 - M23 M12 M23`.
pub fn dbe_residual(m: &DynMat, sign: Sign) -> Result<Residual> {
    m.matrix.require_legs(2)?;
    let m12 = dyn_embed(m, Placement::Left, sign)?.matrix;
    let m23 = dyn_embed(m, Placement::Right, sign)?.matrix;
    let lhs = TensorMat::product(&[&m12, &m23, &m12])?;
    let rhs = TensorMat::product(&[&m23, &m12, &m23])?;
    Ok(Residual::new(lhs.sub(&rhs)?))
}

/// `R~ = R_p P` at `h = 1/n`, over the weight field.
pub fn r_tilde(basis: &WeightBasis) -> Result<TensorMat> {
    let n = basis.n;
    let h = RatFunc::constant(&Ctx::empty(), Rat::new(1.into(), (n as i64).into()));
    let r = make_rp_op(n, &h)?.restrict(n)?;
    r.mul(&TensorMat::swap(n, &Ctx::empty()))?.reembed(&basis.ring)
}

/// `A1 A2` with `A1 = A ⊗~ 1` and `A2 = 1 ⊗~ A`.
pub fn a1a2(basis: &WeightBasis, sign: Sign) -> Result<TensorMat> {
    let a = make_a(basis)?;
    let a1 = dyn_embed(&a, Placement::Left, sign)?;
    let a2 = dyn_embed(&a, Placement::Right, sign)?;
    Ok(a1.mul(&a2)?.matrix)
}

/// Residual of `Σ_{c,d} 𝓡^{ms}_{cd} (A^c_i)^{ν_d} A^d_j = Σ_{k,l} R~^{kl}_{ij} (A^m_k)^{ν_s} A^s_l`
/// over all `(m, s; i, j)`, where `𝓡^{ms}_{cd}` is the coefficient of
/// `e_c ⊗ e_d` in `𝓡(e_m ⊗ e_s)`. As matrices: `𝓡ᵀ (A1 A2) - (A1 A2) R~`.
pub fn vertex_irf_residual(basis: &WeightBasis, sign: Sign) -> Result<Residual> {
    let rr = make_dyn_r(basis)?.matrix.transpose();
    let aa = a1a2(basis, sign)?;
    let lhs = rr.mul(&aa)?;
    let rhs = aa.mul(&r_tilde(basis)?)?;
    Ok(Residual::new(lhs.sub(&rhs)?))
}
