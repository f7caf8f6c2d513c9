//! Multivariate polynomial gcd over the rationals.
//!
//! Recursive content/primitive-part decomposition with a subresultant
//! pseudo-remainder sequence in a chosen main variable. Results are
//! normalized to leading coefficient 1.

use num_traits::{One, Zero};

use super::poly::MPoly;

pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    let ctx = a.ctx().clone();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MPoly::one(&ctx);
    }
    if a.is_monomial() || b.is_monomial() {
        let m = a.monomial_content().meet(&b.monomial_content());
        return MPoly::term(&ctx, m, One::one());
    }
    // Trial division settles the common case where one side is a factor.
    let (small, big) = if a.num_terms() <= b.num_terms() { (a, b) } else { (b, a) };
    if big.try_divide(small).is_some() {
        return small.monic();
    }

    // Factor out the shared monomial content first.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mshared = ma.meet(&mb);
    let a = if ma.is_one() { a.clone() } else { a.divide_exact(&MPoly::term(&ctx, ma, One::one())).unwrap() };
    let b = if mb.is_one() { b.clone() } else { b.divide_exact(&MPoly::term(&ctx, mb, One::one())).unwrap() };
    let g = gcd_nonmonomial(&a, &b);
    g.shift(&mshared).monic()
}

fn gcd_nonmonomial(a: &MPoly, b: &MPoly) -> MPoly {
    let ctx = a.ctx().clone();
    if a.is_constant() || b.is_constant() {
        return MPoly::one(&ctx);
    }
    let va = a.used_vars();
    let vb = b.used_vars();

    // A variable present in only one argument cannot appear in the gcd:
    // reduce that argument to its content with respect to the variable.
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd_with_coeffs(b, &a.to_univariate(v));
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd_with_coeffs(a, &b.to_univariate(v));
    }

    if va.len() == 1 {
        return univariate_euclid(a, b, va[0]);
    }

    // Main variable: the one of smallest combined degree keeps the
    // remainder sequence short.
    let v = *va
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v))
        .unwrap();
    let ua = a.to_univariate(v);
    let ub = b.to_univariate(v);
    let ca = content(&ua);
    let cb = content(&ub);
    let c = gcd(&ca, &cb);
    let pa = divide_coeffs(&ua, &ca);
    let pb = divide_coeffs(&ub, &cb);
    let last = subresultant(pa, pb);
    let g = if last.len() <= 1 {
        MPoly::one(&ctx)
    } else {
        let cl = content(&last);
        MPoly::from_univariate(&divide_coeffs(&last, &cl), v, &ctx)
    };
    (&c * &g).monic()
}

/// gcd of `p` with every polynomial in `coeffs`.
fn gcd_with_coeffs(p: &MPoly, coeffs: &[MPoly]) -> MPoly {
    let mut g = p.monic();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, c);
        if g.is_constant() {
            break;
        }
    }
    g
}

fn content(coeffs: &[MPoly]) -> MPoly {
    let ctx = coeffs[0].ctx().clone();
    let mut nz: Vec<&MPoly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    nz.sort_by_key(|c| (c.num_terms(), c.total_degree()));
    let mut g = MPoly::zero(&ctx);
    for c in nz {
        g = gcd(&g, c);
        if g.is_constant() {
            return MPoly::one(&ctx);
        }
    }
    if g.is_zero() {
        MPoly::one(&ctx)
    } else {
        g
    }
}

fn divide_coeffs(coeffs: &[MPoly], d: &MPoly) -> Vec<MPoly> {
    if d.is_one() {
        return coeffs.to_vec();
    }
    coeffs
        .iter()
        .map(|c| c.divide_exact(d).expect("content divides every coefficient"))
        .collect()
}

fn trim(p: &mut Vec<MPoly>) {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    if p.len() == 1 && p[0].is_zero() {
        p.clear();
    }
}

fn pseudo_rem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.to_vec();
    trim(&mut r);
    let mut e = a.len() as i64 - b.len() as i64 + 1;
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lr * bc);
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let f = lb.pow(e as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

/// Last nonzero element of the subresultant sequence of two primitive
/// polynomials (coefficient vectors, lowest degree first).
fn subresultant(a: Vec<MPoly>, b: Vec<MPoly>) -> Vec<MPoly> {
    let ctx = a[0].ctx().clone();
    let (mut a, mut b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut g = MPoly::one(&ctx);
    let mut h = MPoly::one(&ctx);
    loop {
        let delta = (a.len() - b.len()) as u32;
        let r = pseudo_rem(&a, &b);
        if r.is_empty() {
            return b;
        }
        if r.len() == 1 {
            return vec![MPoly::one(&ctx)];
        }
        a = b;
        let d = &g * &h.pow(delta);
        b = r.iter().map(|c| c.divide_exact(&d).expect("subresultant division")).collect();
        g = a.last().unwrap().clone();
        h = match delta {
            0 => h,
            1 => g.clone(),
            _ => g.pow(delta).divide_exact(&h.pow(delta - 1)).expect("subresultant h update"),
        };
    }
}

/// Euclid over Q for polynomials in a single variable.
fn univariate_euclid(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let ctx = a.ctx().clone();
    let to_vec = |p: &MPoly| -> Vec<num_rational::BigRational> {
        p.to_univariate(v).iter().map(|c| c.constant_term()).collect()
    };
    let mut x = to_vec(a);
    let mut y = to_vec(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        // x mod y
        let dy = y.len() - 1;
        let inv = y[dy].recip();
        while x.len() > dy {
            let dx = x.len() - 1;
            let c = &x[dx] * &inv;
            for i in 0..=dy {
                let t = &c * &y[i];
                x[dx - dy + i] -= t;
            }
            x.pop();
            while x.last().is_some_and(|c| c.is_zero()) {
                x.pop();
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    let coeffs: Vec<MPoly> = x.into_iter().map(|c| MPoly::constant(&ctx, c)).collect();
    MPoly::from_univariate(&coeffs, v, &ctx).monic()
}

pub fn lcm(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() || b.is_zero() {
        return MPoly::zero(a.ctx());
    }
    let g = gcd(a, b);
    (&a.divide_exact(&g).unwrap() * b).monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::context::Ctx;
    use crate::exact::rat::int;

    fn vars(c: &Ctx) -> Vec<MPoly> {
        c.vars().iter().map(|v| MPoly::var(c, v).unwrap()).collect()
    }

    #[test]
    fn univariate() {
        let c = Ctx::new(&["p"]);
        let p = &vars(&c)[0];
        let one = MPoly::one(&c);
        let a = &(&p.pow(3) - &one) * &(p + &one);
        let b = &(&p.pow(2) - &one) * &p.scale(&int(3));
        assert_eq!(gcd(&a, &b), &p.pow(2) - &one);
        assert_eq!(gcd(&(&p.pow(2) - &one), &(&p.pow(2) + &one)), one);
    }

    #[test]
    fn multivariate_common_factor() {
        let c = Ctx::new(&["x", "y", "z"]);
        let v = vars(&c);
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let one = MPoly::one(&c);
        let g = &(&(x * y) - &z.scale(&int(2))) + &one;
        let a = &g * &(&(x + y) + &(z * z));
        let b = &g * &(&(x * x) - &(y * z));
        let expect = g.monic();
        assert_eq!(gcd(&a, &b), expect);
        let c2 = &(x - y) * &(y - z);
        assert_eq!(gcd(&(&c2 * x), &(&c2 * &(x + &one))), c2.monic());
    }

    #[test]
    fn variable_in_one_argument_only() {
        let c = Ctx::new(&["x", "y"]);
        let v = vars(&c);
        let (x, y) = (&v[0], &v[1]);
        let one = MPoly::one(&c);
        let a = &(&(x * y) + x) * &(x + &one); // x (y + 1) (x + 1)
        let b = &(x + &one) * &(x - &one);
        assert_eq!(gcd(&a, &b), x + &one);
    }

    #[test]
    fn monomial_shortcut() {
        let c = Ctx::new(&["x", "y"]);
        let v = vars(&c);
        let (x, y) = (&v[0], &v[1]);
        let a = &(&x.pow(2) * y) + &x.pow(3);
        assert_eq!(gcd(&a, &(x * y).scale(&int(5))), x.clone());
    }
}
