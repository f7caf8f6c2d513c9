use ybe_core::constructors::*;
use ybe_core::exact::{int, Ctx, MPoly, Rat, RatFunc};
use ybe_core::{FieldOp, TensorMat};

fn choose(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    (1..=k).fold(1, |acc, t| acc * (n - k + t) / t)
}

fn wedge(m: &mut TensorMat, c: i64, (a, b): (usize, usize), (x, y): (usize, usize)) {
    let v = RatFunc::constant(m.ring(), int(c));
    m.add_at(&[a, x], &[b, y], &v).unwrap();
    m.add_at(&[x, a], &[y, b], &-&v).unwrap();
}

fn mono(op: &FieldOp, i: u32, j: u32) -> MPoly {
    let z1 = MPoly::var(op.ctx(), "z1").unwrap();
    let z2 = MPoly::var(op.ctx(), "z2").unwrap();
    &z1.pow(i) * &z2.pow(j)
}

#[test]
fn eta_values() {
    assert_eq!(eta(1, 3, 2), 1);
    assert_eq!(eta(3, 1, 2), -1);
    assert_eq!(eta(2, 2, 5), 0);
    assert_eq!(eta(1, 3, 3), 0);
    assert_eq!(eta(1, 3, 1), 1);
}

#[test]
fn su_operator() {
    let ring = Ctx::new(&["kappa"]);
    let kappa = RatFunc::var(&ring, "kappa").unwrap();
    let su = make_su_op(&kappa).unwrap();
    let z1 = su.z(0);
    let k = su.lift(&kappa).unwrap();
    assert_eq!(su.apply(&mono(&su, 1, 0)).unwrap(), &z1 + &k);
    assert_eq!(su.apply(&mono(&su, 1, 1)).unwrap(), RatFunc::from(mono(&su, 1, 1)));

    let zero = make_su_op(&RatFunc::zero(&Ctx::empty())).unwrap();
    assert_eq!(zero.restrict(3).unwrap(), TensorMat::identity(3, 2, &Ctx::empty()));
}

#[test]
fn rp_small_cases() {
    let h = RatFunc::var(&Ctx::new(&["h"]), "h").unwrap();
    assert_eq!(make_rp_op(1, &h).unwrap().restrict(1).unwrap(), TensorMat::identity(1, 2, h.ctx()));
    let r0 = make_rp_op(4, &RatFunc::zero(&Ctx::empty())).unwrap().restrict(4).unwrap();
    assert_eq!(r0, TensorMat::identity(4, 2, &Ctx::empty()));
}

#[test]
fn rp_formula_entry() {
    // (i,j) = (1,0) -> (a,b) = (0,0) at n = 2:
    // C(1,0)C(0,0) + 2 (-1)^1 C(1,1) C(0,0) η(0,1,0) = -1, times h.
    let bracket = choose(1, 0) * choose(0, 0) + 2 * -choose(1, 1) * choose(0, 0) * eta(0, 1, 0);
    assert_eq!(bracket, -1);
    let m = rp_matrix_formula(2).unwrap();
    let h = RatFunc::var(m.ring(), "h").unwrap();
    assert_eq!(m.get(&[1, 1], &[2, 1]), h.scale(&int(bracket)));
}

#[test]
fn rp_formula_at_zero_is_identity() {
    for n in 1..=5 {
        let m = rp_matrix_formula(n).unwrap().specialize("h", &int(0)).unwrap();
        assert_eq!(m, TensorMat::identity(n, 2, &Ctx::empty()), "n = {n}");
    }
}

#[test]
fn classical_rp_n2_action() {
    let r = classical_rp(2).unwrap();
    let ring = Ctx::empty();
    let mut want = TensorMat::zero(2, 2, &ring);
    wedge(&mut want, 1, (1, 1), (1, 2));
    wedge(&mut want, 1, (1, 2), (2, 2));
    assert_eq!(r, want);
    let one = RatFunc::one(&ring);
    // r(e2⊗e1) = -e1⊗e1, r(e1⊗e2) = e1⊗e1, r(e2⊗e2) = e1⊗e2 - e2⊗e1
    assert_eq!(r.get(&[1, 1], &[2, 1]), -&one);
    assert_eq!(r.get(&[1, 1], &[1, 2]), one);
    assert_eq!(r.get(&[1, 2], &[2, 2]), one);
    assert_eq!(r.get(&[2, 1], &[2, 2]), -&one);
    assert_eq!(r.nnz(), 4);
    assert!(classical_rp(1).unwrap().is_zero());
}

#[test]
fn classical_rp_is_first_order_term() {
    for n in 2..=5 {
        let f = rp_matrix_formula(n).unwrap();
        let hv = f.ring().require("h").unwrap();
        let d = f.map_into(&Ctx::empty(), |v| v.coeff_in(hv, 1).unwrap().reembed(&Ctx::empty())).unwrap();
        assert_eq!(d, classical_rp(n).unwrap(), "n = {n}");
    }
}

#[test]
fn bcg_n2_by_hand() {
    // 2 E12∧E22 + E11∧E12 + E22∧E12
    let mut want = TensorMat::zero(2, 2, &Ctx::empty());
    wedge(&mut want, 2, (1, 2), (2, 2));
    wedge(&mut want, 1, (1, 1), (1, 2));
    wedge(&mut want, 1, (2, 2), (1, 2));
    assert_eq!(b_cg(2).unwrap(), want);
    assert!(b_cg(1).unwrap().is_zero());
}

#[test]
fn phi_map_examples() {
    let ring = Ctx::empty();
    let mut e = TensorMat::zero(2, 2, &ring);
    e.set(&[1, 1], &[1, 1], RatFunc::one(&ring)).unwrap();
    let mut want = TensorMat::zero(2, 2, &ring);
    want.set(&[2, 2], &[2, 2], RatFunc::one(&ring)).unwrap();
    assert_eq!(phi_map(&e).unwrap(), want);
    for n in 1..=4 {
        let b = b_cg(n).unwrap();
        assert_eq!(phi_map(&phi_map(&b).unwrap()).unwrap(), b);
    }
}

#[test]
fn phi_bcg_ratio_n2() {
    let img = phi_map(&b_cg(2).unwrap()).unwrap();
    let r = classical_rp(2).unwrap();
    let mut ratio: Option<Rat> = None;
    for idx in 0..16 {
        let (row, col) = (idx / 4, idx % 4);
        let a = img.get_flat(row, col).constant_value().unwrap_or_default();
        let b = r.get_flat(row, col).constant_value().unwrap_or_default();
        if b == int(0) {
            assert_eq!(a, int(0));
            continue;
        }
        let q = a / b;
        assert!(ratio.as_ref().is_none_or(|r| *r == q));
        ratio = Some(q);
    }
    assert_eq!(ratio, Some(int(-1)));
}

fn pq_ring() -> (Ctx, RatFunc, RatFunc) {
    let ring = Ctx::new(&["p", "q"]);
    let p = RatFunc::var(&ring, "p").unwrap();
    let q = RatFunc::var(&ring, "q").unwrap();
    (ring, p, q)
}

#[test]
fn cg_small_cases() {
    let (ring, p, q) = pq_ring();
    let r1 = make_cg_op(&p, &q).unwrap().restrict(1).unwrap();
    assert_eq!(r1.get(&[1, 1], &[1, 1]), q);
    assert_eq!(r1.nnz(), 1);

    let r = make_cg_op(&p, &q).unwrap().restrict(3).unwrap();
    for i in 1..=3 {
        assert_eq!(r.get(&[i, i], &[i, i]), q);
    }

    let one = RatFunc::one(&ring);
    let d = make_cg_op(&p, &one).unwrap().restrict(3).unwrap();
    let mut want = TensorMat::zero(3, 2, &ring);
    for i in 0..3 {
        for j in 0..3 {
            want.set(&[i + 1, j + 1], &[i + 1, j + 1], p.pow(j as i32 - i as i32).unwrap()).unwrap();
        }
    }
    assert_eq!(d, want);
}

#[test]
fn hecke_to_mqybe_examples() {
    let (ring, p, q) = pq_ring();
    let qp = TensorMat::swap(3, &ring).scale(&q).unwrap();
    let (out, _) = hecke_to_mqybe(&qp, &q).unwrap();
    assert_eq!(out, TensorMat::swap(3, &ring));

    let one = RatFunc::one(&ring);
    let m = make_cg_op(&p, &one).unwrap().restrict(2).unwrap();
    let (out, lambda) = hecke_to_mqybe(&m, &one).unwrap();
    assert_eq!(out, m);
    assert!(lambda.is_zero());
}

#[test]
fn qp_matches_action_formula() {
    let n = 3usize;
    let ring = Ctx::new(&["p"]);
    let p = RatFunc::var(&ring, "p").unwrap();
    let pn = p.pow(n as i32).unwrap();
    let one = RatFunc::one(&ring);
    let c = (&pn - &one).checked_div(&(&pn + &one)).unwrap();
    let mut want = TensorMat::zero(n, 2, &ring);
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            let col = [i as usize + 1, j as usize + 1];
            want.add_at(&col, &col, &p.pow((j - i) as i32).unwrap()).unwrap();
            for k in 0..=i + j {
                let e = eta(i, j, k) + eta(i, j, k - 1);
                if e == 0 {
                    continue;
                }
                let row = [k as usize + 1, (i + j - k) as usize + 1];
                let v = (&c * &p.pow((j - k) as i32).unwrap()).scale(&int(-e));
                want.add_at(&row, &col, &v).unwrap();
            }
        }
    }
    assert_eq!(make_qp_op(n, &p).unwrap().restrict(n).unwrap(), want);
}

#[test]
fn qp_diagonal_and_limit() {
    let ring = Ctx::new(&["p"]);
    let p = RatFunc::var(&ring, "p").unwrap();
    for n in 2..=4 {
        let m = make_qp_op(n, &p).unwrap().restrict(n).unwrap();
        for i in 1..=n {
            let col = m.entries().filter(|e| e.col == [i, i]).collect::<Vec<_>>();
            assert_eq!(col.len(), 1);
            assert_eq!(col[0].row, [i, i]);
            assert!(col[0].value.is_one());
        }
        assert_eq!(m.specialize("p", &int(1)).unwrap(), TensorMat::identity(n, 2, &Ctx::empty()));
    }
}

#[test]
fn boundary_at_h_zero_is_qp() {
    let ring = Ctx::new(&["p"]);
    let p = RatFunc::var(&ring, "p").unwrap();
    for n in 2..=3 {
        let b = make_boundary_op(n, &p, &RatFunc::zero(&ring)).unwrap();
        let q = make_qp_op(n, &p).unwrap();
        assert!(b.equals_on_box(&q, FieldOp::equality_bound(n)).unwrap(), "n = {n}");
    }
}

#[test]
fn boundary_denominators_regular_at_one() {
    let ring = Ctx::new(&["p", "h"]);
    let p = RatFunc::var(&ring, "p").unwrap();
    let h = RatFunc::var(&ring, "h").unwrap();
    for n in 1..=4 {
        let b = make_boundary_op(n, &p, &h).unwrap().restrict(n).unwrap();
        assert!(b.specialize("p", &int(1)).is_ok(), "n = {n}");
    }
}
