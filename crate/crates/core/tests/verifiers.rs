use ybe_core::constructors::*;
use ybe_core::exact::{int, Ctx, MPoly, RatFunc};
use ybe_core::verifiers::*;
use ybe_core::{Error, FieldOp, TensorMat};

type Dense = Vec<Vec<i64>>;

fn dense_id(d: usize) -> Dense {
    (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect()
}

fn dense_kron(a: &Dense, b: &Dense) -> Dense {
    let (m, n) = (a.len(), b.len());
    let mut out = vec![vec![0; m * n]; m * n];
    for i in 0..m {
        for j in 0..m {
            for k in 0..n {
                for l in 0..n {
                    out[i * n + k][j * n + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let d = a.len();
    (0..d).map(|i| (0..d).map(|j| (0..d).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn unit(i: usize, j: usize) -> Dense {
    let mut m = vec![vec![0; 2]; 2];
    m[i][j] = 1;
    m
}

/// `R12 R13 R23 - R23 R13 R12` for `R = I + x⊗y` at `n = 2`, by hand.
fn dense_ybe(x: &Dense, y: &Dense) -> Dense {
    let id = dense_id(2);
    let plus_id = |m: Dense| {
        let mut m = m;
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += 1;
        }
        m
    };
    let r12 = plus_id(dense_kron(&dense_kron(x, y), &id));
    let r13 = plus_id(dense_kron(&dense_kron(x, &id), y));
    let r23 = plus_id(dense_kron(&dense_kron(&id, x), y));
    let l = dense_mul(&dense_mul(&r12, &r13), &r23);
    let r = dense_mul(&dense_mul(&r23, &r13), &r12);
    (0..8).map(|i| (0..8).map(|j| l[i][j] - r[i][j]).collect()).collect()
}

fn id_plus(a: (usize, usize), b: (usize, usize)) -> TensorMat {
    let ring = Ctx::empty();
    let mut m = TensorMat::identity(2, 2, &ring);
    m.add_at(&[a.0, b.0], &[a.1, b.1], &RatFunc::one(&ring)).unwrap();
    m
}

#[test]
fn qybe_identity_and_rp() {
    assert!(qybe_residual(&TensorMat::identity(3, 2, &Ctx::empty())).unwrap().is_zero);
    let h = RatFunc::var(&Ctx::new(&["h"]), "h").unwrap();
    for n in 2..=3 {
        let m = make_rp_op(n, &h).unwrap().restrict(n).unwrap();
        assert!(qybe_residual(&m).unwrap().is_zero, "n = {n}");
    }
}

#[test]
fn commuting_square_zero_perturbation_is_a_solution() {
    // I + E12⊗E12: all three embeddings commute, so both sides agree.
    let dense = dense_ybe(&unit(0, 1), &unit(0, 1));
    assert!(dense.iter().flatten().all(|&v| v == 0));
    assert!(qybe_residual(&id_plus((1, 2), (1, 2))).unwrap().is_zero);
}

#[test]
fn qybe_non_solution_witness() {
    let dense = dense_ybe(&unit(0, 1), &unit(1, 0));
    let first = (0..64).find(|&k| dense[k / 8][k % 8] != 0).unwrap();
    let r = qybe_residual(&id_plus((1, 2), (2, 1))).unwrap();
    assert!(!r.is_zero);
    let w = r.witness.unwrap();
    let flat = |idx: &[usize]| idx.iter().fold(0, |acc, &i| acc * 2 + i - 1);
    assert_eq!((flat(&w.row), flat(&w.col)), (first / 8, first % 8));
    assert_eq!(w.value.constant_value(), Some(int(dense[first / 8][first % 8])));
    let nonzero = dense.iter().flatten().filter(|&&v| v != 0).count();
    assert_eq!(r.matrix.nnz(), nonzero);
}

#[test]
fn mqybe_with_zero_lambda_is_qybe() {
    let ring = Ctx::new(&["p", "q"]);
    let p = RatFunc::var(&ring, "p").unwrap();
    let q = RatFunc::var(&ring, "q").unwrap();
    for m in [make_cg_op(&p, &q).unwrap().restrict(2).unwrap(), id_plus((1, 2), (2, 1)).reembed(&ring).unwrap()] {
        let a = qybe_residual(&m).unwrap();
        let b = mqybe_residual(&m, &RatFunc::zero(&ring)).unwrap();
        assert_eq!(a.matrix, b.matrix);
    }
}

#[test]
fn mqybe_qp() {
    let ring = Ctx::new(&["p"]);
    let p = RatFunc::var(&ring, "p").unwrap();
    let one = RatFunc::one(&ring);
    let n = 2;
    let pn = p.pow(n as i32).unwrap();
    let lambda = (&(&one - &pn) * &(&one - &pn)).checked_div(&(&(&one + &pn) * &(&one + &pn))).unwrap();
    let m = make_qp_op(n, &p).unwrap().restrict(n).unwrap();
    assert!(mqybe_residual(&m, &lambda).unwrap().is_zero);
    assert!(!mqybe_residual(&m, &RatFunc::zero(&ring)).unwrap().is_zero);
}

#[test]
fn cybe_cases() {
    assert!(cybe_residual(&TensorMat::zero(3, 2, &Ctx::empty()), &RatFunc::zero(&Ctx::empty())).unwrap().is_zero);
    for n in 2..=4 {
        let zero = RatFunc::zero(&Ctx::empty());
        assert!(cybe_residual(&classical_rp(n).unwrap(), &zero).unwrap().is_zero);
        assert!(cybe_residual(&b_cg(n).unwrap(), &zero).unwrap().is_zero);
    }
    // E12⊗E21 has [r12, r13] + ... ≠ 0
    let ring = Ctx::empty();
    let mut r = TensorMat::zero(2, 2, &ring);
    r.set(&[1, 2], &[2, 1], RatFunc::one(&ring)).unwrap();
    assert!(!cybe_residual(&r, &RatFunc::zero(&ring)).unwrap().is_zero);
}

#[test]
fn hecke_cases() {
    let ring = Ctx::new(&["p", "q"]);
    let p = RatFunc::var(&ring, "p").unwrap();
    let q = RatFunc::var(&ring, "q").unwrap();
    let qp = TensorMat::swap(2, &ring).scale(&q).unwrap();
    assert!(hecke_residual(&qp, &q).unwrap().is_zero);
    let r = hecke_residual(&TensorMat::identity(2, 2, &ring), &q).unwrap();
    assert!(!r.is_zero);
    // (P - q)(P + 1/q) = I + (1/q - q) P - I = (1/q - q) P on e1⊗e1
    let w = r.witness.unwrap();
    assert_eq!((w.row, w.col), (vec![1, 1], vec![1, 1]));
    assert_eq!(w.value, &q.inv().unwrap() - &q);
    let cg = make_cg_op(&p, &q).unwrap().restrict(2).unwrap();
    assert!(hecke_residual(&cg, &q).unwrap().is_zero);
}

#[test]
fn unitarity_cases() {
    let ring = Ctx::new(&["p"]);
    assert!(unitarity_residual(&TensorMat::swap(3, &ring)).unwrap().is_zero);
    let two = TensorMat::identity(2, 2, &ring).scale_rat(&int(2));
    let r = unitarity_residual(&two).unwrap();
    assert_eq!(r.witness.unwrap().value.constant_value(), Some(int(3)));
    let p = RatFunc::var(&ring, "p").unwrap();
    let qp = make_qp_op(2, &p).unwrap().restrict(2).unwrap();
    assert!(unitarity_residual(&qp).unwrap().is_zero);
}

#[test]
fn hecke_output_is_unitary() {
    let ring = Ctx::new(&["p", "q"]);
    let p = RatFunc::var(&ring, "p").unwrap();
    let q = RatFunc::var(&ring, "q").unwrap();
    let cg = make_cg_op(&p, &q).unwrap().restrict(2).unwrap();
    let (m, _) = hecke_to_mqybe(&cg, &q).unwrap();
    assert!(unitarity_residual(&m).unwrap().is_zero);
}

#[test]
fn semiclassical_cases() {
    let ring = Ctx::new(&["h"]);
    let h = RatFunc::var(&ring, "h").unwrap();
    let m = make_rp_op(3, &h).unwrap().restrict(3).unwrap();
    let (o0, o1) = semiclassical(&m).unwrap();
    assert_eq!(o0, TensorMat::identity(3, 2, &Ctx::empty()));
    assert_eq!(o1, classical_rp(3).unwrap());

    let (o0, o1) = semiclassical(&TensorMat::identity(2, 2, &ring)).unwrap();
    assert_eq!(o0, TensorMat::identity(2, 2, &Ctx::empty()));
    assert!(o1.is_zero());

    let mut bad = TensorMat::identity(2, 2, &ring);
    bad.set(&[1, 2], &[1, 2], (&RatFunc::one(&ring) + &h).inv().unwrap()).unwrap();
    assert!(matches!(semiclassical(&bad), Err(Error::NotPolynomialIn { .. })));
}

#[test]
fn nilpotent_and_exponential() {
    for n in 1..=4 {
        assert!(nilpotent_residual(n).unwrap().is_zero);
        assert!(exponential_residual(n).unwrap().is_zero);
    }
}

#[test]
fn similarity_and_perturbation() {
    assert!(similarity_check(2, None).unwrap().is_zero);
    let r = similarity_check(2, Some(&int(1))).unwrap();
    assert!(!r.is_zero);

    // Both sides applied to z1, with t shifted by 1.
    let ring = Ctx::new(&["p", "h"]);
    let p = RatFunc::var(&ring, "p").unwrap();
    let h = RatFunc::var(&ring, "h").unwrap();
    let t = &h.checked_div(&(&p - &RatFunc::one(&ring))).unwrap() + &RatFunc::one(&ring);
    let phi = diagonal_shift(&t).unwrap();
    let lhs = phi.compose(&make_qp_op(2, &p).unwrap()).unwrap().compose(&phi.inverse().unwrap()).unwrap();
    let rhs = make_boundary_op(2, &p, &h).unwrap();
    let z1 = MPoly::var(lhs.ctx(), "z1").unwrap();
    assert_ne!(lhs.apply(&z1).unwrap(), rhs.apply(&z1).unwrap());
}

#[test]
fn boundary_limit_small() {
    for n in 1..=3 {
        assert!(boundary_limit(n).unwrap().is_zero, "n = {n}");
    }
}

#[test]
fn embedding_consistency() {
    let h = RatFunc::var(&Ctx::new(&["h"]), "h").unwrap();
    let op = make_rp_op(2, &h).unwrap();
    let m = op.restrict(2).unwrap();
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        let lifted = op.embed_leg(a, b, 3).unwrap().restrict(2).unwrap();
        assert_eq!(lifted, m.embed(a, b, 3).unwrap(), "legs {a}{b}");
    }
}

#[test]
fn twist_relations() {
    for (name, r) in twist_lemma(FieldOp::equality_bound(2)).unwrap() {
        assert!(r.is_zero, "{name}");
    }
    let f = shift_twist(&RatFunc::var(&Ctx::new(&["p"]), "p").unwrap()).unwrap();
    assert!(!operator_residual(&f, &f.inverse().unwrap(), 3).unwrap().is_zero);
}

#[test]
fn formula_and_bcg_links() {
    for n in 1..=3 {
        assert!(formula_vs_operator(n).unwrap().is_zero);
    }
    let (c, r) = bcg_vs_rp(3).unwrap();
    assert_eq!(c, Some(int(-1)));
    assert!(r.is_zero);
    assert_eq!(bcg_vs_rp(1).unwrap().0, None);
}

#[test]
fn lambda_has_valuation_two() {
    for n in 1..=4 {
        assert_eq!(lambda_valuation(n).unwrap(), Some(2));
    }
}

#[test]
fn report_shape() {
    let r = qybe_residual(&id_plus((1, 2), (2, 1))).unwrap().report();
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["zero"], false);
    assert_eq!(v["legs"], 3);
    assert_eq!(v["witness"]["value"], "-1");
}
