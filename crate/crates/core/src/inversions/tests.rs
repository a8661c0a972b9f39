use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::scalar::cplx;

type C = Complex<f64>;

fn rand_c(rng: &mut ChaCha8Rng) -> C {
    let m: f64 = rng.random_range(0.5..1.5);
    let ph: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    C::from_polar(m, ph)
}

fn table(rng: &mut ChaCha8Rng, offset: i64, len: usize) -> Table<f64> {
    Table::new(offset, (0..len).map(|_| rand_c(rng)).collect())
}

fn oracle(rng: &mut ChaCha8Rng, r: usize, span: usize) -> TableOracle<f64> {
    let c = (0..r).map(|_| table(rng, -(span as i64), 3 * span + 1)).collect();
    TableOracle::new(Some(table(rng, -(span as i64), 3 * span + 1)), c).unwrap()
}

fn ctx(p: C) -> EllipticContext<f64> {
    EllipticContext::new(p, cplx(0.55, 0.35)).unwrap()
}

fn geom(rng: &mut ChaCha8Rng, m: i64, r: usize) -> GeomParams<f64> {
    GeomParams {
        m,
        a: rand_c(rng),
        x: (0..r).map(|_| rand_c(rng)).collect(),
    }
}

fn req(kind: &InversionKind<f64>, row: &[i64], col: &[i64], which: Which) -> MatrixEntryRequest<f64> {
    MatrixEntryRequest {
        kind: kind.clone(),
        row: MultiIndex::new(row.to_vec()),
        col: MultiIndex::new(col.to_vec()),
        which,
    }
}

fn general_kinds(rng: &mut ChaCha8Rng) -> Vec<InversionKind<f64>> {
    vec![
        InversionKind::GeneralAr,
        InversionKind::GeneralBCr,
        InversionKind::GeneralCr { b: rand_c(rng) },
    ]
}

fn seqs_for<'a>(kind: &InversionKind<f64>, o: &'a TableOracle<f64>, bare: &'a TableOracle<f64>) -> &'a dyn SequenceOracle<f64> {
    match kind {
        InversionKind::GeneralCr { .. } => bare,
        _ => o,
    }
}

#[test]
fn diagonal_is_one_and_upper_is_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let c = ctx(cplx(0.3, 0.0));
    let o = oracle(&mut rng, 2, 4);
    let bare = o.clone().without_a();
    let mut kinds = general_kinds(&mut rng);
    kinds.push(InversionKind::GeomArPos(geom(&mut rng, 2, 2)));
    kinds.push(InversionKind::GeomArNeg(geom(&mut rng, 1, 2)));
    kinds.push(InversionKind::GeomBCr(geom(&mut rng, 3, 2)));
    for kind in &kinds {
        let s = seqs_for(kind, &o, &bare);
        for which in [Which::Forward, Which::Inverse] {
            assert_eq!(entry(&req(kind, &[2, 1], &[2, 1], which), Some(s), &c).unwrap(), one());
        }
        for which in [Which::Forward, Which::Inverse, Which::ForwardNormalized, Which::InverseNormalized] {
            assert_eq!(entry(&req(kind, &[2, 1], &[1, 2], which), Some(s), &c).unwrap(), C::new(0.0, 0.0));
        }
    }
}

#[test]
fn general_delta_small_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let c = ctx(C::from_polar(0.3, 0.7));
    for r in 1..=3 {
        let o = oracle(&mut rng, r, 4);
        let bare = o.clone().without_a();
        let n = MultiIndex::new((0..r as i64).map(|i| 1 + i % 2).collect());
        for kind in general_kinds(&mut rng) {
            let s = seqs_for(&kind, &o, &bare);
            for l in iterate_box(&n) {
                for order in [Order::FG, Order::GF] {
                    let res = delta_residual(&kind, Some(s), &n, &l, order, &c).unwrap();
                    assert!(res.normalized() < 1e-9, "{:?} r={r} l={l} {order:?}: {}", kind.tag(), res.normalized());
                }
            }
        }
    }
}

#[test]
fn spec_examples_ar_and_cr() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = ctx(cplx(0.3, 0.0));
    let o = oracle(&mut rng, 2, 3);
    let res = delta_residual(&InversionKind::GeneralAr, Some(&o), &[1, 1].into(), &[0, 0].into(), Order::FG, &c).unwrap();
    assert!(res.normalized() < 1e-9);
    let bare = o.without_a();
    let cr = InversionKind::GeneralCr { b: rand_c(&mut rng) };
    let res = delta_residual(&cr, Some(&bare), &[2, 1].into(), &[0, 1].into(), Order::FG, &c).unwrap();
    assert!(res.normalized() < 1e-9);
}

#[test]
fn diagonal_residual_is_exactly_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let c = ctx(cplx(0.2, 0.1));
    let o = oracle(&mut rng, 2, 3);
    let n = MultiIndex::from([1, 2]);
    let res = delta_residual(&InversionKind::GeneralBCr, Some(&o), &n, &n, Order::FG, &c).unwrap();
    assert_eq!(res.normalized(), 0.0);
}

#[test]
fn translation_covariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c = ctx(C::from_polar(0.25, -1.1));
    let o = oracle(&mut rng, 2, 4);
    let bare = o.clone().without_a();
    let n = MultiIndex::from([2, 2]);
    let l = MultiIndex::from([1, 0]);
    for kind in general_kinds(&mut rng) {
        let s = seqs_for(&kind, &o, &bare);
        let shifted = ShiftedOracle::new(s, l.clone()).unwrap();
        let direct = delta_residual(&kind, Some(s), &n, &l, Order::FG, &c).unwrap();
        let moved = delta_residual(&kind, Some(&shifted), &(&n - &l), &MultiIndex::zeros(2), Order::FG, &c).unwrap();
        let gap = (direct.raw - moved.raw).norm() / direct.scale.max(moved.scale);
        assert!(gap < 1e-10, "{:?}: {gap}", kind.tag());
    }
}

#[test]
fn bcr_symmetric_under_inverting_c() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let c = ctx(C::from_polar(0.4, 0.3));
    let a = table(&mut rng, 0, 6);
    let cs: Vec<Table<f64>> = (0..2).map(|_| table(&mut rng, 0, 4)).collect();
    let inv: Vec<Table<f64>> = cs
        .iter()
        .map(|t| Table::new(t.offset, t.values.iter().map(|v| v.inv()).collect()))
        .collect();
    let o = TableOracle::new(Some(a.clone()), cs).unwrap();
    let oi = TableOracle::new(Some(a), inv).unwrap();
    let kind = InversionKind::GeneralBCr;
    for (row, col) in [([2, 1], [0, 0]), ([2, 3], [1, 1]), ([1, 2], [0, 2])] {
        for which in [Which::Forward, Which::Inverse] {
            let x = entry(&req(&kind, &row, &col, which), Some(&o), &c).unwrap();
            let y = entry(&req(&kind, &row, &col, which), Some(&oi), &c).unwrap();
            assert!(rel_diff(x, y) < 1e-12, "{row:?} {col:?} {which:?}");
        }
    }
}

#[test]
fn geometric_pairs_invert_and_link() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let c = ctx(C::from_polar(0.3, 2.0));
    for m in 1..=3 {
        for r in 1..=2 {
            let kinds = [
                InversionKind::GeomArPos(geom(&mut rng, m, r)),
                InversionKind::GeomArNeg(geom(&mut rng, m, r)),
                InversionKind::GeomBCr(geom(&mut rng, m, r)),
            ];
            let n = MultiIndex::new((0..r as i64).map(|i| 2 - i).collect());
            for kind in &kinds {
                for k in iterate_box(&n) {
                    let link = normalization_link(kind, &n, &k, &c).unwrap_or_else(|e| panic!("{:?} m={m} n={n} k={k}: {e}", kind));
                    assert!(link < 1e-10, "{:?} m={m} k={k}: {link}", kind.tag());
                }
                for k in iterate_box(&n) {
                    for order in [Order::FG, Order::GF] {
                        let res = delta_residual(kind, None, &n, &k, order, &c).unwrap();
                        assert!(res.normalized() < 1e-9, "{:?} m={m} k={k}", kind.tag());
                    }
                }
            }
        }
    }
}

#[test]
fn geometric_first_column_is_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let c = ctx(cplx(0.35, -0.1));
    let kinds = [
        InversionKind::GeomArPos(geom(&mut rng, 2, 2)),
        InversionKind::GeomArNeg(geom(&mut rng, 2, 2)),
        InversionKind::GeomBCr(geom(&mut rng, 2, 2)),
    ];
    for kind in &kinds {
        for which in [Which::ForwardNormalized, Which::InverseNormalized] {
            let v = entry(&req(kind, &[2, 1], &[0, 0], which), None, &c).unwrap();
            assert!((v - one::<f64>()).norm() < 1e-12, "{:?} {which:?}: {v}", kind.tag());
        }
    }
}

#[test]
fn vanishing_lemmas() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let c = ctx(C::from_polar(0.3, 0.4));
    for n in [vec![1], vec![2], vec![1, 1], vec![2, 1], vec![1, 1, 1], vec![0, 2, 1]] {
        let n = MultiIndex::new(n);
        let o = oracle(&mut rng, n.dim(), 4);
        let afg = vanishing_lemma_sum(Lemma::Afg, &n, &o, &c).unwrap();
        assert!(afg.normalized() < 1e-10, "afg {n}: {}", afg.normalized());
        let cfg = vanishing_lemma_sum(Lemma::Cfg { b: rand_c(&mut rng) }, &n, &o, &c).unwrap();
        assert!(cfg.normalized() < 1e-10, "cfg {n}: {}", cfg.normalized());
    }
}

#[test]
fn vanishing_lemma_rejects_zero_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let o = oracle(&mut rng, 2, 2);
    let c = ctx(cplx(0.1, 0.0));
    assert!(vanishing_lemma_sum(Lemma::Afg, &MultiIndex::zeros(2), &o, &c).is_err());
}

#[test]
fn oracle_requirements() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let o = oracle(&mut rng, 2, 2);
    let c = ctx(cplx(0.1, 0.0));
    let cr = InversionKind::GeneralCr { b: cplx(1.2, 0.0) };
    let e = entry(&req(&cr, &[1, 0], &[0, 0], Which::Forward), Some(&o), &c);
    assert!(matches!(e, Err(Error::InvalidOracle(_))));
    let e = entry(&req(&InversionKind::GeneralAr, &[1, 0], &[0, 0], Which::Forward), None, &c);
    assert!(matches!(e, Err(Error::MissingParameter(_))));
    let bare = o.without_a();
    let e = entry(&req(&InversionKind::GeneralAr, &[1, 0], &[0, 0], Which::Forward), Some(&bare), &c);
    assert!(matches!(e, Err(Error::MissingParameter(_))));
}

#[test]
fn ar_at_p_zero_reduces_to_rational_pair() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let c = ctx(C::new(0.0, 0.0));
    let len = 5;
    let a: Vec<C> = (0..len).map(|_| rand_c(&mut rng)).collect();
    let cs: Vec<C> = (0..len).map(|_| rand_c(&mut rng)).collect();
    let o = TableOracle::new(Some(Table::new(0, a.clone())), vec![Table::new(0, cs.clone())]).unwrap();
    let big_a: Vec<C> = a.iter().map(|v| v + v.inv()).collect();
    let big_c: Vec<C> = cs.iter().map(|v| v + v.inv()).collect();
    // u_n = ∏_{t<n} a_t / ∏_{t≤n} c_t
    let u = |n: usize| a[..n].iter().product::<C>() / cs[..=n].iter().product::<C>();
    for n in 0..len {
        for k in 0..=n {
            let f = entry(&req(&InversionKind::GeneralAr, &[n as i64], &[k as i64], Which::Forward), Some(&o), &c).unwrap();
            let fk = krattenthaler_f(&big_a, &big_c, n, k).unwrap() * u(n) / u(k);
            assert!(rel_diff(f, fk) < 1e-12, "f n={n} k={k}");
            let g = entry(&req(&InversionKind::GeneralAr, &[n as i64], &[k as i64], Which::Inverse), Some(&o), &c).unwrap();
            let gk = krattenthaler_g(&big_a, &big_c, n, k).unwrap() * u(n) / u(k);
            assert!(rel_diff(g, gk) < 1e-12, "g n={n} k={k}");
        }
    }
}

