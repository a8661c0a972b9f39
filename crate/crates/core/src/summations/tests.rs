use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::scalar::{cplx, one};
use crate::theta::theta_eval;

type C = Complex<f64>;

const CONDITION_CAP: f64 = 1e6;

fn rand_c(rng: &mut ChaCha8Rng) -> C {
    let m: f64 = rng.random_range(0.5..1.5);
    let ph: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    C::from_polar(m, ph)
}

fn rand_p(rng: &mut ChaCha8Rng, p_max: f64) -> C {
    let m: f64 = rng.random_range(0.05..p_max);
    let ph: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    C::from_polar(m, ph)
}

fn ctx(p: C) -> EllipticContext<f64> {
    EllipticContext::new(p, cplx(0.55, 0.35)).unwrap()
}

fn extent(id: IdentityId, n: &[i64]) -> Extent {
    if id.is_simplex() {
        Extent::Simplex(n.iter().sum())
    } else {
        Extent::Box(MultiIndex::new(n.to_vec()))
    }
}

fn draw(rng: &mut ChaCha8Rng, id: IdentityId, r: usize) -> Params<f64> {
    let free = id.free_param(r);
    let mut params = Params::new();
    for name in id.schema(r) {
        if Some(&name) != free.as_ref() {
            params.set(&name, rand_c(rng));
        }
    }
    params
}

fn instance(rng: &mut ChaCha8Rng, id: IdentityId, n: &[i64], c: &EllipticContext<f64>) -> IdentityInstance<f64> {
    let r = n.len();
    complete_params(id, r, extent(id, n), draw(rng, id, r), c).unwrap()
}

fn grid(id: IdentityId) -> Vec<Vec<i64>> {
    let all = vec![vec![0], vec![1], vec![3], vec![1, 1], vec![2, 1], vec![0, 2], vec![1, 1, 1], vec![2, 0, 1]];
    match id.fixed_dim() {
        Some(r) => all.into_iter().filter(|n| n.len() == r).collect(),
        None => all,
    }
}

/// Verifies `trials` well-conditioned draws, returning the worst error.
fn sweep(id: IdentityId, n: &[i64], p_zero: bool, trials: usize, tol: f64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    let mut attempts = 0;
    while done < trials {
        attempts += 1;
        assert!(attempts < 10 * trials + 20, "{} n={n:?}: too many rejected draws", id.name());
        let p = if p_zero { cplx(0.0, 0.0) } else { rand_p(&mut rng, 0.5) };
        let c = ctx(p);
        let inst = instance(&mut rng, id, n, &c);
        let v = verify(&inst, tol).unwrap();
        if v.status == Status::Degenerate || v.condition > CONDITION_CAP {
            continue;
        }
        assert_eq!(v.status, Status::Pass, "{} n={n:?} p={p} err={:e} cond={:e}", id.name(), v.rel_error, v.condition);
        worst = worst.max(v.rel_error);
        done += 1;
    }
    worst
}

#[test]
fn names_round_trip_and_are_unique() {
    let mut seen = std::collections::BTreeSet::new();
    for id in IdentityId::ALL {
        assert_eq!(IdentityId::parse(id.name()).unwrap(), id);
        assert!(seen.insert(id.name()));
    }
    assert_eq!(seen.len(), 16);
    assert!(matches!(IdentityId::parse("jackson"), Err(Error::Usage(_))));
}

#[test]
fn empty_extent_is_one_with_zero_error() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let c = ctx(cplx(0.2, 0.1));
    for id in IdentityId::ALL {
        for r in 1..=id.fixed_dim().unwrap_or(3) {
            let inst = instance(&mut rng, id, &vec![0; r], &c);
            assert_eq!(lhs(&inst).unwrap(), one(), "{}", id.name());
            let v = verify(&inst, 1e-8).unwrap();
            assert_eq!(v.status, Status::Pass);
            // Its closed form runs to N + 1 and is 1 only up to roundoff.
            if id == IdentityId::DrCubicSimplexA {
                assert!(v.rel_error < 1e-14, "r={r} rhs={}", v.rhs);
            } else {
                assert_eq!(v.rel_error, 0.0, "{} r={r} rhs={}", id.name(), v.rhs);
            }
        }
    }
}

#[test]
fn summand_at_origin_is_exactly_one() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let c = ctx(cplx(0.3, -0.2));
    for id in IdentityId::ALL {
        for n in grid(id) {
            let inst = instance(&mut rng, id, &n, &c);
            assert_eq!(summand(&inst, &MultiIndex::zeros(n.len())).unwrap(), one(), "{} n={n:?}", id.name());
        }
    }
}

#[test]
fn jackson_corner_cases() {
    for (id, n) in [
        (IdentityId::ArJackson, vec![1, 1, 1]),
        (IdentityId::CrJackson, vec![2, 1]),
    ] {
        sweep(id, &n, false, 5, 1e-8, 11);
    }
    sweep(IdentityId::NewArJackson, &[1, 1], false, 5, 1e-9, 12);
}

#[test]
fn jackson_free_parameter_is_solved() {
    let c = ctx(cplx(0.2, 0.1));
    let n = MultiIndex::new(vec![2, 1]);
    let (a, b, cc, d) = (cplx(0.9, 0.2), cplx(1.1, -0.3), cplx(0.7, 0.6), cplx(-0.8, 0.4));
    let x = [cplx(1.2, 0.1), cplx(0.6, -0.7)];
    let params = Params::new().with("a", a).with("b", b).with("c", cc).with("d", d).with_vec("x", &x);
    let inst = complete_params(IdentityId::ArJackson, 2, Extent::Box(n.clone()), params.clone(), &c).unwrap();
    let e = a * a * c.q_pow(4) / (b * cc * d);
    assert!((inst.params.get("e").unwrap() / e - 1.0).norm() < 1e-15);
    assert!(inst.params.get("x1").is_ok());

    let bad = params.clone().with("e", e * 1.001);
    assert!(matches!(
        complete_params(IdentityId::ArJackson, 2, Extent::Box(n.clone()), bad, &c),
        Err(Error::ConstraintViolation(_))
    ));
    let ok = params.clone().with("e", e);
    assert!(complete_params(IdentityId::ArJackson, 2, Extent::Box(n.clone()), ok, &c).is_ok());

    let partial = Params::new().with("a", a).with("b", b).with("c", cc).with_vec("x", &x);
    assert_eq!(
        complete_params(IdentityId::ArJackson, 2, Extent::Box(n), partial, &c).unwrap_err(),
        Error::MissingParameter("d".into())
    );
}

#[test]
fn quadratic_free_parameter_is_solved() {
    let c = ctx(cplx(0.1, 0.3));
    let n = MultiIndex::new(vec![1, 2]);
    let (a, b, cc) = (cplx(0.9, 0.2), cplx(1.1, -0.3), cplx(0.7, 0.6));
    let params = Params::new().with("a", a).with("b", b).with("c", cc).with_vec("x", &[cplx(1.0, 0.2), cplx(0.8, -0.4)]);
    let inst = complete_params(IdentityId::ArQuadraticI, 2, Extent::Box(n), params, &c).unwrap();
    let d = a * a * c.q_pow(7) / cc;
    assert!((inst.params.get("d").unwrap() / d - 1.0).norm() < 1e-15);
}

#[test]
fn unconstrained_ids_pass_through() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let c = ctx(cplx(0.2, 0.0));
    for id in IdentityId::ALL.into_iter().filter(|id| id.free_param(2).is_none()) {
        let r = id.fixed_dim().unwrap_or(2);
        let params = draw(&mut rng, id, r);
        let inst = complete_params(id, r, extent(id, &vec![1; r]), params.clone(), &c).unwrap();
        assert_eq!(inst.params, params, "{}", id.name());
    }
}

#[test]
fn extent_and_dimension_are_validated() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let c = ctx(cplx(0.2, 0.0));
    let params = draw(&mut rng, IdentityId::DrQuartic, 2);
    assert!(matches!(
        complete_params(IdentityId::DrQuartic, 2, Extent::Simplex(2), params.clone(), &c),
        Err(Error::Domain(_))
    ));
    assert!(matches!(
        complete_params(IdentityId::DrQuartic, 2, Extent::Box(MultiIndex::new(vec![1])), params, &c),
        Err(Error::Domain(_))
    ));
    let q1 = Params::new().with("a", cplx(0.9, 0.1));
    assert!(complete_params(IdentityId::QuarticR1, 2, Extent::Box(MultiIndex::new(vec![1, 1])), q1, &c).is_err());
    let zero = draw(&mut rng, IdentityId::DrQuadratic, 1).with("a", cplx(0.0, 0.0));
    assert!(complete_params(IdentityId::DrQuadratic, 1, Extent::Box(MultiIndex::new(vec![1])), zero, &c)
        .unwrap_err()
        .is_degenerate());
}

#[test]
fn parity_split_closed_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c = ctx(cplx(0.25, 0.1));
    for r in 1..=2 {
        let inst = complete_params(
            IdentityId::ArQuadraticIISimplex,
            r,
            Extent::Simplex(0),
            draw(&mut rng, IdentityId::ArQuadraticIISimplex, r),
            &c,
        )
        .unwrap();
        assert_eq!(rhs(&inst).unwrap(), one());
    }
    for id in [IdentityId::ArQuadraticISimplex, IdentityId::ArQuadraticIISimplex, IdentityId::DrQuadraticSimplex1] {
        for big_n in 1..=4 {
            sweep(id, &[big_n - 1, 1], false, 3, 1e-8, 20 + big_n as u64);
        }
    }
}

#[test]
fn catalog_holds_off_the_trigonometric_line() {
    for (i, id) in IdentityId::ALL.into_iter().enumerate() {
        if id == IdentityId::QuarticR1 {
            continue;
        }
        for n in grid(id) {
            sweep(id, &n, false, 3, 1e-8, 100 + i as u64);
        }
    }
}

#[test]
fn catalog_holds_at_zero_nome() {
    for (i, id) in IdentityId::ALL.into_iter().enumerate() {
        for n in grid(id) {
            sweep(id, &n, true, 3, 1e-10, 200 + i as u64);
        }
    }
}

#[test]
fn quartic_r1_matches_theorem_termwise_at_zero_nome() {
    let c = ctx(cplx(0.0, 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 1..=3 {
        let a = rand_c(&mut rng);
        let corner = Extent::Box(MultiIndex::new(vec![n]));
        let one_dim = complete_params(IdentityId::QuarticR1, 1, corner.clone(), Params::new().with("a", a), &c).unwrap();
        let theorem = complete_params(IdentityId::DrQuartic, 1, corner, Params::new().with("a", a).with("x1", one()), &c).unwrap();
        for k in 0..=n {
            let k = MultiIndex::new(vec![k]);
            let gap = relative_error(summand(&one_dim, &k).unwrap(), summand(&theorem, &k).unwrap());
            assert!(gap < 1e-11, "n={n} k={k} gap={gap:e}");
        }
    }
}

// `1/(q²;q², p)_k` in the one-dimensional display against
// `(−q²;q², p)_k/(q⁴;q⁴, p)_k` in the theorem at x₁ = 1. Since
// θ(z)θ(−z) = θ(z²; p²), the k = 1 ratio is θ(q⁴)/(θ(q²)θ(−q²)).
#[test]
fn quartic_r1_departs_from_theorem_off_the_trigonometric_line() {
    let c = ctx(cplx(0.2, 0.0));
    let q = c.q();
    let a = cplx(0.8, 0.3);
    let corner = Extent::Box(MultiIndex::new(vec![1]));
    let one_dim = complete_params(IdentityId::QuarticR1, 1, corner.clone(), Params::new().with("a", a), &c).unwrap();
    let theorem = complete_params(IdentityId::DrQuartic, 1, corner, Params::new().with("a", a).with("x1", one()), &c).unwrap();
    let k = MultiIndex::new(vec![1]);
    let ratio = summand(&one_dim, &k).unwrap() / summand(&theorem, &k).unwrap();
    let q2 = q * q;
    let expected = theta_eval(q2 * q2, &c).unwrap() / (theta_eval(q2, &c).unwrap() * theta_eval(-q2, &c).unwrap());
    assert!(relative_error(ratio, expected) < 1e-12, "ratio={ratio} expected={expected}");
    assert!((ratio - 1.0).norm() > 1e-3);
    assert!(verify(&theorem, 1e-8).unwrap().status == Status::Pass);
}

#[test]
fn box_identities_are_permutation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let c = ctx(cplx(0.2, -0.15));
    for id in IdentityId::ALL.into_iter().filter(|id| !id.is_simplex() && id.fixed_dim().is_none()) {
        let n = MultiIndex::new(vec![2, 0, 1]);
        let inst = instance(&mut rng, id, n.entries(), &c);
        let base = lhs(&inst).unwrap();
        let swapped_n = n.swapped(0, 2);
        let mut params = inst.params.clone();
        let (x1, x3) = (params.get("x1").unwrap(), params.get("x3").unwrap());
        params.set("x1", x3);
        params.set("x3", x1);
        let perm = complete_params(id, 3, Extent::Box(swapped_n), params, &c).unwrap();
        let gap = relative_error(base, lhs(&perm).unwrap());
        assert!(gap < 1e-10, "{} gap={gap:e}", id.name());
    }
}

fn pair_spec(rng: &mut ChaCha8Rng, pair: BaileyPair, r: usize, branch: SqrtBranch, bk_form: BkForm) -> BaileyPairSpec<f64> {
    let mut params = Params::new().with_vec("x", &(0..r).map(|_| rand_c(rng)).collect::<Vec<_>>());
    for s in pair.scalars() {
        if Some(*s) != pair.free_param() {
            params.set(s, rand_c(rng));
        }
    }
    BaileyPairSpec {
        derivation: pair,
        r,
        params,
        branch,
        bk_form,
    }
}

#[test]
fn bailey_pairs_vanish_at_origin() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let c = ctx(cplx(0.2, 0.1));
    for pair in BaileyPair::ALL {
        for r in 1..=2 {
            let spec = pair_spec(&mut rng, pair, r, SqrtBranch::Principal, BkForm::First).complete(&c).unwrap();
            assert_eq!(pair_a(&spec, &MultiIndex::zeros(r), &c).unwrap(), one());
            assert_eq!(pair_b(&spec, &MultiIndex::zeros(r), &c).unwrap(), one());
            assert_eq!(bailey_pair_residual(&spec, &MultiIndex::zeros(r), &c).unwrap(), 0.0, "{}", pair.name());
        }
    }
}

#[test]
fn bailey_pairs_hold_on_both_branches() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let c = ctx(cplx(0.2, 0.1));
    for pair in BaileyPair::ALL {
        for n in [vec![1], vec![4], vec![1, 1], vec![2, 1], vec![2, 2]] {
            for branch in [SqrtBranch::Principal, SqrtBranch::Negated] {
                for bk_form in [BkForm::First, BkForm::Second] {
                    let spec = pair_spec(&mut rng, pair, n.len(), branch, bk_form).complete(&c).unwrap();
                    let res = bailey_pair_residual(&spec, &MultiIndex::new(n.clone()), &c).unwrap();
                    assert!(res < 1e-9, "{} n={n:?} {branch:?} {bk_form:?} res={res:e}", pair.name());
                }
            }
        }
    }
}

#[test]
fn quartic_pair_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let c = ctx(cplx(-0.3, 0.2));
    for r in 1..=2 {
        let spec = pair_spec(&mut rng, BaileyPair::DrQuarticPair, r, SqrtBranch::Principal, BkForm::First).complete(&c).unwrap();
        for k in crate::multiindex::iterate_simplex(r, 4, false) {
            let gap = quartic_form_gap(&spec, &k, &c).unwrap();
            assert!(gap < 1e-10, "k={k} gap={gap:e}");
        }
    }
}

#[test]
fn quadratic_pair_constraint_is_checked() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let c = ctx(cplx(0.2, 0.1));
    let spec = pair_spec(&mut rng, BaileyPair::ArQuadraticIIPair, 2, SqrtBranch::Principal, BkForm::First);
    let done = spec.clone().complete(&c).unwrap();
    assert!(done.params.contains("c"));
    let bad = BaileyPairSpec {
        params: spec.params.clone().with("c", cplx(0.3, 0.3)),
        ..spec
    };
    assert!(matches!(bad.complete(&c), Err(Error::ConstraintViolation(_))));
}

#[test]
fn simplex_specializations_reduce_to_box() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let c = ctx(cplx(0.15, 0.25));
    for sp in SpecializationPair::ALL {
        for n in [vec![0], vec![2], vec![1, 1], vec![2, 1], vec![1, 2, 1]] {
            let mi = MultiIndex::new(n.clone());
            let mut params = Params::new();
            for name in sp.inputs(n.len()) {
                params.set(&name, rand_c(&mut rng));
            }
            for big_n in [mi.total(), mi.total() + 1] {
                let res = simplex_specialization_residual(sp, &mi, big_n, &params, &c).unwrap().rel_error;
                if big_n == 0 {
                    assert_eq!(res, 0.0);
                }
                assert!(res < 1e-9, "{} n={n:?} N={big_n} res={res:e}", sp.name());
            }
        }
    }
}
