//! Property tests for identities that cut across modules.

use std::sync::OnceLock;

use crate::ffield::prime_powers;
use crate::homcalc::{cross_ratio_image, Chain};
use crate::projline::{moebius_act, points};
use crate::{BlochContext, FieldElem, FieldSpec, Mode, PreBlochElem, ProjPoint, SL2Mat};
use proptest::prelude::*;

struct Fields {
    classical: Vec<BlochContext>,
    refined: Vec<BlochContext>,
}

fn fields() -> &'static Fields {
    static F: OnceLock<Fields> = OnceLock::new();
    F.get_or_init(|| {
        let specs: Vec<FieldSpec> =
            prime_powers(4, 32).into_iter().map(|q| FieldSpec::of_order(q).unwrap()).collect();
        Fields {
            classical: specs.iter().map(|f| BlochContext::new(f, Mode::Classical).unwrap()).collect(),
            refined: specs.iter().map(|f| BlochContext::new(f, Mode::Refined).unwrap()).collect(),
        }
    })
}

fn nfields() -> usize {
    prime_powers(4, 32).len()
}

fn unit(f: &FieldSpec, k: usize) -> FieldElem {
    f.pow(f.primitive(), (k % (f.q() as usize - 1)) as i64).unwrap()
}

fn distinct_points(f: &FieldSpec, picks: &[usize]) -> Vec<ProjPoint> {
    let mut pool = points(f);
    picks.iter().map(|&k| pool.remove(k % pool.len())).collect()
}

fn random_sl2(f: &FieldSpec, k: usize) -> SL2Mat {
    let all = SL2Mat::enumerate(f);
    all[k % all.len()].clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_axioms(i in 0..nfields(), a in any::<usize>(), b in any::<usize>(), c in any::<usize>()) {
        let f = fields().classical[i].field();
        let n = f.q() as usize;
        let e = f.elements();
        let (a, b, c) = (e[a % n], e[b % n], e[c % n]);
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        if !b.is_zero() {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        }
    }

    #[test]
    fn discrete_log_is_a_homomorphism(i in 0..nfields(), a in any::<usize>(), b in any::<usize>()) {
        let f = fields().classical[i].field();
        let (x, y) = (unit(f, a), unit(f, b));
        let m = f.q() - 1;
        let lhs = f.discrete_log(f.mul(x, y)).unwrap();
        let rhs = (f.discrete_log(x).unwrap() + f.discrete_log(y).unwrap()) % m;
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.pow(f.primitive(), lhs as i64).unwrap(), f.mul(x, y));
    }

    #[test]
    fn moebius_action_is_an_action(i in 0..nfields(), g in any::<usize>(), h in any::<usize>(), p in any::<usize>()) {
        let f = fields().classical[i].field();
        let (g, h) = (random_sl2(f, g), random_sl2(f, h));
        let x = distinct_points(f, &[p])[0];
        prop_assert_eq!(moebius_act(f, &g.mul(f, &h), x), moebius_act(f, &g, moebius_act(f, &h, x)));
        prop_assert_eq!(moebius_act(f, &g.inv(f), moebius_act(f, &g, x)), x);
    }

    #[test]
    fn cross_ratio_of_a_boundary_vanishes(i in 0..nfields(), picks in prop::collection::vec(any::<usize>(), 5)) {
        let ctx = &fields().refined[i];
        let f = ctx.field();
        let pts = distinct_points(f, &picks);
        let image = cross_ratio_image(f, &Chain::tuple(pts).boundary()).unwrap();
        prop_assert!(ctx.is_zero_in_p(&image));
        prop_assert!(fields().classical[i].is_zero_in_p(&image.classical()));
    }

    #[test]
    fn cross_ratio_is_sl2_invariant(i in 0..nfields(), picks in prop::collection::vec(any::<usize>(), 4), g in any::<usize>()) {
        let ctx = &fields().refined[i];
        let f = ctx.field();
        let pts = distinct_points(f, &picks);
        let g = random_sl2(f, g);
        let moved: Vec<ProjPoint> = pts.iter().map(|&x| moebius_act(f, &g, x)).collect();
        let a = cross_ratio_image(f, &Chain::tuple(pts)).unwrap();
        let b = cross_ratio_image(f, &Chain::tuple(moved)).unwrap();
        prop_assert!(ctx.equal_in_p(&a, &b));
    }

    #[test]
    fn suslin_element_is_additive(i in 0..nfields(), a in any::<usize>(), b in any::<usize>()) {
        let ctx = &fields().classical[i];
        let f = ctx.field();
        let (x, y) = (unit(f, a), unit(f, b));
        let lhs = ctx.suslin_element(f.mul(x, y)).unwrap();
        let rhs = &ctx.suslin_element(x).unwrap() + &ctx.suslin_element(y).unwrap();
        prop_assert!(ctx.equal_in_p(&lhs, &rhs));
    }

    #[test]
    fn lambda_kills_five_term_relations(i in 0..nfields(), a in any::<usize>(), b in any::<usize>()) {
        for ctx in [&fields().classical[i], &fields().refined[i]] {
            let f = ctx.field();
            let x = unit(f, a);
            let y = unit(f, b);
            if x == f.one() || y == f.one() || x == y {
                continue;
            }
            let r = crate::bloch::five_term(f, x, y).unwrap();
            let r = if ctx.mode() == Mode::Classical { r.classical() } else { r };
            prop_assert!(ctx.is_zero_in_p(&r));
            if ctx.mode() == Mode::Refined {
                prop_assert_eq!(ctx.lambda1(&r), 0);
            }
            prop_assert_eq!(ctx.lambda2(&r), 0);
        }
    }

    #[test]
    fn orders_divide_the_exponent(i in 0..nfields(), a in any::<usize>(), k in -5i64..5) {
        let ctx = &fields().classical[i];
        let f = ctx.field();
        let x = unit(f, a);
        if x == f.one() {
            return Ok(());
        }
        let e = ctx.symbol(x).unwrap().scale(k);
        let n = ctx.order_in_p(&e).unwrap();
        let exponent = *ctx.pre_bloch().factors_u64().last().unwrap();
        prop_assert_eq!(exponent % n, 0);
        prop_assert!(ctx.is_zero_in_p(&e.scale(n as i64)));
        prop_assert!(ctx.is_zero_in_p(&(&e - &e)));
        prop_assert!(ctx.equal_in_p(&(&e + &PreBlochElem::zero()), &e));
    }
}
