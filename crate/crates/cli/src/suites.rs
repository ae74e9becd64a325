//! Verification suites. Each check records enough data in its witness to
//! replay a failure: the field, the basepoints and the group elements or
//! field elements involved.

use bloch_core::homcalc::{
    basepoints_compatible, choose_basepoints, cycle_image, cyclic_closed_form, cyclic_cycle, cyclic_h3_image,
    ell_part_oracle, generate_group, htheta, order_three, orbit, p_part, quaternion_basepoints,
    quaternion_generators, quaternion_h3_image, torus_element, verify_chain_map,
};
use bloch_core::projline::{moebius_act, points};
use bloch_core::{BlochContext, FieldSpec, Mode, PreBlochElem, ProjPoint, SL2Mat};
use clap::ValueEnum;
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Presentation,
    Homology,
    Ppart,
    Identity,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Presentation, Suite::Homology, Suite::Ppart, Suite::Identity];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Presentation => "presentation",
            Suite::Homology => "homology",
            Suite::Ppart => "ppart",
            Suite::Identity => "identity",
        }
    }

    /// Field sizes the suite runs over. The p-part table also covers
    /// `q = 2, 3`.
    pub fn range(self, qmax: u64) -> Vec<u64> {
        let lo = if self == Suite::Ppart { 2 } else { 4 };
        bloch_core::ffield::prime_powers(lo, qmax)
    }
}

pub struct Check {
    pub name: String,
    pub pass: bool,
    pub witness: Value,
}

impl Check {
    fn new(name: &str, pass: bool, witness: Value) -> Self {
        Check { name: name.to_string(), pass, witness }
    }

    pub fn to_json(&self) -> Value {
        json!({ "name": self.name, "pass": self.pass, "witness": self.witness })
    }
}

/// Nonzero `p`-parts of `H_k(SL_2(F_q), Z)` for `k <= 3`, each `Z/p`.
pub const CHAR_P_NONZERO: [(u32, u64); 11] =
    [(1, 2), (1, 3), (2, 4), (2, 9), (3, 2), (3, 3), (3, 4), (3, 5), (3, 8), (3, 9), (3, 27)];

pub fn point(f: &FieldSpec, p: ProjPoint) -> String {
    match p {
        ProjPoint::Infinity => "oo".into(),
        ProjPoint::Finite(x) => f.format(x),
    }
}

pub fn matrix(f: &FieldSpec, m: &SL2Mat) -> Value {
    json!([[f.format(m.a), f.format(m.b)], [f.format(m.c), f.format(m.d)]])
}

/// `(x, c)` pairs of an element, with coefficients `[c_1, c_u]` in
/// `Z[F^x/(F^x)^2]`.
pub fn element(f: &FieldSpec, e: &PreBlochElem) -> Value {
    Value::Array(e.terms().map(|(x, c)| json!([f.format(x), [c.c0, c.c1]])).collect())
}

fn order_of(g: &bloch_core::AbGroup) -> Option<u64> {
    (g.free_rank() == 0).then(|| g.factors_u64().iter().product())
}

pub fn run(suite: Suite, q: u64, bound: u64) -> Vec<Check> {
    let f = match FieldSpec::of_order_with_bound(q, bound) {
        Ok(f) => f,
        Err(e) => return vec![Check::new("field", false, json!({ "q": q, "error": e.to_string() }))],
    };
    if suite == Suite::Ppart {
        return ppart(&f);
    }
    let ctx = |mode| BlochContext::new(&f, mode);
    let (classical, refined) = match (ctx(Mode::Classical), ctx(Mode::Refined)) {
        (Ok(c), Ok(r)) => (c, r),
        (Err(e), _) | (_, Err(e)) => {
            return vec![Check::new("context", false, json!({ "q": q, "error": e.to_string() }))]
        }
    };
    match suite {
        Suite::Presentation => presentation(&classical, &refined),
        Suite::Homology => homology(&classical, &refined),
        Suite::Identity => identity(&classical),
        Suite::Ppart => unreachable!(),
    }
}

fn presentation(c: &BlochContext, r: &BlochContext) -> Vec<Check> {
    let f = c.field();
    let q = f.q() as u64;
    let odd = q % 2 == 1;
    let mut out = Vec::new();
    let p_order = order_of(c.pre_bloch());
    out.push(Check::new("order_P", p_order == Some(q + 1), json!({ "order": p_order, "expected": q + 1 })));
    let want_b = if odd { (q + 1) / 2 } else { q + 1 };
    let b_order = order_of(c.bloch());
    out.push(Check::new("order_B", b_order == Some(want_b), json!({ "order": b_order, "expected": want_b })));
    if q % 4 == 1 || q % 8 == 3 {
        let p = c.pre_bloch();
        out.push(Check::new(
            "cyclic_P",
            p.is_cyclic() && p_order == Some(q + 1),
            json!({ "factors": p.factors_u64() }),
        ));
    }
    out.push(Check::new(
        "refined_B_matches_B",
        r.bloch().same_structure(c.bloch()),
        json!({ "RB": r.bloch().factors_u64(), "B": c.bloch().factors_u64() }),
    ));
    let rank = r.pre_bloch().free_rank();
    let want_rank = usize::from(odd);
    out.push(Check::new("refined_free_rank", rank == want_rank, json!({ "rank": rank, "expected": want_rank })));
    let coker = r.coker_lambda();
    out.push(Check::new("coker_lambda_trivial", coker.is_trivial(), json!({ "factors": coker.factors_u64() })));
    for ctx in [c, r] {
        let (lam, moduli) = ctx.lambda_data();
        let bad = ctx.relation_rows().iter().enumerate().find_map(|(i, row)| {
            moduli.iter().enumerate().find_map(|(k, &m)| {
                let s: i64 = row.iter().map(|&(j, x)| x * lam.get_i64(j, k).unwrap()).sum();
                let ok = if m == 0 { s == 0 } else { s.rem_euclid(m as i64) == 0 };
                (!ok).then(|| json!({ "row": i, "entries": row, "component": k, "value": s }))
            })
        });
        let name = format!("lambda_vanishes_on_relations_{}", ctx.mode());
        let rows = ctx.relation_rows().len();
        out.push(Check::new(&name, bad.is_none(), bad.unwrap_or(json!({ "rows": rows }))));
    }
    out
}

fn identity(c: &BlochContext) -> Vec<Check> {
    let f = c.field();
    let q = f.q() as u64;
    let mut out = Vec::new();
    let m1 = c.minus_one();
    let sus_m1 = c.suslin_element(m1).unwrap();
    if q % 4 == 3 {
        let o = c.order_in_p(&c.symbol(m1).unwrap()).ok();
        out.push(Check::new("order_minus_one_P", o == Some(4), json!({ "order": o, "expected": 4 })));
        let o = c.order_in_b(&sus_m1).ok();
        out.push(Check::new("order_sus_minus_one_B", o == Some(2), json!({ "order": o, "expected": 2 })));
    }
    let sus = |x| c.suslin_element(x).unwrap();
    let bad_square = f.units().find(|&x| f.is_square(x).unwrap() && !c.is_zero_in_p(&sus(x)));
    out.push(Check::new(
        "suslin_vanishes_on_squares",
        bad_square.is_none(),
        json!({ "x": bad_square.map(|x| f.format(x)) }),
    ));
    let bad_two = f.units().find(|&x| !c.is_zero_in_p(&sus(x).scale(2)));
    out.push(Check::new("suslin_two_torsion", bad_two.is_none(), json!({ "x": bad_two.map(|x| f.format(x)) })));
    let cc = c.c();
    out.push(Check::new(
        "three_c_is_sus_minus_one",
        c.equal_in_p(&cc.scale(3), &sus_m1),
        json!({ "c": element(f, &cc) }),
    ));
    let bad_c = f.units().filter(|&x| x != f.one()).find(|&x| !c.equal_in_p(&c.constant_c(x).unwrap(), &cc));
    out.push(Check::new("c_independent_of_x", bad_c.is_none(), json!({ "x": bad_c.map(|x| f.format(x)) })));
    if q % 2 == 1 {
        let o = c.order_in_b(&cc).ok();
        let want = gcd(6, (q + 1) / 2);
        out.push(Check::new("order_c", o == Some(want), json!({ "order": o, "expected": want })));
    }
    let b = order_of(c.bloch()).unwrap_or(0);
    let lhs = if q % 2 == 1 { 2 * (q - 1) * b } else { (q - 1) * b };
    let oracle = ell_part_oracle(q, 3);
    out.push(Check::new(
        "exact_sequence",
        lhs == q * q - 1 && lhs == oracle,
        json!({ "lhs": lhs, "q2_minus_1": q * q - 1, "oracle": oracle }),
    ));
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn homology(c: &BlochContext, r: &BlochContext) -> Vec<Check> {
    let f = c.field();
    let q = f.q() as u64;
    let odd = q % 2 == 1;
    let mut out = Vec::new();
    let pts = |x: ProjPoint, y: ProjPoint| json!({ "q": q, "x": point(f, x), "y": point(f, y) });

    // order-3 element: image 4c in B, in both presentations
    let t3 = order_three(f);
    let g3 = generate_group(f, &[t3]);
    if let Ok((x, y)) = choose_basepoints(f, &g3, |_| true) {
        for ctx in [c, r] {
            let img = cyclic_h3_image(ctx, &t3, x, y);
            let ok = img.as_ref().is_ok_and(|e| ctx.in_bloch(e) && c.equal_in_p(&e.classical(), &c.c().scale(4)));
            let mut w = pts(x, y);
            w["t"] = matrix(f, &t3);
            if let Err(e) = &img {
                w["error"] = json!(e.to_string());
            }
            out.push(Check::new(&format!("order_three_image_{}", ctx.mode()), ok, w));
        }
        out.push(chain_map_check("chain_map_order_three", f, &[t3], x, y));
    }

    if odd {
        // torus element of order (q+1)/2
        let rr = (q + 1) / 2;
        let t = torus_element(&f.quadratic_extension(), rr).unwrap();
        let group = generate_group(f, &[t]);
        let pts_all = points(f);
        let x = pts_all.iter().copied().find(|&p| orbit(f, &group, p).len() < pts_all.len()).unwrap();
        let orb = orbit(f, &group, x);
        let y = *pts_all.iter().find(|p| !orb.contains(p)).unwrap();
        let img = cyclic_h3_image(c, &t, x, y);
        let order = img.as_ref().ok().and_then(|e| c.order_in_b(e).ok());
        let mut w = pts(x, y);
        w["t"] = matrix(f, &t);
        w["order"] = json!(order);
        w["expected"] = json!(rr);
        if let Err(e) = &img {
            w["error"] = json!(e.to_string());
            // the unguarded computation, for comparison
            w["unguarded_order"] =
                json!(cycle_image(c, &cyclic_cycle(f, &t), x, y).ok().and_then(|e| c.order_in_b(&e).ok()));
        }
        out.push(Check::new("torus_generator", order == Some(rr), w));

        // quaternion subgroup of order 8
        let (xg, yg) = quaternion_generators(f).unwrap();
        let q8 = generate_group(f, &[xg, yg]);
        let (x, y) = quaternion_basepoints(f, &q8).unwrap();
        for ctx in [c, r] {
            let img = quaternion_h3_image(ctx, &xg, &yg, 2, x, y);
            let want = if q % 4 == 3 { c.suslin_element(c.minus_one()).unwrap() } else { PreBlochElem::zero() };
            let ok = img.as_ref().is_ok_and(|e| ctx.in_bloch(e) && c.equal_in_p(&e.classical(), &want));
            let mut w = pts(x, y);
            w["X"] = matrix(f, &xg);
            w["Y"] = matrix(f, &yg);
            out.push(Check::new(&format!("quaternion_image_{}", ctx.mode()), ok, w));
        }
        out.push(chain_map_check("chain_map_q8", f, &[xg, yg], x, y));
    }

    if q % 4 == 1 {
        let h = htheta(c, &f.quadratic_extension()).unwrap();
        let o = c.order_in_p(&h).ok();
        out.push(Check::new("htheta_order", o == Some(q + 1), json!({ "order": o, "H_theta": element(f, &h) })));
    }

    // closed form at x = oo against the resolution
    let mut ts = vec![t3];
    if q % 4 == 1 {
        ts.push(torus_element(&f.quadratic_extension(), (q + 1) / 2).unwrap());
    }
    for t in ts {
        let group = generate_group(f, &[t]);
        let moves = |p: ProjPoint| moebius_act(f, &t, p) != p;
        if let Ok((ProjPoint::Infinity, y)) = choose_basepoints(f, &group, moves) {
            let a = cyclic_h3_image(c, &t, ProjPoint::Infinity, y);
            let b = cyclic_closed_form(c, &t, y);
            let ok = matches!((&a, &b), (Ok(a), Ok(b)) if c.equal_in_p(a, b));
            let mut w = pts(ProjPoint::Infinity, y);
            w["t"] = matrix(f, &t);
            out.push(Check::new(&format!("closed_form_order_{}", t.order(f)), ok, w));
        }
    }

    // basepoint independence of the order-3 image
    let orb_pairs: Vec<(ProjPoint, ProjPoint)> = points(f)
        .into_iter()
        .flat_map(|x| {
            let orb = orbit(f, &g3, x);
            points(f).into_iter().filter(move |y| !orb.contains(y)).map(move |y| (x, y))
        })
        .filter(|&(x, y)| basepoints_compatible(f, &g3, x, y))
        .take(6)
        .collect();
    let cyc = cyclic_cycle(f, &t3);
    let images: Vec<_> = orb_pairs.iter().map(|&(x, y)| cycle_image(c, &cyc, x, y).ok()).collect();
    let bad = images.iter().position(|e| match (e, &images[0]) {
        (Some(a), Some(b)) => !c.equal_in_p(a, b),
        _ => true,
    });
    let w = match bad {
        Some(i) => {
            let (x0, y0) = orb_pairs[0];
            let (x1, y1) = orb_pairs[i];
            json!({ "q": q, "first": [point(f, x0), point(f, y0)], "differs": [point(f, x1), point(f, y1)] })
        }
        None => json!({ "pairs": orb_pairs.len() }),
    };
    out.push(Check::new("basepoint_independence", bad.is_none(), w));
    out
}

fn chain_map_check(name: &str, f: &FieldSpec, gens: &[SL2Mat], x: ProjPoint, y: ProjPoint) -> Check {
    let group = generate_group(f, gens);
    let gens_json: Vec<Value> = gens.iter().map(|g| matrix(f, g)).collect();
    let mut w = json!({
        "q": f.q(),
        "x": point(f, x),
        "y": point(f, y),
        "generators": gens_json,
        "compatible": basepoints_compatible(f, &group, x, y),
    });
    match verify_chain_map(f, x, y, gens, 500) {
        Ok(rep) => {
            w["tuples"] = json!(rep.tuples_checked);
            if let Some(t) = &rep.counterexample {
                w["tuple"] = Value::Array(t.iter().map(|g| matrix(f, g)).collect());
            }
            Check::new(name, rep.passed(), w)
        }
        Err(e) => {
            w["error"] = json!(e.to_string());
            Check::new(name, false, w)
        }
    }
}

fn ppart(f: &FieldSpec) -> Vec<Check> {
    let q = f.q() as u64;
    let p = f.p() as u64;
    let mut out = Vec::new();
    for k in 1..=3 {
        let rep = match p_part(f, k) {
            Ok(r) => r,
            Err(e) => {
                out.push(Check::new(&format!("p_part_k{k}"), false, json!({ "error": e.to_string() })));
                continue;
            }
        };
        let factors = rep.group.factors_u64();
        let expected: Vec<u64> = if CHAR_P_NONZERO.contains(&(k, q)) { vec![p] } else { vec![] };
        out.push(Check::new(
            &format!("p_part_k{k}"),
            factors == expected,
            json!({ "q": q, "k": k, "factors": factors, "expected": expected }),
        ));
        if let Some(o) = rep.prime_field_oracle {
            let got: u64 = factors.iter().product();
            out.push(Check::new(
                &format!("p_part_period_k{k}"),
                got == o,
                json!({ "q": q, "k": k, "order": got, "period_oracle": o }),
            ));
        }
    }
    out
}
