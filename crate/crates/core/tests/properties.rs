use fracineq::funcmodel::{certify_s_convex, parse_function, FunctionModel, PowerTerm};
use fracineq::hh::{self, Evaluator, ProblemInstance, TheoremId};
use fracineq::quad::{integrate_plain, QuadratureConfig};
use fracineq::rlint::{rl_left, rl_power_rule_oracle, rl_right};
use fracineq::specfun::beta;
use proptest::prelude::*;

const ALPHAS: [f64; 7] = [0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0];

fn domain() -> impl Strategy<Value = (f64, f64)> {
    (-2.0..1.0f64, 0.1..3.0f64).prop_map(|(lo, w)| (lo, lo + w))
}

/// Terms valid on [lo, hi]; non-integer exponents sit at least `gap` left of lo.
fn model(gap: f64) -> impl Strategy<Value = FunctionModel> {
    domain().prop_flat_map(move |(lo, hi)| {
        let term = (
            -5.0..5.0f64,
            prop::sample::select(vec![0.0f64, 1.0, 2.0, 3.0, 0.5, 1.5, 2.5]),
            0.0..1.5f64,
            -3.0..3.0f64,
        )
            .prop_map(move |(c, e, back, free)| {
                let shift = if e.fract() == 0.0 { free } else { lo - gap - back };
                PowerTerm::new(c, shift, e)
            });
        prop::collection::vec(term, 1..4)
            .prop_map(move |terms| FunctionModel::new(terms, lo, hi).expect("valid by construction"))
    })
}

fn left_anchored(a: f64, b: f64) -> impl Strategy<Value = FunctionModel> {
    let term = (-3.0..3.0f64, prop::sample::select(vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0]))
        .prop_map(move |(c, e)| PowerTerm::new(c, a, e));
    prop::collection::vec(term, 1..4).prop_map(move |t| FunctionModel::new(t, a, b).unwrap())
}

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol * (1.0 + want.abs())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn parser_round_trip(m in model(0.0)) {
        let text = m.to_string();
        let back = parse_function(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn derivative_matches_central_difference(m in model(0.05)) {
        let d = m.derivative().unwrap();
        let h = 1e-6;
        let (lo, hi) = (m.lo(), m.hi());
        for i in 1..=100 {
            let u = lo + (hi - lo) * i as f64 / 101.0;
            let fd = (m.evaluate(u + h).unwrap() - m.evaluate(u - h).unwrap()) / (2.0 * h);
            let exact = d.evaluate(u).unwrap();
            prop_assert!((fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()), "u={} fd={} exact={}", u, fd, exact);
        }
    }

    #[test]
    fn certification_is_deterministic(m in model(0.05), s in 0.1..1.0f64, seed in 0u64..1000) {
        let r1 = certify_s_convex(&m, s, 3000, seed).unwrap();
        let r2 = certify_s_convex(&m, s, 3000, seed).unwrap();
        prop_assert_eq!(r1, r2);
    }

    #[test]
    fn beta_matches_direct_integral(x in 0.5..5.0f64, y in 0.5..5.0f64) {
        // t = w^(1/x) on [0, 1/2] and 1 - t = w^(1/y) on [1/2, 1] absorb the
        // endpoint singularities.
        let cfg = QuadratureConfig::reference();
        let left = integrate_plain(|w| (1.0 - w.powf(1.0 / x)).powf(y - 1.0), 0.0, 0.5f64.powf(x), &cfg).unwrap();
        let right = integrate_plain(|w| (1.0 - w.powf(1.0 / y)).powf(x - 1.0), 0.0, 0.5f64.powf(y), &cfg).unwrap();
        let direct = left.value / x + right.value / y;
        let b = beta(x, y).unwrap();
        prop_assert!((b - direct).abs() <= 1e-9 * b, "beta({}, {}) = {} vs {}", x, y, b, direct);
    }

    #[test]
    fn rl_left_matches_summed_power_rule(
        a in -1.0..1.0f64,
        w in 0.2..2.0f64,
        seed_model in left_anchored(0.0, 1.0),
        ai in 0usize..7,
    ) {
        let alpha = ALPHAS[ai];
        let b = a + w;
        let terms: Vec<PowerTerm> = seed_model.terms().iter().map(|t| PowerTerm::new(t.coeff, a, t.exponent)).collect();
        let f = FunctionModel::new(terms.clone(), a, b).unwrap();
        let cfg = QuadratureConfig { abs_tol: 1e-30, ..QuadratureConfig::default() };
        for k in 1..=9 {
            let x = if k == 9 { b } else { a + w * k as f64 / 9.0 };
            let got = rl_left(&f, a, alpha, x, &cfg).unwrap();
            let want: f64 = terms.iter().map(|t| rl_power_rule_oracle(t, a, alpha, x).unwrap()).sum();
            prop_assert!((got - want).abs() <= 1e-9 * (1.0 + want.abs()), "x={} {} vs {}", x, got, want);
        }
    }

    #[test]
    fn order_one_is_the_plain_integral(m in model(0.05), frac in 0.05..1.0f64) {
        let cfg = QuadratureConfig::default();
        let (a, b) = (m.lo(), m.hi());
        let x = a + frac * (b - a);
        let rl = rl_left(&m, a, 1.0, x, &cfg).unwrap();
        let plain = integrate_plain(|t| m.evaluate(t).unwrap(), a, x, &QuadratureConfig::reference()).unwrap().value;
        let scale: f64 = integrate_plain(|t| m.evaluate(t).unwrap().abs(), a, x, &cfg).unwrap().value;
        prop_assert!((rl - plain).abs() <= 1e-10 * plain.abs().max(scale), "{} vs {}", rl, plain);
    }

    #[test]
    fn rl_is_linear(
        f1 in left_anchored(0.0, 1.0),
        f2 in left_anchored(0.0, 1.0),
        c1 in -3.0..3.0f64,
        c2 in -3.0..3.0f64,
        ai in 0usize..7,
        x in 0.05..1.0f64,
    ) {
        let alpha = ALPHAS[ai];
        let cfg = QuadratureConfig::default();
        let scaled = |f: &FunctionModel, c: f64| -> Vec<PowerTerm> {
            f.terms().iter().map(|t| PowerTerm::new(c * t.coeff, t.shift, t.exponent)).collect()
        };
        let combo = FunctionModel::new([scaled(&f1, c1), scaled(&f2, c2)].concat(), 0.0, 1.0).unwrap();
        let lhs = rl_left(&combo, 0.0, alpha, x, &cfg).unwrap();
        let r1 = rl_left(&f1, 0.0, alpha, x, &cfg).unwrap();
        let r2 = rl_left(&f2, 0.0, alpha, x, &cfg).unwrap();
        let rhs = c1 * r1 + c2 * r2;
        let budget = 1e-9 * (1.0 + (c1 * r1).abs() + (c2 * r2).abs());
        prop_assert!((lhs - rhs).abs() <= budget, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn even_functions_have_mirror_symmetric_integrals(
        (a, b) in domain(),
        c0 in -3.0..3.0f64,
        c2 in -3.0..3.0f64,
        c4 in -3.0..3.0f64,
        ai in 0usize..7,
    ) {
        let alpha = ALPHAS[ai];
        let m = 0.5 * (a + b);
        let f = FunctionModel::new(
            vec![PowerTerm::new(c0, m, 0.0), PowerTerm::new(c2, m, 2.0), PowerTerm::new(c4, m, 4.0)],
            a,
            b,
        )
        .unwrap();
        let cfg = QuadratureConfig::default();
        let left = rl_left(&f, a, alpha, b, &cfg).unwrap();
        let right = rl_right(&f, b, alpha, a, &cfg).unwrap();
        prop_assert!(close(left, right, 1e-10), "{} vs {}", left, right);
    }

    #[test]
    fn certified_instances_never_violate(
        m in model(0.05),
        frac in 0.0..=1.0f64,
        ai in 0usize..7,
        si in 0usize..4,
        q in 1.2..4.0f64,
    ) {
        let ev = Evaluator::new(QuadratureConfig::default(), fracineq::funcmodel::CertifyConfig { samples: 4000, seed: 1 });
        let (a, b) = (m.lo(), m.hi());
        let s = [0.25, 0.5, 0.75, 1.0][si];
        let x = a + frac * (b - a);
        let inst = ProblemInstance::new(m.clone(), a, b, x, ALPHAS[ai], s).unwrap().with_q(q).unwrap();
        let classical = ProblemInstance { alpha: 1.0, ..inst.clone() };
        let mut reports = Vec::new();
        for thm in [TheoremId::T21, TheoremId::T22, TheoremId::T23, TheoremId::T24] {
            reports.push(hh::bound(thm, &inst, &ev).unwrap());
        }
        for thm in [TheoremId::C13, TheoremId::C14, TheoremId::C15, TheoremId::C16] {
            reports.push(hh::bound_classical(thm, &classical, &ev).unwrap());
        }
        let (l, r) = hh::hh_bounds(&m, a, b, s, &ev).unwrap();
        reports.push(l);
        reports.push(r);
        for rep in reports.iter().filter(|r| r.hypothesis_certified) {
            prop_assert!(!rep.is_violation(), "{:?}", rep);
        }
    }
}
