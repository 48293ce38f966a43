//! Property laws shared by the invariant suite and the acceptance run. Each law is run by
//! a deterministic proptest runner; the registry lists them by module.
#![allow(dead_code)]

pub mod oracle;

use mustafin::cli::{dispatch, Command, RunConfig, EXIT_PASS};
use mustafin::fermat::{admissibility_of_squares, build_covering, run_fermat_trial, scaled_pullback, FermatConfig, PAIRS};
use mustafin::geometry::lattice::{identity3, mat_mul3};
use mustafin::geometry::{
    block_names, curve_model_ideal, model_ring, mustafin_ideal, plane_ring, special_fiber, verify_component_decomposition,
    CatalogMode, ComponentCatalog, LatticeConfiguration, PlaneCurve,
};
use mustafin::ideal::{buchberger_criterion, eliminate_vars, ideal_equal, radical_membership, saturate};
use mustafin::parse::parse_polynomial;
use mustafin::syzygy::{
    example_class, is_admissible_lift, lift_polynomial, restrict_to_component, sample_forms, times_t, triviality_certificate,
    upsilon, x3_product, DegreeData, SymLift, SyzygyTuple,
};
use mustafin::{CoeffField, IdealHandle, Monomial, MonomialOrder, Polynomial, Ring, RingRef, Substitution, TScaled};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CASES: u32 = 100;
pub const FP: CoeffField = CoeffField::Prime(32003);

type LawResult = Result<(), TestCaseError>;

pub struct Law {
    pub module: &'static str,
    pub name: &'static str,
    pub run: fn(u32) -> Result<(), String>,
}

fn check<S>(cases: u32, strategy: S, law: impl Fn(S::Value) -> LawResult) -> Result<(), String>
where
    S: Strategy,
    S::Value: std::fmt::Debug,
{
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, law).map_err(|e| e.to_string())
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, TestCaseError> {
    r.map_err(|e| TestCaseError::fail(e.to_string()))
}

pub fn find(name: &str) -> &'static Law {
    LAWS.iter().find(|l| l.name == name).unwrap_or_else(|| panic!("no law `{name}`"))
}

pub static LAWS: &[Law] = &[
    Law { module: "poly-core", name: "ring_axioms", run: ring_axioms },
    Law { module: "poly-core", name: "substitution_homomorphism", run: substitution_homomorphism },
    Law { module: "poly-core", name: "t_valuation_additive", run: t_valuation_additive },
    Law { module: "poly-core", name: "saturated_reduction_nonzero", run: saturated_reduction_nonzero },
    Law { module: "poly-core", name: "multidegree_additive", run: multidegree_additive },
    Law { module: "ideal-engine", name: "buchberger_criterion_holds", run: buchberger_criterion_holds },
    Law { module: "ideal-engine", name: "normal_form_cofactors", run: normal_form_cofactors },
    Law { module: "ideal-engine", name: "saturation_idempotent", run: saturation_idempotent },
    Law { module: "ideal-engine", name: "elimination_matches_resultant", run: elimination_matches_resultant },
    Law { module: "ideal-engine", name: "relabeling_commutes_with_bases", run: relabeling_commutes_with_bases },
    Law { module: "mustafin-geometry", name: "lattice_permutation_equivariance", run: lattice_permutation_equivariance },
    Law { module: "mustafin-geometry", name: "mustafin_generators_multihomogeneous", run: mustafin_generators_multihomogeneous },
    Law { module: "mustafin-geometry", name: "special_fiber_nonzero", run: special_fiber_nonzero },
    Law { module: "mustafin-geometry", name: "star_like_trials_are_consistent", run: star_like_trials_are_consistent },
    Law { module: "mustafin-geometry", name: "curve_model_contains_mustafin", run: curve_model_contains_mustafin },
    Law { module: "syzygy-models", name: "upsilon_degree_law", run: upsilon_degree_law },
    Law { module: "syzygy-models", name: "upsilon_inverts_lift", run: upsilon_inverts_lift },
    Law { module: "syzygy-models", name: "admissibility_invariant_under_units", run: admissibility_invariant_under_units },
    Law { module: "syzygy-models", name: "certificate_invariant_under_scaling", run: certificate_invariant_under_scaling },
    Law { module: "syzygy-models", name: "certificate_relations_vanish", run: certificate_relations_vanish },
    Law { module: "syzygy-models", name: "restricted_rows_have_units", run: restricted_rows_have_units },
    Law { module: "fermat-pipeline", name: "inverse_matrices", run: inverse_matrices },
    Law { module: "fermat-pipeline", name: "covering_integrality", run: covering_integrality },
    Law { module: "fermat-pipeline", name: "squares_lift_exactly", run: squares_lift_exactly },
    Law { module: "fermat-pipeline", name: "pair_index_pattern", run: pair_index_pattern },
    Law { module: "fermat-pipeline", name: "witness_implies_triviality", run: witness_implies_triviality },
    Law { module: "cli-reporting", name: "reports_deterministic", run: reports_deterministic },
    Law { module: "cli-reporting", name: "exit_code_contract", run: exit_code_contract },
];

// ---------------------------------------------------------------- random polynomials

pub type Raw = Vec<(Vec<u16>, i64)>;

pub fn raw_poly(nvars: usize, max_exp: u16, max_terms: usize) -> impl Strategy<Value = Raw> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nvars), -9i64..=9), 0..=max_terms)
}

pub fn build(ring: &RingRef, raw: &Raw) -> Polynomial {
    let terms = raw.iter().map(|(e, c)| (Monomial::from_exponents(e), ring.field().from_i64(*c))).collect();
    Polynomial::from_terms(ring, terms)
}

fn field_of(rational: bool) -> CoeffField {
    if rational {
        CoeffField::Rational
    } else {
        FP
    }
}

fn txx(field: CoeffField) -> RingRef {
    Ring::with_vars(field, &["t", "x1", "x2"]).unwrap()
}

// ---------------------------------------------------------------- poly-core

fn ring_axioms(cases: u32) -> Result<(), String> {
    let s = (any::<bool>(), raw_poly(3, 3, 5), raw_poly(3, 3, 5), raw_poly(3, 3, 5));
    check(cases, s, |(rat, a, b, c)| {
        let r = txx(field_of(rat));
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        let same = a.clone();
        prop_assert!((&a - &same).is_zero());
        Ok(())
    })
}

fn substitution_homomorphism(cases: u32) -> Result<(), String> {
    let s = (any::<bool>(), raw_poly(3, 2, 4), raw_poly(3, 2, 4), prop::collection::vec(raw_poly(3, 2, 3), 3));
    check(cases, s, |(rat, p, q, images)| {
        let field = field_of(rat);
        let src = txx(field);
        let dst = Ring::with_vars(field, &["t", "y1", "y2"]).unwrap();
        let mut sub = Substitution::new(&src, &dst, true);
        for (v, img) in images.iter().enumerate() {
            ok(sub.set_index(v, build(&dst, img)))?;
        }
        let (p, q) = (build(&src, &p), build(&src, &q));
        let f = |x: &Polynomial| ok(x.substitute(&sub));
        prop_assert_eq!(f(&(&p * &q))?, &f(&p)? * &f(&q)?);
        prop_assert_eq!(f(&(&p + &q))?, &f(&p)? + &f(&q)?);
        Ok(())
    })
}

fn t_valuation_additive(cases: u32) -> Result<(), String> {
    check(cases, (raw_poly(3, 3, 5), raw_poly(3, 3, 5)), |(p, q)| {
        let r = txx(CoeffField::Rational);
        let (p, q) = (build(&r, &p), build(&r, &q));
        prop_assume!(!p.is_zero() && !q.is_zero());
        prop_assert_eq!((&p * &q).t_valuation(), Some(p.t_valuation().unwrap() + q.t_valuation().unwrap()));
        Ok(())
    })
}

fn saturated_reduction_nonzero(cases: u32) -> Result<(), String> {
    check(cases, (any::<bool>(), raw_poly(3, 4, 6)), |(rat, p)| {
        let field = field_of(rat);
        let p = build(&txx(field), &p);
        prop_assume!(!p.is_zero());
        prop_assert!(!ok(ok(p.t_saturate())?.reduce_mod_t(field))?.is_zero());
        Ok(())
    })
}

fn multidegree_additive(cases: u32) -> Result<(), String> {
    let forms = |len: usize| prop::collection::vec(prop::collection::vec(-5i64..=5, len), 0..=2);
    let s = (forms(2), forms(3), forms(2), forms(3));
    check(cases, s, |(pa, pb, qa, qb)| {
        let r = Ring::new(
            CoeffField::Rational,
            vec![("A", vec!["x1_1".to_string(), "x2_1".to_string()]), ("B", vec!["x1_2".to_string(), "x2_2".to_string(), "x3_2".to_string()])],
        )
        .unwrap();
        let linear = |coeffs: &Vec<i64>, offset: usize| {
            coeffs.iter().enumerate().fold(Polynomial::zero(&r), |acc, (k, &c)| &acc + &Polynomial::var_at(&r, offset + k).scale(&r.field().from_i64(c)))
        };
        let product = |a: &Vec<Vec<i64>>, b: &Vec<Vec<i64>>| {
            a.iter().map(|c| linear(c, 0)).chain(b.iter().map(|c| linear(c, 2))).fold(Polynomial::one(&r), |acc, f| &acc * &f)
        };
        let (p, q) = (product(&pa, &pb), product(&qa, &qb));
        prop_assume!(!p.is_zero() && !q.is_zero());
        prop_assert!(p.is_multihomogeneous() && q.is_multihomogeneous());
        let pq = &p * &q;
        prop_assert!(pq.is_multihomogeneous());
        prop_assert_eq!(ok(pq.multidegree())?, ok(p.multidegree())?.add(&ok(q.multidegree())?));
        Ok(())
    })
}

// ---------------------------------------------------------------- ideal-engine

fn xyz(field: CoeffField) -> RingRef {
    Ring::with_vars(field, &["x1", "x2", "x3"]).unwrap()
}

fn order_of(k: u8, weights: &[u32]) -> MonomialOrder {
    match k % 4 {
        0 => MonomialOrder::Grevlex,
        1 => MonomialOrder::Lex,
        2 => MonomialOrder::elimination(3, &[0]),
        _ => MonomialOrder::Weighted { weights: vec![weights.to_vec()], tie: vec![0, 1, 2] },
    }
}

fn gens_strategy() -> impl Strategy<Value = Vec<Raw>> {
    prop::collection::vec(raw_poly(3, 2, 4), 1..=3)
}

fn buchberger_criterion_holds(cases: u32) -> Result<(), String> {
    let s = (any::<bool>(), any::<u8>(), prop::collection::vec(1u32..=3, 3), gens_strategy());
    check(cases, s, |(rat, k, w, gens)| {
        let r = xyz(field_of(rat));
        let gens: Vec<Polynomial> = gens.iter().map(|g| build(&r, g)).collect();
        let ideal = ok(IdealHandle::new(&r, gens.clone()))?;
        let order = order_of(k, &w);
        let basis = ok(ideal.groebner_basis(&order))?;
        prop_assert!(buchberger_criterion(&r, &order, &basis));
        let from_basis = ok(IdealHandle::new(&r, basis.to_vec()))?;
        for g in &gens {
            prop_assert!(ok(from_basis.contains(g))?);
        }
        for b in basis.iter() {
            prop_assert!(ok(ideal.contains(b))?);
        }
        Ok(())
    })
}

fn normal_form_cofactors(cases: u32) -> Result<(), String> {
    let s = (any::<bool>(), any::<u8>(), gens_strategy(), raw_poly(3, 3, 5), prop::collection::vec(raw_poly(3, 1, 3), 3));
    check(cases, s, |(rat, k, gens, p, combo)| {
        let r = xyz(field_of(rat));
        let gens: Vec<Polynomial> = gens.iter().map(|g| build(&r, g)).collect();
        let ideal = ok(IdealHandle::new(&r, gens.clone()))?;
        let order = order_of(k, &[1, 2, 3]);
        let member = gens.iter().zip(&combo).fold(Polynomial::zero(&r), |acc, (g, c)| &acc + &(g * &build(&r, c)));
        for (p, in_ideal) in [(build(&r, &p), None), (member, Some(true))] {
            let (basis, q, rem) = ok(ideal.normal_form_with_cofactors(&p, &order))?;
            let rebuilt = q.iter().zip(basis.iter()).fold(rem.clone(), |acc, (qi, gi)| &acc + &(qi * gi));
            prop_assert_eq!(&rebuilt, &p);
            prop_assert_eq!(rem.is_zero(), ok(ideal.contains(&p))?);
            if let Some(expect) = in_ideal {
                prop_assert_eq!(rem.is_zero(), expect);
            }
        }
        Ok(())
    })
}

fn saturation_idempotent(cases: u32) -> Result<(), String> {
    let s = (any::<bool>(), gens_strategy(), raw_poly(3, 1, 2));
    check(cases, s, |(rat, gens, f)| {
        let r = xyz(field_of(rat));
        let f = build(&r, &f);
        prop_assume!(!f.is_zero());
        let ideal = ok(IdealHandle::new(&r, gens.iter().map(|g| build(&r, g)).collect()))?;
        let once = ok(saturate(&ideal, &f))?;
        let twice = ok(saturate(&once, &f))?;
        prop_assert!(ok(ideal_equal(&once, &twice))?);
        prop_assert!(ok(once.contains_ideal(&ideal))?);
        Ok(())
    })
}

/// Polynomial `x1^a + Σ lower` with every lower term of `x1`-degree below `a`.
fn monic_in_x1(r: &RingRef, a: u16, lower: &Raw) -> Polynomial {
    let mut exps = vec![0u16; r.nvars()];
    exps[0] = a;
    let lead = Polynomial::monomial(r, Monomial::from_exponents(&exps), r.field().one());
    let lower: Raw = lower.iter().filter(|(e, _)| e[0] < a).cloned().collect();
    &lead + &build(r, &lower)
}

fn elimination_matches_resultant(cases: u32) -> Result<(), String> {
    let s = (any::<bool>(), 2usize..=3, 1u16..=3, 1u16..=3, raw_poly(3, 1, 4), raw_poly(3, 1, 4));
    check(cases, s, |(rat, nvars, a, b, lf, lg)| {
        let names = ["x1", "x2", "x3"];
        let r = Ring::with_vars(field_of(rat), &names[..nvars]).unwrap();
        let trim = |raw: &Raw| -> Raw { raw.iter().map(|(e, c)| (e[..nvars].to_vec(), *c)).collect() };
        let f = monic_in_x1(&r, a, &trim(&lf));
        let g = monic_in_x1(&r, b, &trim(&lg));
        let res = oracle::resultant(&f, &g, 0);
        let ideal = ok(IdealHandle::new(&r, vec![f, g]))?;
        let elim = ok(eliminate_vars(&ideal, &[0]))?;
        if res.is_zero() {
            prop_assert!(elim.is_empty());
            return Ok(());
        }
        let elim_ideal = ok(IdealHandle::new(&r, elim.clone()))?;
        prop_assert!(ok(elim_ideal.contains(&res))?);
        let res_ideal = ok(IdealHandle::new(&r, vec![res]))?;
        for e in &elim {
            prop_assert!(ok(radical_membership(e, &res_ideal))?);
        }
        Ok(())
    })
}

fn relabeling_commutes_with_bases(cases: u32) -> Result<(), String> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let s = (any::<bool>(), 0usize..6, prop::collection::vec(1u32..=4, 3), gens_strategy());
    check(cases, s, |(rat, pi, w, gens)| {
        let r = xyz(field_of(rat));
        let perm = perms[pi];
        let mut sub = Substitution::new(&r, &r, true);
        for (i, &j) in perm.iter().enumerate() {
            ok(sub.set_index(i, Polynomial::var_at(&r, j)))?;
        }
        let order = MonomialOrder::Weighted { weights: vec![w.clone()], tie: vec![0, 1, 2] };
        let mut w2 = vec![0; 3];
        for i in 0..3 {
            w2[perm[i]] = w[i];
        }
        let moved = MonomialOrder::Weighted { weights: vec![w2], tie: perm.to_vec() };
        let gens: Vec<Polynomial> = gens.iter().map(|g| build(&r, g)).collect();
        let basis = ok(ok(IdealHandle::new(&r, gens.clone()))?.groebner_basis(&order))?;
        let image = gens.iter().map(|g| ok(g.substitute(&sub))).collect::<Result<Vec<_>, _>>()?;
        let moved_basis = ok(ok(IdealHandle::new(&r, image))?.groebner_basis(&moved))?;
        let relabeled = basis.iter().map(|g| ok(g.substitute(&sub))).collect::<Result<Vec<_>, _>>()?;
        prop_assert_eq!(relabeled, moved_basis.to_vec());
        Ok(())
    })
}

// ---------------------------------------------------------------- mustafin-geometry

fn lattice_permutation_equivariance(cases: u32) -> Result<(), String> {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    check(cases, (any::<u64>(), 0usize..6), |(seed, pi)| {
        let perm = perms[pi];
        let cfg = ok(LatticeConfiguration::sample(FP, 3, seed, 1000))?;
        let moved = ok(cfg.permuted(&perm))?;
        let ring = model_ring(FP, 3);
        // old block perm[k] becomes new block k
        let mut sub = Substitution::new(&ring, &ring, true);
        ok(sub.set("t", ok(Polynomial::var(&ring, "t"))?))?;
        for (k, &old) in perm.iter().enumerate() {
            for (from, to) in block_names(old).iter().zip(block_names(k).iter()) {
                ok(sub.set(from, ok(Polynomial::var(&ring, to))?))?;
            }
        }
        let original = ok(mustafin_ideal(&cfg))?;
        let relabeled = original.generators().iter().map(|g| ok(g.substitute(&sub))).collect::<Result<Vec<_>, _>>()?;
        let relabeled = ok(IdealHandle::new(&ring, relabeled))?;
        prop_assert!(ok(ideal_equal(&relabeled, &ok(mustafin_ideal(&moved))?))?);
        Ok(())
    })
}

fn mustafin_generators_multihomogeneous(cases: u32) -> Result<(), String> {
    check(cases, (any::<u64>(), 2usize..=4), |(seed, n1)| {
        let cfg = ok(LatticeConfiguration::sample(FP, n1, seed, 1000))?;
        let ideal = ok(mustafin_ideal(&cfg))?;
        prop_assert!(!ideal.generators().is_empty());
        for g in ideal.generators() {
            let degrees: Vec<_> = g.terms().iter().map(|(m, _)| g.monomial_multidegree(m).0[1..].to_vec()).collect();
            prop_assert!(degrees.iter().all(|d| d == &degrees[0]), "{}", g);
        }
        Ok(())
    })
}

fn special_fiber_nonzero(cases: u32) -> Result<(), String> {
    check(cases, (any::<u64>(), 2usize..=3, any::<bool>()), |(seed, n1, curve)| {
        let cfg = ok(LatticeConfiguration::sample(FP, n1, seed, 1000))?;
        let ideal = if curve {
            ok(curve_model_ideal(&cfg, &ok(PlaneCurve::fermat(FP, 3))?))?
        } else {
            ok(mustafin_ideal(&cfg))?
        };
        let fiber = ok(special_fiber(&ideal))?;
        prop_assert!(!fiber.is_zero_ideal());
        Ok(())
    })
}

fn star_like_trials_are_consistent(cases: u32) -> Result<(), String> {
    let curves = ["u1^3 + u2^3 + u3^3", "u1^2 + u2^2 + u3^2", "u1^3 + u1*u2*u3 + u2^3 + 2*u3^3"];
    check(cases, (any::<u64>(), 0usize..3), |(seed, c)| {
        let curve = ok(PlaneCurve::parse(FP, curves[c]))?;
        let cfg = ok(LatticeConfiguration::sample(FP, 3, seed, 1000))?;
        let fiber = ok(special_fiber(&ok(curve_model_ideal(&cfg, &curve))?))?;
        let catalog = ok(ComponentCatalog::new(FP, 3))?;
        let rep = ok(verify_component_decomposition(&fiber, &catalog, CatalogMode::Curve))?;
        if rep.star_like {
            prop_assert_eq!(rep.containments.len(), 3);
            prop_assert!(rep.containments.iter().all(|c| c.fiber_in_component));
            prop_assert!(rep.intersection_in_radical.iter().all(|(_, b)| *b));
            prop_assert_eq!(rep.component_count, 3);
            prop_assert!(rep.diagnostics.is_empty());
            let labels: Vec<&str> = rep.containments.iter().map(|c| c.component.as_str()).collect();
            prop_assert_eq!(labels, ["D_1", "D_2", "D_3"]);
        }
        Ok(())
    })
}

fn curve_model_contains_mustafin(cases: u32) -> Result<(), String> {
    check(cases, (any::<u64>(), 1u32..=3), |(seed, d)| {
        let cfg = ok(LatticeConfiguration::sample(FP, 3, seed, 1000))?;
        let curve = ok(PlaneCurve::fermat(FP, d))?;
        let model = ok(curve_model_ideal(&cfg, &curve))?;
        let m = ok(mustafin_ideal(&cfg))?;
        for g in m.generators() {
            prop_assert!(ok(model.contains(g))?);
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- syzygy-models

/// Degree data with `n ∈ {2, 3}` and `ρ ≤ 3`, from a seed.
pub fn degree_data(seed: u64) -> DegreeData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=3usize);
    let rho = rng.gen_range(1..=3u32);
    let mut degrees = vec![rho; n + 1];
    let mut deficit = rho;
    while deficit > 0 {
        let i = rng.gen_range(0..=n);
        if degrees[i] > 0 {
            degrees[i] -= 1;
            deficit -= 1;
        }
    }
    DegreeData::new(n, rho, degrees).unwrap()
}

struct SyzCase {
    data: DegreeData,
    cfg: LatticeConfiguration,
    forms: Vec<Polynomial>,
}

fn syz_case(seed: u64) -> Result<SyzCase, TestCaseError> {
    let data = degree_data(seed);
    let cfg = ok(LatticeConfiguration::sample(FP, data.n_plus_1(), seed ^ 0x5eed, 1000))?;
    let forms = ok(sample_forms(&data, FP, seed, 1000))?;
    Ok(SyzCase { data, cfg, forms })
}

fn x_degrees(p: &Polynomial) -> Vec<u32> {
    let t = p.ring().var_index("t");
    p.terms().iter().map(|(m, _)| m.degree() - t.map_or(0, |t| m.get(t) as u32)).collect()
}

fn upsilon_degree_law(cases: u32) -> Result<(), String> {
    check(cases, any::<u64>(), |seed| {
        let c = syz_case(seed)?;
        let ring = model_ring(FP, c.data.n_plus_1());
        for i in 0..c.data.n_plus_1() {
            let base = ok(x3_product(&c.data, i, &ring))?;
            let lift = ok(lift_polynomial(&c.forms[i], &c.data, i, &c.cfg))?;
            for f in [&base, &(&base + lift.poly())] {
                let image = ok(upsilon(i, f, &c.data, &c.cfg))?;
                prop_assert!(x_degrees(&image.poly).iter().all(|&d| d == c.data.degree(i)));
            }
            let expected: u32 = (0..c.data.n_plus_1()).filter(|&j| j != i).map(|j| c.data.rho() - c.data.degree(j)).sum();
            prop_assert_eq!(expected, c.data.degree(i));
        }
        Ok(())
    })
}

fn upsilon_inverts_lift(cases: u32) -> Result<(), String> {
    check(cases, any::<u64>(), |seed| {
        let c = syz_case(seed)?;
        for i in 0..c.data.n_plus_1() {
            let lift = ok(lift_polynomial(&c.forms[i], &c.data, i, &c.cfg))?;
            prop_assert_eq!(ok(upsilon(i, lift.poly(), &c.data, &c.cfg))?, TScaled::integral(c.forms[i].clone()));
        }
        Ok(())
    })
}

fn lifts_of(c: &SyzCase) -> Result<Vec<SymLift>, TestCaseError> {
    let tuple = ok(example_class(&c.data, &c.cfg, &c.forms))?;
    let mut lifts = tuple.lifts.unwrap();
    for i in 0..c.data.n_plus_1() {
        lifts.push(ok(lift_polynomial(&c.forms[i], &c.data, i, &c.cfg))?);
    }
    Ok(lifts)
}

fn admissibility_invariant_under_units(cases: u32) -> Result<(), String> {
    check(cases, (any::<u64>(), 0u32..=3, 1i64..32003), |(seed, k, unit)| {
        let c = syz_case(seed)?;
        let unit = FP.from_i64(unit);
        for lift in lifts_of(&c)? {
            if lift.poly().is_zero() {
                continue;
            }
            let moved = ok(times_t(&ok(lift.scaled(&unit))?, k))?;
            prop_assert_eq!(ok(is_admissible_lift(&moved))?, ok(is_admissible_lift(&lift))?);
        }
        Ok(())
    })
}

fn scaled_tuple(tuple: &SyzygyTuple, alphas: &[i64]) -> Result<SyzygyTuple, TestCaseError> {
    let a: Vec<_> = alphas.iter().map(|&v| FP.from_i64(v)).collect();
    let forms = tuple.forms.iter().zip(&a).map(|(f, c)| f.scale(c)).collect();
    let lifts = tuple.lifts.as_ref().unwrap().iter().zip(&a).map(|(l, c)| ok(l.scaled(c))).collect::<Result<Vec<_>, _>>()?;
    ok(SyzygyTuple::new(tuple.data.clone(), forms, Some(lifts)))
}

fn certificate_invariant_under_scaling(cases: u32) -> Result<(), String> {
    check(cases, (any::<u64>(), prop::collection::vec(1i64..32003, 4), any::<bool>()), |(seed, alphas, plain)| {
        let c = syz_case(seed)?;
        let tuple = if plain {
            // lifts without the x3-product part: usually not admissible
            let lifts = (0..c.data.n_plus_1()).map(|i| ok(lift_polynomial(&c.forms[i], &c.data, i, &c.cfg))).collect::<Result<Vec<_>, _>>()?;
            let forms = c.forms.iter().map(|f| TScaled::integral(f.clone())).collect();
            ok(SyzygyTuple::new(c.data.clone(), forms, Some(lifts)))?
        } else {
            ok(example_class(&c.data, &c.cfg, &c.forms))?
        };
        let before = ok(triviality_certificate(&tuple))?;
        let after = ok(triviality_certificate(&scaled_tuple(&tuple, &alphas[..c.data.n_plus_1()])?))?;
        prop_assert_eq!(before.overall, after.overall);
        for (x, y) in before.per_component.iter().zip(&after.per_component) {
            prop_assert_eq!(x.verdict, y.verdict);
        }
        if !plain {
            prop_assert!(before.overall);
        }
        Ok(())
    })
}

fn certificate_relations_vanish(cases: u32) -> Result<(), String> {
    check(cases, any::<u64>(), |seed| {
        let c = syz_case(seed)?;
        let tuple = ok(example_class(&c.data, &c.cfg, &c.forms))?;
        let cert = ok(triviality_certificate(&tuple))?;
        for comp in &cert.per_component {
            let row = ok(restrict_to_component(&tuple, comp.component))?;
            prop_assert!(!comp.kernel_basis.is_empty());
            for rel in &comp.kernel_basis {
                let s = rel.iter().map(|e| ok(parse_polynomial(&row.ring, e))).collect::<Result<Vec<_>, _>>()?;
                let sum = s.iter().zip(&row.entries).fold(Polynomial::zero(&row.ring), |acc, (a, b)| &acc + &(a * b));
                prop_assert!(sum.is_zero());
            }
        }
        Ok(())
    })
}

fn restricted_rows_have_units(cases: u32) -> Result<(), String> {
    check(cases, any::<u64>(), |seed| {
        let c = syz_case(seed)?;
        let tuple = ok(example_class(&c.data, &c.cfg, &c.forms))?;
        for lift in tuple.lifts.as_ref().unwrap() {
            prop_assert!(ok(is_admissible_lift(lift))?);
        }
        for i in 0..c.data.n_plus_1() {
            let row = ok(restrict_to_component(&tuple, i))?;
            let unit = row.entries[i].as_constant();
            prop_assert!(unit.is_some_and(|u| !u.is_zero()), "component {}: {}", i + 1, row.entries[i]);
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- fermat-pipeline

fn inverse_matrices(cases: u32) -> Result<(), String> {
    check(cases, (any::<u64>(), 1u32..=4), |(seed, d)| {
        let fc = ok(FermatConfig::sample(d, FP, seed, 1000))?;
        prop_assert!(fc.inverses_verified());
        for l in 0..3 {
            prop_assert_eq!(mat_mul3(fc.lattices().matrix(l), fc.inverse(l)), identity3(FP));
            prop_assert_eq!(mat_mul3(fc.inverse(l), fc.lattices().matrix(l)), identity3(FP));
        }
        Ok(())
    })
}

fn covering_integrality(cases: u32) -> Result<(), String> {
    check(cases, (any::<u64>(), 1u32..=3), |(seed, d)| {
        let fc = ok(FermatConfig::sample(d, FP, seed, 1000))?;
        let cd = ok(build_covering(&fc))?;
        prop_assert!(cd.pair_terms_integral);
        for l in 0..3 {
            prop_assert!(ok(cd.pair_quadrics[l].times_t_power(4))?.t_valuation().is_some());
            prop_assert!(ok(scaled_pullback(&fc, &cd, l))?.is_integral());
        }
        Ok(())
    })
}

fn squares_lift_exactly(cases: u32) -> Result<(), String> {
    check(cases, any::<u64>(), |seed| {
        let fc = ok(FermatConfig::sample(3, FP, seed, 1000))?;
        let cd = ok(build_covering(&fc))?;
        let rep = ok(admissibility_of_squares(&fc, &cd))?;
        for l in 0..3 {
            prop_assert!(rep.upsilon_matches[l]);
            prop_assert_eq!(ok(upsilon(l, rep.lifts[l].poly(), &rep.data, fc.lattices()))?, cd.p[l].pow(2));
        }
        Ok(())
    })
}

fn pair_index_pattern(cases: u32) -> Result<(), String> {
    check(cases, (any::<u64>(), 1u32..=3), |(seed, d)| {
        prop_assert_eq!(PAIRS, [(1, 2), (0, 2), (0, 1)]);
        let fc = ok(FermatConfig::sample(d, FP, seed, 1000))?;
        let cd = ok(build_covering(&fc))?;
        let ring = plane_ring(FP);
        let row3 = |k: usize| {
            let b = fc.inverse(k);
            (0..3).fold(Polynomial::zero(&ring), |acc, c| &acc + &Polynomial::var(&ring, ["x1", "x2", "x3"][c]).unwrap().scale(&b[2][c]))
        };
        for (l, others) in [[1, 2], [0, 2], [0, 1]].iter().enumerate() {
            let expected = TScaled::new(-4, &row3(others[0]) * &row3(others[1]));
            prop_assert_eq!(&cd.pair_quadrics[l], &expected);
            let t4 = Polynomial::var(&ring, "t").unwrap().pow(4);
            prop_assert_eq!(&cd.p[l], &ok(expected.add(&TScaled::integral(&t4 * &cd.quadrics[l])))?);
        }
        Ok(())
    })
}

fn witness_implies_triviality(cases: u32) -> Result<(), String> {
    check(cases, any::<u64>(), |seed| {
        let fc = ok(FermatConfig::sample(1, FP, seed, 1000))?;
        let trial = ok(run_fermat_trial(&fc, 0, seed))?;
        let fibers = trial.s_poly.iter().all(|r| r.integral && r.fiber_is_pure_power);
        let trivial = trial.triviality.as_ref().is_some_and(|c| c.overall);
        if fibers && trial.star_like {
            prop_assert!(trivial);
        }
        if trial.full_witness {
            prop_assert!(fibers && trial.star_like && trivial && trial.base_locus_empty && trial.smooth);
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- cli-reporting

fn small_config(kind: u8, seed: u64) -> RunConfig {
    let mut c = match kind % 3 {
        0 => RunConfig::new(Command::MustafinFiber),
        1 => {
            let mut c = RunConfig::new(Command::SyzygyCheck);
            c.rho = Some(2);
            c.degrees = Some(vec![2, 1, 1]);
            c
        }
        _ => {
            let mut c = RunConfig::new(Command::CurveModel);
            c.curve = Some("u1^2 + u2^2 + u3^2".into());
            c
        }
    };
    c.seed = seed;
    c.bound = Some(2 + seed % 50);
    c
}

fn reports_deterministic(cases: u32) -> Result<(), String> {
    check(cases, (any::<u8>(), any::<u64>()), |(kind, seed)| {
        let c = small_config(kind, seed);
        let a = ok(dispatch(&c))?;
        let b = ok(dispatch(&c))?;
        prop_assert_eq!(ok(a.verdict_json())?, ok(b.verdict_json())?);
        let echoed = ok(RunConfig::from_json(&ok(serde_json::to_string(&a.config))?))?;
        prop_assert_eq!(ok(ok(dispatch(&echoed))?.verdict_json())?, ok(a.verdict_json())?);
        Ok(())
    })
}

fn exit_code_contract(cases: u32) -> Result<(), String> {
    check(cases, (any::<u8>(), any::<u64>()), |(kind, seed)| {
        let r = ok(dispatch(&small_config(kind, seed)))?;
        let all = r.error.is_none() && !r.stages.is_empty() && r.stages.iter().all(|s| s.passed);
        prop_assert_eq!(r.exit_code() == EXIT_PASS, all);
        prop_assert_eq!(r.verdict, all);
        Ok(())
    })
}
