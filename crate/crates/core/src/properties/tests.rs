use super::*;
use crate::operator::{build_discrete_schrodinger, build_random_hermitian, derive_seed, Ensemble};
use crate::ssf::Sign;
use crate::weights::{make_threshold_weight, TraceTestFunction};

fn d(v: &[f64]) -> HermitianOperator {
    HermitianOperator::diagonal(v).unwrap()
}

fn goe(dim: usize, seed: u64) -> HermitianOperator {
    build_random_hermitian(dim, Ensemble::Goe, seed, 1.0).unwrap()
}

fn psd(dim: usize, seed: u64) -> HermitianOperator {
    let w = build_random_hermitian(dim, Ensemble::Gue, seed, 1.0).unwrap();
    HermitianOperator::new(w.entries() * w.entries().adjoint()).unwrap()
}

fn grid() -> Vec<f64> {
    alpha_grid(0.0, 1.0, 11, 5, 7)
}

#[test]
fn report_pass_rules() {
    assert!(PropertyReport::new("x", Sidedness::OneSided, 1, -1e-9, 1e-8, Value::Null).pass);
    assert!(!PropertyReport::new("x", Sidedness::OneSided, 1, -1e-7, 1e-8, Value::Null).pass);
    assert!(PropertyReport::new("x", Sidedness::OneSided, 1, 5.0, 1e-8, Value::Null).pass);
    assert!(!PropertyReport::new("x", Sidedness::Identity, 1, 5.0, 1e-8, Value::Null).pass);
    assert!(!PropertyReport::new("x", Sidedness::OneSided, 1, f64::NAN, 1e-8, Value::Null).pass);
}

#[test]
fn worst_keeps_nan() {
    let mut w = Worst::one_sided(1.0);
    w.observe(f64::NAN, || json!({ "k": 0 }));
    w.observe(-5.0, || json!({ "k": 1 }));
    let r = w.finish("x", Value::Null);
    assert!(r.worst_gap.is_nan());
    assert_eq!(r.trials, 2);
    assert!(!r.pass);
}

#[test]
fn grids() {
    let g = grid();
    assert_eq!(g.len(), 16);
    assert_eq!((g[0], g[15]), (0.0, 1.0));
    assert_eq!(g, alpha_grid(0.0, 1.0, 11, 5, 7));
    let nodes = three_point_nodes(&[0.0, 0.5, 1.0], 0.0, 1.0);
    assert_eq!(nodes, vec![(0.5, 0.25)]);
}

#[test]
fn th1_degenerate_cases() {
    let a0 = goe(8, 1);
    let v = goe(8, 2);
    let f = make_threshold_weight(0.0, Sign::Minus);
    let r = check_concavity_th1(&a0, &v, &v, &f, &grid()).unwrap();
    assert!(r.worst_gap.abs() <= 1e-12 && r.pass);
    let r = check_concavity_th1(&a0, &v, &goe(8, 3), &f, &[0.0, 1.0]).unwrap();
    assert_eq!(r.worst_gap, 0.0);
    assert!(check_concavity_th1(&a0, &v, &v, &f.affine(1.0, -1.0), &[0.5]).is_err());
}

#[test]
fn th1_and_cor1_random() {
    for trial in 0..5 {
        let seed = derive_seed(11, &[trial]);
        let (a0, v1, v2) = (goe(32, seed), goe(32, seed + 1), goe(32, seed + 2));
        let f = make_threshold_weight(0.1 * trial as f64 - 0.2, Sign::Minus);
        let r = check_concavity_th1(&a0, &v1, &v2, &f, &grid()).unwrap();
        assert!(r.pass, "{}", r.summary());
        let r = check_convexity_cor1(&a0, &v1, &v2, &f.affine(1.0, -1.0), &grid()).unwrap();
        assert!(r.pass, "{}", r.summary());
        assert_eq!(r.trials, 16);
    }
}

#[test]
fn cor2_linear_path_matches_segment() {
    let a0 = goe(10, 4);
    let v = goe(10, 5);
    let zero = HermitianOperator::zeros(10);
    let f = make_threshold_weight(0.3, Sign::Minus);
    let path = CouplingFamily::path(a0.clone(), zero.clone(), v.clone(), zero.clone(), 0.0, 1.0).unwrap();
    let seg = CouplingFamily::segment(a0.clone(), v.clone(), zero).unwrap();
    let rp = check_operator_family_cor2(&path, &f, &grid()).unwrap();
    let rs = check_operator_family_cor2(&seg, &f, &grid()).unwrap();
    assert_eq!(rp.worst_gap, rs.worst_gap);
    assert!(rp.pass);
}

#[test]
fn cor2_random_concave_paths() {
    for trial in 0..4 {
        let seed = derive_seed(12, &[trial]);
        let a0 = goe(12, seed);
        let fam = CouplingFamily::path(a0, goe(12, seed + 1), goe(12, seed + 2), psd(12, seed + 3).scale(0.3), -1.0, 2.0).unwrap();
        let r = check_operator_family_cor2(&fam, &make_threshold_weight(0.0, Sign::Minus), &alpha_grid(-1.0, 2.0, 11, 5, seed)).unwrap();
        assert!(r.pass, "{}", r.summary());
    }
    let fam = CouplingFamily::segment(d(&[0.0]), d(&[1.0]), d(&[0.0])).unwrap();
    assert!(check_operator_family_cor2(&fam, &Weight::constant(-1.0), &grid()).is_err());
}

#[test]
fn bs_identity_examples() {
    let ctx = FunctionalContext::new(d(&[0.0]), make_threshold_weight(0.5, Sign::Minus));
    let r = check_bs_identity(&ctx, &d(&[1.0]), &[0.0, 0.25, 1.0, 2.0]).unwrap();
    assert!(r.pass && r.worst_gap.abs() < 1e-12, "{}", r.summary());
    let ctx = FunctionalContext::new(goe(6, 8), Weight::constant(1.0));
    assert!(check_bs_identity(&ctx, &goe(6, 9), &[1.0]).unwrap().pass);
    let ctx = FunctionalContext::new(goe(8, 10), make_threshold_weight(0.0, Sign::Minus));
    let r = check_bs_identity(&ctx, &goe(8, 11), &[0.25, 0.5, 1.0, 2.0]).unwrap();
    assert!(r.pass, "{}", r.summary());
}

#[test]
fn bs_monotone_examples() {
    let s: Vec<f64> = (0..101).map(|k| -1.0 + 0.03 * k as f64).collect();
    let ctx = FunctionalContext::new(d(&[0.0]), make_threshold_weight(0.5, Sign::Minus));
    let r = check_bs_monotone(&ctx, &d(&[1.0]), &s).unwrap();
    assert!(r.pass);
    assert_eq!(r.worst_gap, 0.0);
    assert_eq!(r.trials, 100);
    assert_eq!(check_bs_monotone(&ctx, &d(&[0.0]), &s).unwrap().worst_gap, 0.0);
    let ctx = FunctionalContext::new(goe(6, 12), Weight::constant(1.0));
    let r = check_bs_monotone(&ctx, &goe(6, 13), &s).unwrap();
    assert!(r.pass && r.worst_gap.abs() < 1e-12);
    let ctx = FunctionalContext::new(goe(16, 14), Weight::logistic(0.0, 0.3).unwrap());
    assert!(check_bs_monotone(&ctx, &goe(16, 15), &s).unwrap().pass);
}

#[test]
fn invariance_examples() {
    let (a0, v) = (goe(8, 16), goe(8, 17));
    let shift = pair_shift_floor(&a0, &v).unwrap();
    let r = check_invariance(&a0, &v, shift, &[1.0, 2.0, 3.0]).unwrap();
    assert!(r.pass && r.trials == 3, "{}", r.summary());
    let r = check_invariance(&a0, &HermitianOperator::zeros(8), shift, &[2.0]).unwrap();
    assert_eq!(r.worst_gap, 0.0);
    assert!(check_invariance(&a0, &v, 0.5 * (shift - 1.0), &[1.0]).is_err() || shift < 1.0 + 1e-12);
}

#[test]
fn weighted_concavity_closed_form() {
    let fam = CouplingFamily::segment(d(&[0.0]), d(&[1.0]), d(&[0.0])).unwrap();
    let r = check_weighted_concavity(&fam, &Weight::constant(1.0), &[1.0], 1, &[0.0, 0.5, 1.0]).unwrap();
    // α/(1+α): 2·(1/3) − 1/5·... at α=0.5, h=0.25
    let exact = 2.0 * (0.5 / 1.5) - 0.25 / 1.25 - 0.75 / 1.75;
    assert!((r.worst_gap - exact).abs() < 1e-14 && exact > 0.0);
    let r = check_weighted_concavity(&fam, &Weight::constant(1.0), &[1.0], 1, &[0.0, 1.0]).unwrap();
    assert_eq!(r.trials, 0);
}

fn schrodinger_family(n: usize, s1: u64, s2: u64) -> CouplingFamily {
    let a0 = build_discrete_schrodinger(n, &vec![0.0; n]).unwrap();
    let v1 = build_random_hermitian(n, Ensemble::Diagonal, s1, 0.5).unwrap();
    let v2 = build_random_hermitian(n, Ensemble::Diagonal, s2, 0.5).unwrap();
    CouplingFamily::segment(a0, v1, v2).unwrap()
}

#[test]
fn weighted_concavity_schrodinger() {
    let fam = schrodinger_family(32, 1, 2);
    let a0 = fam.shift_floor().unwrap();
    for q in [1, 3] {
        let r = check_weighted_concavity(&fam, &make_threshold_weight(1.0, Sign::Minus), &[a0, 2.0 * a0, 4.0 * a0], q, &grid()).unwrap();
        assert!(r.pass, "{}", r.summary());
    }
}

#[test]
fn weight_limit_examples() {
    let fam = CouplingFamily::segment(d(&[0.0]), d(&[1.0]), d(&[0.0])).unwrap();
    let ladder: Vec<f64> = (0..=12).map(|k| 2f64.powi(k)).collect();
    let r = check_weight_limit(&fam, &Weight::constant(1.0), 1, &[1.0], &ladder).unwrap();
    // a²·1/(a(a+1)) − 1 = −1/(a+1)
    assert!(r.pass, "{}", r.summary());
    let top = r.witness["worst_at"]["deviations"][12].as_f64().unwrap();
    assert!((top - 1.0 / 4097.0).abs() < 1e-12);
    let r = check_weight_limit(&fam, &Weight::constant(1.0), 1, &[0.0], &ladder).unwrap();
    assert_eq!(r.worst_gap, 0.0);
    let fam = schrodinger_family(16, 3, 4);
    let a0 = fam.shift_floor().unwrap();
    let ladder: Vec<f64> = (0..=12).map(|k| a0 * 2f64.powi(k)).collect();
    let f = Weight::power_tail(0.0, 5.0).unwrap();
    let r = check_weight_limit(&fam, &f, 3, &[0.0, 0.5, 1.0], &ladder).unwrap();
    assert!(r.pass, "{}", r.summary());
}

#[test]
fn projection_examples() {
    let (a0, v) = (goe(12, 20), goe(12, 21));
    let shift = pair_shift_floor(&a0, &v).unwrap();
    let r = check_projection_convergence(&a0, &v, shift, 1.0, &[12]).unwrap();
    assert_eq!(r.worst_gap, 0.0);
    let r = check_projection_convergence(&a0, &v, shift, 1.0, &[0, 12]).unwrap();
    let d0 = r.witness["inputs"]["distances"][0].as_f64().unwrap();
    let r0 = resolvent_power(&a0, shift, 1.0).unwrap();
    let r1 = resolvent_power(&(&a0 + &v), shift, 1.0).unwrap();
    let mass = l1_distance(&ssf(&(&r0 + &(&r1 - &r0)), &r0).unwrap(), &crate::ssf::StepFunction::zero(), 0);
    assert!((d0 - mass).abs() < 1e-14);
}

#[test]
fn subadditivity_examples() {
    let ctx = FunctionalContext::new(d(&[0.0]), make_threshold_weight(0.7, Sign::Minus));
    let r = check_subadditivity(&ctx, &d(&[1.0]), &[(0.5, 0.0), (2.0, 0.0)]).unwrap();
    assert_eq!(r.worst_gap, 0.0);
    // min(α1+α2, λ0) ≤ min(α1, λ0) + min(α2, λ0)
    let r = check_subadditivity(&ctx, &d(&[1.0]), &[(0.5, 0.4)]).unwrap();
    assert!(r.pass);
    assert!((r.worst_gap - 0.0).abs() < 1e-15 || r.worst_gap > 0.0);
    for trial in 0..3 {
        let seed = derive_seed(13, &[trial]);
        let ctx = FunctionalContext::new(goe(16, seed), make_threshold_weight(0.0, Sign::Minus));
        let r = check_subadditivity(&ctx, &goe(16, seed + 1), &[(0.3, 0.7), (1.0, 1.0), (2.0, 0.5)]).unwrap();
        assert!(r.pass, "{}", r.summary());
    }
    assert!(check_subadditivity(&ctx, &d(&[1.0]), &[(-1.0, 0.0)]).is_err());
}

#[test]
fn ssf_monotone_examples() {
    let (a0, v2) = (goe(8, 22), goe(8, 23));
    let r = check_ssf_monotone(&a0, &v2, &HermitianOperator::zeros(8)).unwrap();
    assert_eq!(r.worst_gap, 0.0);
    let mut e = vec![0.0; 4];
    e[1] = 1.0;
    let r = check_ssf_monotone(&d(&[0.0, 1.0, 2.0, 3.0]), &d(&[0.5, 0.5, 0.5, 0.5]), &d(&e)).unwrap();
    assert!(r.pass && r.worst_gap == 0.0);
    assert!(check_ssf_monotone(&a0, &v2, &psd(8, 24)).unwrap().pass);
    assert!(check_ssf_monotone(&a0, &v2, &d(&[1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])).is_err());
}

#[test]
fn chain_rule_examples() {
    let (a0, a1, w) = (goe(8, 25), goe(8, 26), goe(8, 27));
    assert_eq!(check_chain_rule(&a0, &a1, &HermitianOperator::zeros(8)).unwrap().worst_gap, 0.0);
    assert_eq!(check_chain_rule(&a0, &a0, &w).unwrap().worst_gap, 0.0);
    let r = check_chain_rule(&a0, &a1, &w).unwrap();
    assert!(r.pass, "{}", r.summary());
}

#[test]
fn trace_norm_examples() {
    let r = check_trace_norm_bound(&goe(6, 28), &HermitianOperator::zeros(6), &[5.0]).unwrap();
    assert_eq!(r.worst_gap, 0.0);
    let alpha = 0.75;
    let r = check_trace_norm_bound(&d(&[0.0]), &d(&[alpha]), &[1.0, 3.0]).unwrap();
    assert!(r.worst_gap.abs() < 1e-15, "{}", r.summary());
    let lhs = r.witness["worst_at"]["weighted_l1"].as_f64().unwrap();
    let a = r.witness["worst_at"]["shift"].as_f64().unwrap();
    assert!((lhs - alpha / (a * (a + alpha))).abs() < 1e-15);
    let (a0, v) = (goe(32, 29), goe(32, 30));
    let s = pair_shift_floor(&a0, &v).unwrap();
    assert!(check_trace_norm_bound(&a0, &v, &[s, 2.0 * s, 8.0 * s]).unwrap().pass);
}

#[test]
fn identity_checks() {
    let (a0, v) = (goe(16, 31), goe(16, 32));
    assert!(check_trace_identity(&a0, &v).unwrap().pass);
    let fs = [TraceTestFunction::monomial(2), TraceTestFunction::monomial(3), TraceTestFunction::Exp { t: 0.5 }, TraceTestFunction::Tanh];
    let r = check_krein_trace(&a0, &v, &fs).unwrap();
    assert!(r.pass && r.trials == 4, "{}", r.summary());
    let offsets: Vec<f64> = (-10..=10).map(|k| 0.37 * k as f64).collect();
    let r = check_sum_reduction(&v, &offsets, 0.5).unwrap();
    assert!(r.pass && r.trials == 20, "{}", r.summary());
    let (x, y) = (&psd(8, 33) + &HermitianOperator::identity(8).scale(0.1), &psd(8, 34) + &HermitianOperator::identity(8).scale(0.1));
    assert!(check_inverse_convexity(&x, &y, &[0.25, 0.5, 0.75]).unwrap().pass);
    let r = check_inverse_convexity(&d(&[1.0, 2.0]), &d(&[2.0, 1.0]), &[0.5]).unwrap();
    assert!((r.worst_gap - 1.0 / 12.0).abs() < 1e-15);
}

#[test]
fn strong_coupling_check() {
    let ctx = FunctionalContext::new(d(&[0.0]), make_threshold_weight(1.0, Sign::Minus));
    let r = check_strong_coupling(&ctx, &d(&[1.0]), 4096.0, 13).unwrap();
    assert!(r.pass, "{}", r.summary());
    let ctx = FunctionalContext::new(goe(8, 35), make_threshold_weight(0.0, Sign::Minus));
    assert!(check_strong_coupling(&ctx, &psd(8, 36), 4096.0, 13).unwrap().pass);
    assert!(check_strong_coupling(&ctx, &goe(8, 37), 4096.0, 13).is_err());
}

#[test]
fn coupling_integral_concave() {
    let ctx = FunctionalContext::new(goe(6, 38), make_threshold_weight(0.2, Sign::Minus));
    let r = check_coupling_concavity(&ctx, &goe(6, 39), &[0.0, 0.5, 1.0, 1.5, 2.0]).unwrap();
    assert!(r.pass, "{}", r.summary());
}

#[test]
fn property_table_is_complete() {
    assert_eq!(PROPERTIES.len(), 13);
    let mut tags: Vec<&str> = PROPERTIES.iter().map(|p| p.0).collect();
    tags.sort_unstable();
    tags.dedup();
    assert_eq!(tags.len(), 13);
}
