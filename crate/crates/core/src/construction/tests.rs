use super::*;
use crate::numtheory::primes_up_to;
use crate::oracle::for_each_ternary_coeff;

fn opts() -> ScanOptions {
    ScanOptions::default()
}

#[test]
fn residue_w_examples() {
    let (w, branch, boundary) = residue_w(1, 11).unwrap();
    assert_eq!((w.value(), branch, boundary), (8, Branch::Two, false));
    let (w, branch, boundary) = residue_w(3, 23).unwrap();
    assert_eq!((w.value(), branch, boundary), (5, Branch::One, false));
    let (w, branch, boundary) = residue_w(1, 13).unwrap();
    assert_eq!((w.value(), branch, boundary), (5, Branch::One, true));
}

#[test]
fn residue_w_rejects() {
    assert!(matches!(residue_w(2, 11), Err(ConstructionError::HypothesisViolated(_))));
    assert!(matches!(residue_w(1, 7), Err(ConstructionError::HypothesisViolated(_))));
    assert!(matches!(residue_w(1, 15), Err(ConstructionError::HypothesisViolated(_))));
    assert!(matches!(residue_w(3, 19), Err(ConstructionError::HypothesisViolated(_))));
}

#[test]
fn residue_w_solves_the_congruence() {
    for l in [1u64, 3, 5, 7, 9] {
        for p in primes_up_to(400) {
            let Ok((w, branch, _)) = residue_w(l, p) else { continue };
            assert_eq!(w.value() * (l + 2) % p, 2);
            let v = w.value();
            match branch {
                Branch::One => assert!(l + 2 <= v && 2 * v <= p - l - 2),
                Branch::Two => assert!(p + l + 2 <= 2 * v && v <= p - l - 2),
            }
        }
    }
}

#[test]
fn find_q_examples() {
    assert_eq!(find_q(1, 11, 1).unwrap(), 107);
    assert_eq!(find_q(1, 11, 2).unwrap(), 151);
    assert_eq!(find_q(3, 23, 1).unwrap(), 373);
}

#[test]
fn structure_constants_examples() {
    assert_eq!(structure_constants(1, 11, 107).unwrap(), (38, 6, 6, 2));
    assert_eq!(structure_constants(3, 23, 373).unwrap(), (145, 13, 11, 2));
    assert!(structure_constants(1, 11, 109).is_err());
}

#[test]
fn find_r_and_indices_for_p11() {
    let params = build_params(1, 11, 1, 1).unwrap();
    assert_eq!(params.q - params.s * params.p, 41);
    assert_eq!(params.r, 14813);
    assert_eq!(params.r % 1177, 689);
    let (plus, minus) = target_indices(&params).unwrap();
    assert_eq!((plus.u, plus.alpha, plus.t, plus.k), (806, 642, -2064, 9_509_950));
    assert_eq!((minus.u, minus.alpha), (664, 377));
    let degree = 10u128 * 106 * 14812;
    assert_eq!(degree, 15_700_720);
    assert!(plus.k <= degree && minus.k <= degree);
    let ctx = params.kaplan().unwrap();
    assert_eq!(ctx.a_pqr(plus.k), 7);
    assert_eq!(ctx.a_pqr(minus.k), -4);
}

#[test]
fn target_index_placement() {
    let idx = TargetIndex::place(806, 642, 14813, 1177).unwrap();
    assert_eq!(idx.t, -2064);
    assert!(TargetIndex::alpha_for(idx.k, 14813) == 642);
    let bad = TargetIndex { t: idx.t + 1, k: idx.k + 1177, ..idx };
    assert!(bad.check(14813, 1177).is_err());
    assert!(bad.check_decomposition(14813, 1177).is_ok());
    let w = TargetIndex::from_index(9_509_950, 14813, 1177).unwrap();
    assert_eq!(w.k, 9_509_950);
    assert!(w.u >= 0 && w.u < 1177);
}

#[test]
fn construct_p11_full() {
    let cert = construct(1, 11, 1, 1, VerifyMode::Full, &opts()).unwrap();
    assert!(cert.verified && cert.full_scan);
    assert_eq!((cert.set_min, cert.set_max), (-4, 7));
    assert_eq!((cert.a_minus, cert.a_plus), (-4, 7));
    assert_eq!(cert.delta, 1);
    assert_eq!(cert.params.branch, Branch::Two);
}

#[test]
fn certificate_json_round_trip() {
    let cert = construct(1, 11, 1, 1, VerifyMode::Extremes, &opts()).unwrap();
    let text = cert.to_json_string();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["r"], "14813");
    assert_eq!(value["k_plus"], "9509950");
    assert_eq!(value["t_plus"], "-2064");
    assert_eq!(value["verified"], true);
    assert_eq!(value["full_scan"], false);
    assert_eq!(value["variant"], "delta_plus");
    let back = ConstructionCertificate::from_json_str(&text).unwrap();
    assert_eq!(back, cert);
    assert_eq!(back.to_json_string(), text);
}

#[test]
fn certificate_json_rejects_tampering() {
    let cert = construct(1, 11, 1, 1, VerifyMode::Extremes, &opts()).unwrap();
    let mut raw = cert.to_json();
    raw.k_plus = "9509951".into();
    assert!(ConstructionCertificate::try_from(raw).is_err());
    let mut raw = cert.to_json();
    raw.r = "14821".into();
    assert!(ConstructionCertificate::try_from(raw).is_err());
    let mut raw = cert.to_json();
    raw.rho = "37".into();
    assert!(ConstructionCertificate::try_from(raw).is_err());
    assert!(ConstructionCertificate::from_json_str("{}").is_err());
}

#[test]
fn tables_hold_for_p11() {
    let cert = construct(1, 11, 1, 1, VerifyMode::Extremes, &opts()).unwrap();
    let report = verify_tables(&cert).unwrap();
    assert_eq!(report.positive_b, 7);
    assert_eq!(report.negative_b, 4);
    assert!(report.passed());
}

#[test]
fn tables_detect_a_shifted_index() {
    let cert = construct(1, 11, 1, 1, VerifyMode::Extremes, &opts()).unwrap();
    let report = table_report(&cert.params, cert.k_plus.k + 1, cert.k_minus.k).unwrap();
    assert!(!report.passed());
    let report = table_report(&cert.params, cert.k_plus.k, cert.k_minus.k + 1).unwrap();
    assert!(!report.passed());
}

#[test]
fn tables_hold_in_both_branches() {
    for (l, p) in [(1, 11), (1, 17), (1, 19), (1, 23), (3, 23), (1, 29), (3, 29), (5, 53)] {
        let params = build_params(l, p, 1, 1).unwrap();
        if params.boundary_w {
            continue;
        }
        let (plus, minus) = target_indices(&params).unwrap();
        let report = table_report(&params, plus.k, minus.k).unwrap();
        let bad: Vec<_> = report.failures().collect();
        assert!(bad.is_empty(), "l={l} p={p}: {bad:?}");
        assert_eq!(report.positive_b, (p + l + 2) / 2);
        assert_eq!(report.negative_b, (p - l - 2) / 2);
    }
}

#[test]
fn construction_sweep() {
    for l in [1u64, 3] {
        for p in primes_up_to(23) {
            if p < l * l + 3 * l + 5 {
                continue;
            }
            let (_, _, boundary) = residue_w(l, p).unwrap();
            if boundary {
                continue;
            }
            let mode = VerifyMode::default_for(p);
            let cert = construct(l, p, 1, 1, mode, &opts()).unwrap();
            assert!(cert.verified, "l={l} p={p}: {:?}", cert.failures);
            assert_eq!(cert.a_plus, ((p + l + 2) / 2) as i64);
            assert_eq!(cert.a_minus, -(((p - l - 2) / 2) as i64));
            assert_eq!(cert.a_plus - cert.a_minus, p as i64);
        }
    }
}

#[test]
fn other_q_and_r_indices() {
    for (qi, ri) in [(1, 2), (2, 1), (2, 3), (3, 1)] {
        let cert = construct(1, 11, qi, ri, VerifyMode::Extremes, &opts()).unwrap();
        assert!(cert.verified);
    }
}

#[test]
fn boundary_case_reports_outcome() {
    // w sits on an interval endpoint; the certificate records whatever the
    // evaluation finds.
    match construct(1, 13, 1, 1, VerifyMode::Extremes, &opts()) {
        Ok(cert) => assert!(cert.verified && cert.params.boundary_w),
        Err(ConstructionError::CertificationFailed { boundary_w, certificate, .. }) => {
            assert!(boundary_w);
            assert!(!certificate.verified);
            assert!(!certificate.failures.is_empty());
        }
        Err(e) => panic!("unexpected error {e}"),
    }
}

#[test]
fn oracle_agrees_with_the_p11_instance() {
    // The streaming product never touches the Kaplan evaluator.
    let params = build_params(1, 11, 1, 1).unwrap();
    let (plus, minus) = target_indices(&params).unwrap();
    let (mut lo, mut hi) = (0i64, 0i64);
    let (mut at_plus, mut at_minus) = (0i64, 0i64);
    let degree = 10 * 106 * 14812;
    for_each_ternary_coeff(11, 107, 14813, degree, |n, c| {
        let c = c as i64;
        lo = lo.min(c);
        hi = hi.max(c);
        if n as u128 == plus.k {
            at_plus = c;
        }
        if n as u128 == minus.k {
            at_minus = c;
        }
    })
    .unwrap();
    assert_eq!((lo, hi), (-4, 7));
    assert_eq!((at_minus, at_plus), (-4, 7));
}

#[test]
fn flip_p11() {
    let cert = construct(1, 11, 1, 1, VerifyMode::Full, &opts()).unwrap();
    let flipped = delta_minus_variant(&cert, VerifyMode::Full, &opts()).unwrap();
    assert_eq!(flipped.variant, Variant::DeltaMinus);
    assert_eq!(flipped.source, Source::Flip);
    assert_eq!((flipped.set_min, flipped.set_max), (-7, 4));
    assert_eq!(flipped.params.r % 1177, (1177 - 689) % 1177);
    assert!(flipped.full_scan);
    let ctx = flipped.params.kaplan().unwrap();
    assert_eq!(ctx.a_pqr(flipped.k_plus.k), 4);
    assert_eq!(ctx.a_pqr(flipped.k_minus.k), -7);

    let text = flipped.to_json_string();
    assert_eq!(ConstructionCertificate::from_json_str(&text).unwrap(), flipped);

    let back = flip_certificate(&flipped, VerifyMode::Full, &opts()).unwrap();
    assert_eq!(back.params.r, 14813);
    assert_eq!(back.variant, Variant::DeltaPlus);
    assert_eq!((back.set_min, back.set_max), (-4, 7));
}

#[test]
fn flip_extremes_mode_stops_early() {
    let cert = construct(1, 11, 1, 1, VerifyMode::Extremes, &opts()).unwrap();
    let flipped = delta_minus_variant(&cert, VerifyMode::Extremes, &opts().with_block_len(1 << 12)).unwrap();
    assert!(flipped.verified);
    assert_eq!((flipped.set_min, flipped.set_max), (-7, 4));
}

#[test]
fn delta_minus_needs_a_plus_certificate() {
    let cert = construct(1, 11, 1, 1, VerifyMode::Extremes, &opts()).unwrap();
    let flipped = delta_minus_variant(&cert, VerifyMode::Extremes, &opts()).unwrap();
    assert!(matches!(
        delta_minus_variant(&flipped, VerifyMode::Extremes, &opts()),
        Err(ConstructionError::HypothesisViolated(_))
    ));
}

#[test]
fn m_p_q_examples() {
    assert_eq!(m_p_q_value(1, 11, 107).unwrap(), 7);
    assert_eq!(m_p_q_value(3, 23, 373).unwrap(), 14);
    assert!(m_p_q_value(1, 11, 109).is_err());
    assert!(m_p_q_value(1, 11, 19).is_err());
}

#[test]
fn sampled_heights_do_not_exceed_m() {
    let samples = sample_max_height(11, 107, 3, &opts()).unwrap();
    assert_eq!(samples.len(), 3);
    assert!(samples.iter().all(|&(r, h)| r > 107 && h <= 7));
}

#[test]
fn residue_lands_in_an_interval_exhaustively() {
    let primes = primes_up_to(2000);
    let mut checked = 0;
    for l in (1..=9u64).step_by(2) {
        for &p in &primes {
            if p < l * l + 3 * l + 5 {
                continue;
            }
            // IntervalMiss would surface here as an error
            let (w, _, _) = residue_w(l, p).unwrap();
            let q = nth_prime_in_ap(w, (p + l) * p / 2, 1).unwrap();
            let (_, _, s, _) = structure_constants(l, p, q).unwrap();
            assert!(s >= l + 2, "l={l} p={p} q={q} s={s}");
            checked += 1;
        }
    }
    assert!(checked > 1000);
}

#[test]
fn placement_lands_strictly_inside_random_unit_windows() {
    use rand::{rngs::StdRng, Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..10_000 {
        let pq: u64 = rng.gen_range(15..1_000_000);
        let r: u64 = rng.gen_range(pq + 1..=4 * pq);
        let u: i128 = rng.gen_range(-(pq as i128) * 10..pq as i128 * 10);
        let alpha: i128 = rng.gen_range(0..pq as i128 * 10);
        let beta = alpha + rng.gen_range(1..5);
        let Ok(idx) = TargetIndex::place(u, alpha, r, pq) else { continue };
        // alpha < k/r < beta, in integers
        let k = idx.k as i128;
        assert!(alpha * (r as i128) < k && k < beta * r as i128, "u={u} alpha={alpha} r={r} pq={pq}");
    }
}

mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn structure_inequalities(l_half in 0u64..5, p_idx in 0usize..200, j in 1u64..4) {
            let l = 2 * l_half + 1;
            let primes = primes_up_to(3000);
            let p = primes[(p_idx + 10).min(primes.len() - 1)];
            if let Ok((w, _, _)) = residue_w(l, p) {
                let q = nth_prime_in_ap(w, (p + l) * p / 2, j).unwrap();
                let (rho, sigma, s, tau) = structure_constants(l, p, q).unwrap();
                prop_assert_eq!(sigma, (p + l) / 2);
                prop_assert_eq!(rho, (p + l) / 2 * s + tau);
                prop_assert!(tau < (p + l) / 2);
                prop_assert!(2 * rho < q);
                prop_assert!(q >= s * p + 1 && q >= (tau + 1) * p);
                prop_assert!(s >= l + 2);
            }
        }

        #[test]
        fn placement_invariants(u in -1_000_000i128..1_000_000, alpha in 0i128..1_000_000) {
            let (r, pq) = (14813u64, 1177u64);
            if let Ok(idx) = TargetIndex::place(u, alpha, r, pq) {
                prop_assert!(idx.alpha * (r as i128) < idx.k as i128);
                prop_assert!(idx.k as i128 - (pq as i128) <= idx.alpha * r as i128);
                prop_assert_eq!(TargetIndex::alpha_for(idx.k, r), alpha);
            }
        }
    }
}
