//! The acceptance gate: one test per criterion, each printing a single
//! PASS line (run with `--nocapture` to see them).  Criteria cover the
//! exact quantum identities, the derivation certificates, the contextual
//! block, the sampler statistics, and the randomized property suites.

use std::time::{Duration, Instant};

use epistemic_logic::{
    check_trace, derive, epistemic_clash, parse_formula, Agent, AgentInstance, Atom,
    EngineConfig, Formula, PremiseEntry, PremiseRole, RuleId, SearchGoal, TimeSet, TrustMode,
    TrustRelation,
};
use fr_derivation::{
    certify_block, collapsed_prediction, encode_premises, naive_closure, null_conclusion,
    reproduce_agent_variants, reproduce_contradiction, trust,
};
use fr_protocol::{
    build_global_state, chi, p_chi, product_basis, record_projector, sample_until_halt, w_basis,
    Lab, SystemOutcome,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use quantum_core::{ratio, FieldElement, Ket, Projector, Symbol};

fn rational(n: i64, d: i64) -> FieldElement {
    FieldElement::from_rational(ratio(n, d))
}

fn lab_ket(lab: Lab, terms: &[(Symbol, Symbol, FieldElement)]) -> Ket {
    let mut ket = Ket::zero(&lab.roster()).unwrap();
    for (sys, rec, amp) in terms {
        ket.add_term(&[*sys, *rec], amp.clone()).unwrap();
    }
    ket
}

#[test]
fn criterion_01_joint_nonnull_probability_is_one_twelfth() {
    let start = Instant::now();
    let both = Projector::new(vec![chi(Lab::L1).tensor(&chi(Lab::L2)).unwrap()]).unwrap();
    let probability = both.born_probability(&build_global_state()).unwrap();
    assert_eq!(probability, rational(1, 12));
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "acceptance 01 PASS: P(nonnull, nonnull) = 1/12 exactly ({elapsed:?})"
    );
}

#[test]
fn criterion_02_three_line_factorization_matches_the_global_state() {
    let start = Instant::now();
    let one = FieldElement::one;
    let inv_sqrt3 = FieldElement::sqrt3().scaled(&ratio(1, 3));
    let line1 = lab_ket(
        Lab::L1,
        &[(Symbol::Phi, Symbol::Xi, one()), (Symbol::Psi, Symbol::Zeta, one())],
    )
    .tensor(&lab_ket(
        Lab::L2,
        &[
            (Symbol::Phi, Symbol::Xi, one()),
            (Symbol::Psi, Symbol::Zeta, rational(1, 2)),
        ],
    ))
    .unwrap()
    .scaled(&inv_sqrt3);
    let line2 = lab_ket(
        Lab::L1,
        &[(Symbol::Phi, Symbol::Xi, one()), (Symbol::Psi, Symbol::Zeta, -one())],
    )
    .tensor(&lab_ket(
        Lab::L2,
        &[(Symbol::Phi, Symbol::Xi, one()), (Symbol::Psi, Symbol::Zeta, one())],
    ))
    .unwrap()
    .scaled(&inv_sqrt3.scaled(&ratio(-1, 4)));
    let line3 = chi(Lab::L1)
        .tensor(&chi(Lab::L2))
        .unwrap()
        .scaled(&inv_sqrt3.scaled(&ratio(1, 2)));
    let recombined = line1.try_add(&line2).unwrap().try_add(&line3).unwrap();
    assert_eq!(recombined, build_global_state());
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    println!(
        "acceptance 02 PASS: three-line decomposition rebuilds the global state exactly ({elapsed:?})"
    );
}

#[test]
fn criterion_03_psi_branch_null_certainty() {
    let branch = record_projector(Lab::L1, SystemOutcome::Psi)
        .project(&build_global_state())
        .unwrap();
    assert_eq!(branch.norm_sq(), rational(2, 3));
    // Renormalize: sqrt(3/2) = sqrt6/2 stays inside the field.
    let renormalized = branch.scaled(&FieldElement::sqrt6().scaled(&ratio(1, 2)));
    assert!(renormalized.is_normalized());
    assert_eq!(
        p_chi(Lab::L2).born_probability(&renormalized).unwrap(),
        FieldElement::zero()
    );
    println!(
        "acceptance 03 PASS: in the psi branch the lab-two chi-measure is null exactly"
    );
}

#[test]
fn criterion_04_nonnull_click_leaves_only_the_psi_record() {
    let projected = p_chi(Lab::L1).project(&build_global_state()).unwrap();
    for (key, _) in projected.terms() {
        assert_eq!(key[2], Symbol::Psi, "support leaked outside psi on S2");
        assert_eq!(key[3], Symbol::Zeta, "support leaked outside zeta on F2");
    }
    assert_eq!(projected.norm_sq(), rational(1, 6));
    let renormalized = projected.scaled(&FieldElement::sqrt6());
    assert!(renormalized.is_normalized());
    assert_eq!(
        record_projector(Lab::L2, SystemOutcome::Psi)
            .born_probability(&renormalized)
            .unwrap(),
        FieldElement::one()
    );
    println!(
        "acceptance 04 PASS: nonnull lab-one click has support psi (x) zeta, weight 1/6, conditional certainty 1"
    );
}

#[test]
fn criterion_05_naive_contradiction_certificate() {
    let start = Instant::now();
    let certificate = reproduce_contradiction().unwrap();
    let elapsed = start.elapsed();

    assert_eq!(certificate.agent, Agent::W2);
    assert!(certificate.trace.len() <= 40);
    assert!(certificate
        .trace
        .contains(&collapsed_prediction(TrustMode::Naive)));
    let last = certificate.trace.steps.last().unwrap();
    assert_eq!(last.rule, RuleId::ConditionS);
    assert_eq!(
        epistemic_clash(&last.formula).map(|i| i.agent),
        Some(Agent::W2)
    );
    // Independent validation, from freshly encoded premises.
    check_trace(
        &certificate.trace,
        &encode_premises(TrustMode::Naive).unwrap(),
        &trust(TrustMode::Naive),
    )
    .unwrap();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!(
        "acceptance 05 PASS: naive trust derives the top observer's clash in {} checked steps through the collapsed prediction ({elapsed:?})",
        certificate.trace.len()
    );
}

#[test]
fn criterion_06_per_agent_variants() {
    let variants = reproduce_agent_variants().unwrap();
    let agents: Vec<Agent> = variants.iter().map(|c| c.agent).collect();
    assert_eq!(agents, vec![Agent::F1, Agent::F2, Agent::W1]);
    let premises = encode_premises(TrustMode::Naive).unwrap();
    let relation = trust(TrustMode::Naive);
    for certificate in &variants {
        let waypoint = null_conclusion(certificate.agent, TrustMode::Naive).unwrap();
        assert!(certificate.trace.contains(&waypoint));
        assert_eq!(
            certificate.trace.steps.last().unwrap().rule,
            RuleId::ConditionS
        );
        check_trace(&certificate.trace, &premises, &relation).unwrap();
    }
    println!(
        "acceptance 06 PASS: F1, F2, and W1 each derive their own clash through their collapsed null-conclusions"
    );
}

#[test]
fn criterion_07_contextual_block_certificate() {
    let start = Instant::now();
    let naive = naive_closure().unwrap();
    let block = certify_block(naive.rounds() + 4).unwrap();
    let elapsed = start.elapsed();

    // certify_block has already verified: fixpoint reached, no clash shape
    // anywhere in the closure, no dressing of the collapsed prediction,
    // premises retained.  Spot-check the clash scan independently.
    assert!(block
        .closure()
        .formulas()
        .all(|f| epistemic_clash(f).is_none()));
    assert!(!block
        .closure()
        .contains_up_to_contexts(&collapsed_prediction(TrustMode::Naive)));
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!(
        "acceptance 07 PASS: contextual saturation closes at {} formulas in {} rounds with no clash and no collapsed prediction ({elapsed:?})",
        block.fixpoint_size(),
        block.rounds()
    );
}

#[test]
fn criterion_08_contextual_closure_is_naive_monotone() {
    let naive = naive_closure().unwrap();
    let block = certify_block(naive.rounds() + 4).unwrap();
    for formula in block.closure().formulas() {
        assert!(
            naive.contains(&formula.strip_contexts()),
            "contextual conclusion {formula} is not naive-derivable"
        );
    }
    println!(
        "acceptance 08 PASS: all {} contextual conclusions appear, tags erased, among the {} naive ones",
        block.closure().len(),
        naive.len()
    );
}

#[test]
fn criterion_09_sampler_statistics() {
    let start = Instant::now();
    const MIN_RUNS: u64 = 10_000;
    const MIN_TRIALS: u64 = 120_000;
    let mut trials = 0u64;
    let mut halts = 0u64;
    let mut seed = 0u64;
    while halts < MIN_RUNS || trials < MIN_TRIALS {
        let run = sample_until_halt(seed, 100_000).unwrap();
        seed += 1;
        trials += run.len() as u64;
        assert!(run.last().unwrap().halted);
        halts += 1;
    }
    let p = 1.0 / 12.0;
    let freq = halts as f64 / trials as f64;
    let sigma = (p * (1.0 - p) / trials as f64).sqrt();
    assert!(
        (freq - p).abs() < 3.0 * sigma,
        "frequency {freq} is more than 3 sigma from {p}"
    );
    let mean = trials as f64 / halts as f64;
    assert!((mean - 12.0).abs() < 0.6, "mean halting round {mean}");
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!(
        "acceptance 09 PASS: {trials} trials, {halts} halts, frequency {freq:.5} within 3 sigma of 1/12, mean round {mean:.3} within 5% of 12 ({elapsed:?})"
    );
}

fn arb_field_element() -> impl Strategy<Value = FieldElement> {
    let coord = (-12i64..=12, 1i64..=9).prop_map(|(n, d)| ratio(n, d));
    (coord.clone(), coord.clone(), coord.clone(), coord)
        .prop_map(|(a, b, c, d)| FieldElement::new(a, b, c, d))
}

fn arb_lab_ket() -> impl Strategy<Value = Ket> {
    proptest::collection::vec(arb_field_element(), 4).prop_map(|amps| {
        let keys = [
            [Symbol::Phi, Symbol::Xi],
            [Symbol::Phi, Symbol::Zeta],
            [Symbol::Psi, Symbol::Xi],
            [Symbol::Psi, Symbol::Zeta],
        ];
        let mut ket = Ket::zero(&Lab::L1.roster()).unwrap();
        for (key, amp) in keys.iter().zip(amps) {
            ket.add_term(key, amp).unwrap();
        }
        ket
    })
}

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    })
}

#[test]
fn criterion_10_property_suites_at_one_thousand_cases() {
    // Field axioms.
    runner()
        .run(
            &(arb_field_element(), arb_field_element(), arb_field_element()),
            |(a, b, c)| {
                prop_assert_eq!(&(&a + &b), &(&b + &a));
                prop_assert_eq!(&(&a * &b), &(&b * &a));
                prop_assert_eq!(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c)));
                prop_assert_eq!(&(&(&a * &b) * &c), &(&a * &(&b * &c)));
                if !a.is_zero() {
                    prop_assert!((&a * &a.inverse().unwrap()).is_one());
                }
                Ok(())
            },
        )
        .unwrap();

    // Projector idempotence, over random orthonormal sub-spans.
    runner()
        .run(
            &(any::<bool>(), 1u8..16, arb_lab_ket()),
            |(entangled, mask, state)| {
                let basis = if entangled {
                    w_basis(Lab::L1)
                } else {
                    product_basis(Lab::L1)
                };
                let span: Vec<Ket> = basis
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, b)| b)
                    .collect();
                let projector = Projector::new(span).unwrap();
                let once = projector.project(&state).unwrap();
                let twice = projector.project(&once).unwrap();
                prop_assert_eq!(twice, once);
                Ok(())
            },
        )
        .unwrap();

    // Completeness of the entangled measurement basis.
    runner()
        .run(&arb_lab_ket(), |target| {
            let mut recombined = Ket::zero(&Lab::L1.roster()).unwrap();
            for b in w_basis(Lab::L1) {
                let coefficient = b.inner(&target).unwrap();
                recombined = recombined.try_add(&b.scaled(&coefficient)).unwrap();
            }
            prop_assert_eq!(recombined, target);
            Ok(())
        })
        .unwrap();

    // Parse/print round-trip.
    runner()
        .run(&arb_formula(), |formula| {
            let reparsed = parse_formula(&formula.to_string()).unwrap();
            prop_assert_eq!(reparsed, formula.canonicalize());
            Ok(())
        })
        .unwrap();

    // Trace replay: every saturated formula re-checks.
    runner()
        .run(
            &proptest::collection::vec(arb_formula(), 2..=3),
            |formulas| {
                let premises: Vec<PremiseEntry> = formulas
                    .into_iter()
                    .enumerate()
                    .map(|(i, f)| {
                        PremiseEntry::new(&format!("input-{i}"), PremiseRole::ScenarioFact, f)
                    })
                    .collect();
                let relation = TrustRelation::new(TrustMode::Naive, Vec::new());
                let config = EngineConfig {
                    max_rounds: 6,
                    max_formulas: 4000,
                    ..EngineConfig::default()
                };
                let derivation =
                    derive(&premises, &relation, &SearchGoal::Saturate, &config).unwrap();
                for formula in derivation.formulas() {
                    let trace = derivation.trace_of(formula).unwrap();
                    prop_assert!(check_trace(&trace, &premises, &relation).is_ok());
                }
                Ok(())
            },
        )
        .unwrap();

    println!(
        "acceptance 10 PASS: field axioms, projector idempotence, basis completeness, parse/print round-trip, and trace replay each hold over 1000 randomized cases"
    );
}

fn arb_formula() -> impl Strategy<Value = Formula> {
    let instance = (
        prop_oneof![
            Just(Agent::F1),
            Just(Agent::F2),
            Just(Agent::W1),
            Just(Agent::W2)
        ],
        (1u8..32),
    )
        .prop_map(|(agent, mask)| {
            let times: Vec<u8> = (0..=TimeSet::MAX_TIME)
                .filter(|t| mask & (1 << t) != 0)
                .collect();
            AgentInstance::new(agent, TimeSet::from_times(&times).unwrap())
        });
    let leaf = proptest::sample::select(Atom::ALL.to_vec()).prop_map(Formula::atom);
    leaf.prop_recursive(3, 12, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (instance.clone(), inner).prop_map(|(i, b)| Formula::knows(i, b)),
        ]
    })
}
