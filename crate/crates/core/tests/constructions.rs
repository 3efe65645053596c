use std::collections::BTreeSet;

use qwa_core::construct::{
    cobuchi_to_buchi_positive, initial_choice, limsup_sum, synchronized_product, threshold_boolean, Acceptance,
    BooleanAutomaton, Combiner,
};
use qwa_core::oracle::enumerate_lassos;
use qwa_core::oracle::random::{random_lasso, rng};
use qwa_core::rational::{int, ratio, Rational};
use qwa_core::{
    evaluate_word, fixture, negate_weights, support_automaton, uniformize, AutomatonBuilder, Discount, FixtureName,
    LassoWord, Semantics, ValueFunction, WeightedAutomaton,
};

use Semantics::{AlmostSure, Positive};

fn w(prefix: &str, cycle: &str) -> LassoWord {
    LassoWord::parse(prefix, cycle).unwrap()
}

fn constant(c: i64) -> WeightedAutomaton {
    AutomatonBuilder::new(["a", "b"])
        .state("q")
        .initial("q", int(1))
        .edge_all_letters("q", "q", int(1), int(c))
        .build()
        .unwrap()
}

#[test]
fn initial_choice_of_fig2_twice() {
    let fig2 = fixture(FixtureName::Fig2Lf).automaton;
    let c = initial_choice(&fig2, &fig2).unwrap();
    assert_eq!(c.num_states(), 7);
    assert!(c.validate().is_empty());
}

#[test]
fn initial_choice_with_itself_keeps_values() {
    let fig3 = fixture(FixtureName::Fig3Li).automaton;
    let c = initial_choice(&fig3, &fig3).unwrap();
    for word in enumerate_lassos(fig3.alphabet(), 2, 2) {
        let f = ValueFunction::LimAvg;
        assert_eq!(evaluate_word(&c, &f, Positive, &word).unwrap(), evaluate_word(&fig3, &f, Positive, &word).unwrap());
    }
}

#[test]
fn initial_choice_takes_positive_max() {
    let c = initial_choice(&constant(0), &fixture(FixtureName::Fig2Lf).automaton).unwrap();
    assert_eq!(evaluate_word(&c, &ValueFunction::LimAvg, Positive, &w("", "b")).unwrap(), int(1));
}

#[test]
fn product_of_constants() {
    let p = synchronized_product(&constant(2), &constant(5), Combiner::Min).unwrap();
    assert_eq!(p.num_states(), 1);
    for f in [ValueFunction::Sup, ValueFunction::LimInf, ValueFunction::LimAvg] {
        assert_eq!(evaluate_word(&p, &f, Positive, &w("a", "b")).unwrap(), int(2));
    }
}

#[test]
fn product_max_of_deterministic_with_itself() {
    let da = fixture(FixtureName::DaCounter).automaton;
    let p = synchronized_product(&da, &da, Combiner::Max).unwrap();
    for word in enumerate_lassos(da.alphabet(), 2, 2) {
        let f = ValueFunction::LimAvg;
        assert_eq!(
            evaluate_word(&p, &f, AlmostSure, &word).unwrap(),
            evaluate_word(&da, &f, AlmostSure, &word).unwrap()
        );
    }
}

#[test]
fn limsup_sum_of_constants() {
    let s = limsup_sum(&constant(1), &constant(2)).unwrap();
    for word in enumerate_lassos(s.alphabet(), 1, 2) {
        for sem in [Positive, AlmostSure] {
            assert_eq!(evaluate_word(&s, &ValueFunction::LimSup, sem, &word).unwrap(), int(3));
        }
    }
}

#[test]
fn limsup_sum_of_fig4() {
    let fig4 = fixture(FixtureName::Fig4Lz).automaton;
    let s = limsup_sum(&fig4, &fig4).unwrap();
    assert_eq!(evaluate_word(&s, &ValueFunction::LimSup, Positive, &w("", "a")).unwrap(), int(2));
    assert_eq!(evaluate_word(&s, &ValueFunction::LimSup, Positive, &w("", "a.b")).unwrap(), int(0));
}

#[test]
fn alphabet_mismatch_is_rejected() {
    let other = AutomatonBuilder::new(["x"]).state("q").initial("q", int(1)).edge("q", "x", "q", int(1), int(0));
    let other = other.build().unwrap();
    assert!(initial_choice(&constant(0), &other).is_err());
    assert!(synchronized_product(&constant(0), &other, Combiner::Max).is_err());
    assert!(limsup_sum(&constant(0), &other).is_err());
}

#[test]
fn threshold_extremes() {
    let fig1 = fixture(FixtureName::Fig1Low).automaton;
    let all = threshold_boolean(&fig1, &int(0), Acceptance::Buchi).automaton;
    assert_eq!(all.weights(), &[int(1)]);
    let none = threshold_boolean(&fig1, &int(6), Acceptance::Buchi).automaton;
    assert_eq!(none.weights(), &[int(0)]);
}

#[test]
fn threshold_fig4_buchi() {
    let t = threshold_boolean(&fixture(FixtureName::Fig4Lz).automaton, &int(1), Acceptance::Buchi);
    assert!(t.automaton.weights().iter().all(|x| *x == int(0) || *x == int(1)));
    let f = ValueFunction::LimSup;
    assert_eq!(evaluate_word(&t.automaton, &f, Positive, &w("", "a")).unwrap(), int(1));
    assert_eq!(evaluate_word(&t.automaton, &f, Positive, &w("", "a.b")).unwrap(), int(0));
}

#[test]
fn cobuchi_to_buchi_on_fig2() {
    let t = threshold_boolean(&fixture(FixtureName::Fig2Lf).automaton, &int(1), Acceptance::CoBuchi);
    let accepting = t.accepting_states();
    let out = cobuchi_to_buchi_positive(&t, &accepting).unwrap();
    assert_eq!(out.automaton.num_states(), 6);
    assert_eq!(out.acceptance, Acceptance::Buchi);
    let word = w("", "b");
    assert_eq!(evaluate_word(&t.automaton, &ValueFunction::LimInf, Positive, &word).unwrap(), int(1));
    assert_eq!(evaluate_word(&out.automaton, &ValueFunction::LimSup, Positive, &word).unwrap(), int(1));
}

#[test]
fn cobuchi_to_buchi_with_nothing_accepting() {
    let t = threshold_boolean(&fixture(FixtureName::Fig3Li).automaton, &int(1), Acceptance::CoBuchi);
    let out = cobuchi_to_buchi_positive(&t, &BTreeSet::new()).unwrap().automaton;
    for word in enumerate_lassos(out.alphabet(), 2, 2) {
        assert_eq!(evaluate_word(&out, &ValueFunction::LimSup, Positive, &word).unwrap(), int(0));
    }
}

#[test]
fn cobuchi_to_buchi_needs_dirac_initial() {
    let a = AutomatonBuilder::new(["a"])
        .states(["p", "q"])
        .initial("p", ratio(1, 2))
        .initial("q", ratio(1, 2))
        .edge_all_letters("p", "p", int(1), int(1))
        .edge_all_letters("q", "q", int(1), int(0))
        .build()
        .unwrap();
    let b = BooleanAutomaton::new(a, Acceptance::CoBuchi).unwrap();
    assert!(cobuchi_to_buchi_positive(&b, &BTreeSet::new()).is_err());
}

#[test]
fn boolean_automaton_rejects_other_weights() {
    assert!(BooleanAutomaton::new(constant(2), Acceptance::Buchi).is_err());
}

#[test]
fn uniformize_skewed_split() {
    let a = AutomatonBuilder::new(["a", "b"])
        .states(["p", "q"])
        .initial("p", int(1))
        .edge("p", "a", "p", ratio(9, 10), int(1))
        .edge("p", "a", "q", ratio(1, 10), int(3))
        .edge("p", "b", "q", int(1), int(0))
        .edge_all_letters("q", "p", int(1), int(2))
        .build()
        .unwrap();
    let u = uniformize(&support_automaton(&a)).unwrap();
    let probs: Vec<Rational> = u.edges(0, 0).iter().map(|e| e.probability.clone()).collect();
    assert_eq!(probs, vec![ratio(1, 2), ratio(1, 2)]);
    let f = ValueFunction::Disc(Discount::new(ratio(1, 2)).unwrap());
    let mut r = rng(50);
    for _ in 0..50 {
        let word = random_lasso(&mut r, a.alphabet(), 4, 4);
        assert_eq!(evaluate_word(&u, &f, Positive, &word).unwrap(), evaluate_word(&a, &f, Positive, &word).unwrap());
    }
}

#[test]
fn uniformize_deterministic_is_identity() {
    let da = fixture(FixtureName::DaCounter).automaton;
    assert_eq!(uniformize(&support_automaton(&da)).unwrap(), da);
}

#[test]
fn negation_is_an_involution() {
    let fig1 = fixture(FixtureName::Fig1Low).automaton;
    let neg = negate_weights(&fig1);
    assert_eq!(neg.weights(), &[int(-5), int(-2), int(-1), int(0)]);
    assert_eq!(negate_weights(&neg), fig1);
}
