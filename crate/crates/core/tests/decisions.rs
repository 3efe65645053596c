use qwa_core::decide::{
    closure, decide, decide_disc, decide_sup, decide_sup_with_witness, optimal_discounted_value, ChoiceGraph, Closure,
    ClosureOp, DecisionProblem, Mode, ProblemKind, Status,
};
use qwa_core::rational::{int, ratio};
use qwa_core::{
    classify, evaluate_word, fixture, AutomatonBuilder, Discount, Error, FixtureName, Semantics, ValueFunction,
    ValueKind, WeightedAutomaton,
};

use Semantics::{AlmostSure, Nondeterministic, Positive, Universal};

const ALL_SEMANTICS: [Semantics; 4] = [Positive, AlmostSure, Nondeterministic, Universal];

fn loops(wa: i64, wb: i64) -> WeightedAutomaton {
    AutomatonBuilder::new(["a", "b"])
        .state("q")
        .initial("q", int(1))
        .edge("q", "a", "q", int(1), int(wa))
        .edge("q", "b", "q", int(1), int(wb))
        .build()
        .unwrap()
}

#[test]
fn classification_examples() {
    assert_eq!(classify(ValueKind::LimSup, Positive, ProblemKind::Emptiness).status, Status::Undecidable);
    assert_eq!(classify(ValueKind::Sup, Positive, ProblemKind::Emptiness).status, Status::Decidable);
    assert_eq!(classify(ValueKind::LimAvg, Positive, ProblemKind::Emptiness).status, Status::Open);
    assert_eq!(classify(ValueKind::LimInf, AlmostSure, ProblemKind::Emptiness).status, Status::Undecidable);
    let footnote = classify(ValueKind::Disc, Positive, ProblemKind::Universality);
    assert_eq!(footnote.status, Status::Open);
    assert!(footnote.note.is_some());
}

#[test]
fn closure_cells() {
    assert_eq!(closure(ValueKind::LimSup, Positive, ClosureOp::Complement), Some(Closure::Closed));
    assert_eq!(closure(ValueKind::LimAvg, AlmostSure, ClosureOp::Max), Some(Closure::NotClosed));
    assert_eq!(closure(ValueKind::LimAvg, Positive, ClosureOp::Sum), Some(Closure::Open));
}

#[test]
fn fig1_reaches_the_expensive_ack() {
    let a = fixture(FixtureName::Fig1Low).automaton;
    let d = decide_sup_with_witness(&a, Positive, &DecisionProblem::emptiness(int(5))).unwrap();
    assert!(d.holds);
    let witness = d.witness.unwrap().word;
    assert!(evaluate_word(&a, &ValueFunction::Sup, Positive, &witness).unwrap() >= int(5));
}

#[test]
fn threshold_extremes_for_every_semantics() {
    let a = fixture(FixtureName::Fig1High).automaton;
    let (lo, hi) = (a.min_weight().unwrap().clone(), a.max_weight().unwrap() + int(1));
    for s in ALL_SEMANTICS {
        assert!(decide_sup(&a, s, &DecisionProblem::emptiness(lo.clone())).unwrap());
        assert!(decide_sup(&a, s, &DecisionProblem::universality(lo.clone())).unwrap());
        assert!(!decide_sup(&a, s, &DecisionProblem::emptiness(hi.clone())).unwrap());
        assert!(!decide_sup(&a, s, &DecisionProblem::universality(hi.clone())).unwrap());
    }
}

#[test]
fn universality_counterexample_is_a_word() {
    // b never pays
    let a = loops(1, 0);
    let d = decide_sup_with_witness(&a, Universal, &DecisionProblem::universality(int(1))).unwrap();
    assert!(!d.holds);
    let word = d.witness.unwrap().word;
    assert!(evaluate_word(&a, &ValueFunction::Sup, Universal, &word).unwrap() < int(1));
}

#[test]
fn discounted_optimum() {
    let half = Discount::new(ratio(1, 2)).unwrap();
    let g = ChoiceGraph::from_automaton(&loops(1, 0));
    assert_eq!(optimal_discounted_value(&g, &half, Mode::Max).unwrap(), vec![int(2)]);
    assert_eq!(optimal_discounted_value(&g, &half, Mode::Min).unwrap(), vec![int(0)]);

    let alternating = AutomatonBuilder::new(["a"])
        .states(["p", "q"])
        .initial("p", int(1))
        .edge("p", "a", "q", int(1), int(1))
        .edge("q", "a", "p", int(1), int(0))
        .build()
        .unwrap();
    let g = ChoiceGraph::from_automaton(&alternating);
    assert_eq!(optimal_discounted_value(&g, &half, Mode::Max).unwrap()[0], ratio(4, 3));
}

#[test]
fn discounted_emptiness() {
    let half = Discount::new(ratio(1, 2)).unwrap();
    let a = loops(1, 1);
    assert!(decide_disc(&a, &half, Positive, &DecisionProblem::emptiness(int(2))).unwrap());
    assert!(!decide_disc(&a, &half, Positive, &DecisionProblem::emptiness(int(2) + ratio(1, 1000))).unwrap());
    assert!(decide_disc(&a, &half, AlmostSure, &DecisionProblem::universality(int(2))).unwrap());
    assert!(decide_disc(&a, &half, Positive, &DecisionProblem::universality(int(2))).is_err());
}

#[test]
fn undecidable_cells_are_refused() {
    let a = loops(1, 0);
    let err = decide(&a, &ValueFunction::LimSup, Positive, &DecisionProblem::emptiness(int(1))).unwrap_err();
    assert!(matches!(err, Error::NotDecidable(ref e) if e.status == Status::Undecidable));
    // decidable, but no procedure
    let err = decide(&a, &ValueFunction::LimSup, AlmostSure, &DecisionProblem::emptiness(int(1))).unwrap_err();
    assert!(matches!(err, Error::NotDecidable(ref e) if e.status == Status::Decidable));
}
