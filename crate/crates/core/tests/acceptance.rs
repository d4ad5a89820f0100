//! Acceptance gate: runs the six verification programs and prints one
//! pass/fail line per criterion. Each criterion carries a wall-clock
//! budget; blowing a budget fails the gate even when the checks pass.

use umbral_ops::suite::run_battery;

const BUDGETS: [(&str, f64); 6] = [
    ("classical-hahn-exact", 5.0),
    ("q-half-exact", 5.0),
    ("krall-jacobi-shift", 10.0),
    ("elliptic-sigma-float", 60.0),
    ("randomized-structure", 60.0),
    ("negative-controls", 60.0),
];

#[test]
fn acceptance() {
    let outcomes = run_battery(7);
    assert_eq!(outcomes.len(), BUDGETS.len());
    let mut failures = Vec::new();
    for (outcome, (name, budget)) in outcomes.iter().zip(BUDGETS) {
        assert_eq!(outcome.name, name, "criterion order is part of the contract");
        let in_budget = outcome.seconds < budget;
        let ok = outcome.pass && in_budget;
        let label = if ok { "PASS" } else { "FAIL" };
        println!("{label} {name} ({:.2} s / {budget:.0} s)", outcome.seconds);
        if !outcome.pass {
            failures.push(format!("{name}: {}", outcome.detail));
        } else if !in_budget {
            failures.push(format!("{name}: {:.2} s over the {budget:.0} s budget", outcome.seconds));
        }
    }
    assert!(failures.is_empty(), "\n{}", failures.join("\n"));
}
