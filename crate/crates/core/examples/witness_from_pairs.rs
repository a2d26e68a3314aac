//! Turning incommensurable EPR pairs into an explicit CHSH witness.
//!
//! For Ψ₁ the coefficient c is ω(|[E₁,F₁]|²) = 1/18 and the witness
//! reaches √(1 + c²), just above the classical bound 1.

use epr_bell::chsh::witness_from_epr;
use epr_bell::fixtures::{psi1_pairs, psi1_state};
use epr_bell::Tolerances;

fn main() -> epr_bell::Result<()> {
    let state = psi1_state();
    let [e1, f1, e2, f2] = psi1_pairs();
    let w = witness_from_epr(&state, &e1, &f1, &e2, &f2, &Tolerances::default())?;
    let c = w.c.expect("the construction records c");
    println!("c = {c:.15} (1/18 = {:.15})", 1.0 / 18.0);
    println!("CHSH half-value = {:.15}", w.value);
    println!("sqrt(1 + c²)    = {:.15}", (1.0 + c * c).sqrt());
    for (name, op) in ["A₁", "B₁", "A₂", "B₂"].iter().zip(w.operators()) {
        println!("\n{name} =");
        for i in 0..3 {
            let row: Vec<String> = (0..3).map(|j| format!("{:8.4}", op.local()[(i, j)].re)).collect();
            println!("  {}", row.join(" "));
        }
    }
    Ok(())
}
