//! Perfect correlations in the 3⊗3 vector
//! Ψ₁ = (1/3) e₀⊗e₀ + (1/3) e₁⊗e₁ + (√7/3) e₂⊗e₂
//! for two projection pairs whose members fail to commute in the state.

use epr_bell::epr::{joint_distribution, verify_incommensurable_epr};
use epr_bell::fixtures::{psi1_pairs, psi1_state};
use epr_bell::Tolerances;

fn main() -> epr_bell::Result<()> {
    let state = psi1_state();
    let [e1, f1, e2, f2] = psi1_pairs();

    let report = verify_incommensurable_epr(&state, &e1, &f1, &e2, &f2, &Tolerances::default())?;
    println!("ω((E₁−E₂)²) = {:.3e}", report.defect_e);
    println!("ω((F₁−F₂)²) = {:.3e}", report.defect_f);
    println!("ω(|[E₁,F₁]|²) = {:.12}", report.dispersion1);
    println!("ω(|[E₂,F₂]|²) = {:.12}", report.dispersion2);
    println!("incommensurable EPR pairs: {}", report.verdict);

    for (name, a, b) in [("(E₁,E₂)", &e1, &e2), ("(F₁,F₂)", &f1, &f2)] {
        let mu = joint_distribution(&state, a, b)?;
        println!("\njoint distribution of {name}, diagonal mass {:.12}", mu.diagonal_mass);
        for atom in &mu.atoms {
            println!("  ({:.0}, {:.0}) with probability {:.12}", atom.x, atom.y, atom.p);
        }
    }
    Ok(())
}
