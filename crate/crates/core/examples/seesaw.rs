//! Seeded see-saw maximization of the CHSH half-value.
//!
//! On Ψ₂ = ½ e₀⊗e₀ + (√3/2) e₁⊗e₁ it matches the closed-form two-qubit
//! maximum √7/2; on a random 3⊗3 state it reports whatever the restarts
//! reach, with the objective history checked for monotonicity.

use epr_bell::chsh::{horodecki_bound, seesaw, SeesawParams};
use epr_bell::fixtures::psi2_state;
use epr_bell::sampling::random_pure_state;
use epr_bell::BipartiteSpace;

fn main() -> epr_bell::Result<()> {
    let params = SeesawParams {
        seed: 7,
        ..SeesawParams::default()
    };

    let psi2 = psi2_state();
    let run = seesaw(&psi2, &params)?;
    println!("Ψ₂: see-saw {:.10}, exact {:.10}", run.witness.value, horodecki_bound(&psi2)?);
    println!("    best restart {} of {}", run.best_restart, params.restarts);

    let state = random_pure_state(BipartiteSpace::new(3, 3)?, 2024);
    let run = seesaw(&state, &params)?;
    println!("random 3⊗3: see-saw {:.10}", run.witness.value);
    println!("    largest decrease along any history: {:.2e}", run.worst_decrease());
    Ok(())
}
