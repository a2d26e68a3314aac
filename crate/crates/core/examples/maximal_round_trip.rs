//! A witness reaching √2 carries anticommuting projection pairs, and those
//! pairs rebuild a √2 witness. Shown on the singlet.

use epr_bell::chsh::{chsh_optimize, maximal_projections, witness_from_projections, SeesawParams};
use epr_bell::epr::side_commutator_dispersion;
use epr_bell::fixtures::singlet_state;
use epr_bell::Tolerances;

fn main() -> epr_bell::Result<()> {
    let state = singlet_state();
    let tol = Tolerances::default();
    let witness = chsh_optimize(&state, &SeesawParams::default())?;
    println!("optimized half-value {:.12}", witness.value);

    let cert = maximal_projections(&state, &witness, &tol)?;
    let p = &cert.projections;
    println!("anticommutator residual {:.3e}", cert.anticommutator_residual);
    println!("defects {:.3e} {:.3e}", cert.defects.0, cert.defects.1);
    println!("ω(|[E₁,F₁]|²) = {:.12}", side_commutator_dispersion(&state, &p.e1, &p.f1)?);
    println!("ω(|[E₂,F₂]|²) = {:.12}", side_commutator_dispersion(&state, &p.e2, &p.f2)?);

    let rebuilt = witness_from_projections(&state, p, &tol)?;
    println!("rebuilt half-value {:.12}", rebuilt.value);
    Ok(())
}
