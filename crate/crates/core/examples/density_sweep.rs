//! Vectors Ψₙ close to e₀⊗e₀ that carry incommensurable EPR pairs, with the
//! CHSH witness each of them yields.

use epr_bell::density::{build_shift_model, construct_psi_n, default_levels, density_sweep, ground_vector};
use epr_bell::Tolerances;

fn main() -> epr_bell::Result<()> {
    let ns = [2, 4, 8, 16, 32];
    let levels = default_levels(&ns);
    let model = build_shift_model(levels)?;
    let rows = density_sweep(&ground_vector(levels), &ns, &model, &Tolerances::default())?;
    println!("{:>4}  {:>14}  {:>14}  {:>8}  {:>16}", "n", "‖Ψ−Ψₙ‖", "dispersion", "verdict", "CHSH half-value");
    for r in &rows {
        println!(
            "{:>4}  {:>14.10}  {:>14.10}  {:>8}  {:>16.12}",
            r.n, r.distance, r.epr.dispersion1, r.epr.verdict, r.witness_value
        );
    }

    // A single far cut on a 102-level truncation: the state is only ever
    // handled as a vector.
    let model = build_shift_model(102)?;
    let step = construct_psi_n(&ground_vector(102), 100, &model)?;
    println!("\nn = 100 on 102 levels: ‖Ψ−Ψₙ‖ = {:.10}", step.distance);
    Ok(())
}
