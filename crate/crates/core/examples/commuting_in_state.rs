//! Two projections that do not commute as operators but commute in a
//! state: both fix the vector, so ω(|[A,B]|²) = 0.

use epr_bell::epr::commutator_dispersion;
use epr_bell::fixtures::{psi0_operators, psi0_state};
use epr_bell::repro::operator_norm;
use epr_bell::{Side, SideOperator};

fn main() -> epr_bell::Result<()> {
    let state = psi0_state();
    let (a, b) = psi0_operators();
    println!("‖[A,B]‖ = {}", operator_norm(&a.commutator(&b))?);

    let space = state.space();
    let a_full = SideOperator::new(space, Side::One, a)?.embedded();
    let b_full = SideOperator::new(space, Side::One, b)?.embedded();
    println!("ω(|[A,B]|²) = {}", commutator_dispersion(&state, &a_full, &b_full)?);
    Ok(())
}
