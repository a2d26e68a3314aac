//! Which projections on one side have a partner on the other side with
//! (E ⊗ I)Ψ = (I ⊗ F)Ψ, and what that says about incommensurable pairs and
//! anticommuting pairs.

use epr_bell::epr::{epr_partner_projection, mirror_structure, sample_mirror_projection};
use epr_bell::fixtures::{half_block, psi1_state, psi2_state, schmidt_diagonal_state, singlet_state};
use epr_bell::sampling::rng;
use epr_bell::{QuantumState, Side, SideOperator};

fn describe(name: &str, state: &QuantumState) -> epr_bell::Result<()> {
    let m = mirror_structure(state, Side::One)?;
    let blocks: Vec<String> = m.blocks.iter().map(|(x, d)| format!("{x:.4}×{d}")).collect();
    println!(
        "{name:<10} blocks [{}]  incommensurable pairs possible: {:<5}  anticommuting pair possible: {}",
        blocks.join(", "),
        m.admits_incommensurable_pairs(),
        m.admits_anticommuting_pair()
    );
    Ok(())
}

fn main() -> epr_bell::Result<()> {
    let (a, b) = (0.6f64.sqrt() / 2f64.sqrt(), 0.4f64.sqrt() / 2f64.sqrt());
    describe("Ψ₁", &psi1_state())?;
    describe("Ψ₂", &psi2_state())?;
    describe("singlet", &singlet_state())?;
    describe("(a,a,b,b)", &schmidt_diagonal_state(&[a, a, b, b]))?;

    let psi1 = psi1_state();
    let e = SideOperator::new(psi1.space(), Side::One, half_block())?;
    let partner = epr_partner_projection(&psi1, &e)?.expect("the half block commutes with the reduced density");
    println!("\npartner of the half block on side 2:\n{:?}", partner.local());

    let mut r = rng(1);
    let sampled = sample_mirror_projection(&psi1, Side::One, &mut r)?;
    let found = epr_partner_projection(&psi1, &sampled)?.is_some();
    println!("random mirror projection of rank {:.0} has a partner: {found}", sampled.local().trace().re);
    Ok(())
}
