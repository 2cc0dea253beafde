//! Defect vectors and harmonic functions on the geometric half-line.

use energy_network::models::{deficiency_recurrence, harmonic_geometric, GeometricModel};

fn main() -> energy_network::Result<()> {
    for q in [1.0, 1.5, 2.0, 5.0] {
        let r = deficiency_recurrence(&GeometricModel::new(q, 40)?)?;
        let last = r.rows.last().unwrap();
        println!(
            "Q = {q}: u(40) = {:.6e}, energy {} ({:.6e}), transfer eigenvalues {:.6} {:.6}",
            last.value,
            r.classification.energy_label(),
            last.energy_partial,
            r.transfer_eigenvalues.0,
            r.transfer_eigenvalues.1,
        );
    }
    let h = harmonic_geometric(&GeometricModel::new(2.0, 30)?)?;
    println!(
        "harmonic Q=2: truncated energy {:.12}, limit {:.12}",
        h.truncated_energy, h.limit
    );
    Ok(())
}
