//! The random-walk transition operator and harmonic functions.

use energy_network::models::random_connected;
use energy_network::operators::{
    harmonic_kernel_dimensions, harmonic_verdict, transition_operator,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> energy_network::Result<()> {
    let net = random_connected(&mut ChaCha8Rng::seed_from_u64(7), 10, 6);
    let t = transition_operator(&net)?;
    println!("asymmetry {:.2e}", t.asymmetry);
    println!("Laplacian = c(I - P) defect {:.2e}", t.factorization_defect);
    println!("spectral radius {:.15}", t.spectrum.spectral_radius());
    if let Some(gap) = t.spectrum.gap() {
        println!("spectral gap {gap:.9}");
    }

    let constant = vec![2.5; net.vertex_count()];
    let v = harmonic_verdict(&net, &constant, 1e-12);
    println!(
        "constant: harmonic {}, fixed by P {}",
        v.harmonic, v.fixed_point
    );
    println!(
        "kernel dimensions (Laplacian, I - P): {:?}",
        harmonic_kernel_dimensions(&net, 1e-10)
    );
    Ok(())
}
