//! The Laplacian as LL* in the dipole geometry, with its spectrum.

use energy_network::models::LatticeStripModel;
use energy_network::operators::{build_k, build_l, friedrichs_matrix, greens_gauss_check};
use energy_network::DipoleSystem;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> energy_network::Result<()> {
    let net = LatticeStripModel::new(2.0, 3.0, 4)?.network();
    let sys = DipoleSystem::new(&net)?;
    let f = friedrichs_matrix(&net, &sys)?;
    println!(
        "LL* defect {:.2e} (worst vertex {})",
        f.max_defect,
        f.worst_vertex.map_or("-", |x| net.name(x))
    );

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    println!(
        "K adjointness {:.2e}",
        build_k(&sys).adjointness_defect(sys.gramian(), 20, &mut rng)
    );
    println!(
        "L adjointness {:.2e}",
        build_l(&net, &sys).adjointness_defect(sys.gramian(), 20, &mut rng)
    );
    println!("Green-Gauss defect {:.2e}", greens_gauss_check(&net, &sys));

    for (k, l) in f.spectrum.iter().enumerate() {
        println!("lambda_{k} = {l:.9}");
    }
    Ok(())
}
