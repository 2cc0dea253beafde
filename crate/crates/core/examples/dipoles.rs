//! Dipoles, the Gramian and effective resistance.

use energy_network::energy::energy_distance;
use energy_network::models::TriangleModel;
use energy_network::DipoleSystem;

fn main() -> energy_network::Result<()> {
    let net = TriangleModel::new(1.0, 2.0, 3.0)?.network();
    let sys = DipoleSystem::new(&net)?;

    let v = sys.dipole_between(1, 2);
    println!("v_12 = {:?}", v.values());
    println!("Gramian over V' =\n{}", sys.gramian());

    for (x, y) in [(0, 1), (0, 2), (1, 2)] {
        let a = sys.dipole(x);
        let b = sys.dipole(y);
        println!(
            "R({x},{y}) = {:.12}  ||v_x - v_y||^2 = {:.12}",
            sys.resistance(x, y),
            energy_distance(&net, a.values(), b.values()).powi(2),
        );
    }
    Ok(())
}
