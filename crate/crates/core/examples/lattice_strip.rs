//! Two geometric rails joined by rungs.

use energy_network::models::LatticeStripModel;
use energy_network::DipoleSystem;

fn main() -> energy_network::Result<()> {
    let s = LatticeStripModel::new(2.0, 3.0, 8)?;
    let net = s.network();
    let sys = DipoleSystem::new(&net)?;
    let far_top = net.index_of(&LatticeStripModel::top(8))?;
    let far_bottom = net.index_of(&LatticeStripModel::bottom(8))?;
    println!("R(a0, a8) = {:.12}", sys.resistance(net.base(), far_top));
    println!("R(a0, b8) = {:.12}", sys.resistance(net.base(), far_bottom));
    println!("R(a8, b8) = {:.12}", sys.resistance(far_top, far_bottom));
    Ok(())
}
