//! Reversible walk on a binary tree with a backward step.

use energy_network::models::{depth_sweep, BinaryTreeModel};

fn main() -> energy_network::Result<()> {
    let m = BinaryTreeModel::new(0.5, 0.3, 0.2, 6)?;
    println!(
        "depth 6: {} vertices, reversibility defect {:.1e}",
        m.network().vertex_count(),
        m.reversibility_defect()
    );

    for (p0, p1, pm) in [(0.4, 0.4, 0.2), (0.25, 0.25, 0.5)] {
        let sweep = depth_sweep(p0, p1, pm, 5..=8)?;
        print!("({p0}, {p1}, {pm}):");
        for (d, e) in &sweep.energies {
            print!(" E{d} = {e:.4e}");
        }
        println!(" -> {}", sweep.classification.energy_label());
    }
    Ok(())
}
