//! Closed forms on the triangle.

use energy_network::models::{triangle_spectrum, TriangleModel};

fn main() -> energy_network::Result<()> {
    for (a, b, c) in [(1.0, 1.0, 1.0), (1.0, 2.0, 3.0), (0.1, 10.0, 1.0)] {
        let m = TriangleModel::new(a, b, c)?;
        let s = triangle_spectrum(&m);
        println!(
            "c = ({a}, {b}, {c}) spectrum {:?} gap {:.6} defect {:.1e}",
            s.formula, s.gap, s.max_defect
        );
        println!("  v_01 = {:?}", m.dipole(0, 1)?);
    }
    Ok(())
}
