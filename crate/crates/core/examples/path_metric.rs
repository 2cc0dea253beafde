//! Resistance on a weighted path, and whether it stays bounded.

use energy_network::models::{bounded_metric_probe, path_closed_forms, PathModel};

fn main() -> energy_network::Result<()> {
    let m = PathModel::new(vec![1.0, 2.0, 4.0])?;
    println!("R(0,3) = {}", m.distance(0, 3)?);
    let c = path_closed_forms(&m, 1, 3)?;
    println!(
        "closed form vs solver: dipole {:.1e}, distance {:.1e}",
        c.dipole_defect, c.distance_defect
    );

    for (label, probe) in [
        (
            "a_n = 2^n",
            bounded_metric_probe(|n| 2f64.powi(n as i32), 160)?,
        ),
        ("a_n = n^2", bounded_metric_probe(|n| (n * n) as f64, 160)?),
        ("a_n = 1", bounded_metric_probe(|_| 1.0, 160)?),
    ] {
        println!(
            "{label}: {} (last checkpoint {:.9})",
            probe.classification.metric_label(),
            probe.limit()
        );
    }
    Ok(())
}
