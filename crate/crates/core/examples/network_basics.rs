//! Build a network in code, round-trip it through JSON and inspect it.

use energy_network::{Network, NetworkDocument};

fn main() -> energy_network::Result<()> {
    let net = Network::new(
        vec!["s", "a", "b", "t"],
        "t",
        vec![
            ("s", "a", 1.0),
            ("s", "b", 2.0),
            ("a", "b", 0.5),
            ("a", "t", 2.0),
            ("b", "t", 1.0),
        ],
    )?;
    println!(
        "{} vertices, {} edges, base {}",
        net.vertex_count(),
        net.edge_count(),
        net.name(net.base())
    );
    for x in 0..net.vertex_count() {
        println!("c({}) = {}", net.name(x), net.total_conductance(x));
    }
    let json = net.to_document().to_json();
    let back = NetworkDocument::from_json(&json)?;
    println!("round trip valid: {}", back.validate().is_empty());
    println!("{json}");
    Ok(())
}
