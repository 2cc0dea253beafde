//! The edge-indexed Parseval frame and its reconstruction property.

use energy_network::energy::energy_norm_sq;
use energy_network::frame::orient;
use energy_network::models::random_connected;
use energy_network::{OrientationScheme, ParsevalFrame};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> energy_network::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let net = random_connected(&mut rng, 8, 4);
    let frame = ParsevalFrame::build(&net, orient(&net, OrientationScheme::Lexicographic)?)?;
    let d = frame.diagnostics(&net);
    println!(
        "{} frame vectors, rank {}, redundancy {}, ONB: {}",
        frame.len(),
        d.rank,
        d.redundancy,
        d.is_onb
    );

    let u: Vec<f64> = (0..net.vertex_count()).map(|k| (k as f64).sin()).collect();
    let coeffs = frame.analysis(&net, &u);
    let sum: f64 = coeffs.iter().map(|c| c * c).sum();
    println!(
        "sum |<w_e,u>|^2 = {sum:.12}, ||u||^2 = {:.12}",
        energy_norm_sq(&net, &u)
    );

    let back = frame.synthesis(&coeffs);
    let shift = u[net.base()];
    let gap = u
        .iter()
        .zip(back.values())
        .map(|(a, b)| (a - shift - b).abs())
        .fold(0.0, f64::max);
    println!("reconstruction gap modulo constants: {gap:.2e}");
    Ok(())
}
