//! Long-running gateways: one vector set serves many generations, with
//! each gateway cycling through its vectors as packets arrive.
//!
//! Run with `cargo run --example multi_generation`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncf::{
    decode_at_server, generate_encoding_vectors, infer_connectivity, DecodeStatus, Field,
    GatewayEncoder, NativePacket,
};

fn main() {
    let field = Field::gf128();
    let mut rng = ChaCha8Rng::seed_from_u64(3);

    // Six nodes, two gateways, disjoint halves.
    let log: Vec<(usize, usize)> = (0..6).map(|i| (i / 3, i)).collect();
    let mesh = infer_connectivity(&log, 6, 2).unwrap();
    let (_, vectors) = generate_encoding_vectors(&mesh, &field, &mut rng);

    // A stateful encoder per gateway. The vector cursor persists across
    // generations: three vectors each, so a generation consuming two
    // starts the next one mid-cycle and wraps around.
    let mut encoders: Vec<GatewayEncoder> = (0..2)
        .map(|j| GatewayEncoder::new(j, vectors.for_gateway(j).to_vec()))
        .collect();

    for generation in 0..5u32 {
        // A random subset of nodes transmits each generation.
        let mut nodes: Vec<usize> = (0..6).collect();
        nodes.shuffle(&mut rng);
        let transmitting = &nodes[..2 + (generation as usize % 3)];

        let mut coded = Vec::new();
        for (j, encoder) in encoders.iter_mut().enumerate() {
            let heard: Vec<NativePacket> = transmitting
                .iter()
                .filter(|&&i| mesh.get(i, j))
                .map(|&i| NativePacket::new(i, generation, vec![i as u8; 4]))
                .collect();
            coded.extend(encoder.encode(&heard, &field).unwrap());
        }

        let decoded = decode_at_server(&coded, &field).unwrap();
        // Whatever was recovered is exact; a partial decode (a singular
        // random draw, rarer as the field grows) names the nodes it lost.
        for (node, payload) in &decoded.recovered {
            assert_eq!(payload, &vec![*node as u8; 4]);
        }
        match decoded.status {
            DecodeStatus::Full => println!(
                "generation {generation}: {} uplinks -> {} coded packets, all recovered",
                transmitting.len(),
                coded.len()
            ),
            DecodeStatus::Partial => println!(
                "generation {generation}: {} uplinks -> {} coded packets, {} recovered, lost {:?}",
                transmitting.len(),
                coded.len(),
                decoded.recovered.len(),
                decoded.unrecovered
            ),
            DecodeStatus::Empty => {
                println!("generation {generation}: nothing reached any gateway")
            }
        }
    }
}
