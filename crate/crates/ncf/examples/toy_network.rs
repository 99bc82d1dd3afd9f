//! The worked three-node, three-gateway mesh: plain forwarding relays
//! seven copies of three uplinks, coding forwards exactly three.
//!
//! Run with `cargo run --example toy_network`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncf::{
    decode_at_server, encode_at_gateway, generate_encoding_vectors, pure_forward,
    ConnectivityMatrix, DecodeStatus, Field, NativePacket,
};

fn main() {
    // Overlapping coverage: node 0 reaches all three gateways, node 1
    // reaches gateways 0 and 1, node 2 reaches gateways 1 and 2.
    let mesh = ConnectivityMatrix::toy();
    println!("coverage ({} nodes x {} gateways):", mesh.nodes(), mesh.gateways());
    for i in 0..mesh.nodes() {
        let row: String = (0..mesh.gateways())
            .map(|j| if mesh.get(i, j) { '1' } else { '.' })
            .collect();
        println!("  node {i}: {row}");
    }

    let field = Field::gf128();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (ownership, vectors) = generate_encoding_vectors(&mesh, &field, &mut rng);
    for j in 0..mesh.gateways() {
        println!(
            "gateway {j} owns nodes {:?}, holds {} encoding vectors",
            ownership.owned_nodes(j),
            vectors.for_gateway(j).len()
        );
    }

    // Everyone transmits once in generation 0.
    let uplinks: Vec<NativePacket> = (0..3)
        .map(|i| NativePacket::new(i, 0, vec![0x10 * (i as u8 + 1); 4]))
        .collect();

    // Each gateway receives the uplinks its coverage column admits.
    let received: Vec<Vec<NativePacket>> = (0..3)
        .map(|j| uplinks.iter().filter(|p| mesh.get(p.node, j)).cloned().collect())
        .collect();

    let baseline = pure_forward(&received);
    println!("pure forwarding relays {baseline} packets");

    let mut coded = Vec::new();
    for (j, heard) in received.iter().enumerate() {
        let out = encode_at_gateway(j, vectors.for_gateway(j), heard, &field).unwrap();
        println!("gateway {j} forwards {} coded packet(s)", out.len());
        coded.extend(out);
    }
    println!("coding relays {} packets", coded.len());

    let decoded = decode_at_server(&coded, &field).unwrap();
    assert_eq!(decoded.status, DecodeStatus::Full);
    for p in &uplinks {
        assert_eq!(decoded.recovered.get(&p.node), Some(&p.payload));
        println!("node {} payload recovered exactly: {:02x?}", p.node, p.payload);
    }
}
