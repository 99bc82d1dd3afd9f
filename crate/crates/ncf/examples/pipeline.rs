//! End-to-end pipeline: learn the coverage matrix from a forwarding log,
//! distribute encoding vectors, encode one generation at each gateway,
//! push the coded packets through the wire format, and decode.
//!
//! Run with `cargo run --example pipeline`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ncf::{
    decode_at_server, encode_at_gateway, generate_encoding_vectors, infer_connectivity,
    CodingError, DecodeStatus, EncodedPacket, Field, NativePacket,
};

fn main() -> Result<(), CodingError> {
    // GF(2^8) makes every payload octet a field symbol, so arbitrary
    // application bytes ship as-is. (The simulation default, GF(2^7),
    // would reject symbols with the top bit set.)
    let field = Field::with_exponent(8).unwrap();

    // Calibration: during a plain-forwarding window the server logs which
    // gateway forwarded which node's uplink. Duplicates are harmless.
    let log = [
        (0, 0), (0, 1), (0, 1), // gateway 0 hears nodes 0 and 1
        (1, 1), (1, 2), (1, 3), // gateway 1 hears nodes 1, 2, 3
        (2, 3), (2, 4),         // gateway 2 hears nodes 3 and 4
    ];
    let mesh = infer_connectivity(&log, 5, 3)?;
    println!("inferred {} links over 5 nodes x 3 gateways", mesh.total_links());

    // The server assigns ownership and draws vectors, then ships each
    // gateway its own set.
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let (ownership, vectors) = generate_encoding_vectors(&mesh, &field, &mut rng);
    for j in 0..3 {
        println!("gateway {j} owns {:?}", ownership.owned_nodes(j));
    }

    // Generation 17: nodes 0, 1, 3 transmit; 2 and 4 stay silent.
    let uplinks = [
        NativePacket::new(0, 17, vec![0xde, 0xad, 0xbe, 0xef]),
        NativePacket::new(1, 17, vec![0x01, 0x02, 0x03, 0x04]),
        NativePacket::new(3, 17, vec![0x7f, 0x00, 0x7f, 0x00]),
    ];

    // Each gateway encodes what it heard; non-owned packets only feed
    // combinations, they are never forwarded on their own.
    let mut wire = Vec::new();
    for j in 0..3 {
        let heard: Vec<NativePacket> = uplinks
            .iter()
            .filter(|p| mesh.get(p.node, j))
            .cloned()
            .collect();
        for packet in encode_at_gateway(j, vectors.for_gateway(j), &heard, &field)? {
            let bytes = packet.to_bytes()?;
            println!(
                "gateway {j} -> {} bytes on the wire (coeffs {:02x?})",
                bytes.len(),
                packet.coeffs
            );
            wire.push(bytes);
        }
    }

    // Server side: parse the frames back and decode the generation.
    let parsed: Vec<EncodedPacket> = wire
        .iter()
        .map(|b| EncodedPacket::from_bytes(b))
        .collect::<Result<_, _>>()?;
    let decoded = decode_at_server(&parsed, &field)?;

    assert_eq!(decoded.status, DecodeStatus::Full);
    for p in &uplinks {
        assert_eq!(decoded.recovered.get(&p.node), Some(&p.payload));
        println!("node {}: {:02x?} recovered", p.node, p.payload);
    }
    println!(
        "{} uplinks crossed the backhaul as {} coded packets",
        uplinks.len(),
        parsed.len()
    );
    Ok(())
}
