//! Finite-field arithmetic: construction, the three operations, and
//! what the validator rejects.
//!
//! Run with `cargo run --example field_basics`.

use ncf::{Field, GfError};

fn main() -> Result<(), GfError> {
    // The default field, GF(2^7) reduced by x^7 + x + 1. All coefficient
    // and payload arithmetic in the pipeline happens here unless a
    // scenario picks another exponent.
    let f = Field::gf128();
    println!(
        "GF(2^{}) with {} elements, reduction mask {:#04x}, generator {:#04x}",
        f.exponent(),
        f.order(),
        f.reduction_poly(),
        f.generator()
    );

    // Addition is XOR — every element is its own negative.
    let (a, b) = (0x53, 0x31);
    println!("{a:#04x} + {b:#04x} = {:#04x}", f.add(a, b));
    assert_eq!(f.add(a, f.add(a, b)), b);

    // Multiplication runs off log/antilog tables; inversion is a single
    // exponent flip. inv(0) is the one undefined operation.
    let p = f.mul(0x02, 0x40);
    println!("0x02 · 0x40 = {p:#04x}");
    let inv = f.inv(0x02)?;
    println!("inv(0x02) = {inv:#04x}, check: {:#04x}", f.mul(0x02, inv));
    assert_eq!(f.inv(0x00), Err(GfError::ZeroInverse));

    // Any exponent from 2 to 8 works; each has a default reduction
    // polynomial, or bring your own irreducible one.
    for k in 2..=8 {
        let f = Field::with_exponent(k)?;
        println!("GF(2^{k}): order {}, poly mask {:#04x}", f.order(), f.reduction_poly());
    }

    // The AES polynomial x^8 + x^4 + x^3 + x + 1 is irreducible but not
    // primitive, so the table builder finds a generator other than x.
    let aes = Field::new(8, 0x1b)?;
    println!("GF(2^8)/AES poly: generator {:#04x}", aes.generator());

    // Reducible polynomials are rejected: x^4 + x^2 + 1 = (x^2 + x + 1)^2.
    let err = Field::new(4, 0x05).unwrap_err();
    println!("GF(2^4) with x^4 + x^2 + 1: {err}");

    Ok(())
}
