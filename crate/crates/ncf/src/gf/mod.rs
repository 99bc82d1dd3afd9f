//! Finite-field arithmetic over GF(2^k) for 2 <= k <= 8.
//!
//! Field elements are stored as `u8` values in `[0, 2^k)`; each bit is one
//! coefficient of a polynomial over GF(2). Addition is XOR. Multiplication
//! goes through log/antilog tables built once at [`Field`] construction, so
//! per-element operations are table lookups.
//!
//! The reduction polynomial is configurable and checked for irreducibility
//! at construction (exhaustive trial division, cheap at these sizes). The
//! default field is GF(2^7) with x^7 + x + 1.

mod matrix;

pub use matrix::{mat_solve, Matrix, RankReport, Solve};

use rand::Rng;
use thiserror::Error;

/// Errors from field construction and arithmetic.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    /// Zero has no multiplicative inverse.
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    /// Matrix shapes do not allow the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// The requested field parameters do not describe a valid GF(2^k).
    #[error("invalid field: {0}")]
    InvalidField(String),
}

/// Conventional reduction polynomial (low mask, excluding the x^k term)
/// for each supported exponent. All of these are primitive.
const DEFAULT_POLYS: [u16; 9] = [0, 0, 0x3, 0x3, 0x3, 0x5, 0x3, 0x3, 0x1D];

/// A binary extension field GF(2^k) with precomputed arithmetic tables.
///
/// Immutable after construction and safe to share across threads; all
/// element operations are pure.
#[derive(Debug, Clone)]
pub struct Field {
    k: u32,
    poly: u16,
    q: u16,
    generator: u8,
    exp: Vec<u8>,
    log: Vec<u8>,
    inv: Vec<u8>,
}

impl Field {
    /// Default exponent: GF(2^7).
    pub const DEFAULT_EXP: u32 = 7;

    /// Builds GF(2^k) with the given reduction polynomial.
    ///
    /// `reduction_poly` is the bitmask of the polynomial with the leading
    /// x^k term stripped, e.g. `0x3` for x^7 + x + 1 at k = 7. The full
    /// polynomial must be irreducible over GF(2).
    pub fn new(k: u32, reduction_poly: u16) -> Result<Self, GfError> {
        if !(2..=8).contains(&k) {
            return Err(GfError::InvalidField(format!(
                "exponent {k} out of range (2..=8)"
            )));
        }
        let q: u16 = 1 << k;
        if reduction_poly >= q {
            return Err(GfError::InvalidField(format!(
                "reduction mask {reduction_poly:#x} has degree >= {k}"
            )));
        }
        let full = (1u32 << k) | u32::from(reduction_poly);
        if !is_irreducible(full, k) {
            return Err(GfError::InvalidField(format!(
                "polynomial {full:#x} is reducible over GF(2)"
            )));
        }

        let generator = find_generator(full, q).ok_or_else(|| {
            // Unreachable for an irreducible polynomial: the multiplicative
            // group of a finite field is cyclic.
            GfError::InvalidField("no generator found".into())
        })?;

        // exp is mirrored to 2(q-1) entries so products of logs index
        // without a modular reduction.
        let order = usize::from(q) - 1;
        let mut exp = vec![0u8; 2 * order];
        // log[0] stays 0 and is never read: mul() short-circuits on zero.
        let mut log = vec![0u8; usize::from(q)];
        let mut x = 1u16;
        for i in 0..order {
            exp[i] = x as u8;
            exp[i + order] = x as u8;
            log[usize::from(x)] = i as u8;
            x = mul_reduce(x, u16::from(generator), full, k);
        }

        let mut inv = vec![0u8; usize::from(q)];
        for a in 1..usize::from(q) {
            inv[a] = exp[order - usize::from(log[a])];
        }

        Ok(Self {
            k,
            poly: reduction_poly,
            q,
            generator,
            exp,
            log,
            inv,
        })
    }

    /// Builds GF(2^k) with the conventional polynomial for that exponent.
    pub fn with_exponent(k: u32) -> Result<Self, GfError> {
        if !(2..=8).contains(&k) {
            return Err(GfError::InvalidField(format!(
                "exponent {k} out of range (2..=8)"
            )));
        }
        Self::new(k, DEFAULT_POLYS[k as usize])
    }

    /// The default field, GF(2^7) with x^7 + x + 1.
    pub fn gf128() -> Self {
        Self::with_exponent(Self::DEFAULT_EXP).expect("default polynomial is irreducible")
    }

    /// Field exponent k.
    pub fn exponent(&self) -> u32 {
        self.k
    }

    /// Field order q = 2^k.
    pub fn order(&self) -> u16 {
        self.q
    }

    /// Reduction polynomial mask, excluding the x^k term.
    pub fn reduction_poly(&self) -> u16 {
        self.poly
    }

    /// A generator of the multiplicative group.
    pub fn generator(&self) -> u8 {
        self.generator
    }

    /// Whether `a` is a valid element of this field.
    pub fn contains(&self, a: u8) -> bool {
        u16::from(a) < self.q
    }

    /// Addition: bitwise XOR. Also subtraction (characteristic 2).
    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        debug_assert!(self.contains(a) && self.contains(b));
        a ^ b
    }

    /// Multiplication via log/antilog tables.
    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        debug_assert!(self.contains(a) && self.contains(b));
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[usize::from(self.log[usize::from(a)]) + usize::from(self.log[usize::from(b)])]
    }

    /// Multiplicative inverse.
    pub fn inv(&self, a: u8) -> Result<u8, GfError> {
        debug_assert!(self.contains(a));
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        Ok(self.inv[usize::from(a)])
    }

    /// Uniform draw from the nonzero elements [1, q).
    pub fn rand_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> u8 {
        rng.gen_range(1..self.q) as u8
    }

    /// Uniform draw from the whole field [0, q).
    pub fn rand_symbol<R: Rng + ?Sized>(&self, rng: &mut R) -> u8 {
        rng.gen_range(0..self.q) as u8
    }

    /// In-place `acc += c * src`, element-wise over equal-length slices.
    ///
    /// The elimination hot path: `log c` is looked up once for the whole
    /// slice instead of once per element.
    pub fn vec_add_scaled(&self, acc: &mut [u8], src: &[u8], c: u8) {
        debug_assert_eq!(acc.len(), src.len());
        debug_assert!(self.contains(c));
        if c == 0 {
            return;
        }
        let log_c = usize::from(self.log[usize::from(c)]);
        for (a, &s) in acc.iter_mut().zip(src) {
            debug_assert!(self.contains(s));
            if s != 0 {
                *a ^= self.exp[log_c + usize::from(self.log[usize::from(s)])];
            }
        }
    }
}

/// Degree of a GF(2) polynomial given as a bitmask; 0 maps to 0.
fn degree(p: u32) -> u32 {
    31u32.saturating_sub(p.leading_zeros())
}

/// Remainder of GF(2) polynomial division.
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b);
    while a != 0 && degree(a) >= db {
        a ^= b << (degree(a) - db);
    }
    a
}

/// Exhaustive factor check: a degree-k polynomial is irreducible iff no
/// polynomial of degree 1..=k/2 divides it.
fn is_irreducible(full: u32, k: u32) -> bool {
    for d in 1..=(k / 2) {
        for divisor in (1u32 << d)..(1u32 << (d + 1)) {
            if poly_rem(full, divisor) == 0 {
                return false;
            }
        }
    }
    true
}

/// Shift-and-reduce product, used only while building the tables.
fn mul_reduce(mut a: u16, mut b: u16, full: u32, k: u32) -> u16 {
    let mut acc = 0u16;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & (1 << k) != 0 {
            a ^= full as u16;
        }
    }
    acc
}

/// Smallest element whose multiplicative order is q - 1.
fn find_generator(full: u32, q: u16) -> Option<u8> {
    let k = degree(full);
    'candidates: for g in 2..q {
        let mut x = 1u16;
        for step in 1..q {
            x = mul_reduce(x, g, full, k);
            if x == 1 {
                if step == q - 1 {
                    return Some(g as u8);
                }
                continue 'candidates;
            }
        }
    }
    None
}
