//! Arithmetic in GF(2^m) for small m.
//!
//! Elements are m-bit polynomials over GF(2); addition is XOR and
//! multiplication is carry-less shift-and-add reduced by the context's
//! modulus. Widths up to 16 bits are supported, which is all exhaustive
//! enumeration can reach anyway.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_WIDTH: u32 = 16;

/// Default irreducible modulus for each width, indexed by m.
const DEFAULT_MODULI: [u32; 17] = [
    0,
    0b11,      // x + 1
    0x7,       // x^2 + x + 1
    0xB,       // x^3 + x + 1
    0x13,      // x^4 + x + 1
    0x25,      // x^5 + x^2 + 1
    0x43,      // x^6 + x + 1
    0x83,      // x^7 + x + 1
    0x11B,     // x^8 + x^4 + x^3 + x + 1
    0x211,     // x^9 + x^4 + 1
    0x409,     // x^10 + x^3 + 1
    0x805,     // x^11 + x^2 + 1
    0x1053,    // x^12 + x^6 + x^4 + x + 1
    0x201B,    // x^13 + x^4 + x^3 + x + 1
    0x4443,    // x^14 + x^10 + x^6 + x + 1
    0x8003,    // x^15 + x + 1
    0x1002B,   // x^16 + x^5 + x^3 + x + 1
];

/// An element of GF(2^m). The width lives in the [`FieldCtx`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Wraps a raw value without range checking; use [`FieldCtx::elem`] for
    /// untrusted input.
    pub const fn from_raw(value: u32) -> Self {
        FieldElem(value)
    }

    pub const fn value(self) -> u32 {
        self.0
    }
}

impl std::ops::BitXor for FieldElem {
    type Output = FieldElem;

    fn bitxor(self, rhs: FieldElem) -> FieldElem {
        FieldElem(self.0 ^ rhs.0)
    }
}

impl std::ops::BitXorAssign for FieldElem {
    fn bitxor_assign(&mut self, rhs: FieldElem) {
        self.0 ^= rhs.0;
    }
}

impl std::fmt::Display for FieldElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldCtx {
    m: u32,
    modulus: u32,
}

impl FieldCtx {
    /// Field of width `m` with the fixed default modulus.
    pub fn new(m: u32) -> Result<Self> {
        if !(1..=MAX_WIDTH).contains(&m) {
            return Err(Error::UnsupportedWidth(m));
        }
        Self::with_modulus(m, DEFAULT_MODULI[m as usize])
    }

    /// Field of width `m` reduced by `modulus`, an (m+1)-bit mask. The
    /// modulus is rejected unless it is irreducible.
    pub fn with_modulus(m: u32, modulus: u32) -> Result<Self> {
        if !(1..=MAX_WIDTH).contains(&m) {
            return Err(Error::UnsupportedWidth(m));
        }
        if degree(modulus) != Some(m) || !is_irreducible(modulus) {
            return Err(Error::ReducibleModulus { m, modulus });
        }
        Ok(FieldCtx { m, modulus })
    }

    pub fn width(&self) -> u32 {
        self.m
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, 2^m.
    pub fn order(&self) -> u64 {
        1u64 << self.m
    }

    pub fn mask(&self) -> u32 {
        ((1u64 << self.m) - 1) as u32
    }

    pub fn elem(&self, value: u64) -> Result<FieldElem> {
        if value >= self.order() {
            return Err(Error::ElementOutOfRange { value, m: self.m });
        }
        Ok(FieldElem(value as u32))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.order() as u32).map(FieldElem)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        a ^ b
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let top = 1u32 << self.m;
        let mut a = a.0;
        let mut b = b.0;
        let mut acc = 0u32;
        while b != 0 {
            if b & 1 != 0 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & top != 0 {
                a ^= self.modulus;
            }
        }
        FieldElem(acc)
    }

    pub fn pow(&self, base: FieldElem, mut exp: u64) -> FieldElem {
        let mut acc = FieldElem::ONE;
        let mut sq = base;
        while exp != 0 {
            if exp & 1 != 0 {
                acc = self.mul(acc, sq);
            }
            sq = self.mul(sq, sq);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via a^(2^m - 2); `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.0 == 0 {
            None
        } else {
            Some(self.pow(a, self.order() - 2))
        }
    }
}

/// Free-function form of [`FieldCtx::mul`].
pub fn field_mul(ctx: &FieldCtx, a: FieldElem, b: FieldElem) -> FieldElem {
    ctx.mul(a, b)
}

fn degree(p: u32) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(31 - p.leading_zeros())
    }
}

/// Remainder of polynomial division over GF(2).
fn poly_rem(mut a: u32, b: u32) -> u32 {
    let db = degree(b).expect("division by zero polynomial");
    while let Some(da) = degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Trial division by every polynomial of degree 1..=deg/2.
pub fn is_irreducible(p: u32) -> bool {
    let Some(d) = degree(p) else { return false };
    if d == 0 {
        return false;
    }
    for q in 2u32..(1u32 << (d / 2 + 1)) {
        if poly_rem(p, q) == 0 {
            return false;
        }
    }
    true
}
