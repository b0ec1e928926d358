//! Round layers shared by PRINCE and PRINCEv2.
//!
//! The state is a 64-bit word read as sixteen nibbles, nibble 0 being the
//! most significant one. Within a nibble, bit 0 is again the most
//! significant bit.

pub(crate) const SBOX: [u8; 16] = [
    0xb, 0xf, 0x3, 0x2, 0xa, 0xc, 0x9, 0x1, 0x6, 0x7, 0x8, 0x0, 0xe, 0x5, 0xd, 0x4,
];

pub(crate) const SBOX_INV: [u8; 16] = [
    0xb, 0x7, 0x3, 0x2, 0xf, 0xd, 0x8, 0x9, 0xa, 0x6, 0x4, 0x0, 0x5, 0xe, 0xc, 0x1,
];

/// Round constants, taken from the fraction digits of pi.
/// `RC[i] ^ RC[11 - i]` equals [`ALPHA`] for every `i`.
pub(crate) const RC: [u64; 12] = [
    0x0000000000000000,
    0x13198a2e03707344,
    0xa4093822299f31d0,
    0x082efa98ec4e6c89,
    0x452821e638d01377,
    0xbe5466cf34e90c6c,
    0x7ef84f78fd955cb1,
    0x85840851f1ac43aa,
    0xc882d32f25323c54,
    0x64a51195e0e3610d,
    0xd3b5a399ca0c2399,
    0xc0ac29b7c97c50dd,
];

pub(crate) const ALPHA: u64 = 0xc0ac29b7c97c50dd;

/// Middle-layer constant of PRINCEv2 (the pi digits following `ALPHA`).
pub(crate) const BETA: u64 = 0x3f84d5b5b5470917;

const fn byte_table(sbox: &[u8; 16]) -> [u8; 256] {
    let mut out = [0u8; 256];
    let mut i = 0;
    while i < 256 {
        out[i] = (sbox[i >> 4] << 4) | sbox[i & 0xf];
        i += 1;
    }
    out
}

const SBOX_BYTES: [u8; 256] = byte_table(&SBOX);
const SBOX_INV_BYTES: [u8; 256] = byte_table(&SBOX_INV);

#[inline]
fn substitute(x: u64, table: &[u8; 256]) -> u64 {
    let mut bytes = x.to_be_bytes();
    for b in bytes.iter_mut() {
        *b = table[*b as usize];
    }
    u64::from_be_bytes(bytes)
}

#[inline]
pub(crate) fn s_layer(x: u64) -> u64 {
    substitute(x, &SBOX_BYTES)
}

#[inline]
pub(crate) fn s_layer_inv(x: u64) -> u64 {
    substitute(x, &SBOX_INV_BYTES)
}

/// `NIBBLE_MASK[j]` keeps every bit of a nibble except bit `j`.
const NIBBLE_MASK: [u64; 4] = [0x7, 0xb, 0xd, 0xe];

/// One 16x16 block of M'. Output nibble `r` is the XOR over input nibbles `c`
/// of `nibble_c & NIBBLE_MASK[(r + c + offset) % 4]`; offset 0 gives M^(0),
/// offset 1 gives M^(1).
const fn mix_chunk(chunk: u64, offset: usize) -> u64 {
    let mut out = 0;
    let mut r = 0;
    while r < 4 {
        let mut acc = 0;
        let mut c = 0;
        while c < 4 {
            let n = (chunk >> (12 - 4 * c)) & 0xf;
            acc ^= n & NIBBLE_MASK[(r + c + offset) & 3];
            c += 1;
        }
        out |= acc << (12 - 4 * r);
        r += 1;
    }
    out
}

/// The involutive linear layer M' = diag(M^(0), M^(1), M^(1), M^(0)),
/// computed directly. Used to build the lookup tables.
const fn m_prime_direct(x: u64) -> u64 {
    (mix_chunk((x >> 48) & 0xffff, 0) << 48)
        | (mix_chunk((x >> 32) & 0xffff, 1) << 32)
        | (mix_chunk((x >> 16) & 0xffff, 1) << 16)
        | mix_chunk(x & 0xffff, 0)
}

/// Output nibble `i` takes input nibble `SHIFT_ROWS[i]`.
const SHIFT_ROWS: [usize; 16] = [0, 5, 10, 15, 4, 9, 14, 3, 8, 13, 2, 7, 12, 1, 6, 11];

const fn nibble(x: u64, i: usize) -> u64 {
    (x >> (60 - 4 * i)) & 0xf
}

const fn shift_rows_direct(x: u64) -> u64 {
    let mut out = 0;
    let mut i = 0;
    while i < 16 {
        out |= nibble(x, SHIFT_ROWS[i]) << (60 - 4 * i);
        i += 1;
    }
    out
}

const fn shift_rows_inv_direct(x: u64) -> u64 {
    let mut out = 0;
    let mut i = 0;
    while i < 16 {
        out |= nibble(x, i) << (60 - 4 * SHIFT_ROWS[i]);
        i += 1;
    }
    out
}

#[derive(Clone, Copy)]
enum Linear {
    MPrime,
    /// SR . M' . S, as applied in a forward round.
    Forward,
    /// M' . SR^-1, the linear part of a backward round.
    Backward,
}

/// `table[b][v]` is the layer applied to a word whose only nonzero byte is
/// byte `b` (most significant first) with value `v`. The layers are linear,
/// or linear after a bytewise S-layer, so XORing eight lookups gives the
/// full layer.
const fn byte_tables(layer: Linear) -> [[u64; 256]; 8] {
    let mut t = [[0u64; 256]; 8];
    let mut b = 0;
    while b < 8 {
        let mut v = 0;
        while v < 256 {
            let shift = 56 - 8 * b;
            let x = (v as u64) << shift;
            t[b][v] = match layer {
                Linear::MPrime => m_prime_direct(x),
                Linear::Forward => {
                    shift_rows_direct(m_prime_direct((SBOX_BYTES[v] as u64) << shift))
                }
                Linear::Backward => m_prime_direct(shift_rows_inv_direct(x)),
            };
            v += 1;
        }
        b += 1;
    }
    t
}

static M_PRIME_T: [[u64; 256]; 8] = byte_tables(Linear::MPrime);
static FORWARD_T: [[u64; 256]; 8] = byte_tables(Linear::Forward);
static BACKWARD_T: [[u64; 256]; 8] = byte_tables(Linear::Backward);

#[inline(always)]
fn lookup(x: u64, t: &[[u64; 256]; 8]) -> u64 {
    let b = x.to_be_bytes();
    t[0][b[0] as usize]
        ^ t[1][b[1] as usize]
        ^ t[2][b[2] as usize]
        ^ t[3][b[3] as usize]
        ^ t[4][b[4] as usize]
        ^ t[5][b[5] as usize]
        ^ t[6][b[6] as usize]
        ^ t[7][b[7] as usize]
}

#[inline]
pub(crate) fn m_prime(x: u64) -> u64 {
    lookup(x, &M_PRIME_T)
}

/// Forward round core: S-layer followed by M = SR . M'.
#[inline]
pub(crate) fn forward(x: u64) -> u64 {
    lookup(x, &FORWARD_T)
}

/// Backward round core: M^-1 = M' . SR^-1 followed by the inverse S-layer.
#[inline]
pub(crate) fn backward(x: u64) -> u64 {
    s_layer_inv(lookup(x, &BACKWARD_T))
}
