//! PRINCE: an FX construction around the reflective PRINCEcore.

use super::layers::{backward, forward, m_prime, s_layer, s_layer_inv, ALPHA, RC};

/// k0' = (k0 >>> 1) ^ (k0 >> 63)
#[inline]
pub(crate) fn derive_k0_prime(k0: u64) -> u64 {
    k0.rotate_right(1) ^ (k0 >> 63)
}

#[inline]
fn core(mut x: u64, k1: u64) -> u64 {
    x ^= k1 ^ RC[0];
    for rc in &RC[1..=5] {
        x = forward(x) ^ rc ^ k1;
    }
    x = s_layer_inv(m_prime(s_layer(x)));
    for rc in &RC[6..=10] {
        x = backward(x ^ k1 ^ rc);
    }
    x ^ RC[11] ^ k1
}

#[inline]
pub(crate) fn encrypt(k0: u64, k1: u64, pt: u64) -> u64 {
    core(pt ^ k0, k1) ^ derive_k0_prime(k0)
}

/// Decryption through the alpha-reflection property: swap the whitening keys
/// and XOR alpha into the core key.
#[inline]
pub(crate) fn decrypt(k0: u64, k1: u64, ct: u64) -> u64 {
    core(ct ^ derive_k0_prime(k0), k1 ^ ALPHA) ^ k0
}
