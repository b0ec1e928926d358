//! PRINCEv2: the PRINCE datapath with an alternating key schedule, key
//! additions around the middle M' layer and no derived whitening key.

use super::layers::{backward, forward, m_prime, s_layer, s_layer_inv, ALPHA, BETA, RC};

#[inline]
fn forward_keys(k0: u64, k1: u64) -> [u64; 5] {
    [k1, k0, k1, k0, k1]
}

#[inline]
fn backward_keys(k0: u64, k1: u64) -> [u64; 5] {
    let k1b = k1 ^ ALPHA ^ BETA;
    [k0, k1b, k0, k1b, k0]
}

#[inline]
pub(crate) fn encrypt(k0: u64, k1: u64, pt: u64) -> u64 {
    let mut x = pt ^ k0 ^ RC[0];
    for (rc, k) in RC[1..=5].iter().zip(forward_keys(k0, k1)) {
        x = forward(x) ^ rc ^ k;
    }
    x = s_layer(x) ^ k1;
    x = m_prime(x) ^ k0 ^ BETA;
    x = s_layer_inv(x);
    for (rc, k) in RC[6..=10].iter().zip(backward_keys(k0, k1)) {
        x = backward(x ^ rc ^ k);
    }
    x ^ RC[11] ^ k1 ^ ALPHA ^ BETA
}

#[inline]
pub(crate) fn decrypt(k0: u64, k1: u64, ct: u64) -> u64 {
    let mut x = ct ^ RC[11] ^ k1 ^ ALPHA ^ BETA;
    for (rc, k) in RC[6..=10].iter().zip(backward_keys(k0, k1)).rev() {
        x = forward(x) ^ rc ^ k;
    }
    x = s_layer(x) ^ k0 ^ BETA;
    x = m_prime(x) ^ k1;
    x = s_layer_inv(x);
    for (rc, k) in RC[1..=5].iter().zip(forward_keys(k0, k1)).rev() {
        x = backward(x ^ rc ^ k);
    }
    x ^ k0 ^ RC[0]
}
