//! Binomial tables and colexicographic ranking of fixed-weight words.
//!
//! Words with a fixed popcount sorted by numeric value appear in colex
//! order of their bit-position sets, so the colex rank of a word is also
//! its index in the canonical vertex order.

use std::sync::OnceLock;

use num_bigint::BigUint;

pub(crate) const MAX_N: usize = 64;

fn pascal() -> &'static [[u64; MAX_N + 1]; MAX_N + 1] {
    static TABLE: OnceLock<Box<[[u64; MAX_N + 1]; MAX_N + 1]>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = Box::new([[0u64; MAX_N + 1]; MAX_N + 1]);
        for m in 0..=MAX_N {
            t[m][0] = 1;
            for k in 1..=m {
                // C(64, 32) < 2^63, so every entry fits.
                t[m][k] = t[m - 1][k - 1] + if k < m { t[m - 1][k] } else { 0 };
            }
        }
        t
    })
}

/// `C(m, k)` for `m <= 64`; zero when `k > m`.
#[inline]
pub fn binomial(m: u32, k: u32) -> u64 {
    if k > m {
        return 0;
    }
    pascal()[m as usize][k as usize]
}

/// `C(m, k)` as an arbitrary-precision integer.
pub fn binomial_big(m: u32, k: u32) -> BigUint {
    BigUint::from(binomial(m, k))
}

/// Colex rank of a word among all words of the same popcount.
#[inline]
pub fn colex_rank(word: u64) -> u64 {
    let mut rank = 0;
    let mut rest = word;
    let mut i = 1;
    while rest != 0 {
        let pos = rest.trailing_zeros();
        rank += binomial(pos, i);
        rest &= rest - 1;
        i += 1;
    }
    rank
}

/// Inverse of [`colex_rank`]: the `rank`-th `k`-subset of `{0..m}` as a mask.
pub fn colex_unrank(mut rank: u64, m: u32, k: u32) -> u64 {
    debug_assert!(rank < binomial(m, k));
    let mut word = 0u64;
    let mut top = m;
    for i in (1..=k).rev() {
        // largest pos < top with C(pos, i) <= rank
        let mut pos = top - 1;
        while binomial(pos, i) > rank {
            pos -= 1;
        }
        rank -= binomial(pos, i);
        word |= 1u64 << pos;
        top = pos;
    }
    word
}

/// Next larger word with the same popcount (Gosper's hack). Returns `None`
/// once the result would not fit in `n` bits.
#[inline]
pub fn next_same_weight(word: u64, n: u32) -> Option<u64> {
    if word == 0 {
        return None;
    }
    let c = word & word.wrapping_neg();
    let r = word.checked_add(c)?;
    let next = (((r ^ word) >> 2) / c) | r;
    if n < 64 && next >> n != 0 {
        None
    } else {
        Some(next)
    }
}

/// Low `k` bits set.
#[inline]
pub fn low_mask(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// Spread the low bits of `pattern` onto the set bits of `positions`
/// (software `pdep`).
#[inline]
pub fn deposit(mut pattern: u64, positions: u64) -> u64 {
    let mut out = 0;
    let mut rest = positions;
    while rest != 0 && pattern != 0 {
        let low = rest & rest.wrapping_neg();
        if pattern & 1 == 1 {
            out |= low;
        }
        pattern >>= 1;
        rest &= rest - 1;
    }
    out
}

/// All `k`-subsets of `{0..m}` as masks in increasing numeric order.
pub fn weight_k_words(m: u32, k: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(binomial(m, k) as usize);
    if k == 0 {
        out.push(0);
        return out;
    }
    let mut w = low_mask(k);
    loop {
        out.push(w);
        match next_same_weight(w, m) {
            Some(next) => w = next,
            None => break,
        }
    }
    out
}

/// Falling factorial `m (m-1) ... (m-r+1)`, zero if `r > m`.
pub fn falling_factorial(m: u64, r: u64) -> BigUint {
    let mut acc = BigUint::from(1u32);
    if r > m {
        return BigUint::from(0u32);
    }
    for i in 0..r {
        acc *= m - i;
    }
    acc
}
