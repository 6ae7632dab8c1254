//! Lamplighter group ℤ₂ ≀ ℤ.
//!
//! An element is a finite set of lit lamps together with a cursor position.
//! Multiplication is `(f, t)(g, s) = (f △ (g + t), t + s)`. The code pairs the
//! bit mask `Σ 2^{zigzag(p)}` over lit lamps `p` with `zigzag(t)`.

use std::collections::BTreeSet;

use super::coding::{try_pair, unpair, unzigzag, zigzag};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lamps {
    pub lit: BTreeSet<i64>,
    pub cursor: i64,
}

pub fn encode(e: &Lamps) -> u64 {
    try_encode(e).expect("group code space overflow in lamplighter")
}

/// `None` when the code does not fit in 64 bits.
pub fn try_encode(e: &Lamps) -> Option<u64> {
    let mut mask: u64 = 0;
    for &p in &e.lit {
        let bit = zigzag(p);
        if bit >= 64 {
            return None;
        }
        mask |= 1 << bit;
    }
    try_pair(mask, zigzag(e.cursor))
}

pub fn decode(code: u64) -> Lamps {
    let (mut mask, c) = unpair(code);
    let mut lit = BTreeSet::new();
    while mask != 0 {
        let bit = mask.trailing_zeros() as u64;
        lit.insert(unzigzag(bit));
        mask &= mask - 1;
    }
    Lamps {
        lit,
        cursor: unzigzag(c),
    }
}

pub fn mult(x: u64, y: u64) -> u64 {
    try_mult(x, y).expect("group code space overflow in lamplighter")
}

pub fn try_mult(x: u64, y: u64) -> Option<u64> {
    let a = decode(x);
    let b = decode(y);
    let mut lit = a.lit;
    for p in b.lit {
        let q = p + a.cursor;
        if !lit.remove(&q) {
            lit.insert(q);
        }
    }
    try_encode(&Lamps {
        lit,
        cursor: a.cursor + b.cursor,
    })
}

pub fn inv(x: u64) -> u64 {
    let a = decode(x);
    encode(&Lamps {
        lit: a.lit.iter().map(|p| p - a.cursor).collect(),
        cursor: -a.cursor,
    })
}

/// The cursor step `t`.
pub fn step() -> u64 {
    encode(&Lamps {
        lit: BTreeSet::new(),
        cursor: 1,
    })
}

/// The lamp toggle `a` at the origin.
pub fn toggle() -> u64 {
    encode(&Lamps {
        lit: [0].into_iter().collect(),
        cursor: 0,
    })
}
