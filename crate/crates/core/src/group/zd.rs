//! ℤ^d: per-coordinate zig-zag, then right-nested Cantor tupling.

use super::coding::{tuple, untuple, unzigzag, zigzag};

pub fn encode(v: &[i64]) -> u64 {
    let zs: Vec<u64> = v.iter().map(|&c| zigzag(c)).collect();
    tuple(&zs)
}

pub fn decode(dim: u32, code: u64) -> Vec<i64> {
    untuple(code, dim as usize)
        .into_iter()
        .map(unzigzag)
        .collect()
}

pub fn mult(dim: u32, x: u64, y: u64) -> u64 {
    let a = decode(dim, x);
    let b = decode(dim, y);
    let s: Vec<i64> = a.iter().zip(&b).map(|(p, q)| p + q).collect();
    encode(&s)
}

pub fn inv(dim: u32, x: u64) -> u64 {
    let a: Vec<i64> = decode(dim, x).into_iter().map(|c| -c).collect();
    encode(&a)
}
