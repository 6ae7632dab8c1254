//! ℤ presented on two generators `x`, `y` with the relation `x = y`.
//!
//! Codes enumerate *all* words over `x < x⁻¹ < y < y⁻¹` length-lexicographically,
//! so each integer has infinitely many codes. The least code of an element is
//! the word `x^v` (or `(x⁻¹)^{-v}`).
//!
//! Products concatenate and cancel adjacent `x x⁻¹` / `y y⁻¹`; the relation
//! `x = y` is never applied, so only the equality enumeration identifies
//! codes such as `x` and `y`.

pub type Letter = u8;

pub const X: Letter = 0;
pub const X_INV: Letter = 1;
pub const Y: Letter = 2;
pub const Y_INV: Letter = 3;

fn count(len: u32) -> u64 {
    4u64.checked_pow(len)
        .expect("group code space overflow in redundant-z")
}

pub fn encode(word: &[Letter]) -> u64 {
    let mut offset: u64 = 0;
    for l in 0..word.len() as u32 {
        offset += count(l);
    }
    let r = word.iter().fold(0u64, |acc, &l| {
        acc.checked_mul(4)
            .and_then(|v| v.checked_add(l as u64))
            .expect("group code space overflow in redundant-z")
    });
    offset
        .checked_add(r)
        .expect("group code space overflow in redundant-z")
}

pub fn decode(mut code: u64) -> Vec<Letter> {
    let mut len = 0u32;
    while code >= count(len) {
        code -= count(len);
        len += 1;
    }
    let mut word = vec![0; len as usize];
    for p in (0..len as usize).rev() {
        word[p] = (code % 4) as Letter;
        code /= 4;
    }
    word
}

pub fn value(code: u64) -> i64 {
    decode(code)
        .iter()
        .map(|&l| match l {
            X | Y => 1,
            _ => -1,
        })
        .sum()
}

pub fn least_code(v: i64) -> u64 {
    let letter = if v >= 0 { X } else { X_INV };
    encode(&vec![letter; v.unsigned_abs() as usize])
}

fn inverse_letter(l: Letter) -> Letter {
    l ^ 1
}

/// Concatenation with free cancellation; the empty word is a two-sided unit.
pub fn mult(x: u64, y: u64) -> u64 {
    if x == 0 {
        return y;
    }
    if y == 0 {
        return x;
    }
    let mut out = decode(x);
    for l in decode(y) {
        if out.last() == Some(&inverse_letter(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    encode(&out)
}

pub fn inv(x: u64) -> u64 {
    let w: Vec<Letter> = decode(x).into_iter().rev().map(inverse_letter).collect();
    encode(&w)
}
