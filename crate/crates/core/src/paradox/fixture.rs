//! The classical first-letter decomposition of `F(a, b)`, used to check the
//! checker. `α(g) = g` on `W(a)` and `a⁻¹g` elsewhere; `β(g) = g` on
//! `W(b) ∪ {b⁻ʲ : j ≥ 0}` and `b⁻¹g` elsewhere. Their images partition the
//! group, and the translations lie in `{1, a⁻¹, b⁻¹}`.

use crate::error::{Error, Result};
use crate::group::free::{decode, Letter};
use crate::group::{Family, GroupCode, GroupOracle};

use super::ResolvedPrefix;

const A: Letter = 0;
const A_INV: Letter = 1;
const B: Letter = 2;
const B_INV: Letter = 3;

fn letters(x: GroupCode) -> Vec<Letter> {
    decode(2, x.0)
}

fn alpha(g: &GroupOracle, x: GroupCode, a_inv: GroupCode) -> GroupCode {
    match letters(x).first() {
        Some(&A) => x,
        _ => g.mult(a_inv, x),
    }
}

fn beta(g: &GroupOracle, x: GroupCode, b_inv: GroupCode) -> GroupCode {
    let w = letters(x);
    if w.first() == Some(&B) || w.iter().all(|&l| l == B_INV) {
        x
    } else {
        g.mult(b_inv, x)
    }
}

fn phi(g: &GroupOracle, r: GroupCode) -> GroupCode {
    let w = letters(r);
    let (a, b) = (GroupCode(encode_letter(A)), GroupCode(encode_letter(B)));
    match w.first() {
        Some(&A) | Some(&B) | None => r,
        Some(&A_INV) => g.mult(a, r),
        _ if w.iter().all(|&l| l == B_INV) => r,
        _ => g.mult(b, r),
    }
}

fn encode_letter(l: Letter) -> u64 {
    crate::group::free::encode(2, &[l])
}

/// `ψ` on left codes `0..count` and `φ` on right codes `0..count`.
pub fn first_letter_prefix(g: &GroupOracle, count: u64) -> Result<ResolvedPrefix> {
    if g.spec().family() != (Family::Free { rank: 2 }) {
        return Err(Error::UnsupportedFamily(format!("{} (fixture needs free:2)", g.spec())));
    }
    let a_inv = GroupCode(encode_letter(A_INV));
    let b_inv = GroupCode(encode_letter(B_INV));
    let mut prefix = ResolvedPrefix::default();
    for m in (0..count).map(GroupCode) {
        let (x, y) = (alpha(g, m, a_inv), beta(g, m, b_inv));
        prefix.insert_left(g, m, x.min(y), x.max(y));
        prefix.right.insert(m, phi(g, m));
    }
    Ok(prefix)
}
