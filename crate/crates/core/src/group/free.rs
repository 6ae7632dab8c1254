//! Free groups: length-lexicographic numbering of reduced words.
//!
//! Letter `2i` is the generator `a_{i+1}`, letter `2i+1` its inverse, so the
//! letter order is `a₁ < a₁⁻¹ < a₂ < a₂⁻¹ < …`.

pub type Letter = u8;

pub fn inverse_letter(l: Letter) -> Letter {
    l ^ 1
}

/// Number of reduced words of length `len`, given the count for `len - 1`.
fn reduced_count_next(rank: u32, len: u32, prev: u64) -> u64 {
    if len == 1 {
        return 2 * rank as u64;
    }
    prev.checked_mul(2 * rank as u64 - 1)
        .expect("group code space overflow in free group")
}

fn words_shorter_than(rank: u32, len: u32) -> u64 {
    let mut total = 0u64;
    let mut c = 1u64;
    for l in 0..len {
        if l > 0 {
            c = reduced_count_next(rank, l, c);
        }
        total = total
            .checked_add(c)
            .expect("group code space overflow in free group");
    }
    total
}

pub fn reduce(word: &mut Vec<Letter>) {
    let mut out: Vec<Letter> = Vec::with_capacity(word.len());
    for &l in word.iter() {
        if out.last() == Some(&inverse_letter(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    *word = out;
}

pub fn encode(rank: u32, word: &[Letter]) -> u64 {
    let offset = words_shorter_than(rank, word.len() as u32);
    let base = 2 * rank as u64 - 1;
    let mut r: u64 = 0;
    for (p, &letter) in word.iter().enumerate() {
        let digit = if p == 0 {
            letter as u64
        } else {
            let forbidden = inverse_letter(word[p - 1]);
            debug_assert_ne!(letter, forbidden, "word not reduced");
            letter as u64 - u64::from(forbidden < letter)
        };
        r = if p == 0 {
            digit
        } else {
            r.checked_mul(base)
                .and_then(|v| v.checked_add(digit))
                .expect("group code space overflow in free group")
        };
    }
    offset
        .checked_add(r)
        .expect("group code space overflow in free group")
}

pub fn decode(rank: u32, mut code: u64) -> Vec<Letter> {
    let mut len = 0u32;
    let mut c = 1u64;
    while code >= c {
        code -= c;
        len += 1;
        c = reduced_count_next(rank, len, c);
    }
    if len == 0 {
        return Vec::new();
    }
    let base = 2 * rank as u64 - 1;
    let mut digits = vec![0u64; len as usize];
    for p in (1..len as usize).rev() {
        digits[p] = code % base;
        code /= base;
    }
    digits[0] = code;
    let mut word: Vec<Letter> = Vec::with_capacity(len as usize);
    for (p, &d) in digits.iter().enumerate() {
        let letter = if p == 0 {
            d as Letter
        } else {
            let forbidden = inverse_letter(word[p - 1]) as u64;
            (if d < forbidden { d } else { d + 1 }) as Letter
        };
        word.push(letter);
    }
    word
}

/// Rank one is ℤ with `a^v ↦ 2v - 1` and `a^-v ↦ 2v` for `v > 0`.
fn rank_one_value(code: u64) -> i64 {
    if code % 2 == 1 {
        code.div_ceil(2) as i64
    } else {
        -((code / 2) as i64)
    }
}

fn rank_one_code(v: i64) -> u64 {
    if v > 0 {
        2 * v as u64 - 1
    } else {
        2 * v.unsigned_abs()
    }
}

pub fn mult(rank: u32, x: u64, y: u64) -> u64 {
    if rank == 1 {
        return rank_one_code(rank_one_value(x) + rank_one_value(y));
    }
    let mut w = decode(rank, x);
    w.extend(decode(rank, y));
    reduce(&mut w);
    encode(rank, &w)
}

pub fn inv(rank: u32, x: u64) -> u64 {
    if rank == 1 {
        return rank_one_code(-rank_one_value(x));
    }
    let w: Vec<Letter> = decode(rank, x)
        .into_iter()
        .rev()
        .map(inverse_letter)
        .collect();
    encode(rank, &w)
}

pub fn generator_name(rank: u32, g: u32) -> String {
    if rank <= 26 {
        ((b'a' + g as u8) as char).to_string()
    } else {
        format!("a{}", g + 1)
    }
}
