//! Element literals: generator words such as `ab^-1a`, integer tuples for
//! `zd`, and raw codes written `#n`.

use super::{free, lamplighter, redundant, zd, Family, GroupCode, GroupOracle};
use crate::error::{Error, Result};

fn malformed(literal: &str, reason: impl Into<String>) -> Error {
    Error::MalformedLiteral {
        literal: literal.to_string(),
        reason: reason.into(),
    }
}

/// Splits on commas that are not inside parentheses.
pub(super) fn split_list(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in text.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    let last = cur.trim().to_string();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}

/// A word as `(generator index, exponent)` syllables.
fn parse_word(text: &str, names: &[String]) -> Result<Vec<(usize, i64)>> {
    let mut out = Vec::new();
    let mut rest = text.trim();
    if rest == "1" || rest == "e" && !names.iter().any(|n| n == "e") {
        return Ok(out);
    }
    while !rest.is_empty() {
        // longest matching generator name
        let (gi, name) = names
            .iter()
            .enumerate()
            .filter(|(_, n)| rest.starts_with(n.as_str()))
            .max_by_key(|(_, n)| n.len())
            .ok_or_else(|| malformed(text, format!("unknown generator at `{rest}`")))?;
        rest = &rest[name.len()..];
        let mut exp = 1i64;
        if let Some(r) = rest.strip_prefix('^') {
            let digits_end = r
                .char_indices()
                .find(|&(i, c)| !(c.is_ascii_digit() || (i == 0 && (c == '-' || c == '+'))))
                .map_or(r.len(), |(i, _)| i);
            exp = r[..digits_end]
                .parse()
                .map_err(|_| malformed(text, "bad exponent"))?;
            rest = &r[digits_end..];
        }
        out.push((gi, exp));
        rest = rest.trim_start();
    }
    Ok(out)
}

fn free_names(rank: u32) -> Vec<String> {
    (0..rank).map(|g| free::generator_name(rank, g)).collect()
}

fn zd_names(dim: u32) -> Vec<String> {
    if dim <= 26 {
        (0..dim).map(|g| ((b'a' + g as u8) as char).to_string()).collect()
    } else {
        (0..dim).map(|g| format!("a{}", g + 1)).collect()
    }
}

fn parse_int(literal: &str, s: &str) -> Result<i64> {
    let s = s.trim();
    let body = s.strip_prefix('+').unwrap_or(s);
    body.parse().map_err(|_| malformed(literal, "bad integer"))
}

fn repeat_checked(literal: &str, exp: i64) -> Result<usize> {
    let n = exp.unsigned_abs();
    if n > 1 << 16 {
        return Err(malformed(literal, "exponent too large"));
    }
    Ok(n as usize)
}

pub(super) fn parse_element(g: &GroupOracle, text: &str) -> Result<GroupCode> {
    let t = text.trim();
    if let Some(raw) = t.strip_prefix('#') {
        let c: u64 = raw.parse().map_err(|_| malformed(text, "bad raw code"))?;
        if !g.is_valid_code(GroupCode(c)) {
            return Err(malformed(text, "code out of range"));
        }
        return Ok(GroupCode(c));
    }
    match g.spec().family() {
        Family::Free { rank } => {
            let mut letters = Vec::new();
            for (gi, e) in parse_word(t, &free_names(rank))? {
                let l = (2 * gi) as u8 + u8::from(e < 0);
                letters.extend(std::iter::repeat_n(l, repeat_checked(text, e)?));
            }
            free::reduce(&mut letters);
            Ok(GroupCode(free::encode(rank, &letters)))
        }
        Family::Zd { dim } => {
            let mut v = vec![0i64; dim as usize];
            if let Some(inner) = t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                let parts = split_list(inner);
                if parts.len() != dim as usize {
                    return Err(malformed(text, format!("expected {dim} coordinates")));
                }
                for (c, p) in v.iter_mut().zip(&parts) {
                    *c = parse_int(text, p)?;
                }
            } else if dim == 1 && t.starts_with(|c: char| c.is_ascii_digit() || c == '+' || c == '-') {
                v[0] = parse_int(text, t)?;
            } else {
                for (gi, e) in parse_word(t, &zd_names(dim))? {
                    v[gi] += e;
                }
            }
            Ok(GroupCode(zd::encode(&v)))
        }
        Family::Cyclic { order } => {
            let n: i64 = if t.starts_with(|c: char| c.is_ascii_digit() || c == '+' || c == '-') {
                parse_int(text, t)?
            } else {
                parse_word(t, &["a".to_string()])?.iter().map(|&(_, e)| e).sum()
            };
            Ok(GroupCode(n.rem_euclid(order as i64) as u64))
        }
        Family::Lamplighter => {
            let names = ["t".to_string(), "a".to_string()];
            let mut acc = 0u64;
            for (gi, e) in parse_word(t, &names)? {
                let s = if gi == 0 { lamplighter::step() } else { lamplighter::toggle() };
                let s = if e < 0 { lamplighter::inv(s) } else { s };
                for _ in 0..repeat_checked(text, e)? {
                    acc = lamplighter::mult(acc, s);
                }
            }
            Ok(GroupCode(acc))
        }
        Family::RedundantZ => {
            let names = ["x".to_string(), "y".to_string()];
            let mut letters = Vec::new();
            for (gi, e) in parse_word(t, &names)? {
                let l = match (gi, e < 0) {
                    (0, false) => redundant::X,
                    (0, true) => redundant::X_INV,
                    (_, false) => redundant::Y,
                    (_, true) => redundant::Y_INV,
                };
                letters.extend(std::iter::repeat_n(l, repeat_checked(text, e)?));
            }
            if letters.len() > 30 {
                return Err(malformed(text, "word too long"));
            }
            Ok(GroupCode(redundant::encode(&letters)))
        }
    }
}

fn syllables(out: &mut String, name: &str, exp: i64) {
    match exp {
        0 => {}
        1 => out.push_str(name),
        _ => out.push_str(&format!("{name}^{exp}")),
    }
}

/// Run-length formats a letter sequence given per-letter `(name, sign)`.
fn format_letters(letters: impl Iterator<Item = (String, i64)>) -> String {
    let mut out = String::new();
    let mut run: Option<(String, i64)> = None;
    for (name, s) in letters {
        match &mut run {
            Some((n, e)) if *n == name && e.signum() == s => *e += s,
            _ => {
                if let Some((n, e)) = run.take() {
                    syllables(&mut out, &n, e);
                }
                run = Some((name, s));
            }
        }
    }
    if let Some((n, e)) = run {
        syllables(&mut out, &n, e);
    }
    if out.is_empty() {
        "1".to_string()
    } else {
        out
    }
}

pub(super) fn format_element(g: &GroupOracle, x: GroupCode) -> String {
    match g.spec().family() {
        Family::Free { rank } => {
            let names = free_names(rank);
            format_letters(
                free::decode(rank, x.0)
                    .into_iter()
                    .map(|l| (names[(l / 2) as usize].clone(), if l % 2 == 0 { 1 } else { -1 })),
            )
        }
        Family::Zd { dim } => {
            let v = zd::decode(dim, x.0);
            if dim == 1 {
                format!("{:+}", v[0]).replace("+0", "0")
            } else {
                let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                format!("({})", parts.join(","))
            }
        }
        Family::Cyclic { order } => (x.0 % order).to_string(),
        Family::Lamplighter => {
            let e = lamplighter::decode(x.0);
            let mut out = String::new();
            let mut pos = 0i64;
            for &p in &e.lit {
                syllables(&mut out, "t", p - pos);
                out.push('a');
                pos = p;
            }
            syllables(&mut out, "t", e.cursor - pos);
            if out.is_empty() {
                "1".to_string()
            } else {
                out
            }
        }
        Family::RedundantZ => format_letters(redundant::decode(x.0).into_iter().map(|l| match l {
            redundant::X => ("x".to_string(), 1),
            redundant::X_INV => ("x".to_string(), -1),
            redundant::Y => ("y".to_string(), 1),
            _ => ("y".to_string(), -1),
        })),
    }
}
