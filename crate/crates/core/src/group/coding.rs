//! Integer pairings shared by the group codings.

/// ℤ → ℕ: 0, -1, 1, -2, 2, … ↦ 0, 1, 2, 3, 4, …
pub fn zigzag(z: i64) -> u64 {
    if z >= 0 {
        (z as u64) << 1
    } else {
        ((-(z + 1)) as u64) * 2 + 1
    }
}

pub fn unzigzag(n: u64) -> i64 {
    if n & 1 == 0 {
        (n >> 1) as i64
    } else {
        -((n >> 1) as i64) - 1
    }
}

/// Cantor pairing `(x+y)(x+y+1)/2 + y`.
pub fn pair(x: u64, y: u64) -> u64 {
    try_pair(x, y).expect("group code space overflow in pairing")
}

pub fn try_pair(x: u64, y: u64) -> Option<u64> {
    let s = (x as u128) + (y as u128);
    let v = s * (s + 1) / 2 + y as u128;
    u64::try_from(v).ok()
}

pub fn unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    let mut w = (((8 * z + 1) as f64).sqrt() as u128).saturating_sub(1) / 2;
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    let t = w * (w + 1) / 2;
    let y = z - t;
    let x = w - y;
    (x as u64, y as u64)
}

/// Right-nested pairing of a non-empty tuple: `⟨x₁, ⟨x₂, … x_d⟩⟩`.
pub fn tuple(xs: &[u64]) -> u64 {
    let (last, init) = xs.split_last().expect("empty tuple");
    init.iter().rev().fold(*last, |acc, &x| pair(x, acc))
}

pub fn untuple(mut z: u64, len: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(len);
    for _ in 1..len {
        let (x, rest) = unpair(z);
        out.push(x);
        z = rest;
    }
    out.push(z);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_values() {
        assert_eq!(zigzag(0), 0);
        assert_eq!(zigzag(-1), 1);
        assert_eq!(zigzag(1), 2);
        assert_eq!(zigzag(-3), 5);
        assert_eq!(pair(0, 0), 0);
        assert_eq!(pair(2, 0), 3);
        assert_eq!(pair(0, 2), 5);
        assert_eq!(pair(2, 2), 12);
    }

    proptest! {
        #[test]
        fn zigzag_inverse(z in -1_000_000i64..1_000_000) {
            prop_assert_eq!(unzigzag(zigzag(z)), z);
        }

        #[test]
        fn pairing_inverse(n in 0u64..10_000_000) {
            let (x, y) = unpair(n);
            prop_assert_eq!(pair(x, y), n);
        }

        #[test]
        fn tuple_inverse(n in 0u64..1_000_000, len in 1usize..5) {
            prop_assert_eq!(tuple(&untuple(n, len)), n);
        }
    }
}
