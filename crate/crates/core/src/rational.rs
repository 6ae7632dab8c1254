//! Exact rationals and their `"p/q"` text form.

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Q = Ratio<i128>;

pub fn q(numer: i128, denom: i128) -> Q {
    Q::new(numer, denom)
}

pub fn q_int(n: i128) -> Q {
    Q::from_integer(n)
}

/// Always renders as `p/q`, including integers (`3/1`, `0/1`).
pub fn to_text(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse(text: &str) -> Result<Q> {
    let bad = || Error::InvalidArgument(format!("not a rational: `{text}`"));
    let t = text.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: i128 = n.parse().map_err(|_| bad())?;
    let d: i128 = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// `1/n` as a rational; `n` must be positive.
pub fn reciprocal(n: u64) -> Q {
    Q::new(1, n as i128)
}

/// Serde adaptor for maps whose values are rationals in `"p/q"` form.
pub mod text_map {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::Q;

    pub fn serialize<K: Serialize + Ord, S: Serializer>(
        map: &BTreeMap<K, Q>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let text: BTreeMap<&K, String> = map.iter().map(|(k, v)| (k, super::to_text(v))).collect();
        text.serialize(s)
    }

    pub fn deserialize<'de, K, D>(d: D) -> std::result::Result<BTreeMap<K, Q>, D::Error>
    where
        K: Deserialize<'de> + Ord,
        D: Deserializer<'de>,
    {
        let text: BTreeMap<K, String> = BTreeMap::deserialize(d)?;
        text.into_iter()
            .map(|(k, v)| super::parse(&v).map(|q| (k, q)).map_err(D::Error::custom))
            .collect()
    }
}

pub fn one() -> Q {
    Q::one()
}

pub fn zero() -> Q {
    Q::zero()
}
