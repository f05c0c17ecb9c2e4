//! Knowledge accounting: how many bits a team can know after each query.
//!
//! A team whose members know `m` bits is written in the number system with
//! digits `alpha_k in 0..=3` over the bases `b_k = (2 * 4^k + 1) / 3`, the
//! per-computer knowledge of a `2^k`-computer team. One query turns a
//! `b_k` group into `2 * 4^k` known bits.

use serde::Serialize;

use crate::error::{Error, Result};

/// `(2 * 4^k + 1) / 3`: 1, 3, 11, 43, 171, 683, ...
pub fn digit_base(k: usize) -> u64 {
    (2 * 4u64.pow(k as u32) + 1) / 3
}

/// Largest position whose base fits in a `u64` with room for `2 * 4^k`.
const MAX_POSITION: usize = 30;

/// Digits `alpha_0, ..., alpha_a` with `alpha_a != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    digits: Vec<u8>,
}

impl Decomposition {
    /// Accepts any digit vector in `0..=3`; trailing zeros are dropped.
    pub fn from_digits(mut digits: Vec<u8>) -> Result<Self> {
        while digits.last() == Some(&0) {
            digits.pop();
        }
        if digits.is_empty() || digits.len() > MAX_POSITION + 1 {
            return Err(Error::OutOfRange { name: "digit count", value: digits.len() as f64, range: "[1, 31]" });
        }
        if let Some(&d) = digits.iter().find(|&&d| d > 3) {
            return Err(Error::OutOfRange { name: "digit", value: f64::from(d), range: "[0, 3]" });
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn digit(&self, k: usize) -> u8 {
        self.digits.get(k).copied().unwrap_or(0)
    }

    /// Highest nonzero position `a`.
    pub fn top(&self) -> usize {
        self.digits.len() - 1
    }

    /// `sum alpha_k b_k`.
    pub fn reconstruct(&self) -> u64 {
        self.digits.iter().enumerate().map(|(k, &d)| u64::from(d) * digit_base(k)).sum()
    }

    /// `sum alpha_k 2 * 4^k`, the bits known after one more query.
    pub fn expanded(&self) -> u64 {
        self.digits.iter().enumerate().map(|(k, &d)| u64::from(d) * 2 * 4u64.pow(k as u32)).sum()
    }
}

/// Greedy digits from the largest base down.
pub fn decompose(m: u64) -> Result<Decomposition> {
    if m == 0 {
        return Err(Error::OutOfRange { name: "m", value: 0.0, range: "[1, inf)" });
    }
    let top = (0..=MAX_POSITION).take_while(|&k| digit_base(k) <= m).last().unwrap_or(0);
    if top == MAX_POSITION && m >= digit_base(MAX_POSITION) * 4 {
        return Err(Error::NotRepresentable { n: m });
    }
    let mut rest = m;
    let mut digits = vec![0u8; top + 1];
    for k in (0..=top).rev() {
        let d = rest / digit_base(k);
        if d > 3 {
            return Err(Error::NotRepresentable { n: m });
        }
        digits[k] = d as u8;
        rest -= d * digit_base(k);
    }
    Decomposition::from_digits(digits)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Expansion {
    pub m: u64,
    pub m_next: u64,
    /// `m_next / m`.
    pub factor: f64,
    /// `3 / (1 + 3 (a + 1) / (2 * 4^a))`.
    pub lower_bound: f64,
    pub digits: Vec<u8>,
}

pub fn expansion(m: u64) -> Result<Expansion> {
    let d = decompose(m)?;
    let a = d.top();
    let m_next = d.expanded();
    Ok(Expansion {
        m,
        m_next,
        factor: m_next as f64 / m as f64,
        lower_bound: 3.0 / (1.0 + 3.0 * (a + 1) as f64 / (2.0 * 4f64.powi(a as i32))),
        digits: d.digits,
    })
}

/// Smallest `m` in `1..=limit` without a digit-bounded representation.
pub fn first_unrepresentable(limit: u64) -> Option<u64> {
    (1..=limit).find(|&m| decompose(m).map_or(true, |d| d.reconstruct() != m))
}

/// Smallest `k` with `3^k >= n`.
pub fn ceil_log3(n: u64) -> usize {
    let mut k = 0;
    let mut p = 1u128;
    while p < u128::from(n) {
        p *= 3;
        k += 1;
    }
    k
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QueryCount {
    pub n_list: u64,
    pub queries: usize,
    /// Known-bit counts, starting value first.
    pub trace: Vec<u64>,
    pub ceil_log3: usize,
    /// `queries - ceil_log3`.
    pub excess: i64,
}

/// Queries needed to go from `m0` known bits to at least `n`.
pub fn query_count_from(m0: u64, n: u64) -> Result<QueryCount> {
    if n < 2 {
        return Err(Error::OutOfRange { name: "n", value: n as f64, range: "[2, inf)" });
    }
    let mut trace = vec![m0];
    let mut m = m0;
    while m < n {
        m = decompose(m)?.expanded();
        trace.push(m);
    }
    let queries = trace.len() - 1;
    let ceil_log3 = ceil_log3(n);
    Ok(QueryCount { n_list: n, queries, trace, ceil_log3, excess: queries as i64 - ceil_log3 as i64 })
}

/// Queries from a single known bit.
pub fn query_count_model(n: u64) -> Result<QueryCount> {
    query_count_from(1, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bases() {
        let b: Vec<u64> = (0..6).map(digit_base).collect();
        assert_eq!(b, vec![1, 3, 11, 43, 171, 683]);
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose(1).unwrap().digits(), &[1]);
        assert_eq!(decompose(11).unwrap().digits(), &[0, 0, 1]);
        let d14 = decompose(14).unwrap();
        assert_eq!(d14.reconstruct(), 14);
        assert_eq!(d14.top(), 2);
        assert_eq!(d14.digits(), &[0, 1, 1]);
        // The hand decomposition 11 + 3 * 1 is also valid, just not greedy.
        assert_eq!(Decomposition::from_digits(vec![3, 0, 1]).unwrap().reconstruct(), 14);
        assert!(decompose(0).is_err());
    }

    #[test]
    fn greedy_reconstructs() {
        for m in 1..5000 {
            let d = decompose(m).unwrap();
            assert_eq!(d.reconstruct(), m);
            assert!(d.digits().iter().all(|&x| x <= 3));
            assert_ne!(d.digit(d.top()), 0);
        }
        assert_eq!(first_unrepresentable(20_000), None);
    }

    #[test]
    fn expansion_examples() {
        let e = expansion(11).unwrap();
        assert_eq!(e.m_next, 32);
        assert!((e.factor - 32.0 / 11.0).abs() < 1e-15);
        let e1 = expansion(1).unwrap();
        assert_eq!((e1.m_next, e1.factor), (2, 2.0));
        let e5 = expansion(683).unwrap();
        assert_eq!(e5.m_next, 2048);
        assert!((e5.factor - 2048.0 / 683.0).abs() < 1e-15);
        assert!((e5.factor - 2.9985).abs() < 1e-4);
    }

    #[test]
    fn factor_respects_lower_bound() {
        for m in 1..20_000 {
            let e = expansion(m).unwrap();
            assert!(e.factor >= e.lower_bound - 1e-12, "m = {m}");
        }
    }

    #[test]
    fn query_counts() {
        let two = query_count_model(2).unwrap();
        assert_eq!((two.queries, two.trace.clone()), (1, vec![1, 2]));
        let seeded = query_count_from(11, 32).unwrap();
        assert_eq!(seeded.trace, vec![11, 32]);
        let big = query_count_model(1 << 20).unwrap();
        assert!(big.excess <= 3, "excess {}", big.excess);
        assert!(query_count_model(1).is_err());
    }

    #[test]
    fn log3() {
        assert_eq!(ceil_log3(1), 0);
        assert_eq!(ceil_log3(3), 1);
        assert_eq!(ceil_log3(4), 2);
        assert_eq!(ceil_log3(1 << 20), 13);
    }
}
