//! Exact rationals, coefficient heights and the finite sets of rationals of
//! bounded height.

use std::collections::HashMap;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Height of a term or coefficient. Heights of derived bounds grow doubly
/// exponentially, so they are arbitrary precision.
pub type Height = BigUint;

/// Builds `num/den` in lowest terms.
///
/// Panics if `den` is zero.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `max(|k|, |n|)` for `q = k/n` in lowest terms; zero is `0/1`, so its
/// height is 1.
pub fn rat_height(q: &Rational) -> Height {
    let num = q.numer().abs().to_biguint().expect("absolute value");
    let den = q.denom().to_biguint().expect("positive denominator");
    num.max(den)
}

/// All rationals of height at most `d`, in increasing numeric order.
pub fn enumerate_rationals(d: u64) -> Vec<Rational> {
    let d = d as i64;
    let mut out = vec![Rational::zero()];
    for den in 1..=d {
        for num in 1..=d {
            if num.gcd(&den) == 1 {
                out.push(rat(num, den));
                out.push(rat(-num, den));
            }
        }
    }
    out.sort();
    out
}

/// Largest height bound for which [`count_rationals`] answers.
pub const COUNT_LIMIT: u64 = 10_000_000_000;

/// Number of rationals of height at most `d`, without enumerating them.
///
/// Equals `4 * Phi(d) - 1` where `Phi` is the summatory totient. Returns
/// `None` when `d` exceeds [`COUNT_LIMIT`].
pub fn count_rationals(d: &Height) -> Option<BigUint> {
    if d.is_zero() {
        return Some(BigUint::zero());
    }
    let n = d.to_u64().filter(|&n| n <= COUNT_LIMIT)?;
    let phi = TotientSum::new(n).sum(n);
    Some(BigUint::from(phi) * 4u32 - 1u32)
}

/// Summatory totient `Phi(n) = sum_{k <= n} phi(k)` via a sieve for small
/// arguments and the recursion `Phi(n) = n(n+1)/2 - sum_{k>=2} Phi(n/k)`
/// above it.
struct TotientSum {
    small: Vec<u128>,
    memo: HashMap<u64, u128>,
}

impl TotientSum {
    fn new(n: u64) -> Self {
        let limit = ((n as f64).powf(2.0 / 3.0) as usize).max(64).min(n as usize + 1);
        let mut phi: Vec<u64> = (0..=limit as u64).collect();
        for i in 2..=limit {
            if phi[i] == i as u64 {
                let mut j = i;
                while j <= limit {
                    phi[j] -= phi[j] / i as u64;
                    j += i;
                }
            }
        }
        let mut small = vec![0u128; limit + 1];
        for i in 1..=limit {
            small[i] = small[i - 1] + phi[i] as u128;
        }
        TotientSum { small, memo: HashMap::new() }
    }

    fn sum(&mut self, n: u64) -> u128 {
        if (n as usize) < self.small.len() {
            return self.small[n as usize];
        }
        if let Some(&v) = self.memo.get(&n) {
            return v;
        }
        let nn = n as u128;
        let mut total = nn * (nn + 1) / 2;
        let mut k = 2u64;
        while k <= n {
            let q = n / k;
            let k_last = n / q;
            total -= (k_last - k + 1) as u128 * self.sum(q);
            k = k_last + 1;
        }
        self.memo.insert(n, total);
        total
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational `{0}`")]
pub struct ParseRationalError(pub String);

/// Parses `p/q` or an integer, allowing surrounding whitespace.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let t = text.trim();
    let err = || ParseRationalError(t.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
        None => BigInt::from_str(t).map(Rational::from_integer).map_err(|_| err()),
    }
}

pub(crate) fn midpoint(a: &Rational, b: &Rational) -> Rational {
    (a + b) / int(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(d: i64) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for k in -d..=d {
            for m in -d..=d {
                if m == 0 {
                    continue;
                }
                let q = rat(k, m);
                if rat_height(&q) <= BigUint::from(d as u64) && !out.contains(&q) {
                    out.push(q);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn heights() {
        assert_eq!(rat_height(&rat(1, 2)), BigUint::from(2u32));
        assert_eq!(rat_height(&int(0)), BigUint::from(1u32));
        assert_eq!(rat_height(&rat(-7, 3)), BigUint::from(7u32));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        assert_eq!(enumerate_rationals(1), vec![int(-1), int(0), int(1)]);
        let two = enumerate_rationals(2);
        assert_eq!(two.len(), 7);
        assert_eq!(two, vec![int(-2), int(-1), rat(-1, 2), int(0), rat(1, 2), int(1), int(2)]);
        for d in 1..=9 {
            assert_eq!(enumerate_rationals(d as u64), brute_force(d));
        }
    }

    #[test]
    fn counts_agree_with_enumeration() {
        for d in 0..=60u64 {
            let expected = if d == 0 { 0 } else { enumerate_rationals(d).len() };
            assert_eq!(count_rationals(&BigUint::from(d)), Some(BigUint::from(expected)), "d = {d}");
        }
        assert_eq!(count_rationals(&BigUint::from(16u32)), Some(BigUint::from(319u32)));
    }

    #[test]
    fn large_counts_use_the_recursion() {
        // Sum of totients up to 10^6 is 303963552392.
        let c = count_rationals(&BigUint::from(1_000_000u64)).unwrap();
        assert_eq!(c, BigUint::from(4u64 * 303_963_552_392 - 1));
        assert!(count_rationals(&(BigUint::from(COUNT_LIMIT) + 1u32)).is_none());
    }

    #[test]
    fn parse() {
        assert_eq!(parse_rational(" -3/6 ").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("4").unwrap(), int(4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
