//! Small exact-arithmetic helpers: trial-division factorization with an
//! explicit refusal bound, squarefree/cubefree tests, modular inverses and
//! integer square roots.

use crate::{Int, Rat};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Largest absolute value we are willing to factor by trial division.
/// Beyond this the caller gets an error instead of a guess.
pub const FACTOR_LIMIT: i64 = 1_000_000_000_000;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum NumError {
    #[error("|{0}| exceeds the trial-division factorization bound 10^12")]
    TooLargeToFactor(i64),
    #[error("cannot factor zero")]
    FactorZero,
}

/// Trial-division factorization of `|v|`, smallest primes first.
pub fn factor(v: i64) -> Result<Vec<(i64, u32)>, NumError> {
    if v == 0 {
        return Err(NumError::FactorZero);
    }
    let mut n = v.unsigned_abs();
    if n > FACTOR_LIMIT as u64 {
        return Err(NumError::TooLargeToFactor(v));
    }
    let mut out = Vec::new();
    let mut push = |p: u64, e: u32| {
        if e > 0 {
            out.push((p as i64, e));
        }
    };
    let mut e = 0;
    while n % 2 == 0 {
        n /= 2;
        e += 1;
    }
    push(2, e);
    let mut p = 3u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        push(p, e);
        p += 2;
    }
    if n > 1 {
        push(n, 1);
    }
    Ok(out)
}

pub fn is_squarefree(v: i64) -> Result<bool, NumError> {
    Ok(factor(v)?.iter().all(|&(_, e)| e < 2))
}

pub fn is_cubefree(v: i64) -> Result<bool, NumError> {
    Ok(factor(v)?.iter().all(|&(_, e)| e < 3))
}

/// True when no odd prime square divides `v`.
pub fn odd_part_squarefree(v: i64) -> Result<bool, NumError> {
    Ok(factor(v)?.iter().all(|&(p, e)| p == 2 || e < 2))
}

/// Decompose a cubefree `m` as `u * v^2` with `u`, `v` squarefree, coprime,
/// `v > 0` and the sign carried by `u`.
pub fn uv_decompose(m: i64) -> Result<(i64, i64), NumError> {
    let mut u: i64 = if m < 0 { -1 } else { 1 };
    let mut v: i64 = 1;
    for (p, e) in factor(m)? {
        match e {
            1 => u *= p,
            2 => v *= p,
            _ => return Err(NumError::TooLargeToFactor(m)), // not cubefree; callers validate first
        }
    }
    Ok((u, v))
}

/// Least nonnegative residue of `v` mod `modulus`.
pub fn residue(v: i64, modulus: i64) -> i64 {
    v.rem_euclid(modulus)
}

pub fn rat_from(v: i64) -> Rat {
    Rat::from(Int::from(v))
}

pub fn rat_is_integer(q: &Rat) -> bool {
    q.denom().is_one()
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation(n: &Int, p: &Int) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if r.is_zero() {
            n = q;
            v += 1;
        } else {
            return v;
        }
    }
}

pub fn valuation_i64(n: i64, p: i64) -> u32 {
    assert!(n != 0);
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Exact integer square root: `Some(r)` with `r >= 0` and `r*r == n`.
pub fn exact_sqrt(n: &Int) -> Option<Int> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r.clone() * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Inverse of `a` modulo `m > 0`, when `gcd(a, m) = 1`.
pub fn mod_inverse(a: &Int, m: &Int) -> Option<Int> {
    if m.is_one() {
        return Some(Int::zero());
    }
    let a = a.mod_floor(m);
    let e = Int::extended_gcd(&a, m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// gcd of the absolute values of an iterator of integers (0 for empty input).
pub fn gcd_all<'a>(vals: impl IntoIterator<Item = &'a Int>) -> Int {
    let mut g = Int::zero();
    for v in vals {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Content of a nonempty list of rationals: gcd of numerators over lcm of
/// denominators, always positive. Dividing each entry by it yields integers
/// with overall gcd 1.
pub fn rational_content<'a>(vals: impl IntoIterator<Item = &'a Rat>) -> Rat {
    let mut num_gcd = Int::zero();
    let mut den_lcm = Int::one();
    for q in vals {
        num_gcd = num_gcd.gcd(q.numer());
        den_lcm = den_lcm.lcm(q.denom());
    }
    if num_gcd.is_zero() {
        return Rat::zero();
    }
    Rat::new(num_gcd, den_lcm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_basics() {
        assert_eq!(factor(50).unwrap(), vec![(2, 1), (5, 2)]);
        assert_eq!(factor(-12).unwrap(), vec![(2, 2), (3, 1)]);
        assert!(is_squarefree(10).unwrap());
        assert!(!is_squarefree(12).unwrap());
        assert!(is_cubefree(12).unwrap());
        assert!(!is_cubefree(24).unwrap());
        assert_eq!(factor(FACTOR_LIMIT + 1), Err(NumError::TooLargeToFactor(FACTOR_LIMIT + 1)));
    }

    #[test]
    fn uv_decomposition() {
        assert_eq!(uv_decompose(50).unwrap(), (2, 5));
        assert_eq!(uv_decompose(-50).unwrap(), (-2, 5));
        assert_eq!(uv_decompose(10).unwrap(), (10, 1));
    }

    #[test]
    fn residues_are_least_nonnegative() {
        assert_eq!(residue(-1, 8), 7);
        assert_eq!(residue(-36, 36), 0);
    }

    #[test]
    fn misc_integer_helpers() {
        assert_eq!(exact_sqrt(&Int::from(144)), Some(Int::from(12)));
        assert_eq!(exact_sqrt(&Int::from(145)), None);
        assert_eq!(mod_inverse(&Int::from(4), &Int::from(3)), Some(Int::from(1)));
        assert_eq!(mod_inverse(&Int::from(3), &Int::from(4)), Some(Int::from(3)));
        assert_eq!(valuation(&Int::from(48), &Int::from(2)), 4);
        let vals = [Rat::new(Int::from(6), Int::from(1)), Rat::new(Int::from(9), Int::from(2))];
        assert_eq!(rational_content(vals.iter()), Rat::new(Int::from(3), Int::from(2)));
    }
}
