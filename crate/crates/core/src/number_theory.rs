//! Exact integer machinery for the line-to-torus relabeling.
//!
//! A dimension `M = M1 * M2` with `gcd(M1, M2) = 1` admits the Chinese
//! remainder relabeling `q <-> (q mod M1, q mod M2)`. The composition
//! direction uses the inverses `N1 = L1^{-1} mod M1` and `N2 = L2^{-1} mod M2`
//! where `L1 = M2` and `L2 = M1`:
//!
//! ```text
//! q = q1 * N1 * L1 + q2 * N2 * L2  (mod M)
//! ```
//!
//! All labels are 0-based residues.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};

/// Prime factorization `M = prod p_j^{n_j}` with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    m: u64,
    factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn m(&self) -> u64 {
        self.m
    }

    /// `(prime, exponent)` pairs in increasing prime order.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Number of distinct primes.
    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    /// The pairwise coprime prime powers `m_j = p_j^{n_j}`.
    pub fn prime_powers(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, n)| p.pow(n)).collect()
    }

    /// Number of kq representation pairs, Fourier pair included: `2^(N-1)`.
    pub fn chi(&self) -> u64 {
        1 << (self.factors.len() - 1)
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(p, n)| if n == 1 { p.to_string() } else { format!("{p}^{n}") })
            .collect();
        write!(f, "{} = {}", self.m, parts.join("·"))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Trial-division factorization.
pub fn factorize(m: u64) -> Result<PrimeFactorization> {
    if m < 2 {
        return Err(Error::Dimension(m));
    }
    let mut rest = m;
    let mut factors = Vec::new();
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            let mut n = 0;
            while rest % p == 0 {
                rest /= p;
                n += 1;
            }
            factors.push((p, n));
        }
        p += 1;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(PrimeFactorization { m, factors })
}

/// Inverse of `a` modulo `m >= 2` by the extended Euclidean algorithm, in `[1, m)`.
pub fn mod_inverse(a: u64, m: u64) -> Result<u64> {
    if m < 2 {
        return Err(Error::Dimension(m));
    }
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible { value: a, modulus: m });
    }
    Ok(t0.rem_euclid(m as i128) as u64)
}

/// A nontrivial coprime factorization `M = M1 * M2` together with the CRT
/// constants `L1 = M2`, `L2 = M1`, `N1 = L1^{-1} mod M1`, `N2 = L2^{-1} mod M2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoprimeSplit {
    m: u64,
    m1: u64,
    m2: u64,
    n1: u64,
    n2: u64,
}

impl CoprimeSplit {
    /// Splits `m` as `m1 * (m / m1)`.
    pub fn new(m: u64, m1: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::Dimension(m));
        }
        if m1 == 0 || m % m1 != 0 {
            return Err(Error::NotDivisor { m, divisor: m1 });
        }
        if m1 == 1 || m1 == m {
            return Err(Error::TrivialSplit { m, m1 });
        }
        let m2 = m / m1;
        let g = gcd(m1, m2);
        if g != 1 {
            return Err(Error::NotCoprime { m1, m2, gcd: g });
        }
        let n1 = mod_inverse(m2, m1)?;
        let n2 = mod_inverse(m1, m2)?;
        Ok(Self { m, m1, m2, n1, n2 })
    }

    pub fn m(&self) -> u64 {
        self.m
    }
    pub fn m1(&self) -> u64 {
        self.m1
    }
    pub fn m2(&self) -> u64 {
        self.m2
    }
    pub fn l1(&self) -> u64 {
        self.m2
    }
    pub fn l2(&self) -> u64 {
        self.m1
    }
    pub fn n1(&self) -> u64 {
        self.n1
    }
    pub fn n2(&self) -> u64 {
        self.n2
    }

    /// The same factorization with the roles of the factors exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            m: self.m,
            m1: self.m2,
            m2: self.m1,
            n1: self.n2,
            n2: self.n1,
        }
    }

    /// `q = (q1 N1 L1 + q2 N2 L2) mod M`.
    pub fn compose(&self, q1: u64, q2: u64) -> Result<u64> {
        check_range("q1", q1, self.m1)?;
        check_range("q2", q2, self.m2)?;
        Ok(self.compose_unchecked(q1, q2))
    }

    pub(crate) fn compose_unchecked(&self, q1: u64, q2: u64) -> u64 {
        (q1 * self.n1 * self.m2 + q2 * self.n2 * self.m1) % self.m
    }

    /// `(q mod M1, q mod M2)`.
    pub fn decompose(&self, q: u64) -> Result<(u64, u64)> {
        check_range("q", q, self.m)?;
        Ok((q % self.m1, q % self.m2))
    }
}

impl fmt::Display for CoprimeSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.m1, self.m2)
    }
}

/// `make_split(M, M1)`.
pub fn make_split(m: u64, m1: u64) -> Result<CoprimeSplit> {
    CoprimeSplit::new(m, m1)
}

/// All nontrivial coprime splits of `m`, one per unordered bipartition of its
/// prime powers, with `M1 < M2`, ordered by ascending `M1`.
pub fn enumerate_splits(m: u64) -> Result<Vec<CoprimeSplit>> {
    let powers = factorize(m)?.prime_powers();
    let n = powers.len();
    let mut splits = Vec::new();
    // Subsets not containing the last prime power: each unordered pair once.
    for mask in 1u64..(1 << (n - 1)) {
        let m1: u64 = (0..n)
            .filter(|&j| mask & (1 << j) != 0)
            .map(|j| powers[j])
            .product();
        let m1 = m1.min(m / m1);
        splits.push(CoprimeSplit::new(m, m1)?);
    }
    splits.sort_by_key(|s| s.m1());
    Ok(splits)
}

pub fn crt_compose(split: &CoprimeSplit, q1: u64, q2: u64) -> Result<u64> {
    split.compose(q1, q2)
}

pub fn crt_decompose(split: &CoprimeSplit, q: u64) -> Result<(u64, u64)> {
    split.decompose(q)
}

/// `Δ^m(x)`: 1 when `x ≡ 0 (mod m)`, else 0.
pub fn kronecker_mod(x: i64, m: u64) -> u8 {
    u8::from(x.rem_euclid(m as i64) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(15).unwrap().factors(), &[(3, 1), (5, 1)]);
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        assert_eq!(factorize(30).unwrap().factors(), &[(2, 1), (3, 1), (5, 1)]);
        assert_eq!(factorize(1), Err(Error::Dimension(1)));
        assert_eq!(factorize(0), Err(Error::Dimension(0)));
    }

    #[test]
    fn factorization_invariants_up_to_1000() {
        for m in 2..=1000 {
            let f = factorize(m).unwrap();
            let prod: u64 = f.factors().iter().map(|&(p, n)| p.pow(n)).product();
            assert_eq!(prod, m);
            assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.factors().iter().all(|&(p, n)| is_prime(p) && n >= 1));
        }
    }

    #[test]
    fn display_uses_exponents() {
        assert_eq!(factorize(15).unwrap().to_string(), "15 = 3·5");
        assert_eq!(factorize(12).unwrap().to_string(), "12 = 2^2·3");
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(5, 3), Ok(2));
        assert_eq!(mod_inverse(3, 5), Ok(2));
        assert_eq!(mod_inverse(1, 7), Ok(1));
        assert_eq!(mod_inverse(1, 2), Ok(1));
        assert_eq!(
            mod_inverse(4, 6),
            Err(Error::NotInvertible { value: 4, modulus: 6 })
        );
    }

    #[test]
    fn split_fifteen() {
        let s = make_split(15, 3).unwrap();
        assert_eq!((s.m1(), s.m2(), s.l1(), s.l2(), s.n1(), s.n2()), (3, 5, 5, 3, 2, 2));
    }

    #[test]
    fn split_twelve() {
        let s = make_split(12, 4).unwrap();
        assert_eq!((s.m1(), s.m2(), s.l1(), s.l2(), s.n1(), s.n2()), (4, 3, 3, 4, 3, 1));
    }

    #[test]
    fn split_errors() {
        assert_eq!(
            make_split(12, 2),
            Err(Error::NotCoprime { m1: 2, m2: 6, gcd: 2 })
        );
        assert_eq!(make_split(12, 5), Err(Error::NotDivisor { m: 12, divisor: 5 }));
        assert_eq!(make_split(12, 0), Err(Error::NotDivisor { m: 12, divisor: 0 }));
        assert_eq!(make_split(15, 1), Err(Error::TrivialSplit { m: 15, m1: 1 }));
        assert_eq!(make_split(15, 15), Err(Error::TrivialSplit { m: 15, m1: 15 }));
        // Larger factor first is fine.
        assert!(make_split(15, 5).is_ok());
    }

    #[test]
    fn enumerate_examples() {
        let s15: Vec<_> = enumerate_splits(15).unwrap().iter().map(|s| (s.m1(), s.m2())).collect();
        assert_eq!(s15, vec![(3, 5)]);
        let s30: Vec<_> = enumerate_splits(30).unwrap().iter().map(|s| (s.m1(), s.m2())).collect();
        assert_eq!(s30, vec![(2, 15), (3, 10), (5, 6)]);
        assert!(enumerate_splits(7).unwrap().is_empty());
        assert!(enumerate_splits(8).unwrap().is_empty());
    }

    #[test]
    fn split_invariants_up_to_1000() {
        for m in 2..=1000 {
            let f = factorize(m).unwrap();
            let splits = enumerate_splits(m).unwrap();
            assert_eq!(splits.len() as u64, f.chi() - 1, "M = {m}");
            for s in &splits {
                assert_eq!(s.m1() * s.m2(), m);
                assert!(s.m1() >= 2 && s.m2() >= 2 && s.m1() < s.m2());
                assert_eq!(gcd(s.m1(), s.m2()), 1);
                assert_eq!((s.l1(), s.l2()), (s.m2(), s.m1()));
                assert_eq!((s.n1() * s.l1()) % s.m1(), 1);
                assert_eq!((s.n2() * s.l2()) % s.m2(), 1);
                assert!(s.n1() >= 1 && s.n1() < s.m1());
                assert!(s.n2() >= 1 && s.n2() < s.m2());
            }
            assert!(splits.windows(2).all(|w| w[0].m1() < w[1].m1()));
        }
    }

    #[test]
    fn crt_examples() {
        let s = make_split(15, 3).unwrap();
        assert_eq!(crt_compose(&s, 2, 4), Ok(14));
        assert_eq!(crt_compose(&s, 0, 0), Ok(0));
        assert_eq!(crt_compose(&s, 1, 0), Ok(10));
        assert_eq!(crt_decompose(&s, 14), Ok((2, 4)));
        assert_eq!(crt_decompose(&s, 0), Ok((0, 0)));
        assert!(crt_compose(&s, 3, 0).is_err());
        assert!(crt_compose(&s, 0, 5).is_err());
        assert!(crt_decompose(&s, 15).is_err());
        for q in 0..15 {
            let (a, b) = crt_decompose(&s, q).unwrap();
            assert_eq!(crt_compose(&s, a, b), Ok(q));
        }
    }

    #[test]
    fn compose_is_bijective_and_satisfies_congruences() {
        for m in [6, 10, 12, 15, 21, 30, 35, 210] {
            for s in enumerate_splits(m).unwrap() {
                for s in [s, s.swapped()] {
                    let mut seen = vec![false; m as usize];
                    for q1 in 0..s.m1() {
                        for q2 in 0..s.m2() {
                            let q = s.compose(q1, q2).unwrap();
                            assert_eq!((q % s.m1(), q % s.m2()), (q1, q2));
                            assert!(!seen[q as usize]);
                            seen[q as usize] = true;
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn delta_identity_exhaustive() {
        for m in [6, 10, 12, 15] {
            for s in enumerate_splits(m).unwrap() {
                for q in 0..m {
                    for q1 in 0..s.m1() {
                        for q2 in 0..s.m2() {
                            let lhs = kronecker_mod(
                                q as i64 - (q1 * s.n1() * s.l1() + q2 * s.n2() * s.l2()) as i64,
                                m,
                            );
                            let rhs = kronecker_mod(q as i64 - q1 as i64, s.m1())
                                * kronecker_mod(q as i64 - q2 as i64, s.m2());
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn chi_counts() {
        assert_eq!(factorize(15).unwrap().chi(), 2);
        assert_eq!(factorize(30).unwrap().chi(), 4);
        assert_eq!(factorize(7).unwrap().chi(), 1);
        assert_eq!(enumerate_splits(210).unwrap().len(), 7);
    }
}
