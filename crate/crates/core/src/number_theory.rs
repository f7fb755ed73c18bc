//! Primes, prime powers and the von Mangoldt function.
//!
//! Everything here is exact integer bookkeeping; the only floating point
//! values are the logarithms `log p` carried by [`LambdaTable`].

use thiserror::Error;

/// Largest sieve limit accepted by [`sieve`].
pub const SIEVE_CAP: usize = 100_000_000;

const SEGMENT: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumberTheoryError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{n} is outside the table range 1..={limit}")]
    OutOfRange { n: u64, limit: usize },
}

/// Primes up to `limit` together with a smallest-prime-factor lookup.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: usize,
    primes: Vec<u32>,
    smallest_factor: Vec<u32>,
}

/// Segmented sieve of Eratosthenes.
///
/// Base primes up to `sqrt(limit)` are found with a plain sieve; the range is
/// then swept in fixed-size segments, each of which records the smallest
/// prime factor of every composite it contains.
pub fn sieve(limit: usize) -> Result<PrimeTable, NumberTheoryError> {
    if limit < 2 {
        return Err(NumberTheoryError::InvalidArgument(format!(
            "sieve limit must be at least 2, got {limit}"
        )));
    }
    if limit > SIEVE_CAP {
        return Err(NumberTheoryError::InvalidArgument(format!(
            "sieve limit {limit} exceeds cap {SIEVE_CAP}"
        )));
    }

    let root = (limit as f64).sqrt() as usize + 1;
    let mut small = vec![true; root + 1];
    let mut base = Vec::new();
    for i in 2..=root {
        if small[i] {
            base.push(i);
            let mut j = i * i;
            while j <= root {
                small[j] = false;
                j += i;
            }
        }
    }

    let mut smallest_factor = vec![0u32; limit + 1];
    let mut primes = Vec::new();
    let mut lo = 2;
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let start = (p * p).max(lo.div_ceil(p) * p);
            let mut m = start;
            while m <= hi {
                if smallest_factor[m] == 0 {
                    smallest_factor[m] = p as u32;
                }
                m += p;
            }
        }
        for n in lo..=hi {
            if smallest_factor[n] == 0 {
                smallest_factor[n] = n as u32;
                primes.push(n as u32);
            }
        }
        lo = hi + 1;
    }
    smallest_factor[1] = 1;

    Ok(PrimeTable {
        limit,
        primes,
        smallest_factor,
    })
}

impl PrimeTable {
    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Smallest prime factor of `n`; `1` for `n = 1`.
    pub fn smallest_factor(&self, n: usize) -> Result<u32, NumberTheoryError> {
        if n == 0 || n > self.limit {
            return Err(NumberTheoryError::OutOfRange {
                n: n as u64,
                limit: self.limit,
            });
        }
        Ok(self.smallest_factor[n])
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && n <= self.limit && self.smallest_factor[n] as usize == n
    }

    /// Number of primes `<= x`, restricted to the table range.
    pub fn count_up_to(&self, x: f64) -> usize {
        if x < 2.0 {
            return 0;
        }
        let bound = x.floor().min(self.limit as f64) as u32;
        self.primes.partition_point(|&p| p <= bound)
    }

    /// Decompose `n` as `p^k` if it is a prime power.
    pub fn prime_power(&self, n: usize) -> Option<(u32, u32)> {
        if n < 2 || n > self.limit {
            return None;
        }
        let p = self.smallest_factor[n] as usize;
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        (m == 1).then_some((p as u32, k))
    }
}

/// One prime power `n = p^k` with its von Mangoldt weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimePower {
    pub n: u64,
    pub p: u32,
    pub k: u32,
    /// `log p`
    pub lambda: f64,
    /// `log n`
    pub log_n: f64,
}

/// Λ(n) for `n <= limit`, plus the ascending list of prime powers.
#[derive(Debug, Clone)]
pub struct LambdaTable {
    limit: usize,
    values: Vec<f64>,
    powers: Vec<PrimePower>,
    primes: PrimeTable,
}

impl LambdaTable {
    pub fn new(limit: usize) -> Result<Self, NumberTheoryError> {
        let primes = sieve(limit.max(2))?;
        Ok(Self::from_primes(primes))
    }

    pub fn from_primes(primes: PrimeTable) -> Self {
        let limit = primes.limit;
        let mut values = vec![0.0; limit + 1];
        let mut powers = Vec::new();
        for &p in &primes.primes {
            let log_p = (p as f64).ln();
            let mut q = p as u64;
            let mut k = 1;
            while q <= limit as u64 {
                values[q as usize] = log_p;
                powers.push(PrimePower {
                    n: q,
                    p,
                    k,
                    lambda: log_p,
                    log_n: k as f64 * log_p,
                });
                q *= p as u64;
                k += 1;
            }
        }
        powers.sort_by_key(|pp| pp.n);
        Self {
            limit,
            values,
            powers,
            primes,
        }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn prime_table(&self) -> &PrimeTable {
        &self.primes
    }

    /// Λ(n); `n = 0` is treated as out of range.
    pub fn get(&self, n: u64) -> Result<f64, NumberTheoryError> {
        if n == 0 || n > self.limit as u64 {
            return Err(NumberTheoryError::OutOfRange {
                n,
                limit: self.limit,
            });
        }
        Ok(self.values[n as usize])
    }

    /// Prime powers `n <= x` in ascending order.
    pub fn powers_up_to(&self, x: f64) -> &[PrimePower] {
        if x < 2.0 {
            return &[];
        }
        let bound = x.floor() as u64;
        let end = self.powers.partition_point(|pp| pp.n <= bound);
        &self.powers[..end]
    }

    /// Prime powers with `lo < n <= hi`.
    pub fn powers_between(&self, lo: f64, hi: f64) -> &[PrimePower] {
        let all = self.powers_up_to(hi);
        let start = if lo < 1.0 {
            0
        } else {
            let b = lo.floor() as u64;
            all.partition_point(|pp| pp.n <= b)
        };
        &all[start.min(all.len())..]
    }

    /// Primes `p <= x` as prime powers with `k = 1`.
    pub fn primes_up_to(&self, x: f64) -> impl Iterator<Item = &PrimePower> {
        self.powers_up_to(x).iter().filter(|pp| pp.k == 1)
    }

    /// ψ(x) from the table; `x` beyond the table is an error.
    pub fn psi(&self, x: f64) -> Result<f64, NumberTheoryError> {
        self.check_x(x)?;
        Ok(self.powers_up_to(x).iter().map(|pp| pp.lambda).sum())
    }

    /// θ(x) = Σ_{p<=x} log p.
    pub fn theta(&self, x: f64) -> Result<f64, NumberTheoryError> {
        self.check_x(x)?;
        Ok(self.primes_up_to(x).map(|pp| pp.lambda).sum())
    }

    pub fn check_x(&self, x: f64) -> Result<(), NumberTheoryError> {
        if !x.is_finite() || x.floor() > self.limit as f64 {
            return Err(NumberTheoryError::OutOfRange {
                n: if x.is_finite() { x.floor() as u64 } else { u64::MAX },
                limit: self.limit,
            });
        }
        Ok(())
    }
}

/// Λ(n) read from a prime table.
pub fn von_mangoldt(n: u64, table: &PrimeTable) -> Result<f64, NumberTheoryError> {
    if n == 0 || n > table.limit as u64 {
        return Err(NumberTheoryError::OutOfRange {
            n,
            limit: table.limit,
        });
    }
    Ok(table
        .prime_power(n as usize)
        .map_or(0.0, |(p, _)| (p as f64).ln()))
}

/// ψ(x) = Σ_{n<=x} Λ(n). Sieves up to `floor(x)` internally.
pub fn chebyshev_psi(x: f64) -> f64 {
    if !(x >= 2.0) {
        return 0.0;
    }
    let limit = x.floor() as usize;
    match LambdaTable::new(limit) {
        Ok(t) => t.powers_up_to(x).iter().map(|pp| pp.lambda).sum(),
        Err(_) => f64::NAN,
    }
}

/// θ(x) = Σ_{p<=x} log p.
pub fn chebyshev_theta(x: f64) -> f64 {
    if !(x >= 2.0) {
        return 0.0;
    }
    match sieve(x.floor() as usize) {
        Ok(t) => t.primes.iter().map(|&p| (p as f64).ln()).sum(),
        Err(_) => f64::NAN,
    }
}

/// π(x), the number of primes `<= x`.
pub fn prime_pi(x: f64) -> usize {
    if !(x >= 2.0) {
        return 0;
    }
    sieve(x.floor() as usize).map_or(0, |t| t.primes.len())
}
