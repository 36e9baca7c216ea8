/// Deterministic trial division; inputs here are far below 2^32.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Primes in `[lo, hi)` by a plain sieve.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi <= 2 {
        return Vec::new();
    }
    let hi = hi as usize;
    let mut sieve = vec![true; hi];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < hi {
        if sieve[i] {
            let mut j = i * i;
            while j < hi {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (lo as usize..hi)
        .filter(|&k| sieve[k])
        .map(|k| k as u64)
        .collect()
}

/// Legendre symbol (a | p) for an odd prime p, in {-1, 0, 1}.
pub fn legendre(a: i64, p: u64) -> i32 {
    let a = (a as i128).rem_euclid(p as i128) as u64;
    if a == 0 {
        return 0;
    }
    let mut acc: u128 = 1;
    let mut base = a as u128;
    let mut e = (p - 1) / 2;
    let m = p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    if acc == 1 {
        1
    } else {
        -1
    }
}

/// Table of quadratic characters chi(0..p) for repeated lookups.
pub struct QuadraticCharacter {
    table: Vec<i8>,
}

impl QuadraticCharacter {
    pub fn new(p: u64) -> Self {
        let mut table = vec![-1i8; p as usize];
        table[0] = 0;
        for y in 1..=(p - 1) / 2 {
            table[((y * y) % p) as usize] = 1;
        }
        QuadraticCharacter { table }
    }

    pub fn chi(&self, a: u64) -> i64 {
        self.table[(a % self.table.len() as u64) as usize] as i64
    }
}
