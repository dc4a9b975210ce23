//! Rational-integer helpers on `u64`: sieving, primality, factorization.

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if composite[p] {
            continue;
        }
        primes.push(p as u64);
        let mut m = p * p;
        while m <= n {
            composite[m] = true;
            m += p;
        }
    }
    primes
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Pollard rho with Floyd cycle detection; returns a nontrivial factor of composite `n`.
fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1.. {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!()
}

const TRIAL_BOUND: u64 = 1 << 16;

/// Prime factorization as sorted `(p, e)` pairs. Trial division first,
/// Pollard rho for whatever cofactor survives.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut p = 2;
    while p <= TRIAL_BOUND && p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        let mut stack = vec![n];
        let mut large = Vec::new();
        while let Some(m) = stack.pop() {
            if is_prime_u64(m) {
                large.push(m);
            } else {
                let d = pollard_rho(m);
                stack.push(d);
                stack.push(m / d);
            }
        }
        large.sort_unstable();
        for q in large {
            match out.last_mut() {
                Some((last, e)) if *last == q => *e += 1,
                _ => out.push((q, 1)),
            }
        }
    }
    out
}

/// A square root of -1 modulo a prime `p = 1 mod 4`.
pub fn sqrt_minus_one(p: u64) -> u64 {
    debug_assert!(p % 4 == 1);
    for c in 2..p {
        // c is a non-residue iff c^((p-1)/2) = -1
        if pow_mod(c, (p - 1) / 2, p) == p - 1 {
            return pow_mod(c, (p - 1) / 4, p);
        }
    }
    unreachable!("a quadratic non-residue exists for odd primes")
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime
    pow_mod(a, p - 2, p)
}
