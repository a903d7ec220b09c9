//! Binomial coefficients modulo a prime, digit by digit in base `p`.

/// Deterministic trial-division primality test. Inputs here are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Base-`p` digits of `n`, least significant first. `0` has no digits.
pub fn base_p_digits(mut n: u64, p: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        out.push(n % p);
        n /= p;
    }
    out
}

/// `C(a, b) mod p` for `a < p`, by direct products with a modular inverse.
fn small_binom(a: u64, b: u64, p: u64) -> u64 {
    if b > a {
        return 0;
    }
    let b = b.min(a - b);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    let pm = p as u128;
    for i in 0..b {
        num = num * ((a - i) as u128) % pm;
        den = den * ((i + 1) as u128) % pm;
    }
    (num * mod_pow(den, pm - 2, pm) as u128 % pm) as u64
}

fn mod_pow(mut base: u128, mut e: u128, m: u128) -> u64 {
    let mut acc: u128 = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    acc as u64
}

/// `C(n, r) mod p`, computed as the product of `C(n_i, r_i)` over base-`p` digits.
///
/// Returns 0 when `r > n`. `p` must be prime.
pub fn lucas_binom(mut n: u64, mut r: u64, p: u64) -> u64 {
    debug_assert!(is_prime(p), "lucas_binom needs a prime modulus");
    if r > n {
        return 0;
    }
    let mut acc: u128 = 1;
    while r > 0 || n > 0 {
        let (ni, ri) = (n % p, r % p);
        if ri > ni {
            return 0;
        }
        acc = acc * small_binom(ni, ri, p) as u128 % p as u128;
        n /= p;
        r /= p;
    }
    acc as u64
}

/// Returns `Some(j)` when `n == p^j`.
pub fn p_power_exponent(n: u64, p: u64) -> Option<u32> {
    if n == 0 || p < 2 {
        return None;
    }
    let mut m = n;
    let mut j = 0;
    while m % p == 0 {
        m /= p;
        j += 1;
    }
    (m == 1).then_some(j)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(lucas_binom(4, 2, 2), 0);
        for p in [2, 3, 5, 7] {
            for n in 0..50 {
                assert_eq!(lucas_binom(n, 0, p), 1);
            }
        }
        for p in [2u64, 3] {
            for i in 1..p * p {
                assert_eq!(lucas_binom(p * p, i, p), 0);
            }
        }
        assert_eq!(lucas_binom(3, 7, 5), 0);
    }

    #[test]
    fn primes_and_powers() {
        let primes: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(p_power_exponent(27, 3), Some(3));
        assert_eq!(p_power_exponent(1, 2), Some(0));
        assert_eq!(p_power_exponent(12, 2), None);
        assert_eq!(base_p_digits(5, 3), vec![2, 1]);
    }
}
