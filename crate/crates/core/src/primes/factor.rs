//! Miller-Rabin and Pollard-Brent rho for `u64` and arbitrary precision.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rounds used above 2^64. Each round admits a composite with probability
/// at most 1/4, so the false-positive bound is 4^-40.
pub const PROBABLE_PRIME_ROUNDS: usize = 40;

const RNG_SEED: u64 = 0x6d61_7475_6c61_0001;

/// Deterministic for all `u64` (Jaeschke/Sinclair witness set).
const WITNESSES_U64: [u64; 7] = [2, 325, 9375, 28178, 450775, 9780504, 1795265022];

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
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

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &w in &WITNESSES_U64 {
        let a = w % n;
        if a == 0 {
            continue;
        }
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

/// Uniform-ish base in `[2, n - 2]`.
fn random_base(rng: &mut ChaCha8Rng, n: &BigUint) -> BigUint {
    let words = n.bits().div_ceil(64) as usize + 1;
    let digits: Vec<u64> = (0..words).map(|_| rng.random()).collect();
    let span = n - 3u32;
    let mut raw = BigUint::zero();
    for d in digits {
        raw = (raw << 64u32) + d;
    }
    raw % span + 2u32
}

pub fn is_probable_prime_big(n: &BigUint, rounds: usize) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut rng = ChaCha8Rng::seed_from_u64(RNG_SEED);
    'round: for _ in 0..rounds {
        let a = random_base(&mut rng, n);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'round;
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

/// Pollard-Brent rho. Returns a nontrivial factor of the odd composite `n`,
/// or `None` when every tried polynomial cycles without splitting.
pub fn rho_u64(n: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    const BATCH: u64 = 128;
    for c in 1..64u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut y, mut r, mut q, mut g) = (2u64, 1u64, 1u64, 1u64);
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += BATCH;
            }
            r *= 2;
            if r > 1 << 26 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g < n {
            return Some(g);
        }
    }
    None
}

/// Cycle length at which `rho_big` gives up on a cofactor.
const RHO_BIG_MAX_ROUND: u64 = 1 << 22;

pub fn rho_big(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    const BATCH: u64 = 128;
    let one = BigUint::one();
    for c in 1..32u32 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut q = one.clone();
        let mut g = one.clone();
        let mut r = 1u64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
            if r > RHO_BIG_MAX_ROUND {
                // Out of budget; another constant would cost as much again.
                return None;
            }
        }
        if &g == n || g.is_zero() {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g > one {
                    break;
                }
            }
        }
        if g > one && &g < n {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carmichael_numbers_are_rejected() {
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 8911] {
            assert!(!is_prime_u64(n), "{n}");
        }
    }

    #[test]
    fn large_u64_primes() {
        assert!(is_prime_u64(9_999_999_967));
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest prime < 2^64
        assert!(!is_prime_u64(18_446_744_073_709_551_559));
    }

    #[test]
    fn big_probable_primes() {
        // 2^89 - 1 is a Mersenne prime; 2^89 + 1 is divisible by 3.
        let m89 = (BigUint::one() << 89u32) - 1u32;
        assert!(is_probable_prime_big(&m89, PROBABLE_PRIME_ROUNDS));
        let p89 = (BigUint::one() << 89u32) + 1u32;
        assert!(!is_probable_prime_big(&p89, PROBABLE_PRIME_ROUNDS));
    }

    #[test]
    fn rho_splits_semiprimes() {
        let n = 1_000_003u64 * 999_983;
        let f = rho_u64(n).unwrap();
        assert!(f == 1_000_003 || f == 999_983);

        let a = BigUint::from(4_294_967_311u64);
        let b = BigUint::from(4_294_967_357u64);
        let n = &a * &b;
        let f = rho_big(&n).unwrap();
        assert!(f == a || f == b);
    }
}
