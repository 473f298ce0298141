//! Exact integer and modular arithmetic shared by every other module:
//! primality, factorization, Jacobi symbols, primitive roots, and exact
//! roots of unity.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Modular exponentiation with u128 intermediates.
pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut result = 1u128;
    let mut b = (base % modulus) as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * b % m;
        }
        exp >>= 1;
        b = b * b % m;
    }
    result as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if a == 0 {
        return (b, 0, 1);
    }
    let (g, x, y) = extended_gcd(b % a, a);
    (g, y - (b / a) * x, x)
}

/// Modular inverse; `None` when gcd(a, m) != 1.
pub fn mod_inv(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = extended_gcd((a % m) as i128, m as i128);
    if g != 1 {
        return None;
    }
    Some(((x % m as i128 + m as i128) % m as i128) as u64)
}

/// Deterministic Miller-Rabin, valid for all n < 3.3 * 10^24 with these bases.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A positive integer with its ordered prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub value: u64,
    /// (prime, exponent) pairs with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// True when no prime exponent reaches 3.
    pub fn is_cube_free(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e < 3)
    }

    /// Product of prime^exponent; reconstructs `value`.
    pub fn product(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
            .max(1)
    }
}

const TRIAL_DIVISION_BOUND: u64 = 1_000_000;

/// Pollard's rho with Brent's cycle detection. `n` must be odd, composite,
/// and not a prime power handled by trial division.
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let n128 = n as u128;
    let mut c = 1u64;
    loop {
        let f = |x: u64| -> u64 { ((x as u128 * x as u128 + c as u128) % n128) as u64 };
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Factorize by trial division with a 2-3-5 wheel up to 10^6, then Pollard
/// rho for the composite cofactor. Deterministic; q = 1 yields no factors.
pub fn factorize(q: u64) -> Factorization {
    assert!(q >= 1, "factorize requires q >= 1");
    let mut primes = Vec::new();
    let mut n = q;
    for &p in &[2u64, 3, 5] {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    // Wheel mod 30 offsets from 7.
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut w = 0usize;
    while d <= TRIAL_DIVISION_BOUND && d as u128 * d as u128 <= n as u128 {
        if n % d == 0 {
            while n % d == 0 {
                primes.push(d);
                n /= d;
            }
            if n == 1 || is_prime(n) {
                break;
            }
        }
        d += WHEEL[w];
        w = (w + 1) % 8;
    }
    factor_into(n, &mut primes);
    primes.sort_unstable();
    let mut factors: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match factors.last_mut() {
            Some((q0, e)) if *q0 == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Factorization { value: q, factors }
}

/// True iff no prime cubed divides q.
pub fn is_cube_free(q: u64) -> bool {
    factorize(q).is_cube_free()
}

/// Jacobi symbol (a | n) for odd positive n. Completely multiplicative in a;
/// equals the Legendre symbol for prime n.
pub fn jacobi(a: i64, n: u64) -> Result<i8> {
    if n % 2 == 0 {
        return Err(Error::EvenModulus { q: n });
    }
    let mut n = n;
    let mut a = (a.rem_euclid(n as i64)) as u64;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    Ok(if n == 1 { sign } else { 0 })
}

/// Smallest generator of the unit group mod p^a for an odd prime p.
pub fn primitive_root(p: u64, a: u32) -> Result<u64> {
    if p == 2 {
        return Err(Error::InvalidInput {
            what: "primitive_root",
            detail: "p = 2 is handled by the two-generator construction".into(),
        });
    }
    if !is_prime(p) {
        return Err(Error::InvalidInput {
            what: "primitive_root",
            detail: format!("{p} is not prime"),
        });
    }
    let modulus = p.checked_pow(a).ok_or(Error::InvalidInput {
        what: "primitive_root",
        detail: format!("{p}^{a} overflows u64"),
    })?;
    let order = modulus / p * (p - 1); // phi(p^a)
    let prime_divisors: Vec<u64> = factorize(order).factors.iter().map(|&(q, _)| q).collect();
    for g in 2..modulus {
        if g % p == 0 {
            continue;
        }
        if prime_divisors
            .iter()
            .all(|&f| mod_pow(g, order / f, modulus) != 1)
        {
            return Ok(g);
        }
    }
    unreachable!("unit group mod an odd prime power is cyclic");
}

/// exp(2*pi*i * numerator/denominator), stored as a reduced fraction with a
/// cached complex approximation (accurate to a few ulp, well inside 2^-50).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootOfUnity {
    numerator: u64,
    denominator: u64,
    value: Complex64,
}

impl RootOfUnity {
    /// exp(2*pi*i*x/modulus) with x reduced mod `modulus` and the fraction
    /// brought to lowest terms.
    pub fn new(x: i64, modulus: u64) -> Self {
        assert!(modulus >= 1);
        let num = x.rem_euclid(modulus as i64) as u64;
        let g = gcd(num, modulus).max(1);
        let (num, den) = if num == 0 { (0, 1) } else { (num / g, modulus / g) };
        // the fourth roots are exact; everything else via sin/cos
        let value = match (num, den) {
            (0, 1) => Complex64::new(1.0, 0.0),
            (1, 2) => Complex64::new(-1.0, 0.0),
            (1, 4) => Complex64::new(0.0, 1.0),
            (3, 4) => Complex64::new(0.0, -1.0),
            _ => {
                let angle = 2.0 * std::f64::consts::PI * (num as f64) / (den as f64);
                let (sin, cos) = angle.sin_cos();
                Complex64::new(cos, sin)
            }
        };
        RootOfUnity {
            numerator: num,
            denominator: den,
            value,
        }
    }

    pub fn one() -> Self {
        RootOfUnity::new(0, 1)
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn to_complex(&self) -> Complex64 {
        self.value
    }

    /// Exact product at the rational-exponent level.
    pub fn times(&self, other: &RootOfUnity) -> RootOfUnity {
        let den = self.denominator / gcd(self.denominator, other.denominator) * other.denominator;
        let num =
            self.numerator * (den / self.denominator) + other.numerator * (den / other.denominator);
        RootOfUnity::new((num % den) as i64, den)
    }

    /// True for the real values 1 and -1.
    pub fn is_real(&self) -> bool {
        self.denominator <= 2
    }
}

/// Smallest prime >= n.
pub fn next_prime_at_least(n: u64) -> u64 {
    let mut candidate = n.max(2);
    while !is_prime(candidate) {
        candidate += 1;
    }
    candidate
}

/// Smallest prime l with lo < l <= hi.
pub fn prime_in_interval(lo: f64, hi: f64) -> Result<u64> {
    assert!(lo >= 0.0 && hi >= lo);
    let mut candidate = lo.floor() as u64 + 1;
    if candidate < 2 {
        candidate = 2;
    }
    while (candidate as f64) <= hi {
        if candidate as f64 > lo && is_prime(candidate) {
            return Ok(candidate);
        }
        candidate += 1;
    }
    Err(Error::NoPrimeInInterval { lo, hi })
}

/// Exact comparison base^exp >= bound without floating point.
pub fn pow_at_least(base: u64, exp: u32, bound: u64) -> bool {
    use num_bigint::BigUint;
    BigUint::from(base).pow(exp) >= BigUint::from(bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(12).factors, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(1).factors, vec![]);
        // 999983 is prime: trial division up to sqrt finds no divisor.
        assert_eq!(factorize(999_983).factors, vec![(999_983, 1)]);
        assert_eq!(factorize(2u64.pow(40)).factors, vec![(2, 40)]);
    }

    #[test]
    fn factorize_roundtrip_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let n: u64 = rng.gen_range(1..=1_000_000_000_000);
            let f = factorize(n);
            assert_eq!(f.product(), n, "factorization of {n} does not reconstruct");
            for w in f.factors.windows(2) {
                assert!(w[0].0 < w[1].0);
            }
            for &(p, _) in &f.factors {
                assert!(is_prime(p), "{p} listed as prime factor of {n}");
            }
        }
    }

    #[test]
    fn cube_free_examples() {
        assert!(!is_cube_free(8));
        assert!(is_cube_free(12));
        assert!(!is_cube_free(135)); // 27 * 5
        assert!(is_cube_free(1));
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(3, 7).unwrap(), -1); // squares mod 7 are {1,2,4}
        assert_eq!(jacobi(1, 45).unwrap(), 1);
        assert_eq!(jacobi(14, 7).unwrap(), 0);
        assert!(jacobi(3, 8).is_err());
    }

    #[test]
    fn jacobi_multiplicative_exhaustive() {
        for q in (1..=99u64).step_by(2) {
            for m in -100i64..=100 {
                for n in -100i64..=100 {
                    let lhs = jacobi(m * n, q).unwrap();
                    let rhs = jacobi(m, q).unwrap() * jacobi(n, q).unwrap();
                    assert_eq!(lhs, rhs, "jacobi not multiplicative at ({m},{n},{q})");
                }
            }
        }
    }

    #[test]
    fn primitive_root_examples() {
        assert_eq!(primitive_root(7, 1).unwrap(), 3);
        assert_eq!(primitive_root(5, 1).unwrap(), 2);
        assert_eq!(primitive_root(3, 2).unwrap(), 2); // 2 has order 6 mod 9
        assert!(primitive_root(2, 3).is_err());
    }

    #[test]
    fn root_of_unity_examples() {
        let one = RootOfUnity::new(0, 5);
        assert_eq!(one.to_complex(), Complex64::new(1.0, 0.0));
        let i = RootOfUnity::new(1, 4);
        assert!((i.to_complex() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        // periodicity
        assert_eq!(RootOfUnity::new(7, 7), RootOfUnity::one());
    }

    #[test]
    fn root_of_unity_products_are_exact() {
        for l in 1..=24u64 {
            for x in 0..l as i64 {
                for y in 0..l as i64 {
                    let prod = RootOfUnity::new(x, l).times(&RootOfUnity::new(y, l));
                    assert_eq!(prod, RootOfUnity::new(x + y, l));
                }
            }
        }
    }

    #[test]
    fn root_of_unity_complex_accuracy() {
        // cached approximation within 2^-50 of the exact value
        let tol = 2f64.powi(-50);
        for &(num, den) in &[(1i64, 8u64), (3, 8), (1, 3), (5, 12), (1, 7)] {
            let r = RootOfUnity::new(num, den);
            let angle = 2.0 * std::f64::consts::PI * num as f64 / den as f64;
            let exact = Complex64::new(angle.cos(), angle.sin());
            assert!((r.to_complex() - exact).norm() <= tol);
        }
    }

    #[test]
    fn prime_interval_examples() {
        assert_eq!(prime_in_interval(10.0, 20.0).unwrap(), 11);
        assert_eq!(prime_in_interval(2.0, 3.0).unwrap(), 3);
        assert!(prime_in_interval(24.0, 28.0).is_err()); // 25,26,27,28 composite
    }

    #[test]
    fn pow_comparison_is_exact() {
        assert!(pow_at_least(4, 4, 256));
        assert!(!pow_at_least(4, 4, 257));
        assert!(pow_at_least(100_000, 16, u64::MAX));
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in 0..2000u64 {
            let by_trial = n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), by_trial, "disagree at {n}");
        }
    }
}
