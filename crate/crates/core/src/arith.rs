//! Integer helpers: factorisation, square classes, residue symbols.
//!
//! Everything here works on `BigInt`, with factorisation restricted to
//! prime factors that fit in a `u64`.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(big(n), big(d))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_u64_into(d, out);
    factor_u64_into(n / d, out);
}

/// Prime factorisation of `|n|` as sorted `(prime, exponent)` pairs.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        while n > 1 && n % p == 0 {
            primes.push(p);
            n /= p;
        }
    }
    let mut p = 17;
    while n > 1 && p * p <= n && p < 1000 {
        while n % p == 0 {
            primes.push(p);
            n /= p;
        }
        p += 2;
    }
    factor_u64_into(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Miller-Rabin on the first twelve prime bases; exact below 3.3e24.
fn is_probable_prime_big(n: &BigInt) -> bool {
    if let Some(m) = n.to_u64() {
        return is_prime_u64(m);
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

const RHO_BUDGET: u64 = 1 << 21;

/// Brent's variant of Pollard rho; `None` once the iteration budget is spent.
fn pollard_brent_big(n: &BigInt) -> Option<BigInt> {
    let one = BigInt::one();
    for c in 1u64..6 {
        let c = BigInt::from(c);
        let f = |x: &BigInt| (x * x + &c) % n;
        let (mut y, mut r, mut q) = (BigInt::from(2), 1u64, one.clone());
        let (mut x, mut ys) = (y.clone(), y.clone());
        let mut g = one.clone();
        let mut spent = 0u64;
        while g == one && spent < RHO_BUDGET {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..128.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            spent += r;
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && g != *n {
            return Some(g);
        }
    }
    None
}

fn factor_big_into(n: BigInt, out: &mut Vec<u64>) -> Result<()> {
    if let Some(m) = n.to_u64() {
        out.extend(factor_u64(m).into_iter().flat_map(|(p, e)| std::iter::repeat(p).take(e as usize)));
        return Ok(());
    }
    if is_probable_prime_big(&n) {
        return Err(Error::Unsupported(format!("prime factor {n} exceeds 64 bits")));
    }
    let d = pollard_brent_big(&n)
        .ok_or_else(|| Error::Unsupported(format!("could not factor {n} within budget")))?;
    let rest = &n / &d;
    factor_big_into(d, out)?;
    factor_big_into(rest, out)
}

/// Prime factorisation of `|n|`. Inputs beyond 64 bits are handled by trial
/// division and a bounded rho search; prime factors must fit in a `u64`.
pub fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    if n.is_zero() {
        return Err(Error::Precondition("cannot factor zero".into()));
    }
    let mut m = n.abs();
    if let Some(m) = m.to_u64() {
        return Ok(factor_u64(m));
    }
    if let Some(hit) = FACTOR_CACHE.with(|c| c.borrow().get(&m).cloned()) {
        return Ok(hit);
    }
    let key = m.clone();
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p < 20_000 && m.to_u64().is_none() {
        let bp = BigInt::from(p);
        while (&m % &bp).is_zero() {
            primes.push(p);
            m /= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    factor_big_into(m, &mut primes)?;
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    FACTOR_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() > 4096 {
            c.clear();
        }
        c.insert(key, out.clone());
    });
    Ok(out)
}

thread_local! {
    /// Factorisations beyond 64 bits; the same entries recur across local tests.
    static FACTOR_CACHE: std::cell::RefCell<std::collections::HashMap<BigInt, Vec<(u64, u32)>>> =
        std::cell::RefCell::new(std::collections::HashMap::new());
}

/// Writes a nonzero integer as `s * r^2` with `s` squarefree (sign kept in `s`).
pub fn squarefree_decompose(n: &BigInt) -> Result<(BigInt, BigInt)> {
    let mut s = if n.is_negative() { -BigInt::one() } else { BigInt::one() };
    let mut r = BigInt::one();
    for (p, e) in factor(n)? {
        let p = BigInt::from(p);
        if e % 2 == 1 {
            s *= &p;
        }
        r *= p.pow(e / 2);
    }
    Ok((s, r))
}

/// Squarefree integer representing the square class of a nonzero rational.
pub fn square_class_rational(x: &BigRational) -> Result<BigInt> {
    let n = x.numer() * x.denom();
    Ok(squarefree_decompose(&n)?.0)
}

pub fn isqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn sqrt_rational(x: &BigRational) -> Option<BigRational> {
    let n = isqrt_exact(x.numer())?;
    let d = isqrt_exact(x.denom())?;
    Some(BigRational::new(n, d))
}

/// Legendre symbol (a/p) for odd prime p, as -1, 0, 1.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    let r = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Square root modulo an odd prime (Tonelli-Shanks); `None` for non-residues.
pub fn sqrt_mod_prime(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Square root of `a` modulo a squarefree modulus `m`, via CRT over its primes.
pub fn sqrt_mod_squarefree(a: &BigInt, m: &BigInt) -> Result<Option<BigInt>> {
    let m_abs = m.abs();
    if m_abs.is_one() {
        return Ok(Some(BigInt::zero()));
    }
    let mut x = BigInt::zero();
    let mut modulus = BigInt::one();
    for (p, e) in factor(&m_abs)? {
        debug_assert_eq!(e, 1);
        let ap = a.mod_floor(&BigInt::from(p)).to_u64().unwrap();
        let r = match sqrt_mod_prime(ap, p) {
            Some(r) => BigInt::from(r),
            None => return Ok(None),
        };
        // combine x mod modulus with r mod p
        let pb = BigInt::from(p);
        let inv = mod_inverse(&modulus, &pb).expect("coprime moduli");
        let k = ((&r - &x) * inv).mod_floor(&pb);
        x += k * &modulus;
        modulus *= pb;
    }
    Ok(Some(x.mod_floor(&modulus)))
}

pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    let pb = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    while !n.is_zero() && n.is_multiple_of(&pb) {
        n /= &pb;
        v += 1;
    }
    v
}

/// Decides whether a nonzero rational is a square in the p-adic field.
pub fn is_padic_square(x: &BigRational, p: u64) -> bool {
    let n = x.numer() * x.denom();
    let v = valuation(&n, p);
    if v % 2 == 1 {
        return false;
    }
    let u = n / BigInt::from(p).pow(v);
    if p == 2 {
        u.mod_floor(&big(8)) == BigInt::one()
    } else {
        legendre(&u, p) == 1
    }
}

/// Odd primes plus 2 dividing numerators or denominators of the inputs.
pub fn relevant_primes(xs: &[&BigRational]) -> Result<Vec<u64>> {
    let mut ps = vec![2u64];
    for x in xs {
        for n in [x.numer(), x.denom()] {
            if n.is_zero() {
                continue;
            }
            for (p, _) in factor(n)? {
                ps.push(p);
            }
        }
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

pub fn sign_of(x: &BigRational) -> Sign {
    x.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_and_squarefree() {
        assert_eq!(factor_u64(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(factor_u64(1_000_000_007 * 3), vec![(3, 1), (1_000_000_007, 1)]);
        let (s, r) = squarefree_decompose(&big(-72)).unwrap();
        assert_eq!((s, r), (big(-2), big(6)));
        assert_eq!(square_class_rational(&rat(49, 4)).unwrap(), big(1));
        assert_eq!(square_class_rational(&rat(3, 8)).unwrap(), big(6));
    }

    #[test]
    fn factors_beyond_64_bits() {
        let p1 = BigInt::from(1_000_000_007u64);
        let p2 = BigInt::from(998_244_353u64);
        let p3 = BigInt::from(4_294_967_291u64);
        let n = &p1 * &p1 * &p2 * &p3 * 12;
        assert_eq!(
            factor(&n).unwrap(),
            vec![(2, 2), (3, 1), (998_244_353, 1), (1_000_000_007, 2), (4_294_967_291, 1)]
        );
        let huge_prime = BigInt::from(2).pow(89) - 1;
        assert!(matches!(factor(&huge_prime), Err(Error::Unsupported(_))));
    }

    #[test]
    fn residues() {
        assert_eq!(legendre(&big(-1), 7), -1);
        assert_eq!(legendre(&big(2), 7), 1);
        for p in [3u64, 5, 7, 13, 17, 41, 97] {
            for a in 1..p {
                if let Some(r) = sqrt_mod_prime(a, p) {
                    assert_eq!(r * r % p, a);
                } else {
                    assert_eq!(legendre(&big(a as i64), p), -1);
                }
            }
        }
        let r = sqrt_mod_squarefree(&big(2), &big(7 * 17)).unwrap().unwrap();
        let sq: BigInt = &r * &r - 2;
        assert_eq!(sq.mod_floor(&big(119)), BigInt::zero());
    }

    #[test]
    fn padic_squares() {
        assert!(is_padic_square(&rat(17, 1), 2));
        assert!(!is_padic_square(&rat(7, 1), 2));
        assert!(is_padic_square(&rat(-7, 1), 2));
        assert!(is_padic_square(&rat(2, 1), 7));
        assert!(!is_padic_square(&rat(7, 1), 7));
        assert!(is_padic_square(&rat(49, 9), 7));
    }
}
