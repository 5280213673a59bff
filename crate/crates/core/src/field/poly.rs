//! Dense univariate polynomials over a [`Field`], little-endian coefficient vectors.

use super::{Elem, Field};

pub type Poly = Vec<Elem>;

pub fn trim(k: &Field, p: &mut Poly) {
    while p.last().is_some_and(|c| k.is_zero(c)) {
        p.pop();
    }
}

pub fn constant(k: &Field, c: Elem) -> Poly {
    let mut p = vec![c];
    trim(k, &mut p);
    p
}

pub fn degree(p: &Poly) -> Option<usize> {
    p.len().checked_sub(1)
}

pub fn lc<'a>(p: &'a Poly) -> Option<&'a Elem> {
    p.last()
}

pub fn add(k: &Field, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        out.push(match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => k.add(x, y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => unreachable!(),
        });
    }
    trim(k, &mut out);
    out
}

pub fn neg(k: &Field, a: &Poly) -> Poly {
    a.iter().map(|c| k.neg(c)).collect()
}

pub fn sub(k: &Field, a: &Poly, b: &Poly) -> Poly {
    add(k, a, &neg(k, b))
}

pub fn scale(k: &Field, a: &Poly, c: &Elem) -> Poly {
    let mut out: Poly = a.iter().map(|x| k.mul(x, c)).collect();
    trim(k, &mut out);
    out
}

pub fn mul(k: &Field, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = k.mul(x, y);
            out[i + j] = k.add(&out[i + j], &t);
        }
    }
    trim(k, &mut out);
    out
}

/// Euclidean division; panics on a zero divisor.
pub fn divrem(k: &Field, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = degree(b).expect("polynomial division by zero");
    let inv = k.inv(lc(b).unwrap()).expect("nonzero leading coefficient");
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![k.zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = k.mul(lc(&r).unwrap(), &inv);
        let shift = dr - db;
        for (i, y) in b.iter().enumerate() {
            let t = k.mul(&c, y);
            r[i + shift] = k.sub(&r[i + shift], &t);
        }
        q[shift] = c;
        r.pop();
        trim(k, &mut r);
    }
    trim(k, &mut q);
    (q, r)
}

pub fn monic(k: &Field, a: &Poly) -> Poly {
    match lc(a) {
        None => Vec::new(),
        Some(c) => {
            let inv = k.inv(c).unwrap();
            scale(k, a, &inv)
        }
    }
}

/// Monic greatest common divisor (zero if both inputs vanish).
pub fn gcd(k: &Field, a: &Poly, b: &Poly) -> Poly {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let (_, r) = divrem(k, &x, &y);
        x = y;
        y = r;
    }
    monic(k, &x)
}

pub fn eval(k: &Field, p: &Poly, x: &Elem) -> Elem {
    let mut acc = k.zero();
    for c in p.iter().rev() {
        acc = k.add(&k.mul(&acc, x), c);
    }
    acc
}

pub fn derivative(k: &Field, p: &Poly) -> Poly {
    let mut out: Poly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| k.mul(&k.from_i64(i as i64), c))
        .collect();
    trim(k, &mut out);
    out
}

/// Index and value of the lowest nonzero coefficient.
pub fn lowest_term(p: &Poly) -> Option<(usize, &Elem)> {
    p.iter().enumerate().find(|(_, c)| !is_plain_zero(c))
}

fn is_plain_zero(c: &Elem) -> bool {
    match c {
        Elem::Q(q) => num_traits::Zero::is_zero(q),
        Elem::Fp(v) => *v == 0,
        Elem::Rf(r) => r.num.is_empty(),
        Elem::Quad(b) => is_plain_zero(&b.0) && is_plain_zero(&b.1),
    }
}

/// Exact square root of a polynomial, if it is a square in `k[x]`.
pub fn sqrt(k: &Field, p: &Poly) -> Option<Poly> {
    let Some(d) = degree(p) else {
        return Some(Vec::new());
    };
    if d % 2 == 1 {
        return None;
    }
    let m = d / 2;
    if k.characteristic() == 2 {
        let mut g = Vec::with_capacity(m + 1);
        for (i, c) in p.iter().enumerate() {
            if i % 2 == 1 {
                if !k.is_zero(c) {
                    return None;
                }
            } else {
                g.push(k.sqrt(c).ok().flatten()?);
            }
        }
        return Some(g);
    }
    let top = k.sqrt(lc(p).unwrap()).ok().flatten()?;
    let two_top_inv = k.inv(&k.mul(&k.from_i64(2), &top)).ok()?;
    let mut g = vec![k.zero(); m + 1];
    g[m] = top;
    for j in (0..m).rev() {
        let mut s = p[m + j].clone();
        for i in (j + 1)..m {
            let t = k.mul(&g[i], &g[m + j - i]);
            s = k.sub(&s, &t);
        }
        g[j] = k.mul(&s, &two_top_inv);
    }
    (mul(k, &g, &g) == *p).then_some(g)
}

/// Square-free decomposition `p = lc * prod f_i^i` for monic `p` (char 0 or large char).
pub fn squarefree_factors(k: &Field, p: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    let p = monic(k, p);
    if degree(&p).unwrap_or(0) == 0 {
        return out;
    }
    let dp = derivative(k, &p);
    if dp.is_empty() {
        // p = g(x^c) with c = characteristic; over a perfect prime field g^(1/c) is obtained coefficientwise
        let c = k.characteristic() as usize;
        let root: Poly = p.iter().step_by(c).cloned().collect();
        for (f, e) in squarefree_factors(k, &root) {
            out.push((f, e * c));
        }
        return out;
    }
    let mut a = gcd(k, &p, &dp);
    let mut b = divrem(k, &p, &a).0;
    let mut i = 1;
    while degree(&b).unwrap_or(0) > 0 {
        let g = gcd(k, &a, &b);
        let f = divrem(k, &b, &g).0;
        if degree(&f).unwrap_or(0) > 0 {
            out.push((monic(k, &f), i));
        }
        a = divrem(k, &a, &g).0;
        b = g;
        i += 1;
    }
    if degree(&a).unwrap_or(0) > 0 {
        // leftover inseparable part in positive characteristic
        for (f, e) in squarefree_factors(k, &a) {
            out.push((f, e));
        }
    }
    out
}
