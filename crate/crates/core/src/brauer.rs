//! Hilbert symbols, square classes and 2-torsion Brauer classes.
//!
//! Over ℚ a class is the (even) set of places where it is nontrivial. Over
//! the Laurent view k((t)) a class is a pair (unramified class over k,
//! residue square class) with respect to the uniformizer t, so that
//! `(u·tⁱ, w·tʲ) = (u, w) + (uʲ·wⁱ·(−1)^{ij}, t)`. Over 𝔽_p every class is trivial.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::arith;
use crate::error::{Error, Result};
use crate::field::{poly, Elem, Field};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Prime(u64),
    Infinity,
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Prime(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

impl Place {
    pub fn parse(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Place::Infinity),
            t => {
                let p: u64 = t.parse().map_err(|_| Error::Parse(format!("bad place {s:?}")))?;
                if !arith::is_prime_u64(p) {
                    return Err(Error::Parse(format!("{p} is not prime")));
                }
                Ok(Place::Prime(p))
            }
        }
    }
}

/// Hilbert symbol (a, b)_v over ℚ.
pub fn hilbert_symbol_q(a: &BigRational, b: &BigRational, place: Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Precondition("Hilbert symbol of zero".into()));
    }
    let p = match place {
        Place::Infinity => return Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Prime(p) => p,
    };
    // reduce to integers in the same square classes
    let ai = a.numer() * a.denom();
    let bi = b.numer() * b.denom();
    let alpha = arith::valuation(&ai, p);
    let beta = arith::valuation(&bi, p);
    let pb = num_bigint::BigInt::from(p);
    let u = &ai / pb.pow(alpha);
    let v = &bi / pb.pow(beta);
    if p == 2 {
        let eps = |x: &num_bigint::BigInt| -> u32 {
            let r = num_integer::Integer::mod_floor(x, &arith::big(4));
            if r == arith::big(3) { 1 } else { 0 }
        };
        let omega = |x: &num_bigint::BigInt| -> u32 {
            let r = num_integer::Integer::mod_floor(x, &arith::big(8));
            if r == arith::big(3) || r == arith::big(5) { 1 } else { 0 }
        };
        let e = eps(&u) * eps(&v) + alpha * omega(&v) + beta * omega(&u);
        return Ok(if e % 2 == 0 { 1 } else { -1 });
    }
    let mut s = 1i32;
    if (alpha * beta) % 2 == 1 && p % 4 == 3 {
        s = -s;
    }
    if beta % 2 == 1 {
        s *= arith::legendre(&u, p);
    }
    if alpha % 2 == 1 {
        s *= arith::legendre(&v, p);
    }
    Ok(s)
}

/// Hilbert symbol for a field in the tower; only ℚ has places in this sense.
pub fn hilbert_symbol(k: &Field, a: &Elem, b: &Elem, place: Place) -> Result<i32> {
    match k {
        Field::Rationals => hilbert_symbol_q(a.as_rational().unwrap(), b.as_rational().unwrap(), place),
        _ => Err(Error::Unsupported(format!(
            "Hilbert symbols at places are implemented over ℚ only (use quaternion_class over {k:?})"
        ))),
    }
}

/// A square class, stored through its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareClass {
    pub rep: Elem,
}

impl Field {
    /// Canonical representative of the square class of a nonzero element:
    /// squarefree integers over ℚ; 1 or the least non-residue over 𝔽_p;
    /// unit class times monic squarefree polynomial over k(t);
    /// unit class times t^{0|1} over the Laurent view.
    pub fn square_class_rep(&self, x: &Elem) -> Result<Elem> {
        if self.is_zero(x) {
            return Err(Error::Precondition("square class of zero".into()));
        }
        match self {
            Field::Rationals => Ok(Elem::Q(BigRational::from_integer(arith::square_class_rational(
                x.as_rational().unwrap(),
            )?))),
            Field::PrimeField(p) => {
                if *p == 2 || self.sqrt(x)?.is_some() {
                    Ok(self.one())
                } else {
                    let mut n = 2;
                    while self.sqrt(&self.from_i64(n))?.is_some() {
                        n += 1;
                    }
                    Ok(self.from_i64(n))
                }
            }
            Field::LaurentView { base } => {
                let (v, lead) = self.t_adic_parts(x)?;
                let u = self.embed_constant(&base.square_class_rep(&lead)?);
                Ok(if v.rem_euclid(2) == 1 { self.mul(&u, &self.t()?) } else { u })
            }
            Field::RationalFunctions { base, .. } if base.characteristic() != 2 => {
                let r = x.ratfn().unwrap();
                let c = poly::lc(&r.num).unwrap();
                let unit = base.square_class_rep(c)?;
                let prod = poly::mul(base, &r.num, &r.den);
                let mut f = vec![base.one()];
                for (g, e) in poly::squarefree_factors(base, &prod) {
                    if e % 2 == 1 {
                        f = poly::mul(base, &f, &g);
                    }
                }
                self.ratfn(poly::scale(base, &f, &unit), vec![base.one()])
            }
            _ => Err(Error::Unsupported(format!("square classes over {self:?}"))),
        }
    }

    pub fn square_class(&self, x: &Elem) -> Result<SquareClass> {
        Ok(SquareClass { rep: self.square_class_rep(x)? })
    }

    /// Whether `a` and `b` lie in the same square class.
    pub fn same_square_class(&self, a: &Elem, b: &Elem) -> Result<bool> {
        Ok(self.is_square(&self.mul(a, b))?.0)
    }
}

/// 2-torsion Brauer class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BrauerClass2 {
    /// Over ℚ: places where the class is nontrivial (always an even number).
    Places(BTreeSet<Place>),
    /// Over k((t)): unramified part over k and residue square class in k.
    Laurent { unramified: Box<BrauerClass2>, residue: Elem, base: Field },
    /// Over 𝔽_p, where the 2-torsion of the Brauer group vanishes.
    Zero,
}

impl BrauerClass2 {
    pub fn trivial_for(k: &Field) -> Result<BrauerClass2> {
        match k {
            Field::Rationals => Ok(BrauerClass2::Places(BTreeSet::new())),
            Field::PrimeField(_) => Ok(BrauerClass2::Zero),
            Field::LaurentView { base } => Ok(BrauerClass2::Laurent {
                unramified: Box::new(BrauerClass2::trivial_for(base)?),
                residue: base.one(),
                base: (**base).clone(),
            }),
            _ => Err(Error::Unsupported(format!("Brauer classes over {k:?}"))),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            BrauerClass2::Places(s) => s.is_empty(),
            BrauerClass2::Zero => true,
            BrauerClass2::Laurent { unramified, residue, base } => {
                unramified.is_trivial() && base.is_one(residue)
            }
        }
    }

    pub fn add(&self, other: &BrauerClass2) -> Result<BrauerClass2> {
        match (self, other) {
            (BrauerClass2::Places(a), BrauerClass2::Places(b)) => {
                Ok(BrauerClass2::Places(a.symmetric_difference(b).copied().collect()))
            }
            (BrauerClass2::Zero, BrauerClass2::Zero) => Ok(BrauerClass2::Zero),
            (
                BrauerClass2::Laurent { unramified: u1, residue: r1, base },
                BrauerClass2::Laurent { unramified: u2, residue: r2, .. },
            ) => Ok(BrauerClass2::Laurent {
                unramified: Box::new(u1.add(u2)?),
                residue: base.square_class_rep(&base.mul(r1, r2))?,
                base: base.clone(),
            }),
            _ => Err(Error::FieldMismatch),
        }
    }

    /// Index of the class: 1 when trivial, 2 when it is a quaternion division
    /// class, 4 for the biquaternion classes that occur over k((t)).
    pub fn index(&self) -> Result<u32> {
        if self.is_trivial() {
            return Ok(1);
        }
        match self {
            BrauerClass2::Places(_) | BrauerClass2::Zero => Ok(2),
            BrauerClass2::Laurent { unramified, residue, base } => {
                if base.is_one(residue) || unramified.is_trivial() {
                    return Ok(2);
                }
                // A + (r, t) has index 2 iff A is split by k(√r)
                Ok(if splits_over_quadratic(unramified, base, residue)? { 2 } else { 4 })
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            BrauerClass2::Places(s) => json!({"places": s.iter().map(|p| p.to_string()).collect::<Vec<_>>()}),
            BrauerClass2::Zero => json!({"places": []}),
            BrauerClass2::Laurent { unramified, residue, base } => {
                json!({"unramified": unramified.to_json(), "residue": base.format(residue)})
            }
        }
    }

    pub fn from_json(k: &Field, v: &Value) -> Result<BrauerClass2> {
        match k {
            Field::Rationals => {
                let arr = v["places"].as_array().ok_or_else(|| Error::Parse("expected places".into()))?;
                let mut s = BTreeSet::new();
                for p in arr {
                    let txt = match p {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    s.insert(Place::parse(&txt)?);
                }
                Ok(BrauerClass2::Places(s))
            }
            Field::PrimeField(_) => Ok(BrauerClass2::Zero),
            Field::LaurentView { base } => {
                let unramified = BrauerClass2::from_json(base, &v["unramified"])?;
                let r = base.parse(v["residue"].as_str().ok_or_else(|| Error::Parse("expected residue".into()))?)?;
                Ok(BrauerClass2::Laurent {
                    unramified: Box::new(unramified),
                    residue: base.square_class_rep(&r)?,
                    base: (**base).clone(),
                })
            }
            _ => Err(Error::Unsupported(format!("Brauer classes over {k:?}"))),
        }
    }
}

/// Whether the quadratic extension k(√r) splits the class (k = ℚ or 𝔽_p).
pub fn splits_over_quadratic(class: &BrauerClass2, k: &Field, r: &Elem) -> Result<bool> {
    match class {
        BrauerClass2::Zero => Ok(true),
        BrauerClass2::Places(s) => {
            let rq = r.as_rational().ok_or(Error::FieldMismatch)?;
            for place in s {
                let local_square = match place {
                    Place::Infinity => rq.is_positive(),
                    Place::Prime(p) => arith::is_padic_square(rq, *p),
                };
                if local_square {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        BrauerClass2::Laurent { .. } => {
            let _ = k;
            Err(Error::Unsupported("splitting test over the Laurent view".into()))
        }
    }
}

/// Brauer class of the quaternion algebra (a, b).
pub fn quaternion_class(k: &Field, a: &Elem, b: &Elem) -> Result<BrauerClass2> {
    if k.is_zero(a) || k.is_zero(b) {
        return Err(Error::Precondition("quaternion algebra with zero parameter".into()));
    }
    match k {
        Field::Rationals => {
            let (aq, bq) = (a.as_rational().unwrap(), b.as_rational().unwrap());
            let mut s = BTreeSet::new();
            if hilbert_symbol_q(aq, bq, Place::Infinity)? == -1 {
                s.insert(Place::Infinity);
            }
            for p in arith::relevant_primes(&[aq, bq])? {
                if hilbert_symbol_q(aq, bq, Place::Prime(p))? == -1 {
                    s.insert(Place::Prime(p));
                }
            }
            Ok(BrauerClass2::Places(s))
        }
        Field::PrimeField(_) => Ok(BrauerClass2::Zero),
        Field::LaurentView { base } => {
            let (i, u) = k.t_adic_parts(a)?;
            let (j, w) = k.t_adic_parts(b)?;
            let unramified = quaternion_class(base, &u, &w)?;
            let mut r = base.one();
            if j.rem_euclid(2) == 1 {
                r = base.mul(&r, &u);
            }
            if i.rem_euclid(2) == 1 {
                r = base.mul(&r, &w);
            }
            if (i * j).rem_euclid(2) == 1 {
                r = base.neg(&r);
            }
            Ok(BrauerClass2::Laurent {
                unramified: Box::new(unramified),
                residue: base.square_class_rep(&r)?,
                base: (**base).clone(),
            })
        }
        _ => Err(Error::Unsupported(format!("Brauer classes over {k:?}"))),
    }
}

/// Whether the quaternion algebra (a, b) is split.
pub fn quaternion_is_split(k: &Field, a: &Elem, b: &Elem) -> Result<bool> {
    Ok(quaternion_class(k, a, b)?.is_trivial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn named_symbols() {
        assert_eq!(hilbert_symbol_q(&rat(-1, 1), &rat(-1, 1), Place::Infinity).unwrap(), -1);
        assert_eq!(hilbert_symbol_q(&rat(7, 1), &rat(7, 1), Place::Prime(7)).unwrap(), -1);
        for place in [Place::Infinity, Place::Prime(2), Place::Prime(3), Place::Prime(5)] {
            assert_eq!(hilbert_symbol_q(&rat(1, 1), &rat(-15, 4), place).unwrap(), 1);
        }
        assert_eq!(hilbert_symbol_q(&rat(-1, 1), &rat(-1, 1), Place::Prime(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol_q(&rat(2, 1), &rat(3, 1), Place::Prime(3)).unwrap(), -1);
    }

    #[test]
    fn quaternion_classes() {
        let q = Field::rationals();
        let c = quaternion_class(&q, &q.from_i64(-1), &q.from_i64(7)).unwrap();
        assert_eq!(c, BrauerClass2::Places([Place::Prime(2), Place::Prime(7)].into_iter().collect()));
        assert_eq!(c.index().unwrap(), 2);
        let c2 = quaternion_class(&q, &q.from_i64(-1), &q.from_i64(-1)).unwrap();
        assert_eq!(c2, BrauerClass2::Places([Place::Prime(2), Place::Infinity].into_iter().collect()));
        assert!(c.add(&c).unwrap().is_trivial());
    }

    #[test]
    fn laurent_classes() {
        let l = Field::laurent(Field::rationals()).unwrap();
        let t = l.t().unwrap();
        // (−1, 7t) = (−1, 7) + (−1, t)
        let c = quaternion_class(&l, &l.from_i64(-1), &l.mul(&l.from_i64(7), &t)).unwrap();
        match &c {
            BrauerClass2::Laurent { unramified, residue, .. } => {
                assert_eq!(unramified.as_ref(), &quaternion_class(&Field::Rationals, &Elem::Q(rat(-1, 1)), &Elem::Q(rat(7, 1))).unwrap());
                assert_eq!(residue, &Elem::Q(rat(-1, 1)));
            }
            _ => panic!(),
        }
        // (−1,7) is split by ℚ(i), so the sum has index 2
        assert_eq!(c.index().unwrap(), 2);
        // (t, t) = (t, −1)
        let tt = quaternion_class(&l, &t, &t).unwrap();
        let tm = quaternion_class(&l, &t, &l.from_i64(-1)).unwrap();
        assert_eq!(tt, tm);
        // (2,3) ramifies at {2,3}; 17 is a square in ℚ_2, so ℚ(√17) cannot split it
        let a = quaternion_class(&l, &l.from_i64(2), &l.from_i64(3)).unwrap();
        let b = quaternion_class(&l, &l.from_i64(17), &t).unwrap();
        let split = quaternion_class(&l, &l.from_i64(5), &t).unwrap();
        assert_eq!(a.add(&split).unwrap().index().unwrap(), 2);
        let s = a.add(&b).unwrap();
        assert_eq!(s.index().unwrap(), 4);
    }

    #[test]
    fn square_classes() {
        let q = Field::rationals();
        assert_eq!(q.square_class_rep(&q.from_ratio(-12, 7)).unwrap(), q.from_i64(-21));
        let f7 = Field::PrimeField(7);
        assert_eq!(f7.square_class_rep(&f7.from_i64(2)).unwrap(), f7.one());
        assert_eq!(f7.square_class_rep(&f7.from_i64(5)).unwrap(), f7.from_i64(3));
        let l = Field::laurent(Field::rationals()).unwrap();
        let x = l.parse("([0,0,0,12,1])/([1])").unwrap(); // 12t³ + t⁴
        assert_eq!(l.square_class_rep(&x).unwrap(), l.parse("3*t").unwrap());
        let qt = Field::rational_functions(Field::rationals(), "t");
        let y = qt.parse("([0,0,-2])/([1,2,1])").unwrap(); // −2t²/(t+1)²
        assert_eq!(qt.square_class_rep(&y).unwrap(), qt.from_i64(-2));
    }
}
