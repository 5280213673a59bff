//! Exact scalars for the field tower: ℚ, 𝔽_p, rational function fields,
//! quadratic extensions and the Laurent view of ℚ((t)) (or 𝔽_p((t))).
//!
//! Elements are plain data ([`Elem`]); all arithmetic goes through the
//! owning [`Field`], e.g. `k.mul(&a, &b)`. Every element is kept in a
//! canonical form so structural equality is field equality.

pub mod format;
pub mod poly;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::error::{Error, Result};
use poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Elem {
    Q(BigRational),
    Fp(u64),
    Rf(Box<RatFn>),
    /// `x0 + x1·θ` where θ is the adjoined root.
    Quad(Box<(Elem, Elem)>),
}

/// Reduced fraction of polynomials with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    PrimeField(u64),
    RationalFunctions { base: Box<Field>, var: String },
    /// `base[x]/(x² − αx + β)`.
    QuadExt { base: Box<Field>, alpha: Elem, beta: Elem },
    /// ℚ((t)) or 𝔽_p((t)) seen through ℚ(t) resp. 𝔽_p(t).
    LaurentView { base: Box<Field> },
}

impl Elem {
    pub fn quad(x0: Elem, x1: Elem) -> Elem {
        Elem::Quad(Box::new((x0, x1)))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Elem::Q(q) => Some(q),
            _ => None,
        }
    }

    pub fn quad_parts(&self) -> Option<(&Elem, &Elem)> {
        match self {
            Elem::Quad(b) => Some((&b.0, &b.1)),
            _ => None,
        }
    }

    pub fn ratfn(&self) -> Option<&RatFn> {
        match self {
            Elem::Rf(r) => Some(r),
            _ => None,
        }
    }
}

impl Field {
    pub fn rationals() -> Field {
        Field::Rationals
    }

    pub fn prime_field(p: u64) -> Result<Field> {
        if !arith::is_prime_u64(p) || p > u32::MAX as u64 {
            return Err(Error::Precondition(format!("{p} is not a supported prime")));
        }
        Ok(Field::PrimeField(p))
    }

    pub fn rational_functions(base: Field, var: &str) -> Field {
        Field::RationalFunctions { base: Box::new(base), var: var.to_string() }
    }

    pub fn laurent(base: Field) -> Result<Field> {
        match base {
            Field::Rationals => {}
            Field::PrimeField(p) if p != 2 => {}
            _ => {
                return Err(Error::Precondition(
                    "Laurent view wraps only ℚ or 𝔽_p with p odd".into(),
                ))
            }
        }
        Ok(Field::LaurentView { base: Box::new(base) })
    }

    /// `base[x]/(x² − αx + β)`, rejecting reducible minimal polynomials.
    pub fn quad_ext(base: Field, alpha: Elem, beta: Elem) -> Result<Field> {
        let irreducible = if base.characteristic() == 2 {
            if base.is_zero(&alpha) {
                !base.is_square(&beta)?.0
            } else {
                // x = αy turns the minpoly into y² + y + β/α²
                let c = base.div(&beta, &base.mul(&alpha, &alpha))?;
                !base.is_artin_schreier(&c)?
            }
        } else {
            let disc = base.sub(
                &base.mul(&alpha, &alpha),
                &base.mul(&base.from_i64(4), &beta),
            );
            if base.is_zero(&disc) {
                false
            } else {
                !base.is_square(&disc)?.0
            }
        };
        if !irreducible {
            return Err(Error::Precondition("minimal polynomial is reducible".into()));
        }
        Ok(Field::QuadExt { base: Box::new(base), alpha, beta })
    }

    /// `base(√d)` presented as `base[x]/(x² − d)`.
    pub fn sqrt_ext(base: Field, d: &Elem) -> Result<Field> {
        let beta = base.neg(d);
        let alpha = base.zero();
        Field::quad_ext(base, alpha, beta)
    }

    pub fn base(&self) -> Option<&Field> {
        match self {
            Field::RationalFunctions { base, .. }
            | Field::QuadExt { base, .. }
            | Field::LaurentView { base } => Some(base),
            _ => None,
        }
    }

    /// Base field of a rational function representation (k(t) or the Laurent view).
    fn rf_base(&self) -> Option<&Field> {
        match self {
            Field::RationalFunctions { base, .. } | Field::LaurentView { base } => Some(base),
            _ => None,
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::PrimeField(p) => *p,
            Field::RationalFunctions { base, .. }
            | Field::QuadExt { base, .. }
            | Field::LaurentView { base } => base.characteristic(),
        }
    }

    pub fn is_laurent(&self) -> bool {
        matches!(self, Field::LaurentView { .. })
    }

    pub fn zero(&self) -> Elem {
        match self {
            Field::Rationals => Elem::Q(BigRational::zero()),
            Field::PrimeField(_) => Elem::Fp(0),
            Field::RationalFunctions { base, .. } | Field::LaurentView { base } => {
                Elem::Rf(Box::new(RatFn { num: Vec::new(), den: vec![base.one()] }))
            }
            Field::QuadExt { base, .. } => Elem::quad(base.zero(), base.zero()),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Elem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Elem {
        match self {
            Field::Rationals => Elem::Q(BigRational::from_integer(n.clone())),
            Field::PrimeField(p) => {
                let pb = BigInt::from(*p);
                Elem::Fp(num_integer::Integer::mod_floor(n, &pb).to_u64().unwrap())
            }
            Field::RationalFunctions { .. } | Field::LaurentView { .. } => {
                let b = self.rf_base().unwrap();
                self.embed_constant(&b.from_bigint(n))
            }
            Field::QuadExt { base, .. } => Elem::quad(base.from_bigint(n), base.zero()),
        }
    }

    /// Image of a rational number; fails in positive characteristic when the denominator vanishes.
    pub fn from_rational(&self, q: &BigRational) -> Result<Elem> {
        let n = self.from_bigint(q.numer());
        let d = self.from_bigint(q.denom());
        self.div(&n, &d)
    }

    pub fn from_ratio(&self, n: i64, d: i64) -> Elem {
        self.from_rational(&arith::rat(n, d)).expect("nonzero denominator")
    }

    /// Embeds an element of the base field (constant polynomial / first coordinate).
    pub fn embed_constant(&self, c: &Elem) -> Elem {
        match self {
            Field::RationalFunctions { base, .. } | Field::LaurentView { base } => {
                Elem::Rf(Box::new(RatFn { num: poly::constant(base, c.clone()), den: vec![base.one()] }))
            }
            Field::QuadExt { base, .. } => Elem::quad(c.clone(), base.zero()),
            _ => c.clone(),
        }
    }

    /// Embeds an element of any field below `self` in the tower.
    pub fn embed_from(&self, from: &Field, x: &Elem) -> Result<Elem> {
        if from == self {
            return Ok(x.clone());
        }
        match self.base() {
            Some(b) => {
                let y = b.embed_from(from, x)?;
                Ok(self.embed_constant(&y))
            }
            None => Err(Error::FieldMismatch),
        }
    }

    /// The variable `t` of k(t) or of the Laurent view.
    pub fn t(&self) -> Result<Elem> {
        let b = self
            .rf_base()
            .ok_or_else(|| Error::Unsupported("field has no transcendental generator".into()))?;
        Ok(Elem::Rf(Box::new(RatFn { num: vec![b.zero(), b.one()], den: vec![b.one()] })))
    }

    /// The adjoined root θ of a quadratic extension.
    pub fn theta(&self) -> Result<Elem> {
        match self {
            Field::QuadExt { base, .. } => Ok(Elem::quad(base.zero(), base.one())),
            _ => Err(Error::Unsupported("not a quadratic extension".into())),
        }
    }

    pub fn is_zero(&self, x: &Elem) -> bool {
        match x {
            Elem::Q(q) => q.is_zero(),
            Elem::Fp(v) => *v == 0,
            Elem::Rf(r) => r.num.is_empty(),
            Elem::Quad(b) => {
                let base = self.base().unwrap();
                base.is_zero(&b.0) && base.is_zero(&b.1)
            }
        }
    }

    pub fn is_one(&self, x: &Elem) -> bool {
        *x == self.one()
    }

    fn make_ratfn(&self, num: Poly, den: Poly) -> Elem {
        let k = self.rf_base().unwrap();
        if num.is_empty() {
            return self.zero();
        }
        let g = poly::gcd(k, &num, &den);
        let (mut n, mut d) = if poly::degree(&g).unwrap_or(0) > 0 {
            (poly::divrem(k, &num, &g).0, poly::divrem(k, &den, &g).0)
        } else {
            (num, den)
        };
        let c = k.inv(poly::lc(&d).unwrap()).unwrap();
        n = poly::scale(k, &n, &c);
        d = poly::scale(k, &d, &c);
        Elem::Rf(Box::new(RatFn { num: n, den: d }))
    }

    pub fn ratfn(&self, num: Poly, den: Poly) -> Result<Elem> {
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.make_ratfn(num, den))
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (Field::Rationals, Elem::Q(x), Elem::Q(y)) => Elem::Q(x + y),
            (Field::PrimeField(p), Elem::Fp(x), Elem::Fp(y)) => Elem::Fp((x + y) % p),
            (Field::QuadExt { base, .. }, Elem::Quad(x), Elem::Quad(y)) => {
                Elem::quad(base.add(&x.0, &y.0), base.add(&x.1, &y.1))
            }
            (_, Elem::Rf(x), Elem::Rf(y)) => {
                let k = self.rf_base().unwrap();
                if x.den == y.den {
                    let n = poly::add(k, &x.num, &y.num);
                    return self.make_ratfn(n, x.den.clone());
                }
                let n = poly::add(k, &poly::mul(k, &x.num, &y.den), &poly::mul(k, &y.num, &x.den));
                self.make_ratfn(n, poly::mul(k, &x.den, &y.den))
            }
            _ => panic!("element does not belong to field {self:?}: {a:?}, {b:?}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (self, a) {
            (Field::Rationals, Elem::Q(x)) => Elem::Q(-x),
            (Field::PrimeField(p), Elem::Fp(x)) => Elem::Fp((p - x) % p),
            (Field::QuadExt { base, .. }, Elem::Quad(x)) => Elem::quad(base.neg(&x.0), base.neg(&x.1)),
            (_, Elem::Rf(x)) => {
                let k = self.rf_base().unwrap();
                Elem::Rf(Box::new(RatFn { num: poly::neg(k, &x.num), den: x.den.clone() }))
            }
            _ => panic!("element does not belong to field {self:?}: {a:?}"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (Field::Rationals, Elem::Q(x), Elem::Q(y)) => Elem::Q(x * y),
            (Field::PrimeField(p), Elem::Fp(x), Elem::Fp(y)) => {
                Elem::Fp(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            (Field::QuadExt { base, alpha, beta }, Elem::Quad(x), Elem::Quad(y)) => {
                // θ² = αθ − β
                let a0b0 = base.mul(&x.0, &y.0);
                let a1b1 = base.mul(&x.1, &y.1);
                let c0 = base.sub(&a0b0, &base.mul(beta, &a1b1));
                let cross = base.add(&base.mul(&x.0, &y.1), &base.mul(&x.1, &y.0));
                let c1 = base.add(&cross, &base.mul(alpha, &a1b1));
                Elem::quad(c0, c1)
            }
            (_, Elem::Rf(x), Elem::Rf(y)) => {
                let k = self.rf_base().unwrap();
                if x.num.is_empty() || y.num.is_empty() {
                    return self.zero();
                }
                self.make_ratfn(poly::mul(k, &x.num, &y.num), poly::mul(k, &x.den, &y.den))
            }
            _ => panic!("element does not belong to field {self:?}: {a:?}, {b:?}"),
        }
    }

    pub fn square(&self, a: &Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn inv(&self, a: &Elem) -> Result<Elem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self, a) {
            (Field::Rationals, Elem::Q(x)) => Elem::Q(x.recip()),
            (Field::PrimeField(p), Elem::Fp(x)) => Elem::Fp(arith::pow_mod(*x, p - 2, *p)),
            (Field::QuadExt { base, .. }, Elem::Quad(_)) => {
                let n = self.norm(a)?;
                let ninv = base.inv(&n)?;
                let c = self.conj(a)?;
                self.mul(&c, &self.embed_constant(&ninv))
            }
            (_, Elem::Rf(x)) => self.make_ratfn(x.den.clone(), x.num.clone()),
            _ => panic!("element does not belong to field {self:?}: {a:?}"),
        })
    }

    pub fn div(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Elem, e: i64) -> Result<Elem> {
        let mut base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a Elem>) -> Elem {
        xs.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    // --- quadratic extensions ---------------------------------------------

    fn quad_data(&self) -> Result<(&Field, &Elem, &Elem)> {
        match self {
            Field::QuadExt { base, alpha, beta } => Ok((base, alpha, beta)),
            _ => Err(Error::Unsupported("not a quadratic extension".into())),
        }
    }

    /// Galois conjugate: θ ↦ α − θ.
    pub fn conj(&self, x: &Elem) -> Result<Elem> {
        let (base, alpha, _) = self.quad_data()?;
        let (x0, x1) = x.quad_parts().ok_or(Error::FieldMismatch)?;
        Ok(Elem::quad(base.add(x0, &base.mul(alpha, x1)), base.neg(x1)))
    }

    /// Norm `x·x̄ = x0² + α·x0·x1 + β·x1²` in the base field.
    pub fn norm(&self, x: &Elem) -> Result<Elem> {
        let (base, alpha, beta) = self.quad_data()?;
        let (x0, x1) = x.quad_parts().ok_or(Error::FieldMismatch)?;
        let a = base.mul(x0, x0);
        let b = base.mul(alpha, &base.mul(x0, x1));
        let c = base.mul(beta, &base.mul(x1, x1));
        Ok(base.add(&base.add(&a, &b), &c))
    }

    /// Trace `x + x̄ = 2·x0 + α·x1` in the base field.
    pub fn trace(&self, x: &Elem) -> Result<Elem> {
        let (base, alpha, _) = self.quad_data()?;
        let (x0, x1) = x.quad_parts().ok_or(Error::FieldMismatch)?;
        Ok(base.add(&base.add(x0, x0), &base.mul(alpha, x1)))
    }

    /// Norm, trace and conjugate in one call.
    pub fn quad_ext_ops(&self, x: &Elem) -> Result<(Elem, Elem, Elem)> {
        Ok((self.norm(x)?, self.trace(x)?, self.conj(x)?))
    }

    // --- squares ----------------------------------------------------------

    /// Exact square root inside the representation, `Ok(None)` if there is none.
    pub fn sqrt(&self, x: &Elem) -> Result<Option<Elem>> {
        if self.is_zero(x) {
            return Ok(Some(self.zero()));
        }
        match (self, x) {
            (Field::Rationals, Elem::Q(q)) => Ok(arith::sqrt_rational(q).map(Elem::Q)),
            (Field::PrimeField(p), Elem::Fp(v)) => Ok(arith::sqrt_mod_prime(*v, *p).map(Elem::Fp)),
            (_, Elem::Rf(r)) => {
                let k = self.rf_base().unwrap();
                let c = poly::lc(&r.num).unwrap();
                let Some(sc) = k.sqrt(c)? else { return Ok(None) };
                let cinv = k.inv(c)?;
                let monic_num = poly::scale(k, &r.num, &cinv);
                let Some(gn) = poly::sqrt(k, &monic_num) else { return Ok(None) };
                let Some(gd) = poly::sqrt(k, &r.den) else { return Ok(None) };
                let gn = poly::scale(k, &gn, &sc);
                Ok(Some(self.make_ratfn(gn, gd)))
            }
            (Field::QuadExt { base, alpha, beta }, Elem::Quad(_)) => {
                if base.characteristic() == 2 {
                    return Err(Error::Unsupported("square roots in characteristic-2 extensions".into()));
                }
                // write θ = (α + δ)/2 with δ² = D = α² − 4β; x = u + vδ
                let two = base.from_i64(2);
                let dsc = base.sub(&base.mul(alpha, alpha), &base.mul(&base.from_i64(4), beta));
                let (x0, x1) = x.quad_parts().unwrap();
                let v = base.div(x1, &two)?;
                let u = base.add(x0, &base.mul(alpha, &v));
                let n = base.sub(&base.mul(&u, &u), &base.mul(&dsc, &base.mul(&v, &v)));
                let Some(rn) = base.sqrt(&n)? else { return Ok(None) };
                for s in [rn.clone(), base.neg(&rn)] {
                    // (a + bδ)² = u + vδ  with a² = (u + s)/2
                    let a2 = base.div(&base.add(&u, &s), &two)?;
                    if base.is_zero(&a2) {
                        // then x = b²D, b² = u/D
                        let b2 = base.div(&u, &dsc)?;
                        if let Some(b) = base.sqrt(&b2)? {
                            return Ok(Some(self.from_delta_coords(&base.zero(), &b)?));
                        }
                        continue;
                    }
                    if let Some(a) = base.sqrt(&a2)? {
                        let b = base.div(&v, &base.mul(&two, &a))?;
                        let w = self.from_delta_coords(&a, &b)?;
                        if self.mul(&w, &w) == *x {
                            return Ok(Some(w));
                        }
                    }
                }
                Ok(None)
            }
            _ => panic!("element does not belong to field {self:?}: {x:?}"),
        }
    }

    /// `a + b·δ` with δ = 2θ − α, in θ-coordinates.
    fn from_delta_coords(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        let (base, alpha, _) = self.quad_data()?;
        let two_b = base.add(b, b);
        Ok(Elem::quad(base.sub(a, &base.mul(alpha, b)), two_b))
    }

    /// Square test with optional exact witness.
    ///
    /// For the Laurent view the decision is made in the completion (even
    /// t-valuation, square leading coefficient); a witness is returned only
    /// when the square root is itself a rational function.
    pub fn is_square(&self, x: &Elem) -> Result<(bool, Option<Elem>)> {
        if let Field::LaurentView { base } = self {
            if self.is_zero(x) {
                return Ok((true, Some(self.zero())));
            }
            let (v, lead) = self.t_adic_parts(x)?;
            let ok = v % 2 == 0 && base.sqrt(&lead)?.is_some();
            let w = if ok { self.sqrt(x)? } else { None };
            return Ok((ok, w));
        }
        let w = self.sqrt(x)?;
        Ok((w.is_some(), w))
    }

    /// t-adic valuation and leading coefficient of a nonzero element of the Laurent view.
    pub fn t_adic_parts(&self, x: &Elem) -> Result<(i64, Elem)> {
        let k = self
            .rf_base()
            .ok_or_else(|| Error::Unsupported("t-adic valuation needs a rational function field".into()))?;
        let r = x.ratfn().ok_or(Error::FieldMismatch)?;
        let (vn, cn) = poly::lowest_term(&r.num).ok_or(Error::DivisionByZero)?;
        let (vd, cd) = poly::lowest_term(&r.den).unwrap();
        Ok((vn as i64 - vd as i64, k.div(cn, cd)?))
    }

    /// Decides whether `c = y² + y` has a solution (characteristic 2).
    pub fn is_artin_schreier(&self, c: &Elem) -> Result<bool> {
        Ok(self.artin_schreier_root(c)?.is_some())
    }

    /// Solves `y² + y = c` in characteristic 2 over 𝔽₂ or 𝔽₂(t).
    pub fn artin_schreier_root(&self, c: &Elem) -> Result<Option<Elem>> {
        match self {
            Field::PrimeField(2) => Ok(match c {
                Elem::Fp(0) => Some(Elem::Fp(0)),
                _ => None,
            }),
            Field::RationalFunctions { base, .. } if **base == Field::PrimeField(2) => {
                // y = g/h in lowest terms forces the reduced denominator of c to be h².
                let r = c.ratfn().ok_or(Error::FieldMismatch)?;
                let Some(h) = poly::sqrt(base, &r.den) else { return Ok(None) };
                let dh = poly::degree(&h).unwrap_or(0);
                let dn = poly::degree(&r.num).unwrap_or(0);
                let bound = dh.max(dn / 2);
                if bound > 20 {
                    return Err(Error::Budget("Artin-Schreier search degree above 20".into()));
                }
                // g(g + h) = num
                for bits in 0u64..(1u64 << (bound + 1)) {
                    let g: Poly = {
                        let mut g: Poly = (0..=bound).map(|i| Elem::Fp((bits >> i) & 1)).collect();
                        poly::trim(base, &mut g);
                        g
                    };
                    let lhs = poly::mul(base, &g, &poly::add(base, &g, &h));
                    if lhs == r.num {
                        return Ok(Some(self.make_ratfn(g, h.clone())));
                    }
                }
                Ok(None)
            }
            _ => Err(Error::Unsupported("Artin-Schreier test outside 𝔽₂ and 𝔽₂(t)".into())),
        }
    }

    pub fn rational_value(&self, x: &Elem) -> Option<BigRational> {
        match (self, x) {
            (Field::Rationals, Elem::Q(q)) => Some(q.clone()),
            _ => None,
        }
    }

    /// Constant term of a rational function that is constant, e.g. `3` in ℚ(t).
    pub fn as_constant(&self, x: &Elem) -> Option<Elem> {
        let r = x.ratfn()?;
        let k = self.rf_base()?;
        if r.num.len() <= 1 && r.den.len() == 1 {
            Some(r.num.first().cloned().unwrap_or_else(|| k.zero()))
        } else {
            None
        }
    }

    /// Sign of a rational element, used for orderings at the real place.
    pub fn rational_sign(&self, x: &Elem) -> Option<i32> {
        self.rational_value(x).map(|q| if q.is_positive() { 1 } else if q.is_negative() { -1 } else { 0 })
    }

    pub fn is_integer_one(q: &BigRational) -> bool {
        q.is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Elem {
        Elem::Q(arith::rat(n, d))
    }

    #[test]
    fn rational_squares() {
        let k = Field::rationals();
        assert_eq!(k.sqrt(&q(49, 4)).unwrap(), Some(q(7, 2)));
        assert_eq!(k.sqrt(&q(2, 1)).unwrap(), None);
        assert_eq!(k.is_square(&k.zero()).unwrap(), (true, Some(k.zero())));
    }

    #[test]
    fn ratfn_square_and_canonical_form() {
        let k = Field::rational_functions(Field::rationals(), "t");
        let t = k.t().unwrap();
        let x = k.mul(&k.mul(&t, &t), &k.from_ratio(1, 9));
        let w = k.sqrt(&x).unwrap().unwrap();
        assert!(w == k.mul(&t, &k.from_ratio(1, 3)) || w == k.neg(&k.mul(&t, &k.from_ratio(1, 3))));
        // (t² − 1)/(t − 1) reduces to t + 1
        let tm1 = k.sub(&t, &k.one());
        let a = k.div(&k.sub(&k.mul(&t, &t), &k.one()), &tm1).unwrap();
        assert_eq!(a, k.add(&t, &k.one()));
        assert!(k.sqrt(&t).unwrap().is_none());
    }

    #[test]
    fn quad_ext_norm_trace() {
        let k = Field::rationals();
        let gi = Field::sqrt_ext(k.clone(), &q(-1, 1)).unwrap();
        let x = Elem::quad(q(2, 1), q(1, 1));
        let (n, t, c) = gi.quad_ext_ops(&x).unwrap();
        assert_eq!((n, t), (q(5, 1), q(4, 1)));
        assert_eq!(c, Elem::quad(q(2, 1), q(-1, 1)));
        let e = Field::sqrt_ext(k.clone(), &q(2, 1)).unwrap();
        let y = Elem::quad(q(2, 1), q(1, 1));
        assert_eq!(e.norm(&y).unwrap(), q(2, 1));
        assert_eq!(e.trace(&y).unwrap(), q(4, 1));
        assert!(Field::sqrt_ext(k, &q(4, 1)).is_err());
    }

    #[test]
    fn char2_artin_schreier_extension() {
        let f2 = Field::prime_field(2).unwrap();
        let k = Field::rational_functions(f2, "t");
        let t = k.t().unwrap();
        let e = Field::quad_ext(k.clone(), k.one(), t.clone()).unwrap();
        let x = e.theta().unwrap();
        assert_eq!(e.norm(&x).unwrap(), t);
        assert_eq!(e.trace(&x).unwrap(), k.one());
        // y² + y = t² + t is solvable
        let c = k.add(&k.mul(&t, &t), &t);
        assert!(k.is_artin_schreier(&c).unwrap());
        assert!(Field::quad_ext(k.clone(), k.one(), c).is_err());
        // inseparable K(√t)
        assert!(Field::quad_ext(k.clone(), k.zero(), t.clone()).is_ok());
        assert!(Field::quad_ext(k.clone(), k.zero(), k.mul(&t, &t)).is_err());
    }

    #[test]
    fn quad_ext_square_roots() {
        let k = Field::rationals();
        let e = Field::sqrt_ext(k, &q(2, 1)).unwrap();
        let x = Elem::quad(q(3, 1), q(2, 1)); // (1 + √2)²
        let w = e.sqrt(&x).unwrap().unwrap();
        assert_eq!(e.mul(&w, &w), x);
        assert!(e.sqrt(&e.theta().unwrap()).unwrap().is_none());
        assert!(e.sqrt(&e.from_i64(2)).unwrap().is_some());
    }

    #[test]
    fn laurent_squares() {
        let k = Field::laurent(Field::rationals()).unwrap();
        let t = k.t().unwrap();
        // 1 + t is a square in ℚ((t)) but not in ℚ(t)
        let x = k.add(&k.one(), &t);
        assert_eq!(k.is_square(&x).unwrap(), (true, None));
        assert!(!k.is_square(&t).unwrap().0);
        assert!(!k.is_square(&k.from_i64(-1)).unwrap().0);
        let (v, lead) = k.t_adic_parts(&k.mul(&t, &k.from_i64(7))).unwrap();
        assert_eq!((v, lead), (1, q(7, 1)));
        assert!(Field::laurent(Field::PrimeField(2)).is_err());
    }
}
