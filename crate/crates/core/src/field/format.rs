//! Text encodings of field elements and JSON encodings of field descriptors.
//!
//! Elements: `"p/q"` or `"p"` over ℚ, `"k"` over 𝔽_p, `"([c0,c1,..])/([d0,..])"`
//! over k(t) and the Laurent view, `"[x0,x1]"` over quadratic extensions.
//! Parsing additionally accepts base-field constants and monomials such as
//! `"t"`, `"-7*t"` or `"2*t^3"` wherever a rational function is expected.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use super::{Elem, Field};
use crate::error::{Error, Result};

impl Field {
    pub fn format(&self, x: &Elem) -> String {
        match (self, x) {
            (Field::Rationals, Elem::Q(q)) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            (Field::PrimeField(_), Elem::Fp(v)) => v.to_string(),
            (Field::QuadExt { base, .. }, Elem::Quad(b)) => {
                format!("[{},{}]", base.format(&b.0), base.format(&b.1))
            }
            (_, Elem::Rf(r)) => {
                let k = self.base().unwrap();
                let list = |p: &Vec<Elem>| p.iter().map(|c| k.format(c)).collect::<Vec<_>>().join(",");
                format!("([{}])/([{}])", list(&r.num), list(&r.den))
            }
            _ => format!("{x:?}"),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Elem> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let e = p.elem(self)?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::Parse(format!("trailing input in {s:?}")));
        }
        Ok(e)
    }

    pub fn descriptor_json(&self) -> Value {
        match self {
            Field::Rationals => json!({"kind": "Rationals", "params": null}),
            Field::PrimeField(p) => json!({"kind": "PrimeField", "params": {"p": p}}),
            Field::RationalFunctions { base, var } => json!({
                "kind": "RationalFunctions",
                "params": {"base": base.descriptor_json(), "var": var}
            }),
            Field::QuadExt { base, alpha, beta } => json!({
                "kind": "QuadExt",
                "params": {"base": base.descriptor_json(), "alpha": base.format(alpha), "beta": base.format(beta)}
            }),
            Field::LaurentView { base } => json!({
                "kind": "LaurentView",
                "params": {"base": base.descriptor_json()}
            }),
        }
    }

    pub fn from_descriptor_json(v: &Value) -> Result<Field> {
        if let Some(s) = v.as_str() {
            return Field::from_shorthand(s);
        }
        let kind = v["kind"].as_str().ok_or_else(|| Error::Parse("field descriptor needs \"kind\"".into()))?;
        let params = &v["params"];
        match kind {
            "Rationals" => Ok(Field::Rationals),
            "PrimeField" => {
                let p = params["p"].as_u64().ok_or_else(|| Error::Parse("PrimeField needs params.p".into()))?;
                Field::prime_field(p)
            }
            "RationalFunctions" => {
                let base = Field::from_descriptor_json(&params["base"])?;
                let var = params["var"].as_str().unwrap_or("t");
                Ok(Field::rational_functions(base, var))
            }
            "QuadExt" => {
                let base = Field::from_descriptor_json(&params["base"])?;
                let alpha = base.parse(params["alpha"].as_str().ok_or_else(|| Error::Parse("QuadExt needs alpha".into()))?)?;
                let beta = base.parse(params["beta"].as_str().ok_or_else(|| Error::Parse("QuadExt needs beta".into()))?)?;
                Field::quad_ext(base, alpha, beta)
            }
            "LaurentView" => Field::laurent(Field::from_descriptor_json(&params["base"])?),
            other => Err(Error::Parse(format!("unknown field kind {other:?}"))),
        }
    }

    /// Short names: `Q`, `F7`, `Q(t)`, `F2(t)`, `Q((t))`, `F5((t))`.
    pub fn from_shorthand(s: &str) -> Result<Field> {
        let s = s.trim();
        let base_of = |b: &str| -> Result<Field> {
            match b {
                "Q" => Ok(Field::Rationals),
                _ if b.starts_with('F') => {
                    let p = b[1..].parse::<u64>().map_err(|_| Error::Parse(format!("bad field {s:?}")))?;
                    Field::prime_field(p)
                }
                _ => Err(Error::Parse(format!("bad field {s:?}"))),
            }
        };
        if let Some(b) = s.strip_suffix("((t))") {
            return Field::laurent(base_of(b)?);
        }
        if let Some(b) = s.strip_suffix("(t)") {
            return Ok(Field::rational_functions(base_of(b)?, "t"));
        }
        base_of(s)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!(
                "expected {:?} at offset {} in {:?}",
                c as char,
                self.pos,
                String::from_utf8_lossy(self.s)
            )))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.s.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        txt.trim_start_matches('+')
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("expected integer, found {txt:?}")))
    }

    fn rational(&mut self) -> Result<BigRational> {
        let n = self.integer()?;
        if self.peek() == Some(b'/') && self.s.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit() || *c == b'-') {
            self.pos += 1;
            let d = self.integer()?;
            if d == BigInt::from(0) {
                return Err(Error::Parse("zero denominator".into()));
            }
            return Ok(BigRational::new(n, d));
        }
        Ok(BigRational::from_integer(n))
    }

    fn list(&mut self, k: &Field) -> Result<Vec<Elem>> {
        self.expect(b'[')?;
        let mut out = Vec::new();
        if self.peek() == Some(b']') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.elem(k)?);
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(Error::Parse("malformed coefficient list".into())),
            }
        }
    }

    fn elem(&mut self, k: &Field) -> Result<Elem> {
        match k {
            Field::Rationals => Ok(Elem::Q(self.rational()?)),
            Field::PrimeField(_) => {
                let q = self.rational()?;
                k.from_rational(&q)
            }
            Field::QuadExt { base, .. } => {
                if self.peek() == Some(b'[') {
                    self.pos += 1;
                    let a = self.elem(base)?;
                    self.expect(b',')?;
                    let b = self.elem(base)?;
                    self.expect(b']')?;
                    Ok(Elem::quad(a, b))
                } else {
                    Ok(k.embed_constant(&self.elem(base)?))
                }
            }
            Field::RationalFunctions { base, .. } | Field::LaurentView { base } => {
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let num = self.list(base)?;
                    self.expect(b')')?;
                    self.expect(b'/')?;
                    self.expect(b'(')?;
                    let den = self.list(base)?;
                    self.expect(b')')?;
                    let mut num = num;
                    let mut den = den;
                    super::poly::trim(base, &mut num);
                    super::poly::trim(base, &mut den);
                    return k.ratfn(num, den);
                }
                // monomial c*t^e, t, -t, c
                let neg = if self.peek() == Some(b'-') && self.s.get(self.pos + 1) == Some(&b't') {
                    self.pos += 1;
                    true
                } else {
                    false
                };
                let coeff = if self.peek() == Some(b't') {
                    base.one()
                } else {
                    let c = self.elem(base)?;
                    if self.peek() == Some(b'*') {
                        self.pos += 1;
                    } else {
                        return Ok(k.embed_constant(&c));
                    }
                    c
                };
                self.expect(b't')?;
                let mut e = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    e = self
                        .integer()?
                        .try_into()
                        .map_err(|_| Error::Parse("bad exponent".into()))?;
                }
                let mut num = vec![base.zero(); e as usize];
                num.push(if neg { base.neg(&coeff) } else { coeff });
                k.ratfn(num, vec![base.one()])
            }
        }
    }
}
