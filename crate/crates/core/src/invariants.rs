//! Discriminant, Clifford invariant, type recognition and Pfister multiples.

use serde_json::{json, Value};

use crate::brauer::{quaternion_class, BrauerClass2, SquareClass};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::isotropy;
use crate::linalg::{self, Vector};
use crate::quadform::QuadraticSpace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Discriminant {
    /// Signed determinant class (characteristic ≠ 2).
    Square(SquareClass),
    /// Arf invariant, a representative of K/℘(K) (characteristic 2).
    Arf(Elem),
}

impl Discriminant {
    pub fn is_trivial(&self, k: &Field) -> Result<bool> {
        match self {
            Discriminant::Square(s) => Ok(k.is_one(&s.rep)),
            Discriminant::Arf(a) => k.is_artin_schreier(a),
        }
    }

    pub fn to_json(&self, k: &Field) -> Value {
        match self {
            Discriminant::Square(s) => json!({"square_class": k.format(&s.rep)}),
            Discriminant::Arf(a) => json!({"arf": k.format(a)}),
        }
    }
}

/// Symplectic basis (eᵢ, fᵢ) of a nondegenerate even-dimensional polar form.
pub fn symplectic_basis(q: &QuadraticSpace) -> Result<Vec<(Vector, Vector)>> {
    let k = &q.field;
    let n = q.dim();
    let mut span: Vec<Vector> = (0..n).map(|i| linalg::unit_vector(k, n, i)).collect();
    let mut out = Vec::new();
    while !span.is_empty() {
        let e = span[0].clone();
        let j = span
            .iter()
            .position(|s| !k.is_zero(&q.polar(&e, s)))
            .ok_or(Error::Degenerate(1))?;
        let f = linalg::vec_scale(k, &k.inv(&q.polar(&e, &span[j]))?, &span[j]);
        let rows = vec![
            span.iter().map(|s| q.polar(&e, s)).collect::<Vector>(),
            span.iter().map(|s| q.polar(&f, s)).collect::<Vector>(),
        ];
        let ker = linalg::kernel(k, &rows, span.len());
        span = ker.iter().map(|c| isotropy::combine(k, &span, c)).collect();
        out.push((e, f));
    }
    Ok(out)
}

pub fn discriminant(q: &QuadraticSpace) -> Result<Discriminant> {
    let n = q.dim();
    if n % 2 == 1 {
        return Err(Error::Unsupported("discriminant of an odd-dimensional form".into()));
    }
    q.require_nondegenerate()?;
    let k = &q.field;
    if k.characteristic() == 2 {
        let mut arf = k.zero();
        for (e, f) in symplectic_basis(q)? {
            arf = k.add(&arf, &k.mul(&q.eval(&e), &q.eval(&f)));
        }
        return Ok(Discriminant::Arf(arf));
    }
    let d = q.diagonal_form()?;
    let mut det = k.one();
    for a in &d {
        det = k.mul(&det, a);
    }
    if (n * (n - 1) / 2) % 2 == 1 {
        det = k.neg(&det);
    }
    Ok(Discriminant::Square(k.square_class(&det)?))
}

/// Signed determinant (−1)^{n(n−1)/2}·∏aᵢ of a diagonal form.
pub fn signed_determinant(k: &Field, diag: &[Elem]) -> Elem {
    let n = diag.len();
    let mut det = k.one();
    for a in diag {
        det = k.mul(&det, a);
    }
    if (n * (n.saturating_sub(1)) / 2) % 2 == 1 {
        det = k.neg(&det);
    }
    det
}

/// Hasse–Witt class s(q) = ∑_{i<j} (aᵢ, aⱼ).
pub fn hasse_witt_class(k: &Field, diag: &[Elem]) -> Result<BrauerClass2> {
    let mut s = BrauerClass2::trivial_for(k)?;
    for i in 0..diag.len() {
        for j in (i + 1)..diag.len() {
            s = s.add(&quaternion_class(k, &diag[i], &diag[j])?)?;
        }
    }
    Ok(s)
}

/// Correction term relating the Clifford invariant to the Hasse–Witt class,
/// by dimension mod 8: none, (−1, −d), (−1, −1), (−1, d), with d the signed
/// determinant.
pub fn clifford_correction(k: &Field, n: usize, d: &Elem) -> Result<BrauerClass2> {
    let m1 = k.neg(&k.one());
    match n % 8 {
        1 | 2 => BrauerClass2::trivial_for(k),
        3 | 4 => quaternion_class(k, &m1, &k.neg(d)),
        5 | 6 => quaternion_class(k, &m1, &m1),
        _ => quaternion_class(k, &m1, d),
    }
}

/// Brauer class of C(q) for a diagonal form.
pub fn clifford_class_of_diagonal(k: &Field, diag: &[Elem]) -> Result<BrauerClass2> {
    let s = hasse_witt_class(k, diag)?;
    let d = signed_determinant(k, diag);
    s.add(&clifford_correction(k, diag.len(), &d)?)
}

/// Clifford invariant and its index.
pub fn clifford_invariant(q: &QuadraticSpace) -> Result<(BrauerClass2, u32)> {
    let k = &q.field;
    if k.characteristic() == 2 {
        return Err(Error::Unsupported("Clifford invariants in characteristic 2".into()));
    }
    if q.dim() % 2 == 1 {
        return Err(Error::Unsupported("Clifford invariant of an odd-dimensional form".into()));
    }
    q.require_nondegenerate()?;
    let c = clifford_class_of_diagonal(k, &q.diagonal_form()?)?;
    let idx = c.index()?;
    Ok((c, idx))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeKind {
    E7,
    E8,
    Neither,
    Unknown,
}

impl TypeKind {
    pub fn name(&self) -> &'static str {
        match self {
            TypeKind::E7 => "E7",
            TypeKind::E8 => "E8",
            TypeKind::Neither => "neither",
            TypeKind::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub kind: TypeKind,
    pub reasons: Vec<String>,
}

impl Classification {
    pub fn to_json(&self) -> Value {
        json!({"type": self.kind.name(), "reasons": self.reasons})
    }
}

pub fn classify_type(q: &QuadraticSpace) -> Result<Classification> {
    q.require_nondegenerate()?;
    let k = &q.field;
    let supported = match k {
        Field::Rationals => true,
        Field::PrimeField(p) => *p != 2,
        Field::LaurentView { base } => **base == Field::Rationals,
        _ => false,
    };
    if !supported {
        return Ok(Classification { kind: TypeKind::Unknown, reasons: vec!["unknown: field unsupported".into()] });
    }
    let n = q.dim();
    let mut reasons = Vec::new();
    if n != 8 && n != 12 {
        reasons.push(format!("dim_{n}_not_8_or_12"));
        return Ok(Classification { kind: TypeKind::Neither, reasons });
    }
    if isotropy::is_isotropic(q)? {
        reasons.push("isotropic".into());
    }
    if !discriminant(q)?.is_trivial(k)? {
        reasons.push("disc_nontrivial".into());
    }
    let (c, idx) = clifford_invariant(q)?;
    if n == 8 && idx != 2 {
        reasons.push(format!("clif_index_{idx}"));
    }
    if n == 12 && !c.is_trivial() {
        reasons.push("clif_nontrivial".into());
    }
    let kind = match (reasons.is_empty(), n) {
        (true, 8) => TypeKind::E7,
        (true, _) => TypeKind::E8,
        _ => TypeKind::Neither,
    };
    Ok(Classification { kind, reasons })
}

#[derive(Clone, Debug)]
pub struct PfisterMultiple {
    pub beta: Elem,
    pub pi: QuadraticSpace,
    /// A vector with π(e) = 1.
    pub one_vector: Vector,
    pub hyperbolic: bool,
}

/// Writes a dimension-8 form with trivial discriminant and Clifford
/// invariant as ⟨β⟩·π with π representing 1.
pub fn recognize_pfister_multiple(q: &QuadraticSpace) -> Result<PfisterMultiple> {
    let k = &q.field;
    if q.dim() != 8 {
        return Err(Error::Precondition(format!("expected dimension 8, found {}", q.dim())));
    }
    if !discriminant(q)?.is_trivial(k)? {
        return Err(Error::Precondition("discriminant is not trivial".into()));
    }
    if !clifford_invariant(q)?.0.is_trivial() {
        return Err(Error::Precondition("Clifford invariant is not trivial".into()));
    }
    let wd = isotropy::witt_decompose(q)?;
    if wd.witt_index > 0 {
        if !wd.is_hyperbolic() {
            return Err(Error::Internal("isotropic form in I³ of dimension 8 is not hyperbolic".into()));
        }
        let (e, f) = &wd.pairs[0];
        return Ok(PfisterMultiple {
            beta: k.one(),
            pi: q.clone(),
            one_vector: linalg::vec_add(k, e, f),
            hyperbolic: true,
        });
    }
    let (b, d) = q.diagonalize()?;
    let beta = d[0].clone();
    let pi = q.scale(&k.inv(&beta)?);
    let e = linalg::transpose(&b)[0].clone();
    debug_assert!(k.is_one(&pi.eval(&e)));
    Ok(PfisterMultiple { beta, pi, one_vector: e, hyperbolic: false })
}
