//! Hyperbolicity over quadratic extensions and norm membership.
//!
//! For an anisotropic q over K and E = K(√d), q_E is hyperbolic iff q is an
//! orthogonal sum of binary blocks ⟨c⟩⟨1, −d⟩, and such a block can be peeled
//! off starting from any anisotropic vector u: it exists iff q|u^⊥ represents
//! −d·q(u). The peeling below is therefore a decision procedure, and the
//! blocks it returns are the witness.

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::brauer;
use crate::error::{Error, Result};
use crate::invariants;
use crate::field::{Elem, Field};
use crate::isotropy::{self, combine, residue_split, Search};
use crate::linalg::{self, Vector};
use crate::quadform::QuadraticSpace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitBlock {
    /// q(e) = q(f) = 0, f(e, f) = 1.
    Hyperbolic { e: Vector, f: Vector },
    /// f(u, w) = 0 and q(w) = −d·q(u), so span(u, w) ≅ q(u)·⟨1, −d⟩.
    Norm { u: Vector, w: Vector },
}

#[derive(Clone, Debug)]
pub struct QuadSplitting {
    pub hyperbolic: bool,
    /// Radicand d with E = K(√d) (characteristic ≠ 2).
    pub d: Option<Elem>,
    pub blocks: Vec<SplitBlock>,
    /// Field the block vectors live over: K, or E on the characteristic 2 path.
    pub witness_field: Field,
}

/// Radicand of a quadratic extension x² − αx + β in characteristic ≠ 2: α² − 4β.
pub fn radicand(e: &Field) -> Result<Elem> {
    let Field::QuadExt { base, alpha, beta } = e else {
        return Err(Error::Precondition("expected a quadratic extension".into()));
    };
    if base.characteristic() == 2 {
        return Err(Error::Unsupported("radicands in characteristic 2".into()));
    }
    Ok(base.sub(&base.square(alpha), &base.mul(&base.from_i64(4), beta)))
}

pub fn hyperbolic_over_sqrt(q: &QuadraticSpace, d: &Elem) -> Result<QuadSplitting> {
    let e = Field::sqrt_ext(q.field.clone(), d)?;
    hyperbolic_over_quadratic(q, &e)
}

/// Decides whether q becomes hyperbolic over the quadratic extension `e` of its field.
pub fn hyperbolic_over_quadratic(q: &QuadraticSpace, e: &Field) -> Result<QuadSplitting> {
    q.require_nondegenerate()?;
    if e.base() != Some(&q.field) || !matches!(e, Field::QuadExt { .. }) {
        return Err(Error::FieldMismatch);
    }
    let k = &q.field;
    if k.characteristic() == 2 {
        return char2_path(q, e);
    }
    let d = radicand(e)?;
    match k {
        Field::Rationals => {
            let (hyperbolic, blocks) = peel(q, &d)?;
            Ok(QuadSplitting { hyperbolic, d: Some(d), blocks, witness_field: k.clone() })
        }
        Field::LaurentView { base } => {
            let dc = k
                .as_constant(&d)
                .ok_or_else(|| Error::Unsupported("only constant radicands over the Laurent view".into()))?;
            let split = residue_split(q)?;
            if !split.monomial {
                return Err(Error::Unsupported("form is not in monomial residue shape".into()));
            }
            let mut blocks = Vec::new();
            let mut hyperbolic = true;
            let t_inv = k.inv(&k.t()?)?;
            for second in [false, true] {
                let res = if second { split.second_form() } else { split.first_form() };
                if res.dim() == 0 {
                    continue;
                }
                let (h, bl) = peel(&res, &dc)?;
                hyperbolic &= h;
                for b in bl {
                    blocks.push(match b {
                        SplitBlock::Hyperbolic { e, f } => {
                            let e = split.lift(k, second, &e)?;
                            let mut f = split.lift(k, second, &f)?;
                            if second {
                                f = linalg::vec_scale(k, &t_inv, &f);
                            }
                            SplitBlock::Hyperbolic { e, f }
                        }
                        SplitBlock::Norm { u, w } => SplitBlock::Norm {
                            u: split.lift(k, second, &u)?,
                            w: split.lift(k, second, &w)?,
                        },
                    });
                }
            }
            let _ = base;
            Ok(QuadSplitting { hyperbolic, d: Some(d), blocks, witness_field: k.clone() })
        }
        _ => Err(Error::Unsupported(format!("hyperbolicity over extensions of {}", k.descriptor_json()))),
    }
}

/// Verdict of `hyperbolic_over_sqrt` over ℚ from invariants alone, with no
/// witness: even dimension, signed discriminant in {1, d}·ℚ^{×2}, Clifford
/// invariant split by ℚ(√d), and signature 0 when d > 0. Locally a quadratic
/// extension kills every quaternion class, so only the places where d is a
/// square carry a Clifford condition.
pub fn hyperbolic_over_sqrt_by_invariants(q: &QuadraticSpace, d: &Elem) -> Result<bool> {
    let k = &q.field;
    if *k != Field::Rationals {
        return Err(Error::Unsupported("invariant test for hyperbolicity is implemented over Q".into()));
    }
    q.require_nondegenerate()?;
    if q.dim() % 2 == 1 {
        return Ok(false);
    }
    if k.is_square(d)?.0 {
        return Ok(isotropy::witt_decompose(q)?.is_hyperbolic());
    }
    let invariants::Discriminant::Square(disc) = invariants::discriminant(q)? else {
        return Err(Error::Internal("expected a square-class discriminant".into()));
    };
    if !k.is_one(&disc.rep) && !k.same_square_class(&disc.rep, d)? {
        return Ok(false);
    }
    if k.rational_sign(d) == Some(1) {
        let diag = q.diagonal_form()?;
        let pos = diag.iter().filter(|a| k.rational_sign(a) == Some(1)).count();
        if 2 * pos != diag.len() {
            return Ok(false);
        }
    }
    let (clif, _) = invariants::clifford_invariant(q)?;
    brauer::splits_over_quadratic(&clif, k, d)
}

/// Peeling; returns the verdict and the blocks found so far.
fn peel(q: &QuadraticSpace, d: &Elem) -> Result<(bool, Vec<SplitBlock>)> {
    let k = &q.field;
    let wd = isotropy::witt_decompose(q)?;
    let mut blocks: Vec<SplitBlock> =
        wd.pairs.iter().map(|(e, f)| SplitBlock::Hyperbolic { e: e.clone(), f: f.clone() }).collect();
    if *k == Field::Rationals {
        let ok = peel_kernel_q(q, d, &wd.kernel_basis, &mut blocks)?;
        return Ok((ok, blocks));
    }
    let mut span = wd.kernel_basis.clone();
    while !span.is_empty() {
        if span.len() == 1 {
            return Ok((false, blocks));
        }
        let r = q.restrict(&span)?;
        let (b, diag) = r.diagonalize()?;
        let cols = linalg::transpose(&b);
        let c = diag[0].clone();
        let mut test: Vec<Elem> = diag[1..].to_vec();
        test.push(k.mul(d, &c));
        let y = match isotropy::search(&QuadraticSpace::diag(k, &test), &isotropy::Budget::default())? {
            Search::Found(y) => y,
            Search::Anisotropic => return Ok((false, blocks)),
            Search::Unknown => return Err(Error::Budget("representation search".into())),
        };
        let last = y.last().unwrap();
        if k.is_zero(last) {
            return Err(Error::Internal("anisotropic kernel has an isotropic subform".into()));
        }
        let coeffs: Vec<Elem> = y[..y.len() - 1].iter().map(|x| k.div(x, last)).collect::<Result<_>>()?;
        let w_loc = combine(k, &cols[1..], &coeffs);
        let u = combine(k, &span, &cols[0]);
        let w = combine(k, &span, &w_loc);
        let rows = vec![
            span.iter().map(|s| q.polar(&u, s)).collect::<Vector>(),
            span.iter().map(|s| q.polar(&w, s)).collect::<Vector>(),
        ];
        let ker = linalg::kernel(k, &rows, span.len());
        span = ker.iter().map(|c| combine(k, &span, c)).collect();
        blocks.push(SplitBlock::Norm { u, w });
    }
    Ok((true, blocks))
}

/// Over ℚ the kernel is kept diagonal with squarefree values; each norm block
/// only touches the coordinates its representation needs.
fn peel_kernel_q(q: &QuadraticSpace, d: &Elem, kernel: &[Vector], blocks: &mut Vec<SplitBlock>) -> Result<bool> {
    let k = &q.field;
    let d = d.as_rational().ok_or(Error::FieldMismatch)?;
    let (mut basis, mut vals) = isotropy::squarefree_orthogonal_basis(q, kernel)?;
    while !basis.is_empty() {
        if basis.len() == 1 {
            return Ok(false);
        }
        // representations of −d·c by the rest ↔ isotropy of ⟨rest, d·c⟩
        let m = basis.len() - 1;
        let mut test: Vec<BigRational> = vals[1..].iter().map(|v| BigRational::from_integer(v.clone())).collect();
        test.push(d * BigRational::from_integer(vals[0].clone()));
        let Some(sup) = isotropy::isotropic_support(&test, Some(m))? else { return Ok(false) };
        let sub: Vec<BigRational> = sup.iter().map(|&i| test[i].clone()).collect();
        let y = isotropy::isotropic_vector_q_diag(&sub, &isotropy::Budget::default())?
            .ok_or_else(|| Error::Internal("isotropic subform without a vector".into()))?;
        let last = y.last().unwrap();
        if last.is_zero() {
            return Err(Error::Internal("anisotropic kernel has an isotropic subform".into()));
        }
        let used: Vec<usize> = sup[..sup.len() - 1].iter().map(|&i| i + 1).collect();
        let sub_basis: Vec<Vector> = used.iter().map(|&i| basis[i].clone()).collect();
        let coeffs: Vector = y[..y.len() - 1].iter().map(|x| Elem::Q(x / last)).collect();
        let u = basis[0].clone();
        let w = combine(k, &sub_basis, &coeffs);
        let rest = isotropy::orthogonal_complement(q, &sub_basis, &[&w]);
        let (nb, nv) = isotropy::squarefree_orthogonal_basis(q, &rest)?;
        let keep: Vec<usize> = (1..basis.len()).filter(|i| !used.contains(i)).collect();
        basis = keep.iter().map(|&i| basis[i].clone()).chain(nb).collect();
        vals = keep.iter().map(|&i| vals[i].clone()).chain(nv).collect();
        blocks.push(SplitBlock::Norm { u, w });
    }
    Ok(true)
}

fn char2_path(q: &QuadraticSpace, e: &Field) -> Result<QuadSplitting> {
    let qe = q.base_change(e)?;
    let wd = isotropy::witt_decompose(&qe)?;
    let blocks = wd.pairs.iter().map(|(a, b)| SplitBlock::Hyperbolic { e: a.clone(), f: b.clone() }).collect();
    if wd.is_hyperbolic() {
        return Ok(QuadSplitting { hyperbolic: true, d: None, blocks, witness_field: e.clone() });
    }
    if wd.kernel_anisotropic {
        return Ok(QuadSplitting { hyperbolic: false, d: None, blocks, witness_field: e.clone() });
    }
    Err(Error::Budget("characteristic 2 hyperbolicity search inconclusive".into()))
}

/// Checks a splitting witness exactly: the blocks are pairwise orthogonal,
/// span the whole space and satisfy their defining identities.
pub fn verify_splitting(q: &QuadraticSpace, s: &QuadSplitting) -> Result<bool> {
    if !s.hyperbolic {
        return Ok(false);
    }
    let k = &s.witness_field;
    let qq = if *k == q.field { q.clone() } else { q.base_change(k)? };
    let mut vecs: Vec<Vector> = Vec::new();
    for b in &s.blocks {
        match b {
            SplitBlock::Hyperbolic { e, f } => {
                if !k.is_zero(&qq.eval(e)) || !k.is_zero(&qq.eval(f)) || !k.is_one(&qq.polar(e, f)) {
                    return Ok(false);
                }
                vecs.push(e.clone());
                vecs.push(f.clone());
            }
            SplitBlock::Norm { u, w } => {
                let d = s.d.as_ref().ok_or_else(|| Error::Precondition("norm block without radicand".into()))?;
                let qu = qq.eval(u);
                if k.is_zero(&qu) || !k.is_zero(&qq.polar(u, w)) || qq.eval(w) != k.neg(&k.mul(d, &qu)) {
                    return Ok(false);
                }
                vecs.push(u.clone());
                vecs.push(w.clone());
            }
        }
    }
    if vecs.len() != qq.dim() || linalg::rank(k, &vecs) != qq.dim() {
        return Ok(false);
    }
    for (i, b1) in s.blocks.iter().enumerate() {
        for b2 in &s.blocks[i + 1..] {
            for x in block_vectors(b1) {
                for y in block_vectors(b2) {
                    if !k.is_zero(&qq.polar(x, y)) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

fn block_vectors(b: &SplitBlock) -> [&Vector; 2] {
    match b {
        SplitBlock::Hyperbolic { e, f } => [e, f],
        SplitBlock::Norm { u, w } => [u, w],
    }
}

impl QuadSplitting {
    pub fn to_json(&self) -> Value {
        let k = &self.witness_field;
        let fmt = |v: &Vector| v.iter().map(|x| k.format(x)).collect::<Vec<_>>();
        let blocks: Vec<Value> = self
            .blocks
            .iter()
            .map(|b| match b {
                SplitBlock::Hyperbolic { e, f } => json!({"kind": "hyperbolic", "e": fmt(e), "f": fmt(f)}),
                SplitBlock::Norm { u, w } => json!({"kind": "norm", "u": fmt(u), "w": fmt(w)}),
            })
            .collect();
        json!({"hyperbolic": self.hyperbolic, "blocks": blocks})
    }
}

/// Decides γ ∈ N(E/ℚ) for a quadratic field E over ℚ, with a witness x ∈ E, N(x) = γ.
pub fn norm_membership(e: &Field, gamma: &Elem) -> Result<(bool, Option<Elem>)> {
    let Field::QuadExt { base, alpha, beta } = e else {
        return Err(Error::Precondition("expected a quadratic extension".into()));
    };
    if **base != Field::Rationals {
        return Err(Error::Unsupported("norm membership is decided over ℚ only; use verify_norm elsewhere".into()));
    }
    if base.is_zero(gamma) {
        return Err(Error::Precondition("γ must be nonzero".into()));
    }
    let k = &**base;
    // N(x₀ + x₁θ) = x₀² + αx₀x₁ + βx₁², and the form N ⊥ ⟨−γ⟩
    let c = vec![
        vec![k.one(), alpha.clone(), k.zero()],
        vec![k.zero(), beta.clone(), k.zero()],
        vec![k.zero(), k.zero(), k.neg(gamma)],
    ];
    let form = QuadraticSpace::new(k.clone(), c)?;
    match isotropy::search(&form, &isotropy::Budget::default())? {
        Search::Found(v) => {
            if k.is_zero(&v[2]) {
                return Err(Error::Internal("norm form of a field is isotropic".into()));
            }
            let x = Elem::quad(k.div(&v[0], &v[2])?, k.div(&v[1], &v[2])?);
            debug_assert_eq!(&e.norm(&x)?, gamma);
            Ok((true, Some(x)))
        }
        Search::Anisotropic => Ok((false, None)),
        Search::Unknown => Err(Error::Budget("norm search".into())),
    }
}

/// Exact check that N(x) = γ (any quadratic extension).
pub fn verify_norm(e: &Field, x: &Elem, gamma: &Elem) -> Result<bool> {
    Ok(&e.norm(x)? == gamma)
}
