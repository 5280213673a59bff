//! Clifford algebras C(q) on the monomial basis e_S, S ⊆ {1..n} as a bitmask.
//!
//! Diagonal forms use the closed sign rule e_S·e_T = ±(∏_{S∩T} aᵢ)·e_{S△T}.
//! General coefficient matrices (characteristic 2 in particular) use
//! eᵢeⱼ = f(eᵢ,eⱼ) − eⱼeᵢ and eᵢ² = q(eᵢ), with generator-by-monomial
//! products cached.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::invariants;
use crate::linalg::{self, Matrix};
use crate::quadform::QuadraticSpace;

/// Sparse element: monomial mask → nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CliffordEl {
    pub terms: BTreeMap<u32, Elem>,
}

impl CliffordEl {
    pub fn zero() -> CliffordEl {
        CliffordEl::default()
    }

    pub fn monomial(k: &Field, mask: u32, c: Elem) -> CliffordEl {
        let mut e = CliffordEl::zero();
        if !k.is_zero(&c) {
            e.terms.insert(mask, c);
        }
        e
    }

    pub fn scalar(k: &Field, c: Elem) -> CliffordEl {
        CliffordEl::monomial(k, 0, c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.count_ones() % 2 == 0)
    }

    fn add_term(&mut self, k: &Field, mask: u32, c: &Elem) {
        if k.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&mask) {
            Some(x) => {
                *x = k.add(x, c);
                if k.is_zero(x) {
                    self.terms.remove(&mask);
                }
            }
            None => {
                self.terms.insert(mask, c.clone());
            }
        }
    }

    pub fn add(&self, k: &Field, other: &CliffordEl) -> CliffordEl {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(k, *m, c);
        }
        out
    }

    pub fn scale(&self, k: &Field, c: &Elem) -> CliffordEl {
        let mut out = CliffordEl::zero();
        for (m, x) in &self.terms {
            out.add_term(k, *m, &k.mul(c, x));
        }
        out
    }

    pub fn sub(&self, k: &Field, other: &CliffordEl) -> CliffordEl {
        self.add(k, &other.scale(k, &k.neg(&k.one())))
    }

    pub fn scalar_part(&self, k: &Field) -> Elem {
        self.terms.get(&0).cloned().unwrap_or_else(|| k.zero())
    }
}

#[derive(Clone, Debug)]
enum Relations {
    Diagonal { squares: Vec<Elem> },
    General { table: Vec<Vec<CliffordEl>> },
}

#[derive(Clone, Debug)]
pub struct CliffordAlgebra {
    pub field: Field,
    pub n: usize,
    rel: Relations,
}

/// Parity of the number of pairs (i ∈ S, j ∈ T) with i > j.
fn reorder_odd(s: u32, t: u32) -> bool {
    let mut s = s >> 1;
    let mut acc = 0;
    while s != 0 {
        acc += (s & t).count_ones();
        s >>= 1;
    }
    acc % 2 == 1
}

impl CliffordAlgebra {
    pub fn new(q: &QuadraticSpace) -> Result<CliffordAlgebra> {
        let n = q.dim();
        if n > 20 {
            return Err(Error::Unsupported("Clifford algebras beyond 20 generators".into()));
        }
        let k = q.field.clone();
        if k.characteristic() != 2 {
            if let Some(d) = q.diagonal_entries() {
                return Ok(CliffordAlgebra { field: k, n, rel: Relations::Diagonal { squares: d } });
            }
        }
        let mut alg = CliffordAlgebra { field: k.clone(), n, rel: Relations::General { table: Vec::new() } };
        let table = alg.build_table(q);
        alg.rel = Relations::General { table };
        Ok(alg)
    }

    /// Like [`new`](Self::new) but insists on a diagonal form outside characteristic 2.
    pub fn diagonal(q: &QuadraticSpace) -> Result<CliffordAlgebra> {
        if q.field.characteristic() != 2 && q.diagonal_entries().is_none() {
            return Err(Error::Precondition("the characteristic ≠ 2 engine expects a diagonal form".into()));
        }
        CliffordAlgebra::new(q)
    }

    fn build_table(&self, q: &QuadraticSpace) -> Vec<Vec<CliffordEl>> {
        let k = &self.field;
        let n = self.n;
        let c = q.coeffs();
        // table[i][T] = eᵢ·e_T, filled for T in increasing order of the lowest bit from the top
        let mut table: Vec<Vec<CliffordEl>> = vec![vec![CliffordEl::zero(); 1 << n]; n];
        let masks: Vec<u32> = {
            let mut v: Vec<u32> = (0..(1u32 << n)).collect();
            // T with a larger lowest index first, so that T∖{t₁} is already known
            v.sort_by_key(|&m| std::cmp::Reverse(if m == 0 { n as u32 } else { m.trailing_zeros() }));
            v
        };
        for &t in &masks {
            for i in 0..n {
                let val = if t == 0 {
                    CliffordEl::monomial(k, 1 << i, k.one())
                } else {
                    let t1 = t.trailing_zeros() as usize;
                    let rest = t & !(1 << t1);
                    if i < t1 {
                        CliffordEl::monomial(k, t | (1 << i), k.one())
                    } else if i == t1 {
                        CliffordEl::monomial(k, rest, c[i][i].clone())
                    } else {
                        // eᵢe_{t₁} = f(eᵢ,e_{t₁}) − e_{t₁}eᵢ
                        let f = c[t1][i].clone();
                        let mut out = CliffordEl::monomial(k, rest, f);
                        let inner = table[i][rest as usize].clone();
                        for (m, x) in &inner.terms {
                            // e_{t₁} prepends: every index in m exceeds t₁
                            out.add_term(k, m | (1 << t1), &k.neg(x));
                        }
                        out
                    }
                };
                table[i][t as usize] = val;
            }
        }
        table
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generator(&self, i: usize) -> CliffordEl {
        CliffordEl::monomial(&self.field, 1 << i, self.field.one())
    }

    pub fn one(&self) -> CliffordEl {
        CliffordEl::scalar(&self.field, self.field.one())
    }

    /// e_S·e_T as a (mask, coefficient) list.
    fn monomial_product(&self, s: u32, t: u32) -> CliffordEl {
        let k = &self.field;
        match &self.rel {
            Relations::Diagonal { squares } => {
                let mut c = k.one();
                let mut common = s & t;
                while common != 0 {
                    let i = common.trailing_zeros() as usize;
                    c = k.mul(&c, &squares[i]);
                    common &= common - 1;
                }
                if reorder_odd(s, t) {
                    c = k.neg(&c);
                }
                CliffordEl::monomial(k, s ^ t, c)
            }
            Relations::General { table } => {
                let mut cur = CliffordEl::monomial(k, t, k.one());
                for i in (0..self.n).rev().filter(|i| s & (1 << i) != 0) {
                    let mut next = CliffordEl::zero();
                    for (m, x) in &cur.terms {
                        for (m2, y) in &table[i][*m as usize].terms {
                            next.add_term(k, *m2, &k.mul(x, y));
                        }
                    }
                    cur = next;
                }
                cur
            }
        }
    }

    pub fn mul(&self, x: &CliffordEl, y: &CliffordEl) -> CliffordEl {
        let k = &self.field;
        if let Relations::Diagonal { squares } = &self.rel {
            return self.mul_diagonal_dense(squares, x, y);
        }
        let mut out = CliffordEl::zero();
        for (s, a) in &x.terms {
            for (t, b) in &y.terms {
                let ab = k.mul(a, b);
                for (m, c) in &self.monomial_product(*s, *t).terms {
                    out.add_term(k, *m, &k.mul(&ab, c));
                }
            }
        }
        out
    }

    /// Dense accumulation for the diagonal sign rule.
    fn mul_diagonal_dense(&self, squares: &[Elem], x: &CliffordEl, y: &CliffordEl) -> CliffordEl {
        let k = &self.field;
        if let Some(out) = self.mul_rational_integral(squares, x, y) {
            return out;
        }
        let size = 1usize << self.n;
        let mut acc: Vec<Option<Elem>> = vec![None; size];
        // products of squares over every subset, built on demand
        let mut sq_cache: Vec<Option<Elem>> = vec![None; size];
        for (s, a) in &x.terms {
            for (t, b) in &y.terms {
                let common = (s & t) as usize;
                let w = match &sq_cache[common] {
                    Some(w) => w.clone(),
                    None => {
                        let mut w = k.one();
                        let mut c = common;
                        while c != 0 {
                            w = k.mul(&w, &squares[c.trailing_zeros() as usize]);
                            c &= c - 1;
                        }
                        sq_cache[common] = Some(w.clone());
                        w
                    }
                };
                let mut term = k.mul(&k.mul(a, b), &w);
                if reorder_odd(*s, *t) {
                    term = k.neg(&term);
                }
                let slot = &mut acc[(s ^ t) as usize];
                *slot = Some(match slot.take() {
                    Some(v) => k.add(&v, &term),
                    None => term,
                });
            }
        }
        let mut out = CliffordEl::zero();
        for (m, c) in acc.into_iter().enumerate() {
            if let Some(c) = c {
                if !k.is_zero(&c) {
                    out.terms.insert(m as u32, c);
                }
            }
        }
        out
    }

    /// ℚ with integral squares: clear denominators and accumulate in i128.
    /// None on overflow or when the shape does not apply.
    fn mul_rational_integral(&self, squares: &[Elem], x: &CliffordEl, y: &CliffordEl) -> Option<CliffordEl> {
        use num_integer::Integer;
        use num_traits::{One, ToPrimitive};
        if !matches!(self.field, Field::Rationals) {
            return None;
        }
        let sq: Vec<i128> = squares
            .iter()
            .map(|e| match e {
                Elem::Q(r) if r.is_integer() => r.numer().to_i64().map(i128::from),
                _ => None,
            })
            .collect::<Option<_>>()?;
        let scaled = |e: &CliffordEl| -> Option<(Vec<(u32, i128)>, BigInt)> {
            let mut den = BigInt::one();
            for c in e.terms.values() {
                let Elem::Q(r) = c else { return None };
                den = den.lcm(r.denom());
            }
            let mut v = Vec::with_capacity(e.terms.len());
            for (m, c) in &e.terms {
                let Elem::Q(r) = c else { return None };
                let n = r.numer() * (&den / r.denom());
                v.push((*m, n.to_i64()? as i128));
            }
            Some((v, den))
        };
        let (xs, dx) = scaled(x)?;
        let (ys, dy) = scaled(y)?;
        let size = 1usize << self.n;
        let mut sq_prod = vec![0i128; size];
        sq_prod[0] = 1;
        for m in 1..size {
            let low = m.trailing_zeros() as usize;
            sq_prod[m] = sq_prod[m & (m - 1)].checked_mul(sq[low])?;
        }
        let mut acc = vec![0i128; size];
        for (s, a) in &xs {
            for (t, b) in &ys {
                let mut term = a.checked_mul(*b)?.checked_mul(sq_prod[(s & t) as usize])?;
                if reorder_odd(*s, *t) {
                    term = -term;
                }
                let slot = &mut acc[(s ^ t) as usize];
                *slot = slot.checked_add(term)?;
            }
        }
        let den = dx * dy;
        let mut out = CliffordEl::zero();
        for (m, c) in acc.into_iter().enumerate() {
            if c != 0 {
                out.terms.insert(m as u32, Elem::Q(BigRational::new(BigInt::from(c), den.clone())));
            }
        }
        Some(out)
    }

    pub fn commutes(&self, x: &CliffordEl, y: &CliffordEl) -> bool {
        self.mul(x, y) == self.mul(y, x)
    }

    pub fn anticommutes(&self, x: &CliffordEl, y: &CliffordEl) -> bool {
        self.mul(x, y).add(&self.field, &self.mul(y, x)).is_zero()
    }

    /// Even monomials, 2^{n−1} of them (n ≥ 1).
    pub fn even_part_basis(&self) -> Vec<u32> {
        (0..(1u32 << self.n)).filter(|m| m.count_ones() % 2 == 0).collect()
    }

    /// Generators of C₀: eᵢeⱼ for i < j.
    pub fn even_generators(&self) -> Vec<CliffordEl> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                out.push(self.mul(&self.generator(i), &self.generator(j)));
            }
        }
        out
    }

    /// Basis of the center of C₀ (even_only) or of C, by a linear solve.
    pub fn center_basis_solve(&self, even_only: bool) -> Result<Vec<CliffordEl>> {
        let k = &self.field;
        if self.n > 8 {
            return Err(Error::Unsupported("linear center solve beyond 8 generators".into()));
        }
        let basis: Vec<u32> = if even_only { self.even_part_basis() } else { (0..(1u32 << self.n)).collect() };
        let gens: Vec<CliffordEl> = if even_only {
            self.even_generators()
        } else {
            (0..self.n).map(|i| self.generator(i)).collect()
        };
        let size = 1usize << self.n;
        let mut rows: Matrix = Vec::new();
        for g in &gens {
            // columns: commutator [e_S, g] for every basis monomial
            let mut block = linalg::zeros(k, size, basis.len());
            for (col, &s) in basis.iter().enumerate() {
                let m = CliffordEl::monomial(k, s, k.one());
                let c = self.mul(&m, g).sub(k, &self.mul(g, &m));
                for (mask, x) in c.terms {
                    block[mask as usize][col] = x;
                }
            }
            rows.extend(block.into_iter().filter(|r| r.iter().any(|x| !k.is_zero(x))));
        }
        let ker = if rows.is_empty() {
            (0..basis.len()).map(|i| linalg::unit_vector(k, basis.len(), i)).collect()
        } else {
            linalg::kernel(k, &rows, basis.len())
        };
        Ok(ker
            .into_iter()
            .map(|v| {
                let mut e = CliffordEl::zero();
                for (c, &s) in v.iter().zip(&basis) {
                    e.add_term(k, s, c);
                }
                e
            })
            .collect())
    }
}

/// Product of the generators e₁⋯e_n.
fn top_element(alg: &CliffordAlgebra) -> CliffordEl {
    CliffordEl::monomial(&alg.field, ((1u64 << alg.n) - 1) as u32, alg.field.one())
}

/// Canonical generator of the center of C₀ together with the algebra it
/// lives in: ω = e₁⋯e_n on a diagonal basis (ω² = signed determinant), or
/// z = ∑ eᵢfᵢ on a symplectic basis in characteristic 2 (z² = z + Arf).
pub struct CenterData {
    pub algebra: CliffordAlgebra,
    pub generator: CliffordEl,
    /// ω² (characteristic ≠ 2) or z² − z (characteristic 2), a scalar.
    pub relation: Elem,
    pub basis: Vec<CliffordEl>,
    pub solved: bool,
}

pub fn center_data(q: &QuadraticSpace) -> Result<CenterData> {
    q.require_nondegenerate()?;
    if q.dim() % 2 == 1 || q.dim() == 0 {
        return Err(Error::Precondition("center of C₀ needs a positive even dimension".into()));
    }
    let k = &q.field;
    let (alg, gen) = if k.characteristic() == 2 {
        let sb = invariants::symplectic_basis(q)?;
        let mut cols = Vec::new();
        for (e, f) in &sb {
            cols.push(e.clone());
            cols.push(f.clone());
        }
        let qs = q.restrict(&cols)?;
        let alg = CliffordAlgebra::new(&qs)?;
        let mut z = CliffordEl::zero();
        for i in 0..sb.len() {
            z = z.add(k, &alg.mul(&alg.generator(2 * i), &alg.generator(2 * i + 1)));
        }
        (alg, z)
    } else {
        let d = q.diagonal_form()?;
        let alg = CliffordAlgebra::new(&QuadraticSpace::diag(k, &d))?;
        let w = top_element(&alg);
        (alg, w)
    };
    let sq = alg.mul(&gen, &gen);
    let rel_el = if k.characteristic() == 2 { sq.sub(k, &gen) } else { sq };
    if rel_el.terms.keys().any(|&m| m != 0) {
        return Err(Error::Internal("center generator relation is not scalar".into()));
    }
    let relation = rel_el.scalar_part(k);
    let (basis, solved) = if alg.n <= 8 {
        let b = alg.center_basis_solve(true)?;
        if b.len() != 2 {
            return Err(Error::Internal(format!("center of C₀ has dimension {}", b.len())));
        }
        (b, true)
    } else {
        for g in alg.even_generators() {
            if !alg.commutes(&gen, &g) {
                return Err(Error::Internal("center generator is not central".into()));
            }
        }
        (vec![alg.one(), gen.clone()], false)
    };
    Ok(CenterData { algebra: alg, generator: gen, relation, basis, solved })
}

#[derive(Clone, Debug)]
pub enum Idempotents {
    Split { pair: (CliffordEl, CliffordEl) },
    /// Center of C₀ is a field; carries ω² (or the Arf value in characteristic 2).
    FieldCenter { class: Elem },
}

pub fn central_idempotents(q: &QuadraticSpace) -> Result<Idempotents> {
    let data = center_data(q)?;
    let alg = &data.algebra;
    let k = &alg.field;
    let pair = if k.characteristic() == 2 {
        let Some(y) = k.artin_schreier_root(&data.relation)? else {
            return Ok(Idempotents::FieldCenter { class: data.relation });
        };
        let z1 = data.generator.add(k, &CliffordEl::scalar(k, y));
        let z2 = z1.add(k, &alg.one());
        (z1, z2)
    } else {
        let Some(s) = k.sqrt(&data.relation)? else {
            return Ok(Idempotents::FieldCenter { class: k.square_class_rep(&data.relation)? });
        };
        let half = k.inv(&k.from_i64(2))?;
        let w = data.generator.scale(k, &k.div(&half, &s)?);
        let h = CliffordEl::scalar(k, half);
        (h.add(k, &w), h.sub(k, &w))
    };
    let (z1, z2) = &pair;
    let ok = alg.mul(z1, z1) == *z1
        && alg.mul(z2, z2) == *z2
        && alg.mul(z1, z2).is_zero()
        && z1.add(k, z2) == alg.one()
        && alg.even_generators().iter().all(|g| alg.commutes(z1, g));
    if !ok {
        return Err(Error::Internal("central idempotent verification failed".into()));
    }
    Ok(Idempotents::Split { pair })
}

/// Brauer class of C(q) for a diagonal form of even dimension, computed by
/// peeling C(⟨a₁,a₂⟩ ⊥ q′) ≅ (a₁,a₂) ⊗ C(⟨−a₁a₂⟩q′) with every relation
/// checked on explicit products in the engine.
pub fn clifford_class_by_peeling(k: &Field, diag: &[Elem]) -> Result<crate::brauer::BrauerClass2> {
    if diag.len() % 2 == 1 {
        return Err(Error::Precondition("peeling needs an even dimension".into()));
    }
    let mut class = crate::brauer::BrauerClass2::trivial_for(k)?;
    let mut cur = diag.to_vec();
    while !cur.is_empty() {
        let alg = CliffordAlgebra::new(&QuadraticSpace::diag(k, &cur))?;
        let (u, v) = (alg.generator(0), alg.generator(1));
        let uv = alg.mul(&u, &v);
        let check = |x: &CliffordEl, c: &Elem| alg.mul(x, x) == CliffordEl::scalar(k, c.clone());
        if !check(&u, &cur[0]) || !check(&v, &cur[1]) || !alg.anticommutes(&u, &v) {
            return Err(Error::Internal("quaternion relations fail".into()));
        }
        let mut next = Vec::new();
        let mut ws = Vec::new();
        for (idx, a) in cur.iter().enumerate().skip(2) {
            let w = alg.mul(&uv, &alg.generator(idx));
            let c = k.neg(&k.mul(&k.mul(&cur[0], &cur[1]), a));
            if !check(&w, &c) || !alg.commutes(&w, &u) || !alg.commutes(&w, &v) {
                return Err(Error::Internal("peeled generator relations fail".into()));
            }
            for w2 in &ws {
                if !alg.anticommutes(&w, w2) {
                    return Err(Error::Internal("peeled generators do not anticommute".into()));
                }
            }
            ws.push(w);
            next.push(c);
        }
        class = class.add(&crate::brauer::quaternion_class(k, &cur[0], &cur[1])?)?;
        cur = next;
    }
    Ok(class)
}

impl CliffordEl {
    pub fn to_json(&self, k: &Field, n: usize) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let idx: Vec<usize> = (0..n).filter(|i| m & (1 << i) != 0).map(|i| i + 1).collect();
                json!({"monomial": idx, "coeff": k.format(c)})
            })
            .collect();
        Value::Array(terms)
    }
}
