//! Exact multivariate polynomials over a blocked variable context.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::ring::{same_ring, Ring, RingRef};
use crate::scalar::{CoeffField, Scalar};

/// A polynomial stored as nonzero terms sorted by descending grevlex on the ring's
/// global variable list. The representation is canonical.
#[derive(Clone)]
pub struct Polynomial {
    ring: RingRef,
    terms: Vec<(Monomial, Scalar)>,
}

/// One non-negative degree per variable block of the ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiDegree(pub Vec<u32>);

impl MultiDegree {
    pub fn add(&self, other: &MultiDegree) -> MultiDegree {
        MultiDegree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn constant(ring: &RingRef, c: Scalar) -> Self {
        Self::from_terms(ring, vec![(Monomial::one(ring.nvars()), c)])
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn from_i64(ring: &RingRef, c: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(c))
    }

    pub fn var(ring: &RingRef, name: &str) -> Result<Self> {
        let i = ring.var_index(name).ok_or_else(|| Error::UnknownVariable(name.into()))?;
        Ok(Self::var_at(ring, i))
    }

    pub fn var_at(ring: &RingRef, index: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), index, 1), ring.field().one())
    }

    pub fn monomial(ring: &RingRef, m: Monomial, c: Scalar) -> Self {
        Self::from_terms(ring, vec![(m, c)])
    }

    /// Builds a polynomial from arbitrary terms: duplicates are merged, zeros dropped.
    pub fn from_terms(ring: &RingRef, terms: Vec<(Monomial, Scalar)>) -> Self {
        let field = ring.field();
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            debug_assert_eq!(m.nvars(), ring.nvars());
            let c = field.convert(&c).expect("coefficient in the ring's field");
            match acc.get_mut(&m) {
                Some(v) => *v = v.add(&c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| MonomialOrder::Grevlex.cmp(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn field(&self) -> CoeffField {
        self.ring.field()
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Scalar)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant term when the polynomial is a constant (zero included).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(self.field().zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.iter().map(|(m, _)| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .iter()
            .find(|(n, _)| n == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.field().zero())
    }

    /// Leading term under `order`.
    pub fn leading_term(&self, order: &MonomialOrder) -> Option<&(Monomial, Scalar)> {
        self.terms.iter().max_by(|a, b| order.cmp(&a.0, &b.0))
    }

    fn check_ring(&self, other: &Polynomial) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let mut acc: HashMap<Monomial, Scalar> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.checked_mul(mb)?;
                let c = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(v) => *v = v.add(&c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| MonomialOrder::Grevlex.cmp(&b.0, &a.0));
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        let sign = |c: &Scalar| if negate { c.neg() } else { c.clone() };
        while i < a.len() && j < b.len() {
            match MonomialOrder::Grevlex.cmp(&a[i].0, &b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((b[j].0.clone(), sign(&b[j].1)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { a[i].1.sub(&b[j].1) } else { a[i].1.add(&b[j].1) };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| (m.clone(), sign(c))));
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let terms = self.terms.iter().map(|(m, d)| (m.clone(), d.mul(c))).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Result<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(n, c)| Ok((n.checked_mul(m)?, c.clone())))
            .collect::<Result<Vec<_>>>()?;
        // multiplication by a monomial preserves grevlex order
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient under `order` (no-op for zero).
    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let field = self.field();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.get(var) > 0)
            .map(|(m, c)| {
                let e = m.get(var);
                let mut n = m.clone();
                n.0[var] -= 1;
                (n, c.mul(&field.from_i64(e as i64)))
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Degree in a single variable (`None` for zero).
    pub fn degree_in(&self, var: usize) -> Option<u16> {
        self.terms.iter().map(|(m, _)| m.get(var)).max()
    }

    /// Per-block total degree; defined only for nonzero polynomials and reports the
    /// degree of the first term when the polynomial is not multihomogeneous.
    pub fn multidegree(&self) -> Result<MultiDegree> {
        let (m, _) = self.terms.first().ok_or(Error::ZeroMultidegree)?;
        Ok(self.monomial_multidegree(m))
    }

    pub fn monomial_multidegree(&self, m: &Monomial) -> MultiDegree {
        MultiDegree(
            self.ring
                .blocks()
                .iter()
                .map(|b| b.range.clone().map(|v| m.get(v) as u32).sum())
                .collect(),
        )
    }

    pub fn is_multihomogeneous(&self) -> bool {
        let mut it = self.terms.iter().map(|(m, _)| self.monomial_multidegree(m));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Whether every term has the same weighted degree.
    pub fn is_weighted_homogeneous(&self, weights: &[u32]) -> bool {
        let w = |m: &Monomial| -> u64 { m.exponents().iter().zip(weights).map(|(&e, &x)| e as u64 * x as u64).sum() };
        let mut it = self.terms.iter().map(|(m, _)| w(m));
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    fn t_index(&self) -> Option<usize> {
        self.ring.var_index("t")
    }

    /// Largest `v` with `t^v | p`; `None` stands for +∞ (the zero polynomial).
    pub fn t_valuation(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        match self.t_index() {
            None => Some(0),
            Some(t) => self.terms.iter().map(|(m, _)| m.get(t) as u32).min(),
        }
    }

    /// `p / t^{v(p)}`.
    pub fn t_saturate(&self) -> Result<Polynomial> {
        let v = self.t_valuation().ok_or(Error::ZeroPolynomial)?;
        Ok(self.divide_by_t_power(v))
    }

    /// Exact division by `t^v`; the caller guarantees `v <= t_valuation`.
    pub(crate) fn divide_by_t_power(&self, v: u32) -> Polynomial {
        if v == 0 {
            return self.clone();
        }
        let t = self.t_index().expect("ring has t");
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut n = m.clone();
                n.0[t] -= v as u16;
                (n, c.clone())
            })
            .collect();
        // dividing every term by the same power of one variable keeps grevlex order
        Polynomial { ring: self.ring.clone(), terms }
    }

    /// Image under `t ↦ 0` with coefficients reduced into `residue`; the result lives in
    /// the ring obtained by deleting `t`.
    pub fn reduce_mod_t(&self, residue: CoeffField) -> Result<Polynomial> {
        let target = residue_ring(&self.ring, residue)?;
        self.reduce_mod_t_into(&target)
    }

    pub fn reduce_mod_t_into(&self, target: &RingRef) -> Result<Polynomial> {
        let t = self.t_index();
        let field = target.field();
        let mut terms = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            if let Some(t) = t {
                if m.get(t) > 0 {
                    continue;
                }
            }
            let c = field.convert(c)?;
            terms.push((remap_monomial(&self.ring, target, m, t)?, c));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Moves the polynomial into another ring by variable name; variables absent from the
    /// target must not occur.
    pub fn map_to_ring(&self, target: &RingRef) -> Result<Polynomial> {
        let field = target.field();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((remap_monomial(&self.ring, target, m, None)?, field.convert(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::from_terms(target, terms))
    }

    pub fn substitute(&self, sub: &Substitution) -> Result<Polynomial> {
        sub.apply(self)
    }

    /// Evaluates every variable at the given scalars.
    pub fn evaluate(&self, point: &[Scalar]) -> Scalar {
        let mut acc = self.field().zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    v = v.mul(&point[i].pow(e as u32));
                }
            }
            acc = acc.add(&v);
        }
        acc
    }

    /// Variables that occur in some term.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars()).filter(|&v| self.terms.iter().any(|(m, _)| m.get(v) > 0)).collect()
    }
}

fn remap_monomial(src: &Ring, target: &RingRef, m: &Monomial, skip: Option<usize>) -> Result<Monomial> {
    let mut out = Monomial::one(target.nvars());
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 || Some(i) == skip {
            continue;
        }
        let name = src.var_name(i);
        let j = target.var_index(name).ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        out.0[j] = e;
    }
    Ok(out)
}

/// The ring with variable `t` removed, over the residue field.
pub fn residue_ring(ring: &Ring, residue: CoeffField) -> Result<RingRef> {
    let blocks: Vec<(String, Vec<String>)> = ring
        .owned_blocks()
        .into_iter()
        .map(|(n, vs)| (n, vs.into_iter().filter(|v| v != "t").collect::<Vec<_>>()))
        .filter(|(_, vs)| !vs.is_empty())
        .collect();
    Ring::new(residue, blocks)
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::format_polynomial(self))
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$inner(rhs).expect("polynomial arithmetic across rings")
            }
        }
        impl $trait<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$inner(&rhs).expect("polynomial arithmetic across rings")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect();
        Polynomial { ring: self.ring.clone(), terms }
    }
}

/// A ring homomorphism given by variable images in a common target ring.
///
/// When `total` is false, variables without an image are sent to the variable of the
/// same name in the target.
#[derive(Clone, Debug)]
pub struct Substitution {
    source: RingRef,
    target: RingRef,
    images: Vec<Option<Polynomial>>,
    total: bool,
}

impl Substitution {
    pub fn new(source: &RingRef, target: &RingRef, total: bool) -> Self {
        Substitution {
            source: source.clone(),
            target: target.clone(),
            images: vec![None; source.nvars()],
            total,
        }
    }

    pub fn set(&mut self, var: &str, image: Polynomial) -> Result<&mut Self> {
        let i = self.source.var_index(var).ok_or_else(|| Error::UnknownVariable(var.into()))?;
        self.set_index(i, image)
    }

    pub fn set_index(&mut self, var: usize, image: Polynomial) -> Result<&mut Self> {
        if !same_ring(image.ring(), &self.target) {
            return Err(Error::RingMismatch);
        }
        self.images[var] = Some(image);
        Ok(self)
    }

    pub fn target(&self) -> &RingRef {
        &self.target
    }

    fn image(&self, var: usize) -> Result<Polynomial> {
        match &self.images[var] {
            Some(p) => Ok(p.clone()),
            None if self.total => Err(Error::UnassignedVariable(self.source.var_name(var).into())),
            None => Polynomial::var(&self.target, self.source.var_name(var)),
        }
    }

    pub fn apply(&self, p: &Polynomial) -> Result<Polynomial> {
        if !same_ring(p.ring(), &self.source) {
            return Err(Error::RingMismatch);
        }
        let field = self.target.field();
        // cache of powers per variable
        let mut powers: HashMap<(usize, u16), Polynomial> = HashMap::new();
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in p.terms() {
            let mut term = Polynomial::constant(&self.target, field.convert(c)?);
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = match powers.get(&(v, e)) {
                    Some(q) => q.clone(),
                    None => {
                        let q = self.image(v)?.pow(e as u32);
                        powers.insert((v, e), q.clone());
                        q
                    }
                };
                term = term.try_mul(&pw)?;
                if term.is_zero() {
                    break;
                }
            }
            for (n, d) in term.into_terms() {
                match acc.get_mut(&n) {
                    Some(x) => *x = x.add(&d),
                    None => {
                        acc.insert(n, d);
                    }
                }
            }
        }
        Ok(Polynomial::from_terms(&self.target, acc.into_iter().collect()))
    }
}

/// `t^offset · poly`, used where inverse powers of the uniformizer appear.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TScaled {
    pub offset: i32,
    pub poly: Polynomial,
}

impl TScaled {
    pub fn new(offset: i32, poly: Polynomial) -> Self {
        TScaled { offset, poly }.normalized()
    }

    pub fn integral(poly: Polynomial) -> Self {
        TScaled::new(0, poly)
    }

    /// Moves the t-valuation of the polynomial part into the offset.
    pub fn normalized(self) -> Self {
        match self.poly.t_valuation() {
            None => TScaled { offset: 0, poly: self.poly },
            Some(v) => TScaled {
                offset: self.offset + v as i32,
                poly: self.poly.divide_by_t_power(v),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// True when the value lies in `R[x]` (no negative power of t survives).
    pub fn is_integral(&self) -> bool {
        self.poly.is_zero() || self.offset >= 0
    }

    /// The polynomial `t^{offset + k} · poly`; requires a nonnegative exponent.
    pub fn times_t_power(&self, k: i32) -> Result<Polynomial> {
        let e = self.offset + k;
        if self.poly.is_zero() {
            return Ok(self.poly.clone());
        }
        if e < 0 {
            return Err(Error::InvalidInput(format!("negative t-power {e} remains")));
        }
        t_power_times(&self.poly, e as u32)
    }

    /// Polynomial value, failing when a negative t-power remains.
    pub fn to_integral(&self) -> Result<Polynomial> {
        self.times_t_power(0)
    }

    pub fn mul(&self, other: &TScaled) -> Result<TScaled> {
        Ok(TScaled::new(self.offset + other.offset, self.poly.try_mul(&other.poly)?))
    }

    pub fn add(&self, other: &TScaled) -> Result<TScaled> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let base = self.offset.min(other.offset);
        let a = t_power_times(&self.poly, (self.offset - base) as u32)?;
        let b = t_power_times(&other.poly, (other.offset - base) as u32)?;
        Ok(TScaled::new(base, a.try_add(&b)?))
    }

    pub fn pow(&self, e: u32) -> TScaled {
        TScaled::new(self.offset * e as i32, self.poly.pow(e))
    }

    pub fn scale(&self, c: &Scalar) -> TScaled {
        TScaled::new(self.offset, self.poly.scale(c))
    }
}

/// `t^e · p`.
pub fn t_power_times(p: &Polynomial, e: u32) -> Result<Polynomial> {
    if e == 0 || p.is_zero() {
        return Ok(p.clone());
    }
    let t = p.ring().var_index("t").ok_or_else(|| Error::UnknownVariable("t".into()))?;
    let e = u16::try_from(e).map_err(|_| Error::ExponentOverflow)?;
    p.mul_monomial(&Monomial::var(p.ring().nvars(), t, e))
}

/// All 2×2 minors of a matrix of polynomials, in row-major pair order
/// (row pairs outer, column pairs inner).
pub fn minors_2x2(matrix: &[Vec<Polynomial>]) -> Result<Vec<Polynomial>> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, |r| r.len());
    if rows < 2 || cols < 2 || matrix.iter().any(|r| r.len() != cols) {
        return Err(Error::MatrixShape(format!("{rows}x{cols}")));
    }
    let mut out = Vec::new();
    for r1 in 0..rows {
        for r2 in r1 + 1..rows {
            for c1 in 0..cols {
                for c2 in c1 + 1..cols {
                    let a = matrix[r1][c1].try_mul(&matrix[r2][c2])?;
                    let b = matrix[r2][c1].try_mul(&matrix[r1][c2])?;
                    out.push(a.try_sub(&b)?);
                }
            }
        }
    }
    Ok(out)
}
