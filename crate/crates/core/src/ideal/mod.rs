//! Ideals: reduced Gröbner bases, normal forms, elimination, saturation, intersection,
//! radical membership and syzygies.

mod field;
mod gb;

use std::fmt;
use std::sync::{Arc, Mutex};

use field::{Field, Fp, Qq};
use gb::{Engine, Poly};
pub use gb::STEP_LIMIT_VAR;

use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::poly::Polynomial;
use crate::ring::{same_ring, Ring, RingRef};
use crate::scalar::CoeffField;

type Basis = Arc<Vec<Polynomial>>;

/// Generators plus cached reduced Gröbner bases, one per order requested so far.
pub struct IdealHandle {
    ring: RingRef,
    gens: Vec<Polynomial>,
    cache: Mutex<Vec<(MonomialOrder, Basis)>>,
}

impl Clone for IdealHandle {
    fn clone(&self) -> Self {
        IdealHandle {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl fmt::Debug for IdealHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{:?}", self.generator_strings())
    }
}

impl IdealHandle {
    pub fn new(ring: &RingRef, gens: Vec<Polynomial>) -> Result<Self> {
        if gens.iter().any(|g| !same_ring(g.ring(), ring)) {
            return Err(Error::RingMismatch);
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(IdealHandle { ring: ring.clone(), gens, cache: Mutex::new(Vec::new()) })
    }

    pub fn zero(ring: &RingRef) -> Self {
        IdealHandle { ring: ring.clone(), gens: Vec::new(), cache: Mutex::new(Vec::new()) }
    }

    pub fn unit(ring: &RingRef) -> Self {
        IdealHandle::new(ring, vec![Polynomial::one(ring)]).unwrap()
    }

    /// A handle whose generators are already the reduced basis for `order`.
    fn from_basis(ring: &RingRef, basis: Vec<Polynomial>, order: MonomialOrder) -> Self {
        let h = IdealHandle::new(ring, basis.clone()).unwrap();
        h.cache.lock().unwrap().push((order, Arc::new(basis)));
        h
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.to_string()).collect()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// Adds a generator; cached bases are discarded.
    pub fn push(&mut self, g: Polynomial) -> Result<()> {
        if !same_ring(g.ring(), &self.ring) {
            return Err(Error::RingMismatch);
        }
        if !g.is_zero() {
            self.gens.push(g);
            self.cache.get_mut().unwrap().clear();
        }
        Ok(())
    }

    pub fn cached_basis(&self, order: &MonomialOrder) -> Option<Basis> {
        self.cache.lock().unwrap().iter().find(|(o, _)| o == order).map(|(_, b)| b.clone())
    }

    /// The reduced monic Gröbner basis under `order`, sorted by increasing leading monomial.
    pub fn groebner_basis(&self, order: &MonomialOrder) -> Result<Basis> {
        if let Some(b) = self.cached_basis(order) {
            return Ok(b);
        }
        order.validate(self.ring.nvars())?;
        let basis = Arc::new(dispatch_gb(&self.ring, order, &self.gens)?);
        let mut cache = self.cache.lock().unwrap();
        if let Some((_, b)) = cache.iter().find(|(o, _)| o == order) {
            return Ok(b.clone());
        }
        cache.push((order.clone(), basis.clone()));
        Ok(basis)
    }

    pub fn grevlex_basis(&self) -> Result<Basis> {
        self.groebner_basis(&MonomialOrder::Grevlex)
    }

    pub fn normal_form(&self, p: &Polynomial, order: &MonomialOrder) -> Result<Polynomial> {
        check_ring(p, &self.ring)?;
        let basis = self.groebner_basis(order)?;
        Ok(dispatch_nf(&self.ring, order, p, &basis))
    }

    /// Normal form together with cofactors with respect to the reduced basis:
    /// `p = Σ q_i·basis_i + r`.
    pub fn normal_form_with_cofactors(&self, p: &Polynomial, order: &MonomialOrder) -> Result<(Basis, Vec<Polynomial>, Polynomial)> {
        check_ring(p, &self.ring)?;
        let basis = self.groebner_basis(order)?;
        let (q, r) = dispatch_divide(&self.ring, order, p, &basis);
        Ok((basis, q, r))
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p, &MonomialOrder::Grevlex)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &IdealHandle) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_unit(&self) -> Result<bool> {
        let b = self.grevlex_basis()?;
        Ok(b.len() == 1 && b[0].is_constant() && !b[0].is_zero())
    }

    /// The same ideal with generators moved to another ring by variable name.
    pub fn map_to_ring(&self, target: &RingRef) -> Result<IdealHandle> {
        let gens = self.gens.iter().map(|g| g.map_to_ring(target)).collect::<Result<Vec<_>>>()?;
        IdealHandle::new(target, gens)
    }
}

fn check_ring(p: &Polynomial, ring: &RingRef) -> Result<()> {
    if same_ring(p.ring(), ring) {
        Ok(())
    } else {
        Err(Error::RingMismatch)
    }
}

fn to_internal<F: Field>(eng: &Engine<F>, p: &Polynomial) -> Poly<F::E> {
    eng.poly_from(p.terms().iter().map(|(m, c)| (m.clone(), eng.field.from_scalar(c))).collect())
}

fn from_internal<F: Field>(eng: &Engine<F>, ring: &RingRef, p: Poly<F::E>) -> Polynomial {
    Polynomial::from_terms(ring, p.terms.into_iter().map(|t| (t.m, eng.field.to_scalar(&t.c))).collect())
}

macro_rules! with_field {
    ($ring:expr, $f:ident => $body:expr) => {
        match $ring.field() {
            CoeffField::Prime(p) => {
                let $f = Fp { p };
                $body
            }
            CoeffField::Rational => {
                let $f = Qq;
                $body
            }
        }
    };
}

fn gb_generic<F: Field>(field: F, ring: &RingRef, order: &MonomialOrder, gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    let eng = Engine::new(field, order, ring.nvars());
    let basis = eng.groebner(gens.iter().map(|g| to_internal(&eng, g)).collect())?;
    Ok(basis.into_iter().map(|p| from_internal(&eng, ring, p)).collect())
}

fn dispatch_gb(ring: &RingRef, order: &MonomialOrder, gens: &[Polynomial]) -> Result<Vec<Polynomial>> {
    with_field!(ring, f => gb_generic(f, ring, order, gens))
}

fn nf_generic<F: Field>(field: F, ring: &RingRef, order: &MonomialOrder, p: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    let eng = Engine::new(field, order, ring.nvars());
    let b: Vec<_> = basis.iter().map(|g| to_internal(&eng, g)).collect();
    let r = eng.normal_form(to_internal(&eng, p), &b);
    from_internal(&eng, ring, r)
}

fn dispatch_nf(ring: &RingRef, order: &MonomialOrder, p: &Polynomial, basis: &[Polynomial]) -> Polynomial {
    with_field!(ring, f => nf_generic(f, ring, order, p, basis))
}

fn divide_generic<F: Field>(field: F, ring: &RingRef, order: &MonomialOrder, p: &Polynomial, basis: &[Polynomial]) -> (Vec<Polynomial>, Polynomial) {
    let eng = Engine::new(field, order, ring.nvars());
    let b: Vec<_> = basis.iter().map(|g| to_internal(&eng, g)).collect();
    let (q, r) = eng.divide(to_internal(&eng, p), &b);
    (q.into_iter().map(|x| from_internal(&eng, ring, x)).collect(), from_internal(&eng, ring, r))
}

fn dispatch_divide(ring: &RingRef, order: &MonomialOrder, p: &Polynomial, basis: &[Polynomial]) -> (Vec<Polynomial>, Polynomial) {
    with_field!(ring, f => divide_generic(f, ring, order, p, basis))
}

fn criterion_generic<F: Field>(field: F, ring: &RingRef, order: &MonomialOrder, basis: &[Polynomial]) -> bool {
    let eng = Engine::new(field, order, ring.nvars());
    let b: Vec<_> = basis.iter().map(|g| to_internal(&eng, g)).collect();
    eng.buchberger_criterion(&b)
}

/// Whether every S-polynomial of `basis` reduces to zero modulo `basis` under `order`.
pub fn buchberger_criterion(ring: &RingRef, order: &MonomialOrder, basis: &[Polynomial]) -> bool {
    with_field!(ring, f => criterion_generic(f, ring, order, basis))
}

/// Leading monomial under `order`.
pub fn leading_monomial(p: &Polynomial, order: &MonomialOrder) -> Option<Monomial> {
    p.leading_term(order).map(|(m, _)| m.clone())
}

/// Equality of ideals by comparing reduced grevlex bases.
pub fn ideal_equal(a: &IdealHandle, b: &IdealHandle) -> Result<bool> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::RingMismatch);
    }
    Ok(*a.grevlex_basis()? == *b.grevlex_basis()?)
}

fn fresh_names(ring: &Ring, prefix: char, count: usize) -> Vec<String> {
    (1..)
        .map(|k| format!("{prefix}{k}"))
        .filter(|n| ring.var_index(n).is_none())
        .take(count)
        .collect()
}

/// Elements of `I ∩ k[retained]`, kept in the ring of `I`.
pub fn eliminate_vars(ideal: &IdealHandle, vars: &[usize]) -> Result<Vec<Polynomial>> {
    let order = MonomialOrder::elimination(ideal.ring().nvars(), vars);
    let basis = ideal.groebner_basis(&order)?;
    Ok(basis
        .iter()
        .filter(|g| g.terms().iter().all(|(m, _)| vars.iter().all(|&v| m.get(v) == 0)))
        .cloned()
        .collect())
}

/// `I ∩ k[retained blocks]`, returned in the ring without the removed blocks.
pub fn eliminate(ideal: &IdealHandle, blocks: &[&str]) -> Result<IdealHandle> {
    let ring = ideal.ring();
    let mut vars = Vec::new();
    for name in blocks {
        let b = ring.block(name).ok_or_else(|| Error::InvalidInput(format!("no block `{name}`")))?;
        vars.extend(b.range.clone());
    }
    if vars.len() == ring.nvars() {
        return Err(Error::InvalidInput("cannot eliminate every block".into()));
    }
    let kept = eliminate_vars(ideal, &vars)?;
    let target = ring.without_blocks(blocks)?;
    let gens = kept.iter().map(|g| g.map_to_ring(&target)).collect::<Result<Vec<_>>>()?;
    IdealHandle::new(&target, gens)
}

/// Runs a computation in `ring` extended by one fresh auxiliary variable placed first.
fn with_aux(ring: &RingRef) -> Result<(RingRef, Polynomial)> {
    let name = ring.fresh_aux_name();
    let ext = ring.prepend_block("aux", vec![name.clone()])?;
    let y = Polynomial::var(&ext, &name)?;
    Ok((ext, y))
}

fn lift_all(gens: &[Polynomial], ext: &RingRef) -> Result<Vec<Polynomial>> {
    gens.iter().map(|g| g.map_to_ring(ext)).collect()
}

/// `I : f^∞` by the Rabinowitsch construction `I + ⟨1 − y·f⟩` followed by eliminating `y`.
pub fn saturate_rabinowitsch(ideal: &IdealHandle, f: &Polynomial) -> Result<IdealHandle> {
    let ring = ideal.ring();
    let (ext, y) = with_aux(ring)?;
    let mut gens = lift_all(ideal.generators(), &ext)?;
    let fy = f.map_to_ring(&ext)?;
    gens.push(&Polynomial::one(&ext) - &(&y * &fy));
    let ext_ideal = IdealHandle::new(&ext, gens)?;
    let kept = eliminate_vars(&ext_ideal, &[0])?;
    let gens = kept.iter().map(|g| g.map_to_ring(ring)).collect::<Result<Vec<_>>>()?;
    IdealHandle::new(ring, gens)
}

/// `I : x_var^∞`. When every generator is homogeneous for the positive `grading`
/// (or for the standard grading if none is given), a single Gröbner basis in a
/// weighted reverse-lexicographic order with `x_var` last suffices.
pub fn saturate_by_variable(ideal: &IdealHandle, var: usize, grading: Option<&[u32]>) -> Result<IdealHandle> {
    let ring = ideal.ring();
    let n = ring.nvars();
    let ones = vec![1u32; n];
    let weights: Option<Vec<u32>> = match grading {
        Some(w) if w.len() == n && w.iter().all(|&x| x > 0) && ideal.generators().iter().all(|g| g.is_weighted_homogeneous(w)) => Some(w.to_vec()),
        _ if ideal.generators().iter().all(|g| g.is_homogeneous()) => Some(ones),
        _ => None,
    };
    let Some(weights) = weights else {
        return saturate_rabinowitsch(ideal, &Polynomial::var_at(ring, var));
    };
    let mut tie: Vec<usize> = (0..n).filter(|&v| v != var).collect();
    tie.push(var);
    let order = MonomialOrder::Weighted { weights: vec![weights], tie };
    let basis = ideal.groebner_basis(&order)?;
    let divided: Vec<Polynomial> = basis
        .iter()
        .map(|g| {
            let v = g.terms().iter().map(|(m, _)| m.get(var)).min().unwrap_or(0);
            if v == 0 {
                g.clone()
            } else {
                let terms = g
                    .terms()
                    .iter()
                    .map(|(m, c)| {
                        let mut m = m.clone();
                        m.0[var] -= v;
                        (m, c.clone())
                    })
                    .collect();
                Polynomial::from_terms(ring, terms)
            }
        })
        .collect();
    // the divided elements form a Gröbner basis for the same order; reduce it
    let reduced = dispatch_interreduce(ring, &order, &divided);
    Ok(IdealHandle::from_basis(ring, reduced, order))
}

/// `I : (∏ vars)^∞` for generators that need not be homogeneous for the positive
/// `grading`: homogenize with an auxiliary variable of weight 1, saturate by it and then
/// by each of `vars` with weighted bases, and finally set the auxiliary variable to 1.
pub fn saturate_homogenized(ideal: &IdealHandle, vars: &[usize], grading: &[u32]) -> Result<IdealHandle> {
    let ring = ideal.ring();
    let n = ring.nvars();
    if grading.len() != n || grading.contains(&0) || vars.iter().any(|&v| v >= n) {
        return Err(Error::InvalidInput("grading must be positive with one weight per variable".into()));
    }
    let aux = ring.fresh_aux_name();
    let ext = ring.prepend_block(&format!("H{aux}"), vec![aux.clone()])?;
    let mut weights = vec![1u32];
    weights.extend_from_slice(grading);
    let weight = |m: &Monomial| (0..n).map(|v| grading[v] as u64 * m.get(v) as u64).sum::<u64>();
    let mut gens = Vec::new();
    for g in ideal.generators() {
        let top = g.terms().iter().map(|(m, _)| weight(m)).max().unwrap_or(0);
        let mut terms = Vec::new();
        for (m, c) in g.terms() {
            let mut exps = vec![u16::try_from(top - weight(m)).map_err(|_| Error::ExponentOverflow)?];
            exps.extend((0..n).map(|v| m.get(v)));
            terms.push((Monomial::from_exponents(&exps), c.clone()));
        }
        gens.push(Polynomial::from_terms(&ext, terms));
    }
    let mut cur = IdealHandle::new(&ext, gens)?;
    cur = saturate_by_variable(&cur, 0, Some(&weights))?;
    for &v in vars {
        cur = saturate_by_variable(&cur, v + 1, Some(&weights))?;
    }
    let mut sub = crate::poly::Substitution::new(&ext, ring, false);
    sub.set(&aux, Polynomial::one(ring))?;
    let gens = cur.generators().iter().map(|g| g.substitute(&sub)).collect::<Result<Vec<_>>>()?;
    IdealHandle::new(ring, gens.into_iter().filter(|g| !g.is_zero()).collect())
}

fn interreduce_generic<F: Field>(field: F, ring: &RingRef, order: &MonomialOrder, basis: &[Polynomial]) -> Vec<Polynomial> {
    let eng = Engine::new(field, order, ring.nvars());
    let b: Vec<_> = basis.iter().map(|g| to_internal(&eng, g)).collect();
    eng.interreduce(b).into_iter().map(|p| from_internal(&eng, ring, p)).collect()
}

fn dispatch_interreduce(ring: &RingRef, order: &MonomialOrder, basis: &[Polynomial]) -> Vec<Polynomial> {
    with_field!(ring, f => interreduce_generic(f, ring, order, basis))
}

/// `I : f^∞`. Monomials are handled one variable at a time.
pub fn saturate(ideal: &IdealHandle, f: &Polynomial) -> Result<IdealHandle> {
    check_ring(f, ideal.ring())?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() || ideal.is_zero_ideal() {
        return Ok(ideal.clone());
    }
    if f.len() == 1 {
        let mut cur = ideal.clone();
        for v in f.support_vars() {
            cur = saturate_by_variable(&cur, v, None)?;
        }
        return Ok(cur);
    }
    saturate_rabinowitsch(ideal, f)
}

/// `I ∩ J` as the elimination of `w` from `w·I + (1 − w)·J`.
pub fn intersect(a: &IdealHandle, b: &IdealHandle) -> Result<IdealHandle> {
    if !same_ring(a.ring(), b.ring()) {
        return Err(Error::RingMismatch);
    }
    let ring = a.ring();
    if a.is_zero_ideal() || b.is_zero_ideal() {
        return Ok(IdealHandle::zero(ring));
    }
    let (ext, w) = with_aux(ring)?;
    let one_minus_w = &Polynomial::one(&ext) - &w;
    let mut gens = Vec::new();
    for g in lift_all(a.generators(), &ext)? {
        gens.push(&w * &g);
    }
    for g in lift_all(b.generators(), &ext)? {
        gens.push(&one_minus_w * &g);
    }
    let kept = eliminate_vars(&IdealHandle::new(&ext, gens)?, &[0])?;
    let gens = kept.iter().map(|g| g.map_to_ring(ring)).collect::<Result<Vec<_>>>()?;
    IdealHandle::new(ring, gens)
}

/// Whether the homogeneous ideal (in `vars`) has no projective zero over an algebraic
/// closure of the fraction field of the remaining variables. Uses one basis for an
/// elimination order on `vars`, whose `vars`-leading monomials form a basis over that field.
pub fn projectively_empty(ideal: &IdealHandle, vars: &[usize]) -> Result<bool> {
    let ring = ideal.ring();
    if vars.iter().any(|&v| v >= ring.nvars()) {
        return Err(Error::InvalidInput("variable index out of range".into()));
    }
    let order = MonomialOrder::elimination(ring.nvars(), vars);
    let basis = ideal.groebner_basis(&order)?;
    let leads: Vec<Monomial> = basis.iter().filter_map(|g| leading_monomial(g, &order)).collect();
    let x_part = |m: &Monomial| vars.iter().map(|&v| (v, m.get(v))).filter(|(_, e)| *e > 0).collect::<Vec<_>>();
    if leads.iter().any(|m| x_part(m).is_empty()) {
        return Ok(true);
    }
    Ok(vars.iter().all(|&v| {
        leads.iter().any(|m| {
            let xs = x_part(m);
            xs.len() == 1 && xs[0].0 == v
        })
    }))
}

/// `f ∈ √I`, decided by whether `I + ⟨1 − y·f⟩` is the unit ideal.
pub fn radical_membership(f: &Polynomial, ideal: &IdealHandle) -> Result<bool> {
    check_ring(f, ideal.ring())?;
    if f.is_zero() || ideal.contains(f)? {
        return Ok(true);
    }
    let (ext, y) = with_aux(ideal.ring())?;
    let mut gens = lift_all(ideal.generators(), &ext)?;
    gens.push(&Polynomial::one(&ext) - &(&y * &f.map_to_ring(&ext)?));
    IdealHandle::new(&ext, gens)?.is_unit()
}

/// Generators of the syzygy module of a row, with a module Gröbner basis kept for
/// membership tests.
#[derive(Clone, Debug)]
pub struct SyzygyBasis {
    ring: RingRef,
    row: Vec<Polynomial>,
    relations: Vec<Vec<Polynomial>>,
    tag_ring: RingRef,
    tags: Vec<usize>,
    order: MonomialOrder,
    module_basis: Vec<Polynomial>,
}

impl SyzygyBasis {
    pub fn relations(&self) -> &[Vec<Polynomial>] {
        &self.relations
    }

    pub fn row(&self) -> &[Polynomial] {
        &self.row
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    /// `Σ s_j·f_j`
    pub fn evaluate(&self, s: &[Polynomial]) -> Result<Polynomial> {
        if s.len() != self.row.len() {
            return Err(Error::InvalidInput("relation length differs from row length".into()));
        }
        let mut acc = Polynomial::zero(&self.ring);
        for (a, f) in s.iter().zip(&self.row) {
            acc = acc.try_add(&a.try_mul(f)?)?;
        }
        Ok(acc)
    }

    /// Whether `s` lies in the submodule generated by the relations.
    pub fn contains(&self, s: &[Polynomial]) -> Result<bool> {
        if s.len() != self.row.len() {
            return Err(Error::InvalidInput("relation length differs from row length".into()));
        }
        let v = self.encode(s)?;
        Ok(dispatch_nf(&self.tag_ring, &self.order, &v, &self.module_basis).is_zero())
    }

    fn encode(&self, s: &[Polynomial]) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(&self.tag_ring);
        for (a, &e) in s.iter().zip(&self.tags) {
            let a = a.map_to_ring(&self.tag_ring)?;
            acc = &acc + &(&a * &Polynomial::var_at(&self.tag_ring, e));
        }
        Ok(acc)
    }
}

/// Syzygies of `row` through positional tag variables: the module generated by
/// `f_j·z + e_j` is encoded as an ideal modulo all products of two tags, and the
/// relations are the tag-linear basis elements free of `z`.
pub fn syzygies(row: &[Polynomial]) -> Result<SyzygyBasis> {
    let first = row.first().ok_or_else(|| Error::InvalidInput("empty row".into()))?;
    let ring = first.ring().clone();
    for f in row {
        check_ring(f, &ring)?;
    }
    let m = row.len();
    let z_name = ring.fresh_aux_name();
    let tag_names = fresh_names(&ring, 'e', m);
    let mut blocks = vec![("aux".to_string(), vec![z_name.clone()])];
    blocks.extend(ring.owned_blocks());
    blocks.push(("tags".to_string(), tag_names.clone()));
    let tag_ring = Ring::new(ring.field(), blocks)?;
    let z = Polynomial::var(&tag_ring, &z_name)?;
    let tags: Vec<usize> = tag_names.iter().map(|n| tag_ring.var_index(n).unwrap()).collect();
    let tag_polys: Vec<Polynomial> = tags.iter().map(|&e| Polynomial::var_at(&tag_ring, e)).collect();

    let mut gens = Vec::new();
    for (f, e) in row.iter().zip(&tag_polys) {
        gens.push(&(&f.map_to_ring(&tag_ring)? * &z) + e);
    }
    let mut all_tags = vec![z.clone()];
    all_tags.extend(tag_polys.iter().cloned());
    for i in 0..all_tags.len() {
        for j in i..all_tags.len() {
            gens.push(&all_tags[i] * &all_tags[j]);
        }
    }
    let order = MonomialOrder::elimination(tag_ring.nvars(), &[0]);
    let basis = IdealHandle::new(&tag_ring, gens)?.groebner_basis(&order)?;
    let tag_degree = |mono: &Monomial| -> u32 { mono.get(0) as u32 + tags.iter().map(|&e| mono.get(e) as u32).sum::<u32>() };
    let module_basis: Vec<Polynomial> = basis
        .iter()
        .filter(|g| g.terms().iter().all(|(mono, _)| mono.get(0) == 0 && tag_degree(mono) == 1))
        .cloned()
        .collect();

    let mut relations = Vec::new();
    for g in &module_basis {
        let mut rel = vec![Polynomial::zero(&ring); m];
        for (j, &e) in tags.iter().enumerate() {
            let part: Vec<_> = g
                .terms()
                .iter()
                .filter(|(mono, _)| mono.get(e) == 1)
                .map(|(mono, c)| {
                    let mut mono = mono.clone();
                    mono.0[e] = 0;
                    (mono, c.clone())
                })
                .collect();
            rel[j] = Polynomial::from_terms(&tag_ring, part).map_to_ring(&ring)?;
        }
        relations.push(rel);
    }
    Ok(SyzygyBasis { ring, row: row.to_vec(), relations, tag_ring, tags, order, module_basis })
}
