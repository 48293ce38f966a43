//! Buchberger's algorithm with the sugar strategy and the Gebauer–Möller criteria.
//!
//! Every supported monomial order is a matrix order, so each monomial carries an integer
//! key whose lexicographic comparison is the order. Keys are additive, which makes
//! multiplication by a monomial cheap.

use std::cmp::Ordering;

use smallvec::SmallVec;

use super::field::Field;
use crate::error::{Error, Result};
use crate::monomial::Monomial;
use crate::order::{InnerOrder, MonomialOrder};

pub(crate) type Key = SmallVec<[i32; 16]>;

/// Environment variable capping the number of S-pair reductions per computation.
pub const STEP_LIMIT_VAR: &str = "MUSTAFIN_GB_STEP_LIMIT";

fn step_limit() -> Option<u64> {
    std::env::var(STEP_LIMIT_VAR).ok().and_then(|v| v.trim().parse().ok())
}

/// Sparse rows of the order matrix.
#[derive(Clone, Debug)]
pub(crate) struct OrderMatrix {
    rows: Vec<Vec<(usize, i32)>>,
}

impl OrderMatrix {
    pub fn new(order: &MonomialOrder, nvars: usize) -> Self {
        let mut rows: Vec<Vec<(usize, i32)>> = Vec::new();
        let grevlex_block = |rows: &mut Vec<Vec<(usize, i32)>>, vars: &[usize]| {
            if vars.is_empty() {
                return;
            }
            rows.push(vars.iter().map(|&v| (v, 1)).collect());
            for &v in vars[1..].iter().rev() {
                rows.push(vec![(v, -1)]);
            }
        };
        match order {
            MonomialOrder::Lex => rows.extend((0..nvars).map(|v| vec![(v, 1)])),
            MonomialOrder::Grevlex => grevlex_block(&mut rows, &(0..nvars).collect::<Vec<_>>()),
            MonomialOrder::Block { blocks, inner } => {
                for blk in blocks {
                    match inner {
                        InnerOrder::Grevlex => grevlex_block(&mut rows, blk),
                        InnerOrder::Lex => rows.extend(blk.iter().map(|&v| vec![(v, 1)])),
                    }
                }
            }
            MonomialOrder::Weighted { weights, tie } => {
                for w in weights {
                    rows.push(w.iter().enumerate().filter(|(_, &x)| x != 0).map(|(v, &x)| (v, x as i32)).collect());
                }
                for &v in tie.iter().rev() {
                    rows.push(vec![(v, -1)]);
                }
            }
        }
        OrderMatrix { rows }
    }

    pub fn key(&self, m: &Monomial) -> Key {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(v, w)| w * m.get(v) as i32).sum())
            .collect()
    }
}

fn key_add(a: &Key, b: &Key) -> Key {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

fn key_sub(a: &Key, b: &Key) -> Key {
    a.iter().zip(b.iter()).map(|(x, y)| x - y).collect()
}

#[derive(Clone, Debug)]
pub(crate) struct Term<E> {
    pub m: Monomial,
    pub k: Key,
    pub c: E,
}

/// Terms in strictly descending order.
#[derive(Clone, Debug)]
pub(crate) struct Poly<E> {
    pub terms: Vec<Term<E>>,
}

impl<E> Poly<E> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug)]
struct Elem<E> {
    poly: Poly<E>,
    mask: u64,
    sugar: u32,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    mask: u64,
    key: Key,
    sugar: u32,
}

pub(crate) struct Engine<F: Field> {
    pub field: F,
    pub om: OrderMatrix,
    sugar_weights: Vec<u32>,
    /// Reduce tails during the main loop (not only at the end).
    pub full_reduction: bool,
}

impl<F: Field> Engine<F> {
    pub fn new(field: F, order: &MonomialOrder, nvars: usize) -> Self {
        let sugar_weights = match order {
            MonomialOrder::Weighted { weights, .. } => weights[0].iter().map(|&w| w.max(1)).collect(),
            _ => vec![1; nvars],
        };
        Engine {
            field,
            om: OrderMatrix::new(order, nvars),
            sugar_weights,
            full_reduction: true,
        }
    }

    fn sdeg(&self, m: &Monomial) -> u32 {
        m.exponents().iter().zip(&self.sugar_weights).map(|(&e, &w)| e as u32 * w).sum()
    }

    fn poly_sugar(&self, p: &Poly<F::E>) -> u32 {
        p.terms.iter().map(|t| self.sdeg(&t.m)).max().unwrap_or(0)
    }

    /// Builds a polynomial from distinct nonzero terms in any order.
    pub fn poly_from(&self, terms: Vec<(Monomial, F::E)>) -> Poly<F::E> {
        let mut terms: Vec<Term<F::E>> = terms
            .into_iter()
            .filter(|(_, c)| !self.field.is_zero(c))
            .map(|(m, c)| Term { k: self.om.key(&m), m, c })
            .collect();
        terms.sort_by(|a, b| b.k.cmp(&a.k));
        Poly { terms }
    }

    pub fn monic(&self, mut p: Poly<F::E>) -> Poly<F::E> {
        if p.is_zero() || self.field.is_one(&p.terms[0].c) {
            return p;
        }
        let inv = self.field.inv(&p.terms[0].c);
        for t in &mut p.terms {
            t.c = self.field.mul(&t.c, &inv);
        }
        p
    }

    /// `a - c * mono * g`, skipping the first `skip` terms of `g`.
    fn sub_mul<I>(&self, a: I, c: &F::E, mono: &Monomial, mkey: &Key, g: &Poly<F::E>, skip: usize) -> Vec<Term<F::E>>
    where
        I: Iterator<Item = Term<F::E>>,
    {
        let f = &self.field;
        let gt = &g.terms[skip..];
        let mut a = a.peekable();
        let mut out = Vec::with_capacity(a.size_hint().0 + gt.len());
        let mut j = 0;
        let mut shifted: Option<Key> = None;
        while j < gt.len() {
            let Some(head) = a.peek() else { break };
            let sk = shifted.get_or_insert_with(|| key_add(&gt[j].k, mkey));
            match head.k.cmp(sk) {
                Ordering::Greater => out.push(a.next().unwrap()),
                Ordering::Less => {
                    let k = shifted.take().unwrap();
                    out.push(Term {
                        m: gt[j].m.mul(mono),
                        k,
                        c: f.neg(&f.mul(c, &gt[j].c)),
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let mut t = a.next().unwrap();
                    t.c = f.sub_mul(&t.c, c, &gt[j].c);
                    if !f.is_zero(&t.c) {
                        out.push(t);
                    }
                    shifted = None;
                    j += 1;
                }
            }
        }
        out.extend(a);
        while j < gt.len() {
            let k = match shifted.take() {
                Some(k) => k,
                None => key_add(&gt[j].k, mkey),
            };
            out.push(Term {
                m: gt[j].m.mul(mono),
                k,
                c: f.neg(&f.mul(c, &gt[j].c)),
            });
            j += 1;
        }
        out
    }

    fn find_reducer(&self, elems: &[Elem<F::E>], reducers: &[usize], m: &Monomial) -> Option<usize> {
        let mask = m.divmask();
        let mut best: Option<usize> = None;
        for &r in reducers {
            let e = &elems[r];
            if e.mask & !mask != 0 || !e.poly.terms[0].m.divides(m) {
                continue;
            }
            match best {
                Some(b) if elems[b].poly.terms.len() <= e.poly.terms.len() => {}
                _ => best = Some(r),
            }
        }
        best
    }

    /// Reduces `p` by the monic reducers; returns the remainder and its sugar.
    fn reduce(&self, p: Poly<F::E>, mut sugar: u32, elems: &[Elem<F::E>], reducers: &[usize], full: bool) -> (Poly<F::E>, u32) {
        let mut rem: Vec<Term<F::E>> = Vec::new();
        let mut cur = p.terms.into_iter();
        while let Some(lt) = cur.next() {
            match self.find_reducer(elems, reducers, &lt.m) {
                Some(r) => {
                    let g = &elems[r];
                    let mono = g.poly.terms[0].m.quotient_of(&lt.m);
                    let mkey = key_sub(&lt.k, &g.poly.terms[0].k);
                    sugar = sugar.max(g.sugar + self.sdeg(&mono));
                    cur = self.sub_mul(cur, &lt.c, &mono, &mkey, &g.poly, 1).into_iter();
                }
                None => {
                    rem.push(lt);
                    if !full {
                        rem.extend(cur);
                        break;
                    }
                }
            }
        }
        (Poly { terms: rem }, sugar)
    }

    fn spoly(&self, a: &Poly<F::E>, b: &Poly<F::E>, lcm: &Monomial, lcm_key: &Key) -> Poly<F::E> {
        let ma = a.terms[0].m.quotient_of(lcm);
        let ka = key_sub(lcm_key, &a.terms[0].k);
        let mb = b.terms[0].m.quotient_of(lcm);
        let kb = key_sub(lcm_key, &b.terms[0].k);
        let one = self.field.one();
        // a is monic, so ma*a minus its leading term is -(-1)*ma*tail(a)
        let left = self.sub_mul(std::iter::empty(), &self.field.neg(&one), &ma, &ka, a, 1);
        Poly { terms: self.sub_mul(left.into_iter(), &one, &mb, &kb, b, 1) }
    }

    /// Reduced monic Gröbner basis, sorted by increasing leading monomial.
    pub fn groebner(&self, gens: Vec<Poly<F::E>>) -> Result<Vec<Poly<F::E>>> {
        let limit = step_limit();
        let mut elems: Vec<Elem<F::E>> = Vec::new();
        let mut active: Vec<usize> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();

        let mut gens: Vec<Poly<F::E>> = gens.into_iter().filter(|p| !p.is_zero()).collect();
        gens.sort_by(|a, b| a.terms[0].k.cmp(&b.terms[0].k));
        for g in gens {
            let s = self.poly_sugar(&g);
            let (h, s) = self.reduce(g, s, &elems, &active, self.full_reduction);
            if h.is_zero() {
                continue;
            }
            if h.terms[0].m.is_one() {
                return Ok(vec![self.monic(h)]);
            }
            self.insert(self.monic(h), s, &mut elems, &mut active, &mut pairs);
        }

        let mut steps: u64 = 0;
        while !pairs.is_empty() {
            let best = (0..pairs.len())
                .min_by(|&a, &b| pairs[a].sugar.cmp(&pairs[b].sugar).then_with(|| pairs[a].key.cmp(&pairs[b].key)))
                .unwrap();
            let pair = pairs.swap_remove(best);
            steps += 1;
            if let Some(l) = limit {
                if steps > l {
                    return Err(Error::StepLimit(l));
                }
            }
            let sp = self.spoly(&elems[pair.i].poly, &elems[pair.j].poly, &pair.lcm, &pair.key);
            let (h, s) = self.reduce(sp, pair.sugar, &elems, &active, self.full_reduction);
            if h.is_zero() {
                continue;
            }
            if h.terms[0].m.is_one() {
                return Ok(vec![self.monic(h)]);
            }
            self.insert(self.monic(h), s, &mut elems, &mut active, &mut pairs);
        }

        Ok(self.interreduce(active.into_iter().map(|i| elems[i].poly.clone()).collect()))
    }

    fn insert(&self, h: Poly<F::E>, sugar: u32, elems: &mut Vec<Elem<F::E>>, active: &mut Vec<usize>, pairs: &mut Vec<Pair>) {
        let hi = elems.len();
        let hm = h.terms[0].m.clone();
        let hmask = hm.divmask();
        elems.push(Elem { mask: hmask, poly: h, sugar });

        let mk_pair = |g: usize, elems: &[Elem<F::E>]| {
            let gl = &elems[g].poly.terms[0];
            let lcm = hm.lcm(&gl.m);
            let key = self.om.key(&lcm);
            let s = (sugar + self.sdeg(&hm.quotient_of(&lcm))).max(elems[g].sugar + self.sdeg(&gl.m.quotient_of(&lcm)));
            Pair { i: g, j: hi, mask: lcm.divmask(), lcm, key, sugar: s }
        };

        // new pairs, chain criterion among themselves
        let mut c: Vec<Pair> = active.iter().map(|&g| mk_pair(g, elems)).collect();
        let mut d: Vec<Pair> = Vec::new();
        while let Some(p) = c.pop() {
            let coprime = hm.coprime(&elems[p.i].poly.terms[0].m);
            let dominated = c.iter().chain(d.iter()).any(|q| q.mask & !p.mask == 0 && q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                d.push(p);
            }
        }
        let new_pairs = d.into_iter().filter(|p| !hm.coprime(&elems[p.i].poly.terms[0].m));

        // prune old pairs whose lcm is strictly handled through h
        pairs.retain(|p| {
            if hmask & !p.mask != 0 || !hm.divides(&p.lcm) {
                return true;
            }
            let li = hm.lcm(&elems[p.i].poly.terms[0].m);
            let lj = hm.lcm(&elems[p.j].poly.terms[0].m);
            li == p.lcm || lj == p.lcm
        });
        pairs.extend(new_pairs);

        active.retain(|&g| elems[g].mask & hmask != hmask || !hm.divides(&elems[g].poly.terms[0].m));
        active.push(hi);
    }

    /// Turns a minimal basis (no leading term divides another) into the reduced one.
    pub fn interreduce(&self, basis: Vec<Poly<F::E>>) -> Vec<Poly<F::E>> {
        // drop elements whose leading term is divisible by another's
        let mut basis: Vec<Poly<F::E>> = basis.into_iter().filter(|p| !p.is_zero()).map(|p| self.monic(p)).collect();
        basis.sort_by(|a, b| a.terms[0].k.cmp(&b.terms[0].k));
        let mut minimal: Vec<Poly<F::E>> = Vec::new();
        for p in basis {
            if minimal.iter().any(|q| q.terms[0].m.divides(&p.terms[0].m)) {
                continue;
            }
            minimal.push(p);
        }
        let elems: Vec<Elem<F::E>> = minimal
            .iter()
            .map(|p| Elem { mask: p.terms[0].m.divmask(), poly: p.clone(), sugar: 0 })
            .collect();
        let mut out = Vec::with_capacity(minimal.len());
        for (i, p) in minimal.into_iter().enumerate() {
            let others: Vec<usize> = (0..elems.len()).filter(|&j| j != i).collect();
            let mut terms = p.terms;
            let lead = terms.remove(0);
            let (tail, _) = self.reduce(Poly { terms }, 0, &elems, &others, true);
            let mut t = vec![lead];
            t.extend(tail.terms);
            out.push(Poly { terms: t });
        }
        out
    }

    /// Full reduction of `p` by an arbitrary list of polynomials (not necessarily monic).
    pub fn normal_form(&self, p: Poly<F::E>, basis: &[Poly<F::E>]) -> Poly<F::E> {
        let elems: Vec<Elem<F::E>> = basis
            .iter()
            .filter(|b| !b.is_zero())
            .map(|b| {
                let b = self.monic(b.clone());
                Elem { mask: b.terms[0].m.divmask(), poly: b, sugar: 0 }
            })
            .collect();
        let idx: Vec<usize> = (0..elems.len()).collect();
        self.reduce(p, 0, &elems, &idx, true).0
    }

    /// Division algorithm: `p = Σ q_i·basis_i + r` with `r` fully reduced.
    pub fn divide(&self, p: Poly<F::E>, basis: &[Poly<F::E>]) -> (Vec<Poly<F::E>>, Poly<F::E>) {
        let f = &self.field;
        let mut quotients: Vec<Vec<Term<F::E>>> = vec![Vec::new(); basis.len()];
        let masks: Vec<u64> = basis.iter().map(|b| if b.is_zero() { 0 } else { b.terms[0].m.divmask() }).collect();
        let invs: Vec<Option<F::E>> = basis.iter().map(|b| b.terms.first().map(|t| f.inv(&t.c))).collect();
        let mut rem: Vec<Term<F::E>> = Vec::new();
        let mut cur = p.terms.into_iter();
        while let Some(lt) = cur.next() {
            let mask = lt.m.divmask();
            let hit = (0..basis.len()).find(|&i| !basis[i].is_zero() && masks[i] & !mask == 0 && basis[i].terms[0].m.divides(&lt.m));
            match hit {
                Some(i) => {
                    let g = &basis[i];
                    let mono = g.terms[0].m.quotient_of(&lt.m);
                    let mkey = key_sub(&lt.k, &g.terms[0].k);
                    let c = f.mul(&lt.c, invs[i].as_ref().unwrap());
                    cur = self.sub_mul(cur, &c, &mono, &mkey, g, 1).into_iter();
                    quotients[i].push(Term { m: mono, k: mkey, c });
                }
                None => rem.push(lt),
            }
        }
        (quotients.into_iter().map(|terms| Poly { terms }).collect(), Poly { terms: rem })
    }

    /// Whether every S-polynomial of `basis` reduces to zero by `basis`.
    pub fn buchberger_criterion(&self, basis: &[Poly<F::E>]) -> bool {
        let monic: Vec<Poly<F::E>> = basis.iter().filter(|p| !p.is_zero()).map(|p| self.monic(p.clone())).collect();
        for i in 0..monic.len() {
            for j in i + 1..monic.len() {
                let lcm = monic[i].terms[0].m.lcm(&monic[j].terms[0].m);
                let key = self.om.key(&lcm);
                let s = self.spoly(&monic[i], &monic[j], &lcm, &key);
                if !self.normal_form(s, &monic).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}
