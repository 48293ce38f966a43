//! Syzygy bundles on Mustafin models: the substitution `Υ_i` into the plane,
//! admissible lifts, the monomial-factorization construction, and the certificate that
//! the special fiber of the bundle is trivial on every reduced component.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::lattice::inverse3;
use crate::geometry::{block_names, model_ring, plane_ring, LatticeConfiguration, PlaneCurve};
use crate::ideal::{projectively_empty, syzygies, IdealHandle};
use crate::monomial::Monomial;
use crate::poly::{residue_ring, t_power_times, Polynomial, Substitution, TScaled};
use crate::ring::{Ring, RingRef};
use crate::scalar::CoeffField;

/// `n`, `ρ` and degrees `d_1..d_{n+1}` with `0 ≤ d_i ≤ ρ` and `Σ d_i = n·ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeData {
    n: usize,
    rho: u32,
    degrees: Vec<u32>,
}

impl DegreeData {
    pub fn new(n: usize, rho: u32, degrees: Vec<u32>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput("n must be at least 2".into()));
        }
        if rho == 0 {
            return Err(Error::InvalidInput("rho must be at least 1".into()));
        }
        if degrees.len() != n + 1 {
            return Err(Error::InvalidInput(format!("expected {} degrees, got {}", n + 1, degrees.len())));
        }
        if degrees.iter().any(|&d| d > rho) {
            return Err(Error::InvalidInput("every degree must be at most rho".into()));
        }
        if degrees.iter().map(|&d| d as u64).sum::<u64>() != n as u64 * rho as u64 {
            return Err(Error::InvalidInput("degrees must sum to n*rho".into()));
        }
        Ok(DegreeData { n, rho, degrees })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_plus_1(&self) -> usize {
        self.n + 1
    }

    pub fn rho(&self) -> u32 {
        self.rho
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.degrees[i]
    }

    /// `ρ − d_j`, the degree of a lift in block `j`.
    pub fn twist(&self, j: usize) -> u32 {
        self.rho - self.degrees[j]
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i > self.n {
            return Err(Error::InvalidInput(format!("index {} out of range", i + 1)));
        }
        Ok(())
    }
}

/// Block-degree check for a lift at index `i`; `t` is unrestricted.
fn check_lift_degrees(data: &DegreeData, i: usize, f: &Polynomial) -> Result<()> {
    data.check_index(i)?;
    let ring = f.ring();
    for (m, _) in f.terms() {
        for j in 0..data.n_plus_1() {
            let names = block_names(j);
            let mut deg = 0u32;
            for name in &names {
                let v = ring.var_index(name).ok_or_else(|| Error::UnknownVariable(name.clone()))?;
                deg += m.get(v) as u32;
            }
            let want = if j == i { 0 } else { data.twist(j) };
            if deg != want {
                return Err(Error::Multidegree(format!("block {} has degree {deg}, expected {want}", j + 1)));
            }
        }
    }
    Ok(())
}

/// A polynomial `F_i` in the blocks `j ≠ i` of multidegree `(ρ − d_j)_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymLift {
    index: usize,
    poly: Polynomial,
}

impl SymLift {
    /// `poly` must live in the model ring for `data`.
    pub fn new(data: &DegreeData, index: usize, poly: Polynomial) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        check_lift_degrees(data, index, &poly)?;
        Ok(SymLift { index, poly })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn poly(&self) -> &Polynomial {
        &self.poly
    }

    /// `c·F` for a constant `c`; still a lift when `c ≠ 0`.
    pub fn scaled(&self, c: &crate::Scalar) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(SymLift { index: self.index, poly: self.poly.scale(c) })
    }
}

/// `Υ_i(F)`: substitute `g_j^{-1}·(x1, x2, x3)ᵀ` for block `j`. The result lies in
/// `t | x1, x2, x3` with the negative t-power carried in the offset.
pub fn upsilon(i: usize, f: &Polynomial, data: &DegreeData, cfg: &LatticeConfiguration) -> Result<TScaled> {
    check_lift_degrees(data, i, f)?;
    if cfg.n_plus_1() != data.n_plus_1() {
        return Err(Error::InvalidInput("configuration and degree data disagree on n+1".into()));
    }
    let target = plane_ring(cfg.field());
    let t = Polynomial::var(&target, "t")?;
    let xs: Vec<Polynomial> = ["x1", "x2", "x3"].iter().map(|n| Polynomial::var(&target, n)).collect::<Result<_>>()?;
    let mut sub = Substitution::new(f.ring(), &target, true);
    sub.set("t", t.clone())?;
    for j in 0..data.n_plus_1() {
        let names = block_names(j);
        if j == i {
            for name in &names {
                sub.set(name, Polynomial::zero(&target))?;
            }
            continue;
        }
        let inv = inverse3(cfg.matrix(j))?;
        // g_j^{-1} = diag(1, t^-1, t^-2)·M_j^{-1}; every image is scaled by t^2 and the
        // offset -2 per unit of block degree restores it.
        let scale = [&t * &t, t.clone(), Polynomial::one(&target)];
        for r in 0..3 {
            let row = (0..3).fold(Polynomial::zero(&target), |acc, c| &acc + &xs[c].scale(&inv[r][c]));
            sub.set(&names[r], &scale[r] * &row)?;
        }
    }
    let g = f.substitute(&sub)?;
    Ok(TScaled::new(-2 * data.degree(i) as i32, g))
}

/// Reduction of the t-saturation lies outside `⟨(x_{1j}, x_{2j})_j⟩`, i.e. some term of it
/// uses only the `x_{3j}`.
pub fn is_admissible_lift(lift: &SymLift) -> Result<bool> {
    let ring = lift.poly.ring();
    let reduced = lift.poly.t_saturate()?.reduce_mod_t(ring.field())?;
    let rring = reduced.ring().clone();
    let bad: Vec<usize> = (0..rring.nvars())
        .filter(|&v| {
            let name = rring.var_name(v);
            name.starts_with("x1_") || name.starts_with("x2_")
        })
        .collect();
    Ok(reduced.terms().iter().any(|(m, _)| bad.iter().all(|&v| m.get(v) == 0)))
}

/// Splits exponents `[e1, e2, e3]` of total degree `d_i` into factors of degree `ρ − d_j`
/// for `j ≠ i`, consuming `x3`, then `x1`, then `x2`, and filling `j` in increasing order.
pub fn monomial_factorization(exps: [u16; 3], data: &DegreeData, i: usize) -> Result<Vec<(usize, [u16; 3])>> {
    data.check_index(i)?;
    let total: u32 = exps.iter().map(|&e| e as u32).sum();
    if total != data.degree(i) {
        return Err(Error::InvalidInput(format!("monomial degree {total} differs from d_{} = {}", i + 1, data.degree(i))));
    }
    const CONSUME: [usize; 3] = [2, 0, 1];
    let mut rest = exps;
    let mut k = 0;
    let mut out = Vec::new();
    for j in (0..data.n_plus_1()).filter(|&j| j != i) {
        let mut need = data.twist(j) as u16;
        let mut factor = [0u16; 3];
        while need > 0 {
            while rest[CONSUME[k]] == 0 {
                k += 1;
            }
            let v = CONSUME[k];
            let take = need.min(rest[v]);
            factor[v] += take;
            rest[v] -= take;
            need -= take;
        }
        out.push((j, factor));
    }
    Ok(out)
}

fn plane_vars(ring: &RingRef) -> Result<[usize; 3]> {
    let idx = |n: &str| ring.var_index(n).ok_or_else(|| Error::UnknownVariable(n.into()));
    Ok([idx("x1")?, idx("x2")?, idx("x3")?])
}

/// `h` homogeneous in `x1, x2, x3` of degree `d_i`; `t` may appear.
fn check_plane_form(h: &Polynomial, degree: u32) -> Result<[usize; 3]> {
    let xs = plane_vars(h.ring())?;
    for (m, _) in h.terms() {
        let d: u32 = xs.iter().map(|&v| m.get(v) as u32).sum();
        if d != degree {
            return Err(Error::InvalidInput(format!("term of degree {d}, expected {degree}")));
        }
        let others = (0..h.ring().nvars()).any(|v| !xs.contains(&v) && h.ring().var_name(v) != "t" && m.get(v) > 0);
        if others {
            return Err(Error::InvalidInput("form may only use x1, x2, x3 and t".into()));
        }
    }
    Ok(xs)
}

/// `F̃_i`: termwise factorization of `h` relabelled into the blocks `j ≠ i`.
pub fn lift_tilde(h: &Polynomial, data: &DegreeData, i: usize, ring: &RingRef) -> Result<Polynomial> {
    let xs = check_plane_form(h, data.degree(i))?;
    let t_src = h.ring().var_index("t");
    let t_dst = ring.var_index("t").ok_or_else(|| Error::UnknownVariable("t".into()))?;
    let mut terms = Vec::new();
    for (m, c) in h.terms() {
        let mut exps = vec![0u16; ring.nvars()];
        if let Some(t) = t_src {
            exps[t_dst] = m.get(t);
        }
        for (j, factor) in monomial_factorization([m.get(xs[0]), m.get(xs[1]), m.get(xs[2])], data, i)? {
            let names = block_names(j);
            for r in 0..3 {
                let v = ring.var_index(&names[r]).ok_or_else(|| Error::UnknownVariable(names[r].clone()))?;
                exps[v] += factor[r];
            }
        }
        terms.push((Monomial::from_exponents(&exps), c.clone()));
    }
    Ok(Polynomial::from_terms(ring, terms))
}

/// `F̃_i` evaluated at `g_j·(x_{1j}, x_{2j}, x_{3j})ᵀ`; satisfies `Υ_i(F_i) = h`.
pub fn lift_polynomial(h: &Polynomial, data: &DegreeData, i: usize, cfg: &LatticeConfiguration) -> Result<SymLift> {
    let ring = model_ring(cfg.field(), data.n_plus_1());
    SymLift::new(data, i, lift_image(h, data, i, cfg, &ring)?)
}

/// Same as [`lift_polynomial`] for an input carrying a t-offset, which must be integral.
pub fn lift_scaled(h: &TScaled, data: &DegreeData, i: usize, cfg: &LatticeConfiguration) -> Result<SymLift> {
    if !h.is_integral() {
        return Err(Error::InvalidInput("form has a negative power of t".into()));
    }
    lift_polynomial(&h.to_integral()?, data, i, cfg)
}

fn lift_image(h: &Polynomial, data: &DegreeData, i: usize, cfg: &LatticeConfiguration, ring: &RingRef) -> Result<Polynomial> {
    if cfg.n_plus_1() != data.n_plus_1() {
        return Err(Error::InvalidInput("configuration and degree data disagree on n+1".into()));
    }
    let tilde = lift_tilde(h, data, i, ring)?;
    let mut sub = Substitution::new(ring, ring, true);
    sub.set("t", Polynomial::var(ring, "t")?)?;
    for j in 0..data.n_plus_1() {
        let names = block_names(j);
        let col = cfg.g_column(j, ring, [&names[0], &names[1], &names[2]])?;
        for (name, image) in names.iter().zip(col) {
            sub.set(name, image)?;
        }
    }
    tilde.substitute(&sub)
}

/// `∏_{j≠i} x_{3j}^{ρ−d_j}` in the model ring.
pub fn x3_product(data: &DegreeData, i: usize, ring: &RingRef) -> Result<Polynomial> {
    let mut exps = vec![0u16; ring.nvars()];
    for j in (0..data.n_plus_1()).filter(|&j| j != i) {
        let name = &block_names(j)[2];
        let v = ring.var_index(name).ok_or_else(|| Error::UnknownVariable(name.clone()))?;
        exps[v] = data.twist(j) as u16;
    }
    Ok(Polynomial::monomial(ring, Monomial::from_exponents(&exps), ring.field().one()))
}

/// Forms `f_1..f_{n+1}` in `x1, x2, x3` with optional lifts satisfying `Υ_i(F_i) = f_i`.
#[derive(Clone, Debug)]
pub struct SyzygyTuple {
    pub data: DegreeData,
    pub forms: Vec<TScaled>,
    pub lifts: Option<Vec<SymLift>>,
}

impl SyzygyTuple {
    pub fn new(data: DegreeData, forms: Vec<TScaled>, lifts: Option<Vec<SymLift>>) -> Result<Self> {
        if forms.len() != data.n_plus_1() {
            return Err(Error::InvalidInput("one form per index is required".into()));
        }
        for (i, f) in forms.iter().enumerate() {
            check_plane_form(&f.poly, data.degree(i))?;
        }
        if let Some(ls) = &lifts {
            if ls.len() != forms.len() || ls.iter().enumerate().any(|(i, l)| l.index != i) {
                return Err(Error::InvalidInput("one lift per index is required".into()));
            }
        }
        Ok(SyzygyTuple { data, forms, lifts })
    }

    /// Checks `Υ_i(F_i) = f_i` for every lift.
    pub fn lifts_consistent(&self, cfg: &LatticeConfiguration) -> Result<bool> {
        let Some(lifts) = &self.lifts else { return Ok(false) };
        for (l, f) in lifts.iter().zip(&self.forms) {
            if &upsilon(l.index, &l.poly, &self.data, cfg)? != f {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Tuple `(Υ_i(∏_{j≠i} x_{3j}^{ρ−d_j}) + h_i)_i` with lifts `∏ x_{3j}^{ρ−d_j} + F_i(h_i)`.
pub fn example_class(data: &DegreeData, cfg: &LatticeConfiguration, h: &[Polynomial]) -> Result<SyzygyTuple> {
    if h.len() != data.n_plus_1() {
        return Err(Error::InvalidInput(format!("expected {} forms, got {}", data.n_plus_1(), h.len())));
    }
    let ring = model_ring(cfg.field(), data.n_plus_1());
    let mut forms = Vec::new();
    let mut lifts = Vec::new();
    for (i, hi) in h.iter().enumerate() {
        let base = x3_product(data, i, &ring)?;
        let lift = &base + &lift_image(hi, data, i, cfg, &ring)?;
        let lift = SymLift::new(data, i, lift)?;
        let hi = hi.map_to_ring(&plane_ring(cfg.field()))?;
        let f = upsilon(i, &base, data, cfg)?.add(&TScaled::integral(hi))?;
        forms.push(f);
        lifts.push(lift);
    }
    SyzygyTuple::new(data.clone(), forms, Some(lifts))
}

/// Random forms `h_i ∈ R[x1, x2, x3]` homogeneous of degree `d_i`: every monomial gets a
/// coefficient below `bound` times `t^k` with `k ≤ 2`.
pub fn sample_forms(data: &DegreeData, field: CoeffField, seed: u64, bound: u64) -> Result<Vec<Polynomial>> {
    if bound < 2 {
        return Err(Error::InvalidInput("bound must be at least 2".into()));
    }
    let ring = plane_ring(field);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut forms = Vec::new();
    for &d in data.degrees() {
        let d = d as u16;
        let mut terms = Vec::new();
        for a in 0..=d {
            for b in 0..=d - a {
                let k = rng.gen_range(0..3u16);
                let c = field.from_i64(rng.gen_range(0..bound) as i64);
                terms.push((Monomial::from_exponents(&[k, a, b, d - a - b]), c));
            }
        }
        forms.push(Polynomial::from_terms(&ring, terms));
    }
    Ok(forms)
}

/// Row `(Ā_1, …, Ā_{n+1})` on the component `D_i`, as polynomials in `x_{2i}, x_{3i}`.
#[derive(Clone, Debug)]
pub struct RestrictedRow {
    pub component: usize,
    pub ring: RingRef,
    pub entries: Vec<Polynomial>,
}

fn component_ring(field: CoeffField, i: usize) -> Result<RingRef> {
    let names = block_names(i);
    Ring::new(field, vec![(format!("X{}", i + 1), vec![names[1].clone(), names[2].clone()])])
}

/// Sets `t = 0`, `x_{1i} = 0`, `x_{1j} = x_{2j} = 0` and `x_{3j} = 1` for `j ≠ i` in every
/// saturated lift.
pub fn restrict_to_component(tuple: &SyzygyTuple, i: usize) -> Result<RestrictedRow> {
    tuple.data.check_index(i)?;
    let lifts = tuple.lifts.as_ref().ok_or_else(|| Error::InvalidInput("tuple has no lifts".into()))?;
    let field = lifts[0].poly.field();
    let target = component_ring(field, i)?;
    let mut entries = Vec::new();
    for lift in lifts {
        let reduced = lift.poly.t_saturate()?.reduce_mod_t(field)?;
        let src = reduced.ring().clone();
        let mut sub = Substitution::new(&src, &target, true);
        for j in 0..tuple.data.n_plus_1() {
            let names = block_names(j);
            if j == i {
                sub.set(&names[0], Polynomial::zero(&target))?;
                sub.set(&names[1], Polynomial::var(&target, &names[1])?)?;
                sub.set(&names[2], Polynomial::var(&target, &names[2])?)?;
            } else {
                sub.set(&names[0], Polynomial::zero(&target))?;
                sub.set(&names[1], Polynomial::zero(&target))?;
                sub.set(&names[2], Polynomial::one(&target))?;
            }
        }
        entries.push(reduced.substitute(&sub)?);
    }
    Ok(RestrictedRow { component: i, ring: target, entries })
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentCertificate {
    pub component: usize,
    pub row: Vec<String>,
    pub row_degrees: Vec<Option<u32>>,
    pub unit_value: Option<String>,
    /// `e_j − (Ā_j/Ā_i)·e_i` for `j ≠ i`, written out as rows.
    pub kernel_basis: Vec<Vec<String>>,
    pub kernel_verified: bool,
    /// The computed syzygy module of the row is spanned by the explicit kernel basis.
    pub syzygy_cross_check: bool,
    pub verdict: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrivialityCertificate {
    pub per_component: Vec<ComponentCertificate>,
    pub overall: bool,
}

fn strings(ps: &[Polynomial]) -> Vec<String> {
    ps.iter().map(|p| p.to_string()).collect()
}

/// Certificate for one restricted row: its `i`-th entry must be a nonzero constant.
pub fn certify_row(row: &RestrictedRow) -> Result<ComponentCertificate> {
    let i = row.component;
    let entries = &row.entries;
    let mut cert = ComponentCertificate {
        component: i,
        row: strings(entries),
        row_degrees: entries.iter().map(|e| e.total_degree()).collect(),
        unit_value: None,
        kernel_basis: Vec::new(),
        kernel_verified: false,
        syzygy_cross_check: false,
        verdict: false,
        diagnostics: Vec::new(),
    };
    let unit = match entries[i].as_constant() {
        Some(c) if !c.is_zero() => c,
        Some(_) => {
            cert.diagnostics.push(format!("entry {} vanishes on D_{}", i + 1, i + 1));
            return Ok(cert);
        }
        None => {
            cert.diagnostics.push(format!("entry {} is not constant on D_{}", i + 1, i + 1));
            return Ok(cert);
        }
    };
    cert.unit_value = Some(unit.to_string());
    let inv = unit.inv()?;
    let ring = &row.ring;
    let basis: Vec<Vec<Polynomial>> = (0..entries.len())
        .filter(|&j| j != i)
        .map(|j| {
            let mut v = vec![Polynomial::zero(ring); entries.len()];
            v[j] = Polynomial::one(ring);
            v[i] = -&entries[j].scale(&inv);
            v
        })
        .collect();
    let dot = |v: &[Polynomial]| v.iter().zip(entries).fold(Polynomial::zero(ring), |acc, (a, b)| &acc + &(a * b));
    cert.kernel_verified = basis.iter().all(|v| dot(v).is_zero());
    let computed = syzygies(entries)?;
    let spans = computed.relations().iter().all(|rel| {
        let mut combo = vec![Polynomial::zero(ring); entries.len()];
        for (j, v) in (0..entries.len()).filter(|&j| j != i).zip(&basis) {
            for (c, b) in combo.iter_mut().zip(v) {
                *c = &*c + &(&rel[j] * b);
            }
        }
        combo == *rel
    });
    let contained = basis.iter().map(|v| computed.contains(v)).collect::<Result<Vec<_>>>()?;
    cert.syzygy_cross_check = spans && contained.iter().all(|&b| b);
    if !cert.kernel_verified {
        cert.diagnostics.push("explicit kernel basis fails the relation".into());
    }
    if !cert.syzygy_cross_check {
        cert.diagnostics.push("computed syzygies disagree with the explicit kernel".into());
    }
    cert.kernel_basis = basis.iter().map(|v| strings(v)).collect();
    cert.verdict = cert.kernel_verified && cert.syzygy_cross_check;
    Ok(cert)
}

/// Checks on every component `D_i` that the restricted row has a unit entry at `i`,
/// so that its kernel is free of rank `n`.
pub fn triviality_certificate(tuple: &SyzygyTuple) -> Result<TrivialityCertificate> {
    let per_component = (0..tuple.data.n_plus_1())
        .map(|i| certify_row(&restrict_to_component(tuple, i)?))
        .collect::<Result<Vec<_>>>()?;
    let overall = per_component.iter().all(|c| c.verdict);
    Ok(TrivialityCertificate { per_component, overall })
}

/// Whether the curve misses the common zeros of the forms, over an algebraic closure of
/// the fraction field.
pub fn coverage_check(curve: &PlaneCurve, tuple: &SyzygyTuple) -> Result<bool> {
    let field = curve.equation().field();
    let ring = plane_ring(field);
    let mut sub = Substitution::new(curve.equation().ring(), &ring, true);
    for (u, x) in [("u1", "x1"), ("u2", "x2"), ("u3", "x3")] {
        sub.set(u, Polynomial::var(&ring, x)?)?;
    }
    if curve.equation().ring().var_index("t").is_some() {
        sub.set("t", Polynomial::var(&ring, "t")?)?;
    }
    let mut gens = vec![curve.equation().substitute(&sub)?];
    for f in &tuple.forms {
        gens.push(f.poly.map_to_ring(&ring)?);
    }
    let xs = plane_vars(&ring)?;
    projectively_empty(&IdealHandle::new(&ring, gens)?, &xs)
}

/// `t^k·F` as a lift, for the scaling invariance of admissibility.
pub fn times_t(lift: &SymLift, k: u32) -> Result<SymLift> {
    Ok(SymLift { index: lift.index, poly: t_power_times(&lift.poly, k)? })
}

/// Residue-ring image of a lift, for inspection.
pub fn reduced_lift(lift: &SymLift) -> Result<Polynomial> {
    let ring = lift.poly.ring();
    let target = residue_ring(ring, ring.field())?;
    lift.poly.t_saturate()?.reduce_mod_t_into(&target)
}
