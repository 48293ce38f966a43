use crate::error::{Error, Result};
use crate::ideal::{saturate_by_variable, saturate_homogenized, saturate_rabinowitsch, IdealHandle};
use crate::order::MonomialOrder;
use crate::poly::{minors_2x2, residue_ring, Polynomial, Substitution};
use crate::ring::{same_ring, RingRef};
use crate::scalar::{CoeffField, Scalar};

use super::lattice::{block_names, curve_ring, model_grading, model_ring, plane_ring, LatticeConfiguration};

/// A plane curve `V(f)` with `f` homogeneous in `u1, u2, u3` and coefficients in `R`.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneCurve {
    f: Polynomial,
    degree: u32,
}

impl PlaneCurve {
    /// `f` must live in a ring with variables `u1, u2, u3` (and possibly `t`); it is
    /// stored t-saturated.
    pub fn new(f: Polynomial) -> Result<Self> {
        let ring = f.ring().clone();
        let us: Vec<usize> = ["u1", "u2", "u3"]
            .iter()
            .map(|n| ring.var_index(n).ok_or_else(|| Error::UnknownVariable(n.to_string())))
            .collect::<Result<_>>()?;
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let others: Vec<usize> = (0..ring.nvars()).filter(|v| !us.contains(v) && ring.var_name(*v) != "t").collect();
        if f.terms().iter().any(|(m, _)| others.iter().any(|&v| m.get(v) > 0)) {
            return Err(Error::InvalidInput("curve equation may only use u1, u2, u3 and t".into()));
        }
        let udeg = |m: &crate::Monomial| us.iter().map(|&v| m.get(v) as u32).sum::<u32>();
        let degree = udeg(&f.terms()[0].0);
        if f.terms().iter().any(|(m, _)| udeg(m) != degree) {
            return Err(Error::InvalidInput("curve equation is not homogeneous in u".into()));
        }
        if degree == 0 {
            return Err(Error::InvalidInput("curve equation has degree 0".into()));
        }
        let f = f.t_saturate()?;
        Ok(PlaneCurve { f, degree })
    }

    pub fn parse(field: CoeffField, text: &str) -> Result<Self> {
        let ring = curve_ring(field);
        PlaneCurve::new(crate::parse::parse_polynomial(&ring, text)?)
    }

    /// `u1^d + u2^d + u3^d`
    pub fn fermat(field: CoeffField, d: u32) -> Result<Self> {
        PlaneCurve::parse(field, &format!("u1^{d} + u2^{d} + u3^{d}"))
    }

    pub fn equation(&self) -> &Polynomial {
        &self.f
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `f(g_l·x)` where the coordinates of factor `l` are `names`; t-saturated.
    pub fn pullback(&self, cfg: &LatticeConfiguration, l: usize, ring: &RingRef, names: [&str; 3]) -> Result<Polynomial> {
        let col = cfg.g_column(l, ring, names)?;
        let mut sub = Substitution::new(self.f.ring(), ring, true);
        for (r, image) in col.into_iter().enumerate() {
            sub.set(&format!("u{}", r + 1), image)?;
        }
        if self.f.ring().var_index("t").is_some() {
            sub.set("t", Polynomial::var(ring, "t")?)?;
        }
        self.f.substitute(&sub)?.t_saturate()
    }
}

/// The 2×2 minors of the matrix whose columns are `g_l·x_l`.
pub fn mustafin_minors(cfg: &LatticeConfiguration) -> Result<(RingRef, Vec<Polynomial>)> {
    let ring = model_ring(cfg.field(), cfg.n_plus_1());
    if cfg.n_plus_1() < 2 {
        return Ok((ring, Vec::new()));
    }
    let mut cols = Vec::new();
    for l in 0..cfg.n_plus_1() {
        let names = block_names(l);
        cols.push(cfg.g_column(l, &ring, [&names[0], &names[1], &names[2]])?);
    }
    let matrix: Vec<Vec<Polynomial>> = (0..3).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
    let minors = minors_2x2(&matrix)?;
    Ok((ring, minors.into_iter().filter(|m| !m.is_zero()).collect()))
}

/// Saturates by `t`, with a single weighted Gröbner basis when the generators are
/// homogeneous for the model grading.
pub fn t_saturate_ideal(ideal: &IdealHandle) -> Result<IdealHandle> {
    let ring = ideal.ring();
    let t = ring.var_index("t").ok_or_else(|| Error::UnknownVariable("t".into()))?;
    let gens: Vec<Polynomial> = ideal.generators().iter().map(|g| g.t_saturate()).collect::<Result<_>>()?;
    let ideal = IdealHandle::new(ring, gens)?;
    if ideal.is_zero_ideal() {
        return Ok(ideal);
    }
    let grading = model_grading(ring);
    saturate_by_variable(&ideal, t, grading.as_deref())
}

/// Generators of the Mustafin model ideal: the minors of `(g_1 x_1 | … | g_{n+1} x_{n+1})`,
/// saturated by `t`.
pub fn mustafin_ideal(cfg: &LatticeConfiguration) -> Result<IdealHandle> {
    let (ring, minors) = mustafin_minors(cfg)?;
    t_saturate_ideal(&IdealHandle::new(&ring, minors)?)
}

/// Bayer-order witness of t-saturation, when one can be computed without an
/// auxiliary variable.
fn weighted_t_order(ideal: &IdealHandle) -> Option<MonomialOrder> {
    let ring = ideal.ring();
    let t = ring.var_index("t")?;
    let n = ring.nvars();
    let weights = match model_grading(ring) {
        Some(w) if ideal.generators().iter().all(|g| g.is_weighted_homogeneous(&w)) => w,
        _ if ideal.generators().iter().all(|g| g.is_homogeneous()) => vec![1; n],
        _ => return None,
    };
    let mut tie: Vec<usize> = (0..n).filter(|&v| v != t).collect();
    tie.push(t);
    Some(MonomialOrder::Weighted { weights: vec![weights], tie })
}

/// Whether `I : t = I`. Exact for ideals homogeneous in the model or standard grading;
/// otherwise only generators divisible by `t` are examined.
pub fn is_t_saturated(ideal: &IdealHandle) -> Result<bool> {
    for g in ideal.generators() {
        if let Some(v) = g.t_valuation() {
            if v > 0 && !ideal.contains(&g.t_saturate()?)? {
                return Ok(false);
            }
        }
    }
    if let Some(order) = weighted_t_order(ideal) {
        let t = ideal.ring().var_index("t").unwrap();
        let basis = ideal.groebner_basis(&order)?;
        return Ok(basis.iter().all(|g| g.terms().iter().any(|(m, _)| m.get(t) == 0)));
    }
    Ok(true)
}

/// Image of a t-saturated ideal under `t ↦ 0`, in the ring without `t`.
pub fn special_fiber(ideal: &IdealHandle) -> Result<IdealHandle> {
    let ring = ideal.ring();
    let target = residue_ring(ring, ring.field())?;
    if ring.var_index("t").is_none() {
        return ideal.map_to_ring(&target);
    }
    if !is_t_saturated(ideal)? {
        return Err(Error::NotSaturated);
    }
    let gens = ideal.generators().iter().map(|g| g.reduce_mod_t_into(&target)).collect::<Result<Vec<_>>>()?;
    IdealHandle::new(&target, gens)
}

/// Ideal of the closure of the curve in the model: rank-one conditions on the columns
/// `g_l·x_l` plus `f(g_l·x_l)`, saturated by `t` and by one coordinate of every factor
/// (which removes the spurious pieces where a whole column vanishes).
pub fn curve_model_ideal(cfg: &LatticeConfiguration, curve: &PlaneCurve) -> Result<IdealHandle> {
    if curve.equation().field() != cfg.field() {
        return Err(Error::FieldMismatch);
    }
    let (ring, mut gens) = mustafin_minors(cfg)?;
    for l in 0..cfg.n_plus_1() {
        let names = block_names(l);
        gens.push(curve.pullback(cfg, l, &ring, [&names[0], &names[1], &names[2]])?);
    }
    let gens: Vec<Polynomial> = gens.iter().map(|g| g.t_saturate()).collect::<Result<_>>()?;
    let ideal = IdealHandle::new(&ring, gens)?;
    let x3: Vec<usize> = (0..cfg.n_plus_1()).map(|l| ring.var_index(&block_names(l)[2]).unwrap()).collect();
    let t = ring.var_index("t").unwrap();
    match model_grading(&ring) {
        Some(w) if ideal.generators().iter().all(|g| g.is_weighted_homogeneous(&w)) => {
            let mut cur = ideal;
            for &v in &x3 {
                cur = saturate_by_variable(&cur, v, Some(&w))?;
            }
            saturate_by_variable(&cur, t, Some(&w))
        }
        Some(w) => {
            let mut vars = x3.clone();
            vars.push(t);
            saturate_homogenized(&ideal, &vars, &w)
        }
        None => {
            let mut h = Polynomial::var_at(&ring, t);
            for &v in &x3 {
                h = &h * &Polynomial::var_at(&ring, v);
            }
            saturate_rabinowitsch(&ideal, &h)
        }
    }
}

/// The closure of the curve in a single copy of the plane embedded through `g_i`.
#[derive(Clone, Debug)]
pub struct SingleProjection {
    pub index: usize,
    /// `f(g_i·x)`, t-saturated.
    pub f: Polynomial,
    /// Reduction of `f` modulo `t`.
    pub f_tilde: Polynomial,
    /// The constant `c` when `f_tilde = c·x1^d` with `c ≠ 0`.
    pub coefficient: Option<Scalar>,
}

impl SingleProjection {
    pub fn is_pure_power(&self) -> bool {
        self.coefficient.is_some()
    }
}

/// `i` is zero-based.
pub fn single_projection_model(cfg: &LatticeConfiguration, curve: &PlaneCurve, i: usize) -> Result<SingleProjection> {
    if i >= cfg.n_plus_1() {
        return Err(Error::InvalidInput(format!("projection index {} out of range", i + 1)));
    }
    let ring = plane_ring(cfg.field());
    let f = curve.pullback(cfg, i, &ring, ["x1", "x2", "x3"])?;
    let f_tilde = f.reduce_mod_t(cfg.field())?;
    let d = curve.degree() as u16;
    let coefficient = match f_tilde.terms() {
        [(m, c)] if m.get(0) == d && m.degree() == d as u32 => Some(c.clone()),
        _ => None,
    };
    debug_assert!(same_ring(f.ring(), &ring));
    Ok(SingleProjection { index: i, f, f_tilde, coefficient })
}
