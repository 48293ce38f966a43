use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::{radical_membership, IdealHandle};
use crate::monomial::Monomial;
use crate::poly::{residue_ring, Polynomial};
use crate::ring::RingRef;
use crate::scalar::CoeffField;

use super::lattice::{model_ring, LatticeConfiguration};
use super::model::{curve_model_ideal, special_fiber, PlaneCurve};

/// Largest power tried before falling back to the auxiliary-variable radical test.
const POWER_TRIES: u32 = 6;
/// Largest number of variables for which minimal transversals are enumerated.
const MAX_TRANSVERSAL_VARS: usize = 24;

/// A prime ideal generated by variables, stored as sorted variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialPrime {
    pub label: String,
    pub vars: Vec<usize>,
}

impl MonomialPrime {
    fn new(label: String, mut vars: Vec<usize>) -> Self {
        vars.sort_unstable();
        vars.dedup();
        MonomialPrime { label, vars }
    }

    pub fn contains(&self, other: &MonomialPrime) -> bool {
        other.vars.iter().all(|v| self.vars.contains(v))
    }

    pub fn to_ideal(&self, ring: &RingRef) -> Result<IdealHandle> {
        IdealHandle::new(ring, self.vars.iter().map(|&v| Polynomial::var_at(ring, v)).collect())
    }

    /// Whether every polynomial of the ideal vanishes on `V(self)`.
    pub fn contains_ideal_of(&self, ideal: &IdealHandle) -> bool {
        ideal
            .generators()
            .iter()
            .all(|g| g.terms().iter().all(|(m, _)| self.vars.iter().any(|&v| m.get(v) > 0)))
    }
}

/// Expected components of special fibers over the residue ring with blocks `x{i}_{j}`.
#[derive(Clone, Debug)]
pub struct ComponentCatalog {
    ring: RingRef,
    n_plus_1: usize,
    primary: Vec<MonomialPrime>,
    secondary: Vec<MonomialPrime>,
    curve: Vec<MonomialPrime>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CatalogMode {
    Mustafin,
    Curve,
}

impl ComponentCatalog {
    pub fn new(field: CoeffField, n_plus_1: usize) -> Result<Self> {
        if n_plus_1 == 0 {
            return Err(Error::InvalidInput("catalog needs at least one factor".into()));
        }
        let ring = residue_ring(&model_ring(field, n_plus_1), field)?;
        let var = |i: usize, j: usize| ring.var_index(&format!("x{i}_{}", j + 1)).unwrap();
        let pair = |j: usize| [var(1, j), var(2, j)];
        let mut primary = Vec::new();
        let mut secondary = Vec::new();
        let mut curve = Vec::new();
        for l in 0..n_plus_1 {
            let vars = (0..n_plus_1).filter(|&j| j != l).flat_map(pair).collect();
            primary.push(MonomialPrime::new(format!("J_{}", l + 1), vars));
            let mut vars: Vec<usize> = (0..n_plus_1).filter(|&j| j != l).flat_map(pair).collect();
            vars.push(var(1, l));
            curve.push(MonomialPrime::new(format!("D_{}", l + 1), vars));
        }
        for i in 0..n_plus_1 {
            for l in i + 1..n_plus_1 {
                let mut vars: Vec<usize> = (0..n_plus_1).filter(|&j| j != i && j != l).flat_map(pair).collect();
                vars.extend([var(1, i), var(1, l)]);
                secondary.push(MonomialPrime::new(format!("J_{}{}", i + 1, l + 1), vars));
            }
        }
        Ok(ComponentCatalog { ring, n_plus_1, primary, secondary, curve })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn n_plus_1(&self) -> usize {
        self.n_plus_1
    }

    pub fn primary(&self) -> &[MonomialPrime] {
        &self.primary
    }

    pub fn secondary(&self) -> &[MonomialPrime] {
        &self.secondary
    }

    pub fn curve_components(&self) -> &[MonomialPrime] {
        &self.curve
    }

    pub fn expected(&self, mode: CatalogMode) -> Vec<MonomialPrime> {
        match mode {
            CatalogMode::Mustafin => self.primary.iter().chain(&self.secondary).cloned().collect(),
            CatalogMode::Curve => self.curve.clone(),
        }
    }
}

/// Generators of `∩ J` for monomial primes `J`: the squarefree monomials on minimal
/// variable sets meeting every `J`.
pub fn minimal_transversals(primes: &[MonomialPrime]) -> Result<Vec<Vec<usize>>> {
    let mut universe: Vec<usize> = primes.iter().flat_map(|p| p.vars.iter().copied()).collect();
    universe.sort_unstable();
    universe.dedup();
    if universe.len() > MAX_TRANSVERSAL_VARS {
        return Err(Error::InvalidInput(format!("too many variables ({}) for transversal enumeration", universe.len())));
    }
    if primes.is_empty() {
        return Ok(vec![Vec::new()]);
    }
    let masks: Vec<u32> = primes
        .iter()
        .map(|p| p.vars.iter().map(|v| 1u32 << universe.binary_search(v).unwrap()).fold(0, |a, b| a | b))
        .collect();
    let mut subsets: Vec<u32> = (1u32..(1u32 << universe.len())).collect();
    subsets.sort_by_key(|s| (s.count_ones(), *s));
    let mut found: Vec<u32> = Vec::new();
    for s in subsets {
        if masks.iter().all(|m| m & s != 0) && !found.iter().any(|f| f & s == *f) {
            found.push(s);
        }
    }
    Ok(found
        .into_iter()
        .map(|s| (0..universe.len()).filter(|b| s >> b & 1 == 1).map(|b| universe[b]).collect())
        .collect())
}

fn in_radical(m: &Polynomial, fiber: &IdealHandle) -> Result<bool> {
    let mut power = m.clone();
    for _ in 0..POWER_TRIES {
        if fiber.contains(&power)? {
            return Ok(true);
        }
        power = &power * m;
    }
    radical_membership(m, fiber)
}

#[derive(Clone, Debug, Serialize)]
pub struct ContainmentVerdict {
    pub component: String,
    /// The fiber vanishes on the component.
    pub fiber_in_component: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub mode: CatalogMode,
    pub containments: Vec<ContainmentVerdict>,
    /// Generators of the intersection of the expected components, with radical membership.
    pub intersection_in_radical: Vec<(String, bool)>,
    pub decomposition_holds: bool,
    pub star_like: bool,
    pub component_count: usize,
    pub diagnostics: Vec<String>,
}

/// Decides set-theoretically whether `V(fiber)` is the union of the expected components.
pub fn verify_component_decomposition(fiber: &IdealHandle, catalog: &ComponentCatalog, mode: CatalogMode) -> Result<ComponentReport> {
    let fiber = fiber.map_to_ring(catalog.ring())?;
    let expected = catalog.expected(mode);
    let mut diagnostics = Vec::new();
    let containments: Vec<ContainmentVerdict> = expected
        .iter()
        .map(|j| {
            let ok = j.contains_ideal_of(&fiber);
            if !ok {
                diagnostics.push(format!("(a) fiber does not vanish on {}", j.label));
            }
            ContainmentVerdict { component: j.label.clone(), fiber_in_component: ok }
        })
        .collect();
    let ring = catalog.ring();
    let mut intersection_in_radical = Vec::new();
    for vars in minimal_transversals(&expected)? {
        let mut exps = vec![0u16; ring.nvars()];
        for &v in &vars {
            exps[v] = 1;
        }
        let m = Polynomial::monomial(ring, Monomial::from_exponents(&exps), ring.field().one());
        let ok = in_radical(&m, &fiber)?;
        if !ok {
            diagnostics.push(format!("(b) {m} is not in the radical of the fiber"));
        }
        intersection_in_radical.push((m.to_string(), ok));
    }
    let decomposition_holds =
        containments.iter().all(|c| c.fiber_in_component) && intersection_in_radical.iter().all(|(_, ok)| *ok);
    let minimal = |j: &MonomialPrime| !expected.iter().any(|o| o != j && j.contains(o));
    let component_count = if decomposition_holds {
        expected.iter().filter(|j| minimal(j)).count()
    } else {
        expected.iter().zip(&containments).filter(|(j, c)| c.fiber_in_component && minimal(j)).count()
    };
    Ok(ComponentReport {
        mode,
        containments,
        intersection_in_radical,
        decomposition_holds,
        star_like: mode == CatalogMode::Curve && decomposition_holds,
        component_count,
        diagnostics,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TrialReport {
    pub trial: usize,
    pub seed: u64,
    pub star_like: bool,
    pub component_count: usize,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StarLikeSummary {
    pub trials: usize,
    pub successes: usize,
    pub ratio: f64,
    pub reports: Vec<TrialReport>,
}

/// Bound on sampled matrix entries in the experiment.
pub const EXPERIMENT_ENTRY_BOUND: u64 = 1000;

/// Samples configurations, builds the curve model, and checks star-like reduction of
/// its special fiber. Trial seeds are drawn from `seed`, so the outcome is reproducible.
pub fn star_like_experiment(curve: &PlaneCurve, n_plus_1: usize, trials: usize, seed: u64) -> Result<StarLikeSummary> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let field = curve.equation().field();
    if !matches!(field, CoeffField::Prime(_)) {
        return Err(Error::InvalidInput("experiment runs over a prime field".into()));
    }
    let catalog = ComponentCatalog::new(field, n_plus_1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..trials).map(|_| rng.next_u64()).collect();
    let reports = seeds
        .par_iter()
        .enumerate()
        .map(|(trial, &s)| -> Result<TrialReport> {
            let cfg = LatticeConfiguration::sample(field, n_plus_1, s, EXPERIMENT_ENTRY_BOUND)?;
            let fiber = special_fiber(&curve_model_ideal(&cfg, curve)?)?;
            let report = verify_component_decomposition(&fiber, &catalog, CatalogMode::Curve)?;
            Ok(TrialReport {
                trial,
                seed: s,
                star_like: report.star_like,
                component_count: report.component_count,
                diagnostics: report.diagnostics,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let successes = reports.iter().filter(|r| r.star_like).count();
    Ok(StarLikeSummary { trials, successes, ratio: successes as f64 / trials as f64, reports })
}
