use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::ring::{Ring, RingRef};
use crate::scalar::{parse_scalar, CoeffField, Scalar};

/// Resampling budget per configuration.
pub const MAX_SAMPLING_TRIES: usize = 1000;

pub type Matrix3 = [[Scalar; 3]; 3];

/// Matrices `M_l` with constant entries; the lattices are `g_l·L` with
/// `g_l = M_l·diag(1, t, t²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeConfiguration {
    field: CoeffField,
    matrices: Vec<Matrix3>,
    pub seed: Option<u64>,
}

pub fn det3(m: &Matrix3) -> Scalar {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| m[r1][c1].mul(&m[r2][c2]).sub(&m[r2][c1].mul(&m[r1][c2]));
    m[0][0]
        .mul(&minor(1, 2, 1, 2))
        .sub(&m[0][1].mul(&minor(1, 2, 0, 2)))
        .add(&m[0][2].mul(&minor(1, 2, 0, 1)))
}

/// Inverse by the adjugate formula.
pub fn inverse3(m: &Matrix3) -> Result<Matrix3> {
    let det = det3(m);
    let inv_det = det.inv()?;
    let cof = |r: usize, c: usize| {
        let rows: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..3).filter(|&j| j != c).collect();
        let v = m[rows[0]][cols[0]].mul(&m[rows[1]][cols[1]]).sub(&m[rows[1]][cols[0]].mul(&m[rows[0]][cols[1]]));
        if (r + c) % 2 == 1 {
            v.neg()
        } else {
            v
        }
    };
    // inverse = adj / det with adj[i][j] = cof(j, i)
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| cof(j, i).mul(&inv_det))))
}

pub fn mat_mul3(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(a[i][0].field().zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
    })
}

pub fn identity3(field: CoeffField) -> Matrix3 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { field.one() } else { field.zero() }))
}

impl LatticeConfiguration {
    /// Validates that every matrix is invertible over the residue field.
    pub fn new(field: CoeffField, matrices: Vec<Matrix3>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::InvalidInput("at least one lattice is required".into()));
        }
        for (l, m) in matrices.iter().enumerate() {
            if m.iter().flatten().any(|x| x.field() != field) {
                return Err(Error::FieldMismatch);
            }
            if det3(m).is_zero() {
                return Err(Error::InvalidInput(format!("matrix {} has vanishing determinant", l + 1)));
            }
        }
        Ok(LatticeConfiguration { field, matrices, seed: None })
    }

    pub fn identity(field: CoeffField, n_plus_1: usize) -> Result<Self> {
        Self::new(field, vec![identity3(field); n_plus_1])
    }

    /// Entries drawn uniformly from `{0, …, bound−1}`; a matrix is redrawn while its
    /// determinant vanishes in `field`.
    pub fn sample(field: CoeffField, n_plus_1: usize, seed: u64, bound: u64) -> Result<Self> {
        if bound < 2 {
            return Err(Error::InvalidInput("bound must be at least 2".into()));
        }
        if n_plus_1 == 0 {
            return Err(Error::InvalidInput("at least one lattice is required".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut matrices = Vec::with_capacity(n_plus_1);
        let mut tries = 0;
        while matrices.len() < n_plus_1 {
            tries += 1;
            if tries > MAX_SAMPLING_TRIES {
                return Err(Error::Sampling(format!("no invertible matrix after {MAX_SAMPLING_TRIES} draws")));
            }
            let m: Matrix3 = std::array::from_fn(|_| std::array::from_fn(|_| field.from_i64(rng.gen_range(0..bound) as i64)));
            if !det3(&m).is_zero() {
                matrices.push(m);
            }
        }
        let mut cfg = Self::new(field, matrices)?;
        cfg.seed = Some(seed);
        Ok(cfg)
    }

    pub fn field(&self) -> CoeffField {
        self.field
    }

    pub fn n_plus_1(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrices(&self) -> &[Matrix3] {
        &self.matrices
    }

    pub fn matrix(&self, l: usize) -> &Matrix3 {
        &self.matrices[l]
    }

    /// Configuration with the lattices listed in the order `perm` (entry `j` is the
    /// index of the old lattice placed at position `j`).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let matrices = perm.iter().map(|&j| self.matrices.get(j).cloned().ok_or_else(|| Error::InvalidInput("bad permutation".into()))).collect::<Result<Vec<_>>>()?;
        Self::new(self.field, matrices)
    }

    /// Replaces one matrix (used for crafted, non-general configurations).
    pub fn with_matrix(&self, l: usize, m: Matrix3) -> Result<Self> {
        let mut matrices = self.matrices.clone();
        matrices[l] = m;
        Self::new(self.field, matrices)
    }

    /// The column `g_l·(x_{1l}, x_{2l}, x_{3l})ᵀ` in `ring`, for coordinate names `x1..x3`
    /// given by `names`.
    pub fn g_column(&self, l: usize, ring: &RingRef, names: [&str; 3]) -> Result<[Polynomial; 3]> {
        let t = Polynomial::var(ring, "t")?;
        let vars: Vec<Polynomial> = names.iter().map(|n| Polynomial::var(ring, n)).collect::<Result<_>>()?;
        let scaled = [vars[0].clone(), &t * &vars[1], &(&t * &t) * &vars[2]];
        let m = &self.matrices[l];
        Ok(std::array::from_fn(|r| {
            (0..3).fold(Polynomial::zero(ring), |acc, c| &acc + &scaled[c].scale(&m[r][c]))
        }))
    }

    pub fn to_data(&self) -> ConfigData {
        ConfigData {
            field: self.field.to_string(),
            seed: self.seed,
            matrices: self
                .matrices
                .iter()
                .map(|m| m.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect())
                .collect(),
        }
    }

    pub fn from_data(data: &ConfigData) -> Result<Self> {
        let field = parse_field(&data.field)?;
        let matrices = data
            .matrices
            .iter()
            .map(|m| {
                if m.len() != 3 || m.iter().any(|r| r.len() != 3) {
                    return Err(Error::MatrixShape("expected 3x3".into()));
                }
                let mut out: Vec<[Scalar; 3]> = Vec::new();
                for row in m {
                    let v: Vec<Scalar> = row.iter().map(|s| parse_scalar(field, s)).collect::<Result<_>>()?;
                    out.push([v[0].clone(), v[1].clone(), v[2].clone()]);
                }
                Ok([out[0].clone(), out[1].clone(), out[2].clone()])
            })
            .collect::<Result<Vec<_>>>()?;
        let mut cfg = Self::new(field, matrices)?;
        cfg.seed = data.seed;
        Ok(cfg)
    }
}

/// Serializable form of a configuration; entries use the polynomial text grammar.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigData {
    pub field: String,
    pub seed: Option<u64>,
    pub matrices: Vec<Vec<Vec<String>>>,
}

/// Parses `QQ` or `GF(p)`.
pub fn parse_field(text: &str) -> Result<CoeffField> {
    let text = text.trim();
    if text == "QQ" {
        return Ok(CoeffField::Rational);
    }
    let inner = text
        .strip_prefix("GF(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("unknown field `{text}`")))?;
    let p: u64 = inner.parse().map_err(|_| Error::Parse(format!("bad prime `{inner}`")))?;
    CoeffField::checked_prime(p)
}

/// `t | X1 | … | X{n+1}` with block `j` holding `x1_j, x2_j, x3_j`.
pub fn model_ring(field: CoeffField, n_plus_1: usize) -> RingRef {
    let mut blocks = vec![("t".to_string(), vec!["t".to_string()])];
    for j in 1..=n_plus_1 {
        blocks.push((format!("X{j}"), (1..=3).map(|i| format!("x{i}_{j}")).collect()));
    }
    Ring::new(field, blocks).expect("valid model ring")
}

/// `t | x1, x2, x3`: a single copy of the plane.
pub fn plane_ring(field: CoeffField) -> RingRef {
    Ring::new(field, vec![("t", vec!["t".to_string()]), ("X", vec!["x1".into(), "x2".into(), "x3".into()])]).expect("valid plane ring")
}

/// `t | u1, u2, u3`: the ring of curve equations.
pub fn curve_ring(field: CoeffField) -> RingRef {
    Ring::new(field, vec![("t", vec!["t".to_string()]), ("U", vec!["u1".into(), "u2".into(), "u3".into()])]).expect("valid curve ring")
}

pub fn block_names(j: usize) -> [String; 3] {
    std::array::from_fn(|i| format!("x{}_{}", i + 1, j + 1))
}

/// Positive grading `t:1, x_1:3, x_2:2, x_3:1` under which every entry of `g_l·x` is
/// homogeneous of degree 3. `None` when the ring has other variables.
pub fn model_grading(ring: &RingRef) -> Option<Vec<u32>> {
    ring.var_names()
        .iter()
        .map(|v| {
            if v == "t" {
                return Some(1);
            }
            let rest = v.strip_prefix('x')?;
            let row = rest.split('_').next()?;
            match row {
                "1" => Some(3),
                "2" => Some(2),
                "3" => Some(1),
                _ => None,
            }
        })
        .collect()
}
