//! Reference computations that share no code with the library's Gröbner engine.

use mustafin::{Monomial, Polynomial};

/// Coefficients of `p` as a polynomial in variable `v`, lowest degree first.
pub fn coefficients_in(p: &Polynomial, v: usize) -> Vec<Polynomial> {
    let ring = p.ring();
    let deg = p.degree_in(v).unwrap_or(0) as usize;
    let mut buckets = vec![Vec::new(); deg + 1];
    for (m, c) in p.terms() {
        let mut e = m.exponents().to_vec();
        let k = e[v] as usize;
        e[v] = 0;
        buckets[k].push((Monomial::from_exponents(&e), c.clone()));
    }
    buckets.into_iter().map(|t| Polynomial::from_terms(ring, t)).collect()
}

/// Determinant by cofactor expansion along the first row.
pub fn determinant(m: &[Vec<Polynomial>]) -> Polynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let ring = m[0][0].ring();
    let mut acc = Polynomial::zero(ring);
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Polynomial>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, e)| e.clone()).collect()).collect();
        let term = &m[0][col] * &determinant(&minor);
        acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Sylvester resultant of `f` and `g` with respect to variable `v`.
pub fn resultant(f: &Polynomial, g: &Polynomial, v: usize) -> Polynomial {
    let a = coefficients_in(f, v);
    let b = coefficients_in(g, v);
    let (m, n) = (a.len() - 1, b.len() - 1);
    let ring = f.ring();
    let size = m + n;
    if size == 0 {
        return Polynomial::one(ring);
    }
    let mut rows = Vec::with_capacity(size);
    for r in 0..n {
        let mut row = vec![Polynomial::zero(ring); size];
        for (k, c) in a.iter().rev().enumerate() {
            row[r + k] = c.clone();
        }
        rows.push(row);
    }
    for r in 0..m {
        let mut row = vec![Polynomial::zero(ring); size];
        for (k, c) in b.iter().rev().enumerate() {
            row[r + k] = c.clone();
        }
        rows.push(row);
    }
    determinant(&rows)
}
