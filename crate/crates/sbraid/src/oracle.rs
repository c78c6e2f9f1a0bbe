//! Independent region counts: the characteristic polynomial by the
//! finite-field point-count method with Zaslavsky evaluation, and acyclic
//! orientation counts for graphical arrangements.

use num::{BigInt, BigRational, One, Zero};
use rayon::prelude::*;

use crate::spec::{pairs, OffsetSpec};
use crate::{Error, Result};

/// Characteristic polynomial, stored as coefficients of `q^0 .. q^n`.
/// Monic of degree `n` and divisible by `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    pub coefficients: Vec<BigInt>,
}

impl CharPoly {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Number of points of `(Z/q)^n` lying on no hyperplane of the arrangement.
/// Requires a prime `q > n * (max_offset + 1)` so that the intersection
/// pattern matches the one over the reals. Brute-forces `q^(n-1)` tuples
/// after fixing `x_n = 0` (all hyperplanes are translation invariant along
/// the all-ones direction).
pub fn count_points_mod_q(spec: &OffsetSpec, q: u64) -> Result<BigInt> {
    let n = spec.n();
    let bound = n as u64 * (spec.max_offset() as u64 + 1);
    if !is_prime(q) {
        return Err(Error::usage(format!("q = {q} is not prime")));
    }
    if q <= bound {
        return Err(Error::usage(format!(
            "q = {q} too small: need q > n*(m+1) = {bound}"
        )));
    }
    // hyperplane list with residues reduced mod q
    let constraints: Vec<(usize, usize, u64)> = pairs(n)
        .iter()
        .enumerate()
        .flat_map(|(idx, &(a, b))| {
            spec.offsets_at(idx)
                .iter()
                .map(move |&s| (a - 1, b - 1, s.rem_euclid(q as i64) as u64))
        })
        .collect();

    if n == 1 {
        return Ok(BigInt::from(q));
    }

    // group constraints by the depth at which both endpoints are assigned
    // (x[n-1] is fixed to 0 from the start)
    let mut by_depth: Vec<Vec<(usize, usize, u64)>> = vec![Vec::new(); n - 1];
    for &(a, b, s) in &constraints {
        let d = if a == n - 1 {
            b
        } else if b == n - 1 {
            a
        } else {
            a.max(b)
        };
        by_depth[d].push((a, b, s));
    }

    // split on the first coordinate, count the rest per worker
    let total: u64 = (0..q)
        .into_par_iter()
        .map(|x0| {
            let mut x = vec![0u64; n];
            x[0] = x0;
            if by_depth[0]
                .iter()
                .any(|&(a, b, s)| (x[a] + q - x[b]) % q == s)
            {
                return 0;
            }
            count_rec(&mut x, 1, q, &by_depth)
        })
        .sum();
    Ok(BigInt::from(q) * BigInt::from(total))
}

fn count_rec(x: &mut Vec<u64>, depth: usize, q: u64, by_depth: &[Vec<(usize, usize, u64)>]) -> u64 {
    if depth == x.len() - 1 {
        return 1;
    }
    let mut total = 0;
    for v in 0..q {
        x[depth] = v;
        let ok = by_depth[depth]
            .iter()
            .all(|&(a, b, s)| (x[a] + q - x[b]) % q != s);
        if ok {
            total += count_rec(x, depth + 1, q, by_depth);
        }
    }
    total
}

fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The first `count` primes strictly greater than `n * (max_offset + 1)`.
pub fn admissible_primes(spec: &OffsetSpec, count: usize) -> Vec<u64> {
    let bound = spec.n() as u64 * (spec.max_offset() as u64 + 1);
    let mut out = Vec::with_capacity(count);
    let mut q = bound + 1;
    while out.len() < count {
        if is_prime(q) {
            out.push(q);
        }
        q += 1;
    }
    out
}

/// Characteristic polynomial by interpolating point counts at `n + 2`
/// admissible primes; the extra prime cross-checks the interpolation.
pub fn char_poly(spec: &OffsetSpec) -> Result<CharPoly> {
    let n = spec.n();
    let qs = admissible_primes(spec, n + 2);
    let counts: Vec<BigInt> = qs
        .iter()
        .map(|&q| count_points_mod_q(spec, q))
        .collect::<Result<_>>()?;

    // Lagrange interpolation through the first n+1 points, exact rationals
    let xs: Vec<BigRational> = qs[..=n]
        .iter()
        .map(|&q| BigRational::from_integer(BigInt::from(q)))
        .collect();
    let ys: Vec<BigRational> = counts[..=n]
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let mut coeffs = vec![BigRational::zero(); n + 1];
    for i in 0..=n {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::zero(); n + 1];
        basis[0] = BigRational::one();
        let mut deg = 0;
        let mut denom = BigRational::one();
        for j in 0..=n {
            if j == i {
                continue;
            }
            denom *= &xs[i] - &xs[j];
            // multiply basis by (x - x_j)
            for k in (0..=deg).rev() {
                let t = basis[k].clone();
                basis[k + 1] += &t;
                basis[k] = -&xs[j] * t;
            }
            deg += 1;
        }
        let scale = &ys[i] / denom;
        for k in 0..=n {
            coeffs[k] += &basis[k] * &scale;
        }
    }
    let coefficients: Vec<BigInt> = coeffs
        .iter()
        .map(|c| {
            if c.denom().is_one() {
                Ok(c.numer().clone())
            } else {
                Err(Error::internal(
                    "characteristic polynomial interpolation gave non-integer coefficients",
                ))
            }
        })
        .collect::<Result<_>>()?;

    let poly = CharPoly { coefficients };
    if poly.coefficients.len() != n + 1 || !poly.coefficients[n].is_one() {
        return Err(Error::internal("characteristic polynomial is not monic"));
    }
    if !poly.coefficients[0].is_zero() {
        return Err(Error::internal("characteristic polynomial not divisible by q"));
    }
    // held-out prime consistency check (guards the q-bound)
    let check = poly.eval(&BigInt::from(qs[n + 1]));
    if check != counts[n + 1] {
        return Err(Error::internal(format!(
            "interpolation inconsistent at held-out prime {}: {} != {}",
            qs[n + 1],
            check,
            counts[n + 1]
        )));
    }
    Ok(poly)
}

/// Region count by Zaslavsky's theorem: `(-1)^n * chi(-1)`.
pub fn regions_via_zaslavsky(spec: &OffsetSpec) -> Result<BigInt> {
    let poly = char_poly(spec)?;
    let v = poly.eval(&BigInt::from(-1));
    Ok(if spec.n() % 2 == 0 { v } else { -v })
}

/// Number of acyclic orientations of a simple graph on `[n]`, by brute force
/// over all orientations. Equals the region count of the graphical
/// arrangement.
pub fn acyclic_orientations(n: usize, edges: &[(usize, usize)]) -> u64 {
    let e = edges.len();
    assert!(e < 32, "brute force limited to < 32 edges");
    let mut count = 0;
    for mask in 0u32..(1 << e) {
        // adjacency of the directed graph
        let mut adj = vec![Vec::new(); n];
        for (i, &(u, v)) in edges.iter().enumerate() {
            if mask >> i & 1 == 0 {
                adj[u - 1].push(v - 1);
            } else {
                adj[v - 1].push(u - 1);
            }
        }
        if is_acyclic(n, &adj) {
            count += 1;
        }
    }
    count
}

fn is_acyclic(n: usize, adj: &[Vec<usize>]) -> bool {
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; n];
    fn dfs(v: usize, adj: &[Vec<usize>], state: &mut Vec<u8>) -> bool {
        state[v] = 1;
        for &w in &adj[v] {
            match state[w] {
                0 => {
                    if !dfs(w, adj, state) {
                        return false;
                    }
                }
                1 => return false,
                _ => {}
            }
        }
        state[v] = 2;
        true
    }
    (0..n).all(|v| state[v] != 0 || dfs(v, adj, &mut state))
}
