//! Exact feasibility for systems of difference constraints
//! `x_a - x_b < c`, `x_a - x_b <= c`, `x_a - x_b = c` with integer bounds.
//!
//! Strictness is handled with lexicographic edge weights `(integer part,
//! strictness count)`: a strict constraint contributes `(c, -1)`, meaning
//! `c - epsilon`. Bellman-Ford over these weights either finds a negative
//! lexicographic cycle (infeasible) or yields potentials from which a
//! rational witness is built, realizing one strictness unit as
//! `delta = 1/(2(n+1))`. This is sound because potentials lie on simple
//! paths, so strictness counts stay in `[-n, 0]` and `n * delta < 1/2`.
//! Every returned witness is re-verified by substitution.

use num::rational::Ratio;
use num::One;

use crate::{Error, Result};

pub type Coord = Ratio<i64>;

/// A point with exact rational coordinates, one per variable (1-based
/// variable indices; coordinate of `x_v` is `coords[v-1]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPoint {
    pub coords: Vec<Coord>,
}

impl WitnessPoint {
    pub fn diff(&self, a: usize, b: usize) -> Coord {
        self.coords[a - 1] - self.coords[b - 1]
    }
}

/// Relation kind of a single constraint on `x_a - x_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Lt,
    Le,
    Eq,
}

/// `x_a - x_b  <rel>  bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraint {
    pub a: usize,
    pub b: usize,
    pub bound: i64,
    pub rel: Rel,
}

impl Constraint {
    pub fn lt(a: usize, b: usize, bound: i64) -> Self {
        Constraint { a, b, bound, rel: Rel::Lt }
    }

    pub fn le(a: usize, b: usize, bound: i64) -> Self {
        Constraint { a, b, bound, rel: Rel::Le }
    }

    pub fn eq(a: usize, b: usize, bound: i64) -> Self {
        Constraint { a, b, bound, rel: Rel::Eq }
    }

    fn holds_at(&self, w: &WitnessPoint) -> bool {
        let d = w.diff(self.a, self.b);
        let bound = Coord::from_integer(self.bound);
        match self.rel {
            Rel::Lt => d < bound,
            Rel::Le => d <= bound,
            Rel::Eq => d == bound,
        }
    }
}

/// A system of difference constraints on `n` variables.
#[derive(Debug, Clone, Default)]
pub struct DiffSystem {
    n: usize,
    constraints: Vec<Constraint>,
}

/// Lexicographic weight: (integer part, strictness count).
type Lex = (i64, i64);

fn lex_add(x: Lex, y: Lex) -> Lex {
    (x.0 + y.0, x.1 + y.1)
}

impl DiffSystem {
    pub fn new(n: usize) -> Self {
        DiffSystem {
            n,
            constraints: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn push(&mut self, c: Constraint) {
        debug_assert!(1 <= c.a && c.a <= self.n && 1 <= c.b && c.b <= self.n && c.a != c.b);
        self.constraints.push(c);
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Drop constraints beyond `len` (supports DFS push/pop).
    pub fn truncate(&mut self, len: usize) {
        self.constraints.truncate(len);
    }

    /// Decide feasibility. Returns an exact rational witness satisfying all
    /// equalities exactly and all strict inequalities strictly, or `None`
    /// when the system is infeasible.
    pub fn solve(&self) -> Option<WitnessPoint> {
        let n = self.n;
        // node n is a virtual source; edge u -> v with weight w encodes
        // x_v <= x_u + w (lexicographically)
        let mut edges: Vec<(usize, usize, Lex)> = Vec::new();
        for c in &self.constraints {
            // x_a - x_b (rel) bound  =>  edge b -> a
            let (u, v) = (c.b - 1, c.a - 1);
            match c.rel {
                Rel::Lt => edges.push((u, v, (c.bound, -1))),
                Rel::Le => edges.push((u, v, (c.bound, 0))),
                Rel::Eq => {
                    edges.push((u, v, (c.bound, 0)));
                    edges.push((v, u, (-c.bound, 0)));
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        for v in 0..n {
            edges.push((n, v, (0, 0)));
        }

        let nodes = n + 1;
        let mut dist: Vec<Option<Lex>> = vec![None; nodes];
        dist[n] = Some((0, 0));
        for round in 0..nodes {
            let mut updated = false;
            for &(u, v, w) in &edges {
                if let Some(du) = dist[u] {
                    let cand = lex_add(du, w);
                    if dist[v].map_or(true, |dv| cand < dv) {
                        if round == nodes - 1 {
                            return None; // negative lexicographic cycle
                        }
                        dist[v] = Some(cand);
                        updated = true;
                    }
                }
            }
            if !updated {
                break;
            }
        }

        // realize one strictness unit as delta = 1/(2(n+1))
        let delta = Ratio::new(1i64, 2 * (n as i64 + 1));
        let coords: Vec<Coord> = (0..n)
            .map(|v| {
                let (p, q) = dist[v].expect("source reaches every node");
                Coord::from_integer(p) + Coord::from_integer(q) * delta
            })
            .collect();
        let w = WitnessPoint { coords };
        assert!(
            self.constraints.iter().all(|c| c.holds_at(&w)),
            "witness failed substitution check"
        );
        Some(w)
    }

    /// Like [`solve`](Self::solve) but maps infeasibility to an internal
    /// error, for call sites where the system is known feasible.
    pub fn solve_expect(&self, what: &str) -> Result<WitnessPoint> {
        self.solve()
            .ok_or_else(|| Error::internal(format!("expected feasible system: {what}")))
    }
}

/// Pretty rational in `p/q` notation (integers print without the `/1`).
pub fn fmt_coord(c: &Coord) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// True if `c` is an integer.
pub fn is_integer(c: &Coord) -> bool {
    c.denom().is_one()
}

/// Floor of a rational as i64.
pub fn floor_coord(c: &Coord) -> i64 {
    c.floor().to_integer()
}

/// Ceiling of a rational as i64.
pub fn ceil_coord(c: &Coord) -> i64 {
    c.ceil().to_integer()
}

/// Fractional part in `[0, 1)`.
pub fn frac_part(c: &Coord) -> Coord {
    c - Coord::from_integer(floor_coord(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;

    #[test]
    fn contradiction_is_infeasible() {
        let mut sys = DiffSystem::new(2);
        sys.push(Constraint::lt(1, 2, 0));
        sys.push(Constraint::lt(2, 1, 0));
        assert!(sys.solve().is_none());
    }

    #[test]
    fn strict_band() {
        let mut sys = DiffSystem::new(2);
        sys.push(Constraint::lt(1, 2, 1));
        sys.push(Constraint::lt(2, 1, 0));
        let w = sys.solve().unwrap();
        let d = w.diff(1, 2);
        assert!(d > Coord::zero() && d < Coord::one());
    }

    #[test]
    fn equality_is_exact() {
        let mut sys = DiffSystem::new(3);
        sys.push(Constraint::eq(1, 2, 0));
        sys.push(Constraint::lt(2, 3, 0));
        let w = sys.solve().unwrap();
        assert_eq!(w.diff(1, 2), Coord::zero());
        assert!(w.diff(2, 3) < Coord::zero());
    }

    #[test]
    fn equality_chain_with_offsets() {
        let mut sys = DiffSystem::new(3);
        sys.push(Constraint::eq(1, 2, 1));
        sys.push(Constraint::eq(2, 3, 1));
        let w = sys.solve().unwrap();
        assert_eq!(w.diff(1, 3), Coord::from_integer(2));
    }

    #[test]
    fn tight_strict_cycle_infeasible() {
        // x1 < x2 < x3 < x1 has integer cycle weight 0 but strictness < 0
        let mut sys = DiffSystem::new(3);
        sys.push(Constraint::lt(1, 2, 0));
        sys.push(Constraint::lt(2, 3, 0));
        sys.push(Constraint::lt(3, 1, 0));
        assert!(sys.solve().is_none());

        // non-strict version is feasible (all equal)
        let mut sys = DiffSystem::new(3);
        sys.push(Constraint::le(1, 2, 0));
        sys.push(Constraint::le(2, 3, 0));
        sys.push(Constraint::le(3, 1, 0));
        let w = sys.solve().unwrap();
        assert_eq!(w.diff(1, 2), Coord::zero());
        assert_eq!(w.diff(2, 3), Coord::zero());
    }

    #[test]
    fn eq_conflicts_with_strict() {
        let mut sys = DiffSystem::new(2);
        sys.push(Constraint::eq(1, 2, 0));
        sys.push(Constraint::lt(1, 2, 0));
        assert!(sys.solve().is_none());
    }

    #[test]
    fn duplicates_are_harmless() {
        let mut sys = DiffSystem::new(2);
        for _ in 0..5 {
            sys.push(Constraint::lt(1, 2, 0));
        }
        assert!(sys.solve().is_some());
    }

    #[test]
    fn coord_helpers() {
        let c = Ratio::new(7i64, 2);
        assert_eq!(fmt_coord(&c), "7/2");
        assert_eq!(fmt_coord(&Coord::from_integer(-3)), "-3");
        assert_eq!(floor_coord(&c), 3);
        assert_eq!(ceil_coord(&c), 4);
        assert_eq!(frac_part(&Ratio::new(-1i64, 2)), Ratio::new(1, 2));
    }
}
