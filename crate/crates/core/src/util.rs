//! Small shared containers and size limits.

use std::fmt;

/// Dense square boolean matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BoolMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl BoolMatrix {
    pub fn new(n: usize) -> Self {
        BoolMatrix {
            n,
            bits: vec![false; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BoolMatrix::new(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                bits.push(f(i, j));
            }
        }
        BoolMatrix { n, bits }
    }

    /// Builds from nested rows; `None` if the rows are not square.
    pub fn from_rows(rows: &[Vec<bool>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        Some(BoolMatrix {
            n,
            bits: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.bits[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<bool>> {
        self.bits.chunks(self.n.max(1)).take(self.n).map(<[bool]>::to_vec).collect()
    }

    /// Elements `j` with `self[i][j]`.
    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.get(i, j))
    }

    /// Elements `j` with `self[j][i]`.
    pub fn predecessors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.get(j, i))
    }

    /// All pairs `(i, j)` in the relation, in row-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| self.successors(i).map(move |j| (i, j)))
    }

    /// First witness that the relation is not a partial order.
    pub fn partial_order_violation(&self) -> Option<OrderViolation> {
        let n = self.n;
        for i in 0..n {
            if !self.get(i, i) {
                return Some(OrderViolation::NotReflexive(i));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if self.get(i, j) && self.get(j, i) {
                    return Some(OrderViolation::NotAntisymmetric(i, j));
                }
            }
        }
        for i in 0..n {
            for j in self.successors(i) {
                for k in self.successors(j) {
                    if !self.get(i, k) {
                        return Some(OrderViolation::NotTransitive(i, j, k));
                    }
                }
            }
        }
        None
    }

    /// Reflexive-transitive closure (Warshall).
    pub fn closure(&self) -> BoolMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.set(i, i, true);
        }
        for k in 0..self.n {
            for i in 0..self.n {
                if m.get(i, k) {
                    for j in 0..self.n {
                        if m.get(k, j) {
                            m.set(i, j, true);
                        }
                    }
                }
            }
        }
        m
    }
}

impl fmt::Debug for BoolMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            for j in 0..self.n {
                f.write_str(if self.get(i, j) { "1" } else { "0" })?;
            }
            if i + 1 < self.n {
                f.write_str("/")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderViolation {
    NotReflexive(usize),
    NotAntisymmetric(usize, usize),
    NotTransitive(usize, usize, usize),
}

impl fmt::Display for OrderViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderViolation::NotReflexive(i) => write!(f, "not reflexive at #{i}"),
            OrderViolation::NotAntisymmetric(i, j) => write!(f, "not antisymmetric at (#{i}, #{j})"),
            OrderViolation::NotTransitive(i, j, k) => {
                write!(f, "not transitive at (#{i}, #{j}, #{k})")
            }
        }
    }
}

impl OrderViolation {
    pub fn witness(&self) -> Vec<usize> {
        match *self {
            OrderViolation::NotReflexive(i) => vec![i],
            OrderViolation::NotAntisymmetric(i, j) => vec![i, j],
            OrderViolation::NotTransitive(i, j, k) => vec![i, j, k],
        }
    }
}

/// Greatest lower bound of `a` and `b` in the poset given by `leq`,
/// restricted to the candidate elements `within`.
pub fn meet_in(leq: &BoolMatrix, within: &[usize], a: usize, b: usize) -> Meet {
    let lower: Vec<usize> = within
        .iter()
        .copied()
        .filter(|&z| leq.get(z, a) && leq.get(z, b))
        .collect();
    if lower.is_empty() {
        return Meet::NoLowerBound;
    }
    match lower
        .iter()
        .copied()
        .find(|&m| lower.iter().all(|&z| leq.get(z, m)))
    {
        Some(m) => Meet::Exists(m),
        None => Meet::NoGreatest,
    }
}

/// Outcome of a meet search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Meet {
    Exists(usize),
    /// Lower bounds exist but none is greatest.
    NoGreatest,
    NoLowerBound,
}

impl Meet {
    pub fn value(self) -> Option<usize> {
        match self {
            Meet::Exists(m) => Some(m),
            _ => None,
        }
    }
}

/// Size caps for generators and conversions.
pub mod limits {
    /// Default cap on generated carriers.
    pub const GENERATOR_CAP: usize = 5_000;
    /// Default cap on the output of any conversion.
    pub const CONVERSION_CAP: usize = 200_000;
    /// No override may exceed this.
    pub const HARD_CEILING: usize = 2_000_000;
    /// Cap on `|category| * |groupoid|` action-table entries.
    pub const ACTION_TABLE_CAP: usize = 1_000_000;
    /// Cap on backtracking nodes in isomorphism search.
    pub const ISO_NODE_CAP: usize = 1_000_000;

    pub const ENV_OVERRIDE: &str = "ESNKIT_MAX_ELEMENTS";

    fn override_value() -> Option<usize> {
        std::env::var(ENV_OVERRIDE)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|v| v.min(HARD_CEILING))
    }

    pub fn generator_cap() -> usize {
        override_value().unwrap_or(GENERATOR_CAP)
    }

    pub fn conversion_cap() -> usize {
        override_value().unwrap_or(CONVERSION_CAP)
    }
}
