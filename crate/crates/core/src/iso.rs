//! Isomorphism search between finite relational/algebraic structures.
//!
//! A structure is flattened to a [`Signature`]: total unary maps, partial
//! binary operations, and binary relations on `0..n`. The search refines an
//! invariant colouring on both sides jointly, then backtracks over
//! colour-compatible assignments, propagating every image forced by the
//! operations. Candidates are tried in increasing index order, so the
//! returned bijection is the least witness for the fixed assignment order.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::util::{limits, BoolMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsoError {
    #[error("isomorphism search exceeded {limit} nodes")]
    SearchLimit { limit: usize },
    #[error("signatures have different shapes")]
    ShapeMismatch,
}

/// Flattened structure used by the search.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    pub n: usize,
    pub unary: Vec<Vec<usize>>,
    /// Each operation is an `n * n` row-major table.
    pub binary: Vec<Vec<Option<usize>>>,
    pub relations: Vec<BoolMatrix>,
    /// Extra per-element labels that any isomorphism must preserve.
    pub labels: Vec<u64>,
}

impl Signature {
    pub fn new(n: usize) -> Self {
        Signature {
            n,
            labels: vec![0; n],
            ..Signature::default()
        }
    }

    pub fn with_unary(mut self, map: Vec<usize>) -> Self {
        self.unary.push(map);
        self
    }

    pub fn with_binary(mut self, table: Vec<Option<usize>>) -> Self {
        self.binary.push(table);
        self
    }

    pub fn with_relation(mut self, rel: BoolMatrix) -> Self {
        self.relations.push(rel);
        self
    }

    fn compatible(&self, other: &Signature) -> bool {
        self.unary.len() == other.unary.len()
            && self.binary.len() == other.binary.len()
            && self.relations.len() == other.relations.len()
    }

    #[inline]
    fn op(&self, k: usize, x: usize, y: usize) -> Option<usize> {
        self.binary[k][x * self.n + y]
    }
}

/// Checks that `f` is an isomorphism from `a` to `b`.
pub fn is_isomorphism(a: &Signature, b: &Signature, f: &[usize]) -> bool {
    if !a.compatible(b) || a.n != b.n || f.len() != a.n {
        return false;
    }
    let mut seen = vec![false; b.n];
    for &y in f {
        if y >= b.n || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    for x in 0..a.n {
        if a.labels[x] != b.labels[f[x]] {
            return false;
        }
        for (ua, ub) in a.unary.iter().zip(&b.unary) {
            if f[ua[x]] != ub[f[x]] {
                return false;
            }
        }
    }
    for x in 0..a.n {
        for y in 0..a.n {
            for k in 0..a.binary.len() {
                if a.op(k, x, y).map(|z| f[z]) != b.op(k, f[x], f[y]) {
                    return false;
                }
            }
            for (ra, rb) in a.relations.iter().zip(&b.relations) {
                if ra.get(x, y) != rb.get(f[x], f[y]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Searches for an isomorphism `a -> b` with the default node cap.
pub fn find_isomorphism(a: &Signature, b: &Signature) -> Result<Option<Vec<usize>>, IsoError> {
    find_isomorphism_with_limit(a, b, limits::ISO_NODE_CAP)
}

pub fn find_isomorphism_with_limit(
    a: &Signature,
    b: &Signature,
    limit: usize,
) -> Result<Option<Vec<usize>>, IsoError> {
    if !a.compatible(b) {
        return Err(IsoError::ShapeMismatch);
    }
    if a.n != b.n {
        return Ok(None);
    }
    let (ca, cb) = refine_colours(a, b);
    let mut hist_a = BTreeMap::new();
    let mut hist_b = BTreeMap::new();
    for &c in &ca {
        *hist_a.entry(c).or_insert(0usize) += 1;
    }
    for &c in &cb {
        *hist_b.entry(c).or_insert(0usize) += 1;
    }
    if hist_a != hist_b {
        return Ok(None);
    }
    let mut order: Vec<usize> = (0..a.n).collect();
    order.sort_by_key(|&x| (hist_a[&ca[x]], x));
    let mut search = Search {
        a,
        b,
        ca: &ca,
        cb: &cb,
        fwd: vec![None; a.n],
        used: vec![false; b.n],
        assigned: Vec::with_capacity(a.n),
        nodes: 0,
        limit,
    };
    if search.descend(&order, 0)? {
        Ok(Some(search.fwd.iter().map(|y| y.expect("complete")).collect()))
    } else {
        Ok(None)
    }
}

/// Joint colour refinement of both structures so colours are comparable.
fn refine_colours(a: &Signature, b: &Signature) -> (Vec<usize>, Vec<usize>) {
    let initial = |s: &Signature, x: usize| -> Vec<u64> {
        let mut key = vec![s.labels[x]];
        for u in &s.unary {
            key.push(u64::from(u[x] == x));
        }
        for k in 0..s.binary.len() {
            key.push(s.op(k, x, x).map_or(2, |z| u64::from(z == x)));
            key.push((0..s.n).filter(|&y| s.op(k, x, y).is_some()).count() as u64);
            key.push((0..s.n).filter(|&y| s.op(k, y, x).is_some()).count() as u64);
        }
        for r in &s.relations {
            key.push(u64::from(r.get(x, x)));
            key.push(r.successors(x).count() as u64);
            key.push(r.predecessors(x).count() as u64);
        }
        key
    };
    let mut palette: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    let intern = |key: Vec<u64>, palette: &mut BTreeMap<Vec<u64>, usize>| -> usize {
        let next = palette.len();
        *palette.entry(key).or_insert(next)
    };
    let mut ca: Vec<usize> = (0..a.n).map(|x| intern(initial(a, x), &mut palette)).collect();
    let mut cb: Vec<usize> = (0..b.n).map(|x| intern(initial(b, x), &mut palette)).collect();

    let signature = |s: &Signature, c: &[usize], x: usize| -> Vec<u64> {
        let none = u64::MAX;
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(s.n);
        for y in 0..s.n {
            let mut row = vec![c[y] as u64];
            for u in &s.unary {
                row.push(u64::from(u[x] == y));
                row.push(u64::from(u[y] == x));
            }
            for k in 0..s.binary.len() {
                row.push(s.op(k, x, y).map_or(none, |z| c[z] as u64));
                row.push(s.op(k, y, x).map_or(none, |z| c[z] as u64));
            }
            for r in &s.relations {
                row.push(u64::from(r.get(x, y)) | (u64::from(r.get(y, x)) << 1));
            }
            rows.push(row);
        }
        rows.sort_unstable();
        let mut key = vec![c[x] as u64];
        for u in &s.unary {
            key.push(c[u[x]] as u64);
        }
        for row in rows {
            key.extend(row);
            key.push(none - 1);
        }
        key
    };

    let classes = |ca: &[usize], cb: &[usize]| -> usize {
        let mut all: Vec<usize> = ca.iter().chain(cb).copied().collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    };
    let mut count = classes(&ca, &cb);
    loop {
        let mut palette: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
        let na: Vec<usize> = (0..a.n)
            .map(|x| intern(signature(a, &ca, x), &mut palette))
            .collect();
        let nb: Vec<usize> = (0..b.n)
            .map(|x| intern(signature(b, &cb, x), &mut palette))
            .collect();
        let next = classes(&na, &nb);
        ca = na;
        cb = nb;
        if next == count {
            break;
        }
        count = next;
    }
    (ca, cb)
}

struct Search<'s> {
    a: &'s Signature,
    b: &'s Signature,
    ca: &'s [usize],
    cb: &'s [usize],
    fwd: Vec<Option<usize>>,
    used: Vec<bool>,
    assigned: Vec<usize>,
    nodes: usize,
    limit: usize,
}

impl Search<'_> {
    fn descend(&mut self, order: &[usize], pos: usize) -> Result<bool, IsoError> {
        let Some(offset) = order[pos..].iter().position(|&x| self.fwd[x].is_none()) else {
            return Ok(true);
        };
        let x = order[pos + offset];
        for y in 0..self.b.n {
            if self.used[y] || self.ca[x] != self.cb[y] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.limit {
                return Err(IsoError::SearchLimit { limit: self.limit });
            }
            let mark = self.assigned.len();
            if self.assign_and_propagate(x, y) && self.descend(order, pos + offset + 1)? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }

    fn undo(&mut self, mark: usize) {
        while self.assigned.len() > mark {
            let x = self.assigned.pop().expect("nonempty");
            let y = self.fwd[x].take().expect("assigned");
            self.used[y] = false;
        }
    }

    fn try_assign(&mut self, x: usize, y: usize, queue: &mut Vec<usize>) -> bool {
        match self.fwd[x] {
            Some(z) => z == y,
            None => {
                if self.used[y] || self.ca[x] != self.cb[y] {
                    return false;
                }
                self.fwd[x] = Some(y);
                self.used[y] = true;
                self.assigned.push(x);
                queue.push(x);
                true
            }
        }
    }

    fn assign_and_propagate(&mut self, x: usize, y: usize) -> bool {
        let mut queue = Vec::new();
        if !self.try_assign(x, y, &mut queue) {
            return false;
        }
        while let Some(x) = queue.pop() {
            let y = self.fwd[x].expect("queued elements are assigned");
            for k in 0..self.a.unary.len() {
                let (ux, uy) = (self.a.unary[k][x], self.b.unary[k][y]);
                if !self.try_assign(ux, uy, &mut queue) {
                    return false;
                }
            }
            // Compare against every assigned element, including x itself.
            let partners: Vec<usize> = self.assigned.clone();
            for z in partners {
                let w = self.fwd[z].expect("assigned");
                for (ra, rb) in self.a.relations.iter().zip(&self.b.relations) {
                    if ra.get(x, z) != rb.get(y, w) || ra.get(z, x) != rb.get(w, y) {
                        return false;
                    }
                }
                for k in 0..self.a.binary.len() {
                    for ((p, q), (r, s)) in [((x, z), (y, w)), ((z, x), (w, y))] {
                        match (self.a.op(k, p, q), self.b.op(k, r, s)) {
                            (None, None) => {}
                            (Some(u), Some(v)) => {
                                if !self.try_assign(u, v, &mut queue) {
                                    return false;
                                }
                            }
                            _ => return false,
                        }
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyclic(n: usize) -> Signature {
        let table = (0..n * n).map(|k| Some((k / n + k % n) % n)).collect();
        Signature::new(n).with_binary(table)
    }

    #[test]
    fn finds_automorphism_of_cyclic_group() {
        let g = cyclic(5);
        let f = find_isomorphism(&g, &g).unwrap().unwrap();
        assert!(is_isomorphism(&g, &g, &f));
        assert_eq!(f, (0..5).collect::<Vec<_>>());
    }

    #[test]
    fn z4_is_not_klein() {
        let klein: Vec<Option<usize>> = (0..16).map(|k| Some((k / 4) ^ (k % 4))).collect();
        let k4 = Signature::new(4).with_binary(klein);
        assert_eq!(find_isomorphism(&cyclic(4), &k4).unwrap(), None);
    }

    #[test]
    fn relabelled_structure_is_found() {
        let g = cyclic(6);
        // Relabel by the permutation p(i) = 5 - i.
        let p: Vec<usize> = (0..6).map(|i| 5 - i).collect();
        let mut table = vec![None; 36];
        for x in 0..6 {
            for y in 0..6 {
                table[p[x] * 6 + p[y]] = g.op(0, x, y).map(|z| p[z]);
            }
        }
        let h = Signature::new(6).with_binary(table);
        let f = find_isomorphism(&g, &h).unwrap().unwrap();
        assert!(is_isomorphism(&g, &h, &f));
    }

    #[test]
    fn node_limit_is_enforced() {
        // Two antichains: every bijection works, but a limit of zero forbids any node.
        let a = Signature::new(3).with_relation(BoolMatrix::identity(3));
        assert_eq!(
            find_isomorphism_with_limit(&a, &a, 0),
            Err(IsoError::SearchLimit { limit: 0 })
        );
    }
}
