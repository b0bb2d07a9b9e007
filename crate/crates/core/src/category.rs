//! Finite categories given by partial composition tables.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::iso::Signature;
use crate::semigroup::InvSemigroup;
use crate::util::BoolMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("category has no arrows")]
    Empty,
    #[error("field `{field}` has length {got}, expected {expected}")]
    Shape {
        field: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("field `{field}` holds out-of-range index {value}")]
    OutOfRange { field: &'static str, value: usize },
    #[error("dom or cod of #{0} is not an identity")]
    NotAnIdentity(usize),
    #[error("#{0}·#{1} is defined exactly when dom/cod disagree")]
    Definedness(usize, usize),
    #[error("#{0}·#{1} has the wrong domain or codomain")]
    ProductEnds(usize, usize),
    #[error("identity law fails at #{0}")]
    IdentityLaw(usize),
    #[error("(#{0}·#{1})·#{2} differs from #{0}·(#{1}·#{2})")]
    NotAssociative(usize, usize, usize),
    #[error("not left cancellative: #{0}·#{1} = #{0}·#{2}")]
    NotLeftCancellative(usize, usize, usize),
    #[error("not right cancellative: #{1}·#{0} = #{2}·#{0}")]
    NotRightCancellative(usize, usize, usize),
    #[error("identity #{0} has no arrow to the proposed weak terminal identity")]
    NotWeakTerminal(usize),
    #[error("#{0} is not an identity")]
    NotAnObject(usize),
    #[error("semigroup has no identity")]
    NotAMonoid,
    #[error("quiver has a path longer than {0}")]
    PathBound(usize),
    #[error("{0} arrows exceed the cap {1}")]
    TooLarge(usize, usize),
    #[error("functor map has length {got}, expected {expected}")]
    MapLength { expected: usize, got: usize },
    #[error("map is not a functor at #{0}")]
    NotAFunctor(usize),
    #[error("map is not a functor on the product #{0}·#{1}")]
    NotAFunctorOnProduct(usize, usize),
}

impl CategoryError {
    pub fn witness(&self) -> Vec<usize> {
        use CategoryError::*;
        match *self {
            NotAnIdentity(x) | IdentityLaw(x) | NotWeakTerminal(x) | NotAnObject(x) | NotAFunctor(x) => vec![x],
            Definedness(x, y) | ProductEnds(x, y) | NotAFunctorOnProduct(x, y) => vec![x, y],
            NotAssociative(x, y, z) | NotLeftCancellative(x, y, z) | NotRightCancellative(x, y, z) => vec![x, y, z],
            OutOfRange { value, .. } => vec![value],
            _ => Vec::new(),
        }
    }
}

/// Serializable form: `comp[x][y]` is `x·y` (first `y`, then `x`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawCategory {
    pub arrows: Vec<String>,
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
    pub comp: Vec<Vec<Option<usize>>>,
}

/// A validated finite category. `x·y` is defined iff `dom(x) = cod(y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    names: Vec<String>,
    dom: Vec<usize>,
    cod: Vec<usize>,
    comp: Vec<Option<usize>>,
    identities: Vec<usize>,
    into: Vec<Vec<usize>>,
    from: Vec<Vec<usize>>,
    inverse: Vec<Option<usize>>,
    left_failure: Option<(usize, usize, usize)>,
    right_failure: Option<(usize, usize, usize)>,
}

fn check_len(field: &'static str, got: usize, expected: usize) -> Result<(), CategoryError> {
    if got != expected {
        return Err(CategoryError::Shape { field, expected, got });
    }
    Ok(())
}

fn check_range(field: &'static str, v: &[usize], n: usize) -> Result<(), CategoryError> {
    match v.iter().find(|&&x| x >= n) {
        Some(&value) => Err(CategoryError::OutOfRange { field, value }),
        None => Ok(()),
    }
}

impl FinCategory {
    /// Builds and validates; `compose(x, y)` is only called when `dom(x) = cod(y)`.
    pub fn build(
        names: Vec<String>,
        dom: Vec<usize>,
        cod: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> usize,
    ) -> Result<FinCategory, CategoryError> {
        let n = names.len();
        if n == 0 {
            return Err(CategoryError::Empty);
        }
        check_len("dom", dom.len(), n)?;
        check_len("cod", cod.len(), n)?;
        check_range("dom", &dom, n)?;
        check_range("cod", &cod, n)?;
        let cap = crate::util::limits::conversion_cap();
        if n * n > cap.saturating_mul(64) {
            return Err(CategoryError::TooLarge(n, cap));
        }
        let mut comp = vec![None; n * n];
        for x in 0..n {
            for y in 0..n {
                if dom[x] == cod[y] {
                    let v = compose(x, y);
                    if v >= n {
                        return Err(CategoryError::OutOfRange { field: "comp", value: v });
                    }
                    comp[x * n + y] = Some(v);
                }
            }
        }
        Self::assemble(names, dom, cod, comp)
    }

    pub fn from_raw(raw: RawCategory) -> Result<FinCategory, CategoryError> {
        let n = raw.arrows.len();
        if n == 0 {
            return Err(CategoryError::Empty);
        }
        check_len("dom", raw.dom.len(), n)?;
        check_len("cod", raw.cod.len(), n)?;
        check_len("comp", raw.comp.len(), n)?;
        check_range("dom", &raw.dom, n)?;
        check_range("cod", &raw.cod, n)?;
        let mut comp = Vec::with_capacity(n * n);
        for (x, row) in raw.comp.iter().enumerate() {
            check_len("comp row", row.len(), n)?;
            for (y, &v) in row.iter().enumerate() {
                if let Some(v) = v {
                    if v >= n {
                        return Err(CategoryError::OutOfRange { field: "comp", value: v });
                    }
                }
                if v.is_some() != (raw.dom[x] == raw.cod[y]) {
                    return Err(CategoryError::Definedness(x, y));
                }
                comp.push(v);
            }
        }
        Self::assemble(raw.arrows, raw.dom, raw.cod, comp)
    }

    fn assemble(
        names: Vec<String>,
        dom: Vec<usize>,
        cod: Vec<usize>,
        comp: Vec<Option<usize>>,
    ) -> Result<FinCategory, CategoryError> {
        let n = names.len();
        for x in 0..n {
            for e in [dom[x], cod[x]] {
                if dom[e] != e || cod[e] != e {
                    return Err(CategoryError::NotAnIdentity(x));
                }
            }
        }
        let mut into = vec![Vec::new(); n];
        let mut from = vec![Vec::new(); n];
        for x in 0..n {
            into[cod[x]].push(x);
            from[dom[x]].push(x);
        }
        let identities: Vec<usize> = (0..n).filter(|&x| dom[x] == x).collect();
        let mut c = FinCategory {
            names,
            dom,
            cod,
            comp,
            identities,
            into,
            from,
            inverse: Vec::new(),
            left_failure: None,
            right_failure: None,
        };
        c.check_laws()?;
        c.inverse = (0..n)
            .map(|x| {
                c.from[c.cod[x]]
                    .iter()
                    .copied()
                    .find(|&y| c.cod[y] == c.dom[x] && c.mul(x, y) == c.cod[x] && c.mul(y, x) == c.dom[x])
            })
            .collect();
        c.left_failure = c.scan_left();
        c.right_failure = c.scan_right();
        Ok(c)
    }

    fn check_laws(&self) -> Result<(), CategoryError> {
        let n = self.len();
        for x in 0..n {
            for &y in &self.into[self.dom[x]] {
                let xy = self.mul(x, y);
                if self.dom[xy] != self.dom[y] || self.cod[xy] != self.cod[x] {
                    return Err(CategoryError::ProductEnds(x, y));
                }
            }
            if self.mul(self.cod[x], x) != x || self.mul(x, self.dom[x]) != x {
                return Err(CategoryError::IdentityLaw(x));
            }
        }
        for x in 0..n {
            for &y in &self.into[self.dom[x]] {
                let xy = self.mul(x, y);
                for &z in &self.into[self.dom[y]] {
                    if self.mul(xy, z) != self.mul(x, self.mul(y, z)) {
                        return Err(CategoryError::NotAssociative(x, y, z));
                    }
                }
            }
        }
        Ok(())
    }

    fn scan_left(&self) -> Option<(usize, usize, usize)> {
        for x in 0..self.len() {
            let mut seen = std::collections::BTreeMap::new();
            for &y in &self.into[self.dom[x]] {
                if let Some(&z) = seen.get(&self.mul(x, y)) {
                    return Some((x, z, y));
                }
                seen.insert(self.mul(x, y), y);
            }
        }
        None
    }

    fn scan_right(&self) -> Option<(usize, usize, usize)> {
        for x in 0..self.len() {
            let mut seen = std::collections::BTreeMap::new();
            for &y in &self.from[self.cod[x]] {
                if let Some(&z) = seen.get(&self.mul(y, x)) {
                    return Some((x, z, y));
                }
                seen.insert(self.mul(y, x), y);
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    #[inline]
    pub fn dom(&self, x: usize) -> usize {
        self.dom[x]
    }

    #[inline]
    pub fn cod(&self, x: usize) -> usize {
        self.cod[x]
    }

    pub fn doms(&self) -> &[usize] {
        &self.dom
    }

    pub fn cods(&self) -> &[usize] {
        &self.cod
    }

    /// `x·y` when `dom(x) = cod(y)`.
    #[inline]
    pub fn comp(&self, x: usize, y: usize) -> Option<usize> {
        self.comp[x * self.len() + y]
    }

    #[inline]
    pub(crate) fn mul(&self, x: usize, y: usize) -> usize {
        self.comp(x, y).expect("composable arrows")
    }

    pub fn comp_table(&self) -> Vec<Vec<Option<usize>>> {
        self.comp.chunks(self.len()).map(<[Option<usize>]>::to_vec).collect()
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    pub fn is_identity(&self, x: usize) -> bool {
        self.dom[x] == x
    }

    /// Arrows with codomain `e`.
    pub fn arrows_into(&self, e: usize) -> &[usize] {
        &self.into[e]
    }

    /// Arrows with domain `e`.
    pub fn arrows_from(&self, e: usize) -> &[usize] {
        &self.from[e]
    }

    /// Arrows `from → to`.
    pub fn hom(&self, from: usize, to: usize) -> impl Iterator<Item = usize> + '_ {
        self.from[from].iter().copied().filter(move |&x| self.cod[x] == to)
    }

    pub fn inverse(&self, x: usize) -> Option<usize> {
        self.inverse[x]
    }

    pub fn is_iso(&self, x: usize) -> bool {
        self.inverse[x].is_some()
    }

    pub fn isos(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&x| self.is_iso(x))
    }

    pub fn is_left_cancellative(&self) -> bool {
        self.left_failure.is_none()
    }

    pub fn is_right_cancellative(&self) -> bool {
        self.right_failure.is_none()
    }

    /// `(x, y, z)` with `x·y = x·z`, `y ≠ z`.
    pub fn left_cancellation_failure(&self) -> Option<(usize, usize, usize)> {
        self.left_failure
    }

    /// `(x, y, z)` with `y·x = z·x`, `y ≠ z`.
    pub fn right_cancellation_failure(&self) -> Option<(usize, usize, usize)> {
        self.right_failure
    }

    pub fn require_left_cancellative(&self) -> Result<(), CategoryError> {
        match self.left_failure {
            Some((x, y, z)) => Err(CategoryError::NotLeftCancellative(x, y, z)),
            None => Ok(()),
        }
    }

    pub fn require_right_cancellative(&self) -> Result<(), CategoryError> {
        match self.right_failure {
            Some((x, y, z)) => Err(CategoryError::NotRightCancellative(x, y, z)),
            None => Ok(()),
        }
    }

    /// Every identity has an arrow into `one`.
    pub fn weak_terminal_failure(&self, one: usize) -> Option<usize> {
        self.identities.iter().copied().find(|&e| self.hom(e, one).next().is_none())
    }

    pub fn weak_terminals(&self) -> Vec<usize> {
        self.identities
            .iter()
            .copied()
            .filter(|&e| self.weak_terminal_failure(e).is_none())
            .collect()
    }

    /// The opposite category on the same arrow indices.
    pub fn op(&self) -> FinCategory {
        let n = self.len();
        let comp = (0..n * n).map(|i| self.comp[(i % n) * n + i / n]).collect();
        Self::assemble(self.names.clone(), self.cod.clone(), self.dom.clone(), comp)
            .expect("opposite of a category")
    }

    pub fn to_raw(&self) -> RawCategory {
        RawCategory {
            arrows: self.names.clone(),
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            comp: self.comp_table(),
        }
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.len())
            .with_unary(self.dom.clone())
            .with_unary(self.cod.clone())
            .with_binary(self.comp.clone())
    }

    pub fn with_names(mut self, names: Vec<String>) -> FinCategory {
        assert_eq!(names.len(), self.len());
        self.names = names;
        self
    }

    /// The one-object category of a monoid table.
    pub fn from_monoid_table(names: Vec<String>, table: &[usize], identity: usize) -> Result<FinCategory, CategoryError> {
        let n = names.len();
        check_len("table", table.len(), n * n)?;
        if identity >= n {
            return Err(CategoryError::OutOfRange { field: "identity", value: identity });
        }
        check_range("table", table, n)?;
        FinCategory::build(names, vec![identity; n], vec![identity; n], |x, y| table[x * n + y])
    }

    /// The one-object category of an inverse monoid.
    pub fn from_monoid(s: &InvSemigroup) -> Result<FinCategory, CategoryError> {
        let one = s.identity().ok_or(CategoryError::NotAMonoid)?;
        let n = s.len();
        let table: Vec<usize> = (0..n * n).map(|i| s.mul(i / n, i % n)).collect();
        FinCategory::from_monoid_table(s.names().to_vec(), &table, one)
    }

    /// A poset as a category: one arrow `i → j` for each `i ≤ j`.
    pub fn from_poset(names: &[String], leq: &BoolMatrix) -> Result<FinCategory, CategoryError> {
        let k = names.len();
        check_len("order", leq.size(), k)?;
        let mut pairs: Vec<(usize, usize)> = (0..k).map(|i| (i, i)).collect();
        pairs.extend(leq.pairs().filter(|&(i, j)| i != j));
        let index = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j));
        let mut arrow_names = Vec::new();
        let (mut dom, mut cod) = (Vec::new(), Vec::new());
        for &(i, j) in &pairs {
            arrow_names.push(if i == j { names[i].clone() } else { format!("{}<={}", names[i], names[j]) });
            dom.push(i);
            cod.push(j);
        }
        FinCategory::build(arrow_names, dom, cod, |x, y| {
            index(pairs[y].0, pairs[x].1).unwrap_or(usize::MAX)
        })
    }

    /// Paths of a quiver. Fails when a path longer than `max_len` exists,
    /// so the result is always closed under composition.
    pub fn free_category(vertices: &[String], edges: &[(String, usize, usize)], max_len: usize) -> Result<FinCategory, CategoryError> {
        let k = vertices.len();
        if let Some(&(_, s, t)) = edges.iter().find(|&&(_, s, t)| s >= k || t >= k) {
            return Err(CategoryError::OutOfRange { field: "edge", value: s.max(t) });
        }
        // Paths stored as edge lists in traversal order.
        let mut paths: Vec<(usize, usize, Vec<usize>)> = (0..k).map(|v| (v, v, Vec::new())).collect();
        let mut frontier: Vec<usize> = Vec::new();
        for (i, &(_, s, t)) in edges.iter().enumerate() {
            frontier.push(paths.len());
            paths.push((s, t, vec![i]));
        }
        let cap = crate::util::limits::generator_cap();
        let mut len = 1;
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &p in &frontier {
                let (s, t, ref es) = paths[p];
                let es = es.clone();
                for (i, &(_, a, b)) in edges.iter().enumerate() {
                    if a == t {
                        if len + 1 > max_len {
                            return Err(CategoryError::PathBound(max_len));
                        }
                        let mut e2 = es.clone();
                        e2.push(i);
                        next.push(paths.len());
                        paths.push((s, b, e2));
                        if paths.len() > cap {
                            return Err(CategoryError::TooLarge(paths.len(), cap));
                        }
                    }
                }
            }
            frontier = next;
            len += 1;
        }
        let names = paths
            .iter()
            .map(|(s, _, es)| {
                if es.is_empty() {
                    vertices[*s].clone()
                } else {
                    es.iter().rev().map(|&e| edges[e].0.as_str()).collect::<Vec<_>>().join(".")
                }
            })
            .collect();
        let dom = paths.iter().map(|p| p.0).collect();
        let cod = paths.iter().map(|p| p.1).collect();
        FinCategory::build(names, dom, cod, |x, y| {
            let mut es = paths[y].2.clone();
            es.extend_from_slice(&paths[x].2);
            if es.is_empty() {
                return x;
            }
            paths
                .iter()
                .position(|p| p.2 == es)
                .unwrap_or(usize::MAX)
        })
    }
}

/// Full, faithful and essentially surjective, each with a witness on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub injective: bool,
    /// `(a, b)` distinct arrows with equal images in the same hom-set.
    pub faithful_failure: Option<(usize, usize)>,
    /// Target arrow between images of objects that is not hit.
    pub full_failure: Option<usize>,
    /// Target object not isomorphic to any image object.
    pub dense_failure: Option<usize>,
}

impl EquivalenceReport {
    pub fn faithful(&self) -> bool {
        self.faithful_failure.is_none()
    }

    pub fn full(&self) -> bool {
        self.full_failure.is_none()
    }

    pub fn essentially_surjective(&self) -> bool {
        self.dense_failure.is_none()
    }

    pub fn is_equivalence(&self) -> bool {
        self.faithful() && self.full() && self.essentially_surjective()
    }
}

/// A map between categories checked to be a functor.
#[derive(Clone, Debug)]
pub struct CategoryFunctor<'a> {
    pub source: &'a FinCategory,
    pub target: &'a FinCategory,
    pub map: Vec<usize>,
}

impl<'a> CategoryFunctor<'a> {
    pub fn new(source: &'a FinCategory, target: &'a FinCategory, map: Vec<usize>) -> Result<Self, CategoryError> {
        if map.len() != source.len() {
            return Err(CategoryError::MapLength {
                expected: source.len(),
                got: map.len(),
            });
        }
        check_range("map", &map, target.len())?;
        for x in 0..source.len() {
            let fx = map[x];
            if map[source.dom(x)] != target.dom(fx) || map[source.cod(x)] != target.cod(fx) {
                return Err(CategoryError::NotAFunctor(x));
            }
            if source.is_identity(x) && !target.is_identity(fx) {
                return Err(CategoryError::NotAFunctor(x));
            }
            for &y in source.arrows_into(source.dom(x)) {
                if target.comp(fx, map[y]) != Some(map[source.mul(x, y)]) {
                    return Err(CategoryError::NotAFunctorOnProduct(x, y));
                }
            }
        }
        Ok(CategoryFunctor { source, target, map })
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn equivalence_report(&self) -> EquivalenceReport {
        let (s, t) = (self.source, self.target);
        let image: BTreeSet<usize> = self.map.iter().copied().collect();
        let mut faithful_failure = None;
        'outer: for &e in s.identities() {
            for &f in s.identities() {
                let mut seen = std::collections::BTreeMap::new();
                for a in s.hom(e, f) {
                    if let Some(&b) = seen.get(&self.map[a]) {
                        faithful_failure = Some((b, a));
                        break 'outer;
                    }
                    seen.insert(self.map[a], a);
                }
            }
        }
        let mut full_failure = None;
        'full: for &e in s.identities() {
            for &f in s.identities() {
                let hit: BTreeSet<usize> = s.hom(e, f).map(|a| self.map[a]).collect();
                if let Some(z) = t.hom(self.map[e], self.map[f]).find(|z| !hit.contains(z)) {
                    full_failure = Some(z);
                    break 'full;
                }
            }
        }
        let objects: BTreeSet<usize> = s.identities().iter().map(|&e| self.map[e]).collect();
        let dense_failure = t.identities().iter().copied().find(|&o| {
            !t.arrows_from(o).iter().any(|&u| t.is_iso(u) && objects.contains(&t.cod(u)))
        });
        EquivalenceReport {
            injective: image.len() == s.len(),
            faithful_failure,
            full_failure,
            dense_failure,
        }
    }
}
