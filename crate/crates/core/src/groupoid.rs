//! Finite groupoids and ordered groupoids.
//!
//! A groupoid stores its partial product per hom-set: `x·y` is defined iff
//! `dom(x) = cod(y)`, and only those products are kept.

use std::collections::BTreeSet;
use std::fmt;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::iso::Signature;
use crate::util::{meet_in, BoolMatrix, Meet, OrderViolation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupoidError {
    #[error("empty carrier")]
    Empty,
    #[error("field `{field}` has {got} entries, expected {expected}")]
    Shape {
        field: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("field `{field}` refers to #{value}, out of range")]
    OutOfRange { field: &'static str, value: usize },
    #[error("domain or codomain of #{0} is not an identity")]
    NotAnIdentity(usize),
    #[error("product #{0}·#{1} is defined iff dom(#{0}) = cod(#{1}), violated")]
    Definedness(usize, usize),
    #[error("product #{0}·#{1} has the wrong domain or codomain")]
    ProductEnds(usize, usize),
    #[error("identity law fails at #{0}")]
    IdentityLaw(usize),
    #[error("inverse law fails at #{0}")]
    InverseLaw(usize),
    #[error("not associative at (#{0}, #{1}, #{2})")]
    NotAssociative(usize, usize, usize),
    #[error("order relation: {0}")]
    Order(OrderViolation),
    #[error("OG1 fails: #{0} <= #{1} but not for inverses")]
    Og1(usize, usize),
    #[error("OG2 fails: #{0} <= #{1}, #{2} <= #{3}, products not ordered")]
    Og2(usize, usize, usize, usize),
    #[error("OG3 fails: no restriction of #{x} to identity #{e}")]
    Og3Missing { x: usize, e: usize },
    #[error("OG3 fails: #{z1} and #{z2} both restrict #{x} to #{e}")]
    Og3NotUnique { x: usize, e: usize, z1: usize, z2: usize },
    #[error("OG3* fails: no corestriction of #{x} to identity #{e}")]
    Og3StarMissing { x: usize, e: usize },
    #[error("OG3* fails: #{z1} and #{z2} both corestrict #{x} to #{e}")]
    Og3StarNotUnique { x: usize, e: usize, z1: usize, z2: usize },
    #[error("OI fails: #{below} <= identity #{e} but is not an identity")]
    Oi { below: usize, e: usize },
    #[error("OG4 fails: nothing below #{x} with domain #{e}")]
    Og4 { x: usize, e: usize },
    #[error("order is not trivial on a hom-set: #{0} < #{1}")]
    HomSetOrder(usize, usize),
    #[error("the two axiom systems disagree (classical: {classical}, alternative: {alternative})")]
    AxiomSystemsDisagree { classical: bool, alternative: bool },
    #[error("precondition failed: #{e} is not an identity below the required end of #{x}")]
    PreconditionFailed { x: usize, e: usize },
    #[error("restriction characterizations disagree at (#{0}, #{1})")]
    OracleMismatch(usize, usize),
    #[error("not a functor at #{0}")]
    NotAFunctor(usize),
    #[error("not a functor on the product #{0}·#{1}")]
    NotAFunctorOnProduct(usize, usize),
    #[error("map has {got} entries, source has {expected}")]
    MapLength { expected: usize, got: usize },
    #[error("not an ordered subgroupoid at #{0}")]
    NotAnOrderedSubgroupoid(usize),
}

impl GroupoidError {
    /// Element indices naming the failure.
    pub fn witness(&self) -> Vec<usize> {
        use GroupoidError::*;
        match *self {
            NotAnIdentity(x) | IdentityLaw(x) | InverseLaw(x) | NotAFunctor(x) => vec![x],
            NotAnOrderedSubgroupoid(x) => vec![x],
            Definedness(x, y) | ProductEnds(x, y) | NotAFunctorOnProduct(x, y) => vec![x, y],
            NotAssociative(x, y, z) => vec![x, y, z],
            Order(v) => v.witness(),
            Og1(x, y) | HomSetOrder(x, y) | OracleMismatch(x, y) => vec![x, y],
            Og2(a, b, c, d) => vec![a, b, c, d],
            Og3Missing { x, e } | Og3StarMissing { x, e } | Og4 { x, e } => vec![x, e],
            Og3NotUnique { x, e, z1, z2 } | Og3StarNotUnique { x, e, z1, z2 } => vec![x, e, z1, z2],
            Oi { below, e } => vec![below, e],
            PreconditionFailed { x, e } => vec![x, e],
            _ => Vec::new(),
        }
    }

    /// Short axiom tag for reports.
    pub fn tag(&self) -> &'static str {
        use GroupoidError::*;
        match self {
            Og1(..) => "OG1",
            Og2(..) => "OG2",
            Og3Missing { .. } | Og3NotUnique { .. } => "OG3",
            Og3StarMissing { .. } | Og3StarNotUnique { .. } => "OG3*",
            Oi { .. } => "OI",
            Og4 { .. } => "OG4",
            Order(_) => "order",
            HomSetOrder(..) => "hom-set order",
            _ => "groupoid",
        }
    }
}

/// Unvalidated groupoid data as it appears in files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawGroupoid {
    pub elements: Vec<String>,
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
    pub inv: Vec<usize>,
    pub comp: Vec<Vec<Option<usize>>>,
    pub leq: Option<Vec<Vec<bool>>>,
}

/// A validated finite groupoid.
#[derive(Clone, PartialEq, Eq)]
pub struct Groupoid {
    names: Vec<String>,
    dom: Vec<usize>,
    cod: Vec<usize>,
    inv: Vec<usize>,
    /// Arrows grouped by codomain.
    into: Vec<Vec<usize>>,
    /// Arrows grouped by domain.
    from: Vec<Vec<usize>>,
    /// Position of each arrow within `into[cod]`.
    slot: Vec<usize>,
    /// `prod[x][slot[y]] = x·y` for `y` in `into[dom x]`.
    prod: Vec<Vec<usize>>,
    identities: Vec<usize>,
}

impl fmt::Debug for Groupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Groupoid")
            .field("names", &self.names)
            .field("identities", &self.identities)
            .finish_non_exhaustive()
    }
}

fn check_len(field: &'static str, got: usize, expected: usize) -> Result<(), GroupoidError> {
    if got != expected {
        return Err(GroupoidError::Shape { field, got, expected });
    }
    Ok(())
}

fn check_range(field: &'static str, v: &[usize], n: usize) -> Result<(), GroupoidError> {
    match v.iter().find(|&&x| x >= n) {
        Some(&value) => Err(GroupoidError::OutOfRange { field, value }),
        None => Ok(()),
    }
}

impl Groupoid {
    /// Builds and validates a groupoid; `compose(x, y)` is only called when `dom(x) = cod(y)`.
    pub fn build(
        names: Vec<String>,
        dom: Vec<usize>,
        cod: Vec<usize>,
        inv: Vec<usize>,
        mut compose: impl FnMut(usize, usize) -> usize,
    ) -> Result<Groupoid, GroupoidError> {
        let n = names.len();
        if n == 0 {
            return Err(GroupoidError::Empty);
        }
        check_len("dom", dom.len(), n)?;
        check_len("cod", cod.len(), n)?;
        check_len("inv", inv.len(), n)?;
        check_range("dom", &dom, n)?;
        check_range("cod", &cod, n)?;
        check_range("inv", &inv, n)?;
        for x in 0..n {
            let (d, c) = (dom[x], cod[x]);
            if dom[d] != d || cod[d] != d || dom[c] != c || cod[c] != c {
                return Err(GroupoidError::NotAnIdentity(x));
            }
        }
        let mut into = vec![Vec::new(); n];
        let mut from = vec![Vec::new(); n];
        let mut slot = vec![0; n];
        for y in 0..n {
            slot[y] = into[cod[y]].len();
            into[cod[y]].push(y);
            from[dom[y]].push(y);
        }
        let mut prod = Vec::with_capacity(n);
        for x in 0..n {
            let row: Vec<usize> = into[dom[x]].iter().map(|&y| compose(x, y)).collect();
            if let Some(&value) = row.iter().find(|&&v| v >= n) {
                return Err(GroupoidError::OutOfRange { field: "comp", value });
            }
            prod.push(row);
        }
        let identities = (0..n).filter(|&x| dom[x] == x).collect();
        let g = Groupoid {
            names,
            dom,
            cod,
            inv,
            into,
            from,
            slot,
            prod,
            identities,
        };
        g.check_laws()?;
        Ok(g)
    }

    /// Validates a full partial table.
    pub fn from_table(
        names: Vec<String>,
        dom: Vec<usize>,
        cod: Vec<usize>,
        inv: Vec<usize>,
        comp: &[Vec<Option<usize>>],
    ) -> Result<Groupoid, GroupoidError> {
        let n = names.len();
        check_len("comp", comp.len(), n)?;
        for row in comp {
            check_len("comp row", row.len(), n)?;
        }
        check_len("dom", dom.len(), n)?;
        check_len("cod", cod.len(), n)?;
        check_range("dom", &dom, n)?;
        check_range("cod", &cod, n)?;
        for x in 0..n {
            for y in 0..n {
                if comp[x][y].is_some() != (dom[x] == cod[y]) {
                    return Err(GroupoidError::Definedness(x, y));
                }
            }
        }
        Groupoid::build(names, dom, cod, inv, |x, y| comp[x][y].expect("checked definedness"))
    }

    fn check_laws(&self) -> Result<(), GroupoidError> {
        let n = self.len();
        for x in 0..n {
            for &y in &self.into[self.dom[x]] {
                let xy = self.prod[x][self.slot[y]];
                if self.dom[xy] != self.dom[y] || self.cod[xy] != self.cod[x] {
                    return Err(GroupoidError::ProductEnds(x, y));
                }
            }
        }
        for x in 0..n {
            if self.mul(x, self.dom[x]) != x || self.mul(self.cod[x], x) != x {
                return Err(GroupoidError::IdentityLaw(x));
            }
            let i = self.inv[x];
            if self.dom[i] != self.cod[x]
                || self.cod[i] != self.dom[x]
                || self.mul(x, i) != self.cod[x]
                || self.mul(i, x) != self.dom[x]
            {
                return Err(GroupoidError::InverseLaw(x));
            }
        }
        for y in 0..n {
            for &z in &self.into[self.dom[y]] {
                let yz = self.mul(y, z);
                for &x in &self.from[self.cod[y]] {
                    if self.mul(self.mul(x, y), z) != self.mul(x, yz) {
                        return Err(GroupoidError::NotAssociative(x, y, z));
                    }
                }
            }
        }
        Ok(())
    }

    /// Groupoid with a single identity from a group table.
    pub fn from_group(names: Vec<String>, table: &[usize], identity: usize, inv: Vec<usize>) -> Result<Groupoid, GroupoidError> {
        let n = names.len();
        Groupoid::build(names, vec![identity; n], vec![identity; n], inv, |x, y| table[x * n + y])
    }

    /// Groupoid with identities only.
    pub fn discrete(names: Vec<String>) -> Groupoid {
        let n = names.len();
        let id: Vec<usize> = (0..n).collect();
        Groupoid::build(names, id.clone(), id.clone(), id, |x, _| x).expect("discrete groupoid")
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
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn dom(&self, x: usize) -> usize {
        self.dom[x]
    }

    #[inline]
    pub fn cod(&self, x: usize) -> usize {
        self.cod[x]
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x]
    }

    pub fn doms(&self) -> &[usize] {
        &self.dom
    }

    pub fn cods(&self) -> &[usize] {
        &self.cod
    }

    pub fn invs(&self) -> &[usize] {
        &self.inv
    }

    /// `x·y`, defined iff `dom(x) = cod(y)`.
    #[inline]
    pub fn comp(&self, x: usize, y: usize) -> Option<usize> {
        (self.dom[x] == self.cod[y]).then(|| self.prod[x][self.slot[y]])
    }

    /// `x·y` for a composable pair.
    #[inline]
    pub(crate) fn mul(&self, x: usize, y: usize) -> usize {
        debug_assert_eq!(self.dom[x], self.cod[y]);
        self.prod[x][self.slot[y]]
    }

    #[inline]
    pub fn is_identity(&self, x: usize) -> bool {
        self.dom[x] == x
    }

    pub fn identities(&self) -> &[usize] {
        &self.identities
    }

    /// Arrows with codomain `e`.
    pub fn arrows_into(&self, e: usize) -> &[usize] {
        &self.into[e]
    }

    /// Arrows with domain `e`.
    pub fn arrows_from(&self, e: usize) -> &[usize] {
        &self.from[e]
    }

    /// The unique arrow from `from` to `to` in a principal groupoid, if any.
    pub fn arrow_between(&self, from: usize, to: usize) -> Option<usize> {
        self.into[to].iter().copied().find(|&x| self.dom[x] == from)
    }

    /// At most one arrow between any two identities.
    pub fn is_principal(&self) -> bool {
        self.principal_violation().is_none()
    }

    /// Two distinct parallel arrows, if any.
    pub fn principal_violation(&self) -> Option<(usize, usize)> {
        for arrows in &self.into {
            let mut seen: Vec<(usize, usize)> = Vec::new();
            for &x in arrows {
                if let Some(&(_, y)) = seen.iter().find(|(d, _)| *d == self.dom[x]) {
                    return Some((y, x));
                }
                seen.push((self.dom[x], x));
            }
        }
        None
    }

    /// Full product table with `None` for undefined entries.
    pub fn comp_table(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.len())
            .map(|x| (0..self.len()).map(|y| self.comp(x, y)).collect())
            .collect()
    }

    /// Connected-component label of every element: the least identity index in its component.
    pub fn components(&self) -> Vec<usize> {
        let n = self.len();
        let mut uf = UnionFind::<usize>::new(n);
        for x in 0..n {
            uf.union(self.dom[x], self.cod[x]);
        }
        let mut least = vec![usize::MAX; n];
        for &e in &self.identities {
            let r = uf.find(e);
            least[r] = least[r].min(e);
        }
        (0..n).map(|x| least[uf.find(self.dom[x])]).collect()
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().collect::<BTreeSet<_>>().len()
    }

    pub(crate) fn signature(&self) -> Signature {
        let n = self.len();
        let mut binary = vec![None; n * n];
        for x in 0..n {
            for &y in &self.into[self.dom[x]] {
                binary[x * n + y] = Some(self.mul(x, y));
            }
        }
        Signature::new(n)
            .with_unary(self.dom.clone())
            .with_unary(self.inv.clone())
            .with_binary(binary)
    }

    pub fn with_names(mut self, names: Vec<String>) -> Groupoid {
        assert_eq!(names.len(), self.len());
        self.names = names;
        self
    }
}

/// OG1, OG2, OG3 and OG3* for a groupoid with a partial order.
pub fn check_classical_axioms(g: &Groupoid, leq: &BoolMatrix) -> Result<(), GroupoidError> {
    check_order(g, leq)?;
    check_og1(g, leq)?;
    check_og2(g, leq)?;
    check_og3(g, leq)?;
    check_og3_star(g, leq)
}

/// OG1, OG2, OI and OG4 for a groupoid with a partial order.
pub fn check_alternative_axioms(g: &Groupoid, leq: &BoolMatrix) -> Result<(), GroupoidError> {
    check_order(g, leq)?;
    check_og1(g, leq)?;
    check_og2(g, leq)?;
    check_oi(g, leq)?;
    check_og4(g, leq)
}

fn check_order(g: &Groupoid, leq: &BoolMatrix) -> Result<(), GroupoidError> {
    if leq.size() != g.len() {
        return Err(GroupoidError::Shape {
            field: "leq",
            got: leq.size(),
            expected: g.len(),
        });
    }
    leq.partial_order_violation().map_or(Ok(()), |v| Err(GroupoidError::Order(v)))
}

fn check_og1(g: &Groupoid, leq: &BoolMatrix) -> Result<(), GroupoidError> {
    match leq.pairs().find(|&(x, y)| !leq.get(g.inv(x), g.inv(y))) {
        Some((x, y)) => Err(GroupoidError::Og1(x, y)),
        None => Ok(()),
    }
}

fn check_og2(g: &Groupoid, leq: &BoolMatrix) -> Result<(), GroupoidError> {
    let ups: Vec<Vec<usize>> = (0..g.len()).map(|u| leq.successors(u).collect()).collect();
    for (x, y) in leq.pairs() {
        for &u in g.arrows_into(g.dom(x)) {
            let xu = g.mul(x, u);
            for &v in &ups[u] {
                if g.cod(v) == g.dom(y) && !leq.get(xu, g.mul(y, v)) {
                    return Err(GroupoidError::Og2(x, y, u, v));
                }
            }
        }
    }
    Ok(())
}

fn below_identity(g: &Groupoid, leq: &BoolMatrix, x: usize) -> Vec<usize> {
    g.identities().iter().copied().filter(|&e| leq.get(e, x)).collect()
}

fn check_og3(g: &Groupoid, leq: &BoolMatrix) -> Result<(), GroupoidError> {
    for x in 0..g.len() {
        for e in below_identity(g, leq, g.dom(x)) {
            let mut hits = leq.predecessors(x).filter(|&z| g.dom(z) == e);
            match (hits.next(), hits.next()) {
                (None, _) => return Err(GroupoidError::Og3Missing { x, e }),
                (Some(z1), Some(z2)) => return Err(GroupoidError::Og3NotUnique { x, e, z1, z2 }),
                _ => {}
            }
        }
    }
    Ok(())
}

fn check_og3_star(g: &Groupoid, leq: &BoolMatrix) -> Result<(), GroupoidError> {
    for x in 0..g.len() {
        for e in below_identity(g, leq, g.cod(x)) {
            let mut hits = leq.predecessors(x).filter(|&z| g.cod(z) == e);
            match (hits.next(), hits.next()) {
                (None, _) => return Err(GroupoidError::Og3StarMissing { x, e }),
                (Some(z1), Some(z2)) => {
                    return Err(GroupoidError::Og3StarNotUnique { x, e, z1, z2 })
                }
                _ => {}
            }
        }
    }
    Ok(())
}

fn check_oi(g: &Groupoid, leq: &BoolMatrix) -> Result<(), GroupoidError> {
    for &e in g.identities() {
        if let Some(below) = leq.predecessors(e).find(|&z| !g.is_identity(z)) {
            return Err(GroupoidError::Oi { below, e });
        }
    }
    Ok(())
}

fn check_og4(g: &Groupoid, leq: &BoolMatrix) -> Result<(), GroupoidError> {
    for x in 0..g.len() {
        for e in below_identity(g, leq, g.dom(x)) {
            if !leq.predecessors(x).any(|z| g.dom(z) == e) {
                return Err(GroupoidError::Og4 { x, e });
            }
        }
    }
    Ok(())
}

/// Validates with both axiom systems; they must agree.
pub fn validate_ordered(g: Groupoid, leq: BoolMatrix) -> Result<OrdGroupoid, GroupoidError> {
    let classical = check_classical_axioms(&g, &leq);
    let alternative = check_alternative_axioms(&g, &leq);
    match (classical, alternative) {
        (Ok(()), Ok(())) => {}
        (Err(e), Err(_)) => return Err(e),
        (c, a) => {
            return Err(GroupoidError::AxiomSystemsDisagree {
                classical: c.is_ok(),
                alternative: a.is_ok(),
            })
        }
    }
    for (x, y) in leq.pairs() {
        if x != y && g.dom(x) == g.dom(y) && g.cod(x) == g.cod(y) {
            return Err(GroupoidError::HomSetOrder(x, y));
        }
    }
    Ok(OrdGroupoid::assemble(g, leq))
}

/// Validates raw file data as an ordered groupoid.
pub fn validate_ordered_groupoid(raw: RawGroupoid) -> Result<OrdGroupoid, GroupoidError> {
    let g = Groupoid::from_table(raw.elements, raw.dom, raw.cod, raw.inv, &raw.comp)?;
    let n = g.len();
    let leq = match raw.leq {
        Some(rows) => {
            check_len("leq", rows.len(), n)?;
            BoolMatrix::from_rows(&rows).ok_or(GroupoidError::Shape {
                field: "leq row",
                got: rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0),
                expected: n,
            })?
        }
        None => BoolMatrix::identity(n),
    };
    validate_ordered(g, leq)
}

/// A validated ordered groupoid with cached down-sets and identity meets.
#[derive(Clone, PartialEq, Eq)]
pub struct OrdGroupoid {
    g: Groupoid,
    leq: BoolMatrix,
    down: Vec<Vec<usize>>,
    /// Position of each identity in `g.identities()`.
    ident_pos: Vec<Option<usize>>,
    /// Meets of identities, `k × k` over identity positions.
    meets: Vec<Meet>,
}

impl fmt::Debug for OrdGroupoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrdGroupoid")
            .field("names", &self.g.names)
            .field("leq", &self.leq)
            .finish_non_exhaustive()
    }
}

impl std::ops::Deref for OrdGroupoid {
    type Target = Groupoid;

    fn deref(&self) -> &Groupoid {
        &self.g
    }
}

impl OrdGroupoid {
    fn assemble(g: Groupoid, leq: BoolMatrix) -> OrdGroupoid {
        let n = g.len();
        let down = (0..n).map(|x| leq.predecessors(x).collect()).collect();
        let mut ident_pos = vec![None; n];
        for (i, &e) in g.identities().iter().enumerate() {
            ident_pos[e] = Some(i);
        }
        let ids = g.identities().to_vec();
        let mut meets = Vec::with_capacity(ids.len() * ids.len());
        for &e in &ids {
            for &f in &ids {
                meets.push(meet_in(&leq, &ids, e, f));
            }
        }
        OrdGroupoid {
            g,
            leq,
            down,
            ident_pos,
            meets,
        }
    }

    /// Builds and validates from parts.
    pub fn build(
        names: Vec<String>,
        dom: Vec<usize>,
        cod: Vec<usize>,
        inv: Vec<usize>,
        compose: impl FnMut(usize, usize) -> usize,
        leq: impl FnMut(usize, usize) -> bool,
    ) -> Result<OrdGroupoid, GroupoidError> {
        let g = Groupoid::build(names, dom, cod, inv, compose)?;
        let m = BoolMatrix::from_fn(g.len(), leq);
        validate_ordered(g, m)
    }

    /// A groupoid ordered by equality.
    pub fn with_equality_order(g: Groupoid) -> OrdGroupoid {
        let n = g.len();
        OrdGroupoid::assemble(g, BoolMatrix::identity(n))
    }

    /// A poset viewed as an identities-only ordered groupoid.
    pub fn from_poset(names: Vec<String>, leq: BoolMatrix) -> Result<OrdGroupoid, GroupoidError> {
        validate_ordered(Groupoid::discrete(names), leq)
    }

    pub fn groupoid(&self) -> &Groupoid {
        &self.g
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq.get(x, y)
    }

    pub fn order(&self) -> &BoolMatrix {
        &self.leq
    }

    /// Elements below `x`, including `x`.
    pub fn down(&self, x: usize) -> &[usize] {
        &self.down[x]
    }

    /// Meet of two identities among identities.
    pub fn meet(&self, e: usize, f: usize) -> Meet {
        let k = self.identities().len();
        match (self.ident_pos[e], self.ident_pos[f]) {
            (Some(i), Some(j)) => self.meets[i * k + j],
            _ => Meet::NoLowerBound,
        }
    }

    /// `(x | e)`: the unique `z ≤ x` with `dom(z) = e`.
    pub fn restriction(&self, x: usize, e: usize) -> Result<usize, GroupoidError> {
        if !self.is_identity(e) || !self.leq(e, self.dom(x)) {
            return Err(GroupoidError::PreconditionFailed { x, e });
        }
        Ok(self.restrict(x, e))
    }

    #[inline]
    pub(crate) fn restrict(&self, x: usize, e: usize) -> usize {
        *self.down[x]
            .iter()
            .find(|&&z| self.dom(z) == e)
            .expect("OG3 holds on a validated groupoid")
    }

    #[inline]
    pub(crate) fn corestrict(&self, e: usize, x: usize) -> usize {
        *self.down[x]
            .iter()
            .find(|&&z| self.cod(z) == e)
            .expect("OG3* holds on a validated groupoid")
    }

    /// `(e | x)` computed as `(x⁻¹ | e)⁻¹`, cross-checked by direct search.
    pub fn corestriction(&self, e: usize, x: usize) -> Result<usize, GroupoidError> {
        if !self.is_identity(e) || !self.leq(e, self.cod(x)) {
            return Err(GroupoidError::PreconditionFailed { x, e });
        }
        let via_inverse = self.inv(self.restrict(self.inv(x), e));
        if via_inverse != self.corestrict(e, x) {
            return Err(GroupoidError::OracleMismatch(e, x));
        }
        Ok(via_inverse)
    }

    /// `x ⊗ y = (x | e)(e | y)` with `e = dom(x) ∧ cod(y)`, without the oracle.
    pub fn pseudoproduct_fast(&self, x: usize, y: usize) -> Option<usize> {
        if self.dom(x) == self.cod(y) {
            return Some(self.mul(x, y));
        }
        let e = self.meet(self.dom(x), self.cod(y)).value()?;
        Some(self.mul(self.restrict(x, e), self.corestrict(e, y)))
    }

    /// `x'y'` for the maximum `(x', y')` of the composable pairs below `(x, y)`.
    pub fn pseudoproduct_by_maximum(&self, x: usize, y: usize) -> Option<usize> {
        let pairs: Vec<(usize, usize)> = self.down[x]
            .iter()
            .flat_map(|&a| {
                self.down[y]
                    .iter()
                    .filter(move |&&b| self.dom(a) == self.cod(b))
                    .map(move |&b| (a, b))
            })
            .collect();
        let &(a, b) = pairs
            .iter()
            .find(|&&(a, b)| pairs.iter().all(|&(c, d)| self.leq(c, a) && self.leq(d, b)))?;
        Some(self.mul(a, b))
    }

    /// The pseudoproduct, with both characterizations computed and compared.
    pub fn pseudoproduct(&self, x: usize, y: usize) -> Result<Option<usize>, GroupoidError> {
        let fast = self.pseudoproduct_fast(x, y);
        if fast != self.pseudoproduct_by_maximum(x, y) {
            return Err(GroupoidError::OracleMismatch(x, y));
        }
        Ok(fast)
    }

    /// Identities form a meet semilattice.
    pub fn is_inductive(&self) -> bool {
        self.meets.iter().all(|m| matches!(m, Meet::Exists(_)))
    }

    /// Lower-bounded pairs of identities have meets.
    pub fn is_star_inductive(&self) -> bool {
        self.meets.iter().all(|m| !matches!(m, Meet::NoGreatest))
    }

    /// First pair of identities without a meet, for reports.
    pub fn meet_failure(&self, star: bool) -> Option<(usize, usize)> {
        let ids = self.identities();
        ids.iter()
            .flat_map(|&e| ids.iter().map(move |&f| (e, f)))
            .find(|&(e, f)| match self.meet(e, f) {
                Meet::Exists(_) => false,
                Meet::NoGreatest => true,
                Meet::NoLowerBound => !star,
            })
    }

    pub fn maximum_identity(&self) -> Option<usize> {
        let ids = self.identities();
        ids.iter().copied().find(|&m| ids.iter().all(|&e| self.leq(e, m)))
    }

    /// Maximal identities and the `e ↦ e°` map if it exists.
    pub fn maximal_identity_structure(&self) -> MaximalIdentities {
        let ids = self.identities();
        let maximal: Vec<usize> = ids
            .iter()
            .copied()
            .filter(|&m| !ids.iter().any(|&f| f != m && self.leq(m, f)))
            .collect();
        let mut map = vec![None; self.len()];
        let mut ok = true;
        for &e in ids {
            let mut above = maximal.iter().copied().filter(|&m| self.leq(e, m));
            match (above.next(), above.next()) {
                (Some(m), None) => map[e] = Some(m),
                _ => ok = false,
            }
        }
        let comps = self.components();
        let with_max: BTreeSet<usize> = maximal.iter().map(|&m| comps[m]).collect();
        let every_component = comps.iter().all(|c| with_max.contains(c));
        MaximalIdentities {
            maximal,
            map: ok.then_some(map),
            every_component_has_maximal: every_component,
        }
    }

    /// GE1–GE3 for `self` over the subset `sub`, which must be an ordered subgroupoid.
    pub fn enlargement_report(&self, sub: &[usize]) -> Result<EnlargementReport, GroupoidError> {
        let n = self.len();
        let mut inside = vec![false; n];
        for &x in sub {
            if x >= n {
                return Err(GroupoidError::OutOfRange { field: "subset", value: x });
            }
            inside[x] = true;
        }
        for &x in sub {
            if !inside[self.inv(x)] || !inside[self.dom(x)] || !inside[self.cod(x)] {
                return Err(GroupoidError::NotAnOrderedSubgroupoid(x));
            }
            for &y in sub {
                if let Some(xy) = self.comp(x, y) {
                    if !inside[xy] {
                        return Err(GroupoidError::NotAnOrderedSubgroupoid(x));
                    }
                }
            }
            for &e in self.identities() {
                if inside[e] && self.leq(e, self.dom(x)) && !inside[self.restrict(x, e)] {
                    return Err(GroupoidError::NotAnOrderedSubgroupoid(x));
                }
            }
        }
        let ids = self.identities();
        let ge1 = ids
            .iter()
            .copied()
            .filter(|&e| inside[e])
            .flat_map(|e| ids.iter().map(move |&f| (e, f)))
            .find(|&(e, f)| self.leq(f, e) && !inside[f]);
        let ge2 = (0..n).find(|&x| inside[self.dom(x)] && inside[self.cod(x)] && !inside[x]);
        let ge3 = ids
            .iter()
            .copied()
            .find(|&e| !self.arrows_into(e).iter().any(|&x| inside[self.dom(x)]));
        Ok(EnlargementReport {
            ge1_violation: ge1,
            ge2_violation: ge2,
            ge3_violation: ge3,
        })
    }

    /// True iff `self` is an enlargement of the ordered subgroupoid `sub`.
    pub fn is_enlargement(&self, sub: &[usize]) -> Result<bool, GroupoidError> {
        Ok(self.enlargement_report(sub)?.holds())
    }

    /// The ordered subgroupoid on `sub` (sorted), with the inclusion map.
    pub fn subgroupoid(&self, sub: &[usize]) -> Result<(OrdGroupoid, Vec<usize>), GroupoidError> {
        let mut keep: Vec<usize> = sub.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &x) in keep.iter().enumerate() {
            pos[x] = i;
        }
        let look = |x: usize| -> Result<usize, GroupoidError> {
            match pos[x] {
                usize::MAX => Err(GroupoidError::NotAnOrderedSubgroupoid(x)),
                p => Ok(p),
            }
        };
        let names = keep.iter().map(|&x| self.name(x).to_string()).collect();
        let dom = keep.iter().map(|&x| look(self.dom(x))).collect::<Result<Vec<_>, _>>()?;
        let cod = keep.iter().map(|&x| look(self.cod(x))).collect::<Result<Vec<_>, _>>()?;
        let inv = keep.iter().map(|&x| look(self.inv(x))).collect::<Result<Vec<_>, _>>()?;
        let mut missing = None;
        let g = Groupoid::build(names, dom, cod, inv, |a, b| {
            let p = pos[self.mul(keep[a], keep[b])];
            if p == usize::MAX {
                missing.get_or_insert(keep[a]);
                0
            } else {
                p
            }
        });
        if let Some(x) = missing {
            return Err(GroupoidError::NotAnOrderedSubgroupoid(x));
        }
        let m = BoolMatrix::from_fn(keep.len(), |a, b| self.leq(keep[a], keep[b]));
        let sub = validate_ordered(g?, m)?;
        Ok((sub, keep))
    }

    pub fn signature(&self) -> Signature {
        self.g.signature().with_relation(self.leq.clone())
    }

    pub fn to_raw(&self) -> RawGroupoid {
        RawGroupoid {
            elements: self.names().to_vec(),
            dom: self.doms().to_vec(),
            cod: self.cods().to_vec(),
            inv: self.invs().to_vec(),
            comp: self.comp_table(),
            leq: Some(self.leq.rows()),
        }
    }

    pub fn renamed(&self, names: Vec<String>) -> OrdGroupoid {
        let mut out = self.clone();
        out.g = out.g.with_names(names);
        out
    }
}

/// Maximal identities of an ordered groupoid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalIdentities {
    pub maximal: Vec<usize>,
    /// `map[e] = Some(e°)` for identities, when every identity lies below exactly one maximal identity.
    pub map: Option<Vec<Option<usize>>>,
    pub every_component_has_maximal: bool,
}

impl MaximalIdentities {
    pub fn exists(&self) -> bool {
        self.map.is_some()
    }
}

/// Outcome of the enlargement axioms, with the least violation of each.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnlargementReport {
    /// `(e, f)` with `e` in the subgroupoid, `f ≤ e` outside it.
    pub ge1_violation: Option<(usize, usize)>,
    /// An arrow outside with both ends inside.
    pub ge2_violation: Option<usize>,
    /// An identity not reachable from the subgroupoid.
    pub ge3_violation: Option<usize>,
}

impl EnlargementReport {
    pub fn holds(&self) -> bool {
        self.ge1_violation.is_none() && self.ge2_violation.is_none() && self.ge3_violation.is_none()
    }
}

/// A map between ordered groupoids that is a functor.
#[derive(Clone, Debug)]
pub struct OrderedFunctor<'a> {
    pub source: &'a OrdGroupoid,
    pub target: &'a OrdGroupoid,
    pub map: Vec<usize>,
}

/// Classification of a functor between ordered groupoids.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FunctorFlags {
    pub ordered: bool,
    /// Ordered, both sides inductive, and meets of identities preserved.
    pub inductive: bool,
    pub injective: bool,
    pub surjective: bool,
    pub star_injective: bool,
    pub star_surjective: bool,
    /// Star bijective.
    pub covering: bool,
    pub ordered_embedding: bool,
}

impl<'a> OrderedFunctor<'a> {
    /// Checks the functor laws; the order is classified separately.
    pub fn new(source: &'a OrdGroupoid, target: &'a OrdGroupoid, map: Vec<usize>) -> Result<Self, GroupoidError> {
        if map.len() != source.len() {
            return Err(GroupoidError::MapLength {
                expected: source.len(),
                got: map.len(),
            });
        }
        if let Some(&value) = map.iter().find(|&&v| v >= target.len()) {
            return Err(GroupoidError::OutOfRange { field: "map", value });
        }
        for x in 0..source.len() {
            let fx = map[x];
            if map[source.dom(x)] != target.dom(fx)
                || map[source.cod(x)] != target.cod(fx)
                || map[source.inv(x)] != target.inv(fx)
            {
                return Err(GroupoidError::NotAFunctor(x));
            }
            for &y in source.arrows_into(source.dom(x)) {
                if target.comp(fx, map[y]) != Some(map[source.mul(x, y)]) {
                    return Err(GroupoidError::NotAFunctorOnProduct(x, y));
                }
            }
        }
        Ok(OrderedFunctor { source, target, map })
    }

    pub fn identity(g: &'a OrdGroupoid) -> Self {
        OrderedFunctor {
            source: g,
            target: g,
            map: (0..g.len()).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `other ∘ self`.
    pub fn then<'b>(&self, other: &OrderedFunctor<'b>) -> OrderedFunctor<'b>
    where
        'a: 'b,
    {
        OrderedFunctor {
            source: self.source,
            target: other.target,
            map: self.map.iter().map(|&y| other.map[y]).collect(),
        }
    }

    pub fn is_ordered(&self) -> bool {
        self.source
            .order()
            .pairs()
            .all(|(x, y)| self.target.leq(self.map[x], self.map[y]))
    }

    fn preserves_meets(&self) -> bool {
        let (s, t) = (self.source, self.target);
        let ids = s.identities();
        ids.iter().all(|&e| {
            ids.iter().all(|&f| match (s.meet(e, f), t.meet(self.map[e], self.map[f])) {
                (Meet::Exists(m), Meet::Exists(tm)) => self.map[m] == tm,
                _ => false,
            })
        })
    }

    pub fn flags(&self) -> FunctorFlags {
        let (s, t) = (self.source, self.target);
        let ordered = self.is_ordered();
        let image: BTreeSet<usize> = self.map.iter().copied().collect();
        let mut star_injective = true;
        let mut star_surjective = true;
        for &e in s.identities() {
            let fe = self.map[e];
            let star: Vec<usize> = (0..s.len()).filter(|&x| s.dom(x) == e).collect();
            let images: BTreeSet<usize> = star.iter().map(|&x| self.map[x]).collect();
            star_injective &= images.len() == star.len();
            star_surjective &= (0..t.len()).filter(|&z| t.dom(z) == fe).all(|z| images.contains(&z));
        }
        let embedding = (0..s.len())
            .all(|x| (0..s.len()).all(|y| s.leq(x, y) == t.leq(self.map[x], self.map[y])));
        FunctorFlags {
            ordered,
            inductive: ordered && s.is_inductive() && t.is_inductive() && self.preserves_meets(),
            injective: image.len() == s.len(),
            surjective: image.len() == t.len(),
            star_injective,
            star_surjective,
            covering: star_injective && star_surjective,
            ordered_embedding: ordered && embedding,
        }
    }

    /// First `(x, e)` where the functor fails to commute with restriction or
    /// corestriction; `None` for ordered functors.
    pub fn restriction_failure(&self) -> Option<(usize, usize)> {
        let (s, t) = (self.source, self.target);
        for x in 0..s.len() {
            for &e in s.identities() {
                if s.leq(e, s.dom(x)) {
                    let lhs = self.map[s.restrict(x, e)];
                    let fe = self.map[e];
                    if !t.leq(fe, t.dom(self.map[x])) || t.restrict(self.map[x], fe) != lhs {
                        return Some((x, e));
                    }
                }
                if s.leq(e, s.cod(x)) {
                    let lhs = self.map[s.corestrict(e, x)];
                    let fe = self.map[e];
                    if !t.leq(fe, t.cod(self.map[x])) || t.corestrict(fe, self.map[x]) != lhs {
                        return Some((x, e));
                    }
                }
            }
        }
        None
    }
}

/// Classifies a functor between ordered groupoids.
pub fn classify_functor(f: &OrderedFunctor<'_>) -> FunctorFlags {
    f.flags()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| format!("e{i}")).collect()
    }

    fn poset(k: usize, pairs: &[(usize, usize)]) -> OrdGroupoid {
        let mut m = BoolMatrix::identity(k);
        for &(a, b) in pairs {
            m.set(a, b, true);
        }
        OrdGroupoid::from_poset(names(k), m.closure()).unwrap()
    }

    /// Two objects, one arrow each way: `0, 1` identities, `2: 0 → 1`, `3: 1 → 0`.
    fn indiscrete_pair() -> OrdGroupoid {
        let dom = vec![0, 1, 0, 1];
        let cod = vec![0, 1, 1, 0];
        let inv = vec![0, 1, 3, 2];
        let comp = |x: usize, y: usize| match (x, y) {
            (0, y) | (1, y) => y,
            (x, 0) | (x, 1) => x,
            (2, 3) => 1,
            (3, 2) => 0,
            _ => unreachable!(),
        };
        OrdGroupoid::build(
            vec!["e".into(), "f".into(), "a".into(), "a'".into()],
            dom,
            cod,
            inv,
            comp,
            |x, y| x == y,
        )
        .unwrap()
    }

    #[test]
    fn group_with_equality_order_is_valid() {
        let n = 3;
        let table: Vec<usize> = (0..9).map(|k| (k / 3 + k % 3) % 3).collect();
        let g = Groupoid::from_group(names(n), &table, 0, vec![0, 2, 1]).unwrap();
        let og = validate_ordered(g, BoolMatrix::identity(3)).unwrap();
        assert!(og.is_inductive());
        assert_eq!(og.identities(), &[0]);
    }

    #[test]
    fn chain_is_inductive() {
        let c = poset(3, &[(0, 1), (1, 2)]);
        assert!(c.is_inductive() && c.is_star_inductive());
        assert_eq!(c.meet(1, 2), Meet::Exists(1));
        assert_eq!(c.pseudoproduct(2, 1), Ok(Some(1)));
    }

    #[test]
    fn antichain_is_only_star_inductive() {
        let a = poset(2, &[]);
        assert!(!a.is_inductive());
        assert!(a.is_star_inductive());
        assert_eq!(a.pseudoproduct(0, 1), Ok(None));
    }

    #[test]
    fn two_maximal_lower_bounds_defeat_both() {
        // 0, 1 below both 2 and 3.
        let p = poset(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert!(!p.is_inductive());
        assert!(!p.is_star_inductive());
        assert_eq!(p.meet_failure(true), Some((2, 3)));
    }

    #[test]
    fn restriction_to_own_domain_is_identity() {
        let g = indiscrete_pair();
        for x in 0..g.len() {
            assert_eq!(g.restriction(x, g.dom(x)), Ok(x));
            assert_eq!(g.corestriction(g.cod(x), x), Ok(x));
        }
        assert!(matches!(
            g.restriction(2, 1),
            Err(GroupoidError::PreconditionFailed { .. })
        ));
    }

    #[test]
    fn og3_failure_is_reported_by_both_systems() {
        // Indiscrete pair with e < f: nothing below `a': f → e` has domain e.
        let g = indiscrete_pair().groupoid().clone();
        let mut m = BoolMatrix::identity(4);
        m.set(0, 1, true);
        let c = check_classical_axioms(&g, &m);
        let a = check_alternative_axioms(&g, &m);
        assert!(c.is_err() && a.is_err());
        assert!(validate_ordered(g, m).is_err());
    }

    #[test]
    fn non_reflexive_order_rejected() {
        let g = Groupoid::discrete(names(2));
        let m = BoolMatrix::new(2);
        assert!(matches!(
            validate_ordered(g, m),
            Err(GroupoidError::Order(OrderViolation::NotReflexive(0)))
        ));
    }

    #[test]
    fn enlargement_examples() {
        let g = indiscrete_pair();
        assert_eq!(g.is_enlargement(&[0, 1, 2, 3]), Ok(true));
        // The single identity `e` reaches `f` through `a`.
        assert_eq!(g.is_enlargement(&[0]), Ok(true));
        let two = poset(2, &[]);
        assert_eq!(
            two.enlargement_report(&[0]).unwrap().ge3_violation,
            Some(1)
        );
        assert!(matches!(
            g.is_enlargement(&[2]),
            Err(GroupoidError::NotAnOrderedSubgroupoid(2))
        ));
    }

    #[test]
    fn maximal_identities() {
        let chain = poset(3, &[(0, 1), (1, 2)]);
        let mi = chain.maximal_identity_structure();
        assert_eq!(mi.map, Some(vec![Some(2), Some(2), Some(2)]));
        let two_chains = poset(4, &[(0, 1), (2, 3)]);
        let mi = two_chains.maximal_identity_structure();
        assert_eq!(mi.map, Some(vec![Some(1), Some(1), Some(3), Some(3)]));
        // Without arrows every identity is its own component.
        assert!(!mi.every_component_has_maximal);
        let v = poset(3, &[(0, 1), (0, 2)]);
        assert_eq!(v.maximal_identity_structure().map, None);
    }

    #[test]
    fn functor_classification() {
        let g = indiscrete_pair();
        let id = OrderedFunctor::identity(&g);
        let f = id.flags();
        assert!(f.ordered && f.covering && f.ordered_embedding && f.injective);
        // Inclusion of a 2-antichain into a 2-chain: injective, not an embedding.
        let a = poset(2, &[]);
        let c = poset(2, &[(0, 1)]);
        let inc = OrderedFunctor::new(&a, &c, vec![0, 1]).unwrap();
        let fl = inc.flags();
        assert!(fl.ordered && fl.injective && !fl.ordered_embedding);
        assert!(OrderedFunctor::new(&g, &a, vec![0, 1, 0, 1]).is_err());
    }

    #[test]
    fn components_label_by_least_identity() {
        let g = indiscrete_pair();
        assert_eq!(g.components(), vec![0, 0, 0, 0]);
        assert_eq!(poset(3, &[]).component_count(), 3);
        assert!(g.is_principal());
    }
}
