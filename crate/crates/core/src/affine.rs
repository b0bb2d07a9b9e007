//! Categories acting on principal groupoids and the ordered groupoids they present.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::cancellative::{self, CancellativeError, PairCategory};
use crate::category::{CategoryError, CategoryFunctor, FinCategory, RawCategory};
use crate::esn::{self, EsnError};
use crate::groupoid::{FunctorFlags, Groupoid, GroupoidError, OrdGroupoid, OrderedFunctor, RawGroupoid};
use crate::iso::{self, IsoError};
use crate::semigroup::{self, InvSemigroup, SemigroupError};
use crate::util::{limits, BoolMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AffineError {
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Cancellative(#[from] CancellativeError),
    #[error(transparent)]
    Esn(#[from] EsnError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Iso(#[from] IsoError),
    #[error("field `{field}` has length {got}, expected {expected}")]
    Shape {
        field: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("field `{field}` holds out-of-range index {value}")]
    OutOfRange { field: &'static str, value: usize },
    #[error("action table of {0} entries exceeds the cap {1}")]
    TooLarge(usize, usize),
    #[error("axiom {tag} fails at {witness:?}")]
    Axiom { tag: &'static str, witness: Vec<usize> },
    #[error("affine condition `{tag}` fails at {witness:?}")]
    NotAffine { tag: &'static str, witness: Vec<usize> },
    #[error("set action axiom {tag} fails at {witness:?}")]
    NotASetAction { tag: &'static str, witness: Vec<usize> },
    #[error("not a morphism of actions: {tag} at {witness:?}")]
    NotAMorphism { tag: &'static str, witness: Vec<usize> },
    #[error("semigroup has no zero")]
    NoZero,
    #[error("construction check failed: {0}")]
    Mismatch(String),
}

impl AffineError {
    pub fn witness(&self) -> Vec<usize> {
        match self {
            AffineError::Axiom { witness, .. }
            | AffineError::NotAffine { witness, .. }
            | AffineError::NotASetAction { witness, .. }
            | AffineError::NotAMorphism { witness, .. } => witness.clone(),
            AffineError::OutOfRange { value, .. } => vec![*value],
            AffineError::Category(e) => e.witness(),
            AffineError::Groupoid(e) => e.witness(),
            _ => Vec::new(),
        }
    }
}

fn axiom(tag: &'static str, witness: Vec<usize>) -> AffineError {
    AffineError::Axiom { tag, witness }
}

fn mismatch(s: impl Into<String>) -> AffineError {
    AffineError::Mismatch(s.into())
}

/// Serializable form of an action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawAction {
    pub category: RawCategory,
    pub groupoid: RawGroupoid,
    pub pi: Vec<usize>,
    /// `action[a][x]` is `a·x`.
    pub action: Vec<Vec<Option<usize>>>,
}

/// A category acting on a groupoid satisfying A1–A8. The groupoid carries the
/// equality order; its order, if any, is ignored.
#[derive(Clone, Debug)]
pub struct GroupoidAction {
    cat: FinCategory,
    gpd: OrdGroupoid,
    pi: Vec<usize>,
    act: Vec<Option<usize>>,
    /// `below[x][y]` iff `x ∈ C·y`.
    below: BoolMatrix,
}

impl GroupoidAction {
    /// Validates A1–A8 and the remarks that follow from them.
    pub fn new(
        cat: FinCategory,
        gpd: Groupoid,
        pi: Vec<usize>,
        action: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<GroupoidAction, AffineError> {
        let (m, n) = (cat.len(), gpd.len());
        if m.saturating_mul(n) > limits::ACTION_TABLE_CAP {
            return Err(AffineError::TooLarge(m * n, limits::ACTION_TABLE_CAP));
        }
        if pi.len() != n {
            return Err(AffineError::Shape {
                field: "pi",
                expected: n,
                got: pi.len(),
            });
        }
        if let Some(&v) = pi.iter().find(|&&v| v >= m || !cat.is_identity(v)) {
            return Err(AffineError::OutOfRange { field: "pi", value: v });
        }
        let mut act = vec![None; m * n];
        for a in 0..m {
            for x in 0..n {
                let v = action(a, x);
                if let Some(v) = v {
                    if v >= n {
                        return Err(AffineError::OutOfRange { field: "action", value: v });
                    }
                }
                if v.is_some() != (cat.dom(a) == pi[x]) {
                    return Err(axiom("definedness", vec![a, x]));
                }
                act[a * n + x] = v;
            }
        }
        let gpd = OrdGroupoid::with_equality_order(gpd);
        let mut below = BoolMatrix::new(n);
        for y in 0..n {
            for &a in cat.arrows_from(pi[y]) {
                below.set(act[a * n + y].expect("defined"), y, true);
            }
        }
        let s = GroupoidAction { cat, gpd, pi, act, below };
        s.check_axioms()?;
        Ok(s)
    }

    pub fn from_raw(raw: RawAction) -> Result<GroupoidAction, AffineError> {
        let cat = FinCategory::from_raw(raw.category)?;
        let g = raw.groupoid;
        let gpd = Groupoid::from_table(g.elements, g.dom, g.cod, g.inv, &g.comp)?;
        let (m, n) = (cat.len(), gpd.len());
        if raw.action.len() != m {
            return Err(AffineError::Shape {
                field: "action",
                expected: m,
                got: raw.action.len(),
            });
        }
        if let Some(row) = raw.action.iter().find(|r| r.len() != n) {
            return Err(AffineError::Shape {
                field: "action row",
                expected: n,
                got: row.len(),
            });
        }
        let table = raw.action;
        GroupoidAction::new(cat, gpd, raw.pi, |a, x| table[a][x])
    }

    pub fn to_raw(&self) -> RawAction {
        let n = self.gpd.len();
        let mut groupoid = self.gpd.to_raw();
        groupoid.leq = None;
        RawAction {
            category: self.cat.to_raw(),
            groupoid,
            pi: self.pi.clone(),
            action: self.act.chunks(n).map(<[Option<usize>]>::to_vec).collect(),
        }
    }

    fn check_axioms(&self) -> Result<(), AffineError> {
        let (c, g) = (&self.cat, &self.gpd);
        let n = g.len();
        for x in 0..n {
            if self.act(self.pi[x], x) != Some(x) {
                return Err(axiom("A1", vec![x]));
            }
        }
        for a in 0..c.len() {
            for x in self.domain_of(a) {
                if self.pi[self.at(a, x)] != c.cod(a) {
                    return Err(axiom("A2", vec![a, x]));
                }
            }
        }
        for b in 0..c.len() {
            for x in self.domain_of(b) {
                let y = self.at(b, x);
                for &a in c.arrows_from(c.cod(b)) {
                    if self.act(a, y) != self.act(c.mul(a, b), x) {
                        return Err(axiom("A3", vec![a, b, x]));
                    }
                }
            }
        }
        for a in 0..c.len() {
            for x in 0..n {
                let ax = self.act(a, x);
                let (d, r) = (self.act(a, g.dom(x)), self.act(a, g.cod(x)));
                if ax.is_some() != d.is_some() || ax.map(|v| g.dom(v)) != d {
                    return Err(axiom("A4", vec![a, x]));
                }
                if ax.is_some() != r.is_some() || ax.map(|v| g.cod(v)) != r {
                    return Err(axiom("A4", vec![a, x]));
                }
            }
        }
        for x in 0..n {
            for &y in g.arrows_into(g.dom(x)) {
                let xy = g.comp(x, y).expect("composable");
                if self.pi[x] == self.pi[y] && self.pi[xy] != self.pi[x] {
                    return Err(axiom("A5", vec![x, y]));
                }
                for &a in c.arrows_from(self.pi[xy]) {
                    let lhs = self.at(a, xy);
                    let rhs = match (self.act(a, x), self.act(a, y)) {
                        (Some(ax), Some(ay)) => g.comp(ax, ay),
                        _ => None,
                    };
                    if rhs != Some(lhs) {
                        return Err(axiom("A6", vec![a, x, y]));
                    }
                }
            }
        }
        if let Some((p, q)) = g.principal_violation() {
            return Err(axiom("A7", vec![p, q]));
        }
        for x in 0..n {
            let arrows = c.arrows_from(self.pi[x]);
            for &a in arrows {
                for &b in arrows {
                    let (ax, bx) = (self.at(a, x), self.at(b, x));
                    let same_d = g.dom(ax) == g.dom(bx);
                    if same_d != (g.cod(ax) == g.cod(bx)) {
                        return Err(axiom("A8", vec![a, b, x]));
                    }
                    if same_d && ax != bx {
                        return Err(axiom("A7+A8", vec![a, b, x]));
                    }
                }
            }
        }
        let comps = g.components();
        for x in 0..n {
            if self.pi[x] != self.pi[comps[x]] {
                return Err(mismatch(format!("π is not constant on the component of #{x}")));
            }
        }
        for &e in g.identities() {
            for &a in c.arrows_from(self.pi[e]) {
                if !g.is_identity(self.at(a, e)) {
                    return Err(mismatch(format!("#{a}·#{e} is not an identity")));
                }
            }
        }
        Ok(())
    }

    pub fn category(&self) -> &FinCategory {
        &self.cat
    }

    pub fn groupoid(&self) -> &OrdGroupoid {
        &self.gpd
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    /// `a·x` when `dom a = π x`.
    #[inline]
    pub fn act(&self, a: usize, x: usize) -> Option<usize> {
        self.act[a * self.gpd.len() + x]
    }

    #[inline]
    fn at(&self, a: usize, x: usize) -> usize {
        self.act(a, x).expect("defined action")
    }

    fn domain_of(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.gpd.len()).filter(move |&x| self.pi[x] == self.cat.dom(a))
    }

    /// `x ⪯ y`: `x = a·y` for some `a`.
    pub fn preceq(&self, x: usize, y: usize) -> bool {
        self.below.get(x, y)
    }

    pub fn equiv(&self, x: usize, y: usize) -> bool {
        self.preceq(x, y) && self.preceq(y, x)
    }

    /// `C·x`.
    pub fn orbit(&self, x: usize) -> BTreeSet<usize> {
        self.below.predecessors(x).collect()
    }
}

/// A validated affine system.
#[derive(Clone, Debug)]
pub struct AffineSystem {
    pub base: GroupoidAction,
}

impl std::ops::Deref for AffineSystem {
    type Target = GroupoidAction;
    fn deref(&self) -> &GroupoidAction {
        &self.base
    }
}

/// Right cancellative category, `π` onto the identities, and `a·x = b·x ⇒ a = b`.
pub fn validate_affine(s: GroupoidAction) -> Result<AffineSystem, AffineError> {
    let c = &s.cat;
    if let Some((x, y, z)) = c.right_cancellation_failure() {
        return Err(AffineError::NotAffine {
            tag: "right cancellative category",
            witness: vec![x, y, z],
        });
    }
    let hit: BTreeSet<usize> = s.pi.iter().copied().collect();
    if let Some(&e) = c.identities().iter().find(|e| !hit.contains(e)) {
        return Err(AffineError::NotAffine {
            tag: "π surjective",
            witness: vec![e],
        });
    }
    for x in 0..s.gpd.len() {
        let mut seen = BTreeMap::new();
        for &a in c.arrows_from(s.pi[x]) {
            if let Some(b) = seen.insert(s.at(a, x), a) {
                return Err(AffineError::NotAffine {
                    tag: "right cancellation condition",
                    witness: vec![b, a, x],
                });
            }
        }
    }
    for x in 0..s.gpd.len() {
        for y in 0..s.gpd.len() {
            if s.equiv(x, y) && !c.arrows_from(s.pi[x]).iter().any(|&u| c.is_iso(u) && s.act(u, x) == Some(y)) {
                return Err(mismatch(format!("#{x} ≡ #{y} without an isomorphism")));
            }
        }
    }
    Ok(AffineSystem { base: s })
}

pub fn validate_action(raw: RawAction) -> Result<GroupoidAction, AffineError> {
    GroupoidAction::from_raw(raw)
}

/// `J(C, G)`: classes of `≡` ordered by `⪯`.
#[derive(Clone, Debug)]
pub struct JGroupoid {
    pub groupoid: OrdGroupoid,
    /// Class of each groupoid element.
    pub class: Vec<usize>,
    /// Least element of each class.
    pub reps: Vec<usize>,
    /// Composable representative pairs examined for well-definedness.
    pub representative_pairs: usize,
}

pub fn j_of(s: &GroupoidAction) -> Result<JGroupoid, AffineError> {
    let g = &s.gpd;
    let n = g.len();
    let mut class = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if class[x] == usize::MAX {
            let k = reps.len();
            reps.push(x);
            for y in x..n {
                if s.equiv(x, y) {
                    class[y] = k;
                }
            }
        }
    }
    for x in 0..n {
        let r = reps[class[x]];
        if class[g.dom(x)] != class[g.dom(r)] || class[g.cod(x)] != class[g.cod(r)] || class[g.inv(x)] != class[g.inv(r)] {
            return Err(mismatch(format!("ends or inverse not constant on the class of #{x}")));
        }
    }
    let mut product: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut representative_pairs = 0;
    for x in 0..n {
        for &y in g.arrows_into(g.dom(x)) {
            representative_pairs += 1;
            let v = class[g.comp(x, y).expect("composable")];
            if let Some(old) = product.insert((class[x], class[y]), v) {
                if old != v {
                    return Err(mismatch(format!("J-product depends on representatives at (#{x}, #{y})")));
                }
            }
        }
    }
    let names = reps.iter().map(|&r| format!("[{}]", g.name(r))).collect();
    let groupoid = OrdGroupoid::build(
        names,
        reps.iter().map(|&r| class[g.dom(r)]).collect(),
        reps.iter().map(|&r| class[g.cod(r)]).collect(),
        reps.iter().map(|&r| class[g.inv(r)]).collect(),
        |p, q| product.get(&(p, q)).copied().unwrap_or(usize::MAX),
        |p, q| s.preceq(reps[p], reps[q]),
    )?;
    let j = JGroupoid {
        groupoid,
        class,
        reps,
        representative_pairs,
    };
    check_restrictions(s, &j)?;
    Ok(j)
}

/// `([x]|[e]) = [a·x]` where `e = a·dom(x)`, and dually for corestriction.
fn check_restrictions(s: &GroupoidAction, j: &JGroupoid) -> Result<(), AffineError> {
    let (g, jg) = (&s.gpd, &j.groupoid);
    for (k, &x) in j.reps.iter().enumerate() {
        for &ek in jg.identities() {
            let e = j.reps[ek];
            if jg.leq(ek, jg.dom(k)) {
                let a = s.cat.arrows_from(s.pi[x]).iter().copied().find(|&a| s.act(a, g.dom(x)) == Some(e));
                let a = a.ok_or_else(|| mismatch("restriction selector missing"))?;
                if jg.restriction(k, ek)? != j.class[s.at(a, x)] {
                    return Err(mismatch(format!("restriction of {} to {}", jg.name(k), jg.name(ek))));
                }
            }
            if jg.leq(ek, jg.cod(k)) {
                let b = s.cat.arrows_from(s.pi[x]).iter().copied().find(|&b| s.act(b, g.cod(x)) == Some(e));
                let b = b.ok_or_else(|| mismatch("corestriction selector missing"))?;
                if jg.corestriction(ek, k)? != j.class[s.at(b, x)] {
                    return Err(mismatch(format!("corestriction of {} to {}", jg.name(k), jg.name(ek))));
                }
            }
        }
    }
    Ok(())
}

/// Identities `(e, f)` whose orbits meet in a set that is not a single orbit.
pub fn orbit_condition_failure(s: &GroupoidAction) -> Option<(usize, usize)> {
    let ids = s.gpd.identities();
    let orbits: Vec<BTreeSet<usize>> = ids.iter().map(|&e| s.orbit(e)).collect();
    for (i, &e) in ids.iter().enumerate() {
        for (k, &f) in ids.iter().enumerate() {
            let meet: BTreeSet<usize> = orbits[i].intersection(&orbits[k]).copied().collect();
            if !meet.is_empty() && !orbits.iter().any(|o| *o == meet) {
                return Some((e, f));
            }
        }
    }
    None
}

pub fn orbit_condition(s: &GroupoidAction) -> bool {
    orbit_condition_failure(s).is_none()
}

/// Classes `([x], [y])` where some selector choice in
/// `[((r y ∗ d x)·x)((d x ∗ r y)·y)]` disagrees with the pseudoproduct of `J`.
pub fn pseudoproduct_formula_failure(s: &GroupoidAction, j: &JGroupoid) -> Option<(usize, usize)> {
    let (g, jg) = (&s.gpd, &j.groupoid);
    let ids = g.identities();
    for (p, &x) in j.reps.iter().enumerate() {
        for (q, &y) in j.reps.iter().enumerate() {
            let (dx, ry) = (g.dom(x), g.cod(y));
            let meet: BTreeSet<usize> = s.orbit(dx).intersection(&s.orbit(ry)).copied().collect();
            let i = ids.iter().copied().find(|&i| !meet.is_empty() && s.orbit(i) == meet);
            let expected = jg.pseudoproduct_fast(p, q);
            let Some(i) = i else {
                if expected.is_some() {
                    return Some((p, q));
                }
                continue;
            };
            let sel_x: Vec<usize> = s.cat.arrows_from(s.pi[dx]).iter().copied().filter(|&a| s.act(a, dx) == Some(i)).collect();
            let sel_y: Vec<usize> = s.cat.arrows_from(s.pi[ry]).iter().copied().filter(|&b| s.act(b, ry) == Some(i)).collect();
            for &a in &sel_x {
                for &b in &sel_y {
                    let got = g.comp(s.at(a, x), s.at(b, y)).map(|v| j.class[v]);
                    if got.is_none() || got != expected {
                        return Some((p, q));
                    }
                }
            }
        }
    }
    None
}

/// The canonical affine system `(R(G), R(G))` of an ordered groupoid.
#[derive(Clone, Debug)]
pub struct CanonicalAffine {
    pub system: AffineSystem,
    pub category: PairCategory,
    /// Groupoid elements `(x, y)` with `cod x = cod y`.
    pub pairs: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
}

impl CanonicalAffine {
    pub fn element(&self, x: usize, y: usize) -> Option<usize> {
        self.index.get(&(x, y)).copied()
    }
}

fn pair_groupoid(names: impl Fn(usize) -> String, pairs: &[(usize, usize)]) -> Result<(Groupoid, BTreeMap<(usize, usize), usize>), AffineError> {
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let get = |p| index.get(&p).copied().unwrap_or(usize::MAX);
    let g = Groupoid::build(
        pairs.iter().map(|&(x, y)| format!("({},{})", names(x), names(y))).collect(),
        pairs.iter().map(|&(_, y)| get((y, y))).collect(),
        pairs.iter().map(|&(x, _)| get((x, x))).collect(),
        pairs.iter().map(|&(x, y)| get((y, x))).collect(),
        |p, q| get((pairs[p].0, pairs[q].1)),
    )?;
    Ok((g, index))
}

pub fn canonical_affine(g: &OrdGroupoid) -> Result<CanonicalAffine, AffineError> {
    let category = cancellative::r_of(g)?;
    let pairs: Vec<(usize, usize)> = (0..g.len())
        .flat_map(|x| (0..g.len()).filter(move |&y| g.cod(x) == g.cod(y)).map(move |y| (x, y)))
        .collect();
    let (gpd, index) = pair_groupoid(|x| g.name(x).to_string(), &pairs)?;
    let pi = pairs
        .iter()
        .map(|&(x, _)| category.arrow(g.cod(x), g.cod(x)).ok_or_else(|| mismatch("missing identity of R(G)")))
        .collect::<Result<Vec<_>, _>>()?;
    let tensor = |h: usize, x: usize| g.mul(h, g.corestrict(g.dom(h), x));
    let action = |a: usize, p: usize| {
        let ((h, e), (x, y)) = (category.pairs[a], pairs[p]);
        (e == g.cod(x)).then(|| index.get(&(tensor(h, x), tensor(h, y))).copied().unwrap_or(usize::MAX))
    };
    let base = GroupoidAction::new(category.category.clone(), gpd, pi, action)?;
    let system = validate_affine(base)?;
    Ok(CanonicalAffine {
        system,
        category,
        pairs,
        index,
    })
}

/// `α(g) = [(cod g, g)]` as a map `G → J(R(G), R(G))`, with its checks.
#[derive(Clone, Debug)]
pub struct UniversalityReport {
    pub canonical: CanonicalAffine,
    pub j: JGroupoid,
    pub alpha: Vec<usize>,
    pub functor: bool,
    pub bijective: bool,
    pub order_preserving: bool,
    pub order_reflecting: bool,
}

impl UniversalityReport {
    pub fn holds(&self) -> bool {
        self.functor && self.bijective && self.order_preserving && self.order_reflecting
    }
}

pub fn verify_affine_universality(g: &OrdGroupoid) -> Result<UniversalityReport, AffineError> {
    let canonical = canonical_affine(g)?;
    let j = j_of(&canonical.system)?;
    let alpha = (0..g.len())
        .map(|x| canonical.element(g.cod(x), x).map(|p| j.class[p]).ok_or_else(|| mismatch("α leaves R(G)")))
        .collect::<Result<Vec<_>, _>>()?;
    let jg = &j.groupoid;
    let functor = OrderedFunctor::new(g, jg, alpha.clone()).is_ok();
    let bijective = alpha.iter().collect::<BTreeSet<_>>().len() == g.len() && g.len() == jg.len();
    let mut order_preserving = true;
    let mut order_reflecting = true;
    for x in 0..g.len() {
        for y in 0..g.len() {
            let (l, r) = (g.leq(x, y), jg.leq(alpha[x], alpha[y]));
            order_preserving &= !l || r;
            order_reflecting &= !r || l;
        }
    }
    Ok(UniversalityReport {
        canonical,
        j,
        alpha,
        functor,
        bijective,
        order_preserving,
        order_reflecting,
    })
}

/// Morphism and equivalence conditions for a pair of maps between systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MorphismFlags {
    pub e1: bool,
    pub e2: bool,
    pub e3: bool,
}

impl MorphismFlags {
    pub fn is_equivalence(&self) -> bool {
        self.e1 && self.e2 && self.e3
    }
}

/// Errors unless `(alpha1, alpha2)` are functors with `α₂(a·x) = α₁(a)·α₂(x)`.
pub fn affine_morphism_check(
    s: &GroupoidAction,
    t: &GroupoidAction,
    alpha1: &[usize],
    alpha2: &[usize],
) -> Result<MorphismFlags, AffineError> {
    let not = |tag, witness| AffineError::NotAMorphism { tag, witness };
    let f1 = CategoryFunctor::new(&s.cat, &t.cat, alpha1.to_vec()).map_err(|e| not("category functor", e.witness()))?;
    OrderedFunctor::new(&s.gpd, &t.gpd, alpha2.to_vec()).map_err(|e| not("groupoid functor", e.witness()))?;
    for a in 0..s.cat.len() {
        for x in s.domain_of(a) {
            if t.act(alpha1[a], alpha2[x]) != Some(alpha2[s.at(a, x)]) {
                return Err(not("action", vec![a, x]));
            }
        }
    }
    let n = s.gpd.len();
    let e2 = (0..n).all(|x| (0..n).all(|y| !t.preceq(alpha2[x], alpha2[y]) || s.preceq(x, y)));
    let e3 = (0..t.gpd.len()).all(|y| alpha2.iter().any(|&v| t.equiv(y, v)));
    Ok(MorphismFlags {
        e1: f1.equivalence_report().is_equivalence(),
        e2,
        e3,
    })
}

/// `ᾱ[x] = [α₂(x)]`, checked independent of representatives.
pub fn induced_map(sj: &JGroupoid, tj: &JGroupoid, alpha2: &[usize]) -> Result<Vec<usize>, AffineError> {
    let mut map = vec![usize::MAX; sj.reps.len()];
    for (x, &k) in sj.class.iter().enumerate() {
        let v = tj.class[alpha2[x]];
        if map[k] != usize::MAX && map[k] != v {
            return Err(mismatch(format!("induced map depends on the representative #{x}")));
        }
        map[k] = v;
    }
    Ok(map)
}

/// Builds `ᾱ` and classifies it as an ordered functor.
pub fn induced_functor(sj: &JGroupoid, tj: &JGroupoid, alpha2: &[usize]) -> Result<(Vec<usize>, FunctorFlags), AffineError> {
    let map = induced_map(sj, tj, alpha2)?;
    let f = OrderedFunctor::new(&sj.groupoid, &tj.groupoid, map.clone())?;
    Ok((map, f.flags()))
}

/// C1 and C2 for some base identity `x₀`; returns the least such `x₀`.
pub fn cyclic_base(s: &GroupoidAction) -> Option<usize> {
    let (c, g) = (&s.cat, &s.gpd);
    let ids: BTreeSet<usize> = g.identities().iter().copied().collect();
    g.identities().iter().copied().find(|&x0| {
        s.orbit(x0) == ids && {
            let from = c.arrows_from(s.pi[x0]);
            from.iter().all(|&a| {
                from.iter().all(|&b| c.cod(a) != c.cod(b) || g.arrow_between(s.at(b, x0), s.at(a, x0)).is_some())
            })
        }
    })
}

pub fn is_cyclic(s: &GroupoidAction) -> bool {
    cyclic_base(s).is_some()
}

/// One-object category acting on a universal principal groupoid.
pub fn is_affine_monoid_system(s: &GroupoidAction) -> bool {
    let g = &s.gpd;
    s.cat.identities().len() == 1
        && g.identities().iter().all(|&p| g.identities().iter().all(|&q| g.arrow_between(p, q).is_some()))
}

/// The principal groupoid of `ℛ*` on a set acted on by `C`, with the diagonal action.
#[derive(Clone, Debug)]
pub struct RStarSystem {
    pub action: GroupoidAction,
    pub pairs: Vec<(usize, usize)>,
}

/// `set_action[a][x]` is `a·x` on a set with anchor `pi`.
pub fn rstar_system(
    cat: FinCategory,
    points: &[String],
    pi: Vec<usize>,
    set_action: &[Vec<Option<usize>>],
) -> Result<RStarSystem, AffineError> {
    let k = points.len();
    let not = |tag, witness| AffineError::NotASetAction { tag, witness };
    if pi.len() != k || set_action.len() != cat.len() || set_action.iter().any(|r| r.len() != k) {
        return Err(AffineError::Shape {
            field: "set action",
            expected: cat.len() * k,
            got: set_action.iter().map(Vec::len).sum(),
        });
    }
    if let Some(&v) = pi.iter().find(|&&v| v >= cat.len() || !cat.is_identity(v)) {
        return Err(AffineError::OutOfRange { field: "pi", value: v });
    }
    for a in 0..cat.len() {
        for x in 0..k {
            let v = set_action[a][x];
            if v.is_some() != (cat.dom(a) == pi[x]) || v.is_some_and(|v| v >= k) {
                return Err(not("definedness", vec![a, x]));
            }
            if let Some(v) = v {
                if pi[v] != cat.cod(a) {
                    return Err(not("A2", vec![a, x]));
                }
            }
        }
    }
    for x in 0..k {
        if set_action[pi[x]][x] != Some(x) {
            return Err(not("A1", vec![x]));
        }
        for &b in cat.arrows_from(pi[x]) {
            let y = set_action[b][x].expect("defined");
            for &a in cat.arrows_from(cat.cod(b)) {
                if set_action[a][y] != set_action[cat.comp(a, b).expect("composable")][x] {
                    return Err(not("A3", vec![a, b, x]));
                }
            }
        }
    }
    let related = |x: usize, y: usize| {
        pi[x] == pi[y]
            && cat.arrows_from(pi[x]).iter().all(|&a| {
                cat.arrows_from(pi[x])
                    .iter()
                    .all(|&b| (set_action[a][x] == set_action[b][x]) == (set_action[a][y] == set_action[b][y]))
            })
    };
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|x| (0..k).map(move |y| (x, y))).filter(|&(x, y)| related(x, y)).collect();
    let (gpd, index) = pair_groupoid(|x| points[x].clone(), &pairs)?;
    let pi2 = pairs.iter().map(|&(x, _)| pi[x]).collect();
    let action = |a: usize, p: usize| {
        let (x, y) = pairs[p];
        match (set_action[a][x], set_action[a][y]) {
            (Some(u), Some(v)) => Some(index.get(&(u, v)).copied().unwrap_or(usize::MAX)),
            _ => None,
        }
    };
    let action = GroupoidAction::new(cat, gpd, pi2, action)?;
    Ok(RStarSystem { action, pairs })
}

/// The system `(C, X∗X)` of a right cancellative category with weak initial
/// identity `one`, where `X` is the set of arrows out of `one`.
#[derive(Clone, Debug)]
pub struct RootedSystem {
    pub system: AffineSystem,
    /// Groupoid elements `(x, y)`: arrows out of `one` with a common codomain.
    pub pairs: Vec<(usize, usize)>,
}

pub fn rooted_system(c: &FinCategory, one: usize) -> Result<RootedSystem, AffineError> {
    if one >= c.len() || !c.is_identity(one) {
        return Err(CategoryError::NotAnObject(one).into());
    }
    if let Some(e) = c.identities().iter().copied().find(|&e| c.hom(one, e).next().is_none()) {
        return Err(CategoryError::NotWeakTerminal(e).into());
    }
    let xs = c.arrows_from(one);
    let pairs: Vec<(usize, usize)> = xs
        .iter()
        .flat_map(|&x| xs.iter().copied().filter(move |&y| c.cod(x) == c.cod(y)).map(move |y| (x, y)))
        .collect();
    let (gpd, index) = pair_groupoid(|x| c.name(x).to_string(), &pairs)?;
    let pi = pairs.iter().map(|&(x, _)| c.cod(x)).collect();
    let action = |a: usize, p: usize| {
        let (x, y) = pairs[p];
        (c.dom(a) == c.cod(x)).then(|| {
            let key = (c.comp(a, x).expect("composable"), c.comp(a, y).expect("composable"));
            index.get(&key).copied().unwrap_or(usize::MAX)
        })
    };
    let base = GroupoidAction::new(c.clone(), gpd, pi, action)?;
    Ok(RootedSystem {
        system: validate_affine(base)?,
        pairs,
    })
}

/// `J(C, X∗X) ≅ G^r(C)` along `[(x, y)] ↦ [x, y]`; returns the map.
pub fn verify_rooted_system(c: &FinCategory, one: usize) -> Result<Option<Vec<usize>>, AffineError> {
    let rs = rooted_system(c, one)?;
    let j = j_of(&rs.system)?;
    let gr = cancellative::g_rooted(&c.op(), one)?;
    let map = j
        .reps
        .iter()
        .map(|&p| {
            let (x, y) = rs.pairs[p];
            gr.class(x, y).ok_or_else(|| mismatch("pair missing from G^r(C)"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let f = OrderedFunctor::new(&j.groupoid, &gr.groupoid, map.clone())?;
    let fl = f.flags();
    Ok((fl.ordered_embedding && fl.surjective).then_some(map))
}

/// `S` rebuilt as `J(R(S*), R(S*))` with a zero adjoined.
#[derive(Clone, Debug)]
pub struct AffineRecovery {
    pub recovered: InvSemigroup,
    pub isomorphism: Option<Vec<usize>>,
}

pub fn semigroup_from_affine(s: &InvSemigroup) -> Result<AffineRecovery, AffineError> {
    let zero = s.zero().or_else(|| s.find_zero()).ok_or(AffineError::NoZero)?;
    let (g, keep) = esn::groupoid_of_nonzero(s)?;
    let u = verify_affine_universality(&g)?;
    let recovered = esn::semigroup_of_with_zero(&u.j.groupoid)?;
    let mut direct = vec![0; s.len()];
    for (i, &x) in keep.iter().enumerate() {
        direct[x] = u.alpha[i] + 1;
    }
    direct[zero] = 0;
    let isomorphism = if iso::is_isomorphism(&s.signature(), &recovered.signature(), &direct) {
        Some(direct)
    } else {
        semigroup::find_isomorphism(s, &recovered)?
    };
    Ok(AffineRecovery { recovered, isomorphism })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{brandt, chain_semilattice, cyclic_group, symmetric_inverse_monoid};

    fn universal(k: usize) -> (Groupoid, Vec<(usize, usize)>) {
        let pairs: Vec<(usize, usize)> = (0..k).flat_map(|x| (0..k).map(move |y| (x, y))).collect();
        let (g, _) = pair_groupoid(|x| format!("p{x}"), &pairs).unwrap();
        (g, pairs)
    }

    fn point() -> FinCategory {
        FinCategory::from_monoid(&cyclic_group(1)).unwrap()
    }

    /// `e, f < u, v` as a category acting on its objects.
    pub(crate) fn crown_system() -> GroupoidAction {
        let names: Vec<String> = ["e", "f", "u", "v"].iter().map(|s| s.to_string()).collect();
        let mut leq = BoolMatrix::identity(4);
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            leq.set(i, j, true);
        }
        let c = FinCategory::from_poset(&names, &leq).unwrap();
        let gpd = Groupoid::discrete(names);
        GroupoidAction::new(c.clone(), gpd, (0..4).collect(), |a, x| (c.dom(a) == x).then(|| c.cod(a))).unwrap()
    }

    #[test]
    fn identity_action_gives_discrete_order() {
        let (g, _) = universal(2);
        let s = GroupoidAction::new(point(), g, vec![0; 4], |_, x| Some(x)).unwrap();
        let j = j_of(&s).unwrap();
        assert_eq!(j.groupoid.len(), 4);
        assert_eq!(j.groupoid.order(), &BoolMatrix::identity(4));
        assert!(orbit_condition(&s));
        assert!(is_affine_monoid_system(&s));
        assert!(validate_affine(s).is_ok());
    }

    #[test]
    fn a8_counterexample() {
        // monoid {1, a}, a idempotent, a sends both points to p1
        let c = FinCategory::from_monoid_table(vec!["1".into(), "a".into()], &[0, 1, 1, 1], 0).unwrap();
        let (g, pairs) = universal(2);
        let f = |a: usize, v: usize| if a == 1 { 1 } else { v };
        let r = GroupoidAction::new(c, g, vec![0; 4], |a, x| {
            let (p, q) = pairs[x];
            pairs.iter().position(|&t| t == (f(a, p), f(a, q)))
        });
        assert!(matches!(r, Err(AffineError::Axiom { tag: "A8", .. })));
    }

    #[test]
    fn orbit_condition_counterexample() {
        let s = crown_system();
        assert_eq!(orbit_condition_failure(&s), Some((0, 1)));
        let j = j_of(&s).unwrap();
        assert!(!j.groupoid.is_star_inductive());
        assert!(pseudoproduct_formula_failure(&s, &j).is_none());
        assert!(validate_affine(s).is_ok());
    }

    #[test]
    fn canonical_systems() {
        let one = OrdGroupoid::from_poset(vec!["e".into()], BoolMatrix::identity(1)).unwrap();
        let u = verify_affine_universality(&one).unwrap();
        assert!(u.holds());
        assert_eq!(u.canonical.pairs.len(), 1);
        let h = esn::groupoid_of(&cyclic_group(3)).unwrap();
        let u = verify_affine_universality(&h).unwrap();
        assert!(u.holds());
        assert_eq!(u.canonical.pairs.len(), 9);
        assert_eq!(u.canonical.category.category.len(), 3);
        let i2 = esn::groupoid_of(&symmetric_inverse_monoid(2)).unwrap();
        let u = verify_affine_universality(&i2).unwrap();
        assert!(u.holds());
        let expected: usize = (0..i2.len()).map(|x| (0..i2.len()).filter(|&y| i2.cod(x) == i2.cod(y)).count()).sum();
        assert_eq!(u.canonical.pairs.len(), expected);
        assert!(orbit_condition(&u.canonical.system) == u.j.groupoid.is_star_inductive());
        assert!(pseudoproduct_formula_failure(&u.canonical.system, &u.j).is_none());
        assert!(is_cyclic(&u.canonical.system));
    }

    #[test]
    fn morphisms() {
        let s = crown_system();
        let sj = j_of(&s).unwrap();
        let id1: Vec<usize> = (0..s.category().len()).collect();
        let id2: Vec<usize> = (0..s.groupoid().len()).collect();
        let fl = affine_morphism_check(&s, &s, &id1, &id2).unwrap();
        assert!(fl.is_equivalence());
        let (map, flags) = induced_functor(&sj, &sj, &id2).unwrap();
        assert_eq!(map, (0..sj.reps.len()).collect::<Vec<_>>());
        assert!(flags.ordered_embedding && flags.surjective);
        let t = GroupoidAction::new(point(), Groupoid::discrete(vec!["*".into()]), vec![0], |_, _| Some(0)).unwrap();
        let tj = j_of(&t).unwrap();
        let fl = affine_morphism_check(&s, &t, &vec![0; id1.len()], &vec![0; id2.len()]).unwrap();
        assert!(!fl.e2 && fl.e3);
        let (_, flags) = induced_functor(&sj, &tj, &vec![0; id2.len()]).unwrap();
        assert!(flags.ordered && !flags.injective);
        assert!(matches!(
            affine_morphism_check(&t, &s, &[0], &[1]),
            Err(AffineError::NotAMorphism { .. })
        ));
    }

    #[test]
    fn rstar_examples() {
        // the group Z3 acting freely on itself
        let z3 = cyclic_group(3);
        let c = FinCategory::from_monoid(&z3).unwrap();
        let pts: Vec<String> = z3.names().to_vec();
        let table: Vec<Vec<Option<usize>>> = (0..3).map(|a| (0..3).map(|x| Some(z3.mul(a, x))).collect()).collect();
        let r = rstar_system(c.clone(), &pts, vec![0; 3], &table).unwrap();
        assert_eq!(r.pairs.len(), 9);
        // trivial action of a two-element monoid
        let m = FinCategory::from_monoid_table(vec!["1".into(), "a".into()], &[0, 1, 1, 1], 0).unwrap();
        let triv: Vec<Vec<Option<usize>>> = vec![vec![Some(0), Some(1)]; 2];
        let r = rstar_system(m, &["x".into(), "y".into()], vec![0; 2], &triv).unwrap();
        assert_eq!(r.pairs.len(), 4);
        let bad: Vec<Vec<Option<usize>>> = vec![vec![Some(1), Some(0), Some(2)]; 3];
        assert!(matches!(rstar_system(c, &pts, vec![0; 3], &bad), Err(AffineError::NotASetAction { .. })));
    }

    #[test]
    fn rooted_systems() {
        let names: Vec<String> = (0..3).map(|i| format!("p{i}")).collect();
        let chain = FinCategory::from_poset(&names, &BoolMatrix::from_fn(3, |i, j| i <= j)).unwrap();
        assert!(verify_rooted_system(&chain, 0).unwrap().is_some());
        let rs = rooted_system(&chain, 0).unwrap();
        assert!(is_cyclic(&rs.system));
        let z2 = FinCategory::from_monoid(&cyclic_group(2)).unwrap();
        assert!(verify_rooted_system(&z2, 0).unwrap().is_some());
    }

    #[test]
    fn semigroups_with_zero_recovered() {
        for s in [chain_semilattice(3), symmetric_inverse_monoid(2), brandt(2)] {
            let r = semigroup_from_affine(&s).unwrap();
            assert!(r.isomorphism.is_some(), "{:?}", s.names());
        }
        assert!(matches!(semigroup_from_affine(&cyclic_group(2)), Err(AffineError::NoZero)));
    }
}
