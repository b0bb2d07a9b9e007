//! Ordered groupoids from cancellative categories and back: span groupoids,
//! the categories of order-compatible pairs, and the rooted correspondence.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::category::{CategoryError, CategoryFunctor, EquivalenceReport, FinCategory};
use crate::esn::{self, EsnError};
use crate::groupoid::{GroupoidError, OrdGroupoid, OrderedFunctor};
use crate::semigroup::InvSemigroup;
use crate::util::{limits, BoolMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CancellativeError {
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Esn(#[from] EsnError),
    #[error("{0} elements exceed the cap {1}")]
    TooLarge(usize, usize),
    #[error("ordered groupoid has no maximum identity")]
    NoMaximumIdentity,
    #[error("semigroup has no identity")]
    NotAMonoid,
    #[error("construction check failed: {0}")]
    Mismatch(String),
}

fn mismatch(s: impl Into<String>) -> CancellativeError {
    CancellativeError::Mismatch(s.into())
}

/// An ordered groupoid of spans `[a, b]` taken up to right isomorphism.
#[derive(Clone, Debug)]
pub struct SpanGroupoid {
    pub groupoid: OrdGroupoid,
    /// Lexicographically least pair of each class.
    pub pairs: Vec<(usize, usize)>,
    class: BTreeMap<(usize, usize), usize>,
}

impl SpanGroupoid {
    /// Class of the pair `(a, b)`, if it lies in the carrier.
    pub fn class(&self, a: usize, b: usize) -> Option<usize> {
        self.class.get(&(a, b)).copied()
    }

    fn at(&self, a: usize, b: usize) -> Result<usize, CancellativeError> {
        self.class(a, b).ok_or_else(|| mismatch(format!("pair (#{a}, #{b}) has no class")))
    }
}

fn spans(c: &FinCategory, keep: impl Fn(usize, usize) -> bool) -> Result<SpanGroupoid, CancellativeError> {
    let n = c.len();
    let cap = limits::conversion_cap();
    let mut class = BTreeMap::new();
    let mut pairs = Vec::new();
    for a in 0..n {
        for &b in c.arrows_from(c.dom(a)) {
            if !keep(a, b) || class.contains_key(&(a, b)) {
                continue;
            }
            let k = pairs.len();
            pairs.push((a, b));
            for &u in c.arrows_into(c.dom(a)) {
                if c.is_iso(u) {
                    class.insert((c.comp(a, u).expect("composable"), c.comp(b, u).expect("composable")), k);
                }
            }
            if pairs.len() > cap {
                return Err(CancellativeError::TooLarge(pairs.len(), cap));
            }
        }
    }
    let m = pairs.len();
    let get = |a: usize, b: usize| class.get(&(a, b)).copied().unwrap_or(usize::MAX);
    let names = pairs
        .iter()
        .map(|&(a, b)| format!("[{},{}]", c.name(a), c.name(b)))
        .collect();
    let dom = pairs.iter().map(|&(_, b)| get(b, b)).collect();
    let cod = pairs.iter().map(|&(a, _)| get(a, a)).collect();
    let inv = pairs.iter().map(|&(a, b)| get(b, a)).collect();
    let mut leq = BoolMatrix::new(m);
    for (k, &(a, b)) in pairs.iter().enumerate() {
        for &p in c.arrows_into(c.dom(a)) {
            if let (Some(ap), Some(bp)) = (c.comp(a, p), c.comp(b, p)) {
                if let Some(&j) = class.get(&(ap, bp)) {
                    leq.set(j, k, true);
                }
            }
        }
    }
    let groupoid = OrdGroupoid::build(
        names,
        dom,
        cod,
        inv,
        |x, y| {
            let ((a, b), (cc, d)) = (pairs[x], pairs[y]);
            c.arrows_into(c.dom(cc))
                .iter()
                .copied()
                .find(|&u| c.is_iso(u) && c.dom(u) == c.dom(b) && c.comp(cc, u) == Some(b))
                .and_then(|u| c.comp(d, u))
                .map_or(usize::MAX, |du| get(a, du))
        },
        |x, y| leq.get(x, y),
    )?;
    Ok(SpanGroupoid { groupoid, pairs, class })
}

/// `G(C)` for a left cancellative category.
pub fn g_of_left(c: &FinCategory) -> Result<SpanGroupoid, CancellativeError> {
    c.require_left_cancellative()?;
    spans(c, |_, _| true)
}

/// `G′(C)` for a right cancellative category: cospans up to left isomorphism,
/// computed on the opposite category.
pub fn g_of_right(c: &FinCategory) -> Result<SpanGroupoid, CancellativeError> {
    c.require_right_cancellative()?;
    spans(&c.op(), |_, _| true)
}

/// First identity class where `[a,a] ↦ [cod a, cod a]` is not the maximal-identity map.
pub fn span_maximal_identity_failure(c: &FinCategory, g: &SpanGroupoid) -> Option<usize> {
    let ms = g.groupoid.maximal_identity_structure();
    let map = match ms.map {
        Some(m) if ms.every_component_has_maximal => m,
        _ => return Some(g.groupoid.identities()[0]),
    };
    g.groupoid.identities().iter().copied().find(|&k| {
        let a = g.pairs[k].0;
        map[k] != g.class(c.cod(a), c.cod(a))
    })
}

/// All `(p, q)` with `y·p = w·q`.
fn completions(c: &FinCategory, y: usize, w: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for &p in c.arrows_into(c.dom(y)) {
        for &q in c.arrows_into(c.dom(w)) {
            if c.dom(p) == c.dom(q) && c.comp(y, p) == c.comp(w, q) {
                out.push((p, q));
            }
        }
    }
    out
}

/// A pullback `(p, q)` of `y` and `w`: a completion through which every other
/// completion factors uniquely. The least such pair is returned.
pub fn pullback(c: &FinCategory, y: usize, w: usize) -> Option<(usize, usize)> {
    let all = completions(c, y, w);
    all.iter().copied().find(|&(p, q)| {
        all.iter().all(|&(p2, q2)| {
            c.arrows_into(c.dom(p))
                .iter()
                .filter(|&&t| c.dom(t) == c.dom(p2) && c.comp(p, t) == Some(p2) && c.comp(q, t) == Some(q2))
                .count()
                == 1
        })
    })
}

/// First pair where "pseudoproduct defined iff pullback exists, with value
/// `[x·p, z·q]`" fails.
pub fn pullback_criterion_failure(c: &FinCategory, g: &SpanGroupoid) -> Option<(usize, usize)> {
    let m = g.pairs.len();
    for s in 0..m {
        for t in 0..m {
            let ((x, y), (w, z)) = (g.pairs[s], g.pairs[t]);
            let ok = match (g.groupoid.pseudoproduct_fast(s, t), pullback(c, y, w)) {
                (None, None) => true,
                (Some(v), Some((p, q))) => g.class(c.mul(x, p), c.mul(z, q)) == Some(v),
                _ => false,
            };
            if !ok {
                return Some((s, t));
            }
        }
    }
    None
}

fn allowable_failure(c: &FinCategory, pair_ok: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
    for a in 0..c.len() {
        for &b in c.arrows_into(c.cod(a)) {
            if pair_ok(a, b) && !completions(c, a, b).is_empty() && pullback(c, a, b).is_none() {
                return Some((a, b));
            }
        }
    }
    None
}

/// Pair with a commuting square `a·a′ = b·b′` but no pullback.
pub fn allowable_pullback_failure(c: &FinCategory) -> Option<(usize, usize)> {
    allowable_failure(c, |_, _| true)
}

/// The same condition restricted to pairs whose common codomain is `root`.
pub fn allowable_pullback_failure_at(c: &FinCategory, root: usize) -> Option<(usize, usize)> {
    allowable_failure(c, |a, _| c.cod(a) == root)
}

/// Pair with a common codomain and no pullback.
pub fn pullback_failure(c: &FinCategory) -> Option<(usize, usize)> {
    for a in 0..c.len() {
        for &b in c.arrows_into(c.cod(a)) {
            if pullback(c, a, b).is_none() {
                return Some((a, b));
            }
        }
    }
    None
}

/// A category whose arrows are pairs of groupoid elements.
#[derive(Clone, Debug)]
pub struct PairCategory {
    pub category: FinCategory,
    pub pairs: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
}

impl PairCategory {
    pub fn arrow(&self, a: usize, b: usize) -> Option<usize> {
        self.index.get(&(a, b)).copied()
    }

    fn at(&self, a: usize, b: usize) -> Result<usize, CancellativeError> {
        self.arrow(a, b).ok_or_else(|| mismatch(format!("pair (#{a}, #{b}) is not an arrow")))
    }
}

fn pair_category(
    g: &OrdGroupoid,
    pairs: Vec<(usize, usize)>,
    dom: impl Fn(usize, usize) -> (usize, usize),
    cod: impl Fn(usize, usize) -> (usize, usize),
    compose: impl Fn((usize, usize), (usize, usize)) -> (usize, usize),
) -> Result<PairCategory, CancellativeError> {
    let cap = limits::conversion_cap();
    if pairs.len() > cap {
        return Err(CancellativeError::TooLarge(pairs.len(), cap));
    }
    let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let get = |p: (usize, usize)| index.get(&p).copied().unwrap_or(usize::MAX);
    let names = pairs.iter().map(|&(a, b)| format!("({},{})", g.name(a), g.name(b))).collect();
    let d = pairs.iter().map(|&(a, b)| get(dom(a, b))).collect();
    let r = pairs.iter().map(|&(a, b)| get(cod(a, b))).collect();
    let category = FinCategory::build(names, d, r, |x, y| get(compose(pairs[x], pairs[y])))?;
    Ok(PairCategory { category, pairs, index })
}

/// `L(G)`: arrows `(e, x)` with `cod x ≤ e`, `(e,x)(dom x, y) = (e, x⊗y)`.
pub fn l_of(g: &OrdGroupoid) -> Result<PairCategory, CancellativeError> {
    let pairs = g
        .identities()
        .iter()
        .flat_map(|&e| (0..g.len()).filter(move |&x| g.leq(g.cod(x), e)).map(move |x| (e, x)))
        .collect();
    pair_category(
        g,
        pairs,
        |_, x| (g.dom(x), g.dom(x)),
        |e, _| (e, e),
        |(e, x), (_, y)| (e, g.mul(g.restrict(x, g.cod(y)), y)),
    )
}

/// `R(G)`: arrows `(x, e)` with `dom x ≤ e`, `(x,e)(y,f) = (x⊗y, f)` when `e = cod y`.
pub fn r_of(g: &OrdGroupoid) -> Result<PairCategory, CancellativeError> {
    let mut pairs: Vec<(usize, usize)> = (0..g.len())
        .flat_map(|x| g.identities().iter().copied().filter(move |&e| g.leq(g.dom(x), e)).map(move |e| (x, e)))
        .collect();
    pairs.sort_unstable();
    pair_category(
        g,
        pairs,
        |_, e| (e, e),
        |x, _| (g.cod(x), g.cod(x)),
        |(x, _), (y, f)| (g.mul(x, g.corestrict(g.dom(x), y)), f),
    )
}

/// Checks `x ↦ (cod x, x)` is a bijection of `G` onto the invertible arrows of
/// `L(G)` preserving ends and composition; returns the map.
pub fn verify_l_invertibles(g: &OrdGroupoid, l: &PairCategory) -> Result<Vec<usize>, CancellativeError> {
    let map: Vec<usize> = (0..g.len()).map(|x| l.at(g.cod(x), x)).collect::<Result<_, _>>()?;
    let isos: BTreeSet<usize> = l.category.isos().collect();
    let image: BTreeSet<usize> = map.iter().copied().collect();
    if isos != image {
        return Err(mismatch("invertible arrows differ from the image of G"));
    }
    for x in 0..g.len() {
        let c = &l.category;
        if c.dom(map[x]) != map[g.dom(x)] || c.cod(map[x]) != map[g.cod(x)] || c.inverse(map[x]) != Some(map[g.inv(x)]) {
            return Err(mismatch(format!("invertible map fails at {}", g.name(x))));
        }
        for &y in g.arrows_into(g.dom(x)) {
            if c.comp(map[x], map[y]) != Some(map[g.mul(x, y)]) {
                return Err(mismatch(format!("invertible map fails on {}·{}", g.name(x), g.name(y))));
            }
        }
    }
    Ok(map)
}

/// Checks `(e, x) ↦ (x⁻¹, e)` is an isomorphism `L(G)^op → R(G)`; returns it.
pub fn verify_l_op_is_r(g: &OrdGroupoid, l: &PairCategory, r: &PairCategory) -> Result<Vec<usize>, CancellativeError> {
    let theta: Vec<usize> = l.pairs.iter().map(|&(e, x)| r.at(g.inv(x), e)).collect::<Result<_, _>>()?;
    if theta.iter().collect::<BTreeSet<_>>().len() != r.pairs.len() || theta.len() != r.pairs.len() {
        return Err(mismatch("θ is not a bijection"));
    }
    let lop = l.category.op();
    CategoryFunctor::new(&lop, &r.category, theta.clone())?;
    Ok(theta)
}

/// Outcome of comparing `C` with `L(G(C))` along `ι(a) = ([cod a, cod a], [a, dom a])`.
#[derive(Clone, Debug)]
pub struct LgRoundtrip {
    pub spans: SpanGroupoid,
    pub lg: PairCategory,
    pub iota: Vec<usize>,
    pub report: EquivalenceReport,
}

impl LgRoundtrip {
    pub fn holds(&self) -> bool {
        self.report.injective && self.report.is_equivalence()
    }
}

pub fn verify_lg_roundtrip(c: &FinCategory) -> Result<LgRoundtrip, CancellativeError> {
    let spans = g_of_left(c)?;
    let lg = l_of(&spans.groupoid)?;
    let iota = (0..c.len())
        .map(|a| lg.at(spans.at(c.cod(a), c.cod(a))?, spans.at(a, c.dom(a))?))
        .collect::<Result<Vec<_>, _>>()?;
    let f = CategoryFunctor::new(c, &lg.category, iota.clone())?;
    let report = f.equivalence_report();
    Ok(LgRoundtrip { spans, lg, iota, report })
}

/// `Ḡ`: triples `⟨e, x, f⟩` with `dom x ≤ f`, `cod x ≤ e`.
#[derive(Clone, Debug)]
pub struct BarGroupoid {
    pub groupoid: OrdGroupoid,
    pub triples: Vec<(usize, usize, usize)>,
    index: BTreeMap<(usize, usize, usize), usize>,
}

impl BarGroupoid {
    pub fn element(&self, e: usize, x: usize, f: usize) -> Option<usize> {
        self.index.get(&(e, x, f)).copied()
    }

    /// `κ⟨e, x, f⟩ = x`.
    pub fn kappa(&self) -> Vec<usize> {
        self.triples.iter().map(|t| t.1).collect()
    }
}

pub fn bar_groupoid(g: &OrdGroupoid) -> Result<BarGroupoid, CancellativeError> {
    let ids = g.identities();
    let mut triples = Vec::new();
    for &e in ids {
        for x in 0..g.len() {
            if g.leq(g.cod(x), e) {
                triples.extend(ids.iter().filter(|&&f| g.leq(g.dom(x), f)).map(|&f| (e, x, f)));
            }
        }
    }
    let cap = limits::conversion_cap();
    if triples.len() > cap {
        return Err(CancellativeError::TooLarge(triples.len(), cap));
    }
    let index: BTreeMap<(usize, usize, usize), usize> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let get = |t| index.get(&t).copied().unwrap_or(usize::MAX);
    let names = triples
        .iter()
        .map(|&(e, x, f)| format!("<{},{},{}>", g.name(e), g.name(x), g.name(f)))
        .collect();
    let dom = triples.iter().map(|&(_, x, f)| get((f, g.dom(x), f))).collect();
    let cod = triples.iter().map(|&(e, x, _)| get((e, g.cod(x), e))).collect();
    let inv = triples.iter().map(|&(e, x, f)| get((f, g.inv(x), e))).collect();
    let groupoid = OrdGroupoid::build(
        names,
        dom,
        cod,
        inv,
        |s, t| {
            let ((e, x, _), (_, y, j)) = (triples[s], triples[t]);
            get((e, g.mul(x, y), j))
        },
        |s, t| {
            let ((e, x, f), (e2, x2, f2)) = (triples[s], triples[t]);
            e == e2 && f == f2 && g.leq(x, x2)
        },
    )?;
    Ok(BarGroupoid { groupoid, triples, index })
}

/// Checks on `Ḡ` and its relation to `G` and `G(L(G))`.
#[derive(Clone, Debug)]
pub struct BarReport {
    pub bar: BarGroupoid,
    /// `⟨e,f,e⟩° = ⟨e,e,e⟩` and every component has a maximal identity.
    pub maximal_identities: bool,
    pub kappa_ordered: bool,
    /// `α⟨e,x,f⟩ = [(e,x),(f,dom x)]` is an ordered isomorphism onto `G(L(G))`.
    pub alpha: Option<Vec<usize>>,
    /// `π(g) = ⟨cod(g)°, g, dom(g)°⟩` embeds `G` with enlargement image; `None`
    /// when `G` lacks the maximal-identity hypothesis.
    pub enlargement: Option<bool>,
}

impl BarReport {
    pub fn holds(&self) -> bool {
        self.maximal_identities && self.kappa_ordered && self.alpha.is_some() && self.enlargement != Some(false)
    }
}

pub fn verify_bar(g: &OrdGroupoid) -> Result<BarReport, CancellativeError> {
    let bar = bar_groupoid(g)?;
    let b = &bar.groupoid;
    let ms = b.maximal_identity_structure();
    let maximal_identities = ms.every_component_has_maximal
        && ms.map.as_ref().is_some_and(|map| {
            b.identities().iter().all(|&i| {
                let (e, _, _) = bar.triples[i];
                map[i] == bar.element(e, e, e)
            })
        });
    let kappa_ordered = OrderedFunctor::new(b, g, bar.kappa())?.is_ordered();
    let l = l_of(g)?;
    let gl = g_of_left(&l.category)?;
    let alpha_map = bar
        .triples
        .iter()
        .map(|&(e, x, f)| gl.at(l.at(e, x)?, l.at(f, g.dom(x))?))
        .collect::<Result<Vec<_>, _>>()?;
    let alpha = {
        let af = OrderedFunctor::new(b, &gl.groupoid, alpha_map.clone())?;
        let fl = af.flags();
        (fl.ordered_embedding && fl.surjective).then_some(alpha_map)
    };
    let gms = g.maximal_identity_structure();
    let enlargement = match gms.map {
        Some(ref top) if gms.every_component_has_maximal => {
            let up = |e: usize| top[e].expect("identity has a maximal identity");
            let pi = (0..g.len())
                .map(|x| bar.element(up(g.cod(x)), x, up(g.dom(x))))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| mismatch("π leaves Ḡ"))?;
            let pf = OrderedFunctor::new(g, b, pi.clone())?;
            Some(pf.flags().ordered_embedding && b.enlargement_report(&pi)?.holds())
        }
        _ => None,
    };
    Ok(BarReport {
        bar,
        maximal_identities,
        kappa_ordered,
        alpha,
        enlargement,
    })
}

/// `G^l(C)`: spans `[a, b]` with `cod a = cod b = one`.
pub fn g_rooted(c: &FinCategory, one: usize) -> Result<SpanGroupoid, CancellativeError> {
    if one >= c.len() || !c.is_identity(one) {
        return Err(CategoryError::NotAnObject(one).into());
    }
    c.require_left_cancellative()?;
    if let Some(e) = c.weak_terminal_failure(one) {
        return Err(CategoryError::NotWeakTerminal(e).into());
    }
    let rooted = spans(c, |a, b| c.cod(a) == one && c.cod(b) == one)?;
    let top = rooted.at(one, one)?;
    if rooted.groupoid.maximum_identity() != Some(top) {
        return Err(mismatch("[1,1] is not the maximum identity"));
    }
    check_local_subgroupoid(c, one, &rooted)?;
    Ok(rooted)
}

/// `[a,b]` lies in `[1,1]⊗G(C)⊗[1,1]` iff `cod a = cod b = 1`, and that local
/// subgroupoid is `G^l(C)` with the same order.
fn check_local_subgroupoid(c: &FinCategory, one: usize, rooted: &SpanGroupoid) -> Result<(), CancellativeError> {
    let full = spans(c, |_, _| true)?;
    let top = full.at(one, one)?;
    let fg = &full.groupoid;
    let mut local = Vec::new();
    for (k, &(a, b)) in full.pairs.iter().enumerate() {
        let inside = fg.leq(fg.cod(k), top) && fg.leq(fg.dom(k), top);
        if inside != (c.cod(a) == one && c.cod(b) == one) {
            return Err(mismatch(format!("local criterion fails at {}", fg.name(k))));
        }
        if inside {
            local.push(k);
        }
    }
    let expected: Vec<(usize, usize)> = local.iter().map(|&k| full.pairs[k]).collect();
    if expected != rooted.pairs {
        return Err(mismatch("local subgroupoid and rooted spans differ"));
    }
    for (i, &k) in local.iter().enumerate() {
        for (j, &l) in local.iter().enumerate() {
            if fg.leq(k, l) != rooted.groupoid.leq(i, j) {
                return Err(mismatch("local subgroupoid order differs"));
            }
        }
    }
    Ok(())
}

/// `L(G)` is left rooted at `(1,1)` and `x ↦ [(1,x),(1,dom x)]` is an
/// isomorphism `G → G^l(L(G))`.
#[derive(Clone, Debug)]
pub struct RootedGroupoidReport {
    pub weak_terminal: bool,
    pub left_cancellative: bool,
    pub isomorphism: Option<Vec<usize>>,
}

impl RootedGroupoidReport {
    pub fn holds(&self) -> bool {
        self.weak_terminal && self.left_cancellative && self.isomorphism.is_some()
    }
}

pub fn verify_rooted_groupoid(g: &OrdGroupoid) -> Result<RootedGroupoidReport, CancellativeError> {
    let one = g.maximum_identity().ok_or(CancellativeError::NoMaximumIdentity)?;
    let l = l_of(g)?;
    let root = l.at(one, one)?;
    let weak_terminal = l.category.weak_terminal_failure(root).is_none();
    let left_cancellative = l.category.is_left_cancellative();
    if !(weak_terminal && left_cancellative) {
        return Ok(RootedGroupoidReport {
            weak_terminal,
            left_cancellative,
            isomorphism: None,
        });
    }
    let gl = g_rooted(&l.category, root)?;
    let map = (0..g.len())
        .map(|x| gl.at(l.at(one, x)?, l.at(one, g.dom(x))?))
        .collect::<Result<Vec<_>, _>>()?;
    let f = OrderedFunctor::new(g, &gl.groupoid, map.clone())?;
    let fl = f.flags();
    Ok(RootedGroupoidReport {
        weak_terminal,
        left_cancellative,
        isomorphism: (fl.ordered_embedding && fl.surjective).then_some(map),
    })
}

/// `G^l(C)` has a maximum identity, `θ(a) = ([c_f,c_f],[c_f·a, c_e])` is an
/// equivalence `C → L(G^l(C))`, and the pullback hypotheses yield inverse monoids.
#[derive(Clone, Debug)]
pub struct RootedCategoryReport {
    pub rooted: SpanGroupoid,
    pub theta: Vec<usize>,
    pub equivalence: EquivalenceReport,
    pub root_preserved: bool,
    pub allowable_pullbacks: bool,
    /// Same condition checked only on pairs into the root.
    pub allowable_pullbacks_at_root: bool,
    pub all_pullbacks: bool,
    pub star_inductive: bool,
    pub inductive: bool,
    pub monoid_with_zero: bool,
    pub monoid: bool,
}

impl RootedCategoryReport {
    pub fn holds(&self) -> bool {
        self.equivalence.is_equivalence()
            && self.root_preserved
            && (!self.allowable_pullbacks || (self.star_inductive && self.monoid_with_zero))
            && (!self.all_pullbacks || (self.inductive && self.monoid))
    }
}

pub fn verify_rooted_category(c: &FinCategory, one: usize) -> Result<RootedCategoryReport, CancellativeError> {
    let rooted = g_rooted(c, one)?;
    let l = l_of(&rooted.groupoid)?;
    let chosen: BTreeMap<usize, usize> = c
        .identities()
        .iter()
        .map(|&e| (e, if e == one { one } else { c.hom(e, one).next().expect("weak terminal") }))
        .collect();
    let theta = (0..c.len())
        .map(|a| {
            let (ce, cf) = (chosen[&c.dom(a)], chosen[&c.cod(a)]);
            l.at(rooted.at(cf, cf)?, rooted.at(c.mul(cf, a), ce)?)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let f = CategoryFunctor::new(c, &l.category, theta.clone())?;
    let equivalence = f.equivalence_report();
    let top = rooted.at(one, one)?;
    let root_preserved = Some(theta[one]) == l.arrow(top, top);
    let g = &rooted.groupoid;
    Ok(RootedCategoryReport {
        theta,
        equivalence,
        root_preserved,
        allowable_pullbacks: allowable_pullback_failure(c).is_none(),
        allowable_pullbacks_at_root: allowable_pullback_failure_at(c, one).is_none(),
        all_pullbacks: pullback_failure(c).is_none(),
        star_inductive: g.is_star_inductive(),
        inductive: g.is_inductive(),
        monoid_with_zero: esn::semigroup_of_with_zero(g).is_ok(),
        monoid: esn::semigroup_of(g).is_ok(),
        rooted,
    })
}

/// Right cancellativity of `L(G(S))` against E-unitarity of `S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EUnitaryReport {
    pub e_unitary: bool,
    pub left_cancellative: bool,
    pub right_cancellative: bool,
    /// `(y, z, x)` with `y·x = z·x`, `y ≠ z` in `L(G(S))`.
    pub right_failure: Option<(usize, usize, usize)>,
    /// `(s, e)` with `e ≤ s`, `e` idempotent and `s` not.
    pub unitary_failure: Option<(usize, usize)>,
    /// `((1,s), (1,s⁻¹s), (s⁻¹s,e))` for that `(s, e)`: a concrete failure of
    /// right cancellation.
    pub canonical_witness: Option<(usize, usize, usize)>,
}

impl EUnitaryReport {
    pub fn agree(&self) -> bool {
        self.e_unitary == self.right_cancellative
            && self.left_cancellative
            && self.canonical_witness.is_some() == self.unitary_failure.is_some()
    }
}

pub fn e_unitary_iff_cancellative(s: &InvSemigroup) -> Result<EUnitaryReport, CancellativeError> {
    let one = s.identity().ok_or(CancellativeError::NotAMonoid)?;
    let g = esn::groupoid_of(s)?;
    let l = l_of(&g)?;
    let c = &l.category;
    let unitary_failure = s.e_unitary_violation().map(|(e, x)| (x, e));
    let canonical_witness = match unitary_failure {
        Some((x, e)) => {
            let (y, z, w) = (l.at(one, x)?, l.at(one, s.dom(x))?, l.at(s.dom(x), e)?);
            (y != z && c.comp(y, w).is_some() && c.comp(y, w) == c.comp(z, w)).then_some((y, z, w))
        }
        None => None,
    };
    Ok(EUnitaryReport {
        e_unitary: unitary_failure.is_none(),
        left_cancellative: c.is_left_cancellative(),
        right_cancellative: c.is_right_cancellative(),
        right_failure: c.right_cancellation_failure().map(|(x, y, z)| (y, z, x)),
        unitary_failure,
        canonical_witness,
    })
}

/// The local monoid `{s : s⁻¹s = e, ss⁻¹ ≤ e}` of a 0-bisimple inverse semigroup.
#[derive(Clone, Debug)]
pub struct BisimpleData {
    /// The identity of `S`, or its least maximal nonzero idempotent.
    pub base: usize,
    pub elements: Vec<usize>,
    pub monoid: FinCategory,
    pub left_cancellative: bool,
    /// `(a, b)` whose principal right ideals meet in a non-principal set.
    pub ideal_failure: Option<(usize, usize)>,
}

impl BisimpleData {
    pub fn holds(&self) -> bool {
        self.left_cancellative && self.ideal_failure.is_none()
    }
}

/// `None` when the nonzero elements are not all D-related.
pub fn bisimple_monoid_data(s: &InvSemigroup) -> Result<Option<BisimpleData>, CancellativeError> {
    let zero = s.zero().or_else(|| s.find_zero()).filter(|_| s.len() > 1);
    let (g, keep) = match zero {
        Some(_) => esn::groupoid_of_nonzero(s)?,
        None => (esn::groupoid_of(s)?, (0..s.len()).collect()),
    };
    if g.component_count() != 1 {
        return Ok(None);
    }
    let nonzero_idem: Vec<usize> = keep.iter().copied().filter(|&x| s.is_idempotent(x)).collect();
    let base = match s.identity() {
        Some(one) => one,
        None => *nonzero_idem
            .iter()
            .find(|&&e| !nonzero_idem.iter().any(|&f| f != e && s.leq(e, f)))
            .expect("nonzero idempotent"),
    };
    let elements: Vec<usize> = keep
        .iter()
        .copied()
        .filter(|&x| s.dom(x) == base && s.leq(s.ran(x), base))
        .collect();
    let pos: BTreeMap<usize, usize> = elements.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let k = elements.len();
    let mut table = Vec::with_capacity(k * k);
    for &a in &elements {
        for &b in &elements {
            let p = *pos.get(&s.mul(a, b)).ok_or_else(|| mismatch("local monoid not closed"))?;
            table.push(p);
        }
    }
    let names = elements.iter().map(|&x| s.name(x).to_string()).collect();
    let monoid = FinCategory::from_monoid_table(names, &table, pos[&base])?;
    let ideal = |a: usize| -> BTreeSet<usize> { (0..k).map(|t| table[a * k + t]).collect() };
    let ideals: Vec<BTreeSet<usize>> = (0..k).map(ideal).collect();
    let mut ideal_failure = None;
    'scan: for a in 0..k {
        for b in a..k {
            let meet: BTreeSet<usize> = ideals[a].intersection(&ideals[b]).copied().collect();
            if !meet.is_empty() && !ideals.iter().any(|i| *i == meet) {
                ideal_failure = Some((elements[a], elements[b]));
                break 'scan;
            }
        }
    }
    Ok(Some(BisimpleData {
        base,
        left_cancellative: monoid.is_left_cancellative(),
        monoid,
        elements,
        ideal_failure,
    }))
}
