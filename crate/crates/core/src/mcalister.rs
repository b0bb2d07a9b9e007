//! Groups acting on posets: semidirect product groupoids, McAlister triples
//! and P-semigroups, and the maximum group image of an inverse semigroup.

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::esn::{self, EsnError};
use crate::groupoid::{GroupoidError, OrdGroupoid, OrderedFunctor};
use crate::iso;
use crate::semigroup::{self, InvSemigroup, SemigroupError};
use crate::util::{meet_in, BoolMatrix, Meet, OrderViolation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum McAlisterError {
    #[error("acting structure is not a group")]
    NotAGroup,
    #[error("poset order: {0}")]
    Order(OrderViolation),
    #[error("action table has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    ActionShape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("action entry {0} is out of range")]
    ActionOutOfRange(usize),
    #[error("identity moves point #{0}")]
    IdentityMoves(usize),
    #[error("(g#{0} h#{1})·x#{2} differs from g·(h·x)")]
    NotAnAction(usize, usize, usize),
    #[error("g#{0} is not an order automorphism at (x#{1}, x#{2})")]
    NotOrderAutomorphism(usize, usize, usize),
    #[error("MT1 fails: Y is not an order ideal (x#{below} <= y#{inside})")]
    Mt1NotIdeal { below: usize, inside: usize },
    #[error("MT1 fails: y#{0} and y#{1} have no meet in Y")]
    Mt1NoMeet(usize, usize),
    #[error("MT2 fails: x#{0} is not in G·Y")]
    Mt2(usize),
    #[error("MT3 fails: g#{0}·Y misses Y")]
    Mt3(usize),
    #[error("Y entry {0} is out of range")]
    SubsetOutOfRange(usize),
    #[error("meet of x#{0} and x#{1} is missing in X")]
    MeetMissing(usize, usize),
    #[error("product of elements #{0} and #{1} leaves the carrier")]
    NotClosed(usize, usize),
    #[error("P-semigroup is not E-unitary")]
    NotEUnitary,
    #[error("functor target has more than one identity")]
    TargetNotGroup,
    #[error("functor is not an ordered covering functor onto its target")]
    NotCovering,
    #[error("constructed map is not an isomorphism: {0}")]
    NotAnIsomorphism(String),
    #[error("embedding data: {0}")]
    MalformedEmbedding(String),
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error(transparent)]
    Esn(#[from] EsnError),
    #[error(transparent)]
    Iso(#[from] iso::IsoError),
}

/// A finite group acting on a finite poset by order automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupPosetAction {
    group: InvSemigroup,
    identity: usize,
    points: Vec<String>,
    leq: BoolMatrix,
    /// `act[g * |X| + x] = g·x`.
    act: Vec<usize>,
}

impl GroupPosetAction {
    pub fn new(
        group: InvSemigroup,
        points: Vec<String>,
        leq: BoolMatrix,
        action: &[Vec<usize>],
    ) -> Result<GroupPosetAction, McAlisterError> {
        if !group.is_group() {
            return Err(McAlisterError::NotAGroup);
        }
        let identity = group.identity().ok_or(McAlisterError::NotAGroup)?;
        let (m, k) = (group.len(), points.len());
        if leq.size() != k {
            return Err(McAlisterError::ActionShape {
                rows: leq.size(),
                cols: leq.size(),
                expected_rows: k,
                expected_cols: k,
            });
        }
        if let Some(v) = leq.partial_order_violation() {
            return Err(McAlisterError::Order(v));
        }
        let cols = action.iter().map(Vec::len).find(|&l| l != k).unwrap_or(k);
        if action.len() != m || cols != k {
            return Err(McAlisterError::ActionShape {
                rows: action.len(),
                cols,
                expected_rows: m,
                expected_cols: k,
            });
        }
        let act: Vec<usize> = action.iter().flatten().copied().collect();
        if let Some(&v) = act.iter().find(|&&v| v >= k) {
            return Err(McAlisterError::ActionOutOfRange(v));
        }
        let a = GroupPosetAction {
            group,
            identity,
            points,
            leq,
            act,
        };
        a.check()?;
        Ok(a)
    }

    fn check(&self) -> Result<(), McAlisterError> {
        let (m, k) = (self.group.len(), self.points.len());
        if let Some(x) = (0..k).find(|&x| self.apply(self.identity, x) != x) {
            return Err(McAlisterError::IdentityMoves(x));
        }
        for g in 0..m {
            for h in 0..m {
                let gh = self.group.mul(g, h);
                if let Some(x) = (0..k).find(|&x| self.apply(gh, x) != self.apply(g, self.apply(h, x))) {
                    return Err(McAlisterError::NotAnAction(g, h, x));
                }
            }
            for x in 0..k {
                for y in 0..k {
                    if self.leq.get(x, y) != self.leq.get(self.apply(g, x), self.apply(g, y)) {
                        return Err(McAlisterError::NotOrderAutomorphism(g, x, y));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &InvSemigroup {
        &self.group
    }

    pub fn group_identity(&self) -> usize {
        self.identity
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn order(&self) -> &BoolMatrix {
        &self.leq
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    /// `g·x`.
    #[inline]
    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.act[g * self.points.len() + x]
    }

    pub fn action_rows(&self) -> Vec<Vec<usize>> {
        self.act.chunks(self.points.len()).map(<[usize]>::to_vec).collect()
    }

    /// Index of `(x, g)` in the semidirect product.
    #[inline]
    pub fn pair_index(&self, x: usize, g: usize) -> usize {
        x * self.group.len() + g
    }

    /// `(x, g)` for an index of the semidirect product.
    #[inline]
    pub fn pair_of(&self, i: usize) -> (usize, usize) {
        (i / self.group.len(), i % self.group.len())
    }
}

/// `P(G, X)`: carrier `X × G`, `(x,g)(y,h) = (x,gh)` iff `x = g·y`,
/// `(x,g) ≤ (y,h)` iff `x ≤ y` and `g = h`.
pub fn semidirect_groupoid(a: &GroupPosetAction) -> Result<OrdGroupoid, McAlisterError> {
    let (k, m) = (a.point_count(), a.group.len());
    let one = a.identity;
    let mut names = Vec::with_capacity(k * m);
    let (mut dom, mut cod, mut inv) = (Vec::new(), Vec::new(), Vec::new());
    for x in 0..k {
        for g in 0..m {
            let gi = a.group.inv(g);
            names.push(format!("({},{})", a.points[x], a.group.name(g)));
            dom.push(a.pair_index(a.apply(gi, x), one));
            cod.push(a.pair_index(x, one));
            inv.push(a.pair_index(a.apply(gi, x), gi));
        }
    }
    Ok(OrdGroupoid::build(
        names,
        dom,
        cod,
        inv,
        |p, q| {
            let ((x, g), (_, h)) = (a.pair_of(p), a.pair_of(q));
            a.pair_index(x, a.group.mul(g, h))
        },
        |p, q| {
            let ((x, g), (y, h)) = (a.pair_of(p), a.pair_of(q));
            g == h && a.leq.get(x, y)
        },
    )?)
}

/// The second projection `P(G, X) → G` as a map of indices.
pub fn projection_map(a: &GroupPosetAction) -> Vec<usize> {
    (0..a.point_count() * a.group.len()).map(|i| a.pair_of(i).1).collect()
}

/// Result of recognizing a semidirect product from a covering functor.
#[derive(Clone, Debug)]
pub struct SemidirectRecognition {
    pub action: GroupPosetAction,
    pub semidirect: OrdGroupoid,
    /// `theta[x]` is the image of `x` in `semidirect`.
    pub theta: Vec<usize>,
}

/// From an ordered covering functor onto a group, extracts the action on the
/// identities of the source and the isomorphism onto `P(G, X)`.
pub fn covering_to_semidirect(f: &OrderedFunctor<'_>) -> Result<SemidirectRecognition, McAlisterError> {
    let (src, tgt) = (f.source, f.target);
    if tgt.identities().len() != 1 {
        return Err(McAlisterError::TargetNotGroup);
    }
    let flags = f.flags();
    if !(flags.ordered && flags.covering && flags.surjective) {
        return Err(McAlisterError::NotCovering);
    }
    let group = esn::semigroup_of(tgt)?;
    let ids = src.identities().to_vec();
    let mut pos = vec![usize::MAX; src.len()];
    for (i, &e) in ids.iter().enumerate() {
        pos[e] = i;
    }
    let points: Vec<String> = ids.iter().map(|&e| src.name(e).to_string()).collect();
    let leq = BoolMatrix::from_fn(ids.len(), |i, j| src.leq(ids[i], ids[j]));
    let mut rows = vec![vec![usize::MAX; ids.len()]; group.len()];
    for x in 0..src.len() {
        rows[f.apply(x)][pos[src.dom(x)]] = pos[src.cod(x)];
    }
    let action = GroupPosetAction::new(group, points, leq, &rows)?;
    let semidirect = semidirect_groupoid(&action)?;
    let theta: Vec<usize> = (0..src.len())
        .map(|x| action.pair_index(pos[src.cod(x)], f.apply(x)))
        .collect();
    check_isomorphism(src, &semidirect, &theta)?;
    Ok(SemidirectRecognition {
        action,
        semidirect,
        theta,
    })
}

fn check_isomorphism(a: &OrdGroupoid, b: &OrdGroupoid, map: &[usize]) -> Result<(), McAlisterError> {
    let func = OrderedFunctor::new(a, b, map.to_vec())?;
    let flags = func.flags();
    if !(flags.ordered_embedding && flags.surjective) {
        return Err(McAlisterError::NotAnIsomorphism(format!("{flags:?}")));
    }
    Ok(())
}

/// A validated McAlister triple `(G, X, Y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McAlisterTriple {
    pub base: GroupPosetAction,
    y: Vec<usize>,
    in_y: Vec<bool>,
}

/// Checks MT1 (order ideal and meet semilattice), MT2 and MT3.
pub fn validate_mcalister_triple(base: GroupPosetAction, y: Vec<usize>) -> Result<McAlisterTriple, McAlisterError> {
    let k = base.point_count();
    let mut in_y = vec![false; k];
    for &p in &y {
        if p >= k {
            return Err(McAlisterError::SubsetOutOfRange(p));
        }
        in_y[p] = true;
    }
    let mut y: Vec<usize> = (0..k).filter(|&p| in_y[p]).collect();
    y.dedup();
    for &inside in &y {
        if let Some(below) = base.leq.predecessors(inside).find(|&b| !in_y[b]) {
            return Err(McAlisterError::Mt1NotIdeal { below, inside });
        }
    }
    for (i, &a) in y.iter().enumerate() {
        for &b in &y[i..] {
            if meet_in(&base.leq, &y, a, b).value().is_none() {
                return Err(McAlisterError::Mt1NoMeet(a, b));
            }
        }
    }
    for x in 0..k {
        if !(0..base.group.len()).any(|g| y.iter().any(|&p| base.apply(g, p) == x)) {
            return Err(McAlisterError::Mt2(x));
        }
    }
    for g in 0..base.group.len() {
        if !y.iter().any(|&p| in_y[base.apply(g, p)]) {
            return Err(McAlisterError::Mt3(g));
        }
    }
    Ok(McAlisterTriple { base, y, in_y })
}

impl McAlisterTriple {
    pub fn y(&self) -> &[usize] {
        &self.y
    }

    pub fn contains(&self, x: usize) -> bool {
        self.in_y[x]
    }

    /// Elements `(y, g)` of the P-semigroup, in carrier order.
    pub fn p_carrier(&self) -> Vec<(usize, usize)> {
        let g = &self.base.group;
        self.y
            .iter()
            .flat_map(|&p| (0..g.len()).map(move |h| (p, h)))
            .filter(|&(p, h)| self.in_y[self.base.apply(g.inv(h), p)])
            .collect()
    }
}

/// `P(G, X, Y)` with `(e,g)(f,h) = (e ∧ g·f, gh)`.
pub fn p_semigroup(t: &McAlisterTriple) -> Result<InvSemigroup, McAlisterError> {
    let a = &t.base;
    let carrier = t.p_carrier();
    let index: BTreeMap<(usize, usize), usize> =
        carrier.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let all: Vec<usize> = (0..a.point_count()).collect();
    let n = carrier.len();
    let mut table = Vec::with_capacity(n * n);
    for (i, &(e, g)) in carrier.iter().enumerate() {
        for (j, &(f, h)) in carrier.iter().enumerate() {
            let gf = a.apply(g, f);
            let m = match meet_in(&a.leq, &all, e, gf) {
                Meet::Exists(m) => m,
                _ => return Err(McAlisterError::MeetMissing(e, gf)),
            };
            let p = index
                .get(&(m, a.group.mul(g, h)))
                .ok_or(McAlisterError::NotClosed(i, j))?;
            table.push(*p);
        }
    }
    let names = carrier
        .iter()
        .map(|&(p, g)| format!("({},{})", a.points[p], a.group.name(g)))
        .collect();
    let s = semigroup::from_flat_table(names, table, None)?;
    if !s.is_e_unitary() {
        return Err(McAlisterError::NotEUnitary);
    }
    Ok(s)
}

/// Checks on `P(G, X, Y)`: E-unitarity, idempotents against `Y`, the maximum
/// group image against `G`, and the embedding into `P(G, X)`.
#[derive(Clone, Debug)]
pub struct PSemigroupReport {
    pub semigroup: InvSemigroup,
    pub e_unitary: bool,
    /// Order isomorphism from the idempotents (ascending) onto `Y`.
    pub idempotents_match_y: Option<Vec<usize>>,
    /// Isomorphism from the maximum group image onto `G`.
    pub group_image: Option<Vec<usize>>,
    pub embedding: EmbeddingReport,
}

impl PSemigroupReport {
    pub fn holds(&self) -> bool {
        self.e_unitary
            && self.idempotents_match_y.is_some()
            && self.group_image.is_some()
            && self.embedding.verdict == EmbeddingVerdict::WitnessFound
    }
}

pub fn verify_p_semigroup(t: &McAlisterTriple) -> Result<PSemigroupReport, McAlisterError> {
    let (s, iota) = canonical_embedding(t)?;
    let idem: Vec<usize> = s.idempotents().collect();
    let y = t.y();
    let idempotents_match_y = if idem.len() == y.len() {
        let a = iso::Signature::new(idem.len()).with_relation(BoolMatrix::from_fn(idem.len(), |i, j| s.leq(idem[i], idem[j])));
        let b = iso::Signature::new(y.len()).with_relation(BoolMatrix::from_fn(y.len(), |i, j| t.base.leq.get(y[i], y[j])));
        iso::find_isomorphism(&a, &b)?
    } else {
        None
    };
    let img = max_group_image(&s)?;
    let group_image = semigroup::find_isomorphism(&img.group, &t.base.group)?;
    let embedding = verify_semidirect_embedding(&s, &t.base, &iota)?;
    Ok(PSemigroupReport {
        e_unitary: s.is_e_unitary(),
        semigroup: s,
        idempotents_match_y,
        group_image,
        embedding,
    })
}

/// The maximum group image `S/σ` where `s σ t` iff some `u ≤ s, t`.
#[derive(Clone, Debug)]
pub struct MaxGroupImage {
    pub group: InvSemigroup,
    /// Class of each element of `S`.
    pub sigma: Vec<usize>,
}

pub fn max_group_image(s: &InvSemigroup) -> Result<MaxGroupImage, McAlisterError> {
    let n = s.len();
    let mut uf = UnionFind::<usize>::new(n);
    for u in 0..n {
        let above: Vec<usize> = s.natural_partial_order().successors(u).collect();
        for w in above.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut class_of_root = BTreeMap::new();
    let mut reps = Vec::new();
    let mut sigma = vec![0; n];
    for x in 0..n {
        let r = uf.find(x);
        let c = *class_of_root.entry(r).or_insert_with(|| {
            reps.push(x);
            reps.len() - 1
        });
        sigma[x] = c;
    }
    let k = reps.len();
    let table: Vec<usize> = (0..k * k).map(|i| sigma[s.mul(reps[i / k], reps[i % k])]).collect();
    for x in 0..n {
        for y in 0..n {
            if sigma[s.mul(x, y)] != table[sigma[x] * k + sigma[y]] {
                return Err(McAlisterError::NotAnIsomorphism(format!(
                    "σ is not a congruence at (#{x}, #{y})"
                )));
            }
        }
    }
    let names = reps.iter().map(|&r| format!("[{}]", s.name(r))).collect();
    let group = semigroup::from_flat_table(names, table, None)?;
    if !group.is_group() {
        return Err(McAlisterError::NotAGroup);
    }
    Ok(MaxGroupImage { group, sigma })
}

impl MaxGroupImage {
    /// σ is injective on each set `{s : s⁻¹s = e}`.
    pub fn is_star_injective(&self, s: &InvSemigroup) -> bool {
        s.idempotents().all(|e| {
            let mut seen = std::collections::BTreeSet::new();
            (0..s.len())
                .filter(|&x| s.dom(x) == e)
                .all(|x| seen.insert(self.sigma[x]))
        })
    }
}

/// Verdict of an embedding check. Absence of a witness never refutes E-unitarity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmbeddingVerdict {
    WitnessFound,
    NoWitnessFound,
}

/// Conjuncts of "`G(S)` embeds in `P(G,X)` as an enlargement with `π₂` onto `G`".
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub is_functor: bool,
    pub ordered_embedding: bool,
    pub enlargement: bool,
    pub projection_onto_group: bool,
    pub e_unitary: bool,
    pub verdict: EmbeddingVerdict,
}

impl EmbeddingReport {
    /// A found witness must come with E-unitarity.
    pub fn consistent(&self) -> bool {
        self.verdict == EmbeddingVerdict::NoWitnessFound || self.e_unitary
    }
}

/// Checks the candidate `iota: S → P(G, X)` against the embedding conditions.
pub fn verify_semidirect_embedding(
    s: &InvSemigroup,
    a: &GroupPosetAction,
    iota: &[usize],
) -> Result<EmbeddingReport, McAlisterError> {
    let p = semidirect_groupoid(a)?;
    if iota.len() != s.len() {
        return Err(McAlisterError::MalformedEmbedding(format!(
            "map has {} entries, semigroup has {}",
            iota.len(),
            s.len()
        )));
    }
    if let Some(&v) = iota.iter().find(|&&v| v >= p.len()) {
        return Err(McAlisterError::MalformedEmbedding(format!("target #{v} out of range")));
    }
    let gs = esn::groupoid_of(s)?;
    let e_unitary = s.is_e_unitary();
    let func = OrderedFunctor::new(&gs, &p, iota.to_vec());
    let (is_functor, ordered_embedding, enlargement, onto) = match func {
        Err(_) => (false, false, false, false),
        Ok(f) => {
            let flags = f.flags();
            let enlargement = flags.ordered_embedding
                && p.enlargement_report(iota).map(|r| r.holds()).unwrap_or(false);
            let hit: std::collections::BTreeSet<usize> =
                iota.iter().map(|&i| a.pair_of(i).1).collect();
            (true, flags.ordered_embedding, enlargement, hit.len() == a.group.len())
        }
    };
    let verdict = if ordered_embedding && enlargement && onto {
        EmbeddingVerdict::WitnessFound
    } else {
        EmbeddingVerdict::NoWitnessFound
    };
    Ok(EmbeddingReport {
        is_functor,
        ordered_embedding,
        enlargement,
        projection_onto_group: onto,
        e_unitary,
        verdict,
    })
}

/// The P-semigroup of a triple with its inclusion into `P(G, X)`.
pub fn canonical_embedding(t: &McAlisterTriple) -> Result<(InvSemigroup, Vec<usize>), McAlisterError> {
    let s = p_semigroup(t)?;
    let iota = t
        .p_carrier()
        .into_iter()
        .map(|(y, g)| t.base.pair_index(y, g))
        .collect();
    Ok((s, iota))
}

/// Outcome of the heuristic triple construction for an E-unitary semigroup.
#[derive(Clone, Debug)]
pub struct TripleSearch {
    pub triple: Option<McAlisterTriple>,
    /// Isomorphism from `S` onto the P-semigroup, when one was found.
    pub isomorphism: Option<Vec<usize>>,
    pub note: String,
}

impl TripleSearch {
    pub fn verdict(&self) -> EmbeddingVerdict {
        if self.isomorphism.is_some() {
            EmbeddingVerdict::WitnessFound
        } else {
            EmbeddingVerdict::NoWitnessFound
        }
    }
}

/// Heuristic: builds `X = (G × E)/~` from the maximum group image `G` and
/// idempotents `E`, with `Y` the classes of `(1, e)`, and looks for an
/// isomorphism `S ≅ P(G, X, Y)`.
pub fn search_triple(s: &InvSemigroup) -> Result<TripleSearch, McAlisterError> {
    let no = |note: String| TripleSearch {
        triple: None,
        isomorphism: None,
        note,
    };
    if !s.is_e_unitary() {
        return Ok(no("semigroup is not E-unitary".into()));
    }
    let img = max_group_image(s)?;
    let g = &img.group;
    let one = g.identity().expect("group");
    let idem: Vec<usize> = s.idempotents().collect();
    let ne = idem.len();
    let pairs: Vec<(usize, usize)> = (0..g.len()).flat_map(|h| idem.iter().map(move |&e| (h, e))).collect();
    let pair_ix = |h: usize, e: usize| h * ne + idem.iter().position(|&f| f == e).expect("idempotent");
    // s links (h, e) to (k, f) when σ(s) = h⁻¹k, ss⁻¹ = e, s⁻¹s = f.
    let mut uf = UnionFind::<usize>::new(pairs.len());
    for x in 0..s.len() {
        for h in 0..g.len() {
            let k = g.mul(h, img.sigma[x]);
            uf.union(pair_ix(h, s.ran(x)), pair_ix(k, s.dom(x)));
        }
    }
    let mut class = vec![usize::MAX; pairs.len()];
    let mut reps = Vec::new();
    let mut root_class = BTreeMap::new();
    for i in 0..pairs.len() {
        let r = uf.find(i);
        class[i] = *root_class.entry(r).or_insert_with(|| {
            reps.push(i);
            reps.len() - 1
        });
    }
    let k = reps.len();
    let mut leq = BoolMatrix::new(k);
    for x in 0..s.len() {
        for h in 0..g.len() {
            let hk = g.mul(h, img.sigma[x]);
            for &f in &idem {
                if s.leq(s.dom(x), f) {
                    leq.set(class[pair_ix(h, s.ran(x))], class[pair_ix(hk, f)], true);
                }
            }
        }
    }
    let leq = leq.closure();
    let points = reps
        .iter()
        .map(|&i| format!("[{},{}]", g.name(pairs[i].0), s.name(pairs[i].1)))
        .collect();
    let rows: Vec<Vec<usize>> = (0..g.len())
        .map(|h| (0..k).map(|c| {
            let (h0, e) = pairs[reps[c]];
            class[pair_ix(g.mul(h, h0), e)]
        }).collect())
        .collect();
    let base = match GroupPosetAction::new(g.clone(), points, leq, &rows) {
        Ok(b) => b,
        Err(e) => return Ok(no(format!("candidate action rejected: {e}"))),
    };
    let y: Vec<usize> = idem.iter().map(|&e| class[pair_ix(one, e)]).collect();
    let triple = match validate_mcalister_triple(base, y) {
        Ok(t) => t,
        Err(e) => return Ok(no(format!("candidate triple rejected: {e}"))),
    };
    let p = p_semigroup(&triple)?;
    let carrier = triple.p_carrier();
    let direct: Option<Vec<usize>> = (0..s.len())
        .map(|x| {
            let y = class[pair_ix(one, s.ran(x))];
            carrier.iter().position(|&c| c == (y, img.sigma[x]))
        })
        .collect();
    let isomorphism = match direct {
        Some(m) if iso::is_isomorphism(&s.signature(), &p.signature(), &m) => Some(m),
        _ => semigroup::find_isomorphism(s, &p)?,
    };
    let note = if isomorphism.is_some() {
        "isomorphism to the P-semigroup found".to_string()
    } else {
        "no witness found".to_string()
    };
    Ok(TripleSearch {
        triple: Some(triple),
        isomorphism,
        note,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{chain_semilattice, cyclic_group, symmetric_inverse_monoid};

    /// Z₂ swapping A and B above C.
    pub(crate) fn z2_on_vee() -> GroupPosetAction {
        let mut leq = BoolMatrix::identity(3);
        leq.set(2, 0, true);
        leq.set(2, 1, true);
        GroupPosetAction::new(
            cyclic_group(2),
            vec!["A".into(), "B".into(), "C".into()],
            leq,
            &[vec![0, 1, 2], vec![1, 0, 2]],
        )
        .unwrap()
    }

    #[test]
    fn vee_triple_report() {
        let t = validate_mcalister_triple(z2_on_vee(), vec![0, 2]).unwrap();
        let r = verify_p_semigroup(&t).unwrap();
        assert!(r.holds());
        assert_eq!(r.semigroup.len(), 3);
        assert_eq!(r.idempotents_match_y.as_ref().map(Vec::len), Some(2));
    }

    #[test]
    fn trivial_group_gives_the_poset() {
        let mut leq = BoolMatrix::identity(2);
        leq.set(0, 1, true);
        let a = GroupPosetAction::new(cyclic_group(1), vec!["p".into(), "q".into()], leq, &[vec![0, 1]]).unwrap();
        let p = semidirect_groupoid(&a).unwrap();
        assert_eq!(p.identities().len(), 2);
        assert!(p.leq(0, 1));
    }

    #[test]
    fn point_gives_the_group() {
        let a = GroupPosetAction::new(cyclic_group(3), vec!["*".into()], BoolMatrix::identity(1), &[vec![0], vec![0], vec![0]]).unwrap();
        let p = semidirect_groupoid(&a).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.identities().len(), 1);
    }

    #[test]
    fn z2_on_antichain_has_two_components() {
        let a = GroupPosetAction::new(
            cyclic_group(2),
            vec!["a".into(), "b".into()],
            BoolMatrix::identity(2),
            &[vec![0, 1], vec![1, 0]],
        )
        .unwrap();
        let p = semidirect_groupoid(&a).unwrap();
        assert_eq!(p.len(), 4);
        // (a,1),(b,1) joined by (a,g),(b,g): one component on two identities.
        assert_eq!(p.component_count(), 1);
        let fixed = GroupPosetAction::new(
            cyclic_group(2),
            vec!["a".into(), "b".into()],
            BoolMatrix::identity(2),
            &[vec![0, 1], vec![0, 1]],
        )
        .unwrap();
        assert_eq!(semidirect_groupoid(&fixed).unwrap().component_count(), 2);
    }

    #[test]
    fn projection_is_an_ordered_covering_and_recognized() {
        let a = z2_on_vee();
        let p = semidirect_groupoid(&a).unwrap();
        let g = esn::groupoid_of(a.group()).unwrap();
        let f = OrderedFunctor::new(&p, &g, projection_map(&a)).unwrap();
        let flags = f.flags();
        assert!(flags.ordered && flags.covering && flags.surjective);
        let rec = covering_to_semidirect(&f).unwrap();
        assert_eq!(rec.action.action_rows(), a.action_rows());
        assert_eq!(rec.theta, (0..p.len()).collect::<Vec<_>>());
    }

    #[test]
    fn hand_triple() {
        let t = validate_mcalister_triple(z2_on_vee(), vec![0, 2]).unwrap();
        let s = p_semigroup(&t).unwrap();
        assert_eq!(s.len(), 3);
        let names: Vec<&str> = s.names().iter().map(String::as_str).collect();
        assert_eq!(names, ["(A,g0)", "(C,g0)", "(C,g1)"]);
        let cg = s.index_of("(C,g1)").unwrap();
        assert_eq!(s.mul(cg, cg), s.index_of("(C,g0)").unwrap());
        assert!(s.is_e_unitary());
        let img = max_group_image(&s).unwrap();
        assert_eq!(img.group.len(), 2);
        assert!(img.is_star_injective(&s));
        let (s2, iota) = canonical_embedding(&t).unwrap();
        let r = verify_semidirect_embedding(&s2, &t.base, &iota).unwrap();
        assert_eq!(r.verdict, EmbeddingVerdict::WitnessFound);
        let found = search_triple(&s).unwrap();
        assert!(found.isomorphism.is_some());
    }

    #[test]
    fn triple_axiom_failures() {
        assert!(matches!(
            validate_mcalister_triple(z2_on_vee(), vec![0]),
            Err(McAlisterError::Mt1NotIdeal { below: 2, inside: 0 })
        ));
        let mut leq = BoolMatrix::identity(2);
        leq.set(0, 1, true);
        let chain = GroupPosetAction::new(cyclic_group(1), vec!["a".into(), "b".into()], leq, &[vec![0, 1]]).unwrap();
        assert!(validate_mcalister_triple(chain.clone(), vec![0, 1]).is_ok());
        assert!(matches!(validate_mcalister_triple(chain, vec![0]), Err(McAlisterError::Mt2(1))));
    }

    #[test]
    fn max_group_images() {
        let g = cyclic_group(4);
        assert_eq!(max_group_image(&g).unwrap().group.len(), 4);
        assert_eq!(max_group_image(&chain_semilattice(3)).unwrap().group.len(), 1);
        let i2 = symmetric_inverse_monoid(2);
        let img = max_group_image(&i2).unwrap();
        assert_eq!(img.group.len(), 1);
        assert!(!img.is_star_injective(&i2));
    }

    #[test]
    fn group_as_point_semidirect() {
        let g = cyclic_group(3);
        let a = GroupPosetAction::new(g.clone(), vec!["*".into()], BoolMatrix::identity(1), &[vec![0], vec![0], vec![0]]).unwrap();
        let r = verify_semidirect_embedding(&g, &a, &[0, 1, 2]).unwrap();
        assert_eq!(r.verdict, EmbeddingVerdict::WitnessFound);
        let i2 = symmetric_inverse_monoid(2);
        assert!(!i2.is_e_unitary());
        let s = search_triple(&i2).unwrap();
        assert_eq!(s.verdict(), EmbeddingVerdict::NoWitnessFound);
    }
}
