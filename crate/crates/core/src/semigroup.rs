//! Finite inverse semigroups given by multiplication tables.
//!
//! Elements are identified by index; names are labels only. Products follow
//! the convention of composing partial maps right to left: in the symmetric
//! inverse monoid, `(s t)(x) = s(t(x))`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::iso::{self, IsoError, Signature};
use crate::util::{limits, BoolMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("table entry ({row}, {col}) = {value} is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("expected {expected} element names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("zero index {0} is out of range")]
    ZeroOutOfRange(usize),
    #[error("not associative: (#{0} #{1}) #{2} != #{0} (#{1} #{2})")]
    NotAssociative(usize, usize, usize),
    #[error("element #{0} has no unique inverse")]
    NoUniqueInverse(usize),
    #[error("idempotents #{0} and #{1} do not commute")]
    IdempotentsDontCommute(usize, usize),
    #[error("declared zero #{zero} is not absorbing against #{other}")]
    ZeroNotAbsorbing { zero: usize, other: usize },
    #[error("empty carrier")]
    Empty,
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("size {size} is invalid for family `{family}`")]
    InvalidSize { family: String, size: usize },
    #[error("carrier of {size} elements exceeds the cap of {cap}")]
    SizeTooLarge { size: usize, cap: usize },
    #[error("reconstructed product of #{s} and #{t} disagrees with the table")]
    InternalInconsistency { s: usize, t: usize },
    #[error("map has {got} entries, source has {expected} elements")]
    MapLength { expected: usize, got: usize },
    #[error("map sends #{0} outside the target")]
    MapOutOfRange(usize),
    #[error("direct test and structural characterization disagree for the {0} predicate")]
    CharacterizationMismatch(&'static str),
    #[error(transparent)]
    Iso(#[from] IsoError),
}

impl SemigroupError {
    /// Element indices naming the failure, least first.
    pub fn witness(&self) -> Vec<usize> {
        use SemigroupError::*;
        match *self {
            NotAssociative(i, j, k) => vec![i, j, k],
            NoUniqueInverse(i) => vec![i],
            IdempotentsDontCommute(e, f) => vec![e, f],
            ZeroNotAbsorbing { zero, other } => vec![zero, other],
            InternalInconsistency { s, t } => vec![s, t],
            EntryOutOfRange { row, col, .. } => vec![row, col],
            _ => Vec::new(),
        }
    }
}

/// Unvalidated multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSemigroup {
    pub elements: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub zero: Option<usize>,
}

/// A validated finite inverse semigroup with its derived caches.
#[derive(Clone, PartialEq, Eq)]
pub struct InvSemigroup {
    names: Vec<String>,
    table: Vec<usize>,
    zero: Option<usize>,
    inv: Vec<usize>,
    idempotent: Vec<bool>,
    leq: BoolMatrix,
}

impl fmt::Debug for InvSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvSemigroup")
            .field("names", &self.names)
            .field("zero", &self.zero)
            .finish_non_exhaustive()
    }
}

/// Validates a raw table: associativity, unique inverses, commuting idempotents.
pub fn validate_inverse_semigroup(raw: RawSemigroup) -> Result<InvSemigroup, SemigroupError> {
    let n = raw.table.len();
    if n == 0 {
        return Err(SemigroupError::Empty);
    }
    if raw.elements.len() != n {
        return Err(SemigroupError::NameCount {
            expected: n,
            got: raw.elements.len(),
        });
    }
    for (row, r) in raw.table.iter().enumerate() {
        if r.len() != n {
            return Err(SemigroupError::NotSquare {
                row,
                len: r.len(),
                expected: n,
            });
        }
        if let Some((col, &value)) = r.iter().enumerate().find(|(_, &v)| v >= n) {
            return Err(SemigroupError::EntryOutOfRange { row, col, value });
        }
    }
    if let Some(z) = raw.zero {
        if z >= n {
            return Err(SemigroupError::ZeroOutOfRange(z));
        }
    }
    let table: Vec<usize> = raw.table.into_iter().flatten().collect();
    from_flat_table(raw.elements, table, raw.zero)
}

pub(crate) fn from_flat_table(
    names: Vec<String>,
    table: Vec<usize>,
    zero: Option<usize>,
) -> Result<InvSemigroup, SemigroupError> {
    let n = names.len();
    let mul = |a: usize, b: usize| table[a * n + b];
    for i in 0..n {
        for j in 0..n {
            let ij = mul(i, j);
            for k in 0..n {
                if mul(ij, k) != mul(i, mul(j, k)) {
                    return Err(SemigroupError::NotAssociative(i, j, k));
                }
            }
        }
    }
    let mut inv = vec![0; n];
    for s in 0..n {
        let mut found = None;
        for t in 0..n {
            if mul(mul(s, t), s) == s && mul(mul(t, s), t) == t {
                if found.is_some() {
                    return Err(SemigroupError::NoUniqueInverse(s));
                }
                found = Some(t);
            }
        }
        inv[s] = found.ok_or(SemigroupError::NoUniqueInverse(s))?;
    }
    let idempotent: Vec<bool> = (0..n).map(|s| mul(s, s) == s).collect();
    let idem: Vec<usize> = (0..n).filter(|&s| idempotent[s]).collect();
    for (a, &e) in idem.iter().enumerate() {
        for &f in &idem[a + 1..] {
            if mul(e, f) != mul(f, e) {
                return Err(SemigroupError::IdempotentsDontCommute(e, f));
            }
        }
    }
    if let Some(z) = zero {
        if let Some(other) = (0..n).find(|&s| mul(z, s) != z || mul(s, z) != z) {
            return Err(SemigroupError::ZeroNotAbsorbing { zero: z, other });
        }
    }
    let leq = natural_order_matrix(n, &table, &idem);
    Ok(InvSemigroup {
        names,
        table,
        zero,
        inv,
        idempotent,
        leq,
    })
}

fn natural_order_matrix(n: usize, table: &[usize], idem: &[usize]) -> BoolMatrix {
    let mut leq = BoolMatrix::new(n);
    for t in 0..n {
        for &e in idem {
            leq.set(table[t * n + e], t, true);
        }
    }
    leq
}

impl InvSemigroup {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, s: usize) -> &str {
        &self.names[s]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.table[s * self.len() + t]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.len()).map(<[usize]>::to_vec).collect()
    }

    pub fn zero(&self) -> Option<usize> {
        self.zero
    }

    /// Returns a copy with the zero annotation replaced.
    pub fn with_zero(&self, zero: Option<usize>) -> Result<InvSemigroup, SemigroupError> {
        from_flat_table(self.names.clone(), self.table.clone(), zero)
    }

    /// The absorbing element, if any, regardless of the annotation.
    pub fn find_zero(&self) -> Option<usize> {
        (0..self.len()).find(|&z| (0..self.len()).all(|s| self.mul(z, s) == z && self.mul(s, z) == z))
    }

    /// The two-sided identity, if any.
    pub fn identity(&self) -> Option<usize> {
        (0..self.len()).find(|&e| (0..self.len()).all(|s| self.mul(e, s) == s && self.mul(s, e) == s))
    }

    #[inline]
    pub fn inv(&self, s: usize) -> usize {
        self.inv[s]
    }

    #[inline]
    pub fn is_idempotent(&self, s: usize) -> bool {
        self.idempotent[s]
    }

    pub fn idempotents(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&s| self.idempotent[s])
    }

    /// `s⁻¹ s`.
    #[inline]
    pub fn dom(&self, s: usize) -> usize {
        self.mul(self.inv[s], s)
    }

    /// `s s⁻¹`.
    #[inline]
    pub fn ran(&self, s: usize) -> usize {
        self.mul(s, self.inv[s])
    }

    #[inline]
    pub fn leq(&self, s: usize, t: usize) -> bool {
        self.leq.get(s, t)
    }

    pub fn natural_partial_order(&self) -> &BoolMatrix {
        &self.leq
    }

    /// A group is an inverse semigroup with exactly one idempotent.
    pub fn is_group(&self) -> bool {
        self.idempotents().count() == 1
    }

    /// `s · t`, defined only when `s⁻¹s = tt⁻¹`.
    pub fn restricted_product(&self, s: usize, t: usize) -> Option<usize> {
        (self.dom(s) == self.ran(t)).then(|| self.mul(s, t))
    }

    /// Recomputes `st` as `(se)·(et)` with `e = s⁻¹stt⁻¹`.
    pub fn reconstruct_full_product(&self, s: usize, t: usize) -> Result<usize, SemigroupError> {
        let e = self.mul(self.dom(s), self.ran(t));
        let s1 = self.mul(s, e);
        let t1 = self.mul(e, t);
        match self.restricted_product(s1, t1) {
            Some(p) if p == self.mul(s, t) => Ok(p),
            _ => Err(SemigroupError::InternalInconsistency { s, t }),
        }
    }

    /// True iff `e ≤ s` with `e` idempotent forces `s` idempotent.
    pub fn is_e_unitary(&self) -> bool {
        self.e_unitary_violation().is_none()
    }

    /// Least `(e, s)` with `e ≤ s`, `e` idempotent and `s` not.
    pub fn e_unitary_violation(&self) -> Option<(usize, usize)> {
        self.idempotents()
            .flat_map(|e| (0..self.len()).map(move |s| (e, s)))
            .find(|&(e, s)| self.leq(e, s) && !self.is_idempotent(s))
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.len()).with_binary(self.table.iter().map(|&v| Some(v)).collect())
    }

    pub fn to_raw(&self) -> RawSemigroup {
        RawSemigroup {
            elements: self.names.clone(),
            table: self.table_rows(),
            zero: self.zero,
        }
    }
}

/// The natural partial order as a matrix: `m[s][t]` iff `s = te` for an idempotent `e`.
pub fn natural_partial_order(s: &InvSemigroup) -> BoolMatrix {
    s.natural_partial_order().clone()
}

/// Least isomorphism between two semigroups, if one exists.
pub fn find_isomorphism(a: &InvSemigroup, b: &InvSemigroup) -> Result<Option<Vec<usize>>, SemigroupError> {
    Ok(iso::find_isomorphism(&a.signature(), &b.signature())?)
}

/// A function between two inverse semigroups, given by target indices.
#[derive(Clone, Debug)]
pub struct SemigroupMap<'a> {
    pub source: &'a InvSemigroup,
    pub target: &'a InvSemigroup,
    pub map: Vec<usize>,
}

impl<'a> SemigroupMap<'a> {
    pub fn new(
        source: &'a InvSemigroup,
        target: &'a InvSemigroup,
        map: Vec<usize>,
    ) -> Result<Self, SemigroupError> {
        if map.len() != source.len() {
            return Err(SemigroupError::MapLength {
                expected: source.len(),
                got: map.len(),
            });
        }
        if let Some(s) = map.iter().position(|&t| t >= target.len()) {
            return Err(SemigroupError::MapOutOfRange(s));
        }
        Ok(SemigroupMap { source, target, map })
    }

    pub fn identity(s: &'a InvSemigroup) -> Self {
        SemigroupMap {
            source: s,
            target: s,
            map: (0..s.len()).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then<'b>(&self, other: &SemigroupMap<'b>) -> SemigroupMap<'b>
    where
        'a: 'b,
    {
        SemigroupMap {
            source: self.source,
            target: other.target,
            map: self.map.iter().map(|&t| other.map[t]).collect(),
        }
    }

    #[inline]
    pub fn apply(&self, s: usize) -> usize {
        self.map[s]
    }

    fn prehom_direct(&self) -> bool {
        let (s, t) = (self.source, self.target);
        (0..s.len()).all(|a| {
            (0..s.len()).all(|b| {
                t.leq(self.apply(s.mul(a, b)), t.mul(self.apply(a), self.apply(b)))
            })
        })
    }

    fn prehom_structural(&self) -> bool {
        let (s, t) = (self.source, self.target);
        let preserves_restricted = (0..s.len()).all(|a| {
            (0..s.len()).all(|b| match s.restricted_product(a, b) {
                None => true,
                Some(p) => t.restricted_product(self.apply(a), self.apply(b)) == Some(self.apply(p)),
            })
        });
        let preserves_order = s
            .natural_partial_order()
            .pairs()
            .all(|(a, b)| t.leq(self.apply(a), self.apply(b)));
        preserves_restricted && preserves_order
    }

    /// `θ(st) ≤ θ(s)θ(t)` for all pairs, cross-checked against preservation
    /// of the restricted product and the natural partial order.
    pub fn is_prehomomorphism(&self) -> Result<bool, SemigroupError> {
        let direct = self.prehom_direct();
        if direct != self.prehom_structural() {
            return Err(SemigroupError::CharacterizationMismatch("prehomomorphism"));
        }
        Ok(direct)
    }

    /// `θ(st) = θ(s)θ(t)`, cross-checked against "prehomomorphism that is
    /// multiplicative on idempotents".
    pub fn is_homomorphism(&self) -> Result<bool, SemigroupError> {
        let (s, t) = (self.source, self.target);
        let direct = (0..s.len()).all(|a| {
            (0..s.len()).all(|b| self.apply(s.mul(a, b)) == t.mul(self.apply(a), self.apply(b)))
        });
        let idem: Vec<usize> = s.idempotents().collect();
        let on_idempotents = idem.iter().all(|&e| {
            idem.iter()
                .all(|&f| self.apply(s.mul(e, f)) == t.mul(self.apply(e), self.apply(f)))
        });
        let structural = self.is_prehomomorphism()? && on_idempotents;
        if direct != structural {
            return Err(SemigroupError::CharacterizationMismatch("homomorphism"));
        }
        Ok(direct)
    }
}

fn check_cap(size: usize) -> Result<(), SemigroupError> {
    let cap = limits::generator_cap();
    if size > cap {
        return Err(SemigroupError::SizeTooLarge { size, cap });
    }
    Ok(())
}

/// Named standard families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    SymmetricInverseMonoid,
    ChainSemilattice,
    DiamondSemilattice,
    CyclicGroup,
    Brandt,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::SymmetricInverseMonoid,
        Family::ChainSemilattice,
        Family::DiamondSemilattice,
        Family::CyclicGroup,
        Family::Brandt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::SymmetricInverseMonoid => "symmetric_inverse_monoid",
            Family::ChainSemilattice => "chain_semilattice",
            Family::DiamondSemilattice => "diamond_semilattice",
            Family::CyclicGroup => "cyclic_group",
            Family::Brandt => "brandt",
        }
    }

    pub fn parse(name: &str) -> Result<Family, SemigroupError> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == name)
            .ok_or_else(|| SemigroupError::UnknownFamily(name.to_string()))
    }

    /// Carrier size for parameter `n`, or `None` if `n` is invalid.
    pub fn carrier_size(self, n: usize) -> Option<usize> {
        match self {
            Family::SymmetricInverseMonoid => {
                // Σ_k C(n,k)^2 k!, saturating so huge n is rejected by the cap.
                let mut total: usize = 0;
                for k in 0..=n {
                    let c = binomial(n, k)?;
                    let term = c.checked_mul(c)?.checked_mul(factorial(k)?)?;
                    total = total.checked_add(term)?;
                }
                Some(total)
            }
            Family::ChainSemilattice | Family::CyclicGroup => (n >= 1).then_some(n),
            Family::DiamondSemilattice => (n >= 1).then(|| n.checked_add(2)).flatten(),
            Family::Brandt => (n >= 1).then(|| n.checked_mul(n)?.checked_add(1)).flatten(),
        }
    }
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let mut r: usize = 1;
    for i in 0..k {
        r = r.checked_mul(n - i)? / (i + 1);
    }
    Some(r)
}

fn factorial(k: usize) -> Option<usize> {
    (1..=k).try_fold(1usize, |acc, i| acc.checked_mul(i))
}

/// Builds a member of a standard family, refusing carriers above the cap.
pub fn generate_standard(name: &str, size: usize) -> Result<InvSemigroup, SemigroupError> {
    let family = Family::parse(name)?;
    let carrier = family.carrier_size(size).ok_or_else(|| SemigroupError::InvalidSize {
        family: name.to_string(),
        size,
    })?;
    check_cap(carrier)?;
    match family {
        Family::SymmetricInverseMonoid => Ok(symmetric_inverse_monoid(size)),
        Family::ChainSemilattice => Ok(chain_semilattice(size)),
        Family::DiamondSemilattice => Ok(diamond_semilattice(size)),
        Family::CyclicGroup => Ok(cyclic_group(size)),
        Family::Brandt => Ok(brandt(size)),
    }
}

/// A partial injection on `{0, …, n-1}`: `map[x]` is the image of `x`.
pub type PartialInjection = Vec<Option<usize>>;

/// Composes partial injections right to left: `(s t)(x) = s(t(x))`.
pub fn compose_partial(s: &[Option<usize>], t: &[Option<usize>]) -> PartialInjection {
    t.iter().map(|tx| tx.and_then(|y| s[y])).collect()
}

pub fn invert_partial(s: &[Option<usize>]) -> PartialInjection {
    let mut out = vec![None; s.len()];
    for (x, y) in s.iter().enumerate() {
        if let Some(y) = *y {
            out[y] = Some(x);
        }
    }
    out
}

/// Name of a partial injection, 1-based: `"0"` for the empty map,
/// otherwise e.g. `"1>2,2>1"`.
pub fn partial_injection_name(s: &[Option<usize>]) -> String {
    let parts: Vec<String> = s
        .iter()
        .enumerate()
        .filter_map(|(x, y)| y.map(|y| format!("{}>{}", x + 1, y + 1)))
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(",")
    }
}

/// All partial injections on an `n`-set, ordered by rank, then lexicographically.
pub fn partial_injections(n: usize) -> Vec<PartialInjection> {
    let mut all = Vec::new();
    let mut current = vec![None; n];
    fn rec(x: usize, n: usize, used: &mut Vec<bool>, current: &mut PartialInjection, all: &mut Vec<PartialInjection>) {
        if x == n {
            all.push(current.clone());
            return;
        }
        current[x] = None;
        rec(x + 1, n, used, current, all);
        for y in 0..n {
            if !used[y] {
                used[y] = true;
                current[x] = Some(y);
                rec(x + 1, n, used, current, all);
                used[y] = false;
            }
        }
        current[x] = None;
    }
    rec(0, n, &mut vec![false; n], &mut current, &mut all);
    all.sort_by_key(|m| (m.iter().filter(|y| y.is_some()).count(), m.iter().map(|y| y.map_or(0, |v| v + 1)).collect::<Vec<_>>()));
    all
}

/// Closes the given elements under composition and builds the semigroup table.
fn from_partial_injections(elements: Vec<PartialInjection>, zero: Option<usize>) -> InvSemigroup {
    let index: BTreeMap<PartialInjection, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let n = elements.len();
    let mut table = Vec::with_capacity(n * n);
    for s in &elements {
        for t in &elements {
            table.push(index[&compose_partial(s, t)]);
        }
    }
    let names = elements.iter().map(|m| partial_injection_name(m)).collect();
    from_flat_table(names, table, zero).expect("partial injections form an inverse semigroup")
}

/// The symmetric inverse monoid `I_n`; the empty map is index 0 and the zero.
pub fn symmetric_inverse_monoid(n: usize) -> InvSemigroup {
    from_partial_injections(partial_injections(n), Some(0))
}

/// The inverse subsemigroup of `I_n` generated by `gens`.
pub fn generated_by_partial_injections(n: usize, gens: &[PartialInjection]) -> InvSemigroup {
    let mut set: Vec<PartialInjection> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for g in gens {
        assert_eq!(g.len(), n, "generator arity");
        for m in [g.clone(), invert_partial(g)] {
            if seen.insert(m.clone()) {
                set.push(m);
            }
        }
    }
    let mut i = 0;
    while i < set.len() {
        for j in 0..=i {
            for p in [compose_partial(&set[i], &set[j]), compose_partial(&set[j], &set[i])] {
                if seen.insert(p.clone()) {
                    set.push(p);
                }
            }
        }
        i += 1;
    }
    let mut elements: Vec<PartialInjection> = seen.into_iter().collect();
    elements.sort_by_key(|m| (m.iter().filter(|y| y.is_some()).count(), m.iter().map(|y| y.map_or(0, |v| v + 1)).collect::<Vec<_>>()));
    let zero = elements.iter().position(|m| m.iter().all(Option::is_none));
    from_partial_injections(elements, zero)
}

/// The chain `c0 < c1 < … < c(n-1)` under meet; `c0` is the zero.
pub fn chain_semilattice(n: usize) -> InvSemigroup {
    let names = (0..n).map(|i| format!("c{i}")).collect();
    let table = (0..n * n).map(|k| (k / n).min(k % n)).collect();
    from_flat_table(names, table, Some(0)).expect("chain")
}

/// Bottom, `n` pairwise incomparable atoms, and top, under meet.
pub fn diamond_semilattice(n: usize) -> InvSemigroup {
    let size = n + 2;
    let mut names = vec!["bot".to_string()];
    names.extend((1..=n).map(|i| format!("a{i}")));
    names.push("top".to_string());
    let top = n + 1;
    let meet = |x: usize, y: usize| {
        if x == y || y == top {
            x
        } else if x == top {
            y
        } else {
            0
        }
    };
    let table = (0..size * size).map(|k| meet(k / size, k % size)).collect();
    from_flat_table(names, table, Some(0)).expect("diamond")
}

/// `Z_n`; element `i` is named `g{i}`.
pub fn cyclic_group(n: usize) -> InvSemigroup {
    let names = (0..n).map(|i| format!("g{i}")).collect();
    let table = (0..n * n).map(|k| (k / n + k % n) % n).collect();
    from_flat_table(names, table, None).expect("cyclic group")
}

/// The Brandt semigroup over the trivial group: zero plus matrix units `(i,j)`.
pub fn brandt(n: usize) -> InvSemigroup {
    let units: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
    let mut names = vec!["0".to_string()];
    names.extend(units.iter().map(|(i, j)| format!("({i},{j})")));
    let size = units.len() + 1;
    let index = |u: (usize, usize)| 1 + units.iter().position(|&v| v == u).expect("unit");
    let mut table = vec![0; size * size];
    for (a, &(i, j)) in units.iter().enumerate() {
        for (b, &(k, l)) in units.iter().enumerate() {
            if j == k {
                table[(a + 1) * size + b + 1] = index((i, l));
            }
        }
    }
    from_flat_table(names, table, Some(0)).expect("brandt")
}

/// Permutation group on `n` points given as bijections (all of `S_n`).
pub fn symmetric_group(n: usize) -> InvSemigroup {
    let perms: Vec<PartialInjection> = partial_injections(n)
        .into_iter()
        .filter(|m| m.iter().all(Option::is_some))
        .collect();
    from_partial_injections(perms, None)
}

/// `S × T` with componentwise product; names `"(s,t)"`.
pub fn direct_product(s: &InvSemigroup, t: &InvSemigroup) -> InvSemigroup {
    let (n, m) = (s.len(), t.len());
    let names = (0..n)
        .flat_map(|a| (0..m).map(move |b| (a, b)))
        .map(|(a, b)| format!("({},{})", s.name(a), t.name(b)))
        .collect();
    let mut table = Vec::with_capacity(n * m * n * m);
    for a in 0..n * m {
        for b in 0..n * m {
            table.push(s.mul(a / m, b / m) * m + t.mul(a % m, b % m));
        }
    }
    let zero = s.zero().zip(t.zero()).map(|(a, b)| a * m + b);
    from_flat_table(names, table, zero).expect("product of inverse semigroups")
}

/// `S` with a new identity appended (always adjoined, as in `S¹` for non-monoids).
pub fn adjoin_identity(s: &InvSemigroup, name: &str) -> InvSemigroup {
    let n = s.len();
    let e = n;
    let mut names = s.names().to_vec();
    names.push(name.to_string());
    let mut table = Vec::with_capacity((n + 1) * (n + 1));
    for a in 0..=n {
        for b in 0..=n {
            table.push(match (a == e, b == e) {
                (true, _) => b,
                (_, true) => a,
                _ => s.mul(a, b),
            });
        }
    }
    from_flat_table(names, table, s.zero()).expect("adjoining an identity")
}

/// `S` with a new zero at index 0; existing elements shift by one.
pub fn adjoin_zero(s: &InvSemigroup, name: &str) -> InvSemigroup {
    let n = s.len() + 1;
    let mut names = vec![name.to_string()];
    names.extend(s.names().iter().cloned());
    let mut table = vec![0; n * n];
    for a in 1..n {
        for b in 1..n {
            table[a * n + b] = s.mul(a - 1, b - 1) + 1;
        }
    }
    from_flat_table(names, table, Some(0)).expect("adjoining a zero")
}

/// The semilattice `(E, ∩)` of a family of subsets closed under intersection.
pub fn semilattice_of_sets(sets: &[u64]) -> InvSemigroup {
    let mut family: Vec<u64> = sets.to_vec();
    loop {
        let mut added = false;
        let snapshot = family.clone();
        for &a in &snapshot {
            for &b in &snapshot {
                if !family.contains(&(a & b)) {
                    family.push(a & b);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    family.sort_by_key(|&m| (m.count_ones(), m));
    family.dedup();
    let n = family.len();
    let names = family.iter().map(|m| format!("s{m:x}")).collect();
    let table = (0..n * n)
        .map(|k| {
            let v = family[k / n] & family[k % n];
            family.iter().position(|&m| m == v).expect("closed")
        })
        .collect();
    from_flat_table(names, table, Some(0)).expect("semilattice of sets")
}
