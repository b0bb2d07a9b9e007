//! Passing between inverse semigroups and inductive groupoids.
//!
//! `groupoid_of` keeps the carrier and replaces the product by the restricted
//! product; `semigroup_of` recovers the full product as the pseudoproduct.
//! Both directions preserve element indices, so round trips are compared
//! table against table.

use thiserror::Error;

use crate::groupoid::{GroupoidError, OrdGroupoid, OrderedFunctor};
use crate::semigroup::{self, InvSemigroup, SemigroupError, SemigroupMap};

/// Name of the adjoined zero.
pub const ZERO_NAME: &str = "0";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EsnError {
    #[error(transparent)]
    Groupoid(#[from] GroupoidError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("identities #{0} and #{1} have no meet")]
    NotInductive(usize, usize),
    #[error("identities #{0} and #{1} have lower bounds but no greatest one")]
    NotStarInductive(usize, usize),
    #[error("element #{0} is already named \"0\"")]
    ZeroNameClash(usize),
    #[error("semigroup has no zero")]
    NoZero,
    #[error("round trip differs at {0}")]
    RoundTripMismatch(String),
    #[error("map is not a prehomomorphism")]
    NotAPrehomomorphism,
    #[error("functor is not ordered")]
    NotOrderedFunctor,
}

/// The inductive groupoid of `S`: restricted product and natural partial order.
pub fn groupoid_of(s: &InvSemigroup) -> Result<OrdGroupoid, EsnError> {
    let n = s.len();
    let g = OrdGroupoid::build(
        s.names().to_vec(),
        (0..n).map(|x| s.dom(x)).collect(),
        (0..n).map(|x| s.ran(x)).collect(),
        (0..n).map(|x| s.inv(x)).collect(),
        |x, y| s.mul(x, y),
        |x, y| s.leq(x, y),
    )?;
    if let Some((e, f)) = g.meet_failure(false) {
        return Err(EsnError::NotInductive(e, f));
    }
    Ok(g)
}

/// The groupoid of the nonzero elements of `S`, with the map from new to old indices.
pub fn groupoid_of_nonzero(s: &InvSemigroup) -> Result<(OrdGroupoid, Vec<usize>), EsnError> {
    let z = s.zero().or_else(|| s.find_zero()).ok_or(EsnError::NoZero)?;
    let keep: Vec<usize> = (0..s.len()).filter(|&x| x != z).collect();
    if keep.is_empty() {
        return Err(EsnError::Groupoid(GroupoidError::Empty));
    }
    let mut pos = vec![usize::MAX; s.len()];
    for (i, &x) in keep.iter().enumerate() {
        pos[x] = i;
    }
    let g = OrdGroupoid::build(
        keep.iter().map(|&x| s.name(x).to_string()).collect(),
        keep.iter().map(|&x| pos[s.dom(x)]).collect(),
        keep.iter().map(|&x| pos[s.ran(x)]).collect(),
        keep.iter().map(|&x| pos[s.inv(x)]).collect(),
        |a, b| pos[s.mul(keep[a], keep[b])],
        |a, b| s.leq(keep[a], keep[b]),
    )?;
    Ok((g, keep))
}

/// The inverse semigroup `(G, ⊗)` of an inductive groupoid.
pub fn semigroup_of(g: &OrdGroupoid) -> Result<InvSemigroup, EsnError> {
    if let Some((e, f)) = g.meet_failure(false) {
        return Err(EsnError::NotInductive(e, f));
    }
    let n = g.len();
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            table.push(g.pseudoproduct(x, y)?.expect("inductive groupoid"));
        }
    }
    let s = semigroup::from_flat_table(g.names().to_vec(), table, None)?;
    if let Some(x) = (0..n).find(|&x| s.is_idempotent(x) != g.is_identity(x)) {
        return Err(EsnError::RoundTripMismatch(format!("idempotent #{x}")));
    }
    Ok(s)
}

/// `G` with a zero adjoined at index 0; undefined pseudoproducts become 0.
pub fn semigroup_of_with_zero(g: &OrdGroupoid) -> Result<InvSemigroup, EsnError> {
    if let Some((e, f)) = g.meet_failure(true) {
        return Err(EsnError::NotStarInductive(e, f));
    }
    if let Some(x) = g.index_of(ZERO_NAME) {
        return Err(EsnError::ZeroNameClash(x));
    }
    let n = g.len() + 1;
    let mut names = vec![ZERO_NAME.to_string()];
    names.extend(g.names().iter().cloned());
    let mut table = vec![0; n * n];
    for x in 0..g.len() {
        for y in 0..g.len() {
            if let Some(p) = g.pseudoproduct(x, y)? {
                table[(x + 1) * n + y + 1] = p + 1;
            }
        }
    }
    Ok(semigroup::from_flat_table(names, table, Some(0))?)
}

/// Evidence of a round trip: both maps are the identity on indices.
#[derive(Clone, Debug)]
pub struct EsnWitness {
    pub source: InvSemigroup,
    pub groupoid: OrdGroupoid,
    pub forward: Vec<usize>,
    pub backward: Vec<usize>,
}

fn compare_semigroups(a: &InvSemigroup, b: &InvSemigroup) -> Result<(), EsnError> {
    let n = a.len();
    if b.len() != n {
        return Err(EsnError::RoundTripMismatch("carrier size".into()));
    }
    for x in 0..n {
        for y in 0..n {
            if a.mul(x, y) != b.mul(x, y) {
                return Err(EsnError::RoundTripMismatch(format!("product (#{x}, #{y})")));
            }
            if a.leq(x, y) != b.leq(x, y) {
                return Err(EsnError::RoundTripMismatch(format!("order (#{x}, #{y})")));
            }
        }
        if a.inv(x) != b.inv(x) || a.is_idempotent(x) != b.is_idempotent(x) {
            return Err(EsnError::RoundTripMismatch(format!("inverse or idempotent at #{x}")));
        }
    }
    Ok(())
}

/// Compares two ordered groupoids index by index.
fn compare_groupoids(a: &OrdGroupoid, b: &OrdGroupoid) -> Result<(), EsnError> {
    let n = a.len();
    if b.len() != n {
        return Err(EsnError::RoundTripMismatch("carrier size".into()));
    }
    for x in 0..n {
        if a.dom(x) != b.dom(x) || a.cod(x) != b.cod(x) || a.inv(x) != b.inv(x) {
            return Err(EsnError::RoundTripMismatch(format!("ends or inverse of #{x}")));
        }
        for y in 0..n {
            if a.comp(x, y) != b.comp(x, y) {
                return Err(EsnError::RoundTripMismatch(format!("product (#{x}, #{y})")));
            }
            if a.leq(x, y) != b.leq(x, y) {
                return Err(EsnError::RoundTripMismatch(format!("order (#{x}, #{y})")));
            }
        }
    }
    Ok(())
}

/// Checks that `S(G(S)) = S` index for index.
pub fn verify_esn_roundtrip(s: &InvSemigroup) -> Result<EsnWitness, EsnError> {
    let g = groupoid_of(s)?;
    let back = semigroup_of(&g)?;
    compare_semigroups(s, &back)?;
    let id: Vec<usize> = (0..s.len()).collect();
    Ok(EsnWitness {
        source: s.clone(),
        groupoid: g,
        forward: id.clone(),
        backward: id,
    })
}

/// Checks that `G(S(G)) = G` index for index.
pub fn verify_esn_roundtrip_g(g: &OrdGroupoid) -> Result<EsnWitness, EsnError> {
    let s = semigroup_of(g)?;
    let back = groupoid_of(&s)?;
    compare_groupoids(g, &back)?;
    let id: Vec<usize> = (0..g.len()).collect();
    Ok(EsnWitness {
        source: s,
        groupoid: g.clone(),
        forward: id.clone(),
        backward: id,
    })
}

/// Checks that the nonzero part of `G⁰` is `G` again, shifted by one index.
pub fn verify_zero_roundtrip(g: &OrdGroupoid) -> Result<InvSemigroup, EsnError> {
    let s = semigroup_of_with_zero(g)?;
    let (back, keep) = groupoid_of_nonzero(&s)?;
    if keep != (1..s.len()).collect::<Vec<_>>() {
        return Err(EsnError::RoundTripMismatch("zero is not index 0".into()));
    }
    compare_groupoids(g, &back)?;
    Ok(s)
}

/// Reads a prehomomorphism as an ordered functor between the associated groupoids.
pub fn transport_morphism<'a>(
    f: &SemigroupMap<'_>,
    source: &'a OrdGroupoid,
    target: &'a OrdGroupoid,
) -> Result<OrderedFunctor<'a>, EsnError> {
    if !f.is_prehomomorphism()? {
        return Err(EsnError::NotAPrehomomorphism);
    }
    let func = OrderedFunctor::new(source, target, f.map.clone())?;
    let flags = func.flags();
    if !flags.ordered {
        return Err(EsnError::RoundTripMismatch("transported map is not ordered".into()));
    }
    if flags.inductive != f.is_homomorphism()? {
        return Err(EsnError::RoundTripMismatch(
            "homomorphism and inductive functor disagree".into(),
        ));
    }
    Ok(func)
}

/// Reads an ordered functor between inductive groupoids as a prehomomorphism.
pub fn transport_functor<'a>(
    f: &OrderedFunctor<'_>,
    source: &'a InvSemigroup,
    target: &'a InvSemigroup,
) -> Result<SemigroupMap<'a>, EsnError> {
    let flags = f.flags();
    if !flags.ordered {
        return Err(EsnError::NotOrderedFunctor);
    }
    let map = SemigroupMap::new(source, target, f.map.clone())?;
    if !map.is_prehomomorphism()? {
        return Err(EsnError::RoundTripMismatch("transported functor is not a prehomomorphism".into()));
    }
    if flags.inductive != map.is_homomorphism()? {
        return Err(EsnError::RoundTripMismatch(
            "inductive functor and homomorphism disagree".into(),
        ));
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::{
        brandt, chain_semilattice, cyclic_group, diamond_semilattice, symmetric_inverse_monoid,
    };
    use crate::util::BoolMatrix;

    #[test]
    fn group_becomes_itself() {
        let s = cyclic_group(3);
        let g = groupoid_of(&s).unwrap();
        assert_eq!(g.identities(), &[0]);
        assert_eq!(*g.order(), BoolMatrix::identity(3));
        verify_esn_roundtrip(&s).unwrap();
    }

    #[test]
    fn semilattice_becomes_identities_only() {
        let s = diamond_semilattice(2);
        let g = groupoid_of(&s).unwrap();
        assert_eq!(g.identities().len(), 4);
        let back = semigroup_of(&g).unwrap();
        assert_eq!(back.table_rows(), s.table_rows());
    }

    #[test]
    fn i2_groupoid() {
        let s = symmetric_inverse_monoid(2);
        let g = groupoid_of(&s).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g.identities().len(), 4);
        assert!(g.is_inductive());
        let swap = g.index_of("1>2,2>1").unwrap();
        let e1 = g.index_of("1>1").unwrap();
        assert_eq!(g.name(g.restriction(swap, e1).unwrap()), "1>2");
        assert_eq!(g.name(g.pseudoproduct(swap, swap).unwrap().unwrap()), "1>1,2>2");
    }

    #[test]
    fn roundtrips_on_the_nose() {
        for s in [
            symmetric_inverse_monoid(1),
            symmetric_inverse_monoid(2),
            symmetric_inverse_monoid(3),
            chain_semilattice(4),
            brandt(2),
        ] {
            let w = verify_esn_roundtrip(&s).unwrap();
            verify_esn_roundtrip_g(&w.groupoid).unwrap();
        }
    }

    #[test]
    fn antichain_with_zero_is_three_element_semilattice() {
        let g = OrdGroupoid::from_poset(vec!["e".into(), "f".into()], BoolMatrix::identity(2)).unwrap();
        assert!(semigroup_of(&g).is_err());
        let s = semigroup_of_with_zero(&g).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.zero(), Some(0));
        assert_eq!(s.mul(1, 2), 0);
        assert_eq!(s.idempotents().count(), 3);
        verify_zero_roundtrip(&g).unwrap();
    }

    #[test]
    fn zero_name_clash_is_rejected() {
        let s = symmetric_inverse_monoid(2);
        let g = groupoid_of(&s).unwrap();
        assert_eq!(semigroup_of_with_zero(&g).unwrap_err(), EsnError::ZeroNameClash(0));
    }

    #[test]
    fn brandt_nonzero_part_is_star_inductive() {
        let b = brandt(2);
        let (g, keep) = groupoid_of_nonzero(&b).unwrap();
        assert_eq!(keep, vec![1, 2, 3, 4]);
        assert!(g.is_star_inductive() && !g.is_inductive());
        let back = semigroup_of_with_zero(&g).unwrap();
        assert_eq!(back.table_rows(), b.table_rows());
    }

    #[test]
    fn transport_identity_and_semilattice_map() {
        let s = symmetric_inverse_monoid(2);
        let g = groupoid_of(&s).unwrap();
        let id = SemigroupMap::identity(&s);
        let f = transport_morphism(&id, &g, &g).unwrap();
        assert!(f.flags().inductive);
        let d = diamond_semilattice(2);
        let c = chain_semilattice(2);
        let (gd, gc) = (groupoid_of(&d).unwrap(), groupoid_of(&c).unwrap());
        let m = SemigroupMap::new(&d, &c, vec![0, 1, 1, 1]).unwrap();
        let f = transport_morphism(&m, &gd, &gc).unwrap();
        let flags = f.flags();
        assert!(flags.ordered && !flags.inductive);
        let back = transport_functor(&f, &d, &c).unwrap();
        assert_eq!(back.map, m.map);
    }

    #[test]
    fn inclusion_i1_into_i2_is_inductive() {
        let i1 = symmetric_inverse_monoid(1);
        let i2 = symmetric_inverse_monoid(2);
        let map = vec![0, i2.index_of("1>1").unwrap()];
        let m = SemigroupMap::new(&i1, &i2, map).unwrap();
        assert_eq!(m.is_homomorphism(), Ok(true));
        let (g1, g2) = (groupoid_of(&i1).unwrap(), groupoid_of(&i2).unwrap());
        assert!(transport_morphism(&m, &g1, &g2).unwrap().flags().inductive);
    }
}
