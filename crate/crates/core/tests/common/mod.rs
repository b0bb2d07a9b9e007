//! Corpus shared by the integration tests. Everything is seeded.
#![allow(dead_code)]

use esnkit::affine::{self, GroupoidAction};
use esnkit::cancellative;
use esnkit::category::FinCategory;
use esnkit::esn;
use esnkit::groupoid::{Groupoid, OrdGroupoid};
use esnkit::mcalister::{self, GroupPosetAction, McAlisterTriple};
use esnkit::semigroup::{self, InvSemigroup, PartialInjection};
use esnkit::util::BoolMatrix;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Random family of subsets of a `bits`-element set, closed under intersection
/// by the generator.
pub fn random_semilattice(r: &mut impl Rng, bits: u32, count: usize) -> InvSemigroup {
    let sets: Vec<u64> = (0..count).map(|_| r.random_range(0..1u64 << bits)).collect();
    semigroup::semilattice_of_sets(&sets)
}

pub fn random_partial_injection(r: &mut impl Rng, n: usize) -> PartialInjection {
    let mut targets: Vec<usize> = (0..n).collect();
    targets.shuffle(r);
    (0..n).map(|x| r.random_bool(0.75).then_some(targets[x])).collect()
}

/// Inverse subsemigroup of `I_n` generated by random partial injections.
pub fn random_inverse_semigroup(r: &mut impl Rng, n: usize, gens: usize) -> InvSemigroup {
    let gens: Vec<PartialInjection> = (0..gens).map(|_| random_partial_injection(r, n)).collect();
    semigroup::generated_by_partial_injections(n, &gens)
}

/// Named hand-built and generated inverse semigroups.
pub fn semigroups() -> Vec<(String, InvSemigroup)> {
    use esnkit::semigroup::*;
    let mut out: Vec<(String, InvSemigroup)> = vec![
        ("I1".into(), symmetric_inverse_monoid(1)),
        ("I2".into(), symmetric_inverse_monoid(2)),
        ("I3".into(), symmetric_inverse_monoid(3)),
        ("C1".into(), cyclic_group(1)),
        ("C4".into(), cyclic_group(4)),
        ("C5".into(), cyclic_group(5)),
        ("S3".into(), symmetric_group(3)),
        ("chain3".into(), chain_semilattice(3)),
        ("chain8".into(), chain_semilattice(8)),
        ("diamond2".into(), diamond_semilattice(2)),
        ("diamond3".into(), diamond_semilattice(3)),
        ("B2".into(), brandt(2)),
        ("B3".into(), brandt(3)),
        ("B2+1".into(), adjoin_identity(&brandt(2), "1")),
        ("C2+0".into(), adjoin_zero(&cyclic_group(2), "z")),
        ("C2xchain2".into(), direct_product(&cyclic_group(2), &chain_semilattice(2))),
        ("C3+1".into(), adjoin_identity(&cyclic_group(3), "1")),
    ];
    let mut r = rng(7);
    for i in 0..6 {
        out.push((format!("semilattice{i}"), random_semilattice(&mut r, 4, 3 + i)));
    }
    for i in 0..4 {
        out.push((format!("pinj{i}"), random_inverse_semigroup(&mut r, 3, 1 + i % 2)));
    }
    out
}

/// Semigroups from the corpus with an identity.
pub fn monoids() -> Vec<(String, InvSemigroup)> {
    semigroups().into_iter().filter(|(_, s)| s.identity().is_some()).collect()
}

pub fn chain_poset(n: usize) -> BoolMatrix {
    BoolMatrix::from_fn(n, |i, j| i <= j)
}

/// `e, f` below both `u, v`: lower-bounded pairs without meets.
pub fn crown_poset() -> BoolMatrix {
    let mut m = BoolMatrix::identity(4);
    for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
        m.set(i, j, true);
    }
    m
}

/// Two atoms with no lower bound, under a top.
pub fn vee_poset() -> BoolMatrix {
    let mut m = BoolMatrix::identity(3);
    m.set(0, 2, true);
    m.set(1, 2, true);
    m
}

/// Z₂ swapping A and B above C.
pub fn z2_on_vee() -> GroupPosetAction {
    let mut leq = BoolMatrix::identity(3);
    leq.set(2, 0, true);
    leq.set(2, 1, true);
    GroupPosetAction::new(
        semigroup::cyclic_group(2),
        vec!["A".into(), "B".into(), "C".into()],
        leq,
        &[vec![0, 1, 2], vec![1, 0, 2]],
    )
    .unwrap()
}

/// Ordered groupoids: groupoids of inductive semigroups, posets, a
/// semidirect product and barred variants.
pub fn groupoids() -> Vec<(String, OrdGroupoid)> {
    let mut out: Vec<(String, OrdGroupoid)> = Vec::new();
    for (name, s) in semigroups().into_iter().filter(|(_, s)| s.len() <= 34) {
        out.push((format!("G({name})"), esn::groupoid_of(&s).unwrap()));
    }
    out.push(("chain4".into(), OrdGroupoid::from_poset(names("p", 4), chain_poset(4)).unwrap()));
    out.push(("crown".into(), OrdGroupoid::from_poset(names("q", 4), crown_poset()).unwrap()));
    out.push(("vee".into(), OrdGroupoid::from_poset(names("v", 3), vee_poset()).unwrap()));
    out.push((
        "P(Z2,vee)".into(),
        mcalister::semidirect_groupoid(&z2_on_vee()).unwrap(),
    ));
    let z3 = semigroup::cyclic_group(3);
    let g = Groupoid::from_group(z3.names().to_vec(), &flat(&z3), 0, (0..3).map(|x| z3.inv(x)).collect()).unwrap();
    out.push(("Z3".into(), OrdGroupoid::with_equality_order(g)));
    for base in ["G(I2)", "chain4", "G(B2)"] {
        let g = out.iter().find(|(n, _)| n == base).unwrap().1.clone();
        out.push((format!("bar {base}"), cancellative::bar_groupoid(&g).unwrap().groupoid));
    }
    out
}

pub fn flat(s: &InvSemigroup) -> Vec<usize> {
    s.table_rows().concat()
}

/// Left cancellative categories.
pub fn left_cancellative_categories() -> Vec<(String, FinCategory)> {
    let mut out = vec![
        ("chain3".to_string(), FinCategory::from_poset(&names("c", 3), &chain_poset(3)).unwrap()),
        ("crown".to_string(), FinCategory::from_poset(&names("q", 4), &crown_poset()).unwrap()),
        ("vee".to_string(), FinCategory::from_poset(&names("v", 3), &vee_poset()).unwrap()),
        ("Z4".to_string(), FinCategory::from_monoid(&semigroup::cyclic_group(4)).unwrap()),
        ("S3".to_string(), FinCategory::from_monoid(&semigroup::symmetric_group(3)).unwrap()),
    ];
    let v = names("x", 3);
    let square = [("f".to_string(), 0, 1), ("g".to_string(), 1, 2), ("h".to_string(), 0, 2)];
    out.push(("free path".into(), FinCategory::free_category(&v, &square[..2], 2).unwrap()));
    out.push(("free triangle".into(), FinCategory::free_category(&v, &square, 2).unwrap()));
    let parallel = [("a".to_string(), 0, 1), ("b".to_string(), 0, 1), ("c".to_string(), 1, 2)];
    out.push(("free parallel".into(), FinCategory::free_category(&v, &parallel, 2).unwrap()));
    for (name, g) in groupoids() {
        if ["G(I2)", "G(B2)", "chain4", "crown", "P(Z2,vee)", "G(diamond2)"].contains(&name.as_str()) {
            out.push((format!("L({name})"), cancellative::l_of(&g).unwrap().category));
        }
    }
    out
}

/// Actions of categories on principal groupoids.
pub fn actions() -> Vec<(String, GroupoidAction)> {
    let mut out = Vec::new();
    for (name, g) in groupoids().into_iter().filter(|(_, g)| g.len() <= 12) {
        let c = affine::canonical_affine(&g).unwrap();
        out.push((format!("canonical {name}"), c.system.base));
    }
    let chain = FinCategory::from_poset(&names("p", 3), &chain_poset(3)).unwrap();
    out.push(("rooted chain3".into(), affine::rooted_system(&chain, 0).unwrap().system.base));
    let z2 = FinCategory::from_monoid(&semigroup::cyclic_group(2)).unwrap();
    out.push(("rooted Z2".into(), affine::rooted_system(&z2, 0).unwrap().system.base));
    let crown = FinCategory::from_poset(&names("q", 4), &crown_poset()).unwrap();
    let objects = crown.clone();
    out.push((
        "crown on objects".into(),
        GroupoidAction::new(crown, Groupoid::discrete(names("o", 4)), (0..4).collect(), |a, x| {
            (objects.dom(a) == x).then(|| objects.cod(a))
        })
        .unwrap(),
    ));
    let z3 = semigroup::cyclic_group(3);
    let cz3 = FinCategory::from_monoid(&z3).unwrap();
    let table: Vec<Vec<Option<usize>>> = (0..3).map(|a| (0..3).map(|x| Some(z3.mul(a, x))).collect()).collect();
    out.push((
        "R* of Z3 on itself".into(),
        affine::rstar_system(cz3, z3.names(), vec![0; 3], &table).unwrap().action,
    ));
    out
}

/// A random McAlister triple: a bottom `⊥` fixed by `G`, below `G × Q` for a
/// random forest `Q`; `Y = ⊥ ∪ {1}×Q ∪ ⋃ {g}×D_g` for random down-sets `D_g`.
pub fn random_triple(r: &mut impl Rng) -> McAlisterTriple {
    let groups = [
        semigroup::cyclic_group(1),
        semigroup::cyclic_group(2),
        semigroup::cyclic_group(3),
        semigroup::direct_product(&semigroup::cyclic_group(2), &semigroup::cyclic_group(2)),
        semigroup::cyclic_group(5),
        semigroup::symmetric_group(3),
        semigroup::cyclic_group(7),
    ];
    let group = groups[r.random_range(0..groups.len())].clone();
    let m = group.len();
    let q = r.random_range(1..=(7 / m).max(1));
    // forest: each node's parent is an earlier node or none
    let parent: Vec<Option<usize>> = (0..q).map(|i| (i > 0 && r.random_bool(0.6)).then(|| r.random_range(0..i))).collect();
    let below_q = |a: usize, b: usize| {
        let mut x = Some(b);
        while let Some(v) = x {
            if v == a {
                return true;
            }
            x = parent[v];
        }
        false
    };
    let k = 1 + m * q;
    let point = |g: usize, p: usize| 1 + g * q + p;
    let leq = BoolMatrix::from_fn(k, |i, j| {
        i == 0 || (i == j) || (j > 0 && (i - 1) / q == (j - 1) / q && below_q((i - 1) % q, (j - 1) % q))
    });
    let mut pts = vec!["bot".to_string()];
    for g in 0..m {
        for p in 0..q {
            pts.push(format!("({},q{p})", group.name(g)));
        }
    }
    let action: Vec<Vec<usize>> = (0..m)
        .map(|g| {
            (0..k)
                .map(|x| if x == 0 { 0 } else { point(group.mul(g, (x - 1) / q), (x - 1) % q) })
                .collect()
        })
        .collect();
    let one = group.identity().unwrap();
    let mut y = vec![0];
    for g in 0..m {
        for p in 0..q {
            // down-closed: keep p iff every ancestor-or-self passes a coin chosen per node
            let keep = g == one || {
                let mut x = Some(p);
                let mut ok = true;
                while let Some(v) = x {
                    ok &= (v * 31 + g * 17 + q) % 3 != 0 && r.random_bool(0.8);
                    x = parent[v];
                }
                ok
            };
            if keep {
                y.push(point(g, p));
            }
        }
    }
    // close downwards so Y is an order ideal
    let mut in_y = vec![false; k];
    for &p in &y {
        for b in 0..k {
            if leq.get(b, p) {
                in_y[b] = true;
            }
        }
    }
    let y: Vec<usize> = (0..k).filter(|&p| in_y[p]).collect();
    let base = GroupPosetAction::new(group, pts, leq, &action).unwrap();
    mcalister::validate_mcalister_triple(base, y).unwrap()
}

pub fn triple_raw(t: &McAlisterTriple) -> esnkit::io::RawTriple {
    esnkit::io::RawTriple {
        group: t.base.group().to_raw(),
        points: t.base.points().to_vec(),
        leq: t.base.order().rows(),
        action: t.base.action_rows(),
        y: t.y().to_vec(),
    }
}

/// The shipped fixture files, by file name.
pub fn fixtures() -> Vec<(&'static str, esnkit::io::Structure)> {
    use esnkit::io::{RawMorphism, Structure};
    use esnkit::semigroup::*;
    let sg = |s: InvSemigroup| Structure::InverseSemigroup(s.to_raw());
    let og = |g: &OrdGroupoid| Structure::OrderedGroupoid(g.to_raw());
    let i2 = symmetric_inverse_monoid(2);
    let crown = OrdGroupoid::from_poset(names("q", 4), crown_poset()).unwrap();
    let vee = mcalister::validate_mcalister_triple(z2_on_vee(), vec![0, 2]).unwrap();
    let chain = FinCategory::from_poset(&names("p", 3), &chain_poset(3)).unwrap();
    let crown_cat = FinCategory::from_poset(&names("q", 4), &crown_poset()).unwrap();
    let crown_action = GroupoidAction::new(crown_cat.clone(), Groupoid::discrete(names("o", 4)), (0..4).collect(), |a, x| {
        (crown_cat.dom(a) == x).then(|| crown_cat.cod(a))
    })
    .unwrap();
    vec![
        ("I2.json", sg(i2.clone())),
        ("I3.json", sg(symmetric_inverse_monoid(3))),
        ("B2.json", sg(brandt(2))),
        ("C4.json", sg(cyclic_group(4))),
        ("chain4.json", sg(chain_semilattice(4))),
        ("diamond2.json", sg(diamond_semilattice(2))),
        ("G_I2.json", og(&esn::groupoid_of(&i2).unwrap())),
        ("crown.json", og(&crown)),
        ("L_B2.json", Structure::Category(cancellative::l_of(&esn::groupoid_of(&brandt(2)).unwrap()).unwrap().category.to_raw())),
        ("chain3_category.json", Structure::Category(chain.to_raw())),
        ("vee_triple.json", Structure::McAlisterTriple(triple_raw(&vee))),
        ("crown_action.json", Structure::AffineSystem(crown_action.to_raw())),
        ("rooted_chain3.json", Structure::AffineSystem(affine::rooted_system(&chain, 0).unwrap().system.to_raw())),
        (
            "diamond_to_chain.json",
            Structure::Morphism(RawMorphism {
                source: Box::new(sg(diamond_semilattice(2))),
                target: Box::new(sg(chain_semilattice(2))),
                map: vec![0, 1, 1, 1],
                category_map: None,
            }),
        ),
    ]
}

pub fn fixture_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}
