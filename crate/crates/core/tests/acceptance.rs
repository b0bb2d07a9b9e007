//! Acceptance gate: one line per criterion, nonzero exit if any fails.

mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use esnkit::affine;
use esnkit::cancellative;
use esnkit::esn;
use esnkit::groupoid::{self, OrdGroupoid};
use esnkit::io;
use esnkit::mcalister;
use esnkit::semigroup::{self, InvSemigroup};
use esnkit::util::BoolMatrix;
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Product reconstruction equals the table on every pair.
fn reconstruction() -> Outcome {
    use semigroup::*;
    let corpus = [
        ("I1", symmetric_inverse_monoid(1)),
        ("I2", symmetric_inverse_monoid(2)),
        ("I3", symmetric_inverse_monoid(3)),
        ("C4", cyclic_group(4)),
        ("chain8", chain_semilattice(8)),
        ("B2", brandt(2)),
    ];
    let mut pairs = 0;
    for (name, s) in &corpus {
        let rows = s.table_rows();
        for a in 0..s.len() {
            for b in 0..s.len() {
                let got = s.reconstruct_full_product(a, b).map_err(|e| format!("{name}: {e}"))?;
                ensure(got == rows[a][b], || format!("{name}: ({a}, {b})"))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{} structures, {pairs} pairs", corpus.len()))
}

/// `S(G(S)) = S` and `G(S(G)) = G` index for index.
fn esn_round_trips() -> Outcome {
    let sg = common::semigroups();
    let mut count = 0;
    for (name, s) in &sg {
        esn::verify_esn_roundtrip(s).map_err(|e| format!("{name}: {e}"))?;
        count += 1;
    }
    let mut gcount = 0;
    for (name, g) in common::groupoids().iter().filter(|(_, g)| g.is_inductive()) {
        esn::verify_esn_roundtrip_g(g).map_err(|e| format!("{name}: {e}"))?;
        gcount += 1;
    }
    ensure(count + gcount >= 20, || format!("corpus too small: {}", count + gcount))?;
    Ok(format!("{count} semigroups, {gcount} inductive groupoids"))
}

fn pseudoproducts() -> Outcome {
    let mut pairs = 0;
    let corpus = common::groupoids();
    for (name, g) in &corpus {
        for x in 0..g.len() {
            for y in 0..g.len() {
                let (fast, slow) = (g.pseudoproduct_fast(x, y), g.pseudoproduct_by_maximum(x, y));
                ensure(fast == slow, || format!("{name}: ({x}, {y}) gives {fast:?} and {slow:?}"))?;
                pairs += 1;
            }
        }
    }
    let g = esn::groupoid_of(&semigroup::symmetric_inverse_monoid(2)).map_err(|e| e.to_string())?;
    let p = |x, y| g.pseudoproduct_fast(x, y).expect("inductive");
    let mut triples = 0;
    for x in 0..g.len() {
        for y in 0..g.len() {
            for z in 0..g.len() {
                ensure(p(p(x, y), z) == p(x, p(y, z)), || format!("G(I2): ({x}, {y}, {z})"))?;
                triples += 1;
            }
        }
    }
    ensure(triples == 343, || format!("{triples} triples"))?;
    Ok(format!("{} groupoids, {pairs} pairs; {triples} triples of G(I2)", corpus.len()))
}

fn p_semigroups() -> Outcome {
    let mut r = common::rng(2024);
    let mut count = 0;
    let mut sizes = std::collections::BTreeSet::new();
    for i in 0..60 {
        let t = common::random_triple(&mut r);
        let (gs, xs) = (t.base.group().len(), t.base.point_count());
        ensure(gs <= 8 && xs <= 8, || format!("triple {i}: |G| = {gs}, |X| = {xs}"))?;
        let rep = mcalister::verify_p_semigroup(&t).map_err(|e| format!("triple {i}: {e}"))?;
        // oracle: pairs (y, g) with g⁻¹·y in Y
        let g = t.base.group();
        let expected = t
            .y()
            .iter()
            .flat_map(|&y| (0..g.len()).map(move |h| (y, h)))
            .filter(|&(y, h)| t.contains(t.base.apply(g.inv(h), y)))
            .count();
        ensure(rep.semigroup.len() == expected, || format!("triple {i}: size {} vs {expected}", rep.semigroup.len()))?;
        ensure(rep.holds(), || format!("triple {i}: {:?}", rep.embedding))?;
        sizes.insert(rep.semigroup.len());
        count += 1;
    }
    ensure(count >= 50, || format!("{count} triples"))?;
    let vee = mcalister::validate_mcalister_triple(common::z2_on_vee(), vec![0, 2]).map_err(|e| e.to_string())?;
    let hand = mcalister::verify_p_semigroup(&vee).map_err(|e| e.to_string())?;
    ensure(hand.holds() && hand.semigroup.len() == 3, || format!("hand example has {} elements", hand.semigroup.len()))?;
    Ok(format!("{count} random triples ({} distinct sizes), hand example has 3 elements", sizes.len()))
}

fn cancellative_round_trips() -> Outcome {
    let cats = common::left_cancellative_categories();
    for (name, c) in &cats {
        let r = cancellative::verify_lg_roundtrip(c).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.holds(), || format!("{name}: {:?}", r.report))?;
    }
    ensure(cats.len() >= 10, || format!("{} categories", cats.len()))?;
    let gs = common::groupoids();
    let mut bars = 0;
    let mut rooted = 0;
    for (name, g) in gs.iter().filter(|(_, g)| g.len() <= 40) {
        let b = cancellative::verify_bar(g).map_err(|e| format!("{name}: {e}"))?;
        ensure(b.alpha.is_some() && b.kappa_ordered && b.maximal_identities, || format!("Ḡ of {name}"))?;
        bars += 1;
        if g.maximum_identity().is_some() {
            let r = cancellative::verify_rooted_groupoid(g).map_err(|e| format!("{name}: {e}"))?;
            ensure(r.holds(), || format!("rooted {name}: {r:?}"))?;
            rooted += 1;
        }
    }
    Ok(format!("{} categories, α on {bars} groupoids, G ≅ G^l(L(G)) on {rooted}", cats.len()))
}

fn e_unitary_oracle(s: &InvSemigroup) -> bool {
    let rows = s.table_rows();
    let idem = |x: usize| rows[x][x] == x;
    (0..s.len()).all(|e| !idem(e) || (0..s.len()).all(|x| rows[x][e] != e || idem(x)))
}

fn e_unitary_cancellative() -> Outcome {
    let mut monoids = common::monoids();
    for (name, s) in common::semigroups() {
        if s.identity().is_none() {
            monoids.push((format!("{name}+1"), semigroup::adjoin_identity(&s, "1")));
        }
    }
    let (mut yes, mut no) = (0, 0);
    for (name, s) in &monoids {
        let r = cancellative::e_unitary_iff_cancellative(s).map_err(|e| format!("{name}: {e}"))?;
        let oracle = e_unitary_oracle(s);
        ensure(r.e_unitary == oracle && r.agree(), || format!("{name}: {r:?}, oracle {oracle}"))?;
        if oracle {
            yes += 1;
        } else {
            let (x, e) = r.unitary_failure.ok_or_else(|| format!("{name}: no unitary witness"))?;
            ensure(s.mul(x, e) == e && !s.is_idempotent(x), || format!("{name}: bad witness"))?;
            ensure(r.right_failure.is_some(), || format!("{name}: no cancellation witness"))?;
            no += 1;
        }
    }
    ensure(monoids.len() >= 20 && yes > 0 && no > 0, || format!("{yes} E-unitary, {no} not"))?;
    Ok(format!("{} monoids: {yes} E-unitary, {no} not, each with witnesses", monoids.len()))
}

fn affine_well_defined() -> Outcome {
    let actions = common::actions();
    let (mut pairs, mut star, mut not_star) = (0, 0, 0);
    for (name, a) in &actions {
        let j = affine::j_of(a).map_err(|e| format!("{name}: {e}"))?;
        pairs += j.representative_pairs;
        let orbit = affine::orbit_condition(a);
        let s = j.groupoid.is_star_inductive();
        ensure(orbit == s, || format!("{name}: orbit condition {orbit}, *-inductive {s}"))?;
        if s {
            star += 1;
        } else {
            not_star += 1;
        }
    }
    ensure(star > 0 && not_star > 0, || format!("{star} *-inductive, {not_star} not"))?;
    Ok(format!("{} systems, {pairs} representative pairs; {star} *-inductive, {not_star} not", actions.len()))
}

fn universality() -> Outcome {
    let gs = common::groupoids();
    let mut count = 0;
    for (name, g) in gs.iter().filter(|(_, g)| g.len() <= 40) {
        let u = affine::verify_affine_universality(g).map_err(|e| format!("{name}: {e}"))?;
        ensure(u.holds(), || format!("{name}"))?;
        count += 1;
    }
    for (name, s) in [("I2", semigroup::symmetric_inverse_monoid(2)), ("B2", semigroup::brandt(2))] {
        let r = affine::semigroup_from_affine(&s).map_err(|e| format!("{name}: {e}"))?;
        ensure(r.isomorphism.is_some(), || format!("{name} not recovered"))?;
    }
    Ok(format!("{count} groupoids; I2 and B2 recovered"))
}

/// Flips 1–3 entries of the order, then closes transitively half the time.
fn mutate(r: &mut impl Rng, leq: &BoolMatrix) -> BoolMatrix {
    let n = leq.size();
    let mut m = leq.clone();
    for _ in 0..r.random_range(1..=3) {
        let (i, j) = (r.random_range(0..n), r.random_range(0..n));
        if i != j {
            m.set(i, j, !m.get(i, j));
        }
    }
    if r.random_bool(0.5) {
        m.closure()
    } else {
        m
    }
}

fn axiom_systems() -> Outcome {
    let base: Vec<(String, OrdGroupoid)> = common::groupoids().into_iter().filter(|(_, g)| g.len() <= 20).collect();
    let mut r = common::rng(99);
    let (mut valid, mut rejected, mut posets_rejected) = (0, 0, 0);
    for i in 0..1000 {
        let (name, g) = &base[r.random_range(0..base.len())];
        let leq = if i % 4 == 0 { g.order().clone() } else { mutate(&mut r, g.order()) };
        let a = groupoid::check_classical_axioms(g, &leq).is_ok();
        let b = groupoid::check_alternative_axioms(g, &leq).is_ok();
        ensure(a == b, || format!("{name}, candidate {i}: classical {a}, alternative {b}"))?;
        if a {
            valid += 1;
        } else {
            rejected += 1;
            if leq.partial_order_violation().is_none() {
                posets_rejected += 1;
            }
        }
    }
    ensure(valid > 0 && posets_rejected > 0, || format!("{valid} valid, {posets_rejected} partial orders rejected"))?;
    Ok(format!("1000 candidates: {valid} valid, {rejected} rejected ({posets_rejected} of them partial orders)"))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_esnkit")).args(args).output().expect("run esnkit");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn format_stability() -> Outcome {
    let dir = common::fixture_dir();
    let mut files = 0;
    let mut entries: Vec<_> = std::fs::read_dir(&dir).map_err(|e| e.to_string())?.collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    entries.sort_by_key(|e| e.path());
    for e in entries {
        let bytes = std::fs::read(e.path()).map_err(|e| e.to_string())?;
        let s = io::parse_bytes(&bytes).map_err(|err| format!("{}: {err}", e.path().display()))?;
        ensure(io::emit(&s).as_bytes() == bytes.as_slice(), || format!("{} not byte-stable", e.path().display()))?;
        let (code, _) = run_cli(&["validate", e.path().to_str().unwrap()]);
        ensure(code == 0, || format!("validate {} exited {code}", e.path().display()))?;
        files += 1;
    }
    let path = |f: &str| dir.join(f).to_string_lossy().into_owned();
    let (code, out) = run_cli(&["verify", "esn", &path("I2.json")]);
    ensure(code == 0 && out.contains("S(G(S)) = S on-the-nose"), || format!("verify esn: {code}\n{out}"))?;
    let (code, out) = run_cli(&["iso", &path("I2.json"), &path("I2.json")]);
    ensure(code == 0 && out.contains("0 -> 0"), || format!("iso: {code}"))?;
    let (code, _) = run_cli(&["verify", "p-theorem", &path("I2.json")]);
    ensure(code == 1, || format!("failing check exited {code}"))?;
    let (code, _) = run_cli(&["validate", &path("missing.json")]);
    ensure(code == 2, || format!("missing file exited {code}"))?;
    let (code, _) = run_cli(&["verify", "esn", &path("crown_action.json")]);
    ensure(code == 2, || format!("wrong kind exited {code}"))?;
    let (code, _) = run_cli(&["bogus"]);
    ensure(code == 2, || format!("bad verb exited {code}"))?;
    Ok(format!("{files} fixtures byte-stable; exit codes 0, 1, 2 as specified"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("product reconstruction", reconstruction, 1),
        ("semigroup/groupoid round trips on-the-nose", esn_round_trips, 5),
        ("pseudoproduct oracle and associativity", pseudoproducts, 5),
        ("P-semigroups from random triples", p_semigroups, 30),
        ("cancellative category round trips", cancellative_round_trips, 30),
        ("E-unitary iff cancellative", e_unitary_cancellative, 5),
        ("affine quotient well defined, orbit condition", affine_well_defined, 30),
        ("affine universality and recovery", universality, 60),
        ("axiom systems agree on 1000 candidates", axiom_systems, 30),
        ("format stability and exit codes", format_stability, 30),
    ];
    let mut failed = 0;
    for (i, (name, f, secs)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let line = match outcome {
            Ok(detail) if took <= Duration::from_secs(*secs) => format!("PASS  {detail} [{took:.2?} < {secs}s]"),
            Ok(detail) => format!("FAIL  over budget: {detail} [{took:.2?} >= {secs}s]"),
            Err(why) => format!("FAIL  {why} [{took:.2?}]"),
        };
        if line.starts_with("FAIL") {
            failed += 1;
        }
        println!("criterion {:>2} {name}: {line}", i + 1);
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
