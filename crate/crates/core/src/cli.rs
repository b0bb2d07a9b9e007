//! Command implementations behind the `esnkit` binary. Each verb loads files,
//! calls one library operation per check and collects a deterministic report.

use std::fmt::Display;
use std::path::Path;

use serde_json::{json, Value};

use crate::affine::{self, AffineError, GroupoidAction};
use crate::cancellative::{self, CancellativeError};
use crate::category::{CategoryError, CategoryFunctor, FinCategory};
use crate::esn::{self, EsnError};
use crate::groupoid::{self, GroupoidError, OrdGroupoid, OrderedFunctor};
use crate::io::{self, RawMorphism, RawTriple, Structure};
use crate::iso;
use crate::mcalister::{self, GroupPosetAction, McAlisterError, McAlisterTriple};
use crate::semigroup::{self, InvSemigroup, SemigroupError, SemigroupMap};
use crate::util::BoolMatrix;

/// Exit status of a command.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Usage = 2,
}

/// Usage or I/O problem; reported on standard error with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct Section {
    pub file: String,
    pub kind: String,
    pub checks: Vec<Check>,
}

impl Section {
    fn new(file: &str, kind: &str) -> Section {
        Section {
            file: file.to_string(),
            kind: kind.to_string(),
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            detail: detail.into(),
        });
    }

    fn pass(&mut self, name: &str, detail: impl Into<String>) {
        self.check(name, true, detail);
    }

    fn fail(&mut self, name: &str, detail: impl Into<String>) {
        self.check(name, false, detail);
    }

    /// Records a library error as a failed check with a named witness.
    fn error(&mut self, name: &str, labels: &[String], e: &dyn Witnessed) {
        let w = e.witness_indices();
        let mut detail = e.to_string();
        if !w.is_empty() {
            detail.push_str(&format!("; witness: {}", witness(labels, &w)));
        }
        self.fail(name, detail);
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub sections: Vec<Section>,
    /// Structure or text emitted instead of a check list.
    pub output: Option<String>,
}

impl Report {
    fn new(command: &str) -> Report {
        Report {
            command: command.to_string(),
            ..Report::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| s.checks.iter().all(|c| c.pass))
    }

    pub fn status(&self) -> Status {
        if self.passed() {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn text(&self) -> String {
        if let Some(out) = &self.output {
            return out.clone();
        }
        let mut s = String::new();
        for sec in &self.sections {
            s.push_str(&format!("{} ({})\n", sec.file, sec.kind));
            for c in &sec.checks {
                let tag = if c.pass { "pass" } else { "FAIL" };
                match c.detail.as_str() {
                    "" => s.push_str(&format!("  {tag}  {}\n", c.name)),
                    d => s.push_str(&format!("  {tag}  {}: {d}\n", c.name)),
                }
            }
        }
        s.push_str(&format!("{}: {}\n", self.command, if self.passed() { "pass" } else { "FAIL" }));
        s
    }

    pub fn json(&self) -> String {
        let sections: Vec<Value> = self
            .sections
            .iter()
            .map(|sec| {
                let checks: Vec<Value> = sec
                    .checks
                    .iter()
                    .map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail}))
                    .collect();
                json!({"file": sec.file, "kind": sec.kind, "checks": checks})
            })
            .collect();
        let mut v = json!({"command": self.command, "pass": self.passed(), "sections": sections});
        if let Some(out) = &self.output {
            v["output"] = Value::String(out.clone());
        }
        io::emit_value(&v)
    }
}

/// Errors that point at element indices.
trait Witnessed: Display {
    fn witness_indices(&self) -> Vec<usize>;
}

macro_rules! witnessed {
    ($($t:ty => $f:expr),* $(,)?) => {
        $(impl Witnessed for $t {
            fn witness_indices(&self) -> Vec<usize> {
                let f: fn(&$t) -> Vec<usize> = $f;
                f(self)
            }
        })*
    };
}

witnessed! {
    SemigroupError => |e| e.witness(),
    GroupoidError => |e| e.witness(),
    CategoryError => |e| e.witness(),
    AffineError => |e| e.witness(),
    EsnError => |e| match e {
        EsnError::NotInductive(a, b) | EsnError::NotStarInductive(a, b) => vec![*a, *b],
        EsnError::ZeroNameClash(a) => vec![*a],
        EsnError::Groupoid(g) => g.witness(),
        EsnError::Semigroup(s) => s.witness(),
        _ => Vec::new(),
    },
    CancellativeError => |e| match e {
        CancellativeError::Category(c) => c.witness(),
        CancellativeError::Groupoid(g) => g.witness(),
        _ => Vec::new(),
    },
    McAlisterError => |e| match e {
        McAlisterError::Mt1NotIdeal { below, inside } => vec![*below, *inside],
        McAlisterError::Mt1NoMeet(a, b) | McAlisterError::MeetMissing(a, b) => vec![*a, *b],
        McAlisterError::Mt2(a) => vec![*a],
        _ => Vec::new(),
    },
    iso::IsoError => |_| Vec::new(),
}

fn boxed<E: Witnessed + 'static>(e: E) -> Box<dyn Witnessed> {
    Box::new(e)
}

/// `name` per index, falling back to `#i` for indices without a label.
pub fn witness(labels: &[String], w: &[usize]) -> String {
    w.iter()
        .map(|&i| labels.get(i).cloned().unwrap_or_else(|| format!("#{i}")))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &str) -> Result<Vec<u8>, UsageError> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::Read::read_to_end(&mut std::io::stdin(), &mut buf)?;
        Ok(buf)
    } else {
        std::fs::read(path).map_err(|e| UsageError(format!("{path}: {e}")))
    }
}

pub fn load(path: &str) -> Result<Structure, UsageError> {
    io::parse_bytes(&read_input(path)?).map_err(|e| UsageError(format!("{path}: {e}")))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn triple_of(raw: &RawTriple) -> Result<McAlisterTriple, McAlisterError> {
    let group = semigroup::validate_inverse_semigroup(raw.group.clone())?;
    let leq = BoolMatrix::from_rows(&raw.leq).ok_or(McAlisterError::ActionShape {
        rows: raw.leq.len(),
        cols: raw.leq.first().map_or(0, Vec::len),
        expected_rows: raw.points.len(),
        expected_cols: raw.points.len(),
    })?;
    let base = GroupPosetAction::new(group, raw.points.clone(), leq, &raw.action)?;
    mcalister::validate_mcalister_triple(base, raw.y.clone())
}

// ---------------------------------------------------------------- validate

pub fn validate(path: &str) -> Result<Report, UsageError> {
    let s = load(path)?;
    let mut report = Report::new("validate");
    let mut sec = Section::new(path, s.kind());
    let labels = s.labels();
    validate_structure(&s, &labels, &mut sec);
    report.sections.push(sec);
    Ok(report)
}

fn validate_structure(s: &Structure, labels: &[String], sec: &mut Section) {
    match s {
        Structure::InverseSemigroup(raw) => match semigroup::validate_inverse_semigroup(raw.clone()) {
            Ok(s) => sec.pass(
                "inverse semigroup",
                format!(
                    "{} elements, {} idempotents, monoid: {}, E-unitary: {}",
                    s.len(),
                    s.idempotents().count(),
                    yes(s.identity().is_some()),
                    yes(s.is_e_unitary())
                ),
            ),
            Err(e) => sec.error("inverse semigroup", labels, &e),
        },
        Structure::OrderedGroupoid(raw) => match groupoid::validate_ordered_groupoid(raw.clone()) {
            Ok(g) => sec.pass(
                "ordered groupoid",
                format!(
                    "{} elements, {} identities, inductive: {}, *-inductive: {}",
                    g.len(),
                    g.identities().len(),
                    yes(g.is_inductive()),
                    yes(g.is_star_inductive())
                ),
            ),
            Err(e) => sec.error("ordered groupoid", labels, &e),
        },
        Structure::Category(raw) => match FinCategory::from_raw(raw.clone()) {
            Ok(c) => sec.pass(
                "category",
                format!(
                    "{} arrows, {} objects, left cancellative: {}, right cancellative: {}",
                    c.len(),
                    c.identities().len(),
                    yes(c.is_left_cancellative()),
                    yes(c.is_right_cancellative())
                ),
            ),
            Err(e) => sec.error("category", labels, &e),
        },
        Structure::McAlisterTriple(raw) => match triple_of(raw) {
            Ok(t) => sec.pass(
                "McAlister triple",
                format!(
                    "|G| = {}, |X| = {}, |Y| = {}",
                    t.base.group().len(),
                    t.base.point_count(),
                    t.y().len()
                ),
            ),
            Err(e) => sec.error("McAlister triple", labels, &e),
        },
        Structure::AffineSystem(raw) => match GroupoidAction::from_raw(raw.clone()) {
            Ok(a) => {
                sec.pass(
                    "action",
                    format!("{} arrows acting on {} elements", a.category().len(), a.groupoid().len()),
                );
                match affine::validate_affine(a) {
                    Ok(_) => sec.pass("affine system", "right cancellative, π onto identities, right cancellation condition"),
                    Err(e) => sec.error("affine system", labels, &e),
                }
            }
            Err(e) => sec.error("action", labels, &e),
        },
        Structure::Morphism(m) => validate_morphism(m, labels, sec),
    }
}

fn validate_morphism(m: &RawMorphism, labels: &[String], sec: &mut Section) {
    let before = sec.checks.len();
    validate_structure(&m.source, &m.source.labels(), sec);
    validate_structure(&m.target, &m.target.labels(), sec);
    if sec.checks[before..].iter().any(|c| !c.pass) {
        return;
    }
    match (&*m.source, &*m.target) {
        (Structure::InverseSemigroup(a), Structure::InverseSemigroup(b)) => {
            let (a, b) = (
                semigroup::validate_inverse_semigroup(a.clone()).expect("validated"),
                semigroup::validate_inverse_semigroup(b.clone()).expect("validated"),
            );
            let r = SemigroupMap::new(&a, &b, m.map.clone()).and_then(|f| Ok((f.is_prehomomorphism()?, f.is_homomorphism()?)));
            match r {
                Ok((pre, hom)) => {
                    sec.check("prehomomorphism", pre, format!("homomorphism: {}", yes(hom)));
                }
                Err(e) => sec.error("prehomomorphism", labels, &e),
            }
        }
        (Structure::OrderedGroupoid(a), Structure::OrderedGroupoid(b)) => {
            let a = groupoid::validate_ordered_groupoid(a.clone()).expect("validated");
            let b = groupoid::validate_ordered_groupoid(b.clone()).expect("validated");
            match OrderedFunctor::new(&a, &b, m.map.clone()) {
                Ok(f) => {
                    let fl = f.flags();
                    sec.check(
                        "ordered functor",
                        fl.ordered,
                        format!(
                            "inductive: {}, injective: {}, surjective: {}, covering: {}",
                            yes(fl.inductive),
                            yes(fl.injective),
                            yes(fl.surjective),
                            yes(fl.covering)
                        ),
                    );
                }
                Err(e) => sec.error("ordered functor", labels, &e),
            }
        }
        (Structure::Category(a), Structure::Category(b)) => {
            let a = FinCategory::from_raw(a.clone()).expect("validated");
            let b = FinCategory::from_raw(b.clone()).expect("validated");
            match CategoryFunctor::new(&a, &b, m.map.clone()) {
                Ok(f) => {
                    let r = f.equivalence_report();
                    sec.pass(
                        "functor",
                        format!(
                            "faithful: {}, full: {}, essentially surjective: {}",
                            yes(r.faithful()),
                            yes(r.full()),
                            yes(r.essentially_surjective())
                        ),
                    );
                }
                Err(e) => sec.error("functor", labels, &e),
            }
        }
        (Structure::AffineSystem(a), Structure::AffineSystem(b)) => {
            let a = GroupoidAction::from_raw(a.clone()).expect("validated");
            let b = GroupoidAction::from_raw(b.clone()).expect("validated");
            let cmap = m.category_map.clone().unwrap_or_default();
            match affine::affine_morphism_check(&a, &b, &cmap, &m.map) {
                Ok(f) => sec.pass(
                    "affine morphism",
                    format!(
                        "E1: {}, E2: {}, E3: {}, equivalence: {}",
                        yes(f.e1),
                        yes(f.e2),
                        yes(f.e3),
                        yes(f.is_equivalence())
                    ),
                ),
                Err(e) => sec.error("affine morphism", labels, &e),
            }
        }
        _ => sec.fail("morphism", "source and target kinds differ"),
    }
}

// ---------------------------------------------------------------- gen

pub fn generate(family: &str, n: usize) -> Result<String, UsageError> {
    let s = semigroup::generate_standard(family, n)?;
    Ok(io::emit(&Structure::InverseSemigroup(s.to_raw())))
}

// ---------------------------------------------------------------- convert

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Groupoid,
    Semigroup,
    Semigroup0,
    Lcat,
    Rcat,
    Bar,
    J,
}

/// A structure that must validate before conversion; failures exit with 1.
enum Loaded {
    Semigroup(InvSemigroup),
    Groupoid(OrdGroupoid),
    Category(FinCategory),
    Action(GroupoidAction),
}

fn load_valid(path: &str, s: &Structure, sec: &mut Section) -> Option<Loaded> {
    let labels = s.labels();
    match s {
        Structure::InverseSemigroup(r) => match semigroup::validate_inverse_semigroup(r.clone()) {
            Ok(x) => Some(Loaded::Semigroup(x)),
            Err(e) => {
                sec.error("inverse semigroup", &labels, &e);
                None
            }
        },
        Structure::OrderedGroupoid(r) => match groupoid::validate_ordered_groupoid(r.clone()) {
            Ok(x) => Some(Loaded::Groupoid(x)),
            Err(e) => {
                sec.error("ordered groupoid", &labels, &e);
                None
            }
        },
        Structure::Category(r) => match FinCategory::from_raw(r.clone()) {
            Ok(x) => Some(Loaded::Category(x)),
            Err(e) => {
                sec.error("category", &labels, &e);
                None
            }
        },
        Structure::AffineSystem(r) => match GroupoidAction::from_raw(r.clone()) {
            Ok(x) => Some(Loaded::Action(x)),
            Err(e) => {
                sec.error("action", &labels, &e);
                None
            }
        },
        _ => {
            sec.fail("load", format!("{path}: {} is not supported here", s.kind()));
            None
        }
    }
}

fn unsupported(to: Target, kind: &str) -> UsageError {
    UsageError(format!("cannot convert {kind} with --to {to:?}").to_lowercase())
}

pub fn convert(to: Target, path: &str) -> Result<Report, UsageError> {
    let s = load(path)?;
    let mut report = Report::new("convert");
    let mut sec = Section::new(path, s.kind());
    let kind = s.kind();
    let allowed = match to {
        Target::Groupoid => matches!(s, Structure::InverseSemigroup(_) | Structure::Category(_)),
        Target::Semigroup | Target::Semigroup0 => matches!(s, Structure::OrderedGroupoid(_)),
        Target::Lcat | Target::Rcat | Target::Bar => {
            matches!(s, Structure::OrderedGroupoid(_) | Structure::InverseSemigroup(_))
        }
        Target::J => matches!(s, Structure::AffineSystem(_)),
    };
    if !allowed {
        return Err(unsupported(to, kind));
    }
    let Some(loaded) = load_valid(path, &s, &mut sec) else {
        report.sections.push(sec);
        return Ok(report);
    };
    let labels = s.labels();
    let out: Result<Structure, Box<dyn Witnessed>> = (|| {
        let as_groupoid = |l: &Loaded| -> Result<OrdGroupoid, Box<dyn Witnessed>> {
            match l {
                Loaded::Groupoid(g) => Ok(g.clone()),
                Loaded::Semigroup(s) => esn::groupoid_of(s).map_err(|e| Box::new(e) as Box<dyn Witnessed>),
                _ => unreachable!("checked above"),
            }
        };
        Ok(match (to, &loaded) {
            (Target::Groupoid, Loaded::Semigroup(s)) => Structure::OrderedGroupoid(esn::groupoid_of(s).map_err(boxed)?.to_raw()),
            (Target::Groupoid, Loaded::Category(c)) => {
                Structure::OrderedGroupoid(cancellative::g_of_left(c).map_err(boxed)?.groupoid.to_raw())
            }
            (Target::Semigroup, Loaded::Groupoid(g)) => Structure::InverseSemigroup(esn::semigroup_of(g).map_err(boxed)?.to_raw()),
            (Target::Semigroup0, Loaded::Groupoid(g)) => {
                Structure::InverseSemigroup(esn::semigroup_of_with_zero(g).map_err(boxed)?.to_raw())
            }
            (Target::Lcat, l) => Structure::Category(cancellative::l_of(&as_groupoid(l)?).map_err(boxed)?.category.to_raw()),
            (Target::Rcat, l) => Structure::Category(cancellative::r_of(&as_groupoid(l)?).map_err(boxed)?.category.to_raw()),
            (Target::Bar, l) => {
                Structure::OrderedGroupoid(cancellative::bar_groupoid(&as_groupoid(l)?).map_err(boxed)?.groupoid.to_raw())
            }
            (Target::J, Loaded::Action(a)) => Structure::OrderedGroupoid(affine::j_of(a).map_err(boxed)?.groupoid.to_raw()),
            _ => unreachable!("checked above"),
        })
    })();
    match out {
        Ok(st) => {
            sec.pass("convert", format!("{} to {}", kind, st.kind()));
            report.output = Some(io::emit(&st));
        }
        Err(e) => sec.error("convert", &labels, e.as_ref()),
    }
    report.sections.push(sec);
    Ok(report)
}

// ---------------------------------------------------------------- verify

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Esn,
    PTheorem,
    Rooted,
    AffineUniversality,
    LemmaSuite,
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Run the heuristic triple search on semigroup inputs.
    pub search: bool,
    /// Root identity, by arrow name, for rooted categories.
    pub root: Option<String>,
}

pub fn verify(suite: Suite, paths: &[String], opts: &VerifyOptions) -> Result<Report, UsageError> {
    let mut report = Report::new(match suite {
        Suite::Esn => "verify esn",
        Suite::PTheorem => "verify p-theorem",
        Suite::Rooted => "verify rooted",
        Suite::AffineUniversality => "verify affine-universality",
        Suite::LemmaSuite => "verify lemma-suite",
    });
    if paths.is_empty() {
        return Err(UsageError("no input files".into()));
    }
    for path in paths {
        let s = load(path)?;
        let mut sec = Section::new(path, s.kind());
        let supported = match suite {
            Suite::Esn => matches!(s, Structure::InverseSemigroup(_) | Structure::OrderedGroupoid(_)),
            Suite::PTheorem => matches!(s, Structure::InverseSemigroup(_) | Structure::McAlisterTriple(_)),
            Suite::Rooted => matches!(s, Structure::Category(_) | Structure::OrderedGroupoid(_)),
            Suite::AffineUniversality | Suite::LemmaSuite => !matches!(s, Structure::Morphism(_) | Structure::McAlisterTriple(_)),
        };
        if !supported {
            return Err(UsageError(format!("{path}: {} is not supported by {}", s.kind(), report.command)));
        }
        let labels = s.labels();
        if let Structure::McAlisterTriple(raw) = &s {
            verify_triple(raw, &labels, &mut sec);
        } else if let Some(l) = load_valid(path, &s, &mut sec) {
            match suite {
                Suite::Esn => verify_esn(&l, &labels, &mut sec),
                Suite::PTheorem => verify_p(&l, &labels, opts, &mut sec),
                Suite::Rooted => verify_rooted(&l, &labels, opts, &mut sec)?,
                Suite::AffineUniversality => verify_affine(&l, &labels, &mut sec),
                Suite::LemmaSuite => verify_lemmas(&l, &labels, &mut sec),
            }
        }
        report.sections.push(sec);
    }
    Ok(report)
}

fn verify_esn(l: &Loaded, labels: &[String], sec: &mut Section) {
    match l {
        Loaded::Semigroup(s) => match esn::verify_esn_roundtrip(s) {
            Ok(_) => sec.pass("S(G(S)) = S on-the-nose", format!("{} elements, identity map", s.len())),
            Err(e) => sec.error("S(G(S)) = S on-the-nose", labels, &e),
        },
        Loaded::Groupoid(g) => match esn::verify_esn_roundtrip_g(g) {
            Ok(_) => sec.pass("G(S(G)) = G on-the-nose", format!("{} elements, identity map", g.len())),
            Err(e) => sec.error("G(S(G)) = G on-the-nose", labels, &e),
        },
        _ => unreachable!("filtered by kind"),
    }
}

fn verify_triple(raw: &RawTriple, labels: &[String], sec: &mut Section) {
    let t = match triple_of(raw) {
        Ok(t) => t,
        Err(e) => return sec.error("McAlister triple", labels, &e),
    };
    sec.pass("McAlister triple", "MT1, MT2, MT3 hold");
    match mcalister::verify_p_semigroup(&t) {
        Ok(r) => {
            let size = r.semigroup.len();
            sec.check("P-semigroup", true, format!("{size} elements, inverse semigroup"));
            sec.check("E-unitary", r.e_unitary, "");
            sec.check("idempotents ≅ Y", r.idempotents_match_y.is_some(), "order isomorphism");
            sec.check("maximum group image ≅ G", r.group_image.is_some(), "");
            let e = &r.embedding;
            sec.check(
                "G(P) embeds in P(G,X) as an enlargement",
                e.verdict == mcalister::EmbeddingVerdict::WitnessFound,
                format!(
                    "ordered embedding: {}, enlargement: {}, onto G: {}",
                    yes(e.ordered_embedding),
                    yes(e.enlargement),
                    yes(e.projection_onto_group)
                ),
            );
        }
        Err(e) => sec.error("P-semigroup", labels, &e),
    }
}

fn verify_p(l: &Loaded, labels: &[String], opts: &VerifyOptions, sec: &mut Section) {
    let Loaded::Semigroup(s) = l else { unreachable!("filtered by kind") };
    match s.e_unitary_violation() {
        None => sec.pass("E-unitary", ""),
        Some((e, x)) => {
            sec.fail("E-unitary", format!("idempotent below a non-idempotent; witness: {}", witness(labels, &[e, x])));
            return;
        }
    }
    match mcalister::max_group_image(s) {
        Ok(img) => sec.check(
            "σ injective on each domain class",
            img.is_star_injective(s),
            format!("maximum group image has {} elements", img.group.len()),
        ),
        Err(e) => return sec.error("maximum group image", labels, &e),
    };
    if !opts.search {
        sec.pass("triple search", "skipped; pass --search to run the heuristic search");
        return;
    }
    match mcalister::search_triple(s) {
        Ok(r) => match r.isomorphism {
            Some(_) => sec.pass("triple search", "witness found: S ≅ P(G,X,Y)"),
            None => sec.pass("triple search", format!("no witness found (heuristic, not a refutation): {}", r.note)),
        },
        Err(e) => sec.error("triple search", labels, &e),
    }
}

fn verify_rooted(l: &Loaded, labels: &[String], opts: &VerifyOptions, sec: &mut Section) -> Result<(), UsageError> {
    match l {
        Loaded::Category(c) => {
            let one = match &opts.root {
                Some(name) => {
                    let i = c.index_of(name).ok_or_else(|| UsageError(format!("no arrow named {name:?}")))?;
                    if !c.is_identity(i) {
                        return Err(UsageError(format!("{name:?} is not an identity")));
                    }
                    i
                }
                None => match c.weak_terminals().first() {
                    Some(&one) => one,
                    None => {
                        sec.fail("weak terminal identity", "none exists");
                        return Ok(());
                    }
                },
            };
            if let Err(e) = c.require_left_cancellative() {
                sec.error("left cancellative", labels, &e);
                return Ok(());
            }
            match cancellative::verify_rooted_category(c, one) {
                Ok(r) => {
                    sec.pass("root", c.name(one).to_string());
                    sec.check("C ≃ L(G^l(C))", r.equivalence.is_equivalence(), format!("root preserved: {}", yes(r.root_preserved)));
                    sec.check(
                        "allowable pullbacks give an inverse monoid with zero",
                        !r.allowable_pullbacks || (r.star_inductive && r.monoid_with_zero),
                        format!("allowable pullbacks: {}", yes(r.allowable_pullbacks)),
                    );
                    sec.check(
                        "pullbacks give an inverse monoid",
                        !r.all_pullbacks || (r.inductive && r.monoid),
                        format!("pullbacks: {}", yes(r.all_pullbacks)),
                    );
                }
                Err(e) => sec.error("rooted", labels, &e),
            }
        }
        Loaded::Groupoid(g) => match cancellative::verify_rooted_groupoid(g) {
            Ok(r) => {
                sec.check("L(G) left rooted", r.weak_terminal && r.left_cancellative, "");
                sec.check("G ≅ G^l(L(G))", r.isomorphism.is_some(), "");
            }
            Err(e) => sec.error("rooted", labels, &e),
        },
        _ => unreachable!("filtered by kind"),
    }
    Ok(())
}

fn verify_universality(g: &OrdGroupoid, labels: &[String], sec: &mut Section) {
    match affine::verify_affine_universality(g) {
        Ok(u) => {
            sec.check(
                "G ≅ J(R(G), R(G))",
                u.holds(),
                format!(
                    "functor: {}, bijective: {}, order preserving: {}, order reflecting: {}",
                    yes(u.functor),
                    yes(u.bijective),
                    yes(u.order_preserving),
                    yes(u.order_reflecting)
                ),
            );
        }
        Err(e) => sec.error("G ≅ J(R(G), R(G))", labels, &e),
    }
}

fn verify_affine(l: &Loaded, labels: &[String], sec: &mut Section) {
    match l {
        Loaded::Groupoid(g) => verify_universality(g, labels, sec),
        Loaded::Semigroup(s) if s.find_zero().is_some() => match affine::semigroup_from_affine(s) {
            Ok(r) => sec.check("S ≅ J(R(S*), R(S*))⁰", r.isomorphism.is_some(), format!("{} elements", r.recovered.len())),
            Err(e) => sec.error("S ≅ J(R(S*), R(S*))⁰", labels, &e),
        },
        Loaded::Semigroup(s) => match esn::groupoid_of(s) {
            Ok(g) => verify_universality(&g, labels, sec),
            Err(e) => sec.error("G(S)", labels, &e),
        },
        Loaded::Category(_) => sec.fail("affine", "categories need an action; supply an affine_system file"),
        Loaded::Action(a) => verify_action(a, labels, sec),
    }
}

fn verify_action(a: &GroupoidAction, labels: &[String], sec: &mut Section) {
    match affine::j_of(a) {
        Ok(j) => {
            sec.pass(
                "J well defined",
                format!("{} classes, {} composable pairs checked", j.groupoid.len(), j.representative_pairs),
            );
            let orbit = affine::orbit_condition_failure(a);
            let star = j.groupoid.is_star_inductive();
            let detail = match orbit {
                Some((e, f)) => format!("orbit condition fails at {}; *-inductive: {}", witness(labels, &[e, f]), yes(star)),
                None => format!("orbit condition holds; *-inductive: {}", yes(star)),
            };
            sec.check("orbit condition ⇔ J *-inductive", orbit.is_none() == star, detail);
            match affine::pseudoproduct_formula_failure(a, &j) {
                None => sec.pass("pseudoproduct formula", "all selector choices agree"),
                Some((p, q)) => sec.fail(
                    "pseudoproduct formula",
                    format!("witness: {}", witness(j.groupoid.names(), &[p, q])),
                ),
            }
        }
        Err(e) => sec.error("J well defined", labels, &e),
    }
}

fn verify_lemmas(l: &Loaded, labels: &[String], sec: &mut Section) {
    match l {
        Loaded::Semigroup(s) => {
            let n = s.len();
            let bad = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .find(|&(a, b)| s.reconstruct_full_product(a, b).ok() != Some(s.mul(a, b)));
            match bad {
                None => sec.pass("product from restricted product and order", format!("{} pairs", n * n)),
                Some((a, b)) => sec.fail("product from restricted product and order", format!("witness: {}", witness(labels, &[a, b]))),
            }
            if s.identity().is_some() {
                match cancellative::e_unitary_iff_cancellative(s) {
                    Ok(r) => {
                        let mut detail = format!("E-unitary: {}, right cancellative: {}", yes(r.e_unitary), yes(r.right_cancellative));
                        if let Some((x, e)) = r.unitary_failure {
                            detail.push_str(&format!("; unitary witness: {}", witness(labels, &[x, e])));
                        }
                        sec.check("E-unitary ⇔ right cancellative", r.agree(), detail);
                    }
                    Err(e) => sec.error("E-unitary ⇔ right cancellative", labels, &e),
                }
            }
            match esn::groupoid_of(s) {
                Ok(g) => verify_groupoid_lemmas(&g, labels, sec),
                Err(e) => sec.error("G(S)", labels, &e),
            }
        }
        Loaded::Groupoid(g) => verify_groupoid_lemmas(g, labels, sec),
        Loaded::Category(c) => {
            if let Some((x, y, z)) = c.left_cancellation_failure() {
                sec.pass("left cancellative", format!("no; witness: {}; remaining checks skipped", witness(labels, &[x, y, z])));
                return;
            }
            match cancellative::verify_lg_roundtrip(c) {
                Ok(r) => {
                    let rep = &r.report;
                    sec.check(
                        "C ≃ L(G(C))",
                        r.holds(),
                        format!("injective: {}, faithful: {}, full: {}, dense: {}", yes(rep.injective), yes(rep.faithful()), yes(rep.full()), yes(rep.essentially_surjective())),
                    );
                    match cancellative::pullback_criterion_failure(c, &r.spans) {
                        None => sec.pass("pullbacks ⇔ inductive G(C)", ""),
                        Some((a, b)) => sec.fail("pullbacks ⇔ inductive G(C)", format!("witness: {}", witness(labels, &[a, b]))),
                    }
                }
                Err(e) => sec.error("C ≃ L(G(C))", labels, &e),
            }
        }
        Loaded::Action(a) => verify_action(a, labels, sec),
    }
}

fn verify_groupoid_lemmas(g: &OrdGroupoid, labels: &[String], sec: &mut Section) {
    let n = g.len();
    let leq = g.order().clone();
    let classical = groupoid::check_classical_axioms(g, &leq).is_ok();
    let alternative = groupoid::check_alternative_axioms(g, &leq).is_ok();
    sec.check("axiom systems agree", classical == alternative, format!("classical: {}, alternative: {}", yes(classical), yes(alternative)));
    let bad = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .find(|&(x, y)| g.pseudoproduct_fast(x, y) != g.pseudoproduct_by_maximum(x, y));
    match bad {
        None => sec.pass("pseudoproduct: restriction formula = maximum of pairs", format!("{} pairs", n * n)),
        Some((x, y)) => sec.fail("pseudoproduct: restriction formula = maximum of pairs", format!("witness: {}", witness(labels, &[x, y]))),
    }
    if g.is_star_inductive() {
        let p = |x, y| g.pseudoproduct_fast(x, y);
        let bad = (0..n)
            .flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
            .find(|&(x, y, z)| p(x, y).and_then(|xy| p(xy, z)) != p(y, z).and_then(|yz| p(x, yz)));
        match bad {
            None => sec.pass("pseudoproduct associative", format!("{} triples", n * n * n)),
            Some((x, y, z)) => sec.fail("pseudoproduct associative", format!("witness: {}", witness(labels, &[x, y, z]))),
        }
    }
    match cancellative::verify_bar(g) {
        Ok(r) => sec.check(
            "Ḡ ≅ G(L(G))",
            r.holds(),
            format!(
                "maximal identities: {}, κ ordered: {}, α isomorphism: {}, enlargement: {}",
                yes(r.maximal_identities),
                yes(r.kappa_ordered),
                yes(r.alpha.is_some()),
                r.enlargement.map_or("n/a", yes)
            ),
        ),
        Err(e) => sec.error("Ḡ ≅ G(L(G))", labels, &e),
    }
}

// ---------------------------------------------------------------- iso

pub fn isomorphism(a_path: &str, b_path: &str) -> Result<Report, UsageError> {
    let (a, b) = (load(a_path)?, load(b_path)?);
    let mut report = Report::new("iso");
    let mut sec = Section::new(&format!("{a_path} {b_path}"), a.kind());
    if a.kind() != b.kind() {
        sec.fail("isomorphism", format!("kinds differ: {} and {}", a.kind(), b.kind()));
        report.sections.push(sec);
        return Ok(report);
    }
    let (la, lb) = (a.labels(), b.labels());
    let loaded = (load_valid(a_path, &a, &mut sec), load_valid(b_path, &b, &mut sec));
    let (Some(x), Some(y)) = loaded else {
        report.sections.push(sec);
        return Ok(report);
    };
    let sigs = match (&x, &y) {
        (Loaded::Semigroup(p), Loaded::Semigroup(q)) => Some((p.signature(), q.signature())),
        (Loaded::Groupoid(p), Loaded::Groupoid(q)) => Some((p.signature(), q.signature())),
        (Loaded::Category(p), Loaded::Category(q)) => Some((p.signature(), q.signature())),
        _ => None,
    };
    let Some((sa, sb)) = sigs else {
        return Err(UsageError(format!("iso does not support {}", a.kind())));
    };
    match iso::find_isomorphism(&sa, &sb) {
        Ok(Some(f)) => {
            let pairs: Vec<String> = f.iter().enumerate().map(|(i, &j)| format!("{} -> {}", witness(&la, &[i]), witness(&lb, &[j]))).collect();
            sec.pass("isomorphism", pairs.join(", "));
        }
        Ok(None) => sec.fail("isomorphism", "none exists"),
        Err(e) => sec.error("isomorphism", &la, &e),
    }
    report.sections.push(sec);
    Ok(report)
}

/// Writes `text` to `path`, creating or truncating it.
pub fn write_output(path: &Path, text: &str) -> Result<(), UsageError> {
    std::fs::write(path, text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}
