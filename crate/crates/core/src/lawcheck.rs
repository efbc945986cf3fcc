//! Law checking over concrete categories.
//!
//! A [`CategoryInstance`] supplies objects, hom-set enumeration or sampling,
//! composition, identities and an equality oracle, plus whichever of the
//! restriction, dagger, tensor, symmetry and terminal structures it carries.
//! Laws are plain data ([`Law`]): a name, a domain pattern saying which
//! morphisms are drawn and how their endpoints are shared, the capabilities
//! needed, and an equation. The engine runs a law exhaustively when the tuple
//! space is small enough and otherwise on seeded random trials, in parallel,
//! and reports the lowest-indexed counterexample.

pub mod instances;

use std::collections::HashMap;
use std::fmt::Debug;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

/// Constraint on a drawn morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Any,
    Total,
    Invertible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Capability {
    Restriction,
    Dagger,
    Tensor,
    Symmetry,
    Terminal,
}

/// Object variables `0..vars` and morphism slots `(dom var, cod var, kind)`.
#[derive(Clone, Copy, Debug)]
pub struct Pattern {
    pub vars: usize,
    pub slots: &'static [(usize, usize, Kind)],
}

use Kind::{Any, Invertible, Total};

pub const OBJECTS1: Pattern = Pattern { vars: 1, slots: &[] };
pub const OBJECTS2: Pattern = Pattern { vars: 2, slots: &[] };
pub const OBJECTS3: Pattern = Pattern { vars: 3, slots: &[] };
pub const SINGLE: Pattern = Pattern { vars: 2, slots: &[(0, 1, Any)] };
pub const SINGLE_TOTAL: Pattern = Pattern { vars: 2, slots: &[(0, 1, Total)] };
pub const ENDO_INVERTIBLE: Pattern = Pattern { vars: 1, slots: &[(0, 0, Invertible)] };
pub const CHAIN2: Pattern = Pattern { vars: 3, slots: &[(0, 1, Any), (1, 2, Any)] };
pub const CHAIN2_TOTAL_SECOND: Pattern = Pattern { vars: 3, slots: &[(0, 1, Any), (1, 2, Total)] };
pub const CHAIN3: Pattern = Pattern { vars: 4, slots: &[(0, 1, Any), (1, 2, Any), (2, 3, Any)] };
pub const SAME_DOMAIN: Pattern = Pattern { vars: 3, slots: &[(0, 1, Any), (0, 2, Any)] };
pub const SAME_HOM3: Pattern = Pattern { vars: 2, slots: &[(0, 1, Any), (0, 1, Any), (0, 1, Any)] };
pub const PARALLEL2: Pattern = Pattern { vars: 4, slots: &[(0, 1, Any), (2, 3, Any)] };
pub const PARALLEL3: Pattern = Pattern { vars: 6, slots: &[(0, 1, Any), (2, 3, Any), (4, 5, Any)] };
pub const BIFUNCTOR: Pattern =
    Pattern { vars: 6, slots: &[(0, 1, Any), (1, 2, Any), (3, 4, Any), (4, 5, Any)] };

/// A concrete category the engine can test.
pub trait CategoryInstance: Sync {
    type Obj: Clone + Debug + Serialize + DeserializeOwned + Send + Sync;
    type Mor: Clone + Debug + Serialize + DeserializeOwned + Send + Sync;

    fn name(&self) -> String;
    fn capabilities(&self) -> &'static [Capability];
    /// Objects drawn for law variables.
    fn objects(&self) -> Vec<Self::Obj>;
    fn identity(&self, a: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`; called only on composable pairs.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor;
    fn equal(&self, f: &Self::Mor, g: &Self::Mor) -> bool;
    /// Size of the hom-set `a → b`, `None` when it is not finite.
    fn hom_size(&self, a: &Self::Obj, b: &Self::Obj) -> Option<u128>;
    /// Every morphism `a → b` of the given kind; only called when `hom_size` is finite.
    fn enumerate(&self, a: &Self::Obj, b: &Self::Obj, kind: Kind) -> Vec<Self::Mor>;
    /// A random morphism `a → b` of the given kind, `None` when there is none.
    fn sample(&self, a: &Self::Obj, b: &Self::Obj, kind: Kind, rng: &mut ChaCha8Rng) -> Option<Self::Mor>;

    fn ridm(&self, _f: &Self::Mor) -> Option<Self::Mor> {
        None
    }
    fn dagger(&self, _f: &Self::Mor) -> Option<Self::Mor> {
        None
    }
    fn unit(&self) -> Option<Self::Obj> {
        None
    }
    fn tensor_obj(&self, _a: &Self::Obj, _b: &Self::Obj) -> Option<Self::Obj> {
        None
    }
    fn tensor(&self, _f: &Self::Mor, _g: &Self::Mor) -> Option<Self::Mor> {
        None
    }
    fn symmetry(&self, _a: &Self::Obj, _b: &Self::Obj) -> Option<Self::Mor> {
        None
    }
    /// The total map `a → I`.
    fn bang(&self, _a: &Self::Obj) -> Option<Self::Mor> {
        None
    }
}

pub type Equation<I> =
    fn(&I, &[<I as CategoryInstance>::Obj], &[<I as CategoryInstance>::Mor]) -> Result<(), String>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Category,
    Restriction,
    Lemma,
    Inverse,
    Monoidal,
    Symmetry,
    Affine,
}

impl Group {
    pub const ALL: [Group; 7] = [
        Group::Category,
        Group::Restriction,
        Group::Lemma,
        Group::Inverse,
        Group::Monoidal,
        Group::Symmetry,
        Group::Affine,
    ];

    /// The oracle every law of the group needs.
    pub fn primary(self) -> Option<Capability> {
        match self {
            Group::Category => None,
            Group::Restriction | Group::Lemma => Some(Capability::Restriction),
            Group::Inverse => Some(Capability::Dagger),
            Group::Monoidal => Some(Capability::Tensor),
            Group::Symmetry => Some(Capability::Symmetry),
            Group::Affine => Some(Capability::Terminal),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Group::Category => "category",
            Group::Restriction => "restriction",
            Group::Lemma => "lemma",
            Group::Inverse => "inverse",
            Group::Monoidal => "monoidal",
            Group::Symmetry => "symmetry",
            Group::Affine => "affine",
        }
    }
}

pub struct Law<I: CategoryInstance> {
    pub name: &'static str,
    pub group: Group,
    pub pattern: Pattern,
    pub requires: &'static [Capability],
    pub equation: Equation<I>,
}

impl<I: CategoryInstance> Clone for Law<I> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<I: CategoryInstance> Copy for Law<I> {}

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub trials: u64,
    pub seed: u64,
    /// Largest tuple space run exhaustively.
    pub exhaustive_limit: u128,
}

impl Default for Config {
    fn default() -> Self {
        Config { trials: 1000, seed: 0, exhaustive_limit: 10_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub instance: String,
    pub law: String,
    pub mode: Mode,
    /// Cases evaluated.
    pub trials: u64,
    /// Sampled trials where no data of the required shape could be drawn.
    pub vacuous: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug)]
pub struct Counterexample<I: CategoryInstance> {
    pub trial: u64,
    pub objects: Vec<I::Obj>,
    pub morphisms: Vec<I::Mor>,
    pub detail: String,
}

impl<I: CategoryInstance> Counterexample<I> {
    fn to_json(&self) -> Value {
        serde_json::json!({
            "trial": self.trial,
            "objects": self.objects,
            "morphisms": self.morphisms,
            "detail": self.detail,
        })
    }
}

#[derive(Clone, Debug)]
pub struct LawOutcome<I: CategoryInstance> {
    pub report: LawReport,
    pub counterexample: Option<Counterexample<I>>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LawError {
    #[error("instance {instance} has no {capability:?} oracle")]
    MissingOracle { instance: String, capability: Capability },
    #[error("unknown law or group {0:?}")]
    UnknownLaw(String),
    #[error("malformed counterexample: {0}")]
    Replay(String),
}

/// Re-evaluate a counterexample; `true` when it still violates the law.
pub fn replay<I: CategoryInstance>(inst: &I, law: &Law<I>, cx: &Counterexample<I>) -> bool {
    (law.equation)(inst, &cx.objects, &cx.morphisms).is_err()
}

/// Re-evaluate the counterexample stored in a JSON report.
pub fn replay_report<I: CategoryInstance>(inst: &I, law: &Law<I>, report: &LawReport) -> Result<bool, LawError> {
    let cx = report.counterexample.as_ref().ok_or_else(|| LawError::Replay("no counterexample".into()))?;
    let objects: Vec<I::Obj> = serde_json::from_value(cx["objects"].clone())
        .map_err(|e| LawError::Replay(e.to_string()))?;
    let morphisms: Vec<I::Mor> = serde_json::from_value(cx["morphisms"].clone())
        .map_err(|e| LawError::Replay(e.to_string()))?;
    Ok((law.equation)(inst, &objects, &morphisms).is_err())
}

fn missing<I: CategoryInstance>(inst: &I, law: &Law<I>) -> Option<Capability> {
    let caps = inst.capabilities();
    law.requires.iter().copied().find(|c| !caps.contains(c))
}

// Hom-sets for one object assignment, as indices into the shared store.
struct Block {
    objects: Vec<usize>,
    homs: Vec<usize>,
    count: u128,
}

/// Run one law.
pub fn check_law<I: CategoryInstance>(inst: &I, law: &Law<I>, cfg: &Config) -> Result<LawOutcome<I>, LawError> {
    if let Some(capability) = missing(inst, law) {
        return Err(LawError::MissingOracle { instance: inst.name(), capability });
    }
    let objects = inst.objects();
    let pattern = law.pattern;
    let assignments = assignments(objects.len(), pattern.vars);
    let mut space: Option<u128> = Some(0);
    for asg in &assignments {
        let mut prod: Option<u128> = Some(1);
        for &(d, c, _) in pattern.slots {
            prod = match (prod, inst.hom_size(&objects[asg[d]], &objects[asg[c]])) {
                (Some(p), Some(h)) => p.checked_mul(h),
                _ => None,
            };
        }
        space = match (space, prod) {
            (Some(s), Some(p)) => s.checked_add(p),
            _ => None,
        };
    }
    let outcome = match space {
        Some(n) if n <= cfg.exhaustive_limit => exhaustive(inst, law, &objects, assignments),
        _ => sampled(inst, law, &objects, cfg),
    };
    Ok(outcome)
}

fn assignments(n: usize, vars: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..vars {
        out = out.into_iter().flat_map(|a| (0..n).map(move |o| [a.clone(), vec![o]].concat())).collect();
    }
    out
}

fn exhaustive<I: CategoryInstance>(
    inst: &I,
    law: &Law<I>,
    objects: &[I::Obj],
    assignments: Vec<Vec<usize>>,
) -> LawOutcome<I> {
    let mut store: Vec<Vec<I::Mor>> = Vec::new();
    let mut index: HashMap<(usize, usize, Kind), usize> = HashMap::new();
    let mut blocks = Vec::new();
    for asg in assignments {
        let homs: Vec<usize> = law
            .pattern
            .slots
            .iter()
            .map(|&(d, c, kind)| {
                *index.entry((asg[d], asg[c], kind)).or_insert_with(|| {
                    store.push(inst.enumerate(&objects[asg[d]], &objects[asg[c]], kind));
                    store.len() - 1
                })
            })
            .collect();
        let count = homs.iter().map(|&h| store[h].len() as u128).product();
        if count > 0 {
            blocks.push(Block { objects: asg, homs, count });
        }
    }
    let mut offsets = Vec::with_capacity(blocks.len());
    let mut total: u128 = 0;
    for b in &blocks {
        offsets.push(total);
        total += b.count;
    }
    let decode = |i: u64| -> (Vec<I::Obj>, Vec<I::Mor>) {
        let i = i as u128;
        let k = offsets.partition_point(|&o| o <= i) - 1;
        let block = &blocks[k];
        let mut r = i - offsets[k];
        let mors = block
            .homs
            .iter()
            .map(|&h| {
                let len = store[h].len() as u128;
                let m = store[h][(r % len) as usize].clone();
                r /= len;
                m
            })
            .collect();
        (block.objects.iter().map(|&o| objects[o].clone()).collect(), mors)
    };
    let total = total as u64;
    let failure = (0..total).into_par_iter().find_map_first(|i| {
        let (objs, mors) = decode(i);
        (law.equation)(inst, &objs, &mors)
            .err()
            .map(|detail| Counterexample { trial: i, objects: objs, morphisms: mors, detail })
    });
    finish(inst, law, Mode::Exhaustive, total, 0, failure)
}

enum Trial<I: CategoryInstance> {
    Pass,
    Vacuous,
    Fail(Counterexample<I>),
}

const DRAW_ATTEMPTS: usize = 100;

fn sampled<I: CategoryInstance>(inst: &I, law: &Law<I>, objects: &[I::Obj], cfg: &Config) -> LawOutcome<I> {
    let results: Vec<Trial<I>> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(t);
            for _ in 0..DRAW_ATTEMPTS {
                let objs: Vec<I::Obj> = (0..law.pattern.vars)
                    .map(|_| objects[rng.random_range(0..objects.len())].clone())
                    .collect();
                let mors: Option<Vec<I::Mor>> = law
                    .pattern
                    .slots
                    .iter()
                    .map(|&(d, c, kind)| inst.sample(&objs[d], &objs[c], kind, &mut rng))
                    .collect();
                if let Some(mors) = mors {
                    return match (law.equation)(inst, &objs, &mors) {
                        Ok(()) => Trial::Pass,
                        Err(detail) => Trial::Fail(Counterexample { trial: t, objects: objs, morphisms: mors, detail }),
                    };
                }
            }
            Trial::Vacuous
        })
        .collect();
    let vacuous = results.iter().filter(|r| matches!(r, Trial::Vacuous)).count() as u64;
    let failure = results.into_iter().find_map(|r| match r {
        Trial::Fail(cx) => Some(cx),
        _ => None,
    });
    finish(inst, law, Mode::Sampled, cfg.trials - vacuous, vacuous, failure)
}

fn finish<I: CategoryInstance>(
    inst: &I,
    law: &Law<I>,
    mode: Mode,
    trials: u64,
    vacuous: u64,
    failure: Option<Counterexample<I>>,
) -> LawOutcome<I> {
    LawOutcome {
        report: LawReport {
            instance: inst.name(),
            law: law.name.to_string(),
            mode,
            trials,
            vacuous,
            passed: failure.is_none(),
            counterexample: failure.as_ref().map(Counterexample::to_json),
        },
        counterexample: failure,
    }
}

/// Run every law of a group; errors if the instance lacks the group's defining oracle.
///
/// Laws of the group that also need a further optional oracle are skipped when it is absent.
pub fn check_group<I: CategoryInstance>(inst: &I, group: Group, cfg: &Config) -> Result<Vec<LawOutcome<I>>, LawError> {
    if let Some(capability) = group.primary() {
        if !inst.capabilities().contains(&capability) {
            return Err(LawError::MissingOracle { instance: inst.name(), capability });
        }
    }
    Ok(laws::<I>()
        .iter()
        .filter(|l| l.group == group && missing(inst, l).is_none())
        .map(|l| check_law(inst, l, cfg).expect("capabilities checked"))
        .collect())
}

/// Axioms (i)–(iv) of a restriction structure.
pub fn check_restriction_axioms<I: CategoryInstance>(inst: &I, cfg: &Config) -> Result<Vec<LawOutcome<I>>, LawError> {
    check_group(inst, Group::Restriction, cfg)
}

/// Consequences of the restriction axioms: stability under restriction, total and invertible cases.
pub fn check_derived_lemma<I: CategoryInstance>(inst: &I, cfg: &Config) -> Result<Vec<LawOutcome<I>>, LawError> {
    check_group(inst, Group::Lemma, cfg)
}

/// Inverse-category equations and the dagger laws.
pub fn check_inverse_axioms<I: CategoryInstance>(inst: &I, cfg: &Config) -> Result<Vec<LawOutcome<I>>, LawError> {
    check_group(inst, Group::Inverse, cfg)
}

/// Restriction bifunctoriality of `⊗` with unit and associativity coherence.
pub fn check_monoidal_restriction<I: CategoryInstance>(inst: &I, cfg: &Config) -> Result<Vec<LawOutcome<I>>, LawError> {
    check_group(inst, Group::Monoidal, cfg)
}

/// Every law the instance has oracles for.
pub fn check_all<I: CategoryInstance>(inst: &I, cfg: &Config) -> Vec<LawOutcome<I>> {
    laws::<I>()
        .iter()
        .filter(|l| missing(inst, l).is_none())
        .map(|l| check_law(inst, l, cfg).expect("capabilities checked"))
        .collect()
}

/// Run `all`, a group name, or a single law name.
pub fn check_named<I: CategoryInstance>(inst: &I, name: &str, cfg: &Config) -> Result<Vec<LawOutcome<I>>, LawError> {
    if name == "all" {
        return Ok(check_all(inst, cfg));
    }
    if let Some(group) = Group::ALL.iter().find(|g| g.name() == name) {
        return check_group(inst, *group, cfg);
    }
    let law = laws::<I>().into_iter().find(|l| l.name == name).ok_or_else(|| LawError::UnknownLaw(name.into()))?;
    Ok(vec![check_law(inst, &law, cfg)?])
}

/// Run an ad hoc randomized property with per-trial seeded generators.
///
/// The closure returns `Err((detail, data))` on violation; the lowest failing trial is reported.
pub fn run_property<F>(instance: &str, law: &str, trials: u64, seed: u64, property: F) -> LawReport
where
    F: Fn(&mut ChaCha8Rng) -> Result<(), (String, Value)> + Sync,
{
    let failure = (0..trials).into_par_iter().find_map_first(|t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t);
        property(&mut rng).err().map(|(detail, data)| serde_json::json!({"trial": t, "data": data, "detail": detail}))
    });
    LawReport {
        instance: instance.to_string(),
        law: law.to_string(),
        mode: Mode::Sampled,
        trials,
        vacuous: 0,
        passed: failure.is_none(),
        counterexample: failure,
    }
}

fn same<I: CategoryInstance>(inst: &I, lhs: &I::Mor, rhs: &I::Mor, what: &str) -> Result<(), String> {
    if inst.equal(lhs, rhs) {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

// Accessors for oracles the law's `requires` list guarantees.
trait Oracles: CategoryInstance {
    fn r(&self, f: &Self::Mor) -> Self::Mor {
        self.ridm(f).expect("restriction oracle")
    }
    fn d(&self, f: &Self::Mor) -> Self::Mor {
        self.dagger(f).expect("dagger oracle")
    }
    fn t(&self, f: &Self::Mor, g: &Self::Mor) -> Self::Mor {
        self.tensor(f, g).expect("tensor oracle")
    }
    fn tobj(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Obj {
        self.tensor_obj(a, b).expect("tensor oracle")
    }
    fn i(&self) -> Self::Obj {
        self.unit().expect("tensor unit")
    }
    fn s(&self, a: &Self::Obj, b: &Self::Obj) -> Self::Mor {
        self.symmetry(a, b).expect("symmetry oracle")
    }
    fn b(&self, a: &Self::Obj) -> Self::Mor {
        self.bang(a).expect("terminal oracle")
    }
}

impl<I: CategoryInstance> Oracles for I {}

use Capability::{Dagger, Restriction, Symmetry as Sym, Tensor, Terminal};

/// The registered laws.
pub fn laws<I: CategoryInstance>() -> Vec<Law<I>> {
    vec![
        Law {
            name: "category.left_identity",
            group: Group::Category,
            pattern: SINGLE,
            requires: &[],
            equation: |c, o, m| same(c, &c.compose(&c.identity(&o[1]), &m[0]), &m[0], "id ∘ f = f"),
        },
        Law {
            name: "category.right_identity",
            group: Group::Category,
            pattern: SINGLE,
            requires: &[],
            equation: |c, o, m| same(c, &c.compose(&m[0], &c.identity(&o[0])), &m[0], "f ∘ id = f"),
        },
        Law {
            name: "category.associativity",
            group: Group::Category,
            pattern: CHAIN3,
            requires: &[],
            equation: |c, _, m| {
                let lhs = c.compose(&m[2], &c.compose(&m[1], &m[0]));
                let rhs = c.compose(&c.compose(&m[2], &m[1]), &m[0]);
                same(c, &lhs, &rhs, "h ∘ (g ∘ f) = (h ∘ g) ∘ f")
            },
        },
        Law {
            name: "category.equality_is_equivalence",
            group: Group::Category,
            pattern: SAME_HOM3,
            requires: &[],
            equation: |c, _, m| {
                let (f, g, h) = (&m[0], &m[1], &m[2]);
                if !c.equal(f, f) {
                    return Err("f = f".into());
                }
                if c.equal(f, g) != c.equal(g, f) {
                    return Err("f = g iff g = f".into());
                }
                if c.equal(f, g) && c.equal(g, h) && !c.equal(f, h) {
                    return Err("f = g and g = h imply f = h".into());
                }
                Ok(())
            },
        },
        Law {
            name: "restriction.i",
            group: Group::Restriction,
            pattern: SINGLE,
            requires: &[Restriction],
            equation: |c, _, m| same(c, &c.compose(&m[0], &c.r(&m[0])), &m[0], "f ∘ ridm(f) = f"),
        },
        Law {
            name: "restriction.ii",
            group: Group::Restriction,
            pattern: SAME_DOMAIN,
            requires: &[Restriction],
            equation: |c, _, m| {
                let (rf, rg) = (c.r(&m[0]), c.r(&m[1]));
                same(c, &c.compose(&rf, &rg), &c.compose(&rg, &rf), "ridm(f) ∘ ridm(g) = ridm(g) ∘ ridm(f)")
            },
        },
        Law {
            name: "restriction.iii",
            group: Group::Restriction,
            pattern: SAME_DOMAIN,
            requires: &[Restriction],
            equation: |c, _, m| {
                let (rf, rg) = (c.r(&m[0]), c.r(&m[1]));
                let lhs = c.r(&c.compose(&m[1], &rf));
                same(c, &lhs, &c.compose(&rg, &rf), "ridm(g ∘ ridm(f)) = ridm(g) ∘ ridm(f)")
            },
        },
        Law {
            name: "restriction.iv",
            group: Group::Restriction,
            pattern: CHAIN2,
            requires: &[Restriction],
            equation: |c, _, m| {
                let (f, g) = (&m[0], &m[1]);
                let lhs = c.compose(&c.r(g), f);
                let rhs = c.compose(f, &c.r(&c.compose(g, f)));
                same(c, &lhs, &rhs, "ridm(g) ∘ f = f ∘ ridm(g ∘ f)")
            },
        },
        Law {
            name: "lemma.restriction_of_restriction",
            group: Group::Lemma,
            pattern: CHAIN2,
            requires: &[Restriction],
            equation: |c, _, m| {
                let (f, g) = (&m[0], &m[1]);
                let lhs = c.r(&c.compose(g, f));
                same(c, &lhs, &c.r(&c.compose(&c.r(g), f)), "ridm(g ∘ f) = ridm(ridm(g) ∘ f)")
            },
        },
        Law {
            name: "lemma.total_postcomposition",
            group: Group::Lemma,
            pattern: CHAIN2_TOTAL_SECOND,
            requires: &[Restriction],
            equation: |c, _, m| same(c, &c.r(&c.compose(&m[1], &m[0])), &c.r(&m[0]), "ridm(g ∘ f) = ridm(f), g total"),
        },
        Law {
            name: "lemma.invertible_is_total",
            group: Group::Lemma,
            pattern: ENDO_INVERTIBLE,
            requires: &[Restriction],
            equation: |c, o, m| same(c, &c.r(&m[0]), &c.identity(&o[0]), "ridm(f) = id, f invertible"),
        },
        Law {
            name: "inverse.regularity",
            group: Group::Inverse,
            pattern: SINGLE,
            requires: &[Dagger],
            equation: |c, _, m| {
                let f = &m[0];
                same(c, &c.compose(f, &c.compose(&c.d(f), f)), f, "f ∘ f† ∘ f = f")
            },
        },
        Law {
            name: "inverse.idempotents_commute",
            group: Group::Inverse,
            pattern: SAME_DOMAIN,
            requires: &[Dagger],
            equation: |c, _, m| {
                let ef = c.compose(&c.d(&m[0]), &m[0]);
                let eg = c.compose(&c.d(&m[1]), &m[1]);
                same(c, &c.compose(&ef, &eg), &c.compose(&eg, &ef), "f†f g†g = g†g f†f")
            },
        },
        Law {
            name: "inverse.restriction_is_dagger_idempotent",
            group: Group::Inverse,
            pattern: SINGLE,
            requires: &[Dagger, Restriction],
            equation: |c, _, m| same(c, &c.r(&m[0]), &c.compose(&c.d(&m[0]), &m[0]), "ridm(f) = f† ∘ f"),
        },
        Law {
            name: "dagger.involution",
            group: Group::Inverse,
            pattern: SINGLE,
            requires: &[Dagger],
            equation: |c, _, m| same(c, &c.d(&c.d(&m[0])), &m[0], "f†† = f"),
        },
        Law {
            name: "dagger.identity",
            group: Group::Inverse,
            pattern: OBJECTS1,
            requires: &[Dagger],
            equation: |c, o, _| {
                let id = c.identity(&o[0]);
                same(c, &c.d(&id), &id, "id† = id")
            },
        },
        Law {
            name: "dagger.contravariance",
            group: Group::Inverse,
            pattern: CHAIN2,
            requires: &[Dagger],
            equation: |c, _, m| {
                let lhs = c.d(&c.compose(&m[1], &m[0]));
                same(c, &lhs, &c.compose(&c.d(&m[0]), &c.d(&m[1])), "(g ∘ f)† = f† ∘ g†")
            },
        },
        Law {
            name: "monoidal.restriction_bifunctor",
            group: Group::Monoidal,
            pattern: PARALLEL2,
            requires: &[Tensor, Restriction],
            equation: |c, _, m| {
                let lhs = c.r(&c.t(&m[0], &m[1]));
                same(c, &lhs, &c.t(&c.r(&m[0]), &c.r(&m[1])), "ridm(f ⊗ g) = ridm(f) ⊗ ridm(g)")
            },
        },
        Law {
            name: "monoidal.tensor_identity",
            group: Group::Monoidal,
            pattern: OBJECTS2,
            requires: &[Tensor],
            equation: |c, o, _| {
                let lhs = c.t(&c.identity(&o[0]), &c.identity(&o[1]));
                same(c, &lhs, &c.identity(&c.tobj(&o[0], &o[1])), "id ⊗ id = id")
            },
        },
        Law {
            name: "monoidal.tensor_composition",
            group: Group::Monoidal,
            pattern: BIFUNCTOR,
            requires: &[Tensor],
            equation: |c, _, m| {
                let (f, g, f2, g2) = (&m[0], &m[1], &m[2], &m[3]);
                let lhs = c.t(&c.compose(g, f), &c.compose(g2, f2));
                let rhs = c.compose(&c.t(g, g2), &c.t(f, f2));
                same(c, &lhs, &rhs, "(g ∘ f) ⊗ (g' ∘ f') = (g ⊗ g') ∘ (f ⊗ f')")
            },
        },
        Law {
            name: "monoidal.left_unit",
            group: Group::Monoidal,
            pattern: SINGLE,
            requires: &[Tensor],
            equation: |c, _, m| same(c, &c.t(&c.identity(&c.i()), &m[0]), &m[0], "id_I ⊗ f = f"),
        },
        Law {
            name: "monoidal.right_unit",
            group: Group::Monoidal,
            pattern: SINGLE,
            requires: &[Tensor],
            equation: |c, _, m| same(c, &c.t(&m[0], &c.identity(&c.i())), &m[0], "f ⊗ id_I = f"),
        },
        Law {
            name: "monoidal.associativity",
            group: Group::Monoidal,
            pattern: PARALLEL3,
            requires: &[Tensor],
            equation: |c, _, m| {
                let lhs = c.t(&c.t(&m[0], &m[1]), &m[2]);
                same(c, &lhs, &c.t(&m[0], &c.t(&m[1], &m[2])), "(f ⊗ g) ⊗ h = f ⊗ (g ⊗ h)")
            },
        },
        Law {
            name: "symmetry.naturality",
            group: Group::Symmetry,
            pattern: PARALLEL2,
            requires: &[Tensor, Sym],
            equation: |c, o, m| {
                let lhs = c.compose(&c.s(&o[1], &o[3]), &c.t(&m[0], &m[1]));
                let rhs = c.compose(&c.t(&m[1], &m[0]), &c.s(&o[0], &o[2]));
                same(c, &lhs, &rhs, "γ ∘ (f ⊗ g) = (g ⊗ f) ∘ γ")
            },
        },
        Law {
            name: "symmetry.involution",
            group: Group::Symmetry,
            pattern: OBJECTS2,
            requires: &[Tensor, Sym],
            equation: |c, o, _| {
                let lhs = c.compose(&c.s(&o[1], &o[0]), &c.s(&o[0], &o[1]));
                same(c, &lhs, &c.identity(&c.tobj(&o[0], &o[1])), "γ ∘ γ = id")
            },
        },
        Law {
            name: "symmetry.hexagon",
            group: Group::Symmetry,
            pattern: OBJECTS3,
            requires: &[Tensor, Sym],
            equation: |c, o, _| {
                let (a, b, x) = (&o[0], &o[1], &o[2]);
                let lhs = c.s(a, &c.tobj(b, x));
                let rhs = c.compose(&c.t(&c.identity(b), &c.s(a, x)), &c.t(&c.s(a, b), &c.identity(x)));
                same(c, &lhs, &rhs, "γ_{A,B⊗C} = (id_B ⊗ γ_{A,C}) ∘ (γ_{A,B} ⊗ id_C)")
            },
        },
        Law {
            name: "symmetry.unit",
            group: Group::Symmetry,
            pattern: OBJECTS1,
            requires: &[Tensor, Sym],
            equation: |c, o, _| same(c, &c.s(&o[0], &c.i()), &c.identity(&o[0]), "γ_{A,I} = id"),
        },
        Law {
            name: "affine.bang_total",
            group: Group::Affine,
            pattern: OBJECTS1,
            requires: &[Terminal, Restriction],
            equation: |c, o, _| same(c, &c.r(&c.b(&o[0])), &c.identity(&o[0]), "ridm(!) = id"),
        },
        Law {
            name: "affine.terminal",
            group: Group::Affine,
            pattern: SINGLE_TOTAL,
            requires: &[Terminal],
            equation: |c, o, m| same(c, &c.compose(&c.b(&o[1]), &m[0]), &c.b(&o[0]), "! ∘ f = !, f total"),
        },
    ]
}
