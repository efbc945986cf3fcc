//! The shipped category instances, plus deliberately broken variants of `Pfn`
//! used to exercise counterexample search.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{CategoryInstance, Capability, Kind};
use crate::aux::{AuxEquality, AuxMorphism, PInjBase};
use crate::classical::{coherence, Coherence, FinObj, PartialFn, PartialInj};
use crate::ext::{ExtEquality, ExtMorphism};
use crate::quantum::{haar_unitary, swap, Channel, IsometryM, UnitaryM, EQ_TOL};

use Capability::{Dagger, Restriction, Symmetry, Tensor, Terminal};

/// Names of the shipped instances.
pub const INSTANCE_NAMES: [&str; 7] = ["Pfn", "PInj", "Unitary", "Isometry", "CPTP", "Aux(PInj)", "Ext(Aux(PInj))"];

fn fin_objects(max: usize) -> Vec<FinObj> {
    (0..=max).map(FinObj::new).collect()
}

fn falling(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i))
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn pinj_count(a: usize, b: usize) -> u128 {
    let (a, b) = (a as u128, b as u128);
    (0..=a.min(b)).fold(0u128, |acc, k| acc.saturating_add(binomial(a, k).saturating_mul(falling(b, k))))
}

fn random_injection(a: &FinObj, b: &FinObj, rng: &mut ChaCha8Rng) -> Option<PartialInj> {
    if a.size() > b.size() {
        return None;
    }
    let mut free: Vec<usize> = (0..b.size()).collect();
    let graph: Vec<(usize, usize)> =
        (0..a.size()).map(|x| (x, free.swap_remove(rng.random_range(0..free.len())))).collect();
    Some(PartialInj::from_graph(a.clone(), b.clone(), graph).expect("distinct outputs"))
}

fn random_total(a: &FinObj, b: &FinObj, rng: &mut ChaCha8Rng) -> Option<PartialFn> {
    if a.size() > 0 && b.size() == 0 {
        return None;
    }
    let table = (0..a.size()).map(|_| Some(rng.random_range(0..b.size()))).collect();
    Some(PartialFn::from_table(a.clone(), b.clone(), table).expect("in range"))
}

fn is_bijection(f: &PartialFn) -> bool {
    f.dom().size() == f.cod().size() && f.is_total() && f.is_injective()
}

/// Partial functions on `{0..n}` for `n ≤ max`.
#[derive(Clone, Debug)]
pub struct PfnInstance {
    pub max: usize,
}

impl PfnInstance {
    pub fn new(max: usize) -> Self {
        PfnInstance { max }
    }
}

impl CategoryInstance for PfnInstance {
    type Obj = FinObj;
    type Mor = PartialFn;

    fn name(&self) -> String {
        "Pfn".into()
    }

    fn capabilities(&self) -> &'static [Capability] {
        &[Restriction, Tensor, Symmetry, Terminal]
    }

    fn objects(&self) -> Vec<FinObj> {
        fin_objects(self.max)
    }

    fn identity(&self, a: &FinObj) -> PartialFn {
        PartialFn::identity(a)
    }

    fn compose(&self, g: &PartialFn, f: &PartialFn) -> PartialFn {
        g.compose(f).expect("composable")
    }

    fn equal(&self, f: &PartialFn, g: &PartialFn) -> bool {
        f == g
    }

    fn hom_size(&self, a: &FinObj, b: &FinObj) -> Option<u128> {
        (b.size() as u128 + 1).checked_pow(a.size() as u32)
    }

    fn enumerate(&self, a: &FinObj, b: &FinObj, kind: Kind) -> Vec<PartialFn> {
        let all = PartialFn::enumerate(a, b);
        match kind {
            Kind::Any => all,
            Kind::Total => all.into_iter().filter(PartialFn::is_total).collect(),
            Kind::Invertible => all.into_iter().filter(is_bijection).collect(),
        }
    }

    fn sample(&self, a: &FinObj, b: &FinObj, kind: Kind, rng: &mut ChaCha8Rng) -> Option<PartialFn> {
        match kind {
            Kind::Any => Some(PartialFn::random(a, b, rng)),
            Kind::Total => random_total(a, b, rng),
            Kind::Invertible if a == b => random_injection(a, b, rng).map(PartialInj::into_fn),
            Kind::Invertible => None,
        }
    }

    fn ridm(&self, f: &PartialFn) -> Option<PartialFn> {
        Some(f.ridm())
    }

    fn unit(&self) -> Option<FinObj> {
        Some(FinObj::unit())
    }

    fn tensor_obj(&self, a: &FinObj, b: &FinObj) -> Option<FinObj> {
        Some(a.tensor(b))
    }

    fn tensor(&self, f: &PartialFn, g: &PartialFn) -> Option<PartialFn> {
        Some(f.tensor(g))
    }

    fn symmetry(&self, a: &FinObj, b: &FinObj) -> Option<PartialFn> {
        Some(coherence(Coherence::Symmetry { a: a.size(), b: b.size() }).into_fn())
    }

    fn bang(&self, a: &FinObj) -> Option<PartialFn> {
        let table = vec![Some(0); a.size()];
        Some(PartialFn::from_table(a.clone(), FinObj::unit(), table).expect("in range"))
    }
}

macro_rules! delegate_pfn {
    () => {
        type Obj = FinObj;
        type Mor = PartialFn;

        fn objects(&self) -> Vec<FinObj> {
            self.0.objects()
        }
        fn identity(&self, a: &FinObj) -> PartialFn {
            self.0.identity(a)
        }
        fn compose(&self, g: &PartialFn, f: &PartialFn) -> PartialFn {
            self.0.compose(g, f)
        }
        fn equal(&self, f: &PartialFn, g: &PartialFn) -> bool {
            self.0.equal(f, g)
        }
        fn hom_size(&self, a: &FinObj, b: &FinObj) -> Option<u128> {
            self.0.hom_size(a, b)
        }
        fn enumerate(&self, a: &FinObj, b: &FinObj, kind: Kind) -> Vec<PartialFn> {
            self.0.enumerate(a, b, kind)
        }
        fn sample(&self, a: &FinObj, b: &FinObj, kind: Kind, rng: &mut ChaCha8Rng) -> Option<PartialFn> {
            self.0.sample(a, b, kind, rng)
        }
    };
}

/// `Pfn` with `ridm(f) = id`: the trivial restriction structure, which satisfies the axioms.
#[derive(Clone, Debug)]
pub struct TotalRidmPfn(pub PfnInstance);

impl CategoryInstance for TotalRidmPfn {
    delegate_pfn!();

    fn name(&self) -> String {
        "Pfn[ridm=id]".into()
    }

    fn capabilities(&self) -> &'static [Capability] {
        &[Restriction]
    }

    fn ridm(&self, f: &PartialFn) -> Option<PartialFn> {
        Some(PartialFn::identity(f.dom()))
    }
}

/// Broken `Pfn` whose restriction is nowhere defined.
#[derive(Clone, Debug)]
pub struct EmptyRidmPfn(pub PfnInstance);

impl CategoryInstance for EmptyRidmPfn {
    delegate_pfn!();

    fn name(&self) -> String {
        "Pfn[ridm=empty]".into()
    }

    fn capabilities(&self) -> &'static [Capability] {
        &[Restriction]
    }

    fn ridm(&self, f: &PartialFn) -> Option<PartialFn> {
        Some(PartialFn::empty(f.dom(), f.dom()))
    }
}

/// Broken `Pfn` whose dagger sends `y` to the least preimage of `y`.
#[derive(Clone, Debug)]
pub struct PreimageDaggerPfn(pub PfnInstance);

impl CategoryInstance for PreimageDaggerPfn {
    delegate_pfn!();

    fn name(&self) -> String {
        "Pfn[dagger=preimage]".into()
    }

    fn capabilities(&self) -> &'static [Capability] {
        &[Dagger]
    }

    fn dagger(&self, f: &PartialFn) -> Option<PartialFn> {
        let table = (0..f.cod().size()).map(|y| f.graph().find(|&(_, v)| v == y).map(|(x, _)| x)).collect();
        Some(PartialFn::from_table(f.cod().clone(), f.dom().clone(), table).expect("in range"))
    }
}

/// Partial injections on `{0..n}` for `n ≤ max`.
#[derive(Clone, Debug)]
pub struct PInjInstance {
    pub max: usize,
}

impl PInjInstance {
    pub fn new(max: usize) -> Self {
        PInjInstance { max }
    }
}

impl CategoryInstance for PInjInstance {
    type Obj = FinObj;
    type Mor = PartialInj;

    fn name(&self) -> String {
        "PInj".into()
    }

    fn capabilities(&self) -> &'static [Capability] {
        &[Restriction, Dagger, Tensor, Symmetry]
    }

    fn objects(&self) -> Vec<FinObj> {
        fin_objects(self.max)
    }

    fn identity(&self, a: &FinObj) -> PartialInj {
        PartialInj::identity(a)
    }

    fn compose(&self, g: &PartialInj, f: &PartialInj) -> PartialInj {
        g.compose(f).expect("composable")
    }

    fn equal(&self, f: &PartialInj, g: &PartialInj) -> bool {
        f == g
    }

    fn hom_size(&self, a: &FinObj, b: &FinObj) -> Option<u128> {
        Some(pinj_count(a.size(), b.size()))
    }

    fn enumerate(&self, a: &FinObj, b: &FinObj, kind: Kind) -> Vec<PartialInj> {
        let all = PartialInj::enumerate(a, b);
        match kind {
            Kind::Any => all,
            Kind::Total => all.into_iter().filter(|f| f.is_total()).collect(),
            Kind::Invertible => all.into_iter().filter(|f| is_bijection(f)).collect(),
        }
    }

    fn sample(&self, a: &FinObj, b: &FinObj, kind: Kind, rng: &mut ChaCha8Rng) -> Option<PartialInj> {
        match kind {
            Kind::Any => Some(PartialInj::random(a, b, rng)),
            Kind::Total => random_injection(a, b, rng),
            Kind::Invertible if a == b => random_injection(a, b, rng),
            Kind::Invertible => None,
        }
    }

    fn ridm(&self, f: &PartialInj) -> Option<PartialInj> {
        Some(f.ridm())
    }

    fn dagger(&self, f: &PartialInj) -> Option<PartialInj> {
        Some(f.dagger())
    }

    fn unit(&self) -> Option<FinObj> {
        Some(FinObj::unit())
    }

    fn tensor_obj(&self, a: &FinObj, b: &FinObj) -> Option<FinObj> {
        Some(a.tensor(b))
    }

    fn tensor(&self, f: &PartialInj, g: &PartialInj) -> Option<PartialInj> {
        Some(f.tensor(g))
    }

    fn symmetry(&self, a: &FinObj, b: &FinObj) -> Option<PartialInj> {
        Some(coherence(Coherence::Symmetry { a: a.size(), b: b.size() }))
    }
}

/// Unitaries on `C^d` for `1 ≤ d ≤ max`, compared entrywise.
#[derive(Clone, Debug)]
pub struct UnitaryInstance {
    pub max: usize,
    pub tol: f64,
}

impl UnitaryInstance {
    pub fn new(max: usize) -> Self {
        UnitaryInstance { max, tol: EQ_TOL }
    }
}

impl CategoryInstance for UnitaryInstance {
    type Obj = usize;
    type Mor = UnitaryM;

    fn name(&self) -> String {
        "Unitary".into()
    }

    fn capabilities(&self) -> &'static [Capability] {
        &[Restriction, Dagger, Tensor, Symmetry]
    }

    fn objects(&self) -> Vec<usize> {
        (1..=self.max).collect()
    }

    fn identity(&self, a: &usize) -> UnitaryM {
        UnitaryM::identity(*a)
    }

    fn compose(&self, g: &UnitaryM, f: &UnitaryM) -> UnitaryM {
        g.compose(f).expect("composable")
    }

    fn equal(&self, f: &UnitaryM, g: &UnitaryM) -> bool {
        f.dim() == g.dim() && f.matrix().approx_eq(g.matrix(), self.tol)
    }

    fn hom_size(&self, a: &usize, b: &usize) -> Option<u128> {
        if a == b {
            None
        } else {
            Some(0)
        }
    }

    fn enumerate(&self, _a: &usize, _b: &usize, _kind: Kind) -> Vec<UnitaryM> {
        Vec::new()
    }

    fn sample(&self, a: &usize, b: &usize, _kind: Kind, rng: &mut ChaCha8Rng) -> Option<UnitaryM> {
        (a == b).then(|| haar_unitary(*a, rng))
    }

    fn ridm(&self, f: &UnitaryM) -> Option<UnitaryM> {
        Some(UnitaryM::identity(f.dim()))
    }

    fn dagger(&self, f: &UnitaryM) -> Option<UnitaryM> {
        Some(f.adjoint())
    }

    fn unit(&self) -> Option<usize> {
        Some(1)
    }

    fn tensor_obj(&self, a: &usize, b: &usize) -> Option<usize> {
        Some(a * b)
    }

    fn tensor(&self, f: &UnitaryM, g: &UnitaryM) -> Option<UnitaryM> {
        Some(f.tensor(g))
    }

    fn symmetry(&self, a: &usize, b: &usize) -> Option<UnitaryM> {
        Some(swap(*a, *b))
    }
}

/// Isometries `C^a → C^b` for `1 ≤ a ≤ b ≤ max`.
#[derive(Clone, Debug)]
pub struct IsometryInstance {
    pub max: usize,
    pub tol: f64,
}

impl IsometryInstance {
    pub fn new(max: usize) -> Self {
        IsometryInstance { max, tol: EQ_TOL }
    }
}

impl CategoryInstance for IsometryInstance {
    type Obj = usize;
    type Mor = IsometryM;

    fn name(&self) -> String {
        "Isometry".into()
    }

    fn capabilities(&self) -> &'static [Capability] {
        &[Restriction, Tensor, Symmetry]
    }

    fn objects(&self) -> Vec<usize> {
        (1..=self.max).collect()
    }

    fn identity(&self, a: &usize) -> IsometryM {
        IsometryM::identity(*a)
    }

    fn compose(&self, g: &IsometryM, f: &IsometryM) -> IsometryM {
        g.compose(f).expect("composable")
    }

    fn equal(&self, f: &IsometryM, g: &IsometryM) -> bool {
        (f.dom(), f.cod()) == (g.dom(), g.cod()) && f.matrix().approx_eq(g.matrix(), self.tol)
    }

    fn hom_size(&self, a: &usize, b: &usize) -> Option<u128> {
        if a <= b {
            None
        } else {
            Some(0)
        }
    }

    fn enumerate(&self, _a: &usize, _b: &usize, _kind: Kind) -> Vec<IsometryM> {
        Vec::new()
    }

    fn sample(&self, a: &usize, b: &usize, kind: Kind, rng: &mut ChaCha8Rng) -> Option<IsometryM> {
        match kind {
            Kind::Invertible if a == b => Some(haar_unitary(*a, rng).as_isometry()),
            Kind::Invertible => None,
            _ => (a <= b).then(|| IsometryM::random(*b, *a, rng)),
        }
    }

    fn ridm(&self, f: &IsometryM) -> Option<IsometryM> {
        Some(IsometryM::identity(f.dom()))
    }

    fn unit(&self) -> Option<usize> {
        Some(1)
    }

    fn tensor_obj(&self, a: &usize, b: &usize) -> Option<usize> {
        Some(a * b)
    }

    fn tensor(&self, f: &IsometryM, g: &IsometryM) -> Option<IsometryM> {
        Some(f.tensor(g))
    }

    fn symmetry(&self, a: &usize, b: &usize) -> Option<IsometryM> {
        Some(swap(*a, *b).as_isometry())
    }
}

/// Channels between `C^a` and `C^b` for `1 ≤ a, b ≤ max`, compared by Choi matrix.
#[derive(Clone, Debug)]
pub struct CptpInstance {
    pub max: usize,
    pub tol: f64,
}

impl CptpInstance {
    pub fn new(max: usize) -> Self {
        CptpInstance { max, tol: EQ_TOL }
    }
}

impl CategoryInstance for CptpInstance {
    type Obj = usize;
    type Mor = Channel;

    fn name(&self) -> String {
        "CPTP".into()
    }

    fn capabilities(&self) -> &'static [Capability] {
        &[Restriction, Tensor, Symmetry, Terminal]
    }

    fn objects(&self) -> Vec<usize> {
        (1..=self.max).collect()
    }

    fn identity(&self, a: &usize) -> Channel {
        Channel::identity(*a)
    }

    fn compose(&self, g: &Channel, f: &Channel) -> Channel {
        g.compose(f).expect("composable")
    }

    fn equal(&self, f: &Channel, g: &Channel) -> bool {
        f.approx_eq(g, self.tol)
    }

    fn hom_size(&self, _a: &usize, _b: &usize) -> Option<u128> {
        None
    }

    fn enumerate(&self, _a: &usize, _b: &usize, _kind: Kind) -> Vec<Channel> {
        Vec::new()
    }

    fn sample(&self, a: &usize, b: &usize, kind: Kind, rng: &mut ChaCha8Rng) -> Option<Channel> {
        match kind {
            Kind::Invertible if a == b => Some(Channel::unitary(&haar_unitary(*a, rng))),
            Kind::Invertible => None,
            _ => {
                let k = rng.random_range(1..=a * b);
                Some(Channel::random(*a, *b, k, rng))
            }
        }
    }

    fn ridm(&self, f: &Channel) -> Option<Channel> {
        Some(Channel::identity(f.din()))
    }

    fn unit(&self) -> Option<usize> {
        Some(1)
    }

    fn tensor_obj(&self, a: &usize, b: &usize) -> Option<usize> {
        Some(a * b)
    }

    fn tensor(&self, f: &Channel, g: &Channel) -> Option<Channel> {
        f.tensor(g).ok()
    }

    fn symmetry(&self, a: &usize, b: &usize) -> Option<Channel> {
        Some(Channel::unitary(&swap(*a, *b)))
    }

    fn bang(&self, a: &usize) -> Option<Channel> {
        Some(Channel::discard(*a))
    }
}

/// `Aux(PInj)` on `{0..n}` for `n ≤ max`, drawing representatives with garbage of size `≤ max_garbage`.
#[derive(Clone, Debug)]
pub struct AuxPInjInstance {
    pub max: usize,
    pub max_garbage: usize,
}

impl AuxPInjInstance {
    pub fn new(max: usize, max_garbage: usize) -> Self {
        AuxPInjInstance { max, max_garbage }
    }

    fn representatives(&self, a: &FinObj, b: &FinObj) -> Vec<AuxMorphism<PInjBase>> {
        (0..=self.max_garbage)
            .flat_map(|e| {
                let garbage = FinObj::new(e);
                PartialInj::enumerate(a, &b.tensor(&garbage))
                    .into_iter()
                    .map(move |core| AuxMorphism::new(core, b.clone(), garbage.clone()).expect("B ⊗ E"))
            })
            .collect()
    }
}

fn aux_invertible(f: &AuxMorphism<PInjBase>) -> bool {
    let nf = f.normal_form();
    is_bijection(&nf.pfn) && nf.partition.len() <= 1
}

impl CategoryInstance for AuxPInjInstance {
    type Obj = FinObj;
    type Mor = AuxMorphism<PInjBase>;

    fn name(&self) -> String {
        "Aux(PInj)".into()
    }

    fn capabilities(&self) -> &'static [Capability] {
        &[Restriction, Tensor, Symmetry, Terminal]
    }

    fn objects(&self) -> Vec<FinObj> {
        fin_objects(self.max)
    }

    fn identity(&self, a: &FinObj) -> Self::Mor {
        AuxMorphism::identity(a)
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        g.compose(f).expect("composable")
    }

    fn equal(&self, f: &Self::Mor, g: &Self::Mor) -> bool {
        f.aux_equals(g)
    }

    fn hom_size(&self, a: &FinObj, b: &FinObj) -> Option<u128> {
        Some((0..=self.max_garbage).map(|e| pinj_count(a.size(), b.size() * e)).sum())
    }

    fn enumerate(&self, a: &FinObj, b: &FinObj, kind: Kind) -> Vec<Self::Mor> {
        let all = self.representatives(a, b);
        match kind {
            Kind::Any => all,
            Kind::Total => all.into_iter().filter(|f| f.is_total()).collect(),
            Kind::Invertible => all.into_iter().filter(aux_invertible).collect(),
        }
    }

    fn sample(&self, a: &FinObj, b: &FinObj, kind: Kind, rng: &mut ChaCha8Rng) -> Option<Self::Mor> {
        match kind {
            Kind::Any => {
                let e = FinObj::new(rng.random_range(0..=self.max_garbage));
                let core = PartialInj::random(a, &b.tensor(&e), rng);
                Some(AuxMorphism::new(core, b.clone(), e).expect("B ⊗ E"))
            }
            Kind::Total => {
                let options: Vec<usize> = (0..=self.max_garbage).filter(|e| b.size() * e >= a.size()).collect();
                if options.is_empty() {
                    return None;
                }
                let e = FinObj::new(options[rng.random_range(0..options.len())]);
                let core = random_injection(a, &b.tensor(&e), rng)?;
                Some(AuxMorphism::new(core, b.clone(), e).expect("B ⊗ E"))
            }
            Kind::Invertible if a == b => random_injection(a, b, rng).map(AuxMorphism::embed),
            Kind::Invertible => None,
        }
    }

    fn ridm(&self, f: &Self::Mor) -> Option<Self::Mor> {
        Some(f.ridm())
    }

    fn unit(&self) -> Option<FinObj> {
        Some(FinObj::unit())
    }

    fn tensor_obj(&self, a: &FinObj, b: &FinObj) -> Option<FinObj> {
        Some(a.tensor(b))
    }

    fn tensor(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor> {
        Some(f.tensor(g))
    }

    fn symmetry(&self, a: &FinObj, b: &FinObj) -> Option<Self::Mor> {
        Some(AuxMorphism::symmetry(a, b))
    }

    fn bang(&self, a: &FinObj) -> Option<Self::Mor> {
        Some(AuxMorphism::bang(a))
    }
}

/// `Ext(Aux(PInj))`, sharing the representatives of [`AuxPInjInstance`].
#[derive(Clone, Debug)]
pub struct ExtAuxPInjInstance(pub AuxPInjInstance);

impl ExtAuxPInjInstance {
    pub fn new(max: usize, max_garbage: usize) -> Self {
        ExtAuxPInjInstance(AuxPInjInstance::new(max, max_garbage))
    }
}

impl CategoryInstance for ExtAuxPInjInstance {
    type Obj = FinObj;
    type Mor = ExtMorphism<PInjBase>;

    fn name(&self) -> String {
        "Ext(Aux(PInj))".into()
    }

    fn capabilities(&self) -> &'static [Capability] {
        &[Restriction, Tensor, Symmetry, Terminal]
    }

    fn objects(&self) -> Vec<FinObj> {
        self.0.objects()
    }

    fn identity(&self, a: &FinObj) -> Self::Mor {
        ExtMorphism::identity(a)
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Self::Mor {
        g.compose(f).expect("composable")
    }

    fn equal(&self, f: &Self::Mor, g: &Self::Mor) -> bool {
        f.ext_equiv(g).unwrap_or(false)
    }

    fn hom_size(&self, a: &FinObj, b: &FinObj) -> Option<u128> {
        self.0.hom_size(a, b)
    }

    fn enumerate(&self, a: &FinObj, b: &FinObj, kind: Kind) -> Vec<Self::Mor> {
        let all = self.0.representatives(a, b).into_iter().map(ExtMorphism::new);
        match kind {
            Kind::Any => all.collect(),
            Kind::Total => all.filter(|f| f.rep().collapse().is_total()).collect(),
            Kind::Invertible => all.filter(|f| is_bijection(&f.rep().collapse())).collect(),
        }
    }

    fn sample(&self, a: &FinObj, b: &FinObj, kind: Kind, rng: &mut ChaCha8Rng) -> Option<Self::Mor> {
        self.0.sample(a, b, kind, rng).map(ExtMorphism::new)
    }

    fn ridm(&self, f: &Self::Mor) -> Option<Self::Mor> {
        Some(f.ridm())
    }

    fn unit(&self) -> Option<FinObj> {
        Some(FinObj::unit())
    }

    fn tensor_obj(&self, a: &FinObj, b: &FinObj) -> Option<FinObj> {
        Some(a.tensor(b))
    }

    fn tensor(&self, f: &Self::Mor, g: &Self::Mor) -> Option<Self::Mor> {
        Some(f.tensor(g))
    }

    fn symmetry(&self, a: &FinObj, b: &FinObj) -> Option<Self::Mor> {
        Some(ExtMorphism::new(AuxMorphism::symmetry(a, b)))
    }

    fn bang(&self, a: &FinObj) -> Option<Self::Mor> {
        Some(ExtMorphism::new(AuxMorphism::bang(a)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hom_sizes_match_enumeration() {
        let pfn = PfnInstance::new(3);
        let pinj = PInjInstance::new(3);
        let aux = AuxPInjInstance::new(2, 2);
        for a in 0..=3 {
            for b in 0..=3 {
                let (x, y) = (FinObj::new(a), FinObj::new(b));
                assert_eq!(pfn.hom_size(&x, &y).unwrap(), pfn.enumerate(&x, &y, Kind::Any).len() as u128);
                assert_eq!(pinj.hom_size(&x, &y).unwrap(), pinj.enumerate(&x, &y, Kind::Any).len() as u128);
                if a <= 2 && b <= 2 {
                    assert_eq!(aux.hom_size(&x, &y).unwrap(), aux.enumerate(&x, &y, Kind::Any).len() as u128);
                }
            }
        }
        assert_eq!(pinj_count(3, 3), 34);
    }

    #[test]
    fn kinds_filter_as_expected() {
        let pfn = PfnInstance::new(3);
        let three = FinObj::new(3);
        assert_eq!(pfn.enumerate(&three, &three, Kind::Total).len(), 27);
        assert_eq!(pfn.enumerate(&three, &three, Kind::Invertible).len(), 6);
        let aux = AuxPInjInstance::new(2, 2);
        let two = FinObj::new(2);
        // bijections with constant garbage: 2 functions × (1 + 2) garbage choices
        assert_eq!(aux.enumerate(&two, &two, Kind::Invertible).len(), 6);
    }

    #[test]
    fn preimage_dagger_is_the_inverse_on_bijections() {
        let inst = PreimageDaggerPfn(PfnInstance::new(2));
        let f = PartialFn::from_graph(FinObj::new(2), FinObj::new(2), [(0, 1), (1, 0)]).unwrap();
        assert_eq!(inst.dagger(&f).unwrap(), f);
    }
}
