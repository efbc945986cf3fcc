//! Morphisms with garbage: `[f, E] : A → B` is a base morphism `f : A → B ⊗ E`
//! taken up to mediation of the garbage object `E`.
//!
//! The structure maps (composition, identities, restriction, tensor, the
//! embedding, discarding and projections) work over any [`AuxBase`]. Equality
//! is decided per instance:
//!
//! * over partial injections, `[f, E] ~ [f', E']` exactly when `π₁ ∘ f = π₁ ∘ f'`
//!   and both induce the same partition of the domain by garbage value, in which
//!   case a single mediator witnesses the equivalence;
//! * over isometries, two morphisms are equivalent exactly when their channels
//!   `ρ ↦ Tr_E(f ρ f†)` agree.
//!
//! Associators and unitors are identities under the strict row-major
//! convention, so the only coherence that appears explicitly is the
//! interchange `ϑ : (B ⊗ E) ⊗ (B' ⊗ E') → (B ⊗ B') ⊗ (E ⊗ E')` used by the tensor.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classical::{coherence, ClassicalError, Coherence, FinObj, PartialFn, PartialInj};
use crate::quantum::{channel_of_isometry, swap, CMatrix, Channel, IsometryM, QuantumError, C64, EQ_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AuxError {
    #[error("endpoint mismatch: {0}")]
    Mismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// A strict symmetric monoidal restriction category the construction runs over.
pub trait AuxBase {
    type Obj: Clone + PartialEq + Debug;
    type Mor: Clone + Debug;

    fn unit() -> Self::Obj;
    fn obj_tensor(a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    fn dom(f: &Self::Mor) -> Self::Obj;
    fn cod(f: &Self::Mor) -> Self::Obj;
    fn identity(a: &Self::Obj) -> Self::Mor;
    /// `g ∘ f`
    fn compose(g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor, AuxError>;
    fn tensor(f: &Self::Mor, g: &Self::Mor) -> Self::Mor;
    fn ridm(f: &Self::Mor) -> Self::Mor;
    fn symmetry(a: &Self::Obj, b: &Self::Obj) -> Self::Mor;
    fn interchange(b: &Self::Obj, e: &Self::Obj, b2: &Self::Obj, e2: &Self::Obj) -> Self::Mor;
    /// Reread `f` with the given (equal-size) endpoints.
    fn retype(f: Self::Mor, dom: &Self::Obj, cod: &Self::Obj) -> Result<Self::Mor, AuxError>;
}

/// Partial injections between finite sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PInjBase;

impl AuxBase for PInjBase {
    type Obj = FinObj;
    type Mor = PartialInj;

    fn unit() -> FinObj {
        FinObj::unit()
    }

    fn obj_tensor(a: &FinObj, b: &FinObj) -> FinObj {
        a.tensor(b)
    }

    fn dom(f: &PartialInj) -> FinObj {
        f.dom().clone()
    }

    fn cod(f: &PartialInj) -> FinObj {
        f.cod().clone()
    }

    fn identity(a: &FinObj) -> PartialInj {
        PartialInj::identity(a)
    }

    fn compose(g: &PartialInj, f: &PartialInj) -> Result<PartialInj, AuxError> {
        Ok(g.compose(f)?)
    }

    fn tensor(f: &PartialInj, g: &PartialInj) -> PartialInj {
        f.tensor(g)
    }

    fn ridm(f: &PartialInj) -> PartialInj {
        f.ridm()
    }

    fn symmetry(a: &FinObj, b: &FinObj) -> PartialInj {
        coherence(Coherence::Symmetry { a: a.size(), b: b.size() })
            .with_objects(a.tensor(b), b.tensor(a))
            .expect("sizes agree")
    }

    fn interchange(b: &FinObj, e: &FinObj, b2: &FinObj, e2: &FinObj) -> PartialInj {
        let kind = Coherence::Interchange { b: b.size(), e: e.size(), b2: b2.size(), e2: e2.size() };
        coherence(kind)
            .with_objects(b.tensor(e).tensor(&b2.tensor(e2)), b.tensor(b2).tensor(&e.tensor(e2)))
            .expect("sizes agree")
    }

    fn retype(f: PartialInj, dom: &FinObj, cod: &FinObj) -> Result<PartialInj, AuxError> {
        Ok(f.with_objects(dom.clone(), cod.clone())?)
    }
}

/// Isometries between finite-dimensional Hilbert spaces, objects are dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IsometryBase;

fn permutation_matrix(p: &PartialInj) -> IsometryM {
    let n = p.dom().size();
    let mut m = CMatrix::zeros(n, n);
    for (x, y) in p.graph() {
        m[(y, x)] = C64::new(1.0, 0.0);
    }
    IsometryM::new(m).expect("permutation matrices are unitary")
}

impl AuxBase for IsometryBase {
    type Obj = usize;
    type Mor = IsometryM;

    fn unit() -> usize {
        1
    }

    fn obj_tensor(a: &usize, b: &usize) -> usize {
        a * b
    }

    fn dom(f: &IsometryM) -> usize {
        f.dom()
    }

    fn cod(f: &IsometryM) -> usize {
        f.cod()
    }

    fn identity(a: &usize) -> IsometryM {
        IsometryM::identity(*a)
    }

    fn compose(g: &IsometryM, f: &IsometryM) -> Result<IsometryM, AuxError> {
        Ok(g.compose(f)?)
    }

    fn tensor(f: &IsometryM, g: &IsometryM) -> IsometryM {
        f.tensor(g)
    }

    fn ridm(f: &IsometryM) -> IsometryM {
        IsometryM::identity(f.dom())
    }

    fn symmetry(a: &usize, b: &usize) -> IsometryM {
        swap(*a, *b).as_isometry()
    }

    fn interchange(b: &usize, e: &usize, b2: &usize, e2: &usize) -> IsometryM {
        permutation_matrix(&coherence(Coherence::Interchange { b: *b, e: *e, b2: *b2, e2: *e2 }))
    }

    fn retype(f: IsometryM, dom: &usize, cod: &usize) -> Result<IsometryM, AuxError> {
        if (f.dom(), f.cod()) != (*dom, *cod) {
            return Err(AuxError::Mismatch(format!(
                "isometry {}->{} cannot be read as {dom}->{cod}",
                f.dom(),
                f.cod()
            )));
        }
        Ok(f)
    }
}

/// A representative `f : A → B ⊗ E` of a garbage-carrying morphism `A → B`.
#[derive(Clone, Debug)]
pub struct AuxMorphism<B: AuxBase> {
    dom: B::Obj,
    cod: B::Obj,
    garbage: B::Obj,
    core: B::Mor,
}

impl<B: AuxBase> AuxMorphism<B> {
    /// Wrap `core : A → cod ⊗ garbage`; the core's codomain is reread as that product.
    pub fn new(core: B::Mor, cod: B::Obj, garbage: B::Obj) -> Result<Self, AuxError> {
        let dom = B::dom(&core);
        let target = B::obj_tensor(&cod, &garbage);
        if B::cod(&core) != target {
            return Err(AuxError::Mismatch(format!(
                "core codomain {:?} does not factor as {:?} ⊗ {:?}",
                B::cod(&core),
                cod,
                garbage
            )));
        }
        let core = B::retype(core, &dom, &target)?;
        Ok(AuxMorphism { dom, cod, garbage, core })
    }

    pub fn dom(&self) -> &B::Obj {
        &self.dom
    }

    pub fn cod(&self) -> &B::Obj {
        &self.cod
    }

    pub fn garbage(&self) -> &B::Obj {
        &self.garbage
    }

    pub fn core(&self) -> &B::Mor {
        &self.core
    }

    /// `[ρ⁻¹, I]`.
    pub fn identity(a: &B::Obj) -> Self {
        Self::embed(B::identity(a))
    }

    /// `E(f) = [ρ⁻¹ ∘ f, I]`.
    pub fn embed(f: B::Mor) -> Self {
        let cod = B::cod(&f);
        AuxMorphism::new(f, cod, B::unit()).expect("f : A → B ⊗ I")
    }

    /// `self ∘ f = [α ∘ (g ⊗ id) ∘ f, E' ⊗ E]`.
    pub fn compose(&self, f: &Self) -> Result<Self, AuxError> {
        if f.cod != self.dom {
            return Err(AuxError::Mismatch(format!("cannot compose {:?} after codomain {:?}", self.dom, f.cod)));
        }
        let lifted = B::tensor(&self.core, &B::identity(&f.garbage));
        let f_core = B::retype(f.core.clone(), &f.dom, &B::obj_tensor(&self.dom, &f.garbage))?;
        let core = B::compose(&lifted, &f_core)?;
        AuxMorphism::new(core, self.cod.clone(), B::obj_tensor(&self.garbage, &f.garbage))
    }

    /// `ridm [f, E] = [ρ⁻¹ ∘ ridm f, I]`.
    pub fn ridm(&self) -> Self {
        Self::embed(B::ridm(&self.core))
    }

    /// `[ϑ ∘ (f ⊗ f'), E ⊗ E']`.
    pub fn tensor(&self, g: &Self) -> Self {
        let theta = B::interchange(&self.cod, &self.garbage, &g.cod, &g.garbage);
        let product = B::tensor(&self.core, &g.core);
        let core = B::compose(&theta, &product).expect("ϑ matches the product codomain");
        AuxMorphism::new(core, B::obj_tensor(&self.cod, &g.cod), B::obj_tensor(&self.garbage, &g.garbage))
            .expect("ϑ lands in (B ⊗ B') ⊗ (E ⊗ E')")
    }

    /// The total map `! = [λ⁻¹, A] : A → I`.
    pub fn bang(a: &B::Obj) -> Self {
        AuxMorphism::new(B::identity(a), B::unit(), a.clone()).expect("A = I ⊗ A")
    }

    /// `π₁ : A ⊗ B → A`, keeping `B` as garbage.
    pub fn proj1(a: &B::Obj, b: &B::Obj) -> Self {
        AuxMorphism::new(B::identity(&B::obj_tensor(a, b)), a.clone(), b.clone()).expect("A ⊗ B")
    }

    /// `π₂ : A ⊗ B → B`, keeping `A` as garbage.
    pub fn proj2(a: &B::Obj, b: &B::Obj) -> Self {
        AuxMorphism::new(B::symmetry(a, b), b.clone(), a.clone()).expect("γ : A ⊗ B → B ⊗ A")
    }

    /// Symmetry `γ` embedded with trivial garbage.
    pub fn symmetry(a: &B::Obj, b: &B::Obj) -> Self {
        Self::embed(B::symmetry(a, b))
    }

    /// `[f, E] = π₁ ∘ E(f)`: returns `(E(f), π₁)`.
    pub fn factorize(&self) -> (Self, Self) {
        let embedded = Self::embed(self.core.clone());
        let embedded = AuxMorphism { cod: B::obj_tensor(&self.cod, &self.garbage), ..embedded };
        (embedded, Self::proj1(&self.cod, &self.garbage))
    }

    pub fn is_total(&self) -> bool
    where
        Self: AuxEquality,
    {
        self.ridm().aux_equals(&Self::identity(&self.dom))
    }
}

/// Decidable equality of garbage-carrying morphisms.
pub trait AuxEquality {
    fn aux_equals(&self, other: &Self) -> bool;
}

/// Canonical representative of a class over partial injections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PInjAuxNormal {
    /// `π₁ ∘ f`
    pub pfn: PartialFn,
    /// Defined inputs grouped by garbage value; blocks ordered by smallest member.
    pub partition: Vec<Vec<usize>>,
}

/// A single mediation step `(id_B ⊗ h) ∘ from = to` (forward) or `(id_B ⊗ h) ∘ to = from` (backward).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MediatorStep {
    pub mediator: PartialInj,
    pub forward: bool,
}

/// Zigzag of mediators relating two representatives, with the intermediate cores.
#[derive(Clone, Debug, Serialize)]
pub struct MediatorWitness {
    pub steps: Vec<MediatorStep>,
    pub intermediates: Vec<AuxMorphism<PInjBase>>,
}

impl MediatorWitness {
    /// Replay every triangle in the zigzag from `f` to `g`.
    pub fn verify(&self, f: &AuxMorphism<PInjBase>, g: &AuxMorphism<PInjBase>) -> bool {
        if self.steps.len() != self.intermediates.len() + 1 {
            return false;
        }
        let chain: Vec<&AuxMorphism<PInjBase>> =
            std::iter::once(f).chain(self.intermediates.iter()).chain(std::iter::once(g)).collect();
        self.steps.iter().zip(chain.windows(2)).all(|(step, pair)| {
            let (from, to) = if step.forward { (pair[0], pair[1]) } else { (pair[1], pair[0]) };
            mediates(&step.mediator, from, to)
        })
    }
}

/// `from ▷ to` via `h`: equal restrictions and `(id_B ⊗ h) ∘ from = to`.
pub fn mediates(h: &PartialInj, from: &AuxMorphism<PInjBase>, to: &AuxMorphism<PInjBase>) -> bool {
    if from.dom != to.dom || from.cod != to.cod || h.dom() != &from.garbage || h.cod() != &to.garbage {
        return false;
    }
    if from.core.ridm() != to.core.ridm() {
        return false;
    }
    let lifted = PartialInj::identity(&from.cod).tensor(h);
    lifted.compose(&from.core).map(|c| c.table() == to.core.table()).unwrap_or(false)
}

impl AuxMorphism<PInjBase> {
    /// Split each defined output into its `(B, E)` coordinates.
    fn split(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let e = self.garbage.size();
        self.core.graph().map(move |(x, y)| (x, y / e, y % e))
    }

    pub fn normal_form(&self) -> PInjAuxNormal {
        let pfn = self.collapse();
        let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
        for (x, _, g) in self.split() {
            match blocks.iter_mut().find(|(key, _)| *key == g) {
                Some((_, block)) => block.push(x),
                None => blocks.push((g, vec![x])),
            }
        }
        // inputs are visited in increasing order, so blocks are already ordered by smallest member
        PInjAuxNormal { pfn, partition: blocks.into_iter().map(|(_, b)| b).collect() }
    }

    /// `π₁ ∘ f` as a partial function `A → B`.
    pub fn collapse(&self) -> PartialFn {
        let table = self.core.table().iter().map(|y| y.map(|y| y / self.garbage.size())).collect();
        PartialFn::from_table(self.dom.clone(), self.cod.clone(), table).expect("π₁ stays in range")
    }

    /// Decide `~`; when equivalent, return a one-step mediator witness.
    pub fn aux_equiv(&self, other: &Self) -> Result<Option<MediatorWitness>, AuxError> {
        self.check_endpoints(other)?;
        if self.normal_form() != other.normal_form() {
            return Ok(None);
        }
        let mut pairs: Vec<(usize, usize)> = self
            .split()
            .zip(other.split())
            .map(|((_, _, e), (_, _, e2))| (e, e2))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let mediator = PartialInj::from_graph(self.garbage.clone(), other.garbage.clone(), pairs)?;
        Ok(Some(MediatorWitness { steps: vec![MediatorStep { mediator, forward: true }], intermediates: vec![] }))
    }

    fn check_endpoints(&self, other: &Self) -> Result<(), AuxError> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(AuxError::Mismatch(format!(
                "{}->{} vs {}->{}",
                self.dom, self.cod, other.dom, other.cod
            )));
        }
        Ok(())
    }

    /// Points `I → A`: one per element, then the undefined point.
    pub fn points_of(a: &FinObj) -> Vec<Self> {
        let unit = FinObj::unit();
        let cod = a.tensor(&unit);
        (0..a.size())
            .map(|x| PartialInj::from_graph(unit.clone(), cod.clone(), [(0, x)]).expect("in range"))
            .chain(std::iter::once(PartialInj::empty(&unit, &cod)))
            .map(|core| AuxMorphism::new(core, a.clone(), unit.clone()).expect("A ⊗ I"))
            .collect()
    }

    /// The entry of [`Self::points_of`] equivalent to a point with arbitrary garbage.
    pub fn normalize_point(&self) -> Result<Self, AuxError> {
        if self.dom.size() != 1 {
            return Err(AuxError::Mismatch(format!("a point has domain I, not {}", self.dom)));
        }
        let points = Self::points_of(&self.cod);
        let index = self.collapse().apply(0).unwrap_or(self.cod.size());
        Ok(points[index].clone())
    }

    /// Bennett representative `[b_f, A]`.
    pub fn bennett(f: &PartialFn) -> Self {
        AuxMorphism::new(f.bennett(), f.cod().clone(), f.dom().clone()).expect("b_f : A → B ⊗ A")
    }
}

impl AuxEquality for AuxMorphism<PInjBase> {
    fn aux_equals(&self, other: &Self) -> bool {
        self.dom == other.dom && self.cod == other.cod && self.normal_form() == other.normal_form()
    }
}

/// Canonical representative of a class over isometries: its channel.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ChannelNormal {
    pub channel: Channel,
}

impl AuxMorphism<IsometryBase> {
    pub fn normal_form(&self) -> ChannelNormal {
        ChannelNormal { channel: self.collapse() }
    }

    /// `ρ ↦ Tr_E(f ρ f†)`.
    pub fn collapse(&self) -> Channel {
        channel_of_isometry(&self.core, self.garbage).expect("codomain factors as B ⊗ E")
    }

    /// Decide `~` by comparing channels within `tol`.
    pub fn aux_equiv(&self, other: &Self, tol: f64) -> Result<bool, AuxError> {
        if self.dom != other.dom || self.cod != other.cod {
            return Err(AuxError::Mismatch(format!(
                "{}->{} vs {}->{}",
                self.dom, self.cod, other.dom, other.cod
            )));
        }
        Ok(self.collapse().approx_eq(&other.collapse(), tol))
    }
}

impl AuxEquality for AuxMorphism<IsometryBase> {
    fn aux_equals(&self, other: &Self) -> bool {
        self.aux_equiv(other, EQ_TOL).unwrap_or(false)
    }
}

/// Wire form: `{"base":"pinj"|"isometry","garbage_shape":[..],"core":<morphism>}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "AnyAuxJson", into = "AnyAuxJson")]
pub enum AnyAux {
    PInj(AuxMorphism<PInjBase>),
    Isometry(AuxMorphism<IsometryBase>),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "base", rename_all = "lowercase")]
enum AnyAuxJson {
    Pinj { garbage_shape: Vec<usize>, core: PartialInj },
    Isometry { garbage_shape: Vec<usize>, core: IsometryM },
}

impl TryFrom<AnyAuxJson> for AnyAux {
    type Error = AuxError;

    fn try_from(json: AnyAuxJson) -> Result<Self, AuxError> {
        match json {
            AnyAuxJson::Pinj { garbage_shape, core } => {
                let garbage = FinObj::from_shape(garbage_shape.clone());
                let shape = core.cod().shape();
                let cod = if shape.ends_with(&garbage_shape) {
                    FinObj::from_shape(shape[..shape.len() - garbage_shape.len()].to_vec())
                } else if garbage.size() > 0 && core.cod().size() % garbage.size() == 0 {
                    FinObj::new(core.cod().size() / garbage.size())
                } else {
                    return Err(AuxError::Mismatch(format!(
                        "core codomain {} does not factor through garbage {}",
                        core.cod(),
                        garbage
                    )));
                };
                Ok(AnyAux::PInj(AuxMorphism::new(core, cod, garbage)?))
            }
            AnyAuxJson::Isometry { garbage_shape, core } => {
                let env: usize = garbage_shape.iter().product();
                if env == 0 || core.cod() % env != 0 {
                    return Err(AuxError::Mismatch(format!(
                        "isometry codomain {} does not factor through garbage dimension {env}",
                        core.cod()
                    )));
                }
                let cod = core.cod() / env;
                Ok(AnyAux::Isometry(AuxMorphism::new(core, cod, env)?))
            }
        }
    }
}

impl From<AnyAux> for AnyAuxJson {
    fn from(f: AnyAux) -> Self {
        match f {
            AnyAux::PInj(f) => AnyAuxJson::Pinj { garbage_shape: f.garbage.shape().to_vec(), core: f.core },
            AnyAux::Isometry(f) => AnyAuxJson::Isometry { garbage_shape: vec![f.garbage], core: f.core },
        }
    }
}

macro_rules! aux_serde {
    ($base:ty, $variant:ident, $label:literal) => {
        impl Serialize for AuxMorphism<$base> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                AnyAuxJson::from(AnyAux::$variant(self.clone())).serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for AuxMorphism<$base> {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                match AnyAux::deserialize(d)? {
                    AnyAux::$variant(f) => Ok(f),
                    _ => Err(serde::de::Error::custom(concat!("expected a ", $label, "-based morphism"))),
                }
            }
        }
    };
}

aux_serde!(PInjBase, PInj, "pinj");
aux_serde!(IsometryBase, Isometry, "isometry");

/// Wire form of a normal form: `{"pfn":..,"partition":..}` or `{"channel":..}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AnyNormal {
    PInj(PInjAuxNormal),
    Channel(ChannelNormal),
}

impl AnyAux {
    pub fn normal_form(&self) -> AnyNormal {
        match self {
            AnyAux::PInj(f) => AnyNormal::PInj(f.normal_form()),
            AnyAux::Isometry(f) => AnyNormal::Channel(f.normal_form()),
        }
    }

    pub fn compose(&self, f: &AnyAux) -> Result<AnyAux, AuxError> {
        match (self, f) {
            (AnyAux::PInj(g), AnyAux::PInj(f)) => Ok(AnyAux::PInj(g.compose(f)?)),
            (AnyAux::Isometry(g), AnyAux::Isometry(f)) => Ok(AnyAux::Isometry(g.compose(f)?)),
            _ => Err(AuxError::Mismatch("base categories differ".into())),
        }
    }

    pub fn tensor(&self, g: &AnyAux) -> Result<AnyAux, AuxError> {
        match (self, g) {
            (AnyAux::PInj(f), AnyAux::PInj(g)) => Ok(AnyAux::PInj(f.tensor(g))),
            (AnyAux::Isometry(f), AnyAux::Isometry(g)) => Ok(AnyAux::Isometry(f.tensor(g))),
            _ => Err(AuxError::Mismatch("base categories differ".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{haar_unitary, minimal_stinespring};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type PAux = AuxMorphism<PInjBase>;
    type IAux = AuxMorphism<IsometryBase>;

    fn fin(n: usize) -> FinObj {
        FinObj::new(n)
    }

    fn pfn(dom: usize, cod: usize, graph: &[(usize, usize)]) -> PartialFn {
        PartialFn::from_graph(fin(dom), fin(cod), graph.iter().copied()).unwrap()
    }

    fn aux(dom: usize, cod: usize, garbage: usize, graph: &[(usize, (usize, usize))]) -> PAux {
        let core = PartialInj::from_graph(
            fin(dom),
            fin(cod).tensor(&fin(garbage)),
            graph.iter().map(|&(x, (b, e))| (x, b * garbage + e)),
        )
        .unwrap();
        PAux::new(core, fin(cod), fin(garbage)).unwrap()
    }

    fn random_aux<R: Rng>(a: usize, b: usize, max_garbage: usize, rng: &mut R) -> PAux {
        let e = fin(rng.random_range(0..=max_garbage));
        let core = PartialInj::random(&fin(a), &fin(b).tensor(&e), rng);
        PAux::new(core, fin(b), e).unwrap()
    }

    // successor on {0..n-1} into {0..n}: f1(k) = (k+1, *), f2(k) = (k+1, k)
    fn successor_pair(n: usize) -> (PAux, PAux) {
        let f1 = aux(n, n + 1, 1, &(0..n).map(|k| (k, (k + 1, 0))).collect::<Vec<_>>());
        let f2 = aux(n, n + 1, n, &(0..n).map(|k| (k, (k + 1, k))).collect::<Vec<_>>());
        (f1, f2)
    }

    #[test]
    fn compose_of_bennett_images_stacks_garbage() {
        let f = pfn(3, 2, &[(0, 1), (1, 0), (2, 1)]);
        let g = pfn(2, 3, &[(0, 2), (1, 0)]);
        let gf = PAux::bennett(&g).compose(&PAux::bennett(&f)).unwrap();
        assert_eq!(gf.garbage().shape(), &[2, 3]);
        // x ↦ (g(f x), (f x, x)) with garbage index f(x)·3 + x
        for (x, y) in gf.core().graph() {
            let fx = f.apply(x).unwrap();
            assert_eq!(y, (g.apply(fx).unwrap() * 2 + fx) * 3 + x);
        }
        assert_eq!(gf.collapse(), g.compose(&f).unwrap());
    }

    #[test]
    fn unit_laws_and_identity_normal_form() {
        let id = PAux::identity(&fin(3));
        let nf = id.normal_form();
        assert_eq!(nf.pfn, PartialFn::identity(&fin(3)));
        assert_eq!(nf.partition, vec![vec![0, 1, 2]]);
        let f = aux(3, 2, 2, &[(0, (1, 0)), (2, (1, 1))]);
        assert!(PAux::identity(&fin(2)).compose(&f).unwrap().aux_equals(&f));
        assert!(f.compose(&PAux::identity(&fin(3))).unwrap().aux_equals(&f));
    }

    #[test]
    fn bennett_identity_differs_from_identity_until_ext() {
        let id = pfn(3, 3, &[(0, 0), (1, 1), (2, 2)]);
        let b = PAux::bennett(&id);
        let nf = b.normal_form();
        assert_eq!(nf.partition, vec![vec![0], vec![1], vec![2]]);
        assert!(b.aux_equiv(&PAux::identity(&fin(3))).unwrap().is_none());
        assert_eq!(b.collapse(), PAux::identity(&fin(3)).collapse());
    }

    #[test]
    fn ridm_examples() {
        let total = aux(2, 2, 1, &[(0, (1, 0)), (1, (0, 0))]);
        assert!(total.ridm().aux_equals(&PAux::identity(&fin(2))));
        let partial = aux(2, 2, 2, &[(0, (1, 1))]);
        let nf = partial.ridm().normal_form();
        assert_eq!(nf.pfn, pfn(2, 2, &[(0, 0)]));
        assert_eq!(nf.partition, vec![vec![0]]);
    }

    #[test]
    fn tensor_examples() {
        let id2 = PAux::identity(&fin(2));
        let id3 = PAux::identity(&fin(3));
        assert!(id2.tensor(&id3).aux_equals(&PAux::identity(&fin(6))));

        let f = pfn(2, 2, &[(0, 1), (1, 1)]);
        let g = pfn(2, 3, &[(0, 0), (1, 2)]);
        let t = PAux::bennett(&f).tensor(&PAux::bennett(&g));
        let nf = t.normal_form();
        assert_eq!(nf.pfn, f.tensor(&g));
        // garbage (x, y) separates every input pair: all-singleton blocks
        assert_eq!(nf.partition, (0..4).map(|i| vec![i]).collect::<Vec<_>>());
    }

    #[test]
    fn embed_is_functorial() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        assert!(PAux::embed(PartialInj::identity(&fin(3))).aux_equals(&PAux::identity(&fin(3))));
        for _ in 0..200 {
            let (a, b, c) = (rng.random_range(0..=4), rng.random_range(0..=4), rng.random_range(0..=4));
            let f = PartialInj::random(&fin(a), &fin(b), &mut rng);
            let g = PartialInj::random(&fin(b), &fin(c), &mut rng);
            let lhs = PAux::embed(g.compose(&f).unwrap());
            let rhs = PAux::embed(g.clone()).compose(&PAux::embed(f.clone())).unwrap();
            assert!(lhs.aux_equals(&rhs));
            assert!(PAux::embed(f.ridm()).aux_equals(&PAux::embed(f.clone()).ridm()));
        }
    }

    #[test]
    fn bang_examples() {
        let b = PAux::bang(&fin(3));
        let nf = b.normal_form();
        assert!(nf.pfn.is_total());
        assert_eq!(nf.partition, vec![vec![0], vec![1], vec![2]]);
        assert!(b.is_total());
    }

    #[test]
    fn projections_are_total() {
        for (a, b) in [(1, 1), (2, 3), (3, 2)] {
            let p1 = PAux::proj1(&fin(a), &fin(b));
            let p2 = PAux::proj2(&fin(a), &fin(b));
            assert!(p1.is_total() && p2.is_total());
            // on the point (x, y)
            for x in 0..a {
                for y in 0..b {
                    let point = PAux::points_of(&fin(a * b))[x * b + y].clone();
                    assert_eq!(p1.compose(&point).unwrap().collapse().apply(0), Some(x));
                    assert_eq!(p2.compose(&point).unwrap().collapse().apply(0), Some(y));
                }
            }
        }
    }

    #[test]
    fn factorization_recomposes() {
        let f = PAux::bennett(&pfn(3, 2, &[(0, 1), (2, 0)]));
        let (e, p) = f.factorize();
        assert!(p.compose(&e).unwrap().aux_equals(&f));
        let id = PAux::identity(&fin(2));
        let (e, p) = id.factorize();
        assert!(p.compose(&e).unwrap().aux_equals(&id));
    }

    #[test]
    fn collapse_of_bennett_is_identity_on_tables() {
        for a in 0..=3 {
            for b in 0..=3 {
                for f in PartialFn::enumerate(&fin(a), &fin(b)) {
                    assert_eq!(PAux::bennett(&f).collapse(), f);
                }
            }
        }
    }

    #[test]
    fn collapse_is_functorial() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..300 {
            let (a, b, c) = (rng.random_range(0..=3), rng.random_range(0..=3), rng.random_range(0..=3));
            let f = random_aux(a, b, 3, &mut rng);
            let g = random_aux(b, c, 3, &mut rng);
            assert_eq!(g.compose(&f).unwrap().collapse(), g.collapse().compose(&f.collapse()).unwrap());
        }
    }

    #[test]
    fn successor_pair_is_aux_inequivalent() {
        let (f1, f2) = successor_pair(4);
        assert_eq!(f1.normal_form().partition, vec![vec![0, 1, 2, 3]]);
        assert_eq!(f2.normal_form().partition.len(), 4);
        assert!(f1.aux_equiv(&f2).unwrap().is_none());
        assert_eq!(f1.collapse(), f2.collapse());
    }

    #[test]
    fn renamed_garbage_is_equivalent_with_witness() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..100 {
            let f = random_aux(3, 2, 3, &mut rng);
            let e = f.garbage().size();
            // relabel garbage by a random bijection
            let mut perm: Vec<usize> = (0..e).collect();
            for i in (1..e).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            let h = PartialInj::from_graph(fin(e), fin(e), perm.iter().copied().enumerate()).unwrap();
            let core = PartialInj::identity(&fin(2)).tensor(&h).compose(f.core()).unwrap();
            let g = PAux::new(core, fin(2), fin(e)).unwrap();
            let witness = f.aux_equiv(&g).unwrap().expect("bijective relabelling mediates");
            assert!(witness.verify(&f, &g));
        }
    }

    #[test]
    fn aux_equiv_rejects_endpoint_mismatch() {
        let f = PAux::identity(&fin(2));
        let g = PAux::identity(&fin(3));
        assert!(matches!(f.aux_equiv(&g), Err(AuxError::Mismatch(_))));
    }

    #[test]
    fn points_examples() {
        assert_eq!(PAux::points_of(&fin(2)).len(), 3);
        assert_eq!(PAux::points_of(&fin(0)).len(), 1);
        // point * ↦ (a, e) with garbage 3 normalises to the point a
        for a in 0..2 {
            for e in 0..3 {
                let p = aux(1, 2, 3, &[(0, (a, e))]);
                let n = p.normalize_point().unwrap();
                assert!(n.aux_equals(&PAux::points_of(&fin(2))[a]));
                assert!(p.aux_equiv(&n).unwrap().unwrap().verify(&p, &n));
            }
        }
        let undefined = aux(1, 2, 2, &[]);
        assert!(undefined.normalize_point().unwrap().aux_equals(&PAux::points_of(&fin(2))[2]));
    }

    #[test]
    fn points_exhaust_garbage_variants() {
        // every point 1 → A with garbage ≤ 2 lands on one of the |A|+1 normal points
        for a in 0..=2 {
            let points = PAux::points_of(&fin(a));
            for e in 0..=2 {
                for core in PartialInj::enumerate(&fin(1), &fin(a * e)) {
                    let p = PAux::new(core, fin(a), fin(e)).unwrap();
                    assert_eq!(points.iter().filter(|q| q.aux_equals(&p)).count(), 1);
                }
            }
        }
    }

    #[test]
    fn isometry_structure() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let id = IAux::identity(&2);
        assert!(id.collapse().approx_eq(&Channel::identity(2), 1e-12));
        let v = IsometryM::random(3, 2, &mut rng);
        let e = IAux::embed(v.clone());
        assert!(e.collapse().approx_eq(&channel_of_isometry(&v, 1).unwrap(), 1e-12));
        assert!(IAux::bang(&3).collapse().approx_eq(&Channel::discard(3), 1e-12));
        // π₁ on 2 ⊗ 3 traces out the second factor
        let p1 = IAux::proj1(&2, &3);
        let u = haar_unitary(2, &mut rng);
        let w = haar_unitary(3, &mut rng);
        let prod = IAux::embed(u.tensor(&w).as_isometry());
        assert!(p1.compose(&prod).unwrap().collapse().approx_eq(&Channel::unitary(&u).compose(&IAux::proj1(&2, &3).collapse()).unwrap(), 1e-9));
    }

    #[test]
    fn isometry_tensor_of_dilations() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for _ in 0..20 {
            let c1 = Channel::random(2, 2, 2, &mut rng);
            let c2 = Channel::random(2, 3, 3, &mut rng);
            let d1 = minimal_stinespring(&c1).unwrap();
            let d2 = minimal_stinespring(&c2).unwrap();
            let a1 = IAux::new(d1.isometry, 2, d1.env_dim).unwrap();
            let a2 = IAux::new(d2.isometry, 3, d2.env_dim).unwrap();
            let t = a1.tensor(&a2);
            assert!(t.collapse().approx_eq(&c1.tensor(&c2).unwrap(), 1e-8));
        }
    }

    // Independent oracle for `~`: build the mediation graph on every representative with
    // garbage ≤ 3 and search zigzags of length ≤ 4, ignoring edge direction.
    fn zigzag_classes(a: usize, b: usize) -> (Vec<PAux>, Vec<Vec<bool>>) {
        use std::collections::{HashMap, VecDeque};
        let reps: Vec<PAux> = (0..=3)
            .flat_map(|e| {
                PartialInj::enumerate(&fin(a), &fin(b * e))
                    .into_iter()
                    .map(move |core| PAux::new(core, fin(b), fin(e)).unwrap())
            })
            .collect();
        let index: HashMap<(usize, Vec<Option<usize>>), usize> = reps
            .iter()
            .enumerate()
            .map(|(i, r)| ((r.garbage().size(), r.core().table().to_vec()), i))
            .collect();
        let mut adj = vec![Vec::new(); reps.len()];
        for (i, f) in reps.iter().enumerate() {
            for e2 in 0..=3 {
                for h in PartialInj::enumerate(f.garbage(), &fin(e2)) {
                    let core = PartialInj::identity(&fin(b)).tensor(&h).compose(f.core()).unwrap();
                    let j = index[&(e2, core.table().to_vec())];
                    if mediates(&h, f, &reps[j]) {
                        adj[i].push(j);
                        adj[j].push(i);
                    }
                }
            }
        }
        let reach = (0..reps.len())
            .map(|start| {
                let mut depth = vec![usize::MAX; reps.len()];
                depth[start] = 0;
                let mut queue = VecDeque::from([start]);
                while let Some(u) = queue.pop_front() {
                    if depth[u] == 4 {
                        continue;
                    }
                    for &v in &adj[u] {
                        if depth[v] == usize::MAX {
                            depth[v] = depth[u] + 1;
                            queue.push_back(v);
                        }
                    }
                }
                depth.iter().map(|&d| d != usize::MAX).collect()
            })
            .collect();
        (reps, reach)
    }

    #[test]
    fn decider_matches_zigzag_search() {
        for a in 0..=3 {
            for b in 0..=3 {
                let (reps, reach) = zigzag_classes(a, b);
                for (i, f) in reps.iter().enumerate() {
                    for (j, g) in reps.iter().enumerate() {
                        let decided = f.aux_equiv(g).unwrap();
                        assert_eq!(decided.is_some(), reach[i][j], "{a}->{b}: {f:?} vs {g:?}");
                        if let Some(w) = decided {
                            assert!(w.verify(f, g));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let f = PAux::bennett(&pfn(2, 3, &[(0, 2), (1, 0)]));
        let s = serde_json::to_string(&AnyAux::PInj(f.clone())).unwrap();
        assert!(s.starts_with(r#"{"base":"pinj","garbage_shape":[2],"core":"#));
        let AnyAux::PInj(back) = serde_json::from_str::<AnyAux>(&s).unwrap() else { panic!() };
        assert!(back.aux_equals(&f));
        assert_eq!(back.cod(), &fin(3));
        let nf = serde_json::to_string(&AnyAux::PInj(f).normal_form()).unwrap();
        assert!(nf.starts_with(r#"{"pfn":"#) && nf.contains(r#""partition":[[0],[1]]"#));
        let bad = r#"{"base":"isometry","garbage_shape":[2],"core":{"rows":3,"cols":1,"entries":[[1,0],[0,0],[0,0]]}}"#;
        assert!(serde_json::from_str::<AnyAux>(bad).is_err());
    }
}
