//! Finite sets with partial functions (`Pfn`) and partial injections (`PInj`).
//!
//! Elements of a set of size `n` are `0..n`. A set may carry a shape: a list of
//! factor sizes read in row-major mixed radix, so the element `(x, y)` of
//! `A ⊗ B` has flat index `x * |B| + y`. Under this indexing the associator and
//! unitors are identity permutations; the symmetry and the middle-four
//! interchange are genuine permutations and are produced by [`coherence`].

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassicalError {
    #[error("object mismatch: expected size {expected}, found {found}")]
    Mismatch { expected: usize, found: usize },
    #[error("input {0} appears more than once in the graph")]
    NotFunctional(usize),
    #[error("output {0} is hit more than once; the graph is not injective")]
    NotInjective(usize),
    #[error("pair ({0}, {1}) is out of range")]
    OutOfRange(usize, usize),
}

/// A finite set, optionally annotated with a tensor shape.
///
/// Objects are identified by cardinality: two objects with different shapes
/// but the same size are the same set under the strict mixed-radix reading.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinObj {
    shape: Vec<usize>,
}

impl PartialEq for FinObj {
    fn eq(&self, other: &Self) -> bool {
        self.size() == other.size()
    }
}

impl Eq for FinObj {}

impl FinObj {
    pub fn new(size: usize) -> Self {
        FinObj { shape: vec![size] }
    }

    pub fn from_shape(shape: Vec<usize>) -> Self {
        FinObj { shape }
    }

    /// The tensor unit: the one-point set, with empty shape.
    pub fn unit() -> Self {
        FinObj { shape: Vec::new() }
    }

    pub fn size(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn tensor(&self, other: &FinObj) -> FinObj {
        let mut shape = self.shape.clone();
        shape.extend_from_slice(&other.shape);
        FinObj { shape }
    }

    /// Disjoint union; left summand occupies `0..|A|`, right summand is offset.
    pub fn sum(&self, other: &FinObj) -> FinObj {
        FinObj::new(self.size() + other.size())
    }
}

impl fmt::Display for FinObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.shape)
    }
}

/// Wire format shared by partial functions and partial injections.
#[derive(Serialize, Deserialize)]
struct MorphismJson {
    dom: FinObj,
    cod: FinObj,
    graph: Vec<[usize; 2]>,
}

/// A partial function between finite sets, stored as a lookup table.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MorphismJson", into = "MorphismJson")]
pub struct PartialFn {
    dom: FinObj,
    cod: FinObj,
    table: Vec<Option<usize>>,
}

impl TryFrom<MorphismJson> for PartialFn {
    type Error = ClassicalError;

    fn try_from(json: MorphismJson) -> Result<Self, Self::Error> {
        PartialFn::from_graph(json.dom, json.cod, json.graph.iter().map(|&[x, y]| (x, y)))
    }
}

impl From<PartialFn> for MorphismJson {
    fn from(f: PartialFn) -> Self {
        let graph = f.graph().map(|(x, y)| [x, y]).collect();
        MorphismJson { dom: f.dom, cod: f.cod, graph }
    }
}

impl fmt::Debug for PartialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{} {{", self.dom, self.cod)?;
        for (i, (x, y)) in self.graph().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}↦{y}")?;
        }
        write!(f, "}}")
    }
}

impl PartialFn {
    pub fn from_graph(
        dom: FinObj,
        cod: FinObj,
        graph: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ClassicalError> {
        let mut table = vec![None; dom.size()];
        for (x, y) in graph {
            if x >= dom.size() || y >= cod.size() {
                return Err(ClassicalError::OutOfRange(x, y));
            }
            if table[x].replace(y).is_some() {
                return Err(ClassicalError::NotFunctional(x));
            }
        }
        Ok(PartialFn { dom, cod, table })
    }

    pub fn from_table(
        dom: FinObj,
        cod: FinObj,
        table: Vec<Option<usize>>,
    ) -> Result<Self, ClassicalError> {
        if table.len() != dom.size() {
            return Err(ClassicalError::Mismatch { expected: dom.size(), found: table.len() });
        }
        if let Some((x, y)) = table
            .iter()
            .enumerate()
            .find_map(|(x, y)| y.filter(|&y| y >= cod.size()).map(|y| (x, y)))
        {
            return Err(ClassicalError::OutOfRange(x, y));
        }
        Ok(PartialFn { dom, cod, table })
    }

    pub fn identity(obj: &FinObj) -> Self {
        PartialFn { dom: obj.clone(), cod: obj.clone(), table: (0..obj.size()).map(Some).collect() }
    }

    /// The nowhere-defined function.
    pub fn empty(dom: &FinObj, cod: &FinObj) -> Self {
        PartialFn { dom: dom.clone(), cod: cod.clone(), table: vec![None; dom.size()] }
    }

    pub fn dom(&self) -> &FinObj {
        &self.dom
    }

    pub fn cod(&self) -> &FinObj {
        &self.cod
    }

    pub fn apply(&self, x: usize) -> Option<usize> {
        self.table.get(x).copied().flatten()
    }

    pub fn table(&self) -> &[Option<usize>] {
        &self.table
    }

    /// Defined pairs in increasing input order.
    pub fn graph(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.table.iter().enumerate().filter_map(|(x, y)| y.map(|y| (x, y)))
    }

    pub fn is_defined(&self, x: usize) -> bool {
        self.apply(x).is_some()
    }

    pub fn is_total(&self) -> bool {
        self.table.iter().all(Option::is_some)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.size()];
        self.graph().all(|(_, y)| !std::mem::replace(&mut seen[y], true))
    }

    pub fn with_objects(mut self, dom: FinObj, cod: FinObj) -> Result<Self, ClassicalError> {
        if dom.size() != self.dom.size() {
            return Err(ClassicalError::Mismatch { expected: self.dom.size(), found: dom.size() });
        }
        if cod.size() != self.cod.size() {
            return Err(ClassicalError::Mismatch { expected: self.cod.size(), found: cod.size() });
        }
        self.dom = dom;
        self.cod = cod;
        Ok(self)
    }

    /// `self ∘ f`: first `f`, then `self`.
    pub fn compose(&self, f: &PartialFn) -> Result<PartialFn, ClassicalError> {
        if f.cod != self.dom {
            return Err(ClassicalError::Mismatch { expected: self.dom.size(), found: f.cod.size() });
        }
        let table = f.table.iter().map(|y| y.and_then(|y| self.table[y])).collect();
        Ok(PartialFn { dom: f.dom.clone(), cod: self.cod.clone(), table })
    }

    /// Restriction idempotent: the identity on the points where `self` is defined.
    pub fn ridm(&self) -> PartialFn {
        let table = self.table.iter().enumerate().map(|(x, y)| y.map(|_| x)).collect();
        PartialFn { dom: self.dom.clone(), cod: self.dom.clone(), table }
    }

    pub fn tensor(&self, g: &PartialFn) -> PartialFn {
        let (nb, nd) = (g.dom.size(), g.cod.size());
        let mut table = Vec::with_capacity(self.dom.size() * nb);
        for fx in &self.table {
            for gy in &g.table {
                table.push(match (fx, gy) {
                    (Some(a), Some(b)) => Some(a * nd + b),
                    _ => None,
                });
            }
        }
        PartialFn { dom: self.dom.tensor(&g.dom), cod: self.cod.tensor(&g.cod), table }
    }

    pub fn direct_sum(&self, g: &PartialFn) -> PartialFn {
        let offset = self.cod.size();
        let table = self
            .table
            .iter()
            .copied()
            .chain(g.table.iter().map(|y| y.map(|y| y + offset)))
            .collect();
        PartialFn { dom: self.dom.sum(&g.dom), cod: self.cod.sum(&g.cod), table }
    }

    /// The total projection `A ⊗ E → A`.
    pub fn project_first(a: &FinObj, e: &FinObj) -> PartialFn {
        let ne = e.size();
        let table = (0..a.size() * ne).map(|i| Some(i / ne)).collect();
        PartialFn { dom: a.tensor(e), cod: a.clone(), table }
    }

    /// Bennett embedding `x ↦ (f(x), x)` into `cod ⊗ dom`.
    pub fn bennett(&self) -> PartialInj {
        let n = self.dom.size();
        let table = self.table.iter().enumerate().map(|(x, y)| y.map(|y| y * n + x)).collect();
        PartialInj(PartialFn { dom: self.dom.clone(), cod: self.cod.tensor(&self.dom), table })
    }

    /// The partial-injection view of `self`, present exactly when it is injective.
    pub fn as_partial_iso(&self) -> Option<PartialInj> {
        PartialInj::new(self.clone()).ok()
    }

    pub fn random<R: Rng + ?Sized>(dom: &FinObj, cod: &FinObj, rng: &mut R) -> PartialFn {
        let nb = cod.size();
        let table = (0..dom.size())
            .map(|_| {
                let y = rng.random_range(0..=nb);
                (y < nb).then_some(y)
            })
            .collect();
        PartialFn { dom: dom.clone(), cod: cod.clone(), table }
    }

    /// Every partial function `dom → cod`, in lexicographic table order.
    pub fn enumerate(dom: &FinObj, cod: &FinObj) -> Vec<PartialFn> {
        let (n, m) = (dom.size(), cod.size());
        let mut out = Vec::new();
        let mut digits = vec![0usize; n];
        loop {
            let table = digits.iter().map(|&d| (d < m).then_some(d)).collect();
            out.push(PartialFn { dom: dom.clone(), cod: cod.clone(), table });
            // odometer over base m+1, value m encodes "undefined"
            let mut i = 0;
            loop {
                if i == n {
                    return out;
                }
                digits[i] += 1;
                if digits[i] <= m {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }
}

/// A partial injection: a partial function hitting each output at most once.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MorphismJson", into = "MorphismJson")]
pub struct PartialInj(PartialFn);

impl TryFrom<MorphismJson> for PartialInj {
    type Error = ClassicalError;

    fn try_from(json: MorphismJson) -> Result<Self, Self::Error> {
        PartialInj::new(PartialFn::try_from(json)?)
    }
}

impl From<PartialInj> for MorphismJson {
    fn from(f: PartialInj) -> Self {
        f.0.into()
    }
}

impl fmt::Debug for PartialInj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl std::ops::Deref for PartialInj {
    type Target = PartialFn;

    fn deref(&self) -> &PartialFn {
        &self.0
    }
}

impl PartialInj {
    pub fn new(f: PartialFn) -> Result<Self, ClassicalError> {
        let mut seen = vec![false; f.cod.size()];
        for (_, y) in f.graph() {
            if std::mem::replace(&mut seen[y], true) {
                return Err(ClassicalError::NotInjective(y));
            }
        }
        Ok(PartialInj(f))
    }

    pub fn from_graph(
        dom: FinObj,
        cod: FinObj,
        graph: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ClassicalError> {
        PartialInj::new(PartialFn::from_graph(dom, cod, graph)?)
    }

    pub fn identity(obj: &FinObj) -> Self {
        PartialInj(PartialFn::identity(obj))
    }

    pub fn empty(dom: &FinObj, cod: &FinObj) -> Self {
        PartialInj(PartialFn::empty(dom, cod))
    }

    pub fn as_fn(&self) -> &PartialFn {
        &self.0
    }

    pub fn into_fn(self) -> PartialFn {
        self.0
    }

    pub fn with_objects(self, dom: FinObj, cod: FinObj) -> Result<Self, ClassicalError> {
        self.0.with_objects(dom, cod).map(PartialInj)
    }

    pub fn compose(&self, f: &PartialInj) -> Result<PartialInj, ClassicalError> {
        self.0.compose(&f.0).map(PartialInj)
    }

    pub fn ridm(&self) -> PartialInj {
        PartialInj(self.0.ridm())
    }

    /// The partial inverse: the graph read backwards.
    pub fn dagger(&self) -> PartialInj {
        let mut table = vec![None; self.cod.size()];
        for (x, y) in self.graph() {
            table[y] = Some(x);
        }
        PartialInj(PartialFn { dom: self.cod.clone(), cod: self.dom.clone(), table })
    }

    pub fn tensor(&self, g: &PartialInj) -> PartialInj {
        PartialInj(self.0.tensor(&g.0))
    }

    pub fn direct_sum(&self, g: &PartialInj) -> PartialInj {
        PartialInj(self.0.direct_sum(&g.0))
    }

    pub fn random<R: Rng + ?Sized>(dom: &FinObj, cod: &FinObj, rng: &mut R) -> PartialInj {
        let m = cod.size();
        let mut free: Vec<usize> = (0..m).collect();
        let table = (0..dom.size())
            .map(|_| {
                // undefined with probability 1/(free+1), otherwise a uniformly chosen free output
                let k = rng.random_range(0..=free.len());
                (k < free.len()).then(|| free.swap_remove(k))
            })
            .collect();
        PartialInj(PartialFn { dom: dom.clone(), cod: cod.clone(), table })
    }

    /// Every partial injection `dom → cod`.
    pub fn enumerate(dom: &FinObj, cod: &FinObj) -> Vec<PartialInj> {
        fn go(
            x: usize,
            n: usize,
            used: &mut Vec<bool>,
            table: &mut Vec<Option<usize>>,
            emit: &mut dyn FnMut(&[Option<usize>]),
        ) {
            if x == n {
                emit(table);
                return;
            }
            table.push(None);
            go(x + 1, n, used, table, emit);
            table.pop();
            for y in 0..used.len() {
                if !used[y] {
                    used[y] = true;
                    table.push(Some(y));
                    go(x + 1, n, used, table, emit);
                    table.pop();
                    used[y] = false;
                }
            }
        }
        let mut out = Vec::new();
        let mut emit = |t: &[Option<usize>]| {
            out.push(PartialInj(PartialFn { dom: dom.clone(), cod: cod.clone(), table: t.to_vec() }))
        };
        go(0, dom.size(), &mut vec![false; cod.size()], &mut Vec::new(), &mut emit);
        out
    }
}

/// Structural isomorphisms of the strict monoidal structure on finite sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Coherence {
    /// `(A ⊗ B) ⊗ C → A ⊗ (B ⊗ C)`
    Assoc { a: usize, b: usize, c: usize },
    /// `I ⊗ A → A`
    LeftUnit { a: usize },
    /// `A ⊗ I → A`
    RightUnit { a: usize },
    /// `A ⊗ B → B ⊗ A`
    Symmetry { a: usize, b: usize },
    /// `(B ⊗ E) ⊗ (B' ⊗ E') → (B ⊗ B') ⊗ (E ⊗ E')`
    Interchange { b: usize, e: usize, b2: usize, e2: usize },
}

/// The index permutation realising a coherence isomorphism.
pub fn coherence(kind: Coherence) -> PartialInj {
    let perm = |dom: Vec<usize>, cod: Vec<usize>, f: &dyn Fn(usize) -> usize| {
        let dom = FinObj::from_shape(dom);
        let table = (0..dom.size()).map(|i| Some(f(i))).collect();
        PartialInj(PartialFn { dom, cod: FinObj::from_shape(cod), table })
    };
    match kind {
        Coherence::Assoc { a, b, c } => perm(vec![a, b, c], vec![a, b, c], &|i| i),
        Coherence::LeftUnit { a } => perm(vec![a], vec![a], &|i| i),
        Coherence::RightUnit { a } => perm(vec![a], vec![a], &|i| i),
        Coherence::Symmetry { a, b } => perm(vec![a, b], vec![b, a], &|i| (i % b) * a + i / b),
        Coherence::Interchange { b, e, b2, e2 } => perm(vec![b, e, b2, e2], vec![b, b2, e, e2], &|i| {
            let (x2, rest) = (i % e2, i / e2);
            let (y2, rest) = (rest % b2, rest / b2);
            let (x, y) = (rest % e, rest / e);
            ((y * b2 + y2) * e + x) * e2 + x2
        }),
    }
}
