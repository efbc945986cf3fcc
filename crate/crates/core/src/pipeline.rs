//! Ancilla inputs and reversible cores.
//!
//! A unitary `U` on `A ⊕ E` with ancilla summand `E` presents the isometry
//! given by its first `dim A` columns; every isometry arises this way by
//! completing it to a unitary. Composing with a tensor split of the output
//! gives the pipeline unitary → isometry → channel. In the other direction,
//! [`inv_pfn`] picks out the partial isomorphisms of `Pfn` (the partial
//! injections) and [`inv_cptp`] recovers the unitary, up to global phase,
//! behind a reversible channel.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classical::{FinObj, PartialFn, PartialInj};
use crate::quantum::{
    channel_of_isometry, complete_to_unitary, extract_unitary, minimal_stinespring, Channel, IsometryM, QuantumError,
    UnitaryM, EQ_TOL, PURITY_TOL,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// A unitary on `A ⊕ E = B` read as a morphism `A → B` with ancilla input `E`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InpUnitary {
    in_dim: usize,
    anc_dim: usize,
    out_dim: usize,
    u: UnitaryM,
}

impl InpUnitary {
    pub fn new(in_dim: usize, anc_dim: usize, u: UnitaryM) -> Result<Self, PipelineError> {
        if in_dim + anc_dim != u.dim() {
            return Err(PipelineError::Dimension(format!(
                "{in_dim} + {anc_dim} inputs do not match a unitary on {}",
                u.dim()
            )));
        }
        Ok(InpUnitary { in_dim, anc_dim, out_dim: u.dim(), u })
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn anc_dim(&self) -> usize {
        self.anc_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn unitary(&self) -> &UnitaryM {
        &self.u
    }

    /// `U ∘ (I_A ⊕ h)` for a unitary `h` on the ancilla summand.
    pub fn mediate(&self, h: &UnitaryM) -> Result<Self, PipelineError> {
        if h.dim() != self.anc_dim {
            return Err(PipelineError::Dimension(format!("mediator on {} for ancilla {}", h.dim(), self.anc_dim)));
        }
        let n = self.out_dim;
        let a = self.in_dim;
        let block = crate::quantum::CMatrix::from_fn(n, n, |r, c| match (r < a, c < a) {
            (true, true) if r == c => crate::quantum::C64::new(1.0, 0.0),
            (false, false) => h.matrix()[(r - a, c - a)],
            _ => crate::quantum::C64::new(0.0, 0.0),
        });
        let u = self.u.compose(&UnitaryM::new(block)?)?;
        InpUnitary::new(self.in_dim, self.anc_dim, u)
    }
}

/// A unitary modulo global phase, stored as its phase-fixed representative.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitaryPhaseClass {
    rep: UnitaryM,
}

impl UnitaryPhaseClass {
    pub fn of(u: &UnitaryM) -> Self {
        UnitaryPhaseClass { rep: u.phase_fixed() }
    }

    pub fn rep(&self) -> &UnitaryM {
        &self.rep
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rep.dim() == other.rep.dim() && self.rep.matrix().approx_eq(other.rep.matrix(), tol)
    }
}

/// The first `in_dim` columns of `U`.
pub fn inp_to_isometry(u: &InpUnitary) -> IsometryM {
    IsometryM::new(u.u.matrix().leading_columns(u.in_dim)).expect("columns of a unitary are orthonormal")
}

/// Complete `V` to a unitary; the ancilla is the `rows − cols` missing inputs.
pub fn isometry_to_inp(v: &IsometryM) -> InpUnitary {
    let u = complete_to_unitary(v);
    InpUnitary::new(v.dom(), v.cod() - v.dom(), u).expect("completion is square on cod")
}

/// Adjoining an empty ancilla summand changes nothing on partial injections.
pub fn inp_pinj_conservative(f: &PartialInj) -> PartialInj {
    let zero = PartialInj::empty(&FinObj::new(0), &FinObj::new(0));
    let extended = f.direct_sum(&zero);
    assert_eq!(extended.table(), f.table(), "⊕ with the empty set is a no-op on tables");
    f.clone()
}

/// `U` on `dim = A + anc`, reading its first `A` columns as `A → B ⊗ E` with `dim E = env_dim`.
pub fn unitary_to_channel(u: &UnitaryM, anc_dim: usize, env_dim: usize) -> Result<Channel, PipelineError> {
    if anc_dim >= u.dim() {
        return Err(PipelineError::Dimension(format!("ancilla {anc_dim} leaves no input on {}", u.dim())));
    }
    if env_dim == 0 || u.dim() % env_dim != 0 {
        return Err(PipelineError::Dimension(format!("{} does not split with environment {env_dim}", u.dim())));
    }
    let inp = InpUnitary::new(u.dim() - anc_dim, anc_dim, u.clone())?;
    Ok(channel_of_isometry(&inp_to_isometry(&inp), env_dim)?)
}

/// A unitary with ancilla and environment sizes realising `c` through [`unitary_to_channel`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Realization {
    pub unitary: UnitaryM,
    pub anc_dim: usize,
    pub env_dim: usize,
}

/// Minimal dilation of `c`, completed to a unitary.
pub fn realize_channel(c: &Channel) -> Result<Realization, PipelineError> {
    let dil = minimal_stinespring(c)?;
    let inp = isometry_to_inp(&dil.isometry);
    Ok(Realization { anc_dim: inp.anc_dim, unitary: inp.u, env_dim: dil.env_dim })
}

/// The partial isomorphism behind `f`, present exactly when `f` is injective.
pub fn inv_pfn(f: &PartialFn) -> Option<PartialInj> {
    f.as_partial_iso()
}

/// Why a channel has no unitary core.
#[derive(Debug, Error, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Irreversible {
    #[error("dimension mismatch")]
    Dimension,
    #[error("choi impure")]
    ChoiImpure,
    #[error("not unitary")]
    NotUnitary,
}

/// The unitary, up to phase, conjugation by which is `c`.
///
/// Requires equal dimensions, Choi purity at least `1 − 1e-8`, and an
/// extracted matrix unitary within `1e-8`.
pub fn inv_cptp(c: &Channel) -> Result<UnitaryPhaseClass, Irreversible> {
    if c.din() != c.dout() {
        return Err(Irreversible::Dimension);
    }
    if c.choi_purity() < 1.0 - PURITY_TOL {
        return Err(Irreversible::ChoiImpure);
    }
    let u = extract_unitary(c).map_err(|_| Irreversible::NotUnitary)?;
    if !Channel::unitary(&u).approx_eq(c, 1e-8) {
        return Err(Irreversible::NotUnitary);
    }
    Ok(UnitaryPhaseClass { rep: u })
}

/// Unitary equality modulo global phase within [`EQ_TOL`].
pub fn same_phase_class(u: &UnitaryM, v: &UnitaryM) -> bool {
    UnitaryPhaseClass::of(u).approx_eq(&UnitaryPhaseClass::of(v), EQ_TOL)
}
