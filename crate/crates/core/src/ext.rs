//! Quotient of garbage-carrying morphisms by agreement on points.
//!
//! `f ≈ g` when `f ∘ a ~ g ∘ a` for every point `a : I → A`. Over partial
//! injections this holds exactly when the underlying partial functions `π₁ ∘ f`
//! agree, so `Ext(Aux(PInj))` is equivalent to `Pfn` through the Bennett
//! embedding. Over isometries `~` already compares channels, which are
//! determined by their action on states, so the quotient changes nothing.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::aux::{AuxBase, AuxError, AuxMorphism, IsometryBase, PInjBase};
use crate::classical::{FinObj, PartialFn, PartialInj};
use crate::lawcheck::{run_property, LawReport};
use crate::quantum::{haar_unitary, minimal_stinespring, CMatrix, Channel, IsometryM, UnitaryM, C64, EQ_TOL};

/// A class under `≈`, stored as an arbitrary representative.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
#[serde(bound(serialize = "AuxMorphism<B>: Serialize", deserialize = "AuxMorphism<B>: Deserialize<'de>"))]
pub struct ExtMorphism<B: AuxBase> {
    rep: AuxMorphism<B>,
}

impl<B: AuxBase> ExtMorphism<B> {
    pub fn new(rep: AuxMorphism<B>) -> Self {
        ExtMorphism { rep }
    }

    pub fn rep(&self) -> &AuxMorphism<B> {
        &self.rep
    }

    pub fn into_rep(self) -> AuxMorphism<B> {
        self.rep
    }

    pub fn dom(&self) -> &B::Obj {
        self.rep.dom()
    }

    pub fn cod(&self) -> &B::Obj {
        self.rep.cod()
    }

    pub fn identity(a: &B::Obj) -> Self {
        Self::new(AuxMorphism::identity(a))
    }

    pub fn compose(&self, f: &Self) -> Result<Self, AuxError> {
        Ok(Self::new(self.rep.compose(&f.rep)?))
    }

    pub fn tensor(&self, g: &Self) -> Self {
        Self::new(self.rep.tensor(&g.rep))
    }

    pub fn ridm(&self) -> Self {
        Self::new(self.rep.ridm())
    }

    fn check_endpoints(&self, other: &Self) -> Result<(), AuxError> {
        if self.dom() != other.dom() || self.cod() != other.cod() {
            return Err(AuxError::Mismatch(format!(
                "{:?}->{:?} vs {:?}->{:?}",
                self.dom(),
                self.cod(),
                other.dom(),
                other.cod()
            )));
        }
        Ok(())
    }
}

/// The decider for `≈`.
pub trait ExtEquality {
    fn ext_equiv(&self, other: &Self) -> Result<bool, AuxError>;
}

impl ExtEquality for ExtMorphism<PInjBase> {
    /// Restrictions agree and `π₁ ∘ f = π₁ ∘ g`; garbage partitions are ignored.
    fn ext_equiv(&self, other: &Self) -> Result<bool, AuxError> {
        self.check_endpoints(other)?;
        let (f, g) = (self.rep.collapse(), other.rep.collapse());
        Ok(f.ridm() == g.ridm() && f == g)
    }
}

impl ExtEquality for ExtMorphism<IsometryBase> {
    fn ext_equiv(&self, other: &Self) -> Result<bool, AuxError> {
        self.rep.aux_equiv(&other.rep, EQ_TOL)
    }
}

/// `f ↦ [b_f, A]`.
pub fn pfn_functor(f: &PartialFn) -> ExtMorphism<PInjBase> {
    ExtMorphism::new(AuxMorphism::bennett(f))
}

/// `[f, E] ↦ π₁ ∘ f`, inverse to [`pfn_functor`] up to `≈`.
pub fn pfn_normalize(f: &ExtMorphism<PInjBase>) -> PartialFn {
    f.rep.collapse()
}

/// Garbage-carrying representative of `p` with randomly chosen garbage values.
pub fn random_representative<R: Rng + ?Sized>(p: &PartialFn, rng: &mut R) -> AuxMorphism<PInjBase> {
    let (a, b) = (p.dom().size(), p.cod().size());
    let fiber = (0..b).map(|y| p.graph().filter(|&(_, v)| v == y).count()).max().unwrap_or(0);
    let e = rng.random_range(fiber.max(1)..=a.max(1) + 1);
    let mut used = vec![vec![false; e]; b];
    let graph: Vec<(usize, usize)> = p
        .graph()
        .map(|(x, y)| {
            let free: Vec<usize> = (0..e).filter(|&g| !used[y][g]).collect();
            let g = free[rng.random_range(0..free.len())];
            used[y][g] = true;
            (x, y * e + g)
        })
        .collect();
    let garbage = FinObj::new(e);
    let core = PartialInj::from_graph(p.dom().clone(), p.cod().tensor(&garbage), graph).expect("distinct pairs");
    AuxMorphism::new(core, p.cod().clone(), garbage).expect("B ⊗ E")
}

fn json<T: Serialize>(t: &T) -> serde_json::Value {
    serde_json::to_value(t).expect("serialisable")
}

/// Samples `≈`-equivalent pairs and checks that composition, tensor and
/// restriction respect `≈`, over partial injections and over isometries.
pub fn ext_congruence_check(trials: u64, seed: u64) -> LawReport {
    run_property("Ext(Aux(PInj)),Ext(Aux(Isometry))", "ext.congruence", trials, seed, |rng| {
        let size = |rng: &mut rand_chacha::ChaCha8Rng| FinObj::new(rng.random_range(0..=3));
        let (a, b, c, d) = (size(rng), size(rng), size(rng), size(rng));
        let p = PartialFn::random(&a, &b, rng);
        let f = ExtMorphism::new(random_representative(&p, rng));
        let f2 = ExtMorphism::new(random_representative(&p, rng));
        let g = ExtMorphism::new(random_representative(&PartialFn::random(&b, &c, rng), rng));
        let h = ExtMorphism::new(random_representative(&PartialFn::random(&d, &a, rng), rng));
        let k = ExtMorphism::new(random_representative(&PartialFn::random(&c, &d, rng), rng));
        let fail = |what: &str| Err((what.to_string(), serde_json::json!({"f": json(&f), "f2": json(&f2)})));
        let holds = |x: Result<ExtMorphism<PInjBase>, AuxError>, y: Result<ExtMorphism<PInjBase>, AuxError>| {
            matches!((x, y), (Ok(x), Ok(y)) if x.ext_equiv(&y).unwrap_or(false))
        };
        if !holds(g.compose(&f), g.compose(&f2)) {
            return fail("g ∘ f ≈ g ∘ f'");
        }
        if !holds(f.compose(&h), f2.compose(&h)) {
            return fail("f ∘ h ≈ f' ∘ h");
        }
        if !holds(Ok(f.tensor(&k)), Ok(f2.tensor(&k))) || !holds(Ok(k.tensor(&f)), Ok(k.tensor(&f2))) {
            return fail("f ⊗ k ≈ f' ⊗ k");
        }
        if !holds(Ok(f.ridm()), Ok(f2.ridm())) {
            return fail("ridm f ≈ ridm f'");
        }

        // two dilations of one channel: minimal, and with the environment pushed through an isometry
        let (din, dout) = (rng.random_range(1..=2), rng.random_range(1..=2));
        let ch = Channel::random(din, dout, rng.random_range(1..=din * dout), rng);
        let dil = minimal_stinespring(&ch).expect("valid channel");
        let w = IsometryM::random(dil.env_dim + 1, dil.env_dim, rng);
        let widened = IsometryM::identity(dout).tensor(&w).compose(&dil.isometry).expect("dimensions agree");
        let v1 = ExtMorphism::new(AuxMorphism::<IsometryBase>::new(dil.isometry.clone(), dout, dil.env_dim).unwrap());
        let v2 = ExtMorphism::new(AuxMorphism::<IsometryBase>::new(widened, dout, dil.env_dim + 1).unwrap());
        let qfail = |what: &str| Err((what.to_string(), serde_json::json!({"channel": json(&ch)})));
        let id2 = ExtMorphism::<IsometryBase>::identity(&2);
        let entangle = ExtMorphism::new(AuxMorphism::embed(entangling(dout).as_isometry()));
        let lhs = entangle.compose(&v1.tensor(&id2)).expect("dimensions agree");
        let rhs = entangle.compose(&v2.tensor(&id2)).expect("dimensions agree");
        if !lhs.rep().collapse().approx_eq(&rhs.rep().collapse(), 1e-8) {
            return qfail("U ∘ (f ⊗ id) ≈ U ∘ (f' ⊗ id)");
        }
        let post = ExtMorphism::new(AuxMorphism::<IsometryBase>::new(IsometryM::random(dout * 2, dout, rng), dout, 2).unwrap());
        let (l, r) = (post.compose(&v1).unwrap(), post.compose(&v2).unwrap());
        if !l.rep().collapse().approx_eq(&r.rep().collapse(), 1e-8) {
            return qfail("g ∘ f ≈ g ∘ f'");
        }
        Ok(())
    })
}

/// Controlled-NOT style unitary on `d ⊗ 2`: flips the qubit when the first factor is nonzero.
pub fn entangling(d: usize) -> UnitaryM {
    let n = 2 * d;
    let m = CMatrix::from_fn(n, n, |r, c| {
        let (x, b) = (c / 2, c % 2);
        let target = if x == 0 { c } else { x * 2 + (1 - b) };
        if r == target { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }
    });
    UnitaryM::new(m).expect("permutation matrix")
}

/// The `d²` states `|i⟩⟨i|`, then `(|i⟩+|j⟩)(⟨i|+⟨j|)/2` and `(|i⟩+i|j⟩)(⟨i|−i⟨j|)/2` for `i < j`.
pub fn tomographic_family(d: usize) -> Vec<CMatrix> {
    let ket = |i: usize, j: usize, phase: C64| {
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[i] += C64::new(1.0, 0.0);
        if i != j {
            v[j] += phase;
        }
        let norm = if i == j { 1.0 } else { 0.5 };
        CMatrix::from_fn(d, d, |r, c| v[r] * v[c].conj() * norm)
    };
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
    (0..d)
        .map(|i| ket(i, i, C64::new(0.0, 0.0)))
        .chain(pairs.iter().map(|&(i, j)| ket(i, j, C64::new(1.0, 0.0))))
        .chain(pairs.iter().map(|&(i, j)| ket(i, j, C64::new(0.0, 1.0))))
        .collect()
}

/// Rebuild a Choi matrix from a channel's outputs on [`tomographic_family`].
pub fn choi_from_family(din: usize, dout: usize, outputs: &[CMatrix]) -> CMatrix {
    let pairs: Vec<(usize, usize)> = (0..din).flat_map(|i| (i + 1..din).map(move |j| (i, j))).collect();
    let np = pairs.len();
    let half = C64::new(0.5, 0.0);
    let i_unit = C64::new(0.0, 1.0);
    // Λ(|i⟩⟨j|) by linearity
    let mut blocks = vec![vec![CMatrix::zeros(dout, dout); din]; din];
    for i in 0..din {
        blocks[i][i] = outputs[i].clone();
    }
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let diag = outputs[i].add(&outputs[j]);
        let s = outputs[din + k].scale(C64::new(2.0, 0.0)).sub(&diag);
        let t = outputs[din + np + k].scale(C64::new(2.0, 0.0)).sub(&diag);
        blocks[i][j] = s.add(&t.scale(i_unit)).scale(half);
        blocks[j][i] = s.sub(&t.scale(i_unit)).scale(half);
    }
    CMatrix::from_fn(din * dout, din * dout, |r, c| blocks[r / dout][c / dout][(r % dout, c % dout)])
}

/// Mix a Kraus family by a unitary: `K'_i = Σ_j U_ij K_j` describes the same channel.
pub fn remix_kraus(ks: &[CMatrix], u: &UnitaryM) -> Vec<CMatrix> {
    (0..ks.len())
        .map(|i| {
            ks.iter().enumerate().fold(CMatrix::zeros(ks[0].rows(), ks[0].cols()), |acc, (j, k)| {
                acc.add(&k.scale(u.matrix()[(i, j)]))
            })
        })
        .collect()
}

/// Channels on `d` agreeing on the tomographic family have equal Choi matrices,
/// and distinct channels disagree on some member.
pub fn wellpointed_check_cptp(d: usize, trials: u64, seed: u64) -> LawReport {
    let family = tomographic_family(d);
    run_property("CPTP", "cptp.well_pointed", trials, seed, |rng| {
        let dout = rng.random_range(1..=d);
        let c1 = Channel::random(d, dout, rng.random_range(1..=d * dout), rng);
        let c2 = if rng.random_bool(0.5) {
            let ks = c1.kraus().expect("valid channel");
            let u = haar_unitary(ks.len(), rng);
            Channel::from_kraus(&remix_kraus(&ks, &u)).expect("remixed family is complete")
        } else {
            Channel::random(d, dout, rng.random_range(1..=d * dout), rng)
        };
        let data = || serde_json::json!({"c1": json(&c1), "c2": json(&c2)});
        let out1: Vec<CMatrix> = family.iter().map(|s| c1.apply(s).expect("dimension d")).collect();
        let out2: Vec<CMatrix> = family.iter().map(|s| c2.apply(s).expect("dimension d")).collect();
        if !choi_from_family(d, dout, &out1).approx_eq(c1.choi(), 1e-8) {
            return Err(("family reconstructs the Choi matrix".into(), data()));
        }
        let agree = out1.iter().zip(&out2).all(|(x, y)| x.approx_eq(y, 1e-8));
        let equal = c1.approx_eq(&c2, 1e-8);
        if agree != equal {
            return Err(("agreement on the family iff equal Choi".into(), data()));
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aux::AuxEquality;
    use crate::quantum::Channel;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type PExt = ExtMorphism<PInjBase>;

    fn fin(n: usize) -> FinObj {
        FinObj::new(n)
    }

    fn successor_pair(n: usize) -> (PExt, PExt) {
        let core1 = PartialInj::from_graph(fin(n), fin(n + 1), (0..n).map(|k| (k, k + 1))).unwrap();
        let core2 = PartialInj::from_graph(fin(n), fin((n + 1) * n), (0..n).map(|k| (k, (k + 1) * n + k))).unwrap();
        (
            PExt::new(AuxMorphism::new(core1, fin(n + 1), fin(1)).unwrap()),
            PExt::new(AuxMorphism::new(core2, fin(n + 1), fin(n)).unwrap()),
        )
    }

    // f ≈ g iff f ∘ a ~ g ∘ a for every point a
    fn ext_by_points(f: &PExt, g: &PExt) -> bool {
        AuxMorphism::<PInjBase>::points_of(f.dom()).iter().all(|a| {
            let (fa, ga) = (f.rep().compose(a).unwrap(), g.rep().compose(a).unwrap());
            fa.aux_equiv(&ga).unwrap().is_some()
        })
    }

    fn all_reps(a: usize, b: usize, max_garbage: usize) -> Vec<PExt> {
        (0..=max_garbage)
            .flat_map(|e| {
                PartialInj::enumerate(&fin(a), &fin(b * e))
                    .into_iter()
                    .map(move |core| PExt::new(AuxMorphism::new(core, fin(b), fin(e)).unwrap()))
            })
            .collect()
    }

    #[test]
    fn successor_variants_are_ext_equal() {
        let (f1, f2) = successor_pair(4);
        assert!(f1.rep().aux_equiv(f2.rep()).unwrap().is_none());
        assert!(f1.ext_equiv(&f2).unwrap());
        assert!(ext_by_points(&f1, &f2));
        let succ = PartialFn::from_graph(fin(4), fin(5), (0..4).map(|k| (k, k + 1))).unwrap();
        assert_eq!(pfn_normalize(&f1), succ);
        assert_eq!(pfn_normalize(&f2), succ);
    }

    #[test]
    fn per_point_mediators_exist() {
        // h_n defined only on n relates the two composites at the point n
        let (f1, f2) = successor_pair(4);
        for (n, a) in AuxMorphism::<PInjBase>::points_of(&fin(4)).iter().enumerate().take(4) {
            let (x, y) = (f1.rep().compose(a).unwrap(), f2.rep().compose(a).unwrap());
            let w = y.aux_equiv(&x).unwrap().unwrap();
            assert_eq!(w.steps[0].mediator.graph().collect::<Vec<_>>(), vec![(n, 0)]);
        }
    }

    #[test]
    fn different_functions_are_not_ext_equal() {
        let f = pfn_functor(&PartialFn::from_graph(fin(2), fin(2), [(0, 0)]).unwrap());
        let g = pfn_functor(&PartialFn::from_graph(fin(2), fin(2), [(0, 1)]).unwrap());
        assert!(!f.ext_equiv(&g).unwrap());
        let h = pfn_functor(&PartialFn::identity(&fin(3)));
        assert!(matches!(f.ext_equiv(&h), Err(AuxError::Mismatch(_))));
    }

    #[test]
    fn decider_matches_point_quantification() {
        for a in 0..=3 {
            for b in 0..=3 {
                let reps = all_reps(a, b, if a * b <= 4 { 2 } else { 1 });
                for f in &reps {
                    for g in &reps {
                        assert_eq!(f.ext_equiv(g).unwrap(), ext_by_points(f, g));
                    }
                }
            }
        }
    }

    #[test]
    fn functor_examples() {
        let id = pfn_functor(&PartialFn::identity(&fin(3)));
        assert!(id.ext_equiv(&PExt::identity(&fin(3))).unwrap());
        assert!(id.rep().aux_equiv(PExt::identity(&fin(3)).rep()).unwrap().is_none());
    }

    #[test]
    fn functor_round_trips() {
        for a in 0..=3 {
            for b in 0..=3 {
                let fns = PartialFn::enumerate(&fin(a), &fin(b));
                for f in &fns {
                    assert_eq!(&pfn_normalize(&pfn_functor(f)), f);
                    for g in &fns {
                        assert_eq!(f == g, pfn_functor(f).ext_equiv(&pfn_functor(g)).unwrap());
                    }
                }
                for r in all_reps(a, b, 2) {
                    assert!(pfn_functor(&pfn_normalize(&r)).ext_equiv(&r).unwrap());
                }
            }
        }
    }

    #[test]
    fn functor_preserves_composition_up_to_ext() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..300 {
            let (a, b, c) = (fin(rng.random_range(0..=3)), fin(rng.random_range(0..=3)), fin(rng.random_range(0..=3)));
            let f = PartialFn::random(&a, &b, &mut rng);
            let g = PartialFn::random(&b, &c, &mut rng);
            let lhs = pfn_functor(&g.compose(&f).unwrap());
            let rhs = pfn_functor(&g).compose(&pfn_functor(&f)).unwrap();
            assert!(lhs.ext_equiv(&rhs).unwrap());
            assert!(pfn_functor(&f.tensor(&g)).ext_equiv(&pfn_functor(&f).tensor(&pfn_functor(&g))).unwrap());
        }
    }

    #[test]
    fn quotient_then_induced_functor_is_collapse() {
        for a in 0..=3 {
            for b in 0..=3 {
                for r in all_reps(a, b, 2) {
                    assert_eq!(pfn_normalize(&r), r.rep().collapse());
                }
            }
        }
    }

    #[test]
    fn every_partial_point_comes_from_a_pinj_point() {
        for a in 0..=4 {
            let points: Vec<PartialFn> = PartialFn::enumerate(&fin(1), &fin(a));
            let images: Vec<PartialFn> = AuxMorphism::<PInjBase>::points_of(&fin(a)).iter().map(|p| p.collapse()).collect();
            for p in &points {
                assert!(images.contains(p));
            }
        }
    }

    #[test]
    fn random_representatives_agree_with_their_function() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..300 {
            let p = PartialFn::random(&fin(rng.random_range(0..=4)), &fin(rng.random_range(0..=4)), &mut rng);
            assert_eq!(random_representative(&p, &mut rng).collapse(), p);
        }
    }

    #[test]
    fn congruence_holds() {
        let r = ext_congruence_check(500, 5);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn congruence_examples() {
        let (f1, f2) = successor_pair(4);
        let g = pfn_functor(&PartialFn::from_graph(fin(5), fin(2), (0..5).map(|k| (k, k % 2))).unwrap());
        let (l, r) = (g.compose(&f1).unwrap(), g.compose(&f2).unwrap());
        assert_eq!(pfn_normalize(&l).table(), pfn_normalize(&r).table());
        assert!(f1.ridm().ext_equiv(&f2.ridm()).unwrap());
    }

    #[test]
    fn isometry_ext_is_channel_equality() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let c = Channel::random(2, 2, 2, &mut rng);
        let d = minimal_stinespring(&c).unwrap();
        let f = ExtMorphism::new(AuxMorphism::<IsometryBase>::new(d.isometry.clone(), 2, d.env_dim).unwrap());
        let g = ExtMorphism::new(AuxMorphism::<IsometryBase>::embed(IsometryM::identity(2)));
        assert!(f.ext_equiv(&f).unwrap());
        assert!(!f.ext_equiv(&g).unwrap());
        assert!(f.rep().aux_equals(f.rep()));
    }

    #[test]
    fn entangling_unitary_is_cnot_at_qubits() {
        let u = entangling(2);
        // |1⟩|0⟩ ↦ |1⟩|1⟩
        assert_eq!(u.matrix()[(3, 2)], C64::new(1.0, 0.0));
        assert_eq!(u.matrix()[(0, 0)], C64::new(1.0, 0.0));
    }

    #[test]
    fn tomographic_family_is_complete() {
        for d in 1..=3 {
            let fam = tomographic_family(d);
            assert_eq!(fam.len(), d * d);
            for s in &fam {
                assert!((s.trace().re - 1.0).abs() < 1e-12);
                assert!(s.hermiticity_residual() < 1e-15);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let c = Channel::random(3, 2, 3, &mut rng);
        let outs: Vec<CMatrix> = tomographic_family(3).iter().map(|s| c.apply(s).unwrap()).collect();
        assert!(choi_from_family(3, 2, &outs).approx_eq(c.choi(), 1e-10));
    }

    #[test]
    fn identity_and_dephasing_differ_on_plus() {
        let fam = tomographic_family(2);
        let plus = &fam[2];
        let (id, deph) = (Channel::identity(2), Channel::dephasing(2));
        assert!(!id.apply(plus).unwrap().approx_eq(&deph.apply(plus).unwrap(), 1e-3));
        for s in &fam[..2] {
            assert!(id.apply(s).unwrap().approx_eq(&deph.apply(s).unwrap(), 1e-12));
        }
    }

    #[test]
    fn remixed_kraus_gives_the_same_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let c = Channel::random(2, 3, 3, &mut rng);
        let ks = c.kraus().unwrap();
        let u = haar_unitary(ks.len(), &mut rng);
        assert!(Channel::from_kraus(&remix_kraus(&ks, &u)).unwrap().approx_eq(&c, 1e-9));
    }

    #[test]
    fn wellpointedness_holds() {
        for d in 1..=3 {
            let r = wellpointed_check_cptp(d, 200, d as u64);
            assert!(r.passed, "{r:?}");
        }
    }
}
