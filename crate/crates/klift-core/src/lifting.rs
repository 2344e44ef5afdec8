//! Order-by-order lifting of modules along a power of a ring element,
//! the connecting map `alpha0` whose splitting controls each step, the
//! limit reconstruction from a long enough chain, and the multi element
//! driver with its regularity verdict.
//!
//! A stage of order `n` is a module `L` killed by the n-th power of the
//! element together with a degree 0 surjection onto the base module `M`
//! whose kernel is exactly the submodule of multiples. One step builds,
//! from a retraction of `alpha0`, an extension of `L` by a twist of `M`
//! that is a stage of order `n + 1`; when no retraction exists the step
//! reports a witness, either a nonzero kernel element of `alpha0` or a
//! non-coboundary extension class.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::ext::{extension_class, verify_ses, DerivedEntry};
use crate::gb::{vect_unit, Vect};
use crate::homtools::{elem_kernel, elem_quotient, find_isomorphism, split_injection_test};
use crate::koszul::{regular_on_ring, KoszulAlgebra, RegularityFailure};
use crate::module::{
    lift_elem_through, minimize, pushout, pushout_mediator, FPModule, ModuleMap, RSpan,
};
use crate::poly::Poly;
use crate::ring::Ring;

fn positive_degree(ring: &Ring, x: &Poly) -> Result<i64> {
    match ring.poly_degree(x)? {
        Some(d) if d >= 1 => Ok(d),
        Some(_) => Err(Error::BadParameter(
            "element must have positive degree".into(),
        )),
        None => Err(Error::BadParameter("element must be nonzero".into())),
    }
}

fn scale_elem(ring: &Ring, f: &Poly, v: &Vect) -> Vect {
    v.iter().map(|p| ring.mul(f, p)).collect()
}

fn dims_agree(a: &FPModule, b: &FPModule, lo: i64, hi: i64) -> bool {
    (lo..=hi).all(|d| a.graded_dim(d) == b.graded_dim(d))
}

/// Both column families generate the same submodule of `host`.
fn same_submodule(host: &FPModule, a: &[Vect], b: &[Vect]) -> bool {
    let ring = host.ring();
    let mut span_a: Vec<Vect> = a.to_vec();
    span_a.extend(host.rels().iter().cloned());
    let mut span_b: Vec<Vect> = b.to_vec();
    span_b.extend(host.rels().iter().cloned());
    let sa = RSpan::new(ring, &span_a, host.rank(), false);
    let sb = RSpan::new(ring, &span_b, host.rank(), false);
    b.iter().all(|c| sa.contains(c)) && a.iter().all(|c| sb.contains(c))
}

/// Minimal free cover of a module together with its syzygy.
#[derive(Debug, Clone)]
pub struct CoverData {
    /// Free module on the minimal generator degrees.
    pub cover: FPModule,
    /// Surjection from the cover onto the module.
    pub onto: ModuleMap,
    /// Kernel of the surjection.
    pub syzygy: FPModule,
    /// Inclusion of the syzygy into the cover.
    pub into_cover: ModuleMap,
}

/// Minimal free cover `P -> L` and its kernel, the syzygy module.
pub fn omega_cover(l: &FPModule) -> Result<CoverData> {
    let ring = l.ring().clone();
    let minz = minimize(l)?;
    let cover = FPModule::free(&ring, minz.module.gen_degs());
    let onto = ModuleMap::new(cover.clone(), l.clone(), 0, minz.from_min.cols().to_vec())?;
    let (syzygy, into_cover) = onto.kernel()?;
    Ok(CoverData {
        cover,
        onto,
        syzygy,
        into_cover,
    })
}

/// The connecting map of a stage together with the short sequence it
/// sits in.
#[derive(Debug, Clone)]
pub struct Alpha0Data {
    /// `alpha0: M(-n d) -> Omega/x Omega`, the connecting map itself.
    pub map: ModuleMap,
    /// Projection `Omega/x Omega -> W` onto the mod-x syzygy of the
    /// base; `map` followed by this is zero and the pair forms a short
    /// exact sequence exactly when the stage is a valid lift.
    pub onto_reduced: ModuleMap,
    /// Quotient map `Omega -> Omega/x Omega`.
    pub syzygy_reduction: ModuleMap,
    /// Cover data of the stage module the map was built from.
    pub cover: CoverData,
    /// The sequence `M(-n d) -> Omega/x Omega -> W` verified exact.
    pub exact: bool,
}

/// Check that `reduction: L -> M` is a stage of order `n` along `x`:
/// degree 0, surjective, kernel exactly `x L`, with `x^n L = 0` and
/// `x M = 0`. Returns the internal degree of `x`.
fn validate_stage(reduction: &ModuleMap, x: &Poly, n: usize) -> Result<i64> {
    let l = reduction.src();
    let m = reduction.dst();
    let ring = l.ring();
    let d = positive_degree(ring, x)?;
    if n == 0 {
        return Err(Error::BadParameter("stage order must be at least 1".into()));
    }
    if reduction.deg() != 0 {
        return Err(Error::IllFormedMap(
            "stage reduction must have degree 0".into(),
        ));
    }
    if !reduction.is_surjective()? {
        return Err(Error::CertificateFailed(
            "stage reduction is not surjective".into(),
        ));
    }
    let xn = ring.pow(x, n as u32);
    if !ModuleMap::mult_by(l, &xn)?.is_zero_map() {
        return Err(Error::CertificateFailed(format!(
            "stage module is not killed by the power {n} of the element"
        )));
    }
    if !ModuleMap::mult_by(m, x)?.is_zero_map() {
        return Err(Error::CertificateFailed(
            "base module is not killed by the element".into(),
        ));
    }
    let mults = ModuleMap::mult_by(l, x)?;
    if !reduction.compose(&mults)?.is_zero_map() {
        return Err(Error::CertificateFailed(
            "stage reduction does not kill the multiples of the element".into(),
        ));
    }
    let (_, kincl) = reduction.kernel()?;
    let mut span: Vec<Vect> = (0..l.rank())
        .map(|j| scale_elem(ring, x, &vect_unit(ring, l.rank(), j)))
        .collect();
    span.extend(l.rels().iter().cloned());
    let rs = RSpan::new(ring, &span, l.rank(), false);
    if !kincl.cols().iter().all(|c| rs.contains(c)) {
        return Err(Error::CertificateFailed(
            "stage reduction kernel is larger than the multiples of the element".into(),
        ));
    }
    Ok(d)
}

/// Connecting map of the stage `reduction: L -> M` of order `n` along
/// `x`: send a generator of `M(-n d)` to the class of `x` times a cover
/// lift of `x^(n-1)` times a preimage, inside `Omega/x Omega`. Also
/// builds the projection onto the mod-x syzygy `W` of the base and
/// verifies the resulting short sequence.
pub fn alpha0_with(reduction: &ModuleMap, x: &Poly, n: usize) -> Result<Alpha0Data> {
    let l = reduction.src().clone();
    let m = reduction.dst().clone();
    let ring = l.ring().clone();
    let xnf = ring.nf_poly(x);
    let d = validate_stage(reduction, &xnf, n)?;
    let cover = omega_cover(&l)?;
    let (sred, syzygy_reduction) = elem_quotient(&cover.syzygy, &xnf)?;
    let xpow = ring.pow(&xnf, (n - 1) as u32);

    let mut cols = Vec::with_capacity(m.rank());
    for j in 0..m.rank() {
        let unit = vect_unit(&ring, m.rank(), j);
        let ell = lift_elem_through(reduction, &unit).ok_or_else(|| {
            Error::Inconsistent("surjective stage reduction failed to lift a generator".into())
        })?;
        let scaled = scale_elem(&ring, &xpow, &ell);
        let ptil = lift_elem_through(&cover.onto, &scaled).ok_or_else(|| {
            Error::Inconsistent("free cover failed to lift a stage element".into())
        })?;
        let moved = scale_elem(&ring, &xnf, &ptil);
        let w = lift_elem_through(&cover.into_cover, &moved).ok_or_else(|| {
            Error::Inconsistent(
                "multiple of a cover lift escapes the syzygy; the power bound is violated".into(),
            )
        })?;
        cols.push(syzygy_reduction.apply(&w));
    }
    let map = ModuleMap::new(m.twist(-(n as i64) * d), sred.clone(), 0, cols)?;

    // Mod-x syzygy of the base: kernel of P/xP -> M induced by the
    // composite of the cover surjection with the stage reduction.
    let (cred, cred_proj) = elem_quotient(&cover.cover, &xnf)?;
    let base_cols: Vec<Vect> = cover
        .onto
        .cols()
        .iter()
        .map(|c| reduction.apply(c))
        .collect();
    let onto_base = ModuleMap::new(cred, m.clone(), 0, base_cols)?;
    let (reduced, red_incl) = onto_base.kernel()?;
    let mut qcols = Vec::with_capacity(cover.syzygy.rank());
    for col in cover.into_cover.cols() {
        let v = cred_proj.apply(col);
        let w = lift_elem_through(&red_incl, &v).ok_or_else(|| {
            Error::Inconsistent("syzygy image misses the mod-x syzygy of the base".into())
        })?;
        qcols.push(w);
    }
    let onto_reduced = ModuleMap::new(sred, reduced, 0, qcols)?;
    let exact = verify_ses(&map, &onto_reduced).is_ok();
    Ok(Alpha0Data {
        map,
        onto_reduced,
        syzygy_reduction,
        cover,
        exact,
    })
}

/// Find the canonical stage reduction `L/xL -> M` by isomorphism search
/// and return the composite `L -> M`. Errors with `CertificateFailed`
/// when no isomorphism is found.
pub fn stage_reduction(m: &FPModule, l: &FPModule, x: &Poly, seed: u64) -> Result<ModuleMap> {
    let ring = l.ring().clone();
    let xnf = ring.nf_poly(x);
    positive_degree(&ring, &xnf)?;
    let (lql, proj) = elem_quotient(l, &xnf)?;
    let iso = find_isomorphism(&lql, m, seed)?.ok_or_else(|| {
        Error::CertificateFailed("the stage module modulo the element is not isomorphic to the base".into())
    })?;
    iso.compose(&proj)
}

/// Connecting map for the pair `(M, L)`, finding the stage reduction by
/// isomorphism search first.
pub fn alpha0(m: &FPModule, l: &FPModule, x: &Poly, n: usize, seed: u64) -> Result<Alpha0Data> {
    let reduction = stage_reduction(m, l, x, seed)?;
    alpha0_with(&reduction, x, n)
}

/// Witness that a lifting step cannot be completed.
#[derive(Debug, Clone)]
pub enum ObstructionWitness {
    /// The short sequence exists and its extension class is not a
    /// coboundary, so no retraction of the connecting map exists.
    NonsplitClass {
        /// Ext entry the class lives in.
        entry: DerivedEntry,
        /// Cocycle coordinates of the class in the entry's level term.
        class: Vect,
    },
    /// The connecting map has a kernel, so no extension realizes the
    /// next order at all.
    ReductionKernel {
        /// A nonzero kernel element in the coordinates of the twisted base.
        element: Vect,
    },
    /// The stage element is zero in the stage ring, so a nonzero module
    /// has nothing to lift along (multi element driver only).
    CollapsedElement,
}

/// Verification flags of a constructed lifting step.
#[derive(Debug, Clone, Copy)]
pub struct LiftFlags {
    /// The power `x^(n+1)` kills the extension.
    pub annihilated: bool,
    /// `0 -> M(-n d) -> E -> L -> 0` is exact.
    pub extension_exact: bool,
    /// `E/xE` is isomorphic to the base module.
    pub reduces_to_base: bool,
    /// `E/x^n E` is isomorphic to the previous stage via the projection.
    pub truncates_to_previous: bool,
    /// The `x^n`-torsion of `E` equals `x E`.
    pub deep_torsion_matches: bool,
    /// The `x`-torsion of `E` equals `x^n E`.
    pub socle_matches: bool,
}

impl LiftFlags {
    /// All six flags hold.
    pub fn all_ok(&self) -> bool {
        self.annihilated
            && self.extension_exact
            && self.reduces_to_base
            && self.truncates_to_previous
            && self.deep_torsion_matches
            && self.socle_matches
    }
}

/// A completed lifting step.
#[derive(Debug, Clone)]
pub struct LiftStep {
    /// The extension module, a stage of order `n + 1`.
    pub extension: FPModule,
    /// Injection `M(-n d) -> E`.
    pub injection: ModuleMap,
    /// Surjection `E -> L` onto the previous stage.
    pub onto_previous: ModuleMap,
    /// Canonical stage reduction `E -> M` for the next step.
    pub reduction: ModuleMap,
    /// Verification flags of the constructed extension.
    pub flags: LiftFlags,
    /// Number of retraction alternatives beyond the particular one.
    pub alternatives: usize,
    /// Which retraction was used (0 is the particular solution).
    pub choice: usize,
}

/// Outcome of one lifting step.
#[derive(Debug, Clone)]
pub enum StepOutcome {
    /// The step succeeded and produced the next stage.
    Lifted(LiftStep),
    /// The step is obstructed; carries the witness.
    Obstructed(ObstructionWitness),
}

fn lifting_flags(
    g: &ModuleMap,
    f: &ModuleMap,
    m: &FPModule,
    x: &Poly,
    n: usize,
    reduction: Option<&ModuleMap>,
    seed: u64,
) -> Result<(LiftFlags, Option<ModuleMap>)> {
    let e = g.dst().clone();
    let ring = e.ring().clone();
    let xn = ring.pow(x, n as u32);
    let xn1 = ring.pow(x, (n + 1) as u32);

    let annihilated = ModuleMap::mult_by(&e, &xn1)?.is_zero_map();
    let extension_exact = verify_ses(g, f).is_ok();

    let (exe, exe_proj) = elem_quotient(&e, x)?;
    let (reduces_to_base, reduction_out) = match reduction {
        Some(mu) => {
            let mu_bar = ModuleMap::new(exe.clone(), m.clone(), 0, mu.cols().to_vec())?;
            (mu_bar.is_isomorphism()?, Some(mu.clone()))
        }
        None => match find_isomorphism(&exe, m, seed)? {
            Some(iso) => (true, Some(iso.compose(&exe_proj)?)),
            None => (false, None),
        },
    };

    let l = f.dst().clone();
    let (exn, _) = elem_quotient(&e, &xn)?;
    let truncates_to_previous = match ModuleMap::new(exn, l, 0, f.cols().to_vec()) {
        Ok(fbar) => fbar.is_isomorphism()?,
        Err(_) => false,
    };

    let units: Vec<Vect> = (0..e.rank()).map(|j| vect_unit(&ring, e.rank(), j)).collect();
    let xcols: Vec<Vect> = units.iter().map(|u| scale_elem(&ring, x, u)).collect();
    let xncols: Vec<Vect> = units.iter().map(|u| scale_elem(&ring, &xn, u)).collect();
    let (_, deep_incl) = elem_kernel(&e, &xn)?;
    let deep_torsion_matches = same_submodule(&e, deep_incl.cols(), &xcols);
    let (_, soc_incl) = elem_kernel(&e, x)?;
    let socle_matches = same_submodule(&e, soc_incl.cols(), &xncols);

    Ok((
        LiftFlags {
            annihilated,
            extension_exact,
            reduces_to_base,
            truncates_to_previous,
            deep_torsion_matches,
            socle_matches,
        },
        reduction_out,
    ))
}

/// Verify that `g: M(-n d) -> E`, `f: E -> L` exhibit `E` as a stage of
/// order `n + 1` over the base `M` along `x`. Returns the flags and,
/// when `E/xE` matches the base, a stage reduction `E -> M` usable for
/// the next step.
pub fn verify_lifting(
    g: &ModuleMap,
    f: &ModuleMap,
    m: &FPModule,
    x: &Poly,
    n: usize,
    seed: u64,
) -> Result<(LiftFlags, Option<ModuleMap>)> {
    if g.dst() != f.src() {
        return Err(Error::IllFormedMap(
            "the two maps do not share the middle module".into(),
        ));
    }
    let ring = g.dst().ring().clone();
    let xnf = ring.nf_poly(x);
    positive_degree(&ring, &xnf)?;
    if n == 0 {
        return Err(Error::BadParameter("stage order must be at least 1".into()));
    }
    lifting_flags(g, f, m, &xnf, n, None, seed)
}

/// One lifting step from the stage `reduction: L -> M` of order `n`,
/// using retraction number `choice` (0 is the particular solution).
pub fn lift_step_with(
    reduction: &ModuleMap,
    x: &Poly,
    n: usize,
    choice: usize,
) -> Result<StepOutcome> {
    let l = reduction.src().clone();
    let m = reduction.dst().clone();
    let ring = l.ring().clone();
    let xnf = ring.nf_poly(x);
    let a0 = alpha0_with(reduction, &xnf, n)?;

    let Some(retr) = split_injection_test(&a0.map)? else {
        let (kmod, kincl) = a0.map.kernel()?;
        if !kmod.is_zero() {
            let src = a0.map.src().clone();
            let element = kincl
                .cols()
                .iter()
                .find(|c| !src.elem_is_zero(c))
                .cloned()
                .ok_or_else(|| {
                    Error::Inconsistent("nonzero kernel without a nonzero generator".into())
                })?;
            return Ok(StepOutcome::Obstructed(ObstructionWitness::ReductionKernel {
                element,
            }));
        }
        if !a0.exact {
            return Err(Error::CertificateFailed(
                "connecting sequence is not exact; the stage is not a valid lift of the base"
                    .into(),
            ));
        }
        let (entry, class) = extension_class(&a0.map, &a0.onto_reduced)?;
        if entry.is_coboundary(&class) {
            return Err(Error::Inconsistent(
                "extension class is a coboundary but no retraction was found".into(),
            ));
        }
        return Ok(StepOutcome::Obstructed(ObstructionWitness::NonsplitClass {
            entry,
            class,
        }));
    };

    let alternatives = retr.count_alternatives();
    let beta = if choice == 0 {
        retr.beta.clone()
    } else if choice <= alternatives {
        retr.alternative(choice - 1)?
    } else {
        return Err(Error::BadParameter(format!(
            "retraction choice {choice} exceeds the {alternatives} alternatives"
        )));
    };

    let gamma = beta.compose(&a0.syzygy_reduction)?;
    let twisted = gamma.dst().clone();
    let (extension, injection, _in_p) = pushout(&gamma, &a0.cover.into_cover)?;
    let onto_previous = pushout_mediator(
        &extension,
        &ModuleMap::zero(twisted.clone(), l.clone(), 0),
        &a0.cover.onto,
    )?;
    let to_base = reduction.compose(&a0.cover.onto)?;
    let mu = pushout_mediator(
        &extension,
        &ModuleMap::zero(twisted, m.clone(), 0),
        &to_base,
    )?;
    let (flags, _) = lifting_flags(&injection, &onto_previous, &m, &xnf, n, Some(&mu), 0)?;
    Ok(StepOutcome::Lifted(LiftStep {
        extension,
        injection,
        onto_previous,
        reduction: mu,
        flags,
        alternatives,
        choice,
    }))
}

/// One lifting step for the pair `(M, L)`, finding the stage reduction
/// by isomorphism search first.
pub fn lift_step(
    m: &FPModule,
    l: &FPModule,
    x: &Poly,
    n: usize,
    seed: u64,
) -> Result<StepOutcome> {
    let reduction = stage_reduction(m, l, x, seed)?;
    lift_step_with(&reduction, x, n, 0)
}

/// Agreement record of the two step certificates: the direct retraction
/// solve and the extension class membership test.
#[derive(Debug, Clone)]
pub struct StepCertificates {
    /// A retraction of the connecting map exists.
    pub splits: bool,
    /// The connecting sequence is exact and its class is a coboundary.
    pub class_vanishes: bool,
    /// The connecting map has a nonzero kernel.
    pub kernel_obstructed: bool,
    /// The connecting sequence verified exact.
    pub sequence_exact: bool,
    /// Flags of the constructed step when a retraction exists.
    pub flags: Option<LiftFlags>,
}

/// Run both certificates for one step and cross-check them: splitting
/// must agree with class vanishing whenever the sequence is exact, and
/// a kernel rules splitting out. Disagreement raises `Inconsistent`.
pub fn step_certificates(reduction: &ModuleMap, x: &Poly, n: usize) -> Result<StepCertificates> {
    let ring = reduction.src().ring().clone();
    let xnf = ring.nf_poly(x);
    let a0 = alpha0_with(reduction, &xnf, n)?;
    let splits = split_injection_test(&a0.map)?.is_some();
    let (kmod, _) = a0.map.kernel()?;
    let kernel_obstructed = !kmod.is_zero();
    let class_vanishes = if a0.exact {
        let (entry, class) = extension_class(&a0.map, &a0.onto_reduced)?;
        entry.is_coboundary(&class)
    } else {
        false
    };
    if kernel_obstructed && splits {
        return Err(Error::Inconsistent(
            "connecting map has a kernel yet admits a retraction".into(),
        ));
    }
    if a0.exact && splits != class_vanishes {
        return Err(Error::Inconsistent(
            "retraction certificate and extension class certificate disagree".into(),
        ));
    }
    let flags = if splits {
        match lift_step_with(reduction, &xnf, n, 0)? {
            StepOutcome::Lifted(step) => Some(step.flags),
            StepOutcome::Obstructed(_) => {
                return Err(Error::Inconsistent(
                    "retraction exists but the step reports an obstruction".into(),
                ))
            }
        }
    } else {
        None
    };
    Ok(StepCertificates {
        splits,
        class_vanishes,
        kernel_obstructed,
        sequence_exact: a0.exact,
        flags,
    })
}

/// Options shared by the chain and multi element drivers.
#[derive(Debug, Clone)]
pub struct LiftOptions {
    /// Requested lift order.
    pub order: usize,
    /// Degree window bound used by reconstruction and verification.
    pub degree_bound: i64,
    /// Seed for isomorphism searches.
    pub seed: u64,
    /// How many retractions to try per step before giving up (at least 1).
    pub retry_breadth: usize,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            order: 5,
            degree_bound: 12,
            seed: 0,
            retry_breadth: 1,
        }
    }
}

/// One stage of a lifting chain.
#[derive(Debug, Clone)]
pub struct LiftStage {
    /// Order of the stage (1 is the base itself).
    pub order: usize,
    /// The stage module.
    pub module: FPModule,
    /// Stage reduction onto the base.
    pub reduction: ModuleMap,
}

/// Record of one completed step in a chain.
#[derive(Debug, Clone)]
pub struct StageRecord {
    /// Order of the stage the step produced.
    pub order: usize,
    /// Verification flags of the step.
    pub flags: LiftFlags,
    /// Retraction alternatives that were available.
    pub alternatives: usize,
    /// Retraction index that was used.
    pub choice: usize,
}

/// A chain of lifts of the base module along the element.
#[derive(Debug, Clone)]
pub struct LiftChain {
    /// The base module (stage of order 1).
    pub base: FPModule,
    /// Normal form of the element lifted along.
    pub element: Poly,
    /// Stages, starting with the base at order 1.
    pub stages: Vec<LiftStage>,
    /// Step records (one fewer than stages).
    pub records: Vec<StageRecord>,
    /// Highest order reached.
    pub reached: usize,
    /// Order that was requested.
    pub requested: usize,
    /// Order actually aimed for (requested, extended for reconstruction).
    pub target: usize,
    /// Witness of the deepest obstruction when the target was not reached.
    pub obstruction: Option<ObstructionWitness>,
    /// Order of the stage whose step was obstructed, if any.
    pub obstructed_at: Option<usize>,
}

/// Order after which the reconstruction window below `degree_bound` is
/// stable: past the point where the next power of the element clears
/// the bound, plus one safety step.
fn needed_order(m: &FPModule, elem_deg: i64, degree_bound: i64) -> usize {
    let Some(mindeg) = m.min_gen_degree() else {
        return 2;
    };
    if degree_bound < mindeg {
        return 2;
    }
    let span = degree_bound - mindeg;
    ((span + elem_deg - 1) / elem_deg + 2) as usize
}

/// Lift the base module order by order along `x` up to the requested
/// order, extending the target so a later reconstruction at the given
/// degree bound is possible. Backtracks over retraction choices up to
/// the configured breadth; when every branch is obstructed the deepest
/// obstruction is reported on the returned chain.
pub fn lift_to_order(m: &FPModule, x: &Poly, opts: &LiftOptions) -> Result<LiftChain> {
    let ring = m.ring().clone();
    let xnf = ring.nf_poly(x);
    let d = positive_degree(&ring, &xnf)?;
    if opts.order == 0 {
        return Err(Error::BadParameter("requested order must be at least 1".into()));
    }
    if !ModuleMap::mult_by(m, &xnf)?.is_zero_map() {
        return Err(Error::BadParameter(
            "the base module must be killed by the element".into(),
        ));
    }
    let target = opts.order.max(needed_order(m, d, opts.degree_bound));
    let breadth = opts.retry_breadth.max(1);

    let mut stages = vec![LiftStage {
        order: 1,
        module: m.clone(),
        reduction: ModuleMap::identity(m),
    }];
    let mut records: Vec<StageRecord> = Vec::new();
    let mut best: Option<(Vec<LiftStage>, Vec<StageRecord>, ObstructionWitness, usize)> = None;
    let mut pending_choice = 0usize;
    let mut budget = target.saturating_mul(breadth).saturating_add(16);

    let completed = 'search: loop {
        if stages.len() >= target {
            break true;
        }
        if budget == 0 {
            break false;
        }
        budget -= 1;
        let n = stages.len();
        let choice = pending_choice;
        pending_choice = 0;
        let outcome = {
            let stage = stages.last().expect("chain never empty");
            lift_step_with(&stage.reduction, &xnf, n, choice)?
        };
        match outcome {
            StepOutcome::Lifted(step) => {
                if !step.flags.all_ok() {
                    return Err(Error::Inconsistent(
                        "constructed lifting step failed its verification flags".into(),
                    ));
                }
                records.push(StageRecord {
                    order: n + 1,
                    flags: step.flags,
                    alternatives: step.alternatives,
                    choice,
                });
                stages.push(LiftStage {
                    order: n + 1,
                    module: step.extension,
                    reduction: step.reduction,
                });
            }
            StepOutcome::Obstructed(w) => {
                let deeper = best.as_ref().map(|(_, _, _, b)| n > *b).unwrap_or(true);
                if deeper {
                    best = Some((stages.clone(), records.clone(), w, n));
                }
                loop {
                    let Some(rec) = records.last() else {
                        break 'search false;
                    };
                    let avail = (rec.alternatives + 1).min(breadth);
                    if rec.choice + 1 < avail {
                        pending_choice = rec.choice + 1;
                        records.pop();
                        stages.pop();
                        continue 'search;
                    }
                    records.pop();
                    stages.pop();
                }
            }
        }
    };

    if completed {
        Ok(LiftChain {
            base: m.clone(),
            element: xnf,
            reached: stages.len(),
            stages,
            records,
            requested: opts.order,
            target,
            obstruction: None,
            obstructed_at: None,
        })
    } else {
        let (stages, records, witness, at) = best.ok_or_else(|| {
            Error::Inconsistent("search gave up without recording an obstruction".into())
        })?;
        Ok(LiftChain {
            base: m.clone(),
            element: xnf,
            reached: stages.len(),
            stages,
            records,
            requested: opts.order,
            target,
            obstruction: Some(witness),
            obstructed_at: Some(at),
        })
    }
}

/// Window checks performed on a reconstructed limit.
#[derive(Debug, Clone, Copy)]
pub struct LimitChecks {
    /// Every truncation by a power matches the corresponding stage in
    /// the degree window.
    pub truncation_dims_match: bool,
    /// The limit has no element torsion in the window.
    pub torsion_free_window: bool,
    /// Kernels of all checked powers vanish in the window.
    pub power_kernels_vanish: bool,
}

impl LimitChecks {
    /// All window checks hold.
    pub fn all_ok(&self) -> bool {
        self.truncation_dims_match && self.torsion_free_window && self.power_kernels_vanish
    }
}

/// A limit module reconstructed from a lifting chain.
#[derive(Debug, Clone)]
pub struct LimitModule {
    /// The reconstructed module.
    pub module: FPModule,
    /// Relations at or above this internal degree were discarded as
    /// truncation artifacts.
    pub cutoff: i64,
    /// Order of the stage the presentation was read from.
    pub order_used: usize,
    /// Window checks against the chain.
    pub checks: LimitChecks,
}

/// Rebuild the limit of a chain below the degree bound: take the stage
/// whose order stabilizes the window, minimize it, and drop relations
/// at or above the cutoff degree, where the power truncation lives.
pub fn reconstruct_limit(chain: &LiftChain, degree_bound: i64) -> Result<LimitModule> {
    let ring = chain.base.ring().clone();
    let x = &chain.element;
    let d = positive_degree(&ring, x)?;
    let Some(mindeg) = chain.base.min_gen_degree() else {
        return Ok(LimitModule {
            module: FPModule::zero_module(&ring),
            cutoff: degree_bound + 1,
            order_used: 1,
            checks: LimitChecks {
                truncation_dims_match: true,
                torsion_free_window: true,
                power_kernels_vanish: true,
            },
        });
    };
    let nstar = needed_order(&chain.base, d, degree_bound);
    if chain.reached < nstar {
        return Err(Error::ChainTooShort {
            needed: nstar,
            got: chain.reached,
        });
    }
    let minz = minimize(&chain.stages[nstar - 1].module)?;
    let cutoff = nstar as i64 * d + mindeg;
    let mut kept: Vec<Vect> = Vec::new();
    for col in minz.module.rels() {
        let mut rel_deg: Option<i64> = None;
        for (i, p) in col.iter().enumerate() {
            if let Some(pd) = ring.poly_degree(p)? {
                rel_deg = Some(pd + minz.module.gen_degs()[i]);
                break;
            }
        }
        match rel_deg {
            Some(rd) if rd < cutoff => kept.push(col.clone()),
            _ => {}
        }
    }
    let module = FPModule::new(&ring, minz.module.gen_degs().to_vec(), kept)?;

    let hi = degree_bound;
    let orders = chain.requested.min(chain.reached);
    let mut truncation_dims_match = true;
    let mut power_kernels_vanish = true;
    for n in 1..=orders {
        let xn = ring.pow(x, n as u32);
        let (quo, _) = elem_quotient(&module, &xn)?;
        if !dims_agree(&quo, &chain.stages[n - 1].module, mindeg, hi) {
            truncation_dims_match = false;
        }
        let (ker, _) = elem_kernel(&module, &xn)?;
        if (mindeg..=hi).any(|e| ker.graded_dim(e) != 0) {
            power_kernels_vanish = false;
        }
    }
    let (tor, _) = elem_kernel(&module, x)?;
    let torsion_free_window = (mindeg..=hi).all(|e| tor.graded_dim(e) == 0);

    Ok(LimitModule {
        module,
        cutoff,
        order_used: nstar,
        checks: LimitChecks {
            truncation_dims_match,
            torsion_free_window,
            power_kernels_vanish,
        },
    })
}

/// Dimension table of the second Ext group of a module over the Koszul
/// algebra against itself, with an exact vanishing verdict.
#[derive(Debug, Clone)]
pub struct ObstructionWindow {
    /// `(degree, dimension)` rows over the requested range.
    pub dims: Vec<(i64, usize)>,
    /// Exact verdict for the whole group, not only the window.
    pub vanishes: bool,
}

/// Compute the `Ext^2` obstruction group of `m` against itself over the
/// Koszul algebra and report its dimensions over the degree range. The
/// vanishing verdict is exact: the group is finitely presented and
/// bounded below, so it vanishes exactly when its cokernel by any
/// positive degree element does.
pub fn obstruction_window(
    kz: &KoszulAlgebra,
    m: &FPModule,
    degrees: RangeInclusive<i64>,
) -> Result<ObstructionWindow> {
    let table = crate::dg::dg_ext(kz, m, m, 2)?;
    let group = &table[2].module;
    let dims: Vec<(i64, usize)> = degrees.map(|e| (e, group.graded_dim(e))).collect();
    let vanishes = if kz.is_empty() {
        group.is_zero()
    } else {
        elem_quotient(group, &kz.gens()[0])?.0.is_zero()
    };
    Ok(ObstructionWindow { dims, vanishes })
}

/// Report of one stage of the multi element driver.
#[derive(Debug, Clone)]
pub struct MultiStageReport {
    /// Position of the element in the sequence (1-based).
    pub stage: usize,
    /// Obstruction window over the stage's Koszul algebra.
    pub window: ObstructionWindow,
    /// Highest order the stage chain reached.
    pub chain_reached: usize,
    /// The stage lifted and reconstructed cleanly.
    pub completed: bool,
}

/// Result of lifting a module through the whole sequence.
#[derive(Debug, Clone)]
pub struct MultiLift {
    /// Stage reports in processing order (last element first).
    pub stages: Vec<MultiStageReport>,
    /// The module after the last completed stage.
    pub final_module: FPModule,
    /// Every stage completed.
    pub completed: bool,
    /// First obstruction encountered, with its stage index.
    pub obstruction: Option<(usize, ObstructionWitness)>,
    /// Level 0 Koszul homology of the final module matches the input
    /// dimensions over the window.
    pub roundtrip_h0_dims_match: bool,
    /// Level 0 Koszul homology is isomorphic to the input; `None` when
    /// the bounded search was inconclusive.
    pub roundtrip_h0_isomorphic: Option<bool>,
    /// Higher Koszul homology of the final module vanishes in the window.
    pub roundtrip_higher_vanish: bool,
}

/// Lift `m` through the sequence one element at a time, last element
/// first: stage `j` lifts the current module along `seq[j-1]` over the
/// quotient by the earlier elements, then reconstructs the limit. After
/// all stages, the Koszul homology of the result is compared against
/// the input as a round trip check.
pub fn lift_multi(a: &Ring, seq: &[Poly], m: &FPModule, opts: &LiftOptions) -> Result<MultiLift> {
    if m.ring() != a {
        return Err(Error::RingMismatch(
            "module must be presented over the ambient ring".into(),
        ));
    }
    let t = seq.len();
    let mut normalized = Vec::with_capacity(t);
    for (i, f) in seq.iter().enumerate() {
        let nf = a.nf_poly(f);
        positive_degree(a, &nf).map_err(|_| {
            Error::BadParameter(format!(
                "sequence entry {i} must be nonzero homogeneous of positive degree"
            ))
        })?;
        if !ModuleMap::mult_by(m, &nf)?.is_zero_map() {
            return Err(Error::BadParameter(format!(
                "the module is not killed by sequence entry {i}"
            )));
        }
        normalized.push(nf);
    }

    let mut current = m.clone();
    let mut stages_out: Vec<MultiStageReport> = Vec::new();
    let mut obstruction: Option<(usize, ObstructionWitness)> = None;
    for j in (1..=t).rev() {
        let s_prev = a.quotient(&normalized[..j - 1])?;
        let l_stage = current.change_ring(&s_prev)?;
        let x_stage = s_prev.nf_poly(&normalized[j - 1]);
        if x_stage.is_zero() {
            let zero_stage = l_stage.is_zero();
            stages_out.push(MultiStageReport {
                stage: j,
                window: ObstructionWindow {
                    dims: Vec::new(),
                    vanishes: zero_stage,
                },
                chain_reached: 0,
                completed: zero_stage,
            });
            if zero_stage {
                current = FPModule::zero_module(&s_prev);
                continue;
            }
            obstruction = Some((j, ObstructionWitness::CollapsedElement));
            current = l_stage;
            break;
        }
        let kz = KoszulAlgebra::new(&s_prev, core::slice::from_ref(&x_stage))?;
        let xd = positive_degree(&s_prev, &x_stage)?;
        let wlo = l_stage.min_gen_degree().unwrap_or(0) - 2 * xd - 2;
        let window = obstruction_window(&kz, &l_stage, wlo..=opts.degree_bound)?;
        let chain = lift_to_order(&l_stage, &x_stage, opts)?;
        let reached = chain.reached;
        if let Some(w) = chain.obstruction.clone() {
            stages_out.push(MultiStageReport {
                stage: j,
                window,
                chain_reached: reached,
                completed: false,
            });
            obstruction = Some((j, w));
            current = l_stage;
            break;
        }
        let limit = reconstruct_limit(&chain, opts.degree_bound)?;
        if !limit.checks.all_ok() {
            return Err(Error::Inconsistent(format!(
                "limit reconstruction failed its window checks at stage {j}"
            )));
        }
        stages_out.push(MultiStageReport {
            stage: j,
            window,
            chain_reached: reached,
            completed: true,
        });
        current = limit.module;
    }

    let completed = obstruction.is_none();
    let (roundtrip_h0_dims_match, roundtrip_h0_isomorphic, roundtrip_higher_vanish) =
        if completed && t > 0 {
            let kz = KoszulAlgebra::new(a, &normalized)?;
            let h0 = kz.homology_with_coeffs(&current, 0)?;
            let lo = m.min_gen_degree().unwrap_or(0);
            let dims = dims_agree(&h0, m, lo, opts.degree_bound);
            let iso = match find_isomorphism(&h0, m, opts.seed) {
                Ok(r) => Some(r.is_some()),
                Err(Error::SearchInconclusive(_)) => None,
                Err(e) => return Err(e),
            };
            let mut higher = true;
            for h in 1..=t {
                let hk = kz.homology_with_coeffs(&current, h)?;
                if (lo..=opts.degree_bound).any(|e| hk.graded_dim(e) != 0) {
                    higher = false;
                }
            }
            (dims, iso, higher)
        } else if completed {
            (true, Some(true), true)
        } else {
            (false, None, false)
        };

    Ok(MultiLift {
        stages: stages_out,
        final_module: current,
        completed,
        obstruction,
        roundtrip_h0_dims_match,
        roundtrip_h0_isomorphic,
        roundtrip_higher_vanish,
    })
}

/// Verdict of the regularity check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LciVerdict {
    /// The sequence is regular; the quotient is a complete intersection.
    Regular,
    /// The sequence is not regular.
    NotRegular,
}

/// Full report of the regularity check on a sequence.
#[derive(Debug, Clone)]
pub struct LciReport {
    /// Obstruction window of the cyclic quotient module over the Koszul
    /// algebra of the whole sequence.
    pub window: ObstructionWindow,
    /// The multi element lift, run when the obstruction vanishes.
    pub lift: Option<MultiLift>,
    /// Direct regularity failure, if any.
    pub regularity: Option<RegularityFailure>,
    /// Final verdict.
    pub verdict: LciVerdict,
}

/// Decide regularity of a sequence in a polynomial ring three ways and
/// cross-check: the obstruction group of the cyclic quotient over the
/// Koszul algebra, the multi element lift of that quotient, and the
/// direct regularity test. Disagreement raises `Inconsistent`.
pub fn check_lci(a: &Ring, seq: &[Poly], opts: &LiftOptions) -> Result<LciReport> {
    if !a.is_free() {
        return Err(Error::BadParameter(
            "the ambient ring must be a polynomial ring".into(),
        ));
    }
    let mut normalized = Vec::with_capacity(seq.len());
    let mut dmax = 1i64;
    for (i, f) in seq.iter().enumerate() {
        let nf = a.nf_poly(f);
        let d = positive_degree(a, &nf).map_err(|_| {
            Error::BadParameter(format!(
                "sequence entry {i} must be nonzero homogeneous of positive degree"
            ))
        })?;
        dmax = dmax.max(d);
        normalized.push(nf);
    }
    if normalized.is_empty() {
        return Ok(LciReport {
            window: ObstructionWindow {
                dims: Vec::new(),
                vanishes: true,
            },
            lift: None,
            regularity: None,
            verdict: LciVerdict::Regular,
        });
    }

    let rels: Vec<Vect> = normalized.iter().map(|f| vec![f.clone()]).collect();
    let m = FPModule::new(a, vec![0], rels)?;
    let kz = KoszulAlgebra::new(a, &normalized)?;
    let window = obstruction_window(&kz, &m, (-(2 * dmax + 2))..=opts.degree_bound)?;
    let regularity = regular_on_ring(a, &normalized)?;

    if window.vanishes {
        if let Some(fail) = regularity {
            return Err(Error::Inconsistent(format!(
                "obstruction group vanishes but the sequence fails regularity at stage {}",
                fail.stage
            )));
        }
        let lift = lift_multi(a, &normalized, &m, opts)?;
        if !lift.completed
            || !lift.roundtrip_h0_dims_match
            || !lift.roundtrip_higher_vanish
        {
            return Err(Error::Inconsistent(
                "obstruction group vanishes but the lift did not complete cleanly".into(),
            ));
        }
        Ok(LciReport {
            window,
            lift: Some(lift),
            regularity: None,
            verdict: LciVerdict::Regular,
        })
    } else {
        if regularity.is_none() {
            return Err(Error::Inconsistent(
                "the sequence is regular but the obstruction group does not vanish".into(),
            ));
        }
        Ok(LciReport {
            window,
            lift: None,
            regularity,
            verdict: LciVerdict::NotRegular,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mono::MonoOrder;
    use crate::scalar::FieldSpec;

    fn base_ring(p: u64, vars: &[(&str, i64)], ideal: &[&str]) -> Ring {
        let free =
            Ring::polynomial_ring(FieldSpec::prime_field(p).unwrap(), vars, MonoOrder::GrevLex)
                .unwrap();
        if ideal.is_empty() {
            free
        } else {
            let gens: Vec<_> = ideal.iter().map(|s| free.parse_poly(s).unwrap()).collect();
            free.quotient(&gens).unwrap()
        }
    }

    fn cyclic(r: &Ring, rels: &[&str]) -> FPModule {
        let cols: Vec<Vect> = rels
            .iter()
            .map(|s| vec![r.parse_poly(s).unwrap()])
            .collect();
        FPModule::new(r, vec![0], cols).unwrap()
    }

    #[test]
    fn cover_splits_the_module() {
        let a = base_ring(3, &[("x", 1)], &[]);
        let m = cyclic(&a, &["x^2"]);
        let cd = omega_cover(&m).unwrap();
        assert_eq!(cd.cover.gen_degs(), &[0]);
        assert!(cd.onto.is_surjective().unwrap());
        // Syzygy of A/(x^2) is (x^2), free of rank 1 on degree 2.
        assert_eq!(cd.syzygy.gen_degs(), &[2]);
        assert!(cd.syzygy.rels().is_empty());
        let comp = cd.onto.compose(&cd.into_cover).unwrap();
        assert!(comp.is_zero_map());
    }

    #[test]
    fn alpha0_is_an_isomorphism_for_a_clean_stage() {
        let a = base_ring(3, &[("x", 1)], &[]);
        let m = cyclic(&a, &["x"]);
        let l = cyclic(&a, &["x^2"]);
        let x = a.parse_poly("x").unwrap();
        let red = ModuleMap::new(l.clone(), m.clone(), 0, vec![vect_unit(&a, 1, 0)]).unwrap();
        let data = alpha0_with(&red, &x, 2).unwrap();
        assert!(data.exact);
        // Omega/x Omega is one dimensional in degree 2 and alpha0 hits it.
        assert_eq!(data.map.src().gen_degs(), &[2]);
        assert!(data.map.is_isomorphism().unwrap());
        // W vanishes: the base is cyclic, so its cover has no mod-x syzygy.
        assert!(data.onto_reduced.dst().is_zero());

        // The seeded entry point agrees.
        let data2 = alpha0(&m, &l, &x, 2, 11).unwrap();
        assert!(data2.exact);
        assert!(data2.map.is_isomorphism().unwrap());
    }

    #[test]
    fn single_step_builds_the_next_power_quotient() {
        let a = base_ring(3, &[("x", 1)], &[]);
        let m = cyclic(&a, &["x"]);
        let l = cyclic(&a, &["x^2"]);
        let x = a.parse_poly("x").unwrap();
        let red = ModuleMap::new(l.clone(), m.clone(), 0, vec![vect_unit(&a, 1, 0)]).unwrap();
        let StepOutcome::Lifted(step) = lift_step_with(&red, &x, 2, 0).unwrap() else {
            panic!("step should lift");
        };
        assert!(step.flags.all_ok());
        // E is A/(x^3): one dimension in each of degrees 0, 1, 2.
        for (deg, want) in [(0, 1), (1, 1), (2, 1), (3, 0)] {
            assert_eq!(step.extension.graded_dim(deg), want, "degree {deg}");
        }
        assert!(step.onto_previous.is_surjective().unwrap());
        assert!(step.reduction.is_surjective().unwrap());
    }

    #[test]
    fn chain_reaches_the_requested_order_over_a_regular_base() {
        let a = base_ring(3, &[("x", 1)], &[]);
        let m = cyclic(&a, &["x"]);
        let x = a.parse_poly("x").unwrap();
        let opts = LiftOptions {
            order: 4,
            degree_bound: 6,
            ..LiftOptions::default()
        };
        let chain = lift_to_order(&m, &x, &opts).unwrap();
        assert!(chain.obstruction.is_none());
        // Window of degree 6 with unit steps needs order 8.
        assert_eq!(chain.target, 8);
        assert_eq!(chain.reached, 8);
        for (n, stage) in chain.stages.iter().enumerate() {
            assert_eq!(stage.order, n + 1);
            // Stage n+1 is A/(x^(n+1)).
            for deg in 0..=(n as i64 + 1) {
                let want = if deg <= n as i64 { 1 } else { 0 };
                assert_eq!(stage.module.graded_dim(deg), want);
            }
        }
        for rec in &chain.records {
            assert!(rec.flags.all_ok());
        }
    }

    #[test]
    fn reconstruction_recovers_the_polynomial_ring() {
        let a = base_ring(3, &[("x", 1)], &[]);
        let m = cyclic(&a, &["x"]);
        let x = a.parse_poly("x").unwrap();
        let opts = LiftOptions {
            order: 4,
            degree_bound: 6,
            ..LiftOptions::default()
        };
        let chain = lift_to_order(&m, &x, &opts).unwrap();
        let limit = reconstruct_limit(&chain, 6).unwrap();
        assert!(limit.checks.all_ok());
        // The limit is the free module A itself.
        assert!(limit.module.rels().is_empty());
        for deg in 0..=6 {
            assert_eq!(limit.module.graded_dim(deg), 1);
        }
        // Asking for a much wider window than the chain supports fails
        // with the minimal usable length.
        let err = reconstruct_limit(&chain, 50).unwrap_err();
        match err {
            Error::ChainTooShort { needed, got } => {
                assert_eq!(needed, 52);
                assert_eq!(got, 8);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn obstructed_module_reports_a_reduction_kernel() {
        let a = base_ring(3, &[("u", 1), ("v", 1)], &["u*v"]);
        let m = FPModule::new(
            &a,
            vec![0],
            vec![
                vec![a.parse_poly("u").unwrap()],
                vec![a.parse_poly("v^2").unwrap()],
            ],
        )
        .unwrap();
        let u = a.parse_poly("u").unwrap();
        let red = ModuleMap::identity(&m);
        match lift_step_with(&red, &u, 1, 0).unwrap() {
            StepOutcome::Obstructed(ObstructionWitness::ReductionKernel { element }) => {
                assert!(!m.twist(-1).elem_is_zero(&element));
            }
            other => panic!("expected a kernel obstruction, got {other:?}"),
        }
        // The obstruction group over the Koszul algebra of u is nonzero.
        let kz = KoszulAlgebra::new(&a, core::slice::from_ref(&u)).unwrap();
        let window = obstruction_window(&kz, &m, -6..=8).unwrap();
        assert!(!window.vanishes);
        assert!(window.dims.iter().any(|(_, dim)| *dim > 0));
    }

    #[test]
    fn chain_over_a_singular_base_lifts_the_residue_field() {
        let a = base_ring(3, &[("u", 1), ("v", 1)], &["u*v"]);
        let m = cyclic(&a, &["u", "v"]);
        let u = a.parse_poly("u").unwrap();
        let opts = LiftOptions {
            order: 3,
            degree_bound: 4,
            seed: 1,
            retry_breadth: 1,
        };
        let chain = lift_to_order(&m, &u, &opts).unwrap();
        assert!(chain.obstruction.is_none());
        assert_eq!(chain.reached, 6);
        // Stage 3 is A/(u^3, v)-shaped: one dimension in degrees 0..3.
        let s3 = &chain.stages[2].module;
        for (deg, want) in [(0, 1), (1, 1), (2, 1), (3, 0)] {
            assert_eq!(s3.graded_dim(deg), want, "degree {deg}");
        }
        let limit = reconstruct_limit(&chain, 4).unwrap();
        assert!(limit.checks.all_ok());
        // The limit is a rank one module with unit dimensions: the u-line.
        for deg in 0..=4 {
            assert_eq!(limit.module.graded_dim(deg), 1);
        }
    }

    #[test]
    fn verify_lifting_accepts_a_hand_built_extension() {
        let a = base_ring(3, &[("x", 1)], &[]);
        let m = cyclic(&a, &["x"]);
        let l = cyclic(&a, &["x^2"]);
        let e = cyclic(&a, &["x^3"]);
        let x = a.parse_poly("x").unwrap();
        let g = ModuleMap::new(
            m.twist(-2),
            e.clone(),
            0,
            vec![vec![a.parse_poly("x^2").unwrap()]],
        )
        .unwrap();
        let f = ModuleMap::new(e, l, 0, vec![vect_unit(&a, 1, 0)]).unwrap();
        let (flags, reduction) = verify_lifting(&g, &f, &m, &x, 2, 7).unwrap();
        assert!(flags.all_ok(), "flags {flags:?}");
        let red = reduction.expect("reduction should be found");
        assert!(red.is_surjective().unwrap());

        // Breaking the middle module must break the flags: A/(x^2) + k
        // has the right dimensions in low degrees but the wrong torsion.
        let bad = FPModule::new(
            &a,
            vec![0, 2],
            vec![
                vec![a.parse_poly("x^2").unwrap(), a.zero()],
                vec![a.zero(), a.parse_poly("x").unwrap()],
            ],
        )
        .unwrap();
        let g_bad = ModuleMap::new(
            m.twist(-2),
            bad.clone(),
            0,
            vec![vec![a.zero(), a.one()]],
        )
        .unwrap();
        let f_bad = ModuleMap::new(
            bad,
            cyclic(&a, &["x^2"]),
            0,
            vec![vect_unit(&a, 1, 0), vec![a.zero()]],
        )
        .unwrap();
        let (bad_flags, _) = verify_lifting(&g_bad, &f_bad, &m, &x, 2, 7).unwrap();
        assert!(!bad_flags.all_ok());
    }

    #[test]
    fn step_certificates_agree_on_a_mixed_corpus() {
        let b1 = base_ring(2, &[("x", 1)], &[]);
        let b2 = base_ring(3, &[("u", 1), ("v", 1)], &["u*v"]);
        let b3 = base_ring(5, &[("x", 1), ("y", 1)], &["y^2"]);
        let mut instances: Vec<(FPModule, Poly)> = Vec::new();
        let x1 = b1.parse_poly("x").unwrap();
        instances.push((cyclic(&b1, &["x"]), x1.clone()));
        instances.push((
            FPModule::new(
                &b1,
                vec![0, 1],
                vec![
                    vec![x1.clone(), b1.zero()],
                    vec![b1.zero(), x1.clone()],
                ],
            )
            .unwrap(),
            x1.clone(),
        ));
        let u = b2.parse_poly("u").unwrap();
        instances.push((cyclic(&b2, &["u", "v"]), u.clone()));
        instances.push((cyclic(&b2, &["u", "v^2"]), u.clone()));
        instances.push((cyclic(&b2, &["u", "v^3"]), u.clone()));
        let y = b3.parse_poly("y").unwrap();
        instances.push((cyclic(&b3, &["y"]), y.clone()));
        instances.push((cyclic(&b3, &["y", "x"]), y.clone()));
        instances.push((cyclic(&b3, &["y", "x^2"]), y.clone()));

        let mut obstructed = 0;
        for (m, x) in &instances {
            let red = ModuleMap::identity(m);
            let cert = step_certificates(&red, x, 1).unwrap();
            if cert.kernel_obstructed {
                assert!(!cert.splits);
            }
            if cert.sequence_exact {
                assert_eq!(cert.splits, cert.class_vanishes);
            }
            if cert.splits {
                assert!(cert.flags.expect("flags on split").all_ok());
            } else {
                obstructed += 1;
            }
        }
        assert!(obstructed >= 1, "the corpus should contain an obstruction");
    }

    #[test]
    fn multi_element_lift_recovers_a_complete_intersection() {
        let a = base_ring(5, &[("x", 1), ("y", 1)], &[]);
        let seq = vec![a.parse_poly("x").unwrap(), a.parse_poly("y").unwrap()];
        let m = cyclic(&a, &["x", "y"]);
        let opts = LiftOptions {
            order: 3,
            degree_bound: 5,
            ..LiftOptions::default()
        };
        let lift = lift_multi(&a, &seq, &m, &opts).unwrap();
        assert!(lift.completed);
        assert!(lift.obstruction.is_none());
        assert_eq!(lift.stages.len(), 2);
        for report in &lift.stages {
            assert!(report.completed);
            assert!(report.window.vanishes, "stage {}", report.stage);
        }
        // The final module is the free module A: dims 1, 2, 3, ...
        for (deg, want) in [(0, 1), (1, 2), (2, 3), (3, 4)] {
            assert_eq!(lift.final_module.graded_dim(deg), want, "degree {deg}");
        }
        assert!(lift.roundtrip_h0_dims_match);
        assert_eq!(lift.roundtrip_h0_isomorphic, Some(true));
        assert!(lift.roundtrip_higher_vanish);
    }

    #[test]
    fn multi_lift_stops_on_a_collapsed_element() {
        let a = base_ring(3, &[("x", 1)], &[]);
        let seq = vec![a.parse_poly("x").unwrap(), a.parse_poly("x").unwrap()];
        let m = cyclic(&a, &["x"]);
        let opts = LiftOptions {
            order: 2,
            degree_bound: 3,
            ..LiftOptions::default()
        };
        let lift = lift_multi(&a, &seq, &m, &opts).unwrap();
        assert!(!lift.completed);
        match lift.obstruction {
            Some((2, ObstructionWitness::CollapsedElement)) => {}
            ref other => panic!("expected a collapse at stage 2, got {other:?}"),
        }
    }

    #[test]
    fn lci_checker_matches_direct_regularity() {
        let a = base_ring(3, &[("x", 1)], &[]);
        let opts = LiftOptions {
            order: 2,
            degree_bound: 3,
            ..LiftOptions::default()
        };
        let good = check_lci(&a, &[a.parse_poly("x").unwrap()], &opts).unwrap();
        assert_eq!(good.verdict, LciVerdict::Regular);
        assert!(good.window.vanishes);
        assert!(good.lift.is_some());
        assert!(good.regularity.is_none());

        let seq = vec![a.parse_poly("x").unwrap(), a.parse_poly("x").unwrap()];
        let bad = check_lci(&a, &seq, &opts).unwrap();
        assert_eq!(bad.verdict, LciVerdict::NotRegular);
        assert!(!bad.window.vanishes);
        let fail = bad.regularity.expect("direct test must fail");
        assert_eq!(fail.stage, 1);
    }
}
