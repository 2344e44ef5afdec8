//! Finitely presented graded modules over a (possibly quotient) ring and
//! the maps between them.
//!
//! A module is stored as a cokernel presentation: generator degrees plus
//! homogeneous relation columns. Quotient ring structure is folded in by
//! padding every Groebner basis computation with `ideal * e_i` columns at
//! the free level; all public operations speak the quotient ring's
//! language.
//!
//! Degree conventions: an element `v` represents `sum v_i * gen_i` and is
//! homogeneous of degree `d` when each `v_i` is homogeneous of degree
//! `d - gen_degs[i]`. The twist `M(t)` satisfies `M(t)_d = M_{d+t}`, so
//! generator degrees shift down by `t`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gb::{
    self, module_gb_full, vect_is_zero, vect_nf_entries, vect_zero, GBOptions, Vect,
};
use crate::mono::Mono;
use crate::poly::Poly;
use crate::ring::Ring;
use crate::scalar::{FMat, Scalar};

/// Groebner basis of a span of columns inside a free module over a
/// quotient ring. Padding with the defining ideal happens here, once.
#[derive(Debug, Clone)]
pub struct RSpan {
    ring: Ring,
    rank: usize,
    n_inputs: usize,
    basis: gb::GBasis,
}

impl RSpan {
    /// Build the span of `cols` in `R^rank`. With `track` set, [`RSpan::lift`]
    /// becomes available.
    pub fn new(ring: &Ring, cols: &[Vect], rank: usize, track: bool) -> RSpan {
        let mut padded: Vec<Vect> = cols.to_vec();
        for g in &ring.ideal_gb {
            for i in 0..rank {
                let mut v = vect_zero(rank);
                v[i] = g.clone();
                padded.push(v);
            }
        }
        let free = ring.free_base();
        let out = module_gb_full(
            &free,
            &padded,
            rank,
            GBOptions {
                track_reprs: track,
                want_syzygies: false,
            },
        );
        RSpan {
            ring: ring.clone(),
            rank,
            n_inputs: cols.len(),
            basis: out.basis,
        }
    }

    /// Canonical normal form of `v` modulo the span (and the ideal).
    pub fn nf(&self, v: &Vect) -> Vect {
        self.basis.nf(&self.ring.free_base(), v)
    }

    /// Membership in the span.
    pub fn contains(&self, v: &Vect) -> bool {
        vect_is_zero(&self.nf(v))
    }

    /// Express `v` over the original columns: returns `c` with
    /// `v = sum c_i * col_i` in `R^rank`, entries in normal form.
    /// `None` when `v` is not in the span. Requires `track`.
    pub fn lift(&self, v: &Vect) -> Option<Vec<Poly>> {
        let free = self.ring.free_base();
        let (nf, quot) = self.basis.nf_tracked(&free, v);
        if !vect_is_zero(&nf) {
            return None;
        }
        let reprs = self
            .basis
            .reprs
            .as_ref()
            .expect("lift requires representation tracking");
        let mut coords = vec![Poly::zero(); self.n_inputs];
        for (k, q) in quot.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            for (col, p) in reprs[k].iter().enumerate() {
                if col >= self.n_inputs {
                    continue; // ideal padding columns vanish in R
                }
                let contrib = self.ring.mul(p, q);
                coords[col] = self.ring.add(&coords[col], &contrib);
            }
        }
        Some(coords.iter().map(|p| self.ring.nf_poly(p)).collect())
    }

    /// Generators of the syzygy module of the original columns over the
    /// quotient ring: all `z` with `sum z_i col_i = 0` in `R^rank`.
    pub fn syzygies_r(&self, cols: &[Vect]) -> Vec<Vec<Poly>> {
        debug_assert_eq!(cols.len(), self.n_inputs);
        let mut padded: Vec<Vect> = cols.to_vec();
        for g in &self.ring.ideal_gb {
            for i in 0..self.rank {
                let mut v = vect_zero(self.rank);
                v[i] = g.clone();
                padded.push(v);
            }
        }
        let free = self.ring.free_base();
        let full = gb::module_syzygies(&free, &padded, self.rank);
        let mut out: Vec<Vec<Poly>> = Vec::new();
        for z in full {
            let proj: Vec<Poly> = z[..self.n_inputs]
                .iter()
                .map(|p| self.ring.nf_poly(p))
                .collect();
            if proj.iter().all(|p| p.is_zero()) {
                continue;
            }
            out.push(proj);
        }
        out.sort();
        out.dedup();
        out
    }

    /// Leading (component, monomial) pairs of the padded basis; the
    /// standard monomials avoid exactly these.
    pub fn lead_terms(&self) -> Vec<(usize, Mono)> {
        let free = self.ring.free_base();
        self.basis
            .elems
            .iter()
            .map(|g| {
                let (c, t) = gb::lead_of(&free, g).expect("basis elements nonzero");
                (c, t.mono)
            })
            .collect()
    }
}

#[derive(Debug)]
struct FPData {
    ring: Ring,
    gen_degs: Vec<i64>,
    rels: Vec<Vect>,
    span: RSpan,
}

/// A finitely presented graded module: `coker(R^s -> R^r)` with recorded
/// generator degrees. Cheap to clone.
#[derive(Debug, Clone)]
pub struct FPModule(Arc<FPData>);

impl PartialEq for FPModule {
    fn eq(&self, other: &FPModule) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.ring == other.0.ring
                && self.0.gen_degs == other.0.gen_degs
                && self.0.rels == other.0.rels)
    }
}
impl Eq for FPModule {}

impl FPModule {
    /// Construct from generator degrees and homogeneous relation columns.
    pub fn new(ring: &Ring, gen_degs: Vec<i64>, rels: Vec<Vect>) -> Result<FPModule> {
        let rank = gen_degs.len();
        let mut clean: Vec<Vect> = Vec::new();
        for (j, col) in rels.iter().enumerate() {
            if col.len() != rank {
                return Err(Error::BadParameter(format!(
                    "relation {j} has {} entries for {rank} generators",
                    col.len()
                )));
            }
            let col = vect_nf_entries(ring, col);
            if vect_is_zero(&col) {
                continue;
            }
            // Column degree check.
            let mut deg: Option<i64> = None;
            for (i, p) in col.iter().enumerate() {
                let Some(pd) = ring.poly_degree(p)? else {
                    continue;
                };
                let d = pd + gen_degs[i];
                match deg {
                    None => deg = Some(d),
                    Some(d0) if d0 == d => {}
                    Some(d0) => {
                        return Err(Error::NotHomogeneous(format!(
                            "relation {j} mixes degrees {d0} and {d}"
                        )))
                    }
                }
            }
            clean.push(col);
        }
        let span = RSpan::new(ring, &clean, rank, true);
        Ok(FPModule(Arc::new(FPData {
            ring: ring.clone(),
            gen_degs,
            rels: clean,
            span,
        })))
    }

    /// Free module with the given generator degrees.
    pub fn free(ring: &Ring, degs: &[i64]) -> FPModule {
        FPModule::new(ring, degs.to_vec(), Vec::new()).expect("free module")
    }

    /// The zero module.
    pub fn zero_module(ring: &Ring) -> FPModule {
        FPModule::free(ring, &[])
    }

    /// The ambient ring.
    pub fn ring(&self) -> &Ring {
        &self.0.ring
    }

    /// Generator degrees.
    pub fn gen_degs(&self) -> &[i64] {
        &self.0.gen_degs
    }

    /// Relation columns (canonical normal forms).
    pub fn rels(&self) -> &[Vect] {
        &self.0.rels
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.0.gen_degs.len()
    }

    /// Groebner data of the relation span.
    pub fn span(&self) -> &RSpan {
        &self.0.span
    }

    /// True when the module is zero (every generator is a relation).
    pub fn is_zero(&self) -> bool {
        let ring = self.ring();
        (0..self.rank()).all(|i| {
            let e = gb::vect_unit(ring, self.rank(), i);
            self.0.span.contains(&e)
        })
    }

    /// True when the module has no relations.
    pub fn is_free_presentation(&self) -> bool {
        self.0.rels.is_empty()
    }

    /// Canonical representative of the class of `v`.
    pub fn nf_elem(&self, v: &Vect) -> Vect {
        self.0.span.nf(v)
    }

    /// Class equality.
    pub fn elem_eq(&self, a: &Vect, b: &Vect) -> bool {
        let d = gb::vect_sub(self.ring(), a, b);
        self.0.span.contains(&d)
    }

    /// True when the class of `v` is zero.
    pub fn elem_is_zero(&self, v: &Vect) -> bool {
        self.0.span.contains(v)
    }

    /// Degree of a homogeneous element (`None` for zero class).
    pub fn elem_degree(&self, v: &Vect) -> Result<Option<i64>> {
        let ring = self.ring();
        let v = self.nf_elem(v);
        let mut deg: Option<i64> = None;
        for (i, p) in v.iter().enumerate() {
            let Some(pd) = ring.poly_degree(p)? else {
                continue;
            };
            let d = pd + self.0.gen_degs[i];
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 == d => {}
                Some(d0) => {
                    return Err(Error::NotHomogeneous(format!(
                        "element mixes degrees {d0} and {d}"
                    )))
                }
            }
        }
        Ok(deg)
    }

    /// Twist: `M(t)` with `M(t)_d = M_{d+t}`.
    pub fn twist(&self, t: i64) -> FPModule {
        FPModule::new(
            self.ring(),
            self.0.gen_degs.iter().map(|d| d - t).collect(),
            self.0.rels.clone(),
        )
        .expect("twist preserves validity")
    }

    /// Direct sum; returns the sum and the generator offset of each part.
    pub fn direct_sum(parts: &[FPModule]) -> Result<(FPModule, Vec<usize>)> {
        let Some(first) = parts.first() else {
            return Err(Error::BadParameter("empty direct sum".into()));
        };
        let ring = first.ring().clone();
        let mut degs = Vec::new();
        let mut offsets = Vec::new();
        for p in parts {
            if p.ring() != &ring {
                return Err(Error::RingMismatch("direct sum over mixed rings".into()));
            }
            offsets.push(degs.len());
            degs.extend_from_slice(p.gen_degs());
        }
        let total = degs.len();
        let mut rels = Vec::new();
        for (pi, p) in parts.iter().enumerate() {
            for col in p.rels() {
                let mut v = vect_zero(total);
                for (i, q) in col.iter().enumerate() {
                    v[offsets[pi] + i] = q.clone();
                }
                rels.push(v);
            }
        }
        Ok((FPModule::new(&ring, degs, rels)?, offsets))
    }

    /// Move a presentation to another quotient of the same free ring.
    ///
    /// Extension (target ideal contains the source's): the presentation
    /// is reused and its entries renormalized, yielding `M (x) target`.
    /// Restriction along a surjection (source ideal contains the
    /// target's): the source's defining ideal is added to the relations,
    /// which presents the same underlying module over the bigger ring.
    pub fn change_ring(&self, target: &Ring) -> Result<FPModule> {
        let src = self.ring();
        if src.free_base() != target.free_base() {
            return Err(Error::RingMismatch(
                "change_ring needs a shared free base ring".into(),
            ));
        }
        let mut rels: Vec<Vect> = self.rels().to_vec();
        for g in &src.ideal_gb {
            for i in 0..self.rank() {
                let mut v = vect_zero(self.rank());
                v[i] = g.clone();
                rels.push(v);
            }
        }
        let rels = rels
            .into_iter()
            .map(|v| v.iter().map(|p| target.nf_poly(p)).collect())
            .collect();
        FPModule::new(target, self.gen_degs().to_vec(), rels)
    }

    /// Smallest generator degree, if any generator exists.
    pub fn min_gen_degree(&self) -> Option<i64> {
        self.0.gen_degs.iter().min().copied()
    }

    // ----- graded pieces ---------------------------------------------------------

    /// Standard monomial basis of the degree `d` piece, as
    /// `(component, monomial)` pairs in a fixed deterministic order.
    pub fn graded_basis(&self, d: i64) -> Vec<(usize, Mono)> {
        let ring = self.ring();
        let leads = self.0.span.lead_terms();
        let mut out = Vec::new();
        for (i, g) in self.0.gen_degs.iter().enumerate() {
            let t = d - g;
            if t < 0 {
                continue;
            }
            for m in monos_of_degree(ring, t) {
                let blocked = leads
                    .iter()
                    .any(|(c, lm)| *c == i && lm.divides(&m));
                if !blocked {
                    out.push((i, m));
                }
            }
        }
        out
    }

    /// Dimension of the degree `d` piece over the coefficient field.
    pub fn graded_dim(&self, d: i64) -> usize {
        self.graded_basis(d).len()
    }

    /// Coordinates of a homogeneous degree `d` element in the
    /// [`FPModule::graded_basis`] order.
    pub fn coords(&self, v: &Vect, d: i64) -> Result<Vec<Scalar>> {
        let ring = self.ring();
        let basis = self.graded_basis(d);
        let nf = self.nf_elem(v);
        if let Some(ed) = self.elem_degree(&nf)? {
            if ed != d {
                return Err(Error::BadParameter(format!(
                    "element has degree {ed}, expected {d}"
                )));
            }
        }
        let mut out = vec![ring.field.zero(); basis.len()];
        for (i, p) in nf.iter().enumerate() {
            for t in &p.terms {
                let pos = basis
                    .iter()
                    .position(|(c, m)| *c == i && *m == t.mono)
                    .ok_or_else(|| {
                        Error::Inconsistent(
                            "normal form contains a non-standard monomial".into(),
                        )
                    })?;
                out[pos] = t.coef.clone();
            }
        }
        Ok(out)
    }

    /// Element from coordinates in the degree `d` standard basis.
    pub fn elem_from_coords(&self, d: i64, coords: &[Scalar]) -> Vect {
        let ring = self.ring();
        let basis = self.graded_basis(d);
        debug_assert_eq!(coords.len(), basis.len());
        let mut v = vect_zero(self.rank());
        for ((c, m), s) in basis.iter().zip(coords) {
            if s.is_zero() {
                continue;
            }
            let t = ring.term_poly(s.clone(), m.clone());
            v[*c] = ring.add(&v[*c], &t);
        }
        v
    }

    /// Matrix of multiplication by a homogeneous `f` from degree `d` to
    /// degree `d + deg f`.
    pub fn mult_matrix(&self, f: &Poly, d: i64) -> Result<FMat> {
        let ring = self.ring();
        let fd = ring
            .poly_degree(f)?
            .ok_or_else(|| Error::BadParameter("multiplication by zero".into()))?;
        let src = self.graded_basis(d);
        let dst_dim = self.graded_dim(d + fd);
        let mut m = FMat::zero(ring.field, dst_dim, src.len());
        for (j, (c, mono)) in src.iter().enumerate() {
            let mut v = vect_zero(self.rank());
            v[*c] = ring.term_poly(ring.field.one(), mono.clone());
            let fv: Vect = v.iter().map(|p| ring.mul(p, f)).collect();
            let coords = self.coords(&fv, d + fd)?;
            for (i, s) in coords.into_iter().enumerate() {
                if !s.is_zero() {
                    m.set(i, j, s);
                }
            }
        }
        Ok(m)
    }

    /// Render an element for diagnostics.
    pub fn elem_string(&self, v: &Vect) -> String {
        gb::vect_string(self.ring(), v)
    }
}

/// All monomials of exact weighted degree `t`, in ascending ring order.
pub fn monos_of_degree(ring: &Ring, t: i64) -> Vec<Mono> {
    let n = ring.nvars();
    let mut out = Vec::new();
    let mut exps = vec![0u16; n];
    fn go(
        weights: &[i64],
        i: usize,
        remaining: i64,
        exps: &mut Vec<u16>,
        out: &mut Vec<Mono>,
    ) {
        if i == weights.len() {
            if remaining == 0 {
                out.push(Mono { exps: exps.clone() });
            }
            return;
        }
        let w = weights[i];
        let max = remaining / w;
        for e in 0..=max {
            if e > u16::MAX as i64 {
                break;
            }
            exps[i] = e as u16;
            go(weights, i + 1, remaining - e * w, exps, out);
        }
        exps[i] = 0;
    }
    if t >= 0 {
        go(&ring.weights, 0, t, &mut exps, &mut out);
    }
    out.sort_by(|a, b| ring.cmp_mono(a, b));
    out
}

/// A graded map of modules. `cols[j]` is the image of the `j`-th source
/// generator; the map shifts internal degree by `deg`.
#[derive(Debug, Clone)]
pub struct ModuleMap {
    src: FPModule,
    dst: FPModule,
    deg: i64,
    cols: Vec<Vect>,
}

impl ModuleMap {
    /// Validated constructor: checks column degrees and that the map
    /// kills the source relations.
    pub fn new(src: FPModule, dst: FPModule, deg: i64, cols: Vec<Vect>) -> Result<ModuleMap> {
        if src.ring() != dst.ring() {
            return Err(Error::RingMismatch("map between different rings".into()));
        }
        if cols.len() != src.rank() {
            return Err(Error::IllFormedMap(format!(
                "{} columns for {} generators",
                cols.len(),
                src.rank()
            )));
        }
        let cols: Vec<Vect> = cols.iter().map(|c| dst.nf_elem(c)).collect();
        for (j, c) in cols.iter().enumerate() {
            if let Some(d) = dst.elem_degree(c)? {
                let want = src.gen_degs()[j] + deg;
                if d != want {
                    return Err(Error::IllFormedMap(format!(
                        "column {j} has degree {d}, expected {want}"
                    )));
                }
            }
        }
        let map = ModuleMap {
            src,
            dst,
            deg,
            cols,
        };
        for (j, rel) in map.src.rels().iter().enumerate() {
            let img = map.apply_raw(rel);
            if !map.dst.elem_is_zero(&img) {
                return Err(Error::IllFormedMap(format!(
                    "relation {j} of the source is not killed"
                )));
            }
        }
        Ok(map)
    }

    /// The zero map.
    pub fn zero(src: FPModule, dst: FPModule, deg: i64) -> ModuleMap {
        let rank = dst.rank();
        let cols = vec![vect_zero(rank); src.rank()];
        ModuleMap {
            src,
            dst,
            deg,
            cols,
        }
    }

    /// Identity.
    pub fn identity(m: &FPModule) -> ModuleMap {
        let cols = (0..m.rank())
            .map(|i| gb::vect_unit(m.ring(), m.rank(), i))
            .collect();
        ModuleMap {
            src: m.clone(),
            dst: m.clone(),
            deg: 0,
            cols,
        }
    }

    /// Multiplication by a homogeneous ring element `f` on `m`, of degree
    /// `deg f`.
    pub fn mult_by(m: &FPModule, f: &Poly) -> Result<ModuleMap> {
        let ring = m.ring();
        let fd = ring.poly_degree(f)?.unwrap_or(0);
        let cols = (0..m.rank())
            .map(|i| {
                let mut v = vect_zero(m.rank());
                v[i] = ring.nf_poly(f);
                v
            })
            .collect();
        ModuleMap::new(m.clone(), m.clone(), fd, cols)
    }

    /// Source module.
    pub fn src(&self) -> &FPModule {
        &self.src
    }

    /// Target module.
    pub fn dst(&self) -> &FPModule {
        &self.dst
    }

    /// Internal degree shift.
    pub fn deg(&self) -> i64 {
        self.deg
    }

    /// Image columns.
    pub fn cols(&self) -> &[Vect] {
        &self.cols
    }

    fn apply_raw(&self, v: &Vect) -> Vect {
        let ring = self.src.ring();
        let mut out = vect_zero(self.dst.rank());
        for (j, p) in v.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (i, q) in self.cols[j].iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                let prod = ring.mul(p, q);
                out[i] = ring.add(&out[i], &prod);
            }
        }
        out
    }

    /// Apply to an element (canonical form of the image class).
    pub fn apply(&self, v: &Vect) -> Vect {
        self.dst.nf_elem(&self.apply_raw(v))
    }

    /// Composition `self . other` (first `other`, then `self`).
    pub fn compose(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if other.dst != self.src {
            return Err(Error::IllFormedMap(
                "composition: inner target differs from outer source".into(),
            ));
        }
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        ModuleMap::new(
            other.src.clone(),
            self.dst.clone(),
            self.deg + other.deg,
            cols,
        )
    }

    /// Pointwise sum (same source, target, degree).
    pub fn add(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if self.src != other.src || self.dst != other.dst || self.deg != other.deg {
            return Err(Error::IllFormedMap("sum of incompatible maps".into()));
        }
        let ring = self.src.ring();
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| gb::vect_add(ring, a, b))
            .collect();
        ModuleMap::new(self.src.clone(), self.dst.clone(), self.deg, cols)
    }

    /// Pointwise scaling by a field constant.
    pub fn scale(&self, c: &Scalar) -> ModuleMap {
        let ring = self.src.ring();
        ModuleMap {
            src: self.src.clone(),
            dst: self.dst.clone(),
            deg: self.deg,
            cols: self.cols.iter().map(|col| gb::vect_scale(ring, col, c)).collect(),
        }
    }

    /// Pointwise negation.
    pub fn negate(&self) -> ModuleMap {
        let ring = self.src.ring();
        ModuleMap {
            src: self.src.clone(),
            dst: self.dst.clone(),
            deg: self.deg,
            cols: self.cols.iter().map(|c| gb::vect_neg(ring, c)).collect(),
        }
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &ModuleMap) -> Result<ModuleMap> {
        self.add(&other.negate())
    }

    /// True when every column is the zero class.
    pub fn is_zero_map(&self) -> bool {
        self.cols.iter().all(|c| self.dst.elem_is_zero(c))
    }

    /// Kernel as a finitely presented module with its inclusion. The
    /// returned generators form a minimal generating set of the kernel.
    pub fn kernel(&self) -> Result<(FPModule, ModuleMap)> {
        let ring = self.src.ring();
        // Syzygies of [cols | dst.rels]: the u-part of each generator is
        // an element of src killed by the map modulo dst relations.
        let mut block: Vec<Vect> = self.cols.clone();
        block.extend(self.dst.rels().iter().cloned());
        let span = RSpan::new(ring, &block, self.dst.rank(), false);
        let syz = span.syzygies_r(&block);
        let mut candidates: Vec<Vect> = Vec::new();
        for z in syz {
            let u: Vect = z[..self.src.rank()].to_vec();
            let u = self.src.nf_elem(&u);
            if !vect_is_zero(&u) {
                candidates.push(u);
            }
        }
        candidates.sort();
        candidates.dedup();
        let gens = minimal_generators(&self.src, &candidates)?;
        subquotient(&self.src, &gens)
    }

    /// Image as a submodule of the target, with inclusion and the
    /// corestricted projection from the source.
    pub fn image(&self) -> Result<(FPModule, ModuleMap, ModuleMap)> {
        let candidates: Vec<Vect> = self
            .cols
            .iter()
            .map(|c| self.dst.nf_elem(c))
            .filter(|c| !vect_is_zero(c))
            .collect();
        let gens = minimal_generators(&self.dst, &candidates)?;
        let (img, incl) = subquotient(&self.dst, &gens)?;
        // Express each original column over the chosen image generators.
        let mut proj_cols = Vec::with_capacity(self.cols.len());
        let ring = self.dst.ring();
        let mut block: Vec<Vect> = gens.clone();
        block.extend(self.dst.rels().iter().cloned());
        let span = RSpan::new(ring, &block, self.dst.rank(), true);
        for c in &self.cols {
            let coords = span.lift(c).ok_or_else(|| {
                Error::Inconsistent("image column missing from image span".into())
            })?;
            proj_cols.push(coords[..gens.len()].to_vec());
        }
        let proj = ModuleMap::new(self.src.clone(), img.clone(), self.deg, proj_cols)?;
        Ok((img, incl, proj))
    }

    /// Cokernel with its projection.
    pub fn cokernel(&self) -> Result<(FPModule, ModuleMap)> {
        let mut rels = self.dst.rels().to_vec();
        rels.extend(self.cols.iter().cloned());
        let coker = FPModule::new(self.dst.ring(), self.dst.gen_degs().to_vec(), rels)?;
        let proj_cols = (0..self.dst.rank())
            .map(|i| gb::vect_unit(self.dst.ring(), self.dst.rank(), i))
            .collect();
        let proj = ModuleMap::new(self.dst.clone(), coker.clone(), 0, proj_cols)?;
        Ok((coker, proj))
    }

    /// Injectivity (exact).
    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.0.is_zero())
    }

    /// Surjectivity (exact).
    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel()?.0.is_zero())
    }

    /// Isomorphism test (exact).
    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_surjective()? && self.is_injective()?)
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self) -> Result<ModuleMap> {
        let mut cols = Vec::with_capacity(self.dst.rank());
        for i in 0..self.dst.rank() {
            let e = gb::vect_unit(self.dst.ring(), self.dst.rank(), i);
            let u = lift_elem_through(self, &e).ok_or_else(|| {
                Error::CertificateFailed("inverse: map is not surjective".into())
            })?;
            cols.push(u);
        }
        let inv = ModuleMap::new(self.dst.clone(), self.src.clone(), -self.deg, cols)?;
        // Exact round-trip checks.
        let rt = inv.compose(self)?;
        if !maps_equal(&rt, &ModuleMap::identity(&self.src)) {
            return Err(Error::CertificateFailed(
                "inverse: round trip is not the identity".into(),
            ));
        }
        Ok(inv)
    }

    /// Factor `self` through `g` (same target): find `h` with
    /// `g . h = self`. Complete when the source is free or `g` is
    /// injective; otherwise a `None` only means no column-wise lift exists.
    pub fn factor_through(&self, g: &ModuleMap) -> Option<ModuleMap> {
        if self.dst != g.dst {
            return None;
        }
        let mut cols = Vec::with_capacity(self.cols.len());
        for c in &self.cols {
            cols.push(lift_elem_through(g, c)?);
        }
        ModuleMap::new(
            self.src.clone(),
            g.src.clone(),
            self.deg - g.deg,
            cols,
        )
        .ok()
    }

    /// Matrix of the degree `d` piece: `src_d -> dst_{d+deg}`.
    pub fn graded_matrix(&self, d: i64) -> Result<FMat> {
        let field = self.src.ring().field;
        let src_basis = self.src.graded_basis(d);
        let dst_dim = self.dst.graded_dim(d + self.deg);
        let mut m = FMat::zero(field, dst_dim, src_basis.len());
        for (j, (c, mono)) in src_basis.iter().enumerate() {
            let ring = self.src.ring();
            let mut v = vect_zero(self.src.rank());
            v[*c] = ring.term_poly(ring.field.one(), mono.clone());
            let img = self.apply(&v);
            let coords = self.dst.coords(&img, d + self.deg)?;
            for (i, s) in coords.into_iter().enumerate() {
                if !s.is_zero() {
                    m.set(i, j, s);
                }
            }
        }
        Ok(m)
    }
}

/// Solve `g(u) = v` for one `u` (class level), when possible.
pub fn lift_elem_through(g: &ModuleMap, v: &Vect) -> Option<Vect> {
    let ring = g.dst().ring();
    let mut block: Vec<Vect> = g.cols().to_vec();
    block.extend(g.dst().rels().iter().cloned());
    let span = RSpan::new(ring, &block, g.dst().rank(), true);
    let coords = span.lift(&g.dst().nf_elem(v))?;
    Some(coords[..g.src().rank()].to_vec())
}

/// Equality of maps as morphisms (columns agree up to relations).
pub fn maps_equal(a: &ModuleMap, b: &ModuleMap) -> bool {
    if a.src() != b.src() || a.dst() != b.dst() || a.deg() != b.deg() {
        return false;
    }
    a.cols()
        .iter()
        .zip(b.cols())
        .all(|(x, y)| a.dst().elem_eq(x, y))
}

/// Greedy minimal generating set selection: candidates are taken in
/// ascending degree and kept only when not already generated (graded
/// Nakayama makes this a minimal generating set of the submodule the
/// candidates generate).
pub fn minimal_generators(host: &FPModule, candidates: &[Vect]) -> Result<Vec<Vect>> {
    let ring = host.ring();
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    let mut degs = Vec::with_capacity(candidates.len());
    for c in candidates {
        degs.push(host.elem_degree(c)?.unwrap_or(i64::MAX));
    }
    order.sort_by_key(|&i| (degs[i], i));
    let mut kept: Vec<Vect> = Vec::new();
    for idx in order {
        let c = &candidates[idx];
        if host.elem_is_zero(c) {
            continue;
        }
        let mut block: Vec<Vect> = kept.clone();
        block.extend(host.rels().iter().cloned());
        let span = RSpan::new(ring, &block, host.rank(), false);
        if !span.contains(c) {
            kept.push(host.nf_elem(c));
        }
    }
    Ok(kept)
}

/// Present the subquotient of `host` generated by `gens` (classes), with
/// its inclusion map.
pub fn subquotient(host: &FPModule, gens: &[Vect]) -> Result<(FPModule, ModuleMap)> {
    let ring = host.ring();
    let mut degs = Vec::with_capacity(gens.len());
    for g in gens {
        degs.push(host.elem_degree(g)?.ok_or_else(|| {
            Error::BadParameter("zero class cannot be a subquotient generator".into())
        })?);
    }
    let mut block: Vec<Vect> = gens.to_vec();
    block.extend(host.rels().iter().cloned());
    let span = RSpan::new(ring, &block, host.rank(), false);
    let syz = span.syzygies_r(&block);
    let mut rels: Vec<Vect> = Vec::new();
    for z in syz {
        let w: Vect = z[..gens.len()].to_vec();
        if !w.iter().all(|p| p.is_zero()) {
            rels.push(w);
        }
    }
    let sub = FPModule::new(ring, degs, rels)?;
    let incl = ModuleMap::new(sub.clone(), host.clone(), 0, gens.to_vec())?;
    Ok((sub, incl))
}

/// Pushout of the span `M <-(gamma)- W -(iota)-> P`: returns
/// `(E, in_m: M -> E, in_p: P -> E)` with `in_m . gamma = in_p . iota`.
pub fn pushout(gamma: &ModuleMap, iota: &ModuleMap) -> Result<(FPModule, ModuleMap, ModuleMap)> {
    if gamma.src() != iota.src() {
        return Err(Error::IllFormedMap("pushout legs have different sources".into()));
    }
    if gamma.deg() != iota.deg() {
        return Err(Error::IllFormedMap(
            "pushout legs must have equal degree shifts".into(),
        ));
    }
    let m = gamma.dst();
    let p = iota.dst();
    let ring = m.ring();
    let (sum, offsets) = FPModule::direct_sum(&[m.clone(), p.clone()])?;
    let off_p = offsets[1];
    let total = sum.rank();
    let mut rels = sum.rels().to_vec();
    let w = gamma.src();
    for j in 0..w.rank() {
        let e = gb::vect_unit(ring, w.rank(), j);
        let gm = gamma.apply(&e);
        let ip = iota.apply(&e);
        let mut col = vect_zero(total);
        for (i, q) in gm.iter().enumerate() {
            col[i] = q.clone();
        }
        for (i, q) in ip.iter().enumerate() {
            col[off_p + i] = ring.neg(q);
        }
        rels.push(col);
    }
    let e = FPModule::new(ring, sum.gen_degs().to_vec(), rels)?;
    let in_m_cols = (0..m.rank())
        .map(|i| gb::vect_unit(ring, total, i))
        .collect();
    let in_p_cols = (0..p.rank())
        .map(|i| gb::vect_unit(ring, total, off_p + i))
        .collect();
    let in_m = ModuleMap::new(m.clone(), e.clone(), 0, in_m_cols)?;
    let in_p = ModuleMap::new(p.clone(), e.clone(), 0, in_p_cols)?;
    Ok((e, in_m, in_p))
}

/// Mediating map of the pushout universal property: given a co-cone
/// `(phi: M -> T, psi: P -> T)` with `phi . gamma = psi . iota`, the
/// unique `E -> T` restricting to both.
pub fn pushout_mediator(
    e: &FPModule,
    phi: &ModuleMap,
    psi: &ModuleMap,
) -> Result<ModuleMap> {
    if phi.deg() != psi.deg() {
        return Err(Error::IllFormedMap("co-cone legs differ in degree".into()));
    }
    let mut cols = phi.cols().to_vec();
    cols.extend(psi.cols().iter().cloned());
    ModuleMap::new(e.clone(), phi.dst().clone(), phi.deg(), cols)
}

/// Result of minimizing a presentation.
#[derive(Debug, Clone)]
pub struct Minimized {
    /// The minimized module (no unit entries, relations irredundant).
    pub module: FPModule,
    /// Isomorphism `M -> M_min`.
    pub to_min: ModuleMap,
    /// Isomorphism `M_min -> M`.
    pub from_min: ModuleMap,
}

/// Minimize a presentation: eliminate unit pivots (removing a generator
/// and a relation each time), then prune redundant relation columns.
pub fn minimize(m: &FPModule) -> Result<Minimized> {
    let ring = m.ring().clone();
    let mut gen_degs = m.gen_degs().to_vec();
    let mut rels: Vec<Vect> = m.rels().to_vec();
    // from_expr[j]: current generator j as an element of the original M.
    let mut from_expr: Vec<Vect> = (0..m.rank())
        .map(|i| gb::vect_unit(&ring, m.rank(), i))
        .collect();
    // to_expr[i]: original generator i over the current generators.
    let mut to_expr: Vec<Vect> = (0..m.rank())
        .map(|i| gb::vect_unit(&ring, m.rank(), i))
        .collect();

    loop {
        let mut pivot: Option<(usize, usize, Scalar)> = None;
        'scan: for (j, col) in rels.iter().enumerate() {
            for (i, p) in col.iter().enumerate() {
                if p.is_unit_constant() {
                    pivot = Some((i, j, p.terms[0].coef.clone()));
                    break 'scan;
                }
            }
        }
        let Some((i, j, c)) = pivot else { break };
        let inv = ring.field.inv(&c);
        let r = rels[j].clone();
        // Substitution for e_i over the remaining generators.
        let mut subst = vect_zero(gen_degs.len());
        for (k, p) in r.iter().enumerate() {
            if k == i {
                continue;
            }
            let scaled = ring.scale(p, &ring.field.neg(&inv));
            subst[k] = scaled;
        }
        // Eliminate entry i from the other relations.
        for (jj, col) in rels.iter_mut().enumerate() {
            if jj == j {
                continue;
            }
            let q = col[i].clone();
            if q.is_zero() {
                continue;
            }
            let factor = ring.scale(&q, &inv);
            for (k, p) in r.iter().enumerate() {
                let delta = ring.mul(&factor, p);
                col[k] = ring.sub(&col[k], &delta);
            }
            debug_assert!(col[i].is_zero());
        }
        // Rewrite to_expr through the substitution.
        for t in to_expr.iter_mut() {
            let p = t[i].clone();
            if p.is_zero() {
                continue;
            }
            t[i] = Poly::zero();
            for (k, s) in subst.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                let delta = ring.mul(&p, s);
                t[k] = ring.add(&t[k], &delta);
            }
        }
        // Drop generator i and relation j.
        rels.remove(j);
        for col in rels.iter_mut() {
            col.remove(i);
        }
        for t in to_expr.iter_mut() {
            t.remove(i);
        }
        gen_degs.remove(i);
        from_expr.remove(i);
    }

    // Prune redundant relation columns (minimal generating set of the
    // relation submodule).
    let scratch = FPModule::free(&ring, &gen_degs);
    let rels = minimal_generators(&scratch, &rels)?;
    let module = FPModule::new(&ring, gen_degs, rels)?;
    let from_min = ModuleMap::new(module.clone(), m.clone(), 0, from_expr)?;
    let to_min = ModuleMap::new(m.clone(), module.clone(), 0, to_expr)?;
    // Exact sanity: the two maps are mutually inverse isomorphisms.
    let rt1 = to_min.compose(&from_min)?;
    if !maps_equal(&rt1, &ModuleMap::identity(&module)) {
        return Err(Error::Inconsistent("minimize: to . from != id".into()));
    }
    let rt2 = from_min.compose(&to_min)?;
    if !maps_equal(&rt2, &ModuleMap::identity(m)) {
        return Err(Error::Inconsistent("minimize: from . to != id".into()));
    }
    Ok(Minimized {
        module,
        to_min,
        from_min,
    })
}
