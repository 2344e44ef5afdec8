//! Derived functors over the ground ring: Ext and Tor of finitely
//! presented graded modules, hyper-Ext of bounded free complexes, and
//! extension classes of short exact sequences.
//!
//! Ext is the homology of `Hom(F, N)` for a free resolution (or any
//! bounded free complex) `F`; Tor is the homology of `F (x) N`. Both
//! carry representative (co)cycles per generator so callers can move
//! between explicit maps and classes.

use alloc::vec::Vec;

use crate::complex::{ChainComplex, HomologyAt};
use crate::error::{Error, Result};
use crate::gb::{vect_zero, Vect};
use crate::module::{lift_elem_through, FPModule, ModuleMap, RSpan};
use crate::resolution::FreeResolution;

/// Which derived functor an entry came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivedKind {
    /// Contravariant Hom side.
    Ext,
    /// Tensor side.
    Tor,
}

/// One derived group `Ext^i` or `Tor_i` with witness data.
#[derive(Debug, Clone)]
pub struct DerivedEntry {
    /// Which functor.
    pub kind: DerivedKind,
    /// Homological index (cohomological for Ext).
    pub index: i64,
    /// The group as a finitely presented graded module.
    pub module: FPModule,
    /// Representative (co)cycles, one per generator of `module`, as
    /// elements of `level`.
    pub witnesses: Vec<Vect>,
    /// The term the witnesses live in: `Hom(C_i, N)` resp. `C_i (x) N`,
    /// realized as a direct sum of twists of `N`.
    pub level: FPModule,
    /// Offset of each summand inside `level`.
    pub offsets: Vec<usize>,
    /// Generator degrees of the free term `C_i`.
    pub free_gen_degs: Vec<i64>,
    homology: HomologyAt,
}

impl DerivedEntry {
    /// Graded dimension of the group in internal degree `d`.
    pub fn graded_dim(&self, d: i64) -> usize {
        self.module.graded_dim(d)
    }

    /// Degrees of the group's generators.
    pub fn gen_degrees(&self) -> &[i64] {
        self.module.gen_degs()
    }

    /// Class coordinates of a (co)cycle in `level`; `None` if the element
    /// is not a (co)cycle.
    pub fn class_of_level_elem(&self, v: &Vect) -> Option<Vect> {
        self.homology.class_of(v)
    }

    /// True when the (co)cycle has trivial class.
    pub fn is_coboundary(&self, v: &Vect) -> bool {
        self.homology.is_zero_class(v)
    }

    /// Interpret a level element as a map from the free term into the
    /// coefficient module (Ext side).
    pub fn level_elem_as_map(&self, target: &FPModule, v: &Vect) -> Result<ModuleMap> {
        if self.kind != DerivedKind::Ext {
            return Err(Error::BadParameter(
                "level elements decode to maps on the Ext side only".into(),
            ));
        }
        let ring = target.ring().clone();
        let free = FPModule::free(&ring, &self.free_gen_degs);
        let deg = self.level.elem_degree(v)?.unwrap_or(0);
        let nr = target.rank();
        let mut cols = Vec::with_capacity(self.free_gen_degs.len());
        for off in &self.offsets {
            cols.push(v[*off..*off + nr].to_vec());
        }
        ModuleMap::new(free, target.clone(), deg, cols)
    }

    /// Encode a map from the free term into the coefficient module as a
    /// level element (inverse of [`DerivedEntry::level_elem_as_map`]).
    pub fn map_as_level_elem(&self, f: &ModuleMap) -> Result<Vect> {
        let nr = f.dst().rank();
        let mut v = vect_zero(self.level.rank());
        for (j, off) in self.offsets.iter().enumerate() {
            for (t, p) in f.cols()[j].iter().enumerate() {
                let _ = nr;
                v[*off + t] = p.clone();
            }
        }
        Ok(v)
    }
}

/// Direct sum of `twist(n, d)` over `degs`, tolerating the empty case.
fn sum_of_twists(
    n: &FPModule,
    degs: &[i64],
    sign: i64,
) -> Result<(FPModule, Vec<usize>)> {
    if degs.is_empty() {
        return Ok((FPModule::zero_module(n.ring()), Vec::new()));
    }
    let parts: Vec<FPModule> = degs.iter().map(|d| n.twist(sign * d)).collect();
    FPModule::direct_sum(&parts)
}

fn require_free_terms(c: &ChainComplex) -> Result<()> {
    for k in c.lo()..=c.hi() {
        if !c.term(k).rels().is_empty() {
            return Err(Error::BadParameter(alloc::format!(
                "term at position {k} is not free"
            )));
        }
    }
    Ok(())
}

/// The cochain complex `Hom(C, N)` of a bounded complex of free modules,
/// stored homologically: position `-i` holds `Hom(C_i, N)`.
/// Returns the complex plus per-position level data
/// `(sum, offsets, gen degs of C_i)` indexed from the lowest position.
pub fn hom_cochain(
    c: &ChainComplex,
    n: &FPModule,
) -> Result<(ChainComplex, Vec<(FPModule, Vec<usize>, Vec<i64>)>)> {
    require_free_terms(c)?;
    let ring = c.ring().clone();
    if &ring != n.ring() {
        return Err(Error::RingMismatch("hom cochain over different rings".into()));
    }
    let lo_d = -c.hi();
    let hi_d = -c.lo();
    let mut terms = Vec::new();
    let mut levels = Vec::new();
    for l in lo_d..=hi_d {
        let src_degs = c.term(-l).gen_degs().to_vec();
        let (sum, offs) = sum_of_twists(n, &src_degs, 1)?;
        terms.push(sum.clone());
        levels.push((sum, offs, src_degs));
    }
    let nr = n.rank();
    let mut maps = Vec::new();
    for l in (lo_d + 1)..=hi_d {
        // delta: Hom(C_{-l}, N) -> Hom(C_{-l+1}, N), precompose with
        // d: C_{-l+1} -> C_{-l}.
        let d = c.diff(-l + 1);
        let src_level = &levels[(l - lo_d) as usize];
        let dst_level = &levels[(l - 1 - lo_d) as usize];
        let mut cols: Vec<Vect> = Vec::with_capacity(src_level.0.rank());
        for j in 0..src_level.2.len() {
            for t in 0..nr {
                let mut col = vect_zero(dst_level.0.rank());
                for (k, dcol) in d.cols().iter().enumerate() {
                    let entry = &dcol[j];
                    if entry.is_zero() {
                        continue;
                    }
                    col[dst_level.1[k] + t] = ring.add(&col[dst_level.1[k] + t], entry);
                }
                cols.push(col);
            }
        }
        maps.push(ModuleMap::new(
            src_level.0.clone(),
            dst_level.0.clone(),
            0,
            cols,
        )?);
    }
    let complex = ChainComplex::new(lo_d, terms, maps)?;
    Ok((complex, levels))
}

/// The chain complex `C (x) N` of a bounded complex of free modules,
/// position `i` holding `C_i (x) N`.
pub fn tensor_chain(
    c: &ChainComplex,
    n: &FPModule,
) -> Result<(ChainComplex, Vec<(FPModule, Vec<usize>, Vec<i64>)>)> {
    require_free_terms(c)?;
    let ring = c.ring().clone();
    if &ring != n.ring() {
        return Err(Error::RingMismatch("tensor chain over different rings".into()));
    }
    let mut terms = Vec::new();
    let mut levels = Vec::new();
    for k in c.lo()..=c.hi() {
        let src_degs = c.term(k).gen_degs().to_vec();
        let (sum, offs) = sum_of_twists(n, &src_degs, -1)?;
        terms.push(sum.clone());
        levels.push((sum, offs, src_degs));
    }
    let nr = n.rank();
    let mut maps = Vec::new();
    for k in (c.lo() + 1)..=c.hi() {
        let d = c.diff(k);
        let src_level = &levels[(k - c.lo()) as usize];
        let dst_level = &levels[(k - 1 - c.lo()) as usize];
        let mut cols: Vec<Vect> = Vec::with_capacity(src_level.0.rank());
        for (j, dcol) in d.cols().iter().enumerate() {
            let _ = j;
            for t in 0..nr {
                let mut col = vect_zero(dst_level.0.rank());
                for (r, entry) in dcol.iter().enumerate() {
                    if entry.is_zero() {
                        continue;
                    }
                    col[dst_level.1[r] + t] = ring.add(&col[dst_level.1[r] + t], entry);
                }
                cols.push(col);
            }
        }
        maps.push(ModuleMap::new(
            src_level.0.clone(),
            dst_level.0.clone(),
            0,
            cols,
        )?);
    }
    let complex = ChainComplex::new(c.lo(), terms, maps)?;
    Ok((complex, levels))
}

pub(crate) fn entries_from(
    kind: DerivedKind,
    complex: &ChainComplex,
    levels: &[(FPModule, Vec<usize>, Vec<i64>)],
    positions: impl Iterator<Item = i64>,
    index_of_position: impl Fn(i64) -> i64,
) -> Result<Vec<DerivedEntry>> {
    let zero_level = (
        FPModule::zero_module(complex.ring()),
        Vec::new(),
        Vec::new(),
    );
    let mut out = Vec::new();
    for pos in positions {
        let h = complex.homology(pos)?;
        let idx = pos - complex.lo();
        let level = if idx >= 0 && (idx as usize) < levels.len() {
            &levels[idx as usize]
        } else {
            &zero_level
        };
        out.push(DerivedEntry {
            kind,
            index: index_of_position(pos),
            module: h.module.clone(),
            witnesses: h.cycle_reps.clone(),
            level: level.0.clone(),
            offsets: level.1.clone(),
            free_gen_degs: level.2.clone(),
            homology: h,
        });
    }
    Ok(out)
}

/// `Ext^i(M, N)` for `i = 0 ..= i_max`, computed from a resolution of
/// `M` that is extended as needed.
pub fn ext_disc_from(
    res: &mut FreeResolution,
    n: &FPModule,
    i_max: usize,
) -> Result<Vec<DerivedEntry>> {
    res.extend_to(i_max + 1)?;
    let c = res.as_complex(i_max + 1)?;
    let (d, levels) = hom_cochain(&c, n)?;
    // H^i = H_{-i}; valid for i <= i_max because position i_max + 1 is
    // present in the window.
    entries_from(
        DerivedKind::Ext,
        &d,
        &levels,
        (0..=i_max as i64).map(|i| -i),
        |pos| -pos,
    )
}

/// `Ext^i(M, N)` for `i = 0 ..= i_max` using a fresh minimal resolution.
pub fn ext_disc(m: &FPModule, n: &FPModule, i_max: usize) -> Result<Vec<DerivedEntry>> {
    let mut res = FreeResolution::minimal(m, i_max + 1)?;
    ext_disc_from(&mut res, n, i_max)
}

/// `Tor_i(M, N)` for `i = 0 ..= i_max` from a resolution of `M`.
pub fn tor_disc_from(
    res: &mut FreeResolution,
    n: &FPModule,
    i_max: usize,
) -> Result<Vec<DerivedEntry>> {
    res.extend_to(i_max + 1)?;
    let c = res.as_complex(i_max + 1)?;
    let (t, levels) = tensor_chain(&c, n)?;
    entries_from(DerivedKind::Tor, &t, &levels, 0..=i_max as i64, |pos| pos)
}

/// `Tor_i(M, N)` for `i = 0 ..= i_max` using a fresh minimal resolution.
pub fn tor_disc(m: &FPModule, n: &FPModule, i_max: usize) -> Result<Vec<DerivedEntry>> {
    let mut res = FreeResolution::minimal(m, i_max + 1)?;
    tor_disc_from(&mut res, n, i_max)
}

/// Hyper-Ext `H^i Hom(C, N)` of a bounded complex of free modules, for
/// `i` in the inclusive range. The caller is responsible for the window:
/// if `C` is a truncation of something longer, indices at the truncation
/// boundary are not meaningful.
pub fn hyper_ext(
    c: &ChainComplex,
    n: &FPModule,
    i_lo: i64,
    i_hi: i64,
) -> Result<Vec<DerivedEntry>> {
    let (d, levels) = hom_cochain(c, n)?;
    let positions: Vec<i64> = (i_lo..=i_hi).map(|i| -i).collect();
    entries_from(DerivedKind::Ext, &d, &levels, positions.into_iter(), |pos| -pos)
}

/// Validate that `0 -> A --f--> B --g--> C -> 0` is exact: `f` injective,
/// `g` surjective, `g . f = 0`, and `ker g = im f`.
pub fn verify_ses(f: &ModuleMap, g: &ModuleMap) -> Result<()> {
    if f.dst() != g.src() {
        return Err(Error::IllFormedMap("middle terms differ".into()));
    }
    let comp = g.compose(f)?;
    if !comp.is_zero_map() {
        return Err(Error::Inconsistent("g . f != 0".into()));
    }
    if !f.kernel()?.0.is_zero() {
        return Err(Error::Inconsistent("first map is not injective".into()));
    }
    if !g.is_surjective()? {
        return Err(Error::Inconsistent("second map is not surjective".into()));
    }
    let b = f.dst();
    let mut span_cols: Vec<Vect> = f.cols().to_vec();
    span_cols.extend(b.rels().iter().cloned());
    let span = RSpan::new(b.ring(), &span_cols, b.rank(), false);
    let (_, kincl) = g.kernel()?;
    for col in kincl.cols() {
        if !span.contains(col) {
            return Err(Error::Inconsistent(
                "kernel of the second map exceeds the image of the first".into(),
            ));
        }
    }
    Ok(())
}

/// The class of a short exact sequence `0 -> A -> B -> C -> 0` (maps of
/// internal degree 0) in `Ext^1(C, A)`. Returns the `Ext^1` entry and
/// the class coordinates over its generators.
pub fn extension_class(f: &ModuleMap, g: &ModuleMap) -> Result<(DerivedEntry, Vect)> {
    if f.deg() != 0 || g.deg() != 0 {
        return Err(Error::BadParameter(
            "extension class needs degree 0 maps; twist the ends".into(),
        ));
    }
    verify_ses(f, g)?;
    let c_mod = g.dst().clone();
    let a_mod = f.src().clone();
    let mut res = FreeResolution::minimal(&c_mod, 2)?;
    let entries = ext_disc_from(&mut res, &a_mod, 1)?;
    let entry = entries
        .into_iter()
        .find(|e| e.index == 1)
        .expect("requested range includes 1");
    // Lift the augmentation through g, then factor the composite with
    // d_1 through f.
    let aug = res.aug();
    let mut lam_cols = Vec::with_capacity(aug.cols().len());
    for col in aug.cols() {
        let lifted = lift_elem_through(g, col).ok_or_else(|| {
            Error::Inconsistent("surjection failed to lift a generator".into())
        })?;
        lam_cols.push(lifted);
    }
    let f0 = FPModule::free(c_mod.ring(), res.term(0)?.gen_degs());
    let lam = ModuleMap::new(f0, g.src().clone(), 0, lam_cols)?;
    let d1 = res.diff(1)?;
    let nu = lam.compose(&d1)?;
    let mut mu_cols = Vec::with_capacity(nu.cols().len());
    for col in nu.cols() {
        let back = lift_elem_through(f, col).ok_or_else(|| {
            Error::Inconsistent("composite misses the image of the injection".into())
        })?;
        mu_cols.push(back);
    }
    let mu = ModuleMap::new(
        FPModule::free(c_mod.ring(), res.term(1)?.gen_degs()),
        a_mod,
        0,
        mu_cols,
    )?;
    let s = entry.map_as_level_elem(&mu)?;
    let class = entry
        .class_of_level_elem(&s)
        .ok_or_else(|| Error::Inconsistent("extension cocycle is not a cocycle".into()))?;
    Ok((entry, class))
}
