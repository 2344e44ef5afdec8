//! Free resolutions of finitely presented graded modules.
//!
//! The minimal resolution is built by iterated minimal syzygies: minimize
//! the presentation, then at each step take a minimal generating set of
//! the syzygy module of the previous differential's columns. Because the
//! previous columns are themselves irredundant, no syzygy can carry a
//! unit entry, so every step stays minimal.
//!
//! Over quotient rings resolutions are typically infinite; the structure
//! is a finite window that can be extended on demand. When a differential
//! repeats an earlier one up to a uniform degree shift, further steps are
//! generated by shifting instead of recomputing. That shortcut is exact:
//! the syzygy routine is deterministic and consumes only the polynomial
//! columns (degrees enter only through an order-preserving shift), so the
//! shifted matrix is what the computation would have produced anyway.

use alloc::vec::Vec;

use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::gb::Vect;
use crate::module::{minimal_generators, minimize, FPModule, Minimized, ModuleMap, RSpan};
use crate::ring::Ring;

/// Detected repetition of differentials: for `i >= start + period`,
/// `d_i` equals `d_{i-period}` with all generator degrees raised by
/// `shift`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Periodicity {
    /// First index of the repeating block.
    pub start: usize,
    /// Length of the repeating block.
    pub period: usize,
    /// Degree shift applied per period.
    pub shift: i64,
}

/// A free resolution `... -> F_1 -> F_0 -> M -> 0`, minimal or not.
#[derive(Debug, Clone)]
pub struct FreeResolution {
    module: FPModule,
    minimized: Option<Minimized>,
    terms: Vec<FPModule>,
    /// `diffs[i]: F_{i+1} -> F_i`.
    diffs: Vec<ModuleMap>,
    aug: ModuleMap,
    terminated: bool,
    minimal: bool,
    periodicity: Option<Periodicity>,
}

impl FreeResolution {
    /// Minimal free resolution of `m`, computed out to index `len`
    /// (i.e. terms `F_0 ..= F_len`).
    pub fn minimal(m: &FPModule, len: usize) -> Result<FreeResolution> {
        let minz = minimize(m)?;
        let f0 = FPModule::free(m.ring(), minz.module.gen_degs());
        let aug = ModuleMap::new(
            f0.clone(),
            m.clone(),
            0,
            minz.from_min.cols().to_vec(),
        )?;
        let mut res = FreeResolution {
            module: m.clone(),
            terms: alloc::vec![f0],
            diffs: Vec::new(),
            aug,
            terminated: minz.module.rels().is_empty(),
            minimal: true,
            periodicity: None,
            minimized: Some(minz),
        };
        res.extend_to(len)?;
        Ok(res)
    }

    /// A deliberately non-minimal resolution of `m`: the zeroth term
    /// carries a redundant copy of the first generator and later steps
    /// use raw (unpruned) syzygy generators. Useful for checking that
    /// derived invariants do not depend on the resolution.
    pub fn padded(m: &FPModule, len: usize) -> Result<FreeResolution> {
        let ring = m.ring().clone();
        let pad_deg = m.gen_degs().first().copied().unwrap_or(0);
        let mut degs = m.gen_degs().to_vec();
        degs.push(pad_deg);
        let f0 = FPModule::free(&ring, &degs);
        let r = m.rank();
        let mut aug_cols: Vec<Vect> = (0..r).map(|i| crate::gb::vect_unit(&ring, r, i)).collect();
        aug_cols.push(if r > 0 {
            crate::gb::vect_unit(&ring, r, 0)
        } else {
            crate::gb::vect_zero(0)
        });
        let aug = ModuleMap::new(f0.clone(), m.clone(), 0, aug_cols)?;
        // ker(aug) is generated by the lifted relations and e_last - e_0.
        let mut d1_cols: Vec<Vect> = Vec::new();
        for rel in m.rels() {
            let mut v = rel.clone();
            v.push(ring.zero());
            d1_cols.push(v);
        }
        let mut extra = crate::gb::vect_zero(r + 1);
        extra[r] = ring.one();
        if r > 0 {
            extra[0] = ring.neg(&ring.one());
        }
        d1_cols.push(extra);
        let mut res = FreeResolution {
            module: m.clone(),
            minimized: None,
            terms: alloc::vec![f0],
            diffs: Vec::new(),
            aug,
            terminated: false,
            minimal: false,
            periodicity: None,
        };
        res.push_step(d1_cols)?;
        res.extend_to(len)?;
        Ok(res)
    }

    fn push_step(&mut self, cols: Vec<Vect>) -> Result<()> {
        let below = self.terms.last().expect("at least F_0").clone();
        let cols: Vec<Vect> = cols
            .into_iter()
            .filter(|c| !crate::gb::vect_is_zero(c))
            .collect();
        if cols.is_empty() {
            self.terminated = true;
            return Ok(());
        }
        let mut degs = Vec::with_capacity(cols.len());
        for c in &cols {
            match below.elem_degree(c)? {
                Some(d) => degs.push(d),
                None => unreachable!("zero columns were filtered"),
            }
        }
        let next = FPModule::free(self.ring(), &degs);
        let d = ModuleMap::new(next.clone(), below, 0, cols)?;
        self.terms.push(next);
        self.diffs.push(d);
        Ok(())
    }

    /// Extend the computed window so that `F_len` exists (or the
    /// resolution has terminated before it).
    pub fn extend_to(&mut self, len: usize) -> Result<()> {
        while self.terms.len() <= len && !self.terminated {
            if let Some(p) = self.periodicity.clone() {
                let i = self.diffs.len(); // building d_{i+1}
                if i >= p.start + p.period {
                    let prev = &self.diffs[i - p.period];
                    let cols = prev.cols().to_vec();
                    self.push_step(cols)?;
                    continue;
                }
            }
            let last = match self.diffs.last() {
                Some(d) => d,
                None => {
                    // Minimal path with F_0 present but no d_1 yet.
                    let minz = self
                        .minimized
                        .as_ref()
                        .expect("non-minimal resolutions seed d_1 at construction");
                    let cols = minz.module.rels().to_vec();
                    self.push_step(cols)?;
                    continue;
                }
            };
            let below = last.dst().clone();
            let span = RSpan::new(self.ring(), last.cols(), below.rank(), false);
            let mut syz = span.syzygies_r(last.cols());
            if self.minimal {
                let host = FPModule::free(self.ring(), last.src().gen_degs());
                syz = minimal_generators(&host, &syz)?;
            }
            self.push_step(syz)?;
            self.detect_periodicity();
        }
        Ok(())
    }

    /// Scan for a repeat of the newest differential among earlier ones.
    fn detect_periodicity(&mut self) {
        if self.periodicity.is_some() || !self.minimal {
            return;
        }
        let i = self.diffs.len();
        if i < 2 {
            return;
        }
        let d_new = &self.diffs[i - 1];
        for p in 1..i {
            let d_old = &self.diffs[i - 1 - p];
            if d_new.cols() != d_old.cols() {
                continue;
            }
            let src_new = d_new.src().gen_degs();
            let src_old = d_old.src().gen_degs();
            let dst_new = d_new.dst().gen_degs();
            let dst_old = d_old.dst().gen_degs();
            if src_new.len() != src_old.len() || dst_new.len() != dst_old.len() {
                continue;
            }
            let Some(shift) = uniform_shift(src_old, src_new) else {
                continue;
            };
            if uniform_shift(dst_old, dst_new) != Some(shift) {
                continue;
            }
            self.periodicity = Some(Periodicity {
                start: i - p,
                period: p,
                shift,
            });
            return;
        }
    }

    /// Underlying ring.
    pub fn ring(&self) -> &Ring {
        self.module.ring()
    }

    /// The resolved module.
    pub fn module(&self) -> &FPModule {
        &self.module
    }

    /// Augmentation `F_0 -> M`.
    pub fn aug(&self) -> &ModuleMap {
        &self.aug
    }

    /// Highest index `i` with `F_i` computed.
    pub fn len(&self) -> usize {
        self.terms.len() - 1
    }

    /// True when all terms are stored (the module has finite projective
    /// dimension within what was computed).
    pub fn terminated(&self) -> bool {
        self.terminated
    }

    /// True when the resolution was built minimally.
    pub fn is_minimal(&self) -> bool {
        self.minimal
    }

    /// Detected differential repetition, if any.
    pub fn periodicity(&self) -> Option<&Periodicity> {
        self.periodicity.as_ref()
    }

    /// Term `F_i`. Beyond the computed window this is the zero module if
    /// the resolution terminated, otherwise an error naming the bound.
    pub fn term(&self, i: usize) -> Result<FPModule> {
        if i < self.terms.len() {
            Ok(self.terms[i].clone())
        } else if self.terminated {
            Ok(FPModule::free(self.ring(), &[]))
        } else {
            Err(Error::InsufficientResolution(alloc::format!("{i}")))
        }
    }

    /// Differential `d_i: F_i -> F_{i-1}` for `i >= 1`.
    pub fn diff(&self, i: usize) -> Result<ModuleMap> {
        if i == 0 {
            return Err(Error::BadParameter("d_0 does not exist; use aug".into()));
        }
        if i - 1 < self.diffs.len() {
            Ok(self.diffs[i - 1].clone())
        } else if self.terminated {
            Ok(ModuleMap::zero(self.term(i)?, self.term(i - 1)?, 0))
        } else {
            Err(Error::InsufficientResolution(alloc::format!("{i}")))
        }
    }

    /// Betti number: rank of `F_i`.
    pub fn betti(&self, i: usize) -> Result<usize> {
        Ok(self.term(i)?.rank())
    }

    /// Generator degrees of `F_i` (graded Betti data).
    pub fn betti_degrees(&self, i: usize) -> Result<Vec<i64>> {
        Ok(self.term(i)?.gen_degs().to_vec())
    }

    /// The window `F_0 <- ... <- F_hi` as a chain complex at positions
    /// `0 ..= hi` (the module itself is not a term).
    pub fn as_complex(&self, hi: usize) -> Result<ChainComplex> {
        let mut terms = Vec::with_capacity(hi + 1);
        let mut maps = Vec::with_capacity(hi);
        for i in 0..=hi {
            terms.push(self.term(i)?);
        }
        for i in 1..=hi {
            maps.push(self.diff(i)?);
        }
        ChainComplex::new(0, terms, maps)
    }
}

fn uniform_shift(old: &[i64], new: &[i64]) -> Option<i64> {
    let first = new.first()? - old.first()?;
    if old.iter().zip(new).all(|(o, n)| n - o == first) {
        Some(first)
    } else {
        None
    }
}
