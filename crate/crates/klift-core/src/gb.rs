//! Groebner bases for submodules of free modules over a free graded
//! polynomial ring, with representation tracking and syzygies.
//!
//! Everything here works at the level of the free base ring: quotient
//! ring structure is handled one layer up by padding generator lists with
//! ideal generators (see [`crate::module`]). Elements of a free module of
//! rank `r` are [`Vect`]s, plain `Vec<Poly>` of length `r`.
//!
//! The order on module terms is term-over-position: monomials compare in
//! the ring order first, ties go to the lower component index. All three
//! ring orders refine the weighted degree, so leading terms of
//! homogeneous vectors have extremal degree.
//!
//! Buchberger's algorithm is run with the classical product criterion
//! only for rank one inputs without syzygy tracking; when syzygies are
//! requested every same-component S-pair is processed, so the recorded
//! reductions-to-zero together with the `I - X*Y` columns generate the
//! full syzygy module (Schreyer).

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use crate::mono::Mono;
use crate::poly::{Poly, Term};
use crate::ring::Ring;
use crate::scalar::Scalar;

/// Element of a free module: one polynomial per component.
pub type Vect = Vec<Poly>;

/// Zero vector of the given rank.
pub fn vect_zero(rank: usize) -> Vect {
    vec![Poly::zero(); rank]
}

/// True when every component is zero.
pub fn vect_is_zero(v: &Vect) -> bool {
    v.iter().all(|p| p.is_zero())
}

/// Componentwise sum.
pub fn vect_add(ring: &Ring, a: &Vect, b: &Vect) -> Vect {
    a.iter().zip(b).map(|(p, q)| ring.add(p, q)).collect()
}

/// Componentwise difference.
pub fn vect_sub(ring: &Ring, a: &Vect, b: &Vect) -> Vect {
    a.iter().zip(b).map(|(p, q)| ring.sub(p, q)).collect()
}

/// Componentwise negation.
pub fn vect_neg(ring: &Ring, a: &Vect) -> Vect {
    a.iter().map(|p| ring.neg(p)).collect()
}

/// Multiply by a single term.
pub fn vect_mul_term(ring: &Ring, v: &Vect, coef: &Scalar, mono: &Mono) -> Vect {
    v.iter().map(|p| ring.mul_term(p, coef, mono)).collect()
}

/// Multiply by a polynomial.
pub fn vect_mul_poly(ring: &Ring, v: &Vect, p: &Poly) -> Vect {
    v.iter().map(|q| ring.mul(q, p)).collect()
}

/// Scale by a field element.
pub fn vect_scale(ring: &Ring, v: &Vect, c: &Scalar) -> Vect {
    v.iter().map(|p| ring.scale(p, c)).collect()
}

/// Apply the quotient ring normal form to every entry.
pub fn vect_nf_entries(ring: &Ring, v: &Vect) -> Vect {
    v.iter().map(|p| ring.nf_poly(p)).collect()
}

/// Standard basis vector `e_i` of the given rank.
pub fn vect_unit(ring: &Ring, rank: usize, i: usize) -> Vect {
    let mut v = vect_zero(rank);
    v[i] = ring.one();
    v
}

/// Render for diagnostics.
pub fn vect_string(ring: &Ring, v: &Vect) -> alloc::string::String {
    let mut s = alloc::string::String::from("(");
    for (i, p) in v.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&ring.poly_string(p));
    }
    s.push(')');
    s
}

/// Leading position of a vector under term-over-position: the component
/// whose leading monomial is greatest (ties to the lower component).
pub fn lead_of(ring: &Ring, v: &Vect) -> Option<(usize, Term)> {
    let mut best: Option<(usize, &Term)> = None;
    for (c, p) in v.iter().enumerate() {
        let Some(t) = p.lead() else { continue };
        match best {
            None => best = Some((c, t)),
            Some((_, bt)) => {
                if ring.cmp_mono(&t.mono, &bt.mono) == Ordering::Greater {
                    best = Some((c, t));
                }
            }
        }
    }
    best.map(|(c, t)| (c, t.clone()))
}

/// A Groebner basis of a submodule of a free module, with optional
/// representations of the basis elements over the original inputs.
#[derive(Debug, Clone)]
pub struct GBasis {
    /// Rank of the ambient free module.
    pub rank: usize,
    /// Reduced basis: monic leads, tails reduced, sorted ascending by
    /// leading (component, monomial). Unique for the submodule.
    pub elems: Vec<Vect>,
    /// `reprs[k][i]` with `g_k = sum_i reprs[k][i] * input_i`, present
    /// when tracking was requested.
    pub reprs: Option<Vec<Vec<Poly>>>,
}

impl GBasis {
    /// Full normal form of `v` against the basis.
    pub fn nf(&self, ring: &Ring, v: &Vect) -> Vect {
        reduce_vect(ring, v, &self.elems, false).0
    }

    /// Normal form plus the quotients on the basis elements.
    pub fn nf_tracked(&self, ring: &Ring, v: &Vect) -> (Vect, Vec<Poly>) {
        let (nf, q) = reduce_vect(ring, v, &self.elems, true);
        (nf, q.expect("tracking requested"))
    }

    /// Membership test for the generated submodule.
    pub fn contains(&self, ring: &Ring, v: &Vect) -> bool {
        vect_is_zero(&self.nf(ring, v))
    }
}

/// Full reduction of `v` by `basis`: returns the normal form (no term of
/// which is divisible by any basis lead in the matching component) and,
/// when `track` is set, the quotient polynomials.
pub fn reduce_vect(
    ring: &Ring,
    v: &Vect,
    basis: &[Vect],
    track: bool,
) -> (Vect, Option<Vec<Poly>>) {
    let rank = v.len();
    let mut rem = vect_zero(rank);
    let mut work = v.clone();
    let mut quot = if track {
        Some(vec![Poly::zero(); basis.len()])
    } else {
        None
    };
    'outer: while let Some((c, lt)) = lead_of(ring, &work) {
        for (k, g) in basis.iter().enumerate() {
            let Some((gc, glt)) = lead_of(ring, g) else {
                continue;
            };
            if gc != c {
                continue;
            }
            if let Some(m) = glt.mono.quotient_of(&lt.mono) {
                let q = ring.field.div(&lt.coef, &glt.coef);
                work = vect_sub(ring, &work, &vect_mul_term(ring, g, &q, &m));
                if let Some(quot) = quot.as_mut() {
                    let qp = ring.term_poly(q, m);
                    quot[k] = ring.add(&quot[k], &qp);
                }
                continue 'outer;
            }
        }
        // Irreducible leading term: move it to the remainder. Within one
        // component terms arrive in strictly descending order, so pushing
        // keeps the invariant.
        rem[c].terms.push(lt);
        work[c].terms.remove(0);
    }
    (rem, quot)
}

/// Options for [`module_gb_full`].
#[derive(Debug, Clone, Copy, Default)]
pub struct GBOptions {
    /// Keep representations of basis elements over the inputs.
    pub track_reprs: bool,
    /// Also assemble generators of the syzygy module of the inputs.
    /// Implies `track_reprs` and disables pair skipping.
    pub want_syzygies: bool,
}

/// Result of [`module_gb_full`].
#[derive(Debug, Clone)]
pub struct GBOutput {
    /// The reduced basis.
    pub basis: GBasis,
    /// Input-coordinate generators of `Syz(inputs)` when requested.
    pub syzygies: Option<Vec<Vec<Poly>>>,
}

fn spair_parts(
    ring: &Ring,
    gi: &Vect,
    gj: &Vect,
) -> Option<((Scalar, Mono), (Scalar, Mono))> {
    let (ci, ti) = lead_of(ring, gi)?;
    let (cj, tj) = lead_of(ring, gj)?;
    if ci != cj {
        return None;
    }
    let l = ti.mono.lcm(&tj.mono);
    let mi = ti.mono.quotient_of(&l).expect("lcm divisible");
    let mj = tj.mono.quotient_of(&l).expect("lcm divisible");
    let a = ring.field.inv(&ti.coef);
    let b = ring.field.inv(&tj.coef);
    Some(((a, mi), (b, mj)))
}

/// Buchberger with optional representation tracking and syzygy
/// collection. Deterministic: pairs are processed by ascending
/// `(lcm degree, i, j)`, the final basis is the unique reduced one.
pub fn module_gb_full(ring: &Ring, inputs: &[Vect], rank: usize, opts: GBOptions) -> GBOutput {
    let track = opts.track_reprs || opts.want_syzygies;
    let n = inputs.len();
    let mut elems: Vec<Vect> = Vec::new();
    let mut reprs: Vec<Vec<Poly>> = Vec::new();
    for (i, v) in inputs.iter().enumerate() {
        debug_assert_eq!(v.len(), rank, "input rank mismatch");
        if vect_is_zero(v) {
            continue;
        }
        elems.push(v.clone());
        if track {
            let mut e = vec![Poly::zero(); n];
            e[i] = ring.one();
            reprs.push(e);
        }
    }

    let mut heap: BinaryHeap<Reverse<(i64, usize, usize)>> = BinaryHeap::new();
    let push_pairs = |heap: &mut BinaryHeap<Reverse<(i64, usize, usize)>>,
                          elems: &[Vect],
                          new_idx: usize| {
        let Some((cn, tn)) = lead_of(ring, &elems[new_idx]) else {
            return;
        };
        for k in 0..new_idx {
            let Some((ck, tk)) = lead_of(ring, &elems[k]) else {
                continue;
            };
            if ck != cn {
                continue;
            }
            let deg = ring.mono_degree(&tk.mono.lcm(&tn.mono));
            heap.push(Reverse((deg, k, new_idx)));
        }
    };
    for idx in 0..elems.len() {
        push_pairs(&mut heap, &elems, idx);
    }

    let mut syzygies: Vec<Vec<Poly>> = Vec::new();

    while let Some(Reverse((_, i, j))) = heap.pop() {
        let Some(((ci_c, ci_m), (cj_c, cj_m))) = spair_parts(ring, &elems[i], &elems[j]) else {
            continue;
        };
        if rank == 1 && !opts.want_syzygies {
            // Product criterion: coprime leading monomials reduce to zero.
            let (_, ti) = lead_of(ring, &elems[i]).unwrap();
            let (_, tj) = lead_of(ring, &elems[j]).unwrap();
            let l = ti.mono.lcm(&tj.mono);
            if l == ti.mono.mul(&tj.mono) {
                continue;
            }
        }
        let s = vect_sub(
            ring,
            &vect_mul_term(ring, &elems[i], &ci_c, &ci_m),
            &vect_mul_term(ring, &elems[j], &cj_c, &cj_m),
        );
        let (nf, quot) = reduce_vect(ring, &s, &elems, track);
        if vect_is_zero(&nf) {
            if opts.want_syzygies {
                // a*repr_i - b*repr_j - sum quot_k*repr_k, in input coords.
                let mut z = vec![Poly::zero(); n];
                for (t, r) in [( (&ci_c, &ci_m), &reprs[i]), ((&cj_c, &cj_m), &reprs[j])]
                    .iter()
                    .enumerate()
                {
                    let ((c, m), rep) = r;
                    let signed = if t == 0 {
                        (*c).clone()
                    } else {
                        ring.field.neg(c)
                    };
                    for (col, p) in rep.iter().enumerate() {
                        let contrib = ring.mul_term(p, &signed, m);
                        z[col] = ring.add(&z[col], &contrib);
                    }
                }
                if let Some(quot) = &quot {
                    for (k, q) in quot.iter().enumerate() {
                        if q.is_zero() {
                            continue;
                        }
                        for (col, p) in reprs[k].iter().enumerate() {
                            let contrib = ring.mul(p, q);
                            z[col] = ring.sub(&z[col], &contrib);
                        }
                    }
                }
                if !vect_is_zero(&z) {
                    syzygies.push(z);
                }
            }
            continue;
        }
        // New basis element: normalise to monic lead.
        let (_, lt) = lead_of(ring, &nf).unwrap();
        let inv = ring.field.inv(&lt.coef);
        let newv = vect_scale(ring, &nf, &inv);
        if track {
            let mut rep = vec![Poly::zero(); n];
            for (which, ((c, m), src)) in [((&ci_c, &ci_m), &reprs[i]), ((&cj_c, &cj_m), &reprs[j])]
                .iter()
                .enumerate()
            {
                let signed = if which == 0 {
                    (*c).clone()
                } else {
                    ring.field.neg(c)
                };
                for (col, p) in src.iter().enumerate() {
                    let contrib = ring.mul_term(p, &signed, m);
                    rep[col] = ring.add(&rep[col], &contrib);
                }
            }
            if let Some(quot) = &quot {
                for (k, q) in quot.iter().enumerate() {
                    if q.is_zero() {
                        continue;
                    }
                    for (col, p) in reprs[k].iter().enumerate() {
                        let contrib = ring.mul(p, q);
                        rep[col] = ring.sub(&rep[col], &contrib);
                    }
                }
            }
            reprs.push(rep.iter().map(|p| ring.scale(p, &inv)).collect());
        }
        elems.push(newv);
        push_pairs(&mut heap, &elems, elems.len() - 1);
    }

    // Reduce: sort ascending by lead, drop redundant leads, tail-reduce,
    // make monic. Divisors precede multiples in any degree-compatible
    // order, so one ascending pass suffices for minimality.
    let mut order: Vec<usize> = (0..elems.len()).collect();
    order.sort_by(|&a, &b| {
        let (ca, ta) = lead_of(ring, &elems[a]).unwrap();
        let (cb, tb) = lead_of(ring, &elems[b]).unwrap();
        ring.cmp_mono(&ta.mono, &tb.mono)
            .then(ca.cmp(&cb))
            .then(a.cmp(&b))
    });
    let mut kept: Vec<Vect> = Vec::new();
    let mut kept_reprs: Vec<Vec<Poly>> = Vec::new();
    for &idx in &order {
        let (c, t) = lead_of(ring, &elems[idx]).unwrap();
        let redundant = kept.iter().any(|g| {
            let (gc, gt) = lead_of(ring, g).unwrap();
            gc == c && gt.mono.divides(&t.mono)
        });
        if redundant {
            continue;
        }
        kept.push(elems[idx].clone());
        if track {
            kept_reprs.push(reprs[idx].clone());
        }
    }
    // Tail reduction against the other kept elements.
    for i in 0..kept.len() {
        let mut others: Vec<Vect> = Vec::with_capacity(kept.len() - 1);
        for (j, g) in kept.iter().enumerate() {
            if j != i {
                others.push(g.clone());
            }
        }
        let (nf, quot) = reduce_vect(ring, &kept[i], &others, track);
        debug_assert!(!vect_is_zero(&nf), "minimal element reduced away");
        if track {
            let quot = quot.unwrap();
            let mut rep = kept_reprs[i].clone();
            let mut oi = 0usize;
            for (j, _) in kept.clone().iter().enumerate() {
                if j == i {
                    continue;
                }
                let q = &quot[oi];
                oi += 1;
                if q.is_zero() {
                    continue;
                }
                for (col, p) in kept_reprs[j].clone().iter().enumerate() {
                    let contrib = ring.mul(p, q);
                    rep[col] = ring.sub(&rep[col], &contrib);
                }
            }
            kept_reprs[i] = rep;
        }
        kept[i] = nf;
        // Monic.
        let (_, lt) = lead_of(ring, &kept[i]).unwrap();
        if !lt.coef.is_one() {
            let inv = ring.field.inv(&lt.coef);
            kept[i] = vect_scale(ring, &kept[i], &inv);
            if track {
                kept_reprs[i] = kept_reprs[i].iter().map(|p| ring.scale(p, &inv)).collect();
            }
        }
    }

    let basis = GBasis {
        rank,
        elems: kept,
        reprs: if track { Some(kept_reprs) } else { None },
    };

    let syzygies = if opts.want_syzygies {
        // Add the I - X*Y columns: reduce each input to zero over the
        // final basis and subtract the representation combination.
        let reprs = basis.reprs.as_ref().unwrap();
        for (jin, v) in inputs.iter().enumerate() {
            let (nf, y) = basis.nf_tracked(ring, v);
            debug_assert!(
                vect_is_zero(&nf),
                "input does not reduce to zero over its own basis"
            );
            let mut z = vec![Poly::zero(); n];
            z[jin] = ring.one();
            for (k, q) in y.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                for (col, p) in reprs[k].iter().enumerate() {
                    let contrib = ring.mul(p, q);
                    z[col] = ring.sub(&z[col], &contrib);
                }
            }
            if !vect_is_zero(&z) {
                syzygies.push(z);
            }
        }
        let mut out = syzygies;
        out.sort();
        out.dedup();
        Some(out)
    } else {
        None
    };

    GBOutput { basis, syzygies }
}

/// Reduced Groebner basis of a polynomial ideal.
pub fn reduced_ideal_gb(ring: &Ring, gens: &[Poly]) -> Vec<Poly> {
    let inputs: Vec<Vect> = gens
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| vec![p.clone()])
        .collect();
    let out = module_gb_full(ring, &inputs, 1, GBOptions::default());
    out.basis.elems.into_iter().map(|mut v| v.remove(0)).collect()
}

/// Generators of the syzygy module of `inputs` (free ring coordinates).
pub fn module_syzygies(ring: &Ring, inputs: &[Vect], rank: usize) -> Vec<Vec<Poly>> {
    let out = module_gb_full(
        ring,
        inputs,
        rank,
        GBOptions {
            track_reprs: true,
            want_syzygies: true,
        },
    );
    out.syzygies.unwrap()
}
