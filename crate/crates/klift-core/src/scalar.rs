//! Exact field arithmetic (`F_p` for prime `p < 2^31`, and `Q`), plus a
//! small dense matrix type with Gaussian elimination used by the graded
//! piece solvers.
//!
//! Scalars are plain data; the arithmetic lives on [`FieldSpec`] so that a
//! single enum serves every ring in a session. Mixing scalars from
//! different fields is an internal invariant violation and panics.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Description of the coefficient field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// Prime field `F_p`, `p` an odd or even prime below `2^31`.
    Fp(u64),
    /// The rational numbers.
    Q,
}

/// An exact field element. `Fp` values are kept reduced into `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    /// Element of a prime field.
    Fp(u64),
    /// Rational number, always in lowest terms (maintained by `BigRational`).
    Q(BigRational),
}

impl Scalar {
    /// True for the zero element.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp(v) => *v == 0,
            Scalar::Q(r) => r.is_zero(),
        }
    }

    /// True for the unit element.
    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp(v) => *v == 1,
            Scalar::Q(r) => r.is_one(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp(v) => write!(f, "{v}"),
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin for n < 3_215_031_751 with these bases.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    'witness: for a in [2u64, 3, 5, 7] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        let mut r = d;
        while r != n - 1 {
            x = mul_mod(x, x, n);
            r <<= 1;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

impl FieldSpec {
    /// Validated constructor for a prime field; `p` must be prime and
    /// below `2^31`.
    pub fn prime_field(p: u64) -> crate::Result<FieldSpec> {
        if p >= (1 << 31) {
            return Err(crate::Error::BadParameter(alloc::format!(
                "modulus {p} exceeds 2^31"
            )));
        }
        if !is_prime(p) {
            return Err(crate::Error::BadParameter(alloc::format!(
                "modulus {p} is not prime"
            )));
        }
        Ok(FieldSpec::Fp(p))
    }

    /// The additive identity.
    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Fp(_) => Scalar::Fp(0),
            FieldSpec::Q => Scalar::Q(BigRational::zero()),
        }
    }

    /// The multiplicative identity.
    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Fp(_) => Scalar::Fp(1),
            FieldSpec::Q => Scalar::Q(BigRational::one()),
        }
    }

    /// Embed a signed integer.
    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            FieldSpec::Fp(p) => {
                let m = v.rem_euclid(*p as i64) as u64;
                Scalar::Fp(m)
            }
            FieldSpec::Q => Scalar::Q(BigRational::from(BigInt::from(v))),
        }
    }

    /// Sum of two elements.
    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Fp(p), Scalar::Fp(x), Scalar::Fp(y)) => Scalar::Fp((x + y) % p),
            (FieldSpec::Q, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x + y),
            _ => unreachable!("scalar/field mismatch"),
        }
    }

    /// Difference of two elements.
    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Fp(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp((x + p - y) % p)
            }
            (FieldSpec::Q, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x - y),
            _ => unreachable!("scalar/field mismatch"),
        }
    }

    /// Product of two elements.
    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (FieldSpec::Fp(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(mul_mod(*x, *y, *p))
            }
            (FieldSpec::Q, Scalar::Q(x), Scalar::Q(y)) => Scalar::Q(x * y),
            _ => unreachable!("scalar/field mismatch"),
        }
    }

    /// Additive inverse.
    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Fp(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            (FieldSpec::Q, Scalar::Q(x)) => Scalar::Q(-x),
            _ => unreachable!("scalar/field mismatch"),
        }
    }

    /// Multiplicative inverse; panics on zero (checked by callers).
    pub fn inv(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (FieldSpec::Fp(p), Scalar::Fp(x)) => {
                assert!(*x != 0, "inverse of zero");
                Scalar::Fp(pow_mod(*x, p - 2, *p))
            }
            (FieldSpec::Q, Scalar::Q(x)) => {
                assert!(!x.is_zero(), "inverse of zero");
                Scalar::Q(x.recip())
            }
            _ => unreachable!("scalar/field mismatch"),
        }
    }

    /// Quotient `a / b`; panics on zero divisor.
    pub fn div(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.mul(a, &self.inv(b))
    }

    /// Render for diagnostics, e.g. `F_5` or `Q`.
    pub fn describe(&self) -> String {
        match self {
            FieldSpec::Fp(p) => alloc::format!("F_{p}"),
            FieldSpec::Q => String::from("Q"),
        }
    }
}

/// Dense matrix over a fixed field, row major. Used for graded piece
/// computations (split tests, chain map solving, multiplication matrices),
/// where sizes stay small and exactness matters more than sparsity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FMat {
    /// Field of the entries.
    pub field: FieldSpec,
    /// Row count.
    pub rows: usize,
    /// Column count.
    pub cols: usize,
    data: Vec<Scalar>,
}

impl FMat {
    /// Zero matrix of the given shape.
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> FMat {
        FMat {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    /// Identity matrix.
    pub fn identity(field: FieldSpec, n: usize) -> FMat {
        let mut m = FMat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Entry accessor.
    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    /// Entry mutator.
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    /// Add `v` into the entry at `(r, c)`.
    pub fn add_at(&mut self, r: usize, c: usize, v: &Scalar) {
        let cur = self.get(r, c).clone();
        self.set(r, c, self.field.add(&cur, v));
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &FMat) -> FMat {
        assert_eq!(self.cols, rhs.rows);
        let f = self.field;
        let mut out = FMat::zero(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let prod = f.mul(a, b);
                    out.add_at(i, j, &prod);
                }
            }
        }
        out
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let f = self.field;
        let mut out = vec![f.zero(); self.rows];
        for i in 0..self.rows {
            for (k, x) in v.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                out[i] = f.add(&out[i], &f.mul(a, x));
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot column of each
    /// pivot row, in order. Deterministic: the first nonzero entry in
    /// column-major scan order is always chosen as pivot.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field;
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let mut sel = None;
            for r in row..self.rows {
                if !self.get(r, col).is_zero() {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            self.swap_rows(row, sel);
            let inv = f.inv(self.get(row, col));
            for c in col..self.cols {
                let v = f.mul(self.get(row, c), &inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for c in col..self.cols {
                    let delta = f.mul(&factor, self.get(row, c));
                    let v = f.sub(self.get(r, c), &delta);
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Rank of the matrix.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Solve `self * x = b` for one particular solution and a basis of the
    /// homogeneous solution space. Returns `None` when inconsistent.
    pub fn solve_affine(&self, b: &[Scalar]) -> Option<(Vec<Scalar>, Vec<Vec<Scalar>>)> {
        assert_eq!(b.len(), self.rows);
        let f = self.field;
        let mut aug = FMat::zero(f, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref();
        // Inconsistent iff a pivot lands in the augmented column.
        if pivots.iter().any(|&c| c == self.cols) {
            return None;
        }
        let mut particular = vec![f.zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            particular[pcol] = aug.get(prow, self.cols).clone();
        }
        let mut nullspace = Vec::new();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; self.cols];
            for &c in &pivots {
                s[c] = true;
            }
            s
        };
        for free in 0..self.cols {
            if pivot_set[free] {
                continue;
            }
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = f.neg(aug.get(prow, free));
            }
            nullspace.push(v);
        }
        Some((particular, nullspace))
    }

    /// Basis of the kernel (right nullspace).
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let zeros = vec![self.field.zero(); self.rows];
        self.solve_affine(&zeros)
            .expect("homogeneous system is always consistent")
            .1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_arithmetic_basics() {
        let f = FieldSpec::prime_field(7).unwrap();
        let a = f.from_i64(5);
        let b = f.from_i64(4);
        assert_eq!(f.add(&a, &b), f.from_i64(2));
        assert_eq!(f.mul(&a, &b), f.from_i64(6));
        assert_eq!(f.sub(&a, &b), f.from_i64(1));
        assert_eq!(f.mul(&a, &f.inv(&a)), f.one());
        assert_eq!(f.from_i64(-3), f.from_i64(4));
    }

    #[test]
    fn rational_arithmetic_is_exact() {
        let f = FieldSpec::Q;
        let third = f.div(&f.one(), &f.from_i64(3));
        let sum = f.add(&f.add(&third, &third), &third);
        assert_eq!(sum, f.one());
    }

    #[test]
    fn primality_check_rejects_composites() {
        assert!(FieldSpec::prime_field(4).is_err());
        assert!(FieldSpec::prime_field(1).is_err());
        assert!(FieldSpec::prime_field(2147483647).is_ok()); // 2^31 - 1
        assert!(FieldSpec::prime_field(1 << 31).is_err());
        assert!(FieldSpec::prime_field(341).is_err()); // Fermat pseudoprime base 2
    }

    #[test]
    fn solve_affine_reports_particular_and_nullspace() {
        let f = FieldSpec::prime_field(5).unwrap();
        // x + 2y + z = 3 ; 2x + 4y + 2z = 6 (rank 1, two free vars)
        let mut m = FMat::zero(f, 2, 3);
        for (r, row) in [[1i64, 2, 1], [2, 4, 2]].iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, f.from_i64(*v));
            }
        }
        let (part, null) = m.solve_affine(&[f.from_i64(3), f.from_i64(6)]).unwrap();
        assert_eq!(null.len(), 2);
        let check = m.apply(&part);
        assert_eq!(check, vec![f.from_i64(3), f.from_i64(6)]);
        for v in &null {
            assert!(m.apply(v).iter().all(|s| s.is_zero()));
        }
    }

    #[test]
    fn inconsistent_system_returns_none() {
        let f = FieldSpec::Q;
        let mut m = FMat::zero(f, 2, 1);
        m.set(0, 0, f.one());
        m.set(1, 0, f.one());
        assert!(m.solve_affine(&[f.one(), f.from_i64(2)]).is_none());
    }

    #[test]
    fn rational_rref_avoids_rounding() {
        let f = FieldSpec::Q;
        let mut m = FMat::zero(f, 2, 2);
        m.set(0, 0, f.div(&f.one(), &f.from_i64(3)));
        m.set(0, 1, f.one());
        m.set(1, 0, f.one());
        m.set(1, 1, f.from_i64(3));
        // Rows proportional: rank 1 exactly.
        assert_eq!(m.rank(), 1);
    }
}
