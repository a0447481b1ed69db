//! Exact linear algebra over the three scalar domains used by the toolkit:
//! rationals, univariate polynomials over the rationals, and prime fields.
//!
//! Rank and nullspace are computed by fraction-free (Bareiss) elimination.
//! For polynomial matrices a second, independent path evaluates the matrix
//! at enough integer points and takes the maximum rank; the two paths are
//! cross-checked in the test suite. No floating point anywhere.

use num::bigint::BigInt;
use num::rational::Ratio;
use num::{BigUint, One, Signed, Zero};
use std::fmt;
use thiserror::Error;

pub type Rat = Ratio<BigInt>;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("degree fit needs at least 3 samples, got {0}")]
    TooFewSamples(usize),
    #[error("degree fit samples must have positive counts")]
    NonPositiveCount,
    #[error("mixed prime moduli: {0} vs {1}")]
    ModulusMismatch(u64, u64),
}

/// Ring operations needed by the elimination routines. `zero`/`one` are
/// instance methods so that `Fp` can carry its modulus through.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero(&self) -> Self;
    fn one(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Exact division; panics if the division is not exact in the domain.
    fn exact_div(&self, other: &Self) -> Self;
    fn compatible(&self, other: &Self) -> bool {
        let _ = other;
        true
    }
}

pub fn rat(n: i64) -> Rat {
    Ratio::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Ratio::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar for Rat {
    fn zero(&self) -> Self {
        rat(0)
    }
    fn one(&self) -> Self {
        rat(1)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn exact_div(&self, other: &Self) -> Self {
        assert!(!Zero::is_zero(other), "division by zero");
        self / other
    }
}

// ---------------------------------------------------------------------------
// Univariate polynomials over the rationals
// ---------------------------------------------------------------------------

/// Polynomial in one variable `t` with rational coefficients, stored
/// little-endian with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map(|c| Zero::is_zero(c)).unwrap_or(false) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    /// The monomial `t`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![rat(0), rat(1)])
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc: Rat = rat(0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Euclidean division, returning (quotient, remainder).
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.coeffs.is_empty(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dlead = divisor.coeffs.last().unwrap().clone();
        let ddeg = divisor.coeffs.len() - 1;
        if rem.len() < divisor.coeffs.len() {
            return (QPoly::from_coeffs(vec![]), self.clone());
        }
        let mut quot = vec![rat(0); rem.len() - ddeg];
        while rem.len() >= divisor.coeffs.len() {
            let shift = rem.len() - 1 - ddeg;
            let factor = rem.last().unwrap() / &dlead;
            quot[shift] = factor.clone();
            for (i, dc) in divisor.coeffs.iter().enumerate() {
                let idx = shift + i;
                rem[idx] = &rem[idx] - &(dc * &factor);
            }
            while rem.last().map(|c| Zero::is_zero(c)).unwrap_or(false) {
                rem.pop();
            }
            if rem.is_empty() {
                break;
            }
        }
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.coeffs.is_empty() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        // monic normalization
        if let Some(lead) = a.coeffs.last().cloned() {
            let coeffs = a.coeffs.iter().map(|c| c / &lead).collect();
            a = QPoly::from_coeffs(coeffs);
        }
        a
    }

    /// Rational roots, found by the rational-root theorem on the scaled
    /// integer polynomial. Exhaustive for the small degrees that occur here.
    pub fn rational_roots(&self) -> Vec<Rat> {
        if self.coeffs.len() <= 1 {
            return vec![];
        }
        // clear denominators
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = num::integer::lcm(den, c.denom().clone());
        }
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * &den).to_integer()).collect();
        let mut roots = Vec::new();
        let zero: Rat = rat(0);
        if Zero::is_zero(&self.eval(&zero)) {
            roots.push(zero);
        }
        let a0 = ints.iter().find(|c| !Zero::is_zero(*c)).unwrap().clone();
        let an = ints.last().unwrap().clone();
        for p in divisors(&a0.abs()) {
            for q in divisors(&an.abs()) {
                for sign in [1i64, -1] {
                    let cand: Rat = Ratio::new(p.clone() * BigInt::from(sign), q.clone());
                    if Zero::is_zero(&self.eval(&cand)) && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if Zero::is_zero(n) {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if Zero::is_zero(&(n % &d)) {
            out.push(d.clone());
            let q = n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if Zero::is_zero(c) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*t", c)?,
                _ => write!(f, "{}*t^{}", c, i)?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Scalar for QPoly {
    fn zero(&self) -> Self {
        QPoly { coeffs: vec![] }
    }
    fn one(&self) -> Self {
        QPoly::int(1)
    }
    fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![rat(0); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c;
        }
        QPoly::from_coeffs(out)
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return QPoly { coeffs: vec![] };
        }
        let mut out = vec![rat(0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        QPoly::from_coeffs(out)
    }
    fn neg(&self) -> Self {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn exact_div(&self, other: &Self) -> Self {
        let (q, r) = self.div_rem(other);
        assert!(r.coeffs.is_empty(), "inexact polynomial division");
        q
    }
}

/// Rational functions in one variable, used to extract polynomial kernel
/// bases of matrices over Q[t] (cleared of denominators afterwards).
#[derive(Debug, Clone)]
pub struct QRatFn {
    pub num: QPoly,
    pub den: QPoly,
}

impl QRatFn {
    pub fn from_poly(p: QPoly) -> Self {
        QRatFn { num: p, den: QPoly::int(1) }
    }

    fn reduce(mut self) -> Self {
        if Scalar::is_zero(&self.num) {
            return QRatFn { num: QPoly::int(0), den: QPoly::int(1) };
        }
        let g = self.num.gcd(&self.den);
        if g.degree().map(|d| d > 0).unwrap_or(false) {
            self.num = self.num.exact_div(&g);
            self.den = self.den.exact_div(&g);
        }
        // monic denominator
        let lead = self.den.coeffs().last().cloned().unwrap();
        self.num = QPoly::from_coeffs(self.num.coeffs().iter().map(|c| c / &lead).collect());
        self.den = QPoly::from_coeffs(self.den.coeffs().iter().map(|c| c / &lead).collect());
        self
    }
}

impl PartialEq for QRatFn {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for QRatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl Scalar for QRatFn {
    fn zero(&self) -> Self {
        QRatFn::from_poly(QPoly::int(0))
    }
    fn one(&self) -> Self {
        QRatFn::from_poly(QPoly::int(1))
    }
    fn add(&self, other: &Self) -> Self {
        QRatFn {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
        .reduce()
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        QRatFn {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
        .reduce()
    }
    fn neg(&self) -> Self {
        QRatFn { num: self.num.neg(), den: self.den.clone() }
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(&self.num)
    }
    fn exact_div(&self, other: &Self) -> Self {
        assert!(!Scalar::is_zero(&other.num), "division by zero rational function");
        QRatFn {
            num: self.num.mul(&other.den),
            den: self.den.mul(&other.num),
        }
        .reduce()
    }
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// An element of F_p. The modulus travels with the value so mismatches can
/// be detected at operation boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        let m = v.rem_euclid(p as i64) as u64;
        Fp { v: m, p }
    }

    pub fn inv(&self) -> Self {
        assert!(self.v != 0, "inverse of zero in F_p");
        // extended Euclid
        let (mut r0, mut r1) = (self.p as i64, self.v as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            let r = r0 - q * r1;
            r0 = r1;
            r1 = r;
            let s = s0 - q * s1;
            s0 = s1;
            s1 = s;
        }
        assert_eq!(r0, 1, "modulus must be prime");
        Fp::new(s0, self.p)
    }

    /// Smallest primitive root mod p (p prime).
    pub fn primitive_root(p: u64) -> u64 {
        if p == 2 {
            return 1;
        }
        let mut factors = Vec::new();
        let mut m = p - 1;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                factors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        'outer: for g in 2..p {
            for f in &factors {
                if pow_mod(g, (p - 1) / f, p) == 1 {
                    continue 'outer;
                }
            }
            return g;
        }
        unreachable!("no primitive root found; modulus not prime?")
    }
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Scalar for Fp {
    fn zero(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one(&self) -> Self {
        Fp { v: 1 % self.p, p: self.p }
    }
    fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "mixed moduli");
        Fp { v: (self.v + other.v) % self.p, p: self.p }
    }
    fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "mixed moduli");
        Fp { v: (self.v + self.p - other.v) % self.p, p: self.p }
    }
    fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "mixed moduli");
        Fp { v: self.v * other.v % self.p, p: self.p }
    }
    fn neg(&self) -> Self {
        Fp { v: (self.p - self.v) % self.p, p: self.p }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn exact_div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }
    fn compatible(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix<S> {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<S>,
}

impl<S: Scalar> ExactMatrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged matrix");
            entries.extend(row);
        }
        ExactMatrix { rows: r, cols: c, entries }
    }

    pub fn at(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut rows = Vec::with_capacity(self.cols);
        for j in 0..self.cols {
            let mut row = Vec::with_capacity(self.rows);
            for i in 0..self.rows {
                row.push(self.at(i, j).clone());
            }
            rows.push(row);
        }
        ExactMatrix::from_rows(rows)
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> ExactMatrix<T> {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

/// Exact rank by fraction-free Bareiss elimination with full pivoting.
/// Over polynomial entries this is the generic rank (rank over the
/// fraction field).
pub fn rank<S: Scalar>(m: &ExactMatrix<S>) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let mut a: Vec<Vec<S>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let nrows = m.rows;
    let ncols = m.cols;
    let mut prev: Option<S> = None;
    let mut r = 0;
    for step in 0.. {
        if r >= nrows || step >= ncols {
            break;
        }
        // find a pivot anywhere in the remaining block
        let mut pivot = None;
        'search: for i in r..nrows {
            for j in step..ncols {
                if !a[i][j].is_zero() {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(r, pi);
        for row in a.iter_mut() {
            row.swap(step, pj);
        }
        let piv = a[r][step].clone();
        for i in (r + 1)..nrows {
            for j in (step + 1)..ncols {
                let mut num = piv.mul(&a[i][j]).sub(&a[i][step].mul(&a[r][j]));
                if let Some(prev) = &prev {
                    num = num.exact_div(prev);
                }
                a[i][j] = num;
            }
            a[i][step] = piv.zero();
        }
        prev = Some(piv);
        r += 1;
    }
    r
}

pub fn nullity<S: Scalar>(m: &ExactMatrix<S>) -> usize {
    m.cols - rank(m)
}

/// Basis of the right nullspace, by reduced Gaussian elimination.
/// Requires a field (exact_div by arbitrary nonzero entries).
pub fn nullspace_basis<S: Scalar>(m: &ExactMatrix<S>, exemplar: &S) -> Vec<Vec<S>> {
    let zero = exemplar.zero();
    let one = exemplar.one();
    let nrows = m.rows;
    let ncols = m.cols;
    let mut a: Vec<Vec<S>> = (0..nrows).map(|i| m.row(i).to_vec()).collect();
    let mut pivot_col_of_row = Vec::new();
    let mut r = 0;
    for j in 0..ncols {
        let Some(pi) = (r..nrows).find(|&i| !a[i][j].is_zero()) else {
            continue;
        };
        a.swap(r, pi);
        let inv_lead = one.exact_div(&a[r][j]);
        for x in a[r].iter_mut() {
            *x = x.mul(&inv_lead);
        }
        for i in 0..nrows {
            if i != r && !a[i][j].is_zero() {
                let f = a[i][j].clone();
                for k in 0..ncols {
                    let sub = a[r][k].mul(&f);
                    a[i][k] = a[i][k].sub(&sub);
                }
            }
        }
        pivot_col_of_row.push(j);
        r += 1;
        if r == nrows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivot_col_of_row;
    let free_cols: Vec<usize> = (0..ncols).filter(|j| !pivot_cols.contains(j)).collect();
    let mut basis = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![zero.clone(); ncols];
        v[fc] = one.clone();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = a[row][fc].neg();
        }
        basis.push(v);
    }
    basis
}

/// Second, independent rank path for polynomial matrices: evaluate at
/// (max entry degree) * min(rows, cols) + 1 integer points and take the
/// maximum rational rank.
pub fn rank_poly_by_evaluation(m: &ExactMatrix<QPoly>) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let mut maxdeg = 0usize;
    for i in 0..m.rows {
        for j in 0..m.cols {
            if let Some(d) = m.at(i, j).degree() {
                maxdeg = maxdeg.max(d);
            }
        }
    }
    let points = maxdeg * m.rows.min(m.cols) + 1;
    let mut best = 0;
    for k in 0..points {
        let x = rat(k as i64);
        let eval = m.map(|p| p.eval(&x));
        best = best.max(rank(&eval));
    }
    best
}

// ---------------------------------------------------------------------------
// Degree fit for point counts
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeFit {
    pub degree: u32,
    /// All sample pairs agree on the rounded slope.
    pub consistent: bool,
}

/// Rounded slope of log(count) / log(q) from the two largest q, with a
/// consistency flag across all pairs. Implemented with exact big-integer
/// comparisons: d minimizes the log-distance of count2/count1 from
/// (q2/q1)^d.
pub fn degree_fit(samples: &[(u64, BigUint)]) -> Result<DegreeFit, ExactError> {
    if samples.len() < 3 {
        return Err(ExactError::TooFewSamples(samples.len()));
    }
    if samples.iter().any(|(_, c)| Zero::is_zero(c)) {
        return Err(ExactError::NonPositiveCount);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by_key(|(q, _)| *q);
    let n = sorted.len();
    let main = pair_slope(&sorted[n - 2], &sorted[n - 1]);
    let mut consistent = true;
    for i in 0..n {
        for j in (i + 1)..n {
            if pair_slope(&sorted[i], &sorted[j]) != main {
                consistent = false;
            }
        }
    }
    Ok(DegreeFit { degree: main, consistent })
}

/// The integer d minimizing |log(c2/c1) - d log(q2/q1)|, found by exact
/// comparison of c2*q1^d against c1*q2^d.
fn pair_slope(lo: &(u64, BigUint), hi: &(u64, BigUint)) -> u32 {
    let (q1, c1) = lo;
    let (q2, c2) = hi;
    assert!(q2 > q1, "samples must have distinct q");
    let q1 = BigUint::from(*q1);
    let q2 = BigUint::from(*q2);
    // ratio(d) = c2*q1^d / (c1*q2^d); log-distance from 1 is
    // |log c2 + d log q1 - log c1 - d log q2|. Compare successive d.
    let dist = |d: u32| -> (BigUint, BigUint) {
        // represents ratio as (num, den); distance is |log(num/den)|
        let num = c2 * q1.pow(d);
        let den = c1 * q2.pow(d);
        if num >= den {
            (num, den)
        } else {
            (den, num)
        }
    };
    let closer = |a: &(BigUint, BigUint), b: &(BigUint, BigUint)| -> bool {
        // is a strictly closer to ratio 1 than b? a.0/a.1 < b.0/b.1
        &a.0 * &b.1 < &b.0 * &a.1
    };
    let mut d = 0u32;
    let mut cur = dist(0);
    loop {
        let next = dist(d + 1);
        if closer(&next, &cur) || next == cur {
            d += 1;
            cur = next;
        } else {
            break;
        }
    }
    d
}

/// Invariant factors of a polynomial matrix (Smith normal form diagonal),
/// used to locate the parameter values where a family's rank drops.
pub fn invariant_factors(m: &ExactMatrix<QPoly>) -> Vec<QPoly> {
    let mut a: Vec<Vec<QPoly>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let nrows = m.rows;
    let ncols = m.cols;
    let mut out = Vec::new();
    let mut top = 0usize;
    while top < nrows && top < ncols {
        // find the nonzero entry of least degree in the remaining block
        let mut best: Option<(usize, usize, usize)> = None;
        for i in top..nrows {
            for j in top..ncols {
                if let Some(d) = a[i][j].degree() {
                    if best.map(|(_, _, bd)| d < bd).unwrap_or(true) {
                        best = Some((i, j, d));
                    }
                }
            }
        }
        let Some((bi, bj, _)) = best else { break };
        a.swap(top, bi);
        for row in a.iter_mut() {
            row.swap(top, bj);
        }
        // reduce row and column by the pivot until everything divides
        loop {
            let mut clean = true;
            for i in (top + 1)..nrows {
                if !a[i][top].is_zero() {
                    let (q, r) = a[i][top].div_rem(&a[top][top]);
                    for j in top..ncols {
                        let sub = q.mul(&a[top][j]);
                        a[i][j] = a[i][j].sub(&sub);
                    }
                    if !r.is_zero() {
                        a.swap(top, i);
                        clean = false;
                    }
                }
            }
            for j in (top + 1)..ncols {
                if !a[top][j].is_zero() {
                    let (q, r) = a[top][j].div_rem(&a[top][top]);
                    for i in top..nrows {
                        let sub = q.mul(&a[i][top]);
                        a[i][j] = a[i][j].sub(&sub);
                    }
                    if !r.is_zero() {
                        for row in a.iter_mut() {
                            row.swap(top, j);
                        }
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        out.push(a[top][top].clone());
        top += 1;
    }
    // normalize monic
    out.iter()
        .map(|p| {
            let lead = p.coeffs().last().cloned().unwrap_or_else(|| rat(1));
            QPoly::from_coeffs(p.coeffs().iter().map(|c| c / &lead).collect())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(rows: Vec<Vec<i64>>) -> ExactMatrix<Rat> {
        ExactMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_identity() {
        let m = qm(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(rank(&m), 3);
    }

    #[test]
    fn rank_poly_dependent_rows() {
        // [[t, 1], [t^2, t]] has rank 1: second row is t * first
        let t = QPoly::var();
        let m = ExactMatrix::from_rows(vec![
            vec![t.clone(), QPoly::int(1)],
            vec![t.mul(&t), t.clone()],
        ]);
        assert_eq!(rank(&m), 1);
        assert_eq!(rank_poly_by_evaluation(&m), 1);
    }

    #[test]
    fn nullspace_of_singular() {
        let m = qm(vec![vec![1, 2, 3], vec![2, 4, 6]]);
        assert_eq!(rank(&m), 1);
        let ns = nullspace_basis(&m, &rat(0));
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for i in 0..m.rows {
                let mut acc = rat(0);
                for j in 0..m.cols {
                    acc = acc + m.at(i, j) * &v[j];
                }
                assert!(Zero::is_zero(&acc));
            }
        }
    }

    #[test]
    fn degree_fit_examples() {
        // Counts |C(u)(F_q)| for A2 are derived independently in the
        // fforacle tests (closed form q^5 + q^4 - q^3); frozen here.
        let samples = vec![
            (2u64, BigUint::from(40u32)),
            (3, BigUint::from(297u32)),
            (5, BigUint::from(3625u32)),
        ];
        let fit = degree_fit(&samples).unwrap();
        assert_eq!(fit.degree, 5);
        assert!(fit.consistent);

        let constant = vec![
            (2u64, BigUint::from(1u32)),
            (3, BigUint::from(1u32)),
            (5, BigUint::from(1u32)),
        ];
        let fit = degree_fit(&constant).unwrap();
        assert_eq!(fit.degree, 0);
        assert!(fit.consistent);

        let cubes: Vec<(u64, BigUint)> = [2u64, 3, 5, 7]
            .iter()
            .map(|&q| (q, BigUint::from(q * q * q)))
            .collect();
        let fit = degree_fit(&cubes).unwrap();
        assert_eq!(fit.degree, 3);
        assert!(fit.consistent);
    }

    #[test]
    fn degree_fit_too_few() {
        let samples = vec![(2u64, BigUint::from(4u32)), (3, BigUint::from(9u32))];
        assert!(matches!(degree_fit(&samples), Err(ExactError::TooFewSamples(2))));
    }

    #[test]
    fn degree_fit_inconsistent_flagged() {
        let samples = vec![
            (2u64, BigUint::from(4u32)),
            (3, BigUint::from(9u32)),
            (5, BigUint::from(3125u32)),
        ];
        let fit = degree_fit(&samples).unwrap();
        assert!(!fit.consistent);
    }

    #[test]
    fn fp_arithmetic() {
        let a = Fp::new(3, 7);
        let b = Fp::new(5, 7);
        assert_eq!(a.mul(&b).v, 1);
        assert_eq!(a.exact_div(&b).v, 3 * 3 % 7); // 1/5 = 3 mod 7
        assert_eq!(Fp::primitive_root(7), 3);
        assert_eq!(Fp::primitive_root(5), 2);
        assert_eq!(Fp::primitive_root(3), 2);
    }

    #[test]
    fn qpoly_roots() {
        // (t-1)(t+2) = t^2 + t - 2
        let p = QPoly::from_coeffs(vec![rat(-2), rat(1), rat(1)]);
        let mut roots = p.rational_roots();
        roots.sort();
        assert_eq!(roots, vec![rat(-2), rat(1)]);
    }

    #[test]
    fn invariant_factors_detect_drop() {
        // diag(1, t): rank 2 generically, drops to 1 at t = 0
        let m = ExactMatrix::from_rows(vec![
            vec![QPoly::int(1), QPoly::int(0)],
            vec![QPoly::int(0), QPoly::var()],
        ]);
        let inv = invariant_factors(&m);
        assert_eq!(inv.len(), 2);
        let roots = inv[1].rational_roots();
        assert_eq!(roots, vec![rat(0)]);
    }
}
