//! Dense univariate polynomials over a prime field `F_p`.
//!
//! Coefficients are stored little-endian as least non-negative residues, and
//! every value is kept canonical (no trailing zeros, the zero polynomial is the
//! empty vector). Factorization is by exhaustive trial division: the inputs
//! this crate cares about are tiny (`p <= 11`, degree <= 6) and trial division
//! is obviously correct.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("operands live over different primes ({0} and {1})")]
    MismatchedPrimes(u32, u32),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,
    #[error("expected a non-constant polynomial")]
    Constant,
}

/// A prime modulus `p`.
///
/// `p = 2` is accepted, but results about the quotient semigroups are only
/// asserted for odd primes; see [`Prime::is_odd`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Self, PolyError> {
        if p > u64::from(u16::MAX) || !is_prime(p) {
            return Err(PolyError::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn is_odd(self) -> bool {
        self.0 > 2
    }

    fn reduce(self, c: i64) -> u32 {
        c.rem_euclid(i64::from(self.0)) as u32
    }

    fn mul(self, a: u32, b: u32) -> u32 {
        ((u64::from(a) * u64::from(b)) % u64::from(self.0)) as u32
    }

    fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }

    fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.0 - b) % self.0
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.0));
        self.pow(a, self.0 - 2)
    }

    pub fn pow(self, base: u32, mut exp: u32) -> u32 {
        let mut acc = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Deterministic trial-division primality check.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Least generator of the multiplicative group of `F_p`.
///
/// For `p = 2` the group is trivial and `1` is returned.
pub fn primitive_root(p: Prime) -> u32 {
    let p = p.get();
    if p == 2 {
        return 1;
    }
    let order = p - 1;
    let prime_divisors: Vec<u32> = (2..=order).filter(|&q| order.is_multiple_of(q) && is_prime(u64::from(q))).collect();
    let field = Prime(p);
    (2..p)
        .find(|&g| prime_divisors.iter().all(|&q| field.pow(g, order / q) != 1))
        .expect("every prime field has a primitive root")
}

/// A polynomial over `F_p` in canonical little-endian form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    p: Prime,
    coeffs: Vec<u32>,
}

impl Poly {
    /// Builds a polynomial from arbitrary integer coefficients, reducing mod `p`.
    pub fn new(p: Prime, coeffs: &[i64]) -> Self {
        let coeffs = coeffs.iter().map(|&c| p.reduce(c)).collect();
        Self::from_residues(p, coeffs)
    }

    fn from_residues(p: Prime, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { p, coeffs }
    }

    pub fn zero(p: Prime) -> Self {
        Poly { p, coeffs: Vec::new() }
    }

    pub fn one(p: Prime) -> Self {
        Self::constant(p, 1)
    }

    pub fn constant(p: Prime, c: i64) -> Self {
        Self::new(p, &[c])
    }

    /// The monomial `x`.
    pub fn x(p: Prime) -> Self {
        Self::from_residues(p, vec![0, 1])
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    fn check_prime(&self, other: &Poly) -> Result<(), PolyError> {
        if self.p != other.p {
            return Err(PolyError::MismatchedPrimes(self.p.get(), other.p.get()));
        }
        Ok(())
    }

    pub fn scale(&self, c: u32) -> Poly {
        let p = self.p;
        Self::from_residues(p, self.coeffs.iter().map(|&a| p.mul(a, c)).collect())
    }

    /// Scales to leading coefficient one; zero stays zero.
    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.p.inv(self.leading()))
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_prime(other)?;
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::from_residues(p, (0..n).map(|i| p.add(self.coeff(i), other.coeff(i))).collect()))
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_prime(other)?;
        let p = self.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(Self::from_residues(p, (0..n).map(|i| p.sub(self.coeff(i), other.coeff(i))).collect()))
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.check_prime(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(self.p));
        }
        let p = u64::from(self.p.get());
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + u64::from(a) * u64::from(b)) % p;
            }
        }
        Ok(Self::from_residues(self.p, acc.into_iter().map(|c| c as u32).collect()))
    }

    /// Euclidean division: `self = divisor * q + r` with `deg r < deg divisor`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.check_prime(divisor)?;
        let db = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let p = self.p;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(p), self.clone()));
        }
        let lead_inv = p.inv(divisor.leading());
        let mut quot = vec![0u32; rem.len() - db];
        for shift in (0..quot.len()).rev() {
            let c = p.mul(rem[shift + db], lead_inv);
            if c == 0 {
                continue;
            }
            quot[shift] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                rem[shift + j] = p.sub(rem[shift + j], p.mul(c, b));
            }
        }
        rem.truncate(db);
        Ok((Self::from_residues(p, quot), Self::from_residues(p, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Result<Poly, PolyError> {
        self.divrem(divisor).map(|(_, r)| r)
    }

    pub fn pow(&self, mut exp: u32) -> Poly {
        let mut acc = Poly::one(self.p);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Formal derivative, computed termwise.
    pub fn derivative(&self) -> Poly {
        let p = self.p;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| p.mul(c, (i as u64 % u64::from(p.get())) as u32))
            .collect();
        Self::from_residues(p, coeffs)
    }

    pub fn eval(&self, at: u32) -> u32 {
        let p = self.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| p.add(p.mul(acc, at), c))
    }

    /// Index of this polynomial among all residues of degree `< len`, read as
    /// a little-endian base-`p` numeral.
    pub fn to_index(&self) -> usize {
        let p = self.p.get() as usize;
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c as usize)
    }

    /// Inverse of [`Poly::to_index`].
    pub fn from_index(p: Prime, mut index: usize) -> Poly {
        let base = p.get() as usize;
        let mut coeffs = Vec::new();
        while index > 0 {
            coeffs.push((index % base) as u32);
            index /= base;
        }
        Self::from_residues(p, coeffs)
    }

    /// All monic polynomials of the given degree, ascending in
    /// little-endian lexicographic order of the lower coefficients.
    pub fn monic_of_degree(p: Prime, degree: usize) -> impl Iterator<Item = Poly> {
        let count = (p.get() as usize).pow(degree as u32);
        (0..count).map(move |i| {
            let mut c = Poly::from_index(p, i).coeffs;
            c.resize(degree, 0);
            c.push(1);
            Poly { p, coeffs: c }
        })
    }

    /// Canonical ordering of residues: by degree, then little-endian
    /// lexicographic on coefficients.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

pub fn poly_divrem(a: &Poly, b: &Poly) -> Result<(Poly, Poly), PolyError> {
    a.divrem(b)
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Result<Poly, PolyError> {
    a.try_mul(b)
}

/// Monic greatest common divisor.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Result<Poly, PolyError> {
    a.check_prime(b)?;
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::ZeroGcd);
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let r = x.rem(&y)?;
        x = y;
        y = r;
    }
    Ok(x.monic())
}

/// True iff `f` has no monic divisor of degree in `[1, deg f - 1]`.
pub fn is_irreducible(f: &Poly) -> Result<bool, PolyError> {
    let deg = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(PolyError::Constant),
    };
    for d in 1..=deg / 2 {
        for g in Poly::monic_of_degree(f.prime(), d) {
            if f.rem(&g)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `unit * prod(factor^multiplicity)` with monic, pairwise distinct factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    pub factors: Vec<(Poly, u32)>,
}

impl Factorization {
    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, m)| m == 1)
    }

    pub fn expand(&self, p: Prime) -> Poly {
        self.factors.iter().fold(Poly::constant(p, i64::from(self.unit)), |acc, (f, m)| &acc * &f.pow(*m))
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.unit != 1 || self.factors.is_empty() {
            parts.push(self.unit.to_string());
        }
        for (g, m) in &self.factors {
            let base = if g.coeffs.iter().filter(|&&c| c != 0).count() > 1 { format!("({g})") } else { g.to_string() };
            parts.push(if *m == 1 { base } else { format!("{base}^{m}") });
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Factors `f` into its unit and monic irreducible factors, ordered by degree
/// and then lexicographically on coefficients.
pub fn factor(f: &Poly) -> Result<Factorization, PolyError> {
    if f.is_constant() {
        return Err(PolyError::Constant);
    }
    let p = f.prime();
    let unit = f.leading();
    let mut rest = f.monic();
    let mut factors: Vec<(Poly, u32)> = Vec::new();
    let mut d = 1;
    while 2 * d <= rest.degree().unwrap_or(0) {
        for g in Poly::monic_of_degree(p, d) {
            let mut mult = 0;
            loop {
                let (q, r) = rest.divrem(&g)?;
                if !r.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((g, mult));
            }
        }
        d += 1;
    }
    if !rest.is_constant() {
        match factors.iter_mut().find(|(g, _)| *g == rest) {
            Some((_, m)) => *m += 1,
            None => factors.push((rest, 1)),
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    Ok(Factorization { unit, factors })
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[p={}]({})", self.p, self)
    }
}

/// Descending-degree expression form, e.g. `x^2 + 2*x + 1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}*x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}

// Operator sugar for same-prime arithmetic; panics on mismatched primes.

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("polynomials over the same prime")
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("polynomials over the same prime")
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("polynomials over the same prime")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        &Poly::zero(self.p) - self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn poly(n: u64, c: &[i64]) -> Poly {
        Poly::new(p(n), c)
    }

    #[test]
    fn canonical_form() {
        assert_eq!(poly(3, &[3, 6, 0]).coeffs(), &[] as &[u32]);
        assert_eq!(poly(3, &[-1, 4]).coeffs(), &[2, 1]);
        assert_eq!(poly(5, &[]).degree(), None);
    }

    #[test]
    fn rejects_non_primes() {
        assert_eq!(Prime::new(9), Err(PolyError::NotPrime(9)));
        assert_eq!(Prime::new(1), Err(PolyError::NotPrime(1)));
        assert!(Prime::new(2).is_ok());
        assert!(!Prime::new(2).unwrap().is_odd());
    }

    #[test]
    fn divrem_examples() {
        // (x^2+1) / (x+1) over F_3
        let (q, r) = poly_divrem(&poly(3, &[1, 0, 1]), &poly(3, &[1, 1])).unwrap();
        assert_eq!(q, poly(3, &[2, 1]));
        assert_eq!(r, poly(3, &[2]));
        assert_eq!(&(&q * &poly(3, &[1, 1])) + &r, poly(3, &[1, 0, 1]));

        let a = poly(7, &[3, 0, 5, 1]);
        assert_eq!(a.divrem(&a).unwrap(), (poly(7, &[1]), Poly::zero(p(7))));

        let (q, r) = poly(5, &[0, 0, 0, 1]).divrem(&poly(5, &[0, 0, 1])).unwrap();
        assert_eq!((q, r), (Poly::x(p(5)), Poly::zero(p(5))));
    }

    #[test]
    fn divrem_errors() {
        assert_eq!(poly(3, &[1, 1]).divrem(&Poly::zero(p(3))), Err(PolyError::DivisionByZero));
        assert_eq!(poly(3, &[1, 1]).divrem(&poly(5, &[1, 1])), Err(PolyError::MismatchedPrimes(3, 5)));
        assert_eq!(poly_mul(&poly(3, &[1]), &poly(5, &[1])), Err(PolyError::MismatchedPrimes(3, 5)));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(poly_mul(&poly(3, &[1, 1]), &poly(3, &[1, 1])).unwrap(), poly(3, &[1, 2, 1]));
        assert_eq!(poly_mul(&poly(3, &[2, 1]), &poly(3, &[1, 1])).unwrap(), poly(3, &[2, 0, 1]));
        let a = poly(5, &[4, 2, 3]);
        assert_eq!(&a * &Poly::one(p(5)), a);
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&poly(5, &[4, 0, 1]), &poly(5, &[1, 1])).unwrap(), poly(5, &[1, 1]));
        assert_eq!(poly_gcd(&poly(5, &[2, 4]), &Poly::zero(p(5))).unwrap(), poly(5, &[3, 1]));
        assert_eq!(poly_gcd(&poly(3, &[1, 1]), &poly(3, &[2, 1])).unwrap(), Poly::one(p(3)));
        assert_eq!(poly_gcd(&Poly::zero(p(3)), &Poly::zero(p(3))), Err(PolyError::ZeroGcd));
    }

    #[test]
    fn irreducibility_examples() {
        assert!(is_irreducible(&poly(3, &[1, 0, 1])).unwrap());
        assert!(!is_irreducible(&poly(5, &[1, 0, 1])).unwrap());
        for n in [2, 3, 5, 7] {
            assert!(is_irreducible(&Poly::x(p(n))).unwrap());
        }
        assert_eq!(is_irreducible(&poly(3, &[2])), Err(PolyError::Constant));
    }

    #[test]
    fn factor_examples() {
        let f = factor(&poly(3, &[0, 2, 0, 1])).unwrap();
        assert_eq!(f.unit, 1);
        assert_eq!(f.factors, vec![(poly(3, &[0, 1]), 1), (poly(3, &[1, 1]), 1), (poly(3, &[2, 1]), 1)]);
        assert!(f.is_squarefree());

        let f = factor(&poly(3, &[1, 2, 1])).unwrap();
        assert_eq!(f.factors, vec![(poly(3, &[1, 1]), 2)]);
        assert!(!f.is_squarefree());

        let f = factor(&poly(3, &[2, 2])).unwrap();
        assert_eq!((f.unit, f.factors), (2, vec![(poly(3, &[1, 1]), 1)]));

        assert_eq!(factor(&Poly::zero(p(3))), Err(PolyError::Constant));
    }

    #[test]
    fn factor_orders_by_degree_then_coefficients() {
        // (x^2+1)(x+2)^2 x over F_3
        let f = &(&poly(3, &[1, 0, 1]) * &poly(3, &[2, 1]).pow(2)) * &Poly::x(p(3));
        let fac = factor(&f).unwrap();
        assert_eq!(fac.factors, vec![(poly(3, &[0, 1]), 1), (poly(3, &[2, 1]), 2), (poly(3, &[1, 0, 1]), 1)]);
        assert_eq!(fac.to_string(), "x*(x + 2)^2*(x^2 + 1)");
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(p(2)), 1);
        assert_eq!(primitive_root(p(3)), 2);
        assert_eq!(primitive_root(p(5)), 2);
        assert_eq!(primitive_root(p(7)), 3);
        for n in [3u64, 5, 7, 11, 13, 17, 19, 23] {
            let q = p(n);
            let g = primitive_root(q);
            assert!((1..n as u32 - 1).all(|k| q.pow(g, k) != 1), "p={n}");
        }
    }

    #[test]
    fn display() {
        assert_eq!(poly(3, &[1, 2, 1]).to_string(), "x^2 + 2*x + 1");
        assert_eq!(poly(5, &[0, 3]).to_string(), "3*x");
        assert_eq!(Poly::zero(p(5)).to_string(), "0");
    }

    #[test]
    fn index_roundtrip() {
        let q = p(5);
        for i in 0..125 {
            assert_eq!(Poly::from_index(q, i).to_index(), i);
        }
    }

    /// Every polynomial of degree 1..=4 over F_p for p in {2,3,5} (and a
    /// random sample for 7).
    fn corpus() -> Vec<Poly> {
        let mut out = Vec::new();
        for n in [2u64, 3, 5] {
            let q = p(n);
            let bound = (n as usize).pow(5);
            out.extend((n as usize..bound).map(|i| Poly::from_index(q, i)));
        }
        out
    }

    #[test]
    fn factor_reconstructs_and_agrees_with_irreducibility() {
        for f in corpus() {
            let fac = factor(&f).unwrap();
            assert_eq!(fac.expand(f.prime()), f, "{f:?}");
            for (g, m) in &fac.factors {
                assert!(g.is_monic() && *m >= 1);
                assert!(is_irreducible(g).unwrap());
            }
            let single = fac.factors.len() == 1 && fac.factors[0].1 == 1;
            assert_eq!(is_irreducible(&f).unwrap(), single, "{f:?}");
        }
    }

    #[test]
    fn squarefree_matches_derivative_gcd() {
        for f in corpus() {
            let fac = factor(&f).unwrap();
            let deg = f.degree().unwrap() as u32;
            if deg >= f.prime().get() {
                // derivative may vanish termwise; trust multiplicities
                continue;
            }
            let g = poly_gcd(&f, &f.derivative()).unwrap();
            assert_eq!(g.is_one(), fac.is_squarefree(), "{f:?}");
        }
    }

    proptest! {
        #[test]
        fn divrem_roundtrip(
            pi in 0usize..4,
            a in proptest::collection::vec(-20i64..20, 0..8),
            b in proptest::collection::vec(-20i64..20, 1..6),
        ) {
            let q = p([2, 3, 5, 7][pi]);
            let a = Poly::new(q, &a);
            let b = Poly::new(q, &b);
            prop_assume!(!b.is_zero());
            let (quot, rem) = a.divrem(&b).unwrap();
            prop_assert_eq!(&(&quot * &b) + &rem, a);
            prop_assert!(rem.degree().is_none_or(|d| d < b.degree().unwrap()));
        }

        #[test]
        fn mul_degree_adds(
            a in proptest::collection::vec(1i64..5, 1..6),
            b in proptest::collection::vec(1i64..5, 1..6),
        ) {
            let q = p(5);
            let (a, b) = (Poly::new(q, &a), Poly::new(q, &b));
            prop_assume!(!a.is_zero() && !b.is_zero());
            prop_assert_eq!((&a * &b).degree(), Some(a.degree().unwrap() + b.degree().unwrap()));
        }
    }
}
