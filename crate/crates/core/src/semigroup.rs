//! Finite commutative semigroups given by explicit index arithmetic.
//!
//! Every semigroup enumerates its universe as `0..size` and evaluates the
//! operation directly on indices. Universes of at most [`TABLE_LIMIT`]
//! elements also carry an eagerly built Cayley table, so reads never need
//! coordination.
//!
//! The operation is written multiplicatively throughout: for the quotient
//! semigroups `S_f^p` it is ring multiplication, the identity is the residue
//! `1` and the zero element is the residue `0`.
//!
//! Index layouts:
//! - quotient: a residue `c_0 + c_1 x + ...` is the little-endian base-`p`
//!   numeral `c_0 + c_1 p + ...`;
//! - cyclic with zero `C_n ∪ {∞}`: `g^k` is `k`, `∞` is `n`;
//! - abelian groups and products: mixed radix with the first coordinate most
//!   significant, so index order is lexicographic order on tuples.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gfpoly::{factor, Poly, PolyError};

/// Universes up to this size get a memoized Cayley table.
pub const TABLE_LIMIT: usize = 256;
/// Largest universe we are willing to enumerate at all.
pub const UNIVERSE_LIMIT: usize = 1 << 20;
/// Unit groups up to this order get their structure by element-order census.
pub const CENSUS_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("cyclic part must have order at least 2, got {0}")]
    CyclicTooSmall(u64),
    #[error("a product needs at least one factor")]
    EmptyProduct,
    #[error("semigroup has no identity element")]
    MissingIdentity,
    #[error("universe of {0} elements exceeds the enumeration limit")]
    TooLarge(u128),
    #[error("{0} is not squarefree")]
    NotSquarefree(String),
    #[error("element is not from a product semigroup")]
    NotProduct,
    #[error("coordinate {index} out of range for a product of {arity} factors")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("factor {0} is not a group with an adjoined zero")]
    NotGroupWithZero(usize),
    #[error("unit group structure mismatch: closed form {closed:?}, census {census:?}")]
    StructureMismatch { closed: Vec<u64>, census: Vec<u64> },
}

/// Handle of an element inside a particular [`FiniteSemigroup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Elem(pub u32);

impl Elem {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CyclicSymbol {
    /// `g^k` with `k` in `[0, n)`.
    Power(u32),
    Infinity,
}

/// Decoded value of an element.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SgElement {
    Residue(Poly),
    Cyclic(CyclicSymbol),
    Tuple(Vec<SgElement>),
}

impl fmt::Display for SgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SgElement::Residue(poly) => write!(f, "{poly}"),
            SgElement::Cyclic(CyclicSymbol::Infinity) => write!(f, "inf"),
            SgElement::Cyclic(CyclicSymbol::Power(1)) => write!(f, "g"),
            SgElement::Cyclic(CyclicSymbol::Power(k)) => write!(f, "g^{k}"),
            SgElement::Tuple(items) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Quotient,
    CyclicWithZero,
    AbelianGroup,
    Product,
    /// The unit group of another semigroup, keeping the parent's elements.
    UnitGroup,
}

#[derive(Debug, Clone)]
enum Law {
    Quotient { modulus: Poly },
    CyclicWithZero { n: u32 },
    AbelianGroup { orders: Vec<u32> },
    Product { factors: Vec<FiniteSemigroup> },
    Units { parent: Box<FiniteSemigroup>, members: Vec<Elem>, local: HashMap<Elem, Elem> },
}

/// A finite commutative semigroup with optional identity and zero.
#[derive(Debug, Clone)]
pub struct FiniteSemigroup {
    law: Law,
    size: usize,
    identity: Option<Elem>,
    zero: Option<Elem>,
    table: Option<Vec<u32>>,
}

/// Structured description consumed by `--dump` and golden tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SemigroupDescription {
    pub kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<SemigroupDescription>,
    pub size: usize,
    pub identity: Option<u32>,
    pub zero: Option<u32>,
}

fn mixed_radix_decode(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for (slot, &r) in digits.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    digits
}

fn mixed_radix_encode(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (&d, &r)| acc * r + d)
}

impl FiniteSemigroup {
    fn finish(law: Law, size: usize, identity: Option<Elem>, zero: Option<Elem>) -> Self {
        let mut s = FiniteSemigroup { law, size, identity, zero, table: None };
        if size <= TABLE_LIMIT {
            let mut table = Vec::with_capacity(size * size);
            for a in 0..size {
                for b in 0..size {
                    table.push(s.op_direct(a, b) as u32);
                }
            }
            s.table = Some(table);
        }
        s
    }

    pub fn kind(&self) -> Kind {
        match self.law {
            Law::Quotient { .. } => Kind::Quotient,
            Law::CyclicWithZero { .. } => Kind::CyclicWithZero,
            Law::AbelianGroup { .. } => Kind::AbelianGroup,
            Law::Product { .. } => Kind::Product,
            Law::Units { .. } => Kind::UnitGroup,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.size as u32).map(Elem)
    }

    pub fn identity(&self) -> Option<Elem> {
        self.identity
    }

    pub fn zero(&self) -> Option<Elem> {
        self.zero
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    /// The modulus of a quotient semigroup (monic).
    pub fn modulus(&self) -> Option<&Poly> {
        match &self.law {
            Law::Quotient { modulus } => Some(modulus),
            _ => None,
        }
    }

    /// `n` for `C_n ∪ {∞}`.
    pub fn cyclic_order(&self) -> Option<u32> {
        match &self.law {
            Law::CyclicWithZero { n } => Some(*n),
            _ => None,
        }
    }

    /// Cyclic orders of an abelian group semigroup.
    pub fn group_orders(&self) -> Option<&[u32]> {
        match &self.law {
            Law::AbelianGroup { orders } => Some(orders),
            _ => None,
        }
    }

    /// The semigroup a unit group was extracted from.
    pub fn unit_parent(&self) -> Option<&FiniteSemigroup> {
        match &self.law {
            Law::Units { parent, .. } => Some(parent),
            _ => None,
        }
    }

    pub fn product_factors(&self) -> Option<&[FiniteSemigroup]> {
        match &self.law {
            Law::Product { factors } => Some(factors),
            _ => None,
        }
    }

    #[inline]
    pub fn op(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => Elem(t[a.index() * self.size + b.index()]),
            None => Elem(self.op_direct(a.index(), b.index()) as u32),
        }
    }

    fn op_direct(&self, a: usize, b: usize) -> usize {
        match &self.law {
            Law::Quotient { modulus } => {
                let p = modulus.prime();
                let prod = &Poly::from_index(p, a) * &Poly::from_index(p, b);
                prod.rem(modulus).expect("nonzero modulus").to_index()
            }
            Law::CyclicWithZero { n } => {
                let n = *n as usize;
                if a == n || b == n {
                    n
                } else {
                    (a + b) % n
                }
            }
            Law::AbelianGroup { orders } => {
                let radices: Vec<usize> = orders.iter().map(|&o| o as usize).collect();
                let (da, db) = (mixed_radix_decode(a, &radices), mixed_radix_decode(b, &radices));
                let sum: Vec<usize> = da.iter().zip(&db).zip(&radices).map(|((x, y), r)| (x + y) % r).collect();
                mixed_radix_encode(&sum, &radices)
            }
            Law::Product { factors } => {
                let radices: Vec<usize> = factors.iter().map(|f| f.size).collect();
                let (da, db) = (mixed_radix_decode(a, &radices), mixed_radix_decode(b, &radices));
                let prod: Vec<usize> = factors
                    .iter()
                    .zip(da.iter().zip(&db))
                    .map(|(f, (&x, &y))| f.op(Elem(x as u32), Elem(y as u32)).index())
                    .collect();
                mixed_radix_encode(&prod, &radices)
            }
            Law::Units { parent, members, local } => {
                let prod = parent.op(members[a], members[b]);
                local[&prod].index()
            }
        }
    }

    /// `a^k` for `k >= 1`; `a^0` is the identity when one exists.
    pub fn power(&self, a: Elem, k: u64) -> Option<Elem> {
        if k == 0 {
            return self.identity;
        }
        let mut acc = a;
        for _ in 1..k {
            acc = self.op(acc, a);
        }
        Some(acc)
    }

    /// Product of a list of elements; `None` for an empty list without identity.
    pub fn fold<I: IntoIterator<Item = Elem>>(&self, items: I) -> Option<Elem> {
        items.into_iter().fold(self.identity, |acc, x| Some(acc.map_or(x, |a| self.op(a, x))))
    }

    pub fn element(&self, e: Elem) -> SgElement {
        let i = e.index();
        match &self.law {
            Law::Quotient { modulus } => SgElement::Residue(Poly::from_index(modulus.prime(), i)),
            Law::CyclicWithZero { n } => {
                if i == *n as usize {
                    SgElement::Cyclic(CyclicSymbol::Infinity)
                } else {
                    SgElement::Cyclic(CyclicSymbol::Power(i as u32))
                }
            }
            Law::AbelianGroup { orders } => {
                let radices: Vec<usize> = orders.iter().map(|&o| o as usize).collect();
                let digits = mixed_radix_decode(i, &radices);
                let mut items: Vec<SgElement> =
                    digits.into_iter().map(|d| SgElement::Cyclic(CyclicSymbol::Power(d as u32))).collect();
                if items.len() == 1 {
                    items.pop().unwrap()
                } else {
                    SgElement::Tuple(items)
                }
            }
            Law::Product { factors } => {
                let radices: Vec<usize> = factors.iter().map(|f| f.size).collect();
                let digits = mixed_radix_decode(i, &radices);
                SgElement::Tuple(factors.iter().zip(digits).map(|(f, d)| f.element(Elem(d as u32))).collect())
            }
            Law::Units { parent, members, .. } => parent.element(members[i]),
        }
    }

    pub fn render(&self, e: Elem) -> String {
        self.element(e).to_string()
    }

    /// Inverse of [`FiniteSemigroup::element`].
    pub fn index_of(&self, value: &SgElement) -> Option<Elem> {
        let index = match (&self.law, value) {
            (Law::Quotient { modulus }, SgElement::Residue(poly)) => {
                if poly.prime() != modulus.prime() {
                    return None;
                }
                poly.rem(modulus).ok()?.to_index()
            }
            (Law::CyclicWithZero { n }, SgElement::Cyclic(sym)) => match sym {
                CyclicSymbol::Infinity => *n as usize,
                CyclicSymbol::Power(k) => (*k % *n) as usize,
            },
            (Law::AbelianGroup { orders }, SgElement::Cyclic(CyclicSymbol::Power(k))) if orders.len() == 1 => {
                (*k % orders[0]) as usize
            }
            (Law::AbelianGroup { orders }, SgElement::Tuple(items)) if items.len() == orders.len() => {
                let mut digits = Vec::with_capacity(items.len());
                for (item, &o) in items.iter().zip(orders) {
                    match item {
                        SgElement::Cyclic(CyclicSymbol::Power(k)) => digits.push((*k % o) as usize),
                        _ => return None,
                    }
                }
                let radices: Vec<usize> = orders.iter().map(|&o| o as usize).collect();
                mixed_radix_encode(&digits, &radices)
            }
            (Law::Product { factors }, SgElement::Tuple(items)) if items.len() == factors.len() => {
                let digits = factors
                    .iter()
                    .zip(items)
                    .map(|(f, item)| f.index_of(item).map(Elem::index))
                    .collect::<Option<Vec<_>>>()?;
                let radices: Vec<usize> = factors.iter().map(|f| f.size).collect();
                mixed_radix_encode(&digits, &radices)
            }
            (Law::Units { parent, local, .. }, v) => return local.get(&parent.index_of(v)?).copied(),
            _ => return None,
        };
        Some(Elem(index as u32))
    }

    pub fn describe(&self) -> SemigroupDescription {
        let (p, f, n, factors) = match &self.law {
            Law::Quotient { modulus } => (Some(modulus.prime().get()), Some(modulus.to_string()), None, Vec::new()),
            Law::CyclicWithZero { n } => (None, None, Some(vec![*n]), Vec::new()),
            Law::AbelianGroup { orders } => (None, None, Some(orders.clone()), Vec::new()),
            Law::Product { factors } => (None, None, None, factors.iter().map(|f| f.describe()).collect()),
            Law::Units { parent, .. } => (None, None, None, vec![parent.describe()]),
        };
        SemigroupDescription {
            kind: self.kind(),
            p,
            f,
            n,
            factors,
            size: self.size,
            identity: self.identity.map(|e| e.0),
            zero: self.zero.map(|e| e.0),
        }
    }

    /// Checks closure-compatible laws: commutativity, associativity,
    /// identity and zero. Associativity is exhaustive up to 64 elements and
    /// sampled (`10^4` seeded random triples) above that.
    pub fn check_laws(&self) -> Result<(), String> {
        let all: Vec<Elem> = self.elements().collect();
        for &a in &all {
            for &b in &all {
                if self.op(a, b).index() >= self.size {
                    return Err(format!("closure fails at ({}, {})", a.0, b.0));
                }
                if self.op(a, b) != self.op(b, a) {
                    return Err(format!("not commutative at ({}, {})", a.0, b.0));
                }
            }
        }
        let assoc = |a: Elem, b: Elem, c: Elem| self.op(self.op(a, b), c) == self.op(a, self.op(b, c));
        if self.size <= 64 {
            for &a in &all {
                for &b in &all {
                    for &c in &all {
                        if !assoc(a, b, c) {
                            return Err(format!("not associative at ({}, {}, {})", a.0, b.0, c.0));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..10_000 {
                let pick = |rng: &mut ChaCha8Rng| Elem(rng.gen_range(0..self.size as u32));
                let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
                if !assoc(a, b, c) {
                    return Err(format!("not associative at ({}, {}, {})", a.0, b.0, c.0));
                }
            }
        }
        if let Some(e) = self.identity {
            if let Some(&a) = all.iter().find(|&&a| self.op(e, a) != a) {
                return Err(format!("identity fails at {}", a.0));
            }
        }
        if let Some(z) = self.zero {
            if let Some(&a) = all.iter().find(|&&a| self.op(z, a) != z) {
                return Err(format!("zero fails at {}", a.0));
            }
        }
        Ok(())
    }
}

/// The multiplicative semigroup of `F_p[x] / <f>`.
pub fn build_quotient_semigroup(f: &Poly) -> Result<FiniteSemigroup, SemigroupError> {
    let degree = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(PolyError::Constant.into()),
    };
    let p = f.prime();
    let size = u128::from(p.get()).pow(degree as u32);
    if size > UNIVERSE_LIMIT as u128 {
        return Err(SemigroupError::TooLarge(size));
    }
    let size = size as usize;
    let law = Law::Quotient { modulus: f.monic() };
    Ok(FiniteSemigroup::finish(law, size, Some(Elem(1)), Some(Elem(0))))
}

/// `C_n ∪ {∞}`: a cyclic group of order `n` with an adjoined zero.
pub fn build_cyclic_with_zero(n: u64) -> Result<FiniteSemigroup, SemigroupError> {
    if n < 2 {
        return Err(SemigroupError::CyclicTooSmall(n));
    }
    if n as u128 + 1 > UNIVERSE_LIMIT as u128 {
        return Err(SemigroupError::TooLarge(n as u128 + 1));
    }
    let n32 = n as u32;
    Ok(FiniteSemigroup::finish(Law::CyclicWithZero { n: n32 }, n as usize + 1, Some(Elem(0)), Some(Elem(n32))))
}

/// `C_{n_1} × ... × C_{n_r}` as a group semigroup. Orders of `1` are dropped.
pub fn build_abelian_group(orders: &[u64]) -> Result<FiniteSemigroup, SemigroupError> {
    let orders: Vec<u64> = orders.iter().copied().filter(|&o| o != 1).collect();
    if orders.contains(&0) {
        return Err(SemigroupError::CyclicTooSmall(0));
    }
    let size: u128 = orders.iter().map(|&o| o as u128).product();
    if size > UNIVERSE_LIMIT as u128 {
        return Err(SemigroupError::TooLarge(size));
    }
    let orders = orders.into_iter().map(|o| o as u32).collect();
    Ok(FiniteSemigroup::finish(Law::AbelianGroup { orders }, size as usize, Some(Elem(0)), None))
}

/// Componentwise product. Every factor must have an identity.
pub fn build_product(factors: Vec<FiniteSemigroup>) -> Result<FiniteSemigroup, SemigroupError> {
    if factors.is_empty() {
        return Err(SemigroupError::EmptyProduct);
    }
    let size: u128 = factors.iter().map(|f| f.size as u128).product();
    if size > UNIVERSE_LIMIT as u128 {
        return Err(SemigroupError::TooLarge(size));
    }
    let radices: Vec<usize> = factors.iter().map(|f| f.size).collect();
    let identities = factors
        .iter()
        .map(|f| f.identity.map(Elem::index))
        .collect::<Option<Vec<_>>>()
        .ok_or(SemigroupError::MissingIdentity)?;
    let identity = Elem(mixed_radix_encode(&identities, &radices) as u32);
    let zero = factors
        .iter()
        .map(|f| f.zero.map(Elem::index))
        .collect::<Option<Vec<_>>>()
        .map(|z| Elem(mixed_radix_encode(&z, &radices) as u32));
    Ok(FiniteSemigroup::finish(Law::Product { factors }, size as usize, Some(identity), zero))
}

/// Structure of the unit group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StructureSource {
    ClosedForm,
    Census,
    Unknown,
}

/// `U(S) = {a : a·a' = identity for some a'}`.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    pub elements: Vec<Elem>,
    /// `inverses[i]` is the inverse of `elements[i]`.
    pub inverses: Vec<Elem>,
    /// Invariant factors `d_1 | d_2 | ...` (all > 1), when known.
    pub invariant_factors: Option<Vec<u64>>,
    pub source: StructureSource,
    group: FiniteSemigroup,
}

impl UnitGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, e: Elem) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    /// The unit group as a semigroup in its own right. Its element `i`
    /// corresponds to the parent element `elements[i]`.
    pub fn as_semigroup(&self) -> &FiniteSemigroup {
        &self.group
    }

    /// Parent element to unit-group element.
    pub fn to_local(&self, e: Elem) -> Option<Elem> {
        self.elements.binary_search(&e).ok().map(|i| Elem(i as u32))
    }

    pub fn to_parent(&self, e: Elem) -> Elem {
        self.elements[e.index()]
    }
}

pub fn units_of(s: &FiniteSemigroup) -> Result<UnitGroup, SemigroupError> {
    let identity = s.identity.ok_or(SemigroupError::MissingIdentity)?;
    let mut elements = Vec::new();
    let mut inverses = Vec::new();
    for a in s.elements() {
        if let Some(b) = s.elements().find(|&b| s.op(a, b) == identity) {
            elements.push(a);
            inverses.push(b);
        }
    }
    let local: HashMap<Elem, Elem> = elements.iter().enumerate().map(|(i, &e)| (e, Elem(i as u32))).collect();
    let size = elements.len();
    let group_identity = local[&identity];
    let group = FiniteSemigroup::finish(
        Law::Units { parent: Box::new(s.clone()), members: elements.clone(), local },
        size,
        Some(group_identity),
        if size == 1 { Some(group_identity) } else { None },
    );

    let census = (size <= CENSUS_LIMIT).then(|| census_invariant_factors(&group));
    let closed = closed_form_unit_structure(s);
    let (invariant_factors, source) = match (closed, census) {
        (Some(closed), Some(census)) => {
            if closed != census {
                return Err(SemigroupError::StructureMismatch { closed, census });
            }
            (Some(closed), StructureSource::ClosedForm)
        }
        (Some(closed), None) => (Some(closed), StructureSource::ClosedForm),
        (None, Some(census)) => (Some(census), StructureSource::Census),
        (None, None) => (None, StructureSource::Unknown),
    };
    Ok(UnitGroup { elements, inverses, invariant_factors, source, group })
}

/// Unit group structure where it is pinned down without search: squarefree
/// moduli, squares of linear polynomials, `C_n ∪ {∞}` and abelian groups.
fn closed_form_unit_structure(s: &FiniteSemigroup) -> Option<Vec<u64>> {
    match &s.law {
        Law::Quotient { modulus } => {
            let p = u64::from(modulus.prime().get());
            let fac = factor(modulus).ok()?;
            if fac.is_squarefree() {
                let orders: Vec<u64> = fac.factors.iter().map(|(g, _)| p.pow(g.degree().unwrap() as u32) - 1).collect();
                Some(invariant_factors_of_cyclic_product(&orders))
            } else if fac.factors.len() == 1 && fac.factors[0].0.degree() == Some(1) && fac.factors[0].1 == 2 {
                Some(invariant_factors_of_cyclic_product(&[p * (p - 1)]))
            } else {
                None
            }
        }
        Law::CyclicWithZero { n } => Some(invariant_factors_of_cyclic_product(&[u64::from(*n)])),
        Law::AbelianGroup { orders } => {
            Some(invariant_factors_of_cyclic_product(&orders.iter().map(|&o| u64::from(o)).collect::<Vec<_>>()))
        }
        _ => None,
    }
}

fn prime_power_parts(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        let mut e = 0;
        while n.is_multiple_of(q) {
            n /= q;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
        q += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn assemble_invariant_factors(mut exponents: BTreeMap<u64, Vec<u32>>) -> Vec<u64> {
    let rank = exponents.values().map(Vec::len).max().unwrap_or(0);
    let mut factors = vec![1u64; rank];
    for (q, es) in exponents.iter_mut() {
        es.sort_unstable();
        // largest exponents go to the last (largest) invariant factors
        for (slot, &e) in factors.iter_mut().rev().zip(es.iter().rev()) {
            *slot *= q.pow(e);
        }
    }
    factors
}

/// Invariant factors of `C_{n_1} × ... × C_{n_r}`.
pub fn invariant_factors_of_cyclic_product(orders: &[u64]) -> Vec<u64> {
    let mut exponents: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for &n in orders {
        for (q, e) in prime_power_parts(n) {
            exponents.entry(q).or_default().push(e);
        }
    }
    assemble_invariant_factors(exponents)
}

/// Multiplicative order of every element of a finite group semigroup.
pub fn element_orders(g: &FiniteSemigroup) -> Vec<u64> {
    let e = g.identity.expect("group has an identity");
    g.elements()
        .map(|a| {
            let mut k = 1;
            let mut acc = a;
            while acc != e {
                acc = g.op(acc, a);
                k += 1;
            }
            k
        })
        .collect()
}

/// Invariant factors from the element-order census: the number of elements
/// killed by `q^j` is `q^(sum_i min(j, e_i))`, which determines each
/// `q`-primary partition.
pub fn census_invariant_factors(g: &FiniteSemigroup) -> Vec<u64> {
    let orders = element_orders(g);
    let n = g.size() as u64;
    let mut exponents: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (q, top) in prime_power_parts(n) {
        // log_q of #{a : a^(q^j) = 1}
        let killed_log = |j: u32| -> u32 {
            let m = q.pow(j);
            let count = orders.iter().filter(|&&o| m % o == 0).count() as u64;
            let mut log = 0;
            let mut c = count;
            while c > 1 {
                c /= q;
                log += 1;
            }
            log
        };
        let logs: Vec<u32> = (0..=top + 1).map(killed_log).collect();
        // r_j = number of cyclic q-parts of exponent >= j
        let r: Vec<u32> = (1..=top + 1).map(|j| logs[j as usize] - logs[j as usize - 1]).collect();
        let mut es = Vec::new();
        for j in 1..=top {
            let next = r.get(j as usize).copied().unwrap_or(0);
            for _ in 0..(r[j as usize - 1] - next) {
                es.push(j);
            }
        }
        exponents.insert(q, es);
    }
    assemble_invariant_factors(exponents)
}

/// Result of the Chinese-remainder splitting of `S_f^p`.
#[derive(Debug, Clone)]
pub struct CrtDecomposition {
    pub moduli: Vec<Poly>,
    /// `S_{f_i}^p` for each irreducible factor, in factor order.
    pub factors: Vec<FiniteSemigroup>,
    pub product: FiniteSemigroup,
    /// `image[a]` is the product element `(a mod f_1, ..., a mod f_k)`.
    image: Vec<Elem>,
}

impl CrtDecomposition {
    pub fn iso(&self, a: Elem) -> Elem {
        self.image[a.index()]
    }

    pub fn image(&self) -> &[Elem] {
        &self.image
    }
}

/// Splits `S_f^p` along the factorization of a squarefree `f`.
pub fn crt_decompose(f: &Poly) -> Result<CrtDecomposition, SemigroupError> {
    let fac = factor(f)?;
    if !fac.is_squarefree() {
        return Err(SemigroupError::NotSquarefree(f.to_string()));
    }
    let s = build_quotient_semigroup(f)?;
    let moduli: Vec<Poly> = fac.factors.into_iter().map(|(g, _)| g).collect();
    let factors = moduli.iter().map(build_quotient_semigroup).collect::<Result<Vec<_>, _>>()?;
    let product = build_product(factors.clone())?;
    let p = f.prime();
    let image = s
        .elements()
        .map(|a| {
            let residue = Poly::from_index(p, a.index());
            let parts = moduli.iter().map(|m| SgElement::Residue(residue.rem(m).expect("nonzero modulus"))).collect();
            product.index_of(&SgElement::Tuple(parts)).expect("residues lie in the factors")
        })
        .collect();
    Ok(CrtDecomposition { moduli, factors, product, image })
}

/// Coordinates of a product element that equal their factor's zero.
pub fn j_set(s: &FiniteSemigroup, a: Elem) -> Result<BTreeSet<usize>, SemigroupError> {
    let factors = s.product_factors().ok_or(SemigroupError::NotProduct)?;
    let coords = coordinates(s, a)?;
    Ok(factors.iter().zip(coords).enumerate().filter(|(_, (f, c))| f.zero == Some(*c)).map(|(i, _)| i).collect())
}

/// Coordinates of a product element.
pub fn coordinates(s: &FiniteSemigroup, a: Elem) -> Result<Vec<Elem>, SemigroupError> {
    let factors = s.product_factors().ok_or(SemigroupError::NotProduct)?;
    let radices: Vec<usize> = factors.iter().map(|f| f.size).collect();
    Ok(mixed_radix_decode(a.index(), &radices).into_iter().map(|d| Elem(d as u32)).collect())
}

pub fn from_coordinates(s: &FiniteSemigroup, coords: &[Elem]) -> Result<Elem, SemigroupError> {
    let factors = s.product_factors().ok_or(SemigroupError::NotProduct)?;
    let radices: Vec<usize> = factors.iter().map(|f| f.size).collect();
    let digits: Vec<usize> = coords.iter().map(|c| c.index()).collect();
    Ok(Elem(mixed_radix_encode(&digits, &radices) as u32))
}

/// The projection that replaces the coordinates listed in `kill` by the
/// factor identity and leaves the rest untouched. It is a semigroup
/// endomorphism of the product.
pub fn psi_projection(s: &FiniteSemigroup, kill: &BTreeSet<usize>, a: Elem) -> Result<Elem, SemigroupError> {
    let factors = s.product_factors().ok_or(SemigroupError::NotProduct)?;
    if let Some(&index) = kill.iter().find(|&&i| i >= factors.len()) {
        return Err(SemigroupError::IndexOutOfRange { index, arity: factors.len() });
    }
    let mut coords = coordinates(s, a)?;
    for &i in kill {
        coords[i] = factors[i].identity.ok_or(SemigroupError::MissingIdentity)?;
    }
    from_coordinates(s, &coords)
}

/// True when every factor is a group with an adjoined zero, i.e. every
/// non-zero element of the factor is a unit.
pub fn check_group_with_zero_factors(s: &FiniteSemigroup) -> Result<(), SemigroupError> {
    let factors = s.product_factors().ok_or(SemigroupError::NotProduct)?;
    for (i, f) in factors.iter().enumerate() {
        let zero = f.zero.ok_or(SemigroupError::NotGroupWithZero(i))?;
        let units = units_of(f)?;
        if units.order() + 1 != f.size() || units.contains(zero) {
            return Err(SemigroupError::NotGroupWithZero(i));
        }
    }
    Ok(())
}
