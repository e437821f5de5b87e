//! Sequences over finite commutative semigroups, reducibility and the
//! Davenport constant.
//!
//! A sequence `T` is reducible when some proper sub-multiset `T' != T` has the
//! same product `σ(T') = σ(T)`. `D(S)` is the least `d` such that every
//! sequence of length at least `d` is reducible. Reducibility is inherited by
//! super-sequences: if `σ(W') = σ(T')` with `W' ⊊ T' ⊆ T` then
//! `σ(T·T'^{-1}·W') = σ(T)`. Hence `D(S) = 1 + ` the largest length of an
//! irreducible sequence, and a search only ever needs to extend irreducible
//! sequences.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::semigroup::{Elem, FiniteSemigroup, SemigroupError};

/// Largest universe the exact search accepts (bitset width).
pub const SEARCH_UNIVERSE_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZeroSumError {
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
    #[error("semigroup has no identity element")]
    MissingIdentity,
    #[error("the empty sequence has no product in a semigroup without identity")]
    EmptySequence,
    #[error("element {0} is not in the semigroup")]
    ForeignElement(u32),
    #[error("term {0} is not a unit")]
    NotUnit(String),
    #[error("universe of {0} elements is too large for exact search (limit {SEARCH_UNIVERSE_LIMIT})")]
    TooLarge(usize),
    #[error("{0:?} is not a divisibility chain of positive integers")]
    NotDivisibilityChain(Vec<u64>),
    #[error("too many multisets of size {0} to sample uniformly")]
    TooManyMultisets(usize),
}

/// A finite multiset of elements, `T = ∏ x^{v_x(T)}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    counts: BTreeMap<Elem, u32>,
}

impl Sequence {
    /// The empty sequence `λ`.
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_elems<I: IntoIterator<Item = Elem>>(items: I) -> Self {
        let mut s = Self::new();
        for e in items {
            s.push(e);
        }
        s
    }

    pub fn push(&mut self, e: Elem) {
        self.push_n(e, 1);
    }

    pub fn push_n(&mut self, e: Elem, n: u32) {
        if n > 0 {
            *self.counts.entry(e).or_insert(0) += n;
        }
    }

    pub fn len(&self) -> usize {
        self.counts.values().map(|&c| c as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn multiplicity(&self, e: Elem) -> u32 {
        self.counts.get(&e).copied().unwrap_or(0)
    }

    /// Distinct elements with their multiplicities, ascending.
    pub fn counts(&self) -> impl Iterator<Item = (Elem, u32)> + '_ {
        self.counts.iter().map(|(&e, &c)| (e, c))
    }

    /// All terms with repetition, ascending.
    pub fn terms(&self) -> impl Iterator<Item = Elem> + '_ {
        self.counts.iter().flat_map(|(&e, &c)| std::iter::repeat_n(e, c as usize))
    }

    pub fn is_subsequence_of(&self, other: &Sequence) -> bool {
        self.counts.iter().all(|(&e, &c)| other.multiplicity(e) >= c)
    }

    /// `self · other^{-1}`, when `other` divides `self`.
    pub fn without(&self, other: &Sequence) -> Option<Sequence> {
        if !other.is_subsequence_of(self) {
            return None;
        }
        let mut out = self.clone();
        for (e, c) in other.counts() {
            let slot = out.counts.get_mut(&e).expect("checked above");
            *slot -= c;
            if *slot == 0 {
                out.counts.remove(&e);
            }
        }
        Some(out)
    }

    pub fn concat(&self, other: &Sequence) -> Sequence {
        let mut out = self.clone();
        for (e, c) in other.counts() {
            out.push_n(e, c);
        }
        out
    }

    /// Image of every term under `f`.
    pub fn map<F: FnMut(Elem) -> Elem>(&self, mut f: F) -> Sequence {
        Sequence::from_elems(self.terms().map(&mut f))
    }

    pub fn check_in(&self, s: &FiniteSemigroup) -> Result<(), ZeroSumError> {
        match self.counts.keys().find(|e| e.index() >= s.size()) {
            Some(e) => Err(ZeroSumError::ForeignElement(e.0)),
            None => Ok(()),
        }
    }

    pub fn render(&self, s: &FiniteSemigroup) -> Vec<String> {
        self.terms().map(|e| s.render(e)).collect()
    }

    pub fn display<'a>(&'a self, s: &'a FiniteSemigroup) -> SequenceDisplay<'a> {
        SequenceDisplay { seq: self, parent: s }
    }
}

pub struct SequenceDisplay<'a> {
    seq: &'a Sequence,
    parent: &'a FiniteSemigroup,
}

impl fmt::Display for SequenceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.seq.is_empty() {
            return write!(f, "λ");
        }
        let parts: Vec<String> = self
            .seq
            .counts()
            .map(|(e, c)| {
                let item = self.parent.render(e);
                if c == 1 {
                    item
                } else if item.contains(' ') && !item.starts_with('(') {
                    format!("({item})*{c}")
                } else {
                    format!("{item}*{c}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// `σ(T)`, with `σ(λ)` the identity.
pub fn sigma(s: &FiniteSemigroup, t: &Sequence) -> Result<Elem, ZeroSumError> {
    t.check_in(s)?;
    s.fold(t.terms()).ok_or(ZeroSumError::EmptySequence)
}

/// Subset-product dynamic programme over the distinct elements of a
/// sequence. A state is `(partial product or "nothing chosen", every copy so
/// far taken)`, which is enough to tell the full selection and the empty
/// selection apart from everything else.
struct SubsumDp<'a> {
    s: &'a FiniteSemigroup,
    distinct: Vec<(Elem, u32)>,
    /// `powers[i][c] = x_i^c` for `c >= 1`.
    powers: Vec<Vec<Elem>>,
    /// slot for "nothing chosen yet"
    none: usize,
}

impl<'a> SubsumDp<'a> {
    fn new(s: &'a FiniteSemigroup, t: &Sequence) -> Self {
        let distinct: Vec<(Elem, u32)> = t.counts().collect();
        let powers = distinct
            .iter()
            .map(|&(x, v)| {
                let mut row = vec![x; v as usize + 1];
                for c in 2..=v as usize {
                    row[c] = s.op(row[c - 1], x);
                }
                row
            })
            .collect();
        SubsumDp { s, distinct, powers, none: s.size() }
    }

    fn state(&self, sum: usize, all_used: bool) -> usize {
        2 * sum + usize::from(all_used)
    }

    fn step(&self, i: usize, sum: usize, all_used: bool, c: u32) -> (usize, bool) {
        let v = self.distinct[i].1;
        let next = if c == 0 {
            sum
        } else if sum == self.none {
            self.powers[i][c as usize].index()
        } else {
            self.s.op(Elem(sum as u32), self.powers[i][c as usize]).index()
        };
        (next, all_used && c == v)
    }

    /// Reachable final states.
    fn forward(&self) -> Vec<bool> {
        let width = 2 * (self.none + 1);
        let mut reach = vec![false; width];
        reach[self.state(self.none, true)] = true;
        for i in 0..self.distinct.len() {
            let mut next = vec![false; width];
            for (st, _) in reach.iter().enumerate().filter(|(_, &r)| r) {
                let (sum, all_used) = (st / 2, st % 2 == 1);
                for c in 0..=self.distinct[i].1 {
                    let (ns, nf) = self.step(i, sum, all_used, c);
                    next[self.state(ns, nf)] = true;
                }
            }
            reach = next;
        }
        reach
    }

    /// Lexicographically least count vector whose final state satisfies
    /// `accept`.
    fn witness<F: Fn(usize, bool) -> bool>(&self, accept: F) -> Option<Sequence> {
        let width = 2 * (self.none + 1);
        let m = self.distinct.len();
        // feasible[i][state]: from position i in this state an accepted
        // final state is reachable.
        let mut feasible = vec![vec![false; width]; m + 1];
        for (st, slot) in feasible[m].iter_mut().enumerate() {
            *slot = accept(st / 2, st % 2 == 1);
        }
        for i in (0..m).rev() {
            for st in 0..width {
                let (sum, all_used) = (st / 2, st % 2 == 1);
                feasible[i][st] = (0..=self.distinct[i].1).any(|c| {
                    let (ns, nf) = self.step(i, sum, all_used, c);
                    feasible[i + 1][self.state(ns, nf)]
                });
            }
        }
        let (mut sum, mut all_used) = (self.none, true);
        if !feasible[0][self.state(sum, all_used)] {
            return None;
        }
        let mut out = Sequence::new();
        for i in 0..m {
            let c = (0..=self.distinct[i].1)
                .find(|&c| {
                    let (ns, nf) = self.step(i, sum, all_used, c);
                    feasible[i + 1][self.state(ns, nf)]
                })
                .expect("feasible state has a feasible successor");
            out.push_n(self.distinct[i].0, c);
            (sum, all_used) = self.step(i, sum, all_used, c);
        }
        Some(out)
    }
}

/// `{σ(T') : T' ⊊ T}`, including `σ(λ)` when the semigroup has an identity.
pub fn proper_subsums(s: &FiniteSemigroup, t: &Sequence) -> Result<BTreeSet<Elem>, ZeroSumError> {
    t.check_in(s)?;
    let dp = SubsumDp::new(s, t);
    let reach = dp.forward();
    let mut out = BTreeSet::new();
    for (st, _) in reach.iter().enumerate().filter(|(_, &r)| r) {
        let (sum, all_used) = (st / 2, st % 2 == 1);
        if all_used {
            continue;
        }
        if sum == dp.none {
            out.extend(s.identity());
        } else {
            out.insert(Elem(sum as u32));
        }
    }
    Ok(out)
}

/// `Σ(T) = {σ(T') : T' nonempty sub-multiset of T}`.
pub fn sumset(s: &FiniteSemigroup, t: &Sequence) -> Result<BTreeSet<Elem>, ZeroSumError> {
    t.check_in(s)?;
    let dp = SubsumDp::new(s, t);
    let reach = dp.forward();
    Ok(reach
        .iter()
        .enumerate()
        .filter(|(st, &r)| r && st / 2 != dp.none)
        .map(|(st, _)| Elem((st / 2) as u32))
        .collect())
}

/// Which sub-multisets a [`subsum_witness`] search may return.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsumFilter {
    pub allow_empty: bool,
    pub allow_full: bool,
}

impl SubsumFilter {
    pub const PROPER: SubsumFilter = SubsumFilter { allow_empty: true, allow_full: false };
    pub const NONEMPTY: SubsumFilter = SubsumFilter { allow_empty: false, allow_full: true };
    pub const NONEMPTY_PROPER: SubsumFilter = SubsumFilter { allow_empty: false, allow_full: false };
}

/// A sub-multiset of `t` with product `target`, choosing the
/// lexicographically least multiplicity vector over the distinct elements in
/// ascending order (so `λ` wins whenever it qualifies).
pub fn subsum_witness(
    s: &FiniteSemigroup,
    t: &Sequence,
    target: Elem,
    filter: SubsumFilter,
) -> Result<Option<Sequence>, ZeroSumError> {
    subsum_witness_by(s, t, |e| e == target, filter)
}

/// Like [`subsum_witness`], accepting any product for which `accept` holds.
pub fn subsum_witness_by<F: Fn(Elem) -> bool>(
    s: &FiniteSemigroup,
    t: &Sequence,
    accept: F,
    filter: SubsumFilter,
) -> Result<Option<Sequence>, ZeroSumError> {
    t.check_in(s)?;
    let dp = SubsumDp::new(s, t);
    let empty_ok = filter.allow_empty && s.identity().is_some_and(&accept);
    Ok(dp.witness(|sum, all_used| {
        if all_used && !filter.allow_full {
            return false;
        }
        if sum == dp.none {
            empty_ok
        } else {
            accept(Elem(sum as u32))
        }
    }))
}

/// A proper sub-multiset `T'` with `σ(T') = σ(T)`, if `T` is reducible.
pub fn reduction_witness(s: &FiniteSemigroup, t: &Sequence) -> Result<Option<Sequence>, ZeroSumError> {
    if t.is_empty() {
        return Ok(None);
    }
    let total = sigma(s, t)?;
    subsum_witness(s, t, total, SubsumFilter::PROPER)
}

pub fn is_reducible(s: &FiniteSemigroup, t: &Sequence) -> Result<bool, ZeroSumError> {
    Ok(reduction_witness(s, t)?.is_some())
}

/// True iff no nonempty sub-multiset multiplies to the identity. Every term
/// must be a unit.
pub fn is_zero_sum_free(s: &FiniteSemigroup, t: &Sequence) -> Result<bool, ZeroSumError> {
    t.check_in(s)?;
    let identity = s.identity().ok_or(ZeroSumError::MissingIdentity)?;
    for (x, _) in t.counts() {
        if !s.elements().any(|y| s.op(x, y) == identity) {
            return Err(ZeroSumError::NotUnit(s.render(x)));
        }
    }
    Ok(!sumset(s, t)?.contains(&identity))
}

/// How a Davenport value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactDfs,
    Formula,
    MontecarloBound,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ExactDfs => "exact_dfs",
            Method::Formula => "formula",
            Method::MontecarloBound => "montecarlo_bound",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DavenportResult {
    /// `D(S)` when `complete`, otherwise a certified lower bound.
    pub value: u64,
    /// An irreducible sequence of length `value - 1`.
    pub witness: Sequence,
    pub nodes: u64,
    pub elapsed: Duration,
    pub method: Method,
    pub complete: bool,
}

/// Serialized form of a [`DavenportResult`].
#[derive(Debug, Clone, Serialize)]
pub struct DavenportRecord {
    pub value: u64,
    pub method: Method,
    pub witness: Vec<String>,
    pub nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u128>,
    pub complete: bool,
}

impl DavenportResult {
    /// `with_timing = false` drops wall-clock time so records are
    /// reproducible byte for byte.
    pub fn to_record(&self, s: &FiniteSemigroup, with_timing: bool) -> DavenportRecord {
        DavenportRecord {
            value: self.value,
            method: self.method,
            witness: self.witness.render(s),
            nodes: self.nodes,
            millis: with_timing.then_some(self.elapsed.as_millis()),
            complete: self.complete,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Bits([u64; 4]);

impl Bits {
    const EMPTY: Bits = Bits([0; 4]);

    #[inline]
    fn contains(&self, i: usize) -> bool {
        self.0[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1 << (i & 63);
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + tz)
            })
        })
    }
}

/// Search state of an irreducible sequence `T`: every subproduct of `T`
/// including `σ(λ)` and `σ(T)`, together with `σ(T)`. Because `T` is
/// irreducible its proper subproducts are exactly `all \ {σ(T)}`, so this
/// pair decides which extensions stay irreducible and what they lead to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct State {
    all: Bits,
    total: u8,
}

/// Multiset hasher tuned for the fixed-width search keys.
#[derive(Default)]
struct StateHasher(u64);

impl std::hash::Hasher for StateHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.write_u64(u64::from(b));
        }
    }

    fn write_u64(&mut self, i: u64) {
        self.0 = (self.0.rotate_left(5) ^ i).wrapping_mul(0x51_7c_c1_b7_27_22_0a_95);
    }

    fn write_u8(&mut self, i: u8) {
        self.write_u64(u64::from(i));
    }

    fn write_usize(&mut self, i: usize) {
        self.write_u64(i as u64);
    }
}

type Memo = HashMap<State, u16, std::hash::BuildHasherDefault<StateHasher>>;

struct Search<'a> {
    s: &'a FiniteSemigroup,
    memo: Memo,
    nodes: u64,
    deadline: Option<Instant>,
    aborted: bool,
    path: Vec<Elem>,
    deepest: Vec<Elem>,
}

impl Search<'_> {
    /// `σ(T)·x` if `T·x` is still irreducible, with the successor's subproducts.
    #[inline]
    fn extend(&self, state: &State, x: Elem) -> Option<State> {
        let total = Elem(u32::from(state.total));
        let new_total = self.s.op(total, x);
        if state.all.contains(new_total.index()) {
            return None;
        }
        let mut all = state.all;
        for a in state.all.iter() {
            let ax = self.s.op(Elem(a as u32), x);
            if ax == new_total && a != total.index() {
                return None;
            }
            all.insert(ax.index());
        }
        Some(State { all, total: new_total.0 as u8 })
    }

    /// Longest irreducible extension of a state.
    fn longest(&mut self, state: State) -> u16 {
        if let Some(&r) = self.memo.get(&state) {
            return r;
        }
        self.nodes += 1;
        if self.nodes % 4096 == 1 {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.aborted = true;
                }
            }
        }
        if self.aborted {
            return 0;
        }
        if self.path.len() > self.deepest.len() {
            self.deepest.clone_from(&self.path);
        }
        let mut best = 0;
        for x in self.s.elements() {
            if let Some(next) = self.extend(&state, x) {
                self.path.push(x);
                best = best.max(1 + self.longest(next));
                self.path.pop();
                if self.aborted {
                    return best;
                }
            }
        }
        self.memo.insert(state, best);
        best
    }
}

/// Exact `D(S)` by exhaustive search over irreducible sequences.
///
/// Irreducible sequences are grown one term at a time; the search memoizes on
/// the pair (set of subproducts, total product), which determines every
/// future extension, so each reachable configuration is expanded once. The
/// reported witness is the lexicographically least longest irreducible
/// sequence. If `budget` runs out the result is a lower bound with
/// `complete = false`.
pub fn davenport_exact(s: &FiniteSemigroup, budget: Option<Duration>) -> Result<DavenportResult, ZeroSumError> {
    let identity = s.identity().ok_or(ZeroSumError::MissingIdentity)?;
    if s.size() > SEARCH_UNIVERSE_LIMIT {
        return Err(ZeroSumError::TooLarge(s.size()));
    }
    let start = Instant::now();
    let mut search = Search {
        s,
        memo: Memo::default(),
        nodes: 0,
        deadline: budget.map(|b| start + b),
        aborted: false,
        path: Vec::new(),
        deepest: Vec::new(),
    };
    let mut root_all = Bits::EMPTY;
    root_all.insert(identity.index());
    let root = State { all: root_all, total: identity.0 as u8 };
    let longest = search.longest(root);

    let (witness, complete) = if search.aborted {
        (Sequence::from_elems(search.deepest.iter().copied()), false)
    } else {
        let mut witness = Sequence::new();
        let mut state = root;
        let mut remaining = longest;
        while remaining > 0 {
            let (x, next) = s
                .elements()
                .find_map(|x| {
                    let next = search.extend(&state, x)?;
                    (search.memo.get(&next) == Some(&(remaining - 1))).then_some((x, next))
                })
                .expect("memo covers every reachable state");
            witness.push(x);
            state = next;
            remaining -= 1;
        }
        (witness, true)
    };
    Ok(DavenportResult {
        value: witness.len() as u64 + 1,
        witness,
        nodes: search.nodes,
        elapsed: start.elapsed(),
        method: Method::ExactDfs,
        complete,
    })
}

/// Classical closed forms for `D(C_{d_1} × ... × C_{d_r})`, `d_1 | ... | d_r`:
/// rank at most two gives `d_1 + d_2 - 1`, `q`-groups give
/// `1 + Σ (d_i - 1)`. Anything else is `None`; no guessing.
pub fn davenport_group_formula(invariant_factors: &[u64]) -> Result<Option<u64>, ZeroSumError> {
    if invariant_factors.contains(&0) {
        return Err(ZeroSumError::NotDivisibilityChain(invariant_factors.to_vec()));
    }
    let d: Vec<u64> = invariant_factors.iter().copied().filter(|&x| x > 1).collect();
    if d.windows(2).any(|w| w[1] % w[0] != 0) {
        return Err(ZeroSumError::NotDivisibilityChain(invariant_factors.to_vec()));
    }
    let over_prime_powers = || {
        let q = smallest_prime_factor(*d.last()?);
        d.iter().all(|&x| is_power_of(x, q)).then(|| 1 + d.iter().map(|x| x - 1).sum::<u64>())
    };
    Ok(match d.len() {
        0 => Some(1),
        1 => Some(d[0]),
        2 => Some(d[0] + d[1] - 1),
        _ => over_prime_powers(),
    })
}

fn smallest_prime_factor(n: u64) -> u64 {
    (2..).find(|q| n.is_multiple_of(*q) || q * q > n).map(|q| if n.is_multiple_of(q) { q } else { n }).unwrap()
}

fn is_power_of(mut n: u64, q: u64) -> bool {
    while n.is_multiple_of(q) {
        n /= q;
    }
    n == 1
}

/// Outcome of random sampling at a fixed length.
#[derive(Debug, Clone)]
pub struct MonteCarloReport {
    pub length: usize,
    pub samples: u64,
    pub seed: u64,
    pub reducible: u64,
    /// An irreducible sample, which disproves `D(S) <= length`.
    pub counterexample: Option<Sequence>,
}

impl MonteCarloReport {
    pub fn all_reducible(&self) -> bool {
        self.counterexample.is_none() && self.reducible == self.samples
    }
}

/// `binom[n][k]` for `n < rows`, `None` on overflow.
fn binomial_table(rows: usize) -> Vec<Vec<Option<u128>>> {
    let mut t: Vec<Vec<Option<u128>>> = Vec::with_capacity(rows);
    for n in 0..rows {
        let mut row = vec![Some(1u128); n + 1];
        for k in 1..n {
            row[k] = match (t[n - 1][k - 1], t[n - 1][k]) {
                (Some(a), Some(b)) => a.checked_add(b),
                _ => None,
            };
        }
        t.push(row);
    }
    t
}

/// Uniform multiset sampler: multisets of size `d` over `n` symbols are in
/// bijection with `d`-subsets of `n + d - 1` slots (stars and bars), which are
/// unranked in lexicographic order.
struct MultisetSampler {
    n: usize,
    d: usize,
    binom: Vec<Vec<Option<u128>>>,
    total: u128,
}

impl MultisetSampler {
    fn new(n: usize, d: usize) -> Result<Self, ZeroSumError> {
        let slots = n + d - 1;
        let binom = binomial_table(slots + 1);
        let total = binom[slots][d].ok_or(ZeroSumError::TooManyMultisets(d))?;
        Ok(MultisetSampler { n, d, binom, total })
    }

    fn choose(&self, n: usize, k: usize) -> u128 {
        if k > n {
            0
        } else {
            self.binom[n][k].unwrap_or(u128::MAX)
        }
    }

    fn unrank(&self, mut rank: u128) -> Vec<usize> {
        let slots = self.n + self.d - 1;
        let mut out = Vec::with_capacity(self.d);
        let mut next = 0;
        for i in 0..self.d {
            let left = self.d - i - 1;
            loop {
                let count = self.choose(slots - next - 1, left);
                if rank < count {
                    break;
                }
                rank -= count;
                next += 1;
            }
            out.push(next - i);
            next += 1;
        }
        out
    }

    fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        self.unrank(rng.gen_range(0..self.total))
    }
}

/// Samples `samples` uniform multisets of size `d` and checks each for
/// reducibility. The first irreducible sample is kept as a certified
/// counterexample to `D(S) <= d`.
pub fn davenport_montecarlo_upper(
    s: &FiniteSemigroup,
    d: usize,
    samples: u64,
    seed: u64,
) -> Result<MonteCarloReport, ZeroSumError> {
    if d == 0 {
        return Err(ZeroSumError::TooManyMultisets(0));
    }
    let sampler = MultisetSampler::new(s.size(), d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reducible = 0;
    let mut counterexample = None;
    for _ in 0..samples {
        let t = Sequence::from_elems(sampler.sample(&mut rng).into_iter().map(|i| Elem(i as u32)));
        if is_reducible(s, &t)? {
            reducible += 1;
        } else if counterexample.is_none() {
            counterexample = Some(t);
        }
    }
    Ok(MonteCarloReport { length: d, samples, seed, reducible, counterexample })
}
