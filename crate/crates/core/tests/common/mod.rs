#![allow(dead_code)]

use davenport::gfpoly::{Poly, Prime};
use davenport::semigroup::{
    build_abelian_group, build_cyclic_with_zero, build_product, build_quotient_semigroup, Elem, FiniteSemigroup,
};
use davenport::zerosum::{sigma, Sequence};

pub fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

pub fn quotient(p: u64, coeffs: &[i64]) -> FiniteSemigroup {
    build_quotient_semigroup(&Poly::new(prime(p), coeffs)).unwrap()
}

pub fn cz(ns: &[u64]) -> FiniteSemigroup {
    build_product(ns.iter().map(|&n| build_cyclic_with_zero(n).unwrap()).collect()).unwrap()
}

/// Semigroups with at most nine elements.
pub fn small_semigroups() -> Vec<(&'static str, FiniteSemigroup)> {
    vec![
        ("F3[x]/<x^2>", quotient(3, &[0, 0, 1])),
        ("F3[x]/<(x+1)^2>", quotient(3, &[1, 2, 1])),
        ("F3[x]/<x(x+1)>", quotient(3, &[0, 1, 1])),
        ("F3[x]/<x^2+1>", quotient(3, &[1, 0, 1])),
        ("F2[x]/<x^3+x>", quotient(2, &[0, 1, 0, 1])),
        ("(C2 u inf)^2", cz(&[2, 2])),
        ("C8 u inf", cz(&[8])),
        ("C2 x C4", build_abelian_group(&[2, 4]).unwrap()),
    ]
}

/// Every multiset of `len` elements drawn from `0..n`, in canonical order.
pub fn multisets(n: u32, len: usize) -> Vec<Sequence> {
    fn go(n: u32, len: usize, from: u32, cur: &mut Vec<Elem>, out: &mut Vec<Sequence>) {
        if cur.len() == len {
            out.push(Sequence::from_elems(cur.iter().copied()));
            return;
        }
        for e in from..n {
            cur.push(Elem(e));
            go(n, len, e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, len, 0, &mut Vec::new(), &mut out);
    out
}

/// Reducibility by listing every proper sub-multiset.
pub fn brute_reducible(s: &FiniteSemigroup, t: &Sequence) -> bool {
    let counts: Vec<(Elem, u32)> = t.counts().collect();
    let total = sigma(s, t).unwrap();
    let mut choice = vec![0u32; counts.len()];
    loop {
        let proper = choice.iter().zip(&counts).any(|(c, (_, m))| c < m);
        if proper {
            let terms = choice.iter().zip(&counts).flat_map(|(&c, &(e, _))| std::iter::repeat_n(e, c as usize));
            let value = s.fold(terms).or(s.identity()).unwrap();
            if value == total {
                return true;
            }
        }
        let mut i = 0;
        loop {
            if i == counts.len() {
                return false;
            }
            if choice[i] < counts[i].1 {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
