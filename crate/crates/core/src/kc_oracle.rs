//! Structurally recursive reference allocator.
//!
//! A direct transcription of the list-based functional formulation of the
//! Kraft-Chaitin allocator and its checking predicates. It keeps the
//! functional quirks on purpose: `kc_ref` consumes its length list from the
//! back and returns codewords newest-first, and an unsatisfiable request is
//! silently skipped. It shares no code with [`crate::codespace`] beyond the
//! `BitString` container, so the two can be tested against each other.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::bits::BitString;

/// Ordered list of free prefixes, unguarded.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreePool {
    pub strings: Vec<BitString>,
}

impl FreePool {
    pub fn new(strings: Vec<BitString>) -> Self {
        FreePool { strings }
    }

    /// `[ε]`.
    pub fn initial() -> Self {
        FreePool { strings: vec![BitString::empty()] }
    }
}

fn append(l: &BitString, bit: bool) -> BitString {
    let mut bits = l.bits().to_vec();
    bits.push(bit);
    BitString::from_bits(bits)
}

/// `extend l 0 = [l]`;
/// `extend l (k+1) = (hd (extend l k) @ [0]) # (hd (extend l k) @ [1]) # tl (extend l k)`.
///
/// `depth` counts extra bits, as in the recursive definition.
pub fn extend_ref(l: &BitString, depth: usize) -> Vec<BitString> {
    if depth == 0 {
        return vec![l.clone()];
    }
    let prev = extend_ref(l, depth - 1);
    let (hd, tl) = prev.split_first().expect("extend is never empty");
    let mut out = vec![append(hd, false), append(hd, true)];
    out.extend(tl.iter().cloned());
    out
}

/// One allocation step over the allocated list `allocated` (newest first)
/// and the free pool.
pub fn kcstep_ref(allocated: &[BitString], free: &FreePool, n: usize) -> (Vec<BitString>, FreePool) {
    let Some((f, rest)) = free.strings.split_first() else {
        // fail case
        return (allocated.to_vec(), FreePool::default());
    };
    if f.len() <= n {
        let ext = extend_ref(f, n - f.len());
        let mut a = vec![ext[0].clone()];
        a.extend(allocated.iter().cloned());
        let mut pool: Vec<BitString> = ext[1..].to_vec();
        pool.extend(rest.iter().cloned());
        (a, FreePool::new(pool))
    } else {
        let (a, tail) = kcstep_ref(allocated, &FreePool::new(rest.to_vec()), n);
        let mut pool = vec![f.clone()];
        pool.extend(tail.strings);
        (a, FreePool::new(pool))
    }
}

/// `kcloop [] X = X`; `kcloop (l#ls) X = kcstep (fst (kcloop ls X)) (snd (kcloop ls X)) l`.
pub fn kcloop_ref(lengths: &[usize], state: (Vec<BitString>, FreePool)) -> (Vec<BitString>, FreePool) {
    match lengths.split_first() {
        None => state,
        Some((&l, ls)) => {
            let (a, f) = kcloop_ref(ls, state);
            kcstep_ref(&a, &f, l)
        }
    }
}

/// `kc ls = fst (kcloop ls ([], [[]]))`.
pub fn kc_ref(lengths: &[usize]) -> Vec<BitString> {
    kcloop_ref(lengths, (Vec::new(), FreePool::initial())).0
}

/// `prefixes [] x = True`; `prefixes x [] = True`;
/// `prefixes (x#xs) (y#ys) = (x = y) & prefixes xs ys`.
pub fn prefixes_ref(x: &BitString, y: &BitString) -> bool {
    fn go(x: &[bool], y: &[bool]) -> bool {
        match (x.split_first(), y.split_first()) {
            (None, _) | (_, None) => true,
            (Some((a, xs)), Some((b, ys))) => a == b && go(xs, ys),
        }
    }
    go(x.bits(), y.bits())
}

pub fn incomparable_ref(x: &BitString, set: &[BitString]) -> bool {
    match set.split_first() {
        None => true,
        Some((y, ys)) => !prefixes_ref(x, y) && incomparable_ref(x, ys),
    }
}

pub fn prefixfree_ref(set: &[BitString]) -> bool {
    match set.split_first() {
        None => true,
        Some((x, xs)) => incomparable_ref(x, xs) && prefixfree_ref(xs),
    }
}

pub fn strictlysorted_ref(set: &[BitString]) -> bool {
    match set {
        [] | [_] => true,
        [x1, x2, ..] => x1.len() > x2.len() && strictlysorted_ref(&set[1..]),
    }
}

pub fn lengths_match_ref(strings: &[BitString], lengths: &[usize]) -> bool {
    match (strings.split_first(), lengths.split_first()) {
        (None, None) => true,
        (None, Some(_)) | (Some(_), None) => false,
        (Some((x, xs)), Some((&l, ls))) => x.len() == l && lengths_match_ref(xs, ls),
    }
}

/// `extends a b`: `b` is a prefix of the list `a`.
pub fn extends_ref<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    match (a.split_first(), b.split_first()) {
        (None, None) => true,
        (None, Some(_)) => false,
        (Some(_), None) => true,
        (Some((x, xs)), Some((y, ys))) => x == y && extends_ref(xs, ys),
    }
}

/// `expn2 0 = 1`; `expn2 (n+1) = expn2 n / 2`, over plain rationals.
pub fn expn2_ref(n: usize) -> BigRational {
    (0..n).fold(BigRational::one(), |acc, _| acc / BigRational::from_integer(2.into()))
}

/// `meas_nat [] = 0`; `meas_nat (f#F) = expn2 f + meas_nat F`.
pub fn meas_nat_ref(lengths: &[usize]) -> BigRational {
    match lengths.split_first() {
        None => BigRational::zero(),
        Some((&f, rest)) => expn2_ref(f) + meas_nat_ref(rest),
    }
}

/// `Σ 2^-n ≤ 1` decided with big integers at a common denominator.
pub fn kraft_holds_ref(lengths: &[usize]) -> bool {
    let Some(&top) = lengths.iter().max() else {
        return true;
    };
    let total: BigUint = lengths.iter().map(|&n| BigUint::one() << (top - n)).sum();
    total <= BigUint::one() << top
}
