//! Kraft-Chaitin codeword allocation.
//!
//! [`AllocatorState`] keeps the pool of free prefixes (sorted by strictly
//! decreasing length) and the allocated codewords in allocation order. Each
//! request for a codeword of length `n` takes the longest free prefix `s`
//! with `|s| ≤ n`, hands out `s0^(n-|s|)` and returns the siblings
//! `s1, s01, …, s0^(n-|s|-1)1` to the free pool in the slot `s` occupied.
//! A request can only fail when the remaining free mass is below `2^-n`.

use std::fmt;

use thiserror::Error;

use crate::arith::{measure_of_lengths, pow2_neg, Dyadic};
use crate::bits::{is_prefix_free, measure_of, BitString};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AllocError {
    /// The request at `index` (0-based) asks for more mass than remains free.
    #[error("request {index} for length {length} exceeds the remaining free mass {free}")]
    InsufficientMass { index: usize, length: usize, free: Dyadic },
    #[error("target length {target} is shorter than the prefix length {prefix}")]
    TargetTooShort { prefix: usize, target: usize },
}

/// A request for a codeword of `length` bits mapped to `output`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub length: usize,
    pub output: BitString,
}

impl Request {
    pub fn new(length: usize, output: BitString) -> Self {
        Request { length, output }
    }
}

/// Free and allocated pools of the allocator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllocatorState {
    free: Vec<BitString>,
    allocated: Vec<BitString>,
    mass_allocated: Dyadic,
}

impl Default for AllocatorState {
    fn default() -> Self {
        Self::new()
    }
}

impl AllocatorState {
    /// `free = [ε]`, nothing allocated.
    pub fn new() -> Self {
        AllocatorState {
            free: vec![BitString::empty()],
            allocated: Vec::new(),
            mass_allocated: Dyadic::zero(),
        }
    }

    /// Builds a state from raw parts without checking anything. Use
    /// [`check_invariants`] to find out what holds.
    pub fn from_parts(free: Vec<BitString>, allocated: Vec<BitString>, mass_allocated: Dyadic) -> Self {
        AllocatorState { free, allocated, mass_allocated }
    }

    pub fn free(&self) -> &[BitString] {
        &self.free
    }

    /// Allocated codewords, oldest first.
    pub fn allocated(&self) -> &[BitString] {
        &self.allocated
    }

    pub fn mass_allocated(&self) -> &Dyadic {
        &self.mass_allocated
    }

    pub fn free_measure(&self) -> Dyadic {
        measure_of(&self.free)
    }

    /// Allocates a fresh codeword of length `n`.
    ///
    /// The error's `index` is the number of codewords allocated so far.
    pub fn allocate(&mut self, n: usize) -> Result<BitString, AllocError> {
        let free = self.free_measure();
        let insufficient = |free| AllocError::InsufficientMass {
            index: self.allocated.len(),
            length: n,
            free,
        };
        if pow2_neg(n) > free {
            return Err(insufficient(free));
        }
        // Sorted by decreasing length, so the first fit is the longest fit.
        let Some(pos) = self.free.iter().position(|s| s.len() <= n) else {
            return Err(insufficient(free));
        };
        let mut extended = extend_prefix(&self.free[pos], n)?.into_iter();
        let word = extended.next().expect("extend_prefix never returns an empty list");
        self.free.splice(pos..=pos, extended);
        self.allocated.push(word.clone());
        self.mass_allocated += &pow2_neg(n);
        Ok(word)
    }

    /// Runs `allocate` over a stream of requests, validating Kraft's
    /// inequality incrementally. Error indices count from the start of
    /// `requests`.
    pub fn allocate_requests<'a, I>(&mut self, requests: I) -> Result<Vec<(BitString, BitString)>, AllocError>
    where
        I: IntoIterator<Item = &'a Request>,
    {
        requests
            .into_iter()
            .enumerate()
            .map(|(i, req)| {
                self.allocate(req.length)
                    .map(|x| (x, req.output.clone()))
                    .map_err(|e| match e {
                        AllocError::InsufficientMass { length, free, .. } => {
                            AllocError::InsufficientMass { index: i, length, free }
                        }
                        other => other,
                    })
            })
            .collect()
    }
}

/// Allocates codewords for `requests` from a fresh state, in request order.
pub fn allocate_all(requests: &[Request]) -> Result<Vec<(BitString, BitString)>, AllocError> {
    AllocatorState::new().allocate_requests(requests)
}

/// Codewords for bare lengths, in request order.
pub fn allocate_lengths(lengths: &[usize]) -> Result<Vec<BitString>, AllocError> {
    let mut state = AllocatorState::new();
    lengths.iter().map(|&n| state.allocate(n)).collect()
}

/// `[l0^k, l0^(k-1)1, …, l01, l1]` with `k = n - |l|`, or `[l]` when
/// `n = |l|`.
pub fn extend_prefix(l: &BitString, n: usize) -> Result<Vec<BitString>, AllocError> {
    if n < l.len() {
        return Err(AllocError::TargetTooShort { prefix: l.len(), target: n });
    }
    let depth = n - l.len();
    let mut out = Vec::with_capacity(depth + 1);
    out.push(l.concat(&BitString::zeros(depth)));
    for k in (0..depth).rev() {
        out.push(l.concat(&BitString::zeros(k)).with(true));
    }
    Ok(out)
}

/// Pass/fail per allocator invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantReport {
    /// `free ∪ allocated` is prefix-free.
    pub prefix_free: bool,
    /// `μ(free) + μ(allocated) = 1`.
    pub total_measure: bool,
    /// `μ(allocated)` equals the mass counter.
    pub mass_counter: bool,
    /// Remaining requests fit in the free mass; `None` when no remaining
    /// requests were supplied.
    pub remaining_bound: Option<bool>,
    /// Free pool strictly sorted by decreasing length.
    pub distinct_free_lengths: bool,
}

impl InvariantReport {
    pub fn all_pass(&self) -> bool {
        self.prefix_free
            && self.total_measure
            && self.mass_counter
            && self.remaining_bound.unwrap_or(true)
            && self.distinct_free_lengths
    }
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "pass" } else { "FAIL" };
        writeln!(f, "prefix-free          {}", mark(self.prefix_free))?;
        writeln!(f, "total measure 1      {}", mark(self.total_measure))?;
        writeln!(f, "mass counter         {}", mark(self.mass_counter))?;
        match self.remaining_bound {
            Some(b) => writeln!(f, "remaining requests   {}", mark(b))?,
            None => writeln!(f, "remaining requests   n/a")?,
        }
        write!(f, "distinct free lengths {}", mark(self.distinct_free_lengths))
    }
}

/// Evaluates the five allocator invariants. `remaining` are the lengths
/// still to be requested, if known.
pub fn check_invariants(state: &AllocatorState, remaining: Option<&[usize]>) -> InvariantReport {
    let free_mu = state.free_measure();
    let alloc_mu = measure_of(&state.allocated);
    InvariantReport {
        prefix_free: is_prefix_free(state.free.iter().chain(state.allocated.iter())),
        total_measure: &free_mu + &alloc_mu == Dyadic::one(),
        mass_counter: alloc_mu == state.mass_allocated,
        remaining_bound: remaining.map(|r| measure_of_lengths(r) <= free_mu),
        distinct_free_lengths: state.free.windows(2).all(|w| w[0].len() > w[1].len()),
    }
}
