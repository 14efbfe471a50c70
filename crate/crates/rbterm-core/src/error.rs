use thiserror::Error;

/// Errors shared across the kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// `expand_step` on a tree with an empty leg: no move applies.
    #[error("T({a},{b},{c}) is already in normal form; no move applies")]
    NoApplicableMove { a: u32, b: u32, c: u32 },

    /// A resource cap was hit (memoized or naive expansion, term budget).
    #[error("{what}: a+b = {got} exceeds the cap of {limit}")]
    CapExceeded {
        what: &'static str,
        got: u64,
        limit: u64,
    },

    /// Closed-form generators require both legs nonempty.
    #[error("both legs must be nonempty: need a >= 1 and b >= 1, got a={a}, b={b}")]
    EmptyLeg { a: u32, b: u32 },

    /// Sequence-model operands must share a horizon.
    #[error("sequence horizons differ: {left} vs {right}")]
    HorizonMismatch { left: usize, right: usize },

    /// Kernel-representation check needs enough samples to pin the degree.
    #[error("need at least {needed} distinct samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    /// Kernel-representation samples must be pairwise distinct.
    #[error("sample points must be pairwise distinct")]
    DuplicateSample,

    /// Chain enumeration would visit more tuples than allowed.
    #[error("chain enumeration for a={a}, m={m} exceeds the cap of {cap} tuples")]
    EnumerationCapExceeded { a: u32, m: u32, cap: u64 },
}
