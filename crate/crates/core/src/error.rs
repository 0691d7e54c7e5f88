use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse {what} from {input:?}: {reason}")]
    Parse {
        what: &'static str,
        input: String,
        reason: String,
    },

    #[error("polynomial must be monic, leading coefficient is {leading}")]
    NotMonic { leading: String },

    #[error("{what} must have {expected} entries, found {found}")]
    Arity {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("polynomial degree must be at least 1")]
    DegreeZero,

    #[error("weights must not all be zero")]
    ZeroWeights,

    #[error("{what} index {index} out of range 1..={bound}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        bound: usize,
    },

    #[error("invalid argument {name}: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("reflection needs a nonzero constant term (u_m = 0 makes 0 a root)")]
    ZeroConstantTerm,

    #[error("polynomial is not squarefree: gcd(f, f') has degree {gcd_degree}")]
    NotSquarefree { gcd_degree: usize },

    #[error("no sign change of f on [{lo}, {hi}]")]
    NoSignChange { lo: String, hi: String },

    #[error("could not separate all roots below {precision_bits} bits (near-multiple roots?)")]
    RootSeparation { precision_bits: u32 },

    #[error("requested root index {index} is not a real root")]
    TargetNotReal { index: usize },

    #[error("zero denominator entry M^n_({row},{col}) at every requested n (first at n = {n})")]
    ZeroDenominator { n: u64, row: usize, col: usize },

    #[error("digit count of zero is undefined")]
    ZeroDigits,

    #[error("dominance undecidable up to {precision_bits} bits: |gamma| tie at the maximum")]
    DominanceUndecidable { precision_bits: u32 },

    #[error("all gamma values vanish")]
    AllGammaZero,

    #[error("convergence report is not certified (c > 1 unproven)")]
    NotCertified,

    #[error("limit denominator B_k is indistinguishable from 0 for ({p},{q})")]
    LimitDenominatorZero { p: usize, q: usize },

    #[error("Vandermonde inverse residual {residual} exceeds tolerance {tolerance}")]
    VandermondeResidual { residual: String, tolerance: String },

    #[error("index pattern ({i},{j})/({p},{q}) is degenerate: A_l B_k - A_k B_l = 0")]
    DegenerateRatio {
        i: usize,
        j: usize,
        p: usize,
        q: usize,
    },

    #[error("need at least {needed} records with nonzero error, found {found}")]
    InsufficientRecords { needed: usize, found: usize },

    #[error("cubic closed form requires degree 3, found {degree}")]
    NotCubic { degree: usize },

    #[error("cubic closed form divides by r = u_3 = 0")]
    ZeroCubicConstant,

    #[error("{method}: vanishing denominator at step {step}")]
    ZeroDerivative { method: &'static str, step: u64 },

    #[error("{method}: error grew for 3 consecutive steps (diverging at step {step}, error {error})")]
    Diverged {
        method: &'static str,
        step: u64,
        error: String,
    },

    #[error("no symbolic offset known for ({i},{j})/({p},{q}); pass an explicit offset")]
    OffsetUnavailable {
        i: usize,
        j: usize,
        p: usize,
        q: usize,
    },

    #[error("table id {0} is not in 1..=7")]
    UnknownTable(u8),

    #[error("digit target {target} unreachable for {candidate} within n <= {ceiling}")]
    UnreachableDigits {
        candidate: String,
        target: u64,
        ceiling: u64,
    },

    #[error("refinement exceeded the precision ceiling of {bits} bits")]
    PrecisionCeiling { bits: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for malformed input (bad literals, arity, indices). Everything
    /// else is a domain failure of a well-formed request.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::NotMonic { .. }
                | Error::Arity { .. }
                | Error::DegreeZero
                | Error::ZeroWeights
                | Error::IndexOutOfRange { .. }
                | Error::InvalidArgument { .. }
                | Error::UnknownTable(_)
                | Error::Io(_)
                | Error::Csv(_)
        )
    }
}
