use core::fmt;

/// Errors raised while building groups, pairings, sets or search configurations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A cyclic factor of order zero.
    ZeroOrder { factor: usize },
    /// Group order above [`crate::abelian::MAX_ORDER`].
    OrderTooLarge { order: u64 },
    /// Element index not below the group order.
    IndexOutOfRange { index: usize, order: usize },
    /// Coordinate vector of the wrong length.
    RankMismatch { expected: usize, found: usize },
    /// Coordinate outside `[0, n_i)`.
    CoordinateOutOfRange { factor: usize, value: i64, modulus: u32 },
    /// Pairing entry outside `[0, m)`.
    PairingEntryOutOfRange { row: usize, col: usize, value: i64, exponent: u32 },
    /// `n_i * M_ij` or `M_ij * n_j` is not divisible by the exponent.
    PairingIllDefined { row: usize, col: usize },
    /// The pairing has a nontrivial kernel.
    DegeneratePairing,
    /// Two class vectors over different moduli.
    ModulusMismatch { left: usize, right: usize },
    /// An operation that requires a nonempty set was given an empty one.
    EmptySet,
    /// Automorphism enumeration cap below one.
    CapTooSmall,
    /// Rejected search configuration.
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroOrder { factor } => write!(f, "cyclic factor {factor} has order 0"),
            Error::OrderTooLarge { order } => {
                write!(f, "group order {order} exceeds the supported maximum of {}", crate::abelian::MAX_ORDER)
            }
            Error::IndexOutOfRange { index, order } => {
                write!(f, "element index {index} out of range for a group of order {order}")
            }
            Error::RankMismatch { expected, found } => {
                write!(f, "expected {expected} coordinates, found {found}")
            }
            Error::CoordinateOutOfRange { factor, value, modulus } => {
                write!(f, "coordinate {factor} = {value} is not in [0, {modulus})")
            }
            Error::PairingEntryOutOfRange { row, col, value, exponent } => {
                write!(f, "pairing entry ({row}, {col}) = {value} is not in [0, {exponent})")
            }
            Error::PairingIllDefined { row, col } => {
                write!(f, "pairing entry ({row}, {col}) is not compatible with the factor orders")
            }
            Error::DegeneratePairing => f.write_str("pairing is degenerate"),
            Error::ModulusMismatch { left, right } => {
                write!(f, "class vectors over different moduli ({left} vs {right})")
            }
            Error::EmptySet => f.write_str("set must be nonempty"),
            Error::CapTooSmall => f.write_str("automorphism cap must be at least 1"),
            Error::InvalidConfig(why) => write!(f, "invalid search configuration: {why}"),
        }
    }
}

impl core::error::Error for Error {}
