use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Failure to turn expression text into a tree.
#[derive(Clone, Debug, PartialEq)]
pub enum ParseError {
    Syntax {
        /// Byte offset into the input.
        pos: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    UnknownIdentifier {
        pos: usize,
        name: String,
    },
    /// `f ^ g` where `g` depends on a variable.
    NonConstantExponent {
        pos: usize,
    },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { pos, expected, found } => {
                write!(f, "syntax error at offset {pos}: found {found}, expected one of ")?;
                for (i, e) in expected.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(e)?;
                }
                Ok(())
            }
            ParseError::UnknownIdentifier { pos, name } => {
                write!(f, "unknown identifier `{name}` at offset {pos}")
            }
            ParseError::NonConstantExponent { pos } => {
                write!(f, "exponent at offset {pos} must be constant")
            }
        }
    }
}

/// Row of a moving-frame ODE, used to say which equation a frame violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OdeRow {
    /// `T'`
    Tangent,
    /// `N1'` or `Y'`
    Second,
    /// `N2'` or `U'`
    Third,
    /// The triple is not orthonormal and right-handed.
    Orthonormality,
    /// The supplied `T` is not the derivative of the supplied spine.
    SpineTangent,
}

impl fmt::Display for OdeRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OdeRow::Tangent => "T'",
            OdeRow::Second => "Y' (second row)",
            OdeRow::Third => "U' (third row)",
            OdeRow::Orthonormality => "orthonormality",
            OdeRow::SpineTangent => "T = γ'",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    Parse(ParseError),
    /// An elementary function was evaluated outside its domain.
    Domain {
        op: &'static str,
        at: f64,
    },
    NotUnitSpeed {
        u: f64,
        speed: f64,
    },
    VanishingCurvature {
        u: f64,
        kappa: f64,
    },
    NotPlanar {
        u: f64,
        deviation: f64,
    },
    DegenerateHost {
        u: f64,
    },
    FrameInconsistent {
        u: f64,
        row: OdeRow,
        residual: f64,
    },
    SingularPoint {
        u: f64,
        v: f64,
        w: f64,
    },
    FocalPoleV {
        u: f64,
        v: f64,
    },
    FocalPoleB {
        u: f64,
        v: f64,
        b: f64,
    },
    FocalDegenerate {
        u: f64,
        v: f64,
        w: f64,
    },
    QuadratureFailure {
        a: f64,
        b: f64,
    },
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(e) => e.fmt(f),
            Error::Domain { op, at } => write!(f, "{op} evaluated outside its domain at {at}"),
            Error::NotUnitSpeed { u, speed } => {
                write!(f, "curve is not unit speed at u={u} (|γ'|={speed})")
            }
            Error::VanishingCurvature { u, kappa } => {
                write!(f, "curvature vanishes at u={u} (κ={kappa}); Frenet frame undefined")
            }
            Error::NotPlanar { u, deviation } => write!(
                f,
                "Frenet-frame tubes need a spine in the plane z=0 with zero torsion; \
                 deviation {deviation} at u={u}"
            ),
            Error::DegenerateHost { u } => write!(f, "host surface is not regular at u={u}"),
            Error::FrameInconsistent { u, row, residual } => {
                write!(f, "supplied Darboux frame violates the {row} equation at u={u} (residual {residual})")
            }
            Error::SingularPoint { u, v, w } => {
                write!(f, "singular surface point at (u,v)=({u},{v}), W={w}")
            }
            Error::FocalPoleV { u, v } => write!(f, "cos v = 0 pole of the focal surface at ({u},{v})"),
            Error::FocalPoleB { u, v, b } => {
                write!(f, "b = 0 pole of the focal surface at ({u},{v}), b={b}")
            }
            Error::FocalDegenerate { u, v, w } => {
                write!(f, "focal surface degenerates at ({u},{v}), W*={w}")
            }
            Error::QuadratureFailure { a, b } => {
                write!(f, "adaptive quadrature did not converge on [{a}, {b}]")
            }
            Error::InvalidInput(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for ParseError {}

impl core::error::Error for Error {}

impl From<ParseError> for Error {
    fn from(e: ParseError) -> Self {
        Error::Parse(e)
    }
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
