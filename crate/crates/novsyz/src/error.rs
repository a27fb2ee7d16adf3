use thiserror::Error;

/// Errors raised by Novikov-field arithmetic and exponent comparison.
#[derive(Debug, Error)]
pub enum NovikovError {
    /// Witness refinement reached the configured depth cap without
    /// separating two symbolically distinct scalars.  Either a witness is
    /// too coarse or the declared symbols are not ℚ-independent.
    #[error("unresolved comparison after {depth} refinement rounds")]
    UnresolvedComparison { depth: u32 },
    #[error("operands use different period symbol tables")]
    MixedSymbolTables,
    #[error("operands use different ground fields")]
    MixedFields,
    #[error("insufficient precision: needed {needed}, have {have}")]
    InsufficientPrecision { needed: String, have: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("invalid symbol table: {0}")]
    BadSymbolTable(String),
}

/// Errors raised by filtered-complex operations.
#[derive(Debug, Error)]
pub enum ComplexError {
    #[error(transparent)]
    Novikov(#[from] NovikovError),
    #[error("complex is invalid: {0}")]
    InvalidComplex(String),
    #[error("pivot decision needs exponents at or above the working precision")]
    InsufficientPrecision,
    #[error("torsion present in degree {degree} at level <= the requested one")]
    TorsionPresent { degree: i32 },
    #[error("cycle is a boundary; its class is null")]
    NullClass,
    #[error("cycle is not closed up to the working precision")]
    NotClosed,
    #[error("supplied ray is too short to certify the requested precision")]
    RayTooShort,
    #[error("chain map does not commute with the differentials")]
    NotChainMap,
    #[error("{0}")]
    BadInput(String),
}

/// Errors raised by the affine-geometry layer.
#[derive(Debug, Error)]
pub enum GeomError {
    #[error(transparent)]
    Novikov(#[from] NovikovError),
    #[error("polygon Q is not contained in P")]
    NotContained,
    #[error("cut is not a parallel translate of the named edge, or the strip is degenerate")]
    NotParallelCut,
    #[error("smoothing profile vanishes identically on edge {edge}")]
    DegenerateProfile { edge: usize },
    #[error("{0}")]
    BadInput(String),
}

/// Errors raised by the tropical layer.
#[derive(Debug, Error)]
pub enum TropicalError {
    #[error(transparent)]
    Novikov(#[from] NovikovError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("inclusion is not admissible: {0}")]
    NotAdmissible(String),
    #[error("polygon fails validation: {0}")]
    InvalidPolygon(String),
    #[error("{0}")]
    BadInput(String),
}
