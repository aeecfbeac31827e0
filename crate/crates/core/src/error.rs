use thiserror::Error;

/// Errors raised while loading, validating or computing with finite presheaves.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("associativity fails for ({f} ; {g}) ; {h} vs {f} ; ({g} ; {h})")]
    AssociativityViolation { f: String, g: String, h: String },
    #[error("identity law fails for {identity} and {morphism}")]
    IdentityViolation { identity: String, morphism: String },
    #[error("composition table has no entry for {f} ; {g}")]
    IncompleteTable { f: String, g: String },
    #[error("composite {f} ; {g} = {result} has the wrong domain or codomain")]
    IllTypedComposite { f: String, g: String, result: String },
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("unknown element `{element}` at object `{object}`")]
    UnknownElement { object: String, element: String },
    #[error("duplicate {kind} `{name}`")]
    DuplicateName { kind: &'static str, name: String },
    #[error("object `{0}` has no identity")]
    MissingIdentity(String),
    #[error("no carrier given for object `{0}`")]
    MissingCarrier(String),
    #[error("no action given for morphism `{0}`")]
    MissingAction(String),
    #[error("no component given for object `{0}`")]
    MissingComponent(String),
    #[error("function for `{name}` is not total or not well defined: {detail}")]
    NotAFunction { name: String, detail: String },
    #[error("functoriality fails for {f} ; {g}")]
    FunctorialityViolation { f: String, g: String },
    #[error("naturality square for morphism `{morphism}` fails at element `{element}`")]
    NaturalityViolation { morphism: String, element: String },
    #[error("maps are not composable: target of the first is not the source of the second")]
    NonComposable,
    #[error("presheaves live over different base categories")]
    BaseMismatch,
    #[error("lifting square does not commute")]
    NonCommutingSquare,
    #[error("maps differ on the relative part; no copairing out of the relative pushout")]
    IncompatibleOnRelativePart,
    #[error("cocone legs disagree on the shared domain")]
    CoconeMismatch,
    #[error("replay mismatch: {0}")]
    ReplayMismatch(String),
    #[error("internal invariant broken: {0}")]
    ImplementationInvariantBroken(String),
    #[error("carrier of size {size} exceeds the limit of {limit}")]
    CarrierTooLarge { size: usize, limit: usize },
    #[error("base category has {size} objects, limit is {limit}")]
    BaseTooLarge { size: usize, limit: usize },
    #[error("factorization ran out of fuel after {used} attachments")]
    FuelExhausted { used: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
