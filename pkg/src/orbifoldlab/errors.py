"""Exception hierarchy.

Domain errors derive from OrbifoldLabError so the CLI can map them to a
single exit code; programming errors stay ordinary exceptions.
"""


class OrbifoldLabError(Exception):
    """Base class for all domain errors raised by this package."""


class NotRational(OrbifoldLabError):
    """A cyclotomic number was not a rational number."""


class ZeroLeadingCoefficient(OrbifoldLabError):
    """Series inversion requires a nonzero leading coefficient."""


class InsufficientPrecision(OrbifoldLabError):
    """A coefficient beyond the tracked precision was requested."""


class OddLattice(OrbifoldLabError):
    """An even Gram matrix was required."""


class SingularGram(OrbifoldLabError):
    """A nondegenerate Gram matrix was required."""


class DegenerateForm(OrbifoldLabError):
    """A nondegenerate finite quadratic form was required."""


class OddSignatureNeedsWord(OrbifoldLabError):
    """Odd-signature Weil matrices are only defined for explicit S,T words."""


class TooLarge(OrbifoldLabError):
    """Exhaustive search bound exceeded."""


class NotPositiveDefinite(OrbifoldLabError):
    """Vector enumeration requires a positive-definite form."""


class NotFiniteOrder(OrbifoldLabError):
    """The matrix is not an automorphism of finite order."""


class NonIntegralResult(OrbifoldLabError):
    """A rescaling produced a non-integral Gram matrix."""


class UnboundedSearch(OrbifoldLabError):
    """Enumeration in an indefinite lattice requires an explicit box."""


class NotSL2(OrbifoldLabError):
    """A matrix was expected to lie in SL2(Z)."""


class CNotMultipleOf8(OrbifoldLabError):
    """The central charge must be a multiple of 8."""


class NotFixed(OrbifoldLabError):
    """The vector is not fixed by the relevant power of the automorphism."""


class NonStandardLiftUnsupported(OrbifoldLabError):
    """Only standard lifts are supported."""


class TypeNotZero(OrbifoldLabError):
    """The pipeline requires an automorphism of type n{0}."""


class NonIntegralCharacter(OrbifoldLabError):
    """An assembled character had a non-integral coefficient."""


class JMismatch(OrbifoldLabError):
    """A central charge 24 character failed the J-consistency check."""


class UnsupportedN(OrbifoldLabError):
    """The dimension formulas exist only for n in {2, 3, 5, 7, 13}."""


class UnknownCase(OrbifoldLabError):
    """Not one of the ten bundled square-free orders."""


class ValidationError(OrbifoldLabError):
    """A data file failed its consistency checks."""
