"""Exception hierarchy shared across the package.

Everything raised on purpose derives from CyclabError so callers (and the
CLI) can separate our refusals from genuine bugs.
"""


class CyclabError(Exception):
    pass


class FormatError(CyclabError):
    """A text file (.cyc, .td, .rot, certificate JSON) violates its format."""


class DegreeError(CyclabError):
    """A vertex surgery needs degree exactly 2 and did not get it."""


class LoopError(CyclabError):
    """Dissolving or lifting would create a self-loop."""


class EdgeNotFound(CyclabError):
    pass


class ParameterError(CyclabError):
    """Arguments are structurally wrong (negative k, R not a vertex subset...)."""


class SizeError(CyclabError):
    """Input exceeds a documented hard cap of the algorithm."""


class BudgetExceeded(CyclabError):
    """An explicit resource budget ran out before the answer was found."""


class WidthError(CyclabError):
    """Decomposition width above the DP's practical cap."""


class InvalidDecomposition(CyclabError):
    pass


class BagMismatch(CyclabError):
    """Join node whose children carry different bags."""


class PairingError(CyclabError):
    """Attempt to build a pairing that breaks the alphabet's validity rules."""


class EmbeddingError(CyclabError):
    """Rotation system that does not describe a sphere embedding."""


class NotPlanar(CyclabError):
    """The pipeline was handed a graph/embedding pair it cannot treat as planar."""


class PreconditionError(CyclabError):
    """A certificate rule's guard clause failed; the message names the clause."""


class BackendError(CyclabError):
    """A delegated solver call failed; wraps the original error."""


class CertificateError(CyclabError):
    """A supplied certificate fails verification."""


class GenerationError(CyclabError):
    """A randomized generator gave up within its attempt budget."""


class ParityError(GenerationError):
    """The clique reduction needs an odd k."""


class NotCubicPlanar(GenerationError):
    """Cubicity/planarity verification was requested and failed."""


class UnknownName(GenerationError):
    """The catalog has no entry under that name."""
