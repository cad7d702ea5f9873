"""Exception hierarchy shared by all arbor modules."""


class ArborError(ValueError):
    """Base class for every error raised by arbor."""


class InvalidTreeError(ArborError):
    pass


class InvalidSplitError(ArborError):
    pass


class InvalidPermutationError(ArborError):
    pass


class InvalidPartitionError(ArborError):
    pass


class NotDyadicError(ArborError):
    pass


class ResourceGuardError(ArborError):
    """An exhaustive enumeration was requested beyond the configured size limit."""


class InvalidModelError(ArborError):
    pass


class TheoremInapplicableError(ArborError):
    """The model lacks split-exchangeability or plane-invariance."""


class InvalidPairError(ArborError):
    pass
