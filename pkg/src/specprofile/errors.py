"""Exception types.

Class names double as the error codes printed by the command line tool,
so they are kept short and match the names used in reports.
"""


class SpecProfileError(Exception):
    """Base class for every error raised by this package."""

    @property
    def code(self):
        return type(self).__name__


class DuplicateEdge(SpecProfileError, ValueError):
    pass


class NonpositiveWeight(SpecProfileError, ValueError):
    pass


class IsolatedVertex(SpecProfileError, ValueError):
    pass


class VertexOutOfRange(SpecProfileError, ValueError):
    pass


class EmptySet(SpecProfileError, ValueError):
    pass


class Disconnected(SpecProfileError, ValueError):
    pass


class SingletonFullGraph(SpecProfileError, ValueError):
    pass


class SingletonGraph(SpecProfileError, ValueError):
    pass


class TooLargeForExact(SpecProfileError, ValueError):
    pass


class NegativeTime(SpecProfileError, ValueError):
    pass


class KTooSmall(SpecProfileError, ValueError):
    pass


class KTooLargeForDense(SpecProfileError, ValueError):
    pass


class KOutOfRange(SpecProfileError, ValueError):
    pass


class BadPieceLabel(SpecProfileError, ValueError):
    pass


class PartialMap(SpecProfileError, ValueError):
    pass


class BadInputFile(SpecProfileError, ValueError):
    pass


class UnknownSubcommand(SpecProfileError, ValueError):
    pass
