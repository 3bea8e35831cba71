"""Exception hierarchy shared by every latspec module."""


class LatspecError(Exception):
    """Base class for all errors raised by latspec."""


class PosetError(LatspecError):
    """Malformed order data: cycles, bad indices, ordering violations."""


class CycleError(PosetError):
    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("cover relation contains a cycle through %s" % (self.cycle,))


class OrderingError(PosetError):
    """Indexing is not a linear extension of the order."""


class MissingMeetError(LatspecError):
    def __init__(self, i, j, kind="meet"):
        self.pair = (i, j)
        self.kind = kind
        super().__init__("%s of elements %d and %d does not exist" % (kind, i, j))


class HypothesisError(LatspecError):
    """A hypothesis required by the requested computation fails."""


class ParseError(LatspecError):
    def __init__(self, message, line, column=1):
        self.line = line
        self.column = column
        super().__init__("line %d, column %d: %s" % (line, column, message))
