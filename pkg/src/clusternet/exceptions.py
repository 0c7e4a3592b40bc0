"""Exception hierarchy shared by all clusternet modules."""


class ClusterNetError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(ClusterNetError, ValueError):
    pass


class NoPositiveGrading(ClusterNetError):
    """No strictly positive grading was found by the bounded search."""


class CapExceeded(ClusterNetError):
    """An enumeration exceeded its configured bound.

    Parameters
    ----------
    what : str
        Name of the enumeration that hit the cap.
    cap : int
        The configured bound.
    count : int
        Number of items produced before aborting.
    """

    def __init__(self, what, cap, count):
        self.what = what
        self.cap = cap
        self.count = count
        super().__init__(f"{what}: cap {cap} exceeded after {count} items")


class NodeCapExceeded(CapExceeded):
    def __init__(self, cap, count):
        super().__init__("cluster graph nodes", cap, count)


class ArcCapExceeded(CapExceeded):
    def __init__(self, cap, count):
        super().__init__("cluster graph arcs", cap, count)


class ContractError(ClusterNetError):
    """A precondition of an internal routine was violated (a bug in the caller)."""


class NotConnected(ClusterNetError):
    pass


class MissingNode(ClusterNetError):
    """A queried state's cluster is not part of the cluster graph."""


class ParseError(ClusterNetError):
    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(f"{message} at offset {offset}")


class UnknownSpecies(ParseError):
    def __init__(self, name, offset):
        self.name = name
        super().__init__(f"unknown species {name!r}", offset)


class StateSyntaxError(ParseError):
    pass


class ModelError(ClusterNetError):
    """A model or graph file is malformed."""
