"""Exception hierarchy shared across the toolkit."""


class KgForgeError(Exception):
    """Base class for all toolkit errors."""


# graph store

class FrozenGraph(KgForgeError):
    pass


class DuplicateCurie(KgForgeError):
    pass


class UnknownHandle(KgForgeError):
    pass


class UnknownEndpoint(KgForgeError):
    pass


class SelfLoop(KgForgeError):
    pass


class RepresentativeInAbsorbedSet(KgForgeError):
    pass


class InvalidNode(KgForgeError):
    pass


class InvalidSequence(InvalidNode):
    pass


class InvalidCoordinate(InvalidNode):
    pass


class InvalidLabelSet(InvalidNode):
    pass


# ingest

class MalformedRow(KgForgeError):
    def __init__(self, path, line_no, message):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = path
        self.line_no = line_no


class UnmappedIdentifier(KgForgeError):
    pass


class MissingClassNode(KgForgeError):
    pass


class ConflictingYear(KgForgeError):
    pass


# query language

class QuerySyntaxError(KgForgeError):
    def __init__(self, position, expected, found):
        super().__init__(
            f"syntax error at position {position}: expected {expected}, found {found!r}"
        )
        self.position = position
        self.expected = expected
        self.found = found


class UnboundVariable(KgForgeError):
    pass


class EmptySequence(KgForgeError):
    pass


class EmptySelection(KgForgeError):
    pass


# alignment

class BothEmpty(KgForgeError):
    pass


# link prediction

class NoEdges(KgForgeError):
    pass


class SequenceTooShort(KgForgeError):
    pass


class GraphTooSmall(KgForgeError):
    pass


class ExhaustedSpace(KgForgeError):
    pass


class CategoryNotFound(KgForgeError):
    pass


class EmptyTestSet(KgForgeError):
    pass
