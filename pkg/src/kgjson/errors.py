"""Exception hierarchy shared by every kgjson module."""


class KgJsonError(Exception):
    """Base class for all errors raised by kgjson."""


class MalformedLine(KgJsonError, ValueError):
    def __init__(self, line_no, reason="malformed line"):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class NonIriSubject(MalformedLine):
    def __init__(self, line_no, position="subject"):
        super().__init__(line_no, f"literal in {position} position")
        self.position = position


class AmbiguousPrefix(KgJsonError, ValueError):
    pass


class DocumentTooLarge(KgJsonError):
    def __init__(self, doc_id, size, limit):
        super().__init__(f"document {doc_id!r} is {size} bytes, limit is {limit}")
        self.doc_id = doc_id
        self.size = size
        self.limit = limit


class MalformedDocument(KgJsonError, ValueError):
    def __init__(self, line_no, reason="malformed document"):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no


class MissingId(MalformedDocument):
    def __init__(self, line_no):
        super().__init__(line_no, 'document has no "id" pair')


class DuplicateId(KgJsonError, ValueError):
    def __init__(self, doc_id):
        super().__init__(f"duplicate document id {doc_id!r}")
        self.doc_id = doc_id


class SchemaViolation(KgJsonError, ValueError):
    def __init__(self, doc_id, reason):
        super().__init__(f"document {doc_id!r}: {reason}")
        self.doc_id = doc_id
        self.reason = reason


class NotACnvStore(KgJsonError, TypeError):
    pass


class QuerySyntaxError(KgJsonError, ValueError):
    def __init__(self, position, reason):
        super().__init__(f"position {position}: {reason}")
        self.position = position
        self.reason = reason


class UnboundProjection(KgJsonError, ValueError):
    def __init__(self, var):
        super().__init__(f"projected variable ?{var} does not occur in the pattern")
        self.var = var


class NoSharedVariable(KgJsonError, ValueError):
    pass


class StrategyMismatch(KgJsonError, ValueError):
    def __init__(self, strategy, representation):
        super().__init__(f"strategy {strategy} cannot run on a {representation} store")
        self.strategy = strategy
        self.representation = representation


class ChainTooLong(KgJsonError, ValueError):
    def __init__(self, length, max_depth):
        super().__init__(f"chain of {length} patterns exceeds max depth {max_depth}")
        self.length = length
        self.max_depth = max_depth


class QueryTimeout(KgJsonError):
    pass


class ResultMismatch(KgJsonError):
    def __init__(self, query_id, store_a, store_b):
        super().__init__(f"{query_id}: results differ between {store_a} and {store_b}")
        self.query_id = query_id
        self.store_a = store_a
        self.store_b = store_b
