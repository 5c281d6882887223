"""Exception hierarchy shared by every compiler stage."""


class ColfError(Exception):
    """Base class for static errors.  ``pos`` is a ``(line, col)`` pair or None."""

    kind = "error"

    def __init__(self, message, pos=None):
        super().__init__(message)
        self.message = message
        self.pos = pos

    def render(self, filename="<input>"):
        if self.pos is None:
            return f"{filename}: {self.kind}: {self.message}"
        line, col = self.pos
        return f"{filename}:{line}:{col}: {self.kind}: {self.message}"


class ParseError(ColfError):
    kind = "parse error"


class ClassifyError(ColfError):
    kind = "classification error"


class ElabError(ColfError):
    kind = "elaboration error"


class ModeDeclError(ColfError):
    kind = "mode declaration error"


class ModeError(ColfError):
    """A clause violates the single-producer discipline.

    ``code`` is one of TwoProducers, NoProducer, NonlinearInput,
    NonVariablePremiseOutput; ``subject`` names the offending variable
    (or premise).
    """

    kind = "mode error"

    def __init__(self, code, subject, clause, pos=None):
        super().__init__(f"{code}({subject}) in clause {clause}", pos)
        self.code = code
        self.subject = subject
        self.clause = clause


class UniquenessError(ColfError):
    """``code`` is ActionMismatch or Overlap."""

    kind = "uniqueness error"

    def __init__(self, code, message, pos=None):
        super().__init__(f"{code}: {message}", pos)
        self.code = code


class RuntimeFault(Exception):
    """Raised by the runtime; never expected for checked programs except StuckProcess."""


class StuckProcess(RuntimeFault):
    def __init__(self, relation, constructor, partial=None):
        super().__init__(
            f"StuckProcess: {relation} read constructor {constructor!r} with no matching branch"
        )
        self.relation = relation
        self.constructor = constructor
        self.partial = partial


class DoubleWrite(RuntimeFault, AssertionError):
    pass


class CycleDetected(RuntimeFault, AssertionError):
    pass
