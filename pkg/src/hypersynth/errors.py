"""Exception hierarchy shared across the package."""


class HypersynthError(Exception):
    """Base class for all errors raised by this package."""


# --- plant validation ---------------------------------------------------


class PlantError(HypersynthError):
    pass


class DeadlockState(PlantError):
    def __init__(self, state: str):
        super().__init__(f"state {state!r} has no outgoing transition")
        self.state = state


class OverlappingEdge(PlantError):
    def __init__(self, edge: tuple):
        super().__init__(f"edge {edge!r} is both controllable and uncontrollable")
        self.edge = edge


class DanglingReference(PlantError):
    def __init__(self, what: str):
        super().__init__(f"reference to unknown state: {what}")
        self.what = what


class NotAcyclic(PlantError):
    def __init__(self):
        super().__init__("operation requires a tree or acyclic frame")


class PlantFormatError(PlantError):
    """Malformed plant JSON."""


# --- formula handling ---------------------------------------------------


class FormulaError(HypersynthError):
    pass


class ParseError(FormulaError):
    def __init__(self, message: str, position: int, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.position = position
        self.line = line
        self.column = column


class UnboundVariable(FormulaError):
    def __init__(self, name: str):
        super().__init__(f"trace variable {name!r} is not bound by the prefix")
        self.name = name


class DuplicateQuantifier(FormulaError):
    def __init__(self, name: str):
        super().__init__(f"trace variable {name!r} bound more than once")
        self.name = name


# --- evaluation ---------------------------------------------------------


class HorizonExceeded(HypersynthError):
    def __init__(self, needed: int, limit: int):
        super().__init__(
            f"joint unrolling needs {needed} position evaluations, limit is {limit}"
        )
        self.needed = needed
        self.limit = limit


# --- synthesis ----------------------------------------------------------


class SynthesisError(HypersynthError):
    pass


class DeadlockIntroduced(SynthesisError):
    def __init__(self, state: str):
        super().__init__(f"pruning removes the last outgoing edge of state {state!r}")
        self.state = state


class FragmentMismatch(SynthesisError):
    def __init__(self, expected: str, got: str):
        super().__init__(f"algorithm requires a {expected} prefix, got {got}")
        self.expected = expected
        self.got = got


class FrameMismatch(SynthesisError):
    def __init__(self, expected: str, got: str):
        super().__init__(f"algorithm requires a {expected} frame, got {got}")
        self.expected = expected
        self.got = got


class CandidateSpaceExceeded(SynthesisError):
    def __init__(self, bits: float, limit: int):
        super().__init__(
            f"candidate space is about 2^{bits:.1f}, guard allows 2^{limit}; "
            "raise the guard explicitly to search anyway"
        )
        self.bits = bits
        self.limit = limit


# --- reductions ---------------------------------------------------------


class ReductionError(HypersynthError):
    pass


class NotHorn(ReductionError):
    def __init__(self, clause):
        super().__init__(f"clause {clause!r} has more than one positive literal")
        self.clause = clause


class NotNormalized(ReductionError):
    def __init__(self, clause):
        super().__init__(f"clause {clause!r} is not in two-negative one-positive form")
        self.clause = clause


class ArityMismatch(ReductionError):
    def __init__(self, clause, why: str):
        super().__init__(f"clause {clause!r}: {why}")
        self.clause = clause


class PrefixNotExistsLeading(ReductionError):
    def __init__(self):
        super().__init__("QBF prefix must start with an existential block")


class DimacsError(ReductionError):
    """Malformed DIMACS / QDIMACS input."""


class DecoderMismatch(ReductionError):
    def __init__(self, why: str):
        super().__init__(why)


# --- case study ---------------------------------------------------------


class ConfigInvalid(HypersynthError):
    pass


class PartialStrategy(HypersynthError):
    def __init__(self, state: str, why: str):
        super().__init__(f"strategy undefined or infeasible at state {state!r}: {why}")
        self.state = state
