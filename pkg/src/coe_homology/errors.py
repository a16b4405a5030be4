"""Exception hierarchy. Verification failures are report content, not exceptions."""


class CoeHomologyError(Exception):
    """Base class for all errors raised by this package."""


class AxiomViolation(CoeHomologyError, ValueError):
    """A group table or action table breaks an axiom."""

    def __init__(self, axiom: str, witness=None, message: str = ""):
        self.axiom = axiom
        self.witness = witness
        super().__init__(message or "%s axiom violated (witness %r)" % (axiom, witness))


class HypothesisViolation(CoeHomologyError, ValueError):
    """An operation needs topologically free actions (or a verified link) and did not get one."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class OrbitMismatch(CoeHomologyError, ValueError):
    """phi(gx) does not lie in the H-orbit of phi(x)."""

    def __init__(self, witness):
        self.witness = witness
        super().__init__("phi(g x) is outside the H-orbit of phi(x) for (g, x) = %r" % (witness,))


class UnverifiedLink(HypothesisViolation):
    pass


class ModuleKindError(CoeHomologyError, TypeError):
    pass


class SpaceMismatch(CoeHomologyError, ValueError):
    pass


class ResourceLimit(CoeHomologyError):
    """A desk-scale cap (degree, size, LP dimension) would be exceeded."""

    def __init__(self, what: str, value: int, cap: int):
        self.what, self.value, self.cap = what, value, cap
        super().__init__("%s = %d exceeds cap %d" % (what, value, cap))


class InstanceError(CoeHomologyError, ValueError):
    """Malformed or unresolvable instance document."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        if line is not None:
            message = "line %d column %d: %s" % (line, column or 0, message)
        super().__init__(message)


class UnresolvedReference(InstanceError):
    pass
