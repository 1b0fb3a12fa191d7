"""Exception types shared across the package."""


class CylbuckError(Exception):
    """Base class for all numerical/validation failures raised by cylbuck."""


class NoRoot(CylbuckError):
    """Residual does not change sign on the supplied bracket."""


class NonConvergence(CylbuckError):
    """Iterative solver exhausted its iteration budget."""


class SingularSystem(CylbuckError):
    """Quadratic minimization hit a (near-)singular 2x2 Hessian."""


class WindowTooSmall(CylbuckError):
    """Integer wave-number minimizer touched the sweep window boundary."""


class AssemblyDegenerate(CylbuckError):
    """Stiffness matrix of a mode pencil failed positive-definite factorization."""


class ZeroDenominator(CylbuckError):
    """Destabilizing form vanishes on the whole mode space (nothing to buckle)."""


class EmptySet(CylbuckError):
    """No integer wave numbers found within the requested tolerance."""


class QuadratureUnderResolved(CylbuckError):
    """Self-check against a refined rule exceeded tolerance; raise resolution."""
