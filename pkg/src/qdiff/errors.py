"""Exception hierarchy.

Every exception carries a stable ``code`` string; the command line maps
these to exit codes and prints them in machine-readable form.
"""


class QDiffError(Exception):
    code = "error"


# -- expressions ------------------------------------------------------------

class ExprSyntaxError(QDiffError, ValueError):
    code = "syntax_error"

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownIdentifier(ExprSyntaxError):
    code = "unknown_identifier"


class NonIntegerExponent(ExprSyntaxError):
    code = "non_integer_exponent"


class PoleError(QDiffError, ArithmeticError):
    """A divisor vanished during evaluation.

    ``node`` is the preorder index of the offending subexpression.
    """
    code = "pole"

    def __init__(self, node, z):
        super().__init__(f"pole at z={z!r} (subexpression #{node})")
        self.node = node
        self.z = z


class NonFiniteValue(QDiffError, ArithmeticError):
    code = "non_finite"


class PoleOnGrid(QDiffError):
    code = "pole_on_grid"

    def __init__(self, point, which=None):
        label = f" in {which}" if which else ""
        super().__init__(f"pole{label} at grid point {point!r}")
        self.point = point
        self.which = which


# -- series -----------------------------------------------------------------

class PoleInCoefficient(QDiffError):
    code = "pole_in_coefficient"

    def __init__(self, z, which):
        super().__init__(f"coefficient {which} has a pole at z={z!r}")
        self.z = z
        self.which = which


class EnumerationBudgetError(QDiffError, ValueError):
    code = "enumeration_budget"


class UnsupportedCoefficient(QDiffError, ValueError):
    code = "unsupported_coefficient"


# -- operator ---------------------------------------------------------------

class BallViolation(QDiffError, ValueError):
    code = "ball_violation"


class DomainViolation(QDiffError, ValueError):
    code = "domain_violation"


class UnsupportedQ(QDiffError, ValueError):
    code = "unsupported_q"


class Unreachable(QDiffError, ValueError):
    code = "unreachable"

    def __init__(self, tol, message=None):
        super().__init__(message or f"tail tolerance {tol!r} cannot be reached")
        self.tol = tol


# -- solver -----------------------------------------------------------------

class NonConvergence(QDiffError, RuntimeError):
    code = "non_convergence"

    def __init__(self, max_iter, last_change):
        super().__init__(
            f"no convergence after {max_iter} iterations "
            f"(last sup-change {last_change:.3e}); theorem hypotheses are "
            "probably violated")
        self.max_iter = max_iter
        self.last_change = last_change


class BallEscape(QDiffError, RuntimeError):
    code = "ball_escape"

    def __init__(self, point, iteration, value):
        super().__init__(
            f"iterate left the ball at z={point!r}, iteration {iteration} "
            f"(|y|={abs(value):.6g})")
        self.point = point
        self.iteration = iteration
        self.value = value


class ConfigError(QDiffError, ValueError):
    code = "config_error"

    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column
