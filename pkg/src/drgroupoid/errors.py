"""Exception types.

``InputError`` subclasses are caller mistakes (bad files, bad points, calling an
operation outside its precondition); the CLI maps them to exit code 2.
"""

from __future__ import annotations


class DRError(Exception):
    """Base class for every error raised by this package."""


class InputError(DRError):
    pass


class BadIndex(InputError):
    def __init__(self, what):
        self.what = what
        super().__init__(f"unknown point or index: {what!r}")


class NonCommuting(InputError):
    def __init__(self, i, j, x):
        self.i, self.j, self.x = i, j, x
        super().__init__(f"maps T{i} and T{j} do not commute at point {x!r}")


class NotInvariant(InputError):
    def __init__(self, point, i):
        self.point, self.i = point, i
        super().__init__(f"set is not invariant: T{i}({point!r}) leaves it")


class DimensionMismatch(InputError):
    def __init__(self, expected, got):
        self.expected, self.got = expected, got
        super().__init__(f"dimension mismatch: expected {expected}, got {got}")


class NotComposable(InputError):
    def __init__(self, left, right):
        super().__init__(f"elements are not composable: {left} . {right}")


class LatticeMismatch(InputError):
    pass


class EmptySet(InputError):
    pass


class NotSeparable(InputError):
    pass


class MixedQuasiOrbits(InputError):
    pass


class SupportNotInLattice(InputError):
    pass


class SourceMismatch(InputError):
    pass


class SourcelessVertex(InputError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"vertex {vertex!r} starts no edge")


class DuplicateQuasiOrbit(InputError):
    def __init__(self, reps):
        self.reps = reps
        super().__init__("representatives share a quasi-orbit: " + ", ".join(map(str, reps)))


class BoundTooSmall(DRError):
    def __init__(self, bound):
        self.bound = bound
        super().__init__(f"minimal-pair search bound {bound} is too small")


class BatteryFailure(DRError):
    def __init__(self, identity, inputs, residual, report=None):
        self.identity = identity
        self.inputs = inputs
        self.residual = residual
        self.report = report
        super().__init__(f"identity ({identity}) failed with residual {residual:.3e}: {inputs}")


class VerificationFailure(DRError):
    pass
