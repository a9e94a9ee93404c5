"""Exception types raised across the package."""


class GridMismatchError(ValueError):
    """Fields or tables that must share a grid do not."""


class AliasingError(ValueError):
    """A medium or field carries spectral content the grid cannot represent."""


class WindowError(ValueError):
    """A windowed (non-periodic) medium was evaluated outside its window."""


class StabilityError(ValueError):
    """Requested time step exceeds the solver's stability gate."""

    def __init__(self, dt, limit, solver):
        self.dt = dt
        self.limit = limit
        self.solver = solver
        super().__init__(
            f"{solver}: dt={dt:.6g} exceeds the stability limit {limit:.6g}"
        )


class SolverAbort(RuntimeError):
    """Non-finite values appeared during time integration."""

    def __init__(self, step, t, solver):
        self.step = step
        self.t = t
        self.solver = solver
        super().__init__(f"{solver}: non-finite state at step {step} (t={t:.6g})")


class ReferenceZeroError(ValueError):
    """Field reconstruction was asked to normalise by a field zero."""
