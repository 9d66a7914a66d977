"""Decoherence from imperfect clocks and the gravitational limits it puts on quantum computers."""

__version__ = "0.1.0"

from .errors import DomainError, HorizonError, InstabilityError, ShapeError  # noqa: E402
from .numerics import LogScalar, RangeFlag  # noqa: E402
from .physics import CODATA2018, ComputerSpec, PhysConstants, preset  # noqa: E402
from .limits import BoundReport, bound_report  # noqa: E402
