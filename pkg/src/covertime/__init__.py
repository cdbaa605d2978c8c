"""Electrical networks, Gaussian free fields and continuous-time random walk
local times, with Monte Carlo checks of the Ray-Knight isomorphism and of
cover-time concentration around ``|E| M^2``."""

from .errors import (
    BudgetExceeded,
    CoverTimeError,
    DisconnectedGraph,
    GraphFormatError,
    NonpositiveConductance,
    RejectionBudgetExceeded,
    SampleTooSmall,
    SolverFailure,
    UnknownBaseVertex,
    UnknownVertex,
    UsageError,
)
from .fixtures import fixture
from .gff import GffModel, build_gff, estimate_M, sample_gff, sample_gff_many
from .network import (
    ElectricalNetwork,
    Refinement,
    build_network,
    effective_resistance,
    format_graph,
    parse_graph,
    read_graph,
    refine,
)
from .report import VerificationReport
from .walk import (
    CoverAll,
    FixedJumpCount,
    HitSet,
    InverseLocalTime,
    LocalTimeField,
    cover_times,
    hitting_time_stats,
    simulate_batch,
    simulate_ctrw,
)

__version__ = "0.1.0"
