"""Distribution frames on a truncated rigged Hilbert space, as matrix computations."""

__version__ = "0.1.0"

from .distmap import (  # noqa: E402
    DistributionMap,
    analysis,
    auto_grid,
    builtin_map,
    map_from_samples,
    synthesis,
    transform_map,
)
from .frameops import (  # noqa: E402
    FrameReport,
    Tolerances,
    canonical_dual,
    classify,
    frame_bounds,
    frame_operator,
    reconstruction_residual,
    unboundedness_sweep,
)
from .quadrature import make_grid  # noqa: E402
from .testspace import hermite_space  # noqa: E402
