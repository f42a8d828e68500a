"""Operational noncontextuality bounds from Kochen-Specker exclusivity graphs.

Exact response-function polytopes, their vertex sets, deterministic and
polytope bounds of convex functionals, and the measure-theoretic bound on
the average predictability of eigenstate preparations.
"""

__version__ = "0.1.0"

from .bounds import (  # noqa: E402
    BoundReport,
    OnciSpec,
    builtin_functionals,
    conditional_max,
    derive_onci_bound,
    fit_linear_envelope,
    ks_bound,
    make_onci_spec,
    measure_lower_bound,
    ncycle_aprime_bound,
    polytope_bound,
)
from .functional import Functional, eta_sum, linear_sum  # noqa: E402
from .graphs import (  # noqa: E402
    ExclusivityGraph,
    build_graph,
    builtin_graph,
    complete_to_dimension,
    maximal_cliques,
)
from .polytope import (  # noqa: E402
    HRepPolytope,
    RfVertex,
    build_polytope,
    deterministic_vertices,
    enumerate_vertices,
    max_functional,
    slice,
)
from .quantum import (  # noqa: E402
    QuantumRealization,
    builtin_realization,
    quantum_onci_values,
    quantum_value,
    verify_realization,
    verify_uniform_average,
)
from .scenario import Scenario, builtin_scenario, dump_scenario, load_scenario  # noqa: E402
from .pipeline import run_pipeline, render_report  # noqa: E402
