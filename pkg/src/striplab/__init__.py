"""striplab: strip deformations of small hyperbolic surfaces.

Builds hyperbolic structures on the thrice-punctured sphere and the
once-punctured torus (boundary, cone and cusp-limit flavors), traces
geodesics through arc tilings, evaluates infinitesimal strip deformations
two independent ways, and certifies local convexity of the resulting
hypersurface at every diagonal flip.
"""

from ._backend import backend_name
from .convexity import (
    FlipReport,
    build_killing_assignment,
    killing_criterion_check,
    midpoint_counterexample,
    parabolic_ratio_check,
    solve_flip_relation,
    velocities_sphere,
    velocities_torus,
)
from .figure import FigureMesh, PhiMap, build_figure_mesh, write_obj
from .strip_map import (
    finite_strip_holonomy,
    strip_vector_fd,
    strip_vector_sine,
    trace_crossings,
)
from .surfaces import (
    SpherePanel,
    TorusPanel,
    build_cusp_family,
    build_sphere,
    build_torus,
)

__version__ = "0.1.0"

__all__ = [
    "FigureMesh",
    "FlipReport",
    "PhiMap",
    "SpherePanel",
    "TorusPanel",
    "backend_name",
    "build_cusp_family",
    "build_figure_mesh",
    "build_killing_assignment",
    "build_sphere",
    "build_torus",
    "finite_strip_holonomy",
    "killing_criterion_check",
    "midpoint_counterexample",
    "parabolic_ratio_check",
    "solve_flip_relation",
    "strip_vector_fd",
    "strip_vector_sine",
    "trace_crossings",
    "velocities_sphere",
    "velocities_torus",
    "write_obj",
    "__version__",
]
