"""Schedulability analysis for self-suspending fixed-priority task sets.

Thin wrapper over the compiled core. Every function takes and returns JSON
strings; pair with ``json.loads``/``json.dumps`` as needed.
"""

from ._core import (
    __version__,
    adversarial_scenario,
    analyze,
    figure1,
    generate_tasksets,
    random_scenario,
    simulate,
    synchronous_scenario,
    verify,
)

__all__ = [
    "__version__",
    "adversarial_scenario",
    "analyze",
    "figure1",
    "generate_tasksets",
    "random_scenario",
    "simulate",
    "synchronous_scenario",
    "verify",
]
