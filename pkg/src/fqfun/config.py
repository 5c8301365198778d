"""Run configuration and the global size guard.

Every exhaustive routine in the package (field construction, point
enumeration, subgroup closures, search families, ...) checks the number of
objects it is about to enumerate against a single configured bound.  Going
over the bound raises GuardExceeded; nothing is ever truncated silently.
"""

from dataclasses import dataclass

DEFAULT_GUARD = 10**6


class GuardExceeded(Exception):
    """An enumeration would exceed the configured size guard."""


@dataclass(frozen=True)
class RunConfig:
    """Knobs shared by the CLI and the compute modules.

    guard    -- max number of objects any single enumeration may touch
    workers  -- worker processes for the partitionable searches
    json_out -- machine readable output instead of human tables
    seed     -- seed for sampled property checks (never affects results)
    """

    guard: int = DEFAULT_GUARD
    workers: int = 1
    json_out: bool = False
    seed: int = 0


DEFAULT_CONFIG = RunConfig()


def check_guard(size, what, config=None):
    """Raise GuardExceeded unless ``size`` objects fit under the guard."""
    bound = (config or DEFAULT_CONFIG).guard
    if size > bound:
        raise GuardExceeded(
            f"{what}: would enumerate {size} objects, guard is {bound}"
        )
    return size
