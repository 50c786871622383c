import random

from hypothesis import strategies as st

from unlinkbound.fuzz import random_diagram


def diagrams(max_crossings: int = 12, scramble: int = 4):
    """Random scrambled braid closures, keyed by a seed so failures shrink to a seed."""
    return st.integers(0, 2**32 - 1).map(
        lambda s: random_diagram(random.Random(s), max_crossings=max_crossings, scramble=scramble)
    )
