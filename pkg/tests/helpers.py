import math

from hypothesis import strategies as st

from lpslice.schemas.domain import canonicalize

SQRT2 = math.sqrt(2.0)

raw_vectors = st.lists(
    st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False),
    min_size=1,
    max_size=8,
).filter(lambda xs: max(abs(x) for x in xs) > 1e-3)

canonical_directions = raw_vectors.map(canonicalize)


def within(estimate, value, k=4.0, floor=0.0):
    """Monte Carlo estimate within k standard errors of value (or the absolute floor)"""
    return abs(estimate.mean - value) <= max(k * estimate.std_error, floor)
