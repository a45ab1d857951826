import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import cltkit


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the jit kernels once so timed sections measure steady state."""
    seq = cltkit.fixture("mixed_two_families")
    cltkit.simulate_normalized_sums(seq, 4, 8, 0)
    cltkit.estimate_cauchy_gap_probability(seq, 2, 4, 0.5, 1000, 0)
