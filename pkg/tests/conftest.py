"""Shared fixtures: working intervals and a catalog of test generators."""

import numpy as np
import pytest

from qameans.envelope import _reconstruct_from_values
from qameans.generators import (
    ExpGenerator,
    IdentityGenerator,
    LogGenerator,
    PowerGenerator,
    TabulatedGenerator,
)
from qameans.grids import WorkingInterval


@pytest.fixture(scope="session")
def iv():
    """Default positive working interval used by the closed-form catalog."""
    return WorkingInterval(0.1, 10.0)


@pytest.fixture(scope="session")
def iv13():
    """Interval for the built-from-profile cases with hand-computed answers."""
    return WorkingInterval(1.0, 3.0)


@pytest.fixture(scope="session")
def catalog(iv):
    """Closed-form generators keyed by name, all on the same interval."""
    return {
        "power:-1": PowerGenerator(-1.0, iv),
        "log": LogGenerator(iv),
        "power:0.5": PowerGenerator(0.5, iv),
        "id": IdentityGenerator(iv),
        "power:2": PowerGenerator(2.0, iv),
        "power:3": PowerGenerator(3.0, iv),
        "exp": ExpGenerator(iv),
    }


def build_from_profile(profile_values, interval, name):
    """Generator whose curvature ratio g'/g'' equals the given grid profile.

    Solves the reconstruction quadrature and stores the implied second
    derivative g'' = g'/m alongside, so the stored grids satisfy the profile
    identity to the last bit.
    """
    m0 = np.asarray(profile_values, dtype=float)
    g, g1 = _reconstruct_from_values(m0, interval)
    return TabulatedGenerator(
        interval, g.values, g1.values, g1.values / m0, source=name
    )


@pytest.fixture(scope="session")
def rho_x2_gen(iv13):
    """Convex-envelope input with curvature profile x^2 on [1, 3].

    x^2 is positive but convex, so the least concave majorant of the profile
    is the chord through (1, 1) and (3, 9), which is 4x - 3.
    """
    xs = iv13.grid()
    return build_from_profile(xs**2, iv13, "rho-x2")


@pytest.fixture(scope="session")
def rho_neg_x2_gen(iv13):
    """Concave-envelope input with curvature profile -x^2 on [1, 3].

    The greatest convex minorant of -x^2 is the chord through (1, -1) and
    (3, -9), which is 3 - 4x.
    """
    xs = iv13.grid()
    return build_from_profile(-(xs**2), iv13, "rho-neg-x2")


@pytest.fixture(scope="session")
def tent_profile_gen(iv13):
    """Input whose curvature profile 2 - |x - 2| is already concave positive.

    The profile has a kink at x = 2 (an interior hull vertex), which makes it
    the reference case for behavior near hull corners.
    """
    xs = iv13.grid()
    return build_from_profile(2.0 - np.abs(xs - 2.0), iv13, "tent")


@pytest.fixture(scope="session")
def neither_cubic():
    """x^3 tabulated on [-1, 1.5]: f''/f' changes sign inside the interval.

    Strictly increasing, but the curvature ratio x/2 crosses zero, so the
    mean is neither convex nor concave. Derivative grids are exact.
    """
    ivc = WorkingInterval(-1.0, 1.5)
    xs = ivc.grid()
    return TabulatedGenerator(ivc, xs**3, 3.0 * xs**2, 6.0 * xs, source="cubic")


@pytest.fixture(scope="session")
def nonsmooth_cubic():
    """x^3 tabulated on [-0.001, 10]: ratio sign flip on a tiny subinterval.

    Random sampling of the domination gate essentially never lands inside the
    negative sliver, so the gate passes while the profile still changes sign.
    """
    ivn = WorkingInterval(-0.001, 10.0)
    xs = ivn.grid()
    return TabulatedGenerator(ivn, xs**3, 3.0 * xs**2, 6.0 * xs, source="cubic-sliver")
