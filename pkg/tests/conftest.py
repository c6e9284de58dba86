import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from quotlab.field import QQ  # noqa: E402
from quotlab.poly import DualElement, _monomials  # noqa: E402
from quotlab.tuples import CommTuple  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small = st.integers(-3, 3)


def _matmul(a, b):
    d = len(a)
    return [[sum(a[r][k] * b[k][c] for k in range(d)) for c in range(d)] for r in range(d)]


def _poly_of(a, coeffs):
    d = len(a)
    out = [[coeffs[0] if r == c else 0 for c in range(d)] for r in range(d)]
    power = a
    for c in coeffs[1:]:
        out = [[out[r][k] + c * power[r][k] for k in range(d)] for r in range(d)]
        power = _matmul(power, a)
    return out


@st.composite
def commuting_tuples(draw, max_n=3, max_d=4, nilpotent=False):
    """n polynomials in one matrix A; nilpotent A and no constant terms when asked."""
    n = draw(st.integers(1, max_n))
    d = draw(st.integers(1, max_d))
    if nilpotent:
        a = [[draw(small) if c > r else 0 for c in range(d)] for r in range(d)]
    else:
        a = [[draw(small) for _ in range(d)] for _ in range(d)]
    mats = []
    for _ in range(n):
        coeffs = [0 if nilpotent else draw(small)] + [draw(small) for _ in range(2)]
        mats.append(_poly_of(a, coeffs))
    return CommTuple.from_rows(mats)


@st.composite
def dual_generators(draw, max_n=3, max_r=3, max_deg=3, max_gens=3):
    """Homogeneous dual generators in z_1..z_n with small integer coefficients."""
    n = draw(st.integers(1, max_n))
    r = draw(st.integers(1, max_r))
    count = draw(st.integers(1, max_gens))
    sigmas = []
    for _ in range(count):
        k = draw(st.integers(0, max_deg))
        keys = [(g, m) for g in range(r) for m in _monomials(n, k)]
        chosen = draw(st.lists(st.sampled_from(keys), min_size=1, max_size=4, unique=True))
        terms = {key: QQ(draw(st.integers(1, 4)) * draw(st.sampled_from([1, -1]))) for key in chosen}
        sigmas.append(DualElement.make(n, r, terms))
    return n, r, sigmas


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
