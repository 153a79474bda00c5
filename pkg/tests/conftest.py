import numpy as np
import pytest

from twheis.field import field_make


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=[(3, 1), (5, 1), (7, 1), (3, 2), (5, 2)], ids=lambda pk: f"GF{pk[0]}^{pk[1]}")
def field(request):
    return field_make(*request.param)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
