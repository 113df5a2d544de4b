import pytest

from mipcert.galgebra import GroupAlgebra
from mipcert.mipverify import brute_force_iso_search, run_pipeline
from mipcert.pcgroup import build_G, build_H

# criterion number -> list of (label, passed); filled by test_acceptance.py
ACCEPTANCE: dict[int, list[tuple[str, bool]]] = {}


@pytest.fixture(scope="session")
def G43():
    return build_G(4, 3)


@pytest.fixture(scope="session")
def H43():
    return build_H(4, 3)


@pytest.fixture(scope="session")
def kG43(G43):
    return GroupAlgebra(G43)


@pytest.fixture(scope="session")
def kH43(H43):
    return GroupAlgebra(H43)


@pytest.fixture(scope="session")
def pipeline43():
    return run_pipeline(4, 3, seed=0)


@pytest.fixture(scope="session")
def oracle43(G43, H43):
    return brute_force_iso_search(G43, H43)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        results = ACCEPTANCE[k]
        ok = all(p for _, p in results)
        detail = "; ".join(f"{label}: {'ok' if p else 'FAILED'}" for label, p in results)
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} ({detail})")
