import numpy as np
import pytest


def float_gram_is_scaled_identity(exponents, modulus, atol=1e-9):
    """Floating-point oracle for B B^H = P I, independent of the exact checker."""
    B = np.exp(2j * np.pi * np.asarray(exponents) / modulus)
    G = B @ B.conj().T
    return np.allclose(G, B.shape[1] * np.eye(B.shape[0]), atol=atol)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record one acceptance criterion outcome, print it, and assert it."""

    def record(name: str, ok: bool, detail: str = ""):
        _ACCEPTANCE[name] = (bool(ok), detail)
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
        assert ok, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: (int(s.split()[1].rstrip("abc")), s)):
        ok, detail = _ACCEPTANCE[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
