import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from shintani_cones.nf_core import construct_field
from shintani_cones.shintani import AlphaTable, UnitSystem, build_signed_domain

sys.path.insert(0, str(Path(__file__).parent))

ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"

CUBIC = [-1, 0, 1, 1]          # g^3 + g^2 - 1
QUARTIC = [-1, 1, 0, 0, 1]     # g^4 + g - 1


@pytest.fixture(scope="session")
def cubic():
    return construct_field(CUBIC)


@pytest.fixture(scope="session")
def quartic():
    return construct_field(QUARTIC)


@pytest.fixture(scope="session")
def cubic_units(cubic):
    return UnitSystem.from_units([cubic.gen])


@pytest.fixture(scope="session")
def quartic_units(quartic):
    h = quartic.gen
    return UnitSystem.from_units([h * h, h * h + 1])


def example1_alphas(k):
    g = k.gen
    return [k.one, 2 * g * g + 2 * g + 1, 2 * g + 1]


def example2_alphas(k):
    g = k.gen
    return [k.one, g * g + g, g]


def example3_alphas(k):
    h = k.gen
    return [k.one, h * h - h + 1, h * h + h]


@pytest.fixture(scope="session")
def example1(cubic, cubic_units):
    return build_signed_domain(cubic, cubic_units, AlphaTable.from_alphas(example1_alphas(cubic)))


@pytest.fixture(scope="session")
def example2(cubic, cubic_units):
    return build_signed_domain(cubic, cubic_units, AlphaTable.from_alphas(example2_alphas(cubic)))


@pytest.fixture(scope="session")
def example3(quartic, quartic_units):
    return build_signed_domain(quartic, quartic_units, AlphaTable.from_alphas(example3_alphas(quartic)))


def random_cubic_unit_systems(count: int, seed: int = 2024):
    """``count`` unit systems ``<eps>`` in distinct cubic fields with one complex place.

    Fields are ``x^3 + a x^2 + b x + c`` with ``c = +-1`` (so the generator is
    a unit), negative discriminant and no rational root; ``eps`` is a random
    nonzero power of the generator's square, or of the generator itself when
    its real embedding is positive.
    """
    rng = random.Random(seed)
    out, seen = [], set()
    while len(out) < count:
        a, b, c = rng.randint(-6, 6), rng.randint(-6, 6), rng.choice((-1, 1))
        if (a, b, c) in seen:
            continue
        seen.add((a, b, c))
        disc = a * a * b * b - 4 * b ** 3 - 4 * a ** 3 * c - 27 * c * c + 18 * a * b * c
        if disc >= 0 or 1 + a + b + c == 0 or -1 + a - b + c == 0:
            continue
        k = construct_field([c, b, a, 1])
        g = k.gen
        base = g if k.root_assignment()[1].real > 0 else g * g
        e = rng.choice((-2, -1, 1, 2))
        out.append(UnitSystem.from_units([base ** e]))
    return out


def random_rational(rng, bound=50, den=20):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, den))


# -- acceptance reporting -------------------------------------------------------

ACCEPTANCE_LINES: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def acceptance():
    def record(number: int, ok: bool, detail: str):
        prev = ACCEPTANCE_LINES.get(number)
        if prev is not None:
            ok = ok and prev[0]
            detail = f"{prev[1]}; {detail}"
        ACCEPTANCE_LINES[number] = (ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        ok, detail = ACCEPTANCE_LINES[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
