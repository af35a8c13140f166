import json

import pytest

from rgroups.datum import parse_instance
from rgroups.examples import example_datum


@pytest.fixture(scope="session")
def ex_a():
    return example_datum("EX_A")


@pytest.fixture(scope="session")
def ex_b():
    return example_datum("EX_B")


@pytest.fixture(scope="session")
def ex_c():
    return example_datum("EX_C")


@pytest.fixture(scope="session")
def ex_gu3():
    return example_datum("EX_GU3")


@pytest.fixture(scope="session")
def ex_odd():
    return example_datum("EX_ODD")


def make_datum(
    family="GSp_even",
    gamma_rank=2,
    m=0,
    blocks=(),
    classes=(),
    x_rho=(),
):
    """Convenience builder: classes as (label, size, dual, omega, x_holds)."""
    doc = {
        "family": family,
        "gamma_rank": gamma_rank,
        "m": m,
        "blocks": [{"size": size, "class": label} for size, label in blocks],
        "classes": {
            label: {
                "size": size,
                "eps_dual": dual,
                "omega": omega,
                "x_holds": x_holds,
            }
            for label, size, dual, omega, x_holds in classes
        },
        "x_rho_generators": list(x_rho),
    }
    return parse_instance(json.dumps(doc))


@pytest.fixture(scope="session")
def twin_blocks():
    """Two equivalent self-dual blocks, trivial omega, reducible rank-one."""
    return make_datum(
        blocks=[(1, "c1"), (1, "c1")],
        classes=[("c1", 1, "c1", "00", True)],
    )


@pytest.fixture(scope="session")
def twin_blocks_irreducible():
    """Two equivalent self-dual blocks with x_holds false."""
    return make_datum(
        blocks=[(1, "c1"), (1, "c1")],
        classes=[("c1", 1, "c1", "00", False)],
    )
