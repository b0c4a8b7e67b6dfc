import json
from pathlib import Path

import pytest

from vcsqse import assemble_hamiltonian, load_sweep, parse_fcidump
from vcsqse.operators import fermion_to_dense, symmetry_operator

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


@pytest.fixture(scope="session")
def sto3g_path():
    return FIXTURES / "h2_sto3g" / "h2_sto3g_r0.7414.fcidump"


@pytest.fixture(scope="session")
def sto3g_ints(sto3g_path):
    return parse_fcidump(sto3g_path.read_text())


@pytest.fixture(scope="session")
def sto3g_reference():
    data = json.loads((FIXTURES / "h2_sto3g" / "references.json").read_text())
    return data["h2_sto3g_r0.7414.fcidump"]


@pytest.fixture(scope="session")
def sweep_manifest():
    return FIXTURES / "h2_sto6g" / "sweep.manifest"


@pytest.fixture(scope="session")
def sweep_points(sweep_manifest):
    return load_sweep(sweep_manifest)


@pytest.fixture(scope="session")
def sweep_dense(sweep_points):
    """(R, dense H, integrals) per sweep point, assembled once."""
    return [(pt.bond_length,
             fermion_to_dense(assemble_hamiltonian(pt.integrals)),
             pt.integrals) for pt in sweep_points]


@pytest.fixture(scope="session")
def sym_dense():
    return {name: fermion_to_dense(symmetry_operator(name, 4))
            for name in ("number", "sz", "s_squared")}


@pytest.fixture(scope="session")
def configs_dir():
    return ROOT / "configs"
