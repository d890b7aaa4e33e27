import json
import math

import numpy as np
import pytest

from fncode import FunctionSpec, JointSource


def dsbs(p: float) -> JointSource:
    """Uniform binary input, output flipped with probability p."""
    a, d = (1 - p) / 2, p / 2
    return JointSource(pmf=[[a, d], [d, a]])


def mod2_function() -> FunctionSpec:
    return FunctionSpec(table=[[0, 1], [1, 0]], z_size=2)


def identity_function(x_size: int, y_size: int) -> FunctionSpec:
    table = np.arange(x_size * y_size).reshape(x_size, y_size)
    return FunctionSpec(table=table, z_size=x_size * y_size)


def constant_function(x_size: int, y_size: int, z_size: int = 1) -> FunctionSpec:
    return FunctionSpec(table=np.zeros((x_size, y_size), dtype=int), z_size=z_size)


def random_source(rng: np.random.Generator, max_side: int = 5) -> JointSource:
    x_size = int(rng.integers(2, max_side + 1))
    y_size = int(rng.integers(2, max_side + 1))
    pmf = rng.dirichlet(np.ones(x_size * y_size)).reshape(x_size, y_size)
    return JointSource(pmf=pmf)


def random_function(rng: np.random.Generator, src: JointSource) -> FunctionSpec:
    z_size = int(rng.integers(1, src.x_size * src.y_size + 1))
    table = rng.integers(0, z_size, (src.x_size, src.y_size))
    return FunctionSpec(table=table, z_size=z_size)


def binary_entropy(p: float) -> float:
    if p in (0.0, 1.0):
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def source_document(src: JointSource, fspec: FunctionSpec) -> dict:
    return {
        "x_alphabet": [str(i) for i in range(src.x_size)],
        "y_alphabet": [str(i) for i in range(src.y_size)],
        "pmf": src.pmf.tolist(),
        "function": {
            "z_alphabet": [str(i) for i in range(fspec.z_size)],
            "table": fspec.table.tolist(),
        },
    }


@pytest.fixture
def write_document(tmp_path):
    def _write(src, fspec, name="source.json"):
        path = tmp_path / name
        path.write_text(json.dumps(source_document(src, fspec)))
        return path

    return _write
