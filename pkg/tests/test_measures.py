import math

import numpy as np
import pytest

from fncode import (
    FunctionSpec,
    JointSource,
    conditional_entropy,
    entropy,
    full_report,
)
from conftest import (
    binary_entropy,
    constant_function,
    dsbs,
    identity_function,
    mod2_function,
    random_function,
    random_source,
)


def conditional_entropy_oracle(joint) -> float:
    """Independent route: sum_v p(v) H(U|V=v), term by term."""
    joint = np.asarray(joint, dtype=float)
    total = 0.0
    for v in range(joint.shape[1]):
        pv = joint[:, v].sum()
        if pv == 0:
            continue
        cond = joint[:, v] / pv
        total += pv * -sum(c * math.log2(c) for c in cond if c > 0)
    return total


def test_entropy_uniform_pair():
    assert entropy([0.5, 0.5]) == 1.0


def test_entropy_degenerate():
    assert entropy([1.0, 0.0]) == 0.0


def test_entropy_dyadic():
    assert entropy([0.5, 0.25, 0.25]) == pytest.approx(1.5, abs=1e-15)


def test_conditional_entropy_independent():
    pu = np.array([0.7, 0.3])
    pv = np.array([0.2, 0.5, 0.3])
    joint = np.outer(pu, pv)
    assert conditional_entropy(joint) == pytest.approx(entropy(pu), abs=1e-12)


def test_conditional_entropy_deterministic_is_zero():
    # U is a function of V: one nonzero per column
    joint = np.array([[0.2, 0.0, 0.5], [0.0, 0.3, 0.0]])
    assert conditional_entropy(joint) == 0.0


def test_conditional_entropy_mod2_output_given_y():
    # (Z, Y) table for the mod-2 output of dsbs(0.25), built by marginalizing
    joint_zy = np.array([[0.375, 0.375], [0.125, 0.125]])
    assert conditional_entropy(joint_zy) == pytest.approx(
        binary_entropy(0.25), abs=1e-12
    )


def test_full_report_constant_function():
    report = full_report(dsbs(0.25), constant_function(2, 2))
    assert report.h_z == 0.0
    assert report.h_z_given_x == 0.0
    assert report.h_z_given_y == 0.0


def test_full_report_identity_matches_pair_quantities():
    rng = np.random.default_rng(42)
    for _ in range(20):
        src = random_source(rng)
        report = full_report(src, identity_function(src.x_size, src.y_size))
        # identical arithmetic path: bitwise equality, not approximate
        assert report.h_z == report.h_xy
        assert report.h_z_given_y == report.h_x_given_y
        assert report.h_z_given_x == report.h_y_given_x


def test_full_report_mod2_dsbs():
    report = full_report(dsbs(0.25), mod2_function())
    h = binary_entropy(0.25)
    assert report.h_z == pytest.approx(h, abs=1e-9)
    assert report.h_z_given_x == pytest.approx(h, abs=1e-9)
    assert report.h_z_given_y == pytest.approx(h, abs=1e-9)


def test_report_invariants_random_instances():
    rng = np.random.default_rng(7)
    for _ in range(200):
        src = random_source(rng)
        fspec = random_function(rng, src)
        rep = full_report(src, fspec)
        # chain rule both ways
        assert abs(rep.h_xy - rep.h_x - rep.h_y_given_x) <= 1e-9
        assert abs(rep.h_xy - rep.h_y - rep.h_x_given_y) <= 1e-9
        # output is a function of the pair
        assert rep.h_z_given_y <= rep.h_x_given_y + 1e-9
        assert rep.h_z_given_x <= rep.h_y_given_x + 1e-9
        assert rep.h_z <= rep.h_xy + 1e-9
        # range; a single-symbol output keeps only accumulation noise
        assert 0 <= rep.h_z_given_y <= rep.h_z + 1e-9
        if fspec.z_size > 1:
            assert rep.h_z <= math.log2(fspec.z_size) + 1e-9
        else:
            assert rep.h_z <= 1e-12


def test_conditional_entropy_matches_expansion_oracle():
    rng = np.random.default_rng(17)
    for _ in range(200):
        src = random_source(rng)
        assert conditional_entropy(src.pmf) == pytest.approx(
            conditional_entropy_oracle(src.pmf), abs=1e-9
        )


def test_joint_marginal_consistency():
    rng = np.random.default_rng(23)
    for _ in range(50):
        src = random_source(rng)
        h_v = entropy(src.pmf.sum(axis=0))
        assert conditional_entropy(src.pmf) + h_v == pytest.approx(
            entropy(src.pmf), abs=1e-9
        )


def test_full_report_dimension_mismatch():
    f3 = FunctionSpec(table=[[0, 1, 0], [1, 0, 1]], z_size=2)
    with pytest.raises(Exception, match="does not match"):
        full_report(dsbs(0.25), f3)


def test_zero_cells_are_fine():
    src = JointSource(pmf=[[0.5, 0.0], [0.0, 0.5]])
    rep = full_report(src, mod2_function())
    assert rep.h_z == 0.0  # output constant 0 on the support
    assert rep.h_xy == 1.0
