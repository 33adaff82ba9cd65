import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ifmlab import (
    NoWitnessError,
    OperatorPair,
    audit_operator_pair,
    check_idempotent,
    find_separation_witnesses,
    lukasiewicz,
    min_max,
    operator_pair,
    product_probsum,
    unit_scalar,
)

unit = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)
inner_unit = st.floats(min_value=1e-6, max_value=1.0 - 1e-6, allow_nan=False)

SHIPPED = [min_max, product_probsum, lukasiewicz]


def test_unit_scalar_accepts_bounds_and_rejects_outside():
    assert unit_scalar(0.0) == 0.0
    assert unit_scalar(1.0) == 1.0
    for bad in (-0.1, 1.1, float("nan")):
        with pytest.raises(ValueError):
            unit_scalar(bad)


def test_registry_round_trip():
    for name in ("min-max", "product-probsum", "lukasiewicz"):
        assert operator_pair(name).name == name
    with pytest.raises(ValueError):
        operator_pair("hamacher")


def test_min_max_audit_passes_exactly():
    report = audit_operator_pair(min_max(), 100, tolerance=0.0)
    assert report.passed
    # every axiom clause appears for both operators
    names = {c.clause for c in report.clauses}
    for op in ("tnorm", "tconorm"):
        for axiom in ("commutativity", "associativity", "identity", "monotonicity"):
            assert f"{op}.{axiom}" in names


@pytest.mark.parametrize("factory", SHIPPED)
def test_shipped_pairs_pass_audit(factory):
    assert audit_operator_pair(factory(), 60, tolerance=1e-12).passed


def test_identity_on_the_nose():
    pair = min_max()
    assert float(pair.tnorm(0.7, 1.0)) == 0.7
    assert float(pair.tconorm(0.7, 0.0)) == 0.7


def test_broken_operator_fails_identity_with_zero_witness():
    def broken(a, b):
        return np.minimum(a * b + 0.5, 1.0)

    pair = OperatorPair("broken", broken, np.maximum)
    report = audit_operator_pair(pair, 101, tolerance=1e-12)
    clause = report.clause("tnorm.identity")
    assert not clause.passed
    assert clause.witness["a"] == 0.0
    assert clause.worst == pytest.approx(0.5)


def test_out_of_range_operator_reported_as_range_violation():
    pair = OperatorPair("overflow", lambda a, b: a + b, np.maximum)
    report = audit_operator_pair(pair, 51, tolerance=1e-12)
    clause = report.clause("tnorm.range")
    assert not clause.passed
    assert clause.worst == pytest.approx(1.0)  # 1 + 1 = 2


def test_step_discontinuity_caught_by_modulus_clause():
    def drastic(a, b):
        a, b = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float))
        out = np.zeros_like(a)
        out[b == 1.0] = a[b == 1.0]
        out[a == 1.0] = b[a == 1.0]
        return out

    report = audit_operator_pair(OperatorPair("drastic", drastic, np.maximum), 101)
    assert not report.clause("tnorm.continuity_modulus").passed


def test_idempotency_flags():
    assert check_idempotent(min_max(), 101) == (True, True)
    pair = product_probsum()
    assert check_idempotent(pair, 101) == (False, False)
    assert pair.idempotent_tnorm is False

    mixed = OperatorPair("min-probsum", np.minimum, product_probsum().tconorm)
    assert check_idempotent(mixed, 101) == (True, False)


def test_product_idempotency_worst_witness_at_half():
    from ifmlab.operators import idempotency_witness

    wit_t, wit_s = idempotency_witness(product_probsum(), 101)
    assert wit_t["a"] == pytest.approx(0.5)
    assert wit_t["violation"] == pytest.approx(0.25)  # |0.25 - 0.5|
    assert wit_s["a"] == pytest.approx(0.5)


def test_min_max_witnesses_reverify():
    pair = min_max()
    w = find_separation_witnesses(pair, upper=0.8, lower=0.6, level=0.5)
    assert 0.6 < w.tnorm_partner < 1.0
    assert float(pair.tnorm(0.8, w.tnorm_partner)) > 0.6
    assert float(pair.tconorm(w.tconorm_partner, 0.6)) < 0.8
    assert float(pair.tnorm(w.tnorm_self, w.tnorm_self)) >= 0.5
    assert float(pair.tconorm(w.tconorm_self, w.tconorm_self)) <= 0.5


def test_product_witness_solves_the_threshold():
    pair = product_probsum()
    w = find_separation_witnesses(pair, upper=0.9, lower=0.5, level=0.5)
    assert w.tnorm_partner > 5.0 / 9.0
    assert 0.9 * w.tnorm_partner > 0.5


def test_no_witness_for_degenerate_operator():
    dead = OperatorPair("dead", lambda a, b: np.zeros_like(np.asarray(a, float) * b), np.maximum)
    with pytest.raises(NoWitnessError):
        find_separation_witnesses(dead, upper=0.8, lower=0.6, level=0.5)


def test_witness_preconditions():
    with pytest.raises(ValueError):
        find_separation_witnesses(min_max(), upper=0.5, lower=0.6, level=0.5)
    with pytest.raises(ValueError):
        find_separation_witnesses(min_max(), upper=1.0, lower=0.5, level=0.5)


@pytest.mark.parametrize("factory", SHIPPED)
@given(a=unit, b=unit, c=unit, d=unit)
@settings(max_examples=60, deadline=None)
def test_axioms_pointwise(factory, a, b, c, d):
    pair = factory()
    for op, identity in ((pair.tnorm, 1.0), (pair.tconorm, 0.0)):
        assert float(op(a, b)) == pytest.approx(float(op(b, a)), abs=1e-15)
        lhs = float(op(op(a, b), c))
        rhs = float(op(a, op(b, c)))
        assert lhs == pytest.approx(rhs, abs=1e-12)
        assert float(op(a, identity)) == pytest.approx(a, abs=1e-15)
        lo_a, hi_a = sorted((a, c))
        lo_b, hi_b = sorted((b, d))
        assert float(op(lo_a, lo_b)) <= float(op(hi_a, hi_b)) + 1e-15
        assert 0.0 <= float(op(a, b)) <= 1.0


@pytest.mark.parametrize("factory", [min_max, product_probsum])
@given(upper=inner_unit, lower=inner_unit, level=inner_unit)
@settings(max_examples=40, deadline=None)
def test_witnesses_reverify_for_random_levels(factory, upper, lower, level):
    if upper <= lower:
        upper, lower = max(upper, lower), min(upper, lower)
    if upper == lower:
        upper = min(1.0 - 1e-9, lower + 1e-6)
    pair = factory()
    w = find_separation_witnesses(pair, upper, lower, level)
    assert float(pair.tnorm(upper, w.tnorm_partner)) > lower
    assert float(pair.tconorm(w.tconorm_partner, lower)) < upper
    assert float(pair.tnorm(w.tnorm_self, w.tnorm_self)) >= level
    assert float(pair.tconorm(w.tconorm_self, w.tconorm_self)) <= level
