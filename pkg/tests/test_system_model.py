import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from coupled_kdv.system_model import (
    PRESETS,
    SystemSpec,
    SystemSpecError,
    make_system,
    preset,
    validate,
)

KDV_MKDV_3_TABLE = {
    ("f", 1, "u", "f"): 1.5, ("f", 1, "f", "u"): 1.5, ("f", 2, "f", "f"): -0.75,
    ("u", 1, "u", "u"): -1.5, ("u", 1, "v", "v"): 3.0, ("u", 2, "f", "u"): 0.75,
    ("u", 3, "f", "v"): -1.5, ("u", 4, "v", "f"): -1.5,
    ("v", 1, "u", "v"): 1.5, ("v", 2, "f", "v"): -0.75, ("v", 3, "u", "f"): 1.5,
    ("v", 4, "f", "u"): 0.75, ("v", 5, "v", "f"): -1.5,
}


def test_trivial_system():
    spec = make_system(1, {}, [0.0], ["u"])
    assert spec.nonzero() == {}
    assert spec.g_max == 0.0 and spec.d_max == 0.0


def test_scalar_kdv_construction():
    spec = make_system(1, {(1, 1, 1, 1): -1.5}, [-0.25], ["u"])
    assert spec.coefficient(1, 1, 1, 1) == -1.5
    assert spec.d == (-0.25,)


@pytest.mark.parametrize("key", [(1, 1, 1, 3), (1, 3, 1, 1), (6, 1, 1, 1), (0, 1, 1, 1), (1, 0, 1, 1)])
def test_index_out_of_range_rejected(key):
    with pytest.raises(SystemSpecError):
        make_system(2, {key: 1.0}, [0.0, 0.0], ["a", "b"])


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_coefficient_rejected(bad):
    with pytest.raises(SystemSpecError):
        make_system(1, {(1, 1, 1, 1): bad}, [0.0], ["u"])
    with pytest.raises(SystemSpecError):
        make_system(1, {}, [bad], ["u"])


def test_length_and_label_checks():
    with pytest.raises(SystemSpecError):
        make_system(2, {}, [0.0], ["a", "b"])
    with pytest.raises(SystemSpecError):
        make_system(2, {}, [0.0, 0.0], ["a"])
    with pytest.raises(SystemSpecError):
        make_system(2, {}, [0.0, 0.0], ["a", "a"])
    with pytest.raises(SystemSpecError):
        make_system(0, {}, [], [])


def test_kdv_mkdv_3_dispersion():
    assert preset("kdv-mkdv-3").d == (0.5, -0.25, 0.5)


def test_kdv_mkdv_3_table_exact():
    spec = preset("kdv-mkdv-3")
    assert len(spec.nonzero()) == 13
    for (n, l, m, k), v in KDV_MKDV_3_TABLE.items():
        assert spec.coefficient(l, n, m, k) == v
    assert spec.coefficient(2, "f", "f", "f") == -0.75
    assert spec.coefficient(5, "v", "v", "f") == -1.5
    assert spec.labels == ("f", "u", "v")


def test_kdv_preset():
    spec = preset("kdv")
    assert spec.n_components == 1
    assert spec.nonzero() == {(1, 1, 1, 1): -1.5}
    assert spec.d == (-0.25,)


def test_unknown_preset():
    with pytest.raises(LookupError):
        preset("hirota")


def test_validate_presets_clean():
    for name in PRESETS:
        diag = validate(preset(name))
        assert diag.is_valid and diag.warnings == []


def test_validate_nan_is_fatal():
    # bypass the constructor to build an invalid record
    spec = SystemSpec(1, {(1, 1, 1, 1): math.nan}, (0.0,), ("u",))
    diag = validate(spec)
    assert not diag.is_valid
    assert any(w.startswith("fatal:") for w in diag.warnings)


def test_validate_dangling_index_is_fatal():
    spec = SystemSpec(1, {(1, 1, 2, 1): 1.0}, (0.0,), ("u",))
    assert not validate(spec).is_valid


def test_validate_all_zero_warns_but_valid():
    diag = validate(make_system(2, {}, [0.0, 0.0], ["a", "b"]))
    assert diag.is_valid
    assert any("trivial dynamics" in w for w in diag.warnings)


def test_spec_immutable():
    spec = preset("kdv")
    with pytest.raises(TypeError):
        spec.g[(1, 1, 1, 1)] = 0.0
    with pytest.raises(AttributeError):
        spec.d = (1.0,)


def test_deterministic_construction():
    assert preset("kdv-mkdv-3") == preset("kdv-mkdv-3")


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_dict_round_trip(name):
    spec = preset(name)
    assert SystemSpec.from_dict(spec.to_dict()) == spec


def test_from_dict_rejects_unknown_keys():
    with pytest.raises(SystemSpecError):
        SystemSpec.from_dict({"n_components": 1, "dispersion": [0], "labels": ["u"], "extra": 1})


def test_term_arrays_zero_based():
    arrays = preset("kdv-mkdv-3").term_arrays()
    assert sorted(arrays) == [1, 2, 3, 4, 5]
    n, m, k, v = arrays[5]
    assert (n.tolist(), m.tolist(), k.tolist(), v.tolist()) == ([2], [2], [0], [-1.5])
    assert sum(len(a[3]) for a in arrays.values()) == 13


coeff = st.floats(-10, 10, allow_nan=False)


@given(st.integers(1, 4), st.data())
def test_random_valid_systems_satisfy_invariants(n, data):
    keys = data.draw(st.lists(st.tuples(st.integers(1, 5), *(st.integers(1, n),) * 3), max_size=12))
    g = {key: data.draw(coeff) for key in keys}
    d = data.draw(st.lists(coeff, min_size=n, max_size=n))
    spec = make_system(n, g, d, [f"c{i}" for i in range(n)])
    assert validate(spec).is_valid
    assert all(np.isfinite(v) for v in spec.g.values())
    assert spec.g_max == max((abs(v) for v in g.values()), default=0.0) or not g
