import math

import numpy as np
import pytest

from qmanin import ConfigError, QParam, WeightHorizonError, WeightSequence


def test_qparam_rejects_zero_and_nonfinite():
    with pytest.raises(ConfigError):
        QParam(0)
    with pytest.raises(ConfigError):
        QParam(complex(math.inf, 0))
    assert QParam.of(2j).value == 2j


def test_qparam_integer_powers():
    q = QParam(1j)
    assert abs(q.power(-1) - (-1j)) < 1e-15
    assert q.power(0) == 1
    assert abs(QParam(2.0).power(10) - 1024.0) < 1e-9


def test_factorial_weights_exact_small():
    w = WeightSequence.factorial()
    assert w.weight(0) == 1.0
    assert w.weight(2) == 2.0
    assert w.weight(5) == 120.0


def test_negative_index_convention():
    for w in (WeightSequence.factorial(), WeightSequence.constant(3.0),
              WeightSequence.explicit([2.0, 4.0])):
        assert w.weight(-1) == 1.0
        assert w.log_weight(-3) == 0.0


def test_log_weights_match_weights():
    w = WeightSequence.power_factorial(1.5)
    for n in range(12):
        assert math.isclose(math.exp(w.log_weight(n)), w.weight(n), rel_tol=1e-12)
    arr = w.log_weights(-1, 6)
    assert arr[0] == 0.0
    assert np.allclose(arr[1:], [w.log_weight(n) for n in range(6)])


def test_explicit_table_validation_and_horizon():
    with pytest.raises(ConfigError):
        WeightSequence.explicit([1.0, -2.0])
    with pytest.raises(ConfigError):
        WeightSequence.explicit([])
    w = WeightSequence.explicit([1.0, 2.0, 6.0])
    assert w.horizon == 2
    assert w.weight(2) == 6.0
    with pytest.raises(WeightHorizonError):
        w.weight(3)
    with pytest.raises(WeightHorizonError):
        w.log_weights(0, 5)


def test_overflowing_rule_weights_fall_back_to_logs():
    w = WeightSequence.factorial()
    assert math.isinf(w.weight(200))
    assert math.isfinite(w.log_weight(200))
    # ratio still finite through the log path
    assert math.isclose(w.ratio(200), 200.0, rel_tol=1e-10)


def test_scaled_copies():
    w = WeightSequence.factorial().scaled(4.0)
    assert w.weight(3) == 24.0
    assert math.isclose(w.log_weight(3), math.log(24.0), rel_tol=1e-14)
    again = w.scaled(0.25)
    assert again.weight(3) == 6.0


def test_json_roundtrip():
    for w in (WeightSequence.factorial(), WeightSequence.constant(2.5),
              WeightSequence.power_factorial(0.5).scaled(3.0),
              WeightSequence.explicit([1.0, 5.0, 7.0])):
        back = WeightSequence.from_json(w.to_json())
        assert back.kind == w.kind
        for n in range(min(3, (w.horizon or 3) + 1)):
            assert math.isclose(back.weight(n), w.weight(n), rel_tol=1e-15)


def test_describe_strings():
    assert WeightSequence.factorial().describe() == "factorial"
    assert "constant" in WeightSequence.constant(2.0).describe()
    assert "explicit" in WeightSequence.explicit([1.0]).describe()
