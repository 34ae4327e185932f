"""Tests for the numerical defaults."""

import pytest
from src.config import Defaults, load_defaults


class TestLoadDefaults:
    """Environment overrides."""

    def test_no_overrides(self):
        """An empty environment gives the dataclass defaults."""
        assert load_defaults({}) == Defaults()

    def test_overrides_applied(self):
        """Variables are parsed into their fields."""
        defaults = load_defaults({'CHAMBER_BASIS_TOLERANCE': '1e-6', 'CHAMBER_BASIS_SEED': '42',
                                  'CHAMBER_BASIS_SAMPLES': ' 3 '})

        assert defaults.tolerance == 1e-6
        assert defaults.seed == 42
        assert defaults.samples == 3
        assert defaults.step == Defaults().step

    def test_blank_value_ignored(self):
        """Empty variables leave the default in place."""
        assert load_defaults({'CHAMBER_BASIS_SEED': ''}).seed == 0

    def test_unparsable_value(self):
        """A non-numeric override is an error naming the variable."""
        with pytest.raises(ValueError, match='CHAMBER_BASIS_FLAG_ATTEMPTS'):
            load_defaults({'CHAMBER_BASIS_FLAG_ATTEMPTS': 'many'})

    def test_negative_value(self):
        """Negative tolerances and seeds are rejected."""
        with pytest.raises(ValueError):
            load_defaults({'CHAMBER_BASIS_TOLERANCE': '-1'})
        with pytest.raises(ValueError):
            load_defaults({'CHAMBER_BASIS_SEED': '-5'})
