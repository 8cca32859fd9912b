"""
Unit tests for the YAML configuration loader.
"""

import tempfile

from pathlib import Path

import pytest

from poisson_forge.config import (
    DEFAULT_CONFIG_PATH,
    ConfigError,
    ForgeConfig,
    active_config,
    default_config,
    load_config,
    use_config,
)


def write_yaml(directory: str, text: str) -> str:
    path = Path(directory) / "forge.yml"
    path.write_text(text)
    return str(path)


class TestConfigLoader:
    """Test cases for configuration loading and overlay."""

    def test_bundled_defaults(self):
        """Test that the bundled file matches the dataclass defaults."""
        assert DEFAULT_CONFIG_PATH.exists()
        assert load_config() == ForgeConfig()

    def test_default_config_cached(self):
        """Test that the process-wide config is loaded once."""
        assert default_config() is default_config()

    def test_user_overlay(self):
        """Test that a user file overrides selected keys."""
        with tempfile.TemporaryDirectory() as temp_dir:
            path = write_yaml(
                temp_dir, "defaults:\n  trials: 7\n  order: lex\nreport:\n  indent: 4\n"
            )
            config = load_config(path)
        assert config.trials == 7
        assert config.order == "lex"
        assert config.indent == 4
        assert config.seed == 0

    def test_empty_user_file(self):
        """Test that an empty overlay changes nothing."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config = load_config(write_yaml(temp_dir, ""))
        assert config == ForgeConfig()

    @pytest.mark.parametrize(
        "text",
        [
            "bogus:\n  a: 1\n",
            "defaults:\n  colour: red\n",
            "defaults: 3\n",
            "- a\n- b\n",
            "defaults:\n  order: revlex\n",
            "limits:\n  max_arity: 0\n",
        ],
    )
    def test_invalid_files(self, text):
        """Test that unknown sections, keys and values raise ConfigError."""
        with tempfile.TemporaryDirectory() as temp_dir:
            path = write_yaml(temp_dir, text)
            with pytest.raises(ConfigError):
                load_config(path)

    def test_missing_file(self):
        """Test that an unreadable path raises ConfigError."""
        with pytest.raises(ConfigError, match="Failed to load config"):
            load_config("/nonexistent/forge.yml")

    def test_malformed_yaml(self):
        """Test that YAML syntax errors raise ConfigError."""
        with tempfile.TemporaryDirectory() as temp_dir:
            path = write_yaml(temp_dir, "defaults: [unclosed\n")
            with pytest.raises(ConfigError):
                load_config(path)


class TestActiveConfig:
    """Test cases for active_config and use_config."""

    def test_bundled_when_nothing_installed(self):
        """Test the fallback outside any with-block."""
        assert active_config() is default_config()

    def test_installed_inside_block(self):
        """Test that use_config installs and then restores."""
        tight = ForgeConfig(groebner_max_degree=2)
        with use_config(tight) as config:
            assert config is tight
            assert active_config() is tight
        assert active_config() is default_config()

    def test_nested_blocks(self):
        """Test that the innermost installation wins and unwinds in order."""
        outer, inner = ForgeConfig(trials=5), ForgeConfig(trials=9)
        with use_config(outer):
            with use_config(inner):
                assert active_config().trials == 9
            assert active_config().trials == 5

    def test_restored_after_error(self):
        """Test that an exception inside the block still restores."""
        with pytest.raises(RuntimeError):
            with use_config(ForgeConfig(max_arity=2)):
                raise RuntimeError("boom")
        assert active_config().max_arity == default_config().max_arity
