"""Unit tests for settings loading."""

from unittest.mock import patch

from src.config import Settings, get_settings


class TestSettings:
    """Tests for Settings and get_settings."""

    def test_defaults(self, tmp_path, monkeypatch):
        """Defaults apply when neither environment nor .env set a value."""
        monkeypatch.chdir(tmp_path)
        with patch.dict("os.environ", {}, clear=True):
            settings = Settings()
        assert settings.RATE_MAX_BITS == 64.0
        assert settings.ROOT_TAIL_PROBABILITY == 1e-12
        assert settings.MC_DEFAULT_ATOMS == 10_000

    def test_environment_override(self):
        """Environment variables override defaults."""
        with patch.dict("os.environ", {"QUAD_LIMIT": "500", "SWEEP_WORKERS": "1"}):
            settings = Settings()
        assert settings.QUAD_LIMIT == 500
        assert settings.SWEEP_WORKERS == 1

    def test_dotenv_file(self, tmp_path, monkeypatch):
        """A .env file in the working directory is read."""
        (tmp_path / ".env").write_text("MC_BLOCK_SIZE=1024\n", encoding="utf-8")
        monkeypatch.chdir(tmp_path)
        with patch.dict("os.environ", {}, clear=True):
            assert Settings().MC_BLOCK_SIZE == 1024

    def test_get_settings_is_cached(self):
        """get_settings returns a single instance until the cache is cleared."""
        assert get_settings() is get_settings()
