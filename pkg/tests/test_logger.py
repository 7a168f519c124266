import pytest
from loguru import logger

from utils.logger import setup_logger


@pytest.fixture(autouse=True)
def reset_logger():
    yield
    logger.remove()


def test_unknown_level_raises():
    with pytest.raises(ValueError, match="unknown log level"):
        setup_logger("CHATTY")


def test_console_goes_to_stderr(capsys):
    setup_logger("info")
    logger.info("✅ ready")
    out, err = capsys.readouterr()
    assert out == ""
    assert "✅ ready" in err


def test_file_sink(tmp_path):
    path = tmp_path / "logs" / "qcat.log"
    setup_logger("DEBUG", str(path))
    logger.warning("⚠️ drift")
    logger.remove()
    assert "⚠️ drift" in path.read_text(encoding="utf-8")
