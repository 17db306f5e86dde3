"""
Logger sink tests
"""

from loguru import logger

from retrofit_prae.utils.config import reset_settings
from retrofit_prae.utils.logger import RUN_LOG_FILE, run_log, setup_logger


class TestRunLog:
    """Per-run log file"""

    def test_only_block_is_captured(self, tmp_path):
        with run_log(tmp_path / "run") as path:
            logger.info("inside")
        logger.info("outside")

        assert path == tmp_path / "run" / RUN_LOG_FILE
        text = path.read_text(encoding="utf-8")
        assert "inside" in text
        assert "outside" not in text

    def test_commands_append(self, tmp_path):
        for message in ("first", "second"):
            with run_log(tmp_path):
                logger.debug(message)

        lines = (tmp_path / RUN_LOG_FILE).read_text(encoding="utf-8").splitlines()
        assert len(lines) == 2
        assert lines[0].endswith("first") and lines[1].endswith("second")


class TestSetupLogger:
    """Console and process log file"""

    def test_log_file_from_settings(self, tmp_path, monkeypatch):
        log_file = tmp_path / "logs" / "rprae.log"
        monkeypatch.setenv("RPRAE_LOG_FILE", str(log_file))
        monkeypatch.setenv("RPRAE_LOG_LEVEL", "warning")
        reset_settings()

        setup_logger()
        logger.info("quiet")
        logger.warning("loud")
        logger.remove()

        text = log_file.read_text(encoding="utf-8")
        assert "loud" in text
        assert "quiet" not in text
