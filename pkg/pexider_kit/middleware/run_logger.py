from typing import Optional
import logging
import time

logger = logging.getLogger(__name__)


def log_run(command: str, config_path: Optional[str], exit_code: int, elapsed_ms: int, detail: str):
    """Log one completed command"""
    level = logging.INFO if exit_code == 0 else logging.WARNING
    logger.log(
        level,
        f"{command} finished with exit code {exit_code} in {elapsed_ms} ms "
        f"(config={config_path or '-'}, {detail})",
    )


class RunLoggerContext:
    """Context manager for logging a CLI command with timing"""

    def __init__(self, command: str, config_path: Optional[str] = None):
        self.command = command
        self.config_path = config_path
        self.start_time = None
        self.exit_code = 0
        self.detail = "ok"

    def __enter__(self):
        self.start_time = time.perf_counter()
        logger.debug(f"{self.command} started (config={self.config_path or '-'})")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        elapsed_ms = int((time.perf_counter() - self.start_time) * 1000)
        if exc_type is not None and self.exit_code == 0:
            self.exit_code = 3
            self.detail = f"{exc_type.__name__}: {exc_val}"
        log_run(self.command, self.config_path, self.exit_code, elapsed_ms, self.detail)
        return False

    def set_exit_code(self, code: int):
        """Set the exit code reported on completion"""
        self.exit_code = code

    def set_detail(self, detail: str):
        """Set a short summary reported on completion"""
        self.detail = detail
