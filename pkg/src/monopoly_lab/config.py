import logging
from dataclasses import dataclass
from pathlib import Path
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from rich.console import Console
from rich.logging import RichHandler


@dataclass
class AppConfig:
    database_path: Path = Path("monopoly_lab.db")
    solver_max_candidates: int | None = None
    solver_time_limit_seconds: float | None = None
    solver_threads: int = 1
    solver_cache_enabled: bool = True
    checks_seed: int = 20240601
    checks_random_graphs: int = 50
    checks_max_dimension: int = 30
    ui_theme: str = "textual-dark"
    grid_member_char: str = "*"
    grid_empty_char: str = "."
    log_level: str = "WARNING"


def load_config(path: Path | None = None) -> AppConfig:
    """
    Load configuration from a TOML file, falling back to defaults if missing.
    """
    cfg = AppConfig()
    config_path = path or Path("config.default.toml")
    if config_path.exists():
        with config_path.open("rb") as f:
            raw = tomllib.load(f)
        cfg.database_path = Path(raw.get("database_path", cfg.database_path))
        solver = raw.get("solver", {})
        cfg.solver_max_candidates = _limit(solver.get("max_candidates"), int) or cfg.solver_max_candidates
        cfg.solver_time_limit_seconds = (
            _limit(solver.get("time_limit_seconds"), float) or cfg.solver_time_limit_seconds
        )
        cfg.solver_threads = max(1, int(solver.get("threads", cfg.solver_threads)))
        cfg.solver_cache_enabled = bool(solver.get("cache_enabled", cfg.solver_cache_enabled))
        checks = raw.get("checks", {})
        cfg.checks_seed = int(checks.get("seed", cfg.checks_seed))
        cfg.checks_random_graphs = int(checks.get("random_graphs", cfg.checks_random_graphs))
        cfg.checks_max_dimension = int(checks.get("max_dimension", cfg.checks_max_dimension))
        ui = raw.get("ui", {})
        cfg.ui_theme = str(ui.get("theme", cfg.ui_theme))
        cfg.grid_member_char = str(ui.get("member_char", cfg.grid_member_char))
        cfg.grid_empty_char = str(ui.get("empty_char", cfg.grid_empty_char))
        cfg.log_level = str(raw.get("logging", {}).get("level", cfg.log_level)).upper()
    return cfg


def _limit(value, cast):
    # 0 (or absent) means unlimited
    if value is None or cast(value) <= 0:
        return None
    return cast(value)


def configure_logging(level: str = "WARNING") -> None:
    """
    Route all library logging through a RichHandler on stderr.
    """
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), rich_tracebacks=True, show_path=False)],
        force=True,
    )
