# qsg/harness/tasks.py
import logging
import time
from pathlib import Path
from typing import List, Optional, Tuple, Union

import yaml
from pydantic import ValidationError

from qsg.harness.errors import ConfigError
from qsg.harness.models import Report, ScenarioConfig
from qsg.scenarios import catalog
from qsg.scenarios.runner import ScenarioRunner

logger = logging.getLogger(__name__)


def _field_of(error: ValidationError) -> str:
    first = error.errors()[0]
    return ".".join(str(part) for part in first["loc"]) or "<root>"


def parse_config(data) -> ScenarioConfig:
    """Validate a mapping against the scenario schema, naming the first offending field on failure."""
    if not isinstance(data, dict):
        raise ConfigError("scenario configuration must be a mapping", field="<root>")
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        field = _field_of(exc)
        raise ConfigError(f"invalid scenario configuration at '{field}': {exc.errors()[0]['msg']}",
                          field=field) from exc


def load_config(path: Union[str, Path]) -> ScenarioConfig:
    logger.info(f"Loading scenario configuration from {path}")
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = yaml.safe_load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read configuration file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"configuration file {path} is not valid YAML: {exc}") from exc
    return parse_config(data)


def run_scenario(config: ScenarioConfig, threads: Optional[int] = None) -> Report:
    """Run every requested claim; wall time is recorded on the report but only emitted on request."""
    logger.info(f"Starting scenario '{config.scenario_id}'")
    started = time.perf_counter()
    report = ScenarioRunner(config, threads).run()
    wall_time_ms = (time.perf_counter() - started) * 1e3
    logger.info(f"Scenario '{config.scenario_id}' took {wall_time_ms:.1f} ms")
    return report.model_copy(update={"wall_time_ms": wall_time_ms})


def run_catalog_scenario(name: str, threads: Optional[int] = None) -> Report:
    return run_scenario(catalog.default_scenario(name), threads)


def list_catalog() -> List[Tuple[str, str]]:
    return catalog.list_catalog()
