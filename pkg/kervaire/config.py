"""
Runtime settings, read from the environment (and a local .env file)
"""

import os
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from dotenv import load_dotenv

# Load environment variables
load_dotenv()

DEFAULT_SEED = 20240601


def _int_env(name: str, default: int, ignored: Dict[str, str], minimum: Optional[int] = None) -> int:
    """Integer from the environment; unreadable or out-of-range values fall back to default"""
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw.strip())
    except ValueError:
        ignored[name] = raw
        return default
    if minimum is not None and value < minimum:
        ignored[name] = raw
        return default
    return value


@dataclass(frozen=True)
class Settings:
    """CLI defaults; every value can be overridden by a command-line flag"""

    seed: int = DEFAULT_SEED
    trials: int = 200
    workers: int = 4
    output: str = 'json'
    scenario_dir: str = 'scenarios'
    # (variable, raw value) pairs that were replaced by their defaults
    ignored: Tuple[Tuple[str, str], ...] = ()

    @classmethod
    def from_env(cls) -> 'Settings':
        ignored: Dict[str, str] = {}
        output = os.getenv('KERVAIRE_OUTPUT', 'json').strip().lower()
        if output not in ('json', 'pretty'):
            ignored['KERVAIRE_OUTPUT'] = output
            output = 'json'
        return cls(
            seed=_int_env('KERVAIRE_SEED', DEFAULT_SEED, ignored),
            trials=_int_env('KERVAIRE_TRIALS', 200, ignored, minimum=0),
            workers=_int_env('KERVAIRE_WORKERS', 4, ignored, minimum=1),
            output=output,
            scenario_dir=os.getenv('KERVAIRE_SCENARIO_DIR', 'scenarios'),
            ignored=tuple(sorted(ignored.items())),
        )


settings = Settings.from_env()
