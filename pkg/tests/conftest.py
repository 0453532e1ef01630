import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from kervaire import builders

ROOT = Path(__file__).resolve().parent.parent
COMPLEXES = ROOT / 'complexes'
LOOPS = ROOT / 'loops'
SCENARIOS = ROOT / 'scenarios'


@pytest.fixture
def runner():
    # click < 8.2 mixes stderr into output unless told otherwise
    try:
        return CliRunner(mix_stderr=False)
    except TypeError:
        return CliRunner()


@pytest.fixture
def triangle():
    return builders.simplex(2)


@pytest.fixture
def write_json(tmp_path):
    def write(name, obj):
        path = tmp_path / name
        path.write_text(json.dumps(obj), encoding='utf-8')
        return path
    return write
