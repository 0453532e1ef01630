"""
Payload formatting and stderr diagnostics
"""

import json
import sys
from typing import Any

import click
from colorama import Fore, Style
from colorama import init as colorama_init
from tabulate import tabulate

STATUS_COLORS = {
    'pass': Fore.GREEN,
    'ok': Fore.GREEN,
    'fail': Fore.RED,
    'error': Fore.RED,
    'precondition_violated': Fore.YELLOW,
}

_color = False


def enable_color(stream=None):
    """Color diagnostics only when they go to a terminal"""
    global _color
    stream = stream or sys.stderr
    _color = bool(getattr(stream, 'isatty', lambda: False)())
    if _color:
        colorama_init()


def colorize(text: str, color: str) -> str:
    if not _color:
        return text
    return f"{color}{text}{Style.RESET_ALL}"


def status_word(status: str) -> str:
    return colorize(status.upper(), STATUS_COLORS.get(status, ''))


def info(message: str):
    click.echo(f"🔍 {message}", err=True)


def success(message: str):
    click.echo(colorize(f"✅ {message}", Fore.GREEN), err=True)


def warning(message: str):
    click.echo(colorize(f"⚠️  {message}", Fore.YELLOW), err=True)


def failure(message: str):
    click.echo(colorize(f"❌ {message}", Fore.RED), err=True)


def _cell(value: Any) -> Any:
    if isinstance(value, (list, tuple)) and all(not isinstance(v, (dict, list)) for v in value):
        return ' '.join(str(v) for v in value)
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True)
    if isinstance(value, str) and value in STATUS_COLORS:
        return status_word(value)
    return value


def format_output(data: Any, format_type: str = 'json') -> str:
    """Format output as JSON (stable key order) or tables"""
    if format_type == 'json':
        return json.dumps(data, indent=2, sort_keys=True, default=str)

    if isinstance(data, dict):
        scalars = [(key, _cell(value)) for key, value in data.items()
                   if not (isinstance(value, list) and value and isinstance(value[0], dict))]
        output = [tabulate(scalars, tablefmt='grid')] if scalars else []
        for key, value in data.items():
            if isinstance(value, list) and value and isinstance(value[0], dict):
                output.append(f"\n{'=' * 60}\n{key.upper()}\n{'=' * 60}")
                rows = [{k: _cell(v) for k, v in row.items()} for row in value]
                output.append(tabulate(rows, headers='keys', tablefmt='grid'))
        return '\n'.join(output) if output else "No data available"
    elif isinstance(data, list) and data:
        return tabulate([{k: _cell(v) for k, v in row.items()} for row in data],
                        headers='keys', tablefmt='grid')
    else:
        return "No data available"
