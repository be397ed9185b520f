"""Command line front end.

Every subcommand is a thin client over the protocol handler: the REPL
and the batch checker build requests and print the transcript lines the
handler returns, and `serve` exposes the same handler over HTTP (or
line-delimited JSON on stdio). Nothing here checks terms itself.
"""

from __future__ import annotations

import json
import sys
from typing import IO

import click
from pydantic import ValidationError

from .environment import EMPTY_ENV, postulate
from .errors import ProustError
from .protocol import (
    ProtocolRequest,
    SessionStore,
    command_to_request,
    handle,
    run_script,
)
from .semantics import extract, tautology
from .syntax import balanced, parse, read_all
from .terms import TypeSort, free_vars


@click.group()
def main() -> None:
    """A nano proof assistant."""


@main.command()
@click.option("--ascii", "ascii_mode", is_flag=True,
              help="Print with ASCII aliases instead of Unicode.")
def repl(ascii_mode: bool) -> None:
    """Interactive session reading commands from stdin."""
    run_repl(sys.stdin, sys.stdout, ascii_mode)


def run_repl(stdin: IO[str], stdout: IO[str], ascii_mode: bool = False) -> None:
    store = SessionStore()
    interactive = stdin.isatty()
    buffer = ""
    while True:
        if interactive and not buffer:
            stdout.write("> ")
            stdout.flush()
        line = stdin.readline()
        if not line:
            break
        buffer += line
        stripped = buffer.strip()
        if stripped in (":quit", ":q"):
            break
        if not balanced(buffer):
            continue
        buffer = ""
        if not stripped:
            continue
        for text in _repl_forms(stripped, stdout):
            req_or_none = _repl_request(text, ascii_mode, stdout)
            if req_or_none is None:
                continue
            resp = handle(store, req_or_none)
            for out in resp.transcript:
                stdout.write(out + "\n")
        stdout.flush()


def _repl_forms(text: str, stdout: IO[str]) -> list:
    try:
        return read_all(text)
    except ProustError as err:
        stdout.write(f"error: {err.message}\n")
        return []


def _repl_request(form, ascii_mode: bool, stdout: IO[str]):
    try:
        return command_to_request(form, ascii_mode=ascii_mode)
    except ProustError as err:
        stdout.write(f"error: {err.message}\n")
        return None


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--ascii", "ascii_mode", is_flag=True)
def check(file: str, ascii_mode: bool) -> None:
    """Replay a .pr script; exit nonzero if any form fails."""
    with open(file, encoding="utf-8") as fh:
        text = fh.read()
    failed = 0
    for resp in run_script(text, ascii_mode=ascii_mode):
        for line in resp.transcript:
            click.echo(line)
        if resp.status != "ok":
            failed += 1
    if failed:
        click.echo(f"{failed} form{'s' if failed != 1 else ''} failed",
                   err=True)
        raise SystemExit(1)


@main.command()
@click.option("--port", default=7777, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--save", "save_dir",
              type=click.Path(file_okay=False), default=None,
              help="Record each session as a replayable .pr script here.")
@click.option("--ui", "ui_dir", type=click.Path(file_okay=False),
              default=None, help="Directory of static UI assets to serve.")
@click.option("--stdio", is_flag=True,
              help="Speak line-delimited JSON on stdin/stdout instead of HTTP.")
def serve(port: int, host: str, save_dir: str | None, ui_dir: str | None,
          stdio: bool) -> None:
    """Serve the protocol over HTTP (or stdio with --stdio)."""
    store = SessionStore(save_dir)
    if stdio:
        _serve_stdio(store, sys.stdin, sys.stdout)
        return
    import uvicorn

    from .service import create_app

    if ui_dir is None:
        from pathlib import Path

        candidate = Path("frontend") / "dist"
        if candidate.is_dir():
            ui_dir = str(candidate)
    uvicorn.run(create_app(store, ui_dir), host=host, port=port,
                log_level="warning")


def _serve_stdio(store: SessionStore, stdin: IO[str], stdout: IO[str]) -> None:
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = ProtocolRequest.model_validate_json(line)
        except ValidationError as err:
            stdout.write(json.dumps({
                "status": "error", "session": "", "op": "invalid",
                "error": {"kind": "bad-request",
                          "message": f"invalid request: {err.error_count()} "
                                     "validation error(s)",
                          "details": {}},
                "transcript": [], "goals": [], "goal_count": 0,
                "task": None, "result": None}) + "\n")
            stdout.flush()
            continue
        stdout.write(handle(store, req).model_dump_json() + "\n")
        stdout.flush()


@main.command()
@click.argument("formula")
def taut(formula: str) -> None:
    """Decide whether a propositional formula is classically valid.

    Free variables are treated as postulated atoms."""
    try:
        e = parse(formula)
        env = EMPTY_ENV
        for name in sorted(free_vars(e)):
            env = postulate(env, name, TypeSort())
        f = extract(env, e)
    except ProustError as err:
        click.echo(f"error: {err.message}", err=True)
        raise SystemExit(2)
    if f is None:
        click.echo("error: not a propositional formula", err=True)
        raise SystemExit(2)
    if tautology(f):
        click.echo("tautology")
    else:
        click.echo("not a tautology")
        raise SystemExit(1)


if __name__ == "__main__":
    main()
