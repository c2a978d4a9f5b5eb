"""Command-line interface: run protocols, reproduce tables, synthesize
corrections, and query transition amplitudes.

Exit codes: 0 success, 2 invalid input, 3 numerical failure (non-unitary
circuit), 4 golden mismatch in table reproduction.
"""

from __future__ import annotations

import json
import sys
from typing import Optional

import click
import numpy as np

from . import edc, fusion, jsonio, tables
from .fock import FockPattern, transition_amplitude
from .optics import NonUnitaryError

EXIT_INVALID = 2
EXIT_NUMERICAL = 3
EXIT_GOLDEN = 4

_PROTOCOLS = {
    "even": lambda d, D, r, edc_on, restricted, both, R: fusion.protocol_even(d),
    "odd": lambda d, D, r, edc_on, restricted, both, R: fusion.protocol_odd(d, D),
    "wstate": lambda d, D, r, edc_on, restricted, both, R: fusion.protocol_wstate(
        d, edc=edc_on, restricted=restricted
    ),
    "ztl": lambda d, D, r, edc_on, restricted, both, R: fusion.protocol_ztl(d, r),
    "boost-qubit": lambda d, D, r, edc_on, restricted, both, R: fusion.protocol_boost_qubit(
        r, both_sides=both, edc=edc_on
    ),
    "boost-qutrit": lambda d, D, r, edc_on, restricted, both, R: fusion.protocol_boost_qutrit(
        r, edc=edc_on
    ),
    "ghz-boost": lambda d, D, r, edc_on, restricted, both, R: fusion.protocol_ghz_boost(d),
    "appd1-a": lambda d, D, r, edc_on, restricted, both, R: fusion.protocol_appendix_d(1, "A", R),
    "appd1-b": lambda d, D, r, edc_on, restricted, both, R: fusion.protocol_appendix_d(1, "B", R),
    "appd1-c": lambda d, D, r, edc_on, restricted, both, R: fusion.protocol_appendix_d(1, "C", R),
    "appd2": lambda d, D, r, edc_on, restricted, both, R: fusion.protocol_appendix_d(2, "A", R),
}


def _fail(message: str, code: int) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _emit(doc: dict, fmt: str, output: Optional[str]) -> None:
    if fmt == "json":
        text = json.dumps(doc, indent=2) + "\n"
    elif fmt == "csv":
        lines = []
        for key, value in doc.items():
            if key == "per_pattern":
                continue
            lines.append(f"{key},{json.dumps(value) if isinstance(value, (dict, list)) else value}")
        if "per_pattern" in doc:
            lines.append("pattern,w,lambda,s")
            for entry in doc["per_pattern"]:
                pat = " ".join(str(n) for n in entry["pattern"])
                lines.append(f"{pat},{entry['w']},{entry['lambda']},{entry['s']}")
        text = "\n".join(lines) + "\n"
    else:
        lines = []
        for key, value in doc.items():
            if key == "per_pattern":
                continue
            if isinstance(value, float):
                lines.append(f"{key}: {value:.6g}")
            else:
                lines.append(f"{key}: {value}")
        if "per_pattern" in doc:
            lines.append("pattern  w  lambda  s")
            for entry in doc["per_pattern"]:
                pat = "".join(str(n) for n in entry["pattern"])
                lines.append(
                    f"{pat}  {entry['w']:.6g}  {entry['lambda']:.6g}  {entry['s']}"
                )
        text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@click.group()
def main() -> None:
    """Exact simulation of high-dimensional linear-optical fusion."""


@main.command()
@click.option("--protocol", required=True, type=click.Choice(sorted(_PROTOCOLS)))
@click.option("--dim", type=int, default=None, help="qudit dimension d")
@click.option("--embed-dim", type=int, default=None, help="even embedding dimension")
@click.option("--ancilla-photons", type=int, default=None, help="ancilla photon count r")
@click.option("--edc", type=click.Choice(["on", "off"]), default="on",
              help="apply extra-dimensional corrections")
@click.option("--restricted", is_flag=True, help="accept only single-port patterns")
@click.option("--both-sides", is_flag=True, help="boost both output ports")
@click.option("--reflectivity", type=float, default=0.5, help="coupler reflectivity R")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="json")
@click.option("--per-pattern", is_flag=True, help="include per-pattern outcomes")
@click.option("--workers", type=int, default=None,
              help=f"worker threads (or set {fusion.WORKERS_ENV_VAR})")
@click.option("--output", type=click.Path(dir_okay=False), default=None)
def run(protocol, dim, embed_dim, ancilla_photons, edc, restricted, both_sides,
        reflectivity, fmt, per_pattern, workers, output) -> None:
    """Evaluate one fusion protocol and report its success probability."""
    needs_dim = protocol in ("even", "odd", "wstate", "ztl", "ghz-boost")
    if needs_dim and dim is None:
        _fail(f"--dim is required for protocol {protocol}", EXIT_INVALID)
    needs_r = protocol in ("ztl", "boost-qubit", "boost-qutrit")
    if needs_r and ancilla_photons is None:
        _fail(f"--ancilla-photons is required for protocol {protocol}", EXIT_INVALID)
    if protocol == "odd" and embed_dim is None:
        embed_dim = dim if dim % 2 == 0 else dim + 1
    try:
        proto = _PROTOCOLS[protocol](
            dim, embed_dim, ancilla_photons, edc == "on", restricted, both_sides,
            reflectivity,
        )
    except NonUnitaryError as exc:
        _fail(str(exc), EXIT_NUMERICAL)
    except (ValueError, NotImplementedError) as exc:
        _fail(str(exc), EXIT_INVALID)
    try:
        if protocol == "ghz-boost":
            report = fusion.ghz_boost_report(dim, workers=workers, per_pattern=per_pattern)
        else:
            report = fusion.success_probability(
                proto, workers=workers, per_pattern=per_pattern
            )
    except NonUnitaryError as exc:
        _fail(str(exc), EXIT_NUMERICAL)
    _emit(report.to_jsonable(per_pattern=per_pattern), fmt, output)


@main.command(name="tables")
@click.argument("table_id", type=click.Choice(tables.table_ids(), case_sensitive=False))
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "text"]), default="text")
@click.option("--workers", type=int, default=None)
@click.option("--output", type=click.Path(dir_okay=False), default=None)
def tables_cmd(table_id, fmt, workers, output) -> None:
    """Recompute a reference table and compare against published values."""
    if workers is not None:
        import os

        os.environ[fusion.WORKERS_ENV_VAR] = str(workers)
    try:
        result = tables.run_table(table_id)
    except NonUnitaryError as exc:
        _fail(str(exc), EXIT_NUMERICAL)
    doc = {
        "table": result.table_id,
        "cells": [
            {
                "label": cell.label,
                "computed": computed,
                "published": cell.published,
                "delta": delta,
                "status": status,
                "source": cell.source,
                **({"note": cell.note} if cell.note else {}),
            }
            for cell, computed, delta, status in result.rows
        ],
    }
    if fmt == "json":
        _emit(doc, "json", output)
    else:
        width = max(len(c.label) for c, *_ in result.rows) + 2
        lines = [f"table {result.table_id}"]
        for cell, computed, delta, status in result.rows:
            lines.append(
                f"{cell.label:<{width}} computed={computed:<12.6g} "
                f"published={cell.published:<10.6g} |delta|={delta:<10.3g} {status}"
                + (f"  [{cell.note}]" if cell.note else "")
            )
        text = "\n".join(lines) + "\n"
        if output:
            with open(output, "w") as fh:
                fh.write(text)
        else:
            click.echo(text, nl=False)
    if result.failed:
        sys.exit(EXIT_GOLDEN)


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("output_path", type=click.Path(dir_okay=False))
def correct(input_path, output_path) -> None:
    """Synthesize the correction unitary for a conditional-state file."""
    try:
        with open(input_path) as fh:
            doc = json.load(fh)
        cin = jsonio.correction_input_from_json(doc)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        _fail(f"bad correction input: {exc}", EXIT_INVALID)
    try:
        result = edc.correction_unitary(cin)
    except edc.DegenerateInputError:
        _fail("states not linearly independent", EXIT_INVALID)
    with open(output_path, "w") as fh:
        json.dump(jsonio.correction_result_to_json(result), fh, indent=2)
        fh.write("\n")
    click.echo(f"lambda = {result.lam:.6g}")
    click.echo(f"s = {result.s}")


@main.command()
@click.argument("unitary_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("in_pattern")
@click.argument("out_pattern")
def amplitude(unitary_path, in_pattern, out_pattern) -> None:
    """Print <out| U |in> for comma-separated occupation patterns."""
    try:
        with open(unitary_path) as fh:
            unitary = jsonio.unitary_from_json(json.load(fh))
    except NonUnitaryError as exc:
        _fail(str(exc), EXIT_NUMERICAL)
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        _fail(f"bad unitary file: {exc}", EXIT_INVALID)
    try:
        pat_in = FockPattern(int(x) for x in in_pattern.split(","))
        pat_out = FockPattern(int(x) for x in out_pattern.split(","))
        amp = transition_amplitude(unitary, pat_in, pat_out)
    except ValueError as exc:
        _fail(str(exc), EXIT_INVALID)
    click.echo(f"amplitude = [{amp.real:.12g}, {amp.imag:.12g}]")
    click.echo(f"|amplitude|^2 = {abs(amp) ** 2:.12g}")


if __name__ == "__main__":
    main()
