"""
textland CLI - Main Application Entry Point

    textland build POSES DETECTIONS --config CFG --out MAP
    textland distill MAP [--backend BACKEND]
    textland query MAP [--backend BACKEND] [QUERY] [--interactive]
    textland simulate SCENARIO OUT_DIR
    textland inspect MAP [--plot OUT.svg]

Exit codes: 0 ok, 1 unexpected, 2 parse/config error, 3 no detection matched
a pose, 4 no promoted classes, 5 map not distilled, 6 no selection.
"""

import functools
import sys
from pathlib import Path
from typing import Iterator, Optional

import click
import questionary
from rich.markup import escape

from config import load_backend_config, load_mapping_config
from formats import associate, load_detections, load_trajectory
from landmarks import Verdict
from llm import NoSelection
from pipeline import MapNotDistilled, MapState, distill, navigate, new_map, process_frame
from plot import render_svg
from sim import load_scenario, render_stream, write_stream
from state import load_map, save_map
from utils.errors import TextlandError
from utils.log import setup_logging
from utils.ui import (
    console,
    format_point,
    make_table,
    print_error,
    print_header,
    print_info,
    print_success,
    print_warning,
)


def handle_errors(command):
    """Turn textland errors into their documented exit codes."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except TextlandError as e:
            print_error(str(e))
            sys.exit(e.exit_code)
    return wrapper


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log per-frame and backend details.")
@click.version_option("0.1.0", prog_name="textland")
def cli(verbose: bool):
    """Build, distill and query maps of named landmarks from scene text."""
    setup_logging(verbose)


# ═══════════════════════════════════════════════════════════════════════════════
# SUMMARIES
# ═══════════════════════════════════════════════════════════════════════════════

def class_rows(state: MapState) -> list[tuple[str, ...]]:
    """Rows for the class / memory summary, in class_id order."""
    rows = []
    for text_class in state.classes:
        entry = state.memory.entries.get(text_class.class_id)
        record = state.records.get(text_class.class_id)
        rows.append((
            str(text_class.class_id),
            text_class.representative,
            entry.status.value if entry else "-",
            f"{entry.score:.2f}" if entry else "-",
            str(text_class.total),
            str(record.n_observations if record else 0),
        ))
    return rows


def inspect_rows(state: MapState) -> list[tuple[str, ...]]:
    """Rows for the landmark table: long-term classes, in class_id order."""
    rows = []
    for record in state.long_term_records():
        rows.append((
            str(record.class_id),
            record.canonical_name or state.classes[record.class_id].representative,
            record.verdict.value,
            format_point(record.final_position),
            str(record.n_observations),
        ))
    return rows


def print_class_summary(state: MapState):
    table = make_table("Text Classes", ["Class", "Representative", "Memory", "Score", "Reads", "Positions"])
    for row in class_rows(state):
        table.add_row(*map(escape, row))
    console.print(table)
    console.print(
        f"[dim]long-term: {len(state.memory.long_term())} · "
        f"short-term: {len(state.memory.short_term())} · "
        f"forgotten: {len(state.memory.forgotten())} · "
        f"rejected at border: {state.rejected_border} · "
        f"without depth: {state.missing_depth}[/dim]"
    )


def print_verdict_table(state: MapState):
    table = make_table("Landmark Judgement", ["Landmark", "Is this a shop?"])
    for record in state.long_term_records():
        if record.verdict is Verdict.UNKNOWN:
            shown = "?"
        else:
            shown = "1" if record.verdict is Verdict.LANDMARK else "0"
        table.add_row(escape(record.canonical_name or f"class {record.class_id}"), shown)
    console.print(table)


# ═══════════════════════════════════════════════════════════════════════════════
# COMMANDS
# ═══════════════════════════════════════════════════════════════════════════════

@cli.command()
@click.argument("poses", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("detections", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path), help="Mapping config JSON.")
@click.option("--out", "out_map", required=True, type=click.Path(dir_okay=False, path_type=Path),
              help="Map file to write.")
@handle_errors
def build(poses: Path, detections: Path, config_path: Path, out_map: Path):
    """Run runtime text mapping over a trajectory and a detection log."""
    print_header("build")
    config = load_mapping_config(config_path)
    trajectory = load_trajectory(poses)
    records = load_detections(detections)
    association = associate(trajectory, records, config.association_window)

    state = new_map(config)
    with console.status("[bold cyan]Mapping frames...", spinner="dots"):
        for frame in association.frames:
            process_frame(state, frame)

    save_map(state, out_map)
    print_class_summary(state)
    if association.unmatched:
        print_warning(f"{association.unmatched} detection(s) matched no pose")
    print_success(f"Map written to {out_map} ({len(association.frames)} frames, {association.matched} detections)")


@cli.command(name="distill")
@click.argument("map_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--backend", "backend_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Backend config JSON (defaults to TEXTLAND_LLM_URL / TEXTLAND_LLM_KEY).")
@handle_errors
def distill_command(map_path: Path, backend_path: Optional[Path]):
    """Name, judge and position every promoted class."""
    print_header("distill")
    state = load_map(map_path)
    backend = load_backend_config(backend_path).build()

    with console.status("[bold cyan]Distilling classes...", spinner="dots"):
        distill(state, backend)

    report = state.last_report
    for class_id, message in report.failures.items():
        print_warning(f"class {class_id}: {message}")
    if not report.distilled:
        print_error("no class could be distilled")
        sys.exit(1)

    save_map(state, map_path)
    print_verdict_table(state)
    print_success(f"Distilled {len(report.distilled)} class(es) into {map_path}")


def _read_queries() -> Iterator[str]:
    stdin = click.get_text_stream("stdin")
    if stdin.isatty():
        while True:
            answer = questionary.text("Where do you want to go?", qmark="🧭").ask()
            if answer is None:
                return
            yield answer
    else:
        yield from stdin


def _answer(state: MapState, query: str, backend):
    name, position = navigate(state, query, backend)
    click.echo(f"{name}\t{format_point(position)}")


@cli.command()
@click.argument("map_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("query", required=False)
@click.option("--backend", "backend_path", type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help="Backend config JSON (defaults to TEXTLAND_LLM_URL / TEXTLAND_LLM_KEY).")
@click.option("--interactive", "-i", is_flag=True, help="Answer queries until end of input.")
@handle_errors
def query(map_path: Path, query: Optional[str], backend_path: Optional[Path], interactive: bool):
    """Print the landmark answering a natural-language request: name<TAB>x y z."""
    state = load_map(map_path)
    if not state.distilled:
        raise MapNotDistilled(f"{map_path} has not been distilled")
    backend = load_backend_config(backend_path).build()

    if not interactive:
        if not query:
            raise click.UsageError("give a QUERY or use --interactive")
        _answer(state, query, backend)
        return

    for line in _read_queries():
        line = line.strip()
        if not line:
            continue
        try:
            _answer(state, line, backend)
        except NoSelection as e:
            print_warning(str(e))


@cli.command()
@click.argument("scenario", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("out_dir", type=click.Path(file_okay=False, path_type=Path))
@handle_errors
def simulate(scenario: Path, out_dir: Path):
    """Generate poses, detections and ground truth from a scenario file."""
    print_header("simulate")
    stream = render_stream(load_scenario(scenario))
    paths = write_stream(stream, out_dir)
    for text in stream.never_visible:
        print_warning(f"sign {text!r} is never visible")
    print_info(f"{len(stream.poses)} poses, {len(stream.detections)} detections")
    print_success(f"Stream written to {paths['poses'].parent}")


@cli.command()
@click.argument("map_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False, path_type=Path),
              help="Write an SVG scatter of final positions.")
@handle_errors
def inspect(map_path: Path, plot_path: Optional[Path]):
    """Print the landmark table of a map."""
    state = load_map(map_path)
    table = make_table("Landmarks", ["Class", "Name", "Verdict", "Position", "Observations"])
    for row in inspect_rows(state):
        table.add_row(*map(escape, row))
    console.print(table)
    console.print(f"[dim]distilled: {'yes' if state.distilled else 'no'} · frames: {state.memory.frame}[/dim]")

    if plot_path:
        with open(plot_path, "w", encoding="utf-8") as f:
            f.write(render_svg(state.long_term_records(), title=map_path.name))
        print_success(f"Plot written to {plot_path}")


def main():
    """Main entry point for the textland CLI."""
    try:
        cli(prog_name="textland")
    except KeyboardInterrupt:
        console.print("\n[dim]Interrupted.[/dim]")
        sys.exit(130)


if __name__ == "__main__":
    main()
