import os
import sys

import click
from loguru import logger

from cwsclique.errors import CWSError, UsageError
from cwsclique.model.gf2 import BitString, ClassicalCode
from cwsclique.utils.hparam_utils import get_logger

GRAPH_CHOICES = ["all", "iso", "lc", "sample"]
STRUCTURE_ACTIONS = ["linear", "label", "extend-dim3", "double"]


class CWSGroup(click.Group):
    """Maps library errors to a one-line message and exit code 1."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except CWSError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(1)


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


def _api(ctx, registry=None):
    from cwsclique.app.api import CWSSearch
    return CWSSearch(config_path=ctx.obj["config"], registry_path=registry)


@click.group(cls=CWSGroup)
@click.option("--config", "-c", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON config, defaults to the packaged one")
@click.option("--quiet", "-q", is_flag=True, default=False, help="Warnings only, no progress bars")
@click.pass_context
def cli(ctx, config, quiet):
    ctx.ensure_object(dict)
    ctx.obj["config"] = config
    ctx.obj["quiet"] = quiet
    logger.remove()
    logger.add(sys.stderr, level="WARNING" if quiet else "INFO")


@cli.command("map-errors")
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--d", "-d", "d", type=int, required=True, help="Distance; errors of weight < d")
@click.option("--jobs", "-j", default=1, show_default=True, help="Threads for the partitioned setup")
@click.option("--out", "-o", default=None, help="Output file, defaults to stdout")
@click.option("--verbose", "-v", is_flag=True, default=False, help="Also print CL[0] and degeneracy to stderr")
@click.pass_context
def map_errors(ctx, graph_file, d, jobs, out, verbose):
    """CL and D arrays of a graph as hex dumps."""
    from cwsclique.utils.io_utils import read_graph
    g = read_graph(graph_file)
    arrays = _api(ctx).map_errors(g, d, workers=jobs)
    _emit(arrays.to_dump("CL") + arrays.to_dump("D"), out)
    if verbose:
        click.echo(f"CL[0]={arrays.cl_bit(0)}", err=True)
        click.echo(f"degenerate={str(arrays.degenerate).lower()}", err=True)


@cli.command("clique-graph")
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--d", "-d", "d", type=int, required=True)
@click.option("--out", "-o", default=None)
@click.option("--verbose", "-v", is_flag=True, default=False, help="Also print the vertex codewords to stderr")
@click.pass_context
def clique_graph(ctx, graph_file, d, out, verbose):
    """Adjacency dump of the CWS clique graph."""
    from cwsclique.utils.io_utils import read_graph
    cg = _api(ctx).clique_graph(read_graph(graph_file), d)
    _emit(cg.to_dump(), out)
    if verbose:
        click.echo("codewords=" + " ".join(str(BitString(v, cg.n)) for v in cg.vertices), err=True)


@cli.command()
@click.option("--n", "-n", "n", type=int, default=None)
@click.option("--d", "-d", "d", type=int, default=None)
@click.option("--k", "-k", "target_K", type=int, default=None, help="Look for a code of this size only")
@click.option("--graphs", "-g", type=click.Choice(GRAPH_CHOICES), default=None,
              help="all labeled graphs, isomorphism classes, LC orbits or random samples")
@click.option("--graph", "graph_file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Search a single graph file")
@click.option("--heuristic", is_flag=True, default=False, help="Randomized greedy cliques; never conclusive")
@click.option("--jobs", "-j", type=int, default=None)
@click.option("--seed", "-s", type=int, default=None)
@click.option("--budget", "-b", type=int, default=None, help="Node expansions per clique search")
@click.option("--samples", type=int, default=None)
@click.option("--out", "-o", default=None, help="Result file, defaults to stdout")
@click.option("--checkpoint", type=click.Path(dir_okay=False), default=None)
@click.option("--registry", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--run-dir", default=None,
              help="Directory for the job config, checkpoint, logs and result; resumed when it exists")
@click.pass_context
def search(ctx, n, d, target_K, graphs, graph_file, heuristic, jobs, seed, budget, samples, out,
           checkpoint, registry, run_dir):
    """Search graphs for the largest ((n,K,d)) CWS code.

    Exits 0 when a code is found or the search completed, 3 when absence is
    proven and 4 when the answer is inconclusive.
    """
    if graph_file is not None:
        if graphs is not None:
            raise UsageError("--graph and --graphs are exclusive")
        graphs = "file"
    api = _api(ctx, registry)
    overrides = dict(n=n, d=d, target_K=target_K, graphs=graphs, graph_file=graph_file,
                     exactness="heuristic" if heuristic else None, jobs=jobs, seed=seed,
                     budget=budget, samples=samples)
    if run_dir is not None:
        if checkpoint is not None:
            raise UsageError("--run-dir keeps its own checkpoint; drop --checkpoint")
        os.makedirs(run_dir, exist_ok=True)
        get_logger(run_dir, "debug.log")
        logger.add(os.path.join(run_dir, "search.log"), level="INFO")
        result = api.search_in_dir(run_dir, quiet=ctx.obj["quiet"], **overrides)
    else:
        result = api.search(checkpoint=checkpoint, quiet=ctx.obj["quiet"], **overrides)
    _emit(result.to_text(), out)
    if result.error is not None:
        raise CWSError(f"search aborted: {result.error}")
    ctx.exit(result.exit_code)


@cli.command()
@click.argument("code_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--d", "-d", "d", type=int, default=None, help="Distance to check, defaults to the claimed one")
@click.option("--errors", "errors_file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Explicit error set, one Pauli string per line, instead of all errors of weight < d")
@click.pass_context
def verify(ctx, code_file, d, errors_file):
    """Detection, distance and Knill-Laflamme checks of a code file. Exits 1 when detection fails."""
    from cwsclique.utils.io_utils import read_code, read_error_set
    q = read_code(code_file)
    errors = read_error_set(errors_file, q.n) if errors_file else None
    report = _api(ctx).verify(q, d, errors)
    lines = [f"n={q.n}", f"K={q.K}"] + report.to_lines(q.n)
    click.echo("\n".join(lines))
    ctx.exit(0 if report.detects else 1)


@cli.command()
@click.argument("input_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "-o", default=None, help="Output file, defaults to stdout")
@click.option("--graph-out", default=None, help="Graph file for the standard form, next to --out by default")
@click.option("--steps", is_flag=True, default=False, help="Print every step of the conversion chain")
@click.pass_context
def convert(ctx, input_file, out, graph_out, steps):
    """AC06 data to a standard-form code file, or a code file to AC06 data."""
    from cwsclique.utils import io_utils
    with open(input_file, "r", encoding="utf-8") as f:
        text = f.read()
    api = _api(ctx)
    if any(line.strip() == "A:" for line in text.splitlines()):
        q, chain = api.convert(io_utils.parse_ac06(text, input_file))
        if steps:
            for name, value in chain.steps.items():
                click.echo(f"[{name}] {value}", err=True)
        if out:
            io_utils.write_code(out, q, graph_out)
        else:
            click.echo(io_utils.format_graph(q.graph) + io_utils.format_code(q, "-"), nl=False)
    else:
        q = io_utils.parse_code(text, input_file)
        _emit(io_utils.format_ac06(api.to_ac06(q)), out)


@cli.command()
@click.argument("code_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("action", type=click.Choice(STRUCTURE_ACTIONS))
@click.option("--subcode", default=None, help="Comma-separated codewords of a linear subcode (double)")
@click.option("--v", "v", default=None, help="Codeword outside the subcode (double)")
@click.option("--out", "-o", default=None, help="Code file for extend-dim3 and double")
@click.pass_context
def structure(ctx, code_file, action, subcode, v, out):
    """Linearity, additivity label and the constructions giving additive codes."""
    from cwsclique.utils import io_utils
    q = io_utils.read_code(code_file)
    sub = ClassicalCode.from_strs(subcode.split(",")) if subcode else None
    word = int(BitString.from_str(v)) if v else None
    result = _api(ctx).structure(q, action, sub, word)
    if action == "linear":
        click.echo(f"is_linear={str(result.is_linear).lower()}")
        if result.violating_pair is not None:
            click.echo("violating_pair=" + ",".join(str(BitString(c, q.n)) for c in result.violating_pair))
    elif action == "label":
        click.echo(f"label={result}")
    elif out:
        io_utils.write_code(out, result)
    else:
        click.echo(io_utils.format_code(result, "-"), nl=False)


@cli.command()
@click.argument("graph_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
def orbit(ctx, graph_file):
    """Canonical ids of the local-complementation orbit of a graph."""
    from cwsclique.app.api import CWSSearch
    from cwsclique.utils.io_utils import read_graph
    g = read_graph(graph_file)
    ids = CWSSearch.orbit(g)
    click.echo(f"canonical={CWSSearch.canonical_id(g)}")
    click.echo(f"orbit_size={len(ids)}")
    for gid in ids:
        click.echo(gid)


if __name__ == "__main__":
    cli()
