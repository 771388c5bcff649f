"""Command-line front end.

Commands: ingest, schema, sms (show/matrix), sim, eval (cluster/rank),
sweep. Every command accepts ``--config FILE`` holding flat ``key=value``
lines that mirror its flags (explicit flags win), and every output starts
with comment lines recording the package version, a hash of the resolved
configuration, and the seed, so identical configurations rerun to identical
bytes.
"""

from __future__ import annotations

import hashlib
import io
import json
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np
from click.core import ParameterSource

from . import __version__
from .evaluation import (SweepConfig, kmeans, load_benchmark, load_judgments,
                         ndcg, nmi)
from .evaluation import sweep as run_sweep
from .hin import HIN, IngestError, extract_schema, load_hin
from .matrix import SmsRowEngine, SmsWeights, dump_matrix
from .similarity import bpcrw, bscse, pathsim_row, smss, smss_matrix
from .structures import (MetaPath, MetaStructure, SmsConstructionError,
                         build_sms)

_LAMBDA_GRID_DEFAULT = "0.1,0.3,0.5,0.7,0.9"
_BETA_PAIRS_DEFAULT = "1,9;2,8;3,7;4,6;5,5;6,4;7,3;8,2;9,1"

# config-file values arrive as strings; coerce per flag
_COERCERS = {"seed": int, "samples": int, "threads": int, "at": int,
             "lam": float, "alpha": float}
_KEY_ALIASES = {"lambda": "lam"}


@dataclass(frozen=True)
class RunConfig:
    """Resolved parameters of one similarity run."""

    nodes: str | None = None
    edges: str | None = None
    source_type: str | None = None
    source: str | None = None
    metric: str = "smss"
    lam: float = 0.5
    weights: tuple[float, ...] | None = None
    sweep: SweepConfig | None = None
    seed: int = 0
    output: str | None = None

    def validate(self) -> None:
        for p in (self.nodes, self.edges):
            if p is not None and not Path(p).exists():
                raise click.UsageError(f"no such file: {p}")
        if self.weights is not None and self.sweep is not None:
            raise click.UsageError(
                "give either explicit --weights or sweep settings, not both")
        if self.metric == "smss" and self.weights is None and self.sweep is None:
            raise click.UsageError("smss needs --weights or sweep settings")


# -- config plumbing -------------------------------------------------------

def _read_config_file(path: str) -> dict[str, str]:
    vals: dict[str, str] = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise click.UsageError(f"cannot read config file: {exc}")
    with fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise click.UsageError(
                    f"{path}:{line_no}: expected key=value, got {line!r}")
            key, val = line.split("=", 1)
            key = key.strip().lstrip("-").replace("-", "_")
            vals[_KEY_ALIASES.get(key, key)] = val.strip()
    return vals


def _merge_config(ctx: click.Context, params: dict) -> dict:
    """Fill params from the config file; CLI and env values win."""
    path = params.pop("config_path", None)
    if not path:
        return params
    for key, raw in _read_config_file(path).items():
        if key not in params:
            continue  # flag not used by this command; shared files are fine
        src = ctx.get_parameter_source(key)
        if src in (ParameterSource.COMMANDLINE, ParameterSource.ENVIRONMENT):
            continue
        coerce = _COERCERS.get(key, str)
        try:
            params[key] = coerce(raw)
        except ValueError:
            raise click.UsageError(
                f"config {key}={raw!r}: expected {coerce.__name__}")
    return params


def _require(params: dict, *keys: str) -> None:
    missing = [k for k in keys if params.get(k) is None]
    if missing:
        flags = ", ".join("--" + k.replace("_", "-") for k in missing)
        raise click.UsageError(f"missing required option(s): {flags}")


def _common_options(f):
    f = click.option("--config", "config_path", type=click.Path(),
                     default=None, help="flat key=value defaults file")(f)
    f = click.option("--seed", type=int, default=0, show_default=True,
                     help="single 64-bit seed for all randomness")(f)
    f = click.option("-o", "--output", type=click.Path(), default=None,
                     help="write to this file instead of stdout")(f)
    return f


# -- output plumbing -------------------------------------------------------

def _header(command: str, params: dict, echo: bool = False) -> list[str]:
    shown = {k: v for k, v in params.items()
             if v is not None and k not in ("output",)}
    blob = command + "".join(
        f"|{k}={shown[k]}" for k in sorted(shown))
    digest = hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]
    lines = [f"# hinsim {__version__}",
             f"# config {digest}",
             f"# seed {params.get('seed', 0)}"]
    if echo:
        lines += [f"# {k}={shown[k]}" for k in sorted(shown)]
    return lines


def _write(lines: list[str], output: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


# -- shared loading and parsing --------------------------------------------

def _load_network(nodes: str | None, edges: str | None) -> HIN:
    _require({"nodes": nodes, "edges": edges}, "nodes", "edges")
    for p in (nodes, edges):
        if not Path(p).exists():
            raise click.UsageError(f"no such file: {p}")
    try:
        return load_hin(nodes, edges)
    except IngestError as exc:
        click.echo(f"error: {exc}", err=True)
        raise SystemExit(2)


def _parse_floats(text: str, what: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise click.UsageError(f"{what}: expected comma-separated reals, "
                               f"got {text!r}")


def _parse_beta_pairs(text: str) -> tuple[tuple[float, float], ...]:
    pairs = []
    for chunk in text.split(";"):
        vals = _parse_floats(chunk, "--beta-pairs")
        if len(vals) != 2:
            raise click.UsageError(
                f"--beta-pairs: each pair needs two values, got {chunk!r}")
        pairs.append((vals[0], vals[1]))
    return tuple(pairs)


def _split_top(text: str) -> list[str]:
    parts, cur, depth = [], [], 0
    for ch in text:
        if ch == "(":
            depth += 1
            cur.append(ch)
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise click.UsageError(f"unbalanced parentheses in {text!r}")
            cur.append(ch)
        elif ch == "," and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise click.UsageError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur).strip())
    return parts


def _parse_layer_names(text: str) -> list[tuple[str, ...]]:
    s = text.strip()
    parts = _split_top(s)
    if len(parts) == 1 and s.startswith("(") and s.endswith(")"):
        parts = _split_top(s[1:-1])
    layers = []
    for part in parts:
        if part.startswith("(") and part.endswith(")"):
            names = tuple(x.strip() for x in part[1:-1].split(","))
        else:
            names = (part,)
        if any(not n or "(" in n or ")" in n for n in names):
            raise click.UsageError(f"bad layer spec: {part!r}")
        layers.append(names)
    return layers


def _structure_from_text(text: str, hin: HIN) -> MetaStructure:
    name_to_id = {t.name: t.id for t in hin.types}
    layers = []
    for names in _parse_layer_names(text):
        try:
            ids = tuple(sorted({name_to_id[n] for n in names}))
        except KeyError as exc:
            known = ", ".join(sorted(name_to_id))
            raise click.UsageError(
                f"unknown type {exc.args[0]!r}; known types: {known}")
        layers.append(ids)
    if len(layers) < 2 or len(layers[0]) != 1 or len(layers[-1]) != 1:
        raise click.UsageError(
            "structure needs single source and target layers, "
            "e.g. A,P,(V,T),P,A")
    return MetaStructure(tuple(layers), layers[0][0], layers[-1][0],
                         tuple(t.name for t in hin.types))


def _path_from_text(text: str, hin: HIN) -> MetaPath:
    name_to_id = {t.name: t.id for t in hin.types}
    layer_names = _parse_layer_names(text)
    if any(len(names) != 1 for names in layer_names):
        raise click.UsageError("a meta path has one type per layer")
    names = tuple(names[0] for names in layer_names)
    try:
        ids = tuple(name_to_id[n] for n in names)
    except KeyError as exc:
        known = ", ".join(sorted(name_to_id))
        raise click.UsageError(
            f"unknown type {exc.args[0]!r}; known types: {known}")
    return MetaPath(ids, names)


def _build_sms_for(hin: HIN, source_type: str | None, source: str | None):
    schema = extract_schema(hin)
    if source_type is None:
        if source is None:
            raise click.UsageError("need --source-type or --source")
        source_type = hin.object_type(source).name
    try:
        tid = schema.type_by_name(source_type).id
    except KeyError:
        known = ", ".join(sorted(t.name for t in hin.types))
        raise click.UsageError(
            f"unknown type {source_type!r}; known types: {known}")
    try:
        return schema, build_sms(schema, tid)
    except SmsConstructionError as exc:
        raise click.ClickException(str(exc))


def _check_object(hin: HIN, obj: str | None) -> None:
    if obj is not None and obj not in hin.objects:
        raise click.UsageError(f"unknown object {obj!r}")


def _weights_obj(lam: float, weights: tuple[float, ...]) -> SmsWeights:
    try:
        return SmsWeights(lam, weights)
    except ValueError as exc:
        raise click.UsageError(str(exc))


# -- commands ---------------------------------------------------------------

@click.group()
@click.version_option(__version__, prog_name="hinsim")
def main() -> None:
    """Similarity search over heterogeneous information networks."""


@main.command()
@click.argument("nodes", type=click.Path())
@click.argument("edges", type=click.Path())
@_common_options
@click.pass_context
def ingest(ctx, nodes, edges, config_path, seed, output):
    """Load and validate a network; print its census."""
    params = _merge_config(ctx, dict(nodes=nodes, edges=edges,
                                     config_path=config_path, seed=seed,
                                     output=output))
    hin = _load_network(params["nodes"], params["edges"])
    lines = _header("ingest", params)
    lines.append(f"{len(hin.types)} object types, "
                 f"{hin.n_link_types()} link types, "
                 f"{hin.n_objects()} objects")
    for t in sorted(hin.types, key=lambda t: t.name):
        lines.append(f"type {t.name}: {hin.count(t.id)} objects")
    for lo, hi, name in sorted(
            hin.undirected_link_types,
            key=lambda e: (hin.types[e[0]].name, hin.types[e[1]].name, e[2])):
        lines.append(
            f"link {hin.types[lo].name} -- {hin.types[hi].name} [{name}]")
    _write(lines, params["output"])


@main.command()
@click.argument("nodes", type=click.Path())
@click.argument("edges", type=click.Path())
@_common_options
@click.pass_context
def schema(ctx, nodes, edges, config_path, seed, output):
    """Print the type-level graph extracted from the data."""
    params = _merge_config(ctx, dict(nodes=nodes, edges=edges,
                                     config_path=config_path, seed=seed,
                                     output=output))
    hin = _load_network(params["nodes"], params["edges"])
    sch = extract_schema(hin)
    lines = _header("schema", params)
    lines.append("types: " + ", ".join(sorted(t.name for t in sch.nodes)))
    pairs = sorted((min(lt.source_type.name, lt.target_type.name),
                    max(lt.source_type.name, lt.target_type.name))
                   for lt in sch.edges)
    lines += [f"{a} -- {b}" for a, b in pairs]
    _write(lines, params["output"])


@main.group()
def sms() -> None:
    """Stratified meta structure inspection."""


@sms.command("show")
@click.option("--nodes", type=click.Path(), default=None)
@click.option("--edges", type=click.Path(), default=None)
@click.option("--source-type", default=None,
              help="object type the structure is rooted at")
@click.option("--depth", type=int, default=None,
              help="last layer to print (default 2*h0+2)")
@_common_options
@click.pass_context
def sms_show(ctx, nodes, edges, source_type, depth, config_path, seed, output):
    """Print h0 and the layer sets in Type_layer notation."""
    params = _merge_config(ctx, dict(nodes=nodes, edges=edges,
                                     source_type=source_type, depth=depth,
                                     config_path=config_path, seed=seed,
                                     output=output))
    _require(params, "source_type")
    hin = _load_network(params["nodes"], params["edges"])
    _, sms_obj = _build_sms_for(hin, params["source_type"], None)
    lines = _header("sms show", params)
    lines.append(f"h0 = {sms_obj.h0}")
    lines += sms_obj.describe(params["depth"]).splitlines()
    _write(lines, params["output"])


@sms.command("matrix")
@click.option("--nodes", type=click.Path(), default=None)
@click.option("--edges", type=click.Path(), default=None)
@click.option("--source-type", default=None)
@click.option("--source", default=None,
              help="dump one object's row instead of the whole matrix")
@click.option("--lambda", "lam", type=float, default=0.5, show_default=True)
@click.option("--weights", default=None, help="comma-separated, sums to 1")
@_common_options
@click.pass_context
def sms_matrix(ctx, nodes, edges, source_type, source, lam, weights,
               config_path, seed, output):
    """Dump normalized similarity rows in `row col value` format."""
    params = _merge_config(ctx, dict(nodes=nodes, edges=edges,
                                     source_type=source_type, source=source,
                                     lam=lam, weights=weights,
                                     config_path=config_path, seed=seed,
                                     output=output))
    _require(params, "weights")
    hin = _load_network(params["nodes"], params["edges"])
    _check_object(hin, params["source"])
    schema_, sms_obj = _build_sms_for(hin, params["source_type"],
                                      params["source"])
    w = _weights_obj(params["lam"],
                     _parse_floats(params["weights"], "--weights"))
    engine = SmsRowEngine(hin, sms_obj, schema_)
    if params["source"] is not None:
        sources = [params["source"]]
    else:
        sources = list(hin.members[sms_obj.source_type])
    try:
        mat = np.vstack([engine.row(s, w) for s in sources])
    except ValueError as exc:
        raise click.ClickException(str(exc))
    buf = io.StringIO()
    dump_matrix(mat, buf)
    lines = _header("sms matrix", params) + buf.getvalue().splitlines()
    _write(lines, params["output"])


@main.command()
@click.option("--nodes", type=click.Path(), default=None)
@click.option("--edges", type=click.Path(), default=None)
@click.option("--metric", type=click.Choice(["smss", "pathsim", "bpcrw",
                                             "bscse"]),
              default="smss", show_default=True)
@click.option("--source", default=None, help="source object id")
@click.option("--target", default=None,
              help="restrict output to this target object")
@click.option("--source-type", default=None,
              help="SMS root type (default: the source object's type)")
@click.option("--lambda", "lam", type=float, default=0.5, show_default=True,
              help="decay of the recurrent term (smss)")
@click.option("--weights", default=None,
              help="comma-separated height weights, sums to 1 (smss)")
@click.option("--alpha", type=float, default=1.0, show_default=True,
              help="branching bias exponent (bpcrw/bscse)")
@click.option("--path", "path_text", default=None,
              help="meta path, e.g. A,P,A (pathsim/bpcrw)")
@click.option("--structure", "structure_text", default=None,
              help="meta structure, e.g. A,P,(V,T),P,A (pathsim/bscse)")
@_common_options
@click.pass_context
def sim(ctx, nodes, edges, metric, source, target, source_type, lam, weights,
        alpha, path_text, structure_text, config_path, seed, output):
    """Score a source object against targets; TSV sorted by score."""
    params = _merge_config(ctx, dict(
        nodes=nodes, edges=edges, metric=metric, source=source, target=target,
        source_type=source_type, lam=lam, weights=weights, alpha=alpha,
        path=path_text, structure=structure_text, config_path=config_path,
        seed=seed, output=output))
    _require(params, "source")
    hin = _load_network(params["nodes"], params["edges"])
    _check_object(hin, params["source"])
    _check_object(hin, params["target"])
    w_tuple = (_parse_floats(params["weights"], "--weights")
               if params["weights"] is not None else None)
    cfg = RunConfig(nodes=params["nodes"], edges=params["edges"],
                    source_type=params["source_type"],
                    source=params["source"], metric=params["metric"],
                    lam=params["lam"], weights=w_tuple, sweep=None,
                    seed=params["seed"], output=params["output"])
    cfg.validate()

    try:
        result = _dispatch_sim(hin, cfg, params)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    if params["target"] is not None:
        rows = [(params["target"], result.score_of(params["target"]))]
    else:
        rows = result.ranked()
    lines = _header("sim", params)
    lines += [f"{params['source']}\t{t}\t{s:.6f}" for t, s in rows]
    _write(lines, params["output"])


def _dispatch_sim(hin: HIN, cfg: RunConfig, params: dict):
    metric = cfg.metric
    if metric == "smss":
        schema_, sms_obj = _build_sms_for(hin, cfg.source_type, cfg.source)
        weights = _weights_obj(cfg.lam, cfg.weights)
        engine = SmsRowEngine(hin, sms_obj, schema_)
        return smss(hin, sms_obj, cfg.source, weights, engine=engine)
    if metric == "pathsim":
        text = params["path"] or params["structure"]
        if text is None:
            raise click.UsageError("pathsim needs --path or --structure")
        structure = _structure_from_text(text, hin)
        return pathsim_row(hin, structure, cfg.source)
    if metric == "bpcrw":
        if params["path"] is None:
            raise click.UsageError("bpcrw needs --path")
        mp = _path_from_text(params["path"], hin)
        return bpcrw(hin, mp, cfg.source, params["alpha"])
    # bscse
    text = params["structure"] or params["path"]
    if text is None:
        raise click.UsageError("bscse needs --structure or --path")
    structure = _structure_from_text(text, hin)
    return bscse(hin, structure, cfg.source, params["alpha"])


@main.group(name="eval")
def eval_group() -> None:
    """Single-configuration evaluation against ground truth."""


@eval_group.command("cluster")
@click.option("--nodes", type=click.Path(), default=None)
@click.option("--edges", type=click.Path(), default=None)
@click.option("--source-type", default=None)
@click.option("--benchmark", type=click.Path(), default=None,
              help="TSV object<TAB>cluster_label")
@click.option("--lambda", "lam", type=float, default=0.5, show_default=True)
@click.option("--weights", default=None)
@_common_options
@click.pass_context
def eval_cluster(ctx, nodes, edges, source_type, benchmark, lam, weights,
                 config_path, seed, output):
    """k-means over similarity rows, scored by NMI."""
    params = _merge_config(ctx, dict(nodes=nodes, edges=edges,
                                     source_type=source_type,
                                     benchmark=benchmark, lam=lam,
                                     weights=weights, config_path=config_path,
                                     seed=seed, output=output))
    _require(params, "benchmark", "source_type", "weights")
    hin = _load_network(params["nodes"], params["edges"])
    if not Path(params["benchmark"]).exists():
        raise click.UsageError(f"no such file: {params['benchmark']}")
    try:
        bench = load_benchmark(params["benchmark"])
        bench.validate_against(hin)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    schema_, sms_obj = _build_sms_for(hin, params["source_type"], None)
    w = _weights_obj(params["lam"],
                     _parse_floats(params["weights"], "--weights"))
    engine = SmsRowEngine(hin, sms_obj, schema_)
    objects = sorted(bench.labels)
    try:
        feats = smss_matrix(hin, sms_obj, objects, w, engine=engine)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    pred = kmeans(feats, bench.k, params["seed"])
    score = nmi(pred.tolist(), [bench.labels[o] for o in objects])
    lines = _header("eval cluster", params, echo=True)
    lines.append(f"nmi\t{score:.6f}")
    _write(lines, params["output"])


@eval_group.command("rank")
@click.option("--nodes", type=click.Path(), default=None)
@click.option("--edges", type=click.Path(), default=None)
@click.option("--source-type", default=None)
@click.option("--judgments", type=click.Path(), default=None,
              help="TSV source<TAB>object<TAB>gain(0..3)")
@click.option("--source", default=None)
@click.option("--lambda", "lam", type=float, default=0.5, show_default=True)
@click.option("--weights", default=None)
@click.option("--at", type=int, default=None,
              help="nDCG cutoff (default: full list)")
@_common_options
@click.pass_context
def eval_rank(ctx, nodes, edges, source_type, judgments, source, lam, weights,
              at, config_path, seed, output):
    """Rank targets for one source, scored by nDCG."""
    params = _merge_config(ctx, dict(nodes=nodes, edges=edges,
                                     source_type=source_type,
                                     judgments=judgments, source=source,
                                     lam=lam, weights=weights, at=at,
                                     config_path=config_path, seed=seed,
                                     output=output))
    _require(params, "judgments", "source", "weights")
    hin = _load_network(params["nodes"], params["edges"])
    _check_object(hin, params["source"])
    if not Path(params["judgments"]).exists():
        raise click.UsageError(f"no such file: {params['judgments']}")
    try:
        judg = load_judgments(params["judgments"], params["source"])
    except ValueError as exc:
        raise click.ClickException(str(exc))
    schema_, sms_obj = _build_sms_for(hin, params["source_type"],
                                      params["source"])
    w = _weights_obj(params["lam"],
                     _parse_floats(params["weights"], "--weights"))
    engine = SmsRowEngine(hin, sms_obj, schema_)
    try:
        result = smss(hin, sms_obj, params["source"], w, engine=engine)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    ranking = [t for t, _ in result.ranked()]
    score = ndcg(ranking, judg, at=params["at"])
    lines = _header("eval rank", params, echo=True)
    lines.append(f"ndcg\t{score:.6f}")
    _write(lines, params["output"])


@main.command(name="sweep")
@click.option("--nodes", type=click.Path(), default=None)
@click.option("--edges", type=click.Path(), default=None)
@click.option("--source-type", default=None)
@click.option("--task", type=click.Choice(["cluster", "rank"]), default=None)
@click.option("--benchmark", type=click.Path(), default=None)
@click.option("--judgments", type=click.Path(), default=None)
@click.option("--source", default=None)
@click.option("--lambda-grid", default=_LAMBDA_GRID_DEFAULT,
              show_default=True)
@click.option("--beta-pairs", default=_BETA_PAIRS_DEFAULT, show_default=True,
              help="semicolon-separated a,b hyper-parameter pairs")
@click.option("--samples", type=int, default=10, show_default=True,
              help="weight samples per Beta pair")
@click.option("--threads", type=int, default=1, show_default=True,
              envvar="HINSIM_THREADS",
              help="worker threads for sweep cells")
@_common_options
@click.pass_context
def sweep_cmd(ctx, nodes, edges, source_type, task, benchmark, judgments,
              source, lambda_grid, beta_pairs, samples, threads, config_path,
              seed, output):
    """Grid-evaluate (lambda, sampled weights); TSV lambda/w/score."""
    params = _merge_config(ctx, dict(
        nodes=nodes, edges=edges, source_type=source_type, task=task,
        benchmark=benchmark, judgments=judgments, source=source,
        lambda_grid=lambda_grid, beta_pairs=beta_pairs, samples=samples,
        threads=threads, config_path=config_path, seed=seed, output=output))
    _require(params, "source_type", "task")
    if params["task"] == "cluster":
        _require(params, "benchmark")
    else:
        _require(params, "judgments", "source")
    hin = _load_network(params["nodes"], params["edges"])
    try:
        cfg = SweepConfig(
            lambda_grid=_parse_floats(params["lambda_grid"], "--lambda-grid"),
            beta_pairs=_parse_beta_pairs(params["beta_pairs"]),
            samples_per_pair=params["samples"], seed=params["seed"])
    except ValueError as exc:
        raise click.UsageError(str(exc))
    run_cfg = RunConfig(nodes=params["nodes"], edges=params["edges"],
                        source_type=params["source_type"],
                        source=params["source"], metric="smss",
                        weights=None, sweep=cfg, seed=params["seed"],
                        output=params["output"])
    run_cfg.validate()
    schema_, sms_obj = _build_sms_for(hin, params["source_type"], None)

    bench = judg = None
    try:
        if params["task"] == "cluster":
            bench = load_benchmark(params["benchmark"])
            bench.validate_against(hin)
        else:
            _check_object(hin, params["source"])
            judg = load_judgments(params["judgments"], params["source"])
    except ValueError as exc:
        raise click.ClickException(str(exc))

    try:
        result = run_sweep(hin, sms_obj, params["task"], cfg, benchmark=bench,
                           judgments=judg, source=params["source"],
                           threads=params["threads"])
    except ValueError as exc:
        raise click.ClickException(str(exc))

    lines = _header("sweep", params, echo=True)
    for row in result.rows:
        w_json = json.dumps([float(x) for x in row.w])
        lines.append(f"{row.lam:g}\t{w_json}\t{row.score:.6f}")
    for lam in sorted(result.per_lambda_best):
        row = result.per_lambda_best[lam]
        w_json = json.dumps([float(x) for x in row.w])
        lines.append(f"# best[lambda={lam:g}] w={w_json} "
                     f"score={row.score:.6f}")
    if result.best is not None:
        w_json = json.dumps([float(x) for x in result.best.w])
        lines.append(f"# best lambda={result.best.lam:g} w={w_json} "
                     f"score={result.best.score:.6f}")
    _write(lines, params["output"])


if __name__ == "__main__":
    main()
