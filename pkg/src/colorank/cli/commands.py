"""
Colorank CLI Commands
"""

import json
import logging
import random
import sys
from functools import wraps
from typing import Any, Dict, Iterable, List, Optional

import click
import yaml

from ..core.config import ColorankConfig, TemplateBounds, load_config, resolve_output_path
from ..core.errors import (
    BudgetExceeded,
    ConsistencyError,
    DegenerateError,
    NotFoundError,
    ParseError,
    PreconditionError,
)
from ..core.generators import (
    random_basic_tree,
    random_coloring_tree,
    random_graph_model,
    random_pair_coloring,
)
from ..core.ordinal import OrdinalCNF, least_above, ord_parse
from ..core.report import ValidationReport
from ..core.sequences import encode_seq
from ..forcing.condition import validate_condition
from ..forcing.homogeneous import generic_homogeneous, verify_domination
from ..forcing.poset import forcing_height, forcing_templates, forcing_universal
from ..geometry.scene import defect_sweep as sweep_scene
from ..geometry.scene import realize as realize_scene
from ..io.formats import (
    detect_kind,
    dump_basic,
    dump_coloring,
    dump_family,
    dump_model,
    dump_oracle,
    dump_rank_report,
    dump_ranked,
    dump_scene,
    dump_tree,
    parse_basic,
    parse_coloring,
    parse_condition,
    parse_model,
    parse_oracle,
    parse_ranked,
    parse_scene,
    parse_tree,
    read_text,
    write_atomic,
)
from ..model.rank import oracle_from_model, validate_oracle
from ..trees.basic import validate_basic
from ..trees.chain import extract_splitting_chain
from ..trees.coloring_tree import validate_tree
from ..trees.rank import RankEngine, rank_all
from ..trees.ranked import RankedTree, validate_ranked
from ..universal.builder import UniversalTree, build_universal
from ..universal.embed import coloring_templates, embed_coloring, embed_ranked, required_height
from ..universal.template import level_templates

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

FORMAT_OPTION = click.option('--format', '-f', 'fmt', type=click.Choice(['text', 'json', 'yaml']),
                             default='text', help='Summary format')
INPUT_OPTION = click.option('--input', '-i', 'input_path', required=True, type=click.Path(dir_okay=False),
                            help='Input file')
OUT_OPTION = click.option('--out', '-o', help='Output file (stdout when omitted)')


def guarded(command):
    """Map failures to exit codes: 2 for bad input, 3 for exhausted budgets, 1 otherwise"""
    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (ParseError, PreconditionError, DegenerateError) as e:
            click.echo(f"❌ Input error: {e}", err=True)
            sys.exit(EXIT_INPUT)
        except BudgetExceeded as e:
            click.echo(f"❌ Budget exhausted: {e}", err=True)
            sys.exit(EXIT_BUDGET)
        except (NotFoundError, ConsistencyError) as e:
            click.echo(f"❌ {e}", err=True)
            sys.exit(EXIT_VIOLATIONS)

    return wrapper


def _config(ctx, **sections: Dict[str, Any]) -> ColorankConfig:
    return load_config(ctx.obj.get('config_path'), sections)


def _gamma(text: Optional[str]) -> Optional[OrdinalCNF]:
    return ord_parse(text) if text is not None else None


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        path = write_atomic(resolve_output_path(out), text)
        click.echo(f"✅ Wrote {path}", err=True)
    else:
        click.echo(text, nl=False)


def _show(reports: Iterable[ValidationReport], fmt: str, err: bool = False) -> bool:
    """Print reports; True when all are clean"""
    reports = list(reports)
    if fmt == 'json':
        click.echo(json.dumps([r.to_dict() for r in reports], indent=2), err=err)
    elif fmt == 'yaml':
        click.echo(yaml.dump([r.to_dict() for r in reports], default_flow_style=False), err=err)
    else:
        for report in reports:
            click.echo(("✅ " if report.ok else "❌ ") + report.summary(), err=err)
            for issue in report.issues:
                click.echo(f"  [{issue.kind}] {issue.message}" +
                           (f" ({issue.witness})" if issue.witness is not None else ""), err=err)
            for note in report.notes:
                click.echo(f"  {note}", err=err)
    return all(r.ok for r in reports)


def _finish(ok: bool) -> None:
    sys.exit(EXIT_OK if ok else EXIT_VIOLATIONS)


@click.command('validate')
@INPUT_OPTION
@click.option('--oracle', 'oracle_path', help='Oracle file (conditions)')
@click.option('--universal', 'universal_path', help='Universal tree file (conditions)')
@click.option('--model', 'model_path', help='Model file (oracles)')
@click.option('--budget-approx', type=int, help='Approximation count guard')
@FORMAT_OPTION
@click.pass_context
@guarded
def validate_command(ctx, input_path, oracle_path, universal_path, model_path, budget_approx, fmt):
    """Validate a tree, basic tree, ranked tree, condition or oracle file"""
    config = _config(ctx, budgets={'approx_budget': budget_approx})
    cap, budget = config.budgets.approx_cap, config.budgets.approx_budget
    text = read_text(input_path)
    kind = detect_kind(text)
    if kind == 'tree':
        report = validate_tree(parse_tree(text, input_path))
    elif kind == 'btree':
        report = validate_basic(parse_basic(text, input_path))
    elif kind in ('ranked', 'universal'):
        report = validate_ranked(parse_ranked(text, input_path)[0], cap, budget)
    elif kind == 'cond':
        if not oracle_path or not universal_path:
            raise PreconditionError("validating a condition needs --oracle and --universal")
        p = parse_condition(text, input_path)
        oracle = parse_oracle(read_text(oracle_path), oracle_path)
        U, _ = parse_ranked(read_text(universal_path), universal_path)
        report = validate_condition(p, oracle, U)
    elif kind == 'oracle':
        model = parse_model(read_text(model_path), model_path) if model_path else None
        report = validate_oracle(parse_oracle(text, input_path), model)
    else:
        raise ParseError(f"unknown file kind '{kind}'", None, input_path)
    _finish(_show([report], fmt))


def _load_tree(path: str):
    text = read_text(path)
    kind = detect_kind(text)
    if kind == 'tree':
        return parse_tree(text, path)
    if kind == 'btree':
        return parse_basic(text, path)
    if kind in ('ranked', 'universal'):
        return parse_ranked(text, path)[0].base
    raise ParseError(f"expected a tree file, found '{kind}'", None, path)


@click.command('rank')
@INPUT_OPTION
@OUT_OPTION
@click.option('--budget-approx', type=int, help='Approximation count guard')
@click.pass_context
@guarded
def rank_command(ctx, input_path, out, budget_approx):
    """Emit the rank report of a tree truncation"""
    config = _config(ctx, budgets={'approx_budget': budget_approx})
    report = rank_all(_load_tree(input_path), config.budgets.approx_cap, config.budgets.approx_budget)
    _emit(dump_rank_report(report), out)


@click.command('chain')
@INPUT_OPTION
@click.option('--depth', type=int, required=True, help='Number of splitting steps')
@click.option('--start', help='Key of the starting approximation (default: highest ranked at the lowest level)')
@click.option('--budget-approx', type=int, help='Approximation count guard')
@click.pass_context
@guarded
def chain_command(ctx, input_path, depth, start, budget_approx):
    """Extract a splitting chain of the given depth"""
    config = _config(ctx, budgets={'approx_budget': budget_approx})
    tree = _load_tree(input_path)
    engine = RankEngine(tree, config.budgets.approx_cap, config.budgets.approx_budget)
    candidates = engine.all()
    if start is not None:
        matches = [a for a in candidates if a.key() == start]
        if not matches:
            raise PreconditionError(f"no approximation with key {start}")
        a = matches[0]
    else:
        if not candidates:
            raise PreconditionError("tree has no approximations")
        values = engine.values()
        lowest = min(a.level for a in candidates)
        a = max((c for c in candidates if c.level == lowest), key=lambda c: (values[c], c.key()))
    result = extract_splitting_chain(tree, a, depth, config.budgets.approx_budget)
    for step in result.chain:
        click.echo(f"chain {step.level} {step.key()}")
    click.echo(f"explored {result.explored}")
    if not result.success:
        click.echo(f"❌ No splitting chain of depth {depth}; reached {result.reached} at {result.frontier.key()}",
                   err=True)
    _finish(result.success)


@click.command('build-universal')
@click.option('--gamma', required=True, help='Rank bound, e.g. 3, w*1 or w^2*2+1')
@click.option('--height', type=int, required=True, help='Number of levels')
@OUT_OPTION
@click.option('--budget-nodes', type=int, help='Node guard')
@click.option('--budget-approx', type=int, help='Approximation count guard')
@click.pass_context
@guarded
def build_universal_command(ctx, gamma, height, out, budget_nodes, budget_approx):
    """Build the height-H truncation of the universal gamma-ranked tree"""
    config = _config(ctx, budgets={'node_budget': budget_nodes, 'approx_budget': budget_approx})
    U = build_universal(ord_parse(gamma), height, config.templates, config.budgets)
    _emit(dump_ranked(U.tree, universal=True), out)
    lower = rank_all(U.tree.base, config.budgets.approx_cap, config.budgets.approx_budget).tree_rank
    click.echo(f"universal gamma={U.gamma} height={U.height} nodes={U.node_count()} rktree>={lower}", err=True)


def _universal_for(config: ColorankConfig, universal_path: Optional[str], gamma: OrdinalCNF,
                   extra: List[RankedTree]) -> UniversalTree:
    """Universal tree read from a file built with the same configuration, or built to fit extra"""
    if universal_path:
        R, _ = parse_ranked(read_text(universal_path), universal_path)
        return UniversalTree.adopt(R, config.templates, config.budgets, extra)
    height = required_height(extra, gamma, config.budgets.max_height)
    return build_universal(gamma, height, config.templates, config.budgets, extra)


@click.command('embed')
@INPUT_OPTION
@OUT_OPTION
@click.option('--mode', type=click.Choice(['ranked', 'coloring']), default='ranked',
              help='Embed a ranked tree, or the branches of a basic coloring')
@click.option('--universal', 'universal_path', help='Universal tree file to embed into')
@click.option('--gamma', help='Rank bound of a freshly built universal tree (default: just above the input ranks)')
@click.option('--budget-nodes', type=int, help='Node guard')
@click.option('--budget-approx', type=int, help='Approximation count guard')
@click.pass_context
@guarded
def embed_command(ctx, input_path, out, mode, universal_path, gamma, budget_nodes, budget_approx):
    """Embed a ranked tree or a coloring into a universal tree copying its templates"""
    config = _config(ctx, budgets={'node_budget': budget_nodes, 'approx_budget': budget_approx})
    cap, budget = config.budgets.approx_cap, config.budgets.approx_budget
    text = read_text(input_path)
    if mode == 'ranked':
        S, _ = parse_ranked(text, input_path)
        extra = level_templates(S, cap, budget)
        bound = _gamma(gamma) or max(S.gamma, least_above(value for T in extra for value in T.r.values()))
        U = _universal_for(config, universal_path, bound, extra)
        e = embed_ranked(S, U)
        _emit("\n".join(e.describe()) + "\n", out)
        _finish(True)
    S = parse_basic(text, input_path)
    extra = coloring_templates(S, cap, budget)
    bound = _gamma(gamma) or least_above(value for T in extra for value in T.r.values())
    U = _universal_for(config, universal_path, bound, extra)
    result = embed_coloring(S, U)
    lines = [f"phi {encode_seq(x)} {encode_seq(y)}" for x, y in sorted(result.phi.items())]
    lines.append(f"rank {result.rank} augmented={result.augmented_rank}")
    _emit("\n".join(lines) + "\n", out)
    if not result.rank_preserved:
        click.echo(f"❌ Augmentation changed the rank: {result.rank} -> {result.augmented_rank}", err=True)
    _finish(result.rank_preserved)


@click.command('model-rank')
@INPUT_OPTION
@OUT_OPTION
@click.option('--theta', type=int, help='Finiteness threshold, at least 2')
@FORMAT_OPTION
@click.pass_context
@guarded
def model_rank_command(ctx, input_path, out, theta, fmt):
    """Compute the theta-rank, critical tables and the oracle of a model"""
    config = _config(ctx, forcing={'theta': theta})
    model = parse_model(read_text(input_path), input_path)
    oracle = oracle_from_model(model, config.forcing.theta)
    _emit(dump_oracle(oracle), out)
    click.echo(f"model rank {oracle.model_rank()} over {len(oracle.domain())} sets", err=True)
    _finish(_show([validate_oracle(oracle, model)], fmt, err=True))


def _load_oracle(path: str, theta: int):
    text = read_text(path)
    if detect_kind(text) == 'model':
        return oracle_from_model(parse_model(text, path), theta)
    return parse_oracle(text, path)


@click.command('force')
@INPUT_OPTION
@OUT_OPTION
@click.option('--universal', 'universal_path', help='Universal tree file built by force with the same model')
@click.option('--height', type=int, help='Height of the universal tree (default: the least that reaches depth)')
@click.option('--depth', type=int, help='Least level reached by every branch')
@click.option('--theta', type=int, help='Finiteness threshold when the input is a model')
@click.option('--budget-nodes', type=int, help='Node guard')
@click.option('--budget-approx', type=int, help='Approximation count guard')
@FORMAT_OPTION
@click.pass_context
@guarded
def force_command(ctx, input_path, out, universal_path, height, depth, theta, budget_nodes, budget_approx, fmt):
    """Build a generic homogeneous family and check its certificates"""
    config = _config(ctx, forcing={'depth': depth, 'theta': theta},
                     budgets={'node_budget': budget_nodes, 'approx_budget': budget_approx})
    oracle = _load_oracle(input_path, config.forcing.theta)
    cap = config.budgets.approx_cap
    if universal_path:
        R, _ = parse_ranked(read_text(universal_path), universal_path)
        U = UniversalTree.adopt(R, TemplateBounds(max_level=0), config.budgets,
                                forcing_templates(oracle, R.gamma, cap))
    else:
        height = height or forcing_height(oracle, config.forcing.depth, cap)
        U = forcing_universal(oracle, height, config.budgets)
    family = generic_homogeneous(oracle, U, config.forcing.depth)
    _emit(dump_family(family), out)
    reports = [
        family.certificate(U.tree),
        verify_domination(U.tree, family, oracle, config.forcing.subset_cap, config.budgets.approx_budget),
    ]
    _finish(_show(reports, fmt, err=True))


def _coloring(path: str):
    return parse_coloring(read_text(path), path)


@click.command('realize')
@INPUT_OPTION
@OUT_OPTION
@click.option('--mmax', type=int, help='Largest number of layers accepted')
@click.pass_context
@guarded
def realize_command(ctx, input_path, out, mmax):
    """Realize a finite coloring as the defects of a point set"""
    config = _config(ctx, geometry={'mmax': mmax})
    layers, arity, height = _coloring(input_path)
    scene = realize_scene(layers, arity, height, config.geometry.mmax, config.geometry.sample_cap)
    _emit(dump_scene(scene), out)


@click.command('defect-sweep')
@INPUT_OPTION
@click.option('--scene', 'scene_path', help='Scene file (realized from the coloring when omitted)')
@click.option('--mmax', type=int, help='Largest number of layers accepted')
@click.option('--seed', type=int, default=0, help='Seed for sampled sweeps')
@FORMAT_OPTION
@click.pass_context
@guarded
def defect_sweep_command(ctx, input_path, scene_path, mmax, seed, fmt):
    """Check that exactly the colored sets are defected"""
    config = _config(ctx, geometry={'mmax': mmax})
    layers, arity, height = _coloring(input_path)
    if scene_path:
        scene = parse_scene(read_text(scene_path), scene_path)
        scene.coloring = layers
    else:
        scene = realize_scene(layers, arity, height, config.geometry.mmax, config.geometry.sample_cap)
    _finish(_show([sweep_scene(scene, config.geometry.sample_cap, random.Random(seed))], fmt))


@click.command('generate')
@click.option('--kind', type=click.Choice(['tree', 'basic', 'coloring', 'model']), required=True,
              help='Artifact to generate')
@click.option('--seed', type=int, required=True, help='Random seed')
@click.option('--height', type=int, default=4, help='Height of trees, string length of colorings')
@click.option('--size', type=int, default=5, help='Universe size of models')
@click.option('--mmax', type=int, help='Number of layers of colorings')
@OUT_OPTION
@click.pass_context
@guarded
def generate_command(ctx, kind, seed, height, size, mmax, out):
    """Generate a random corpus file"""
    config = _config(ctx, geometry={'mmax': mmax})
    rng = random.Random(seed)
    if kind == 'tree':
        text = dump_tree(random_coloring_tree(rng, height))
    elif kind == 'basic':
        text = dump_basic(random_basic_tree(rng, height))
    elif kind == 'coloring':
        layers: List = random_pair_coloring(rng, height, mmax=config.geometry.mmax)
        text = dump_coloring(layers)
    else:
        text = dump_model(random_graph_model(rng, size))
    _emit(text, out)
