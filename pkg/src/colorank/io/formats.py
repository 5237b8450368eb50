"""
Colorank Formats - Line-oriented text formats for every artifact
"""

import logging
import os
import tempfile
from contextlib import contextmanager
from functools import wraps
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple, Union

import sympy as sp

from ..core.errors import ParseError, PreconditionError
from ..core.ordinal import OrdinalCNF, least_above, ord_parse
from ..core.sequences import Seq, encode_bits, encode_seq, parse_bits, parse_seq
from ..forcing.condition import ForcingCondition, pair
from ..forcing.homogeneous import FamilyResult
from ..geometry.scene import Scene
from ..model.finite_model import EQUALITY, AtomicType, FiniteModel
from ..model.rank import RankedModelOracle
from ..trees.approximation import Approximation
from ..trees.basic import BasicColoringTree, BasicNode
from ..trees.coloring_tree import ColoringTree, TreeNode
from ..trees.rank import RankReport
from ..trees.ranked import RankedTree

logger = logging.getLogger(__name__)

Line = Tuple[int, List[str]]


def content_lines(text: str) -> Iterator[Line]:
    """Non-blank lines with `#` comments removed, as (line number, tokens)"""
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _fields(tokens: Sequence[str], line: int, required: Sequence[str]) -> Dict[str, str]:
    found = {}
    for token in tokens:
        if "=" not in token:
            raise ParseError(f"expected key=value, got '{token}'", line)
        key, value = token.split("=", 1)
        found[key] = value
    missing = [key for key in required if key not in found]
    if missing:
        raise ParseError(f"missing field(s) {', '.join(missing)}", line)
    return found


def _int(text: str, line: int, what: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got '{text}'", line)
    if value < 0:
        raise ParseError(f"{what} must be non-negative", line)
    return value


def _seq(text: str, line: int) -> Seq:
    try:
        return parse_seq(text)
    except ParseError as e:
        raise ParseError(e.message, line)


def _ordinal(text: str, line: int) -> OrdinalCNF:
    try:
        return ord_parse(text)
    except ParseError as e:
        raise ParseError(e.message, line)


@contextmanager
def _located(source: Optional[str]):
    """Attach the file name to parse failures; domain violations become parse failures"""
    try:
        yield
    except ParseError as e:
        if e.source is not None or source is None:
            raise
        raise ParseError(e.message, e.line, source) from e
    except PreconditionError as e:
        raise ParseError(str(e), None, source) from e


def _sourced(parse):
    @wraps(parse)
    def wrapper(text: str, source: Optional[str] = None):
        with _located(source):
            return parse(text, source)

    return wrapper


def _header(text: str, keyword: str, source: Optional[str]) -> Tuple[Dict[str, str], List[Line]]:
    lines = list(content_lines(text))
    if not lines or lines[0][1][0] != keyword:
        raise ParseError(f"expected '{keyword}' header", lines[0][0] if lines else 1, source)
    return {"_line": str(lines[0][0]), **_fields(lines[0][1][1:], lines[0][0], [])}, lines[1:]


def detect_kind(text: str) -> str:
    """Keyword of the first content line"""
    for _, tokens in content_lines(text):
        return tokens[0]
    raise ParseError("empty input")


# -- coloring trees -----------------------------------------------------


@_sourced
def parse_tree(text: str, source: Optional[str] = None) -> ColoringTree:
    header, lines = _header(text, "tree", source)
    first = int(header["_line"])
    for key in ("N", "H", "min"):
        if key not in header:
            raise ParseError(f"tree header lacks {key}", first)
    tree = ColoringTree(_int(header["N"], first, "N"), _int(header["H"], first, "H"),
                        _int(header["min"], first, "min"))
    for number, tokens in lines:
        if tokens[0] != "gnode" or len(tokens) < 2:
            raise ParseError(f"unexpected line '{' '.join(tokens)}'", number)
        level = _int(tokens[1], number, "level")
        fields = _fields(tokens[2:], number, ["t", "v"])
        v = tuple(_seq(part, number) for part in fields["v"].split(","))
        try:
            tree.add_node(TreeNode(level, v, _seq(fields["t"], number)))
        except PreconditionError as e:
            raise ParseError(str(e), number)
    return tree


def dump_tree(tree: ColoringTree) -> str:
    lines = [f"tree N={tree.arity} H={tree.height} min={tree.min_level}"]
    lines += [str(node) for node in tree.all_nodes()]
    return "\n".join(lines) + "\n"


def dump_rank_report(report: RankReport) -> str:
    lines = [f"rk {a.key()} {value}" for a, value in report.sorted_items()]
    lines.append(f"rktree {report.tree_rank}")
    return "\n".join(lines) + "\n"


def parse_rank_report(text: str) -> Tuple[Dict[str, int], int]:
    values: Dict[str, int] = {}
    tree_rank = None
    for number, tokens in content_lines(text):
        if tokens[0] == "rk" and len(tokens) == 3:
            values[tokens[1]] = _int(tokens[2], number, "rank")
        elif tokens[0] == "rktree" and len(tokens) == 2:
            tree_rank = _int(tokens[1], number, "tree rank")
        else:
            raise ParseError(f"unexpected line '{' '.join(tokens)}'", number)
    if tree_rank is None:
        raise ParseError("missing rktree line")
    return values, tree_rank


# -- basic and ranked trees ---------------------------------------------


def _bnode(tokens: Sequence[str], number: int) -> BasicNode:
    if len(tokens) < 2:
        raise ParseError("bnode needs a level", number)
    level = _int(tokens[1], number, "level")
    fields = _fields(tokens[2:], number, ["x", "y", "k"])
    try:
        return BasicNode(level, _seq(fields["x"], number), _seq(fields["y"], number),
                         _int(fields["k"], number, "color"))
    except PreconditionError as e:
        raise ParseError(str(e), number)


def parse_approx_key(key: str, line: Optional[int] = None) -> Approximation:
    """Basic approximation from `[a,b|a;b:k,...]`"""
    if not (key.startswith("[") and key.endswith("]") and "|" in key):
        raise ParseError(f"bad approximation key '{key}'", line)
    members, entries = key[1:-1].split("|", 1)
    v = [_seq(part, line) for part in members.split(",")]
    h = {}
    for entry in entries.split(",") if entries else []:
        if ":" not in entry:
            raise ParseError(f"bad pair entry '{entry}'", line)
        subset, label = entry.rsplit(":", 1)
        u = tuple(_seq(part, line) for part in subset.split(";"))
        h[u] = _int(label, line, "color")
    if not v or len({len(s) for s in v}) != 1:
        raise ParseError(f"approximation members of mixed length in '{key}'", line)
    return Approximation.build(len(v[0]), v, h)


@_sourced
def parse_basic(text: str, source: Optional[str] = None) -> BasicColoringTree:
    header, lines = _header(text, "btree", source)
    first = int(header["_line"])
    if "H" not in header:
        raise ParseError("btree header lacks H", first, source)
    tree = BasicColoringTree(_int(header["H"], first, "H"), _int(header.get("min", "0"), first, "min"))
    for number, tokens in lines:
        if tokens[0] != "bnode":
            raise ParseError(f"unexpected line '{' '.join(tokens)}'", number, source)
        tree.add_node(_bnode(tokens, number))
    return tree


def dump_basic(tree: BasicColoringTree) -> str:
    lines = [f"btree H={tree.height} min={tree.min_level}"]
    lines += [str(node) for node in sorted(tree.all_nodes(), key=lambda n: (n.level, n.x, n.y, n.k))]
    return "\n".join(lines) + "\n"


@_sourced
def parse_ranked(text: str, source: Optional[str] = None) -> Tuple[RankedTree, bool]:
    """Ranked or universal tree; returns the tree and whether it was marked universal"""
    gamma = None
    universal = False
    base = None
    annex: List[Tuple[int, Approximation, OrdinalCNF, Seq]] = []
    for number, tokens in content_lines(text):
        keyword = tokens[0]
        if keyword in ("universal", "ranked"):
            fields = _fields(tokens[1:], number, ["gamma"])
            gamma = _ordinal(fields["gamma"], number)
            universal = universal or keyword == "universal"
        elif keyword == "btree":
            fields = _fields(tokens[1:], number, ["H"])
            base = BasicColoringTree(_int(fields["H"], number, "H"), _int(fields.get("min", "0"), number, "min"))
        elif keyword == "bnode":
            if base is None:
                raise ParseError("bnode before btree header", number, source)
            base.add_node(_bnode(tokens, number))
        elif keyword == "rmap":
            if len(tokens) != 4:
                raise ParseError("rmap needs a key, r= and c=", number, source)
            fields = _fields(tokens[2:], number, ["r", "c"])
            annex.append((number, parse_approx_key(tokens[1], number), _ordinal(fields["r"], number),
                          _seq(fields["c"], number)))
        else:
            raise ParseError(f"unexpected line '{' '.join(tokens)}'", number, source)
    if base is None:
        raise ParseError("missing btree header", None, source)
    R = RankedTree(base=base, gamma=gamma or least_above(r for _, _, r, _ in annex), spine=universal)
    for number, a, r, c in annex:
        if c not in a.v:
            raise ParseError("critical element outside the approximation", number, source)
        R.annotate(a, r, c)
    return R, universal


def dump_ranked(R: RankedTree, universal: bool = False) -> str:
    lines = [f"{'universal' if universal else 'ranked'} gamma={R.gamma}"]
    lines += dump_basic(R.base).splitlines()
    for a in sorted(R.r, key=lambda a: (a.level, a.v, a.h)):
        lines.append(f"rmap {a.key()} r={R.r[a]} c={encode_seq(R.c[a])}")
    return "\n".join(lines) + "\n"


# -- models and oracles -------------------------------------------------


def _tuple(text: str, number: int) -> Tuple[int, ...]:
    return tuple(_int(part, number, "element") for part in text.split(","))


@_sourced
def parse_model(text: str, source: Optional[str] = None) -> FiniteModel:
    header, lines = _header(text, "model", source)
    first = int(header["_line"])
    if "m" not in header:
        raise ParseError("model header lacks m", first, source)
    size = _int(header["m"], first, "m")
    vocabulary: Dict[str, int] = {}
    relations: Dict[str, Set[Tuple[int, ...]]] = {}
    for number, tokens in lines:
        if tokens[0] != "rel" or len(tokens) not in (3, 4):
            raise ParseError(f"unexpected line '{' '.join(tokens)}'", number, source)
        name, arity = tokens[1], _int(tokens[2], number, "arity")
        vocabulary[name] = arity
        tuples = relations.setdefault(name, set())
        if len(tokens) == 4:
            for part in tokens[3].split(";"):
                if part:
                    tuples.add(_tuple(part, number))
    try:
        return FiniteModel(size, vocabulary, relations)
    except PreconditionError as e:
        raise ParseError(str(e), None, source)


def dump_model(model: FiniteModel) -> str:
    lines = [f"model m={model.size}"]
    for name, arity in model.vocabulary.items():
        tuples = ";".join(",".join(map(str, t)) for t in sorted(model.relations[name]))
        lines.append(f"rel {name} {arity} {tuples}".rstrip())
    return "\n".join(lines) + "\n"


def parse_atomic_type(text: str, line: Optional[int] = None) -> AtomicType:
    """`b0,b1|R(y,b0)=1;=(y,b1)=0`"""
    if "|" not in text:
        raise ParseError(f"bad atomic type '{text}'", line)
    params_text, atoms_text = text.split("|", 1)
    params = _tuple(params_text, line or 0) if params_text else ()
    atoms = []
    for atom in atoms_text.split(";") if atoms_text else []:
        try:
            head, value = atom.rsplit("=", 1)
            name, args = head[:-1].split("(", 1)
        except ValueError:
            raise ParseError(f"bad atom '{atom}'", line)
        if value not in ("0", "1") or not head.endswith(")"):
            raise ParseError(f"bad atom '{atom}'", line)
        variables = tuple(args.split(","))
        if name == EQUALITY and len(variables) != 2:
            raise ParseError(f"equality atom needs two arguments: '{atom}'", line)
        atoms.append((name, variables, value == "1"))
    return AtomicType(params=params, atoms=tuple(atoms))


@_sourced
def parse_oracle(text: str, source: Optional[str] = None) -> RankedModelOracle:
    """`oracle m=<int> [theta=<int>]` then `mrank` lines"""
    header, lines = _header(text, "oracle", source)
    first = int(header["_line"])
    if "m" not in header:
        raise ParseError("oracle header lacks m", first, source)
    theta = _int(header["theta"], first, "theta") if "theta" in header else None
    oracle = RankedModelOracle(size=_int(header["m"], first, "m"), theta=theta)
    for number, tokens in lines:
        if tokens[0] != "mrank" or len(tokens) != 5:
            raise ParseError(f"unexpected line '{' '.join(tokens)}'", number, source)
        w = frozenset(_tuple(tokens[1], number))
        fields = _fields(tokens[2:], number, ["r", "c", "phi"])
        oracle.rank[w] = _ordinal(fields["r"], number)
        oracle.crit_elem[w] = _int(fields["c"], number, "critical element")
        oracle.crit_type[w] = parse_atomic_type(fields["phi"], number)
    return oracle


def dump_oracle(oracle: RankedModelOracle) -> str:
    header = f"oracle m={oracle.size}" + (f" theta={oracle.theta}" if oracle.theta is not None else "")
    lines = [header]
    for w in oracle.domain():
        lines.append(f"mrank {','.join(map(str, sorted(w)))} r={oracle.rank[w]} c={oracle.crit_elem[w]} "
                     f"phi={oracle.crit_type[w].encode()}")
    return "\n".join(lines) + "\n"


# -- conditions and families --------------------------------------------


def _eta_and_g(lines: List[Line], source: Optional[str], allow_cert: bool):
    eta: Dict[int, Seq] = {}
    g = {}
    certs = {}
    for number, tokens in lines:
        if tokens[0] == "eta" and len(tokens) == 3:
            eta[_int(tokens[1], number, "element")] = _seq(tokens[2], number)
        elif tokens[0] == "g" and len(tokens) == 3:
            a, b = _tuple(tokens[1], number)
            g[pair(a, b)] = _int(tokens[2], number, "color")
        elif allow_cert and tokens[0] == "cert" and len(tokens) == 3:
            a, b = _tuple(tokens[1], number)
            certs[pair(a, b)] = _int(_fields(tokens[2:], number, ["n0"])["n0"], number, "n0")
        else:
            raise ParseError(f"unexpected line '{' '.join(tokens)}'", number, source)
    return eta, g, certs


@_sourced
def parse_condition(text: str, source: Optional[str] = None) -> ForcingCondition:
    header, lines = _header(text, "cond", source)
    first = int(header["_line"])
    if "n" not in header:
        raise ParseError("cond header lacks n", first, source)
    eta, g, _ = _eta_and_g(lines, source, allow_cert=False)
    return ForcingCondition(_int(header["n"], first, "n"), eta, g)


def dump_condition(p: ForcingCondition) -> str:
    return "\n".join(p.describe()) + "\n"


@_sourced
def parse_family(text: str, source: Optional[str] = None) -> FamilyResult:
    eta, g, certs = _eta_and_g(list(content_lines(text)), source, allow_cert=True)
    return FamilyResult(eta=eta, colors=g, n0=certs)


def dump_family(family: FamilyResult) -> str:
    return "\n".join(family.describe()) + "\n"


# -- geometry -----------------------------------------------------------


def _bits(text: str, number: int) -> Seq:
    try:
        return parse_bits(text)
    except ParseError as e:
        raise ParseError(e.message, number)


@_sourced
def parse_coloring(text: str, source: Optional[str] = None) -> Tuple[List[Set[Tuple[Seq, ...]]], int, int]:
    """Layers from `cm <m> <string>,<string>,...`; returns (layers, N, H)"""
    layers: Dict[int, Set[Tuple[Seq, ...]]] = {}
    arities, lengths = set(), set()
    for number, tokens in content_lines(text):
        if tokens[0] != "cm" or len(tokens) != 3:
            raise ParseError(f"unexpected line '{' '.join(tokens)}'", number, source)
        m = _int(tokens[1], number, "layer")
        strings = tuple(sorted(_bits(part, number) for part in tokens[2].split(",")))
        arities.add(len(strings))
        lengths.update(len(s) for s in strings)
        layers.setdefault(m, set()).add(strings)
    if len(arities) > 1 or len(lengths) > 1:
        raise ParseError("coloring mixes set sizes or string lengths", None, source)
    if not layers:
        raise ParseError("empty coloring", None, source)
    count = max(layers) + 1
    return [layers.get(m, set()) for m in range(count)], arities.pop(), lengths.pop()


def dump_coloring(layers: Sequence[Set[Tuple[Seq, ...]]]) -> str:
    lines = [
        f"cm {m} {','.join(encode_bits(s) for s in x)}"
        for m, layer in enumerate(layers)
        for x in sorted(layer)
    ]
    return "\n".join(lines) + "\n"


def _rational(value: sp.Rational) -> str:
    value = sp.Rational(value)
    return f"{value.p}/{value.q}"


def _parse_rational(text: str, number: int) -> sp.Rational:
    try:
        p, q = text.split("/")
        return sp.Rational(int(p), int(q))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational '{text}'", number)


def dump_scene(scene: Scene) -> str:
    lines = [f"scene N={scene.arity} H={scene.height}"]
    lines += [f"pt {encode_bits(s)} {','.join(_rational(x) for x in p)}" for s, p in sorted(scene.points.items())]
    for m, tuples in sorted(scene.removed.items()):
        for b in tuples:
            lines.append(f"rm {m} {';'.join(','.join(_rational(x) for x in p) for p in b)}")
    return "\n".join(lines) + "\n"


@_sourced
def parse_scene(text: str, source: Optional[str] = None) -> Scene:
    header, lines = _header(text, "scene", source)
    first = int(header["_line"])
    scene = Scene(arity=_int(header.get("N", "2"), first, "N"), height=_int(header.get("H", "0"), first, "H"))
    for number, tokens in lines:
        if tokens[0] == "pt" and len(tokens) == 3:
            scene.points[_bits(tokens[1], number)] = tuple(
                _parse_rational(x, number) for x in tokens[2].split(","))
        elif tokens[0] == "rm" and len(tokens) == 3:
            b = tuple(tuple(_parse_rational(x, number) for x in p.split(",")) for p in tokens[2].split(";"))
            scene.removed.setdefault(_int(tokens[1], number, "layer"), []).append(b)
        else:
            raise ParseError(f"unexpected line '{' '.join(tokens)}'", number, source)
    return scene


# -- files --------------------------------------------------------------


def read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}", None, str(path))


def write_atomic(path: Union[str, Path], text: str) -> Path:
    """Write through a temporary file in the target directory, then rename"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    logger.debug(f"Wrote {path}")
    return path
