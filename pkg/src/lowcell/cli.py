"""Command line driver.

All subcommands take the group either from ``--config FILE`` (JSON or TOML)
or from the inline flags ``--m-sr/--m-st/--m-rt`` (integer or "inf") and
``--weights r,s,t``.  Elements are spelled as words over r/s/t; "e" is the
identity.  Output goes to stdout as a table (default) or canonical JSON
(``--format json``); errors go to stderr and map to exit codes:

    0  success / all suites passed
    1  suite failure or violated invariant
    2  usage or configuration error
    3  resource cap (node budget, ball too small)

Default radius per subcommand: ball/cells/indecomposable use 6, verify uses
4, mult/f/h/j0 use l(x)+l(y), kl uses l(w), afn uses max(6, l(w));
classify/lambda/factorize need no ball.  With ``--cache DIR`` the ball and
canonical-basis table are loaded from (and saved to) that directory; nothing
else touches the filesystem.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

try:
    import tomllib
except ImportError:  # 3.10
    import tomli as tomllib

from .cache import CacheStore
from .cells import CellAtlas, CellGeometry, cell_label, frame_label
from .coxeter import Group, GroupBall, GroupConfig
from .errors import (
    ConfigError,
    DomainError,
    InvariantViolation,
    NodeCapExceeded,
    OutOfBallError,
)
from .hecke import HeckeAlgebra
from .jring import JRing
from .klbasis import KLTable
from .laurent import LaurentPoly
from .verify import DEFAULT_SEED, SUITES, run_all

USAGE_OK, SUITE_FAIL, USAGE_ERR, RESOURCE_ERR = 0, 1, 2, 3


def _disp(w) -> str:
    return w.letters() or "e"


def _poly_str(p: LaurentPoly) -> str:
    pairs = p.to_pairs()
    if not pairs:
        return "0"
    parts = []
    for e, c in pairs:
        mag = abs(c)
        if e == 0:
            term = str(mag)
        else:
            base = "v" if e == 1 else f"v^{e}"
            term = base if mag == 1 else f"{mag}*{base}"
        if not parts:
            parts.append(f"-{term}" if c < 0 else term)
        else:
            parts.append(f"- {term}" if c < 0 else f"+ {term}")
    return " ".join(parts)


def _emit(args, payload: dict, table_lines) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in table_lines:
            print(line)


def _fail(args, exc: Exception) -> None:
    if getattr(args, "format", "table") == "json":
        body = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        print(json.dumps(body, sort_keys=True), file=sys.stderr)
    else:
        print(f"error: {exc}", file=sys.stderr)


# -- configuration ---------------------------------------------------------------


def _parse_order(text: str):
    if text == "inf":
        return None
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"order must be an integer or 'inf', got {text!r}") from exc


def _load_config(args) -> GroupConfig:
    inline = [args.m_sr, args.m_st, args.m_rt, args.weights]
    if args.config is not None:
        if any(v is not None for v in inline):
            raise ConfigError("give either --config or inline flags, not both")
        path = Path(args.config)
        try:
            if path.suffix == ".toml":
                data = tomllib.loads(path.read_text())
            else:
                data = json.loads(path.read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
            raise ConfigError(f"cannot parse config {path}: {exc}") from exc
        return GroupConfig.from_dict(data)
    if args.m_sr is None or args.m_st is None or args.m_rt is None:
        raise ConfigError("no group given: pass --config FILE or all of --m-sr/--m-st/--m-rt")
    weights = (1, 1, 1)
    if args.weights is not None:
        parts = args.weights.split(",")
        if len(parts) != 3:
            raise ConfigError(f"--weights wants three comma-separated integers, got {args.weights!r}")
        try:
            weights = tuple(int(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"--weights wants integers, got {args.weights!r}") from exc
    return GroupConfig(
        m_sr=_parse_order(args.m_sr),
        m_st=_parse_order(args.m_st),
        m_rt=_parse_order(args.m_rt),
        weight_r=weights[0],
        weight_s=weights[1],
        weight_t=weights[2],
    )


class Session:
    """One resolved invocation: config, group, and the optional cache."""

    def __init__(self, args):
        self.args = args
        self.config = _load_config(args)
        self.group = Group(self.config, node_cap=args.node_cap)
        self.store = CacheStore(args.cache) if args.cache else None

    def radius(self, default: int) -> int:
        return self.args.radius if self.args.radius is not None else default

    def ball(self, radius: int) -> GroupBall:
        if self.store is not None:
            return self.store.ball(self.group, radius)
        return self.group.ball(radius)

    def kl(self, ball: GroupBall, hecke: HeckeAlgebra | None = None) -> KLTable:
        if self.store is not None:
            return self.store.kl_table(ball, hecke)
        return KLTable(ball, hecke)

    def element(self, text: str):
        return self.group.element(text)

    def head(self, extra: dict | None = None) -> dict:
        body = {"config": self.config.to_dict()}
        if extra:
            body.update(extra)
        return body


# -- subcommands -----------------------------------------------------------------


def cmd_ball(s: Session) -> int:
    radius = s.radius(6)
    ball = s.ball(radius)
    payload = s.head({
        "command": "ball",
        "radius": radius,
        "size": len(ball),
        "level_sizes": ball.level_sizes(),
        "elements": [w.letters() for w in ball.elements],
    })
    lines = [f"{s.config.label()}  ball radius {radius}: {len(ball)} elements"]
    for k, level in enumerate(ball.levels):
        lines.append(f"  {k}: {' '.join(_disp(w) for w in level) or '-'}")
    _emit(s.args, payload, lines)
    return USAGE_OK


def cmd_classify(s: Session) -> int:
    report = s.group.classification()
    payload = s.head({"command": "classify", **report.to_dict()})
    lines = [
        f"{s.config.label()}: {report.kind}",
        f"N = {report.bound}",
        f"M = [{', '.join(_disp(w) for w in report.top)}]"
        f"  (frames {', '.join(frame_label(frozenset(J)) for J in report.top_frames)})",
    ]
    for J, w, wt in report.finite_parabolics:
        if len(J) == 2:
            lines.append(f"  parabolic {frame_label(frozenset(J))}: longest {_disp(w)}, weight {wt}")
    if report.group_order is not None:
        lines.append(f"group order {report.group_order}, w0 order {report.w0_order}")
    _emit(s.args, payload, lines)
    return USAGE_OK


def cmd_mult(s: Session) -> int:
    x, y = s.element(s.args.x), s.element(s.args.y)
    radius = s.radius(x.length + y.length)
    alg = HeckeAlgebra(s.ball(radius))
    prod = alg.t_product(x, y)
    payload = s.head({
        "command": "mult",
        "radius": radius,
        "x": x.letters(),
        "y": y.letters(),
        "product": prod.to_pairs(),
    })
    lines = [f"T_{_disp(x)} * T_{_disp(y)} ="]
    lines += [f"  T_{wl or 'e'}: {_poly_str(LaurentPoly.from_pairs(pp))}"
              for wl, pp in prod.to_pairs()]
    _emit(s.args, payload, lines)
    return USAGE_OK


def cmd_f(s: Session) -> int:
    x, y, z = (s.element(a) for a in (s.args.x, s.args.y, s.args.z))
    radius = s.radius(x.length + y.length)
    alg = HeckeAlgebra(s.ball(radius))
    poly = alg.f_poly(x, y, z)
    payload = s.head({
        "command": "f",
        "radius": radius,
        "x": x.letters(), "y": y.letters(), "z": z.letters(),
        "f": poly.to_pairs(),
    })
    _emit(s.args, payload,
          [f"f[{_disp(x)},{_disp(y)},{_disp(z)}] = {_poly_str(poly)}"])
    return USAGE_OK


def cmd_kl(s: Session) -> int:
    w = s.element(s.args.w)
    radius = s.radius(w.length)
    table = s.kl(s.ball(radius))
    row = table.c_element(w)
    payload = s.head({
        "command": "kl",
        "radius": radius,
        "w": w.letters(),
        "c": row.to_pairs(),
    })
    lines = [f"C_{_disp(w)} ="]
    lines += [f"  p[{xl or 'e'}] = {_poly_str(LaurentPoly.from_pairs(pp))}"
              for xl, pp in row.to_pairs()]
    _emit(s.args, payload, lines)
    return USAGE_OK


def cmd_h(s: Session) -> int:
    x, y, z = (s.element(a) for a in (s.args.x, s.args.y, s.args.z))
    radius = s.radius(x.length + y.length)
    table = s.kl(s.ball(radius))
    poly = table.h_poly(x, y, z)
    payload = s.head({
        "command": "h",
        "radius": radius,
        "x": x.letters(), "y": y.letters(), "z": z.letters(),
        "h": poly.to_pairs(),
    })
    _emit(s.args, payload,
          [f"h[{_disp(x)},{_disp(y)},{_disp(z)}] = {_poly_str(poly)}"])
    return USAGE_OK


def cmd_afn(s: Session) -> int:
    w = s.element(s.args.w)
    radius = s.radius(max(6, w.length))
    witness_radius = radius // 2
    table = s.kl(s.ball(radius))
    geometry = CellGeometry(s.group)
    p_ew = table.p_poly(s.group.identity, w)
    delta = -p_ew.degree() if p_ew else None
    n_w = p_ew.coeff(p_ew.degree()) if p_ew else None
    member = geometry.in_lambda(w)
    bound, witness = table.a_lower_bound(w, witness_radius)
    lb = None if bound == float("-inf") or witness is None else bound
    payload = s.head({
        "command": "afn",
        "radius": radius,
        "witness_radius": witness_radius,
        "w": w.letters(),
        "delta": delta,
        "n": n_w,
        "in_lambda": member,
        "value": geometry.bound if member else None,
        "lower_bound": lb,
        "witness": None if lb is None else [witness[0].letters(), witness[1].letters()],
    })
    lines = [f"delta({_disp(w)}) = {delta}, n = {n_w}"]
    if member:
        lines.append(f"a({_disp(w)}) = {geometry.bound} (lowest cell member)")
    elif lb is not None:
        lines.append(
            f"a({_disp(w)}) >= {lb} "
            f"(witness {_disp(witness[0])}, {_disp(witness[1])}; radius {witness_radius})"
        )
    else:
        lines.append(f"a({_disp(w)}): no witness product reaches it at radius {witness_radius}")
    _emit(s.args, payload, lines)
    return USAGE_OK


def cmd_lambda(s: Session) -> int:
    w = s.element(s.args.w)
    geometry = CellGeometry(s.group)
    member = geometry.in_lambda(w)
    extra = {}
    lines = []
    if member:
        lid = geometry.left_cell_id(w)
        x, j = geometry.right_cell_id(w)
        extra = {
            "left_cell": cell_label(lid),
            "right_cell": f"{x.letters()}:{frame_label(j)}",
            "frame": frame_label(lid[0]),
        }
        lines.append(
            f"{_disp(w)}: in the lowest cell "
            f"(left cell {cell_label(lid)}, right cell {x.letters() or 'e'}:{frame_label(j)})"
        )
    else:
        lines.append(f"{_disp(w)}: not in the lowest cell")
    payload = s.head({
        "command": "lambda",
        "w": w.letters(),
        "in_lambda": member,
        **extra,
    })
    _emit(s.args, payload, lines)
    return USAGE_OK


def cmd_cells(s: Session) -> int:
    radius = s.radius(6)
    ball = s.ball(radius)
    table = s.kl(ball)
    geometry = CellGeometry(s.group)
    atlas = CellAtlas.build(geometry, ball, table)
    kind, count = geometry.expected_left_cell_count()
    payload = s.head({
        "command": "cells",
        "expected": {"kind": kind, "count": count},
        "atlas": atlas.to_dict(),
    })
    expect = f"{kind}" + (f", {count}" if count is not None else "")
    lines = [
        f"{s.config.label()}  radius {radius}: "
        f"{len(atlas.cells)} left cells in the lowest cell (expected: {expect})"
    ]
    dist = dict(atlas.distinguished)
    for cid, members in atlas.cells:
        d = dist[cid]
        lines.append(
            f"  {cell_label(cid)}  d={_disp(d) if d is not None else '?'}  "
            f"members: {' '.join(_disp(w) for w in members)}"
        )
    _emit(s.args, payload, lines)
    return USAGE_OK


def cmd_factorize(s: Session) -> int:
    w = s.element(s.args.w)
    geometry = CellGeometry(s.group)
    x, p, y = geometry.lemma_factorize(w)
    j, jp = geometry.profile(p)
    payload = s.head({
        "command": "factorize",
        "w": w.letters(),
        "x": x.letters(),
        "core": p.letters(),
        "left_frame": frame_label(j),
        "right_frame": frame_label(jp),
        "y": y.letters(),
    })
    _emit(s.args, payload, [
        f"{_disp(w)} = {_disp(x)} * {_disp(p)} * {_disp(y)}"
        f"  (core profile {frame_label(j)}|{frame_label(jp)})"
    ])
    return USAGE_OK


def cmd_j0(s: Session) -> int:
    x, y = s.element(s.args.x), s.element(s.args.y)
    radius = s.radius(x.length + y.length)
    alg = HeckeAlgebra(s.ball(radius))
    geometry = CellGeometry(s.group)
    ring = JRing(alg, geometry)
    prod = ring.j0_product(x, y)
    # leading (longest) term first, mirroring polynomial order
    pairs = prod.to_pairs()[::-1]
    payload = s.head({
        "command": "j0",
        "radius": radius,
        "x": x.letters(),
        "y": y.letters(),
        "product": pairs,
    })
    terms = " + ".join(
        (f"{c}*" if c != 1 else "") + f"t_{wl or 'e'}" for wl, c in pairs
    ) or "0"
    _emit(s.args, payload, [f"t_{_disp(x)} * t_{_disp(y)} = {terms}"])
    return USAGE_OK


def cmd_indecomposable(s: Session) -> int:
    radius = s.radius(6)
    ball = s.ball(radius)
    alg = HeckeAlgebra(ball)
    geometry = CellGeometry(s.group)
    ring = JRing(alg, geometry)
    tops = set(geometry.frames.values())
    found = [w for w in ball.elements
             if geometry.profile(w) is not None and w not in tops
             and ring.is_indecomposable(w, reading=s.args.reading, ball=ball)]
    payload = s.head({
        "command": "indecomposable",
        "radius": radius,
        "reading": s.args.reading,
        "elements": [w.letters() for w in found],
    })
    lines = [f"indecomposable in radius {radius} ({s.args.reading} reading): {len(found)}"]
    lines += [f"  {_disp(w)}" for w in found]
    _emit(s.args, payload, lines)
    return USAGE_OK


def cmd_verify(s: Session) -> int:
    radius = s.radius(4)
    names = None if s.args.suite == "all" else [s.args.suite]
    reports = run_all(s.config, radius, seed=s.args.seed, jobs=s.args.jobs, names=names)
    ok = all(r.passed for r in reports)
    dicts = []
    for r in reports:
        d = r.to_dict()
        d.pop("elapsed_ms", None)  # keep output bytes reproducible
        dicts.append(d)
    payload = s.head({
        "command": "verify",
        "radius": radius,
        "seed": s.args.seed,
        "passed": ok,
        "reports": dicts,
    })
    lines = []
    for r in reports:
        verdict = "PASS" if r.passed else "FAIL"
        lines.append(f"suite {r.suite}: {verdict}  (radius {r.radius}, seed {r.seed})")
        for item in r.items:
            note = f"  -- {item.note}" if item.note else ""
            lines.append(
                f"  [{item.status}] {item.name}"
                f"  checked={item.checked} skipped={item.skipped}{note}"
            )
            for w in item.witnesses[:3]:
                lines.append(f"      witness: {w}")
    lines.append("all suites passed" if ok else "SUITE FAILURE")
    _emit(s.args, payload, lines)
    return USAGE_OK if ok else SUITE_FAIL


# -- wiring ----------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    grp = common.add_argument_group("group selection")
    grp.add_argument("--config", metavar="FILE", help="JSON or TOML config file")
    grp.add_argument("--m-sr", metavar="M", help="order of sr (integer or 'inf')")
    grp.add_argument("--m-st", metavar="M", help="order of st (integer or 'inf')")
    grp.add_argument("--m-rt", metavar="M", help="order of rt (integer or 'inf')")
    grp.add_argument("--weights", metavar="R,S,T", help="weights of r,s,t (default 1,1,1)")
    common.add_argument("--radius", type=int, metavar="R",
                        help="ball radius (default depends on the subcommand)")
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--cache", metavar="DIR", help="cache directory for balls and KL tables")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--jobs", type=int, default=1, help="parallel suite processes")
    common.add_argument("--node-cap", type=int, default=1_000_000,
                        help="word-problem search budget")

    parser = argparse.ArgumentParser(
        prog="lowcell",
        description="Exact computations in the lowest two-sided cell of a rank-3 Coxeter group.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add(name, fn, help_, *positional):
        p = sub.add_parser(name, parents=[common], help=help_)
        for arg in positional:
            p.add_argument(arg)
        p.set_defaults(fn=fn)
        return p

    add("ball", cmd_ball, "enumerate the ball and its Cayley levels")
    add("classify", cmd_classify, "finite parabolics, bound N, frame set M")
    add("mult", cmd_mult, "product T_x T_y in the standard basis", "x", "y")
    add("f", cmd_f, "structure constant f_{x,y,z} of the standard basis", "x", "y", "z")
    add("kl", cmd_kl, "canonical basis element C_w", "w")
    add("h", cmd_h, "structure constant h_{x,y,z} of the canonical basis", "x", "y", "z")
    add("afn", cmd_afn, "a-function data for w", "w")
    add("lambda", cmd_lambda, "lowest-cell membership and cell ids", "w")
    add("cells", cmd_cells, "left cells of the lowest two-sided cell")
    add("factorize", cmd_factorize, "canonical x * w_J * y factorization", "w")
    add("j0", cmd_j0, "product t_x t_y in the based ring", "x", "y")
    ind = add("indecomposable", cmd_indecomposable, "indecomposable lowest-cell elements")
    ind.add_argument("--reading", choices=("amalgamated", "plain"), default="amalgamated")
    ver = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ver.add_argument("suite", choices=sorted(SUITES) + ["all"])
    ver.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        session = Session(args)
        return args.fn(session)
    except (ConfigError, DomainError) as exc:
        _fail(args, exc)
        return USAGE_ERR
    except (NodeCapExceeded, OutOfBallError) as exc:
        _fail(args, exc)
        return RESOURCE_ERR
    except InvariantViolation as exc:
        _fail(args, exc)
        return SUITE_FAIL


if __name__ == "__main__":
    sys.exit(main())
