"""On-disk cache for group balls and canonical-basis tables.

Each entry is a single JSON file keyed by config digest, kind, and radius.
Entries carry a format version and a payload checksum; any mismatch is
treated as a miss (with a warning on stderr) so a stale or edited file can
never poison a run.  Writes are canonical JSON, so equal inputs produce
byte-identical files.
"""
from __future__ import annotations

import hashlib
import json
import os
import sys
from pathlib import Path

from .coxeter import Group, GroupBall
from .hecke import HeckeAlgebra
from .klbasis import KLTable

FORMAT_VERSION = 1


def _canonical(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def _checksum(payload) -> str:
    return hashlib.sha256(_canonical(payload).encode()).hexdigest()


def _warn(path: Path, reason: str) -> None:
    print(f"cache: {path.name}: {reason}; recomputing", file=sys.stderr)


class CacheStore:
    """Load/save pairs for the two expensive artifacts: balls and KL tables."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, group: Group, kind: str, radius: int) -> Path:
        return self.root / f"{group.config.digest()}-{kind}-{radius}.json"

    def _load(self, group: Group, kind: str, radius: int):
        path = self._path(group, kind, radius)
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            _warn(path, "unreadable")
            return None
        if data.get("format") != FORMAT_VERSION:
            _warn(path, f"format {data.get('format')!r} != {FORMAT_VERSION}")
            return None
        if data.get("config") != group.config.to_dict():
            _warn(path, "config mismatch")
            return None
        if data.get("kind") != kind or data.get("radius") != radius:
            _warn(path, "key mismatch")
            return None
        payload = data.get("payload")
        if _checksum(payload) != data.get("checksum"):
            _warn(path, "checksum mismatch")
            return None
        return payload

    def _save(self, group: Group, kind: str, radius: int, payload) -> Path:
        path = self._path(group, kind, radius)
        data = {
            "format": FORMAT_VERSION,
            "config": group.config.to_dict(),
            "kind": kind,
            "radius": radius,
            "payload": payload,
            "checksum": _checksum(payload),
        }
        tmp = path.with_suffix(".tmp")
        tmp.write_text(_canonical(data))
        os.replace(tmp, path)
        return path

    # -- balls ---------------------------------------------------------------

    def load_ball(self, group: Group, radius: int) -> GroupBall | None:
        payload = self._load(group, "ball", radius)
        if payload is None:
            return None
        try:
            elements = [
                group._register_canonical(tuple(word), ld, rd)
                for word, ld, rd in payload["elements"]
            ]
            right = {}
            left = {}
            for w, rrow, lrow in zip(elements, payload["right"], payload["left"]):
                right[w] = tuple(None if i is None else elements[i] for i in rrow)
                left[w] = tuple(None if i is None else elements[i] for i in lrow)
            top = max(w.length for w in elements)
            levels = [[] for _ in range(top + 1)]
            for w in elements:
                levels[w.length].append(w)
            if top < radius:
                # BFS records one empty level when the group closes off early.
                levels.append([])
        except (KeyError, IndexError, TypeError) as exc:
            _warn(self._path(group, "ball", radius), f"malformed ({exc!r})")
            return None
        ball = GroupBall(group, radius, _preset=(levels, elements, right, left))
        group._balls.setdefault(radius, ball)
        return ball

    def save_ball(self, ball: GroupBall) -> Path:
        index = ball.index
        payload = {
            "elements": [
                [list(w.word), sorted(w.left_descents), sorted(w.right_descents)]
                for w in ball.elements
            ],
            "right": [
                [None if u is None else index[u] for u in ball._right[w]]
                for w in ball.elements
            ],
            "left": [
                [None if u is None else index[u] for u in ball._left[w]]
                for w in ball.elements
            ],
        }
        return self._save(ball.group, "ball", ball.radius, payload)

    # -- canonical-basis tables -----------------------------------------------

    def load_kl(self, ball: GroupBall,
                hecke: HeckeAlgebra | None = None) -> KLTable | None:
        payload = self._load(ball.group, "kl", ball.radius)
        if payload is None:
            return None
        try:
            return KLTable.from_payload(ball, payload, hecke)
        except (KeyError, TypeError) as exc:
            _warn(self._path(ball.group, "kl", ball.radius), f"malformed ({exc!r})")
            return None

    def save_kl(self, table: KLTable) -> Path:
        return self._save(table.group, "kl", table.ball.radius, table.to_payload())

    # -- combined entry points -------------------------------------------------

    def ball(self, group: Group, radius: int) -> GroupBall:
        got = self.load_ball(group, radius)
        if got is not None:
            return got
        ball = group.ball(radius)
        self.save_ball(ball)
        return ball

    def kl_table(self, ball: GroupBall,
                 hecke: HeckeAlgebra | None = None) -> KLTable:
        got = self.load_kl(ball, hecke)
        if got is not None:
            return got
        table = KLTable(ball, hecke)
        self.save_kl(table)
        return table
