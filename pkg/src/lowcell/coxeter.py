"""Rank-3 weighted Coxeter groups: words, balls, and classification data.

The three generators are spelled r, s, t (internally 0, 1, 2) with the fixed
order r < s < t.  An element's canonical form is the ShortLex-least reduced
word.  Word equality is decided by Tits' solution to the word problem: explore
the braid-move orbit, delete squares whenever one appears, and repeat until
the orbit is square-free.  Canonical forms are memoized per group so that
overlapping queries (ball construction, product tables) stay cheap.

Weights are positive integers attached to the generators; a finite odd bond
order forces the two weights on that bond to agree, which is exactly the
condition for the weight function to extend to the whole group.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ConfigError, DomainError, InvariantViolation, NodeCapExceeded

LETTERS = "rst"
R, S, T = 0, 1, 2
_PAIR_NAMES = {frozenset((R, S)): "sr", frozenset((S, T)): "st", frozenset((R, T)): "rt"}

# Soft cap on the canonical-form memo; beyond it we stop inserting new entries
# (results stay correct, repeated queries just stop getting cheaper).
_MEMO_LIMIT = 4_000_000


def parse_word(text: str) -> tuple[int, ...]:
    """Parse an element spelled over r/s/t; both "e" and "" denote the identity."""
    text = text.strip()
    if text in ("e", ""):
        return ()
    word = []
    for ch in text:
        idx = LETTERS.find(ch)
        if idx < 0:
            raise DomainError(f"invalid letter {ch!r} in element {text!r}; expected r, s, t or e")
        word.append(idx)
    return tuple(word)


def spell_word(word: Sequence[int]) -> str:
    """Inverse of parse_word; the identity is spelled as the empty string."""
    return "".join(LETTERS[g] for g in word)


@dataclass(frozen=True)
class GroupConfig:
    """Bond orders and generator weights of a rank-3 system.

    Orders are integers >= 2 or None for an infinite bond.  Weights are
    positive integers; an odd finite order m_ab requires weight_a == weight_b.
    """

    m_sr: int | None
    m_st: int | None
    m_rt: int | None
    weight_r: int = 1
    weight_s: int = 1
    weight_t: int = 1

    def __post_init__(self):
        for name in ("m_sr", "m_st", "m_rt"):
            m = getattr(self, name)
            if m is None:
                continue
            if not isinstance(m, int) or isinstance(m, bool) or m < 2:
                raise ConfigError(f"{name} must be an integer >= 2 or None (infinite), got {m!r}")
        for name in ("weight_r", "weight_s", "weight_t"):
            w = getattr(self, name)
            if not isinstance(w, int) or isinstance(w, bool) or w < 1:
                raise ConfigError(f"{name} must be a positive integer, got {w!r}")
        for (a, b), m in self.orders().items():
            if m is not None and m % 2 == 1:
                wa, wb = self.weights()[a], self.weights()[b]
                if wa != wb:
                    raise ConfigError(
                        f"odd order m={m} on bond {LETTERS[a]}{LETTERS[b]} forces equal "
                        f"weights, got {wa} != {wb}"
                    )

    def orders(self) -> dict[tuple[int, int], int | None]:
        return {(R, S): self.m_sr, (S, T): self.m_st, (R, T): self.m_rt}

    def order(self, a: int, b: int) -> int | None:
        if a == b:
            return 1
        key = (min(a, b), max(a, b))
        return {(R, S): self.m_sr, (S, T): self.m_st, (R, T): self.m_rt}[key]

    def weights(self) -> tuple[int, int, int]:
        return (self.weight_r, self.weight_s, self.weight_t)

    def weight(self, letter: int) -> int:
        return self.weights()[letter]

    # -- serialization -----------------------------------------------------

    @staticmethod
    def _order_to_json(m: int | None):
        return "inf" if m is None else m

    @staticmethod
    def _order_from_json(v) -> int | None:
        if v in ("inf", None):
            return None
        if isinstance(v, int) and not isinstance(v, bool):
            return v
        raise ConfigError(f"bond order must be an integer or 'inf', got {v!r}")

    def to_dict(self) -> dict:
        return {
            "m": {
                "sr": self._order_to_json(self.m_sr),
                "st": self._order_to_json(self.m_st),
                "rt": self._order_to_json(self.m_rt),
            },
            "weights": {"r": self.weight_r, "s": self.weight_s, "t": self.weight_t},
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "GroupConfig":
        try:
            m = data["m"]
            weights = data.get("weights", {})
            return cls(
                m_sr=cls._order_from_json(m["sr"]),
                m_st=cls._order_from_json(m["st"]),
                m_rt=cls._order_from_json(m["rt"]),
                weight_r=weights.get("r", 1),
                weight_s=weights.get("s", 1),
                weight_t=weights.get("t", 1),
            )
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"malformed config: {exc!r}") from exc

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]

    def label(self) -> str:
        ms = ",".join("inf" if m is None else str(m) for m in (self.m_sr, self.m_st, self.m_rt))
        ws = ",".join(str(w) for w in self.weights())
        return f"({ms}) L=({ws})"


class Element:
    """A group element: canonical ShortLex-least reduced word plus cached data."""

    __slots__ = ("word", "length", "weight", "left_descents", "right_descents", "_hash")

    def __init__(self, word, length, weight, left_descents, right_descents):
        self.word = word
        self.length = length
        self.weight = weight
        self.left_descents = left_descents
        self.right_descents = right_descents
        self._hash = hash(word)

    def letters(self) -> str:
        """Serialized spelling; the identity is the empty string."""
        return spell_word(self.word)

    def support(self) -> frozenset[int]:
        return frozenset(self.word)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.length, self.word)

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, Element) and self.word == other.word)

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Element") -> bool:
        return (self.length, self.word) < (other.length, other.word)

    def __le__(self, other: "Element") -> bool:
        return (self.length, self.word) <= (other.length, other.word)

    def __str__(self) -> str:
        return spell_word(self.word) or "e"

    def __repr__(self) -> str:
        return f"<{self}>"


def shortlex_key(el: Element) -> tuple[int, tuple[int, ...]]:
    return (el.length, el.word)


class Group:
    """A rank-3 weighted Coxeter group with memoized word-problem machinery."""

    def __init__(self, config: GroupConfig, node_cap: int = 1_000_000):
        self.config = config
        self.node_cap = node_cap
        self._m = [[config.order(a, b) for b in range(3)] for a in range(3)]
        self._weights = config.weights()
        self._norm: dict[tuple[int, ...], tuple[int, ...]] = {(): ()}
        self._elems: dict[tuple[int, ...], Element] = {}
        self._bruhat: dict[tuple[tuple[int, ...], tuple[int, ...]], bool] = {}
        self._lower: dict[Element, tuple[Element, ...]] = {}
        self._prefix: dict[Element, tuple[tuple[Element, Element], ...]] = {}
        self._balls: dict[int, GroupBall] = {}
        self._classification: ClassificationReport | None = None
        self.identity = self._intern(())
        self.generators = tuple(self._intern((g,)) for g in range(3))

    # -- the word problem ----------------------------------------------------

    def _braid_neighbors(self, w: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        n = len(w)
        for i in range(n - 1):
            a, b = w[i], w[i + 1]
            if a == b:
                continue
            m = self._m[a][b]
            if m is None or i + m > n:
                continue
            ok = True
            for k in range(2, m):
                if w[i + k] != (a if k % 2 == 0 else b):
                    ok = False
                    break
            if ok:
                repl = tuple(b if k % 2 == 0 else a for k in range(m))
                yield w[:i] + repl + w[i + m :]

    @staticmethod
    def _delete_square(w: tuple[int, ...]) -> tuple[int, ...] | None:
        for i in range(len(w) - 1):
            if w[i] == w[i + 1]:
                return w[:i] + w[i + 2 :]
        return None

    def _canonical(self, word: tuple[int, ...]) -> tuple[int, ...]:
        """ShortLex-least reduced word equal to `word` in the group."""
        memo = self._norm
        cached = memo.get(word)
        if cached is not None:
            return cached
        chain: list[tuple[int, ...]] = [word]
        current = word
        budget = self.node_cap
        canonical: tuple[int, ...] | None = None
        while canonical is None:
            cached = memo.get(current)
            if cached is not None:
                canonical = cached
                break
            shorter = self._delete_square(current)
            if shorter is not None:
                chain.append(current)
                current = shorter
                continue
            # `current` is square-free: walk its braid orbit.
            orbit = {current}
            stack = [current]
            restart: tuple[int, ...] | None = None
            while stack and restart is None:
                w = stack.pop()
                budget -= 1
                if budget < 0:
                    raise NodeCapExceeded(
                        f"word-problem search exceeded node cap {self.node_cap} "
                        f"on a word of length {len(word)}"
                    )
                for w2 in self._braid_neighbors(w):
                    if w2 in orbit:
                        continue
                    cached = memo.get(w2)
                    if cached is not None:
                        canonical = cached
                        break
                    sq = self._delete_square(w2)
                    if sq is not None:
                        restart = sq
                        orbit.add(w2)
                        break
                    orbit.add(w2)
                    stack.append(w2)
                if canonical is not None:
                    break
            if canonical is not None:
                chain.extend(orbit)
                break
            if restart is not None:
                chain.extend(orbit)
                current = restart
                continue
            # Square-free orbit fully explored: the word is reduced.
            canonical = min(orbit)
            chain.extend(orbit)
        if len(memo) < _MEMO_LIMIT:
            for w in chain:
                memo[w] = canonical
        return canonical

    def _intern(self, cw: tuple[int, ...]) -> Element:
        el = self._elems.get(cw)
        if el is not None:
            return el
        n = len(cw)
        left = frozenset(g for g in range(3) if len(self._canonical((g,) + cw)) < n)
        right = frozenset(g for g in range(3) if len(self._canonical(cw + (g,))) < n)
        el = Element(cw, n, sum(self._weights[g] for g in cw), left, right)
        self._elems[cw] = el
        return el

    def _register_canonical(self, cw, left_descents, right_descents) -> Element:
        """Adopt a trusted canonical word (cache loading path; skips the search)."""
        el = self._elems.get(cw)
        if el is not None:
            return el
        el = Element(cw, len(cw), sum(self._weights[g] for g in cw),
                     frozenset(left_descents), frozenset(right_descents))
        self._elems[cw] = el
        self._norm.setdefault(cw, cw)
        return el

    # -- public element operations --------------------------------------------

    def element(self, word) -> Element:
        """Normalize an arbitrary word (string over r/s/t, or letter iterable)."""
        if isinstance(word, Element):
            return word
        if isinstance(word, str):
            word = parse_word(word)
        else:
            word = tuple(word)
            for g in word:
                if g not in (0, 1, 2):
                    raise DomainError(f"invalid letter index {g!r}")
        return self._intern(self._canonical(word))

    def generator(self, g: int) -> Element:
        return self.generators[g]

    def multiply(self, x: Element, y: Element) -> Element:
        return self._intern(self._canonical(x.word + y.word))

    def multiply_gen(self, x: Element, g: int) -> Element:
        return self._intern(self._canonical(x.word + (g,)))

    def inverse(self, x: Element) -> Element:
        return self._intern(self._canonical(x.word[::-1]))

    def bruhat_leq(self, x: Element, y: Element) -> bool:
        """Bruhat order via the lifting property (agrees with the subword test)."""
        if x.length > y.length:
            return False
        if x.length == 0 or x.word == y.word:
            return True
        if x.length == y.length:
            return False
        key = (x.word, y.word)
        cached = self._bruhat.get(key)
        if cached is not None:
            return cached
        g = min(y.right_descents)
        yg = self.multiply_gen(y, g)
        if g in x.right_descents:
            res = self.bruhat_leq(self.multiply_gen(x, g), yg)
        else:
            res = self.bruhat_leq(x, yg)
        self._bruhat[key] = res
        return res

    def bruhat_lower(self, x: Element) -> tuple[Element, ...]:
        """The interval [e, x]: every element below x, in ShortLex order.

        By the subword property this is the set of subwords of any one reduced
        word for x; fine for the short x these are needed for, exponential in
        l(x) in general.
        """
        cached = self._lower.get(x)
        if cached is not None:
            return cached
        found = {self.identity}
        frontier = {(): self.identity}
        for g in x.word:
            nxt = dict(frontier)
            for sub, el in frontier.items():
                sub2 = sub + (g,)
                if sub2 not in nxt:
                    nxt[sub2] = self.element(sub2)
            frontier = nxt
        found.update(frontier.values())
        out = tuple(sorted(found, key=shortlex_key))
        self._lower[x] = out
        return out

    def prefix_decompositions(self, w: Element) -> tuple[tuple[Element, Element], ...]:
        """All pairs (u, v) with w = u·v and l(w) = l(u) + l(v), ShortLex order in u."""
        cached = self._prefix.get(w)
        if cached is not None:
            return cached
        seen = {w}
        pairs = {w: self.identity}
        stack = [w]
        while stack:
            u = stack.pop()
            v = pairs[u]
            for g in u.right_descents:
                u2 = self.multiply_gen(u, g)
                if u2 not in seen:
                    seen.add(u2)
                    pairs[u2] = self._intern(self._canonical((g,) + v.word))
                    stack.append(u2)
        out = tuple(sorted(pairs.items(), key=lambda p: p[0].sort_key()))
        self._prefix[w] = out
        return out

    # -- balls ----------------------------------------------------------------

    def ball(self, radius: int) -> "GroupBall":
        if radius < 0:
            raise DomainError("radius must be >= 0")
        b = self._balls.get(radius)
        if b is None:
            b = GroupBall(self, radius)
            self._balls[radius] = b
        return b

    # -- parabolic / classification data ---------------------------------------

    def longest_element(self, letters: Iterable[int]) -> Element:
        """Longest element of the standard parabolic subgroup on `letters`."""
        J = sorted(set(letters))
        if not J:
            return self.identity
        if len(J) == 1:
            return self.generators[J[0]]
        if len(J) == 2:
            a, b = J
            m = self._m[a][b]
            if m is None:
                raise DomainError(f"parabolic on {spell_word(J)} is infinite")
            word = tuple(a if k % 2 == 0 else b for k in range(m))
            return self.element(word)
        report = self.classification()
        if report.kind != "finite":
            raise DomainError("the full group is infinite")
        return max(self.enumerate_all(), key=shortlex_key)

    def enumerate_all(self) -> list[Element]:
        """All elements of a finite group, by BFS until a level closes off."""
        levels = [[self.identity]]
        out = [self.identity]
        while levels[-1]:
            nxt = set()
            for w in levels[-1]:
                for g in range(3):
                    u = self.multiply_gen(w, g)
                    if u.length == w.length + 1:
                        nxt.add(u)
            level = sorted(nxt, key=shortlex_key)
            levels.append(level)
            out.extend(level)
            if len(out) > 1200:
                raise InvariantViolation("finite-type enumeration did not close off")
        return out

    def classification(self) -> "ClassificationReport":
        if self._classification is None:
            self._classification = _classify(self)
        return self._classification


class GroupBall:
    """All elements of length <= radius with left/right Cayley edge tables.

    Edges that would leave the ball are stored as None; multiplying into them
    raises OutOfBallError at the Hecke layer rather than truncating silently.
    """

    def __init__(self, group: Group, radius: int, _preset=None):
        self.group = group
        self.radius = radius
        if _preset is not None:
            self.levels, self.elements, self._right, self._left = _preset
        else:
            self.levels = [[group.identity]]
            for k in range(1, radius + 1):
                nxt = set()
                for w in self.levels[k - 1]:
                    for g in range(3):
                        u = group.multiply_gen(w, g)
                        if u.length == k:
                            nxt.add(u)
                if not nxt:
                    self.levels.append([])
                    break
                self.levels.append(sorted(nxt, key=shortlex_key))
            self.elements = [w for level in self.levels for w in level]
            self._right = {}
            self._left = {}
            for w in self.elements:
                rrow = []
                lrow = []
                for g in range(3):
                    u = group.multiply_gen(w, g)
                    rrow.append(u if u.length <= radius else None)
                    u = group._intern(group._canonical((g,) + w.word))
                    lrow.append(u if u.length <= radius else None)
                self._right[w] = tuple(rrow)
                self._left[w] = tuple(lrow)
        self.index = {w: i for i, w in enumerate(self.elements)}

    def __contains__(self, w: Element) -> bool:
        return w in self.index

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def right(self, w: Element, g: int) -> Element | None:
        return self._right[w][g]

    def left(self, g: int, w: Element) -> Element | None:
        return self._left[w][g]

    def level_sizes(self) -> list[int]:
        return [len(level) for level in self.levels]


@dataclass(frozen=True)
class ClassificationReport:
    """Finite parabolic inventory plus the derived cell bound.

    `bound` is the maximal weight N of a longest element of a finite standard
    parabolic subgroup; `top` lists the longest elements attaining it, and
    `top_frames` their generator sets.
    """

    kind: str  # "finite" | "affine" | "other"
    finite_parabolics: tuple[tuple[tuple[int, ...], Element, int], ...]
    bound: int
    top: tuple[Element, ...]
    top_frames: tuple[tuple[int, ...], ...]
    w0_order: int | None
    group_order: int | None

    def frames(self) -> dict[frozenset[int], Element]:
        return {frozenset(J): w for J, w in zip(self.top_frames, self.top)}

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "finite_parabolics": [
                {"letters": spell_word(J), "longest": w.letters(), "weight": wt}
                for J, w, wt in self.finite_parabolics
            ],
            "bound": self.bound,
            "top": [w.letters() for w in self.top],
            "w0_order": self.w0_order,
            "group_order": self.group_order,
        }


def _classify(group: Group) -> ClassificationReport:
    config = group.config
    orders = [config.m_sr, config.m_st, config.m_rt]
    if all(m is not None for m in orders):
        total = sum(Fraction(1, m) for m in orders)
        if total > 1:
            kind = "finite"
        elif total == 1:
            kind = "affine"
        else:
            kind = "other"
    else:
        kind = "other"

    parabolics: list[tuple[tuple[int, ...], Element, int]] = [((), group.identity, 0)]
    for g in range(3):
        parabolics.append(((g,), group.generators[g], config.weight(g)))
    for (a, b), m in (((R, S), config.m_sr), ((S, T), config.m_st), ((R, T), config.m_rt)):
        if m is not None:
            w = group.longest_element((a, b))
            parabolics.append(((a, b), w, w.weight))
    group_order = None
    if kind == "finite":
        all_elements = group.enumerate_all()
        group_order = len(all_elements)
        w0 = max(all_elements, key=shortlex_key)
        parabolics.append(((R, S, T), w0, w0.weight))

    bound = max(wt for _, _, wt in parabolics)
    top = [(J, w, wt) for J, w, wt in parabolics if wt == bound]
    top.sort(key=lambda item: item[1].sort_key())

    w0_order = None
    if kind == "affine":
        w0_order = {(2, 4, 4): 8, (2, 3, 6): 12, (3, 3, 3): 6}[tuple(sorted(orders))]

    return ClassificationReport(
        kind=kind,
        finite_parabolics=tuple(parabolics),
        bound=bound,
        top=tuple(w for _, w, _ in top),
        top_frames=tuple(J for J, _, _ in top),
        w0_order=w0_order,
        group_order=group_order,
    )
