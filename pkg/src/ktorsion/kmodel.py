"""Lattice models of Grothendieck rings.

A model is a list of generators ``m * sum_{a in orbit} x^a`` inside the
truncated ring of a split product of projective spaces.  Two families:

* products of Severi-Brauer varieties, from the index data of the algebras
  (the lattice spanned by ``ind(A^a) * x^a``);
* products of Weil-restricted conics (quadric surfaces with non-trivial
  discriminant), where Galois orbits of monomials carry multipliers built
  from the indices e, f, g over the discriminant field.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .intlattice import IntegerLattice
from .truncring import Monomial, RingSpec, TruncPoly, expand_line_bundle, monomial_key


class ConfigError(ValueError):
    """Invalid model input; ``path`` names the offending field."""

    def __init__(self, message: str, path: str = "", line: int | None = None):
        self.message = message
        self.path = path
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if path:
            where.append(f"field {path}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


# ---------------------------------------------------------------------------
# Index data for products of Severi-Brauer varieties
# ---------------------------------------------------------------------------


def _tuples(degrees: Sequence[int]) -> list[tuple[int, ...]]:
    return sorted(itertools.product(*(range(d) for d in degrees)), key=monomial_key)


@dataclass(frozen=True)
class IndexFunction:
    """Indices ``ind(A_1^{i_1} x ... x A_n^{i_n})`` for ``0 <= i_j < d_j``.

    Every tuple must be present; nothing is filled in by default.
    """

    degrees: tuple[int, ...]
    table: Mapping[tuple[int, ...], int]
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        degrees = tuple(int(d) for d in self.degrees)
        if any(d < 1 for d in degrees):
            raise ConfigError(f"degrees must be positive, got {degrees}", "degrees")
        table = {tuple(int(i) for i in k): int(v) for k, v in self.table.items()}
        expected = set(itertools.product(*(range(d) for d in degrees)))
        extra = set(table) - expected
        if extra:
            raise ConfigError(f"tuples out of range: {sorted(extra)}", "index_table")
        missing = expected - set(table)
        if missing:
            raise ConfigError(f"missing tuples: {sorted(missing)[:5]}", "index_table")
        if degrees and table[(0,) * len(degrees)] != 1:
            raise ConfigError("the zero tuple must have index 1", "index_table")
        bound = math.prod(degrees)
        for k, v in table.items():
            if v < 1 or bound % v:
                raise ConfigError(f"index {v} of {k} does not divide {bound}", "index_table")
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "provenance", tuple(self.provenance))

    @classmethod
    def from_rule(cls, degrees: Sequence[int], rule: Callable[[tuple[int, ...]], int],
                  provenance: Sequence[str] = ()) -> "IndexFunction":
        return cls(tuple(degrees), {t: rule(t) for t in _tuples(degrees)}, tuple(provenance))

    @property
    def n(self) -> int:
        return len(self.degrees)

    def __call__(self, t: Sequence[int]) -> int:
        t = tuple(int(x) % d for x, d in zip(t, self.degrees))
        return self.table[t]

    def single(self, i: int) -> int:
        """Index of the i-th algebra (0-based)."""
        t = [0] * self.n
        t[i] = 1
        return self(t)

    def tuples(self) -> list[tuple[int, ...]]:
        return _tuples(self.degrees)

    def to_json(self) -> dict:
        return {
            "kind": "split",
            "degrees": list(self.degrees),
            "index_table": {",".join(map(str, t)): self.table[t] for t in self.tuples()},
        }


def uniform_index(degrees: Sequence[int], value: int) -> IndexFunction:
    """Every non-trivial tuple gets the same index ``value``.

    With ``value = p`` for algebras of prime degree p this is the index data of
    a product where every tensor combination is a division algebra of degree p.
    """
    degrees = tuple(degrees)
    return IndexFunction.from_rule(
        degrees, lambda t: value if any(t) else 1, (f"uniform index {value}",))


def normalize_config(idx: IndexFunction) -> IndexFunction:
    """Drop split factors (``ind(A_i) = 1``); the torsion of CH^2 is unchanged."""
    keep = [i for i in range(idx.n) if idx.single(i) > 1]
    if len(keep) == idx.n:
        return idx
    dropped = [i for i in range(idx.n) if i not in keep]
    degrees = tuple(idx.degrees[i] for i in keep)
    table = {}
    for t in _tuples(degrees):
        full = [0] * idx.n
        for pos, i in enumerate(keep):
            full[i] = t[pos]
        table[t] = idx(full)
    note = "dropped split factor(s) " + ",".join(str(i + 1) for i in dropped)
    return IndexFunction(degrees, table, idx.provenance + (note,))


# ---------------------------------------------------------------------------
# Generators and lattice models
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KGenerator:
    """The class ``multiplier * sum_{a in orbit} x^a``."""

    multiplier: int
    orbit: tuple[Monomial, ...]

    def __post_init__(self):
        if int(self.multiplier) < 1:
            raise ValueError(f"multiplier must be positive, got {self.multiplier}")
        orbit = tuple(tuple(int(x) for x in a) for a in self.orbit)
        if not orbit:
            raise ValueError("orbit must be non-empty")
        if any(x < 0 for a in orbit for x in a):
            raise ValueError(f"negative exponent in {orbit}")
        object.__setattr__(self, "multiplier", int(self.multiplier))
        object.__setattr__(self, "orbit", orbit)

    @property
    def rank(self) -> int:
        return self.multiplier * len(self.orbit)

    def label(self) -> str:
        def mono(a):
            parts = [f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(a) if e]
            return "*".join(parts) or "1"

        body = " + ".join(mono(a) for a in self.orbit)
        if len(self.orbit) > 1:
            body = f"({body})"
        return body if self.multiplier == 1 else f"{self.multiplier}*{body}"


def as_poly(gen: KGenerator, spec: RingSpec) -> TruncPoly:
    total = spec.zero()
    for a in gen.orbit:
        total = total + expand_line_bundle(spec, a) + 1
    return total * gen.multiplier


def coordinates(gen: KGenerator, spec: RingSpec) -> list[int]:
    """Coordinates of the generator in the y-monomial basis (constant term included)."""
    for a in gen.orbit:
        if len(a) != spec.n:
            raise ValueError(f"exponent {a} does not fit {spec.n} variables")
    return as_poly(gen, spec).to_vector()


class KLatticeModel:
    """A sublattice of the ambient ring given by a generator list."""

    def __init__(self, spec: RingSpec, generators: Iterable[KGenerator], name: str = ""):
        self.spec = spec
        self.generators = tuple(generators)
        self.name = name
        trivial = KGenerator(1, ((0,) * spec.n,))
        if trivial not in self.generators:
            raise ValueError("a model must contain the trivial generator 1")

    @cached_property
    def vectors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(coordinates(g, self.spec)) for g in self.generators)

    @cached_property
    def lattice(self) -> IntegerLattice:
        return IntegerLattice(self.spec.rank, self.vectors)

    def __repr__(self):
        return f"KLatticeModel({self.name!r}, D={self.spec.rank}, {len(self.generators)} generators)"


def quillen_generators(idx: IndexFunction) -> tuple[KLatticeModel, KLatticeModel]:
    """Split model ``{x^a}`` and the model ``{ind(a) x^a}`` of the product."""
    spec = RingSpec(idx.degrees)
    tuples = idx.tuples()
    split = KLatticeModel(spec, [KGenerator(1, (t,)) for t in tuples], "split")
    twisted = KLatticeModel(spec, [KGenerator(idx(t), (t,)) for t in tuples], "quillen")
    return split, twisted


# ---------------------------------------------------------------------------
# Products of quadric surfaces
# ---------------------------------------------------------------------------

QUADRIC_CASES = (
    "TwoQuadricsBiquadratic",
    "TwoQuadricsSameField",
    "TwoQuadricsOneTrivialDisc",
    "ThreeQuadricsSameDisc",
)

_PAIR_KEYS = ("12", "34", "56")


def _power_of_two(v: int) -> bool:
    return v >= 1 and v & (v - 1) == 0


@dataclass(frozen=True)
class QuadricConfig:
    """Index data over the discriminant field for a product of quadric surfaces.

    For two quadrics ``e`` has keys ``"1"``, ``"2"`` and ``f`` the key ``"12"``;
    for three quadrics both are keyed by the variable pairs ``"12"``, ``"34"``,
    ``"56"`` (``f["12"]`` is the index of the product of the other two
    algebras).  ``d`` is the degree of the chosen splitting field.
    """

    case: str
    e: Mapping[str, int]
    f: Mapping[str, int]
    g: int | None = None
    d: int = 2

    def __post_init__(self):
        if self.case not in QUADRIC_CASES:
            raise ConfigError(f"unsupported case {self.case!r}", "case")
        three = self.case == "ThreeQuadricsSameDisc"
        e_keys = _PAIR_KEYS if three else ("1", "2")
        f_keys = _PAIR_KEYS if three else ("12",)
        e = {str(k): int(v) for k, v in dict(self.e).items()}
        f = {str(k): int(v) for k, v in dict(self.f).items()}
        if set(e) != set(e_keys):
            raise ConfigError(f"expected keys {list(e_keys)}, got {sorted(e)}", "e")
        if set(f) != set(f_keys):
            raise ConfigError(f"expected keys {list(f_keys)}, got {sorted(f)}", "f")
        for k, v in e.items():
            if v not in (1, 2):
                raise ConfigError(f"e must be 1 or 2, got {v}", f"e.{k}")
        for k, v in f.items():
            if v not in (1, 2, 4):
                raise ConfigError(f"f must be 1, 2 or 4, got {v}", f"f.{k}")
        g = self.g
        if three:
            if g is None or int(g) not in (1, 2, 4, 8):
                raise ConfigError(f"g must be one of 1, 2, 4, 8, got {g}", "g")
            g = int(g)
        elif g is not None:
            raise ConfigError("g only applies to three quadrics", "g")
        if int(self.d) not in (2, 4, 8):
            raise ConfigError(f"d must be 2, 4 or 8, got {self.d}", "d")
        object.__setattr__(self, "e", {k: e[k] for k in e_keys})
        object.__setattr__(self, "f", {k: f[k] for k in f_keys})
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "d", int(self.d))

    @property
    def is_three(self) -> bool:
        return self.case == "ThreeQuadricsSameDisc"

    def to_json(self) -> dict:
        out = {"kind": "quadric", "case": self.case, "e": dict(self.e), "f": dict(self.f)}
        if self.g is not None:
            out["g"] = self.g
        out["d"] = self.d
        return out

    def __hash__(self):
        return hash((self.case, tuple(self.e.items()), tuple(self.f.items()), self.g, self.d))

    def __eq__(self, other):
        if not isinstance(other, QuadricConfig):
            return NotImplemented
        return self.to_json() == other.to_json()

    def label(self) -> str:
        e = ",".join(f"{v}" for v in self.e.values())
        f = ",".join(f"{v}" for v in self.f.values())
        g = "" if self.g is None else f" g={self.g}"
        return f"{self.case} e=({e}) f=({f}){g} d={self.d}"


@dataclass(frozen=True)
class _Layout:
    """Variables of each factor and the Galois action on them."""

    factors: tuple[tuple[int, ...], ...]
    group: tuple[tuple[int, ...], ...]  # permutations of variable positions

    @property
    def nvars(self) -> int:
        return sum(len(f) for f in self.factors)


def _swap(n: int, pairs: Sequence[tuple[int, int]]) -> tuple[int, ...]:
    perm = list(range(n))
    for a, b in pairs:
        perm[a], perm[b] = b, a
    return tuple(perm)


def _closure(n: int, gens: Sequence[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    ident = tuple(range(n))
    group = {ident}
    frontier = [ident]
    while frontier:
        p = frontier.pop()
        for g in gens:
            q = tuple(g[i] for i in p)
            if q not in group:
                group.add(q)
                frontier.append(q)
    return tuple(sorted(group))


def _layout(case: str) -> _Layout:
    if case == "TwoQuadricsBiquadratic":
        return _Layout(((0, 1), (2, 3)), _closure(4, [_swap(4, [(0, 1)]), _swap(4, [(2, 3)])]))
    if case == "TwoQuadricsSameField":
        return _Layout(((0, 1), (2, 3)), _closure(4, [_swap(4, [(0, 1), (2, 3)])]))
    if case == "TwoQuadricsOneTrivialDisc":
        return _Layout(((0,), (1, 2)), _closure(3, [_swap(3, [(1, 2)])]))
    if case == "ThreeQuadricsSameDisc":
        return _Layout(((0, 1), (2, 3), (4, 5)),
                       _closure(6, [_swap(6, [(0, 1), (2, 3), (4, 5)])]))
    raise ConfigError(f"unsupported case {case!r}", "case")


def galois_orbits(case: str) -> list[tuple[Monomial, ...]]:
    """Orbits of square-free monomials under the Galois action, in a fixed order."""
    lay = _layout(case)
    n = lay.nvars
    seen = set()
    orbits = []
    for a in sorted(itertools.product((0, 1), repeat=n), key=monomial_key):
        if a in seen:
            continue
        orb = sorted({tuple(a[p[i]] for i in range(n)) for p in lay.group}, key=monomial_key)
        seen.update(orb)
        orbits.append(tuple(orb))
    return orbits


def orbit_types(case: str, a: Monomial) -> tuple[int, ...]:
    """Per-factor count of variables present in the monomial ``a``."""
    return tuple(sum(a[i] for i in fac) for fac in _layout(case).factors)


def orbit_multiplier(cfg: QuadricConfig, a: Monomial) -> int:
    """Multiplier of the orbit of ``a`` in K(X).

    Factors meeting the orbit in exactly one variable decide it: none gives 1,
    one factor gives its ``e``, two give the ``f`` of the remaining factor
    (the only ``f`` for two quadrics), all three give ``g``.
    """
    types = orbit_types(cfg.case, a)
    ones = [i for i, t in enumerate(types) if t == 1]
    if not ones:
        return 1
    if cfg.is_three:
        if len(ones) == 1:
            return cfg.e[_PAIR_KEYS[ones[0]]]
        if len(ones) == 2:
            (other,) = set(range(3)) - set(ones)
            return cfg.f[_PAIR_KEYS[other]]
        return cfg.g
    if len(ones) == 1:
        return cfg.e[str(ones[0] + 1)]
    return cfg.f["12"]


def weil_generators(cfg: QuadricConfig) -> tuple[KLatticeModel, KLatticeModel, KLatticeModel]:
    """Models of K over the full splitting field, over E, and of X itself."""
    lay = _layout(cfg.case)
    spec = RingSpec((2,) * lay.nvars)
    orbits = galois_orbits(cfg.case)
    full = KLatticeModel(spec, [KGenerator(1, (a,)) for a in spec.monomials], "split")
    over_e = KLatticeModel(spec, [KGenerator(1, o) for o in orbits], "orbit sums")
    twisted = KLatticeModel(
        spec, [KGenerator(orbit_multiplier(cfg, o[0]), o) for o in orbits], cfg.label())
    return full, over_e, twisted


def quadric_index_formula(cfg: QuadricConfig) -> int:
    """Closed-form value of ``[K(X_E) : K(X)]`` for each case."""
    if cfg.case == "TwoQuadricsBiquadratic":
        return cfg.e["1"] ** 2 * cfg.e["2"] ** 2 * cfg.f["12"]
    if cfg.case == "TwoQuadricsSameField":
        return cfg.e["1"] ** 2 * cfg.e["2"] ** 2 * cfg.f["12"] ** 2
    if cfg.case == "TwoQuadricsOneTrivialDisc":
        return cfg.e["1"] ** 2 * cfg.e["2"] * cfg.f["12"]
    return (math.prod(cfg.e.values()) * math.prod(cfg.f.values()) * cfg.g) ** 4


# ---------------------------------------------------------------------------
# JSON configuration
# ---------------------------------------------------------------------------


def _parse_key(key: str, n: int) -> tuple[int, ...]:
    try:
        t = tuple(int(p) for p in key.replace("(", "").replace(")", "").split(","))
    except ValueError:
        raise ConfigError(f"bad tuple key {key!r}", f"index_table.{key}") from None
    if len(t) != n:
        raise ConfigError(f"key {key!r} has {len(t)} entries, expected {n}", f"index_table.{key}")
    return t


def config_from_dict(data: Mapping) -> IndexFunction | QuadricConfig:
    if not isinstance(data, Mapping):
        raise ConfigError("top level must be an object")
    kind = data.get("kind")
    if kind == "split":
        degrees = data.get("degrees")
        if not isinstance(degrees, list) or not all(isinstance(d, int) for d in degrees):
            raise ConfigError("expected a list of integers", "degrees")
        table = data.get("index_table")
        if not isinstance(table, Mapping):
            raise ConfigError("expected an object", "index_table")
        parsed = {}
        for k, v in table.items():
            if not isinstance(v, int):
                raise ConfigError(f"expected an integer, got {v!r}", f"index_table.{k}")
            parsed[_parse_key(str(k), len(degrees))] = v
        return IndexFunction(tuple(degrees), parsed, tuple(data.get("provenance", ())))
    if kind == "quadric":
        for key in ("case", "e", "f"):
            if key not in data:
                raise ConfigError("missing field", key)
        for key in ("e", "f"):
            if not isinstance(data[key], Mapping):
                raise ConfigError("expected an object", key)
        return QuadricConfig(data["case"], data["e"], data["f"], data.get("g"), data.get("d", 2))
    raise ConfigError(f"kind must be 'split' or 'quadric', got {kind!r}", "kind")


def load_config(text: str) -> IndexFunction | QuadricConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(exc.msg, line=exc.lineno) from None
    try:
        return config_from_dict(data)
    except ConfigError as exc:
        if exc.line is not None or not exc.path:
            raise
        raise ConfigError(exc.message, exc.path, _field_line(text, exc.path)) from None


def _field_line(text: str, path: str) -> int | None:
    """Line of the innermost key named in a dotted ``path``, if it can be found."""
    keys = path.split(".")
    start = 0
    line = None
    for key in keys:
        pos = text.find(f'"{key}"', start)
        if pos < 0:
            break
        start = pos
        line = text.count("\n", 0, pos) + 1
    return line
