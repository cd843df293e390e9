"""Seeded synthetic instances: a dataset with a controlled share of conflicting
facts, matching constraints, provenance metadata and leveled preference rules."""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

SOURCES = ("S1", "S2", "S3", "S4", "S5")

RULE_TEMPLATES = (
    "pref(x1,x2) <- Src(x1,s1), Src(x2,s2), Trust(s1,t1), Trust(s2,t2), t1 > t2",
    "pref(x1,x2) <- Date(x1,d1), Date(x2,d2), d1 > d2",
    "pref(x1,x2) <- x1 = id[Attr(k,v1)], x2 = id[Attr(k,v2)], v1 < v2",
)


class GenerationError(ValueError):
    pass


@dataclass(frozen=True)
class Params:
    facts: int
    conflict_rate: float
    max_arity: int = 2
    levels: int = 2
    pref_density: float = 0.5
    seed: int = 0

    def check(self) -> None:
        if self.facts < 1:
            raise GenerationError("facts must be positive")
        if not 0.0 <= self.conflict_rate <= 1.0:
            raise GenerationError("conflict rate must lie in [0, 1]")
        if self.max_arity < 1:
            raise GenerationError("max conflict arity must be positive")
        if self.levels < 1:
            raise GenerationError("levels must be positive")
        if not 0.0 <= self.pref_density <= 1.0:
            raise GenerationError("preference density must lie in [0, 1]")
        target = round(self.conflict_rate * self.facts)
        smallest = 1 if self.max_arity == 1 else 2
        if 0 < target < smallest or (self.conflict_rate > 0 and target == 0):
            raise GenerationError(
                f"{self.facts} facts at rate {self.conflict_rate} leave too few conflicting facts "
                f"for conflicts of size {smallest}"
            )


@dataclass
class Instance:
    dkb: str
    dc: str
    meta: str
    prefs: str
    ucq: str

    def files(self, stem: str = "gen") -> dict[str, str]:
        return {
            f"{stem}.dkb": self.dkb,
            f"{stem}.dc": self.dc,
            f"{stem}.meta": self.meta,
            f"{stem}.prefs": self.prefs,
            f"{stem}.ucq": self.ucq,
        }

    def write(self, directory: str | Path, stem: str = "gen") -> list[Path]:
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        for name, text in self.files(stem).items():
            p = out / name
            p.write_bytes(text.encode("utf-8"))
            paths.append(p)
        return paths


def _group_sizes(rng: random.Random, target: int, max_arity: int) -> list[int]:
    """Split ``target`` conflicting facts into groups; each group yields conflicts."""
    if max_arity == 1:
        return [1] * target
    sizes = []
    left = target
    while left > 0:
        if left <= 3:
            size = left if left >= 2 else 0
            if size == 0:
                sizes[-1] += 1  # fold a lone leftover into the previous FD group
                break
            sizes.append(size)
            break
        size = rng.randint(2, min(max_arity, 3)) if max_arity > 2 else 2
        sizes.append(size)
        left -= size
    return sizes


def generate(params: Params) -> Instance:
    params.check()
    rng = random.Random(params.seed)
    target = round(params.conflict_rate * params.facts)
    sizes = _group_sizes(rng, target, params.max_arity) if target else []

    facts: list[str] = []
    used_arities: set[int] = set()
    key = 0
    for g, size in enumerate(sizes):
        if params.max_arity == 1:
            facts.append(f"Bad(b{g + 1})")
            continue
        if size >= 3 and rng.random() < 0.5 and size <= params.max_arity:
            used_arities.add(size)
            for m in range(size):
                facts.append(f"G{size}(g{g + 1},{m + 1})")
            continue
        key += 1
        values = rng.sample(range(1, 10 * size + 1), size)
        for v in values:
            facts.append(f"Attr(k{key},{v})")
    while len(facts) < params.facts:
        key += 1
        facts.append(f"Attr(k{key},{rng.randint(1, 1000)})")
    rng.shuffle(facts)

    dkb = "".join(f"{i + 1} | {f}\n" for i, f in enumerate(facts))

    dc_lines = ["Attr(x,y), Attr(x,z), y != z -> bot"]
    if params.max_arity == 1:
        dc_lines.append("Bad(x) -> bot")
    for j in sorted(used_arities):
        atoms = ", ".join(f"G{j}(x,y{i})" for i in range(1, j + 1))
        diffs = ", ".join(f"y{a} != y{b}" for a in range(1, j + 1) for b in range(a + 1, j + 1))
        dc_lines.append(f"{atoms}, {diffs} -> bot")
    dc = "".join(l + "\n" for l in dc_lines)

    trust = {s: rng.randint(1, 5) for s in SOURCES}
    meta_lines = [f"Trust({s}, {t})" for s, t in trust.items()]
    for i in range(len(facts)):
        if rng.random() < params.pref_density:
            meta_lines.append(f"Src(#{i + 1}, {rng.choice(SOURCES)})")
        if rng.random() < params.pref_density:
            meta_lines.append(f"Date(#{i + 1}, {rng.randint(2000, 2025)})")
    meta = "".join(l + "\n" for l in meta_lines)

    prefs_lines = []
    for lv in range(1, params.levels + 1):
        prefs_lines.append(f"[level {lv}]")
        prefs_lines.append(RULE_TEMPLATES[(lv - 1) % len(RULE_TEMPLATES)])
    prefs = "".join(l + "\n" for l in prefs_lines)

    ucq = "qkey(x) <- Attr(x,y)\nqval(y) <- Attr(x,y)\n"
    return Instance(dkb, dc, meta, prefs, ucq)
