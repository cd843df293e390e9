"""Small complete DPLL solver with unit propagation and an optional theory hook.

Literals are non-zero ints (``v`` / ``-v``) over variables ``1..n``.  A theory
object, when given, is told about assignments of the variables it owns and
may veto them; it is told about every undo as well.
"""

from __future__ import annotations

from typing import Iterable, Protocol, Sequence


class Theory(Protocol):
    def owns(self, var: int) -> bool: ...

    def assign(self, var: int, value: bool) -> bool: ...

    def unassign(self, var: int) -> None: ...


class Solver:
    def __init__(self, n_vars: int = 0):
        self.n = n_vars
        self.clauses: list[tuple[int, ...]] = []
        self.empty = False

    def new_var(self) -> int:
        self.n += 1
        return self.n

    def add(self, clause: Iterable[int]) -> None:
        lits = tuple(dict.fromkeys(clause))
        if any(-l in lits for l in lits):
            return  # tautology
        if not lits:
            self.empty = True
        self.clauses.append(lits)

    def solve(self, order: Sequence[int] | None = None, theory: Theory | None = None) -> dict[int, bool] | None:
        """A satisfying assignment (var -> bool) or None."""
        if self.empty:
            return None
        n = self.n
        occ: list[list[int]] = [[] for _ in range(2 * n + 2)]
        for ci, cl in enumerate(self.clauses):
            for lit in cl:
                occ[lit + n].append(ci)
        value: list[int] = [0] * (n + 1)  # 0 unknown, 1 true, -1 false
        trail: list[int] = []
        owned = [False] * (n + 1)
        if theory is not None:
            for v in range(1, n + 1):
                owned[v] = theory.owns(v)

        def set_lit(lit: int) -> bool:
            v = abs(lit)
            value[v] = 1 if lit > 0 else -1
            trail.append(lit)
            if owned[v] and not theory.assign(v, lit > 0):
                return False
            return True

        def undo_to(size: int) -> None:
            while len(trail) > size:
                lit = trail.pop()
                v = abs(lit)
                value[v] = 0
                if owned[v]:
                    theory.unassign(v)

        def lit_val(lit: int) -> int:
            x = value[abs(lit)]
            return x if lit > 0 else -x

        def propagate(head: int) -> bool:
            while head < len(trail):
                lit = trail[head]
                head += 1
                for ci in occ[-lit + n]:
                    unit = 0
                    free = 0
                    sat = False
                    for l in self.clauses[ci]:
                        x = lit_val(l)
                        if x == 1:
                            sat = True
                            break
                        if x == 0:
                            free += 1
                            unit = l
                            if free > 1:
                                break
                    if sat or free > 1:
                        continue
                    if free == 0:
                        return False
                    if not set_lit(unit):
                        return False
            return True

        # unit clauses first
        for cl in self.clauses:
            if len(cl) == 1:
                x = lit_val(cl[0])
                if x == -1:
                    return None
                if x == 0 and not set_lit(cl[0]):
                    return None
        if not propagate(0):
            return None

        seq = list(order) if order is not None else []
        seen = set(seq)
        seq += [v for v in range(1, n + 1) if v not in seen]

        # decision stack entries: (trail size before, literal, flipped?)
        stack: list[tuple[int, int, bool]] = []
        pos = 0
        while True:
            while pos < len(seq) and value[seq[pos]] != 0:
                pos += 1
            if pos == len(seq):
                return {v: value[v] == 1 for v in range(1, n + 1)}
            lit = seq[pos]
            stack.append((len(trail), lit, False))
            ok = set_lit(lit) and propagate(len(trail) - 1)
            while not ok:
                # backtrack to the most recent decision with an untried branch
                while stack and stack[-1][2]:
                    size, _, _ = stack.pop()
                    undo_to(size)
                if not stack:
                    return None
                size, lit, _ = stack.pop()
                undo_to(size)
                stack.append((size, -lit, True))
                ok = set_lit(-lit) and propagate(size)
            pos = 0


class AcyclicOrientation:
    """Theory for orientation variables: the chosen edges plus fixed edges stay acyclic.

    ``fixed`` maps node -> bitmask of nodes it already reaches; ``edges`` maps
    each owned variable to the edge it adds when true and when false.
    """

    def __init__(self, n_nodes: int, fixed: list[int], edges: dict[int, tuple[tuple[int, int], tuple[int, int]]]):
        self.fixed = fixed
        self.edges = edges
        self.succ = [0] * n_nodes
        self.active: dict[int, tuple[int, int]] = {}

    def owns(self, var: int) -> bool:
        return var in self.edges

    def _reaches(self, start: int, goal: int) -> bool:
        seen = 1 << start
        todo = [start]
        while todo:
            v = todo.pop()
            nxt = (self.fixed[v] | self.succ[v]) & ~seen
            if nxt >> goal & 1:
                return True
            seen |= nxt
            while nxt:
                low = nxt & -nxt
                todo.append(low.bit_length() - 1)
                nxt ^= low
        return False

    def assign(self, var: int, value: bool) -> bool:
        x, y = self.edges[var][0 if value else 1]
        self.active[var] = (x, y)
        self.succ[x] |= 1 << y
        return not self._reaches(y, x)

    def unassign(self, var: int) -> None:
        x, y = self.active.pop(var)
        # several variables never share an edge, so clearing the bit is safe
        self.succ[x] &= ~(1 << y)
