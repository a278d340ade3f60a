"""Exact unimodal category on small graphs.

A unimodal summand is determined by a rooted induced subtree (its support and
mode) and values that never increase away from the root. For a fixed family of
rooted supports, whether ``f`` splits over them is a linear feasibility
question, decided exactly by :mod:`ucat.lp`. The search runs over families of
rooted supports.

Reductions used by the search (all exact):

* Supports may be taken to be *maximal* induced subtrees: padding a summand
  with zeros on extra tree vertices keeps it unimodal.
* Two summands with the same rooted support merge into one, so for the plain
  category families are sets, not multisets.
* Components of ``supp(f)`` are solved independently; summand supports are
  connected subsets of ``supp(f)``.
* Capacity bound: a summand not rooted at ``v`` reaches ``v`` through one
  neighbour ``w`` and all summands entering through ``w`` carry at most
  ``f(w)`` there. Vertices that cannot be filled this way need their own root.
* Infeasible LP: a Farkas certificate marks the vertices in deficit, and only
  candidates meeting them can help.
* Root sets: the roots of ``k`` summands lie in some ``k``-set ``R``. A flow
  relaxation (mass entering each vertex from each neighbour or from a root in
  ``R``, with the joint limits at each vertex) rules out many ``R`` at once;
  families whose roots fit in no surviving ``R`` are skipped.
* Symmetry: once every family through a top-level candidate has failed, its
  images under automorphisms of ``(g, f)`` are excluded too.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from . import lp
from .graph import (
    Graph,
    VertexFunction,
    automorphisms,
    bits,
    component_masks,
    is_tree,
    map_mask,
    maximal_induced_subtrees,
    subdivide,
)
from .tree import Component, Decomposition, make_component
from .unimodality import is_strong_decomposition, is_unimodal

DEFAULT_MAX_VERTICES = 14
DEFAULT_MAX_K = 6
ROOT_SET_LIMIT = 20_000  # skip the root-set filter beyond this many sets


class BudgetExceeded(RuntimeError):
    """A configured size limit was hit; ``parameter`` names which one."""

    def __init__(self, parameter: str, limit, value=None):
        msg = f"budget exceeded: {parameter} limit {limit}"
        if value is not None:
            msg += f" (instance needs {value})"
        super().__init__(msg)
        self.parameter = parameter
        self.limit = limit
        self.value = value


@dataclass(frozen=True)
class Budget:
    max_vertices: int = DEFAULT_MAX_VERTICES
    max_k: int = DEFAULT_MAX_K
    max_pivots: int | None = None
    max_bases: int = 2000  # per support family, strong search only
    max_families: int = 200_000  # strong search only

    @classmethod
    def from_env(cls, **overrides) -> "Budget":
        env = os.environ.get("UCAT_BUDGET_VERTICES")
        kw = {}
        if env:
            kw["max_vertices"] = int(env)
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)


@dataclass(frozen=True)
class SupportCandidate:
    support: int
    root: int
    parent: dict = field(compare=False, hash=False, repr=False)
    cap: dict = field(compare=False, hash=False, repr=False)


@dataclass(frozen=True)
class UcatResult:
    value: int
    certificate: Decomposition
    refinement: int = 0
    p: int = 1
    strong: bool = False
    exact: bool = False
    warnings: tuple = ()
    raised_above_weak: bool = False

    @property
    def graph(self) -> Graph:
        return self.certificate.target.graph


@dataclass(frozen=True)
class Decision:
    ok: bool
    certificate: Decomposition | None = None
    complete: bool = True

    def __bool__(self):
        return self.ok


# ------------------------------------------------------------- candidates

def support_candidates(g: Graph, f: VertexFunction, within: int) -> list[SupportCandidate]:
    """Rooted maximal induced subtrees of ``g[within]``, in search order:
    decreasing root value, then support bitset, then root."""
    vals = f.values
    out = []
    adj = g.adjacency
    for t in maximal_induced_subtrees(g, within):
        for r in bits(t):
            parent = {r: -1}
            cap = {r: vals[r]}
            q = deque([r])
            while q:
                u = q.popleft()
                for w in adj[u]:
                    if (t >> w) & 1 and w not in parent:
                        parent[w] = u
                        cap[w] = min(cap[u], vals[w])
                        q.append(w)
            out.append(SupportCandidate(t, r, parent, cap))
    out.sort(key=lambda c: (-vals[c.root], c.support, c.root))
    return out


def build_system(f: VertexFunction, family, within: int) -> lp.FeasibilitySystem:
    """Sum and monotonicity constraints for summands on ``family``."""
    sysm = lp.FeasibilitySystem()
    at_vertex = {v: {} for v in bits(within)}
    for i, c in enumerate(family):
        for v in bits(c.support):
            sysm.add_variable((i, v))
            at_vertex[v][(i, v)] = 1
        for v, u in c.parent.items():
            if u >= 0:
                sysm.inequalities.append(({(i, u): 1, (i, v): -1}, 0))
    for v, coeffs in at_vertex.items():
        sysm.equalities.append((coeffs, f.values[v]))
    return sysm


def flow_system(g: Graph, f: VertexFunction, within: int, roots: int) -> lp.FeasibilitySystem:
    """Relaxation of "``f`` on ``within`` splits into unimodal summands rooted
    in ``roots``". ``("F", u, v)`` is the mass entering ``v`` with parent
    ``u``; ``("R", v)`` is the mass of summands rooted at ``v``."""
    vals = f.values
    sysm = lp.FeasibilitySystem()
    verts = bits(within)
    nbrs = {v: [w for w in g.adjacency[v] if (within >> w) & 1] for v in verts}
    for v in verts:
        if (roots >> v) & 1:
            sysm.add_variable(("R", v))
        for u in nbrs[v]:
            sysm.add_variable(("F", u, v))
    for v in verts:
        coeffs = {("F", u, v): 1 for u in nbrs[v]}
        if (roots >> v) & 1:
            coeffs[("R", v)] = 1
        sysm.equalities.append((coeffs, vals[v]))
    for u in verts:
        for v in nbrs[u]:
            if u < v:
                sysm.inequalities.append(({("F", u, v): -1, ("F", v, u): -1},
                                          -min(vals[u], vals[v])))
            # what leaves u towards v arrived at u from elsewhere or started there
            coeffs = {("F", p, u): 1 for p in nbrs[u] if p != v}
            if (roots >> u) & 1:
                coeffs[("R", u)] = 1
            coeffs[("F", u, v)] = -1
            sysm.inequalities.append((coeffs, 0))
    return sysm


def _components_from_assignment(n: int, family, assignment) -> list[Component]:
    comps = []
    for i, c in enumerate(family):
        vals = [Fraction(0)] * n
        for v in bits(c.support):
            vals[v] = assignment[(i, v)]
        if any(vals):
            comps.append(make_component(vals, root=c.root))
    return comps


# ----------------------------------------------------------------- search

class _Search:
    """Families of rooted supports for one component of ``supp(f)``."""

    def __init__(self, g: Graph, f: VertexFunction, within: int, budget: Budget):
        self.g = g
        self.f = f
        self.within = within
        self.budget = budget
        self.verts = bits(within)
        self.cands = support_candidates(g, f, within)
        self.containing = {v: [] for v in self.verts}
        self.rooted_at = {v: [] for v in self.verts}
        for idx, c in enumerate(self.cands):
            for v in bits(c.support):
                self.containing[v].append(idx)
            self.rooted_at[c.root].append(idx)
        self.lp_calls = 0
        self.nodes = 0
        colors = [x if (within >> i) & 1 else Fraction(0) for i, x in enumerate(f.values)]
        self.perms = automorphisms(g, colors)[1:]
        self.index = {(c.support, c.root): i for i, c in enumerate(self.cands)}
        self.root_sets = None
        self._root_cache = {}

    def _must_root(self, k: int) -> int:
        """Vertices that ``k`` summands can only fill by rooting one there."""
        vals = self.f.values
        out = 0
        for v in self.verts:
            caps = sorted((vals[w] for w in self.g.adjacency[v] if (self.within >> w) & 1),
                          reverse=True)
            if sum(caps[:k]) < vals[v]:
                out |= 1 << v
        return out

    def _flow_ok(self, roots: int) -> bool:
        got = self._root_cache.get(roots)
        if got is None:
            self.lp_calls += 1
            sysm = flow_system(self.g, self.f, self.within, roots)
            got = lp.lp_feasible(sysm, self.budget.max_pivots) is not None
            for p in self.perms:
                self._root_cache[map_mask(p, roots)] = got
            self._root_cache[roots] = got
        return got

    def prepare_roots(self, k: int) -> bool:
        """Compute the surviving root sets for ``k`` summands. ``False``
        means none survive, so no family of ``k`` summands works."""
        must = self._must_root(k)
        size = min(k, len(self.verts))
        if must.bit_count() > size:
            self.root_sets = []
            return False
        free = [v for v in self.verts if not (must >> v) & 1]
        extra = size - must.bit_count()
        n_sets = comb(len(free), extra)
        # one LP per root set only pays off when it rules out many families
        if n_sets > ROOT_SET_LIMIT or comb(len(self.cands), k) <= 2 * n_sets:
            self.root_sets = None
            return True
        sets = []
        for combo in combinations(free, extra):
            roots = must
            for v in combo:
                roots |= 1 << v
            if self._flow_ok(roots):
                sets.append(roots)
        self.root_sets = sets
        return bool(sets)

    def _roots_fit(self, chosen) -> bool:
        if self.root_sets is None:
            return True
        rm = 0
        for idx in chosen:
            rm |= 1 << self.cands[idx].root
        return any(r & rm == rm for r in self.root_sets)

    def orbit(self, idx: int) -> set:
        """Images of candidate ``idx`` under the known automorphisms."""
        seen = {idx}
        todo = [idx]
        while todo:
            c = self.cands[todo.pop()]
            for p in self.perms:
                j = self.index[(map_mask(p, c.support), p[c.root])]
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
        return seen

    # capacity bookkeeping -------------------------------------------------
    def _needs(self, chosen, slots):
        """``None`` if the family cannot be completed with ``slots`` more
        summands, else ``(unsatisfied, needs_root)`` vertex lists."""
        vals = self.f.values
        adj = self.g.adjacency
        unsat, needs_root = [], []
        for v in self.verts:
            through = {}
            rooted = False
            for idx in chosen:
                c = self.cands[idx]
                if not (c.support >> v) & 1:
                    continue
                par = c.parent[v]
                if par < 0:
                    rooted = True
                    break
                through[par] = through.get(par, 0) + c.cap[v]
            if rooted:
                continue
            have = 0
            spare = []
            for w in adj[v]:
                if (self.within >> w) & 1:
                    got = min(vals[w], through.get(w, 0))
                    have += got
                    spare.append(vals[w] - got)
            if have >= vals[v]:
                continue
            if slots == 0:
                return None
            spare.sort(reverse=True)
            unsat.append(v)
            if have + sum(spare[:slots]) < vals[v]:
                needs_root.append(v)
        if len(needs_root) > slots:
            return None
        return unsat, needs_root

    def _lp(self, family):
        """``(assignment, None)`` or ``(None, deficit_mask)``; only candidates
        meeting the deficit mask can make the family feasible."""
        self.lp_calls += 1
        sysm = build_system(self.f, [self.cands[i] for i in family], self.within)
        sol, y = lp.lp_feasible(sysm, self.budget.max_pivots, farkas=True)
        if sol is not None:
            return sol, 0
        deficit = 0
        for v, yv in zip(self.verts, y):
            if yv > 0:
                deficit |= 1 << v
        return None, deficit

    def _hitting(self, deficit, allowed):
        cands = self.cands
        return [i for i, a in enumerate(allowed) if a and cands[i].support & deficit]

    # weak search -----------------------------------------------------------
    def find(self, k: int):
        """A feasible family of at most ``k`` distinct candidates, with its
        assignment, or ``None``."""
        if not self.prepare_roots(k):
            return None
        allowed = self._initial_allowed()
        return self._find([], allowed, k)

    def _initial_allowed(self):
        if self.root_sets is None:
            return [True] * len(self.cands)
        union = 0
        for r in self.root_sets:
            union |= r
        return [bool((union >> c.root) & 1) for c in self.cands]

    def _find(self, chosen, allowed, k):
        self.nodes += 1
        if not self._roots_fit(chosen):
            return None
        slots = k - len(chosen)
        need = self._needs(chosen, slots)
        if need is None:
            return None
        unsat, needs_root = need
        if not unsat:
            sol, deficit = self._lp(chosen)
            if sol is not None:
                return chosen, sol
            if slots == 0:
                return None
            branch = self._hitting(deficit, allowed)
        else:
            branch = self._branch_set(unsat, needs_root, allowed)
        allowed = allowed[:]
        for idx in branch:
            if not allowed[idx]:
                continue
            allowed[idx] = False
            got = self._find(chosen + [idx], allowed, k)
            if got is not None:
                return got
            if not chosen:
                for j in self.orbit(idx):
                    allowed[j] = False
        return None

    def _branch_set(self, unsat, needs_root, allowed):
        if needs_root:
            pools = [[i for i in self.rooted_at[v] if allowed[i]] for v in needs_root]
        else:
            pools = [[i for i in self.containing[v] if allowed[i]] for v in unsat]
        return min(pools, key=len)

    # strong search ----------------------------------------------------------
    def families(self, k: int):
        """Every multiset of exactly ``k`` candidates passing the capacity
        bound and LP feasibility (each yielded once)."""
        self._family_count = 0
        if not self.prepare_roots(k):
            return
        allowed = self._initial_allowed()
        yield from self._families([], allowed, k)

    def _families(self, chosen, allowed, k):
        if not self._roots_fit(chosen):
            return
        slots = k - len(chosen)
        need = self._needs(chosen, slots)
        if need is None:
            return
        unsat, needs_root = need
        if not unsat:
            sol, deficit = self._lp(chosen)
            if slots == 0:
                if sol is not None:
                    self._family_count += 1
                    if self._family_count > self.budget.max_families:
                        raise BudgetExceeded("max_families", self.budget.max_families)
                    yield chosen
                return
            if sol is not None:
                branch = [i for i, a in enumerate(allowed) if a]
            else:
                branch = self._hitting(deficit, allowed)
        else:
            branch = self._branch_set(unsat, needs_root, allowed)
        allowed = allowed[:]
        for idx in branch:
            if not allowed[idx]:
                continue
            # a chosen candidate stays allowed: multisets may repeat it
            yield from self._families(chosen + [idx], allowed, k)
            allowed[idx] = False
            if not chosen:
                # families through an image of idx are images of ones seen
                for j in self.orbit(idx):
                    allowed[j] = False


def _restricted(f: VertexFunction, within: int) -> VertexFunction:
    return VertexFunction(f.graph, tuple(x if (within >> i) & 1 else Fraction(0)
                                         for i, x in enumerate(f.values)))


def _component_min(g, f, within, cap, budget):
    """``(k, components)`` minimal for ``f`` restricted to ``within`` with
    ``k <= cap``, else ``None``."""
    if cap < 1:
        return None
    part = _restricted(f, within)
    if is_unimodal(g, part):
        return 1, [make_component(part.values)]
    if cap < 2:
        return None
    search = _Search(g, f, within, budget)
    for k in range(2, cap + 1):
        got = search.find(k)
        if got is not None:
            family, sol = got
            fam = [search.cands[i] for i in family]
            comps = _components_from_assignment(g.vertex_count, fam,
                                                {(fi, v): x for (fi, v), x in sol.items()})
            return len(comps), comps
    return None


def _prepare(g: Graph, f: VertexFunction, r: int, budget: Budget):
    if f.graph != g:
        raise ValueError("function is defined on a different graph")
    h, fh, _ = subdivide(g, f, r)
    if h.vertex_count > budget.max_vertices:
        raise BudgetExceeded("max_vertices", budget.max_vertices, h.vertex_count)
    return h, fh


def ucat_leq(g: Graph, f: VertexFunction, k: int, r: int = 0,
             budget: Budget | None = None) -> Decision:
    """Whether ``f`` (refined ``r`` times) is a sum of at most ``k`` unimodal
    vertex-supported functions; ``True`` answers carry a verified certificate."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    budget = budget or Budget.from_env()
    h, fh = _prepare(g, f, r, budget)
    parts = component_masks(h, fh.support)
    if len(parts) > k:
        return Decision(False)
    comps = []
    for i, within in enumerate(parts):
        cap = k - len(comps) - (len(parts) - i - 1)
        got = _component_min(h, fh, within, cap, budget)
        if got is None:
            return Decision(False)
        comps.extend(got[1])
    dec = Decomposition(fh, "sum", tuple(comps))
    if not dec.verify():
        raise AssertionError("exact solver produced an invalid certificate")
    return Decision(True, dec)


def exact_ucat(g: Graph, f: VertexFunction, p: int = 1, r: int = 0,
               budget: Budget | None = None) -> UcatResult:
    """Smallest ``k`` with ``ucat_leq`` true for ``f**p``.

    Exact on trees; on other graphs this is the category over summands
    supported on vertices of the ``r``-fold refinement, an upper bound on the
    true value.
    """
    if p < 1:
        raise ValueError("p must be a positive integer")
    if p != 1:
        res = exact_ucat(g, f.power(p), 1, r, budget)
        return UcatResult(res.value, res.certificate, r, p, res.strong, res.exact,
                          res.warnings)
    budget = budget or Budget.from_env()
    h, fh = _prepare(g, f, r, budget)
    comps = []
    for within in component_masks(h, fh.support):
        got = _component_min(h, fh, within, budget.max_k - len(comps), budget)
        if got is None:
            raise BudgetExceeded("max_k", budget.max_k)
        comps.extend(got[1])
    dec = Decomposition(fh, "sum", tuple(comps))
    if not dec.verify():
        raise AssertionError("exact solver produced an invalid certificate")
    strong = bool(is_strong_decomposition(h, dec.functions()))
    tree = is_tree(g)
    warnings = () if tree else (f"upper bound at refinement {r}",)
    return UcatResult(len(comps), dec, r, 1, strong, tree, warnings)


def _strong_min(g, f, within, lo, hi, budget, hint=None):
    """``(k, components, complete)``: the smallest ``k`` in ``lo..hi`` with a
    strong decomposition among LP vertices, or ``None`` for ``k``. ``complete``
    is false when some vertex enumeration hit ``budget.max_bases``.

    ``hint`` (components already known to sum to ``f`` on ``within``) is
    tried first when its size is ``lo``.
    """
    part = _restricted(f, within)
    if is_unimodal(g, part):
        return 1, [make_component(part.values)], True
    if hint is not None and len(hint) == lo:
        if is_strong_decomposition(g, [c.function(g) for c in hint]):
            return lo, list(hint), True
    search = _Search(g, f, within, budget)
    complete = True
    for k in range(max(lo, 2), hi + 1):
        for family in search.families(k):
            fam = [search.cands[i] for i in family]
            sysm = build_system(f, fam, within)
            A_eq, b_eq, A_ub, b_ub = sysm.matrices()
            verts, done = lp.enumerate_vertices(A_eq, b_eq, A_ub, b_ub,
                                                n=len(sysm.variables),
                                                max_bases=budget.max_bases)
            complete &= done
            for x in verts:
                assignment = dict(zip(sysm.variables, x))
                comps = _components_from_assignment(g.vertex_count, fam, assignment)
                if is_strong_decomposition(g, [c.function(g) for c in comps]):
                    return len(comps), comps, complete
    return None, None, complete


def ucat_strong_leq(g: Graph, f: VertexFunction, k: int, budget: Budget | None = None) -> Decision:
    """Search for a strong decomposition with at most ``k`` summands.

    Candidates are the LP vertices of every feasible support multiset, as in
    :func:`exact_ucat_strong`. ``Decision.complete`` is false on a negative
    answer when a vertex enumeration was capped.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    budget = budget or Budget.from_env()
    h, fh = _prepare(g, f, 0, budget)
    parts = component_masks(h, fh.support)
    comps = []
    complete = True
    for i, within in enumerate(parts):
        cap = k - len(comps) - (len(parts) - i - 1)
        if cap < 1:
            return Decision(False, complete=complete)
        got, cs, done = _strong_min(h, fh, within, 1, cap, budget)
        complete &= done
        if got is None:
            return Decision(False, complete=complete)
        comps.extend(cs)
    dec = Decomposition(fh, "sum", tuple(comps))
    if not dec.verify() or not is_strong_decomposition(h, dec.functions()):
        raise AssertionError("strong search produced an invalid certificate")
    return Decision(True, dec)


def exact_ucat_strong(g: Graph, f: VertexFunction, p: int = 1,
                      budget: Budget | None = None) -> UcatResult:
    """Smallest ``k`` for which a strong decomposition is found.

    For each component of ``supp(f)`` the search starts at its plain
    category and scans every LP-feasible multiset of rooted supports, testing
    each vertex of the feasible polytope. When the result exceeds the plain
    category the lower side rests on that vertex search and a warning says so.
    """
    if p != 1:
        res = exact_ucat_strong(g, f.power(p), 1, budget)
        return UcatResult(res.value, res.certificate, 0, p, True, res.exact,
                          res.warnings, res.raised_above_weak)
    budget = budget or Budget.from_env()
    weak = exact_ucat(g, f, 1, 0, budget)
    h, fh = _prepare(g, f, 0, budget)
    comps = []
    raised = False
    complete = True
    for within in component_masks(h, fh.support):
        hint = [c for c in weak.certificate.components if c.support & within]
        lo = len(hint)
        k, cs, done = _strong_min(h, fh, within, lo, budget.max_k - len(comps), budget, hint)
        if k is None:
            raise BudgetExceeded("max_k", budget.max_k)
        if k > lo:
            raised = True
            complete &= done
        comps.extend(cs)
    dec = Decomposition(fh, "sum", tuple(comps))
    if not dec.verify() or not is_strong_decomposition(h, dec.functions()):
        raise AssertionError("strong search produced an invalid certificate")
    warnings = list(weak.warnings)
    if raised:
        warnings.append("strong search incomplete: lower bound rests on LP-vertex search")
        if not complete:
            warnings.append(f"vertex enumeration capped at {budget.max_bases} bases")
    return UcatResult(len(comps), dec, 0, 1, True, weak.exact and not raised,
                      tuple(warnings), raised)


# ------------------------------------------------------------ tree covers

def min_tree_cover(g: Graph, budget: Budget | None = None) -> tuple[int, list[int]]:
    """Fewest induced subtrees whose vertex sets cover ``g``.

    Their open stars then form a cover of the graph by contractible open sets.
    Covers may overlap. Returns ``(count, [support bitsets])``.
    """
    budget = budget or Budget.from_env()
    if g.vertex_count == 0:
        return 0, []
    if len(component_masks(g)) != 1:
        raise ValueError("graph must be connected")
    if g.vertex_count > budget.max_vertices:
        raise BudgetExceeded("max_vertices", budget.max_vertices, g.vertex_count)
    trees = maximal_induced_subtrees(g)
    full = g.full_mask
    for k in range(1, g.vertex_count + 1):
        for combo in combinations(trees, k):
            m = 0
            for t in combo:
                m |= t
            if m == full:
                return k, list(combo)
    raise AssertionError("singletons always cover")  # pragma: no cover
